use proptest::prelude::*;

use hwinv::field::GroundField;
use hwinv::isocrystal::{companion, newton_from_charpoly, newton_slopes, FrobeniusMatrix};
use hwinv::linalg::{inverse, Mat};
use hwinv::rmod::fixtures::{chain_module, split_extension, successor_extension, Chain};
use hwinv::rmod::t_additivity_check;
use hwinv::witt::{WittRing, WittVector};
use hwinv::zq::{int_valuation, Zq};

fn witt(p: u64, a: u32, n: u32) -> WittRing {
    WittRing::new(&GroundField::new(p, a).unwrap(), n)
}

fn vector(ring: &WittRing, seeds: &[u32]) -> WittVector {
    let q = ring.field().size();
    let coords: Vec<_> = seeds.iter().take(ring.precision() as usize).map(|&s| ring.field().from_index(s % q)).collect();
    ring.vector(coords).unwrap()
}

fn ghost_mod(ring: &WittRing, x: &WittVector) -> Vec<Vec<u64>> {
    let zq = ring.zq();
    x.ghost().iter().enumerate().map(|(i, w)| zq.with_precision(i as u32 + 1).reduce_from(w).0).collect()
}

fn params() -> impl Strategy<Value = (u64, u32, u32)> {
    (prop_oneof![Just(2u64), Just(3), Just(5)], 1u32..=2, 1u32..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn witt_ring_axioms((p, a, n) in params(), s in proptest::collection::vec(any::<u32>(), 12)) {
        let r = witt(p, a, n);
        let (x, y, z) = (vector(&r, &s[0..4]), vector(&r, &s[4..8]), vector(&r, &s[8..12]));
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
        prop_assert_eq!(x.add(&x.neg()).unwrap(), r.zero());
        prop_assert_eq!(x.mul(&r.one()).unwrap(), x.clone());
        prop_assert_eq!(x.frobenius().verschiebung(), x.mul_by_p());
        prop_assert_eq!(x.verschiebung().frobenius(), x.mul_by_p());
    }

    #[test]
    fn ghost_components_are_ring_maps((p, n) in (prop_oneof![Just(2u64), Just(3), Just(5)], 1u32..=4),
                                      s in proptest::collection::vec(any::<u32>(), 8)) {
        let r = witt(p, 1, n);
        let zq = r.zq();
        let (x, y) = (vector(&r, &s[0..4]), vector(&r, &s[4..8]));
        let (gx, gy) = (x.ghost(), y.ghost());
        let sum: Vec<_> = gx.iter().zip(&gy).map(|(a, b)| zq.add(a, b)).collect();
        let prod: Vec<_> = gx.iter().zip(&gy).map(|(a, b)| zq.mul(a, b)).collect();
        let trunc = |v: &[hwinv::zq::ZqElem]| -> Vec<Vec<u64>> {
            v.iter().enumerate().map(|(i, w)| zq.with_precision(i as u32 + 1).reduce_from(w).0).collect()
        };
        prop_assert_eq!(ghost_mod(&r, &x.add(&y).unwrap()), trunc(&sum));
        prop_assert_eq!(ghost_mod(&r, &x.mul(&y).unwrap()), trunc(&prod));
    }

    #[test]
    fn companion_slopes_match_charpoly(p in prop_oneof![Just(2u64), Just(3), Just(5)],
                                       tail in proptest::collection::vec(-60i64..=60, 1..=6),
                                       c0 in prop_oneof![-200i64..=-1, 1i64..=200]) {
        let mut coeffs = vec![1i64];
        coeffs.extend(tail);
        *coeffs.last_mut().unwrap() = c0;
        let n = int_valuation(c0.unsigned_abs(), p) + 2;
        let ring = Zq::new(&GroundField::prime(p).unwrap(), n);
        let m = FrobeniusMatrix::new(&ring, companion(&ring, &coeffs), 1).unwrap();
        prop_assert_eq!(newton_slopes(&m).unwrap(), newton_from_charpoly(&coeffs, p).unwrap());
    }

    #[test]
    fn newton_additive_and_conjugation_invariant(
        p in prop_oneof![Just(2u64), Just(3), Just(5)],
        a in 1u32..=2,
        c1 in proptest::collection::vec(-20i64..=20, 2..=3),
        c2 in proptest::collection::vec(-20i64..=20, 2..=3),
        u in proptest::collection::vec(-9i64..=9, 36),
    ) {
        let n = 3;
        let ring = Zq::new(&GroundField::new(p, a).unwrap(), n);
        let poly = |c: &[i64]| {
            let mut v = vec![1i64];
            v.extend_from_slice(c);
            let last = v.len() - 1;
            if v[last] % p as i64 == 0 {
                v[last] += 1;
            }
            v
        };
        let (p1, p2) = (poly(&c1), poly(&c2));
        let a1 = FrobeniusMatrix::new(&ring, companion(&ring, &p1), 1).unwrap();
        let a2 = FrobeniusMatrix::new(&ring, companion(&ring, &p2), 1).unwrap();
        let s1 = newton_slopes(&a1).unwrap();
        let s2 = newton_slopes(&a2).unwrap();
        let sum = a1.block_diag(&a2);
        prop_assert_eq!(newton_slopes(&sum).unwrap(), s1.union(&s2));
        let k = sum.rank();
        let mut lower = Mat::identity(&ring, k);
        let mut upper = Mat::identity(&ring, k);
        for i in 0..k {
            for j in 0..i {
                lower.set(i, j, ring.from_int(u[i * 6 + j]));
                upper.set(j, i, ring.from_int(u[j * 6 + i]));
            }
        }
        let g = lower.mul(&ring, &upper);
        let g_inv = inverse(&ring, &g).unwrap();
        prop_assert_eq!(newton_slopes(&sum.conjugate(&g, &g_inv)).unwrap(), newton_slopes(&sum).unwrap());
    }
}

fn chain_strategy() -> impl Strategy<Value = Vec<Chain>> {
    proptest::collection::vec((1usize..=4, 3usize..=7, proptest::bool::ANY), 1..=2).prop_map(|specs| {
        specs
            .into_iter()
            .enumerate()
            .map(|(idx, (sigma, extra, linked))| {
                let len0 = sigma + extra;
                if linked {
                    Chain { len0, len1: len0 - sigma, links: vec![(idx, sigma)] }
                } else {
                    Chain { len0, len1: 0, links: vec![] }
                }
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn domino_numbers_add_on_split_sequences(left in chain_strategy(), right in chain_strategy()) {
        let ring = Zq::new(&GroundField::prime(3).unwrap(), 1);
        let l = chain_module(&ring, &left);
        let r = chain_module(&ring, &right);
        prop_assert!(l.check_relations().unwrap().is_empty());
        let se = split_extension(&l, &r);
        prop_assert!(t_additivity_check(&se.l, &se.m, &se.n, &se.iota, &se.pi).unwrap());
        prop_assert_eq!(se.m.domino_number(0).unwrap(), l.domino_number(0).unwrap() + r.domino_number(0).unwrap());
    }

    #[test]
    fn successor_sequences_are_additive(sigma in 1usize..=6, extra in 3usize..=6) {
        let ring = Zq::new(&GroundField::prime(2).unwrap(), 1);
        let se = successor_extension(&ring, sigma, sigma + extra);
        prop_assert!(t_additivity_check(&se.l, &se.m, &se.n, &se.iota, &se.pi).unwrap());
    }
}
