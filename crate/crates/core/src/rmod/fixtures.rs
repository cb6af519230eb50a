//! Truncated domino models built from V-chains, and short exact sequences between them.
//!
//! A chain c has degree-0 basis e_0..e_{len0−1} with V e_t = e_{t+1}, F = 0, and degree-1 basis
//! f_0..f_{len1−1} with F f_{s+1} = f_s, F f_0 = 0, V = 0. A link (c', r) adds f^{c'}_{t−r} to
//! d(e^c_t). All modules here are F_q-vector spaces (annihilator p).

use crate::linalg::Mat;
use crate::zq::{Zq, ZqElem};

use super::RModuleExplicit;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub len0: usize,
    pub len1: usize,
    pub links: Vec<(usize, usize)>,
}

fn offsets(chains: &[Chain], degree1: bool) -> Vec<usize> {
    let mut acc = 0;
    chains
        .iter()
        .map(|c| {
            let o = acc;
            acc += if degree1 { c.len1 } else { c.len0 };
            o
        })
        .collect()
}

pub fn chain_module(ring: &Zq, chains: &[Chain]) -> RModuleExplicit {
    let o0 = offsets(chains, false);
    let o1 = offsets(chains, true);
    let r0: usize = chains.iter().map(|c| c.len0).sum();
    let r1: usize = chains.iter().map(|c| c.len1).sum();
    let one = ring.one();
    let mut v0 = Mat::zeros(ring, r0, r0);
    let mut f1 = Mat::zeros(ring, r1, r1);
    let mut d = Mat::zeros(ring, r1, r0);
    let mut b0: Vec<Vec<ZqElem>> = Vec::new();
    let mut b1: Vec<Vec<ZqElem>> = Vec::new();
    let mut targeted = vec![false; chains.len()];
    for (ci, c) in chains.iter().enumerate() {
        for t in 0..c.len0.saturating_sub(1) {
            v0.set(o0[ci] + t + 1, o0[ci] + t, one.clone());
        }
        for s in 1..c.len1 {
            f1.set(o1[ci] + s - 1, o1[ci] + s, one.clone());
        }
        for &(target, r) in &c.links {
            targeted[target] = true;
            for t in r..c.len0 {
                let s = t - r;
                if s < chains[target].len1 {
                    let row = o1[target] + s;
                    let col = o0[ci] + t;
                    let cur = d.get(row, col).clone();
                    d.set(row, col, ring.add(&cur, &one));
                }
            }
        }
        if !c.links.is_empty() && c.len0 > 0 {
            let mut g = vec![ring.zero(); r0];
            g[o0[ci] + c.len0 - 1] = one.clone();
            b0.push(g);
        }
    }
    for (ci, c) in chains.iter().enumerate() {
        if targeted[ci] && c.len1 > 0 {
            let mut g = vec![ring.zero(); r1];
            g[o1[ci] + c.len1 - 1] = one.clone();
            b1.push(g);
        }
    }
    RModuleExplicit::new(
        ring,
        0,
        vec![vec![1; r0], vec![1; r1]],
        vec![Mat::zeros(ring, r0, r0), f1],
        vec![v0, Mat::zeros(ring, r1, r1)],
        vec![d],
    )
    .expect("chain shapes are consistent")
    .with_boundary(vec![b0, b1])
    .expect("boundary shapes are consistent")
}

/// U_σ truncated at V-adic level m: d(e_t) = f_{t−σ}, so ker d = span(e_0..e_{σ−1}).
pub fn u_sigma(ring: &Zq, sigma: usize, m: usize) -> RModuleExplicit {
    assert!(m >= sigma + 1, "truncation level must exceed σ");
    chain_module(ring, &[Chain { len0: m, len1: m - sigma, links: vec![(0, sigma)] }])
}

/// U_σ with the bottom target class f_0 removed: the structural model of a Brauer twist.
pub fn u_sigma_twisted(ring: &Zq, sigma: usize, m: usize) -> RModuleExplicit {
    assert!(m >= sigma + 2, "truncation level must exceed σ + 1");
    chain_module(ring, &[Chain { len0: m, len1: m - sigma - 1, links: vec![(0, sigma + 1)] }])
}

/// Non-split extension of U_τ by U_σ, glued by d(e'_t) ∋ f_{t−ρ} with ρ > σ.
pub fn linked_extension(ring: &Zq, sigma: usize, tau: usize, rho: usize, m: usize) -> RModuleExplicit {
    assert!(rho > sigma && m > sigma + 1);
    let m2 = m + rho - sigma;
    chain_module(
        ring,
        &[
            Chain { len0: m, len1: m - sigma, links: vec![(0, sigma)] },
            Chain { len0: m2, len1: m2 - tau, links: vec![(1, tau), (0, rho)] },
        ],
    )
}

/// A short exact sequence 0 → L → M → N → 0 with its maps, one matrix per degree.
pub struct ShortExact {
    pub l: RModuleExplicit,
    pub m: RModuleExplicit,
    pub n: RModuleExplicit,
    pub iota: Vec<Mat>,
    pub pi: Vec<Mat>,
}

/// 0 → L → L ⊕ N → N → 0.
pub fn split_extension(l: &RModuleExplicit, n: &RModuleExplicit) -> ShortExact {
    let ring = l.ring().clone();
    let m = l.direct_sum(n).expect("same degree range");
    let mut iota = Vec::new();
    let mut pi = Vec::new();
    for i in m.degrees() {
        let (a, b) = (l.rank(i), n.rank(i));
        let mut inc = Mat::zeros(&ring, a + b, a);
        for k in 0..a {
            inc.set(k, k, ring.one());
        }
        let mut proj = Mat::zeros(&ring, b, a + b);
        for k in 0..b {
            proj.set(k, a + k, ring.one());
        }
        iota.push(inc);
        pi.push(proj);
    }
    ShortExact { l: l.clone(), m, n: n.clone(), iota, pi }
}

/// 0 → U_σ → U_{σ+1} → k[0] → 0 with e_t ↦ e_{t+1}; non-split since V is injective on U^0.
pub fn successor_extension(ring: &Zq, sigma: usize, m: usize) -> ShortExact {
    let l = u_sigma(ring, sigma, m - 1);
    let big = u_sigma(ring, sigma + 1, m);
    let point = RModuleExplicit::new(
        ring,
        0,
        vec![vec![1], vec![]],
        vec![Mat::zeros(ring, 1, 1), Mat::zeros(ring, 0, 0)],
        vec![Mat::zeros(ring, 1, 1), Mat::zeros(ring, 0, 0)],
        vec![Mat::zeros(ring, 0, 1)],
    )
    .expect("point module");
    let mut i0 = Mat::zeros(ring, m, m - 1);
    for t in 0..m - 1 {
        i0.set(t + 1, t, ring.one());
    }
    let r1 = l.rank(1);
    let i1 = Mat::identity(ring, r1);
    let mut p0 = Mat::zeros(ring, 1, m);
    p0.set(0, 0, ring.one());
    let p1 = Mat::zeros(ring, 0, big.rank(1));
    ShortExact { l, m: big, n: point, iota: vec![i0, i1], pi: vec![p0, p1] }
}

/// The fixture with FdV deliberately broken: d e = f with F = V = 0.
pub fn broken_fdv(ring: &Zq) -> RModuleExplicit {
    RModuleExplicit::new(
        ring,
        0,
        vec![vec![1], vec![1]],
        vec![Mat::zeros(ring, 1, 1), Mat::zeros(ring, 1, 1)],
        vec![Mat::zeros(ring, 1, 1), Mat::zeros(ring, 1, 1)],
        vec![Mat::identity(ring, 1)],
    )
    .expect("shapes")
}

/// A named module shipped as a JSON fixture.
pub struct Shipped {
    pub name: String,
    pub description: String,
    pub module: RModuleExplicit,
}

/// Every well-formed shipped fixture over the given ring: U_σ for σ = 1..=10 at two truncation
/// levels, their twisted variants, a linked extension and W itself.
pub fn shipped(ring: &Zq) -> Vec<Shipped> {
    let mut out = Vec::new();
    for sigma in 1..=10 {
        for m in [sigma + 2, sigma + 4] {
            out.push(Shipped {
                name: format!("u_sigma_{sigma:02}_m{m:02}"),
                description: format!("U_{sigma} truncated at level {m}"),
                module: u_sigma(ring, sigma, m),
            });
        }
        out.push(Shipped {
            name: format!("u_sigma_{sigma:02}_twisted"),
            description: format!("U_{sigma} without its bottom target class"),
            module: u_sigma_twisted(ring, sigma, sigma + 3),
        });
    }
    out.push(Shipped {
        name: "linked_extension".into(),
        description: "non-split extension of U_2 by U_1".into(),
        module: linked_extension(ring, 1, 2, 2, 5),
    });
    out.push(Shipped { name: "witt_ring".into(), description: "W_n in degree 0".into(), module: RModuleExplicit::witt_ring(ring) });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GroundField;
    use crate::rmod::t_additivity_check;

    fn ring() -> Zq {
        Zq::new(&GroundField::prime(3).unwrap(), 1)
    }

    #[test]
    fn successor_extension_is_additive() {
        let r = ring();
        for sigma in 1..=3 {
            let se = successor_extension(&r, sigma, sigma + 4);
            assert!(se.m.check_relations().unwrap().is_empty());
            assert!(t_additivity_check(&se.l, &se.m, &se.n, &se.iota, &se.pi).unwrap());
        }
    }

    #[test]
    fn split_sum_of_two_us() {
        let r = ring();
        let se = split_extension(&u_sigma(&r, 1, 3), &u_sigma(&r, 2, 5));
        assert!(t_additivity_check(&se.l, &se.m, &se.n, &se.iota, &se.pi).unwrap());
        assert_eq!(se.m.domino_number(0).unwrap(), 2);
    }

    #[test]
    fn twisted_model_has_one_more_kernel_class() {
        let r = ring();
        for sigma in 1..=5 {
            let t = u_sigma_twisted(&r, sigma, sigma + 4);
            assert!(t.check_relations().unwrap().is_empty());
            assert_eq!(t.d_kernel(0).unwrap().length, sigma as u32 + 1);
            assert_eq!(t.domino_number(0).unwrap(), 1);
        }
    }

    #[test]
    fn non_exact_maps_are_rejected() {
        let r = ring();
        let se = successor_extension(&r, 2, 6);
        let mut bad = se.pi.clone();
        bad[0] = Mat::zeros(&r, 1, se.m.rank(0));
        assert!(t_additivity_check(&se.l, &se.m, &se.n, &se.iota, &bad).is_err());
    }
}
