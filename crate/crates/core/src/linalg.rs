//! Matrices over Z_q/p^n: products, σ-twists, characteristic polynomials and
//! Smith normal form over the local ring (valuation pivoting).

use crate::zq::{Zq, ZqElem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<ZqElem>,
}

impl Mat {
    pub fn zeros(ring: &Zq, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Zq, n: usize) -> Mat {
        let mut m = Mat::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ZqElem>>, cols: usize) -> Mat {
        let nrows = rows.len();
        let entries: Vec<ZqElem> = rows.into_iter().flatten().collect();
        assert_eq!(entries.len(), nrows * cols, "ragged matrix");
        Mat { rows: nrows, cols, entries }
    }

    pub fn from_ints(ring: &Zq, rows: &[Vec<i64>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| ring.from_int(v)).collect()).collect(), cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &ZqElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ZqElem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<ZqElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(ring: &Zq, rows: usize, cols: &[Vec<ZqElem>]) -> Mat {
        let mut m = Mat::zeros(ring, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn mul(&self, ring: &Zq, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = ring.add(out.get(i, j), &ring.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, ring: &Zq, v: &[ZqElem]) -> Vec<ZqElem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(self.get(i, j), &v[j])))
            })
            .collect()
    }

    /// Entrywise σ^k.
    pub fn sigma_pow(&self, ring: &Zq, k: i64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| ring.sigma_pow(x, k)).collect(),
        }
    }

    pub fn block_diag(ring: &Zq, a: &Mat, b: &Mat) -> Mat {
        let mut m = Mat::zeros(ring, a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        m
    }

    pub fn hcat(ring: &Zq, a: &Mat, b: &Mat) -> Mat {
        assert_eq!(a.rows, b.rows, "row mismatch");
        let mut m = Mat::zeros(ring, a.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.set(i, j, a.get(i, j).clone());
            }
            for j in 0..b.cols {
                m.set(i, a.cols + j, b.get(i, j).clone());
            }
        }
        m
    }

    /// Characteristic polynomial det(T·I − A), coefficients from T^0 up to the leading 1.
    /// Division-free (Samuelson–Berkowitz), so valid over any commutative ring.
    pub fn charpoly(&self, ring: &Zq) -> Vec<ZqElem> {
        assert_eq!(self.rows, self.cols, "charpoly of a non-square matrix");
        let n = self.rows;
        // Coefficients highest degree first.
        let mut c = vec![ring.one()];
        for r in 0..n {
            let a = self.get(r, r);
            // t = (1, −a, −R S, −R M S, …, −R M^{r−1} S)
            let mut t = vec![ring.one(), ring.neg(a)];
            let mut s: Vec<ZqElem> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let rs = (0..r).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(self.get(r, j), &s[j])));
                t.push(ring.neg(&rs));
                s = (0..r)
                    .map(|i| (0..r).fold(ring.zero(), |acc, j| ring.add(&acc, &ring.mul(self.get(i, j), &s[j]))))
                    .collect();
            }
            let mut next = vec![ring.zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    if i >= j && i - j < t.len() {
                        *slot = ring.add(slot, &ring.mul(&t[i - j], cj));
                    }
                }
            }
            c = next;
        }
        c.reverse();
        c
    }
}

/// Smith form P·A·Q = D with D diagonal, D_kk = p^{v_k} for k < rank.
#[derive(Debug, Clone)]
pub struct Smith {
    pub p: Mat,
    pub p_inv: Mat,
    pub q: Mat,
    /// Valuations v_k of the nonzero diagonal entries, nondecreasing.
    pub diag: Vec<u32>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

pub fn smith(ring: &Zq, a: &Mat) -> Smith {
    let (r, c) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut p = Mat::identity(ring, r);
    let mut p_inv = Mat::identity(ring, r);
    let mut q = Mat::identity(ring, c);
    let mut diag = Vec::new();
    for k in 0..r.min(c) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..r {
            for j in k..c {
                if let Some(v) = ring.valuation(m.get(i, j)) {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        swap_rows(&mut m, k, bi);
        swap_rows(&mut p, k, bi);
        swap_cols(&mut p_inv, k, bi);
        swap_cols(&mut m, k, bj);
        swap_cols(&mut q, k, bj);
        let unit = ring.div_p_pow(m.get(k, k), v);
        let u_inv = ring.inverse(&unit).expect("pivot unit");
        // Normalize the pivot to exactly p^v.
        scale_row(ring, &mut m, k, &u_inv);
        scale_row(ring, &mut p, k, &u_inv);
        scale_col(ring, &mut p_inv, k, &unit);
        for i in k + 1..r {
            if ring.is_zero(m.get(i, k)) {
                continue;
            }
            let f = ring.div_p_pow(m.get(i, k), v);
            add_row_multiple(ring, &mut m, i, k, &ring.neg(&f));
            add_row_multiple(ring, &mut p, i, k, &ring.neg(&f));
            add_col_multiple(ring, &mut p_inv, k, i, &f);
        }
        for j in k + 1..c {
            if ring.is_zero(m.get(k, j)) {
                continue;
            }
            let f = ring.div_p_pow(m.get(k, j), v);
            add_col_multiple(ring, &mut m, j, k, &ring.neg(&f));
            add_col_multiple(ring, &mut q, j, k, &ring.neg(&f));
        }
        diag.push(v);
    }
    Smith { p, p_inv, q, diag }
}

fn swap_rows(m: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        m.entries.swap(a * m.cols + j, b * m.cols + j);
    }
}

fn swap_cols(m: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        m.entries.swap(i * m.cols + a, i * m.cols + b);
    }
}

fn scale_row(ring: &Zq, m: &mut Mat, i: usize, s: &ZqElem) {
    for j in 0..m.cols {
        let v = ring.mul(m.get(i, j), s);
        m.set(i, j, v);
    }
}

fn scale_col(ring: &Zq, m: &mut Mat, j: usize, s: &ZqElem) {
    for i in 0..m.rows {
        let v = ring.mul(m.get(i, j), s);
        m.set(i, j, v);
    }
}

/// row_dst += f · row_src
fn add_row_multiple(ring: &Zq, m: &mut Mat, dst: usize, src: usize, f: &ZqElem) {
    for j in 0..m.cols {
        let v = ring.add(m.get(dst, j), &ring.mul(f, m.get(src, j)));
        m.set(dst, j, v);
    }
}

/// col_dst += f · col_src
fn add_col_multiple(ring: &Zq, m: &mut Mat, dst: usize, src: usize, f: &ZqElem) {
    for i in 0..m.rows {
        let v = ring.add(m.get(i, dst), &ring.mul(f, m.get(i, src)));
        m.set(i, dst, v);
    }
}

/// Generators of the kernel of A: W_n^cols → W_n^rows.
pub fn kernel(ring: &Zq, a: &Mat) -> Vec<Vec<ZqElem>> {
    let s = smith(ring, a);
    let n = ring.precision();
    let mut gens = Vec::new();
    for k in 0..a.cols {
        let scale = match s.diag.get(k) {
            Some(&0) => continue,
            Some(&v) => n - v,
            None => 0,
        };
        let col = s.q.column(k);
        gens.push(col.iter().map(|x| ring.mul_p_pow(x, scale)).collect());
    }
    gens
}

/// A solution x of A·x = b, if one exists.
pub fn solve(ring: &Zq, a: &Mat, b: &[ZqElem]) -> Option<Vec<ZqElem>> {
    let s = smith(ring, a);
    let pb = s.p.apply(ring, b);
    let mut y = vec![ring.zero(); a.cols];
    for (k, rhs) in pb.iter().enumerate() {
        match s.diag.get(k) {
            Some(&v) => {
                if ring.valuation(rhs).map_or(false, |w| w < v) {
                    return None;
                }
                y[k] = ring.div_p_pow(rhs, v);
            }
            None => {
                if !ring.is_zero(rhs) {
                    return None;
                }
            }
        }
    }
    Some(s.q.apply(ring, &y))
}

/// Length of the cokernel W_n^rows / A·W_n^cols.
pub fn coker_length(ring: &Zq, a: &Mat) -> u32 {
    let s = smith(ring, a);
    let n = ring.precision();
    (0..a.rows).map(|k| s.diag.get(k).copied().unwrap_or(n)).sum()
}

pub fn inverse(ring: &Zq, a: &Mat) -> Option<Mat> {
    if a.rows != a.cols {
        return None;
    }
    let s = smith(ring, a);
    if s.rank() != a.rows || s.diag.iter().any(|&v| v > 0) {
        return None;
    }
    Some(s.q.mul(ring, &s.p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GroundField;

    fn det_bruteforce(ring: &Zq, m: &Mat) -> ZqElem {
        let n = m.rows;
        if n == 0 {
            return ring.one();
        }
        let mut acc = ring.zero();
        for j in 0..n {
            let minor = Mat::from_rows(
                (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| m.get(i, c).clone()).collect()).collect(),
                n - 1,
            );
            let term = ring.mul(m.get(0, j), &det_bruteforce(ring, &minor));
            acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
        }
        acc
    }

    fn sample(ring: &Zq, n: usize, seed: u64) -> Mat {
        let mut s = seed;
        let mut rows = Vec::new();
        for _ in 0..n {
            let mut row = Vec::new();
            for _ in 0..n {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                row.push(((s >> 33) % 200) as i64 - 100);
            }
            rows.push(row);
        }
        Mat::from_ints(ring, &rows)
    }

    #[test]
    fn charpoly_matches_cofactor_expansion() {
        let f = GroundField::prime(3).unwrap();
        let ring = Zq::new(&f, 5);
        for seed in 0..20 {
            let n = 1 + (seed as usize % 4);
            let m = sample(&ring, n, seed);
            let cp = m.charpoly(&ring);
            assert_eq!(cp.len(), n + 1);
            assert_eq!(cp[n], ring.one());
            for tval in 0..4i64 {
                let mut tm = Mat::identity(&ring, n);
                for i in 0..n {
                    for j in 0..n {
                        let diag = if i == j { ring.from_int(tval) } else { ring.zero() };
                        tm.set(i, j, ring.sub(&diag, m.get(i, j)));
                    }
                }
                let t = ring.from_int(tval);
                let eval = cp.iter().rev().fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, &t), c));
                assert_eq!(eval, det_bruteforce(&ring, &tm));
            }
        }
    }

    #[test]
    fn smith_reconstructs_diagonal() {
        let f = GroundField::new(2, 2).unwrap();
        let ring = Zq::new(&f, 4);
        let a = Mat::from_ints(&ring, &[vec![2, 4, 6], vec![4, 8, 2], vec![0, 2, 8]]);
        let s = smith(&ring, &a);
        let d = s.p.mul(&ring, &a).mul(&ring, &s.q);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j && i < s.rank() {
                    ring.mul_p_pow(&ring.one(), s.diag[i])
                } else {
                    ring.zero()
                };
                assert_eq!(*d.get(i, j), expected);
            }
        }
        assert_eq!(s.p.mul(&ring, &s.p_inv), Mat::identity(&ring, 3));
        assert_eq!(s.rank(), 3);
        assert_eq!(s.diag.iter().sum::<u32>(), 3);
    }

    #[test]
    fn kernel_and_solve_over_z_mod_27() {
        let f = GroundField::prime(3).unwrap();
        let ring = Zq::new(&f, 3);
        let a = Mat::from_ints(&ring, &[vec![3, 0], vec![0, 9]]);
        let ker = kernel(&ring, &a);
        for v in &ker {
            assert!(a.apply(&ring, v).iter().all(|x| ring.is_zero(x)));
        }
        // {x : 3x = 0} × {y : 9y = 0} has 3·9 elements
        let mut span = std::collections::BTreeSet::new();
        for c0 in 0..27 {
            for c1 in 0..27 {
                let v: Vec<ZqElem> = (0..2)
                    .map(|i| ring.add(&ring.scale_int(&ker[0][i], c0), &ring.scale_int(&ker[1][i], c1)))
                    .collect();
                span.insert(v);
            }
        }
        assert_eq!(span.len(), 27);
        let b = vec![ring.from_int(6), ring.from_int(18)];
        let x = solve(&ring, &a, &b).unwrap();
        assert_eq!(a.apply(&ring, &x), b);
        assert!(solve(&ring, &a, &[ring.from_int(1), ring.zero()]).is_none());
    }

    #[test]
    fn inverse_of_unimodular() {
        let f = GroundField::prime(5).unwrap();
        let ring = Zq::new(&f, 3);
        let a = Mat::from_ints(&ring, &[vec![1, 5, 2], vec![0, 3, 1], vec![7, 0, 1]]);
        let inv = inverse(&ring, &a).unwrap();
        assert_eq!(a.mul(&ring, &inv), Mat::identity(&ring, 3));
        let sing = Mat::from_ints(&ring, &[vec![5, 0], vec![0, 1]]);
        assert!(inverse(&ring, &sing).is_none());
    }
}
