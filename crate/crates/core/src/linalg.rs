//! Dense exact linear algebra over the coefficient rings.
//!
//! [`Mat`] is the general-purpose matrix (any [`Ring`], including the
//! polynomial ring, for which only +/* are available). [`FpMat`] is a lean
//! `u64` matrix over `F_p` for enumeration sweeps where millions of small
//! matrix products dominate the running time.

// indexed loops match the row/column arithmetic here
#![allow(clippy::needless_range_loop)]

use crate::coeffs::{Coeff, Ring};

/// Row-major dense matrix over a coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Coeff>,
}

impl Mat {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Mat::zeros(ring, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = ring.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Coeff>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        debug_assert!(rows.iter().all(|x| x.len() == c));
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn at(&self, i: usize, j: usize) -> &Coeff {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Coeff {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Coeff] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, ring: &Ring, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| ring.add(a, b))
            .collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, ring: &Ring, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| ring.sub(a, b))
            .collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, ring: &Ring, c: &Coeff) -> Mat {
        let data = self.data.iter().map(|a| ring.mul(a, c)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn matmul(&self, ring: &Ring, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let t = ring.mul(a, b);
                    let cur = out.at(i, j).clone();
                    *out.at_mut(i, j) = ring.add(&cur, &t);
                }
            }
        }
        out
    }

    pub fn apply(&self, ring: &Ring, v: &[Coeff]) -> Vec<Coeff> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = ring.add(&acc, &ring.mul(a, &v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, ring: &Ring, n: u64) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(ring, self.rows);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.matmul(ring, &base);
            }
            n >>= 1;
            if n > 0 {
                base = base.matmul(ring, &base);
            }
        }
        acc
    }

    /// Least `k >= 1` with `self^k = 0`, or `None` if not nilpotent.
    /// A nilpotent operator on an n-dimensional space has index at most n.
    pub fn nilpotency_index(&self, ring: &Ring) -> Option<usize> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if self.is_zero() {
            return Some(1);
        }
        let mut power = self.clone();
        for k in 2..=n {
            power = power.matmul(ring, self);
            if power.is_zero() {
                return Some(k);
            }
        }
        None
    }
}

/// Reduced row echelon form: pivots are 1, pivot columns cleared, zero rows
/// dropped, rows sorted by pivot column. Equal row spaces produce identical
/// output, which makes echelon bases canonical.
pub fn rref(ring: &Ring, rows: &mut Vec<Vec<Coeff>>) {
    assert!(ring.is_field(), "echelon form needs a field");
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(src) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let inv = ring.inv(&rows[pivot_row][col]).expect("nonzero pivot");
        for c in &mut rows[pivot_row] {
            *c = ring.mul(c, &inv);
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for j in 0..cols {
                    let t = ring.mul(&rows[pivot_row][j], &factor);
                    rows[r][j] = ring.sub(&rows[r][j], &t);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.retain(|r| r.iter().any(|c| !c.is_zero()));
}

/// One solution of `A x = b`, or `None` if the system is inconsistent.
pub fn solve_linear(ring: &Ring, a: &Mat, b: &[Coeff]) -> Option<Vec<Coeff>> {
    assert_eq!(a.rows, b.len());
    let mut rows: Vec<Vec<Coeff>> = (0..a.rows)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    rref(ring, &mut rows);
    let cols = a.cols;
    let mut solution = vec![ring.zero(); cols];
    for row in &rows {
        let pivot = row.iter().position(|c| !c.is_zero()).expect("no zero rows");
        if pivot == cols {
            return None; // 0 = 1 row
        }
        solution[pivot] = row[cols].clone();
    }
    Some(solution)
}

/// Canonical basis of the null space `{v : M v = 0}`.
pub fn null_space(ring: &Ring, m: &Mat) -> Vec<Vec<Coeff>> {
    let mut rows: Vec<Vec<Coeff>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    rref(ring, &mut rows);
    let cols = m.cols;
    let mut pivot_of_col = vec![None; cols];
    for (r, row) in rows.iter().enumerate() {
        if let Some(c) = row.iter().position(|x| !x.is_zero()) {
            pivot_of_col[c] = Some(r);
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![ring.zero(); cols];
        v[free] = ring.one();
        for (c, piv) in pivot_of_col.iter().enumerate() {
            if let Some(r) = piv {
                v[c] = ring.neg(&rows[*r][free]);
            }
        }
        basis.push(v);
    }
    basis
}

/// Dense matrix over `F_p` with `u64` entries, for hot enumeration loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    pub n: usize,
    pub p: u64,
    pub data: Vec<u64>,
}

impl FpMat {
    pub fn zeros(p: u64, n: usize) -> Self {
        FpMat { n, p, data: vec![0; n * n] }
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn from_mat_p(m: &Mat, p: u64) -> Self {
        assert_eq!(m.rows, m.cols);
        let data = (0..m.rows * m.cols)
            .map(|k| match &m.row(k / m.cols)[k % m.cols] {
                Coeff::Fp(v) => *v,
                _ => panic!("FpMat needs F_p entries"),
            })
            .collect();
        FpMat { n: m.rows, p, data }
    }

    pub fn matmul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let p = self.p;
        let mut out = FpMat::zeros(p, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                let row_b = &other.data[k * n..(k + 1) * n];
                let row_o = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    // entries < p <= 2^31, so a*b + acc stays well below 2^64
                    row_o[j] = (row_o[j] + a * row_b[j]) % p;
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &FpMat, c: u64) {
        let p = self.p;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = (*a + c * b) % p;
        }
    }

    /// Least `k >= 1` with `self^k = 0`, or `None` (index of a nilpotent
    /// operator is at most the carrier dimension).
    pub fn nilpotency_index(&self) -> Option<usize> {
        if self.is_zero() {
            return Some(1);
        }
        let mut power = self.clone();
        for k in 2..=self.n {
            power = power.matmul(self);
            if power.is_zero() {
                return Some(k);
            }
        }
        None
    }

    pub fn pow(&self, mut e: u64) -> FpMat {
        let mut acc = FpMat::zeros(self.p, self.n);
        for i in 0..self.n {
            acc.data[i * self.n + i] = 1;
        }
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
            }
        }
        acc
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let n = self.n;
        let p = self.p;
        (0..n)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..n {
                    acc = (acc + self.data[i * n + j] * (v[j] % p)) % p;
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(ring: &Ring, n: i64) -> Coeff {
        ring.from_i64(n)
    }

    #[test]
    fn rref_canonical_under_row_scrambling() {
        let r = Ring::Fp(5);
        let mut a = vec![
            vec![c(&r, 2), c(&r, 1), c(&r, 0)],
            vec![c(&r, 0), c(&r, 3), c(&r, 1)],
        ];
        let mut b = vec![
            vec![c(&r, 0, ), c(&r, 3), c(&r, 1)],
            vec![c(&r, 4), c(&r, 2), c(&r, 0)],
        ];
        rref(&r, &mut a);
        rref(&r, &mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn null_space_annihilates() {
        let r = Ring::Fp(7);
        let m = Mat::from_rows(vec![
            vec![c(&r, 1), c(&r, 2), c(&r, 3)],
            vec![c(&r, 2), c(&r, 4), c(&r, 6)],
        ]);
        let ns = null_space(&r, &m);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.apply(&r, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn single_nilpotent_index() {
        let r = Ring::Fp(3);
        let mut m = Mat::zeros(&r, 3, 3);
        *m.at_mut(0, 1) = r.one();
        *m.at_mut(1, 2) = r.one();
        assert_eq!(m.nilpotency_index(&r), Some(3));
        let fp = FpMat::from_mat_p(&m, 3);
        assert_eq!(fp.nilpotency_index(), Some(3));
    }

    #[test]
    fn non_nilpotent_detected() {
        let r = Ring::Rational;
        let m = Mat::identity(&r, 2);
        assert_eq!(m.nilpotency_index(&r), None);
    }

    #[test]
    fn fp_mat_matches_generic() {
        let r = Ring::Fp(3);
        let m = Mat::from_rows(vec![
            vec![c(&r, 1), c(&r, 2)],
            vec![c(&r, 2), c(&r, 1)],
        ]);
        let g = m.matmul(&r, &m);
        let f = FpMat::from_mat_p(&m, 3).matmul(&FpMat::from_mat_p(&m, 3));
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(g.at(i, j), &Coeff::Fp(f.at(i, j)));
            }
        }
    }
}
