//! Exact subspace calculus over a Lie superalgebra (and, since an echelon
//! row space does not care where its ambient space came from, over the
//! enveloping algebra carrier as well).
//!
//! Subspaces are kept in reduced row echelon form, so equal subspaces have
//! identical representations. With the canonical all-even-before-all-odd
//! coordinate order, a subspace is closed under parity projections exactly
//! when every echelon row is homogeneous, which makes the homogeneity check
//! trivial.

use thiserror::Error;

use crate::coeffs::{Coeff, Ring};
use crate::linalg::{null_space, rref, Mat};
use crate::lsa::{GradedVector, LieSuperalgebra, LsaError, Parity};

#[derive(Debug, Error)]
pub enum SubspaceError {
    #[error("operators act on different carrier dimensions")]
    DimensionMismatch,
    #[error("enumeration needs {needed} elements, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Lsa(#[from] LsaError),
}

/// How a positive result was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    /// Every element of the space was checked.
    Exact,
    /// Only echelon basis elements were checked, under a hypothesis that
    /// makes this sufficient; callers must surface the weaker label.
    BasisCertified,
    /// Holds for structural reasons without computation.
    Assumed,
}

impl Certainty {
    pub fn as_str(self) -> &'static str {
        match self {
            Certainty::Exact => "exact",
            Certainty::BasisCertified => "basis-certified",
            Certainty::Assumed => "assumed",
        }
    }
}

/// Row space in canonical reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    rows: Vec<Vec<Coeff>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn full(ring: &Ring, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut r = vec![ring.zero(); ambient];
                r[i] = ring.one();
                r
            })
            .collect();
        Subspace { ambient, rows }
    }

    pub fn from_rows(ring: &Ring, ambient: usize, mut rows: Vec<Vec<Coeff>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        rref(ring, &mut rows);
        Subspace { ambient, rows }
    }

    pub fn from_vectors(ring: &Ring, ambient: usize, vecs: &[GradedVector]) -> Self {
        let rows = vecs.iter().map(|v| v.to_dense(ring, ambient)).collect();
        Self::from_rows(ring, ambient, rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Coeff>] {
        &self.rows
    }

    pub fn basis_vectors(&self) -> Vec<GradedVector> {
        self.rows.iter().map(|r| GradedVector::from_dense(r)).collect()
    }

    pub fn sum(&self, ring: &Ring, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Subspace::from_rows(ring, self.ambient, rows)
    }

    pub fn contains(&self, ring: &Ring, v: &[Coeff]) -> bool {
        // reduce v against the echelon rows; membership iff the residue is 0
        let mut v = v.to_vec();
        for row in &self.rows {
            let pivot = row.iter().position(|c| !c.is_zero()).expect("no zero rows");
            if !v[pivot].is_zero() {
                let factor = v[pivot].clone();
                for j in 0..self.ambient {
                    let t = ring.mul(&row[j], &factor);
                    v[j] = ring.sub(&v[j], &t);
                }
            }
        }
        v.iter().all(|c| c.is_zero())
    }

    pub fn contains_vector(&self, ring: &Ring, v: &GradedVector) -> bool {
        self.contains(ring, &v.to_dense(ring, self.ambient))
    }

    pub fn contains_subspace(&self, ring: &Ring, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(ring, r))
    }

    /// All echelon rows homogeneous (even-block / odd-block support only).
    pub fn is_homogeneous(&self, n_even: usize) -> bool {
        self.rows.iter().all(|r| {
            let has_even = r[..n_even.min(self.ambient)].iter().any(|c| !c.is_zero());
            let has_odd = r[n_even.min(self.ambient)..].iter().any(|c| !c.is_zero());
            !(has_even && has_odd)
        })
    }

    /// Rows supported on one parity block (meaningful for homogeneous spaces).
    pub fn parity_part(&self, n_even: usize, parity: Parity) -> Subspace {
        let rows = self
            .rows
            .iter()
            .filter(|r| {
                let has_even = r[..n_even].iter().any(|c| !c.is_zero());
                if parity == Parity::Even {
                    has_even
                } else {
                    !has_even && r.iter().any(|c| !c.is_zero())
                }
            })
            .cloned()
            .collect();
        Subspace { ambient: self.ambient, rows }
    }
}

/// Iterator over all coordinate vectors of `F_p^dim` (odometer order).
pub struct FpVectors {
    p: u64,
    coords: Vec<u64>,
    done: bool,
}

impl FpVectors {
    pub fn new(dim: usize, p: u64) -> Self {
        FpVectors { p, coords: vec![0; dim], done: false }
    }
}

impl Iterator for FpVectors {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.coords.clone();
        let mut i = 0;
        loop {
            if i == self.coords.len() {
                self.done = true;
                break;
            }
            self.coords[i] += 1;
            if self.coords[i] < self.p {
                break;
            }
            self.coords[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// Linear combination of subspace rows with `F_p` coordinates.
fn combine(ring: &Ring, s: &Subspace, coords: &[u64]) -> GradedVector {
    let mut out = GradedVector::zero();
    for (c, row) in coords.iter().zip(s.rows()) {
        if *c != 0 {
            out.add_scaled(ring, &GradedVector::from_dense(row), &Coeff::Fp(*c));
        }
    }
    out
}

/// Span of `(s, t)` over echelon bases of S and T.
pub fn bracket_space(l: &LieSuperalgebra, s: &Subspace, t: &Subspace) -> Subspace {
    let mut rows = Vec::new();
    for sv in s.basis_vectors() {
        for tv in t.basis_vectors() {
            let b = l.bracket(&sv, &tv);
            if !b.is_zero() {
                rows.push(b.to_dense(&l.ring, l.dim()));
            }
        }
    }
    Subspace::from_rows(&l.ring, l.dim(), rows)
}

pub fn full_space(l: &LieSuperalgebra) -> Subspace {
    Subspace::full(&l.ring, l.dim())
}

pub fn even_part(l: &LieSuperalgebra) -> Subspace {
    let vecs: Vec<GradedVector> = (0..l.n_even)
        .map(|i| GradedVector::unit(&l.ring, i))
        .collect();
    Subspace::from_vectors(&l.ring, l.dim(), &vecs)
}

pub fn odd_part(l: &LieSuperalgebra) -> Subspace {
    let vecs: Vec<GradedVector> = (l.n_even..l.dim())
        .map(|i| GradedVector::unit(&l.ring, i))
        .collect();
    Subspace::from_vectors(&l.ring, l.dim(), &vecs)
}

pub fn derived_subalgebra(l: &LieSuperalgebra) -> Subspace {
    let full = full_space(l);
    bracket_space(l, &full, &full)
}

/// A descending chain of subspaces with its stabilization data.
#[derive(Clone, Debug)]
pub struct SeriesReport {
    /// Strictly decreasing until the final entry; nothing stored past
    /// stabilization.
    pub chain: Vec<Subspace>,
    /// 1-based index of the final (stable) entry.
    pub stabilized_at: usize,
    pub terminal_zero: bool,
    /// Nilpotency class when the series reaches zero.
    pub class: Option<usize>,
}

impl SeriesReport {
    pub fn dims(&self) -> Vec<usize> {
        self.chain.iter().map(|s| s.dim()).collect()
    }
}

fn descending_series(
    l: &LieSuperalgebra,
    step: impl Fn(&Subspace) -> Subspace,
) -> SeriesReport {
    let mut chain = vec![full_space(l)];
    loop {
        let last = chain.last().unwrap();
        if last.is_zero() {
            let len = chain.len();
            return SeriesReport {
                stabilized_at: len,
                terminal_zero: true,
                class: Some(len - 1),
                chain,
            };
        }
        let next = step(last);
        if &next == last {
            let len = chain.len();
            return SeriesReport { stabilized_at: len, terminal_zero: false, class: None, chain };
        }
        chain.push(next);
    }
}

/// Lower central series: g_1 = L, g_{k+1} = (L, g_k). Terminal zero is
/// equivalent to nilpotency; the class is the least c with g_{c+1} = 0.
pub fn lower_central_series(l: &LieSuperalgebra) -> SeriesReport {
    let full = full_space(l);
    descending_series(l, |last| bracket_space(l, &full, last))
}

/// Derived series: d_1 = L, d_{k+1} = (d_k, d_k).
pub fn derived_series(l: &LieSuperalgebra) -> SeriesReport {
    descending_series(l, |last| bracket_space(l, last, last))
}

/// Joint kernel of all basis adjoints: `{v : (b, v) = 0 for all b}`.
pub fn center(l: &LieSuperalgebra) -> Subspace {
    let n = l.dim();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        let ad = l.ad_operator(&GradedVector::unit(&l.ring, i));
        for r in 0..n {
            rows.push(ad.row(r).to_vec());
        }
    }
    let stacked = Mat::from_rows(rows);
    let kernel = null_space(&l.ring, &stacked);
    Subspace::from_rows(&l.ring, n, kernel)
}

/// Result of the uniform ad-nilpotency decision on an even subspace.
#[derive(Clone, Debug)]
pub enum AdNilpotency {
    /// Minimal n with `(ad x)^n = 0` for every x in the space (all elements
    /// enumerated).
    Exact { n: usize },
    /// Upper bound from the commuting-basis shortcut: when `(S,S) = 0` the
    /// basis adjoints commute, so nilpotency of basis adjoints bounds the
    /// index of every element.
    Bounded { n: usize },
    NotNilpotent { witness: GradedVector },
    Unknown { reason: String },
}

/// Decide whether there is a uniform n with `(ad x)^n = 0` for all `x` in S.
pub fn uniform_ad_nilpotency(
    l: &LieSuperalgebra,
    s: &Subspace,
    budget: u64,
) -> AdNilpotency {
    if s.is_zero() {
        return AdNilpotency::Exact { n: 1 };
    }
    let p = l.characteristic;
    if p > 0 {
        let needed = (p as u128).checked_pow(s.dim() as u32);
        if let Some(needed) = needed {
            if needed <= budget as u128 {
                let mut max_index = 1usize;
                for coords in FpVectors::new(s.dim(), p) {
                    // ad(c x) and ad(x) have equal nilpotency index for
                    // nonzero scalars c, so only monic combinations matter.
                    match coords.iter().find(|&&c| c != 0) {
                        None => continue,
                        Some(&first) if first != 1 => continue,
                        _ => {}
                    }
                    let x = combine(&l.ring, s, &coords);
                    let ad = l.ad_operator(&x);
                    match ad.nilpotency_index(&l.ring) {
                        Some(k) => max_index = max_index.max(k),
                        None => return AdNilpotency::NotNilpotent { witness: x },
                    }
                }
                return AdNilpotency::Exact { n: max_index };
            }
        }
    }
    // Shortcut: abelian S has pairwise commuting adjoints.
    if bracket_space(l, s, s).is_zero() {
        let mut bound = 1usize;
        for row in s.basis_vectors() {
            let ad = l.ad_operator(&row);
            match ad.nilpotency_index(&l.ring) {
                Some(k) => bound += k - 1,
                None => return AdNilpotency::NotNilpotent { witness: row },
            }
        }
        return AdNilpotency::Bounded { n: bound };
    }
    AdNilpotency::Unknown {
        reason: if p == 0 {
            "characteristic 0 and (S,S) != 0: no enumeration possible".into()
        } else {
            format!("enumeration of p^{} elements exceeds budget {budget}", s.dim())
        },
    }
}

/// Least t such that every product of t operators from the generated
/// (non-unital) associative algebra vanishes, or `None` if the power chain
/// stabilizes away from zero.
///
/// This is the executable form of the weakly-closed-set nilpotency theorem:
/// homogeneous adjoints form a weakly closed set, and if each is nilpotent
/// the algebra they generate is associative nilpotent, so the chain must
/// reach zero.
pub fn associative_envelope_nilpotency(
    ring: &Ring,
    operators: &[Mat],
) -> Result<Option<usize>, SubspaceError> {
    if operators.is_empty() {
        return Ok(Some(1));
    }
    let n = operators[0].rows;
    if operators.iter().any(|m| m.rows != n || m.cols != n) {
        return Err(SubspaceError::DimensionMismatch);
    }
    let ambient = n * n;
    let flatten = |m: &Mat| -> Vec<Coeff> {
        (0..n).flat_map(|i| m.row(i).to_vec()).collect()
    };
    let unflatten = |r: &[Coeff]| -> Mat {
        Mat::from_rows((0..n).map(|i| r[i * n..(i + 1) * n].to_vec()).collect())
    };
    // Closure of span(operators) under left multiplication by generators
    // yields the span of all products.
    let mut algebra = Subspace::from_rows(ring, ambient, operators.iter().map(flatten).collect());
    loop {
        let mut rows = algebra.rows().to_vec();
        for g in operators {
            for r in algebra.rows() {
                rows.push(flatten(&g.matmul(ring, &unflatten(r))));
            }
        }
        let bigger = Subspace::from_rows(ring, ambient, rows);
        if bigger.dim() == algebra.dim() {
            break;
        }
        algebra = bigger;
    }
    // Power chain A, A^2, A^3, ... is decreasing; zero <=> nilpotent.
    let mut power = algebra.clone();
    let mut t = 1usize;
    loop {
        if power.is_zero() {
            return Ok(Some(t));
        }
        let mut rows = Vec::new();
        for a in algebra.rows() {
            let am = unflatten(a);
            for b in power.rows() {
                rows.push(flatten(&am.matmul(ring, &unflatten(b))));
            }
        }
        let next = Subspace::from_rows(ring, ambient, rows);
        if next == power {
            return Ok(None);
        }
        power = next;
        t += 1;
    }
}

/// Orbit of one even element under the p-map.
#[derive(Clone, Debug)]
pub enum POrbit {
    /// `x^{[p]^n} = 0`, with minimal n.
    Nil { exponent: usize },
    /// The orbit stays nonzero past the dimension cap. Over the prime field
    /// the extended p-map is linear on the abelian subalgebra generated by
    /// the orbit, so dim(L) steps without reaching zero certify
    /// non-nilpotency.
    NotNil { stuck_at: GradedVector },
}

pub fn element_p_nilpotent(
    l: &LieSuperalgebra,
    v: &GradedVector,
) -> Result<POrbit, LsaError> {
    let mut w = v.clone();
    for step in 0..=l.dim() {
        if w.is_zero() {
            return Ok(POrbit::Nil { exponent: step });
        }
        if step == l.dim() {
            break;
        }
        w = l.p_map_extend(&w)?;
    }
    Ok(POrbit::NotNil { stuck_at: w })
}

#[derive(Clone, Debug)]
pub enum PNilpotency {
    Yes { exponent: usize, certainty: Certainty },
    No { witness: GradedVector },
}

/// Uniform p-nilpotency of an even restricted-closed subspace: is there an n
/// with `x^{[p]^n} = 0` for every x in S?
///
/// Exact mode enumerates S over `F_p`. When that exceeds the budget and S is
/// an ideal of a nilpotent algebra, basis mode checks echelon rows only and
/// the positive answer is labeled basis-certified.
pub fn is_p_nilpotent(
    l: &LieSuperalgebra,
    s: &Subspace,
    budget: u64,
) -> Result<PNilpotency, SubspaceError> {
    if !l.restricted {
        return Err(SubspaceError::Lsa(LsaError::NotRestricted));
    }
    if s.is_zero() {
        return Ok(PNilpotency::Yes { exponent: 0, certainty: Certainty::Exact });
    }
    let p = l.characteristic;
    let needed = (p as u128)
        .checked_pow(s.dim() as u32)
        .unwrap_or(u128::MAX);
    if needed <= budget as u128 {
        let mut max_exp = 0usize;
        for coords in FpVectors::new(s.dim(), p) {
            // p-nilpotency is invariant under scaling, so monic suffices
            match coords.iter().find(|&&c| c != 0) {
                None => continue,
                Some(&first) if first != 1 => continue,
                _ => {}
            }
            let x = combine(&l.ring, s, &coords);
            match element_p_nilpotent(l, &x)? {
                POrbit::Nil { exponent } => max_exp = max_exp.max(exponent),
                POrbit::NotNil { .. } => return Ok(PNilpotency::No { witness: x }),
            }
        }
        return Ok(PNilpotency::Yes { exponent: max_exp, certainty: Certainty::Exact });
    }
    let nilpotent = lower_central_series(l).terminal_zero;
    let ideal = bracket_space(l, &full_space(l), s)
        .rows()
        .iter()
        .all(|r| s.contains(&l.ring, r));
    if nilpotent && ideal {
        let mut max_exp = 0usize;
        for row in s.basis_vectors() {
            match element_p_nilpotent(l, &row)? {
                POrbit::Nil { exponent } => max_exp = max_exp.max(exponent),
                POrbit::NotNil { .. } => return Ok(PNilpotency::No { witness: row }),
            }
        }
        return Ok(PNilpotency::Yes { exponent: max_exp, certainty: Certainty::BasisCertified });
    }
    Err(SubspaceError::BudgetExceeded { needed, budget })
}

/// Span of all odd y whose square bracket (y,y) is p-nilpotent. The map
/// y -> (y,y) is quadratic, so the odd part is enumerated element by element.
pub fn p_nilpotent_square_span(
    l: &LieSuperalgebra,
    budget: u64,
) -> Result<Subspace, SubspaceError> {
    if !l.restricted {
        return Err(SubspaceError::Lsa(LsaError::NotRestricted));
    }
    let p = l.characteristic;
    let needed = (p as u128).checked_pow(l.n_odd as u32).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(SubspaceError::BudgetExceeded { needed, budget });
    }
    let mut rows = Vec::new();
    for coords in FpVectors::new(l.n_odd, p) {
        let mut y = GradedVector::zero();
        for (t, &c) in coords.iter().enumerate() {
            if c != 0 {
                y.set(l.n_even + t, Coeff::Fp(c));
            }
        }
        if y.is_zero() {
            continue;
        }
        let square = l.bracket(&y, &y);
        if matches!(element_p_nilpotent(l, &square)?, POrbit::Nil { .. }) {
            rows.push(y.to_dense(&l.ring, l.dim()));
        }
    }
    Ok(Subspace::from_rows(&l.ring, l.dim(), rows))
}

/// Least subspace containing S closed under bracketing with all of L and,
/// when `restricted` is set, under the extended p-map of its even rows.
pub fn ideal_closure(l: &LieSuperalgebra, s: &Subspace, restricted: bool) -> Subspace {
    let mut current = s.clone();
    loop {
        let mut rows = current.rows().to_vec();
        for i in 0..l.dim() {
            let b = GradedVector::unit(&l.ring, i);
            for v in current.basis_vectors() {
                let w = l.bracket(&b, &v);
                if !w.is_zero() {
                    rows.push(w.to_dense(&l.ring, l.dim()));
                }
            }
        }
        if restricted {
            for v in current.basis_vectors() {
                if l.parity_of(&v) == Some(Parity::Even) && !v.is_zero() {
                    let w = l.p_map_extend(&v).expect("restricted algebra");
                    if !w.is_zero() {
                        rows.push(w.to_dense(&l.ring, l.dim()));
                    }
                }
            }
        }
        let bigger = Subspace::from_rows(&l.ring, l.dim(), rows);
        if bigger.dim() == current.dim() {
            return bigger;
        }
        current = bigger;
    }
}
