//! The Lie superalgebra object.
//!
//! An algebra is loaded from an [`AlgebraFile`] through [`validate`], which
//! checks every axiom the later analysis relies on: parity-additive grading,
//! super skew-symmetry, the graded Jacobi identity on basis triples, the
//! characteristic-3 cubic identity `((y,y),y) = 0` on all odd elements, and
//! for restricted algebras completeness and ad-compatibility of the p-map
//! table. Everything downstream may assume a validated algebra.
//!
//! Conventions fixed here (the input format pins the rest):
//! * basis order is all even elements before all odd elements;
//! * super skew-symmetry reads `(b,a) = -(-1)^{|a||b|}(a,b)`;
//! * the graded Jacobi identity is the cyclic form
//!   `(-1)^{|a||c|}(a,(b,c)) + (-1)^{|a||b|}(b,(c,a)) + (-1)^{|b||c|}(c,(a,b)) = 0`,
//!   which makes `(ad z)^2 = 1/2 ad((z,z))` for odd `z` a theorem checked by
//!   [`check_squared_adjoint`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::coeffs::{Coeff, Ring};
use crate::format::{AlgebraFile, CoeffRepr};
use crate::linalg::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub name: String,
    pub parity: Parity,
    pub index: usize,
}

#[derive(Debug, Error)]
pub enum LsaError {
    #[error("operation requires a restricted algebra")]
    NotRestricted,
    #[error("vector is not homogeneous of the required parity")]
    WrongParity,
    #[error("enumeration budget exceeded: needed {needed} elements, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

/// Sparse coordinate vector in the basis of `L`. No zero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedVector {
    entries: BTreeMap<usize, Coeff>,
}

impl GradedVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(ring: &Ring, i: usize) -> Self {
        let mut v = Self::zero();
        v.set(i, ring.one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Coeff> {
        self.entries.get(&i)
    }

    pub fn set(&mut self, i: usize, c: Coeff) {
        if c.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Coeff)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn add_scaled(&mut self, ring: &Ring, other: &GradedVector, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        for (i, v) in other.iter() {
            let cur = self.entries.get(&i).cloned().unwrap_or_else(|| ring.zero());
            self.set(i, ring.add(&cur, &ring.mul(v, c)));
        }
    }

    pub fn add(&self, ring: &Ring, other: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        out.add_scaled(ring, other, &ring.one());
        out
    }

    pub fn sub(&self, ring: &Ring, other: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        out.add_scaled(ring, other, &ring.from_i64(-1));
        out
    }

    pub fn scale(&self, ring: &Ring, c: &Coeff) -> GradedVector {
        let mut out = GradedVector::zero();
        out.add_scaled(ring, self, c);
        out
    }

    pub fn to_dense(&self, ring: &Ring, n: usize) -> Vec<Coeff> {
        let mut out = vec![ring.zero(); n];
        for (i, c) in self.iter() {
            out[i] = c.clone();
        }
        out
    }

    pub fn from_dense(dense: &[Coeff]) -> GradedVector {
        let mut out = GradedVector::zero();
        for (i, c) in dense.iter().enumerate() {
            if !c.is_zero() {
                out.entries.insert(i, c.clone());
            }
        }
        out
    }

    /// Projection onto the coordinates of one parity block.
    pub fn parity_part(&self, n_even: usize, parity: Parity) -> GradedVector {
        let mut out = GradedVector::zero();
        for (i, c) in self.iter() {
            let even = i < n_even;
            if (parity == Parity::Even) == even {
                out.entries.insert(i, c.clone());
            }
        }
        out
    }
}

/// A finite-dimensional Lie superalgebra over `F_p` (p odd) or the rationals,
/// given by structure constants, optionally restricted.
#[derive(Clone, Debug)]
pub struct LieSuperalgebra {
    pub characteristic: u64,
    pub restricted: bool,
    pub ring: Ring,
    pub basis: Vec<BasisElement>,
    pub n_even: usize,
    pub n_odd: usize,
    /// Upper-triangular structure-constant table, row index `(i,j)` with
    /// `i <= j`; the mirror is derived from super skew-symmetry.
    table: Vec<GradedVector>,
    /// p-map images of the even basis elements (empty unless restricted).
    p_map: Vec<GradedVector>,
}

impl LieSuperalgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn parity(&self, i: usize) -> Parity {
        if i < self.n_even {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn tri_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j < self.dim());
        let n = self.dim();
        i * n - i * (i + 1) / 2 + j
    }

    /// Bracket of two basis elements, in either orientation.
    pub fn bracket_basis(&self, i: usize, j: usize) -> GradedVector {
        if i <= j {
            self.table[self.tri_index(i, j)].clone()
        } else {
            let stored = &self.table[self.tri_index(j, i)];
            let both_odd = self.parity(i) == Parity::Odd && self.parity(j) == Parity::Odd;
            if both_odd {
                stored.clone()
            } else {
                stored.scale(&self.ring, &self.ring.from_i64(-1))
            }
        }
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, u: &GradedVector, v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero();
        for (i, ci) in u.iter() {
            for (j, cj) in v.iter() {
                let b = self.bracket_basis(i, j);
                if !b.is_zero() {
                    out.add_scaled(&self.ring, &b, &self.ring.mul(ci, cj));
                }
            }
        }
        out
    }

    /// Matrix of `v -> (x, v)` in the canonical basis.
    pub fn ad_operator(&self, x: &GradedVector) -> Mat {
        let n = self.dim();
        let mut m = Mat::zeros(&self.ring, n, n);
        for j in 0..n {
            let col = self.bracket(x, &GradedVector::unit(&self.ring, j));
            for (k, c) in col.iter() {
                *m.at_mut(k, j) = c.clone();
            }
        }
        m
    }

    /// Homogeneous parity of a vector, or `None` for mixed support.
    pub fn parity_of(&self, v: &GradedVector) -> Option<Parity> {
        let mut parity = None;
        for i in v.support() {
            let p = self.parity(i);
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        parity.or(Some(Parity::Even))
    }

    /// `(ad z)^2 = 1/2 ad((z,z))` for a homogeneous odd `z`; holds in every
    /// validated algebra, so a `false` indicates corrupted structure
    /// constants.
    pub fn check_squared_adjoint(&self, z: &GradedVector) -> bool {
        debug_assert!(z.is_zero() || matches!(self.parity_of(z), Some(Parity::Odd)));
        let adz = self.ad_operator(z);
        let lhs = adz.matmul(&self.ring, &adz);
        let rhs = self
            .ad_operator(&self.bracket(z, z))
            .scale(&self.ring, &self.ring.half());
        lhs == rhs
    }

    pub fn p_map_basis(&self, even_index: usize) -> &GradedVector {
        debug_assert!(self.restricted && even_index < self.n_even);
        &self.p_map[even_index]
    }

    /// The vectors `s_i(x, w)`, `1 <= i <= p-1`, defined by coefficient
    /// extraction from `(ad(t x + w))^{p-1}(x)` over `F_p[t]`. They make the
    /// p-map semilinear: `(a+b)^{[p]} = a^{[p]} + b^{[p]} + sum_i s_i(a,b)`.
    pub fn jacobson_sums(
        &self,
        x: &GradedVector,
        w: &GradedVector,
    ) -> Result<Vec<GradedVector>, LsaError> {
        if !self.restricted {
            return Err(LsaError::NotRestricted);
        }
        let p = self.characteristic;
        let n = self.dim();
        let poly = Ring::PolyOverFp { p, nvars: 1 };
        let t = poly.var(0);
        let adx = self.ad_operator(x);
        let adw = self.ad_operator(w);
        let mut m = Mat::zeros(&poly, n, n);
        for i in 0..n {
            for j in 0..n {
                let a = poly.lift(adx.at(i, j));
                let b = poly.lift(adw.at(i, j));
                *m.at_mut(i, j) = poly.add(&poly.mul(&a, &t), &b);
            }
        }
        let power = m.pow(&poly, p - 1);
        let x_dense: Vec<Coeff> = x
            .to_dense(&self.ring, n)
            .iter()
            .map(|c| poly.lift(c))
            .collect();
        let image = power.apply(&poly, &x_dense);
        let fp = Ring::Fp(p);
        let mut out = Vec::with_capacity((p - 1) as usize);
        for i in 1..p {
            let inv_i = fp.inv(&Coeff::Fp(i % p)).expect("i in 1..p");
            let mut s = GradedVector::zero();
            for (k, entry) in image.iter().enumerate() {
                let Coeff::Poly(poly_val) = entry else { unreachable!() };
                let c = poly_val.univariate_coeff(0, (i - 1) as u32) % p;
                s.set(k, fp.mul(&Coeff::Fp(c), &inv_i));
            }
            out.push(s);
        }
        Ok(out)
    }

    /// Value of the p-map at an arbitrary even vector, from the basis table
    /// and the semilinearity rules `(c x)^{[p]} = c^p x^{[p]}` and
    /// `(a+b)^{[p]} = a^{[p]} + b^{[p]} + sum_i s_i(a,b)`.
    pub fn p_map_extend(&self, v: &GradedVector) -> Result<GradedVector, LsaError> {
        if !self.restricted {
            return Err(LsaError::NotRestricted);
        }
        if self.parity_of(v) != Some(Parity::Even) {
            return Err(LsaError::WrongParity);
        }
        let p = self.characteristic;
        if v.is_zero() {
            return Ok(GradedVector::zero());
        }
        let (i, coeff) = {
            let (i, c) = v.iter().next().expect("nonzero");
            (i, c.clone())
        };
        let head = GradedVector::unit(&self.ring, i).scale(&self.ring, &coeff);
        let rest = v.sub(&self.ring, &head);
        let mut out = self.p_map[i].scale(&self.ring, &self.ring.pow(&coeff, p));
        if rest.is_zero() {
            return Ok(out);
        }
        out.add_scaled(&self.ring, &self.p_map_extend(&rest)?, &self.ring.one());
        for s in self.jacobson_sums(&head, &rest)? {
            out.add_scaled(&self.ring, &s, &self.ring.one());
        }
        Ok(out)
    }

    pub fn format_vector(&self, v: &GradedVector) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (i, c)) in v.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            if c.is_one() {
                let _ = write!(out, "{}", self.basis[i].name);
            } else {
                let _ = write!(out, "{}*{}", c, self.basis[i].name);
            }
        }
        out
    }

    pub fn parse_vector(&self, s: &str) -> Result<GradedVector, String> {
        let s = s.trim();
        let mut out = GradedVector::zero();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let (coeff, name) = match term.rsplit_once('*') {
                Some((c, n)) => (parse_coeff_str(&self.ring, c.trim())?, n.trim()),
                None => (self.ring.one(), term.trim()),
            };
            let idx = self
                .basis
                .iter()
                .position(|b| b.name == name)
                .ok_or_else(|| format!("unknown basis name `{name}`"))?;
            let cur = out.get(idx).cloned().unwrap_or_else(|| self.ring.zero());
            out.set(idx, self.ring.add(&cur, &coeff));
        }
        Ok(out)
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }
}

fn parse_coeff_str(ring: &Ring, s: &str) -> Result<Coeff, String> {
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| format!("bad numerator `{a}`"))?;
        let b: i64 = b.trim().parse().map_err(|_| format!("bad denominator `{b}`"))?;
        match ring {
            Ring::Rational => Ok(Coeff::Rational(BigRational::new(
                BigInt::from(a),
                BigInt::from(b),
            ))),
            _ => {
                let num = ring.from_i64(a);
                let den = ring.from_i64(b);
                let inv = ring.inv(&den).map_err(|e| e.to_string())?;
                Ok(ring.mul(&num, &inv))
            }
        }
    } else {
        let n: i64 = s.trim().parse().map_err(|_| format!("bad coefficient `{s}`"))?;
        Ok(ring.from_i64(n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    CharTwoRejected,
    CharNotPrime,
    RestrictedNeedsPrimeChar,
    DuplicateName,
    UnknownName,
    BadCoefficient,
    GradingViolation,
    SkewSymmetryViolation,
    JacobiViolation,
    CubicConditionViolation,
    MissingPMap,
    PMapGradingViolation,
    PMapAdCompatibility,
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

/// Every violated axiom, with the offending basis pair/triple or element.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, kind: ViolationKind, detail: String) {
        self.violations.push(Violation { kind, detail });
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn budget_exceeded(&self) -> bool {
        self.violations
            .iter()
            .any(|v| v.kind == ViolationKind::BudgetExceeded)
    }

    pub fn lines(&self) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| format!("{:?}: {}", v.kind, v.detail))
            .collect()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn parse_repr(ring: &Ring, c: &CoeffRepr) -> Result<Coeff, String> {
    match c {
        CoeffRepr::Int(n) => Ok(ring.from_i64(*n)),
        CoeffRepr::Frac(s) => parse_coeff_str(ring, s),
    }
}

/// Validate a raw description and build the algebra, or report every
/// violated axiom. `budget` caps the characteristic-3 cubic enumeration.
pub fn validate(file: &AlgebraFile, budget: u64) -> Result<LieSuperalgebra, ValidationReport> {
    let mut report = ValidationReport::default();
    let p = file.characteristic;

    if p == 2 {
        report.push(
            ViolationKind::CharTwoRejected,
            "characteristic 2 is not supported".into(),
        );
        return Err(report);
    }
    if p != 0 && !is_prime(p) {
        report.push(
            ViolationKind::CharNotPrime,
            format!("characteristic {p} is not prime"),
        );
        return Err(report);
    }
    if file.restricted && p == 0 {
        report.push(
            ViolationKind::RestrictedNeedsPrimeChar,
            "restricted algebras need odd prime characteristic".into(),
        );
        return Err(report);
    }
    let ring = if p == 0 { Ring::Rational } else { Ring::Fp(p) };

    let mut basis = Vec::new();
    for name in &file.even_basis {
        basis.push(BasisElement { name: name.clone(), parity: Parity::Even, index: basis.len() });
    }
    for name in &file.odd_basis {
        basis.push(BasisElement { name: name.clone(), parity: Parity::Odd, index: basis.len() });
    }
    let n = basis.len();
    let n_even = file.even_basis.len();
    let n_odd = file.odd_basis.len();
    {
        let mut seen = std::collections::HashSet::new();
        for b in &basis {
            if !seen.insert(b.name.clone()) {
                report.push(ViolationKind::DuplicateName, format!("basis name `{}`", b.name));
            }
        }
    }
    if !report.is_valid() {
        return Err(report);
    }
    let index_of = |name: &str| basis.iter().position(|b| b.name == name);

    // Collect the bracket entries as given, then derive the canonical
    // upper-triangular table and check that mirrored entries agree with
    // super skew-symmetry.
    let mut given: BTreeMap<(usize, usize), GradedVector> = BTreeMap::new();
    for entry in &file.brackets {
        let (Some(i), Some(j)) = (index_of(&entry.left), index_of(&entry.right)) else {
            report.push(
                ViolationKind::UnknownName,
                format!("bracket ({}, {})", entry.left, entry.right),
            );
            continue;
        };
        let mut value = GradedVector::zero();
        for term in &entry.value {
            let Some(k) = index_of(&term.b) else {
                report.push(ViolationKind::UnknownName, format!("bracket value term `{}`", term.b));
                continue;
            };
            match parse_repr(&ring, &term.c) {
                Ok(c) => {
                    let cur = value.get(k).cloned().unwrap_or_else(|| ring.zero());
                    value.set(k, ring.add(&cur, &c));
                }
                Err(e) => report.push(ViolationKind::BadCoefficient, e),
            }
        }
        if given.insert((i, j), value).is_some() {
            report.push(
                ViolationKind::SkewSymmetryViolation,
                format!("bracket ({}, {}) listed twice", entry.left, entry.right),
            );
        }
    }
    if !report.is_valid() {
        return Err(report);
    }

    let parity = |i: usize| if i < n_even { Parity::Even } else { Parity::Odd };
    let mirror = |ring: &Ring, v: &GradedVector, i: usize, j: usize| -> GradedVector {
        let both_odd = parity(i) == Parity::Odd && parity(j) == Parity::Odd;
        if both_odd {
            v.clone()
        } else {
            v.scale(ring, &ring.from_i64(-1))
        }
    };

    let mut table = vec![GradedVector::zero(); n * (n + 1) / 2];
    let tri = |i: usize, j: usize| i * n - i * (i + 1) / 2 + j;
    for i in 0..n {
        for j in i..n {
            let fwd = given.get(&(i, j));
            let bwd = given.get(&(j, i)).filter(|_| i != j);
            let canonical = match (fwd, bwd) {
                (Some(v), Some(w)) => {
                    let derived = mirror(&ring, w, j, i);
                    if *v != derived {
                        report.push(
                            ViolationKind::SkewSymmetryViolation,
                            format!(
                                "({}, {}) and ({}, {}) are not skew-consistent",
                                basis[i].name, basis[j].name, basis[j].name, basis[i].name
                            ),
                        );
                    }
                    v.clone()
                }
                (Some(v), None) => v.clone(),
                (None, Some(w)) => mirror(&ring, w, j, i),
                (None, None) => GradedVector::zero(),
            };
            // (x, x) = 0 for even x is forced by skew-symmetry in odd
            // characteristic and over the rationals.
            if i == j && parity(i) == Parity::Even && !canonical.is_zero() {
                report.push(
                    ViolationKind::SkewSymmetryViolation,
                    format!("({0}, {0}) must vanish for even {0}", basis[i].name),
                );
            }
            table[tri(i, j)] = canonical;
        }
    }

    // Grading: (L_a, L_b) lives in L_{a+b}.
    for i in 0..n {
        for j in i..n {
            let v = &table[tri(i, j)];
            let want = if parity(i) == parity(j) { Parity::Even } else { Parity::Odd };
            for k in v.support() {
                if parity(k) != want {
                    report.push(
                        ViolationKind::GradingViolation,
                        format!(
                            "({}, {}) has a component on `{}` of the wrong parity",
                            basis[i].name, basis[j].name, basis[k].name
                        ),
                    );
                    break;
                }
            }
        }
    }

    let p_map = if file.restricted {
        let mut map = vec![None; n_even];
        for entry in &file.p_map {
            let Some(i) = index_of(&entry.of) else {
                report.push(ViolationKind::UnknownName, format!("p-map entry `{}`", entry.of));
                continue;
            };
            if i >= n_even {
                report.push(
                    ViolationKind::PMapGradingViolation,
                    format!("p-map is only defined on even elements, got `{}`", entry.of),
                );
                continue;
            }
            let mut value = GradedVector::zero();
            for term in &entry.value {
                let Some(k) = index_of(&term.b) else {
                    report.push(ViolationKind::UnknownName, format!("p-map value term `{}`", term.b));
                    continue;
                };
                if k >= n_even {
                    report.push(
                        ViolationKind::PMapGradingViolation,
                        format!("p-map value of `{}` has odd component `{}`", entry.of, term.b),
                    );
                }
                match parse_repr(&ring, &term.c) {
                    Ok(c) => {
                        let cur = value.get(k).cloned().unwrap_or_else(|| ring.zero());
                        value.set(k, ring.add(&cur, &c));
                    }
                    Err(e) => report.push(ViolationKind::BadCoefficient, e),
                }
            }
            map[i] = Some(value);
        }
        let mut out = Vec::with_capacity(n_even);
        for (i, v) in map.into_iter().enumerate() {
            match v {
                Some(v) => out.push(v),
                None => {
                    report.push(
                        ViolationKind::MissingPMap,
                        format!("no p-map entry for even basis element `{}`", basis[i].name),
                    );
                    out.push(GradedVector::zero());
                }
            }
        }
        out
    } else {
        Vec::new()
    };

    if !report.is_valid() {
        return Err(report);
    }

    let algebra = LieSuperalgebra {
        characteristic: p,
        restricted: file.restricted,
        ring: ring.clone(),
        basis,
        n_even,
        n_odd,
        table,
        p_map,
    };

    // Graded Jacobi identity on ordered basis triples; skew-symmetry extends
    // it to all triples.
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let pa = algebra.parity(a);
                let pb = algebra.parity(b);
                let pc = algebra.parity(c);
                let sign = |x: Parity, y: Parity| {
                    if x == Parity::Odd && y == Parity::Odd {
                        ring.from_i64(-1)
                    } else {
                        ring.one()
                    }
                };
                let ea = GradedVector::unit(&ring, a);
                let eb = GradedVector::unit(&ring, b);
                let ec = GradedVector::unit(&ring, c);
                let mut sum = GradedVector::zero();
                let t1 = algebra.bracket(&ea, &algebra.bracket(&eb, &ec));
                sum.add_scaled(&ring, &t1, &sign(pa, pc));
                let t2 = algebra.bracket(&eb, &algebra.bracket(&ec, &ea));
                sum.add_scaled(&ring, &t2, &sign(pb, pa));
                let t3 = algebra.bracket(&ec, &algebra.bracket(&ea, &eb));
                sum.add_scaled(&ring, &t3, &sign(pc, pb));
                if !sum.is_zero() {
                    report.push(
                        ViolationKind::JacobiViolation,
                        format!(
                            "triple ({}, {}, {}): cyclic sum = {}",
                            algebra.basis[a].name,
                            algebra.basis[b].name,
                            algebra.basis[c].name,
                            algebra.format_vector(&sum)
                        ),
                    );
                }
            }
        }
    }

    // Characteristic 3: ((y,y),y) = 0 for every odd y, not only basis
    // elements, because the identity is cubic and cannot be linearized
    // over F_3. Enumerates all of L_1 over F_3 within budget.
    if p == 3 && n_odd > 0 {
        let needed = 3u128.checked_pow(n_odd as u32).unwrap_or(u128::MAX);
        if needed > budget as u128 {
            report.push(
                ViolationKind::BudgetExceeded,
                format!("cubic identity check needs {needed} elements, budget {budget}"),
            );
        } else {
            let mut coords = vec![0u64; n_odd];
            'outer: loop {
                let mut y = GradedVector::zero();
                for (t, &c) in coords.iter().enumerate() {
                    if c != 0 {
                        y.set(n_even + t, Coeff::Fp(c));
                    }
                }
                if !y.is_zero() {
                    let yy = algebra.bracket(&y, &y);
                    let cubic = algebra.bracket(&yy, &y);
                    if !cubic.is_zero() {
                        report.push(
                            ViolationKind::CubicConditionViolation,
                            format!(
                                "((y,y),y) = {} for y = {}",
                                algebra.format_vector(&cubic),
                                algebra.format_vector(&y)
                            ),
                        );
                        break 'outer;
                    }
                }
                let mut t = 0;
                loop {
                    if t == n_odd {
                        break 'outer;
                    }
                    coords[t] += 1;
                    if coords[t] < 3 {
                        break;
                    }
                    coords[t] = 0;
                    t += 1;
                }
            }
        }
    }

    // Restricted: ad(x^{[p]}) = (ad x)^p on the even basis; semilinear
    // extension then makes the axiom hold everywhere.
    if file.restricted {
        for i in 0..n_even {
            let adx = algebra.ad_operator(&GradedVector::unit(&ring, i));
            let lhs = algebra.ad_operator(&algebra.p_map[i]);
            let rhs = adx.pow(&ring, p);
            if lhs != rhs {
                report.push(
                    ViolationKind::PMapAdCompatibility,
                    format!(
                        "ad({}^[p]) differs from (ad {})^p",
                        algebra.basis[i].name, algebra.basis[i].name
                    ),
                );
            }
        }
    }

    if report.is_valid() {
        Ok(algebra)
    } else {
        Err(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{BracketEntry, Term};

    fn term(c: i64, b: &str) -> Term {
        Term { c: CoeffRepr::Int(c), b: b.into() }
    }

    fn entry(left: &str, right: &str, value: Vec<Term>) -> BracketEntry {
        BracketEntry { left: left.into(), right: right.into(), value }
    }

    /// x even; y, z odd; (x, y) = z.
    fn fan_file(p: u64) -> AlgebraFile {
        AlgebraFile {
            characteristic: p,
            restricted: false,
            even_basis: vec!["x".into()],
            odd_basis: vec!["y".into(), "z".into()],
            brackets: vec![entry("x", "y", vec![term(1, "z")])],
            p_map: vec![],
        }
    }

    #[test]
    fn fan_algebra_is_valid() {
        let l = validate(&fan_file(3), 1_000_000).expect("valid");
        assert_eq!(l.dim(), 3);
        let x = GradedVector::unit(&l.ring, 0);
        let y = GradedVector::unit(&l.ring, 1);
        let z = GradedVector::unit(&l.ring, 2);
        assert_eq!(l.bracket(&x, &y), z);
        // mirror: (y, x) = -(x, y)
        assert_eq!(l.bracket(&y, &x), z.scale(&l.ring, &l.ring.from_i64(-1)));
    }

    #[test]
    fn wrong_sign_mirror_is_rejected() {
        let mut f = fan_file(3);
        // also list (y, x) = z, which contradicts skew-symmetry
        f.brackets.push(entry("y", "x", vec![term(1, "z")]));
        let report = validate(&f, 1_000_000).unwrap_err();
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::SkewSymmetryViolation));
    }

    #[test]
    fn char_two_rejected() {
        let mut f = fan_file(3);
        f.characteristic = 2;
        let report = validate(&f, 1_000_000).unwrap_err();
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::CharTwoRejected));
    }

    #[test]
    fn cubic_condition_violation_found() {
        // p = 3, single odd y with (y,y) = x and (x,y) = x:
        // ((y,y),y) = (x,y) = x != 0.
        let f = AlgebraFile {
            characteristic: 3,
            restricted: false,
            even_basis: vec!["x".into()],
            odd_basis: vec!["y".into()],
            brackets: vec![
                entry("y", "y", vec![term(1, "x")]),
                entry("x", "y", vec![term(1, "x")]),
            ],
            p_map: vec![],
        };
        let report = validate(&f, 1_000_000).unwrap_err();
        // the bad bracket breaks more than one axiom; the cubic check and/or
        // grading must flag it
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| matches!(
            v.kind,
            ViolationKind::CubicConditionViolation | ViolationKind::GradingViolation
        )));
    }

    #[test]
    fn ad_operator_of_fan() {
        let l = validate(&fan_file(3), 1_000_000).unwrap();
        let x = GradedVector::unit(&l.ring, 0);
        let ad = l.ad_operator(&x);
        // x -> 0, y -> z, z -> 0
        assert!(ad.at(2, 1).is_one());
        assert_eq!(ad.nilpotency_index(&l.ring), Some(2));
    }

    #[test]
    fn squared_adjoint_holds_after_validation() {
        let l = validate(&fan_file(5), 1_000_000).unwrap();
        for i in l.n_even..l.dim() {
            assert!(l.check_squared_adjoint(&GradedVector::unit(&l.ring, i)));
        }
    }

    #[test]
    fn squared_adjoint_fails_on_corrupted_constants() {
        // (y,y) = x with (x,y) = y breaks the Jacobi identity; build the
        // algebra anyway (skipping validation) and watch the identity fail.
        let ring = Ring::Fp(5);
        let n = 2;
        let mut table = vec![GradedVector::zero(); n * (n + 1) / 2];
        // basis: x (even, 0), y (odd, 1); tri(0,1) = 1, tri(1,1) = 2
        let mut xy = GradedVector::zero();
        xy.set(1, Coeff::Fp(1)); // (x, y) = y
        table[1] = xy;
        let mut yy = GradedVector::zero();
        yy.set(0, Coeff::Fp(1)); // (y, y) = x
        table[2] = yy;
        let l = LieSuperalgebra {
            characteristic: 5,
            restricted: false,
            ring: ring.clone(),
            basis: vec![
                BasisElement { name: "x".into(), parity: Parity::Even, index: 0 },
                BasisElement { name: "y".into(), parity: Parity::Odd, index: 1 },
            ],
            n_even: 1,
            n_odd: 1,
            table,
            p_map: vec![],
        };
        let y = GradedVector::unit(&ring, 1);
        assert!(!l.check_squared_adjoint(&y));
    }

    #[test]
    fn bilinear_bracket_of_odd_sum() {
        // (y1,y1) = x, (y2,y2) = x, (y1,y2) = 0: (y1+y2, y1+y2) = 2x.
        let f = AlgebraFile {
            characteristic: 3,
            restricted: false,
            even_basis: vec!["x".into()],
            odd_basis: vec!["y1".into(), "y2".into()],
            brackets: vec![
                entry("y1", "y1", vec![term(1, "x")]),
                entry("y2", "y2", vec![term(1, "x")]),
            ],
            p_map: vec![],
        };
        let l = validate(&f, 1_000_000).unwrap();
        let ring = l.ring.clone();
        let s = GradedVector::unit(&ring, 1).add(&ring, &GradedVector::unit(&ring, 2));
        let got = l.bracket(&s, &s);
        let want = GradedVector::unit(&ring, 0).scale(&ring, &ring.from_i64(2));
        assert_eq!(got, want);
    }

    #[test]
    fn vector_roundtrip_printing() {
        let l = validate(&fan_file(0), 1_000_000).unwrap();
        let mut v = GradedVector::zero();
        v.set(0, l.ring.from_i64(2));
        v.set(2, l.ring.inv(&l.ring.from_i64(2)).unwrap());
        let s = l.format_vector(&v);
        assert_eq!(s, "2*x + 1/2*z");
        assert_eq!(l.parse_vector(&s).unwrap(), v);
    }
}
