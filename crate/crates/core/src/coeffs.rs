//! Exact coefficient rings.
//!
//! Three rings back every computation in the crate: the prime field `F_p`
//! (p an odd prime), the rationals (characteristic-0 mode), and a sparse
//! multivariate polynomial ring over `F_p` used by generic-element checks.
//! Values are plain data ([`Coeff`]); arithmetic goes through a [`Ring`]
//! descriptor so that the modulus is stored once, not per value.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rng::SplitMix64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoeffError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("the polynomial ring is not a field")]
    NotAField,
    #[error("no nonzero point found within budget of {budget} evaluations")]
    BudgetExceeded { budget: u64 },
    #[error("coefficient ring mismatch: {0}")]
    RingMismatch(String),
}

/// Ring descriptor. `Fp` requires an odd prime; the validator enforces this
/// before any ring is constructed from user input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ring {
    Fp(u64),
    Rational,
    PolyOverFp { p: u64, nvars: usize },
}

impl Ring {
    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::Fp(p) | Ring::PolyOverFp { p, .. } => *p,
            Ring::Rational => 0,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Ring::Fp(_) => Coeff::Fp(0),
            Ring::Rational => Coeff::Rational(BigRational::zero()),
            Ring::PolyOverFp { .. } => Coeff::Poly(MultiPoly::zero()),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match self {
            Ring::Fp(p) => Coeff::Fp(reduce_i64(n, *p)),
            Ring::Rational => Coeff::Rational(BigRational::from_integer(BigInt::from(n))),
            Ring::PolyOverFp { p, .. } => Coeff::Poly(MultiPoly::constant(reduce_i64(n, *p))),
        }
    }

    /// The i-th polynomial variable as a ring element.
    pub fn var(&self, i: usize) -> Coeff {
        match self {
            Ring::PolyOverFp { nvars, .. } => {
                assert!(i < *nvars, "variable index {i} out of range");
                Coeff::Poly(MultiPoly::variable(i))
            }
            _ => panic!("var() requires the polynomial ring"),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Ring::Fp(p), Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp((x + y) % p),
            (Ring::Rational, Coeff::Rational(x), Coeff::Rational(y)) => Coeff::Rational(x + y),
            (Ring::PolyOverFp { p, .. }, Coeff::Poly(x), Coeff::Poly(y)) => {
                Coeff::Poly(x.add(y, *p))
            }
            _ => panic!("coefficient does not belong to ring {self:?}"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Ring::Fp(p), Coeff::Fp(x)) => Coeff::Fp(if *x == 0 { 0 } else { p - x }),
            (Ring::Rational, Coeff::Rational(x)) => Coeff::Rational(-x),
            (Ring::PolyOverFp { p, .. }, Coeff::Poly(x)) => Coeff::Poly(x.neg(*p)),
            _ => panic!("coefficient does not belong to ring {self:?}"),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Ring::Fp(p), Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp((x * y) % p),
            (Ring::Rational, Coeff::Rational(x), Coeff::Rational(y)) => Coeff::Rational(x * y),
            (Ring::PolyOverFp { p, .. }, Coeff::Poly(x), Coeff::Poly(y)) => {
                Coeff::Poly(x.mul(y, *p))
            }
            _ => panic!("coefficient does not belong to ring {self:?}"),
        }
    }

    /// Multiplicative inverse in a field.
    pub fn inv(&self, a: &Coeff) -> Result<Coeff, CoeffError> {
        if a.is_zero() {
            return Err(CoeffError::ZeroInverse);
        }
        match (self, a) {
            (Ring::Fp(p), Coeff::Fp(x)) => Ok(Coeff::Fp(mod_pow(*x, p - 2, *p))),
            (Ring::Rational, Coeff::Rational(x)) => Ok(Coeff::Rational(x.recip())),
            (Ring::PolyOverFp { .. }, _) => Err(CoeffError::NotAField),
            _ => panic!("coefficient does not belong to ring {self:?}"),
        }
    }

    /// `1/2`, the scalar appearing in the odd-square reduction and the
    /// squared-adjoint identity. Characteristic 2 is rejected at validation.
    /// Well-defined in the polynomial ring as the constant inverse of 2.
    pub fn half(&self) -> Coeff {
        match self {
            Ring::PolyOverFp { p, .. } => {
                Coeff::Poly(MultiPoly::constant(mod_pow(2, p - 2, *p)))
            }
            _ => self.inv(&self.from_i64(2)).expect("characteristic 2 excluded"),
        }
    }

    pub fn pow(&self, a: &Coeff, mut n: u64) -> Coeff {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Whether the ring is a field (echelon forms require this).
    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::PolyOverFp { .. })
    }

    /// Lift a base-field value into this ring (identity unless `self` is the
    /// polynomial ring, in which case `F_p` scalars become constants).
    pub fn lift(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Ring::PolyOverFp { .. }, Coeff::Fp(x)) => Coeff::Poly(MultiPoly::constant(*x)),
            _ => a.clone(),
        }
    }
}

/// A value of one of the three rings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Coeff {
    /// Residue in `[0, p)`.
    Fp(u64),
    /// Exact fraction, lowest terms, positive denominator.
    Rational(BigRational),
    /// Sparse polynomial over `F_p`.
    Poly(MultiPoly),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Fp(x) => *x == 0,
            Coeff::Rational(x) => x.is_zero(),
            Coeff::Poly(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Fp(x) => *x == 1,
            Coeff::Rational(x) => x.is_one(),
            Coeff::Poly(x) => x.terms.len() == 1 && x.terms.get(&PolyMono::unit()) == Some(&1),
        }
    }

    /// The `F_p` residue, for callers on the fast integer path.
    pub fn as_fp(&self) -> Option<u64> {
        match self {
            Coeff::Fp(x) => Some(*x),
            _ => None,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Fp(x) => write!(f, "{x}"),
            Coeff::Rational(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Coeff::Poly(x) => write!(f, "{x}"),
        }
    }
}

pub(crate) fn reduce_i64(n: i64, p: u64) -> u64 {
    let r = n.rem_euclid(p as i64);
    r as u64
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Exponent vector with graded-lexicographic order, so polynomial terms print
/// and compare canonically. Trailing zero exponents are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMono(Vec<u32>);

impl PolyMono {
    pub fn unit() -> Self {
        PolyMono(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut v = vec![0u32; i + 1];
        v[i] = 1;
        PolyMono(v)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![0u32; n];
        for (i, e) in self.0.iter().enumerate() {
            v[i] += e;
        }
        for (i, e) in other.0.iter().enumerate() {
            v[i] += e;
        }
        PolyMono(v)
    }
}

impl Ord for PolyMono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PolyMono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over `F_p`. The zero polynomial is the
/// empty map; stored coefficients are nonzero residues.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiPoly {
    terms: BTreeMap<PolyMono, u64>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: u64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(PolyMono::unit(), c);
        }
        MultiPoly { terms }
    }

    pub fn variable(i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(PolyMono::var(i), 1);
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PolyMono, &u64)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, m: PolyMono, c: u64, p: u64) {
        let c = c % p;
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = (*o.get() + c) % p;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self, p: u64) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), *c, p);
        }
        out
    }

    pub fn neg(&self, p: u64) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), p - c)).collect();
        MultiPoly { terms }
    }

    pub fn mul(&self, other: &Self, p: u64) -> Self {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca * cb % p, p);
            }
        }
        out
    }

    /// Evaluate at a point with coordinates in `F_p`; missing coordinates
    /// default to 0.
    pub fn eval(&self, point: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = *c % p;
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = point.get(i).copied().unwrap_or(0) % p;
                t = t * mod_pow(x, e as u64, p) % p;
            }
            acc = (acc + t) % p;
        }
        acc
    }

    /// Coefficient of `t_var^k` viewed as a polynomial in variable `var`
    /// alone: returns the F_p constant, panicking if other variables occur.
    pub fn univariate_coeff(&self, var: usize, k: u32) -> u64 {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let exps = m.exps();
            let deg_var = exps.get(var).copied().unwrap_or(0);
            let pure = exps.iter().enumerate().all(|(i, &e)| i == var || e == 0);
            assert!(pure, "univariate_coeff on a multivariate polynomial");
            if deg_var == k {
                acc += c;
            }
        }
        acc
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("t{i}") } else { format!("t{i}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", c, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Inverse of a nonzero field element; [`CoeffError::NotAField`] for the
/// polynomial ring.
pub fn field_inverse(ring: &Ring, a: &Coeff) -> Result<Coeff, CoeffError> {
    ring.inv(a)
}

/// Search for a point of `F_p^nvars` where `f` evaluates to a nonzero value.
///
/// Deterministic sweep first (the full cube when it fits inside the budget,
/// otherwise one axis at a time), then seeded random sampling until `budget`
/// evaluations have been spent. `Ok(None)` means `f` is the zero polynomial;
/// a formally nonzero `f` may still vanish on every point of `F_p^nvars`, in
/// which case the search ends with `BudgetExceeded`.
pub fn poly_find_nonzero_point(
    f: &MultiPoly,
    p: u64,
    nvars: usize,
    budget: u64,
    seed: u64,
) -> Result<Option<Vec<u64>>, CoeffError> {
    if f.is_zero() {
        return Ok(None);
    }
    let mut spent = 0u64;
    let full = (p as u128).checked_pow(nvars as u32);
    if let Some(total) = full {
        if total <= budget as u128 {
            let mut point = vec![0u64; nvars];
            loop {
                if f.eval(&point, p) != 0 {
                    return Ok(Some(point));
                }
                // odometer increment in base p
                let mut i = 0;
                loop {
                    if i == nvars {
                        return Err(CoeffError::BudgetExceeded { budget });
                    }
                    point[i] += 1;
                    if point[i] < p {
                        break;
                    }
                    point[i] = 0;
                    i += 1;
                }
            }
        }
    }
    // Axis sweeps: each variable alone over F_p with the others at zero.
    for i in 0..nvars {
        for v in 0..p {
            if spent >= budget {
                return Err(CoeffError::BudgetExceeded { budget });
            }
            let mut point = vec![0u64; nvars];
            point[i] = v;
            spent += 1;
            if f.eval(&point, p) != 0 {
                return Ok(Some(point));
            }
        }
    }
    let mut rng = SplitMix64::new(seed);
    while spent < budget {
        let point: Vec<u64> = (0..nvars).map(|_| rng.below(p)).collect();
        spent += 1;
        if f.eval(&point, p) != 0 {
            return Ok(Some(point));
        }
    }
    Err(CoeffError::BudgetExceeded { budget })
}
