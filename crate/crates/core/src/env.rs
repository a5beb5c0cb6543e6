//! PBW arithmetic for enveloping algebras.
//!
//! Two modes share one straightening engine:
//!
//! * **Restricted**: u(L) for a restricted L, with the defining relations
//!   `ab - (-1)^{|a||b|} ba = (a,b)`, `y^2 = (1/2)(y,y)` for odd y, and
//!   `x^p = x^{[p]}` for even x. The normal monomial basis has even exponents
//!   below p and square-free increasing odd words; the dimension is exactly
//!   `p^|X| * 2^|Y|`.
//! * **Truncated(N)**: U(L) with every word longer than N discarded during
//!   rewriting. Discarding a long word changes an element by something in
//!   the (N+1)-st power of the augmentation ideal, so results are exact
//!   modulo that ideal; when no word is ever discarded (the element's
//!   `saturated` flag stays false) the result is the exact U(L) value. An
//!   iterated commutator of inputs with degree at most D stays exact
//!   whenever N >= D*(n+1).
//!
//! Monomial order: even generators in input order before odd generators in
//! input order, matching the shape x_1^{a_1}...x_i^{a_i} y_1...y_j.
//! Straightening is a worklist rewriter over words; each step either keeps
//! the degree and removes one inversion (adjacent transposition) or strictly
//! drops the degree (bracket, odd square, p-power), so it terminates.
//! Appending a single generator to a normal monomial is memoized.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Mutex;

use thiserror::Error;

use crate::coeffs::{Coeff, Ring};
use crate::linalg::{null_space, FpMat, Mat};
use crate::lsa::{GradedVector, LieSuperalgebra};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvMode {
    Restricted,
    Truncated(usize),
}

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("elements from different envelope modes cannot be combined")]
    ModeMismatch,
    #[error("elements over different coefficient rings cannot be combined")]
    RingMismatch,
    #[error("restricted mode requires a restricted algebra")]
    NotRestricted,
    #[error("generic element needs {needed} variables, ring has {available}")]
    VariableBudgetExceeded { needed: usize, available: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Normal-form monomial: exponent per even generator (length = number of
/// even generators) followed by a strictly increasing odd word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PBWMonomial {
    pub even: Vec<u32>,
    pub odd: Vec<u32>,
}

impl PBWMonomial {
    pub fn one(n_even: usize) -> Self {
        PBWMonomial { even: vec![0; n_even], odd: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.even.iter().map(|&e| e as usize).sum::<usize>() + self.odd.len()
    }

    pub fn is_one(&self) -> bool {
        self.even.iter().all(|&e| e == 0) && self.odd.is_empty()
    }

    /// The generator-letter sequence in canonical order. Letters are global
    /// Lie basis indices: even generator i is letter i, odd generator j is
    /// letter n_even + j.
    fn word(&self, n_even: usize) -> Vec<u32> {
        let mut w = Vec::with_capacity(self.degree());
        for (i, &e) in self.even.iter().enumerate() {
            for _ in 0..e {
                w.push(i as u32);
            }
        }
        for &j in &self.odd {
            w.push(n_even as u32 + j);
        }
        w
    }
}

impl Ord for PBWMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.even.cmp(&other.even))
            .then_with(|| self.odd.cmp(&other.odd))
    }
}

impl PartialOrd for PBWMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse element of u(L) or truncated U(L).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvElement {
    pub terms: BTreeMap<PBWMonomial, Coeff>,
    pub mode: EnvMode,
    pub ring: Ring,
    /// Set when any word was discarded by the truncation cap somewhere in
    /// the history of this value; such values are exact only modulo degree N.
    pub saturated: bool,
}

impl EnvElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &PBWMonomial) -> Option<&Coeff> {
        self.terms.get(m)
    }

    fn insert(&mut self, ring: &Ring, m: PBWMonomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.add(o.get(), &c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &EnvElement) -> Result<EnvElement, EnvError> {
        check_compat(self, other)?;
        let ring = self.ring.clone();
        let mut out = self.clone();
        out.saturated |= other.saturated;
        for (m, c) in &other.terms {
            out.insert(&ring, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &EnvElement) -> Result<EnvElement, EnvError> {
        self.add(&other.scale(&self.ring.from_i64(-1)))
    }

    pub fn scale(&self, c: &Coeff) -> EnvElement {
        let ring = self.ring.clone();
        let mut out = EnvElement {
            terms: BTreeMap::new(),
            mode: self.mode,
            ring: self.ring.clone(),
            saturated: self.saturated,
        };
        for (m, v) in &self.terms {
            out.insert(&ring, m.clone(), ring.mul(v, c));
        }
        out
    }
}

fn check_compat(a: &EnvElement, b: &EnvElement) -> Result<(), EnvError> {
    if a.mode != b.mode {
        return Err(EnvError::ModeMismatch);
    }
    if a.ring != b.ring {
        return Err(EnvError::RingMismatch);
    }
    Ok(())
}

enum Rule {
    Swap,
    OddSquare,
    PPower,
}

/// Shared context for envelope arithmetic: source algebra, mode, coefficient
/// ring, and the straightening memo (pure cache; contents never change
/// results).
pub struct EnvConfig<'a> {
    pub lsa: &'a LieSuperalgebra,
    pub mode: EnvMode,
    pub ring: Ring,
    memo: Mutex<HashMap<(PBWMonomial, u32), EnvElement>>,
}

impl<'a> EnvConfig<'a> {
    pub fn restricted(lsa: &'a LieSuperalgebra) -> Result<Self, EnvError> {
        if !lsa.restricted {
            return Err(EnvError::NotRestricted);
        }
        Ok(EnvConfig {
            lsa,
            mode: EnvMode::Restricted,
            ring: lsa.ring.clone(),
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn truncated(lsa: &'a LieSuperalgebra, cap: usize) -> Self {
        EnvConfig {
            lsa,
            mode: EnvMode::Truncated(cap),
            ring: lsa.ring.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// Same mode over the polynomial ring (generic-element computations).
    pub fn with_poly_ring(&self, nvars: usize) -> EnvConfig<'a> {
        let p = self.lsa.characteristic;
        assert!(p > 0, "generic elements need positive characteristic");
        EnvConfig {
            lsa: self.lsa,
            mode: self.mode,
            ring: Ring::PolyOverFp { p, nvars },
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn zero(&self) -> EnvElement {
        EnvElement {
            terms: BTreeMap::new(),
            mode: self.mode,
            ring: self.ring.clone(),
            saturated: false,
        }
    }

    pub fn one(&self) -> EnvElement {
        let mut e = self.zero();
        e.insert(&self.ring, PBWMonomial::one(self.lsa.n_even), self.ring.one());
        e
    }

    pub fn monomial(&self, m: PBWMonomial) -> EnvElement {
        let mut e = self.zero();
        e.insert(&self.ring, m, self.ring.one());
        e
    }

    /// The image of a Lie algebra vector (degree-one element).
    pub fn lie_element(&self, v: &GradedVector) -> EnvElement {
        let n_even = self.lsa.n_even;
        let mut e = self.zero();
        for (i, c) in v.iter() {
            let mut m = PBWMonomial::one(n_even);
            if i < n_even {
                m.even[i] = 1;
            } else {
                m.odd.push((i - n_even) as u32);
            }
            e.insert(&self.ring, m, self.ring.lift(c));
        }
        e
    }

    pub fn generator(&self, lie_index: usize) -> EnvElement {
        self.lie_element(&GradedVector::unit(&self.lsa.ring, lie_index))
    }

    /// Normal form of a linear combination of generator words.
    fn normalize(&self, items: Vec<(Coeff, Vec<u32>)>) -> EnvElement {
        let n_even = self.lsa.n_even as u32;
        let p = self.lsa.characteristic;
        let restricted = self.mode == EnvMode::Restricted;
        let cap = match self.mode {
            EnvMode::Truncated(n) => Some(n),
            EnvMode::Restricted => None,
        };
        let mut out = self.zero();
        let mut stack = items;
        while let Some((c, w)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            if let Some(n) = cap {
                if w.len() > n {
                    out.saturated = true;
                    continue;
                }
            }
            // leftmost violation of normal order
            let mut violation = None;
            for i in 0..w.len() {
                if i + 1 < w.len() {
                    let (a, b) = (w[i], w[i + 1]);
                    if a > b {
                        violation = Some((i, Rule::Swap));
                        break;
                    }
                    if a == b && a >= n_even {
                        violation = Some((i, Rule::OddSquare));
                        break;
                    }
                }
                if restricted
                    && w[i] < n_even
                    && i + (p as usize) <= w.len()
                    && w[i..i + p as usize].iter().all(|&g| g == w[i])
                    && (i == 0 || w[i - 1] != w[i])
                {
                    violation = Some((i, Rule::PPower));
                    break;
                }
            }
            let Some((i, rule)) = violation else {
                out.insert(&self.ring.clone(), self.word_to_monomial(&w), c);
                continue;
            };
            match rule {
                Rule::Swap => {
                    let (a, b) = (w[i], w[i + 1]);
                    let both_odd = a >= n_even && b >= n_even;
                    let sign = if both_odd { self.ring.from_i64(-1) } else { self.ring.one() };
                    let mut swapped = w.clone();
                    swapped.swap(i, i + 1);
                    stack.push((self.ring.mul(&c, &sign), swapped));
                    let bracket = self.lsa.bracket_basis(a as usize, b as usize);
                    for (k, lam) in bracket.iter() {
                        let mut shorter = Vec::with_capacity(w.len() - 1);
                        shorter.extend_from_slice(&w[..i]);
                        shorter.push(k as u32);
                        shorter.extend_from_slice(&w[i + 2..]);
                        stack.push((self.ring.mul(&c, &self.ring.lift(lam)), shorter));
                    }
                }
                Rule::OddSquare => {
                    let y = w[i] as usize;
                    let half = self.ring.half();
                    let bracket = self.lsa.bracket_basis(y, y);
                    for (k, lam) in bracket.iter() {
                        let mut shorter = Vec::with_capacity(w.len() - 1);
                        shorter.extend_from_slice(&w[..i]);
                        shorter.push(k as u32);
                        shorter.extend_from_slice(&w[i + 2..]);
                        let coeff =
                            self.ring.mul(&c, &self.ring.mul(&half, &self.ring.lift(lam)));
                        stack.push((coeff, shorter));
                    }
                }
                Rule::PPower => {
                    let x = w[i] as usize;
                    let image = self.lsa.p_map_basis(x).clone();
                    for (k, lam) in image.iter() {
                        let mut shorter = Vec::with_capacity(w.len() + 1 - p as usize);
                        shorter.extend_from_slice(&w[..i]);
                        shorter.push(k as u32);
                        shorter.extend_from_slice(&w[i + p as usize..]);
                        stack.push((self.ring.mul(&c, &self.ring.lift(lam)), shorter));
                    }
                }
            }
        }
        out
    }

    fn word_to_monomial(&self, w: &[u32]) -> PBWMonomial {
        let n_even = self.lsa.n_even;
        let mut m = PBWMonomial::one(n_even);
        for &g in w {
            if (g as usize) < n_even {
                m.even[g as usize] += 1;
            } else {
                m.odd.push(g - n_even as u32);
            }
        }
        debug_assert!(m.odd.windows(2).all(|p| p[0] < p[1]));
        if self.mode == EnvMode::Restricted {
            debug_assert!(m.even.iter().all(|&e| (e as u64) < self.lsa.characteristic));
        }
        m
    }

    /// Normal form of (monomial * generator), memoized.
    fn mul_mono_gen(&self, m: &PBWMonomial, g: u32) -> EnvElement {
        let key = (m.clone(), g);
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let mut word = m.word(self.lsa.n_even);
        word.push(g);
        let result = self.normalize(vec![(self.ring.one(), word)]);
        self.memo.lock().unwrap().insert(key, result.clone());
        result
    }

    fn mul_mono_mono(&self, m1: &PBWMonomial, m2: &PBWMonomial) -> EnvElement {
        let mut acc = self.monomial(m1.clone());
        for g in m2.word(self.lsa.n_even) {
            let mut next = self.zero();
            next.saturated = acc.saturated;
            for (m, c) in &acc.terms {
                let step = self.mul_mono_gen(m, g);
                next.saturated |= step.saturated;
                for (sm, sc) in &step.terms {
                    next.insert(&self.ring.clone(), sm.clone(), self.ring.mul(c, sc));
                }
            }
            acc = next;
        }
        acc
    }

    /// Product in normal form. Associative and bilinear; in truncated mode
    /// exact whenever no word exceeded the cap (`saturated` stays false).
    pub fn multiply(&self, a: &EnvElement, b: &EnvElement) -> Result<EnvElement, EnvError> {
        check_compat(a, b)?;
        if a.mode != self.mode {
            return Err(EnvError::ModeMismatch);
        }
        if a.ring != self.ring {
            return Err(EnvError::RingMismatch);
        }
        let mut out = self.zero();
        out.saturated = a.saturated || b.saturated;
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                let prod = self.mul_mono_mono(m1, m2);
                out.saturated |= prod.saturated;
                let c = self.ring.mul(c1, c2);
                for (m, pc) in &prod.terms {
                    out.insert(&self.ring.clone(), m.clone(), self.ring.mul(&c, pc));
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, a: &EnvElement, b: &EnvElement) -> Result<EnvElement, EnvError> {
        let ab = self.multiply(a, b)?;
        let ba = self.multiply(b, a)?;
        ab.sub(&ba)
    }

    /// Left-normed `[a, b, ..., b]` with n copies of b.
    pub fn iterated_commutator(
        &self,
        a: &EnvElement,
        b: &EnvElement,
        n: usize,
    ) -> Result<EnvElement, EnvError> {
        assert!(n >= 1);
        let mut c = self.commutator(a, b)?;
        for _ in 1..n {
            c = self.commutator(&c, b)?;
        }
        Ok(c)
    }

    /// `a^n` by repeated squaring.
    pub fn power(&self, a: &EnvElement, n: u64) -> Result<EnvElement, EnvError> {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.multiply(&acc, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.multiply(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// The full normal monomial basis, in canonical (graded-lex) order.
    pub fn carrier_basis(&self) -> Vec<PBWMonomial> {
        let n_even = self.lsa.n_even;
        let n_odd = self.lsa.n_odd;
        let mut out = Vec::new();
        match self.mode {
            EnvMode::Restricted => {
                let p = self.lsa.characteristic as u32;
                let mut even = vec![0u32; n_even];
                loop {
                    for mask in 0u64..(1 << n_odd) {
                        let odd: Vec<u32> =
                            (0..n_odd as u32).filter(|j| mask >> j & 1 == 1).collect();
                        out.push(PBWMonomial { even: even.clone(), odd });
                    }
                    let mut i = 0;
                    loop {
                        if i == n_even {
                            out.sort();
                            return out;
                        }
                        even[i] += 1;
                        if even[i] < p {
                            break;
                        }
                        even[i] = 0;
                        i += 1;
                    }
                }
            }
            EnvMode::Truncated(cap) => {
                fn rec(
                    even: &mut Vec<u32>,
                    pos: usize,
                    left: usize,
                    n_odd: usize,
                    out: &mut Vec<PBWMonomial>,
                ) {
                    if pos == even.len() {
                        for mask in 0u64..(1 << n_odd) {
                            let odd: Vec<u32> =
                                (0..n_odd as u32).filter(|j| mask >> j & 1 == 1).collect();
                            if odd.len() <= left {
                                out.push(PBWMonomial { even: even.clone(), odd });
                            }
                        }
                        return;
                    }
                    for e in 0..=left as u32 {
                        even[pos] = e;
                        rec(even, pos + 1, left - e as usize, n_odd, out);
                        even[pos] = 0;
                    }
                }
                let mut even = vec![0u32; n_even];
                rec(&mut even, 0, cap, n_odd, &mut out);
                out.sort();
                out
            }
        }
    }

    pub fn format_element(&self, e: &EnvElement) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in e.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let mono = self.format_monomial(m);
            let coeff = match c {
                Coeff::Poly(_) => format!("({c})"),
                _ => format!("{c}"),
            };
            if mono == "1" {
                let _ = write!(out, "{coeff}");
            } else if c.is_one() {
                let _ = write!(out, "{mono}");
            } else {
                let _ = write!(out, "{coeff}*{mono}");
            }
        }
        out
    }

    pub fn format_monomial(&self, m: &PBWMonomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.even.iter().enumerate() {
            if e == 1 {
                parts.push(self.lsa.basis[i].name.clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.lsa.basis[i].name, e));
            }
        }
        for &j in &m.odd {
            parts.push(self.lsa.basis[self.lsa.n_even + j as usize].name.clone());
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Inverse of [`format_element`] for field coefficients (witness strings
    /// in reports re-enter through this).
    pub fn parse_element(&self, s: &str) -> Result<EnvElement, EnvError> {
        let s = s.trim();
        let mut out = self.zero();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let term = term.trim();
            let (coeff_str, mono_str) = split_leading_coeff(term);
            let coeff = match coeff_str {
                Some(cs) => parse_field_coeff(&self.ring, cs).map_err(EnvError::Parse)?,
                None => self.ring.one(),
            };
            let mono = self.parse_monomial(mono_str)?;
            out.insert(&self.ring.clone(), mono, coeff);
        }
        Ok(out)
    }

    fn parse_monomial(&self, s: &str) -> Result<PBWMonomial, EnvError> {
        let mut m = PBWMonomial::one(self.lsa.n_even);
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(m);
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u32 = e
                        .parse()
                        .map_err(|_| EnvError::Parse(format!("bad exponent in `{factor}`")))?;
                    (n, e)
                }
                None => (factor, 1),
            };
            let idx = self
                .lsa
                .basis_index(name)
                .ok_or_else(|| EnvError::Parse(format!("unknown generator `{name}`")))?;
            if idx < self.lsa.n_even {
                m.even[idx] += exp;
            } else {
                if exp != 1 {
                    return Err(EnvError::Parse(format!("odd generator power in `{factor}`")));
                }
                m.odd.push((idx - self.lsa.n_even) as u32);
            }
        }
        m.odd.sort();
        if m.odd.windows(2).any(|p| p[0] == p[1]) {
            return Err(EnvError::Parse("repeated odd generator in monomial".into()));
        }
        Ok(m)
    }
}

/// Split `2*x*y` / `1/2*x` / `(t0 + 1)*x` into coefficient and monomial
/// parts. A leading factor is a coefficient if it starts with a digit, `-`,
/// or `(`.
fn split_leading_coeff(term: &str) -> (Option<&str>, &str) {
    let term = term.trim();
    if term.starts_with('(') {
        if let Some(close) = term.find(')') {
            let rest = term[close + 1..].trim_start_matches('*');
            return (Some(&term[1..close]), rest);
        }
    }
    let first = term.chars().next().unwrap_or(' ');
    if first.is_ascii_digit() || first == '-' {
        match term.find('*') {
            Some(star) => (Some(&term[..star]), &term[star + 1..]),
            None => (Some(term), ""),
        }
    } else {
        (None, term)
    }
}

fn parse_field_coeff(ring: &Ring, s: &str) -> Result<Coeff, String> {
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| format!("bad numerator `{a}`"))?;
        let b: i64 = b.trim().parse().map_err(|_| format!("bad denominator `{b}`"))?;
        let num = ring.from_i64(a);
        let den = ring.from_i64(b);
        let inv = ring.inv(&den).map_err(|e| e.to_string())?;
        Ok(ring.mul(&num, &inv))
    } else {
        let n: i64 = s.trim().parse().map_err(|_| format!("bad coefficient `{s}`"))?;
        Ok(ring.from_i64(n))
    }
}

/// Indexed carrier basis with dense-coordinate conversions; the matrix side
/// of the envelope.
pub struct RegularRep {
    pub basis: Vec<PBWMonomial>,
    index: HashMap<PBWMonomial, usize>,
}

impl RegularRep {
    pub fn new(cfg: &EnvConfig) -> Self {
        let basis = cfg.carrier_basis();
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        RegularRep { basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_dense(&self, cfg: &EnvConfig, e: &EnvElement) -> Vec<Coeff> {
        let mut v = vec![cfg.ring.zero(); self.dim()];
        for (m, c) in &e.terms {
            let i = *self.index.get(m).expect("monomial outside carrier");
            v[i] = c.clone();
        }
        v
    }

    pub fn from_dense(&self, cfg: &EnvConfig, v: &[Coeff]) -> EnvElement {
        let mut e = cfg.zero();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                e.insert(&cfg.ring, self.basis[i].clone(), c.clone());
            }
        }
        e
    }

    /// Matrix of `v -> a*v - v*a` on the carrier. The boolean reports
    /// whether any truncation drop occurred (always false in restricted
    /// mode).
    pub fn ad_matrix(&self, cfg: &EnvConfig, a: &EnvElement) -> (Mat, bool) {
        let n = self.dim();
        let mut mat = Mat::zeros(&cfg.ring, n, n);
        let mut saturated = false;
        for (j, m) in self.basis.iter().enumerate() {
            let bm = cfg.monomial(m.clone());
            let image = cfg.commutator(a, &bm).expect("carrier element is compatible");
            saturated |= image.saturated;
            for (im, c) in &image.terms {
                let i = *self.index.get(im).expect("normal form stays in carrier");
                *mat.at_mut(i, j) = c.clone();
            }
        }
        (mat, saturated)
    }

    /// Matrix of left multiplication `v -> a*v`.
    pub fn left_matrix(&self, cfg: &EnvConfig, a: &EnvElement) -> (Mat, bool) {
        let n = self.dim();
        let mut mat = Mat::zeros(&cfg.ring, n, n);
        let mut saturated = false;
        for (j, m) in self.basis.iter().enumerate() {
            let bm = cfg.monomial(m.clone());
            let image = cfg.multiply(a, &bm).expect("carrier element is compatible");
            saturated |= image.saturated;
            for (im, c) in &image.terms {
                let i = *self.index.get(im).expect("normal form stays in carrier");
                *mat.at_mut(i, j) = c.clone();
            }
        }
        (mat, saturated)
    }
}

/// Per-basis-element ad matrices over `F_p`: `ad(b) = sum_i b_i AD_i`.
/// This is what exhaustive oracle sweeps iterate with.
pub struct FpCarrier {
    pub p: u64,
    pub dim: usize,
    pub ad_of_basis: Vec<FpMat>,
}

impl FpCarrier {
    pub fn new(cfg: &EnvConfig, rep: &RegularRep) -> FpCarrier {
        let p = match cfg.ring {
            Ring::Fp(p) => p,
            _ => panic!("FpCarrier needs the F_p ring"),
        };
        let dim = rep.dim();
        let ad_of_basis = rep
            .basis
            .iter()
            .map(|m| {
                let (mat, _) = rep.ad_matrix(cfg, &cfg.monomial(m.clone()));
                FpMat::from_mat_p(&mat, p)
            })
            .collect();
        FpCarrier { p, dim, ad_of_basis }
    }

    /// ad matrix of the element with the given carrier coordinates.
    pub fn ad_of(&self, coords: &[u64]) -> FpMat {
        let mut out = FpMat::zeros(self.p, self.dim);
        for (c, m) in coords.iter().zip(&self.ad_of_basis) {
            if *c != 0 {
                out.add_scaled(m, *c);
            }
        }
        out
    }
}

/// Chain data for the associative commutator ideal `R = [A,A]A` and the Lie
/// central chain of the envelope.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub assoc_dims: Vec<usize>,
    pub assoc_reaches_zero: bool,
    /// Least t with R^t = 0; every r in R then satisfies r^t = 0, so R is
    /// nil of index at most t.
    pub assoc_nil_steps: Option<usize>,
    pub lie_dims: Vec<usize>,
    pub lie_reaches_zero: bool,
    pub lie_class: Option<usize>,
    /// Any truncation drop during chain computation (truncated mode only).
    pub saturated: bool,
}

/// Compute both chains on the carrier.
pub fn commutator_ideal_chain(cfg: &EnvConfig, rep: &RegularRep) -> ChainReport {
    let n = rep.dim();
    let ring = cfg.ring.clone();
    let mut saturated = false;

    let mut mul = |a: &EnvElement, b: &EnvElement| -> EnvElement {
        let r = cfg.multiply(a, b).expect("compatible");
        saturated |= r.saturated;
        r
    };

    // span of pairwise commutators of basis monomials
    let mut comm_rows = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let a = cfg.monomial(rep.basis[i].clone());
            let b = cfg.monomial(rep.basis[j].clone());
            let ab = mul(&a, &b);
            let ba = mul(&b, &a);
            let c = ab.sub(&ba).expect("compatible");
            if !c.is_zero() {
                comm_rows.push(rep.to_dense(cfg, &c));
            }
        }
    }
    let comm_span = Subspace::from_rows(&ring, n, comm_rows);

    // R = [A,A]*A; multiplying the reduced commutator span by every basis
    // monomial (including 1) spans the ideal
    let mut r_rows = Vec::new();
    for row in comm_span.rows() {
        let c = rep.from_dense(cfg, row);
        for m in &rep.basis {
            let prod = mul(&c, &cfg.monomial(m.clone()));
            if !prod.is_zero() {
                r_rows.push(rep.to_dense(cfg, &prod));
            }
        }
    }
    let r = Subspace::from_rows(&ring, n, r_rows);

    let mut assoc_dims = vec![r.dim()];
    let mut power = r.clone();
    let mut assoc_reaches_zero = power.is_zero();
    let mut assoc_nil_steps = if power.is_zero() { Some(1) } else { None };
    let mut steps = 1usize;
    while !power.is_zero() {
        let mut rows = Vec::new();
        for a in r.rows() {
            let ae = rep.from_dense(cfg, a);
            for b in power.rows() {
                let prod = mul(&ae, &rep.from_dense(cfg, b));
                if !prod.is_zero() {
                    rows.push(rep.to_dense(cfg, &prod));
                }
            }
        }
        let next = Subspace::from_rows(&ring, n, rows);
        steps += 1;
        if next.is_zero() {
            assoc_dims.push(0);
            assoc_reaches_zero = true;
            assoc_nil_steps = Some(steps);
            break;
        }
        if next == power {
            break;
        }
        assoc_dims.push(next.dim());
        power = next;
    }

    // Lie chain: V_1 = A, V_{k+1} = span [V_k, basis]
    let mut lie_dims = vec![n];
    let mut current = Subspace::full(&ring, n);
    let mut lie_reaches_zero = n == 0;
    let mut lie_class = if n == 0 { Some(0) } else { None };
    let mut k = 1usize;
    while !current.is_zero() {
        let mut rows = Vec::new();
        for v in current.rows() {
            let ve = rep.from_dense(cfg, v);
            for m in &rep.basis {
                let me = cfg.monomial(m.clone());
                let c = mul(&ve, &me).sub(&mul(&me, &ve)).expect("compatible");
                if !c.is_zero() {
                    rows.push(rep.to_dense(cfg, &c));
                }
            }
        }
        let next = Subspace::from_rows(&ring, n, rows);
        k += 1;
        if next.is_zero() {
            lie_dims.push(0);
            lie_reaches_zero = true;
            lie_class = Some(k - 1);
            break;
        }
        if next == current {
            break;
        }
        lie_dims.push(next.dim());
        current = next;
    }

    ChainReport {
        assoc_dims,
        assoc_reaches_zero,
        assoc_nil_steps,
        lie_dims,
        lie_reaches_zero,
        lie_class,
        saturated,
    }
}

/// Joint kernel of the adjoint actions of the Lie generators: the center of
/// the envelope (generators generate, so commuting with them suffices).
pub fn env_center(cfg: &EnvConfig, rep: &RegularRep) -> Vec<EnvElement> {
    let n = rep.dim();
    if cfg.lsa.dim() == 0 {
        return rep.basis.iter().map(|m| cfg.monomial(m.clone())).collect();
    }
    let mut stacked = Vec::new();
    for g in 0..cfg.lsa.dim() {
        let (ad, _) = rep.ad_matrix(cfg, &cfg.generator(g));
        for i in 0..n {
            stacked.push(ad.row(i).to_vec());
        }
    }
    let kernel = null_space(&cfg.ring, &Mat::from_rows(stacked));
    kernel.iter().map(|v| rep.from_dense(cfg, v)).collect()
}

/// `sum_i t_{offset+i} m_i` over all carrier monomials of degree <= bound
/// (all monomials when `bound` is `None`), optionally without the identity
/// monomial (augmentation-ideal variant).
pub fn generic_element(
    cfg: &EnvConfig,
    bound: Option<usize>,
    include_identity: bool,
    var_offset: usize,
) -> Result<EnvElement, EnvError> {
    let Ring::PolyOverFp { nvars, .. } = cfg.ring else {
        panic!("generic elements need the polynomial ring");
    };
    let monomials: Vec<PBWMonomial> = cfg
        .carrier_basis()
        .into_iter()
        .filter(|m| bound.is_none_or(|d| m.degree() <= d))
        .filter(|m| include_identity || !m.is_one())
        .collect();
    if var_offset + monomials.len() > nvars {
        return Err(EnvError::VariableBudgetExceeded {
            needed: var_offset + monomials.len(),
            available: nvars,
        });
    }
    let mut e = cfg.zero();
    for (k, m) in monomials.into_iter().enumerate() {
        e.insert(&cfg.ring.clone(), m, cfg.ring.var(var_offset + k));
    }
    Ok(e)
}
