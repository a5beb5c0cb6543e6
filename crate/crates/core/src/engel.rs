//! Independent Engel oracles.
//!
//! The structural deciders in [`crate::verdict`] never touch the enveloping
//! algebra; everything here works inside it, so the two routes cross-check
//! each other. Four tiers, by strength and cost:
//!
//! * **Exact** ([`engel_degree_exact`]): enumerate every element b of u(L)
//!   and compute the nilpotency index of ad(b) on the regular
//!   representation. Since `[a, b, ..., b] = ±(ad b)^n(a)`, the algebra is
//!   bounded Lie Engel iff every ad(b) is nilpotent, and the minimal Engel
//!   degree is the maximal index. Enumerating b only (not pairs) is what
//!   makes this affordable.
//! * **Symbolic** ([`central_power_check`]): decide whether `w^{p^k}` is
//!   central for every w by computing the power of a generic element with
//!   polynomial coefficients; a formal zero of all generator commutators is
//!   a proof, a formal nonzero is turned into a concrete witness by point
//!   search.
//! * **Certificate** ([`chain_certificate`]): the constructive route. If the
//!   commutator ideal chain of u(L) reaches zero in t steps (so R is nil of
//!   index <= t <= p^m), the p-map orbit of every even element becomes
//!   central within s steps, and every odd basis square is p-nilpotent with
//!   exponent below n, then u(L) is p^(m+n)-Engel. The produced bound is
//!   re-verified on random samples. A chain that stabilizes away from zero
//!   refutes bounded Engel outright: bounded Engel forces the commutator
//!   ideal to be nil of bounded index, and in finite dimension a nil ideal
//!   is nilpotent, so its power chain would reach zero.
//! * **Sample** ([`engel_witness_search`], [`sample_ad_witness`]): seeded
//!   random search for re-verifiable witnesses.

use thiserror::Error;

use crate::coeffs::{poly_find_nonzero_point, Coeff};
use crate::env::{
    commutator_ideal_chain, generic_element, EnvConfig, EnvElement, EnvError, EnvMode, FpCarrier,
    PBWMonomial, RegularRep,
};
use crate::linalg::FpMat;
use crate::lsa::{validate, GradedVector, LsaError};
use crate::rng::SplitMix64;
use crate::subspace::{center, element_p_nilpotent, FpVectors, POrbit};

#[derive(Debug, Error)]
pub enum EngelError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Lsa(#[from] LsaError),
    #[error("oracle requires restricted mode")]
    NotRestrictedMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleTier {
    Exact,
    Symbolic,
    Certificate,
    Sample,
}

impl OracleTier {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleTier::Exact => "exact",
            OracleTier::Symbolic => "symbolic",
            OracleTier::Certificate => "certificate",
            OracleTier::Sample => "sample",
        }
    }
}

#[derive(Clone, Debug)]
pub enum OracleVerdict {
    /// Minimal n such that `[a, b, ..., b] = 0` (n copies of b) holds for
    /// all a, b.
    EngelWithDegree(usize),
    /// Re-verifiable counterexample: `[a, b, ..., b] != 0` with n copies.
    NotEngelWitness { a: EnvElement, b: EnvElement, n: usize },
    /// Bounded Engel certified constructively with the stated degree bound.
    CertifiedEngelViaChain { bound: u64 },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub verdict: OracleVerdict,
    pub tier: OracleTier,
    pub budget_spent: u64,
    /// For exact EngelWithDegree(n) with n >= 2, a pair with
    /// `[a, b, ..., b] != 0` at n-1 copies, witnessing minimality.
    pub minimality: Option<(EnvElement, EnvElement, usize)>,
    pub notes: Vec<String>,
}

fn first_nonzero_column(m: &FpMat) -> Option<usize> {
    (0..m.n).find(|&j| (0..m.n).any(|i| m.at(i, j) != 0))
}

fn element_from_coords(cfg: &EnvConfig, rep: &RegularRep, coords: &[u64]) -> EnvElement {
    let dense: Vec<Coeff> = coords.iter().map(|&c| Coeff::Fp(c)).collect();
    rep.from_dense(cfg, &dense)
}

/// Exhaustive minimal-Engel-degree computation on u(L).
///
/// ad(b) ignores the identity component of b and is insensitive to scaling,
/// so the sweep runs over monic coordinate vectors on the non-identity part
/// of the carrier: p^(dim-1) elements against the budget.
pub fn engel_degree_exact(
    cfg: &EnvConfig,
    rep: &RegularRep,
    budget: u64,
) -> Result<OracleResult, EngelError> {
    if cfg.mode != EnvMode::Restricted {
        return Err(EngelError::NotRestrictedMode);
    }
    let p = cfg.lsa.characteristic;
    let dim = rep.dim();
    debug_assert!(rep.basis[0].is_one());
    let needed = (p as u128).checked_pow(dim as u32 - 1).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Ok(OracleResult {
            verdict: OracleVerdict::Inconclusive {
                reason: format!("exact sweep needs {needed} elements, budget {budget}"),
            },
            tier: OracleTier::Exact,
            budget_spent: 0,
            minimality: None,
            notes: vec![],
        });
    }
    let carrier = FpCarrier::new(cfg, rep);
    let mut max_index = 1usize;
    let mut minimality: Option<(EnvElement, EnvElement, usize)> = None;
    let mut spent = 0u64;
    for rest in FpVectors::new(dim - 1, p) {
        match rest.iter().find(|&&c| c != 0) {
            None => continue,
            Some(&first) if first != 1 => continue,
            _ => {}
        }
        spent += 1;
        let mut coords = Vec::with_capacity(dim);
        coords.push(0);
        coords.extend_from_slice(&rest);
        let ad = carrier.ad_of(&coords);
        // nothing to learn unless this b beats the current maximum
        if ad.pow(max_index as u64).is_zero() {
            continue;
        }
        match ad.nilpotency_index() {
            Some(k) => {
                debug_assert!(k > max_index);
                max_index = k;
                let power = ad.pow(k as u64 - 1);
                let j = first_nonzero_column(&power).expect("power nonzero");
                let a = cfg.monomial(rep.basis[j].clone());
                let b = element_from_coords(cfg, rep, &coords);
                minimality = Some((a, b, k - 1));
            }
            None => {
                let power = ad.pow(dim as u64);
                let j = first_nonzero_column(&power).expect("non-nilpotent");
                let a = cfg.monomial(rep.basis[j].clone());
                let b = element_from_coords(cfg, rep, &coords);
                return Ok(OracleResult {
                    verdict: OracleVerdict::NotEngelWitness { a, b, n: dim },
                    tier: OracleTier::Exact,
                    budget_spent: spent,
                    minimality: None,
                    notes: vec![],
                });
            }
        }
    }
    Ok(OracleResult {
        verdict: OracleVerdict::EngelWithDegree(max_index),
        tier: OracleTier::Exact,
        budget_spent: spent,
        minimality,
        notes: vec![],
    })
}

fn random_sparse_element(
    cfg: &EnvConfig,
    monomials: &[PBWMonomial],
    rng: &mut SplitMix64,
    density: usize,
) -> EnvElement {
    let mut acc = cfg.zero();
    for _ in 0..density {
        let m = monomials[rng.below(monomials.len() as u64) as usize].clone();
        let c = match cfg.lsa.characteristic {
            0 => cfg.ring.from_i64(rng.small_int(3)),
            p => cfg.ring.from_i64(rng.below(p) as i64),
        };
        acc = acc.add(&cfg.monomial(m).scale(&c)).expect("compatible");
    }
    acc
}

/// Seeded random search for a pair with `[a, b, ..., b] != 0` (n copies).
/// In truncated mode a nonzero value only counts when no truncation drop
/// occurred, so reported witnesses are exact U(L) facts.
pub fn engel_witness_search(
    cfg: &EnvConfig,
    n: usize,
    trials: u64,
    degree_cap: usize,
    seed: u64,
) -> Result<OracleResult, EngelError> {
    let monomials: Vec<_> = cfg
        .carrier_basis()
        .into_iter()
        .filter(|m| m.degree() <= degree_cap && !m.is_one())
        .collect();
    if monomials.is_empty() {
        return Ok(OracleResult {
            verdict: OracleVerdict::Inconclusive { reason: "no sampling monomials".into() },
            tier: OracleTier::Sample,
            budget_spent: 0,
            minimality: None,
            notes: vec![],
        });
    }
    let mut rng = SplitMix64::new(seed);
    let mut saturated_hits = 0u64;
    for trial in 0..trials {
        let a = random_sparse_element(cfg, &monomials, &mut rng, 2);
        let b = random_sparse_element(cfg, &monomials, &mut rng, 2);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let c = cfg.iterated_commutator(&a, &b, n)?;
        if !c.is_zero() {
            if c.saturated {
                saturated_hits += 1;
                continue;
            }
            return Ok(OracleResult {
                verdict: OracleVerdict::NotEngelWitness { a, b, n },
                tier: OracleTier::Sample,
                budget_spent: trial + 1,
                minimality: None,
                notes: vec![],
            });
        }
    }
    let mut notes = vec![];
    if saturated_hits > 0 {
        notes.push(format!(
            "{saturated_hits} nonzero values hit the truncation cap and were not counted"
        ));
    }
    Ok(OracleResult {
        verdict: OracleVerdict::Inconclusive {
            reason: format!("no witness for n = {n} in {trials} trials"),
        },
        tier: OracleTier::Sample,
        budget_spent: trials,
        minimality: None,
        notes,
    })
}

/// Random search for b with ad(b) non-nilpotent on u(L); any hit refutes
/// bounded Engel for every degree at once.
pub fn sample_ad_witness(
    cfg: &EnvConfig,
    rep: &RegularRep,
    trials: u64,
    seed: u64,
) -> Result<Option<(EnvElement, EnvElement, usize)>, EngelError> {
    if cfg.mode != EnvMode::Restricted {
        return Err(EngelError::NotRestrictedMode);
    }
    let carrier = FpCarrier::new(cfg, rep);
    let p = carrier.p;
    let dim = rep.dim();
    let mut rng = SplitMix64::new(seed);
    for _ in 0..trials {
        let mut coords = vec![0u64; dim];
        for c in coords.iter_mut().skip(1) {
            *c = rng.below(p);
        }
        let ad = carrier.ad_of(&coords);
        let power = ad.pow(dim as u64);
        if let Some(j) = first_nonzero_column(&power) {
            let a = cfg.monomial(rep.basis[j].clone());
            let b = element_from_coords(cfg, rep, &coords);
            return Ok(Some((a, b, dim)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub enum CentralPower {
    /// `w^{p^k}` is central for every w in u(L).
    AllCentral,
    /// Concrete w whose p^k-th power fails to commute with a generator.
    NotCentral { witness: EnvElement, generator: usize },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug)]
pub struct CentralPowerResult {
    pub outcome: CentralPower,
    pub tier: OracleTier,
    pub budget_spent: u64,
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Decide whether `w^{p^k}` lies in the center of u(L) for every w. When it
/// does, `(ad w)^{p^k} = ad(w^{p^k}) = 0`, so u(L) is p^k-Engel.
///
/// Symbolic tier when the generic power fits the budget, else exhaustive
/// enumeration via `(ad w)^{p^k} = ad(w^{p^k})`, else inconclusive.
pub fn central_power_check(
    cfg: &EnvConfig,
    rep: &RegularRep,
    k: u32,
    budget: u64,
    seed: u64,
) -> Result<CentralPowerResult, EngelError> {
    if cfg.mode != EnvMode::Restricted {
        return Err(EngelError::NotRestrictedMode);
    }
    let p = cfg.lsa.characteristic;
    let dim = rep.dim();
    let pk = p.checked_pow(k).expect("p^k fits u64");

    // a generic w^{p^k} has coefficients of degree p^k in dim variables
    let symbolic_terms = binomial_u128(dim as u128 + pk as u128, pk as u128);
    if symbolic_terms.saturating_mul(dim as u128) <= budget as u128 {
        let poly_cfg = cfg.with_poly_ring(dim);
        let w = generic_element(&poly_cfg, None, true, 0)?;
        let wp = poly_cfg.power(&w, pk)?;
        for g in 0..cfg.lsa.dim() {
            let comm = poly_cfg.commutator(&wp, &poly_cfg.generator(g))?;
            if comm.is_zero() {
                continue;
            }
            // formally nonzero: extract a concrete witness point
            let (_, offending) = comm.terms.iter().next().expect("nonzero");
            let Coeff::Poly(f) = offending else { unreachable!() };
            match poly_find_nonzero_point(f, p, dim, budget, seed) {
                Ok(Some(point)) => {
                    let witness = element_from_coords(cfg, rep, &point);
                    // re-verify numerically
                    let wpk = cfg.power(&witness, pk)?;
                    let check = cfg.commutator(&wpk, &cfg.generator(g))?;
                    debug_assert!(!check.is_zero());
                    return Ok(CentralPowerResult {
                        outcome: CentralPower::NotCentral { witness, generator: g },
                        tier: OracleTier::Symbolic,
                        budget_spent: 0,
                    });
                }
                Ok(None) => unreachable!("f is formally nonzero"),
                Err(_) => {
                    return Ok(CentralPowerResult {
                        outcome: CentralPower::Inconclusive {
                            reason: "formally nonzero commutator vanishes on all probed points"
                                .into(),
                        },
                        tier: OracleTier::Symbolic,
                        budget_spent: budget,
                    });
                }
            }
        }
        return Ok(CentralPowerResult {
            outcome: CentralPower::AllCentral,
            tier: OracleTier::Symbolic,
            budget_spent: 0,
        });
    }

    // enumeration tier: centrality of w^{p^k} is invariant under scaling w
    // and under adding multiples of 1, so monic non-identity sweeps suffice
    let needed = (p as u128).checked_pow(dim as u32 - 1).unwrap_or(u128::MAX);
    if needed <= budget as u128 {
        let carrier = FpCarrier::new(cfg, rep);
        let mut spent = 0u64;
        for rest in FpVectors::new(dim - 1, p) {
            match rest.iter().find(|&&c| c != 0) {
                None => continue,
                Some(&first) if first != 1 => continue,
                _ => {}
            }
            spent += 1;
            let mut coords = Vec::with_capacity(dim);
            coords.push(0);
            coords.extend_from_slice(&rest);
            let ad = carrier.ad_of(&coords);
            if !ad.pow(pk).is_zero() {
                let witness = element_from_coords(cfg, rep, &coords);
                let wpk = cfg.power(&witness, pk)?;
                let generator = (0..cfg.lsa.dim())
                    .find(|&g| !cfg.commutator(&wpk, &cfg.generator(g)).unwrap().is_zero())
                    .expect("ad(w^{p^k}) != 0 on the regular representation");
                return Ok(CentralPowerResult {
                    outcome: CentralPower::NotCentral { witness, generator },
                    tier: OracleTier::Exact,
                    budget_spent: spent,
                });
            }
        }
        return Ok(CentralPowerResult {
            outcome: CentralPower::AllCentral,
            tier: OracleTier::Exact,
            budget_spent: spent,
        });
    }

    Ok(CentralPowerResult {
        outcome: CentralPower::Inconclusive {
            reason: format!(
                "symbolic size {symbolic_terms} and enumeration size {needed} both exceed budget {budget}"
            ),
        },
        tier: OracleTier::Symbolic,
        budget_spent: 0,
    })
}

/// Outcome of the constructive certificate route.
#[derive(Clone, Debug)]
pub enum ChainCertificate {
    /// Bounded Engel with degree at most `bound = p^(m+n)`: m from the nil
    /// index of the commutator ideal, n covering both the centrality
    /// exponent of even p-map orbits and the vanishing exponent of odd
    /// squares.
    Certified { bound: u64, m: u32, n: u32, samples_checked: u64, even_exact: bool },
    /// The commutator ideal chain stabilizes away from zero, which refutes
    /// bounded Engel.
    RefutedByChain,
    Inconclusive { reason: String },
    /// The constructive bound failed sample re-verification; a mathematical
    /// inconsistency the caller must treat as a disagreement.
    CertificateInvalid { bound: u64, a: EnvElement, b: EnvElement },
}

pub fn chain_certificate(
    cfg: &EnvConfig,
    rep: &RegularRep,
    budget: u64,
    seed: u64,
) -> Result<ChainCertificate, EngelError> {
    if cfg.mode != EnvMode::Restricted {
        return Err(EngelError::NotRestrictedMode);
    }
    let l = cfg.lsa;
    let p = l.characteristic;
    let chain = commutator_ideal_chain(cfg, rep);
    if !chain.assoc_reaches_zero {
        return Ok(ChainCertificate::RefutedByChain);
    }
    let t = chain.assoc_nil_steps.expect("chain reached zero") as u64;
    let mut m = 0u32;
    while p.pow(m) < t {
        m += 1;
    }

    // s: least exponent after which every even p-map orbit is central
    let z = center(l);
    let even_orbit_central = |x: &GradedVector| -> Option<usize> {
        let mut w = x.clone();
        for s in 0..=l.dim() {
            if z.contains_vector(&l.ring, &w) {
                return Some(s);
            }
            w = l.p_map_extend(&w).ok()?;
        }
        None
    };
    let n_even = l.n_even;
    let enumeration = (p as u128).checked_pow(n_even as u32).unwrap_or(u128::MAX);
    let mut s_max = 0usize;
    let even_exact = enumeration <= budget as u128;
    if even_exact {
        for coords in FpVectors::new(n_even, p) {
            let mut x = GradedVector::zero();
            for (i, &c) in coords.iter().enumerate() {
                if c != 0 {
                    x.set(i, Coeff::Fp(c));
                }
            }
            match even_orbit_central(&x) {
                Some(s) => s_max = s_max.max(s),
                None => {
                    return Ok(ChainCertificate::Inconclusive {
                        reason: "an even p-map orbit never becomes central".into(),
                    })
                }
            }
        }
    } else {
        for i in 0..n_even {
            match even_orbit_central(&GradedVector::unit(&l.ring, i)) {
                Some(s) => s_max = s_max.max(s),
                None => {
                    return Ok(ChainCertificate::Inconclusive {
                        reason: "an even basis p-map orbit never becomes central".into(),
                    })
                }
            }
        }
    }

    // odd part, matching the two branches of the constructive proof: either
    // every odd basis square is p-nilpotent (n covers their vanishing
    // exponents), or there is at most one odd generator commuting with L_0
    // (no extra exponent needed)
    let mut odd_exponent = 0usize;
    let mut all_squares_pnil = true;
    for j in 0..l.n_odd {
        let y = GradedVector::unit(&l.ring, n_even + j);
        let zj = l.bracket(&y, &y).scale(&l.ring, &l.ring.half());
        match element_p_nilpotent(l, &zj)? {
            POrbit::Nil { exponent } => odd_exponent = odd_exponent.max(exponent + 1),
            POrbit::NotNil { .. } => all_squares_pnil = false,
        }
    }
    let n = if all_squares_pnil {
        s_max.max(odd_exponent)
    } else {
        let single_commuting = l.n_odd == 1 && {
            let y = GradedVector::unit(&l.ring, n_even);
            (0..n_even).all(|i| l.bracket(&GradedVector::unit(&l.ring, i), &y).is_zero())
        };
        if single_commuting {
            s_max
        } else {
            return Ok(ChainCertificate::Inconclusive {
                reason: "odd squares are not p-nilpotent and the single-generator branch does not apply"
                    .into(),
            });
        }
    };

    let bound = match p.checked_pow(m + n as u32) {
        Some(b) => b,
        None => {
            return Ok(ChainCertificate::Inconclusive { reason: "bound overflows u64".into() })
        }
    };

    // sample re-verification of the certified bound
    let carrier = FpCarrier::new(cfg, rep);
    let dim = rep.dim();
    let mut rng = SplitMix64::new(seed);
    let samples = 20u64;
    for _ in 0..samples {
        let mut coords = vec![0u64; dim];
        for c in coords.iter_mut().skip(1) {
            *c = rng.below(p);
        }
        let ad = carrier.ad_of(&coords);
        let power = ad.pow(bound);
        if let Some(j) = first_nonzero_column(&power) {
            let a = cfg.monomial(rep.basis[j].clone());
            let b = element_from_coords(cfg, rep, &coords);
            return Ok(ChainCertificate::CertificateInvalid { bound, a, b });
        }
    }
    Ok(ChainCertificate::Certified {
        bound,
        m,
        n: n as u32,
        samples_checked: samples,
        even_exact,
    })
}

/// Report of the fan-family Engel identity check.
#[derive(Clone, Debug)]
pub struct FanReport {
    /// `[x_1...x_m, y, ..., y] = 0` with p copies of y.
    pub main_identity: bool,
    /// `[x_i, y, y, y] = 0` for every i.
    pub triple_identity: bool,
    /// `[x_1, y, y] != 0` (so fewer than p copies do not suffice).
    pub two_fold_nonzero: bool,
    pub saturated: bool,
}

/// Check the hand-computable Engel identity in the fan family: with
/// (x_i, y) = z_i and all other brackets zero, the product x_1...x_m
/// satisfies the p-fold Engel identity against y, while two copies of y do
/// not kill x_1. Runs in truncated U(L) with cap m + p + 1, which the
/// computation never reaches, so the outcome is an exact U(L) statement.
pub fn verify_fan_engel(m: usize, p: u64) -> Result<FanReport, EngelError> {
    let file = crate::gallery::fan(m, p, false);
    let l = validate(&file, 1_000_000).expect("fan algebra is valid");
    let cap = m + p as usize + 1;
    let cfg = EnvConfig::truncated(&l, cap);
    let mut product = cfg.one();
    for i in 0..m {
        product = cfg.multiply(&product, &cfg.generator(i))?;
    }
    let y = cfg.generator(m); // first odd generator
    let main = cfg.iterated_commutator(&product, &y, p as usize)?;
    let mut triple = true;
    for i in 0..m {
        let c = cfg.iterated_commutator(&cfg.generator(i), &y, 3)?;
        triple &= c.is_zero();
    }
    let two = cfg.iterated_commutator(&cfg.generator(0), &y, 2)?;
    Ok(FanReport {
        main_identity: main.is_zero() && !main.saturated,
        triple_identity: triple,
        two_fold_nonzero: !two.is_zero() && !two.saturated,
        saturated: main.saturated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::lsa::LieSuperalgebra;

    fn load(name: &str, restricted: Option<bool>) -> LieSuperalgebra {
        validate(&gallery::by_name(name, 1, 3, restricted).unwrap(), 1_000_000).unwrap()
    }

    #[test]
    fn commutative_envelope_degree_one() {
        let l = load("g3", None);
        let cfg = EnvConfig::restricted(&l).unwrap();
        let rep = RegularRep::new(&cfg);
        let r = engel_degree_exact(&cfg, &rep, 2_000_000).unwrap();
        match r.verdict {
            OracleVerdict::EngelWithDegree(n) => assert_eq!(n, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn clifford_pair_not_engel() {
        let l = load("g4", None);
        let cfg = EnvConfig::restricted(&l).unwrap();
        let rep = RegularRep::new(&cfg);
        let r = engel_degree_exact(&cfg, &rep, 2_000_000).unwrap();
        match r.verdict {
            OracleVerdict::NotEngelWitness { a, b, n } => {
                // the witness re-verifies through independent arithmetic
                let c = cfg.iterated_commutator(&a, &b, n).unwrap();
                assert!(!c.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fan_exact_degree_at_least_three() {
        let l = load("g1", Some(true));
        let cfg = EnvConfig::restricted(&l).unwrap();
        let rep = RegularRep::new(&cfg);
        let r = engel_degree_exact(&cfg, &rep, 2_000_000).unwrap();
        match r.verdict {
            OracleVerdict::EngelWithDegree(n) => {
                assert!(n >= 3, "degree was {n}");
                // minimality pair re-verifies
                let (a, b, nm1) = r.minimality.expect("n >= 2");
                assert_eq!(nm1, n - 1);
                assert!(!cfg.iterated_commutator(&a, &b, nm1).unwrap().is_zero());
                assert!(cfg.iterated_commutator(&a, &b, n).unwrap().is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witness_search_solvable_pair() {
        let file = gallery::by_name("g5", 1, 0, None).unwrap();
        let l = validate(&file, 1_000_000).unwrap();
        let cfg = EnvConfig::truncated(&l, 10);
        let r = engel_witness_search(&cfg, 4, 200, 2, 42).unwrap();
        match r.verdict {
            OracleVerdict::NotEngelWitness { a, b, n } => {
                assert_eq!(n, 4);
                let c = cfg.iterated_commutator(&a, &b, n).unwrap();
                assert!(!c.is_zero() && !c.saturated);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witness_search_commutative_inconclusive() {
        let l = load("g3", None);
        let cfg = EnvConfig::restricted(&l).unwrap();
        let r = engel_witness_search(&cfg, 1, 100, 2, 42).unwrap();
        assert!(matches!(r.verdict, OracleVerdict::Inconclusive { .. }));
    }

    #[test]
    fn central_power_commutative() {
        let l = load("g3", None);
        let cfg = EnvConfig::restricted(&l).unwrap();
        let rep = RegularRep::new(&cfg);
        let r = central_power_check(&cfg, &rep, 1, 2_000_000, 42).unwrap();
        assert!(matches!(r.outcome, CentralPower::AllCentral));
    }

    #[test]
    fn central_power_clifford_pair_fails() {
        // p^k = 27 >= dim 12: a non-Engel algebra cannot have all
        // p^k-th powers central
        let l = load("g4", None);
        let cfg = EnvConfig::restricted(&l).unwrap();
        let rep = RegularRep::new(&cfg);
        let r = central_power_check(&cfg, &rep, 3, 2_000_000, 42).unwrap();
        match r.outcome {
            CentralPower::NotCentral { witness, generator } => {
                let wpk = cfg.power(&witness, 27).unwrap();
                let c = cfg.commutator(&wpk, &cfg.generator(generator)).unwrap();
                assert!(!c.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn heisenberg_zero_pmap_certificate() {
        let l = load("g2", Some(true));
        let cfg = EnvConfig::restricted(&l).unwrap();
        let rep = RegularRep::new(&cfg);
        match chain_certificate(&cfg, &rep, 2_000_000, 42).unwrap() {
            ChainCertificate::Certified { bound, m, .. } => {
                // R = z*u(L) with z^3 = 0: R^3 = 0, so m = 1
                assert_eq!(m, 1);
                assert!(bound >= 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn toral_heisenberg_refuted_by_chain() {
        let l = load("g6", Some(true));
        let cfg = EnvConfig::restricted(&l).unwrap();
        let rep = RegularRep::new(&cfg);
        match chain_certificate(&cfg, &rep, 2_000_000, 42).unwrap() {
            ChainCertificate::RefutedByChain => {}
            other => panic!("{other:?}"),
        }
        // and sampling finds a concrete witness pair
        let w = sample_ad_witness(&cfg, &rep, 200, 42).unwrap();
        let (a, b, n) = w.expect("witness exists");
        assert!(!cfg.iterated_commutator(&a, &b, n).unwrap().is_zero());
    }

    #[test]
    fn fan_identity_small_cases() {
        let r = verify_fan_engel(1, 3).unwrap();
        assert!(r.main_identity && r.triple_identity && r.two_fold_nonzero);
        let r = verify_fan_engel(2, 5).unwrap();
        assert!(r.main_identity && r.triple_identity);
    }
}
