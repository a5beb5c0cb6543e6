//! Seeded random algebra generation and basis-change transforms.
//!
//! Generation draws sparse structure constants over F_p in the canonical
//! orientation (so skew-symmetry holds by construction), then
//! rejection-samples on the remaining axioms: grading is enforced while
//! drawing, the Jacobi identity and the characteristic-3 cubic identity by
//! validation. For restricted instances the p-map image of each even basis
//! element is found by solving the linear system `ad(v) = (ad x)^p`, with a
//! random central offset added for variety (this is where toral centers come
//! from); unsolvable systems reject the draw.

use crate::coeffs::Coeff;
use crate::format::{AlgebraFile, BracketEntry, CoeffRepr, PMapEntry, Term};
use crate::linalg::{solve_linear, Mat};
use crate::lsa::{validate, GradedVector, LieSuperalgebra, Parity};
use crate::rng::SplitMix64;
use crate::subspace::center;

/// Random homogeneous vector; `parity` restricts the support.
pub fn random_vector(l: &LieSuperalgebra, rng: &mut SplitMix64, parity: Parity) -> GradedVector {
    let (lo, hi) = match parity {
        Parity::Even => (0, l.n_even),
        Parity::Odd => (l.n_even, l.dim()),
    };
    let mut v = GradedVector::zero();
    for i in lo..hi {
        let c = match l.characteristic {
            0 => l.ring.from_i64(rng.small_int(2)),
            p => Coeff::Fp(rng.below(p)),
        };
        v.set(i, c);
    }
    v
}

fn term_of(c: u64, b: &str) -> Term {
    Term { c: CoeffRepr::Int(c as i64), b: b.into() }
}

fn draw_value(
    rng: &mut SplitMix64,
    p: u64,
    names: &[String],
    allowed: std::ops::Range<usize>,
) -> Vec<Term> {
    let mut out = Vec::new();
    for k in allowed {
        if rng.below(100) < 45 {
            let c = 1 + rng.below(p - 1);
            out.push(term_of(c, &names[k]));
        }
    }
    out
}

/// One attempt at a random algebra; the caller validates and retries.
///
/// Two draw styles, mixed evenly. "Two-step" assigns each basis element a
/// level in {1, 2} and draws brackets only on level-1 pairs with values on
/// level 2; every term of the Jacobi cyclic sum (and of the cubic identity)
/// then contains a bracket of a level-2 element and vanishes, so these draws
/// always survive validation and supply dense nonabelian nilpotent
/// instances. "Flat" draws freely and relies on rejection; it contributes
/// toral odd squares and non-nilpotent structure.
fn draw_algebra(
    rng: &mut SplitMix64,
    p: u64,
    max_even: usize,
    max_odd: usize,
    restricted: bool,
) -> AlgebraFile {
    let n_even = rng.below(max_even as u64 + 1) as usize;
    let n_odd_min = if n_even == 0 { 1 } else { 0 };
    let n_odd = (n_odd_min as u64 + rng.below((max_odd - n_odd_min) as u64 + 1)) as usize;
    let even: Vec<String> = (0..n_even).map(|i| format!("x{}", i + 1)).collect();
    let odd: Vec<String> = (0..n_odd).map(|i| format!("y{}", i + 1)).collect();
    let mut names = even.clone();
    names.extend(odd.iter().cloned());
    let n = n_even + n_odd;
    let two_step = rng.below(2) == 0;
    let levels: Vec<u8> = (0..n).map(|_| if rng.below(100) < 60 { 1 } else { 2 }).collect();

    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i..n {
            if i == j && i < n_even {
                continue; // (x, x) = 0 forced
            }
            let even_target = (i < n_even) == (j < n_even);
            let range = if even_target { 0..n_even } else { n_even..n };
            let value = if two_step {
                if levels[i] != 1 || levels[j] != 1 {
                    continue;
                }
                if rng.below(100) >= 70 {
                    continue;
                }
                let targets: Vec<usize> = range.filter(|&k| levels[k] == 2).collect();
                let mut out = Vec::new();
                for k in targets {
                    if rng.below(100) < 60 {
                        out.push(term_of(1 + rng.below(p - 1), &names[k]));
                    }
                }
                out
            } else {
                if rng.below(100) >= 40 {
                    continue;
                }
                draw_value(rng, p, &names, range)
            };
            if !value.is_empty() {
                brackets.push(BracketEntry {
                    left: names[i].clone(),
                    right: names[j].clone(),
                    value,
                });
            }
        }
    }
    AlgebraFile {
        characteristic: p,
        restricted,
        even_basis: even,
        odd_basis: odd,
        brackets,
        p_map: vec![],
    }
}

/// Solve for a p-map table compatible with the bracket structure:
/// `ad(x_i^{[p]}) = (ad x_i)^p` is linear in the unknown even vector, and any
/// central even vector can be added freely.
fn solve_p_map(file: &AlgebraFile, rng: &mut SplitMix64, budget: u64) -> Option<Vec<PMapEntry>> {
    let mut unrestricted = file.clone();
    unrestricted.restricted = false;
    unrestricted.p_map.clear();
    let l = validate(&unrestricted, budget).ok()?;
    let p = l.characteristic;
    let ring = l.ring.clone();
    let n = l.dim();
    let z = center(&l);
    let central_even: Vec<GradedVector> = z
        .basis_vectors()
        .into_iter()
        .filter(|v| l.parity_of(v) == Some(Parity::Even))
        .collect();

    // columns: flattened ad matrices of the even basis
    let mut columns = Vec::with_capacity(l.n_even);
    for i in 0..l.n_even {
        let ad = l.ad_operator(&GradedVector::unit(&ring, i));
        let flat: Vec<Coeff> = (0..n).flat_map(|r| ad.row(r).to_vec()).collect();
        columns.push(flat);
    }
    let rows = n * n;
    let mut a = Mat::zeros(&ring, rows, l.n_even);
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col.iter().enumerate() {
            *a.at_mut(i, j) = c.clone();
        }
    }

    let mut entries = Vec::with_capacity(l.n_even);
    for i in 0..l.n_even {
        let target = l
            .ad_operator(&GradedVector::unit(&ring, i))
            .pow(&ring, p);
        let b: Vec<Coeff> = (0..n).flat_map(|r| target.row(r).to_vec()).collect();
        let coeffs = solve_linear(&ring, &a, &b)?;
        let mut image = GradedVector::zero();
        for (k, c) in coeffs.iter().enumerate() {
            image.set(k, c.clone());
        }
        // random central offset for variety (often produces toral pieces)
        for cv in &central_even {
            let lambda = rng.below(p);
            if lambda != 0 {
                image.add_scaled(&ring, cv, &Coeff::Fp(lambda));
            }
        }
        let value = image
            .iter()
            .map(|(k, c)| Term {
                c: CoeffRepr::Int(c.as_fp().unwrap() as i64),
                b: l.basis[k].name.clone(),
            })
            .collect();
        entries.push(PMapEntry { of: l.basis[i].name.clone(), value });
    }
    Some(entries)
}

/// Generate `count` validated random algebras. Deterministic per seed.
pub fn generate_corpus(
    seed: u64,
    count: usize,
    p: u64,
    max_even: usize,
    max_odd: usize,
    restricted: bool,
    budget: u64,
) -> Vec<AlgebraFile> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0u64;
    let max_attempts = (count as u64) * 500;
    while out.len() < count && attempts < max_attempts {
        attempts += 1;
        let mut file = draw_algebra(&mut rng, p, max_even, max_odd, restricted);
        // abelian draws always validate and would otherwise swamp the
        // corpus; keep only some of them
        if file.brackets.is_empty() && rng.below(100) >= 25 {
            continue;
        }
        if restricted {
            match solve_p_map(&file, &mut rng, budget) {
                Some(p_map) => file.p_map = p_map,
                None => continue,
            }
        }
        if validate(&file, budget).is_ok() {
            out.push(file);
        }
    }
    out
}

/// Random basis permutation (within parity blocks) and rescaling, with the
/// structure constants and p-map transformed accordingly. Verdicts must be
/// invariant under this.
pub fn transform_basis(file: &AlgebraFile, rng: &mut SplitMix64) -> AlgebraFile {
    let p = file.characteristic;
    let budget = 1_000_000;
    let l = validate(file, budget).expect("transform needs a valid algebra");
    let ring = l.ring.clone();
    let n = l.dim();

    let mut perm_even: Vec<usize> = (0..l.n_even).collect();
    let mut perm_odd: Vec<usize> = (0..l.n_odd).collect();
    for i in (1..perm_even.len()).rev() {
        perm_even.swap(i, rng.below(i as u64 + 1) as usize);
    }
    for i in (1..perm_odd.len()).rev() {
        perm_odd.swap(i, rng.below(i as u64 + 1) as usize);
    }
    // nonzero scale per old basis vector
    let scales: Vec<Coeff> = (0..n)
        .map(|_| {
            if p == 0 {
                ring.from_i64(if rng.below(2) == 0 { 1 } else { -1 })
            } else {
                Coeff::Fp(1 + rng.below(p - 1))
            }
        })
        .collect();

    let even_basis: Vec<String> =
        perm_even.iter().map(|&i| file.even_basis[i].clone()).collect();
    let odd_basis: Vec<String> = perm_odd.iter().map(|&j| file.odd_basis[j].clone()).collect();

    let coeff_repr = |c: &Coeff| -> CoeffRepr {
        match c {
            Coeff::Fp(v) => CoeffRepr::Int(*v as i64),
            Coeff::Rational(r) => {
                if r.denom() == &num_bigint::BigInt::from(1) {
                    CoeffRepr::Int(i64::try_from(r.numer().clone()).expect("small scale"))
                } else {
                    CoeffRepr::Frac(format!("{}/{}", r.numer(), r.denom()))
                }
            }
            Coeff::Poly(_) => unreachable!(),
        }
    };

    // bracket of scaled vectors: (s_i b_i, s_j b_j) = s_i s_j (b_i, b_j),
    // re-expressed on the scaled basis by dividing each component by s_k
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i..n {
            let v = l.bracket(&GradedVector::unit(&ring, i), &GradedVector::unit(&ring, j));
            if v.is_zero() {
                continue;
            }
            let factor = ring.mul(&scales[i], &scales[j]);
            let value: Vec<Term> = v
                .iter()
                .map(|(k, c)| {
                    let scaled =
                        ring.mul(&ring.mul(c, &factor), &ring.inv(&scales[k]).unwrap());
                    Term { c: coeff_repr(&scaled), b: l.basis[k].name.clone() }
                })
                .collect();
            brackets.push(BracketEntry {
                left: l.basis[i].name.clone(),
                right: l.basis[j].name.clone(),
                value,
            });
        }
    }


    let p_map = if file.restricted {
        (0..l.n_even)
            .map(|i| {
                let image = l.p_map_basis(i);
                let factor = ring.pow(&scales[i], p);
                let value: Vec<Term> = image
                    .iter()
                    .map(|(k, c)| {
                        let scaled =
                            ring.mul(&ring.mul(c, &factor), &ring.inv(&scales[k]).unwrap());
                        Term { c: coeff_repr(&scaled), b: l.basis[k].name.clone() }
                    })
                    .collect();
                PMapEntry { of: l.basis[i].name.clone(), value }
            })
            .collect()
    } else {
        vec![]
    };

    AlgebraFile {
        characteristic: p,
        restricted: file.restricted,
        even_basis,
        odd_basis,
        brackets,
        p_map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::{decide_auto, Verdict};

    const BUDGET: u64 = 2_000_000;

    #[test]
    fn corpus_generation_is_deterministic_and_valid() {
        let a = generate_corpus(7, 10, 3, 2, 2, true, BUDGET);
        let b = generate_corpus(7, 10, 3, 2, 2, true, BUDGET);
        assert_eq!(a.len(), 10);
        assert_eq!(a, b);
        for file in &a {
            assert!(validate(file, BUDGET).is_ok());
            assert!(file.restricted);
        }
    }

    #[test]
    fn corpus_has_variety() {
        let files = generate_corpus(11, 30, 3, 2, 2, true, BUDGET);
        let mut engel = 0;
        let mut not_engel = 0;
        for file in &files {
            let l = validate(file, BUDGET).unwrap();
            let v: Verdict = decide_auto(&l, BUDGET).unwrap();
            if v.engel {
                engel += 1;
            } else {
                not_engel += 1;
            }
        }
        assert!(engel > 0, "no Engel instances in corpus");
        assert!(not_engel > 0, "no non-Engel instances in corpus");
    }

    #[test]
    fn transform_preserves_validity_and_verdict() {
        let files = generate_corpus(13, 8, 3, 2, 2, true, BUDGET);
        let mut rng = SplitMix64::new(99);
        for file in &files {
            let l = validate(file, BUDGET).unwrap();
            let v = decide_auto(&l, BUDGET).unwrap();
            let t = transform_basis(file, &mut rng);
            let lt = validate(&t, BUDGET)
                .unwrap_or_else(|r| panic!("transformed algebra invalid: {:?}", r.lines()));
            let vt = decide_auto(&lt, BUDGET).unwrap();
            assert_eq!(v.engel, vt.engel);
        }
    }

    #[test]
    fn transform_gallery_char0() {
        let file = crate::gallery::by_name("g5", 1, 0, None).unwrap();
        let mut rng = SplitMix64::new(5);
        let t = transform_basis(&file, &mut rng);
        let l = validate(&t, BUDGET).unwrap();
        assert!(!decide_auto(&l, BUDGET).unwrap().engel);
    }
}
