//! Property tests for the algebraic invariants: ring axioms, linearity of
//! the adjoint, p-map extension consistency, the nilpotency theorem
//! instance, and coherence between the oracle tiers.

use proptest::prelude::*;

use superengel::coeffs::{Coeff, MultiPoly, Ring};
use superengel::corpus::{generate_corpus, random_vector};
use superengel::engel::{
    central_power_check, engel_degree_exact, engel_witness_search, CentralPower, OracleVerdict,
};
use superengel::env::{EnvConfig, RegularRep};
use superengel::format::AlgebraFile;
use superengel::gallery;
use superengel::lsa::{validate, GradedVector, LieSuperalgebra, Parity};
use superengel::rng::SplitMix64;
use superengel::subspace::{
    bracket_space, even_part, lower_central_series, odd_part, p_nilpotent_square_span,
    uniform_ad_nilpotency, AdNilpotency,
};

const BUDGET: u64 = 2_000_000;

fn fp_ring() -> impl Strategy<Value = (Ring, u64)> {
    prop_oneof![Just(3u64), Just(5), Just(7)].prop_map(|p| (Ring::Fp(p), p))
}

proptest! {
    #[test]
    fn fp_ring_axioms((ring, p) in fp_ring(), a in 0u64..7, b in 0u64..7, c in 0u64..7) {
        let (a, b, c) = (Coeff::Fp(a % p), Coeff::Fp(b % p), Coeff::Fp(c % p));
        // associativity and commutativity of both operations
        prop_assert_eq!(ring.add(&ring.add(&a, &b), &c), ring.add(&a, &ring.add(&b, &c)));
        prop_assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
        prop_assert_eq!(ring.add(&a, &b), ring.add(&b, &a));
        prop_assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
        // distributivity
        prop_assert_eq!(
            ring.mul(&a, &ring.add(&b, &c)),
            ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c))
        );
        // inverses
        if !a.is_zero() {
            let inv = ring.inv(&a).unwrap();
            prop_assert!(ring.mul(&a, &inv).is_one());
        }
    }

    #[test]
    fn rational_ring_axioms(a in -20i64..20, b in -20i64..20, c in -20i64..20) {
        let q = Ring::Rational;
        let (a, b, c) = (q.from_i64(a), q.from_i64(b), q.from_i64(c));
        prop_assert_eq!(q.add(&q.add(&a, &b), &c), q.add(&a, &q.add(&b, &c)));
        prop_assert_eq!(q.mul(&q.mul(&a, &b), &c), q.mul(&a, &q.mul(&b, &c)));
        prop_assert_eq!(
            q.mul(&a, &q.add(&b, &c)),
            q.add(&q.mul(&a, &b), &q.mul(&a, &c))
        );
        if !a.is_zero() {
            prop_assert!(q.mul(&a, &q.inv(&a).unwrap()).is_one());
        }
    }

    #[test]
    fn poly_arithmetic_agrees_with_evaluation(
        seed in 0u64..1000,
        x0 in 0u64..3, x1 in 0u64..3, x2 in 0u64..3,
    ) {
        let p = 3u64;
        let mut rng = SplitMix64::new(seed);
        let random_poly = |rng: &mut SplitMix64| {
            let mut f = MultiPoly::zero();
            for _ in 0..4 {
                let mut term = MultiPoly::constant(1 + rng.below(p - 1));
                for v in 0..3usize {
                    for _ in 0..rng.below(3) {
                        term = term.mul(&MultiPoly::variable(v), p);
                    }
                }
                f = f.add(&term, p);
            }
            f
        };
        let f = random_poly(&mut rng);
        let g = random_poly(&mut rng);
        let pt = [x0, x1, x2];
        prop_assert_eq!(f.mul(&g, p).eval(&pt, p), f.eval(&pt, p) * g.eval(&pt, p) % p);
        prop_assert_eq!(f.add(&g, p).eval(&pt, p), (f.eval(&pt, p) + g.eval(&pt, p)) % p);
    }
}

fn corpus() -> Vec<AlgebraFile> {
    generate_corpus(23, 25, 3, 2, 2, true, BUDGET)
}

fn loaded_corpus() -> Vec<LieSuperalgebra> {
    corpus().iter().map(|f| validate(f, BUDGET).unwrap()).collect()
}

#[test]
fn ad_is_linear() {
    let mut rng = SplitMix64::new(17);
    for l in loaded_corpus().iter().take(10) {
        if l.dim() == 0 {
            continue;
        }
        for _ in 0..10 {
            let x = random_vector(l, &mut rng, Parity::Even);
            let w = random_vector(l, &mut rng, Parity::Even);
            let alpha = Coeff::Fp(rng.below(3));
            let beta = Coeff::Fp(rng.below(3));
            let combo = x.scale(&l.ring, &alpha).add(&l.ring, &w.scale(&l.ring, &beta));
            let lhs = l.ad_operator(&combo);
            let rhs = l
                .ad_operator(&x)
                .scale(&l.ring, &alpha)
                .add(&l.ring, &l.ad_operator(&w).scale(&l.ring, &beta));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn p_map_extension_is_ad_compatible() {
    // ad(v^[p]) = (ad v)^p for arbitrary even v, not only basis elements
    let mut rng = SplitMix64::new(29);
    for l in loaded_corpus().iter().take(10) {
        if !l.restricted || l.n_even == 0 {
            continue;
        }
        for _ in 0..10 {
            let v = random_vector(l, &mut rng, Parity::Even);
            let image = l.p_map_extend(&v).unwrap();
            let lhs = l.ad_operator(&image);
            let rhs = l.ad_operator(&v).pow(&l.ring, l.characteristic);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn scalar_p_map_rule() {
    // (c x)^[p] = c^p x^[p]; over F_3 with x^[3] = x this gives 2x -> 2x
    let l = validate(&gallery::by_name("g3", 1, 3, None).unwrap(), BUDGET).unwrap();
    let x = GradedVector::unit(&l.ring, 0);
    let two_x = x.scale(&l.ring, &Coeff::Fp(2));
    let image = l.p_map_extend(&two_x).unwrap();
    assert_eq!(image, two_x);
}

#[test]
fn nilpotency_theorem_instance() {
    // when every even element has nilpotent adjoint (exact sweep) and every
    // odd square has nilpotent adjoint, the lower central series must reach
    // zero
    for l in loaded_corpus() {
        let s = even_part(&l);
        let even_ok = matches!(uniform_ad_nilpotency(&l, &s, BUDGET), AdNilpotency::Exact { .. });
        if !even_ok {
            continue;
        }
        let mut odd_ok = true;
        for j in 0..l.n_odd {
            let y = GradedVector::unit(&l.ring, l.n_even + j);
            let sq = l.bracket(&y, &y);
            odd_ok &= l.ad_operator(&sq).nilpotency_index(&l.ring).is_some();
        }
        if odd_ok {
            assert!(
                lower_central_series(&l).terminal_zero,
                "ad-nilpotent algebra must be nilpotent"
            );
        }
    }
}

#[test]
fn square_span_is_permutation_invariant() {
    // permuting the odd basis leaves the p-nilpotent-square span dimension
    // unchanged
    let mut rng = SplitMix64::new(31);
    for file in corpus().iter().take(10) {
        let l = validate(file, BUDGET).unwrap();
        if l.n_odd < 2 {
            continue;
        }
        let before = p_nilpotent_square_span(&l, BUDGET).unwrap().dim();
        let mut permuted = file.clone();
        permuted.odd_basis.reverse();
        // names move; bracket entries are name-based so nothing else changes
        let lp = validate(&permuted, BUDGET).unwrap();
        let after = p_nilpotent_square_span(&lp, BUDGET).unwrap().dim();
        assert_eq!(before, after);
        let _ = rng.next_u64();
    }
}

#[test]
fn oracle_coherence_on_fan() {
    // exact degree n: witness search at n finds nothing, at n-1 it finds a
    // pair within the enumeration bound
    let l = validate(&gallery::by_name("g1", 1, 3, Some(true)).unwrap(), BUDGET).unwrap();
    let cfg = EnvConfig::restricted(&l).unwrap();
    let rep = RegularRep::new(&cfg);
    let r = engel_degree_exact(&cfg, &rep, BUDGET).unwrap();
    let OracleVerdict::EngelWithDegree(n) = r.verdict else {
        panic!("fan envelope is Engel");
    };
    let at_n = engel_witness_search(&cfg, n, 300, 2, 42).unwrap();
    assert!(matches!(at_n.verdict, OracleVerdict::Inconclusive { .. }));
    let below = engel_witness_search(&cfg, n - 1, 300, 2, 42).unwrap();
    assert!(matches!(below.verdict, OracleVerdict::NotEngelWitness { .. }));
}

#[test]
fn centrality_route_matches_exact_degree() {
    // w^p central for all w certifies Engel degree <= p; the fan envelope
    // has exact degree 3 = p, so the symbolic route must agree
    let l = validate(&gallery::by_name("g1", 1, 3, Some(true)).unwrap(), BUDGET).unwrap();
    let cfg = EnvConfig::restricted(&l).unwrap();
    let rep = RegularRep::new(&cfg);
    let central = central_power_check(&cfg, &rep, 1, BUDGET, 42).unwrap();
    assert!(matches!(central.outcome, CentralPower::AllCentral));
    let r = engel_degree_exact(&cfg, &rep, BUDGET).unwrap();
    match r.verdict {
        OracleVerdict::EngelWithDegree(n) => assert!(n as u64 <= 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn char0_no_odd_part_reduces_to_abelian() {
    // with no odd generators the characteristic-0 criterion is exactly
    // "L abelian"
    use superengel::format::{BracketEntry, CoeffRepr, Term};
    use superengel::verdict::decide_char0;
    // abelian
    let abelian = AlgebraFile {
        characteristic: 0,
        restricted: false,
        even_basis: vec!["a".into(), "b".into()],
        odd_basis: vec![],
        brackets: vec![],
        p_map: vec![],
    };
    let l = validate(&abelian, BUDGET).unwrap();
    assert!(decide_char0(&l).unwrap().engel);
    // nonabelian nilpotent (Heisenberg): must be false in char 0
    let heis = AlgebraFile {
        characteristic: 0,
        restricted: false,
        even_basis: vec!["x".into(), "y".into(), "z".into()],
        odd_basis: vec![],
        brackets: vec![BracketEntry {
            left: "x".into(),
            right: "y".into(),
            value: vec![Term { c: CoeffRepr::Int(1), b: "z".into() }],
        }],
        p_map: vec![],
    };
    let lh = validate(&heis, BUDGET).unwrap();
    let v = decide_char0(&lh).unwrap();
    assert!(!v.engel);
    assert!(lower_central_series(&lh).terminal_zero, "nilpotent but not abelian");
}

#[test]
fn odd_square_spans_match_enumeration() {
    // independent quadratic enumeration oracle for the square span on g4:
    // (a y1 + b y2, a y1 + b y2) = (a^2 + b^2) x and a^2 + b^2 != 0 over F_3
    // unless a = b = 0, with x toral, so the span is zero
    let l = validate(&gallery::by_name("g4", 1, 3, None).unwrap(), BUDGET).unwrap();
    for a in 0..3u64 {
        for b in 0..3u64 {
            if (a * a + b * b) % 3 == 0 {
                assert_eq!((a, b), (0, 0));
            }
        }
    }
    assert!(p_nilpotent_square_span(&l, BUDGET).unwrap().is_zero());
    // and with vanishing odd squares the span is the whole odd part
    let fan = validate(&gallery::by_name("g1", 1, 3, Some(true)).unwrap(), BUDGET).unwrap();
    let m = p_nilpotent_square_span(&fan, BUDGET).unwrap();
    assert_eq!(m.dim(), fan.n_odd);
}

#[test]
fn jacobson_sums_match_pointwise_evaluation() {
    // independent oracle: sum_i i s_i(x,w) t^(i-1) evaluated at each t in
    // F_p must equal (ad(t x + w))^(p-1) applied to x, computed numerically
    let mut rng = SplitMix64::new(37);
    for l in loaded_corpus().iter().take(8) {
        if !l.restricted || l.n_even == 0 {
            continue;
        }
        let p = l.characteristic;
        for _ in 0..5 {
            let x = random_vector(l, &mut rng, Parity::Even);
            let w = random_vector(l, &mut rng, Parity::Even);
            let sums = l.jacobson_sums(&x, &w).unwrap();
            for t in 0..p {
                // left side: sum_i i * s_i * t^(i-1)
                let mut lhs = GradedVector::zero();
                let mut t_pow = 1u64;
                for (i, s) in sums.iter().enumerate() {
                    let factor = Coeff::Fp(((i as u64 + 1) % p) * (t_pow % p) % p);
                    lhs.add_scaled(&l.ring, s, &factor);
                    t_pow = t_pow * t % p;
                }
                // right side: (ad(t x + w))^(p-1) (x)
                let combo = x.scale(&l.ring, &Coeff::Fp(t)).add(&l.ring, &w);
                let mat = l.ad_operator(&combo).pow(&l.ring, p - 1);
                let rhs = GradedVector::from_dense(&mat.apply(&l.ring, &x.to_dense(&l.ring, l.dim())));
                assert_eq!(lhs, rhs, "t = {t}");
            }
        }
    }
}

#[test]
fn heisenberg_jacobson_sums_land_in_center() {
    // g2 with zero p-map: (x+y)^[3] = s_1(x,y) + s_2(x,y) must lie in the
    // span of the central element z
    let l = validate(&gallery::by_name("g2", 1, 3, Some(true)).unwrap(), BUDGET).unwrap();
    let x = GradedVector::unit(&l.ring, 0);
    let y = GradedVector::unit(&l.ring, 1);
    let s = l.jacobson_sums(&x, &y).unwrap();
    let total = l
        .p_map_extend(&x.add(&l.ring, &y))
        .unwrap();
    let sum = s.iter().fold(GradedVector::zero(), |acc, v| acc.add(&l.ring, v));
    assert_eq!(total, sum, "zero p-map table leaves only the sums");
    for v in &s {
        for i in v.support() {
            assert_eq!(i, 2, "sums must be supported on z");
        }
    }
    // s_i(x, 0) = 0
    for v in l.jacobson_sums(&x, &GradedVector::zero()).unwrap() {
        assert!(v.is_zero());
    }
}

#[test]
fn odd_squares_nonzero_outside_even_block_rejected() {
    // grading violation: (y, y) must be even
    use superengel::format::{BracketEntry, CoeffRepr, Term};
    let bad = AlgebraFile {
        characteristic: 5,
        restricted: false,
        even_basis: vec!["x".into()],
        odd_basis: vec!["y".into()],
        brackets: vec![BracketEntry {
            left: "y".into(),
            right: "y".into(),
            value: vec![Term { c: CoeffRepr::Int(1), b: "y".into() }],
        }],
        p_map: vec![],
    };
    assert!(validate(&bad, BUDGET).is_err());
}

#[test]
fn envelope_center_closed_under_products() {
    let l = validate(&gallery::by_name("g2", 1, 3, Some(true)).unwrap(), BUDGET).unwrap();
    let cfg = EnvConfig::restricted(&l).unwrap();
    let rep = RegularRep::new(&cfg);
    let center = superengel::env::env_center(&cfg, &rep);
    for a in center.iter().take(4) {
        for b in center.iter().take(4) {
            let prod = cfg.multiply(a, b).unwrap();
            for g in 0..l.dim() {
                assert!(cfg.commutator(&prod, &cfg.generator(g)).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn bracket_spaces_of_odd_parts() {
    // sanity sweep on the corpus: (L1, L1) is even, (L0, L1) is odd
    for l in loaded_corpus().iter().take(10) {
        let l0 = even_part(l);
        let l1 = odd_part(l);
        let sq = bracket_space(l, &l1, &l1);
        assert!(sq.parity_part(l.n_even, Parity::Odd).is_zero());
        let mixed = bracket_space(l, &l0, &l1);
        assert!(mixed.parity_part(l.n_even, Parity::Even).is_zero());
    }
}
