//! Exact-arithmetic analysis of the bounded Engel condition on enveloping
//! algebras of finite-dimensional Lie superalgebras.
//!
//! A Lie superalgebra is given by a graded basis and structure constants over
//! the rationals or an odd prime field, optionally with a p-map on the even
//! part (restricted case). The [`verdict`] module decides whether the
//! (restricted) enveloping algebra satisfies a bounded Engel identity
//! `[a, b, b, ..., b] = 0` from structural data alone, and the [`engel`]
//! module independently re-derives every verdict by brute force inside the
//! enveloping algebra itself: exhaustive ad-matrix sweeps, symbolic
//! generic-element centrality checks, commutator-ideal chains, and seeded
//! witness sampling. Disagreement between the two routes is a hard error.
//!
//! Layout:
//!
//! * [`coeffs`] — exact coefficient rings: `F_p` (odd p), rationals, and a
//!   sparse multivariate polynomial ring over `F_p`.
//! * [`linalg`] — dense matrices and reduced row echelon forms over those
//!   rings, plus a fast `F_p`-only matrix used by enumeration sweeps.
//! * [`lsa`] — the Lie superalgebra object: validation, brackets, adjoint
//!   operators, Jacobson sums and p-map extension.
//! * [`subspace`] — graded subspace calculus: ideals, central series,
//!   centers, p-nilpotency and the weakly-closed nilpotency check.
//! * [`env`] — PBW arithmetic for u(L) and degree-truncated U(L).
//! * [`engel`] — the Engel oracles.
//! * [`verdict`] — structural decision procedures and oracle cross-checks.
//! * [`gallery`] / [`corpus`] — built-in example algebras and seeded random
//!   instance generation.
//! * [`format`] — the JSON algebra and report file formats.

pub mod coeffs;
pub mod corpus;
pub mod engel;
pub mod env;
pub mod format;
pub mod gallery;
pub mod linalg;
pub mod lsa;
pub mod rng;
pub mod subspace;
pub mod verdict;

/// Default cap on exhaustive element enumerations (number of elements).
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Default seed for every reproducible sampling loop.
pub const DEFAULT_SEED: u64 = 42;
