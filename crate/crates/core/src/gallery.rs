//! Built-in example algebras.
//!
//! These cover every qualitative regime the decision procedures distinguish:
//! nilpotent with purely odd derived subalgebra (`g1`), nonabelian even part
//! (`g2`), one odd generator with toral square (`g3`), a Clifford-type pair
//! of odd generators over a toral center (`g4`), a non-nilpotent solvable
//! algebra (`g5`), and a Heisenberg algebra with toral center (`g6`).

use crate::format::{AlgebraFile, BracketEntry, CoeffRepr, PMapEntry, Term};

fn term(c: i64, b: &str) -> Term {
    Term { c: CoeffRepr::Int(c), b: b.into() }
}

fn bracket(left: &str, right: &str, value: Vec<Term>) -> BracketEntry {
    BracketEntry { left: left.into(), right: right.into(), value }
}

fn zero_p_map(names: &[String]) -> Vec<PMapEntry> {
    names
        .iter()
        .map(|n| PMapEntry { of: n.clone(), value: vec![] })
        .collect()
}

/// `g1`: even x_1..x_m; odd y, z_1..z_m; (x_i, y) = z_i, all other brackets
/// zero. The m = 1 case is the default gallery instance. Restricted variants
/// carry the zero p-map.
pub fn fan(m: usize, p: u64, restricted: bool) -> AlgebraFile {
    assert!(m >= 1);
    let even: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    let mut odd: Vec<String> = vec!["y".into()];
    odd.extend((1..=m).map(|i| format!("z{i}")));
    let brackets = (1..=m)
        .map(|i| bracket(&format!("x{i}"), "y", vec![term(1, &format!("z{i}"))]))
        .collect();
    AlgebraFile {
        characteristic: p,
        restricted,
        even_basis: even.clone(),
        odd_basis: odd,
        brackets,
        p_map: if restricted { zero_p_map(&even) } else { vec![] },
    }
}

/// `g2`/`g6`: the even Heisenberg algebra x, y, z with (x, y) = z. The p-map
/// is zero except that `g6` puts z^[p] = z (toral center).
pub fn heisenberg(p: u64, toral_center: bool, restricted: bool) -> AlgebraFile {
    let even: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    let p_map = if restricted {
        let mut map = zero_p_map(&even);
        if toral_center {
            map[2].value = vec![term(1, "z")];
        }
        map
    } else {
        vec![]
    };
    AlgebraFile {
        characteristic: p,
        restricted,
        even_basis: even,
        odd_basis: vec![],
        brackets: vec![bracket("x", "y", vec![term(1, "z")])],
        p_map,
    }
}

/// `g3`: one odd y with (y, y) = x and x^[p] = x; u(L) is commutative.
pub fn odd_toral(p: u64, restricted: bool) -> AlgebraFile {
    AlgebraFile {
        characteristic: p,
        restricted,
        even_basis: vec!["x".into()],
        odd_basis: vec!["y".into()],
        brackets: vec![bracket("y", "y", vec![term(1, "x")])],
        p_map: if restricted {
            vec![PMapEntry { of: "x".into(), value: vec![term(1, "x")] }]
        } else {
            vec![]
        },
    }
}

/// `g4`: odd y1, y2 with (y_i, y_i) = x and x^[p] = x; u(L) surjects onto a
/// 2x2 matrix algebra, so it is not bounded Lie Engel.
pub fn clifford_pair(p: u64, restricted: bool) -> AlgebraFile {
    AlgebraFile {
        characteristic: p,
        restricted,
        even_basis: vec!["x".into()],
        odd_basis: vec!["y1".into(), "y2".into()],
        brackets: vec![
            bracket("y1", "y1", vec![term(1, "x")]),
            bracket("y2", "y2", vec![term(1, "x")]),
        ],
        p_map: if restricted {
            vec![PMapEntry { of: "x".into(), value: vec![term(1, "x")] }]
        } else {
            vec![]
        },
    }
}

/// `g5`: even x, y with (x, y) = y; not nilpotent. Defaults to
/// characteristic 0.
pub fn solvable_pair(p: u64) -> AlgebraFile {
    AlgebraFile {
        characteristic: p,
        restricted: false,
        even_basis: vec!["x".into(), "y".into()],
        odd_basis: vec![],
        brackets: vec![bracket("x", "y", vec![term(1, "y")])],
        p_map: vec![],
    }
}

/// Gallery lookup by id. `m` parameterizes `g1`; `p` is the characteristic;
/// `restricted` overrides the per-algebra default.
pub fn by_name(name: &str, m: usize, p: u64, restricted: Option<bool>) -> Option<AlgebraFile> {
    let file = match name {
        "g1" | "example21" | "fan" => fan(m, p, restricted.unwrap_or(false)),
        "g2" | "heisenberg" => heisenberg(p, false, restricted.unwrap_or(true)),
        "g3" => odd_toral(p, restricted.unwrap_or(true)),
        "g4" => clifford_pair(p, restricted.unwrap_or(true)),
        "g5" => solvable_pair(p),
        "g6" => heisenberg(p, true, restricted.unwrap_or(true)),
        _ => return None,
    };
    Some(file)
}

pub const NAMES: &[&str] = &["g1", "g2", "g3", "g4", "g5", "g6"];
