//! Named lattices and generators for test corpora.

use std::collections::BTreeSet;

use itertools::Itertools;
use thiserror::Error;

use crate::lattice::{Elem, FiniteLattice};
use crate::sasaki;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("M_n needs n >= 3, got {0}")]
    TooFewAtoms(usize),
    #[error("atom map is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("atom {0} is a fixed point, so it cannot be its own complement")]
    NotADerangement(usize),
    #[error("exhaustive enumeration supports 1 <= n <= {max}, got {got}")]
    OutOfRange { got: usize, max: usize },
}

pub const MAX_ENUMERATION_SIZE: usize = 7;

#[derive(Debug, Clone)]
pub struct NamedFixture {
    pub id: &'static str,
    pub lattice: FiniteLattice,
    pub provenance: &'static str,
}

/// `M₃` with `a′ = b`, `b′ = c`, `c′ = a`.
pub fn m3_paper() -> FiniteLattice {
    FiniteLattice::build_from_covers(
        &["0", "a", "b", "c", "1"],
        &[
            ("0", "a"),
            ("0", "b"),
            ("0", "c"),
            ("a", "1"),
            ("b", "1"),
            ("c", "1"),
        ],
        &[("0", "1"), ("a", "b"), ("b", "c"), ("c", "a"), ("1", "0")],
    )
    .expect("M3 is a lattice")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fig2Variant {
    /// Involutive, not antitone; three ideals.
    First,
    /// Same lattice, `f′ = b`, `g′ = c`, `h′ = a`; four ideals.
    Second,
}

const FIG2_COVERS: &[(&str, &str)] = &[
    ("0", "a"),
    ("0", "b"),
    ("0", "c"),
    ("0", "d"),
    ("a", "e"),
    ("a", "f"),
    ("b", "e"),
    ("b", "g"),
    ("c", "e"),
    ("c", "h"),
    ("d", "f"),
    ("d", "g"),
    ("d", "h"),
    ("e", "1"),
    ("f", "1"),
    ("g", "1"),
    ("h", "1"),
];

/// The ten-element modular lattice with one of its two complementations.
pub fn fig2(variant: Fig2Variant) -> FiniteLattice {
    let (f, g, h) = match variant {
        Fig2Variant::First => ("c", "a", "b"),
        Fig2Variant::Second => ("b", "c", "a"),
    };
    FiniteLattice::build_from_covers(
        &["0", "a", "b", "c", "d", "e", "f", "g", "h", "1"],
        FIG2_COVERS,
        &[
            ("0", "1"),
            ("a", "g"),
            ("b", "h"),
            ("c", "f"),
            ("d", "e"),
            ("e", "d"),
            ("f", f),
            ("g", g),
            ("h", h),
            ("1", "0"),
        ],
    )
    .expect("ten-element lattice is a lattice")
}

/// The pentagon `0 < a < c < 1`, `0 < b < 1` with `a′ = b`, `c′ = b`, `b′ = a`.
pub fn n5() -> FiniteLattice {
    FiniteLattice::build_from_covers(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        &[("0", "1"), ("a", "b"), ("b", "a"), ("c", "b"), ("1", "0")],
    )
    .expect("N5 is a lattice")
}

/// The two-element Boolean lattice.
pub fn chain2() -> FiniteLattice {
    FiniteLattice::build_from_covers(&["0", "1"], &[("0", "1")], &[("0", "1"), ("1", "0")])
        .expect("2-chain is a lattice")
}

/// The four-element Boolean lattice as `2 × 2`.
pub fn boolean4() -> FiniteLattice {
    chain2().direct_product(&chain2())
}

/// `M_n`: `0 ≺ a1 … an ≺ 1` with `0′ = 1`, `1′ = 0` and `ai′ = a(perm[i])`.
///
/// `perm` maps atom indices `0..n` and must have no fixed point.
pub fn make_m_n(n: usize, perm: &[usize]) -> Result<FiniteLattice, CatalogError> {
    if n < 3 {
        return Err(CatalogError::TooFewAtoms(n));
    }
    let mut seen = vec![false; n];
    if perm.len() != n
        || perm
            .iter()
            .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
    {
        return Err(CatalogError::NotAPermutation(n));
    }
    if let Some(i) = (0..n).find(|&i| perm[i] == i) {
        return Err(CatalogError::NotADerangement(i));
    }
    let atoms: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let labels: Vec<&str> = std::iter::once("0")
        .chain(atoms.iter().map(String::as_str))
        .chain(std::iter::once("1"))
        .collect();
    let covers: Vec<(&str, &str)> = atoms
        .iter()
        .flat_map(|a| [("0", a.as_str()), (a.as_str(), "1")])
        .collect();
    let unary: Vec<(&str, &str)> = [("0", "1"), ("1", "0")]
        .into_iter()
        .chain((0..n).map(|i| (atoms[i].as_str(), atoms[perm[i]].as_str())))
        .collect();
    Ok(FiniteLattice::build_from_covers(&labels, &covers, &unary).expect("M_n is a lattice"))
}

/// Converts cycles over atoms `0..n` into an image array.
pub fn perm_from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Vec<usize>, CatalogError> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    for cycle in cycles {
        for (k, &a) in cycle.iter().enumerate() {
            if a >= n || std::mem::replace(&mut used[a], true) {
                return Err(CatalogError::NotAPermutation(n));
            }
            perm[a] = cycle[(k + 1) % cycle.len()];
        }
    }
    Ok(perm)
}

/// One derangement per conjugacy class: a representative for every cycle
/// type of `n` whose parts are all at least 2. Cycle lengths are emitted in
/// decreasing order, over consecutive atoms.
pub fn derangement_class_representatives(n: usize) -> Vec<Vec<usize>> {
    fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (2..=max.min(n)).rev() {
            prefix.push(part);
            partitions(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut types = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut types);
    types
        .into_iter()
        .map(|parts| {
            let mut start = 0;
            let cycles: Vec<Vec<usize>> = parts
                .iter()
                .map(|&len| {
                    let c = (start..start + len).collect();
                    start += len;
                    c
                })
                .collect();
            perm_from_cycles(n, &cycles).expect("consecutive cycles form a permutation")
        })
        .collect()
}

/// Every fixed-point-free permutation of `0..n`, in lexicographic order.
pub fn all_derangements(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .permutations(n)
        .filter(|p| p.iter().enumerate().all(|(i, &x)| i != x))
        .collect()
}

/// Every bounded lattice with `n` elements, each exactly once up to
/// isomorphism. The unary map of each result is the identity; pair with
/// [`FiniteLattice::all_complementations`] to get complemented instances.
///
/// A bounded lattice is a poset on the `n − 2` non-bound elements with `0`
/// and `1` adjoined, so this enumerates those posets up to isomorphism
/// (canonical form = least relation bitmask over all relabellings) and keeps
/// the ones whose bounded extension is a lattice.
pub fn enumerate_bounded_lattices(n: usize) -> Result<Vec<FiniteLattice>, CatalogError> {
    if n == 0 || n > MAX_ENUMERATION_SIZE {
        return Err(CatalogError::OutOfRange {
            got: n,
            max: MAX_ENUMERATION_SIZE,
        });
    }
    if n == 1 {
        let l = FiniteLattice::from_order(vec!["0".into()], vec![true], vec![0])
            .expect("one-element lattice");
        return Ok(vec![l]);
    }
    let m = n - 2;
    let pairs: Vec<(usize, usize)> = (0..m).tuple_combinations().collect();
    let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let encode = |rel: &dyn Fn(usize, usize) -> bool, perm: &[usize]| -> u64 {
        let mut code = 0u64;
        for i in 0..m {
            for j in 0..m {
                if i != j && rel(i, j) {
                    code |= 1 << (perm[i] * m + perm[j]);
                }
            }
        }
        code
    };

    let mut canon = BTreeSet::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut lt = vec![false; m * m];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            lt[i * m + j] = mask >> k & 1 == 1;
        }
        let transitive = (0..m).all(|i| {
            (0..m).all(|j| !lt[i * m + j] || (0..m).all(|k| !lt[j * m + k] || lt[i * m + k]))
        });
        if !transitive {
            continue;
        }
        let rel = |i: usize, j: usize| lt[i * m + j];
        let code = perms.iter().map(|p| encode(&rel, p)).min().unwrap_or(0);
        canon.insert(code);
    }

    let mut out = Vec::new();
    for code in canon {
        let mut leq = vec![false; n * n];
        let top = n - 1;
        for x in 0..n {
            leq[x * n + x] = true;
            leq[x] = true; // 0 <= x
            leq[x * n + top] = true;
        }
        for i in 0..m {
            for j in 0..m {
                if code >> (i * m + j) & 1 == 1 {
                    leq[(i + 1) * n + (j + 1)] = true;
                }
            }
        }
        let labels = std::iter::once("0".to_string())
            .chain((0..m).map(|i| ((b'a' + i as u8) as char).to_string()))
            .chain(std::iter::once("1".to_string()))
            .collect();
        if let Ok(l) = FiniteLattice::from_order(labels, leq, (0..n).collect()) {
            out.push(l);
        }
    }
    Ok(out)
}

/// Every lattice with at most `max_n` elements, once per complementation.
pub fn complemented_corpus(max_n: usize) -> Result<Vec<FiniteLattice>, CatalogError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for l in enumerate_bounded_lattices(n)? {
            for c in l.all_complementations() {
                out.push(l.with_unary(c).expect("complementation has full length"));
            }
        }
    }
    Ok(out)
}

/// The members of the variety among [`complemented_corpus`].
pub fn variety_corpus(max_n: usize) -> Result<Vec<FiniteLattice>, CatalogError> {
    Ok(complemented_corpus(max_n)?
        .into_iter()
        .filter(sasaki::is_member_of_v)
        .collect())
}

/// `M_n` for `n` in the range, one per derangement conjugacy class.
pub fn m_n_family(ns: std::ops::RangeInclusive<usize>) -> Vec<FiniteLattice> {
    ns.flat_map(|n| {
        derangement_class_representatives(n)
            .into_iter()
            .map(move |p| make_m_n(n, &p).expect("class representatives are derangements"))
    })
    .collect()
}

/// The lattices that appear as worked examples.
pub fn fixtures() -> Vec<NamedFixture> {
    vec![
        NamedFixture {
            id: "m3",
            lattice: m3_paper(),
            provenance: "M3 with the 3-cycle complementation",
        },
        NamedFixture {
            id: "fig2_first",
            lattice: fig2(Fig2Variant::First),
            provenance: "ten-element modular lattice, involutive complementation",
        },
        NamedFixture {
            id: "fig2_second",
            lattice: fig2(Fig2Variant::Second),
            provenance: "ten-element modular lattice, second complementation",
        },
        NamedFixture {
            id: "n5",
            lattice: n5(),
            provenance: "pentagon, complemented but outside the variety",
        },
        NamedFixture {
            id: "boolean4",
            lattice: boolean4(),
            provenance: "2 x 2 Boolean algebra",
        },
    ]
}

/// Brute-force isomorphism test respecting order and the unary map.
pub fn isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> bool {
    fn extend(
        a: &FiniteLattice,
        b: &FiniteLattice,
        map: &mut Vec<Elem>,
        used: &mut [bool],
    ) -> bool {
        let x = map.len();
        if x == a.size() {
            return (0..x).all(|i| map[a.unary(i)] == b.unary(map[i]));
        }
        for y in 0..b.size() {
            if used[y] {
                continue;
            }
            if (0..x).all(|i| a.leq(i, x) == b.leq(map[i], y) && a.leq(x, i) == b.leq(y, map[i])) {
                used[y] = true;
                map.push(y);
                if extend(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[y] = false;
            }
        }
        false
    }
    a.size() == b.size() && extend(a, b, &mut Vec::new(), &mut vec![false; b.size()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::classify;

    #[test]
    fn m3_fixture_flags() {
        let c = classify(&m3_paper());
        assert!(!c.flags.unary_is_involution);
        assert!(c.flags.unary_is_antitone);
    }

    #[test]
    fn fig2_is_modular() {
        for v in [Fig2Variant::First, Fig2Variant::Second] {
            let l = fig2(v);
            assert_eq!(l.size(), 10);
            assert!(classify(&l).flags.is_modular);
            assert!(l.is_complemented());
        }
    }

    #[test]
    fn fig2_variants_differ_only_on_fgh() {
        let (a, b) = (fig2(Fig2Variant::First), fig2(Fig2Variant::Second));
        let differ: Vec<&str> = a
            .elements()
            .filter(|&x| a.unary(x) != b.unary(x))
            .map(|x| a.label(x))
            .collect();
        assert_eq!(differ, ["f", "g", "h"]);
    }

    #[test]
    fn m3_cycle_matches_fixture() {
        let l = make_m_n(3, &[1, 2, 0]).unwrap();
        assert!(isomorphic(&l, &m3_paper()));
        // the opposite 3-cycle is isomorphic too (swap two atoms)
        assert!(isomorphic(&make_m_n(3, &[2, 0, 1]).unwrap(), &m3_paper()));
        assert!(!isomorphic(&n5(), &m3_paper()));
    }

    #[test]
    fn m_n_errors() {
        assert_eq!(
            make_m_n(4, &[0, 1, 2, 3]),
            Err(CatalogError::NotADerangement(0))
        );
        assert_eq!(make_m_n(2, &[1, 0]), Err(CatalogError::TooFewAtoms(2)));
        assert_eq!(
            make_m_n(3, &[1, 1, 0]),
            Err(CatalogError::NotAPermutation(3))
        );
    }

    #[test]
    fn derangement_classes() {
        let counts: Vec<usize> = (3..=6)
            .map(|n| derangement_class_representatives(n).len())
            .collect();
        assert_eq!(counts, [1, 2, 2, 4]);
        for n in 3..=6 {
            for p in derangement_class_representatives(n) {
                assert!(p.iter().enumerate().all(|(i, &x)| i != x));
            }
        }
        // !n
        let counts: Vec<usize> = (3..=6).map(|n| all_derangements(n).len()).collect();
        assert_eq!(counts, [2, 9, 44, 265]);
    }

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=7)
            .map(|n| enumerate_bounded_lattices(n).unwrap().len())
            .collect();
        assert_eq!(counts, [1, 1, 1, 2, 5, 15, 53]);
        assert!(enumerate_bounded_lattices(8).is_err());
        assert!(enumerate_bounded_lattices(0).is_err());
    }

    #[test]
    fn five_element_variety_includes_m3() {
        let v = variety_corpus(5).unwrap();
        assert!(v.iter().any(|l| isomorphic(l, &m3_paper())));
    }

    #[test]
    fn fixtures_round_trip_json() {
        for f in fixtures() {
            let back = FiniteLattice::from_json(&f.lattice.to_json()).unwrap();
            assert_eq!(back, f.lattice, "{}", f.id);
        }
    }
}
