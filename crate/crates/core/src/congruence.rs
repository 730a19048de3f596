//! Congruences of a lattice with unary operation, and the congruence
//! properties of the variety: permutability, distributivity, regularity.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::lattice::{Elem, FiniteLattice};
use crate::sasaki;
use crate::term::{builtin_term, check_identity, parse_term, Compiled, Identity, Outcome};

/// An equivalence on the carrier stored as a block representative per
/// element; the representative is the least index in the block, so equal
/// partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Congruence {
    rep: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("element {0} appears in more than one block")]
    Overlap(Elem),
    #[error("element {0} is in no block")]
    Missing(Elem),
    #[error("element {0} is outside the carrier")]
    OutOfRange(Elem),
}

impl Congruence {
    /// The identity relation Δ.
    pub fn discrete(n: usize) -> Self {
        Congruence {
            rep: (0..n).collect(),
        }
    }

    /// The all relation ∇.
    pub fn full(n: usize) -> Self {
        Congruence { rep: vec![0; n] }
    }

    /// Canonicalizes any block labelling: elements with equal `labels` share a block.
    fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let rep = (0..labels.len())
            .map(|x| {
                (0..=x)
                    .find(|&y| labels[y] == labels[x])
                    .expect("x matches itself")
            })
            .collect();
        Congruence { rep }
    }

    fn from_union_find(uf: &UnionFind<usize>, n: usize) -> Self {
        let roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        Self::from_labels(&roots)
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<Elem>]) -> Result<Self, PartitionError> {
        let mut owner = vec![None; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                let slot = owner.get_mut(x).ok_or(PartitionError::OutOfRange(x))?;
                if slot.replace(b).is_some() {
                    return Err(PartitionError::Overlap(x));
                }
            }
        }
        let owner = owner
            .into_iter()
            .enumerate()
            .map(|(x, o)| o.ok_or(PartitionError::Missing(x)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_labels(&owner))
    }

    pub fn size(&self) -> usize {
        self.rep.len()
    }

    #[inline]
    pub fn related(&self, x: Elem, y: Elem) -> bool {
        self.rep[x] == self.rep[y]
    }

    pub fn representative(&self, x: Elem) -> Elem {
        self.rep[x]
    }

    /// The class `[x]`, sorted.
    pub fn class_of(&self, x: Elem) -> Vec<Elem> {
        (0..self.size()).filter(|&y| self.related(x, y)).collect()
    }

    /// Blocks ordered by least element, each sorted.
    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut out: Vec<Vec<Elem>> = Vec::new();
        for x in 0..self.size() {
            if self.rep[x] == x {
                out.push(vec![x]);
                continue;
            }
            let idx = out
                .iter()
                .position(|b| b[0] == self.rep[x])
                .expect("representative precedes its block");
            out[idx].push(x);
        }
        out
    }

    pub fn num_blocks(&self) -> usize {
        self.rep
            .iter()
            .enumerate()
            .filter(|&(x, &r)| x == r)
            .count()
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.size()
    }

    pub fn is_full(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// Refinement order: `self ⊆ other` as relations.
    pub fn leq(&self, other: &Congruence) -> bool {
        (0..self.size()).all(|x| other.related(x, self.rep[x]))
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let n = self.size();
        let mut uf = UnionFind::new(n);
        for x in 0..n {
            uf.union(x, self.rep[x]);
            uf.union(x, other.rep[x]);
        }
        Self::from_union_find(&uf, n)
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let pairs: Vec<(Elem, Elem)> = self
            .rep
            .iter()
            .copied()
            .zip(other.rep.iter().copied())
            .collect();
        Self::from_labels(&pairs)
    }

    /// The relation as a row-major boolean matrix.
    pub fn matrix(&self) -> Vec<bool> {
        let n = self.size();
        (0..n)
            .cartesian_product(0..n)
            .map(|(x, y)| self.related(x, y))
            .collect()
    }

    /// `{a,b},{c}` with labels.
    pub fn describe(&self, l: &FiniteLattice) -> String {
        self.blocks().into_iter().map(|b| l.format_set(b)).join(",")
    }

    pub fn label_blocks(&self, l: &FiniteLattice) -> Vec<Vec<String>> {
        self.blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|x| l.label(x).to_owned()).collect())
            .collect()
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self
            .blocks()
            .into_iter()
            .map(|b| format!("{{{}}}", b.iter().join(",")));
        write!(f, "{}", blocks.format(","))
    }
}

/// True iff the partition is compatible with `∨`, `∧` and `′`.
pub fn is_congruence(l: &FiniteLattice, theta: &Congruence) -> bool {
    first_incompatibility(l, theta).is_none()
}

/// A related pair `(x, y)` and a translation that separates them, if any.
pub fn first_incompatibility(l: &FiniteLattice, theta: &Congruence) -> Option<(Elem, Elem)> {
    l.elements()
        .tuple_combinations()
        .filter(|&(x, y)| theta.related(x, y))
        .find(|&(x, y)| {
            !theta.related(l.unary(x), l.unary(y))
                || l.elements().any(|c| {
                    !theta.related(l.join(x, c), l.join(y, c))
                        || !theta.related(l.meet(x, c), l.meet(y, c))
                })
        })
}

/// The least congruence identifying `a` and `b`.
///
/// Union-find fixpoint: every newly merged pair is pushed through every
/// basic translation (`_ ∨ c`, `_ ∧ c`, `′`) and the images merged in turn.
pub fn principal_congruence(l: &FiniteLattice, a: Elem, b: Elem) -> Congruence {
    let n = l.size();
    let mut uf = UnionFind::new(n);
    let mut queue = vec![(a, b)];
    while let Some((x, y)) = queue.pop() {
        if !uf.union(x, y) {
            continue;
        }
        queue.push((l.unary(x), l.unary(y)));
        for c in l.elements() {
            queue.push((l.join(x, c), l.join(y, c)));
            queue.push((l.meet(x, c), l.meet(y, c)));
        }
    }
    Congruence::from_union_find(&uf, n)
}

/// `Con L`, sorted, computed as Δ plus the join-closure of all principal
/// congruences.
pub fn all_congruences(l: &FiniteLattice) -> Vec<Congruence> {
    let n = l.size();
    let principals: BTreeSet<Congruence> = l
        .elements()
        .tuple_combinations()
        .map(|(a, b)| principal_congruence(l, a, b))
        .collect();
    let mut all: BTreeSet<Congruence> = principals.clone();
    all.insert(Congruence::discrete(n));
    let mut frontier: Vec<Congruence> = all.iter().cloned().collect();
    while let Some(theta) = frontier.pop() {
        for p in &principals {
            let j = theta.join(p);
            if all.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    all.into_iter().collect()
}

/// `Θ ∘ Φ` as a boolean matrix.
fn compose(theta: &Congruence, phi: &Congruence) -> Vec<bool> {
    let n = theta.size();
    (0..n)
        .cartesian_product(0..n)
        .map(|(x, z)| (0..n).any(|y| theta.related(x, y) && phi.related(y, z)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceProperties {
    pub count: usize,
    pub permutable: bool,
    pub distributive: bool,
    pub regular: bool,
    pub simple: bool,
    pub subdirectly_irreducible: bool,
    /// Least non-Δ congruence when it exists.
    pub monolith: Option<Congruence>,
    /// A pair of congruences that do not permute.
    pub nonpermuting: Option<(Congruence, Congruence)>,
    /// Two distinct congruences and an element whose classes coincide.
    pub irregular: Option<(Congruence, Congruence, Elem)>,
}

pub fn check_congruence_properties(l: &FiniteLattice) -> CongruenceProperties {
    properties_of(l, &all_congruences(l))
}

pub fn properties_of(l: &FiniteLattice, con: &[Congruence]) -> CongruenceProperties {
    let n = l.size();
    let nonpermuting = con
        .iter()
        .tuple_combinations()
        .find(|(t, p)| compose(t, p) != compose(p, t))
        .map(|(t, p)| (t.clone(), p.clone()));
    let distributive = con.iter().tuple_combinations().all(|(a, b, c)| {
        // repeated arguments make the law trivial and ∨ is symmetric
        [(a, b, c), (b, a, c), (c, a, b)]
            .iter()
            .all(|(x, y, z)| x.meet(&y.join(z)) == x.meet(y).join(&x.meet(z)))
    });
    let irregular = con.iter().tuple_combinations().find_map(|(t, p)| {
        l.elements()
            .find(|&a| t.class_of(a) == p.class_of(a))
            .map(|a| (t.clone(), p.clone(), a))
    });
    let nontrivial: Vec<&Congruence> = con.iter().filter(|c| !c.is_discrete()).collect();
    let monolith = nontrivial
        .iter()
        .skip(1)
        .fold(nontrivial.first().map(|c| (*c).clone()), |acc, c| {
            acc.map(|m| m.meet(c))
        })
        .filter(|m| !m.is_discrete());
    CongruenceProperties {
        count: con.len(),
        permutable: nonpermuting.is_none(),
        distributive,
        regular: irregular.is_none(),
        simple: n >= 2 && con.len() == 2,
        subdirectly_irreducible: monolith.is_some(),
        monolith,
        nonpermuting,
        irregular,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("lattice is not in the variety")]
    NotInV,
}

/// Results of checking the Mal'cev, majority and regularity terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem2Verdict {
    /// `p(x,x,z) = z` and `p(x,z,z) = x`.
    pub malcev: Vec<(Identity, Outcome)>,
    /// `m(x,x,y) = m(x,y,x) = m(y,x,x) = x`.
    pub majority: Vec<(Identity, Outcome)>,
    /// First `(x, y, z)` where `reg1 = reg2 = z` disagrees with `x = y`.
    pub regularity_failure: Option<(Elem, Elem, Elem)>,
    pub regularity_checked: u64,
}

impl Theorem2Verdict {
    pub fn holds(&self) -> bool {
        self.malcev
            .iter()
            .chain(&self.majority)
            .all(|(_, o)| o.holds())
            && self.regularity_failure.is_none()
    }
}

pub const MALCEV_IDENTITIES: [&str; 2] = ["p(x, x, z) = z", "p(x, z, z) = x"];
pub const MAJORITY_IDENTITIES: [&str; 3] = ["m(x, x, y) = x", "m(x, y, x) = x", "m(y, x, x) = x"];

fn identity(text: &str) -> Identity {
    let (l, r) = text.split_once('=').expect("identity has `=`");
    Identity::new(
        parse_term(l).expect("built-in identity parses"),
        parse_term(r).expect("built-in identity parses"),
    )
}

/// Exhaustive check of the witnessing terms on a member of the variety.
pub fn verify_theorem2_terms(l: &FiniteLattice) -> Result<Theorem2Verdict, CongruenceError> {
    if !sasaki::is_member_of_v(l) {
        return Err(CongruenceError::NotInV);
    }
    let run = |texts: &[&str]| -> Vec<(Identity, Outcome)> {
        texts
            .iter()
            .map(|t| {
                let id = identity(t);
                let out = check_identity(l, &id);
                (id, out)
            })
            .collect()
    };
    let vars = ["x".to_string(), "y".into(), "z".into()];
    let r1 = builtin_term("reg1").expect("reg1 is built in");
    let r2 = builtin_term("reg2").expect("reg2 is built in");
    let prog = Compiled::new(&[&r1, &r2], &vars);
    let mut buf = Vec::new();
    let mut checked = 0;
    let mut failure = None;
    'scan: for x in l.elements() {
        for y in l.elements() {
            for z in l.elements() {
                checked += 1;
                prog.run(l, &[x, y, z], &mut buf);
                let both = buf[prog.root(0)] == z && buf[prog.root(1)] == z;
                if both != (x == y) {
                    failure = Some((x, y, z));
                    break 'scan;
                }
            }
        }
    }
    Ok(Theorem2Verdict {
        malcev: run(&MALCEV_IDENTITIES),
        majority: run(&MAJORITY_IDENTITIES),
        regularity_failure: failure,
        regularity_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, Fig2Variant};

    fn labels_to_blocks(l: &FiniteLattice, blocks: &[&[&str]]) -> Congruence {
        let b: Vec<Vec<Elem>> = blocks
            .iter()
            .map(|b| b.iter().map(|s| l.index_of(s).unwrap()).collect())
            .collect();
        Congruence::from_blocks(l.size(), &b).unwrap()
    }

    /// Every set partition of `0..n` (restricted growth strings).
    fn all_partitions(n: usize) -> Vec<Congruence> {
        fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Congruence>) {
            if prefix.len() == n {
                out.push(Congruence::from_labels(prefix));
                return;
            }
            let max = prefix.iter().copied().max().map_or(0, |m| m + 1);
            for b in 0..=max {
                prefix.push(b);
                go(prefix, n, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), n, &mut out);
        out
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| all_partitions(n).len()).collect();
        assert_eq!(counts, [1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn fig2_first_kernel_partition() {
        let l = catalog::fig2(Fig2Variant::First);
        let theta = labels_to_blocks(
            &l,
            &[&["d", "f", "g", "h", "1"], &["0", "a", "b", "c", "e"]],
        );
        assert!(is_congruence(&l, &theta));
        let bad = labels_to_blocks(
            &l,
            &[
                &["e", "1"],
                &["a", "f"],
                &["b", "g"],
                &["c", "h"],
                &["0", "d"],
            ],
        );
        assert!(!is_congruence(&l, &bad));
        assert!(is_congruence(&l, &Congruence::discrete(l.size())));
    }

    #[test]
    fn partitions_must_cover() {
        assert_eq!(
            Congruence::from_blocks(3, &[vec![0, 1]]),
            Err(PartitionError::Missing(2))
        );
        assert_eq!(
            Congruence::from_blocks(3, &[vec![0, 1], vec![1, 2]]),
            Err(PartitionError::Overlap(1))
        );
        assert_eq!(
            Congruence::from_blocks(1, &[vec![0, 4]]),
            Err(PartitionError::OutOfRange(4))
        );
    }

    #[test]
    fn principal_examples() {
        let m3 = catalog::m3_paper();
        assert!(principal_congruence(&m3, 2, 2).is_discrete());
        let (a, one) = (m3.index_of("a").unwrap(), m3.top());
        assert!(principal_congruence(&m3, a, one).is_full());

        let l = catalog::fig2(Fig2Variant::First);
        let d = l.index_of("d").unwrap();
        let theta = principal_congruence(&l, d, l.top());
        assert_eq!(
            theta,
            labels_to_blocks(
                &l,
                &[&["d", "f", "g", "h", "1"], &["0", "a", "b", "c", "e"]]
            )
        );
    }

    #[test]
    fn congruence_counts() {
        assert_eq!(all_congruences(&catalog::m3_paper()).len(), 2);
        assert_eq!(all_congruences(&catalog::fig2(Fig2Variant::First)).len(), 3);
        assert_eq!(
            all_congruences(&catalog::fig2(Fig2Variant::Second)).len(),
            4
        );
    }

    #[test]
    fn join_closure_matches_partition_oracle() {
        let mut lattices = vec![catalog::m3_paper(), catalog::n5(), catalog::boolean4()];
        lattices.extend(catalog::complemented_corpus(6).unwrap());
        lattices.push(catalog::make_m_n(4, &[1, 0, 3, 2]).unwrap());
        lattices.push(catalog::boolean4().direct_product(&catalog::chain2()));
        lattices.push(catalog::make_m_n(6, &[1, 2, 0, 4, 5, 3]).unwrap());
        lattices.extend(catalog::enumerate_bounded_lattices(7).unwrap());
        for l in &lattices {
            let fast = all_congruences(l);
            let oracle: Vec<Congruence> = all_partitions(l.size())
                .into_iter()
                .filter(|p| is_congruence(l, p))
                .sorted()
                .collect();
            assert_eq!(fast, oracle, "{}", l.to_json());
        }
    }

    #[test]
    fn principal_is_least_containing_pair() {
        for l in [
            catalog::fig2(Fig2Variant::Second),
            catalog::boolean4(),
            catalog::n5(),
        ] {
            let con = all_congruences(&l);
            for (a, b) in l.elements().tuple_combinations() {
                let p = principal_congruence(&l, a, b);
                assert!(con.contains(&p));
                for c in con.iter().filter(|c| c.related(a, b)) {
                    assert!(p.leq(c));
                }
            }
        }
    }

    #[test]
    fn closed_under_join_and_meet() {
        let l = catalog::fig2(Fig2Variant::Second);
        let con = all_congruences(&l);
        assert!(con.contains(&Congruence::discrete(10)));
        assert!(con.contains(&Congruence::full(10)));
        for (a, b) in con.iter().tuple_combinations() {
            assert!(con.contains(&a.join(b)));
            assert!(con.contains(&a.meet(b)));
        }
    }

    #[test]
    fn boolean4_not_subdirectly_irreducible() {
        let p = check_congruence_properties(&catalog::boolean4());
        assert!(!p.subdirectly_irreducible);
        assert_eq!(p.count, 4);
    }

    #[test]
    fn m_n_simple() {
        for l in catalog::m_n_family(3..=6) {
            let p = check_congruence_properties(&l);
            assert!(p.simple && p.subdirectly_irreducible);
        }
    }

    #[test]
    fn fig2_first_has_monolith() {
        let l = catalog::fig2(Fig2Variant::First);
        let p = check_congruence_properties(&l);
        assert!(p.subdirectly_irreducible && !p.simple);
        assert!(p.permutable && p.distributive && p.regular);
        assert_eq!(p.monolith.unwrap().num_blocks(), 2);
    }

    #[test]
    fn n5_con_is_distributive() {
        let p = check_congruence_properties(&catalog::n5());
        assert!(p.distributive);
    }

    #[test]
    fn witnessing_terms_on_fixtures() {
        let l = catalog::fig2(Fig2Variant::First);
        let v = verify_theorem2_terms(&l).unwrap();
        assert!(v.holds());
        assert_eq!(v.malcev[0].1, Outcome::Holds { checked: 100 });
        assert_eq!(
            verify_theorem2_terms(&catalog::n5()),
            Err(CongruenceError::NotInV)
        );
    }

    #[test]
    fn m3_regularity_terms_at_a_b_0() {
        let l = catalog::m3_paper();
        let (a, b) = (l.index_of("a").unwrap(), l.index_of("b").unwrap());
        let vars = ["x".to_string(), "y".into(), "z".into()];
        let r1 = Compiled::new(&[&builtin_term("reg1").unwrap()], &vars);
        let r2 = Compiled::new(&[&builtin_term("reg2").unwrap()], &vars);
        assert_eq!(r1.eval(&l, &[a, b, l.bottom()]), l.bottom());
        assert_eq!(r2.eval(&l, &[a, b, l.bottom()]), l.top());
    }
}
