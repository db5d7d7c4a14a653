//! The arithmetic shadow of the coherence argument for an idempotent
//! `θ : P ⊗ P → P`.
//!
//! Once every bracketing of `P^{⊗n}` is identified with `P` through `θ`, each
//! associator edge `(A⊗B)⊗C → A⊗(B⊗C)` becomes the same automorphism `C` of
//! `P`. Two directed paths between the same bracketings then give
//! `C^a = C^b`, and for invertible `C` this means `C^{|a−b|} = id`.
//! This module enumerates the bracketings, the directed rotations and the
//! resulting path lengths between the left and right combs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A full binary tree whose leaves are all the single generator `P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BracketTree {
    Leaf,
    Node(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn node(a: BracketTree, b: BracketTree) -> Self {
        BracketTree::Node(Box::new(a), Box::new(b))
    }

    pub fn leaves(&self) -> usize {
        match self {
            BracketTree::Leaf => 1,
            BracketTree::Node(a, b) => a.leaves() + b.leaves(),
        }
    }

    /// `((P⊗P)⊗P)⊗…`
    pub fn left_comb(n: usize) -> Self {
        (1..n).fold(BracketTree::Leaf, |acc, _| Self::node(acc, BracketTree::Leaf))
    }

    /// `…⊗(P⊗(P⊗P))`
    pub fn right_comb(n: usize) -> Self {
        (1..n).fold(BracketTree::Leaf, |acc, _| Self::node(BracketTree::Leaf, acc))
    }
}

impl fmt::Display for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketTree::Leaf => write!(f, "P"),
            BracketTree::Node(a, b) => {
                let side = |t: &BracketTree, f: &mut fmt::Formatter<'_>| match t {
                    BracketTree::Leaf => write!(f, "P"),
                    _ => write!(f, "({t})"),
                };
                side(a, f)?;
                write!(f, "⊗")?;
                side(b, f)
            }
        }
    }
}

/// Leaf counts accepted by [`enumerate_brackets`].
pub const MAX_LEAVES: usize = 7;

/// All bracketings of `n` leaves, in a fixed recursive order; there are
/// `Catalan(n − 1)` of them.
pub fn enumerate_brackets(n: usize) -> Result<Vec<BracketTree>> {
    if !(2..=MAX_LEAVES).contains(&n) {
        return Err(Error::SizeGuard(format!(
            "leaf count must be in 2..={MAX_LEAVES}, got {n}"
        )));
    }
    Ok(brackets(n))
}

fn brackets(n: usize) -> Vec<BracketTree> {
    if n == 1 {
        return vec![BracketTree::Leaf];
    }
    let mut out = Vec::new();
    for k in 1..n {
        for a in brackets(k) {
            for b in brackets(n - k) {
                out.push(BracketTree::node(a.clone(), b));
            }
        }
    }
    out
}

pub fn catalan(k: usize) -> u64 {
    (0..k as u64).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

/// Path from the root to a node: `false` is left, `true` is right.
pub type Position = Vec<bool>;

/// Every tree reached by one rotation `(A⊗B)⊗C → A⊗(B⊗C)`, with the
/// position of the rotated node.
pub fn tamari_successors(t: &BracketTree) -> Vec<(BracketTree, Position)> {
    let mut out = Vec::new();
    successors_at(t, &mut Vec::new(), &mut out);
    out
}

fn successors_at(t: &BracketTree, pos: &mut Position, out: &mut Vec<(BracketTree, Position)>) {
    let BracketTree::Node(l, r) = t else {
        return;
    };
    if let BracketTree::Node(a, b) = l.as_ref() {
        let rotated = BracketTree::node((**a).clone(), BracketTree::node((**b).clone(), (**r).clone()));
        out.push((rotated, pos.clone()));
    }
    pos.push(false);
    let mut left = Vec::new();
    successors_at(l, pos, &mut left);
    pos.pop();
    out.extend(
        left.into_iter()
            .map(|(s, p)| (BracketTree::node(s, (**r).clone()), p)),
    );
    pos.push(true);
    let mut right = Vec::new();
    successors_at(r, pos, &mut right);
    pos.pop();
    out.extend(
        right
            .into_iter()
            .map(|(s, p)| (BracketTree::node((**l).clone(), s), p)),
    );
}

/// Whether `to` is obtained from `from` by one rotation.
pub fn is_rotation(from: &BracketTree, to: &BracketTree) -> bool {
    tamari_successors(from).iter().any(|(t, _)| t == to)
}

/// Distinct lengths of directed rotation paths from `from` to `to`.
pub fn path_lengths(from: &BracketTree, to: &BracketTree) -> BTreeSet<usize> {
    let mut memo = HashMap::new();
    lengths_from(from, to, &mut memo)
}

fn lengths_from(
    t: &BracketTree,
    target: &BracketTree,
    memo: &mut HashMap<BracketTree, BTreeSet<usize>>,
) -> BTreeSet<usize> {
    if t == target {
        return BTreeSet::from([0]);
    }
    if let Some(v) = memo.get(t) {
        return v.clone();
    }
    let mut out = BTreeSet::new();
    for (s, _) in tamari_successors(t) {
        out.extend(lengths_from(&s, target, memo).into_iter().map(|k| k + 1));
    }
    memo.insert(t.clone(), out.clone());
    out
}

/// All pairs `(a, b)`, `a < b`, of distinct path lengths from the left comb
/// to the right comb on `n` leaves.
pub fn parallel_relations(n: usize) -> Result<BTreeSet<(usize, usize)>> {
    if !(3..=MAX_LEAVES).contains(&n) {
        return Err(Error::SizeGuard(format!(
            "leaf count must be in 3..={MAX_LEAVES}, got {n}"
        )));
    }
    let lengths: Vec<usize> = path_lengths(&BracketTree::left_comb(n), &BracketTree::right_comb(n))
        .into_iter()
        .collect();
    Ok(pairs(&lengths))
}

fn pairs(lengths: &[usize]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (i, &a) in lengths.iter().enumerate() {
        for &b in &lengths[i + 1..] {
            out.insert((a, b));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// `C = id`
    Identity,
    /// `C^d = id` for the recorded `d > 1`
    PowerIdentity(u64),
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Identity => write!(f, "C=id"),
            Verdict::PowerIdentity(d) => write!(f, "C^{d}=id"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// gcd of `|a − b|` over the relations, or `None` when there are none.
pub fn difference_gcd(relations: &BTreeSet<(usize, usize)>) -> Option<u64> {
    relations
        .iter()
        .map(|&(a, b)| a.abs_diff(b) as u64)
        .reduce(|x, y| x.gcd(&y))
}

/// Each relation `C^a = C^b` with invertible `C` gives `C^{|a−b|} = id`.
/// Without invertibility nothing can be cancelled.
pub fn conclude_idempotent(relations: &BTreeSet<(usize, usize)>, invertible: bool) -> Verdict {
    match difference_gcd(relations) {
        Some(1) if invertible => Verdict::Identity,
        Some(d) if invertible && d > 1 => Verdict::PowerIdentity(d),
        _ => Verdict::Inconclusive,
    }
}

/// The per-`n` record emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub n: usize,
    pub catalan: u64,
    pub path_lengths: Vec<usize>,
    pub relations: Vec<[usize; 2]>,
    pub verdict: String,
}

pub fn coherence_report(n: usize) -> Result<CoherenceReport> {
    let trees = enumerate_brackets(n)?;
    let lengths = path_lengths(&BracketTree::left_comb(n), &BracketTree::right_comb(n));
    let relations = parallel_relations(n)?;
    Ok(CoherenceReport {
        n,
        catalan: trees.len() as u64,
        path_lengths: lengths.into_iter().collect(),
        relations: relations.iter().map(|&(a, b)| [a, b]).collect(),
        verdict: conclude_idempotent(&relations, true).to_string(),
    })
}

/// Every edge of every comb-to-comb path is a single rotation, checked by
/// walking all paths explicitly.
pub fn validate_paths(n: usize) -> Result<bool> {
    let trees = enumerate_brackets(n)?;
    let target = BracketTree::right_comb(n);
    let mut ok = true;
    for t in &trees {
        for (s, pos) in tamari_successors(t) {
            ok &= is_rotation(t, &s) && s.leaves() == n && subtree(t, &pos).is_some();
        }
        if *t != target && tamari_successors(t).is_empty() {
            ok = false;
        }
    }
    Ok(ok)
}

fn subtree<'a>(t: &'a BracketTree, pos: &[bool]) -> Option<&'a BracketTree> {
    pos.iter().try_fold(t, |node, &right| match node {
        BracketTree::Node(l, r) => Some(if right { r.as_ref() } else { l.as_ref() }),
        BracketTree::Leaf => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_counts() {
        assert_eq!(enumerate_brackets(2).unwrap().len(), 1);
        assert_eq!(enumerate_brackets(4).unwrap().len(), 5);
        assert_eq!(enumerate_brackets(5).unwrap().len(), 14);
        for n in 2..=7 {
            assert_eq!(enumerate_brackets(n).unwrap().len() as u64, catalan(n - 1));
        }
        assert!(enumerate_brackets(8).is_err());
        assert!(enumerate_brackets(1).is_err());
    }

    #[test]
    fn successors() {
        assert!(tamari_successors(&BracketTree::right_comb(4)).is_empty());
        let s = tamari_successors(&BracketTree::left_comb(3));
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].0, BracketTree::right_comb(3));
        assert_eq!(tamari_successors(&BracketTree::left_comb(4)).len(), 2);
    }

    #[test]
    fn display() {
        assert_eq!(BracketTree::left_comb(4).to_string(), "((P⊗P)⊗P)⊗P");
        assert_eq!(BracketTree::right_comb(3).to_string(), "P⊗(P⊗P)");
    }

    #[test]
    fn relations_and_verdicts() {
        assert!(parallel_relations(3).unwrap().is_empty());
        assert_eq!(parallel_relations(4).unwrap(), BTreeSet::from([(2, 3)]));
        let r5 = parallel_relations(5).unwrap();
        assert!(r5.iter().any(|&(a, b)| b == a + 1));
        for n in 4..=6 {
            assert_eq!(difference_gcd(&parallel_relations(n).unwrap()), Some(1));
        }
        assert_eq!(conclude_idempotent(&BTreeSet::from([(2, 3)]), true), Verdict::Identity);
        assert_eq!(conclude_idempotent(&BTreeSet::new(), true), Verdict::Inconclusive);
        assert_eq!(
            conclude_idempotent(&BTreeSet::from([(2, 4)]), true),
            Verdict::PowerIdentity(2)
        );
        assert_eq!(conclude_idempotent(&BTreeSet::from([(2, 3)]), false), Verdict::Inconclusive);
    }

    #[test]
    fn report_shape() {
        let r = coherence_report(4).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "n": 4, "catalan": 5, "path_lengths": [2, 3],
                "relations": [[2, 3]], "verdict": "C=id"
            })
        );
        for n in 3..=7 {
            assert!(validate_paths(n).unwrap());
        }
    }
}
