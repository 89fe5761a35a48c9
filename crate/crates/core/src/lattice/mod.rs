//! Finite bounded lattices with precomputed operation tables.
//!
//! Elements are indexed `0..n` in input order. The order is stored as two bit
//! matrices (up-sets and down-sets); binary joins and meets are tabulated when
//! the lattice is built, so every later query is a lookup.

pub mod catalog;
pub mod oml;

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub use oml::{check_oml, downset_oml, FiniteOml, SubOml};

#[derive(Clone, Debug)]
pub struct FiniteLattice {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.up == other.up
    }
}

impl Eq for FiniteLattice {}

/// Builds a lattice from element labels and a list of `(lower, upper)` pairs.
///
/// The pairs may be covering pairs or any subset of the order; the reflexive
/// transitive closure is always recomputed.
pub fn build_lattice<S: AsRef<str>>(labels: &[S], leq_pairs: &[(S, S)]) -> Result<FiniteLattice> {
    let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
    let index = label_index(&labels)?;
    let n = labels.len();
    let mut rel = vec![FixedBitSet::with_capacity(n); n];
    for (lo, hi) in leq_pairs {
        let (lo, hi) = (lo.as_ref(), hi.as_ref());
        let i = *index
            .get(lo)
            .ok_or_else(|| Error::InvalidInput(format!("unknown element `{lo}` in order")))?;
        let j = *index
            .get(hi)
            .ok_or_else(|| Error::InvalidInput(format!("unknown element `{hi}` in order")))?;
        rel[i].insert(j);
    }
    FiniteLattice::from_relation(labels, rel)
}

fn label_index(labels: &[String]) -> Result<HashMap<String, usize>> {
    if labels.is_empty() {
        return Err(Error::InvalidInput("a lattice needs at least one element".into()));
    }
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::InvalidInput(format!("duplicate element label `{l}`")));
        }
    }
    Ok(index)
}

impl FiniteLattice {
    /// Builds a lattice from labels and a relation given as rows of up-sets:
    /// `rel[i]` contains `j` when `i ≤ j` is asserted. Closure is applied.
    pub fn from_relation(labels: Vec<String>, mut rel: Vec<FixedBitSet>) -> Result<Self> {
        let index = label_index(&labels)?;
        let n = labels.len();
        if rel.len() != n {
            return Err(Error::InvalidInput("relation has wrong number of rows".into()));
        }
        for (i, row) in rel.iter_mut().enumerate() {
            row.grow(n);
            row.insert(i);
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            let row_k = rel[k].clone();
            for row in rel.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for i in 0..n {
            for j in rel[i].ones().filter(|&j| j > i) {
                if rel[j].contains(i) {
                    return Err(Error::NotAPoset {
                        a: labels[i].clone(),
                        b: labels[j].clone(),
                    });
                }
            }
        }
        let up = rel;
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row.ones() {
                down[j].insert(i);
            }
        }

        // Ascending downset size is a linear extension: the least element of
        // any up-set intersection comes first in it.
        let mut by_rank: Vec<usize> = (0..n).collect();
        by_rank.sort_by_key(|&x| (down[x].count_ones(..), x));
        let mut by_corank: Vec<usize> = (0..n).collect();
        by_corank.sort_by_key(|&x| (up[x].count_ones(..), x));

        // per element: its join and meet rows, or a pair lacking a bound
        type Rows = Result<(Vec<usize>, Vec<usize>), (usize, usize, &'static str)>;
        let rows: Vec<Rows> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut jrow = Vec::with_capacity(n);
                let mut mrow = Vec::with_capacity(n);
                for y in 0..n {
                    let mut ub = up[x].clone();
                    ub.intersect_with(&up[y]);
                    let j = by_rank
                        .iter()
                        .copied()
                        .find(|&c| ub.contains(c))
                        .filter(|&c| ub.is_subset(&up[c]))
                        .ok_or((x, y, "least upper bound"))?;
                    let mut lb = down[x].clone();
                    lb.intersect_with(&down[y]);
                    let m = by_corank
                        .iter()
                        .copied()
                        .find(|&c| lb.contains(c))
                        .filter(|&c| lb.is_subset(&down[c]))
                        .ok_or((x, y, "greatest lower bound"))?;
                    jrow.push(j);
                    mrow.push(m);
                }
                Ok((jrow, mrow))
            })
            .collect();

        let mut join = Vec::with_capacity(n * n);
        let mut meet = Vec::with_capacity(n * n);
        for row in rows {
            match row {
                Ok((j, m)) => {
                    join.extend(j);
                    meet.extend(m);
                }
                Err((x, y, kind)) => {
                    return Err(Error::NotALattice {
                        a: labels[x].clone(),
                        b: labels[y].clone(),
                        kind,
                    })
                }
            }
        }
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (0..n).fold(0, |acc, x| join[acc * n + x]);
        Ok(FiniteLattice {
            labels,
            index,
            up,
            down,
            join,
            meet,
            bottom,
            top,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn element(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown element `{label}`")))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Join of an arbitrary family; the empty join is the bottom.
    pub fn join_set<I: IntoIterator<Item = usize>>(&self, set: I) -> usize {
        set.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of an arbitrary family; the empty meet is the top.
    pub fn meet_set<I: IntoIterator<Item = usize>>(&self, set: I) -> usize {
        set.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// `{y : x ≤ y}`
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// `{y : y ≤ x}`
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// Covering pairs `(x, y)` with `x < y` and nothing strictly between,
    /// in ascending index order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.up[x].ones().filter(|&y| y != x) {
                let mut between = self.up[x].clone();
                between.intersect_with(&self.down[y]);
                if between.count_ones(..) == 2 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Elements that are not the join of the elements strictly below them.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| {
                x != self.bottom
                    && self.join_set(self.down[x].ones().filter(|&y| y != x)) != x
            })
            .collect()
    }

    /// All `(x, y)` with `x ≤ y`, as label pairs.
    pub fn order_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.up[x].ones() {
                out.push((self.labels[x].clone(), self.labels[y].clone()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FiniteLattice {
        build_lattice(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap()
    }

    #[test]
    fn single_element_lattice() {
        let l = build_lattice::<&str>(&["0"], &[]).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.bottom(), l.top());
        assert_eq!(l.join(0, 0), 0);
    }

    #[test]
    fn boolean_square_tables() {
        let l = diamond();
        let (z, a, b, t) = (0, 1, 2, 3);
        assert_eq!(l.join(a, b), t);
        assert_eq!(l.meet(a, b), z);
        assert_eq!(l.join(a, z), a);
        assert_eq!(l.meet(a, t), a);
        assert_eq!(l.bottom(), z);
        assert_eq!(l.top(), t);
        assert!(l.leq(z, t));
        assert!(!l.leq(a, b));
        assert_eq!(l.covers(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(l.join_irreducibles(), vec![a, b]);
    }

    #[test]
    fn three_atoms_accepted_then_missing_top_rejected() {
        let labels = ["0", "a", "b", "c", "1"];
        let pairs = [
            ("0", "a"),
            ("0", "b"),
            ("0", "c"),
            ("a", "1"),
            ("b", "1"),
            ("c", "1"),
        ];
        let l = build_lattice(&labels, &pairs).unwrap();
        assert_eq!(l.join(1, 2), 4);
        assert_eq!(l.meet(2, 3), 0);

        let err = build_lattice(&labels[..4], &pairs[..3]).unwrap_err();
        assert_eq!(
            err,
            Error::NotALattice {
                a: "a".into(),
                b: "b".into(),
                kind: "least upper bound"
            }
        );
    }

    #[test]
    fn cycle_is_not_a_poset() {
        let err = build_lattice(&["x", "y", "z"], &[("x", "y"), ("y", "z"), ("z", "x")])
            .unwrap_err();
        assert_eq!(
            err,
            Error::NotAPoset {
                a: "x".into(),
                b: "y".into()
            }
        );
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(matches!(
            build_lattice::<&str>(&[], &[]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            build_lattice::<&str>(&["a", "a"], &[]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            build_lattice(&["a"], &[("a", "q")]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn two_incomparable_maxima_is_not_a_lattice() {
        let err = build_lattice(&["0", "a", "b"], &[("0", "a"), ("0", "b")]).unwrap_err();
        assert!(matches!(err, Error::NotALattice { .. }));
    }

    #[test]
    fn set_operations() {
        let l = diamond();
        assert_eq!(l.join_set([]), 0);
        assert_eq!(l.meet_set([]), 3);
        assert_eq!(l.join_set([1, 2]), 3);
        assert_eq!(l.meet_set([1, 3]), 1);
    }

    #[test]
    fn full_order_pairs_equal_cover_input() {
        let l = diamond();
        let pairs = l.order_pairs();
        let again = build_lattice(
            l.labels(),
            &pairs.iter().map(|(a, b)| (a.clone(), b.clone())).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(l, again);
    }
}
