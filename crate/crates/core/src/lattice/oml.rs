//! Orthocomplemented lattices, the orthomodular law, Sasaki projections and
//! principal down-set sub-lattices.

use std::ops::Deref;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::FiniteLattice;
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::scan::first_witness;

/// A finite lattice paired with an orthocomplement table.
///
/// Construction only checks that the table is a total map on elements. Whether
/// the pair actually forms an orthomodular lattice is reported by
/// [`FiniteOml::check`]; pipelines gate on that report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteOml {
    lattice: FiniteLattice,
    ortho: Vec<usize>,
}

impl Deref for FiniteOml {
    type Target = FiniteLattice;

    fn deref(&self) -> &FiniteLattice {
        &self.lattice
    }
}

impl FiniteOml {
    pub fn new(lattice: FiniteLattice, ortho: Vec<usize>) -> Result<Self> {
        if ortho.len() != lattice.len() {
            return Err(Error::InvalidInput(format!(
                "orthocomplement has {} entries for {} elements",
                ortho.len(),
                lattice.len()
            )));
        }
        if let Some(&bad) = ortho.iter().find(|&&v| v >= lattice.len()) {
            return Err(Error::InvalidInput(format!(
                "orthocomplement value {bad} out of range"
            )));
        }
        Ok(FiniteOml { lattice, ortho })
    }

    /// Builds the orthocomplement from label pairs `x ↦ x⊥`. Pairs are read
    /// symmetrically, so listing one direction of each pair is enough.
    pub fn from_label_pairs<S: AsRef<str>>(lattice: FiniteLattice, pairs: &[(S, S)]) -> Result<Self> {
        let n = lattice.len();
        let mut ortho: Vec<Option<usize>> = vec![None; n];
        let mut set = |x: usize, y: usize| -> Result<()> {
            match ortho[x] {
                Some(prev) if prev != y => Err(Error::InvalidInput(format!(
                    "conflicting orthocomplement for `{}`",
                    lattice.label(x)
                ))),
                _ => {
                    ortho[x] = Some(y);
                    Ok(())
                }
            }
        };
        for (a, b) in pairs {
            let x = lattice.element(a.as_ref())?;
            let y = lattice.element(b.as_ref())?;
            set(x, y)?;
        }
        for (a, b) in pairs {
            let x = lattice.element(a.as_ref())?;
            let y = lattice.element(b.as_ref())?;
            if ortho[y].is_none() {
                ortho[y] = Some(x);
            }
        }
        let ortho = ortho
            .iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "no orthocomplement given for `{}`",
                        lattice.label(i)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteOml::new(lattice, ortho)
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn ortho_table(&self) -> &[usize] {
        &self.ortho
    }

    #[inline]
    pub fn ortho(&self, x: usize) -> usize {
        self.ortho[x]
    }

    /// `x ⊥ y`, i.e. `x ≤ y⊥`.
    #[inline]
    pub fn ortho_pair(&self, x: usize, y: usize) -> bool {
        self.leq(x, self.ortho[y])
    }

    /// Sasaki projection `π_a(y) = a ∧ (a⊥ ∨ y)`.
    #[inline]
    pub fn sasaki(&self, a: usize, y: usize) -> usize {
        self.meet(a, self.join(self.ortho[a], y))
    }

    pub fn sasaki_table(&self, a: usize) -> Vec<usize> {
        (0..self.len()).map(|y| self.sasaki(a, y)).collect()
    }

    pub fn check(&self) -> CheckReport {
        check_oml(&self.lattice, &self.ortho)
    }

    /// Exhaustive check of the four standard Sasaki projection facts over
    /// every `(a, y, z)`.
    pub fn check_sasaki_facts(&self) -> CheckReport {
        let n = self.len();
        let pi: Vec<usize> = (0..n * n).map(|i| self.sasaki(i / n, i % n)).collect();
        let p = |a: usize, y: usize| pi[a * n + y];
        let o = |x: usize| self.ortho[x];
        let lab = |xs: &[usize]| xs.iter().map(|&x| self.label(x).to_string()).collect();
        let mut report = CheckReport::new("sasaki-facts");

        let w = first_witness(n, |a| {
            (0..n)
                .find(|&y| self.leq(y, a) != (p(a, y) == y))
                .map(|y| vec![a, y])
        });
        report.record("fixed-points", w.map(|w| lab(&w)));

        let w = first_witness(n, |a| {
            (0..n)
                .find(|&y| !self.leq(p(a, o(p(a, o(y)))), y))
                .map(|y| vec![a, y])
        });
        report.record("galois-inequality", w.map(|w| lab(&w)));

        let w = first_witness(n, |a| {
            (0..n)
                .find(|&y| (p(a, y) == self.bottom()) != self.leq(y, o(a)))
                .map(|y| vec![a, y])
        });
        report.record("kernel", w.map(|w| lab(&w)));

        let w = first_witness(n, |a| {
            (0..n).find_map(|y| {
                (0..n)
                    .find(|&z| self.ortho_pair(p(a, y), z) != self.ortho_pair(y, p(a, z)))
                    .map(|z| vec![a, y, z])
            })
        });
        report.record("self-adjoint", w.map(|w| lab(&w)));
        report
    }
}

/// Checks involution, antitonicity, `x ∧ x⊥ = 0` and the orthomodular law
/// `x ≤ y ⇒ y = x ∨ (x⊥ ∧ y)`. Each violated axiom carries its
/// lexicographically smallest witness.
pub fn check_oml(lattice: &FiniteLattice, ortho: &[usize]) -> CheckReport {
    let n = lattice.len();
    let mut report = CheckReport::new("oml");
    if ortho.len() != n || ortho.iter().any(|&v| v >= n) {
        report.push("ortho-total", vec![]);
        return report;
    }
    let lab = |xs: &[usize]| xs.iter().map(|&x| lattice.label(x).to_string()).collect();

    let w = (0..n).find(|&x| ortho[ortho[x]] != x);
    report.record("involution", w.map(|x| lab(&[x])));

    let w = first_witness(n, |x| {
        lattice
            .up_set(x)
            .ones()
            .find(|&y| !lattice.leq(ortho[y], ortho[x]))
            .map(|y| vec![x, y])
    });
    report.record("antitone", w.map(|w| lab(&w)));

    let w = (0..n).find(|&x| lattice.meet(x, ortho[x]) != lattice.bottom());
    report.record("complement", w.map(|x| lab(&[x])));

    let w = first_witness(n, |x| {
        lattice
            .up_set(x)
            .ones()
            .find(|&y| lattice.join(x, lattice.meet(ortho[x], y)) != y)
            .map(|y| vec![x, y])
    });
    report.record("orthomodular", w.map(|w| lab(&w)));
    report
}

/// The principal down-set `↓a` with relative orthocomplement `y ↦ a ∧ y⊥`.
#[derive(Clone, Debug)]
pub struct SubOml {
    parent: Arc<FiniteOml>,
    generator: usize,
    elements: Vec<usize>,
    position: Vec<Option<usize>>,
    oml: Arc<FiniteOml>,
}

pub fn downset_oml(parent: &Arc<FiniteOml>, a: usize) -> SubOml {
    let elements: Vec<usize> = parent.down_set(a).ones().collect();
    let mut position = vec![None; parent.len()];
    for (i, &x) in elements.iter().enumerate() {
        position[x] = Some(i);
    }
    let m = elements.len();
    let labels = elements.iter().map(|&x| parent.label(x).to_string()).collect();
    let rel = elements
        .iter()
        .map(|&x| {
            let mut row = FixedBitSet::with_capacity(m);
            for (j, &y) in elements.iter().enumerate() {
                if parent.leq(x, y) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    // An interval of a lattice is a lattice, so this cannot fail.
    let lattice = FiniteLattice::from_relation(labels, rel).expect("down-set is a lattice");
    let ortho = elements
        .iter()
        .map(|&y| position[parent.meet(a, parent.ortho(y))].expect("a ∧ y⊥ lies below a"))
        .collect();
    let oml = FiniteOml::new(lattice, ortho).expect("relative orthocomplement is total");
    SubOml {
        parent: Arc::clone(parent),
        generator: a,
        elements,
        position,
        oml: Arc::new(oml),
    }
}

impl SubOml {
    pub fn parent(&self) -> &Arc<FiniteOml> {
        &self.parent
    }

    pub fn generator(&self) -> usize {
        self.generator
    }

    /// Parent indices of the members of `↓a`, ascending.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Index inside the sub-lattice of a parent element, if it lies below `a`.
    pub fn position(&self, parent_index: usize) -> Option<usize> {
        self.position[parent_index]
    }

    pub fn oml(&self) -> &Arc<FiniteOml> {
        &self.oml
    }
}
