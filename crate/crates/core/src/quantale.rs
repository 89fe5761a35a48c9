//! Finite unital involutive quantales.
//!
//! A [`FinQuantale`] is a carrier lattice (the order `⊑`) with a
//! multiplication table, an involution and a unit. The multiplicatively
//! defined relations `s ≤ t ⇔ s = t·s` and `s ⊥ t ⇔ 0 = s*·t` are exposed as
//! [`FinQuantale::leq_by_mult`] and [`FinQuantale::perp_by_star`]; they are
//! different from the carrier order and are only meaningful on projections.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;

use crate::enumerate::enumerate_lin;
use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, FiniteOml};
use crate::linmap::{compose, LinMap};
use crate::report::CheckReport;
use crate::scan::first_witness;

/// Lin(X)-backed quantales up to this size get a materialized table.
pub const EAGER_TABLE_LIMIT: usize = 2048;

#[derive(Clone, Debug)]
enum MultTable {
    Dense(Vec<usize>),
    Lazy(Arc<LazyComposition>),
}

/// Composition computed on demand. Concurrent fills of one cell may both
/// compute it, but they produce the same value and only the first insert is
/// kept.
#[derive(Debug)]
struct LazyComposition {
    view: Arc<QElementView>,
    memo: Mutex<HashMap<(usize, usize), usize>>,
}

impl LazyComposition {
    fn get(&self, g: usize, f: usize) -> usize {
        if let Some(&v) = self.memo.lock().expect("memo lock").get(&(g, f)) {
            return v;
        }
        let v = self.view.compose_index(g, f);
        *self
            .memo
            .lock()
            .expect("memo lock")
            .entry((g, f))
            .or_insert(v)
    }
}

#[derive(Clone, Debug)]
pub struct FinQuantale {
    carrier: FiniteLattice,
    mult: MultTable,
    star: Vec<usize>,
    unit: usize,
}

impl FinQuantale {
    /// `mult` is row-major: entry `x * n + y` holds `x·y`.
    pub fn new(carrier: FiniteLattice, mult: Vec<usize>, star: Vec<usize>, unit: usize) -> Result<Self> {
        let n = carrier.len();
        if mult.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "multiplication table has {} entries, expected {}",
                mult.len(),
                n * n
            )));
        }
        if star.len() != n {
            return Err(Error::InvalidInput("involution table has wrong length".into()));
        }
        if unit >= n || mult.iter().chain(&star).any(|&v| v >= n) {
            return Err(Error::InvalidInput("table entry out of range".into()));
        }
        Ok(FinQuantale {
            carrier,
            mult: MultTable::Dense(mult),
            star,
            unit,
        })
    }

    /// The two-element chain with meet as multiplication, identity involution
    /// and the top as unit.
    pub fn two() -> Self {
        let carrier = crate::lattice::build_lattice(&["0", "1"], &[("0", "1")]).expect("chain");
        FinQuantale::new(carrier, vec![0, 0, 0, 1], vec![0, 1], 1).expect("valid tables")
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn carrier(&self) -> &FiniteLattice {
        &self.carrier
    }

    pub fn label(&self, x: usize) -> &str {
        self.carrier.label(x)
    }

    #[inline]
    pub fn mult(&self, x: usize, y: usize) -> usize {
        match &self.mult {
            MultTable::Dense(t) => t[x * self.len() + y],
            MultTable::Lazy(l) => l.get(x, y),
        }
    }

    #[inline]
    pub fn star(&self, x: usize) -> usize {
        self.star[x]
    }

    pub fn star_table(&self) -> &[usize] {
        &self.star
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    /// `0 = ⊔∅`
    pub fn zero(&self) -> usize {
        self.carrier.bottom()
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.carrier.join(x, y)
    }

    /// The carrier order `⊑`.
    pub fn carrier_leq(&self, x: usize, y: usize) -> bool {
        self.carrier.leq(x, y)
    }

    /// `s ≤ t ⇔ s = t·s`
    pub fn leq_by_mult(&self, s: usize, t: usize) -> bool {
        s == self.mult(t, s)
    }

    /// `s ⊥ t ⇔ 0 = s*·t`
    pub fn perp_by_star(&self, s: usize, t: usize) -> bool {
        self.mult(self.star(s), t) == self.zero()
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.mult, MultTable::Lazy(_))
    }

    /// Row-major multiplication table, materialized if necessary.
    pub fn mult_table(&self) -> Vec<usize> {
        match &self.mult {
            MultTable::Dense(t) => t.clone(),
            MultTable::Lazy(_) => {
                let n = self.len();
                (0..n * n).map(|i| self.mult(i / n, i % n)).collect()
            }
        }
    }

    /// A copy with one multiplication entry replaced.
    pub fn with_mult_entry(&self, x: usize, y: usize, value: usize) -> Self {
        let mut table = self.mult_table();
        table[x * self.len() + y] = value;
        FinQuantale {
            mult: MultTable::Dense(table),
            ..self.clone()
        }
    }

    /// A copy with one involution entry replaced.
    pub fn with_star_entry(&self, x: usize, value: usize) -> Self {
        let mut q = self.clone();
        q.star[x] = value;
        q
    }

    fn labels(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.label(x).to_string()).collect()
    }
}

/// Associativity, two-sided distributivity over binary joins, annihilation by
/// `0` (the empty join) and the unit laws.
pub fn check_quantale(q: &FinQuantale) -> CheckReport {
    let n = q.len();
    let mut report = CheckReport::new("quantale");
    let triple = |p: &(dyn Fn(usize, usize, usize) -> bool + Sync)| {
        first_witness(n, |x| {
            (0..n).find_map(|y| (0..n).find(|&z| !p(x, y, z)).map(|z| vec![x, y, z]))
        })
    };
    let single = |p: &dyn Fn(usize) -> bool| (0..n).find(|&x| !p(x)).map(|x| vec![x]);

    let w = triple(&|x, y, z| q.mult(q.mult(x, y), z) == q.mult(x, q.mult(y, z)));
    report.record("associativity", w.map(|w| q.labels(&w)));
    let w = triple(&|x, y, z| q.mult(x, q.join(y, z)) == q.join(q.mult(x, y), q.mult(x, z)));
    report.record("left-distributivity", w.map(|w| q.labels(&w)));
    let w = triple(&|x, y, z| q.mult(q.join(y, z), x) == q.join(q.mult(y, x), q.mult(z, x)));
    report.record("right-distributivity", w.map(|w| q.labels(&w)));
    let zero = q.zero();
    let w = single(&|x| q.mult(x, zero) == zero && q.mult(zero, x) == zero);
    report.record("zero-annihilation", w.map(|w| q.labels(&w)));
    let e = q.unit();
    let w = single(&|x| q.mult(e, x) == x && q.mult(x, e) == x);
    report.record("unit", w.map(|w| q.labels(&w)));
    report
}

/// Involution, `(a·b)* = b*·a*`, preservation of binary and empty joins, and
/// `e* = e`.
pub fn check_involutive(q: &FinQuantale) -> CheckReport {
    let n = q.len();
    let mut report = CheckReport::new("involutive");
    let w = (0..n).find(|&x| q.star(q.star(x)) != x);
    report.record("involution", w.map(|x| q.labels(&[x])));
    let w = first_witness(n, |x| {
        (0..n)
            .find(|&y| q.star(q.mult(x, y)) != q.mult(q.star(y), q.star(x)))
            .map(|y| vec![x, y])
    });
    report.record("anti-homomorphism", w.map(|w| q.labels(&w)));
    let w = first_witness(n, |x| {
        (0..n)
            .find(|&y| q.star(q.join(x, y)) != q.join(q.star(x), q.star(y)))
            .map(|y| vec![x, y])
    });
    report.record("join-preservation", w.map(|w| q.labels(&w)));
    if q.star(q.zero()) != q.zero() {
        report.push("zero-preservation", q.labels(&[q.zero()]));
    }
    if q.star(q.unit()) != q.unit() {
        report.push("unit-self-adjoint", q.labels(&[q.unit()]));
    }
    report
}

/// Bijection between quantale indices and the linear maps they stand for.
#[derive(Debug)]
pub struct QElementView {
    base: Arc<FiniteOml>,
    maps: Vec<LinMap>,
    index: HashMap<Vec<usize>, usize>,
}

impl QElementView {
    fn new(base: Arc<FiniteOml>, maps: Vec<LinMap>) -> Self {
        let index = maps
            .iter()
            .enumerate()
            .map(|(i, m)| (m.values().to_vec(), i))
            .collect();
        QElementView { base, maps, index }
    }

    pub fn base(&self) -> &Arc<FiniteOml> {
        &self.base
    }

    pub fn maps(&self) -> &[LinMap] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &LinMap {
        &self.maps[i]
    }

    pub fn index_of_values(&self, values: &[usize]) -> Option<usize> {
        self.index.get(values).copied()
    }

    pub fn index_of(&self, f: &LinMap) -> Option<usize> {
        self.index_of_values(f.values())
    }

    fn compose_index(&self, g: usize, f: usize) -> usize {
        let c = compose(&self.maps[g], &self.maps[f]).expect("endomaps compose");
        self.index[c.values()]
    }

    /// Label used for the map in quantale files: its values, e.g. `<0,a,0,a>`.
    pub fn map_label(&self, f: &LinMap) -> String {
        format!("<{}>", f.value_labels().join(","))
    }
}

/// `Lin(X)` with its quantale structure and the map view of its elements.
#[derive(Clone, Debug)]
pub struct LinQuantale {
    pub quantale: Arc<FinQuantale>,
    pub view: Arc<QElementView>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMode {
    Auto,
    Dense,
    Lazy,
}

pub fn lin_quantale(x: &Arc<FiniteOml>, cap: usize) -> Result<LinQuantale> {
    lin_quantale_with(x, cap, TableMode::Auto)
}

pub fn lin_quantale_with(x: &Arc<FiniteOml>, cap: usize, mode: TableMode) -> Result<LinQuantale> {
    let maps = enumerate_lin(x, x, cap)?;
    let view = Arc::new(QElementView::new(Arc::clone(x), maps));
    let n = view.maps.len();
    let labels: Vec<String> = view.maps.iter().map(|f| view.map_label(f)).collect();
    let rel = view
        .maps
        .iter()
        .map(|f| {
            let mut row = FixedBitSet::with_capacity(n);
            for (j, g) in view.maps.iter().enumerate() {
                if f.leq(g) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let carrier = FiniteLattice::from_relation(labels, rel)?;
    let star = view
        .maps
        .iter()
        .map(|f| view.index[f.dagger().values()])
        .collect();
    let unit = view.index[LinMap::identity(x).values()];
    let lazy = match mode {
        TableMode::Auto => n > EAGER_TABLE_LIMIT,
        TableMode::Dense => false,
        TableMode::Lazy => true,
    };
    let mult = if lazy {
        MultTable::Lazy(Arc::new(LazyComposition {
            view: Arc::clone(&view),
            memo: Mutex::new(HashMap::new()),
        }))
    } else {
        use rayon::prelude::*;
        MultTable::Dense(
            (0..n * n)
                .into_par_iter()
                .map(|i| view.compose_index(i / n, i % n))
                .collect(),
        )
    };
    let quantale = FinQuantale {
        carrier,
        mult,
        star,
        unit,
    };
    Ok(LinQuantale {
        quantale: Arc::new(quantale),
        view,
    })
}

impl LinQuantale {
    pub fn base(&self) -> &Arc<FiniteOml> {
        self.view.base()
    }

    /// Coherence between the tables and the maps they encode: the carrier
    /// order and join are pointwise, multiplication is composition, the
    /// involution is the dagger, the unit is the identity and the zero is the
    /// bottom map.
    pub fn check_view(&self) -> CheckReport {
        let q = &self.quantale;
        let v = &self.view;
        let n = q.len();
        let x = v.base();
        let mut report = CheckReport::new("lin-view");
        let w = first_witness(n, |i| {
            (0..n)
                .find(|&j| {
                    let pointwise: Vec<usize> = (0..x.len())
                        .map(|e| x.join(v.map(i).apply(e), v.map(j).apply(e)))
                        .collect();
                    v.map(q.join(i, j)).values() != pointwise.as_slice()
                        || q.carrier_leq(i, j) != v.map(i).leq(v.map(j))
                })
                .map(|j| vec![i, j])
        });
        report.record("pointwise-join", w.map(|w| q.labels(&w)));
        let w = first_witness(n, |i| {
            (0..n)
                .find(|&j| {
                    compose(v.map(i), v.map(j)).expect("endomaps").values()
                        != v.map(q.mult(i, j)).values()
                })
                .map(|j| vec![i, j])
        });
        report.record("mult-is-composition", w.map(|w| q.labels(&w)));
        let w = (0..n).find(|&i| v.map(i).dagger() != *v.map(q.star(i)));
        report.record("star-is-dagger", w.map(|i| q.labels(&[i])));
        if !v.map(q.unit()).is_identity() {
            report.push("unit-is-identity", q.labels(&[q.unit()]));
        }
        if !v.map(q.zero()).is_bottom() {
            report.push("zero-is-bottom-map", q.labels(&[q.zero()]));
        }
        report
    }
}
