//! Join-preserving maps between finite orthomodular lattices.
//!
//! A map is stored as its full value table. For finite lattices preserving
//! binary joins and the bottom is the same as preserving all joins, which is
//! the same as having an adjoint `h` with `f(x) ⊥ y ⇔ x ⊥ h(y)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{downset_oml, FiniteLattice, FiniteOml, SubOml};
use crate::report::CheckReport;
use crate::scan::first_witness;

#[derive(Clone)]
pub struct LinMap {
    dom: Arc<FiniteOml>,
    cod: Arc<FiniteOml>,
    values: Vec<usize>,
}

pub(crate) fn same_oml(a: &Arc<FiniteOml>, b: &Arc<FiniteOml>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for LinMap {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
            && same_oml(&self.dom, &other.dom)
            && same_oml(&self.cod, &other.cod)
    }
}

impl Eq for LinMap {}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinMap")
            .field("values", &self.value_labels())
            .finish()
    }
}

fn check_table(dom: &FiniteLattice, cod: &FiniteLattice, values: &[usize]) -> Result<()> {
    if values.len() != dom.len() {
        return Err(Error::DomainMismatch(format!(
            "table has {} entries for a domain of {} elements",
            values.len(),
            dom.len()
        )));
    }
    if let Some(&v) = values.iter().find(|&&v| v >= cod.len()) {
        return Err(Error::DomainMismatch(format!(
            "value index {v} outside a codomain of {} elements",
            cod.len()
        )));
    }
    Ok(())
}

/// First `(x, y)` with `f(x ∨ y) ≠ f(x) ∨ f(y)`; `(0, 0)` stands for
/// `f(0) ≠ 0`.
fn linearity_witness(
    dom: &FiniteLattice,
    cod: &FiniteLattice,
    values: &[usize],
) -> Option<(usize, usize)> {
    if values[dom.bottom()] != cod.bottom() {
        return Some((dom.bottom(), dom.bottom()));
    }
    let n = dom.len();
    (0..n).find_map(|x| {
        (x + 1..n)
            .find(|&y| values[dom.join(x, y)] != cod.join(values[x], values[y]))
            .map(|y| (x, y))
    })
}

/// Whether a raw table preserves the bottom and binary joins. The codomain
/// only needs to be a lattice here.
pub fn is_linear(dom: &FiniteLattice, cod: &FiniteLattice, values: &[usize]) -> Result<bool> {
    check_table(dom, cod, values)?;
    Ok(linearity_witness(dom, cod, values).is_none())
}

/// Checks `f(x) ⊥ y ⇔ x ⊥ h(y)` over all `(x, y)` for raw tables
/// `f: X → Y` and `h: Y → X`.
pub fn check_adjoint_tables(x: &FiniteOml, y: &FiniteOml, f: &[usize], h: &[usize]) -> Result<CheckReport> {
    check_table(x, y, f)?;
    check_table(y, x, h)?;
    let mut report = CheckReport::new("adjoint-pair");
    let w = first_witness(x.len(), |a| {
        (0..y.len())
            .find(|&b| y.ortho_pair(f[a], b) != x.ortho_pair(a, h[b]))
            .map(|b| vec![x.label(a).to_string(), y.label(b).to_string()])
    });
    report.record("adjunction", w);
    Ok(report)
}

impl LinMap {
    pub fn new(dom: Arc<FiniteOml>, cod: Arc<FiniteOml>, values: Vec<usize>) -> Result<Self> {
        check_table(&dom, &cod, &values)?;
        if let Some((x, y)) = linearity_witness(&dom, &cod, &values) {
            return Err(Error::NotLinear(format!(
                "f({} ∨ {}) ≠ f({}) ∨ f({})",
                dom.label(x),
                dom.label(y),
                dom.label(x),
                dom.label(y)
            )));
        }
        Ok(LinMap { dom, cod, values })
    }

    pub(crate) fn new_unchecked(dom: Arc<FiniteOml>, cod: Arc<FiniteOml>, values: Vec<usize>) -> Self {
        debug_assert_eq!(values.len(), dom.len());
        LinMap { dom, cod, values }
    }

    pub fn identity(x: &Arc<FiniteOml>) -> Self {
        LinMap::new_unchecked(Arc::clone(x), Arc::clone(x), (0..x.len()).collect())
    }

    /// `0_{X,Y}`: the map factoring through the one-element lattice.
    pub fn bottom_map(x: &Arc<FiniteOml>, y: &Arc<FiniteOml>) -> Self {
        LinMap::new_unchecked(Arc::clone(x), Arc::clone(y), vec![y.bottom(); x.len()])
    }

    pub fn sasaki(x: &Arc<FiniteOml>, a: usize) -> Self {
        LinMap::new_unchecked(Arc::clone(x), Arc::clone(x), x.sasaki_table(a))
    }

    pub fn dom(&self) -> &Arc<FiniteOml> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteOml> {
        &self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn into_values(self) -> Vec<usize> {
        self.values
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn value_labels(&self) -> Vec<&str> {
        self.values.iter().map(|&v| self.cod.label(v)).collect()
    }

    pub fn is_endo(&self) -> bool {
        same_oml(&self.dom, &self.cod)
    }

    /// `f†(t) = (⋁{s : f(s) ≤ t⊥})⊥`
    pub fn dagger(&self) -> LinMap {
        let (x, y) = (&self.dom, &self.cod);
        let values = (0..y.len())
            .map(|t| {
                let below = (0..x.len()).filter(|&s| y.leq(self.values[s], y.ortho(t)));
                x.ortho(x.join_set(below))
            })
            .collect();
        LinMap::new_unchecked(Arc::clone(y), Arc::clone(x), values)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_endo() && self.dagger().values == self.values
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_endo() && self.values.iter().all(|&v| self.values[v] == v)
    }

    /// `{f(x) : x ∈ X}` as ascending codomain indices.
    pub fn image(&self) -> Vec<usize> {
        let mut out = self.values.clone();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `{x : f(x) = 0}` as ascending domain indices.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.dom.len())
            .filter(|&x| self.values[x] == self.cod.bottom())
            .collect()
    }

    pub fn is_bottom(&self) -> bool {
        self.values.iter().all(|&v| v == self.cod.bottom())
    }

    pub fn is_identity(&self) -> bool {
        self.is_endo() && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Pointwise order.
    pub fn leq(&self, other: &LinMap) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(&a, &b)| self.cod.leq(a, b))
    }

    pub fn is_dagger_mono(&self) -> bool {
        compose(&self.dagger(), self)
            .map(|c| c.is_identity())
            .unwrap_or(false)
    }

    pub fn is_dagger_iso(&self) -> bool {
        self.is_dagger_mono()
            && compose(self, &self.dagger())
                .map(|c| c.is_identity())
                .unwrap_or(false)
    }
}

pub fn verify_adjoint_pair(f: &LinMap, h: &LinMap) -> Result<CheckReport> {
    if !same_oml(&f.dom, &h.cod) || !same_oml(&f.cod, &h.dom) {
        return Err(Error::DomainMismatch(
            "adjoint candidate must run in the opposite direction".into(),
        ));
    }
    check_adjoint_tables(&f.dom, &f.cod, &f.values, &h.values)
}

/// `g ∘ f`
pub fn compose(g: &LinMap, f: &LinMap) -> Result<LinMap> {
    if !same_oml(&f.cod, &g.dom) {
        return Err(Error::DomainMismatch("maps are not composable".into()));
    }
    Ok(LinMap::new_unchecked(
        Arc::clone(&f.dom),
        Arc::clone(&g.cod),
        f.values.iter().map(|&v| g.values[v]).collect(),
    ))
}

/// Pointwise join.
pub fn join_maps(f: &LinMap, g: &LinMap) -> Result<LinMap> {
    if !same_oml(&f.dom, &g.dom) || !same_oml(&f.cod, &g.cod) {
        return Err(Error::DomainMismatch("joined maps need equal domains".into()));
    }
    Ok(LinMap::new_unchecked(
        Arc::clone(&f.dom),
        Arc::clone(&f.cod),
        f.values
            .iter()
            .zip(&g.values)
            .map(|(&a, &b)| f.cod.join(a, b))
            .collect(),
    ))
}

/// Meet in the complete lattice `Lin(X, Y)`: the join of every member of
/// `universe` lying pointwise below both maps. The pointwise meet of two
/// linear maps is in general not linear, so it is never used.
pub fn meet_maps(f: &LinMap, g: &LinMap, universe: &[LinMap]) -> Result<LinMap> {
    let mut acc = LinMap::bottom_map(&f.dom, &f.cod);
    for m in universe.iter().filter(|m| m.leq(f) && m.leq(g)) {
        acc = join_maps(&acc, m)?;
    }
    Ok(acc)
}

/// The factorization `X → ↓a → X` of the Sasaki projection `π_a`.
#[derive(Clone, Debug)]
pub struct SasakiFactorization {
    pub sub: SubOml,
    /// `X → ↓a`, `x ↦ π_a(x)`
    pub coembed: LinMap,
    /// `↓a → X`, the inclusion
    pub embed: LinMap,
}

pub fn factorize_sasaki(x: &Arc<FiniteOml>, a: usize) -> SasakiFactorization {
    let sub = downset_oml(x, a);
    let down = Arc::clone(sub.oml());
    let embed = LinMap::new_unchecked(Arc::clone(&down), Arc::clone(x), sub.elements().to_vec());
    let coembed = LinMap::new_unchecked(
        Arc::clone(x),
        down,
        (0..x.len())
            .map(|y| sub.position(x.sasaki(a, y)).expect("π_a lands in ↓a"))
            .collect(),
    );
    SasakiFactorization {
        sub,
        coembed,
        embed,
    }
}

impl SasakiFactorization {
    pub fn check(&self) -> CheckReport {
        let x = self.sub.parent();
        let a = self.sub.generator();
        let mut report = CheckReport::new("sasaki-factorization");
        let label = vec![x.label(a).to_string()];
        let composite = compose(&self.embed, &self.coembed).expect("composable");
        if composite != LinMap::sasaki(x, a) {
            report.push("embed∘coembed=π_a", label.clone());
        }
        if !compose(&self.coembed, &self.embed)
            .expect("composable")
            .is_identity()
        {
            report.push("coembed∘embed=id", label.clone());
        }
        if self.embed.dagger() != self.coembed {
            report.push("coembed=embed†", label.clone());
        }
        if !self.embed.is_dagger_mono() {
            report.push("embed-dagger-mono", label);
        }
        report
    }
}

/// Dagger kernel `↓k → X` of a linear map, `k = f†(1)⊥`.
#[derive(Clone, Debug)]
pub struct KernelData {
    pub k: usize,
    pub sub: SubOml,
    pub embed: LinMap,
    pub coembed: LinMap,
}

pub fn kernel(f: &LinMap) -> KernelData {
    let x = &f.dom;
    let k = x.ortho(f.dagger().apply(f.cod.top()));
    let SasakiFactorization {
        sub,
        coembed,
        embed,
    } = factorize_sasaki(x, k);
    KernelData {
        k,
        sub,
        embed,
        coembed,
    }
}

impl KernelData {
    /// The kernel identities for `f`: `{x : f(x) = 0} = ↓k`,
    /// `f ∘ embed = 0`, `embed ∘ coembed = π_k`, `coembed ∘ embed = id`.
    pub fn check(&self, f: &LinMap) -> CheckReport {
        let x = &f.dom;
        let mut report = CheckReport::new("dagger-kernel");
        let label = vec![x.label(self.k).to_string()];
        if f.zero_set() != self.sub.elements() {
            report.push("zero-set=↓k", label.clone());
        }
        let fe = compose(f, &self.embed).expect("composable");
        if !fe.is_bottom() {
            report.push("f∘embed=0", label.clone());
        }
        if compose(&self.embed, &self.coembed).expect("composable") != LinMap::sasaki(x, self.k) {
            report.push("embed∘coembed=π_k", label.clone());
        }
        if !compose(&self.coembed, &self.embed)
            .expect("composable")
            .is_identity()
        {
            report.push("coembed∘embed=id", label);
        }
        report
    }

    /// Weak dagger kernel property: every `m` with `f ∘ m = 0` satisfies
    /// `embed ∘ coembed ∘ m = m`. Returns the index of the first failing `m`.
    pub fn weak_kernel_failure(&self, f: &LinMap, ms: &[LinMap]) -> Result<Option<usize>> {
        let proj = compose(&self.embed, &self.coembed)?;
        for (i, m) in ms.iter().enumerate() {
            if compose(f, m)?.is_bottom() && compose(&proj, m)? != *m {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}
