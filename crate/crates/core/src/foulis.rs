//! Foulis quantales, their lattice of Sasaki projections `[Q]`, the action of
//! `Q` on `[Q]`, and the canonical homomorphism `h: Q → Lin([Q])`.
//!
//! `sai` is the endomap `[-]`; `perp(t) = [t*]`. Double complements are always
//! evaluated as two applications of `perp`, never simplified, since
//! `k⊥⊥ = k` is one of the properties under test.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, FiniteOml};
use crate::linmap::LinMap;
use crate::quantale::{lin_quantale, FinQuantale, LinQuantale};
use crate::report::CheckReport;
use crate::scan::first_witness;

/// Subsets of `[Q]` up to this size are checked against the join formula
/// exhaustively; larger carriers use binary and empty joins.
const ALL_SUBSETS_LIMIT: usize = 16;

#[derive(Clone, Debug)]
pub struct FoulisQuantale {
    base: Arc<FinQuantale>,
    sai: Vec<usize>,
}

impl FoulisQuantale {
    pub fn new(base: Arc<FinQuantale>, sai: Vec<usize>) -> Result<Self> {
        if sai.len() != base.len() || sai.iter().any(|&v| v >= base.len()) {
            return Err(Error::InvalidInput("endomap table does not fit the quantale".into()));
        }
        Ok(FoulisQuantale { base, sai })
    }

    /// Uses [`derive_sai`] to obtain the endomap.
    pub fn derived(base: Arc<FinQuantale>) -> Result<Self> {
        let sai = derive_sai(&base)?;
        Ok(FoulisQuantale { base, sai })
    }

    pub fn base(&self) -> &Arc<FinQuantale> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    #[inline]
    pub fn sai(&self, s: usize) -> usize {
        self.sai[s]
    }

    pub fn sai_table(&self) -> &[usize] {
        &self.sai
    }

    /// `t⊥ = [t*]`
    #[inline]
    pub fn perp(&self, t: usize) -> usize {
        self.sai[self.base.star(t)]
    }

    pub fn with_sai_entry(&self, s: usize, value: usize) -> Self {
        let mut f = self.clone();
        f.sai[s] = value;
        f
    }

    fn labels(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.base.label(x).to_string()).collect()
    }

    /// `{x : s·x = 0}`
    fn annihilator(&self, s: usize) -> FixedBitSet {
        right_annihilator(&self.base, s)
    }

    /// `p·Q`
    fn right_ideal(&self, p: usize) -> FixedBitSet {
        right_ideal(&self.base, p)
    }
}

fn right_annihilator(q: &FinQuantale, s: usize) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(q.len());
    for x in 0..q.len() {
        if q.mult(s, x) == q.zero() {
            set.insert(x);
        }
    }
    set
}

fn right_ideal(q: &FinQuantale, p: usize) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(q.len());
    for y in 0..q.len() {
        set.insert(q.mult(p, y));
    }
    set
}

fn first_difference(a: &FixedBitSet, b: &FixedBitSet) -> Option<usize> {
    a.symmetric_difference(b).min()
}

/// For each `s`, the unique self-adjoint idempotent `p` with
/// `{x : s·x = 0} = p·Q`.
///
/// Two such `p, q` would satisfy `p = q·p` and `q = p·q`, hence `p = q`;
/// finding two is reported as [`Error::AmbiguousSai`] rather than resolved.
pub fn derive_sai(q: &FinQuantale) -> Result<Vec<usize>> {
    let n = q.len();
    let projections: Vec<usize> = (0..n)
        .filter(|&p| q.mult(p, p) == p && q.star(p) == p)
        .collect();
    let ideals: Vec<FixedBitSet> = projections
        .par_iter()
        .map(|&p| right_ideal(q, p))
        .collect();
    let found: Vec<Result<usize>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let ann = right_annihilator(q, s);
            let mut hits = projections
                .iter()
                .zip(&ideals)
                .filter(|(_, ideal)| **ideal == ann)
                .map(|(&p, _)| p);
            match (hits.next(), hits.next()) {
                (Some(p), None) => Ok(p),
                (None, _) => Err(Error::NotFoulis(q.label(s).to_string())),
                (Some(p), Some(r)) => Err(Error::AmbiguousSai {
                    s: q.label(s).to_string(),
                    p: q.label(p).to_string(),
                    q: q.label(r).to_string(),
                }),
            }
        })
        .collect();
    found.into_iter().collect()
}

/// `Lin(X)` with `[s] = π_{s*(1)⊥}`.
#[derive(Clone, Debug)]
pub struct LinFoulis {
    pub foulis: FoulisQuantale,
    pub lin: LinQuantale,
}

pub fn foulis_from_lin(x: &Arc<FiniteOml>, cap: usize) -> Result<LinFoulis> {
    let lin = lin_quantale(x, cap)?;
    let view = &lin.view;
    let sai = view
        .maps()
        .iter()
        .map(|s| {
            let k = x.ortho(s.dagger().apply(x.top()));
            view.index_of(&LinMap::sasaki(x, k))
                .expect("Sasaki projections are linear")
        })
        .collect();
    let foulis = FoulisQuantale::new(Arc::clone(&lin.quantale), sai)?;
    Ok(LinFoulis { foulis, lin })
}

impl LinFoulis {
    /// Quantale index of `π_a`.
    pub fn projection(&self, a: usize) -> usize {
        let x = self.lin.base();
        self.lin
            .view
            .index_of(&LinMap::sasaki(x, a))
            .expect("Sasaki projections are linear")
    }

    /// Agreement of the closed-form endomap with [`derive_sai`].
    pub fn check_derived_agreement(&self) -> CheckReport {
        let mut report = CheckReport::new("sai-derivation");
        match derive_sai(&self.lin.quantale) {
            Ok(derived) => {
                let w = (0..derived.len()).find(|&s| derived[s] != self.foulis.sai(s));
                report.record("closed-form=derived", w.map(|s| self.foulis.labels(&[s])));
            }
            Err(e) => report.push("derivable", vec![e.to_string()]),
        }
        report
    }
}

/// Axioms (a)–(c) and the equivalent formulation through `⊥`:
/// `s⊥` is a self-adjoint idempotent, `e⊥ = 0`, and `s ⊥ x` (that is,
/// `s*·x = 0`) holds exactly when `x ∈ s⊥·Q`.
pub fn check_foulis(f: &FoulisQuantale) -> CheckReport {
    let q = &f.base;
    let n = q.len();
    let mut report = CheckReport::new("foulis");

    let w = (0..n).find(|&s| q.mult(f.sai(s), f.sai(s)) != f.sai(s));
    report.record("sai-idempotent", w.map(|s| f.labels(&[s])));
    let w = (0..n).find(|&s| q.star(f.sai(s)) != f.sai(s));
    report.record("sai-self-adjoint", w.map(|s| f.labels(&[s])));
    if f.sai(q.unit()) != q.zero() {
        report.push("sai-unit", f.labels(&[q.unit()]));
    }
    let w = first_witness(n, |s| {
        first_difference(&f.annihilator(s), &f.right_ideal(f.sai(s))).map(|x| vec![s, x])
    });
    report.record("annihilator", w.map(|w| f.labels(&w)));

    let w = (0..n).find(|&s| {
        let p = f.perp(s);
        q.mult(p, p) != p || q.star(p) != p
    });
    report.record("perp-projection", w.map(|s| f.labels(&[s])));
    if f.perp(q.unit()) != q.zero() {
        report.push("perp-unit", f.labels(&[q.unit()]));
    }
    let w = first_witness(n, |s| {
        let mut orth = FixedBitSet::with_capacity(n);
        for x in 0..n {
            if q.perp_by_star(s, x) {
                orth.insert(x);
            }
        }
        first_difference(&orth, &f.right_ideal(f.perp(s))).map(|x| vec![s, x])
    });
    report.record("perp-annihilator", w.map(|w| f.labels(&w)));
    report
}

/// Properties (*), (**) and (***) of the multiplicative order
/// `s ≤ t ⇔ s = t·s`:
///
/// * `r*·t = 0 ⇔ t = [r*]·t`
/// * `t ≤ r ⇒ r⊥ ≤ t⊥`, and `k⊥⊥ = k` on `[Q]`
/// * `t ≤ r⊥ ⇔ r ≤ t⊥`
pub fn check_star_props(f: &FoulisQuantale) -> CheckReport {
    let q = &f.base;
    let n = q.len();
    let mut report = CheckReport::new("star-props");
    let w = first_witness(n, |t| {
        (0..n)
            .find(|&r| {
                let rs = q.star(r);
                (q.mult(rs, t) == q.zero()) != (t == q.mult(f.sai(rs), t))
            })
            .map(|r| vec![t, r])
    });
    report.record("annihilator-projection", w.map(|w| f.labels(&w)));
    let w = first_witness(n, |t| {
        (0..n)
            .find(|&r| q.leq_by_mult(t, r) && !q.leq_by_mult(f.perp(r), f.perp(t)))
            .map(|r| vec![t, r])
    });
    report.record("perp-antitone", w.map(|w| f.labels(&w)));
    let w = (0..n)
        .map(|s| f.sai(s))
        .filter(|&k| f.perp(f.perp(k)) != k)
        .min();
    report.record("double-perp", w.map(|k| f.labels(&[k])));
    let w = first_witness(n, |t| {
        (0..n)
            .find(|&r| q.leq_by_mult(t, f.perp(r)) != q.leq_by_mult(r, f.perp(t)))
            .map(|r| vec![t, r])
    });
    report.record("perp-galois", w.map(|w| f.labels(&w)));
    report
}

/// `[Q] = {[t] : t ∈ Q}` with the lattice structure induced by
/// `k₁ ≤ k₂ ⇔ k₁ = k₂·k₁` and orthocomplement `k ↦ [k]`.
#[derive(Clone, Debug)]
pub struct SasakiOml {
    carrier: Vec<usize>,
    position: Vec<Option<usize>>,
    oml: Arc<FiniteOml>,
}

fn violation(formula: &str, witness: String) -> Error {
    Error::StructureViolation {
        formula: formula.to_string(),
        witness,
    }
}

pub fn sasaki_oml(f: &FoulisQuantale) -> Result<SasakiOml> {
    let q = &f.base;
    let mut carrier: Vec<usize> = f.sai.clone();
    carrier.sort_unstable();
    carrier.dedup();
    let m = carrier.len();
    let mut position = vec![None; q.len()];
    for (i, &k) in carrier.iter().enumerate() {
        position[k] = Some(i);
    }
    let leq = |a: usize, b: usize| carrier[a] == q.mult(carrier[b], carrier[a]);
    let rel: Vec<FixedBitSet> = (0..m)
        .map(|i| {
            let mut row = FixedBitSet::with_capacity(m);
            for j in 0..m {
                if leq(i, j) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    if let Some(i) = (0..m).find(|&i| !rel[i].contains(i)) {
        return Err(violation("k = k·k", q.label(carrier[i]).to_string()));
    }
    for i in 0..m {
        for j in rel[i].ones() {
            if let Some(k) = rel[j].ones().find(|&k| !rel[i].contains(k)) {
                return Err(violation(
                    "transitivity of k₁ = k₂·k₁",
                    format!(
                        "{} ≤ {} ≤ {}",
                        q.label(carrier[i]),
                        q.label(carrier[j]),
                        q.label(carrier[k])
                    ),
                ));
            }
        }
    }
    let labels = carrier.iter().map(|&k| q.label(k).to_string()).collect();
    let lattice = FiniteLattice::from_relation(labels, rel).map_err(|e| match e {
        Error::NotAPoset { a, b } => violation("antisymmetry of k₁ = k₂·k₁", format!("{a}, {b}")),
        Error::NotALattice { a, b, kind } => violation("lattice order", format!("{a}, {b} lack a {kind}")),
        other => other,
    })?;
    let top = position[f.sai(q.zero())].expect("[0] lies in [Q]");
    if lattice.top() != top {
        return Err(violation("top = [0]", q.label(carrier[top]).to_string()));
    }
    let ortho = carrier
        .iter()
        .map(|&k| position[f.sai(k)].expect("[k] lies in [Q]"))
        .collect();
    let oml = FiniteOml::new(lattice, ortho)?;
    let report = oml.check();
    if let Some(v) = report.violations.first() {
        return Err(violation(&format!("orthomodular lattice: {}", v.axiom), v.witness.join(", ")));
    }
    let s = SasakiOml {
        carrier,
        position,
        oml: Arc::new(oml),
    };
    let report = s.check_structure(f);
    if let Some(v) = report.violations.first() {
        return Err(violation(&v.axiom, v.witness.join(", ")));
    }
    Ok(s)
}

impl SasakiOml {
    /// Quantale indices of the members of `[Q]`, ascending.
    pub fn carrier(&self) -> &[usize] {
        &self.carrier
    }

    pub fn position(&self, quantale_index: usize) -> Option<usize> {
        self.position[quantale_index]
    }

    pub fn oml(&self) -> &Arc<FiniteOml> {
        &self.oml
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// Compares the explicit formulas for meet, join and double complement
    /// with the glb, lub and complement of the order relation.
    pub fn check_structure(&self, f: &FoulisQuantale) -> CheckReport {
        let q = &f.base;
        let m = self.len();
        let c = &self.carrier;
        let oml = &self.oml;
        let mut report = CheckReport::new("sasaki-structure");
        let lab = |xs: &[usize]| -> Vec<String> { xs.iter().map(|&i| oml.label(i).to_string()).collect() };

        let w = first_witness(m, |i| {
            (0..m)
                .find(|&j| {
                    let (k1, k2) = (c[i], c[j]);
                    let inner = f.sai(q.mult(f.sai(k2), k1));
                    let formula = f.perp(f.perp(q.mult(k1, inner)));
                    formula != c[oml.meet(i, j)]
                })
                .map(|j| vec![i, j])
        });
        report.record("meet-formula", w.map(|w| lab(&w)));

        let join_formula = |members: &[usize]| {
            let qjoin = members.iter().fold(q.zero(), |acc, &i| q.join(acc, c[i]));
            f.sai(f.sai(qjoin))
        };
        let w = if m <= ALL_SUBSETS_LIMIT {
            (0u32..1 << m).find_map(|mask| {
                let members: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
                (join_formula(&members) != c[oml.join_set(members.iter().copied())]).then_some(members)
            })
        } else if join_formula(&[]) != c[oml.bottom()] {
            Some(vec![])
        } else {
            first_witness(m, |i| {
                (0..m)
                    .find(|&j| join_formula(&[i, j]) != c[oml.join(i, j)])
                    .map(|j| vec![i, j])
            })
        };
        report.record("join-formula", w.map(|w| lab(&w)));

        let w = (0..m).find(|&i| f.perp(f.perp(c[i])) != c[i]);
        report.record("double-perp", w.map(|i| lab(&[i])));
        report
    }
}

/// `u•k = (u·k)⊥⊥` for `k ∈ [Q]`.
#[inline]
pub fn module_action(f: &FoulisQuantale, u: usize, k: usize) -> usize {
    f.perp(f.perp(f.base.mult(u, k)))
}

/// `σ_u: [Q] → [Q]`, `k ↦ u•k`, as a linear map on the Sasaki lattice.
pub fn sasaki_action(f: &FoulisQuantale, s: &SasakiOml, u: usize) -> Result<LinMap> {
    let values = s
        .carrier
        .iter()
        .map(|&k| {
            let v = module_action(f, u, k);
            s.position(v).ok_or_else(|| {
                violation(
                    "u•k ∈ [Q]",
                    format!("{}, {}", f.base.label(u), f.base.label(k)),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    LinMap::new(Arc::clone(&s.oml), Arc::clone(&s.oml), values)
}

/// `h: Q → Lin([Q])`, `u ↦ σ_u`.
#[derive(Clone, Debug)]
pub struct FoulisHom {
    pub source: FoulisQuantale,
    pub sasaki: SasakiOml,
    pub target: LinFoulis,
    pub table: Vec<usize>,
}

pub fn hom_h(f: &FoulisQuantale, cap: usize) -> Result<FoulisHom> {
    let sasaki = sasaki_oml(f)?;
    let target = foulis_from_lin(sasaki.oml(), cap)?;
    let table = (0..f.len())
        .map(|u| {
            let sigma = sasaki_action(f, &sasaki, u)?;
            Ok(target
                .lin
                .view
                .index_of(&sigma)
                .expect("σ_u is linear, so it was enumerated"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FoulisHom {
        source: f.clone(),
        sasaki,
        target,
        table,
    })
}

impl FoulisHom {
    pub fn apply(&self, u: usize) -> usize {
        self.table[u]
    }

    /// Preservation of binary and empty joins, multiplication, unit,
    /// involution and `⊥`.
    pub fn check(&self) -> CheckReport {
        let src = &self.source;
        let q = src.base();
        let tgt = &self.target.foulis;
        let t = tgt.base();
        let h = |u: usize| self.table[u];
        let n = q.len();
        let mut report = CheckReport::new("homomorphism");
        let lab = |xs: &[usize]| src.labels(xs);

        let w = first_witness(n, |u| {
            (0..n)
                .find(|&v| h(q.join(u, v)) != t.join(h(u), h(v)))
                .map(|v| vec![u, v])
        });
        report.record("joins", w.map(|w| lab(&w)));
        if h(q.zero()) != t.zero() {
            report.push("empty-join", lab(&[q.zero()]));
        }
        let w = first_witness(n, |u| {
            (0..n)
                .find(|&v| h(q.mult(u, v)) != t.mult(h(u), h(v)))
                .map(|v| vec![u, v])
        });
        report.record("multiplication", w.map(|w| lab(&w)));
        if h(q.unit()) != t.unit() {
            report.push("unit", lab(&[q.unit()]));
        }
        let w = (0..n).find(|&u| h(q.star(u)) != t.star(h(u)));
        report.record("involution", w.map(|u| lab(&[u])));
        let w = (0..n).find(|&u| h(src.perp(u)) != tgt.perp(h(u)));
        report.record("perp", w.map(|u| lab(&[u])));
        report
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.target.foulis.len());
        self.table.iter().all(|&v| {
            let fresh = !seen.contains(v);
            seen.insert(v);
            fresh
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.target.foulis.len());
        for &v in &self.table {
            seen.insert(v);
        }
        seen.count_ones(..) == self.target.foulis.len()
    }
}

/// Whether `a ↦ π_a` is an isomorphism of orthomodular lattices
/// `X → [Lin(X)]`.
pub fn roundtrip_iso(x: &Arc<FiniteOml>, cap: usize) -> Result<CheckReport> {
    let lf = foulis_from_lin(x, cap)?;
    let s = sasaki_oml(&lf.foulis)?;
    Ok(roundtrip_report(x, &lf, &s))
}

pub(crate) fn roundtrip_report(x: &FiniteOml, lf: &LinFoulis, s: &SasakiOml) -> CheckReport {
    let n = x.len();
    let mut report = CheckReport::new("roundtrip");
    let lab = |xs: &[usize]| -> Vec<String> { xs.iter().map(|&a| x.label(a).to_string()).collect() };
    let phi: Vec<Option<usize>> = (0..n).map(|a| s.position(lf.projection(a))).collect();
    if let Some(a) = (0..n).find(|&a| phi[a].is_none()) {
        report.push("into-[Q]", lab(&[a]));
        return report;
    }
    let phi: Vec<usize> = phi.into_iter().map(|p| p.expect("checked")).collect();
    let mut hit = FixedBitSet::with_capacity(s.len());
    let mut clash = None;
    for (a, &p) in phi.iter().enumerate() {
        if hit.contains(p) && clash.is_none() {
            clash = Some(a);
        }
        hit.insert(p);
    }
    report.record("injective", clash.map(|a| lab(&[a])));
    if hit.count_ones(..) != s.len() {
        let missing = (0..s.len()).find(|&i| !hit.contains(i)).expect("some slot missed");
        report.push("surjective", vec![s.oml().label(missing).to_string()]);
    }
    let o = s.oml();
    let w = (0..n).find_map(|a| {
        (0..n)
            .find(|&b| x.leq(a, b) != o.leq(phi[a], phi[b]))
            .map(|b| vec![a, b])
    });
    report.record("order", w.map(|w| lab(&w)));
    let w = (0..n).find(|&a| phi[x.ortho(a)] != o.ortho(phi[a]));
    report.record("ortho", w.map(|a| lab(&[a])));
    let w = (0..n).find_map(|a| {
        (0..n)
            .find(|&b| phi[x.meet(a, b)] != o.meet(phi[a], phi[b]))
            .map(|b| vec![a, b])
    });
    report.record("meet", w.map(|w| lab(&w)));
    let w = (0..n).find_map(|a| {
        (0..n)
            .find(|&b| phi[x.join(a, b)] != o.join(phi[a], phi[b]))
            .map(|b| vec![a, b])
    });
    report.record("join", w.map(|w| lab(&w)));
    report
}

/// For `Lin(X)` hosts, `[Lin(X)]` is `{π_a : a ∈ X}`; compares that shortcut
/// with the generic image of `[-]`.
pub fn check_projection_shortcut(lf: &LinFoulis, s: &SasakiOml) -> CheckReport {
    let x = lf.lin.base();
    let mut shortcut: Vec<usize> = (0..x.len()).map(|a| lf.projection(a)).collect();
    shortcut.sort_unstable();
    shortcut.dedup();
    let mut report = CheckReport::new("projection-shortcut");
    if shortcut != s.carrier() {
        let diff = shortcut
            .iter()
            .chain(s.carrier())
            .copied()
            .find(|k| shortcut.contains(k) != s.carrier().contains(k))
            .expect("sets differ");
        report.push("[Q]={π_a}", vec![lf.foulis.base().label(diff).to_string()]);
    }
    report
}
