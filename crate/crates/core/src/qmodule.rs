//! Left `Q`-modules over finite lattices, given by an action table.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::foulis::{module_action, sasaki_oml, FoulisQuantale, SasakiOml};
use crate::lattice::{FiniteLattice, FiniteOml};
use crate::quantale::{lin_quantale, FinQuantale, LinQuantale};
use crate::report::CheckReport;
use crate::scan::first_witness;

#[derive(Clone, Debug)]
pub struct ModuleAction {
    quantale: Arc<FinQuantale>,
    lattice: FiniteLattice,
    /// Row `u` holds `u • a` for every `a`.
    act: Vec<usize>,
}

impl ModuleAction {
    pub fn new(quantale: Arc<FinQuantale>, lattice: FiniteLattice, act: Vec<usize>) -> Result<Self> {
        if act.len() != quantale.len() * lattice.len() {
            return Err(Error::InvalidInput(format!(
                "action table has {} entries, expected {}",
                act.len(),
                quantale.len() * lattice.len()
            )));
        }
        if act.iter().any(|&v| v >= lattice.len()) {
            return Err(Error::InvalidInput("action entry out of range".into()));
        }
        Ok(ModuleAction { quantale, lattice, act })
    }

    pub fn quantale(&self) -> &Arc<FinQuantale> {
        &self.quantale
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    #[inline]
    pub fn act(&self, u: usize, a: usize) -> usize {
        self.act[u * self.lattice.len() + a]
    }

    pub fn row(&self, u: usize) -> &[usize] {
        let m = self.lattice.len();
        &self.act[u * m..(u + 1) * m]
    }

    pub fn with_entry(&self, u: usize, a: usize, value: usize) -> Self {
        let mut out = self.clone();
        let m = out.lattice.len();
        out.act[u * m + a] = value;
        out
    }

    fn labels(&self, u: &[usize], a: &[usize]) -> Vec<String> {
        u.iter()
            .map(|&u| self.quantale.label(u).to_string())
            .chain(a.iter().map(|&a| self.lattice.label(a).to_string()))
            .collect()
    }
}

/// (A1) `s • (a ∨ b) = s•a ∨ s•b`, `s • 0 = 0`;
/// (A2) `(u ⊔ v) • a = u•a ∨ v•a`, `0 • a = 0`;
/// (A3) `u • (v • a) = (u·v) • a`;
/// (A4) `e • a = a`.
pub fn check_left_module(m: &ModuleAction) -> CheckReport {
    let q = &m.quantale;
    let l = &m.lattice;
    let (n, k) = (q.len(), l.len());
    let mut report = CheckReport::new("left-module");

    let w = first_witness(n, |s| {
        (0..k).find_map(|a| {
            (0..k)
                .find(|&b| m.act(s, l.join(a, b)) != l.join(m.act(s, a), m.act(s, b)))
                .map(|b| m.labels(&[s], &[a, b]))
        })
    });
    report.record("A1-join", w);
    let w = (0..n).find(|&s| m.act(s, l.bottom()) != l.bottom());
    report.record("A1-bottom", w.map(|s| m.labels(&[s], &[])));

    let w = first_witness(n, |u| {
        (0..n).find_map(|v| {
            (0..k)
                .find(|&a| m.act(q.join(u, v), a) != l.join(m.act(u, a), m.act(v, a)))
                .map(|a| m.labels(&[u, v], &[a]))
        })
    });
    report.record("A2-join", w);
    let w = (0..k).find(|&a| m.act(q.zero(), a) != l.bottom());
    report.record("A2-zero", w.map(|a| m.labels(&[], &[a])));

    let w = first_witness(n, |u| {
        (0..n).find_map(|v| {
            (0..k)
                .find(|&a| m.act(u, m.act(v, a)) != m.act(q.mult(u, v), a))
                .map(|a| m.labels(&[u, v], &[a]))
        })
    });
    report.record("A3", w);

    let w = (0..k).find(|&a| m.act(q.unit(), a) != a);
    report.record("A4", w.map(|a| m.labels(&[], &[a])));
    report
}

/// `X` as a left `Lin(X)`-module: `f • x = f(x)`.
pub fn lin_module(x: &Arc<FiniteOml>, cap: usize) -> Result<ModuleAction> {
    Ok(module_from_lin(&lin_quantale(x, cap)?))
}

pub fn module_from_lin(lq: &LinQuantale) -> ModuleAction {
    let act = lq.view.maps().iter().flat_map(|f| f.values().iter().copied()).collect();
    ModuleAction {
        quantale: Arc::clone(&lq.quantale),
        lattice: lq.base().lattice().clone(),
        act,
    }
}

/// `[Q]` as a left `Q`-module under `u•k = (u·k)⊥⊥`.
pub fn sasaki_module(f: &FoulisQuantale) -> Result<ModuleAction> {
    let s = sasaki_oml(f)?;
    sasaki_module_on(f, &s)
}

pub fn sasaki_module_on(f: &FoulisQuantale, s: &SasakiOml) -> Result<ModuleAction> {
    let mut act = Vec::with_capacity(f.len() * s.len());
    for u in 0..f.len() {
        for &k in s.carrier() {
            let v = module_action(f, u, k);
            act.push(s.position(v).ok_or_else(|| Error::StructureViolation {
                formula: "u•k ∈ [Q]".into(),
                witness: format!("{}, {}", f.base().label(u), f.base().label(k)),
            })?);
        }
    }
    Ok(ModuleAction {
        quantale: Arc::clone(f.base()),
        lattice: s.oml().lattice().clone(),
        act,
    })
}

/// The right action of the two-element quantale `{0 < 1}` (multiplication
/// is meet) on `a`: `a • 1 = a` and `a • 0 = 0`.
pub fn check_right_two_module(l: &FiniteLattice) -> CheckReport {
    let two = FinQuantale::two();
    let act = |a: usize, t: usize| if t == two.unit() { a } else { l.bottom() };
    let ts = [two.zero(), two.unit()];
    let k = l.len();
    let lab = |a: &[usize], t: &[usize]| -> Vec<String> {
        a.iter()
            .map(|&a| l.label(a).to_string())
            .chain(t.iter().map(|&t| two.label(t).to_string()))
            .collect()
    };
    let mut report = CheckReport::new("right-2-module");

    let w = (0..k).find_map(|a| {
        (0..k).find_map(|b| {
            ts.iter()
                .find(|&&t| act(l.join(a, b), t) != l.join(act(a, t), act(b, t)))
                .map(|&t| lab(&[a, b], &[t]))
        })
    });
    report.record("join-left", w);
    let w = ts.iter().find(|&&t| act(l.bottom(), t) != l.bottom());
    report.record("bottom-left", w.map(|&t| lab(&[], &[t])));
    let w = (0..k).find_map(|a| {
        ts.iter().find_map(|&t| {
            ts.iter()
                .find(|&&s| act(a, two.join(t, s)) != l.join(act(a, t), act(a, s)))
                .map(|&s| lab(&[a], &[t, s]))
        })
    });
    report.record("join-right", w);
    let w = (0..k).find(|&a| act(a, two.zero()) != l.bottom());
    report.record("zero-right", w.map(|a| lab(&[a], &[])));
    let w = (0..k).find_map(|a| {
        ts.iter().find_map(|&t| {
            ts.iter()
                .find(|&&s| act(act(a, t), s) != act(a, two.mult(t, s)))
                .map(|&s| lab(&[a], &[t, s]))
        })
    });
    report.record("associativity", w);
    let w = (0..k).find(|&a| act(a, two.unit()) != a);
    report.record("unit", w.map(|a| lab(&[a], &[])));
    report
}
