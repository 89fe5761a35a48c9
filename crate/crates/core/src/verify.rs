//! End-to-end checking pipelines over a single orthomodular lattice `X`.
//!
//! Every pipeline first requires `X` to pass [`FiniteOml::check`]; the Foulis
//! pipelines further require `Lin(X)` to pass the quantale and involution
//! checks. A failed prerequisite is returned as [`Error::Gate`] instead of a
//! report, so it is never mistaken for a failure of the property under test.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foulis::{
    check_foulis, check_projection_shortcut, check_star_props, foulis_from_lin, hom_h,
    roundtrip_report, sasaki_action, sasaki_oml, LinFoulis, SasakiOml,
};
use crate::lattice::FiniteOml;
use crate::linmap::kernel;
use crate::qmodule::{check_left_module, check_right_two_module, module_from_lin, sasaki_module_on};
use crate::quantale::{check_involutive, check_quantale};
use crate::report::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Selector {
    SasakiFacts,
    DaggerKernel,
    Quantale,
    Involutive,
    Foulis,
    StarProps,
    SasakiOml,
    Modules,
    Hom,
    Roundtrip,
    All,
}

impl Selector {
    pub const ALL: [Selector; 11] = [
        Selector::SasakiFacts,
        Selector::DaggerKernel,
        Selector::Quantale,
        Selector::Involutive,
        Selector::Foulis,
        Selector::StarProps,
        Selector::SasakiOml,
        Selector::Modules,
        Selector::Hom,
        Selector::Roundtrip,
        Selector::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Selector::SasakiFacts => "sasaki-facts",
            Selector::DaggerKernel => "dagger-kernel",
            Selector::Quantale => "quantale",
            Selector::Involutive => "involutive",
            Selector::Foulis => "foulis",
            Selector::StarProps => "star-props",
            Selector::SasakiOml => "sasaki-oml",
            Selector::Modules => "modules",
            Selector::Hom => "hom",
            Selector::Roundtrip => "roundtrip",
            Selector::All => "all",
        }
    }

    fn expand(self) -> Vec<Selector> {
        match self {
            Selector::All => Selector::ALL[..Selector::ALL.len() - 1].to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Selector::ALL
            .iter()
            .copied()
            .find(|sel| sel.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown selector `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub subject: String,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    /// Measured quantities that are reported but not judged, such as sizes
    /// and whether `h` is injective.
    pub facts: BTreeMap<String, String>,
}

impl VerifyReport {
    fn push(&mut self, report: CheckReport) {
        self.passed &= report.passed;
        self.checks.push(report);
    }
}

/// Lazily built shared structures so that `all` builds `Lin(X)` once.
struct Context<'a> {
    x: &'a Arc<FiniteOml>,
    cap: usize,
    lin: OnceLock<LinFoulis>,
    gate: OnceLock<Option<String>>,
    sasaki: OnceLock<std::result::Result<SasakiOml, Error>>,
}

impl<'a> Context<'a> {
    fn lin(&self) -> Result<&LinFoulis> {
        if self.lin.get().is_none() {
            let lf = foulis_from_lin(self.x, self.cap)?;
            let _ = self.lin.set(lf);
        }
        Ok(self.lin.get().expect("set above"))
    }

    /// `Lin(X)` after it has passed the quantale and involution checks.
    fn foulis(&self) -> Result<&LinFoulis> {
        let lf = self.lin()?;
        let gate = self.gate.get_or_init(|| {
            [check_quantale(&lf.lin.quantale), check_involutive(&lf.lin.quantale)]
                .into_iter()
                .find(|r| !r.passed)
                .map(|r| r.summary())
        });
        match gate {
            Some(failure) => Err(Error::Gate(failure.clone())),
            None => Ok(lf),
        }
    }

    fn sasaki(&self) -> Result<std::result::Result<&SasakiOml, &Error>> {
        let lf = self.foulis()?;
        Ok(self.sasaki.get_or_init(|| sasaki_oml(&lf.foulis)).as_ref())
    }
}

fn structure_failure(subject: &str, e: &Error) -> CheckReport {
    let mut r = CheckReport::new(subject);
    match e {
        Error::StructureViolation { formula, witness } => r.push(formula.clone(), vec![witness.clone()]),
        other => r.push("construction", vec![other.to_string()]),
    }
    r
}

pub fn verify(x: &Arc<FiniteOml>, selector: Selector, cap: usize) -> Result<VerifyReport> {
    let gate = x.check();
    if !gate.passed {
        return Err(Error::Gate(gate.summary()));
    }
    let ctx = Context {
        x,
        cap,
        lin: OnceLock::new(),
        gate: OnceLock::new(),
        sasaki: OnceLock::new(),
    };
    let mut out = VerifyReport {
        subject: selector.name().to_string(),
        passed: true,
        checks: Vec::new(),
        facts: BTreeMap::new(),
    };
    out.facts.insert("|X|".into(), x.len().to_string());
    for sel in selector.expand() {
        run(&ctx, sel, &mut out)?;
    }
    Ok(out)
}

fn run(ctx: &Context, sel: Selector, out: &mut VerifyReport) -> Result<()> {
    let x = ctx.x;
    match sel {
        Selector::SasakiFacts => out.push(x.check_sasaki_facts()),
        Selector::DaggerKernel => {
            let lf = ctx.lin()?;
            out.facts.insert("|Lin(X)|".into(), lf.lin.view.maps().len().to_string());
            out.push(dagger_kernel_report(lf));
        }
        Selector::Quantale => {
            let lf = ctx.lin()?;
            out.facts.insert("|Lin(X)|".into(), lf.lin.view.maps().len().to_string());
            out.push(check_quantale(&lf.lin.quantale));
            out.push(lf.lin.check_view());
        }
        Selector::Involutive => out.push(check_involutive(&ctx.lin()?.lin.quantale)),
        Selector::Foulis => {
            let lf = ctx.foulis()?;
            out.push(check_foulis(&lf.foulis));
            out.push(lf.check_derived_agreement());
        }
        Selector::StarProps => out.push(check_star_props(&ctx.foulis()?.foulis)),
        Selector::SasakiOml => match ctx.sasaki()? {
            Ok(s) => {
                let lf = ctx.foulis()?;
                out.facts.insert("|[Q]|".into(), s.len().to_string());
                let mut oml = s.oml().check();
                oml.subject = "sasaki-oml".into();
                out.push(oml);
                out.push(s.check_structure(&lf.foulis));
                out.push(check_projection_shortcut(lf, s));
            }
            Err(e) => out.push(structure_failure("sasaki-oml", e)),
        },
        Selector::Modules => {
            let lf = ctx.foulis()?;
            let mut lin = check_left_module(&module_from_lin(&lf.lin));
            lin.subject = "lin-module".into();
            out.push(lin);
            match ctx.sasaki()? {
                Ok(s) => {
                    let m = sasaki_module_on(&lf.foulis, s)?;
                    let mut r = check_left_module(&m);
                    r.subject = "sasaki-module".into();
                    let w = (0..lf.foulis.len()).find(|&u| {
                        sasaki_action(&lf.foulis, s, u).map_or(true, |sigma| sigma.values() != m.row(u))
                    });
                    r.record("row=σ_u", w.map(|u| vec![lf.foulis.base().label(u).to_string()]));
                    out.push(r);
                }
                Err(e) => out.push(structure_failure("sasaki-module", e)),
            }
            out.push(check_right_two_module(x.lattice()));
        }
        Selector::Hom => {
            let lf = ctx.foulis()?;
            match hom_h(&lf.foulis, ctx.cap) {
                Ok(h) => {
                    out.facts.insert("h.injective".into(), h.is_injective().to_string());
                    out.facts.insert("h.surjective".into(), h.is_surjective().to_string());
                    out.push(h.check());
                }
                Err(e @ Error::CapExceeded(_)) => return Err(e),
                Err(e) => out.push(structure_failure("homomorphism", &e)),
            }
        }
        Selector::Roundtrip => match ctx.sasaki()? {
            Ok(s) => out.push(roundtrip_report(x, ctx.foulis()?, s)),
            Err(e) => out.push(structure_failure("roundtrip", e)),
        },
        Selector::All => unreachable!("expanded"),
    }
    Ok(())
}

/// Kernel identities for every `f ∈ Lin(X)` and the weak kernel property
/// against every `m ∈ Lin(X)`. Witnesses start with the table of `f`.
pub fn dagger_kernel_report(lf: &LinFoulis) -> CheckReport {
    let maps = lf.lin.view.maps();
    let per_map: Vec<CheckReport> = maps
        .par_iter()
        .map(|f| {
            let fl = lf.lin.view.map_label(f);
            let data = kernel(f);
            let mut r = CheckReport::new("dagger-kernel");
            for v in data.check(f).violations {
                r.push(v.axiom, std::iter::once(fl.clone()).chain(v.witness).collect());
            }
            match data.weak_kernel_failure(f, maps) {
                Ok(Some(i)) => r.push("weak-kernel", vec![fl, lf.lin.view.map_label(&maps[i])]),
                Ok(None) => {}
                Err(e) => r.push("weak-kernel", vec![fl, e.to_string()]),
            }
            r
        })
        .collect();
    let mut report = CheckReport::new("dagger-kernel");
    for r in per_map {
        report.merge(r);
    }
    report
}
