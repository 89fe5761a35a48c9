mod goldens;

/// Writes to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
macro_rules! out {
    ($($t:tt)*) => { $crate::write_out(&format!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => { $crate::write_out(&(format!($($t)*) + "\n")) };
}

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use omlq::io::{self, OmlFile, QuantaleFile};
use omlq::{
    check_foulis, check_involutive, check_left_module, check_oml, check_quantale, check_star_props,
    derive_sai, enumerate_lin, foulis_from_lin, kernel, lin_module, sasaki_module,
    sasaki_oml, verify, verify_adjoint_pair, CheckReport, Error, FiniteOml, FoulisQuantale, Selector,
    DEFAULT_CAP,
};
use serde::Serialize;
use serde_json::json;

/// Finite orthomodular lattices, linear maps and Foulis quantales.
///
/// Exit status: 0 when every check passes, 1 when a property is violated,
/// 2 for usage, input or prerequisite errors.
#[derive(Parser, Debug)]
#[command(name = "omlq", version)]
struct Cli {
    /// Maximum number of maps any enumeration may produce.
    #[arg(long, global = true, env = "OMLQ_CAP", default_value_t = DEFAULT_CAP,
          value_parser = positive)]
    cap: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (default: available cores).
    #[arg(long, global = true, value_parser = positive)]
    workers: Option<usize>,

    /// Recompute golden values with the brute-force oracle and write them to
    /// PATH (default: the core crate's fixtures file).
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "")]
    regen_goldens: Option<String>,

    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

/// A lattice named by catalog spec or OML file.
#[derive(Args, Debug, Clone)]
struct Input {
    #[arg(long, conflicts_with = "file")]
    catalog: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the orthomodular lattice laws.
    CheckOml(Input),
    /// Print the Sasaki projection onto an element.
    Sasaki {
        #[command(flatten)]
        input: Input,
        /// Element to project onto.
        #[arg(long)]
        a: String,
        /// Only print the image of this element.
        #[arg(long)]
        y: Option<String>,
    },
    /// Enumerate the join-preserving maps X → Y (Y defaults to X).
    Lin {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "cod_file")]
        cod_catalog: Option<String>,
        #[arg(long)]
        cod_file: Option<PathBuf>,
        #[arg(long)]
        count_only: bool,
    },
    /// Compute the adjoint of a map file and verify the adjunction.
    Adjoint {
        #[arg(long)]
        map: PathBuf,
    },
    /// Compute the dagger kernel of an endomap file.
    Kernel {
        #[arg(long)]
        map: PathBuf,
    },
    /// Build Lin(X) and write it in the quantale file format.
    LinQuantale(Input),
    /// Check the quantale and involution axioms of a quantale file.
    CheckQuantale {
        #[arg(long)]
        file: PathBuf,
    },
    /// Check the Foulis axioms of a quantale file or of Lin(X).
    CheckFoulis(QInput),
    /// Build the lattice of Sasaki projections of a Foulis quantale.
    SasakiLattice(QInput),
    /// Check the left module axioms of a module file, Lin(X) acting on X,
    /// or Lin(X) acting on its Sasaki projections.
    CheckModule {
        #[arg(long, conflicts_with = "catalog")]
        file: Option<PathBuf>,
        #[arg(long)]
        catalog: Option<String>,
        /// With --catalog: use the action on the Sasaki projections.
        #[arg(long, requires = "catalog")]
        sasaki: bool,
    },
    /// Run a checking pipeline.
    Verify {
        #[command(flatten)]
        input: Input,
        /// sasaki-facts, dagger-kernel, quantale, involutive, foulis,
        /// star-props, sasaki-oml, modules, hom, roundtrip or all.
        selector: String,
    },
    /// Write a lattice as JSON (text or json format) or as a DOT diagram.
    Emit(Input),
    /// List the catalog.
    Catalog,
}

/// A Foulis quantale given as a quantale file or as Lin(X).
#[derive(Args, Debug, Clone)]
struct QInput {
    /// Quantale file, optionally with an "sai" table.
    #[arg(long, conflicts_with = "catalog")]
    file: Option<PathBuf>,
    /// Use Lin(X) for this lattice.
    #[arg(long)]
    catalog: Option<String>,
}

fn write_out(s: &str) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_all(s.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

impl Input {
    fn load(&self) -> Result<FiniteOml> {
        match (&self.catalog, &self.file) {
            (Some(c), None) => Ok(omlq::catalog(c)?),
            (None, Some(f)) => Ok(io::load_oml(f)?),
            _ => bail!("give one of --catalog or --file"),
        }
    }
}

fn print_json<T: Serialize + ?Sized>(v: &T) -> Result<()> {
    outln!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn report_code(reports: &[CheckReport]) -> u8 {
    u8::from(!reports.iter().all(|r| r.passed))
}

fn emit_reports(format: Format, reports: &[CheckReport]) -> Result<u8> {
    match format {
        Format::Json => print_json(reports)?,
        _ => {
            for r in reports {
                outln!("{}", r.summary());
            }
        }
    }
    Ok(report_code(reports))
}

/// Errors that mean "the input is a well-formed structure lacking the
/// property" rather than "the input is unusable".
fn violation(e: &Error) -> bool {
    matches!(
        e,
        Error::NotLinear(_) | Error::NotFoulis(_) | Error::AmbiguousSai { .. } | Error::StructureViolation { .. }
    )
}

fn fail_or_err(e: Error) -> Result<u8> {
    if violation(&e) {
        outln!("violation: {e}");
        Ok(1)
    } else {
        Err(e.into())
    }
}

fn load_foulis(q: &QInput, cap: usize) -> Result<std::result::Result<FoulisQuantale, Error>> {
    match (&q.file, &q.catalog) {
        (Some(f), None) => {
            let loaded = io::load_quantale(f)?;
            let base = Arc::new(loaded.quantale);
            for r in [check_quantale(&base), check_involutive(&base)] {
                if !r.passed {
                    return Err(Error::Gate(r.summary()).into());
                }
            }
            Ok(match loaded.sai {
                Some(sai) => Ok(FoulisQuantale::new(base, sai)?),
                None => FoulisQuantale::derived(base),
            })
        }
        (None, Some(c)) => {
            let x = Arc::new(omlq::catalog(c)?);
            gate_oml(&x)?;
            Ok(Ok(foulis_from_lin(&x, cap)?.foulis))
        }
        _ => bail!("give one of --file or --catalog"),
    }
}

fn gate_oml(x: &FiniteOml) -> Result<()> {
    let r = x.check();
    if !r.passed {
        return Err(Error::Gate(r.summary()).into());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8> {
    if let Some(p) = &cli.regen_goldens {
        let path = if p.is_empty() { goldens::default_path() } else { PathBuf::from(p) };
        let doc = goldens::regenerate(&path)?;
        print_json(&doc)?;
        if cli.command.is_none() {
            return Ok(0);
        }
    }
    let Some(cmd) = &cli.command else {
        bail!("no subcommand given (see --help)");
    };
    let cap = cli.cap;
    let format = cli.format;
    match cmd {
        Cmd::CheckOml(input) => {
            let x = input.load()?;
            let r = check_oml(x.lattice(), x.ortho_table());
            emit_reports(format, &[r])
        }
        Cmd::Sasaki { input, a, y } => {
            let x = input.load()?;
            let a = x.element(a)?;
            let rows: Vec<(usize, usize)> = match y {
                Some(y) => {
                    let y = x.element(y)?;
                    vec![(y, x.sasaki(a, y))]
                }
                None => (0..x.len()).map(|y| (y, x.sasaki(a, y))).collect(),
            };
            match format {
                Format::Json => print_json(&json!({
                    "a": x.label(a),
                    "values": rows.iter().map(|&(y, v)| json!([x.label(y), x.label(v)])).collect::<Vec<_>>(),
                }))?,
                _ => {
                    for (y, v) in rows {
                        outln!("{} -> {}", x.label(y), x.label(v));
                    }
                }
            }
            Ok(0)
        }
        Cmd::Lin {
            input,
            cod_catalog,
            cod_file,
            count_only,
        } => {
            let x = Arc::new(input.load()?);
            let y = match (cod_catalog, cod_file) {
                (Some(c), None) => Arc::new(omlq::catalog(c)?),
                (None, Some(f)) => Arc::new(io::load_oml(f)?),
                _ => Arc::clone(&x),
            };
            let maps = match enumerate_lin(&x, &y, cap) {
                Ok(m) => m,
                Err(e @ Error::CapExceeded(_)) => {
                    eprintln!("error: {e}");
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            };
            let tables: Vec<Vec<&str>> = maps.iter().map(|m| m.value_labels()).collect();
            match (format, count_only) {
                (Format::Json, true) => print_json(&json!({ "count": maps.len() }))?,
                (_, true) => outln!("{}", maps.len()),
                (Format::Json, false) => print_json(&json!(tables))?,
                _ => {
                    for t in tables {
                        outln!("{}", t.join(" "));
                    }
                }
            }
            Ok(0)
        }
        Cmd::Adjoint { map } => {
            let f = match io::load_map(map) {
                Ok(f) => f,
                Err(e) => return fail_or_err(e),
            };
            let d = f.dagger();
            let r = verify_adjoint_pair(&f, &d)?;
            match format {
                Format::Json => print_json(&json!({ "adjoint": d.value_labels(), "report": r }))?,
                _ => {
                    for t in 0..d.dom().len() {
                        outln!("{} -> {}", d.dom().label(t), d.cod().label(d.apply(t)));
                    }
                    outln!("{}", r.summary());
                }
            }
            Ok(report_code(&[r]))
        }
        Cmd::Kernel { map } => {
            let f = match io::load_map(map) {
                Ok(f) => f,
                Err(e) => return fail_or_err(e),
            };
            let x = Arc::clone(f.dom());
            let k = kernel(&f);
            let r = k.check(&f);
            let down: Vec<&str> = k.sub.elements().iter().map(|&e| x.label(e)).collect();
            match format {
                Format::Json => print_json(&json!({ "k": x.label(k.k), "kernel": down, "report": r }))?,
                _ => {
                    outln!("k = {}", x.label(k.k));
                    outln!("kernel = {{{}}}", down.join(", "));
                    outln!("{}", r.summary());
                }
            }
            Ok(report_code(&[r]))
        }
        Cmd::LinQuantale(input) => {
            let x = Arc::new(input.load()?);
            gate_oml(&x)?;
            let lf = foulis_from_lin(&x, cap)?;
            let q = &lf.lin.quantale;
            match format {
                Format::Text => {
                    outln!("elements: {}", q.len());
                    outln!("unit: {}", q.label(q.unit()));
                    outln!("zero: {}", q.label(q.zero()));
                }
                _ => print_json(&QuantaleFile::from_quantale(q, Some(lf.foulis.sai_table())))?,
            }
            Ok(0)
        }
        Cmd::CheckQuantale { file } => {
            let q = io::load_quantale(file)?.quantale;
            emit_reports(format, &[check_quantale(&q), check_involutive(&q)])
        }
        Cmd::CheckFoulis(q) => {
            let f = match load_foulis(q, cap)? {
                Ok(f) => f,
                Err(e) => return fail_or_err(e),
            };
            let mut reports = vec![check_foulis(&f), check_star_props(&f)];
            if q.file.is_some() {
                // a given table is compared with the derived one
                let mut agree = CheckReport::new("sai-derivation");
                match derive_sai(f.base()) {
                    Ok(d) => {
                        let w = (0..d.len()).find(|&s| d[s] != f.sai(s));
                        agree.record("given=derived", w.map(|s| vec![f.base().label(s).to_string()]));
                    }
                    Err(e) => agree.push("derivable", vec![e.to_string()]),
                }
                reports.push(agree);
            }
            emit_reports(format, &reports)
        }
        Cmd::SasakiLattice(q) => {
            let f = match load_foulis(q, cap)? {
                Ok(f) => f,
                Err(e) => return fail_or_err(e),
            };
            let s = match sasaki_oml(&f) {
                Ok(s) => s,
                Err(e) => return fail_or_err(e),
            };
            emit_oml(format, s.oml())?;
            Ok(0)
        }
        Cmd::CheckModule {
            file,
            catalog,
            sasaki,
        } => {
            let m = match (file, catalog) {
                (Some(f), None) => io::load_module(f)?,
                (None, Some(c)) => {
                    let x = Arc::new(omlq::catalog(c)?);
                    gate_oml(&x)?;
                    if *sasaki {
                        match sasaki_module(&foulis_from_lin(&x, cap)?.foulis) {
                            Ok(m) => m,
                            Err(e) => return fail_or_err(e),
                        }
                    } else {
                        lin_module(&x, cap)?
                    }
                }
                _ => bail!("give one of --file or --catalog"),
            };
            emit_reports(format, &[check_left_module(&m)])
        }
        Cmd::Verify { input, selector } => {
            let selector: Selector = selector.parse()?;
            let x = Arc::new(input.load()?);
            let r = verify(&x, selector, cap)?;
            match format {
                Format::Json => print_json(&r)?,
                _ => {
                    for c in &r.checks {
                        outln!("{}", c.summary());
                    }
                    for (k, v) in &r.facts {
                        outln!("{k} = {v}");
                    }
                }
            }
            Ok(u8::from(!r.passed))
        }
        Cmd::Emit(input) => {
            let x = input.load()?;
            emit_oml(format, &x)?;
            Ok(0)
        }
        Cmd::Catalog => {
            for e in omlq::lattice::catalog::ENTRIES {
                outln!("{e}");
            }
            Ok(0)
        }
    }
}

fn emit_oml(format: Format, x: &FiniteOml) -> Result<()> {
    match format {
        Format::Dot => out!("{}", io::dot_oml(x)),
        _ => print_json(&OmlFile::from_oml(x))?,
    }
    Ok(())
}
