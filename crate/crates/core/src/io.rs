//! JSON file formats and DOT output.
//!
//! Wherever a lattice or quantale is expected a string may be given instead
//! of an inline object. A string naming an existing file (relative paths are
//! resolved against the directory of the referring file) is loaded; anything
//! else is looked up in the catalog.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::catalog::catalog;
use crate::lattice::{build_lattice, FiniteLattice, FiniteOml};
use crate::linmap::LinMap;
use crate::qmodule::ModuleAction;
use crate::quantale::FinQuantale;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<(String, String)>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmlFile {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<(String, String)>>,
    pub ortho: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Name(String),
    Inline(T),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub dom: Ref<OmlFile>,
    pub cod: Ref<OmlFile>,
    pub values: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantaleFile {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<(String, String)>>,
    pub mult: Vec<Vec<String>>,
    pub star: BTreeMap<String, String>,
    pub unit: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sai: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub quantale: Ref<QuantaleFile>,
    pub lattice: Ref<LatticeFile>,
    pub action: Vec<Vec<String>>,
}

/// A quantale together with an optional `[-]` table.
#[derive(Clone, Debug)]
pub struct LoadedQuantale {
    pub quantale: FinQuantale,
    pub sai: Option<Vec<usize>>,
}

fn order_pairs(
    leq: &Option<Vec<(String, String)>>,
    covers: &Option<Vec<(String, String)>>,
) -> Result<Vec<(String, String)>> {
    match (leq, covers) {
        (Some(_), Some(_)) => Err(Error::Parse("give either `leq` or `covers`, not both".into())),
        (Some(p), None) | (None, Some(p)) => Ok(p.clone()),
        (None, None) => Ok(Vec::new()),
    }
}

fn lattice_from_parts(
    elements: &[String],
    leq: &Option<Vec<(String, String)>>,
    covers: &Option<Vec<(String, String)>>,
) -> Result<FiniteLattice> {
    build_lattice(elements, &order_pairs(leq, covers)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn dir_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn existing_file(name: &str, base: &Path) -> Option<PathBuf> {
    let p = Path::new(name);
    let p = if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
    p.is_file().then_some(p)
}

impl OmlFile {
    pub fn build(&self) -> Result<FiniteOml> {
        let lattice = lattice_from_parts(&self.elements, &self.leq, &self.covers)?;
        let pairs: Vec<(&str, &str)> = self.ortho.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        FiniteOml::from_label_pairs(lattice, &pairs)
    }

    /// Covering pairs and the full orthocomplement, in element order.
    pub fn from_oml(x: &FiniteOml) -> Self {
        OmlFile {
            elements: x.labels().to_vec(),
            leq: None,
            covers: Some(cover_labels(x.lattice())),
            ortho: (0..x.len())
                .map(|i| (x.label(i).to_string(), x.label(x.ortho(i)).to_string()))
                .collect(),
        }
    }
}

impl LatticeFile {
    pub fn build(&self) -> Result<FiniteLattice> {
        lattice_from_parts(&self.elements, &self.leq, &self.covers)
    }

    pub fn from_lattice(l: &FiniteLattice) -> Self {
        LatticeFile {
            elements: l.labels().to_vec(),
            leq: None,
            covers: Some(cover_labels(l)),
        }
    }
}

fn cover_labels(l: &FiniteLattice) -> Vec<(String, String)> {
    l.covers()
        .into_iter()
        .map(|(a, b)| (l.label(a).to_string(), l.label(b).to_string()))
        .collect()
}

pub fn parse_oml(text: &str) -> Result<FiniteOml> {
    serde_json::from_str::<OmlFile>(text)?.build()
}

pub fn load_oml(path: &Path) -> Result<FiniteOml> {
    parse_oml(&read(path)?)
}

/// A catalog spec or the path of an OML file.
pub fn resolve_oml(name: &str, base: &Path) -> Result<FiniteOml> {
    match existing_file(name, base) {
        Some(p) => load_oml(&p),
        None => catalog(name),
    }
}

fn resolve_oml_ref(r: &Ref<OmlFile>, base: &Path) -> Result<FiniteOml> {
    match r {
        Ref::Name(n) => resolve_oml(n, base),
        Ref::Inline(f) => f.build(),
    }
}

fn resolve_lattice_ref(r: &Ref<LatticeFile>, base: &Path) -> Result<FiniteLattice> {
    match r {
        Ref::Name(n) => match existing_file(n, base) {
            Some(p) => {
                let text = read(&p)?;
                // OML files are lattice files with an extra field
                match serde_json::from_str::<LatticeFile>(&text) {
                    Ok(f) => f.build(),
                    Err(_) => Ok(serde_json::from_str::<OmlFile>(&text)?.build()?.lattice().clone()),
                }
            }
            None => Ok(catalog(n)?.lattice().clone()),
        },
        Ref::Inline(f) => f.build(),
    }
}

pub fn parse_map(text: &str, base: &Path) -> Result<LinMap> {
    let f: MapFile = serde_json::from_str(text)?;
    let dom = Arc::new(resolve_oml_ref(&f.dom, base)?);
    let cod = Arc::new(resolve_oml_ref(&f.cod, base)?);
    let mut values = vec![None; dom.len()];
    for (x, y) in &f.values {
        values[dom.element(x)?] = Some(cod.element(y)?);
    }
    let values = values
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::InvalidInput(format!("no value given for `{}`", dom.label(i)))))
        .collect::<Result<Vec<_>>>()?;
    LinMap::new(dom, cod, values)
}

pub fn load_map(path: &Path) -> Result<LinMap> {
    parse_map(&read(path)?, &dir_of(path))
}

pub fn map_file(f: &LinMap, dom: &str, cod: &str) -> MapFile {
    MapFile {
        dom: Ref::Name(dom.to_string()),
        cod: Ref::Name(cod.to_string()),
        values: (0..f.dom().len())
            .map(|i| (f.dom().label(i).to_string(), f.cod().label(f.apply(i)).to_string()))
            .collect(),
    }
}

fn total_map(l: &FiniteLattice, m: &BTreeMap<String, String>, what: &str) -> Result<Vec<usize>> {
    let mut out = vec![None; l.len()];
    for (a, b) in m {
        out[l.element(a)?] = Some(l.element(b)?);
    }
    out.iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::InvalidInput(format!("{what} has no entry for `{}`", l.label(i)))))
        .collect()
}

impl QuantaleFile {
    pub fn build(&self) -> Result<LoadedQuantale> {
        let carrier = lattice_from_parts(&self.elements, &self.leq, &self.covers)?;
        let n = carrier.len();
        if self.mult.len() != n || self.mult.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!("multiplication table must be {n} × {n}")));
        }
        let mult = self
            .mult
            .iter()
            .flatten()
            .map(|l| carrier.element(l))
            .collect::<Result<Vec<_>>>()?;
        let star = total_map(&carrier, &self.star, "involution")?;
        let sai = self.sai.as_ref().map(|m| total_map(&carrier, m, "endomap")).transpose()?;
        let unit = carrier.element(&self.unit)?;
        Ok(LoadedQuantale {
            quantale: FinQuantale::new(carrier, mult, star, unit)?,
            sai,
        })
    }

    pub fn from_quantale(q: &FinQuantale, sai: Option<&[usize]>) -> Self {
        let n = q.len();
        let lab = |i: usize| q.label(i).to_string();
        let map = |t: &dyn Fn(usize) -> usize| (0..n).map(|i| (lab(i), lab(t(i)))).collect();
        QuantaleFile {
            elements: q.carrier().labels().to_vec(),
            leq: None,
            covers: Some(cover_labels(q.carrier())),
            mult: (0..n).map(|x| (0..n).map(|y| lab(q.mult(x, y))).collect()).collect(),
            star: map(&|i| q.star(i)),
            unit: lab(q.unit()),
            sai: sai.map(|s| map(&|i| s[i])),
        }
    }
}

pub fn parse_quantale(text: &str) -> Result<LoadedQuantale> {
    serde_json::from_str::<QuantaleFile>(text)?.build()
}

pub fn load_quantale(path: &Path) -> Result<LoadedQuantale> {
    parse_quantale(&read(path)?)
}

fn resolve_quantale_ref(r: &Ref<QuantaleFile>, base: &Path) -> Result<LoadedQuantale> {
    match r {
        Ref::Name(n) => {
            let p = existing_file(n, base).ok_or_else(|| Error::Io(format!("no quantale file `{n}`")))?;
            load_quantale(&p)
        }
        Ref::Inline(f) => f.build(),
    }
}

pub fn parse_module(text: &str, base: &Path) -> Result<ModuleAction> {
    let f: ModuleFile = serde_json::from_str(text)?;
    let q = resolve_quantale_ref(&f.quantale, base)?.quantale;
    let l = resolve_lattice_ref(&f.lattice, base)?;
    if f.action.len() != q.len() || f.action.iter().any(|r| r.len() != l.len()) {
        return Err(Error::InvalidInput(format!(
            "action table must be {} × {}",
            q.len(),
            l.len()
        )));
    }
    let act = f
        .action
        .iter()
        .flatten()
        .map(|a| l.element(a))
        .collect::<Result<Vec<_>>>()?;
    ModuleAction::new(Arc::new(q), l, act)
}

pub fn load_module(path: &Path) -> Result<ModuleAction> {
    parse_module(&read(path)?, &dir_of(path))
}

pub fn module_file(m: &ModuleAction) -> ModuleFile {
    let l = m.lattice();
    ModuleFile {
        quantale: Ref::Inline(QuantaleFile::from_quantale(m.quantale(), None)),
        lattice: Ref::Inline(LatticeFile::from_lattice(l)),
        action: (0..m.quantale().len())
            .map(|u| m.row(u).iter().map(|&a| l.label(a).to_string()).collect())
            .collect(),
    }
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn dot_body(out: &mut String, l: &FiniteLattice) {
    out.push_str("  rankdir=BT;\n  node [shape=plaintext];\n");
    for i in 0..l.len() {
        let _ = writeln!(out, "  {};", dot_id(l.label(i)));
    }
    for (a, b) in l.covers() {
        let _ = writeln!(out, "  {} -> {} [dir=none];", dot_id(l.label(a)), dot_id(l.label(b)));
    }
}

/// Hasse diagram of a lattice: one node per element, one edge per cover.
pub fn dot_lattice(l: &FiniteLattice) -> String {
    let mut out = String::from("digraph lattice {\n");
    dot_body(&mut out, l);
    out.push_str("}\n");
    out
}

/// Hasse diagram with each orthocomplement pair drawn once as a dashed link
/// that does not affect ranking.
pub fn dot_oml(x: &FiniteOml) -> String {
    let mut out = String::from("digraph oml {\n");
    dot_body(&mut out, x.lattice());
    for a in 0..x.len() {
        let b = x.ortho(a);
        if a < b {
            let _ = writeln!(
                out,
                "  {} -> {} [style=dashed, dir=none, constraint=false];",
                dot_id(x.label(a)),
                dot_id(x.label(b))
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::lin_quantale;
    use crate::enumerate::DEFAULT_CAP;

    #[test]
    fn oml_roundtrip() {
        for spec in ["zero", "boolean:2", "mo:2", "benzene", "hsum(boolean:2,mo:1)"] {
            let x = catalog(spec).unwrap();
            let text = serde_json::to_string(&OmlFile::from_oml(&x)).unwrap();
            assert_eq!(parse_oml(&text).unwrap(), x, "{spec}");
        }
    }

    #[test]
    fn oml_from_leq_with_one_sided_ortho() {
        let text = r#"{"elements": ["0","a","a'","1"],
            "leq": [["0","a"],["0","a'"],["a","1"],["a'","1"]],
            "ortho": {"0":"1","a":"a'"}}"#;
        let x = parse_oml(text).unwrap();
        assert_eq!(x.label(x.ortho(2)), "a");
        assert!(x.check().passed);
    }

    #[test]
    fn bad_json_and_both_orders() {
        assert!(matches!(parse_oml("{"), Err(Error::Parse(_))));
        let text = r#"{"elements": ["0"], "leq": [], "covers": [], "ortho": {"0":"0"}}"#;
        assert!(matches!(parse_oml(text), Err(Error::Parse(_))));
    }

    #[test]
    fn map_with_catalog_domains() {
        let text = r#"{"dom": "boolean:1", "cod": "boolean:1", "values": {"0":"0","1":"0"}}"#;
        assert!(parse_map(text, Path::new(".")).unwrap().is_bottom());
        let text = r#"{"dom": "boolean:1", "cod": "boolean:1", "values": {"0":"1","1":"1"}}"#;
        assert!(matches!(parse_map(text, Path::new(".")), Err(Error::NotLinear(_))));
    }

    #[test]
    fn lin_quantale_roundtrip() {
        let x = Arc::new(catalog("boolean:2").unwrap());
        let lq = lin_quantale(&x, DEFAULT_CAP).unwrap();
        let file = QuantaleFile::from_quantale(&lq.quantale, None);
        let text = serde_json::to_string(&file).unwrap();
        let back = parse_quantale(&text).unwrap().quantale;
        assert_eq!(back.carrier(), lq.quantale.carrier());
        assert_eq!(back.mult_table(), lq.quantale.mult_table());
        assert_eq!(back.star_table(), lq.quantale.star_table());
        assert_eq!(back.unit(), lq.quantale.unit());
    }

    #[test]
    fn dot_counts() {
        let x = catalog("mo:2").unwrap();
        let dot = dot_oml(&x);
        let solid = dot.lines().filter(|l| l.contains("->") && !l.contains("dashed")).count();
        let nodes = dot.lines().filter(|l| l.trim_end().ends_with("\";") && !l.contains("->")).count();
        assert_eq!((nodes, solid), (6, 8));
        let dot = dot_oml(&catalog("zero").unwrap());
        assert!(!dot.contains("->"));
        assert_eq!(dot.lines().filter(|l| l.contains("\"0\"")).count(), 1);
    }
}
