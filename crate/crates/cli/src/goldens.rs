//! Brute-force oracle for the checked-in golden values.
//!
//! Counts `|Lin(X)|` by walking every table `X → X` and testing join
//! preservation pair by pair. It shares nothing with the library's
//! enumerator beyond the lattice tables themselves.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use omlq::{catalog, FiniteOml};
use serde_json::{json, Map, Value};

/// Lattices whose table count stays small enough for the oracle.
pub const ORACLE_SPECS: &[&str] = &[
    "zero",
    "boolean:0",
    "boolean:1",
    "boolean:2",
    "mo:1",
    "mo:2",
    "benzene",
    "product(boolean:1,boolean:1)",
];

pub fn default_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/goldens.json")
}

pub fn oracle_lin_count(x: &FiniteOml) -> u64 {
    let n = x.len();
    let mut table = vec![0usize; n];
    let mut count = 0;
    loop {
        let preserves = table[x.bottom()] == x.bottom()
            && (0..n).all(|a| (a..n).all(|b| table[x.join(a, b)] == x.join(table[a], table[b])));
        if preserves {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            table[i] += 1;
            if table[i] < n {
                break;
            }
            table[i] = 0;
            i += 1;
        }
    }
}

pub fn regenerate(path: &Path) -> Result<Value> {
    let mut counts = Map::new();
    for spec in ORACLE_SPECS {
        let x = catalog(spec)?;
        counts.insert(spec.to_string(), json!(oracle_lin_count(&x)));
    }
    let doc = json!({ "lin_counts": counts });
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(doc)
}
