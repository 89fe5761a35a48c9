//! Standard finite ortholattices addressed by short specs such as
//! `boolean:3`, `mo:2`, `benzene`, `zero`, `product(boolean:1,mo:2)` or
//! `horizontal_sum(boolean:2,boolean:2)`.

use fixedbitset::FixedBitSet;

use super::{build_lattice, FiniteLattice, FiniteOml};
use crate::error::{Error, Result};

pub const ENTRIES: &[&str] = &[
    "boolean:<n>  (0 <= n <= 4) Boolean algebra of subsets of an n-set",
    "mo:<n>       (1 <= n <= 4) 2n atoms complemented in pairs",
    "benzene      six-element ortholattice that is not orthomodular",
    "zero         one-element lattice {0}",
    "product(A,B) componentwise order and complement",
    "horizontal_sum(A,B)  glue A and B along 0 and 1 (alias hsum)",
];

pub fn catalog(spec: &str) -> Result<FiniteOml> {
    let spec = spec.trim();
    if let Some((head, args)) = split_call(spec)? {
        let (left, right) = split_args(args, spec)?;
        let l = catalog(left)?;
        let r = catalog(right)?;
        return match head {
            "product" => Ok(product(&l, &r)),
            "horizontal_sum" | "hsum" => Ok(horizontal_sum(&l, &r)),
            _ => Err(Error::UnknownCatalogEntry(spec.to_string())),
        };
    }
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (spec, None),
    };
    let number = |range: std::ops::RangeInclusive<usize>| -> Result<usize> {
        let p = param.ok_or_else(|| Error::ParamOutOfRange(format!("`{name}` needs a size")))?;
        let n: usize = p
            .trim()
            .parse()
            .map_err(|_| Error::ParamOutOfRange(format!("`{p}` is not a size")))?;
        if range.contains(&n) {
            Ok(n)
        } else {
            Err(Error::ParamOutOfRange(format!(
                "{name}:{n} outside {}..={}",
                range.start(),
                range.end()
            )))
        }
    };
    let no_param = || -> Result<()> {
        match param {
            None => Ok(()),
            Some(_) => Err(Error::ParamOutOfRange(format!("`{name}` takes no parameter"))),
        }
    };
    match name {
        "boolean" => Ok(boolean(number(0..=4)?)),
        "mo" => Ok(mo(number(1..=4)?)),
        "benzene" => no_param().map(|_| benzene()),
        "zero" => no_param().map(|_| zero()),
        _ => Err(Error::UnknownCatalogEntry(spec.to_string())),
    }
}

fn split_call(spec: &str) -> Result<Option<(&str, &str)>> {
    let Some(open) = spec.find('(') else {
        return Ok(None);
    };
    if !spec.ends_with(')') {
        return Err(Error::UnknownCatalogEntry(spec.to_string()));
    }
    Ok(Some((spec[..open].trim(), &spec[open + 1..spec.len() - 1])))
}

fn split_args<'a>(args: &'a str, spec: &str) -> Result<(&'a str, &'a str)> {
    let mut depth = 0i32;
    for (i, c) in args.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Ok((&args[..i], &args[i + 1..])),
            _ => {}
        }
    }
    Err(Error::UnknownCatalogEntry(spec.to_string()))
}

/// Subsets of `{a, b, ...}` indexed by bitmask; `0` and `1` name the empty
/// and full set.
pub fn boolean(n: usize) -> FiniteOml {
    let size = 1usize << n;
    let full = size - 1;
    let labels: Vec<String> = (0..size)
        .map(|m| {
            if m == 0 {
                "0".to_string()
            } else if m == full {
                "1".to_string()
            } else {
                (0..n)
                    .filter(|b| m & (1 << b) != 0)
                    .map(|b| (b'a' + b as u8) as char)
                    .collect()
            }
        })
        .collect();
    let mut pairs = Vec::new();
    for m in 0..size {
        for b in 0..n {
            if m & (1 << b) == 0 {
                pairs.push((labels[m].clone(), labels[m | (1 << b)].clone()));
            }
        }
    }
    let lattice = build_lattice(&labels, &pairs).expect("powerset is a lattice");
    let ortho = (0..size).map(|m| full ^ m).collect();
    FiniteOml::new(lattice, ortho).expect("complement is total")
}

/// `0`, atoms `a, a', b, b', ...`, `1`.
pub fn mo(n: usize) -> FiniteOml {
    let mut labels = vec!["0".to_string()];
    for i in 0..n {
        let c = (b'a' + i as u8) as char;
        labels.push(c.to_string());
        labels.push(format!("{c}'"));
    }
    labels.push("1".to_string());
    let top = labels.len() - 1;
    let mut pairs = Vec::new();
    for atom in &labels[1..top] {
        pairs.push(("0".to_string(), atom.clone()));
        pairs.push((atom.clone(), "1".to_string()));
    }
    let lattice = build_lattice(&labels, &pairs).expect("MO_n is a lattice");
    let mut ortho = vec![top];
    for i in 0..n {
        ortho.push(2 + 2 * i);
        ortho.push(1 + 2 * i);
    }
    ortho.push(0);
    FiniteOml::new(lattice, ortho).expect("complement is total")
}

/// The hexagon `0 < x < y' < 1`, `0 < y < x' < 1`.
pub fn benzene() -> FiniteOml {
    let labels = ["0", "x", "y", "y'", "x'", "1"];
    let pairs = [
        ("0", "x"),
        ("0", "y"),
        ("x", "y'"),
        ("y", "x'"),
        ("y'", "1"),
        ("x'", "1"),
    ];
    let lattice = build_lattice(&labels, &pairs).expect("hexagon is a lattice");
    FiniteOml::new(lattice, vec![5, 4, 3, 2, 1, 0]).expect("complement is total")
}

/// The one-element lattice, which is the zero object for linear maps.
pub fn zero() -> FiniteOml {
    let lattice = build_lattice::<&str>(&["0"], &[]).expect("singleton is a lattice");
    FiniteOml::new(lattice, vec![0]).expect("complement is total")
}

pub fn product(l: &FiniteOml, r: &FiniteOml) -> FiniteOml {
    let (n, m) = (l.len(), r.len());
    let labels: Vec<String> = (0..n * m)
        .map(|i| format!("({},{})", l.label(i / m), r.label(i % m)))
        .collect();
    let rel = (0..n * m)
        .map(|i| {
            let mut row = FixedBitSet::with_capacity(n * m);
            for j in 0..n * m {
                if l.leq(i / m, j / m) && r.leq(i % m, j % m) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let lattice = FiniteLattice::from_relation(labels, rel).expect("product of lattices");
    let ortho = (0..n * m)
        .map(|i| l.ortho(i / m) * m + r.ortho(i % m))
        .collect();
    FiniteOml::new(lattice, ortho).expect("complement is total")
}

/// Glues `r` onto `l` along the bounds. The result keeps `l`'s elements in
/// order and appends the middle elements of `r`; labels of `r` that clash with
/// `l` get a `#2` suffix.
pub fn horizontal_sum(l: &FiniteOml, r: &FiniteOml) -> FiniteOml {
    let n = l.len();
    let mut labels: Vec<String> = l.labels().to_vec();
    let mut place = vec![0usize; r.len()];
    for y in 0..r.len() {
        place[y] = if y == r.bottom() {
            l.bottom()
        } else if y == r.top() {
            l.top()
        } else {
            let mut name = r.label(y).to_string();
            if l.index_of(&name).is_some() {
                name.push_str("#2");
            }
            labels.push(name);
            labels.len() - 1
        };
    }
    let total = labels.len();
    let mut rel = vec![FixedBitSet::with_capacity(total); total];
    for x in 0..n {
        for y in l.up_set(x).ones() {
            rel[x].insert(y);
        }
    }
    for x in 0..r.len() {
        for y in r.up_set(x).ones() {
            rel[place[x]].insert(place[y]);
        }
    }
    for row in rel.iter_mut() {
        row.insert(l.top());
    }
    for x in 0..total {
        rel[l.bottom()].insert(x);
    }
    let lattice = FiniteLattice::from_relation(labels, rel).expect("horizontal sum is a lattice");
    let mut ortho: Vec<usize> = (0..n).map(|x| l.ortho(x)).collect();
    ortho.resize(total, 0);
    for y in 0..r.len() {
        ortho[place[y]] = place[r.ortho(y)];
    }
    FiniteOml::new(lattice, ortho).expect("complement is total")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(catalog("boolean:1").unwrap().len(), 2);
        assert_eq!(catalog("boolean:4").unwrap().len(), 16);
        assert_eq!(catalog("mo:2").unwrap().len(), 6);
        assert_eq!(catalog("mo:4").unwrap().len(), 10);
        assert_eq!(catalog("benzene").unwrap().len(), 6);
        assert_eq!(catalog("zero").unwrap().len(), 1);
        assert_eq!(catalog("product(boolean:1,mo:2)").unwrap().len(), 12);
        assert_eq!(catalog("product(mo:1, product(boolean:1,boolean:1))").unwrap().len(), 16);
        assert_eq!(catalog("hsum(boolean:2,boolean:2)").unwrap().len(), 6);
    }

    #[test]
    fn boolean_one_is_a_chain() {
        let b1 = catalog("boolean:1").unwrap();
        assert_eq!(b1.labels(), ["0", "1"]);
        assert!(b1.leq(0, 1));
        assert_eq!(b1.ortho(0), 1);
    }

    #[test]
    fn mo2_is_orthomodular() {
        let mo2 = catalog("mo:2").unwrap();
        assert!(mo2.check().passed);
        assert_eq!(mo2.covers().len(), 8);
    }

    #[test]
    fn benzene_is_ortho_but_not_orthomodular() {
        let r = catalog("benzene").unwrap().check();
        assert!(!r.passed);
        assert!(r.violations.iter().all(|v| v.axiom == "orthomodular"));
    }

    #[test]
    fn constructions_preserve_orthomodularity() {
        for spec in [
            "product(boolean:1,mo:2)",
            "product(mo:2,mo:1)",
            "horizontal_sum(boolean:2,mo:2)",
            "hsum(boolean:3,boolean:2)",
        ] {
            assert!(catalog(spec).unwrap().check().passed, "{spec}");
        }
        assert!(!catalog("product(benzene,boolean:1)").unwrap().check().passed);
    }

    #[test]
    fn hsum_of_two_squares_is_mo2() {
        let h = catalog("hsum(boolean:2,boolean:2)").unwrap();
        assert_eq!(h.labels(), ["0", "a", "b", "1", "a#2", "b#2"]);
        assert_eq!(h.covers().len(), 8);
        assert_eq!(h.ortho(4), 5);
    }

    #[test]
    fn errors() {
        assert!(matches!(catalog("boolean:5"), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(catalog("mo:0"), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(catalog("mo"), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(catalog("benzene:2"), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(catalog("hexagon"), Err(Error::UnknownCatalogEntry(_))));
        assert!(matches!(catalog("product(zero)"), Err(Error::UnknownCatalogEntry(_))));
        assert!(matches!(catalog("tensor(zero,zero)"), Err(Error::UnknownCatalogEntry(_))));
    }
}
