use std::sync::Arc;

use omlq::{
    build_lattice, catalog, check_oml, compose, enumerate_lin, is_linear, verify_adjoint_pair,
    FiniteOml, LinMap, DEFAULT_CAP,
};
use proptest::prelude::*;
use proptest::sample::select;

const OMLS: &[&str] = &[
    "zero",
    "boolean:1",
    "boolean:2",
    "boolean:3",
    "mo:1",
    "mo:2",
    "mo:3",
    "product(boolean:1,mo:2)",
    "hsum(boolean:2,mo:2)",
    "hsum(mo:1,boolean:3)",
];

/// Hosts small enough to enumerate `Lin(X)` per case.
const SMALL: &[&str] = &["boolean:1", "boolean:2", "mo:1", "mo:2", "hsum(boolean:2,boolean:2)"];

fn oml(spec: &str) -> Arc<FiniteOml> {
    Arc::new(catalog(spec).unwrap())
}

/// `x` with its elements listed in the order given by `perm` and renamed.
fn permuted(x: &FiniteOml, perm: &[usize]) -> FiniteOml {
    let name = |i: usize| format!("e{i}");
    let labels: Vec<String> = perm.iter().map(|&i| name(i)).collect();
    let pairs: Vec<(String, String)> = x
        .order_pairs()
        .into_iter()
        .map(|(a, b)| (name(x.element(&a).unwrap()), name(x.element(&b).unwrap())))
        .collect();
    let lattice = build_lattice(&labels, &pairs).unwrap();
    let ortho: Vec<(String, String)> = (0..x.len()).map(|i| (name(i), name(x.ortho(i)))).collect();
    FiniteOml::from_label_pairs(lattice, &ortho).unwrap()
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn de_morgan(spec in select(OMLS), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let x = oml(spec);
        let (a, b) = (i.index(x.len()), j.index(x.len()));
        prop_assert_eq!(x.ortho(x.join(a, b)), x.meet(x.ortho(a), x.ortho(b)));
        prop_assert_eq!(x.ortho(x.meet(a, b)), x.join(x.ortho(a), x.ortho(b)));
    }

    #[test]
    fn sasaki_projection_facts(spec in select(OMLS), i in any::<prop::sample::Index>(),
                               j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let x = oml(spec);
        let n = x.len();
        let (a, y, z) = (i.index(n), j.index(n), k.index(n));
        let p = |v| x.sasaki(a, v);
        prop_assert_eq!(p(p(y)), p(y));
        prop_assert!(x.leq(p(y), a));
        prop_assert_eq!(x.leq(y, a), p(y) == y);
        prop_assert_eq!(p(y) == x.bottom(), x.leq(y, x.ortho(a)));
        prop_assert_eq!(x.ortho_pair(p(y), z), x.ortho_pair(y, p(z)));
    }

    #[test]
    fn relabelling_preserves_verdicts((spec, perm) in select(OMLS).prop_flat_map(|s| (Just(s), permutation(oml(s).len())))) {
        let x = oml(spec);
        let y = permuted(&x, &perm);
        prop_assert_eq!(y.check().passed, x.check().passed);
        prop_assert_eq!(y.check_sasaki_facts().passed, x.check_sasaki_facts().passed);
        prop_assert_eq!(y.covers().len(), x.covers().len());
        for a in 0..x.len() {
            let ya = y.element(&format!("e{a}")).unwrap();
            for b in 0..x.len() {
                let yb = y.element(&format!("e{b}")).unwrap();
                prop_assert_eq!(y.label(y.join(ya, yb)), format!("e{}", x.join(a, b)));
                prop_assert_eq!(y.label(y.sasaki(ya, yb)), format!("e{}", x.sasaki(a, b)));
            }
        }
    }

    #[test]
    fn dagger_laws(spec in select(SMALL), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let x = oml(spec);
        let maps = enumerate_lin(&x, &x, DEFAULT_CAP).unwrap();
        let f = &maps[i.index(maps.len())];
        let g = &maps[j.index(maps.len())];
        let fd = f.dagger();
        prop_assert!(verify_adjoint_pair(f, &fd).unwrap().passed);
        prop_assert_eq!(&fd.dagger(), f);
        let gf = compose(g, f).unwrap();
        prop_assert_eq!(gf.dagger(), compose(&fd, &g.dagger()).unwrap());
        prop_assert!(is_linear(&x, &x, gf.values()).unwrap());
    }
}

#[test]
fn benzene_verdict_survives_relabelling() {
    let x = oml("benzene");
    let perm = vec![5, 3, 0, 1, 4, 2];
    let y = permuted(&x, &perm);
    assert!(!check_oml(y.lattice(), y.ortho_table()).passed);
    let v = y.check().violation("orthomodular").cloned().unwrap();
    // the witness pair must violate the law under the relabelled tables too
    let a = y.element(&v.witness[0]).unwrap();
    let b = y.element(&v.witness[1]).unwrap();
    assert!(y.leq(a, b) && y.join(a, y.meet(y.ortho(a), b)) != b);
}

#[test]
fn adjoint_is_unique() {
    for spec in ["boolean:2", "mo:2"] {
        let x = oml(spec);
        let maps = enumerate_lin(&x, &x, DEFAULT_CAP).unwrap();
        for f in &maps {
            let partners = maps
                .iter()
                .filter(|h| verify_adjoint_pair(f, h).unwrap().passed)
                .count();
            assert_eq!(partners, 1, "{spec} {f:?}");
        }
    }
}

#[test]
fn projections_are_self_adjoint_idempotents() {
    let x = oml("mo:3");
    for a in 0..x.len() {
        let p = LinMap::sasaki(&x, a);
        assert!(p.is_self_adjoint() && p.is_idempotent());
        let mut image = p.image();
        image.sort_unstable();
        let down: Vec<usize> = (0..x.len()).filter(|&y| x.leq(y, a)).collect();
        assert_eq!(image, down);
    }
}
