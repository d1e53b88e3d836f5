use std::sync::Arc;

use duofreyd::duoidal::*;
use duofreyd::finset::{Elem, FinSet};
use duofreyd::sepmonoid::{drop_separation, pf_sep_monoid};

fn a(n: &str) -> Elem {
    Elem::atom(n)
}

fn elems(o: &Obj) -> Vec<String> {
    o.elements(1 << 12).unwrap().iter().map(|e| e.to_string()).collect()
}

#[test]
fn disjunctive_product_by_hand() {
    let v = subset_duoidal();
    let x = subset_obj(&[a("a0")], &FinSet::new(vec![a("a0"), a("a1")]).unwrap());
    let y = subset_obj(&[a("b0")], &FinSet::new(vec![a("b0"), a("b1")]).unwrap());
    let xy = v.par(&x, &y);
    let mut got = elems(&xy);
    got.sort();
    assert_eq!(got, vec!["(a0,b0)", "(a0,b1)", "(a1,b0)"]);
    let dist: Vec<String> = xy
        .elements(64)
        .unwrap()
        .into_iter()
        .filter(|e| xy.grade_of(e) == Some(IN))
        .map(|e| e.to_string())
        .collect();
    assert_eq!(dist, vec!["(a0,b0)"]);
}

#[test]
fn label_parallel_restricts() {
    let m = pf_sep_monoid(&FinSet::from_strs(&["x", "y"]).unwrap());
    let v = label_duoidal(&m).unwrap();
    let lx = Elem::list(vec![a("x")]);
    let ly = Elem::list(vec![a("y")]);
    let p = label_obj(&FinSet::from_strs(&["p"]).unwrap(), vec![lx.clone()]);
    let q = label_obj(&FinSet::from_strs(&["q"]).unwrap(), vec![ly.clone()]);
    let pq = v.par(&p, &q);
    assert_eq!(elems(&pq), vec!["(p,q)"]);
    assert_eq!(pq.grade_of(&Elem::pair(a("p"), a("q"))), Some(Elem::list(vec![a("x"), a("y")])));
    let q2 = label_obj(&FinSet::from_strs(&["q"]).unwrap(), vec![lx]);
    assert_eq!(v.par(&p, &q2).count(), 0);
    assert_eq!(v.seq(&p, &q2).count(), 1);
}

#[test]
fn label_rejects_broken_monoid() {
    let m = pf_sep_monoid(&FinSet::from_strs(&["x"]).unwrap());
    let bad = drop_separation(&m, Elem::list(vec![]), Elem::list(vec![a("x")]));
    assert!(label_duoidal(&bad).is_err());
}

fn assert_laws(v: &dyn Duoidal) {
    let rep = check_duoidal_laws(v, &default_probes(v));
    assert!(rep.passed(), "{rep}");
    assert!(rep.total_instances() > 0);
}

#[test]
fn finset_cartesian_laws() {
    assert_laws(&finset_cartesian_duoidal());
}

#[test]
fn finset_cocartesian_laws() {
    assert_laws(&finset_cocartesian_duoidal());
}

#[test]
fn subset_laws() {
    assert_laws(&subset_duoidal());
}

#[test]
fn label_laws_one_resource() {
    let m = pf_sep_monoid(&FinSet::from_strs(&["x"]).unwrap());
    assert_laws(&label_duoidal(&m).unwrap());
}

#[test]
fn opposite_laws() {
    assert_laws(&opposite_duoidal(Arc::new(subset_duoidal())));
    assert_laws(&opposite_duoidal(Arc::new(finset_cartesian_duoidal())));
}

#[test]
fn opposite_swaps_units() {
    let v = subset_duoidal();
    let op = opposite_duoidal(Arc::new(v.clone()));
    assert_eq!(op.par_unit(), v.seq_unit());
    assert_eq!(op.seq_unit(), v.par_unit());
    let opop = opposite_duoidal(Arc::new(op));
    for x in v.probe_objects(1) {
        for y in v.probe_objects(1) {
            assert_eq!(opop.par(&x, &y), v.par(&x, &y));
            assert_eq!(opop.seq(&x, &y), v.seq(&x, &y));
        }
    }
}

#[test]
fn products_construction() {
    for p in [finset_products(), subset_products()] {
        let v = duoidal_from_products(&p).unwrap();
        assert_laws(&v);
    }
}

#[test]
fn subset_zeta_injective_not_surjective() {
    let v = subset_duoidal();
    let probes = default_probes(&v);
    for x in probes.iter().take(4) {
        for y in &probes {
            let (inj, _, _) = zeta_injective_surjective(&v, x, y, y, x);
            assert!(inj);
        }
    }
    let w = find_zeta_non_surjective(&v, &probes).expect("witness");
    let keys: Vec<&str> = w.objects.iter().map(|o| o.key()).collect();
    assert_eq!(keys, vec!["{a0:0}", "{a0:1}", "{a0:1}", "{a0:0}"]);
}

#[test]
fn mutants_fail() {
    let s = subset_duoidal();
    for m in [mutant_zeta_unrestricted(&s), mutant_broken_delta(&s), mutant_zeta_swapped(&s)] {
        let rep = check_duoidal_laws(&m, &default_probes(&m));
        assert!(!rep.passed(), "{} passed", m.name);
    }
}
