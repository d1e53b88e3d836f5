use std::sync::Arc;

use duofreyd::duoidal::Duoidal;
use duofreyd::finset::Elem;
use duofreyd::freyd::*;
use duofreyd::mcat::{BMor, TypeObj};
use duofreyd::vfreyd::{check_derived_lemmas, check_vfreyd, VFreyd, VfCfg};

fn load(name: &str) -> (FreydCat, Vec<BMor>) {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("freyd").join(name);
    load_freyd_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn one(w: usize) -> Elem {
    Elem::list(vec![Elem::pair(Elem::Int(0), Elem::Int(w as i64))])
}

#[test]
fn probes_are_freyd_categories() {
    for p in freyd_probes() {
        let r = check_freyd(&p, &FreydCfg::default());
        assert!(r.passed(), "{r}");
    }
    let (z2, _) = load("z2.json");
    let r = check_freyd(&z2, &FreydCfg::default());
    assert!(r.passed(), "{r}");
}

#[test]
fn noncentral_j_is_caught() {
    let r = check_freyd(&noncentral_j_mutant(), &FreydCfg::default());
    assert_eq!(r.failing_laws(), vec!["j-central".to_string()]);
}

#[test]
fn centres() {
    let ps = freyd_probes();
    let e = TypeObj::unit();
    for p in &ps {
        for a in &p.c.objects {
            assert!(p.c.is_central(p.c.id(a).unwrap()).is_ok());
        }
    }
    assert_eq!(ps[1].c.centre().len(), 2);
    let mut d4: Vec<Elem> = ps[2].c.centre().into_iter().map(|m| m.repr).collect();
    d4.sort();
    assert_eq!(d4, vec![one(0), one(2)]);
    // left-zero writer: exactly the pure maps, |b|^|a| per hom
    let lz = &ps[3].c;
    let bit = TypeObj::base("bit");
    let centre = lz.centre();
    for (a, b, n) in [(&e, &e, 1), (&e, &bit, 2), (&bit, &e, 1), (&bit, &bit, 4)] {
        assert_eq!(centre.iter().filter(|m| m.src == *a && m.tgt == *b).count(), n, "{a} → {b}");
    }
    let (z2, _) = load("z2.json");
    assert_eq!(z2.c.centre().len(), 2);
}

#[test]
fn free_images_pass_vfreyd_suite() {
    for p in freyd_probes() {
        let f = to_subset_freyd(&p);
        let types = f.type_probes();
        let r = check_vfreyd(&f, &types, &VfCfg::default());
        assert!(r.passed(), "{r}");
        let l = check_derived_lemmas(&f, &types, &VfCfg::default());
        assert!(l.passed(), "{l}");
        for a in &types {
            for b in &types {
                let h = f.hom(a, b);
                let dist: Vec<Elem> = h.elements(1 << 16).unwrap().into_iter().filter(|x| h.grade_of(x) == Some(duofreyd::duoidal::IN)).collect();
                let mut image: Vec<Elem> = p.m.hom(a, b).iter().map(|m| p.j[m].repr.clone()).collect();
                image.sort();
                image.dedup();
                let mut dist = dist;
                dist.sort();
                assert_eq!(dist, image);
            }
        }
    }
}

#[test]
fn par_needs_a_distinguished_side() {
    let p = &freyd_probes()[2];
    let f = to_subset_freyd(p);
    let e = TypeObj::unit();
    let h = f.hom(&e, &e);
    let dom = f.v().par(&h, &h);
    assert!(!dom.contains(&Elem::pair(one(1), one(4))));
    assert!(dom.contains(&Elem::pair(one(0), one(4))));
    assert!(dom.contains(&Elem::pair(one(1), one(0))));
}

#[test]
fn forgetful_after_free_is_identity() {
    for p in freyd_probes() {
        let u = from_subset_freyd(&to_subset_freyd(&p), &UCfg::default()).unwrap();
        assert_eq!(u.diff(&p), None, "{}", p.name);
    }
}

#[test]
fn adjunction_and_coreflection() {
    let probes = freyd_probes();
    let (z2, extra) = load("z2_distinguished.json");
    assert_eq!(extra.len(), 1);
    let marked = Arc::new(SubsetFreyd::new(&z2, &extra));
    let types = marked.type_probes();
    let r = check_vfreyd(&*marked, &types, &VfCfg::default());
    assert!(r.passed(), "{r}");

    let mut subs: Vec<Arc<SubsetFreyd>> = probes.iter().map(|p| Arc::new(to_subset_freyd(p))).collect();
    subs.push(marked.clone());
    let rep = check_adjunction(&probes, &subs, &AdjCfg::default());
    assert!(rep.passed(), "{rep}");

    let cfg = UCfg::default();
    for s in &subs[..probes.len()] {
        assert_eq!(coreflection_witness(&**s, &cfg).unwrap(), None);
    }
    let w = coreflection_witness(&*marked, &cfg).unwrap().expect("t is distinguished but not pure");
    assert!(w.starts_with("t "), "{w}");
    let fu = to_subset_freyd(&from_subset_freyd(&*marked, &cfg).unwrap());
    assert!(counit_inverse_valid(&*marked, &fu, &Default::default()).is_err());
}

#[test]
fn forgetful_rejects_other_enrichments() {
    let c = duofreyd::resources::build_resource_vfreyd(&duofreyd::resources::ResourceCtx::bits(1), &[TypeObj::unit()]).unwrap();
    assert!(matches!(from_subset_freyd(&c, &UCfg::default()), Err(FreydError::NotSubset(_))));
}
