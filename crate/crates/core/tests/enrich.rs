use std::collections::BTreeMap;
use std::sync::Arc;

use duofreyd::duoidal::{
    finset_cartesian_duoidal, finset_cocartesian_duoidal, label_duoidal, label_obj, subset_duoidal, subset_obj, Duoidal, LawCfg,
};
use duofreyd::enrich::*;
use duofreyd::finset::{Elem, FinSet};
use duofreyd::freyd::{freyd_probes, to_subset_freyd};
use duofreyd::mcat::{MCat, TypeObj};
use duofreyd::resources::*;
use duofreyd::sepmonoid::pf_sep_monoid;
use duofreyd::vfreyd::{check_vfreyd, check_vfreyd_morphism, identity_vfreyd_mor, VFreyd, VfCfg};

fn res(names: &[&str]) -> FinSet {
    FinSet::from_strs(names).unwrap()
}

fn l(names: &[&str]) -> Elem {
    Elem::list(names.iter().map(|n| Elem::atom(n)).collect())
}

fn probes_of(f: &DoubleLaxFunctor) -> Vec<duofreyd::duoidal::Obj> {
    f.src.probe_objects(2)
}

#[test]
fn identity_functor_passes() {
    for v in [Arc::new(subset_duoidal()) as Arc<dyn Duoidal>, Arc::new(label_duoidal(&pf_sep_monoid(&res(&["x"]))).unwrap())] {
        let f = identity_functor(v);
        let r = check_double_lax(&f, &probes_of(&f), &DlCfg::default());
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn sep_hom_functors_pass() {
    let m = pf_sep_monoid(&res(&["x"]));
    let ident: BTreeMap<Elem, Elem> = m.carrier.clone().unwrap().iter().map(|e| (e.clone(), e.clone())).collect();
    let id_hom = SepHom::from_table("id", m.clone(), m.clone(), ident);
    for phi in [id_hom, pf_bang(&res(&["x"])), pf_bang(&res(&["x", "y"]))] {
        let f = sep_hom_functor(&phi).unwrap();
        let r = check_double_lax(&f, &probes_of(&f), &DlCfg::default());
        assert!(r.passed(), "{r}");
        if phi.src.carrier.as_ref().unwrap().len() == 2 {
            assert!(r.families.values().all(|fam| fam.exhaustive), "{r}");
        }
    }
}

#[test]
fn sep_hom_preconditions() {
    let m = pf_sep_monoid(&res(&["x"]));
    let to_unit = SepHom { name: "cst".into(), src: m.clone(), dst: m.clone(), map: Arc::new(|_| Elem::list(vec![])) };
    match sep_hom_functor(&to_unit) {
        Err(EnrichError::NotReflecting(w)) => assert!(w.contains("[x]"), "{w}"),
        other => panic!("{:?}", other.map(|f| f.name)),
    }
    let m2 = pf_sep_monoid(&res(&["x", "y"]));
    let table: BTreeMap<Elem, Elem> =
        [(l(&[]), l(&[])), (l(&["x"]), l(&["x"])), (l(&["y"]), l(&[])), (l(&["x", "y"]), l(&[]))].into_iter().collect();
    let bad = SepHom::from_table("bad", m2.clone(), m2, table);
    assert!(matches!(sep_hom_functor(&bad), Err(EnrichError::NotHomomorphism(_))));
}

#[test]
fn unreflected_relabelling_breaks_zeta_square() {
    let m = pf_sep_monoid(&res(&["x"]));
    let to_unit = SepHom { name: "cst".into(), src: m.clone(), dst: m, map: Arc::new(|_| Elem::list(vec![])) };
    let f = sep_hom_functor_unchecked(&to_unit).unwrap();
    let r = check_double_lax(&f, &probes_of(&f), &DlCfg::default());
    let failing = r.failing_laws();
    assert!(failing.contains(&"zeta-square".to_string()), "{failing:?}");
    assert!(failing.contains(&"mu-par-valid".to_string()), "{failing:?}");
}

#[test]
fn table_files_parse() {
    let m = pf_sep_monoid(&res(&["x"]));
    let phi = SepHom::parse_table("collapse", m.clone(), "target *\n[] -> []\n[x] -> [*]  # the only resource\n").unwrap();
    assert!(phi.check().is_ok());
    assert!(matches!(SepHom::parse_table("t", m.clone(), "target *\n[] -> []\n"), Err(EnrichError::Table { .. })));
    assert!(matches!(SepHom::parse_table("t", m, "[] -> []\n[x] -> [*]\n"), Err(EnrichError::Table { .. })));
}

#[test]
fn forgetful_functor_counts_and_coherence() {
    let zoo: Vec<Arc<dyn Duoidal>> = vec![
        Arc::new(subset_duoidal()),
        Arc::new(label_duoidal(&pf_sep_monoid(&res(&["x"]))).unwrap()),
        Arc::new(finset_cartesian_duoidal()),
        Arc::new(finset_cocartesian_duoidal()),
    ];
    for v in zoo {
        let left = forgetful_functor(v.clone(), UnitorSide::Left).unwrap();
        let right = forgetful_functor(v.clone(), UnitorSide::Right).unwrap();
        let probes = v.probe_objects(2);
        for f in [&left, &right] {
            let r = check_double_lax(f, &probes, &DlCfg::default());
            assert!(r.passed(), "{r}");
        }
        let agree = functors_agree(&left, &right, &probes, &DlCfg::default());
        assert!(agree.passed(), "{agree}");
        // η∘(⋆) = ε
        let eps = v.eps();
        let js = v.par_unit().elements(8).unwrap();
        assert_eq!(left.eta_seq.apply(&Elem::star()), Elem::list(js.iter().map(|j| eps.apply(j)).collect()));
    }

    // Subset: V((1,1), (X,A)) ≅ X
    let s: Arc<dyn Duoidal> = Arc::new(subset_duoidal());
    let f = forgetful_functor(s, UnitorSide::Left).unwrap();
    let a = FinSet::from_strs(&["p", "q", "r"]).unwrap();
    let xa = subset_obj(&[Elem::atom("p"), Elem::atom("r")], &a);
    let pts = f.on_obj(&xa).elements(16).unwrap();
    assert_eq!(pts, vec![l(&["p"]), l(&["r"])]);

    // Label: V(cst_e, ℓ) ≅ elements labelled e
    let lab: Arc<dyn Duoidal> = Arc::new(label_duoidal(&pf_sep_monoid(&res(&["x"]))).unwrap());
    let f = forgetful_functor(lab, UnitorSide::Right).unwrap();
    let obj = label_obj(&a, vec![l(&["x"]), l(&[]), l(&[])]);
    assert_eq!(f.on_obj(&obj).elements(16).unwrap(), vec![l(&["q"]), l(&["r"])]);
}

#[test]
fn forgetful_change_of_resources_gives_pure_maps() {
    let base = MCat::new(vec![("bit".into(), FinSet::range(2)), ("tri".into(), FinSet::range(3))]);
    let ctx = ResourceCtx::new(vec![("x".into(), FinSet::range(2))], base);
    let types = [TypeObj::unit(), TypeObj::base("bit"), TypeObj::base("tri")];
    let c = build_resource_variant(&ctx, &types, ResourceVariant::Sound, 1 << 20).unwrap();
    let f = Arc::new(forgetful_functor(c.v(), UnitorSide::Left).unwrap());
    let u = change_enrichment(f, Arc::new(c)).unwrap();
    let sizes = [1u128, 2, 3];
    for (a, na) in types.iter().zip(sizes) {
        for (b, nb) in types.iter().zip(sizes) {
            assert_eq!(u.hom(a, b).count(), nb.pow(na as u32), "{a} → {b}");
        }
    }
    let small = [TypeObj::unit(), TypeObj::base("bit")];
    let r = check_vfreyd(&u, &small, &VfCfg::default());
    assert!(r.passed(), "{r}");
}

#[test]
fn sep_hom_change_restricts_par() {
    let ctx = ResourceCtx::bits(2);
    let e = TypeObj::unit();
    let c = Arc::new(build_resource_vfreyd(&ctx, &[e.clone()]).unwrap());
    let f = Arc::new(sep_hom_functor(&pf_bang(&ctx.names())).unwrap());
    let changed = change_enrichment(f, c.clone()).unwrap();
    let h = c.hom(&e, &e);
    let xs = h.elements(1 << 12).unwrap();
    let empty = |x: &Elem| h.grade_of(x) == Some(Elem::list(vec![]));
    let (mut accepted, mut rejected) = (0, 0);
    for x in &xs {
        for y in &xs {
            let before = try_par(&*c, &e, &e, &e, &e, x, y);
            let after = try_par(&changed, &e, &e, &e, &e, x, y);
            if empty(x) || empty(y) {
                assert_eq!(after, before);
                assert!(after.is_some());
                accepted += 1;
            } else {
                assert_eq!(after, None, "{x} ∥ {y}");
                rejected += 1;
            }
        }
    }
    // 265 maps, one of them label-free
    assert_eq!((accepted, rejected), (2 * 265 - 1, 264 * 264));
    let flipx = c.elem(&StateMap { label: vec![0], a: e.clone(), b: e.clone(), table: vec![1, 0] });
    let flipy = c.elem(&StateMap { label: vec![1], a: e.clone(), b: e.clone(), table: vec![1, 0] });
    assert!(try_par(&*c, &e, &e, &e, &e, &flipx, &flipy).is_some());
    assert!(try_par(&changed, &e, &e, &e, &e, &flipx, &flipy).is_none());
}

#[test]
fn sep_hom_change_passes_vfreyd_suite() {
    let types = [TypeObj::unit(), TypeObj::base("bit")];
    let ctx = ResourceCtx::bits(1);
    let c = Arc::new(build_resource_vfreyd(&ctx, &types).unwrap());
    let f = Arc::new(sep_hom_functor(&pf_bang(&ctx.names())).unwrap());
    let changed = change_enrichment(f, c).unwrap();
    let r = check_vfreyd(&changed, &types, &VfCfg::default());
    assert!(r.passed(), "{r}");
}

#[test]
fn identity_change_is_unchanged() {
    let types = [TypeObj::unit(), TypeObj::base("bit")];
    let c = Arc::new(build_resource_vfreyd(&ResourceCtx::bits(1), &types).unwrap());
    let id = Arc::new(identity_functor(c.v()));
    let same = change_enrichment(id, c.clone()).unwrap();
    let r = vfreyd_agree(&same, &*c, &types, &LawCfg::default());
    assert!(r.passed(), "{r}");
    assert_eq!(hom_profile(&same, &types), hom_profile(&*c, &types));
}

#[test]
fn change_along_composite_is_composite_of_changes() {
    let types = [TypeObj::unit(), TypeObj::base("bit")];
    let ctx = ResourceCtx::bits(1);
    let c: Arc<dyn VFreyd> = Arc::new(build_resource_vfreyd(&ctx, &types).unwrap());
    let f = sep_hom_functor(&pf_bang(&ctx.names())).unwrap();
    let g = forgetful_functor(f.dst.clone(), UnitorSide::Left).unwrap();
    let gf = compose_functors(&f, &g).unwrap();
    let probes = f.src.probe_objects(2);
    let r = check_double_lax(&gf, &probes, &DlCfg::default());
    assert!(r.passed(), "{r}");
    let once = change_enrichment(Arc::new(gf), c.clone()).unwrap();
    let twice = change_enrichment(Arc::new(g), Arc::new(change_enrichment(Arc::new(f), c).unwrap())).unwrap();
    let r = vfreyd_agree(&once, &twice, &types, &LawCfg::default());
    assert!(r.passed(), "{r}");
}

#[test]
fn forgetful_change_of_free_subset_freyd() {
    let s: Arc<dyn Duoidal> = Arc::new(subset_duoidal());
    let f = Arc::new(forgetful_functor(s, UnitorSide::Left).unwrap());
    for p in freyd_probes() {
        let sf: Arc<dyn VFreyd> = Arc::new(to_subset_freyd(&p));
        let types = sf.type_probes();
        let u = change_enrichment(f.clone(), sf.clone()).unwrap();
        let r = check_vfreyd(&u, &types, &VfCfg::default());
        assert!(r.passed(), "{r}");
        for a in &types {
            for b in &types {
                let mut image: Vec<Elem> = p.m.hom(a, b).iter().map(|m| p.j[m].repr.clone()).collect();
                image.sort();
                image.dedup();
                assert_eq!(u.hom(a, b).count(), image.len() as u128, "{} {a} → {b}", p.name);
            }
        }
        let m = change_morphism(f.clone(), &identity_vfreyd_mor(sf));
        let r = check_vfreyd_morphism(&m, &u, &u, &types, &VfCfg::default());
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn mismatched_enrichment_is_rejected() {
    let c: Arc<dyn VFreyd> = Arc::new(build_resource_vfreyd(&ResourceCtx::bits(1), &[TypeObj::unit()]).unwrap());
    let f = Arc::new(identity_functor(Arc::new(subset_duoidal())));
    assert!(matches!(change_enrichment(f, c), Err(EnrichError::Mismatch(_))));
}
