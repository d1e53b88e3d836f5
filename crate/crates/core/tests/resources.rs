use std::path::PathBuf;
use std::time::Instant;

use duofreyd::finset::{Elem, FinSet};
use duofreyd::mcat::TypeObj;
use duofreyd::resources::*;
use duofreyd::vfreyd::{check_derived_lemmas, check_vfreyd, VFreyd, VfCfg};

fn flip(r: usize) -> StateMap {
    StateMap { label: vec![r], a: TypeObj::unit(), b: TypeObj::unit(), table: vec![1, 0] }
}

fn programs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs")
}

fn load(name: &str) -> ProgramFile {
    ProgramFile::parse(&std::fs::read_to_string(programs_dir().join(name)).unwrap()).unwrap()
}

/// `Σ_Q |b × Π_Q|^{|a × Π_Q|}`, counted over subsets of bit-valued resources.
fn count_oracle(n_res: u32, na: u128, nb: u128) -> u128 {
    (0..1u32 << n_res).map(|m| 2u128.pow(m.count_ones())).map(|s| (nb * s).pow((na * s) as u32)).sum()
}

#[test]
fn hom_carrier_sizes() {
    let (e, bit) = (TypeObj::unit(), TypeObj::base("bit"));
    let c = build_resource_vfreyd(&ResourceCtx::bits(1), &[e.clone(), bit.clone()]).unwrap();
    let total = |a: &TypeObj, b: &TypeObj| c.hom_counts(a, b).iter().map(|(_, n)| n).sum::<u128>();
    assert_eq!(total(&e, &e), 5);
    assert_eq!(c.hom_counts(&e, &e), vec![("[]".to_string(), 1), ("[x]".to_string(), 4)]);
    assert_eq!(total(&e, &bit), 18);
    assert_eq!(total(&bit, &e), 17);
    assert_eq!(total(&bit, &bit), 260);
    for (a, na) in [(&e, 1), (&bit, 2)] {
        for (b, nb) in [(&e, 1), (&bit, 2)] {
            assert_eq!(total(a, b), count_oracle(1, na, nb));
        }
    }
    let c2 = build_resource_vfreyd(&ResourceCtx::bits(2), &[e.clone()]).unwrap();
    assert_eq!(c2.hom_counts(&e, &e).iter().map(|(_, n)| n).sum::<u128>(), 265);
}

#[test]
fn budget_is_enforced() {
    let err = build_resource_vfreyd(&ResourceCtx::bits(2), &[TypeObj::base("bit")]).unwrap_err();
    assert!(matches!(err, ResError::Budget { .. }), "{err}");
}

#[test]
fn lift_flip_fixes_other_resource() {
    let ctx = ResourceCtx::bits(2);
    let f = flip(0);
    let l = lift(&ctx, &f, &[0, 1]).unwrap();
    // states (x,y) as 2x+y: flipping x swaps 0<->2 and 1<->3
    assert_eq!(l.table, vec![2, 3, 0, 1]);
    assert_eq!(lift(&ctx, &f, &[0]).unwrap(), f);
    assert!(matches!(lift(&ctx, &f, &[1]), Err(ResError::LabelNotSubset { .. })));
    let p = idt_res(&ctx, &TypeObj::base("bit")).unwrap();
    assert_eq!(lift(&ctx, &p, &[0]).unwrap().table, vec![0, 1, 2, 3]);
}

#[test]
fn seq_and_par_examples() {
    let ctx = ResourceCtx::bits(2);
    let (fx, fy) = (flip(0), flip(1));
    let twice = seq_res(&ctx, &fx, &fx).unwrap();
    assert_eq!((twice.label.clone(), twice.table.clone()), (vec![0], vec![0, 1]));
    assert_eq!(seq_res(&ctx, &fx, &fy).unwrap().label, vec![0, 1]);
    let both = par_res(&ctx, &fx, &fy).unwrap();
    assert_eq!((both.label.clone(), both.table.clone()), (vec![0, 1], vec![3, 2, 1, 0]));
    match par_res(&ctx, &fx, &fx) {
        Err(ResError::Separation { overlap, .. }) => assert_eq!(overlap, vec!["x".to_string()]),
        other => panic!("{other:?}"),
    }
    let e = TypeObj::unit();
    assert_eq!(idt_res(&ctx, &e).unwrap(), zero_res());
    assert_eq!(seq_res(&ctx, &idt_res(&ctx, &e).unwrap(), &fx).unwrap(), fx);
    assert_eq!(par_res(&ctx, &fx, &idt_res(&ctx, &e).unwrap()).unwrap(), fx);
}

#[test]
fn exchange_on_tables() {
    let ctx = ResourceCtx::bits(2);
    let bit = TypeObj::base("bit");
    let files = load("inc_x.res");
    let f = elaborate(&files.ctx, &files.main).unwrap();
    let g = flip(1);
    let (ia, ib) = (idt_res(&ctx, &bit).unwrap(), idt_res(&ctx, &TypeObj::unit()).unwrap());
    let lhs = seq_res(&ctx, &par_res(&ctx, &f, &ib).unwrap(), &par_res(&ctx, &ia, &g).unwrap()).unwrap();
    let rhs = seq_res(&ctx, &par_res(&ctx, &ia, &g).unwrap(), &par_res(&ctx, &f, &ib).unwrap()).unwrap();
    assert_eq!(lhs, par_res(&ctx, &f, &g).unwrap());
    assert_eq!(rhs, lhs);
}

#[test]
fn run_examples() {
    let p = load("flip_twice.res");
    let r = run(&p.ctx, &p.main, &Elem::star(), &parse_store(&p.ctx, "x=0,y=1").unwrap()).unwrap();
    assert_eq!(r.store, vec![Elem::Int(0), Elem::Int(1)]);
    assert_eq!(r.label, vec!["x".to_string()]);

    let p = load("copy_not_x_to_y.res");
    let r = run(&p.ctx, &p.main, &Elem::star(), &parse_store(&p.ctx, "x=1,y=1").unwrap()).unwrap();
    assert_eq!(r.store, vec![Elem::Int(1), Elem::Int(0)]);

    let p = load("pure_not.res");
    let r = run(&p.ctx, &p.main, &Elem::Int(0), &parse_store(&p.ctx, "x=1,y=0").unwrap()).unwrap();
    assert_eq!((r.output, r.store, r.label.len()), (Elem::Int(1), vec![Elem::Int(1), Elem::Int(0)], 0));
}

#[test]
fn corpus_label_soundness() {
    let mut n = 0;
    for entry in std::fs::read_dir(programs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|s| s.to_str()) != Some("res") {
            continue;
        }
        let p = ProgramFile::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let (a, _, _) = check_program(&p.ctx, &p.main).unwrap();
        let inputs = p.ctx.base.value_set(&a).unwrap();
        for store in all_stores(&p.ctx) {
            for input in inputs.iter() {
                let r = run(&p.ctx, &p.main, input, &store).unwrap();
                for (i, (name, _)) in p.ctx.resources.iter().enumerate() {
                    if !r.label.contains(name) {
                        assert_eq!(r.store[i], store[i], "{} touched {name}", path.display());
                    }
                }
            }
        }
        n += 1;
    }
    assert!(n >= 20, "only {n} programs");
}

#[test]
fn rejected_programs_name_the_overlap() {
    let dir = programs_dir().join("rejected");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let p = ProgramFile::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let store = all_stores(&p.ctx).remove(0);
        let err = run(&p.ctx, &p.main, &Elem::star(), &store).unwrap_err();
        assert!(matches!(err, ResError::Separation { .. }), "{}: {err}", path.display());
        seen += 1;
    }
    assert!(seen >= 3);
    let p = load("rejected/nested.res");
    match check_program(&p.ctx, &p.main) {
        Err(ResError::Separation { path, overlap }) => {
            assert_eq!(path, "seq.1");
            assert_eq!(overlap, vec!["x".to_string()]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn parse_errors() {
    let bad = "resource x : {0,1}\nprim f : e -> e uses {x} table { * | x=0 -> * | x=1 }\nmain = f";
    assert!(matches!(ProgramFile::parse(bad), Err(ResError::Parse { line: 2, .. })));
    let bad = "type bit : {0,1}\nmain = seq(id bit, id e)";
    let p = ProgramFile::parse(bad).unwrap();
    assert!(matches!(check_program(&p.ctx, &p.main), Err(ResError::Type { .. })));
}

#[test]
fn hom_map_preserves_labels() {
    let bit = TypeObj::base("bit");
    let c = build_resource_vfreyd(&ResourceCtx::bits(1), &[TypeObj::unit(), bit.clone()]).unwrap();
    let base = c.base();
    let nots = base.homs(&bit, &bit, 16, 0);
    let h = c.hom(&bit, &bit);
    let hm = c.hom_map(&nots[1], &nots[2]);
    for x in h.probe(200, &mut duofreyd::duoidal::rng_for(1, "hm")).0 {
        assert_eq!(h.grade_of(&x), hm.tgt.grade_of(&hm.apply(&x)));
    }
}

#[test]
fn single_resource_instance_passes_everything() {
    let types = [TypeObj::unit(), TypeObj::base("bit")];
    let c = build_resource_vfreyd(&ResourceCtx::bits(1), &types).unwrap();
    let t = Instant::now();
    let r = check_vfreyd(&c, &types, &VfCfg::default());
    assert!(r.passed(), "{r}");
    let l = check_derived_lemmas(&c, &types, &VfCfg::default());
    assert!(l.passed(), "{l}");
    eprintln!("resource suite: {} + {} instances in {:?}", r.total_instances(), l.total_instances(), t.elapsed());
}

#[test]
fn resource_mutants_fail() {
    let types = [TypeObj::unit(), TypeObj::base("bit")];
    for (v, law) in [
        (ResourceVariant::ParUnseparated, "viii-exchange"),
        (ResourceVariant::SeqNoLift, "i-idt"),
        (ResourceVariant::HomMapAddsResource, "hom-map-valid"),
    ] {
        let c = build_resource_variant(&ResourceCtx::bits(1), &types, v, DEFAULT_BUDGET).unwrap();
        let r = check_vfreyd(&c, &types, &VfCfg::default());
        assert!(!r.passed(), "{v:?}");
        assert!(r.failing_laws().iter().any(|l| l.starts_with(law)), "{v:?}: {:?}", r.failing_laws());
    }
}

#[test]
fn resource_sets_beyond_bits() {
    let ctx = ResourceCtx::new(vec![("t".into(), FinSet::range(3))], duofreyd::mcat::bit_base());
    let f = StateMap { label: vec![0], a: TypeObj::unit(), b: TypeObj::unit(), table: vec![1, 2, 0] };
    let f3 = seq_res(&ctx, &seq_res(&ctx, &f, &f).unwrap(), &f).unwrap();
    assert_eq!(f3.table, vec![0, 1, 2]);
}
