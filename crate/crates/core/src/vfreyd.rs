//! V-Freyd categories over a strict monoidal base: a hom bifunctor into a
//! duoidal category with `idt`, `seq`, `zero` and `par`, the axiom checker,
//! the derived unitor/associator equations, and morphisms between them.

use std::collections::HashMap;
use std::sync::Arc;

use crate::duoidal::{chain, for_each_tuple, rng_for, Ctx, Duoidal, LawCfg, Mor, Obj};
use crate::finset::Elem;
use crate::mcat::{BMor, MonBase, TypeObj};
use crate::report::LawReport;

pub trait VFreyd: Send + Sync {
    fn name(&self) -> String;
    fn v(&self) -> Arc<dyn Duoidal>;
    fn base(&self) -> Arc<dyn MonBase>;
    fn hom(&self, a: &TypeObj, b: &TypeObj) -> Obj;
    /// `C(f, g) : C(a, b) → C(a', b')` for `f : a' → a` and `g : b → b'`.
    fn hom_map(&self, f: &BMor, g: &BMor) -> Mor;
    /// `I → C(a, a)`
    fn idt(&self, a: &TypeObj) -> Mor;
    /// `C(a, b) ∘ C(b, c) → C(a, c)`
    fn seq(&self, a: &TypeObj, b: &TypeObj, c: &TypeObj) -> Mor;
    /// `J → C(e, e)`
    fn zero(&self) -> Mor;
    /// `C(a1, b1) ∗ C(a2, b2) → C(a1⊕a2, b1⊕b2)`, or `None` when a tensor
    /// of the indices is missing from the base.
    fn par(&self, a1: &TypeObj, b1: &TypeObj, a2: &TypeObj, b2: &TypeObj) -> Option<Mor>;
    fn type_probes(&self) -> Vec<TypeObj>;
}

#[derive(Debug, Clone, Copy)]
pub struct VfCfg {
    pub law: LawCfg,
    /// Base morphisms enumerated per hom; larger homs are sampled.
    pub hom_limit: usize,
    /// Tuples of type indices per law; larger families are sampled.
    pub max_type_tuples: usize,
}

impl Default for VfCfg {
    fn default() -> Self {
        VfCfg { law: LawCfg::default(), hom_limit: 512, max_type_tuples: 256 }
    }
}

struct Env<'a> {
    c: &'a dyn VFreyd,
    v: Arc<dyn Duoidal>,
    base: Arc<dyn MonBase>,
    types: Vec<TypeObj>,
    cfg: VfCfg,
    homs: HashMap<(TypeObj, TypeObj), Vec<BMor>>,
}

impl<'a> Env<'a> {
    fn new(c: &'a dyn VFreyd, types: &[TypeObj], cfg: &VfCfg) -> Env<'a> {
        Env { c, v: c.v(), base: c.base(), types: types.to_vec(), cfg: *cfg, homs: HashMap::new() }
    }

    fn homs(&mut self, a: &TypeObj, b: &TypeObj) -> Vec<BMor> {
        let (base, lim, seed) = (self.base.clone(), self.cfg.hom_limit, self.cfg.law.probe.seed);
        self.homs.entry((a.clone(), b.clone())).or_insert_with(|| base.homs(a, b, lim, seed)).clone()
    }

    fn t(&self, a: &TypeObj, b: &TypeObj) -> Option<TypeObj> {
        self.base.tensor(a, b)
    }

    fn id(&self, a: &Obj) -> Mor {
        self.v.id(a)
    }
}

fn show(ts: &[&TypeObj]) -> String {
    ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

fn show_mors(ms: &[&BMor]) -> String {
    ms.iter().map(|m| format!("{m:?}")).collect::<Vec<_>>().join(", ")
}

/// Visits `k`-tuples of probe types; returns whether all were visited.
fn type_tuples(e: &Env, k: usize, seed_tag: &str, mut visit: impl FnMut(&[&TypeObj])) -> bool {
    let n = e.types.len();
    let mut rng = rng_for(e.cfg.law.probe.seed, seed_tag);
    let types = e.types.clone();
    for_each_tuple(&vec![n; k], e.cfg.max_type_tuples, &mut rng, |ix| {
        let ts: Vec<&TypeObj> = ix.iter().map(|&i| &types[i]).collect();
        visit(&ts);
    })
}

/// Morphism tuples allowed per type tuple, sharing the per-law budget.
fn mor_budget(e: &Env, k: usize) -> usize {
    let tuples = (e.types.len() as u128).pow(k as u32).min(e.cfg.max_type_tuples as u128) as usize;
    (e.cfg.law.max_morphism_instances / tuples.max(1)).max(1)
}

fn mor_tuples(e: &Env, lists: &[&Vec<BMor>], cap: usize, tag: &str, mut visit: impl FnMut(&[&BMor])) -> bool {
    let sizes: Vec<usize> = lists.iter().map(|l| l.len()).collect();
    let mut rng = rng_for(e.cfg.law.probe.seed, tag);
    for_each_tuple(&sizes, cap, &mut rng, |ix| {
        let ms: Vec<&BMor> = ix.iter().zip(lists).map(|(&i, l)| &l[i]).collect();
        visit(&ms);
    })
}

fn ctx<'v>(v: &'v dyn Duoidal, title: String, cfg: &VfCfg) -> Ctx<'v> {
    Ctx { v, r: LawReport::new(title), cfg: cfg.law, rng: rng_for(cfg.law.probe.seed, "vfreyd") }
}

/// Checks the hom bifunctor, (extra)naturality of the structure maps, and
/// axioms (i)–(viii), each on the given type probes.
pub fn check_vfreyd(c: &dyn VFreyd, types: &[TypeObj], cfg: &VfCfg) -> LawReport {
    let mut e = Env::new(c, types, cfg);
    let v = e.v.clone();
    let mut x = ctx(&*v, format!("V-Freyd axioms for {}", c.name()), cfg);
    x.r.note(format!("enriched in {}, base {}, types [{}]", v.name(), e.base.name(), show(&types.iter().collect::<Vec<_>>())));
    structure_validity(&mut e, &mut x);
    bifunctor_laws(&mut e, &mut x);
    naturality_laws(&mut e, &mut x);
    axioms(&mut e, &mut x);
    exchange_idt(&mut e, &mut x);
    x.r
}

fn structure_validity(e: &mut Env, x: &mut Ctx) {
    let c = e.c;
    x.valid("zero-valid", &|| String::new(), &c.zero(), true);
    let ex = type_tuples(e, 1, "idt-valid", |t| x.valid("idt-valid", &|| show(t), &c.idt(t[0]), true));
    mark(x, "idt-valid", ex);
    let ex = type_tuples(e, 3, "seq-valid", |t| x.valid("seq-valid", &|| show(t), &c.seq(t[0], t[1], t[2]), true));
    mark(x, "seq-valid", ex);
    let ex = type_tuples(e, 4, "par-valid", |t| {
        if let Some(p) = c.par(t[0], t[1], t[2], t[3]) {
            x.valid("par-valid", &|| show(t), &p, true)
        }
    });
    mark(x, "par-valid", ex);
}

/// Downgrades a family to sampled when its type tuples were sampled.
fn mark(x: &mut Ctx, law: &str, exhaustive: bool) {
    if !exhaustive {
        if let Some(f) = x.r.families.get_mut(law) {
            f.exhaustive = false;
        }
    }
}

fn bifunctor_laws(e: &mut Env, x: &mut Ctx) {
    let c = e.c;
    let base = e.base.clone();
    let ex = type_tuples(e, 2, "hom-id", |t| {
        let (a, b) = (t[0], t[1]);
        x.law("hom-functor-id", &|| show(t), Ok(c.hom_map(&base.id(a), &base.id(b))), Ok(e.v.id(&c.hom(a, b))), true);
    });
    mark(x, "hom-functor-id", ex);

    let mut all = Vec::new();
    type_tuples(e, 4, "hom-valid", |t| all.push([t[0].clone(), t[1].clone(), t[2].clone(), t[3].clone()]));
    let cap = mor_budget(e, 4);
    for [a2, a, b, b2] in &all {
        let (fs, gs) = (e.homs(a2, a), e.homs(b, b2));
        let ex = mor_tuples(e, &[&fs, &gs], cap, "hom-valid-m", |m| {
            x.valid("hom-map-valid", &|| show_mors(m), &c.hom_map(m[0], m[1]), true)
        });
        mark(x, "hom-map-valid", ex);
    }

    // C(f2, g2) . C(f1, g1) = C(f2;f1, g1;g2) for f1 : a'→a, f2 : a''→a', g1 : b→b', g2 : b'→b''
    let mut all = Vec::new();
    let ext = type_tuples(e, 6, "hom-comp", |t| all.push(t.iter().map(|x| (*x).clone()).collect::<Vec<_>>()));
    let cap = mor_budget(e, 6);
    for t in &all {
        let (a3, a2, a, b, b2, b3) = (&t[0], &t[1], &t[2], &t[3], &t[4], &t[5]);
        let (f1s, f2s, g1s, g2s) = (e.homs(a2, a), e.homs(a3, a2), e.homs(b, b2), e.homs(b2, b3));
        let ex = mor_tuples(e, &[&f1s, &f2s, &g1s, &g2s], cap, "hom-comp-m", |m| {
            let (f1, f2, g1, g2) = (m[0], m[1], m[2], m[3]);
            let (Some(f), Some(g)) = (base.compose(f2, f1), base.compose(g1, g2)) else { return };
            x.law(
                "hom-functor-comp",
                &|| show_mors(m),
                chain(&*e.v, &[c.hom_map(f1, g1), c.hom_map(f2, g2)]),
                Ok(c.hom_map(&f, &g)),
                true,
            );
        });
        mark(x, "hom-functor-comp", ex && ext);
    }
}

fn naturality_laws(e: &mut Env, x: &mut Ctx) {
    let c = e.c;
    let base = e.base.clone();
    let v = e.v.clone();

    // idt extranatural: C(id, f) . idt_a = C(f, id) . idt_b for f : a → b
    let mut pairs = Vec::new();
    let ext = type_tuples(e, 2, "idt-nat", |t| pairs.push((t[0].clone(), t[1].clone())));
    for (a, b) in &pairs {
        let fs = e.homs(a, b);
        let ex = mor_tuples(e, &[&fs], e.cfg.law.max_morphism_instances, "idt-nat-m", |m| {
            let f = m[0];
            x.law(
                "idt-extranatural",
                &|| show_mors(m),
                chain(&*v, &[c.idt(a), c.hom_map(&base.id(a), f)]),
                chain(&*v, &[c.idt(b), c.hom_map(f, &base.id(b))]),
                true,
            );
        });
        mark(x, "idt-extranatural", ex && ext);
    }

    let mut triples = Vec::new();
    let ext = type_tuples(e, 4, "seq-nat", |t| triples.push([t[0].clone(), t[1].clone(), t[2].clone(), t[3].clone()]));
    let cap = mor_budget(e, 4);
    for [p, a, b, cc] in &triples {
        // natural in a: f : p → a
        let fs = e.homs(p, a);
        let ex = mor_tuples(e, &[&fs], cap, "seq-nat-a", |m| {
            let f = m[0];
            x.law(
                "seq-natural-a",
                &|| format!("{} ; {}", show(&[p, a, b, cc]), show_mors(m)),
                chain(&*v, &[v.seq_mor(&c.hom_map(f, &base.id(b)), &e.id(&c.hom(b, cc))), c.seq(p, b, cc)]),
                chain(&*v, &[c.seq(a, b, cc), c.hom_map(f, &base.id(cc))]),
                true,
            );
        });
        mark(x, "seq-natural-a", ex && ext);
        // natural in c: g : cc → p
        let gs = e.homs(cc, p);
        let ex = mor_tuples(e, &[&gs], cap, "seq-nat-c", |m| {
            let g = m[0];
            x.law(
                "seq-natural-c",
                &|| format!("{} ; {}", show(&[a, b, cc, p]), show_mors(m)),
                chain(&*v, &[v.seq_mor(&e.id(&c.hom(a, b)), &c.hom_map(&base.id(b), g)), c.seq(a, b, p)]),
                chain(&*v, &[c.seq(a, b, cc), c.hom_map(&base.id(a), g)]),
                true,
            );
        });
        mark(x, "seq-natural-c", ex && ext);
        // extranatural in b: f : b → p, on C(a, b) ∘ C(p, cc)
        let fs = e.homs(b, p);
        let ex = mor_tuples(e, &[&fs], cap, "seq-extra", |m| {
            let f = m[0];
            x.law(
                "seq-extranatural-b",
                &|| format!("{} ; {}", show(&[a, b, p, cc]), show_mors(m)),
                chain(&*v, &[v.seq_mor(&c.hom_map(&base.id(a), f), &e.id(&c.hom(p, cc))), c.seq(a, p, cc)]),
                chain(&*v, &[v.seq_mor(&e.id(&c.hom(a, b)), &c.hom_map(f, &base.id(cc))), c.seq(a, b, cc)]),
                true,
            );
        });
        mark(x, "seq-extranatural-b", ex && ext);
    }

    // par natural: par . (C(f1, g1) ∗ C(f2, g2)) = C(f1⊕f2, g1⊕g2) . par
    // f1 : a1' → a1, g1 : b1 → b1', f2 : a2' → a2, g2 : b2 → b2'
    let mut eights = Vec::new();
    let ext = type_tuples(e, 8, "par-nat", |t| eights.push(t.iter().map(|x| (*x).clone()).collect::<Vec<_>>()));
    let joint_cap = mor_budget(e, 8);
    let sep_cap = mor_budget(e, 5);
    for t in &eights {
        let (a1p, a1, b1, b1p, a2p, a2, b2, b2p) = (&t[0], &t[1], &t[2], &t[3], &t[4], &t[5], &t[6], &t[7]);
        let (Some(src), Some(tgt)) = (c.par(a1, b1, a2, b2), c.par(a1p, b1p, a2p, b2p)) else { continue };
        let lists = [e.homs(a1p, a1), e.homs(b1, b1p), e.homs(a2p, a2), e.homs(b2, b2p)];
        let run = |law: &str, x: &mut Ctx, m: &[&BMor]| {
            let (Some(fa), Some(gb)) = (base.tensor_mor(m[0], m[2]), base.tensor_mor(m[1], m[3])) else { return };
            x.law(
                law,
                &|| format!("{} ; {}", show(&t.iter().collect::<Vec<_>>()), show_mors(m)),
                chain(&*v, &[v.par_mor(&c.hom_map(m[0], m[1]), &c.hom_map(m[2], m[3])), tgt.clone()]),
                chain(&*v, &[src.clone(), c.hom_map(&fa, &gb)]),
                true,
            );
        };
        let ex = mor_tuples(e, &[&lists[0], &lists[1], &lists[2], &lists[3]], joint_cap, "par-nat-m", |m| run("par-natural", x, m));
        mark(x, "par-natural", ex && ext);
        // one index at a time, the others held at identities
        let ids = [base.id(a1), base.id(b1), base.id(a2), base.id(b2)];
        let others = [(a1p, a1), (b1, b1p), (a2p, a2), (b2, b2p)];
        for (k, law) in ["par-natural-a1", "par-natural-b1", "par-natural-a2", "par-natural-b2"].iter().enumerate() {
            let fixed = others.iter().enumerate().all(|(j, (s, t2))| j == k || s == t2);
            if !fixed {
                continue;
            }
            let ex = mor_tuples(e, &[&lists[k]], sep_cap, law, |m| {
                let mut ms: Vec<&BMor> = ids.iter().collect();
                ms[k] = m[0];
                run(law, x, &ms);
            });
            mark(x, law, ex && ext);
        }
    }
}

fn axioms(e: &mut Env, x: &mut Ctx) {
    let c = e.c;
    let base = e.base.clone();
    let v = e.v.clone();
    let unit = base.unit();
    let hid = |a: &TypeObj, b: &TypeObj| c.hom_map(&base.id(a), &base.id(b));

    // (i) idt is the identity for seq
    let ex = type_tuples(e, 2, "ax-i", |t| {
        let (a, b) = (t[0], t[1]);
        let cab = c.hom(a, b);
        x.law(
            "i-idt-left",
            &|| show(t),
            chain(&*v, &[v.seq_mor(&c.idt(a), &v.id(&cab)), c.seq(a, a, b)]),
            Ok(v.seq_lunit(&cab)),
            true,
        );
        x.law(
            "i-idt-right",
            &|| show(t),
            chain(&*v, &[v.seq_mor(&v.id(&cab), &c.idt(b)), c.seq(a, b, b)]),
            Ok(v.seq_runit(&cab)),
            true,
        );
    });
    mark(x, "i-idt-left", ex);
    mark(x, "i-idt-right", ex);

    // (ii) seq associative
    let ex = type_tuples(e, 4, "ax-ii", |t| {
        let (a, b, cc, d) = (t[0], t[1], t[2], t[3]);
        let (h1, h2, h3) = (c.hom(a, b), c.hom(b, cc), c.hom(cc, d));
        x.law(
            "ii-seq-assoc",
            &|| show(t),
            chain(&*v, &[v.seq_mor(&c.seq(a, b, cc), &v.id(&h3)), c.seq(a, cc, d)]),
            chain(&*v, &[v.seq_assoc(&h1, &h2, &h3), v.seq_mor(&v.id(&h1), &c.seq(b, cc, d)), c.seq(a, b, d)]),
            true,
        );
    });
    mark(x, "ii-seq-assoc", ex);

    // (iii) zero is the identity for par; C(λ⁻¹, λ) and C(ρ⁻¹, ρ) are identities in a strict base
    let ex = type_tuples(e, 2, "ax-iii", |t| {
        let (a, b) = (t[0], t[1]);
        let cab = c.hom(a, b);
        match c.par(&unit, &unit, a, b) {
            Some(p) => x.law(
                "iii-zero-left",
                &|| show(t),
                chain(&*v, &[v.par_mor(&c.zero(), &v.id(&cab)), p, hid(a, b)]),
                Ok(v.par_lunit(&cab)),
                true,
            ),
            None => x.r.fail("iii-zero-left", show(t), "par(e, e, a, b) undefined"),
        }
        match c.par(a, b, &unit, &unit) {
            Some(p) => x.law(
                "iii-zero-right",
                &|| show(t),
                chain(&*v, &[v.par_mor(&v.id(&cab), &c.zero()), p, hid(a, b)]),
                Ok(v.par_runit(&cab)),
                true,
            ),
            None => x.r.fail("iii-zero-right", show(t), "par(a, b, e, e) undefined"),
        }
    });
    mark(x, "iii-zero-left", ex);
    mark(x, "iii-zero-right", ex);

    // (iv) par associative
    let ex = type_tuples(e, 6, "ax-iv", |t| {
        let (a1, b1, a2, b2, a3, b3) = (t[0], t[1], t[2], t[3], t[4], t[5]);
        let Some((a12, b12, a23, b23)) = (|| Some((e.t(a1, a2)?, e.t(b1, b2)?, e.t(a2, a3)?, e.t(b2, b3)?)))() else { return };
        let (Some(a123), Some(b123)) = (e.t(&a12, a3), e.t(&b12, b3)) else { return };
        let ps = (c.par(a1, b1, a2, b2), c.par(&a12, &b12, a3, b3), c.par(a2, b2, a3, b3), c.par(a1, b1, &a23, &b23));
        let (Some(p12), Some(p12_3), Some(p23), Some(p1_23)) = ps else { return };
        let (h1, h2, h3) = (c.hom(a1, b1), c.hom(a2, b2), c.hom(a3, b3));
        x.law(
            "iv-par-assoc",
            &|| show(t),
            chain(&*v, &[v.par_mor(&p12, &v.id(&h3)), p12_3, hid(&a123, &b123)]),
            chain(&*v, &[v.par_assoc(&h1, &h2, &h3), v.par_mor(&v.id(&h1), &p23), p1_23]),
            true,
        );
    });
    mark(x, "iv-par-assoc", ex);

    // (v) idt . ε = zero
    x.law("v-idt-zero", &|| unit.to_string(), chain(&*v, &[v.eps(), c.idt(&unit)]), Ok(c.zero()), true);

    // (vi) idt . ∇ = par . (idt ∗ idt)
    let ex = type_tuples(e, 2, "ax-vi", |t| {
        let (a, b) = (t[0], t[1]);
        let (Some(ab), Some(p)) = (e.t(a, b), c.par(a, a, b, b)) else { return };
        x.law(
            "vi-idt-par",
            &|| show(t),
            chain(&*v, &[v.nabla(), c.idt(&ab)]),
            chain(&*v, &[v.par_mor(&c.idt(a), &c.idt(b)), p]),
            true,
        );
    });
    mark(x, "vi-idt-par", ex);

    // (vii) seq . (zero ∘ zero) . Δ = zero
    x.law(
        "vii-seq-zero",
        &|| unit.to_string(),
        chain(&*v, &[v.delta(), v.seq_mor(&c.zero(), &c.zero()), c.seq(&unit, &unit, &unit)]),
        Ok(c.zero()),
        true,
    );

    // (viii) seq . (par ∘ par) . ζ = par . (seq ∗ seq)
    let ex = type_tuples(e, 6, "ax-viii", |t| {
        let (a1, b1, c1, a2, b2, c2) = (t[0], t[1], t[2], t[3], t[4], t[5]);
        let Some((a12, b12, c12)) = (|| Some((e.t(a1, a2)?, e.t(b1, b2)?, e.t(c1, c2)?)))() else { return };
        let (Some(pab), Some(pbc), Some(pac)) = (c.par(a1, b1, a2, b2), c.par(b1, c1, b2, c2), c.par(a1, c1, a2, c2)) else {
            return;
        };
        x.law(
            "viii-exchange",
            &|| show(t),
            chain(
                &*v,
                &[v.zeta(&c.hom(a1, b1), &c.hom(b1, c1), &c.hom(a2, b2), &c.hom(b2, c2)), v.seq_mor(&pab, &pbc), c.seq(&a12, &b12, &c12)],
            ),
            chain(&*v, &[v.par_mor(&c.seq(a1, b1, c1), &c.seq(a2, b2, c2)), pac]),
            true,
        );
    });
    mark(x, "viii-exchange", ex);
}

/// Exchange with an identity argument: for `(f, g)` in `C(a1,b1) ∗ C(a2,b2)`,
/// both interleavings `(f ⊕ idt) ; (idt ⊕ g)` and `(idt ⊕ g) ; (f ⊕ idt)`
/// equal `par(f, g)`.
fn exchange_idt(e: &mut Env, x: &mut Ctx) {
    let c = e.c;
    let budget = e.cfg.law.probe.budget;
    let ex = type_tuples(e, 4, "exchange-idt", |t| {
        let (a1, b1, a2, b2) = (t[0], t[1], t[2], t[3]);
        let Some((a12, b12, b1a2, a1b2)) = (|| Some((e.t(a1, a2)?, e.t(b1, b2)?, e.t(b1, a2)?, e.t(a1, b2)?)))() else { return };
        let ps = (c.par(a1, b1, a2, b2), c.par(a1, b1, a2, a2), c.par(b1, b1, a2, b2), c.par(a1, a1, a2, b2), c.par(a1, b1, b2, b2));
        let (Some(p), Some(p_f_i), Some(p_i_g), Some(p_i_g2), Some(p_f_i2)) = ps else { return };
        let pt = e.v.seq_unit().point();
        let idt = |a: &TypeObj| c.idt(a).apply(&pt);
        let (ia1, ib1, ia2, ib2) = (idt(a1), idt(b1), idt(a2), idt(b2));
        let (s1, s2) = (c.seq(&a12, &b1a2, &b12), c.seq(&a12, &a1b2, &b12));
        let (xs, exh) = p.src.probe(budget, &mut x.rng);
        let mut checked = 0u64;
        for fg in &xs {
            let (f, g) = (fg.left(), fg.right());
            let want = p.apply(fg);
            let run = |pa: &Mor, l: Elem, pb: &Mor, r: Elem, s: &Mor| -> Option<Elem> {
                let (u, w) = (Elem::pair(f.clone(), l), Elem::pair(r, g.clone()));
                let (u, w) = if pa.src.contains(&u) && pb.src.contains(&w) { (u, w) } else { return None };
                let z = Elem::pair(pa.apply(&u), pb.apply(&w));
                s.src.contains(&z).then(|| s.apply(&z))
            };
            let first = run(&p_f_i, ia2.clone(), &p_i_g, ib1.clone(), &s1);
            // the other order puts g first: (idt_a1 ⊕ g) ; (f ⊕ idt_b2)
            let second = {
                let u = Elem::pair(ia1.clone(), g.clone());
                let w = Elem::pair(f.clone(), ib2.clone());
                if p_i_g2.src.contains(&u) && p_f_i2.src.contains(&w) {
                    let z = Elem::pair(p_i_g2.apply(&u), p_f_i2.apply(&w));
                    s2.src.contains(&z).then(|| s2.apply(&z))
                } else {
                    None
                }
            };
            for (side, got) in [("f first", first), ("g first", second)] {
                match got {
                    Some(y) if y != want => {
                        x.r.fail("exchange-idt", show(t), format!("{side} at {fg}: {y} ≠ {want}"));
                        return;
                    }
                    Some(_) => checked += 1,
                    None => {}
                }
            }
        }
        x.r.pass("exchange-idt", checked, exh);
    });
    mark(x, "exchange-idt", ex);
}

/// The derived equations: unitors of `∘` against `zero` and `par`, the
/// associator of `∘` against `zero` and `par`, unitors of `∗`, and the
/// associator of `∗` against `par`.
pub fn check_derived_lemmas(c: &dyn VFreyd, types: &[TypeObj], cfg: &VfCfg) -> LawReport {
    let e = Env::new(c, types, cfg);
    let v = e.v.clone();
    let mut x = ctx(&*v, format!("derived equations for {}", c.name()), cfg);
    let unit = e.base.unit();
    let cee = c.hom(&unit, &unit);
    let (zero, eps, delta) = (c.zero(), v.eps(), v.delta());
    let j = v.par_unit();

    x.law(
        "b1-runit-zero",
        &String::new,
        chain(&*v, &[zero.clone(), v.seq_runit_inv(&cee)]),
        chain(&*v, &[delta.clone(), v.seq_mor(&zero, &eps)]),
        true,
    );
    x.law(
        "b1-lunit-zero",
        &String::new,
        chain(&*v, &[zero.clone(), v.seq_lunit_inv(&cee)]),
        chain(&*v, &[delta.clone(), v.seq_mor(&eps, &zero)]),
        true,
    );
    let ex = type_tuples(&e, 4, "b1", |t| {
        let (a, b, a2, b2) = (t[0], t[1], t[2], t[3]);
        let (Some(aa), Some(bb), Some(p)) = (e.t(a, a2), e.t(b, b2), c.par(a, b, a2, b2)) else { return };
        let (h1, h2, i) = (c.hom(a, b), c.hom(a2, b2), v.seq_unit());
        let h12 = c.hom(&aa, &bb);
        x.law(
            "b1-runit-par",
            &|| show(t),
            chain(&*v, &[p.clone(), v.seq_runit_inv(&h12)]),
            chain(&*v, &[v.par_mor(&v.seq_runit_inv(&h1), &v.seq_runit_inv(&h2)), v.zeta(&h1, &i, &h2, &i), v.seq_mor(&p, &v.nabla())]),
            true,
        );
        x.law(
            "b1-lunit-par",
            &|| show(t),
            chain(&*v, &[p.clone(), v.seq_lunit_inv(&h12)]),
            chain(&*v, &[v.par_mor(&v.seq_lunit_inv(&h1), &v.seq_lunit_inv(&h2)), v.zeta(&i, &h1, &i, &h2), v.seq_mor(&v.nabla(), &p)]),
            true,
        );
    });
    mark(&mut x, "b1-runit-par", ex);
    mark(&mut x, "b1-lunit-par", ex);

    x.law(
        "b2-assoc-zero",
        &String::new,
        chain(
            &*v,
            &[
                delta.clone(),
                v.seq_mor(&v.id(&j), &delta),
                v.seq_mor(&zero, &v.seq_mor(&zero, &zero)),
                v.seq_assoc_inv(&cee, &cee, &cee),
            ],
        ),
        chain(&*v, &[delta.clone(), v.seq_mor(&delta, &v.id(&j)), v.seq_mor(&v.seq_mor(&zero, &zero), &zero)]),
        true,
    );

    // hom objects C1..C6 indexed by type pairs
    let ex = type_tuples(&e, 12, "b2", |t| {
        let h: Vec<Obj> = (0..6).map(|k| c.hom(t[2 * k], t[2 * k + 1])).collect();
        let pr = |k: usize, l: usize| c.par(t[2 * k], t[2 * k + 1], t[2 * l], t[2 * l + 1]);
        let (Some(p14), Some(p25), Some(p36)) = (pr(0, 3), pr(1, 4), pr(2, 5)) else { return };
        let (q14, q25, q36) = (p14.tgt.clone(), p25.tgt.clone(), p36.tgt.clone());
        x.law(
            "b2-assoc-par",
            &|| show(t),
            chain(
                &*v,
                &[
                    v.zeta(&h[0], &v.seq(&h[1], &h[2]), &h[3], &v.seq(&h[4], &h[5])),
                    v.seq_mor(&v.id(&v.par(&h[0], &h[3])), &v.zeta(&h[1], &h[2], &h[4], &h[5])),
                    v.seq_mor(&p14, &v.seq_mor(&p25, &p36)),
                    v.seq_assoc_inv(&q14, &q25, &q36),
                ],
            ),
            chain(
                &*v,
                &[
                    v.par_mor(&v.seq_assoc_inv(&h[0], &h[1], &h[2]), &v.seq_assoc_inv(&h[3], &h[4], &h[5])),
                    v.zeta(&v.seq(&h[0], &h[1]), &h[2], &v.seq(&h[3], &h[4]), &h[5]),
                    v.seq_mor(&v.zeta(&h[0], &h[1], &h[3], &h[4]), &v.id(&v.par(&h[2], &h[5]))),
                    v.seq_mor(&v.seq_mor(&p14, &p25), &p36),
                ],
            ),
            true,
        );
    });
    mark(&mut x, "b2-assoc-par", ex);

    // unitors of ∗ on X = C(a,b) ∘ C(b,c)
    let zz = chain(&*v, &[delta.clone(), v.seq_mor(&zero, &zero)]);
    let ex = type_tuples(&e, 3, "b3", |t| {
        let (a, b, cc) = (t[0], t[1], t[2]);
        let (h1, h2) = (c.hom(a, b), c.hom(b, cc));
        let xo = v.seq(&h1, &h2);
        let Ok(zz) = zz.clone() else { return };
        if let (Some(p1), Some(p2)) = (c.par(a, b, &unit, &unit), c.par(b, cc, &unit, &unit)) {
            x.law(
                "b3-runit",
                &|| show(t),
                chain(&*v, &[v.par_runit_inv(&xo), v.par_mor(&v.id(&xo), &zz), v.zeta(&h1, &h2, &cee, &cee), v.seq_mor(&p1, &p2)]),
                Ok(v.id(&xo)),
                true,
            );
        }
        if let (Some(p1), Some(p2)) = (c.par(&unit, &unit, a, b), c.par(&unit, &unit, b, cc)) {
            x.law(
                "b3-lunit",
                &|| show(t),
                chain(&*v, &[v.par_lunit_inv(&xo), v.par_mor(&zz, &v.id(&xo)), v.zeta(&cee, &cee, &h1, &h2), v.seq_mor(&p1, &p2)]),
                Ok(v.id(&xo)),
                true,
            );
        }
    });
    mark(&mut x, "b3-runit", ex);
    mark(&mut x, "b3-lunit", ex);

    // associator of ∗ on ((C1∘C2) ∗ (C3∘C4)) ∗ (C5∘C6)
    let ex = type_tuples(&e, 12, "b4", |t| {
        let ty = |k: usize| (t[2 * k], t[2 * k + 1]);
        let h: Vec<Obj> = (0..6).map(|k| c.hom(ty(k).0, ty(k).1)).collect();
        let pr = |k: (&TypeObj, &TypeObj), l: (&TypeObj, &TypeObj)| c.par(k.0, k.1, l.0, l.1);
        let tp = |k: (&TypeObj, &TypeObj), l: (&TypeObj, &TypeObj)| Some((e.t(k.0, l.0)?, e.t(k.1, l.1)?));
        let left3 = |i: usize, k: usize, l: usize| -> Option<Mor> {
            let ik = tp(ty(i), ty(k))?;
            chain(&*v, &[v.par_mor(&pr(ty(i), ty(k))?, &v.id(&h[l])), pr((&ik.0, &ik.1), ty(l))?]).ok()
        };
        let right3 = |i: usize, k: usize, l: usize| -> Option<Mor> {
            let kl = tp(ty(k), ty(l))?;
            chain(&*v, &[v.par_mor(&v.id(&h[i]), &pr(ty(k), ty(l))?), pr(ty(i), (&kl.0, &kl.1))?]).ok()
        };
        let (Some(l135), Some(l246), Some(r135), Some(r246)) = (left3(0, 2, 4), left3(1, 3, 5), right3(0, 2, 4), right3(1, 3, 5)) else {
            return;
        };
        let s12 = v.seq(&h[0], &h[1]);
        let s34 = v.seq(&h[2], &h[3]);
        let s56 = v.seq(&h[4], &h[5]);
        x.law(
            "b4-assoc-par",
            &|| show(t),
            chain(
                &*v,
                &[
                    v.par_mor(&v.zeta(&h[0], &h[1], &h[2], &h[3]), &v.id(&s56)),
                    v.zeta(&v.par(&h[0], &h[2]), &v.par(&h[1], &h[3]), &h[4], &h[5]),
                    v.seq_mor(&l135, &l246),
                ],
            ),
            chain(
                &*v,
                &[
                    v.par_assoc(&s12, &s34, &s56),
                    v.par_mor(&v.id(&s12), &v.zeta(&h[2], &h[3], &h[4], &h[5])),
                    v.zeta(&h[0], &h[1], &v.par(&h[2], &h[4]), &v.par(&h[3], &h[5])),
                    v.seq_mor(&r135, &r246),
                ],
            ),
            true,
        );
    });
    mark(&mut x, "b4-assoc-par", ex);
    x.r
}

pub type ObjMap = Arc<dyn Fn(&TypeObj) -> TypeObj + Send + Sync>;
pub type BMorMap = Arc<dyn Fn(&BMor) -> BMor + Send + Sync>;
pub type MuMap = Arc<dyn Fn(&TypeObj, &TypeObj) -> BMor + Send + Sync>;
pub type HomMap = Arc<dyn Fn(&TypeObj, &TypeObj) -> Mor + Send + Sync>;

/// `F0` a strong monoidal functor on bases with `μ : F0a ⊕ F0b → F0(a⊕b)` and
/// `η : e' → F0 e`; `F1 : C(a, b) → C'(F0a, F0b)`.
#[derive(Clone)]
pub struct VFreydMor {
    pub name: String,
    pub f0_obj: ObjMap,
    pub f0_mor: BMorMap,
    pub mu: MuMap,
    pub eta: BMor,
    pub f1: HomMap,
}

/// Identity on objects and base morphisms, `μ` and `η` identities, and `F1`
/// given per hom.
pub fn vfreyd_mor_over_identity(name: &str, base: Arc<dyn MonBase>, f1: HomMap) -> VFreydMor {
    let b2 = base.clone();
    VFreydMor {
        name: name.into(),
        f0_obj: Arc::new(|a| a.clone()),
        f0_mor: Arc::new(|f| f.clone()),
        mu: Arc::new(move |a, b| b2.id(&b2.tensor(a, b).expect("tensor in base"))),
        eta: base.id(&base.unit()),
        f1,
    }
}

pub fn identity_vfreyd_mor(c: Arc<dyn VFreyd>) -> VFreydMor {
    let c2 = c.clone();
    vfreyd_mor_over_identity(&format!("id[{}]", c.name()), c.base(), Arc::new(move |a, b| c2.v().id(&c2.hom(a, b))))
}

/// Checks `F1 . idt = idt'`, `F1 . seq = seq' . (F1 ∘ F1)`, the `par` square
/// with `μ`, naturality of `F1`, and that `F0` is a strong monoidal functor.
pub fn check_vfreyd_morphism(m: &VFreydMor, src: &dyn VFreyd, dst: &dyn VFreyd, types: &[TypeObj], cfg: &VfCfg) -> LawReport {
    let mut e = Env::new(src, types, cfg);
    let v = e.v.clone();
    let mut x = ctx(&*v, format!("V-Freyd morphism {}: {} → {}", m.name, src.name(), dst.name()), cfg);
    if v.name() != dst.v().name() {
        x.r.fail("same-enrichment", "", format!("{} vs {}", v.name(), dst.v().name()));
        return x.r;
    }
    let (sb, db) = (src.base(), dst.base());
    let f0 = |a: &TypeObj| (m.f0_obj)(a);

    // F0 strong monoidal
    let ex = type_tuples(&e, 1, "f0-id", |t| {
        let ok = (m.f0_mor)(&sb.id(t[0])) == db.id(&f0(t[0]));
        x.r.check("f0-functor-id", show(t), if ok { Ok(1) } else { Err("F0 does not preserve the identity".into()) });
    });
    mark(&mut x, "f0-functor-id", ex);
    let mut triples = Vec::new();
    type_tuples(&e, 3, "f0-comp", |t| triples.push([t[0].clone(), t[1].clone(), t[2].clone()]));
    let cap = mor_budget(&e, 3);
    for [a, b, cc] in &triples {
        let (fs, gs) = (e.homs(a, b), e.homs(b, cc));
        mor_tuples(&e, &[&fs, &gs], cap, "f0-comp-m", |ms| {
            let lhs = sb.compose(ms[0], ms[1]).map(|h| (m.f0_mor)(&h));
            let rhs = db.compose(&(m.f0_mor)(ms[0]), &(m.f0_mor)(ms[1]));
            let out = if lhs.is_some() && lhs == rhs { Ok(1) } else { Err(format!("{lhs:?} ≠ {rhs:?}")) };
            x.r.check("f0-functor-comp", show_mors(ms), out);
        });
    }
    let ex = type_tuples(&e, 3, "f0-mu", |t| {
        let (a, b, cc) = (t[0], t[1], t[2]);
        let Some((ab, bc)) = (|| Some((sb.tensor(a, b)?, sb.tensor(b, cc)?)))() else { return };
        if sb.tensor(&ab, cc).is_none() || sb.tensor(a, &bc).is_none() {
            return;
        }
        // μ_{a⊕b,c} . (μ_{a,b} ⊕ id) = μ_{a,b⊕c} . (id ⊕ μ_{b,c}) in a strict base
        let lhs = db.tensor_mor(&m.mu(a, b), &db.id(&f0(cc))).and_then(|h| db.compose(&h, &m.mu(&ab, cc)));
        let rhs = db.tensor_mor(&db.id(&f0(a)), &m.mu(b, cc)).and_then(|h| db.compose(&h, &m.mu(a, &bc)));
        let out = if lhs.is_some() && lhs == rhs { Ok(1) } else { Err(format!("{lhs:?} ≠ {rhs:?}")) };
        x.r.check("f0-mu-assoc", show(t), out);
    });
    mark(&mut x, "f0-mu-assoc", ex);
    let ex = type_tuples(&e, 1, "f0-unit", |t| {
        let a = t[0];
        let lhs = db.tensor_mor(&m.eta, &db.id(&f0(a))).and_then(|h| db.compose(&h, &m.mu(&sb.unit(), a)));
        let ok = lhs.as_ref().is_some_and(|h| h.src == h.tgt && *h == db.id(&h.src));
        x.r.check("f0-mu-unit", show(t), if ok { Ok(1) } else { Err(format!("{lhs:?} is not an identity")) });
    });
    mark(&mut x, "f0-mu-unit", ex);
    let ex = type_tuples(&e, 2, "f0-mu-iso", |t| {
        if sb.tensor(t[0], t[1]).is_none() {
            return;
        }
        let mu = m.mu(t[0], t[1]);
        let inv = db.homs(&mu.tgt, &mu.src, e.cfg.hom_limit, e.cfg.law.probe.seed).into_iter().find(|g| {
            db.compose(&mu, g) == Some(db.id(&mu.src)) && db.compose(g, &mu) == Some(db.id(&mu.tgt))
        });
        x.r.check("f0-mu-iso", show(t), if inv.is_some() { Ok(1) } else { Err(format!("{mu:?} has no inverse")) });
    });
    mark(&mut x, "f0-mu-iso", ex);

    // F1
    let ex = type_tuples(&e, 2, "f1-valid", |t| x.valid("f1-valid", &|| show(t), &(m.f1)(t[0], t[1]), true));
    mark(&mut x, "f1-valid", ex);
    let ex = type_tuples(&e, 1, "f1-idt", |t| {
        let a = t[0];
        x.law("f1-idt", &|| show(t), chain(&*v, &[src.idt(a), (m.f1)(a, a)]), Ok(dst.idt(&f0(a))), true);
    });
    mark(&mut x, "f1-idt", ex);
    let ex = type_tuples(&e, 3, "f1-seq", |t| {
        let (a, b, cc) = (t[0], t[1], t[2]);
        x.law(
            "f1-seq",
            &|| show(t),
            chain(&*v, &[src.seq(a, b, cc), (m.f1)(a, cc)]),
            chain(&*v, &[v.seq_mor(&(m.f1)(a, b), &(m.f1)(b, cc)), dst.seq(&f0(a), &f0(b), &f0(cc))]),
            true,
        );
    });
    mark(&mut x, "f1-seq", ex);
    let ex = type_tuples(&e, 4, "f1-par", |t| {
        let (a1, b1, a2, b2) = (t[0], t[1], t[2], t[3]);
        let (Some(a12), Some(b12), Some(p)) = (sb.tensor(a1, a2), sb.tensor(b1, b2), src.par(a1, b1, a2, b2)) else { return };
        let Some(p2) = dst.par(&f0(a1), &f0(b1), &f0(a2), &f0(b2)) else {
            x.r.fail("f1-par", show(t), "par' undefined on the image");
            return;
        };
        let (mua, mub) = (m.mu(a1, a2), m.mu(b1, b2));
        x.law(
            "f1-par",
            &|| show(t),
            chain(&*v, &[v.par_mor(&(m.f1)(a1, b1), &(m.f1)(a2, b2)), p2, dst.hom_map(&db.id(&mua.src), &mub)]),
            chain(&*v, &[p, (m.f1)(&a12, &b12), dst.hom_map(&mua, &db.id(&mub.tgt))]),
            true,
        );
    });
    mark(&mut x, "f1-par", ex);
    let mut quads = Vec::new();
    type_tuples(&e, 4, "f1-nat", |t| quads.push([t[0].clone(), t[1].clone(), t[2].clone(), t[3].clone()]));
    let cap = mor_budget(&e, 4);
    for [a2, a, b, b2] in &quads {
        let (fs, gs) = (e.homs(a2, a), e.homs(b, b2));
        let ex = mor_tuples(&e, &[&fs, &gs], cap, "f1-nat-m", |ms| {
            let (f, g) = (ms[0], ms[1]);
            x.law(
                "f1-natural",
                &|| show_mors(ms),
                chain(&*v, &[src.hom_map(f, g), (m.f1)(a2, b2)]),
                chain(&*v, &[(m.f1)(a, b), dst.hom_map(&(m.f0_mor)(f), &(m.f0_mor)(g))]),
                true,
            );
        });
        mark(&mut x, "f1-natural", ex);
    }
    x.r
}

impl VFreydMor {
    fn mu(&self, a: &TypeObj, b: &TypeObj) -> BMor {
        (self.mu)(a, b)
    }
}
