//! Elementwise coherence checks for duoidal categories.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::obj::{compare, rng_for, validate, Mor, Obj, ProbeCfg, VError};
use super::{chain, Duoidal};
use crate::finset::Elem;
use crate::report::LawReport;

#[derive(Debug, Clone, Copy)]
pub struct LawCfg {
    pub probe: ProbeCfg,
    /// Object tuples checked per law; larger families are sampled.
    pub max_instances: usize,
    /// Morphism tuples checked per naturality or functoriality law.
    pub max_morphism_instances: usize,
}

impl Default for LawCfg {
    fn default() -> Self {
        LawCfg { probe: ProbeCfg::default(), max_instances: 200_000, max_morphism_instances: 4000 }
    }
}

/// Probe objects of size at most 2.
pub fn default_probes(v: &dyn Duoidal) -> Vec<Obj> {
    v.probe_objects(2)
}

/// Visits `k`-tuples of indices below `n`: all of them when there are at
/// most `cap`, else `cap` seeded samples. Returns whether it was exhaustive.
fn tuples(n: usize, k: usize, cap: usize, rng: &mut ChaCha8Rng, visit: impl FnMut(&[usize])) -> bool {
    for_each_tuple(&vec![n; k], cap, rng, visit)
}

/// Visits index tuples with `idx[i] < sizes[i]`, exhaustively when there are
/// at most `cap` of them, else `cap` seeded samples.
pub(crate) fn for_each_tuple(sizes: &[usize], cap: usize, rng: &mut ChaCha8Rng, mut visit: impl FnMut(&[usize])) -> bool {
    if sizes.iter().any(|&n| n == 0) {
        return true;
    }
    let total = sizes.iter().try_fold(1u128, |acc, &n| acc.checked_mul(n as u128)).unwrap_or(u128::MAX);
    let k = sizes.len();
    let mut idx = vec![0usize; k];
    if total <= cap as u128 {
        loop {
            visit(&idx);
            let mut p = k;
            loop {
                if p == 0 {
                    return true;
                }
                p -= 1;
                idx[p] += 1;
                if idx[p] < sizes[p] {
                    break;
                }
                idx[p] = 0;
            }
        }
    }
    for _ in 0..cap {
        for (i, n) in idx.iter_mut().zip(sizes) {
            *i = rng.gen_range(0..*n);
        }
        visit(&idx);
    }
    false
}

pub(crate) struct Ctx<'a> {
    pub v: &'a dyn Duoidal,
    pub r: LawReport,
    pub cfg: LawCfg,
    pub rng: ChaCha8Rng,
}

impl Ctx<'_> {
    pub fn law(&mut self, name: &str, inst: &dyn Fn() -> String, lhs: Result<Mor, VError>, rhs: Result<Mor, VError>, tuple_exhaustive: bool) {
        let v = self.v;
        let out = match (lhs, rhs) {
            (Ok(l), Ok(r)) => compare(&l, &r, &|s, t| v.grade_ok(s, t), &self.cfg.probe, &mut self.rng),
            (Err(e), _) | (_, Err(e)) => Err(format!("typing: {e}")),
        };
        match out {
            Ok((n, ex)) => self.r.pass(name, n, ex && tuple_exhaustive),
            Err(w) => self.r.fail(name, inst(), w),
        }
    }

    pub fn valid(&mut self, name: &str, inst: &dyn Fn() -> String, m: &Mor, tuple_exhaustive: bool) {
        let v = self.v;
        let res = if m.reversed { validate(&m.flip(), &|s, t| v.grade_ok(s, t), &self.cfg.probe, &mut self.rng) } else {
            validate(m, &|s, t| v.grade_ok(s, t), &self.cfg.probe, &mut self.rng)
        };
        match res {
            Ok((n, ex)) => self.r.pass(name, n, ex && tuple_exhaustive),
            Err(w) => self.r.fail(name, inst(), w),
        }
    }
}

fn show(objs: &[&Obj]) -> String {
    objs.iter().map(|o| o.key().to_string()).collect::<Vec<_>>().join(", ")
}

/// Runs the full coherence suite with default sampling limits.
pub fn check_duoidal_laws(v: &dyn Duoidal, probes: &[Obj]) -> LawReport {
    check_duoidal_laws_with(v, probes, &LawCfg::default())
}

/// Both monoidal structures (pentagon, triangle, inverse isos), the
/// structure-map validity, naturality of `ζ`, bifunctoriality of both
/// tensors, the six interchange diagrams, the monoid `(I,∇,ε)` in `∗` and the
/// comonoid `(J,Δ,ε)` in `∘`.
pub fn check_duoidal_laws_with(v: &dyn Duoidal, probes: &[Obj], cfg: &LawCfg) -> LawReport {
    let mut c = Ctx { v, r: LawReport::new(format!("duoidal laws for {}", v.name())), cfg: *cfg, rng: rng_for(cfg.probe.seed, &v.name()) };
    c.r.note(format!("{} probe objects", probes.len()));
    let n = probes.len();
    let p = probes;
    let cap = cfg.max_instances;
    let mut trng = rng_for(cfg.probe.seed, "tuples");

    let (j, i) = (v.par_unit(), v.seq_unit());
    let none = || String::from("units");
    let d = v.delta();
    c.valid("delta-valid", &none, &d, true);
    let nb = v.nabla();
    c.valid("nabla-valid", &none, &nb, true);
    let e = v.eps();
    c.valid("eps-valid", &none, &e, true);

    // monoid (I, ∇, ε) in (V, ∗, J)
    let id_i = v.id(&i);
    c.law(
        "monoid-assoc",
        &none,
        chain(v, &[v.par_mor(&nb, &id_i), nb.clone()]),
        chain(v, &[v.par_assoc(&i, &i, &i), v.par_mor(&id_i, &nb), nb.clone()]),
        true,
    );
    c.law("monoid-unit-left", &none, chain(v, &[v.par_mor(&e, &id_i), nb.clone()]), Ok(v.par_lunit(&i)), true);
    c.law("monoid-unit-right", &none, chain(v, &[v.par_mor(&id_i, &e), nb.clone()]), Ok(v.par_runit(&i)), true);
    // comonoid (J, Δ, ε) in (V, ∘, I)
    let id_j = v.id(&j);
    c.law(
        "comonoid-coassoc",
        &none,
        chain(v, &[d.clone(), v.seq_mor(&d, &id_j), v.seq_assoc(&j, &j, &j)]),
        chain(v, &[d.clone(), v.seq_mor(&id_j, &d)]),
        true,
    );
    c.law("comonoid-counit-left", &none, chain(v, &[d.clone(), v.seq_mor(&e, &id_j)]), Ok(v.seq_lunit_inv(&j)), true);
    c.law("comonoid-counit-right", &none, chain(v, &[d.clone(), v.seq_mor(&id_j, &e)]), Ok(v.seq_runit_inv(&j)), true);

    // per-tensor monoidal structure
    type T<'a> = (
        &'a str,
        &'a dyn Fn(&Obj, &Obj) -> Obj,
        &'a dyn Fn(&Mor, &Mor) -> Mor,
        &'a dyn Fn(&Obj, &Obj, &Obj) -> Mor,
        &'a dyn Fn(&Obj, &Obj, &Obj) -> Mor,
        &'a dyn Fn(&Obj) -> Mor,
        &'a dyn Fn(&Obj) -> Mor,
        &'a dyn Fn(&Obj) -> Mor,
        &'a dyn Fn(&Obj) -> Mor,
        Obj,
    );
    let tensors: [T; 2] = [
        (
            "par",
            &|a, b| v.par(a, b),
            &|f, g| v.par_mor(f, g),
            &|a, b, c| v.par_assoc(a, b, c),
            &|a, b, c| v.par_assoc_inv(a, b, c),
            &|a| v.par_lunit(a),
            &|a| v.par_lunit_inv(a),
            &|a| v.par_runit(a),
            &|a| v.par_runit_inv(a),
            j.clone(),
        ),
        (
            "seq",
            &|a, b| v.seq(a, b),
            &|f, g| v.seq_mor(f, g),
            &|a, b, c| v.seq_assoc(a, b, c),
            &|a, b, c| v.seq_assoc_inv(a, b, c),
            &|a| v.seq_lunit(a),
            &|a| v.seq_lunit_inv(a),
            &|a| v.seq_runit(a),
            &|a| v.seq_runit_inv(a),
            i.clone(),
        ),
    ];
    for (t, ten, tm, assoc, assoc_inv, lu, lu_inv, ru, ru_inv, unit) in tensors.iter() {
        let name = |s: &str| format!("{t}-{s}");
        for a in p {
            let inst = || show(&[a]);
            c.law(&name("lunit-iso"), &inst, chain(v, &[lu(a), lu_inv(a)]), Ok(v.id(&ten(unit, a))), true);
            c.law(&name("lunit-iso"), &inst, chain(v, &[lu_inv(a), lu(a)]), Ok(v.id(a)), true);
            c.law(&name("runit-iso"), &inst, chain(v, &[ru(a), ru_inv(a)]), Ok(v.id(&ten(a, unit))), true);
            c.law(&name("runit-iso"), &inst, chain(v, &[ru_inv(a), ru(a)]), Ok(v.id(a)), true);
            let lu_a = lu(a);
            c.valid(&name("lunit-valid"), &inst, &lu_a, true);
        }
        let ex = tuples(n, 2, cap, &mut trng, |ix| {
            let (a, b) = (&p[ix[0]], &p[ix[1]]);
            let inst = || show(&[a, b]);
            c.law(
                &name("triangle"),
                &inst,
                chain(v, &[assoc(a, unit, b), tm(&v.id(a), &lu(b))]),
                Ok(tm(&ru(a), &v.id(b))),
                true,
            );
        });
        let _ = ex;
        let ex3 = tuples(n, 3, cap, &mut trng, |ix| {
            let (a, b, cc) = (&p[ix[0]], &p[ix[1]], &p[ix[2]]);
            let inst = || show(&[a, b, cc]);
            c.law(&name("assoc-iso"), &inst, chain(v, &[assoc(a, b, cc), assoc_inv(a, b, cc)]), Ok(v.id(&ten(&ten(a, b), cc))), true);
            c.law(&name("assoc-iso"), &inst, chain(v, &[assoc_inv(a, b, cc), assoc(a, b, cc)]), Ok(v.id(&ten(a, &ten(b, cc)))), true);
        });
        let _ = ex3;
        let ex4 = tuples(n, 4, cap, &mut trng, |ix| {
            let (a, b, cc, dd) = (&p[ix[0]], &p[ix[1]], &p[ix[2]], &p[ix[3]]);
            let inst = || show(&[a, b, cc, dd]);
            c.law(
                &name("pentagon"),
                &inst,
                chain(v, &[tm(&assoc(a, b, cc), &v.id(dd)), assoc(a, &ten(b, cc), dd), tm(&v.id(a), &assoc(b, cc, dd))]),
                chain(v, &[assoc(&ten(a, b), cc, dd), assoc(a, b, &ten(cc, dd))]),
                true,
            );
        });
        if !ex4 {
            c.r.note(format!("{t}-pentagon: object tuples sampled"));
        }
    }

    // ζ validity and the four unit diagrams
    let ex = tuples(n, 4, cap, &mut trng, |ix| {
        let (a, b, cc, dd) = (&p[ix[0]], &p[ix[1]], &p[ix[2]], &p[ix[3]]);
        let z = v.zeta(a, b, cc, dd);
        c.valid("zeta-valid", &|| show(&[a, b, cc, dd]), &z, true);
    });
    if !ex {
        c.r.note("zeta-valid: object tuples sampled");
    }
    tuples(n, 2, cap, &mut trng, |ix| {
        let (a, b) = (&p[ix[0]], &p[ix[1]]);
        let inst = || show(&[a, b]);
        let (ia, ib) = (v.id(a), v.id(b));
        let ab_seq = v.seq(a, b);
        let ab_par = v.par(a, b);
        // J∗(A∘B) → (J∘J)∗(A∘B) → (J∗A)∘(J∗B) → A∘B  equals λ∗
        c.law(
            "unit-J-left",
            &inst,
            chain(v, &[v.par_mor(&d, &v.id(&ab_seq)), v.zeta(&j, &j, a, b), v.seq_mor(&v.par_lunit(a), &v.par_lunit(b))]),
            Ok(v.par_lunit(&ab_seq)),
            true,
        );
        c.law(
            "unit-J-right",
            &inst,
            chain(v, &[v.par_mor(&v.id(&ab_seq), &d), v.zeta(a, b, &j, &j), v.seq_mor(&v.par_runit(a), &v.par_runit(b))]),
            Ok(v.par_runit(&ab_seq)),
            true,
        );
        // (I∘A)∗(I∘B) → (I∗I)∘(A∗B) → I∘(A∗B) → A∗B  equals λ∘ ∗ λ∘
        c.law(
            "unit-I-left",
            &inst,
            chain(v, &[v.zeta(&i, a, &i, b), v.seq_mor(&nb, &v.id(&ab_par)), v.seq_lunit(&ab_par)]),
            Ok(v.par_mor(&v.seq_lunit(a), &v.seq_lunit(b))),
            true,
        );
        c.law(
            "unit-I-right",
            &inst,
            chain(v, &[v.zeta(a, &i, b, &i), v.seq_mor(&v.id(&ab_par), &nb), v.seq_runit(&ab_par)]),
            Ok(v.par_mor(&v.seq_runit(a), &v.seq_runit(b))),
            true,
        );
        let _ = (ia, ib);
    });

    // the two ζ-associativity hexagons; an instance whose domain is empty
    // holds trivially and is counted without building either side
    let seq2: Vec<Obj> = (0..n * n).map(|k| v.seq(&p[k / n], &p[k % n])).collect();
    let mut par2: HashMap<(usize, usize), Obj> = HashMap::new();
    let mut seq3: HashMap<(usize, usize), Obj> = HashMap::new();
    let ex6 = tuples(n, 6, cap, &mut trng, |ix| {
        let o: Vec<&Obj> = ix.iter().map(|&k| &p[k]).collect();
        let (a, b, cc, dd, ee, ff) = (o[0], o[1], o[2], o[3], o[4], o[5]);
        let inst = || show(&o);
        let id = |x: &Obj| v.id(x);
        let (ab, cd, ef) = (ix[0] * n + ix[1], ix[2] * n + ix[3], ix[4] * n + ix[5]);
        let left = par2.entry((ab, cd)).or_insert_with(|| v.par(&seq2[ab], &seq2[cd]));
        let par_dom_empty = left.count() == 0 || seq2[ef].count() == 0 || v.par(left, &seq2[ef]).count() == 0;
        let abc = seq3.entry((ab, ix[2])).or_insert_with(|| v.seq(&seq2[ab], cc)).clone();
        let def = seq3.entry((ix[3] * n + ix[4], ix[5])).or_insert_with(|| v.seq(&seq2[ix[3] * n + ix[4]], ff));
        let seq_dom_empty = abc.count() == 0 || def.count() == 0 || v.par(&abc, def).count() == 0;
        if par_dom_empty {
            c.r.pass("zeta-assoc-par", 0, false);
        }
        if seq_dom_empty {
            c.r.pass("zeta-assoc-seq", 0, false);
        }
        if par_dom_empty && seq_dom_empty {
            return;
        }
        // ((A∘B)∗(C∘D))∗(E∘F) → (A∗(C∗E))∘(B∗(D∗F))
        if !par_dom_empty {
        c.law(
            "zeta-assoc-par",
            &inst,
            chain(
                v,
                &[
                    v.par_mor(&v.zeta(a, b, cc, dd), &id(&v.seq(ee, ff))),
                    v.zeta(&v.par(a, cc), &v.par(b, dd), ee, ff),
                    v.seq_mor(&v.par_assoc(a, cc, ee), &v.par_assoc(b, dd, ff)),
                ],
            ),
            chain(
                v,
                &[
                    v.par_assoc(&v.seq(a, b), &v.seq(cc, dd), &v.seq(ee, ff)),
                    v.par_mor(&id(&v.seq(a, b)), &v.zeta(cc, dd, ee, ff)),
                    v.zeta(a, b, &v.par(cc, ee), &v.par(dd, ff)),
                ],
            ),
            false,
        );
        }
        if seq_dom_empty {
            return;
        }
        // ((A∘B)∘C)∗((D∘E)∘F) → (A∗D)∘((B∗E)∘(C∗F))
        c.law(
            "zeta-assoc-seq",
            &inst,
            chain(
                v,
                &[
                    v.zeta(&v.seq(a, b), cc, &v.seq(dd, ee), ff),
                    v.seq_mor(&v.zeta(a, b, dd, ee), &id(&v.par(cc, ff))),
                    v.seq_assoc(&v.par(a, dd), &v.par(b, ee), &v.par(cc, ff)),
                ],
            ),
            chain(
                v,
                &[
                    v.par_mor(&v.seq_assoc(a, b, cc), &v.seq_assoc(dd, ee, ff)),
                    v.zeta(a, &v.seq(b, cc), dd, &v.seq(ee, ff)),
                    v.seq_mor(&id(&v.par(a, dd)), &v.zeta(b, cc, ee, ff)),
                ],
            ),
            false,
        );
    });
    if ex6 {
        for k in ["zeta-assoc-par", "zeta-assoc-seq"] {
            if let Some(f) = c.r.families.get_mut(k) {
                f.exhaustive = true;
            }
        }
    } else {
        c.r.note(format!("zeta-assoc: {cap} object sextuples sampled from {}", (n as u128).pow(6)));
    }

    // morphism probes for naturality and bifunctoriality
    let mut mors: Vec<Mor> = Vec::new();
    for a in p {
        for b in p {
            mors.extend(v.hom_set(a, b, 64));
        }
    }
    let mut by_src: HashMap<String, Vec<usize>> = HashMap::new();
    for (k, m) in mors.iter().enumerate() {
        by_src.entry(m.src.key().to_string()).or_default().push(k);
    }
    c.r.note(format!("{} probe morphisms", mors.len()));
    let mcap = cfg.max_morphism_instances;
    let ex = tuples(mors.len(), 4, mcap, &mut trng, |ix| {
        let (f, g, h, k) = (&mors[ix[0]], &mors[ix[1]], &mors[ix[2]], &mors[ix[3]]);
        let inst = || format!("{f:?} | {g:?} | {h:?} | {k:?}");
        c.law(
            "zeta-natural",
            &inst,
            chain(v, &[v.par_mor(&v.seq_mor(f, g), &v.seq_mor(h, k)), v.zeta(&f.tgt, &g.tgt, &h.tgt, &k.tgt)]),
            chain(v, &[v.zeta(&f.src, &g.src, &h.src, &k.src), v.seq_mor(&v.par_mor(f, h), &v.par_mor(g, k))]),
            true,
        );
    });
    if !ex {
        c.r.note("zeta-natural: morphism quadruples sampled");
        if let Some(f) = c.r.families.get_mut("zeta-natural") {
            f.exhaustive = false;
        }
    }
    // bifunctoriality: (f;f') ⊗ (g;g') = (f⊗g);(f'⊗g')
    if !mors.is_empty() {
        for _ in 0..mcap.min(mors.len() * mors.len()) {
            let f = &mors[trng.gen_range(0..mors.len())];
            let g = &mors[trng.gen_range(0..mors.len())];
            let (Some(nf), Some(ng)) = (by_src.get(f.tgt.key()), by_src.get(g.tgt.key())) else { continue };
            let f2 = &mors[nf[trng.gen_range(0..nf.len())]];
            let g2 = &mors[ng[trng.gen_range(0..ng.len())]];
            let inst = || format!("{f:?}; {f2:?} | {g:?}; {g2:?}");
            let (ff, gg) = (v.compose(f, f2), v.compose(g, g2));
            if let (Ok(ff), Ok(gg)) = (ff, gg) {
                c.law("par-bifunctor", &inst, Ok(v.par_mor(&ff, &gg)), chain(v, &[v.par_mor(f, g), v.par_mor(f2, g2)]), false);
                c.law("seq-bifunctor", &inst, Ok(v.seq_mor(&ff, &gg)), chain(v, &[v.seq_mor(f, g), v.seq_mor(f2, g2)]), false);
            }
        }
        for a in p {
            for b in p {
                let inst = || show(&[a, b]);
                c.law("par-bifunctor-id", &inst, Ok(v.par_mor(&v.id(a), &v.id(b))), Ok(v.id(&v.par(a, b))), true);
                c.law("seq-bifunctor-id", &inst, Ok(v.seq_mor(&v.id(a), &v.id(b))), Ok(v.id(&v.seq(a, b))), true);
            }
        }
    }
    c.r
}

/// Whether `ζ_{A,B,C,D}` is injective and surjective, by enumeration.
pub fn zeta_injective_surjective(v: &dyn Duoidal, a: &Obj, b: &Obj, c: &Obj, d: &Obj) -> (bool, bool, Vec<Elem>) {
    let z = v.zeta(a, b, c, d);
    let dom = z.fn_dom().elements(1 << 16).expect("small domain");
    let cod = z.fn_cod().elements(1 << 16).expect("small codomain");
    let image: Vec<Elem> = dom.iter().map(|x| z.apply(x)).collect();
    let mut seen = std::collections::HashSet::new();
    let injective = image.iter().all(|y| seen.insert(y.clone()));
    let missing: Vec<Elem> = cod.into_iter().filter(|y| !seen.contains(y)).collect();
    (injective, missing.is_empty(), missing)
}

#[derive(Debug, Clone)]
pub struct ZetaWitness {
    pub objects: [Obj; 4],
    pub missing: Elem,
}

/// The first probe quadruple (in enumeration order) where `ζ` misses an
/// element of its codomain.
pub fn find_zeta_non_surjective(v: &dyn Duoidal, probes: &[Obj]) -> Option<ZetaWitness> {
    for a in probes {
        for b in probes {
            for c in probes {
                for d in probes {
                    let (_, surj, missing) = zeta_injective_surjective(v, a, b, c, d);
                    if !surj {
                        return Some(ZetaWitness {
                            objects: [a.clone(), b.clone(), c.clone(), d.clone()],
                            missing: missing[0].clone(),
                        });
                    }
                }
            }
        }
    }
    None
}
