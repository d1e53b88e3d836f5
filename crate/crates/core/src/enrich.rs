//! Double lax monoidal functors between duoidal categories, their checker,
//! change of enrichment for V-Freyd categories, and the shipped functors:
//! the identity, relabelling along a separated-monoid homomorphism, and the
//! forgetful functor `V(J, -)` into finite sets.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::duoidal::{
    chain, compare, finset_cartesian_duoidal, for_each_tuple, label_duoidal, rng_for, Ctx, Duoidal, LawCfg, Mor, Obj, Space,
    VError,
};
use crate::finset::{Elem, FinSet};
use crate::mcat::{BMor, MonBase, TypeObj};
use crate::report::LawReport;
use crate::sepmonoid::{pf_sep_monoid, SepMonoid};
use crate::vfreyd::{VFreyd, VFreydMor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnrichError {
    #[error(transparent)]
    Duoidal(#[from] VError),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("separation is not reflected: {0}")]
    NotReflecting(String),
    #[error("precondition {law} fails: {witness}")]
    Precondition { law: String, witness: String },
    #[error("{0}")]
    Mismatch(String),
    #[error("table line {line}: {msg}")]
    Table { line: usize, msg: String },
}

pub type ObjFn = Arc<dyn Fn(&Obj) -> Obj + Send + Sync>;
pub type MorFn = Arc<dyn Fn(&Mor) -> Mor + Send + Sync>;
pub type PairFn = Arc<dyn Fn(&Obj, &Obj) -> Mor + Send + Sync>;

/// A functor `F : V → W` with lax structure for both tensors.
#[derive(Clone)]
pub struct DoubleLaxFunctor {
    pub name: String,
    pub src: Arc<dyn Duoidal>,
    pub dst: Arc<dyn Duoidal>,
    pub obj: ObjFn,
    pub mor: MorFn,
    /// `J_W → F(J_V)`
    pub eta_par: Mor,
    /// `F(A) ∗ F(B) → F(A ∗ B)`
    pub mu_par: PairFn,
    /// `I_W → F(I_V)`
    pub eta_seq: Mor,
    /// `F(A) ∘ F(B) → F(A ∘ B)`
    pub mu_seq: PairFn,
}

impl DoubleLaxFunctor {
    pub fn on_obj(&self, a: &Obj) -> Obj {
        (self.obj)(a)
    }
    pub fn on_mor(&self, f: &Mor) -> Mor {
        (self.mor)(f)
    }
    pub fn mu_p(&self, a: &Obj, b: &Obj) -> Mor {
        (self.mu_par)(a, b)
    }
    pub fn mu_s(&self, a: &Obj, b: &Obj) -> Mor {
        (self.mu_seq)(a, b)
    }
}

pub fn identity_functor(v: Arc<dyn Duoidal>) -> DoubleLaxFunctor {
    let (v1, v2) = (v.clone(), v.clone());
    DoubleLaxFunctor {
        name: "Id".into(),
        src: v.clone(),
        dst: v.clone(),
        obj: Arc::new(|a| a.clone()),
        mor: Arc::new(|f| f.clone()),
        eta_par: v.id(&v.par_unit()),
        mu_par: Arc::new(move |a, b| v1.id(&v1.par(a, b))),
        eta_seq: v.id(&v.seq_unit()),
        mu_seq: Arc::new(move |a, b| v2.id(&v2.seq(a, b))),
    }
}

/// `G . F`, with `η_GF = G η_F . η_G` and `μ_GF = G μ_F . μ_G`.
pub fn compose_functors(f: &DoubleLaxFunctor, g: &DoubleLaxFunctor) -> Result<DoubleLaxFunctor, EnrichError> {
    if f.dst.name() != g.src.name() {
        return Err(EnrichError::Mismatch(format!("{} lands in {}, {} starts from {}", f.name, f.dst.name(), g.name, g.src.name())));
    }
    let w = g.dst.clone();
    let eta_par = w.compose(&g.eta_par, &g.on_mor(&f.eta_par))?;
    let eta_seq = w.compose(&g.eta_seq, &g.on_mor(&f.eta_seq))?;
    let (f1, g1, f2, g2, f3, g3, f4, g4) =
        (f.clone(), g.clone(), f.clone(), g.clone(), f.clone(), g.clone(), f.clone(), g.clone());
    let (w1, w2) = (w.clone(), w.clone());
    Ok(DoubleLaxFunctor {
        name: format!("{}.{}", g.name, f.name),
        src: f.src.clone(),
        dst: w,
        obj: Arc::new(move |a| g1.on_obj(&f1.on_obj(a))),
        mor: Arc::new(move |m| g2.on_mor(&f2.on_mor(m))),
        eta_par,
        mu_par: Arc::new(move |a, b| {
            let inner = g3.on_mor(&f3.mu_p(a, b));
            w1.compose(&g3.mu_p(&f3.on_obj(a), &f3.on_obj(b)), &inner).expect("composite μ∗ is typed")
        }),
        eta_seq,
        mu_seq: Arc::new(move |a, b| {
            let inner = g4.on_mor(&f4.mu_s(a, b));
            w2.compose(&g4.mu_s(&f4.on_obj(a), &f4.on_obj(b)), &inner).expect("composite μ∘ is typed")
        }),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct DlCfg {
    pub law: LawCfg,
    /// Morphisms enumerated per hom of the source.
    pub hom_limit: usize,
    /// Object tuples per law; larger families are sampled.
    pub max_object_tuples: usize,
}

impl Default for DlCfg {
    fn default() -> Self {
        DlCfg { law: LawCfg::default(), hom_limit: 16, max_object_tuples: 2048 }
    }
}

fn fits(n: usize, k: u32, cap: usize) -> bool {
    (n as u128).checked_pow(k).is_some_and(|t| t <= cap as u128)
}

fn keys(objs: &[&Obj]) -> String {
    objs.iter().map(|o| o.key().to_string()).collect::<Vec<_>>().join(", ")
}

/// Checks functoriality, validity and naturality of the structure maps,
/// both lax monoidal structures, and the `ζ` square, `ε` square and the
/// `Δ` and `∇` hexagons, all elementwise in the target.
pub fn check_double_lax(f: &DoubleLaxFunctor, probes: &[Obj], cfg: &DlCfg) -> LawReport {
    let (v, w) = (f.src.clone(), f.dst.clone());
    let title = format!("double lax functor {}: {} → {}", f.name, v.name(), w.name());
    let mut x = Ctx { v: &*w, r: LawReport::new(title), cfg: cfg.law, rng: rng_for(cfg.law.probe.seed, &f.name) };
    x.r.note(format!("{} probe objects", probes.len()));
    let n = probes.len();
    let cap = cfg.max_object_tuples;
    let mut trng = rng_for(cfg.law.probe.seed, "double-lax");
    let (jv, iv) = (v.par_unit(), v.seq_unit());
    let units = || String::from("units");

    x.valid("eta-par-valid", &units, &f.eta_par, true);
    x.valid("eta-seq-valid", &units, &f.eta_seq, true);
    x.law("eps-square", &units, w.compose(&f.eta_par, &f.on_mor(&v.eps())), w.compose(&w.eps(), &f.eta_seq), true);
    x.law(
        "delta-hexagon",
        &units,
        w.compose(&f.eta_par, &f.on_mor(&v.delta())),
        chain(&*w, &[w.delta(), w.seq_mor(&f.eta_par, &f.eta_par), f.mu_s(&jv, &jv)]),
        true,
    );
    x.law(
        "nabla-hexagon",
        &units,
        w.compose(&w.nabla(), &f.eta_seq),
        chain(&*w, &[w.par_mor(&f.eta_seq, &f.eta_seq), f.mu_p(&iv, &iv), f.on_mor(&v.nabla())]),
        true,
    );

    let ex = fits(n, 1, cap);
    for_each_tuple(&[n], cap, &mut trng, |i| {
        let a = &probes[i[0]];
        let fa = f.on_obj(a);
        let inst = || a.key().to_string();
        x.law("functor-id", &inst, Ok(f.on_mor(&v.id(a))), Ok(w.id(&fa)), ex);
        x.law(
            "par-lunit",
            &inst,
            chain(&*w, &[w.par_mor(&f.eta_par, &w.id(&fa)), f.mu_p(&jv, a), f.on_mor(&v.par_lunit(a))]),
            Ok(w.par_lunit(&fa)),
            ex,
        );
        x.law(
            "par-runit",
            &inst,
            chain(&*w, &[w.par_mor(&w.id(&fa), &f.eta_par), f.mu_p(a, &jv), f.on_mor(&v.par_runit(a))]),
            Ok(w.par_runit(&fa)),
            ex,
        );
        x.law(
            "seq-lunit",
            &inst,
            chain(&*w, &[w.seq_mor(&f.eta_seq, &w.id(&fa)), f.mu_s(&iv, a), f.on_mor(&v.seq_lunit(a))]),
            Ok(w.seq_lunit(&fa)),
            ex,
        );
        x.law(
            "seq-runit",
            &inst,
            chain(&*w, &[w.seq_mor(&w.id(&fa), &f.eta_seq), f.mu_s(a, &iv), f.on_mor(&v.seq_runit(a))]),
            Ok(w.seq_runit(&fa)),
            ex,
        );
    });

    let ex = fits(n, 2, cap);
    let lim = cfg.hom_limit;
    for_each_tuple(&[n, n], cap, &mut trng, |i| {
        let (a, b) = (&probes[i[0]], &probes[i[1]]);
        let inst = || keys(&[a, b]);
        x.valid("mu-par-valid", &inst, &f.mu_p(a, b), ex);
        x.valid("mu-seq-valid", &inst, &f.mu_s(a, b), ex);
        for h in v.hom_set(a, b, lim) {
            let hi = || format!("{} : {}", h.name, inst());
            x.valid("functor-valid", &hi, &f.on_mor(&h), ex);
        }
    });

    let ex = fits(n, 3, cap);
    let per = (cfg.law.max_morphism_instances / (n.pow(3).min(cap)).max(1)).max(1);
    let mut mrng = rng_for(cfg.law.probe.seed, "double-lax-mor");
    for_each_tuple(&[n, n, n], cap, &mut trng, |i| {
        let (a, b, c) = (&probes[i[0]], &probes[i[1]], &probes[i[2]]);
        let (fa, fb, fc) = (f.on_obj(a), f.on_obj(b), f.on_obj(c));
        let inst = || keys(&[a, b, c]);
        x.law(
            "par-assoc",
            &inst,
            chain(&*w, &[w.par_mor(&f.mu_p(a, b), &w.id(&fc)), f.mu_p(&v.par(a, b), c), f.on_mor(&v.par_assoc(a, b, c))]),
            chain(&*w, &[w.par_assoc(&fa, &fb, &fc), w.par_mor(&w.id(&fa), &f.mu_p(b, c)), f.mu_p(a, &v.par(b, c))]),
            ex,
        );
        x.law(
            "seq-assoc",
            &inst,
            chain(&*w, &[w.seq_mor(&f.mu_s(a, b), &w.id(&fc)), f.mu_s(&v.seq(a, b), c), f.on_mor(&v.seq_assoc(a, b, c))]),
            chain(&*w, &[w.seq_assoc(&fa, &fb, &fc), w.seq_mor(&w.id(&fa), &f.mu_s(b, c)), f.mu_s(a, &v.seq(b, c))]),
            ex,
        );
        let (hs, ks) = (v.hom_set(a, b, lim), v.hom_set(b, c, lim));
        let all = for_each_tuple(&[hs.len(), ks.len()], per, &mut mrng, |m| {
            let (h, k) = (&hs[m[0]], &ks[m[1]]);
            let mi = || format!("{} ; {} over {}", h.name, k.name, inst());
            let lhs = v.compose(h, k).map(|hk| f.on_mor(&hk));
            x.law("functor-comp", &mi, lhs, w.compose(&f.on_mor(h), &f.on_mor(k)), ex);
        });
        let _ = all;
    });

    let ex = fits(n, 4, cap);
    let per = (cfg.law.max_morphism_instances / (n.pow(4).min(cap)).max(1)).max(1);
    for_each_tuple(&[n, n, n, n], cap, &mut trng, |i| {
        let (a, b, c, d) = (&probes[i[0]], &probes[i[1]], &probes[i[2]], &probes[i[3]]);
        let inst = || keys(&[a, b, c, d]);
        let (fa, fb, fc, fd) = (f.on_obj(a), f.on_obj(b), f.on_obj(c), f.on_obj(d));
        x.law(
            "zeta-square",
            &inst,
            chain(
                &*w,
                &[
                    w.par_mor(&f.mu_s(a, b), &f.mu_s(c, d)),
                    f.mu_p(&v.seq(a, b), &v.seq(c, d)),
                    f.on_mor(&v.zeta(a, b, c, d)),
                ],
            ),
            chain(
                &*w,
                &[
                    w.zeta(&fa, &fb, &fc, &fd),
                    w.seq_mor(&f.mu_p(a, c), &f.mu_p(b, d)),
                    f.mu_s(&v.par(a, c), &v.par(b, d)),
                ],
            ),
            ex,
        );
        // naturality of μ in both arguments: h : a → b, k : c → d
        let (hs, ks) = (v.hom_set(a, b, lim), v.hom_set(c, d, lim));
        for_each_tuple(&[hs.len(), ks.len()], per, &mut mrng, |m| {
            let (h, k) = (&hs[m[0]], &ks[m[1]]);
            let mi = || format!("{}, {} over {}", h.name, k.name, inst());
            x.law(
                "mu-par-natural",
                &mi,
                w.compose(&w.par_mor(&f.on_mor(h), &f.on_mor(k)), &f.mu_p(b, d)),
                w.compose(&f.mu_p(a, c), &f.on_mor(&v.par_mor(h, k))),
                ex,
            );
            x.law(
                "mu-seq-natural",
                &mi,
                w.compose(&w.seq_mor(&f.on_mor(h), &f.on_mor(k)), &f.mu_s(b, d)),
                w.compose(&f.mu_s(a, c), &f.on_mor(&v.seq_mor(h, k))),
                ex,
            );
        });
    });
    x.r
}

/// Compares two functors with the same source and target: objects by key,
/// structure maps elementwise.
pub fn functors_agree(f: &DoubleLaxFunctor, g: &DoubleLaxFunctor, probes: &[Obj], cfg: &DlCfg) -> LawReport {
    let w = f.dst.clone();
    let mut x = Ctx { v: &*w, r: LawReport::new(format!("{} vs {}", f.name, g.name)), cfg: cfg.law, rng: rng_for(cfg.law.probe.seed, "agree") };
    let units = || String::from("units");
    x.law("eta-par-agree", &units, Ok(f.eta_par.clone()), Ok(g.eta_par.clone()), true);
    x.law("eta-seq-agree", &units, Ok(f.eta_seq.clone()), Ok(g.eta_seq.clone()), true);
    let n = probes.len();
    let mut trng = rng_for(cfg.law.probe.seed, "agree-tuples");
    let ex = fits(n, 2, cfg.max_object_tuples);
    for_each_tuple(&[n, n], cfg.max_object_tuples, &mut trng, |i| {
        let (a, b) = (&probes[i[0]], &probes[i[1]]);
        let inst = || keys(&[a, b]);
        x.law("mu-par-agree", &inst, Ok(f.mu_p(a, b)), Ok(g.mu_p(a, b)), ex);
        x.law("mu-seq-agree", &inst, Ok(f.mu_s(a, b)), Ok(g.mu_s(a, b)), ex);
    });
    x.r
}

/// A separated-monoid homomorphism given as an element map.
#[derive(Clone)]
pub struct SepHom {
    pub name: String,
    pub src: SepMonoid,
    pub dst: SepMonoid,
    pub map: Arc<dyn Fn(&Elem) -> Elem + Send + Sync>,
}

impl SepHom {
    pub fn apply(&self, m: &Elem) -> Elem {
        (self.map)(m)
    }

    pub fn from_table(name: &str, src: SepMonoid, dst: SepMonoid, table: BTreeMap<Elem, Elem>) -> SepHom {
        SepHom { name: name.into(), src, dst, map: Arc::new(move |m| table.get(m).cloned().unwrap_or_else(|| m.clone())) }
    }

    /// Parses `target r1,r2` followed by `m -> n` lines into a map
    /// `src → Pf({r1, r2})`. `#` starts a comment.
    pub fn parse_table(name: &str, src: SepMonoid, text: &str) -> Result<SepHom, EnrichError> {
        let mut target = None;
        let mut table = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| EnrichError::Table { line: i + 1, msg };
            if let Some(rest) = line.strip_prefix("target") {
                let names: Vec<&str> = rest.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
                let set = FinSet::from_strs(&names).map_err(|e| err(e.to_string()))?;
                target = Some(pf_sep_monoid(&set));
                continue;
            }
            let (l, r) = line.split_once("->").ok_or_else(|| err(format!("expected `m -> n`, got `{line}`")))?;
            let l = Elem::parse(l.trim()).map_err(|e| err(e.to_string()))?;
            let r = Elem::parse(r.trim()).map_err(|e| err(e.to_string()))?;
            if table.insert(l.clone(), r).is_some() {
                return Err(err(format!("{l} mapped twice")));
            }
        }
        let dst = target.ok_or(EnrichError::Table { line: 0, msg: "missing `target` line".into() })?;
        for m in carrier_or_probes(&src) {
            if !table.contains_key(&m) {
                return Err(EnrichError::Table { line: 0, msg: format!("no image for {m}") });
            }
        }
        Ok(SepHom::from_table(name, src, dst, table))
    }

    /// Checks the homomorphism equations, that images lie in the target,
    /// and that `φ(m) ∥ φ(m')` implies `m ∥ m'`.
    pub fn check(&self) -> Result<(), EnrichError> {
        let (m, n) = (&self.src, &self.dst);
        let xs = carrier_or_probes(m);
        if self.apply(&m.unit) != n.unit {
            return Err(EnrichError::NotHomomorphism(format!("φ({}) = {} ≠ {}", m.unit, self.apply(&m.unit), n.unit)));
        }
        for a in &xs {
            if !n.contains(&self.apply(a)) {
                return Err(EnrichError::NotHomomorphism(format!("φ({a}) = {} is not in {}", self.apply(a), n.name)));
            }
        }
        for a in &xs {
            for b in &xs {
                let (pa, pb) = (self.apply(a), self.apply(b));
                let lhs = self.apply(&m.mul(a, b));
                let rhs = n.mul(&pa, &pb);
                if lhs != rhs {
                    return Err(EnrichError::NotHomomorphism(format!("φ({a}·{b}) = {lhs} but φ({a})·φ({b}) = {rhs}")));
                }
                if n.separated(&pa, &pb) && !m.separated(a, b) {
                    return Err(EnrichError::NotReflecting(format!("φ({a}) = {pa} ∥ {pb} = φ({b}) but {a} ∦ {b}")));
                }
            }
        }
        Ok(())
    }
}

fn carrier_or_probes(m: &SepMonoid) -> Vec<Elem> {
    m.carrier.as_ref().map(|c| c.elems().to_vec()).unwrap_or_else(|| m.probes.clone())
}

/// `Pf(!) : Pf(R) → Pf(1)`, sending every nonempty set to the singleton.
pub fn pf_bang(resources: &FinSet) -> SepHom {
    let one = FinSet::singleton();
    let pt = Elem::list(vec![one.get(0).clone()]);
    SepHom {
        name: "Pf(!)".into(),
        src: pf_sep_monoid(resources),
        dst: pf_sep_monoid(&one),
        map: Arc::new(move |m| if m.as_list().is_some_and(|l| l.is_empty()) { Elem::list(vec![]) } else { pt.clone() }),
    }
}

/// A carrier with every grade pushed through `φ`.
struct Relabelled {
    inner: Obj,
    phi: Arc<dyn Fn(&Elem) -> Elem + Send + Sync>,
}

impl Space for Relabelled {
    fn strata(&self) -> Vec<(Elem, u128)> {
        self.inner.strata().iter().map(|s| ((self.phi)(&s.grade), s.size)).collect()
    }
    fn nth(&self, stratum: usize, i: u128) -> Elem {
        self.inner.nth(stratum, i)
    }
    fn grade_of(&self, x: &Elem) -> Option<Elem> {
        self.inner.grade_of(x).map(|g| (self.phi)(&g))
    }
}

/// `φ_* : Label_M → Label_N`, `ℓ ↦ φ.ℓ`, identity on functions. `η∗`, `η∘`
/// and `μ∘` are identities; `μ∗` includes the pairs separated after `φ`
/// into those separated before it. Rejects `φ` failing [`SepHom::check`].
pub fn sep_hom_functor(phi: &SepHom) -> Result<DoubleLaxFunctor, EnrichError> {
    phi.check()?;
    sep_hom_functor_unchecked(phi)
}

/// [`sep_hom_functor`] without the precondition scan. With a `φ` that does
/// not reflect separation, `μ∗` leaves its codomain.
pub fn sep_hom_functor_unchecked(phi: &SepHom) -> Result<DoubleLaxFunctor, EnrichError> {
    let v: Arc<dyn Duoidal> = Arc::new(label_duoidal(&phi.src)?);
    let w: Arc<dyn Duoidal> = Arc::new(label_duoidal(&phi.dst)?);
    let map = phi.map.clone();
    let tag = format!("{}*", phi.name);
    let t1 = tag.clone();
    let relabel: ObjFn = Arc::new(move |a| Obj::space(format!("{t1}{}", a.key()), Arc::new(Relabelled { inner: a.clone(), phi: map.clone() })));
    let (r1, r2, r3, r4) = (relabel.clone(), relabel.clone(), relabel.clone(), relabel.clone());
    let (v1, v2, w1, w2) = (v.clone(), v.clone(), w.clone(), w.clone());
    let inclusion = |src: Obj, tgt: Obj, name: &str| Mor::new(src, tgt, name.to_string(), |x| x.clone());
    Ok(DoubleLaxFunctor {
        name: tag,
        eta_par: inclusion(w.par_unit(), relabel(&v.par_unit()), "η∗"),
        eta_seq: inclusion(w.seq_unit(), relabel(&v.seq_unit()), "η∘"),
        obj: relabel,
        mor: Arc::new(move |f| Mor::from_arc(r1(&f.src), r1(&f.tgt), f.name.clone(), f.func())),
        mu_par: Arc::new(move |a, b| inclusion(w1.par(&r2(a), &r2(b)), r2(&v1.par(a, b)), "μ∗")),
        mu_seq: Arc::new(move |a, b| inclusion(w2.seq(&r3(a), &r3(b)), r4(&v2.seq(a, b)), "μ∘")),
        src: v,
        dst: w,
    })
}

/// Which inverse unitor `J → J ∗ J` the forgetful functor uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitorSide {
    Left,
    Right,
}

/// Morphisms `J → A` stored as one value at the point of `J`.
struct Points {
    inner: Obj,
    keep: Vec<usize>,
    grade_j: Elem,
    v: Arc<dyn Duoidal>,
}

impl Space for Points {
    fn strata(&self) -> Vec<(Elem, u128)> {
        let st = self.inner.strata();
        self.keep.iter().map(|&k| (Elem::star(), st[k].size)).collect()
    }
    fn nth(&self, stratum: usize, i: u128) -> Elem {
        Elem::list(vec![self.inner.nth(self.keep[stratum], i)])
    }
    fn grade_of(&self, x: &Elem) -> Option<Elem> {
        let [y] = x.as_list()? else { return None };
        let g = self.inner.grade_of(y)?;
        self.v.grade_ok(&self.grade_j, &g).then(Elem::star)
    }
}

/// Maximum carrier size materialised when `J` is not a singleton.
const POINTS_BUDGET: u128 = 4096;

/// `V(J, A)`: a morphism `J → A` is the list of its values on the elements
/// of `J`, in order.
fn points_obj(v: &Arc<dyn Duoidal>, js: &[Elem], a: &Obj) -> Obj {
    let key = format!("V(J,{})", a.key());
    let j = v.par_unit();
    if js.len() == 1 {
        let gj = j.grade_of(&js[0]).expect("point of J");
        let keep = a.strata().iter().enumerate().filter(|(_, s)| v.grade_ok(&gj, &s.grade)).map(|(k, _)| k).collect();
        return Obj::space(key, Arc::new(Points { inner: a.clone(), keep, grade_j: gj, v: v.clone() }));
    }
    let xs = a.elements(POINTS_BUDGET).unwrap_or_else(|| panic!("V(J, {}) is too large to enumerate", a.key()));
    let mut lists = vec![Vec::new()];
    for p in js {
        let gp = j.grade_of(p).expect("element of J");
        let ok: Vec<&Elem> = xs.iter().filter(|x| v.grade_ok(&gp, &a.grade_of(x).unwrap())).collect();
        lists = lists.into_iter().flat_map(|l| ok.iter().map(move |x| [l.clone(), vec![(*x).clone()]].concat())).collect();
    }
    let set = FinSet::new(lists.into_iter().map(Elem::list).collect()).expect("distinct functions");
    Obj::named_finite(&key, set.clone(), vec![Elem::star(); set.len()])
}

fn from_points(j: &Obj, js: Arc<Vec<Elem>>, a: &Obj, values: &Elem) -> Mor {
    let vals: Vec<Elem> = values.as_list().expect("point list").to_vec();
    Mor::new(j.clone(), a.clone(), "pt", move |x| vals[js.iter().position(|p| p == x).expect("point of J")].clone())
}

/// `V(J, -) : V → FinSet` with `η∗(⋆) = id`, `η∘(⋆) = ε`,
/// `μ∗(f1, f2) = (f1 ∗ f2) . φ` for the chosen inverse unitor `φ`, and
/// `μ∘(f1, f2) = (f1 ∘ f2) . Δ`.
pub fn forgetful_functor(v: Arc<dyn Duoidal>, side: UnitorSide) -> Result<DoubleLaxFunctor, EnrichError> {
    let j = v.par_unit();
    if v.id(&j).reversed {
        return Err(EnrichError::Mismatch(format!("morphisms of {} are not stored as forward functions", v.name())));
    }
    let js = Arc::new(j.elements(64).ok_or_else(|| EnrichError::Mismatch("J is too large".into()))?);
    let w: Arc<dyn Duoidal> = Arc::new(finset_cartesian_duoidal());
    let (v0, js0) = (v.clone(), js.clone());
    let obj: ObjFn = Arc::new(move |a| points_obj(&v0, &js0, a));
    let o1 = obj.clone();
    let mor: MorFn = Arc::new(move |f| {
        let g = f.func();
        Mor::new(o1(&f.src), o1(&f.tgt), format!("V(J,{})", f.name), move |l| {
            Elem::list(l.as_list().expect("point list").iter().map(|y| g(y)).collect())
        })
    });
    let phi = match side {
        UnitorSide::Left => v.par_lunit_inv(&j),
        UnitorSide::Right => v.par_runit_inv(&j),
    };
    let star = w.par_unit();
    let id_pts = Elem::list(js.to_vec());
    let eps = v.eps();
    let eps_pts = Elem::list(js.iter().map(|p| eps.apply(p)).collect());
    let eta_par = Mor::new(star.clone(), obj(&j), "η∗", move |_| id_pts.clone());
    let eta_seq = Mor::new(star, obj(&v.seq_unit()), "η∘", move |_| eps_pts.clone());

    let (v1, w1, o2, js1, j1) = (v.clone(), w.clone(), obj.clone(), js.clone(), j.clone());
    let mu_par: PairFn = Arc::new(move |a, b| {
        let (v, js, j, phi) = (v1.clone(), js1.clone(), j1.clone(), phi.clone());
        let (a, b) = (a.clone(), b.clone());
        Mor::new(w1.par(&o2(&a), &o2(&b)), o2(&v1.par(&a, &b)), "μ∗", move |x| {
            let t = v.par_mor(&from_points(&j, js.clone(), &a, x.left()), &from_points(&j, js.clone(), &b, x.right()));
            Elem::list(js.iter().map(|p| t.apply(&phi.apply(p))).collect())
        })
    });
    let (v2, w2, o3, js2, j2) = (v.clone(), w.clone(), obj.clone(), js.clone(), j.clone());
    let delta = v.delta();
    let mu_seq: PairFn = Arc::new(move |a, b| {
        let (v, js, j, delta) = (v2.clone(), js2.clone(), j2.clone(), delta.clone());
        let (a, b) = (a.clone(), b.clone());
        Mor::new(w2.seq(&o3(&a), &o3(&b)), o3(&v2.seq(&a, &b)), "μ∘", move |x| {
            let t = v.seq_mor(&from_points(&j, js.clone(), &a, x.left()), &from_points(&j, js.clone(), &b, x.right()));
            Elem::list(js.iter().map(|p| t.apply(&delta.apply(p))).collect())
        })
    });
    Ok(DoubleLaxFunctor {
        name: format!("{}(J,-)", v.name()),
        src: v,
        dst: w,
        obj,
        mor,
        eta_par,
        mu_par,
        eta_seq,
        mu_seq,
    })
}

/// `F̄(C)`: homs `F(C(a, b))`, `idt_F = F idt . η∘`, `seq_F = F seq . μ∘`,
/// `zero_F = F zero . η∗`, `par_F = F par . μ∗`.
#[derive(Clone)]
pub struct Changed {
    pub f: Arc<DoubleLaxFunctor>,
    pub c: Arc<dyn VFreyd>,
}

pub fn change_enrichment(f: Arc<DoubleLaxFunctor>, c: Arc<dyn VFreyd>) -> Result<Changed, EnrichError> {
    if c.v().name() != f.src.name() {
        return Err(EnrichError::Mismatch(format!("{} is enriched in {}, {} starts from {}", c.name(), c.v().name(), f.name, f.src.name())));
    }
    Ok(Changed { f, c })
}

/// [`change_enrichment`] after running both precondition suites.
pub fn checked_change_enrichment(
    f: Arc<DoubleLaxFunctor>,
    probes: &[Obj],
    c: Arc<dyn VFreyd>,
    types: &[TypeObj],
    cfg: &DlCfg,
    vf: &crate::vfreyd::VfCfg,
) -> Result<Changed, EnrichError> {
    let first = |r: &LawReport| {
        let law = r.failing_laws().first().cloned().unwrap_or_default();
        let witness = r.first_failure(&law).and_then(|x| x.counterexample.clone()).unwrap_or_default();
        EnrichError::Precondition { law, witness }
    };
    let r = check_double_lax(&f, probes, cfg);
    if !r.passed() {
        return Err(first(&r));
    }
    let r = crate::vfreyd::check_vfreyd(&*c, types, vf);
    if !r.passed() {
        return Err(first(&r));
    }
    change_enrichment(f, c)
}

impl VFreyd for Changed {
    fn name(&self) -> String {
        format!("{}⟨{}⟩", self.f.name, self.c.name())
    }
    fn v(&self) -> Arc<dyn Duoidal> {
        self.f.dst.clone()
    }
    fn base(&self) -> Arc<dyn MonBase> {
        self.c.base()
    }
    fn hom(&self, a: &TypeObj, b: &TypeObj) -> Obj {
        self.f.on_obj(&self.c.hom(a, b))
    }
    fn hom_map(&self, f: &BMor, g: &BMor) -> Mor {
        self.f.on_mor(&self.c.hom_map(f, g))
    }
    fn idt(&self, a: &TypeObj) -> Mor {
        self.f.dst.compose(&self.f.eta_seq, &self.f.on_mor(&self.c.idt(a))).expect("idt_F is typed")
    }
    fn seq(&self, a: &TypeObj, b: &TypeObj, c: &TypeObj) -> Mor {
        let mu = self.f.mu_s(&self.c.hom(a, b), &self.c.hom(b, c));
        self.f.dst.compose(&mu, &self.f.on_mor(&self.c.seq(a, b, c))).expect("seq_F is typed")
    }
    fn zero(&self) -> Mor {
        self.f.dst.compose(&self.f.eta_par, &self.f.on_mor(&self.c.zero())).expect("zero_F is typed")
    }
    fn par(&self, a1: &TypeObj, b1: &TypeObj, a2: &TypeObj, b2: &TypeObj) -> Option<Mor> {
        let p = self.c.par(a1, b1, a2, b2)?;
        let mu = self.f.mu_p(&self.c.hom(a1, b1), &self.c.hom(a2, b2));
        Some(self.f.dst.compose(&mu, &self.f.on_mor(&p)).expect("par_F is typed"))
    }
    fn type_probes(&self) -> Vec<TypeObj> {
        self.c.type_probes()
    }
}

/// `F̄(G) = (G0, F G1)`.
pub fn change_morphism(f: Arc<DoubleLaxFunctor>, g: &VFreydMor) -> VFreydMor {
    let g1 = g.f1.clone();
    VFreydMor {
        name: format!("{}⟨{}⟩", f.name, g.name),
        f1: Arc::new(move |a, b| f.on_mor(&g1(a, b))),
        ..g.clone()
    }
}

/// `par` on two hom elements, or `None` when the pair lies outside the
/// domain of `par`.
pub fn try_par(c: &dyn VFreyd, a1: &TypeObj, b1: &TypeObj, a2: &TypeObj, b2: &TypeObj, x: &Elem, y: &Elem) -> Option<Elem> {
    let p = c.par(a1, b1, a2, b2)?;
    let xy = Elem::pair(x.clone(), y.clone());
    p.src.contains(&xy).then(|| p.apply(&xy))
}

/// Hom carrier sizes per grade for every pair of types.
pub fn hom_profile(c: &dyn VFreyd, types: &[TypeObj]) -> Vec<(TypeObj, TypeObj, Vec<(Elem, u128)>)> {
    let mut out = Vec::new();
    for a in types {
        for b in types {
            let mut by: Vec<(Elem, u128)> = Vec::new();
            for s in c.hom(a, b).strata().iter() {
                match by.iter_mut().find(|(g, _)| *g == s.grade) {
                    Some((_, n)) => *n += s.size,
                    None => by.push((s.grade.clone(), s.size)),
                }
            }
            out.push((a.clone(), b.clone(), by));
        }
    }
    out
}

/// Elementwise comparison of two V-Freyd categories over the same base and
/// enrichment: hom keys, `hom_map`, `idt`, `seq`, `zero` and `par`.
pub fn vfreyd_agree(x: &dyn VFreyd, y: &dyn VFreyd, types: &[TypeObj], cfg: &LawCfg) -> LawReport {
    let v = x.v();
    let mut r = LawReport::new(format!("{} vs {}", x.name(), y.name()));
    let mut rng = rng_for(cfg.probe.seed, "vfreyd-agree");
    let ok = |s: &Elem, t: &Elem| v.grade_ok(s, t);
    let mut cmp = |r: &mut LawReport, law: &str, inst: String, l: &Mor, m: &Mor| {
        r.check(law, inst, compare(l, m, &ok, &cfg.probe, &mut rng).map(|(n, _)| n));
    };
    let z = || String::from("zero");
    cmp(&mut r, "zero", z(), &x.zero(), &y.zero());
    let base = x.base();
    for a in types {
        cmp(&mut r, "idt", a.to_string(), &x.idt(a), &y.idt(a));
        for b in types {
            let (ha, hb) = (x.hom(a, b), y.hom(a, b));
            r.check("hom", format!("{a}, {b}"), if ha == hb { Ok(1) } else { Err(format!("{} vs {}", ha.key(), hb.key())) });
            for c in types {
                cmp(&mut r, "seq", format!("{a}, {b}, {c}"), &x.seq(a, b, c), &y.seq(a, b, c));
            }
            let (fs, gs) = (base.homs(a, a, 4, cfg.probe.seed), base.homs(b, b, 4, cfg.probe.seed));
            for f in &fs {
                for g in &gs {
                    cmp(&mut r, "hom-map", format!("{f:?}, {g:?}"), &x.hom_map(f, g), &y.hom_map(f, g));
                }
            }
        }
    }
    for a1 in types {
        for b1 in types {
            for a2 in types {
                for b2 in types {
                    if let (Some(p), Some(q)) = (x.par(a1, b1, a2, b2), y.par(a1, b1, a2, b2)) {
                        cmp(&mut r, "par", format!("{a1}, {b1}, {a2}, {b2}"), &p, &q);
                    }
                }
            }
        }
    }
    r
}
