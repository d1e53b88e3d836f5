//! Duoidal categories `(V, ∗, J, ∘, I)` with interchange `ζ` and the maps
//! `Δ : J → J∘J`, `∇ : I∗I → I`, `ε : J → I`, plus the shipped instances.

mod check;
mod obj;

use std::sync::Arc;

pub use check::{
    check_duoidal_laws, check_duoidal_laws_with, default_probes, find_zeta_non_surjective, zeta_injective_surjective,
    LawCfg, ZetaWitness,
};
pub(crate) use check::{for_each_tuple, Ctx};
pub use obj::{compare, is_stray, rng_for, stray, validate, ElemFn, GradeOp, GradePred, GradeRel, Mor, Obj, ProbeCfg, Space, Stratum, VError};

use crate::finset::{inl, inr, Elem, FinSet};
use crate::sepmonoid::{check_separated_laws, SepMonoid};

/// A duoidal category whose morphisms are functions between graded sets.
/// `∗` is the parallel tensor with unit `J`, `∘` the sequential tensor with
/// unit `I`.
pub trait Duoidal: Send + Sync {
    fn name(&self) -> String;

    fn par_unit(&self) -> Obj;
    fn seq_unit(&self) -> Obj;
    fn par(&self, a: &Obj, b: &Obj) -> Obj;
    fn seq(&self, a: &Obj, b: &Obj) -> Obj;
    fn par_mor(&self, f: &Mor, g: &Mor) -> Mor;
    fn seq_mor(&self, f: &Mor, g: &Mor) -> Mor;

    /// `(a∗b)∗c → a∗(b∗c)`
    fn par_assoc(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor;
    fn par_assoc_inv(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor;
    /// `J∗a → a`
    fn par_lunit(&self, a: &Obj) -> Mor;
    fn par_lunit_inv(&self, a: &Obj) -> Mor;
    /// `a∗J → a`
    fn par_runit(&self, a: &Obj) -> Mor;
    fn par_runit_inv(&self, a: &Obj) -> Mor;
    fn seq_assoc(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor;
    fn seq_assoc_inv(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor;
    fn seq_lunit(&self, a: &Obj) -> Mor;
    fn seq_lunit_inv(&self, a: &Obj) -> Mor;
    fn seq_runit(&self, a: &Obj) -> Mor;
    fn seq_runit_inv(&self, a: &Obj) -> Mor;

    /// `(a∘b)∗(c∘d) → (a∗c)∘(b∗d)`
    fn zeta(&self, a: &Obj, b: &Obj, c: &Obj, d: &Obj) -> Mor;
    fn delta(&self) -> Mor;
    fn nabla(&self) -> Mor;
    fn eps(&self) -> Mor;

    fn id(&self, a: &Obj) -> Mor;
    /// `f` then `g`.
    fn compose(&self, f: &Mor, g: &Mor) -> Result<Mor, VError>;
    /// Whether a function sending grade `src` to grade `tgt` is allowed.
    fn grade_ok(&self, src: &Elem, tgt: &Elem) -> bool;
    /// Default probe objects with carriers of at most `max_size` elements.
    fn probe_objects(&self, max_size: usize) -> Vec<Obj>;

    /// Up to `limit` morphisms `a → b` between finite objects.
    fn hom_set(&self, a: &Obj, b: &Obj, limit: usize) -> Vec<Mor> {
        function_homs(self, a, b, limit)
    }
}

/// Composes a chain of morphisms left to right.
pub fn chain(v: &dyn Duoidal, ms: &[Mor]) -> Result<Mor, VError> {
    let mut it = ms.iter();
    let mut acc = it.next().expect("nonempty chain").clone();
    for m in it {
        acc = v.compose(&acc, m)?;
    }
    Ok(acc)
}

/// Every grade-respecting function between two finite objects.
pub fn function_homs<V: Duoidal + ?Sized>(v: &V, a: &Obj, b: &Obj, limit: usize) -> Vec<Mor> {
    let (Some(xs), Some(ys)) = (a.elements(64), b.elements(64)) else {
        return Vec::new();
    };
    let dom = FinSet::new(xs.clone()).expect("carrier elements are distinct");
    let cod = FinSet::new(ys.clone()).expect("carrier elements are distinct");
    let mut out = Vec::new();
    for f in crate::finset::enumerate_functions(&dom, &cod) {
        let ok = xs.iter().enumerate().all(|(i, x)| {
            let y = &ys[f.apply_idx(i)];
            v.grade_ok(&a.grade_of(x).unwrap(), &b.grade_of(y).unwrap())
        });
        if ok {
            let name = format!("{f:?}");
            let g = f.clone();
            out.push(Mor::new(a.clone(), b.clone(), name, move |x| g.apply(x).unwrap_or_else(|| x.clone())));
            if out.len() >= limit {
                break;
            }
        }
    }
    out
}

/// One tensor product on graded sets.
#[derive(Clone)]
pub struct SetTensor {
    pub symbol: &'static str,
    pub kind: TensorKind,
    pub unit: Obj,
}

#[derive(Clone)]
pub enum TensorKind {
    /// Pairs, graded by `combine`, restricted by `keep`.
    Product { combine: GradeOp, keep: Option<GradeRel> },
    /// Tagged disjoint union.
    Sum,
}

impl SetTensor {
    pub fn product(symbol: &'static str, unit: Obj, combine: GradeOp, keep: Option<GradeRel>) -> SetTensor {
        SetTensor { symbol, kind: TensorKind::Product { combine, keep }, unit }
    }

    pub fn obj(&self, a: &Obj, b: &Obj) -> Obj {
        match &self.kind {
            TensorKind::Product { combine, keep } => Obj::product(a, b, self.symbol, combine.clone(), keep.clone()),
            TensorKind::Sum => Obj::sum(a, b),
        }
    }

    pub fn mor(&self, f: &Mor, g: &Mor) -> Mor {
        let (f1, g1) = (f.func(), g.func());
        let name = format!("({} {} {})", f.name, self.symbol, g.name);
        let src = self.obj(&f.src, &g.src);
        let tgt = self.obj(&f.tgt, &g.tgt);
        match self.kind {
            TensorKind::Product { .. } => {
                Mor::new(src, tgt, name, move |x| Elem::pair(f1(x.left()), g1(x.right())))
            }
            TensorKind::Sum => Mor::new(src, tgt, name, move |x| {
                let (tag, y) = x.as_pair().expect("tagged element");
                if tag.as_int() == Some(0) {
                    inl(f1(y))
                } else {
                    inr(g1(y))
                }
            }),
        }
    }

    pub fn assoc(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor {
        let src = self.obj(&self.obj(a, b), c);
        let tgt = self.obj(a, &self.obj(b, c));
        match self.kind {
            TensorKind::Product { .. } => Mor::new(src, tgt, format!("α{}", self.symbol), |x| {
                let (xy, z) = x.as_pair().unwrap();
                let (x0, y) = xy.as_pair().unwrap();
                Elem::pair(x0.clone(), Elem::pair(y.clone(), z.clone()))
            }),
            TensorKind::Sum => Mor::new(src, tgt, "α+", |x| {
                let (t, y) = x.as_pair().unwrap();
                if t.as_int() == Some(1) {
                    return inr(inr(y.clone()));
                }
                let (t2, z) = y.as_pair().unwrap();
                if t2.as_int() == Some(0) {
                    inl(z.clone())
                } else {
                    inr(inl(z.clone()))
                }
            }),
        }
    }

    pub fn assoc_inv(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor {
        let src = self.obj(a, &self.obj(b, c));
        let tgt = self.obj(&self.obj(a, b), c);
        match self.kind {
            TensorKind::Product { .. } => Mor::new(src, tgt, format!("α{}⁻¹", self.symbol), |x| {
                let (x0, yz) = x.as_pair().unwrap();
                let (y, z) = yz.as_pair().unwrap();
                Elem::pair(Elem::pair(x0.clone(), y.clone()), z.clone())
            }),
            TensorKind::Sum => Mor::new(src, tgt, "α+⁻¹", |x| {
                let (t, y) = x.as_pair().unwrap();
                if t.as_int() == Some(0) {
                    return inl(inl(y.clone()));
                }
                let (t2, z) = y.as_pair().unwrap();
                if t2.as_int() == Some(0) {
                    inl(inr(z.clone()))
                } else {
                    inr(z.clone())
                }
            }),
        }
    }

    pub fn lunit(&self, a: &Obj) -> Mor {
        let src = self.obj(&self.unit, a);
        match self.kind {
            TensorKind::Product { .. } => {
                Mor::new(src, a.clone(), format!("λ{}", self.symbol), |x| x.right().clone())
            }
            TensorKind::Sum => Mor::new(src, a.clone(), "λ+", |x| x.right().clone()),
        }
    }

    pub fn lunit_inv(&self, a: &Obj) -> Mor {
        let tgt = self.obj(&self.unit, a);
        match self.kind {
            TensorKind::Product { .. } => {
                let u = self.unit.point();
                Mor::new(a.clone(), tgt, format!("λ{}⁻¹", self.symbol), move |x| Elem::pair(u.clone(), x.clone()))
            }
            TensorKind::Sum => Mor::new(a.clone(), tgt, "λ+⁻¹", |x| inr(x.clone())),
        }
    }

    pub fn runit(&self, a: &Obj) -> Mor {
        let src = self.obj(a, &self.unit);
        match self.kind {
            TensorKind::Product { .. } => {
                Mor::new(src, a.clone(), format!("ρ{}", self.symbol), |x| x.left().clone())
            }
            TensorKind::Sum => Mor::new(src, a.clone(), "ρ+", |x| x.right().clone()),
        }
    }

    pub fn runit_inv(&self, a: &Obj) -> Mor {
        let tgt = self.obj(a, &self.unit);
        match self.kind {
            TensorKind::Product { .. } => {
                let u = self.unit.point();
                Mor::new(a.clone(), tgt, format!("ρ{}⁻¹", self.symbol), move |x| Elem::pair(x.clone(), u.clone()))
            }
            TensorKind::Sum => Mor::new(a.clone(), tgt, "ρ+⁻¹", |x| inl(x.clone())),
        }
    }
}

type ZetaOverride = Arc<dyn Fn(&SetDuoidal, &Obj, &Obj, &Obj, &Obj) -> Mor + Send + Sync>;
type MorOverride = Arc<dyn Fn(&SetDuoidal) -> Mor + Send + Sync>;

/// A duoidal category on graded sets given by two tensors and elementwise
/// structure maps.
#[derive(Clone)]
pub struct SetDuoidal {
    pub name: String,
    pub par_t: SetTensor,
    pub seq_t: SetTensor,
    zeta_fn: ElemFn,
    delta_fn: ElemFn,
    nabla_fn: ElemFn,
    eps_fn: ElemFn,
    grade_ok: GradeRel,
    probes: Arc<dyn Fn(usize) -> Vec<Obj> + Send + Sync>,
    zeta_override: Option<ZetaOverride>,
    delta_override: Option<MorOverride>,
}

fn middle_four_elem(x: &Elem) -> Elem {
    let (pq, rs) = x.as_pair().expect("pair of pairs");
    let (p, q) = pq.as_pair().expect("pair");
    let (r, s) = rs.as_pair().expect("pair");
    Elem::pair(Elem::pair(p.clone(), r.clone()), Elem::pair(q.clone(), s.clone()))
}

impl SetDuoidal {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        par_t: SetTensor,
        seq_t: SetTensor,
        zeta_fn: ElemFn,
        delta_fn: ElemFn,
        nabla_fn: ElemFn,
        eps_fn: ElemFn,
        grade_ok: GradeRel,
        probes: Arc<dyn Fn(usize) -> Vec<Obj> + Send + Sync>,
    ) -> SetDuoidal {
        SetDuoidal {
            name: name.into(),
            par_t,
            seq_t,
            zeta_fn,
            delta_fn,
            nabla_fn,
            eps_fn,
            grade_ok,
            probes,
            zeta_override: None,
            delta_override: None,
        }
    }

    /// The unmodified interchange, for use inside overrides.
    pub fn plain_zeta(&self, a: &Obj, b: &Obj, c: &Obj, d: &Obj) -> Mor {
        let src = self.par(&self.seq(a, b), &self.seq(c, d));
        let tgt = self.seq(&self.par(a, c), &self.par(b, d));
        Mor::from_arc(src, tgt, "ζ", self.zeta_fn.clone())
    }
}

impl Duoidal for SetDuoidal {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn par_unit(&self) -> Obj {
        self.par_t.unit.clone()
    }
    fn seq_unit(&self) -> Obj {
        self.seq_t.unit.clone()
    }
    fn par(&self, a: &Obj, b: &Obj) -> Obj {
        self.par_t.obj(a, b)
    }
    fn seq(&self, a: &Obj, b: &Obj) -> Obj {
        self.seq_t.obj(a, b)
    }
    fn par_mor(&self, f: &Mor, g: &Mor) -> Mor {
        self.par_t.mor(f, g)
    }
    fn seq_mor(&self, f: &Mor, g: &Mor) -> Mor {
        self.seq_t.mor(f, g)
    }
    fn par_assoc(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor {
        self.par_t.assoc(a, b, c)
    }
    fn par_assoc_inv(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor {
        self.par_t.assoc_inv(a, b, c)
    }
    fn par_lunit(&self, a: &Obj) -> Mor {
        self.par_t.lunit(a)
    }
    fn par_lunit_inv(&self, a: &Obj) -> Mor {
        self.par_t.lunit_inv(a)
    }
    fn par_runit(&self, a: &Obj) -> Mor {
        self.par_t.runit(a)
    }
    fn par_runit_inv(&self, a: &Obj) -> Mor {
        self.par_t.runit_inv(a)
    }
    fn seq_assoc(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor {
        self.seq_t.assoc(a, b, c)
    }
    fn seq_assoc_inv(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor {
        self.seq_t.assoc_inv(a, b, c)
    }
    fn seq_lunit(&self, a: &Obj) -> Mor {
        self.seq_t.lunit(a)
    }
    fn seq_lunit_inv(&self, a: &Obj) -> Mor {
        self.seq_t.lunit_inv(a)
    }
    fn seq_runit(&self, a: &Obj) -> Mor {
        self.seq_t.runit(a)
    }
    fn seq_runit_inv(&self, a: &Obj) -> Mor {
        self.seq_t.runit_inv(a)
    }
    fn zeta(&self, a: &Obj, b: &Obj, c: &Obj, d: &Obj) -> Mor {
        match &self.zeta_override {
            Some(z) => z(self, a, b, c, d),
            None => self.plain_zeta(a, b, c, d),
        }
    }
    fn delta(&self) -> Mor {
        if let Some(d) = &self.delta_override {
            return d(self);
        }
        let j = self.par_unit();
        Mor::from_arc(j.clone(), self.seq(&j, &j), "Δ", self.delta_fn.clone())
    }
    fn nabla(&self) -> Mor {
        let i = self.seq_unit();
        Mor::from_arc(self.par(&i, &i), i, "∇", self.nabla_fn.clone())
    }
    fn eps(&self) -> Mor {
        Mor::from_arc(self.par_unit(), self.seq_unit(), "ε", self.eps_fn.clone())
    }
    fn id(&self, a: &Obj) -> Mor {
        Mor::identity(a)
    }
    fn compose(&self, f: &Mor, g: &Mor) -> Result<Mor, VError> {
        f.then(g)
    }
    fn grade_ok(&self, src: &Elem, tgt: &Elem) -> bool {
        (self.grade_ok)(src, tgt)
    }
    fn probe_objects(&self, max_size: usize) -> Vec<Obj> {
        (self.probes)(max_size)
    }
}

fn star_grades() -> GradeOp {
    Arc::new(|_, _| Elem::star())
}

fn unit_obj(grade: Elem) -> Obj {
    Obj::finite(FinSet::singleton(), vec![grade])
}

fn carrier(n: usize) -> FinSet {
    FinSet::new((0..n).map(|i| Elem::atom(&format!("a{i}"))).collect()).unwrap()
}

fn pair_diag(x: &Elem) -> Elem {
    Elem::pair(x.clone(), x.clone())
}

/// FinSet with both tensors the cartesian product; `ζ` is middle-four.
pub fn finset_cartesian_duoidal() -> SetDuoidal {
    let one = unit_obj(Elem::star());
    SetDuoidal::new(
        "FinSet(×,×)",
        SetTensor::product("×", one.clone(), star_grades(), None),
        SetTensor::product("·", one, star_grades(), None),
        Arc::new(middle_four_elem),
        Arc::new(pair_diag),
        Arc::new(|_| Elem::star()),
        Arc::new(|x| x.clone()),
        Arc::new(|_, _| true),
        Arc::new(|max| (0..=max).map(|n| Obj::plain(carrier(n))).collect()),
    )
}

/// FinSet with `∗ = +` (unit `∅`) and `∘ = ×` (unit `1`).
pub fn finset_cocartesian_duoidal() -> SetDuoidal {
    let zero = Obj::plain(FinSet::empty());
    let one = unit_obj(Elem::star());
    SetDuoidal::new(
        "FinSet(+,×)",
        SetTensor { symbol: "+", kind: TensorKind::Sum, unit: zero },
        SetTensor::product("×", one, star_grades(), None),
        Arc::new(|x| {
            let (tag, p) = x.as_pair().expect("tagged");
            let (l, r) = p.as_pair().expect("pair");
            if tag.as_int() == Some(0) {
                Elem::pair(inl(l.clone()), inl(r.clone()))
            } else {
                Elem::pair(inr(l.clone()), inr(r.clone()))
            }
        }),
        Arc::new(|x| x.clone()),
        Arc::new(|_| Elem::star()),
        Arc::new(|x| x.clone()),
        Arc::new(|_, _| true),
        Arc::new(|max| (0..=max).map(|n| Obj::plain(carrier(n))).collect()),
    )
}

/// Grade of distinguished elements in Subset.
pub const IN: Elem = Elem::Int(1);
/// Grade of the remaining elements in Subset.
pub const OUT: Elem = Elem::Int(0);

fn is_in(g: &Elem) -> bool {
    g.as_int() == Some(1)
}

fn subset_and() -> GradeOp {
    Arc::new(|a, b| Elem::Int((is_in(a) && is_in(b)) as i64))
}

fn subset_or() -> GradeRel {
    Arc::new(|a, b| is_in(a) || is_in(b))
}

/// The Subset object `(X ⊆ A)`.
pub fn subset_obj(x: &[Elem], a: &FinSet) -> Obj {
    let grades = a.iter().map(|e| Elem::Int(x.contains(e) as i64)).collect();
    Obj::finite(a.clone(), grades)
}

fn subset_probes(max: usize) -> Vec<Obj> {
    let mut out = Vec::new();
    for n in 0..=max {
        let a = carrier(n);
        for mask in 0u32..(1 << n) {
            let x: Vec<Elem> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| a.get(i).clone()).collect();
            out.push(subset_obj(&x, &a));
        }
    }
    out
}

/// Subset: objects `(X ⊆ A)`, morphisms preserving the distinguished part.
/// `∗` is the disjunctive product with carrier `(A×Y) ∪ (X×B)`, `∘` the
/// cartesian product; `ζ` is middle-four restricted to the disjunctive
/// carrier.
pub fn subset_duoidal() -> SetDuoidal {
    let one = unit_obj(IN);
    SetDuoidal::new(
        "Subset",
        SetTensor::product("⊗", one.clone(), subset_and(), Some(subset_or())),
        SetTensor::product("×", one, subset_and(), None),
        Arc::new(middle_four_elem),
        Arc::new(pair_diag),
        Arc::new(|_| Elem::star()),
        Arc::new(|x| x.clone()),
        Arc::new(|s, t| !is_in(s) || is_in(t)),
        Arc::new(subset_probes),
    )
}

/// A labelled set `ℓ : A → M`.
pub fn label_obj(a: &FinSet, labels: Vec<Elem>) -> Obj {
    Obj::finite(a.clone(), labels)
}

/// Label objects with at most `max` elements, one per multiset of labels.
pub fn label_probes(labels: &[Elem], max: usize) -> Vec<Obj> {
    fn rec(labels: &[Elem], start: usize, left: usize, cur: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in start..labels.len() {
            cur.push(labels[i].clone());
            rec(labels, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut multisets = Vec::new();
    rec(labels, 0, max, &mut Vec::new(), &mut multisets);
    multisets.sort_by_key(|m| m.len());
    multisets.into_iter().map(|ls| label_obj(&carrier(ls.len()), ls)).collect()
}

/// `Label_M`: `∘` is the pointwise-multiplied product `•`, `∗` its
/// restriction `∥` to separated label pairs; both units are `cst_e`.
/// Rejects `m` when its separation laws fail on its probes.
pub fn label_duoidal(m: &SepMonoid) -> Result<SetDuoidal, VError> {
    let rep = check_separated_laws(m, None);
    if !rep.passed() {
        let w = rep.failures.first().map(|r| format!("{}: {}", r.law, r.counterexample.clone().unwrap_or_default()));
        return Err(VError::Invalid(format!("{} is not a separated monoid ({})", m.name, w.unwrap_or_default())));
    }
    let e = unit_obj(m.unit.clone());
    let (m1, m2, m3) = (m.clone(), m.clone(), m.clone());
    let mul: GradeOp = Arc::new(move |a, b| m1.mul(a, b));
    let mul2: GradeOp = Arc::new(move |a, b| m2.mul(a, b));
    let sep: GradeRel = Arc::new(move |a, b| m3.separated(a, b));
    let labels = m.probes.clone();
    Ok(SetDuoidal::new(
        format!("Label[{}]", m.name),
        SetTensor::product("∥", e.clone(), mul, Some(sep)),
        SetTensor::product("•", e, mul2, None),
        Arc::new(middle_four_elem),
        Arc::new(pair_diag),
        Arc::new(|_| Elem::star()),
        Arc::new(|x| x.clone()),
        Arc::new(|s, t| s == t),
        Arc::new(move |max| label_probes(&labels, max)),
    ))
}

/// The opposite duoidal category `(V^op, ∘, I, ∗, J)`.
#[derive(Clone)]
pub struct Opposite(pub Arc<dyn Duoidal>);

pub fn opposite_duoidal(v: Arc<dyn Duoidal>) -> Opposite {
    Opposite(v)
}

impl Duoidal for Opposite {
    fn name(&self) -> String {
        format!("({})^op", self.0.name())
    }
    fn par_unit(&self) -> Obj {
        self.0.seq_unit()
    }
    fn seq_unit(&self) -> Obj {
        self.0.par_unit()
    }
    fn par(&self, a: &Obj, b: &Obj) -> Obj {
        self.0.seq(a, b)
    }
    fn seq(&self, a: &Obj, b: &Obj) -> Obj {
        self.0.par(a, b)
    }
    fn par_mor(&self, f: &Mor, g: &Mor) -> Mor {
        self.0.seq_mor(&f.flip(), &g.flip()).flip()
    }
    fn seq_mor(&self, f: &Mor, g: &Mor) -> Mor {
        self.0.par_mor(&f.flip(), &g.flip()).flip()
    }
    fn par_assoc(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor {
        self.0.seq_assoc_inv(a, b, c).flip()
    }
    fn par_assoc_inv(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor {
        self.0.seq_assoc(a, b, c).flip()
    }
    fn par_lunit(&self, a: &Obj) -> Mor {
        self.0.seq_lunit_inv(a).flip()
    }
    fn par_lunit_inv(&self, a: &Obj) -> Mor {
        self.0.seq_lunit(a).flip()
    }
    fn par_runit(&self, a: &Obj) -> Mor {
        self.0.seq_runit_inv(a).flip()
    }
    fn par_runit_inv(&self, a: &Obj) -> Mor {
        self.0.seq_runit(a).flip()
    }
    fn seq_assoc(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor {
        self.0.par_assoc_inv(a, b, c).flip()
    }
    fn seq_assoc_inv(&self, a: &Obj, b: &Obj, c: &Obj) -> Mor {
        self.0.par_assoc(a, b, c).flip()
    }
    fn seq_lunit(&self, a: &Obj) -> Mor {
        self.0.par_lunit_inv(a).flip()
    }
    fn seq_lunit_inv(&self, a: &Obj) -> Mor {
        self.0.par_lunit(a).flip()
    }
    fn seq_runit(&self, a: &Obj) -> Mor {
        self.0.par_runit_inv(a).flip()
    }
    fn seq_runit_inv(&self, a: &Obj) -> Mor {
        self.0.par_runit(a).flip()
    }
    fn zeta(&self, a: &Obj, b: &Obj, c: &Obj, d: &Obj) -> Mor {
        self.0.zeta(a, c, b, d).flip()
    }
    fn delta(&self) -> Mor {
        self.0.nabla().flip()
    }
    fn nabla(&self) -> Mor {
        self.0.delta().flip()
    }
    fn eps(&self) -> Mor {
        self.0.eps().flip()
    }
    fn id(&self, a: &Obj) -> Mor {
        self.0.id(a).flip()
    }
    fn compose(&self, f: &Mor, g: &Mor) -> Result<Mor, VError> {
        Ok(self.0.compose(&g.flip(), &f.flip())?.flip())
    }
    fn grade_ok(&self, src: &Elem, tgt: &Elem) -> bool {
        self.0.grade_ok(src, tgt)
    }
    fn probe_objects(&self, max_size: usize) -> Vec<Obj> {
        self.0.probe_objects(max_size)
    }
    fn hom_set(&self, a: &Obj, b: &Obj, limit: usize) -> Vec<Mor> {
        self.0.hom_set(b, a, limit).iter().map(Mor::flip).collect()
    }
}

/// A category on graded sets with a monoidal product `⊗` and a chosen
/// cartesian product `×` with terminal object.
#[derive(Clone)]
pub struct ProductsInput {
    pub name: String,
    pub tensor: SetTensor,
    pub product: SetTensor,
    pub grade_ok: GradeRel,
    pub probes: Arc<dyn Fn(usize) -> Vec<Obj> + Send + Sync>,
}

/// The FinSet input: `⊗ = ×`.
pub fn finset_products() -> ProductsInput {
    let v = finset_cartesian_duoidal();
    ProductsInput {
        name: "FinSet".into(),
        tensor: v.par_t.clone(),
        product: v.seq_t.clone(),
        grade_ok: v.grade_ok.clone(),
        probes: v.probes.clone(),
    }
}

/// The Subset input: `⊗` the disjunctive product, `×` componentwise.
pub fn subset_products() -> ProductsInput {
    let v = subset_duoidal();
    ProductsInput {
        name: "Subset".into(),
        tensor: v.par_t.clone(),
        product: v.seq_t.clone(),
        grade_ok: v.grade_ok.clone(),
        probes: v.probes.clone(),
    }
}

/// Checks that `×` with its projections is a product and its unit is
/// terminal, on probe objects with at most `max` elements.
pub fn check_product_witness(p: &ProductsInput, max: usize) -> Result<(), VError> {
    let TensorKind::Product { .. } = p.product.kind else {
        return Err(VError::Invalid("the chosen product must be a pairing tensor".into()));
    };
    let ok = |s: &Elem, t: &Elem| (p.grade_ok)(s, t);
    let objs = (p.probes)(max);
    let term = &p.product.unit;
    if term.count() != 1 {
        return Err(VError::Invalid(format!("terminal candidate {term} is not a singleton")));
    }
    for z in &objs {
        let zs = z.elements(64).unwrap_or_default();
        let pt = term.point();
        if let Some(x) = zs.iter().find(|x| !ok(&z.grade_of(x).unwrap(), &term.grade_of(&pt).unwrap())) {
            return Err(VError::Invalid(format!("no map {z} → {term}: {x} cannot be sent to the point")));
        }
        for a in &objs {
            for b in &objs {
                let ab = p.product.obj(a, b);
                let (ea, eb) = (a.elements(64).unwrap_or_default(), b.elements(64).unwrap_or_default());
                // every pair of valid functions Z → A, Z → B pairs to a valid Z → A×B
                for x in &zs {
                    let gx = z.grade_of(x).unwrap();
                    let va: Vec<&Elem> = ea.iter().filter(|y| ok(&gx, &a.grade_of(y).unwrap())).collect();
                    let vb: Vec<&Elem> = eb.iter().filter(|y| ok(&gx, &b.grade_of(y).unwrap())).collect();
                    for ya in &va {
                        for yb in &vb {
                            let w = Elem::pair((*ya).clone(), (*yb).clone());
                            match ab.grade_of(&w) {
                                Some(g) if ok(&gx, &g) => {}
                                _ => {
                                    return Err(VError::Invalid(format!(
                                        "{} is not a product: pairing sends {x} to {w}, invalid in {ab}",
                                        p.product.symbol
                                    )))
                                }
                            }
                        }
                    }
                    // and every valid point of A×B projects to valid points
                    for s in ab.elements(256).unwrap_or_default() {
                        let g = ab.grade_of(&s).unwrap();
                        if ok(&gx, &g)
                            && !(ok(&gx, &a.grade_of(s.left()).unwrap()) && ok(&gx, &b.grade_of(s.right()).unwrap()))
                        {
                            return Err(VError::Invalid(format!("projection of {s} from {ab} is not a morphism")));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `(V, ⊗, I, ×, 1)` with `ζ = ⟨π1⊗π1, π2⊗π2⟩`, `Δ` the diagonal, and `∇`,
/// `ε` the terminal maps. Fails when `×` is not a product on probes.
pub fn duoidal_from_products(p: &ProductsInput) -> Result<SetDuoidal, VError> {
    check_product_witness(p, 2)?;
    let pi1 = |x: &Elem| x.left().clone();
    let pi2 = |x: &Elem| x.right().clone();
    let term_pt = p.product.unit.point();
    let (t1, t2) = (term_pt.clone(), term_pt);
    Ok(SetDuoidal::new(
        format!("FromProducts[{}]", p.name),
        p.tensor.clone(),
        p.product.clone(),
        // ⟨π1 ⊗ π1, π2 ⊗ π2⟩ on ((a,b),(c,d))
        Arc::new(move |x| {
            let (ab, cd) = x.as_pair().expect("pair");
            Elem::pair(Elem::pair(pi1(ab), pi1(cd)), Elem::pair(pi2(ab), pi2(cd)))
        }),
        Arc::new(pair_diag),
        Arc::new(move |_| t1.clone()),
        Arc::new(move |_| t2.clone()),
        p.grade_ok.clone(),
        p.probes.clone(),
    ))
}

/// Mutant: `ζ` declared with the unrestricted codomain `(A∘C)∘(B∘D)`.
pub fn mutant_zeta_unrestricted(base: &SetDuoidal) -> SetDuoidal {
    let mut m = base.clone();
    m.name = format!("{}[ζ unrestricted]", base.name);
    m.zeta_override = Some(Arc::new(|v, a, b, c, d| {
        let z = v.plain_zeta(a, b, c, d);
        let tgt = v.seq(&v.seq(a, c), &v.seq(b, d));
        Mor::from_arc(z.src.clone(), tgt, "ζ'", z.func())
    }));
    m
}

/// Mutant: `Δ` landing in `J∗J` instead of `J∘J`.
pub fn mutant_broken_delta(base: &SetDuoidal) -> SetDuoidal {
    let mut m = base.clone();
    m.name = format!("{}[Δ into J∗J]", base.name);
    m.delta_override = Some(Arc::new(|v| {
        let j = v.par_unit();
        Mor::new(j.clone(), v.par(&j, &j), "Δ'", pair_diag)
    }));
    m
}

/// Mutant: `ζ` swapping the inner components, `((p,q),(r,s)) ↦ ((q,r),(p,s))`.
pub fn mutant_zeta_swapped(base: &SetDuoidal) -> SetDuoidal {
    let mut m = base.clone();
    m.name = format!("{}[ζ swapped]", base.name);
    m.zeta_override = Some(Arc::new(|v, a, b, c, d| {
        let z = v.plain_zeta(a, b, c, d);
        Mor::new(z.src.clone(), z.tgt.clone(), "ζ''", |x| {
            let (pq, rs) = x.as_pair().unwrap();
            let (p, q) = pq.as_pair().unwrap();
            let (r, s) = rs.as_pair().unwrap();
            Elem::pair(Elem::pair(q.clone(), r.clone()), Elem::pair(p.clone(), s.clone()))
        })
    }));
    m
}
