//! Resource-labelled stateful functions: maps `a × Π_Q → b × Π_Q` labelled
//! by the resources `Q` they may touch, as a `Label_{Pf(R)}`-Freyd category,
//! and an interpreter for programs built from them.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::duoidal::{label_duoidal, Duoidal, Mor, Obj, SetDuoidal, Space, VError};
use crate::finset::{Elem, FinFn, FinSet};
use crate::mcat::{BMor, MCat, MonBase, TypeObj};
use crate::sepmonoid::{pf_sep_monoid, subsets, SepMonoid};
use crate::vfreyd::VFreyd;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResError {
    #[error("type error at {path}: {msg}")]
    Type { path: String, msg: String },
    #[error("separation violation at {path}: both sides use {}", overlap.join(", "))]
    Separation { path: String, overlap: Vec<String> },
    #[error("label {label} is not contained in {big}")]
    LabelNotSubset { label: String, big: String },
    #[error("hom carrier C({a},{b}) at label {label} has {size} elements, over the budget {budget}")]
    Budget { a: String, b: String, label: String, size: String, budget: u128 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Config(String),
}

/// The resources with their value sets, in a fixed order, and the base types.
#[derive(Clone, Debug)]
pub struct ResourceCtx {
    pub resources: Vec<(String, FinSet)>,
    pub base: MCat,
}

/// A label: sorted indices into the resource list.
pub type Label = Vec<usize>;

impl ResourceCtx {
    pub fn new(resources: Vec<(String, FinSet)>, base: MCat) -> ResourceCtx {
        ResourceCtx { resources, base }
    }

    /// `n` bit-valued resources `x, y, z, …` over the bit base.
    pub fn bits(n: usize) -> ResourceCtx {
        let names = ["x", "y", "z", "w", "v", "u"];
        let resources = (0..n)
            .map(|i| (names.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("r{i}")), FinSet::range(2)))
            .collect();
        ResourceCtx::new(resources, crate::mcat::bit_base())
    }

    pub fn names(&self) -> FinSet {
        FinSet::new(self.resources.iter().map(|(n, _)| Elem::Atom(Arc::from(n.as_str()))).collect()).expect("distinct resource names")
    }

    pub fn monoid(&self) -> SepMonoid {
        pf_sep_monoid(&self.names())
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.resources.iter().position(|(n, _)| n == name)
    }

    pub fn label_elem(&self, l: &[usize]) -> Elem {
        Elem::list(l.iter().map(|&i| Elem::Atom(Arc::from(self.resources[i].0.as_str()))).collect())
    }

    pub fn label_of_elem(&self, e: &Elem) -> Option<Label> {
        let mut out = Vec::new();
        for x in e.as_list()? {
            let Elem::Atom(s) = x else { return None };
            out.push(self.index(s)?);
        }
        let canonical = out.windows(2).all(|w| w[0] < w[1]);
        canonical.then_some(out)
    }

    pub fn label_names(&self, l: &[usize]) -> Vec<String> {
        l.iter().map(|&i| self.resources[i].0.clone()).collect()
    }

    pub fn show_label(&self, l: &[usize]) -> String {
        format!("{{{}}}", self.label_names(l).join(","))
    }

    /// `|Π_Q|`
    pub fn store_size(&self, l: &[usize]) -> usize {
        l.iter().map(|&i| self.resources[i].1.len()).product()
    }

    /// Component indices of a store state, first resource most significant.
    pub fn decode(&self, l: &[usize], mut s: usize) -> Vec<usize> {
        let mut out = vec![0; l.len()];
        for (k, &r) in l.iter().enumerate().rev() {
            let n = self.resources[r].1.len();
            out[k] = s % n;
            s /= n;
        }
        out
    }

    pub fn encode(&self, l: &[usize], comps: &[usize]) -> usize {
        l.iter().zip(comps).fold(0, |acc, (&r, &c)| acc * self.resources[r].1.len() + c)
    }

    /// Indices of `sub` inside `big`, or `None` when `sub ⊄ big`.
    fn positions(sub: &[usize], big: &[usize]) -> Option<Vec<usize>> {
        sub.iter().map(|r| big.iter().position(|b| b == r)).collect()
    }

    pub fn value_size(&self, a: &TypeObj) -> Result<usize, ResError> {
        self.base.value_set(a).map(|s| s.len()).map_err(|e| ResError::Config(e.to_string()))
    }

    pub fn all_labels(&self) -> Vec<Label> {
        subsets(&self.names()).iter().map(|e| self.label_of_elem(e).expect("canonical subset")).collect()
    }
}

fn union(p: &[usize], q: &[usize]) -> Label {
    let mut u: Label = p.iter().chain(q).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// A labelled map `a × Π_Q → b × Π_Q`; `table[ia·|Π_Q| + s] = ib·|Π_Q| + s'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateMap {
    pub label: Label,
    pub a: TypeObj,
    pub b: TypeObj,
    pub table: Vec<usize>,
}

impl StateMap {
    pub fn to_elem(&self, ctx: &ResourceCtx) -> Elem {
        Elem::pair(ctx.label_elem(&self.label), Elem::list(self.table.iter().map(|&i| Elem::Int(i as i64)).collect()))
    }

    pub fn from_elem(ctx: &ResourceCtx, a: &TypeObj, b: &TypeObj, e: &Elem) -> Option<StateMap> {
        let (l, t) = e.as_pair()?;
        let label = ctx.label_of_elem(l)?;
        let table = t.as_list()?.iter().map(|x| x.as_int().and_then(|i| usize::try_from(i).ok())).collect::<Option<Vec<_>>>()?;
        Some(StateMap { label, a: a.clone(), b: b.clone(), table })
    }

    /// Applies the map to a value index and a store state of its label.
    pub fn apply(&self, ctx: &ResourceCtx, ia: usize, s: usize) -> (usize, usize) {
        let n = ctx.store_size(&self.label);
        let o = self.table[ia * n + s];
        (o / n, o % n)
    }

    pub fn show(&self, ctx: &ResourceCtx) -> String {
        format!("{}:{}→{} {:?}", ctx.show_label(&self.label), self.a, self.b, self.table)
    }
}

/// How lifting treats the resources outside the map's own label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Extras {
    Keep,
    Reset,
}

fn lift_with(ctx: &ResourceCtx, f: &StateMap, big: &[usize], extras: Extras) -> Result<StateMap, ResError> {
    let pos = ResourceCtx::positions(&f.label, big)
        .ok_or_else(|| ResError::LabelNotSubset { label: ctx.show_label(&f.label), big: ctx.show_label(big) })?;
    let (nb, ns) = (ctx.store_size(big), ctx.store_size(&f.label));
    let na = f.table.len() / ns.max(1);
    let mut table = Vec::with_capacity(na * nb);
    for ia in 0..na {
        for s in 0..nb {
            let mut comps = ctx.decode(big, s);
            let sub: Vec<usize> = pos.iter().map(|&p| comps[p]).collect();
            let (ib, s2) = f.apply(ctx, ia, ctx.encode(&f.label, &sub));
            if extras == Extras::Reset {
                comps.iter_mut().for_each(|c| *c = 0);
            }
            for (&p, c) in pos.iter().zip(ctx.decode(&f.label, s2)) {
                comps[p] = c;
            }
            table.push(ib * nb + ctx.encode(big, &comps));
        }
    }
    Ok(StateMap { label: big.to_vec(), a: f.a.clone(), b: f.b.clone(), table })
}

/// `f^Q_{Q'}`: `f` on its own resources, the identity on `Q \ Q'`.
pub fn lift(ctx: &ResourceCtx, f: &StateMap, big: &[usize]) -> Result<StateMap, ResError> {
    lift_with(ctx, f, big, Extras::Keep)
}

fn seq_with(ctx: &ResourceCtx, f: &StateMap, g: &StateMap, extras: Extras) -> Result<StateMap, ResError> {
    if f.b != g.a {
        return Err(ResError::Type { path: String::new(), msg: format!("cannot sequence {} → {} with {} → {}", f.a, f.b, g.a, g.b) });
    }
    let u = union(&f.label, &g.label);
    let (f2, g2) = (lift_with(ctx, f, &u, extras)?, lift_with(ctx, g, &u, extras)?);
    let table = f2.table.iter().map(|&i| g2.table[i]).collect();
    Ok(StateMap { label: u, a: f.a.clone(), b: g.b.clone(), table })
}

/// `(P ∪ Q, g^{P∪Q}_Q . f^{P∪Q}_P)`
pub fn seq_res(ctx: &ResourceCtx, f: &StateMap, g: &StateMap) -> Result<StateMap, ResError> {
    seq_with(ctx, f, g, Extras::Keep)
}

/// Runs `f` and `g` side by side on disjoint resources. With `check` off the
/// labels may overlap and `g`'s writes win.
fn par_with(ctx: &ResourceCtx, f: &StateMap, g: &StateMap, check: bool) -> Result<StateMap, ResError> {
    let overlap: Vec<usize> = f.label.iter().filter(|r| g.label.contains(r)).copied().collect();
    if check && !overlap.is_empty() {
        return Err(ResError::Separation { path: String::new(), overlap: ctx.label_names(&overlap) });
    }
    let u = union(&f.label, &g.label);
    let (pf, pg) = (ResourceCtx::positions(&f.label, &u).unwrap(), ResourceCtx::positions(&g.label, &u).unwrap());
    let (na1, na2) = (ctx.value_size(&f.a)?, ctx.value_size(&g.a)?);
    let nb2 = ctx.value_size(&g.b)?;
    let nu = ctx.store_size(&u);
    let mut table = Vec::with_capacity(na1 * na2 * nu);
    for ia1 in 0..na1 {
        for ia2 in 0..na2 {
            for s in 0..nu {
                let mut comps = ctx.decode(&u, s);
                let sf: Vec<usize> = pf.iter().map(|&p| comps[p]).collect();
                let sg: Vec<usize> = pg.iter().map(|&p| comps[p]).collect();
                let (ib1, tf) = f.apply(ctx, ia1, ctx.encode(&f.label, &sf));
                let (ib2, tg) = g.apply(ctx, ia2, ctx.encode(&g.label, &sg));
                for (&p, c) in pf.iter().zip(ctx.decode(&f.label, tf)) {
                    comps[p] = c;
                }
                for (&p, c) in pg.iter().zip(ctx.decode(&g.label, tg)) {
                    comps[p] = c;
                }
                table.push((ib1 * nb2 + ib2) * nu + ctx.encode(&u, &comps));
            }
        }
    }
    Ok(StateMap { label: u, a: f.a.tensor(&g.a), b: f.b.tensor(&g.b), table })
}

/// `(Q ∪ Q', f × f')` up to rearranging the store; requires `Q ∩ Q' = ∅`.
pub fn par_res(ctx: &ResourceCtx, f: &StateMap, g: &StateMap) -> Result<StateMap, ResError> {
    par_with(ctx, f, g, true)
}

/// `(∅, id)` on `a`.
pub fn idt_res(ctx: &ResourceCtx, a: &TypeObj) -> Result<StateMap, ResError> {
    let n = ctx.value_size(a)?;
    Ok(StateMap { label: Vec::new(), a: a.clone(), b: a.clone(), table: (0..n).collect() })
}

pub fn zero_res() -> StateMap {
    StateMap { label: Vec::new(), a: TypeObj::unit(), b: TypeObj::unit(), table: vec![0] }
}

/// A pure function as a label-`∅` map.
pub fn pure_res(a: &TypeObj, b: &TypeObj, f: &FinFn) -> StateMap {
    StateMap { label: Vec::new(), a: a.clone(), b: b.clone(), table: f.table().to_vec() }
}

/// `(g × id) . h . (f × id)` for pure `f : a' → a`, `g : b → b'`.
fn pure_around(ctx: &ResourceCtx, f: &FinFn, g: &FinFn, h: &StateMap, a2: &TypeObj, b2: &TypeObj) -> StateMap {
    let n = ctx.store_size(&h.label);
    let mut table = Vec::with_capacity(f.dom().len() * n);
    for ia2 in 0..f.dom().len() {
        let ia = f.apply_idx(ia2);
        for s in 0..n {
            let (ib, s2) = h.apply(ctx, ia, s);
            table.push(g.apply_idx(ib) * n + s2);
        }
    }
    StateMap { label: h.label.clone(), a: a2.clone(), b: b2.clone(), table }
}

/// Single-defect variants of the resource instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResourceVariant {
    Sound,
    /// `par` declared on the `•` product, so overlapping labels are accepted.
    ParUnseparated,
    /// `seq` resets resources outside each map's label instead of keeping them.
    SeqNoLift,
    /// `hom_map` adds the first resource to the label.
    HomMapAddsResource,
}

/// The lazily indexed hom carrier: strata are labels, each holding every
/// table of the right shape, decoded with the last entry varying fastest.
struct HomSpace {
    ctx: Arc<ResourceCtx>,
    a: TypeObj,
    b: TypeObj,
    na: usize,
    nb: usize,
    labels: Vec<Label>,
}

impl HomSpace {
    fn shape(&self, l: &[usize]) -> (usize, usize) {
        let n = self.ctx.store_size(l);
        (self.na * n, self.nb * n)
    }
}

impl Space for HomSpace {
    fn strata(&self) -> Vec<(Elem, u128)> {
        self.labels
            .iter()
            .map(|l| {
                let (len, base) = self.shape(l);
                let size = (base as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
                (self.ctx.label_elem(l), size)
            })
            .collect()
    }

    fn nth(&self, stratum: usize, mut i: u128) -> Elem {
        let l = &self.labels[stratum];
        let (len, base) = self.shape(l);
        let mut table = vec![0usize; len];
        for slot in table.iter_mut().rev() {
            *slot = (i % base as u128) as usize;
            i /= base as u128;
        }
        StateMap { label: l.clone(), a: self.a.clone(), b: self.b.clone(), table }.to_elem(&self.ctx)
    }

    fn grade_of(&self, x: &Elem) -> Option<Elem> {
        let m = StateMap::from_elem(&self.ctx, &self.a, &self.b, x)?;
        let (len, base) = self.shape(&m.label);
        (m.table.len() == len && m.table.iter().all(|&o| o < base)).then(|| self.ctx.label_elem(&m.label))
    }
}

/// The `Label_{Pf(R)}`-Freyd category of resource-labelled maps.
#[derive(Clone)]
pub struct ResourceVFreyd {
    pub ctx: Arc<ResourceCtx>,
    pub v: Arc<SetDuoidal>,
    pub base: Arc<MCat>,
    pub types: Vec<TypeObj>,
    pub variant: ResourceVariant,
    pub budget: u128,
    tag: String,
}

/// Per-label element budget for the probed hom carriers.
pub const DEFAULT_BUDGET: u128 = 4096;

pub fn build_resource_vfreyd(ctx: &ResourceCtx, types: &[TypeObj]) -> Result<ResourceVFreyd, ResError> {
    build_resource_variant(ctx, types, ResourceVariant::Sound, DEFAULT_BUDGET)
}

pub fn build_resource_variant(
    ctx: &ResourceCtx,
    types: &[TypeObj],
    variant: ResourceVariant,
    budget: u128,
) -> Result<ResourceVFreyd, ResError> {
    let v = label_duoidal(&ctx.monoid()).map_err(|e| ResError::Config(e.to_string()))?;
    let descr: Vec<String> = ctx.resources.iter().map(|(n, s)| format!("{n}:{}", s.len())).collect();
    let c = ResourceVFreyd {
        ctx: Arc::new(ctx.clone()),
        v: Arc::new(v),
        base: Arc::new(ctx.base.clone()),
        types: types.to_vec(),
        variant,
        budget,
        tag: descr.join(","),
    };
    for a in types {
        for b in types {
            let (na, nb) = (ctx.value_size(a)?, ctx.value_size(b)?);
            for l in ctx.all_labels() {
                let n = ctx.store_size(&l);
                let size = ((nb * n) as u128).checked_pow((na * n) as u32);
                if size.is_none_or(|s| s > budget) {
                    return Err(ResError::Budget {
                        a: a.to_string(),
                        b: b.to_string(),
                        label: ctx.show_label(&l),
                        size: size.map(|s| s.to_string()).unwrap_or_else(|| format!("{}^{}", nb * n, na * n)),
                        budget,
                    });
                }
            }
        }
    }
    Ok(c)
}

impl fmt::Debug for ResourceVFreyd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl ResourceVFreyd {
    fn decode(&self, a: &TypeObj, b: &TypeObj, x: &Elem) -> StateMap {
        StateMap::from_elem(&self.ctx, a, b, x).expect("hom element")
    }

    pub fn elem(&self, m: &StateMap) -> Elem {
        m.to_elem(&self.ctx)
    }

    /// Elements of `C(a, b)` by label.
    pub fn hom_counts(&self, a: &TypeObj, b: &TypeObj) -> Vec<(String, u128)> {
        let h = self.hom(a, b);
        h.strata().iter().map(|s| (s.grade.to_string(), s.size)).collect()
    }
}

impl VFreyd for ResourceVFreyd {
    fn name(&self) -> String {
        let v = match self.variant {
            ResourceVariant::Sound => "",
            ResourceVariant::ParUnseparated => "[par without separation]",
            ResourceVariant::SeqNoLift => "[seq without lifting]",
            ResourceVariant::HomMapAddsResource => "[hom_map adds a resource]",
        };
        format!("Resources({}){v}", self.tag)
    }

    fn v(&self) -> Arc<dyn Duoidal> {
        self.v.clone()
    }

    fn base(&self) -> Arc<dyn MonBase> {
        self.base.clone()
    }

    fn hom(&self, a: &TypeObj, b: &TypeObj) -> Obj {
        let na = self.ctx.value_size(a).expect("declared type");
        let nb = self.ctx.value_size(b).expect("declared type");
        let sp = HomSpace { ctx: self.ctx.clone(), a: a.clone(), b: b.clone(), na, nb, labels: self.ctx.all_labels() };
        Obj::space(format!("C[{}]({a},{b})", self.tag), Arc::new(sp))
    }

    fn hom_map(&self, f: &BMor, g: &BMor) -> Mor {
        let (ff, gg) = (self.base.fun(f).expect("base morphism"), self.base.fun(g).expect("base morphism"));
        let (a2, a, b, b2) = (f.src.clone(), f.tgt.clone(), g.src.clone(), g.tgt.clone());
        let (me, variant) = (self.clone(), self.variant);
        let name = format!("C({f:?}, {g:?})");
        Mor::new(self.hom(&a, &b), self.hom(&a2, &b2), name, move |x| {
            let h = me.decode(&a, &b, x);
            let mut out = pure_around(&me.ctx, &ff, &gg, &h, &a2, &b2);
            if variant == ResourceVariant::HomMapAddsResource && !me.ctx.resources.is_empty() {
                out = lift(&me.ctx, &out, &union(&out.label, &[0])).expect("superset");
            }
            me.elem(&out)
        })
    }

    fn idt(&self, a: &TypeObj) -> Mor {
        let m = self.elem(&idt_res(&self.ctx, a).expect("declared type"));
        Mor::new(self.v.seq_unit(), self.hom(a, a), format!("idt[{a}]"), move |_| m.clone())
    }

    fn seq(&self, a: &TypeObj, b: &TypeObj, c: &TypeObj) -> Mor {
        let src = self.v.seq(&self.hom(a, b), &self.hom(b, c));
        let (me, a, b, c2) = (self.clone(), a.clone(), b.clone(), c.clone());
        let extras = if self.variant == ResourceVariant::SeqNoLift { Extras::Reset } else { Extras::Keep };
        Mor::new(src, self.hom(&a, c), format!("seq[{a},{b},{c}]"), move |x| {
            let (f, g) = (me.decode(&a, &b, x.left()), me.decode(&b, &c2, x.right()));
            me.elem(&seq_with(&me.ctx, &f, &g, extras).expect("composable"))
        })
    }

    fn zero(&self) -> Mor {
        let m = self.elem(&zero_res());
        let e = TypeObj::unit();
        Mor::new(self.v.par_unit(), self.hom(&e, &e), "zero", move |_| m.clone())
    }

    fn par(&self, a1: &TypeObj, b1: &TypeObj, a2: &TypeObj, b2: &TypeObj) -> Option<Mor> {
        let (h1, h2) = (self.hom(a1, b1), self.hom(a2, b2));
        let unsep = self.variant == ResourceVariant::ParUnseparated;
        let src = if unsep { self.v.seq(&h1, &h2) } else { self.v.par(&h1, &h2) };
        let tgt = self.hom(&a1.tensor(a2), &b1.tensor(b2));
        let me = self.clone();
        let (a1, b1, a2, b2) = (a1.clone(), b1.clone(), a2.clone(), b2.clone());
        Some(Mor::new(src, tgt, format!("par[{a1},{b1},{a2},{b2}]"), move |x| {
            let (f, g) = (me.decode(&a1, &b1, x.left()), me.decode(&a2, &b2, x.right()));
            me.elem(&par_with(&me.ctx, &f, &g, !unsep).expect("separated"))
        }))
    }

    fn type_probes(&self) -> Vec<TypeObj> {
        self.types.clone()
    }
}

/// Resource programs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Program {
    Pure { name: String, a: TypeObj, b: TypeObj, fun: FinFn },
    Idt(TypeObj),
    Seq(Box<Program>, Box<Program>),
    Par(Box<Program>, Box<Program>),
    Prim { name: String, map: StateMap },
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Program::Pure { name, .. } => write!(f, "pure {name}"),
            Program::Idt(a) => write!(f, "id {a}"),
            Program::Seq(p, q) => write!(f, "seq({p}, {q})"),
            Program::Par(p, q) => write!(f, "par({p}, {q})"),
            Program::Prim { name, .. } => write!(f, "{name}"),
        }
    }
}

/// Static typing and separation: returns `(a, b, label)` or the first error
/// with the path of the offending subterm.
pub fn check_program(ctx: &ResourceCtx, p: &Program) -> Result<(TypeObj, TypeObj, Label), ResError> {
    fn go(ctx: &ResourceCtx, p: &Program, path: &str) -> Result<(TypeObj, TypeObj, Label), ResError> {
        let sub = |s: &str| if path.is_empty() { s.to_string() } else { format!("{path}.{s}") };
        match p {
            Program::Pure { a, b, .. } => Ok((a.clone(), b.clone(), Vec::new())),
            Program::Idt(a) => {
                ctx.value_size(a).map_err(|e| ResError::Type { path: path.to_string(), msg: e.to_string() })?;
                Ok((a.clone(), a.clone(), Vec::new()))
            }
            Program::Prim { map, .. } => Ok((map.a.clone(), map.b.clone(), map.label.clone())),
            Program::Seq(l, r) => {
                let (a, b, p1) = go(ctx, l, &sub("seq.0"))?;
                let (b2, c, p2) = go(ctx, r, &sub("seq.1"))?;
                if b != b2 {
                    return Err(ResError::Type { path: path.to_string(), msg: format!("{l} ends at {b} but {r} starts at {b2}") });
                }
                Ok((a, c, union(&p1, &p2)))
            }
            Program::Par(l, r) => {
                let (a1, b1, p1) = go(ctx, l, &sub("par.0"))?;
                let (a2, b2, p2) = go(ctx, r, &sub("par.1"))?;
                let overlap: Vec<usize> = p1.iter().filter(|x| p2.contains(x)).copied().collect();
                if !overlap.is_empty() {
                    return Err(ResError::Separation {
                        path: if path.is_empty() { "main".into() } else { path.to_string() },
                        overlap: ctx.label_names(&overlap),
                    });
                }
                Ok((a1.tensor(&a2), b1.tensor(&b2), union(&p1, &p2)))
            }
        }
    }
    go(ctx, p, "")
}

/// The labelled map a well-typed, separated program denotes.
pub fn elaborate(ctx: &ResourceCtx, p: &Program) -> Result<StateMap, ResError> {
    check_program(ctx, p)?;
    fn go(ctx: &ResourceCtx, p: &Program) -> Result<StateMap, ResError> {
        match p {
            Program::Pure { a, b, fun, .. } => Ok(pure_res(a, b, fun)),
            Program::Idt(a) => idt_res(ctx, a),
            Program::Prim { map, .. } => Ok(map.clone()),
            Program::Seq(l, r) => seq_res(ctx, &go(ctx, l)?, &go(ctx, r)?),
            Program::Par(l, r) => par_res(ctx, &go(ctx, l)?, &go(ctx, r)?),
        }
    }
    go(ctx, p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub output: Elem,
    /// The full store after running, one value per resource.
    pub store: Vec<Elem>,
    pub label: Vec<String>,
}

/// Runs `p` on an input value and a full store. Typing and separation are
/// checked before anything runs.
pub fn run(ctx: &ResourceCtx, p: &Program, input: &Elem, store: &[Elem]) -> Result<RunResult, ResError> {
    let m = elaborate(ctx, p)?;
    let cfg = |msg: String| ResError::Config(msg);
    if store.len() != ctx.resources.len() {
        return Err(cfg(format!("store has {} values for {} resources", store.len(), ctx.resources.len())));
    }
    let comps: Vec<usize> = store
        .iter()
        .zip(&ctx.resources)
        .map(|(v, (n, s))| s.index_of(v).ok_or_else(|| cfg(format!("{v} is not a value of {n}"))))
        .collect::<Result<_, _>>()?;
    let da = ctx.base.value_set(&m.a).map_err(|e| cfg(e.to_string()))?;
    let db = ctx.base.value_set(&m.b).map_err(|e| cfg(e.to_string()))?;
    let ia = da.index_of(input).ok_or_else(|| cfg(format!("{input} is not a value of {}", m.a)))?;
    let sub: Vec<usize> = m.label.iter().map(|&r| comps[r]).collect();
    let (ib, s2) = m.apply(ctx, ia, ctx.encode(&m.label, &sub));
    let mut out = comps.clone();
    for (&r, c) in m.label.iter().zip(ctx.decode(&m.label, s2)) {
        out[r] = c;
    }
    Ok(RunResult {
        output: db.get(ib).clone(),
        store: out.iter().zip(&ctx.resources).map(|(&c, (_, s))| s.get(c).clone()).collect(),
        label: ctx.label_names(&m.label),
    })
}

/// A parsed program file: its context, named definitions, and `main`.
#[derive(Clone, Debug)]
pub struct ProgramFile {
    pub ctx: ResourceCtx,
    pub defs: Vec<(String, Program)>,
    pub main: Program,
}

fn parse_set(line: usize, s: &str) -> Result<FinSet, ResError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| ResError::Parse { line, msg: format!("expected {{..}}, found {s}") })?;
    let items = split_top(inner, ',');
    let elems = items
        .iter()
        .filter(|t| !t.trim().is_empty())
        .map(|t| Elem::parse(t.trim()).map_err(|e| ResError::Parse { line, msg: e.to_string() }))
        .collect::<Result<Vec<_>, _>>()?;
    FinSet::new(elems).map_err(|e| ResError::Parse { line, msg: e.to_string() })
}

/// Splits on `sep` outside brackets.
fn split_top(s: &str, sep: char) -> Vec<String> {
    let (mut out, mut cur, mut depth) = (Vec::new(), String::new(), 0i32);
    for ch in s.chars() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out
}

fn parse_arrow(line: usize, s: &str) -> Result<(TypeObj, TypeObj), ResError> {
    let (a, b) = s.split_once("->").ok_or_else(|| ResError::Parse { line, msg: format!("expected `a -> b`, found {s}") })?;
    Ok((TypeObj::parse(a), TypeObj::parse(b)))
}

/// `value | x=0, y=1`
fn parse_side(ctx: &ResourceCtx, line: usize, s: &str) -> Result<(Elem, Vec<(usize, Elem)>), ResError> {
    let (v, st) = match s.split_once('|') {
        Some((v, st)) => (v, Some(st)),
        None => (s, None),
    };
    let value = Elem::parse(v.trim()).map_err(|e| ResError::Parse { line, msg: e.to_string() })?;
    let mut assigns = Vec::new();
    for a in st.map(|st| split_top(st, ',')).unwrap_or_default() {
        if a.trim().is_empty() {
            continue;
        }
        let (n, x) = a.split_once('=').ok_or_else(|| ResError::Parse { line, msg: format!("expected `r=v`, found {a}") })?;
        let r = ctx.index(n.trim()).ok_or_else(|| ResError::Parse { line, msg: format!("unknown resource {}", n.trim()) })?;
        let x = Elem::parse(x.trim()).map_err(|e| ResError::Parse { line, msg: e.to_string() })?;
        assigns.push((r, x));
    }
    Ok((value, assigns))
}

fn parse_table_body(line: usize, s: &str) -> Result<Vec<(String, String)>, ResError> {
    let body = s
        .trim()
        .strip_prefix("table")
        .map(str::trim)
        .and_then(|r| r.strip_prefix('{'))
        .and_then(|r| r.trim_end().strip_suffix('}'))
        .ok_or_else(|| ResError::Parse { line, msg: "expected `table { .. }`".into() })?;
    body.split(';')
        .filter(|e| !e.trim().is_empty())
        .map(|e| {
            e.split_once("->")
                .map(|(l, r)| (l.trim().to_string(), r.trim().to_string()))
                .ok_or_else(|| ResError::Parse { line, msg: format!("expected `in -> out`, found {e}") })
        })
        .collect()
}

fn store_index(ctx: &ResourceCtx, line: usize, label: &[usize], assigns: &[(usize, Elem)]) -> Result<usize, ResError> {
    let mut comps = Vec::new();
    for &r in label {
        let v = assigns
            .iter()
            .find(|(q, _)| *q == r)
            .map(|(_, v)| v)
            .ok_or_else(|| ResError::Parse { line, msg: format!("missing value for {}", ctx.resources[r].0) })?;
        comps.push(ctx.resources[r].1.index_of(v).ok_or_else(|| ResError::Parse { line, msg: format!("{v} is not a value of {}", ctx.resources[r].0) })?);
    }
    if assigns.iter().any(|(q, _)| !label.contains(q)) {
        return Err(ResError::Parse { line, msg: "assignment to a resource outside the label".into() });
    }
    Ok(ctx.encode(label, &comps))
}

struct Tokens {
    toks: Vec<String>,
    pos: usize,
}

impl Tokens {
    fn new(s: &str) -> Tokens {
        let mut toks = Vec::new();
        let mut cur = String::new();
        for ch in s.chars() {
            if ch == '(' || ch == ')' || ch == ',' || ch.is_whitespace() {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
                if !ch.is_whitespace() {
                    toks.push(ch.to_string());
                }
            } else {
                cur.push(ch);
            }
        }
        if !cur.is_empty() {
            toks.push(cur);
        }
        Tokens { toks, pos: 0 }
    }

    fn next(&mut self) -> Option<String> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: &str, line: usize) -> Result<(), ResError> {
        match self.next() {
            Some(x) if x == t => Ok(()),
            other => Err(ResError::Parse { line, msg: format!("expected `{t}`, found {other:?}") }),
        }
    }
}

impl ProgramFile {
    pub fn parse(src: &str) -> Result<ProgramFile, ResError> {
        let mut resources = Vec::new();
        let mut types: Vec<(String, FinSet)> = Vec::new();
        let mut fns: Vec<(String, TypeObj, TypeObj, FinFn)> = Vec::new();
        let mut defs: Vec<(String, Program)> = Vec::new();
        let mut main = None;
        for (k, raw) in src.lines().enumerate() {
            let line = k + 1;
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            let rest = rest.trim();
            let ctx = || ResourceCtx::new(resources.clone(), MCat::new(types.clone()));
            match kw {
                "resource" | "type" => {
                    let (n, s) = rest.split_once(':').ok_or_else(|| ResError::Parse { line, msg: "expected `name : {..}`".into() })?;
                    let entry = (n.trim().to_string(), parse_set(line, s)?);
                    if kw == "resource" { resources.push(entry) } else { types.push(entry) }
                }
                "fn" | "prim" => {
                    let (n, sig) = rest.split_once(':').ok_or_else(|| ResError::Parse { line, msg: "expected `name : a -> b ..`".into() })?;
                    let name = n.trim().to_string();
                    let (head, body) = sig.split_at(sig.find("table").ok_or_else(|| ResError::Parse { line, msg: "missing table".into() })?);
                    let (head, uses) = match head.split_once("uses") {
                        Some((h, u)) => (h, Some(u)),
                        None => (head, None),
                    };
                    let (a, b) = parse_arrow(line, head)?;
                    let c = ctx();
                    let (da, db) = (
                        c.base.value_set(&a).map_err(|e| ResError::Parse { line, msg: e.to_string() })?,
                        c.base.value_set(&b).map_err(|e| ResError::Parse { line, msg: e.to_string() })?,
                    );
                    let mut label: Label = Vec::new();
                    if let Some(u) = uses {
                        let u = u.trim();
                        let inner = u.strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(|| ResError::Parse { line, msg: "expected `uses {..}`".into() })?;
                        for r in inner.split(',').map(str::trim).filter(|r| !r.is_empty()) {
                            label.push(c.index(r).ok_or_else(|| ResError::Parse { line, msg: format!("unknown resource {r}") })?);
                        }
                        label.sort_unstable();
                        label.dedup();
                    }
                    if kw == "fn" && !label.is_empty() {
                        return Err(ResError::Parse { line, msg: "pure functions cannot use resources".into() });
                    }
                    let n = c.store_size(&label);
                    let mut table: Vec<Option<usize>> = vec![None; da.len() * n];
                    for (lhs, rhs) in parse_table_body(line, body)? {
                        let (vi, si) = parse_side(&c, line, &lhs)?;
                        let (vo, so) = parse_side(&c, line, &rhs)?;
                        let ia = da.index_of(&vi).ok_or_else(|| ResError::Parse { line, msg: format!("{vi} is not a value of {a}") })?;
                        let ib = db.index_of(&vo).ok_or_else(|| ResError::Parse { line, msg: format!("{vo} is not a value of {b}") })?;
                        let (s1, s2) = (store_index(&c, line, &label, &si)?, store_index(&c, line, &label, &so)?);
                        if table[ia * n + s1].replace(ib * n + s2).is_some() {
                            return Err(ResError::Parse { line, msg: format!("duplicate entry for {lhs}") });
                        }
                    }
                    let table: Vec<usize> = table
                        .into_iter()
                        .collect::<Option<_>>()
                        .ok_or_else(|| ResError::Parse { line, msg: format!("table for {name} is not total") })?;
                    if kw == "fn" {
                        let f = FinFn::from_indices(da, db, table).map_err(|e| ResError::Parse { line, msg: e.to_string() })?;
                        fns.push((name, a, b, f));
                    } else {
                        defs.push((name.clone(), Program::Prim { name, map: StateMap { label, a, b, table } }));
                    }
                }
                "let" | "main" => {
                    let (n, e) = if kw == "main" {
                        ("main", rest.strip_prefix('=').ok_or_else(|| ResError::Parse { line, msg: "expected `main = e`".into() })?)
                    } else {
                        rest.split_once('=').map(|(n, e)| (n.trim(), e)).ok_or_else(|| ResError::Parse { line, msg: "expected `let n = e`".into() })?
                    };
                    let mut t = Tokens::new(e);
                    let p = parse_expr(&mut t, &fns, &defs, line)?;
                    if t.pos != t.toks.len() {
                        return Err(ResError::Parse { line, msg: format!("trailing input after {p}") });
                    }
                    if kw == "main" {
                        main = Some(p);
                    } else {
                        defs.push((n.to_string(), p));
                    }
                }
                other => return Err(ResError::Parse { line, msg: format!("unknown declaration {other}") }),
            }
        }
        let ctx = ResourceCtx::new(resources, MCat::new(types));
        let main = main.ok_or_else(|| ResError::Parse { line: 0, msg: "no `main`".into() })?;
        Ok(ProgramFile { ctx, defs, main })
    }
}

fn parse_expr(t: &mut Tokens, fns: &[(String, TypeObj, TypeObj, FinFn)], defs: &[(String, Program)], line: usize) -> Result<Program, ResError> {
    let tok = t.next().ok_or_else(|| ResError::Parse { line, msg: "unexpected end of expression".into() })?;
    match tok.as_str() {
        "seq" | "par" => {
            t.expect("(", line)?;
            let l = parse_expr(t, fns, defs, line)?;
            t.expect(",", line)?;
            let r = parse_expr(t, fns, defs, line)?;
            t.expect(")", line)?;
            Ok(if tok == "seq" { Program::Seq(Box::new(l), Box::new(r)) } else { Program::Par(Box::new(l), Box::new(r)) })
        }
        "pure" => {
            let n = t.next().unwrap_or_default();
            let (name, a, b, fun) = fns.iter().find(|f| f.0 == n).ok_or_else(|| ResError::Parse { line, msg: format!("unknown function {n}") })?;
            Ok(Program::Pure { name: name.clone(), a: a.clone(), b: b.clone(), fun: fun.clone() })
        }
        "id" => Ok(Program::Idt(TypeObj::parse(&t.next().unwrap_or_default()))),
        name => defs
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p.clone())
            .ok_or_else(|| ResError::Parse { line, msg: format!("unknown name {name}") }),
    }
}

/// Every full store over the resources, first resource most significant.
pub fn all_stores(ctx: &ResourceCtx) -> Vec<Vec<Elem>> {
    let all: Label = (0..ctx.resources.len()).collect();
    (0..ctx.store_size(&all))
        .map(|s| ctx.decode(&all, s).iter().zip(&ctx.resources).map(|(&c, (_, set))| set.get(c).clone()).collect())
        .collect()
}

/// Parses `x=0,y=1` into a full store in resource order.
pub fn parse_store(ctx: &ResourceCtx, s: &str) -> Result<Vec<Elem>, ResError> {
    let mut out: Vec<Option<Elem>> = vec![None; ctx.resources.len()];
    for a in s.split(',').map(str::trim).filter(|a| !a.is_empty()) {
        let (n, v) = a.split_once('=').ok_or_else(|| ResError::Config(format!("expected r=v, found {a}")))?;
        let r = ctx.index(n.trim()).ok_or_else(|| ResError::Config(format!("unknown resource {}", n.trim())))?;
        out[r] = Some(Elem::parse(v.trim()).map_err(|e| ResError::Config(e.to_string()))?);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| ResError::Config(format!("no value for resource {}", ctx.resources[i].0))))
        .collect()
}

impl From<VError> for ResError {
    fn from(e: VError) -> Self {
        ResError::Config(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_codec_round_trips() {
        let ctx = ResourceCtx::bits(2);
        let l = vec![0, 1];
        for s in 0..4 {
            assert_eq!(ctx.encode(&l, &ctx.decode(&l, s)), s);
        }
        assert_eq!(ctx.decode(&l, 2), vec![1, 0]);
    }
}
