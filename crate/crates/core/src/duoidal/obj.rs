//! Graded sets: the object representation shared by every set-based
//! duoidal category in the crate.
//!
//! An object is a carrier split into strata; every element has a grade (its
//! label, its distinguished bit, or `*`). Carriers are indexed rather than
//! materialised, so tensors of large hom objects cost nothing until probed.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::finset::{inl, inr, Elem, FinSet};

pub type GradeOp = Arc<dyn Fn(&Elem, &Elem) -> Elem + Send + Sync>;
pub type GradeRel = Arc<dyn Fn(&Elem, &Elem) -> bool + Send + Sync>;
pub type GradePred = Arc<dyn Fn(&Elem) -> bool + Send + Sync>;
pub type ElemFn = Arc<dyn Fn(&Elem) -> Elem + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VError {
    #[error("type mismatch in {context}: expected {expected}, found {found}")]
    Boundary { context: String, expected: String, found: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    Invalid(String),
}

/// A lazily indexed carrier supplied from outside (hom objects).
pub trait Space: Send + Sync {
    /// `(grade, size)` per stratum.
    fn strata(&self) -> Vec<(Elem, u128)>;
    fn nth(&self, stratum: usize, i: u128) -> Elem;
    /// `None` when `x` is not a member.
    fn grade_of(&self, x: &Elem) -> Option<Elem>;
}

#[derive(Clone)]
pub struct Stratum {
    pub grade: Elem,
    pub size: u128,
    loc: Loc,
}

#[derive(Clone)]
enum Loc {
    Finite(Arc<[usize]>),
    Pair(usize, usize),
    Left(usize),
    Right(usize),
    Sub(usize),
    Space(usize),
}

#[derive(Clone)]
enum Node {
    Finite { set: FinSet, grades: Arc<[Elem]> },
    Product { a: Obj, b: Obj, combine: GradeOp, keep: Option<GradeRel> },
    Sum { a: Obj, b: Obj },
    Filter { a: Obj, keep: GradePred },
    Space(Arc<dyn Space>),
}

fn concat(parts: &[&str]) -> String {
    let mut s = String::with_capacity(parts.iter().map(|p| p.len()).sum());
    parts.iter().for_each(|p| s.push_str(p));
    s
}

struct Inner {
    key: Arc<str>,
    node: Node,
    strata: OnceLock<Arc<Vec<Stratum>>>,
}

/// An object of a set-based category. Equality is equality of keys, which
/// encode the construction.
#[derive(Clone)]
pub struct Obj(Arc<Inner>);

impl PartialEq for Obj {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.key == other.0.key
    }
}
impl Eq for Obj {}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.key)
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.key)
    }
}

fn mk(key: String, node: Node) -> Obj {
    Obj(Arc::new(Inner { key: Arc::from(key), node, strata: OnceLock::new() }))
}

impl Obj {
    /// A finite graded set. The key records every element with its grade.
    pub fn finite(set: FinSet, grades: Vec<Elem>) -> Obj {
        assert_eq!(set.len(), grades.len(), "one grade per element");
        let mut key = String::from("{");
        for (i, (x, g)) in set.iter().zip(grades.iter()).enumerate() {
            if i > 0 {
                key.push(',');
            }
            key.push_str(&format!("{x}:{g}"));
        }
        key.push('}');
        mk(key, Node::Finite { set, grades: Arc::from(grades) })
    }

    /// A finite set with every element graded `*`.
    pub fn plain(set: FinSet) -> Obj {
        let g = vec![Elem::star(); set.len()];
        Obj::finite(set, g)
    }

    /// A finite graded set under an explicit name.
    pub fn named_finite(name: &str, set: FinSet, grades: Vec<Elem>) -> Obj {
        assert_eq!(set.len(), grades.len(), "one grade per element");
        mk(name.to_string(), Node::Finite { set, grades: Arc::from(grades) })
    }

    /// Pairs `(x, y)` with grade `combine(gx, gy)`, restricted to grade pairs
    /// accepted by `keep`.
    pub fn product(a: &Obj, b: &Obj, symbol: &str, combine: GradeOp, keep: Option<GradeRel>) -> Obj {
        mk(
            concat(&["(", a.key(), " ", symbol, " ", b.key(), ")"]),
            Node::Product { a: a.clone(), b: b.clone(), combine, keep },
        )
    }

    pub fn sum(a: &Obj, b: &Obj) -> Obj {
        mk(concat(&["(", a.key(), " + ", b.key(), ")"]), Node::Sum { a: a.clone(), b: b.clone() })
    }

    /// The strata of `a` whose grade satisfies `keep`.
    pub fn filter(a: &Obj, name: &str, keep: GradePred) -> Obj {
        mk(format!("{name}[{}]", a.key()), Node::Filter { a: a.clone(), keep })
    }

    pub fn space(key: impl Into<String>, s: Arc<dyn Space>) -> Obj {
        mk(key.into(), Node::Space(s))
    }

    pub fn key(&self) -> &str {
        &self.0.key
    }

    pub fn strata(&self) -> Arc<Vec<Stratum>> {
        self.0.strata.get_or_init(|| Arc::new(self.compute_strata())).clone()
    }

    fn compute_strata(&self) -> Vec<Stratum> {
        match &self.0.node {
            Node::Finite { grades, .. } => {
                let mut groups: Vec<(Elem, Vec<usize>)> = Vec::new();
                for (i, g) in grades.iter().enumerate() {
                    match groups.iter_mut().find(|(h, _)| h == g) {
                        Some((_, v)) => v.push(i),
                        None => groups.push((g.clone(), vec![i])),
                    }
                }
                groups
                    .into_iter()
                    .map(|(g, v)| Stratum { grade: g, size: v.len() as u128, loc: Loc::Finite(Arc::from(v)) })
                    .collect()
            }
            Node::Product { a, b, combine, keep } => {
                let (sa, sb) = (a.strata(), b.strata());
                let mut out = Vec::new();
                for (i, x) in sa.iter().enumerate() {
                    for (k, y) in sb.iter().enumerate() {
                        if keep.as_ref().is_some_and(|r| !r(&x.grade, &y.grade)) {
                            continue;
                        }
                        let size = x.size.saturating_mul(y.size);
                        if size == 0 {
                            continue;
                        }
                        out.push(Stratum { grade: combine(&x.grade, &y.grade), size, loc: Loc::Pair(i, k) });
                    }
                }
                out
            }
            Node::Sum { a, b } => {
                let mut out: Vec<Stratum> = a
                    .strata()
                    .iter()
                    .enumerate()
                    .map(|(i, s)| Stratum { grade: s.grade.clone(), size: s.size, loc: Loc::Left(i) })
                    .collect();
                out.extend(
                    b.strata()
                        .iter()
                        .enumerate()
                        .map(|(i, s)| Stratum { grade: s.grade.clone(), size: s.size, loc: Loc::Right(i) }),
                );
                out
            }
            Node::Filter { a, keep } => a
                .strata()
                .iter()
                .enumerate()
                .filter(|(_, s)| keep(&s.grade))
                .map(|(i, s)| Stratum { grade: s.grade.clone(), size: s.size, loc: Loc::Sub(i) })
                .collect(),
            Node::Space(sp) => sp
                .strata()
                .into_iter()
                .enumerate()
                .filter(|(_, (_, n))| *n > 0)
                .map(|(i, (g, n))| Stratum { grade: g, size: n, loc: Loc::Space(i) })
                .collect(),
        }
    }

    pub fn count(&self) -> u128 {
        self.strata().iter().fold(0u128, |acc, s| acc.saturating_add(s.size))
    }

    /// The `i`-th element of stratum `s`.
    pub fn nth(&self, s: usize, i: u128) -> Elem {
        let st = &self.strata()[s];
        match (&self.0.node, &st.loc) {
            (Node::Finite { set, .. }, Loc::Finite(idx)) => set.get(idx[i as usize]).clone(),
            (Node::Product { a, b, .. }, Loc::Pair(ia, ib)) => {
                let nb = b.strata()[*ib].size;
                Elem::pair(a.nth(*ia, i / nb), b.nth(*ib, i % nb))
            }
            (Node::Sum { a, .. }, Loc::Left(k)) => inl(a.nth(*k, i)),
            (Node::Sum { b, .. }, Loc::Right(k)) => inr(b.nth(*k, i)),
            (Node::Filter { a, .. }, Loc::Sub(k)) => a.nth(*k, i),
            (Node::Space(sp), Loc::Space(k)) => sp.nth(*k, i),
            _ => unreachable!("stratum location matches node"),
        }
    }

    /// The grade of `x`, or `None` when `x` is not an element.
    pub fn grade_of(&self, x: &Elem) -> Option<Elem> {
        match &self.0.node {
            Node::Finite { set, grades } => set.index_of(x).map(|i| grades[i].clone()),
            Node::Product { a, b, combine, keep } => {
                let (l, r) = x.as_pair()?;
                let ga = a.grade_of(l)?;
                let gb = b.grade_of(r)?;
                if keep.as_ref().is_some_and(|k| !k(&ga, &gb)) {
                    return None;
                }
                Some(combine(&ga, &gb))
            }
            Node::Sum { a, b } => {
                let (tag, y) = x.as_pair()?;
                match tag.as_int()? {
                    0 => a.grade_of(y),
                    1 => b.grade_of(y),
                    _ => None,
                }
            }
            Node::Filter { a, keep } => a.grade_of(x).filter(|g| keep(g)),
            Node::Space(sp) => sp.grade_of(x),
        }
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.grade_of(x).is_some()
    }

    /// Every element, when there are at most `budget`.
    pub fn elements(&self, budget: u128) -> Option<Vec<Elem>> {
        if self.count() > budget {
            return None;
        }
        let st = self.strata();
        let mut out = Vec::with_capacity(self.count() as usize);
        for (s, x) in st.iter().enumerate() {
            for i in 0..x.size {
                out.push(self.nth(s, i));
            }
        }
        Some(out)
    }

    /// All elements when the carrier fits in `budget`, otherwise `budget`
    /// seeded samples drawn round-robin over the strata. The flag says
    /// whether the result is exhaustive.
    pub fn probe(&self, budget: u128, rng: &mut ChaCha8Rng) -> (Vec<Elem>, bool) {
        if let Some(all) = self.elements(budget) {
            return (all, true);
        }
        let st = self.strata();
        let mut out = Vec::with_capacity(budget as usize);
        for k in 0..budget as usize {
            let s = k % st.len();
            let i = rng.gen_range(0..st[s].size);
            out.push(self.nth(s, i));
        }
        (out, false)
    }

    /// The unique element of a one-element object.
    pub fn point(&self) -> Elem {
        debug_assert_eq!(self.count(), 1, "point of a non-singleton {}", self.key());
        self.nth(0, 0)
    }

    /// Component objects of a tensor, if this is one.
    pub fn components(&self) -> Option<(&Obj, &Obj)> {
        match &self.0.node {
            Node::Product { a, b, .. } | Node::Sum { a, b } => Some((a, b)),
            _ => None,
        }
    }
}

/// A morphism of a set-based category: a function between carriers. When
/// `reversed` is set the stored function runs from `tgt` to `src`, which is
/// how morphisms of an opposite category are held.
#[derive(Clone)]
pub struct Mor {
    pub src: Obj,
    pub tgt: Obj,
    pub name: Arc<str>,
    pub reversed: bool,
    fun: ElemFn,
}

impl fmt::Debug for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}{}", self.name, self.src, self.tgt, if self.reversed { " (op)" } else { "" })
    }
}

impl Mor {
    pub fn new(src: Obj, tgt: Obj, name: impl Into<Arc<str>>, f: impl Fn(&Elem) -> Elem + Send + Sync + 'static) -> Mor {
        Mor { src, tgt, name: name.into(), reversed: false, fun: Arc::new(f) }
    }

    pub fn from_arc(src: Obj, tgt: Obj, name: impl Into<Arc<str>>, fun: ElemFn) -> Mor {
        Mor { src, tgt, name: name.into(), reversed: false, fun }
    }

    pub fn identity(a: &Obj) -> Mor {
        Mor::new(a.clone(), a.clone(), "id", |x| x.clone())
    }

    /// Swaps the roles of source and target without touching the function.
    pub fn flip(&self) -> Mor {
        Mor { src: self.tgt.clone(), tgt: self.src.clone(), name: self.name.clone(), reversed: !self.reversed, fun: self.fun.clone() }
    }

    pub fn renamed(&self, name: impl Into<Arc<str>>) -> Mor {
        Mor { name: name.into(), ..self.clone() }
    }

    /// Where the stored function reads its argument.
    pub fn fn_dom(&self) -> &Obj {
        if self.reversed {
            &self.tgt
        } else {
            &self.src
        }
    }

    pub fn fn_cod(&self) -> &Obj {
        if self.reversed {
            &self.src
        } else {
            &self.tgt
        }
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        (self.fun)(x)
    }

    pub fn func(&self) -> ElemFn {
        self.fun.clone()
    }

    /// `self` then `g` for plain (non-reversed) morphisms.
    pub fn then(&self, g: &Mor) -> Result<Mor, VError> {
        if self.reversed || g.reversed {
            return Err(VError::Invalid("plain composition of opposite morphisms".into()));
        }
        if self.tgt != g.src {
            return Err(VError::Boundary {
                context: format!("{} ; {}", self.name, g.name),
                expected: g.src.key().to_string(),
                found: self.tgt.key().to_string(),
            });
        }
        let (f1, f2, mid) = (self.fun.clone(), g.fun.clone(), g.fn_dom().clone());
        Ok(Mor {
            src: self.src.clone(),
            tgt: g.tgt.clone(),
            name: Arc::from(format!("{} ; {}", self.name, g.name)),
            reversed: false,
            fun: Arc::new(move |x| {
                let y = f1(x);
                if is_stray(&y) {
                    y
                } else if !mid.contains(&y) {
                    stray(&y, &mid)
                } else {
                    f2(&y)
                }
            }),
        })
    }
}

/// Marker for a value that left the declared domain of a composite; it is
/// never a member of any object, so comparisons report it.
pub fn stray(y: &Elem, obj: &Obj) -> Elem {
    Elem::Atom(Arc::from(format!("⊥[{y} ∉ {}]", obj.key())))
}

pub fn is_stray(y: &Elem) -> bool {
    matches!(y, Elem::Atom(s) if s.starts_with('⊥'))
}

/// Deterministic RNG per (seed, tag).
pub fn rng_for(seed: u64, tag: &str) -> ChaCha8Rng {
    let mut h = DefaultHasher::new();
    tag.hash(&mut h);
    ChaCha8Rng::seed_from_u64(seed ^ h.finish())
}

/// How a law's two sides are probed.
#[derive(Debug, Clone, Copy)]
pub struct ProbeCfg {
    /// Maximum number of domain elements evaluated per law instance.
    pub budget: u128,
    pub seed: u64,
}

impl Default for ProbeCfg {
    fn default() -> Self {
        ProbeCfg { budget: 4096, seed: 0x5eed }
    }
}

/// Checks that `f` is a well-defined morphism on the probed elements: images
/// land in the codomain and grades are respected by `grade_ok`.
pub fn validate(
    f: &Mor,
    grade_ok: &dyn Fn(&Elem, &Elem) -> bool,
    cfg: &ProbeCfg,
    rng: &mut ChaCha8Rng,
) -> Result<(u64, bool), String> {
    let (xs, exhaustive) = f.fn_dom().probe(cfg.budget, rng);
    for x in &xs {
        let gx = f.fn_dom().grade_of(x).expect("probe is a member");
        let y = f.apply(x);
        match f.fn_cod().grade_of(&y) {
            None => return Err(format!("{} sends {x} to {y}, outside {}", f.name, f.fn_cod())),
            Some(gy) if !grade_ok(&gx, &gy) => {
                return Err(format!("{} sends {x} (grade {gx}) to {y} (grade {gy})", f.name))
            }
            _ => {}
        }
    }
    Ok((xs.len() as u64, exhaustive))
}

/// Elementwise equality of two parallel morphisms, with membership and grade
/// checks on both sides. Returns the number of points compared.
pub fn compare(
    lhs: &Mor,
    rhs: &Mor,
    grade_ok: &dyn Fn(&Elem, &Elem) -> bool,
    cfg: &ProbeCfg,
    rng: &mut ChaCha8Rng,
) -> Result<(u64, bool), String> {
    if lhs.src != rhs.src || lhs.tgt != rhs.tgt || lhs.reversed != rhs.reversed {
        return Err(format!("sides are not parallel: {lhs:?} vs {rhs:?}"));
    }
    let (xs, exhaustive) = lhs.fn_dom().probe(cfg.budget, rng);
    let cod = lhs.fn_cod();
    for x in &xs {
        let gx = lhs.fn_dom().grade_of(x).expect("probe is a member");
        let y1 = lhs.apply(x);
        let y2 = rhs.apply(x);
        let sides: &[(&str, &Elem)] = if y1 == y2 { &[("left", &y1)] } else { &[("left", &y1), ("right", &y2)] };
        for &(side, y) in sides {
            match cod.grade_of(y) {
                None => return Err(format!("{side} side sends {x} to {y}, outside {cod}")),
                Some(gy) if !grade_ok(&gx, &gy) => {
                    return Err(format!("{side} side sends {x} (grade {gx}) to {y} (grade {gy})"))
                }
                _ => {}
            }
        }
        if y1 != y2 {
            return Err(format!("at {x}: {y1} ≠ {y2}"));
        }
    }
    Ok((xs.len() as u64, exhaustive))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and() -> GradeOp {
        Arc::new(|a, b| Elem::Int((a.as_int() == Some(1) && b.as_int() == Some(1)) as i64))
    }

    #[test]
    fn restricted_product_strata() {
        let a = Obj::finite(FinSet::from_strs(&["a0", "a1"]).unwrap(), vec![Elem::Int(1), Elem::Int(0)]);
        let b = Obj::finite(FinSet::from_strs(&["b0", "b1"]).unwrap(), vec![Elem::Int(1), Elem::Int(0)]);
        let or: GradeRel = Arc::new(|x, y| x.as_int() == Some(1) || y.as_int() == Some(1));
        let p = Obj::product(&a, &b, "⊗", and(), Some(or));
        assert_eq!(p.count(), 3);
        let all = p.elements(10).unwrap();
        assert!(all.iter().all(|x| p.contains(x)));
        assert!(!p.contains(&Elem::parse("(a1,b1)").unwrap()));
        assert_eq!(p.grade_of(&Elem::parse("(a0,b0)").unwrap()), Some(Elem::Int(1)));
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = Obj::plain(FinSet::range(50));
        let p = Obj::product(&a, &a, "×", Arc::new(|_, _| Elem::star()), None);
        let (s1, ex) = p.probe(10, &mut rng_for(1, "t"));
        let (s2, _) = p.probe(10, &mut rng_for(1, "t"));
        assert!(!ex);
        assert_eq!(s1, s2);
    }
}
