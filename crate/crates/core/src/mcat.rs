//! Strict monoidal base categories: type words over named finite sets, with
//! all functions between their value sets as morphisms.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::duoidal::rng_for;
use crate::finset::{enumerate_functions, Elem, FinError, FinFn, FinSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McatError {
    #[error("unknown base type {0}")]
    UnknownBase(String),
    #[error(transparent)]
    Fin(#[from] FinError),
}

/// A word of base-type names. Tensor is concatenation, the unit is the
/// empty word, so associativity and unitality hold on the nose.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeObj(Arc<[Arc<str>]>);

impl TypeObj {
    pub fn unit() -> TypeObj {
        TypeObj(Arc::from(Vec::new()))
    }

    pub fn base(name: &str) -> TypeObj {
        TypeObj(Arc::from(vec![Arc::from(name)]))
    }

    pub fn word(names: &[&str]) -> TypeObj {
        TypeObj(names.iter().map(|s| Arc::from(*s)).collect())
    }

    pub fn tensor(&self, other: &TypeObj) -> TypeObj {
        TypeObj(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn names(&self) -> &[Arc<str>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `e`, `bit`, or `bit⊕bit` (also `bit+bit`, `bit.bit`).
    pub fn parse(s: &str) -> TypeObj {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "ε" {
            return TypeObj::unit();
        }
        TypeObj(
            s.split(['⊕', '+', '.'])
                .map(str::trim)
                .filter(|p| !p.is_empty() && *p != "e")
                .map(Arc::from)
                .collect(),
        )
    }
}

impl fmt::Display for TypeObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<&str> = self.0.iter().map(|s| &**s).collect();
        write!(f, "{}", parts.join("⊕"))
    }
}

impl fmt::Debug for TypeObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A morphism of a base category. `repr` is an index table for function
/// categories and a generator name for tabulated ones.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BMor {
    pub src: TypeObj,
    pub tgt: TypeObj,
    pub repr: Elem,
}

impl fmt::Debug for BMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}→{}", self.repr, self.src, self.tgt)
    }
}

/// A strict monoidal category used as the base of a V-Freyd category.
pub trait MonBase: Send + Sync {
    fn name(&self) -> String;
    fn unit(&self) -> TypeObj;
    /// `None` when the tensor leaves the finite object set.
    fn tensor(&self, a: &TypeObj, b: &TypeObj) -> Option<TypeObj>;
    fn objects(&self) -> Vec<TypeObj>;
    /// All morphisms `a → b` when there are at most `limit`, otherwise
    /// `limit` seeded samples.
    fn homs(&self, a: &TypeObj, b: &TypeObj, limit: usize, seed: u64) -> Vec<BMor>;
    fn id(&self, a: &TypeObj) -> BMor;
    /// `f` then `g`.
    fn compose(&self, f: &BMor, g: &BMor) -> Option<BMor>;
    fn tensor_mor(&self, f: &BMor, g: &BMor) -> Option<BMor>;
}

/// Named base sets; morphisms `a → b` are all functions
/// `value(a) → value(b)`.
#[derive(Clone, Debug)]
pub struct MCat {
    pub bases: Vec<(String, FinSet)>,
    pub probe_objects: Vec<TypeObj>,
}

impl MCat {
    pub fn new(bases: Vec<(String, FinSet)>) -> MCat {
        let mut probe_objects = vec![TypeObj::unit()];
        probe_objects.extend(bases.iter().map(|(n, _)| TypeObj::base(n)));
        MCat { bases, probe_objects }
    }

    pub fn base_set(&self, name: &str) -> Result<&FinSet, McatError> {
        self.bases.iter().find(|(n, _)| n == name).map(|(_, s)| s).ok_or_else(|| McatError::UnknownBase(name.into()))
    }

    /// The value set: `{*}` for the unit, the base set for a single name,
    /// and lexicographically ordered tuples otherwise.
    pub fn value_set(&self, a: &TypeObj) -> Result<FinSet, McatError> {
        let sets: Vec<&FinSet> = a.names().iter().map(|n| self.base_set(n)).collect::<Result<_, _>>()?;
        match sets.len() {
            0 => Ok(FinSet::singleton()),
            1 => Ok(sets[0].clone()),
            _ => {
                let mut tuples: Vec<Vec<Elem>> = vec![Vec::new()];
                for s in &sets {
                    let mut next = Vec::with_capacity(tuples.len() * s.len());
                    for t in &tuples {
                        for x in s.iter() {
                            let mut t2 = t.clone();
                            t2.push(x.clone());
                            next.push(t2);
                        }
                    }
                    tuples = next;
                }
                Ok(FinSet::new(tuples.into_iter().map(Elem::list).collect())?)
            }
        }
    }

    /// Components of a value of type `a`.
    pub fn components(&self, a: &TypeObj, v: &Elem) -> Vec<Elem> {
        match a.len() {
            0 => Vec::new(),
            1 => vec![v.clone()],
            _ => v.as_list().expect("tuple value").to_vec(),
        }
    }

    pub fn from_components(&self, a: &TypeObj, cs: Vec<Elem>) -> Elem {
        match a.len() {
            0 => Elem::star(),
            1 => cs.into_iter().next().expect("one component"),
            _ => Elem::list(cs),
        }
    }

    /// Splits a value of `a⊕b` into its two blocks.
    pub fn split(&self, a: &TypeObj, b: &TypeObj, v: &Elem) -> (Elem, Elem) {
        let cs = self.components(&a.tensor(b), v);
        let (l, r) = cs.split_at(a.len());
        (self.from_components(a, l.to_vec()), self.from_components(b, r.to_vec()))
    }

    pub fn join(&self, a: &TypeObj, b: &TypeObj, x: &Elem, y: &Elem) -> Elem {
        let mut cs = self.components(a, x);
        cs.extend(self.components(b, y));
        self.from_components(&a.tensor(b), cs)
    }

    pub fn mor(&self, a: &TypeObj, b: &TypeObj, f: &FinFn) -> BMor {
        let table = f.table().iter().map(|&i| Elem::Int(i as i64)).collect();
        BMor { src: a.clone(), tgt: b.clone(), repr: Elem::list(table) }
    }

    pub fn fun(&self, m: &BMor) -> Result<FinFn, McatError> {
        let dom = self.value_set(&m.src)?;
        let cod = self.value_set(&m.tgt)?;
        let table = m
            .repr
            .as_list()
            .map(|l| l.iter().map(|e| e.as_int().unwrap_or(-1) as usize).collect())
            .unwrap_or_default();
        Ok(FinFn::from_indices(dom, cod, table)?)
    }

    /// `f ⊕ g` acting blockwise.
    pub fn tensor_fn(&self, f: &BMor, g: &BMor) -> Result<BMor, McatError> {
        let (ff, gg) = (self.fun(f)?, self.fun(g)?);
        let src = f.src.tensor(&g.src);
        let tgt = f.tgt.tensor(&g.tgt);
        let dom = self.value_set(&src)?;
        let cod = self.value_set(&tgt)?;
        let h = FinFn::from_fn(&dom, &cod, |v| {
            let (x, y) = self.split(&f.src, &g.src, v);
            self.join(&f.tgt, &g.tgt, &ff.apply(&x).expect("in dom"), &gg.apply(&y).expect("in dom"))
        })?;
        Ok(self.mor(&src, &tgt, &h))
    }
}

/// `f ⊕ g` on FinFns between declared type words.
pub fn tensor_mor(m: &MCat, f: &FinFn, fa: (&TypeObj, &TypeObj), g: &FinFn, ga: (&TypeObj, &TypeObj)) -> Result<FinFn, McatError> {
    for (h, (a, b)) in [(f, fa), (g, ga)] {
        let (da, cb) = (m.value_set(a)?, m.value_set(b)?);
        if h.dom() != &da || h.cod() != &cb {
            return Err(FinError::Boundary { expected: format!("{a} -> {b}"), found: format!("{} -> {}", h.dom(), h.cod()) }.into());
        }
    }
    let t = m.tensor_fn(&m.mor(fa.0, fa.1, f), &m.mor(ga.0, ga.1, g))?;
    m.fun(&t)
}

impl MonBase for MCat {
    fn name(&self) -> String {
        let parts: Vec<String> = self.bases.iter().map(|(n, s)| format!("{n}={s}")).collect();
        format!("M[{}]", parts.join(", "))
    }
    fn unit(&self) -> TypeObj {
        TypeObj::unit()
    }
    fn tensor(&self, a: &TypeObj, b: &TypeObj) -> Option<TypeObj> {
        Some(a.tensor(b))
    }
    fn objects(&self) -> Vec<TypeObj> {
        self.probe_objects.clone()
    }
    fn homs(&self, a: &TypeObj, b: &TypeObj, limit: usize, seed: u64) -> Vec<BMor> {
        let (Ok(da), Ok(db)) = (self.value_set(a), self.value_set(b)) else { return Vec::new() };
        let total = (db.len() as u128).checked_pow(da.len() as u32).unwrap_or(u128::MAX);
        if total <= limit as u128 {
            return enumerate_functions(&da, &db).iter().map(|f| self.mor(a, b, f)).collect();
        }
        if db.is_empty() {
            return Vec::new();
        }
        let mut rng = rng_for(seed, &format!("homs {a} {b}"));
        (0..limit)
            .map(|_| {
                let t: Vec<usize> = (0..da.len()).map(|_| rng.gen_range(0..db.len())).collect();
                self.mor(a, b, &FinFn::from_indices(da.clone(), db.clone(), t).expect("indices in range"))
            })
            .collect()
    }
    fn id(&self, a: &TypeObj) -> BMor {
        let d = self.value_set(a).unwrap_or_else(|_| FinSet::empty());
        self.mor(a, a, &FinFn::identity(&d))
    }
    fn compose(&self, f: &BMor, g: &BMor) -> Option<BMor> {
        if f.tgt != g.src {
            return None;
        }
        let h = self.fun(f).ok()?.then(&self.fun(g).ok()?).ok()?;
        Some(self.mor(&f.src, &g.tgt, &h))
    }
    fn tensor_mor(&self, f: &BMor, g: &BMor) -> Option<BMor> {
        self.tensor_fn(f, g).ok()
    }
}

/// The default base: one bit-valued type.
pub fn bit_base() -> MCat {
    MCat::new(vec![("bit".into(), FinSet::range(2))])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(TypeObj::parse("bit⊕bit").to_string(), "bit⊕bit");
        assert_eq!(TypeObj::parse("e"), TypeObj::unit());
        assert_eq!(TypeObj::parse("bit+e"), TypeObj::base("bit"));
    }
}
