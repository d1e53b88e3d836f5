//! Finite sets, total function tables, products and the middle-four map.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An opaque element token. Digit-only tokens are integers, everything else
/// is an atom; pairs print as `(l,r)` and lists as `[a,b]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Atom(Arc<str>),
    Int(i64),
    Pair(Arc<(Elem, Elem)>),
    List(Arc<[Elem]>),
}

impl Elem {
    /// Builds a token, turning decimal strings into [`Elem::Int`] so that
    /// printing and parsing round-trip.
    pub fn atom(s: &str) -> Elem {
        match s.parse::<i64>() {
            Ok(n) if !s.starts_with('+') => Elem::Int(n),
            _ => Elem::Atom(Arc::from(s)),
        }
    }

    pub fn int(n: i64) -> Elem {
        Elem::Int(n)
    }

    pub fn pair(l: Elem, r: Elem) -> Elem {
        Elem::Pair(Arc::new((l, r)))
    }

    pub fn list(items: Vec<Elem>) -> Elem {
        Elem::List(Arc::from(items))
    }

    /// The point of the singleton set.
    pub fn star() -> Elem {
        Elem::Atom(Arc::from("*"))
    }

    pub fn as_pair(&self) -> Option<(&Elem, &Elem)> {
        match self {
            Elem::Pair(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Elem]> {
        match self {
            Elem::List(l) => Some(l),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Elem::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn left(&self) -> &Elem {
        self.as_pair().expect("expected a pair element").0
    }

    pub fn right(&self) -> &Elem {
        self.as_pair().expect("expected a pair element").1
    }

    pub fn parse(s: &str) -> Result<Elem, FinError> {
        let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let e = parse_elem(&toks, &mut pos).ok_or_else(|| FinError::Parse(s.to_string()))?;
        if pos != toks.len() {
            return Err(FinError::Parse(s.to_string()));
        }
        Ok(e)
    }
}

fn parse_elem(t: &[char], pos: &mut usize) -> Option<Elem> {
    match t.get(*pos)? {
        '(' => {
            *pos += 1;
            let l = parse_elem(t, pos)?;
            if t.get(*pos)? != &',' {
                return None;
            }
            *pos += 1;
            let r = parse_elem(t, pos)?;
            if t.get(*pos)? != &')' {
                return None;
            }
            *pos += 1;
            Some(Elem::pair(l, r))
        }
        '[' => {
            *pos += 1;
            let mut items = Vec::new();
            if t.get(*pos)? == &']' {
                *pos += 1;
                return Some(Elem::list(items));
            }
            loop {
                items.push(parse_elem(t, pos)?);
                match t.get(*pos)? {
                    ',' => *pos += 1,
                    ']' => {
                        *pos += 1;
                        return Some(Elem::list(items));
                    }
                    _ => return None,
                }
            }
        }
        _ => {
            let start = *pos;
            while let Some(c) = t.get(*pos) {
                if matches!(c, '(' | ')' | '[' | ']' | ',') {
                    break;
                }
                *pos += 1;
            }
            if *pos == start {
                return None;
            }
            let s: String = t[start..*pos].iter().collect();
            Some(Elem::atom(&s))
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Atom(s) => write!(f, "{s}"),
            Elem::Int(n) => write!(f, "{n}"),
            Elem::Pair(p) => write!(f, "({},{})", p.0, p.1),
            Elem::List(items) => {
                write!(f, "[")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinError {
    #[error("boundary mismatch: expected {expected}, found {found}")]
    Boundary { expected: String, found: String },
    #[error("duplicate element {0}")]
    Duplicate(String),
    #[error("element {elem} is not in {set}")]
    NotMember { elem: String, set: String },
    #[error("cannot parse element {0:?}")]
    Parse(String),
    #[error("malformed json: {0}")]
    Json(String),
}

/// A finite set with a canonical element order.
#[derive(Clone)]
pub struct FinSet {
    elems: Arc<[Elem]>,
    index: Arc<HashMap<Elem, usize>>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.elems, &other.elems) || self.elems == other.elems
    }
}
impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl FinSet {
    pub fn new(elems: Vec<Elem>) -> Result<FinSet, FinError> {
        let mut index = HashMap::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(FinError::Duplicate(e.to_string()));
            }
        }
        Ok(FinSet { elems: Arc::from(elems), index: Arc::new(index) })
    }

    pub fn from_strs(items: &[&str]) -> Result<FinSet, FinError> {
        FinSet::new(items.iter().map(|s| Elem::parse(s)).collect::<Result<_, _>>()?)
    }

    pub fn empty() -> FinSet {
        FinSet::new(Vec::new()).unwrap()
    }

    pub fn singleton() -> FinSet {
        FinSet::new(vec![Elem::star()]).unwrap()
    }

    /// `{0, .., n-1}` as integer tokens.
    pub fn range(n: usize) -> FinSet {
        FinSet::new((0..n as i64).map(Elem::Int).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> &Elem {
        &self.elems[i]
    }

    pub fn index_of(&self, x: &Elem) -> Option<usize> {
        if self.elems.len() <= 8 {
            return self.elems.iter().position(|e| e == x);
        }
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.index.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Elem> {
        self.elems.iter()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FinSetJson { elems: self.elems.iter().map(|e| e.to_string()).collect() })
            .expect("finset serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FinSet, FinError> {
        let j: FinSetJson = serde_json::from_value(v.clone()).map_err(|e| FinError::Json(e.to_string()))?;
        FinSet::new(j.elems.iter().map(|s| Elem::parse(s)).collect::<Result<_, _>>()?)
    }
}

#[derive(Serialize, Deserialize)]
struct FinSetJson {
    elems: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FinFnJson {
    dom: serde_json::Value,
    cod: serde_json::Value,
    table: BTreeMap<String, String>,
}

/// Cartesian product in a-major order.
pub fn product(a: &FinSet, b: &FinSet) -> FinSet {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            out.push(Elem::pair(x.clone(), y.clone()));
        }
    }
    FinSet::new(out).expect("pairs of distinct elements are distinct")
}

/// Tags for the two injections of a coproduct.
pub fn inl(x: Elem) -> Elem {
    Elem::pair(Elem::Int(0), x)
}

pub fn inr(x: Elem) -> Elem {
    Elem::pair(Elem::Int(1), x)
}

pub fn coproduct(a: &FinSet, b: &FinSet) -> FinSet {
    let out = a.iter().cloned().map(inl).chain(b.iter().cloned().map(inr)).collect();
    FinSet::new(out).expect("tagged elements are distinct")
}

/// A total function between finite sets, stored as codomain indices in
/// domain order.
#[derive(Clone, PartialEq, Eq)]
pub struct FinFn {
    dom: FinSet,
    cod: FinSet,
    table: Arc<[usize]>,
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} [", self.dom, self.cod)?;
        for (i, x) in self.dom.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}↦{}", self.cod.get(self.table[i]))?;
        }
        write!(f, "]")
    }
}

impl FinFn {
    pub fn from_indices(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<FinFn, FinError> {
        if table.len() != dom.len() {
            return Err(FinError::Boundary {
                expected: format!("{} entries", dom.len()),
                found: format!("{} entries", table.len()),
            });
        }
        if let Some(&bad) = table.iter().find(|&&i| i >= cod.len()) {
            return Err(FinError::NotMember { elem: format!("#{bad}"), set: cod.to_string() });
        }
        Ok(FinFn { dom, cod, table: Arc::from(table) })
    }

    pub fn from_fn(dom: &FinSet, cod: &FinSet, f: impl Fn(&Elem) -> Elem) -> Result<FinFn, FinError> {
        let table = dom
            .iter()
            .map(|x| {
                let y = f(x);
                cod.index_of(&y).ok_or_else(|| FinError::NotMember { elem: y.to_string(), set: cod.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FinFn { dom: dom.clone(), cod: cod.clone(), table: Arc::from(table) })
    }

    pub fn identity(a: &FinSet) -> FinFn {
        FinFn { dom: a.clone(), cod: a.clone(), table: (0..a.len()).collect() }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply_idx(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply(&self, x: &Elem) -> Option<Elem> {
        self.dom.index_of(x).map(|i| self.cod.get(self.table[i]).clone())
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &FinFn) -> Result<FinFn, FinError> {
        compose(self, g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let table = self
            .dom
            .iter()
            .enumerate()
            .map(|(i, x)| (x.to_string(), self.cod.get(self.table[i]).to_string()))
            .collect();
        serde_json::to_value(FinFnJson { dom: self.dom.to_json(), cod: self.cod.to_json(), table })
            .expect("finfn serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FinFn, FinError> {
        let j: FinFnJson = serde_json::from_value(v.clone()).map_err(|e| FinError::Json(e.to_string()))?;
        let dom = FinSet::from_json(&j.dom)?;
        let cod = FinSet::from_json(&j.cod)?;
        let mut parsed = HashMap::new();
        for (k, v) in &j.table {
            parsed.insert(Elem::parse(k)?, Elem::parse(v)?);
        }
        FinFn::from_fn(&dom, &cod, |x| parsed.get(x).cloned().unwrap_or_else(|| Elem::atom("?missing")))
    }
}

/// `f` then `g`; requires `cod(f) = dom(g)`.
pub fn compose(f: &FinFn, g: &FinFn) -> Result<FinFn, FinError> {
    if f.cod != g.dom {
        return Err(FinError::Boundary { expected: g.dom.to_string(), found: f.cod.to_string() });
    }
    let table: Vec<usize> = f.table.iter().map(|&i| g.table[i]).collect();
    Ok(FinFn { dom: f.dom.clone(), cod: g.cod.clone(), table: Arc::from(table) })
}

pub fn identity(a: &FinSet) -> FinFn {
    FinFn::identity(a)
}

/// All `|b|^|a|` functions; the image of the last domain element varies
/// fastest.
pub fn enumerate_functions(a: &FinSet, b: &FinSet) -> Vec<FinFn> {
    let n = a.len();
    let k = b.len();
    if n == 0 {
        return vec![FinFn { dom: a.clone(), cod: b.clone(), table: Arc::from(Vec::new()) }];
    }
    if k == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        out.push(FinFn { dom: a.clone(), cod: b.clone(), table: Arc::from(digits.clone()) });
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// `f × g` acting componentwise on a-major products.
pub fn product_map(f: &FinFn, g: &FinFn) -> FinFn {
    let dom = product(&f.dom, &g.dom);
    let cod = product(&f.cod, &g.cod);
    let m = g.dom.len();
    let k = g.cod.len();
    let table: Vec<usize> = (0..dom.len()).map(|i| f.table[i / m] * k + g.table[i % m]).collect();
    FinFn { dom, cod, table: Arc::from(table) }
}

/// `((p,q),(r,s)) ↦ ((p,r),(q,s))` from `(a×b)×(c×d)` to `(a×c)×(b×d)`.
pub fn middle_four(a: &FinSet, b: &FinSet, c: &FinSet, d: &FinSet) -> FinFn {
    let dom = product(&product(a, b), &product(c, d));
    let cod = product(&product(a, c), &product(b, d));
    FinFn::from_fn(&dom, &cod, |x| {
        let (pq, rs) = x.as_pair().unwrap();
        let (p, q) = pq.as_pair().unwrap();
        let (r, s) = rs.as_pair().unwrap();
        Elem::pair(Elem::pair(p.clone(), r.clone()), Elem::pair(q.clone(), s.clone()))
    })
    .expect("middle-four lands in its codomain")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elem_round_trip() {
        for s in ["x", "0", "(a,(b,c))", "[]", "[x,(1,2),[y]]", "*"] {
            assert_eq!(Elem::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(Elem::parse("3").unwrap(), Elem::Int(3));
        assert!(Elem::parse("(a,b").is_err());
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(FinSet::from_strs(&["a", "a"]), Err(FinError::Duplicate(_))));
    }

    #[test]
    fn json_round_trip() {
        let a = FinSet::from_strs(&["x", "y"]).unwrap();
        let b = FinSet::range(3);
        let f = FinFn::from_indices(a.clone(), b.clone(), vec![2, 0]).unwrap();
        assert_eq!(FinSet::from_json(&a.to_json()).unwrap(), a);
        assert_eq!(FinFn::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn coproduct_tags() {
        let s = coproduct(&FinSet::range(1), &FinSet::range(2));
        assert_eq!(s.to_string(), "{(0,0),(1,0),(1,1)}");
    }
}
