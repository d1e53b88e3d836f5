//! Separated monoids: a monoid with a relation marking non-conflicting
//! elements, plus the shipped instances and a law checker.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finset::{Elem, FinError, FinSet};
use crate::report::LawReport;

pub type BinOp = Arc<dyn Fn(&Elem, &Elem) -> Elem + Send + Sync>;
pub type Rel = Arc<dyn Fn(&Elem, &Elem) -> bool + Send + Sync>;
pub type Member = Arc<dyn Fn(&Elem) -> bool + Send + Sync>;

#[derive(Debug, Error)]
pub enum SepError {
    #[error(transparent)]
    Fin(#[from] FinError),
    #[error("malformed separated monoid: {0}")]
    Malformed(String),
}

#[derive(Clone)]
pub struct SepMonoid {
    pub name: String,
    /// The whole carrier when it is finite.
    pub carrier: Option<FinSet>,
    /// Elements used for law checks; the whole carrier when finite.
    pub probes: Vec<Elem>,
    pub unit: Elem,
    op: BinOp,
    sep: Rel,
    member: Member,
}

impl fmt::Debug for SepMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SepMonoid({})", self.name)
    }
}

impl SepMonoid {
    pub fn new(
        name: impl Into<String>,
        carrier: Option<FinSet>,
        probes: Vec<Elem>,
        unit: Elem,
        op: BinOp,
        sep: Rel,
        member: Member,
    ) -> SepMonoid {
        SepMonoid { name: name.into(), carrier, probes, unit, op, sep, member }
    }

    pub fn is_finite(&self) -> bool {
        self.carrier.is_some()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        (self.op)(a, b)
    }

    pub fn separated(&self, a: &Elem, b: &Elem) -> bool {
        (self.sep)(a, b)
    }

    pub fn contains(&self, x: &Elem) -> bool {
        (self.member)(x)
    }

    /// Same monoid with a different separation relation.
    pub fn with_sep(&self, name: impl Into<String>, sep: Rel) -> SepMonoid {
        SepMonoid { name: name.into(), sep, ..self.clone() }
    }

    /// Finite instances as carrier + op table + sep table.
    pub fn to_json(&self) -> Option<serde_json::Value> {
        let c = self.carrier.as_ref()?;
        let op = c.iter().map(|a| c.iter().map(|b| self.mul(a, b).to_string()).collect()).collect();
        let sep = c.iter().map(|a| c.iter().map(|b| self.separated(a, b)).collect()).collect();
        let j = SepJson {
            name: self.name.clone(),
            carrier: c.iter().map(|e| e.to_string()).collect(),
            unit: self.unit.to_string(),
            op,
            sep,
        };
        Some(serde_json::to_value(j).expect("sep monoid serializes"))
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SepMonoid, SepError> {
        let j: SepJson = serde_json::from_value(v.clone()).map_err(|e| SepError::Malformed(e.to_string()))?;
        let carrier = FinSet::new(j.carrier.iter().map(|s| Elem::parse(s)).collect::<Result<_, _>>()?)?;
        let n = carrier.len();
        if j.op.len() != n || j.sep.len() != n || j.op.iter().any(|r| r.len() != n) || j.sep.iter().any(|r| r.len() != n)
        {
            return Err(SepError::Malformed(format!("tables must be {n}x{n}")));
        }
        let unit = Elem::parse(&j.unit)?;
        if !carrier.contains(&unit) {
            return Err(SepError::Malformed(format!("unit {unit} not in carrier")));
        }
        let mut op = HashMap::new();
        let mut sep = HashMap::new();
        for (i, a) in carrier.iter().enumerate() {
            for (k, b) in carrier.iter().enumerate() {
                let c = Elem::parse(&j.op[i][k])?;
                if !carrier.contains(&c) {
                    return Err(SepError::Malformed(format!("{a}·{b} = {c} leaves the carrier")));
                }
                op.insert((a.clone(), b.clone()), c);
                sep.insert((a.clone(), b.clone()), j.sep[i][k]);
            }
        }
        let op = Arc::new(op);
        let sep = Arc::new(sep);
        let mem = carrier.clone();
        Ok(SepMonoid {
            name: j.name,
            probes: carrier.elems().to_vec(),
            carrier: Some(carrier),
            unit,
            op: Arc::new(move |a, b| op.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(|| Elem::atom("?"))),
            sep: Arc::new(move |a, b| sep.get(&(a.clone(), b.clone())).copied().unwrap_or(false)),
            member: Arc::new(move |x| mem.contains(x)),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct SepJson {
    name: String,
    carrier: Vec<String>,
    unit: String,
    op: Vec<Vec<String>>,
    sep: Vec<Vec<bool>>,
}

/// Subsets of `resources` as sorted lists, in bitmask order.
pub fn subsets(resources: &FinSet) -> Vec<Elem> {
    let n = resources.len();
    (0u64..(1 << n))
        .map(|mask| Elem::list((0..n).filter(|i| mask >> i & 1 == 1).map(|i| resources.get(i).clone()).collect()))
        .collect()
}

/// Finite subsets of `resources` under union, separated when disjoint.
pub fn pf_sep_monoid(resources: &FinSet) -> SepMonoid {
    let carrier = FinSet::new(subsets(resources)).expect("distinct subsets");
    let order = resources.clone();
    let union = move |x: &Elem, y: &Elem| {
        let (a, b) = (x.as_list().unwrap_or(&[]), y.as_list().unwrap_or(&[]));
        let mut out: Vec<Elem> = a.iter().chain(b.iter()).cloned().collect();
        out.sort_by_key(|x| order.index_of(x).unwrap_or(usize::MAX));
        out.dedup();
        Elem::list(out)
    };
    // small carriers get a precomputed multiplication table
    let k = carrier.len();
    let table: Option<Vec<Elem>> =
        (k <= 8).then(|| carrier.elems().iter().flat_map(|x| carrier.elems().iter().map(|y| union(x, y)).collect::<Vec<_>>()).collect());
    let tc = carrier.clone();
    let op: BinOp = Arc::new(move |x, y| match (&table, tc.index_of(x), tc.index_of(y)) {
        (Some(t), Some(i), Some(j)) => t[i * k + j].clone(),
        _ => union(x, y),
    });
    let sep: Rel = Arc::new(|a, b| {
        let (a, b) = (a.as_list().unwrap_or(&[]), b.as_list().unwrap_or(&[]));
        !a.iter().any(|x| b.contains(x))
    });
    let mem = carrier.clone();
    SepMonoid {
        name: format!("Pf({resources})"),
        probes: carrier.elems().to_vec(),
        carrier: Some(carrier),
        unit: Elem::list(vec![]),
        op,
        sep,
        member: Arc::new(move |x| mem.contains(x)),
    }
}

/// Natural numbers under addition; `x ∥ y` iff one of them is zero. The
/// carrier is infinite, so probes are `{0..5}`.
pub fn nat_sep_monoid() -> SepMonoid {
    SepMonoid {
        name: "N".into(),
        carrier: None,
        probes: (0..=5).map(Elem::Int).collect(),
        unit: Elem::Int(0),
        op: Arc::new(|a, b| Elem::Int(a.as_int().unwrap_or(0) + b.as_int().unwrap_or(0))),
        sep: Arc::new(|a, b| a.as_int() == Some(0) || b.as_int() == Some(0)),
        member: Arc::new(|x| x.as_int().is_some_and(|n| n >= 0)),
    }
}

/// Componentwise product with pointwise separation.
pub fn product_sep(m1: &SepMonoid, m2: &SepMonoid) -> SepMonoid {
    let carrier = match (&m1.carrier, &m2.carrier) {
        (Some(a), Some(b)) => Some(crate::finset::product(a, b)),
        _ => None,
    };
    let mut probes = Vec::new();
    for x in &m1.probes {
        for y in &m2.probes {
            probes.push(Elem::pair(x.clone(), y.clone()));
        }
    }
    let (a, b) = (m1.clone(), m2.clone());
    let op: BinOp = Arc::new(move |x, y| Elem::pair(a.mul(x.left(), y.left()), b.mul(x.right(), y.right())));
    let (a, b) = (m1.clone(), m2.clone());
    let sep: Rel = Arc::new(move |x, y| a.separated(x.left(), y.left()) && b.separated(x.right(), y.right()));
    let (a, b) = (m1.clone(), m2.clone());
    let member: Member = Arc::new(move |x| x.as_pair().is_some_and(|(l, r)| a.contains(l) && b.contains(r)));
    SepMonoid {
        name: format!("{}×{}", m1.name, m2.name),
        carrier,
        probes,
        unit: Elem::pair(m1.unit.clone(), m2.unit.clone()),
        op,
        sep,
        member,
    }
}

/// Checks the monoid laws and the three separation clauses over all probe
/// triples. With `probes = None` the monoid's own probe list is used.
pub fn check_separated_laws(m: &SepMonoid, probes: Option<&[Elem]>) -> LawReport {
    let ps: Vec<Elem> = probes.map(|p| p.to_vec()).unwrap_or_else(|| m.probes.clone());
    let exhaustive = m.is_finite() && probes.is_none();
    let mut r = LawReport::new(format!("separated monoid {}", m.name));
    r.note(format!(
        "{} probes ({})",
        ps.len(),
        if exhaustive { "whole carrier" } else { "declared sample" }
    ));
    let e = &m.unit;
    for a in &ps {
        if !m.contains(a) {
            r.fail("carrier", a.to_string(), "probe is not a carrier element");
            continue;
        }
        let mut unit_ok = |law: &str, lhs: Elem| {
            if &lhs == a {
                r.pass(law, 1, exhaustive);
            } else {
                r.fail(law, a.to_string(), format!("got {lhs}"));
            }
        };
        unit_ok("monoid-unit-left", m.mul(e, a));
        unit_ok("monoid-unit-right", m.mul(a, e));
        if m.separated(e, a) {
            r.pass("sep-unit-left", 1, exhaustive);
        } else {
            r.fail("sep-unit-left", format!("e={e}, m={a}"), format!("{e} ∥ {a} does not hold"));
        }
        if m.separated(a, e) {
            r.pass("sep-unit-right", 1, exhaustive);
        } else {
            r.fail("sep-unit-right", format!("m={a}, e={e}"), format!("{a} ∥ {e} does not hold"));
        }
    }
    for a in &ps {
        for b in &ps {
            let ab = m.mul(a, b);
            if !m.contains(&ab) {
                r.fail("monoid-closure", format!("{a}·{b}"), format!("{ab} is not a carrier element"));
            }
            for c in &ps {
                let lhs = m.mul(&ab, c);
                let rhs = m.mul(a, &m.mul(b, c));
                if lhs == rhs {
                    r.pass("monoid-assoc", 1, exhaustive);
                } else {
                    r.fail("monoid-assoc", format!("({a},{b},{c})"), format!("{lhs} ≠ {rhs}"));
                }
                // mm' ∥ n  iff  m ∥ n and m' ∥ n
                let l = m.separated(&ab, c);
                let rr = m.separated(a, c) && m.separated(b, c);
                if l == rr {
                    r.pass("sep-mul-left", 1, exhaustive);
                } else {
                    r.fail(
                        "sep-mul-left",
                        format!("m={a}, m'={b}, n={c}"),
                        format!("{ab} ∥ {c} is {l} but {a} ∥ {c} ∧ {b} ∥ {c} is {rr}"),
                    );
                }
                // m ∥ nn'  iff  m ∥ n and m ∥ n'
                let bc = m.mul(b, c);
                let l = m.separated(a, &bc);
                let rr = m.separated(a, b) && m.separated(a, c);
                if l == rr {
                    r.pass("sep-mul-right", 1, exhaustive);
                } else {
                    r.fail(
                        "sep-mul-right",
                        format!("m={a}, n={b}, n'={c}"),
                        format!("{a} ∥ {bc} is {l} but {a} ∥ {b} ∧ {a} ∥ {c} is {rr}"),
                    );
                }
            }
        }
    }
    r
}

/// Test mutant: `m` with the separation between `a` and `b` removed.
pub fn drop_separation(m: &SepMonoid, a: Elem, b: Elem) -> SepMonoid {
    let inner = m.clone();
    m.with_sep(
        format!("{}[drop {a}∥{b}]", m.name),
        Arc::new(move |x, y| !(x == &a && y == &b) && inner.separated(x, y)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pf_order_and_ops() {
        let m = pf_sep_monoid(&FinSet::from_strs(&["x", "y"]).unwrap());
        assert_eq!(m.carrier.as_ref().unwrap().to_string(), "{[],[x],[y],[x,y]}");
        let y = Elem::parse("[y]").unwrap();
        let x = Elem::parse("[x]").unwrap();
        assert_eq!(m.mul(&y, &x), Elem::parse("[x,y]").unwrap());
    }

    #[test]
    fn json_round_trip() {
        let m = pf_sep_monoid(&FinSet::from_strs(&["x"]).unwrap());
        let back = SepMonoid::from_json(&m.to_json().unwrap()).unwrap();
        assert!(check_separated_laws(&back, None).passed());
        assert_eq!(back.to_json(), m.to_json());
    }
}
