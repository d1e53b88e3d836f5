//! Finite premonoidal categories as explicit tables, Freyd categories, the
//! centre, and the free and forgetful functors between Freyd categories and
//! Subset-Freyd categories.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rand::Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::duoidal::{rng_for, stray, subset_duoidal, subset_obj, validate, Duoidal, Mor, Obj, ProbeCfg, SetDuoidal, IN};
use crate::finset::{Elem, FinSet};
use crate::mcat::{BMor, MCat, MonBase, TypeObj};
use crate::report::LawReport;
use crate::vfreyd::{check_vfreyd_morphism, vfreyd_mor_over_identity, VFreyd, VFreydMor, VfCfg};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreydError {
    #[error("hom {a} → {b} has more than {limit} morphisms")]
    TooLarge { a: String, b: String, limit: usize },
    #[error("table error: {0}")]
    Table(String),
    #[error("{0} is not enriched in Subset")]
    NotSubset(String),
}

/// A finite binoidal category with strict unit and associativity on type
/// words. `x ⊗ y` is defined when the concatenated word is an object.
#[derive(Clone, Debug)]
pub struct FinCat {
    pub name: String,
    pub objects: Vec<TypeObj>,
    pub homs: HashMap<(TypeObj, TypeObj), Vec<BMor>>,
    pub ids: HashMap<TypeObj, BMor>,
    /// `(f, g) ↦ g . f`
    pub comp: HashMap<(BMor, BMor), BMor>,
    /// `(f, x) ↦ f ⋉ x`
    pub ltens: HashMap<(BMor, TypeObj), BMor>,
    /// `(x, f) ↦ x ⋊ f`
    pub rtens: HashMap<(TypeObj, BMor), BMor>,
}

fn key(m: &BMor) -> (TypeObj, TypeObj, Elem) {
    (m.src.clone(), m.tgt.clone(), m.repr.clone())
}

impl FinCat {
    /// Fills the tables from closures; `lt` and `rt` are only asked where
    /// the tensor objects exist.
    pub fn from_fns(
        name: impl Into<String>,
        objects: Vec<TypeObj>,
        hom: impl Fn(&TypeObj, &TypeObj) -> Result<Vec<BMor>, FreydError>,
        id: impl Fn(&TypeObj) -> BMor,
        then: impl Fn(&BMor, &BMor) -> Option<BMor>,
        lt: impl Fn(&BMor, &TypeObj) -> Option<BMor>,
        rt: impl Fn(&TypeObj, &BMor) -> Option<BMor>,
    ) -> Result<FinCat, FreydError> {
        let mut c = FinCat {
            name: name.into(),
            objects,
            homs: HashMap::new(),
            ids: HashMap::new(),
            comp: HashMap::new(),
            ltens: HashMap::new(),
            rtens: HashMap::new(),
        };
        for a in &c.objects {
            c.ids.insert(a.clone(), id(a));
            for b in &c.objects {
                c.homs.insert((a.clone(), b.clone()), hom(a, b)?);
            }
        }
        for a in &c.objects {
            for b in &c.objects {
                for x in &c.objects {
                    let fs = &c.homs[&(a.clone(), b.clone())];
                    for g in &c.homs[&(b.clone(), x.clone())] {
                        for f in fs {
                            if let Some(h) = then(f, g) {
                                c.comp.insert((f.clone(), g.clone()), h);
                            }
                        }
                    }
                    if c.tensor(a, x).is_some() && c.tensor(b, x).is_some() {
                        for f in fs {
                            if let Some(h) = lt(f, x) {
                                c.ltens.insert((f.clone(), x.clone()), h);
                            }
                        }
                    }
                    if c.tensor(x, a).is_some() && c.tensor(x, b).is_some() {
                        for f in fs {
                            if let Some(h) = rt(x, f) {
                                c.rtens.insert((x.clone(), f.clone()), h);
                            }
                        }
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn tensor(&self, a: &TypeObj, b: &TypeObj) -> Option<TypeObj> {
        let t = a.tensor(b);
        self.objects.contains(&t).then_some(t)
    }

    pub fn hom(&self, a: &TypeObj, b: &TypeObj) -> &[BMor] {
        self.homs.get(&(a.clone(), b.clone())).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn id(&self, a: &TypeObj) -> Option<&BMor> {
        self.ids.get(a)
    }

    /// `f` then `g`.
    pub fn then(&self, f: &BMor, g: &BMor) -> Option<&BMor> {
        self.comp.get(&(f.clone(), g.clone()))
    }

    pub fn lt(&self, f: &BMor, x: &TypeObj) -> Option<&BMor> {
        self.ltens.get(&(f.clone(), x.clone()))
    }

    pub fn rt(&self, x: &TypeObj, f: &BMor) -> Option<&BMor> {
        self.rtens.get(&(x.clone(), f.clone()))
    }

    pub fn morphisms(&self) -> Vec<&BMor> {
        let mut out = Vec::new();
        for a in &self.objects {
            for b in &self.objects {
                out.extend(self.hom(a, b));
            }
        }
        out
    }

    /// Both interleaving equations for `f : x → y` against `g : x' → y'`.
    /// `None` when a tensor object is missing.
    pub fn commutes(&self, f: &BMor, g: &BMor) -> Option<Result<(), String>> {
        let (x, y, x2, y2) = (&f.src, &f.tgt, &g.src, &g.tgt);
        for (p, q) in [(x, x2), (y, x2), (x, y2), (y, y2)] {
            self.tensor(p, q)?;
            self.tensor(q, p)?;
        }
        let side = |a: Option<&BMor>, b: Option<&BMor>| a.zip(b).and_then(|(a, b)| self.then(a, b)).cloned();
        let l1 = side(self.lt(f, x2), self.rt(y, g));
        let r1 = side(self.rt(x, g), self.lt(f, y2));
        let l2 = side(self.lt(g, x), self.rt(y2, f));
        let r2 = side(self.rt(x2, f), self.lt(g, y));
        let show = |m: &Option<BMor>| m.as_ref().map(|m| format!("{m:?}")).unwrap_or_else(|| "undefined".into());
        Some(if l1.is_none() || l1 != r1 {
            Err(format!("{f:?} ⋉ then ⋊ {g:?} gives {}, the other order gives {}", show(&l1), show(&r1)))
        } else if l2.is_none() || l2 != r2 {
            Err(format!("{g:?} ⋉ then ⋊ {f:?} gives {}, the other order gives {}", show(&l2), show(&r2)))
        } else {
            Ok(())
        })
    }

    /// `Ok(n)` with the number of partners tested, or the first witness.
    pub fn is_central(&self, g: &BMor) -> Result<u64, String> {
        let mut n = 0;
        for f in self.morphisms() {
            match self.commutes(f, g) {
                Some(Ok(())) => n += 1,
                Some(Err(w)) => return Err(w),
                None => {}
            }
        }
        Ok(n)
    }

    /// The wide subcategory of central morphisms.
    pub fn centre(&self) -> Vec<BMor> {
        self.morphisms().into_iter().filter(|g| self.is_central(g).is_ok()).cloned().collect()
    }

    /// First difference from `other`, comparing every table as a set.
    pub fn diff(&self, other: &FinCat) -> Option<String> {
        let sorted = |v: &[TypeObj]| {
            let mut v = v.to_vec();
            v.sort();
            v
        };
        if sorted(&self.objects) != sorted(&other.objects) {
            return Some(format!("objects {:?} vs {:?}", self.objects, other.objects));
        }
        for a in &self.objects {
            for b in &self.objects {
                let mut x: Vec<_> = self.hom(a, b).iter().map(key).collect();
                let mut y: Vec<_> = other.hom(a, b).iter().map(key).collect();
                x.sort();
                y.sort();
                if x != y {
                    return Some(format!("hom {a} → {b}: {} vs {} morphisms", x.len(), y.len()));
                }
            }
            if self.ids.get(a) != other.ids.get(a) {
                return Some(format!("identity on {a}"));
            }
        }
        fn same<K: std::hash::Hash + Eq + std::fmt::Debug>(what: &str, x: &HashMap<K, BMor>, y: &HashMap<K, BMor>) -> Option<String> {
            if x.len() != y.len() {
                return Some(format!("{what}: {} vs {} entries", x.len(), y.len()));
            }
            x.iter().find(|(k, v)| y.get(k) != Some(v)).map(|(k, v)| format!("{what} at {k:?}: {v:?} vs {:?}", y.get(k)))
        }
        same("composition", &self.comp, &other.comp).or_else(|| same("⋉", &self.ltens, &other.ltens)).or_else(|| same("⋊", &self.rtens, &other.rtens))
    }
}

impl MonBase for FinCat {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn unit(&self) -> TypeObj {
        TypeObj::unit()
    }
    fn tensor(&self, a: &TypeObj, b: &TypeObj) -> Option<TypeObj> {
        FinCat::tensor(self, a, b)
    }
    fn objects(&self) -> Vec<TypeObj> {
        self.objects.clone()
    }
    fn homs(&self, a: &TypeObj, b: &TypeObj, limit: usize, seed: u64) -> Vec<BMor> {
        let h = self.hom(a, b);
        if h.len() <= limit {
            return h.to_vec();
        }
        let mut rng = rng_for(seed, &format!("{} homs {a} {b}", self.name));
        (0..limit).map(|_| h[rng.gen_range(0..h.len())].clone()).collect()
    }
    fn id(&self, a: &TypeObj) -> BMor {
        self.ids[a].clone()
    }
    fn compose(&self, f: &BMor, g: &BMor) -> Option<BMor> {
        self.then(f, g).cloned()
    }
    /// `f ⊗ g = (f ⋉ a₂) then (b₁ ⋊ g)`
    fn tensor_mor(&self, f: &BMor, g: &BMor) -> Option<BMor> {
        self.then(self.lt(f, &g.src)?, self.rt(&f.tgt, g)?).cloned()
    }
}

/// Tabulates a strict monoidal base on the given objects.
pub fn tabulate_base(base: &dyn MonBase, objects: &[TypeObj], limit: usize) -> Result<FinCat, FreydError> {
    FinCat::from_fns(
        base.name(),
        objects.to_vec(),
        |a, b| {
            let h = base.homs(a, b, limit + 1, 0);
            if h.len() > limit {
                return Err(FreydError::TooLarge { a: a.to_string(), b: b.to_string(), limit });
            }
            Ok(h)
        },
        |a| base.id(a),
        |f, g| base.compose(f, g),
        |f, x| base.tensor_mor(f, &base.id(x)),
        |x, f| base.tensor_mor(&base.id(x), f),
    )
}

/// `J : M → C`, identity on objects.
#[derive(Clone, Debug)]
pub struct FreydCat {
    pub name: String,
    pub m: Arc<FinCat>,
    pub c: Arc<FinCat>,
    pub j: HashMap<BMor, BMor>,
}

impl FreydCat {
    pub fn j_of(&self, f: &BMor) -> Option<&BMor> {
        self.j.get(f)
    }

    pub fn diff(&self, other: &FreydCat) -> Option<String> {
        if let Some(d) = self.m.diff(&other.m) {
            return Some(format!("M: {d}"));
        }
        if let Some(d) = self.c.diff(&other.c) {
            return Some(format!("C: {d}"));
        }
        if self.j.len() != other.j.len() {
            return Some(format!("J: {} vs {} entries", self.j.len(), other.j.len()));
        }
        self.j.iter().find(|(k, v)| other.j.get(k) != Some(v)).map(|(k, v)| format!("J({k:?}) = {v:?} vs {:?}", other.j.get(k)))
    }
}

/// A finite monoid; element 0 is the unit.
#[derive(Clone, Debug)]
pub struct FinMonoid {
    pub name: String,
    pub elems: Vec<String>,
    pub mult: Vec<Vec<usize>>,
}

impl FinMonoid {
    pub fn new(name: &str, elems: &[&str], mult: impl Fn(usize, usize) -> usize) -> FinMonoid {
        let n = elems.len();
        FinMonoid {
            name: name.into(),
            elems: elems.iter().map(|s| s.to_string()).collect(),
            mult: (0..n).map(|i| (0..n).map(|j| mult(i, j)).collect()).collect(),
        }
    }

    pub fn trivial() -> FinMonoid {
        FinMonoid::new("1", &["1"], |_, _| 0)
    }

    pub fn z2() -> FinMonoid {
        FinMonoid::new("Z2", &["1", "t"], |a, b| a ^ b)
    }

    /// `r^i s^j` at index `i + 4j`, with `s r = r³ s`.
    pub fn d4() -> FinMonoid {
        let names = ["1", "r", "r2", "r3", "s", "rs", "r2s", "r3s"];
        FinMonoid::new("D4", &names, |x, y| {
            let (a, b, c, d) = (x % 4, x / 4, y % 4, y / 4);
            let rot = (if b == 0 { a + c } else { a + 4 - c }) % 4;
            rot + 4 * ((b + d) % 2)
        })
    }

    /// `{1, a, b}` with `xy = x` for `x, y ≠ 1`.
    pub fn left_zero() -> FinMonoid {
        FinMonoid::new("LZ", &["1", "a", "b"], |x, y| if x == 0 { y } else { x })
    }

    pub fn check(&self) -> Result<(), String> {
        let n = self.elems.len();
        for x in 0..n {
            if self.mult[0][x] != x || self.mult[x][0] != x {
                return Err(format!("{} is not a unit for {}", self.elems[0], self.elems[x]));
            }
            for y in 0..n {
                for z in 0..n {
                    if self.mult[self.mult[x][y]][z] != self.mult[x][self.mult[y][z]] {
                        return Err(format!("not associative at {}, {}, {}", self.elems[x], self.elems[y], self.elems[z]));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn centre(&self) -> Vec<usize> {
        let n = self.elems.len();
        (0..n).filter(|&x| (0..n).all(|y| self.mult[x][y] == self.mult[y][x])).collect()
    }
}

fn writer_mor(a: &TypeObj, b: &TypeObj, table: &[(usize, usize)]) -> BMor {
    let repr = Elem::list(table.iter().map(|&(o, w)| Elem::pair(Elem::Int(o as i64), Elem::Int(w as i64))).collect());
    BMor { src: a.clone(), tgt: b.clone(), repr }
}

fn writer_table(m: &BMor) -> Vec<(usize, usize)> {
    m.repr
        .as_list()
        .expect("writer table")
        .iter()
        .map(|p| (p.left().as_int().expect("index") as usize, p.right().as_int().expect("index") as usize))
        .collect()
}

/// The Kleisli category of the writer monad `− × W` over the function
/// category on `objects`, with pure functions as `M`.
pub fn writer_freyd(name: &str, base: &MCat, objects: &[TypeObj], w: &FinMonoid) -> Result<FreydCat, FreydError> {
    let vals = |a: &TypeObj| base.value_set(a).map_err(|e| FreydError::Table(e.to_string()));
    let mut sets = HashMap::new();
    for a in objects {
        sets.insert(a.clone(), vals(a)?);
    }
    let nw = w.elems.len();
    let hom = |a: &TypeObj, b: &TypeObj| {
        let (na, nb) = (sets[a].len(), sets[b].len());
        let base_n = nb * nw;
        let total = base_n.checked_pow(na as u32).filter(|&t| t <= 1 << 16).ok_or_else(|| FreydError::TooLarge {
            a: a.to_string(),
            b: b.to_string(),
            limit: 1 << 16,
        })?;
        Ok((0..total)
            .map(|mut k| {
                let mut t = vec![(0, 0); na];
                for slot in t.iter_mut().rev() {
                    let d = k % base_n;
                    k /= base_n;
                    *slot = (d / nw, d % nw);
                }
                writer_mor(a, b, &t)
            })
            .collect())
    };
    let id = |a: &TypeObj| writer_mor(a, a, &(0..sets[a].len()).map(|i| (i, 0)).collect::<Vec<_>>());
    let then = |f: &BMor, g: &BMor| {
        let (tf, tg) = (writer_table(f), writer_table(g));
        let t: Vec<(usize, usize)> = tf.iter().map(|&(o, w1)| (tg[o].0, w.mult[w1][tg[o].1])).collect();
        Some(writer_mor(&f.src, &g.tgt, &t))
    };
    let whisker = |f: &BMor, x: &TypeObj, left: bool| -> Option<BMor> {
        let tf = writer_table(f);
        let (src, tgt) = if left { (f.src.tensor(x), f.tgt.tensor(x)) } else { (x.tensor(&f.src), x.tensor(&f.tgt)) };
        let (ds, dt, da, db) = (sets.get(&src)?, sets.get(&tgt)?, &sets[&f.src], &sets[&f.tgt]);
        let t = ds
            .iter()
            .map(|v| {
                let (u, rest) = if left { base.split(&f.src, x, v) } else { base.split(x, &f.src, v) };
                let (active, other) = if left { (u, rest) } else { (rest, u) };
                let (o, wv) = tf[da.index_of(&active).expect("component")];
                let out = if left { base.join(&f.tgt, x, db.get(o), &other) } else { base.join(x, &f.tgt, &other, db.get(o)) };
                (dt.index_of(&out).expect("component"), wv)
            })
            .collect::<Vec<_>>();
        Some(writer_mor(&src, &tgt, &t))
    };
    let c = FinCat::from_fns(format!("Kl({} × {})", base.name(), w.name), objects.to_vec(), hom, id, then, |f, x| whisker(f, x, true), |x, f| whisker(f, x, false))?;
    let m = tabulate_base(base, objects, 1 << 16)?;
    let mut j = HashMap::new();
    for f in m.morphisms() {
        let ff = base.fun(f).map_err(|e| FreydError::Table(e.to_string()))?;
        let t: Vec<(usize, usize)> = ff.table().iter().map(|&o| (o, 0)).collect();
        j.insert(f.clone(), writer_mor(&f.src, &f.tgt, &t));
    }
    Ok(FreydCat { name: name.into(), m: Arc::new(m), c: Arc::new(c), j })
}

fn unit_base() -> MCat {
    crate::mcat::bit_base()
}

/// One object `e`, `C(e, e) = W`, `M` trivial.
pub fn monoid_freyd(name: &str, w: &FinMonoid) -> FreydCat {
    writer_freyd(name, &unit_base(), &[TypeObj::unit()], w).expect("one object")
}

/// The shipped probes: trivial, `Z2`, `D4` on one object, and the
/// left-zero writer on `{e, bit}`.
pub fn freyd_probes() -> Vec<FreydCat> {
    let e = TypeObj::unit();
    vec![
        monoid_freyd("trivial", &FinMonoid::trivial()),
        monoid_freyd("Z2", &FinMonoid::z2()),
        monoid_freyd("D4", &FinMonoid::d4()),
        writer_freyd("left-zero writer", &unit_base(), &[e, TypeObj::base("bit")], &FinMonoid::left_zero()).expect("small"),
    ]
}

/// `M = Z2`, `C = D4`, with `J` sending the generator to the reflection `s`.
pub fn noncentral_j_mutant() -> FreydCat {
    let m = monoid_freyd("Z2", &FinMonoid::z2());
    let c = monoid_freyd("D4", &FinMonoid::d4());
    let e = TypeObj::unit();
    let mm = FinCat { name: "Z2 (as M)".into(), ..(*m.c).clone() };
    let j = m.c.hom(&e, &e).iter().map(|f| {
        let w = writer_table(f)[0].1;
        (f.clone(), writer_mor(&e, &e, &[(0, if w == 0 { 0 } else { 4 })]))
    });
    FreydCat { name: "D4 with J(t) = s".into(), m: Arc::new(mm), c: c.c.clone(), j: j.collect() }
}

/// Counts passes per law and flushes them into a report.
struct Laws {
    r: LawReport,
    counts: BTreeMap<String, (u64, bool)>,
}

impl Laws {
    fn new(title: String) -> Laws {
        Laws { r: LawReport::new(title), counts: BTreeMap::new() }
    }

    fn ok(&mut self, law: &str, exhaustive: bool) {
        let e = self.counts.entry(law.to_string()).or_insert((0, true));
        e.0 += 1;
        e.1 &= exhaustive;
    }

    fn check(&mut self, law: &str, inst: impl FnOnce() -> String, r: Result<(), String>, exhaustive: bool) {
        match r {
            Ok(()) => self.ok(law, exhaustive),
            Err(w) => self.r.fail(law, inst(), w),
        }
    }

    fn eq(&mut self, law: &str, inst: impl FnOnce() -> String, l: Option<&BMor>, r: Option<&BMor>, exhaustive: bool) {
        let res = match (l, r) {
            (Some(a), Some(b)) if a == b => Ok(()),
            (Some(a), Some(b)) => Err(format!("{a:?} ≠ {b:?}")),
            (a, b) => Err(format!("undefined side: {a:?} vs {b:?}")),
        };
        self.check(law, inst, res, exhaustive);
    }

    fn finish(mut self) -> LawReport {
        for (k, (n, ex)) in self.counts {
            self.r.pass_many(&k, n, n, ex);
        }
        self.r
    }
}

#[derive(Clone, Debug)]
pub struct FreydCfg {
    /// Composable triples per object quadruple; more are sampled.
    pub max_triples: usize,
    /// Morphism pairs per centrality family; more are sampled.
    pub max_pairs: usize,
    pub seed: u64,
}

impl Default for FreydCfg {
    fn default() -> Self {
        FreydCfg { max_triples: 100_000, max_pairs: 200_000, seed: 0x5eed }
    }
}

fn check_category(c: &FinCat, p: &str, x: &mut Laws, cfg: &FreydCfg) {
    let mut rng = rng_for(cfg.seed, &format!("{p} {}", c.name));
    let obs = &c.objects;
    let law = |s: &str| format!("{p}-{s}");
    let in_hom = |m: &BMor, a: &TypeObj, b: &TypeObj| m.src == *a && m.tgt == *b && c.hom(a, b).contains(m);
    for a in obs {
        let id = c.id(a);
        x.check(&law("tables-total"), || format!("id {a}"), id.filter(|i| in_hom(i, a, a)).map(|_| ()).ok_or_else(|| "identity missing".into()), true);
        for b in obs {
            for f in c.hom(a, b) {
                x.eq(&law("identity"), || format!("{f:?}"), id.and_then(|i| c.then(i, f)), Some(f), true);
                x.eq(&law("identity"), || format!("{f:?}"), c.id(b).and_then(|i| c.then(f, i)), Some(f), true);
                for y in obs {
                    for g in c.hom(b, y) {
                        let ok = c.then(f, g).filter(|h| in_hom(h, a, y)).map(|_| ()).ok_or_else(|| "composite missing".to_string());
                        x.check(&law("tables-total"), || format!("{f:?} then {g:?}"), ok, true);
                    }
                    if let (Some(s), Some(t)) = (c.tensor(a, y), c.tensor(b, y)) {
                        let ok = c.lt(f, y).filter(|h| in_hom(h, &s, &t)).map(|_| ()).ok_or_else(|| "⋉ missing".to_string());
                        x.check(&law("tables-total"), || format!("{f:?} ⋉ {y}"), ok, true);
                    }
                    if let (Some(s), Some(t)) = (c.tensor(y, a), c.tensor(y, b)) {
                        let ok = c.rt(y, f).filter(|h| in_hom(h, &s, &t)).map(|_| ()).ok_or_else(|| "⋊ missing".to_string());
                        x.check(&law("tables-total"), || format!("{y} ⋊ {f:?}"), ok, true);
                    }
                }
            }
        }
    }
    for a in obs {
        for b in obs {
            for cc in obs {
                for d in obs {
                    let hs = [c.hom(a, b), c.hom(b, cc), c.hom(cc, d)];
                    let sizes = [hs[0].len(), hs[1].len(), hs[2].len()];
                    let mut fails = Vec::new();
                    let mut n = 0u64;
                    let ex = crate::duoidal::for_each_tuple(&sizes, cfg.max_triples, &mut rng, |t| {
                        let (f, g, h) = (&hs[0][t[0]], &hs[1][t[1]], &hs[2][t[2]]);
                        let l = c.then(f, g).and_then(|fg| c.then(fg, h));
                        let r = c.then(g, h).and_then(|gh| c.then(f, gh));
                        if l.is_some() && l == r {
                            n += 1;
                        } else if fails.is_empty() {
                            fails.push(format!("({f:?}, {g:?}, {h:?}): {l:?} vs {r:?}"));
                        }
                    });
                    for w in fails {
                        x.r.fail(&law("assoc"), format!("{a} → {b} → {cc} → {d}"), w);
                    }
                    let e = x.counts.entry(law("assoc")).or_insert((0, true));
                    e.0 += n;
                    e.1 &= ex;
                }
            }
        }
    }
    // binoidal functoriality and strictness
    let unit = TypeObj::unit();
    for y in obs {
        for a in obs {
            let ida = c.id(a);
            if let (Some(ya), Some(ay)) = (c.tensor(y, a), c.tensor(a, y)) {
                x.eq(&law("binoidal-id"), || format!("{y} ⋊ id {a}"), ida.and_then(|i| c.rt(y, i)), c.id(&ya), true);
                x.eq(&law("binoidal-id"), || format!("id {a} ⋉ {y}"), ida.and_then(|i| c.lt(i, y)), c.id(&ay), true);
            }
            for b in obs {
                for f in c.hom(a, b) {
                    if *y == unit {
                        x.eq(&law("strict-unit"), || format!("e ⋊ {f:?}"), c.rt(y, f), Some(f), true);
                        x.eq(&law("strict-unit"), || format!("{f:?} ⋉ e"), c.lt(f, y), Some(f), true);
                    }
                    for z in obs {
                        if let Some(yz) = c.tensor(y, z) {
                            if c.tensor(&yz, a).is_some() && c.tensor(&yz, b).is_some() {
                                let l = c.rt(&yz, f);
                                let r = c.rt(z, f).and_then(|zf| c.rt(y, zf));
                                x.eq(&law("strict-assoc"), || format!("({y}⊗{z}) ⋊ {f:?}"), l, r, true);
                            }
                            if c.tensor(a, &yz).is_some() && c.tensor(b, &yz).is_some() {
                                let l = c.lt(f, &yz);
                                let r = c.lt(f, y).and_then(|fy| c.lt(fy, z));
                                x.eq(&law("strict-assoc"), || format!("{f:?} ⋉ ({y}⊗{z})"), l, r, true);
                            }
                        }
                        let defined = [c.tensor(y, a), c.tensor(y, b)].iter().flatten().all(|ya| c.tensor(ya, z).is_some());
                        if c.tensor(y, a).is_some() && c.tensor(y, b).is_some() && defined {
                            let l = c.rt(y, f).and_then(|yf| c.lt(yf, z));
                            let r = c.lt(f, z).and_then(|fz| c.rt(y, fz));
                            if c.tensor(a, z).is_some() && c.tensor(b, z).is_some() {
                                x.eq(&law("strict-assoc"), || format!("({y} ⋊ {f:?}) ⋉ {z}"), l, r, true);
                            }
                        }
                        for g in c.hom(b, z) {
                            let fg = c.then(f, g);
                            if c.tensor(y, a).is_some() && c.tensor(y, b).is_some() && c.tensor(y, z).is_some() {
                                let l = fg.and_then(|h| c.rt(y, h));
                                let r = c.rt(y, f).zip(c.rt(y, g)).and_then(|(p, q)| c.then(p, q));
                                x.eq(&law("binoidal-comp"), || format!("{y} ⋊ ({f:?} then {g:?})"), l, r, true);
                            }
                            if c.tensor(a, y).is_some() && c.tensor(b, y).is_some() && c.tensor(z, y).is_some() {
                                let l = fg.and_then(|h| c.lt(h, y));
                                let r = c.lt(f, y).zip(c.lt(g, y)).and_then(|(p, q)| c.then(p, q));
                                x.eq(&law("binoidal-comp"), || format!("({f:?} then {g:?}) ⋉ {y}"), l, r, true);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Checks `M` monoidal, `C` premonoidal, and `J` an identity-on-objects
/// strict premonoidal functor into the centre of `C`.
pub fn check_freyd(f: &FreydCat, cfg: &FreydCfg) -> LawReport {
    let mut x = Laws::new(format!("Freyd laws for {}", f.name));
    check_category(&f.m, "m", &mut x, cfg);
    check_category(&f.c, "c", &mut x, cfg);
    let (m, c) = (&*f.m, &*f.c);
    let mut rng = rng_for(cfg.seed, "freyd centrality");
    let sample = |all: Vec<&BMor>, rng: &mut rand_chacha::ChaCha8Rng| -> (Vec<BMor>, bool) {
        let cap = (cfg.max_pairs as f64).sqrt() as usize;
        if all.len() <= cap {
            (all.into_iter().cloned().collect(), true)
        } else {
            ((0..cap).map(|_| all[rng.gen_range(0..all.len())].clone()).collect(), false)
        }
    };
    let (ms, mex) = sample(m.morphisms(), &mut rng);
    for g in &ms {
        for h in &ms {
            if let Some(r) = m.commutes(h, g) {
                x.check("m-monoidal", || format!("{h:?} against {g:?}"), r, mex);
            }
        }
    }
    let mut om = m.objects.clone();
    let mut oc = c.objects.clone();
    om.sort();
    oc.sort();
    x.check("j-identity-on-objects", || f.name.clone(), if om == oc { Ok(()) } else { Err(format!("{om:?} vs {oc:?}")) }, true);
    let (cs, cex) = sample(c.morphisms(), &mut rng);
    for a in &m.objects {
        x.eq("j-functor", || format!("J(id {a})"), m.id(a).and_then(|i| f.j_of(i)), c.id(a), true);
        for b in &m.objects {
            for g in m.hom(a, b) {
                let jg = f.j_of(g);
                let typed = jg.filter(|h| h.src == g.src && h.tgt == g.tgt).map(|_| ()).ok_or_else(|| format!("J({g:?}) = {jg:?}"));
                x.check("j-functor", || format!("J({g:?})"), typed, true);
                for z in &m.objects {
                    for h in m.hom(b, z) {
                        let l = m.then(g, h).and_then(|gh| f.j_of(gh));
                        let r = jg.zip(f.j_of(h)).and_then(|(p, q)| c.then(p, q));
                        x.eq("j-functor", || format!("J({g:?} then {h:?})"), l, r, true);
                    }
                    if m.tensor(z, a).is_some() && m.tensor(z, b).is_some() {
                        let l = m.rt(z, g).and_then(|zg| f.j_of(zg));
                        let r = jg.and_then(|jg| c.rt(z, jg));
                        x.eq("j-strict-premonoidal", || format!("J({z} ⋊ {g:?})"), l, r, true);
                    }
                    if m.tensor(a, z).is_some() && m.tensor(b, z).is_some() {
                        let l = m.lt(g, z).and_then(|gz| f.j_of(gz));
                        let r = jg.and_then(|jg| c.lt(jg, z));
                        x.eq("j-strict-premonoidal", || format!("J({g:?} ⋉ {z})"), l, r, true);
                    }
                }
                if let Some(jg) = jg {
                    for h in &cs {
                        if let Some(r) = c.commutes(h, jg) {
                            x.check("j-central", || format!("J({g:?}) = {jg:?} against {h:?}"), r, cex);
                        }
                    }
                }
            }
        }
    }
    x.finish()
}

/// A Subset-Freyd category presented by a Freyd category and a set of
/// distinguished morphisms containing the `J`-image.
pub struct SubsetFreyd {
    pub fc: Arc<FreydCat>,
    pub distinguished: HashSet<BMor>,
    v: Arc<SetDuoidal>,
    homs: HashMap<(TypeObj, TypeObj), Obj>,
}

impl SubsetFreyd {
    pub fn new(fc: &FreydCat, extra: &[BMor]) -> SubsetFreyd {
        let mut distinguished: HashSet<BMor> = fc.j.values().cloned().collect();
        distinguished.extend(extra.iter().cloned());
        let mut homs = HashMap::new();
        for a in &fc.c.objects {
            for b in &fc.c.objects {
                let ms = fc.c.hom(a, b);
                let carrier = FinSet::new(ms.iter().map(|m| m.repr.clone()).collect()).expect("distinct morphisms");
                let x: Vec<Elem> = ms.iter().filter(|m| distinguished.contains(*m)).map(|m| m.repr.clone()).collect();
                homs.insert((a.clone(), b.clone()), subset_obj(&x, &carrier));
            }
        }
        SubsetFreyd { fc: Arc::new(fc.clone()), distinguished, v: Arc::new(subset_duoidal()), homs }
    }

    fn mor(a: &TypeObj, b: &TypeObj, x: &Elem) -> BMor {
        BMor { src: a.clone(), tgt: b.clone(), repr: x.clone() }
    }
}

/// The free functor on objects: distinguished morphisms are the `J`-image.
pub fn to_subset_freyd(fc: &FreydCat) -> SubsetFreyd {
    SubsetFreyd::new(fc, &[])
}

impl VFreyd for SubsetFreyd {
    fn name(&self) -> String {
        let extra = self.distinguished.len() - self.fc.j.values().collect::<HashSet<_>>().len();
        if extra == 0 {
            format!("F({})", self.fc.name)
        } else {
            format!("F({}) + {extra} distinguished", self.fc.name)
        }
    }

    fn v(&self) -> Arc<dyn Duoidal> {
        self.v.clone()
    }

    fn base(&self) -> Arc<dyn MonBase> {
        self.fc.m.clone()
    }

    fn hom(&self, a: &TypeObj, b: &TypeObj) -> Obj {
        self.homs.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(|| subset_obj(&[], &FinSet::empty()))
    }

    fn hom_map(&self, f: &BMor, g: &BMor) -> Mor {
        let fc = self.fc.clone();
        let (a, b) = (f.tgt.clone(), g.src.clone());
        let tgt = self.hom(&f.src, &g.tgt);
        let (jf, jg) = (fc.j_of(f).cloned(), fc.j_of(g).cloned());
        let t2 = tgt.clone();
        Mor::new(self.hom(&a, &b), tgt, format!("C(J{f:?}, J{g:?})"), move |x| {
            let h = SubsetFreyd::mor(&a, &b, x);
            let out = jf.as_ref().zip(jg.as_ref()).and_then(|(jf, jg)| fc.c.then(jf, &h).and_then(|fh| fc.c.then(fh, jg)));
            out.map(|m| m.repr.clone()).unwrap_or_else(|| stray(x, &t2))
        })
    }

    fn idt(&self, a: &TypeObj) -> Mor {
        let id = self.fc.c.id(a).map(|m| m.repr.clone()).unwrap_or_else(Elem::star);
        Mor::new(self.v.seq_unit(), self.hom(a, a), format!("idt[{a}]"), move |_| id.clone())
    }

    fn seq(&self, a: &TypeObj, b: &TypeObj, c: &TypeObj) -> Mor {
        let src = self.v.seq(&self.hom(a, b), &self.hom(b, c));
        let tgt = self.hom(a, c);
        let (fc, a, b, c2, t2) = (self.fc.clone(), a.clone(), b.clone(), c.clone(), tgt.clone());
        Mor::new(src, tgt, format!("seq[{a},{b},{c}]"), move |x| {
            let (f, g) = (SubsetFreyd::mor(&a, &b, x.left()), SubsetFreyd::mor(&b, &c2, x.right()));
            fc.c.then(&f, &g).map(|m| m.repr.clone()).unwrap_or_else(|| stray(x, &t2))
        })
    }

    fn zero(&self) -> Mor {
        let e = TypeObj::unit();
        let id = self.fc.c.id(&e).map(|m| m.repr.clone()).unwrap_or_else(Elem::star);
        Mor::new(self.v.par_unit(), self.hom(&e, &e), "zero", move |_| id.clone())
    }

    /// `(f₁, f₂) ↦ (f₁ ⋉ a₂) then (b₁ ⋊ f₂)`
    fn par(&self, a1: &TypeObj, b1: &TypeObj, a2: &TypeObj, b2: &TypeObj) -> Option<Mor> {
        let c = &self.fc.c;
        let (s, _, t) = (c.tensor(a1, a2)?, c.tensor(b1, a2)?, c.tensor(b1, b2)?);
        let src = self.v.par(&self.hom(a1, b1), &self.hom(a2, b2));
        let tgt = self.hom(&s, &t);
        let (fc, t2) = (self.fc.clone(), tgt.clone());
        let (a1, b1, a2, b2) = (a1.clone(), b1.clone(), a2.clone(), b2.clone());
        Some(Mor::new(src, tgt, format!("par[{a1},{b1},{a2},{b2}]"), move |x| {
            let (f, g) = (SubsetFreyd::mor(&a1, &b1, x.left()), SubsetFreyd::mor(&a2, &b2, x.right()));
            let out = fc.c.lt(&f, &a2).zip(fc.c.rt(&b1, &g)).and_then(|(p, q)| fc.c.then(p, q));
            out.map(|m| m.repr.clone()).unwrap_or_else(|| stray(x, &t2))
        }))
    }

    fn type_probes(&self) -> Vec<TypeObj> {
        self.fc.c.objects.clone()
    }
}

#[derive(Clone, Debug)]
pub struct UCfg {
    /// Largest hom carrier tabulated.
    pub hom_budget: u128,
    /// Largest base hom tabulated.
    pub base_limit: usize,
}

impl Default for UCfg {
    fn default() -> Self {
        UCfg { hom_budget: 4096, base_limit: 4096 }
    }
}

fn require_subset(c: &dyn VFreyd) -> Result<(), FreydError> {
    let v = c.v();
    if v.name() == subset_duoidal().name() {
        Ok(())
    } else {
        Err(FreydError::NotSubset(format!("{} (over {})", c.name(), v.name())))
    }
}

/// The forgetful functor on objects: homsets are the full carriers, and
/// `J(f) = C(id, f)(idt(⋆))`.
pub fn from_subset_freyd(c: &dyn VFreyd, cfg: &UCfg) -> Result<FreydCat, FreydError> {
    require_subset(c)?;
    let objects = c.type_probes();
    let m = tabulate_base(&*c.base(), &objects, cfg.base_limit)?;
    let star = c.v().seq_unit().point();
    let cat = FinCat::from_fns(
        format!("U({})", c.name()),
        objects.clone(),
        |a, b| {
            let els = c.hom(a, b).elements(cfg.hom_budget).ok_or_else(|| FreydError::TooLarge {
                a: a.to_string(),
                b: b.to_string(),
                limit: cfg.hom_budget as usize,
            })?;
            Ok(els.iter().map(|x| SubsetFreyd::mor(a, b, x)).collect())
        },
        |a| SubsetFreyd::mor(a, a, &c.idt(a).apply(&star)),
        |f, g| Some(SubsetFreyd::mor(&f.src, &g.tgt, &c.seq(&f.src, &f.tgt, &g.tgt).apply(&Elem::pair(f.repr.clone(), g.repr.clone())))),
        |f, x| {
            let id = c.idt(x).apply(&star);
            let p = c.par(&f.src, &f.tgt, x, x)?;
            Some(SubsetFreyd::mor(&f.src.tensor(x), &f.tgt.tensor(x), &p.apply(&Elem::pair(f.repr.clone(), id))))
        },
        |x, f| {
            let id = c.idt(x).apply(&star);
            let p = c.par(x, x, &f.src, &f.tgt)?;
            Some(SubsetFreyd::mor(&x.tensor(&f.src), &x.tensor(&f.tgt), &p.apply(&Elem::pair(id, f.repr.clone()))))
        },
    )?;
    let mut j = HashMap::new();
    for f in m.morphisms() {
        let id_a = m.id(&f.src).expect("identity").clone();
        let x = c.hom_map(&id_a, f).apply(&c.idt(&f.src).apply(&star));
        j.insert(f.clone(), SubsetFreyd::mor(&f.src, &f.tgt, &x));
    }
    Ok(FreydCat { name: format!("U({})", c.name()), m: Arc::new(m), c: Arc::new(cat), j })
}

/// The counit component `FU(C) → C`: identity on `M` and on every carrier.
pub fn counit(c: Arc<dyn VFreyd>, fu: &SubsetFreyd) -> VFreydMor {
    let fu_homs = fu.homs.clone();
    vfreyd_mor_over_identity(
        &format!("ε[{}]", c.name()),
        c.base(),
        Arc::new(move |a, b| {
            let src = fu_homs.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(|| subset_obj(&[], &FinSet::empty()));
            Mor::new(src, c.hom(a, b), format!("ε[{a},{b}]"), |x| x.clone())
        }),
    )
}

/// The test for invertibility of the counit: every distinguished morphism
/// of `C(a, b)` is `C(id, f)(idt(⋆))` for some base morphism `f`. Returns a
/// distinguished morphism outside that image when there is one.
pub fn coreflection_witness(c: &dyn VFreyd, cfg: &UCfg) -> Result<Option<String>, FreydError> {
    require_subset(c)?;
    let base = c.base();
    let star = c.v().seq_unit().point();
    for a in c.type_probes() {
        for b in c.type_probes() {
            let h = c.hom(&a, &b);
            let els = h.elements(cfg.hom_budget).ok_or_else(|| FreydError::TooLarge { a: a.to_string(), b: b.to_string(), limit: cfg.hom_budget as usize })?;
            let ms = base.homs(&a, &b, cfg.base_limit, 0);
            let idt = c.idt(&a).apply(&star);
            let image: HashSet<Elem> = ms.iter().map(|f| c.hom_map(&base.id(&a), f).apply(&idt)).collect();
            if let Some(x) = els.iter().find(|x| h.grade_of(x) == Some(IN) && !image.contains(*x)) {
                return Ok(Some(format!("{x} ∈ C({a}, {b}) is distinguished but not of the form C(id, f)(idt(⋆))")));
            }
        }
    }
    Ok(None)
}

/// Whether the identity carrier maps `C(a, b) → FU(C)(a, b)` are Subset
/// morphisms, i.e. whether the counit has an inverse.
pub fn counit_inverse_valid(c: &dyn VFreyd, fu: &SubsetFreyd, probe: &ProbeCfg) -> Result<(), String> {
    let v = subset_duoidal();
    let mut rng = rng_for(probe.seed, "counit inverse");
    for a in c.type_probes() {
        for b in c.type_probes() {
            let inv = Mor::new(c.hom(&a, &b), fu.hom(&a, &b), format!("ε⁻¹[{a},{b}]"), |x| x.clone());
            validate(&inv, &|s, t| v.grade_ok(s, t), probe, &mut rng)?;
        }
    }
    Ok(())
}

/// Elementwise comparison of two Subset-Freyd categories on the given
/// types: carriers with their distinguished parts, and every structure map.
pub fn subset_freyd_diff(x: &dyn VFreyd, y: &dyn VFreyd, types: &[TypeObj], probe: &ProbeCfg) -> Option<String> {
    let mut rng = rng_for(probe.seed, "subset freyd diff");
    let same = |l: &Mor, r: &Mor, rng: &mut rand_chacha::ChaCha8Rng| -> Option<String> {
        let (xs, _) = l.fn_dom().probe(probe.budget, rng);
        xs.iter().find(|e| l.apply(e) != r.apply(e)).map(|e| format!("{} and {} differ at {e}", l.name, r.name))
    };
    let graded = |o: &Obj| o.elements(probe.budget).map(|es| es.iter().map(|e| (e.clone(), o.grade_of(e))).collect::<Vec<_>>());
    for a in types {
        for b in types {
            let (hx, hy) = (x.hom(a, b), y.hom(a, b));
            if graded(&hx) != graded(&hy) {
                return Some(format!("C({a}, {b}) differs"));
            }
            if let Some(d) = same(&x.idt(a), &y.idt(a), &mut rng) {
                return Some(d);
            }
            for c in types {
                if let Some(d) = same(&x.seq(a, b, c), &y.seq(a, b, c), &mut rng) {
                    return Some(d);
                }
            }
            for a2 in types {
                for b2 in types {
                    match (x.par(a, b, a2, b2), y.par(a, b, a2, b2)) {
                        (Some(p), Some(q)) => {
                            if let Some(d) = same(&p, &q, &mut rng) {
                                return Some(d);
                            }
                        }
                        (None, None) => {}
                        _ => return Some(format!("par[{a},{b},{a2},{b2}] defined on one side only")),
                    }
                    for f in x.base().homs(a2, a, 16, probe.seed) {
                        for g in x.base().homs(b, b2, 16, probe.seed) {
                            if let Some(d) = same(&x.hom_map(&f, &g), &y.hom_map(&f, &g), &mut rng) {
                                return Some(d);
                            }
                        }
                    }
                }
            }
        }
    }
    if let Some(d) = same(&x.zero(), &y.zero(), &mut rng) {
        return Some(d);
    }
    None
}

#[derive(Clone, Debug, Default)]
pub struct AdjCfg {
    pub vf: VfCfg,
    pub u: UCfg,
}

/// Unit, counit, zig-zags and the coreflection criterion on the probes.
/// `expect_coreflective[i]` says whether `subs[i]` should satisfy it.
pub fn check_adjunction(freyds: &[FreydCat], subs: &[Arc<SubsetFreyd>], cfg: &AdjCfg) -> LawReport {
    let mut r = LawReport::new("Freyd ⊣ Subset-Freyd");
    let probe = &cfg.vf.law.probe;
    for p in freyds {
        let fp = to_subset_freyd(p);
        match from_subset_freyd(&fp, &cfg.u) {
            Ok(ufp) => r.check("unit-identity", &p.name, ufp.diff(p).map_or(Ok(1), Err)),
            Err(e) => r.fail("unit-identity", &p.name, e.to_string()),
        }
        match from_subset_freyd(&fp, &cfg.u).map(|u| to_subset_freyd(&u)) {
            Ok(fufp) => {
                let types = p.c.objects.clone();
                r.check("zigzag-free", &p.name, subset_freyd_diff(&fufp, &fp, &types, probe).map_or(Ok(1), Err));
                r.check("criterion-on-free-images", &p.name, match coreflection_witness(&fp, &cfg.u) {
                    Ok(None) => Ok(1),
                    Ok(Some(w)) => Err(w),
                    Err(e) => Err(e.to_string()),
                });
            }
            Err(e) => r.fail("zigzag-free", &p.name, e.to_string()),
        }
    }
    for c in subs {
        let name = c.name();
        let u = match from_subset_freyd(&**c, &cfg.u) {
            Ok(u) => u,
            Err(e) => {
                r.fail("counit-valid", &name, e.to_string());
                continue;
            }
        };
        let fu = to_subset_freyd(&u);
        let types = c.type_probes();
        let eps = counit(c.clone(), &fu);
        let rep = check_vfreyd_morphism(&eps, &fu, &**c, &types, &cfg.vf);
        r.check("counit-valid", &name, if rep.passed() { Ok(rep.total_instances()) } else { Err(format!("fails {:?}", rep.failing_laws())) });
        let back = from_subset_freyd(&fu, &cfg.u).map(|ufu| ufu.diff(&u));
        r.check("zigzag-forgetful", &name, match back {
            Ok(None) => {
                let mut bad = None;
                for a in &types {
                    for b in &types {
                        let m = (eps.f1)(a, b);
                        if let Some(x) = u.c.hom(a, b).iter().find(|x| m.apply(&x.repr) != x.repr) {
                            bad.get_or_insert(format!("U(ε) moves {x:?}"));
                        }
                    }
                }
                bad.map_or(Ok(1), Err)
            }
            Ok(Some(d)) => Err(d),
            Err(e) => Err(e.to_string()),
        });
        let mut central = Ok(0);
        for d in u.c.morphisms() {
            if c.distinguished.contains(d) {
                if let Err(w) = u.c.is_central(d) {
                    central = Err(format!("distinguished {d:?} is not central: {w}"));
                    break;
                }
                central = central.map(|n| n + 1);
            }
        }
        r.check("distinguished-central", &name, central);
        let witness = coreflection_witness(&**c, &cfg.u);
        let inverse = counit_inverse_valid(&**c, &fu, probe);
        r.check("criterion-agrees", &name, match witness {
            Ok(w) if w.is_none() == inverse.is_ok() => Ok(1),
            Ok(w) => Err(format!("criterion says {w:?}, counit inverse check says {inverse:?}")),
            Err(e) => Err(e.to_string()),
        });
        r.note(format!(
            "{name}: counit {}",
            if inverse.is_ok() { "invertible".to_string() } else { format!("not invertible ({})", inverse.unwrap_err()) }
        ));
    }
    r
}

#[derive(Debug, Deserialize)]
struct JsonMor {
    name: String,
    src: String,
    tgt: String,
}

#[derive(Debug, Deserialize)]
struct JsonCat {
    morphisms: Vec<JsonMor>,
    ids: BTreeMap<String, String>,
    /// `[f, g, f then g]`
    comp: Vec<[String; 3]>,
    /// `[f, x, f ⋉ x]`
    #[serde(default)]
    ltens: Vec<[String; 3]>,
    /// `[x, f, x ⋊ f]`
    #[serde(default)]
    rtens: Vec<[String; 3]>,
}

#[derive(Debug, Deserialize)]
struct JsonFreyd {
    name: String,
    objects: Vec<String>,
    m: JsonCat,
    c: JsonCat,
    j: BTreeMap<String, String>,
    #[serde(default)]
    distinguished: Vec<String>,
}

fn load_cat(name: &str, objects: &[TypeObj], t: &JsonCat) -> Result<FinCat, FreydError> {
    let err = |s: String| FreydError::Table(format!("{name}: {s}"));
    let mut by_name: HashMap<&str, BMor> = HashMap::new();
    let mut homs: HashMap<(TypeObj, TypeObj), Vec<BMor>> = objects.iter().flat_map(|a| objects.iter().map(move |b| ((a.clone(), b.clone()), Vec::new()))).collect();
    for m in &t.morphisms {
        let (a, b) = (TypeObj::parse(&m.src), TypeObj::parse(&m.tgt));
        let mor = BMor { src: a.clone(), tgt: b.clone(), repr: Elem::atom(&m.name) };
        homs.get_mut(&(a, b)).ok_or_else(|| err(format!("{} has an undeclared object", m.name)))?.push(mor.clone());
        if by_name.insert(&m.name, mor).is_some() {
            return Err(err(format!("duplicate morphism {}", m.name)));
        }
    }
    let get = |n: &str| by_name.get(n).cloned().ok_or_else(|| err(format!("unknown morphism {n}")));
    let mut c = FinCat { name: name.into(), objects: objects.to_vec(), homs, ids: HashMap::new(), comp: HashMap::new(), ltens: HashMap::new(), rtens: HashMap::new() };
    for (o, n) in &t.ids {
        c.ids.insert(TypeObj::parse(o), get(n)?);
    }
    for [f, g, h] in &t.comp {
        c.comp.insert((get(f)?, get(g)?), get(h)?);
    }
    for [f, x, h] in &t.ltens {
        c.ltens.insert((get(f)?, TypeObj::parse(x)), get(h)?);
    }
    for [x, f, h] in &t.rtens {
        c.rtens.insert((TypeObj::parse(x), get(f)?), get(h)?);
    }
    let unit = TypeObj::unit();
    if objects.contains(&unit) {
        for f in by_name.values() {
            c.ltens.entry((f.clone(), unit.clone())).or_insert_with(|| f.clone());
            c.rtens.entry((unit.clone(), f.clone())).or_insert_with(|| f.clone());
        }
    }
    Ok(c)
}

/// Loads a Freyd category from JSON tables. Whiskering by `e` defaults to
/// the identity. Returns the extra distinguished morphisms alongside.
pub fn load_freyd_json(src: &str) -> Result<(FreydCat, Vec<BMor>), FreydError> {
    let t: JsonFreyd = serde_json::from_str(src).map_err(|e| FreydError::Table(e.to_string()))?;
    let objects: Vec<TypeObj> = t.objects.iter().map(|s| TypeObj::parse(s)).collect();
    let m = load_cat("M", &objects, &t.m)?;
    let c = load_cat("C", &objects, &t.c)?;
    let find = |cat: &FinCat, n: &str| {
        cat.morphisms().into_iter().find(|f| f.repr == Elem::atom(n)).cloned().ok_or_else(|| FreydError::Table(format!("unknown morphism {n}")))
    };
    let mut j = HashMap::new();
    for (a, b) in &t.j {
        j.insert(find(&m, a)?, find(&c, b)?);
    }
    let extra = t.distinguished.iter().map(|n| find(&c, n)).collect::<Result<Vec<_>, _>>()?;
    Ok((FreydCat { name: t.name, m: Arc::new(m), c: Arc::new(c), j }, extra))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_monoids_are_monoids() {
        for w in [FinMonoid::trivial(), FinMonoid::z2(), FinMonoid::d4(), FinMonoid::left_zero()] {
            assert_eq!(w.check(), Ok(()), "{}", w.name);
        }
        assert_eq!(FinMonoid::d4().centre(), vec![0, 2]);
        assert_eq!(FinMonoid::left_zero().centre(), vec![0]);
    }
}
