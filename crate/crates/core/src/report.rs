//! Law reports: per-family counts plus concrete failure records.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// Failure records kept per law family; the count keeps going past it.
const MAX_RECORDS_PER_LAW: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LawStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawRecord {
    pub law: String,
    pub instance: String,
    pub status: LawStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Family {
    pub instances: u64,
    pub elements: u64,
    pub failures: u64,
    /// False once any instance of this law was checked on a sample.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Default)]
pub struct LawReport {
    pub title: String,
    pub families: BTreeMap<String, Family>,
    pub failures: Vec<LawRecord>,
    pub notes: Vec<String>,
}

impl LawReport {
    pub fn new(title: impl Into<String>) -> LawReport {
        LawReport { title: title.into(), ..Default::default() }
    }

    fn family(&mut self, law: &str) -> &mut Family {
        self.families
            .entry(law.to_string())
            .or_insert_with(|| Family { exhaustive: true, ..Default::default() })
    }

    /// Records one passing instance that was checked on `elements` points.
    pub fn pass(&mut self, law: &str, elements: u64, exhaustive: bool) {
        let f = self.family(law);
        f.instances += 1;
        f.elements += elements;
        f.exhaustive &= exhaustive;
    }

    /// Records `instances` passing instances at once.
    pub fn pass_many(&mut self, law: &str, instances: u64, elements: u64, exhaustive: bool) {
        let f = self.family(law);
        f.instances += instances;
        f.elements += elements;
        f.exhaustive &= exhaustive;
    }

    pub fn fail(&mut self, law: &str, instance: impl Into<String>, counterexample: impl Into<String>) {
        let f = self.family(law);
        f.instances += 1;
        f.failures += 1;
        let n = f.failures;
        if n as usize <= MAX_RECORDS_PER_LAW {
            self.failures.push(LawRecord {
                law: law.to_string(),
                instance: instance.into(),
                status: LawStatus::Fail,
                counterexample: Some(counterexample.into()),
            });
        }
    }

    /// Records a whole check as one pass or fail.
    pub fn check(&mut self, law: &str, instance: impl Into<String>, outcome: Result<u64, String>) {
        match outcome {
            Ok(n) => self.pass(law, n, true),
            Err(w) => self.fail(law, instance, w),
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.families.values().all(|f| f.failures == 0)
    }

    pub fn total_failures(&self) -> u64 {
        self.families.values().map(|f| f.failures).sum()
    }

    pub fn total_instances(&self) -> u64 {
        self.families.values().map(|f| f.instances).sum()
    }

    /// Laws (by family name) with at least one failure.
    pub fn failing_laws(&self) -> Vec<String> {
        self.families.iter().filter(|(_, f)| f.failures > 0).map(|(k, _)| k.clone()).collect()
    }

    pub fn first_failure(&self, law_prefix: &str) -> Option<&LawRecord> {
        self.failures.iter().find(|r| r.law.starts_with(law_prefix))
    }

    pub fn merge(&mut self, other: LawReport) {
        for (k, f) in other.families {
            let mine = self.family(&k);
            mine.instances += f.instances;
            mine.elements += f.elements;
            mine.failures += f.failures;
            mine.exhaustive &= f.exhaustive;
        }
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }

    /// One record per failure plus one pass record per clean family.
    pub fn records(&self) -> Vec<LawRecord> {
        let mut out: Vec<LawRecord> = self
            .families
            .iter()
            .filter(|(_, f)| f.failures == 0)
            .map(|(k, f)| LawRecord {
                law: k.clone(),
                instance: format!(
                    "{} instances, {} elements, {}",
                    f.instances,
                    f.elements,
                    if f.exhaustive { "exhaustive" } else { "sampled" }
                ),
                status: LawStatus::Pass,
                counterexample: None,
            })
            .collect();
        out.extend(self.failures.iter().cloned());
        out
    }

    /// Line-delimited JSON records.
    pub fn to_jsonl(&self) -> String {
        self.records()
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.title)?;
        let w = self.families.keys().map(|k| k.len()).max().unwrap_or(4).max(4);
        writeln!(f, "{:<w$}  {:>9}  {:>11}  {:>8}  coverage", "law", "instances", "elements", "failures")?;
        for (k, fam) in &self.families {
            writeln!(
                f,
                "{:<w$}  {:>9}  {:>11}  {:>8}  {}",
                k,
                fam.instances,
                fam.elements,
                fam.failures,
                if fam.exhaustive { "exhaustive" } else { "sampled" }
            )?;
        }
        for r in &self.failures {
            writeln!(f, "FAIL {} at {}: {}", r.law, r.instance, r.counterexample.as_deref().unwrap_or(""))?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}
