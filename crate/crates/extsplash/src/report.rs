//! Serialized reports. JSON and CSV carry the same records; the CSV is one
//! row per datum and reads back to the identical records.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use extsplash_core::verify::{CheckError, CheckId, CheckReport};

pub const SCHEMA_VERSION: u32 = 1;

/// Counters in insertion order, serialized as a JSON object.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counts(pub Vec<(String, u64)>);

impl Serialize for Counts {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Counts {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Counts;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a map of counters")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> Result<Counts, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = a.next_entry::<String, u64>()? {
                    out.push((k, v));
                }
                Ok(Counts(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOut {
    pub assertion: String,
    pub detail: String,
}

/// One check outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub check: String,
    pub q: u32,
    pub field: String,
    /// `pass`, `fail` or `budget_exceeded`.
    pub verdict: String,
    pub conjecture: bool,
    pub scope: String,
    pub counts: Counts,
    pub witnesses: Vec<WitnessOut>,
    pub seed: u64,
    pub budget: u64,
    pub wall_ms: u64,
    pub schema_version: u32,
}

impl Entry {
    pub fn from_report(r: &CheckReport, wall_ms: u64) -> Entry {
        Entry {
            check: r.check.as_str().to_string(),
            q: r.q,
            field: r.field.clone(),
            verdict: r.verdict.as_str().to_string(),
            conjecture: r.conjecture,
            scope: r.scope.clone(),
            counts: Counts(r.counts.clone()),
            witnesses: r.witnesses.iter().map(|w| WitnessOut { assertion: w.assertion.clone(), detail: w.detail.clone() }).collect(),
            seed: r.seed,
            budget: r.budget,
            wall_ms,
            schema_version: SCHEMA_VERSION,
        }
    }

    /// An entry for a check stopped by the budget.
    pub fn budget_exceeded(id: CheckId, q: u32, field: &str, needed: u64, seed: u64, budget: u64, wall_ms: u64) -> Entry {
        Entry {
            check: id.as_str().to_string(),
            q,
            field: field.to_string(),
            verdict: "budget_exceeded".into(),
            conjecture: id.is_conjecture(),
            scope: id.scope(q).to_string(),
            counts: Counts(vec![("needed".into(), needed)]),
            witnesses: vec![WitnessOut {
                assertion: "budget".into(),
                detail: CheckError::BudgetExceeded { check: id, needed, budget }.to_string(),
            }],
            seed,
            budget,
            wall_ms,
            schema_version: SCHEMA_VERSION,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub entries: Vec<Entry>,
}

impl VerifyReport {
    pub fn new(entries: Vec<Entry>) -> VerifyReport {
        VerifyReport { schema_version: SCHEMA_VERSION, entries }
    }

    /// Every non-conjecture entry passed.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().filter(|e| !e.conjecture).all(Entry::passed)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<VerifyReport> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        for e in &self.entries {
            let head = [
                e.schema_version.to_string(),
                e.check.clone(),
                e.q.to_string(),
                e.field.clone(),
                e.verdict.clone(),
                e.conjecture.to_string(),
                e.scope.clone(),
                e.seed.to_string(),
                e.budget.to_string(),
                e.wall_ms.to_string(),
            ];
            let row = |kind: &str, key: &str, value: &str| {
                let mut r: Vec<String> = head.to_vec();
                r.extend([kind.to_string(), key.to_string(), value.to_string()]);
                r
            };
            w.write_record(row("entry", "", ""))?;
            for (k, v) in &e.counts.0 {
                w.write_record(row("count", k, &v.to_string()))?;
            }
            for x in &e.witnesses {
                w.write_record(row("witness", &x.assertion, &x.detail))?;
            }
        }
        Ok(String::from_utf8(w.into_inner().context("flushing csv")?)?)
    }

    pub fn from_csv(text: &str) -> Result<VerifyReport> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut entries: Vec<Entry> = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != CSV_HEADER.len() {
                bail!("csv row has {} fields", rec.len());
            }
            let g = |i: usize| rec[i].to_string();
            match &rec[10] {
                "entry" => entries.push(Entry {
                    schema_version: g(0).parse()?,
                    check: g(1),
                    q: g(2).parse()?,
                    field: g(3),
                    verdict: g(4),
                    conjecture: g(5).parse()?,
                    scope: g(6),
                    seed: g(7).parse()?,
                    budget: g(8).parse()?,
                    wall_ms: g(9).parse()?,
                    counts: Counts::default(),
                    witnesses: Vec::new(),
                }),
                kind => {
                    let e = entries.last_mut().context("csv datum before its entry row")?;
                    match kind {
                        "count" => e.counts.0.push((g(11), g(12).parse()?)),
                        "witness" => e.witnesses.push(WitnessOut { assertion: g(11), detail: g(12) }),
                        other => bail!("unknown csv row kind {:?}", other),
                    }
                }
            }
        }
        Ok(VerifyReport::new(entries))
    }

    pub fn to_pretty(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let tag = if e.conjecture { " (conjecture)" } else { "" };
            let _ = writeln!(s, "{:<7} q={} {}{}  [{} ms]", e.check, e.q, e.verdict, tag, e.wall_ms);
            let _ = writeln!(s, "  scope: {}", e.scope);
            for (k, v) in &e.counts.0 {
                let _ = writeln!(s, "  {:<48} {}", k, v);
            }
            for w in &e.witnesses {
                let _ = writeln!(s, "  witness {}: {}", w.assertion, w.detail);
            }
        }
        let fails = self.entries.iter().filter(|e| !e.passed()).count();
        let _ = writeln!(s, "{} checks, {} not passing", self.entries.len(), fails);
        s
    }
}

const CSV_HEADER: [&str; 13] =
    ["schema_version", "check", "q", "field", "verdict", "conjecture", "scope", "seed", "budget", "wall_ms", "kind", "key", "value"];

/// Output of `dump`, `construct` and `census`: named values in groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema_version: u32,
    pub command: String,
    pub q: u32,
    pub field: String,
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub group: String,
    pub name: String,
    pub value: String,
}

impl Document {
    pub fn new(command: &str, q: u32, field: &str) -> Document {
        Document { schema_version: SCHEMA_VERSION, command: command.into(), q, field: field.into(), items: Vec::new() }
    }

    pub fn push(&mut self, group: &str, name: impl Into<String>, value: impl Into<String>) {
        self.items.push(Item { group: group.into(), name: name.into(), value: value.into() });
    }

    /// The value of the first item with this group and name.
    pub fn get(&self, group: &str, name: &str) -> Option<&str> {
        self.items.iter().find(|i| i.group == group && i.name == name).map(|i| i.value.as_str())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["schema_version", "command", "q", "field", "group", "name", "value"])?;
        for i in &self.items {
            w.write_record([
                self.schema_version.to_string().as_str(),
                &self.command,
                &self.q.to_string(),
                &self.field,
                &i.group,
                &i.name,
                &i.value,
            ])?;
        }
        Ok(String::from_utf8(w.into_inner().context("flushing csv")?)?)
    }

    pub fn from_csv(text: &str) -> Result<Document> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut doc: Option<Document> = None;
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != 7 {
                bail!("csv row has {} fields", rec.len());
            }
            let d = doc.get_or_insert_with(|| Document {
                schema_version: rec[0].parse().unwrap_or(0),
                command: rec[1].to_string(),
                q: rec[2].parse().unwrap_or(0),
                field: rec[3].to_string(),
                items: Vec::new(),
            });
            d.push(&rec[4], &rec[5], &rec[6]);
        }
        doc.context("empty csv")
    }

    pub fn to_pretty(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} q={} field {}", self.command, self.q, self.field);
        let mut last = "";
        for i in &self.items {
            if i.group != last {
                let _ = writeln!(s, "[{}]", i.group);
                last = &i.group;
            }
            let _ = writeln!(s, "  {:<24} {}", i.name, i.value);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerifyReport {
        VerifyReport::new(vec![
            Entry {
                check: "C-2.3".into(),
                q: 2,
                field: "q=2;cubic=1,1,0;quad=1,1".into(),
                verdict: "fail".into(),
                conjecture: false,
                scope: "exhaustive, with \"quotes\", commas".into(),
                counts: Counts(vec![("b.pass".into(), 3), ("a.fail".into(), 1)]),
                witnesses: vec![WitnessOut { assertion: "a".into(), detail: "line 1\nline 2".into() }],
                seed: 7,
                budget: 100,
                wall_ms: 12,
                schema_version: SCHEMA_VERSION,
            },
            Entry {
                check: "C-3.11x".into(),
                q: 2,
                field: "f".into(),
                verdict: "pass".into(),
                conjecture: true,
                scope: String::new(),
                counts: Counts::default(),
                witnesses: Vec::new(),
                seed: 0,
                budget: 1,
                wall_ms: 0,
                schema_version: SCHEMA_VERSION,
            },
        ])
    }

    #[test]
    fn csv_and_json_agree() {
        let r = sample();
        assert_eq!(VerifyReport::from_csv(&r.to_csv().unwrap()).unwrap(), r);
        assert_eq!(VerifyReport::from_json(&r.to_json().unwrap()).unwrap(), r);
    }

    #[test]
    fn counts_keep_order() {
        let j = sample().to_json().unwrap();
        assert!(j.find("b.pass").unwrap() < j.find("a.fail").unwrap());
    }

    #[test]
    fn conjecture_entries_do_not_decide() {
        let mut r = sample();
        assert!(!r.all_pass());
        r.entries[0].verdict = "pass".into();
        r.entries[1].verdict = "fail".into();
        assert!(r.all_pass());
    }

    #[test]
    fn document_round_trip() {
        let mut d = Document::new("dump", 3, "q=3");
        d.push("points", "0", "1,0,0");
        d.push("points", "1", "0,1,0");
        assert_eq!(Document::from_csv(&d.to_csv().unwrap()).unwrap(), d);
        assert_eq!(d.get("points", "1"), Some("0,1,0"));
    }
}
