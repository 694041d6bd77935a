//! Structured check outcomes and their JSON / markdown renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::eja::{Element, Family};

/// Wall-clock timer for `runtime_ms`. Reads nothing on wasm32, where the
/// standard clock is unavailable.
#[derive(Clone, Copy, Debug)]
pub struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    pub fn start() -> Stopwatch {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    pub fn elapsed_ms(&self) -> Option<u64> {
        #[cfg(not(target_arch = "wasm32"))]
        return Some(self.start.elapsed().as_millis() as u64);
        #[cfg(target_arch = "wasm32")]
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// An element serialized with its algebra descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub algebra: Option<Family>,
    pub coords: Vec<f64>,
}

impl Witness {
    pub fn element(label: impl Into<String>, x: &Element) -> Witness {
        Witness {
            label: label.into(),
            algebra: Some(x.algebra().family().clone()),
            coords: x.coords().to_vec(),
        }
    }

    pub fn values(label: impl Into<String>, coords: Vec<f64>) -> Witness {
        Witness {
            label: label.into(),
            algebra: None,
            coords,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub theory: String,
    pub local_equivalence: bool,
    pub es_purification: bool,
}

/// One candidate of the composite-system exclusion argument.
///
/// Serialized with a rank-specific key, e.g. `"rank9_dims": [45, 81, 153]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationRecord {
    pub n_a: usize,
    pub candidate: String,
    pub composite_rank: usize,
    pub composite_dim: usize,
    /// Dimensions of the simple algebras of rank `composite_rank`.
    pub rank_dims: Vec<usize>,
    pub excluded: bool,
    /// The simple family the composite is identified with when not excluded.
    pub composite_family: Option<String>,
}

impl Serialize for ClassificationRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = Map::new();
        m.insert("n_a".into(), self.n_a.into());
        m.insert("candidate".into(), self.candidate.clone().into());
        m.insert("composite_rank".into(), self.composite_rank.into());
        m.insert("composite_dim".into(), self.composite_dim.into());
        m.insert(
            format!("rank{}_dims", self.composite_rank),
            self.rank_dims.clone().into(),
        );
        m.insert("excluded".into(), self.excluded.into());
        m.insert(
            "composite_family".into(),
            self.composite_family.clone().map_or(Value::Null, Value::from),
        );
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClassificationRecord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = Map::<String, Value>::deserialize(d)?;
        let uint = |k: &str| {
            m.get(k)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| D::Error::missing_field("integer field"))
        };
        let composite_rank = uint("composite_rank")?;
        let dims_key = format!("rank{composite_rank}_dims");
        let rank_dims = m
            .get(&dims_key)
            .and_then(Value::as_array)
            .ok_or_else(|| D::Error::custom(format!("missing `{dims_key}`")))?
            .iter()
            .map(|v| v.as_u64().map(|x| x as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| D::Error::custom("non-integer dimension"))?;
        Ok(ClassificationRecord {
            n_a: uint("n_a")?,
            candidate: m
                .get("candidate")
                .and_then(Value::as_str)
                .ok_or_else(|| D::Error::missing_field("candidate"))?
                .to_string(),
            composite_rank,
            composite_dim: uint("composite_dim")?,
            rank_dims,
            excluded: m
                .get("excluded")
                .and_then(Value::as_bool)
                .ok_or_else(|| D::Error::missing_field("excluded"))?,
            composite_family: m
                .get("composite_family")
                .and_then(Value::as_str)
                .map(str::to_string),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub backend: Option<String>,
    pub levels: Vec<usize>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub samples: usize,
    /// Wall-clock time; `None` when timing is suppressed for byte-stable output.
    pub runtime_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<TableRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<ClassificationRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            backend: None,
            levels: Vec::new(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            tolerances: BTreeMap::new(),
            seed: None,
            samples: 0,
            runtime_ms: None,
            table: Vec::new(),
            records: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn with_tol(mut self, name: &str, tol: f64) -> CheckReport {
        self.tolerances.insert(name.to_string(), tol);
        self
    }

    /// Record a failure together with its witnesses.
    pub fn fail(&mut self, witnesses: impl IntoIterator<Item = Witness>) {
        self.verdict = Verdict::Fail;
        self.witnesses.extend(witnesses);
    }

    /// A failing report without a witness violates the report contract.
    pub fn is_well_formed(&self) -> bool {
        self.verdict == Verdict::Pass || !self.witnesses.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

pub fn emit_report(report: &CheckReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Markdown => render_markdown(report),
    }
}

pub fn parse_report(json: &str) -> serde_json::Result<CheckReport> {
    serde_json::from_str(json)
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "✓"
    } else {
        "✗"
    }
}

fn render_markdown(r: &CheckReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "## {}\n", r.check);
    if !r.table.is_empty() {
        out.push_str("| Theory | Local equivalence | ES purification |\n");
        out.push_str("|---|:---:|:---:|\n");
        for row in &r.table {
            let _ = writeln!(
                out,
                "| {} | {} | {} |",
                row.theory,
                mark(row.local_equivalence),
                mark(row.es_purification)
            );
        }
        out.push('\n');
    }
    if !r.records.is_empty() {
        out.push_str("| n_A | candidate | composite rank | composite dim | rank-r dims | excluded |\n");
        out.push_str("|---:|---|---:|---:|---|:---:|\n");
        for rec in &r.records {
            let dims: Vec<String> = rec.rank_dims.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {{{}}} | {} |",
                rec.n_a,
                rec.candidate,
                rec.composite_rank,
                rec.composite_dim,
                dims.join(", "),
                if rec.excluded { "yes" } else { "no" }
            );
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "- verdict: **{}**",
        if r.passed() { "pass" } else { "fail" }
    );
    if let Some(b) = &r.backend {
        let _ = writeln!(out, "- backend: {b}");
    }
    if !r.levels.is_empty() {
        let _ = writeln!(out, "- levels: {:?}", r.levels);
    }
    if let Some(seed) = r.seed {
        let _ = writeln!(out, "- seed: {seed}");
    }
    let _ = writeln!(out, "- samples: {}", r.samples);
    for (k, v) in &r.tolerances {
        let _ = writeln!(out, "- tolerance `{k}`: {v:e}");
    }
    if let Some(ms) = r.runtime_ms {
        let _ = writeln!(out, "- runtime: {ms} ms");
    }
    for n in &r.notes {
        let _ = writeln!(out, "- {n}");
    }
    if !r.witnesses.is_empty() {
        out.push_str("\n### Witnesses\n\n");
        for w in &r.witnesses {
            let alg = w.algebra.as_ref().map(|f| f.to_string()).unwrap_or_default();
            let _ = writeln!(out, "- `{}` {} {:?}", w.label, alg, w.coords);
        }
    }
    out
}
