//! Verification reports and their JSON, CSV and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraded::GradedDimVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Outcome of a check on an unproved statement; never a failure.
    ConjectureEvidence,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ConjectureEvidence => "conjecture-evidence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub theorem: String,
    pub instance: String,
    /// Homological or cohomological spot to graded dimensions.
    pub tables: BTreeMap<String, GradedDimVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<i64>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl Instance {
    pub fn new(theorem: &str, instance: impl Into<String>, verdict: Verdict) -> Self {
        Instance {
            theorem: theorem.into(),
            instance: instance.into(),
            tables: BTreeMap::new(),
            expected: None,
            verdict,
            detail: None,
            wall_time: None,
        }
    }

    pub fn with_tables<K: ToString>(mut self, tables: impl IntoIterator<Item = (K, GradedDimVector)>) -> Self {
        self.tables = tables.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        self
    }

    pub fn with_expected(mut self, expected: i64) -> Self {
        self.expected = Some(expected);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Instance for a computation that raised an error.
    pub fn from_error(theorem: &str, instance: impl Into<String>, err: &Error) -> Self {
        Instance::new(theorem, instance, Verdict::Fail).with_detail(format!("error: {err}"))
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// Runs `check`, recording its wall time on the produced instance.
pub fn timed(check: impl FnOnce() -> Instance) -> Instance {
    let start = Instant::now();
    let mut inst = check();
    inst.wall_time = Some(start.elapsed().as_secs_f64());
    inst
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub instances: Vec<Instance>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?} (json, csv, pretty)"))),
        }
    }
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport { suite: suite.into(), instances: Vec::new() }
    }

    pub fn push(&mut self, inst: Instance) {
        self.instances.push(inst);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.instances.extend(other.instances);
    }

    pub fn all_passed(&self) -> bool {
        self.instances.iter().all(Instance::passed)
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn strip_timings(&mut self) {
        for inst in &mut self.instances {
            inst.wall_time = None;
        }
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let count = |v| self.instances.iter().filter(|i| i.verdict == v).count();
        (count(Verdict::Pass), count(Verdict::Fail), count(Verdict::ConjectureEvidence))
    }

    pub fn emit(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Pretty => Ok(self.to_pretty()),
        }
    }

    /// Compact JSON with lexicographically sorted keys.
    pub fn to_json(&self) -> Result<String> {
        let value = serde_json::to_value(self).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = serde_json::to_string(&value).map_err(|e| Error::Parse(e.to_string()))?;
        out.push('\n');
        Ok(out)
    }

    /// One row per instance, spot and degree.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["suite", "instance", "theorem", "nu", "degree", "dim", "verdict"]).map_err(io)?;
        for inst in &self.instances {
            let base = [self.suite.as_str(), &inst.instance, &inst.theorem];
            let verdict = inst.verdict.as_str();
            let mut wrote = false;
            for (nu, table) in &inst.tables {
                for (degree, dim) in table.iter() {
                    let (degree, dim) = (degree.to_string(), dim_text(dim));
                    w.write_record(base.iter().copied().chain([nu.as_str(), &degree, &dim, verdict])).map_err(io)?;
                    wrote = true;
                }
            }
            if !wrote {
                w.write_record(base.iter().copied().chain(["", "", "", verdict])).map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_pretty(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite {}", self.suite);
        for inst in &self.instances {
            let _ = write!(s, "[{:<19}] {:<14} {}", inst.verdict.as_str(), inst.theorem, inst.instance);
            if let Some(e) = inst.expected {
                let _ = write!(s, "  (expected degree {e})");
            }
            let _ = writeln!(s);
            for (nu, table) in &inst.tables {
                let _ = writeln!(s, "      {nu}: {table}");
            }
            if let Some(d) = &inst.detail {
                let _ = writeln!(s, "      {d}");
            }
        }
        let (p, f, c) = self.counts();
        let _ = writeln!(s, "{p} pass, {f} fail, {c} conjecture-evidence");
        s
    }
}

fn dim_text(d: crate::multigraded::Dim) -> String {
    match d.finite() {
        Some(k) => k.to_string(),
        None => "infinite".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_json() {
        let r = VerificationReport::new("derham");
        assert_eq!(r.to_json().unwrap(), "{\"instances\":[],\"suite\":\"derham\"}\n");
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn csv_rows_per_degree() {
        let mut r = VerificationReport::new("derham");
        r.push(
            Instance::new("cor-derham", "N_3, n=3", Verdict::Pass)
                .with_tables([(3, GradedDimVector::finite(&[(-3, 1)]))])
                .with_expected(-3),
        );
        r.push(Instance::new("weyl-axioms", "tau", Verdict::Fail));
        let csv = r.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "suite,instance,theorem,nu,degree,dim,verdict");
        assert_eq!(lines[1], "derham,\"N_3, n=3\",cor-derham,3,-3,1,pass");
        assert_eq!(lines[2], "derham,tau,weyl-axioms,,,,fail");
        assert!(r.to_json().unwrap().contains("\"expected\":-3"));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn conjecture_evidence_never_fails() {
        let mut r = VerificationReport::new("ext");
        r.push(Instance::new("conj-ext", "E x E", Verdict::ConjectureEvidence));
        assert_eq!(r.exit_code(), 0);
    }
}
