use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;

pub const REPORT_VERSION: &str = concat!("thetakit ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    /// The statement the check tests.
    pub claim_label: String,
    pub params: serde_json::Value,
    pub status: Status,
    pub worst_margin: Option<f64>,
    pub violation_count: usize,
    pub runtime_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub version: String,
    /// "verification" or "evidence".
    pub kind: String,
    pub config_echo: serde_json::Value,
    pub checks: Vec<CheckRecord>,
    pub global_status: Status,
}

impl VerificationReport {
    pub fn new(kind: &str, config_echo: serde_json::Value, checks: Vec<CheckRecord>) -> Self {
        let global_status = Status::from_bool(checks.iter().all(|c| c.status == Status::Pass));
        VerificationReport { version: REPORT_VERSION.into(), kind: kind.into(), config_echo, checks, global_status }
    }

    pub fn passed(&self) -> bool {
        self.global_status == Status::Pass
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check_id,status,worst_margin,violation_count\n");
        for c in &self.checks {
            let margin = c.worst_margin.map(|m| format!("{m:.16e}")).unwrap_or_default();
            let status = if c.status == Status::Pass { "pass" } else { "fail" };
            let _ = writeln!(out, "{},{status},{margin},{}", c.check_id, c.violation_count);
        }
        out
    }

    /// Writes `<stem>.json` and/or `<stem>.csv` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str, json: bool, csv: bool) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        if json {
            let p = dir.join(format!("{stem}.json"));
            std::fs::write(&p, self.to_json()?)?;
            written.push(p);
        }
        if csv {
            let p = dir.join(format!("{stem}.csv"));
            std::fs::write(&p, self.to_csv())?;
            written.push(p);
        }
        Ok(written)
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.status == Status::Pass { "PASS" } else { "FAIL" };
            let margin = c.worst_margin.map(|m| format!(" worst_margin={m:.3e}")).unwrap_or_default();
            let _ = write!(out, "[{tag}] {} - {}{margin}", c.check_id, c.claim_label);
            if c.violation_count > 0 {
                let _ = write!(out, " violations={}", c.violation_count);
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, " ({d})");
            }
            out.push('\n');
        }
        out
    }
}

/// What a single check measured.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub worst_margin: Option<f64>,
    pub violations: usize,
    pub detail: Option<String>,
}

impl Outcome {
    pub fn margin(mut self, m: f64) -> Self {
        self.worst_margin = Some(self.worst_margin.map_or(m, |w| w.min(m)));
        self
    }

    /// Records one observation: `ok` counts it as satisfied, `margin` is
    /// folded into the worst margin.
    pub fn observe(&mut self, ok: bool, margin: f64, what: impl FnOnce() -> String) {
        self.worst_margin = Some(self.worst_margin.map_or(margin, |w| w.min(margin)));
        if !ok {
            self.violations += 1;
            if self.detail.is_none() {
                self.detail = Some(what());
            }
        }
    }

    pub fn merge(&mut self, other: Outcome) {
        if let Some(m) = other.worst_margin {
            self.worst_margin = Some(self.worst_margin.map_or(m, |w| w.min(m)));
        }
        self.violations += other.violations;
        if self.detail.is_none() {
            self.detail = other.detail;
        }
    }
}

/// Runs `body` and turns its outcome, or its error, into a record.
pub fn run_check(
    id: &str,
    claim: &str,
    params: serde_json::Value,
    timings: bool,
    body: impl FnOnce() -> Result<Outcome>,
) -> CheckRecord {
    let start = Instant::now();
    let result = body();
    let runtime_ms = timings.then(|| start.elapsed().as_millis() as u64);
    let (status, worst_margin, violation_count, detail) = match result {
        Ok(o) => (Status::from_bool(o.violations == 0), o.worst_margin, o.violations, o.detail),
        Err(e) => (Status::Fail, None, 1, Some(e.to_string())),
    };
    CheckRecord {
        check_id: id.into(),
        claim_label: claim.into(),
        params,
        status,
        worst_margin: worst_margin.filter(|m| m.is_finite()),
        violation_count,
        runtime_ms,
        detail,
    }
}
