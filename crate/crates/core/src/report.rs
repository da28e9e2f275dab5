//! Machine-readable verification records and their renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
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

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// One verified identity at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub stage: String,
    pub id: String,
    /// Short quote of the identity under test.
    pub anchor: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_ms: Option<f64>,
}

/// Records in stage order; `overall` is pass iff every record passes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub stages: Vec<String>,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub overall: Status,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    pub fn new(stages: Vec<String>, seed: u64, records: Vec<CheckRecord>) -> Self {
        let failed = records.iter().filter(|r| r.status == Status::Fail).count();
        VerificationReport {
            stages,
            seed,
            passed: records.len() - failed,
            failed,
            overall: Status::from_bool(failed == 0),
            records,
        }
    }

    pub fn is_pass(&self) -> bool {
        self.overall == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["stage", "id", "anchor", "params", "status", "residual", "witness", "wall_ms"])?;
        for r in &self.records {
            w.write_record([
                r.stage.as_str(),
                r.id.as_str(),
                r.anchor.as_str(),
                &params_string(&r.params),
                r.status.as_str(),
                &r.residual.map(|x| format!("{x:e}")).unwrap_or_default(),
                r.witness.as_deref().unwrap_or(""),
                &r.wall_ms.map(|x| format!("{x:.3}")).unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| crate::error::Error::Io {
            path: "<report>".into(),
            source: e.into_error(),
        })?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "**overall: {}** ({} passed, {} failed; seed {})\n",
            self.overall.as_str(),
            self.passed,
            self.failed,
            self.seed
        );
        s.push_str("| stage | check | params | status | residual | note |\n");
        s.push_str("|---|---|---|---|---|---|\n");
        for r in &self.records {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} |",
                r.stage,
                r.id,
                params_string(&r.params),
                r.status.as_str(),
                r.residual.map(|x| format!("{x:.2e}")).unwrap_or_default(),
                r.witness.as_deref().unwrap_or("").replace('|', "/"),
            );
        }
        s
    }
}

pub fn params_string(p: &BTreeMap<String, String>) -> String {
    p.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(status: Status) -> CheckRecord {
        CheckRecord {
            stage: "spaces".into(),
            id: "x".into(),
            anchor: "a".into(),
            params: BTreeMap::from([("alpha".to_string(), "2".to_string())]),
            status,
            residual: Some(1e-3),
            witness: None,
            wall_ms: None,
        }
    }

    #[test]
    fn overall_is_conjunction() {
        assert!(VerificationReport::new(vec![], 0, vec![rec(Status::Pass)]).is_pass());
        let r = VerificationReport::new(vec![], 0, vec![rec(Status::Pass), rec(Status::Fail)]);
        assert!(!r.is_pass());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn json_round_trip() {
        let r = VerificationReport::new(vec!["spaces".into()], 3, vec![rec(Status::Pass)]);
        let back: VerificationReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_csv().unwrap().lines().count() == 2);
        assert!(r.to_markdown().contains("| spaces | x | alpha=2 | PASS |"));
    }
}
