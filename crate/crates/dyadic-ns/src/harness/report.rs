//! Suite reports: per-assertion pass/fail plus measured empirical constants,
//! serialized as JSON (and optionally CSV) for offline inspection.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked statement: an id, the mathematical anchor it realizes (or
/// "plumbing"), the measured values and the tolerance applied to them.
/// Recorded-only measurements carry no tolerance and always pass.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub measured: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Echo of the configuration a suite ran under.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub dim: usize,
    pub grid: usize,
    pub seed: u64,
    pub r: f64,
    pub sigma: f64,
    pub horizon: f64,
    pub steps: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: ConfigEcho,
    pub assertions: Vec<Assertion>,
    pub wall_time_s: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat CSV: one row per measured value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,assertion,anchor,status,index,value,tolerance\n");
        for a in &self.assertions {
            let status = match a.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
            };
            let tol = a
                .tolerance
                .map(|t| t.to_string())
                .unwrap_or_else(|| "".into());
            if a.measured.is_empty() {
                out.push_str(&format!(
                    "{},{},{},{},,,{}\n",
                    self.suite, a.id, a.anchor, status, tol
                ));
            }
            for (i, v) in a.measured.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    self.suite, a.id, a.anchor, status, i, v, tol
                ));
            }
        }
        out
    }
}

/// Incremental builder used by the suites.
pub struct ReportBuilder {
    suite: String,
    config: ConfigEcho,
    assertions: Vec<Assertion>,
    started: std::time::Instant,
}

impl ReportBuilder {
    pub fn new(suite: &str, config: ConfigEcho) -> Self {
        ReportBuilder {
            suite: suite.to_string(),
            config,
            assertions: Vec::new(),
            started: std::time::Instant::now(),
        }
    }

    /// Assert `ok`, attaching the measured values and the tolerance used.
    pub fn check(&mut self, id: &str, anchor: &str, ok: bool, measured: Vec<f64>, tol: f64) {
        self.assertions.push(Assertion {
            id: id.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            tolerance: Some(tol),
            note: None,
        });
    }

    pub fn check_note(
        &mut self,
        id: &str,
        anchor: &str,
        ok: bool,
        measured: Vec<f64>,
        tol: f64,
        note: &str,
    ) {
        self.assertions.push(Assertion {
            id: id.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            tolerance: Some(tol),
            note: Some(note.into()),
        });
    }

    /// Record a measured constant without asserting a threshold.
    pub fn record(&mut self, id: &str, anchor: &str, measured: Vec<f64>, note: &str) {
        self.assertions.push(Assertion {
            id: id.into(),
            anchor: anchor.into(),
            status: Status::Pass,
            measured,
            tolerance: None,
            note: Some(note.into()),
        });
    }

    pub fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.suite,
            config: self.config,
            assertions: self.assertions,
            wall_time_s: self.started.elapsed().as_secs_f64(),
        }
    }
}
