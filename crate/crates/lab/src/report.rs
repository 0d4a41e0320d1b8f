use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hardy_core::criteria::{CriterionVerdict, Tri};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{LabError, LabResult};

pub const TOOL_VERSION: &str = concat!("hardy-lab ", env!("CARGO_PKG_VERSION"));

/// One line of the verdict table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRow {
    #[serde(flatten)]
    pub verdict: CriterionVerdict,
    /// Producing routine, as a path into the core crate.
    pub module: String,
    pub params: String,
    /// Headline number for quantitative checks.
    pub measured: Option<f64>,
    /// Decision the experiment is meant to reach, if any.
    pub expected: Option<Tri>,
}

impl VerdictRow {
    pub fn name(&self) -> &str {
        &self.verdict.name
    }

    pub fn passed(&self) -> Tri {
        self.verdict.passed
    }

    /// Reached the expected decision, or none was expected.
    pub fn confirmed(&self) -> bool {
        self.expected.is_none_or(|e| e == self.verdict.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Every expected decision was reached.
    Confirmed,
    /// Some expected decision came out inconclusive, none contradicted.
    Inconclusive,
    /// Some verdict decided against its expectation.
    Contradicted,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Confirmed => 0,
            Outcome::Inconclusive => 2,
            Outcome::Contradicted => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub tool_version: String,
    pub outcome: Outcome,
    pub verdicts: Vec<VerdictRow>,
    pub files: Vec<PathBuf>,
    /// Resolved configuration, defaults included.
    pub config: ExperimentConfig,
}

impl Report {
    pub(crate) fn new(config: ExperimentConfig, verdicts: Vec<VerdictRow>, files: Vec<PathBuf>) -> Self {
        let outcome = if verdicts.iter().any(|v| v.expected.is_some() && v.verdict.passed != Tri::Inconclusive && !v.confirmed()) {
            Outcome::Contradicted
        } else if verdicts.iter().any(|v| !v.confirmed()) {
            Outcome::Inconclusive
        } else {
            Outcome::Confirmed
        };
        Self { experiment: config.experiment.clone(), tool_version: TOOL_VERSION.into(), outcome, verdicts, files, config }
    }

    pub fn verdict(&self, name: &str) -> Option<&VerdictRow> {
        self.verdicts.iter().find(|v| v.verdict.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    /// Plain-text table for the terminal and `report.txt`.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment: {}  ({})", self.experiment, self.tool_version);
        let w = self.verdicts.iter().map(|v| v.verdict.name.len()).max().unwrap_or(5).max(5);
        let m = self.verdicts.iter().map(|v| v.module.len()).max().unwrap_or(6).max(6);
        let _ = writeln!(s, "{:<w$}  {:<12}  {:<12}  {:<14}  {:<m$}  params", "check", "verdict", "expected", "measured", "module");
        for v in &self.verdicts {
            let expected = v.expected.map_or("-".to_string(), |e| e.to_string());
            let measured = v.measured.map_or("-".to_string(), |x| format!("{x:.6e}"));
            let flag = if v.confirmed() { "" } else { "  <<" };
            let _ = writeln!(
                s,
                "{:<w$}  {:<12}  {:<12}  {:<14}  {:<m$}  {}{}",
                v.verdict.name,
                v.verdict.passed.as_str(),
                expected,
                measured,
                v.module,
                v.params,
                flag
            );
        }
        let _ = writeln!(s, "outcome: {:?}", self.outcome);
        let _ = writeln!(s, "files:");
        for f in &self.files {
            let _ = writeln!(s, "  {}", f.display());
        }
        s
    }

    /// Writes `report.json`, `verdicts.json` and `report.txt` into `dir`.
    pub fn write(&mut self, dir: &Path) -> LabResult<()> {
        let verdicts: Vec<&CriterionVerdict> = self.verdicts.iter().map(|v| &v.verdict).collect();
        let vpath = dir.join("verdicts.json");
        write_file(&vpath, serde_json::to_string_pretty(&verdicts)?.as_bytes())?;
        self.files.push(vpath);
        for f in &self.files {
            let len = std::fs::metadata(f).map_err(|e| LabError::io(f, e))?.len();
            if len == 0 {
                return Err(LabError::Validation(format!("output {} is empty", f.display())));
            }
        }
        write_file(&dir.join("report.json"), serde_json::to_string_pretty(&*self)?.as_bytes())?;
        write_file(&dir.join("report.txt"), self.table().as_bytes())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> LabResult<()> {
    std::fs::write(path, bytes).map_err(|e| LabError::io(path, e))
}
