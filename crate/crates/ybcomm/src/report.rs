use std::collections::BTreeMap;

use serde::Serialize;

pub const REPORT_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Instance {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Instance {
    pub fn rank(rank: usize) -> Self {
        Instance { rank: Some(rank), ..Default::default() }
    }

    pub fn sizes(mut self, sizes: &[usize]) -> Self {
        self.sizes = sizes.to_vec();
        self
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub index: usize,
    pub equal: bool,
    pub replaced: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub anchor: String,
    pub flavor: Option<String>,
    pub instance: Instance,
    pub seed: u64,
    pub samples: usize,
    pub status: Status,
    pub records: Vec<SampleRecord>,
    pub counterexample: Option<BTreeMap<String, String>>,
    pub note: Option<String>,
    pub duration_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// The top-level JSON document.
#[derive(Clone, Debug, Serialize)]
pub struct ReportFile {
    pub report_version: &'static str,
    pub reports: Vec<VerificationReport>,
}

impl ReportFile {
    pub fn new(reports: Vec<VerificationReport>) -> Self {
        ReportFile { report_version: REPORT_VERSION, reports }
    }
}
