//! Run reports: what a command saw, what it computed, and how it exited.
//!
//! Reports serialize to JSON and deserialize back losslessly, so they can
//! be archived and replayed in post-mortems. A report is emitted on failure
//! too, with the error in the payload.

use crate::ep::ClauseReport;
use crate::error::Result;
use crate::hermitian::HermitianReport;
use crate::matrix::CMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

/// SHA-256 digest of an input file, recorded for reproducibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub fn digest_file(path: &Path) -> Result<InputDigest> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: format!("{:x}", hasher.finalize()),
    })
}

/// Tolerances a command ran with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub verdict: f64,
    pub kernel: f64,
}

impl Tolerances {
    pub fn new(verdict: f64) -> Self {
        Tolerances {
            verdict,
            kernel: crate::KERNEL_TOL,
        }
    }
}

/// Summary of a corpus run: counts, the worst margin seen, and the failing
/// instance seeds (persisted for replay).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub mode: String,
    pub n: Option<usize>,
    pub count: usize,
    pub base_seed: u64,
    pub tol: f64,
    pub passed: usize,
    pub failed: usize,
    pub worst_residual: f64,
    pub failing_seeds: Vec<u64>,
}

/// Replay manifest for failing corpus instances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub mode: String,
    pub n: Option<usize>,
    pub tol: f64,
    pub seeds: Vec<u64>,
}

/// Command-specific outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportPayload {
    Pinv {
        matrix: CMatrix,
        residuals: [f64; 4],
    },
    WPinv {
        b: CMatrix,
        p: CMatrix,
        q: CMatrix,
        residuals: [f64; 4],
        route: String,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        cross_path_gap: Option<f64>,
    },
    Group {
        exists: bool,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        sharp: Option<CMatrix>,
        rank_a: usize,
        rank_a2: usize,
    },
    Ep {
        commutes: bool,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        battery: Option<ClauseReport>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        battery_note: Option<String>,
    },
    Hermitian {
        report: HermitianReport,
    },
    LiftCheck {
        holds: bool,
        lift_dim: usize,
    },
    BlockCheck {
        restriction: bool,
        quotient: bool,
        k: usize,
    },
    Corpus {
        summary: CorpusSummary,
    },
    Error {
        message: String,
    },
}

/// Full record of one command invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub tolerances: Tolerances,
    pub outputs: ReportPayload,
    pub exit_status: i32,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
