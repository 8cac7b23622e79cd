use std::hash::Hasher;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};

/// One evaluated system size of a scan.
///
/// Outputs are `None` when the evaluation failed; `error` then holds the reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub model: String,
    pub t_l: Option<f64>,
    pub t_r: Option<f64>,
    pub delta: f64,
    pub length: usize,
    /// Removed cells `[cut_lo, cut_hi]`; both `None` for an empty cut.
    pub cut_lo: Option<usize>,
    pub cut_hi: Option<usize>,
    pub source: String,
    /// Filling rule that decided the occupied set (dense path only).
    pub fermi_rule: Option<String>,
    pub s: Option<f64>,
    pub s2: Option<f64>,
    pub gap: Option<f64>,
    pub min_r: Option<f64>,
    pub im_residual: Option<f64>,
    /// Smallest and largest `Re p` of the entanglement spectrum.
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub l_c_pred: Option<f64>,
    pub error: Option<String>,
    pub warning: Option<String>,
    pub tag: String,
}

impl ScanRecord {
    pub fn parity(&self) -> &'static str {
        if self.length % 2 == 0 {
            "even"
        } else {
            "odd"
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Hex FNV-1a digest of the inputs that determine a record.
pub fn determinism_tag(parts: &[String]) -> String {
    let mut h = FnvHasher::default();
    for p in parts {
        h.write(p.as_bytes());
        h.write_u8(0x1f);
    }
    format!("{:016x}", h.finish())
}
