//! Zeros of L(s,f): sign changes on the critical line, argument-principle
//! box counts, off-line search, and the zero database.
//!
//! All of this works with ξ(s)·e^{π|t|/2} (see [`crate::evaluator::xi`]).
//! The scale factor is real and positive, so it changes neither signs on the
//! critical line nor arguments along a contour.

mod boxes;
mod build;
mod db;
mod scan;

use serde::{Deserialize, Serialize};

pub use boxes::{count_box, locate_offline, BoxCount};
pub use build::{build_zeroset, strip_for, BuildReport, ChunkReport};
pub use db::{load_zeros, merge_zeros, parse_zeros, save_zeros, zeros_csv};
pub use scan::{scan_grid, scan_line, scan_line_with_stats, z_function, ScanStats};

use crate::evaluator::EvalConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroKind {
    OnLine,
    OffLine,
    Trivial,
}

impl ZeroKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroKind::OnLine => "on-line",
            ZeroKind::OffLine => "off-line",
            ZeroKind::Trivial => "trivial",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "on-line" => Some(ZeroKind::OnLine),
            "off-line" => Some(ZeroKind::OffLine),
            "trivial" => Some(ZeroKind::Trivial),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroMethod {
    Bisection,
    Newton,
}

impl ZeroMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroMethod::Bisection => "bisection",
            ZeroMethod::Newton => "newton",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bisection" => Some(ZeroMethod::Bisection),
            "newton" => Some(ZeroMethod::Newton),
            _ => None,
        }
    }
}

/// A located zero ρ = β + iγ. `residual` is |L(ρ)|.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub beta: f64,
    pub gamma: f64,
    pub kind: ZeroKind,
    pub residual: f64,
    pub method: ZeroMethod,
    pub uncertainty: f64,
}

/// Zeros with 0 < γ < `t_max`, complete according to the argument principle.
/// Conjugates are implied and not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSet {
    pub form_id: String,
    pub k: u32,
    pub ell: u8,
    pub zeros: Vec<ZeroRecord>,
    pub t_max: f64,
    pub box_count: u64,
}

impl ZeroSet {
    pub fn empty(form_id: impl Into<String>, k: u32, ell: u8) -> Self {
        Self {
            form_id: form_id.into(),
            k,
            ell,
            zeros: Vec::new(),
            t_max: 0.0,
            box_count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Zeros with 0 < γ < t.
    pub fn below(&self, t: f64) -> impl Iterator<Item = &ZeroRecord> {
        self.zeros.iter().filter(move |z| z.gamma > 0.0 && z.gamma < t)
    }

    /// Number of zeros with 0 < γ < t.
    pub fn count_below(&self, t: f64) -> usize {
        self.below(t).count()
    }

    /// Copy restricted to 0 < γ < t (certification height unchanged).
    pub fn truncated(&self, t: f64) -> ZeroSet {
        ZeroSet {
            zeros: self.below(t).copied().collect(),
            ..self.clone()
        }
    }

    /// SHA-256 of the CSV body, hex encoded.
    pub fn checksum(&self) -> String {
        db::body_checksum(&db::body(self))
    }

    pub fn is_complete(&self) -> bool {
        self.zeros.len() as u64 == self.box_count
    }
}

/// Tolerances and knobs of the zero finder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroConfig {
    pub eval: EvalConfig,
    /// Accuracy target of ξ evaluations during refinement.
    pub refine_eps: f64,
    /// Required |L(ρ)| of every stored zero.
    pub residual_tol: f64,
    /// Required bracket width of on-line zeros.
    pub bisection_tol: f64,
    /// Minimum of |ξ|/scale allowed on a contour.
    pub boundary_min: f64,
    /// Outward shift of a box whose boundary comes too close to a zero.
    pub dilation: f64,
    pub max_retries: usize,
    /// Largest phase change accepted between neighbouring contour samples.
    pub max_phase_step: f64,
    /// Initial sample spacing on contours.
    pub contour_step: f64,
    /// Target height of the chunks used for box counting.
    pub chunk_height: f64,
    /// Divides the scan step π/(4 log(3+t)).
    pub scan_refine: f64,
    pub newton_tol: f64,
    pub newton_max_steps: usize,
    pub max_depth: usize,
    /// Distance from the critical line of the off-line search boxes.
    pub offline_gap: f64,
}

impl Default for ZeroConfig {
    fn default() -> Self {
        Self {
            eval: EvalConfig::default(),
            refine_eps: 1e-12,
            residual_tol: 1e-8,
            bisection_tol: 1e-9,
            boundary_min: 1e-6,
            dilation: 1e-4,
            max_retries: 5,
            max_phase_step: std::f64::consts::FRAC_PI_4,
            contour_step: 0.25,
            chunk_height: 10.0,
            scan_refine: 1.0,
            newton_tol: 1e-10,
            newton_max_steps: 50,
            max_depth: 12,
            offline_gap: 1e-3,
        }
    }
}
