//! Assembling a complete zero set up to a given height.

use log::{debug, info};

use super::boxes::{count_box, locate_offline};
use super::scan::scan_line_with_stats;
use super::{ZeroConfig, ZeroKind, ZeroRecord, ZeroSet};
use crate::dirichlet::dominance_abscissa;
use crate::error::{Error, Result};
use crate::evaluator::FormDescriptor;

/// Extra height scanned beyond the target so chunk tops can be placed
/// between zeros.
const SCAN_MARGIN: f64 = 2.0;
/// Chunk edges keep at least this distance from on-line zeros when possible.
const EDGE_GAP: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct ChunkReport {
    pub t0: f64,
    pub t1: f64,
    pub box_count: u64,
    pub on_line: usize,
    pub off_line: usize,
    pub rescanned: bool,
    pub retries: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BuildReport {
    /// Zeros taken over from the prior set.
    pub reused: usize,
    pub new_zeros: usize,
    pub chunks: Vec<ChunkReport>,
    pub max_realness: f64,
    pub evaluations: usize,
    pub strip: (f64, f64),
}

/// Real-part range of the counting boxes. Zeros of ξ lie in w − B < σ < B
/// with B the dominance abscissa. If B ≤ k/2 + 5/4 the strip is the critical
/// line ±1, otherwise [w − B, B] with the left edge kept at or above 0.01.
pub fn strip_for(form: &FormDescriptor) -> Result<(f64, f64)> {
    let b = dominance_abscissa(&form.coeffs.normalize()?)?;
    let crit = form.critical_abscissa();
    if b <= form.k as f64 / 2.0 + 1.25 {
        Ok((crit - 1.0, crit + 1.0))
    } else {
        Ok(((form.weight() - b).max(0.01), b))
    }
}

/// A point near `target` lying midway between consecutive zeros of `gammas`
/// (sorted), or `target` itself if no zero is within [`EDGE_GAP`].
fn edge_near(target: f64, gammas: &[f64], at_least: f64) -> f64 {
    if gammas.iter().all(|g| (g - target).abs() >= EDGE_GAP) {
        return target;
    }
    let i = gammas.partition_point(|&g| g <= target);
    let mut cands = Vec::new();
    if i >= 1 && i < gammas.len() {
        cands.push(0.5 * (gammas[i - 1] + gammas[i]));
    }
    if i + 1 < gammas.len() {
        cands.push(0.5 * (gammas[i] + gammas[i + 1]));
    }
    cands
        .into_iter()
        .filter(|&c| c >= at_least)
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
        .unwrap_or(target)
}

/// All zeros of L(s) with 0 < γ < T, certified complete by box counts over
/// the strip of [`strip_for`]. If `prior` is given, its zeros are kept and
/// only the region above its certified height is processed.
pub fn build_zeroset(
    form: &FormDescriptor,
    t_target: f64,
    cfg: &ZeroConfig,
    prior: Option<&ZeroSet>,
) -> Result<(ZeroSet, BuildReport)> {
    if !(t_target >= 0.0) {
        return Err(Error::InvalidArgument(format!("height T = {t_target}")));
    }
    if let Some(p) = prior {
        if p.form_id != form.id || p.k != form.k || p.ell != form.ell {
            return Err(Error::InvalidArgument(format!(
                "prior zero set belongs to form={} k={} ell={}",
                p.form_id, p.k, p.ell
            )));
        }
    }
    let strip = strip_for(form)?;
    let mut report = BuildReport {
        strip,
        ..BuildReport::default()
    };
    let mut set = prior
        .cloned()
        .unwrap_or_else(|| ZeroSet::empty(form.id.clone(), form.k, form.ell));
    report.reused = set.len();
    if set.t_max >= t_target || t_target == 0.0 {
        return Ok((set, report));
    }
    let start = set.t_max;
    let (mut online, stats) = scan_line_with_stats(form, start, t_target + SCAN_MARGIN, cfg)?;
    report.evaluations += stats.evaluations;
    report.max_realness = stats.max_realness;
    let gammas: Vec<f64> = online.iter().map(|z| z.gamma).collect();
    let top = edge_near(t_target, &gammas, t_target);

    let crit = form.critical_abscissa();
    let mut bottom = start;
    let mut offline: Vec<ZeroRecord> = Vec::new();
    let mut box_total = 0u64;
    while bottom < top {
        let mut upper = bottom + cfg.chunk_height;
        if upper >= top - 0.5 * cfg.chunk_height {
            upper = top;
        } else {
            upper = edge_near(upper, &gammas, bottom + EDGE_GAP);
        }
        let bc = count_box(form, strip.0, strip.1, bottom, upper, cfg)?;
        let in_chunk = |z: &ZeroRecord| z.gamma > bc.t0 && z.gamma < bc.t1;
        let mut on_line = online.iter().filter(|z| in_chunk(z)).count();
        let mut rescanned = false;
        let mut off = Vec::new();
        if bc.count as usize > on_line {
            debug!("chunk [{}, {}]: box {} vs {on_line} on-line, rescanning", bc.t0, bc.t1, bc.count);
            let fine = ZeroConfig {
                scan_refine: cfg.scan_refine * 4.0,
                ..cfg.clone()
            };
            let (z, st) = scan_line_with_stats(form, bc.t0.max(0.0), bc.t1, &fine)?;
            report.evaluations += st.evaluations;
            report.max_realness = report.max_realness.max(st.max_realness);
            online.retain(|o| !in_chunk(o));
            online.extend(z);
            online.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
            on_line = online.iter().filter(|z| in_chunk(z)).count();
            rescanned = true;
        }
        if bc.count as usize > on_line {
            off = locate_offline(form, crit + cfg.offline_gap, strip.1, bc.t0, bc.t1, cfg)?
                .into_iter()
                .filter(|z| z.gamma > bc.t0 && z.gamma < bc.t1)
                .collect();
        }
        if bc.count as usize != on_line + off.len() {
            return Err(Error::Reconciliation(format!(
                "chunk [{}, {}]: argument principle counts {}, found {on_line} on the line and {} off it",
                bc.t0,
                bc.t1,
                bc.count,
                off.len()
            )));
        }
        report.chunks.push(ChunkReport {
            t0: bc.t0,
            t1: bc.t1,
            box_count: bc.count,
            on_line,
            off_line: off.len(),
            rescanned,
            retries: bc.retries,
        });
        report.evaluations += bc.evaluations;
        box_total += bc.count;
        offline.extend(off);
        bottom = bc.t1;
    }
    let t_max = bottom;
    let mut new: Vec<ZeroRecord> = online
        .into_iter()
        .filter(|z| z.gamma > start && z.gamma < t_max)
        .collect();
    new.extend(offline);
    debug_assert!(new.iter().all(|z| z.kind != ZeroKind::Trivial));
    report.new_zeros = new.len();
    set.zeros.extend(new);
    set.zeros
        .sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta)));
    set.t_max = t_max;
    set.box_count += box_total;
    info!(
        "zero set for {}: {} zeros below {t_max} ({} reused, {} new)",
        form.id,
        set.len(),
        report.reused,
        report.new_zeros
    );
    Ok((set, report))
}
