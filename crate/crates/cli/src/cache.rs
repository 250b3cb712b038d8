//! One cache subdirectory per (form, k, ell), holding the coefficient table
//! the zeros were computed from and the zero database.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use lfun_core::files::write_atomic;
use lfun_core::zeros::{build_zeroset, load_zeros, save_zeros, ZeroConfig};
use lfun_core::{FormDescriptor, ZeroSet};

use crate::error::CliError;

pub struct Cache {
    dir: PathBuf,
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

/// Coefficients as "n,re,im" rows with round-trip formatting.
fn render_coeffs(form: &FormDescriptor) -> String {
    let mut s = String::new();
    for (i, a) in form.coeffs.as_slice().iter().enumerate() {
        let _ = writeln!(s, "{},{:?},{:?}", i + 1, a.re, a.im);
    }
    s
}

impl Cache {
    pub fn new(root: &std::path::Path, form: &FormDescriptor) -> Self {
        Self {
            dir: root.join(format!("{}-k{}-l{}", form.id, form.k, form.ell)),
        }
    }

    /// A stored zero set for `form`, or `None` if absent or unusable. A
    /// damaged file or one computed from different coefficients is reported
    /// and ignored.
    fn prior(&self, form: &FormDescriptor, coeffs: &str) -> Option<ZeroSet> {
        let zpath = self.dir.join("zeros.csv");
        if !zpath.exists() {
            return None;
        }
        match fs::read_to_string(self.dir.join("coefficients.csv")) {
            Ok(c) if c == coeffs => {}
            _ => {
                eprintln!("cache: coefficient table changed, recomputing zeros");
                return None;
            }
        }
        match load_zeros(&zpath) {
            Ok(zs) if zs.form_id == form.id && zs.k == form.k && zs.ell == form.ell => Some(zs),
            Ok(_) => {
                eprintln!("cache: {} belongs to another form, ignoring it", zpath.display());
                None
            }
            Err(e) => {
                eprintln!("cache: ignoring {}: {e}", zpath.display());
                None
            }
        }
    }

    /// The zero set certified to at least `t`, extended and saved as needed.
    pub fn zero_set(&self, form: &FormDescriptor, t: f64, cfg: &ZeroConfig) -> Result<ZeroSet, CliError> {
        let coeffs = render_coeffs(form);
        let prior = self.prior(form, &coeffs);
        if let Some(p) = &prior {
            eprintln!("reused N={} zeros below T_max={}", p.len(), p.t_max);
        }
        let (zs, report) = build_zeroset(form, t, cfg, prior.as_ref())?;
        if report.new_zeros > 0 || prior.as_ref().map_or(true, |p| p.t_max != zs.t_max) {
            fs::create_dir_all(&self.dir).map_err(io)?;
            write_atomic(&self.dir.join("coefficients.csv"), coeffs.as_bytes())?;
            save_zeros(&zs, &self.dir.join("zeros.csv"))?;
            eprintln!(
                "computed {} new zeros, certified to T_max={} ({} total)",
                report.new_zeros,
                zs.t_max,
                zs.len()
            );
        }
        Ok(zs)
    }
}
