//! The zero database: a checksummed CSV file.
//!
//! ```text
//! # form=g k=4 ell=0 T_max=200.05 box_count=403 checksum=<sha256 of the rest>
//! beta,gamma,kind,residual,method,uncertainty
//! 2.2500000000000000e0,9.1234567890123456e0,on-line,...
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{ZeroKind, ZeroMethod, ZeroRecord, ZeroSet};
use crate::error::{Error, Result};
use crate::files::write_atomic;

const HEADER: &str = "beta,gamma,kind,residual,method,uncertainty";

pub(super) fn body(zs: &ZeroSet) -> String {
    let mut out = String::with_capacity(64 + zs.zeros.len() * 120);
    out.push_str(HEADER);
    out.push('\n');
    for z in &zs.zeros {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{},{:.16e},{},{:.16e}",
            z.beta,
            z.gamma,
            z.kind.as_str(),
            z.residual,
            z.method.as_str(),
            z.uncertainty
        );
    }
    out
}

pub(super) fn body_checksum(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Full file contents for a zero set.
pub fn zeros_csv(zs: &ZeroSet) -> String {
    let b = body(zs);
    format!(
        "# form={} k={} ell={} T_max={:?} box_count={} checksum={}\n{}",
        zs.form_id,
        zs.k,
        zs.ell,
        zs.t_max,
        zs.box_count,
        body_checksum(&b),
        b
    )
}

/// Writes the database atomically.
pub fn save_zeros(zs: &ZeroSet, path: &Path) -> Result<()> {
    write_atomic(path, zeros_csv(zs).as_bytes())
}

pub fn load_zeros(path: &Path) -> Result<ZeroSet> {
    parse_zeros(&fs::read_to_string(path)?)
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_f64(field: &str, what: &str, line: usize) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| schema(format!("line {line}: bad {what} {field:?}")))
}

/// Parses a database file. Nothing is returned unless the whole file is
/// well formed and matches its checksum.
pub fn parse_zeros(text: &str) -> Result<ZeroSet> {
    let (first, rest) = text
        .split_once('\n')
        .ok_or_else(|| schema("missing header comment"))?;
    let meta = first
        .strip_prefix("# ")
        .ok_or_else(|| schema("first line must start with '# '"))?;
    let mut form = None;
    let mut k = None;
    let mut ell = None;
    let mut t_max = None;
    let mut box_count = None;
    let mut checksum = None;
    for kv in meta.split_whitespace() {
        let (key, val) = kv
            .split_once('=')
            .ok_or_else(|| schema(format!("malformed field {kv:?}")))?;
        match key {
            "form" => form = Some(val.to_string()),
            "k" => k = Some(val.parse::<u32>().map_err(|_| schema("bad k"))?),
            "ell" => ell = Some(val.parse::<u8>().map_err(|_| schema("bad ell"))?),
            "T_max" => t_max = Some(parse_f64(val, "T_max", 1)?),
            "box_count" => {
                box_count = Some(val.parse::<u64>().map_err(|_| schema("bad box_count"))?)
            }
            "checksum" => checksum = Some(val.to_string()),
            _ => return Err(schema(format!("unknown field {key:?}"))),
        }
    }
    let missing = |n: &str| schema(format!("header lacks {n}"));
    let expected = checksum.ok_or_else(|| missing("checksum"))?;
    let actual = body_checksum(rest);
    if expected != actual {
        return Err(Error::Checksum { expected, actual });
    }
    let mut lines = rest.lines();
    if lines.next() != Some(HEADER) {
        return Err(schema(format!("column header must be {HEADER:?}")));
    }
    let mut zeros = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 3;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(schema(format!("line {lineno}: expected 6 fields")));
        }
        zeros.push(ZeroRecord {
            beta: parse_f64(f[0], "beta", lineno)?,
            gamma: parse_f64(f[1], "gamma", lineno)?,
            kind: ZeroKind::parse(f[2])
                .ok_or_else(|| schema(format!("line {lineno}: bad kind {:?}", f[2])))?,
            residual: parse_f64(f[3], "residual", lineno)?,
            method: ZeroMethod::parse(f[4])
                .ok_or_else(|| schema(format!("line {lineno}: bad method {:?}", f[4])))?,
            uncertainty: parse_f64(f[5], "uncertainty", lineno)?,
        });
    }
    if zeros.windows(2).any(|w| w[0].gamma > w[1].gamma) {
        return Err(schema("zeros are not sorted by gamma"));
    }
    Ok(ZeroSet {
        form_id: form.ok_or_else(|| missing("form"))?,
        k: k.ok_or_else(|| missing("k"))?,
        ell: ell.ok_or_else(|| missing("ell"))?,
        zeros,
        t_max: t_max.ok_or_else(|| missing("T_max"))?,
        box_count: box_count.ok_or_else(|| missing("box_count"))?,
    })
}

/// Adds records to a set, dropping any within 1e-6 in both β and γ of a
/// zero already present, and keeps the list sorted by γ. Returns the
/// number of records actually added.
pub fn merge_zeros(zs: &mut ZeroSet, new: &[ZeroRecord]) -> usize {
    let mut added = 0;
    for r in new {
        let dup = zs
            .zeros
            .iter()
            .any(|z| (z.gamma - r.gamma).abs() < 1e-6 && (z.beta - r.beta).abs() < 1e-6);
        if !dup {
            zs.zeros.push(*r);
            added += 1;
        }
    }
    zs.zeros
        .sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta)));
    added
}
