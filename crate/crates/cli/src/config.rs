//! Run configuration: a flat `key=value` file merged under command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use lfun_core::EvalConfig;

use crate::error::CliError;

/// Flags shared by every subcommand. Each has a config-file key of the
/// same name.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// `key=value` file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `g` or the path of a coefficient CSV.
    #[arg(long)]
    pub form: Option<String>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub ell: Option<u8>,
    /// Height of the zero set and the statistics.
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Accuracy target of the evaluators.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Smoothing exponent of the approximate functional equation (1 or 2).
    #[arg(long)]
    pub h: Option<u8>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Truncation point of the approximate functional equation.
    #[arg(long)]
    pub x: Option<f64>,
}

const KEYS: &[&str] = &[
    "form", "k", "ell", "T", "out", "cache", "workers", "eps", "h", "eta", "alpha", "x", "s", "N",
    "route",
];

/// Parsed config file.
#[derive(Debug, Default)]
pub struct FileConfig(BTreeMap<String, String>);

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("{}:{}: expected key=value", path.display(), i + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(CliError::Usage(format!(
                    "{}:{}: unknown key {k:?}",
                    path.display(),
                    i + 1
                )));
            }
            map.insert(k.to_string(), v.to_string());
        }
        Ok(Self(map))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.0
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("config key {key}: bad value {v:?}")))
            })
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FormSpec {
    Builtin,
    File(PathBuf),
}

/// Everything a subcommand needs, after defaults and validation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub form: FormSpec,
    pub k: u32,
    pub ell: u8,
    pub t: f64,
    pub out: PathBuf,
    pub cache: PathBuf,
    pub workers: usize,
    pub eval: EvalConfig,
}

fn pick<T: FromStr>(flag: Option<T>, file: &FileConfig, key: &str) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs, file: &FileConfig) -> Result<Self, CliError> {
        let form = pick(args.form.clone(), file, "form")?.unwrap_or_else(|| "g".into());
        let k = pick(args.k, file, "k")?;
        let ell = pick(args.ell, file, "ell")?;
        let (form, k, ell) = if form == "g" {
            if k.is_some_and(|k| k != 4) || ell.is_some_and(|l| l != 0) {
                return Err(CliError::Usage("the built-in form g has k=4, ell=0".into()));
            }
            (FormSpec::Builtin, 4, 0)
        } else {
            let (Some(k), Some(ell)) = (k, ell) else {
                return Err(CliError::Usage(
                    "a coefficient file form needs --k and --ell".into(),
                ));
            };
            if k < 1 || ell > 1 {
                return Err(CliError::Usage(format!("k={k}, ell={ell}: need k ≥ 1 and ell ∈ {{0, 1}}")));
            }
            (FormSpec::File(PathBuf::from(form)), k, ell)
        };

        let t = pick(args.t, file, "T")?.unwrap_or(50.0);
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!("T must be positive, got {t}")));
        }
        let workers = match pick(args.workers, file, "workers")? {
            Some(0) => return Err(CliError::Usage("workers must be at least 1".into())),
            Some(w) => w,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };

        let mut eval = EvalConfig::default();
        if let Some(eps) = pick(args.eps, file, "eps")? {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(CliError::Usage(format!("eps must lie in (0, 1), got {eps}")));
            }
            eval.target_eps = eps;
        }
        if let Some(h) = pick(args.h, file, "h")? {
            if h != 1 && h != 2 {
                return Err(CliError::Usage(format!("h must be 1 or 2, got {h}")));
            }
            eval.h = h;
        }
        if let Some(eta) = pick(args.eta, file, "eta")? {
            eval.eta = eta;
        }
        eval.alpha = pick(args.alpha, file, "alpha")?.or(eval.alpha);
        eval.x = pick(args.x, file, "x")?.or(eval.x);

        Ok(Self {
            form,
            k,
            ell,
            t,
            out: pick(args.out.clone(), file, "out")?.unwrap_or_else(|| "lfun-out".into()),
            cache: pick(args.cache.clone(), file, "cache")?.unwrap_or_else(|| ".lfun-cache".into()),
            workers,
            eval,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> FileConfig {
        FileConfig::parse(text, Path::new("test.conf")).unwrap()
    }

    #[test]
    fn flags_override_file() {
        let f = file("T = 80\n# comment\nworkers=3\neps=1e-8  # trailing\n");
        let args = CommonArgs {
            t: Some(120.0),
            ..Default::default()
        };
        let rc = RunConfig::resolve(&args, &f).unwrap();
        assert_eq!(rc.t, 120.0);
        assert_eq!(rc.workers, 3);
        assert_eq!(rc.eval.target_eps, 1e-8);
        assert_eq!(rc.form, FormSpec::Builtin);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FileConfig::parse("colour=red", Path::new("c")).is_err());
        assert!(FileConfig::parse("T 50", Path::new("c")).is_err());
        let bad = |a: CommonArgs| RunConfig::resolve(&a, &FileConfig::default()).is_err();
        assert!(bad(CommonArgs { workers: Some(0), ..Default::default() }));
        assert!(bad(CommonArgs { k: Some(3), ..Default::default() }));
        assert!(bad(CommonArgs { form: Some("f.csv".into()), ..Default::default() }));
        assert!(bad(CommonArgs { h: Some(3), ..Default::default() }));
        assert!(bad(CommonArgs { t: Some(-1.0), ..Default::default() }));
    }
}
