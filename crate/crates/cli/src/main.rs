//! `lfun`: coefficients, evaluation, zeros and the statistics suite from the
//! command line.
//!
//! Exit codes: 0 success, 1 a failed check or computation, 2 I/O or data
//! error, 64 usage error.

mod cache;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lfun_core::files::write_atomic;
use lfun_core::statistics::Verdict;

use commands::Output;
use config::{CommonArgs, FileConfig, RunConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "lfun", version, about = "L-functions of half-integral weight cusp forms")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Fourier coefficients of the built-in form.
    Coeffs {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of coefficients.
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Evaluate L(s) at one point.
    Eval {
        #[command(flatten)]
        common: CommonArgs,
        /// The point, e.g. "2.25+10i".
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// auto, direct, xi or afe.
        #[arg(long)]
        route: Option<String>,
    },
    /// Build or extend the certified zero database.
    Zeros {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Weyl sums, fractional-part histogram and discrepancy of the ordinates.
    Weyl {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Explicit-formula sums over the zeros.
    Landau {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Mean square of L on the critical line.
    Meansq {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Summed distance of the zeros from the critical line.
    Density {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Every check above plus the functional equation.
    Report {
        #[command(flatten)]
        common: CommonArgs,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Coeffs { .. } => "coeffs",
            Cmd::Eval { .. } => "eval",
            Cmd::Zeros { .. } => "zeros",
            Cmd::Weyl { .. } => "weyl",
            Cmd::Landau { .. } => "landau",
            Cmd::Meansq { .. } => "meansq",
            Cmd::Density { .. } => "density",
            Cmd::Report { .. } => "report",
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Cmd::Coeffs { common, .. }
            | Cmd::Eval { common, .. }
            | Cmd::Zeros { common }
            | Cmd::Weyl { common }
            | Cmd::Landau { common }
            | Cmd::Meansq { common }
            | Cmd::Density { common }
            | Cmd::Report { common } => common,
        }
    }
}

fn execute(cmd: &Cmd, file: &FileConfig, rc: &RunConfig) -> Result<Output, CliError> {
    let form = || commands::load_form(rc);
    match cmd {
        Cmd::Coeffs { n, .. } => {
            let n = match n {
                Some(n) => *n,
                None => file.get("N")?.unwrap_or_else(commands::default_coeff_count),
            };
            if n == 0 {
                return Err(CliError::Usage("N must be at least 1".into()));
            }
            if rc.form != config::FormSpec::Builtin {
                return Err(CliError::Usage("coeffs computes the built-in form g only".into()));
            }
            commands::coeffs(n)
        }
        Cmd::Eval { s, route, .. } => {
            let s = match s {
                Some(s) => s.clone(),
                None => file
                    .get::<String>("s")?
                    .ok_or_else(|| CliError::Usage("eval needs --s".into()))?,
            };
            let point = commands::parse_complex(&s)
                .ok_or_else(|| CliError::Usage(format!("cannot parse {s:?} as a complex number")))?;
            let route = match route {
                Some(r) => r.clone(),
                None => file.get("route")?.unwrap_or_else(|| "auto".into()),
            };
            commands::eval(rc, &form()?, point, &route)
        }
        Cmd::Zeros { .. } => {
            let f = form()?;
            Ok(commands::zeros(rc, &commands::zero_set(rc, &f)?))
        }
        Cmd::Weyl { .. } => {
            let f = form()?;
            commands::weyl(rc, &commands::zero_set(rc, &f)?)
        }
        Cmd::Landau { .. } => {
            let f = form()?;
            let zs = commands::zero_set(rc, &f)?;
            commands::landau(rc, &f, &zs)
        }
        Cmd::Meansq { .. } => commands::meansq(rc, &form()?),
        Cmd::Density { .. } => {
            let f = form()?;
            let zs = commands::zero_set(rc, &f)?;
            Ok(commands::density(rc, &f, &zs))
        }
        Cmd::Report { .. } => commands::report(rc, &form()?),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let common = cli.cmd.common();
    let file = match &common.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let rc = RunConfig::resolve(common, &file)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(rc.workers)
        .build_global()
        .map_err(|e| CliError::Compute(format!("worker pool: {e}")))?;

    let mut out = execute(&cli.cmd, &file, &rc)?;
    for r in out.reports.iter_mut().filter(|r| r.eval_config.is_none()) {
        r.eval_config = Some(rc.eval.clone());
    }

    let mut files = out.files;
    if !out.reports.is_empty() {
        let mut jsonl = String::new();
        for r in &out.reports {
            jsonl.push_str(&r.to_json_line());
            jsonl.push('\n');
        }
        files.push((format!("{}.jsonl", cli.cmd.name()), jsonl));
    }
    if !files.is_empty() {
        commands::ensure_dir(&rc.out)?;
    }
    for (name, contents) in &files {
        write_atomic(&rc.out.join(name), contents.as_bytes())?;
    }

    print!("{}", out.text);
    for r in &out.reports {
        println!(
            "[{}] {} observed={} predicted={}",
            commands::verdict_str(r.verdict),
            r.metric,
            serde_json::to_string(&r.observed).unwrap_or_default(),
            r.predicted
        );
    }
    for (name, _) in &files {
        println!("wrote {}", rc.out.join(name).display());
    }
    Ok(out.reports.iter().all(|r| r.verdict != Verdict::Fail))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("lfun: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
