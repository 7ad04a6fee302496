//! Argument parsing and dispatch for the `ulindley` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use unit_lindley::gof::PValueMethod;
use unit_lindley::special::WeightedGammaParam;
use unit_lindley::stress::DeltaRoute;
use unit_lindley::MhConfig;

use crate::commands::{self, CompareMethod, FitMethod, SampleOutput, SampleSource};
use crate::error::{CliError, Result};
use crate::ingest::{ingest, Scaling};
use crate::output::{sig6, Format, Report};

#[derive(Debug, Parser)]
#[command(name = "ulindley", version, about = "Unit-Lindley inference and stress-strength comparison")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Map raw values into (0, 1): none, percent101, or divisor=V.
    #[arg(long, default_value = "none", value_parser = clap::value_parser!(Scaling))]
    pub scale: Scaling,
    /// Output format.
    #[arg(long, default_value = "text")]
    pub format: Format,
    /// Write the formatted result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Chain {
    /// Seed for all random draws.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// First retained MH iteration.
    #[arg(long, default_value_t = 5000)]
    pub burn_in: usize,
    /// Total MH iterations.
    #[arg(long, default_value_t = 14999)]
    pub chain_length: usize,
}

impl Chain {
    fn mh(&self) -> Result<MhConfig> {
        let cfg = MhConfig {
            burn_in: self.burn_in,
            chain_length: self.chain_length,
            ..MhConfig::default()
        };
        cfg.validate()
            .map_err(|e| CliError::Usage(format!("--burn-in/--chain-length: {e}")))?;
        Ok(cfg)
    }
}

fn prior_arg(s: &str) -> std::result::Result<WeightedGammaParam, String> {
    commands::parse_prior(s)
}

fn route_arg(s: &str) -> std::result::Result<DeltaRoute, String> {
    match s {
        "gradient" => Ok(DeltaRoute::Gradient),
        "literal" => Ok(DeltaRoute::Literal),
        _ => Err(format!("expected gradient or literal, got `{s}`")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate θ by maximum likelihood or a Bayesian posterior.
    Fit {
        data: PathBuf,
        /// ml, flat, or conjugate (needs --prior).
        #[arg(long, default_value = "ml")]
        method: FitMethod,
        /// Weighted-gamma prior as alpha,beta,p.
        #[arg(long, value_parser = prior_arg)]
        prior: Option<WeightedGammaParam>,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        /// Also run a Metropolis–Hastings chain and report its diagnostics.
        #[arg(long)]
        mh: bool,
        #[command(flatten)]
        chain: Chain,
        #[command(flatten)]
        common: Common,
    },
    /// Discrepancy D(A, B) between two samples; the larger one is B.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// ml or flat.
        #[arg(long, default_value = "ml")]
        method: CompareMethod,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        /// Delta-method variance: gradient or literal.
        #[arg(long, default_value = "gradient", value_parser = route_arg)]
        route: DeltaRoute,
        #[command(flatten)]
        chain: Chain,
        #[command(flatten)]
        common: Common,
    },
    /// Run a simulation study described by a TOML file.
    Simulate {
        config: PathBuf,
        /// Overrides the seed in the file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Directory receiving `<table>.csv` and `<table>.txt`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kolmogorov–Smirnov test of a unit-Lindley fit.
    Gof {
        data: PathBuf,
        /// auto, exact, asymptotic, or asymptotic-corrected.
        #[arg(long, default_value = "auto", value_parser = commands::parse_p_method)]
        method: PValueMethod,
        #[command(flatten)]
        common: Common,
    },
    /// Draw unit-Lindley variates (--theta, -n) or a posterior chain (--data).
    Sample {
        #[arg(long, conflicts_with = "data", required_unless_present = "data")]
        theta: Option<f64>,
        #[arg(short, long, default_value_t = 100)]
        n: usize,
        /// Sample the posterior of θ given this dataset.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Weighted-gamma prior as alpha,beta,p (flat if omitted).
        #[arg(long, value_parser = prior_arg, requires = "data")]
        prior: Option<WeightedGammaParam>,
        #[command(flatten)]
        chain: Chain,
        #[command(flatten)]
        common: Common,
    },
}

fn write_to(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)
        .map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))
}

fn emit(
    report: &Report,
    common: &Common,
    stdout: &mut dyn Write,
) -> Result<()> {
    let text = report.render(common.format);
    match &common.out {
        Some(path) => {
            write_to(path, &text)?;
            if common.format != Format::Text {
                put(stdout, &report.render(Format::Text))?;
            }
            Ok(())
        }
        None => put(stdout, &text),
    }
}

fn put(w: &mut dyn Write, s: &str) -> Result<()> {
    w.write_all(s.as_bytes()).map_err(|e| CliError::io("cannot write output", e))
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--level must lie in (0, 1), got {level}")))
    }
}

/// Runs a parsed command, writing results to `stdout` and notes to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Fit { data, method, prior, level, mh, chain, common } => {
            check_level(level)?;
            let ds = ingest(&data, common.scale)?;
            note_missing(stderr, &ds)?;
            let mh = if mh { Some((chain.mh()?, chain.seed)) } else { None };
            let r = commands::fit(&ds, method, prior, level, mh)?;
            emit(&Report::new("fit", &r)?, &common, stdout)
        }
        Command::Compare { a, b, method, level, route, chain, common } => {
            check_level(level)?;
            let da = ingest(&a, common.scale)?;
            let db = ingest(&b, common.scale)?;
            note_missing(stderr, &da)?;
            note_missing(stderr, &db)?;
            let r = commands::compare(&da, &db, method, level, route, chain.mh()?, chain.seed)?;
            emit(&Report::new("compare", &r)?, &common, stdout)
        }
        Command::Gof { data, method, common } => {
            let ds = ingest(&data, common.scale)?;
            note_missing(stderr, &ds)?;
            let r = commands::gof(&ds, method)?;
            emit(&Report::new("gof", &r)?, &common, stdout)
        }
        Command::Simulate { config, seed, format, out } => {
            let run = commands::simulate(&config, seed)?;
            let rendered = match format {
                Format::Text => run.text(),
                Format::Csv => run.csv(),
                Format::Json => Report::new(
                    "simulate",
                    &serde_json::json!({ "table": run.table.as_str(), "tables": run.tables }),
                )?
                .render(Format::Json),
            };
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)
                    .map_err(|e| CliError::io(format!("cannot create {}", dir.display()), e))?;
                let (csv, txt) = run.output_paths(&dir);
                write_to(&csv, &run.csv())?;
                write_to(&txt, &run.text())?;
            }
            put(stdout, &rendered)
        }
        Command::Sample { theta, n, data, prior, chain, common } => {
            let source = match (theta, data) {
                (Some(theta), None) => SampleSource::Variates { theta, n },
                (None, Some(path)) => {
                    let ds = ingest(&path, common.scale)?;
                    note_missing(stderr, &ds)?;
                    SampleSource::Posterior { data: Box::new(ds), prior, mh: chain.mh()? }
                }
                _ => unreachable!("clap enforces exactly one source"),
            };
            match commands::sample(source, chain.seed)? {
                SampleOutput::Variates(xs) => {
                    let body: String = xs.iter().map(|x| sig6(*x) + "\n").collect();
                    match &common.out {
                        Some(p) => write_to(p, &body),
                        None => put(stdout, &body),
                    }
                }
                SampleOutput::Chain(c) => {
                    let body: String = c.draws.iter().map(|x| sig6(*x) + "\n").collect();
                    let summary = Report::new("sample", &c.summary())?.render(common.format);
                    match &common.out {
                        Some(p) => {
                            write_to(p, &body)?;
                            put(stdout, &summary)
                        }
                        None => {
                            put(stdout, &body)?;
                            put(stderr, &summary)
                        }
                    }
                }
            }
        }
    }
}

fn note_missing(stderr: &mut dyn Write, ds: &crate::ingest::Dataset) -> Result<()> {
    if ds.missing() > 0 {
        let lines: Vec<String> = ds.missing_lines.iter().map(u64::to_string).collect();
        put(
            stderr,
            &format!(
                "{}: dropped {} missing value(s) at line(s) {}\n",
                ds.path.display(),
                ds.missing(),
                lines.join(", ")
            ),
        )?;
    }
    Ok(())
}
