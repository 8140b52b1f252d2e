use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ybcomm::compute::{compute_value, ComputeObject, ComputeRequest, ComputeResult};
use ybcomm::report::{ReportFile, VerificationReport};
use ybcomm::suites::{run_suite, tally, Caps, Suite, SuiteConfig};
use ybcomm::RFlavor;

#[derive(Parser)]
#[command(name = "ybcomm", version, about = "Exact checks of R-matrix, weight-function and commutation identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        /// rmatrix, weightfn, grid, commutation, bethe-gt, degeneration, golden or all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Restrict to one flavour: trigA, trigB or rational.
        #[arg(long)]
        flavor: Option<String>,
        /// Restrict to one rank N.
        #[arg(long = "N")]
        rank: Option<usize>,
        /// Family sizes, comma separated.
        #[arg(long)]
        sizes: Option<String>,
        /// Restrict to one quantum length n.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per check (default: each suite's own count).
        #[arg(long)]
        samples: Option<usize>,
        /// Enumeration caps as key=value,...
        #[arg(long)]
        caps: Option<String>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Evaluate one quantity at exact rational parameters.
    Compute {
        /// weightW, ikDet, ikLeft, ikRight, domainWall, gridH, gridK, psi or qdet-eigenvalue
        object: String,
        #[arg(long, default_value = "trigA")]
        flavor: String,
        #[arg(long = "N")]
        rank: Option<usize>,
        /// key=value; lists are comma separated, e.g. --param u=1,2/3
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

enum Failure {
    Config(String),
    Io(String),
}

fn config<E: ToString>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Failure::Config(format!("malformed size `{s}`"))))
        .collect()
}

fn write_out(path: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, body).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn text_line(r: &VerificationReport) -> String {
    let mut parts = vec![format!("{:<7} {}", r.status.to_string(), r.identity)];
    if let Some(f) = &r.flavor {
        parts.push(f.clone());
    }
    let i = &r.instance;
    if let Some(n) = i.rank {
        parts.push(format!("N={n}"));
    }
    if !i.sizes.is_empty() {
        parts.push(format!("sizes=({})", i.sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(",")));
    }
    if let Some(n) = i.n {
        parts.push(format!("n={n}"));
    }
    if let Some(d) = &i.detail {
        parts.push(format!("[{d}]"));
    }
    parts.push(format!("samples={} {}ms", r.samples, r.duration_ms));
    let mut line = parts.join(" ");
    if let Some(note) = &r.note {
        line.push_str(&format!("\n        note: {note}"));
    }
    if let Some(ce) = &r.counterexample {
        let ce: Vec<String> = ce.iter().map(|(k, v)| format!("{k}={v}")).collect();
        line.push_str(&format!("\n        counterexample: {}", ce.join(" ")));
    }
    line
}

fn verify(cfg: SuiteConfig, suite: &str, out: &Option<PathBuf>, format: Format) -> Result<bool, Failure> {
    let suite: Suite = suite.parse().map_err(config)?;
    let reports = run_suite(suite, &cfg).map_err(config)?;
    let ok = reports.iter().all(|r| r.status != ybcomm::report::Status::Fail);
    let summary = tally(&reports);
    let json = serde_json::to_string_pretty(&ReportFile::new(reports.clone())).map_err(config)?;
    write_out(out, &json)?;
    match format {
        Format::Json => println!("{json}"),
        Format::Text => {
            for r in &reports {
                println!("{}", text_line(r));
            }
            let s: Vec<String> = summary.iter().map(|(k, v)| format!("{k}: {v}")).collect();
            println!("{}", s.join(", "));
        }
    }
    Ok(ok)
}

fn compute(req: ComputeRequest, out: &Option<PathBuf>, format: Format) -> Result<(), Failure> {
    let result: ComputeResult = compute_value(&req).map_err(config)?;
    let json = serde_json::to_string_pretty(&result).map_err(config)?;
    write_out(out, &json)?;
    match format {
        Format::Json => println!("{json}"),
        Format::Text => {
            println!("{} = {}", result.object, result.value);
            println!("  flavor = {}", result.flavor);
            for (k, v) in &result.inputs {
                println!("  {k} = {v}");
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Verify { suite, flavor, rank, sizes, n, seed, samples, caps, out, format, jobs } => {
            let cfg = SuiteConfig {
                flavor: flavor.map(|f| f.parse::<RFlavor>()).transpose().map_err(config)?,
                rank,
                sizes: sizes.as_deref().map(parse_sizes).transpose()?,
                n,
                seed,
                samples,
                caps: caps.as_deref().map(str::parse::<Caps>).transpose().map_err(config)?.unwrap_or_default(),
                jobs,
            };
            if cfg.samples == Some(0) {
                return Err(Failure::Config("--samples must be positive".into()));
            }
            verify(cfg, &suite, &out, format)
        }
        Command::Compute { object, flavor, rank, params, out, format } => {
            let mut map = BTreeMap::new();
            for p in params {
                let (k, v) = p.split_once('=').ok_or_else(|| Failure::Config(format!("parameter `{p}` is not key=value")))?;
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            let req = ComputeRequest {
                object: object.parse::<ComputeObject>().map_err(config)?,
                flavor: flavor.parse().map_err(config)?,
                rank,
                params: map,
            };
            compute(req, &out, format)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
