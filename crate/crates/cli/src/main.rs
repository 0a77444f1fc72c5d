//! `kolmo-lab <command> [--config PATH] [flags…]`

mod commands;
mod config;
mod error;
mod selftest;
mod symbol;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::commands::{CommandOutput, CsvTable};
use crate::config::{parse_list, set, RunConfig};
use crate::error::{CliError, EXIT_CONFIG, EXIT_INCONCLUSIVE, EXIT_NUMERIC, EXIT_OK};

#[derive(Parser)]
#[command(name = "kolmo-lab", version, about = "Compactness diagnostics for frames, function spaces and operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "KOLMO_THREADS")]
    threads: Option<usize>,
    /// Directory for the JSON report and CSV side files.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Omit the timestamp so output is byte-reproducible.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Exit with code 4 when a verdict is inconclusive.
    #[arg(long, global = true)]
    strict: bool,
    /// Seed for randomized inputs.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Tail-mass profile of a family under a frame exhaustion.
    FrameTails(FrameArgs),
    /// Berezin profile, singular values and localization table of a Toeplitz section.
    Toeplitz(ToeplitzArgs),
    /// Singular values and VMOA moduli of a little Hankel section.
    Hankel(HankelArgs),
    /// Besov-Sobolev boundary tails of a family.
    Besov(BesovArgs),
    /// Spatial, Fourier and STFT tails of a signal family on the line.
    L2(L2Args),
    /// Capacity bound for separated families under an umbrella.
    Umbrella(UmbrellaArgs),
    /// Run the oracle suite and print PASS/FAIL per check.
    Selftest,
}

#[derive(Args)]
struct FrameFlags {
    /// bergman, fock, hardy or paley-wiener.
    #[arg(long)]
    space: Option<String>,
    /// Paley-Wiener band half-width.
    #[arg(long)]
    a: Option<f64>,
    /// ball, hyperbolic, linear, boxes or arcs.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args)]
struct FrameArgs {
    #[command(flatten)]
    frame: FrameFlags,
    /// monomials:A..B or basis:A..B.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct ToeplitzArgs {
    /// Symbol expression, e.g. '1-|z|^2' or 'z*conj(z)'.
    #[arg(long, allow_hyphen_values = true)]
    symbol: Option<String>,
    #[arg(long)]
    deg: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Skip the localization table.
    #[arg(long)]
    no_localization: bool,
}

#[derive(Args)]
struct HankelArgs {
    /// Comma-separated real Fourier coefficients ĝ(0), ĝ(1), ….
    #[arg(long, allow_hyphen_values = true)]
    fourier: Option<String>,
    #[arg(long)]
    deg: Option<usize>,
}

#[derive(Args)]
struct BesovArgs {
    /// hardy, dirichlet, bergman or normalized.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    depth: Option<usize>,
    /// monomials:A..B or basis:A..B.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args)]
struct L2Args {
    /// modulated-gaussians or translated-gaussians.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    /// Comma-separated radii.
    #[arg(long)]
    radii: Option<String>,
    /// Also compute short-time Fourier tails.
    #[arg(long)]
    stft: bool,
}

#[derive(Args)]
struct UmbrellaArgs {
    #[command(flatten)]
    frame: FrameFlags,
    /// zero, power:C,S or gaussian:C,S.
    #[arg(long)]
    umbrella: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eps_net: Option<f64>,
}

#[derive(Serialize)]
struct Report<'a> {
    tool: &'static str,
    version: &'static str,
    library_version: &'static str,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    config: Value,
    result: Value,
    exit_code: i32,
    csv_files: Vec<String>,
}

fn apply_frame_flags(cfg: &mut RunConfig, f: FrameFlags) {
    set(&mut cfg.frame.space, f.space);
    set(&mut cfg.frame.a, f.a);
    set(&mut cfg.frame.schedule, f.schedule);
    set(&mut cfg.frame.depth, f.depth);
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::FrameTails(_) => "frame-tails",
        Command::Toeplitz(_) => "toeplitz",
        Command::Hankel(_) => "hankel",
        Command::Besov(_) => "besov",
        Command::L2(_) => "l2",
        Command::Umbrella(_) => "umbrella",
        Command::Selftest => "selftest",
    }
}

fn merge(cfg: &mut RunConfig, command: Command) -> Result<(), CliError> {
    match command {
        Command::FrameTails(a) => {
            apply_frame_flags(cfg, a.frame);
            if let Some(f) = a.family {
                cfg.family.coefficients = None;
                cfg.family.preset = Some(f);
            }
            set(&mut cfg.frame.p, a.p);
            set(&mut cfg.frame.eps, a.eps);
        }
        Command::Toeplitz(a) => {
            let t = &mut cfg.toeplitz;
            set(&mut t.symbol, a.symbol);
            set(&mut t.deg, a.deg);
            set(&mut t.p, a.p);
            set(&mut t.delta, a.delta);
            if a.no_localization {
                t.localization = Some(false);
            }
        }
        Command::Hankel(a) => {
            if let Some(s) = a.fourier {
                let v = parse_list("hankel.fourier", &s)?;
                cfg.hankel.fourier = Some(v.into_iter().map(config::Coef::real).collect());
            }
            set(&mut cfg.hankel.deg, a.deg);
        }
        Command::Besov(a) => {
            let b = &mut cfg.besov;
            set(&mut b.preset, a.preset);
            set(&mut b.order, a.order);
            set(&mut b.t, a.t);
            set(&mut b.p, a.p);
            set(&mut b.depth, a.depth);
            if let Some(f) = a.family {
                cfg.family.coefficients = None;
                cfg.family.preset = Some(f);
            }
        }
        Command::L2(a) => {
            let l = &mut cfg.l2;
            set(&mut l.preset, a.preset);
            set(&mut l.kmax, a.kmax);
            set(&mut l.count, a.count);
            if let Some(r) = a.radii {
                l.radii = Some(parse_list("l2.radii", &r)?);
            }
            if a.stft {
                l.stft = Some(true);
            }
        }
        Command::Umbrella(a) => {
            apply_frame_flags(cfg, a.frame);
            let u = &mut cfg.umbrella;
            set(&mut u.umbrella, a.umbrella);
            set(&mut u.delta, a.delta);
            set(&mut u.eps_net, a.eps_net);
        }
        Command::Selftest => {}
    }
    Ok(())
}

fn timestamp(enabled: bool) -> Option<u64> {
    enabled.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
}

fn write_csv(path: &Path, table: &CsvTable) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::config(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(&table.header).map_err(io)?;
    for row in &table.rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

fn run_selftest(seed: u64, stamp: Option<u64>, out_dir: Option<&Path>) -> Result<i32, CliError> {
    let checks = selftest::run(seed);
    let mut lines = Vec::new();
    if let Some(t) = stamp {
        lines.push(format!("kolmo-lab {} selftest at unix time {t}", env!("CARGO_PKG_VERSION")));
    }
    lines.extend(checks.iter().map(|c| c.line()));
    let failed = checks.iter().filter(|c| !c.passed).count();
    lines.push(format!("{} passed, {failed} failed (seed {seed})", checks.len() - failed));
    let text = lines.join("\n") + "\n";
    print!("{text}");
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)
            .and_then(|_| std::fs::write(dir.join("selftest.txt"), &text))
            .map_err(|e| CliError::config(format!("output.dir: {e}")))?;
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_NUMERIC })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut cfg = match &cli.common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let common = cli.common;
    set(&mut cfg.run.threads, common.threads);
    set(&mut cfg.run.seed, common.seed);
    if common.strict {
        cfg.run.strict = Some(true);
    }
    if common.no_timestamp {
        cfg.run.no_timestamp = Some(true);
    }
    if let Some(d) = &common.out_dir {
        cfg.output.dir = Some(d.display().to_string());
    }
    if cfg.run.threads == Some(0) {
        return Err(CliError::config("run.threads: must be at least 1"));
    }
    let name = command_name(&cli.command);
    merge(&mut cfg, cli.command)?;
    let threads = cfg.run.threads;
    let stamp = timestamp(!cfg.run.no_timestamp.unwrap_or(false));
    let out_dir = cfg.output.dir.clone().map(PathBuf::from);
    let seed = cfg.run.seed.unwrap_or(20240601);

    if name == "selftest" {
        return kolmo_core::numerics::par::with_threads(threads, || run_selftest(seed, stamp, out_dir.as_deref()));
    }

    let outcome: Result<CommandOutput, CliError> = kolmo_core::numerics::par::with_threads(threads, || {
        match name {
            "frame-tails" => commands::frame_tails(&mut cfg),
            "toeplitz" => commands::toeplitz(&mut cfg),
            "hankel" => commands::hankel(&mut cfg),
            "besov" => commands::besov(&mut cfg),
            "l2" => commands::l2(&mut cfg),
            _ => commands::umbrella(&mut cfg),
        }
    });
    let out = outcome?;
    let strict = cfg.run.strict.unwrap_or(false);
    let exit_code = if strict && out.inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK };

    let mut csv_files = Vec::new();
    if let Some(dir) = &out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::config(format!("output.dir: {e}")))?;
        for t in &out.tables {
            let file = format!("{name}-{}.csv", t.suffix);
            write_csv(&dir.join(&file), t)?;
            csv_files.push(file);
        }
    }
    let mut config = out.config;
    config["run"] = serde_json::to_value(&cfg.run).expect("serializable");
    config["output"] = serde_json::to_value(&cfg.output).expect("serializable");
    let report = Report {
        tool: "kolmo-lab",
        version: env!("CARGO_PKG_VERSION"),
        library_version: kolmo_core::VERSION,
        command: name,
        timestamp: stamp,
        config,
        result: out.result,
        exit_code,
        csv_files,
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    if let Some(dir) = &out_dir {
        std::fs::write(dir.join(format!("{name}.json")), &text)
            .map_err(|e| CliError::config(format!("output.dir: {e}")))?;
    }
    std::io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Numeric(format!("stdout: {e}")))?;
    Ok(exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("kolmo-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
