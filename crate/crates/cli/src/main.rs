//! `sim`: association-probability sweeps, mode comparisons and edge-target
//! optimisation over JSON scenario files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use irs_hetnet::io::{emit_map_csv, emit_summary, load_config, Report, RunManifest};
use irs_hetnet::{
    compare_modes, min_elements_for_edge_target, min_power_for_edge_target, sweep, validate,
    Drop64, Error, Placement, Scenario64, UserDrop, Variable,
};

const DEFAULT_GRID: usize = 201;
const DEFAULT_POWER_BRACKET_W: (f64, f64) = (1e-3, 100.0);
const DEFAULT_MAX_ELEMENTS: f64 = 1024.0;
const DEFAULT_TOL_W: f64 = 1e-4;

#[derive(Parser)]
#[command(name = "sim", version, about = "Two-tier mmWave user-association simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Association map of one scenario.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        drop: DropArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Conventional vs IRS-assisted maps over the same users.
    Compare {
        #[arg(long)]
        conv: PathBuf,
        #[arg(long)]
        irs: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Smallest transmit power or IRS size meeting an edge target.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        /// Target edge-minimum association probability.
        #[arg(long)]
        target: f64,
        #[arg(long, value_enum)]
        var: Var,
        /// Power: search interval in W (default 0.001 100). Elements: 1 and
        /// the largest M = N to try (default 1 1024).
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        bracket: Option<Vec<f64>>,
        /// Final bracket width in W (power only).
        #[arg(long, default_value_t = DEFAULT_TOL_W)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DropArgs {
    /// N × N lattice over the cell's square (default 201).
    #[arg(long, conflicts_with = "random")]
    grid: Option<usize>,
    /// Uniform random users instead of a lattice.
    #[arg(long, requires = "seed")]
    random: Option<usize>,
    #[arg(long, requires = "random")]
    seed: Option<u64>,
}

impl DropArgs {
    fn placement(&self) -> Placement {
        match (self.random, self.seed) {
            (Some(count), Some(seed)) => Placement::Random { count, seed },
            _ => Placement::Grid {
                resolution: self.grid.unwrap_or(DEFAULT_GRID),
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Var {
    Power,
    Elements,
}

fn describe(p: &Placement) -> String {
    match p {
        Placement::Grid { resolution } => format!("grid {resolution}x{resolution}"),
        Placement::Random { count, seed } => format!("random {count} seed {seed}"),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Io { .. } => 4,
        Error::Bracket { .. } | Error::Infeasible { .. } => 3,
        _ => 2,
    }
}

fn scenario(path: &Path) -> Result<Scenario64, Error> {
    validate(load_config(path)?)
}

fn out_dir(dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn finish(mut manifest: RunManifest, files: &[&str]) -> Result<(), Error> {
    for f in files {
        manifest.record(f)?;
    }
    let path = manifest.write()?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_sweep(config: &Path, drop: &DropArgs, out: &Path) -> Result<(), Error> {
    let s = scenario(config)?;
    let placement = drop.placement();
    let users = UserDrop::for_scenario(&s, placement)?;
    let map = sweep(&s, &users)?;

    out_dir(out)?;
    emit_map_csv(&map, out.join("map.csv"))?;
    let label = s.config().mode().as_str();
    let report = Report {
        scenarios: vec![(label, &s)],
        maps: vec![(label, &map)],
        ..Report::default()
    };
    emit_summary(&report, out.join("summary.txt"))?;

    let manifest = RunManifest::new(
        "sweep",
        vec![config.display().to_string()],
        describe(&placement),
        out,
    );
    finish(manifest, &["map.csv", "summary.txt"])
}

fn run_compare(conv: &Path, irs: &Path, grid: usize, out: &Path) -> Result<(), Error> {
    let c = scenario(conv)?;
    let i = scenario(irs)?;
    let placement = Placement::Grid { resolution: grid };
    let users = UserDrop::for_scenario(&c, placement)?;
    let cmp = compare_modes(&c, &i, &users)?;

    out_dir(out)?;
    emit_map_csv(&cmp.conventional, out.join("conventional.csv"))?;
    emit_map_csv(&cmp.irs, out.join("irs_assisted.csv"))?;
    let report = Report {
        scenarios: vec![("conventional", &c), ("irs_assisted", &i)],
        comparison: Some(&cmp),
        ..Report::default()
    };
    emit_summary(&report, out.join("summary.txt"))?;

    let manifest = RunManifest::new(
        "compare",
        vec![conv.display().to_string(), irs.display().to_string()],
        describe(&placement),
        out,
    );
    finish(manifest, &["conventional.csv", "irs_assisted.csv", "summary.txt"])
}

fn run_optimize(
    config: &Path,
    target: f64,
    var: Var,
    bracket: Option<&[f64]>,
    tol: f64,
    out: &Path,
) -> Result<(), Error> {
    let s = scenario(config)?;
    let placement = Placement::Grid {
        resolution: DEFAULT_GRID,
    };
    let users: Drop64 = UserDrop::for_scenario(&s, placement)?;

    let outcome = match var {
        Var::Power => {
            let (lo, hi) = bracket.map_or(DEFAULT_POWER_BRACKET_W, |b| (b[0], b[1]));
            min_power_for_edge_target(&s, &users, target, lo, hi, tol)?
        }
        Var::Elements => {
            let (lo, hi) = bracket.map_or((1.0, DEFAULT_MAX_ELEMENTS), |b| (b[0], b[1]));
            if lo != 1.0 || hi < 1.0 || hi.fract() != 0.0 || hi > u32::MAX as f64 {
                return Err(Error::InvalidDrop(format!(
                    "element bracket must be 1 and a whole number >= 1, got {lo} {hi}"
                )));
            }
            min_elements_for_edge_target(&s, &users, target, hi as u32)?
        }
    };

    // The map at the optimum, with the scenario's own fading mode.
    let mut c = s.config().clone();
    match outcome.variable {
        Variable::TransmitPowerW => c.micro.transmit_power_w = outcome.optimum,
        Variable::ElementCount => {
            let n = outcome.element_count().expect("integral element count");
            let irs = c.irs.as_mut().expect("element search requires an IRS");
            irs.elements_tx = n;
            irs.elements_rx = n;
        }
    }
    let best = validate(c)?;
    let map = sweep(&best, &users)?;

    out_dir(out)?;
    emit_map_csv(&map, out.join("map.csv"))?;
    let report = Report {
        scenarios: vec![("input", &s), ("optimum", &best)],
        maps: vec![("optimum", &map)],
        optimization: Some(&outcome),
        ..Report::default()
    };
    emit_summary(&report, out.join("summary.txt"))?;

    let manifest = RunManifest::new(
        "optimize",
        vec![config.display().to_string()],
        describe(&placement),
        out,
    );
    finish(manifest, &["map.csv", "summary.txt"])
}

fn init_threads() {
    let n = std::env::var("SIM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if n > 0 {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let result = match &cli.command {
        Command::Sweep { config, drop, out } => run_sweep(config, drop, out),
        Command::Compare { conv, irs, grid, out } => run_compare(conv, irs, *grid, out),
        Command::Optimize {
            config,
            target,
            var,
            bracket,
            tol,
            out,
        } => run_optimize(config, *target, *var, bracket.as_deref(), *tol, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sim: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
