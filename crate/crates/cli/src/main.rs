use std::fs;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rdds::bench::{loglog_slope, run_bench, BenchConfig, Distribution};
use rdds::check::{run_check, CheckReport, DropBoard};
use rdds::multiphase::{multiphase_direct, phase3_threshold, run_reduction, MultiphaseInstance};
use rdds::script::{format_script, parse_script};
use rdds::{GreedyMove, Rdds, Skyline};

/// Widest board the column oracle is run on.
const MAX_CHECK_WIDTH: i64 = 1_000_000;

#[derive(Parser)]
#[command(name = "rdds", version, about = "Drop rectangles onto a board and place them greedily")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an op script (`U w h x` drops, `Q w h` queries) and print each
    /// outcome followed by the final skyline as JSON.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        width: i64,
    },
    /// Compare the structure against the column-scan oracle on a random script.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        ops: usize,
        #[arg(long, default_value_t = 64)]
        width: i64,
        /// Forget every Nth drop, to see a failure being reported.
        #[arg(long, hide = true)]
        fault_every: Option<usize>,
    },
    /// Time build, query and update on generated boards and write CSV.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value = "uniform")]
        dist: Distribution,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Decide a set-intersection instance through three phases of drops.
    Multiphase { file: PathBuf },
    /// Serve the game HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn run(file: &Path, width: i64) -> Result<()> {
    let text = read(file)?;
    let ops = parse_script(&text).with_context(|| format!("{}", file.display()))?;
    let mut rdds = Rdds::new(width)?;
    for (line, op) in ops {
        let outcome = op
            .apply(&mut rdds)
            .with_context(|| format!("{}: line {line}: {op}", file.display()))?;
        println!("{outcome}");
    }
    println!("{}", serde_json::to_string(&rdds.snapshot())?);
    Ok(())
}

/// A board that silently loses some drops.
struct Faulty {
    inner: Rdds,
    every: usize,
    drops: usize,
}

impl DropBoard for Faulty {
    fn query(&self, width: i64, height: i64) -> rdds::Result<GreedyMove> {
        self.inner.query(width, height)
    }

    fn update(&mut self, width: i64, height: i64, x: i64) -> rdds::Result<i64> {
        self.drops += 1;
        if self.drops.is_multiple_of(self.every) {
            return Ok(self.inner.global_max());
        }
        self.inner.update(width, height, x)
    }

    fn snapshot(&self) -> Skyline {
        self.inner.snapshot()
    }
}

fn check(seed: u64, ops: usize, width: i64, fault_every: Option<usize>) -> Result<ExitCode> {
    if !(1..=MAX_CHECK_WIDTH).contains(&width) {
        bail!("board width must be in 1..={MAX_CHECK_WIDTH}, got {width}");
    }
    let report: CheckReport = match fault_every {
        None => run_check(|| Rdds::new(width).unwrap(), seed, ops, width),
        Some(every) => {
            let every = every.max(1);
            let make = || Faulty {
                inner: Rdds::new(width).unwrap(),
                every,
                drops: 0,
            };
            run_check(make, seed, ops, width)
        }
    };
    match report.counterexample {
        None => {
            println!("ok: {} ops on width {width} agree with the column oracle (seed {seed})", report.ops);
            Ok(ExitCode::SUCCESS)
        }
        Some((script, mismatch)) => {
            println!("mismatch at step {}: {}", mismatch.step, mismatch.detail);
            println!("# minimized counterexample, width {width}, {} ops", script.len());
            print!("{}", format_script(&script));
            Ok(ExitCode::FAILURE)
        }
    }
}

fn bench(mut sizes: Vec<usize>, dist: Distribution, out: &Path, seed: u64) -> Result<()> {
    if sizes.contains(&0) {
        bail!("sizes must be positive");
    }
    sizes.sort_unstable();
    sizes.dedup();
    let cfg = BenchConfig {
        seed,
        ..BenchConfig::default()
    };
    let report = run_bench(&sizes, dist, &cfg);
    fs::write(out, report.to_csv()).with_context(|| format!("cannot write {}", out.display()))?;
    print!("{}", report.to_csv());
    if sizes.len() >= 2 {
        for op in ["build", "query", "update", "oracle_query"] {
            println!("slope {op} {:.3}", loglog_slope(&report.series(op)));
        }
    }
    Ok(())
}

fn multiphase(file: &Path) -> Result<ExitCode> {
    let inst: MultiphaseInstance = read(file)?
        .parse()
        .with_context(|| format!("{}", file.display()))?;
    let (board, mv) = run_reduction(&inst)?;
    let threshold = phase3_threshold(&inst);
    let decided = mv.resulting_max <= threshold;
    let direct = multiphase_direct(&inst);
    println!("{decided} {direct}");
    println!(
        "phase 3 piece {}x{} goes to x={} landing={} max={} (threshold {threshold})",
        inst.k + 1 - inst.index,
        inst.k + 2,
        mv.x,
        mv.landing,
        mv.resulting_max
    );
    println!("{}", serde_json::to_string(&board.snapshot())?);
    Ok(if decided == direct {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn serve(host: IpAddr, port: u16) -> Result<()> {
    let addr = SocketAddr::new(host, port);
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        eprintln!("listening on http://{addr}");
        rdds_service::serve(addr).await
    })?;
    Ok(())
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { file, width } => run(&file, width).map(|()| ExitCode::SUCCESS),
        Command::Check {
            seed,
            ops,
            width,
            fault_every,
        } => check(seed, ops, width, fault_every),
        Command::Bench { sizes, dist, out, seed } => bench(sizes, dist, &out, seed).map(|()| ExitCode::SUCCESS),
        Command::Multiphase { file } => multiphase(&file),
        Command::Serve { port, host } => serve(host, port).map(|()| ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
