use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use onmf::io::{read_matrix, write_matrix, MatrixFormat};
use onmf::metrics::{non_orthogonality, reconstruction_error, recovery_error, rsfe};
use onmf::sweep::sweep_csv;
use onmf::{
    bcc_cluster, factorize, gen_planted, parse_edge_list, run_sweep, FactorMode, KMeansConfig,
    Matrix, NonNeg, OnmfError, PlantedMode, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "onmf",
    version,
    about = "Orthogonal non-negative matrix factorization"
)]
struct Cli {
    /// Progress messages on stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenMode {
    Single,
    Double,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Single,
    Double,
    DoubleLargeK,
}

impl From<Mode> for FactorMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Single => FactorMode::Single,
            Mode::Double => FactorMode::Double,
            Mode::DoubleLargeK => FactorMode::DoubleLargeK,
        }
    }
}

#[derive(clap::Args)]
struct KMeansArgs {
    /// Independent k-means++ restarts.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    restarts: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    max_iters: u64,
    /// Relative cost improvement at which Lloyd iterations stop.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl KMeansArgs {
    fn config(&self) -> KMeansConfig {
        KMeansConfig {
            restarts: self.restarts as usize,
            max_iters: self.max_iters as usize,
            rel_tol: self.tol,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted instance.
    Generate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Mean of the exponential noise added to every entry.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "single")]
        mode: GenMode,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Factorize a non-negative CSV matrix.
    Factorize {
        #[arg(long)]
        input: PathBuf,
        /// The first line of the input is a header.
        #[arg(long)]
        header: bool,
        /// Inner dimension; ignored by double-large-k.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_enum, default_value = "single")]
        mode: Mode,
        #[command(flatten)]
        kmeans: KMeansArgs,
        #[arg(long)]
        out_a: Option<PathBuf>,
        /// W is written dense, k × n.
        #[arg(long)]
        out_w: Option<PathBuf>,
        /// Leave wall time out of the JSON so output is byte-reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Metrics of a factorization.
    Evaluate {
        /// Observed matrix M.
        #[arg(long)]
        input: PathBuf,
        /// Planted matrix M_truth, for the recovery error.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        w: PathBuf,
        #[arg(long)]
        header: bool,
    },
    /// Run planted instances over a grid of noise levels.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Comma-separated noise levels.
        #[arg(long, value_delimiter = ',', required = true)]
        noise_grid: Vec<f64>,
        #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, value_enum, default_value = "single")]
        mode: Mode,
        #[command(flatten)]
        kmeans: KMeansArgs,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_timing: bool,
    },
    /// Bipartite correlation clustering of a `u,v,+|-` edge list.
    Bcc {
        #[arg(long)]
        edges: PathBuf,
        /// Treat unlisted pairs as "-" edges.
        #[arg(long)]
        complete: bool,
        /// Clustering CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Meta {
    m: u64,
    n: u64,
    k: u64,
    noise_level: f64,
    seed: u64,
    mode: &'static str,
}

#[derive(Serialize)]
struct FactorizeReport {
    objective: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
    mode: &'static str,
    k: usize,
}

#[derive(Serialize)]
struct EvaluateReport {
    reconstruction_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    recovery_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rsfe: Option<f64>,
    non_orthogonality_w: f64,
    non_orthogonality_a: f64,
}

#[derive(Serialize)]
struct BccReport {
    disagreements: usize,
    clusters: usize,
}

fn print_json<S: Serialize>(value: &S) -> onmf::Result<()> {
    let text =
        serde_json::to_string(value).map_err(|e| OnmfError::InvalidArgument(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn format_of(header: bool) -> MatrixFormat {
    if header {
        MatrixFormat::CsvWithHeader
    } else {
        MatrixFormat::Csv
    }
}

fn load(path: &Path, header: bool) -> onmf::Result<Matrix> {
    read_matrix(path, format_of(header))
}

fn run(cli: Cli) -> onmf::Result<()> {
    let verbose = cli.verbose;
    let log = |msg: String| {
        if verbose {
            eprintln!("{msg}");
        }
    };
    match cli.command {
        Command::Generate {
            m,
            n,
            k,
            noise,
            seed,
            mode,
            out_dir,
        } => {
            let mode = match mode {
                GenMode::Single => PlantedMode::Single,
                GenMode::Double => PlantedMode::Double,
            };
            let inst = gen_planted::<f64>(m as usize, n as usize, k as usize, noise, seed, mode)?;
            fs::create_dir_all(&out_dir)?;
            write_matrix(&inst.m_observed, out_dir.join("M.csv"))?;
            write_matrix(&inst.m_truth, out_dir.join("Mtruth.csv"))?;
            write_matrix(&inst.a_truth, out_dir.join("Atruth.csv"))?;
            write_matrix(&inst.w_truth, out_dir.join("Wtruth.csv"))?;
            let meta = Meta {
                m,
                n,
                k,
                noise_level: noise,
                seed,
                mode: mode.as_str(),
            };
            let text = serde_json::to_string_pretty(&meta)
                .map_err(|e| OnmfError::InvalidArgument(e.to_string()))?;
            fs::write(out_dir.join("meta.json"), text + "\n")?;
            log(format!(
                "wrote planted {m}x{n} instance to {}",
                out_dir.display()
            ));
        }
        Command::Factorize {
            input,
            header,
            k,
            mode,
            kmeans,
            out_a,
            out_w,
            no_timing,
        } => {
            let m = NonNeg::new(load(&input, header)?)?;
            let cfg = kmeans.config();
            cfg.validate()?;
            log(format!(
                "factorizing {}x{} ({})",
                m.rows(),
                m.cols(),
                FactorMode::from(mode).as_str()
            ));
            let start = Instant::now();
            let sol = factorize(&m, k as usize, mode.into(), &cfg)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            if let Some(path) = out_a {
                write_matrix(&sol.a, path)?;
            }
            if let Some(path) = out_w {
                write_matrix(&sol.w_dense(), path)?;
            }
            print_json(&FactorizeReport {
                objective: sol.objective,
                wall_time_ms: (!no_timing).then_some(elapsed),
                mode: FactorMode::from(mode).as_str(),
                k: sol.k(),
            })?;
        }
        Command::Evaluate {
            input,
            truth,
            a,
            w,
            header,
        } => {
            let m = load(&input, header)?;
            let a = load(&a, header)?;
            let w = load(&w, header)?;
            let recovery = match truth {
                Some(path) => Some(recovery_error(&load(&path, header)?, &a, &w)?),
                None => None,
            };
            let rsfe = if m.frobenius_norm_sq() > 0.0 {
                Some(rsfe(&m, &a, &w)?)
            } else {
                None
            };
            print_json(&EvaluateReport {
                reconstruction_error: reconstruction_error(&m, &a, &w)?,
                recovery_error: recovery,
                rsfe,
                non_orthogonality_w: non_orthogonality(&w),
                non_orthogonality_a: non_orthogonality(&a.transpose()),
            })?;
        }
        Command::Sweep {
            m,
            n,
            k,
            noise_grid,
            trials,
            mode,
            kmeans,
            out,
            no_timing,
        } => {
            let cfg = SweepConfig {
                m: m as usize,
                n: n as usize,
                k: k as usize,
                noise_grid,
                trials: trials as usize,
                seed: kmeans.seed,
                mode: mode.into(),
                kmeans: kmeans.config(),
            };
            log(format!(
                "sweeping {} noise levels x {} trials",
                cfg.noise_grid.len(),
                cfg.trials
            ));
            let rows = run_sweep(&cfg)?;
            let csv = sweep_csv(&rows, !no_timing);
            match out {
                Some(path) => fs::write(path, csv)?,
                None => print!("{csv}"),
            }
        }
        Command::Bcc {
            edges,
            complete,
            out,
        } => {
            let g = parse_edge_list(&fs::read_to_string(&edges)?, complete)?;
            log(format!("clustering {} + {} vertices", g.m(), g.n()));
            let res = bcc_cluster(&g)?;
            if let Some(path) = out {
                fs::write(path, res.clustering.to_csv())?;
            }
            print_json(&BccReport {
                disagreements: res.disagreements,
                clusters: res.clustering.num_clusters(),
            })?;
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("ONMF_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| format!("ONMF_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
