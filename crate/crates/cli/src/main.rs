mod bench;
mod plot;
mod record;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fwsfm::instance::{parse_instance, Family, Instance};
use fwsfm::sfm::{minimize, SfmOptions, SfmResult};
use fwsfm::wolfe::{write_trace_csv, Termination};
use serde::Serialize;

use bench::{termination_name, RunSettings};
use plot::PlotKind;
use record::BenchRecord;
use report::Status;

/// Exact submodular minimization by the Fujishige–Wolfe min-norm-point method.
#[derive(Parser, Debug)]
#[command(name = "fwsfm", version)]
struct Cli {
    /// Worker threads for benchmark trials and enumeration.
    #[arg(long, global = true, env = "FWSFM_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Jsonl,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// Termination tolerance; defaults to 1/(4n) for integer-valued
    /// instances.
    #[arg(long)]
    epsilon: Option<f64>,

    /// Cap on major plus minor cycles.
    #[arg(long, default_value_t = 1_000_000)]
    max_iter: usize,
}

impl SolverArgs {
    fn options(&self) -> Result<SfmOptions> {
        let opts = SfmOptions::default().max_iterations(self.max_iter);
        Ok(match self.epsilon {
            Some(e) if !(e.is_finite() && e >= 0.0) => bail!("--epsilon must be finite and nonnegative"),
            Some(e) => opts.epsilon(e),
            None => opts,
        })
    }

    fn settings(&self, timing: bool) -> Result<RunSettings> {
        self.options()?;
        Ok(RunSettings {
            epsilon: self.epsilon,
            max_iter: self.max_iter,
            timing,
        })
    }
}

#[derive(Args, Debug, Clone)]
struct BenchOutput {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Leave the wall-time column empty so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimize the function described by an instance file.
    Solve {
        path: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the iteration trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the result here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Erdős–Rényi s-t cut suite; sizes count graph vertices.
    BenchEr {
        #[arg(long, default_value_t = 10)]
        n_min: usize,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        n_step: usize,
        #[arg(long, default_value_t = 0.8)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        max_capacity: u32,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: BenchOutput,
    },
    /// Path graphs across capacity scales.
    BenchScaling {
        #[arg(long, default_value_t = 24)]
        path_n: usize,
        /// Comma-separated capacity multipliers.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1,10,100,1000,10000,100000,1000000"
        )]
        scales: Vec<u64>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: BenchOutput,
    },
    /// Iwata test functions over a range of sizes.
    BenchIwata {
        #[arg(long, default_value_t = 8)]
        n_min: usize,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        #[arg(long, default_value_t = 8)]
        n_step: usize,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: BenchOutput,
    },
    /// Exhaustive checks of a small instance.
    Verify {
        path: PathBuf,
        /// Largest ground set to enumerate.
        #[arg(long, default_value_t = 20)]
        n_limit: usize,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Render a benchmark CSV as an SVG chart.
    Plot {
        csv: PathBuf,
        #[arg(long, value_enum, default_value_t = PlotKind::Iterations)]
        kind: PlotKind,
        /// Defaults to the CSV path with an `.svg` extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Machine-readable rendering of a solve.
#[derive(Serialize)]
struct SolveReport<'a> {
    instance: String,
    family: String,
    n: usize,
    /// Labels of `min_set` (1-based; DIMACS vertex ids for graphs).
    labels: Vec<usize>,
    raw_min_value: f64,
    raw_lower_bound: f64,
    certified_exact: bool,
    #[serde(flatten)]
    result: &'a SfmResult,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Solve {
            path,
            solver,
            format,
            trace,
            out,
        } => solve(&path, &solver, format, trace.as_deref(), out.as_deref()),
        Command::BenchEr {
            n_min,
            n_max,
            n_step,
            p,
            max_capacity,
            trials,
            seed,
            solver,
            output,
        } => {
            if n_min < 2 {
                bail!("--n-min must be at least 2 (the terminals)");
            }
            let sizes = size_range(n_min, n_max, n_step)?;
            let settings = solver.settings(!output.no_timing)?;
            let rows = bench::erdos_renyi(&sizes, p, max_capacity, trials, seed, &settings)?;
            let notes = vec![
                format!("suite er: p = {p}, capacities 1..={max_capacity}, {trials} trials per size, seed {seed}"),
                "n is the ground-set size (graph vertices minus the two terminals)".to_string(),
                "desk-scale sizes; the source experiments do not state node or trial counts".to_string(),
            ];
            emit(&output, &notes, &rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BenchScaling {
            path_n,
            scales,
            solver,
            output,
        } => {
            let settings = solver.settings(!output.no_timing)?;
            let rows = bench::scaling(path_n, &scales, &settings)?;
            let notes = vec![format!(
                "suite scaling: path graph with {path_n} inner vertices, scales {scales:?}"
            )];
            emit(&output, &notes, &rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BenchIwata {
            n_min,
            n_max,
            n_step,
            solver,
            output,
        } => {
            let sizes = size_range(n_min.max(1), n_max, n_step)?;
            let settings = solver.settings(!output.no_timing)?;
            let rows = bench::iwata(&sizes, &settings)?;
            let notes = vec![
                "suite iwata: f(S) = |S|(n-|S|) - sum_{j in S}(5j - 2n)".to_string(),
                "desk-scale sizes up to n = 64".to_string(),
            ];
            emit(&output, &notes, &rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            path,
            n_limit,
            solver,
        } => {
            let inst = load(&path)?;
            let checks = report::verify(&inst.oracle()?, n_limit, &solver.options()?)?;
            for c in &checks {
                println!("{c}");
            }
            Ok(if checks.iter().any(|c| c.status == Status::Fail) {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Plot { csv, kind, out } => {
            let file = fs::File::open(&csv).with_context(|| format!("opening {}", csv.display()))?;
            let rows = record::read_csv(file).with_context(|| format!("reading {}", csv.display()))?;
            let svg = plot::render(&rows, kind)?;
            let out = out.unwrap_or_else(|| csv.with_extension("svg"));
            fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) -> Result<()> {
    if let Some(k) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: Option<usize>) -> Result<()> {
    Ok(())
}

fn size_range(lo: usize, hi: usize, step: usize) -> Result<Vec<usize>> {
    if step == 0 || lo > hi {
        bail!("empty size range {lo}..={hi} step {step}");
    }
    Ok((lo..=hi).step_by(step).collect())
}

fn load(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(output: &BenchOutput, notes: &[String], rows: &[BenchRecord]) -> Result<()> {
    let mut w = open_out(output.out.as_deref())?;
    match output.format {
        Format::Csv => record::write_csv(&mut w, notes, rows)?,
        Format::Jsonl => record::write_jsonl(&mut w, rows)?,
        Format::Text => record::write_table(&mut w, rows)?,
    }
    w.flush()?;
    Ok(())
}

fn solve(
    path: &Path,
    solver: &SolverArgs,
    format: Format,
    trace: Option<&Path>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let inst = load(path)?;
    let oracle = inst.oracle()?;
    let labels = inst.labels()?;
    let res = minimize(&oracle, &solver.options()?)?;
    if let Some(p) = trace {
        let file = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
        write_trace_csv(&res.trace, io::BufWriter::new(file))?;
    }

    let certified = oracle.is_integer_valued() && res.is_certified_exact();
    let set_labels: Vec<usize> = res.min_set.iter().map(|&i| labels[i]).collect();
    let family = inst.family();
    let mut w = open_out(out)?;
    match format {
        Format::Text => {
            let value_name = if family == Family::Cut { "min cut" } else { "min value" };
            let shown: Vec<String> = set_labels.iter().map(|l| l.to_string()).collect();
            writeln!(w, "instance: {} ({family}, n = {})", path.display(), oracle.n())?;
            writeln!(w, "min set: {{{}}}", shown.join(", "))?;
            writeln!(w, "{value_name}: {}", res.raw_min_value())?;
            writeln!(w, "lower bound: {}", res.lower_bound + res.offset)?;
            writeln!(w, "gap: {:e} (bound 2n·ε = {:e})", res.gap, 2.0 * oracle.n() as f64 * res.epsilon_used)?;
            writeln!(w, "certified exact: {}", if certified { "yes" } else { "no" })?;
            writeln!(w, "epsilon: {:e}", res.epsilon_used)?;
            writeln!(
                w,
                "iterations: {} ({} major, {} minor)",
                res.iterations, res.major_cycles, res.minor_cycles
            )?;
            writeln!(w, "oracle calls: {}", res.eo_calls)?;
            writeln!(w, "termination: {}", termination_name(res.termination))?;
        }
        Format::Jsonl => {
            let report = SolveReport {
                instance: path.display().to_string(),
                family: family.to_string(),
                n: oracle.n(),
                labels: set_labels,
                raw_min_value: res.raw_min_value(),
                raw_lower_bound: res.lower_bound + res.offset,
                certified_exact: certified,
                result: &res,
            };
            serde_json::to_writer(&mut w, &report)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let row = BenchRecord {
                id: path.display().to_string(),
                family: family.to_string(),
                n: oracle.n(),
                f_max: oracle.compute_f(),
                epsilon: res.epsilon_used,
                major: res.major_cycles,
                minor: res.minor_cycles,
                total: res.iterations,
                eo_calls: res.eo_calls,
                wall_ms: None,
                min_value: res.raw_min_value(),
                lower_bound: res.lower_bound + res.offset,
                gap: res.gap,
                termination: termination_name(res.termination).to_string(),
                reference: None,
            };
            record::write_csv(&mut w, &[], &[row])?;
        }
    }
    w.flush()?;

    let uncertified = oracle.is_integer_valued() && !certified;
    Ok(if res.termination == Termination::IterationCap || uncertified {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}
