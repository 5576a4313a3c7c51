use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mixnorm_approx::algorithms::ApproxParams;
use mixnorm_approx::hard_instances::{lower_bound_at, Family, HardInstanceSpec, LowerBound};
use mixnorm_approx::harness::{
    self, render, selftest, AlgorithmKind, EstimateStudy, ExperimentConfig, Format, GapSettings, Report,
};
use mixnorm_approx::{mixed_norm, substream, Error, Exponent, InfoOracle, Matrix, Result, SpacePair};

#[derive(Parser)]
#[command(name = "mixapprox", version, about = "Randomized approximation in finite mixed-norm spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mixed norm of a matrix file ("N1 N2" header, then N1 rows of N2 reals).
    Norm {
        file: PathBuf,
        #[arg(long, default_value = "2")]
        p: Exponent,
        #[arg(long, default_value = "2")]
        u: Exponent,
    },
    /// Error of the single-row norm estimator against the sample size.
    Estimate {
        #[arg(long, default_value_t = 4096)]
        n2: usize,
        #[arg(long, default_value = "inf")]
        u: Exponent,
        #[arg(long, default_value = "1")]
        v: Exponent,
        /// Sample sizes.
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256,512,1024")]
        budgets: Vec<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// One algorithm at one budget, on a hard distribution or an input file.
    Approx {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value = "dispatch")]
        algorithm: AlgorithmKind,
        #[arg(long, default_value_t = 1)]
        measure: u8,
        #[arg(long)]
        m: Option<usize>,
        /// Approximate this matrix instead and print the output matrix.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Error over a budget grid with a log-log rate fit.
    Rates {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        budgets: Vec<usize>,
        #[arg(long, default_value = "dispatch")]
        algorithm: AlgorithmKind,
        #[arg(long, default_value_t = 1)]
        measure: u8,
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Adaptive versus non-adaptive error on the hidden-row distribution.
    Gap {
        #[arg(long, value_delimiter = ',', default_value = "1024,4096,16384")]
        budgets: Vec<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Exact average-case lower-bound value for families 1 to 4.
    LowerBound {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        measure: u8,
    },
    /// Quick invariant suite; exits with status 2 on any violation.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SpaceArgs {
    #[arg(long)]
    n1: usize,
    #[arg(long)]
    n2: usize,
    #[arg(long)]
    p: Exponent,
    #[arg(long)]
    q: Exponent,
    #[arg(long)]
    u: Exponent,
    #[arg(long)]
    v: Exponent,
}

impl SpaceArgs {
    fn space(&self) -> Result<SpacePair> {
        SpacePair::new(self.n1, self.n2, self.p, self.u, self.q, self.v)
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Error moment.
    #[arg(long, default_value_t = 1.0)]
    w: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Run trials on one thread.
    #[arg(long)]
    serial: bool,
}

impl RunArgs {
    fn emit(&self, report: &Report) -> Result<()> {
        match &self.out {
            Some(path) => harness::emit_report(report, path, self.format),
            None => write_stdout(&render(report, self.format)?),
        }
    }
}

fn write_stdout(text: &str) -> Result<()> {
    std::io::stdout()
        .write_all(text.as_bytes())
        .map_err(|source| Error::Io { path: "<stdout>".into(), source })
}

fn read_matrix(path: &PathBuf) -> Result<Matrix> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.clone(), source })?;
    Matrix::parse_text(&text)
}

fn config(
    sp: SpacePair,
    budgets: Vec<usize>,
    algorithm: AlgorithmKind,
    measure: u8,
    m: Option<usize>,
    run: &RunArgs,
) -> Result<ExperimentConfig> {
    let mut c = ExperimentConfig::new(sp, budgets, Family::from_id(measure)?, algorithm);
    c.m_override = m;
    c.trials = run.trials;
    c.w = run.w;
    c.seed = run.seed;
    c.parallel = !run.serial;
    c.validate()?;
    Ok(c)
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Norm { file, p, u } => {
            let f = read_matrix(&file)?;
            write_stdout(&format!("{}\n", mixed_norm(&f, p, u)))?;
        }
        Command::Estimate { n2, u, v, budgets, run } => {
            let mut study = EstimateStudy::half_ones(n2, u, v, budgets, run.trials, run.seed);
            study.parallel = !run.serial;
            run.emit(&harness::run_estimate_study(&study)?)?;
        }
        Command::Approx { space, budget, algorithm, measure, m, input, run } => {
            let sp = space.space()?;
            let c = config(sp, vec![budget], algorithm, measure, m, &run)?;
            match input {
                Some(path) => {
                    let f = read_matrix(&path)?;
                    if (f.n1(), f.n2()) != (sp.n1, sp.n2) {
                        return Err(Error::InvalidArgument("input shape does not match --n1/--n2".into()));
                    }
                    let params = ApproxParams::new(sp, budget, c.m())?;
                    let mut oracle = InfoOracle::new(&f);
                    let out = algorithm.run(&mut oracle, &params, &mut substream(run.seed, "approx", 0))?;
                    eprintln!("queries: {}", oracle.count());
                    eprintln!("error: {}", mixed_norm(&f.sub(&out), sp.q, sp.v));
                    let text = out.to_text();
                    match &run.out {
                        Some(path) => fs::write(path, text).map_err(|source| Error::Io { path: path.clone(), source })?,
                        None => write_stdout(&text)?,
                    }
                }
                None => run.emit(&harness::mc_error(&c)?)?,
            }
        }
        Command::Rates { space, budgets, algorithm, measure, m, run } => {
            let c = config(space.space()?, budgets, algorithm, measure, m, &run)?;
            let report = harness::run_rates(&c)?;
            if let Some(fit) = &report.fit {
                eprintln!("slope {:.4} intercept {:.4} r2 {:.4}", fit.slope, fit.intercept, fit.r2);
            }
            run.emit(&report)?;
        }
        Command::Gap { budgets, m, run } => {
            let settings = GapSettings { trials: run.trials, seed: run.seed, m_override: m, parallel: !run.serial };
            let report = harness::run_gap_series(&budgets, settings)?;
            for g in &report.gap {
                eprintln!(
                    "n={} ratio {:.4e} +- {:.2e} (threshold {:.3}, best non-adaptive {})",
                    g.n, g.ratio, g.ratio_std_error, g.threshold, g.best_nonadaptive
                );
            }
            eprintln!("note: {}", harness::COMPETITOR_NOTE);
            run.emit(&report)?;
        }
        Command::LowerBound { space, budget, measure } => {
            let sp = space.space()?;
            let spec = HardInstanceSpec::new(Family::from_id(measure)?, sp, budget)?;
            let n = spec.effective_budget();
            let text = match lower_bound_at(&spec, n)? {
                LowerBound::SmallestAtom { atoms, value } => {
                    format!("atoms {atoms}\nbudget {n}\nsmallest-atom bound {value}\n")
                }
                LowerBound::Rademacher { atoms, subset_size, value } => {
                    format!("atoms {atoms}\nbudget {n}\nsubset size {subset_size}\nrademacher bound {value}\n")
                }
                LowerBound::Inapplicable { atoms } => format!("atoms {atoms}\nbudget {n}\ninapplicable (atoms <= 4n)\n"),
            };
            write_stdout(&text)?;
        }
        Command::Selftest { seed } => {
            let checks = selftest::run(seed);
            let mut failed = false;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed |= !c.passed;
            }
            if failed {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
