use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rsfade::harness::{
    emit_profile, emit_table, format_sci, render_csv, render_text, run_convergence, ConfigLayer, LadderEntry, Norm, OneOrMany,
    ProblemId, RunConfig,
};
use rsfade::verify;
use rsfade::{Result, SolverKind};

#[derive(Parser)]
#[command(name = "rsfade", version, about = "Riesz space fractional advection-dispersion solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single run; writes the solution profile at the requested times.
    Solve(Options),
    /// Crank-Nicolson convergence table over a refinement ladder.
    Converge(Options),
    /// Convergence table of the extrapolated solution.
    Rem(Options),
    /// Runs the property suites and prints pass/fail per suite.
    Verify {
        /// Also list every individual check.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Args)]
struct Options {
    /// example1, example2, example3, zero or file:<path>
    #[arg(long)]
    problem: Option<ProblemId>,
    /// Advection order(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Dispersion order(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    /// Space cells for `solve`, as a count or a step such as 1/100.
    #[arg(long)]
    m: Option<LadderEntry>,
    /// Refinement levels, e.g. 8,16,32 or 1/8,1/16.
    #[arg(long, value_delimiter = ',')]
    ladder: Option<Vec<LadderEntry>>,
    /// Final time.
    #[arg(long = "T")]
    t_final: Option<f64>,
    /// Time step as a multiple of h.
    #[arg(long)]
    tau_ratio: Option<f64>,
    #[arg(long)]
    norm: Option<Norm>,
    #[arg(long)]
    solver: Option<SolverArg>,
    #[arg(long)]
    cg_tol: Option<f64>,
    /// Jacobi-preconditioned CG.
    #[arg(long)]
    jacobi: bool,
    /// Output times for `solve`, comma separated.
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    /// CSV output path; a .txt table is written beside it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SolverArg {
    Dense,
    Cg,
}

impl Options {
    fn resolve(self, rem: bool) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => ConfigLayer::load(path)?,
            None => ConfigLayer::default(),
        };
        let cli = ConfigLayer {
            problem: self.problem,
            alpha: self.alpha.map(OneOrMany::Many),
            beta: self.beta.map(OneOrMany::Many),
            m: self.m,
            ladder: self.ladder,
            t_final: self.t_final,
            tau_ratio: self.tau_ratio,
            norm: self.norm,
            solver: self.solver.map(|s| match s {
                SolverArg::Dense => SolverKind::Dense,
                SolverArg::Cg => SolverKind::Cg,
            }),
            cg_tol: self.cg_tol,
            jacobi: self.jacobi.then_some(true),
            rem: Some(rem),
            times: self.times,
            out: self.out,
            threads: self.threads,
        };
        RunConfig::resolve(file.overlay(cli))
    }
}

fn init_threads(config: &RunConfig) -> Result<()> {
    if let Some(n) = config.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| rsfade::Error::Config(format!("cannot start {n} threads: {e}")))?;
    }
    Ok(())
}

fn solve(config: &RunConfig) -> Result<()> {
    let &(alpha, beta) = config
        .parameter_points()
        .first()
        .expect("validated configs have parameters");
    let problem = config.problem.build(alpha, beta)?;
    let grid = config.grid(config.m)?;
    let out = config.out.clone().unwrap_or_else(|| PathBuf::from("profile.csv"));
    let prof = emit_profile(&problem, &grid, &config.times, &config.solver, &out)?;
    println!(
        "{}  m = {}  N = {}  h = {:.6}  tau = {:.6}",
        problem.name(),
        grid.m(),
        grid.n_steps(),
        grid.h(),
        grid.tau()
    );
    for (t, peak) in prof.times.iter().zip(prof.peaks()) {
        println!("t = {t:<8} max u = {}", format_sci(peak));
    }
    if let Some(gap) = prof.max_gap() {
        println!("max |numeric - exact| = {}", format_sci(gap));
    }
    println!("profile written to {}", out.display());
    Ok(())
}

fn converge(config: &RunConfig) -> Result<()> {
    let report = run_convergence(config)?;
    print!("{}", render_text(&report));
    match &config.out {
        Some(path) => {
            let txt = emit_table(&report, path)?;
            println!("\ntable written to {} and {}", path.display(), txt.display());
        }
        None => print!("\n{}", render_csv(&report.table_rows())),
    }
    Ok(())
}

fn run_verify(verbose: bool) -> Result<bool> {
    let mut all = true;
    for report in verify::run_all()? {
        println!("{report}");
        for check in &report.checks {
            if verbose || !check.passed {
                println!("    {} {}: {}", if check.passed { "ok  " } else { "FAIL" }, check.name, check.detail);
            }
        }
        all &= report.passed();
    }
    Ok(all)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { verbose } => run_verify(verbose),
        Command::Solve(opts) => {
            let config = opts.resolve(false)?;
            init_threads(&config)?;
            solve(&config).map(|_| true)
        }
        Command::Converge(opts) => {
            let config = opts.resolve(false)?;
            init_threads(&config)?;
            converge(&config).map(|_| true)
        }
        Command::Rem(opts) => {
            let config = opts.resolve(true)?;
            init_threads(&config)?;
            converge(&config).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
