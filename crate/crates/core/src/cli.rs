//! Command-line front end. [`run`] takes the arguments and output streams so
//! the binary stays a one-line wrapper and tests can capture output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, write_csv, BenchSpec};
use crate::engine::{EngineConfig, RunStats};
use crate::error::{Error, Result};
use crate::generator::{gen_instance, NetworkParams, QueryParams, QUERY_SEED_OFFSET, RNG_ALGORITHM};
use crate::graph::Ordering;
use crate::io::{format_probability, read_dimacs, read_network, serialize_cnf_with, serialize_network_with};
use crate::model::{BeliefNetwork, CnfFormula, VariableId};
use crate::resolution::IBound;
use crate::solver::{Algorithm, Solver};
use crate::transforms::belief_given_cnf;

#[derive(Parser, Debug)]
#[command(
    name = "beliefcnf",
    version,
    about = "Probability of CNF queries over belief networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print P(φ) for a network and a DIMACS formula.
    Eval(EvalArgs),
    /// Print P(X | φ) for one variable.
    Belief(BeliefArgs),
    /// Write a random network and query as <prefix>.net and <prefix>.cnf.
    Gen(GenArgs),
    /// Run a batch described by a TOML spec and write CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgArg {
    Cpe,
    #[value(name = "cpe-d")]
    CpeD,
    Hidden,
    Brute,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Cpe => Algorithm::Cpe,
            AlgArg::CpeD => Algorithm::CpeD,
            AlgArg::Hidden => Algorithm::Hidden,
            AlgArg::Brute => Algorithm::Brute,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    MinDegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StatsFormat {
    Human,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long)]
    net: PathBuf,
    #[arg(long)]
    cnf: PathBuf,
    #[arg(long, value_enum, default_value = "cpe")]
    alg: AlgArg,
    /// Resolvent size bound, or `unbounded`.
    #[arg(long, default_value = "0")]
    i_bound: IBound,
    #[arg(long, value_enum, conflicts_with = "order_file")]
    order: Option<OrderArg>,
    /// One variable index per line, first line is the first bucket.
    #[arg(long)]
    order_file: Option<PathBuf>,
    /// Keep the static bucket order instead of promoting unit buckets.
    #[arg(long)]
    no_reorder: bool,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum)]
    stats: Option<StatsFormat>,
}

#[derive(Args, Debug)]
struct BeliefArgs {
    #[command(flatten)]
    solver: SolverArgs,
    /// Variable index as used in the network file.
    #[arg(long)]
    var: usize,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    vars: usize,
    #[arg(long, default_value_t = 3)]
    max_family: usize,
    #[arg(long, default_value_t = 0.0)]
    det_frac: f64,
    #[arg(long, default_value_t = 0)]
    clauses: usize,
    #[arg(long, default_value_t = 0)]
    obs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "instance")]
    out_prefix: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    csv: PathBuf,
}

/// Runs the command line and returns the process exit code: 0 on success
/// (a zero probability included), 1 on bad input files, 2 on usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let result = match cli.command {
        Command::Eval(a) => eval(a, out, err),
        Command::Belief(a) => belief(a, out, err),
        Command::Gen(a) => gen(a, out),
        Command::Bench(a) => bench(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidParameter(_) => 2,
                _ => 1,
            }
        }
    }
}

fn load(args: &SolverArgs, err: &mut dyn Write) -> Result<(BeliefNetwork, CnfFormula, Solver)> {
    let net = read_network(&args.net)?;
    let file = read_dimacs(&args.cnf)?;
    for w in &file.warnings {
        let _ = writeln!(err, "warning: {}: {w}", args.cnf.display());
    }
    net.check_formula(&file.formula)?;
    let mut cfg = EngineConfig::default().with_i_bound(args.i_bound);
    if args.no_reorder {
        cfg = cfg.without_reorder();
    }
    let mut solver = Solver::new(args.alg.into()).with_config(cfg);
    if let Some(path) = &args.order_file {
        let o = Ordering::read(path)?;
        if o.len() != net.len() {
            return Err(Error::OrderingMismatch {
                expected: net.len(),
                found: o.len(),
            });
        }
        solver = solver.with_ordering(o);
    }
    Ok((net, file.formula, solver))
}

fn eval(args: EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let (net, phi, solver) = load(&args.solver, err)?;
    let (p, stats) = if args.trace {
        let run = solver.trace(&net, &phi)?;
        writeln!(out, "{}", format_probability(run.probability))?;
        for ev in &run.trace {
            writeln!(out, "{ev}")?;
        }
        (run.probability, run.stats)
    } else {
        let (p, stats) = solver.evaluate(&net, &phi)?;
        writeln!(out, "{}", format_probability(p))?;
        (p, stats)
    };
    debug_assert_eq!(p, stats.result);
    if let Some(format) = args.stats {
        write_stats(format, solver.algorithm, args.solver.i_bound, &stats, out)?;
    }
    Ok(())
}

fn write_stats(format: StatsFormat, alg: Algorithm, i: IBound, s: &RunStats, out: &mut dyn Write) -> Result<()> {
    let fields: [(&str, String); 11] = [
        ("alg", alg.name().to_string()),
        ("i_bound", i.to_string()),
        ("time_s", format!("{:.6}", s.seconds())),
        ("mf", s.mf.to_string()),
        ("C", s.derived_clauses.to_string()),
        ("U", s.derived_units.to_string()),
        ("F", s.extracted.to_string()),
        ("O", s.observations.to_string()),
        ("result", format_probability(s.result)),
        ("static_width", s.static_width.to_string()),
        ("processed_width", s.processed_width.to_string()),
    ];
    match format {
        StatsFormat::Human => {
            for (k, v) in &fields {
                writeln!(out, "{k:<16}{v}")?;
            }
        }
        StatsFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let io_err = |e: csv::Error| Error::Io(e.into());
            w.write_record(fields.iter().map(|(k, _)| *k)).map_err(io_err)?;
            w.write_record(fields.iter().map(|(_, v)| v.as_str())).map_err(io_err)?;
            w.flush()?;
        }
        StatsFormat::Json => {
            let mut obj = serde_json::to_value(s).map_err(|e| Error::Io(e.into()))?;
            obj["alg"] = alg.name().into();
            obj["i_bound"] = serde_json::to_value(i).map_err(|e| Error::Io(e.into()))?;
            writeln!(out, "{obj}")?;
        }
    }
    Ok(())
}

fn belief(args: BeliefArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let (net, phi, solver) = load(&args.solver, err)?;
    let x = VariableId(args.var);
    if !net.contains(x) {
        return Err(Error::UnknownVariable(x));
    }
    match belief_given_cnf(&net, &phi, x, &solver)? {
        Some([p0, p1]) => {
            writeln!(out, "{x}=0 {}", format_probability(p0))?;
            writeln!(out, "{x}=1 {}", format_probability(p1))?;
        }
        None => writeln!(out, "undefined: the formula has probability 0")?,
    }
    Ok(())
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Result<()> {
    let np = NetworkParams {
        vars: args.vars,
        max_family: args.max_family,
        det_frac: args.det_frac,
    };
    let qp = QueryParams {
        clauses: args.clauses,
        observations: args.obs,
    };
    let (net, phi) = gen_instance(np, qp, args.seed)?;
    let header = vec![
        "generated by beliefcnf gen".to_string(),
        format!("rng {RNG_ALGORITHM}"),
        format!("seed {}", args.seed),
        format!("query-seed {}", args.seed ^ QUERY_SEED_OFFSET),
        format!(
            "vars {} max-family {} det-frac {} clauses {} obs {}",
            args.vars, args.max_family, args.det_frac, args.clauses, args.obs
        ),
    ];
    let net_path = with_extension(&args.out_prefix, "net");
    let cnf_path = with_extension(&args.out_prefix, "cnf");
    std::fs::write(&net_path, serialize_network_with(&net, &header))?;
    std::fs::write(&cnf_path, serialize_cnf_with(&phi, net.len(), &header))?;
    writeln!(out, "{}", net_path.display())?;
    writeln!(out, "{}", cnf_path.display())?;
    Ok(())
}

fn bench(args: BenchArgs, out: &mut dyn Write) -> Result<()> {
    let spec = BenchSpec::read(&args.spec)?;
    let base = args.spec.parent().unwrap_or(Path::new("."));
    let rows = run_bench(&spec, base)?;
    write_csv(&rows, std::fs::File::create(&args.csv)?)?;
    writeln!(out, "{} rows written to {}", rows.len(), args.csv.display())?;
    Ok(())
}
