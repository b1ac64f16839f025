//! `palette`: experiments with online dual edge coloring.
//!
//! Exit status is 0 on success, 1 when a bound or charging verdict is
//! violated, and 2 on usage errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use palette_core::graph::parse_edge_list;
use palette_core::harness::{
    cmd_exhaustive, cmd_nf_order, cmd_opt, cmd_run, cmd_verify, cmd_yao, write_construction_list,
    write_reports, Construction, ConstructionParams, Contender, ExhaustiveClass,
    ExperimentConfig, InstanceSource, VerifyStrategy,
};
use palette_core::scalar::parse_exact;
use palette_core::{AlgorithmId, Error};

#[derive(Parser)]
#[command(name = "palette", version, about = "Online dual edge coloring experiments")]
struct Cli {
    /// Base seed; trial t uses an independent stream derived from (seed, t).
    #[arg(long, global = true, env = "PALETTE_SEED", default_value_t = 1)]
    seed: u64,

    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Ff,
    Nf,
    Rp,
    /// every fair decision sequence (exhaustive only)
    AnyFair,
}

#[derive(Args)]
struct AlgOpts {
    #[arg(long, value_enum, default_value = "ff")]
    alg: AlgArg,

    /// Parity bias of rp, in [1/2, 1]; decimals and fractions accepted.
    #[arg(long)]
    p: Option<String>,
}

#[derive(Args, Default)]
struct ConstructionOpts {
    /// Construction name; see `list`.
    #[arg(long)]
    adv: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "N")]
    big_n: Option<usize>,
    #[arg(long)]
    b: Option<u32>,
    /// Edge list for `edge-list`.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Play an algorithm against a construction.
    Run {
        #[command(flatten)]
        alg: AlgOpts,
        #[command(flatten)]
        construction: ConstructionOpts,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Also write the trace of trial 0.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Sample the random path distribution and compare with its bound.
    Yao {
        #[arg(long)]
        b: u32,
        /// Algorithms to compare.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "ff,nf")]
        alg: Vec<AlgArg>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
    },
    /// Every reveal order of every small path or tree.
    Exhaustive {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        max_edges: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        alg: AlgOpts,
    },
    /// Run a charging strategy over random or constructed instances.
    Verify {
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        #[command(flatten)]
        alg: AlgOpts,
        #[command(flatten)]
        construction: ConstructionOpts,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Random instances when no construction is given.
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 14)]
        max_edges: usize,
        /// Also write the per-edge verdict of the first failing (or only) instance.
        #[arg(long)]
        verdict: Option<PathBuf>,
    },
    /// Optimal coloring of an edge list.
    Opt {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Reveal order making Next-Fit reproduce a coloring (third column).
    NfOrder {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Constructions and their parameters.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Path,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    FfTree,
    FairTree,
    RpPath,
}

enum Outcome {
    Ok,
    Violation,
}

fn algorithm(alg: AlgArg, p: Option<&str>) -> Result<AlgorithmId, Error> {
    Ok(match alg {
        AlgArg::Ff => AlgorithmId::FirstFit,
        AlgArg::Nf => AlgorithmId::NextFit,
        AlgArg::Rp => {
            let p = p.ok_or_else(|| Error::Parameter("rp needs --p".into()))?;
            let p = parse_exact(p)
                .ok_or_else(|| Error::Parameter(format!("bad --p '{p}'")))?;
            AlgorithmId::RandomParity(*p.numer() as f64 / *p.denom() as f64)
        }
        AlgArg::AnyFair => {
            return Err(Error::Parameter("any-fair is only available to exhaustive".into()))
        }
    })
}

fn read_rows(path: &Path) -> Result<Vec<(usize, usize, Vec<String>)>, Error> {
    parse_edge_list(BufReader::new(File::open(path)?))
}

fn construction(opts: &ConstructionOpts) -> Result<Option<Construction>, Error> {
    let Some(name) = &opts.adv else {
        return Ok(None);
    };
    let edges = match &opts.input {
        Some(path) => Some(read_rows(path)?.into_iter().map(|r| (r.0, r.1)).collect()),
        None => None,
    };
    let params = ConstructionParams {
        m: opts.m,
        n: opts.n,
        big_n: opts.big_n,
        b: opts.b,
        edges,
    };
    Construction::from_name(name, &params).map(Some)
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn execute(cli: Cli) -> Result<Outcome, Error> {
    let mut out = output(&cli.out)?;
    let outcome = match cli.command {
        Command::Run {
            alg,
            construction: c,
            k,
            trials,
            trace,
        } => {
            let construction = construction(&c)?
                .ok_or_else(|| Error::Parameter("run needs --adv".into()))?;
            let cfg = ExperimentConfig {
                algorithm: algorithm(alg.alg, alg.p.as_deref())?,
                construction,
                k,
                trials,
                seed: cli.seed,
            };
            let report = cmd_run(&cfg)?;
            write_reports(&mut out, std::slice::from_ref(&report))?;
            if let Some(path) = trace {
                let (t, _) = cfg.trace(0)?;
                t.write_csv(BufWriter::new(File::create(path)?))?;
            }
            if report.violated() {
                Outcome::Violation
            } else {
                Outcome::Ok
            }
        }
        Command::Yao { b, alg, p, trials } => {
            let algs = alg
                .into_iter()
                .map(|a| algorithm(a, p.as_deref()))
                .collect::<Result<Vec<_>, _>>()?;
            let reports = cmd_yao(b, &algs, trials, cli.seed)?;
            write_reports(&mut out, &reports)?;
            if reports.iter().any(|r| r.violated()) {
                Outcome::Violation
            } else {
                Outcome::Ok
            }
        }
        Command::Exhaustive {
            class,
            max_edges,
            k,
            alg,
        } => {
            let who = match alg.alg {
                AlgArg::AnyFair => Contender::AnyFair,
                a => Contender::Algorithm(algorithm(a, alg.p.as_deref())?),
            };
            let class = match class {
                ClassArg::Path => ExhaustiveClass::Path,
                ClassArg::Tree => ExhaustiveClass::Tree,
            };
            let summary = cmd_exhaustive(class, max_edges, k, &who)?;
            summary.write_csv(&mut out)?;
            for f in summary.charge_failures.iter().take(5) {
                eprintln!("charging failed: {f}");
            }
            if summary.passed() {
                Outcome::Ok
            } else {
                Outcome::Violation
            }
        }
        Command::Verify {
            strategy,
            alg,
            construction: c,
            k,
            trials,
            max_edges,
            verdict,
        } => {
            let strategy = match strategy {
                StrategyArg::FfTree => VerifyStrategy::FfTree,
                StrategyArg::FairTree => VerifyStrategy::FairTree,
                StrategyArg::RpPath => VerifyStrategy::RpPath,
            };
            let source = match construction(&c)? {
                Some(c) => InstanceSource::Construction(c),
                None => InstanceSource::Random {
                    count: trials,
                    max_edges,
                },
            };
            let p = match &alg.p {
                Some(text) => Some(
                    parse_exact(text).ok_or_else(|| Error::Parameter(format!("bad --p '{text}'")))?,
                ),
                None => None,
            };
            let id = match (strategy, alg.alg) {
                (VerifyStrategy::RpPath, _) | (VerifyStrategy::FfTree, _) => AlgorithmId::FirstFit,
                (_, a) => algorithm(a, alg.p.as_deref())?,
            };
            let summary = cmd_verify(strategy, &source, k, &id, p, cli.seed)?;
            summary.write_csv(&mut out)?;
            for r in &summary.refused {
                eprintln!("refused: {r}");
            }
            if let Some(path) = verdict {
                let pick = summary
                    .reports
                    .iter()
                    .find(|r| !r.passed())
                    .or(summary.reports.first());
                if let Some(r) = pick {
                    r.write_csv(BufWriter::new(File::create(path)?))?;
                }
            }
            if summary.passed() {
                Outcome::Ok
            } else {
                Outcome::Violation
            }
        }
        Command::Opt { input, k } => {
            let edges: Vec<_> = read_rows(&input)?.into_iter().map(|r| (r.0, r.1)).collect();
            let (g, w) = cmd_opt(&edges, k)?;
            w.write_csv(&g, &mut out)?;
            eprintln!("opt = {}", w.opt_count);
            Outcome::Ok
        }
        Command::NfOrder { input, k } => {
            let seq = cmd_nf_order(&read_rows(&input)?, k)?;
            palette_core::graph::write_edge_list(&mut out, &seq.edges)?;
            Outcome::Ok
        }
        Command::List => {
            write_construction_list(&mut out)?;
            Outcome::Ok
        }
    };
    out.flush()?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
