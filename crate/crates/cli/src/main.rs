//! `nccluster`: compute and verify non-commutative rank-2 cluster variables.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 failed check, 3
//! enumeration budget exceeded. Results go to stdout, diagnostics to stderr.

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nccluster::collect::{Admissible, CollectionView, Enumeration, DEFAULT_BUDGET};
use nccluster::oracle::{comm_cluster, verify_abelian, verify_main, verify_zrec, VerifyMode};
use nccluster::weight::x_var_with;
use nccluster::{Cheb, DyckPath, Error, Family, Params, Verdict, VerifyConfig, XVarOptions};

#[derive(Parser)]
#[command(name = "nccluster", version, about = "Non-commutative rank-2 cluster variables via Dyck paths")]
struct Cli {
    /// Maximum number of collections to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads for enumeration.
    #[arg(long, global = true, env = "NCCLUSTER_THREADS", default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    r1: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    r2: u32,
}

impl ParamArgs {
    fn params(self) -> Params {
        Params::new(self.r1, self.r2).expect("clap enforces r >= 1")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Table of U_{k,odd} and U_{k,even} for -2 <= k <= kmax.
    Cheb {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        kmax: i64,
    },
    /// The maximal Dyck path D_n.
    Dyck {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long, value_enum, default_value_t = PathFormat::Json)]
        format: PathFormat,
    },
    /// Every subpath alpha(i, k) of D_n with its label.
    Subpaths {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
    },
    /// Collections in a family, one JSON object per line.
    Collections {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        /// F, Ftilde or Tge:<u>.
        #[arg(long, default_value = "F")]
        family: String,
        #[arg(long)]
        count_only: bool,
    },
    /// x_{n-1} as a sum over F(D_n).
    Xvar {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long, value_enum, default_value_t = PolyFormat::Json)]
        format: PolyFormat,
        #[arg(long, value_enum, default_value_t = Check::None)]
        check: Check,
    },
    /// Compare the model with the oracles.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        dim: u64,
        #[arg(long, default_value_t = 2_147_483_647)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "both")]
        mode: String,
    },
    /// Time the computation of x_{n-1}.
    Bench {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PathFormat {
    Ascii,
    Json,
    Tikz,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyFormat {
    Json,
    Latex,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Positivity,
    Abelian,
    None,
}

enum Failure {
    Usage(String),
    Check(String),
    Budget(u64),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EnumerationBudgetExceeded { budget } => Failure::Budget(budget),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

#[derive(Serialize)]
struct ChebRow {
    k: i64,
    odd: String,
    even: String,
}

#[derive(Serialize)]
struct ChebJson {
    r1: u32,
    r2: u32,
    rows: Vec<ChebRow>,
}

#[derive(Serialize)]
struct DyckJson {
    steps: Vec<String>,
    r1: u32,
    r2: u32,
    n: u32,
    width: i64,
    height: i64,
    edges: usize,
    /// Vertex indices of nu_0, nu_1, ...
    nu: Vec<usize>,
}

#[derive(Serialize)]
struct SubpathJson {
    i: usize,
    k: usize,
    label: String,
}

#[derive(Serialize)]
struct CountJson<'a> {
    family: &'a str,
    count: u64,
}

#[derive(Serialize)]
struct BenchJson {
    r1: u32,
    r2: u32,
    n: u32,
    terms: usize,
    collections: String,
    threads: usize,
    millis: u128,
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    let s = serde_json::to_string(value).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn options(cli: &Cli) -> XVarOptions {
    XVarOptions { budget: cli.budget, threads: cli.threads.max(1), ..XVarOptions::default() }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Cheb { params, kmax } => {
            if *kmax < -2 {
                return Err(Failure::Usage(format!("kmax = {kmax} is below -2")));
            }
            let table = Cheb::build(params.params(), *kmax);
            let rows = table
                .rows()
                .map(|(k, odd, even)| ChebRow { k, odd: odd.to_string(), even: even.to_string() })
                .collect();
            print_json(&ChebJson { r1: params.r1, r2: params.r2, rows })
        }
        Command::Dyck { params, n, format } => {
            let path = DyckPath::build_greedy(params.params(), *n)?;
            match format {
                PathFormat::Ascii => print!("{}", path.render_ascii()),
                PathFormat::Tikz => print!("{}", path.render_tikz()),
                PathFormat::Json => print_json(&DyckJson {
                    steps: path.steps().iter().map(|s| s.letter().to_string()).collect(),
                    r1: params.r1,
                    r2: params.r2,
                    n: *n,
                    width: path.width(),
                    height: path.height(),
                    edges: path.len(),
                    nu: (0..=path.max_nu()).map(|j| path.nu_vertex(j)).collect(),
                })?,
            }
            Ok(())
        }
        Command::Subpaths { params, n } => {
            let path = DyckPath::build_greedy(params.params(), *n)?;
            let adm = Admissible::new(&path)?;
            let list: Vec<SubpathJson> = adm
                .subpaths()
                .into_iter()
                .map(|c| SubpathJson { i: c.i, k: c.k, label: c.label.to_string() })
                .collect();
            print_json(&list)
        }
        Command::Collections { params, n, family, count_only } => {
            let fam: Family = family.parse()?;
            let path = DyckPath::build_greedy(params.params(), *n)?;
            let adm = Admissible::new(&path)?;
            let e = Enumeration::new(&adm, fam).with_budget(cli.budget);
            if *count_only {
                let count = e.count()?;
                return print_json(&CountJson { family, count });
            }
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let mut io_err = None;
            e.for_each(&mut |v: &CollectionView<'_, '_>| {
                if io_err.is_none() {
                    if let Err(err) = writeln!(out, "{}", v.to_collection().to_json()) {
                        io_err = Some(err);
                    }
                }
            })?;
            if let Some(err) = io_err {
                return Err(err.into());
            }
            out.flush()?;
            Ok(())
        }
        Command::Xvar { params, n, format, check } => {
            let p = params.params();
            let x = x_var_with(p, *n, &options(cli))?;
            match format {
                PolyFormat::Json => println!("{}", x.to_json()),
                PolyFormat::Latex => println!("{}", x.to_latex()),
                PolyFormat::Text => print!("{}", x.to_text()),
            }
            match check {
                Check::None => Ok(()),
                Check::Positivity if x.is_nonneg() => Ok(()),
                Check::Positivity => Err(Failure::Check("negative coefficient".into())),
                Check::Abelian => {
                    if x.abelianize() == comm_cluster(p, n - 1)? {
                        Ok(())
                    } else {
                        Err(Failure::Check("abelianization differs from the commutative recurrence".into()))
                    }
                }
            }
        }
        Command::Verify { params, n, trials, dim, prime, seed, mode } => {
            let p = params.params();
            let mode: VerifyMode = mode.parse()?;
            let cfg = VerifyConfig {
                trials: *trials,
                dim: usize::try_from(*dim).map_err(|e| Failure::Usage(e.to_string()))?,
                prime: *prime,
                seed: *seed,
                ..VerifyConfig::default()
            };
            let opts = options(cli);
            let verdict = match mode {
                VerifyMode::Matrix => verify_main(p, *n, &cfg, &opts)?,
                VerifyMode::Abelian => verify_abelian(p, *n, &cfg, &opts)?,
                VerifyMode::Zrec => verify_zrec(p, *n, &cfg, &opts)?,
                VerifyMode::Both => {
                    let m = verify_main(p, *n, &cfg, &opts)?;
                    let a = verify_abelian(p, *n, &cfg, &opts)?;
                    Verdict { mode: VerifyMode::Both, pass: m.pass && a.pass, ..m }
                }
            };
            println!("{}", verdict.to_json());
            if verdict.pass {
                Ok(())
            } else {
                Err(Failure::Check(format!("{:?} verification failed", verdict.mode)))
            }
        }
        Command::Bench { params, n } => {
            let opts = options(cli);
            let start = Instant::now();
            let x = x_var_with(params.params(), *n, &opts)?;
            let millis = start.elapsed().as_millis();
            print_json(&BenchJson {
                r1: params.r1,
                r2: params.r2,
                n: *n,
                terms: x.len(),
                collections: x.sum_of_coeffs().to_string(),
                threads: opts.threads,
                millis,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(budget)) => {
            eprintln!("error: enumeration budget of {budget} collections exceeded");
            ExitCode::from(3)
        }
    }
}
