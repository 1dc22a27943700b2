//! `wreath`: exact word-measure expectations on wreath products, primitivity
//! data, oracle checks and Schreier-graph experiments.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wreath_core::freegrp::QuotientCaps;
use wreath_core::measure::EngineCaps;
use wreath_core::oracle::DEFAULT_EVAL_BUDGET;
use wreath_core::whitehead::RankCaps;
use wreath_core::Error;

#[derive(Parser, Debug)]
#[command(name = "wreath", version, about = "Word measures on G wr S_n: exact expectations, primitivity ranks, oracles")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tabular output as CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Limits, e.g. `vertices=14,quotients=5000000,mul=100000000,eval=100000000,rank=6`.
    #[arg(long, global = true)]
    pub caps: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct WordGroup {
    /// Word in a,b,c,... (capitals are inverses) or b1,b2,... with ^-1.
    #[arg(short = 'w', long = "word", allow_hyphen_values = true)]
    pub word: String,
    /// Builtin group (trivial, cyclicM, sym3) or a JSON group file.
    #[arg(short = 'G', long = "group", default_value = "trivial")]
    pub group: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// E_w[f] as a rational function of n with its Laurent expansion.
    Expect {
        #[command(flatten)]
        wg: WordGroup,
        /// Stable class function, e.g. "Ind(phi1)^2 - a[2,0]".
        #[arg(short = 'f', long = "fn", default_value = "Ind(phi0)")]
        f: String,
        /// Laurent terms below n^0.
        #[arg(short = 'K', long = "laurent", default_value_t = 6)]
        k: usize,
        /// Exact values at these n (comma separated).
        #[arg(long, value_delimiter = ',')]
        eval: Vec<u64>,
    },
    /// Stable inner product <f, g>.
    Inner {
        #[arg(short = 'f', long = "fn")]
        f: String,
        #[arg(short = 'g', long = "with", default_value = "1")]
        g: String,
        #[arg(short = 'G', long = "group", default_value = "trivial")]
        group: String,
    },
    /// Primitivity rank and the number of critical subgroups.
    Pirank {
        #[command(flatten)]
        wg: WordGroup,
        /// Twisted version for this irreducible character.
        #[arg(long)]
        phi: Option<String>,
    },
    /// Critical subgroups with image graphs.
    Crit {
        #[command(flatten)]
        wg: WordGroup,
        #[arg(long)]
        phi: Option<String>,
    },
    /// Checks the leading Laurent coefficients of E_w[f] against c0 and c_sub,
    /// and the exact value against the finite oracle at each --eval n.
    Verify {
        #[command(flatten)]
        wg: WordGroup,
        #[arg(short = 'f', long = "fn", default_value = "Ind(phi0)")]
        f: String,
        /// Laurent depth (default pi + 4).
        #[arg(short = 'K', long = "laurent")]
        k: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        eval: Vec<usize>,
        /// Monte-Carlo samples when exact enumeration is over budget.
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        /// Test mode: add this constant to the predicted c_sub.
        #[arg(long, hide = true, allow_hyphen_values = true)]
        perturb_csub: Option<String>,
    },
    /// f in the sInd basis and in the a basis.
    Basis {
        #[arg(short = 'f', long = "fn")]
        f: String,
        #[arg(short = 'G', long = "group", default_value = "trivial")]
        group: String,
    },
    /// Quotients of the graph of w^lambda with chi, rank and their n-factor.
    Quotients {
        #[command(flatten)]
        wg: WordGroup,
        /// Multi-partition, "[2,1]" or "phi1:[1]; phi0:[2]".
        #[arg(long = "lam", default_value = "[1]")]
        lam: String,
    },
    /// E_w[f] at fixed n by enumeration, or Monte-Carlo with --samples.
    Oracle {
        #[command(flatten)]
        wg: WordGroup,
        #[arg(short = 'f', long = "fn", default_value = "Ind(phi0)")]
        f: String,
        #[arg(long = "n", value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// exact, mc, or auto (exact when within budget).
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
    },
    /// Random Schreier graphs of G wr S_n: mu against the bounds, one CSV row per trial.
    Schreier {
        #[arg(short = 'G', long = "group", default_value = "cyclic2")]
        group: String,
        /// projection, signed, ksubsets.
        #[arg(long, default_value = "signed")]
        action: String,
        #[arg(long = "n", value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        r: usize,
        /// Subset size for ksubsets.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub engine: EngineCaps,
    pub rank: RankCaps,
    pub eval_budget: u64,
}

fn parse_caps(text: Option<&str>) -> Result<Caps, String> {
    let mut q = QuotientCaps::default();
    let mut engine = EngineCaps::default();
    let mut rank = RankCaps::default();
    let mut eval = DEFAULT_EVAL_BUDGET;
    for item in text.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("cap {item:?} is not key=value"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("cap {k}: {v:?} is not a number"))?;
        if !(v >= 1.0 && v.fract() == 0.0 && v < 1.8e19) {
            return Err(format!("cap {k} must be a positive integer"));
        }
        let v = v as u64;
        match k.trim() {
            "vertices" => q.max_vertices = v as usize,
            "quotients" => q.max_quotients = v,
            "mul" => engine.group_mul_budget = v,
            "eval" => eval = v,
            "rank" => rank.max_rank = v as usize,
            other => return Err(format!("unknown cap {other:?} (vertices, quotients, mul, eval, rank)")),
        }
    }
    engine.quotients = q;
    rank.quotients = q;
    rank.group_mul_budget = engine.group_mul_budget;
    Ok(Caps { engine, rank, eval_budget: eval })
}

/// Result of a subcommand: either finished, or finished with a failed check.
pub enum Outcome {
    Ok,
    CheckFailed,
}

pub enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse { .. } | Error::InvalidGroup(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e),
        }
    }
}

/// `-lam` is accepted as a long flag spelled with one dash.
fn normalize_args(args: impl Iterator<Item = String>) -> Vec<String> {
    args.map(|a| match a.strip_prefix("-lam") {
        Some(rest) if rest.is_empty() || rest.starts_with('=') => format!("--lam{rest}"),
        _ => a,
    })
    .collect()
}

fn setup_threads(n: Option<usize>) -> Result<(), String> {
    let Some(n) = n else { return Ok(()) };
    if n == 0 {
        return Err("--threads must be positive".into());
    }
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
    }
    #[cfg(not(feature = "parallel"))]
    {
        if n > 1 {
            eprintln!("warning: built without the parallel feature, running on one thread");
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(normalize_args(std::env::args())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let caps = match parse_caps(cli.global.caps.as_deref()).and_then(|c| setup_threads(cli.global.threads).map(|_| c)) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let g = &cli.global;
    let res = match cli.cmd {
        Cmd::Expect { wg, f, k, eval } => commands::expect(g, &caps, &wg, &f, k, &eval),
        Cmd::Inner { f, g: h, group } => commands::inner(g, &caps, &f, &h, &group),
        Cmd::Pirank { wg, phi } => commands::crit(g, &caps, &wg, phi.as_deref(), false),
        Cmd::Crit { wg, phi } => commands::crit(g, &caps, &wg, phi.as_deref(), true),
        Cmd::Verify { wg, f, k, eval, samples, perturb_csub } => {
            commands::verify(g, &caps, &wg, &f, k, &eval, samples, perturb_csub.as_deref())
        }
        Cmd::Basis { f, group } => commands::basis(g, &f, &group),
        Cmd::Quotients { wg, lam } => commands::quotients(g, &caps, &wg, &lam),
        Cmd::Oracle { wg, f, n, method, samples } => commands::oracle(g, &caps, &wg, &f, &n, &method, samples),
        Cmd::Schreier { group, action, n, r, k, trials } => commands::schreier(g, &group, &action, &n, r, k, trials),
    };
    match res {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(3),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            if let Error::ProperPower { root, exponent, .. } = &e {
                eprintln!(
                    "note: a proper power has primitivity rank 1; expectations of {root}^{exponent} reduce to E_{root}[f^({exponent})] (use `verify` or `expect`)"
                );
            }
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lam_flag_is_rewritten() {
        let v = normalize_args(["wreath", "quotients", "-lam", "[1]", "-lamb"].iter().map(|s| s.to_string()));
        assert_eq!(v[2], "--lam");
        assert_eq!(v[4], "-lamb");
    }

    #[test]
    fn caps_parse() {
        let c = parse_caps(Some("vertices=10, eval=1e6")).unwrap();
        assert_eq!(c.engine.quotients.max_vertices, 10);
        assert_eq!(c.rank.quotients.max_vertices, 10);
        assert_eq!(c.eval_budget, 1_000_000);
        assert!(parse_caps(Some("eval=0")).is_err());
        assert!(parse_caps(Some("speed=3")).is_err());
    }
}
