//! `modcalc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 must-pass claim failure.
//!
//! Cache files are named `dlog_p{p}_m{m}_e{e}.json` and hold
//! `{"p", "m", "e", "modulus", "order", "powers"}`, where `powers[k]` is
//! `e^k mod p` for `k = 0, ..., p-2`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use modcalc::cache::DlogCache;
use modcalc::calculus::kernel_i;
use modcalc::claims::{self, ClaimParams, Verdict};
use modcalc::config::{OutputFormat, RunConfig};
use modcalc::digital::digits;
use modcalc::dioph::{dioph_search_with_progress, DiophInstance, SearchSpec};
use modcalc::gauss::find_omega;
use modcalc::padic::{
    compute_e, find_generator, lm_full, lm_principal, plm, pow_e, pth_root_unit, GeneratorPair, PrecisionContext,
};
use modcalc::ring::Residue;

#[derive(Parser)]
#[command(name = "modcalc", version, about = "Modular calculus workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single function.
    Eval {
        #[command(subcommand)]
        expr: Expr,
    },
    /// Run the claims registry.
    Claims {
        #[command(subcommand)]
        cmd: ClaimsCmd,
    },
    /// Exhaustive search for a^p + b^p = c^q.
    Search(SearchArgs),
    /// Inspect or clear the discrete-log cache.
    Cache {
        #[command(subcommand)]
        cmd: CacheCmd,
    },
}

#[derive(Args, Clone)]
struct Prec {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u32,
    /// Load generator tables from this cache directory.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl Prec {
    fn ctx(&self) -> anyhow::Result<PrecisionContext> {
        RunConfig::default().check_params(self.p, self.m, None)?;
        Ok(PrecisionContext::new(self.p, self.m)?)
    }

    fn generator(&self) -> anyhow::Result<GeneratorPair> {
        let ctx = self.ctx()?;
        Ok(match &self.cache_dir {
            Some(dir) => DlogCache::new(dir).generator(&ctx)?.0,
            None => find_generator(&ctx)?,
        })
    }
}

#[derive(Subcommand)]
enum Expr {
    /// E mod p^m.
    #[command(name = "E")]
    E(Prec),
    /// Full logarithm of a unit, mod p^(m-1)(p-1).
    Lm {
        #[command(flatten)]
        prec: Prec,
        #[arg(long, allow_hyphen_values = true)]
        x: i128,
    },
    /// Principal logarithm of u = 1 (mod p), mod p^(m-1).
    #[command(name = "lmE")]
    LmE {
        #[command(flatten)]
        prec: Prec,
        #[arg(long, allow_hyphen_values = true)]
        x: i128,
    },
    /// E^x mod p^m.
    #[command(name = "powE")]
    PowE {
        #[command(flatten)]
        prec: Prec,
        #[arg(long, allow_hyphen_values = true)]
        x: i128,
    },
    /// Power logarithm mod p^m.
    Plm {
        #[command(flatten)]
        prec: Prec,
        #[arg(long, allow_hyphen_values = true)]
        x: i128,
    },
    /// Integration kernel I^t(x) mod p.
    #[command(name = "It")]
    It {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        x: u64,
    },
    /// Digits D_{q^k}(x) for k = 1..n.
    Digits {
        #[arg(long, allow_hyphen_values = true)]
        x: i128,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
    },
    /// Halving square root e^(L/2) mod p.
    Sqrt {
        #[command(flatten)]
        prec: Prec,
        #[arg(long, allow_hyphen_values = true)]
        x: i128,
    },
    /// p-th root mod p^m of w = 1 (mod p^2), w given mod p^(m+1).
    Root {
        #[command(flatten)]
        prec: Prec,
        #[arg(long)]
        w: u64,
    },
    /// Generator e with e^(1-p^m) = E.
    Gen(Prec),
    /// Square root of -1 mod p^m for p = 1 (mod 4).
    Omega {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
    },
}

#[derive(Subcommand)]
enum ClaimsCmd {
    /// Run selected claims and write a report.
    Run(ClaimsArgs),
    /// List registered claim ids.
    List,
}

#[derive(Args)]
struct ClaimsArgs {
    #[arg(long = "id", required_unless_present = "all")]
    ids: Vec<String>,
    #[arg(long, conflicts_with = "ids")]
    all: bool,
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long, default_value_t = 3)]
    m: u32,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    /// Worker threads; `MODCALC_THREADS` applies when omitted.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record elapsed_ms (makes the report run-dependent).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    amax: u64,
    /// Defaults to `--amax`.
    #[arg(long)]
    bmax: Option<u64>,
    /// Defaults to `--amax`.
    #[arg(long)]
    cmax: Option<u64>,
    /// Exponents for a and b: `3`, `41,43` or `41..50`.
    #[arg(long)]
    p: String,
    /// Exponents for c, same syntax.
    #[arg(long)]
    q: String,
    /// Keep only pairwise coprime solutions with p prime and p, q >= 41.
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Disable the residue pre-filter.
    #[arg(long)]
    no_filter: bool,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum CacheCmd {
    Inspect {
        #[arg(long)]
        cache_dir: PathBuf,
    },
    Clear {
        #[arg(long)]
        cache_dir: PathBuf,
    },
}

/// Failure category mapped to the exit code.
enum Failure {
    Input(anyhow::Error),
    MustPass(usize),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<modcalc::Error> for Failure {
    fn from(e: modcalc::Error) -> Self {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::MustPass(n)) => {
            eprintln!("error: {n} must-pass claim(s) failed");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Command::Eval { expr } => {
            println!("{}", eval(expr)?);
            Ok(())
        }
        Command::Claims { cmd: ClaimsCmd::List } => {
            for id in claims::claim_ids() {
                let (_, info) = claims::lookup(id)?;
                println!("{id}\t{}", info.statement);
            }
            Ok(())
        }
        Command::Claims { cmd: ClaimsCmd::Run(args) } => run_claims(args),
        Command::Search(args) => search(args).map_err(Failure::from),
        Command::Cache { cmd } => cache(cmd).map_err(Failure::from),
    }
}

fn eval(expr: Expr) -> anyhow::Result<String> {
    Ok(match expr {
        Expr::E(prec) => compute_e(&prec.ctx()?)?.to_string(),
        Expr::Lm { prec, x } => {
            let gp = prec.generator()?;
            format!("{}, e={}", lm_full(x, &gp)?, gp.e.rep())
        }
        Expr::LmE { prec, x } => {
            let ctx = prec.ctx()?;
            lm_principal(Residue::new(x, ctx.modulus()), &ctx)?.to_string()
        }
        Expr::PowE { prec, x } => pow_e(x, &prec.ctx()?)?.to_string(),
        Expr::Plm { prec, x } => plm(x, &prec.ctx()?)?.to_string(),
        Expr::It { p, t, x } => {
            let k = kernel_i(p)?;
            format!("{} (mod {p})", k.at(t, x))
        }
        Expr::Digits { x, q, n } => {
            let d = digits(x, q, n)?;
            let list: Vec<String> = d.digits.iter().map(|v| v.to_string()).collect();
            format!("[{}] (q = {q})", list.join(", "))
        }
        Expr::Sqrt { prec, x } => {
            let gp = prec.generator()?;
            let s = modcalc::padic::sqrt_e(x, &gp)?;
            if s.is_residue {
                s.value.to_string()
            } else {
                format!("{}, non-residue", s.value)
            }
        }
        Expr::Root { prec, w } => {
            let ctx = prec.ctx()?;
            let upper = ctx.at_precision(ctx.m + 1)?;
            pth_root_unit(Residue::from_u64(w % upper.modulus(), upper.modulus()), &ctx)?.to_string()
        }
        Expr::Gen(prec) => {
            let gp = prec.generator()?;
            format!("e={}, E={}", gp.e.rep(), gp.big_e)
        }
        Expr::Omega { p, m } => find_omega(p, m)?.omega.to_string(),
    })
}

fn write_output(out: Option<&Path>, data: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, data).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(data.as_bytes())?;
            Ok(())
        }
    }
}

fn run_claims(args: ClaimsArgs) -> Result<(), Failure> {
    let threads = RunConfig::resolve_threads(args.threads)?;
    let config = RunConfig { threads, seed: args.seed, out: args.out.clone(), ..RunConfig::default() };
    config.validate()?;
    config.check_params(args.p, args.m, args.q)?;
    let ids: Vec<&str> = if args.all {
        claims::claim_ids()
    } else {
        let mut v = Vec::new();
        for id in &args.ids {
            v.push(claims::lookup(id)?.1.id);
        }
        v
    };
    let params = ClaimParams { p: args.p, m: args.m, q: args.q, seed: args.seed, budget: args.budget };
    let reports = claims::run_claims(&ids, &params, config.threads, args.timings)?;
    write_output(config.out.as_deref(), &claims::report_json(&reports))?;
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    eprintln!(
        "{} claims: {} PASS, {} FAIL, {} SKIP",
        reports.len(),
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Skip)
    );
    let failed = claims::must_pass_failures(&reports);
    for r in &failed {
        eprintln!("must-pass FAIL: {}", r.id);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::MustPass(failed.len()))
    }
}

/// Parses `3`, `41,43`, `41..50` or mixtures like `2,5..7`.
fn parse_exponents(s: &str) -> anyhow::Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u32 = lo.trim().parse().with_context(|| format!("bad exponent range {part}"))?;
            let hi: u32 = hi.trim().trim_start_matches('=').parse().with_context(|| format!("bad exponent range {part}"))?;
            if lo > hi {
                bail!("empty exponent range {part}");
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().with_context(|| format!("bad exponent {part}"))?);
        }
    }
    if out.is_empty() {
        bail!("no exponents given");
    }
    Ok(out)
}

fn search_rows(rows: &[DiophInstance], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("a,b,c,p,q\n");
            for r in rows {
                s.push_str(&format!("{},{},{},{},{}\n", r.a, r.b, r.c, r.p, r.q));
            }
            s
        }
    }
}

fn search(args: SearchArgs) -> anyhow::Result<()> {
    let threads = RunConfig::resolve_threads(args.threads)?;
    let format = match args.format {
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    };
    let config = RunConfig { threads, format, out: args.out.clone(), ..RunConfig::default() };
    config.validate()?;
    let mut spec = SearchSpec::new(args.amax, args.bmax.unwrap_or(args.amax), args.cmax.unwrap_or(args.amax), parse_exponents(&args.p)?, parse_exponents(&args.q)?);
    spec.strict = args.strict;
    spec.prefilter = !args.no_filter;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.threads).build()?;
    let step = (spec.a_max / 10).max(1);
    let rows = pool.install(|| {
        dioph_search_with_progress(&spec, |done, total| {
            if done % step == 0 || done == total {
                eprintln!("progress: {done}/{total}");
            }
        })
    })?;
    eprintln!("{} solution(s)", rows.len());
    write_output(config.out.as_deref(), &search_rows(&rows, args.format))
}

fn cache(cmd: CacheCmd) -> anyhow::Result<()> {
    match cmd {
        CacheCmd::Inspect { cache_dir } => {
            let listing = DlogCache::new(&cache_dir).inspect()?;
            if listing.is_empty() {
                eprintln!("cache {} is empty", cache_dir.display());
            }
            for l in listing {
                let status = if l.valid { "ok" } else { "corrupt" };
                match (l.p, l.m, l.e, l.order) {
                    (Some(p), Some(m), Some(e), Some(order)) => {
                        println!("{}\t{status}\tp={p} m={m} e={e} order={order}", l.file)
                    }
                    _ => println!("{}\t{status}", l.file),
                }
            }
        }
        CacheCmd::Clear { cache_dir } => {
            let n = DlogCache::new(&cache_dir).clear()?;
            eprintln!("removed {n} file(s)");
        }
    }
    Ok(())
}
