//! The `congr` command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use congr_core::cubicres::{classify, sun_c0_criterion, CubicClass};
use congr_core::linrec::RecurrenceSpec;
use congr_core::modarith::{primes_in, PrimePowerModulus, Ratio};
use congr_core::oracle::direct_sum;
use congr_core::descriptor::SumDescriptor;
use congr_core::Error;

use crate::config::{parse_grid, RawConfig, DEFAULT_BUDGET};
use crate::record::{Format, RecordWriter};
use crate::scan::scan_one;
use crate::sweep::{self, Summary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "congr", version, about = "Truncated binomial and Catalan sums modulo primes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one sum `Σ_{k<p^a} binom((h+1)k, k+d)/m^k mod p`.
    Sum(SumArgs),
    /// Compare closed forms, the fast route and the oracle over a sweep.
    Verify(VerifyArgs),
    /// Cubic class of `c` modulo `p^a`.
    Classify(ClassifyArgs),
    /// Look for `m` whose sums are constant or keyed on `p^a mod M`.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Fast,
    Roots,
    Oracle,
}

#[derive(Args, Debug)]
pub struct SumArgs {
    #[arg(long)]
    pub h: usize,
    /// Rational, e.g. `27/4`.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Ratio,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, value_enum, default_value_t = Method::Fast)]
    pub method: Method,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    /// Theorem id such as `T1.6`; repeatable. All theorems by default.
    #[arg(long = "theorem")]
    pub theorems: Vec<String>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub pmin: Option<u64>,
    #[arg(long)]
    pub pmax: Option<u64>,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub amax: Option<u32>,
    /// Grids: comma lists, `lo..hi` ranges, rationals.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, env = "CONGR_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Fill `elapsed_ms` (makes the stream non-reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: Ratio,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub a: u32,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub h: usize,
    /// Grid of `m` values.
    #[arg(long, allow_hyphen_values = true)]
    pub m: String,
    #[arg(long, default_value_t = 5)]
    pub pmin: u64,
    #[arg(long, default_value_t = 100)]
    pub pmax: u64,
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn usage(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Parses `std::env::args` and runs; returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Sum(args) => cmd_sum(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Scan(args) => cmd_scan(&args),
    }
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

pub fn cmd_sum(args: &SumArgs) -> i32 {
    let pp = match PrimePowerModulus::new(args.p, args.a) {
        Ok(pp) => pp,
        Err(e) => return usage(e),
    };
    if args.h == 0 {
        return usage("h must be positive");
    }
    let result = match args.method {
        Method::Oracle => direct_sum(&SumDescriptor::plain(args.h, args.m, args.d), &pp, args.budget),
        Method::Fast => RecurrenceSpec::from_ratio(args.h, args.m, args.p)
            .and_then(|s| s.sum_fast(args.d, &pp)),
        Method::Roots => RecurrenceSpec::from_ratio(args.h, args.m, args.p)
            .and_then(|s| s.sum_via_roots(args.d, &pp)),
    };
    match result {
        Ok(v) => {
            println!("{}", v.value());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn raw_from_args(args: &VerifyArgs) -> Result<RawConfig, String> {
    let mut raw = match &args.config {
        Some(path) => RawConfig::load(path).map_err(|e| e.to_string())?,
        None => RawConfig::default(),
    };
    let mut cli = RawConfig::default();
    let mut set = |k: &str, v: Option<String>| -> Result<(), String> {
        match v {
            Some(v) => cli.set(k, &v).map_err(|e| e.to_string()),
            None => Ok(()),
        }
    };
    if !args.theorems.is_empty() {
        set("theorem", Some(args.theorems.join(",")))?;
    }
    set("p", args.p.map(|v| v.to_string()))?;
    set("pmin", args.pmin.map(|v| v.to_string()))?;
    set("pmax", args.pmax.map(|v| v.to_string()))?;
    set("a", args.a.map(|v| v.to_string()))?;
    set("amax", args.amax.map(|v| v.to_string()))?;
    set("c", args.c.clone())?;
    set("m", args.m.clone())?;
    set("t", args.t.clone())?;
    set("d", args.d.clone())?;
    set("r", args.r.clone())?;
    set("s", args.s.clone())?;
    set("budget", args.budget.map(|v| v.to_string()))?;
    set("workers", args.workers.map(|v| v.to_string()))?;
    set("format", args.format.clone())?;
    set("out", args.out.as_ref().map(|p| p.display().to_string()))?;
    if args.timings {
        set("timings", Some("true".to_string()))?;
    }
    // a range on the command line replaces a single p from the file
    if args.p.is_none() && (args.pmin.is_some() || args.pmax.is_some()) {
        raw.remove("p");
    }
    raw.merge(cli);
    Ok(raw)
}

pub fn cmd_verify(args: &VerifyArgs) -> i32 {
    let cfg = match raw_from_args(args).and_then(|r| r.build().map_err(|e| e.to_string())) {
        Ok(cfg) => cfg,
        Err(e) => return usage(e),
    };
    let records = sweep::run(&cfg);
    let summary = Summary::of(&records);
    let written = open_out(&cfg.out).and_then(|out| {
        let mut w = RecordWriter::new(out, cfg.format)?;
        for r in &records {
            w.write(r)?;
        }
        w.finish()
    });
    if let Err(e) = written {
        return usage(e);
    }
    eprintln!("{summary}");
    if summary.mismatched > 0 {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    }
}

pub fn cmd_classify(args: &ClassifyArgs) -> i32 {
    if args.p == 3 {
        return usage("p = 3 has no cubic classes");
    }
    let pp = match PrimePowerModulus::new(args.p, args.a) {
        Ok(pp) => pp,
        Err(e) => return usage(e),
    };
    if args.c.to_residue(args.p).is_err() {
        return usage(format!("denominator of c is divisible by {}", args.p));
    }
    let class = match classify(args.c, &pp) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    println!("{class}");
    if args.a == 1 && args.p > 3 {
        let c = args.c.to_residue(args.p).expect("checked above");
        match sun_c0_criterion(c, args.p) {
            Ok(in_c0) => {
                let agrees = in_c0 == (class == CubicClass::C0);
                println!(
                    "lucas criterion: {} ({})",
                    if in_c0 { "C0" } else { "not C0" },
                    if agrees { "agrees" } else { "DISAGREES" }
                );
                if !agrees {
                    return EXIT_MISMATCH;
                }
            }
            Err(e) => println!("lucas criterion: not applicable ({e})"),
        }
    }
    EXIT_OK
}

pub fn cmd_scan(args: &ScanArgs) -> i32 {
    if args.h == 0 {
        return usage("h must be positive");
    }
    let ms = match parse_grid("m", &args.m) {
        Ok(ms) => ms,
        Err(e) => return usage(e),
    };
    let primes = primes_in(args.pmin, args.pmax);
    if args.pmin > args.pmax || primes.is_empty() || args.a == 0 {
        return usage(format!("empty p range [{}, {}]", args.pmin, args.pmax));
    }
    let written = open_out(&args.out).and_then(|mut out| {
        for m in ms {
            let row = scan_one(args.h, m, args.d, args.a, &primes);
            serde_json::to_writer(&mut out, &row)?;
            out.write_all(b"\n")?;
        }
        out.flush()
    });
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => usage(e),
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Jsonl => "jsonl",
            Format::Csv => "csv",
        }
    }
}
