//! The `bfree` subcommands. Every command prints a JSON object (or CSV
//! where noted) that carries a `config` block with the effective
//! [`RunConfig`] and the argument vector, enough to repeat the run.
//!
//! Exit codes: 0 success, 2 invalid input, 3 budget exceeded,
//! 4 indeterminate certificate, 1 for I/O failures.

use std::io::Write;
use std::path::PathBuf;

use bfree_core::measures::{
    bernoulli_eval, contains_ratio, convolve_bruteforce_oracle, convolve_eval, integral_phi, mirsky_crt_oracle,
    mirsky_eval_with, ConvolvedMeasure, MeasureError, MirskyMeasure, MirskyMethod, AUTO_SWITCH_ZEROS,
};
use bfree_core::odometer::{haar_sample, mc_estimate_cylinder, phi_window, sample_rng, OdometerError};
use bfree_core::thermo::{
    certify_equilibrium, certify_family, dphi_lower, dphi_upper, entropy_convolved, equilibrium_p,
    equilibrium_p_interval, equilibrium_residual, gibbs_trajectory, integral_closed_form, partition_pressure_numeric,
    pressure_closed_form, Condition, GibbsCertificate, Status, Verdict,
};
use bfree_core::words::{count_language, enumerate_language, max_ones, MaxOnesMethod};
use bfree_core::{BSet, Budget, Interval, Potential2, ThermoError, Word, WordError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::{BSetSource, ConfigError, Format, PotentialSpec, RunConfig};
use crate::formats::{write_trajectory_csv, BSetJson, EstimateReport, EvalReport, IntervalJson};
use crate::generators::Generator;

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_INDETERMINATE: u8 = 4;

/// Relative agreement required between an evaluation and the brute-force
/// convolution oracle.
const ORACLE_RELATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Thermo(#[from] ThermoError),
    #[error(transparent)]
    Odometer(#[from] OdometerError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn word_exit(e: &WordError) -> u8 {
    match e {
        WordError::EnumerationBudgetExceeded(_) => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

fn measure_exit(e: &MeasureError) -> u8 {
    match e {
        MeasureError::StateBudgetExceeded(_) => EXIT_BUDGET,
        MeasureError::Word(w) => word_exit(w),
        _ => EXIT_INVALID,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Word(e) => word_exit(e),
            CliError::Measure(e) => measure_exit(e),
            CliError::Thermo(ThermoError::Word(e)) => word_exit(e),
            CliError::Thermo(ThermoError::Measure(e)) => measure_exit(e),
            CliError::Odometer(OdometerError::Word(e)) => word_exit(e),
            CliError::Config(ConfigError::Io { .. }) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => EXIT_IO,
            _ => EXIT_INVALID,
        }
    }
}

#[derive(Parser, Debug, Clone)]
#[command(name = "bfree", version, about = "Languages, measures and thermodynamic formalism of B-free subshifts")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Without a `B` source the default is
/// `two-plus-odd-prime-squares` with cutoff 1000.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Elements of B, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub elements: Option<Vec<u64>>,
    /// Tail bound for --elements (0 means B is exactly the listed set).
    #[arg(long, global = true)]
    pub tail: Option<f64>,
    /// Completeness threshold for --elements.
    #[arg(long, global = true)]
    pub complete_below: Option<u64>,
    /// JSON file {"elements": [...], "tail_bound": x, "complete_below": n}.
    #[arg(long, global = true)]
    pub bset_file: Option<PathBuf>,
    /// Named generator: prime-squares or two-plus-odd-prime-squares.
    #[arg(long = "gen", global = true)]
    pub generator: Option<Generator>,
    /// Generator cutoff.
    #[arg(long, global = true)]
    pub cutoff: Option<u64>,
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    /// Longest word or block length accepted.
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a00: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a01: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    /// General potential v00,v01,v10,v11 on two-cylinders.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub table: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Densities, entropy and validation of B.
    Bset {
        #[command(subcommand)]
        action: BsetCmd,
    },
    /// Language counts, enumeration and max-ones blocks.
    Lang {
        #[command(subcommand)]
        action: LangCmd,
    },
    /// Cylinder measures.
    Measure {
        #[command(subcommand)]
        action: MeasureCmd,
    },
    /// Pressure, equilibrium states and Gibbs certificates.
    Thermo {
        #[command(subcommand)]
        action: ThermoCmd,
    },
    /// Samples on the odometer and Monte Carlo estimates.
    Odometer {
        #[command(subcommand)]
        action: OdometerCmd,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum BsetCmd {
    Report,
    Validate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MaxOnesArg {
    Exact,
    Scan,
}

#[derive(Subcommand, Debug, Clone)]
pub enum LangCmd {
    Count {
        #[arg(long)]
        n: usize,
    },
    Enum {
        #[arg(long)]
        n: usize,
        /// Most words printed.
        #[arg(long, default_value_t = 1000)]
        cap: usize,
    },
    Maxones {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "exact")]
        method: MaxOnesArg,
        /// Window of eta scanned by --method scan.
        #[arg(long, default_value_t = 1_000_000)]
        segment: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Crt,
    Bruteforce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    InclExcl,
    ResidueDp,
}

impl MethodArg {
    fn method(self) -> MirskyMethod {
        match self {
            MethodArg::Auto => MirskyMethod::Auto,
            MethodArg::InclExcl => MirskyMethod::InclusionExclusion,
            MethodArg::ResidueDp => MirskyMethod::ResidueDp,
        }
    }

    /// The evaluator actually used for a word with `zeros` zeros.
    fn label(self, zeros: usize) -> &'static str {
        match self {
            MethodArg::Auto if zeros <= AUTO_SWITCH_ZEROS => "incl-excl",
            MethodArg::Auto | MethodArg::ResidueDp => "residue-dp",
            MethodArg::InclExcl => "incl-excl",
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum MeasureCmd {
    Eval(EvalArgs),
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    #[arg(long)]
    pub word: String,
    /// Mirsky measure of B (default).
    #[arg(long, conflicts_with_all = ["bernoulli", "convolved"])]
    pub mirsky: bool,
    /// Bernoulli measure with P(0) = q.
    #[arg(long, conflicts_with = "convolved")]
    pub bernoulli: bool,
    /// Mirsky measure convolved with the Bernoulli mask, P(0) = q.
    #[arg(long)]
    pub convolved: bool,
    #[arg(long)]
    pub q: Option<f64>,
    /// Cross-check against an independent evaluator.
    #[arg(long, value_enum)]
    pub oracle: Option<OracleArg>,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
}

#[derive(Subcommand, Debug, Clone)]
pub enum ThermoCmd {
    /// Closed-form pressure and the partition-function upper bounds.
    Pressure {
        #[arg(long, value_delimiter = ',', default_value = "12,24")]
        ns: Vec<usize>,
    },
    /// Equilibrium parameter and the variational residual.
    Equilibrium,
    /// Density chain: dphi lower bound, Dphi upper bounds and integrals.
    Densities {
        #[arg(long, value_delimiter = ',', default_value = "8,16,24")]
        ns: Vec<usize>,
        #[arg(long = "qs", value_delimiter = ',', default_value = "0.25,0.5")]
        qs: Vec<f64>,
    },
    /// Non-Gibbs certificate, at the equilibrium parameter unless --q is set.
    Certify {
        #[arg(long)]
        q: Option<f64>,
    },
    /// Gibbs ratio along max-ones blocks (CSV unless --format json).
    Trajectory {
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
        ngrid: Vec<usize>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum OdometerCmd {
    /// Haar-random points and their coding windows on [0, len).
    Sample {
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 32)]
        len: usize,
    },
    /// Monte Carlo estimate of a cylinder's Mirsky measure.
    Estimate {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
}

/// Merges `--config` with the flags.
pub fn effective_config(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let sources = [common.elements.is_some(), common.bset_file.is_some(), common.generator.is_some()];
    if sources.iter().filter(|&&s| s).count() > 1 {
        return Err(CliError::Invalid("--elements, --bset-file and --gen are mutually exclusive".into()));
    }
    if common.elements.is_none() && (common.tail.is_some() || common.complete_below.is_some()) {
        return Err(CliError::Invalid("--tail and --complete-below need --elements".into()));
    }
    if let Some(elements) = &common.elements {
        cfg.bset = BSetSource::Inline(BSetJson {
            elements: elements.clone(),
            tail_bound: common.tail.unwrap_or(0.0),
            complete_below: common.complete_below,
        });
    } else if let Some(path) = &common.bset_file {
        cfg.bset = BSetSource::File(path.clone());
    } else if common.generator.is_some() || common.cutoff.is_some() {
        let (name, cutoff) = match &cfg.bset {
            BSetSource::Generator { name, cutoff } => (name.clone(), *cutoff),
            _ => (crate::config::DEFAULT_GENERATOR.name().to_string(), crate::config::DEFAULT_CUTOFF),
        };
        cfg.bset = BSetSource::Generator {
            name: common.generator.map(|g| g.name().to_string()).unwrap_or(name),
            cutoff: common.cutoff.unwrap_or(cutoff),
        };
    }
    if let Some(t) = &common.table {
        if t.len() != 4 {
            return Err(CliError::Invalid(format!("--table needs 4 values, got {}", t.len())));
        }
        if common.a00.is_some() || common.a01.is_some() || common.a1.is_some() {
            return Err(CliError::Invalid("--table conflicts with --a00/--a01/--a1".into()));
        }
        cfg.potential = Some(PotentialSpec::Table([[t[0], t[1]], [t[2], t[3]]]));
    } else if common.a00.is_some() || common.a01.is_some() || common.a1.is_some() {
        let (b00, b01, b1) = cfg.potential.as_ref().and_then(|p| p.family()).unwrap_or((0.0, 0.0, 1.0));
        cfg.potential = Some(PotentialSpec::Family {
            a00: common.a00.unwrap_or(b00),
            a01: common.a01.unwrap_or(b01),
            a1: common.a1.unwrap_or(b1),
        });
    }
    if let Some(f) = common.format {
        cfg.format = Some(f);
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(m) = common.max_nodes {
        cfg.budget.max_nodes = m;
    }
    if let Some(m) = common.max_n {
        cfg.budget.max_n = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

struct Ctx {
    cfg: RunConfig,
    echo: Value,
}

impl Ctx {
    fn bset(&self) -> Result<BSet, CliError> {
        Ok(self.cfg.resolve_bset()?)
    }

    fn budget(&self) -> Budget {
        self.cfg.budget.budget()
    }

    fn check_n(&self, n: usize) -> Result<(), CliError> {
        if n == 0 {
            return Err(CliError::Word(WordError::Empty));
        }
        if n > self.cfg.budget.max_n {
            return Err(CliError::Invalid(format!("n = {n} exceeds --max-n {}", self.cfg.budget.max_n)));
        }
        Ok(())
    }

    fn word(&self, s: &str) -> Result<Word, CliError> {
        let w: Word = s.parse()?;
        self.check_n(w.len())?;
        Ok(w)
    }

    fn potential(&self) -> Potential2 {
        self.cfg
            .potential
            .as_ref()
            .map(PotentialSpec::potential)
            .unwrap_or_else(|| Potential2::family(0.0, 0.0, 1.0))
    }

    fn family(&self) -> Result<(f64, f64, f64), CliError> {
        self.potential()
            .as_family()
            .ok_or_else(|| CliError::Invalid("this command needs the family a00 1[00] + a01 1[01] + a1 1[1]".into()))
    }

    fn format(&self, default: Format) -> Format {
        self.cfg.format.unwrap_or(default)
    }

    fn emit(&self, out: &mut dyn Write, mut body: Value) -> Result<(), CliError> {
        body["config"] = self.echo.clone();
        serde_json::to_writer_pretty(&mut *out, &body)?;
        writeln!(out)?;
        Ok(())
    }
}

fn iv(i: Interval) -> Value {
    serde_json::to_value(IntervalJson::from(i)).unwrap_or(Value::Null)
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Indeterminate => "indeterminate",
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::NonGibbsCertified => "non-Gibbs certified",
        Verdict::NotCertified => "not certified",
        Verdict::Indeterminate => "indeterminate",
    }
}

fn condition(c: &Condition) -> Value {
    json!({ "status": status_name(c.status), "slack": iv(c.slack) })
}

fn certificate(c: &GibbsCertificate) -> Value {
    json!({
        "q": c.q,
        "cond_pressure": condition(&c.cond_pressure),
        "cond_sup": condition(&c.cond_sup),
        "cond_var": condition(&c.cond_var),
        "verdict": verdict_name(c.verdict),
    })
}

/// Runs the parsed command, writing its report to `out`. Returns the exit
/// code for a completed run (0, or 4 for an indeterminate certificate).
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = effective_config(&cli.common)?;
    let echo = json!({
        "run": serde_json::to_value(&cfg)?,
        "args": std::env::args().collect::<Vec<_>>(),
    });
    let ctx = Ctx { cfg, echo };
    match &cli.command {
        Command::Bset { action } => cmd_bset(&ctx, action, out),
        Command::Lang { action } => cmd_lang(&ctx, action, out),
        Command::Measure { action } => cmd_measure(&ctx, action, out),
        Command::Thermo { action } => cmd_thermo(&ctx, action, out),
        Command::Odometer { action } => cmd_odometer(&ctx, action, out),
    }
}

/// Prefix lengths shown in the density table.
fn table_prefixes(len: usize) -> Vec<usize> {
    if len <= 24 {
        return (1..=len).collect();
    }
    let mut ks: Vec<usize> = (1..=16).collect();
    let mut k = 32;
    while k < len {
        ks.push(k);
        k *= 2;
    }
    ks.push(len);
    ks
}

fn cmd_bset(ctx: &Ctx, action: &BsetCmd, out: &mut dyn Write) -> Result<u8, CliError> {
    let b = ctx.bset()?;
    match action {
        BsetCmd::Validate => {
            let body = json!({ "valid": true, "bset": BSetJson::from(&b), "exactly_finite": b.is_exactly_finite() });
            ctx.emit(out, body)?;
        }
        BsetCmd::Report => {
            let exact_d = if b.is_exactly_finite() {
                b.mset_density(b.elements().len())
                    .ok()
                    .map(|m| format!("{}/{}", m.denom() - m.numer(), m.denom()))
            } else {
                None
            };
            let prefixes: Vec<Value> = table_prefixes(b.elements().len())
                .into_iter()
                .map(|k| {
                    let dens = b.mset_density_interval(k).map(iv).unwrap_or(Value::Null);
                    let exact = b.mset_density(k).ok().map(|r| r.to_string());
                    json!({ "k": k, "b_k": b.elements()[k - 1], "density": dens, "exact": exact })
                })
                .collect();
            let reach = b.complete_below().unwrap_or(1_000_000).min(1_000_000);
            let mut logs = Vec::new();
            let mut n = 10u64;
            while n <= reach {
                logs.push(json!({ "n": n, "log_density": b.log_density_mset(n).map_err(ConfigError::from)? }));
                n *= 10;
            }
            let d = b.free_density();
            let body = json!({
                "bset": BSetJson::from(&b),
                "exactly_finite": b.is_exactly_finite(),
                "d": iv(d),
                "d_exact": exact_d,
                "entropy": iv(b.topological_entropy()),
                "multiples_density_limit": iv(Interval::ONE - d),
                "davenport_erdos": { "prefix_densities": prefixes, "log_densities": logs },
            });
            ctx.emit(out, body)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_lang(ctx: &Ctx, action: &LangCmd, out: &mut dyn Write) -> Result<u8, CliError> {
    let b = ctx.bset()?;
    let budget = ctx.budget();
    match *action {
        LangCmd::Count { n } => {
            ctx.check_n(n)?;
            let count = count_language(n, &b, budget)?;
            let body = json!({ "n": n, "count": count, "log2_count_over_n": (count as f64).log2() / n as f64 });
            ctx.emit(out, body)?;
        }
        LangCmd::Enum { n, cap } => {
            ctx.check_n(n)?;
            let mut words: Vec<String> = enumerate_language(n, &b, cap.saturating_add(1), budget)?
                .map(|w| w.to_string())
                .collect();
            let truncated = words.len() > cap;
            words.truncate(cap);
            match ctx.format(Format::Json) {
                Format::Csv => {
                    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
                    w.write_record(["word"])?;
                    for s in &words {
                        w.write_record([s])?;
                    }
                    w.flush()?;
                }
                Format::Json => {
                    ctx.emit(out, json!({ "n": n, "words": words, "truncated": truncated }))?;
                }
            }
        }
        LangCmd::Maxones { n, method, segment } => {
            ctx.check_n(n)?;
            let m = match method {
                MaxOnesArg::Exact => MaxOnesMethod::Exact,
                MaxOnesArg::Scan => MaxOnesMethod::Scan { segment },
            };
            let r = max_ones(n, &b, m, budget)?;
            let body = json!({ "n": n, "count": r.count, "witness": r.witness.to_string() });
            ctx.emit(out, body)?;
        }
    }
    Ok(EXIT_OK)
}

fn need_q(q: Option<f64>) -> Result<f64, CliError> {
    q.ok_or_else(|| CliError::Invalid("--q is required for --bernoulli and --convolved".into()))
}

fn cmd_measure(ctx: &Ctx, action: &MeasureCmd, out: &mut dyn Write) -> Result<u8, CliError> {
    let MeasureCmd::Eval(args) = action;
    let b = ctx.bset()?;
    let c = ctx.word(&args.word)?;
    let (value, method, oracle) = if args.bernoulli {
        let q = need_q(args.q)?;
        if args.oracle.is_some() {
            return Err(CliError::Invalid("--oracle applies to --mirsky and --convolved".into()));
        }
        (Interval::point(bernoulli_eval(q, &c)?), "bernoulli", Value::Null)
    } else if args.convolved {
        let q = need_q(args.q)?;
        let nu = MirskyMeasure::new(b.clone()).with_method(args.method.method());
        let k = convolve_eval(&nu, &b, q, &c, ctx.budget())?;
        let oracle = match args.oracle {
            None => Value::Null,
            Some(OracleArg::Crt) => {
                return Err(CliError::Invalid("the crt oracle evaluates Mirsky measures; use --oracle bruteforce".into()))
            }
            Some(OracleArg::Bruteforce) => {
                let v = convolve_bruteforce_oracle(&nu, &b, q, &c)?;
                let tol = ORACLE_RELATIVE_TOLERANCE * v.abs();
                let consistent = k.lo - tol <= v && v <= k.hi + tol;
                json!({ "method": "bruteforce", "value": v, "consistent": consistent })
            }
        };
        (k, "convolved", oracle)
    } else {
        if args.q.is_some() {
            return Err(CliError::Invalid("--q applies to --bernoulli and --convolved".into()));
        }
        let v = mirsky_eval_with(&b, &c, args.method.method())?;
        let oracle = match args.oracle {
            None => Value::Null,
            Some(OracleArg::Bruteforce) => {
                return Err(CliError::Invalid("the bruteforce oracle evaluates convolutions; use --oracle crt".into()))
            }
            Some(OracleArg::Crt) => {
                let r = mirsky_crt_oracle(&b, &c)?;
                let (num, den) = (*r.numer(), *r.denom());
                json!({
                    "method": "crt",
                    "exact": r.to_string(),
                    "value": num as f64 / den as f64,
                    "consistent": contains_ratio(&v, num, den),
                })
            }
        };
        (v, args.method.label(c.zeros_count()), oracle)
    };
    let report = EvalReport {
        word: c.to_string(),
        lo: value.lo,
        hi: value.hi,
        method: method.to_string(),
    };
    let mut body = serde_json::to_value(report)?;
    if !oracle.is_null() {
        body["oracle"] = oracle;
    }
    ctx.emit(out, body)?;
    Ok(EXIT_OK)
}

fn require_two(b: &BSet) -> Result<(), CliError> {
    if b.contains(2) {
        Ok(())
    } else {
        Err(CliError::Invalid("the closed forms need 2 in B".into()))
    }
}

fn cmd_thermo(ctx: &Ctx, action: &ThermoCmd, out: &mut dyn Write) -> Result<u8, CliError> {
    let b = ctx.bset()?;
    let budget = ctx.budget();
    let d = b.free_density();
    let phi = ctx.potential();
    match action {
        ThermoCmd::Pressure { ns } => {
            for &n in ns {
                ctx.check_n(n)?;
            }
            let closed = match phi.as_family() {
                Some((a00, a01, a1)) if b.contains(2) => iv(pressure_closed_form(a00, a01, a1, d)),
                _ => Value::Null,
            };
            let mut numeric = Vec::new();
            for &n in ns {
                numeric.push(json!({ "n": n, "value": partition_pressure_numeric(n, &phi, &b, budget)? }));
            }
            ctx.emit(out, json!({ "d": iv(d), "closed_form": closed, "numeric_upper": numeric }))?;
        }
        ThermoCmd::Equilibrium => {
            let (a00, a01, a1) = ctx.family()?;
            require_two(&b)?;
            let p = equilibrium_p(a00, a01, a1);
            let residual = equilibrium_residual(a00, a01, a1, d);
            let body = json!({
                "p": p,
                "p_interval": iv(equilibrium_p_interval(a00, a01, a1)),
                "d": iv(d),
                "pressure": iv(pressure_closed_form(a00, a01, a1, d)),
                "entropy": iv(entropy_convolved(p, d)),
                "integral_phi": iv(integral_closed_form(a00, a01, a1, p, d)),
                "residual": iv(residual),
                "residual_contains_zero": residual.contains(0.0),
            });
            ctx.emit(out, body)?;
        }
        ThermoCmd::Densities { ns, qs } => {
            for &n in ns {
                ctx.check_n(n)?;
            }
            let lower = match phi.as_family() {
                Some((a00, a01, a1)) if b.contains(2) => iv(dphi_lower(a00, a01, a1, d)),
                _ => Value::Null,
            };
            let mut upper = Vec::new();
            for &n in ns {
                upper.push(json!({ "n": n, "value": dphi_upper(n, &phi, &b, budget)? }));
            }
            let nu = MirskyMeasure::new(b.clone());
            let mut integrals = vec![json!({ "measure": "mirsky", "value": iv(integral_phi(&nu, &phi)?) })];
            for &q in qs {
                let k = ConvolvedMeasure::new(nu.clone(), b.clone(), q)?.with_budget(budget);
                integrals.push(json!({ "measure": "convolved", "q": q, "value": iv(integral_phi(&k, &phi)?) }));
            }
            ctx.emit(out, json!({ "d": iv(d), "dphi_lower": lower, "dphi_upper": upper, "integrals": integrals }))?;
        }
        ThermoCmd::Certify { q } => {
            let (a00, a01, a1) = ctx.family()?;
            require_two(&b)?;
            let cert = match q {
                Some(q) => certify_family(a00, a01, a1, *q, d)?,
                None => certify_equilibrium(a00, a01, a1, d),
            };
            let mut body = certificate(&cert);
            body["d"] = iv(d);
            body["at_equilibrium"] = Value::Bool(q.is_none());
            ctx.emit(out, body)?;
            if cert.verdict == Verdict::Indeterminate {
                return Ok(EXIT_INDETERMINATE);
            }
        }
        ThermoCmd::Trajectory { ngrid } => {
            for &n in ngrid {
                ctx.check_n(n)?;
            }
            let (a00, a01, a1) = ctx.family()?;
            let t = gibbs_trajectory(a00, a01, a1, &b, ngrid, budget)?;
            match ctx.format(Format::Csv) {
                Format::Csv => write_trajectory_csv(&t, &mut *out)?,
                Format::Json => {
                    let rows: Vec<Value> = t
                        .rows
                        .iter()
                        .map(|r| {
                            json!({
                                "n": r.n,
                                "word": r.word.to_string(),
                                "ones": r.ones,
                                "nu": iv(r.nu),
                                "kappa": iv(r.kappa),
                                "birkhoff": r.birkhoff,
                                "ratio": iv(r.ratio),
                                "bound": r.bound,
                                "within_bound": r.within_bound,
                                "ones_gap": r.ones_gap,
                            })
                        })
                        .collect();
                    let body = json!({
                        "p": t.p,
                        "pressure": iv(t.pressure),
                        "d": iv(t.d),
                        "nu_strictly_decreasing": t.nu_strictly_decreasing(),
                        "all_within_bound": t.all_within_bound(),
                        "rows": rows,
                    });
                    ctx.emit(out, body)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_odometer(ctx: &Ctx, action: &OdometerCmd, out: &mut dyn Write) -> Result<u8, CliError> {
    let b = ctx.bset()?;
    let seed = ctx.cfg.seed;
    match *action {
        OdometerCmd::Sample { count, len } => {
            ctx.check_n(len)?;
            let mut samples = Vec::new();
            for i in 0..count {
                let omega = haar_sample(&b, &mut sample_rng(seed, i));
                let window = phi_window(&b, &omega, 0, len as i64 - 1)?;
                samples.push(json!({ "index": i, "residues": omega.residues(), "window": window.to_string() }));
            }
            ctx.emit(out, json!({ "seed": seed, "samples": samples }))?;
        }
        OdometerCmd::Estimate { ref word, samples } => {
            let c = ctx.word(word)?;
            let est = mc_estimate_cylinder(&b, &c, samples, seed)?;
            let mut body = serde_json::to_value(EstimateReport {
                word: c.to_string(),
                mean: est.mean,
                stderr: est.stderr,
                samples: est.samples,
                seed: est.seed,
            })?;
            if let Ok(reference) = mirsky_eval_with(&b, &c, MirskyMethod::Auto) {
                let slack = 3.0 * est.stderr;
                body["mirsky"] = iv(reference);
                body["within_3_stderr"] = Value::Bool(est.mean >= reference.lo - slack && est.mean <= reference.hi + slack);
            }
            ctx.emit(out, body)?;
        }
    }
    Ok(EXIT_OK)
}
