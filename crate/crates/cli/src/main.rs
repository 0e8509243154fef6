use std::fs;
use std::io::{self, Read};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geoformal::corpus::{domains, match_record, read_jsonl};
use geoformal::metrics::{score_matches, Aggregation};
use geoformal::reward::{total_reward, GeoMetric};
use geoformal::{
    canonicalize, check_text, parse_document, render, CanonMode, CorpusRecord, CorpusReport, Dialect, Domain,
    RewardConfig, RewardError, Severity,
};
use rayon::prelude::*;
use serde_json::{json, Value};

/// Exit statuses; no other values are ever returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Findings = 1,
    Io = 2,
    MixedDomains = 3,
    BadReference = 4,
    BadConfig = 5,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

struct Failure(Status, String);

type CmdResult = Result<Status, Failure>;

#[derive(Parser)]
#[command(name = "geoformal", version, about = "Parse, check, score and reward geometry formal-language descriptions")]
struct Cli {
    /// Reward config JSON: lambda1, lambda2, omega, mode, geo_metric.
    #[arg(long, global = true, env = "GEOFORMAL_CONFIG")]
    config: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Suppress everything but errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Plane,
    Solid,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Plane => Domain::Plane,
            DomainArg::Solid => Domain::Solid,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct ModeArgs {
    /// Compare planes and pyramid bases as cycles, not point sets.
    #[arg(long)]
    strict_cyclic: bool,
    /// Keep the written order of arc endpoints.
    #[arg(long)]
    ordered_arcs: bool,
}

impl ModeArgs {
    fn apply(self, mut mode: CanonMode) -> CanonMode {
        mode.strict_cyclic |= self.strict_cyclic;
        mode.ordered_arcs |= self.ordered_arcs;
        mode
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a document and print its AST, or its canonical form.
    Parse {
        /// Input file, or `-` for stdin.
        input: PathBuf,
        /// Detected from the text when omitted.
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
        /// Print the canonical rendering instead of the AST.
        #[arg(long)]
        canon: bool,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Run format, consistency and redundancy checks.
    Check {
        input: PathBuf,
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
        /// Fail on warnings too.
        #[arg(long)]
        strict: bool,
    },
    /// Score a JSONL corpus of prediction/reference pairs.
    Score {
        corpus: PathBuf,
        /// Only score records of this domain.
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
        /// Average per-sample scores instead of summing counts.
        #[arg(long = "macro")]
        macro_avg: bool,
        /// One report per domain present.
        #[arg(long, conflicts_with = "domain")]
        by_domain: bool,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Reward one prediction against one reference.
    Reward {
        prediction: PathBuf,
        reference: PathBuf,
        /// Detected from the reference when omitted.
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
        #[arg(long, allow_negative_numbers = true)]
        lambda1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        lambda2: Option<f64>,
        /// Weight F1 instead of precision in the geometric term.
        #[arg(long)]
        f1: bool,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Run the HTTP reward service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
    },
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let result = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    };
    result.map_err(|e| Failure(Status::Io, format!("{}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> Result<RewardConfig, Failure> {
    let Some(path) = path else {
        return Ok(RewardConfig::default());
    };
    let text = read_input(path)?;
    RewardConfig::from_json_str(&text).map_err(|e| Failure(Status::BadConfig, format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

struct Ctx {
    config: Option<PathBuf>,
    json: bool,
    quiet: bool,
}

impl Ctx {
    fn out(&self, text: &str) {
        if !self.quiet {
            println!("{text}");
        }
    }
}

fn cmd_parse(ctx: &Ctx, input: &Path, domain: Option<DomainArg>, canon: bool, mode: ModeArgs) -> CmdResult {
    let text = read_input(input)?;
    let domain = domain.map_or_else(|| Domain::detect(&text), Domain::from);
    let parsed = parse_document(&text, domain);
    for d in &parsed.diagnostics {
        eprintln!("{}:{}:{}: {}", input.display(), d.line, d.column, d.message);
    }
    if canon {
        let mode = mode.apply(load_config(ctx.config.as_deref())?.mode);
        let c = canonicalize(&parsed.document, mode);
        if ctx.json {
            let keys: serde_json::Map<String, Value> = geoformal::Category::active(domain)
                .iter()
                .map(|&k| (k.name().to_string(), json!(c.get(k))))
                .collect();
            ctx.out(&pretty(&json!({ "domain": domain, "keys": keys })));
        } else if !ctx.quiet {
            print!("{}", c.render());
        }
    } else if ctx.json || !ctx.quiet {
        let ast = serde_json::to_value(&parsed.document).expect("document serializes");
        if ctx.json {
            ctx.out(&pretty(&ast));
        } else {
            print!("{}", render(&parsed.document, Dialect::Tagged));
        }
    }
    Ok(if parsed.diagnostics.is_empty() { Status::Ok } else { Status::Findings })
}

fn cmd_check(ctx: &Ctx, input: &Path, domain: Option<DomainArg>, strict: bool) -> CmdResult {
    let text = read_input(input)?;
    let domain = domain.map_or_else(|| Domain::detect(&text), Domain::from);
    let report = check_text(&text, domain);
    if ctx.json {
        ctx.out(&pretty(&json!({
            "domain": domain,
            "compliant": report.format.is_compliant,
            "errors": report.errors(),
            "warnings": report.warnings(),
            "findings": report.findings,
        })));
    } else if !ctx.quiet {
        for f in &report.findings {
            println!("{}: {f}", input.display());
        }
        println!("{} error(s), {} warning(s)", report.errors(), report.warnings());
    }
    let failing = report
        .findings
        .iter()
        .any(|f| f.severity == Severity::Error || (strict && f.severity == Severity::Warning));
    Ok(if failing { Status::Findings } else { Status::Ok })
}

fn score_domain(records: &[CorpusRecord], domain: Domain, aggregation: Aggregation, mode: CanonMode) -> Result<CorpusReport, Failure> {
    let subset: Vec<&CorpusRecord> = records.iter().filter(|r| r.domain == domain).collect();
    let matches = subset
        .par_iter()
        .map(|r| match_record(r, mode))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure(Status::Findings, e.to_string()))?;
    score_matches(domain, &matches, aggregation).map_err(|e| Failure(Status::Findings, e.to_string()))
}

fn cmd_score(
    ctx: &Ctx,
    corpus: &Path,
    domain: Option<DomainArg>,
    macro_avg: bool,
    by_domain: bool,
    mode: ModeArgs,
) -> CmdResult {
    let text = read_input(corpus)?;
    let records = read_jsonl(&text).map_err(|e| Failure(Status::Io, format!("{}: {e}", corpus.display())))?;
    let mode = mode.apply(load_config(ctx.config.as_deref())?.mode);
    let aggregation = if macro_avg { Aggregation::Macro } else { Aggregation::Micro };

    let mut present = domains(&records);
    present.sort_by_key(|d| d.to_string());
    let selected: Vec<Domain> = match domain {
        Some(d) => vec![d.into()],
        None if by_domain => present,
        None if present.len() > 1 => {
            return Err(Failure(
                Status::MixedDomains,
                format!("{}: corpus mixes plane and solid records; pass --domain or --by-domain", corpus.display()),
            ))
        }
        None => present,
    };
    if selected.is_empty() {
        return Err(Failure(Status::Findings, format!("{}: corpus is empty", corpus.display())));
    }

    let mut reports = Vec::new();
    for d in selected {
        reports.push((d, score_domain(&records, d, aggregation, mode)?));
    }
    if ctx.json {
        let value = if by_domain {
            Value::Object(reports.iter().map(|(d, r)| (d.to_string(), r.to_json())).collect())
        } else {
            reports[0].1.to_json()
        };
        ctx.out(&pretty(&value));
    } else {
        let tables: Vec<String> = reports.iter().map(|(_, r)| r.to_table()).collect();
        ctx.out(tables.join("\n").trim_end());
    }
    Ok(Status::Ok)
}

#[allow(clippy::too_many_arguments)]
fn cmd_reward(
    ctx: &Ctx,
    prediction: &Path,
    reference: &Path,
    domain: Option<DomainArg>,
    lambda1: Option<f64>,
    lambda2: Option<f64>,
    f1: bool,
    mode: ModeArgs,
) -> CmdResult {
    let pred = read_input(prediction)?;
    let reference_text = read_input(reference)?;
    let mut cfg = load_config(ctx.config.as_deref())?;
    cfg.lambda1 = lambda1.unwrap_or(cfg.lambda1);
    cfg.lambda2 = lambda2.unwrap_or(cfg.lambda2);
    if f1 {
        cfg.geo_metric = GeoMetric::F1;
    }
    cfg.mode = mode.apply(cfg.mode);
    let domain = domain.map_or_else(|| Domain::detect(&reference_text), Domain::from);
    match total_reward(&pred, &reference_text, domain, &cfg) {
        Ok(b) => {
            let value = serde_json::to_value(&b).expect("breakdown serializes");
            ctx.out(&pretty(&value));
            Ok(Status::Ok)
        }
        Err(RewardError::BadReference(problems)) => Err(Failure(
            Status::BadReference,
            format!("{}: invalid reference\n  {}", reference.display(), problems.join("\n  ")),
        )),
        Err(RewardError::Config(e)) => Err(Failure(Status::BadConfig, format!("invalid config: {e}"))),
        Err(e) => Err(Failure(Status::Findings, e.to_string())),
    }
}

fn cmd_serve(ctx: &Ctx, bind: SocketAddr) -> CmdResult {
    let cfg = load_config(ctx.config.as_deref())?;
    cfg.validate().map_err(|e| Failure(Status::BadConfig, format!("invalid config: {e}")))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure(Status::Io, e.to_string()))?;
    runtime
        .block_on(geoformal_server::serve(bind, cfg))
        .map_err(|e| Failure(Status::Io, format!("{bind}: {e}")))?;
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        config: cli.config,
        json: cli.json,
        quiet: cli.quiet,
    };
    let result = match cli.command {
        Command::Parse { input, domain, canon, mode } => cmd_parse(&ctx, &input, domain, canon, mode),
        Command::Check { input, domain, strict } => cmd_check(&ctx, &input, domain, strict),
        Command::Score {
            corpus,
            domain,
            macro_avg,
            by_domain,
            mode,
        } => cmd_score(&ctx, &corpus, domain, macro_avg, by_domain, mode),
        Command::Reward {
            prediction,
            reference,
            domain,
            lambda1,
            lambda2,
            f1,
            mode,
        } => cmd_reward(&ctx, &prediction, &reference, domain, lambda1, lambda2, f1, mode),
        Command::Serve { bind } => cmd_serve(&ctx, bind),
    };
    match result {
        Ok(status) => status.into(),
        Err(Failure(status, message)) => {
            eprintln!("error: {message}");
            status.into()
        }
    }
}
