//! The `thinpos` command line, callable in-process through [`run`].

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use thinpos::certs::{self, CertFamily, ReportFlags, SphereReport};
use thinpos::moves::{MoveKind, MoveTrace};
use thinpos::search::{self, AnnealSchedule, SearchParams, Strategy};
use thinpos::text::{self, ParseError};
use thinpos::twoside::{self, SweepParams, TwoSideError, TwoSidedConfig};
use thinpos::{MorsePresentation, Side};

/// Process exit codes. These are a scripting contract; do not renumber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    Violations = 1,
    Usage = 2,
    Exceeded = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "thinpos",
    version,
    about = "Width and thin position of Morse link presentations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a presentation file is well formed
    Validate { file: PathBuf },
    /// Print the width of a presentation
    Width { file: PathBuf },
    /// Print strand counts and thin/thick classes of every gap
    Profile {
        file: PathBuf,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Look for a thinner presentation using legal moves
    Search(SearchArgs),
    /// Replay a move trace against a presentation
    VerifyTrace { file: PathBuf, trace: PathBuf },
    /// Sweep two-sided strand configurations and check the width inequalities
    Oracle {
        #[arg(long, default_value_t = 10)]
        max_events: usize,
        /// Comma-separated puncture counts, each even and at least 2
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4])]
        punctures: Vec<usize>,
        /// Also admit colours that split off before their last step
        #[arg(long)]
        allow_split: bool,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Check every minimal interleaving of one two-sided configuration
    VerifyTwoside {
        config: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the strands on one side of a thin sphere, with the ids
    /// certificates refer to
    Strands {
        file: PathBuf,
        gap: usize,
        #[arg(value_enum)]
        side: SideArg,
        #[arg(long)]
        json: bool,
    },
    /// Audit compressing-disk certificates against a presentation
    CheckDisks {
        file: PathBuf,
        certs: PathBuf,
        #[command(flatten)]
        flags: FlagArgs,
        #[arg(long)]
        json: bool,
    },
    /// List what the width data says about every thin sphere
    Report {
        file: PathBuf,
        #[command(flatten)]
        flags: FlagArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    file: PathBuf,
    #[arg(long)]
    strategy: Strategy,
    #[arg(long)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the move trace as JSON
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the best presentation found
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = AnnealSchedule::default().initial_temperature)]
    temperature: f64,
    #[arg(long, default_value_t = AnnealSchedule::default().decay)]
    decay: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SideArg {
    Above,
    Below,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Above => Side::Above,
            SideArg::Below => Side::Below,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct FlagArgs {
    /// The link is a knot
    #[arg(long)]
    knot: bool,
    /// The link is prime
    #[arg(long)]
    prime: bool,
}

impl From<FlagArgs> for ReportFlags {
    fn from(f: FlagArgs) -> Self {
        ReportFlags {
            knot: f.knot,
            prime: f.prime,
        }
    }
}

/// Failure that ends a subcommand early, with the status it maps to.
struct Failure {
    status: ExitStatus,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            status: ExitStatus::Usage,
            message: message.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<ExitStatus, Failure>;

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    ExitStatus::Ok
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    ExitStatus::Usage
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(status) => status,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file, out),
        Command::Width { file } => {
            let pres = load(&file)?;
            writeln!(out, "width: {}", pres.width())?;
            Ok(ExitStatus::Ok)
        }
        Command::Profile { file, json, csv } => {
            let profile = load(&file)?.profile();
            if json {
                writeln!(out, "{}", text::profile_json(&profile))?;
            } else if csv {
                write!(out, "{}", text::profile_csv(&profile))?;
            } else {
                writeln!(out, "width: {}", profile.width)?;
                writeln!(out, "ladder: [{}]", join(profile.ladder.values()))?;
                for (i, g) in profile.gaps.iter().enumerate() {
                    writeln!(out, "gap {i}: {} {}", g.count, g.class.as_str())?;
                }
            }
            Ok(ExitStatus::Ok)
        }
        Command::Search(args) => run_search(args, out),
        Command::VerifyTrace { file, trace } => {
            let pres = load(&file)?;
            let trace = MoveTrace::from_json(&read(&trace)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", trace.display())))?;
            match search::verify_trace(&pres, &trace) {
                Ok(end) => {
                    writeln!(
                        out,
                        "trace ok: {} steps, width {} -> {}",
                        trace.len(),
                        pres.width(),
                        end.width()
                    )?;
                    Ok(ExitStatus::Ok)
                }
                Err(d) => {
                    writeln!(out, "trace diverges at step {}: {d}", d.step())?;
                    Ok(ExitStatus::Violations)
                }
            }
        }
        Command::Oracle {
            max_events,
            punctures,
            allow_split,
            threads,
            json,
        } => {
            if threads == Some(0) {
                return Err(Failure::usage("--threads must be positive"));
            }
            let params = SweepParams {
                max_events,
                punctures,
                unsplit_only: !allow_split,
                threads,
            };
            let report = twoside::sweep(&params).map_err(twoside_failure)?;
            if json {
                writeln!(out, "{}", report.to_json())?;
            } else {
                for v in &report.verdicts {
                    writeln!(
                        out,
                        "{:<18} {} applicable, {} violations",
                        v.check.slug(),
                        v.applicable,
                        v.violations
                    )?;
                }
                for cv in &report.violations {
                    let c = cv.config.replace('\n', "; ");
                    let v = &cv.violation;
                    writeln!(
                        out,
                        "violation [{}] {c} {}: {}",
                        v.check.slug(),
                        v.interleaving,
                        v.detail
                    )?;
                }
                writeln!(out, "{}", report.summary())?;
            }
            Ok(if report.violation_count() == 0 {
                ExitStatus::Ok
            } else {
                ExitStatus::Violations
            })
        }
        Command::VerifyTwoside { config, json } => {
            let config = TwoSidedConfig::parse(&read(&config)?).map_err(twoside_failure)?;
            let report = twoside::verify_config(&config).map_err(twoside_failure)?;
            if json {
                writeln!(out, "{}", report.to_json())?;
            } else {
                writeln!(out, "interleavings: {}", report.interleavings)?;
                writeln!(out, "minimal width: {}", report.min_width)?;
                for il in &report.minimal {
                    writeln!(out, "minimal: {il}")?;
                }
                for v in &report.verdicts {
                    let mark = if v.passed() { "pass" } else { "FAIL" };
                    writeln!(out, "{mark} {} ({} applicable)", v.check.slug(), v.applicable)?;
                    if let Some(w) = &v.witness {
                        writeln!(out, "  {}: {}", w.interleaving, w.detail)?;
                    }
                }
            }
            Ok(if report.passed() {
                ExitStatus::Ok
            } else {
                ExitStatus::Violations
            })
        }
        Command::Strands { file, gap, side, json } => {
            let pres = load(&file)?;
            let profile = pres.profile();
            let ctx =
                certs::SphereSide::new(&pres, &profile, gap, side.into()).map_err(|e| Failure::usage(e.to_string()))?;
            if json {
                let value = serde_json::to_string_pretty(&ctx.region.strands).expect("strands serialize");
                writeln!(out, "{value}")?;
            } else {
                writeln!(out, "potentially alternating: [{}]", join(&ctx.potentially_alternating))?;
                for s in &ctx.region.strands {
                    writeln!(
                        out,
                        "strand {}: punctures [{}], critical events [{}]",
                        s.id,
                        join(&s.punctures),
                        join(&s.critical_events)
                    )?;
                }
            }
            Ok(ExitStatus::Ok)
        }
        Command::CheckDisks {
            file,
            certs,
            flags,
            json,
        } => {
            let pres = load(&file)?;
            let family = CertFamily::from_json(&read(&certs)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", certs.display())))?;
            let report = certs::audit(&family, &pres, flags.into()).map_err(|e| Failure::usage(e.to_string()))?;
            if json {
                writeln!(out, "{}", report.to_json())?;
            } else {
                for f in &report.families {
                    writeln!(out, "sphere {} {}:", f.sphere, f.side.as_str())?;
                    for (i, h) in &f.heights {
                        match h {
                            Some(h) => writeln!(out, "  certificate {i}: height {h}")?,
                            None => writeln!(out, "  certificate {i}: no height")?,
                        }
                    }
                    for v in &f.violations {
                        writeln!(out, "  violation {v}")?;
                    }
                    for w in &f.warnings {
                        writeln!(out, "  warning {w}")?;
                    }
                }
                for p in &report.pairs {
                    let status = serde_json::to_value(p.status).expect("status serializes");
                    writeln!(
                        out,
                        "pair {} above / {} below: {}",
                        p.up,
                        p.low,
                        status.as_str().unwrap_or_default()
                    )?;
                    for v in &p.violations {
                        writeln!(out, "  violation {v}")?;
                    }
                }
                writeln!(out, "{} violations", report.violation_count())?;
            }
            Ok(if report.is_clean() {
                ExitStatus::Ok
            } else {
                ExitStatus::Violations
            })
        }
        Command::Report { file, flags, json } => {
            let pres = load(&file)?;
            let reports = certs::sphere_report(&pres, flags.into());
            if json {
                let value = serde_json::to_string_pretty(&reports).expect("report serializes");
                writeln!(out, "{value}")?;
            } else {
                write!(out, "{}", render_report(&reports))?;
            }
            Ok(ExitStatus::Ok)
        }
    }
}

fn validate(file: &Path, out: &mut dyn Write) -> Outcome {
    let source = read(file)?;
    match text::parse(&source) {
        Ok(pres) => {
            let report = pres.report();
            writeln!(
                out,
                "valid: {} events, {} components, width {}",
                pres.len(),
                report.components,
                pres.width()
            )?;
            if report.assumes_unsplit_caveat() {
                writeln!(out, "note: the presentation is visibly split or has several components")?;
            }
            Ok(ExitStatus::Ok)
        }
        Err(e @ ParseError::Syntax { .. }) => Err(Failure::usage(format!("{}:{e}", file.display()))),
        Err(e @ ParseError::Semantic { .. }) => Err(Failure {
            status: ExitStatus::Violations,
            message: format!("{}:{e}", file.display()),
        }),
    }
}

fn run_search(args: SearchArgs, out: &mut dyn Write) -> Outcome {
    let pres = load(&args.file)?;
    let mut params = SearchParams::new(args.strategy, args.budget).with_seed(args.seed);
    params.threads = args.threads;
    params.schedule = AnnealSchedule {
        initial_temperature: args.temperature,
        decay: args.decay,
    };
    let outcome = search::search(&pres, &params).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(out, "start width: {}", outcome.start_width)?;
    writeln!(out, "best width: {}", outcome.best_width)?;
    writeln!(out, "moves: {}", outcome.trace.len())?;
    if let Some(last) = outcome.trace.steps.last() {
        let kind = match last.kind {
            MoveKind::Exchange => "exchange",
            MoveKind::Cancel => "cancel",
        };
        writeln!(out, "last move: {kind} {}", last.index)?;
    }
    writeln!(out, "states expanded: {}", outcome.states_expanded)?;
    if let Some(path) = &args.trace {
        fs::write(path, outcome.trace.to_json() + "\n")?;
    }
    if let Some(path) = &args.output {
        fs::write(path, text::serialize(&outcome.best))?;
    }
    if outcome.budget_exhausted {
        writeln!(out, "budget exhausted; best width is best so far")?;
        return Ok(ExitStatus::Exceeded);
    }
    Ok(ExitStatus::Ok)
}

/// Plain-text rendering of [`certs::sphere_report`], one block per thin gap.
pub fn render_report(reports: &[SphereReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&format!("gap {} (width {}, rank {})\n", r.gap, r.width, r.rank));
        s.push_str(&format!(
            "  potentially alternating above: [{}]\n",
            join(&r.potentially_alternating_above)
        ));
        s.push_str(&format!(
            "  potentially alternating below: [{}]\n",
            join(&r.potentially_alternating_below)
        ));
        for v in &r.verdicts {
            s.push_str(&format!("  {v}\n"));
        }
    }
    if reports.is_empty() {
        s.push_str("no thin gaps\n");
    }
    s
}

fn twoside_failure(e: TwoSideError) -> Failure {
    let status = match e {
        TwoSideError::CapExceeded { .. } => ExitStatus::Exceeded,
        _ => ExitStatus::Usage,
    };
    Failure {
        status,
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<MorsePresentation, Failure> {
    text::parse(&read(path)?).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn join(values: &[usize]) -> String {
    values.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
}
