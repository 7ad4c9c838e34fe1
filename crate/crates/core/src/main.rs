use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use so3braid::certificate::{Certificate, Certifier, SearchBudget, SearchOutcome};
use so3braid::classify::{classify_with, random_closed_path, ClassificationReport};
use so3braid::diagram;
use so3braid::extract::{choose_pole, extract_with_pole, project_with_frame, ExtractOptions};
use so3braid::quotient::{canonical_rep, sphere_class, z2_class};
use so3braid::rotation::RotationPath;
use so3braid::spherical::{trace, DEFAULT_MAX_STEP};
use so3braid::verify::{self, SuiteReport};
use so3braid::{BraidWord, Error};

#[derive(Parser)]
#[command(
    name = "so3braid",
    version,
    about = "Closed rotation paths, three-strand braids and the flip quotient"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Lemma1,
    Lemma1p,
    Prop1,
    Prop1p,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Ascii,
    Svg,
}

#[derive(clap::Args)]
struct Sampling {
    /// Largest rotation angle between consecutive samples.
    #[arg(long, default_value_t = DEFAULT_MAX_STEP)]
    theta_max: f64,
    /// Seed for projection-frame perturbations.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Sampling {
    fn options(&self) -> ExtractOptions {
        ExtractOptions {
            max_step: self.theta_max,
            seed: self.seed,
            ..ExtractOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify closed rotation paths by both routes.
    Classify {
        /// Path files; several may be given.
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[command(flatten)]
        sampling: Sampling,
        /// Worker threads for several inputs.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Extract the braid word of a closed path.
    Extract {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
        /// Also write the spherical braid samples here.
        #[arg(long)]
        dump_spherical: Option<PathBuf>,
        /// Also write the projected strands here.
        #[arg(long)]
        dump_planar: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Canonical representative of a word in B3/R.
    Reduce {
        /// Signed generator indices, e.g. "1 -2 1".
        #[arg(allow_hyphen_values = true)]
        word: String,
        /// Attach a rewriting certificate.
        #[arg(long)]
        certify: bool,
        /// State budget for certificate search.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        target: Target,
        /// Strand count for lemma1p (3..=7) and prop1p (3 or 4).
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Replay a certificate file.
    VerifyCert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a closed path.
    Gen {
        #[arg(long, default_value_t = 1)]
        turns: usize,
        /// Fixed axis "x,y,z"; random axes otherwise.
        #[arg(long, allow_hyphen_values = true)]
        axis: Option<String>,
        /// Add excursions that go out and straight back.
        #[arg(long)]
        wiggle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Draw a braid word.
    Diagram {
        #[arg(allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Internal(String),
    Disagreement(String),
    Inconclusive,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Input(_) => 2,
            Failure::Disagreement(_) => 3,
            Failure::Inconclusive => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Disagreement(_) => Failure::Disagreement(e.to_string()),
            Error::NumericalAmbiguity { .. }
            | Error::NoClearPole { .. }
            | Error::PoleCollision { .. }
            | Error::DegenerateCrossing { .. }
            | Error::TripleCrossing { .. }
            | Error::NotPureResult(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(output: Option<&Path>, value: &T) -> CliResult {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    text.push('\n');
    emit(output, &text)
}

fn load_path(file: &Path) -> Result<RotationPath, Failure> {
    Ok(RotationPath::from_json_str(&read(file)?)?)
}

fn budget(states: Option<usize>) -> SearchBudget {
    let mut b = SearchBudget::default();
    if let Some(s) = states {
        b.max_states = s;
    }
    b
}

#[derive(Serialize)]
#[serde(untagged)]
enum BatchItem {
    Report {
        input: String,
        report: ClassificationReport,
    },
    Failed {
        input: String,
        error: String,
        exit_code: u8,
    },
}

fn classify_one(
    file: &Path,
    opts: &ExtractOptions,
) -> Result<ClassificationReport, (Failure, Option<ClassificationReport>)> {
    let path = load_path(file).map_err(|f| (f, None))?;
    classify_with(&path, opts).map_err(|e| match e {
        Error::Disagreement(report) => {
            let f = Failure::Disagreement(format!(
                "{}: {}",
                file.display(),
                Error::Disagreement(report.clone())
            ));
            (f, Some(*report))
        }
        e => (Failure::from(e), None),
    })
}

fn cmd_classify(
    input: &[PathBuf],
    sampling: &Sampling,
    jobs: Option<usize>,
    output: Option<&Path>,
) -> CliResult {
    let opts = sampling.options();
    if let [single] = input {
        return match classify_one(single, &opts) {
            Ok(report) => emit_json(output, &report),
            Err((failure, report)) => {
                if let Some(r) = report {
                    emit_json(output, &r)?;
                }
                Err(failure)
            }
        };
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Internal(e.to_string()))?;
    let results: Vec<_> = pool.install(|| {
        input
            .par_iter()
            .map(|f| (f, classify_one(f, &opts)))
            .collect()
    });
    let mut worst: Option<Failure> = None;
    let items: Vec<BatchItem> = results
        .into_iter()
        .map(|(file, r)| {
            let name = file.display().to_string();
            match r {
                Ok(report) => BatchItem::Report {
                    input: name,
                    report,
                },
                Err((failure, _)) => {
                    let (error, code) = match &failure {
                        Failure::Input(m) | Failure::Internal(m) | Failure::Disagreement(m) => {
                            (m.clone(), failure.code())
                        }
                        Failure::Inconclusive => ("inconclusive".into(), failure.code()),
                    };
                    eprintln!("error: {name}: {error}");
                    if worst.as_ref().is_none_or(|w| w.code() < code) {
                        worst = Some(failure);
                    }
                    BatchItem::Failed {
                        input: name,
                        error,
                        exit_code: code,
                    }
                }
            }
        })
        .collect();
    emit_json(output, &items)?;
    match worst {
        // already reported per input
        Some(f) => Err(match f {
            Failure::Disagreement(_) => Failure::Disagreement(String::new()),
            Failure::Internal(_) => Failure::Internal(String::new()),
            _ => Failure::Input(String::new()),
        }),
        None => Ok(()),
    }
}

fn cmd_extract(
    input: &Path,
    sampling: &Sampling,
    dump_spherical: Option<&Path>,
    dump_planar: Option<&Path>,
    output: Option<&Path>,
) -> CliResult {
    let path = load_path(input)?;
    let opts = sampling.options();
    let sb = trace(&path, opts.max_step)?;
    if let Some(p) = dump_spherical {
        emit_json(Some(p), &sb)?;
    }
    let choice = choose_pole(&sb, opts.candidates)?;
    let ex = extract_with_pole(&sb, choice.pole, &opts)?;
    if let Some(p) = dump_planar {
        emit_json(Some(p), &project_with_frame(&sb, ex.pole, ex.frame_angle)?)?;
    }
    if !ex.word.is_pure() {
        return Err(Error::NotPureResult(ex.word.to_string()).into());
    }
    let class = sphere_class(&ex.word)?;
    emit_json(
        output,
        &json!({
            "n": 3,
            "word": ex.word.to_signed(),
            "sphere_class": class,
            "pole": <[f64; 3]>::from(ex.pole),
            "clearance": ex.clearance,
            "frame_angle": ex.frame_angle,
            "samples": ex.samples,
        }),
    )
}

fn cmd_reduce(
    word: &str,
    certify: bool,
    states: Option<usize>,
    output: Option<&Path>,
) -> CliResult {
    let w = BraidWord::parse(3, word)?;
    let class = sphere_class(&w)?;
    let canonical = canonical_rep(&class)?;
    let z2 = if w.is_pure() {
        Some(z2_class(&w)?)
    } else {
        None
    };
    let mut certificate: Option<Certificate> = None;
    let mut inconclusive = None;
    if certify {
        match Certifier::new(3, budget(states))?.certify_equal(&w, &canonical)? {
            SearchOutcome::Certified(c) => certificate = Some(c),
            SearchOutcome::Inconclusive { explored, reason } => {
                inconclusive = Some(format!("{reason} ({explored} states)"));
            }
        }
    }
    let mut value = json!({
        "input": w,
        "sphere_class": class,
        "canonical": canonical.to_string(),
        "canonical_word": canonical.to_signed(),
        "class": z2,
    });
    if let Some(c) = &certificate {
        value["certificate"] =
            serde_json::to_value(c).map_err(|e| Failure::Internal(e.to_string()))?;
    }
    if let Some(reason) = &inconclusive {
        value["inconclusive"] = json!(reason);
    }
    emit_json(output, &value)?;
    match inconclusive {
        Some(reason) => {
            eprintln!("inconclusive: {reason}");
            Err(Failure::Inconclusive)
        }
        None => Ok(()),
    }
}

fn suite_text(r: &SuiteReport) -> String {
    let mut out = String::new();
    for e in &r.entries {
        let status = serde_json::to_value(e.status).expect("status serializes");
        let status = status.as_str().unwrap_or("?");
        match &e.detail {
            Some(d) => out.push_str(&format!("{status:<13}{}  [{d}]\n", e.label)),
            None => out.push_str(&format!("{status:<13}{}\n", e.label)),
        }
    }
    let noun = match r.target.as_str() {
        "lemma1" | "lemma1p" => "identities verified",
        _ => "certificates found",
    };
    out.push_str(&format!("{}/{} {noun} (n = {})\n", r.passed, r.total, r.n));
    out
}

fn cmd_verify(
    target: Target,
    n: usize,
    states: Option<usize>,
    format: Format,
    output: Option<&Path>,
) -> CliResult {
    let report = match target {
        Target::Lemma1 => verify::lemma1()?,
        Target::Lemma1p => verify::lemma1_general(n)?,
        Target::Prop1 => verify::prop1(budget(states))?,
        Target::Prop1p => verify::prop1_general(n, budget(states))?,
    };
    match format {
        Format::Json => emit_json(output, &report)?,
        Format::Text => emit(output, &suite_text(&report))?,
        _ => {
            return Err(Failure::Input(
                "verify supports --format json or text".into(),
            ))
        }
    }
    if report.all_passed() {
        Ok(())
    } else if report.is_inconclusive() {
        Err(Failure::Inconclusive)
    } else {
        Err(Failure::Internal(format!(
            "{} of {} checks failed",
            report.total - report.passed,
            report.total
        )))
    }
}

fn cmd_verify_cert(input: &Path, output: Option<&Path>) -> CliResult {
    let cert: Certificate = serde_json::from_str(&read(input)?).map_err(Error::from)?;
    match cert.replay() {
        Ok(end) => emit_json(
            output,
            &json!({"valid": true, "steps": cert.len(), "start": cert.start, "end": end}),
        ),
        Err(e) => {
            emit_json(
                output,
                &json!({"valid": false, "steps": cert.len(), "start": cert.start, "error": e.to_string()}),
            )?;
            Err(e.into())
        }
    }
}

fn parse_axis(text: &str) -> Result<[f64; 3], Failure> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Input(format!("bad axis {text:?}, expected x,y,z")))?;
    <[f64; 3]>::try_from(parts)
        .map_err(|_| Failure::Input(format!("bad axis {text:?}, expected x,y,z")))
}

fn cmd_gen(
    turns: usize,
    axis: Option<&str>,
    wiggle: bool,
    seed: u64,
    output: Option<&Path>,
) -> CliResult {
    let path = match axis {
        Some(text) => {
            let a = parse_axis(text)?;
            let mut raw = vec![(a, std::f64::consts::TAU); turns];
            if wiggle {
                // borrow the excursions of a seeded random path
                let extra = random_closed_path(seed, 0, true);
                raw.extend(
                    extra
                        .segments()
                        .iter()
                        .map(|s| ([s.axis.x, s.axis.y, s.axis.z], s.angle)),
                );
            }
            RotationPath::from_segments(&raw)?
        }
        None => random_closed_path(seed, turns, wiggle),
    };
    emit_json(output, &path.to_json())
}

fn cmd_diagram(word: &str, n: usize, format: Format, output: Option<&Path>) -> CliResult {
    let w = BraidWord::parse(n, word)?;
    let text = match format {
        Format::Ascii | Format::Text => diagram::ascii(&w),
        Format::Svg => diagram::svg(&w),
        Format::Json => {
            return Err(Failure::Input(
                "diagram supports --format ascii or svg".into(),
            ))
        }
    };
    emit(output, &text)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Classify {
            input,
            sampling,
            jobs,
            output,
        } => cmd_classify(&input, &sampling, jobs, output.as_deref()),
        Command::Extract {
            input,
            sampling,
            dump_spherical,
            dump_planar,
            output,
        } => cmd_extract(
            &input,
            &sampling,
            dump_spherical.as_deref(),
            dump_planar.as_deref(),
            output.as_deref(),
        ),
        Command::Reduce {
            word,
            certify,
            budget,
            output,
        } => cmd_reduce(&word, certify, budget, output.as_deref()),
        Command::Verify {
            target,
            n,
            budget,
            format,
            output,
        } => cmd_verify(target, n, budget, format, output.as_deref()),
        Command::VerifyCert { input, output } => cmd_verify_cert(&input, output.as_deref()),
        Command::Gen {
            turns,
            axis,
            wiggle,
            seed,
            output,
        } => cmd_gen(turns, axis.as_deref(), wiggle, seed, output.as_deref()),
        Command::Diagram {
            word,
            n,
            format,
            output,
        } => cmd_diagram(&word, n, format, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) | Failure::Internal(m) | Failure::Disagreement(m)
                    if !m.is_empty() =>
                {
                    eprintln!("error: {m}");
                }
                _ => {}
            }
            ExitCode::from(f.code())
        }
    }
}
