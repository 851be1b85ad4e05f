//! Problem files, subcommand dispatch and text/JSON emission for the `bsato` tool.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use bsato_core::bsato::{check_global_local, present_ideal, Analysis, Problem, Stratum, VerificationReport};
use bsato_core::ideals::IdealHandle;
use bsato_core::{budget, parse_polynomial, Error, Polynomial, Rational, VarUniverse};
use serde::{Deserialize, Serialize};

/// Input document: `{ "vars": [...], "polys": [...], "point": [...] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub vars: Vec<String>,
    pub polys: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Coordinate>>,
}

/// A point coordinate, written either as a JSON integer or as a string `p/q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Int(i64),
    Text(String),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Usage(_)) | CliError::Core(Error::Syntax { .. }) => 2,
            CliError::Core(_) => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// A parsed problem together with the point given in the file, if any.
#[derive(Clone, Debug)]
pub struct ParsedProblem {
    pub problem: Problem,
    pub point: Option<Vec<Rational>>,
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<ParsedProblem, CliError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| usage(format!("invalid problem file: {e}")))?;
    problem_from_file(&file)
}

pub fn problem_from_file(file: &ProblemFile) -> Result<ParsedProblem, CliError> {
    let x = VarUniverse::polynomial_ring(file.vars.iter().cloned())?;
    let mut f = Vec::with_capacity(file.polys.len());
    for (k, text) in file.polys.iter().enumerate() {
        let p = parse_polynomial(text, &x).map_err(|e| match e {
            Error::Syntax { column, message } => {
                usage(format!("polys[{k}] `{text}`: syntax error at line 1, column {column}: {message}"))
            }
            other => usage(format!("polys[{k}] `{text}`: {other}")),
        })?;
        if p.is_zero() {
            return Err(usage(format!("polys[{k}] is the zero polynomial")));
        }
        f.push(p);
    }
    let problem = Problem::new(f)?;
    let point = match &file.point {
        None => None,
        Some(coords) => Some(parse_coordinates(&problem, coords)?),
    };
    Ok(ParsedProblem { problem, point })
}

fn parse_coordinates(problem: &Problem, coords: &[Coordinate]) -> Result<Vec<Rational>, CliError> {
    let text: Vec<String> = coords
        .iter()
        .map(|c| match c {
            Coordinate::Int(v) => v.to_string(),
            Coordinate::Text(s) => s.clone(),
        })
        .collect();
    if text.iter().any(|c| c.contains(',')) {
        return Err(usage("point coordinates must be single rationals"));
    }
    Ok(problem.parse_point(&text.join(","))?)
}

/// The problem file describing `problem` (and `point`, if given).
pub fn problem_file(problem: &Problem, point: Option<&[Rational]>) -> ProblemFile {
    let x = &problem.rings().x;
    ProblemFile {
        vars: (0..x.len()).map(|i| x.name(i).to_string()).collect(),
        polys: problem.f().iter().map(|p| p.to_string()).collect(),
        point: point.map(|a| a.iter().map(|c| Coordinate::Text(c.to_string())).collect()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Global,
    Local,
    Stratify,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Global => "global",
            Command::Local => "local",
            Command::Stratify => "stratify",
            Command::Check => "check",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub input: Option<PathBuf>,
    /// Comma-separated rationals; overrides the point of the problem file.
    pub point: Option<String>,
    pub format: Format,
    pub verify: bool,
    pub timeout: Option<f64>,
}

/// What the process prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Emission {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// JSON report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub generators: Vec<String>,
    pub strata: Vec<StratumReport>,
    pub verification: Option<VerificationBlock>,
    pub timings: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StratumReport {
    /// Component indices, from 1.
    pub sigma: Vec<usize>,
    pub closed: Vec<String>,
    pub open: Vec<Vec<String>>,
    pub bideal: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerificationBlock {
    pub passed: bool,
    pub annihilates: Option<bool>,
    pub groebner: Option<bool>,
    pub decomposition: Option<bool>,
    pub decomposition_detail: Option<String>,
    pub global_matches_components: Option<bool>,
}

impl From<&VerificationReport> for VerificationBlock {
    fn from(r: &VerificationReport) -> Self {
        VerificationBlock {
            passed: r.passed(),
            annihilates: r.annihilates,
            groebner: r.groebner,
            decomposition: r.decomposition.as_ref().map(|d| d.passed()),
            decomposition_detail: r.decomposition.as_ref().map(|d| {
                let mut s = d.to_string();
                for f in &d.failures {
                    let _ = write!(s, "; {f}");
                }
                s
            }),
            global_matches_components: r.global_matches_components,
        }
    }
}

/// Reads the problem named by `opts.input` and runs `command` on it.
pub fn run(command: Command, opts: &Options) -> Emission {
    let Some(path) = &opts.input else {
        return failure(&usage("--input <path> is required"), None);
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return failure(&usage(format!("cannot read {}: {e}", path.display())), None),
    };
    run_text(command, &text, opts)
}

/// Runs `command` on the contents of a problem file.
pub fn run_text(command: Command, text: &str, opts: &Options) -> Emission {
    let parsed = match parse_problem(text) {
        Ok(p) => p,
        Err(e) => return failure(&e, None),
    };
    let point = match (&opts.point, parsed.point) {
        (Some(p), _) => match parsed.problem.parse_point(p) {
            Ok(a) => Some(a),
            Err(e) => return failure(&e.into(), None),
        },
        (None, a) => a,
    };
    if command == Command::Local && point.is_none() {
        return failure(&usage("`local` needs a point (--point or the `point` field of the problem file)"), None);
    }
    let deadline = match opts.timeout {
        Some(t) if !(t.is_finite() && t >= 0.0) => return failure(&usage("--timeout must be a non-negative number of seconds"), None),
        Some(t) => Some(Instant::now() + Duration::from_secs_f64(t)),
        None => None,
    };
    let mut analysis = Analysis::new(parsed.problem);
    let outcome = budget::with_deadline(deadline, || execute(command, &mut analysis, point.as_deref(), opts.verify));
    let rendered = outcome.and_then(|c| match opts.format {
        Format::Json => Ok(serde_json::to_string_pretty(&to_report(&c)?).expect("report serializes") + "\n"),
        Format::Text => render_text(&c),
    });
    match rendered {
        Ok(stdout) => Emission { status: 0, stdout, stderr: String::new() },
        Err(e) => failure(&e, Some(&analysis)),
    }
}

fn failure(e: &CliError, analysis: Option<&Analysis>) -> Emission {
    let mut stderr = format!("error: {e}\n");
    if let Some(an) = analysis {
        if let CliError::Core(Error::Timeout { stage }) = e {
            let _ = writeln!(stderr, "stage reached: {stage}");
        }
        if !an.timings().is_empty() {
            let _ = writeln!(stderr, "completed stages:");
            for (stage, secs) in an.timings() {
                let _ = writeln!(stderr, "  {stage}: {secs:.3}s");
            }
        }
    }
    Emission { status: e.exit_code(), stdout: String::new(), stderr }
}

fn cleared(ideal: &IdealHandle) -> Result<Vec<String>, CliError> {
    Ok(ideal.canonical_basis()?.iter().map(|g| g.to_cleared_string()).collect())
}

fn cleared_polys(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|g| g.to_cleared_string()).collect()
}

fn stratum_report(st: &Stratum) -> Result<StratumReport, CliError> {
    Ok(StratumReport {
        sigma: st.sigma.iter().map(|i| i + 1).collect(),
        closed: cleared_polys(&st.closed_conditions),
        open: st.open_conditions.iter().map(|set| cleared_polys(set)).collect(),
        bideal: cleared(&st.bideal)?,
    })
}

/// Everything a command produced, before formatting.
struct Computed {
    command: Command,
    ideal: Option<IdealHandle>,
    point: Option<Vec<Rational>>,
    strata: Vec<Stratum>,
    outcome: Option<String>,
    verification: Option<VerificationReport>,
    timings: BTreeMap<String, f64>,
}

fn execute(command: Command, an: &mut Analysis, point: Option<&[Rational]>, verify: bool) -> Result<Computed, CliError> {
    let mut out = Computed {
        command,
        ideal: None,
        point: None,
        strata: Vec::new(),
        outcome: None,
        verification: None,
        timings: BTreeMap::new(),
    };
    match command {
        Command::Global => out.ideal = Some(an.global()?.clone()),
        Command::Local => {
            let a = point.expect("checked by the caller");
            out.ideal = Some(an.local(a)?);
            out.point = Some(a.to_vec());
        }
        Command::Stratify => {
            an.global()?;
            out.strata = an.strata()?.to_vec();
        }
        Command::Check => {
            let result = an.result()?;
            out.outcome = Some(check_global_local(&result)?.outcome.to_string());
            out.ideal = Some(result.global);
            out.strata = result.strata;
        }
    }
    if verify {
        out.verification = Some(an.verify()?);
    }
    for (stage, secs) in an.timings() {
        *out.timings.entry(stage.clone()).or_insert(0.0) += secs;
    }
    Ok(out)
}

fn to_report(c: &Computed) -> Result<Report, CliError> {
    let generators = match &c.ideal {
        Some(i) => cleared(i)?,
        None => Vec::new(),
    };
    let principal = match c.command {
        Command::Global | Command::Local => Some(generators.len() == 1),
        _ => None,
    };
    Ok(Report {
        command: c.command.name().to_string(),
        generators,
        strata: c.strata.iter().map(stratum_report).collect::<Result<_, _>>()?,
        verification: c.verification.as_ref().map(VerificationBlock::from),
        timings: c.timings.clone(),
        point: c.point.as_ref().map(|a| a.iter().map(|x| x.to_string()).collect()),
        principal,
        outcome: c.outcome.clone(),
    })
}

fn ideal_line(ideal: &IdealHandle) -> Result<String, CliError> {
    Ok(format!("<{}>", present_ideal(ideal)?.join(", ")))
}

fn joined(ps: &[Polynomial]) -> String {
    cleared_polys(ps).join(", ")
}

/// Human-readable rendering; contains no timings, so it is byte-stable.
fn render_text(c: &Computed) -> Result<String, CliError> {
    let mut out = String::new();
    match c.command {
        Command::Global | Command::Local => {
            let ideal = c.ideal.as_ref().expect("set for global and local");
            let head = match &c.point {
                Some(a) => {
                    let coords: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                    format!("local Bernstein-Sato ideal at ({})", coords.join(","))
                }
                None => "global Bernstein-Sato ideal".to_string(),
            };
            let gens = present_ideal(ideal)?;
            let _ = writeln!(out, "{head}:");
            for g in &gens {
                let _ = writeln!(out, "  {g}");
            }
            let _ = writeln!(out, "principal: {}", if gens.len() == 1 { "yes" } else { "no" });
        }
        Command::Stratify | Command::Check => {
            if let (Some(outcome), Some(global)) = (&c.outcome, &c.ideal) {
                let _ = writeln!(out, "check: {outcome}");
                let _ = writeln!(out, "global: {}", ideal_line(global)?);
            }
            let _ = writeln!(out, "strata: {}", c.strata.len());
            for st in &c.strata {
                let sigma: Vec<String> = st.sigma.iter().map(|i| (i + 1).to_string()).collect();
                let _ = writeln!(out, "sigma {{{}}}", sigma.join(","));
                let closed = if st.closed_conditions.is_empty() { "-".to_string() } else { joined(&st.closed_conditions) };
                let _ = writeln!(out, "  vanish: {closed}");
                let open: Vec<String> = st.open_conditions.iter().map(|set| format!("V({})", joined(set))).collect();
                let open = if open.is_empty() { "-".to_string() } else { open.join("; ") };
                let _ = writeln!(out, "  avoid: {open}");
                let _ = writeln!(out, "  bideal: {}", ideal_line(&st.bideal)?);
            }
        }
    }
    if let Some(v) = &c.verification {
        let mark = |b: Option<bool>| match b {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "not run",
        };
        let _ = writeln!(out, "verification: {}", if v.passed() { "passed" } else { "FAILED" });
        let _ = writeln!(out, "  annihilator kills f^s: {}", mark(v.annihilates));
        let _ = writeln!(out, "  groebner bases: {}", mark(v.groebner));
        match &v.decomposition {
            Some(d) => {
                let _ = writeln!(out, "  decomposition: {} ({d})", mark(Some(d.passed())));
                for f in &d.failures {
                    let _ = writeln!(out, "    {f}");
                }
            }
            None => {
                let _ = writeln!(out, "  decomposition: not run");
            }
        }
        let _ = writeln!(out, "  global from components: {}", mark(v.global_matches_components));
    }
    Ok(out)
}
