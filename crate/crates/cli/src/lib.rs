//! Argument parsing and dispatch for the `splitpanel` binary.
//!
//! [`run`] takes the full argv and two sinks so that tests can drive the
//! command line without spawning processes. Exit codes: 0 on success, 1 on
//! a domain error (`error: <Name>: <message>` on the error sink), 2 on a
//! usage error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use splitpanel::counting::{r_min, ratio_check, CountingConfig};
use splitpanel::nodal::{
    admissible_smoothings, degbd, glue, sharpness_witness, AlignmentSpec, NodalType,
};
use splitpanel::rational::{parse_rational, Rational};
use splitpanel::splitting::SplittingType;
use splitpanel::stability::{balance_with, sp_feasible, BalanceOptions, Policy};
use splitpanel::variety::{esp, liberated_lower_bound, validate};
use splitpanel::{Error, ModelFile};

#[derive(Debug, Parser)]
#[command(
    name = "splitpanel",
    version,
    about = "Splitting types, slope panels and curve counts"
)]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Slope panel and minimal slope ratio of a splitting type.
    Sp(SpArgs),
    /// Lower bound on the degree of rank-m quotients after smoothing.
    Degbd(DegbdArgs),
    /// Splitting types that can occur on a general smoothing.
    Smooth(SmoothArgs),
    /// Glue two splitting types at a node.
    Glue(GlueArgs),
    /// Repeated glue-and-smooth balancing.
    Balance(BalanceArgs),
    /// Expected slope panel of a curve class.
    Esp(EspArgs),
    /// Counting-function table and ratio check.
    Count(CountArgs),
    /// Validate a model file.
    Check(CheckArgs),
}

fn parse_type(s: &str) -> Result<SplittingType, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_nodal(s: &str) -> Result<NodalType, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_align(s: &str) -> Result<AlignmentSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_policy(s: &str) -> Result<Policy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A curve class given as `c1,c2,...`.
#[derive(Debug, Clone)]
struct Class(Vec<i64>);

fn parse_class(s: &str) -> Result<Class, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad class entry {t:?}: {e}"))
        })
        .collect::<Result<_, _>>()
        .map(Class)
}

#[derive(Debug, Args)]
struct SpArgs {
    #[arg(long = "type", value_parser = parse_type, allow_hyphen_values = true)]
    ty: SplittingType,
    /// Also compare with the expected slope panel of this model.
    #[arg(long, requires = "class")]
    model: Option<PathBuf>,
    #[arg(long, value_parser = parse_class, allow_hyphen_values = true, requires = "model")]
    class: Option<Class>,
}

#[derive(Debug, Args)]
struct DegbdArgs {
    #[arg(long, value_parser = parse_nodal, allow_hyphen_values = true)]
    nodal: NodalType,
    #[arg(long)]
    m: usize,
    /// Print an optimal quotient achieving the bound.
    #[arg(long)]
    witness: bool,
}

#[derive(Debug, Args)]
struct SmoothArgs {
    #[arg(long, value_parser = parse_nodal, allow_hyphen_values = true)]
    nodal: NodalType,
    /// Keep only sequential types.
    #[arg(long, num_args = 0..=1, default_value = "false", default_missing_value = "true")]
    sequential: bool,
}

#[derive(Debug, Args)]
struct GlueArgs {
    /// One type (glued to itself) or two types.
    #[arg(long = "type", value_parser = parse_type, allow_hyphen_values = true, num_args = 1, required = true)]
    types: Vec<SplittingType>,
    #[arg(long, value_parser = parse_align, default_value = "dual")]
    align: AlignmentSpec,
}

#[derive(Debug, Args)]
struct BalanceArgs {
    #[arg(long = "type", value_parser = parse_type, allow_hyphen_values = true)]
    ty: SplittingType,
    #[arg(long, value_parser = parse_policy, default_value = "worst")]
    policy: Policy,
    /// Restrict smoothings to sequential types.
    #[arg(long, num_args = 0..=1, default_value = "true", default_missing_value = "true")]
    sequential: bool,
    #[arg(long, default_value_t = 8)]
    max_steps: usize,
}

#[derive(Debug, Args)]
struct EspArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_parser = parse_class, allow_hyphen_values = true)]
    class: Class,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 1)]
    dmin: u64,
    #[arg(long, default_value_t = 10)]
    dmax: u64,
    /// Override the model's q.
    #[arg(long, value_parser = parse_rat)]
    q: Option<Rational>,
    /// Override the model's delta.
    #[arg(long, value_parser = parse_rat)]
    delta: Option<Rational>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    model: PathBuf,
}

enum Failure {
    Domain(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_sp(a: &SpArgs, out: &mut dyn Write) -> Outcome {
    let panel = a.ty.slope_panel()?;
    let min = a.ty.minimal_slope_ratio()?;
    writeln!(out, "panel: {panel}  min_ratio: {min}")?;
    if let (Some(path), Some(Class(class))) = (&a.model, &a.class) {
        let file = ModelFile::load(path)?;
        let model = &file.model;
        let expected = esp(model, class)?;
        let deg = model.degree(class);
        if a.ty.rank() != model.dim || a.ty.total_degree() != deg {
            return Err(Error::ShapeMismatch {
                rank_a: a.ty.rank(),
                degree_a: a.ty.total_degree(),
                rank_b: model.dim,
                degree_b: deg,
            }
            .into());
        }
        let f = model.filtration_at(class)?;
        writeln!(out, "esp: {expected}")?;
        writeln!(
            out,
            "hn_bound: {}  feasible: {}",
            f.deviation_bound(),
            yes_no(sp_feasible(&a.ty, &f)?)
        )?;
    }
    Ok(())
}

fn cmd_degbd(a: &DegbdArgs, out: &mut dyn Write) -> Outcome {
    if a.witness {
        write!(out, "{}", sharpness_witness(&a.nodal, a.m)?)?;
    } else {
        writeln!(out, "{}", degbd(&a.nodal, a.m)?)?;
    }
    Ok(())
}

fn cmd_smooth(a: &SmoothArgs, out: &mut dyn Write) -> Outcome {
    for t in admissible_smoothings(&a.nodal, a.sequential) {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

fn cmd_glue(a: &GlueArgs, out: &mut dyn Write) -> Outcome {
    let (first, second) = match a.types.as_slice() {
        [t] => (t, t),
        [s, t] => (s, t),
        _ => {
            return Err(Error::Parse {
                what: "glue arguments",
                detail: format!("expected one or two --type values, got {}", a.types.len()),
            }
            .into())
        }
    };
    let align = a.align.resolve(first.rank())?;
    writeln!(out, "{}", glue(first, second, &align)?)?;
    Ok(())
}

fn cmd_balance(a: &BalanceArgs, out: &mut dyn Write) -> Outcome {
    let opts = BalanceOptions {
        policy: a.policy,
        sequential: a.sequential,
    };
    write!(out, "{}", balance_with(&a.ty, a.max_steps, opts)?)?;
    Ok(())
}

fn cmd_esp(a: &EspArgs, out: &mut dyn Write) -> Outcome {
    let file = ModelFile::load(&a.model)?;
    let class = &a.class.0;
    let panel = esp(&file.model, class)?;
    writeln!(out, "esp: {panel}")?;
    writeln!(
        out,
        "degree: {}  min: {}  liberated_bound: {}",
        file.model.degree(class),
        panel.minimum(),
        liberated_lower_bound(&file.model, class)?
    )?;
    Ok(())
}

fn cmd_count(a: &CountArgs, out: &mut dyn Write) -> Outcome {
    let file = ModelFile::load(&a.model)?;
    let mut cfg = match file.counting {
        Some(c) => c,
        None => CountingConfig::simple(Rational::from_integer(2.into()), file.model.rho)?,
    };
    if let Some(q) = &a.q {
        cfg.q = q.clone();
    }
    if let Some(delta) = &a.delta {
        cfg.delta = delta.clone();
    }
    cfg.validate()?;
    if a.dmin == 0 || a.dmin > a.dmax {
        return Err(
            Error::InvalidConfig(format!("empty degree range {}..={}", a.dmin, a.dmax)).into(),
        );
    }
    let report = ratio_check(&file.model, &cfg, a.dmin..=a.dmax)?;
    writeln!(
        out,
        "# r_min: {}  q: {}  eps: {}",
        r_min(&file.model)?,
        cfg.q,
        cfg.eps
    )?;
    write!(out, "{report}")?;
    Ok(())
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Outcome {
    let file = ModelFile::load(&a.model)?;
    let m = &file.model;
    writeln!(
        out,
        "dim: {}  rho: {}  chambers: {}",
        m.dim,
        m.rho,
        m.chambers.len()
    )?;
    let rays = m.nef_rays()?;
    for r in &rays {
        let deg = m.degree(r);
        match esp(m, r) {
            Ok(p) => writeln!(out, "ray {}: degree {deg}  esp {p}", join(r))?,
            Err(e) => writeln!(out, "ray {}: degree {deg}  esp {}", join(r), e.name())?,
        }
    }
    let report = validate(m);
    write!(out, "{report}")?;
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{} violation(s)", report.violations.len())).into())
    }
}

fn join(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    parts.join(",")
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Sp(a) => cmd_sp(a, out),
        Command::Degbd(a) => cmd_degbd(a, out),
        Command::Smooth(a) => cmd_smooth(a, out),
        Command::Glue(a) => cmd_glue(a, out),
        Command::Balance(a) => cmd_balance(a, out),
        Command::Esp(a) => cmd_esp(a, out),
        Command::Count(a) => cmd_count(a, out),
        Command::Check(a) => cmd_check(a, out),
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };

    let mut buffer = Vec::new();
    let outcome = dispatch(&cli.command, &mut buffer);
    let flushed = match &cli.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(&buffer)),
        None => out.write_all(&buffer),
    };
    match (outcome, flushed) {
        (Ok(()), Ok(())) => 0,
        (Err(Failure::Domain(e)), _) => {
            let _ = writeln!(err, "error: {}: {e}", e.name());
            1
        }
        (Err(Failure::Io(e)), _) | (Ok(()), Err(e)) => {
            let _ = writeln!(err, "error: Io: {e}");
            1
        }
    }
}
