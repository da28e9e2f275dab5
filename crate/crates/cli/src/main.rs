//! `x2susy`: batch front end for the verification engine.
//!
//! Exit codes: 0 success, 1 a check failed or an internal error, 2 invalid
//! input.

mod config;
mod render;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use x2susy::exactalg::rational::{to_pq, Rational};
use x2susy::laguerre::{first_kind_relations, gram_schmidt_support, restricted_matrix, second_kind_relations};
use x2susy::models::{make_model, potential_table, sector_preservation_numeric, write_table, ExampleId, TableFormat};
use x2susy::qalgebra::Sign;
use x2susy::quasiops::{build, build_check_h_plus, build_h_minus, Family};
use x2susy::susybuild::{build_p_minus, build_p_plus};
use x2susy::verify::{self, Stage, VerifyConfig};
use x2susy::{Error, ParamContext};

use config::{CliError, FileConfig, Resolved};

#[derive(Parser, Debug)]
#[command(name = "x2susy", version, about = "Exact verification and numeric models for X2 N-fold SUSY systems")]
struct Cli {
    /// TOML file with default values for any flag (flags take precedence).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification stages and emit a report.
    Verify(VerifyArgs),
    /// Tabulate V-, V+ and the minus-sector functions of an example.
    Potential(TableArgs),
    /// Restricted matrix and eigenvalues of a gauged Hamiltonian.
    Spectrum(SpectrumArgs),
    /// Tabulate the sector functions of one partner.
    Sector(SectorArgs),
    /// Print an operator.
    ShowOp(ShowOpArgs),
    /// Laguerre relation checks and Gram-Schmidt comparison.
    Laguerre(LaguerreArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Minus,
    Plus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Minus => Sign::Minus,
            SignArg::Plus => Sign::Plus,
        }
    }
}

/// Parameters shared by the single-context commands.
#[derive(Args, Debug, Default, Clone)]
pub struct ParamArgs {
    /// `α` as "p/q".
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub enn: Option<u32>,
    #[arg(long)]
    pub a1: Option<String>,
    #[arg(long)]
    pub a2: Option<String>,
    #[arg(long)]
    pub a3: Option<String>,
    #[arg(long)]
    pub a4: Option<String>,
    #[arg(long)]
    pub c0: Option<String>,
    /// Worked example (1 rational, 2 hyperbolic); fixes a1..a4.
    #[arg(long)]
    pub example: Option<u32>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; relative paths resolve under X2SUSY_OUTPUT_DIR when set.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Fractional digits of scientific-notation floats (default: shortest
    /// round-trip); X2SUSY_PRECISION supplies a default.
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct GridArgs {
    #[arg(long)]
    pub q_min: Option<f64>,
    #[arg(long)]
    pub q_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Stages to run (comma separated); default all.
    #[arg(long, value_delimiter = ',')]
    stage: Vec<String>,
    /// `N` values (comma separated).
    #[arg(long, value_delimiter = ',')]
    enn: Vec<u32>,
    /// Explicit `α` values (comma separated "p/q"); default: random samples.
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Full grid: N in 3..=8 and 25 samples.
    #[arg(long)]
    thorough: bool,
    /// Record per-check wall time (reports are then not reproducible).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    a1: Option<String>,
    #[arg(long)]
    a2: Option<String>,
    #[arg(long)]
    a3: Option<String>,
    #[arg(long)]
    a4: Option<String>,
    #[arg(long)]
    c0: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value = "minus")]
    sign: SignArg,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SectorArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value = "minus")]
    sign: SignArg,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OpFamily {
    J,
    K,
    HMinus,
    HPlus,
    PMinus,
    PPlus,
}

#[derive(Args, Debug)]
struct ShowOpArgs {
    #[arg(long, value_enum)]
    family: OpFamily,
    /// Operator index 1..=4 for the J and K families.
    #[arg(long)]
    index: Option<usize>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct LaguerreArgs {
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    n_max: Option<u32>,
    #[command(flatten)]
    out: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Verify(a) => cmd_verify(a, &file),
        Command::Potential(a) => cmd_potential(a, &file),
        Command::Spectrum(a) => cmd_spectrum(a, &file),
        Command::Sector(a) => cmd_sector(a, &file),
        Command::ShowOp(a) => cmd_show_op(a, &file),
        Command::Laguerre(a) => cmd_laguerre(a, &file),
    }
}

fn cmd_verify(a: VerifyArgs, file: &FileConfig) -> Result<ExitCode, CliError> {
    let mut cfg = if a.thorough || file.thorough.unwrap_or(false) {
        VerifyConfig::thorough()
    } else {
        VerifyConfig::default()
    };
    let stages = if a.stage.is_empty() {
        file.stages.clone().unwrap_or_default()
    } else {
        a.stage.clone()
    };
    if !stages.is_empty() {
        cfg.stages = stages
            .iter()
            .map(|s| s.parse::<Stage>())
            .collect::<Result<_, _>>()?;
    }
    if !a.enn.is_empty() {
        cfg.enns = a.enn.clone();
    } else if let Some(n) = file.enn {
        cfg.enns = vec![n];
    }
    let alphas: Vec<String> = if a.alpha.is_empty() {
        file.alpha.clone().into_iter().collect()
    } else {
        a.alpha.clone()
    };
    cfg.alphas = alphas.iter().map(|s| config::rational(s)).collect::<Result<_, _>>()?;
    if let Some(s) = a.samples.or(file.samples) {
        cfg.samples = s;
    }
    if let Some(s) = a.seed.or(file.seed) {
        cfg.seed = s;
    }
    let weights = [&a.a1, &a.a2, &a.a3, &a.a4];
    let file_weights = [&file.a1, &file.a2, &file.a3, &file.a4];
    if weights.iter().chain(file_weights.iter()).any(|w| w.is_some()) {
        let mut w: [Rational; 4] = Default::default();
        for i in 0..4 {
            if let Some(s) = weights[i].as_ref().or(file_weights[i].as_ref()) {
                w[i] = config::rational(s)?;
            }
        }
        cfg.weights = Some(w);
    }
    if let Some(c) = a.c0.as_ref().or(file.c0.as_ref()) {
        cfg.c0 = config::rational(c)?;
    }
    cfg.timings = a.timings;
    let out = Resolved::output(&a.out, file, Format::Json)?;
    let report = verify::run(&cfg)?;
    let text = match out.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
        Format::Markdown => report.to_markdown(),
    };
    out.emit(&text)?;
    for f in report.failures() {
        eprintln!(
            "FAIL {}/{} [{}] {}",
            f.stage,
            f.id,
            x2susy::report::params_string(&f.params),
            f.witness.as_deref().unwrap_or("")
        );
    }
    eprintln!(
        "overall {}: {} passed, {} failed",
        report.overall.as_str(),
        report.passed,
        report.failed
    );
    Ok(if report.is_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn model_from(params: &ParamArgs, file: &FileConfig) -> Result<x2susy::models::PhysicalModel, CliError> {
    let r = Resolved::params(params, file)?;
    let ex = ExampleId::from_number(r.example.ok_or_else(|| CliError::Input("--example is required".into()))?)?;
    let ctx = ex.context(r.alpha, r.enn, r.c0)?;
    Ok(make_model(ex, &ctx)?)
}

fn cmd_potential(a: TableArgs, file: &FileConfig) -> Result<ExitCode, CliError> {
    let model = model_from(&a.params, file)?;
    let grid = Resolved::grid(&a.grid, file, model.example)?;
    let out = Resolved::output(&a.out, file, Format::Csv)?;
    let table = potential_table(&model, &grid);
    let text = match out.format {
        Format::Csv => table_text(&table, TableFormat::Csv, out.precision)?,
        Format::Json => table_text(&table, TableFormat::Json, out.precision)?,
        Format::Markdown => render::table_markdown(&table, out.precision),
    };
    out.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn table_text(
    table: &x2susy::models::PotentialTable,
    format: TableFormat,
    precision: Option<usize>,
) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_table(table, format, precision, &mut buf)?;
    Ok(String::from_utf8(buf).expect("utf-8 table"))
}

fn context_from(params: &ParamArgs, file: &FileConfig) -> Result<ParamContext, CliError> {
    let r = Resolved::params(params, file)?;
    if let Some(n) = r.example {
        let ex = ExampleId::from_number(n)?;
        return Ok(ex.context(r.alpha, r.enn, r.c0)?);
    }
    Ok(ParamContext::new(r.alpha, r.enn)?.with_weights(r.weights).with_c0(r.c0))
}

fn cmd_spectrum(a: SpectrumArgs, file: &FileConfig) -> Result<ExitCode, CliError> {
    let ctx = context_from(&a.params, file)?;
    ctx.check_minus()?;
    let sign: Sign = a.sign.into();
    if sign == Sign::Plus {
        ctx.check_charges()?;
    }
    let m = restricted_matrix(&ctx, sign)?;
    let out = Resolved::output(&a.out, file, Format::Markdown)?;
    out.emit(&render::spectrum(&m, out.format)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sector(a: SectorArgs, file: &FileConfig) -> Result<ExitCode, CliError> {
    let model = model_from(&a.params, file)?;
    let grid = Resolved::grid(&a.grid, file, model.example)?;
    let sign: Sign = a.sign.into();
    let out = Resolved::output(&a.out, file, Format::Csv)?;
    let check = sector_preservation_numeric(&model, sign, &grid, 1e-3, 1e-6)?;
    let table = render::sector_table(&model, sign, &grid, &check);
    let text = match out.format {
        Format::Csv => table_text(&table, TableFormat::Csv, out.precision)?,
        Format::Json => table_text(&table, TableFormat::Json, out.precision)?,
        Format::Markdown => render::table_markdown(&table, out.precision),
    };
    out.emit(&text)?;
    Ok(if check.residual.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_show_op(a: ShowOpArgs, file: &FileConfig) -> Result<ExitCode, CliError> {
    let ctx = context_from(&a.params, file)?;
    let index = || {
        a.index
            .filter(|i| (1..=4).contains(i))
            .ok_or_else(|| CliError::Input("--index must be 1, 2, 3 or 4 for the J and K families".into()))
    };
    let (name, op) = match a.family {
        OpFamily::J => (format!("J{}", index()?), build(Family::J, index()?, &ctx)?),
        OpFamily::K => (format!("K{}", index()?), build(Family::K, index()?, &ctx)?),
        OpFamily::HMinus => ("H-tilde-minus".to_string(), build_h_minus(&ctx)?.0),
        OpFamily::HPlus => ("H-check-plus".to_string(), build_check_h_plus(&ctx)?.0),
        OpFamily::PMinus => ("P-tilde-minus".to_string(), build_p_minus(&ctx)?.z_part),
        OpFamily::PPlus => ("P-bar-plus".to_string(), build_p_plus(&ctx)?.expand_product()),
    };
    let out = Resolved::output(&a.out, file, Format::Markdown)?;
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(&op).map_err(Error::from)?,
        Format::Markdown | Format::Csv => format!(
            "{name} (alpha = {}, N = {}):\n{op}\n",
            to_pq(&ctx.alpha),
            ctx.enn
        ),
    };
    out.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_laguerre(a: LaguerreArgs, file: &FileConfig) -> Result<ExitCode, CliError> {
    let alpha = config::rational(
        a.alpha
            .as_ref()
            .or(file.alpha.as_ref())
            .ok_or_else(|| CliError::Input("--alpha is required".into()))?,
    )?;
    let n_max = a.n_max.or(file.n_max).unwrap_or(6);
    if n_max == 0 {
        return Err(CliError::Input("--n-max must be positive".into()));
    }
    if alpha == Rational::from_integer(0.into()) || alpha == Rational::from_integer(1.into()) {
        return Err(CliError::Input(format!(
            "degenerate alpha = {}: the constraint alpha != 0, 1 is violated",
            to_pq(&alpha)
        )));
    }
    let second = second_kind_relations(&alpha)?;
    let first = first_kind_relations(&alpha)?;
    let gs = if alpha > Rational::from_integer(1.into()) {
        let ctx = ParamContext::example1(alpha.clone(), n_max.max(3))?;
        Some(gram_schmidt_support(&ctx, n_max)?)
    } else {
        None
    };
    let out = Resolved::output(&a.out, file, Format::Markdown)?;
    let ok = second.passed() && first.passed() && gs.as_ref().map_or(true, |g| g.max_deviation < 1e-8);
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "second_kind": second,
            "first_kind": first,
            "gram_schmidt": gs,
        }))
        .map_err(Error::from)?,
        Format::Markdown | Format::Csv => render::laguerre_text(&second, &first, n_max.min(3) as usize, gs.as_ref()),
    };
    out.emit(&text)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Writes `text` to the resolved output, or stdout.
pub(crate) fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::Io(p.clone(), e))?;
            }
            fs::write(p, text).map_err(|e| CliError::Io(p.clone(), e))
        }
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))
        }
    }
}
