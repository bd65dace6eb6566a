//! Command-line front end. `run` parses argv, dispatches one command and
//! returns the process exit code.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use accval_core::benford::{benford_screen, BenfordReport, BenfordThresholds};
use accval_core::forecast::{project_flows, Assumptions, FinancingClaims, FlowSeries};
use accval_core::lim::{
    fo_coefficients, fo_value, ohlson_coefficients, ohlson_value, FelthamOhlsonParams, OhlsonParams,
};
use accval_core::multiples::{run_comps, CentralTendency, Comparable, CompsRequest, Driver, MultipleOverride};
use accval_core::sensitivity::{replay, sensitivity_grid, Axis, ReplayInput, SensitivityGrid};
use accval_core::statements::StatementSet;
use accval_core::valuation::{value, DiscountConvention, Model, Perspective, ValuationOptions};

use crate::error::{AppError, Result};
use crate::fixtures::{self, printed};
use crate::formats;
use crate::reconcile::reconcile;
use crate::render::{self, Format, LimReport, ValueReport};

#[derive(Debug, Parser)]
#[command(name = "accval", version, about = "Accounting-based equity valuation")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "ACCVAL_FORMAT", default_value = "table")]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value the firm with the FCF, residual income and AOIG models.
    Value(ValueArgs),
    /// Entity and equity value over a WACC / growth grid.
    Sensitivity(SensitivityArgs),
    /// Value from comparable-company multiples.
    Multiples(MultiplesArgs),
    /// First-digit screen of a column of figures.
    Benford(BenfordArgs),
    /// Closed-form linear information model values.
    #[command(subcommand)]
    Lim(LimCommand),
    /// Compare the embedded case tables against recomputed figures.
    Reconcile(ReconcileArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Statements CSV (`period,item,value`).
    #[arg(long, requires = "assumptions", conflicts_with = "fixture")]
    pub statements: Option<PathBuf>,
    /// Assumptions file (`key=value` lines).
    #[arg(long, requires = "statements", conflicts_with = "fixture")]
    pub assumptions: Option<PathBuf>,
    /// Embedded fixture instead of files.
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Fcfvm,
    Revm,
    Aegm,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Fcfvm => Model::Fcfvm,
            ModelArg::Revm => Model::Revm,
            ModelArg::Aegm => Model::Aegm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PerspectiveArg {
    Entity,
    Equity,
}

#[derive(Debug, Args)]
pub struct ValueArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Discount with factors rounded to 2 dp, as in hand-built tables.
    #[arg(long, alias = "paper-factors")]
    pub rounded_factors: bool,
    #[arg(long, value_enum, default_value = "entity")]
    pub perspective: PerspectiveArg,
    /// Models to run (default: all three).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub model: Vec<ModelArg>,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// WACC values as fractions, comma-separated (default: baseline +/- 1pp).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub wacc: Vec<f64>,
    /// Terminal growth values as fractions (default: baseline +/- 1pp).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub growth: Vec<f64>,
    /// Full WACC x growth cross instead of one-at-a-time.
    #[arg(long)]
    pub cross: bool,
    #[arg(long, value_enum, default_value = "fcfvm")]
    pub model: ModelArg,
    #[arg(long, alias = "paper-factors")]
    pub rounded_factors: bool,
    /// Rebuild a printed grid from its PV components.
    #[arg(long, conflicts_with_all = ["statements", "assumptions", "fixture", "wacc", "growth", "cross"])]
    pub replay: Option<String>,
}

#[derive(Debug, Args)]
pub struct MultiplesArgs {
    /// Comparables CSV (`name,entity_value,<driver>...`).
    #[arg(long, conflicts_with = "fixture")]
    pub comparables: Option<PathBuf>,
    /// Target figures come from the base period of this statements CSV.
    #[arg(long, conflicts_with = "fixture")]
    pub statements: Option<PathBuf>,
    #[arg(long)]
    pub fixture: Option<String>,
    /// Target driver amount, e.g. `ebit=746.5`. Repeatable.
    #[arg(long = "target", value_parser = parse_target)]
    pub targets: Vec<(Driver, f64)>,
    #[arg(long)]
    pub shares: Option<f64>,
    /// Net financial liabilities (overrides the statements).
    #[arg(long, allow_negative_numbers = true)]
    pub nfl: Option<f64>,
    /// Non-controlling interest (overrides the statements).
    #[arg(long, allow_negative_numbers = true)]
    pub nci: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "ebit,sales")]
    pub drivers: Vec<Driver>,
    #[arg(long, value_delimiter = ',', default_value = "median,harmonic_mean")]
    pub methods: Vec<CentralTendency>,
    /// Use a given multiple, e.g. `ebit:harmonic_mean=10.53`. Repeatable.
    #[arg(long = "multiple", value_parser = parse_override)]
    pub overrides: Vec<MultipleOverride>,
}

#[derive(Debug, Args)]
pub struct BenfordArgs {
    /// CSV of figures.
    #[arg(long, conflicts_with = "fixture")]
    pub input: Option<PathBuf>,
    /// Column to read (default: `value`, else every numeric cell).
    #[arg(long, requires = "input")]
    pub column: Option<String>,
    /// Screen the statement figures of an embedded fixture.
    #[arg(long)]
    pub fixture: Option<String>,
    #[arg(long)]
    pub min_sample: Option<usize>,
    #[arg(long)]
    pub chi_square: Option<f64>,
    #[arg(long)]
    pub mad: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum LimCommand {
    /// Residual earnings with other information.
    Ohlson(OhlsonArgs),
    /// Operating/financial split with a conservatism term.
    FelthamOhlson(FoArgs),
}

#[derive(Debug, Args)]
pub struct OhlsonArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub omega1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma1: f64,
    /// Gross equity rate, e.g. 1.1.
    #[arg(long)]
    pub rho: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub book: f64,
    /// Current residual earnings.
    #[arg(long, allow_negative_numbers = true)]
    pub re: f64,
    /// Current other information.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub v: f64,
}

#[derive(Debug, Args)]
pub struct FoArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub omega1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma1: f64,
    /// Gross NOA growth factor, e.g. 1.02.
    #[arg(long)]
    pub growth_factor: f64,
    /// Gross entity rate, e.g. 1.07.
    #[arg(long)]
    pub rho: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub noa: f64,
    /// Current residual operating income.
    #[arg(long, allow_negative_numbers = true)]
    pub roi: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub v: f64,
    /// Net financial assets.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub nfa: f64,
}

#[derive(Debug, Args)]
pub struct ReconcileArgs {
    #[arg(long, default_value = "ms")]
    pub fixture: String,
}

fn parse_target(s: &str) -> std::result::Result<(Driver, f64), String> {
    let (d, v) = s.split_once('=').ok_or("expected driver=value")?;
    let d: Driver = d.trim().parse().map_err(|e| format!("unknown driver `{e}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("invalid number `{v}`"))?;
    Ok((d, v))
}

fn parse_override(s: &str) -> std::result::Result<MultipleOverride, String> {
    let (key, v) = s.split_once('=').ok_or("expected driver:method=value")?;
    let (d, m) = key.split_once(':').ok_or("expected driver:method=value")?;
    Ok(MultipleOverride {
        driver: d.trim().parse().map_err(|e| format!("unknown driver `{e}`"))?,
        method: m.trim().parse().map_err(|e| format!("unknown method `{e}`"))?,
        multiple: v.trim().parse().map_err(|_| format!("invalid number `{v}`"))?,
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| AppError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn source_name(path: &Path) -> String {
    path.display().to_string()
}

struct Inputs {
    label: String,
    statements: StatementSet,
    assumptions: Assumptions,
}

fn load_inputs(i: &InputArgs) -> Result<Inputs> {
    match (&i.fixture, &i.statements, &i.assumptions) {
        (Some(name), _, _) => {
            let f = fixtures::load(name)?;
            Ok(Inputs {
                label: format!("fixture {name}"),
                statements: f.statements,
                assumptions: f.assumptions,
            })
        }
        (None, Some(s), Some(a)) => Ok(Inputs {
            label: source_name(s),
            statements: formats::parse_statements(&read(s)?, &source_name(s))?,
            assumptions: formats::parse_assumptions(&read(a)?, &source_name(a))?,
        }),
        _ => Err(AppError::Usage(
            "give --statements and --assumptions, or --fixture".into(),
        )),
    }
}

/// A single period is projected with the assumptions; several periods are
/// taken as the explicit forecast.
fn flow_series(inp: &Inputs) -> Result<(FlowSeries, &'static str)> {
    if inp.statements.len() == 1 {
        Ok((project_flows(&inp.statements, &inp.assumptions)?, "projected"))
    } else {
        Ok((FlowSeries::from_statements(&inp.statements)?, "explicit periods"))
    }
}

fn options(rounded: bool) -> ValuationOptions {
    ValuationOptions {
        discounting: if rounded {
            DiscountConvention::RoundedFactors { decimals: 2 }
        } else {
            DiscountConvention::Exact
        },
    }
}

fn statement_figures(set: &StatementSet) -> Vec<f64> {
    set.records().into_iter().map(|(_, _, v)| v).collect()
}

fn cmd_value(a: &ValueArgs, format: Format) -> Result<String> {
    let inp = load_inputs(&a.input)?;
    let (series, mode) = flow_series(&inp)?;
    let opts = options(a.rounded_factors);
    let perspective = match a.perspective {
        PerspectiveArg::Entity => Perspective::Entity,
        PerspectiveArg::Equity => Perspective::Equity,
    };
    let models: Vec<Model> = if a.model.is_empty() {
        Model::ALL.to_vec()
    } else {
        let mut m: Vec<Model> = a.model.iter().map(|&m| m.into()).collect();
        m.sort();
        m.dedup();
        m
    };
    let results = models
        .iter()
        .map(|&m| value(m, perspective, &series, &inp.assumptions, &opts))
        .collect::<accval_core::Result<Vec<_>>>()?;
    let benford = benford_screen(&statement_figures(&inp.statements), BenfordThresholds::default());
    let report = ValueReport::new(
        format!("{} ({mode})", inp.label),
        opts.discounting,
        perspective,
        results,
        Some(benford),
    );
    Ok(render::render_value(&report, format))
}

fn around(x: f64) -> Vec<f64> {
    vec![x - 0.01, x, x + 0.01]
}

fn replay_grid(name: &str) -> Result<SensitivityGrid> {
    if name != "ms" {
        return Err(AppError::Usage(format!("unknown fixture `{name}`")));
    }
    let columns: Vec<ReplayInput> = printed::SENSITIVITY
        .iter()
        .enumerate()
        .map(|(i, c)| ReplayInput {
            axis: if i < 3 { Axis::Wacc } else { Axis::Growth },
            wacc: c.0,
            growth: c.1,
            pv_explicit: c.2,
            pv_of_cv: c.3,
        })
        .collect();
    let claims = FinancingClaims {
        net_financial_liabilities: printed::NFL,
        noncontrolling_interest: printed::NCI,
    };
    Ok(replay(columns[1], &columns, &claims, printed::SHARES)?)
}

fn cmd_sensitivity(a: &SensitivityArgs, format: Format) -> Result<String> {
    let grid = match &a.replay {
        Some(name) => replay_grid(name)?,
        None => {
            let inp = load_inputs(&a.input)?;
            let (series, _) = flow_series(&inp)?;
            let base = &inp.assumptions;
            let wacc = if a.wacc.is_empty() { around(base.wacc) } else { a.wacc.clone() };
            let growth = if a.growth.is_empty() {
                around(base.sales_growth)
            } else {
                a.growth.clone()
            };
            sensitivity_grid(
                &series,
                base,
                &wacc,
                &growth,
                a.model.into(),
                a.cross,
                &options(a.rounded_factors),
            )?
        }
    };
    Ok(render::render_grid(&grid, format))
}

fn target_from(set: &StatementSet) -> BTreeMap<Driver, f64> {
    let b = set.base();
    let mut t = BTreeMap::from([(Driver::Ebit, b.income.ebit), (Driver::Sales, b.income.sales)]);
    if let Some(e) = b.income.comprehensive_earnings {
        t.insert(Driver::Earnings, e);
    }
    if let Some(bv) = b.balance.common_equity {
        t.insert(Driver::BookValue, bv);
    }
    t
}

fn cmd_multiples(a: &MultiplesArgs, format: Format) -> Result<String> {
    let (comparables, statements, fixture_shares): (Vec<Comparable>, Option<StatementSet>, Option<f64>) =
        match (&a.fixture, &a.comparables) {
            (Some(name), _) => {
                let f = fixtures::load(name)?;
                (f.comparables, Some(f.statements), Some(f.multiples_shares))
            }
            (None, Some(path)) => {
                let comps = formats::parse_comparables(&read(path)?, &source_name(path))?;
                let set = match &a.statements {
                    Some(s) => Some(formats::parse_statements(&read(s)?, &source_name(s))?),
                    None => None,
                };
                (comps, set, None)
            }
            (None, None) => return Err(AppError::Usage("give --comparables or --fixture".into())),
        };

    let mut target = statements.as_ref().map(target_from).unwrap_or_default();
    target.extend(a.targets.iter().copied());
    let base_claims = statements.as_ref().map(|s| {
        let b = &s.base().balance;
        (b.net_financial_liabilities, b.noncontrolling_interest)
    });
    let claims = FinancingClaims {
        net_financial_liabilities: a.nfl.or(base_claims.map(|c| c.0)).unwrap_or(0.0),
        noncontrolling_interest: a.nci.or(base_claims.map(|c| c.1)).unwrap_or(0.0),
    };
    let shares = a
        .shares
        .or(fixture_shares)
        .ok_or_else(|| AppError::Usage("--shares is required".into()))?;

    let result = run_comps(&CompsRequest {
        target: &target,
        claims,
        shares,
        comparables: &comparables,
        drivers: &a.drivers,
        methods: &a.methods,
        overrides: &a.overrides,
    })?;
    Ok(render::render_comps(&result, format))
}

fn cmd_benford(a: &BenfordArgs, format: Format) -> Result<String> {
    let values = match (&a.input, &a.fixture) {
        (Some(path), _) => formats::read_numbers(&read(path)?, &source_name(path), a.column.as_deref())?,
        (None, Some(name)) => statement_figures(&fixtures::load(name)?.statements),
        (None, None) => return Err(AppError::Usage("give --input or --fixture".into())),
    };
    let d = BenfordThresholds::default();
    let thresholds = BenfordThresholds {
        chi_square: a.chi_square.unwrap_or(d.chi_square),
        mad: a.mad.unwrap_or(d.mad),
        min_sample: a.min_sample.unwrap_or(d.min_sample),
    };
    let report: BenfordReport = benford_screen(&values, thresholds);
    Ok(render::render_benford(&report, format))
}

fn cmd_lim(c: &LimCommand, format: Format) -> Result<String> {
    let report = match c {
        LimCommand::Ohlson(a) => {
            let params = OhlsonParams {
                omega1: a.omega1,
                gamma1: a.gamma1,
                rho_e: a.rho,
            };
            LimReport::Ohlson {
                params,
                coefficients: ohlson_coefficients(&params)?,
                book_value: a.book,
                residual_earnings: a.re,
                other_information: a.v,
                value: ohlson_value(a.book, a.re, a.v, &params)?,
            }
        }
        LimCommand::FelthamOhlson(a) => {
            let params = FelthamOhlsonParams {
                omega0: a.omega0,
                omega1: a.omega1,
                gamma1: a.gamma1,
                growth_factor: a.growth_factor,
                rho_f: a.rho,
            };
            LimReport::FelthamOhlson {
                params,
                coefficients: fo_coefficients(&params)?,
                net_operating_assets: a.noa,
                residual_operating_income: a.roi,
                other_information: a.v,
                net_financial_assets: a.nfa,
                value: fo_value(a.noa, a.roi, a.v, a.nfa, &params)?,
            }
        }
    };
    Ok(render::render_lim(&report, format))
}

fn dispatch(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Value(a) => cmd_value(a, cli.format),
        Command::Sensitivity(a) => cmd_sensitivity(a, cli.format),
        Command::Multiples(a) => cmd_multiples(a, cli.format),
        Command::Benford(a) => cmd_benford(a, cli.format),
        Command::Lim(c) => cmd_lim(c, cli.format),
        Command::Reconcile(a) => Ok(render::render_reconcile(&reconcile(&a.fixture)?, cli.format)),
    }
}

/// Runs one command. Data goes to `out`, diagnostics to `err`. Returns 0 on
/// success, 1 for usage and input errors, 2 for numerical-domain errors.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(text) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: writing output: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
