//! Command-line front end.
//!
//! Exit codes: 0 success, 1 conjugation identity failed (an internal bug),
//! 2 unparsable or missing input, 3 violated mathematical precondition.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::exactmat::{set_size_limit, IntMatrix, DEFAULT_SIZE_LIMIT};
use crate::families::{family_map, fiber_matrix, unboundedness_sweep, witness, WitnessBase, WitnessReport, CSV_HEADER};
use crate::fixtheory::{AffineSelfmap, FixError, InvariantReport};
use crate::groups::{surface_presentation, GroupError, HomToZn, Presentation};
use crate::polyalg::zero_iterates;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fixindex", version, about = "Exact fixed point invariants of fiber-preserving maps of B x T^n")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Largest matrix dimension accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_LIMIT)]
    pub max_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Genus-g surface times a circle, L = [m+1].
    SgS1,
    /// Genus-g surface times T^n, L = L_m.
    SgTn,
    /// G_{3,1} manifold times T^2, L = L_m; needs --chi.
    PzT2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lefschetz number, projection index and essential class index of f^k.
    Invariants {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        k: u64,
    },
    /// Certify one family member.
    Witness {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        k: u64,
    },
    /// Witnesses for m = 1..=m-max.
    Sweep {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m_max: u64,
    },
    /// Check h o phi o h^-1 = id x L on random samples of Gamma' x Z^n.
    Conjcheck {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample coordinates are drawn from [-bound, bound].
        #[arg(long, default_value_t = 20)]
        bound: i64,
    },
    /// Orders d of root-of-unity eigenvalues and the iterates where det(I - L^k) = 0.
    Zerotest {
        #[command(flatten)]
        map: MapArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct MapArgs {
    #[arg(long, value_enum, conflicts_with = "fiber")]
    pub family: Option<Family>,
    /// Surface genus of the base.
    #[arg(long)]
    pub g: Option<u32>,
    /// Fiber rank.
    #[arg(long)]
    pub n: Option<usize>,
    /// Family parameter.
    #[arg(long)]
    pub m: Option<u64>,
    /// Fiber matrix literal, e.g. "2 2; 2 1; 1 1".
    #[arg(long = "L", id = "fiber", allow_hyphen_values = true)]
    pub fiber: Option<String>,
    /// Twist homomorphism: `zero` or an n x (generators) matrix literal.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// Base presentation file.
    #[arg(long)]
    pub presentation: Option<PathBuf>,
    /// Euler characteristic of the base.
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<i64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => EXIT_PARSE,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl From<FixError> for CliError {
    fn from(e: FixError) -> Self {
        let precondition = e.is_precondition()
            || matches!(e, FixError::Group(GroupError::NotAHomomorphism { .. } | GroupError::GenusTooSmall(_)));
        if precondition {
            CliError::Precondition(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        FixError::from(e).into()
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("missing required flag --{flag}")))
}

fn witness_base(args: &MapArgs, family: Family) -> Result<(WitnessBase, usize), CliError> {
    Ok(match family {
        Family::SgS1 => (WitnessBase::Surface { genus: require(args.g, "g")? }, 1),
        Family::SgTn => (WitnessBase::Surface { genus: require(args.g, "g")? }, args.n.unwrap_or(2)),
        Family::PzT2 => {
            let chi = args
                .chi
                .ok_or_else(|| CliError::Input("--chi is required for the G31 base".into()))?;
            (WitnessBase::Pz { chi }, 2)
        }
    })
}

/// A resolved selfmap together with the Euler characteristic to use.
pub struct ResolvedMap {
    pub map: AffineSelfmap,
    pub chi: Option<i64>,
}

pub fn resolve_map(args: &MapArgs) -> Result<ResolvedMap, CliError> {
    if let Some(family) = args.family {
        let (base, n) = witness_base(args, family)?;
        let map = family_map(base, n, require(args.m, "m")?)?;
        let chi = args.chi.or(Some(base.chi()));
        return Ok(ResolvedMap { map, chi });
    }
    let literal = args
        .fiber
        .as_deref()
        .ok_or_else(|| CliError::Input("either --family or --L is required".into()))?;
    let fiber: IntMatrix = literal.parse().map_err(|e| CliError::Input(format!("--L: {e}")))?;
    if !fiber.is_square() {
        return Err(CliError::Input(format!("--L must be square, got {}x{}", fiber.rows(), fiber.cols())));
    }
    let n = fiber.rows();
    let rho_literal = match args.rho.as_deref() {
        None | Some("zero") => None,
        Some(text) => Some(text.parse::<IntMatrix>().map_err(|e| CliError::Input(format!("--rho: {e}")))?),
    };
    let base = if let Some(path) = &args.presentation {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        text.parse::<Presentation>().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    } else if let Some(g) = args.g {
        surface_presentation(g)?
    } else {
        let count = rho_literal.as_ref().map(IntMatrix::cols).unwrap_or(1);
        Presentation::free(count)?
    };
    let rho = match rho_literal {
        None => HomToZn::zero(&base, n)?,
        Some(r) => HomToZn::new(&base, r)?,
    };
    let chi = args.chi.or(base.euler_characteristic());
    Ok(ResolvedMap { map: AffineSelfmap::new(base, rho, fiber)?, chi })
}

fn opt(v: &Option<BigInt>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_else(|| "not computed".into())
}

fn write_table(out: &mut dyn Write, rows: &[(&str, String)]) -> io::Result<()> {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}")?;
    }
    Ok(())
}

fn report_rows(r: &InvariantReport) -> Vec<(&'static str, String)> {
    vec![
        ("k", r.k.to_string()),
        ("lefschetz", r.lefschetz.to_string()),
        ("nielsen", opt(&r.nielsen)),
        ("min_fixed", opt(&r.min_fixed)),
        ("projection_index", opt(&r.projection_index)),
        ("essential_index", opt(&r.essential_index)),
        ("zero_branch", r.zero_branch.to_string()),
    ]
}

fn witness_rows(w: &WitnessReport) -> Vec<(&'static str, String)> {
    vec![
        ("base", w.base.clone()),
        ("g_or_label", w.g_or_label.clone()),
        ("n", w.n.to_string()),
        ("m", w.m.to_string()),
        ("k", w.k.to_string()),
        ("chi", w.chi.to_string()),
        ("lefschetz", w.lefschetz.to_string()),
        ("lefschetz_nonzero", w.lefschetz_nonzero.to_string()),
        ("valid", w.valid.to_string()),
        ("projection_index", opt(&w.projection_index)),
        ("essential_index", opt(&w.essential_index)),
        ("claimed_index", w.claimed_index.to_string()),
        ("bound_met", w.bound_met.to_string()),
    ]
}

fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_key_values(out: &mut dyn Write, format: Format, rows: &[(&str, String)], json: &serde_json::Value) -> Result<(), CliError> {
    match format {
        Format::Table => write_table(out, rows)?,
        Format::Json => writeln!(out, "{json}")?,
        Format::Csv => {
            let header: Vec<&str> = rows.iter().map(|(k, _)| *k).collect();
            write_csv(out, &header, &[rows.iter().map(|(_, v)| v.clone()).collect()])?;
        }
    }
    Ok(())
}

fn cmd_invariants(cfg: &RunConfig, args: &MapArgs, k: u64, out: &mut dyn Write) -> Result<i32, CliError> {
    let resolved = resolve_map(args)?;
    let chi = resolved.chi.ok_or(FixError::MissingEulerCharacteristic)?;
    let report = resolved.map.full_report(k, chi)?;
    let mut rows = vec![("base", resolved.map.base().label()), ("fiber", resolved.map.fiber().to_string())];
    rows.extend(report_rows(&report));
    write_key_values(out, cfg.format, &rows, &serde_json::to_value(&report).expect("report serializes"))?;
    Ok(EXIT_OK)
}

fn cmd_witness(cfg: &RunConfig, args: &MapArgs, k: u64, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let family = require(args.family, "family")?;
    let (base, n) = witness_base(args, family)?;
    let w = witness(base, n, require(args.m, "m")?, k)?;
    if !w.valid {
        writeln!(err, "warning: det(I - L^{k}) = 0 for this member; no index is certified")?;
    }
    write_key_values(out, cfg.format, &witness_rows(&w), &serde_json::to_value(&w).expect("report serializes"))?;
    Ok(EXIT_OK)
}

fn cmd_sweep(cfg: &RunConfig, args: &MapArgs, k: u64, m_max: u64, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let family = require(args.family, "family")?;
    let (base, n) = witness_base(args, family)?;
    let sweep = unboundedness_sweep(base, n, k, m_max)?;
    match cfg.format {
        Format::Json => {
            for r in &sweep.reports {
                writeln!(out, "{}", serde_json::to_string(r).expect("report serializes"))?;
            }
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = sweep.reports.iter().map(|r| r.csv_record().to_vec()).collect();
            write_csv(out, &CSV_HEADER, &rows)?;
        }
        Format::Table => {
            let mut rows: Vec<[String; 9]> = vec![CSV_HEADER.map(String::from)];
            rows.extend(sweep.reports.iter().map(WitnessReport::csv_record));
            let widths: Vec<usize> = (0..9).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
            for r in &rows {
                let line: Vec<String> = r.iter().zip(&widths).map(|(v, w)| format!("{v:>w$}")).collect();
                writeln!(out, "{}", line.join("  "))?;
            }
        }
    }
    let invalid = sweep.invalid_count();
    writeln!(
        err,
        "rows={} invalid={} strictly_increasing={}",
        sweep.reports.len(),
        invalid,
        sweep.strictly_increasing()
    )?;
    if invalid > 0 {
        writeln!(err, "warning: {invalid} family member(s) have det(I - L^k) = 0")?;
    }
    Ok(EXIT_OK)
}

fn cmd_conjcheck(
    cfg: &RunConfig,
    args: &MapArgs,
    samples: usize,
    seed: u64,
    bound: i64,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let resolved = resolve_map(args)?;
    let map = &resolved.map;
    let index = map.gamma_prime_index()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drawn = map.sample_gamma_prime(&mut rng, samples, bound.max(0))?;
    let pass = map.conjugation_check(&drawn)?;
    let rows = vec![
        ("gamma_prime_index", index.to_string()),
        ("samples", samples.to_string()),
        ("result", if pass { "pass" } else { "fail" }.to_string()),
    ];
    let json = json!({"gamma_prime_index": index.to_string(), "samples": samples.to_string(), "pass": pass});
    write_key_values(out, cfg.format, &rows, &json)?;
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Human description of `{k : det(I - L^k) = 0}` given the cyclotomic orders.
pub fn describe_vanishing(ds: &BTreeSet<u64>) -> String {
    if ds.is_empty() {
        return "none; det(I-L^k)≠0 for all k".into();
    }
    let list = ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
    if ds.contains(&1) {
        return format!("d={list}; vanishing at all k");
    }
    let sets = ds.iter().map(|d| format!("{d}Z")).collect::<Vec<_>>().join(" ∪ ");
    format!("d={list}; vanishing at k ∈ {sets}")
}

fn cmd_zerotest(cfg: &RunConfig, args: &MapArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let fiber = match (&args.fiber, args.family) {
        (Some(literal), _) => literal.parse::<IntMatrix>().map_err(|e| CliError::Input(format!("--L: {e}")))?,
        (None, Some(Family::SgS1)) => fiber_matrix(1, require(args.m, "m")?)?,
        (None, Some(Family::SgTn)) => fiber_matrix(args.n.unwrap_or(2), require(args.m, "m")?)?,
        (None, Some(Family::PzT2)) => fiber_matrix(2, require(args.m, "m")?)?,
        (None, None) => return Err(CliError::Input("either --family or --L is required".into())),
    };
    if !fiber.is_square() {
        return Err(CliError::Input(format!("--L must be square, got {}x{}", fiber.rows(), fiber.cols())));
    }
    let ds = zero_iterates(&fiber).map_err(|e| CliError::Input(e.to_string()))?;
    let charpoly = fiber.charpoly().map_err(|e| CliError::Input(e.to_string()))?;
    let summary = describe_vanishing(&ds);
    let rows = vec![
        ("charpoly", charpoly.to_string()),
        ("orders", ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")),
        ("vanishing", summary.clone()),
    ];
    let json = json!({
        "charpoly": charpoly.to_string(),
        "orders": ds.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "vanishing": summary,
    });
    write_key_values(out, cfg.format, &rows, &json)?;
    Ok(EXIT_OK)
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    set_size_limit(cfg.max_dim);
    let result = match &cfg.command {
        Command::Invariants { map, k } => cmd_invariants(cfg, map, *k, out),
        Command::Witness { map, k } => cmd_witness(cfg, map, *k, out, err),
        Command::Sweep { map, k, m_max } => cmd_sweep(cfg, map, *k, *m_max, out, err),
        Command::Conjcheck { map, samples, seed, bound } => cmd_conjcheck(cfg, map, *samples, *seed, *bound, out),
        Command::Zerotest { map } => cmd_zerotest(cfg, map, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
