//! Command surface: build/cache groups and character tables, evaluate total
//! Stiefel-Whitney classes, run the verification suites, and move character
//! data in and out as JSON.

pub mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use whitney::chartab::{io as chartab_io, CharacterTable, ClassFunction};
use whitney::error::{Error, Result};
use whitney::group::{GroupSpec, DEFAULT_BUDGET};
use whitney::swc::{self, SwcResult};
use whitney::verify::{self, SuiteReport};

use cache::Cache;

#[derive(Parser, Debug)]
#[command(
    name = "whitney",
    version,
    about = "Exact total Stiefel-Whitney classes of orthogonal representations of SL(2,q), SL(3,q), Sp(4,q), Sp(6,q) and cyclic groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Cache directory for enumerated groups and character tables.
    #[arg(long, global = true, env = "WHITNEY_CACHE_DIR", default_value = ".whitney-cache")]
    pub cache_dir: PathBuf,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Enumeration budget override (elements).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate a group, compute its character table, and cache both.
    Gen {
        /// cyclic | sl2 | sl3 | sp4 | sp6
        family: String,
        /// n for cyclic groups, q for the matrix families.
        param: u32,
        /// Build C_n^k instead of C_n.
        #[arg(long)]
        copies: Option<u32>,
    },
    /// Evaluate total Stiefel-Whitney classes of selected representations.
    Swc {
        family: String,
        param: u32,
        /// Every orthogonal irreducible row.
        #[arg(long)]
        all_orthogonal: bool,
        /// A single row (must be orthogonal).
        #[arg(long)]
        row: Option<usize>,
        /// The double of a row (the symplectic-to-orthogonal move).
        #[arg(long)]
        doubled_row: Option<usize>,
        /// A sum of rows with multiplicities: "0:2,3:1".
        #[arg(long)]
        sum: Option<String>,
    },
    /// Run verification suites; exits 2 on any mismatch.
    Verify {
        family: String,
        /// Optional for sp6 (synthetic suite needs no table).
        param: Option<u32>,
        /// Subset of suites: restriction, whitney, synthetic.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        /// Shorthand for --suites synthetic.
        #[arg(long)]
        synthetic: bool,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
    /// Validate and register an externally computed character table.
    ImportChartab { path: PathBuf },
    /// Write a computed character table as JSON.
    ExportChartab {
        family: String,
        param: u32,
        /// Output path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

/// Exit codes: 0 success, 1 validation error, 2 verification mismatch,
/// 3 budget refusal.
pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::VerificationFailed) => 2,
        Err(Error::BudgetExceeded { .. }) => 3,
        Err(_) => 1,
    }
}

pub fn parse_family(family: &str, param: u32, copies: Option<u32>) -> Result<GroupSpec> {
    let spec = match (family, copies) {
        ("cyclic", None) => GroupSpec::Cyclic { n: param },
        ("cyclic", Some(k)) => GroupSpec::CyclicPower { n: param, k },
        ("sl2", None) => GroupSpec::Sl2 { q: param },
        ("sl3", None) => GroupSpec::Sl3 { q: param },
        ("sp4", None) => GroupSpec::Sp4 { q: param },
        ("sp6", None) => GroupSpec::Sp6 { q: param },
        _ => {
            return Err(Error::UnsupportedFamily {
                family: family.to_string(),
            })
        }
    };
    Ok(spec)
}

pub fn run(cli: &Cli, out: &mut String) -> Result<Outcome> {
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let cache = Cache::new(&cli.cache_dir);
    match &cli.command {
        Command::Gen {
            family,
            param,
            copies,
        } => cmd_gen(&cache, cli.format, parse_family(family, *param, *copies)?, budget, out),
        Command::Swc {
            family,
            param,
            all_orthogonal,
            row,
            doubled_row,
            sum,
        } => {
            let spec = parse_family(family, *param, None)?;
            let selector = Selector::parse(*all_orthogonal, *row, *doubled_row, sum.as_deref())?;
            cmd_swc(&cache, cli.format, spec, budget, &selector, out)
        }
        Command::Verify {
            family,
            param,
            suites,
            synthetic,
            trials,
            seed,
        } => {
            let mut names = suites.clone();
            if *synthetic {
                names.push("synthetic".to_string());
            }
            cmd_verify(
                &cache, cli.format, family, *param, &names, *trials, *seed, budget, out,
            )
        }
        Command::ImportChartab { path } => cmd_import(&cache, path, out),
        Command::ExportChartab {
            family,
            param,
            output,
        } => {
            let spec = parse_family(family, *param, None)?;
            cmd_export(&cache, spec, budget, output.as_deref(), out)
        }
    }
}

fn cmd_gen(
    cache: &Cache,
    format: Format,
    spec: GroupSpec,
    budget: u64,
    out: &mut String,
) -> Result<Outcome> {
    let g = cache.load_or_build_group(spec, budget)?;
    let t = cache.load_or_compute_table(spec, budget)?;
    let (plus, zero, minus) = t.fs_census();
    match format {
        Format::Json => {
            let v = serde_json::json!({
                "family": spec.family_name(),
                "param": spec.q().unwrap_or(0),
                "order": g.order(),
                "classes": g.class_count(),
                "exponent": g.exponent(),
                "fs_census": { "plus": plus, "zero": zero, "minus": minus },
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap()).unwrap();
        }
        _ => {
            writeln!(
                out,
                "{}: order {}, {} conjugacy classes, exponent {}",
                spec_display(&spec),
                g.order(),
                g.class_count(),
                g.exponent()
            )
            .unwrap();
            writeln!(
                out,
                "irreducible rows: {} orthogonal (+1), {} complex (0), {} symplectic (-1)",
                plus, zero, minus
            )
            .unwrap();
        }
    }
    Ok(Outcome::Success)
}

fn spec_display(spec: &GroupSpec) -> String {
    match *spec {
        GroupSpec::Cyclic { n } => format!("C_{n}"),
        GroupSpec::CyclicPower { n, k } => format!("C_{n}^{k}"),
        GroupSpec::Sl2 { q } => format!("SL(2,{q})"),
        GroupSpec::Sl3 { q } => format!("SL(3,{q})"),
        GroupSpec::Sp4 { q } => format!("Sp(4,{q})"),
        GroupSpec::Sp6 { q } => format!("Sp(6,{q})"),
    }
}

#[derive(Debug)]
pub enum Selector {
    AllOrthogonal,
    Row(usize),
    DoubledRow(usize),
    Sum(Vec<(usize, u64)>),
}

impl Selector {
    fn parse(
        all: bool,
        row: Option<usize>,
        doubled: Option<usize>,
        sum: Option<&str>,
    ) -> Result<Selector> {
        let picked = usize::from(all)
            + usize::from(row.is_some())
            + usize::from(doubled.is_some())
            + usize::from(sum.is_some());
        if picked != 1 {
            return Err(Error::SelectorOutOfRange(
                "choose exactly one of --all-orthogonal, --row, --doubled-row, --sum".into(),
            ));
        }
        if all {
            return Ok(Selector::AllOrthogonal);
        }
        if let Some(i) = row {
            return Ok(Selector::Row(i));
        }
        if let Some(i) = doubled {
            return Ok(Selector::DoubledRow(i));
        }
        let spec = sum.unwrap();
        let mut parts = Vec::new();
        for piece in spec.split(',') {
            let (row, mult) = piece
                .split_once(':')
                .ok_or_else(|| Error::SelectorOutOfRange(format!("bad sum term `{piece}`")))?;
            let row: usize = row
                .trim()
                .parse()
                .map_err(|_| Error::SelectorOutOfRange(format!("bad row in `{piece}`")))?;
            let mult: u64 = mult
                .trim()
                .parse()
                .map_err(|_| Error::SelectorOutOfRange(format!("bad multiplicity in `{piece}`")))?;
            parts.push((row, mult));
        }
        Ok(Selector::Sum(parts))
    }
}

/// Table lookup that degrades gracefully for groups beyond the enumeration
/// budget: those must have been imported first.
fn table_for(cache: &Cache, spec: GroupSpec, budget: u64) -> Result<CharacterTable> {
    if spec.order() > budget {
        cache.load_table(&spec).ok_or(Error::BudgetExceeded {
            order: spec.order(),
            budget,
        })
    } else {
        cache.load_or_compute_table(spec, budget)
    }
}

fn cmd_swc(
    cache: &Cache,
    format: Format,
    spec: GroupSpec,
    budget: u64,
    selector: &Selector,
    out: &mut String,
) -> Result<Outcome> {
    let t = table_for(cache, spec, budget)?;
    let mut cases: Vec<(String, ClassFunction)> = Vec::new();
    match selector {
        Selector::AllOrthogonal => {
            for (i, ir) in t.irreps.iter().enumerate() {
                if ir.fs == 1 {
                    cases.push((format!("row {i}"), t.row(i)?));
                }
            }
        }
        Selector::Row(i) => {
            let ir = t
                .irreps
                .get(*i)
                .ok_or_else(|| Error::SelectorOutOfRange(format!("row {i}")))?;
            if ir.fs != 1 {
                return Err(Error::NotOrthogonal {
                    reason: format!(
                        "row {i} has fs = {}; use --doubled-row or --sum to build an orthogonal character",
                        ir.fs
                    ),
                });
            }
            cases.push((format!("row {i}"), t.row(*i)?));
        }
        Selector::DoubledRow(i) => {
            cases.push((format!("2*row {i}"), t.doubled_row(*i)?));
        }
        Selector::Sum(parts) => {
            cases.push((format!("{parts:?}"), t.sum_of_rows(parts)?));
        }
    }

    let mut json_reports = Vec::new();
    if format == Format::Csv {
        writeln!(out, "selector,degree,fs,theorem,exponents,total_class").unwrap();
    }
    for (label, f) in &cases {
        let res = swc::swc_auto(&t, f)?;
        match format {
            Format::Text => {
                writeln!(out, "{}", text_report(label, &t, &res)).unwrap();
            }
            Format::Csv => {
                writeln!(out, "{}", csv_report(label, &t, &res)).unwrap();
            }
            Format::Json => json_reports.push(res.to_json(&t)),
        }
    }
    if format == Format::Json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Array(json_reports)).unwrap()
        )
        .unwrap();
    }
    Ok(Outcome::Success)
}

fn exponent_summary(res: &SwcResult) -> String {
    res.report
        .exponents
        .iter()
        .map(|e| {
            if e.integral {
                format!("{}={}", e.name, e.num / e.den)
            } else {
                format!("{}={}/{}(!)", e.name, e.num, e.den)
            }
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn input_fs(res: &SwcResult) -> String {
    let mut parts: Vec<String> = res
        .constituents
        .iter()
        .map(|c| format!("{}x{:+}", c.multiplicity, c.fs))
        .collect();
    parts.dedup();
    parts.join("|")
}

fn text_report(label: &str, _t: &CharacterTable, res: &SwcResult) -> String {
    format!(
        "{label}: degree {}, theorem {}, {} -> w = {}",
        res.degree,
        res.theorem.as_str(),
        exponent_summary(res),
        res.total.render()
    )
}

fn csv_report(label: &str, _t: &CharacterTable, res: &SwcResult) -> String {
    format!(
        "{label},{},{},{},{},{}",
        res.degree,
        input_fs(res),
        res.theorem.as_str(),
        exponent_summary(res),
        res.total.render()
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    cache: &Cache,
    format: Format,
    family: &str,
    param: Option<u32>,
    suite_names: &[String],
    trials: Option<u32>,
    seed: u64,
    budget: u64,
    out: &mut String,
) -> Result<Outcome> {
    let default_suites: Vec<&str> = match family {
        "sp6" => vec!["synthetic"],
        "sp4" => vec!["restriction", "whitney", "synthetic"],
        _ => vec!["restriction", "whitney"],
    };
    let requested: Vec<String> = if suite_names.is_empty() {
        default_suites.iter().map(|s| s.to_string()).collect()
    } else {
        suite_names.to_vec()
    };

    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in &requested {
        match name.as_str() {
            "synthetic" => {
                let n = match family {
                    "sp4" => 2,
                    "sp6" => 3,
                    other => {
                        return Err(Error::UnsupportedFamily {
                            family: format!("{other} has no synthetic identity suite"),
                        })
                    }
                };
                reports.push(verify::synthetic_sp_identity(n, trials.unwrap_or(1000), seed)?);
            }
            "restriction" | "whitney" => {
                let param = param.ok_or_else(|| {
                    Error::SelectorOutOfRange(format!("suite `{name}` needs a group parameter"))
                })?;
                let spec = parse_family(family, param, None)?;
                let g = cache.load_or_build_group(spec, budget)?;
                let t = cache.load_or_compute_table(spec, budget)?;
                if name == "restriction" {
                    reports.push(verify::restriction_suite(&g, &t));
                } else {
                    reports.push(verify::whitney_sum_suite(&t, trials.unwrap_or(500), seed, 48));
                }
            }
            other => {
                return Err(Error::SelectorOutOfRange(format!("unknown suite `{other}`")))
            }
        }
    }

    let all_pass = reports.iter().all(|r| r.passed());
    match format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&reports).unwrap()).unwrap();
        }
        _ => {
            for r in &reports {
                writeln!(out, "{}", r.summary()).unwrap();
                for c in r.cases.iter().filter(|c| !c.pass) {
                    writeln!(out, "  FAIL {}: {}", c.name, c.detail).unwrap();
                }
            }
            writeln!(out, "{}", if all_pass { "all suites pass" } else { "FAILURES detected" })
                .unwrap();
        }
    }
    Ok(if all_pass {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}

fn cmd_import(cache: &Cache, path: &std::path::Path, out: &mut String) -> Result<Outcome> {
    let text = std::fs::read_to_string(path)?;
    let t = chartab_io::import_json(&text)?;
    let stored = cache.store_table(&t)?;
    writeln!(
        out,
        "imported {} table: order {}, {} classes, registered at {}",
        spec_display(&t.group),
        t.order,
        t.class_count(),
        stored.display()
    )
    .unwrap();
    Ok(Outcome::Success)
}

fn cmd_export(
    cache: &Cache,
    spec: GroupSpec,
    budget: u64,
    output: Option<&std::path::Path>,
    out: &mut String,
) -> Result<Outcome> {
    let t = table_for(cache, spec, budget)?;
    let text = chartab_io::export_json(&t);
    match output {
        Some(path) => {
            std::fs::write(path, &text)?;
            writeln!(out, "wrote {}", path.display()).unwrap();
        }
        None => {
            writeln!(out, "{text}").unwrap();
        }
    }
    Ok(Outcome::Success)
}

/// Builds the block-center model table for Sp(6,q), so the import path can
/// be exercised without a 9-billion-element enumeration.
pub fn write_synthetic_sp6_table(path: &std::path::Path, q: u32) -> Result<()> {
    let t = verify::synthetic_block_center_table(3, q);
    std::fs::write(path, chartab_io::export_json(&t))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_mapping() {
        assert_eq!(exit_code(&Ok(Outcome::Success)), 0);
        assert_eq!(exit_code(&Ok(Outcome::VerificationFailed)), 2);
        assert_eq!(
            exit_code(&Err(Error::BudgetExceeded {
                order: 9_170_703_360,
                budget: DEFAULT_BUDGET
            })),
            3
        );
        assert_eq!(
            exit_code(&Err(Error::ImportRejected("bad".into()))),
            1
        );
    }

    #[test]
    fn family_parsing() {
        assert_eq!(
            parse_family("cyclic", 8, None).unwrap(),
            GroupSpec::Cyclic { n: 8 }
        );
        assert_eq!(
            parse_family("cyclic", 4, Some(2)).unwrap(),
            GroupSpec::CyclicPower { n: 4, k: 2 }
        );
        assert_eq!(parse_family("sp4", 3, None).unwrap(), GroupSpec::Sp4 { q: 3 });
        assert!(parse_family("gl2", 3, None).is_err());
        assert!(parse_family("sl2", 3, Some(2)).is_err());
    }
}
