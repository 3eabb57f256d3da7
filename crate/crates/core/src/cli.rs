//! The `pellrank` command line.
//!
//! Every invocation resolves to a [`RunConfig`], which can be saved with
//! `--save-config` and replayed with `--config`. Exit codes: `0` on success
//! or a certified result, `2` for invalid input, `3` when the input is valid
//! but certification fails.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveParams, FamilyCurve, RationalPoint};
use crate::descent::{
    certify_rank_at_least_3, derive_coset_poly, derive_f, derive_f_numeric, irreducibility_scan,
    Coset, IrreducibilityRow, Obstruction, RankCertificate, ScanBudget,
};
use crate::heights::{regulator_capped, Regulator};
use crate::heuristics::{
    in_pool, nagao_sum_for, scan_family, write_csv, Generator, HeuristicReport, NagaoOptions,
    NagaoVariant,
};
use crate::json::{decimal, decimal_with_error};
use crate::pell::{norm_one_unit, solution_ladder, solve_pell, PellInstance, QuadraticInteger};
use crate::poly::{IrreducibilityVerdict, SparsePoly};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

fn big(s: &str) -> std::result::Result<BigInt, String> {
    s.trim().parse::<BigInt>().map_err(|e| format!("{s:?}: {e}"))
}

mod big_opt {
    use super::*;
    pub fn serialize<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::json::opt_bigint_str::serialize(v, s)
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<BigInt>, D::Error> {
        crate::json::opt_bigint_str::deserialize(d)
    }
}

#[derive(Parser, Debug)]
#[command(name = "pellrank", version, about = "Rank lower bounds for Pell-built elliptic curves")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Run from a saved RunConfig (JSON); flags given here override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the resolved RunConfig before running.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "parameters", rename_all = "kebab-case")]
pub enum Command {
    /// Solve X^2 - D Y^2 = N and list the solution ladder.
    Pell(PellArgs),
    /// Certify rank >= 3 for the curve E(a, b, m).
    Certify(CurveArgs),
    /// Derive the obstruction polynomial F, G or H.
    Derive(DeriveArgs),
    /// Certify F, G, H irreducible in Q[x, m] over a range of (a, b).
    IrredScan(IrredArgs),
    /// Mestre-Nagao sums for a curve, a ladder or a parametric family.
    Nagao(NagaoArgs),
    /// Canonical heights and the regulator of marked points.
    Heights(HeightsArgs),
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PellArgs {
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(with = "crate::json::bigint_str")]
    pub d: BigInt,
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(with = "crate::json::bigint_str")]
    pub n: BigInt,
    /// Search bound on |Y| for the fundamental solutions.
    #[arg(long, default_value_t = 10_000)]
    pub bound: u64,
    #[arg(long, default_value_t = 6)]
    pub k_max: usize,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveArgs {
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(with = "crate::json::bigint_str")]
    pub a: BigInt,
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(with = "crate::json::bigint_str")]
    pub b: BigInt,
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(with = "crate::json::bigint_str")]
    pub m: BigInt,
    #[arg(long, value_parser = big, allow_hyphen_values = true, conflicts_with = "auto_n")]
    #[serde(default, with = "big_opt")]
    pub n: Option<BigInt>,
    /// Solve n from the Pell identity.
    #[arg(long)]
    #[serde(default)]
    pub auto_n: bool,
}

impl CurveArgs {
    pub fn params(&self) -> Result<CurveParams> {
        match (&self.n, self.auto_n) {
            (Some(n), _) => CurveParams::new(self.a.clone(), self.b.clone(), self.m.clone(), n.clone()),
            (None, true) => CurveParams::with_auto_n(self.a.clone(), self.b.clone(), self.m.clone()),
            (None, false) => Err(Error::Domain("give --n or --auto-n".into())),
        }
    }
}

fn obstruction(s: &str) -> std::result::Result<Obstruction, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeriveArgs {
    /// F, G or H.
    #[arg(value_parser = obstruction)]
    pub which: Obstruction,
    /// Keep a and b symbolic.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    #[serde(default)]
    pub symbolic: bool,
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(default, with = "big_opt")]
    pub a: Option<BigInt>,
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(default, with = "big_opt")]
    pub b: Option<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum WhichSel {
    #[value(name = "F")]
    F,
    #[value(name = "G")]
    G,
    #[value(name = "H")]
    H,
    #[value(name = "all")]
    #[serde(rename = "all")]
    All,
}

impl WhichSel {
    fn list(self) -> Vec<Obstruction> {
        match self {
            WhichSel::F => vec![Obstruction::F],
            WhichSel::G => vec![Obstruction::G],
            WhichSel::H => vec![Obstruction::H],
            WhichSel::All => Obstruction::ALL.to_vec(),
        }
    }
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrredArgs {
    #[arg(long, default_value_t = 50)]
    pub a_max: u64,
    #[arg(long, default_value_t = 50)]
    pub b_max: u64,
    #[arg(long, value_enum, default_value_t = WhichSel::All, ignore_case = true)]
    pub which: WhichSel,
    #[arg(long, default_value_t = 20)]
    pub prime_budget: usize,
    #[arg(long, default_value_t = 4)]
    pub specialization_budget: usize,
    /// Budget doublings allowed for rows left undetermined.
    #[arg(long, default_value_t = 3)]
    pub max_escalations: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NagaoArgs {
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(default, with = "big_opt")]
    pub a: Option<BigInt>,
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(default, with = "big_opt")]
    pub b: Option<BigInt>,
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(default, with = "big_opt")]
    pub m: Option<BigInt>,
    #[arg(long, value_parser = big, allow_hyphen_values = true)]
    #[serde(default, with = "big_opt")]
    pub n: Option<BigInt>,
    #[arg(long)]
    #[serde(default)]
    pub auto_n: bool,
    /// Scan the Pell ladder through (n, m) for k = 0..=k-max.
    #[arg(long)]
    #[serde(default)]
    pub ladder: bool,
    #[arg(long, default_value_t = 6)]
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    /// Scan the family a = 1, b = t^2 - 2 with the given solution index.
    #[arg(long)]
    #[serde(default)]
    pub family: Option<u32>,
    #[arg(long, default_value_t = 2)]
    #[serde(default = "default_t_min")]
    pub t_min: i64,
    #[arg(long, default_value_t = 20)]
    #[serde(default = "default_t_max")]
    pub t_max: i64,
    #[arg(long, default_value_t = 10_000)]
    pub prime_bound: u64,
    #[arg(long)]
    #[serde(default)]
    pub top_k: Option<usize>,
    #[arg(long, value_enum, default_value_t = VariantSel::S1)]
    #[serde(default)]
    pub variant: VariantSel,
    /// Keep the per-prime (p, a_p) trace in the report.
    #[arg(long)]
    #[serde(default)]
    pub trace: bool,
}

fn default_k_max() -> usize {
    6
}
fn default_t_min() -> i64 {
    2
}
fn default_t_max() -> i64 {
    20
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantSel {
    #[default]
    S1,
    S2,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub curve: CurveArgs,
    /// Comma-separated combinations of P, Q, R such as `P,Q,2P+Q`.
    #[arg(long, default_value = "P,Q,R")]
    #[serde(default = "default_points")]
    pub points: String,
    #[arg(long, default_value_t = crate::heights::DEFAULT_TOLERANCE)]
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[arg(long, default_value_t = crate::heights::DEFAULT_MAX_DOUBLINGS)]
    #[serde(default = "default_max_doublings")]
    pub max_doublings: u32,
    /// Stop doubling once the determinant interval excludes zero.
    #[arg(long)]
    #[serde(default)]
    pub stop_when_separated: bool,
}

fn default_points() -> String {
    "P,Q,R".into()
}
fn default_tolerance() -> f64 {
    crate::heights::DEFAULT_TOLERANCE
}
fn default_max_doublings() -> u32 {
    crate::heights::DEFAULT_MAX_DOUBLINGS
}

/// A complete, replayable description of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub workers: Option<usize>,
    /// Seed for randomized helpers; recorded for reproducibility.
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// What a command produced, plus whether it counts as a failed certification.
pub struct Output {
    pub body: String,
    pub failed: bool,
}

fn ok(body: String) -> Result<Output> {
    Ok(Output { body, failed: false })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn csv_string(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).map_err(|e| Error::Domain(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Domain(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

#[derive(Serialize)]
pub struct LadderRow {
    pub k: usize,
    #[serde(with = "crate::json::bigint_str")]
    pub n: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    pub m: BigInt,
    pub element: String,
    #[serde(with = "crate::json::bigint_str")]
    pub m6: BigInt,
}

#[derive(Serialize)]
pub struct PellReport {
    pub instance: PellInstance,
    pub unit: QuadraticInteger,
    pub unit_display: String,
    pub search_bound: u64,
    pub classes: Vec<Vec<LadderRow>>,
}

pub fn pell_report(args: &PellArgs) -> Result<PellReport> {
    let inst = PellInstance::new(args.d.clone(), args.n.clone())?;
    let unit = norm_one_unit(inst.d())?;
    let mut classes = Vec::new();
    for base in solve_pell(&inst, args.bound) {
        let ladder = solution_ladder(&base, &inst, args.k_max)?;
        classes.push(
            ladder
                .into_iter()
                .enumerate()
                .map(|(k, s)| LadderRow {
                    k,
                    element: s.as_quadratic(inst.d()).to_string(),
                    m6: s.y.pow(6),
                    n: s.x,
                    m: s.y,
                })
                .collect(),
        );
    }
    Ok(PellReport { unit_display: unit.to_string(), instance: inst, unit, search_bound: args.bound, classes })
}

fn cmd_pell(args: &PellArgs, format: Format) -> Result<Output> {
    let r = pell_report(args)?;
    match format {
        Format::Json => ok(to_json(&r)),
        Format::Csv => {
            let mut rows = vec![vec!["class", "k", "n", "m", "element", "m6"].into_iter().map(String::from).collect()];
            for (c, class) in r.classes.iter().enumerate() {
                for row in class {
                    rows.push(vec![
                        c.to_string(),
                        row.k.to_string(),
                        row.n.to_string(),
                        row.m.to_string(),
                        row.element.clone(),
                        row.m6.to_string(),
                    ]);
                }
            }
            ok(csv_string(rows)?)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "X^2 - {}Y^2 = {}   unit {}", r.instance.d(), r.instance.n(), r.unit_display).unwrap();
            if r.classes.is_empty() {
                writeln!(s, "no solutions with Y <= {}", r.search_bound).unwrap();
            }
            for class in &r.classes {
                writeln!(s, "{:>3}  {:<28}  m_k^6", "k", "n_k + m_k√D").unwrap();
                for row in class {
                    writeln!(s, "{:>3}  {:<28}  {}", row.k, row.element, row.m6).unwrap();
                }
            }
            ok(s)
        }
    }
}

fn certificate_text(c: &RankCertificate) -> String {
    let mut s = String::new();
    writeln!(s, "{}: {}", c.params.id(), c.curve).unwrap();
    writeln!(s, "P = {}  Q = {}  R = {}", c.points.p, c.points.q, c.points.r).unwrap();
    if let Some(t) = &c.two_torsion {
        writeln!(s, "rational 2-torsion: {}", if t.free { "none" } else { "present" }).unwrap();
    }
    for chk in &c.checks {
        writeln!(s, "  {:<6} {:<10} rational roots of quartic: {}", chk.combo, chk.verdict, chk.roots_found.len()).unwrap();
    }
    match &c.verdict {
        crate::descent::Verdict::Certified => writeln!(s, "certified: rank >= 3").unwrap(),
        crate::descent::Verdict::Failed { kind, reason } => {
            writeln!(s, "failed ({kind:?}): {reason}").unwrap()
        }
    }
    s
}

fn cmd_certify(args: &CurveArgs, format: Format) -> Result<Output> {
    let params = args.params()?;
    let c = certify_rank_at_least_3(&params)?;
    let body = match format {
        Format::Json => to_json(&c),
        Format::Text => certificate_text(&c),
        Format::Csv => {
            let mut rows = vec![vec!["combo".to_string(), "point".into(), "in_2e".into(), "roots_found".into()]];
            for chk in &c.checks {
                rows.push(vec![chk.combo.clone(), chk.point.to_string(), chk.in_2e.to_string(), chk.roots_found.len().to_string()]);
            }
            csv_string(rows)?
        }
    };
    Ok(Output { body, failed: !c.verdict.is_certified() })
}

#[derive(Serialize)]
pub struct DeriveReport {
    pub which: Obstruction,
    #[serde(with = "crate::json::opt_bigint_str")]
    pub a: Option<BigInt>,
    #[serde(with = "crate::json::opt_bigint_str")]
    pub b: Option<BigInt>,
    pub degree_x: u32,
    pub polynomial: SparsePoly,
    /// Content in `x` that was divided out, when any.
    pub content: Option<SparsePoly>,
    pub m2_minus_1_removed: Option<u32>,
    pub text: String,
}

pub fn derive_report(args: &DeriveArgs) -> Result<DeriveReport> {
    let (a, b) = if args.symbolic { (None, None) } else { (args.a.clone(), args.b.clone()) };
    let (poly, content, removed) = match args.which {
        Obstruction::F => {
            let p = match (&a, &b) {
                (Some(a), Some(b)) => derive_f_numeric(a, b),
                (None, None) => derive_f(),
                _ => {
                    let vals: Vec<(&str, num_rational::BigRational)> = [("a", &a), ("b", &b)]
                        .into_iter()
                        .filter_map(|(k, v)| v.as_ref().map(|v| (k, num_rational::BigRational::from_integer(v.clone()))))
                        .collect();
                    derive_f().specialize(&vals).integer_primitive().1
                }
            };
            (p, None, None)
        }
        Obstruction::G | Obstruction::H => {
            let coset = if args.which == Obstruction::G { Coset::G } else { Coset::H };
            let c = derive_coset_poly(coset, a.as_ref(), b.as_ref())?;
            let content = (!c.content.is_constant()).then_some(c.content);
            (c.poly, content, c.m2_minus_1_removed)
        }
    };
    Ok(DeriveReport {
        which: args.which,
        a,
        b,
        degree_x: poly.degree_in("x"),
        text: poly.to_string(),
        polynomial: poly,
        content,
        m2_minus_1_removed: removed,
    })
}

fn cmd_derive(args: &DeriveArgs, format: Format) -> Result<Output> {
    let r = derive_report(args)?;
    match format {
        Format::Json => ok(to_json(&r)),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "{} (degree {} in x)", r.which.name(), r.degree_x).unwrap();
            if let Some(k) = r.m2_minus_1_removed {
                writeln!(s, "(m^2 - 1)^{k} removed; cofactor shown").unwrap();
            }
            if let Some(c) = &r.content {
                writeln!(s, "content in x removed: {c}").unwrap();
            }
            writeln!(s, "{}", r.text).unwrap();
            ok(s)
        }
        Format::Csv => {
            let json = crate::poly::PolyJson::from(&r.polynomial);
            let mut header: Vec<String> = json.vars.iter().map(|v| format!("deg_{v}")).collect();
            header.push("coefficient".into());
            let mut rows = vec![header];
            for t in json.terms {
                let mut row: Vec<String> = t.e.iter().map(|e| e.to_string()).collect();
                row.push(t.c);
                rows.push(row);
            }
            ok(csv_string(rows)?)
        }
    }
}

fn cmd_irred(args: &IrredArgs, format: Format) -> Result<Output> {
    let budget = ScanBudget {
        prime_budget: args.prime_budget,
        specialization_budget: args.specialization_budget,
        max_escalations: args.max_escalations,
    };
    let rows = irreducibility_scan(args.a_max, args.b_max, &args.which.list(), &budget);
    let failed = rows.iter().any(|r| r.verdict != IrreducibilityVerdict::Irreducible);
    let body = match format {
        Format::Json => to_json(&rows),
        Format::Csv | Format::Text => irred_csv(&rows)?,
    };
    Ok(Output { body, failed })
}

pub fn irred_csv(rows: &[IrreducibilityRow]) -> Result<String> {
    let mut out = vec![[
        "a", "b", "which", "degree_x", "verdict", "specialization", "witness_primes", "escalations",
        "flagged", "error",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect::<Vec<_>>()];
    for r in rows {
        let (spec, primes) = match &r.certificate {
            Some(c) => (
                c.specialization.as_ref().map(|v| v.to_string()).unwrap_or_default(),
                c.univariate
                    .as_ref()
                    .filter(|_| c.verdict == IrreducibilityVerdict::Irreducible)
                    .map(|u| u.witness_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default(),
            ),
            None => Default::default(),
        };
        out.push(vec![
            r.a.to_string(),
            r.b.to_string(),
            r.which.name().into(),
            r.degree_x.to_string(),
            match r.verdict {
                IrreducibilityVerdict::Irreducible => "irreducible".into(),
                IrreducibilityVerdict::Undetermined => "undetermined".into(),
            },
            spec,
            primes,
            r.escalations.to_string(),
            r.flagged.to_string(),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    csv_string(out)
}

fn nagao_generator(args: &NagaoArgs) -> Result<Option<Generator>> {
    if let Some(i) = args.family {
        return Ok(Some(Generator::Parametric { i, t_min: args.t_min, t_max: args.t_max }));
    }
    if !args.ladder {
        return Ok(None);
    }
    let params = curve_from_nagao(args)?;
    Ok(Some(Generator::Ladder { a: params.a, b: params.b, n: params.n, m: params.m, k_max: args.k_max }))
}

fn curve_from_nagao(args: &NagaoArgs) -> Result<CurveParams> {
    let need = |v: &Option<BigInt>, name: &str| v.clone().ok_or_else(|| Error::Domain(format!("missing --{name}")));
    CurveArgs { a: need(&args.a, "a")?, b: need(&args.b, "b")?, m: need(&args.m, "m")?, n: args.n.clone(), auto_n: args.auto_n }
        .params()
}

fn nagao_rows(reports: &[HeuristicReport]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(reports, &mut buf)?;
    Ok(String::from_utf8(buf).expect("utf-8"))
}

fn cmd_nagao(args: &NagaoArgs, format: Format) -> Result<Output> {
    let opts = NagaoOptions {
        variant: match args.variant {
            VariantSel::S1 => NagaoVariant::S1,
            VariantSel::S2 => NagaoVariant::S2,
        },
        workers: None,
        keep_trace: args.trace,
    };
    match nagao_generator(args)? {
        Some(g) => {
            let scan = scan_family(&g, args.prime_bound, args.top_k, &opts)?;
            match format {
                Format::Json => ok(to_json(&scan)),
                Format::Csv => ok(nagao_rows(&scan.ranked)?),
                Format::Text => {
                    let mut s = String::new();
                    for (i, r) in scan.ranked.iter().enumerate() {
                        writeln!(s, "{:>3}. {:<24} S = {}", i + 1, r.curve_id, decimal(r.sum)).unwrap();
                    }
                    for f in &scan.failures {
                        writeln!(s, "  skipped {}: {}", f.label, f.error).unwrap();
                    }
                    ok(s)
                }
            }
        }
        None => {
            let r = nagao_sum_for(&curve_from_nagao(args)?, args.prime_bound, &opts)?;
            match format {
                Format::Json => ok(to_json(&r)),
                Format::Csv => ok(nagao_rows(std::slice::from_ref(&r))?),
                Format::Text => ok(format!(
                    "{}  N = {}  S = {}  ({} good primes, {} skipped)\n",
                    r.curve_id,
                    r.prime_bound,
                    decimal(r.sum),
                    r.good_primes,
                    r.skipped.len()
                )),
            }
        }
    }
}

/// Parses `2P+Q-R` style combinations of the marked points.
pub fn parse_combination(fc: &FamilyCurve, s: &str) -> Result<RationalPoint> {
    let e = &fc.curve;
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty point expression".into()));
    }
    let mut acc = RationalPoint::Infinity;
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, tail) = match rest.as_bytes()[0] {
            b'+' => (1i64, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => (1, rest),
        };
        let digits = tail.chars().take_while(|c| c.is_ascii_digit()).count();
        let coef: i64 = if digits == 0 { 1 } else { tail[..digits].parse().map_err(|_| Error::Parse(s.clone()))? };
        let name = tail[digits..].chars().next().ok_or_else(|| Error::Parse(format!("{s:?}: missing point name")))?;
        let base = match name {
            'P' => &fc.p,
            'Q' => &fc.q,
            'R' => &fc.r,
            _ => return Err(Error::Parse(format!("{s:?}: unknown point {name:?}"))),
        };
        acc = e.add(&acc, &e.mul(sign * coef, base));
        rest = &tail[digits + 1..];
    }
    Ok(acc)
}

#[derive(Serialize)]
pub struct HeightEntry {
    pub point: String,
    pub value: String,
    pub error_bound: String,
    pub tolerance_met: bool,
}

#[derive(Serialize)]
pub struct HeightsReport {
    pub params: CurveParams,
    pub tolerance: f64,
    pub heights: Vec<HeightEntry>,
    pub pairing: Vec<Vec<String>>,
    pub pairing_error: Vec<Vec<String>>,
    pub determinant: String,
    pub determinant_error: String,
    pub independent: bool,
    pub relation: Option<Vec<i64>>,
    pub doublings: u32,
    #[serde(skip)]
    pub raw: Option<Regulator>,
}

pub fn heights_report(args: &HeightsArgs) -> Result<HeightsReport> {
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let params = args.curve.params()?;
    let fc = params.build()?;
    let names: Vec<&str> = args.points.split(',').map(str::trim).collect();
    let points = names.iter().map(|n| parse_combination(&fc, n)).collect::<Result<Vec<_>>>()?;
    let reg = regulator_capped(&fc.curve, &points, args.tolerance, args.max_doublings, args.stop_when_separated)?;
    let fmt = |v: f64, e: f64| decimal_with_error(v, e);
    Ok(HeightsReport {
        params,
        tolerance: args.tolerance,
        heights: names
            .iter()
            .zip(&reg.heights)
            .map(|(n, h)| HeightEntry {
                point: n.to_string(),
                value: h.display(),
                error_bound: format!("{:.3e}", h.error_bound),
                tolerance_met: h.tolerance_met,
            })
            .collect(),
        pairing: reg.pairing.entries.iter().map(|r| r.iter().map(|i| fmt(i.mid(), i.radius())).collect()).collect(),
        pairing_error: reg.pairing.entries.iter().map(|r| r.iter().map(|i| format!("{:.3e}", i.radius())).collect()).collect(),
        determinant: fmt(reg.det, reg.det_error),
        determinant_error: format!("{:.3e}", reg.det_error),
        independent: reg.independent,
        relation: reg.relation.clone(),
        doublings: reg.doublings,
        raw: Some(reg),
    })
}

fn cmd_heights(args: &HeightsArgs, format: Format) -> Result<Output> {
    let r = heights_report(args)?;
    match format {
        Format::Json => ok(to_json(&r)),
        Format::Csv => {
            let mut rows = vec![vec!["point".to_string(), "height".into(), "error_bound".into()]];
            for h in &r.heights {
                rows.push(vec![h.point.clone(), h.value.clone(), h.error_bound.clone()]);
            }
            rows.push(vec!["det".into(), r.determinant.clone(), r.determinant_error.clone()]);
            ok(csv_string(rows)?)
        }
        Format::Text => {
            let mut s = String::new();
            for h in &r.heights {
                let note = if h.tolerance_met { "" } else { "  (tolerance not reached)" };
                writeln!(s, "h({}) = {} ± {}{note}", h.point, h.value, h.error_bound).unwrap();
            }
            writeln!(s, "det = {} ± {}  after {} doublings", r.determinant, r.determinant_error, r.doublings).unwrap();
            writeln!(s, "independent: {}", r.independent).unwrap();
            if let Some(rel) = &r.relation {
                writeln!(s, "relation: {rel:?}").unwrap();
            }
            ok(s)
        }
    }
}

/// Runs one configuration, returning the rendered output.
pub fn execute(cfg: &RunConfig) -> Result<Output> {
    let f = cfg.format;
    let cmd = cfg.command.clone();
    in_pool(cfg.workers, move || match &cmd {
        Command::Pell(a) => cmd_pell(a, f),
        Command::Certify(a) => cmd_certify(a, f),
        Command::Derive(a) => cmd_derive(a, f),
        Command::IrredScan(a) => cmd_irred(a, f),
        Command::Nagao(a) => cmd_nagao(a, f),
        Command::Heights(a) => cmd_heights(a, f),
    })?
}

/// Merges flags over an optional config file.
pub fn resolve(cli: Cli) -> Result<RunConfig> {
    let mut cfg = match (&cli.config, cli.command) {
        (Some(path), cmd) => {
            let mut c = RunConfig::load(path)?;
            if let Some(cmd) = cmd {
                c.command = cmd;
            }
            c
        }
        (None, Some(command)) => RunConfig { command, format: Format::default(), out: None, workers: None, seed: 0 },
        (None, None) => return Err(Error::Domain("no subcommand given; see --help".into())),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    if cli.workers.is_some() {
        cfg.workers = cli.workers;
    }
    if let Some(path) = &cli.save_config {
        std::fs::write(path, cfg.to_json()).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
    }
    Ok(cfg)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_)
        | Error::Contract(_)
        | Error::Degenerate(_)
        | Error::Precondition(_)
        | Error::RejectedPrime(_)
        | Error::Parse(_) => EXIT_INVALID,
    }
}

/// Parses `args`, runs, writes output and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let result = resolve(cli).and_then(|cfg| execute(&cfg).map(|o| (cfg, o)));
    match result {
        Ok((cfg, out)) => {
            let written = match &cfg.out {
                Some(p) => std::fs::write(p, &out.body).map_err(|e| format!("{}: {e}", p.display())),
                None => std::io::stdout().write_all(out.body.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return EXIT_INVALID;
            }
            if out.failed {
                EXIT_FAILED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
