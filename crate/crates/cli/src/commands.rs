//! Command implementations; each returns the full output text.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use dispersion_core::dispersion::{self, ConcentrationValue, DispersionReport};
use dispersion_core::dist::make_distribution;
use dispersion_core::hazard;
use dispersion_core::oracle::{self, BruteForce, OracleEstimate};
use dispersion_core::ordering::{self, Criterion, OrderingVerdict};
use dispersion_core::{Distribution, Error, Family, FamilySpec};

use crate::format::{parse_range, sig};
use crate::{AnalyzeArgs, CurveArgs, Format, OutputArgs, SweepArgs, TruncateArgs, VerifyArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "ParseError",
            CliError::Core(e) => e.name(),
            CliError::Io(_) => "IoError",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Parse(_) | Error::UnknownFamily(_)) => 2,
            _ => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn law(spec: &str) -> Result<Distribution> {
    let spec: FamilySpec = spec.parse()?;
    Ok(make_distribution(&spec)?)
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.into());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct Verdict<'a> {
    verdict: &'static str,
    basis: &'static str,
    numeric_diff: f64,
    sd_route: Option<ordering::SdRoute>,
    concentration: Option<ConcentrationValue>,
    gmd_bound_holds: Option<bool>,
    diagnostic: Option<&'a str>,
}

fn verdict_record(v: &OrderingVerdict) -> Verdict<'_> {
    Verdict {
        verdict: v.verdict.as_str(),
        basis: v.basis.as_str(),
        numeric_diff: v.numeric_diff,
        sd_route: v.evidence.sd_route,
        concentration: v.evidence.concentration,
        gmd_bound_holds: v.evidence.gmd_bound_holds,
        diagnostic: v.evidence.diagnostic.as_deref(),
    }
}

pub fn analyze(a: &AnalyzeArgs) -> Result<String> {
    let d = law(&a.dist)?;
    let v = ordering::classify(&d)?;
    match a.io.output.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "dist": d.label(),
            "kind": d.kind(),
            "dispersion": v.evidence.dispersion,
            "hazard": v.evidence.hazard,
            "verdict": verdict_record(&v),
        })),
        Format::Csv => {
            let r = &v.evidence.dispersion;
            to_csv(
                &["dist", "sd", "gmd", "diff", "verdict", "basis"],
                &[vec![d.label().to_string(), sig(r.sd), sig(r.gmd), sig(r.diff), v.verdict.as_str().into(), v.basis.as_str().into()]],
            )
        }
    }
}

/// Replace the single `_` parameter value in `spec` with `value`.
fn substitute(spec: &str, value: f64) -> Result<String> {
    let (family, params) = spec.split_once(':').unwrap_or((spec, ""));
    let mut hits = 0;
    let params: Vec<String> = params
        .split(',')
        .filter(|p| !p.is_empty())
        .map(|p| match p.split_once('=') {
            Some((k, v)) if v.trim() == "_" => {
                hits += 1;
                format!("{k}={}", sig(value))
            }
            _ => p.to_string(),
        })
        .collect();
    if hits != 1 {
        return Err(CliError::Usage(format!("sweep spec `{spec}` must mark exactly one parameter with `_`")));
    }
    Ok(format!("{family}:{}", params.join(",")))
}

#[derive(Serialize)]
struct SweepRow {
    param: f64,
    sd: f64,
    gmd: f64,
    diff: f64,
    verdict: &'static str,
    basis: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    odds_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound_gap: Option<f64>,
}

pub fn sweep(a: &SweepArgs) -> Result<String> {
    let grid = parse_range(&a.range).map_err(CliError::Usage)?;
    // validate the template before any computation
    let specs: Vec<String> = grid.iter().map(|&v| substitute(&a.dist, v)).collect::<Result<_>>()?;
    let laws: Vec<Distribution> = specs.iter().map(|s| law(s)).collect::<Result<_>>()?;
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .zip(laws.par_iter())
        .map(|(&param, d)| {
            let v = ordering::classify(d)?;
            let r = v.evidence.dispersion;
            let conc = if a.concentration { Some(dispersion::concentration(d)?) } else { None };
            Ok(SweepRow {
                param,
                sd: r.sd,
                gmd: r.gmd,
                diff: r.diff,
                verdict: v.verdict.as_str(),
                basis: v.basis.as_str(),
                lambda: conc.map(|c| c.lambda),
                odds_bound: conc.map(|c| c.odds_bound),
                bound_gap: conc.map(|c| r.gmd - c.odds_bound),
            })
        })
        .collect::<Result<_>>()?;
    match a.io.output.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut header = vec!["param", "sd", "gmd", "diff", "verdict", "basis"];
            if a.concentration {
                header.extend(["lambda", "odds_bound", "bound_gap"]);
            }
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![sig(r.param), sig(r.sd), sig(r.gmd), sig(r.diff), r.verdict.into(), r.basis.into()];
                    for x in [r.lambda, r.odds_bound, r.bound_gap].into_iter().flatten() {
                        row.push(sig(x));
                    }
                    row
                })
                .collect();
            to_csv(&header, &body)
        }
    }
}

#[derive(Serialize)]
struct TailRow {
    u: f64,
    sd: f64,
    gmd: f64,
    diff: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    holds: Option<bool>,
}

pub fn truncate_sweep(a: &TruncateArgs) -> Result<String> {
    let grid = parse_range(&a.range).map_err(CliError::Usage)?;
    let criterion: Option<Criterion> = a.criterion.as_deref().map(str::parse).transpose()?;
    let d = law(&a.dist)?;
    let rows: Vec<TailRow> = grid
        .par_iter()
        .map(|&u| {
            let t = dispersion_core::dist::truncate(&d, a.side, u)?;
            let r: DispersionReport = dispersion::report(&t)?;
            let holds = criterion.map(|c| ordering::tail_criterion(&t, a.side, c)).transpose()?;
            Ok(TailRow { u, sd: r.sd, gmd: r.gmd, diff: r.diff, holds })
        })
        .collect::<Result<_>>()?;
    match a.io.output.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut header = vec!["u", "sd", "gmd", "diff"];
            if criterion.is_some() {
                header.push("holds");
            }
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![sig(r.u), sig(r.sd), sig(r.gmd), sig(r.diff)];
                    row.extend(r.holds.map(|h| h.to_string()));
                    row
                })
                .collect();
            to_csv(&header, &body)
        }
    }
}

#[derive(Serialize)]
struct CurveRow {
    x: f64,
    h: Option<f64>,
    r: Option<f64>,
}

/// Hazard and reverse hazard on a grid; points where a rate is undefined are left empty.
pub fn hazard_curve(a: &CurveArgs) -> Result<String> {
    let grid = parse_range(&a.range).map_err(CliError::Usage)?;
    let d = law(&a.dist)?;
    let rows: Vec<CurveRow> = grid
        .iter()
        .map(|&x| CurveRow {
            x,
            h: hazard::hazard_rate(&d, x).ok(),
            r: hazard::reverse_hazard_rate(&d, x).ok(),
        })
        .collect();
    match a.io.output.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let cell = |v: Option<f64>| v.map(sig).unwrap_or_default();
            let body: Vec<Vec<String>> = rows.iter().map(|r| vec![sig(r.x), cell(r.h), cell(r.r)]).collect();
            to_csv(&["x", "h", "r"], &body)
        }
    }
}

#[derive(Serialize)]
struct Agreement {
    sd: bool,
    gmd: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<bool>,
}

pub fn verify(a: &VerifyArgs) -> Result<String> {
    let d = law(&a.dist)?;
    let analytic = dispersion::report(&d)?;
    let conc = if d.is_lattice() { Some(dispersion::concentration(&d)?) } else { None };
    let mc: OracleEstimate = oracle::mc_estimate(&d, a.mc_n, a.seed)?;
    let brute: Option<BruteForce> = if d.is_lattice() {
        match oracle::brute_force_lattice(&d, 1e-12) {
            Ok(b) => Some(b),
            Err(Error::SupportTooLarge(_)) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let within = |hat: f64, exact: f64, hw: f64| (hat - exact).abs() <= 4.0 * hw;
    let agreement = Agreement {
        sd: within(mc.sd_hat, analytic.sd, mc.ci_halfwidth.sd),
        gmd: within(mc.gmd_hat, analytic.gmd, mc.ci_halfwidth.gmd),
        lambda: conc.and_then(|c| Some(within(mc.lambda_hat?, c.lambda, mc.ci_halfwidth.lambda?))),
    };
    let report = json!({
        "dist": d.label(),
        "analytic": { "dispersion": analytic, "concentration": conc },
        "oracle": mc,
        "brute_force": brute.map(|b| json!({ "sd": b.sd, "gmd": b.gmd, "lambda": b.lambda, "support_len": b.support_len })),
        "agreement": agreement,
    });
    match a.io.output.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut rows = vec![
                vec!["sd".into(), sig(analytic.sd), sig(mc.sd_hat), sig(mc.ci_halfwidth.sd), agreement.sd.to_string()],
                vec!["gmd".into(), sig(analytic.gmd), sig(mc.gmd_hat), sig(mc.ci_halfwidth.gmd), agreement.gmd.to_string()],
            ];
            if let (Some(c), Some(hat), Some(hw), Some(ok)) = (conc, mc.lambda_hat, mc.ci_halfwidth.lambda, agreement.lambda) {
                rows.push(vec!["lambda".into(), sig(c.lambda), sig(hat), sig(hw), ok.to_string()]);
            }
            to_csv(&["statistic", "analytic", "estimate", "ci_halfwidth", "agrees"], &rows)
        }
    }
}

pub fn list_families(a: &OutputArgs) -> Result<String> {
    let params = |f: Family| {
        f.params()
            .iter()
            .map(|p| match p.default {
                Some(v) => format!("{} in {} (default {})", p.name, p.domain, sig(v)),
                None => format!("{} in {}", p.name, p.domain),
            })
            .collect::<Vec<_>>()
            .join("; ")
    };
    match a.output.unwrap_or(Format::Csv) {
        Format::Json => to_json(
            &Family::ALL
                .iter()
                .map(|&f| {
                    json!({
                        "family": f.name(),
                        "kind": if f.is_lattice() { "lattice" } else { "continuous" },
                        "params": f.params(),
                        "description": f.description(),
                    })
                })
                .collect::<Vec<_>>(),
        ),
        Format::Csv => to_csv(
            &["family", "kind", "params", "description"],
            &Family::ALL
                .iter()
                .map(|&f| {
                    vec![
                        f.name().into(),
                        if f.is_lattice() { "lattice" } else { "continuous" }.into(),
                        params(f),
                        f.description().into(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    }
}
