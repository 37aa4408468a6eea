//! Certified SD/GMD ordering verdicts, truncation threshold scans and closure checks.

use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::{self, ConcentrationValue, DispersionReport};
use crate::dist::{affine, convolve, mix, truncate, Distribution, Side};
use crate::error::{Error, Result};
use crate::hazard::{self, equivalence_audit, HazardReport, Target, SLACK};

/// Tolerance for the agreement between a certificate and the numeric sign of `SD - GMD`.
pub const CONSISTENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SdDominates,
    GmdDominates,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::SdDominates => "sd-dominates",
            Verdict::GmdDominates => "gmd-dominates",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    ThmSdContinuous,
    ThmGmdContinuous,
    PropLogconcaveDensity,
    ThmSdDiscrete,
    ThmGmdDiscrete,
    None,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::ThmSdContinuous => "thm-sd-continuous",
            Basis::ThmGmdContinuous => "thm-gmd-continuous",
            Basis::PropLogconcaveDensity => "prop-logconcave-density",
            Basis::ThmSdDiscrete => "thm-sd-discrete",
            Basis::ThmGmdDiscrete => "thm-gmd-discrete",
            Basis::None => "none",
        }
    }
}

/// Which hazard hypothesis carried an SD certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SdRoute {
    HazardDecreasing,
    ReverseHazardIncreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub hazard: HazardReport,
    pub dispersion: DispersionReport,
    pub sd_route: Option<SdRoute>,
    /// Lattice laws only.
    pub concentration: Option<ConcentrationValue>,
    /// `GMD <= (1 - Lambda) / (2 Lambda)`, checked when the lattice GMD hazard hypotheses hold.
    pub gmd_bound_holds: Option<bool>,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingVerdict {
    pub verdict: Verdict,
    pub basis: Basis,
    pub evidence: Evidence,
    /// `SD - GMD`
    pub numeric_diff: f64,
}

/// Apply the dominance criteria, then check the certificate against the numeric sign of `SD - GMD`.
pub fn classify(d: &Distribution) -> Result<OrderingVerdict> {
    let disp = dispersion::report(d)?;
    let audit = equivalence_audit(d)?;
    classify_with(d, disp, audit)
}

fn classify_with(d: &Distribution, disp: DispersionReport, audit: HazardReport) -> Result<OrderingVerdict> {
    let h = audit.h_verdict.direction;
    let r = audit.r_verdict.direction;
    let sd_route = if h.allows_decreasing() {
        Some(SdRoute::HazardDecreasing)
    } else if r.allows_increasing() {
        Some(SdRoute::ReverseHazardIncreasing)
    } else {
        None
    };
    let mut evidence = Evidence {
        hazard: audit,
        dispersion: disp,
        sd_route,
        concentration: None,
        gmd_bound_holds: None,
        diagnostic: None,
    };
    let diff = disp.diff;

    let (verdict, basis) = if d.is_lattice() {
        let conc = dispersion::concentration(d)?;
        evidence.concentration = Some(conc);
        let s = d.support();
        let support_ok = match sd_route {
            Some(SdRoute::HazardDecreasing) => s.upper.is_infinite(),
            Some(SdRoute::ReverseHazardIncreasing) => s.lower.is_infinite(),
            None => true,
        };
        if sd_route.is_some() && !support_ok {
            evidence.diagnostic = Some(format!(
                "monotone hazard on the scan grid but support [{}, {}] is not of the shape the hazard condition implies",
                s.lower, s.upper
            ));
            (Verdict::Inconclusive, Basis::None)
        } else if sd_route.is_some() {
            (Verdict::SdDominates, Basis::ThmSdDiscrete)
        } else if h.allows_increasing() && r.allows_decreasing() {
            let holds = disp.gmd <= conc.odds_bound;
            evidence.gmd_bound_holds = Some(holds);
            if holds {
                (Verdict::GmdDominates, Basis::ThmGmdDiscrete)
            } else {
                (Verdict::Inconclusive, Basis::None)
            }
        } else {
            (Verdict::Inconclusive, Basis::None)
        }
    } else if sd_route.is_some() {
        (Verdict::SdDominates, Basis::ThmSdContinuous)
    } else if evidence.hazard.logconcavity.pdf.is_log_concave() {
        (Verdict::GmdDominates, Basis::PropLogconcaveDensity)
    } else if h.allows_increasing() && r.allows_decreasing() {
        (Verdict::GmdDominates, Basis::ThmGmdContinuous)
    } else {
        (Verdict::Inconclusive, Basis::None)
    };

    let contradicted = match (verdict, basis) {
        // the lattice SD criterion needs a strict inequality
        (Verdict::SdDominates, Basis::ThmSdDiscrete) => !(diff > 0.0),
        (Verdict::SdDominates, _) => diff < -CONSISTENCY_TOL,
        (Verdict::GmdDominates, _) => diff > CONSISTENCY_TOL,
        (Verdict::Inconclusive, _) => false,
    };
    if contradicted {
        return Err(Error::ConsistencyViolation { basis: basis.as_str().to_string(), diff });
    }
    Ok(OrderingVerdict { verdict, basis, evidence, numeric_diff: diff })
}

/// Tail criterion tested at each threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Lower side: hazard of `X | X > u` decreasing. Upper side: reverse hazard of `X | X <= u` increasing.
    TailHazardMonotone,
    /// Density of the tail law log-concave.
    TailDensityLogconcave,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::TailHazardMonotone => "tail-hazard-monotone",
            Criterion::TailDensityLogconcave => "tail-density-logconcave",
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tail-hazard-monotone" => Ok(Criterion::TailHazardMonotone),
            "tail-density-logconcave" => Ok(Criterion::TailDensityLogconcave),
            _ => Err(Error::Parse(format!("unknown criterion `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdPoint {
    pub u: f64,
    pub holds: bool,
    /// `SD - GMD` of the tail law.
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdScan {
    pub side: Side,
    pub u_star: f64,
    pub criterion: Criterion,
    pub verified_range: Vec<ThresholdPoint>,
}

/// Whether the tail criterion holds for the already-truncated law `t`.
pub fn tail_criterion(t: &Distribution, side: Side, criterion: Criterion) -> Result<bool> {
    Ok(match criterion {
        Criterion::TailHazardMonotone => match side {
            Side::Lower => hazard::monotonicity_scan(|x| hazard::hazard_value(t, x), t, SLACK)?
                .direction
                .allows_decreasing(),
            Side::Upper => hazard::monotonicity_scan(|x| hazard::reverse_hazard_value(t, x), t, SLACK)?
                .direction
                .allows_increasing(),
        },
        Criterion::TailDensityLogconcave => hazard::log_concavity_scan(t, Target::Pdf)?.is_log_concave(),
    })
}

/// Evaluate the tail criterion and tail `SD - GMD` at each `u`; `u_star` is the smallest holding
/// grid value on the lower side and the largest on the upper side.
pub fn threshold_scan(d: &Distribution, side: Side, criterion: Criterion, u_grid: &[f64]) -> Result<ThresholdScan> {
    let verified_range = u_grid
        .par_iter()
        .map(|&u| {
            let t = truncate(d, side, u)?;
            let holds = tail_criterion(&t, side, criterion)?;
            let diff = dispersion::report(&t)?.diff;
            Ok(ThresholdPoint { u, holds, diff })
        })
        .collect::<Result<Vec<_>>>()?;
    let holding = verified_range.iter().filter(|p| p.holds).map(|p| p.u);
    let u_star = match side {
        Side::Lower => holding.fold(None, |m: Option<f64>, u| Some(m.map_or(u, |m| m.min(u)))),
        Side::Upper => holding.fold(None, |m: Option<f64>, u| Some(m.map_or(u, |m| m.max(u)))),
    }
    .ok_or(Error::CriterionNeverHolds)?;
    Ok(ThresholdScan { side, u_star, criterion, verified_range })
}

/// A construction under which dominance should be preserved.
#[derive(Debug, Clone)]
pub enum Construct {
    Mixture { components: Vec<Distribution>, weights: Vec<f64> },
    Convolution(Distribution, Distribution),
    Truncation { d: Distribution, side: Side, u: f64 },
    Affine { d: Distribution, a: f64, b: f64 },
}

impl Construct {
    pub fn build(&self) -> Result<Distribution> {
        match self {
            Construct::Mixture { components, weights } => mix(components, weights),
            Construct::Convolution(a, b) => convolve(a, b),
            Construct::Truncation { d, side, u } => truncate(d, *side, *u),
            Construct::Affine { d, a, b } => affine(d, *a, *b),
        }
    }
}

/// Build the combined law and report whether `expected` is certified and matches the numeric sign.
pub fn closure_check(construct: &Construct, expected: Verdict) -> Result<bool> {
    let v = classify(&construct.build()?)?;
    let sign_ok = match expected {
        Verdict::SdDominates => v.numeric_diff >= -CONSISTENCY_TOL,
        Verdict::GmdDominates => v.numeric_diff <= CONSISTENCY_TOL,
        Verdict::Inconclusive => true,
    };
    Ok(v.verdict == expected && sign_ok)
}
