#![allow(dead_code)]

use dispersion_core::dist::make_distribution;
use dispersion_core::Distribution;

pub fn fam(spec: &str) -> Distribution {
    make_distribution(&spec.parse().unwrap()).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

/// Three parameter points per family (one for parameter-free families).
pub const AUDIT_POINTS: &[&str] = &[
    "gamma:alpha=0.5",
    "gamma:alpha=1",
    "gamma:alpha=3",
    "weibull:alpha=0.7",
    "weibull:alpha=1",
    "weibull:alpha=2.5",
    "gpd:alpha=0",
    "gpd:alpha=0.25",
    "gpd:alpha=0.4",
    "normal",
    "normal:mu=1,sigma=2",
    "normal:mu=-3,sigma=0.5",
    "beta:alpha=0.5",
    "beta:alpha=2",
    "beta:alpha=2,beta=3",
    "logistic",
    "logistic:mu=1,s=2",
    "logistic:mu=-2,s=0.3",
    "erf-hazard",
    "erfi-interval",
    "erfi-unit",
    "damped-hazard:theta=0.1",
    "damped-hazard:theta=0.5",
    "damped-hazard:theta=2",
    "normal-mix",
    "normal-mix:sigma1=1,sigma2=1.5,q=0.5",
    "normal-mix:sigma1=0.3,sigma2=3,q=0.9",
    "geometric:p=0.2",
    "geometric:p=0.5",
    "geometric:p=0.8",
    "zipf:alpha=2.5",
    "zipf:alpha=3",
    "zipf:alpha=5",
    "poisson:theta=0.5",
    "poisson:theta=2",
    "poisson:theta=6",
    "negbinomial:r=2,p=0.5",
    "negbinomial:r=0.5,p=0.4",
    "negbinomial:r=5,p=0.3",
];

/// Instances for the soundness regression.
pub fn soundness_points() -> Vec<String> {
    let mut v: Vec<String> = AUDIT_POINTS.iter().map(|s| s.to_string()).collect();
    v.extend(
        [
            "gamma:alpha=0.2",
            "gamma:alpha=8",
            "weibull:alpha=0.4",
            "weibull:alpha=5",
            "gpd:alpha=0.1",
            "beta:alpha=1",
            "beta:alpha=5",
            "beta:alpha=0.5,beta=0.5",
            "geometric:p=0.05",
            "poisson:theta=0.1",
            "poisson:theta=1",
            "negbinomial:r=2,p=0.8",
        ]
        .map(String::from),
    );
    v
}

/// Two parameter points per family for the Monte Carlo comparison. Heavy-tailed families use
/// parameters with a finite fourth moment so that batch-means intervals are valid.
pub const ORACLE_POINTS: &[&str] = &[
    "gamma:alpha=0.5",
    "gamma:alpha=3",
    "weibull:alpha=0.7",
    "weibull:alpha=2",
    "gpd:alpha=0.1",
    "gpd:alpha=0.2",
    "normal",
    "normal:mu=1,sigma=2",
    "beta:alpha=0.5",
    "beta:alpha=2,beta=3",
    "logistic",
    "logistic:mu=1,s=2",
    "erf-hazard",
    "erfi-interval",
    "erfi-unit",
    "damped-hazard:theta=0.1",
    "damped-hazard:theta=2",
    "normal-mix",
    "normal-mix:sigma1=1,sigma2=1.5,q=0.5",
    "geometric:p=0.3",
    "geometric:p=0.7",
    "zipf:alpha=5",
    "zipf:alpha=6",
    "poisson:theta=0.5",
    "poisson:theta=4",
    "negbinomial:r=2,p=0.5",
    "negbinomial:r=0.5,p=0.4",
];

pub fn grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = ((b - a) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| ((a + step * i as f64) * 1e12).round() / 1e12).collect()
}
