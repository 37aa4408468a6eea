mod common;

use common::{fam, AUDIT_POINTS};
use dispersion_core::dispersion::{concentration, mean_excess_abs_diff, numeric_report, report};
use dispersion_core::dist::{affine, make_distribution};
use dispersion_core::hazard::{
    hazard_rate, log_concavity_scan, mean_excess, monotonicity_scan, Direction, Target, SLACK,
};
use dispersion_core::oracle::{brute_force_lattice, mc_estimate};
use dispersion_core::ordering::{classify, Verdict};
use dispersion_core::{Distribution, Family, FamilySpec};
use proptest::prelude::*;

/// Map `u` in [0, 1) onto a bounded slice of each parameter's domain.
fn params_for(family: Family, u: f64, v: f64) -> Vec<(&'static str, f64)> {
    let lerp = |a: f64, b: f64, w: f64| a + (b - a) * w;
    match family {
        Family::Gamma | Family::Weibull => vec![("alpha", lerp(0.3, 4.0, u))],
        Family::Gpd => vec![("alpha", lerp(0.0, 0.45, u))],
        Family::Normal => vec![("mu", lerp(-3.0, 3.0, u)), ("sigma", lerp(0.2, 3.0, v))],
        Family::Beta => vec![("alpha", lerp(0.3, 5.0, u)), ("beta", lerp(0.3, 5.0, v))],
        Family::Logistic => vec![("mu", lerp(-3.0, 3.0, u)), ("s", lerp(0.2, 3.0, v))],
        Family::ErfHazard | Family::ErfiInterval | Family::ErfiUnit => vec![],
        Family::DampedHazard => vec![("theta", lerp(0.05, 3.0, u))],
        Family::NormalMix => vec![("sigma1", lerp(0.2, 2.0, u)), ("q", lerp(0.1, 0.9, v))],
        Family::Geometric => vec![("p", lerp(0.05, 0.95, u))],
        Family::Zipf => vec![("alpha", lerp(2.2, 8.0, u))],
        Family::Poisson => vec![("theta", lerp(0.1, 20.0, u))],
        Family::NegBinomial => vec![("r", lerp(0.3, 5.0, u)), ("p", lerp(0.1, 0.9, v))],
    }
}

fn build(family: Family, u: f64, v: f64) -> Distribution {
    let spec = FamilySpec::new(family, &params_for(family, u, v)).unwrap();
    make_distribution(&spec).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn registry_laws_are_coherent(i in 0..Family::ALL.len(), u in 0.0..1.0f64, v in 0.0..1.0f64, p in 0.001..0.999f64) {
        let family = Family::ALL[i];
        let d = build(family, u, v);
        prop_assert_eq!(d.is_lattice(), family.is_lattice());
        let x = d.quantile(p);
        prop_assert!(d.support().contains(x), "{} quantile {} outside support", d.label(), x);
        prop_assert!((d.cdf(x) + d.sf(x) - 1.0).abs() < 1e-12);
        prop_assert!(d.pdf(x) >= 0.0);
        if d.is_lattice() {
            prop_assert!(d.cdf(x) >= p - 1e-12 && d.cdf(x - 1.0) < p + 1e-12);
        } else {
            prop_assert!((d.cdf(x) - p).abs() < 1e-8, "{}: F(Q({p})) = {}", d.label(), d.cdf(x));
        }
        let y = x + 0.5 * d.landmarks().scale();
        prop_assert!(d.cdf(y) >= d.cdf(x));
    }

    #[test]
    fn spec_round_trips_through_text(i in 0..Family::ALL.len(), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let family = Family::ALL[i];
        let spec = FamilySpec::new(family, &params_for(family, u, v)).unwrap();
        let text = std::iter::once(family.name().to_string())
            .chain(spec.params.iter().map(|(k, v)| format!("{k}={v}")))
            .collect::<Vec<_>>();
        let text = if text.len() > 1 { format!("{}:{}", text[0], text[1..].join(",")) } else { text[0].clone() };
        let back: FamilySpec = text.parse().unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn affine_maps_scale_dispersion(u in 0.0..1.0f64, a in prop::sample::select(vec![-2.0, 0.5, 3.0]), b in -3.0..3.0f64) {
        let d = build(Family::Gamma, u, 0.0);
        let (r, t) = (report(&d).unwrap(), numeric_report(&affine(&d, a, b).unwrap()).unwrap());
        prop_assert!((t.sd - a.abs() * r.sd).abs() <= 1e-9 * a.abs() * r.sd);
        prop_assert!((t.gmd - a.abs() * r.gmd).abs() <= 1e-9 * a.abs() * r.gmd);
    }
}

const IMPLICATION_LAWS: [&str; 5] =
    ["weibull:alpha=0.5", "gamma:alpha=0.5", "gpd:alpha=0.3", "zipf:alpha=3", "geometric:p=0.4"];

fn directions(d: &Distribution) -> (Direction, Direction) {
    let h = monotonicity_scan(|x| hazard_rate(d, x).ok(), d, SLACK).unwrap().direction;
    let r = monotonicity_scan(|x| dispersion_core::hazard::reverse_hazard_rate(d, x).ok(), d, SLACK)
        .unwrap()
        .direction;
    (h, r)
}

#[test]
fn decreasing_hazard_forces_decreasing_reverse_hazard() {
    for spec in IMPLICATION_LAWS {
        let d = fam(spec);
        let reflected = affine(&d, -1.0, 0.0).unwrap();
        for law in [&d, &reflected] {
            let (h, r) = directions(law);
            let s = law.support();
            // constant counts as decreasing under the non-strict convention
            if h.allows_decreasing() {
                assert!(r.allows_decreasing(), "{}: h decreasing but r {r:?}", law.label());
                assert!(s.lower.is_finite() && s.upper.is_infinite(), "{}: support {s:?}", law.label());
            }
            if r.allows_increasing() {
                assert!(h.allows_increasing(), "{}: r increasing but h {h:?}", law.label());
                assert!(s.upper.is_finite() && s.lower.is_infinite(), "{}: support {s:?}", law.label());
            }
        }
        // the implication must actually fire on the original and on its mirror image
        assert!(directions(&d).0.allows_decreasing(), "{spec}");
        assert!(directions(&reflected).1.allows_increasing(), "{spec} reflected");
    }
}

#[test]
fn logconcave_density_gives_logconcave_cdf_and_sf() {
    let mut fired = 0;
    for spec in AUDIT_POINTS {
        let d = fam(spec);
        if log_concavity_scan(&d, Target::Pdf).unwrap().is_log_concave() {
            fired += 1;
            assert!(log_concavity_scan(&d, Target::Cdf).unwrap().is_log_concave(), "{spec} cdf");
            assert!(log_concavity_scan(&d, Target::Sf).unwrap().is_log_concave(), "{spec} sf");
        }
    }
    assert!(fired >= 10, "only {fired} log-concave densities");
}

#[test]
fn erfi_unit_is_the_converse_counterexample() {
    let d = fam("erfi-unit");
    assert!(log_concavity_scan(&d, Target::Pdf).unwrap().is_log_convex());
    assert!(log_concavity_scan(&d, Target::Cdf).unwrap().is_log_concave());
}

const LATTICE_LAWS: [&str; 7] = [
    "geometric:p=0.2",
    "geometric:p=0.7",
    "poisson:theta=2.5",
    "negbinomial:r=2,p=0.4",
    "negbinomial:r=0.5,p=0.6",
    "zipf:alpha=3",
    "zipf:alpha=6",
];

/// `sum_k term(k)` over the support, stopping once the remaining mass is negligible.
fn support_sum(d: &Distribution, term: impl Fn(f64) -> f64) -> f64 {
    let mut k = d.support().lower;
    let mut total = 0.0;
    while d.sf(k) > 1e-18 {
        total += term(k);
        k += 1.0;
    }
    total + term(k)
}

#[test]
fn discrete_tie_identities() {
    for spec in LATTICE_LAWS {
        let d = fam(spec);
        let lambda = concentration(&d).unwrap().lambda;
        let e_f = support_sum(&d, |k| d.pdf(k) * d.cdf(k));
        assert!((e_f - 0.5 * (1.0 + lambda)).abs() < 1e-10, "{spec}: E[F(X)] = {e_f}, lambda = {lambda}");
        let s_y0 = mean_excess_abs_diff(&d, &[0.0]).unwrap().s_y[0];
        assert!((s_y0 - (1.0 - lambda)).abs() < 1e-10, "{spec}: S_Y(0) = {s_y0}");
    }
}

#[test]
fn mean_excess_at_zero_exceeds_tie_bound() {
    for spec in ["geometric:p=0.2", "geometric:p=0.5", "geometric:p=0.8", "zipf:alpha=3"] {
        let d = fam(spec);
        let lambda = concentration(&d).unwrap().lambda;
        let m0 = mean_excess_abs_diff(&d, &[0.0]).unwrap().m_direct[0];
        let bound = (1.0 + lambda) / (2.0 * lambda);
        assert!(m0 >= bound - 1e-10, "{spec}: m_Y(0) = {m0} below {bound}");
    }
}

#[test]
fn erfi_interval_never_certifies_gmd() {
    let d = fam("erfi-interval");
    for law in [d.clone(), affine(&d, -1.0, 0.0).unwrap()] {
        let v = classify(&law).unwrap();
        assert_ne!(v.verdict, Verdict::GmdDominates, "{}", law.label());
    }
}

#[test]
fn pair_enumeration_matches_summation() {
    for (spec, cut) in [
        ("geometric:p=0.3", 1e-16),
        ("poisson:theta=4", 1e-16),
        ("negbinomial:r=2,p=0.5", 1e-16),
        // k^2 f(k) decays like k^-5, so the cut must sit far below the target accuracy
        ("zipf:alpha=6", 1e-22),
    ] {
        let d = fam(spec);
        let bf = brute_force_lattice(&d, cut).unwrap();
        let n = numeric_report(&d).unwrap();
        let lambda = concentration(&d).unwrap().lambda;
        for (what, a, b) in [("sd", bf.sd, n.sd), ("gmd", bf.gmd, n.gmd), ("lambda", bf.lambda, lambda)] {
            assert!((a - b).abs() < 1e-10, "{spec} {what}: pairs {a} vs summation {b}");
        }
    }
}

#[test]
fn nonnegative_mean_excess_at_zero_is_the_mean() {
    for spec in ["gamma:alpha=2", "weibull:alpha=0.7", "gpd:alpha=0.2", "beta:alpha=2,beta=3", "erf-hazard"] {
        let d = fam(spec);
        let mean = dispersion_core::quad::Quadrature::new(1e-14, 1e-12)
            .integrate(|x| d.sf(x), 0.0, d.support().upper)
            .value;
        let m = mean_excess(&d, 0.0).unwrap();
        assert!((m - mean).abs() < 1e-8, "{spec}: {m} vs {mean}");
    }
}

#[test]
fn oracle_is_reproducible() {
    let d = fam("gamma:alpha=0.5");
    let a = mc_estimate(&d, 20_000, 7).unwrap();
    let b = mc_estimate(&d, 20_000, 7).unwrap();
    let c = mc_estimate(&d, 20_000, 8).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.gmd_hat, c.gmd_hat);
}

#[test]
fn reports_serialize_with_stable_names() {
    let v = classify(&fam("gpd:alpha=0.25")).unwrap();
    let json = serde_json::to_value(&v).unwrap();
    assert_eq!(json["verdict"], "sd-dominates");
    assert_eq!(json["basis"], v.basis.as_str());
    assert_eq!(json["evidence"]["dispersion"]["method"], "closed-form");
    assert!(json["evidence"]["hazard"].get("samples").is_none());
    assert!(json["evidence"]["hazard"]["equivalence_audit_pass"].as_bool().unwrap());
    let diff = json["numeric_diff"].as_f64().unwrap();
    assert!((diff - 0.3618).abs() < 1e-3, "{diff}");
}
