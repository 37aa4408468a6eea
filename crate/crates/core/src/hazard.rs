//! Hazard and reverse hazard rates, residual functions, mean excess, and
//! grid diagnostics for monotonicity and log-concavity.

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{Distribution, Kind};
use crate::error::{Error, Result};
use crate::quad::Quadrature;

/// Default number of quantile-spaced scan points for continuous laws.
pub const DEFAULT_GRID: usize = 2048;
/// Probability clipped from each end of the continuous scan grid.
pub const QUANTILE_CLIP: f64 = 1e-6;
/// Minimal pmf for a lattice point to enter the scan grid.
pub const LATTICE_MASS: f64 = 1e-12;
/// Relative slack used by the scans.
pub const SLACK: f64 = 1e-9;

/// Grid size, overridable through `DISPERSION_GRID`.
pub fn grid_size() -> usize {
    std::env::var("DISPERSION_GRID")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 16)
        .unwrap_or(DEFAULT_GRID)
}

fn check_support(d: &Distribution, x: f64) -> Result<()> {
    if d.support().contains(x) {
        Ok(())
    } else {
        Err(Error::OutsideSupport(x))
    }
}

/// Left-limit survival `P(X >= x)` for lattice laws, `S(x)` otherwise.
fn hazard_denominator(d: &Distribution, x: f64) -> f64 {
    if d.is_lattice() { d.sf(x - 1.0) } else { d.sf(x) }
}

pub(crate) fn hazard_value(d: &Distribution, x: f64) -> Option<f64> {
    let s = hazard_denominator(d, x);
    (s > 1e-300).then(|| d.pdf(x) / s)
}

pub(crate) fn reverse_hazard_value(d: &Distribution, x: f64) -> Option<f64> {
    let f = d.cdf(x);
    (f > 1e-300).then(|| d.pdf(x) / f)
}

/// `h(x) = f(x) / S(x)`; on a lattice `f(x) / S(x - 1)`.
pub fn hazard_rate(d: &Distribution, x: f64) -> Result<f64> {
    check_support(d, x)?;
    hazard_value(d, x).ok_or(Error::TailExhausted(x))
}

/// `r(x) = f(x) / F(x)`.
pub fn reverse_hazard_rate(d: &Distribution, x: f64) -> Result<f64> {
    check_support(d, x)?;
    reverse_hazard_value(d, x).ok_or(Error::HeadExhausted(x))
}

/// `(D, C) = (S(x + t) / S(x), F(x - t) / F(x))`.
pub fn residual_functions(d: &Distribution, x: f64, t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("shift t = {t} must be nonnegative")));
    }
    check_support(d, x)?;
    if t == 0.0 {
        return Ok((1.0, 1.0));
    }
    let (s, f) = (d.sf(x), d.cdf(x));
    if !(s > 0.0) {
        return Err(Error::TailExhausted(x));
    }
    if !(f > 0.0) {
        return Err(Error::HeadExhausted(x));
    }
    Ok(((d.sf(x + t) / s).min(1.0), (d.cdf(x - t) / f).min(1.0)))
}

/// Mean excess `E[X - t | X > t]`.
pub fn mean_excess(d: &Distribution, t: f64) -> Result<f64> {
    let st = d.sf(t);
    if !(st > 1e-300) {
        return Err(Error::TailExhausted(t));
    }
    let sp = d.support();
    if sp.kind == Kind::Lattice {
        let k = t.floor() + 1.0;
        let table = crate::lattice::Table::new(d, crate::lattice::MASS_CUT, 20_000_000)?;
        let above = table.sum(|y| if y >= k { d.sf(y) } else { 0.0 });
        let above = match above {
            Err(Error::DivergentTail) => return Err(Error::DivergentTail),
            r => r?,
        };
        return Ok((above + (k - t) * st) / st);
    }
    let l = d.landmarks();
    let r = Quadrature::new(1e-300, 1e-11).integrate_with_breaks(
        |x| d.sf(x),
        t,
        sp.upper,
        &[sp.lower, l.q25, l.median, l.q75],
        l.scale(),
    );
    if !r.converged || !r.value.is_finite() {
        return Err(Error::DivergentTail);
    }
    Ok(r.value / st)
}

/// Monotonicity classification (non-strict).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
    NonMonotone,
}

impl Direction {
    pub fn allows_increasing(self) -> bool {
        matches!(self, Direction::Increasing | Direction::Constant)
    }
    pub fn allows_decreasing(self) -> bool {
        matches!(self, Direction::Decreasing | Direction::Constant)
    }
    fn from_flags(inc: bool, dec: bool) -> Self {
        match (inc, dec) {
            (true, true) => Direction::Constant,
            (true, false) => Direction::Increasing,
            (false, true) => Direction::Decreasing,
            (false, false) => Direction::NonMonotone,
        }
    }
    fn flipped(self) -> Self {
        match self {
            Direction::Increasing => Direction::Decreasing,
            Direction::Decreasing => Direction::Increasing,
            d => d,
        }
    }
    /// Combine verdicts of several scans of the same trend.
    fn join(self, other: Self) -> Self {
        Self::from_flags(
            self.allows_increasing() && other.allows_increasing(),
            self.allows_decreasing() && other.allows_decreasing(),
        )
    }
}

/// A pair of grid points where the closest monotone trend is violated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneVerdict {
    pub direction: Direction,
    pub witness: Option<Witness>,
    pub grid: String,
    pub slack: f64,
}

/// Points on which scans run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanGrid {
    pub points: Vec<f64>,
    pub description: String,
}

/// Quantile-spaced grid on `[q(1e-6), q(1 - 1e-6)]` (continuous) or every lattice point with mass `>= 1e-12`.
pub fn scan_grid(d: &Distribution) -> Result<ScanGrid> {
    let grid = if d.is_lattice() { lattice_grid(d) } else { continuous_grid(d, grid_size()) };
    if grid.points.len() < 2 {
        return Err(Error::GridEmpty);
    }
    Ok(grid)
}

fn continuous_grid(d: &Distribution, n: usize) -> ScanGrid {
    let span = 1.0 - 2.0 * QUANTILE_CLIP;
    let mut points: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let lower = QUANTILE_CLIP + span * i as f64 / (n - 1) as f64;
            let upper = QUANTILE_CLIP + span * (n - 1 - i) as f64 / (n - 1) as f64;
            if lower <= 0.5 { d.quantile(lower) } else { d.upper_quantile(upper) }
        })
        .collect();
    points.retain(|x| x.is_finite());
    points.dedup_by(|b, a| *b <= *a);
    ScanGrid { points, description: format!("quantile[{QUANTILE_CLIP:e}, 1-{QUANTILE_CLIP:e}] x {n}") }
}

fn lattice_grid(d: &Distribution) -> ScanGrid {
    let s = d.support();
    let lo = if s.lower.is_finite() { s.lower } else { d.quantile(0.1 * LATTICE_MASS) };
    let hi = if s.upper.is_finite() { s.upper } else { d.upper_quantile(0.1 * LATTICE_MASS) };
    let hi = hi.min(lo + 2e6);
    let mut points = Vec::new();
    let mut x = lo;
    while x <= hi {
        if d.pdf(x) >= LATTICE_MASS {
            points.push(x);
        }
        x += 1.0;
    }
    ScanGrid { points, description: format!("lattice pmf >= {LATTICE_MASS:e}") }
}

fn eval_on<F: Fn(f64) -> Option<f64> + Sync>(points: &[f64], f: &F) -> (Vec<f64>, Vec<f64>) {
    let vals: Vec<Option<f64>> = points.par_iter().map(|&x| f(x).filter(|v| v.is_finite())).collect();
    points.iter().zip(vals).filter_map(|(&x, v)| v.map(|v| (x, v))).unzip()
}

/// Classify a sequence of values in grid order.
pub fn classify_sequence(xs: &[f64], vs: &[f64], slack: f64, grid: &str) -> Result<MonotoneVerdict> {
    if vs.len() < 2 {
        return Err(Error::GridEmpty);
    }
    let mut worst_drop: Option<(f64, usize)> = None;
    let mut worst_rise: Option<(f64, usize)> = None;
    for i in 0..vs.len() - 1 {
        let diff = vs[i + 1] - vs[i];
        let scale = vs[i].abs().max(vs[i + 1].abs());
        let tol = slack * scale;
        let rel = if scale > 0.0 { diff.abs() / scale } else { 0.0 };
        if diff < -tol && worst_drop.is_none_or(|(r, _)| rel > r) {
            worst_drop = Some((rel, i));
        }
        if diff > tol && worst_rise.is_none_or(|(r, _)| rel > r) {
            worst_rise = Some((rel, i));
        }
    }
    let direction = Direction::from_flags(worst_drop.is_none(), worst_rise.is_none());
    let witness = (direction == Direction::NonMonotone).then(|| {
        let (d, r) = (worst_drop.unwrap(), worst_rise.unwrap());
        let i = if d.0 <= r.0 { d.1 } else { r.1 };
        Witness { x1: xs[i], x2: xs[i + 1], v1: vs[i], v2: vs[i + 1] }
    });
    Ok(MonotoneVerdict { direction, witness, grid: grid.to_string(), slack })
}

/// Monotonicity of `f` over the scan grid of `d`; points where `f` is undefined are skipped.
pub fn monotonicity_scan<F: Fn(f64) -> Option<f64> + Sync>(f: F, d: &Distribution, slack: f64) -> Result<MonotoneVerdict> {
    let grid = scan_grid(d)?;
    let (xs, vs) = eval_on(&grid.points, &f);
    classify_sequence(&xs, &vs, slack + 4.0 * d.noise(), &grid.description)
}

/// Grid points where successive differences change sign, as midpoints of the turning intervals.
pub fn sign_changes(xs: &[f64], vs: &[f64], slack: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut last: Option<(f64, usize)> = None;
    for i in 0..vs.len().saturating_sub(1) {
        let diff = vs[i + 1] - vs[i];
        if diff.abs() <= slack * vs[i].abs().max(vs[i + 1].abs()) {
            continue;
        }
        let s = diff.signum();
        if let Some((prev, j)) = last {
            if s != prev {
                out.push(0.5 * (xs[j + 1] + xs[i]));
            }
        }
        last = Some((s, i));
    }
    out
}

/// Function whose log-shape is scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Pdf,
    Cdf,
    Sf,
}

/// Log-shape classification.
///
/// `LogLinear` means both log-concave and log-convex within slack (e.g. exponential survival).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogShape {
    LogConcave,
    LogConvex,
    LogLinear,
    Neither,
}

impl LogShape {
    pub fn is_log_concave(self) -> bool {
        matches!(self, LogShape::LogConcave | LogShape::LogLinear)
    }
    pub fn is_log_convex(self) -> bool {
        matches!(self, LogShape::LogConvex | LogShape::LogLinear)
    }
    fn from_flags(concave: bool, convex: bool) -> Self {
        match (concave, convex) {
            (true, true) => LogShape::LogLinear,
            (true, false) => LogShape::LogConcave,
            (false, true) => LogShape::LogConvex,
            (false, false) => LogShape::Neither,
        }
    }
}

fn log_target(d: &Distribution, target: Target, x: f64) -> f64 {
    match target {
        Target::Pdf => d.log_pdf(x),
        Target::Cdf => d.cdf(x).ln(),
        Target::Sf => d.sf(x).ln(),
    }
}

/// Log-concavity of the pdf, cdf or sf over the scan grid.
pub fn log_concavity_scan(d: &Distribution, target: Target) -> Result<LogShape> {
    let grid = scan_grid(d)?;
    log_shape_on(d, target, &grid.points)
}

pub(crate) fn log_shape_on(d: &Distribution, target: Target, points: &[f64]) -> Result<LogShape> {
    if d.is_lattice() {
        return lattice_log_shape(d, target, points);
    }
    let noise = 4.0 * d.noise();
    let g: Vec<f64> = points.par_iter().map(|&x| log_target(d, target, x)).collect();
    let idx: Vec<usize> = (0..points.len()).filter(|&i| g[i].is_finite()).collect();
    if idx.len() < 3 {
        return Err(Error::GridEmpty);
    }
    let flags: Vec<(bool, bool)> = idx
        .par_windows(3)
        .map(|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            let (x0, x1, x2) = (points[a], points[b], points[c]);
            let (h1, h2) = (x1 - x0, x2 - x1);
            let chord = (h2 * g[a] + h1 * g[c]) / (h1 + h2);
            let gap = g[b] - chord;
            let tol = SLACK * g[b].abs() + noise;
            if gap.abs() < 10.0 * tol {
                return refine(d, target, x1, h1.max(h2), noise);
            }
            (gap >= -tol, gap <= tol)
        })
        .collect();
    Ok(LogShape::from_flags(flags.iter().all(|f| f.0), flags.iter().all(|f| f.1)))
}

/// Re-test a point lost in the noise floor on widening stencils. A plain second difference
/// equals `g''` somewhere inside its stencil, so its sign stays meaningful at any width.
fn refine(d: &Distribution, target: Target, x: f64, h: f64, noise: f64) -> (bool, bool) {
    let s = d.support();
    let g0 = log_target(d, target, x);
    let floor = SLACK * g0.abs() + noise;
    for k in [2.0, 4.0, 8.0, 16.0] {
        let w = k * h;
        if x - w <= s.lower || x + w >= s.upper {
            break;
        }
        let d2 = log_target(d, target, x + w) - 2.0 * g0 + log_target(d, target, x - w);
        if !d2.is_finite() {
            break;
        }
        if d2.abs() > 10.0 * floor {
            return (d2 < 0.0, d2 > 0.0);
        }
    }
    (true, true)
}

fn lattice_log_shape(d: &Distribution, target: Target, points: &[f64]) -> Result<LogShape> {
    let noise = 4.0 * d.noise();
    let g = |x: f64| match target {
        Target::Pdf => d.pdf(x).ln(),
        Target::Cdf => d.cdf(x).ln(),
        Target::Sf => d.sf(x).ln(),
    };
    let mut concave = true;
    let mut convex = true;
    let mut checked = 0;
    for &x in points {
        let gx = g(x);
        if !gx.is_finite() {
            continue;
        }
        let (gl, gr) = (g(x - 1.0), g(x + 1.0));
        if gl.is_nan() || gr.is_nan() || gr == f64::NEG_INFINITY && target != Target::Pdf {
            continue;
        }
        checked += 1;
        let gap = if gl == f64::NEG_INFINITY || gr == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            gx - 0.5 * (gl + gr)
        };
        let tol = SLACK * gx.abs() + noise;
        concave &= gap >= -tol;
        convex &= gap <= tol;
    }
    if checked == 0 {
        return Err(Error::GridEmpty);
    }
    Ok(LogShape::from_flags(concave, convex))
}

/// Log-shapes of pdf, cdf and sf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogConcavity {
    pub pdf: LogShape,
    pub cdf: LogShape,
    pub sf: LogShape,
}

/// Hazard and reverse hazard at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HazardSample {
    pub x: f64,
    pub h: Option<f64>,
    pub r: Option<f64>,
}

/// Result of [`equivalence_audit`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HazardReport {
    pub h_verdict: MonotoneVerdict,
    pub r_verdict: MonotoneVerdict,
    pub logconcavity: LogConcavity,
    /// Monotonicity of `x -> D(x, t)` over all residual shifts.
    pub d_verdict: Direction,
    /// Monotonicity of `x -> C(x, t)` over all residual shifts.
    pub c_verdict: Direction,
    pub residual_shifts: Vec<f64>,
    pub equivalence_audit_pass: bool,
    pub grid: String,
    /// Probability clipped at each end of a continuous grid.
    pub quantile_clip: Option<f64>,
    #[serde(skip)]
    pub samples: Vec<HazardSample>,
}

/// `(allows increasing, allows decreasing)` of the hazard implied by each characterization.
fn trend(d: Direction) -> (bool, bool) {
    (d.allows_increasing(), d.allows_decreasing())
}

fn shape_trend(s: LogShape) -> (bool, bool) {
    (s.is_log_concave(), s.is_log_convex())
}

/// Hazard, reverse hazard, log-shapes and residual-function scans, with a consistency check
/// of the three equivalent descriptions of each tail.
pub fn equivalence_audit(d: &Distribution) -> Result<HazardReport> {
    let grid = scan_grid(d)?;
    let pts = &grid.points;
    let slack = SLACK + 4.0 * d.noise();
    let samples: Vec<HazardSample> = pts
        .par_iter()
        .map(|&x| HazardSample {
            x,
            h: hazard_value(d, x).filter(|v| v.is_finite()),
            r: reverse_hazard_value(d, x).filter(|v| v.is_finite()),
        })
        .collect();
    let split = |f: fn(&HazardSample) -> Option<f64>| -> (Vec<f64>, Vec<f64>) {
        samples.iter().filter_map(|s| f(s).map(|v| (s.x, v))).unzip()
    };
    let (hx, hv) = split(|s| s.h);
    let (rx, rv) = split(|s| s.r);
    let h_verdict = classify_sequence(&hx, &hv, slack, &grid.description)?;
    let r_verdict = classify_sequence(&rx, &rv, slack, &grid.description)?;

    let logconcavity = LogConcavity {
        pdf: log_shape_on(d, Target::Pdf, pts)?,
        cdf: log_shape_on(d, Target::Cdf, pts)?,
        sf: log_shape_on(d, Target::Sf, pts)?,
    };

    let iqr = d.landmarks().scale();
    let shifts: Vec<f64> = [0.1, 0.5, 1.0]
        .iter()
        .map(|c| if d.is_lattice() { (c * iqr).round().max(1.0) } else { c * iqr })
        .collect();
    let mut d_verdict = Direction::Constant;
    let mut c_verdict = Direction::Constant;
    let mut d_points = pts.clone();
    if d.is_lattice() {
        d_points.insert(0, pts[0] - 1.0);
    }
    for &t in &shifts {
        let (xs, vs) = eval_on(&d_points, &|x| {
            let s = d.sf(x);
            (s > 1e-300).then(|| d.sf(x + t) / s)
        });
        d_verdict = d_verdict.join(classify_sequence(&xs, &vs, slack, &grid.description)?.direction);
        let (xs, vs) = eval_on(pts, &|x| {
            let f = d.cdf(x);
            (f > 1e-300).then(|| d.cdf(x - t) / f)
        });
        c_verdict = c_verdict.join(classify_sequence(&xs, &vs, slack, &grid.description)?.direction);
    }

    let hazard_side = trend(h_verdict.direction) == shape_trend(logconcavity.sf)
        && trend(h_verdict.direction) == trend(d_verdict.flipped());
    // r decreasing <=> F log-concave <=> C increasing
    let r_flags = trend(r_verdict.direction.flipped());
    let reverse_side = r_flags == shape_trend(logconcavity.cdf) && r_flags == trend(c_verdict);
    Ok(HazardReport {
        h_verdict,
        r_verdict,
        logconcavity,
        d_verdict,
        c_verdict,
        residual_shifts: shifts,
        equivalence_audit_pass: hazard_side && reverse_side,
        grid: grid.description,
        quantile_clip: (!d.is_lattice()).then_some(QUANTILE_CLIP),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::make_distribution;
    use crate::special::erfi;

    fn fam(s: &str) -> Distribution {
        make_distribution(&s.parse().unwrap()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn hazard_examples() {
        close(hazard_rate(&fam("weibull:alpha=0.5"), 4.0).unwrap(), 0.25, 1e-12);
        close(hazard_rate(&fam("geometric:p=0.3"), 7.0).unwrap(), 0.3, 1e-12);
        close(hazard_rate(&fam("erf-hazard"), 0.0).unwrap(), 2.0, 1e-12);
        assert_eq!(hazard_rate(&fam("weibull:alpha=1"), -1.0), Err(Error::OutsideSupport(-1.0)));
    }

    #[test]
    fn reverse_hazard_examples() {
        let x = 0.5;
        let want = 2.0 / std::f64::consts::PI.sqrt() * 2.25f64.exp() / erfi(1.5);
        close(reverse_hazard_rate(&fam("erfi-interval"), x).unwrap(), want, 1e-10 * want);
        close(reverse_hazard_rate(&fam("beta:alpha=1"), 0.5).unwrap(), 2.0, 1e-12);
        let r = reverse_hazard_rate(&fam("weibull:alpha=1"), 40.0).unwrap();
        close(r, (-40f64).exp(), 1e-25);
    }

    #[test]
    fn residual_examples() {
        let (dd, c) = residual_functions(&fam("weibull:alpha=1"), 1.0, 2.0).unwrap();
        close(dd, (-2f64).exp(), 1e-14);
        assert_eq!(c, 0.0);
        assert_eq!(residual_functions(&fam("normal"), 0.3, 0.0).unwrap(), (1.0, 1.0));
        let (dd, _) = residual_functions(&fam("gpd:alpha=0.25"), 1.0, 1.0).unwrap();
        close(dd, (1.5f64 / 1.25).powi(-4), 1e-13);
    }

    #[test]
    fn mean_excess_examples() {
        let e = fam("weibull:alpha=1");
        for t in [0.0, 0.5, 3.0, 10.0] {
            close(mean_excess(&e, t).unwrap(), 1.0, 1e-9);
        }
        close(mean_excess(&fam("gpd:alpha=0.25"), 0.0).unwrap(), 4.0 / 3.0, 1e-9);
        close(mean_excess(&fam("geometric:p=0.5"), 0.0).unwrap(), 2.0, 1e-12);
        // real t between lattice points interpolates the integral of the step survival function
        let g = fam("geometric:p=0.5");
        let direct = (0.5 * 0.5 + 0.5) / 0.5;
        close(mean_excess(&g, 0.5).unwrap(), direct, 1e-12);
    }

    #[test]
    fn mean_excess_at_zero_is_the_mean() {
        for s in ["gamma:alpha=2.5", "weibull:alpha=0.8", "gpd:alpha=0.2", "beta:alpha=3"] {
            let d = fam(s);
            close(mean_excess(&d, 0.0).unwrap(), d.closed_forms().mean.unwrap(), 1e-8);
        }
    }

    #[test]
    fn scan_examples() {
        let g = fam("geometric:p=0.4");
        let v = monotonicity_scan(|x| hazard_value(&g, x), &g, SLACK).unwrap();
        assert_eq!(v.direction, Direction::Constant);
        assert!(v.witness.is_none());

        let e = fam("erfi-interval");
        let h = monotonicity_scan(|x| hazard_value(&e, x), &e, SLACK).unwrap();
        assert_eq!(h.direction, Direction::Increasing);
        let r = monotonicity_scan(|x| reverse_hazard_value(&e, x), &e, SLACK).unwrap();
        assert_eq!(r.direction, Direction::NonMonotone);
        assert!(r.witness.is_some());

        let grid = scan_grid(&e).unwrap();
        let (xs, vs) = eval_on(&grid.points, &|x| reverse_hazard_value(&e, x));
        let roots = sign_changes(&xs, &vs, SLACK);
        assert_eq!(roots.len(), 1, "{roots:?}");
        close(roots[0], -0.076, 0.005);
    }

    #[test]
    fn log_shape_examples() {
        assert_eq!(log_concavity_scan(&fam("poisson:theta=2"), Target::Pdf).unwrap(), LogShape::LogConcave);
        assert_eq!(log_concavity_scan(&fam("erfi-unit"), Target::Pdf).unwrap(), LogShape::LogConvex);
        let eh = fam("erf-hazard");
        assert_eq!(log_concavity_scan(&eh, Target::Sf).unwrap(), LogShape::LogConvex);
        assert_eq!(log_concavity_scan(&eh, Target::Pdf).unwrap(), LogShape::Neither);
        assert_eq!(log_concavity_scan(&fam("gamma:alpha=1"), Target::Sf).unwrap(), LogShape::LogLinear);
    }

    #[test]
    fn audit_examples() {
        let w = equivalence_audit(&fam("weibull:alpha=0.7")).unwrap();
        assert_eq!(w.h_verdict.direction, Direction::Decreasing);
        assert_eq!(w.logconcavity.sf, LogShape::LogConvex);
        assert_eq!(w.d_verdict, Direction::Increasing);
        assert!(w.equivalence_audit_pass);

        let n = equivalence_audit(&fam("normal")).unwrap();
        assert_eq!(n.h_verdict.direction, Direction::Increasing);
        assert_eq!(n.r_verdict.direction, Direction::Decreasing);
        assert!(n.logconcavity.cdf.is_log_concave() && n.logconcavity.sf.is_log_concave());
        assert!(n.equivalence_audit_pass);

        let x = equivalence_audit(&fam("gamma:alpha=1")).unwrap();
        assert_eq!(x.h_verdict.direction, Direction::Constant);
        assert!(x.equivalence_audit_pass);
        assert_eq!(x.quantile_clip, Some(QUANTILE_CLIP));
    }
}
