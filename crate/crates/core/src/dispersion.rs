//! Standard deviation, Gini mean difference, the mean excess curve of `Y = |X - X'|`,
//! tail dispersion under truncation, and the concentration value.

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{truncate, Distribution, Side};
use crate::error::{Error, Result};
use crate::lattice::{Table, MASS_CUT};
use crate::quad::{Integral, Quadrature};

/// Largest lattice table the summation routes accept.
const MAX_TABLE: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Summation,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionReport {
    pub sd: f64,
    pub gmd: f64,
    /// `sd - gmd`
    pub diff: f64,
    pub method: Method,
    pub err_estimate: f64,
}

impl DispersionReport {
    fn new(sd: f64, gmd: f64, method: Method, err_estimate: f64) -> Self {
        Self { sd, gmd, diff: sd - gmd, method, err_estimate }
    }
}

/// Moments and mean difference with error bounds.
#[derive(Debug, Clone, Copy)]
struct Numeric {
    sd: f64,
    sd_err: f64,
    gmd: f64,
    gmd_err: f64,
    method: Method,
}

fn quad() -> Quadrature {
    Quadrature::new(1e-13, 1e-11)
}

fn accept(r: Integral) -> Result<Integral> {
    if r.value.is_finite() && (r.converged || r.abs_err <= 1e-7 * (1.0 + r.value.abs())) {
        Ok(r)
    } else {
        Err(Error::DivergentMoment)
    }
}

fn lattice_sum<F: Fn(f64) -> f64>(t: &Table, term: F) -> Result<f64> {
    t.sum(term).map_err(|e| if e == Error::DivergentTail { Error::DivergentMoment } else { e })
}

fn numeric(d: &Distribution) -> Result<Numeric> {
    if d.is_lattice() {
        let t = Table::new(d, MASS_CUT, MAX_TABLE)?;
        let c = d.landmarks().median;
        let up = lattice_sum(&t, |x| if x > c { (x - c) * d.pdf(x) } else { 0.0 })?;
        let down = lattice_sum(&t, |x| if x < c { (c - x) * d.pdf(x) } else { 0.0 })?;
        let m2 = lattice_sum(&t, |x| (x - c) * (x - c) * d.pdf(x))?;
        let var = (m2 - (up - down).powi(2)).max(0.0);
        let fs = lattice_sum(&t, |x| d.cdf(x) * d.sf(x))?;
        let err = 1e-12 * (1.0 + m2);
        return Ok(Numeric { sd: var.sqrt(), sd_err: err, gmd: 2.0 * fs, gmd_err: err, method: Method::Summation });
    }
    let s = d.support();
    let l = d.landmarks();
    let breaks = [l.q25, l.median, l.q75];
    let scale = l.scale();
    let c = l.median;
    let q = quad();
    let int = |f: &(dyn Fn(f64) -> f64 + Sync), a: f64, b: f64| accept(q.integrate_with_breaks(f, a, b, &breaks, scale));
    // second moment about the median, by parts so that only F and S are needed
    let a = int(&|x| d.sf(x), c, s.upper)?;
    let b = int(&|x| d.cdf(x), s.lower, c)?;
    let i1 = int(&|x| 2.0 * (x - c) * d.sf(x), c, s.upper)?;
    let i2 = int(&|x| 2.0 * (c - x) * d.cdf(x), s.lower, c)?;
    let shift = a.value - b.value;
    let var = (i1.value + i2.value - shift * shift).max(0.0);
    let var_err = i1.abs_err + i2.abs_err + 2.0 * shift.abs() * (a.abs_err + b.abs_err);
    let sd = var.sqrt();
    let g = int(&|x| d.cdf(x) * d.sf(x), s.lower, s.upper)?;
    Ok(Numeric {
        sd,
        sd_err: if sd > 0.0 { var_err / (2.0 * sd) } else { var_err.sqrt() },
        gmd: 2.0 * g.value,
        gmd_err: 2.0 * g.abs_err,
        method: Method::Quadrature,
    })
}

fn check_nondegenerate(r: &DispersionReport) -> Result<()> {
    if !(r.sd > 0.0) || !(r.gmd > 0.0) {
        return Err(Error::DegenerateY(0.0));
    }
    Ok(())
}

/// SD and GMD by quadrature or summation, ignoring any closed forms.
pub fn numeric_report(d: &Distribution) -> Result<DispersionReport> {
    let n = numeric(d)?;
    let r = DispersionReport::new(n.sd, n.gmd, n.method, n.sd_err + n.gmd_err);
    check_nondegenerate(&r)?;
    Ok(r)
}

/// SD and GMD, using closed forms where the law provides them.
pub fn report(d: &Distribution) -> Result<DispersionReport> {
    let closed = d.closed_forms();
    match (closed.sd, closed.gmd) {
        (Some(sd), Some(gmd)) => Ok(DispersionReport::new(sd, gmd, Method::ClosedForm, 0.0)),
        (sd_c, gmd_c) => {
            let n = numeric(d)?;
            let (sd, sd_err) = sd_c.map_or((n.sd, n.sd_err), |v| (v, 0.0));
            let (gmd, gmd_err) = gmd_c.map_or((n.gmd, n.gmd_err), |v| (v, 0.0));
            let r = DispersionReport::new(sd, gmd, n.method, sd_err + gmd_err);
            check_nondegenerate(&r)?;
            Ok(r)
        }
    }
}

/// `SD[X] = sqrt(Var X)`.
pub fn sd(d: &Distribution) -> Result<f64> {
    match d.closed_forms().sd {
        Some(v) => Ok(v),
        None => Ok(numeric(d)?.sd),
    }
}

/// `GMD[X] = E|X - X'|`.
pub fn gmd(d: &Distribution) -> Result<f64> {
    match d.closed_forms().gmd {
        Some(v) => Ok(v),
        None => Ok(numeric(d)?.gmd),
    }
}

/// SD and GMD of the law conditioned on the upper (`Lower` truncation, `X > u`) or lower
/// (`Upper` truncation, `X <= u`) tail.
pub fn tail_dispersion(d: &Distribution, side: Side, u: f64) -> Result<DispersionReport> {
    report(&truncate(d, side, u)?)
}

/// Mean excess curve of `Y = |X - X'|` by a direct route and two change-of-measure routes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanExcessCurve {
    pub ts: Vec<f64>,
    /// `S_Y(t)`
    pub s_y: Vec<f64>,
    pub m_direct: Vec<f64>,
    /// Quotient under the measure weighted by `F dF` with `C / h` integrand.
    pub m_repr: Vec<f64>,
    /// Quotient under the measure weighted by `S dF` with `D / r` integrand.
    pub m_repr_s: Vec<f64>,
    /// `m_Y(0)` for continuous laws, `E[Y] + 1/2` on a lattice.
    pub baseline: f64,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    s_y: f64,
    direct: f64,
    repr: f64,
    repr_s: f64,
}

/// Evaluate `m_Y` on `ts` by every route.
pub fn mean_excess_abs_diff(d: &Distribution, ts: &[f64]) -> Result<MeanExcessCurve> {
    if let Some(&t) = ts.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::InvalidArgument(format!("grid value t = {t} must be nonnegative")));
    }
    let (points, baseline) = if d.is_lattice() {
        let table = Table::new(d, MASS_CUT, MAX_TABLE)?;
        let reach = ts.iter().fold(0.0f64, |m, t| m.max(t.floor())) + 2.0;
        let psi = suffix_sf(d, &table, reach)?;
        let pts = ts.par_iter().map(|&t| lattice_point(d, &table, &psi, t)).collect::<Result<Vec<_>>>()?;
        let fs = lattice_sum(&table, |x| d.cdf(x) * d.sf(x))?;
        (pts, 2.0 * fs + 0.5)
    } else {
        let pts = ts.par_iter().map(|&t| continuous_point(d, t)).collect::<Result<Vec<_>>>()?;
        let base = continuous_point(d, 0.0)?.direct;
        (pts, base)
    };
    Ok(MeanExcessCurve {
        ts: ts.to_vec(),
        s_y: points.iter().map(|p| p.s_y).collect(),
        m_direct: points.iter().map(|p| p.direct).collect(),
        m_repr: points.iter().map(|p| p.repr).collect(),
        m_repr_s: points.iter().map(|p| p.repr_s).collect(),
        baseline,
    })
}

fn continuous_point(d: &Distribution, t: f64) -> Result<Point> {
    let s = d.support();
    let l = d.landmarks();
    let scale = l.scale();
    let breaks = [l.q25, l.median, l.q75];
    let inner = Quadrature::new(1e-15, 1e-11);
    let outer = Quadrature::new(1e-14, 1e-10);
    let int = |q: &Quadrature, f: &dyn Fn(f64) -> f64, a: f64, b: f64, br: &[f64]| {
        accept(q.integrate_with_breaks(f, a, b, br, scale)).map(|r| r.value)
    };
    // S_Y(y) = 2 E[S(X + y)]
    let s_y_at = |y: f64| -> Result<f64> {
        if y == 0.0 {
            return Ok(1.0);
        }
        let v = 2.0 * int(&inner, &|x| d.pdf(x) * d.sf(x + y), s.lower, s.upper, &breaks)?;
        Ok(v.min(1.0))
    };
    let s_y = s_y_at(t)?;
    if !(s_y >= 1e-300) {
        return Err(Error::DegenerateY(t));
    }
    let span = s.upper - s.lower;
    let y_end = if span.is_finite() { span } else { f64::INFINITY };
    if t >= y_end {
        return Err(Error::DegenerateY(t));
    }
    let y_breaks: Vec<f64> = [0.5, 1.0, 2.0, 4.0].iter().map(|k| t + k * scale).collect();
    let err = std::cell::Cell::new(None);
    let tail = int(
        &outer,
        &|y| match s_y_at(y) {
            Ok(v) => v,
            Err(e) => {
                err.set(Some(e));
                0.0
            }
        },
        t,
        y_end,
        &y_breaks,
    )?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    let direct = tail / s_y;

    // change of measure: dQ^F = F dF, integrand C(x, t) / h(x)
    let lo_t = s.lower + t;
    let br_t: Vec<f64> = breaks.iter().map(|b| b + t).chain(breaks).collect();
    let qf_num = int(
        &inner,
        &|x| {
            let (f, fx) = (d.pdf(x), d.cdf(x));
            // below the normal range 1/f overflows while the product is under 1e-300
            if f < f64::MIN_POSITIVE || fx <= 0.0 {
                return 0.0;
            }
            let c = d.cdf(x - t) / fx;
            let h_inv = d.sf(x) / f;
            c * h_inv * fx * f
        },
        lo_t,
        s.upper,
        &br_t,
    )?;
    let qf_den = int(&inner, &|x| d.cdf(x - t) * d.pdf(x), lo_t, s.upper, &br_t)?;
    // change of measure: dQ^S = S dF, integrand D(x, t) / r(x)
    let hi_t = s.upper - t;
    let br_s: Vec<f64> = breaks.iter().map(|b| b - t).chain(breaks).collect();
    let qs_num = int(
        &inner,
        &|x| {
            let (f, sx) = (d.pdf(x), d.sf(x));
            if f < f64::MIN_POSITIVE || sx <= 0.0 {
                return 0.0;
            }
            let dd = d.sf(x + t) / sx;
            let r_inv = d.cdf(x) / f;
            dd * r_inv * sx * f
        },
        s.lower,
        hi_t,
        &br_s,
    )?;
    let qs_den = int(&inner, &|x| d.sf(x + t) * d.pdf(x), s.lower, hi_t, &br_s)?;
    if !(qf_den > 1e-300 && qs_den > 1e-300) {
        return Err(Error::DegenerateY(t));
    }
    Ok(Point { s_y, direct, repr: qf_num / qf_den, repr_s: qs_num / qs_den })
}

fn lattice_point(d: &Distribution, table: &Table, psi: &Suffix, t: f64) -> Result<Point> {
    let k = t.floor();
    // S_Y(y) = 2 sum_x f(x) S(x + y) for integer y >= 0
    let s_y_at = |y: f64| lattice_sum(table, |x| d.pdf(x) * d.sf(x + y)).map(|v| (2.0 * v).min(1.0));
    let s_y = s_y_at(k)?;
    if !(s_y >= 1e-300) {
        return Err(Error::DegenerateY(t));
    }
    // sum_{y > k} S_Y(y) = 2 sum_x f(x) Psi(x + k + 1), Psi(z) = sum_{w >= z} S(w)
    let above = 2.0 * lattice_sum(table, |x| d.pdf(x) * psi.at(x + k + 1.0))?;
    let direct = (above + (k + 1.0 - t) * s_y) / s_y;

    // change of measure: Q^F(w) ∝ F(w - 1) f(w), integrand C(w - 1, t) / h(w)
    let qf_num = lattice_sum(table, |w| {
        let (f, fprev) = (d.pdf(w), d.cdf(w - 1.0));
        if f <= 0.0 || fprev <= 0.0 {
            return 0.0;
        }
        let c = d.cdf(w - 1.0 - k) / fprev;
        let h_inv = d.sf(w - 1.0) / f;
        c * h_inv * fprev * f
    })?;
    let qf_den = lattice_sum(table, |w| d.cdf(w - 1.0 - k) * d.pdf(w))?;
    // change of measure: Q^S(w) ∝ S(w) f(w), integrand D(w, t) / r(w)
    let qs_num = lattice_sum(table, |w| {
        let (f, sx, fx) = (d.pdf(w), d.sf(w), d.cdf(w));
        if f <= 0.0 || sx <= 0.0 {
            return 0.0;
        }
        let dd = d.sf(w + k) / sx;
        let r_inv = fx / f;
        dd * r_inv * sx * f
    })?;
    let qs_den = lattice_sum(table, |w| d.sf(w + k) * d.pdf(w))?;
    if !(qf_den > 1e-300 && qs_den > 1e-300) {
        return Err(Error::DegenerateY(t));
    }
    let frac = k + 1.0 - t;
    let to_real = |sum_from_k: f64, den: f64| (sum_from_k - den + frac * den) / den;
    Ok(Point {
        s_y,
        direct,
        repr: to_real(qf_num, qf_den),
        repr_s: to_real(qs_num, qs_den),
    })
}

/// `Psi(z) = sum_{w >= z} S(w)` from the table start to `reach` points past its end.
struct Suffix {
    lo: f64,
    sums: Vec<f64>,
}

impl Suffix {
    fn at(&self, z: f64) -> f64 {
        if z < self.lo {
            // S = 1 below the retained support, up to the omitted lower mass
            return self.sums[0] + (self.lo - z);
        }
        let i = (z - self.lo) as usize;
        self.sums.get(i).copied().unwrap_or(0.0)
    }
}

fn suffix_sf(d: &Distribution, table: &Table, reach: f64) -> Result<Suffix> {
    let n = table.len() + reach as usize;
    let end = table.lo + (n - 1) as f64;
    let beyond = if table.open_upper {
        lattice_tail(d, end)?
    } else {
        0.0
    };
    let mut sums = vec![0.0; n];
    let mut acc = beyond;
    for i in (0..n).rev() {
        acc += if i < table.len() { table.sf[i] } else { d.sf(table.lo + i as f64) };
        sums[i] = acc;
    }
    Ok(Suffix { lo: table.lo, sums })
}

fn lattice_tail(d: &Distribution, edge: f64) -> Result<f64> {
    crate::lattice::tail(&|x| d.sf(x), edge, 1.0).map_err(|e| if e == Error::DivergentTail { Error::DivergentMoment } else { e })
}

/// `Lambda = P(X = X') = sum f^2` and the odds bound `(1 - Lambda) / (2 Lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcentrationValue {
    pub lambda: f64,
    pub odds_bound: f64,
}

pub fn concentration(d: &Distribution) -> Result<ConcentrationValue> {
    let table = Table::new(d, MASS_CUT, MAX_TABLE)?;
    let lambda = lattice_sum(&table, |x| d.pdf(x).powi(2))?.min(1.0);
    Ok(ConcentrationValue { lambda, odds_bound: (1.0 - lambda) / (2.0 * lambda) })
}
