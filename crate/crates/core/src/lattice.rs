//! Summation over integer-lattice laws with tail corrections.

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::special::hurwitz_zeta;

/// Omitted probability mass at each end of a summation table.
pub(crate) const MASS_CUT: f64 = 1e-12;

/// Retained support `lo..=hi` of a lattice law with pmf and sf columns.
#[derive(Debug, Clone)]
pub(crate) struct Table {
    pub lo: f64,
    pub pmf: Vec<f64>,
    pub sf: Vec<f64>,
    pub open_lower: bool,
    pub open_upper: bool,
}

impl Table {
    /// Points whose omitted mass on each side is below `cut / 2`.
    pub fn new(d: &Distribution, cut: f64, max_len: usize) -> Result<Self> {
        if !d.is_lattice() {
            return Err(Error::ContinuousInput);
        }
        let s = d.support();
        let lo = if s.lower.is_finite() { s.lower } else { d.quantile(0.5 * cut) };
        let hi = if s.upper.is_finite() { s.upper } else { d.upper_quantile(0.5 * cut) };
        let len = (hi - lo + 1.0).max(1.0);
        if len > max_len as f64 {
            return Err(Error::SupportTooLarge(len as usize));
        }
        let xs: Vec<f64> = (0..len as usize).map(|i| lo + i as f64).collect();
        Ok(Self {
            lo,
            pmf: xs.iter().map(|&x| d.pdf(x)).collect(),
            sf: xs.iter().map(|&x| d.sf(x)).collect(),
            open_lower: s.lower.is_infinite(),
            open_upper: s.upper.is_infinite(),
        })
    }

    pub fn len(&self) -> usize {
        self.pmf.len()
    }

    pub fn hi(&self) -> f64 {
        self.lo + (self.len() - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.lo + i as f64
    }

    /// `sum_k term(k)` over all integers, with `term` nonnegative and vanishing off the support.
    pub fn sum<F: Fn(f64) -> f64>(&self, term: F) -> Result<f64> {
        let mut total = 0.0;
        let mut comp = 0.0;
        for i in 0..self.len() {
            // Kahan summation keeps long heavy-tailed sums exact to a few ulps
            let y = term(self.x(i)) - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
        }
        if self.open_upper {
            total += tail(&term, self.hi(), 1.0)?;
        }
        if self.open_lower {
            total += tail(&term, self.lo, -1.0)?;
        }
        Ok(total)
    }
}

/// Sum of `term` strictly beyond `edge` in direction `dir`.
pub(crate) fn tail<F: Fn(f64) -> f64>(term: &F, edge: f64, dir: f64) -> Result<f64> {
    let t0 = term(edge);
    let t1 = term(edge - dir);
    if t0 == 0.0 {
        return Ok(0.0);
    }
    let rho = t0 / t1;
    if t1 > 0.0 && rho < 0.9 {
        return Ok(t0 * rho / (1.0 - rho));
    }
    // slow decay: sum further out, then close with a fitted power law
    let n = (edge.abs().max(16.0) * 64.0).min(4e6) as usize;
    let mut s = 0.0;
    let mut comp = 0.0;
    for j in 1..=n {
        let y = term(edge + dir * j as f64) - comp;
        let t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    let far = edge + dir * n as f64;
    let half = edge + dir * (n / 2) as f64;
    let (tf, th) = (term(far), term(half));
    if tf == 0.0 || th == 0.0 {
        return Ok(s);
    }
    let beta = (th / tf).ln() / (far.abs() / half.abs()).ln();
    if !(beta > 1.0 + 1e-6) {
        return Err(Error::DivergentTail);
    }
    Ok(s + tf * far.abs().powf(beta) * hurwitz_zeta(beta, far.abs() + 1.0))
}
