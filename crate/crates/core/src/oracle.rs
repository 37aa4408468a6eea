//! Independent checks: Monte Carlo estimates with batch-means confidence intervals and exact
//! pair enumeration for lattice laws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::lattice::Table;

/// Number of independent generator streams.
pub const BATCHES: usize = 32;
/// Smallest accepted sample size.
pub const MIN_N: usize = 10_000;
/// Largest retained support for pair enumeration.
pub const MAX_SUPPORT: usize = 1_000_000;
/// Upper 0.995 quantile of Student's t with `BATCHES - 1` degrees of freedom.
const T_995_31: f64 = 2.744_041_919_294_126_8;

/// 99% confidence half-widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfWidths {
    pub sd: f64,
    pub gmd: f64,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub sd_hat: f64,
    pub gmd_hat: f64,
    /// Tie frequency, lattice laws only.
    pub lambda_hat: Option<f64>,
    pub ci_halfwidth: HalfWidths,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Batch {
    count: usize,
    abs: f64,
    sq: f64,
    ties: usize,
    excess: f64,
    exceed: usize,
}

fn batch_sizes(n: usize) -> Vec<usize> {
    (0..BATCHES).map(|b| n / BATCHES + usize::from(b < n % BATCHES)).collect()
}

fn stream(seed: u64, b: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(b as u64);
    rng
}

/// Draw `n` pairs split over [`BATCHES`] streams; `t` is the threshold for the mean excess of `Y`.
fn run(d: &Distribution, n: usize, seed: u64, t: f64) -> Result<Vec<Batch>> {
    if n < MIN_N {
        return Err(Error::InvalidArgument(format!("sample size {n} is below {MIN_N}")));
    }
    batch_sizes(n)
        .into_par_iter()
        .enumerate()
        .map(|(b, size)| {
            let mut rng = stream(seed, b);
            let mut acc = Batch { count: size, ..Batch::default() };
            for _ in 0..size {
                let x = d.sample(&mut rng);
                let y = d.sample(&mut rng);
                if !x.is_finite() || !y.is_finite() {
                    return Err(Error::SamplingUnavailable(d.label().to_string()));
                }
                let diff = (x - y).abs();
                acc.abs += diff;
                acc.sq += diff * diff;
                acc.ties += usize::from(x == y);
                if diff > t {
                    acc.excess += diff - t;
                    acc.exceed += 1;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Mean of the batch values and the 99% half-width from their spread.
fn batch_ci(values: &[f64]) -> f64 {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    T_995_31 * (var / k).sqrt()
}

/// Estimate SD, GMD and (lattice) the tie probability from `n` iid pairs.
pub fn mc_estimate(d: &Distribution, n: usize, seed: u64) -> Result<OracleEstimate> {
    let batches = run(d, n, seed, f64::INFINITY)?;
    let total = n as f64;
    let abs: f64 = batches.iter().map(|b| b.abs).sum();
    let sq: f64 = batches.iter().map(|b| b.sq).sum();
    let ties: usize = batches.iter().map(|b| b.ties).sum();
    let per = |f: &dyn Fn(&Batch) -> f64| batches.iter().map(f).collect::<Vec<_>>();
    let lattice = d.is_lattice();
    Ok(OracleEstimate {
        sd_hat: (sq / total / 2.0).sqrt(),
        gmd_hat: abs / total,
        lambda_hat: lattice.then(|| ties as f64 / total),
        ci_halfwidth: HalfWidths {
            sd: batch_ci(&per(&|b| (b.sq / b.count as f64 / 2.0).sqrt())),
            gmd: batch_ci(&per(&|b| b.abs / b.count as f64)),
            lambda: lattice.then(|| batch_ci(&per(&|b| b.ties as f64 / b.count as f64))),
        },
        n,
        seed,
    })
}

/// Monte Carlo `m_Y(t) = E[Y - t | Y > t]` with a 99% half-width (ratio estimator over batches).
pub fn mc_mean_excess(d: &Distribution, t: f64, n: usize, seed: u64) -> Result<(f64, f64)> {
    let batches = run(d, n, seed, t)?;
    let exceed: usize = batches.iter().map(|b| b.exceed).sum();
    if exceed == 0 {
        return Err(Error::DegenerateY(t));
    }
    let est = batches.iter().map(|b| b.excess).sum::<f64>() / exceed as f64;
    let per: Vec<f64> = batches.iter().filter(|b| b.exceed > 0).map(|b| b.excess / b.exceed as f64).collect();
    Ok((est, if per.len() > 1 { batch_ci(&per) } else { f64::INFINITY }))
}

/// Exact values from enumerating all pairs of retained support points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForce {
    pub sd: f64,
    pub gmd: f64,
    pub lambda: f64,
    /// `m_Y(t)` at `t = 0, 1, 2, ...` while `P(Y > t) >= 1e-12`.
    pub m_y: Vec<f64>,
    pub support_len: usize,
}

/// Pair enumeration over the support retained at omitted mass below `mass_cut`.
pub fn brute_force_lattice(d: &Distribution, mass_cut: f64) -> Result<BruteForce> {
    let table = Table::new(d, mass_cut, MAX_SUPPORT)?;
    let f = &table.pmf;
    let n = f.len();
    // pmf of Y = |X - X'|
    let mut py = vec![0.0; n];
    for i in 0..n {
        py[0] += f[i] * f[i];
        for j in 0..i {
            py[i - j] += 2.0 * f[i] * f[j];
        }
    }
    let gmd: f64 = py.iter().enumerate().map(|(y, p)| y as f64 * p).sum();
    let m2: f64 = py.iter().enumerate().map(|(y, p)| (y * y) as f64 * p).sum();
    // suffix sums of P(Y = y) and y P(Y = y) over y > t
    let mut m_y = Vec::new();
    let mut above = py.iter().skip(1).sum::<f64>();
    let mut above_y = gmd;
    for t in 0..n.saturating_sub(1) {
        if above < 1e-12 || t > 4096 {
            break;
        }
        m_y.push((above_y - t as f64 * above) / above);
        above -= py[t + 1];
        above_y -= (t + 1) as f64 * py[t + 1];
    }
    Ok(BruteForce { sd: (m2 / 2.0).sqrt(), gmd, lambda: py[0], m_y, support_len: n })
}
