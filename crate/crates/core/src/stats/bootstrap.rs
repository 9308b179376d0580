//! Bias-corrected and accelerated (BCa) bootstrap intervals for Pearson
//! correlations.
//!
//! Resampling is pairwise. Replica `b` draws from its own ChaCha stream
//! `(seed, b)`, so results do not depend on scheduling or thread count.
//! Several correlations over the same rows can share one resample per
//! replica through [`bca_pearson_multi`].

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub replicas: usize,
    pub level: f64,
    pub seed: u64,
    /// Redraws allowed per replica when the statistic is undefined on a
    /// resample; the replica is dropped after that.
    pub max_redraws: usize,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            replicas: 10_000,
            level: 0.95,
            seed: 0,
            max_redraws: 100,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<(), StatsError> {
        if self.replicas == 0 {
            return Err(StatsError::InvalidInput("replicas must be >= 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(StatsError::InvalidInput(format!("level {} outside (0, 1)", self.level)));
        }
        Ok(())
    }
}

/// A BCa interval with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BcaInterval {
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
    /// Bias-correction term.
    pub z0: f64,
    /// Jackknife acceleration.
    pub acceleration: f64,
    pub replicas_used: usize,
    pub redraws: usize,
    /// Every replica produced the same value; the interval is a point.
    pub degenerate: bool,
}

/// Replica spread below which the bootstrap distribution is a point.
const DEGENERATE_SPREAD: f64 = 1e-12;

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Linear-interpolation quantile (type 7) of ascending `sorted`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Plain percentile interval of the replicas.
pub fn percentile_interval(sorted: &[f64], level: f64) -> (f64, f64) {
    let alpha = (1.0 - level) / 2.0;
    (quantile_sorted(sorted, alpha), quantile_sorted(sorted, 1.0 - alpha))
}

/// BCa endpoints for given bias and acceleration terms.
pub fn bca_endpoints(sorted: &[f64], z0: f64, acceleration: f64, level: f64) -> (f64, f64) {
    let normal = std_normal();
    let alpha = (1.0 - level) / 2.0;
    let adjust = |p: f64| {
        let z = normal.inverse_cdf(p);
        let s = z0 + z;
        let den = 1.0 - acceleration * s;
        if den <= 0.0 {
            // acceleration pushes the endpoint past the replica range
            return if z < 0.0 { 0.0 } else { 1.0 };
        }
        normal.cdf(z0 + s / den)
    };
    (
        quantile_sorted(sorted, adjust(alpha)),
        quantile_sorted(sorted, adjust(1.0 - alpha)),
    )
}

/// Running sums of one centred column over a resample.
#[derive(Clone, Copy, Default)]
struct Sums {
    s: f64,
    ss: f64,
}

fn corr_from_sums(n: f64, x: Sums, y: Sums, sxy: f64) -> Option<f64> {
    let vx = x.ss - x.s * x.s / n;
    let vy = y.ss - y.s * y.s / n;
    let tiny = 1e-12;
    if !(vx > tiny * x.ss.max(f64::MIN_POSITIVE)) || !(vy > tiny * y.ss.max(f64::MIN_POSITIVE)) {
        return None;
    }
    Some(((sxy - x.s * y.s / n) / (vx.sqrt() * vy.sqrt())).clamp(-1.0, 1.0))
}

/// Leave-one-out correlations, O(n) from full-sample sums.
fn jackknife(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let (mut sx, mut sy) = (Sums::default(), Sums::default());
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sx.s += a;
        sx.ss += a * a;
        sy.s += b;
        sy.ss += b * b;
        sxy += a * b;
    }
    x.iter()
        .zip(y)
        .filter_map(|(a, b)| {
            let lx = Sums { s: sx.s - a, ss: sx.ss - a * a };
            let ly = Sums { s: sy.s - b, ss: sy.ss - b * b };
            corr_from_sums(n - 1.0, lx, ly, sxy - a * b)
        })
        .collect()
}

fn acceleration(jack: &[f64]) -> f64 {
    if jack.is_empty() {
        return 0.0;
    }
    let m = jack.iter().sum::<f64>() / jack.len() as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for v in jack {
        let d = m - v;
        num += d * d * d;
        den += d * d;
    }
    if den <= 0.0 {
        0.0
    } else {
        num / (6.0 * den.powf(1.5))
    }
}

fn centred(col: &[f64]) -> Vec<f64> {
    let m = col.iter().sum::<f64>() / col.len() as f64;
    col.iter().map(|v| v - m).collect()
}

fn replica_rng(seed: u64, replica: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica as u64);
    rng
}

/// BCa intervals for the correlations `pairs` over the columns `columns`
/// (all of equal length), sharing one pairwise resample per replica.
pub fn bca_pearson_multi(
    columns: &[&[f64]],
    pairs: &[(usize, usize)],
    config: &BootstrapConfig,
) -> Vec<Result<BcaInterval, StatsError>> {
    if let Err(e) = config.validate() {
        return pairs.iter().map(|_| Err(e.clone())).collect();
    }
    let n = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != n) {
        return pairs
            .iter()
            .map(|&(a, b)| Err(StatsError::LengthMismatch(columns[a].len(), columns[b].len())))
            .collect();
    }
    if n < 3 {
        return pairs.iter().map(|_| Err(StatsError::TooFewSamples(n))).collect();
    }
    let cols: Vec<Vec<f64>> = columns.iter().map(|c| centred(c)).collect();

    let estimates: Vec<Result<f64, StatsError>> = pairs
        .iter()
        .map(|&(a, b)| super::pearson(&cols[a], &cols[b]))
        .collect();
    let live: Vec<usize> = (0..pairs.len()).filter(|&i| estimates[i].is_ok()).collect();

    // replicas[b][j]: statistic of live pair j in replica b, plus redraw count
    let replicas: Vec<(Vec<Option<f64>>, usize)> = (0..config.replicas)
        .into_par_iter()
        .map(|b| {
            let mut rng = replica_rng(config.seed, b);
            let mut out: Vec<Option<f64>> = vec![None; live.len()];
            let mut pending: Vec<usize> = (0..live.len()).collect();
            let mut redraws = 0;
            let mut idx = vec![0usize; n];
            for attempt in 0..=config.max_redraws {
                if pending.is_empty() {
                    break;
                }
                if attempt > 0 {
                    redraws += 1;
                }
                for i in idx.iter_mut() {
                    *i = rng.gen_range(0..n);
                }
                pending.retain(|&j| {
                    let (a, c) = pairs[live[j]];
                    let (mut sa, mut sc, mut sac) = (Sums::default(), Sums::default(), 0.0);
                    for &i in &idx {
                        let (x, y) = (cols[a][i], cols[c][i]);
                        sa.s += x;
                        sa.ss += x * x;
                        sc.s += y;
                        sc.ss += y * y;
                        sac += x * y;
                    }
                    match corr_from_sums(n as f64, sa, sc, sac) {
                        Some(r) => {
                            out[j] = Some(r);
                            false
                        }
                        None => true,
                    }
                });
            }
            (out, redraws)
        })
        .collect();

    let normal = std_normal();
    let mut results: Vec<Result<BcaInterval, StatsError>> = estimates
        .iter()
        .map(|e| match e {
            Ok(_) => Err(StatsError::Undefined),
            Err(err) => Err(err.clone()),
        })
        .collect();
    for (j, &pi) in live.iter().enumerate() {
        let estimate = *estimates[pi].as_ref().expect("live pair");
        let mut reps: Vec<f64> = replicas.iter().filter_map(|(r, _)| r[j]).collect();
        let redraws: usize = replicas.iter().map(|(_, d)| d).sum();
        if reps.is_empty() {
            continue;
        }
        reps.sort_by(f64::total_cmp);
        let b = reps.len();
        if reps[b - 1] - reps[0] <= DEGENERATE_SPREAD {
            results[pi] = Ok(BcaInterval {
                estimate,
                low: estimate,
                high: estimate,
                z0: 0.0,
                acceleration: 0.0,
                replicas_used: b,
                redraws,
                degenerate: true,
            });
            continue;
        }
        let below = reps.partition_point(|&v| v < estimate);
        let frac = (below as f64 / b as f64).clamp(0.5 / b as f64, 1.0 - 0.5 / b as f64);
        let z0 = normal.inverse_cdf(frac);
        let (a, c) = pairs[pi];
        let acc = acceleration(&jackknife(&cols[a], &cols[c]));
        let (low, high) = bca_endpoints(&reps, z0, acc, config.level);
        results[pi] = Ok(BcaInterval {
            estimate,
            low,
            high,
            z0,
            acceleration: acc,
            replicas_used: b,
            redraws,
            degenerate: false,
        });
    }
    results
}

/// BCa interval for the Pearson correlation of `x` and `y`.
pub fn bca_ci(x: &[f64], y: &[f64], config: &BootstrapConfig) -> Result<BcaInterval, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    bca_pearson_multi(&[x, y], &[(0, 1)], config)
        .pop()
        .expect("one pair")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::pearson;
    use rand_distr::{Distribution, StandardNormal};

    fn bivariate(n: usize, rho: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let a: f64 = StandardNormal.sample(&mut rng);
                let b: f64 = StandardNormal.sample(&mut rng);
                (a, rho * a + (1.0 - rho * rho).sqrt() * b)
            })
            .unzip()
    }

    fn cfg(replicas: usize, seed: u64) -> BootstrapConfig {
        BootstrapConfig {
            replicas,
            seed,
            ..BootstrapConfig::default()
        }
    }

    #[test]
    fn zero_bias_and_acceleration_is_percentile() {
        let mut reps: Vec<f64> = (0..997).map(|i| ((i * 7919) % 997) as f64 / 997.0).collect();
        reps.sort_by(f64::total_cmp);
        let (pl, ph) = percentile_interval(&reps, 0.95);
        let (bl, bh) = bca_endpoints(&reps, 0.0, 0.0, 0.95);
        assert!((pl - bl).abs() < 1e-9 && (ph - bh).abs() < 1e-9, "{pl} {bl} {ph} {bh}");
    }

    #[test]
    fn constant_statistic_is_degenerate() {
        // y is an exact affine image of x, so every resample has r = 1
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 2.0).collect();
        let ci = bca_ci(&x, &y, &cfg(500, 1)).unwrap();
        assert!(ci.degenerate);
        assert_eq!((ci.low, ci.high), (1.0, 1.0));
        assert_eq!(ci.replicas_used, 500);
    }

    #[test]
    fn undefined_on_original_sample() {
        assert_eq!(bca_ci(&[1., 1., 1.], &[1., 2., 3.], &cfg(10, 0)), Err(StatsError::ZeroVariance));
        assert_eq!(bca_ci(&[1., 2.], &[1., 2.], &cfg(10, 0)), Err(StatsError::TooFewSamples(2)));
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let (x, y) = bivariate(60, 0.4, 3);
        let a = bca_ci(&x, &y, &cfg(800, 11)).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| bca_ci(&x, &y, &cfg(800, 11)).unwrap());
        assert_eq!(a, b);
        let c = bca_ci(&x, &y, &cfg(800, 12)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn multi_matches_single() {
        let (x, y) = bivariate(40, 0.6, 5);
        let single = bca_ci(&x, &y, &cfg(300, 9)).unwrap();
        let multi = bca_pearson_multi(&[&x, &y], &[(0, 1)], &cfg(300, 9));
        assert_eq!(multi[0].as_ref().unwrap(), &single);
        assert!((single.estimate - pearson(&x, &y).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn endpoints_bounded_and_width_shrinks() {
        let mut widths = Vec::new();
        for n in [20, 80, 320] {
            let (x, y) = bivariate(n, 0.5, 100 + n as u64);
            let ci = bca_ci(&x, &y, &cfg(2000, 7)).unwrap();
            assert!(-1.0 <= ci.low && ci.low <= ci.high && ci.high <= 1.0);
            widths.push(ci.high - ci.low);
        }
        assert!(widths[0] > widths[1] && widths[1] > widths[2], "{widths:?}");
    }

    #[test]
    fn jackknife_matches_direct_leave_one_out() {
        let (x, y) = bivariate(15, 0.3, 8);
        let fast = jackknife(&x, &y);
        for i in 0..x.len() {
            let xs: Vec<f64> = x.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
            let ys: Vec<f64> = y.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
            assert!((fast[i] - pearson(&xs, &ys).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_config() {
        let c = BootstrapConfig { level: 1.0, ..cfg(10, 0) };
        assert!(bca_ci(&[1., 2., 3.], &[1., 3., 2.], &c).is_err());
        let c = BootstrapConfig { replicas: 0, ..cfg(10, 0) };
        assert!(bca_ci(&[1., 2., 3.], &[1., 3., 2.], &c).is_err());
    }
}
