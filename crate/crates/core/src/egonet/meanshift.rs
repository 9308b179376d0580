//! One-dimensional Gaussian mean shift used to estimate how many circles an
//! ego network naturally has.

/// Kernel contributions beyond this many bandwidths are ignored (< 2e-8).
const KERNEL_CUTOFF: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanShiftConfig {
    /// Fixed bandwidth; Silverman's rule of thumb when `None`.
    pub bandwidth: Option<f64>,
    /// Convergence threshold on a step, as a fraction of the bandwidth.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Converged points closer than this fraction of the bandwidth share a mode.
    pub merge_fraction: f64,
}

impl Default for MeanShiftConfig {
    fn default() -> Self {
        Self {
            bandwidth: None,
            tolerance: 1e-7,
            max_iterations: 500,
            merge_fraction: 0.5,
        }
    }
}

/// Silverman's rule: 0.9 * min(sd, IQR / 1.34) * n^(-1/5), falling back to
/// the sample SD when the IQR is zero. Zero for constant data.
pub fn silverman_bandwidth(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile7(&sorted, 0.75) - quantile7(&sorted, 0.25);
    let mut spread = sd.min(iqr / 1.34);
    if !(spread > 0.0) {
        spread = sd;
    }
    0.9 * spread * (n as f64).powf(-0.2)
}

fn quantile7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Mode locations found by mean shift, ascending.
pub fn mean_shift_modes(values: &[f64], config: &MeanShiftConfig) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    // (value, multiplicity)
    let mut groups: Vec<(f64, f64)> = Vec::new();
    for v in sorted {
        match groups.last_mut() {
            Some((last, w)) if *last == v => *w += 1.0,
            _ => groups.push((v, 1.0)),
        }
    }
    let h = config.bandwidth.unwrap_or_else(|| silverman_bandwidth(values));
    if groups.len() == 1 || !(h > 0.0) {
        return vec![groups[0].0];
    }

    let step_tol = config.tolerance * h;
    let reach = KERNEL_CUTOFF * h;
    let inv_two_h2 = 1.0 / (2.0 * h * h);
    let mut converged: Vec<f64> = groups
        .iter()
        .map(|&(start, _)| {
            let mut x = start;
            for _ in 0..config.max_iterations {
                let lo = groups.partition_point(|g| g.0 < x - reach);
                let hi = groups.partition_point(|g| g.0 <= x + reach);
                let (mut num, mut den) = (0.0, 0.0);
                for &(v, w) in &groups[lo..hi] {
                    let k = w * (-(v - x) * (v - x) * inv_two_h2).exp();
                    num += k * v;
                    den += k;
                }
                let next = num / den;
                let step = (next - x).abs();
                x = next;
                if step < step_tol {
                    break;
                }
            }
            x
        })
        .collect();

    converged.sort_by(f64::total_cmp);
    let merge = config.merge_fraction * h;
    let mut modes: Vec<(f64, usize)> = Vec::new();
    let mut cluster_end = f64::NEG_INFINITY;
    for x in converged {
        if x - cluster_end <= merge {
            let (sum, count) = modes.last_mut().expect("cluster open");
            // running mean of the merged points, stored as a sum
            *sum += x;
            *count += 1;
        } else {
            modes.push((x, 1));
        }
        cluster_end = x;
    }
    modes.into_iter().map(|(s, c)| s / c as f64).collect()
}

/// Number of modes of the tie-strength distribution (at least 1).
pub fn mean_shift_circles(strengths: &[f64]) -> usize {
    mean_shift_modes(strengths, &MeanShiftConfig::default()).len().max(1)
}
