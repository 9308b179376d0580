use super::StatsError;

/// Outcome of a top/rest percentile split, as indices into the input.
#[derive(Debug, Clone, PartialEq)]
pub struct PercentileSplit {
    pub threshold: f64,
    pub top: Vec<usize>,
    pub rest: Vec<usize>,
    /// Every value reached the threshold, so nothing is left in `rest`.
    pub degenerate: bool,
}

/// Nearest-rank threshold: the value at 0-based rank floor(p * n) of the
/// sorted input, so roughly a (1 - p) share lands in the top group.
pub fn percentile_threshold(values: &[f64], p: f64) -> Result<f64, StatsError> {
    if values.is_empty() {
        return Err(StatsError::TooFewSamples(0));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(StatsError::InvalidInput(format!("percentile {p} outside (0, 1)")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((p * sorted.len() as f64) + 1e-9).floor() as usize;
    Ok(sorted[rank.min(sorted.len() - 1)])
}

/// Splits into the items at or above the p-th percentile (ties included)
/// and the rest.
pub fn percentile_split(values: &[f64], p: f64) -> Result<PercentileSplit, StatsError> {
    let threshold = percentile_threshold(values, p)?;
    let (top, rest): (Vec<usize>, Vec<usize>) = (0..values.len()).partition(|&i| values[i] >= threshold);
    Ok(PercentileSplit {
        threshold,
        degenerate: rest.is_empty(),
        top,
        rest,
    })
}
