use super::StatsError;

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
pub fn sample_sd(v: &[f64]) -> Option<f64> {
    if v.len() < 2 {
        return None;
    }
    let m = mean(v);
    let ss: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
    Some((ss / (v.len() - 1) as f64).sqrt())
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewSamples(x.len()));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn check_r(r: f64) -> Result<(), StatsError> {
    if (-1.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(StatsError::InvalidInput(format!("correlation {r} outside [-1, 1]")))
    }
}

fn check_u(u: f64) -> Result<(), StatsError> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(StatsError::InvalidInput(format!("SD ratio {u} must be positive")))
    }
}

/// Thorndike Case 2: direct range restriction on one of the correlated
/// variables. `u` is the unrestricted over restricted SD of that variable.
pub fn thorndike_case2(r: f64, u: f64) -> Result<f64, StatsError> {
    check_r(r)?;
    check_u(u)?;
    let corrected = r * u / (1.0 - r * r + r * r * u * u).sqrt();
    Ok(corrected.clamp(-1.0, 1.0))
}

/// Thorndike Case 3: restriction on a third variable Z. `u` is the
/// unrestricted over restricted SD of Z; all correlations are measured in
/// the restricted sample.
pub fn thorndike_case3(r_xy: f64, r_xz: f64, r_zy: f64, u: f64) -> Result<f64, StatsError> {
    for r in [r_xy, r_xz, r_zy] {
        check_r(r)?;
    }
    check_u(u)?;
    let k = u * u - 1.0;
    let num = r_xy + r_xz * r_zy * k;
    let den = ((1.0 + r_xz * r_xz * k) * (1.0 + r_zy * r_zy * k)).sqrt();
    Ok((num / den).clamp(-1.0, 1.0))
}
