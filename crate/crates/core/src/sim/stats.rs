//! Small statistics helpers for replication summaries.

/// Two-sided 95% Student-t quantile for the given degrees of freedom.
/// Tabulated through 30, interpolated in 1/df beyond; plenty for confidence
/// interval reporting.
pub(crate) fn t_quantile_975(df: u32) -> f64 {
    const TABLE: [f64; 30] = [
        12.7062, 4.3027, 3.1824, 2.7764, 2.5706, 2.4469, 2.3646, 2.3060, 2.2622, 2.2281,
        2.2010, 2.1788, 2.1604, 2.1448, 2.1314, 2.1199, 2.1098, 2.1009, 2.0930, 2.0860,
        2.0796, 2.0739, 2.0687, 2.0639, 2.0595, 2.0555, 2.0518, 2.0484, 2.0452, 2.0423,
    ];
    if df == 0 {
        return f64::NAN;
    }
    if df <= 30 {
        return TABLE[(df - 1) as usize];
    }
    // anchors at df = 30, 40, 60, 120, infinity
    let anchors: [(f64, f64); 5] = [
        (30.0, 2.0423),
        (40.0, 2.0211),
        (60.0, 2.0003),
        (120.0, 1.9799),
        (f64::INFINITY, 1.9600),
    ];
    let x = 1.0 / df as f64;
    for pair in anchors.windows(2) {
        let (df_hi, t_hi) = pair[0];
        let (df_lo, t_lo) = pair[1];
        let x_hi = 1.0 / df_hi;
        let x_lo = if df_lo.is_infinite() { 0.0 } else { 1.0 / df_lo };
        if x <= x_hi && x >= x_lo {
            let w = if x_hi > x_lo { (x - x_lo) / (x_hi - x_lo) } else { 0.0 };
            return t_lo + w * (t_hi - t_lo);
        }
    }
    1.96
}

/// Mean and 95% confidence halfwidth of a sample.
pub(crate) fn mean_and_halfwidth(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let variance =
        samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    let halfwidth = t_quantile_975(n as u32 - 1) * (variance / n as f64).sqrt();
    (mean, halfwidth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert!((t_quantile_975(1) - 12.7062).abs() < 1e-4);
        assert!((t_quantile_975(29) - 2.0452).abs() < 1e-4);
        assert!((t_quantile_975(50) - 2.0086).abs() < 2e-3);
        assert!((t_quantile_975(100_000) - 1.96).abs() < 1e-3);
    }

    #[test]
    fn halfwidth_of_constant_sample_is_zero() {
        let (mean, hw) = mean_and_halfwidth(&[2.0, 2.0, 2.0, 2.0]);
        assert_eq!(mean, 2.0);
        assert_eq!(hw, 0.0);
    }

    #[test]
    fn single_sample_has_no_interval() {
        let (mean, hw) = mean_and_halfwidth(&[5.0]);
        assert_eq!(mean, 5.0);
        assert_eq!(hw, 0.0);
    }
}
