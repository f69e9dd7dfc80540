//! Least-squares fitting helpers shared by the spectral, lyapunov and cauchy
//! modules (log-log slopes, exponential rates, peak picking).

/// Result of an ordinary least-squares line fit.
#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope estimate.
    pub slope_stderr: f64,
    pub max_abs_residual: f64,
}

/// Fit `y = slope * x + intercept` by least squares. Panics on length
/// mismatch; callers guarantee at least two points.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need at least two points to fit a line");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx) * (xi - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss_res = 0.0;
    let mut max_abs_residual = 0.0f64;
    for (xi, yi) in x.iter().zip(y) {
        let r = yi - (slope * xi + intercept);
        ss_res += r * r;
        max_abs_residual = max_abs_residual.max(r.abs());
    }
    let dof = (x.len() as f64 - 2.0).max(1.0);
    let slope_stderr = (ss_res / dof / sxx).sqrt();
    LinearFit {
        slope,
        intercept,
        slope_stderr,
        max_abs_residual,
    }
}

/// Indices of strict local maxima (plus the ends when they dominate their
/// neighbour). Used to fit decay envelopes of oscillating signals.
pub fn peak_indices(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    if n < 3 {
        return (0..n).collect();
    }
    let mut idx = Vec::new();
    if values[0] >= values[1] {
        idx.push(0);
    }
    for i in 1..n - 1 {
        if values[i] >= values[i - 1] && values[i] >= values[i + 1] {
            idx.push(i);
        }
    }
    if values[n - 1] >= values[n - 2] {
        idx.push(n - 1);
    }
    if idx.len() < 2 {
        (0..n).collect()
    } else {
        idx
    }
}

/// Exponential decay rate of a positive signal: fits `ln v = -rate * t + c`
/// and returns `rate` (positive for decay).
pub fn exponential_rate(times: &[f64], values: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(_, v)| **v > 0.0 && v.is_finite())
        .map(|(t, v)| (*t, v.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    -linear_fit(&xs, &ys).slope
}

/// Log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Linearly spaced values from `lo` to `hi` inclusive.
pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_line_is_recovered() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|xi| 3.0 * xi - 2.0).collect();
        let f = linear_fit(&x, &y);
        assert_relative_eq!(f.slope, 3.0, max_relative = 1e-14);
        assert_relative_eq!(f.intercept, -2.0, max_relative = 1e-12);
        assert!(f.max_abs_residual < 1e-12);
    }

    #[test]
    fn peaks_of_damped_cosine() {
        let vals: Vec<f64> = (0..200)
            .map(|i| {
                let t = i as f64 * 0.1;
                (-0.1 * t).exp() * (2.0 * t).cos().powi(2)
            })
            .collect();
        let peaks = peak_indices(&vals);
        assert!(peaks.len() >= 5);
        // envelope through the peaks decays at rate ~0.1
        let ts: Vec<f64> = peaks.iter().map(|&i| i as f64 * 0.1).collect();
        let vs: Vec<f64> = peaks.iter().map(|&i| vals[i]).collect();
        let rate = exponential_rate(&ts, &vs);
        assert_relative_eq!(rate, 0.1, max_relative = 0.05);
    }
}
