//! Polynomial root finding by Aberth-Ehrlich simultaneous iteration.
//!
//! Chosen over a companion-matrix eigensolve to keep the crate free of a
//! general eigenvalue dependency; at degree <= 5 the iteration converges in a
//! handful of steps and each root gets one final Newton polish.

use crate::{Error, Result};
use num_complex::Complex64;

/// Evaluate `p` (monic-or-not, descending coefficients) and its derivative at `z`.
fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Scale-aware residual gate: `|p(z)| <= tol * sum_i |c_i| |z|^i`.
fn residual_ok(coeffs: &[Complex64], z: Complex64, tol: f64) -> bool {
    let (p, _) = horner(coeffs, z);
    let mut scale = 0.0;
    let mut zp = 1.0;
    for &c in coeffs.iter().rev() {
        scale += c.norm() * zp;
        zp *= z.norm();
    }
    p.norm() <= tol * scale.max(f64::MIN_POSITIVE)
}

/// All roots of the polynomial with the given descending coefficients,
/// with multiplicity. Exact zero roots (trailing zero coefficients) are
/// deflated first.
pub fn roots_of(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let lead = coeffs
        .iter()
        .position(|c| c.norm() > 0.0)
        .ok_or_else(|| Error::Numerical("zero polynomial has no roots".into()))?;
    let mut work: Vec<Complex64> = coeffs[lead..].to_vec();
    let lead_coeff = work[0];
    for c in work.iter_mut() {
        *c /= lead_coeff;
    }

    // deflate exact zero roots
    let mut zero_roots = 0;
    while work.last().map(|c| c.norm() == 0.0) == Some(true) && work.len() > 1 {
        work.pop();
        zero_roots += 1;
    }
    let n = work.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zero_roots];
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-work[1]);
        return Ok(roots);
    }

    // initial guesses on a circle around the root centroid
    let center = -work[1] / Complex64::new(n as f64, 0.0);
    let radius = 1.0
        + work
            .iter()
            .skip(1)
            .enumerate()
            .map(|(k, c)| c.norm().powf(1.0 / (k + 1) as f64))
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.45;
            center + Complex64::new(radius * ang.cos(), radius * ang.sin())
        })
        .collect();

    for _ in 0..120 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&work, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                Complex64::new(1e-8, 1e-8)
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        repulsion += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }

    // one Newton polish per root
    for zi in z.iter_mut() {
        let (p, dp) = horner(&work, *zi);
        if dp.norm() > 0.0 {
            *zi -= p / dp;
        }
    }

    for zi in &z {
        if !residual_ok(&work, *zi, 1e-10) {
            let (p, _) = horner(&work, *zi);
            return Err(Error::Numerical(format!(
                "root finder did not converge: residual {:.3e} at root {:.6e}{:+.6e}i",
                p.norm(),
                zi.re,
                zi.im
            )));
        }
    }

    roots.extend(z);
    Ok(roots)
}

/// Roots sorted by descending real part (ties by imaginary part).
pub fn roots_sorted_by_re(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut r = roots_of(coeffs)?;
    r.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    Ok(r)
}
