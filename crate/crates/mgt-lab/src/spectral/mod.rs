//! Characteristic polynomials, Routh-Hurwitz stability verdicts and
//! eigenvalue asymptotics for the per-mode generators.

mod expansion;
pub mod roots;

pub use expansion::{
    default_ladder, expansion_large_xi, expansion_small_xi, verify_expansion, BranchReport,
    BranchShape, EigenExpansion, ExpansionBranch, ExpansionReport, XiLimit,
};

use crate::linalg::{self, real_det};
use crate::model::{build_generator, ModelParams, ModelVariant};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

/// How a characteristic polynomial was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharPolySource {
    /// Closed form under the paper normalisation (`a = 1`; `gamma kappa = 1`
    /// for the Fourier family, `gamma = kappa` for Cattaneo).
    ClosedForm,
    /// Faddeev-LeVerrier determinant of the generator (general coefficients).
    Determinant,
}

/// Characteristic polynomial of the per-mode generator at fixed `|xi|`.
#[derive(Debug, Clone)]
pub struct CharPoly {
    /// 4 (no heat / Fourier) or 5 (Cattaneo).
    pub degree: usize,
    /// Monic coefficients, descending powers of lambda, all real here
    /// (`zeta^2 = -|xi|^2` keeps every coefficient real).
    pub coeffs: Vec<Complex64>,
    pub xi_abs: f64,
    pub is_real: bool,
    /// The paper's leading coefficient (`tau` or `tau*tau0`): multiplying the
    /// monic coefficients by this recovers the polynomial as printed, which is
    /// the scale the Hurwitz minors are quoted in.
    pub scale: f64,
    pub source: CharPolySource,
}

impl CharPoly {
    /// Coefficients in the paper's scale (`scale * monic`), real parts.
    pub fn natural_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| self.scale * c.re).collect()
    }
}

/// Characteristic polynomial at `|xi| = xi_abs`.
///
/// On the paper normalisation the closed forms are used; otherwise the
/// polynomial is computed from the generator determinant and flagged as such.
pub fn char_poly(params: &ModelParams, variant: ModelVariant, xi_abs: f64) -> Result<CharPoly> {
    params.validate_for(variant)?;
    if !(xi_abs.is_finite() && xi_abs >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "xi_abs must be finite and >= 0 (got {xi_abs})"
        )));
    }
    let x2 = xi_abs * xi_abs;
    let x4 = x2 * x2;
    let (tau, beta, eta, kappa, tau0) = (
        params.tau,
        params.beta,
        params.eta,
        params.kappa,
        params.tau0,
    );
    let r = |v: f64| Complex64::new(v, 0.0);

    if params.is_normalized(variant) {
        let (coeffs, scale) = match variant {
            ModelVariant::NoHeat | ModelVariant::FourierHeat => (
                vec![
                    r(1.0),
                    r((1.0 + tau * x2) / tau),
                    r((tau * eta * eta * x2 + beta + 1.0) * x2 / tau),
                    r(((eta * eta + beta) * x2 + 1.0) * x2 / tau),
                    r(x4 / tau),
                ],
                tau,
            ),
            ModelVariant::CattaneoHeat => (
                vec![
                    r(1.0),
                    r(1.0 / tau0 + 1.0 / tau),
                    r((tau * eta * eta * tau0 * x4 + (tau * kappa * kappa + beta * tau0) * x2
                        + 1.0)
                        / (tau * tau0)),
                    r(((tau + tau0) * eta * eta * x2 + beta + tau0 + kappa * kappa) * x2
                        / (tau * tau0)),
                    r(((eta * eta + beta * kappa * kappa) * x2 + 1.0) * x2 / (tau * tau0)),
                    r(kappa * kappa * x4 / (tau * tau0)),
                ],
                tau * tau0,
            ),
        };
        return Ok(CharPoly {
            degree: coeffs.len() - 1,
            coeffs,
            xi_abs,
            is_real: true,
            scale,
            source: CharPolySource::ClosedForm,
        });
    }

    // general coefficients: the numeric determinant is authoritative
    let gen = build_generator(params, variant, xi_abs)?;
    let raw = linalg::char_poly_coeffs(&gen.entries);
    let max_mag = raw.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
    let is_real = raw.iter().all(|c| c.im.abs() <= 1e-10 * max_mag);
    let coeffs = if is_real {
        raw.iter().map(|c| Complex64::new(c.re, 0.0)).collect()
    } else {
        raw
    };
    let scale = match variant {
        ModelVariant::NoHeat | ModelVariant::FourierHeat => tau,
        ModelVariant::CattaneoHeat => tau * tau0,
    };
    Ok(CharPoly {
        degree: coeffs.len() - 1,
        coeffs,
        xi_abs,
        is_real,
        scale,
        source: CharPolySource::Determinant,
    })
}

/// Numeric roots of a characteristic polynomial, with multiplicity.
pub fn poly_roots(p: &CharPoly) -> Result<Vec<Complex64>> {
    if !(4..=5).contains(&p.degree) {
        return Err(Error::InvalidParams(format!(
            "characteristic polynomial degree must be 4 or 5 (got {})",
            p.degree
        )));
    }
    roots::roots_of(&p.coeffs)
}

/// Leading principal minors A_1..A_n of the Hurwitz matrix, in the paper's
/// coefficient scale.
///
/// Rejects complex-coefficient input; degree 4 and 5 are both served by the
/// generic Hurwitz matrix `H[i][j] = a_{2(i+1)-(j+1)}`.
pub fn hurwitz_minors(p: &CharPoly) -> Result<Vec<f64>> {
    if !p.is_real {
        return Err(Error::InvalidParams(
            "Hurwitz minors need real coefficients".into(),
        ));
    }
    let a = p.natural_coeffs();
    let n = p.degree;
    let coeff = |k: isize| -> f64 {
        if k < 0 || k as usize > n {
            0.0
        } else {
            a[k as usize]
        }
    };
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = coeff(2 * (i as isize + 1) - (j as isize + 1));
        }
    }
    Ok((1..=n)
        .map(|k| real_det(&h.view((0, 0), (k, k)).into_owned()))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Stable,
    Marginal,
    Unstable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Stable => "stable",
            Verdict::Marginal => "marginal",
            Verdict::Unstable => "unstable",
        };
        f.write_str(s)
    }
}

/// Routh-Hurwitz stability verdict for one `(params, variant, |xi|)` cell.
#[derive(Debug, Clone)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    /// Hurwitz minors A_1..A_n in the paper's coefficient scale.
    pub minors: Vec<f64>,
    /// Max real part among the numeric roots.
    pub witness: f64,
}

/// Relative width of the marginal band around zero for minor `A_k`.
///
/// `tau = beta` with `eta = 0` makes A_3 exactly zero in exact arithmetic;
/// the band keeps float noise from flipping it to a boolean verdict.
fn minor_band(natural_coeffs: &[f64], k: usize) -> f64 {
    let amax = natural_coeffs
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()))
        .max(1.0);
    1e-10 * amax.powi(k as i32)
}

/// Stability verdict via the Routh-Hurwitz criterion, cross-validated by the
/// numeric root witness.
pub fn rh_verdict(
    params: &ModelParams,
    variant: ModelVariant,
    xi_abs: f64,
) -> Result<StabilityVerdict> {
    let p = char_poly(params, variant, xi_abs)?;
    let minors = hurwitz_minors(&p)?;
    let witness = poly_roots(&p)?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if xi_abs == 0.0 {
        // zero roots are always present at xi = 0
        return Ok(StabilityVerdict {
            verdict: Verdict::Marginal,
            minors,
            witness,
        });
    }
    let nat = p.natural_coeffs();
    let mut verdict = Verdict::Stable;
    for (i, m) in minors.iter().enumerate() {
        let band = minor_band(&nat, i + 1);
        if *m < -band {
            verdict = Verdict::Unstable;
            break;
        }
        if m.abs() <= band {
            verdict = Verdict::Marginal;
        }
    }
    Ok(StabilityVerdict {
        verdict,
        minors,
        witness,
    })
}

/// Roots of the cubic governing the Cattaneo high-frequency constant branches:
///
/// ```text
/// tau eta^2 tau0 s^3 + eta^2 (tau0 + tau) s^2 + (eta^2 + beta kappa^2) s + kappa^2 = 0
/// ```
#[derive(Debug, Clone)]
pub struct SigmaRoots {
    pub roots: Vec<Complex64>,
    /// Index into `roots` of a real root inside `(-1/tau - 1/tau0, 0)`, when present.
    pub real_root_in_interval: Option<usize>,
    pub all_re_negative: bool,
}

pub fn sigma_cubic(params: &ModelParams) -> Result<SigmaRoots> {
    let (tau, beta, eta, kappa, tau0) = (
        params.tau,
        params.beta,
        params.eta,
        params.kappa,
        params.tau0,
    );
    if eta <= 0.0 || tau <= 0.0 || tau0 <= 0.0 {
        return Err(Error::InvalidParams(
            "sigma cubic needs eta, tau, tau0 > 0".into(),
        ));
    }
    let r = |v: f64| Complex64::new(v, 0.0);
    let coeffs = [
        r(tau * eta * eta * tau0),
        r(eta * eta * (tau0 + tau)),
        r(eta * eta + beta * kappa * kappa),
        r(kappa * kappa),
    ];
    let roots = roots::roots_of(&coeffs)?;
    let lo = -1.0 / tau - 1.0 / tau0;
    let real_root_in_interval = roots.iter().position(|z| {
        z.im.abs() <= 1e-9 * (1.0 + z.norm()) && z.re > lo - 1e-12 && z.re < 0.0
    });
    let all_re_negative = roots.iter().all(|z| z.re < 0.0);
    Ok(SigmaRoots {
        roots,
        real_root_in_interval,
        all_re_negative,
    })
}
