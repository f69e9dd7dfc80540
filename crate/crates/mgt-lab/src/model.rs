//! Model parameters, per-mode state vectors, generator matrices, observables
//! and energy functionals.
//!
//! The Fourier-space system for one frequency `xi` (writing `v = u_t`,
//! `w = u_tt` and `x2 = |xi|^2`) is
//!
//! ```text
//! u_t = v
//! v_t = w
//! tau w_t = -w - a^2 x2 u - a^2 beta x2 v + eta x2 theta
//! theta_t = -gamma*kappa x2 theta - eta tau x2 w - eta x2 v        (Fourier law)
//! theta_t = -i gamma |xi| q_par - eta tau x2 w - eta x2 v          (Cattaneo law)
//! tau0 q_par_t = -q_par - i kappa |xi| theta
//! ```
//!
//! The Cattaneo heat flux is vector valued but only its longitudinal part
//! `q_par = (xi . q)/|xi|` couples to the rest of the system; the transverse
//! part obeys `tau0 q_perp_t + q_perp = 0` and is carried as a closed-form
//! magnitude on [`ModeState`], entering norms and energies additively.

use crate::linalg::CMat;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Heat-coupling variant of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelVariant {
    /// No heat conduction (`eta = 0`); the pure viscoelastic equation.
    NoHeat,
    /// Fourier law (`tau0 = 0`, `eta > 0`).
    FourierHeat,
    /// Cattaneo law (`tau0 > 0`, `eta > 0`).
    CattaneoHeat,
}

impl ModelVariant {
    /// Number of per-mode state components (4 or 5).
    pub fn state_dim(self) -> usize {
        match self {
            ModelVariant::NoHeat | ModelVariant::FourierHeat => 4,
            ModelVariant::CattaneoHeat => 5,
        }
    }
}

/// Ordering of the relaxation time `tau` against the damping `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    TauLessBeta,
    TauEqualsBeta,
    TauGreaterBeta,
}

/// Physical coefficients of the coupled system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Viscoelastic relaxation time, `tau > 0`.
    pub tau: f64,
    /// Viscoelastic damping coefficient, `beta > 0`.
    pub beta: f64,
    /// Wave speed, `a > 0`.
    pub a: f64,
    /// Heat coupling coefficient, `eta >= 0`.
    pub eta: f64,
    /// Heat-flux divergence coefficient, `gamma > 0`.
    pub gamma: f64,
    /// Temperature-gradient coefficient, `kappa > 0`.
    pub kappa: f64,
    /// Heat-flux relaxation time, `tau0 >= 0` (`> 0` exactly for Cattaneo).
    pub tau0: f64,
    /// Space dimension `N` in {1, 2, 3}.
    pub dim: usize,
}

impl ModelParams {
    pub fn new(
        tau: f64,
        beta: f64,
        a: f64,
        eta: f64,
        gamma: f64,
        kappa: f64,
        tau0: f64,
        dim: usize,
    ) -> Result<Self> {
        let p = Self {
            tau,
            beta,
            a,
            eta,
            gamma,
            kappa,
            tau0,
            dim,
        };
        p.validate()?;
        Ok(p)
    }

    /// Viscoelastic model without heat conduction.
    pub fn no_heat(tau: f64, beta: f64) -> Result<Self> {
        Self::new(tau, beta, 1.0, 0.0, 1.0, 1.0, 0.0, 1)
    }

    /// Fourier-law coupling with the normalisation `a = gamma = kappa = 1`.
    pub fn fourier(tau: f64, beta: f64, eta: f64) -> Result<Self> {
        Self::new(tau, beta, 1.0, eta, 1.0, 1.0, 0.0, 1)
    }

    /// Cattaneo-law coupling with the normalisation `a = 1`, `gamma = kappa`.
    pub fn cattaneo(tau: f64, beta: f64, eta: f64, kappa: f64, tau0: f64) -> Result<Self> {
        Self::new(tau, beta, 1.0, eta, kappa, kappa, tau0, 1)
    }

    pub fn with_dim(mut self, dim: usize) -> Result<Self> {
        self.dim = dim;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let all_finite = [
            self.tau, self.beta, self.a, self.eta, self.gamma, self.kappa, self.tau0,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidParams("non-finite coefficient".into()));
        }
        if self.tau <= 0.0 || self.beta <= 0.0 || self.a <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "need tau, beta, a > 0 (got tau={}, beta={}, a={})",
                self.tau, self.beta, self.a
            )));
        }
        if self.gamma <= 0.0 || self.kappa <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "need gamma, kappa > 0 (got gamma={}, kappa={})",
                self.gamma, self.kappa
            )));
        }
        if self.eta < 0.0 || self.tau0 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "need eta, tau0 >= 0 (got eta={}, tau0={})",
                self.eta, self.tau0
            )));
        }
        if !(1..=3).contains(&self.dim) {
            return Err(Error::InvalidParams(format!(
                "space dimension must be 1, 2 or 3 (got {})",
                self.dim
            )));
        }
        Ok(())
    }

    /// Check the parameter set against a heat-coupling variant.
    pub fn validate_for(&self, variant: ModelVariant) -> Result<()> {
        self.validate()?;
        match variant {
            ModelVariant::NoHeat if self.eta != 0.0 => Err(Error::VariantMismatch(format!(
                "NoHeat requires eta = 0 (got {})",
                self.eta
            ))),
            ModelVariant::FourierHeat if self.tau0 != 0.0 || self.eta <= 0.0 => {
                Err(Error::VariantMismatch(format!(
                    "FourierHeat requires tau0 = 0 and eta > 0 (got tau0={}, eta={})",
                    self.tau0, self.eta
                )))
            }
            ModelVariant::CattaneoHeat if self.tau0 <= 0.0 || self.eta <= 0.0 => {
                Err(Error::VariantMismatch(format!(
                    "CattaneoHeat requires tau0 > 0 and eta > 0 (got tau0={}, eta={})",
                    self.tau0, self.eta
                )))
            }
            _ => Ok(()),
        }
    }

    /// Whether the parameters sit on the paper normalisation used by the
    /// closed-form characteristic polynomials (`a = 1`; `gamma kappa = 1` for
    /// the heat equation, `gamma = kappa` for the Cattaneo flux).
    pub fn is_normalized(&self, variant: ModelVariant) -> bool {
        let a_ok = self.a == 1.0;
        match variant {
            ModelVariant::NoHeat | ModelVariant::FourierHeat => {
                a_ok && (self.gamma * self.kappa - 1.0).abs() < 1e-14
            }
            ModelVariant::CattaneoHeat => a_ok && (self.gamma - self.kappa).abs() < 1e-14,
        }
    }
}

/// Classify the dissipation regime by comparing `tau` and `beta`.
///
/// The comparison is exact on the stored values; pass a positive
/// `tie_tolerance` to widen the `TauEqualsBeta` band.
pub fn classify_regime_with_tolerance(params: &ModelParams, tie_tolerance: f64) -> Regime {
    let d = params.tau - params.beta;
    if d.abs() <= tie_tolerance {
        Regime::TauEqualsBeta
    } else if d < 0.0 {
        Regime::TauLessBeta
    } else {
        Regime::TauGreaterBeta
    }
}

/// Classify with the default (exact) tie tolerance.
pub fn classify_regime(params: &ModelParams) -> Regime {
    classify_regime_with_tolerance(params, 0.0)
}

/// Complex amplitudes of one Fourier mode.
///
/// Components are `(u, v, w, theta)` for 4-state variants and
/// `(u, v, w, theta, q_par)` for Cattaneo, with `v = u_t`, `w = u_tt` and
/// `q_par` the longitudinal heat-flux amplitude. `q_perp` is the magnitude of
/// the decoupled transverse heat flux (zero unless explicitly set).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    pub components: Vec<Complex64>,
    pub q_perp: f64,
}

impl ModeState {
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if components.len() != 4 && components.len() != 5 {
            return Err(Error::InvalidParams(format!(
                "mode state must have 4 or 5 components (got {})",
                components.len()
            )));
        }
        Ok(Self {
            components,
            q_perp: 0.0,
        })
    }

    pub fn fourier(u: Complex64, v: Complex64, w: Complex64, theta: Complex64) -> Self {
        Self {
            components: vec![u, v, w, theta],
            q_perp: 0.0,
        }
    }

    pub fn cattaneo(
        u: Complex64,
        v: Complex64,
        w: Complex64,
        theta: Complex64,
        q_par: Complex64,
    ) -> Self {
        Self {
            components: vec![u, v, w, theta, q_par],
            q_perp: 0.0,
        }
    }

    pub fn with_transverse_flux(mut self, q_perp: f64) -> Self {
        self.q_perp = q_perp.abs();
        self
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            components: vec![Complex64::new(0.0, 0.0); dim],
            q_perp: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn u(&self) -> Complex64 {
        self.components[0]
    }
    pub fn v(&self) -> Complex64 {
        self.components[1]
    }
    pub fn w(&self) -> Complex64 {
        self.components[2]
    }
    pub fn theta(&self) -> Complex64 {
        self.components[3]
    }
    /// Longitudinal heat-flux amplitude; zero for 4-state variants.
    pub fn q_par(&self) -> Complex64 {
        if self.components.len() > 4 {
            self.components[4]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    fn check_variant(&self, variant: ModelVariant) -> Result<()> {
        if self.dim() != variant.state_dim() {
            return Err(Error::VariantMismatch(format!(
                "state has {} components, variant {:?} needs {}",
                self.dim(),
                variant,
                variant.state_dim()
            )));
        }
        Ok(())
    }
}

/// Per-mode generator `Psi(xi)` of `dU/dt = Psi(xi) U`.
#[derive(Debug, Clone)]
pub struct Generator {
    pub xi_abs: f64,
    pub entries: CMat,
}

impl Generator {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Build the per-mode generator for `|xi| = xi_abs`.
///
/// Entries depend on `xi` only through its modulus. For the 4-state variants
/// the matrix is real; the Cattaneo theta/q coupling entries are purely
/// imaginary multiples of `|xi|`.
pub fn build_generator(
    params: &ModelParams,
    variant: ModelVariant,
    xi_abs: f64,
) -> Result<Generator> {
    params.validate_for(variant)?;
    if !(xi_abs.is_finite() && xi_abs >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "xi_abs must be finite and >= 0 (got {xi_abs})"
        )));
    }
    let x2 = xi_abs * xi_abs;
    let a2 = params.a * params.a;
    let (tau, beta, eta) = (params.tau, params.beta, params.eta);
    let r = |v: f64| Complex64::new(v, 0.0);
    let im = |v: f64| Complex64::new(0.0, v);

    let n = variant.state_dim();
    let mut m = CMat::zeros(n, n);
    m[(0, 1)] = r(1.0);
    m[(1, 2)] = r(1.0);
    m[(2, 0)] = r(-a2 * x2 / tau);
    m[(2, 1)] = r(-a2 * beta * x2 / tau);
    m[(2, 2)] = r(-1.0 / tau);
    m[(2, 3)] = r(eta * x2 / tau);
    m[(3, 1)] = r(-eta * x2);
    m[(3, 2)] = r(-tau * eta * x2);
    match variant {
        ModelVariant::NoHeat | ModelVariant::FourierHeat => {
            m[(3, 3)] = r(-params.gamma * params.kappa * x2);
        }
        ModelVariant::CattaneoHeat => {
            m[(3, 4)] = im(-params.gamma * xi_abs);
            m[(4, 3)] = im(-params.kappa * xi_abs / params.tau0);
            m[(4, 4)] = r(-1.0 / params.tau0);
        }
    }
    Ok(Generator {
        xi_abs,
        entries: m,
    })
}

/// The paper's observable vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObservableKind {
    /// `(tau w + v, |xi|(u + tau v), |xi| v, theta)` — Fourier family, `tau < beta`.
    VF,
    /// `(tau w + v, |xi|(u + tau v), theta)` — Fourier family, `tau = beta`.
    WF,
    /// `V_F` plus the heat flux `q` — Cattaneo, `tau < beta`.
    VC,
    /// `W_F` plus the heat flux `q` — Cattaneo, `tau = beta`.
    WC,
}

impl ObservableKind {
    pub fn component_count(self) -> usize {
        match self {
            ObservableKind::VF => 4,
            ObservableKind::WF => 3,
            ObservableKind::VC => 5,
            ObservableKind::WC => 4,
        }
    }

    pub fn needs_cattaneo(self) -> bool {
        matches!(self, ObservableKind::VC | ObservableKind::WC)
    }
}

/// Mode-wise image of a state under one of the observable maps.
///
/// Gradient components carry the modulus convention: the entry stored for
/// `i xi (u + tau v)` is `|xi| (u + tau v)`, which leaves the squared norm
/// unchanged. For Cattaneo kinds the transverse flux magnitude enters
/// `squared_norm` additively on top of the listed components.
#[derive(Debug, Clone)]
pub struct ObservableVector {
    pub kind: ObservableKind,
    pub components: Vec<Complex64>,
    pub squared_norm: f64,
}

/// Evaluate an observable vector on a mode state.
pub fn observable(
    params: &ModelParams,
    variant: ModelVariant,
    xi_abs: f64,
    state: &ModeState,
    kind: ObservableKind,
) -> Result<ObservableVector> {
    params.validate_for(variant)?;
    state.check_variant(variant)?;
    if kind.needs_cattaneo() != (variant == ModelVariant::CattaneoHeat) {
        return Err(Error::VariantMismatch(format!(
            "observable {kind:?} is incompatible with variant {variant:?}"
        )));
    }
    let tau = params.tau;
    let y1 = state.v() + tau * state.w();
    let y2 = xi_abs * (state.u() + tau * state.v());
    let y3 = xi_abs * state.v();
    let mut components = vec![y1, y2];
    match kind {
        ObservableKind::VF => components.extend([y3, state.theta()]),
        ObservableKind::WF => components.push(state.theta()),
        ObservableKind::VC => components.extend([y3, state.theta(), state.q_par()]),
        ObservableKind::WC => components.extend([state.theta(), state.q_par()]),
    }
    let mut squared_norm: f64 = components.iter().map(|z| z.norm_sqr()).sum();
    if kind.needs_cattaneo() {
        squared_norm += state.q_perp * state.q_perp;
    }
    Ok(ObservableVector {
        kind,
        components,
        squared_norm,
    })
}

/// Per-mode energy functional.
///
/// ```text
/// E = 1/2 { |v + tau w|^2 + a^2 x2 |u + tau v|^2 + a^2 tau (beta - tau) x2 |v|^2
///           + |theta|^2 [+ (tau0 gamma / kappa) |q|^2] }
/// ```
///
/// The `gamma/kappa` weight on the flux makes `dE/dt` exactly
/// `-a^2 (beta-tau) x2 |v|^2 - gamma kappa x2 |theta|^2` (Fourier) or
/// `-a^2 (beta-tau) x2 |v|^2 - (gamma/kappa) |q|^2` (Cattaneo) for general
/// coefficients; on the paper normalisations these reduce to the cited
/// identities. Requires `0 < tau <= beta`, where the quadratic form is
/// nonnegative.
pub fn mode_energy(
    params: &ModelParams,
    variant: ModelVariant,
    regime: Regime,
    xi_abs: f64,
    state: &ModeState,
) -> Result<f64> {
    params.validate_for(variant)?;
    state.check_variant(variant)?;
    if params.tau > params.beta {
        return Err(Error::InvalidParams(format!(
            "mode energy needs 0 < tau <= beta (got tau={}, beta={}); use raw norms instead",
            params.tau, params.beta
        )));
    }
    let actual = classify_regime(params);
    if regime == Regime::TauGreaterBeta || (regime != actual && params.tau != params.beta) {
        // allow TauEqualsBeta/TauLessBeta to be passed interchangeably only
        // when they agree with the stored values
        if regime != actual {
            return Err(Error::InvalidParams(format!(
                "regime argument {regime:?} disagrees with parameters ({actual:?})"
            )));
        }
    }
    let x2 = xi_abs * xi_abs;
    let a2 = params.a * params.a;
    let tau = params.tau;
    let y1 = state.v() + tau * state.w();
    let y2 = state.u() + tau * state.v();
    let mut e = y1.norm_sqr()
        + a2 * x2 * y2.norm_sqr()
        + a2 * tau * (params.beta - tau) * x2 * state.v().norm_sqr()
        + state.theta().norm_sqr();
    if variant == ModelVariant::CattaneoHeat {
        let flux_weight = params.tau0 * params.gamma / params.kappa;
        e += flux_weight * (state.q_par().norm_sqr() + state.q_perp * state.q_perp);
    }
    Ok(0.5 * e)
}

/// Constants `(c1, c2)` with `c1 |V|^2 <= E <= c2 |V|^2`.
///
/// Both quadratic forms are diagonal in the same coordinates
/// `(v + tau w, |xi|(u + tau v), |xi| v, theta, q)`, so the extreme
/// eigenvalues of the Gram matrix of `E` in the `|V|` coordinates are the
/// extremes of the diagonal weight ratios. The observable kind selects which
/// coordinates participate (`W` kinds drop the `|xi| v` column).
pub fn equivalence_constants(
    params: &ModelParams,
    variant: ModelVariant,
    kind: ObservableKind,
) -> Result<(f64, f64)> {
    params.validate_for(variant)?;
    if kind.needs_cattaneo() != (variant == ModelVariant::CattaneoHeat) {
        return Err(Error::VariantMismatch(format!(
            "observable {kind:?} is incompatible with variant {variant:?}"
        )));
    }
    if params.tau > params.beta {
        return Err(Error::InvalidParams(
            "equivalence constants need 0 < tau <= beta".into(),
        ));
    }
    let a2 = params.a * params.a;
    let tau = params.tau;
    let mut ratios = vec![1.0, a2, 1.0]; // y1, |xi| y2, theta
    match kind {
        ObservableKind::VF => ratios.push(a2 * tau * (params.beta - tau)),
        ObservableKind::WF => {}
        ObservableKind::VC => {
            ratios.push(a2 * tau * (params.beta - tau));
            ratios.push(params.tau0 * params.gamma / params.kappa);
        }
        ObservableKind::WC => ratios.push(params.tau0 * params.gamma / params.kappa),
    }
    let lo = ratios.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let hi = ratios.iter().fold(0.0f64, |a, &b| a.max(b));
    Ok((0.5 * lo, 0.5 * hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fourier_generator_rows_match_closed_form() {
        // tau=1, beta=2, eta=0.5, a=gamma=kappa=1, |xi|=1
        let p = ModelParams::fourier(1.0, 2.0, 0.5).unwrap();
        let g = build_generator(&p, ModelVariant::FourierHeat, 1.0).unwrap();
        let row3: Vec<f64> = (0..4).map(|j| g.entries[(2, j)].re).collect();
        let row4: Vec<f64> = (0..4).map(|j| g.entries[(3, j)].re).collect();
        assert_eq!(row3, vec![-1.0, -2.0, -1.0, 0.5]);
        assert_eq!(row4, vec![0.0, -0.5, -0.5, -1.0]);
        assert!(g.entries.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn generator_at_zero_xi_is_drift_matrix() {
        let p = ModelParams::fourier(0.7, 1.3, 0.4).unwrap();
        let g = build_generator(&p, ModelVariant::FourierHeat, 0.0).unwrap();
        // only the 1-chain and the -1/tau entry survive
        for i in 0..4 {
            for j in 0..4 {
                let expect = match (i, j) {
                    (0, 1) | (1, 2) => 1.0,
                    (2, 2) => -1.0 / 0.7,
                    _ => 0.0,
                };
                assert_relative_eq!(g.entries[(i, j)].re, expect, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn cattaneo_coupling_entries_are_imaginary() {
        let p = ModelParams::cattaneo(0.5, 1.0, 0.3, 1.0, 0.2).unwrap();
        let g = build_generator(&p, ModelVariant::CattaneoHeat, 2.0).unwrap();
        assert_eq!(g.entries[(3, 4)], Complex64::new(0.0, -2.0));
        assert_eq!(g.entries[(4, 3)], Complex64::new(0.0, -10.0));
        assert_relative_eq!(g.entries[(4, 4)].re, -5.0, max_relative = 1e-15);
    }

    #[test]
    fn generator_rejects_bad_inputs() {
        let p = ModelParams::fourier(1.0, 2.0, 0.5).unwrap();
        assert!(build_generator(&p, ModelVariant::FourierHeat, -1.0).is_err());
        assert!(build_generator(&p, ModelVariant::NoHeat, 1.0).is_err()); // eta != 0
        assert!(build_generator(&p, ModelVariant::CattaneoHeat, 1.0).is_err()); // tau0 = 0
    }

    #[test]
    fn observable_theta_only_state() {
        let p = ModelParams::fourier(1.0, 2.0, 0.5).unwrap();
        let st = ModeState::fourier(c(0.0), c(0.0), c(0.0), c(1.0));
        for xi in [0.0, 0.3, 7.0] {
            let o = observable(&p, ModelVariant::FourierHeat, xi, &st, ObservableKind::VF).unwrap();
            assert_relative_eq!(o.squared_norm, 1.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn observable_vf_hand_computed() {
        // tau=1, |xi|=1, state (1,1,0,0): |1|^2 + 1*|1+1|^2 + 1*|1|^2 = 6
        let p = ModelParams::fourier(1.0, 2.0, 0.5).unwrap();
        let st = ModeState::fourier(c(1.0), c(1.0), c(0.0), c(0.0));
        let o = observable(&p, ModelVariant::FourierHeat, 1.0, &st, ObservableKind::VF).unwrap();
        assert_relative_eq!(o.squared_norm, 6.0, max_relative = 1e-15);
    }

    #[test]
    fn observable_wf_drops_velocity_component() {
        // W_F has three components; state (0,1,0,0), |xi|=1, tau=beta=1:
        // |v|^2 + |xi|^2 |tau v|^2 = 1 + tau^2
        let p = ModelParams::fourier(1.0, 1.0, 0.5).unwrap();
        let st = ModeState::fourier(c(0.0), c(1.0), c(0.0), c(0.0));
        let o = observable(&p, ModelVariant::FourierHeat, 1.0, &st, ObservableKind::WF).unwrap();
        assert_eq!(o.components.len(), 3);
        assert_relative_eq!(o.squared_norm, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn observable_kind_variant_mismatch() {
        let p = ModelParams::fourier(1.0, 2.0, 0.5).unwrap();
        let st = ModeState::fourier(c(1.0), c(0.0), c(0.0), c(0.0));
        assert!(observable(&p, ModelVariant::FourierHeat, 1.0, &st, ObservableKind::VC).is_err());
    }

    #[test]
    fn cattaneo_observable_difference_is_velocity_term() {
        let p = ModelParams::cattaneo(0.5, 1.0, 0.3, 1.0, 0.2).unwrap();
        let st = ModeState::cattaneo(c(0.3), c(-1.2), c(2.0), c(0.7), c(0.4))
            .with_transverse_flux(0.9);
        let xi = 1.7;
        let vc = observable(&p, ModelVariant::CattaneoHeat, xi, &st, ObservableKind::VC).unwrap();
        let wc = observable(&p, ModelVariant::CattaneoHeat, xi, &st, ObservableKind::WC).unwrap();
        assert_relative_eq!(
            vc.squared_norm - wc.squared_norm,
            xi * xi * st.v().norm_sqr(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn mode_energy_examples() {
        // zero state
        let p = ModelParams::fourier(0.5, 1.0, 0.3).unwrap();
        let z = ModeState::zero(4);
        assert_eq!(
            mode_energy(&p, ModelVariant::FourierHeat, Regime::TauLessBeta, 2.0, &z).unwrap(),
            0.0
        );
        // tau=beta=1, state (0,1,0,0), |xi|=1: E = 1/2 (1 + 1) = 1
        let p2 = ModelParams::fourier(1.0, 1.0, 0.3).unwrap();
        let st = ModeState::fourier(c(0.0), c(1.0), c(0.0), c(0.0));
        let e = mode_energy(&p2, ModelVariant::FourierHeat, Regime::TauEqualsBeta, 1.0, &st)
            .unwrap();
        assert_relative_eq!(e, 1.0, max_relative = 1e-15);
        // tau=0.5, beta=1, state (0,1,0,0), |xi|=2: E = 1/2 (1 + 4*0.25 + 0.5*0.5*4) = 1.5
        let e2 = mode_energy(&p, ModelVariant::FourierHeat, Regime::TauLessBeta, 2.0, &st).unwrap();
        assert_relative_eq!(e2, 1.5, max_relative = 1e-15);
    }

    #[test]
    fn mode_energy_rejects_tau_greater_beta() {
        let p = ModelParams::fourier(2.0, 1.0, 0.3).unwrap();
        let st = ModeState::fourier(c(0.0), c(1.0), c(0.0), c(0.0));
        assert!(
            mode_energy(&p, ModelVariant::FourierHeat, Regime::TauGreaterBeta, 1.0, &st).is_err()
        );
    }

    #[test]
    fn regime_classification() {
        assert_eq!(
            classify_regime(&ModelParams::fourier(0.5, 1.0, 0.1).unwrap()),
            Regime::TauLessBeta
        );
        assert_eq!(
            classify_regime(&ModelParams::fourier(1.0, 1.0, 0.1).unwrap()),
            Regime::TauEqualsBeta
        );
        assert_eq!(
            classify_regime(&ModelParams::fourier(2.0, 1.0, 0.1).unwrap()),
            Regime::TauGreaterBeta
        );
    }

    #[test]
    fn energy_norm_equivalence_on_random_states() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = ModelParams::fourier(0.5, 1.0, 0.3).unwrap();
        let (c1, c2) =
            equivalence_constants(&p, ModelVariant::FourierHeat, ObservableKind::VF).unwrap();
        assert!(c1 > 0.0 && c2 >= c1);
        for _ in 0..1000 {
            let xi: f64 = 10f64.powf(rng.gen_range(-2.0..2.0));
            let comps: Vec<Complex64> = (0..4)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let st = ModeState::new(comps).unwrap();
            let e =
                mode_energy(&p, ModelVariant::FourierHeat, Regime::TauLessBeta, xi, &st).unwrap();
            let v2 = observable(&p, ModelVariant::FourierHeat, xi, &st, ObservableKind::VF)
                .unwrap()
                .squared_norm;
            assert!(c1 * v2 <= e * (1.0 + 1e-12) && e <= c2 * v2 * (1.0 + 1e-12));
        }
    }
}
