//! Recovery of directional pushforwards from Euler-Fourier samples, and the
//! exact support and Euler-characteristic checks behind it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cfnd::Cfnd;
use crate::error::{Error, Result};
use crate::geometry::{polar_contains, LinearForm, OrthantCone};
use crate::kernels::Kernel;

/// Truncation `A`, quadrature step `Δs` and one-sided offset `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryParams {
    pub truncation: f64,
    pub step: f64,
    pub offset: f64,
}

impl Default for RecoveryParams {
    fn default() -> Self {
        RecoveryParams {
            truncation: 500.0,
            step: 0.01,
            offset: 1e-3,
        }
    }
}

/// Which one-sided limit the inversion targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
    Vanishing,
}

/// `t⁺` on the antipodal polar cone, `t⁻` on the polar cone, zero elsewhere.
pub fn recovery_side(cone: &OrthantCone, xi: &LinearForm) -> Side {
    if polar_contains(&cone.antipodal(), xi) {
        Side::Right
    } else if polar_contains(cone, xi) {
        Side::Left
    } else {
        Side::Vanishing
    }
}

fn require_gamma(phi: &Cfnd, cone: &OrthantCone) -> Result<()> {
    match phi.is_gamma_constructible(cone) {
        Ok(true) => Ok(()),
        Ok(false) | Err(Error::UnsupportedGenerator) => Err(Error::NotGammaConstructible),
        Err(e) => Err(e),
    }
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Approximates `ξ_*φ(t)` from `s ↦ ℰℱ[φ](sξ)` by truncated Fourier inversion
/// with the `s = 0` sample removed.
pub fn recover_pushforward(
    phi: &Cfnd,
    cone: &OrthantCone,
    xi: &LinearForm,
    t: f64,
    params: &RecoveryParams,
) -> Result<f64> {
    if xi.is_zero() {
        return Err(Error::ZeroDirection);
    }
    if !(params.truncation > 0.0 && params.step > 0.0 && params.step < params.truncation)
        || !(params.offset > 0.0)
    {
        return Err(Error::InvalidInput("recovery needs 0 < Δs < A and δ > 0".into()));
    }
    require_gamma(phi, cone)?;
    let shifted = match recovery_side(cone, xi) {
        Side::Right => t + params.offset,
        Side::Left => t - params.offset,
        Side::Vanishing => return Ok(0.0),
    };
    let theta = phi.pushforward_linear(xi)?;
    let fourier = Kernel::fourier();
    let n = (params.truncation / params.step).round() as i64;
    let mut terms = Vec::with_capacity(2 * n as usize);
    for k in (-n..=n).filter(|&k| k != 0) {
        let s = k as f64 * params.step;
        let ef = theta.pushforward_affine(s, 0.0)?.lebesgue_pair(&fourier)?;
        let weight = if k.abs() == n { 0.5 } else { 1.0 };
        let z = Complex64::new(0.0, s * shifted).exp() * ef / s.abs();
        terms.push(weight * z.re);
    }
    Ok(pairwise_sum(&terms) * params.step / (2.0 * PI))
}

/// Outside both polar cones the pushforward of a γ-constructible function
/// vanishes identically; inside, the check holds vacuously.
pub fn radon_support_check(phi: &Cfnd, cone: &OrthantCone, xi: &LinearForm) -> Result<bool> {
    require_gamma(phi, cone)?;
    if recovery_side(cone, xi) != Side::Vanishing {
        return Ok(true);
    }
    Ok(phi.pushforward_linear(xi)?.is_zero())
}

/// Compactly supported γ-constructible functions have zero Euler integral.
pub fn chi_vanishing_check(phi: &Cfnd, cone: &OrthantCone) -> Result<bool> {
    require_gamma(phi, cone)?;
    Ok(phi.euler_integral()? == 0)
}
