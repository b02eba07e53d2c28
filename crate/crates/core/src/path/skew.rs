//! Closed-form skew Brownian motion, used as an independent oracle for
//! single-interface media with piecewise-constant coefficients.

use std::f64::consts::PI;

use crate::media::{Medium, Side};

/// Centered Gaussian kernel with variance `t`.
#[inline]
pub fn gaussian_kernel(t: f64, z: f64) -> f64 {
    (-z * z / (2.0 * t)).exp() / (2.0 * PI * t).sqrt()
}

/// Transition density of skew Brownian motion with transmission
/// probability `alpha`: `g_t(y − x) + sgn(y)(2α − 1) g_t(|x| + |y|)`.
///
/// The same expression holds for `x < 0` (reflect `x`, `y` and swap `α`
/// with `1 − α`). At `y = 0` the right limit is returned.
pub fn skew_density(alpha: f64, t: f64, x: f64, y: f64) -> f64 {
    let sign = if y >= 0.0 { 1.0 } else { -1.0 };
    gaussian_kernel(t, y - x) + sign * (2.0 * alpha - 1.0) * gaussian_kernel(t, x.abs() + y.abs())
}

/// Path-level transmission probability at `x`:
/// `α = (√(D⁺η⁺)/φ⁺) / (√(D⁺η⁺)/φ⁺ + √(D⁻η⁻)/φ⁻)` from one-sided values.
///
/// With `β± = 1/A±` this is `A⁺√(η⁺D⁺) / (A⁺√(η⁺D⁺) + A⁻√(η⁻D⁻))`; at a
/// point where nothing jumps it is 1/2.
pub fn transmission_probability(medium: &Medium, x: f64) -> crate::Result<f64> {
    let side_weight = |side: Side| -> crate::Result<f64> {
        let p = medium.piece_index(x, side)?;
        let piece = &medium.pieces()[p];
        let phi = medium.phi().at_position(p);
        Ok((piece.d.eval(x) * piece.eta.eval(x)).sqrt() / phi)
    };
    let plus = side_weight(Side::Right)?;
    let minus = side_weight(Side::Left)?;
    Ok(plus / (plus + minus))
}

/// `X = σ(B)·B` with `B` skew Brownian motion, `σ = σ∓` on either side of 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RescaledSkew {
    pub alpha: f64,
    pub sigma_minus: f64,
    pub sigma_plus: f64,
}

impl RescaledSkew {
    /// Single interface at 0 with piecewise-constant coefficients: `σ± = √(D±/η±)`.
    pub fn from_medium(medium: &Medium) -> crate::Result<Self> {
        let (dm, eta_m) = medium.coeff_at(0.0, Side::Left)?;
        let (dp, eta_p) = medium.coeff_at(0.0, Side::Right)?;
        Ok(RescaledSkew {
            alpha: transmission_probability(medium, 0.0)?,
            sigma_minus: (dm / eta_m).sqrt(),
            sigma_plus: (dp / eta_p).sqrt(),
        })
    }

    fn sigma(&self, x: f64) -> f64 {
        if x > 0.0 {
            self.sigma_plus
        } else {
            self.sigma_minus
        }
    }

    /// Density of `X(t)` at `y` given `X(0) = x` (push-forward of [`skew_density`]).
    pub fn density(&self, t: f64, x: f64, y: f64) -> f64 {
        let sy = if y >= 0.0 { self.sigma_plus } else { self.sigma_minus };
        skew_density(self.alpha, t, x / self.sigma(x), y / sy) / sy
    }
}
