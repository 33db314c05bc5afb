//! Complete elliptic periods, theta functions and the `τ`, `τ′`, nome
//! bookkeeping for doubly connected domains.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Terms of a theta series are dropped once `h^{m²}` falls below this.
pub const THETA_CUTOFF: f64 = 1e-16;

/// Complete elliptic integrals `(K(k), K′(k))` by the arithmetic-geometric mean.
pub fn agm_complete(k: f64) -> Result<(f64, f64)> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::InvalidInput(format!(
            "elliptic modulus must lie in (0, 1), got {k}"
        )));
    }
    let k_comp = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok((0.5 * PI / agm(1.0, k_comp), 0.5 * PI / agm(1.0, k)))
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Real periods of `dξ/√((ξ−α1)(ξ−β1)(ξ−α2)(ξ−β2))` for a two-band configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Periods {
    /// Integral over the gap `(β1, α2)`.
    pub k: f64,
    /// Integral over the band `(α1, β1)`.
    pub k_prime: f64,
}

/// Gauss–Chebyshev integration of `f(m + h cos φ)` over `φ ∈ (0, π)`,
/// doubling the node count until the result settles.
fn chebyshev_quadrature(mid: f64, half: f64, f: impl Fn(f64) -> f64) -> f64 {
    let rule = |n: usize| -> f64 {
        let w = PI / n as f64;
        (0..n)
            .map(|j| f(mid + half * ((j as f64 + 0.5) * w).cos()))
            .sum::<f64>()
            * w
    };
    let mut n = 64;
    let mut prev = rule(n);
    while n < (1 << 23) {
        n *= 2;
        let next = rule(n);
        if (next - prev).abs() <= 1e-15 * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

/// `K` (gap integral) and `K′` (band integral) for strictly increasing
/// endpoints `α1 < β1 < α2 < β2`. The substitution `ξ = m + h cos φ` over
/// each integration range absorbs its two inverse square root endpoints.
pub fn elliptic_periods(endpoints: [f64; 4]) -> Result<Periods> {
    let [a1, b1, a2, b2] = endpoints;
    if !endpoints.iter().all(|v| v.is_finite()) || !(a1 < b1 && b1 < a2 && a2 < b2) {
        return Err(Error::InvalidInput(format!(
            "period endpoints must be strictly increasing, got {endpoints:?}"
        )));
    }
    let k = chebyshev_quadrature(0.5 * (b1 + a2), 0.5 * (a2 - b1), |x| {
        1.0 / ((x - a1) * (b2 - x)).sqrt()
    });
    let k_prime = chebyshev_quadrature(0.5 * (a1 + b1), 0.5 * (b1 - a1), |x| {
        1.0 / ((a2 - x) * (b2 - x)).sqrt()
    });
    Ok(Periods { k, k_prime })
}

fn nome_from(abs_tau_prime: f64) -> Result<f64> {
    if !(abs_tau_prime > 0.0) || !abs_tau_prime.is_finite() {
        return Err(Error::InvalidInput(format!(
            "|τ′| must be positive and finite (nome h < 1), got {abs_tau_prime}"
        )));
    }
    Ok((-PI * abs_tau_prime).exp())
}

/// `ϑ0(t|τ′) = 1 − 2h cos 2πt + 2h⁴ cos 4πt − 2h⁹ cos 6πt + …` with
/// `h = e^{−π|τ′|}`.
pub fn theta0(t: f64, abs_tau_prime: f64) -> Result<f64> {
    let h = nome_from(abs_tau_prime)?;
    Ok(theta0_nome(t, h, usize::MAX))
}

/// `ϑ0` for nome `h ∈ [0, 1)`, keeping at most `max_terms` cosine terms.
pub fn theta0_nome(t: f64, h: f64, max_terms: usize) -> f64 {
    let mut sum = 1.0;
    let mut m = 1usize;
    while m <= max_terms {
        let weight = h.powi((m * m) as i32);
        if weight < THETA_CUTOFF {
            break;
        }
        let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
        sum += sign * 2.0 * weight * (2.0 * PI * m as f64 * t).cos();
        m += 1;
    }
    sum
}

/// Number of cosine terms [`theta0_nome`] keeps for nome `h`.
pub fn theta0_term_count(h: f64) -> usize {
    (1..)
        .take_while(|&m: &usize| h.powi((m * m) as i32) >= THETA_CUTOFF)
        .count()
}

fn nome_of(tau: Complex64) -> Result<f64> {
    if tau.re != 0.0 || !(tau.im > 0.0) {
        return Err(Error::InvalidInput(format!(
            "τ must be purely imaginary with positive imaginary part, got {tau}"
        )));
    }
    Ok((-PI * tau.im).exp())
}

/// `ϑ0(v|τ) = 1 + 2 Σ (−1)^m q^{m²} cos 2πmv` at complex `v`, `q = e^{πiτ}`.
pub fn theta0_complex(v: Complex64, tau: Complex64) -> Result<Complex64> {
    let q = nome_of(tau)?;
    let mut sum = Complex64::new(1.0, 0.0);
    for m in 1..200usize {
        let weight = q.powi((m * m) as i32);
        let term = (v * (2.0 * PI * m as f64)).cos() * (2.0 * weight);
        sum += if m % 2 == 1 { -term } else { term };
        if weight == 0.0 || term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    Ok(sum)
}

/// The odd theta function `ϑ1(v|τ) = 2 Σ_{m≥0} (−1)^m q^{(m+½)²} sin((2m+1)πv)`.
pub fn theta1_complex(v: Complex64, tau: Complex64) -> Result<Complex64> {
    let q = nome_of(tau)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..200usize {
        let e = (m as f64 + 0.5).powi(2);
        let weight = q.powf(e);
        let term = (v * ((2 * m + 1) as f64 * PI)).sin() * (2.0 * weight);
        sum += if m % 2 == 1 { -term } else { term };
        if weight == 0.0 || (m > 0 && term.norm() < 1e-18 * sum.norm().max(1e-300)) {
            break;
        }
    }
    Ok(sum)
}

/// Both sides of `ϑ1(v + τ/2 | τ) = i e^{−πiτ/4} e^{−πiv} ϑ0(v|τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPeriodCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `|lhs − rhs|`.
    pub residual: f64,
}

/// Evaluates the half-period reduction relating `ϑ1` and `ϑ0`.
pub fn half_period_reduce(v: Complex64, tau: Complex64) -> Result<HalfPeriodCheck> {
    let lhs = theta1_complex(v + tau * 0.5, tau)?;
    let i = Complex64::new(0.0, 1.0);
    let rhs = i * (-i * PI * tau * 0.25).exp() * (-i * PI * v).exp() * theta0_complex(v, tau)?;
    Ok(HalfPeriodCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    })
}

/// Everything the elliptic asymptotic formula consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticData {
    /// `mod(Ω)`.
    pub modulus_omega: f64,
    /// `τ = 2i·mod(Ω)`.
    #[serde(serialize_with = "serialize_imaginary")]
    pub tau: Complex64,
    /// `τ′ = −1/τ`.
    #[serde(serialize_with = "serialize_imaginary")]
    pub tau_prime: Complex64,
    pub abs_tau_prime: f64,
    /// `h = e^{πiτ′} = e^{−π|τ′|}`.
    pub nome_h: f64,
    /// `(K, K′)` when a period computation is available for the domain.
    pub periods: Option<Periods>,
    /// Harmonic measure of the interval component at infinity.
    pub omega_infinity: f64,
}

fn serialize_imaginary<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(z.im)
}

/// Fills [`EllipticData`] from the conformal modulus and `ω(∞)`.
pub fn build_elliptic_data(modulus_omega: f64, omega_infinity: f64) -> Result<EllipticData> {
    if !(modulus_omega > 0.0) || !modulus_omega.is_finite() {
        return Err(Error::InvalidInput(format!(
            "conformal modulus must be positive, got {modulus_omega}"
        )));
    }
    if !(omega_infinity > 0.0 && omega_infinity < 1.0) {
        return Err(Error::InvalidInput(format!(
            "ω(∞) must lie in (0, 1), got {omega_infinity}"
        )));
    }
    let tau = Complex64::new(0.0, 2.0 * modulus_omega);
    let abs_tau_prime = 1.0 / (2.0 * modulus_omega);
    Ok(EllipticData {
        modulus_omega,
        tau,
        tau_prime: Complex64::new(0.0, abs_tau_prime),
        abs_tau_prime,
        nome_h: (-PI * abs_tau_prime).exp(),
        periods: None,
        omega_infinity,
    })
}

impl EllipticData {
    pub fn with_periods(mut self, periods: Periods) -> Self {
        self.periods = Some(periods);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn agm_limits_and_self_dual_point() {
        let (k0, _) = agm_complete(1e-12).unwrap();
        assert_relative_eq!(k0, 0.5 * PI, epsilon = 1e-14);
        let (k, kp) = agm_complete(0.5f64.sqrt()).unwrap();
        assert_relative_eq!(k, kp, max_relative = 1e-14);
        assert!(agm_complete(0.0).is_err());
        assert!(agm_complete(1.0).is_err());
    }

    #[test]
    fn periods_refuse_unordered_endpoints() {
        assert!(elliptic_periods([0.0, 1.0, 1.0, 2.0]).is_err());
        assert!(elliptic_periods([0.0, 2.0, 1.0, 3.0]).is_err());
    }

    #[test]
    fn theta0_refuses_bad_nome() {
        assert!(theta0(0.1, 0.0).is_err());
        assert!(theta0(0.1, -1.0).is_err());
    }

    #[test]
    fn theta0_series_value() {
        // h = 0.1 at t = 1/2: every cosine equals (−1)^m.
        let v = theta0_nome(0.5, 0.1, usize::MAX);
        assert_relative_eq!(v, 1.200_200_002, epsilon = 1e-15);
        let huge = theta0(0.3, 50.0).unwrap();
        assert_eq!(huge, 1.0);
    }

    #[test]
    fn elliptic_data_bookkeeping() {
        let ed = build_elliptic_data(0.5, 0.3).unwrap();
        assert_relative_eq!(ed.abs_tau_prime, 1.0);
        assert_relative_eq!(ed.nome_h, (-PI).exp(), epsilon = 1e-16);
        assert_relative_eq!(ed.nome_h, 0.0432139, epsilon = 1e-7);
        assert!(((ed.tau * ed.tau_prime) + 1.0).norm() < 1e-15);
        let annulus = build_elliptic_data(0.5, 0.5).unwrap();
        assert_relative_eq!(annulus.abs_tau_prime, 1.0, epsilon = 1e-15);
        assert!(build_elliptic_data(0.0, 0.5).is_err());
        assert!(build_elliptic_data(1.0, 1.0).is_err());
    }

    #[test]
    fn half_period_rejects_real_tau() {
        assert!(half_period_reduce(Complex64::new(0.1, 0.0), Complex64::new(1.0, 1.0)).is_err());
    }

    #[test]
    fn complex_theta_agrees_on_real_axis() {
        // ϑ0(t|τ′) in the real convention uses nome e^{−π|τ′|}, i.e. τ = i|τ′|
        let tau = Complex64::new(0.0, 0.9);
        for &t in &[0.0, 0.13, 0.5, 0.77] {
            let z = theta0_complex(Complex64::new(t, 0.0), tau).unwrap();
            assert_relative_eq!(z.re, theta0(t, 0.9).unwrap(), epsilon = 1e-14);
            assert!(z.im.abs() < 1e-15);
        }
    }
}
