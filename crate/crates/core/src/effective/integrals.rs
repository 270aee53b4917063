//! Period averages of exponentials on the frequency lattice.

use num_complex::Complex64 as C64;

use super::EffectiveError;

/// Below this value of |μτ| a frequency is treated as zero.
const ZERO_PHASE: f64 = 1e-7;

fn is_zero(mu: f64, tau: f64) -> bool {
    (mu * tau).abs() < ZERO_PHASE
}

/// `(1/τ)∫₀^τ e^{iμt} dt`.
pub fn f_integral(mu: f64, tau: f64) -> C64 {
    let x = mu * tau;
    if x.abs() < 1e-4 {
        // Taylor series of (e^{ix} − 1)/(ix).
        let x2 = x * x;
        return C64::new(1.0 - x2 / 6.0 + x2 * x2 / 120.0, x / 2.0 - x * x2 / 24.0);
    }
    (C64::from_polar(1.0, x) - 1.0) / C64::new(0.0, x)
}

/// `(1/2iτ)∫₀^τ dt ∫₀^t dt′ e^{−iμt} e^{iμ′t′}`.
///
/// Exact for arbitrary real frequencies. On the lattice μ, μ′ ∈ ηℤ it reduces
/// to −1/(2μ) for μ = μ′ ≠ 0, to 1/(2μ) or 1/(2μ′) when the other frequency
/// is zero (secular terms), and to 0 otherwise.
pub fn h_integral(mu: f64, mu_prime: f64, tau: f64) -> Result<C64, EffectiveError> {
    match (is_zero(mu, tau), is_zero(mu_prime, tau)) {
        (true, true) => Err(EffectiveError::UndefinedIntegral),
        (_, false) => Ok(-(f_integral(mu_prime - mu, tau) - f_integral(-mu, tau)) / (2.0 * mu_prime)),
        (false, true) => {
            Ok((C64::from_polar(1.0, -mu * tau) - f_integral(-mu, tau)) / (2.0 * mu))
        }
    }
}
