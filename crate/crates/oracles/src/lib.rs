//! Reference computations built directly from the model definitions, kept
//! free of the main crate so that tests compare two independent code paths.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// σᶻ, σ⁺, σ⁻ in the ordering (e, g).
pub fn sigma_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn sigma_plus() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

pub fn sigma_minus() -> DMatrix<C64> {
    sigma_plus().adjoint()
}

pub fn annihilation(n_max: usize) -> DMatrix<C64> {
    let d = n_max + 1;
    DMatrix::from_fn(d, d, |r, c| if c == r + 1 { C64::new((c as f64).sqrt(), 0.0) } else { ZERO })
}

/// Plain description of one driven qubit, angular units.
#[derive(Debug, Clone, Copy)]
pub struct Qubit {
    pub omega: f64,
    pub omega_d: f64,
    pub g: f64,
    pub rabi: f64,
    pub phase: f64,
}

/// The harmonics (ν, M) of V(t) = Σ e^{iνt} M, including the conjugate
/// terms, on qubit₁ ⊗ qubit₂ ⊗ cavity.
pub fn harmonics(qubits: &[Qubit; 2], omega_c: f64, n_max: usize) -> Vec<(f64, DMatrix<C64>)> {
    let id2 = DMatrix::<C64>::identity(2, 2);
    let adag = annihilation(n_max).adjoint();
    let mut out = Vec::new();
    for (j, q) in qubits.iter().enumerate() {
        let delta = q.omega - q.omega_d;
        let big = omega_c - q.omega_d;
        let w = (delta * delta + 4.0 * q.rabi * q.rabi).sqrt();
        let (sin, cos) = (2.0 * q.rabi / w, delta / w);
        let pre = C64::from_polar(0.5 * q.g, -q.phase);
        let lines = [
            (big, sin, sigma_z()),
            (big + w, -(1.0 - cos), sigma_plus()),
            (big - w, 1.0 + cos, sigma_minus()),
        ];
        for (nu, amp, op) in lines {
            let qop = if j == 0 { kron(&op, &id2) } else { kron(&id2, &op) };
            let m = kron(&qop, &adag) * (pre * amp);
            out.push((-nu, m.adjoint()));
            out.push((nu, m));
        }
    }
    out
}

pub fn evaluate(harm: &[(f64, DMatrix<C64>)], t: f64) -> DMatrix<C64> {
    let d = harm[0].1.nrows();
    harm.iter().fold(DMatrix::zeros(d, d), |acc, (nu, m)| acc + m * C64::from_polar(1.0, nu * t))
}

/// Gauss-Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// ∫ₐᵇ f by composite Gauss-Legendre.
pub fn integrate(f: impl Fn(f64) -> C64, a: f64, b: f64, panels: usize, order: usize) -> C64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = ZERO;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            acc += f(lo + 0.5 * h * (xi + 1.0)) * (0.5 * h * wi);
        }
    }
    acc
}

/// Matrix of nested integrals I_kl = ∫₀^τ e^{iν_k t} ∫₀^t e^{iν_l s} ds dt.
///
/// Both levels use composite Gauss-Legendre: the inner integral is the
/// running sum over completed panels plus a partial panel.
pub fn nested_integrals(freqs: &[f64], tau: f64, panels: usize, order: usize) -> DMatrix<C64> {
    let (x, w) = gauss_legendre(order);
    let h = tau / panels as f64;
    let k = freqs.len();
    let mut out = DMatrix::zeros(k, k);
    let mut completed = vec![ZERO; k];
    let quad = |nu: f64, lo: f64, hi: f64| -> C64 {
        let half = 0.5 * (hi - lo);
        x.iter().zip(&w).map(|(xi, wi)| C64::from_polar(1.0, nu * (lo + half * (xi + 1.0))) * (half * wi)).sum()
    };
    for p in 0..panels {
        let lo = p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            let t = lo + 0.5 * h * (xi + 1.0);
            let inner: Vec<C64> = freqs.iter().enumerate().map(|(l, nu)| completed[l] + quad(*nu, lo, t)).collect();
            for (a, nu_k) in freqs.iter().enumerate() {
                let outer = C64::from_polar(1.0, nu_k * t) * (0.5 * h * wi);
                for b in 0..k {
                    out[(a, b)] += outer * inner[b];
                }
            }
        }
        for (l, nu) in freqs.iter().enumerate() {
            completed[l] += quad(*nu, lo, lo + h);
        }
    }
    out
}

/// Second-order period average (1/2iτ) ∫₀^τ [V(t), ∫₀^t V(s) ds] dt.
pub fn second_order_average(harm: &[(f64, DMatrix<C64>)], tau: f64, panels: usize) -> DMatrix<C64> {
    let freqs: Vec<f64> = harm.iter().map(|(nu, _)| *nu).collect();
    let ints = nested_integrals(&freqs, tau, panels, 10);
    let d = harm[0].1.nrows();
    let mut acc = DMatrix::<C64>::zeros(d, d);
    for (a, (_, ma)) in harm.iter().enumerate() {
        for (b, (_, mb)) in harm.iter().enumerate() {
            let c = ints[(a, b)];
            if c == ZERO {
                continue;
            }
            acc += (ma * mb - mb * ma) * c;
        }
    }
    acc / C64::new(0.0, 2.0 * tau)
}

/// First-order period average (1/τ) ∫₀^τ V(t) dt by quadrature.
pub fn first_order_average(harm: &[(f64, DMatrix<C64>)], tau: f64, panels: usize) -> DMatrix<C64> {
    let d = harm[0].1.nrows();
    let mut acc = DMatrix::<C64>::zeros(d, d);
    for (nu, m) in harm {
        acc += m * integrate(|t| C64::from_polar(1.0, nu * t), 0.0, tau, panels, 10);
    }
    acc / C64::new(tau, 0.0)
}

/// The 4×4 block with photon number `n` of a qubit₁ ⊗ qubit₂ ⊗ cavity matrix.
pub fn photon_block(m: &DMatrix<C64>, n: usize, n_max: usize) -> DMatrix<C64> {
    let l = n_max + 1;
    DMatrix::from_fn(4, 4, |r, c| m[(r * l + n, c * l + n)])
}

pub fn traceless(m: &DMatrix<C64>) -> DMatrix<C64> {
    let d = m.nrows();
    m - DMatrix::identity(d, d) * (m.trace() / C64::new(d as f64, 0.0))
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// e^{−iHt} by scaling and squaring of a truncated Taylor series.
pub fn expm_taylor(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let d = h.nrows();
    let a = h * C64::new(0.0, -t);
    let norm = max_abs(&a) * d as f64;
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a = a / C64::new(2f64.powi(s as i32), 0.0);
    let mut term = DMatrix::<C64>::identity(d, d);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// |⟨ψ|U₀†U|ψ⟩|² with U₀ = e^{−iH₀t} and U = e^{−i(H₀+Λ)t}.
pub fn shift_overlap(h0: &DMatrix<C64>, lambda: &DMatrix<C64>, t: f64, psi: &DVector<C64>) -> f64 {
    let u0 = expm_taylor(h0, t);
    let u = expm_taylor(&(h0 + lambda), t);
    (u0 * psi).dotc(&(u * psi)).norm_sqr()
}

/// Eigenvalues of the transformed double-dot Hamiltonian in the basis
/// {+↑, −↓, +↓, −↑}, ascending, from the dense solver.
pub fn dqd_eigenvalues(tunnel_2t: f64, bz: f64, bx: f64) -> [f64; 4] {
    let (a, b, x) = (0.5 * (tunnel_2t + bz), 0.5 * (tunnel_2t - bz), -0.5 * bx);
    #[rustfmt::skip]
    let h = nalgebra::Matrix4::new(
        a, x, 0.0, 0.0,
        x, -a, 0.0, 0.0,
        0.0, 0.0, b, x,
        0.0, 0.0, x, -b,
    );
    let mut e: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    [e[0], e[1], e[2], e[3]]
}

/// (g_c/2)√((∂_εJ)² + 3(∂_εj)²) at ε = 0 with five-point derivatives of
/// J_l = t²/(Δ+ε), J_r = t²/(Δ−ε).
pub fn rx_coupling_from_derivatives(tunnel: f64, gap: f64, g_charge: f64) -> f64 {
    let jl = |e: f64| tunnel * tunnel / (gap + e);
    let jr = |e: f64| tunnel * tunnel / (gap - e);
    let big = |e: f64| 0.5 * (jl(e) + jr(e));
    let small = |e: f64| 0.5 * (jl(e) - jr(e));
    let h = 1e-3 * gap.abs();
    let d = |f: &dyn Fn(f64) -> f64| (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
    let (dj, ds) = (d(&big), d(&small));
    0.5 * g_charge * (dj * dj + 3.0 * ds * ds).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(6);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn nested_integral_of_constants() {
        let i = nested_integrals(&[0.0], 2.0, 4, 6);
        assert!((i[(0, 0)] - C64::new(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn taylor_exponential_of_pauli() {
        let u = expm_taylor(&sigma_z(), 0.3);
        assert!((u[(0, 0)] - C64::from_polar(1.0, -0.3)).norm() < 1e-14);
    }
}
