//! Angle solvers: space-time duality and the Yang–Baxter equation.

use super::local::{mul, M2};
use crate::error::{QuonError, Result};
use crate::majorana_ir::expi_c;
use num_complex::Complex64;

/// `(A, φ)` with `Scattering_vertical(θ) = A · Scattering_horizontal(φ)`.
pub fn spacetime_dual(theta: Complex64) -> Result<(Complex64, Complex64)> {
    let e = expi_c(theta);
    let one = Complex64::new(1.0, 0.0);
    if (one + e).norm() < 1e-12 || (one - e).norm() < 1e-12 {
        return Err(QuonError::SingularAngle);
    }
    let a = (one + e) / 2.0;
    let phi = -Complex64::i() * ((one - e) / (one + e)).ln();
    Ok((a, phi))
}

/// Inverse of [`spacetime_dual`]: `(θ, s)` with
/// `Scattering_horizontal(φ) = s · Scattering_vertical(θ)`.
pub fn spacetime_dual_inverse(phi: Complex64) -> Result<(Complex64, Complex64)> {
    let e = expi_c(phi);
    let one = Complex64::new(1.0, 0.0);
    if (one + e).norm() < 1e-12 || (one - e).norm() < 1e-12 {
        return Err(QuonError::SingularAngle);
    }
    let theta = -Complex64::i() * ((one - e) / (one + e)).ln();
    Ok((theta, one + e))
}

fn z_gate(t: Complex64) -> M2 {
    let zero = Complex64::new(0.0, 0.0);
    [[Complex64::new(1.0, 0.0), zero], [zero, expi_c(t)]]
}

fn x_gate(t: Complex64) -> M2 {
    let e = expi_c(t);
    let p = (1.0 + e) / 2.0;
    let q = (1.0 - e) / 2.0;
    [[p, q], [q, p]]
}

fn hadamard_conj(m: &M2) -> M2 {
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    [[(a + b + c + d) / 2.0, (a - b + c - d) / 2.0], [(a + b - c - d) / 2.0, (a - b - c + d) / 2.0]]
}

/// `Z(c)·X(b)·Z(a)` with strands-(1,2) scatterings as `Z` and strands-(2,3)
/// scatterings as `X`; the operator of the time-ordered triple `a, b, c`.
pub(crate) fn zxz(a: Complex64, b: Complex64, c: Complex64) -> M2 {
    mul(&z_gate(c), &mul(&x_gate(b), &z_gate(a)))
}

pub(crate) fn xzx(a: Complex64, b: Complex64, c: Complex64) -> M2 {
    mul(&x_gate(c), &mul(&z_gate(b), &x_gate(a)))
}

/// Angles of a solved Yang–Baxter move: the left triple equals
/// `scalar` times the right triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YangBaxterSolution {
    pub phis: [Complex64; 3],
    pub scalar: Complex64,
}

/// Closed-form `(λ, a, b, c)` with `m = λ·Z(c)·X(b)·Z(a)`. Products
/// `Z·X·Z` satisfy `N₁₁(1−N₀₀)² = N₀₁N₁₀N₀₀`, which fixes `λ` up to a
/// branch; the root nearest 1 is taken.
fn zxz_decompose(m: &M2) -> Result<YangBaxterSolution> {
    let one = Complex64::new(1.0, 0.0);
    if m[1][1].norm() < 1e-12 {
        return Err(QuonError::NoSolution("vanishing corner entry".into()));
    }
    let root = (m[0][1] * m[1][0] * m[0][0] / m[1][1]).sqrt();
    let (l1, l2) = (m[0][0] + root, m[0][0] - root);
    let lambda = if (l1 - one).norm() <= (l2 - one).norm() { l1 } else { l2 };
    if lambda.norm() < 1e-12 {
        return Err(QuonError::NoSolution("vanishing scale".into()));
    }
    let p = m[0][0] / lambda;
    let q = one - p;
    if q.norm() < 1e-12 {
        return Err(QuonError::NoSolution("degenerate middle angle".into()));
    }
    let zb = 2.0 * p - one;
    let za = m[0][1] / lambda / q;
    let zc = m[1][0] / lambda / q;
    if za.norm() < 1e-12 || zb.norm() < 1e-12 || zc.norm() < 1e-12 {
        return Err(QuonError::NoSolution("angle at infinity".into()));
    }
    let ang = |w: Complex64| -Complex64::i() * w.ln();
    let (a, b, c) = (ang(za), ang(zb), ang(zc));
    let r = zxz(a, b, c);
    let resid = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| (lambda * r[i][j] - m[i][j]).norm()).fold(0.0, f64::max);
    if resid > 1e-9 {
        return Err(QuonError::NoSolution(format!("residual {resid:e}")));
    }
    Ok(YangBaxterSolution { phis: [a, b, c], scalar: lambda })
}

/// Solves `S_{j}(θ₁) S_{j+1}(θ₂) S_{j}(θ₃) = λ·S_{j+1}(φ₁) S_{j}(φ₂) S_{j+1}(φ₃)`
/// (both listed in time order, vertical scatterings).
pub fn solve_yang_baxter(t1: Complex64, t2: Complex64, t3: Complex64) -> Result<YangBaxterSolution> {
    zxz_decompose(&hadamard_conj(&zxz(t1, t2, t3)))
}

/// The mirrored equation: `S_{j+1}(θ₁) S_{j}(θ₂) S_{j+1}(θ₃) = λ·S_{j}(φ₁) S_{j+1}(φ₂) S_{j}(φ₃)`.
pub fn solve_yang_baxter_mirrored(t1: Complex64, t2: Complex64, t3: Complex64) -> Result<YangBaxterSolution> {
    zxz_decompose(&xzx(t1, t2, t3))
}
