//! The matchgate identities on dense tensors and two-qubit `G(A,B)` gates.

use crate::compile::{circuit_oracle_unitary, Circuit, DenseTensor, Gate};
use crate::error::{QuonError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

pub const MGI_MAX_RANK: usize = 8;
pub const MGI_TOL: f64 = 1e-9;

/// Max-norm residual of the matchgate identities
/// `Σ_{a: x_a≠y_a} T(x⊕e^a) T(y⊕e^a) (−1)^{x_{<a}+y_{<a}}` over all `(x, y)`.
pub fn matchgate_identity_residual(t: &DenseTensor) -> Result<f64> {
    let n = t.rank;
    if n > MGI_MAX_RANK {
        return Err(QuonError::RankTooLarge(n));
    }
    let dim = 1usize << n;
    let mut worst: f64 = 0.0;
    for x in 0..dim {
        for y in 0..dim {
            let diff = x ^ y;
            let mut sum = Complex64::new(0.0, 0.0);
            for a in 0..n {
                let e = 1usize << (n - 1 - a);
                if diff & e == 0 {
                    continue;
                }
                let before = ((x >> (n - a)).count_ones() + (y >> (n - a)).count_ones()) % 2;
                let term = t.entries[x ^ e] * t.entries[y ^ e];
                sum += if before == 1 { -term } else { term };
            }
            worst = worst.max(sum.norm());
        }
    }
    Ok(worst)
}

/// `G(A,B)`: `A` acts on span{|00⟩,|11⟩}, `B` on span{|01⟩,|10⟩}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchgateGate {
    pub a: [[Complex64; 2]; 2],
    pub b: [[Complex64; 2]; 2],
}

fn det(m: &[[Complex64; 2]; 2]) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn gab_matrix(g: &MatchgateGate) -> Vec<Vec<Complex64>> {
    let o = Complex64::new(0.0, 0.0);
    let (a, b) = (g.a, g.b);
    vec![
        vec![a[0][0], o, o, a[0][1]],
        vec![o, b[0][0], b[0][1], o],
        vec![o, b[1][0], b[1][1], o],
        vec![a[1][0], o, o, a[1][1]],
    ]
}

/// `G(A,B) = phase · U(circuit)` with the circuit on qubits 0 and 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GabDecomposition {
    pub circuit: Circuit,
    pub phase: Complex64,
}

/// Euler angles `(α, β, γ)` with `U ∝ e^{−iασz/2} e^{−iβσx/2} e^{−iγσz/2}`.
fn zxz_angles(u: &[[Complex64; 2]; 2]) -> (f64, f64, f64) {
    let (a, b) = (u[0][0], u[0][1]);
    let beta = 2.0 * b.norm().atan2(a.norm());
    let sum = if a.norm() > 1e-12 { -2.0 * a.arg() } else { 0.0 };
    let diff = if b.norm() > 1e-12 { -2.0 * (Complex64::i() * b).arg() } else { 0.0 };
    ((sum + diff) / 2.0, beta, (sum - diff) / 2.0)
}

fn is_special_unitary(m: &[[Complex64; 2]; 2]) -> bool {
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    (c + b.conj()).norm() < 1e-9 && (d - a.conj()).norm() < 1e-9 && (a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-9
}

struct Emitter {
    circuit: Circuit,
}

impl Emitter {
    fn rz(&mut self, q: usize, theta: f64) {
        let t = theta.rem_euclid(TAU);
        if t > 1e-12 && TAU - t > 1e-12 {
            self.circuit.push(Gate::Rz { theta: t }, &[q]).expect("qubit in range");
        }
    }

    fn xx(&mut self, theta: f64) {
        let t = theta.rem_euclid(TAU);
        if t > 1e-12 && TAU - t > 1e-12 {
            self.circuit.push(Gate::XXRot { theta: t }, &[0, 1]).expect("adjacent qubits");
        }
    }

    /// `e^{−iαA σz/2} ⊕ e^{−iαB σz/2}` up to phase. On the two parity
    /// sectors `Z⊗1` is `σz ⊕ σz` and `1⊗Z` is `σz ⊕ −σz`.
    fn z_pair(&mut self, alpha_a: f64, alpha_b: f64) {
        self.rz(0, (alpha_a + alpha_b) / 2.0);
        self.rz(1, (alpha_a - alpha_b) / 2.0);
    }

    /// `e^{−iβA σx/2} ⊕ e^{−iβB σx/2}` up to phase; `X⊗X` is `σx ⊕ σx`, and
    /// conjugating by a π rotation on the odd sector flips its sign there.
    fn x_pair(&mut self, beta_a: f64, beta_b: f64) {
        let (s, d) = ((beta_a + beta_b) / 2.0, (beta_a - beta_b) / 2.0);
        self.xx(s);
        if d.rem_euclid(TAU).min(TAU - d.rem_euclid(TAU)) > 1e-12 {
            self.z_pair(0.0, -PI);
            self.xx(d);
            self.z_pair(0.0, PI);
        }
    }
}

/// Circuit over `Rz` and `XXRot` realizing `G(A,B)` up to a recorded phase.
/// `A` and `B` must be unitary up to one common scale with `det A = det B`.
pub fn decompose_gab(g: &MatchgateGate) -> Result<GabDecomposition> {
    let (da, db) = (det(&g.a), det(&g.b));
    if (da - db).norm() > 1e-9 * (1.0 + da.norm()) {
        return Err(QuonError::NotMatchgate(format!("det A = {da} but det B = {db}")));
    }
    if da.norm() < 1e-12 {
        return Err(QuonError::NotMatchgate("singular blocks".into()));
    }
    let s = da.sqrt();
    let norm = |m: &[[Complex64; 2]; 2]| m.map(|row| row.map(|v| v / s));
    let (a, b) = (norm(&g.a), norm(&g.b));
    if !is_special_unitary(&a) || !is_special_unitary(&b) {
        return Err(QuonError::NotMatchgate("blocks are not unitary up to a common scale".into()));
    }
    let (a1, a2, a3) = zxz_angles(&a);
    let (b1, b2, b3) = zxz_angles(&b);
    let mut em = Emitter { circuit: Circuit::new(2) };
    em.z_pair(a3, b3);
    em.x_pair(a2, b2);
    em.z_pair(a1, b1);
    let circuit = em.circuit;

    let want = gab_matrix(g);
    let got = circuit_oracle_unitary(&circuit)?.to_matrix();
    let (r, c) = (0..4).flat_map(|r| (0..4).map(move |c| (r, c))).max_by(|&(r1, c1), &(r2, c2)| want[r1][c1].norm().total_cmp(&want[r2][c2].norm())).expect("4×4");
    let phase = want[r][c] / got[r][c];
    let err = (0..4).flat_map(|r| (0..4).map(move |c| (r, c))).map(|(r, c)| (want[r][c] - phase * got[r][c]).norm()).fold(0.0, f64::max);
    if err > 1e-9 * (1.0 + s.norm()) {
        return Err(QuonError::NumericalInstability(format!("G(A,B) reconstruction error {err:e}")));
    }
    Ok(GabDecomposition { circuit, phase })
}
