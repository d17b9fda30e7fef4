//! Star-triangle relation for parity-tensor patches with `𝟙 + uZ` edges.
//!
//! Leg `i` of the star leaves the centre through `𝟙 + u_i Z`. In the
//! triangle, leg `i` leaves corner `i` and `v_i` sits on the side opposite
//! that corner. Every corner and the centre are three-leg parity tensors.

use crate::compile::DenseTensor;
use crate::error::{QuonError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarTriangleSolution {
    pub v: [Complex64; 3],
    pub r: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StarTriangleInput {
    Star { u: [Complex64; 3] },
    Triangle { v: [Complex64; 3], r: Complex64 },
}

fn sign(bit: usize) -> f64 {
    if bit == 0 { 1.0 } else { -1.0 }
}

/// Diagonal edge factor `𝟙 + wZ` between bits `p` and `q`.
fn edge(w: Complex64, p: usize, q: usize) -> Complex64 {
    if p == q { 1.0 + w * sign(p) } else { Complex64::new(0.0, 0.0) }
}

fn parity3(a: usize, b: usize, c: usize) -> f64 {
    if (a ^ b ^ c) & 1 == 0 { 1.0 } else { 0.0 }
}

/// Brute-force contraction of either patch; leg 0 is the most significant bit.
pub fn star_triangle_oracle(input: StarTriangleInput) -> DenseTensor {
    let mut t = DenseTensor::zeros(3);
    for (idx, entry) in t.entries.iter_mut().enumerate() {
        let a = [idx >> 2 & 1, idx >> 1 & 1, idx & 1];
        *entry = match input {
            StarTriangleInput::Star { u } => (0..8usize)
                .map(|y| {
                    let y = [y >> 2 & 1, y >> 1 & 1, y & 1];
                    (0..3).map(|i| edge(u[i], y[i], a[i])).product::<Complex64>() * parity3(y[0], y[1], y[2])
                })
                .sum(),
            StarTriangleInput::Triangle { v, r } => {
                // Side k joins corners k+1 and k+2; corner i sees the two
                // sides other than side i, one end each.
                (0..64usize)
                    .map(|x| {
                        let near = |k: usize| x >> (2 * k) & 1;
                        let far = |k: usize| x >> (2 * k + 1) & 1;
                        let sides: Complex64 = (0..3).map(|k| edge(v[k], near(k), far(k))).product();
                        let corners: f64 = (0..3)
                            .map(|i| {
                                let (k1, k2) = ((i + 1) % 3, (i + 2) % 3);
                                // Side k1 meets corner i at its far end, side k2 at its near end.
                                parity3(a[i], far(k1), near(k2))
                            })
                            .product();
                        sides * corners
                    })
                    .sum::<Complex64>()
                    * r
            }
        };
    }
    t
}

/// Even components `000, 011, 101, 110`: side signs for each and its negation.
const EVEN: [(usize, [f64; 3]); 4] = [(0b000, [1.0, 1.0, 1.0]), (0b011, [-1.0, 1.0, 1.0]), (0b101, [1.0, -1.0, 1.0]), (0b110, [1.0, 1.0, -1.0])];

fn star_even(u: &[Complex64; 3]) -> [Complex64; 4] {
    EVEN.map(|(a, _)| (0..3).map(|i| 1.0 + u[i] * sign(a >> (2 - i) & 1)).product())
}

/// Triangle components `T_a(v)` without `R`, and their `v`-gradients.
fn triangle_even(v: &[Complex64; 3]) -> ([Complex64; 4], [[Complex64; 3]; 4]) {
    let mut vals = [Complex64::new(0.0, 0.0); 4];
    let mut grads = [[Complex64::new(0.0, 0.0); 3]; 4];
    for (n, (_, s)) in EVEN.iter().enumerate() {
        for flip in [1.0, -1.0] {
            let f: [Complex64; 3] = std::array::from_fn(|k| 1.0 + v[k] * s[k] * flip);
            vals[n] += f[0] * f[1] * f[2];
            for k in 0..3 {
                let others: Complex64 = (0..3).filter(|&m| m != k).map(|m| f[m]).product();
                grads[n][k] += others * s[k] * flip;
            }
        }
    }
    (vals, grads)
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve4(mut m: [[Complex64; 4]; 4], mut b: [Complex64; 4]) -> Option<[Complex64; 4]> {
    for col in 0..4 {
        let p = (col..4).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))?;
        if m[p][col].norm() < 1e-300 {
            return None;
        }
        m.swap(col, p);
        b.swap(col, p);
        for row in col + 1..4 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                let d = m[col][k];
                m[row][k] -= f * d;
            }
            let d = b[col];
            b[row] -= f * d;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 4];
    for row in (0..4).rev() {
        let s: Complex64 = (row + 1..4).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    x.iter().all(|z| z.is_finite()).then_some(x)
}

const CONTINUATION_STEPS: usize = 64;
const NEWTON_ITERATIONS: usize = 60;
/// Solutions with a side weight beyond this are treated as divergent.
const MAX_WEIGHT: f64 = 1e8;

/// Leading small-`u` solution: `v_j v_k = u_i` for each corner `i` and
/// its two sides `j, k`, with `R = 1/2`.
fn small_u_seed(u: &[Complex64; 3], t: f64) -> Result<[Complex64; 4]> {
    if u.iter().any(|x| x.norm() < 1e-300) {
        return Err(QuonError::Singular);
    }
    let v0 = (u[1] * u[2] / u[0]).sqrt();
    let s = t.sqrt();
    Ok([v0 * s, u[2] / v0 * s, u[1] / v0 * s, Complex64::new(0.5, 0.0)])
}

/// `(v, R)` with `star(u) = R · triangle(v)` on all eight components.
/// Newton on the four even components, continued along `t·u` from the
/// small-`u` asymptotic solution. `v` and `-v` give the same triangle; the
/// branch is the one reached by the continuation.
pub fn star_triangle_solve(u: [Complex64; 3]) -> Result<StarTriangleSolution> {
    let schedule = |s: usize| (s as f64 / CONTINUATION_STEPS as f64).powi(2);
    let mut z = small_u_seed(&u, schedule(1))?;
    for step in 1..=CONTINUATION_STEPS {
        let target = star_even(&u.map(|x| x * schedule(step)));
        let scale = target.iter().map(|x| x.norm()).fold(1.0, f64::max);
        let mut converged = false;
        for _ in 0..NEWTON_ITERATIONS {
            let v = [z[0], z[1], z[2]];
            let (vals, grads) = triangle_even(&v);
            let f: [Complex64; 4] = std::array::from_fn(|n| z[3] * vals[n] - target[n]);
            let err = f.iter().map(|x| x.norm()).fold(0.0, f64::max);
            if err <= 1e-14 * scale {
                converged = true;
                break;
            }
            let jac: [[Complex64; 4]; 4] = std::array::from_fn(|n| [z[3] * grads[n][0], z[3] * grads[n][1], z[3] * grads[n][2], vals[n]]);
            let dz = solve4(jac, f.map(|x| -x)).ok_or(QuonError::Singular)?;
            for k in 0..4 {
                z[k] += dz[k];
            }
            if z.iter().any(|x| !x.is_finite() || x.norm() > MAX_WEIGHT) {
                return Err(QuonError::Singular);
            }
        }
        if !converged {
            return Err(QuonError::Singular);
        }
    }
    let sol = StarTriangleSolution { v: [z[0], z[1], z[2]], r: z[3] };
    if star_triangle_residual(u, &sol) > 1e-10 * star_even(&u).iter().map(|x| x.norm()).fold(1.0, f64::max) {
        return Err(QuonError::Singular);
    }
    Ok(sol)
}

/// Largest componentwise difference between the star and the solved triangle.
pub fn star_triangle_residual(u: [Complex64; 3], sol: &StarTriangleSolution) -> f64 {
    star_triangle_oracle(StarTriangleInput::Star { u }).max_abs_diff(&star_triangle_oracle(StarTriangleInput::Triangle { v: sol.v, r: sol.r }))
}
