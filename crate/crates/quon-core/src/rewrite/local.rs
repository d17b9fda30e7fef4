//! Two-strand operator algebra: strands `(j, j+1)` are represented by
//! `γ_j = σx`, `γ_{j+1} = σy`, so `iγ_jγ_{j+1} = -σz`.

use crate::majorana_ir::Element;
use num_complex::Complex64;

pub(crate) type M2 = [[Complex64; 2]; 2];

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn ident() -> M2 {
    [[z(1.0, 0.0), z(0.0, 0.0)], [z(0.0, 0.0), z(1.0, 0.0)]]
}

pub(crate) fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[z(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Matrix of an element acting inside strands `(j, j+1)`.
pub(crate) fn element_matrix(e: &Element, j: usize) -> Option<M2> {
    let zero = z(0.0, 0.0);
    match *e {
        Element::Dot { j: x } if x == j => Some([[zero, z(1.0, 0.0)], [z(1.0, 0.0), zero]]),
        Element::Dot { j: x } if x == j + 1 => Some([[zero, z(0.0, -1.0)], [z(0.0, 1.0), zero]]),
        Element::DotPair { j: a, k: b } if a == j && b == j + 1 => Some([[z(-1.0, 0.0), zero], [zero, z(1.0, 0.0)]]),
        _ if e.position() == j => {
            let (u, v) = e.quadratic_coeffs()?;
            Some([[u - v, zero], [zero, u + v]])
        }
        _ => None,
    }
}

/// Product of a time-ordered element list (first element applied first).
pub(crate) fn sequence_matrix(elems: &[Element], j: usize) -> Option<M2> {
    let mut m = ident();
    for e in elems {
        m = mul(&element_matrix(e, j)?, &m);
    }
    Some(m)
}

/// `c` with `lhs = c·rhs`, if the two are proportional.
pub(crate) fn ratio(lhs: &M2, rhs: &M2) -> Option<Complex64> {
    let (mut bi, mut bj, mut best) = (0, 0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            if rhs[i][j].norm() > best {
                best = rhs[i][j].norm();
                bi = i;
                bj = j;
            }
        }
    }
    if best < 1e-14 {
        return None;
    }
    let c = lhs[bi][bj] / rhs[bi][bj];
    let scale = lhs.iter().flatten().map(|x| x.norm()).fold(best, f64::max);
    for i in 0..2 {
        for j in 0..2 {
            if (lhs[i][j] - c * rhs[i][j]).norm() > 1e-12 * scale.max(1.0) {
                return None;
            }
        }
    }
    Some(c)
}

/// Scalar `c` such that `before = c·after` as time-ordered sequences.
pub(crate) fn relate(before: &[Element], after: &[Element], j: usize) -> Option<Complex64> {
    ratio(&sequence_matrix(before, j)?, &sequence_matrix(after, j)?)
}
