//! Majorana diagram IR: elements, diagram algebra, and the Fock-space oracle.

mod fock;
pub mod random;

pub use fock::{apply_diagram, element_operator, evaluate_closed_oracle, evaluate_with_projections, FockState, ORACLE_LIMIT};

use crate::error::{QuonError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, SQRT_2};

/// Tolerance for deciding whether a scattering angle is a multiple of π/2.
pub const EPS_ANGLE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Connected direction runs along time: `(1+e^{iθ})/2 + (1-e^{iθ})/2·P`.
    Vertical,
    /// Connected direction runs across time: `1 + e^{iφ}·P`.
    Horizontal,
}

/// A strand-local diagram element. Positions are absolute strand indices at
/// the slice where the element acts; `P` below is `iγ_jγ_{j+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Element {
    Cap { j: usize },
    Cup { j: usize },
    Dot { j: usize },
    DotPair { j: usize, k: usize },
    BraidPos { j: usize },
    BraidNeg { j: usize },
    Scattering { j: usize, theta: Complex64, orientation: Orientation },
    ScatteringStar { j: usize, phi: Complex64, orientation: Orientation },
}

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn expi(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// `e^{iθ}` for complex θ.
pub(crate) fn expi_c(theta: Complex64) -> Complex64 {
    (Complex64::i() * theta).exp()
}

/// Returns `k mod 4` when `θ ≡ kπ/2` within [`EPS_ANGLE`].
pub fn quarter_turns(theta: Complex64) -> Option<u8> {
    if theta.im.abs() > EPS_ANGLE {
        return None;
    }
    let q = theta.re / FRAC_PI_2;
    let k = q.round();
    if ((q - k) * FRAC_PI_2).abs() > EPS_ANGLE {
        return None;
    }
    Some((k as i64).rem_euclid(4) as u8)
}

/// A scattering angle is generic when it is not a multiple of π/2.
pub fn is_generic_angle(theta: Complex64) -> bool {
    quarter_turns(theta).is_none()
}

impl Element {
    pub fn position(&self) -> usize {
        match *self {
            Element::Cap { j }
            | Element::Cup { j }
            | Element::Dot { j }
            | Element::DotPair { j, .. }
            | Element::BraidPos { j }
            | Element::BraidNeg { j }
            | Element::Scattering { j, .. }
            | Element::ScatteringStar { j, .. } => j,
        }
    }

    /// Strand positions the element touches, on its input side.
    /// Caps touch the two strands they create.
    pub fn touched(&self) -> Vec<usize> {
        match *self {
            Element::Dot { j } => vec![j],
            Element::DotPair { j, k } => vec![j, k],
            e => vec![e.position(), e.position() + 1],
        }
    }

    /// Net change in width.
    pub fn width_delta(&self) -> isize {
        match self {
            Element::Cap { .. } => 2,
            Element::Cup { .. } => -2,
            _ => 0,
        }
    }

    /// Fermion parity of the operator: only single dots are odd.
    pub fn is_odd(&self) -> bool {
        matches!(self, Element::Dot { .. })
    }

    pub fn is_cap_or_cup(&self) -> bool {
        matches!(self, Element::Cap { .. } | Element::Cup { .. })
    }

    pub fn is_braid(&self) -> bool {
        matches!(self, Element::BraidPos { .. } | Element::BraidNeg { .. })
    }

    pub fn is_scattering(&self) -> bool {
        matches!(self, Element::Scattering { .. } | Element::ScatteringStar { .. })
    }

    /// Equivalent vertical-convention angle θ for scatterings.
    pub fn vertical_theta(&self) -> Option<Complex64> {
        match *self {
            Element::Scattering { theta, orientation: Orientation::Vertical, .. } => Some(theta),
            Element::ScatteringStar { phi, orientation: Orientation::Vertical, .. } => {
                Some(-Complex64::i() * phi)
            }
            _ => None,
        }
    }

    /// The raw angle stored on a scattering, in the θ convention
    /// (a star angle φ is reported as `-iφ`).
    pub fn theta_equivalent(&self) -> Option<Complex64> {
        match *self {
            Element::Scattering { theta, .. } => Some(theta),
            Element::ScatteringStar { phi, .. } => Some(-Complex64::i() * phi),
            _ => None,
        }
    }

    /// A scattering whose angle is not a multiple of π/2.
    pub fn is_generic_scattering(&self) -> bool {
        self.theta_equivalent().is_some_and(is_generic_angle)
    }

    /// Coefficients `(u, v)` with operator `u + v·P` on strands `(j, j+1)`.
    pub fn quadratic_coeffs(&self) -> Option<(Complex64, Complex64)> {
        let half = 0.5;
        match *self {
            Element::BraidPos { .. } => {
                let p = expi(-FRAC_PI_8) / SQRT_2;
                Some((p, Complex64::i() * p))
            }
            Element::BraidNeg { .. } => {
                let p = expi(FRAC_PI_8) / SQRT_2;
                Some((p, -Complex64::i() * p))
            }
            Element::Scattering { .. } | Element::ScatteringStar { .. } => {
                let (orientation, e) = match *self {
                    Element::Scattering { theta, orientation, .. } => (orientation, expi_c(theta)),
                    Element::ScatteringStar { phi, orientation, .. } => (orientation, phi.exp()),
                    _ => unreachable!(),
                };
                match orientation {
                    Orientation::Vertical => Some(((1.0 + e) * half, (1.0 - e) * half)),
                    Orientation::Horizontal => Some((Complex64::new(1.0, 0.0), e)),
                }
            }
            _ => None,
        }
    }

    /// Same element with every position moved by `delta`.
    pub fn shifted(&self, delta: isize) -> Element {
        let s = |x: usize| (x as isize + delta) as usize;
        let mut e = *self;
        match &mut e {
            Element::DotPair { j, k } => {
                *j = s(*j);
                *k = s(*k);
            }
            Element::Cap { j }
            | Element::Cup { j }
            | Element::Dot { j }
            | Element::BraidPos { j }
            | Element::BraidNeg { j }
            | Element::Scattering { j, .. }
            | Element::ScatteringStar { j, .. } => *j = s(*j),
        }
        e
    }

    /// Vertical reflection of the element.
    pub fn dagger(&self) -> Element {
        match *self {
            Element::Cap { j } => Element::Cup { j },
            Element::Cup { j } => Element::Cap { j },
            Element::BraidPos { j } => Element::BraidNeg { j },
            Element::BraidNeg { j } => Element::BraidPos { j },
            Element::Scattering { j, theta, orientation } => {
                Element::Scattering { j, theta: -theta.conj(), orientation }
            }
            Element::ScatteringStar { j, phi, orientation } => {
                let phi = match orientation {
                    Orientation::Vertical => phi.conj(),
                    Orientation::Horizontal => -phi.conj(),
                };
                Element::ScatteringStar { j, phi, orientation }
            }
            e => e,
        }
    }

    fn check(&self, width: usize) -> std::result::Result<(), String> {
        let ok = match *self {
            Element::Cap { j } => j <= width,
            Element::Dot { j } => j < width,
            Element::DotPair { j, k } => j < k && k < width,
            e => e.position() + 2 <= width,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("{self:?} out of range at width {width}"))
        }
    }
}

/// An ordered sequence of elements applied top to bottom, with a scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajoranaDiagram {
    pub width_in: usize,
    pub width_out: usize,
    pub elements: Vec<Element>,
    pub amplitude: Complex64,
}

impl MajoranaDiagram {
    /// Builds a diagram, replaying widths to compute `width_out`.
    pub fn new(width_in: usize, elements: Vec<Element>, amplitude: Complex64) -> Result<Self> {
        let width_out = replay_widths(width_in, &elements)?;
        Ok(Self { width_in, width_out, elements, amplitude })
    }

    pub fn closed(elements: Vec<Element>, amplitude: Complex64) -> Result<Self> {
        let d = Self::new(0, elements, amplitude)?;
        if d.width_out != 0 {
            return Err(QuonError::NotClosed);
        }
        Ok(d)
    }

    pub fn identity(width: usize) -> Self {
        Self { width_in: width, width_out: width, elements: vec![], amplitude: Complex64::new(1.0, 0.0) }
    }

    pub fn empty() -> Self {
        Self::identity(0)
    }

    /// Cap immediately followed by cup: a single closed loop.
    pub fn loop_diagram() -> Self {
        Self::closed(vec![Element::Cap { j: 0 }, Element::Cup { j: 0 }], Complex64::new(1.0, 0.0))
            .expect("loop is well formed")
    }

    pub fn is_closed(&self) -> bool {
        self.width_in == 0 && self.width_out == 0
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Re-checks all structural invariants.
    pub fn validate(&self) -> Result<()> {
        let w = replay_widths(self.width_in, &self.elements)?;
        if w != self.width_out {
            return Err(QuonError::InvalidDiagram(format!(
                "declared width_out {} but replay gives {w}",
                self.width_out
            )));
        }
        Ok(())
    }

    /// Width before each element, plus the final width (length `len()+1`).
    pub fn widths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.elements.len() + 1);
        let mut w = self.width_in as isize;
        out.push(w as usize);
        for e in &self.elements {
            w += e.width_delta();
            out.push(w as usize);
        }
        out
    }

    pub fn max_width(&self) -> usize {
        self.widths().into_iter().max().unwrap_or(0)
    }

    pub fn dot_count(&self) -> usize {
        self.elements
            .iter()
            .map(|e| match e {
                Element::Dot { .. } => 1,
                Element::DotPair { .. } => 2,
                _ => 0,
            })
            .sum()
    }

    /// Vertical gluing: `top` is applied first.
    pub fn compose(top: &MajoranaDiagram, bottom: &MajoranaDiagram) -> Result<MajoranaDiagram> {
        if top.width_out != bottom.width_in {
            return Err(QuonError::WidthMismatch(top.width_out, bottom.width_in));
        }
        let mut elements = top.elements.clone();
        elements.extend_from_slice(&bottom.elements);
        Ok(MajoranaDiagram {
            width_in: top.width_in,
            width_out: bottom.width_out,
            elements,
            amplitude: top.amplitude * bottom.amplitude,
        })
    }

    /// Horizontal gluing: `right` sits to the right of `left`.
    pub fn tensor_product(left: &MajoranaDiagram, right: &MajoranaDiagram) -> MajoranaDiagram {
        let mut elements = left.elements.clone();
        let offset = left.width_out as isize;
        elements.extend(right.elements.iter().map(|e| e.shifted(offset)));
        MajoranaDiagram {
            width_in: left.width_in + right.width_in,
            width_out: left.width_out + right.width_out,
            elements,
            amplitude: left.amplitude * right.amplitude,
        }
    }

    pub fn dagger(&self) -> MajoranaDiagram {
        MajoranaDiagram {
            width_in: self.width_out,
            width_out: self.width_in,
            elements: self.elements.iter().rev().map(Element::dagger).collect(),
            amplitude: self.amplitude.conj(),
        }
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }
}

fn replay_widths(width_in: usize, elements: &[Element]) -> Result<usize> {
    if !width_in.is_multiple_of(2) {
        return Err(QuonError::InvalidDiagram(format!("odd input width {width_in}")));
    }
    let mut w = width_in;
    for (idx, e) in elements.iter().enumerate() {
        e.check(w).map_err(|m| QuonError::InvalidDiagram(format!("element {idx}: {m}")))?;
        w = (w as isize + e.width_delta()) as usize;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turn_detection() {
        assert_eq!(quarter_turns(c(-FRAC_PI_2, 0.0)), Some(3));
        assert_eq!(quarter_turns(c(std::f64::consts::PI, 0.0)), Some(2));
        assert_eq!(quarter_turns(c(0.3, 0.0)), None);
        assert_eq!(quarter_turns(c(0.0, 0.2)), None);
    }

    #[test]
    fn replay_rejects_out_of_range() {
        assert!(MajoranaDiagram::new(2, vec![Element::BraidPos { j: 1 }], c(1.0, 0.0)).is_err());
        assert!(MajoranaDiagram::new(3, vec![], c(1.0, 0.0)).is_err());
        assert!(MajoranaDiagram::new(0, vec![Element::Cup { j: 0 }], c(1.0, 0.0)).is_err());
    }

    #[test]
    fn compose_width_mismatch() {
        let a = MajoranaDiagram::new(0, vec![Element::Cap { j: 0 }], c(1.0, 0.0)).unwrap();
        let b = MajoranaDiagram::new(4, vec![Element::Cup { j: 0 }, Element::Cup { j: 0 }], c(1.0, 0.0)).unwrap();
        assert_eq!(MajoranaDiagram::compose(&a, &b), Err(QuonError::WidthMismatch(2, 4)));
    }

    #[test]
    fn dagger_flips_angles_and_amplitude() {
        let d = MajoranaDiagram::new(
            2,
            vec![Element::Scattering { j: 0, theta: c(0.3, 0.0), orientation: Orientation::Vertical }],
            c(1.0, 2.0),
        )
        .unwrap();
        let dd = d.dagger();
        assert_eq!(dd.amplitude, c(1.0, -2.0));
        match dd.elements[0] {
            Element::Scattering { theta, .. } => assert_eq!(theta, c(-0.3, 0.0)),
            _ => panic!(),
        }
        assert_eq!(dd.dagger(), d);
    }
}
