//! Circuits and elementary tensors to quon diagrams, dense-tensor
//! extraction, and interval-level tensor operations.
//!
//! Qubit `q` of a circuit lives on strands `4q..4q+4`; its logical `X` is
//! `iγ_{4q}γ_{4q+1}` and its logical `Z` is `iγ_{4q+1}γ_{4q+2}`.

mod circuit;
mod dense;
mod tensor_ops;

pub use circuit::{
    bits_to_index, circuit_oracle_amplitude, circuit_oracle_unitary, random_circuit, random_gate, simulate, Circuit, Gate, GateOp, ORACLE_QUBIT_LIMIT,
};
pub use dense::DenseTensor;
pub use tensor_ops::{
    compile_generator_tensor, compose_quon, contract_legs, leg_layout, quon_to_dense_tensor, rotate_star, ContractionMode, Generator,
    MAX_DENSE_LEGS,
};

use crate::error::Result;
use crate::majorana_ir::{Element, MajoranaDiagram, Orientation};
use crate::quon::{encode_basis, evaluate_closed_quon, BasisAssignment, ParityCut, QuonDiagram, StrandMark};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_8, PI, SQRT_2};

/// Phase removed from the sixteen-braid bundle crossing so it equals SWAP.
pub const SWAP_PHASE: Complex64 = Complex64::new(1.0, 0.0);

/// `XXRot(-π/2)`, written in `[0, 2π)`.
const XX_MINUS_QUARTER: f64 = 1.5 * PI;

struct Builder {
    elements: Vec<Element>,
    amplitude: Complex64,
    cuts: Vec<ParityCut>,
    marks: Vec<StrandMark>,
    /// Time just after the last XX gadget's cap, per neighboring pair.
    last_cap: Vec<Option<usize>>,
}

impl Builder {
    fn phase(&mut self, angle: f64) {
        self.amplitude *= Complex64::from_polar(1.0, angle);
    }

    fn single(&mut self, gate: Gate, q: usize) {
        let b = 4 * q;
        let e = &mut self.elements;
        match gate {
            Gate::X => e.push(Element::DotPair { j: b, k: b + 1 }),
            Gate::Z => e.push(Element::DotPair { j: b + 1, k: b + 2 }),
            Gate::Y => {
                e.push(Element::DotPair { j: b + 1, k: b + 2 });
                e.push(Element::DotPair { j: b, k: b + 1 });
                self.amplitude *= Complex64::i();
            }
            Gate::S => {
                e.push(Element::BraidNeg { j: b + 1 });
                self.phase(FRAC_PI_8);
            }
            Gate::Sinv => {
                e.push(Element::BraidPos { j: b + 1 });
                self.phase(-FRAC_PI_8);
            }
            Gate::RotXQuarter { positive: true } => {
                e.push(Element::BraidNeg { j: b });
                self.phase(FRAC_PI_8);
            }
            Gate::RotXQuarter { positive: false } => {
                e.push(Element::BraidPos { j: b });
                self.phase(-FRAC_PI_8);
            }
            Gate::H => {
                e.extend([Element::BraidNeg { j: b }, Element::BraidNeg { j: b + 1 }, Element::BraidNeg { j: b }]);
                self.phase(FRAC_PI_8);
            }
            Gate::Rz { theta } => {
                e.push(Element::Scattering { j: b + 1, theta: Complex64::new(theta, 0.0), orientation: Orientation::Vertical })
            }
            _ => unreachable!("two-qubit gate routed to single"),
        }
    }

    fn xx(&mut self, theta: f64, q: usize) {
        let b = 4 * q;
        if let Some(t) = self.last_cap[q] {
            self.cuts.push(ParityCut::new(t, (0..b + 4).collect()));
        }
        self.elements.extend([
            Element::Cup { j: b + 3 },
            Element::Scattering { j: b + 2, theta: Complex64::new(theta, 0.0), orientation: Orientation::Vertical },
            Element::Cap { j: b + 3 },
        ]);
        self.amplitude *= SQRT_2;
        let t = self.elements.len();
        self.last_cap[q] = Some(t);
        self.marks.push(StrandMark { time_index: t, position: b + 3 });
    }

    fn gate(&mut self, op: &GateOp) {
        let q = op.qubit;
        let rx = Gate::RotXQuarter { positive: true };
        match op.gate {
            Gate::XXRot { theta } => self.xx(theta, q),
            Gate::Cnot { control_left } => {
                let (c, t) = if control_left { (q, q + 1) } else { (q + 1, q) };
                self.single(Gate::H, c);
                self.single(rx, t);
                self.xx(XX_MINUS_QUARTER, q);
                self.single(rx, c);
                self.single(Gate::H, c);
            }
            Gate::Cz => {
                self.single(Gate::H, q);
                self.single(Gate::H, q + 1);
                self.xx(XX_MINUS_QUARTER, q);
                self.single(Gate::H, q);
                self.single(Gate::H, q + 1);
                self.single(Gate::S, q);
                self.single(Gate::S, q + 1);
            }
            Gate::Swap => {
                let b = 4 * q;
                let t = self.elements.len();
                self.cuts.push(ParityCut::new(t, (b..b + 4).collect()));
                self.cuts.push(ParityCut::new(t, (b + 4..b + 8).collect()));
                self.elements.extend(swap_braids(b));
                self.amplitude *= SWAP_PHASE;
            }
            g => self.single(g, q),
        }
    }
}

/// Sixteen positive braids carrying the bundle on `b+4..b+8` leftwards
/// across the bundle on `b..b+4`.
pub fn swap_braids(b: usize) -> Vec<Element> {
    (0..4).flat_map(|s| (0..4).rev().map(move |k| Element::BraidPos { j: b + k + s })).collect()
}

/// Four strands per qubit with one 4-strand open interval per qubit on each
/// side. XX gadgets carry a parity cut on the face they close with the
/// previous gadget on the same pair; SWAP carries one cut per bundle.
/// Strands `4q` and `4q+3` are marked as boundary-tracking.
pub fn compile_circuit(c: &Circuit) -> Result<QuonDiagram> {
    c.validate()?;
    let n = c.n_qubits;
    let mut b = Builder {
        elements: vec![],
        amplitude: Complex64::new(1.0, 0.0),
        cuts: vec![],
        marks: (0..n).flat_map(|q| [StrandMark { time_index: 0, position: 4 * q }, StrandMark { time_index: 0, position: 4 * q + 3 }]).collect(),
        last_cap: vec![None; n.saturating_sub(1)],
    };
    for op in &c.gates {
        b.gate(op);
    }
    let core = MajoranaDiagram::new(4 * n, b.elements, b.amplitude)?;
    let sizes = vec![4; n];
    let mut q = QuonDiagram::with_intervals(core, &sizes, &sizes)?;
    q.parity_cuts = b.cuts;
    q.boundary_tracking = Some(b.marks);
    q.validate()?;
    Ok(q)
}

/// `⟨bits_out| U(c) |bits_in⟩` from the compiled diagram.
pub fn circuit_amplitude(c: &Circuit, bits_in: &[u8], bits_out: &[u8]) -> Result<Complex64> {
    let q = compile_circuit(c)?;
    let bits: Vec<Vec<u8>> = bits_in.iter().chain(bits_out).map(|&b| vec![b]).collect();
    if bits_in.len() != c.n_qubits || bits_out.len() != c.n_qubits {
        let got = if bits_in.len() != c.n_qubits { bits_in.len() } else { bits_out.len() };
        return Err(crate::error::QuonError::BitLengthMismatch { expected: c.n_qubits, got });
    }
    evaluate_closed_quon(&encode_basis(&q, &BasisAssignment { bits })?)
}

/// Dense `U[out][in]` of a diagram with one single-qubit interval per qubit
/// on each side, re-indexed from the counterclockwise leg order.
pub fn quon_matrix(q: &QuonDiagram) -> Result<DenseTensor> {
    let t = quon_to_dense_tensor(q)?;
    let n = t.rank / 2;
    let order: Vec<usize> = (0..n).chain((n..2 * n).rev()).collect();
    Ok(t.permuted(&order))
}
