//! Qubit circuits and the matrix-product reference simulator.
//! Qubit 0 is the most significant bit of a basis index.

use super::dense::DenseTensor;
use crate::error::{QuonError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, TAU};

/// Largest qubit count the dense oracle accepts.
pub const ORACLE_QUBIT_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    X,
    Y,
    Z,
    S,
    Sinv,
    H,
    /// `e^{±iπ/4} e^{∓iπ/4 X}` for `positive = true/false`.
    RotXQuarter { positive: bool },
    /// `e^{iθ/2} e^{-iθ/2 Z} = diag(1, e^{iθ})`.
    Rz { theta: f64 },
    /// `e^{iθ/2} e^{-iθ/2 X⊗X}`.
    XXRot { theta: f64 },
    Cnot { control_left: bool },
    Cz,
    Swap,
}

impl Gate {
    pub fn arity(&self) -> usize {
        match self {
            Gate::XXRot { .. } | Gate::Cnot { .. } | Gate::Cz | Gate::Swap => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::S => "S",
            Gate::Sinv => "SDG",
            Gate::H => "H",
            Gate::RotXQuarter { positive: true } => "RXQ+",
            Gate::RotXQuarter { positive: false } => "RXQ-",
            Gate::Rz { .. } => "RZ",
            Gate::XXRot { .. } => "XX",
            Gate::Cnot { control_left: true } => "CNOT",
            Gate::Cnot { control_left: false } => "CNOTR",
            Gate::Cz => "CZ",
            Gate::Swap => "SWAP",
        }
    }

    fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rz { theta } | Gate::XXRot { theta } => Some(theta),
            _ => None,
        }
    }

    /// Row-major matrix; for two-qubit gates the left qubit is the high bit.
    pub fn matrix(&self) -> Vec<Vec<Complex64>> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        let h = c(FRAC_1_SQRT_2, 0.0);
        match *self {
            Gate::X => vec![vec![o, l], vec![l, o]],
            Gate::Y => vec![vec![o, -i], vec![i, o]],
            Gate::Z => vec![vec![l, o], vec![o, -l]],
            Gate::S => vec![vec![l, o], vec![o, i]],
            Gate::Sinv => vec![vec![l, o], vec![o, -i]],
            Gate::H => vec![vec![h, h], vec![h, -h]],
            Gate::RotXQuarter { positive } => {
                // e^{±iπ/4}(cos π/4 ∓ i sin π/4 X)
                let s = if positive { 1.0 } else { -1.0 };
                let ph = Complex64::from_polar(1.0, s * FRAC_PI_4);
                let a = ph * h;
                let b = ph * c(0.0, -s * FRAC_1_SQRT_2);
                vec![vec![a, b], vec![b, a]]
            }
            Gate::Rz { theta } => vec![vec![l, o], vec![o, Complex64::from_polar(1.0, theta)]],
            Gate::XXRot { theta } => {
                let ph = Complex64::from_polar(1.0, theta / 2.0);
                let a = ph * (theta / 2.0).cos();
                let b = ph * c(0.0, -(theta / 2.0).sin());
                vec![vec![a, o, o, b], vec![o, a, b, o], vec![o, b, a, o], vec![b, o, o, a]]
            }
            Gate::Cnot { control_left: true } => {
                vec![vec![l, o, o, o], vec![o, l, o, o], vec![o, o, o, l], vec![o, o, l, o]]
            }
            Gate::Cnot { control_left: false } => {
                vec![vec![l, o, o, o], vec![o, o, o, l], vec![o, o, l, o], vec![o, l, o, o]]
            }
            Gate::Cz => vec![vec![l, o, o, o], vec![o, l, o, o], vec![o, o, l, o], vec![o, o, o, -l]],
            Gate::Swap => vec![vec![l, o, o, o], vec![o, o, l, o], vec![o, l, o, o], vec![o, o, o, l]],
        }
    }
}

/// A gate acting on `qubit` (and `qubit + 1` for two-qubit gates).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub gate: Gate,
    pub qubit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: vec![] }
    }

    /// Appends `gate` on `qubits`; two-qubit gates need neighbors `q, q+1`.
    pub fn push(&mut self, gate: Gate, qubits: &[usize]) -> Result<&mut Self> {
        if qubits.len() != gate.arity() {
            return Err(QuonError::InvalidCircuit(format!("{} takes {} qubit(s)", gate.name(), gate.arity())));
        }
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.n_qubits) {
            return Err(QuonError::InvalidCircuit(format!("qubit {q} out of range for {} qubits", self.n_qubits)));
        }
        if let Some(theta) = gate.angle() {
            if !(0.0..TAU).contains(&theta) {
                return Err(QuonError::InvalidCircuit(format!("angle {theta} outside [0, 2π)")));
            }
        }
        let qubit = match *qubits {
            [a] => a,
            [a, b] if b == a + 1 => a,
            [a, b] if a == b + 1 => {
                // Reversed operand order: re-express relative to the left qubit.
                return self.push(mirror(gate), &[b, a]);
            }
            [a, b] => return Err(QuonError::NonAdjacentTwoQubitGate(a, b)),
            _ => unreachable!("arity checked"),
        };
        self.gates.push(GateOp { gate, qubit });
        Ok(self)
    }

    pub fn with(mut self, gate: Gate, qubits: &[usize]) -> Result<Self> {
        self.push(gate, qubits)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let mut c = Circuit::new(self.n_qubits);
        for op in &self.gates {
            let qs: Vec<usize> = (op.qubit..op.qubit + op.gate.arity()).collect();
            c.push(op.gate, &qs)?;
        }
        Ok(())
    }

    /// Circuit of `self` followed by `other`.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if self.n_qubits != other.n_qubits {
            return Err(QuonError::InvalidCircuit("qubit counts differ".into()));
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Ok(Circuit { n_qubits: self.n_qubits, gates })
    }
}

fn mirror(gate: Gate) -> Gate {
    match gate {
        Gate::Cnot { control_left } => Gate::Cnot { control_left: !control_left },
        g => g,
    }
}

fn apply_op(state: &mut [Complex64], n: usize, op: &GateOp) {
    let m = op.gate.matrix();
    let k = op.gate.arity();
    let shift = n - op.qubit - k;
    let mask = ((1usize << k) - 1) << shift;
    for base in 0..state.len() {
        if base & mask != 0 {
            continue;
        }
        let idx: Vec<usize> = (0..1usize << k).map(|s| base | s << shift).collect();
        let old: Vec<Complex64> = idx.iter().map(|&i| state[i]).collect();
        for (r, &i) in idx.iter().enumerate() {
            state[i] = m[r].iter().zip(&old).map(|(a, b)| a * b).sum();
        }
    }
}

/// `U|ψ⟩` by sequential gate application.
pub fn simulate(c: &Circuit, state: &[Complex64]) -> Vec<Complex64> {
    let mut s = state.to_vec();
    for op in &c.gates {
        apply_op(&mut s, c.n_qubits, op);
    }
    s
}

pub fn bits_to_index(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| acc << 1 | (b & 1) as usize)
}

/// The circuit unitary as a rank-`2n` tensor, output legs first.
pub fn circuit_oracle_unitary(c: &Circuit) -> Result<DenseTensor> {
    if c.n_qubits > ORACLE_QUBIT_LIMIT {
        return Err(QuonError::TooLarge(format!("{} qubits exceed the oracle limit {ORACLE_QUBIT_LIMIT}", c.n_qubits)));
    }
    let dim = 1usize << c.n_qubits;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for input in 0..dim {
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[input] = Complex64::new(1.0, 0.0);
        for (out, v) in simulate(c, &e).into_iter().enumerate() {
            m[out][input] = v;
        }
    }
    Ok(DenseTensor::from_matrix(c.n_qubits, &m))
}

/// `⟨bits_out| U |bits_in⟩` from the state-vector simulator.
pub fn circuit_oracle_amplitude(c: &Circuit, bits_in: &[u8], bits_out: &[u8]) -> Result<Complex64> {
    if bits_in.len() != c.n_qubits || bits_out.len() != c.n_qubits {
        let got = if bits_in.len() != c.n_qubits { bits_in.len() } else { bits_out.len() };
        return Err(QuonError::BitLengthMismatch { expected: c.n_qubits, got });
    }
    let mut e = vec![Complex64::new(0.0, 0.0); 1 << c.n_qubits];
    e[bits_to_index(bits_in)] = Complex64::new(1.0, 0.0);
    Ok(simulate(c, &e)[bits_to_index(bits_out)])
}

/// Every gate kind, with a random angle where one is taken.
pub fn random_gate<R: rand::Rng>(rng: &mut R, allow_two_qubit: bool) -> Gate {
    let n_kinds = if allow_two_qubit { 14 } else { 9 };
    match rng.random_range(0..n_kinds) {
        0 => Gate::X,
        1 => Gate::Y,
        2 => Gate::Z,
        3 => Gate::S,
        4 => Gate::Sinv,
        5 => Gate::H,
        6 => Gate::RotXQuarter { positive: rng.random_bool(0.5) },
        7 | 8 => Gate::Rz { theta: rng.random_range(0.0..TAU) },
        9 => Gate::XXRot { theta: rng.random_range(0.0..TAU) },
        10 => Gate::Cnot { control_left: rng.random_bool(0.5) },
        11 => Gate::Cz,
        _ => Gate::Swap,
    }
}

/// `depth` gates drawn uniformly from the full gate set on random positions.
pub fn random_circuit<R: rand::Rng>(rng: &mut R, n_qubits: usize, depth: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    for _ in 0..depth {
        let g = random_gate(rng, n_qubits >= 2);
        let q = rng.random_range(0..=n_qubits - g.arity());
        let qs: Vec<usize> = (q..q + g.arity()).collect();
        c.push(g, &qs).expect("random gate is in range");
    }
    c
}
