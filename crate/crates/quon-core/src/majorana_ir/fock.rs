//! Jordan–Wigner state-vector oracle. Strand `2k` is `Z_{<k}X_k` and strand
//! `2k+1` is `-Z_{<k}Y_k`, so `iγ_{2k}γ_{2k+1} = Z_k`. Qubit `k` is bit `k`.

use super::{Element, MajoranaDiagram};
use crate::error::{QuonError, Result};
use num_complex::Complex64;

/// Default maximum strand count the oracle accepts.
pub const ORACLE_LIMIT: usize = 20;

const FOURTH_ROOT_2: f64 = 1.189_207_115_002_721;

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub n_strands: usize,
    pub amplitudes: Vec<Complex64>,
}

impl FockState {
    /// The one-dimensional state of zero strands.
    pub fn unit() -> Self {
        Self { n_strands: 0, amplitudes: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn basis(n_strands: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << (n_strands / 2)];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { n_strands, amplitudes }
    }

    pub fn zero_like(&self) -> Self {
        Self { n_strands: self.n_strands, amplitudes: vec![Complex64::new(0.0, 0.0); self.amplitudes.len()] }
    }

    pub fn scale(&mut self, s: Complex64) {
        for a in &mut self.amplitudes {
            *a *= s;
        }
    }

    pub fn add_scaled(&mut self, other: &FockState, s: Complex64) {
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += s * b;
        }
    }

    pub fn inner(&self, other: &FockState) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// `γ_j |ψ⟩`.
    pub fn gamma(&self, j: usize) -> FockState {
        let k = j / 2;
        let bit = 1usize << k;
        let below = bit - 1;
        let mut out = self.zero_like();
        for (idx, &a) in self.amplitudes.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let sign = if (idx & below).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            let phase = if j.is_multiple_of(2) {
                Complex64::new(sign, 0.0)
            } else if idx & bit == 0 {
                Complex64::new(0.0, -sign)
            } else {
                Complex64::new(0.0, sign)
            };
            out.amplitudes[idx ^ bit] += phase * a;
        }
        out
    }

    /// `iγ_jγ_k |ψ⟩`.
    pub fn pair(&self, j: usize, k: usize) -> FockState {
        let mut s = self.gamma(k).gamma(j);
        s.scale(Complex64::i());
        s
    }

    /// Global parity of strands `strands` (sorted, paired left to right).
    pub fn parity_string(&self, strands: &[usize]) -> FockState {
        let mut sorted = strands.to_vec();
        sorted.sort_unstable();
        let mut s = self.clone();
        for ch in sorted.chunks(2).rev() {
            s = s.pair(ch[0], ch[1]);
        }
        s
    }

    /// `½(1 + P_S)|ψ⟩`.
    pub fn project_even(&self, strands: &[usize]) -> FockState {
        let mut out = self.parity_string(strands);
        out.add_scaled(self, Complex64::new(1.0, 0.0));
        out.scale(Complex64::new(0.5, 0.0));
        out
    }

    fn cap(&self, j: usize) -> FockState {
        let n = self.n_strands / 2;
        let k = j / 2;
        let mut out = FockState {
            n_strands: self.n_strands + 2,
            amplitudes: vec![Complex64::new(0.0, 0.0); 1 << (n + 1)],
        };
        let low = (1usize << k) - 1;
        if j.is_multiple_of(2) {
            for (idx, &a) in self.amplitudes.iter().enumerate() {
                let new = (idx & low) | ((idx & !low) << 1);
                out.amplitudes[new] = a * FOURTH_ROOT_2;
            }
        } else {
            let s = 1.0 / FOURTH_ROOT_2;
            for (idx, &a) in self.amplitudes.iter().enumerate() {
                let pk = (idx >> k) & 1;
                let rest = (idx & low) | ((idx >> (k + 1)) << (k + 2));
                for p in 0..2usize {
                    let new = rest | (p << k) | ((p ^ pk) << (k + 1));
                    out.amplitudes[new] += a * s;
                }
            }
        }
        out
    }

    fn cup(&self, j: usize) -> FockState {
        let n = self.n_strands / 2;
        let k = j / 2;
        let mut out = FockState {
            n_strands: self.n_strands - 2,
            amplitudes: vec![Complex64::new(0.0, 0.0); 1 << (n - 1)],
        };
        let low = (1usize << k) - 1;
        if j.is_multiple_of(2) {
            for (new, slot) in out.amplitudes.iter_mut().enumerate() {
                let idx = (new & low) | ((new & !low) << 1);
                *slot = self.amplitudes[idx] * FOURTH_ROOT_2;
            }
        } else {
            let s = 1.0 / FOURTH_ROOT_2;
            for (new, slot) in out.amplitudes.iter_mut().enumerate() {
                let pk = (new >> k) & 1;
                let rest = (new & low) | ((new >> (k + 1)) << (k + 2));
                for p in 0..2usize {
                    let idx = rest | (p << k) | ((p ^ pk) << (k + 1));
                    *slot += self.amplitudes[idx] * s;
                }
            }
        }
        out
    }

    /// Applies one element.
    pub fn apply(&self, e: &Element) -> FockState {
        match *e {
            Element::Cap { j } => self.cap(j),
            Element::Cup { j } => self.cup(j),
            Element::Dot { j } => self.gamma(j),
            Element::DotPair { j, k } => self.pair(j, k),
            _ => {
                let (u, v) = e.quadratic_coeffs().expect("two-strand element");
                let j = e.position();
                let mut out = self.pair(j, j + 1);
                out.scale(v);
                out.add_scaled(self, u);
                out
            }
        }
    }
}

/// Applies every element of `d` (ignoring its amplitude) to `state`.
pub fn apply_diagram(d: &MajoranaDiagram, state: &FockState) -> FockState {
    d.elements.iter().fold(state.clone(), |s, e| s.apply(e))
}

/// Exact value of a closed diagram, including its amplitude.
pub fn evaluate_closed_oracle(d: &MajoranaDiagram) -> Result<Complex64> {
    evaluate_with_projections(d, &[])
}

/// Exact value of a closed diagram with parity projections `(time, strands)`
/// applied directly before the element at `time`.
pub fn evaluate_with_projections(d: &MajoranaDiagram, cuts: &[(usize, Vec<usize>)]) -> Result<Complex64> {
    if !d.is_closed() {
        return Err(QuonError::NotClosed);
    }
    let w = d.max_width();
    if w > ORACLE_LIMIT {
        return Err(QuonError::OracleTooLarge(w));
    }
    let mut s = FockState::unit();
    for t in 0..=d.elements.len() {
        for (_, strands) in cuts.iter().filter(|(time, _)| *time == t) {
            s = s.project_even(strands);
        }
        if let Some(e) = d.elements.get(t) {
            s = s.apply(e);
        }
    }
    Ok(s.amplitudes[0] * d.amplitude)
}

/// Dense matrix (row = output basis index) of one element on `width` strands.
pub fn element_operator(width: usize, e: &Element) -> Vec<Vec<Complex64>> {
    let dim_in = 1usize << (width / 2);
    let mut cols = Vec::with_capacity(dim_in);
    for i in 0..dim_in {
        cols.push(FockState::basis(width, i).apply(e).amplitudes);
    }
    let dim_out = cols.first().map_or(1, Vec::len);
    (0..dim_out).map(|r| cols.iter().map(|col| col[r]).collect()).collect()
}
