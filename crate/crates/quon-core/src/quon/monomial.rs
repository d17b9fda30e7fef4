//! Majorana monomials `c·γ_{a₁}γ_{a₂}…` with normal ordering, used to
//! compute the sign a parity string picks up under braid conjugation.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub gammas: Vec<usize>,
}

impl Monomial {
    /// The sorted parity string `Π (iγ_{s₂ₖ}γ_{s₂ₖ₊₁})`.
    pub fn parity(strands: &[usize]) -> Self {
        let mut s = strands.to_vec();
        s.sort_unstable();
        let i_pow = s.len() / 2;
        Monomial { coeff: Complex64::i().powu(i_pow as u32), gammas: s }
    }

    /// Sorts the generators, applying anticommutation signs and `γ² = 1`.
    pub fn normalized(mut self) -> Self {
        let g = &mut self.gammas;
        let mut sign = 1.0;
        for i in 1..g.len() {
            let mut k = i;
            while k > 0 && g[k - 1] > g[k] {
                g.swap(k - 1, k);
                sign = -sign;
                k -= 1;
            }
        }
        let mut out = Vec::with_capacity(g.len());
        for &x in g.iter() {
            if out.last() == Some(&x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Monomial { coeff: self.coeff * sign, gammas: out }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut gammas = self.gammas.clone();
        gammas.extend_from_slice(&other.gammas);
        Monomial { coeff: self.coeff * other.coeff, gammas }.normalized()
    }

    /// Conjugation `B M B⁻¹` by a braid on `(j, j+1)`.
    pub fn conjugate_braid(&self, j: usize, positive: bool) -> Monomial {
        let mut coeff = self.coeff;
        let gammas = self
            .gammas
            .iter()
            .map(|&x| {
                if x == j {
                    if !positive {
                        coeff = -coeff;
                    }
                    j + 1
                } else if x == j + 1 {
                    if positive {
                        coeff = -coeff;
                    }
                    j
                } else {
                    x
                }
            })
            .collect();
        Monomial { coeff, gammas }.normalized()
    }
}
