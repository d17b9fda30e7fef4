//! Polynomial-time evaluation of closed Majorana diagrams.
//!
//! Every strand created by a cap gets a global label. Caps and cups fix the
//! ket and bra vacua; elements become Majorana monomials on labels. The
//! expectation of the time-ordered product between the two vacua is a single
//! Pfaffian (Wick's theorem), and the bare cap/cup skeleton contributes
//! `√2` per closed loop.
//!
//! Element `u + v·iγ_aγ_b` becomes an optional slot pair: the pair entry
//! carries `u`, and the slot weights multiply to `iv`, so matchings that use
//! the pair internally pick `u + iv⟨γ_aγ_b⟩` and matchings that route both
//! slots outward pick `iv`.

use crate::error::{QuonError, Result};
use crate::majorana_ir::{Element, MajoranaDiagram};
use crate::pfaffian::{pfaffian_log, LogPfaffian};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default)]
struct Label {
    cap_partner: usize,
    cap_left: bool,
    cup_partner: usize,
    cup_left: bool,
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    label: usize,
    weight: Complex64,
    /// `Some(u)` on the first slot of an optional pair.
    pair_diag: Option<Complex64>,
}

/// Evaluates a closed diagram in polynomial time.
pub fn evaluate_closed_fast(d: &MajoranaDiagram) -> Result<Complex64> {
    if !d.is_closed() {
        return Err(QuonError::NotClosed);
    }
    let mut labels: Vec<Label> = Vec::new();
    let mut at: Vec<usize> = Vec::new();
    let mut groups: Vec<Vec<Slot>> = Vec::new();
    let mut scalar = d.amplitude;
    let one = Complex64::new(1.0, 0.0);
    let mandatory = |label: usize| Slot { label, weight: one, pair_diag: None };

    for e in &d.elements {
        match *e {
            Element::Cap { j } => {
                let a = labels.len();
                labels.push(Label { cap_partner: a + 1, cap_left: true, ..Default::default() });
                labels.push(Label { cap_partner: a, cap_left: false, ..Default::default() });
                at.splice(j..j, [a, a + 1]);
            }
            Element::Cup { j } => {
                let (l, r) = (at[j], at[j + 1]);
                labels[l].cup_partner = r;
                labels[l].cup_left = true;
                labels[r].cup_partner = l;
                labels[r].cup_left = false;
                at.drain(j..j + 2);
            }
            Element::Dot { j } => groups.push(vec![mandatory(at[j])]),
            Element::DotPair { j, k } => {
                scalar *= Complex64::i();
                groups.push(vec![mandatory(at[j]), mandatory(at[k])]);
            }
            _ => {
                let (u, v) = e.quadratic_coeffs().expect("two-strand element");
                let j = e.position();
                let (a, b) = (at[j], at[j + 1]);
                if v == Complex64::new(0.0, 0.0) {
                    scalar *= u;
                } else if u == Complex64::new(0.0, 0.0) {
                    scalar *= Complex64::i() * v;
                    groups.push(vec![mandatory(a), mandatory(b)]);
                } else {
                    groups.push(vec![
                        Slot { label: a, weight: Complex64::i() * v, pair_diag: Some(u) },
                        Slot { label: b, weight: one, pair_diag: None },
                    ]);
                }
            }
        }
    }

    // Operator product order: latest element leftmost.
    let slots: Vec<Slot> = groups.into_iter().rev().flatten().collect();
    let n = slots.len();
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for x in 0..n {
        for y in x + 1..n {
            let mut val = two_point(&labels, slots[x].label, slots[y].label) * slots[x].weight * slots[y].weight;
            if y == x + 1 {
                if let Some(u) = slots[x].pair_diag {
                    val += u;
                }
            }
            m[x][y] = val;
            m[y][x] = -val;
        }
    }

    let loops = count_loops(&labels);
    let log_skeleton = 0.5 * std::f64::consts::LN_2 * loops as f64;
    let value = match pfaffian_log(m) {
        LogPfaffian::Zero => Complex64::new(0.0, 0.0),
        LogPfaffian::Value { phase, log_mag } => {
            let lm = log_mag + log_skeleton + scalar.norm().ln();
            if scalar == Complex64::new(0.0, 0.0) {
                Complex64::new(0.0, 0.0)
            } else {
                phase * (scalar / scalar.norm()) * lm.exp()
            }
        }
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(QuonError::NumericalInstability(format!("non-finite value {value}")));
    }
    Ok(value)
}

/// `⟨γ_x γ_y⟩` between the cup vacuum and the cap vacuum.
fn two_point(labels: &[Label], x: usize, y: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if x == y {
        return one;
    }
    let i = Complex64::i();
    let mut acc = one;
    let mut cur = y;
    loop {
        let l = labels[cur];
        acc *= if l.cap_left { i } else { -i };
        let next = l.cap_partner;
        if next == x {
            return acc;
        }
        cur = next;
        let l = labels[cur];
        let lambda = if l.cup_left { -i } else { i };
        let next = l.cup_partner;
        if next == x {
            return -acc * lambda;
        }
        if next == y {
            return Complex64::new(0.0, 0.0);
        }
        acc *= lambda;
        cur = next;
    }
}

fn count_loops(labels: &[Label]) -> usize {
    let mut seen = vec![false; labels.len()];
    let mut loops = 0;
    for start in 0..labels.len() {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut cur = start;
        loop {
            seen[cur] = true;
            let p = labels[cur].cap_partner;
            seen[p] = true;
            cur = labels[p].cup_partner;
            if cur == start {
                break;
            }
        }
    }
    loops
}

/// Widest diagram [`evaluate_closed`] evaluates by state propagation; the
/// state then has at most `2^{W/2} ≤ W²` amplitudes.
pub const DIRECT_WIDTH_LIMIT: usize = 16;

/// Evaluates by state propagation when the diagram is narrow, otherwise by
/// [`evaluate_closed_fast`], falling back to the oracle on instability.
pub fn evaluate_closed(d: &MajoranaDiagram) -> Result<Complex64> {
    if d.is_closed() && d.max_width() <= DIRECT_WIDTH_LIMIT {
        return crate::majorana_ir::evaluate_closed_oracle(d);
    }
    match evaluate_closed_fast(d) {
        Err(QuonError::NumericalInstability(_)) if d.max_width() <= crate::majorana_ir::ORACLE_LIMIT => {
            crate::majorana_ir::evaluate_closed_oracle(d)
        }
        r => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorana_ir::{c, evaluate_closed_oracle, random::random_closed_diagram};
    use rand::SeedableRng;

    #[test]
    fn loop_and_empty() {
        let v = evaluate_closed_fast(&MajoranaDiagram::loop_diagram()).unwrap();
        assert!((v - c(std::f64::consts::SQRT_2, 0.0)).norm() < 1e-14);
        let e = MajoranaDiagram::empty().with_amplitude(c(0.5, -2.0));
        assert_eq!(evaluate_closed_fast(&e).unwrap(), c(0.5, -2.0));
    }

    #[test]
    fn loop_with_dot_pair() {
        let d = MajoranaDiagram::closed(
            vec![Element::Cap { j: 0 }, Element::DotPair { j: 0, k: 1 }, Element::Cup { j: 0 }],
            c(1.0, 0.0),
        )
        .unwrap();
        let fast = evaluate_closed_fast(&d).unwrap();
        let slow = evaluate_closed_oracle(&d).unwrap();
        assert!((fast - slow).norm() < 1e-12);
        assert!((slow - c(std::f64::consts::SQRT_2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn random_against_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..300 {
            let d = random_closed_diagram(&mut rng, 12, 40);
            let fast = evaluate_closed_fast(&d).unwrap();
            let slow = evaluate_closed_oracle(&d).unwrap();
            assert!((fast - slow).norm() <= 1e-9 * slow.norm().max(1.0), "case {case}: {fast} vs {slow}\n{d:?}");
        }
    }

    #[test]
    fn dispatch_agrees_with_oracle_on_both_paths() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let mut wide = 0;
        for _ in 0..60 {
            let d = random_closed_diagram(&mut rng, 20, 60);
            wide += usize::from(d.max_width() > DIRECT_WIDTH_LIMIT);
            let v = evaluate_closed(&d).unwrap();
            let slow = evaluate_closed_oracle(&d).unwrap();
            assert!((v - slow).norm() <= 1e-9 * slow.norm().max(1.0));
        }
        assert!(wide > 0);
    }
}
