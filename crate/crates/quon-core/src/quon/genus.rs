//! Hole-removing relations: string-genus (loop around a hole), SWAP-hole
//! (cut implied by cuts before a braid crossing), and cut motion.

use super::monomial::Monomial;
use super::{ParityCut, QuonDiagram};
use crate::error::{QuonError, Result};
use crate::majorana_ir::Element;
use itertools::Itertools;
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusMove {
    /// Delete hole `hole` together with the isolated loop enclosing it.
    Remove { hole: usize },
    /// Add a loop created by `Cap{position}` before element `time_index`,
    /// with a new hole on strands `0..=position` inside it.
    Insert { time_index: usize, position: usize },
}

pub fn string_genus(q: &QuonDiagram, mv: GenusMove) -> Result<QuonDiagram> {
    match mv {
        GenusMove::Remove { hole } => string_genus_remove(q, hole),
        GenusMove::Insert { time_index, position } => string_genus_insert(q, time_index, position),
    }
}

fn map_positions(e: &Element, f: impl Fn(usize) -> usize) -> Element {
    use Element::*;
    match *e {
        Cap { j } => Cap { j: f(j) },
        Cup { j } => Cup { j: f(j) },
        Dot { j } => Dot { j: f(j) },
        DotPair { j, k } => DotPair { j: f(j), k: f(k) },
        BraidPos { j } => BraidPos { j: f(j) },
        BraidNeg { j } => BraidNeg { j: f(j) },
        Scattering { j, theta, orientation } => Scattering { j: f(j), theta, orientation },
        ScatteringStar { j, phi, orientation } => ScatteringStar { j: f(j), phi, orientation },
    }
}

/// An isolated loop: created by the cap at `cap`, destroyed by the cup at
/// `cup`, with left position `pos[t - cap - 1]` at each time `t` in `(cap, cup]`.
struct Loop {
    cap: usize,
    cup: usize,
    pos: Vec<usize>,
}

impl Loop {
    fn at(&self, t: usize) -> Option<usize> {
        (t > self.cap && t <= self.cup).then(|| self.pos[t - self.cap - 1])
    }
}

/// Follows the pair created at `cap` until its cup, rejecting any interaction.
fn trace_loop(q: &QuonDiagram, cap: usize) -> Option<Loop> {
    let Element::Cap { j } = q.core.elements[cap] else { return None };
    let mut p = j;
    let mut pos = vec![p];
    for (i, e) in q.core.elements.iter().enumerate().skip(cap + 1) {
        match *e {
            Element::Cup { j } if j == p => return Some(Loop { cap, cup: i, pos }),
            Element::Cap { j } if j == p + 1 => return None,
            Element::Cap { j } if j <= p => p += 2,
            Element::Cap { .. } => {}
            _ if e.touched().iter().any(|&x| x == p || x == p + 1) => return None,
            Element::Cup { j } if j + 1 < p => p -= 2,
            _ => {}
        }
        pos.push(p);
    }
    None
}

/// Other cuts may contain both loop strands or neither; the loop's pair
/// parity is +1, so both strands drop out of such a cut.
fn loop_is_clean(q: &QuonDiagram, lp: &Loop, hole: usize) -> bool {
    q.parity_cuts.iter().enumerate().filter(|&(h, _)| h != hole).all(|(_, c)| !encloses(lp, c))
}

fn encloses(lp: &Loop, cut: &ParityCut) -> bool {
    lp.at(cut.time_index).is_some_and(|p| cut.strands.contains(&p) != cut.strands.contains(&(p + 1)))
}

/// Removes hole `hole` and the innermost isolated loop around it; amplitude × 1/√2.
pub fn string_genus_remove(q: &QuonDiagram, hole: usize) -> Result<QuonDiagram> {
    let cut = q.parity_cuts.get(hole).ok_or(QuonError::NoEnclosingLoop(hole))?;
    let lp = (0..cut.time_index.min(q.core.elements.len()))
        .rev()
        .filter_map(|ic| trace_loop(q, ic))
        .find(|lp| encloses(lp, cut) && loop_is_clean(q, lp, hole))
        .ok_or(QuonError::NoEnclosingLoop(hole))?;

    let shift_time = |t: usize| {
        if t <= lp.cap {
            t
        } else if t <= lp.cup {
            t - 1
        } else {
            t - 2
        }
    };
    let squeeze = |t: usize, x: usize| match lp.at(t) {
        Some(p) if x >= p + 2 => x - 2,
        _ => x,
    };

    let mut out = q.clone();
    out.core.elements = q
        .core
        .elements
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != lp.cap && i != lp.cup)
        .map(|(i, e)| if i > lp.cap && i < lp.cup { map_positions(e, |x| squeeze(i, x)) } else { *e })
        .collect();
    out.core.amplitude *= 1.0 / SQRT_2;
    let on_loop = |t: usize, x: usize| lp.at(t).is_some_and(|p| x == p || x == p + 1);
    out.parity_cuts = q
        .parity_cuts
        .iter()
        .enumerate()
        .filter(|&(h, _)| h != hole)
        .map(|(_, c)| ParityCut {
            time_index: shift_time(c.time_index),
            strands: c.strands.iter().filter(|&&s| !on_loop(c.time_index, s)).map(|&s| squeeze(c.time_index, s)).collect(),
        })
        .filter(|c| !c.strands.is_empty())
        .collect();
    if let Some(marks) = &mut out.boundary_tracking {
        marks.retain(|m| !on_loop(m.time_index, m.position));
        for m in marks.iter_mut() {
            m.position = squeeze(m.time_index, m.position);
            m.time_index = shift_time(m.time_index);
        }
    }
    out.validate()?;
    Ok(out)
}

/// Adds a loop `Cap{position}`/`Cup{position}` before element `time_index`
/// with a new last hole on strands `0..=position` between them; amplitude × √2.
pub fn string_genus_insert(q: &QuonDiagram, time_index: usize, position: usize) -> Result<QuonDiagram> {
    let widths = q.core.widths();
    let w = *widths.get(time_index).ok_or_else(|| QuonError::InvalidRegion(format!("time {time_index} out of range")))?;
    if position.is_multiple_of(2) || position > w {
        return Err(QuonError::InvalidRegion(format!("loop position {position} must be odd and at most {w}")));
    }
    let mut out = q.clone();
    out.insert_elements(time_index, &[Element::Cap { j: position }, Element::Cup { j: position }]);
    out.parity_cuts.push(ParityCut::new(time_index + 1, (0..=position).collect()));
    out.core.amplitude *= SQRT_2;
    Ok(out)
}

/// Whether element `e` commutes with the parity string on `strands`.
fn commutes_with_parity(e: &Element, strands: &[usize]) -> bool {
    if e.is_cap_or_cup() {
        return false;
    }
    let inside = e.touched().iter().filter(|x| strands.contains(x)).count();
    match e {
        Element::Dot { .. } => inside == 0,
        _ => inside == 0 || inside == 2,
    }
}

/// Moves hole `hole` to `new_time` across elements commuting with its parity string.
pub fn move_cut(q: &QuonDiagram, hole: usize, new_time: usize) -> Result<QuonDiagram> {
    let cut = q.parity_cuts.get(hole).ok_or_else(|| QuonError::InvalidRegion(format!("no hole {hole}")))?;
    if new_time > q.core.elements.len() {
        return Err(QuonError::InvalidRegion(format!("time {new_time} out of range")));
    }
    let (lo, hi) = (cut.time_index.min(new_time), cut.time_index.max(new_time));
    if !q.core.elements[lo..hi].iter().all(|e| commutes_with_parity(e, &cut.strands)) {
        return Err(QuonError::PatternMismatch(format!("hole {hole} does not commute with the elements it would cross")));
    }
    let mut out = q.clone();
    out.parity_cuts[hole].time_index = new_time;
    Ok(out)
}

const MAX_GENERATING_CUTS: usize = 12;

/// Removes a hole placed right after a run of braids when its parity string,
/// pulled back through the run, equals the product of parity strings of
/// cuts sitting at the start of the run. The run stops at the first earlier
/// time carrying another cut. Amplitude is unchanged.
pub fn swap_hole_remove(q: &QuonDiagram, hole: usize) -> Result<QuonDiagram> {
    let cut = q.parity_cuts.get(hole).ok_or_else(|| QuonError::PatternMismatch(format!("no hole {hole}")))?;
    let t = cut.time_index;
    let mut start = t;
    let cut_at = |s: usize| q.parity_cuts.iter().enumerate().any(|(h, c)| h != hole && c.time_index == s);
    while start > 0 && q.core.elements[start - 1].is_braid() && !cut_at(start) {
        start -= 1;
    }
    if start == t {
        return Err(QuonError::PatternMismatch(format!("hole {hole} does not follow a braid crossing")));
    }
    let mut pulled = Monomial::parity(&cut.strands);
    for e in q.core.elements[start..t].iter().rev() {
        // B⁻¹ M B equals conjugation by the opposite braid.
        pulled = pulled.conjugate_braid(e.position(), matches!(e, Element::BraidNeg { .. }));
    }
    let generators: Vec<Monomial> = q
        .parity_cuts
        .iter()
        .enumerate()
        .filter(|&(h, c)| h != hole && c.time_index == start)
        .map(|(_, c)| Monomial::parity(&c.strands))
        .collect();
    if generators.len() > MAX_GENERATING_CUTS {
        return Err(QuonError::TooLarge(format!("{} cuts at the crossing start", generators.len())));
    }
    let implied = generators.iter().powerset().skip(1).any(|subset| {
        let prod = subset.into_iter().fold(Monomial { coeff: Complex64::new(1.0, 0.0), gammas: vec![] }, |acc, m| acc.mul(m));
        prod.gammas == pulled.gammas && (prod.coeff - pulled.coeff).norm() < 1e-12
    });
    if !implied {
        return Err(QuonError::PatternMismatch(format!("hole {hole} is not implied by the cuts before the crossing")));
    }
    let mut out = q.clone();
    out.parity_cuts.remove(hole);
    Ok(out)
}
