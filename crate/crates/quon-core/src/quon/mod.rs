//! Quon diagrams: a Majorana diagram on a background manifold with holes.
//!
//! Holes are represented by parity cuts: a cut at time `t` on strand set `S`
//! stands for the projection `½(1 + P_S)` onto even parity of `S`, where
//! `P_S = Π iγ_{s₂ₖ}γ_{s₂ₖ₊₁}` over the sorted strands. Open boundary groups
//! are [`OpenInterval`]s which [`encode_basis`] closes with basis encoders.

mod genus;
pub mod monomial;

pub use genus::{move_cut, string_genus, string_genus_insert, string_genus_remove, swap_hole_remove, GenusMove};

use crate::error::{QuonError, Result};
use crate::gaussian_eval::{evaluate_closed, evaluate_closed_fast};
use crate::majorana_ir::{evaluate_with_projections, Element, MajoranaDiagram};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest hole count accepted by the subset-sum evaluator.
pub const MAX_HOLES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Top,
    Bottom,
}

/// Parity-even projection on `strands`, applied just before element `time_index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCut {
    pub time_index: usize,
    pub strands: Vec<usize>,
}

impl ParityCut {
    pub fn new(time_index: usize, mut strands: Vec<usize>) -> Self {
        strands.sort_unstable();
        strands.dedup();
        Self { time_index, strands }
    }

    /// The cut as a sequence of `DotPair` elements realizing `P_S`.
    pub fn parity_string(&self) -> Vec<Element> {
        self.strands.chunks(2).map(|p| Element::DotPair { j: p[0], k: p[1] }).collect()
    }
}

/// A group of `2 + 2p` strand endpoints on the top or bottom boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenInterval {
    pub side: Side,
    pub start: usize,
    pub size: usize,
    /// Caps and braids creating the interval's strands pairwise from nothing.
    pub pairing: MajoranaDiagram,
}

impl OpenInterval {
    /// Interval with the nested default pairing: one outer pair enclosing
    /// `p` adjacent inner pairs.
    pub fn new(side: Side, start: usize, size: usize) -> Result<Self> {
        if size < 2 || !size.is_multiple_of(2) {
            return Err(QuonError::InvalidDiagram(format!("interval size {size} must be even and at least 2")));
        }
        let mut elements = vec![Element::Cap { j: 0 }];
        elements.extend((1..size / 2).map(|k| Element::Cap { j: 2 * k - 1 }));
        let pairing = MajoranaDiagram::new(0, elements, Complex64::new(1.0, 0.0))?;
        Ok(Self { side, start, size, pairing })
    }

    pub fn with_pairing(side: Side, start: usize, pairing: MajoranaDiagram) -> Result<Self> {
        let iv = Self { side, start, size: pairing.width_out, pairing };
        iv.check_pairing()?;
        Ok(iv)
    }

    pub fn qubit_count(&self) -> usize {
        (self.size - 2) / 2
    }

    pub fn end(&self) -> usize {
        self.start + self.size
    }

    fn check_pairing(&self) -> Result<()> {
        let p = &self.pairing;
        p.validate()?;
        if p.width_in != 0 || p.width_out != self.size || self.size < 2 || !self.size.is_multiple_of(2) {
            return Err(QuonError::InvalidDiagram("pairing data must create the interval's strands".into()));
        }
        if !p.elements.iter().all(|e| matches!(e, Element::Cap { .. } | Element::BraidPos { .. } | Element::BraidNeg { .. })) {
            return Err(QuonError::InvalidDiagram("pairing data may contain only caps and braids".into()));
        }
        Ok(())
    }

    /// Final positions of each created pair, ordered by leftmost position.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut labels: Vec<usize> = Vec::new();
        let mut next = 0;
        for e in &self.pairing.elements {
            match *e {
                Element::Cap { j } => {
                    labels.splice(j..j, [next, next + 1]);
                    next += 2;
                }
                Element::BraidPos { j } | Element::BraidNeg { j } => labels.swap(j, j + 1),
                _ => unreachable!("checked pairing"),
            }
        }
        let mut pos = vec![0; labels.len()];
        for (p, &l) in labels.iter().enumerate() {
            pos[l] = p;
        }
        let mut pairs: Vec<(usize, usize)> = (0..labels.len() / 2)
            .map(|k| {
                let (a, b) = (pos[2 * k], pos[2 * k + 1]);
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.sort_unstable();
        pairs
    }

    /// Ket encoder `|b⟩` as a diagram of width `0 → size` (before shifting to
    /// `start`): pairing, then the dot block `i^{b_tot²} γ_{l₁}…γ_{lₘ}` on the
    /// leftmost strand of each flipped pair, normalized to unit norm.
    pub fn encoder(&self, bits: &[u8]) -> Result<MajoranaDiagram> {
        let p = self.qubit_count();
        if bits.len() != p {
            return Err(QuonError::BitLengthMismatch { expected: p, got: bits.len() });
        }
        let pairs = self.pairs();
        let b_tot: usize = bits.iter().map(|&b| (b & 1) as usize).sum();
        let mut dotted: Vec<usize> = Vec::new();
        if b_tot % 2 == 1 {
            dotted.push(pairs[0].0);
        }
        for (k, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                dotted.push(pairs[k + 1].0);
            }
        }
        let mut d = self.pairing.clone();
        d.elements.extend(dotted.iter().rev().map(|&j| Element::Dot { j }));
        let norm = 2f64.powf(-((p + 1) as f64) / 4.0);
        d.amplitude *= Complex64::i().powu(((b_tot * b_tot) % 4) as u32) * norm;
        Ok(d)
    }
}

/// A marked boundary-tracking strand, identified by its position at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrandMark {
    pub time_index: usize,
    pub position: usize,
}

/// Bits for each open interval, in the order of `QuonDiagram::open_intervals`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisAssignment {
    pub bits: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuonDiagram {
    pub core: MajoranaDiagram,
    #[serde(default)]
    pub parity_cuts: Vec<ParityCut>,
    #[serde(default)]
    pub open_intervals: Vec<OpenInterval>,
    #[serde(default)]
    pub boundary_tracking: Option<Vec<StrandMark>>,
}

impl QuonDiagram {
    /// A hole-free quon with no open intervals. `core` should be closed.
    pub fn from_core(core: MajoranaDiagram) -> Self {
        Self { core, parity_cuts: vec![], open_intervals: vec![], boundary_tracking: None }
    }

    /// Wraps an open diagram with default intervals of the given sizes on each side.
    pub fn with_intervals(core: MajoranaDiagram, top: &[usize], bottom: &[usize]) -> Result<Self> {
        let mut open_intervals = Vec::new();
        for (side, sizes) in [(Side::Top, top), (Side::Bottom, bottom)] {
            let mut start = 0;
            for &s in sizes {
                open_intervals.push(OpenInterval::new(side, start, s)?);
                start += s;
            }
        }
        let q = Self { core, parity_cuts: vec![], open_intervals, boundary_tracking: None };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        self.core.validate()?;
        let widths = self.core.widths();
        for cut in &self.parity_cuts {
            let w = *widths
                .get(cut.time_index)
                .ok_or_else(|| QuonError::InvalidDiagram(format!("cut time {} out of range", cut.time_index)))?;
            let sorted = cut.strands.windows(2).all(|p| p[0] < p[1]);
            if !sorted || cut.strands.len() % 2 != 0 || cut.strands.iter().any(|&s| s >= w) {
                return Err(QuonError::InvalidDiagram(format!("cut {cut:?} is not an even set of live strands")));
            }
        }
        for (side, width) in [(Side::Top, self.core.width_in), (Side::Bottom, self.core.width_out)] {
            let mut next = 0;
            for iv in self.open_intervals.iter().filter(|iv| iv.side == side) {
                iv.check_pairing()?;
                if iv.start != next {
                    return Err(QuonError::InvalidDiagram(format!("{side:?} intervals must tile the boundary in order")));
                }
                next = iv.end();
            }
            if next != width {
                return Err(QuonError::InvalidDiagram(format!("{side:?} intervals cover {next} of {width} strands")));
            }
        }
        let top_first = self.open_intervals.windows(2).all(|p| !(p[0].side == Side::Bottom && p[1].side == Side::Top));
        if !top_first {
            return Err(QuonError::InvalidDiagram("top intervals must precede bottom intervals".into()));
        }
        if let Some(marks) = &self.boundary_tracking {
            for m in marks {
                match widths.get(m.time_index) {
                    Some(&w) if m.position < w => {}
                    _ => return Err(QuonError::InvalidDiagram(format!("mark {m:?} out of range"))),
                }
            }
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.open_intervals.is_empty() && self.core.is_closed()
    }

    pub fn total_qubits(&self) -> usize {
        self.open_intervals.iter().map(OpenInterval::qubit_count).sum()
    }

    /// Inserts elements before index `at`; cuts and marks at `at` stay before them.
    pub(crate) fn insert_elements(&mut self, at: usize, elems: &[Element]) {
        let n = elems.len();
        self.core.elements.splice(at..at, elems.iter().cloned());
        for c in &mut self.parity_cuts {
            if c.time_index > at {
                c.time_index += n;
            }
        }
        if let Some(marks) = &mut self.boundary_tracking {
            for m in marks.iter_mut().filter(|m| m.time_index > at) {
                m.time_index += n;
            }
        }
    }
}

pub fn count_holes(q: &QuonDiagram) -> usize {
    q.parity_cuts.len()
}

/// Closes every open interval with its basis encoder (ket on top, bra below).
pub fn encode_basis(q: &QuonDiagram, bits: &BasisAssignment) -> Result<QuonDiagram> {
    if bits.bits.len() != q.open_intervals.len() {
        return Err(QuonError::BitLengthMismatch { expected: q.open_intervals.len(), got: bits.bits.len() });
    }
    let mut ket = MajoranaDiagram::empty();
    let mut bra = MajoranaDiagram::empty();
    for (iv, b) in q.open_intervals.iter().zip(&bits.bits) {
        let enc = iv.encoder(b)?;
        match iv.side {
            Side::Top => ket = MajoranaDiagram::tensor_product(&ket, &enc),
            Side::Bottom => bra = MajoranaDiagram::tensor_product(&bra, &enc),
        }
    }
    if ket.width_out != q.core.width_in || bra.width_out != q.core.width_out {
        return Err(QuonError::IntervalMismatch("encoder widths do not match the core".into()));
    }
    let shift = ket.elements.len();
    let core = MajoranaDiagram::compose(&MajoranaDiagram::compose(&ket, &q.core)?, &bra.dagger())?;
    let shift_time = |t: usize| t + shift;
    Ok(QuonDiagram {
        core,
        parity_cuts: q
            .parity_cuts
            .iter()
            .map(|c| ParityCut { time_index: shift_time(c.time_index), strands: c.strands.clone() })
            .collect(),
        open_intervals: vec![],
        boundary_tracking: q.boundary_tracking.as_ref().map(|ms| {
            ms.iter().map(|m| StrandMark { time_index: shift_time(m.time_index), position: m.position }).collect()
        }),
    })
}

/// Core with the parity strings of the cuts selected by `mask` inserted.
fn term_diagram(q: &QuonDiagram, mask: u64) -> MajoranaDiagram {
    let n = q.core.elements.len();
    let mut by_time: Vec<Vec<Element>> = vec![Vec::new(); n + 1];
    for (h, cut) in q.parity_cuts.iter().enumerate() {
        if mask >> h & 1 == 1 {
            by_time[cut.time_index].extend(cut.parity_string());
        }
    }
    let mut elements = Vec::with_capacity(n + q.parity_cuts.len());
    for (t, inserted) in by_time.into_iter().enumerate() {
        elements.extend(inserted);
        if let Some(e) = q.core.elements.get(t) {
            elements.push(*e);
        }
    }
    MajoranaDiagram { elements, ..q.core.clone() }
}

fn check_closed(q: &QuonDiagram) -> Result<()> {
    if !q.open_intervals.is_empty() {
        return Err(QuonError::HasOpenIntervals);
    }
    if !q.core.is_closed() {
        return Err(QuonError::NotClosed);
    }
    if q.parity_cuts.len() > MAX_HOLES {
        return Err(QuonError::TooLarge(format!("{} holes exceed the limit {MAX_HOLES}", q.parity_cuts.len())));
    }
    Ok(())
}

/// Balanced pairwise sum; on power-of-two lengths it is invariant under
/// reversing the input, since each node adds two operands commutatively.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// All `2^{n_h}` hole-expansion terms, indexed by subset mask.
pub fn hole_expansion_terms(q: &QuonDiagram) -> Result<Vec<Complex64>> {
    expansion_terms(q, evaluate_closed)
}

/// Expansions with at least this many terms are split across threads.
const PARALLEL_TERMS: u64 = 16;

fn expansion_terms(q: &QuonDiagram, eval: fn(&MajoranaDiagram) -> Result<Complex64>) -> Result<Vec<Complex64>> {
    check_closed(q)?;
    let count = 1u64 << q.parity_cuts.len();
    let workers = std::thread::available_parallelism().map_or(1, |p| p.get() as u64).min(count);
    if count < PARALLEL_TERMS || workers < 2 {
        return (0..count).map(|mask| eval(&term_diagram(q, mask))).collect();
    }
    let chunk = count.div_ceil(workers);
    let results: Vec<Result<Complex64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| scope.spawn(move || (w * chunk..((w + 1) * chunk).min(count)).map(|mask| eval(&term_diagram(q, mask))).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("expansion worker panicked")).collect()
    });
    results.into_iter().collect()
}

/// `(1/2)^{n_h} Σ_S eval(core with P at the cuts in S)`.
pub fn evaluate_closed_quon(q: &QuonDiagram) -> Result<Complex64> {
    let terms = hole_expansion_terms(q)?;
    Ok(pairwise_sum(&terms) * 0.5f64.powi(q.parity_cuts.len() as i32))
}

/// Hole expansion with every term evaluated by the Pfaffian path.
pub fn evaluate_closed_quon_fast(q: &QuonDiagram) -> Result<Complex64> {
    let terms = expansion_terms(q, evaluate_closed_fast)?;
    Ok(pairwise_sum(&terms) * 0.5f64.powi(q.parity_cuts.len() as i32))
}

/// The same subset sum with the subsets enumerated from the full set down.
pub fn evaluate_closed_quon_reversed(q: &QuonDiagram) -> Result<Complex64> {
    check_closed(q)?;
    let full = (1u64 << q.parity_cuts.len()) - 1;
    let terms: Vec<Complex64> =
        (0..=full).map(|k| evaluate_closed(&term_diagram(q, full - k))).collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms) * 0.5f64.powi(q.parity_cuts.len() as i32))
}

/// State-vector evaluation with the projections applied directly.
pub fn evaluate_closed_quon_oracle(q: &QuonDiagram) -> Result<Complex64> {
    check_closed(q)?;
    let cuts: Vec<(usize, Vec<usize>)> = q.parity_cuts.iter().map(|c| (c.time_index, c.strands.clone())).collect();
    evaluate_with_projections(&q.core, &cuts)
}

/// Deletes cuts that are provably implied: empty cuts, exact duplicates, and
/// full-width cuts preceded by an even number of dots. Returns the number removed.
pub fn normalize_cuts(q: &mut QuonDiagram) -> usize {
    let widths = q.core.widths();
    let mut dots_before = vec![0usize; q.core.elements.len() + 1];
    for (t, e) in q.core.elements.iter().enumerate() {
        dots_before[t + 1] = dots_before[t] + usize::from(matches!(e, Element::Dot { .. }));
    }
    let before = q.parity_cuts.len();
    let mut kept: Vec<ParityCut> = Vec::with_capacity(before);
    for cut in q.parity_cuts.drain(..) {
        let t = cut.time_index;
        let full = cut.strands.len() == widths[t] && dots_before[t].is_multiple_of(2);
        if cut.strands.is_empty() || full || kept.contains(&cut) {
            continue;
        }
        kept.push(cut);
    }
    q.parity_cuts = kept;
    before - q.parity_cuts.len()
}

#[cfg(test)]
mod tests;

/// Random even, non-empty strand subset of `0..width`.
pub fn random_cut_strands<R: rand::Rng>(rng: &mut R, width: usize) -> Vec<usize> {
    loop {
        let mut s: Vec<usize> = (0..width).filter(|_| rng.random_bool(0.5)).collect();
        if s.len() % 2 == 1 {
            s.pop();
        }
        if !s.is_empty() {
            return s;
        }
    }
}

/// A random closed diagram with `n_holes` random cuts at times where strands exist.
pub fn random_closed_quon<R: rand::Rng>(rng: &mut R, max_width: usize, max_elements: usize, n_holes: usize) -> QuonDiagram {
    loop {
        let core = crate::majorana_ir::random::random_closed_diagram(rng, max_width, max_elements);
        let widths = core.widths();
        let live: Vec<usize> = (0..widths.len()).filter(|&t| widths[t] >= 2).collect();
        if live.is_empty() {
            continue;
        }
        let parity_cuts = (0..n_holes)
            .map(|_| {
                let t = live[rng.random_range(0..live.len())];
                ParityCut::new(t, random_cut_strands(rng, widths[t]))
            })
            .collect();
        return QuonDiagram { core, parity_cuts, open_intervals: vec![], boundary_tracking: None };
    }
}
