//! Elementary generating tensors, dense extraction and interval operations.

use super::dense::DenseTensor;
use crate::error::{QuonError, Result};
use crate::majorana_ir::{Element, MajoranaDiagram, Orientation};
use crate::quon::{encode_basis, evaluate_closed_quon, BasisAssignment, OpenInterval, ParityCut, QuonDiagram, Side, StrandMark};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8, SQRT_2};

/// Largest total leg count for dense extraction.
pub const MAX_DENSE_LEGS: usize = 12;

/// Legs in counterclockwise order from the top-left corner: bottom
/// intervals left to right, then top intervals right to left (qubits within
/// an interval follow the same direction). Entries are `(interval, qubit)`.
pub fn leg_layout(q: &QuonDiagram) -> Vec<(usize, usize)> {
    let side = |s: Side| q.open_intervals.iter().enumerate().filter(move |(_, iv)| iv.side == s);
    let mut legs: Vec<(usize, usize)> = side(Side::Bottom).flat_map(|(i, iv)| (0..iv.qubit_count()).map(move |k| (i, k))).collect();
    let mut top: Vec<(usize, usize)> = side(Side::Top).flat_map(|(i, iv)| (0..iv.qubit_count()).map(move |k| (i, k))).collect();
    top.reverse();
    legs.extend(top);
    legs
}

/// Enumerates every component with basis encoders.
pub fn quon_to_dense_tensor(q: &QuonDiagram) -> Result<DenseTensor> {
    q.validate()?;
    let legs = leg_layout(q);
    if legs.len() > MAX_DENSE_LEGS {
        return Err(QuonError::TooManyLegs(legs.len()));
    }
    let rank = legs.len();
    let entries = (0..1usize << rank)
        .map(|x| {
            let mut bits: Vec<Vec<u8>> = q.open_intervals.iter().map(|iv| vec![0; iv.qubit_count()]).collect();
            for (leg, &(i, k)) in legs.iter().enumerate() {
                bits[i][k] = (x >> (rank - 1 - leg) & 1) as u8;
            }
            evaluate_closed_quon(&encode_basis(q, &BasisAssignment { bits })?)
        })
        .collect::<Result<Vec<_>>>()?;
    DenseTensor::new(rank, entries)
}

/// The elementary generating set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Ket0,
    Identity,
    X,
    RotXQuarter { positive: bool },
    Rz { theta: f64 },
    /// Rank-`r` parity tensor: 1 on even-weight indices, 0 otherwise.
    ParityP { rank: usize },
}

impl Generator {
    /// Parses names such as `Ket0`, `Identity`, `X`, `RotXQuarter+`,
    /// `RotXQuarter-`, `Rz` (one angle) and `ParityP` (one rank).
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let unknown = || QuonError::UnknownGenerator(format!("{name} with {} parameter(s)", params.len()));
        Ok(match (name, params) {
            ("Ket0", []) => Generator::Ket0,
            ("Identity", []) => Generator::Identity,
            ("X", []) => Generator::X,
            ("RotXQuarter+", []) => Generator::RotXQuarter { positive: true },
            ("RotXQuarter-", []) => Generator::RotXQuarter { positive: false },
            ("Rz", [theta]) => Generator::Rz { theta: *theta },
            ("ParityP", [r]) if *r >= 1.0 && r.fract() == 0.0 => Generator::ParityP { rank: *r as usize },
            _ => return Err(unknown()),
        })
    }
}

/// Marks the first and last strand of every open interval at its boundary.
fn mark_interval_edges(q: &mut QuonDiagram) {
    let end = q.core.elements.len();
    let marks = q
        .open_intervals
        .iter()
        .flat_map(|iv| {
            let t = if iv.side == Side::Top { 0 } else { end };
            [StrandMark { time_index: t, position: iv.start }, StrandMark { time_index: t, position: iv.end() - 1 }]
        })
        .collect();
    q.boundary_tracking = Some(marks);
}

pub fn compile_generator_tensor(g: Generator) -> Result<QuonDiagram> {
    let one = Complex64::new(1.0, 0.0);
    let gate = |elements: Vec<Element>, amp: Complex64| -> Result<QuonDiagram> {
        QuonDiagram::with_intervals(MajoranaDiagram::new(4, elements, amp)?, &[4], &[4])
    };
    let mut q = match g {
        Generator::Ket0 | Generator::ParityP { rank: 1 } => QuonDiagram::with_intervals(
            MajoranaDiagram::new(0, vec![Element::Cap { j: 0 }, Element::Cap { j: 1 }], Complex64::new(FRAC_1_SQRT_2, 0.0))?,
            &[],
            &[4],
        )?,
        Generator::Identity | Generator::ParityP { rank: 2 } => gate(vec![], one)?,
        Generator::X => gate(vec![Element::DotPair { j: 0, k: 1 }], one)?,
        Generator::RotXQuarter { positive: true } => gate(vec![Element::BraidNeg { j: 0 }], Complex64::from_polar(1.0, FRAC_PI_8))?,
        Generator::RotXQuarter { positive: false } => gate(vec![Element::BraidPos { j: 0 }], Complex64::from_polar(1.0, -FRAC_PI_8))?,
        Generator::Rz { theta } => gate(
            vec![Element::Scattering { j: 1, theta: Complex64::new(theta, 0.0), orientation: Orientation::Vertical }],
            one,
        )?,
        Generator::ParityP { rank: 0 } => return Err(QuonError::UnknownGenerator("ParityP of rank 0".into())),
        Generator::ParityP { rank } => {
            // Each merge glues the outer right strands of two neighboring intervals.
            let elements = (0..rank - 2).flat_map(|_| [Element::Cup { j: 3 }, Element::Cup { j: 2 }]).collect();
            let core = MajoranaDiagram::new(4 * (rank - 1), elements, Complex64::new(SQRT_2.powi(rank as i32 - 2), 0.0))?;
            QuonDiagram::with_intervals(core, &vec![4; rank - 1], &[4])?
        }
    };
    mark_interval_edges(&mut q);
    Ok(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionMode {
    /// Adjacent intervals glued by nested cups (or caps); qubit `k` of the
    /// left interval pairs with qubit `p-1-k` of the right one.
    Neighboring,
    /// Any two intervals on one side, closed by their zero-bit encoders plus
    /// one parity cut per qubit; qubit `k` pairs with qubit `k`.
    NonNeighboring,
}

fn rebuild_intervals(q: &QuonDiagram, removed: &[usize]) -> Result<Vec<OpenInterval>> {
    let mut out = Vec::new();
    for side in [Side::Top, Side::Bottom] {
        let mut start = 0;
        for (i, iv) in q.open_intervals.iter().enumerate() {
            if iv.side != side || removed.contains(&i) {
                continue;
            }
            out.push(OpenInterval::with_pairing(side, start, iv.pairing.clone())?);
            start += iv.size;
        }
    }
    Ok(out)
}

fn shift_elements(elements: &[Element], offset: usize) -> Vec<Element> {
    elements.iter().map(|e| e.shifted(offset as isize)).collect()
}

/// Contracts intervals `a` and `b` (same side, equal pairing data) through
/// the resolution of identity.
pub fn contract_legs(q: &QuonDiagram, a: usize, b: usize, mode: ContractionMode) -> Result<QuonDiagram> {
    q.validate()?;
    let (ia, ib) = match (q.open_intervals.get(a), q.open_intervals.get(b)) {
        (Some(x), Some(y)) if a != b => (x, y),
        _ => return Err(QuonError::IntervalMismatch(format!("intervals {a} and {b} are not two distinct open intervals"))),
    };
    if ia.side != ib.side || ia.size != ib.size || ia.pairing != ib.pairing {
        return Err(QuonError::IntervalMismatch("contracted intervals need one side, one size and equal pairing data".into()));
    }
    let (left, right) = if ia.start < ib.start { (ia, ib) } else { (ib, ia) };
    let s = left.size;
    let p = left.qubit_count();
    let mut glue: Vec<Element> = Vec::new();
    let mut new_cuts: Vec<Vec<usize>> = Vec::new();
    let mut factor = Complex64::new(1.0, 0.0);
    match mode {
        ContractionMode::Neighboring => {
            if left.end() != right.start {
                return Err(QuonError::IntervalMismatch("neighboring contraction needs adjacent intervals".into()));
            }
            glue.extend((0..s).rev().map(|j| Element::Cup { j: left.start + j }));
            new_cuts.push((left.start..left.end()).collect());
        }
        ContractionMode::NonNeighboring => {
            let zero = left.encoder(&vec![0; p])?;
            let dec = zero.dagger();
            glue.extend(shift_elements(&dec.elements, right.start));
            glue.extend(shift_elements(&dec.elements, left.start));
            let pairs = left.pairs();
            let l0 = pairs[0].0;
            for pair in &pairs[1..] {
                let lk = pair.0;
                new_cuts.push(vec![left.start + l0, left.start + lk, right.start + l0, right.start + lk]);
            }
            factor = Complex64::new(2f64.powi(p as i32), 0.0) * dec.amplitude * dec.amplitude;
        }
    }
    let mut out = q.clone();
    out.open_intervals = rebuild_intervals(q, &[a, b])?;
    out.core.amplitude *= factor;
    match left.side {
        Side::Bottom => {
            let t = out.core.elements.len();
            out.core.elements.extend(glue);
            out.parity_cuts.extend(new_cuts.into_iter().map(|st| ParityCut::new(t, st)));
            out.core.width_out -= 2 * s;
        }
        Side::Top => {
            // Ket-side gluing: the dagger of the bra-side sequence, prepended.
            let glue = MajoranaDiagram { width_in: 0, width_out: 0, elements: glue, amplitude: Complex64::new(1.0, 0.0) };
            let caps = glue.dagger().elements;
            let n = caps.len();
            out.insert_elements(0, &caps);
            for c in out.parity_cuts.iter_mut().filter(|c| c.time_index == 0) {
                c.time_index = n;
            }
            if let Some(marks) = &mut out.boundary_tracking {
                for m in marks.iter_mut() {
                    if m.time_index == 0 {
                        m.time_index = n;
                    }
                }
            }
            out.parity_cuts.extend(new_cuts.into_iter().map(|st| ParityCut::new(n, st)));
            out.core.width_in -= 2 * s;
        }
    }
    out.validate()?;
    Ok(out)
}

/// Stacks `upper` above `lower`, gluing matching intervals through the
/// resolution of identity (one parity cut per glued interval).
pub fn compose_quon(upper: &QuonDiagram, lower: &QuonDiagram) -> Result<QuonDiagram> {
    let bottoms: Vec<&OpenInterval> = upper.open_intervals.iter().filter(|iv| iv.side == Side::Bottom).collect();
    let tops: Vec<&OpenInterval> = lower.open_intervals.iter().filter(|iv| iv.side == Side::Top).collect();
    let matched = bottoms.len() == tops.len() && bottoms.iter().zip(&tops).all(|(x, y)| x.start == y.start && x.pairing == y.pairing);
    if !matched {
        return Err(QuonError::IntervalMismatch("glued boundaries differ".into()));
    }
    let core = MajoranaDiagram::compose(&upper.core, &lower.core)?;
    let t = upper.core.elements.len();
    let mut parity_cuts = upper.parity_cuts.clone();
    parity_cuts.extend(bottoms.iter().map(|iv| ParityCut::new(t, (iv.start..iv.end()).collect())));
    parity_cuts.extend(lower.parity_cuts.iter().map(|c| ParityCut { time_index: c.time_index + t, strands: c.strands.clone() }));
    let mut open_intervals: Vec<OpenInterval> = upper.open_intervals.iter().filter(|iv| iv.side == Side::Top).cloned().collect();
    open_intervals.extend(lower.open_intervals.iter().filter(|iv| iv.side == Side::Bottom).cloned());
    let boundary_tracking = match (&upper.boundary_tracking, &lower.boundary_tracking) {
        (None, None) => None,
        (u, l) => {
            let mut marks = u.clone().unwrap_or_default();
            marks.extend(l.iter().flatten().map(|m| StrandMark { time_index: m.time_index + t, position: m.position }));
            Some(marks)
        }
    };
    let q = QuonDiagram { core, parity_cuts, open_intervals, boundary_tracking };
    q.validate()?;
    Ok(q)
}

/// Bends the leftmost bottom interval up to the top-left corner. In the
/// counterclockwise leg order this moves its legs from the front to the end.
pub fn rotate_star(q: &QuonDiagram) -> Result<QuonDiagram> {
    q.validate()?;
    let first = q
        .open_intervals
        .iter()
        .position(|iv| iv.side == Side::Bottom)
        .ok_or_else(|| QuonError::IntervalMismatch("no bottom interval to rotate".into()))?;
    let iv = &q.open_intervals[first];
    let default = OpenInterval::new(Side::Top, 0, iv.size)?;
    if iv.pairing != default.pairing {
        return Err(QuonError::IntervalMismatch("rotation needs the default pairing".into()));
    }
    let s = iv.size;
    let mut elements = shift_elements(&q.core.elements, s);
    elements.extend((0..s).rev().map(|j| Element::Cup { j }));
    let core = MajoranaDiagram::new(q.core.width_in + s, elements, q.core.amplitude)?;
    let mut open_intervals = vec![default];
    for (i, other) in q.open_intervals.iter().enumerate() {
        if i == first {
            continue;
        }
        let start = match other.side {
            Side::Top => other.start + s,
            Side::Bottom => other.start - s,
        };
        open_intervals.push(OpenInterval::with_pairing(other.side, start, other.pairing.clone())?);
    }
    let out = QuonDiagram {
        core,
        parity_cuts: q.parity_cuts.iter().map(|c| ParityCut { time_index: c.time_index, strands: c.strands.iter().map(|x| x + s).collect() }).collect(),
        open_intervals,
        boundary_tracking: q
            .boundary_tracking
            .as_ref()
            .map(|ms| ms.iter().map(|m| StrandMark { time_index: m.time_index, position: m.position + s }).collect()),
    };
    out.validate()?;
    Ok(out)
}
