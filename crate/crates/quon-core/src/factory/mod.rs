//! Factory moves (stretch, insert, switch) on quon diagrams, a ledger of
//! braids switched into generic scatterings, and component evaluation by
//! expanding those scatterings into braid pairs.
//!
//! Element indices ("sites") refer to the current diagram; every move that
//! inserts elements renumbers the ledger's sites accordingly.

mod moves;

pub use moves::{insert_move, stretch, switch_move};

use crate::error::{QuonError, Result};
use crate::majorana_ir::{Element, MajoranaDiagram};
use crate::quon::{encode_basis, evaluate_closed_quon, pairwise_sum, BasisAssignment, QuonDiagram, Side};
use crate::rewrite::braid_weights;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default cap on transformed scatterings for [`evaluate_component_expanded`].
pub const DEFAULT_MAX_TRANSFORMED: usize = 16;

/// The strand at `position` just before element `time_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub time_index: usize,
    pub position: usize,
}

/// Side of the crossed element on which the stretched strand lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossSide {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub element: usize,
    pub side: CrossSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StretchTarget {
    Bulk,
    /// Grows the leftmost interval on `side` by two strands.
    ExistingEncoder { side: Side },
    /// Opens a new two-strand interval at the left end of `side`.
    NewEncoder { side: Side },
}

/// Crossings are element indices of the diagram the move is applied to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stretch {
    pub segment: Segment,
    pub path: Vec<Crossing>,
    pub target: StretchTarget,
}

/// The gap left of strand `position`, just before element `time_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub time_index: usize,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Closed(MajoranaDiagram),
    StringHolePair,
    DoubleStringHolePair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Insert {
    pub region: Region,
    pub payload: Payload,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchChange {
    FlipBraid,
    BraidToScattering { theta: Complex64 },
    SetAngle { theta: Complex64 },
    /// Dot pair on strands `j, j+1`; the site is a time index.
    AddDotPair { j: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Switch {
    pub site: usize,
    pub change: SwitchChange,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    Stretch(Stretch),
    Insert(Insert),
    Switch(Switch),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FactoryLedger {
    pub moves: Vec<Move>,
    pub transformed_scatterings: Vec<usize>,
}

impl FactoryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n_s(&self) -> usize {
        self.transformed_scatterings.len()
    }

    /// Sites at or after `at` move forward by `n`.
    pub(crate) fn shift_sites(&mut self, at: usize, n: usize) {
        for s in self.transformed_scatterings.iter_mut().filter(|s| **s >= at) {
            *s += n;
        }
    }
}

pub fn apply_move(q: &QuonDiagram, mv: &Move, ledger: &FactoryLedger) -> Result<(QuonDiagram, FactoryLedger)> {
    match mv {
        Move::Stretch(s) => stretch(q, s, ledger),
        Move::Insert(i) => insert_move(q, i, ledger),
        Move::Switch(s) => switch_move(q, s, ledger),
    }
}

/// Applies `moves` to `seed` in order with a fresh ledger.
pub fn replay(seed: &QuonDiagram, moves: &[Move]) -> Result<(QuonDiagram, FactoryLedger)> {
    moves.iter().try_fold((seed.clone(), FactoryLedger::new()), |(q, l), mv| apply_move(&q, mv, &l))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpandedComponent {
    pub value: Complex64,
    /// Number of braid-only diagrams evaluated, `2^{n_S}`.
    pub terms: usize,
}

/// Component for `bits` as a weighted sum over braid expansions of every
/// transformed scattering, with at most [`DEFAULT_MAX_TRANSFORMED`] of them.
pub fn evaluate_component_expanded(q: &QuonDiagram, ledger: &FactoryLedger, bits: &BasisAssignment) -> Result<ExpandedComponent> {
    evaluate_component_expanded_with_limit(q, ledger, bits, DEFAULT_MAX_TRANSFORMED)
}

pub fn evaluate_component_expanded_with_limit(
    q: &QuonDiagram,
    ledger: &FactoryLedger,
    bits: &BasisAssignment,
    limit: usize,
) -> Result<ExpandedComponent> {
    let n = ledger.n_s();
    if n > limit {
        return Err(QuonError::TooManyTransformed(n, limit));
    }
    let mut branches = Vec::with_capacity(n);
    for &site in &ledger.transformed_scatterings {
        let e = q.core.elements.get(site).ok_or(QuonError::NotAScattering(site))?;
        let (u, v) = e.quadratic_coeffs().filter(|_| e.is_scattering()).ok_or(QuonError::NotAScattering(site))?;
        let (alpha, beta) = braid_weights(u, v);
        let j = e.position();
        branches.push([(alpha, Element::BraidPos { j }), (beta, Element::BraidNeg { j })]);
    }
    let term = |mask: usize| -> Result<Complex64> {
        let mut variant = q.clone();
        let mut weight = Complex64::new(1.0, 0.0);
        for (k, (&site, options)) in ledger.transformed_scatterings.iter().zip(&branches).enumerate() {
            let (w, e) = options[mask >> k & 1];
            weight *= w;
            variant.core.elements[site] = e;
        }
        Ok(weight * evaluate_closed_quon(&encode_basis(&variant, bits)?)?)
    };
    let count = 1usize << n;
    let workers = std::thread::available_parallelism().map_or(1, |p| p.get()).min(count);
    let chunk = count.div_ceil(workers);
    let values: Vec<Result<Complex64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let term = &term;
                scope.spawn(move || (w * chunk..((w + 1) * chunk).min(count)).map(term).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("expansion worker panicked")).collect()
    });
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ExpandedComponent { value: pairwise_sum(&values), terms: count })
}

/// Direct evaluation of the component for `bits`.
pub fn evaluate_component(q: &QuonDiagram, bits: &BasisAssignment) -> Result<Complex64> {
    evaluate_closed_quon(&encode_basis(q, bits)?)
}
