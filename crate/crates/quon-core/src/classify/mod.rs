//! Structural Clifford / matchgate / punctured-matchgate checks, the dense
//! matchgate identity, `G(A,B)` utilities and the Clifford–matchgate split.
//!
//! The checks are sufficient conditions on the given representation, not a
//! semantic decision procedure.

mod matchgate;
mod network;
#[cfg(test)]
mod tests;

pub use matchgate::{decompose_gab, gab_matrix, matchgate_identity_residual, GabDecomposition, MatchgateGate, MGI_MAX_RANK, MGI_TOL};
pub use network::{clifford_matchgate_decompose, contract_network, Decomposition, TaggedTensor, TensorKind, TensorNetwork, MAX_NETWORK_LEGS};

use crate::majorana_ir::Element;
use crate::quon::{count_holes, string_genus_remove, QuonDiagram, Side};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub clifford_form: bool,
    pub matchgate_form: bool,
    pub punctured_matchgate_form: bool,
    /// Holes of the input, before any cleanup.
    pub hole_count: usize,
    pub generic_scattering_count: usize,
    pub boundary_tracking_ok: bool,
}

/// Removes holes by string-genus moves until none applies, always taking the
/// lowest removable hole index. Returns the cleaned diagram and the number
/// of removals.
pub fn string_genus_cleanup(q: &QuonDiagram) -> (QuonDiagram, usize) {
    let mut cur = q.clone();
    let mut removed = 0;
    'outer: loop {
        for h in 0..cur.parity_cuts.len() {
            if let Ok(next) = string_genus_remove(&cur, h) {
                cur = next;
                removed += 1;
                continue 'outer;
            }
        }
        return (cur, removed);
    }
}

pub fn classify(q: &QuonDiagram) -> ClassReport {
    let generic_scattering_count = q.core.elements.iter().filter(|e| e.is_generic_scattering()).count();
    let (cleaned, _) = string_genus_cleanup(q);
    let boundary_tracking_ok = boundary_tracking(&cleaned);
    ClassReport {
        clifford_form: generic_scattering_count == 0,
        matchgate_form: boundary_tracking_ok && count_holes(&cleaned) == 0,
        punctured_matchgate_form: boundary_tracking_ok,
        hole_count: count_holes(q),
        generic_scattering_count,
        boundary_tracking_ok,
    }
}

/// Strand segments `(time, position)` grouped into curves through caps,
/// cups and crossings, with a flag for curves touched by any other element.
struct Curves {
    offsets: Vec<usize>,
    widths: Vec<usize>,
    parent: Vec<usize>,
    dirty: Vec<bool>,
}

impl Curves {
    fn trace(q: &QuonDiagram) -> Self {
        let widths = q.core.widths();
        let mut offsets = Vec::with_capacity(widths.len());
        let mut total = 0;
        for &w in &widths {
            offsets.push(total);
            total += w;
        }
        let mut c = Curves { offsets, widths, parent: (0..total).collect(), dirty: vec![false; total] };
        for (t, e) in q.core.elements.iter().enumerate() {
            let w = c.widths[t];
            match *e {
                Element::Cap { j } => {
                    for p in 0..w {
                        c.union((t, p), (t + 1, if p < j { p } else { p + 2 }));
                    }
                    c.union((t + 1, j), (t + 1, j + 1));
                }
                Element::Cup { j } => {
                    c.union((t, j), (t, j + 1));
                    for p in (0..w).filter(|&p| p != j && p != j + 1) {
                        c.union((t, p), (t + 1, if p < j { p } else { p - 2 }));
                    }
                }
                _ => {
                    for p in 0..w {
                        let to = match *e {
                            Element::BraidPos { j } | Element::BraidNeg { j } if p == j => j + 1,
                            Element::BraidPos { j } | Element::BraidNeg { j } if p == j + 1 => j,
                            _ => p,
                        };
                        c.union((t, p), (t + 1, to));
                    }
                    for p in e.touched() {
                        let id = c.id((t, p));
                        c.dirty[id] = true;
                    }
                }
            }
        }
        for i in 0..c.parent.len() {
            if c.dirty[i] {
                let r = c.find(i);
                c.dirty[r] = true;
            }
        }
        c
    }

    fn id(&self, (t, p): (usize, usize)) -> usize {
        self.offsets[t] + p
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: (usize, usize), b: (usize, usize)) {
        let (ra, rb) = (self.find(self.id(a)), self.find(self.id(b)));
        self.parent[ra] = rb;
    }

    /// Root of the curve through `(t, p)` when that segment exists.
    fn curve(&mut self, t: usize, p: Option<usize>) -> Option<usize> {
        let p = p?;
        (t < self.widths.len() && p < self.widths[t]).then(|| self.find(self.id((t, p))))
    }
}

/// Whether the strand at `(t, p)` lies on a curve untouched by dots, braids and scatterings.
pub fn strand_is_clean(q: &QuonDiagram, t: usize, p: usize) -> bool {
    let mut curves = Curves::trace(q);
    curves.curve(t, Some(p)).is_some_and(|r| !curves.dirty[r])
}

/// Every open interval has tracking curves on both edge strands, and every
/// hole has a tracking curve on or next to its outermost strands on each
/// side. Tracking curves are untouched by dots, braids and scatterings; when
/// the diagram carries marks they must also be marked, otherwise any
/// untouched curve qualifies.
pub fn boundary_tracking(q: &QuonDiagram) -> bool {
    let mut curves = Curves::trace(q);
    let marked: Option<Vec<usize>> = q.boundary_tracking.as_ref().map(|ms| {
        ms.iter().filter_map(|m| curves.curve(m.time_index, Some(m.position))).collect()
    });
    let end = q.core.elements.len();
    let mut ok = |t: usize, p: Option<usize>| {
        curves.curve(t, p).is_some_and(|r| !curves.dirty[r] && marked.as_ref().is_none_or(|m| m.contains(&r)))
    };
    let intervals_ok = q.open_intervals.iter().all(|iv| {
        let t = if iv.side == Side::Top { 0 } else { end };
        ok(t, Some(iv.start)) && ok(t, Some(iv.end() - 1))
    });
    intervals_ok
        && q.parity_cuts.iter().all(|c| {
            let (Some(&lo), Some(&hi)) = (c.strands.first(), c.strands.last()) else { return true };
            let t = c.time_index;
            // A set starting at strand 0 is bounded on the left by the manifold edge.
            let left = lo == 0 || ok(t, Some(lo - 1)) || ok(t, Some(lo));
            left && (ok(t, Some(hi)) || ok(t, Some(hi + 1)))
        })
}
