//! Ising-model applications: partition functions as closed quon diagrams,
//! a spin-sum oracle, the Kramers–Wannier rewrite chain and the
//! star-triangle solver.
//!
//! A lattice with `cols = M` spins per row is drawn on `2M` strands. Spin
//! `c` owns the strand pair `(2c, 2c+1)`, whose pair parity is the spin's
//! `X`; the parity on `(2c+1, 2c+2)` is `Z_c Z_{c+1}`. Caps prepare every
//! spin in `|+⟩`, rows are separated by time-like bonds `e^K + e^{-K} X`
//! and row bonds are `e^{K ZZ}`. Both are `ScatteringStar` elements with
//! parameter `ln tanh K`, vertical for time-like bonds and horizontal for
//! row bonds. Every plaquette carries a double string-hole pair.

mod star_triangle;

pub use star_triangle::{star_triangle_oracle, star_triangle_residual, star_triangle_solve, StarTriangleInput, StarTriangleSolution};

use crate::error::{QuonError, Result};
use crate::majorana_ir::{Element, MajoranaDiagram, Orientation};
use crate::quon::{evaluate_closed_quon, string_genus_remove, string_genus_insert, ParityCut, QuonDiagram};
use crate::rewrite::{spacetime_dual, spacetime_dual_inverse};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

/// Largest lattice accepted by [`partition_oracle`].
pub const ORACLE_MAX_SITES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingEdge {
    pub a: usize,
    pub b: usize,
    /// Dimensionless coupling `J / k_B T`.
    pub k: f64,
}

/// Per-row coupling of each bond slot; `None` marks an absent bond.
type BondGrid = Vec<Vec<Option<f64>>>;

/// Spins on a `rows × cols` grid, numbered row-major, with arbitrary edges.
/// Only edges between grid neighbours have a planar drawing here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingLattice {
    pub rows: usize,
    pub cols: usize,
    pub edges: Vec<IsingEdge>,
}

impl IsingLattice {
    pub fn new(rows: usize, cols: usize, edges: Vec<IsingEdge>) -> Result<Self> {
        let n = rows * cols;
        for e in &edges {
            if e.a >= n || e.b >= n || e.a == e.b {
                return Err(QuonError::InvalidDiagram(format!("edge ({}, {}) on {n} sites", e.a, e.b)));
            }
            if !e.k.is_finite() {
                return Err(QuonError::InvalidAngle(format!("coupling {} is not finite", e.k)));
            }
        }
        Ok(Self { rows, cols, edges })
    }

    /// Open square lattice with the same coupling on every edge.
    pub fn square(rows: usize, cols: usize, k: f64) -> Result<Self> {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let s = r * cols + c;
                if c + 1 < cols {
                    edges.push(IsingEdge { a: s, b: s + 1, k });
                }
                if r + 1 < rows {
                    edges.push(IsingEdge { a: s, b: s + cols, k });
                }
            }
        }
        Self::new(rows, cols, edges)
    }

    pub fn sites(&self) -> usize {
        self.rows * self.cols
    }

    /// Replaces the coupling of the edge between `a` and `b`.
    pub fn set_coupling(&mut self, a: usize, b: usize, k: f64) -> Result<()> {
        if !k.is_finite() {
            return Err(QuonError::InvalidAngle(format!("coupling {k} is not finite")));
        }
        let e = self
            .edges
            .iter_mut()
            .find(|e| (e.a, e.b) == (a, b) || (e.a, e.b) == (b, a))
            .ok_or_else(|| QuonError::InvalidDiagram(format!("no edge between {a} and {b}")))?;
        e.k = k;
        Ok(())
    }

    /// Summed couplings of row bonds `(r, c)–(r, c+1)` and time-like bonds
    /// `(r, c)–(r+1, c)`; `None` marks an absent bond.
    fn grid_couplings(&self) -> Result<(BondGrid, BondGrid)> {
        let (rows, cols) = (self.rows, self.cols);
        let mut row_bonds = vec![vec![None; cols.saturating_sub(1)]; rows];
        let mut time_bonds = vec![vec![None; cols]; rows.saturating_sub(1)];
        for e in &self.edges {
            let (a, b) = (e.a.min(e.b), e.a.max(e.b));
            let slot = if b == a + 1 && a % cols + 1 < cols {
                &mut row_bonds[a / cols][a % cols]
            } else if b == a + cols {
                &mut time_bonds[a / cols][a % cols]
            } else {
                return Err(QuonError::NonPlanarInput(format!("edge ({a}, {b}) does not join grid neighbours")));
            };
            *slot = Some(slot.unwrap_or(0.0) + e.k);
        }
        Ok((row_bonds, time_bonds))
    }
}

/// Edge angle `φ` with `tanh φ = e^{-2K}`; complex for `K < 0`.
pub fn edge_angle(k: f64) -> Complex64 {
    let t = Complex64::new((-2.0 * k).exp(), 0.0);
    ((1.0 + t) / (1.0 - t)).ln() * 0.5
}

/// Star parameter `ln tanh K` shared by both bond orientations.
fn star_parameter(k: f64) -> Complex64 {
    Complex64::new(k.tanh(), 0.0).ln()
}

/// Element and scalar with `scalar · element` equal to the bond operator.
fn bond_element(j: usize, k: f64, orientation: Orientation) -> (Element, Complex64) {
    match orientation {
        // e^K + e^{-K} P; at K = 0 this is the unnormalized projector 1 + P.
        Orientation::Vertical if k == 0.0 => {
            (Element::ScatteringStar { j, phi: Complex64::new(0.0, 0.0), orientation: Orientation::Horizontal }, Complex64::new(1.0, 0.0))
        }
        Orientation::Vertical => {
            let e = Element::ScatteringStar { j, phi: star_parameter(k), orientation };
            let (u, _) = e.quadratic_coeffs().expect("star has coefficients");
            (e, Complex64::new(k.exp(), 0.0) / u)
        }
        // cosh K + sinh K P.
        Orientation::Horizontal => {
            (Element::ScatteringStar { j, phi: star_parameter(k), orientation }, Complex64::new(k.cosh(), 0.0))
        }
    }
}

/// Time index of the start of each row's bond layer, in the diagram
/// without plaquette decorations.
struct Assembly {
    quon: QuonDiagram,
    row_starts: Vec<usize>,
}

fn assemble(l: &IsingLattice, decorate: bool) -> Result<Assembly> {
    let (row_bonds, time_bonds) = l.grid_couplings()?;
    let (rows, cols) = (l.rows, l.cols);
    let mut elements: Vec<Element> = (0..cols).map(|c| Element::Cap { j: 2 * c }).collect();
    let mut cuts = Vec::new();
    let mut amplitude = Complex64::new(SQRT_2.powi(cols as i32), 0.0);
    let mut row_starts = Vec::with_capacity(rows);
    let mut push_bond = |elements: &mut Vec<Element>, j, k, o| {
        let (e, s) = bond_element(j, k, o);
        elements.push(e);
        amplitude *= s;
    };
    for r in 0..rows {
        row_starts.push(elements.len());
        for (c, k) in row_bonds[r].iter().enumerate() {
            // A zero row bond is the identity.
            if let Some(k) = k.filter(|&k| k != 0.0) {
                push_bond(&mut elements, 2 * c + 1, k, Orientation::Horizontal);
            }
        }
        if r + 1 == rows {
            break;
        }
        if decorate {
            for c in 0..cols.saturating_sub(1) {
                let x = 2 * c + 2;
                elements.extend([Element::Cap { j: x }, Element::Cap { j: x + 1 }]);
                cuts.push(ParityCut::new(elements.len(), (0..=x + 1).collect()));
                elements.extend([Element::Cup { j: x + 1 }, Element::Cup { j: x }]);
            }
        }
        for (c, k) in time_bonds[r].iter().enumerate() {
            // An absent time-like bond leaves the spins independent: K = 0.
            push_bond(&mut elements, 2 * c, k.unwrap_or(0.0), Orientation::Vertical);
        }
    }
    elements.extend((0..cols).rev().map(|c| Element::Cup { j: 2 * c }));
    let mut quon = QuonDiagram::from_core(MajoranaDiagram::closed(elements, amplitude)?);
    quon.parity_cuts = cuts;
    quon.validate()?;
    Ok(Assembly { quon, row_starts })
}

/// Closed quon diagram whose value is the partition function of `l`.
pub fn build_ising_quon(l: &IsingLattice) -> Result<QuonDiagram> {
    Ok(assemble(l, true)?.quon)
}

/// Partition function through the quon diagram.
pub fn ising_partition_quon(l: &IsingLattice) -> Result<f64> {
    Ok(evaluate_closed_quon(&build_ising_quon(l)?)?.re)
}

/// `Σ_σ Π_edges e^{K σ_a σ_b}` by enumeration.
pub fn partition_oracle(l: &IsingLattice) -> Result<f64> {
    let n = l.sites();
    if n > ORACLE_MAX_SITES {
        return Err(QuonError::TooManySites(n));
    }
    let total = (0..1u32 << n)
        .map(|s| {
            let energy: f64 = l
                .edges
                .iter()
                .map(|e| if (s >> e.a & 1) == (s >> e.b & 1) { e.k } else { -e.k })
                .sum();
            energy.exp()
        })
        .sum();
    Ok(total)
}

/// Dual coupling `K*` read off the space-time dual of a time-like bond
/// star: the horizontal star it becomes has parameter `ln tanh K*`.
pub fn dual_coupling(k: f64) -> Result<f64> {
    let theta = -Complex64::i() * star_parameter(k);
    let (_, phi) = spacetime_dual(theta)?;
    let tanh_dual = (Complex64::i() * phi).exp();
    if tanh_dual.im.abs() > 1e-12 || !(0.0..1.0).contains(&tanh_dual.re) {
        return Err(QuonError::InvalidAngle(format!("coupling {k} has no real dual")));
    }
    Ok(tanh_dual.re.atanh())
}

/// Fixed point of [`dual_coupling`] by bisection on `K − K*(K)`.
pub fn self_dual_coupling() -> f64 {
    let f = |k: f64| k - dual_coupling(k).expect("positive couplings have real duals");
    let (mut lo, mut hi) = (0.1, 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KwStepKind {
    Initial,
    RemovePlaquetteHole,
    RemoveFreeLoop,
    InsertDualPlaquetteHole,
    SpaceTimeDual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KwStep {
    pub kind: KwStepKind,
    pub diagram: QuonDiagram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KwChain {
    pub steps: Vec<KwStep>,
    pub dual_lattice: IsingLattice,
}

/// Dual of a complete open square lattice: one site per plaquette, each
/// dual edge crossing one original edge with coupling `K*`.
pub fn dual_lattice(l: &IsingLattice) -> Result<IsingLattice> {
    let (row_bonds, time_bonds) = complete_grid(l)?;
    let (rows, cols) = (l.rows - 1, l.cols - 1);
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let s = r * cols + c;
            if c + 1 < cols {
                edges.push(IsingEdge { a: s, b: s + 1, k: dual_coupling(time_bonds[r][c + 1])? });
            }
            if r + 1 < rows {
                edges.push(IsingEdge { a: s, b: s + cols, k: dual_coupling(row_bonds[r + 1][c])? });
            }
        }
    }
    IsingLattice::new(rows, cols, edges)
}

type Grid = Vec<Vec<f64>>;

fn complete_grid(l: &IsingLattice) -> Result<(Grid, Grid)> {
    if l.rows < 2 || l.cols < 2 {
        return Err(QuonError::InvalidDiagram("the dual needs at least a 2×2 lattice".into()));
    }
    let (row_bonds, time_bonds) = l.grid_couplings()?;
    let full = |g: Vec<Vec<Option<f64>>>| -> Result<Grid> {
        g.into_iter()
            .map(|row| row.into_iter().map(|k| k.ok_or_else(|| QuonError::InvalidDiagram("square lattice has a missing edge".into()))).collect())
            .collect()
    };
    Ok((full(row_bonds)?, full(time_bonds)?))
}

/// Deletes the first loop made of an adjacent cap and cup; amplitude × √2.
fn remove_free_loop(q: &QuonDiagram) -> Result<QuonDiagram> {
    let els = &q.core.elements;
    let (i, j) = els
        .windows(2)
        .enumerate()
        .find_map(|(i, w)| match (w[0], w[1]) {
            (Element::Cap { j }, Element::Cup { j: k }) if j == k => Some((i, j)),
            _ => None,
        })
        .ok_or_else(|| QuonError::PatternMismatch("no free loop".into()))?;
    let mut out = q.clone();
    out.core.elements.drain(i..i + 2);
    out.core.amplitude *= SQRT_2;
    for c in &mut out.parity_cuts {
        if c.time_index == i + 1 {
            if c.strands.contains(&j) != c.strands.contains(&(j + 1)) {
                return Err(QuonError::PatternMismatch("loop encloses a hole".into()));
            }
            c.strands.retain(|&s| s != j && s != j + 1);
            for s in &mut c.strands {
                if *s > j + 1 {
                    *s -= 2;
                }
            }
            c.time_index = i;
        } else if c.time_index > i + 1 {
            c.time_index -= 2;
        }
    }
    out.parity_cuts.retain(|c| !c.strands.is_empty());
    out.validate()?;
    Ok(out)
}

/// Replaces the star at `site` by its space-time dual with the opposite
/// orientation, moving the scalar into the amplitude.
fn dualize_star(q: &QuonDiagram, site: usize) -> Result<QuonDiagram> {
    let Element::ScatteringStar { j, phi, orientation } = q.core.elements[site] else {
        return Err(QuonError::NotAScattering(site));
    };
    let theta = -Complex64::i() * phi;
    let (scalar, new) = match orientation {
        Orientation::Vertical => {
            let (a, phi_h) = spacetime_dual(theta)?;
            (a, Element::ScatteringStar { j, phi: Complex64::i() * phi_h, orientation: Orientation::Horizontal })
        }
        Orientation::Horizontal => {
            let (theta_v, s) = spacetime_dual_inverse(theta)?;
            (s, Element::ScatteringStar { j, phi: Complex64::i() * theta_v, orientation: Orientation::Vertical })
        }
    };
    let mut out = q.clone();
    out.core.elements[site] = new;
    out.core.amplitude *= scalar;
    Ok(out)
}

/// Rewrites the lattice diagram into the dual network: plaquette holes and
/// their loops are removed, string-hole pairs are added on the dual
/// plaquettes (the interior sites), and every bond star is replaced by its
/// space-time dual. Each step has the same value as the previous one.
pub fn kw_rewrite_chain(l: &IsingLattice) -> Result<KwChain> {
    let dual = dual_lattice(l)?;
    let plain = assemble(l, false)?;
    let mut cur = build_ising_quon(l)?;
    let mut steps = vec![KwStep { kind: KwStepKind::Initial, diagram: cur.clone() }];
    let mut push = |cur: &mut QuonDiagram, next: QuonDiagram, kind| {
        *cur = next;
        steps.push(KwStep { kind, diagram: cur.clone() });
    };
    while !cur.parity_cuts.is_empty() {
        let next = string_genus_remove(&cur, 0)?;
        push(&mut cur, next, KwStepKind::RemovePlaquetteHole);
        let next = remove_free_loop(&cur)?;
        push(&mut cur, next, KwStepKind::RemoveFreeLoop);
    }
    debug_assert_eq!(cur.core.elements, plain.quon.core.elements);
    for r in (1..l.rows - 1).rev() {
        for c in (1..l.cols - 1).rev() {
            let next = string_genus_insert(&cur, plain.row_starts[r], 2 * c + 1)?;
            push(&mut cur, next, KwStepKind::InsertDualPlaquetteHole);
        }
    }
    let stars: Vec<usize> = (0..cur.core.elements.len()).filter(|&i| matches!(cur.core.elements[i], Element::ScatteringStar { .. })).collect();
    for site in stars {
        let next = dualize_star(&cur, site)?;
        push(&mut cur, next, KwStepKind::SpaceTimeDual);
    }
    Ok(KwChain { steps, dual_lattice: dual })
}

/// A bond star reduced to its orientation, first strand and parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarSite {
    pub orientation: Orientation,
    pub j: usize,
    pub phi: Complex64,
}

/// Every `ScatteringStar` in time order.
pub fn star_skeleton(q: &QuonDiagram) -> Vec<StarSite> {
    q.core
        .elements
        .iter()
        .filter_map(|e| match *e {
            Element::ScatteringStar { j, phi, orientation } => Some(StarSite { orientation, j, phi }),
            _ => None,
        })
        .collect()
}

/// Same stars in the same order, with parameters equal to within `tol`.
pub fn skeletons_match(a: &[StarSite], b: &[StarSite], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.orientation, x.j) == (y.orientation, y.j) && (x.phi - y.phi).norm() <= tol)
}

/// Stars of the final chain diagram that belong to the dual network, read
/// one strand to the left. The first and last rows of original row bonds
/// and the time-like bonds of the two edge columns touch the outer face
/// and are dropped.
pub fn kw_interior_skeleton(l: &IsingLattice, final_step: &QuonDiagram) -> Result<Vec<StarSite>> {
    complete_grid(l)?;
    let (rows, cols) = (l.rows, l.cols);
    let stars = star_skeleton(final_step);
    let mut out = Vec::new();
    let mut it = stars.into_iter();
    for r in 0..rows {
        for _ in 0..cols - 1 {
            let s = it.next().ok_or_else(|| QuonError::PatternMismatch("missing row bond".into()))?;
            if r > 0 && r + 1 < rows {
                out.push(StarSite { j: s.j - 1, ..s });
            }
        }
        if r + 1 == rows {
            break;
        }
        for c in 0..cols {
            let s = it.next().ok_or_else(|| QuonError::PatternMismatch("missing time-like bond".into()))?;
            if c > 0 && c + 1 < cols {
                out.push(StarSite { j: s.j - 1, ..s });
            }
        }
    }
    Ok(out)
}
