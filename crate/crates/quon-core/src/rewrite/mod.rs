//! Value-preserving local rewrites, scattering expansions and angle solvers.

mod commute;
mod local;
mod solvers;

pub use commute::commute_pair;
pub use solvers::{YangBaxterSolution, solve_yang_baxter, solve_yang_baxter_mirrored, spacetime_dual, spacetime_dual_inverse};

use crate::error::{QuonError, Result};
use crate::majorana_ir::{c, expi, quarter_turns, Element, MajoranaDiagram, Orientation};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI, SQRT_2};

/// Kink and twist shapes removed by the first Reidemeister move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurlShape {
    /// `Cap{j}` followed by a braid on the new pair.
    TwistedCap,
    /// A braid on a pair followed by `Cup` of that pair.
    TwistedCup,
    /// `Cap{c}`, braid on `b = c ± 1`, `Cup{u}` with `u ∈ {b, c}`.
    Kink { cap_right_of_braid: bool, cup_at_cap: bool },
}

/// Calibrated curl factors: `(shape, positive braid, writhe)`. Removing the
/// curl multiplies the amplitude by `e^{iπω/8}`.
pub const CURL_WRITHE: [(CurlShape, bool, i8); 12] = [
    (CurlShape::TwistedCap, true, 1),
    (CurlShape::TwistedCap, false, -1),
    (CurlShape::TwistedCup, true, 1),
    (CurlShape::TwistedCup, false, -1),
    (CurlShape::Kink { cap_right_of_braid: true, cup_at_cap: false }, true, 1),
    (CurlShape::Kink { cap_right_of_braid: true, cup_at_cap: false }, false, -1),
    (CurlShape::Kink { cap_right_of_braid: true, cup_at_cap: true }, true, -1),
    (CurlShape::Kink { cap_right_of_braid: true, cup_at_cap: true }, false, 1),
    (CurlShape::Kink { cap_right_of_braid: false, cup_at_cap: false }, true, 1),
    (CurlShape::Kink { cap_right_of_braid: false, cup_at_cap: false }, false, -1),
    (CurlShape::Kink { cap_right_of_braid: false, cup_at_cap: true }, true, -1),
    (CurlShape::Kink { cap_right_of_braid: false, cup_at_cap: true }, false, 1),
];

pub fn curl_writhe(shape: CurlShape, positive: bool) -> i8 {
    CURL_WRITHE.iter().find(|(s, p, _)| *s == shape && *p == positive).map(|x| x.2).expect("table is total")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RewriteRule {
    /// Moves a dot across the two legs of a cap or cup, factor `±i`.
    DotRelocateCapCup,
    /// Removes a curl; `writhe` must match the calibrated table.
    ReidemeisterI { writhe: i8 },
    ReidemeisterII,
    ReidemeisterIII,
    /// Moves a dot through a braid to the other strand, factor `±1`.
    DotThroughBraid,
    /// Replaces a braid by the opposite braid plus a dot pair.
    BraidTypeSwitch,
    /// Replaces a scattering at angle `kπ/2` by braids, dots or caps.
    ScatteringReduceAt { k: u8 },
    /// Left triple equals `scalar` times the right triple.
    YangBaxter { thetas: [Complex64; 3], phis: [Complex64; 3], scalar: Complex64 },
    /// Vertical θ to horizontal φ (or back) with scalar `a`.
    SpaceTimeDual { theta: Complex64, a: Complex64, phi: Complex64 },
    /// A dot passes a scattering onto the other strand; θ becomes π−θ.
    DotPassScattering,
    /// A dot pair on the scattering's strands is absorbed into its angle.
    DotAbsorbScattering,
    CommuteDistantElements,
    /// Replaces `DotPair{j,j+1}` by two positive braids, factor `e^{-iπ/4}`.
    PairDotsToBraids,
}

impl RewriteRule {
    /// Yang–Baxter rule for the triple `S_j(θ₁) S_{j+1}(θ₂) S_j(θ₃)`.
    pub fn yang_baxter(thetas: [Complex64; 3]) -> Result<Self> {
        let s = solve_yang_baxter(thetas[0], thetas[1], thetas[2])?;
        Ok(RewriteRule::YangBaxter { thetas, phis: s.phis, scalar: s.scalar })
    }

    /// Yang–Baxter rule for the mirrored triple `S_{j+1}(θ₁) S_j(θ₂) S_{j+1}(θ₃)`.
    pub fn yang_baxter_mirrored(thetas: [Complex64; 3]) -> Result<Self> {
        let s = solve_yang_baxter_mirrored(thetas[0], thetas[1], thetas[2])?;
        Ok(RewriteRule::YangBaxter { thetas, phis: s.phis, scalar: s.scalar })
    }

    pub fn spacetime_dual(theta: Complex64) -> Result<Self> {
        let (a, phi) = spacetime_dual(theta)?;
        Ok(RewriteRule::SpaceTimeDual { theta, a, phi })
    }
}

/// Element indices a rule acts on, in time order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteSite {
    pub elements: Vec<usize>,
}

impl RewriteSite {
    pub fn at(start: usize, len: usize) -> Self {
        Self { elements: (start..start + len).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpansionKind {
    /// Parallel strands plus a dot-pair term.
    ParallelDot,
    /// Positive plus negative braid.
    Braid,
}

fn mismatch(msg: impl Into<String>) -> QuonError {
    QuonError::PatternMismatch(msg.into())
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()))
}

/// Braid expansion weights `(α, β)` with `u + vP = α·B₊ + β·B₋`.
pub fn braid_weights(u: Complex64, v: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let alpha = SQRT_2 * expi(FRAC_PI_8) * (u - i * v) / 2.0;
    let beta = SQRT_2 * expi(-FRAC_PI_8) * (u + i * v) / 2.0;
    (alpha, beta)
}

/// `A_θ, B_θ` of the braid expansion of a vertical scattering.
pub fn braid_expansion_weights(theta: Complex64) -> (Complex64, Complex64) {
    let e = crate::majorana_ir::expi_c(theta);
    let i = Complex64::i();
    (expi(-FRAC_PI_8) * (1.0 + i * e) / 2.0, expi(FRAC_PI_8) * (1.0 - i * e) / 2.0)
}

/// Splits the scattering at `site` into a weighted pair of diagrams.
pub fn expand_scattering(d: &MajoranaDiagram, site: usize, kind: ExpansionKind) -> Result<Vec<(Complex64, MajoranaDiagram)>> {
    let e = d.elements.get(site).ok_or(QuonError::NotAScattering(site))?;
    if !e.is_scattering() {
        return Err(QuonError::NotAScattering(site));
    }
    let (u, v) = e.quadratic_coeffs().expect("scattering");
    let j = e.position();
    let replace = |with: Vec<Element>| {
        let mut out = d.clone();
        out.elements.splice(site..site + 1, with);
        out
    };
    Ok(match kind {
        ExpansionKind::ParallelDot => vec![(u, replace(vec![])), (v, replace(vec![Element::DotPair { j, k: j + 1 }]))],
        ExpansionKind::Braid => {
            let (alpha, beta) = braid_weights(u, v);
            vec![(alpha, replace(vec![Element::BraidPos { j }])), (beta, replace(vec![Element::BraidNeg { j }]))]
        }
    })
}

fn check_site(d: &MajoranaDiagram, site: &RewriteSite, len: usize) -> Result<usize> {
    if site.elements.len() != len {
        return Err(mismatch(format!("rule needs {len} elements")));
    }
    let start = site.elements[0];
    if site.elements.iter().enumerate().any(|(k, &x)| x != start + k) {
        return Err(mismatch("site elements must be consecutive"));
    }
    if start + len > d.elements.len() {
        return Err(mismatch("site out of range"));
    }
    Ok(start)
}

fn splice(d: &MajoranaDiagram, start: usize, len: usize, with: Vec<Element>, scalar: Complex64) -> MajoranaDiagram {
    let mut out = d.clone();
    out.elements.splice(start..start + len, with);
    out.amplitude *= scalar;
    out
}

/// Applies `rule` at `site` and returns the rewritten diagram.
pub fn apply_rule(d: &MajoranaDiagram, rule: &RewriteRule, site: &RewriteSite) -> Result<MajoranaDiagram> {
    let one = c(1.0, 0.0);
    let out = match rule {
        RewriteRule::DotRelocateCapCup => {
            let s = check_site(d, site, 2)?;
            let (a, b) = (d.elements[s], d.elements[s + 1]);
            let i = Complex64::i();
            let (dot, factor) = match (a, b) {
                (Element::Cap { j }, Element::Dot { j: x }) if x == j => (Element::Dot { j: j + 1 }, i),
                (Element::Cap { j }, Element::Dot { j: x }) if x == j + 1 => (Element::Dot { j }, -i),
                (Element::Dot { j: x }, Element::Cup { j }) if x == j + 1 => (Element::Dot { j }, i),
                (Element::Dot { j: x }, Element::Cup { j }) if x == j => (Element::Dot { j: j + 1 }, -i),
                _ => return Err(mismatch("expected a dot on a cap or cup leg")),
            };
            let with = if matches!(a, Element::Cap { .. }) { vec![a, dot] } else { vec![dot, b] };
            splice(d, s, 2, with, factor)
        }
        RewriteRule::ReidemeisterI { writhe } => {
            let (start, len, shape, positive) = match_curl(d, site)?;
            let expected = curl_writhe(shape, positive);
            if expected != *writhe {
                return Err(mismatch(format!("curl has writhe {expected}")));
            }
            let keep: Vec<Element> = match shape {
                CurlShape::TwistedCap => vec![d.elements[start]],
                CurlShape::TwistedCup => vec![d.elements[start + 1]],
                CurlShape::Kink { .. } => vec![],
            };
            let _ = len;
            splice(d, start, len, keep, expi(FRAC_PI_8 * f64::from(expected)))
        }
        RewriteRule::ReidemeisterII => {
            let s = check_site(d, site, 2)?;
            match (d.elements[s], d.elements[s + 1]) {
                (Element::BraidPos { j }, Element::BraidNeg { j: k }) | (Element::BraidNeg { j }, Element::BraidPos { j: k }) if j == k => {
                    splice(d, s, 2, vec![], one)
                }
                _ => return Err(mismatch("expected opposite braids at one position")),
            }
        }
        RewriteRule::ReidemeisterIII => {
            let s = check_site(d, site, 3)?;
            let (a, b, e) = (d.elements[s], d.elements[s + 1], d.elements[s + 2]);
            let same = |x: &Element, y: &Element| std::mem::discriminant(x) == std::mem::discriminant(y);
            if !(a.is_braid() && same(&a, &b) && same(&a, &e)) {
                return Err(mismatch("expected three braids of one sign"));
            }
            let (p, q, r) = (a.position(), b.position(), e.position());
            if p != r || (q != p + 1 && q + 1 != p) {
                return Err(mismatch("expected σ_j σ_{j±1} σ_j"));
            }
            let mk = |j: usize| a.shifted(j as isize - p as isize);
            splice(d, s, 3, vec![mk(q), mk(p), mk(q)], one)
        }
        RewriteRule::DotThroughBraid => {
            let s = check_site(d, site, 2)?;
            let (a, b) = (d.elements[s], d.elements[s + 1]);
            let (braid, dot, dot_first) = match (a, b) {
                (Element::Dot { .. }, br) if br.is_braid() => (br, a, true),
                (br, Element::Dot { .. }) if br.is_braid() => (br, b, false),
                _ => return Err(mismatch("expected a dot next to a braid")),
            };
            let j = braid.position();
            let x = dot.position();
            if x != j && x != j + 1 {
                return Err(mismatch("dot not on the braid's strands"));
            }
            let moved = Element::Dot { j: if x == j { j + 1 } else { j } };
            let (before, after) = if dot_first { (vec![dot, braid], vec![braid, moved]) } else { (vec![braid, dot], vec![moved, braid]) };
            let k = local::relate(&before, &after, j).ok_or_else(|| mismatch("dot does not pass"))?;
            splice(d, s, 2, after, k)
        }
        RewriteRule::BraidTypeSwitch => {
            let s = check_site(d, site, 1)?;
            let e = d.elements[s];
            let j = e.position();
            let (after, k) = match e {
                Element::BraidPos { .. } => (vec![Element::DotPair { j, k: j + 1 }, Element::BraidNeg { j }], expi(FRAC_PI_4)),
                Element::BraidNeg { .. } => (vec![Element::DotPair { j, k: j + 1 }, Element::BraidPos { j }], expi(-FRAC_PI_4)),
                _ => return Err(mismatch("expected a braid")),
            };
            splice(d, s, 1, after, k)
        }
        RewriteRule::ScatteringReduceAt { k } => {
            let s = check_site(d, site, 1)?;
            let e = d.elements[s];
            let theta = e.theta_equivalent().ok_or_else(|| mismatch("expected a scattering"))?;
            let q = quarter_turns(theta).ok_or_else(|| mismatch("angle is generic"))?;
            if q != k % 4 {
                return Err(mismatch(format!("angle is {q}·π/2")));
            }
            let (after, scalar) = reduce_quarter(&e, q);
            splice(d, s, 1, after, scalar)
        }
        RewriteRule::YangBaxter { thetas, phis, scalar } => {
            let s = check_site(d, site, 3)?;
            let trip = [d.elements[s], d.elements[s + 1], d.elements[s + 2]];
            let mut angles = [c(0.0, 0.0); 3];
            for (slot, e) in angles.iter_mut().zip(&trip) {
                *slot = e.vertical_theta().ok_or_else(|| mismatch("expected vertical scatterings"))?;
            }
            if !angles.iter().zip(thetas).all(|(a, b)| close(*a, *b)) {
                return Err(mismatch("angles differ from the rule"));
            }
            let (p, q) = (trip[0].position(), trip[1].position());
            if trip[2].position() != p || (q != p + 1 && q + 1 != p) {
                return Err(mismatch("expected S_j S_{j±1} S_j"));
            }
            let mk = |j: usize, theta: Complex64| Element::Scattering { j, theta, orientation: Orientation::Vertical };
            splice(d, s, 3, vec![mk(q, phis[0]), mk(p, phis[1]), mk(q, phis[2])], *scalar)
        }
        RewriteRule::SpaceTimeDual { theta, a, phi } => {
            let s = check_site(d, site, 1)?;
            let e = d.elements[s];
            let j = e.position();
            match e {
                Element::Scattering { theta: t, orientation: Orientation::Vertical, .. } if close(t, *theta) => {
                    splice(d, s, 1, vec![Element::Scattering { j, theta: *phi, orientation: Orientation::Horizontal }], *a)
                }
                Element::Scattering { theta: t, orientation: Orientation::Horizontal, .. } if close(t, *phi) => {
                    splice(d, s, 1, vec![Element::Scattering { j, theta: *theta, orientation: Orientation::Vertical }], one / *a)
                }
                _ => return Err(mismatch("expected the rule's scattering")),
            }
        }
        RewriteRule::DotPassScattering => {
            let s = check_site(d, site, 2)?;
            let (a, b) = (d.elements[s], d.elements[s + 1]);
            let (scat, dot, dot_first) = match (a, b) {
                (Element::Dot { .. }, sc) if sc.is_scattering() => (sc, a, true),
                (sc, Element::Dot { .. }) if sc.is_scattering() => (sc, b, false),
                _ => return Err(mismatch("expected a dot next to a scattering")),
            };
            let j = scat.position();
            let x = dot.position();
            if x != j && x != j + 1 {
                return Err(mismatch("dot not on the scattering's strands"));
            }
            let moved = Element::Dot { j: if x == j { j + 1 } else { j } };
            let new_scat = match scat {
                Element::Scattering { j, theta, orientation } => Element::Scattering { j, theta: PI - theta, orientation },
                Element::ScatteringStar { j, phi, orientation } => {
                    Element::ScatteringStar { j, phi: c(0.0, PI) - phi, orientation }
                }
                _ => unreachable!(),
            };
            let (before, after) = if dot_first { (vec![dot, scat], vec![new_scat, moved]) } else { (vec![scat, dot], vec![moved, new_scat]) };
            let k = local::relate(&before, &after, j).ok_or_else(|| mismatch("singular scattering"))?;
            splice(d, s, 2, after, k)
        }
        RewriteRule::DotAbsorbScattering => {
            let s = check_site(d, site, 2)?;
            let (a, b) = (d.elements[s], d.elements[s + 1]);
            let (scat, pair) = match (a, b) {
                (p @ Element::DotPair { .. }, sc) | (sc, p @ Element::DotPair { .. }) if sc.is_scattering() => (sc, p),
                _ => return Err(mismatch("expected a dot pair next to a scattering")),
            };
            let j = scat.position();
            if pair != (Element::DotPair { j, k: j + 1 }) {
                return Err(mismatch("dot pair not on the scattering's strands"));
            }
            let new_scat = match scat {
                Element::Scattering { j, theta, orientation: Orientation::Vertical } => {
                    Element::Scattering { j, theta: theta + PI, orientation: Orientation::Vertical }
                }
                Element::Scattering { j, theta, orientation: Orientation::Horizontal } => {
                    Element::Scattering { j, theta: -theta, orientation: Orientation::Horizontal }
                }
                Element::ScatteringStar { j, phi, orientation: Orientation::Vertical } => {
                    Element::ScatteringStar { j, phi: phi + c(0.0, PI), orientation: Orientation::Vertical }
                }
                Element::ScatteringStar { j, phi, orientation: Orientation::Horizontal } => {
                    Element::ScatteringStar { j, phi: -phi, orientation: Orientation::Horizontal }
                }
                _ => unreachable!(),
            };
            let k = local::relate(&[a, b], &[new_scat], j).ok_or_else(|| mismatch("singular scattering"))?;
            splice(d, s, 2, vec![new_scat], k)
        }
        RewriteRule::CommuteDistantElements => {
            let s = check_site(d, site, 2)?;
            let w = d.widths()[s];
            let (b2, a2, sign) =
                commute_pair(&d.elements[s], &d.elements[s + 1], w).ok_or_else(|| mismatch("elements share strands"))?;
            splice(d, s, 2, vec![b2, a2], c(sign, 0.0))
        }
        RewriteRule::PairDotsToBraids => {
            let s = check_site(d, site, 1)?;
            match d.elements[s] {
                Element::DotPair { j, k } if k == j + 1 => {
                    splice(d, s, 1, vec![Element::BraidPos { j }, Element::BraidPos { j }], expi(-FRAC_PI_4))
                }
                _ => return Err(mismatch("expected an adjacent dot pair")),
            }
        }
    };
    out.validate()?;
    Ok(out)
}

/// Replacement for a scattering at a multiple of π/2.
fn reduce_quarter(e: &Element, q: u8) -> (Vec<Element>, Complex64) {
    let j = e.position();
    let horizontal = matches!(
        e,
        Element::Scattering { orientation: Orientation::Horizontal, .. } | Element::ScatteringStar { orientation: Orientation::Horizontal, .. }
    );
    let one = c(1.0, 0.0);
    let s2 = c(SQRT_2, 0.0);
    match (horizontal, q) {
        (false, 0) => (vec![], one),
        (false, 2) => (vec![Element::DotPair { j, k: j + 1 }], one),
        (false, 3) => (vec![Element::BraidPos { j }], expi(-FRAC_PI_8)),
        (false, _) => (vec![Element::BraidNeg { j }], expi(FRAC_PI_8)),
        (true, 0) => (vec![Element::Cup { j }, Element::Cap { j }], s2),
        (true, 2) => (vec![Element::Dot { j }, Element::Cup { j }, Element::Cap { j }, Element::Dot { j }], s2),
        (true, 1) => (vec![Element::BraidPos { j }], s2 * expi(FRAC_PI_8)),
        (true, _) => (vec![Element::BraidNeg { j }], s2 * expi(-FRAC_PI_8)),
    }
}

fn match_curl(d: &MajoranaDiagram, site: &RewriteSite) -> Result<(usize, usize, CurlShape, bool)> {
    let n = site.elements.len();
    let s = check_site(d, site, n)?;
    let el = &d.elements[s..s + n];
    match *el {
        [Element::Cap { j }, b] if b.is_braid() && b.position() == j => {
            Ok((s, 2, CurlShape::TwistedCap, matches!(b, Element::BraidPos { .. })))
        }
        [b, Element::Cup { j }] if b.is_braid() && b.position() == j => {
            Ok((s, 2, CurlShape::TwistedCup, matches!(b, Element::BraidPos { .. })))
        }
        [Element::Cap { j: cp }, b, Element::Cup { j: u }] if b.is_braid() => {
            let bp = b.position();
            let cap_right_of_braid = if cp == bp + 1 {
                true
            } else if bp == cp + 1 {
                false
            } else {
                return Err(mismatch("braid not adjacent to the cap"));
            };
            let cup_at_cap = if u == cp {
                true
            } else if u == bp {
                false
            } else {
                return Err(mismatch("cup does not close the curl"));
            };
            Ok((s, 3, CurlShape::Kink { cap_right_of_braid, cup_at_cap }, matches!(b, Element::BraidPos { .. })))
        }
        _ => Err(mismatch("expected a twisted cap, twisted cup or kink")),
    }
}

#[cfg(test)]
mod tests;
