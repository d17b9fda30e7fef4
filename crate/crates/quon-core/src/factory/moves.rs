use super::{CrossSide, Crossing, FactoryLedger, Insert, Move, Payload, Segment, Stretch, StretchTarget, Switch, SwitchChange};
use crate::error::{QuonError, Result};
use crate::gaussian_eval::evaluate_closed;
use crate::majorana_ir::{expi, is_generic_angle, Element, Orientation};
use crate::quon::{string_genus_insert, OpenInterval, ParityCut, QuonDiagram, Side};
use std::f64::consts::FRAC_PI_8;

fn bad_segment(msg: impl Into<String>) -> QuonError {
    QuonError::InvalidSegment(msg.into())
}

/// Splices `elems` in before element `at`. Cuts and marks at `at` stay
/// before the block unless `after` is set.
fn splice_block(q: &mut QuonDiagram, at: usize, elems: &[Element], after: bool) {
    let n = elems.len();
    q.core.elements.splice(at..at, elems.iter().copied());
    let moves = |t: usize| t > at || (after && t == at);
    for c in q.parity_cuts.iter_mut().filter(|c| moves(c.time_index)) {
        c.time_index += n;
    }
    if let Some(marks) = &mut q.boundary_tracking {
        for m in marks.iter_mut().filter(|m| moves(m.time_index)) {
            m.time_index += n;
        }
    }
}

/// Position at time `target` of the strand at `(t, p)`, or `None` if it
/// turns at a cap or cup first.
fn track(q: &QuonDiagram, t: usize, p: usize, target: usize) -> Option<usize> {
    let els = &q.core.elements;
    let swap = |j: usize, pos: usize| if pos == j { j + 1 } else if pos == j + 1 { j } else { pos };
    let mut pos = p;
    if target >= t {
        for e in &els[t..target] {
            pos = match *e {
                Element::Cap { j } if pos >= j => pos + 2,
                Element::Cup { j } if pos == j || pos == j + 1 => return None,
                Element::Cup { j } if pos > j + 1 => pos - 2,
                Element::BraidPos { j } | Element::BraidNeg { j } => swap(j, pos),
                _ => pos,
            };
        }
    } else {
        for e in els[target..t].iter().rev() {
            pos = match *e {
                Element::Cup { j } if pos >= j => pos + 2,
                Element::Cap { j } if pos == j || pos == j + 1 => return None,
                Element::Cap { j } if pos > j + 1 => pos - 2,
                Element::BraidPos { j } | Element::BraidNeg { j } => swap(j, pos),
                _ => pos,
            };
        }
    }
    Some(pos)
}

/// Carries the segment's strand across element `c.element` by conjugating
/// it with positive braids. Returns the number of braids on each side.
fn cross(q: &mut QuonDiagram, seg: Segment, c: Crossing) -> Result<usize> {
    let e = c.element;
    let el = *q.core.elements.get(e).ok_or_else(|| bad_segment(format!("no element {e}")))?;
    if el.is_cap_or_cup() {
        return Err(bad_segment(format!("element {e} is a cap or cup")));
    }
    let touched = el.touched();
    let (lo, hi) = (touched[0].min(touched[touched.len() - 1]), touched[0].max(touched[touched.len() - 1]));
    let width = q.core.widths()[e];
    let (start, before, after, delta, sign): (usize, Vec<Element>, Vec<Element>, isize, f64) = match c.side {
        CrossSide::Left => {
            if lo == 0 {
                return Err(bad_segment(format!("nothing left of element {e}")));
            }
            let sign = if matches!(el, Element::Dot { .. }) { -1.0 } else { 1.0 };
            let before = (lo - 1..hi).map(|j| Element::BraidPos { j }).collect();
            let after = (lo - 1..hi).rev().map(|j| Element::BraidNeg { j }).collect();
            (lo - 1, before, after, -1, sign)
        }
        CrossSide::Right => {
            if hi + 1 >= width {
                return Err(bad_segment(format!("nothing right of element {e}")));
            }
            let before = (lo..=hi).rev().map(|j| Element::BraidPos { j }).collect();
            let after = (lo..=hi).map(|j| Element::BraidNeg { j }).collect();
            (hi + 1, before, after, 1, 1.0)
        }
    };
    if track(q, seg.time_index, seg.position, e) != Some(start) {
        return Err(bad_segment(format!("segment does not border element {e} on the {:?} side", c.side)));
    }
    let m = before.len();
    q.core.elements[e] = el.shifted(delta);
    q.core.amplitude *= sign;
    splice_block(q, e, &before, false);
    splice_block(q, e + m + 1, &after, true);
    Ok(m)
}

/// New index of element or time slot `s` after crossing element `e` with `m` braids per side.
fn after_crossing(s: usize, e: usize, m: usize) -> usize {
    if s < e {
        s
    } else if s == e {
        s + m
    } else {
        s + 2 * m
    }
}

fn segment_exists(q: &QuonDiagram, seg: Segment) -> Result<()> {
    match q.core.widths().get(seg.time_index) {
        Some(&w) if seg.position < w => Ok(()),
        _ => Err(bad_segment(format!("no strand at {seg:?}"))),
    }
}

/// Stretches the segment across each element of the path in turn, then, for
/// encoder targets, cuts it open and routes both ends along the left edge to
/// the boundary on the target side.
pub fn stretch(q: &QuonDiagram, mv: &Stretch, ledger: &FactoryLedger) -> Result<(QuonDiagram, FactoryLedger)> {
    segment_exists(q, mv.segment)?;
    let mut out = q.clone();
    let mut led = ledger.clone();
    let mut seg = mv.segment;
    let mut done: Vec<(usize, usize)> = Vec::new();
    for c in &mv.path {
        let e = done.iter().fold(c.element, |s, &(e, m)| after_crossing(s, e, m));
        let m = cross(&mut out, seg, Crossing { element: e, side: c.side })?;
        if seg.time_index > e {
            seg.time_index += 2 * m;
        }
        for s in &mut led.transformed_scatterings {
            *s = after_crossing(*s, e, m);
        }
        done.push((e, m));
    }
    match mv.target {
        StretchTarget::Bulk => {}
        StretchTarget::ExistingEncoder { side } => attach_encoder(&mut out, &mut led, seg, side, false)?,
        StretchTarget::NewEncoder { side } => attach_encoder(&mut out, &mut led, seg, side, true)?,
    }
    out.validate()?;
    led.moves.push(Move::Stretch(mv.clone()));
    Ok((out, led))
}

fn attach_encoder(q: &mut QuonDiagram, led: &mut FactoryLedger, seg: Segment, side: Side, fresh: bool) -> Result<()> {
    let Segment { time_index: t, position: p } = seg;
    // The new pair runs along the left edge, so it would pass every hole
    // whose parity set is anchored at the left edge.
    let on_route = |c: &ParityCut| match side {
        Side::Top => c.time_index <= t,
        Side::Bottom => c.time_index > t,
    };
    if q.parity_cuts.iter().any(|c| on_route(c) && c.strands.first() == Some(&0)) {
        return Err(QuonError::PathCrossesHole);
    }
    if !fresh && !q.open_intervals.iter().any(|iv| iv.side == side) {
        return Err(QuonError::IntervalMismatch(format!("no {side:?} interval to stretch into")));
    }
    let block: Vec<Element> = match side {
        Side::Top => (0..p)
            .flat_map(|k| [Element::BraidPos { j: k + 1 }, Element::BraidPos { j: k }])
            .chain([Element::Cup { j: p + 1 }])
            .collect(),
        Side::Bottom => [Element::Cap { j: p + 1 }]
            .into_iter()
            .chain((0..p).rev().flat_map(|k| [Element::BraidNeg { j: k }, Element::BraidNeg { j: k + 1 }]))
            .collect(),
    };
    let n = block.len();
    let shifted_part = |i: usize| match side {
        Side::Top => i < t,
        Side::Bottom => i >= t,
    };
    for (i, e) in q.core.elements.iter_mut().enumerate() {
        if shifted_part(i) {
            *e = e.shifted(2);
        }
    }
    q.core.elements.splice(t..t, block);
    let moved = |time: usize| time > t;
    for c in &mut q.parity_cuts {
        if on_route(c) {
            c.strands.iter_mut().for_each(|s| *s += 2);
        }
        if moved(c.time_index) {
            c.time_index += n;
        }
    }
    if let Some(marks) = &mut q.boundary_tracking {
        for m in marks.iter_mut() {
            let on = match side {
                Side::Top => m.time_index <= t,
                Side::Bottom => m.time_index > t,
            };
            if on {
                m.position += 2;
            }
            if moved(m.time_index) {
                m.time_index += n;
            }
        }
    }
    led.shift_sites(t, n);
    match side {
        Side::Top => q.core.width_in += 2,
        Side::Bottom => q.core.width_out += 2,
    }
    let first = q.open_intervals.iter().position(|iv| iv.side == side);
    for iv in q.open_intervals.iter_mut().filter(|iv| iv.side == side) {
        iv.start += 2;
    }
    if fresh {
        let at = first.unwrap_or(match side {
            Side::Top => 0,
            Side::Bottom => q.open_intervals.len(),
        });
        q.open_intervals.insert(at, OpenInterval::new(side, 0, 2)?);
    } else {
        let iv = &mut q.open_intervals[first.expect("checked above")];
        let mut pairing = iv.pairing.clone();
        pairing.elements = [Element::Cap { j: 0 }].into_iter().chain(pairing.elements.iter().map(|e| e.shifted(2))).collect();
        pairing.width_out += 2;
        *iv = OpenInterval::with_pairing(side, 0, pairing)?;
    }
    Ok(())
}

/// Inserts the payload with the normalization that keeps every component.
pub fn insert_move(q: &QuonDiagram, mv: &Insert, ledger: &FactoryLedger) -> Result<(QuonDiagram, FactoryLedger)> {
    let (t, x) = (mv.region.time_index, mv.region.position);
    let w = *q.core.widths().get(t).ok_or_else(|| QuonError::InvalidRegion(format!("time {t} out of range")))?;
    if x > w {
        return Err(QuonError::InvalidRegion(format!("gap {x} beyond width {w}")));
    }
    // A cut whose strand set changes across the gap marks a hole there.
    let hole_at_gap = q.parity_cuts.iter().filter(|c| c.time_index == t).any(|c| {
        let left = x > 0 && c.strands.contains(&(x - 1));
        left != c.strands.contains(&x)
    });
    if hole_at_gap {
        return Err(QuonError::RegionOccupied(format!("a hole sits at gap {x}, time {t}")));
    }
    let mut led = ledger.clone();
    let out = match &mv.payload {
        Payload::Closed(d) => {
            d.validate()?;
            if !d.is_closed() {
                return Err(QuonError::NotClosed);
            }
            let mut out = q.clone();
            if !d.elements.is_empty() {
                if d.dot_count() % 2 == 1 {
                    return Err(QuonError::ParityMismatch("payload has odd parity".into()));
                }
                let v = evaluate_closed(d)?;
                if v.norm() < 1e-12 {
                    return Err(QuonError::ParityMismatch("payload evaluates to zero".into()));
                }
                let elems: Vec<Element> = d.elements.iter().map(|e| e.shifted(x as isize)).collect();
                splice_block(&mut out, t, &elems, false);
                out.core.amplitude *= d.amplitude / v;
                led.shift_sites(t, elems.len());
            }
            out
        }
        Payload::StringHolePair => {
            if x % 2 == 0 {
                return Err(QuonError::ParityMismatch(format!("a single loop needs an odd gap, got {x}")));
            }
            led.shift_sites(t, 2);
            string_genus_insert(q, t, x)?
        }
        Payload::DoubleStringHolePair => {
            if x % 2 == 1 {
                return Err(QuonError::ParityMismatch(format!("a double loop needs an even gap, got {x}")));
            }
            let mut out = q.clone();
            let elems = [Element::Cap { j: x }, Element::Cap { j: x + 1 }, Element::Cup { j: x + 1 }, Element::Cup { j: x }];
            splice_block(&mut out, t, &elems, false);
            out.parity_cuts.push(ParityCut::new(t + 2, (0..=x + 1).collect()));
            led.shift_sites(t, 4);
            out
        }
    };
    out.validate()?;
    led.moves.push(Move::Insert(mv.clone()));
    Ok((out, led))
}

fn mismatch(msg: impl Into<String>) -> QuonError {
    QuonError::PatternMismatch(msg.into())
}

/// Local replacement at `site`. Only a braid turned into a generic
/// scattering is recorded as transformed.
pub fn switch_move(q: &QuonDiagram, mv: &Switch, ledger: &FactoryLedger) -> Result<(QuonDiagram, FactoryLedger)> {
    let site = mv.site;
    let mut out = q.clone();
    let mut led = ledger.clone();
    let el = q.core.elements.get(site).copied();
    match mv.change {
        SwitchChange::FlipBraid => {
            out.core.elements[site] = match el {
                Some(Element::BraidPos { j }) => Element::BraidNeg { j },
                Some(Element::BraidNeg { j }) => Element::BraidPos { j },
                _ => return Err(mismatch(format!("element {site} is not a braid"))),
            };
        }
        SwitchChange::BraidToScattering { theta } => {
            // BraidPos = e^{iπ/8}·Scattering(−π/2), BraidNeg = e^{−iπ/8}·Scattering(π/2).
            let (j, phase) = match el {
                Some(Element::BraidPos { j }) => (j, expi(FRAC_PI_8)),
                Some(Element::BraidNeg { j }) => (j, expi(-FRAC_PI_8)),
                _ => return Err(mismatch(format!("element {site} is not a braid"))),
            };
            out.core.elements[site] = Element::Scattering { j, theta, orientation: Orientation::Vertical };
            out.core.amplitude *= phase;
            if is_generic_angle(theta) {
                led.transformed_scatterings.push(site);
            }
        }
        SwitchChange::SetAngle { theta } => {
            let Some(Element::Scattering { j, orientation, .. }) = el else {
                return Err(mismatch(format!("element {site} is not a scattering")));
            };
            out.core.elements[site] = Element::Scattering { j, theta, orientation };
            if !is_generic_angle(theta) {
                led.transformed_scatterings.retain(|&s| s != site);
            }
        }
        SwitchChange::AddDotPair { j } => {
            match q.core.widths().get(site) {
                Some(&w) if j + 1 < w => {}
                _ => return Err(mismatch(format!("no parallel strands {j}, {} before element {site}", j + 1))),
            }
            splice_block(&mut out, site, &[Element::DotPair { j, k: j + 1 }], false);
            led.shift_sites(site, 1);
        }
    }
    out.validate()?;
    led.moves.push(Move::Switch(*mv));
    Ok((out, led))
}
