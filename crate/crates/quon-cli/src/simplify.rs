//! Greedy simplifier: string-genus removals, Reidemeister II cancellations
//! and quarter-turn scattering reductions, repeated until none applies.

use quon_core::classify::string_genus_cleanup;
use quon_core::majorana_ir::quarter_turns;
use quon_core::quon::QuonDiagram;
use quon_core::rewrite::{apply_rule, RewriteRule, RewriteSite};
use quon_core::Element;
use serde::Serialize;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SimplifyStats {
    pub genus_removals: usize,
    pub braid_cancellations: usize,
    pub scattering_reductions: usize,
}

/// Applies `rule` to the `len` elements at `at`, moving later cuts and
/// marks. Refuses when a cut or mark sits strictly inside the site.
fn rewrite(q: &QuonDiagram, at: usize, len: usize, rule: &RewriteRule) -> Option<QuonDiagram> {
    let inside = |t: usize| t > at && t < at + len;
    if q.parity_cuts.iter().any(|c| inside(c.time_index)) || q.boundary_tracking.iter().flatten().any(|m| inside(m.time_index)) {
        return None;
    }
    let core = apply_rule(&q.core, rule, &RewriteSite::at(at, len)).ok()?;
    let delta = core.elements.len() as isize - q.core.elements.len() as isize;
    let shift = |t: usize| if t >= at + len { (t as isize + delta) as usize } else { t };
    let mut out = q.clone();
    out.core = core;
    for c in &mut out.parity_cuts {
        c.time_index = shift(c.time_index);
    }
    for m in out.boundary_tracking.iter_mut().flatten() {
        m.time_index = shift(m.time_index);
    }
    out.validate().ok()?;
    Some(out)
}

fn cancel_braid_pair(q: &QuonDiagram) -> Option<QuonDiagram> {
    q.core.elements.windows(2).enumerate().find_map(|(i, w)| match (w[0], w[1]) {
        (Element::BraidPos { j }, Element::BraidNeg { j: k }) | (Element::BraidNeg { j }, Element::BraidPos { j: k }) if j == k => {
            rewrite(q, i, 2, &RewriteRule::ReidemeisterII)
        }
        _ => None,
    })
}

fn reduce_quarter_turn(q: &QuonDiagram) -> Option<QuonDiagram> {
    q.core.elements.iter().enumerate().find_map(|(i, e)| {
        let k = e.theta_equivalent().and_then(quarter_turns)?;
        rewrite(q, i, 1, &RewriteRule::ScatteringReduceAt { k })
    })
}

pub fn simplify(q: &QuonDiagram) -> (QuonDiagram, SimplifyStats) {
    let mut stats = SimplifyStats::default();
    let mut cur = q.clone();
    loop {
        let (cleaned, removed) = string_genus_cleanup(&cur);
        stats.genus_removals += removed;
        cur = cleaned;
        if let Some(next) = cancel_braid_pair(&cur) {
            stats.braid_cancellations += 1;
            cur = next;
        } else if let Some(next) = reduce_quarter_turn(&cur) {
            stats.scattering_reductions += 1;
            cur = next;
        } else {
            return (cur, stats);
        }
    }
}
