//! Reordering two adjacent elements with disjoint strand support.

use crate::majorana_ir::Element;

struct Effect {
    /// Labels the element acts on or removes.
    uses: Vec<usize>,
    /// For caps: the new labels and the labels on either side of the gap.
    creates: Option<([usize; 2], Option<usize>, Option<usize>)>,
}

fn apply(e: &Element, labels: &mut Vec<usize>, next: &mut usize) -> Effect {
    match *e {
        Element::Cap { j } => {
            let new = [*next, *next + 1];
            *next += 2;
            let left = j.checked_sub(1).map(|p| labels[p]);
            let right = labels.get(j).copied();
            labels.splice(j..j, new);
            Effect { uses: vec![], creates: Some((new, left, right)) }
        }
        Element::Cup { j } => {
            let uses = vec![labels[j], labels[j + 1]];
            labels.drain(j..j + 2);
            Effect { uses, creates: None }
        }
        _ => Effect { uses: e.touched().iter().map(|&p| labels[p]).collect(), creates: None },
    }
}

fn rebuild(e: &Element, eff: &Effect, labels: &mut Vec<usize>) -> Option<Element> {
    let pos = |l: usize, labels: &Vec<usize>| labels.iter().position(|&x| x == l);
    match *e {
        Element::Cap { .. } => {
            let (new, left, right) = eff.creates?;
            let j = match (right.and_then(|r| pos(r, labels)), left.and_then(|l| pos(l, labels))) {
                (Some(r), Some(l)) if l + 1 != r => return None,
                (Some(r), _) => r,
                (None, Some(l)) => l + 1,
                (None, None) if labels.is_empty() => 0,
                _ => return None,
            };
            labels.splice(j..j, new);
            Some(Element::Cap { j })
        }
        Element::Cup { .. } => {
            let a = pos(eff.uses[0], labels)?;
            let b = pos(eff.uses[1], labels)?;
            if b != a + 1 {
                return None;
            }
            labels.drain(a..a + 2);
            Some(Element::Cup { j: a })
        }
        Element::DotPair { .. } => {
            let a = pos(eff.uses[0], labels)?;
            let b = pos(eff.uses[1], labels)?;
            Some(Element::DotPair { j: a, k: b })
        }
        Element::Dot { .. } => Some(Element::Dot { j: pos(eff.uses[0], labels)? }),
        _ => {
            let a = pos(eff.uses[0], labels)?;
            let b = pos(eff.uses[1], labels)?;
            if b != a + 1 {
                return None;
            }
            Some(e.shifted(a as isize - e.position() as isize))
        }
    }
}

/// Given `first` then `second` acting on `width` strands, returns the
/// reordered pair and the sign picked up, or `None` if they interact.
pub fn commute_pair(first: &Element, second: &Element, width: usize) -> Option<(Element, Element, f64)> {
    let mut labels: Vec<usize> = (0..width).collect();
    let mut next = width;
    let ea = apply(first, &mut labels, &mut next);
    let eb = apply(second, &mut labels, &mut next);
    let touched = |eff: &Effect| {
        let mut v = eff.uses.clone();
        if let Some((new, _, _)) = eff.creates {
            v.extend(new);
        }
        v
    };
    let ta = touched(&ea);
    let tb = touched(&eb);
    if ta.iter().any(|x| tb.contains(x)) {
        return None;
    }
    // A cap anchored on labels the other element removes is ambiguous only
    // when both anchors disappear; `rebuild` rejects that case.
    let mut labels: Vec<usize> = (0..width).collect();
    let b2 = rebuild(second, &eb, &mut labels)?;
    let a2 = rebuild(first, &ea, &mut labels)?;
    if let (Some((_, la, ra)), Some((_, lb, rb))) = (ea.creates, eb.creates) {
        if la == lb && ra == rb {
            return None;
        }
    }
    let sign = if first.is_odd() && second.is_odd() { -1.0 } else { 1.0 };
    Some((b2, a2, sign))
}
