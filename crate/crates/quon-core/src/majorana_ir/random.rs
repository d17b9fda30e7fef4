//! Random diagram generators used by tests, acceptance checks and benches.

use super::{c, Element, MajoranaDiagram, Orientation};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

/// A random angle; complex with probability `p_complex`.
pub fn random_angle<R: Rng>(rng: &mut R, p_complex: f64) -> Complex64 {
    let re = rng.random_range(-PI..PI);
    let im = if rng.random_bool(p_complex) { rng.random_range(-0.5..0.5) } else { 0.0 };
    c(re, im)
}

/// A random width-preserving element on `width ≥ 2` strands.
pub fn random_local_element<R: Rng>(rng: &mut R, width: usize) -> Element {
    let j = rng.random_range(0..width - 1);
    match rng.random_range(0..8) {
        0 => Element::Dot { j: rng.random_range(0..width) },
        1 => {
            let a = rng.random_range(0..width - 1);
            let b = rng.random_range(a + 1..width);
            Element::DotPair { j: a, k: b }
        }
        2 => Element::BraidPos { j },
        3 => Element::BraidNeg { j },
        4 | 5 => Element::Scattering {
            j,
            theta: random_angle(rng, 0.3),
            orientation: if rng.random_bool(0.5) { Orientation::Vertical } else { Orientation::Horizontal },
        },
        6 => Element::ScatteringStar {
            j,
            phi: c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            orientation: if rng.random_bool(0.5) { Orientation::Vertical } else { Orientation::Horizontal },
        },
        _ => Element::DotPair { j, k: j + 1 },
    }
}

/// A random closed diagram with at most `max_width` strands and at most
/// `max_elements` elements (including the closing cups).
pub fn random_closed_diagram<R: Rng>(rng: &mut R, max_width: usize, max_elements: usize) -> MajoranaDiagram {
    let max_width = max_width.max(2) & !1;
    let mut elements = Vec::new();
    let mut w = 0usize;
    while elements.len() + w / 2 < max_elements {
        let budget = max_elements - elements.len() - w / 2;
        let can_cap = w + 2 <= max_width && budget >= 2;
        let roll = rng.random_range(0..10);
        if w == 0 {
            if !can_cap {
                break;
            }
            elements.push(Element::Cap { j: 0 });
            w += 2;
        } else if roll < 2 && can_cap {
            elements.push(Element::Cap { j: rng.random_range(0..=w) });
            w += 2;
        } else if roll < 3 {
            elements.push(Element::Cup { j: rng.random_range(0..w - 1) });
            w -= 2;
        } else {
            elements.push(random_local_element(rng, w));
        }
    }
    while w > 0 {
        elements.push(Element::Cup { j: rng.random_range(0..w - 1) });
        w -= 2;
    }
    let amp = c(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5));
    MajoranaDiagram::closed(elements, amp).expect("generator keeps widths valid")
}

/// Embeds `pattern` into a random closed context with `extra` spectator
/// strands. Returns the diagram and the index of the pattern's first element.
pub fn random_embedding<R: Rng>(rng: &mut R, pattern: &MajoranaDiagram, extra: usize, n_local: usize) -> (MajoranaDiagram, usize) {
    let extra = extra & !1;
    let offset = rng.random_range(0..=extra);
    let mut elements = Vec::new();
    let mut width = 0;
    let total_in = pattern.width_in + extra;
    while width < total_in {
        elements.push(Element::Cap { j: rng.random_range(0..=width) });
        width += 2;
        for _ in 0..rng.random_range(0..=n_local) {
            elements.push(random_local_element(rng, width));
        }
    }
    let start = elements.len();
    elements.extend(pattern.elements.iter().map(|e| e.shifted(offset as isize)));
    let mut width = pattern.width_out + extra;
    while width > 0 {
        for _ in 0..rng.random_range(0..=n_local) {
            elements.push(random_local_element(rng, width));
        }
        elements.push(Element::Cup { j: rng.random_range(0..width - 1) });
        width -= 2;
    }
    let d = MajoranaDiagram::closed(elements, pattern.amplitude).expect("embedding keeps widths valid");
    (d, start)
}

/// A random diagram from `width_in` to `width_out` strands (both even):
/// caps and cups move the width to the target with local elements between.
pub fn random_open_diagram<R: Rng>(rng: &mut R, width_in: usize, width_out: usize, n_local: usize) -> MajoranaDiagram {
    let mut elements = Vec::new();
    let mut w = width_in;
    let detour = rng.random_range(0..=2usize);
    let peak = width_in.max(width_out) + 2 * detour;
    let local = |rng: &mut R, elements: &mut Vec<Element>, w: usize| {
        if w >= 2 {
            for _ in 0..rng.random_range(0..=n_local) {
                elements.push(random_local_element(rng, w));
            }
        }
    };
    local(rng, &mut elements, w);
    while w < peak {
        elements.push(Element::Cap { j: rng.random_range(0..=w) });
        w += 2;
        local(rng, &mut elements, w);
    }
    while w > width_out {
        elements.push(Element::Cup { j: rng.random_range(0..w - 1) });
        w -= 2;
        local(rng, &mut elements, w);
    }
    let amp = c(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5));
    MajoranaDiagram::new(width_in, elements, amp).expect("generator keeps widths valid")
}
