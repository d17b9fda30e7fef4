use super::monomial::Monomial;
use super::*;
use crate::gaussian_eval::evaluate_closed;
use crate::majorana_ir::random::{random_closed_diagram, random_open_diagram};
use crate::majorana_ir::FockState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

fn random_state(rng: &mut ChaCha8Rng, n_strands: usize) -> FockState {
    let amplitudes = (0..1 << (n_strands / 2)).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    FockState { n_strands, amplitudes }
}

fn apply_monomial(m: &Monomial, s: &FockState) -> FockState {
    let mut out = m.gammas.iter().rev().fold(s.clone(), |acc, &g| acc.gamma(g));
    out.scale(m.coeff);
    out
}

#[test]
fn braid_conjugation_matches_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let n = 8;
        let strands = random_cut_strands(&mut rng, n);
        let m = Monomial::parity(&strands);
        let j = rng.random_range(0..n - 1);
        let positive = rng.random_bool(0.5);
        let (b, binv) = if positive {
            (Element::BraidPos { j }, Element::BraidNeg { j })
        } else {
            (Element::BraidNeg { j }, Element::BraidPos { j })
        };
        let psi = random_state(&mut rng, n);
        let lhs = apply_monomial(&m, &psi.apply(&binv)).apply(&b);
        let rhs = apply_monomial(&m.conjugate_braid(j, positive), &psi);
        for (x, y) in lhs.amplitudes.iter().zip(&rhs.amplitudes) {
            assert!((x - y).norm() < 1e-12);
        }
        // The DotPair string realizes the same operator.
        let cut = ParityCut::new(0, strands);
        let via_elements = cut.parity_string().iter().fold(psi.clone(), |s, e| s.apply(e));
        let direct = apply_monomial(&m, &psi);
        for (x, y) in via_elements.amplitudes.iter().zip(&direct.amplitudes) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}

fn braided_interval(rng: &mut ChaCha8Rng, side: Side, p: usize) -> OpenInterval {
    let size = 2 + 2 * p;
    let mut elements = Vec::new();
    let mut w = 0;
    while w < size {
        elements.push(Element::Cap { j: rng.random_range(0..=w) });
        w += 2;
        if rng.random_bool(0.5) {
            let j = rng.random_range(0..w - 1);
            elements.push(if rng.random_bool(0.5) { Element::BraidPos { j } } else { Element::BraidNeg { j } });
        }
    }
    OpenInterval::with_pairing(side, 0, MajoranaDiagram::new(0, elements, Complex64::new(1.0, 0.0)).unwrap()).unwrap()
}

fn all_bits(p: usize) -> Vec<Vec<u8>> {
    (0..1usize << p).map(|x| (0..p).map(|k| (x >> (p - 1 - k) & 1) as u8).collect()).collect()
}

#[test]
fn encoders_are_orthonormal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in 0..=3 {
        for trial in 0..4 {
            let iv = if trial == 0 { OpenInterval::new(Side::Top, 0, 2 + 2 * p).unwrap() } else { braided_interval(&mut rng, Side::Top, p) };
            for a in all_bits(p) {
                for b in all_bits(p) {
                    let ket = iv.encoder(&b).unwrap();
                    let bra = iv.encoder(&a).unwrap().dagger();
                    let v = evaluate_closed(&MajoranaDiagram::compose(&ket, &bra).unwrap()).unwrap();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((v - expect).norm() < 1e-10, "p={p} a={a:?} b={b:?} v={v}");
                }
            }
        }
    }
}

#[test]
fn four_strand_encoders_have_expected_shape() {
    let iv = OpenInterval::new(Side::Top, 0, 4).unwrap();
    let zero = iv.encoder(&[0]).unwrap();
    assert_eq!(zero.elements, vec![Element::Cap { j: 0 }, Element::Cap { j: 1 }]);
    assert!(close(zero.amplitude, Complex64::new(1.0 / SQRT_2, 0.0), 1e-15));
    let one = iv.encoder(&[1]).unwrap();
    assert_eq!(one.dot_count(), 2);
    assert!(matches!(iv.encoder(&[0, 1]), Err(QuonError::BitLengthMismatch { expected: 1, got: 2 })));
}

#[test]
fn hole_free_quon_equals_majorana_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let d = random_closed_diagram(&mut rng, 8, 20);
        let q = QuonDiagram::from_core(d.clone());
        assert_eq!(evaluate_closed_quon(&q).unwrap(), evaluate_closed(&d).unwrap());
    }
    let empty = QuonDiagram::from_core(MajoranaDiagram::empty());
    assert_eq!(evaluate_closed_quon(&empty).unwrap(), Complex64::new(1.0, 0.0));
}

#[test]
fn hole_expansion_matches_projection_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n_h in 0..=5 {
        for _ in 0..15 {
            let q = random_closed_quon(&mut rng, 10, 24, n_h);
            let fast = evaluate_closed_quon(&q).unwrap();
            let rev = evaluate_closed_quon_reversed(&q).unwrap();
            assert_eq!(fast, rev, "reversed enumeration must agree bit for bit");
            let oracle = evaluate_closed_quon_oracle(&q).unwrap();
            assert!(close(fast, oracle, 1e-9), "n_h={n_h}: {fast} vs {oracle}");
        }
    }
}

#[test]
fn open_intervals_block_closed_evaluation() {
    let q = QuonDiagram::with_intervals(MajoranaDiagram::identity(4), &[4], &[4]).unwrap();
    assert!(matches!(evaluate_closed_quon(&q), Err(QuonError::HasOpenIntervals)));
}

#[test]
fn string_genus_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    while checked < 40 {
        let n_h = rng.random_range(0..3);
        let q = random_closed_quon(&mut rng, 8, 18, n_h);
        let widths = q.core.widths();
        let t = rng.random_range(0..widths.len());
        let odd: Vec<usize> = (1..=widths[t]).filter(|j| j % 2 == 1).collect();
        if odd.is_empty() {
            continue;
        }
        let j = odd[rng.random_range(0..odd.len())];
        let before = evaluate_closed_quon(&q).unwrap();
        let ins = string_genus(&q, GenusMove::Insert { time_index: t, position: j }).unwrap();
        assert_eq!(count_holes(&ins), count_holes(&q) + 1);
        let mid = evaluate_closed_quon(&ins).unwrap();
        assert!(close(mid, before, 1e-9), "{mid} vs {before}");
        let hole = ins.parity_cuts.len() - 1;
        let back = string_genus(&ins, GenusMove::Remove { hole }).unwrap();
        assert_eq!(count_holes(&back), count_holes(&q));
        assert!(close(evaluate_closed_quon(&back).unwrap(), before, 1e-9));
        checked += 1;
    }
}

#[test]
fn loop_around_hole_is_one_over_root_two_of_hole_free() {
    // Cap{0}, cut on the loop's left strand and one spectator pair, Cup{0}.
    let core = MajoranaDiagram::closed(
        vec![Element::Cap { j: 0 }, Element::Cap { j: 1 }, Element::Cup { j: 1 }, Element::Cup { j: 0 }],
        Complex64::new(1.0, 0.0),
    )
    .unwrap();
    let mut q = QuonDiagram::from_core(core);
    q.parity_cuts.push(ParityCut::new(2, vec![0, 1]));
    let with_hole = evaluate_closed_quon(&q).unwrap();
    let without = string_genus_remove(&q, 0).unwrap();
    assert_eq!(count_holes(&without), 0);
    let oracle = evaluate_closed_quon_oracle(&q).unwrap();
    assert!(close(with_hole, oracle, 1e-12));
    let hole_free_value = evaluate_closed(&without.core).unwrap() / without.core.amplitude;
    assert!(close(with_hole, hole_free_value / SQRT_2, 1e-12));
}

#[test]
fn string_genus_drops_loop_from_spanning_cuts_and_marks() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut checked = 0;
    while checked < 30 {
        let n_h = rng.random_range(0..2);
        let q = random_closed_quon(&mut rng, 8, 18, n_h);
        let widths = q.core.widths();
        let t = rng.random_range(0..widths.len());
        if widths[t] < 2 {
            continue;
        }
        let j = 2 * rng.random_range(0..widths[t] / 2) + 1;
        if j == 1 && widths[t] < 4 {
            continue;
        }
        let mut ins = string_genus_insert(&q, t, j).unwrap();
        let hole = ins.parity_cuts.len() - 1;
        // A cut spanning the whole loop plus one outside pair.
        let outside = if j >= 3 { [0, 1] } else { [j + 2, j + 3] };
        ins.parity_cuts.push(ParityCut::new(t + 1, vec![j, j + 1, outside[0], outside[1]]));
        ins.boundary_tracking = Some(vec![StrandMark { time_index: t + 1, position: j + 1 }]);
        ins.validate().unwrap();
        let with_cut = evaluate_closed_quon(&ins).unwrap();
        let back = string_genus_remove(&ins, hole).unwrap();
        assert_eq!(back.parity_cuts.last().unwrap().strands, outside.iter().map(|&x| if x > j { x - 2 } else { x }).collect::<Vec<_>>());
        assert_eq!(back.boundary_tracking, Some(vec![]));
        assert!(close(evaluate_closed_quon(&back).unwrap(), with_cut, 1e-9));

        // A second cut inside the loop blocks the removal.
        let mut two = string_genus_insert(&q, t, j).unwrap();
        two.parity_cuts.push(ParityCut::new(t + 1, (0..=j).collect()));
        assert!(matches!(string_genus_remove(&two, hole), Err(QuonError::NoEnclosingLoop(_))));
        checked += 1;
    }
}

#[test]
fn string_genus_rejects_interacting_loops() {
    let core = MajoranaDiagram::closed(
        vec![Element::Cap { j: 0 }, Element::Cap { j: 1 }, Element::BraidPos { j: 0 }, Element::Cup { j: 1 }, Element::Cup { j: 0 }],
        Complex64::new(1.0, 0.0),
    )
    .unwrap();
    let mut q = QuonDiagram::from_core(core);
    q.parity_cuts.push(ParityCut::new(3, vec![0, 1]));
    assert!(matches!(string_genus_remove(&q, 0), Err(QuonError::NoEnclosingLoop(_))));
    assert!(matches!(string_genus_insert(&q, 1, 2), Err(QuonError::InvalidRegion(_))));
    assert!(matches!(string_genus_insert(&q, 1, 5), Err(QuonError::InvalidRegion(_))));
}

#[test]
fn normalization_preserves_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..30 {
        let mut q = random_closed_quon(&mut rng, 8, 20, 2);
        let widths = q.core.widths();
        let t = rng.random_range(0..widths.len());
        q.parity_cuts.push(ParityCut::new(t, (0..widths[t]).collect()));
        q.parity_cuts.push(q.parity_cuts[0].clone());
        let before = evaluate_closed_quon(&q).unwrap();
        let mut n = q.clone();
        let removed = normalize_cuts(&mut n);
        assert!(removed >= 1);
        assert!(close(evaluate_closed_quon(&n).unwrap(), before, 1e-9));
    }
}

#[test]
fn moving_cuts_across_commuting_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let mut moved = 0;
    for _ in 0..400 {
        let q = random_closed_quon(&mut rng, 8, 20, 1);
        let t0 = q.parity_cuts[0].time_index;
        let target = rng.random_range(0..=q.core.elements.len());
        match move_cut(&q, 0, target) {
            Ok(m) => {
                assert!(close(evaluate_closed_quon(&m).unwrap(), evaluate_closed_quon(&q).unwrap(), 1e-9));
                moved += usize::from(target != t0);
            }
            Err(e) => assert!(matches!(e, QuonError::PatternMismatch(_))),
        }
    }
    assert!(moved > 10);
}

/// Two four-strand bundles crossing with sixteen positive braids.
fn bundle_crossing(b: usize) -> Vec<Element> {
    (0..4).flat_map(|s| (0..4).rev().map(move |k| Element::BraidPos { j: b + k + s })).collect()
}

#[test]
fn swap_hole_is_removable() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let top = random_open_diagram(&mut rng, 0, 8, 2);
        let bottom = random_open_diagram(&mut rng, 8, 0, 2);
        let mut elements = top.elements.clone();
        let t0 = elements.len();
        elements.extend(bundle_crossing(0));
        let t1 = elements.len();
        elements.extend(bottom.elements.clone());
        let core = MajoranaDiagram::closed(elements, top.amplitude * bottom.amplitude).unwrap();
        let mut q = QuonDiagram::from_core(core);
        q.parity_cuts.push(ParityCut::new(t0, vec![0, 1, 2, 3]));
        q.parity_cuts.push(ParityCut::new(t0, vec![4, 5, 6, 7]));
        q.parity_cuts.push(ParityCut::new(t1, vec![0, 1, 2, 3]));
        let before = evaluate_closed_quon(&q).unwrap();
        let after = swap_hole_remove(&q, 2).unwrap();
        assert_eq!(count_holes(&after), 2);
        assert_eq!(after.core.amplitude, q.core.amplitude);
        assert!(close(evaluate_closed_quon(&after).unwrap(), before, 1e-9));

        let mut wrong = q.clone();
        wrong.parity_cuts[2] = ParityCut::new(t1, vec![2, 3, 4, 5]);
        assert!(matches!(swap_hole_remove(&wrong, 2), Err(QuonError::PatternMismatch(_))));
        assert!(matches!(swap_hole_remove(&q, 0), Err(QuonError::PatternMismatch(_))));
    }
}

#[test]
fn resolution_of_identity_projects_even_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for p in 0..=2 {
        for _ in 0..8 {
            let size = 2 + 2 * p;
            let top = random_open_diagram(&mut rng, 0, size, 3);
            let bottom = random_open_diagram(&mut rng, size, 0, 3);
            let iv = braided_interval(&mut rng, Side::Top, p);
            let mut sum = Complex64::new(0.0, 0.0);
            for b in all_bits(p) {
                let enc = iv.encoder(&b).unwrap();
                let upper = evaluate_closed(&MajoranaDiagram::compose(&top, &enc.dagger()).unwrap()).unwrap();
                let lower = evaluate_closed(&MajoranaDiagram::compose(&enc, &bottom).unwrap()).unwrap();
                sum += upper * lower;
            }
            let mut glued = QuonDiagram::from_core(MajoranaDiagram::compose(&top, &bottom).unwrap());
            glued.parity_cuts.push(ParityCut::new(top.elements.len(), (0..size).collect()));
            let expect = evaluate_closed_quon(&glued).unwrap();
            assert!(close(sum, expect, 1e-9), "p={p}: {sum} vs {expect}");
        }
    }
}

#[test]
fn encoded_identity_gives_kronecker_delta() {
    for p in 0..=2 {
        let size = 2 + 2 * p;
        let q = QuonDiagram::with_intervals(MajoranaDiagram::identity(size), &[size], &[size]).unwrap();
        for a in all_bits(p) {
            for b in all_bits(p) {
                let closed = encode_basis(&q, &BasisAssignment { bits: vec![a.clone(), b.clone()] }).unwrap();
                let v = evaluate_closed_quon(&closed).unwrap();
                assert!((v - if a == b { 1.0 } else { 0.0 }).norm() < 1e-12);
            }
        }
    }
}
