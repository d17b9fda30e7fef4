use super::*;
use crate::gaussian_eval::evaluate_closed_fast;
use crate::majorana_ir::random::{random_angle, random_embedding};
use crate::majorana_ir::{element_operator, evaluate_closed_oracle, expi_c};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pattern(width_in: usize, elements: Vec<Element>) -> MajoranaDiagram {
    MajoranaDiagram::new(width_in, elements, c(1.0, 0.0)).unwrap()
}

fn check_rule(rule: &RewriteRule, pat: &MajoranaDiagram, seed: u64, contexts: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..contexts {
        let (d, start) = random_embedding(&mut rng, pat, 4, 2);
        let site = RewriteSite::at(start, pat.elements.len());
        let after = apply_rule(&d, rule, &site).unwrap_or_else(|e| panic!("{rule:?} on {pat:?}: {e}"));
        let v0 = evaluate_closed_oracle(&d).unwrap();
        let v1 = evaluate_closed_oracle(&after).unwrap();
        assert!((v0 - v1).norm() <= 1e-9 * v0.norm().max(1.0), "{rule:?} on {pat:?}: {v0} vs {v1}");
    }
}

#[test]
fn curl_calibration() {
    let shapes: Vec<(MajoranaDiagram, CurlShape)> = vec![
        (pattern(2, vec![Element::Cap { j: 1 }, Element::BraidPos { j: 1 }]), CurlShape::TwistedCap),
        (pattern(4, vec![Element::BraidPos { j: 1 }, Element::Cup { j: 1 }]), CurlShape::TwistedCup),
        (
            pattern(2, vec![Element::Cap { j: 1 }, Element::BraidPos { j: 0 }, Element::Cup { j: 0 }]),
            CurlShape::Kink { cap_right_of_braid: true, cup_at_cap: false },
        ),
        (
            pattern(2, vec![Element::Cap { j: 1 }, Element::BraidPos { j: 0 }, Element::Cup { j: 1 }]),
            CurlShape::Kink { cap_right_of_braid: true, cup_at_cap: true },
        ),
        (
            pattern(2, vec![Element::Cap { j: 0 }, Element::BraidPos { j: 1 }, Element::Cup { j: 1 }]),
            CurlShape::Kink { cap_right_of_braid: false, cup_at_cap: false },
        ),
        (
            pattern(2, vec![Element::Cap { j: 0 }, Element::BraidPos { j: 1 }, Element::Cup { j: 0 }]),
            CurlShape::Kink { cap_right_of_braid: false, cup_at_cap: true },
        ),
    ];
    for (pos_pat, shape) in shapes {
        for positive in [true, false] {
            let mut pat = pos_pat.clone();
            if !positive {
                pat = pattern(pat.width_in, pat.elements.iter().map(|e| if e.is_braid() { Element::BraidNeg { j: e.position() } } else { *e }).collect());
            }
            // Close the pattern with a loop around the remaining strands and
            // compare against the same closure without the curl.
            let close_with = |p: &MajoranaDiagram| {
                let mut els = vec![Element::Cap { j: 0 }];
                if p.width_in == 4 {
                    els.push(Element::Cap { j: 0 });
                }
                els.extend(p.elements.iter().copied());
                for _ in 0..p.width_out / 2 {
                    els.push(Element::Cup { j: 0 });
                }
                MajoranaDiagram::closed(els, c(1.0, 0.0)).unwrap()
            };
            let with = evaluate_closed_oracle(&close_with(&pat)).unwrap();
            let len = pat.elements.len();
            let stripped = apply_rule(&pat, &RewriteRule::ReidemeisterI { writhe: curl_writhe(shape, positive) }, &RewriteSite::at(0, len))
                .unwrap_or_else(|e| panic!("{shape:?} {positive}: {e}"));
            let without = evaluate_closed_oracle(&close_with(&stripped.clone().with_amplitude(c(1.0, 0.0)))).unwrap();
            let ratio = with / without;
            let w = curl_writhe(shape, positive);
            assert!(
                (ratio - expi(FRAC_PI_8 * f64::from(w))).norm() < 1e-12,
                "{shape:?} positive={positive}: measured {ratio}, arg/(π/8) = {}",
                ratio.arg() / FRAC_PI_8
            );
        }
    }
}

#[test]
fn reidemeister_one_preserves_value() {
    let pats = [
        pattern(2, vec![Element::Cap { j: 1 }, Element::BraidNeg { j: 1 }]),
        pattern(4, vec![Element::BraidPos { j: 1 }, Element::Cup { j: 1 }]),
        pattern(2, vec![Element::Cap { j: 1 }, Element::BraidPos { j: 0 }, Element::Cup { j: 0 }]),
        pattern(2, vec![Element::Cap { j: 0 }, Element::BraidNeg { j: 1 }, Element::Cup { j: 0 }]),
    ];
    for (n, pat) in pats.iter().enumerate() {
        let (_, _, shape, positive) = match_curl(pat, &RewriteSite::at(0, pat.elements.len())).unwrap();
        check_rule(&RewriteRule::ReidemeisterI { writhe: curl_writhe(shape, positive) }, pat, 10 + n as u64, 30);
    }
}

#[test]
fn local_rules_preserve_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let th = random_angle(&mut rng, 0.5);
    let v = Orientation::Vertical;
    let h = Orientation::Horizontal;
    let cases: Vec<(RewriteRule, MajoranaDiagram)> = vec![
        (RewriteRule::DotRelocateCapCup, pattern(2, vec![Element::Cap { j: 1 }, Element::Dot { j: 1 }])),
        (RewriteRule::DotRelocateCapCup, pattern(2, vec![Element::Cap { j: 1 }, Element::Dot { j: 2 }])),
        (RewriteRule::DotRelocateCapCup, pattern(4, vec![Element::Dot { j: 1 }, Element::Cup { j: 1 }])),
        (RewriteRule::DotRelocateCapCup, pattern(4, vec![Element::Dot { j: 2 }, Element::Cup { j: 1 }])),
        (RewriteRule::ReidemeisterII, pattern(2, vec![Element::BraidPos { j: 0 }, Element::BraidNeg { j: 0 }])),
        (RewriteRule::ReidemeisterII, pattern(2, vec![Element::BraidNeg { j: 0 }, Element::BraidPos { j: 0 }])),
        (RewriteRule::ReidemeisterIII, pattern(4, vec![Element::BraidPos { j: 0 }, Element::BraidPos { j: 1 }, Element::BraidPos { j: 0 }])),
        (RewriteRule::ReidemeisterIII, pattern(4, vec![Element::BraidNeg { j: 1 }, Element::BraidNeg { j: 0 }, Element::BraidNeg { j: 1 }])),
        (RewriteRule::DotThroughBraid, pattern(2, vec![Element::Dot { j: 0 }, Element::BraidPos { j: 0 }])),
        (RewriteRule::DotThroughBraid, pattern(2, vec![Element::Dot { j: 1 }, Element::BraidNeg { j: 0 }])),
        (RewriteRule::DotThroughBraid, pattern(2, vec![Element::BraidPos { j: 0 }, Element::Dot { j: 1 }])),
        (RewriteRule::DotThroughBraid, pattern(2, vec![Element::BraidNeg { j: 0 }, Element::Dot { j: 0 }])),
        (RewriteRule::BraidTypeSwitch, pattern(2, vec![Element::BraidPos { j: 0 }])),
        (RewriteRule::BraidTypeSwitch, pattern(2, vec![Element::BraidNeg { j: 0 }])),
        (RewriteRule::PairDotsToBraids, pattern(2, vec![Element::DotPair { j: 0, k: 1 }])),
        (
            RewriteRule::DotPassScattering,
            pattern(2, vec![Element::Dot { j: 0 }, Element::Scattering { j: 0, theta: th, orientation: v }]),
        ),
        (
            RewriteRule::DotPassScattering,
            pattern(2, vec![Element::Scattering { j: 0, theta: th, orientation: h }, Element::Dot { j: 1 }]),
        ),
        (
            RewriteRule::DotPassScattering,
            pattern(2, vec![Element::Dot { j: 1 }, Element::ScatteringStar { j: 0, phi: c(0.4, 0.1), orientation: v }]),
        ),
        (
            RewriteRule::DotAbsorbScattering,
            pattern(2, vec![Element::DotPair { j: 0, k: 1 }, Element::Scattering { j: 0, theta: th, orientation: v }]),
        ),
        (
            RewriteRule::DotAbsorbScattering,
            pattern(2, vec![Element::Scattering { j: 0, theta: th, orientation: h }, Element::DotPair { j: 0, k: 1 }]),
        ),
        (
            RewriteRule::DotAbsorbScattering,
            pattern(2, vec![Element::ScatteringStar { j: 0, phi: c(0.3, 0.0), orientation: h }, Element::DotPair { j: 0, k: 1 }]),
        ),
        (RewriteRule::spacetime_dual(th).unwrap(), pattern(2, vec![Element::Scattering { j: 0, theta: th, orientation: v }])),
        (RewriteRule::CommuteDistantElements, pattern(4, vec![Element::Dot { j: 0 }, Element::Dot { j: 3 }])),
        (RewriteRule::CommuteDistantElements, pattern(4, vec![Element::Cap { j: 2 }, Element::BraidPos { j: 0 }])),
        (RewriteRule::CommuteDistantElements, pattern(4, vec![Element::Cup { j: 0 }, Element::Cap { j: 2 }])),
        (RewriteRule::CommuteDistantElements, pattern(4, vec![Element::Cap { j: 4 }, Element::Cup { j: 0 }])),
    ];
    for (n, (rule, pat)) in cases.iter().enumerate() {
        check_rule(rule, pat, 200 + n as u64, 25);
    }
    let (_, phi) = spacetime_dual(th).unwrap();
    let rule = RewriteRule::spacetime_dual(th).unwrap();
    check_rule(&rule, &pattern(2, vec![Element::Scattering { j: 0, theta: phi, orientation: h }]), 7, 25);
}

#[test]
fn scattering_reductions() {
    for orientation in [Orientation::Vertical, Orientation::Horizontal] {
        for k in 0..4u8 {
            let theta = c(f64::from(k) * std::f64::consts::FRAC_PI_2 - 2.0 * PI, 0.0);
            let pat = pattern(2, vec![Element::Scattering { j: 0, theta, orientation }]);
            check_rule(&RewriteRule::ScatteringReduceAt { k }, &pat, 300 + u64::from(k), 20);
            let star = pattern(2, vec![Element::ScatteringStar { j: 0, phi: Complex64::i() * theta, orientation }]);
            check_rule(&RewriteRule::ScatteringReduceAt { k }, &star, 400 + u64::from(k), 10);
        }
    }
    let generic = pattern(2, vec![Element::Scattering { j: 0, theta: c(0.3, 0.0), orientation: Orientation::Vertical }]);
    assert!(apply_rule(&generic, &RewriteRule::ScatteringReduceAt { k: 0 }, &RewriteSite::at(0, 1)).is_err());
}

#[test]
fn yang_baxter_operator_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let q = -std::f64::consts::FRAC_PI_2;
    let s = solve_yang_baxter(c(q, 0.0), c(q, 0.0), c(q, 0.0)).unwrap();
    for x in s.phis {
        assert!((x - c(q, 0.0)).norm() < 1e-9);
    }
    assert!((s.scalar - 1.0).norm() < 1e-12);
    let s = solve_yang_baxter(c(q, 0.0), c(0.7, 0.0), c(q, 0.0)).unwrap();
    assert!(s.scalar.norm() > 0.5);
    for trial in 0..40 {
        let th = [random_angle(&mut rng, 0.3), random_angle(&mut rng, 0.3), random_angle(&mut rng, 0.3)];
        for mirrored in [false, true] {
            let rule = if mirrored { RewriteRule::yang_baxter_mirrored(th) } else { RewriteRule::yang_baxter(th) };
            let Ok(rule) = rule else { continue };
            let (p, qq) = if mirrored { (1, 0) } else { (0, 1) };
            let mk = |j: usize, theta: Complex64| Element::Scattering { j, theta, orientation: Orientation::Vertical };
            let pat = pattern(4, vec![mk(p, th[0]), mk(qq, th[1]), mk(p, th[2])]);
            let after = apply_rule(&pat, &rule, &RewriteSite::at(0, 3)).unwrap();
            let op = |d: &MajoranaDiagram| {
                let mut m = element_operator(4, &Element::Dot { j: 0 });
                for r in m.iter_mut() {
                    for x in r.iter_mut() {
                        *x = c(0.0, 0.0);
                    }
                }
                for i in 0..4 {
                    m[i][i] = c(1.0, 0.0);
                }
                for e in &d.elements {
                    let em = element_operator(4, e);
                    let mut out = vec![vec![c(0.0, 0.0); 4]; 4];
                    for r in 0..4 {
                        for cc in 0..4 {
                            for k in 0..4 {
                                out[r][cc] += em[r][k] * m[k][cc];
                            }
                        }
                    }
                    m = out;
                }
                for r in m.iter_mut() {
                    for x in r.iter_mut() {
                        *x *= d.amplitude;
                    }
                }
                m
            };
            let (m0, m1) = (op(&pat), op(&after));
            let diff = m0.iter().flatten().zip(m1.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(diff <= 1e-9, "trial {trial} mirrored={mirrored}: {diff:e}");
            if trial < 5 {
                check_rule(&rule, &pat, 500 + trial, 5);
            }
        }
    }
}

#[test]
fn expansions_reproduce_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let theta = random_angle(&mut rng, 0.5);
        let orientation = if rng.random_bool(0.5) { Orientation::Vertical } else { Orientation::Horizontal };
        let pat = pattern(2, vec![Element::Scattering { j: 0, theta, orientation }]);
        let (d, start) = random_embedding(&mut rng, &pat, 4, 2);
        let v = evaluate_closed_fast(&d).unwrap();
        for kind in [ExpansionKind::ParallelDot, ExpansionKind::Braid] {
            let terms = expand_scattering(&d, start, kind).unwrap();
            let sum: Complex64 = terms.iter().map(|(w, t)| w * evaluate_closed_fast(t).unwrap()).sum();
            assert!((sum - v).norm() <= 1e-10 * v.norm().max(1.0));
        }
        if orientation == Orientation::Vertical {
            let (a, b) = braid_expansion_weights(theta);
            let (u, vv) = Element::Scattering { j: 0, theta, orientation }.quadratic_coeffs().unwrap();
            let (a2, b2) = braid_weights(u, vv);
            assert!((a - a2).norm() < 1e-12 && (b - b2).norm() < 1e-12);
            let terms = expand_scattering(&d, start, ExpansionKind::ParallelDot).unwrap();
            assert!((terms[0].0 + terms[1].0 - 1.0).norm() < 1e-15);
            let _ = expi_c(theta);
        }
    }
}

#[test]
fn dot_pass_angle_is_exact() {
    let pat = pattern(2, vec![Element::Dot { j: 0 }, Element::Scattering { j: 0, theta: c(0.3, 0.0), orientation: Orientation::Vertical }]);
    let out = apply_rule(&pat, &RewriteRule::DotPassScattering, &RewriteSite::at(0, 2)).unwrap();
    assert_eq!(out.elements[0], Element::Scattering { j: 0, theta: c(PI - 0.3, 0.0), orientation: Orientation::Vertical });
    assert_eq!(out.elements[1], Element::Dot { j: 1 });
}

#[test]
fn spacetime_dual_examples() {
    let (a, phi) = spacetime_dual(c(std::f64::consts::FRAC_PI_2, 0.0)).unwrap();
    assert!((a - c(0.5, 0.5)).norm() < 1e-15);
    assert!((expi_c(phi) - c(0.0, -1.0)).norm() < 1e-12);
    assert_eq!(spacetime_dual(c(0.0, 0.0)), Err(QuonError::SingularAngle));
    assert_eq!(spacetime_dual(c(PI, 0.0)), Err(QuonError::SingularAngle));
}

#[test]
fn mismatches_are_reported() {
    let pat = pattern(2, vec![Element::BraidPos { j: 0 }, Element::BraidPos { j: 0 }]);
    assert!(matches!(apply_rule(&pat, &RewriteRule::ReidemeisterII, &RewriteSite::at(0, 2)), Err(QuonError::PatternMismatch(_))));
    let pat = pattern(4, vec![Element::Dot { j: 1 }, Element::BraidPos { j: 1 }]);
    assert!(apply_rule(&pat, &RewriteRule::CommuteDistantElements, &RewriteSite::at(0, 2)).is_err());
}
