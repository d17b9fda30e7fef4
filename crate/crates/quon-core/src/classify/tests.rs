use super::*;
use crate::compile::{
    circuit_oracle_unitary, compile_circuit, compile_generator_tensor, quon_to_dense_tensor, Circuit, DenseTensor, Gate, Generator,
};
use crate::quon::{string_genus_insert, string_genus_remove};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_4, PI, TAU};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn circuit(n: usize, gates: &[(Gate, usize)]) -> Circuit {
    let mut circ = Circuit::new(n);
    for &(g, q) in gates {
        let qs: Vec<usize> = (q..q + g.arity()).collect();
        circ.push(g, &qs).unwrap();
    }
    circ
}

fn random_from<R: Rng>(rng: &mut R, n: usize, depth: usize, pool: &[Gate]) -> Circuit {
    let gates: Vec<(Gate, usize)> = (0..depth)
        .map(|_| {
            let g = match pool[rng.random_range(0..pool.len())] {
                Gate::Rz { .. } => Gate::Rz { theta: rng.random_range(0.0..TAU) },
                Gate::XXRot { .. } => Gate::XXRot { theta: rng.random_range(0.0..TAU) },
                g => g,
            };
            (g, rng.random_range(0..=n - g.arity()))
        })
        .collect();
    circuit(n, &gates)
}

const CLIFFORD_POOL: [Gate; 6] = [Gate::S, Gate::H, Gate::Cnot { control_left: true }, Gate::Cnot { control_left: false }, Gate::X, Gate::Cz];
const MATCHGATE_POOL: [Gate; 5] = [Gate::Rz { theta: 0.0 }, Gate::XXRot { theta: 0.0 }, Gate::Z, Gate::S, Gate::Sinv];

/// Counterclockwise leg order of a two-qubit gate tensor.
fn ccw(m: &[Vec<Complex64>]) -> DenseTensor {
    DenseTensor::from_matrix(2, m).permuted(&[0, 1, 3, 2])
}

#[test]
fn clifford_circuits_and_one_rotation() {
    let base = circuit(3, &[(Gate::H, 0), (Gate::Cnot { control_left: true }, 0), (Gate::S, 1), (Gate::Cnot { control_left: true }, 1)]);
    let r = classify(&compile_circuit(&base).unwrap());
    assert!(r.clifford_form);
    assert_eq!(r.generic_scattering_count, 0);
    let mut with_rz = base.clone();
    with_rz.push(Gate::Rz { theta: 0.3 }, &[2]).unwrap();
    let r = classify(&compile_circuit(&with_rz).unwrap());
    assert!(!r.clifford_form);
    assert_eq!(r.generic_scattering_count, 1);
    // Quarter-turn scatterings are not generic.
    let quarter = circuit(1, &[(Gate::Rz { theta: PI / 2.0 }, 0)]);
    assert!(classify(&compile_circuit(&quarter).unwrap()).clifford_form);
}

#[test]
fn compiled_matchgate_circuits_are_matchgates() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in 2..=3 {
        for _ in 0..6 {
            let circ = random_from(&mut rng, n, 10, &MATCHGATE_POOL);
            let q = compile_circuit(&circ).unwrap();
            let r = classify(&q);
            assert!(r.matchgate_form && r.punctured_matchgate_form && r.boundary_tracking_ok, "{r:?} {:?}", circ.gates);
            let residual = matchgate_identity_residual(&quon_to_dense_tensor(&q).unwrap()).unwrap();
            assert!(residual <= MGI_TOL, "{residual}");
        }
    }
}

#[test]
fn face_cuts_are_cleaned_up() {
    let circ = circuit(2, &[(Gate::XXRot { theta: 0.4 }, 0), (Gate::Rz { theta: 1.1 }, 0), (Gate::XXRot { theta: 2.0 }, 0)]);
    let q = compile_circuit(&circ).unwrap();
    assert_eq!(q.parity_cuts.len(), 1);
    let (clean, removed) = string_genus_cleanup(&q);
    assert_eq!((removed, clean.parity_cuts.len()), (1, 0));
    let r = classify(&q);
    assert_eq!(r.hole_count, 1);
    assert!(r.matchgate_form);
}

#[test]
fn non_matchgates_are_rejected() {
    for g in [Gate::Swap, Gate::H, Gate::Cz, Gate::X] {
        let q = compile_circuit(&circuit(g.arity(), &[(g, 0)])).unwrap();
        assert!(!classify(&q).matchgate_form, "{g:?}");
    }
    let swap = quon_to_dense_tensor(&compile_circuit(&circuit(2, &[(Gate::Swap, 0)])).unwrap()).unwrap();
    assert!(matchgate_identity_residual(&swap).unwrap() >= 0.5);
}

#[test]
fn residual_examples() {
    let ket = DenseTensor::new(1, vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert_eq!(matchgate_identity_residual(&ket).unwrap(), 0.0);
    assert!(matches!(matchgate_identity_residual(&DenseTensor::zeros(9)), Err(crate::QuonError::RankTooLarge(9))));
    let parity = quon_to_dense_tensor(&compile_generator_tensor(Generator::ParityP { rank: 4 }).unwrap()).unwrap();
    assert!(matchgate_identity_residual(&parity).unwrap() < 1e-12);
}

fn random_su2<R: Rng>(rng: &mut R) -> [[Complex64; 2]; 2] {
    let v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (c(v[0] / n, v[1] / n), c(v[2] / n, v[3] / n));
    [[a, b], [-b.conj(), a.conj()]]
}

fn max_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>], s: Complex64) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - s * y).norm()).fold(0.0, f64::max)
}

#[test]
fn gab_with_equal_determinants_satisfies_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..20 {
        let phase = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..TAU));
        let g = MatchgateGate { a: random_su2(&mut rng).map(|r| r.map(|v| v * phase)), b: random_su2(&mut rng).map(|r| r.map(|v| v * phase)) };
        assert!(matchgate_identity_residual(&ccw(&gab_matrix(&g))).unwrap() <= 1e-12);
        let d = decompose_gab(&g).unwrap();
        assert!(d.circuit.gates.iter().all(|op| matches!(op.gate, Gate::Rz { .. } | Gate::XXRot { .. })));
        let u = circuit_oracle_unitary(&d.circuit).unwrap().to_matrix();
        assert!(max_diff(&gab_matrix(&g), &u, d.phase) <= 1e-9);
    }
}

#[test]
fn gab_examples() {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let id = [[one, zero], [zero, one]];
    let d = decompose_gab(&MatchgateGate { a: id, b: id }).unwrap();
    assert!(d.circuit.gates.is_empty());
    assert!((d.phase - one).norm() < 1e-12);

    let phi = 0.37;
    let a = [[Complex64::from_polar(1.0, phi), zero], [zero, Complex64::from_polar(1.0, -phi)]];
    let g = MatchgateGate { a, b: id };
    let d = decompose_gab(&g).unwrap();
    assert!(d.circuit.gates.iter().all(|op| matches!(op.gate, Gate::Rz { .. })));
    assert!(max_diff(&gab_matrix(&g), &circuit_oracle_unitary(&d.circuit).unwrap().to_matrix(), d.phase) <= 1e-9);

    let cz = MatchgateGate { a: [[one, zero], [zero, -one]], b: id };
    assert!(matches!(decompose_gab(&cz), Err(crate::QuonError::NotMatchgate(_))));
    assert!(matchgate_identity_residual(&ccw(&gab_matrix(&cz))).unwrap() > 0.5);
}

fn tensor_of(g: Gate) -> DenseTensor {
    quon_to_dense_tensor(&compile_circuit(&circuit(g.arity(), &[(g, 0)])).unwrap()).unwrap()
}

/// A planar chain: the last leg of each tensor is glued to the first leg of
/// the next one.
fn random_chain<R: Rng>(rng: &mut R) -> TensorNetwork {
    let mut tensors = Vec::new();
    let mut legs = 0;
    loop {
        let clifford = rng.random_bool(0.5);
        let t = if clifford {
            match rng.random_range(0..4) {
                0 => tensor_of(Gate::H),
                1 => tensor_of(Gate::Cnot { control_left: true }),
                2 => tensor_of(Gate::Swap),
                _ => tensor_of(Gate::X),
            }
        } else {
            match rng.random_range(0..4) {
                0 => tensor_of(Gate::Rz { theta: rng.random_range(0.0..TAU) }),
                1 => tensor_of(Gate::XXRot { theta: rng.random_range(0.0..TAU) }),
                2 => quon_to_dense_tensor(&compile_generator_tensor(Generator::ParityP { rank: 3 }).unwrap()).unwrap(),
                _ => quon_to_dense_tensor(&compile_generator_tensor(Generator::Ket0).unwrap()).unwrap(),
            }
        };
        let added = if tensors.is_empty() { t.rank } else { t.rank.saturating_sub(2) };
        if legs + added + 2 > 10 || tensors.len() >= 4 {
            break;
        }
        if !tensors.is_empty() && t.rank < 2 {
            continue;
        }
        legs += added;
        tensors.push(TaggedTensor { tensor: t, kind: Some(if clifford { TensorKind::Clifford } else { TensorKind::Matchgate }) });
    }
    let edges = (1..tensors.len()).map(|i| ((i - 1, tensors[i - 1].tensor.rank - 1), (i, 0))).collect();
    TensorNetwork { tensors, edges }
}

#[test]
fn decomposition_recombines() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let mut mixed = 0;
    for _ in 0..20 {
        let net = random_chain(&mut rng);
        let full = contract_network(&net).unwrap();
        let d = clifford_matchgate_decompose(&net).unwrap();
        mixed += usize::from(!d.bridge_legs.is_empty());
        assert!(d.recombine().max_abs_diff(&full) <= 1e-9);
        assert!(matchgate_identity_residual(&d.matchgate).unwrap() <= 1e-9);
    }
    assert!(mixed > 5);
}

#[test]
fn decomposition_edge_cases() {
    let h = TaggedTensor { tensor: tensor_of(Gate::H), kind: Some(TensorKind::Clifford) };
    let net = TensorNetwork { tensors: vec![h.clone(), h.clone()], edges: vec![((0, 1), (1, 0))] };
    let d = clifford_matchgate_decompose(&net).unwrap();
    assert_eq!(d.matchgate, DenseTensor::scalar(c(1.0, 0.0)));
    // H·H is the identity.
    assert!(d.recombine().max_abs_diff(&DenseTensor::new(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap()) < 1e-12);
    let untagged = TensorNetwork { tensors: vec![h, TaggedTensor { tensor: tensor_of(Gate::S), kind: None }], edges: vec![] };
    assert!(matches!(clifford_matchgate_decompose(&untagged), Err(crate::QuonError::UntaggedTensor(1))));
}

#[test]
fn clifford_tensors_have_stabilizer_entries() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..6 {
        let circ = random_from(&mut rng, 3, 8, &CLIFFORD_POOL);
        let q = compile_circuit(&circ).unwrap();
        assert!(classify(&q).clifford_form);
        let t = quon_to_dense_tensor(&q).unwrap();
        let nonzero: Vec<Complex64> = t.entries.iter().copied().filter(|v| v.norm() > 1e-9).collect();
        let (m, p0) = (nonzero[0].norm(), nonzero[0].arg());
        for v in nonzero {
            assert!((v.norm() - m).abs() < 1e-9);
            let k = (v.arg() - p0) / FRAC_PI_4;
            assert!((k - k.round()).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn removal_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circ = random_from(&mut rng, 2, 6, &MATCHGATE_POOL);
        let q = compile_circuit(&circ).unwrap();
        let t = rng.random_range(0..=q.core.elements.len());
        let w = q.core.widths()[t];
        let j = 2 * rng.random_range(0..w / 2) + 1;
        let with_loop = string_genus_insert(&q, t, j).unwrap();
        let hole = with_loop.parity_cuts.len() - 1;
        let before = classify(&with_loop);
        let after = classify(&string_genus_remove(&with_loop, hole).unwrap());
        prop_assert!(after.hole_count < before.hole_count);
        prop_assert!(after.boundary_tracking_ok >= before.boundary_tracking_ok);
        prop_assert!(after.matchgate_form >= before.matchgate_form);
        prop_assert!(after.clifford_form >= before.clifford_form);
    }

    #[test]
    fn matchgate_form_implies_identities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = [MATCHGATE_POOL.as_slice(), &[Gate::H, Gate::X, Gate::Swap]].concat();
        let circ = random_from(&mut rng, 2, 5, &pool);
        let q = compile_circuit(&circ).unwrap();
        if classify(&q).matchgate_form {
            prop_assert!(matchgate_identity_residual(&quon_to_dense_tensor(&q).unwrap()).unwrap() <= MGI_TOL);
        }
    }
}
