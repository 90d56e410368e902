mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tofsynth::approx::{
    amplitude_test, approx_tof_opt, conjugation_test, near_clifford,
    reconstruct_trailing_clifford,
};
use tofsynth::channel::random_clifford_circuit;
use tofsynth::clifford::circuit_to_unitary;
use tofsynth::dense;
use tofsynth::genset::{gen_element_unitary, generate_gen_set, word_unitary};
use tofsynth::{Error, GenMode, Generators};

fn gens() -> Generators {
    Generators::new(generate_gen_set(3, GenMode::Canonical).unwrap())
}

#[test]
fn cliffords_pass_both_tests() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let c = circuit_to_unitary(&random_clifford_circuit(3, &mut rng)).unwrap();
        let profile = amplitude_test(&c, 1e-6).unwrap();
        let m = profile.s1().len();
        assert!(m.is_power_of_two() && m <= 64, "support {m}");
        let want = common::pauli_coefficients(&c)
            .iter()
            .filter(|z| z.norm() > 1e-9)
            .count();
        assert_eq!(m, want);
        assert!(conjugation_test(&c, 1e-6).unwrap());
        let rebuilt = reconstruct_trailing_clifford(&c, &profile).unwrap();
        assert!(common::distance(&c.adjoint(), &rebuilt.unitary) < 1e-12);
    }
}

#[test]
fn t_gate_is_far_from_clifford() {
    let t = dense::kron(&dense::t_gate(), &dense::identity(2));
    assert!(near_clifford(&t, 0.01).unwrap().is_none());
    let w = dense::kron(&dense::rz(0.3), &dense::identity(2));
    assert!(near_clifford(&w, 0.01).unwrap().is_none());
}

#[test]
fn one_generator_times_clifford() {
    let g = gens();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = g.triple(17);
    let c = circuit_to_unitary(&random_clifford_circuit(3, &mut rng)).unwrap();
    let w = gen_element_unitary(&t).unwrap() * c;
    let res = approx_tof_opt(&w, 1e-6, &g, 2).unwrap();
    assert_eq!(res.count, 1);
    let rebuilt = word_unitary(3, &res.word).unwrap() * &res.trailing.unitary;
    assert!(common::distance(&w, &rebuilt) <= 1e-6);
    let from_circuit = word_unitary(3, &res.word).unwrap()
        * circuit_to_unitary(&res.trailing.circuit).unwrap();
    assert!(common::distance(&w, &from_circuit) <= 1e-6);
}

#[test]
fn clifford_input_has_count_zero() {
    let g = gens();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let c = circuit_to_unitary(&random_clifford_circuit(3, &mut rng)).unwrap();
    let res = approx_tof_opt(&c, 1e-6, &g, 1).unwrap();
    assert_eq!(res.count, 0);
    assert!(res.distance <= 1e-6);
}

#[test]
fn budget_exceeded_for_t() {
    let g = gens();
    let t = dense::kron(&dense::t_gate(), &dense::identity(2));
    assert!(matches!(approx_tof_opt(&t, 1e-3, &g, 1), Err(Error::BudgetExceeded(_))));
}
