mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tofsynth::channel::{chan_rep_unitary_exact, random_clifford_circuit};
use tofsynth::clifford::{
    circuit_to_unitary, clifford_from_channel, clifford_mapping_triple, conjugate_pauli,
    global_phase_distance,
};
use tofsynth::{Circuit, Error, Gate, Pauli, SignedPauli, Tableau};

fn gate_matrix(g: &Gate, n: usize) -> common::CMat {
    let c = Circuit::from_gates(n, vec![*g]).unwrap();
    circuit_to_unitary(&c).unwrap()
}

#[test]
fn conjugation_rules_match_matrices() {
    let n = 3;
    let gates = [
        Gate::H(2),
        Gate::S(1),
        Gate::Sdg(3),
        Gate::X(1),
        Gate::Z(2),
        Gate::Cnot(1, 3),
        Gate::Cnot(3, 2),
        Gate::Swap(1, 2),
    ];
    for g in gates {
        let u = gate_matrix(&g, n);
        for k in 0..64 {
            let s = common::pauli_string(n, k);
            let p: SignedPauli = s.parse().unwrap();
            let img = g.conjugate(&p).unwrap();
            let want = &u * common::pauli_matrix(&s) * u.adjoint();
            let got = img.to_matrix().unwrap();
            assert!((got - want).iter().all(|z| z.norm() < 1e-12), "{g} on {s}");
        }
    }
}

#[test]
fn toffoli_is_not_a_clifford_gate() {
    let p: SignedPauli = "XII".parse().unwrap();
    assert_eq!(Gate::Tof(1, 2, 3).conjugate(&p), Err(Error::ToffoliInClifford));
}

#[test]
fn text_round_trip() {
    let text = "# qubits: 3\nH 1\nCNOT 1 2\nS 3\nSDG 2\nTOF 1 2 3\nSWAP 2 3\n";
    let c: Circuit = text.parse().unwrap();
    assert_eq!(c.len(), 6);
    assert_eq!(c.toffoli_count(), 1);
    let back: Circuit = c.to_string().parse().unwrap();
    assert_eq!(back, c);
    assert!(Circuit::parse("H 4\n", Some(3)).is_err());
}

#[test]
fn inverse_undoes_circuit() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = random_clifford_circuit(3, &mut rng);
    let mut both = c.clone();
    both.extend(&c.inverse());
    let u = circuit_to_unitary(&both).unwrap();
    assert!(global_phase_distance(&u, &tofsynth::dense::identity(3)).unwrap() < 1e-12);
    assert!(both.simplify().is_empty());
}

#[test]
fn mapping_triple_sends_z_z_x() {
    let targets: [Pauli; 3] = ["XXI", "ZZI", "IIY"].map(|s| s.parse().unwrap());
    let m = clifford_mapping_triple(&targets).unwrap();
    let sources = [
        Pauli::z(3, m.a).signed(),
        Pauli::z(3, m.b).signed(),
        Pauli::x(3, m.c).signed(),
    ];
    for (src, t) in sources.iter().zip(&targets) {
        let img = conjugate_pauli(&m.circuit, src).unwrap();
        assert_eq!(img, t.signed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tableau_channel_matches_unitary(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_clifford_circuit(3, &mut rng);
        let t = Tableau::from_circuit(&c).unwrap();
        prop_assert!(t.is_symplectic());
        let ch = t.channel();
        let want = chan_rep_unitary_exact(&circuit_to_unitary(&c).unwrap()).unwrap();
        prop_assert_eq!(&ch, &want);

        let rebuilt = t.to_circuit();
        prop_assert_eq!(Tableau::from_circuit(&rebuilt).unwrap(), t);

        let from_ch = clifford_from_channel(&ch).unwrap();
        let u = circuit_to_unitary(&from_ch).unwrap();
        let back = chan_rep_unitary_exact(&u).unwrap();
        prop_assert_eq!(back, ch);
    }
}

#[test]
fn non_clifford_permutation_rejected() {
    // Swapping the IX and IZ columns alone is not the channel of any Clifford.
    let mut cols: Vec<(usize, i8)> = (0..16).map(|c| (c, 1)).collect();
    cols.swap(1, 3);
    let m = tofsynth::ChannelMatrix::from_signed_columns(2, &cols);
    let res = clifford_from_channel(&m);
    assert!(matches!(res, Err(Error::NotClifford(_))));
}

#[test]
fn distance_of_rotation() {
    let theta: f64 = 0.3;
    let u = tofsynth::dense::rz(theta);
    let d = global_phase_distance(&u, &tofsynth::dense::identity(1)).unwrap();
    let want = (1.0 - (theta / 2.0).cos()).sqrt();
    assert!((d - want).abs() < 1e-12);
    assert!((common::distance(&u, &tofsynth::dense::identity(1)) - want).abs() < 1e-12);
}
