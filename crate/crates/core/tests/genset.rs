mod common;

use std::collections::HashSet;

use tofsynth::genset::{gen_element_circuit, gen_element_unitary, generate_gen_set};
use tofsynth::clifford::{circuit_to_unitary, global_phase_distance};
use tofsynth::{Error, GenMode, GenTriple, Pauli};

#[test]
fn too_few_qubits() {
    for n in 0..3 {
        for mode in [GenMode::Canonical, GenMode::PaperCompat] {
            assert!(matches!(generate_gen_set(n, mode), Err(Error::TooFewQubits(_))));
        }
    }
}

#[test]
fn canonical_classes_are_distinct_and_complete() {
    let gs = generate_gen_set(3, GenMode::Canonical).unwrap();
    assert_eq!(gs.len(), 135);
    let classes: HashSet<[Pauli; 7]> = gs.triples.iter().map(|t| t.subgroup()).collect();
    assert_eq!(classes.len(), gs.len());
    for t in &gs.triples {
        assert!(t.is_canonical());
        assert_eq!(gs.position(t).map(|i| gs.triples[i]), Some(*t));
    }
}

#[test]
fn paper_compat_class_coverage() {
    let canon = generate_gen_set(3, GenMode::Canonical).unwrap();
    let compat = generate_gen_set(3, GenMode::PaperCompat).unwrap();
    assert_eq!(compat.len(), 177);
    let classes: HashSet<[Pauli; 7]> = compat.triples.iter().map(|t| t.subgroup()).collect();
    assert_eq!(classes.len(), 129);
    let missing = canon
        .triples
        .iter()
        .filter(|t| !classes.contains(&t.subgroup()))
        .count();
    assert_eq!(missing, 6);
}

#[test]
fn generator_unitary_matches_oracle() {
    let gs = generate_gen_set(3, GenMode::Canonical).unwrap();
    for t in gs.triples.iter().step_by(7) {
        let mine = gen_element_unitary(t).unwrap();
        let want = common::generator_unitary(t);
        assert!((mine - want).iter().all(|z| z.norm() < 1e-12), "{t}");
    }
}

#[test]
fn generator_is_a_conjugated_toffoli() {
    let gs = generate_gen_set(3, GenMode::Canonical).unwrap();
    for t in gs.triples.iter().step_by(5) {
        let c = gen_element_circuit(t);
        assert_eq!(c.toffoli_count(), 1);
        let u = circuit_to_unitary(&c).unwrap();
        let d = global_phase_distance(&common::generator_unitary(t), &u).unwrap();
        assert!(d < 1e-9, "{t}: {d}");
    }
}

#[test]
fn equivalent_triples_share_a_subgroup() {
    let a = GenTriple::parse("ZII", "IZI", "IIZ").unwrap();
    let b = GenTriple::parse("ZZI", "IZI", "ZZZ").unwrap();
    assert!(a.equivalent(&b));
    assert_eq!(a.canonical(), b.canonical());
    let c = GenTriple::parse("XII", "IZI", "IIZ").unwrap();
    assert!(!a.equivalent(&c));
}

#[test]
fn degenerate_triples_rejected() {
    assert!(GenTriple::parse("ZII", "ZII", "IIZ").is_err());
    assert!(GenTriple::parse("ZII", "IZI", "ZZI").is_err());
    assert!(GenTriple::parse("XII", "ZII", "IIZ").is_err());
    assert!(GenTriple::parse("III", "IZI", "IIZ").is_err());
}

#[test]
fn json_round_trip() {
    let gs = generate_gen_set(3, GenMode::Canonical).unwrap();
    let text = serde_json::to_string(&gs).unwrap();
    let back: tofsynth::GenSet = serde_json::from_str(&text).unwrap();
    assert_eq!(back, gs);
}
