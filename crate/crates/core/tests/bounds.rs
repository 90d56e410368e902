mod common;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use tofsynth::bounds::{
    gen_set_bound_cs, gen_set_bound_tof, lower_bound_approx, lower_bound_exact,
    rotation_expansion, RotationKind,
};
use tofsynth::genset::generate_gen_set;
use tofsynth::GenMode;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn counting_bounds() {
    assert_eq!(gen_set_bound_tof(2), q(0, 1));
    assert_eq!(gen_set_bound_tof(3), q(675, 2));
    assert_eq!(gen_set_bound_tof(4), q(30510, 1));
    assert_eq!(gen_set_bound_cs(1), q(0, 1));
    assert_eq!(gen_set_bound_cs(2), q(15, 1));
    assert_eq!(gen_set_bound_cs(3), q(675, 2));
    for n in [3, 4] {
        for mode in [GenMode::Canonical, GenMode::PaperCompat] {
            let size = generate_gen_set(n, mode).unwrap().len() as i64;
            assert!(gen_set_bound_tof(n as u32) >= q(size, 1));
        }
    }
}

#[test]
fn approximate_lower_bound() {
    let b = lower_bound_approx(1.0, 1, 1e-3, 1.0).unwrap();
    assert!((b - 4.73).abs() < 0.01, "{b}");
    assert_eq!(lower_bound_approx(1.0, 1, 1.0, 1.0).unwrap(), 0.0);
    let half = lower_bound_approx(1.0, 1, 0.5e-3, 1.0).unwrap();
    assert!((half - b - 0.5).abs() < 1e-3);
    assert!(lower_bound_approx(0.5, 1, 1e-3, 1.0).unwrap() <= b);
    assert!(lower_bound_approx(0.0, 1, 1e-3, 1.0).is_err());
    assert!(lower_bound_approx(1.0, 1, -1.0, 1.0).is_err());
}

#[test]
fn exact_lower_bound() {
    assert_eq!(lower_bound_exact(1.0, 1, 1.0).unwrap(), 0.0);
    // Controlled-S: largest coefficient from the dense oracle.
    let cs = tofsynth::dense::kron(&tofsynth::dense::identity(1), &tofsynth::dense::cs_gate());
    let coeffs = common::pauli_coefficients(&cs);
    let alpha = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let support = coeffs.iter().filter(|z| z.norm() > 1e-12).count();
    assert!((alpha - 10f64.sqrt() / 4.0).abs() < 1e-12);
    assert_eq!(support, 4);
    let b = lower_bound_exact(alpha, support, 1.0).unwrap();
    assert!((b - (10f64.sqrt() / 2.0).log(4.0)).abs() < 1e-12);
    assert!(b <= 3.0);
    let t = lower_bound_exact(0.75, 8, 1.0).unwrap();
    assert!((t - (3.0 * 8f64.sqrt() / 4.0).log(4.0)).abs() < 1e-12);
}

#[test]
fn rotation_magnitudes() {
    let rz = rotation_expansion(RotationKind::Rz);
    let crn = rotation_expansion(RotationKind::CRn);
    for k in 0..16 {
        let t = k as f64 * 0.4;
        let a: Vec<f64> = rz.eval(t).iter().map(|(_, c)| c.norm()).collect();
        assert!((a[0] - (t / 2.0).cos().abs()).abs() < 1e-12);
        assert!((a[1] - (t / 2.0).sin().abs()).abs() < 1e-12);
        let b: Vec<f64> = crn.eval(t).iter().map(|(_, c)| c.norm()).collect();
        let big = 0.5 * (1.0 + 3.0 * (t / 2.0).cos().powi(2)).sqrt();
        assert!((b[0] - big).abs() < 1e-12);
        for x in &b[1..] {
            assert!((x - 0.5 * (t / 2.0).sin().abs()).abs() < 1e-12);
        }
    }
    let zero = rz.eval(0.0);
    assert!((zero[0].1 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    assert!(zero[1].1.norm() < 1e-15);
}

#[test]
fn expansions_rebuild_the_gates() {
    for kind in RotationKind::ALL {
        let exp = rotation_expansion(kind);
        for k in 0..32 {
            let t = k as f64 * std::f64::consts::PI / 16.0;
            let d = exp.to_matrix(t) - kind.unitary(t);
            assert!(d.iter().all(|z| z.norm() < 1e-12), "{kind} at {t}");
        }
        assert_eq!(kind.to_string().parse::<RotationKind>().unwrap(), kind);
    }
}
