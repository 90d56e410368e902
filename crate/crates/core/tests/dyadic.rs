use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use tofsynth::dyadic::{dyadic_half_sum4, is_normalized, sde2_reduce};
use tofsynth::Dyadic;

fn rational(d: &Dyadic) -> BigRational {
    BigRational::new(d.numerator().clone(), BigInt::from(1) << d.exponent())
}

fn dyadic() -> impl Strategy<Value = Dyadic> {
    (-1000i64..1000, 0u32..12).prop_map(|(a, k)| Dyadic::new(a, k))
}

proptest! {
    #[test]
    fn arithmetic_matches_rationals(a in dyadic(), b in dyadic()) {
        let (ra, rb) = (rational(&a), rational(&b));
        prop_assert_eq!(rational(&(&a + &b)), &ra + &rb);
        prop_assert_eq!(rational(&(&a - &b)), &ra - &rb);
        prop_assert_eq!(rational(&(&a * &b)), &ra * &rb);
        prop_assert_eq!(rational(&a.half()), &ra / BigRational::from_integer(2.into()));
        for r in [&a + &b, &a - &b, &a * &b, a.half()] {
            prop_assert!(is_normalized(&r));
        }
    }

    #[test]
    fn sde_is_the_reduced_exponent(a in -1000i64..1000, k in 0u32..12) {
        let d = Dyadic::new(a, k);
        let den = rational(&d).denom().clone();
        prop_assert_eq!(BigInt::from(1) << d.sde(), den);
    }

    #[test]
    fn half_sum_matches_rationals(
        v in proptest::array::uniform4(dyadic()),
        s in proptest::array::uniform4(prop_oneof![Just(1i8), Just(-1i8)]),
    ) {
        let got = dyadic_half_sum4([&v[0], &v[1], &v[2], &v[3]], s);
        let mut want = BigRational::from_integer(0.into());
        for (x, &sign) in v.iter().zip(&s) {
            want += rational(x) * BigRational::from_integer(sign.into());
        }
        want /= BigRational::from_integer(2.into());
        prop_assert_eq!(rational(&got), want);
    }

    #[test]
    fn ordering_matches_rationals(a in dyadic(), b in dyadic()) {
        prop_assert_eq!(a.cmp(&b), rational(&a).cmp(&rational(&b)));
    }
}

#[test]
fn reduce_rejects_negative_exponent() {
    assert!(sde2_reduce(3, -1).is_err());
    assert_eq!(sde2_reduce(12, 3).unwrap(), Dyadic::new(3, 1));
    assert_eq!(sde2_reduce(0, 5).unwrap(), Dyadic::zero());
}

#[test]
fn snap_accepts_only_dyadics() {
    assert_eq!(Dyadic::from_f64_snap(0.375, 16, 1e-10), Some(Dyadic::new(3, 3)));
    assert_eq!(Dyadic::from_f64_snap(std::f64::consts::FRAC_1_SQRT_2, 16, 1e-10), None);
}

#[test]
fn json_round_trip() {
    let d = Dyadic::new(-5, 3);
    let text = serde_json::to_string(&d).unwrap();
    assert_eq!(serde_json::from_str::<Dyadic>(&text).unwrap(), d);
}
