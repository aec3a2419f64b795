// SPDX-License-Identifier: Apache-2.0

use approx::assert_relative_eq;
use proptest::prelude::*;
use wdi_core::content::{gamma_via_cover, rect_content_closed, Hyperrectangle};
use wdi_core::model::{ApproxFunction, Criterion, DimensionFunction, IntegerVector, WeightVector};

fn rect_strategy() -> impl Strategy<Value = (Vec<f64>, f64)> {
    (1usize..=4).prop_flat_map(|d| {
        (
            prop::collection::vec(-4.0f64..0.0, d).prop_map(|e| e.iter().map(|x| 10f64.powf(*x)).collect()),
            0.05..d as f64 - 0.05,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn closed_form_is_monotone((sides, s) in rect_strategy(), pick in 0usize..4, grow in 1.0f64..10.0) {
        let f = DimensionFunction::power(s).unwrap();
        let base = rect_content_closed(&f, &Hyperrectangle::new(sides.clone()).unwrap()).unwrap().value;
        let mut bigger = sides.clone();
        let i = pick % bigger.len();
        bigger[i] *= grow;
        let grown = rect_content_closed(&f, &Hyperrectangle::new(bigger).unwrap()).unwrap().value;
        prop_assert!(grown >= base * (1.0 - 1e-14));
    }

    #[test]
    fn power_content_scales((sides, s) in rect_strategy(), c in 0.01f64..100.0) {
        let f = DimensionFunction::power(s).unwrap();
        let rect = Hyperrectangle::new(sides).unwrap();
        let base = rect_content_closed(&f, &rect).unwrap().value;
        let scaled = rect_content_closed(&f, &rect.scaled(c).unwrap()).unwrap().value;
        prop_assert!((scaled - c.powf(s) * base).abs() <= 1e-12 * scaled);
    }

    #[test]
    fn cover_gamma_is_even(u in prop::collection::vec(-300i64..=300, 2).prop_filter("nonzero", |u| u != &vec![0, 0])) {
        let c = Criterion::new(
            ApproxFunction::power(1.0, 1.0).unwrap(),
            WeightVector::alpha(vec![0.6, 0.4]).unwrap(),
            WeightVector::beta(vec![0.7, 0.3]).unwrap(),
            DimensionFunction::power(3.4).unwrap(),
        )
        .unwrap();
        let pos = IntegerVector::new(u.clone()).unwrap();
        prop_assert_eq!(gamma_via_cover(&c, &pos).unwrap(), gamma_via_cover(&c, &pos.neg()).unwrap());
    }
}

#[test]
fn cover_gamma_at_seven() {
    // t(7) = 49 and both radii equal 1/49, so the cost is 49^-1.8 = 7^-3.6.
    let c = Criterion::new(
        ApproxFunction::power(1.0, 0.5).unwrap(),
        WeightVector::alpha(vec![1.0]).unwrap(),
        WeightVector::beta(vec![0.5, 0.5]).unwrap(),
        DimensionFunction::power(1.8).unwrap(),
    )
    .unwrap();
    let u = IntegerVector::new(vec![7]).unwrap();
    assert_relative_eq!(gamma_via_cover(&c, &u).unwrap(), 7f64.powf(-3.6), max_relative = 1e-12);
}
