// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use wdi_core::model::{ApproxFunction, Criterion, DimensionFunction, WeightVector};
use wdi_core::series::{dyadic_spread, series_verdict, shell_sum, shell_sum_enumerated, shell_sums, Verdict};

fn power_criterion(m: usize, beta: Vec<f64>, sigma: f64, s: f64) -> Criterion {
    Criterion::new(
        ApproxFunction::power(1.0, sigma).unwrap(),
        WeightVector::alpha(vec![1.0 / m as f64; m]).unwrap(),
        WeightVector::beta(beta).unwrap(),
        DimensionFunction::power(s).unwrap(),
    )
    .unwrap()
}

fn case() -> impl Strategy<Value = (usize, Vec<f64>, f64, f64)> {
    (1usize..=2, 0.5f64..0.8, 0.3f64..2.0, 0.05f64..0.95).prop_map(|(m, b1, sigma, frac)| {
        let n = 2;
        let lo = (m * n - n + 1) as f64;
        (m, vec![b1, 1.0 - b1], sigma, lo + frac * (n as f64 - 1.0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dyadic_blocks_are_comparable((m, beta, sigma, s) in case()) {
        let c = power_criterion(m, beta, sigma, s);
        let sums = shell_sums(&c, 512).unwrap();
        for (l, spread) in dyadic_spread(&sums) {
            prop_assert!(spread < 64.0, "block {l}: spread {spread}");
        }
    }

    #[test]
    fn report_is_self_consistent((m, beta, sigma, s) in case()) {
        let c = power_criterion(m, beta, sigma, s);
        let rep = series_verdict(&c, 256).unwrap();
        let total: f64 = rep.shell_sums.values().sum();
        prop_assert!((rep.partial_total - total).abs() <= 1e-12 * total);
        prop_assert_eq!(rep.verdict, Verdict::from_exponent(rep.tail_exponent_fit));
    }

    #[test]
    fn pattern_sum_matches_enumeration((m, beta, sigma, s) in case(), r in 1u64..60) {
        let c = power_criterion(m, beta, sigma, s);
        let a = shell_sum(&c, r).unwrap();
        let b = shell_sum_enumerated(&c, r).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b);
    }
}
