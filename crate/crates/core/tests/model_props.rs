// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use wdi_core::model::{dual_time, shell_count, ApproxFunction, IntegerVector, Shell, WeightVector};

fn psi_value(psi: &ApproxFunction, t: f64) -> f64 {
    let mut v = psi.coefficient() * t.powf(-psi.exponent());
    if psi.log_exponent() != 0.0 {
        v *= t.ln().powf(-psi.log_exponent());
    }
    v
}

/// `inf { t >= t0 : |u_i| < psi(t)^-alpha_i for all i }` by bisection on the
/// defining condition itself.
fn t_by_definition(psi: &ApproxFunction, alpha: &[f64], u: &[i64]) -> f64 {
    let holds = |t: f64| {
        let p = psi_value(psi, t);
        u.iter().zip(alpha).all(|(&x, &a)| (x.unsigned_abs() as f64) < p.powf(-a))
    };
    let t0 = psi.floor();
    if holds(t0) {
        return t0;
    }
    let (mut lo, mut hi) = (t0, 2.0 * t0);
    while !holds(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn weights(raw: Vec<f64>) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let head: f64 = w[..w.len() - 1].iter().sum();
    let last = w.len() - 1;
    w[last] = 1.0 - head;
    w
}

fn psi_strategy() -> impl Strategy<Value = ApproxFunction> {
    (0.5f64..2.0, 0.3f64..2.5, prop::option::of(0.0f64..1.5)).prop_map(|(c, sigma, rho)| match rho {
        None => ApproxFunction::power(c, sigma).unwrap(),
        Some(r) => ApproxFunction::power_log(c, sigma, r).unwrap(),
    })
}

fn alpha_u_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<i64>)> {
    (1usize..=3).prop_flat_map(|m| {
        (
            prop::collection::vec(0.2f64..1.0, m).prop_map(weights),
            prop::collection::vec(-5000i64..=5000, m).prop_filter("nonzero", |u| u.iter().any(|&x| x != 0)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dual_time_matches_definition(psi in psi_strategy(), (alpha, u) in alpha_u_strategy()) {
        let w = WeightVector::alpha(alpha.clone()).unwrap();
        let got = dual_time(&psi, &w, &u).unwrap().t;
        let want = t_by_definition(&psi, &alpha, &u);
        prop_assert!((got - want).abs() <= 1e-9 * want, "t={got} oracle={want}");
    }

    #[test]
    fn dual_time_is_even(psi in psi_strategy(), (alpha, u) in alpha_u_strategy()) {
        let w = WeightVector::alpha(alpha).unwrap();
        let neg: Vec<i64> = u.iter().map(|x| -x).collect();
        prop_assert_eq!(dual_time(&psi, &w, &u).unwrap(), dual_time(&psi, &w, &neg).unwrap());
    }

    #[test]
    fn dual_time_monotone(psi in psi_strategy(), (alpha, u) in alpha_u_strategy(), pick in 0usize..3, bump in 1i64..100) {
        let w = WeightVector::alpha(alpha).unwrap();
        let i = pick % u.len();
        let mut v = u.clone();
        v[i] += bump * if v[i] < 0 { -1 } else { 1 };
        prop_assert!(dual_time(&psi, &w, &v).unwrap().t >= dual_time(&psi, &w, &u).unwrap().t);
    }

    #[test]
    fn lambda_is_two_to_the_sigma(c in 0.1f64..10.0, sigma in 0.01f64..5.0) {
        let psi = ApproxFunction::power(c, sigma).unwrap();
        // Closed form; different libm builds may disagree in the last bit.
        let want = 2f64.powf(sigma);
        prop_assert!((psi.lambda_decay().unwrap() - want).abs() <= 2.0 * f64::EPSILON * want);
    }
}

#[test]
fn lambda_lower_bounds_the_decay_ratio() {
    for rho in [0.0, 0.5, 1.5] {
        let psi = ApproxFunction::power_log(1.3, 0.7, rho).unwrap();
        let lambda = psi.lambda_decay().unwrap();
        let mut t = psi.floor();
        while t < 1e12 {
            assert!(psi_value(&psi, t) / psi_value(&psi, 2.0 * t) >= lambda * (1.0 - 1e-12));
            t *= 1.37;
        }
    }
}

#[test]
fn shell_counts_match_inclusion_exclusion() {
    for m in 1..=4usize {
        for r in 1..=20u64 {
            let want = (2 * r + 1).pow(m as u32) - (2 * r - 1).pow(m as u32);
            assert_eq!(shell_count(m as u32, r), want, "m={m} r={r}");
            if m <= 3 {
                let listed: Vec<IntegerVector> = Shell::new(m, r).collect();
                assert_eq!(listed.len() as u64, want);
                assert!(listed.iter().all(|u| u.sup_norm() == r));
            }
        }
    }
}
