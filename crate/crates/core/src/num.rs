// SPDX-License-Identifier: Apache-2.0

//! Small numeric helpers shared across modules (libm-backed, `no_std`).

/// `base^exp`, routed through repeated multiplication when `exp` is a small
/// integer so that boundary cases such as `9^2 = 81` come out exact.
pub fn pow(base: f64, exp: f64) -> f64 {
    let rounded = libm::round(exp);
    if rounded == exp && libm::fabs(exp) <= 64.0 {
        powi(base, rounded as i32)
    } else {
        libm::pow(base, exp)
    }
}

pub fn powi(base: f64, exp: i32) -> f64 {
    let mut acc = 1.0;
    let mut b = if exp < 0 { 1.0 / base } else { base };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
#[inline]
pub fn nearest_int_dist(x: f64) -> f64 {
    libm::fabs(x - libm::round(x))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `gcd(|x_1|, ..., |x_k|)`; zero for the empty or all-zero list.
pub fn gcd_all<I: IntoIterator<Item = i64>>(xs: I) -> u64 {
    xs.into_iter().fold(0, |g, x| gcd(g, x.unsigned_abs()))
}

pub fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * f64::from(i))
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_powers_are_exact() {
        assert_eq!(pow(9.0, 2.0), 81.0);
        assert_eq!(pow(2.0, -3.0), 0.125);
        assert_eq!(pow(5.0, 0.5), libm::sqrt(5.0));
    }

    #[test]
    fn nearest_integer_distance() {
        assert!((nearest_int_dist(0.3) - 0.3).abs() < 1e-15);
        assert!((nearest_int_dist(0.7) - 0.3).abs() < 1e-15);
        assert_eq!(nearest_int_dist(-2.5), 0.5);
        assert_eq!(nearest_int_dist(4.0), 0.0);
    }

    #[test]
    fn gcd_of_lists() {
        assert_eq!(gcd_all([2, 4, -6]), 2);
        assert_eq!(gcd_all([2, 1]), 1);
        assert_eq!(gcd_all([0, 0]), 0);
        assert_eq!(gcd_all([0, 5]), 5);
    }

    #[test]
    fn slope_of_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, -1.0, -3.0, -5.0];
        assert!((ols_slope(&xs, &ys) + 2.0).abs() < 1e-14);
    }
}
