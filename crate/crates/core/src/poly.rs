//! Dense univariate polynomials with integer coefficients, lowest degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub fn eval_rational(coeffs: &[BigInt], z: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
        acc * z + BigRational::from_integer(c.clone())
    })
}

pub fn eval_f64(coeffs: &[BigInt], z: f64) -> f64 {
    coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * z + c.to_f64().unwrap_or(f64::INFINITY))
}

pub fn derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c * BigInt::from(n))
        .collect()
}

/// Coefficients of `d/dz [z p(z)]`, i.e. `(n + 1) c_n`.
pub fn z_derivative_shifted(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * BigInt::from(n + 1))
        .collect()
}

/// Product truncated to degree `max_degree`.
pub fn mul_truncated(a: &[BigInt], b: &[BigInt], max_degree: usize) -> Vec<BigInt> {
    let len = (a.len() + b.len()).saturating_sub(1).min(max_degree + 1);
    let mut out = vec![BigInt::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `n (n - 1) ... (n - k + 1)`; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u32) -> BigInt {
    (0..k as u64).fold(BigInt::from(1), |acc, j| {
        if j >= n {
            BigInt::zero()
        } else {
            acc * BigInt::from(n - j)
        }
    })
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::from(1), |acc, j| acc * BigInt::from(n - j) / BigInt::from(j + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn horner_matches_hand_value() {
        let p = ints(&[1, 2, 2, 2]);
        let z = BigRational::new(1.into(), 4.into());
        assert_eq!(eval_rational(&p, &z), BigRational::new(53.into(), 32.into()));
        assert!((eval_f64(&p, 0.25) - 53.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn falling_and_binomial() {
        assert_eq!(falling_factorial(5, 0), BigInt::from(1));
        assert_eq!(falling_factorial(5, 3), BigInt::from(60));
        assert_eq!(falling_factorial(2, 3), BigInt::zero());
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(30, 15), BigInt::from(155117520));
        assert_eq!(binomial(3, 4), BigInt::zero());
    }

    #[test]
    fn products_and_derivatives() {
        assert_eq!(derivative(&ints(&[5, 1, 3])), ints(&[1, 6]));
        assert_eq!(z_derivative_shifted(&ints(&[1, 2, 2])), ints(&[1, 4, 6]));
        assert_eq!(mul_truncated(&ints(&[1, 1]), &ints(&[1, -1]), 5), ints(&[1, 0, -1]));
        assert_eq!(mul_truncated(&ints(&[1, 1]), &ints(&[1, 1]), 1), ints(&[1, 2]));
    }
}
