//! Asymptotic expansions in `s = 1/N` of the critical value `z_N`, the
//! connective constant `μ_N` and the amplitude `A_N`.
//!
//! The only input is the family of `N`-free counts `π_{k,δ}^{(M)}`. Writing
//! `b_{N,k} = Σ_M (-1)^M π_k^{(M)}(N)`, the critical value solves
//! `z = s [1 - Σ_k b_{N,k} z^k]`, and
//! `1/A_N = zN + Σ_k Σ_M (-1)^M k π_k^{(M)}(N) z^k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::critical::{solve_critical, DEFAULT_TOL};
use crate::cube::Dim;
use crate::error::{Error, Result};
use crate::lace::pi::{pi_k_delta, universal_table};
use crate::saw::{count_saw, EnumConfig};
use crate::series::{NPoly, SeriesS, EXACT};

/// Where `π_{k,δ}^{(M)}` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountSource {
    /// The hand-counted table for `k <= 8`, `k - δ <= 4`, `M <= 4` and the
    /// one-dimensional family; anything else is enumerated on demand.
    #[default]
    Builtin,
    /// Always enumerate canonical walks.
    Enumerated,
}

// (k, δ, M, count)
const BUILTIN: [(u32, u32, usize, u64); 10] = [
    (2, 1, 1, 1),
    (4, 2, 1, 1),
    (6, 3, 1, 4),
    (8, 4, 1, 27),
    (3, 1, 2, 1),
    (5, 2, 2, 3),
    (7, 3, 2, 15),
    (4, 1, 3, 1),
    (6, 2, 3, 5),
    (5, 1, 4, 1),
];

/// `π_{k,δ}^{(M)}` from the built-in table, or `None` outside its range.
pub fn builtin_count(k: u32, delta: u32, big_m: usize) -> Option<BigInt> {
    if delta == 1 {
        // on Q^1 the only walk bounces back and forth; its lace graphs are the
        // chains of two-step edges
        return Some(BigInt::from(u64::from(k as usize == big_m + 1)));
    }
    if delta == 0 || k > 8 || k < delta + 1 || k - delta > 4 || big_m > 4 || big_m == 0 {
        return None;
    }
    let hit = BUILTIN.iter().find(|e| (e.0, e.1, e.2) == (k, delta, big_m));
    Some(BigInt::from(hit.map_or(0, |e| e.3)))
}

/// `π_{k,δ}^{(M)}` from `source`.
pub fn count(k: u32, delta: u32, big_m: usize, source: CountSource) -> Result<BigInt> {
    if source == CountSource::Builtin {
        if let Some(c) = builtin_count(k, delta, big_m) {
            return Ok(c);
        }
    }
    pi_k_delta(k, delta, big_m)
}

/// `Σ_M (-1)^M π_{k,δ}^{(M)}` with `M` up to `max_m`.
fn signed_count(k: u32, delta: u32, max_m: usize, source: CountSource) -> Result<BigInt> {
    if source == CountSource::Enumerated {
        // one table per k covers every M at once
        universal_table(k, delta)?;
    }
    let mut total = BigInt::zero();
    for big_m in 1..=max_m.min(k as usize) {
        let c = count(k, delta, big_m, source)?;
        if big_m % 2 == 1 {
            total -= c;
        } else {
            total += c;
        }
    }
    Ok(total)
}

/// `b_{N,k} = Σ_{M=1}^{m} (-1)^M π_k^{(M)}(N)` as a polynomial in `N`.
pub fn build_bnk(k: u32, m: usize) -> Result<NPoly> {
    build_bnk_with(k, m, CountSource::Builtin)
}

pub fn build_bnk_with(k: u32, m: usize, source: CountSource) -> Result<NPoly> {
    if k < 2 || (k as usize) > 2 * m {
        return Err(Error::domain(format!("b_(N,k) needs 2 <= k <= 2m, got k = {k}, m = {m}")));
    }
    let mut out = NPoly::zero();
    for delta in 1..=k / 2 {
        let c = signed_count(k, delta, m, source)?;
        if !c.is_zero() {
            out = out.add(&NPoly::falling_factorial(delta).scale(&c));
        }
    }
    if out.degree().is_some_and(|d| d >= k as usize) {
        return Err(Error::Invariant(format!("b_(N,{k}) has degree above {}", k - 1)));
    }
    Ok(out)
}

/// `Σ_{k,δ} weight(k) c_{k,δ} N^{(δ)} z^k` over the pairs with `k - δ <= depth`.
///
/// In a lace graph each coordinate is flipped at least twice, so `δ <= k/2`
/// and `k <= 2 depth`.
fn lace_sum(z: &SeriesS, depth: i32, k_weighted: bool, source: CountSource) -> Result<SeriesS> {
    let mut total = SeriesS::zero(EXACT);
    for k in 2..=(2 * depth.max(1)) as u32 {
        let zk = z.pow(k);
        let lo = (k as i32 - depth).max(1) as u32;
        for delta in lo..=k / 2 {
            let mut c = signed_count(k, delta, k as usize, source)?;
            if k_weighted {
                c *= k;
            }
            if c.is_zero() {
                continue;
            }
            let nfall = SeriesS::from_npoly(&NPoly::falling_factorial(delta).scale(&c));
            total = total.add(&nfall.mul(&zk));
        }
    }
    Ok(total)
}

fn iterate_z(z: &SeriesS, m: i32, source: CountSource) -> Result<SeriesS> {
    let s = SeriesS::monomial(BigRational::one(), 1, EXACT);
    let bracket = SeriesS::one().sub(&lace_sum(z, m - 1, false, source)?);
    Ok(s.mul(&bracket.truncate(m - 1)).truncate(m))
}

/// `z_N = Σ_{j=1}^{m} a_j s^j + O(s^{m+1})` as a series.
pub fn z_series(m: usize, source: CountSource) -> Result<SeriesS> {
    if m == 0 {
        return Err(Error::domain("expansion order must be at least 1"));
    }
    let m = m as i32;
    let mut z = SeriesS::monomial(BigRational::one(), 1, 1);
    while z.order() < m {
        let next = iterate_z(&z, m, source)?;
        if next.order() <= z.order() {
            return Err(Error::Invariant("the z iteration stopped gaining order".into()));
        }
        z = next;
    }
    let again = iterate_z(&z, m, source)?;
    if again != z {
        return Err(Error::Invariant(format!("z series is not a fixed point: {z} vs {again}")));
    }
    if z.valuation() < 1 {
        return Err(Error::Invariant(format!("z series has a term at s^{}", z.valuation())));
    }
    Ok(z)
}

/// `[a_1, ..., a_m]` with `z_N = Σ a_j N^{-j} + O(N^{-m-1})`.
pub fn expand_z(m: usize) -> Result<Vec<BigInt>> {
    expand_z_with(m, CountSource::Builtin)
}

pub fn expand_z_with(m: usize, source: CountSource) -> Result<Vec<BigInt>> {
    z_series(m, source)?.integer_window(1)
}

/// `1/f` for a series with nonzero constant term.
pub fn series_reciprocal(f: &SeriesS) -> Result<SeriesS> {
    if f.valuation() != 0 {
        return Err(Error::domain(format!("reciprocal needs a nonzero constant term, got {f}")));
    }
    f.reciprocal()
}

/// `μ_N = 1/z_N` from the order-`m` critical value, known through `N^{-(m-2)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuSeries {
    pub series: SeriesS,
    /// Coefficients of `N, 1, 1/N, ..., 1/N^{m-2}`.
    pub coefficients: Vec<BigInt>,
}

pub fn expand_mu(m: usize) -> Result<MuSeries> {
    expand_mu_with(m, CountSource::Builtin)
}

pub fn expand_mu_with(m: usize, source: CountSource) -> Result<MuSeries> {
    let series = z_series(m, source)?.reciprocal()?;
    let coefficients = series.integer_window(-1)?;
    Ok(MuSeries { series, coefficients })
}

/// The series `1/A_N` through `s^m`.
pub fn reciprocal_amplitude_series(m: usize, source: CountSource) -> Result<SeriesS> {
    let z = z_series(m + 1, source)?;
    let n = SeriesS::monomial(BigRational::one(), -1, EXACT);
    let inv = n.mul(&z).add(&lace_sum(&z, m as i32, true, source)?);
    Ok(inv.truncate(m as i32))
}

/// `[a'_0, ..., a'_m]` with `A_N = Σ a'_j N^{-j} + O(N^{-m-1})`.
pub fn expand_amplitude(m: usize) -> Result<Vec<BigInt>> {
    expand_amplitude_with(m, CountSource::Builtin)
}

pub fn expand_amplitude_with(m: usize, source: CountSource) -> Result<Vec<BigInt>> {
    let inv = reciprocal_amplitude_series(m, source)?;
    let a = series_reciprocal(&inv)?.truncate(m as i32);
    a.integer_window(0)
}

/// Partial sum `Σ_j c_j N^{-j}` of an expansion starting at `N^{-first}`.
pub fn evaluate(coefficients: &[BigInt], first: i32, n: u32) -> BigRational {
    let s = BigRational::new(BigInt::one(), BigInt::from(n));
    coefficients
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let e = first + j as i32;
            BigRational::from_integer(c.clone()) * s.pow(e)
        })
        .sum()
}

/// The solver's `z_N(λ)` against the order-`m` series at one `N`.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesGap {
    pub n_dim: u32,
    pub order: usize,
    pub z_solver: f64,
    pub z_series: f64,
    pub gap: f64,
    /// `|gap| N^{m+1}`.
    pub scaled_gap: f64,
    /// False when the solver used a truncated susceptibility.
    pub full: bool,
    pub max_steps: usize,
}

/// Compares the critical point of `χ` truncated at `max_steps` with the series.
pub fn solver_series_gap(
    n_dim: u32,
    lambda: &BigRational,
    order: usize,
    max_steps: usize,
    config: &EnumConfig,
) -> Result<SeriesGap> {
    let dim = Dim::new(n_dim)?;
    let chi = count_saw(dim, max_steps, config)?;
    let cp = solve_critical(&chi, lambda, DEFAULT_TOL)?;
    let coeffs = expand_z(order)?;
    let zs = to_f64(&evaluate(&coeffs, 1, n_dim));
    let gap = cp.z - zs;
    Ok(SeriesGap {
        n_dim,
        order,
        z_solver: cp.z,
        z_series: zs,
        gap,
        scaled_gap: gap.abs() * (n_dim as f64).powi(order as i32 + 1),
        full: cp.full,
        max_steps: cp.max_steps,
    })
}

fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn z_coefficients() {
        assert_eq!(expand_z(1).unwrap(), ints(&[1]));
        assert_eq!(expand_z(2).unwrap(), ints(&[1, 1]));
        assert_eq!(expand_z(3).unwrap(), ints(&[1, 1, 2]));
        assert_eq!(expand_z(5).unwrap(), ints(&[1, 1, 2, 7, 39]));
    }

    #[test]
    fn mu_coefficients() {
        let mu = expand_mu(5).unwrap();
        assert_eq!(mu.coefficients, ints(&[1, -1, -1, -4, -26]));
        assert_eq!(mu.series.to_string(), "N - 1 - 1/N - 4/N^2 - 26/N^3 + O(1/N^4)");
        assert_eq!(expand_mu(2).unwrap().series.to_string(), "N - 1 + O(1/N)");
        assert_eq!(expand_mu(1).unwrap().series.to_string(), "N + O(1)");
    }

    #[test]
    fn amplitude_coefficients() {
        assert_eq!(expand_amplitude(0).unwrap(), ints(&[1]));
        assert_eq!(expand_amplitude(2).unwrap(), ints(&[1, 1, 4]));
        assert_eq!(expand_amplitude(4).unwrap(), ints(&[1, 1, 4, 26, 231]));
    }

    #[test]
    fn bnk_examples() {
        assert_eq!(build_bnk(2, 1).unwrap(), NPoly::from_i64(&[0, -1]));
        assert_eq!(build_bnk(3, 2).unwrap(), NPoly::from_i64(&[0, 1]));
        assert_eq!(build_bnk(4, 3).unwrap(), NPoly::from_i64(&[0, 0, -1]));
        assert!(build_bnk(7, 3).is_err());
    }

    #[test]
    fn builtin_table_matches_enumeration() {
        for k in 2..=8u32 {
            for delta in 1..k {
                for big_m in 1..=5usize {
                    if let Some(c) = builtin_count(k, delta, big_m) {
                        assert_eq!(c, pi_k_delta(k, delta, big_m).unwrap(), "k = {k}, δ = {delta}, M = {big_m}");
                    }
                }
            }
        }
    }

    #[test]
    fn enumerated_source_agrees() {
        assert_eq!(expand_z_with(5, CountSource::Enumerated).unwrap(), ints(&[1, 1, 2, 7, 39]));
        assert_eq!(
            expand_amplitude_with(4, CountSource::Enumerated).unwrap(),
            ints(&[1, 1, 4, 26, 231])
        );
    }

    #[test]
    fn reciprocal_examples() {
        let f = SeriesS::from_integers(0, &[1, 1], 3);
        let r = series_reciprocal(&f).unwrap();
        assert_eq!(r, SeriesS::from_integers(0, &[1, -1, 1, -1], 3));
        assert_eq!(series_reciprocal(&r).unwrap(), f);
        assert!(series_reciprocal(&SeriesS::from_integers(1, &[1], 3)).is_err());
    }

    #[test]
    fn prefix_stability() {
        let long = expand_z(5).unwrap();
        for m in 1..5 {
            assert_eq!(expand_z(m).unwrap(), long[..m]);
        }
    }
}
