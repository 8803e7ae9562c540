//! The finite-volume critical point `z_N(λ)`, defined by `χ_N(z_N) = λ V^{1/2}`,
//! together with the quantities evaluated at or below it: the linear
//! approximation of `1/χ_N`, bootstrap functions, constant-free inequalities
//! and the fractional derivative.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::{d_hat_weight, rw_green_hat, twist, walsh_transform, CubeFn, Dim, Vertex};
use crate::error::{Error, Result};
use crate::poly;
use crate::quad;
use crate::saw::{SawProfile, SawSeries};

/// Default relative tolerance on `χ_N(z_N) / (λ V^{1/2})`.
pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 4000;

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    pub dim: Dim,
    pub lambda: BigRational,
    /// Dyadic rational returned by the bisection.
    pub z_exact: BigRational,
    pub z: f64,
    /// `1/z_N`; infinite when `λ V^{1/2} = 1`.
    pub mu: f64,
    pub tol: f64,
    pub bracket: (BigRational, BigRational),
    /// `|χ_N(z_N) / (λ V^{1/2}) - 1|`.
    pub relative_residual: f64,
    /// Degree of the susceptibility polynomial that was solved.
    pub max_steps: usize,
    /// False when the polynomial omits nonzero counts.
    pub full: bool,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `λ^2 V`, the square of the target susceptibility.
fn target_squared(dim: Dim, lambda: &BigRational) -> BigRational {
    lambda * lambda * BigRational::from_integer(BigInt::from(dim.volume()))
}

/// Solve `χ(z) = λ V^{1/2}` by bisection on the (increasing) polynomial `series`.
///
/// The comparison is done exactly on `χ(z)^2` against `λ^2 V`, so the root is
/// bracketed by dyadic rationals. The bracket is refined until
/// `χ(hi) - χ(lo) <= tol · λ V^{1/2}`.
pub fn solve_critical(series: &SawSeries, lambda: &BigRational, tol: f64) -> Result<CriticalPoint> {
    let dim = series.dim();
    if !lambda.is_positive() {
        return Err(Error::domain(format!("λ = {lambda} must be positive")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    let t2 = target_squared(dim, lambda);
    let one = BigRational::one();
    if t2 < one {
        return Err(Error::domain(format!(
            "λ V^(1/2) = {} < 1 on Q^{}; the critical value needs λ V^(1/2) >= 1",
            to_f64(lambda) * (dim.volume() as f64).sqrt(),
            dim.n()
        )));
    }
    let zero = BigRational::zero();
    let chi_sq = |z: &BigRational| {
        let c = series.susceptibility(z);
        &c * &c
    };
    let finish = |lo: BigRational, hi: BigRational, z: BigRational| {
        let chi = to_f64(&series.susceptibility(&z));
        let target = to_f64(&t2).sqrt();
        let zf = to_f64(&z);
        CriticalPoint {
            dim,
            lambda: lambda.clone(),
            z: zf,
            mu: 1.0 / zf,
            z_exact: z,
            tol,
            bracket: (lo, hi),
            relative_residual: (chi / target - 1.0).abs(),
            max_steps: series.max_steps(),
            full: series.is_full(),
        }
    };
    if t2 == one {
        return Ok(finish(zero.clone(), zero.clone(), zero));
    }

    let mut hi = one.clone();
    let mut doublings = 0;
    while chi_sq(&hi) < t2 {
        hi *= BigRational::from_integer(2.into());
        doublings += 1;
        if doublings > 256 {
            return Err(Error::Invariant(format!(
                "susceptibility of degree {} never reaches the target",
                series.max_steps()
            )));
        }
    }
    let mut lo = zero;
    let tol_sq = {
        let t = BigRational::from_float(tol).expect("finite tolerance");
        &t * &t * &t2
    };
    for _ in 0..MAX_BISECTIONS {
        let gap = series.susceptibility(&hi) - series.susceptibility(&lo);
        if &gap * &gap <= tol_sq {
            break;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        if chi_sq(&mid) < t2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let dev = |z: &BigRational| (chi_sq(z) - &t2).abs();
    let z = if dev(&lo) <= dev(&hi) { lo.clone() } else { hi.clone() };
    Ok(finish(lo, hi, z))
}

/// `ζ_p = z_N (1 - V^{-p})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaP {
    /// The rational used downstream: exact when `N p` is an integer, otherwise
    /// the binary value of the float.
    pub value: BigRational,
    pub exact: bool,
}

impl ZetaP {
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.value)
    }
}

pub fn zeta_p(cp: &CriticalPoint, p: &BigRational) -> Result<ZetaP> {
    if !p.is_positive() || p >= &rat(1, 2) {
        return Err(Error::domain(format!("p = {p} must lie in (0, 1/2)")));
    }
    let np = p * BigRational::from_integer(cp.dim.n().into());
    if np.is_integer() {
        let shift = np.to_integer().to_u32().expect("N p < N");
        let v_pow = BigRational::new(BigInt::one(), BigInt::one() << shift);
        return Ok(ZetaP {
            value: &cp.z_exact * (BigRational::one() - v_pow),
            exact: true,
        });
    }
    let value = to_f64(&cp.z_exact) * (1.0 - (-to_f64(&np) * std::f64::consts::LN_2).exp());
    Ok(ZetaP {
        value: BigRational::from_float(value).expect("finite ζ_p"),
        exact: false,
    })
}

/// `F = 1/χ` and `F' = -χ'/χ^2` at `z`.
pub fn reciprocal_susceptibility(series: &SawSeries, z: &BigRational) -> (BigRational, BigRational) {
    let chi = series.susceptibility(z);
    let d = series.derivative(z);
    let f = chi.recip();
    let fp = -(d * &f * &f);
    (f, fp)
}

pub fn reciprocal_susceptibility_f64(series: &SawSeries, z: f64) -> (f64, f64) {
    let chi = series.susceptibility_f64(z);
    (1.0 / chi, -series.derivative_f64(z) / (chi * chi))
}

/// Linear approximation `Φ(z) = α - β z` of `F = 1/χ` at `ζ_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Linearization {
    pub zeta_p: ZetaP,
    pub f_at: BigRational,
    pub f_prime_at: BigRational,
    pub alpha: BigRational,
    pub beta: BigRational,
    /// `A_N = 1/α`.
    pub amplitude: BigRational,
    /// `β/α`, the growth rate of the coefficients of `1/Φ`.
    pub growth_ratio: BigRational,
}

impl Linearization {
    /// `(β/α) / μ_N`, expected to be `1 + O(V^{-p})`.
    pub fn growth_over_mu(&self, cp: &CriticalPoint) -> f64 {
        to_f64(&(&self.growth_ratio * &cp.z_exact))
    }

    /// `1/Φ(z)`.
    pub fn phi_reciprocal(&self, z: &BigRational) -> BigRational {
        (&self.alpha - &self.beta * z).recip()
    }

    /// Coefficient `φ_n = A (β/α)^n` of `1/Φ`.
    pub fn phi_coefficient(&self, n: u32) -> BigRational {
        &self.amplitude * num_traits::pow(self.growth_ratio.clone(), n as usize)
    }

    /// `R(z) = F(z) - Φ(z)`.
    pub fn remainder(&self, series: &SawSeries, z: &BigRational) -> BigRational {
        series.susceptibility(z).recip() - (&self.alpha - &self.beta * z)
    }
}

pub fn linearize(series: &SawSeries, cp: &CriticalPoint, p: &BigRational) -> Result<Linearization> {
    let zeta = zeta_p(cp, p)?;
    let (f_at, f_prime_at) = reciprocal_susceptibility(series, &zeta.value);
    let alpha = &f_at - &zeta.value * &f_prime_at;
    let beta = -f_prime_at.clone();
    if alpha.is_zero() {
        return Err(Error::Invariant("α vanished".into()));
    }
    Ok(Linearization {
        amplitude: alpha.recip(),
        growth_ratio: &beta / &alpha,
        zeta_p: zeta,
        f_at,
        f_prime_at,
        alpha,
        beta,
    })
}

/// `β_z = 1/N + χ(z)^2 / V`.
pub fn beta_z(series: &SawSeries, z: &BigRational) -> BigRational {
    let dim = series.dim();
    let chi = series.susceptibility(z);
    rat(1, dim.n() as i64) + &chi * &chi / BigRational::from_integer(BigInt::from(dim.volume()))
}

/// Checks `χ(z) >= 1 / (z/(w χ(w)) + 1 - z/w)` for `0 < z <= w`.
pub fn check_chi_lower_bound(series: &SawSeries, z: &BigRational, w: &BigRational) -> Result<()> {
    if !z.is_positive() || z > w {
        return Err(Error::domain(format!("need 0 < z <= w, got z = {z}, w = {w}")));
    }
    let r = z / w;
    let chi_z = series.susceptibility(z);
    let bound = (&r / series.susceptibility(w) + BigRational::one() - &r).recip();
    if chi_z < bound {
        return Err(Error::Invariant(format!(
            "χ lower bound fails at z = {z}, w = {w}: χ(z) = {chi_z} < {bound}"
        )));
    }
    Ok(())
}

/// Checks `χ^2 / B <= ∂_z[z χ] <= χ^2` at `z`.
pub fn check_differential_inequality(profile: &SawProfile, z: &BigRational) -> Result<()> {
    if z.is_negative() {
        return Err(Error::domain(format!("z = {z} must be nonnegative")));
    }
    let series = profile.series();
    let chi = series.susceptibility(z);
    let chi_sq = &chi * &chi;
    let mid = series.z_chi_derivative(z);
    let b = crate::saw::bubble(profile, z)?;
    if &chi_sq / &b > mid || mid > chi_sq {
        return Err(Error::Invariant(format!(
            "differential inequality fails at z = {z}: χ²/B = {}, ∂[zχ] = {mid}, χ² = {chi_sq}",
            &chi_sq / &b
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bootstrap {
    /// `p_z`, defined by `p_z N = 1 - 1/χ(z)`.
    pub p_z: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    /// `Ĝ_z(0) - Ĉ_{p_z}(0)`; zero by construction of `p_z`.
    pub zero_mode_gap: f64,
}

fn max_rational(values: impl Iterator<Item = BigRational>) -> BigRational {
    values.fold(BigRational::zero(), |m, v| if v > m { v } else { m })
}

/// `f_1 = zN`, `f_2 = max_k |Ĝ_z(k)| / Ĉ_{p_z}(k)` and
/// `f_3 = max_{k≠0} max_ℓ |Ĝ_{z,k}(ℓ)| / C̄_{p_z}(k, ℓ)`.
pub fn bootstrap_diagnostics(cp: &CriticalPoint, profile: &SawProfile, z: &BigRational) -> Result<Bootstrap> {
    let dim = profile.dim();
    if dim != cp.dim {
        return Err(Error::DimensionMismatch {
            left: dim.n(),
            right: cp.dim.n(),
        });
    }
    if z.is_negative() || z > &cp.z_exact {
        return Err(Error::domain(format!("bootstrap functions need 0 <= z <= z_N, got {z}")));
    }
    let n = BigRational::from_integer(dim.n().into());
    let g = CubeFn::from_weights(dim, &profile.two_point_weights(z))?;
    let chi = g.sum();
    let p = (BigRational::one() - chi.recip()) / &n;
    let c_hat: Vec<BigRational> = (0..=dim.n()).map(|w| rw_green_hat(dim, &p, w)).collect();
    let g_hat = walsh_transform(&g);

    let f2 = max_rational(
        dim.vertices()
            .map(|k| g_hat.get(k).abs() / &c_hat[k.weight() as usize]),
    );

    let f3 = dim
        .vertices()
        .skip(1)
        .collect::<Vec<Vertex>>()
        .par_iter()
        .map(|&k| {
            let gk_hat = walsh_transform(&twist(&g, k));
            let factor = BigRational::one() - d_hat_weight(dim, k.weight());
            max_rational(dim.vertices().map(|l| {
                let bar = &factor * &c_hat[l.weight() as usize] * &c_hat[(k + l).weight() as usize];
                gk_hat.get(l).abs() / bar
            }))
        })
        .reduce(BigRational::zero, |a, b| if b > a { b } else { a });

    Ok(Bootstrap {
        p_z: to_f64(&p),
        f1: to_f64(&(z * &n)),
        f2: to_f64(&f2),
        f3: to_f64(&f3),
        zero_mode_gap: to_f64(&(g_hat.get(Vertex(0)) - &c_hat[0])),
    })
}

/// `|μ(λ1)/μ(λ2) - 1| · V^{1/2}`, which stays bounded when the ratio is `1 + O(V^{-1/2})`.
pub fn mu_ratio_diagnostic(series: &SawSeries, lambda1: &BigRational, lambda2: &BigRational) -> Result<f64> {
    let a = solve_critical(series, lambda1, DEFAULT_TOL)?;
    let b = solve_critical(series, lambda2, DEFAULT_TOL)?;
    if a.z_exact.is_zero() || b.z_exact.is_zero() {
        return Err(Error::domain("μ_N is infinite at λ V^(1/2) = 1"));
    }
    let ratio = to_f64(&(&b.z_exact / &a.z_exact));
    Ok((ratio - 1.0).abs() * (series.dim().volume() as f64).sqrt())
}

/// `δ^ε f(z) = Σ_{n>=1} n^ε a_n z^n`.
pub fn fractional_derivative(coeffs: &[f64], eps: f64, z: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, a)| (n as f64).powf(eps) * a * z.powi(n as i32))
        .sum()
}

/// `δ^ε f(z)` for integer `ε`, exactly.
pub fn fractional_derivative_exact(coeffs: &[BigInt], eps: u32, z: &BigRational) -> BigRational {
    let weighted: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| if n == 0 { BigInt::zero() } else { a * num_traits::pow(BigInt::from(n), eps as usize) })
        .collect();
    poly::eval_rational(&weighted, z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionalCheck {
    pub direct: f64,
    pub integral: f64,
    pub relative_error: f64,
    /// Quadrature error estimate for the integral.
    pub error_estimate: f64,
}

/// Compares `δ^ε f(z)` with `γ_ε z ∫_0^∞ f'(z e^{-t}) e^{-t} t^{-ε} dt`, `γ_ε = 1/Γ(1-ε)`.
///
/// On `[0, 1]` the substitution `t = u^{1/(1-ε)}` removes the endpoint
/// singularity; the tail beyond `t = 50` is below double precision.
pub fn fractional_integral_check(coeffs: &[f64], eps: f64, z: f64) -> Result<FractionalCheck> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("ε = {eps} must lie in (0, 1)")));
    }
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
    if !(z > 0.0) {
        return Err(Error::domain(format!("z = {z} must be positive")));
    }
    let derivative: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(n, a)| n as f64 * a).collect();
    let f_prime = |x: f64| derivative.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let g = |t: f64| f_prime(z * (-t).exp()) * (-t).exp();

    let power = 1.0 / (1.0 - eps);
    let (head, head_err) = quad::integrate(|u: f64| g(u.powf(power)), 0.0, 1.0, 1e-15, 1e-13)?;
    let (tail, tail_err) = quad::integrate(|t: f64| g(t) * t.powf(-eps), 1.0, 50.0, 1e-15, 1e-13)?;
    let gamma = 1.0 / libm::tgamma(1.0 - eps);
    let integral = gamma * z * (head * power + tail);
    let direct = fractional_derivative(coeffs, eps, z);
    Ok(FractionalCheck {
        direct,
        integral,
        relative_error: ((integral - direct) / direct).abs(),
        error_estimate: gamma * z * (head_err * power + tail_err),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saw::{count_saw, count_saw_by_endpoint, EnumConfig};

    fn full(n: u32) -> SawSeries {
        let dim = Dim::new(n).unwrap();
        count_saw(dim, (dim.volume() - 1) as usize, &EnumConfig::default()).unwrap()
    }

    #[test]
    fn n2_root_of_cubic() {
        let cp = solve_critical(&full(2), &rat(1, 1), 1e-12).unwrap();
        let z = cp.z;
        assert!((2.0 * z * z * z + 2.0 * z * z + 2.0 * z - 1.0).abs() < 1e-11);
        assert!(cp.relative_residual <= 1e-12);
        let (lo, hi) = &cp.bracket;
        assert!(lo <= &cp.z_exact && &cp.z_exact <= hi);
    }

    #[test]
    fn boundary_and_rejection() {
        let s = full(2);
        let cp = solve_critical(&s, &rat(1, 2), 1e-12).unwrap();
        assert!(cp.z_exact.is_zero());
        assert!(cp.mu.is_infinite());
        let err = solve_critical(&s, &rat(1, 3), 1e-12).unwrap_err();
        assert_eq!(err.kind(), "domain");
    }

    #[test]
    fn monotone_in_lambda() {
        let s = full(3);
        let a = solve_critical(&s, &rat(1, 1), 1e-12).unwrap();
        let b = solve_critical(&s, &rat(2, 1), 1e-12).unwrap();
        assert!(a.z_exact < b.z_exact);
        assert!(a.mu > b.mu);
    }

    #[test]
    fn zeta_exact_cases() {
        let s4 = full(4);
        let cp = solve_critical(&s4, &rat(1, 1), 1e-12).unwrap();
        let zeta = zeta_p(&cp, &rat(1, 4)).unwrap();
        assert!(zeta.exact);
        assert_eq!(zeta.value, &cp.z_exact / BigRational::from_integer(2.into()));
        let cp3 = solve_critical(&full(3), &rat(1, 1), 1e-12).unwrap();
        assert_eq!(zeta_p(&cp3, &rat(1, 3)).unwrap().value, &cp3.z_exact / BigRational::from_integer(2.into()));
        let inexact = zeta_p(&cp, &rat(1, 5)).unwrap();
        assert!(!inexact.exact && inexact.value < cp.z_exact);
        assert!(zeta_p(&cp, &rat(1, 2)).is_err());
    }

    #[test]
    fn reciprocal_values() {
        let s = full(2);
        let (f, fp) = reciprocal_susceptibility(&s, &BigRational::zero());
        assert_eq!((f, fp), (rat(1, 1), rat(-2, 1)));
        let (f, _) = reciprocal_susceptibility(&s, &rat(1, 4));
        assert_eq!(f, rat(32, 53));
    }

    #[test]
    fn linearization_algebra() {
        let s = full(4);
        let cp = solve_critical(&s, &rat(1, 1), 1e-12).unwrap();
        let lin = linearize(&s, &cp, &rat(1, 4)).unwrap();
        assert!(lin.amplitude.is_positive());
        assert_eq!(lin.alpha, &lin.f_at + &lin.zeta_p.value * &lin.beta);
        assert!(lin.beta.is_positive());
        let ident = &lin.growth_ratio * &lin.zeta_p.value * (&lin.alpha / (&lin.zeta_p.value * &lin.beta));
        assert_eq!(ident, rat(1, 1));
        assert_eq!(lin.remainder(&s, &lin.zeta_p.value), BigRational::zero());
    }

    #[test]
    fn lower_bound_examples() {
        let s = full(2);
        check_chi_lower_bound(&s, &rat(1, 8), &rat(1, 4)).unwrap();
        check_chi_lower_bound(&s, &rat(1, 4), &rat(1, 4)).unwrap();
        assert!(check_chi_lower_bound(&s, &rat(1, 2), &rat(1, 4)).is_err());
    }

    #[test]
    fn bootstrap_at_zero() {
        let dim = Dim::new(3).unwrap();
        let profile = count_saw_by_endpoint(dim, 7, &EnumConfig::default()).unwrap();
        let cp = solve_critical(&profile.series(), &rat(1, 1), 1e-12).unwrap();
        let b = bootstrap_diagnostics(&cp, &profile, &BigRational::zero()).unwrap();
        assert_eq!((b.f1, b.f2, b.f3), (0.0, 1.0, 0.0));
        let half = &cp.z_exact / BigRational::from_integer(2.into());
        let b = bootstrap_diagnostics(&cp, &profile, &half).unwrap();
        assert_eq!(b.zero_mode_gap, 0.0);
        assert!(b.f1 > 0.0 && b.f2 >= 1.0 && b.f3 > 0.0 && b.f3.is_finite());
        let beyond = &cp.z_exact * rat(2, 1);
        assert!(bootstrap_diagnostics(&cp, &profile, &beyond).is_err());
    }

    #[test]
    fn fractional_examples() {
        assert_eq!(fractional_derivative(&[0.0, 0.0, 0.0, 1.0], 1.0, 2.0), 24.0);
        assert_eq!(fractional_derivative(&[0.0, 1.0], 0.37, 0.3), 0.3);
        assert_eq!(fractional_derivative(&[5.0], 0.5, 0.3), 0.0);
        let c: Vec<BigInt> = [4, 3, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        // z f'(z) at z = 1/2: 3/2 + 3/8
        assert_eq!(fractional_derivative_exact(&c, 1, &rat(1, 2)), rat(15, 8));
    }

    #[test]
    fn fractional_integral_small_cases() {
        let r = fractional_integral_check(&[0.0, 1.0], 0.5, 0.5).unwrap();
        assert!(r.relative_error <= 1e-8, "{r:?}");
        let r = fractional_integral_check(&[0.0, 0.0, 1.0], 0.5, 1.0 / 3.0).unwrap();
        assert!((r.integral - 2f64.sqrt() / 9.0).abs() <= 1e-8 * r.integral);
        assert!(fractional_integral_check(&[0.0, 1.0], 1.0, 0.5).is_err());
    }
}
