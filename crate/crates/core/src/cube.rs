//! Hypercube geometry, the Walsh–Hadamard (Fourier) transform on `Z_2^N`,
//! convolution, and simple random walk quantities.
//!
//! Points of `Q^N` are bit patterns held in a `u64`; addition is XOR. A
//! [`CubeFn`] is a dense table of scalars over all `V = 2^N` points, so dense
//! operations are limited to `N <= 30`. Quantities that only depend on the
//! Hamming weight (such as [`d_hat`]) accept any `N <= 63`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest dimension for which `V`-length arrays are materialised.
pub const MAX_DENSE_DIM: u32 = 30;
/// Largest dimension representable by a [`Vertex`].
pub const MAX_DIM: u32 = 63;

/// Direct convolution is used up to this volume, the transform route above.
const DIRECT_CONVOLUTION_MAX_VOLUME: usize = 256;

/// Dimension `N` of the hypercube `Q^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dim(u32);

impl Dim {
    pub fn new(n_dim: u32) -> Result<Self> {
        if n_dim == 0 || n_dim > MAX_DIM {
            return Err(Error::domain(format!(
                "dimension must lie in 1..={MAX_DIM}, got {n_dim}"
            )));
        }
        Ok(Dim(n_dim))
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.0
    }

    /// `V = 2^N`.
    #[inline]
    pub fn volume(self) -> u64 {
        1u64 << self.0
    }

    /// Volume as an array length; fails when `N` exceeds the dense cap.
    pub fn dense_len(self) -> Result<usize> {
        if self.0 > MAX_DENSE_DIM {
            return Err(Error::domain(format!(
                "dense functions need N <= {MAX_DENSE_DIM}, got N = {}",
                self.0
            )));
        }
        Ok(1usize << self.0)
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.0 == 64 || v.0 >> self.0 == 0
    }

    /// Iterator over all vertices in increasing bit order.
    pub fn vertices(self) -> impl Iterator<Item = Vertex> {
        (0..self.volume()).map(Vertex)
    }
}

/// A point of `Q^N`; only the low `N` bits are meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vertex(pub u64);

impl Vertex {
    pub const ORIGIN: Vertex = Vertex(0);

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    /// Unit vector along coordinate `i` (0-based).
    #[inline]
    pub fn unit(i: u32) -> Vertex {
        Vertex(1u64 << i)
    }

    #[inline]
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// Parity of `k · x`; the character value is `(-1)^{k·x}`.
    #[inline]
    pub fn dot_parity(self, other: Vertex) -> bool {
        (self.0 & other.0).count_ones() & 1 == 1
    }
}

// addition in Z_2^N is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Vertex {
    type Output = Vertex;
    #[inline]
    fn add(self, rhs: Vertex) -> Vertex {
        Vertex(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Sub for Vertex {
    type Output = Vertex;
    #[inline]
    fn sub(self, rhs: Vertex) -> Vertex {
        Vertex(self.0 ^ rhs.0)
    }
}

/// Hamming norm `|x|`: the number of coordinates equal to one.
#[inline]
pub fn hamming_weight(v: Vertex) -> u32 {
    v.weight()
}

/// Scalars a [`CubeFn`] can hold.
///
/// `BigInt` and `BigRational` are the exact modes; `f64` is for large-`N`
/// diagnostics only.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    /// Divide by the volume. Integer mode fails unless the division is exact.
    fn div_volume(&self, volume: u64) -> Result<Self>;
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn div_volume(&self, volume: u64) -> Result<Self> {
        let (q, r) = self.div_rem(&BigInt::from(volume));
        if !r.is_zero() {
            return Err(Error::Inexact(format!(
                "{self} is not divisible by the volume {volume}"
            )));
        }
        Ok(q)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn div_volume(&self, volume: u64) -> Result<Self> {
        Ok(self / BigRational::from_integer(BigInt::from(volume)))
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn div_volume(&self, volume: u64) -> Result<Self> {
        Ok(self / volume as f64)
    }
}

/// A scalar field over all `2^N` points of the hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeFn<T> {
    dim: Dim,
    values: Vec<T>,
}

impl<T: Scalar> CubeFn<T> {
    pub fn zeros(dim: Dim) -> Result<Self> {
        Ok(CubeFn {
            dim,
            values: vec![T::zero(); dim.dense_len()?],
        })
    }

    pub fn from_values(dim: Dim, values: Vec<T>) -> Result<Self> {
        let len = dim.dense_len()?;
        if values.len() != len {
            return Err(Error::domain(format!(
                "expected {len} values for N = {}, got {}",
                dim.n(),
                values.len()
            )));
        }
        Ok(CubeFn { dim, values })
    }

    pub fn from_fn(dim: Dim, f: impl Fn(Vertex) -> T) -> Result<Self> {
        let len = dim.dense_len()?;
        Ok(CubeFn {
            dim,
            values: (0..len as u64).map(|b| f(Vertex(b))).collect(),
        })
    }

    /// A function depending on the point only through its Hamming weight.
    pub fn from_weights(dim: Dim, by_weight: &[T]) -> Result<Self> {
        if by_weight.len() != dim.n() as usize + 1 {
            return Err(Error::domain(format!(
                "weight table needs N + 1 = {} entries, got {}",
                dim.n() + 1,
                by_weight.len()
            )));
        }
        Self::from_fn(dim, |v| by_weight[v.weight() as usize].clone())
    }

    /// Indicator of the origin.
    pub fn delta(dim: Dim) -> Result<Self> {
        Self::from_fn(dim, |v| if v == Vertex::ORIGIN { T::one() } else { T::zero() })
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> &T {
        &self.values[v.0 as usize]
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CubeFn<U> {
        CubeFn {
            dim: self.dim,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn sum(&self) -> T {
        self.values.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// Pointwise product.
    pub fn pointwise_mul(&self, other: &CubeFn<T>) -> Result<CubeFn<T>> {
        check_same_dim(self.dim, other.dim)?;
        Ok(CubeFn {
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        })
    }

    pub fn add(&self, other: &CubeFn<T>) -> Result<CubeFn<T>> {
        check_same_dim(self.dim, other.dim)?;
        Ok(CubeFn {
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, c: &T) -> CubeFn<T> {
        self.map(|v| v.clone() * c.clone())
    }

    /// Values on one representative per weight class, if the function is
    /// invariant under coordinate permutations.
    pub fn weight_profile(&self) -> Option<Vec<T>> {
        let n = self.dim.n();
        let reps: Vec<T> = (0..=n)
            .map(|w| self.values[((1u64 << w) - 1) as usize].clone())
            .collect();
        self.values
            .iter()
            .enumerate()
            .all(|(b, v)| *v == reps[(b as u64).count_ones() as usize])
            .then_some(reps)
    }
}

fn check_same_dim(a: Dim, b: Dim) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

fn butterfly<T: Scalar>(values: &mut [T]) {
    let len = values.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for j in block..block + h {
                let a = values[j].clone();
                let b = values[j + h].clone();
                values[j] = a.clone() + b.clone();
                values[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `f̂(k) = Σ_x f(x) (-1)^{k·x}`, by the in-place butterfly in `O(V N)`.
pub fn walsh_transform<T: Scalar>(f: &CubeFn<T>) -> CubeFn<T> {
    let mut values = f.values.clone();
    butterfly(&mut values);
    CubeFn { dim: f.dim, values }
}

/// `f(x) = V^{-1} Σ_k f̂(k) (-1)^{k·x}`.
///
/// In integer mode a value not divisible by `V` is reported as
/// [`Error::Inexact`]: it can only come from a corrupted transform.
pub fn inverse_walsh<T: Scalar>(fhat: &CubeFn<T>) -> Result<CubeFn<T>> {
    let mut values = fhat.values.clone();
    butterfly(&mut values);
    let volume = fhat.dim.volume();
    let values = values
        .iter()
        .map(|v| v.div_volume(volume))
        .collect::<Result<Vec<_>>>()?;
    Ok(CubeFn {
        dim: fhat.dim,
        values,
    })
}

/// `(f * g)(x) = Σ_y f(x - y) g(y)`.
pub fn convolve<T: Scalar>(f: &CubeFn<T>, g: &CubeFn<T>) -> Result<CubeFn<T>> {
    check_same_dim(f.dim, g.dim)?;
    if f.values.len() <= DIRECT_CONVOLUTION_MAX_VOLUME {
        convolve_direct(f, g)
    } else {
        convolve_via_transform(f, g)
    }
}

/// Direct `O(V^2)` convolution.
pub fn convolve_direct<T: Scalar>(f: &CubeFn<T>, g: &CubeFn<T>) -> Result<CubeFn<T>> {
    check_same_dim(f.dim, g.dim)?;
    let len = f.values.len();
    let mut out = vec![T::zero(); len];
    for (y, gy) in g.values.iter().enumerate() {
        if gy.is_zero() {
            continue;
        }
        for (x, slot) in out.iter_mut().enumerate() {
            let fx = &f.values[x ^ y];
            if !fx.is_zero() {
                *slot = slot.clone() + fx.clone() * gy.clone();
            }
        }
    }
    Ok(CubeFn {
        dim: f.dim,
        values: out,
    })
}

/// Convolution through `widehat{f*g} = f̂ ĝ`.
pub fn convolve_via_transform<T: Scalar>(f: &CubeFn<T>, g: &CubeFn<T>) -> Result<CubeFn<T>> {
    check_same_dim(f.dim, g.dim)?;
    let product = walsh_transform(f).pointwise_mul(&walsh_transform(g))?;
    inverse_walsh(&product)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Transition probability `D` of simple random walk: `1/N` on unit vectors.
pub fn step_distribution(dim: Dim) -> Result<CubeFn<BigRational>> {
    let p = rat(1, dim.n() as i64);
    CubeFn::from_fn(dim, |v| {
        if v.weight() == 1 {
            p.clone()
        } else {
            BigRational::zero()
        }
    })
}

/// `D̂(k) = 1 - 2|k|/N`, exact for any `N`.
pub fn d_hat(dim: Dim, k: Vertex) -> BigRational {
    d_hat_weight(dim, k.weight())
}

pub(crate) fn d_hat_weight(dim: Dim, weight: u32) -> BigRational {
    let n = dim.n() as i64;
    rat(n - 2 * weight as i64, n)
}

/// Number of `i`-step walks (not necessarily self-avoiding) from the origin
/// to each point: `w_i = N^i D^{*i}`, by repeated integer convolution.
pub fn walk_counts(dim: Dim, i: u32) -> Result<CubeFn<BigInt>> {
    let step = CubeFn::from_fn(dim, |v| {
        if v.weight() == 1 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    })?;
    let mut acc = CubeFn::<BigInt>::delta(dim)?;
    for _ in 0..i {
        acc = convolve(&acc, &step)?;
    }
    Ok(acc)
}

/// `D^{*i}`, the `i`-fold convolution power of `D` (`i = 0` gives the delta).
pub fn rw_power(dim: Dim, i: u32) -> Result<CubeFn<BigRational>> {
    let denom = BigInt::from(dim.n()).pow(i);
    Ok(walk_counts(dim, i)?.map(|c| BigRational::new(c.clone(), denom.clone())))
}

/// `D^{*i}` computed spectrally as `V^{-1} Σ_k D̂(k)^i (-1)^{k·x}`.
pub fn rw_power_spectral(dim: Dim, i: u32) -> Result<CubeFn<BigRational>> {
    let by_weight: Vec<BigRational> = (0..=dim.n())
        .map(|w| num_traits::pow(d_hat_weight(dim, w), i as usize))
        .collect();
    inverse_walsh(&CubeFn::from_weights(dim, &by_weight)?)
}

/// `Ĉ_p(k) = 1 / (1 - pN + 2p|k|)`.
pub fn rw_green_hat(dim: Dim, p: &BigRational, weight: u32) -> BigRational {
    let n = BigRational::from_integer(BigInt::from(dim.n()));
    let w = BigRational::from_integer(BigInt::from(weight));
    let two = BigRational::from_integer(BigInt::from(2));
    (BigRational::one() - p * &n + two * p * w).recip()
}

fn check_green_parameter(dim: Dim, p: &BigRational) -> Result<()> {
    if p.is_negative() {
        return Err(Error::domain(format!("random walk parameter p = {p} is negative")));
    }
    if p * BigRational::from_integer(BigInt::from(dim.n())) >= BigRational::one() {
        return Err(Error::domain(format!(
            "p = {p} >= 1/N: the zero mode of the random walk generating function diverges"
        )));
    }
    Ok(())
}

/// Random walk generating function `C_p(x) = Σ_n w_n(x) p^n` for `0 <= p < 1/N`,
/// via the inverse transform of [`rw_green_hat`].
pub fn rw_green(dim: Dim, p: &BigRational) -> Result<CubeFn<BigRational>> {
    check_green_parameter(dim, p)?;
    let by_weight: Vec<BigRational> = (0..=dim.n()).map(|w| rw_green_hat(dim, p, w)).collect();
    inverse_walsh(&CubeFn::from_weights(dim, &by_weight)?)
}

/// `f_k(x) = (1 - (-1)^{k·x}) f(x)`.
pub fn twist<T: Scalar>(f: &CubeFn<T>, k: Vertex) -> CubeFn<T> {
    let two = T::from_i64(2);
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(x, fx)| {
            if k.dot_parity(Vertex(x as u64)) {
                two.clone() * fx.clone()
            } else {
                T::zero()
            }
        })
        .collect();
    CubeFn { dim: f.dim, values }
}

/// `max_x D^{*i}(x) · N^{⌈i/2⌉}`, the scaled transition probability whose
/// boundedness in `N` is the content of the random walk estimate.
pub fn scaled_max_transition(dim: Dim, i: u32) -> Result<BigRational> {
    let power = rw_power(dim, i)?;
    let max = power
        .values()
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(BigRational::zero);
    Ok(max * BigRational::from_integer(BigInt::from(dim.n()).pow(i.div_ceil(2))))
}

/// The explicit constant `(i + 1) i^i` bounding [`scaled_max_transition`].
pub fn transition_bound_constant(i: u32) -> BigInt {
    BigInt::from(i + 1) * BigInt::from(i).pow(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dim {
        Dim::new(n).unwrap()
    }

    #[test]
    fn hamming_weight_examples() {
        assert_eq!(hamming_weight(Vertex(0b00100)), 1);
        assert_eq!(hamming_weight(Vertex(0)), 0);
        assert_eq!(hamming_weight(Vertex(0b111)), 3);
    }

    #[test]
    fn dim_bounds() {
        assert!(Dim::new(0).is_err());
        assert!(Dim::new(64).is_err());
        assert_eq!(dim(5).volume(), 32);
        assert!(dim(31).dense_len().is_err());
        assert!(dim(3).contains(Vertex(7)));
        assert!(!dim(3).contains(Vertex(8)));
    }

    #[test]
    fn delta_transforms_to_constant() {
        let f = CubeFn::<BigInt>::delta(dim(4)).unwrap();
        let fhat = walsh_transform(&f);
        assert!(fhat.values().iter().all(|v| v.is_one()));
        assert_eq!(inverse_walsh(&fhat).unwrap(), f);
    }

    #[test]
    fn constant_spectrum_at_zero_inverts_to_one() {
        let d = dim(3);
        let fhat = CubeFn::from_fn(d, |k| {
            if k == Vertex::ORIGIN {
                BigInt::from(8)
            } else {
                BigInt::zero()
            }
        })
        .unwrap();
        let f = inverse_walsh(&fhat).unwrap();
        assert!(f.values().iter().all(|v| v.is_one()));
    }

    #[test]
    fn corrupted_integer_transform_is_rejected() {
        let d = dim(2);
        let fhat = CubeFn::from_values(d, vec![BigInt::from(1); 3].into_iter().chain([BigInt::zero()]).collect())
            .unwrap();
        assert!(matches!(inverse_walsh(&fhat), Err(Error::Inexact(_))));
    }

    #[test]
    fn step_distribution_transform_is_d_hat() {
        let d = dim(3);
        let dist = step_distribution(d).unwrap();
        assert_eq!(dist.sum(), BigRational::one());
        assert_eq!(*dist.get(Vertex(0b010)), rat(1, 3));
        let dh = walsh_transform(&dist);
        for k in d.vertices() {
            assert_eq!(*dh.get(k), d_hat(d, k));
        }
        assert_eq!(
            dh.weight_profile().unwrap(),
            vec![rat(1, 1), rat(1, 3), rat(-1, 3), rat(-1, 1)]
        );
    }

    #[test]
    fn d_hat_examples() {
        assert_eq!(d_hat(dim(3), Vertex(0)), rat(1, 1));
        assert_eq!(d_hat(dim(3), Vertex(0b011)), rat(-1, 3));
        assert_eq!(d_hat(dim(4), Vertex(0b1111)), rat(-1, 1));
        // weight-only quantities work beyond the dense cap
        assert_eq!(d_hat(dim(50), Vertex(1)), rat(48, 50));
    }

    #[test]
    fn convolution_examples() {
        for n in 2..=6 {
            let d = dim(n);
            let dist = step_distribution(d).unwrap();
            let g = CubeFn::from_fn(d, |v| rat(v.0 as i64 * 3 - 1, 7)).unwrap();
            assert_eq!(convolve(&CubeFn::delta(d).unwrap(), &g).unwrap(), g);
            let dd = convolve(&dist, &dist).unwrap();
            assert_eq!(*dd.get(Vertex(0)), rat(1, n as i64));
            assert_eq!(*dd.get(Vertex(0b11)), rat(2, (n * n) as i64));
        }
    }

    #[test]
    fn convolution_dimension_mismatch() {
        let a = CubeFn::<BigInt>::delta(dim(2)).unwrap();
        let b = CubeFn::<BigInt>::delta(dim(3)).unwrap();
        assert_eq!(
            convolve(&a, &b),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn rw_power_examples() {
        let d = dim(5);
        assert_eq!(rw_power(d, 1).unwrap(), step_distribution(d).unwrap());
        assert_eq!(*rw_power(d, 2).unwrap().get(Vertex(0)), rat(1, 5));
        assert_eq!(rw_power(d, 0).unwrap(), CubeFn::delta(d).unwrap());
    }

    #[test]
    fn rw_power_two_routes_agree_n4_i4() {
        let d = dim(4);
        let direct = rw_power(d, 4).unwrap();
        let spectral = rw_power_spectral(d, 4).unwrap();
        assert_eq!(direct, spectral);
        // 4-step returns on Q^4: N + 3N(N-1) = 40 of the N^4 = 256 walks.
        assert_eq!(*direct.get(Vertex(0)), rat(40, 256));
    }

    #[test]
    fn rw_power_parity_and_mass() {
        for n in 1..=6 {
            let d = dim(n);
            for i in 0..=6 {
                let p = rw_power(d, i).unwrap();
                assert_eq!(p.sum(), BigRational::one());
                for x in d.vertices() {
                    let v = p.get(x);
                    assert!(!v.is_negative());
                    if (x.weight() + i) % 2 == 1 {
                        assert!(v.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn rw_green_examples() {
        let d = dim(3);
        let c0 = rw_green(d, &BigRational::zero()).unwrap();
        assert_eq!(c0, CubeFn::delta(d).unwrap());
        assert_eq!(rw_green_hat(dim(2), &rat(1, 4), 0), rat(2, 1));
        assert!(rw_green(d, &rat(1, 3)).is_err());
        assert!(rw_green(d, &rat(1, 2)).is_err());
        assert!(rw_green(d, &rat(-1, 8)).is_err());
    }

    #[test]
    fn rw_green_monotone_in_p() {
        let d = dim(3);
        let hi = rw_green(d, &rat(1, 6)).unwrap();
        for lo_p in [rat(0, 1), rat(1, 20), rat(1, 8), rat(1, 7)] {
            let lo = rw_green(d, &lo_p).unwrap();
            for x in d.vertices() {
                assert!(hi.get(x) >= lo.get(x));
                assert!(!lo.get(x).is_negative());
            }
        }
        // zero mode
        assert_eq!(walsh_transform(&hi).get(Vertex(0)).clone(), rat(2, 1));
    }

    #[test]
    fn twist_examples() {
        let d = dim(4);
        let f = CubeFn::from_fn(d, |v| BigInt::from(v.0 as i64 * v.0 as i64 - 5)).unwrap();
        assert!(twist(&f, Vertex(0)).values().iter().all(Zero::is_zero));
        let delta = CubeFn::<BigInt>::delta(d).unwrap();
        for k in d.vertices() {
            assert!(twist(&delta, k).values().iter().all(Zero::is_zero));
        }
        let fhat = walsh_transform(&f);
        for k in d.vertices() {
            let fk_hat = walsh_transform(&twist(&f, k));
            for l in d.vertices() {
                assert_eq!(*fk_hat.get(l), fhat.get(l).clone() - fhat.get(k + l).clone());
            }
        }
    }

    #[test]
    fn transition_bound_holds() {
        for i in 1..=6 {
            let bound = BigRational::from_integer(transition_bound_constant(i));
            for n in 2..=9 {
                assert!(scaled_max_transition(dim(n), i).unwrap() <= bound);
            }
        }
    }

    #[test]
    fn float_mode_round_trip() {
        let d = dim(5);
        let f = CubeFn::from_fn(d, |v| (v.0 as f64).sin()).unwrap();
        let back = inverse_walsh(&walsh_transform(&f)).unwrap();
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
