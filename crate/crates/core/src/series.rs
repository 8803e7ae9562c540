//! Truncated Laurent series in `s = 1/N` and integer polynomials in `N`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly;

/// Order used for series that are exact (finite Laurent polynomials).
pub const EXACT: i32 = i32::MAX / 4;

/// `Σ_{j=val}^{order} c_j s^j + O(s^{order+1})`.
///
/// Coefficients beyond `order` are never stored. Products track the order
/// honestly: the product of `f` and `g` is known through
/// `min(order_f + val_g, order_g + val_f)`, where `val` is the exponent of the
/// lowest nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesS {
    start: i32,
    coeffs: Vec<BigRational>,
    order: i32,
}

impl SeriesS {
    /// The zero series known through `s^order`.
    pub fn zero(order: i32) -> Self {
        SeriesS {
            start: 0,
            coeffs: Vec::new(),
            order,
        }
        .normalized()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0, EXACT)
    }

    /// `c s^power + O(s^{order+1})`.
    pub fn monomial(c: BigRational, power: i32, order: i32) -> Self {
        if power > order {
            return Self::zero(order);
        }
        SeriesS {
            start: power,
            coeffs: vec![c],
            order,
        }
        .normalized()
    }

    /// `Σ coeffs[j] s^{start + j}`, known through `order`.
    pub fn from_coeffs(start: i32, coeffs: Vec<BigRational>, order: i32) -> Self {
        SeriesS { start, coeffs, order }.normalized()
    }

    pub fn from_integers(start: i32, coeffs: &[i64], order: i32) -> Self {
        let c = coeffs.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        Self::from_coeffs(start, c, order)
    }

    /// `p(N) = p(1/s)` as an exact Laurent polynomial.
    pub fn from_npoly(p: &NPoly) -> Self {
        let degree = p.coeffs.len() as i32 - 1;
        if degree < 0 {
            return Self::zero(EXACT);
        }
        let coeffs = p
            .coeffs
            .iter()
            .rev()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        Self::from_coeffs(-degree, coeffs, EXACT)
    }

    fn normalized(mut self) -> Self {
        let keep = (self.order as i64 - self.start as i64 + 1).clamp(0, i64::MAX) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..lead);
        self.start += lead as i32;
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.start = self.order.saturating_add(1);
        }
        self
    }

    /// Exponent of the lowest nonzero coefficient, or `order + 1` if none is known.
    pub fn valuation(&self) -> i32 {
        self.start
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT
    }

    /// Coefficient of `s^j`; `None` beyond the known order.
    pub fn coeff(&self, j: i32) -> Option<BigRational> {
        if j > self.order {
            return None;
        }
        if j < self.start {
            return Some(BigRational::zero());
        }
        Some(
            self.coeffs
                .get((j - self.start) as usize)
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    /// Coefficients of `s^from ..= s^order`.
    pub fn window(&self, from: i32) -> Vec<BigRational> {
        (from..=self.order).map(|j| self.coeff(j).unwrap()).collect()
    }

    /// The same as `window`, requiring integers.
    pub fn integer_window(&self, from: i32) -> Result<Vec<BigInt>> {
        self.window(from)
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::Invariant(format!(
                        "coefficient of s^{} is {c}, not an integer",
                        from + i as i32
                    )))
                }
            })
            .collect()
    }

    pub fn truncate(&self, order: i32) -> Self {
        SeriesS {
            start: self.start,
            coeffs: self.coeffs.clone(),
            order: order.min(self.order),
        }
        .normalized()
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() {
            return other.truncate(order);
        }
        if other.coeffs.is_empty() {
            return self.truncate(order);
        }
        let start = self.start.min(other.start);
        let end = self.last_exponent().max(other.last_exponent()).min(order);
        if end < start {
            return Self::zero(order);
        }
        let coeffs = (start..=end)
            .map(|j| self.coeff(j).unwrap() + other.coeff(j).unwrap())
            .collect();
        Self::from_coeffs(start, coeffs, order)
    }

    pub fn neg(&self) -> Self {
        SeriesS {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.start, self.coeffs.iter().map(|x| x * c).collect(), self.order)
    }

    /// Multiply by `s^q`.
    pub fn shift(&self, q: i32) -> Self {
        SeriesS {
            start: self.start + q,
            coeffs: self.coeffs.clone(),
            order: if self.is_exact() { EXACT } else { self.order + q },
        }
    }

    fn last_exponent(&self) -> i32 {
        self.start + self.coeffs.len() as i32 - 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = sat_add(self.order, other.start).min(sat_add(other.order, self.start));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(order);
        }
        let start = self.start + other.start;
        let end = (self.last_exponent() + other.last_exponent()).min(order);
        if end < start {
            return Self::zero(order);
        }
        let mut coeffs = vec![BigRational::zero(); (end - start + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let idx = i + j;
                if idx >= coeffs.len() {
                    break;
                }
                coeffs[idx] += a * b;
            }
        }
        Self::from_coeffs(start, coeffs, order)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `1/f`; requires a known nonzero leading coefficient.
    ///
    /// If `f = c s^v (1 + u)` is known through `s^o`, the reciprocal is known
    /// through `s^{o - 2v}`.
    pub fn reciprocal(&self) -> Result<Self> {
        let Some(lead) = self.coeffs.first().cloned() else {
            return Err(Error::domain("reciprocal of a series with no known nonzero term"));
        };
        let v = self.start;
        if self.is_exact() && self.coeffs.len() > 1 {
            return Err(Error::domain("reciprocal of an exact non-monomial needs a truncation order"));
        }
        let order = if self.is_exact() { EXACT } else { self.order - 2 * v };
        let rel = if self.is_exact() { 0 } else { (self.order - v) as usize };
        // unit part 1 + u = f / (c s^v), coefficients u_1..u_rel
        let inv_lead = lead.recip();
        let unit: Vec<BigRational> = (0..=rel)
            .map(|j| self.coeffs.get(j).map_or_else(BigRational::zero, |c| c * &inv_lead))
            .collect();
        let mut r = vec![BigRational::zero(); rel + 1];
        r[0] = BigRational::one();
        for n in 1..=rel {
            let mut acc = BigRational::zero();
            for j in 1..=n {
                acc -= &unit[j] * &r[n - j];
            }
            r[n] = acc;
        }
        let coeffs = r.into_iter().map(|c| c * &inv_lead).collect();
        Ok(Self::from_coeffs(-v, coeffs, order))
    }
}

fn sat_add(a: i32, b: i32) -> i32 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        a + b
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, first: bool, c: &BigRational, var: &str) -> fmt::Result {
    let sign = if c.is_negative() { "-" } else { "+" };
    let mag = c.abs();
    if first {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {sign} ")?;
    }
    if var.is_empty() {
        write!(f, "{mag}")
    } else if mag.is_one() {
        write!(f, "{var}")
    } else {
        write!(f, "{mag} {var}")
    }
}

impl fmt::Display for SeriesS {
    /// Written in powers of `N` (so `s^j` prints as `1/N^j`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = self.start + i as i32;
            let var = match j {
                0 => String::new(),
                -1 => "N".to_string(),
                1 => "1/N".to_string(),
                j if j < 0 => format!("N^{}", -j),
                j => format!("1/N^{j}"),
            };
            if j > 0 {
                // c / N^j reads better than c 1/N^j
                let sign_first = first && c.is_negative();
                if !first {
                    write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
                } else if sign_first {
                    write!(f, "-")?;
                }
                let den = if j == 1 { "N".to_string() } else { format!("N^{j}") };
                write!(f, "{}/{den}", c.abs())?;
            } else {
                fmt_term(f, first, c, &var)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        if !self.is_exact() {
            let o = self.order + 1;
            if o < -1 {
                write!(f, " + O(N^{})", -o)?;
            } else if o == -1 {
                write!(f, " + O(N)")?;
            } else if o == 0 {
                write!(f, " + O(1)")?;
            } else if o == 1 {
                write!(f, " + O(1/N)")?;
            } else {
                write!(f, " + O(1/N^{o})")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in `N` with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NPoly {
    coeffs: Vec<BigInt>,
}

impl NPoly {
    pub fn zero() -> Self {
        NPoly::default()
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        NPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `N (N-1) ... (N-δ+1)`.
    pub fn falling_factorial(delta: u32) -> Self {
        let mut p = NPoly::from_i64(&[1]);
        for j in 0..delta {
            p = p.mul(&NPoly::from_i64(&[-(j as i64), 1]));
        }
        p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::from_coeffs(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return NPoly::zero();
        }
        let degree = self.coeffs.len() + other.coeffs.len() - 2;
        Self::from_coeffs(poly::mul_truncated(&self.coeffs, &other.coeffs, degree))
    }

    pub fn eval(&self, n: i64) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * BigInt::from(n) + c)
    }
}

impl fmt::Display for NPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (q, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let var = match q {
                0 => String::new(),
                1 => "N".to_string(),
                q => format!("N^{q}"),
            };
            fmt_term(f, first, &BigRational::from_integer(c.clone()), &var)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn geometric_reciprocal() {
        let f = SeriesS::from_integers(0, &[1, 1], 3);
        let r = f.reciprocal().unwrap();
        assert_eq!(r.window(0), ints(&[1, -1, 1, -1]));
        assert_eq!(r.reciprocal().unwrap(), f);
        let prod = f.mul(&r);
        assert_eq!(prod.window(0), ints(&[1, 0, 0, 0]));
    }

    #[test]
    fn reciprocal_of_shifted_series_loses_order() {
        // z = s + s^2 + O(s^3) gives 1/z = N - 1 + O(s)
        let z = SeriesS::from_integers(1, &[1, 1], 2);
        let mu = z.reciprocal().unwrap();
        assert_eq!(mu.valuation(), -1);
        assert_eq!(mu.order(), 0);
        assert_eq!(mu.window(-1), ints(&[1, -1]));
        assert_eq!(mu.to_string(), "N - 1 + O(1/N)");
        assert!(SeriesS::zero(3).reciprocal().is_err());
    }

    #[test]
    fn product_order_tracking() {
        let a = SeriesS::from_integers(1, &[1, 1], 2);
        let b = SeriesS::from_integers(-1, &[3], EXACT);
        let p = a.mul(&b);
        assert_eq!(p.order(), 1);
        assert_eq!(p.window(0), ints(&[3, 3]));
        assert_eq!(a.pow(2).order(), 3);
        assert_eq!(a.pow(2).window(2), ints(&[1, 2]));
        assert_eq!(a.shift(-1).order(), 1);
    }

    #[test]
    fn npoly_basics() {
        let p = NPoly::falling_factorial(3);
        assert_eq!(p, NPoly::from_i64(&[0, 2, -3, 1]));
        assert_eq!(p.eval(5), BigInt::from(60));
        assert_eq!(p.to_string(), "N^3 - 3 N^2 + 2 N");
        assert_eq!(NPoly::from_i64(&[0, -1, 1]).to_string(), "N^2 - N");
        let s = SeriesS::from_npoly(&NPoly::from_i64(&[0, -1, 1]));
        assert_eq!(s.valuation(), -2);
        assert_eq!(s.coeff(-1), Some(BigRational::from_integer((-1).into())));
        assert_eq!(NPoly::zero().to_string(), "0");
    }

    #[test]
    fn display_in_powers_of_n() {
        let s = SeriesS::from_integers(-1, &[1, -1, -1, -4, -26], 3);
        assert_eq!(s.to_string(), "N - 1 - 1/N - 4/N^2 - 26/N^3 + O(1/N^4)");
    }
}
