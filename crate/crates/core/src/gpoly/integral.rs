//! Integer-valued polynomials in the binomial basis.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::QPoly;

/// `p(n) = sum_k c_k * C(n, k)`, stored as `(c_0, ..., c_D)` with `c_D != 0`.
///
/// Every such polynomial is integer-valued on all of `Z`, and every
/// integer-valued polynomial has exactly one such representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntegralPolynomial {
    coeffs: Vec<BigInt>,
}

/// `C(n, k)` for any integer `n`, using `n(n-1)...(n-k+1) / k!`.
pub fn binomial(n: &BigInt, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

impl IntegralPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_binomial_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_binomial_i64s(coeffs: &[i64]) -> Self {
        Self::from_binomial_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_binomial_coeffs(vec![c])
    }

    /// The polynomial `n`.
    pub fn identity() -> Self {
        Self::from_binomial_i64s(&[0, 1])
    }

    /// `c * n^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::from_integer(c.into());
        Self::from_qpoly(&QPoly::from_coeffs(coeffs)).expect("integer monomials are integral")
    }

    /// Builds the binomial-basis form of a polynomial given by rational
    /// monomial coefficients `a_0 + a_1 n + ... + a_D n^D`.
    ///
    /// Fails with [`Error::NotIntegral`] unless the polynomial is
    /// integer-valued on `Z`.
    pub fn from_monomials(coeffs: &[BigRational]) -> Result<Self> {
        Self::from_qpoly(&QPoly::from_coeffs(coeffs.to_vec()))
    }

    /// Binomial coefficients are the forward differences at 0:
    /// `c_k = (Delta^k p)(0)`.
    pub fn from_qpoly(p: &QPoly) -> Result<Self> {
        let Some(deg) = p.degree() else {
            return Ok(Self::zero());
        };
        let mut values: Vec<BigRational> =
            (0..=deg).map(|i| p.eval(&BigRational::from_integer(BigInt::from(i)))).collect();
        let mut coeffs = Vec::with_capacity(deg + 1);
        for k in 0..=deg {
            let c = &values[0];
            if !c.is_integer() {
                return Err(Error::NotIntegral(format!("{p} has non-integer binomial coefficient {c} at C(n,{k})")));
            }
            coeffs.push(c.to_integer());
            for i in 0..values.len() - 1 {
                values[i] = &values[i + 1] - &values[i];
            }
            values.pop();
        }
        Ok(Self::from_binomial_coeffs(coeffs))
    }

    pub fn to_qpoly(&self) -> QPoly {
        let mut acc = QPoly::zero();
        let mut falling = QPoly::constant(BigRational::one());
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                let root = BigRational::from_integer(BigInt::from(k - 1));
                falling = falling.mul(&QPoly::from_coeffs(vec![-root, BigRational::one()]));
            }
            if !c.is_zero() {
                let scale = BigRational::new(c.clone(), factorial(k));
                acc = acc.add(&falling.scale(&scale));
            }
        }
        acc
    }

    pub fn binomial_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree (`None` for the zero polynomial). Binomial and monomial
    /// degrees agree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient in the monomial basis, `c_D / D!`.
    pub fn leading_coefficient(&self) -> Option<BigRational> {
        let d = self.degree()?;
        Some(BigRational::new(self.coeffs[d].clone(), factorial(d)))
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut binom = BigInt::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                binom = binom * (n - BigInt::from(k - 1)) / BigInt::from(k);
            }
            acc += c * &binom;
        }
        acc
    }

    pub fn eval_i64(&self, n: i64) -> BigInt {
        self.eval(&BigInt::from(n))
    }

    /// Value at 0, i.e. `c_0`.
    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// `n -> p(n + m)`, by Vandermonde's identity
    /// `C(n + m, k) = sum_j C(m, k - j) C(n, j)`.
    pub fn shift(&self, m: &BigInt) -> Self {
        let d = self.coeffs.len();
        let binoms: Vec<BigInt> = (0..d).map(|i| binomial(m, i)).collect();
        let coeffs = (0..d).map(|j| (j..d).map(|k| &self.coeffs[k] * &binoms[k - j]).sum()).collect();
        Self::from_binomial_coeffs(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::from_binomial_coeffs(
            (0..len).map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_binomial_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_qpoly(&self.to_qpoly().mul(&other.to_qpoly()))
            .expect("products of integer-valued polynomials are integer-valued")
    }

    /// Monomial coefficients, when they are all integers.
    pub fn integer_monomials(&self) -> Option<Vec<BigInt>> {
        self.to_qpoly().coeffs().iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }
}

impl fmt::Display for IntegralPolynomial {
    /// Integer monomial form when possible (`n^2+3n`), otherwise the
    /// binomial form (`C(n,2)+n`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (coeffs, binomial_form) = match self.integer_monomials() {
            Some(m) => (m, false),
            None => (self.coeffs.clone(), true),
        };
        let mut first = true;
        for (k, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let a = c.abs();
            let unit = a.is_one();
            match (k, binomial_form) {
                (0, _) => write!(f, "{a}")?,
                (1, _) if unit => write!(f, "n")?,
                (1, _) => write!(f, "{a}n")?,
                (_, false) if unit => write!(f, "n^{k}")?,
                (_, false) => write!(f, "{a}n^{k}")?,
                (_, true) if unit => write!(f, "C(n,{k})")?,
                (_, true) => write!(f, "{a}*C(n,{k})")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rats(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect()
    }

    #[test]
    fn monomial_conversion_examples() {
        let sq = IntegralPolynomial::from_monomials(&rats(&[(0, 1), (0, 1), (1, 1)])).unwrap();
        assert_eq!(sq, IntegralPolynomial::from_binomial_i64s(&[0, 1, 2]));
        let tri = IntegralPolynomial::from_monomials(&rats(&[(0, 1), (1, 2), (1, 2)])).unwrap();
        assert_eq!(tri, IntegralPolynomial::from_binomial_i64s(&[0, 1, 1]));
        let half = IntegralPolynomial::from_monomials(&rats(&[(0, 1), (1, 2)]));
        assert!(matches!(half, Err(Error::NotIntegral(_))));
    }

    #[test]
    fn evaluation_examples() {
        assert!(IntegralPolynomial::zero().eval_i64(17).is_zero());
        let sq = IntegralPolynomial::from_binomial_i64s(&[0, 1, 2]);
        assert_eq!(sq.eval_i64(3), BigInt::from(9));
        assert_eq!(sq.eval_i64(-2), BigInt::from(4));
        assert_eq!(binomial(&BigInt::from(-3), 2), BigInt::from(6));
    }

    #[test]
    fn binomial_and_monomial_forms_agree_on_values() {
        let tri = IntegralPolynomial::from_binomial_i64s(&[0, 1, 1]);
        for n in -6..=6i64 {
            assert_eq!(tri.eval_i64(n), BigInt::from(n * (n + 1) / 2));
        }
        assert_eq!(tri.to_string(), "C(n,2)+n");
        assert_eq!(IntegralPolynomial::from_binomial_i64s(&[0, 1, 2]).to_string(), "n^2");
        assert_eq!(IntegralPolynomial::monomial(-3, 1).to_string(), "-3n");
    }

    #[test]
    fn shift_matches_values() {
        let p = IntegralPolynomial::monomial(1, 3).add(&IntegralPolynomial::monomial(-2, 1));
        for m in -4..=4i64 {
            let q = p.shift(&BigInt::from(m));
            for n in -5..=5i64 {
                assert_eq!(q.eval_i64(n), p.eval_i64(n + m));
            }
        }
    }

    #[test]
    fn leading_coefficient_is_monomial() {
        let p = IntegralPolynomial::from_binomial_i64s(&[0, 1, 1]);
        assert_eq!(p.leading_coefficient(), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(IntegralPolynomial::zero().leading_coefficient(), None);
    }
}
