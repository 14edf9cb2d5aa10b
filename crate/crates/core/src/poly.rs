//! Exact polynomial arithmetic over the rationals.
//!
//! [`QPoly`] is a univariate polynomial in the monomial basis; [`MultiPoly`]
//! is a sparse multivariate polynomial used to store the coordinate maps of a
//! group model. [`CompiledPoly`] is an integer-coefficient form of a
//! [`MultiPoly`] over a common denominator, used for fast evaluation on
//! integer points.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Univariate polynomial with rational coefficients, lowest degree first.
///
/// The coefficient vector never has a trailing zero, so the zero polynomial
/// is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `n`.
    pub fn identity() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let mut c = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
                if let Some(d) = other.coeffs.get(i) {
                    c += d;
                }
                c
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                _ => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "n")?,
                _ => write!(f, "n^{k}")?,
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(exps, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn insert_term(&mut self, exps: Vec<u32>, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.insert_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.nvars, BigRational::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Replaces variable `index` by the constant `value`.
    pub fn substitute_constant(&self, index: usize, value: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            let k = std::mem::replace(&mut e[index], 0);
            let factor = num_traits::pow::pow(value.clone(), k as usize);
            out.insert_term(e, c * factor);
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term *= num_traits::pow::pow(x.clone(), k as usize);
                }
            }
            acc += term;
        }
        acc
    }

    /// Degree of the univariate polynomial obtained by substituting
    /// polynomials of the given degrees (`None` = zero polynomial).
    pub fn composed_degree_bound(&self, degrees: &[Option<usize>]) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|e| {
                let mut total = 0usize;
                for (&k, d) in e.iter().zip(degrees) {
                    if k == 0 {
                        continue;
                    }
                    total += k as usize * (*d)?;
                }
                Some(total)
            })
            .max()
    }

    /// Substitutes a univariate polynomial for every variable.
    ///
    /// Fails with [`Error::DegreeGuardExceeded`] before expanding anything if
    /// the result could exceed `max_degree`.
    pub fn compose(&self, subs: &[QPoly], max_degree: usize) -> Result<QPoly> {
        assert_eq!(subs.len(), self.nvars, "one substitution per variable");
        let degrees: Vec<Option<usize>> = subs.iter().map(QPoly::degree).collect();
        if let Some(bound) = self.composed_degree_bound(&degrees) {
            if bound > max_degree {
                return Err(Error::DegreeGuardExceeded { degree: bound, cap: max_degree });
            }
        }
        let mut powers: HashMap<(usize, u32), QPoly> = HashMap::new();
        let mut acc = QPoly::zero();
        for (e, c) in &self.terms {
            let mut term = QPoly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, k))
                    .or_insert_with(|| {
                        let mut p = QPoly::constant(BigRational::one());
                        for _ in 0..k {
                            p = p.mul(&subs[i]);
                        }
                        p
                    })
                    .clone();
                term = term.mul(&p);
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Exact test of integer-valuedness on all of `Z^nvars`.
    ///
    /// Rewrites every monomial in the product basis `C(x_1,j_1)...C(x_m,j_m)`,
    /// which is a Z-basis of the integer-valued polynomials; the polynomial is
    /// integer-valued iff every coordinate in that basis is an integer.
    pub fn is_integer_valued(&self) -> bool {
        let max_exp = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0) as usize;
        // stirling[k][j] * j! expands x^k = sum_j S(k,j) j! C(x,j).
        let table = surjection_table(max_exp);
        let mut binom: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut partial: Vec<(Vec<u32>, BigInt)> = vec![(Vec::new(), BigInt::one())];
            for &k in e {
                let mut next = Vec::new();
                for (prefix, w) in &partial {
                    for (j, s) in table[k as usize].iter().enumerate() {
                        if s.is_zero() {
                            continue;
                        }
                        let mut idx = prefix.clone();
                        idx.push(j as u32);
                        next.push((idx, w * s));
                    }
                }
                partial = next;
            }
            for (idx, w) in partial {
                *binom.entry(idx).or_insert_with(BigRational::zero) += c * BigRational::from_integer(w);
            }
        }
        binom.values().all(BigRational::is_integer)
    }

    pub fn compile(&self) -> CompiledPoly {
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let num = c.numer() * (&den / c.denom());
                (e.clone(), num)
            })
            .collect();
        CompiledPoly { den, terms }
    }
}

/// `table[k][j] = S(k,j) * j!`, the number of surjections from a k-set onto a j-set.
fn surjection_table(max: usize) -> Vec<Vec<BigInt>> {
    let mut stirling = vec![vec![BigInt::zero(); max + 1]; max + 1];
    stirling[0][0] = BigInt::one();
    for k in 1..=max {
        for j in 1..=k {
            stirling[k][j] = &stirling[k - 1][j - 1] + BigInt::from(j) * &stirling[k - 1][j];
        }
    }
    let mut fact = BigInt::one();
    for j in 0..=max {
        if j > 0 {
            fact *= j;
        }
        for row in stirling.iter_mut() {
            row[j] *= &fact;
        }
    }
    stirling
}

/// Integer form `sum(c_e * x^e) / den` of a rational multivariate polynomial.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    den: BigInt,
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl CompiledPoly {
    /// Evaluates at an integer point; `None` if the value is not an integer.
    pub fn eval(&self, point: &[BigInt]) -> Option<BigInt> {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                match k {
                    0 => {}
                    1 => term *= x,
                    _ => term *= num_traits::pow::pow(x.clone(), k as usize),
                }
            }
            acc += term;
        }
        let (q, r) = acc.div_rem(&self.den);
        r.is_zero().then_some(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn qpoly_arithmetic() {
        let p = QPoly::from_i64s(&[1, 1]); // 1 + n
        let sq = p.mul(&p);
        assert_eq!(sq, QPoly::from_i64s(&[1, 2, 1]));
        assert!(sq.sub(&sq).is_zero());
        assert_eq!(sq.eval(&rat(3, 1)), rat(16, 1));
        assert_eq!(sq.to_string(), "n^2 + 2*n + 1");
    }

    #[test]
    fn integer_valued_detection() {
        // n(n-1)/2 is integer valued, n/2 is not.
        let n = MultiPoly::var(1, 0);
        let half = rat(1, 2);
        let tri = n.mul(&n).sub(&n).scale(&half);
        assert!(tri.is_integer_valued());
        assert!(!n.scale(&half).is_integer_valued());
        // x*y*(x-1)/2 is integer valued in two variables; x*y/2 is not.
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let ok = x.mul(&y).mul(&x.sub(&MultiPoly::constant(2, rat(1, 1)))).scale(&half);
        assert!(ok.is_integer_valued());
        assert!(!x.mul(&y).scale(&half).is_integer_valued());
    }

    #[test]
    fn compose_and_guard() {
        // (x + y)^2 with x = n, y = n^2
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = x.add(&y).pow(2);
        let subs = [QPoly::identity(), QPoly::from_i64s(&[0, 0, 1])];
        let r = p.compose(&subs, 64).unwrap();
        assert_eq!(r, QPoly::from_i64s(&[0, 0, 1, 2, 1]));
        assert!(matches!(p.compose(&subs, 3), Err(Error::DegreeGuardExceeded { degree: 4, cap: 3 })));
    }

    #[test]
    fn compiled_eval_matches_rational_eval() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = x.mul(&x).sub(&x).scale(&rat(1, 2)).add(&y.scale(&rat(3, 1)));
        let c = p.compile();
        for a in -4..5i64 {
            for b in -4..5i64 {
                let v = p.eval(&[rat(a, 1), rat(b, 1)]);
                assert_eq!(c.eval(&[a.into(), b.into()]), Some(v.to_integer()));
            }
        }
        let bad = x.scale(&rat(1, 2)).compile();
        assert_eq!(bad.eval(&[BigInt::from(1)]), None);
    }
}
