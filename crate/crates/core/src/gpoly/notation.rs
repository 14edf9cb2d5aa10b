//! Text notation for Γ-polynomials.
//!
//! ```text
//! gpoly  := "e" | factor { ["*"] factor }
//! factor := ("S" index | "T") "^" "{" poly "}"
//! poly   := ["+" | "-"] term { ("+" | "-") term }
//! term   := int ["*"] atom | atom | int
//! atom   := "n" ["^" int] | "C(n," int ")"
//! ```
//!
//! Factors appear in strictly increasing index order. `T` stands for `S1`
//! in one-dimensional models. Whitespace is ignored between tokens.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{GammaPolynomial, IntegralPolynomial};
use crate::error::{Error, Result};
use crate::nilgroup::GroupModel;

pub fn parse_gpoly(model: &Arc<GroupModel>, input: &str) -> Result<GammaPolynomial> {
    let mut p = Cursor { src: input.as_bytes(), pos: 0 };
    let s = model.dim();
    let mut components = vec![IntegralPolynomial::zero(); s];
    if p.peek() == Some(b'e') {
        p.pos += 1;
        p.expect_end()?;
        return GammaPolynomial::new(model.clone(), components);
    }
    let mut previous = 0usize;
    loop {
        let start = p.pos_after_ws() + 1;
        let index = match p.peek() {
            Some(b'S') => {
                p.pos += 1;
                let at = p.pos;
                let j = p.integer()?;
                j.to_usize().filter(|j| (1..=s).contains(j)).ok_or_else(|| Error::Parse {
                    column: at + 1,
                    message: format!("basis index {j} outside 1..={s}"),
                })?
            }
            Some(b'T') if s == 1 => {
                p.pos += 1;
                1
            }
            Some(b'T') => return Err(p.error("`T` is only accepted in one-dimensional models")),
            _ => return Err(p.error("expected a factor `S<j>^{...}`")),
        };
        if index <= previous {
            return Err(Error::CanonicalOrder { column: start, previous, found: index });
        }
        previous = index;
        p.expect(b'^')?;
        p.expect(b'{')?;
        components[index - 1] = p.poly()?;
        p.expect(b'}')?;
        match p.peek() {
            None => break,
            Some(b'*') => p.pos += 1,
            Some(_) => {}
        }
    }
    GammaPolynomial::new(model.clone(), components)
}

/// A bare polynomial in `n`, using the `poly` rule above.
pub fn parse_integral_polynomial(input: &str) -> Result<IntegralPolynomial> {
    let mut p = Cursor { src: input.as_bytes(), pos: 0 };
    let out = p.poly()?;
    p.expect_end()?;
    Ok(out)
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { column: self.pos + 1, message: message.to_string() }
    }

    fn pos_after_ws(&mut self) -> usize {
        self.peek();
        self.pos
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("unexpected trailing input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.peek();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn small_integer(&mut self) -> Result<usize> {
        let at = self.pos_after_ws();
        let v = self.integer()?;
        v.to_usize()
            .filter(|&k| k <= 4096)
            .ok_or(Error::Parse { column: at + 1, message: format!("exponent {v} is too large") })
    }

    fn poly(&mut self) -> Result<IntegralPolynomial> {
        // Accumulate integer monomial and binomial coefficients separately.
        let mut monomial: Vec<BigRational> = Vec::new();
        let mut binom: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    BigInt::one()
                }
                Some(b'-') => {
                    self.pos += 1;
                    -BigInt::one()
                }
                _ if first => BigInt::one(),
                _ => break,
            };
            first = false;
            let coeff = match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let c = self.integer()?;
                    if self.peek() == Some(b'*') {
                        self.pos += 1;
                        if !matches!(self.peek(), Some(b'n' | b'C')) {
                            return Err(self.error("expected `n` or `C(n,k)` after `*`"));
                        }
                    }
                    Some(c)
                }
                _ => None,
            };
            let scale = sign * coeff.clone().unwrap_or_else(BigInt::one);
            match self.peek() {
                Some(b'n') => {
                    self.pos += 1;
                    let k = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.small_integer()?
                    } else {
                        1
                    };
                    add_at(&mut monomial, k, BigRational::from_integer(scale));
                }
                Some(b'C') => {
                    self.pos += 1;
                    self.expect(b'(')?;
                    self.expect(b'n')?;
                    self.expect(b',')?;
                    let k = self.small_integer()?;
                    self.expect(b')')?;
                    add_at(&mut binom, k, scale);
                }
                _ if coeff.is_some() => add_at(&mut monomial, 0, BigRational::from_integer(scale)),
                _ => return Err(self.error("expected a term")),
            }
        }
        let from_monomials =
            IntegralPolynomial::from_monomials(&monomial).expect("integer monomial coefficients are integral");
        Ok(from_monomials.add(&IntegralPolynomial::from_binomial_coeffs(binom)))
    }
}

fn add_at<T: Zero + Clone + std::ops::AddAssign>(v: &mut Vec<T>, k: usize, c: T) {
    if v.len() <= k {
        v.resize(k + 1, T::zero());
    }
    v[k] += c;
}
