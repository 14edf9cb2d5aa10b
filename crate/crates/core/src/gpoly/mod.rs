//! Γ-polynomials in canonical form.
//!
//! A Γ-polynomial `g: Z -> Γ` is stored as `g(n) = S_1^{p_1(n)} ... S_s^{p_s(n)}`
//! with integral polynomials `p_j`. By uniqueness of Malcev coordinates this
//! form is canonical, so equality, identity and distinctness tests compare
//! coefficients and never sample.

mod integral;
mod lemmas;
mod notation;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nilgroup::{GroupModel, MalcevExponents};
use crate::poly::QPoly;

pub use integral::{binomial, IntegralPolynomial};
pub use lemmas::{
    derived_distinct_shifts, derived_distinct_shifts_bounded, derived_form, shift_gap_sequence,
    shift_gap_sequence_bounded, DEFAULT_SEARCH_BOUND,
};
pub use notation::{parse_gpoly, parse_integral_polynomial};

/// The pair `(l, k)`: `l` is the largest index with `p_l != 0` and `k` its
/// degree. Ordered lexicographically, `l` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub l: usize,
    pub k: usize,
}

impl Weight {
    pub const IDENTITY: Weight = Weight { l: 0, k: 0 };

    pub fn new(l: usize, k: usize) -> Self {
        Self { l, k }
    }

    /// Weight of a constant Γ-polynomial other than the identity.
    pub fn is_constant_nonidentity(&self) -> bool {
        self.l > 0 && self.k == 0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.l, self.k)
    }
}

#[derive(Clone, Debug)]
pub struct GammaPolynomial {
    model: Arc<GroupModel>,
    components: Vec<IntegralPolynomial>,
}

fn same_model(a: &Arc<GroupModel>, b: &Arc<GroupModel>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for GammaPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components && same_model(&self.model, &other.model)
    }
}

impl Eq for GammaPolynomial {}

impl Hash for GammaPolynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.components.hash(state);
    }
}

impl GammaPolynomial {
    pub fn new(model: Arc<GroupModel>, components: Vec<IntegralPolynomial>) -> Result<Self> {
        if components.len() != model.dim() {
            return Err(Error::DimensionMismatch { expected: model.dim(), found: components.len() });
        }
        Ok(Self { model, components })
    }

    pub fn identity(model: Arc<GroupModel>) -> Self {
        let components = vec![IntegralPolynomial::zero(); model.dim()];
        Self { model, components }
    }

    /// The constant sequence `n -> a`.
    pub fn constant(model: Arc<GroupModel>, a: &MalcevExponents) -> Result<Self> {
        let components = a.coords().iter().cloned().map(IntegralPolynomial::constant).collect();
        Self::new(model, components)
    }

    /// `S_j^{p(n)}` (1-based `j`).
    pub fn basis_power(model: Arc<GroupModel>, j: usize, p: IntegralPolynomial) -> Self {
        let mut g = Self::identity(model);
        g.components[j - 1] = p;
        g
    }

    pub fn model(&self) -> &Arc<GroupModel> {
        &self.model
    }

    pub fn components(&self) -> &[IntegralPolynomial] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(IntegralPolynomial::is_zero)
    }

    /// `g(0) = e`.
    pub fn is_in_pg0(&self) -> bool {
        self.components.iter().all(|p| p.constant_term().is_zero())
    }

    /// Largest component degree (`None` for the identity).
    pub fn max_degree(&self) -> Option<usize> {
        self.components.iter().filter_map(IntegralPolynomial::degree).max()
    }

    pub fn evaluate(&self, n: &BigInt) -> MalcevExponents {
        MalcevExponents::new(self.components.iter().map(|p| p.eval(n)).collect())
    }

    pub fn evaluate_i64(&self, n: i64) -> MalcevExponents {
        self.evaluate(&BigInt::from(n))
    }

    fn check_model(&self, other: &Self) -> Result<()> {
        if same_model(&self.model, &other.model) {
            Ok(())
        } else {
            Err(Error::ModelMismatch(self.model.name().into(), other.model.name().into()))
        }
    }

    fn qpolys(&self) -> Vec<QPoly> {
        self.components.iter().map(IntegralPolynomial::to_qpoly).collect()
    }

    fn with_outputs(&self, outputs: Vec<QPoly>) -> Result<Self> {
        let components = outputs
            .iter()
            .map(|q| IntegralPolynomial::from_qpoly(q).map_err(|_| Error::InternalNotIntegral))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { model: self.model.clone(), components })
    }

    /// Canonical form of `n -> g(n) h(n)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_model(other)?;
        if other.is_identity() {
            return Ok(self.clone());
        }
        if self.is_identity() {
            return Ok(other.clone());
        }
        let mut subs = self.qpolys();
        subs.extend(other.qpolys());
        let cap = self.model.max_degree();
        let outputs = self.model.mul_map().iter().map(|m| m.compose(&subs, cap)).collect::<Result<Vec<_>>>()?;
        self.with_outputs(outputs)
    }

    /// Canonical form of `n -> g(n)^{p(n)}`.
    pub fn power(&self, p: &IntegralPolynomial) -> Result<Self> {
        if self.is_identity() || p.is_zero() {
            return Ok(Self::identity(self.model.clone()));
        }
        let mut subs = self.qpolys();
        subs.push(p.to_qpoly());
        let cap = self.model.max_degree();
        let outputs = self.model.pow_map().iter().map(|m| m.compose(&subs, cap)).collect::<Result<Vec<_>>>()?;
        self.with_outputs(outputs)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.power(&IntegralPolynomial::constant(BigInt::from(-1)))
    }

    /// `n -> g(n + m)`.
    pub fn shift(&self, m: &BigInt) -> Self {
        Self { model: self.model.clone(), components: self.components.iter().map(|p| p.shift(m)).collect() }
    }

    /// `n -> g(m)^-1 g(n + m)`.
    pub fn shift_derive(&self, m: &BigInt) -> Result<Self> {
        let gm_inv = self.model.inverse(&self.evaluate(m))?;
        Self::constant(self.model.clone(), &gm_inv)?.multiply(&self.shift(m))
    }

    /// `h^-1 g h`.
    pub fn conjugate(&self, h: &Self) -> Result<Self> {
        self.check_model(h)?;
        h.inverse()?.multiply(self)?.multiply(h)
    }

    pub fn weight(&self) -> Weight {
        match self.components.iter().rposition(|p| !p.is_zero()) {
            None => Weight::IDENTITY,
            Some(i) => Weight { l: i + 1, k: self.components[i].degree().unwrap_or(0) },
        }
    }

    /// Monomial leading coefficient of the top nonzero component.
    pub fn leading_coefficient(&self) -> Option<BigRational> {
        let w = self.weight();
        (w.l > 0).then(|| self.components[w.l - 1].leading_coefficient()).flatten()
    }

    /// Equal weights, and equal leading coefficients of the top component.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        self.check_model(other)?;
        Ok(self.class_key() == other.class_key())
    }

    /// Key identifying the equivalence class.
    pub fn class_key(&self) -> (Weight, Option<BigRational>) {
        (self.weight(), self.leading_coefficient())
    }

    /// `f(n) = f(1)^n` identically. Requires `f` in `PG_0`.
    pub fn is_character(&self) -> Result<bool> {
        if !self.is_in_pg0() {
            return Err(Error::NotInPG0);
        }
        let f1 = Self::constant(self.model.clone(), &self.evaluate_i64(1))?;
        Ok(f1.power(&IntegralPolynomial::identity())? == *self)
    }
}

impl fmt::Display for GammaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let mut first = true;
        for (j, p) in self.components.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "S{}^{{{p}}}", j + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Arc<GroupModel> {
        GroupModel::abelian(1).shared()
    }

    fn h3() -> Arc<GroupModel> {
        GroupModel::heisenberg().shared()
    }

    fn g(model: &Arc<GroupModel>, text: &str) -> GammaPolynomial {
        parse_gpoly(model, text).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let h = h3();
        assert!(GammaPolynomial::identity(h.clone()).evaluate_i64(7).is_identity());
        assert_eq!(g(&h, "S3^{n}").evaluate_i64(2), MalcevExponents::from_i64s(&[0, 0, 2]));
        assert!(g(&h, "S1^{n^2} S3^{3n}").evaluate_i64(0).is_identity());
    }

    #[test]
    fn multiply_examples() {
        let a = GroupModel::abelian(1).shared();
        assert_eq!(g(&a, "S1^{n}").multiply(&g(&a, "S1^{n^2}")).unwrap(), g(&a, "S1^{n^2+n}"));
        let h = h3();
        let prod = g(&h, "S3^{n}").multiply(&g(&h, "S2^{n}")).unwrap();
        assert_eq!(prod, g(&h, "S1^{n^2} S2^{n} S3^{n}"));
        for n in -5..=5i64 {
            let lhs = h.to_matrix(&prod.evaluate_i64(n)).unwrap();
            let x = h.to_matrix(&MalcevExponents::from_i64s(&[0, 0, n])).unwrap();
            let y = h.to_matrix(&MalcevExponents::from_i64s(&[0, n, 0])).unwrap();
            assert_eq!(lhs, x.mul(&y));
        }
        let x = g(&h, "S1^{n^2} S3^{n}");
        assert_eq!(x.multiply(&GammaPolynomial::identity(h.clone())).unwrap(), x);
    }

    #[test]
    fn inverse_examples() {
        let a = GroupModel::abelian(2).shared();
        assert_eq!(g(&a, "S1^{n^2} S2^{-3n}").inverse().unwrap(), g(&a, "S1^{-n^2} S2^{3n}"));
        let h = h3();
        let id = GammaPolynomial::identity(h.clone());
        assert_eq!(id.inverse().unwrap(), id);
        let x = g(&h, "S1^{n^2} S2^{n} S3^{n}");
        assert!(x.multiply(&x.inverse().unwrap()).unwrap().is_identity());
        assert!(x.inverse().unwrap().multiply(&x).unwrap().is_identity());
    }

    #[test]
    fn power_examples() {
        let t = z();
        let n = IntegralPolynomial::identity();
        let s1 = GammaPolynomial::constant(t.clone(), &MalcevExponents::from_i64s(&[1])).unwrap();
        assert_eq!(s1.power(&n).unwrap(), g(&t, "S1^{n}"));
        assert_eq!(g(&t, "S1^{n}").power(&n).unwrap(), g(&t, "S1^{n^2}"));
        let h = h3();
        let yx = GammaPolynomial::constant(h.clone(), &MalcevExponents::from_i64s(&[0, 1, 1])).unwrap();
        let p = yx.power(&n).unwrap();
        assert_eq!(p.evaluate_i64(2), MalcevExponents::from_i64s(&[1, 2, 2]));
        assert_eq!(p.evaluate_i64(2), h.power(&MalcevExponents::from_i64s(&[0, 1, 1]), &2.into()).unwrap());
    }

    #[test]
    fn shift_derive_examples() {
        let t = z();
        let sq = g(&t, "S1^{n^2}");
        assert_eq!(sq.shift_derive(&BigInt::zero()).unwrap(), sq);
        for k in -3..=6i64 {
            let d = sq.shift_derive(&BigInt::from(k)).unwrap();
            for n in 0..=5i64 {
                assert_eq!(d.evaluate_i64(n).coords()[0], BigInt::from((n + k) * (n + k) - k * k));
            }
            assert!(d.equivalent(&sq).unwrap());
        }
        let h = h3();
        let c = GammaPolynomial::constant(h.clone(), &MalcevExponents::from_i64s(&[4, -1, 2])).unwrap();
        assert!(c.shift_derive(&BigInt::from(3)).unwrap().is_identity());
    }

    #[test]
    fn conjugate_examples() {
        let a = GroupModel::abelian(2).shared();
        let x = g(&a, "S1^{n^3} S2^{2n}");
        assert_eq!(x.conjugate(&g(&a, "S2^{n^2}")).unwrap(), x);
        let h = h3();
        let y = g(&h, "S2^{n}");
        assert_eq!(y.conjugate(&GammaPolynomial::identity(h.clone())).unwrap(), y);
        let s3 = GammaPolynomial::constant(h.clone(), &h.basis_element(3)).unwrap();
        let c = y.conjugate(&s3).unwrap();
        assert_eq!(c.weight(), Weight::new(2, 1));
        assert!(c.equivalent(&y).unwrap());
        // x^-1 y^n x = y^n [y^n, x] = y^n z^-n.
        assert_eq!(c, g(&h, "S1^{-n} S2^{n}"));
    }

    #[test]
    fn weights_and_equivalence() {
        let a2 = GroupModel::abelian(2).shared();
        assert_eq!(g(&a2, "S1^{n}").weight(), Weight::new(1, 1));
        assert_eq!(g(&a2, "S1^{n^2} S2^{n^3}").weight(), Weight::new(2, 3));
        assert_eq!(g(&a2, "S1^{n^6} S2^{n^6}").weight(), Weight::new(2, 6));
        assert!(!g(&a2, "S1^{n^6} S2^{n^6}").equivalent(&g(&a2, "S1^{n^2} S2^{n^3}")).unwrap());
        assert_eq!(GammaPolynomial::identity(a2.clone()).weight(), Weight::IDENTITY);
        assert_eq!(g(&a2, "S2^{5}").weight(), Weight::new(2, 0));

        let a3 = GroupModel::abelian(3).shared();
        let p = g(&a3, "S1^{n} S3^{n^2}");
        let q = g(&a3, "S3^{n^2+9n}");
        let r = g(&a3, "S1^{n^12} S2^{3n} S3^{n^2+n}");
        assert!(p.equivalent(&q).unwrap());
        assert!(q.equivalent(&r).unwrap());
        assert!(!q.equivalent(&g(&a3, "S3^{2n^2}")).unwrap());
        assert!(matches!(p.equivalent(&g(&a2, "S1^{n}")), Err(Error::ModelMismatch(..))));
    }

    #[test]
    fn character_examples() {
        let t = z();
        assert!(g(&t, "S1^{3n}").is_character().unwrap());
        assert!(!g(&t, "S1^{n^2}").is_character().unwrap());
        assert!(GammaPolynomial::identity(t.clone()).is_character().unwrap());
        assert!(matches!(g(&t, "S1^{n+1}").is_character(), Err(Error::NotInPG0)));
        let h = h3();
        // (yx)^n has a quadratic central coordinate but is still a character.
        let yx = GammaPolynomial::constant(h.clone(), &MalcevExponents::from_i64s(&[0, 1, 1])).unwrap();
        assert!(yx.power(&IntegralPolynomial::identity()).unwrap().is_character().unwrap());
        assert!(!g(&h, "S2^{n} S3^{n}").is_character().unwrap());
    }

    #[test]
    fn degree_guard_trips() {
        let t = GroupModel::abelian(1).with_max_degree(4).shared();
        let x = g(&t, "S1^{n^3}");
        let err = x.power(&IntegralPolynomial::monomial(1, 2)).unwrap_err();
        assert!(matches!(err, Error::DegreeGuardExceeded { degree: 5, cap: 4 }), "{err}");
    }
}
