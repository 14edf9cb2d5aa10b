//! Seeded random Γ-polynomials and systems for tests, benchmarks and experiments.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gpoly::{GammaPolynomial, IntegralPolynomial};
use crate::nilgroup::{GroupModel, MalcevExponents};
use crate::pet::PolySystem;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shape {
    pub max_degree: usize,
    /// Monomial coefficients are drawn from `[-coeff, coeff]`.
    pub coeff: i64,
    /// Probability that a component is nonzero.
    pub density: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Self { max_degree: 4, coeff: 3, density: 0.6 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer-coefficient polynomial of degree at most `shape.max_degree`
/// with constant term `constant`.
pub fn integral_polynomial<R: Rng>(rng: &mut R, shape: Shape, constant: bool) -> IntegralPolynomial {
    let degree = rng.random_range(1..=shape.max_degree.max(1));
    let mut coeffs: Vec<BigRational> =
        (0..=degree).map(|_| BigRational::from_integer(rng.random_range(-shape.coeff..=shape.coeff).into())).collect();
    if !constant {
        coeffs[0] = BigRational::from_integer(BigInt::from(0));
    }
    IntegralPolynomial::from_monomials(&coeffs).expect("integer coefficients")
}

/// Random Γ-polynomial; in `PG_0` unless `constant` is set.
pub fn gamma_polynomial<R: Rng>(rng: &mut R, model: &Arc<GroupModel>, shape: Shape, constant: bool) -> GammaPolynomial {
    let components = (0..model.dim())
        .map(|_| {
            if rng.random_bool(shape.density) {
                integral_polynomial(rng, shape, constant)
            } else {
                IntegralPolynomial::zero()
            }
        })
        .collect();
    GammaPolynomial::new(model.clone(), components).expect("dimension matches")
}

/// Random nonidentity element of `PG_0`.
pub fn pg0_star<R: Rng>(rng: &mut R, model: &Arc<GroupModel>, shape: Shape) -> GammaPolynomial {
    loop {
        let g = gamma_polynomial(rng, model, shape, false);
        if !g.is_identity() {
            return g;
        }
    }
}

pub fn group_element<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> MalcevExponents {
    MalcevExponents::new((0..dim).map(|_| BigInt::from(rng.random_range(-bound..=bound))).collect())
}

/// System of `1..=max_size` distinct elements of `PG_0^*`.
pub fn system<R: Rng>(rng: &mut R, model: &Arc<GroupModel>, max_size: usize, shape: Shape) -> PolySystem {
    let size = rng.random_range(1..=max_size.max(1));
    let mut elements: Vec<GammaPolynomial> = Vec::with_capacity(size);
    while elements.len() < size {
        let g = pg0_star(rng, model, shape);
        if !elements.contains(&g) {
            elements.push(g);
        }
    }
    PolySystem::new(model.clone(), elements).expect("distinct elements")
}

/// Models with basis size at most 3: `Z`, `Z^2`, `Z^3` and the Heisenberg group.
pub fn small_models() -> Vec<Arc<GroupModel>> {
    vec![
        GroupModel::abelian(1).shared(),
        GroupModel::abelian(2).shared(),
        GroupModel::abelian(3).shared(),
        GroupModel::heisenberg().shared(),
    ]
}

/// `count` systems cycling through [`small_models`], sizes up to `max_size`.
pub fn system_corpus(seed: u64, count: usize, max_size: usize, shape: Shape) -> Vec<PolySystem> {
    let models = small_models();
    let mut r = rng(seed);
    (0..count).map(|i| system(&mut r, &models[i % models.len()], max_size, shape)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible_and_well_formed() {
        let a = system_corpus(7, 20, 6, Shape::default());
        let b = system_corpus(7, 20, 6, Shape::default());
        assert_eq!(a, b);
        for s in &a {
            assert!(!s.is_empty() && s.len() <= 6);
            for g in s.elements() {
                assert!(g.is_in_pg0() && !g.is_identity());
                assert!(g.components().iter().all(|p| p.degree().is_none_or(|d| d <= 4)));
            }
        }
    }
}
