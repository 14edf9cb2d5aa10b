//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use petdyn_core::corpus::{self, Shape};
use petdyn_core::{GammaPolynomial, GroupModel, MalcevExponents, PolySystem};

/// Pairs of random group elements with coordinates in `[-50, 50]`.
pub fn element_pairs(model: &GroupModel, count: usize) -> Vec<(MalcevExponents, MalcevExponents)> {
    let mut r = corpus::rng(11);
    (0..count)
        .map(|_| (corpus::group_element(&mut r, model.dim(), 50), corpus::group_element(&mut r, model.dim(), 50)))
        .collect()
}

/// Pairs of random Γ-polynomials of degree at most 4.
pub fn gpoly_pairs(model: &Arc<GroupModel>, count: usize) -> Vec<(GammaPolynomial, GammaPolynomial)> {
    let mut r = corpus::rng(12);
    (0..count)
        .map(|_| {
            (
                corpus::gamma_polynomial(&mut r, model, Shape::default(), true),
                corpus::gamma_polynomial(&mut r, model, Shape::default(), true),
            )
        })
        .collect()
}

/// The reduction corpus used by the acceptance suite, truncated to `count`.
pub fn systems(count: usize) -> Vec<PolySystem> {
    corpus::system_corpus(2024, count, 6, Shape::default())
}
