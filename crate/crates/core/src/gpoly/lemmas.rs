//! Shift selection for derived Γ-polynomials.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;

use super::GammaPolynomial;
use crate::error::{Error, Result};

/// Candidates are scanned from 1 up to this bound before giving up.
pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

/// `n -> f_t(k)^-1 f_t(n + k) f(n)^-1`, given `f^-1`.
pub fn derived_form(f_t: &GammaPolynomial, k: u64, f_inv: &GammaPolynomial) -> Result<GammaPolynomial> {
    f_t.shift_derive(&BigInt::from(k))?.multiply(f_inv)
}

/// Finds `k_i = i(L+2) + u` (`i = 0..=ell`) such that the forms
/// `d_{i,j} = f(k_i+j)^-1 f(k_i+j+n) f(n)^-1`, `j = 0..=big_l`, are all
/// nonidentity and pairwise distinct.
///
/// The set of `m` with `f(m)^-1 f(n+m) = f(n)` for all `n` is a subgroup of
/// `Z`; a nontrivial subgroup is infinite, which forces `f(n) = f(1)^n`.
/// So the hypothesis "for every `m != 0` some `n` has `f(m+n) != f(m)f(n)`"
/// holds exactly when `f` is not a character, and that is what is checked.
pub fn derived_distinct_shifts(f: &GammaPolynomial, ell: usize, big_l: usize) -> Result<Vec<u64>> {
    derived_distinct_shifts_bounded(f, ell, big_l, DEFAULT_SEARCH_BOUND)
}

pub fn derived_distinct_shifts_bounded(f: &GammaPolynomial, ell: usize, big_l: usize, bound: u64) -> Result<Vec<u64>> {
    if f.is_character()? {
        return Err(Error::PreconditionViolated(format!("{f} satisfies f(n+m) = f(m)f(n) for all m, n")));
    }
    let f_inv = f.inverse()?;
    let stride = big_l as u64 + 2;
    let mut cache: HashMap<u64, GammaPolynomial> = HashMap::new();
    'search: for u in 1..=bound {
        let mut seen = HashSet::new();
        for i in 0..=ell as u64 {
            for j in 0..=big_l as u64 {
                let m = i * stride + u + j;
                let d = match cache.entry(m) {
                    Entry::Occupied(e) => e.into_mut(),
                    Entry::Vacant(e) => e.insert(derived_form(f, m, &f_inv)?),
                };
                if d.is_identity() || !seen.insert(d.clone()) {
                    continue 'search;
                }
            }
        }
        return Ok((0..=ell as u64).map(|i| i * stride + u).collect());
    }
    Err(Error::SearchExhausted { bound })
}

/// Greedy increasing `k_0 < ... < k_ell` such that, with `f = f_list[0]`,
///
/// 1. `f_t(k_i)^-1 f_t(n + k_i) f(n)^-1` is not the identity for `t >= 2`;
/// 2. these forms are pairwise distinct across `(t, i)`, `(s, j)` with `t != s`.
pub fn shift_gap_sequence(f_list: &[GammaPolynomial], ell: usize) -> Result<Vec<u64>> {
    shift_gap_sequence_bounded(f_list, ell, DEFAULT_SEARCH_BOUND)
}

pub fn shift_gap_sequence_bounded(f_list: &[GammaPolynomial], ell: usize, bound: u64) -> Result<Vec<u64>> {
    Ok(shift_gap_forms(f_list, ell, bound)?.into_iter().map(|(k, _)| k).collect())
}

/// As [`shift_gap_sequence_bounded`], also returning the derived forms
/// `forms[t]` for every chosen shift.
pub(crate) fn shift_gap_forms(
    f_list: &[GammaPolynomial],
    ell: usize,
    bound: u64,
) -> Result<Vec<(u64, Vec<GammaPolynomial>)>> {
    let Some(f) = f_list.first() else {
        return Err(Error::EmptySystem);
    };
    let mut distinct = HashSet::new();
    for g in f_list {
        if g.is_identity() {
            return Err(Error::IdentityElement);
        }
        if !g.is_in_pg0() {
            return Err(Error::NotInPG0);
        }
        if !distinct.insert(g) {
            return Err(Error::DuplicateElement(g.to_string()));
        }
    }
    let f_inv = f.inverse()?;
    let mut chosen: Vec<(u64, Vec<GammaPolynomial>)> = Vec::with_capacity(ell + 1);
    // Index `t` owning each derived form accepted so far.
    let mut owner: HashMap<GammaPolynomial, usize> = HashMap::new();
    let mut k = 1u64;
    while chosen.len() <= ell {
        if k > bound {
            return Err(Error::SearchExhausted { bound });
        }
        let forms = f_list.iter().map(|f_t| derived_form(f_t, k, &f_inv)).collect::<Result<Vec<_>>>()?;
        let nontrivial = forms[1..].iter().all(|d| !d.is_identity());
        let mut local: HashMap<&GammaPolynomial, usize> = HashMap::new();
        let clash = forms
            .iter()
            .enumerate()
            .any(|(t, d)| owner.get(d).is_some_and(|&s| s != t) || *local.entry(d).or_insert(t) != t);
        if nontrivial && !clash {
            for (t, d) in forms.iter().enumerate() {
                owner.insert(d.clone(), t);
            }
            chosen.push((k, forms));
        }
        k += 1;
    }
    Ok(chosen)
}
