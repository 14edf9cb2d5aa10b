//! Exact arithmetic in finitely generated torsion-free nilpotent groups.
//!
//! Elements are stored by their coordinates in a fixed Malcev basis
//! `S_1, ..., S_s`: the vector `(r_1, ..., r_s)` stands for
//! `S_1^{r_1} S_2^{r_2} ... S_s^{r_s}`. A [`GroupModel`] carries the
//! polynomial multiplication and power laws on these coordinates, and
//! optionally a faithful unitriangular integer-matrix representation that
//! serves as an independent oracle.
//!
//! Three models are built in:
//!
//! * [`GroupModel::abelian`]: `Z^s`, coordinates add.
//! * [`GroupModel::heisenberg`]: basis `(z, y, x)` with `[x, y] = z`,
//!   where `x`, `y`, `z` are the elementary matrices at `(1,2)`, `(2,3)`
//!   and `(1,3)`.
//! * [`GroupModel::ut4`]: `UT(4, Z)` with basis ordered by descending
//!   superdiagonal distance: `E14, E13, E24, E12, E23, E34`.
//!
//! Commutators follow the convention `[a, b] = a^-1 b^-1 a b`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::parse_multipoly;
use crate::poly::{CompiledPoly, MultiPoly};

/// Default cap on the degree of symbolically composed coordinates.
pub const DEFAULT_MAX_DEGREE: usize = 64;

/// Coordinates of a group element in the model's Malcev basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MalcevExponents(Vec<BigInt>);

impl MalcevExponents {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(len: usize) -> Self {
        Self(vec![BigInt::zero(); len])
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for MalcevExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dense square integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = BigInt::one();
        }
        Self { dim, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidModel("matrix rows must form a square".into()));
        }
        Ok(Self { dim, data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at 1-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.data[(row - 1) * self.dim + (col - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.dim).map(<[BigInt]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut data = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.data[k * d + j];
                    if !b.is_zero() {
                        data[i * d + j] += a * b;
                    }
                }
            }
        }
        Self { dim: d, data }
    }

    fn sub_identity(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] -= 1;
        }
        out
    }

    fn add_scaled(&mut self, other: &Self, k: &BigInt) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * k;
        }
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let v = &self.data[i * self.dim + j];
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => v.is_one(),
                    std::cmp::Ordering::Greater => v.is_zero(),
                    std::cmp::Ordering::Less => true,
                }
            })
        })
    }

    /// `self^k` for an upper unitriangular matrix and any integer `k`, via
    /// `(I + N)^k = sum_{i < dim} C(k, i) N^i`.
    pub fn unitriangular_pow(&self, k: &BigInt) -> Self {
        debug_assert!(self.is_upper_unitriangular());
        let nil = self.sub_identity();
        let mut out = Self::identity(self.dim);
        let mut nil_pow = Self::identity(self.dim);
        let mut binom = BigInt::one();
        for i in 1..self.dim {
            nil_pow = nil_pow.mul(&nil);
            binom = binom * (k - BigInt::from(i - 1)) / BigInt::from(i);
            out.add_scaled(&nil_pow, &binom);
        }
        out
    }
}

/// A faithful unitriangular matrix representation given by the images of
/// the basis elements.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    dim: usize,
    basis: Vec<IntMatrix>,
}

impl MatrixRep {
    pub fn new(dim: usize, basis: Vec<IntMatrix>) -> Result<Self> {
        for (j, m) in basis.iter().enumerate() {
            if m.dim() != dim || !m.is_upper_unitriangular() {
                return Err(Error::InvalidModel(format!(
                    "basis image {} must be an upper unitriangular {dim}x{dim} matrix",
                    j + 1
                )));
            }
        }
        Ok(Self { dim, basis })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[IntMatrix] {
        &self.basis
    }
}

/// Serializable model definition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelDefinition {
    pub name: String,
    pub s: usize,
    pub mul: Vec<String>,
    pub pow: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDefinition>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixDefinition {
    pub dim: usize,
    pub basis: Vec<Vec<Vec<i64>>>,
}

/// A torsion-free nilpotent group presented by Malcev coordinates.
#[derive(Clone, Debug)]
pub struct GroupModel {
    name: String,
    dim: usize,
    mul: Vec<MultiPoly>,
    pow: Vec<MultiPoly>,
    mul_compiled: Vec<CompiledPoly>,
    pow_compiled: Vec<CompiledPoly>,
    matrix: Option<MatrixRep>,
    max_degree: usize,
}

const HEISENBERG_JSON: &str = include_str!("../models/heisenberg.json");
const UT4_JSON: &str = include_str!("../models/ut4.json");

impl GroupModel {
    /// Builds and validates a model.
    ///
    /// `mul` has `2s` variables `(a_1..a_s, b_1..b_s)`, `pow` has `s + 1`
    /// variables `(a_1..a_s, n)`. Validation checks exact integer-valuedness,
    /// the identity laws, `pow(x, 0) = e`, `pow(x, 1) = x`, small powers
    /// against repeated multiplication, the Malcev commutator condition and,
    /// when present, agreement with the matrix representation on basis pairs.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        mul: Vec<MultiPoly>,
        pow: Vec<MultiPoly>,
        matrix: Option<MatrixRep>,
    ) -> Result<Self> {
        let name = name.into();
        if dim == 0 {
            return Err(Error::InvalidModel("basis size must be positive".into()));
        }
        if mul.len() != dim || pow.len() != dim {
            return Err(Error::InvalidModel(format!(
                "expected {dim} multiplication and power expressions, found {} and {}",
                mul.len(),
                pow.len()
            )));
        }
        if mul.iter().any(|p| p.nvars() != 2 * dim) || pow.iter().any(|p| p.nvars() != dim + 1) {
            return Err(Error::InvalidModel("coordinate maps have the wrong arity".into()));
        }
        if let Some(rep) = &matrix {
            if rep.basis.len() != dim {
                return Err(Error::InvalidModel(format!(
                    "matrix representation has {} basis images, expected {dim}",
                    rep.basis.len()
                )));
            }
        }
        let model = Self {
            mul_compiled: mul.iter().map(MultiPoly::compile).collect(),
            pow_compiled: pow.iter().map(MultiPoly::compile).collect(),
            name,
            dim,
            mul,
            pow,
            matrix,
            max_degree: DEFAULT_MAX_DEGREE,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn from_definition(def: &ModelDefinition) -> Result<Self> {
        let s = def.s;
        let mul_lookup = |v: &str| -> Option<usize> {
            let (prefix, idx) = v.split_at(1);
            let idx: usize = idx.parse().ok()?;
            if idx == 0 || idx > s {
                return None;
            }
            match prefix {
                "a" => Some(idx - 1),
                "b" => Some(s + idx - 1),
                _ => None,
            }
        };
        let pow_lookup = |v: &str| -> Option<usize> {
            if v == "n" {
                return Some(s);
            }
            let idx: usize = v.strip_prefix('a')?.parse().ok()?;
            (1..=s).contains(&idx).then(|| idx - 1)
        };
        let context = |i: usize, kind: &str, e: Error| match e {
            Error::Parse { column, message } => Error::InvalidModel(format!("{kind}[{i}] column {column}: {message}")),
            other => other,
        };
        let mul = def
            .mul
            .iter()
            .enumerate()
            .map(|(i, t)| parse_multipoly(t, 2 * s, &mul_lookup).map_err(|e| context(i, "mul", e)))
            .collect::<Result<Vec<_>>>()?;
        let pow = def
            .pow
            .iter()
            .enumerate()
            .map(|(i, t)| parse_multipoly(t, s + 1, &pow_lookup).map_err(|e| context(i, "pow", e)))
            .collect::<Result<Vec<_>>>()?;
        let matrix = match &def.matrix {
            None => None,
            Some(m) => {
                let basis = m.basis.iter().map(|rows| IntMatrix::from_rows(rows)).collect::<Result<Vec<_>>>()?;
                Some(MatrixRep::new(m.dim, basis)?)
            }
        };
        Self::new(def.name.clone(), s, mul, pow, matrix)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let def: ModelDefinition = serde_json::from_str(text)?;
        Self::from_definition(&def)
    }

    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// `Z^s` with the standard basis and identity matrix-free presentation.
    pub fn abelian(s: usize) -> Self {
        let mul = (0..s).map(|i| MultiPoly::var(2 * s, i).add(&MultiPoly::var(2 * s, s + i))).collect();
        let pow = (0..s).map(|i| MultiPoly::var(s + 1, i).mul(&MultiPoly::var(s + 1, s))).collect();
        // Z^s embeds in UT(s+1, Z) through the first row.
        let basis = (0..s)
            .map(|i| {
                let mut m = IntMatrix::identity(s + 1);
                m.data[i + 1] = BigInt::one();
                m
            })
            .collect();
        let rep = MatrixRep::new(s + 1, basis).expect("valid embedding");
        Self::new(format!("abelian:{s}"), s, mul, pow, Some(rep)).expect("abelian model is valid")
    }

    pub fn heisenberg() -> Self {
        Self::from_json_str(HEISENBERG_JSON).expect("built-in Heisenberg model is valid")
    }

    pub fn ut4() -> Self {
        Self::from_json_str(UT4_JSON).expect("built-in UT(4,Z) model is valid")
    }

    /// Resolves `heisenberg`, `ut4`, `abelian:<s>` or `z` (= `abelian:1`).
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "heisenberg" | "h3" => Some(Self::heisenberg()),
            "ut4" => Some(Self::ut4()),
            "z" | "Z" => Some(Self::abelian(1)),
            _ => {
                let s: usize = name.strip_prefix("abelian:")?.parse().ok()?;
                (s > 0).then(|| Self::abelian(s))
            }
        }
    }

    pub fn with_max_degree(mut self, cap: usize) -> Self {
        self.max_degree = cap;
        self
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Basis size `s`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn mul_map(&self) -> &[MultiPoly] {
        &self.mul
    }

    pub fn pow_map(&self) -> &[MultiPoly] {
        &self.pow
    }

    pub fn matrix_rep(&self) -> Option<&MatrixRep> {
        self.matrix.as_ref()
    }

    fn check(&self, a: &MalcevExponents) -> Result<()> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.len() });
        }
        Ok(())
    }

    pub fn identity(&self) -> MalcevExponents {
        MalcevExponents::zero(self.dim)
    }

    /// The basis element `S_j` (1-based).
    pub fn basis_element(&self, j: usize) -> MalcevExponents {
        assert!((1..=self.dim).contains(&j), "basis index out of range");
        let mut v = vec![BigInt::zero(); self.dim];
        v[j - 1] = BigInt::one();
        MalcevExponents(v)
    }

    pub fn multiply(&self, a: &MalcevExponents, b: &MalcevExponents) -> Result<MalcevExponents> {
        self.check(a)?;
        self.check(b)?;
        let point: Vec<BigInt> = a.0.iter().chain(&b.0).cloned().collect();
        self.mul_compiled
            .iter()
            .map(|p| p.eval(&point).ok_or(Error::InternalNotIntegral))
            .collect::<Result<Vec<_>>>()
            .map(MalcevExponents)
    }

    pub fn power(&self, a: &MalcevExponents, n: &BigInt) -> Result<MalcevExponents> {
        self.check(a)?;
        let mut point = a.0.clone();
        point.push(n.clone());
        self.pow_compiled
            .iter()
            .map(|p| p.eval(&point).ok_or(Error::InternalNotIntegral))
            .collect::<Result<Vec<_>>>()
            .map(MalcevExponents)
    }

    pub fn inverse(&self, a: &MalcevExponents) -> Result<MalcevExponents> {
        self.power(a, &BigInt::from(-1))
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &MalcevExponents, b: &MalcevExponents) -> Result<MalcevExponents> {
        let ai = self.inverse(a)?;
        let bi = self.inverse(b)?;
        let left = self.multiply(&ai, &bi)?;
        let right = self.multiply(a, b)?;
        self.multiply(&left, &right)
    }

    pub fn to_matrix(&self, a: &MalcevExponents) -> Result<IntMatrix> {
        let rep = self.matrix.as_ref().ok_or_else(|| Error::NoRepresentation(self.name.clone()))?;
        self.check(a)?;
        let mut out = IntMatrix::identity(rep.dim);
        for (m, k) in rep.basis.iter().zip(&a.0) {
            if !k.is_zero() {
                out = out.mul(&m.unitriangular_pow(k));
            }
        }
        Ok(out)
    }

    fn validate(&self) -> Result<()> {
        let s = self.dim;
        let invalid = |msg: String| Err(Error::InvalidModel(format!("{}: {msg}", self.name)));

        for (i, p) in self.mul.iter().enumerate() {
            if !p.is_integer_valued() {
                return invalid(format!("mul[{}] is not integer-valued", i + 1));
            }
        }
        for (i, p) in self.pow.iter().enumerate() {
            if !p.is_integer_valued() {
                return invalid(format!("pow[{}] is not integer-valued", i + 1));
            }
        }

        let zero = BigRational::zero();
        for (i, p) in self.mul.iter().enumerate() {
            let mut right_unit = p.clone();
            let mut left_unit = p.clone();
            for j in 0..s {
                right_unit = right_unit.substitute_constant(s + j, &zero);
                left_unit = left_unit.substitute_constant(j, &zero);
            }
            if right_unit != MultiPoly::var(2 * s, i) || left_unit != MultiPoly::var(2 * s, s + i) {
                return invalid(format!("mul[{}] violates the identity law", i + 1));
            }
        }
        for (i, p) in self.pow.iter().enumerate() {
            if !p.substitute_constant(s, &zero).is_zero() {
                return invalid(format!("pow[{}] at n = 0 is not the identity", i + 1));
            }
            if p.substitute_constant(s, &BigRational::one()) != MultiPoly::var(s + 1, i) {
                return invalid(format!("pow[{}] at n = 1 is not the argument", i + 1));
            }
        }

        // Powers against repeated multiplication on a small deterministic sample.
        let samples: Vec<MalcevExponents> = (1..=s)
            .map(|j| self.basis_element(j))
            .chain([
                MalcevExponents((0..s).map(|i| BigInt::from(i as i64 + 1)).collect()),
                MalcevExponents((0..s).map(|i| BigInt::from(if i % 2 == 0 { -2 } else { 3 })).collect()),
            ])
            .collect();
        for a in &samples {
            let inv = self.inverse(a)?;
            if !self.multiply(a, &inv)?.is_identity() || !self.multiply(&inv, a)?.is_identity() {
                return invalid(format!("pow(x, -1) is not an inverse at {a}"));
            }
            let mut acc = self.identity();
            for n in 1..=3i64 {
                acc = self.multiply(&acc, a)?;
                if self.power(a, &BigInt::from(n))? != acc {
                    return invalid(format!("pow(x, {n}) disagrees with repeated multiplication at {a}"));
                }
            }
        }

        for i in 1..=s {
            for j in i + 1..=s {
                let c = self.commutator(&self.basis_element(i), &self.basis_element(j))?;
                if c.0[i - 1..].iter().any(|v| !v.is_zero()) {
                    return invalid(format!("[S{i}, S{j}] = {c} leaves the subgroup generated by S1..S{}", i - 1));
                }
            }
        }

        if self.matrix.is_some() {
            for i in 1..=s {
                for j in 1..=s {
                    let (a, b) = (self.basis_element(i), self.basis_element(j));
                    let lhs = self.to_matrix(&self.multiply(&a, &b)?)?;
                    let rhs = self.to_matrix(&a)?.mul(&self.to_matrix(&b)?);
                    if lhs != rhs {
                        return invalid(format!("S{i}*S{j} disagrees with the matrix representation"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl PartialEq for GroupModel {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.dim == other.dim && self.mul == other.mul && self.pow == other.pow
    }
}

impl Eq for GroupModel {}

/// Reads coordinates back from a Heisenberg-style upper unitriangular 3x3
/// matrix: `M(a, b, c) = [[1,a,c],[0,1,b],[0,0,1]]` has coordinates `(c, b, a)`.
pub fn heisenberg_coords(m: &IntMatrix) -> Option<MalcevExponents> {
    (m.dim() == 3 && m.is_upper_unitriangular())
        .then(|| MalcevExponents(vec![m.entry(1, 3).clone(), m.entry(2, 3).clone(), m.entry(1, 2).clone()]))
}
