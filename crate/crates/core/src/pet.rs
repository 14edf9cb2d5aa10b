//! Systems of Γ-polynomials, weight vectors and PET-induction.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpoly::{
    derived_form, parse_gpoly, shift_gap_sequence_bounded, GammaPolynomial, Weight, DEFAULT_SEARCH_BOUND,
};
use crate::nilgroup::GroupModel;

/// A finite set of pairwise distinct Γ-polynomials over one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    model: Arc<GroupModel>,
    elements: Vec<GammaPolynomial>,
}

impl PolySystem {
    /// Rejects repeated elements with [`Error::DuplicateElement`].
    pub fn new(model: Arc<GroupModel>, elements: Vec<GammaPolynomial>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &elements {
            if **g.model() != *model {
                return Err(Error::ModelMismatch(model.name().into(), g.model().name().into()));
            }
            if !seen.insert(g) {
                return Err(Error::DuplicateElement(g.to_string()));
            }
        }
        Ok(Self { model, elements })
    }

    /// Builds a system, silently merging repeated elements.
    pub fn merged(model: Arc<GroupModel>, elements: impl IntoIterator<Item = GammaPolynomial>) -> Self {
        let mut seen = HashSet::new();
        let elements = elements.into_iter().filter(|g| seen.insert(g.clone())).collect();
        Self { model, elements }
    }

    pub fn parse<S: AsRef<str>>(model: &Arc<GroupModel>, texts: &[S]) -> Result<Self> {
        let elements = texts.iter().map(|t| parse_gpoly(model, t.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(model.clone(), elements)
    }

    pub fn model(&self) -> &Arc<GroupModel> {
        &self.model
    }

    pub fn elements(&self) -> &[GammaPolynomial] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Multiplicity of each weight = number of equivalence classes of that weight.
    pub fn weight_vector(&self) -> WeightVector {
        let classes: HashSet<(Weight, Option<BigRational>)> =
            self.elements.iter().map(GammaPolynomial::class_key).collect();
        let mut counts = BTreeMap::new();
        for (w, _) in classes {
            *counts.entry(w).or_insert(0usize) += 1;
        }
        WeightVector { entries: counts.into_iter().collect() }
    }

    /// Element of minimal weight; ties go to the lexicographically smallest
    /// coefficient vector.
    pub fn minimal_element(&self) -> Option<&GammaPolynomial> {
        self.elements.iter().min_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.components().cmp(b.components())))
    }

    pub fn precedes(&self, other: &Self) -> bool {
        self.weight_vector() < other.weight_vector()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.elements.iter().map(ToString::to_string).collect()
    }
}

/// Sparse weight vector: ascending weights with positive multiplicities.
///
/// Ordered by the highest weight whose multiplicities differ; absent weights
/// count as zero. `a < b` is exactly "`a` precedes `b`".
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WeightVector {
    entries: Vec<(Weight, usize)>,
}

impl WeightVector {
    pub fn new(entries: impl IntoIterator<Item = (Weight, usize)>) -> Self {
        let mut counts = BTreeMap::new();
        for (w, m) in entries {
            *counts.entry(w).or_insert(0usize) += m;
        }
        counts.retain(|_, m| *m > 0);
        Self { entries: counts.into_iter().collect() }
    }

    pub fn entries(&self) -> &[(Weight, usize)] {
        &self.entries
    }

    pub fn multiplicity(&self, w: Weight) -> usize {
        self.entries.binary_search_by(|(x, _)| x.cmp(&w)).map(|i| self.entries[i].1).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The base case `(1(1,1))`.
    pub fn is_base(&self) -> bool {
        self.entries == [(Weight::new(1, 1), 1)]
    }

    pub fn max_weight(&self) -> Option<Weight> {
        self.entries.last().map(|&(w, _)| w)
    }
}

/// `a` precedes `b`.
pub fn precedes(a: &WeightVector, b: &WeightVector) -> bool {
    a < b
}

impl Ord for WeightVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (self.entries.len(), other.entries.len());
        while i > 0 && j > 0 {
            let (wa, ma) = self.entries[i - 1];
            let (wb, mb) = other.entries[j - 1];
            match wa.cmp(&wb) {
                Ordering::Greater => return Ordering::Greater,
                Ordering::Less => return Ordering::Less,
                Ordering::Equal if ma != mb => return ma.cmp(&mb),
                Ordering::Equal => {
                    i -= 1;
                    j -= 1;
                }
            }
        }
        i.cmp(&j)
    }
}

impl PartialOrd for WeightVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (w, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}{w}")?;
        }
        write!(f, ")")
    }
}

/// Parses the display form, e.g. `(2(1,1), 1(1,2))`.
impl FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { column: 1, message: format!("weight vector `{s}`: {msg}") };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| bad("expected surrounding parentheses"))?;
        let mut entries = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| bad("expected `m(l,k)`"))?;
            let close = rest.find(')').ok_or_else(|| bad("unclosed weight"))?;
            let m: usize = rest[..open].parse().map_err(|_| bad("bad multiplicity"))?;
            let (l, k) = rest[open + 1..close].split_once(',').ok_or_else(|| bad("expected `l,k`"))?;
            let l: usize = l.parse().map_err(|_| bad("bad index"))?;
            let k: usize = k.parse().map_err(|_| bad("bad degree"))?;
            entries.push((Weight::new(l, k), m));
            rest = rest[close + 1..].strip_prefix(',').unwrap_or(&rest[close + 1..]);
        }
        Ok(Self::new(entries))
    }
}

impl Serialize for WeightVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.entries.iter().map(|(w, m)| [w.l, w.k, *m]))
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<[usize; 3]> = Vec::deserialize(deserializer)?;
        Ok(Self::new(raw.into_iter().map(|[l, k, m]| (Weight::new(l, k), m))))
    }
}

/// `{ g h^-1 : g in A }` without the identity.
///
/// `h` must be a nonidentity element of `A` of minimal weight. The result is
/// checked to precede `A`.
pub fn quotient_system(a: &PolySystem, h: &GammaPolynomial) -> Result<PolySystem> {
    if h.is_identity() {
        return Err(Error::IdentityElement);
    }
    if !a.elements.contains(h) {
        return Err(Error::PreconditionViolated(format!("{h} is not an element of the system")));
    }
    let wh = h.weight();
    if let Some(g) = a.elements.iter().find(|g| g.weight() < wh) {
        return Err(Error::NotMinimal(format!("{h} has weight {wh} but {g} has weight {}", g.weight())));
    }
    let h_inv = h.inverse()?;
    let mut out = Vec::with_capacity(a.len());
    for g in &a.elements {
        let q = g.multiply(&h_inv)?;
        if !q.is_identity() {
            out.push(q);
        }
    }
    let derived = PolySystem::merged(a.model.clone(), out);
    check_precedence(&derived, a)?;
    Ok(derived)
}

/// The derived system `A' = U_t { f_t(k_j)^-1 f_t(n + k_j) f(n)^-1 : j }`
/// without identity elements, for `f` of minimal weight in `A`.
pub fn proof_step_system(a: &PolySystem, f: &GammaPolynomial, shifts: &[u64]) -> Result<PolySystem> {
    let (derived, _) = proof_step_inner(a, f, shifts)?;
    check_precedence(&derived, a)?;
    Ok(derived)
}

fn proof_step_inner(a: &PolySystem, f: &GammaPolynomial, shifts: &[u64]) -> Result<(PolySystem, Vec<String>)> {
    let wf = f.weight();
    if f.is_identity() {
        return Err(Error::IdentityElement);
    }
    if let Some(g) = a.elements.iter().find(|g| g.weight() < wf) {
        return Err(Error::NotMinimal(format!("{f} has weight {wf} but {g} has weight {}", g.weight())));
    }
    let f_inv = f.inverse()?;
    let mut out = Vec::new();
    let mut notes = Vec::new();
    for g in &a.elements {
        for &k in shifts {
            let d = derived_form(g, k, &f_inv)?;
            if d.is_identity() {
                continue;
            }
            if d.weight().is_constant_nonidentity() {
                log::warn!("dropping constant derived element {d} of weight {}", d.weight());
                notes.push(format!("dropped constant element {d}"));
                continue;
            }
            out.push(d);
        }
    }
    Ok((PolySystem::merged(a.model.clone(), out), notes))
}

fn check_precedence(derived: &PolySystem, original: &PolySystem) -> Result<()> {
    let (wd, wo) = (derived.weight_vector(), original.weight_vector());
    if wd < wo {
        Ok(())
    } else {
        Err(Error::PrecedenceViolation(format!("{wd} does not precede {wo}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Divide by a minimal element.
    Quotient,
    /// Pass to the shift-derived system of the induction step.
    ProofStep,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Quotient => "quotient",
            Rule::ProofStep => "proof_step",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    Quotient,
    ProofStep,
    Terminal,
}

impl From<Rule> for StepRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Quotient => StepRule::Quotient,
            Rule::ProofStep => StepRule::ProofStep,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub system: Vec<String>,
    pub weight_vector: WeightVector,
    pub rule: StepRule,
    pub minimal: Option<String>,
    pub shifts: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Steps of a reduction, the last one with rule `terminal`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn weight_vectors(&self) -> impl Iterator<Item = &WeightVector> {
        self.steps.iter().map(|s| &s.weight_vector)
    }

    /// Number of reductions applied.
    pub fn reductions(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.steps.windows(2).all(|w| w[1].weight_vector < w[0].weight_vector)
    }

    pub fn terminal(&self) -> &TraceStep {
        self.steps.last().expect("a trace has a terminal step")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Default cap on the size of a derived system.
pub const DEFAULT_MAX_SYSTEM_SIZE: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PetOptions {
    /// Number of shifts minus one used by the proof-step rule.
    pub ell: usize,
    pub search_bound: u64,
    /// Largest derived system accepted before aborting.
    pub max_system_size: usize,
}

impl Default for PetOptions {
    fn default() -> Self {
        Self { ell: 2, search_bound: DEFAULT_SEARCH_BOUND, max_system_size: DEFAULT_MAX_SYSTEM_SIZE }
    }
}

/// Empirical step budget `10 * (total degree) * size^2`; exceeding it is
/// logged, not treated as an error.
pub fn step_budget(a: &PolySystem) -> usize {
    let degree: usize = a.elements.iter().filter_map(GammaPolynomial::max_degree).sum();
    10 * degree.max(1) * a.len() * a.len()
}

pub fn pet_reduce(a: &PolySystem, rule: Rule) -> Result<ReductionTrace> {
    pet_reduce_with(a, rule, PetOptions::default())
}

/// Applies `rule` to a minimal element until the system is empty or has
/// weight vector `(1(1,1))`.
pub fn pet_reduce_with(a: &PolySystem, rule: Rule, options: PetOptions) -> Result<ReductionTrace> {
    if a.is_empty() {
        return Err(Error::EmptySystem);
    }
    for g in &a.elements {
        if g.is_identity() {
            return Err(Error::IdentityElement);
        }
        if !g.is_in_pg0() {
            return Err(Error::NotInPG0);
        }
    }
    let budget = step_budget(a);
    let mut steps = Vec::new();
    let mut current = a.clone();
    loop {
        let wv = current.weight_vector();
        if current.is_empty() || wv.is_base() {
            steps.push(TraceStep {
                system: current.to_strings(),
                weight_vector: wv,
                rule: StepRule::Terminal,
                minimal: None,
                shifts: Vec::new(),
                notes: Vec::new(),
            });
            break;
        }
        let f = current.minimal_element().expect("nonempty").clone();
        let (next, shifts, notes) = match rule {
            Rule::Quotient => (quotient_system(&current, &f)?, Vec::new(), Vec::new()),
            Rule::ProofStep => {
                let mut f_list = vec![f.clone()];
                f_list.extend(current.elements.iter().filter(|g| **g != f).cloned());
                let shifts = shift_gap_sequence_bounded(&f_list, options.ell, options.search_bound)?;
                let (next, notes) = proof_step_inner(&current, &f, &shifts)?;
                check_precedence(&next, &current)?;
                (next, shifts, notes)
            }
        };
        steps.push(TraceStep {
            system: current.to_strings(),
            weight_vector: wv,
            rule: rule.into(),
            minimal: Some(f.to_string()),
            shifts,
            notes,
        });
        if next.len() > options.max_system_size {
            return Err(Error::SizeGuardExceeded { size: next.len(), cap: options.max_system_size });
        }
        if steps.len() == budget + 1 {
            log::warn!("reduction passed the empirical budget of {budget} steps");
        }
        current = next;
    }
    Ok(ReductionTrace { steps })
}
