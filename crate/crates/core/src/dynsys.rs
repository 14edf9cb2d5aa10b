//! Substitution subshifts as finite words, cylinder sets, and windowed
//! return-time experiments on them.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus;
use crate::error::{Error, Result};
use crate::gpoly::IntegralPolynomial;
use crate::zsets::WindowSet;

/// On-disk form of a substitution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionDef {
    pub alphabet: Vec<char>,
    pub rules: BTreeMap<char, String>,
    pub seed: char,
    pub min_length: usize,
}

impl SubstitutionDef {
    pub fn chacon(min_length: usize) -> Self {
        Self {
            alphabet: vec!['0', '1'],
            rules: BTreeMap::from([('0', "0010".to_string()), ('1', "1".to_string())]),
            seed: '0',
            min_length,
        }
    }
}

/// A substitution together with a prefix of its fixed point.
#[derive(Clone, Debug)]
pub struct SubstitutionSystem {
    def: SubstitutionDef,
    rules: Vec<Vec<u8>>,
    word: Vec<u8>,
}

pub const CHACON_LENGTH: usize = 1_000_000;

impl SubstitutionSystem {
    pub fn new(def: SubstitutionDef) -> Result<Self> {
        let bad = |m: String| Error::InvalidSubstitution(m);
        if def.alphabet.is_empty() || def.alphabet.len() > 256 {
            return Err(bad("alphabet must have 1..=256 symbols".into()));
        }
        let index: HashMap<char, u8> = def.alphabet.iter().enumerate().map(|(i, &c)| (c, i as u8)).collect();
        if index.len() != def.alphabet.len() {
            return Err(bad("repeated alphabet symbol".into()));
        }
        let mut rules = Vec::with_capacity(def.alphabet.len());
        for c in &def.alphabet {
            let image = def.rules.get(c).ok_or_else(|| bad(format!("no rule for `{c}`")))?;
            let image: Vec<u8> = image
                .chars()
                .map(|d| index.get(&d).copied().ok_or_else(|| bad(format!("`{d}` not in alphabet"))))
                .collect::<Result<_>>()?;
            if image.is_empty() {
                return Err(bad(format!("empty image for `{c}`")));
            }
            rules.push(image);
        }
        if let Some(extra) = def.rules.keys().find(|c| !index.contains_key(c)) {
            return Err(bad(format!("rule for `{extra}` outside the alphabet")));
        }
        let seed = *index.get(&def.seed).ok_or_else(|| bad(format!("seed `{}` not in alphabet", def.seed)))?;
        let seed_image = &rules[seed as usize];
        if seed_image[0] != seed || seed_image.len() < 2 {
            return Err(bad("the seed's image must start with the seed and be longer than it".into()));
        }
        let mut word = vec![seed];
        while word.len() < def.min_length.max(1) {
            word = apply(&rules, &word);
        }
        word.truncate(def.min_length.max(1));
        let sys = Self { def, rules, word };
        let next = apply(&sys.rules, &sys.word);
        if !next.starts_with(&sys.word) {
            return Err(bad("generated word is not a prefix of its image".into()));
        }
        Ok(sys)
    }

    /// The Chacon substitution `0 -> 0010, 1 -> 1`.
    pub fn chacon() -> Self {
        Self::chacon_with_length(CHACON_LENGTH)
    }

    pub fn chacon_with_length(len: usize) -> Self {
        Self::new(SubstitutionDef::chacon(len)).expect("chacon is a valid substitution")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::new(serde_json::from_str(s)?)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn definition(&self) -> &SubstitutionDef {
        &self.def
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.word
    }

    pub fn render(&self, symbols: &[u8]) -> String {
        symbols.iter().map(|&s| self.def.alphabet[s as usize]).collect()
    }

    /// The generated word, or its first `len` symbols.
    pub fn prefix(&self, len: usize) -> String {
        self.render(&self.word[..len.min(self.word.len())])
    }

    /// One application of the rules to an arbitrary word.
    pub fn substitute(&self, text: &str) -> Result<String> {
        Ok(self.render(&apply(&self.rules, &self.encode(text)?)))
    }

    fn encode(&self, text: &str) -> Result<Vec<u8>> {
        text.chars()
            .map(|c| {
                self.def
                    .alphabet
                    .iter()
                    .position(|&a| a == c)
                    .map(|i| i as u8)
                    .ok_or_else(|| Error::InadmissiblePattern(text.to_string()))
            })
            .collect()
    }

    /// Occurrence counts of each symbol in the generated word.
    pub fn symbol_counts(&self) -> BTreeMap<char, usize> {
        let mut counts: BTreeMap<char, usize> = self.def.alphabet.iter().map(|&c| (c, 0)).collect();
        for &s in &self.word {
            *counts.get_mut(&self.def.alphabet[s as usize]).unwrap() += 1;
        }
        counts
    }

    /// Distinct words of length `len` occurring in the generated word, sorted.
    pub fn admissible_words(&self, len: usize) -> Vec<String> {
        let mut seen: BTreeMap<&[u8], ()> = BTreeMap::new();
        if len > 0 && len <= self.word.len() {
            for w in self.word.windows(len) {
                seen.insert(w, ());
            }
        }
        seen.keys().map(|w| self.render(w)).collect()
    }

    /// Largest distance between consecutive occurrences of each admissible
    /// word of length `len`, or `None` for a word seen only once.
    pub fn recurrence_gaps(&self, len: usize) -> BTreeMap<String, Option<u64>> {
        let mut last: HashMap<&[u8], usize> = HashMap::new();
        let mut gaps: HashMap<&[u8], Option<u64>> = HashMap::new();
        if len > 0 && len <= self.word.len() {
            for (m, w) in self.word.windows(len).enumerate() {
                let g = gaps.entry(w).or_insert(None);
                if let Some(prev) = last.insert(w, m) {
                    let d = (m - prev) as u64;
                    *g = Some(g.map_or(d, |x| x.max(d)));
                }
            }
        }
        gaps.into_iter().map(|(w, g)| (self.render(w), g)).collect()
    }

    /// Cylinder for `pattern` anchored at coordinate 0.
    pub fn cylinder(&self, pattern: &str) -> Result<Cylinder> {
        Cylinder::new(self, pattern)
    }

    /// `{m : word[m..m+|c|) = c}` over `[0, N - |c|]`.
    pub fn occurrences(&self, c: &Cylinder) -> WindowSet {
        let p = &c.symbols;
        let hi = (self.word.len() - p.len()) as i64;
        let mut out = WindowSet::new(0, hi).expect("admissible pattern fits the word");
        for (m, w) in self.word.windows(p.len()).enumerate() {
            if w == p.as_slice() {
                out.insert(m as i64);
            }
        }
        out
    }

    /// Occurrences seen from the base point `T^base x`: positions `m` with
    /// `word[base+m..]` matching, over `[-base, N - |c| - base]`.
    pub fn occurrences_from(&self, c: &Cylinder, base: i64) -> WindowSet {
        let occ = self.occurrences(c);
        WindowSet::from_members(occ.lo() - base, occ.hi() - base, occ.members().map(|m| m - base))
            .expect("nonempty window")
    }
}

fn apply(rules: &[Vec<u8>], word: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(word.len() * 2);
    for &s in word {
        out.extend_from_slice(&rules[s as usize]);
    }
    out
}

/// A nonempty finite pattern occurring in the generated word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cylinder {
    pattern: String,
    symbols: Vec<u8>,
}

impl Cylinder {
    pub fn new(sys: &SubstitutionSystem, pattern: &str) -> Result<Self> {
        let symbols = sys.encode(pattern)?;
        if symbols.is_empty()
            || symbols.len() > sys.word.len()
            || !sys.word.windows(symbols.len()).any(|w| w == symbols.as_slice())
        {
            return Err(Error::InadmissiblePattern(pattern.to_string()));
        }
        Ok(Self { pattern: pattern.to_string(), symbols })
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Bit `off..off+64` of an occurrence set, zero outside `[0, len)`.
fn bits_at(words: &[u64], len: usize, off: i64) -> u64 {
    if off >= len as i64 || off <= -64 {
        return 0;
    }
    let word = |i: i64| -> u64 {
        if i < 0 {
            0
        } else {
            words.get(i as usize).copied().unwrap_or(0)
        }
    };
    let q = off.div_euclid(64);
    let r = off.rem_euclid(64) as u32;
    let v = if r == 0 { word(q) } else { (word(q) >> r) | (word(q + 1) << (64 - r)) };
    let keep = (len as i64 - off).min(64);
    if keep >= 64 {
        v
    } else {
        v & ((1u64 << keep) - 1)
    }
}

/// Is there `m` in `[a, b]` with `m ∈ base` and `m + d_i ∈ sets_i` for all `i`?
fn joint_hit(base: &WindowSet, sets: &[(&WindowSet, i64)], a: i64, b: i64) -> Option<i64> {
    let mut m = a;
    while m <= b {
        let mut acc = bits_at(base.raw_words(), base.span(), m);
        for (s, d) in sets {
            if acc == 0 {
                break;
            }
            acc &= bits_at(s.raw_words(), s.span(), m + d);
        }
        let room = b - m + 1;
        if room < 64 {
            acc &= (1u64 << room) - 1;
        }
        if acc != 0 {
            return Some(m + acc.trailing_zeros() as i64);
        }
        m += 64;
    }
    None
}

fn to_i64(v: BigInt) -> Option<i64> {
    v.to_i64()
}

/// Membership of a windowed return-time set, with the `n` that the finite
/// word cannot decide kept apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnSet {
    pub members: WindowSet,
    pub undecided: WindowSet,
}

impl ReturnSet {
    /// Longest run of decided `n` (the first one on ties).
    pub fn decided_window(&self) -> Option<(i64, i64)> {
        let mut best: Option<(i64, i64)> = None;
        let mut start: Option<i64> = None;
        for n in self.members.lo()..=self.members.hi() + 1 {
            let decided = n <= self.members.hi() && !self.undecided.contains(n);
            match (decided, start) {
                (true, None) => start = Some(n),
                (false, Some(s)) => {
                    if best.is_none_or(|(a, b)| n - 1 - s > b - a) {
                        best = Some((s, n - 1));
                    }
                    start = None;
                }
                _ => {}
            }
        }
        best
    }

    /// Members restricted to [`decided_window`](Self::decided_window).
    pub fn decided(&self) -> Result<WindowSet> {
        let (a, b) = self
            .decided_window()
            .ok_or_else(|| Error::WindowExhausted("no n in the window is decided by the word".into()))?;
        self.members.restrict(a, b)
    }
}

/// `{n : U ∩ T^{-p_1(n)}V_1 ∩ ... ∩ T^{-p_k(n)}V_k ≠ ∅}` on the finite word.
pub fn return_set(
    sys: &SubstitutionSystem,
    u: &Cylinder,
    pairs: &[(IntegralPolynomial, Cylinder)],
    window: (i64, i64),
) -> Result<ReturnSet> {
    let (lo, hi) = window;
    let mut members = WindowSet::new(lo, hi)?;
    let mut undecided = WindowSet::new(lo, hi)?;
    let n_word = sys.len() as i64;
    let base = sys.occurrences(u);
    let occ: Vec<WindowSet> = pairs.iter().map(|(_, v)| sys.occurrences(v)).collect();
    // prefix[m] = occurrences of U strictly before m.
    let mut prefix = Vec::with_capacity(base.span() + 1);
    prefix.push(0u32);
    for m in 0..base.span() as i64 {
        prefix.push(prefix.last().unwrap() + base.contains(m) as u32);
    }
    for n in lo..=hi {
        let mut a = 0i64;
        let mut b = n_word - u.len() as i64;
        let mut shifts = Vec::with_capacity(pairs.len());
        let mut ok = true;
        for ((p, v), s) in pairs.iter().zip(&occ) {
            let Some(d) = to_i64(p.eval_i64(n)) else {
                ok = false;
                break;
            };
            a = a.max(-d);
            b = b.min(n_word - v.len() as i64 - d);
            shifts.push((s, d));
        }
        let seen = ok && a <= b && prefix[(b + 1) as usize] > prefix[a as usize];
        if !seen {
            undecided.insert(n);
        } else if joint_hit(&base, &shifts, a, b).is_some() {
            members.insert(n);
        }
    }
    Ok(ReturnSet { members, undecided })
}

/// `N(U,V)` via [`return_set`] with `p(n) = n`, classified on its decided part.
pub fn weak_mixing_probe(
    sys: &SubstitutionSystem,
    u: &Cylinder,
    v: &Cylinder,
    window: (i64, i64),
    gap: Option<u64>,
    run: Option<u64>,
) -> Result<crate::zsets::ClassificationReport> {
    let rs = return_set(sys, u, &[(IntegralPolynomial::identity(), v.clone())], window)?;
    rs.decided()?.classify(gap, run)
}

/// Rejects families that are not nonconstant, vanishing at 0, pairwise
/// distinct and with nonconstant pairwise differences.
pub fn check_nondegenerate(polys: &[IntegralPolynomial]) -> Result<()> {
    let nonconstant = |p: &IntegralPolynomial| p.degree().is_some_and(|d| d >= 1);
    for (i, p) in polys.iter().enumerate() {
        if !p.constant_term().eq(&BigInt::from(0)) || !nonconstant(p) {
            return Err(Error::NonDegenerate(format!("p_{} = {p} is not a nonzero polynomial vanishing at 0", i + 1)));
        }
        for (j, q) in polys.iter().enumerate().skip(i + 1) {
            if !nonconstant(&p.sub(q)) {
                return Err(Error::NonDegenerate(format!("p_{} - p_{} = {} is constant", i + 1, j + 1, p.sub(q))));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasePointCoverage {
    pub base: i64,
    /// Tuples of word indices hit, as a flattened `words^k` table.
    pub hit_matrix: Vec<u8>,
    pub hits: usize,
    pub coverage: f64,
    /// Value of `n` (in scan order 0, 1, -1, 2, ...) completing the product.
    pub first_full_coverage: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub polynomials: Vec<String>,
    pub word_length: usize,
    pub window: (i64, i64),
    /// Admissible words; tuple `(i_1..i_k)` sits at index `Σ i_j·|words|^(k-j)`.
    pub words: Vec<String>,
    pub tuples: usize,
    pub base_points: Vec<BasePointCoverage>,
    /// Share of base points reaching the full product.
    pub full_coverage_fraction: f64,
    pub mean_coverage: f64,
}

/// Samples base points in `[0, N/2]` and records which `k`-tuples of
/// admissible words appear at `x + p_1(n), ..., x + p_k(n)` as `n` sweeps
/// the window from 0 outward.
pub fn density_experiment(
    sys: &SubstitutionSystem,
    polys: &[IntegralPolynomial],
    word_length: usize,
    window: (i64, i64),
    samples: usize,
    seed: u64,
) -> Result<CoverageReport> {
    check_nondegenerate(polys)?;
    let (lo, hi) = window;
    if lo > hi || word_length == 0 {
        return Err(Error::EmptyWindow);
    }
    let n_word = sys.len() as i64;
    let half = n_word / 2;
    let w = word_length as i64;
    let order = scan_order(lo, hi);
    let offsets: Vec<Vec<Option<i64>>> =
        order.iter().map(|&n| polys.iter().map(|p| to_i64(p.eval_i64(n))).collect()).collect();
    let reach = offsets.iter().flatten().map(|d| d.map_or(i64::MAX, |d| d.max(0))).max().unwrap_or(0);
    if reach.saturating_add(half).saturating_add(w) > n_word {
        return Err(Error::WindowExhausted(format!(
            "displacement {reach} from base points up to {half} leaves the word of length {n_word}"
        )));
    }

    let words = sys.admissible_words(word_length);
    let index: HashMap<&[u8], usize> = {
        let mut m = HashMap::new();
        for win in sys.word.windows(word_length) {
            let next = m.len();
            m.entry(win).or_insert(next);
        }
        // re-key to the sorted order of `words`
        let sorted: HashMap<String, usize> = words.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        m.into_keys().map(|k| (k, sorted[&sys.render(k)])).collect()
    };
    let a = words.len();
    let tuples = a
        .checked_pow(polys.len() as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::PreconditionViolated("too many word tuples to track".into()))?;

    let mut rng = corpus::rng(seed);
    let mut base_points = Vec::with_capacity(samples);
    for _ in 0..samples {
        let x = rng.random_range(0..=half);
        let mut hit = vec![0u8; tuples];
        let mut hits = 0usize;
        let mut first_full = None;
        for (&n, ds) in order.iter().zip(&offsets) {
            let mut t = 0usize;
            let mut inside = true;
            for d in ds {
                let pos = d.map(|d| x + d).filter(|&p| p >= 0 && p + w <= n_word);
                let Some(pos) = pos else {
                    inside = false;
                    break;
                };
                t = t * a + index[&sys.word[pos as usize..(pos + w) as usize]];
            }
            if inside && hit[t] == 0 {
                hit[t] = 1;
                hits += 1;
                if hits == tuples {
                    first_full = Some(n);
                    break;
                }
            }
        }
        base_points.push(BasePointCoverage {
            base: x,
            hit_matrix: hit,
            hits,
            coverage: hits as f64 / tuples as f64,
            first_full_coverage: first_full,
        });
    }
    let full = base_points.iter().filter(|b| b.first_full_coverage.is_some()).count();
    let mean = base_points.iter().map(|b| b.coverage).sum::<f64>() / samples.max(1) as f64;
    Ok(CoverageReport {
        polynomials: polys.iter().map(|p| p.to_string()).collect(),
        word_length,
        window,
        words,
        tuples,
        base_points,
        full_coverage_fraction: full as f64 / samples.max(1) as f64,
        mean_coverage: mean,
    })
}

/// `0, 1, -1, 2, -2, ...` restricted to `[lo, hi]`.
fn scan_order(lo: i64, hi: i64) -> Vec<i64> {
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    if (lo..=hi).contains(&0) {
        out.push(0);
    }
    let reach = lo.unsigned_abs().max(hi.unsigned_abs()) as i64;
    for m in 1..=reach {
        for n in [m, -m] {
            if (lo..=hi).contains(&n) {
                out.push(n);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub offset: i64,
    pub pattern: String,
}

/// Intersection of shifted cylinders `{x : x[offset..] starts with pattern}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedCylinder {
    pub constraints: Vec<Constraint>,
    /// First position of the word lying in the set.
    pub witness: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedLevel {
    pub k: i64,
    pub cylinders: Vec<RefinedCylinder>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedConstruction {
    pub ks: Vec<i64>,
    pub levels: Vec<NestedLevel>,
}

/// Greedy choice of `k_0 < ... < k_ell` with `k_0 > r(0)` and
/// `k_n > k_{n-1} + r(k_{n-1})`, refining each `V_i` by the condition
/// `x[p_i(k_n) - n ..]` starts with `V_i`.
pub fn nested_return_construction(
    sys: &SubstitutionSystem,
    polys: &[IntegralPolynomial],
    cylinders: &[Cylinder],
    r: &IntegralPolynomial,
    ell: usize,
) -> Result<NestedConstruction> {
    if polys.len() != cylinders.len() || polys.is_empty() {
        return Err(Error::DimensionMismatch { expected: polys.len(), found: cylinders.len() });
    }
    check_nondegenerate(polys)?;
    let n_word = sys.len() as i64;
    let occ: Vec<WindowSet> = cylinders.iter().map(|v| sys.occurrences(v)).collect();
    let exhausted = |what: String| Error::WindowExhausted(what);
    // offsets[i] holds the anchors of the current refinement of V_i.
    let mut offsets: Vec<Vec<i64>> = vec![vec![0]; polys.len()];
    let mut ks: Vec<i64> = Vec::new();
    let mut levels = Vec::new();
    let bound_of = |x: i64| -> Option<i64> { to_i64(r.eval_i64(x)).map(|v| v.max(0)) };
    for level in 0..=ell {
        let floor = match ks.last() {
            None => bound_of(0),
            Some(&k) => bound_of(k).and_then(|v| v.checked_add(k)),
        }
        .filter(|&f| f < n_word)
        .ok_or_else(|| exhausted(format!("gap bound at level {level} exceeds the word length {n_word}")))?;
        let mut k = floor + 1;
        let found = loop {
            let mut witnesses = Vec::with_capacity(polys.len());
            let mut beyond = false;
            for (i, p) in polys.iter().enumerate() {
                let d = to_i64(p.eval_i64(k)).and_then(|v| v.checked_sub(level as i64));
                let Some(d) = d else {
                    beyond = true;
                    break;
                };
                let mut anchors = offsets[i].clone();
                anchors.push(d);
                let lo = *anchors.iter().min().unwrap();
                let hi = *anchors.iter().max().unwrap();
                if hi - lo + cylinders[i].len() as i64 > n_word {
                    beyond = true;
                    break;
                }
                let sets: Vec<(&WindowSet, i64)> = anchors[1..].iter().map(|&o| (&occ[i], o)).collect();
                let a = -lo;
                let b = n_word - cylinders[i].len() as i64 - hi;
                match joint_hit(&occ[i], &sets, a, b) {
                    Some(m) => witnesses.push((d, m)),
                    None => break,
                }
            }
            if beyond {
                return Err(exhausted(format!("no admissible refinement for k_{level} within the word")));
            }
            if witnesses.len() == polys.len() {
                break witnesses;
            }
            k += 1;
        };
        let mut cyls = Vec::with_capacity(polys.len());
        for (i, (d, m)) in found.into_iter().enumerate() {
            offsets[i].push(d);
            let constraints: Vec<Constraint> = offsets[i]
                .iter()
                .map(|&o| Constraint { offset: o, pattern: cylinders[i].pattern().to_string() })
                .collect();
            for c in &constraints {
                let at = (m + c.offset) as usize;
                assert_eq!(sys.prefix(at + c.pattern.len()).get(at..), Some(c.pattern.as_str()));
            }
            cyls.push(RefinedCylinder { constraints, witness: m });
        }
        ks.push(k);
        levels.push(NestedLevel { k, cylinders: cyls });
    }
    Ok(NestedConstruction { ks, levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SubstitutionSystem {
        SubstitutionSystem::chacon_with_length(100_000)
    }

    fn n() -> IntegralPolynomial {
        IntegralPolynomial::identity()
    }

    #[test]
    fn chacon_iterations() {
        let sys = small();
        assert_eq!(sys.substitute("0").unwrap(), "0010");
        assert_eq!(sys.substitute("0010").unwrap(), "0010001010010");
        assert!(sys.prefix(13) == "0010001010010");
    }

    #[test]
    fn chacon_frequencies() {
        let sys = SubstitutionSystem::chacon();
        assert_eq!(sys.len(), CHACON_LENGTH);
        let ones = sys.symbol_counts()[&'1'];
        assert!(ones > 0 && 2 * ones < sys.len());
    }

    #[test]
    fn occurrence_examples() {
        let sys = small();
        let zero = sys.cylinder("0").unwrap();
        assert!(sys.occurrences(&zero).contains(0));
        assert!(matches!(sys.cylinder("11"), Err(Error::InadmissiblePattern(_))));
        let mid = sys.cylinder(&sys.prefix(8)[5..8]).unwrap();
        assert!(sys.occurrences(&mid).contains(5));
        let shifted = sys.occurrences_from(&mid, 1);
        assert!(shifted.contains(4));
    }

    #[test]
    fn bad_definitions() {
        let mut def = SubstitutionDef::chacon(100);
        def.seed = '1';
        assert!(matches!(SubstitutionSystem::new(def), Err(Error::InvalidSubstitution(_))));
        let mut def = SubstitutionDef::chacon(100);
        def.rules.insert('0', "0020".into());
        assert!(SubstitutionSystem::new(def).is_err());
    }

    #[test]
    fn return_set_examples() {
        let sys = small();
        let zero = sys.cylinder("0").unwrap();
        let trivial = return_set(&sys, &zero, &[(IntegralPolynomial::zero(), zero.clone())], (0, 50)).unwrap();
        assert_eq!(trivial.members.count(), 51);
        let rs = return_set(&sys, &zero, &[(n(), zero.clone())], (-20, 200)).unwrap();
        assert!(rs.members.contains(1) && rs.members.contains(0));
        assert_eq!(rs.undecided.count(), 0);
        let occ = sys.occurrences(&zero);
        for d in -20..=200i64 {
            let diff = occ.members().any(|m| occ.contains(m + d));
            assert_eq!(rs.members.contains(d), diff, "n = {d}");
        }
    }

    #[test]
    fn undecided_when_out_of_range() {
        let sys = SubstitutionSystem::chacon_with_length(1000);
        let zero = sys.cylinder("0").unwrap();
        let rs = return_set(&sys, &zero, &[(n(), zero.clone())], (990, 1010)).unwrap();
        assert!(rs.undecided.contains(1000));
        assert!(!rs.undecided.contains(990));
        assert_eq!(rs.decided_window().map(|w| w.0), Some(990));
    }

    #[test]
    fn return_set_polynomial_family_is_syndetic() {
        let sys = small();
        let pairs: Vec<_> =
            [1i64, 2].iter().map(|&c| (n().scale(&BigInt::from(c)), sys.cylinder("00").unwrap())).collect();
        let rs = return_set(&sys, &sys.cylinder("01").unwrap(), &pairs, (0, 10_000)).unwrap();
        let v = rs.decided().unwrap().is_syndetic_at(200).unwrap();
        assert!(v.holds, "max gap {}", v.witness);
    }

    #[test]
    fn density_examples() {
        let sys = small();
        let r = density_experiment(&sys, &[n()], 3, (-2000, 2000), 5, 1).unwrap();
        assert!(r.base_points.iter().all(|b| b.coverage == 1.0));
        let twice = n().scale(&BigInt::from(2));
        assert!(matches!(density_experiment(&sys, &[n(), n()], 2, (0, 100), 1, 1), Err(Error::NonDegenerate(_))));
        let shifted = n().add(&IntegralPolynomial::constant(BigInt::from(3)));
        assert!(matches!(density_experiment(&sys, &[n(), shifted], 2, (0, 100), 1, 1), Err(Error::NonDegenerate(_))));
        assert!(matches!(
            density_experiment(&sys, &[n(), twice], 2, (0, 40_000), 1, 1),
            Err(Error::WindowExhausted(_))
        ));
    }

    #[test]
    fn nested_examples() {
        let sys = small();
        let zero = sys.cylinder("0").unwrap();
        let one = IntegralPolynomial::constant(BigInt::from(1));
        let c = nested_return_construction(&sys, &[n()], std::slice::from_ref(&zero), &one, 0).unwrap();
        assert_eq!(c.ks, vec![2]);
        let c = nested_return_construction(&sys, &[n()], std::slice::from_ref(&zero), &one, 1).unwrap();
        assert!(c.ks[0] < c.ks[1]);
        assert_eq!(c.levels[1].cylinders[0].constraints.len(), 3);
        let huge = IntegralPolynomial::constant(BigInt::from(10_000_000));
        assert!(matches!(nested_return_construction(&sys, &[n()], &[zero], &huge, 0), Err(Error::WindowExhausted(_))));
    }

    #[test]
    fn bits_at_matches_membership() {
        let s = WindowSet::from_members(0, 200, [0, 3, 64, 65, 127, 128, 199, 200]).unwrap();
        for off in -70..210i64 {
            let v = bits_at(s.raw_words(), s.span(), off);
            for j in 0..64 {
                assert_eq!(v >> j & 1 == 1, s.contains(off + j), "off {off} bit {j}");
            }
        }
    }
}
