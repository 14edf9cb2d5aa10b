//! Finite windows of `Z` and windowed recurrence classifiers.
//!
//! Every verdict is a finite approximation of an asymptotic notion and is
//! parameterized by a gap bound `G` and/or a run length `L`. Where a margin
//! is used it is excluded from both ends of the window.

use std::io::{Read, Write};

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset of the window `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSet {
    lo: i64,
    hi: i64,
    bits: BitVec<u64, Lsb0>,
}

/// Outcome of a windowed test with the quantity that decided it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    /// Largest gap for gap tests, longest run or span for run tests.
    pub witness: u64,
    /// Where the witness was found, when it is an interval.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<(i64, i64)>,
}

impl WindowSet {
    /// Empty subset of `[lo, hi]`.
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyWindow);
        }
        let len = usize::try_from(hi - lo + 1).map_err(|_| Error::EmptyWindow)?;
        Ok(Self { lo, hi, bits: bitvec![u64, Lsb0; 0; len] })
    }

    pub fn full(lo: i64, hi: i64) -> Result<Self> {
        let mut s = Self::new(lo, hi)?;
        s.bits.fill(true);
        Ok(s)
    }

    /// Members outside the window are ignored.
    pub fn from_members(lo: i64, hi: i64, members: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut s = Self::new(lo, hi)?;
        for n in members {
            if (lo..=hi).contains(&n) {
                s.insert(n);
            }
        }
        Ok(s)
    }

    pub fn from_predicate(lo: i64, hi: i64, mut pred: impl FnMut(i64) -> bool) -> Result<Self> {
        let mut s = Self::new(lo, hi)?;
        for n in lo..=hi {
            if pred(n) {
                s.insert(n);
            }
        }
        Ok(s)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Number of integers in the window.
    pub fn span(&self) -> usize {
        self.bits.len()
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn contains(&self, n: i64) -> bool {
        (self.lo..=self.hi).contains(&n) && self.bits[(n - self.lo) as usize]
    }

    /// Panics if `n` lies outside the window.
    pub fn insert(&mut self, n: i64) {
        assert!((self.lo..=self.hi).contains(&n), "{n} outside [{}, {}]", self.lo, self.hi);
        self.bits.set((n - self.lo) as usize, true);
    }

    /// Backing words; bit `i` is `lo + i`. Bits past the window are unspecified.
    pub(crate) fn raw_words(&self) -> &[u64] {
        self.bits.as_raw_slice()
    }

    pub fn members(&self) -> impl Iterator<Item = i64> + '_ {
        self.bits.iter_ones().map(move |i| self.lo + i as i64)
    }

    /// Intersection with the window `[lo, hi]`, which must lie inside.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyWindow);
        }
        if lo < self.lo || hi > self.hi {
            return Err(Error::WindowMismatch(self.lo, self.hi, lo, hi));
        }
        let a = (lo - self.lo) as usize;
        let b = (hi - self.lo) as usize;
        Ok(Self { lo, hi, bits: self.bits[a..=b].to_bitvec() })
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if (self.lo, self.hi) != (other.lo, other.hi) {
            return Err(Error::WindowMismatch(self.lo, self.hi, other.lo, other.hi));
        }
        let mut bits = self.bits.clone();
        bits &= &other.bits;
        Ok(Self { lo: self.lo, hi: self.hi, bits })
    }

    /// Index range `[a, b)` left after removing `margin` from both ends.
    fn trimmed(&self, margin: u64) -> Result<(usize, usize)> {
        let m = usize::try_from(margin).unwrap_or(usize::MAX);
        let len = self.bits.len();
        if m.saturating_mul(2) >= len {
            return Err(Error::EmptyWindow);
        }
        Ok((m, len - m))
    }

    /// `{n : n, ..., n+L-1 all in S}`.
    pub fn run_starts(&self, run: u64) -> Self {
        let run = run.max(1) as usize;
        let len = self.bits.len();
        let mut out = bitvec![u64, Lsb0; 0; len];
        let mut streak = 0usize;
        for i in (0..len).rev() {
            streak = if self.bits[i] { streak + 1 } else { 0 };
            if streak >= run {
                out.set(i, true);
            }
        }
        Self { lo: self.lo, hi: self.hi, bits: out }
    }

    /// Every length-`gap` interval inside `[lo+G, hi-G]` meets the set.
    ///
    /// The witness is the largest gap found: one more than the longest run
    /// of non-members.
    pub fn is_syndetic_at(&self, gap: u64) -> Result<Verdict> {
        let (a, b) = self.trimmed(gap)?;
        let (g, at) = max_gap(&self.bits[a..b]);
        Ok(Verdict {
            holds: g <= gap,
            witness: g,
            at: at.map(|(x, y)| (self.lo + (a + x) as i64, self.lo + (a + y) as i64)),
        })
    }

    /// Contains `run` consecutive integers somewhere in the window.
    pub fn is_thick_at(&self, run: u64) -> Result<Verdict> {
        let (r, at) = longest_run(&self.bits);
        Ok(Verdict { holds: r >= run, witness: r, at: at.map(|(x, y)| (self.lo + x as i64, self.lo + y as i64)) })
    }

    /// The starts of length-`run` runs form a `gap`-syndetic set on the
    /// window trimmed by `max(gap, run)`.
    pub fn is_thickly_syndetic_at(&self, run: u64, gap: u64) -> Result<Verdict> {
        let starts = self.run_starts(run);
        let (a, b) = self.trimmed(gap.max(run))?;
        let (g, at) = max_gap(&starts.bits[a..b]);
        Ok(Verdict {
            holds: g <= gap,
            witness: g,
            at: at.map(|(x, y)| (self.lo + (a + x) as i64, self.lo + (a + y) as i64)),
        })
    }

    /// Some interval of length at least `span` has every length-`gap`
    /// subinterval meeting the set. The witness is the longest such length.
    pub fn is_piecewise_syndetic_at(&self, gap: u64, span: u64) -> Result<Verdict> {
        let g = usize::try_from(gap.max(1)).unwrap_or(usize::MAX);
        let len = self.bits.len();
        if g > len {
            return Ok(Verdict { holds: false, witness: 0, at: None });
        }
        // hit[i] = the set meets [i, i+g-1].
        let mut hit = bitvec![u64, Lsb0; 0; len - g + 1];
        let mut inside = self.bits[..g].count_ones();
        for i in 0..=len - g {
            if i > 0 {
                inside -= self.bits[i - 1] as usize;
                inside += self.bits[i + g - 1] as usize;
            }
            hit.set(i, inside > 0);
        }
        let (r, at) = longest_run(&hit);
        let best = if r == 0 { 0 } else { r + gap - 1 };
        Ok(Verdict {
            holds: best >= span,
            witness: best,
            at: at.map(|(x, y)| (self.lo + x as i64, self.lo + (y + g - 1) as i64)),
        })
    }

    /// Largest gap of the set over the whole window.
    pub fn max_gap(&self) -> u64 {
        max_gap(&self.bits).0
    }

    pub fn longest_run(&self) -> u64 {
        longest_run(&self.bits).0
    }

    /// Summary statistics plus verdicts at the requested parameters.
    pub fn classify(&self, gap: Option<u64>, run: Option<u64>) -> Result<ClassificationReport> {
        let mut run_start_gaps = Vec::new();
        if let Some(l) = run {
            for len in 1..=l {
                let starts = self.run_starts(len);
                let gap = self.trimmed(len).map(|(a, b)| max_gap(&starts.bits[a..b]).0).ok();
                run_start_gaps.push(RunStartGap { run: len, max_gap: gap });
            }
        }
        let syndetic = gap.map(|g| self.is_syndetic_at(g)).transpose()?;
        let thick = run.map(|l| self.is_thick_at(l)).transpose()?;
        let (thickly_syndetic, piecewise_syndetic) = match (gap, run) {
            (Some(g), Some(l)) => {
                (Some(self.is_thickly_syndetic_at(l, g)?), Some(self.is_piecewise_syndetic_at(g, l)?))
            }
            _ => (None, None),
        };
        Ok(ClassificationReport {
            window: (self.lo, self.hi),
            members: self.count(),
            max_gap: self.max_gap(),
            longest_run: self.longest_run(),
            run_start_gaps,
            gap,
            run,
            syndetic,
            thick,
            thickly_syndetic,
            piecewise_syndetic,
        })
    }

    /// Writes rows `n,member` for every `n` in the window.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "member"])?;
        for (i, b) in self.bits.iter().enumerate() {
            w.write_record([(self.lo + i as i64).to_string(), (*b as u8).to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads rows `n,member`; the rows must cover a contiguous window in
    /// increasing order.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            n: i64,
            member: u8,
        }
        let mut rows = Vec::new();
        for (i, r) in csv::Reader::from_reader(input).deserialize::<Row>().enumerate() {
            let row = r?;
            if row.member > 1 {
                return Err(Error::Parse { column: 2, message: format!("row {}: member must be 0 or 1", i + 2) });
            }
            rows.push(row);
        }
        let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
            return Err(Error::EmptyWindow);
        };
        let (lo, hi) = (first.n, last.n);
        let mut s = Self::new(lo, hi)?;
        for (i, row) in rows.iter().enumerate() {
            if row.n != lo + i as i64 {
                return Err(Error::Parse {
                    column: 1,
                    message: format!("row {}: expected n = {}, found {}", i + 2, lo + i as i64, row.n),
                });
            }
            if row.member == 1 {
                s.insert(row.n);
            }
        }
        if s.span() != rows.len() {
            return Err(Error::WindowMismatch(lo, hi, lo, lo + rows.len() as i64 - 1));
        }
        Ok(s)
    }
}

/// One more than the longest run of zeros, and where that run lies.
fn max_gap(bits: &BitSlice<u64, Lsb0>) -> (u64, Option<(usize, usize)>) {
    let mut best = 0usize;
    let mut at = None;
    let mut start = 0usize;
    for one in bits.iter_ones().chain(std::iter::once(bits.len())) {
        let run = one - start;
        if run > best {
            best = run;
            at = Some((start, one - 1));
        }
        start = one + 1;
    }
    (best as u64 + 1, at)
}

/// Longest run of ones and where it lies.
fn longest_run(bits: &BitSlice<u64, Lsb0>) -> (u64, Option<(usize, usize)>) {
    let mut best = 0usize;
    let mut at = None;
    let mut start = 0usize;
    for zero in bits.iter_zeros().chain(std::iter::once(bits.len())) {
        let run = zero - start;
        if run > best {
            best = run;
            at = Some((start, zero - 1));
        }
        start = zero + 1;
    }
    (best as u64, at)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStartGap {
    pub run: u64,
    /// `None` when the window is too short for the margin.
    pub max_gap: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub window: (i64, i64),
    pub members: usize,
    pub max_gap: u64,
    pub longest_run: u64,
    pub run_start_gaps: Vec<RunStartGap>,
    pub gap: Option<u64>,
    pub run: Option<u64>,
    pub syndetic: Option<Verdict>,
    pub thick: Option<Verdict>,
    pub thickly_syndetic: Option<Verdict>,
    pub piecewise_syndetic: Option<Verdict>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evens(lo: i64, hi: i64) -> WindowSet {
        WindowSet::from_predicate(lo, hi, |n| n % 2 == 0).unwrap()
    }

    #[test]
    fn syndetic_examples() {
        assert!(evens(0, 100).is_syndetic_at(2).unwrap().holds);
        let single = WindowSet::from_members(0, 100, [0]).unwrap();
        let v = single.is_syndetic_at(5).unwrap();
        assert!(!v.holds && v.witness > 5);
        assert!(WindowSet::full(0, 100).unwrap().is_syndetic_at(1).unwrap().holds);
        assert!(matches!(evens(0, 9).is_syndetic_at(5), Err(Error::EmptyWindow)));
    }

    #[test]
    fn thick_examples() {
        let s = WindowSet::from_members(0, 100, (10..=20).chain([30])).unwrap();
        let v = s.is_thick_at(10).unwrap();
        assert!(v.holds);
        assert_eq!(v.at, Some((10, 20)));
        assert!(!evens(0, 100).is_thick_at(2).unwrap().holds);
        assert!(WindowSet::full(0, 100).unwrap().is_thick_at(101).unwrap().holds);
    }

    #[test]
    fn thickly_syndetic_examples() {
        assert!(WindowSet::full(0, 200).unwrap().is_thickly_syndetic_at(7, 3).unwrap().holds);
        assert!(!evens(0, 200).is_thickly_syndetic_at(2, 50).unwrap().holds);
        let blocks = WindowSet::from_predicate(0, 1000, |n| n.rem_euclid(10) < 5).unwrap();
        let v = blocks.is_thickly_syndetic_at(3, 10).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness, 8);
    }

    #[test]
    fn piecewise_examples() {
        let s = WindowSet::from_predicate(0, 10_000, |n| n <= 50 && n % 2 == 0).unwrap();
        assert!(s.is_piecewise_syndetic_at(2, 40).unwrap().holds);
        let powers = WindowSet::from_members(0, 10_000, (0..14).map(|k| 1i64 << k)).unwrap();
        assert!(!powers.is_piecewise_syndetic_at(3, 20).unwrap().holds);
        let full = WindowSet::full(0, 10_000).unwrap();
        assert!(full.is_piecewise_syndetic_at(1, 10_001).unwrap().holds);
    }

    #[test]
    fn intersect_examples() {
        let s = evens(-50, 50);
        assert_eq!(s.intersect(&WindowSet::full(-50, 50).unwrap()).unwrap(), s);
        let threes = WindowSet::from_predicate(-50, 50, |n| n % 3 == 0).unwrap();
        let sixes = WindowSet::from_predicate(-50, 50, |n| n % 6 == 0).unwrap();
        assert_eq!(s.intersect(&threes).unwrap(), sixes);
        assert!(matches!(s.intersect(&evens(0, 50)), Err(Error::WindowMismatch(..))));
    }

    #[test]
    fn csv_round_trip() {
        let s = WindowSet::from_members(-3, 4, [-3, 0, 2]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,member\n-3,1\n-2,0\n"));
        assert_eq!(WindowSet::read_csv(buf.as_slice()).unwrap(), s);
        let bad = "n,member\n0,1\n2,0\n";
        assert!(matches!(WindowSet::read_csv(bad.as_bytes()), Err(Error::Parse { .. })));
    }

    #[test]
    fn report_fields() {
        let blocks = WindowSet::from_predicate(0, 1000, |n| n.rem_euclid(10) < 5).unwrap();
        let r = blocks.classify(Some(10), Some(3)).unwrap();
        assert_eq!(r.longest_run, 5);
        assert_eq!(r.max_gap, 6);
        assert_eq!(r.run_start_gaps.len(), 3);
        assert_eq!(r.run_start_gaps[2].max_gap, Some(8));
        assert!(r.thickly_syndetic.unwrap().holds);
        assert!(r.piecewise_syndetic.unwrap().holds);
    }
}
