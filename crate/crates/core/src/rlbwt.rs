//! Queryable run-length BWT: LF, symbol access, neighbouring runs,
//! thresholds and SA recovery at run boundaries.

use crate::error::{Error, Result};
use crate::suffix::{Run, RunSegmentation, SamplePlan, Threshold, ThresholdTable};

/// Per-symbol view of the runs of one symbol.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct SymbolRuns {
    /// Global run indices, ascending.
    runs: Vec<usize>,
    /// `thresholds[j - 1]` sits between `runs[j - 1]` and `runs[j]`.
    thresholds: Vec<ThresholdEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdEntry {
    pub t: usize,
    pub lce_before: Option<usize>,
    pub lce_after: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlbwtIndex {
    n: usize,
    run_starts: Vec<usize>,
    run_symbols: Vec<u8>,
    /// Occurrences of the run's symbol in all earlier runs.
    rank_before: Vec<usize>,
    /// `c_array[c]` counts text symbols smaller than `c`.
    c_array: Vec<usize>,
    by_symbol: Vec<SymbolRuns>,
    augmented: bool,
    samples: SamplePlan,
}

/// Which run boundary a mismatch jumps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// End of the nearest earlier run.
    Before,
    /// Start of the nearest later run.
    After,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Jump {
    pub offset: usize,
    pub side: Side,
    /// Stored LCE between the threshold row on this side and `offset`,
    /// present only for augmented indexes with runs on both sides.
    pub lce_hint: Option<usize>,
}

impl RlbwtIndex {
    pub fn new(
        n: usize,
        runs: &RunSegmentation,
        thresholds: &ThresholdTable,
        samples: SamplePlan,
    ) -> Result<Self> {
        let entries: Vec<ThresholdEntry> = thresholds
            .entries
            .iter()
            .map(|t: &Threshold| ThresholdEntry {
                t: t.t,
                lce_before: t.lce_before,
                lce_after: t.lce_after,
            })
            .collect();
        let starts = runs.runs.iter().map(|r| r.start).collect();
        let symbols = runs.runs.iter().map(|r| r.symbol).collect();
        Self::from_parts(n, starts, symbols, entries, thresholds.augmented, samples)
    }

    /// Rebuilds the derived tables from the serialized parts. Thresholds are
    /// expected in symbol order, then run order.
    pub fn from_parts(
        n: usize,
        run_starts: Vec<usize>,
        run_symbols: Vec<u8>,
        thresholds: Vec<ThresholdEntry>,
        augmented: bool,
        samples: SamplePlan,
    ) -> Result<Self> {
        let r = run_starts.len();
        if r == 0 || r != run_symbols.len() || run_starts[0] != 0 {
            return Err(Error::Format("malformed run table".into()));
        }
        if run_starts.windows(2).any(|w| w[0] >= w[1]) || run_starts[r - 1] >= n {
            return Err(Error::Format("run starts not increasing".into()));
        }
        if run_symbols.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Format("adjacent runs share a symbol".into()));
        }
        let run_len = |k: usize| run_starts.get(k + 1).copied().unwrap_or(n) - run_starts[k];
        let mut counts = vec![0usize; 256];
        let mut rank_before = Vec::with_capacity(r);
        let mut by_symbol = vec![SymbolRuns::default(); 256];
        for (k, &sym) in run_symbols.iter().enumerate() {
            let c = sym as usize;
            rank_before.push(counts[c]);
            counts[c] += run_len(k);
            by_symbol[c].runs.push(k);
        }
        let mut c_array = vec![0usize; 257];
        for c in 0..256 {
            c_array[c + 1] = c_array[c] + counts[c];
        }
        let mut it = thresholds.into_iter();
        for sym in by_symbol.iter_mut() {
            for j in 1..sym.runs.len() {
                let e = it
                    .next()
                    .ok_or_else(|| Error::Format("too few thresholds".into()))?;
                let e1 = run_starts[sym.runs[j - 1]] + run_len(sym.runs[j - 1]) - 1;
                let s2 = run_starts[sym.runs[j]];
                if !(e1 < e.t && e.t <= s2) {
                    return Err(Error::Format(format!(
                        "threshold {} outside ({e1}, {s2}]",
                        e.t
                    )));
                }
                if augmented != (e.lce_before.is_some() && e.lce_after.is_some()) {
                    return Err(Error::Format(
                        "augmentation flag disagrees with thresholds".into(),
                    ));
                }
                sym.thresholds.push(e);
            }
        }
        if it.next().is_some() {
            return Err(Error::Format("too many thresholds".into()));
        }
        if samples.s == 0 {
            return Err(Error::InvalidSubsampleRate);
        }
        for &(off, value) in &samples.retained {
            if off >= n || value >= n {
                return Err(Error::Format("sample out of range".into()));
            }
        }
        Ok(RlbwtIndex {
            n,
            run_starts,
            run_symbols,
            rank_before,
            c_array,
            by_symbol,
            augmented,
            samples,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.run_starts.len()
    }

    pub fn augmented(&self) -> bool {
        self.augmented
    }

    pub fn samples(&self) -> &SamplePlan {
        &self.samples
    }

    pub fn run_starts(&self) -> &[usize] {
        &self.run_starts
    }

    pub fn run_symbols(&self) -> &[u8] {
        &self.run_symbols
    }

    pub fn c_array(&self) -> &[usize] {
        &self.c_array
    }

    /// Thresholds in symbol order, then run order.
    pub fn thresholds(&self) -> impl Iterator<Item = &ThresholdEntry> {
        self.by_symbol.iter().flat_map(|s| s.thresholds.iter())
    }

    pub fn occurs(&self, c: u8) -> bool {
        !self.by_symbol[c as usize].runs.is_empty()
    }

    pub fn run(&self, k: usize) -> Run {
        let start = self.run_starts[k];
        let end = self.run_starts.get(k + 1).copied().unwrap_or(self.n) - 1;
        Run {
            start,
            end,
            symbol: self.run_symbols[k],
        }
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::range("BWT offset", q, self.n));
        }
        Ok(())
    }

    /// Index of the run containing `q`.
    pub fn run_of(&self, q: usize) -> Result<usize> {
        self.check(q)?;
        Ok(self.run_starts.partition_point(|&s| s <= q) - 1)
    }

    pub fn symbol_at(&self, q: usize) -> Result<u8> {
        Ok(self.run_symbols[self.run_of(q)?])
    }

    pub fn lf_step(&self, q: usize) -> Result<usize> {
        let k = self.run_of(q)?;
        let c = self.run_symbols[k] as usize;
        Ok(self.c_array[c] + self.rank_before[k] + (q - self.run_starts[k]))
    }

    /// End of the nearest `c`-run before `q` and start of the nearest
    /// `c`-run after it. `q` must not lie in a run of `c`.
    pub fn neighbor_runs(&self, q: usize, c: u8) -> Result<(Option<usize>, Option<usize>)> {
        let k = self.run_of(q)?;
        let runs = &self.by_symbol[c as usize].runs;
        let j = runs.partition_point(|&x| x < k);
        if runs.get(j) == Some(&k) {
            return Err(Error::Corrupt(format!(
                "neighbor_runs called inside a run of {c}"
            )));
        }
        let e1 = j.checked_sub(1).map(|p| self.run(runs[p]).end);
        let s2 = runs.get(j).map(|&x| self.run_starts[x]);
        Ok((e1, s2))
    }

    /// Chooses the boundary of a `c`-run whose suffix shares the longer
    /// prefix with the suffix at row `q`.
    pub fn pick_side(&self, q: usize, c: u8) -> Result<Jump> {
        let k = self.run_of(q)?;
        let sym = &self.by_symbol[c as usize];
        let j = sym.runs.partition_point(|&x| x < k);
        if sym.runs.get(j) == Some(&k) {
            return Err(Error::Corrupt(format!(
                "pick_side called inside a run of {c}"
            )));
        }
        match (j.checked_sub(1), sym.runs.get(j)) {
            (None, None) => Err(Error::SymbolAbsent),
            (Some(p), None) => Ok(Jump {
                offset: self.run(sym.runs[p]).end,
                side: Side::Before,
                lce_hint: None,
            }),
            (None, Some(&next)) => Ok(Jump {
                offset: self.run_starts[next],
                side: Side::After,
                lce_hint: None,
            }),
            (Some(p), Some(&next)) => {
                let th = sym.thresholds[j - 1];
                if q < th.t {
                    Ok(Jump {
                        offset: self.run(sym.runs[p]).end,
                        side: Side::Before,
                        lce_hint: th.lce_before,
                    })
                } else {
                    Ok(Jump {
                        offset: self.run_starts[next],
                        side: Side::After,
                        lce_hint: th.lce_after,
                    })
                }
            }
        }
    }

    /// Threshold choice given explicit neighbours, as returned by
    /// [`neighbor_runs`](Self::neighbor_runs).
    pub fn choose(&self, q: usize, c: u8, e1: Option<usize>, s2: Option<usize>) -> Result<usize> {
        match (e1, s2) {
            (None, None) => Err(Error::SymbolAbsent),
            (Some(e), None) => Ok(e),
            (None, Some(s)) => Ok(s),
            (Some(_), Some(_)) => self.pick_side(q, c).map(|j| j.offset),
        }
    }

    /// SA value at a run boundary, following LF from non-retained
    /// boundaries until a retained one turns up. Returns the value and the
    /// number of LF-steps taken.
    pub fn sa_at(&self, boundary: usize) -> Result<(usize, usize)> {
        self.check(boundary)?;
        let n = self.n;
        let mut q = boundary;
        for steps in 0..self.samples.s {
            if let Some(v) = self.samples.get(q) {
                return Ok(((v + 1 + steps) % n, steps));
            }
            q = self.lf_step(q)?;
        }
        Err(Error::Corrupt(format!(
            "no retained sample within {} LF-steps of offset {boundary}",
            self.samples.s
        )))
    }
}
