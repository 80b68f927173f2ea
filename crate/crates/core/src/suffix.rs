//! Suffix array, BWT, LCP array, BWT runs, thresholds and the SA sample
//! plan. Everything here is construction-time only.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SuffixStructures {
    pub sa: Vec<usize>,
    pub bwt: Vec<u8>,
    pub lcp: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub start: usize,
    /// Inclusive.
    pub end: usize,
    pub symbol: u8,
}

impl Run {
    #[allow(clippy::len_without_is_empty)] // runs are never empty
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSegmentation {
    pub runs: Vec<Run>,
}

impl RunSegmentation {
    pub fn r(&self) -> usize {
        self.runs.len()
    }
}

/// Threshold between two consecutive runs of `symbol`: the earlier one
/// ends at `e1`, the later one (the `ordinal`-th run of `symbol`, 0-based)
/// starts at `s2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    pub symbol: u8,
    pub ordinal: usize,
    pub e1: usize,
    pub s2: usize,
    pub t: usize,
    /// LCE(SA[t-1], SA[e1]).
    pub lce_before: Option<usize>,
    /// LCE(SA[t], SA[s2]).
    pub lce_after: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdTable {
    pub entries: Vec<Threshold>,
    pub augmented: bool,
}

/// Retained SA samples at run boundaries, keyed by BWT offset. A stored
/// value is `SA[offset] - 1 (mod n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePlan {
    pub s: usize,
    /// Sorted by offset.
    pub retained: Vec<(usize, usize)>,
}

impl SamplePlan {
    pub fn get(&self, offset: usize) -> Option<usize> {
        self.retained
            .binary_search_by_key(&offset, |&(o, _)| o)
            .ok()
            .map(|k| self.retained[k].1)
    }

    pub fn len(&self) -> usize {
        self.retained.len()
    }

    pub fn is_empty(&self) -> bool {
        self.retained.is_empty()
    }
}

pub fn build_suffix_structures(symbols: &[u8]) -> SuffixStructures {
    let sa = suffix_array(symbols);
    let n = symbols.len();
    let bwt = sa.iter().map(|&p| symbols[(p + n - 1) % n]).collect();
    let lcp = kasai(symbols, &sa);
    SuffixStructures { sa, bwt, lcp }
}

/// Prefix doubling with a stable two-pass counting sort per round.
fn suffix_array(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sa: Vec<usize> = (0..n).collect();
    sa.sort_by_key(|&i| s[i]);
    let mut rank = vec![0usize; n];
    for k in 1..n {
        rank[sa[k]] = rank[sa[k - 1]] + usize::from(s[sa[k]] != s[sa[k - 1]]);
    }
    let mut tmp = vec![0usize; n];
    let mut buf = vec![0usize; n];
    let mut h = 1;
    while rank[sa[n - 1]] < n - 1 {
        // second key: rank[i + h], or "smallest" when past the end
        let key2 = |i: usize| if i + h < n { rank[i + h] + 1 } else { 0 };
        let classes = rank[sa[n - 1]] + 2;
        counting_sort(&mut sa, &mut buf, classes, key2);
        counting_sort(&mut sa, &mut buf, classes, |i| rank[i]);
        tmp[sa[0]] = 0;
        for k in 1..n {
            let (a, b) = (sa[k - 1], sa[k]);
            let differ = rank[a] != rank[b] || key2(a) != key2(b);
            tmp[b] = tmp[a] + usize::from(differ);
        }
        std::mem::swap(&mut rank, &mut tmp);
        h *= 2;
    }
    sa
}

fn counting_sort(
    sa: &mut Vec<usize>,
    buf: &mut Vec<usize>,
    classes: usize,
    key: impl Fn(usize) -> usize,
) {
    let mut count = vec![0usize; classes + 1];
    for &i in sa.iter() {
        count[key(i) + 1] += 1;
    }
    for c in 1..count.len() {
        count[c] += count[c - 1];
    }
    for &i in sa.iter() {
        let k = key(i);
        buf[count[k]] = i;
        count[k] += 1;
    }
    std::mem::swap(sa, buf);
}

fn kasai(s: &[u8], sa: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut inv = vec![0usize; n];
    for (j, &p) in sa.iter().enumerate() {
        inv[p] = j;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for p in 0..n {
        let j = inv[p];
        if j == 0 {
            h = 0;
            continue;
        }
        let q = sa[j - 1];
        while p + h < n && q + h < n && s[p + h] == s[q + h] {
            h += 1;
        }
        lcp[j] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

pub fn segment_runs(bwt: &[u8]) -> RunSegmentation {
    let mut runs: Vec<Run> = Vec::new();
    for (i, &c) in bwt.iter().enumerate() {
        match runs.last_mut() {
            Some(run) if run.symbol == c => run.end = i,
            _ => runs.push(Run {
                start: i,
                end: i,
                symbol: c,
            }),
        }
    }
    RunSegmentation { runs }
}

/// One entry per pair of consecutive same-symbol runs; `t` is the leftmost
/// minimum of `lcp[e1+1..=s2]`. Entries are ordered by symbol, then by the
/// later run's ordinal.
pub fn compute_thresholds(
    st: &SuffixStructures,
    runs: &RunSegmentation,
    augment: bool,
) -> ThresholdTable {
    let n = st.sa.len();
    let mut by_symbol: Vec<Vec<&Run>> = vec![Vec::new(); 256];
    for run in &runs.runs {
        by_symbol[run.symbol as usize].push(run);
    }
    let mut entries = Vec::new();
    for (symbol, list) in by_symbol.iter().enumerate() {
        for (ordinal, pair) in list.windows(2).enumerate() {
            let (e1, s2) = (pair[0].end, pair[1].start);
            let range = &st.lcp[e1 + 1..=s2];
            let mut t = e1 + 1;
            let mut min = range[0];
            for (k, &v) in range.iter().enumerate().skip(1) {
                if v < min {
                    min = v;
                    t = e1 + 1 + k;
                }
            }
            let (lce_before, lce_after) = if augment {
                // LCE between two suffix-array rows is the minimum LCP strictly
                // after the upper row up to the lower one.
                let before = if t - 1 == e1 {
                    n - st.sa[e1]
                } else {
                    st.lcp[e1 + 1..t].iter().copied().min().unwrap()
                };
                let after = if t == s2 {
                    n - st.sa[s2]
                } else {
                    st.lcp[t + 1..=s2].iter().copied().min().unwrap()
                };
                (Some(before), Some(after))
            } else {
                (None, None)
            };
            entries.push(Threshold {
                symbol: symbol as u8,
                ordinal: ordinal + 1,
                e1,
                s2,
                t,
                lce_before,
                lce_after,
            });
        }
    }
    ThresholdTable {
        entries,
        augmented: augment,
    }
}

/// Every run start and end, ascending.
pub fn boundary_offsets(runs: &RunSegmentation) -> Vec<usize> {
    let mut out = Vec::with_capacity(2 * runs.r());
    for run in &runs.runs {
        out.push(run.start);
        if run.end != run.start {
            out.push(run.end);
        }
    }
    out
}

/// Greedy subsampling: visit boundary sample values in ascending order and
/// keep a value only if no kept value lies within the `s` values ending at
/// it. Every boundary then has a kept value among `SA[i]-1 ..= SA[i]-s`,
/// and kept values are at least `s` apart.
pub fn make_sample_plan(
    st: &SuffixStructures,
    runs: &RunSegmentation,
    s: usize,
) -> Result<SamplePlan> {
    if s == 0 {
        return Err(Error::InvalidSubsampleRate);
    }
    let n = st.sa.len();
    let mut candidates: Vec<(usize, usize)> = boundary_offsets(runs)
        .into_iter()
        .map(|off| ((st.sa[off] + n - 1) % n, off))
        .collect();
    candidates.sort_unstable();
    let mut retained = Vec::new();
    let mut last_kept: Option<usize> = None;
    for (value, off) in candidates {
        let covered = matches!(last_kept, Some(k) if value - k < s);
        if !covered {
            retained.push((off, value));
            last_kept = Some(value);
        }
    }
    retained.sort_unstable();
    Ok(SamplePlan { s, retained })
}
