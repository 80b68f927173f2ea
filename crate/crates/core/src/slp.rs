//! Height-balanced straight-line program over the text, annotated with
//! expansion lengths and Karp-Rabin fingerprints.
//!
//! Built by pairing rounds: each round pairs adjacent symbols left to right
//! (an odd trailing symbol is carried up unpaired) and hash-conses the
//! pairs, so equal pairs share a rule. Rule ids are topologically ordered:
//! children always precede parents.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hash::{Fingerprint, HashConfig, PatternHashes};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Terminal(u8),
    Pair(u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub kind: RuleKind,
    pub len: usize,
    pub hash: u64,
    /// base^len mod p.
    pub pow: u64,
}

impl Rule {
    fn fingerprint(&self) -> Fingerprint {
        Fingerprint {
            hash: self.hash,
            pow: self.pow,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    rules: Vec<Rule>,
    root: u32,
    config: HashConfig,
    height: usize,
}

/// Stack of parse-tree nodes whose concatenated expansions spell the text
/// from some offset to the end. The top of the stack comes first.
struct Cursor<'a> {
    g: &'a Grammar,
    stack: Vec<u32>,
}

impl<'a> Cursor<'a> {
    fn at(g: &'a Grammar, offset: usize) -> Self {
        let mut stack = Vec::with_capacity(g.height + 1);
        if offset < g.n() {
            let mut node = g.root;
            let mut off = offset;
            loop {
                if off == 0 {
                    stack.push(node);
                    break;
                }
                match g.rules[node as usize].kind {
                    RuleKind::Pair(l, r) => {
                        let ll = g.rules[l as usize].len;
                        if off < ll {
                            stack.push(r);
                            node = l;
                        } else {
                            off -= ll;
                            node = r;
                        }
                    }
                    RuleKind::Terminal(_) => unreachable!("offset inside a terminal"),
                }
            }
        }
        Cursor { g, stack }
    }

    fn peek(&self) -> Option<u32> {
        self.stack.last().copied()
    }

    fn skip(&mut self) {
        self.stack.pop();
    }

    fn expand(&mut self) {
        let top = self.stack.pop().expect("expand on empty cursor");
        if let RuleKind::Pair(l, r) = self.g.rules[top as usize].kind {
            self.stack.push(r);
            self.stack.push(l);
        }
    }

    fn next_symbol(&mut self) -> Option<u8> {
        loop {
            let top = self.peek()?;
            match self.g.rules[top as usize].kind {
                RuleKind::Terminal(c) => {
                    self.stack.pop();
                    return Some(c);
                }
                RuleKind::Pair(..) => self.expand(),
            }
        }
    }
}

impl Grammar {
    pub fn build(symbols: &[u8], config: HashConfig) -> Self {
        assert!(!symbols.is_empty(), "grammar over an empty text");
        let mut g = Grammar {
            rules: Vec::new(),
            root: 0,
            config,
            height: 0,
        };
        let mut heights: Vec<usize> = Vec::new();
        let mut terminals = [u32::MAX; 256];
        let mut seq: Vec<u32> = symbols
            .iter()
            .map(|&c| {
                if terminals[c as usize] == u32::MAX {
                    terminals[c as usize] = g.rules.len() as u32;
                    g.rules.push(Rule {
                        kind: RuleKind::Terminal(c),
                        len: 1,
                        hash: c as u64,
                        pow: config.base,
                    });
                    heights.push(1);
                }
                terminals[c as usize]
            })
            .collect();
        let mut pairs: HashMap<(u32, u32), u32> = HashMap::new();
        while seq.len() > 1 {
            let mut next = Vec::with_capacity(seq.len().div_ceil(2));
            for chunk in seq.chunks(2) {
                if let [l, r] = *chunk {
                    let id = *pairs.entry((l, r)).or_insert_with(|| {
                        let (a, b) = (g.rules[l as usize], g.rules[r as usize]);
                        let fp = a.fingerprint().concat(b.fingerprint());
                        g.rules.push(Rule {
                            kind: RuleKind::Pair(l, r),
                            len: a.len + b.len,
                            hash: fp.hash,
                            pow: fp.pow,
                        });
                        heights.push(1 + heights[l as usize].max(heights[r as usize]));
                        (g.rules.len() - 1) as u32
                    });
                    next.push(id);
                } else {
                    next.push(chunk[0]);
                }
            }
            seq = next;
        }
        g.root = seq[0];
        g.height = heights[g.root as usize];
        g
    }

    /// Rebuilds a grammar from serialized rules, recomputing powers and
    /// checking every stored length and hash.
    pub fn from_parts(
        kinds: Vec<(RuleKind, usize, u64)>,
        root: u32,
        config: HashConfig,
    ) -> Result<Self> {
        let mut rules: Vec<Rule> = Vec::with_capacity(kinds.len());
        let mut heights: Vec<usize> = Vec::with_capacity(kinds.len());
        let mut seen: HashMap<RuleKind, u32> = HashMap::new();
        for (id, (kind, len, hash)) in kinds.into_iter().enumerate() {
            let (expect, height) = match kind {
                RuleKind::Terminal(c) => (
                    Rule {
                        kind,
                        len: 1,
                        hash: c as u64,
                        pow: config.base,
                    },
                    1,
                ),
                RuleKind::Pair(l, r) => {
                    if l as usize >= id || r as usize >= id {
                        return Err(Error::Format(format!("rule {id} refers forward")));
                    }
                    let (a, b) = (rules[l as usize], rules[r as usize]);
                    let fp = a.fingerprint().concat(b.fingerprint());
                    (
                        Rule {
                            kind,
                            len: a.len + b.len,
                            hash: fp.hash,
                            pow: fp.pow,
                        },
                        1 + heights[l as usize].max(heights[r as usize]),
                    )
                }
            };
            if expect.len != len || expect.hash != hash {
                return Err(Error::Format(format!("rule {id} annotations inconsistent")));
            }
            if seen.insert(kind, id as u32).is_some() {
                return Err(Error::Format(format!(
                    "rule {id} duplicates an earlier rule"
                )));
            }
            rules.push(expect);
            heights.push(height);
        }
        if root as usize >= rules.len() {
            return Err(Error::Format("root out of range".into()));
        }
        Ok(Grammar {
            height: heights[root as usize],
            rules,
            root,
            config,
        })
    }

    pub fn n(&self) -> usize {
        self.rules[self.root as usize].len
    }

    /// Rule count.
    pub fn g(&self) -> usize {
        self.rules.len()
    }

    /// Derivation height; a lone terminal has height 1.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn config(&self) -> &HashConfig {
        &self.config
    }

    pub fn pattern_hashes(&self, pattern: &[u8]) -> PatternHashes {
        PatternHashes::new(pattern, &self.config)
    }

    fn check_range(&self, i: usize, len: usize) -> Result<()> {
        let n = self.n();
        if i > n || len > n - i {
            return Err(Error::range("text range end", i.saturating_add(len), n));
        }
        Ok(())
    }

    pub fn extract(&self, i: usize, len: usize) -> Result<Vec<u8>> {
        self.check_range(i, len)?;
        let mut cur = Cursor::at(self, i);
        Ok((0..len)
            .map(|_| cur.next_symbol().expect("range checked"))
            .collect())
    }

    fn range_fingerprint(&self, node: u32, lo: usize, hi: usize) -> Fingerprint {
        let rule = &self.rules[node as usize];
        if lo == 0 && hi == rule.len {
            return rule.fingerprint();
        }
        match rule.kind {
            RuleKind::Pair(l, r) => {
                let ll = self.rules[l as usize].len;
                if hi <= ll {
                    self.range_fingerprint(l, lo, hi)
                } else if lo >= ll {
                    self.range_fingerprint(r, lo - ll, hi - ll)
                } else {
                    self.range_fingerprint(l, lo, ll)
                        .concat(self.range_fingerprint(r, 0, hi - ll))
                }
            }
            RuleKind::Terminal(_) => unreachable!("partial range inside a terminal"),
        }
    }

    /// Fingerprint of `T[i..i + len]`, assembled from the maximal rules
    /// covering the range.
    pub fn fingerprint(&self, i: usize, len: usize) -> Result<Fingerprint> {
        self.check_range(i, len)?;
        if len == 0 {
            return Ok(Fingerprint::EMPTY);
        }
        Ok(self.range_fingerprint(self.root, i, i + len))
    }

    pub fn text_substring_hash(&self, i: usize, len: usize) -> Result<u64> {
        Ok(self.fingerprint(i, len)?.hash)
    }

    /// Hash comparison of `P[p_off..p_off + len]` and `T[t_off..t_off + len]`.
    /// Never false for equal strings.
    pub fn substring_equal(
        &self,
        ph: &PatternHashes,
        p_off: usize,
        t_off: usize,
        len: usize,
    ) -> Result<bool> {
        if p_off > ph.len() || len > ph.len() - p_off {
            return Err(Error::range(
                "pattern range end",
                p_off.saturating_add(len),
                ph.len(),
            ));
        }
        Ok(ph.hash(p_off, len) == self.text_substring_hash(t_off, len)?)
    }

    /// Longest `l <= min(p_limit, n - t_off)` whose hashes agree, by
    /// exponential then binary search. Never below the true LCP.
    pub fn lcp_pattern_text(
        &self,
        ph: &PatternHashes,
        p_off: usize,
        p_limit: usize,
        t_off: usize,
    ) -> Result<usize> {
        if p_off > ph.len() || p_limit > ph.len() - p_off {
            return Err(Error::range(
                "pattern range end",
                p_off.saturating_add(p_limit),
                ph.len(),
            ));
        }
        if t_off > self.n() {
            return Err(Error::range("text offset", t_off, self.n()));
        }
        let cap = p_limit.min(self.n() - t_off);
        self.exp_search(cap, |l| self.substring_equal(ph, p_off, t_off, l))
    }

    fn exp_search(&self, cap: usize, mut eq: impl FnMut(usize) -> Result<bool>) -> Result<usize> {
        if cap == 0 {
            return Ok(0);
        }
        let mut lo = 0;
        let mut step = 1;
        let mut hi = loop {
            let probe = step.min(cap);
            if eq(probe)? {
                if probe == cap {
                    return Ok(cap);
                }
                lo = probe;
                step *= 2;
            } else {
                break probe;
            }
        };
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if eq(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Exact `min(LCE(x, y), cap)` by walking both parse-tree frontiers in
    /// step, skipping subtrees that are the same rule on both sides.
    pub fn lce_text_heuristic(&self, x: usize, y: usize, cap: usize) -> Result<usize> {
        let n = self.n();
        if x >= n || y >= n {
            return Err(Error::range("text offset", x.max(y), n));
        }
        let mut a = Cursor::at(self, x);
        let mut b = Cursor::at(self, y);
        let mut matched = 0;
        while matched < cap {
            let (Some(na), Some(nb)) = (a.peek(), b.peek()) else {
                break;
            };
            let (la, lb) = (self.rules[na as usize].len, self.rules[nb as usize].len);
            if na == nb {
                matched += la;
                a.skip();
                b.skip();
            } else if la == 1 && lb == 1 {
                // distinct terminals
                break;
            } else if la >= lb {
                a.expand();
            } else {
                b.expand();
            }
        }
        Ok(matched.min(cap))
    }

    /// LCE by exponential search over text fingerprints.
    pub fn lce_text_hash(&self, x: usize, y: usize) -> Result<usize> {
        let n = self.n();
        if x >= n || y >= n {
            return Err(Error::range("text offset", x.max(y), n));
        }
        let cap = n - x.max(y);
        self.exp_search(cap, |l| {
            Ok(self.text_substring_hash(x, l)? == self.text_substring_hash(y, l)?)
        })
    }

    /// Direct symbol-by-symbol LCP of `pattern` against `T[t_off..]`.
    pub fn lcp_direct(&self, t_off: usize, pattern: &[u8]) -> Result<usize> {
        if t_off > self.n() {
            return Err(Error::range("text offset", t_off, self.n()));
        }
        let mut cur = Cursor::at(self, t_off);
        let mut l = 0;
        for &c in pattern {
            match cur.next_symbol() {
                Some(t) if t == c => l += 1,
                _ => break,
            }
        }
        Ok(l)
    }
}
