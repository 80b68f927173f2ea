//! Index file layout. Every integer is a little-endian u64; symbols and
//! flags are single bytes.
//!
//! ```text
//! "LZMEM" version
//! fold_case:u8 sigma bytes[sigma]
//! records (name_len name offset len)*
//! n r g
//! run_starts[r] run_symbols:u8[r]
//! c[257]
//! augmented:u8 count (t [lce_before lce_after])*
//! s count (offset value)*
//! seed base root (tag:u8 (symbol:u8 | left right) len hash)[g]
//! ```

use std::fs;
use std::path::Path;

use crate::corpus::{Alphabet, RecordSpan};
use crate::error::{Error, Result};
use crate::hash::HashConfig;
use crate::index::Index;
use crate::rlbwt::{RlbwtIndex, ThresholdEntry};
use crate::slp::{Grammar, RuleKind};
use crate::suffix::SamplePlan;

pub const MAGIC: &[u8; 5] = b"LZMEM";
pub const VERSION: u64 = 1;

struct Writer(Vec<u8>);

impl Writer {
    fn u64(&mut self, v: usize) {
        self.0.extend_from_slice(&(v as u64).to_le_bytes());
    }

    fn raw(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
}

pub fn to_bytes(index: &Index) -> Vec<u8> {
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MAGIC);
    w.raw(VERSION);

    w.u8(index.alphabet.fold_case() as u8);
    w.u64(index.alphabet.sigma());
    w.0.extend_from_slice(index.alphabet.rank_order());

    w.u64(index.records.len());
    for rec in &index.records {
        w.u64(rec.name.len());
        w.0.extend_from_slice(rec.name.as_bytes());
        w.u64(rec.offset);
        w.u64(rec.len);
    }

    let rl = &index.rlbwt;
    w.u64(rl.n());
    w.u64(rl.r());
    w.u64(index.grammar.g());
    for &s in rl.run_starts() {
        w.u64(s);
    }
    w.0.extend_from_slice(rl.run_symbols());
    for &c in rl.c_array() {
        w.u64(c);
    }

    w.u8(rl.augmented() as u8);
    w.u64(rl.thresholds().count());
    for th in rl.thresholds() {
        w.u64(th.t);
        if rl.augmented() {
            w.u64(th.lce_before.unwrap_or(0));
            w.u64(th.lce_after.unwrap_or(0));
        }
    }

    let plan = rl.samples();
    w.u64(plan.s);
    w.u64(plan.retained.len());
    for &(off, value) in &plan.retained {
        w.u64(off);
        w.u64(value);
    }

    let g = &index.grammar;
    w.raw(g.config().seed);
    w.raw(g.config().base);
    w.u64(g.root() as usize);
    for rule in g.rules() {
        match rule.kind {
            RuleKind::Terminal(c) => {
                w.u8(0);
                w.u8(c);
            }
            RuleKind::Pair(l, r) => {
                w.u8(1);
                w.u64(l as usize);
                w.u64(r as usize);
            }
        }
        w.u64(rule.len);
        w.raw(rule.hash);
    }
    w.0
}

struct Reader<'a> {
    buf: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.at < k {
            return Err(Error::Format("truncated".into()));
        }
        let out = &self.buf[self.at..self.at + k];
        self.at += k;
        Ok(out)
    }

    fn raw(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<usize> {
        let v = self.raw()?;
        usize::try_from(v).map_err(|_| Error::Format(format!("value {v} too large")))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn flag(&mut self) -> Result<bool> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            b => Err(Error::Format(format!("bad flag byte {b}"))),
        }
    }

    /// A count of items each at least `min_size` bytes, checked against
    /// the remaining input before anything is allocated.
    fn count(&mut self, min_size: usize) -> Result<usize> {
        let k = self.u64()?;
        if k.saturating_mul(min_size) > self.buf.len() - self.at {
            return Err(Error::Format("count exceeds file size".into()));
        }
        Ok(k)
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<Index> {
    let mut rd = Reader { buf: bytes, at: 0 };
    if rd.take(MAGIC.len()).ok() != Some(&MAGIC[..]) {
        return Err(Error::Format("missing LZMEM magic".into()));
    }
    let version = rd.raw()?;
    if version != VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: VERSION,
        });
    }

    let fold_case = rd.flag()?;
    let sigma = rd.count(1)?;
    let alphabet = Alphabet::from_rank_order(rd.take(sigma)?.to_vec(), fold_case)?;

    let nrec = rd.count(24)?;
    let mut records = Vec::with_capacity(nrec);
    for _ in 0..nrec {
        let len = rd.count(1)?;
        let name = String::from_utf8(rd.take(len)?.to_vec())
            .map_err(|_| Error::Format("record name not UTF-8".into()))?;
        let offset = rd.u64()?;
        let len = rd.u64()?;
        records.push(RecordSpan { name, offset, len });
    }

    let n = rd.u64()?;
    let r = rd.count(9)?;
    let g = rd.u64()?;
    let run_starts = (0..r).map(|_| rd.u64()).collect::<Result<Vec<_>>>()?;
    let run_symbols = rd.take(r)?.to_vec();
    if run_symbols.iter().any(|&c| c as usize > sigma) {
        return Err(Error::Format("run symbol outside alphabet".into()));
    }
    let c_array = (0..257).map(|_| rd.u64()).collect::<Result<Vec<_>>>()?;

    let augmented = rd.flag()?;
    let nth = rd.count(if augmented { 24 } else { 8 })?;
    let mut thresholds = Vec::with_capacity(nth);
    for _ in 0..nth {
        let t = rd.u64()?;
        let (lce_before, lce_after) = if augmented {
            (Some(rd.u64()?), Some(rd.u64()?))
        } else {
            (None, None)
        };
        thresholds.push(ThresholdEntry {
            t,
            lce_before,
            lce_after,
        });
    }

    let s = rd.u64()?;
    let ns = rd.count(16)?;
    let mut retained = Vec::with_capacity(ns);
    for _ in 0..ns {
        retained.push((rd.u64()?, rd.u64()?));
    }
    if retained.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::Format("sample offsets not increasing".into()));
    }
    let rlbwt = RlbwtIndex::from_parts(
        n,
        run_starts,
        run_symbols,
        thresholds,
        augmented,
        SamplePlan { s, retained },
    )?;
    if rlbwt.c_array() != c_array.as_slice() {
        return Err(Error::Format("C array disagrees with runs".into()));
    }

    let seed = rd.raw()?;
    let base = rd.raw()?;
    let root = rd.u64()?;
    if g == 0 || g > bytes.len() || root >= g {
        return Err(Error::Format("bad grammar header".into()));
    }
    let mut kinds = Vec::with_capacity(g);
    for _ in 0..g {
        let kind = match rd.u8()? {
            0 => RuleKind::Terminal(rd.u8()?),
            1 => {
                let l = u32::try_from(rd.u64()?)
                    .map_err(|_| Error::Format("rule id too large".into()))?;
                let r = u32::try_from(rd.u64()?)
                    .map_err(|_| Error::Format("rule id too large".into()))?;
                RuleKind::Pair(l, r)
            }
            b => return Err(Error::Format(format!("bad rule tag {b}"))),
        };
        let len = rd.u64()?;
        let hash = rd.raw()?;
        kinds.push((kind, len, hash));
    }
    let grammar = Grammar::from_parts(
        kinds,
        root as u32,
        HashConfig::with_base_unchecked(seed, base),
    )?;
    if grammar.n() != n {
        return Err(Error::Format(format!(
            "grammar spells {} symbols, BWT has {n}",
            grammar.n()
        )));
    }
    if rd.at != bytes.len() {
        return Err(Error::Format("trailing bytes".into()));
    }
    Ok(Index {
        alphabet,
        records,
        rlbwt,
        grammar,
    })
}

pub fn save(index: &Index, path: &Path) -> Result<()> {
    fs::write(path, to_bytes(index))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Index> {
    from_bytes(&fs::read(path)?)
}
