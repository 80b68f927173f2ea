//! Text ingestion: raw bytes or FASTA, mapped onto a dense ranked alphabet
//! with a terminal sentinel.

use crate::error::{Error, Result};

/// Rank of the terminal sentinel. Sorts before every text symbol.
pub const SENTINEL: u8 = 0;

/// Rank given to pattern bytes that never occur in the text.
pub const UNKNOWN: u8 = u8::MAX;

/// Largest supported number of distinct text bytes. Rank 0 is the
/// sentinel and rank 255 is reserved for unknown pattern bytes.
pub const MAX_SIGMA: usize = 254;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    byte_to_rank: [u8; 256],
    rank_to_byte: Vec<u8>,
    fold_case: bool,
}

impl Alphabet {
    /// Ranks bytes by first occurrence.
    pub fn from_bytes(bytes: &[u8], fold_case: bool) -> Result<Self> {
        let mut byte_to_rank = [0u8; 256];
        let mut rank_to_byte = Vec::new();
        for &b in bytes {
            if byte_to_rank[b as usize] == 0 {
                if rank_to_byte.len() == MAX_SIGMA {
                    let distinct = bytes
                        .iter()
                        .fold([false; 256], |mut seen, &x| {
                            seen[x as usize] = true;
                            seen
                        })
                        .iter()
                        .filter(|&&s| s)
                        .count();
                    return Err(Error::AlphabetTooLarge(distinct));
                }
                rank_to_byte.push(b);
                byte_to_rank[b as usize] = rank_to_byte.len() as u8;
            }
        }
        Ok(Alphabet {
            byte_to_rank,
            rank_to_byte,
            fold_case,
        })
    }

    /// Rebuilds an alphabet from its rank-ordered byte list.
    pub fn from_rank_order(rank_to_byte: Vec<u8>, fold_case: bool) -> Result<Self> {
        if rank_to_byte.len() > MAX_SIGMA {
            return Err(Error::AlphabetTooLarge(rank_to_byte.len()));
        }
        let mut byte_to_rank = [0u8; 256];
        for (i, &b) in rank_to_byte.iter().enumerate() {
            if byte_to_rank[b as usize] != 0 {
                return Err(Error::Format(format!("byte {b:#04x} ranked twice")));
            }
            byte_to_rank[b as usize] = (i + 1) as u8;
        }
        Ok(Alphabet {
            byte_to_rank,
            rank_to_byte,
            fold_case,
        })
    }

    pub fn sigma(&self) -> usize {
        self.rank_to_byte.len()
    }

    pub fn fold_case(&self) -> bool {
        self.fold_case
    }

    pub fn rank_of(&self, byte: u8) -> Option<u8> {
        match self.byte_to_rank[byte as usize] {
            0 => None,
            r => Some(r),
        }
    }

    pub fn byte_of(&self, rank: u8) -> Option<u8> {
        if rank == SENTINEL {
            return None;
        }
        self.rank_to_byte.get(rank as usize - 1).copied()
    }

    pub fn rank_order(&self) -> &[u8] {
        &self.rank_to_byte
    }

    /// Maps pattern bytes to ranks. Bytes absent from the text become
    /// [`UNKNOWN`]; case is folded when the text was folded.
    pub fn encode_pattern(&self, bytes: &[u8]) -> Vec<u8> {
        bytes
            .iter()
            .map(|&b| {
                let b = if self.fold_case {
                    b.to_ascii_uppercase()
                } else {
                    b
                };
                self.rank_of(b).unwrap_or(UNKNOWN)
            })
            .collect()
    }

    pub fn decode(&self, symbols: &[u8]) -> Vec<u8> {
        symbols.iter().filter_map(|&s| self.byte_of(s)).collect()
    }
}

/// A named region of the concatenated text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordSpan {
    pub name: String,
    pub offset: usize,
    pub len: usize,
}

/// The indexed text: ranks in `1..=sigma`, terminated by a single sentinel.
#[derive(Debug, Clone)]
pub struct TextRecord {
    pub name: String,
    pub symbols: Vec<u8>,
    pub alphabet: Alphabet,
    pub records: Vec<RecordSpan>,
}

impl TextRecord {
    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    fn from_sequence(
        name: String,
        seq: &[u8],
        fold_case: bool,
        records: Vec<RecordSpan>,
    ) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::EmptyText);
        }
        let alphabet = Alphabet::from_bytes(seq, fold_case)?;
        let mut symbols = Vec::with_capacity(seq.len() + 1);
        symbols.extend(seq.iter().map(|&b| alphabet.byte_to_rank[b as usize]));
        symbols.push(SENTINEL);
        Ok(TextRecord {
            name,
            symbols,
            alphabet,
            records,
        })
    }
}

pub fn load_raw(bytes: &[u8]) -> Result<TextRecord> {
    let records = vec![RecordSpan {
        name: "raw".to_string(),
        offset: 0,
        len: bytes.len(),
    }];
    TextRecord::from_sequence("raw".to_string(), bytes, false, records)
}

/// Concatenates every FASTA record (upper-cased, newlines stripped) into a
/// single text with one trailing sentinel.
pub fn load_fasta(bytes: &[u8]) -> Result<TextRecord> {
    let parsed = parse_fasta(bytes)?;
    let mut seq = Vec::new();
    let mut records = Vec::with_capacity(parsed.len());
    for (name, body) in parsed {
        records.push(RecordSpan {
            name,
            offset: seq.len(),
            len: body.len(),
        });
        seq.extend(body.iter().map(u8::to_ascii_uppercase));
    }
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let name = records.first().map(|r| r.name.clone()).unwrap_or_default();
    TextRecord::from_sequence(name, &seq, true, records)
}

/// Splits FASTA into (header, sequence) pairs, header without the `>`
/// and sequence with line breaks removed. Case is left untouched.
pub fn parse_fasta(bytes: &[u8]) -> Result<Vec<(String, Vec<u8>)>> {
    let mut out: Vec<(String, Vec<u8>)> = Vec::new();
    for line in bytes.split(|&b| b == b'\n') {
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        if let Some(header) = line.strip_prefix(b">") {
            let name = String::from_utf8_lossy(header).trim().to_string();
            out.push((name, Vec::new()));
        } else if line.is_empty() {
            continue;
        } else {
            match out.last_mut() {
                Some((_, seq)) => seq.extend_from_slice(line),
                None => return Err(Error::NotFasta),
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NotFasta);
    }
    Ok(out)
}

/// One pattern per line, named `line<N>` (1-based). Blank lines are kept
/// as empty patterns; a final newline does not add one.
pub fn parse_lines(bytes: &[u8]) -> Vec<(String, Vec<u8>)> {
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    if body.is_empty() && bytes.is_empty() {
        return Vec::new();
    }
    body.split(|&b| b == b'\n')
        .enumerate()
        .map(|(i, line)| {
            let line = line.strip_suffix(b"\r").unwrap_or(line);
            (format!("line{}", i + 1), line.to_vec())
        })
        .collect()
}
