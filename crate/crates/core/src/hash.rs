//! Karp-Rabin polynomial hashing modulo the Mersenne prime 2^61 - 1.
//!
//! `hash(s) = sum s[k] * base^(|s|-1-k) mod p`, so
//! `hash(ab) = hash(a) * base^|b| + hash(b)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MODULUS: u64 = (1 << 61) - 1;

#[inline]
pub fn mul_mod(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let lo = (x as u64) & MODULUS;
    let hi = (x >> 61) as u64;
    let s = lo + hi;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashConfig {
    pub seed: u64,
    pub base: u64,
}

impl HashConfig {
    /// Draws the base uniformly from `[2, p - 2]`.
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        HashConfig {
            seed,
            base: rng.gen_range(2..=MODULUS - 2),
        }
    }

    /// Any base, including degenerate ones. Only for exercising the
    /// collision path.
    pub fn with_base_unchecked(seed: u64, base: u64) -> Self {
        HashConfig {
            seed,
            base: base % MODULUS,
        }
    }

    pub fn hash_of(&self, s: &[u8]) -> u64 {
        s.iter()
            .fold(0, |h, &c| add_mod(mul_mod(h, self.base), c as u64))
    }
}

/// A (hash, base^len) pair for a string. Concatenation is associative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fingerprint {
    pub hash: u64,
    pub pow: u64,
}

impl Fingerprint {
    pub const EMPTY: Fingerprint = Fingerprint { hash: 0, pow: 1 };

    #[inline]
    pub fn concat(self, right: Fingerprint) -> Fingerprint {
        Fingerprint {
            hash: add_mod(mul_mod(self.hash, right.pow), right.hash),
            pow: mul_mod(self.pow, right.pow),
        }
    }
}

/// Prefix hashes of a pattern.
#[derive(Debug, Clone)]
pub struct PatternHashes {
    prefix: Vec<u64>,
    pow: Vec<u64>,
}

impl PatternHashes {
    pub fn new(pattern: &[u8], config: &HashConfig) -> Self {
        let mut prefix = Vec::with_capacity(pattern.len() + 1);
        let mut pow = Vec::with_capacity(pattern.len() + 1);
        prefix.push(0);
        pow.push(1);
        for &c in pattern {
            let h = *prefix.last().unwrap();
            prefix.push(add_mod(mul_mod(h, config.base), c as u64));
            pow.push(mul_mod(*pow.last().unwrap(), config.base));
        }
        PatternHashes { prefix, pow }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Hash of `pattern[start..start + len]`.
    pub fn hash(&self, start: usize, len: usize) -> u64 {
        let end = start + len;
        sub_mod(self.prefix[end], mul_mod(self.prefix[start], self.pow[len]))
    }
}
