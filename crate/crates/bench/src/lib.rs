//! Synthetic inputs shared by the benchmarks.

use lazymem::{Alphabet, HashConfig, Index, TextRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `copies` copies of a random 4-symbol seed with point mutations, plus
/// patterns sampled from it with their own mutations.
pub struct Pangenome {
    pub text: TextRecord,
    pub patterns: Vec<Vec<u8>>,
}

fn mutate(seq: &mut [u8], rate: f64, rng: &mut ChaCha8Rng) {
    for c in seq.iter_mut() {
        if rng.gen_bool(rate) {
            *c = rng.gen_range(1..=4);
        }
    }
}

pub fn pangenome(
    seed_len: usize,
    copies: usize,
    patterns: usize,
    m: usize,
    seed: u64,
) -> Pangenome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<u8> = (0..seed_len).map(|_| rng.gen_range(1..=4)).collect();
    let mut symbols = Vec::with_capacity(seed_len * copies + 1);
    for _ in 0..copies {
        let mut copy = base.clone();
        mutate(&mut copy, 0.002, &mut rng);
        symbols.extend(copy);
    }
    let patterns = (0..patterns)
        .map(|_| {
            let at = rng.gen_range(0..=symbols.len() - m);
            let mut p = symbols[at..at + m].to_vec();
            mutate(&mut p, 0.01, &mut rng);
            p
        })
        .collect();
    symbols.push(0);
    let text = TextRecord {
        name: "pangenome".into(),
        symbols,
        alphabet: Alphabet::from_rank_order(b"ACGT".to_vec(), true).expect("four symbols"),
        records: Vec::new(),
    };
    Pangenome { text, patterns }
}

pub fn index(p: &Pangenome, s: usize) -> Index {
    Index::build(&p.text, s, true, HashConfig::from_seed(1)).expect("synthetic text is valid")
}
