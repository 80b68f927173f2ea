//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.


use std::process::ExitCode;
use std::time::Instant;

use lazymem::format::{from_bytes, to_bytes};
use lazymem::hash::HashConfig;
use lazymem::ms::{
    lcs, long_mems, mems_from_ms, ms_eager, ms_lazy, ms_lazy_verified, ms_naive_fallback,
    verify_mems,
};
use lazymem::oracle::{lcs_of, mems_of, naive_lce, naive_ms, naive_sa, positions_valid, sa_ms};
use lazymem::suffix::{
    boundary_offsets, build_suffix_structures, compute_thresholds, segment_runs, SuffixStructures,
};
use lazymem::{Grammar, Index, MatchingStatistics, MemList, QueryStats, RlbwtIndex, TextRecord};
use rand::Rng;

use synth::Case;

const SEED: u64 = 0x5eed;

/// Counts failures and keeps the first message.
#[derive(Default)]
struct Verdict {
    checks: u64,
    failures: u64,
    first: Option<String>,
}

impl Verdict {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(msg());
            }
        }
    }

    fn ok(&self) -> bool {
        self.failures == 0
    }

    fn summary(&self) -> String {
        match &self.first {
            None => format!("{} checks", self.checks),
            Some(m) => format!(
                "{}/{} checks failed; first: {m}",
                self.failures, self.checks
            ),
        }
    }
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - (n.max(2) - 1).leading_zeros()) as usize
}

fn spans(l: &MemList) -> Vec<(usize, usize)> {
    l.entries.iter().map(|e| (e.start, e.len)).collect()
}

fn mems_occur(l: &MemList, p: &[u8], t: &[u8]) -> bool {
    l.entries.iter().all(|e| {
        e.text_pos + e.len < t.len()
            && t[e.text_pos..e.text_pos + e.len] == p[e.start..e.start + e.len]
    })
}

fn index_of(text: &[u8], s: usize, augment: bool, seed: u64) -> (RlbwtIndex, Grammar) {
    let st = build_suffix_structures(text);
    index_from(&st, text, s, augment, seed)
}

fn index_from(
    st: &SuffixStructures,
    text: &[u8],
    s: usize,
    augment: bool,
    seed: u64,
) -> (RlbwtIndex, Grammar) {
    let runs = segment_runs(&st.bwt);
    let th = compute_thresholds(st, &runs, augment);
    let plan = lazymem::suffix::make_sample_plan(st, &runs, s).unwrap();
    (
        RlbwtIndex::new(text.len(), &runs, &th, plan).unwrap(),
        Grammar::build(text, HashConfig::from_seed(seed)),
    )
}

/// Per-pattern engine outputs kept for the cross-cutting criteria.
struct Run {
    eager: QueryStats,
    lazy: QueryStats,
    long16: QueryStats,
    m: usize,
}

struct Checks<'a> {
    equiv: &'a mut Verdict,
    latency: &'a mut Verdict,
    one_sided: &'a mut Verdict,
    long: &'a mut Verdict,
}

/// Runs every engine on one pattern and compares against the oracle.
fn evaluate(
    p: &[u8],
    t: &[u8],
    want: &MatchingStatistics,
    idx: &RlbwtIndex,
    g: &Grammar,
    c: &mut Checks,
) -> Run {
    let tag = |what: &str| format!("{what}: n={} p={:?}", t.len(), &p[..p.len().min(40)]);
    let want_mems = mems_of(want);

    let (eager, es) = ms_eager(p, idx, g, false).unwrap();
    c.equiv.check(eager.len == want.len, || tag("eager len"));
    c.equiv.check(positions_valid(p, t, &eager, &want.len), || {
        tag("eager pos")
    });
    c.equiv
        .check(spans(&mems_from_ms(&eager)) == spans(&want_mems), || {
            tag("eager mems")
        });
    if idx.augmented() {
        let (aug, _) = ms_eager(p, idx, g, true).unwrap();
        c.equiv.check(aug.len == want.len, || tag("eager-aug len"));
        c.equiv.check(positions_valid(p, t, &aug, &want.len), || {
            tag("eager-aug pos")
        });
    }

    let (raw, _, raw_stats) = ms_lazy(p, idx, g).unwrap();
    c.one_sided
        .check((0..p.len()).all(|i| raw.len[i] >= want.len[i]), || {
            tag("lazy underestimates")
        });
    let pace = ceil_log2(t.len()) as u64;
    c.latency.check(raw_stats.max_len_latency <= pace, || {
        format!(
            "{} (latency {} > {pace})",
            tag("lazy latency"),
            raw_stats.max_len_latency
        )
    });

    let (lazy, lazy_mems, ls) = ms_lazy_verified(p, idx, g).unwrap();
    c.equiv.check(lazy.len == want.len, || tag("lazy len"));
    c.equiv
        .check(positions_valid(p, t, &lazy, &want.len), || tag("lazy pos"));
    c.equiv
        .check(spans(&lazy_mems) == spans(&want_mems), || tag("lazy mems"));

    let fb = ms_naive_fallback(p, &eager.pos, g).unwrap();
    c.equiv.check(fb.len == want.len, || tag("fallback len"));

    let mut long16 = QueryStats::default();
    for d in [1, 5, 16] {
        let (got, st) = long_mems(p, idx, g, d).unwrap();
        let expect: Vec<_> = spans(&want_mems)
            .into_iter()
            .filter(|&(_, l)| l >= d)
            .collect();
        c.long
            .check(spans(&got) == expect, || tag(&format!("long_mems d={d}")));
        c.long.check(mems_occur(&got, p, t), || {
            tag(&format!("long_mems d={d} positions"))
        });
        if d == 16 {
            long16 = st;
        }
    }
    let (best, _) = lcs(p, idx, g).unwrap();
    c.long
        .check(spans(&best) == spans(&lcs_of(&want_mems)), || tag("lcs"));
    c.long
        .check(mems_occur(&best, p, t), || tag("lcs positions"));

    Run {
        eager: es,
        lazy: ls,
        long16,
        m: p.len(),
    }
}

/// Certifies a suffix array independently of how it was built: it must
/// be a permutation, and each adjacent pair must agree on `lcp` symbols
/// and then be strictly increasing.
fn certify_sa(t: &[u8], st: &SuffixStructures) -> bool {
    let n = t.len();
    let mut seen = vec![false; n];
    for &v in &st.sa {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    (1..n).all(|j| {
        let (a, b, l) = (st.sa[j - 1], st.sa[j], st.lcp[j]);
        a + l < n && b + l < n && t[a..a + l] == t[b..b + l] && t[a + l] < t[b + l]
    })
}

struct Line {
    id: u32,
    ok: bool,
    what: &'static str,
    detail: String,
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut lines: Vec<Line> = Vec::new();
    let mut record = |id, ok, what, detail: String| {
        let line = Line {
            id,
            ok,
            what,
            detail,
        };
        println!(
            "{} criterion {:>2}: {} ({})",
            if line.ok { "PASS" } else { "FAIL" },
            line.id,
            line.what,
            line.detail
        );
        lines.push(line);
    };

    let mut latency = Verdict::default();
    let mut one_sided = Verdict::default();
    let mut long = Verdict::default();

    // 1: small corpus
    let t0 = Instant::now();
    let small = synth::small_corpus(500, SEED);
    let mut equiv_small = Verdict::default();
    for (k, case) in small.iter().enumerate() {
        let (idx, g) = index_of(&case.text, 1 + k % 3, k % 2 == 0, SEED + k as u64);
        for p in &case.patterns {
            let want = naive_ms(p, &case.text);
            let mut c = Checks {
                equiv: &mut equiv_small,
                latency: &mut latency,
                one_sided: &mut one_sided,
                long: &mut long,
            };
            evaluate(p, &case.text, &want, &idx, &g, &mut c);
        }
    }
    record(
        1,
        equiv_small.ok(),
        "oracle equivalence, 500 small texts x 5 patterns",
        format!(
            "{}; {:.1}s",
            equiv_small.summary(),
            t0.elapsed().as_secs_f64()
        ),
    );

    // 2: pangenome
    let t0 = Instant::now();
    let Case { text, patterns } = synth::pangenome(20_000, 50, 0.002, 200, 150, 0.01, SEED);
    let n = text.len();
    let st = build_suffix_structures(&text);
    let build_secs = t0.elapsed().as_secs_f64();
    let sa_ok = certify_sa(&text, &st);
    let (idx, g) = index_from(&st, &text, 1, true, SEED);
    let wants: Vec<MatchingStatistics> = patterns.iter().map(|p| sa_ms(p, &text, &st.sa)).collect();
    let mut equiv_big = Verdict::default();
    equiv_big.check(sa_ok, || "oracle suffix array failed certification".into());
    let mut runs = Vec::new();
    for (p, want) in patterns.iter().zip(&wants) {
        let mut c = Checks {
            equiv: &mut equiv_big,
            latency: &mut latency,
            one_sided: &mut one_sided,
            long: &mut long,
        };
        runs.push(evaluate(p, &text, want, &idx, &g, &mut c));
    }
    // spot-check the scan oracle itself on a few patterns
    for p in patterns.iter().take(3) {
        let scan = naive_ms(p, &text);
        equiv_big.check(scan.len == sa_ms(p, &text, &st.sa).len, || {
            "scan and SA oracles disagree".into()
        });
    }
    record(
        2,
        equiv_big.ok(),
        "oracle equivalence, 50 x 20 KB pangenome, 200 patterns",
        format!(
            "n={n} r={} g={}; {}; SA build {build_secs:.1}s, total {:.1}s",
            idx.r(),
            g.g(),
            equiv_big.summary(),
            t0.elapsed().as_secs_f64()
        ),
    );

    // 3: subsample invariance
    let t0 = Instant::now();
    let mut inv = Verdict::default();
    let mut counts = Vec::new();
    let mut reference: Option<Vec<(MatchingStatistics, MatchingStatistics, MemList)>> = None;
    for s in [1, 2, 5, 10] {
        let (idx_s, g_s) = index_from(&st, &text, s, false, SEED);
        counts.push(idx_s.samples().len());
        let outs: Vec<_> = patterns
            .iter()
            .map(|p| {
                let (e, _) = ms_eager(p, &idx_s, &g_s, false).unwrap();
                let (l, _, _) = ms_lazy_verified(p, &idx_s, &g_s).unwrap();
                let (lm, _) = long_mems(p, &idx_s, &g_s, 16).unwrap();
                (e, l, lm)
            })
            .collect();
        match &reference {
            None => reference = Some(outs),
            Some(r) => inv.check(*r == outs, || format!("outputs differ at s={s}")),
        }
    }
    inv.check(counts.windows(2).all(|w| w[0] >= w[1]), || {
        format!("counts not non-increasing: {counts:?}")
    });
    let ratio = counts[2] as f64 / counts[0] as f64;
    inv.check(ratio < 0.8, || format!("count(5)/count(1) = {ratio:.3}"));
    record(
        3,
        inv.ok(),
        "subsample invariance and sample counts",
        format!(
            "counts s=1,2,5,10: {counts:?}, count(5)/count(1)={ratio:.3}; {}; {:.1}s",
            inv.summary(),
            t0.elapsed().as_secs_f64()
        ),
    );

    // 4: lazy budget
    let mut budget = Verdict::default();
    let l = ceil_log2(n) as f64;
    let mut worst = 0f64;
    for (k, r) in runs.iter().enumerate() {
        let mu = r.lazy.mems as f64;
        let m = r.m as f64;
        let bound = 8.0
            * (m / l
                + if mu > 0.0 {
                    mu * (1.0 + (m / mu + 1.0).log2())
                } else {
                    0.0
                });
        let used = (r.lazy.lcp_queries + r.lazy.equality_checks) as f64;
        worst = worst.max(used / bound);
        budget.check(used <= bound, || {
            format!("pattern {k}: {used} > {bound:.1}")
        });
    }
    let lazy_lcp: u64 = runs.iter().map(|r| r.lazy.lcp_queries).sum();
    let eager_lcp: u64 = runs.iter().map(|r| r.eager.lcp_queries).sum();
    let events: u64 = runs.iter().map(|r| r.lazy.mismatch_events).sum();
    let mu_total: u64 = runs.iter().map(|r| r.lazy.mems).sum();
    let applies = events >= 4 * mu_total;
    if applies {
        budget.check(2 * lazy_lcp <= eager_lcp, || {
            format!("lazy LCP {lazy_lcp} > 0.5 x eager {eager_lcp}")
        });
    }
    record(
        4,
        budget.ok(),
        "lazy query budget",
        format!(
            "worst used/bound {worst:.3}; LCP queries lazy {lazy_lcp} vs eager {eager_lcp}; events {events}, mu {mu_total}{}; {}",
            if applies { "" } else { " (aggregate clause not triggered: events < 4 mu)" },
            budget.summary()
        ),
    );

    record(
        5,
        latency.ok(),
        "length latency within ceil(log2 n)",
        latency.summary(),
    );
    record(
        6,
        one_sided.ok(),
        "lazy lengths never underestimate",
        one_sided.summary(),
    );

    // 7: long MEMs, plus the query saving on the pangenome patterns
    let long_lcp: u64 = runs.iter().map(|r| r.long16.lcp_queries).sum();
    long.check(long_lcp < eager_lcp, || {
        format!("long_mems(16) {long_lcp} >= eager {eager_lcp}")
    });
    for (k, r) in runs.iter().enumerate() {
        long.check(r.long16.lcp_queries <= r.eager.lcp_queries, || {
            format!("pattern {k}: long_mems(16) above eager")
        });
    }
    record(
        7,
        long.ok(),
        "long MEMs (d = 1, 5, 16) and LCS",
        format!(
            "LCP queries long_mems(16) {long_lcp} vs eager {eager_lcp}; {}",
            long.summary()
        ),
    );

    // 8: structures
    let t0 = Instant::now();
    let mut structure = Verdict::default();
    let mut rng = synth::rng(SEED ^ 8);
    for (k, sigma) in [(0, 2u8), (1, 4), (2, 1)] {
        let mut t: Vec<u8> = match k {
            2 => vec![1; 1999],
            _ => (0..1999).map(|_| rng.gen_range(1..=sigma)).collect(),
        };
        t.push(0);
        exhaustive_structures(&t, &mut structure);
    }
    // a repetitive small text
    let rep = synth::pangenome(400, 5, 0.01, 0, 0, 0.0, SEED);
    exhaustive_structures(&rep.text, &mut structure);
    sampled_structures(&text, &st, &idx, &g, 10_000, &mut rng, &mut structure);
    record(
        8,
        structure.ok(),
        "structure correctness",
        format!(
            "{}; {:.1}s",
            structure.summary(),
            t0.elapsed().as_secs_f64()
        ),
    );

    // 9: collisions
    let mut coll = Verdict::default();
    let mut collisions = 0;
    let cases = synth::small_corpus(400, SEED ^ 9);
    for case in &cases {
        let (idx_c, _) = index_of(&case.text, 1, false, 0);
        let g_c = Grammar::build(&case.text, HashConfig::with_base_unchecked(0, 1));
        for p in &case.patterns {
            let want = naive_ms(p, &case.text);
            let (raw, raw_mems, _) = ms_lazy(p, &idx_c, &g_c).unwrap();
            let verified = verify_mems(p, &raw_mems, &g_c).unwrap();
            coll.check(verified == (raw.len == want.len), || {
                "verify_mems disagrees with the oracle".into()
            });
            let (ms, mems, stats) = ms_lazy_verified(p, &idx_c, &g_c).unwrap();
            coll.check(
                ms.len == want.len && spans(&mems) == spans(&mems_of(&want)),
                || "fallback output wrong".into(),
            );
            coll.check(stats.fallback_used == !verified, || {
                "fallback flag wrong".into()
            });
            if !verified {
                collisions += 1;
            }
        }
    }
    coll.check(collisions > 0, || "no collision was produced".into());
    record(
        9,
        coll.ok(),
        "hash collision detected and repaired",
        format!("{collisions} patterns hit a collision; {}", coll.summary()),
    );

    // 10: round trip and determinism
    let mut det = Verdict::default();
    let record_of = |t: &[u8]| TextRecord {
        name: "synthetic".into(),
        symbols: t.to_vec(),
        alphabet: lazymem::Alphabet::from_rank_order(vec![b'A', b'C', b'G', b'T'], true).unwrap(),
        records: vec![],
    };
    let full = Index::build(&record_of(&text), 5, true, HashConfig::from_seed(SEED)).unwrap();
    let bytes = to_bytes(&full);
    let back = from_bytes(&bytes).unwrap();
    det.check(back == full, || "loaded index differs".into());
    det.check(to_bytes(&back) == bytes, || "re-saved bytes differ".into());
    let again = Index::build(&record_of(&text), 5, true, HashConfig::from_seed(SEED)).unwrap();
    det.check(to_bytes(&again) == bytes, || {
        "fixed-seed rebuild differs".into()
    });
    for p in patterns.iter().take(50) {
        let a = ms_lazy_verified(p, &full.rlbwt, &full.grammar).unwrap();
        let b = ms_lazy_verified(p, &back.rlbwt, &back.grammar).unwrap();
        det.check(a == b, || "query output differs across runs".into());
        let a = ms_eager(p, &full.rlbwt, &full.grammar, true).unwrap();
        let b = ms_eager(p, &back.rlbwt, &back.grammar, true).unwrap();
        det.check(a == b, || "query output differs across runs".into());
    }
    record(
        10,
        det.ok(),
        "round trip and determinism",
        format!("index {} bytes; {}", bytes.len(), det.summary()),
    );

    let failed = lines.iter().filter(|l| !l.ok).count();
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        lines.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// Every row, threshold, and substring of a text up to ~2000 symbols.
fn exhaustive_structures(t: &[u8], v: &mut Verdict) {
    let n = t.len();
    let st = build_suffix_structures(t);
    v.check(st.sa == naive_sa(t), || {
        format!("SA differs from oracle, n={n}")
    });
    let (idx, g) = index_of(t, 3, true, SEED);

    // LF is a bijection with SA[LF(q)] = SA[q] - 1
    let mut hit = vec![false; n];
    for q in 0..n {
        let to = idx.lf_step(q).unwrap();
        v.check(!std::mem::replace(&mut hit[to], true), || {
            format!("LF not injective at {q}")
        });
        v.check(st.sa[to] == (st.sa[q] + n - 1) % n, || {
            format!("LF({q}) wrong")
        });
    }
    for &q in &boundary_offsets(&segment_runs(&st.bwt)) {
        v.check(idx.sa_at(q).unwrap().0 == st.sa[q], || {
            format!("sa_at({q}) wrong")
        });
    }
    check_thresholds(t, &st, &idx, v);

    // extraction and hashing of every substring up to length 64, plus LCE
    let cfg = *g.config();
    v.check(g.extract(0, n).unwrap() == t, || {
        "full extraction wrong".into()
    });
    for i in 0..n {
        for len in 0..=64.min(n - i) {
            v.check(g.extract(i, len).unwrap() == t[i..i + len], || {
                format!("extract({i}, {len})")
            });
            v.check(
                g.text_substring_hash(i, len).unwrap() == cfg.hash_of(&t[i..i + len]),
                || format!("hash({i}, {len})"),
            );
        }
    }
    for x in 0..n {
        for y in (0..n).step_by(7) {
            let want = naive_lce(t, x, y);
            v.check(g.lce_text_heuristic(x, y, n).unwrap() == want, || {
                format!("LCE heuristic ({x}, {y})")
            });
            v.check(g.lce_text_hash(x, y).unwrap() == want, || {
                format!("LCE hash ({x}, {y})")
            });
        }
    }
}

fn check_thresholds(t: &[u8], st: &SuffixStructures, idx: &RlbwtIndex, v: &mut Verdict) {
    let n = t.len();
    let runs = segment_runs(&st.bwt);
    let table = compute_thresholds(st, &runs, true);
    let stored: Vec<_> = idx.thresholds().collect();
    v.check(stored.len() == table.entries.len(), || {
        "threshold count".into()
    });
    for (th, s) in table.entries.iter().zip(stored) {
        let window = &st.lcp[th.e1 + 1..=th.s2];
        let min = *window.iter().min().unwrap();
        let first = th.e1 + 1 + window.iter().position(|&x| x == min).unwrap();
        v.check(th.t == first && s.t == th.t, || {
            format!("threshold ({}, {}) not leftmost argmin", th.e1, th.s2)
        });
        let lce = |a: usize, b: usize| naive_lce(t, st.sa[a], st.sa[b]).min(n - st.sa[a]);
        v.check(th.lce_before == Some(lce(th.t - 1, th.e1)), || {
            "lce_before".into()
        });
        v.check(th.lce_after == Some(lce(th.t, th.s2)), || {
            "lce_after".into()
        });
    }
}

/// Random trials on a large text: LF, thresholds, extraction, hashing, LCE.
fn sampled_structures(
    t: &[u8],
    st: &SuffixStructures,
    idx: &RlbwtIndex,
    g: &Grammar,
    trials: usize,
    rng: &mut impl Rng,
    v: &mut Verdict,
) {
    let n = t.len();
    let cfg = *g.config();
    let runs = segment_runs(&st.bwt);
    let table = compute_thresholds(st, &runs, false);
    let boundaries = boundary_offsets(&runs);
    for _ in 0..trials {
        let q = rng.gen_range(0..n);
        v.check(
            st.sa[idx.lf_step(q).unwrap()] == (st.sa[q] + n - 1) % n,
            || format!("LF({q}) wrong"),
        );
        let b = boundaries[rng.gen_range(0..boundaries.len())];
        v.check(idx.sa_at(b).unwrap().0 == st.sa[b], || {
            format!("sa_at({b}) wrong")
        });

        let th = &table.entries[rng.gen_range(0..table.entries.len())];
        let window = &st.lcp[th.e1 + 1..=th.s2];
        let min = *window.iter().min().unwrap();
        let first = th.e1 + 1 + window.iter().position(|&x| x == min).unwrap();
        v.check(th.t == first, || {
            format!("threshold ({}, {})", th.e1, th.s2)
        });

        let i = rng.gen_range(0..n);
        let len = rng.gen_range(0..=4096.min(n - i));
        v.check(g.extract(i, len).unwrap() == t[i..i + len], || {
            format!("extract({i}, {len})")
        });
        v.check(
            g.text_substring_hash(i, len).unwrap() == cfg.hash_of(&t[i..i + len]),
            || format!("hash({i}, {len})"),
        );

        // pick y from a nearby suffix in SA order so LCEs are long
        let x = rng.gen_range(0..n);
        let row = rng.gen_range(0..n);
        let y = if rng.gen_bool(0.5) {
            st.sa[row]
        } else {
            st.sa[(row + 1).min(n - 1)]
        };
        let y = if rng.gen_bool(0.5) {
            y
        } else {
            (x + 20_000 * rng.gen_range(1..3)) % n
        };
        let want = naive_lce(t, x, y);
        v.check(g.lce_text_heuristic(x, y, n).unwrap() == want, || {
            format!("LCE heuristic ({x}, {y})")
        });
        v.check(g.lce_text_hash(x, y).unwrap() == want, || {
            format!("LCE hash ({x}, {y})")
        });
    }
}
