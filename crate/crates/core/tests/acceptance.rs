//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use scc_core::combinatorics::{binom, enumerate_subsets, UserSubset};
use scc_core::decoder::decode;
use scc_core::delivery::{analyze_demands, transmissions, DemandVector, Scheme, TransmissionSet};
use scc_core::leakage_oracle::{
    build_observation, is_secure, leak_report, leak_count, predicted_leaks, LeakReport,
};
use scc_core::placement::{build_placement, Placement};
use scc_core::rate_analysis::{
    average_rate, delta_t, demand_at, rate_for_demand, rate_keys, rate_keys_closed_form, AverageMode,
};
use scc_core::secret_sharing::{
    encode_file, reconstruct_file, secrecy_certificate, FileLibrary, ShareLabel, SystemParams,
};
use scc_core::Gf256;

const SWEEPS: [(usize, usize); 5] = [(4, 1), (4, 2), (5, 1), (5, 2), (5, 3)];

struct Gate {
    failed: usize,
}

impl Gate {
    fn report(&mut self, n: usize, ok: bool, what: &str, detail: String, took: Duration) {
        if !ok {
            self.failed += 1;
        }
        println!(
            "criterion {n:>2} {}: {what} ({detail}; {:.3}s)",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
}

fn instance(n: usize, k: usize, t: usize, seed: u64) -> (SystemParams, FileLibrary, Placement) {
    let p = SystemParams::minimal(n, k, t).unwrap();
    let lib = FileLibrary::random(&p, &mut ChaCha8Rng::seed_from_u64(seed));
    let pl = build_placement(&lib, &p, seed + 1).unwrap();
    (p, lib, pl)
}

fn s(v: &[usize]) -> UserSubset {
    UserSubset::from_members(v.iter().copied()).unwrap()
}

fn criterion_1(gate: &mut Gate) {
    let start = Instant::now();
    let (p, _, pl) = instance(4, 4, 2, 1);
    let run = |v: Vec<usize>| -> Vec<LeakReport> {
        let d = DemandVector::new(v, &p).unwrap();
        let a = analyze_demands(&d);
        let tx = transmissions(Scheme::Keyless, &d, &pl).unwrap();
        (1..=4).map(|k| leak_report(k, &tx, &pl, &a)).collect()
    };
    let safe = run(vec![1, 1, 2, 2]);
    let leaky = run(vec![1, 1, 1, 2]);
    let took = start.elapsed();
    let want: [BTreeSet<ShareLabel>; 4] = [
        [ShareLabel::new(2, s(&[2, 3]))].into(),
        [ShareLabel::new(2, s(&[1, 3]))].into(),
        [ShareLabel::new(2, s(&[1, 2]))].into(),
        BTreeSet::new(),
    ];
    let safe_ok = safe.iter().all(|r| r.secure);
    let leaky_sets_ok = leaky.iter().zip(&want).all(|(r, w)| &r.leaked_shares == w);
    let leaky_flags_ok = leaky[..3].iter().all(|r| !r.secure) && leaky[3].secure;
    let flags = |rs: &[LeakReport]| -> String {
        rs.iter()
            .map(|r| if r.secure { "S" } else { "I" })
            .collect::<Vec<_>>()
            .join("")
    };
    gate.report(
        1,
        safe_ok && leaky_sets_ok && leaky_flags_ok && took < Duration::from_secs(1),
        "four-user keyless instance: (1,1,2,2) all secure; (1,1,1,2) users 1-3 leak S_2^23, S_2^13, S_2^12, user 4 secure",
        format!(
            "rank-test flags (1,1,2,2)={} (1,1,1,2)={}; leaked sets exact={leaky_sets_ok}",
            flags(&safe),
            flags(&leaky)
        ),
        took,
    );
}

fn criterion_2(gate: &mut Gate) {
    let start = Instant::now();
    let (p, _, pl) = instance(10, 10, 2, 2);
    let d = DemandVector::new(vec![1, 1, 1, 1, 1, 2, 2, 2, 2, 3], &p).unwrap();
    let a = analyze_demands(&d);
    let common = transmissions(Scheme::Common, &d, &pl).unwrap();
    let keys = transmissions(Scheme::Keys, &d, &pl).unwrap();
    let dt = delta_t(&a, 2, 10);
    let rc = rate_for_demand(Scheme::Common, &d, &p).rate;
    let rk = rate_for_demand(Scheme::Keys, &d, &p).rate;
    let took = start.elapsed();
    let got = (dt, common.saved().len(), common.len(), common.keyed_count(), common.keyless_count());
    let ratio = rc / rk;
    gate.report(
        2,
        got == (30, 5, 115, 86, 29)
            && keys.len() == 120
            && ratio == Ratio::new(115, 120)
            && Ratio::new(common.len() as u64, keys.len() as u64) == ratio
            && took < Duration::from_secs(5),
        "ten-user common instance d=(1,1,1,1,1,2,2,2,2,3): delta_t=30 saved=5 total=115 keyed=86 keyless=29, R_common/R_keys=115/120",
        format!("got delta_t={} saved={} total={} keyed={} keyless={} ratio={ratio}", got.0, got.1, got.2, got.3, got.4),
        took,
    );
}

/// Everything the sweep criteria need from one (N=K, t, scheme, d).
struct Outcome {
    decoded: bool,
    secure: Vec<bool>,
    leaked: Vec<BTreeSet<ShareLabel>>,
    single_overlap: bool,
    emitted: usize,
}

fn single_overlap(tx: &TransmissionSet) -> bool {
    let all = tx.transmissions();
    (0..all.len()).all(|i| {
        (i + 1..all.len()).all(|j| {
            all[i].summands.iter().filter(|l| all[j].summands.contains(l)).count() <= 1
        })
    })
}

fn evaluate(scheme: Scheme, d: &DemandVector, pl: &Placement, lib: &FileLibrary) -> Outcome {
    let p = pl.params();
    let a = analyze_demands(d);
    let tx = transmissions(scheme, d, pl).unwrap();
    let decoded = (1..=p.n_users()).all(|k| {
        decode(pl.view(k), &tx, &a, p).map(|w| w == lib.file(d.of(k))).unwrap_or(false)
    });
    let reports: Vec<LeakReport> = (1..=p.n_users()).map(|k| leak_report(k, &tx, pl, &a)).collect();
    Outcome {
        decoded,
        secure: reports.iter().map(|r| r.secure).collect(),
        leaked: reports.into_iter().map(|r| r.leaked_shares).collect(),
        single_overlap: single_overlap(&tx),
        emitted: tx.len(),
    }
}

struct SweepResult {
    n: usize,
    t: usize,
    params: SystemParams,
    demands: Vec<DemandVector>,
    outcomes: [Vec<Outcome>; 3],
    common_time: Duration,
}

fn sweep(n: usize, t: usize) -> SweepResult {
    let (p, lib, pl) = instance(n, n, t, 10 + (n * 10 + t) as u64);
    let demands: Vec<DemandVector> = (0..(n as u128).pow(n as u32))
        .map(|i| DemandVector::new(demand_at(i, n, n), &p).unwrap())
        .collect();
    let mut common_time = Duration::ZERO;
    let outcomes = Scheme::ALL.map(|scheme| {
        let start = Instant::now();
        let out: Vec<Outcome> = demands
            .par_iter()
            .enumerate()
            .map(|(epoch, d)| evaluate(scheme, d, &pl.rekeyed(epoch as u64), &lib))
            .collect();
        if scheme == Scheme::Common {
            common_time = start.elapsed();
        }
        out
    });
    SweepResult {
        n,
        t,
        params: p,
        demands,
        outcomes,
        common_time,
    }
}

fn idx(scheme: Scheme) -> usize {
    Scheme::ALL.iter().position(|&s| s == scheme).unwrap()
}

fn criterion_3(gate: &mut Gate, sweeps: &[SweepResult]) {
    let mut failures = Vec::new();
    let mut took = Duration::ZERO;
    for sw in sweeps {
        took += sw.common_time;
        let bad: usize = sw.outcomes[idx(Scheme::Common)]
            .iter()
            .map(|o| o.secure.iter().filter(|s| !**s).count())
            .sum();
        let first = sw.outcomes[idx(Scheme::Common)]
            .iter()
            .zip(&sw.demands)
            .find_map(|(o, d)| o.secure.iter().position(|s| !s).map(|u| format!("{d} user {}", u + 1)));
        failures.push(format!(
            "N=K={} t={}: {bad}/{} insecure{}",
            sw.n,
            sw.t,
            sw.demands.len() * sw.n,
            first.map(|f| format!(", first {f}")).unwrap_or_default()
        ));
    }
    let total: usize = sweeps
        .iter()
        .map(|sw| {
            sw.outcomes[idx(Scheme::Common)]
                .iter()
                .map(|o| o.secure.iter().filter(|s| !**s).count())
                .sum::<usize>()
        })
        .sum();
    gate.report(
        3,
        total == 0 && took < Duration::from_secs(600),
        "SCC_common passes the rank secrecy test for every user and d, N=K=4 t=1,2 and N=K=5 t=1,2,3",
        failures.join("; "),
        took,
    );
}

fn criterion_4(gate: &mut Gate, sweeps: &[SweepResult], took: Duration) {
    let mut bad = Vec::new();
    for sw in sweeps {
        for scheme in Scheme::ALL {
            let n = sw.outcomes[idx(scheme)].iter().filter(|o| !o.decoded).count();
            if n > 0 {
                bad.push(format!("{scheme} N=K={} t={}: {n}", sw.n, sw.t));
            }
        }
    }
    let vectors: usize = sweeps.iter().map(|s| s.demands.len()).sum();
    gate.report(
        4,
        bad.is_empty(),
        "bit-exact decoding for every user under all three schemes on the sweeps",
        if bad.is_empty() { format!("{} scheme-vector runs", 3 * vectors) } else { bad.join("; ") },
        took,
    );
}

fn criterion_5_6(gate: &mut Gate, sweeps: &[SweepResult]) {
    let start = Instant::now();
    let (mut mismatch5, mut mismatch6, mut pairs, mut leaks) = (0, 0, 0, 0);
    for sw in sweeps {
        for (o, d) in sw.outcomes[idx(Scheme::Keyless)].iter().zip(&sw.demands) {
            let a = analyze_demands(d);
            for k in 1..=sw.n {
                pairs += 1;
                let got = &o.leaked[k - 1];
                leaks += got.len();
                if *got != predicted_leaks(k, &sw.params, &a) {
                    mismatch5 += 1;
                }
                if got.len() as u128 != leak_count(k, sw.t, &a) {
                    mismatch6 += 1;
                }
            }
        }
    }
    let took = start.elapsed();
    gate.report(
        5,
        mismatch5 == 0,
        "keyless leaked-share sets equal the predicted leak sets",
        format!("{mismatch5} discrepancies over {pairs} (user, d) pairs, {leaks} leaked shares"),
        took,
    );
    gate.report(
        6,
        mismatch6 == 0,
        "|leaked| = binom(|E_k|-1, t)(N_e-1)",
        format!("{mismatch6} discrepancies over {pairs} pairs"),
        took,
    );
}

fn criterion_7(gate: &mut Gate, sweeps: &[SweepResult]) {
    let start = Instant::now();
    let (mut count_bad, mut bound_bad, mut pointwise_bad, mut avg_bad) = (0, 0, 0, 0);
    for sw in sweeps {
        let (k, t) = (sw.n as u64, sw.t as u64);
        let keys = rate_keys(&sw.params);
        let mut sum = Ratio::from_integer(0u64);
        for (o, d) in sw.outcomes[idx(Scheme::Common)].iter().zip(&sw.demands) {
            let a = analyze_demands(d);
            let dt = delta_t(&a, sw.t, sw.n);
            let free = binom(k - a.n_unique() as u64, t + 1).unwrap();
            let formula = binom(k, t + 1).unwrap() - free + dt;
            if formula != o.emitted as u64 {
                count_bad += 1;
            }
            if dt > free {
                bound_bad += 1;
            }
            let r = Ratio::new(o.emitted as u64, sw.params.block_count() as u64);
            if r > keys {
                pointwise_bad += 1;
            }
            sum += r;
        }
        let avg = sum / sw.demands.len() as u64;
        let exact = average_rate(Scheme::Common, &sw.params, AverageMode::Exact { budget: 1 << 20 })
            .unwrap()
            .r_avg_exact
            .unwrap();
        if avg > keys || Ratio::new(*avg.numer() as u128, *avg.denom() as u128) != exact {
            avg_bad += 1;
        }
    }
    let took = start.elapsed();
    gate.report(
        7,
        count_bad + bound_bad + pointwise_bad + avg_bad == 0,
        "common count formula = emitted count, delta_t <= binom(K-N_e,t+1), R_common <= R_keys pointwise and on average",
        format!("count {count_bad}, bound {bound_bad}, pointwise {pointwise_bad}, average {avg_bad} violations"),
        took,
    );
}

fn criterion_8(gate: &mut Gate) {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    for k in 3..=10usize {
        for t in 1..=k - 2 {
            let p = SystemParams::minimal(k, k, t).unwrap();
            let count = Ratio::new(binom(k as u64, t as u64 + 1).unwrap(), p.block_count() as u64);
            checked += 1;
            if rate_keys_closed_form(k, k, t).unwrap() != count {
                bad.push(format!("K={k} t={t}"));
            }
        }
    }
    gate.report(
        8,
        bad.is_empty(),
        "closed form K(N+M-1)/(N+(K+1)(M-1)) = binom(K,t+1) F_s/F, N=K in 3..10",
        format!("{checked} points, mismatches [{}]", bad.join(", ")),
        start.elapsed(),
    );
}

fn criterion_9(gate: &mut Gate) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut roundtrip_bad = 0;
    for (k, t) in SWEEPS {
        let p = SystemParams::new(k, k, t, SystemParams::minimal(k, k, t).unwrap().block_count() * 2).unwrap();
        for _ in 0..100 {
            let file: Vec<Gf256> = (0..p.file_len()).map(|_| Gf256(rng.gen())).collect();
            let r: Vec<Gf256> = (0..p.threshold() * p.share_len()).map(|_| Gf256(rng.gen())).collect();
            let shares = encode_file(&file, &p, &r).unwrap();
            if reconstruct_file(&shares, &p).unwrap() != file {
                roundtrip_bad += 1;
            }
        }
    }
    let mut cert_checked = 0;
    let mut cert_bad = 0;
    for (k, t) in [(4, 2), (5, 2)] {
        let p = SystemParams::minimal(k, k, t).unwrap();
        for subset in enumerate_subsets(p.n_shares(), p.threshold()) {
            let idx: Vec<usize> = subset.members().map(|m| m - 1).collect();
            cert_checked += 1;
            if !secrecy_certificate(&p, &idx).unwrap() {
                cert_bad += 1;
            }
        }
    }
    let mut cache_bad = 0;
    for (k, t) in SWEEPS {
        let (p, _, pl) = instance(k, k, t, 5);
        let d = DemandVector::new(vec![1; k], &p).unwrap();
        let full = transmissions(Scheme::Keys, &d, &pl).unwrap();
        let every: Vec<UserSubset> = full.transmissions().iter().map(|y| y.subset).collect();
        let none = full.without(&every);
        for u in 1..=k {
            for file in 1..=k {
                let d = DemandVector::new(vec![file; k], &p).unwrap();
                if !is_secure(&build_observation(pl.cache(u), &none, &pl), &d) {
                    cache_bad += 1;
                }
            }
        }
    }
    gate.report(
        9,
        roundtrip_bad == 0 && cert_bad == 0 && cert_checked == 20 + 210 && cache_bad == 0,
        "sharing roundtrip (100 files per (K,t)), certificate on all z-subsets at (4,2),(5,2), cache-only secrecy",
        format!("roundtrip failures {roundtrip_bad}, certificates {cert_checked} checked/{cert_bad} failed, cache-only failures {cache_bad}"),
        start.elapsed(),
    );
}

fn criterion_10(gate: &mut Gate, sweeps: &[SweepResult]) {
    let start = Instant::now();
    let bad: usize = sweeps
        .iter()
        .flat_map(|sw| sw.outcomes.iter())
        .flat_map(|v| v.iter())
        .filter(|o| !o.single_overlap)
        .count();
    gate.report(
        10,
        bad == 0,
        "any two transmissions share at most one summand, every scheme and sweep",
        format!("{bad} violating transmission sets"),
        start.elapsed(),
    );
}

fn criterion_11(gate: &mut Gate) {
    let start = Instant::now();
    let p = SystemParams::minimal(4, 4, 2).unwrap();
    let exact = average_rate(Scheme::Common, &p, AverageMode::Exact { budget: 256 }).unwrap();
    let mc = average_rate(Scheme::Common, &p, AverageMode::MonteCarlo { samples: 10_000, seed: 2024 }).unwrap();
    let se = mc.std_error.unwrap();
    let gap = (mc.r_avg - exact.r_avg).abs();
    gate.report(
        11,
        se > 0.0 && gap <= 3.0 * se,
        "monte-carlo R_avg (10^4 samples) within 3 standard errors of exact, N=K=4 t=2 common",
        format!(
            "exact {} = {:.6}, mc {:.6}, se {:.6}, |gap| = {:.2} se",
            exact.r_avg_exact.unwrap(),
            exact.r_avg,
            mc.r_avg,
            se,
            gap / se
        ),
        start.elapsed(),
    );
}

fn main() {
    let mut gate = Gate { failed: 0 };
    criterion_1(&mut gate);
    criterion_2(&mut gate);
    let start = Instant::now();
    let sweeps: Vec<SweepResult> = SWEEPS.iter().map(|&(n, t)| sweep(n, t)).collect();
    let sweep_time = start.elapsed();
    criterion_3(&mut gate, &sweeps);
    criterion_4(&mut gate, &sweeps, sweep_time);
    criterion_5_6(&mut gate, &sweeps);
    criterion_7(&mut gate, &sweeps);
    criterion_8(&mut gate);
    criterion_9(&mut gate);
    criterion_10(&mut gate, &sweeps);
    criterion_11(&mut gate);
    println!("{} of 11 criteria failed", gate.failed);
    if gate.failed > 0 {
        std::process::exit(1);
    }
}
