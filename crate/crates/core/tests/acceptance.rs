//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Run all with `cargo test --release --test acceptance`, or a subset by
//! number: `cargo test --release --test acceptance -- 3 7`. The binary exits
//! zero even when a criterion fails; the report is the result.

mod common;

use std::time::Instant;

use proptest::test_runner::{Config, TestRunner};

use chemneuron::crn::{replicate_rng, ssa_run, BolusSchedule, NetworkSpec, Sampling, Simulator, TimeAverage};
use chemneuron::dsl::{parse_network, print_network};
use chemneuron::experiments::*;
use chemneuron::model::{
    activation_equilibrium, build_basic_cn, build_hill_cn, default_hill_theta, effective_hill_exponent,
    estimate_threshold, BasicConfig, BasicRates, ChainRates, CnNetwork, DEFAULT_THRESHOLD_CAP,
};
use chemneuron::stimulus::AssociativePattern;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn seeds(n: u64) -> Vec<u64> {
    (1..=n).collect()
}

fn within(x: f64, target: f64, se: f64, k: f64) -> bool {
    (x - target).abs() <= k * se
}

fn count(runs: &[TaskRun]) -> usize {
    runs.iter().filter(|r| r.success).count()
}

// 1. Birth-death stationary mean and linear-decay ensemble mean.
fn ssa_engine() -> Outcome {
    let bd = parse_network("species X = 0\n -> X @ 10\nX -> @ 1\n").unwrap();
    let x = bd.require("X").unwrap();
    let means: Vec<f64> = seeds(200)
        .iter()
        .map(|&s| {
            let mut avg = TimeAverage::new(20.0, 220.0, &[x]).unwrap();
            Simulator::new(&bd, replicate_rng(s, 0))
                .run(&BolusSchedule::empty(), 220.0, &mut avg)
                .unwrap();
            avg.means().unwrap()[0]
        })
        .collect();
    let bd_stat = Stat::of(&means).unwrap();
    let bd_ok = within(bd_stat.mean, 10.0, bd_stat.stderr, 3.0);

    let (n0, k) = (1000.0, 1.0);
    let decay = parse_network("species A = 1000\nA -> @ 1\n").unwrap();
    let runs: Vec<_> = seeds(200)
        .iter()
        .map(|&s| ssa_run(&decay, &BolusSchedule::empty(), 2.0, s, &Sampling::every(0.2)).unwrap())
        .collect();
    let mut worst: f64 = 0.0;
    for i in 1..=10 {
        let t = 0.2 * i as f64;
        let values: Vec<f64> = runs.iter().map(|r| r.value_at(0, t).unwrap()).collect();
        let st = Stat::of(&values).unwrap();
        worst = worst.max((st.mean - n0 * (-k * t).exp()).abs() / st.stderr);
    }
    outcome(
        bd_ok && worst <= 3.0,
        format!(
            "birth-death mean {:.3} +- {:.3} (target 10); decay worst deviation {worst:.2} SE over 10 checkpoints",
            bd_stat.mean, bd_stat.stderr
        ),
    )
}

/// One receptor ladder with `B` clamped at `n_b`.
fn clamped_ladder(m: usize, r: &ChainRates, n_b: u64) -> NetworkSpec {
    let mut b = NetworkSpec::builder();
    let bb = b.add_species("B", n_b).unwrap();
    b.clamp(bb);
    let states: Vec<_> = (0..=m)
        .map(|i| b.add_species(&format!("E{i}"), (i == 0) as u64).unwrap())
        .collect();
    for i in 0..m {
        let off = if i + 1 == m { r.k_minus_last } else { r.k_minus };
        b.add_reversible(&[bb, states[i]], &[states[i + 1]], r.k_plus, off).unwrap();
    }
    b.build()
}

// 2. Ladder occupancy against the detailed-balance equilibrium.
fn activation_chain() -> Outcome {
    let r = BasicRates::default().chain();
    let mut worst: f64 = 0.0;
    let mut slopes = Vec::new();
    for m in [1, 3, 5] {
        let theta = estimate_threshold(m, &r, DEFAULT_THRESHOLD_CAP).unwrap().theta;
        for f in [0.5, 0.75, 1.0, 1.5, 2.0] {
            let n_b = (f * theta).round().max(1.0) as u64;
            let net = clamped_ladder(m, &r, n_b);
            let top = net.require(&format!("E{m}")).unwrap();
            let slowest = r.k_minus.min(r.k_minus_last).min(r.k_plus * n_b as f64);
            let t_end = 2000.0 / slowest;
            let occ: Vec<f64> = seeds(40)
                .iter()
                .map(|&s| {
                    let mut avg = TimeAverage::new(0.1 * t_end, t_end, &[top]).unwrap();
                    Simulator::new(&net, replicate_rng(s, 0))
                        .run(&BolusSchedule::empty(), t_end, &mut avg)
                        .unwrap();
                    avg.means().unwrap()[0]
                })
                .collect();
            let st = Stat::of(&occ).unwrap();
            let p = activation_equilibrium(m, &r, n_b as f64);
            worst = worst.max((st.mean - p).abs() / st.stderr.max(1e-12));
        }
        slopes.push((m, effective_hill_exponent(m, &r).unwrap()));
    }
    let slope_ok = slopes.iter().all(|&(m, h)| h <= m as f64 + 1e-9);
    outcome(
        worst <= 3.0 && slope_ok,
        format!("worst occupancy deviation {worst:.2} SE over 15 points; Hill slopes {slopes:.3?}"),
    )
}

// 3. Single channel, H = 100, one bolus at t = 0.015.
fn single_bolus() -> Outcome {
    let cfg = BasicConfig::new(1, ASSOC_NONLINEARITY)
        .with_weights(vec![100])
        .with_bolus_size(ASSOC_BOLUS)
        .with_rates(associative_rates());
    let cn = build_basic_cn(&cfg).unwrap();
    let bolus = cn.bolus(0, 0.015);
    let mut sim = Simulator::new(&cn.spec, replicate_rng(1, 0));
    let mut obs = signal_trigger(&cn, cn.default_trigger_level());
    sim.advance(bolus.time, &mut obs);
    sim.inject(&bolus).unwrap();
    sim.advance(2.0, &mut obs);
    let triggers = obs.intervals(0.0);
    let dh = cn.weights(sim.counts())[0] as f64 - 100.0;
    outcome(
        !triggers.is_empty() && dh > 0.0,
        format!("{} trigger interval(s), dH = {dh}", triggers.len()),
    )
}

fn associative(cn: &CnNetwork, n: u64) -> (usize, usize, f64, f64) {
    let pattern = AssociativePattern::default();
    let (mut pre, mut post, mut d1, mut d2) = (0, 0, 0.0, 0.0);
    for s in seeds(n) {
        let r = run_associative(cn, &pattern, cn.default_trigger_level(), s).unwrap();
        pre += r.pre_probe_triggered as usize;
        post += r.post_probe_triggered as usize;
        for p in &r.pair_increments {
            d1 += p[0];
            d2 += p[1];
        }
    }
    let pairs = (n as usize * pattern.pairs) as f64;
    (pre, post, d1 / pairs, d2 / pairs)
}

fn associative_ok(cn: &CnNetwork) -> Outcome {
    let (pre, post, d1, d2) = associative(cn, 20);
    let ratio = if d1 > 0.0 { d2 / d1 } else { f64::INFINITY };
    outcome(
        pre <= 1 && post >= 18 && d2 > 0.0 && ratio > 5.0,
        format!("pre-training probe {pre}/20, post-training {post}/20, mean dH1 {d1:.2}, dH2 {d2:.2}, ratio {ratio:.1}"),
    )
}

// 4. Associative learning.
fn associative_learning() -> Outcome {
    associative_ok(&build_basic_cn(&associative_config()).unwrap())
}

fn task_line(label: &str, runs: &[TaskRun]) -> String {
    format!("{label} {}/{}", count(runs), runs.len())
}

// 5. Frequency bias, full protocol.
fn frequency_bias() -> Outcome {
    let cn = build_basic_cn(&task_config(1, FB_BOLUS)).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [2, 3, 4] {
        let runs = run_task(&cn, Task::Fb(k), &InputSpec::default(), &Protocol::default(), &seeds(10)).unwrap();
        ok &= count(&runs) >= 9;
        parts.push(task_line(&format!("FB{k}"), &runs));
    }
    outcome(ok, parts.join(", ") + " (need 9/10)")
}

// 6. Temporal correlation, reduced protocol.
fn temporal_correlation() -> Outcome {
    let cn = build_basic_cn(&task_config(5, TC_BOLUS)).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [2, 3, 4] {
        let runs = run_task(&cn, Task::Tc(k), &InputSpec::default(), &Protocol::reduced(), &seeds(10)).unwrap();
        ok &= count(&runs) >= 8;
        let first = runs.iter().filter(|r| argmax(&r.summary.means) == 0).count();
        parts.push(format!("{} (leader heaviest {first}/10)", task_line(&format!("TC{k}"), &runs)));
    }
    outcome(ok, parts.join(", ") + " (need 8/10, transient 350 window 150)")
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

// 7. Two-bolus delay protocol.
fn delay_sweep() -> Outcome {
    let reps = 1000;
    let point = |m: usize, delta: f64| {
        let cn = build_basic_cn(&delay_config(m)).unwrap();
        delay_point(&cn, delta, reps, 1).unwrap()
    };
    let mut detail = Vec::new();

    let zero = point(1, 0.0);
    let z = zero.h1_fraction.clone().unwrap();
    let a = (z.mean - 0.5).abs() <= 0.03;
    detail.push(format!("(a) m=1 delta=0: {:.3} +- {:.3}", z.mean, z.stderr));

    let mut b = true;
    for m in [4, 5] {
        for delta in [0.12, 0.2, 0.5] {
            let p = point(m, delta);
            let (h, base) = (p.h1_fraction.unwrap(), p.baseline.unwrap());
            let se = h.stderr.hypot(base.stderr);
            b &= within(h.mean, base.mean, se, 3.0);
            detail.push(format!("(b) m={m} delta={delta}: {:.3} vs baseline {:.3} +- {:.3}", h.mean, base.mean, se));
        }
    }

    let mut c = true;
    for delta in [0.01, 0.02, 0.05, 0.08] {
        let h = point(1, delta).h1_fraction.unwrap();
        c &= h.mean - 0.5 >= 3.0 * h.stderr;
        detail.push(format!("(c) m=1 delta={delta}: {:.3} +- {:.3}", h.mean, h.stderr));
    }
    let verdict = format!("a={} b={} c={}", pf(a), pf(b), pf(c));
    outcome(a && b && c, format!("{verdict}; {}", detail.join("; ")))
}

fn pf(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

// 8. Index of dispersion over chain length on TC2.
fn dispersion() -> Outcome {
    let fractions = [0.5, 1.0, 2.0];
    let ms: Vec<usize> = (1..=10).collect();
    let protocol = Protocol {
        transient: 100.0,
        window: 100.0,
    };
    let results = sweep_iod(
        &ms,
        &fractions,
        Task::Tc(2),
        &task_config(1, 1),
        &InputSpec::default(),
        &protocol,
        &seeds(10),
    )
    .unwrap();
    let medians: Vec<Vec<f64>> = results
        .iter()
        .map(|r| r.points.iter().map(|p| p.dispersion.as_ref().map_or(0.0, |d| d.median)).collect())
        .collect();
    let peaks: Vec<usize> = medians.iter().map(|v| ms[argmax(v)]).collect();
    let interior = peaks[0] > 1 && peaks[0] < 10;
    let monotone = peaks.windows(2).all(|w| w[0] <= w[1]);
    let rows: Vec<String> = fractions
        .iter()
        .zip(&medians)
        .map(|(f, v)| format!("f={f}: {:?}", v.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>()))
        .collect();
    outcome(
        interior && monotone,
        format!("argmax m per fraction {peaks:?}; medians {} (transient 100 window 100)", rows.join(" ")),
    )
}

// 9. Mixed task: correlated follower wins at small boluses, fast channel at large.
fn bolus_crossover() -> Outcome {
    let m = 8;
    let mut base = task_config(m, 1);
    base.channels = 3;
    base.initial_weights.clear();
    let run = |f: f64, protocol: Protocol| {
        let mut cfg = base.clone();
        cfg.bolus_size = bolus_for_fraction(&cfg, m, f).unwrap();
        let cn = build_basic_cn(&cfg).unwrap();
        let runs = run_task(&cn, Task::Mixed, &InputSpec::default(), &protocol, &seeds(10)).unwrap();
        let winners: Vec<usize> = runs.iter().map(|r| argmax(&r.summary.normalized)).collect();
        (cfg.bolus_size, winners)
    };
    let (small_beta, small) = run(1.7, Protocol::default());
    let (large_beta, large) = run(10.0, Protocol::reduced());
    let follower = small.iter().filter(|&&w| w == 1).count();
    let fast = large.iter().filter(|&&w| w == 2).count();
    outcome(
        follower >= 8 && fast >= 8,
        format!(
            "m={m}: fraction 1.7 (beta {small_beta}) channel 2 largest {follower}/10; \
             fraction 10 (beta {large_beta}, reduced protocol) channel 3 largest {fast}/10"
        ),
    )
}

// 10. Minimal frequency detector.
fn frequency_detector() -> Outcome {
    let (beta, d) = (10, 1.0);
    let ch = minimal_detector_reference(&[4.0, 2.0], beta, d, 1010.0, &seeds(20)).unwrap();
    let each = ch.iter().all(|c| within(c.observed.mean, c.expected, c.observed.stderr, 3.0));
    let ratio = ch[0].observed.mean / ch[1].observed.mean;
    let parts: Vec<String> = ch
        .iter()
        .map(|c| format!("f={}: {:.2} +- {:.2} (expected {})", c.frequency, c.observed.mean, c.observed.stderr, c.expected))
        .collect();
    outcome(
        each && (ratio / 2.0 - 1.0).abs() <= 0.05,
        format!("{}; ratio {ratio:.3}", parts.join(", ")),
    )
}

// 11. Compartmental neuron with the Hill activation step.
fn biological() -> Outcome {
    let task_cfg = bio_task_config();
    let theta = default_hill_theta(&task_cfg).unwrap();
    let h = task_cfg.rates.hill_exponent;
    let assoc = associative_ok(&build_hill_cn(&bio_associative_config(), h, theta).unwrap());
    let cn = build_hill_cn(&task_cfg, h, theta).unwrap();
    let fb = run_task(&cn, Task::Fb(2), &InputSpec::default(), &Protocol::default(), &seeds(10)).unwrap();
    let tc = run_task(&cn, Task::Tc(2), &InputSpec::default(), &Protocol::default(), &seeds(10)).unwrap();
    outcome(
        assoc.pass && count(&fb) >= 9 && count(&tc) >= 8,
        format!(
            "associative [{}] {}; {}; {} (need 9/10 and 8/10)",
            pf(assoc.pass),
            assoc.detail,
            task_line("FB2", &fb),
            task_line("TC2", &tc)
        ),
    )
}

// 12. DSL round trip and the emitted (2, 3) neuron.
fn dsl() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    });
    let round_trip = runner.run(&common::network(), |net| {
        let back = parse_network(&print_network(&net)).expect("printed network parses");
        assert_eq!(back, net);
        Ok(())
    });
    let cn = build_basic_cn(&BasicConfig::new(2, 3)).unwrap();
    let reparsed = parse_network(&print_network(&cn.spec)).unwrap();
    let (s, r) = (reparsed.num_species(), reparsed.num_reactions());
    outcome(
        round_trip.is_ok() && s == 15 && r == 31,
        format!("10000 generated networks round-trip: {}; (2,3) neuron has {s} species, {r} reactions", round_trip.is_ok()),
    )
}

fn main() {
    let criteria: [(usize, &str, fn() -> Outcome); 12] = [
        (1, "SSA engine", ssa_engine),
        (2, "activation chain", activation_chain),
        (3, "single bolus trigger", single_bolus),
        (4, "associative learning", associative_learning),
        (5, "frequency bias", frequency_bias),
        (6, "temporal correlation", temporal_correlation),
        (7, "delay sweep", delay_sweep),
        (8, "index of dispersion", dispersion),
        (9, "bolus crossover", bolus_crossover),
        (10, "frequency detector", frequency_detector),
        (11, "compartmental neuron", biological),
        (12, "reaction DSL", dsl),
    ];
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut passed = 0;
    let mut ran = 0;
    for (n, name, check) in criteria {
        if !wanted.is_empty() && !wanted.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        ran += 1;
        passed += o.pass as usize;
        println!(
            "criterion {n:>2} {} {name} [{:.0}s]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("{passed}/{ran} criteria passed");
}
