//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 8 is a qualitative claim about the overlap-scheduled scheme; it
//! is recorded as observed or not observed and never fails the run. All other
//! criteria are asserted at the end, after every line has been printed.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wyner_rates::info::{GaussianMac, SubsetIndex};
use wyner_rates::linalg::Matrix;
use wyner_rates::polymatroid::{brute_force_grouped_rate, max_grouped_rate, RateGrouping};
use wyner_rates::schemes::*;
use wyner_rates::topology::*;
use wyner_rates_cli::{close_to_capacity_shortfalls, run_sweep, Grid, OutputFormat, SweepSpec, SweepVariable};

fn c(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

/// Writes past the test harness's output capture, so the verdicts show up in
/// a plain `cargo test` log.
fn report(line: std::fmt::Arguments) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

struct Outcome {
    id: u8,
    name: &'static str,
    pass: bool,
    asserted: bool,
    detail: String,
    elapsed: Duration,
}

fn run(
    id: u8,
    name: &'static str,
    asserted: bool,
    limit: Option<Duration>,
    f: impl FnOnce() -> (bool, String),
) -> Outcome {
    let t = Instant::now();
    let (mut pass, mut detail) = f();
    let elapsed = t.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            pass = false;
            detail.push_str(&format!("; runtime {elapsed:.2?} exceeds {limit:?}"));
        }
    }
    let verdict = match (asserted, pass) {
        (true, true) => "PASS",
        (true, false) => "FAIL",
        (false, true) => "OBSERVED",
        (false, false) => "NOT OBSERVED",
    };
    report(format_args!("[{verdict}] {id}. {name}: {detail} ({elapsed:.2?})"));
    Outcome {
        id,
        name,
        pass,
        asserted,
        detail,
        elapsed,
    }
}

fn hk_generic(alpha: f64, p: f64, lambda: f64) -> Vec<f64> {
    let m = build_hk_single_cell(
        &CellArrayModel::<f64>::new(Dimension::Line1D, alpha, p).unwrap(),
        lambda,
    )
    .unwrap();
    let mac = m.mac(p).unwrap();
    let f = |cols: &[usize]| mac.subset_rate(SubsetIndex::from_indices(cols.iter().copied()));
    // columns: x[-1]^d, x[0]^d, x[0]^ud, x[1]^d
    vec![
        f(&[2]),
        f(&[3]),
        f(&[0, 3]) / 2.0,
        f(&[0, 1, 3]) / 3.0,
        f(&[2, 3]),
        f(&[0, 2, 3]),
        f(&[0, 1, 2, 3]),
    ]
}

fn criterion_1() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let a = rng.gen_range(0.0..=1.0);
        let p = 10f64.powf(rng.gen_range(-1.0..3.0));
        let l = rng.gen_range(0.0..=1.0);
        let closed = hk_region_constraints(a, p, l).unwrap();
        for (row, g) in closed.iter().zip(hk_generic(a, p, l)) {
            worst = worst.max((row.bound - g).abs());
        }
    }
    (
        worst <= 1e-10,
        format!("200 triples, 7 bounds each, max |closed − generic| = {worst:.2e}"),
    )
}

fn random_mac(rng: &mut ChaCha8Rng, max_inputs: usize) -> GaussianMac<f64> {
    let n_t = rng.gen_range(1..=max_inputs);
    let n_r = rng.gen_range(1..=3);
    let h = Matrix::from_fn(n_r, n_t, |_, _| rng.gen_range(-1.0..1.0));
    // Correlated noise I + B Bᵀ.
    let b = Matrix::from_fn(n_r, n_r, |_, _| rng.gen_range(-0.5..0.5));
    let k = Matrix::identity(n_r).add(&b.outer_gram()).unwrap();
    GaussianMac::new(h, 10f64.powf(rng.gen_range(-1.0..2.0)), k).unwrap()
}

fn random_grouping(rng: &mut ChaCha8Rng, n_t: usize) -> RateGrouping<f64> {
    let groups = rng.gen_range(1..=3.min(n_t));
    let mut group_of: Vec<usize> = (0..n_t)
        .map(|i| if i < groups { i } else { rng.gen_range(0..groups) })
        .collect();
    for i in (1..n_t).rev() {
        let j = rng.gen_range(0..=i);
        group_of.swap(i, j);
    }
    let weights = (0..groups).map(|_| rng.gen_range(0.1..2.0)).collect();
    RateGrouping::new(group_of, weights).unwrap()
}

fn criterion_2() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let mac = random_mac(&mut rng, 5);
        let grouping = random_grouping(&mut rng, mac.num_inputs());
        let lp = max_grouped_rate(&mac, &grouping).unwrap().objective;
        let bf = brute_force_grouped_rate(&mac, &grouping, 1e-4).unwrap().value();
        worst = worst.max((lp - bf).abs());
    }
    (
        worst <= 5e-4,
        format!("50 MACs (N_t ≤ 5, ≤ 3 groups), max |LP − grid| = {worst:.2e}"),
    )
}

fn criterion_3() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = 1e-9;
    let (mut normalized, mut monotone, mut submodular) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let mac = random_mac(&mut rng, 6);
        let n = mac.num_inputs();
        let f = mac.subset_rate_table().unwrap();
        normalized = normalized.max(f[0].abs());
        for s in 0..1usize << n {
            for i in (0..n).filter(|i| s >> i & 1 == 0) {
                monotone = monotone.max(f[s] - f[s | 1 << i]);
                for j in (i + 1..n).filter(|j| s >> j & 1 == 0) {
                    submodular = submodular.max(f[s | 1 << i | 1 << j] + f[s] - f[s | 1 << i] - f[s | 1 << j]);
                }
            }
        }
    }
    (
        normalized <= tol && monotone <= tol && submodular <= tol,
        format!("100 MACs (N_t ≤ 6): |f(∅)| ≤ {normalized:.1e}, monotonicity violation ≤ {monotone:.1e}, submodularity violation ≤ {submodular:.1e}"),
    )
}

fn criterion_4() -> (bool, String) {
    let opts = EvalOptions::default();
    let cp = c(10.0);
    let mut worst = 0.0f64;
    let mut count = 0;
    for dim in [Dimension::Line1D, Dimension::Hex2D] {
        let m = CellArrayModel::<f64>::from_snr_db(dim, 0.0, 10.0).unwrap();
        for id in SchemeId::available(dim).filter(|&id| id != SchemeId::TimeSharing) {
            worst = worst.max((evaluate(id, &m, &opts).unwrap().rate.value() - cp).abs());
            count += 1;
        }
    }
    let ts = time_sharing_rate(&CellArrayModel::<f64>::from_snr_db(Dimension::Line1D, 0.0, 10.0).unwrap()).value();
    let ts_err = (ts - 21f64.log2() / 4.0).abs();
    (
        worst <= 1e-6 && ts_err <= 1e-9,
        format!(
            "{count} scheme/array pairs vs ½log2(11) = {cp:.6}: max dev {worst:.2e}; time-sharing {ts:.7} vs ¼log2(21): dev {ts_err:.1e}"
        ),
    )
}

fn criterion_5() -> (bool, String) {
    let m = CellArrayModel::<f64>::from_snr_db(Dimension::Line1D, 0.5, 10.0).unwrap();
    let naive = naive_rate(&m).value();
    let sched = scheduled_digital_rate(&m).value();
    (
        (naive - 0.707519).abs() <= 1e-6 && (sched - 1.218618).abs() <= 1e-6,
        format!("naive {naive:.7} (0.707519), scheduled {sched:.7} (1.218618)"),
    )
}

fn criterion_6() -> (bool, String) {
    let mut worst = f64::NEG_INFINITY;
    let mut at = String::new();
    let mut rows = 0;
    for dim in [Dimension::Line1D, Dimension::Hex2D] {
        for db in [0.0, 5.0, 10.0, 15.0, 20.0] {
            let spec = SweepSpec {
                schemes: SchemeId::available(dim).collect(),
                dimension: dim,
                variable: SweepVariable::Alpha,
                grid: Grid::new(0.0, 1.0, 0.05).unwrap(),
                fixed: db,
                layers: 4,
                format: OutputFormat::Csv,
            };
            let records = run_sweep(&spec).unwrap();
            rows += records.len();
            for r in records.iter().filter(|r| r.scheme != SchemeId::Wyner.name()) {
                let w = records
                    .iter()
                    .find(|w| w.scheme == SchemeId::Wyner.name() && w.alpha == r.alpha)
                    .unwrap();
                let excess = r.rate - w.rate;
                if excess > worst {
                    worst = excess;
                    at = format!("{} {dim} α={} {db} dB", r.scheme, r.alpha);
                }
            }
        }
    }
    (
        worst <= 1e-6,
        format!("{rows} rows, max (rate − bound) = {worst:.3e} at {at}"),
    )
}

fn criterion_7() -> (bool, String) {
    let opts = EvalOptions::default();
    let mut exact = true;
    for dim in [Dimension::Line1D, Dimension::Hex2D] {
        for k in 0..=20 {
            for db in [0.0, 5.0, 10.0, 15.0, 20.0] {
                let m = CellArrayModel::<f64>::from_snr_db(dim, k as f64 / 20.0, db).unwrap();
                let ml = multilayer_scheduled_rate(&m, 1, &opts).unwrap().rate.value();
                let sd = scheduled_digital_rate(&m).value();
                // On the line the two share one expression; on the hexagonal
                // array the color averages are summed in a different order.
                exact &= if dim == Dimension::Line1D {
                    ml == sd
                } else {
                    (ml - sd).abs() <= 1e-12
                };
            }
        }
    }
    let mut phase2 = 0.0f64;
    for (dim, phases) in [
        (Dimension::Line1D, &[LatePhase::B][..]),
        (Dimension::Hex2D, &[LatePhase::B, LatePhase::C][..]),
    ] {
        for a in [0.2, 0.5, 1.0] {
            let m = CellArrayModel::<f64>::from_snr_db(dim, a, 10.0).unwrap();
            for &ph in phases {
                let late = build_overlap_scheduled_late(&m, 1.0, ph).unwrap();
                phase2 = phase2.max(
                    late.mac(m.power())
                        .unwrap()
                        .subset_rate(SubsetIndex::full(late.h_d.cols()))
                        .abs(),
                );
            }
        }
    }
    let mut quad = 0.0f64;
    for dim in [Dimension::Line1D, Dimension::Hex2D] {
        for p in [0.1, 1.0, 10.0, 1000.0] {
            let w = wyner_bound(&CellArrayModel::<f64>::new(dim, 0.0, p).unwrap())
                .unwrap()
                .value();
            quad = quad.max((w - c(p)).abs());
        }
    }
    (
        exact && phase2 == 0.0 && quad <= 1e-10,
        format!(
            "multilayer(M=1) ≡ scheduled on 105 points per array: {exact}; phase-2 rate at λ=1: {phase2}; bound at α=0 vs C(P): {quad:.1e}"
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let spec = SweepSpec {
        schemes: vec![SchemeId::Wyner, SchemeId::OverlapScheduled],
        dimension: Dimension::Line1D,
        variable: SweepVariable::Alpha,
        grid: Grid::new(0.0, 0.8, 0.01).unwrap(),
        fixed: 10.0,
        layers: 4,
        format: OutputFormat::Csv,
    };
    let records = run_sweep(&spec).unwrap();
    let ratio = |a: f64| {
        let get = |s: SchemeId| {
            records
                .iter()
                .find(|r| r.scheme == s.name() && r.alpha == a)
                .unwrap()
                .rate
        };
        get(SchemeId::OverlapScheduled) / get(SchemeId::Wyner)
    };
    let below: Vec<f64> = spec.points().iter().map(|p| p.0).filter(|&a| ratio(a) < 0.9).collect();
    let flagged: Vec<f64> = close_to_capacity_shortfalls(&records)
        .unwrap()
        .iter()
        .map(|s| s.alpha)
        .collect();
    assert_eq!(
        flagged, below,
        "every point under the threshold must be flagged by the sweep"
    );
    let (worst_at, worst) = spec
        .points()
        .iter()
        .map(|p| (p.0, ratio(p.0)))
        .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let detail = if below.is_empty() {
        format!("ratio ≥ 0.9 on all of α ∈ [0, 0.8]; minimum {worst:.4} at α={worst_at}")
    } else {
        format!(
            "ratio < 0.9 at {} of 81 points, α ∈ [{}, {}], minimum {worst:.4} at α={worst_at}; all {} flagged by the sweep",
            below.len(),
            below[0],
            below[below.len() - 1],
            flagged.len()
        )
    };
    (below.is_empty(), detail)
}

fn sweep_bytes(args: &[&str], threads: Option<&str>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wyner-rates"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("WYNER_RATES_THREADS", t),
        None => cmd.env_remove("WYNER_RATES_THREADS"),
    };
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn criterion_9() -> (bool, String) {
    let line = ["figure", "fig-1d-10db"];
    let hex = [
        "sweep",
        "--schemes",
        "all",
        "--dim",
        "2d",
        "--start",
        "0",
        "--stop",
        "1",
        "--step",
        "0.1",
        "--snr-db",
        "10",
        "--format",
        "json",
    ];
    let a = sweep_bytes(&line, Some("1"));
    let b = sweep_bytes(&line, Some("3"));
    let h1 = sweep_bytes(&hex, None);
    let h2 = sweep_bytes(&hex, Some("2"));
    (
        a == b && h1 == h2 && !a.is_empty(),
        format!(
            "fig-1d-10db CSV ({} bytes) and a 2D JSON sweep ({} bytes) identical across runs and thread counts",
            a.len(),
            h1.len()
        ),
    )
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    // Start below the harness's "test acceptance ..." prefix.
    report(format_args!(""));
    let outcomes = [
        run(1, "closed-form region equivalence", true, Some(secs(1)), criterion_1),
        run(2, "LP vs brute force", true, Some(secs(30)), criterion_2),
        run(3, "polymatroid sanity", true, Some(secs(10)), criterion_3),
        run(4, "anchors at α=0, 10 dB", true, None, criterion_4),
        run(5, "closed-form spot values", true, None, criterion_5),
        run(
            6,
            "joint-processing bound dominance",
            true,
            Some(secs(300)),
            criterion_6,
        ),
        run(7, "degeneracy identities", true, None, criterion_7),
        run(
            8,
            "overlap-scheduled ≥ 0.9·bound for α ≤ 0.8 at 10 dB (recorded)",
            false,
            None,
            criterion_8,
        ),
        run(9, "determinism", true, None, criterion_9),
    ];
    let total: Duration = outcomes.iter().map(|o| o.elapsed).sum();
    report(format_args!("acceptance total {total:.2?}"));
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| o.asserted && !o.pass)
        .map(|o| format!("{} {}: {}", o.id, o.name, o.detail))
        .collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
