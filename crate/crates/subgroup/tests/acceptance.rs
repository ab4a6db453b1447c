//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::time::{Duration, Instant};

use subgroup::commands::{group_sweep_rows, SweepRow, Variant};
use subgroup::format::{csv_string, fmt_f64, rate_map_csv, report_csv};
use subgroup::parallel::{par_map, run_algorithm1, run_trials};
use subgroup::ScenarioConfig;
use subgroup_core::capacity::{
    asymptotic_relative_loss, ergodic_capacity_lower, ergodic_capacity_upper, esnr_from_gamma,
    optimum_snr, relative_loss_at, sigma_m_from_loss, AntennaConfig, LinkBudget, MismatchSolution,
};
use subgroup_core::channel::{
    combined_correlation, freq_correlation, inverse_freq_correlation, inverse_time_correlation,
    time_correlation, CorrelationModel, DelayProfile, DopplerSpec,
};
use subgroup_core::grouping::{
    group_dimensions, group_size, membership_check, tile_with_stages, GridSpec,
};
use subgroup_core::sim::{sample_iid_channel, sample_offset_channel, SubstreamRng};

const SEED: u64 = 20_240_601;

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

fn workers() -> usize {
    subgroup::parallel::default_workers()
}

fn ra_model(speed: f64) -> CorrelationModel {
    CorrelationModel::new(
        DelayProfile::rural_area(),
        DopplerSpec::new(2e9, speed).unwrap(),
    )
}

fn c1_asymptote() -> Outcome {
    let r = asymptotic_relative_loss(10.0, 0.1).unwrap();
    outcome(
        (r - 0.2528).abs() <= 5e-4,
        format!("asymptote {r:.6} (target 0.2528 ± 5e-4)"),
    )
}

fn c2_antenna_convergence() -> Outcome {
    let rho_t = 10.0;
    let sigma = 0.1;
    let rel: Vec<f64> = (1..=80)
        .map(|n| {
            let a = AntennaConfig::square(n).unwrap();
            let b = LinkBudget::from_total_power(rho_t, a).unwrap();
            relative_loss_at(a, b.gamma(), sigma).unwrap()
        })
        .collect();
    let decreasing = rel.windows(2).all(|w| w[1] < w[0]);
    let asym = asymptotic_relative_loss(rho_t, sigma).unwrap();
    let gap = (rel[79] - asym).abs() / asym;
    outcome(
        decreasing && gap <= 0.10,
        format!(
            "strictly decreasing: {decreasing}; rel(1) {:.4}, rel(80) {:.4}, asymptote {asym:.4}, relative gap {gap:.4} (≤ 0.10)",
            rel[0], rel[79]
        ),
    )
}

fn sandwich_csv(w: usize) -> (String, Vec<String>) {
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for n in [1usize, 2, 4, 8] {
        let a = AntennaConfig::square(n).unwrap();
        for gamma in [1.0, 10.0] {
            let b = LinkBudget::from_per_antenna_snr(gamma, a).unwrap();
            let r = run_trials(a, b, 0.0, 100_000, SEED + n as u64, w).unwrap();
            let (lo, hi) = (
                ergodic_capacity_lower(a, gamma),
                ergodic_capacity_upper(a, gamma),
            );
            let m = r.mean_capacity_center;
            let s = r.std_err_center;
            if m < lo - 3.0 * s || m > hi + 3.0 * s {
                bad.push(format!(
                    "{n}x{n} γ={gamma}: mean {m:.4} ∉ [{lo:.4}, {hi:.4}] ± 3·{s:.4}"
                ));
            }
            rows.push(vec![
                n.to_string(),
                fmt_f64(gamma),
                fmt_f64(lo),
                fmt_f64(m),
                fmt_f64(hi),
                fmt_f64(s),
            ]);
        }
    }
    (
        csv_string(&["n", "gamma", "lower", "mean", "upper", "std_err"], rows),
        bad,
    )
}

fn c3_sandwich() -> Outcome {
    let (_, bad) = sandwich_csv(workers());
    if bad.is_empty() {
        outcome(
            true,
            "all 8 (u,v,γ) cases inside [lower − 3σ̂, upper + 3σ̂] at 1e5 trials",
        )
    } else {
        outcome(false, bad.join("; "))
    }
}

const MOMENT_RHOS: [f64; 5] = [0.0, 0.5, 0.9, 0.95, 0.99];

fn moment_csv(w: usize) -> (String, Vec<String>) {
    let a = AntennaConfig::square(8).unwrap();
    let draws = 1563; // 1563 · 64 ≥ 1e5 entries
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for (r_i, &rho) in MOMENT_RHOS.iter().enumerate() {
        let base = SEED.wrapping_mul(31).wrapping_add(r_i as u64 * 10_000_000);
        let powers = par_map(draws, w, |i| {
            let center = sample_iid_channel(a, base + 2 * i as u64);
            let h = sample_offset_channel(&center, rho, base + 2 * i as u64 + 1)?;
            let p: f64 = h
                .entries()
                .as_slice()
                .iter()
                .zip(center.entries().as_slice())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum();
            Ok::<_, subgroup_core::Error>(p)
        })
        .unwrap();
        let emp = powers.iter().sum::<f64>() / (draws * 64) as f64;
        let want = 2.0 * (1.0 - rho);
        let rel = (emp - want).abs() / want;
        if rel > 0.02 {
            bad.push(format!("ρ={rho}: {emp:.5} vs {want:.5} (rel {rel:.4})"));
        }
        rows.push(vec![fmt_f64(rho), fmt_f64(emp), fmt_f64(want)]);
    }
    (csv_string(&["rho", "empirical", "expected"], rows), bad)
}

fn c4_moments() -> Outcome {
    let (csv, bad) = moment_csv(workers());
    let summary: Vec<String> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            format!("ρ={}: {:.5}/{}", f[0], f[1].parse::<f64>().unwrap(), f[2])
        })
        .collect();
    outcome(
        bad.is_empty(),
        format!("E|m|² empirical/expected {}", summary.join(", ")),
    )
}

fn bound_report(w: usize) -> subgroup_core::sim::TrialReport {
    let a = AntennaConfig::square(8).unwrap();
    let b = LinkBudget::from_per_antenna_snr(10.0, a).unwrap();
    run_trials(a, b, 0.1, 100_000, SEED, w).unwrap()
}

fn c5_bound_ordering() -> Outcome {
    let r = bound_report(workers());
    outcome(
        r.violations == 0 && r.mean_capacity_bound <= r.mean_capacity_center,
        format!(
            "{} violations in {} trials; mean capacity {:.4}, mean bound {:.4}, empirical σm² {:.5}",
            r.violations, r.trials, r.mean_capacity_center, r.mean_capacity_bound, r.empirical_sigma_m2
        ),
    )
}

/// `x` is the first crossing if `f ≥ beta` on a dense grid of `[0, x)`.
fn first_crossing(f: impl Fn(f64) -> f64, x: f64, beta: f64) -> bool {
    (0..10_000).all(|i| f(x * (i as f64 / 10_000.0)) >= beta - 1e-12)
}

fn c6_inversions() -> Outcome {
    let betas = [0.8, 0.9, 0.95, 0.99];
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for p in [
        DelayProfile::rural_area(),
        DelayProfile::typical_urban(),
        DelayProfile::hilly_terrain(),
    ] {
        for &beta in &betas {
            match inverse_freq_correlation(&p, beta) {
                Ok(df) => {
                    let res = (freq_correlation(&p, df) - beta).abs();
                    worst = worst.max(res);
                    if res > 1e-9 || !first_crossing(|x| freq_correlation(&p, x), df, beta) {
                        bad.push(format!("{} β={beta}: residual {res:e}", p.name()));
                    }
                }
                Err(e) => bad.push(format!("{} β={beta}: {e}", p.name())),
            }
        }
    }
    for fd in [10.0, 100.0, 1000.0] {
        let d = DopplerSpec::from_doppler_hz(fd).unwrap();
        for &beta in &betas {
            let dt = inverse_time_correlation(&d, beta).unwrap();
            let res = (time_correlation(&d, dt) - beta).abs();
            worst = worst.max(res);
            if res > 1e-9 || !first_crossing(|x| time_correlation(&d, x), dt, beta) {
                bad.push(format!("fd={fd} β={beta}: residual {res:e}"));
            }
        }
    }
    let mut detail = format!(
        "worst residual {worst:.2e} over 24 inversions, dense-scan first-crossing confirmed"
    );
    if !bad.is_empty() {
        detail = format!("{detail}; failures: {}", bad.join("; "));
    }
    outcome(bad.is_empty(), detail)
}

fn c7_round_trip() -> Outcome {
    let a = AntennaConfig::square(8).unwrap();
    let b = LinkBudget::from_per_antenna_snr(10.0, a).unwrap();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for z in [0.05, 0.1, 0.2, 0.5] {
        match sigma_m_from_loss(a, b, z).unwrap() {
            MismatchSolution::Root(s) => {
                let back = relative_loss_at(a, b.gamma(), s).unwrap();
                worst = worst.max((back - z).abs());
            }
            other => {
                ok = false;
                worst = f64::INFINITY;
                eprintln!("ζ_r={z}: unexpected {other:?}");
            }
        }
    }
    outcome(
        ok && worst <= 1e-8,
        format!("worst |rel_loss − ζ_r| = {worst:.2e} (≤ 1e-8)"),
    )
}

fn c8_tiling() -> Outcome {
    // Spacings chosen so the RA / 10 m/s model at β = 0.95 yields exactly s_f = 8, s_t = 4.
    let model = ra_model(10.0);
    let beta = 0.95;
    let df = inverse_freq_correlation(&model.profile, beta).unwrap();
    let dt = inverse_time_correlation(&model.doppler, beta).unwrap();
    let grid = GridSpec::new(64, 32, 2.0 * df / 8.5, 2.0 * dt / 4.5).unwrap();
    let dims = group_dimensions(&model, &grid, beta).unwrap();
    if (dims.s_f, dims.s_t) != (8, 4) {
        return outcome(
            false,
            format!("setup produced s_f={}, s_t={}", dims.s_f, dims.s_t),
        );
    }
    let t = tile_with_stages(&grid, 8, 4);
    let pop = t.populations();
    let assigned_once = t.membership.len() == grid.len() && pop.iter().sum::<usize>() == grid.len();
    let s = group_size(8, 4);
    let interior: Vec<usize> = t
        .centers
        .iter()
        .enumerate()
        .filter(|(_, &(n, k))| n >= 4 && n + 4 < 32 && k >= 8 && k + 8 < 64)
        .map(|(g, _)| pop[g])
        .collect();
    let interior_ok = interior.iter().all(|&p| p == s);
    let violations = (0..grid.len())
        .filter(|&idx| {
            let (n, k) = grid.point(idx);
            let (nc, kc) = t.centers[t.membership[idx]];
            !membership_check(&model, &grid, n, k, nc, kc, beta)
        })
        .count();
    outcome(
        assigned_once && interior_ok && violations == 0 && !interior.is_empty(),
        format!(
            "{} points in {} groups; {} interior groups all of size S={s}: {interior_ok}; membership violations {violations}",
            grid.len(),
            t.group_count(),
            interior.len()
        ),
    )
}

fn zeta_grid() -> Vec<f64> {
    (1..=15)
        .map(|i| ((0.02 * i as f64) * 1e12).round() / 1e12)
        .collect()
}

fn sweep(variant: Variant) -> Vec<SweepRow> {
    let base = ScenarioConfig {
        k_subcarriers: 1024,
        m_blocks: 1024,
        ..Default::default()
    };
    group_sweep_rows(&base, &zeta_grid(), &variant).unwrap()
}

/// Checks monotonicity in ζ_r per series and the pointwise series order.
fn ordering(label: &str, rows: &[SweepRow], order: &[&str], problems: &mut Vec<String>) -> String {
    let series: Vec<Vec<usize>> = order
        .iter()
        .map(|v| {
            rows.iter()
                .filter(|r| r.variant == *v)
                .map(|r| r.group_size)
                .collect()
        })
        .collect();
    for (v, s) in order.iter().zip(&series) {
        if s.windows(2).any(|w| w[1] < w[0]) {
            problems.push(format!("{label} {v}: group size not monotone in ζ_r"));
        }
    }
    let zetas = zeta_grid();
    for pair in 0..order.len() - 1 {
        for (i, z) in zetas.iter().enumerate() {
            if series[pair][i] < series[pair + 1][i] {
                problems.push(format!(
                    "{label}: ζ_r={z}: {}={} < {}={}",
                    order[pair],
                    series[pair][i],
                    order[pair + 1],
                    series[pair + 1][i]
                ));
            }
        }
    }
    let at = zetas.iter().position(|&z| z == 0.2).unwrap();
    let sizes: Vec<String> = order
        .iter()
        .zip(&series)
        .map(|(v, s)| format!("{v}:{}", s[at]))
        .collect();
    format!("{label} @ζ_r=0.2 [{}]", sizes.join(" "))
}

fn c9_orderings() -> Outcome {
    let mut problems = Vec::new();
    let snr = ordering(
        "SNR",
        &sweep(Variant::SnrDb(vec![0.0, 10.0, 15.0])),
        &["0.0", "10.0", "15.0"],
        &mut problems,
    );
    let env = ordering(
        "env",
        &sweep(Variant::Environment(vec![
            "RA".into(),
            "HT".into(),
            "TU".into(),
        ])),
        &["RA", "HT", "TU"],
        &mut problems,
    );
    let speed = ordering(
        "speed",
        &sweep(Variant::Speed(vec![10.0, 30.0, 100.0])),
        &["10.0", "30.0", "100.0"],
        &mut problems,
    );
    let mut detail = format!("{snr}; {env}; {speed}");
    if !problems.is_empty() {
        let shown: Vec<&String> = problems.iter().take(4).collect();
        detail = format!(
            "{detail}; {} ordering violations, e.g. {}",
            problems.len(),
            shown
                .iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>()
                .join(" | ")
        );
    }
    outcome(problems.is_empty(), detail)
}

fn c10_convexity() -> Outcome {
    let model = ra_model(10.0);
    let c = 0.95;
    let t_max = inverse_time_correlation(&model.doppler, c).unwrap();
    let mut rng = SubstreamRng::new(SEED, 10);
    let mut boundary = || {
        let t = t_max * rng.uniform() * (1.0 - 1e-9);
        let f = inverse_freq_correlation(&model.profile, c / time_correlation(&model.doppler, t))
            .unwrap();
        (f, t)
    };
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let (f1, t1) = boundary();
        let (f2, t2) = boundary();
        let mid = combined_correlation(&model, 0.5 * (f1 + f2), 0.5 * (t1 + t2));
        worst = worst.min(mid - c);
    }
    outcome(
        worst >= -1e-12,
        format!("min(product at midpoint − c) = {worst:.3e} over 100 pairs (≥ −1e-12)"),
    )
}

fn c11_optimum_snr() -> Outcome {
    let mut ok = true;
    let mut shown = Vec::new();
    for (n, s) in [(8, 0.1), (4, 0.05), (2, 0.01), (8, 0.3)] {
        let a = AntennaConfig::square(n).unwrap();
        let g = optimum_snr(a, s).unwrap();
        let interference = a.v() as f64 * s * g;
        let e = esnr_from_gamma(g, a, s).unwrap();
        ok &= interference == 1.0 && e == g / 2.0;
        shown.push(format!(
            "v={n} σm²={s}: vσm²γ={interference:?}, γe/γ={:?}",
            e / g
        ));
    }
    outcome(ok, shown.join("; "))
}

fn alg1_report(w: usize) -> subgroup_core::sim::Algorithm1Report {
    let a = AntennaConfig::square(8).unwrap();
    let b = LinkBudget::from_per_antenna_snr(10.0, a).unwrap();
    let grid = GridSpec::with_default_spacing(32, 32).unwrap();
    run_algorithm1(&ra_model(10.0), &grid, a, b, 0.1, SEED, w).unwrap()
}

fn c12_half_loss() -> Outcome {
    let r = alg1_report(workers());
    let zeta = 0.1;
    let target = zeta / 2.0;
    let m = r.mean_group_deficit;
    // Same group averaging with the ergodic relative loss of each member.
    let a = AntennaConfig::square(8).unwrap();
    let mut sums = vec![(0.0, 0usize); r.plan.group_count()];
    for p in &r.rates {
        let l = relative_loss_at(a, 10.0, p.sigma_m2).unwrap();
        sums[p.group_id].0 += l;
        sums[p.group_id].1 += 1;
    }
    let ergodic = sums.iter().map(|(s, c)| s / *c as f64).sum::<f64>() / sums.len() as f64;
    outcome(
        (m - target).abs() <= 0.4 * target,
        format!(
            "group-mean deficit {m:.4} vs ζ_r/2 = {target} (window [{:.3}, {:.3}]); mean worst-member deficit {:.4}, mean/worst {:.3}; σm²* {:.5}, s_f {}, s_t {}; ergodic-loss group mean {ergodic:.4}; outage fraction {:.4}",
            0.6 * target,
            1.4 * target,
            r.mean_worst_deficit,
            m / r.mean_worst_deficit,
            r.plan.sigma_m2_star,
            r.plan.s_f,
            r.plan.s_t,
            r.outage_fraction
        ),
    )
}

fn c13_determinism() -> Outcome {
    let mut mismatched = Vec::new();
    let render = |w: usize| -> [String; 4] {
        [
            sandwich_csv(w).0,
            moment_csv(w).0,
            report_csv(&bound_report(w)),
            rate_map_csv(&alg1_report(w)),
        ]
    };
    let reference = render(1);
    for w in [4, 8] {
        let again = render(w);
        for (i, name) in ["sandwich", "moments", "bound", "rate-map"]
            .iter()
            .enumerate()
        {
            if again[i] != reference[i] {
                mismatched.push(format!("{name} @ {w} workers"));
            }
        }
    }
    let bytes: usize = reference.iter().map(String::len).sum();
    outcome(
        mismatched.is_empty(),
        if mismatched.is_empty() {
            format!(
                "criteria 3, 4, 5, 12 CSVs ({bytes} bytes) byte-identical under 1, 4 and 8 workers"
            )
        } else {
            format!("differences: {}", mismatched.join(", "))
        },
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        (
            1,
            "asymptote reproduction",
            Duration::from_secs(1),
            c1_asymptote,
        ),
        (
            2,
            "antenna convergence",
            Duration::from_secs(5),
            c2_antenna_convergence,
        ),
        (3, "ergodic sandwich", Duration::from_secs(60), c3_sandwich),
        (
            4,
            "mismatch moment law",
            Duration::from_secs(10),
            c4_moments,
        ),
        (
            5,
            "bound ordering",
            Duration::from_secs(60),
            c5_bound_ordering,
        ),
        (
            6,
            "inversion residuals",
            Duration::from_secs(5),
            c6_inversions,
        ),
        (
            7,
            "threshold round trip",
            Duration::from_secs(1),
            c7_round_trip,
        ),
        (8, "tiling partition", Duration::from_secs(5), c8_tiling),
        (
            9,
            "qualitative figure orderings",
            Duration::from_secs(10),
            c9_orderings,
        ),
        (
            10,
            "convex feasible zone",
            Duration::from_secs(1),
            c10_convexity,
        ),
        (
            11,
            "optimum-SNR balance",
            Duration::from_secs(1),
            c11_optimum_snr,
        ),
        (
            12,
            "half-loss linearization",
            Duration::from_secs(120),
            c12_half_loss,
        ),
        (13, "determinism", Duration::from_secs(600), c13_determinism),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = o.pass && in_time;
        let timing = if in_time {
            format!("{:.2}s", elapsed.as_secs_f64())
        } else {
            format!(
                "{:.2}s, over the {}s limit",
                elapsed.as_secs_f64(),
                limit.as_secs()
            )
        };
        println!(
            "criterion {id:>2} {} {name}: {} ({timing})",
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 13 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
