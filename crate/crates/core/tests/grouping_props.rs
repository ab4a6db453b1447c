use proptest::prelude::*;
use subgroup_core::capacity::{AntennaConfig, LinkBudget};
use subgroup_core::channel::{
    combined_correlation, inverse_freq_correlation, inverse_time_correlation, time_correlation,
    CorrelationModel, DelayProfile, DopplerSpec,
};
use subgroup_core::grouping::*;

fn profile(i: usize) -> DelayProfile {
    [
        DelayProfile::rural_area(),
        DelayProfile::typical_urban(),
        DelayProfile::hilly_terrain(),
    ][i]
        .clone()
}

proptest! {
    #[test]
    fn tiling_is_a_partition_with_bounded_rhombi(k in 1usize..40, m in 1usize..30, sf in 1usize..45, st in 1usize..35) {
        let sf = sf.min(k);
        let st = st.min(m);
        let grid = GridSpec::with_default_spacing(k, m).unwrap();
        let t = tile_with_stages(&grid, sf, st);
        prop_assert_eq!(t.membership.len(), k * m);
        prop_assert_eq!(t.populations().iter().sum::<usize>(), k * m);
        prop_assert!(t.populations().iter().all(|&p| p >= 1));
        let (a, b) = ((st / 2) as i64, (sf / 2) as i64);
        for idx in 0..grid.len() {
            let (n, kk) = grid.point(idx);
            let (cn, ck) = t.centers[t.membership[idx]];
            let dn = (n as i64 - cn as i64).abs();
            let dk = (kk as i64 - ck as i64).abs();
            match (a, b) {
                (0, _) => prop_assert!(dn == 0 && dk <= b),
                (_, 0) => prop_assert!(dk == 0 && dn <= a),
                _ => prop_assert!(dn * b + dk * a <= a * b, "({n},{kk}) → ({cn},{ck})"),
            }
        }
        for (g, &(cn, ck)) in t.centers.iter().enumerate() {
            prop_assert_eq!(t.membership[grid.index(cn, ck)], g);
        }
    }

    #[test]
    fn plans_satisfy_membership(env in 0usize..3, speed in 1.0f64..150.0, zeta in 0.04f64..0.6, k in 4usize..48, m in 4usize..48) {
        let model = CorrelationModel::new(profile(env), DopplerSpec::new(2e9, speed).unwrap());
        let grid = GridSpec::with_default_spacing(k, m).unwrap();
        let a = AntennaConfig::square(8).unwrap();
        let b = LinkBudget::from_per_antenna_snr(10.0, a).unwrap();
        let plan = tile_plan(&model, &grid, zeta, a, b).unwrap();
        prop_assert!(plan.membership_violations(&model).is_empty());
        prop_assert!(plan.s_f >= 1 && plan.s_f <= k && plan.s_t >= 1 && plan.s_t <= m);
    }

    #[test]
    fn group_size_grows_with_threshold(env in 0usize..3, speed in 1.0f64..150.0, z1 in 0.04f64..0.9, z2 in 0.04f64..0.9) {
        let (lo, hi) = if z1 <= z2 { (z1, z2) } else { (z2, z1) };
        let model = CorrelationModel::new(profile(env), DopplerSpec::new(2e9, speed).unwrap());
        let grid = GridSpec::with_default_spacing(512, 512).unwrap();
        let a = AntennaConfig::square(8).unwrap();
        let b = LinkBudget::from_per_antenna_snr(10.0, a).unwrap();
        // Very loose thresholds can fall below HT's first-lobe floor.
        let (Ok(s_lo), Ok(s_hi)) = (plan_dimensions(&model, &grid, lo, a, b), plan_dimensions(&model, &grid, hi, a, b)) else {
            return Ok(());
        };
        prop_assert!(s_lo.group_size() <= s_hi.group_size());
    }

    #[test]
    fn feasible_zone_is_convex(env in 0usize..3, speed in 1.0f64..150.0, c in 0.5f64..0.999, u1 in 0.0f64..1.0, u2 in 0.0f64..1.0, lambda in 0.0f64..=1.0) {
        let model = CorrelationModel::new(profile(env), DopplerSpec::new(2e9, speed).unwrap());
        let t_max = inverse_time_correlation(&model.doppler, c).unwrap();
        let point = |u: f64| {
            let t = t_max * u * (1.0 - 1e-9);
            inverse_freq_correlation(&model.profile, c / time_correlation(&model.doppler, t)).map(|f| (f, t))
        };
        if let (Ok((f1, t1)), Ok((f2, t2))) = (point(u1), point(u2)) {
            let f = lambda * f1 + (1.0 - lambda) * f2;
            let t = lambda * t1 + (1.0 - lambda) * t2;
            prop_assert!(combined_correlation(&model, f, t) >= c - 1e-9);
        }
    }
}

#[test]
fn static_channel_plan_notes_unbounded_time() {
    let model = CorrelationModel::new(
        DelayProfile::rural_area(),
        DopplerSpec::new(2e9, 0.0).unwrap(),
    );
    let grid = GridSpec::with_default_spacing(32, 16).unwrap();
    let a = AntennaConfig::square(8).unwrap();
    let b = LinkBudget::from_per_antenna_snr(10.0, a).unwrap();
    let plan = tile_plan(&model, &grid, 0.1, a, b).unwrap();
    assert!(plan.unbounded_t);
    assert_eq!(plan.s_t, 16);
    assert!(plan.dt_star.is_infinite());
    // Groups are frequency segments spanning every block.
    for idx in 0..grid.len() {
        let (n, k) = grid.point(idx);
        assert_eq!(plan.group_of(n, k), plan.group_of(0, k));
    }
    assert!(plan.membership_violations(&model).is_empty());
}

#[test]
fn single_tap_static_channel_is_one_group() {
    let model = CorrelationModel::new(
        DelayProfile::single_tap(1e-6).unwrap(),
        DopplerSpec::from_doppler_hz(0.0).unwrap(),
    );
    let grid = GridSpec::with_default_spacing(16, 8).unwrap();
    let a = AntennaConfig::square(4).unwrap();
    let b = LinkBudget::from_per_antenna_snr(10.0, a).unwrap();
    let plan = tile_plan(&model, &grid, 0.2, a, b).unwrap();
    assert_eq!(plan.group_count(), 1);
}

#[test]
fn theorem_example_threshold() {
    // β = (2 − σm²*)/2 for the RA, 10 m/s, 8×8, 10 dB, ζ_r = 0.1 scenario.
    let model = CorrelationModel::new(
        DelayProfile::rural_area(),
        DopplerSpec::new(2e9, 10.0).unwrap(),
    );
    let grid = GridSpec::with_default_spacing(32, 32).unwrap();
    let a = AntennaConfig::square(8).unwrap();
    let b = LinkBudget::from_per_antenna_snr(10.0, a).unwrap();
    let plan = tile_plan(&model, &grid, 0.1, a, b).unwrap();
    assert_eq!(plan.beta, (2.0 - plan.sigma_m2_star) / 2.0);
    let rel = subgroup_core::capacity::relative_loss_at(a, 10.0, plan.sigma_m2_star).unwrap();
    assert!((rel - 0.1).abs() < 1e-8);
}
