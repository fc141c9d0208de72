use proptest::collection::vec;
use proptest::prelude::*;

use confscreen::data::{ordinal_confidence, parse_dataset, write_dataset, ContingencyTable, ItemRecord, TrackSet};
use confscreen::screen::{classify, compute_indices, phi, screen_items};
use confscreen::selective::{per_track_metrics, selective_gain, type2_auroc};
use confscreen::stats::anova::sums_of_squares;
use confscreen::stats::{cohens_d, mann_whitney_u, one_way_anova, spearman_rho, Alternative};
use confscreen::synth::{expected_indices, generate_model, BehaviourProfile, ProfileKind};
use confscreen::{ModelDataset, ScreenConfig, TierValue};

fn items_strategy(max: usize) -> impl Strategy<Value = Vec<ItemRecord>> {
    vec((any::<bool>(), any::<bool>(), any::<bool>(), 0usize..6), 1..max).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(k, (correct, keep, bet, track))| ItemRecord {
                model_id: "m".into(),
                family: "f".into(),
                track: format!("T{}", track + 1),
                item_id: format!("i{k}"),
                correct,
                keep,
                bet,
            })
            .collect()
    })
}

fn sample(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    vec(-100.0..100.0f64, len)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn ordinal_encoding_is_a_bijection() {
    let mut levels: Vec<u8> = [(false, false), (false, true), (true, false), (true, true)]
        .iter()
        .map(|&(keep, bet)| ordinal_confidence(keep, bet).level())
        .collect();
    assert_eq!(levels, vec![0, 1, 2, 3]);
    levels.dedup();
    assert_eq!(levels.len(), 4);
}

proptest! {
    #[test]
    fn item_order_does_not_matter(items in items_strategy(60), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = items.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let config = ScreenConfig { rbs_bootstrap_samples: 1_000, ..ScreenConfig::default() };
        let (t1, i1, tier1) = screen_items(&items, &config).unwrap();
        let (t2, i2, tier2) = screen_items(&shuffled, &config).unwrap();
        prop_assert_eq!(t1, t2);
        prop_assert_eq!(i1, i2);
        prop_assert_eq!(tier1, tier2);
        prop_assert_eq!(type2_auroc(&items), type2_auroc(&shuffled));
    }

    #[test]
    fn csv_round_trip(items in items_strategy(40)) {
        let dataset = ModelDataset::new(items).unwrap();
        let text = write_dataset([&dataset]);
        let parsed = parse_dataset(&text, &TrackSet::default()).unwrap();
        prop_assert_eq!(parsed.len(), 1);
        prop_assert_eq!(&parsed[0], &dataset);
    }

    #[test]
    fn phi_is_scale_invariant_and_signed(a in 0u64..200, b in 0u64..200, c in 0u64..200, d in 0u64..200, k in 1u64..20) {
        let t = ContingencyTable::new(a, b, c, d);
        match phi(&t) {
            None => prop_assert!(phi(&t.scaled(k)).is_none()),
            Some(r) => {
                prop_assert!(close(r, phi(&t.scaled(k)).unwrap(), 1e-12));
                prop_assert!((-1.0..=1.0).contains(&r));
                let cross = a as i128 * d as i128 - b as i128 * c as i128;
                prop_assert_eq!(r.partial_cmp(&0.0).unwrap(), cross.cmp(&0));
            }
        }
    }

    #[test]
    fn flipping_correctness_mirrors_auroc(items in items_strategy(60)) {
        let flipped: Vec<ItemRecord> = items
            .iter()
            .map(|i| ItemRecord { correct: !i.correct, ..i.clone() })
            .collect();
        match (type2_auroc(&items), type2_auroc(&flipped)) {
            (Some(x), Some(y)) => prop_assert!((x + y - 1.0).abs() < 1e-12),
            (x, y) => prop_assert!(x.is_none() && y.is_none()),
        }
    }

    #[test]
    fn auroc_survives_a_monotone_relabel(items in items_strategy(60)) {
        // A constant BET maps the two KEEP levels to {3, 1} or {2, 0}; the
        // order is the same either way.
        let uniform: Vec<ItemRecord> = items.iter().map(|i| ItemRecord { bet: true, ..i.clone() }).collect();
        let other: Vec<ItemRecord> = items.iter().map(|i| ItemRecord { bet: false, ..i.clone() }).collect();
        prop_assert_eq!(type2_auroc(&uniform), type2_auroc(&other));
    }

    #[test]
    fn cohens_d_symmetries(a in sample(2..15), b in sample(2..15), shift in -50.0..50.0f64, scale in 0.1..10.0f64) {
        let Ok(d) = cohens_d(&a, &b) else { return Ok(()) };
        prop_assert!(close(cohens_d(&b, &a).unwrap(), -d, 1e-9));
        let sa: Vec<f64> = a.iter().map(|x| x + shift).collect();
        let sb: Vec<f64> = b.iter().map(|x| x + shift).collect();
        prop_assert!(close(cohens_d(&sa, &sb).unwrap(), d, 1e-7));
        let ka: Vec<f64> = a.iter().map(|x| x * scale).collect();
        let kb: Vec<f64> = b.iter().map(|x| x * scale).collect();
        prop_assert!(close(cohens_d(&ka, &kb).unwrap(), d, 1e-7));
    }

    #[test]
    fn spearman_ignores_monotone_transforms(pairs in vec((-5.0..5.0f64, -5.0..5.0f64), 3..30)) {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let Ok(base) = spearman_rho(&x, &y) else { return Ok(()) };
        let ty: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        let tx: Vec<f64> = x.iter().map(|v| v.powi(3)).collect();
        let moved = spearman_rho(&tx, &ty).unwrap();
        prop_assert!(close(base.statistic, moved.statistic, 1e-12));
        prop_assert!((-1.0..=1.0).contains(&base.statistic));
    }

    #[test]
    fn anova_decomposes_total_variance(groups in vec(sample(2..10), 2..5)) {
        let slices: Vec<&[f64]> = groups.iter().map(Vec::as_slice).collect();
        let ss = sums_of_squares(&slices);
        prop_assert!(close(ss.total, ss.between + ss.within, 1e-9));
        let res = one_way_anova(&slices).unwrap();
        if let Some(eta2) = res.effect_size {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&eta2));
        }
        if let Some(p) = res.p_value {
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn exact_mann_whitney_matches_enumeration(
        a in vec(0u8..6, 1..7),
        b in vec(0u8..6, 1..7),
    ) {
        // Small integer values force plenty of ties; at most C(12, 6) splits.
        let na = a.len();
        let fa: Vec<f64> = a.iter().map(|&v| v as f64).collect();
        let fb: Vec<f64> = b.iter().map(|&v| v as f64).collect();
        let res = mann_whitney_u(&fa, &fb, Alternative::Greater).unwrap();

        let u = |xs: &[f64], ys: &[f64]| -> f64 {
            xs.iter()
                .flat_map(|x| ys.iter().map(move |y| if x > y { 1.0 } else if x == y { 0.5 } else { 0.0 }))
                .sum()
        };
        let observed = u(&fa, &fb);
        prop_assert_eq!(res.statistic, observed);

        let pooled: Vec<f64> = fa.iter().chain(&fb).copied().collect();
        let n = pooled.len();
        let (mut extreme, mut total) = (0u64, 0u64);
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != na {
                continue;
            }
            let (ga, gb): (Vec<f64>, Vec<f64>) = {
                let mut ga = Vec::new();
                let mut gb = Vec::new();
                for (i, &v) in pooled.iter().enumerate() {
                    if mask >> i & 1 == 1 { ga.push(v) } else { gb.push(v) }
                }
                (ga, gb)
            };
            total += 1;
            extreme += (u(&ga, &gb) >= observed - 1e-9) as u64;
        }
        let p = res.p_value.unwrap();
        prop_assert!((p - extreme as f64 / total as f64).abs() < 1e-12, "{p} vs {extreme}/{total}");
    }

    #[test]
    fn stricter_thresholds_never_raise_a_tier(
        a in 0u64..80, b in 0u64..80, c in 0u64..80, d in 0u64..80,
        l_hi in 0.5..0.99f64, l_drop in 0.0..0.4f64,
        fp_lo in 0.05..0.5f64, fp_rise in 0.0..0.4f64,
    ) {
        let t = ContingencyTable::new(a, b, c, d);
        prop_assume!(t.n() > 0);
        let items = confscreen_items(t);
        let loose = ScreenConfig {
            l_invalid_threshold: l_hi,
            fp_indeterminate_threshold: (fp_lo + fp_rise).min(0.99),
            rbs_bootstrap_samples: 1_000,
            ..ScreenConfig::default()
        };
        let strict = ScreenConfig {
            l_invalid_threshold: (l_hi - l_drop).max(0.01),
            fp_indeterminate_threshold: fp_lo,
            ..loose.clone()
        };
        let indices = compute_indices(&t, &items, &loose).unwrap();
        let tier_loose = classify(&indices, &loose);
        prop_assert_eq!(&tier_loose, &classify(&indices, &loose));
        prop_assert!(classify(&indices, &strict).value <= tier_loose.value);
    }
}

fn confscreen_items(t: ContingencyTable) -> Vec<ItemRecord> {
    let cells = [
        (t.a, true, true),
        (t.b, true, false),
        (t.c, false, true),
        (t.d, false, false),
    ];
    let mut items = Vec::new();
    for (count, keep, correct) in cells {
        for _ in 0..count {
            let k = items.len();
            items.push(ItemRecord {
                model_id: "m".into(),
                family: "f".into(),
                track: "T1".into(),
                item_id: format!("i{k}"),
                correct,
                keep,
                bet: keep,
            });
        }
    }
    items
}

#[test]
fn tier_order_runs_invalid_to_valid() {
    assert!(TierValue::Invalid < TierValue::Indeterminate);
    assert!(TierValue::Indeterminate < TierValue::Valid);
}

#[test]
fn independent_confidence_gives_no_selective_gain() {
    let profile = BehaviourProfile::new(ProfileKind::Ambiguous, 0.7, 0.6, 0.6).with_items(50_000);
    for seed in 0..3 {
        let ds = generate_model(&profile, seed).unwrap();
        for coverage in [0.8, 0.7, 0.5] {
            let gain = selective_gain(ds.items(), coverage).unwrap();
            assert!(gain.abs() < 0.01, "seed {seed} coverage {coverage}: gain {gain}");
        }
    }
}

#[test]
fn synthetic_indices_converge_to_population_values() {
    let config = ScreenConfig {
        rbs_bootstrap_samples: 1_000,
        ..ScreenConfig::default()
    };
    let profiles = [
        BehaviourProfile::new(ProfileKind::Discriminating, 0.85, 0.9, 0.5),
        BehaviourProfile::new(ProfileKind::Blanket, 0.9, 0.99, 0.97),
        BehaviourProfile::r1_matched(),
        BehaviourProfile::new(ProfileKind::Ambiguous, 0.6, 0.7, 0.68),
    ];
    for (i, profile) in profiles.iter().enumerate() {
        let profile = profile.clone().with_items(50_000);
        let expected = expected_indices(&profile).unwrap();
        let ds = generate_model(&profile, 40 + i as u64).unwrap();
        let observed = compute_indices(&ds.contingency(), ds.items(), &config).unwrap();
        let pairs = [
            ("L", Some(observed.l), Some(expected.l)),
            ("Fp", observed.fp, expected.fp),
            ("RBS", observed.rbs, expected.rbs),
            ("r", observed.r, expected.r),
            ("TRIN", Some(observed.trin), Some(expected.trin)),
        ];
        for (name, obs, exp) in pairs {
            let (obs, exp) = (obs.unwrap(), exp.unwrap());
            assert!((obs - exp).abs() < 0.01, "{:?} {name}: {obs} vs {exp}", profile.kind);
        }
    }
}

#[test]
fn per_track_r_tracks_per_track_auroc() {
    let mut items = Vec::new();
    for track in 0..6 {
        let keep_incorrect = 0.85 - 0.12 * track as f64;
        let profile = BehaviourProfile::new(ProfileKind::Discriminating, 0.8, 0.9, keep_incorrect)
            .with_items(3_000)
            .with_tracks(1);
        let ds = generate_model(&profile, 500 + track as u64).unwrap();
        for item in ds.items() {
            items.push(ItemRecord {
                model_id: "planted".into(),
                family: "synthetic".into(),
                track: format!("T{}", track + 1),
                item_id: format!("t{track}-{}", item.item_id),
                ..item.clone()
            });
        }
    }
    let report = per_track_metrics(&ModelDataset::new(items).unwrap());
    let (r, auroc): (Vec<f64>, Vec<f64>) = report.tracks.values().map(|m| (m.r.unwrap(), m.auroc.unwrap())).unzip();
    assert_eq!(r.len(), 6);
    let rho = spearman_rho(&r, &auroc).unwrap();
    assert!(rho.statistic > 0.9, "rho = {}", rho.statistic);
}
