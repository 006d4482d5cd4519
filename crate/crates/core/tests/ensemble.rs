mod common;

use proptest::prelude::*;
use rand::Rng;

use qvote::ensemble::{
    classical_predict, fit_stump, probabilistic_predict, quantum_predict, train_stumps, ClassLabel, Classifier,
    Dataset, EnsembleModel, QuantumOptions,
};
use qvote::estimators::{EstimatorConfig, EstimatorKind};
use qvote::rng::run_rng;

proptest! {
    #[test]
    fn vote_matches_brute_force_recount(ps in prop::collection::vec(0.0f64..=1.0, 1..60)) {
        let model = EnsembleModel::from_probabilities(&ps).unwrap();
        let r = classical_predict(&model, &[]).unwrap();
        let mut k1 = 0;
        for p in &ps {
            if *p >= 0.5 {
                k1 += 1;
            }
        }
        let expected = if 2 * k1 >= ps.len() { ClassLabel::Class1 } else { ClassLabel::Class2 };
        prop_assert_eq!(r.answer, expected);
        prop_assert_eq!(r.p_estimate, k1 as f64 / ps.len() as f64);
        prop_assert_eq!(r.classifier_evaluations, ps.len() as u64);
        prop_assert_eq!(r.threshold_passed, r.answer == ClassLabel::Class1);
    }
}

fn random_model(seed: u64, n: usize) -> EnsembleModel {
    let mut rng = run_rng(seed, 0);
    let ps: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    EnsembleModel::from_probabilities(&ps).unwrap()
}

#[test]
fn probabilistic_rate_is_unbiased() {
    for seed in 0..10 {
        let model = random_model(seed, 7 + seed as usize * 3);
        let target = model.members().iter().filter(|m| m.predict_proba(&[]) >= 0.5).count() as f64 / model.len() as f64;
        let mut rng = run_rng(seed, 1);
        let hits = (0..10_000)
            .filter(|_| probabilistic_predict(&model, &[], &mut rng).unwrap().answer == ClassLabel::Class1)
            .count();
        let pv = common::binomial_p_value(hits as u64, 10_000, target);
        assert!(pv > 0.001, "model {seed}: {hits}/10000 vs {target}, p-value {pv}");
    }
}

#[test]
fn probabilistic_half_split_frequency() {
    let mut ps = vec![0.9; 32];
    ps.extend(vec![0.1; 32]);
    let model = EnsembleModel::from_probabilities(&ps).unwrap();
    let mut rng = run_rng(77, 0);
    let hits = (0..10_000)
        .filter(|_| probabilistic_predict(&model, &[], &mut rng).unwrap().answer == ClassLabel::Class1)
        .count();
    assert!((hits as f64 / 10_000.0 - 0.5).abs() <= 0.02, "{hits}");
}

/// Member probabilities with the given mean whose hard votes all sit on the
/// same side of 0.5 as the mean.
fn ensemble_with_mean(mean: f64, n: usize) -> EnsembleModel {
    let spread = (mean - 0.5).abs().min(0.5 - (mean - 0.5).abs()).min(0.04);
    let ps: Vec<f64> = (0..n).map(|i| mean + if i % 2 == 0 { spread } else { -spread }).collect();
    EnsembleModel::from_probabilities(&ps).unwrap()
}

#[test]
fn binary_search_agreement_follows_first_probe_law() {
    let cfg = EstimatorConfig::default();
    let opts = QuantumOptions::default();
    for (t, mean) in [0.05, 0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.75, 0.85, 0.95].into_iter().enumerate() {
        let model = ensemble_with_mean(mean, 64);
        let soft = model.soft_mean(&[]).unwrap();
        let classical = classical_predict(&model, &[]).unwrap().answer;
        assert_eq!(classical, ClassLabel::from_probability(soft));
        let success = common::probe_success(soft, 0.5);
        let predicted = if classical == ClassLabel::Class1 { success } else { 1.0 - success };
        let agree = (0..200)
            .filter(|&run| {
                let q =
                    quantum_predict(&model, &[], EstimatorKind::BinarySearch, &cfg, opts, &mut run_rng(t as u64, run))
                        .unwrap();
                q.answer == classical
            })
            .count();
        let pv = common::binomial_p_value(agree as u64, 200, predicted);
        assert!(pv > 0.001, "mean {mean}: agreement {agree}/200, predicted {predicted}");
        if predicted >= 0.93 {
            assert!(agree >= 180, "mean {mean}: agreement {agree}/200");
        }
    }
}

#[test]
fn early_exit_cost_is_bounded() {
    let cfg = EstimatorConfig::default();
    for n in [64usize, 100, 256, 1000] {
        let model = random_model(n as u64, n);
        let bound = 2 * (n as f64).sqrt().ceil() as u64 + 1;
        for run in 0..50 {
            let q = quantum_predict(
                &model,
                &[],
                EstimatorKind::BinarySearch,
                &cfg,
                QuantumOptions::default(),
                &mut run_rng(3, run),
            )
            .unwrap();
            assert!(q.queries.a_applications <= bound);
        }
        assert_eq!(classical_predict(&model, &[]).unwrap().classifier_evaluations, n as u64);
    }
}

#[test]
fn full_bisection_without_early_exit() {
    let cfg = EstimatorConfig::default();
    let model = EnsembleModel::from_probabilities(&[0.2; 16]).unwrap();
    let opts = QuantumOptions { early_exit: false, ..Default::default() };
    let q = quantum_predict(&model, &[], EstimatorKind::BinarySearch, &cfg, opts, &mut run_rng(1, 0)).unwrap();
    let s = q.interval.unwrap();
    assert_eq!(q.p_estimate, s.midpoint());
    assert!(q.queries.a_applications > 3 || s.low >= 0.5);
}

fn separable_1d() -> Dataset {
    let mut xs = Vec::new();
    let mut labels = Vec::new();
    for i in 0..30 {
        xs.push(vec![i as f64 * 0.1]);
        labels.push(ClassLabel::Class1);
        xs.push(vec![10.0 + i as f64 * 0.1]);
        labels.push(ClassLabel::Class2);
    }
    Dataset::new(xs, labels).unwrap()
}

#[test]
fn separable_data_single_stump_is_perfect() {
    let d = separable_1d();
    let model = train_stumps(&d, 1, &mut run_rng(0, u64::MAX)).unwrap();
    let correct = d.rows().zip(d.labels()).filter(|(x, l)| classical_predict(&model, x).unwrap().answer == **l).count();
    assert_eq!(correct, d.len());
}

#[test]
fn noise_labels_give_uninformative_ensemble() {
    let mut rng = run_rng(9, 0);
    let xs: Vec<Vec<f64>> = (0..200).map(|_| vec![rng.gen(), rng.gen()]).collect();
    let labels: Vec<ClassLabel> =
        (0..200).map(|_| if rng.gen::<bool>() { ClassLabel::Class1 } else { ClassLabel::Class2 }).collect();
    let d = Dataset::new(xs, labels).unwrap();
    let model = train_stumps(&d, 32, &mut run_rng(9, 1)).unwrap();
    let held_out: Vec<f64> = (0..50).map(|_| model.soft_mean(&[rng.gen(), rng.gen()]).unwrap()).collect();
    let mean = held_out.iter().sum::<f64>() / held_out.len() as f64;
    println!("mean soft estimate on held-out noise points: {mean:.3}");
    assert!(held_out.iter().all(|p| (0.0..=1.0).contains(p)));
}

#[test]
fn duplicated_dataset_gives_same_full_sample_stump() {
    let d = separable_1d();
    let mut xs: Vec<Vec<f64>> = d.rows().map(<[f64]>::to_vec).collect();
    xs.extend(xs.clone());
    let mut labels = d.labels().to_vec();
    labels.extend(d.labels().to_vec());
    let doubled = Dataset::new(xs, labels).unwrap();
    let a = fit_stump(&d, &(0..d.len()).collect::<Vec<_>>());
    let b = fit_stump(&doubled, &(0..doubled.len()).collect::<Vec<_>>());
    assert_eq!(a, b);
    let m1 = train_stumps(&doubled, 4, &mut run_rng(2, 0)).unwrap();
    let m2 = train_stumps(&doubled, 4, &mut run_rng(2, 0)).unwrap();
    assert_eq!(m1, m2);
}

#[test]
fn model_file_round_trip() {
    let model = train_stumps(&separable_1d(), 5, &mut run_rng(4, 0)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    model.save(&path).unwrap();
    assert_eq!(EnsembleModel::load(&path).unwrap(), model);
}
