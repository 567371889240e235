use numsemi::random::{
    geometric_gap, invariants_at_truncation, sample_semigroup, shifted_sample_semigroup,
    uniform_open, RandomStream, GENERATOR_STREAM,
};
use numsemi::stats::{chi_square_p_value, chi_square_statistic};
use numsemi::{normalize_generators, semigroup_prefix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn geometric_gap_frequencies() {
    let p = 0.2;
    let draws = 1_000_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut counts = [0u64; 21];
    for _ in 0..draws {
        let k = geometric_gap(uniform_open(&mut rng), p).unwrap();
        assert!(k >= 1);
        if k <= 20 {
            counts[k as usize] += 1;
        }
    }
    for k in 1..=20 {
        let expected = p * (1.0 - p).powi(k as i32 - 1);
        let observed = counts[k] as f64 / draws as f64;
        let se = (expected * (1.0 - expected) / draws as f64).sqrt();
        assert!(
            (observed - expected).abs() <= 3.0 * se,
            "k={k}: observed {observed}, expected {expected}, se {se}"
        );
    }
}

#[test]
fn expected_prefix_size() {
    let (p, m, trials) = (0.1, 10_000u64, 1000u64);
    let sizes: Vec<f64> = (0..trials)
        .map(|t| {
            let mut s = RandomStream::new(p, 3, t, GENERATOR_STREAM).unwrap();
            s.sample_prefix(m).len() as f64
        })
        .collect();
    let (mean, _) = mean_and_se(&sizes);
    let se = (m as f64 * p * (1.0 - p) / trials as f64).sqrt();
    assert!((mean - p * m as f64).abs() <= 3.0 * se, "mean {mean}");
}

fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
    let mut pmf = vec![0.0; n as usize + 1];
    let mut choose = 1.0f64;
    for k in 0..=n {
        pmf[k as usize] = choose * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
        choose = choose * (n - k) as f64 / (k + 1) as f64;
    }
    pmf
}

#[test]
fn prefix_size_is_binomial() {
    let (p, m, draws) = (0.3, 50u64, 100_000u64);
    let mut counts = vec![0u64; m as usize + 1];
    for t in 0..draws {
        let mut s = RandomStream::new(p, 4, t, GENERATOR_STREAM).unwrap();
        counts[s.sample_prefix(m).len()] += 1;
    }
    // Pool sparse tails so every bin expects at least 5.
    let pmf = binomial_pmf(m, p);
    let (mut observed, mut expected) = (Vec::new(), Vec::new());
    let (mut o_acc, mut e_acc) = (0u64, 0.0);
    for k in 0..=m as usize {
        o_acc += counts[k];
        e_acc += pmf[k] * draws as f64;
        if e_acc >= 5.0 && (1.0 - pmf[..=k].iter().sum::<f64>()) * draws as f64 >= 5.0 {
            observed.push(o_acc);
            expected.push(e_acc);
            (o_acc, e_acc) = (0, 0.0);
        }
    }
    *observed.last_mut().unwrap() += o_acc;
    *expected.last_mut().unwrap() += e_acc;
    let stat = chi_square_statistic(&observed, &expected);
    let pv = chi_square_p_value(stat, observed.len() as u64 - 1);
    assert!(pv >= 1e-3, "chi2 {stat} over {} bins, p-value {pv}", observed.len());
}

#[test]
fn truncation_is_exact() {
    for t in 0..500 {
        let o = sample_semigroup(0.2, t, 21).unwrap();
        let m = o.truncation_m;
        assert_eq!(invariants_at_truncation(0.2, t, 21, 2 * m).unwrap(), o.invariants, "trial {t}");
        assert_eq!(invariants_at_truncation(0.2, t, 21, 4 * m).unwrap(), o.invariants, "trial {t}");
    }
}

#[test]
fn golden_outcome() {
    let o = sample_semigroup(0.3, 7, 2025).unwrap();
    let record = o.csv_record().join(",");
    assert_eq!(record, "7,2.9999999999999999e-1,39,13,7,2,2,12");
    // 2 and the least odd element 15 generate everything: F = 13, g = 7.
    assert_eq!(o.elements[0], 2);
    assert_eq!(o.elements.iter().find(|&&a| a % 2 == 1), Some(&15));
    // Independent check of the frozen values against a prefix table.
    let gens = normalize_generators(&o.elements.iter().map(|&a| a as i64).collect::<Vec<_>>()).unwrap();
    let table = semigroup_prefix(&gens, 4 * o.truncation_m);
    assert_eq!(table.largest_gap().map_or(-1, |g| g as i64), o.invariants.frobenius);
    assert_eq!(table.gap_count(), o.invariants.genus);
}

#[test]
fn sampling_is_deterministic() {
    for t in 0..50 {
        assert_eq!(sample_semigroup(0.05, t, 8).unwrap(), sample_semigroup(0.05, t, 8).unwrap());
    }
    let differs = (0..50).any(|t| {
        sample_semigroup(0.05, t, 8).unwrap().elements != sample_semigroup(0.05, t, 9).unwrap().elements
    });
    assert!(differs);
}

#[test]
fn shift_by_two_matches_conditioned_unshifted_model() {
    let p = 0.3;
    let shifted: Vec<f64> = (0..3000)
        .map(|t| shifted_sample_semigroup(p, 2, t, 31).unwrap().invariants.frobenius as f64)
        .collect();
    let conditioned: Vec<f64> = (0..4500)
        .map(|t| sample_semigroup(p, t, 32).unwrap())
        .filter(|o| o.elements[0] != 1)
        .map(|o| o.invariants.frobenius as f64)
        .collect();
    let (m1, se1) = mean_and_se(&shifted);
    let (m2, se2) = mean_and_se(&conditioned);
    let se = (se1 * se1 + se2 * se2).sqrt();
    assert!((m1 - m2).abs() <= 3.0 * se, "shifted {m1}, conditioned {m2}, se {se}");
}

#[test]
fn shifted_frobenius_grows_with_u() {
    for t in 0..200 {
        let fs: Vec<i64> = [2, 10, 50]
            .iter()
            .map(|&u| shifted_sample_semigroup(0.3, u, t, 5).unwrap().invariants.frobenius)
            .collect();
        assert!(fs.windows(2).all(|w| w[0] <= w[1]), "trial {t}: {fs:?}");
    }
}
