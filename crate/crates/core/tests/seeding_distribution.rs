use ndarray::Array2;
use spss_core::rng::stream;
use spss_core::seeding::{seed_kmeanspp_from, seed_random};
use spss_core::Dataset;

fn line(xs: &[f64]) -> Dataset {
    Dataset::new(
        "line",
        Array2::from_shape_fn((xs.len(), 1), |(i, _)| xs[i]),
        None,
    )
    .unwrap()
}

/// Pearson statistic over the cells with positive expectation.
fn chi_square(counts: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&c, &p)| {
            let e = p * n as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum()
}

#[test]
fn second_kmeanspp_seed_follows_d_squared() {
    let xs = [0.0, 1.0, 3.0, 7.0];
    let ds = line(&xs);
    let weights: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let total: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let mut rng = stream(123);
    let mut counts = [0u64; 4];
    for _ in 0..20_000 {
        counts[seed_kmeanspp_from(&ds, 2, 0, &mut rng)
            .unwrap()
            .source_indices[1]] += 1;
    }
    assert_eq!(counts[0], 0);
    // 2 degrees of freedom, 0.1% critical value
    assert!(chi_square(&counts, &probs) < 13.82, "{counts:?}");
}

#[test]
fn third_seed_uses_distance_to_nearest_seed() {
    // after seeds 0 and 10, d² = (0, 1, 16, 0, 1) for points (0, 1, 4, 10, 9)
    let ds = line(&[0.0, 1.0, 4.0, 10.0, 9.0]);
    let probs = [0.0, 1.0 / 18.0, 16.0 / 18.0, 0.0, 1.0 / 18.0];
    let mut rng = stream(8);
    let mut counts = [0u64; 5];
    let mut kept = 0;
    while kept < 20_000 {
        let s = seed_kmeanspp_from(&ds, 3, 0, &mut rng).unwrap();
        if s.source_indices[1] == 3 {
            counts[s.source_indices[2]] += 1;
            kept += 1;
        }
    }
    assert_eq!(counts[0] + counts[3], 0);
    assert!(chi_square(&counts, &probs) < 13.82, "{counts:?}");
}

#[test]
fn random_seeds_are_uniform() {
    let ds = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
    let mut rng = stream(31);
    let mut counts = [0u64; 6];
    for _ in 0..30_000 {
        for i in seed_random(&ds, 2, &mut rng).unwrap().source_indices {
            counts[i] += 1;
        }
    }
    // 5 degrees of freedom, 0.1% critical value
    assert!(chi_square(&counts, &[1.0 / 6.0; 6]) < 20.52, "{counts:?}");
}
