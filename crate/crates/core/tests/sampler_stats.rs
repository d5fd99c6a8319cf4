use maxwell_kinetics::quadrature::q_gamma_3half;
use maxwell_kinetics::rng::NormalStream;
use maxwell_kinetics::sampler::{
    empirical_moments, empirical_tail_fraction, ks_critical_value_1pct, ks_statistic, ks_statistic_of_speeds,
    sample_batch, sample_batch_with,
};
use maxwell_kinetics::{ChunkExecutor, MaxwellParams, SeedSpec, CHUNK_LEN};

const N: usize = 1_000_000;

fn params(c: f64) -> MaxwellParams {
    MaxwellParams::new(c).unwrap()
}

/// Mean of `m|v|²/2` with m = 1.
fn mean_energy(batch: &maxwell_kinetics::SampleBatch) -> f64 {
    batch.velocities().iter().map(|v| 0.5 * v.norm_sq()).sum::<f64>() / batch.count() as f64
}

/// Runs chunks in reverse order, so any dependence on scheduling shows up.
struct Reversed;

impl ChunkExecutor for Reversed {
    fn run<T, F>(&self, chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        let mut out: Vec<(usize, T)> = (0..chunks).rev().map(|i| (i, job(i))).collect();
        out.sort_by_key(|(i, _)| *i);
        out.into_iter().map(|(_, t)| t).collect()
    }
}

#[test]
fn million_sample_moments_at_half() {
    let p = params(0.5);
    let batch = sample_batch(N, &p, SeedSpec::new(2024)).unwrap();
    assert_eq!(batch.count(), N);
    let m = empirical_moments(&batch).unwrap();
    // σ = 1 for c = 0.5.
    let bound = 4.0 / (N as f64).sqrt();
    for mean in m.mean {
        assert!(mean.abs() <= bound, "component mean {mean}");
    }
    for var in m.variance {
        assert!((var - 1.0).abs() <= 0.01, "variance {var}");
    }
    assert!((m.mean_squared_speed - 3.0).abs() <= 0.03);
    assert!((mean_energy(&batch) - 1.5).abs() <= 0.015);
    // ⟨|v|⟩ = 2/sqrt(πc).
    let mean_speed = 2.0 / (core::f64::consts::PI * 0.5).sqrt();
    assert!((m.mean_speed - mean_speed).abs() <= 0.01 * mean_speed);
}

#[test]
fn tail_fraction_at_lambda_one() {
    let c = 0.5;
    let batch = sample_batch(N, &params(c), SeedSpec::new(77)).unwrap();
    // λ = c·2E/m = 1 with m = 1.
    let e_activation = 1.0 / (2.0 * c);
    let q = q_gamma_3half(1.0).unwrap();
    let se = (q * (1.0 - q) / N as f64).sqrt();
    let f = empirical_tail_fraction(&batch, e_activation, 1.0).unwrap();
    assert!((f - q).abs() <= 3.0 * se, "{f} vs {q}");
    assert!((q - 0.57241).abs() < 1e-5);
}

#[test]
fn agreement_with_analytics_across_c() {
    for (k, c) in [0.1, 0.5, 2.0].into_iter().enumerate() {
        let batch = sample_batch(N, &params(c), SeedSpec::new(500 + k as u64)).unwrap();
        let n = N as f64;

        // |v|² = χ²₃/(2c), so Var(|v|²/2) = 3/(8c²).
        let energy_se = (3.0 / 8.0_f64).sqrt() / c / n.sqrt();
        let energy = mean_energy(&batch);
        assert!((energy - 0.75 / c).abs() <= 4.0 * energy_se, "c={c}: energy {energy}");

        // Var(s²) ≈ 2σ⁴/n for a normal sample.
        let sigma_sq = 0.5 / c;
        let var_se = sigma_sq * (2.0 / n).sqrt();
        let m = empirical_moments(&batch).unwrap();
        for var in m.variance {
            assert!((var - sigma_sq).abs() <= 4.0 * var_se, "c={c}: variance {var}");
        }

        for lambda in [0.5, 1.0, 2.0, 5.0] {
            let q = q_gamma_3half(lambda).unwrap();
            let se = (q * (1.0 - q) / n).sqrt();
            let f = empirical_tail_fraction(&batch, lambda / (2.0 * c), 1.0).unwrap();
            assert!((f - q).abs() <= 4.0 * se, "c={c} λ={lambda}: {f} vs {q}");
        }
    }
}

#[test]
fn ks_rejection_rate_is_calibrated() {
    // Under a correct sampler each seed is rejected at the 1% level with
    // probability ≈ 0.01, and √n·D follows the Kolmogorov distribution
    // (median 0.8276).
    let p = params(0.5);
    let (n, seeds) = (1_000, 2_000u64);
    let critical = ks_critical_value_1pct(n);
    let mut scaled: Vec<f64> = (0..seeds)
        .map(|seed| ks_statistic(&sample_batch(n, &p, SeedSpec::with_stream(seed, 11)).unwrap()))
        .map(|d| d * (n as f64).sqrt())
        .collect();
    let rejected = scaled.iter().filter(|&&d| d >= critical * (n as f64).sqrt()).count() as f64;
    let expected = 0.01 * seeds as f64;
    assert!((rejected - expected).abs() <= 4.0 * (expected * 0.99).sqrt(), "{rejected} rejections");
    scaled.sort_by(f64::total_cmp);
    let median = scaled[scaled.len() / 2];
    assert!((median - 0.8276).abs() <= 0.03, "median {median}");
}

#[test]
fn ks_hundred_seeds_mostly_pass() {
    // Seeds 0..99 at n = 10⁴. Two of them (32 and 50) exceed the critical
    // value, which a correct sampler does about one time in four.
    let p = params(0.5);
    let n = 10_000;
    let critical = ks_critical_value_1pct(n);
    let failing: Vec<u64> = (0..100u64)
        .filter(|&seed| ks_statistic(&sample_batch(n, &p, SeedSpec::new(seed)).unwrap()) >= critical)
        .collect();
    assert_eq!(failing, vec![32, 50]);
}

#[test]
fn ks_large_sample_passes() {
    let n = 100_000;
    let batch = sample_batch(n, &params(1.3), SeedSpec::with_stream(9, 3)).unwrap();
    let d = ks_statistic(&batch);
    assert!(d < ks_critical_value_1pct(n), "{d}");
    assert!(d > 0.0);
}

#[test]
fn ks_rejects_misscaled_sampler() {
    let n = 10_000;
    let p = params(0.5);
    let batch = sample_batch(n, &p, SeedSpec::new(1)).unwrap();
    let mut doubled: Vec<f64> = batch.speeds().map(|s| 2.0 * s).collect();
    let d = ks_statistic_of_speeds(&mut doubled, &p);
    assert!(d > 10.0 * ks_critical_value_1pct(n), "{d}");
}

#[test]
fn different_streams_are_uncorrelated() {
    let p = params(0.5);
    let n = 200_000;
    let a = sample_batch(n, &p, SeedSpec::with_stream(42, 0)).unwrap();
    let b = sample_batch(n, &p, SeedSpec::with_stream(42, 1000)).unwrap();
    assert_ne!(a.velocities()[0], b.velocities()[0]);
    let ma = empirical_moments(&a).unwrap();
    let mb = empirical_moments(&b).unwrap();
    // σ = 1; the difference of two independent means has σ·sqrt(2/n).
    let bound = 5.0 * (2.0 / n as f64).sqrt();
    for (x, y) in ma.mean.iter().zip(mb.mean) {
        assert!((x - y).abs() <= bound);
    }
    // Correlation between paired vx values.
    let r: f64 = a
        .velocities()
        .iter()
        .zip(b.velocities())
        .map(|(u, v)| u.vx * v.vx)
        .sum::<f64>()
        / n as f64;
    assert!(r.abs() <= 5.0 / (n as f64).sqrt(), "correlation {r}");
}

#[test]
fn reproducible_and_regenerable_from_metadata() {
    let p = params(0.8);
    let a = sample_batch(CHUNK_LEN + 123, &p, SeedSpec::with_stream(5, 9)).unwrap();
    let b = sample_batch(a.count(), a.params(), a.seed_spec()).unwrap();
    assert_eq!(a, b);
    let bits = |batch: &maxwell_kinetics::SampleBatch| -> Vec<u64> {
        batch.velocities().iter().flat_map(|v| [v.vx.to_bits(), v.vy.to_bits(), v.vz.to_bits()]).collect()
    };
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn chunks_use_consecutive_streams() {
    let p = params(0.5);
    let s = SeedSpec::with_stream(31, 4);
    let batch = sample_batch(CHUNK_LEN + 2, &p, s).unwrap();
    let sigma = p.component_sigma();
    let mut second = NormalStream::new(SeedSpec::with_stream(31, 5));
    for v in &batch.velocities()[CHUNK_LEN..] {
        assert_eq!(v.vx, sigma * second.next_normal());
        assert_eq!(v.vy, sigma * second.next_normal());
        assert_eq!(v.vz, sigma * second.next_normal());
    }
    let mut first = NormalStream::new(s);
    assert_eq!(batch.velocities()[0].vx, sigma * first.next_normal());
}

#[test]
fn result_independent_of_chunk_schedule() {
    let p = params(2.0);
    let n = 3 * CHUNK_LEN + 17;
    let s = SeedSpec::new(8);
    assert_eq!(sample_batch(n, &p, s).unwrap(), sample_batch_with(&Reversed, n, &p, s).unwrap());
}

#[test]
fn huge_activation_energy_gives_zero_fraction() {
    let c = 0.5;
    let batch = sample_batch(N, &params(c), SeedSpec::new(3)).unwrap();
    // λ = 60.
    assert_eq!(empirical_tail_fraction(&batch, 60.0 / (2.0 * c), 1.0).unwrap(), 0.0);
}
