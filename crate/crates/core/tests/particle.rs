use alphadiv::gibbs::*;
use alphadiv::particle::*;
use alphadiv::rng;
use alphadiv::urn::{sample_partition, PartitionState};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn within_3se(hits: usize, reps: usize, p: f64) -> bool {
    let freq = hits as f64 / reps as f64;
    let se = (p * (1.0 - p) / reps as f64).sqrt();
    (freq - p).abs() <= 3.0 * se
}

fn gg(beta: f64) -> GGParams {
    GGParams::from_beta(beta, 0.5).unwrap()
}

#[test]
fn two_particles_under_pd() {
    let kernel = MoranKernel::from_weights(2, Box::new(PDParams::new(0.0, 0.5).unwrap())).unwrap();
    assert!((kernel.g0(1).unwrap() - 0.5).abs() < 1e-15);
    let start = ParticleSystem::from_assignments(&[7, 7]).unwrap();
    let reps = 100_000;
    let hits = rng::replicate(1, reps, |_, r| {
        let mut sys = start.clone();
        moran_step(&mut sys, &kernel, r).unwrap().fresh
    })
    .into_iter()
    .filter(|&f| f)
    .count();
    assert!(within_3se(hits, reps, 0.5));
}

#[test]
fn conditioned_fresh_probability() {
    let start = ParticleSystem::from_partition(&PartitionState::from_block_sizes(&[2, 1, 1]).unwrap()).unwrap();
    let reps = 100_000;
    let hits = rng::replicate(2, reps, |_, r| {
        let mut sys = start.clone();
        let ev = conditioned_step(&mut sys, 0.5, r).unwrap();
        assert_eq!(sys.k(), 3);
        ev.fresh
    })
    .into_iter()
    .filter(|&f| f)
    .count();
    assert!(within_3se(hits, reps, 0.5));
}

#[test]
fn conditioned_chain_keeps_k_at_the_extremes() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let mut one = ParticleSystem::from_assignments(&[1; 10]).unwrap();
    let mut all: ParticleSystem = ParticleSystem::from_assignments(&(0..10).collect::<Vec<u64>>()).unwrap();
    for _ in 0..1000 {
        conditioned_step(&mut one, 0.5, &mut r).unwrap();
        conditioned_step(&mut all, 0.5, &mut r).unwrap();
    }
    assert_eq!((one.k(), all.k()), (1, 10));
    one.check_consistency().unwrap();
    all.check_consistency().unwrap();
}

#[test]
fn fresh_count_matches_summed_g0() {
    let n = 200;
    let kernel = MoranKernel::new(n, &gg(2.0)).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let mut sys = ParticleSystem::from_partition(&sample_partition(n, &QuadratureWeights(gg(2.0)), &mut r).unwrap()).unwrap();
    let (mut fresh, mut mean, mut var) = (0usize, 0.0, 0.0);
    for _ in 0..300_000 {
        let ev = moran_step(&mut sys, &kernel, &mut r).unwrap();
        fresh += ev.fresh as usize;
        mean += ev.g0;
        var += ev.g0 * (1.0 - ev.g0);
    }
    assert!((fresh as f64 - mean).abs() <= 3.0 * var.sqrt(), "{fresh} vs {mean}");
    sys.check_consistency().unwrap();
}

#[test]
fn one_event_drift_matches_exact() {
    let n = 200;
    let params = gg(2.0);
    let kernel = MoranKernel::new(n, &params).unwrap();
    let start = ParticleSystem::from_partition(
        &sample_partition(n, &QuadratureWeights(params), &mut ChaCha8Rng::seed_from_u64(5)).unwrap(),
    )
    .unwrap();
    let (k, m1) = (start.k(), start.singletons() as f64);
    let nf = n as f64;
    let up = (1.0 - m1 / nf) * kernel.g0(k).unwrap();
    let down = (m1 / nf) * (1.0 - kernel.g0(k - 1).unwrap());
    let exact = up - down;
    let reps = 300_000;
    let deltas = rng::replicate(6, reps, |_, r| {
        let mut sys = start.clone();
        let ev = moran_step(&mut sys, &kernel, r).unwrap();
        ev.k_after as f64 - ev.k_before as f64
    });
    let mean = deltas.iter().sum::<f64>() / reps as f64;
    let se = ((up + down - exact * exact) / reps as f64).sqrt();
    assert!((mean - exact).abs() <= 3.0 * se, "{mean} vs {exact} +- {se}");
}

#[test]
fn rescaled_path_starts_at_initial_state() {
    let n = 50;
    let kernel = MoranKernel::new(n, &gg(1.0)).unwrap();
    let sys0 = ParticleSystem::from_partition(&PartitionState::from_block_sizes(&[20, 10, 10, 5, 5]).unwrap()).unwrap();
    for clock in [ClockMode::Discrete, ClockMode::Exponential] {
        let path = simulate_rescaled(&sys0, &kernel, &[0.0, 0.5, 1.0], clock, 3, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(path.diversity.values[0], sys0.diversity(0.5));
        assert_eq!(path.frequencies[0].coords(), &[0.4, 0.2, 0.2]);
        assert_eq!(path.frequency_diversity[0], sys0.diversity(0.5));
        // n^2 t / 2 at t = 1
        let expect = 0.5 * (n * n) as f64;
        let tol = if clock == ClockMode::Discrete { 1.0 } else { 5.0 * expect.sqrt() };
        assert!((path.events as f64 - expect).abs() <= tol, "{:?}: {}", clock, path.events);
    }
    assert!(simulate_rescaled(&sys0, &kernel, &[1.0, 0.5], ClockMode::Discrete, 3, &mut ChaCha8Rng::seed_from_u64(8)).is_err());
}

#[test]
fn kernel_rejects_mismatched_size() {
    let kernel = MoranKernel::new(10, &gg(1.0)).unwrap();
    let mut sys = ParticleSystem::from_assignments(&[1, 2, 3]).unwrap();
    assert!(moran_step(&mut sys, &kernel, &mut ChaCha8Rng::seed_from_u64(9)).is_err());
    assert!(kernel.g0(0).is_err() && kernel.g0(10).is_err());
    assert!(MoranKernel::new(1, &gg(1.0)).is_err());
}

proptest! {
    #[test]
    fn counts_stay_consistent(seed in 0u64..500, n in 2usize..40, steps in 1usize..400, beta in 0.0f64..20.0) {
        let kernel = MoranKernel::new(n, &gg(beta)).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mut sys = ParticleSystem::from_assignments(&vec![0; n]).unwrap();
        let mut last_id = sys.next_fresh_id();
        for _ in 0..steps {
            let ev = moran_step(&mut sys, &kernel, &mut r).unwrap();
            if ev.fresh {
                prop_assert!(ev.new_type >= last_id);
            }
            prop_assert!(sys.next_fresh_id() >= last_id);
            last_id = sys.next_fresh_id();
            prop_assert_eq!(sys.type_sizes().iter().sum::<usize>(), n);
            prop_assert!(ev.k_after.abs_diff(ev.k_before) <= 1);
        }
        prop_assert!(sys.check_consistency().is_ok());
        prop_assert_eq!(sys.partition().n(), n);
        prop_assert_eq!(sys.partition().k(), sys.k());
    }

    #[test]
    fn conditioned_steps_preserve_k(seed in 0u64..500, sizes in prop::collection::vec(1usize..6, 1..12)) {
        prop_assume!(sizes.iter().sum::<usize>() >= 2);
        let mut sys = ParticleSystem::from_partition(&PartitionState::from_block_sizes(&sizes).unwrap()).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            conditioned_step(&mut sys, 0.5, &mut r).unwrap();
        }
        prop_assert_eq!(sys.k(), sizes.len());
        prop_assert!(sys.check_consistency().is_ok());
    }
}
