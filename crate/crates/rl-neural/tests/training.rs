use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rl_neural::{Activation, Mlp, ReplayBuffer, Transition};

/// Terminal transitions make the TD target equal the reward, so a batch
/// of them is a plain regression problem.
fn regression_batch(rng: &mut ChaCha8Rng, n: usize) -> Vec<Transition> {
    (0..n)
        .map(|_| {
            let s: Vec<f64> = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let a = rng.random_range(0..3);
            // smooth synthetic q-surface
            let target = (s[0] * 1.5 - s[1]).sin() + 0.3 * a as f64;
            Transition {
                state: s,
                action: a,
                reward: target,
                next_state: vec![0.0, 0.0],
                terminal: true,
            }
        })
        .collect()
}

#[test]
fn loss_drops_100x_within_5000_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let data = regression_batch(&mut rng, 256);
    let mut net = Mlp::new(&[2, 8, 8, 3], Activation::Tanh, 0.05, 7).unwrap();
    let mut first = None;
    let mut last = f64::INFINITY;
    for step in 0..5000 {
        let batch: Vec<Transition> = (0..32)
            .map(|_| data[rng.random_range(0..data.len())].clone())
            .collect();
        let loss = net.td_step(&batch, 0.9).unwrap();
        if step == 0 {
            first = Some(loss);
        }
        last = loss;
    }
    let first = first.unwrap();
    assert!(
        last * 100.0 <= first,
        "loss went {first} -> {last}, less than 100x"
    );
}

#[test]
fn identical_seeds_and_data_give_bit_identical_parameters() {
    let run = || {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let data = regression_batch(&mut rng, 64);
        let mut buf = ReplayBuffer::new(64);
        for t in data {
            buf.push(t);
        }
        let mut net = Mlp::new(&[2, 8, 3], Activation::Tanh, 0.01, 5).unwrap();
        for _ in 0..200 {
            let batch = buf.sample(16, &mut rng).unwrap();
            net.td_step(&batch, 0.9).unwrap();
        }
        net.params()
    };
    assert_eq!(run(), run());
}
