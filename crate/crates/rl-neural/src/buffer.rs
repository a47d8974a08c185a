use std::collections::VecDeque;

use rand::Rng;

/// One observed transition.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: Vec<f64>,
    pub action: usize,
    pub reward: f64,
    pub next_state: Vec<f64>,
    pub terminal: bool,
}

/// Fixed-capacity ring of transitions with uniform sampling.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    items: VecDeque<Transition>,
}

impl ReplayBuffer {
    /// Capacity must be nonzero.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay buffer needs nonzero capacity");
        Self {
            capacity,
            items: VecDeque::with_capacity(capacity),
        }
    }

    /// Appends a transition, evicting the oldest when full.
    pub fn push(&mut self, t: Transition) {
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back(t);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Uniform sample with replacement; `None` until the buffer holds at
    /// least `batch` transitions (caller skips the update).
    pub fn sample<R: Rng + ?Sized>(&self, batch: usize, rng: &mut R) -> Option<Vec<Transition>> {
        if self.items.len() < batch {
            return None;
        }
        Some(
            (0..batch)
                .map(|_| self.items[rng.random_range(0..self.items.len())].clone())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(tag: f64) -> Transition {
        Transition {
            state: vec![tag],
            action: 0,
            reward: tag,
            next_state: vec![tag],
            terminal: false,
        }
    }

    #[test]
    fn ring_evicts_oldest() {
        let mut buf = ReplayBuffer::new(3);
        for i in 1..=4 {
            buf.push(t(i as f64));
        }
        assert_eq!(buf.len(), 3);
        let kept: Vec<f64> = buf.items.iter().map(|x| x.reward).collect();
        assert_eq!(kept, vec![2.0, 3.0, 4.0]);
    }

    #[test]
    fn underfilled_buffer_is_not_ready() {
        let mut buf = ReplayBuffer::new(1000);
        for i in 0..10 {
            buf.push(t(i as f64));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(buf.sample(256, &mut rng).is_none());
        assert!(buf.sample(10, &mut rng).is_some());
    }

    #[test]
    fn sampling_is_uniform_by_chi_square() {
        // 1e5 draws from 10 items; chi-square with 9 dof at p = 0.01
        // rejects above 21.666
        let mut buf = ReplayBuffer::new(10);
        for i in 0..10 {
            buf.push(t(i as f64));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let draws = 100_000;
        let mut counts = [0u64; 10];
        for _ in 0..draws / 10 {
            for item in buf.sample(10, &mut rng).unwrap() {
                counts[item.reward as usize] += 1;
            }
        }
        let expected = draws as f64 / 10.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 21.666, "chi-square statistic {chi2} too large");
    }
}
