use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::buffer::Transition;
use crate::NeuralError;

/// Hidden-layer nonlinearity; the output layer is always identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Tanh,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the activation output.
    fn deriv_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - a * a,
        }
    }
}

/// One dense layer, weights stored row-major as `out x in`.
#[derive(Debug, Clone, PartialEq)]
struct Layer {
    w: Vec<f64>,
    b: Vec<f64>,
    n_in: usize,
    n_out: usize,
}

/// Fully-connected Q-network: state in, one q-value per action out.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    layers: Vec<Layer>,
    activation: Activation,
    pub learning_rate: f64,
    seed: u64,
}

impl Mlp {
    /// Glorot-uniform initialization (`+-sqrt(6/(fan_in+fan_out))`)
    /// drawn from a stream seeded with `seed`.
    pub fn new(
        sizes: &[usize],
        activation: Activation,
        learning_rate: f64,
        seed: u64,
    ) -> Result<Self, NeuralError> {
        let mut net = Self::zeros(sizes, activation, learning_rate)?;
        net.seed = seed;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for layer in &mut net.layers {
            let bound = (6.0 / (layer.n_in + layer.n_out) as f64).sqrt();
            for w in &mut layer.w {
                *w = rng.random_range(-bound..=bound);
            }
        }
        Ok(net)
    }

    /// All-zero parameters; mostly useful in tests and as a load target.
    pub fn zeros(
        sizes: &[usize],
        activation: Activation,
        learning_rate: f64,
    ) -> Result<Self, NeuralError> {
        if sizes.len() < 2 {
            return Err(NeuralError::TooFewLayers(sizes.len()));
        }
        if sizes.iter().any(|&s| s == 0) {
            return Err(NeuralError::ZeroWidth);
        }
        let layers = sizes
            .windows(2)
            .map(|pair| Layer {
                w: vec![0.0; pair[0] * pair[1]],
                b: vec![0.0; pair[1]],
                n_in: pair[0],
                n_out: pair[1],
            })
            .collect();
        Ok(Self {
            sizes: sizes.to_vec(),
            layers,
            activation,
            learning_rate,
            seed: 0,
        })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.w.len() + l.b.len()).sum()
    }

    /// Flat parameter vector: per layer, weights row-major then biases.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for l in &self.layers {
            out.extend_from_slice(&l.w);
            out.extend_from_slice(&l.b);
        }
        out
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<(), NeuralError> {
        if params.len() != self.param_count() {
            return Err(NeuralError::ParamCountMismatch {
                got: params.len(),
                expected: self.param_count(),
            });
        }
        let mut at = 0;
        for l in &mut self.layers {
            let wn = l.w.len();
            l.w.copy_from_slice(&params[at..at + wn]);
            at += wn;
            let bn = l.b.len();
            l.b.copy_from_slice(&params[at..at + bn]);
            at += bn;
        }
        Ok(())
    }

    /// Deterministic feedforward pass returning one q-value per action.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>, NeuralError> {
        Ok(self.forward_cached(input)?.pop().unwrap())
    }

    /// Activations of every layer, input first, output last.
    fn forward_cached(&self, input: &[f64]) -> Result<Vec<Vec<f64>>, NeuralError> {
        if input.len() != self.input_dim() {
            return Err(NeuralError::InputDimMismatch {
                got: input.len(),
                expected: self.input_dim(),
            });
        }
        let n_layers = self.layers.len();
        let mut acts = Vec::with_capacity(n_layers + 1);
        acts.push(input.to_vec());
        for (li, layer) in self.layers.iter().enumerate() {
            let prev = acts.last().unwrap();
            let mut next = vec![0.0; layer.n_out];
            for (o, out) in next.iter_mut().enumerate() {
                let row = &layer.w[o * layer.n_in..(o + 1) * layer.n_in];
                let mut z = layer.b[o];
                for (wi, xi) in row.iter().zip(prev) {
                    z += wi * xi;
                }
                *out = if li + 1 == n_layers {
                    z
                } else {
                    self.activation.apply(z)
                };
            }
            acts.push(next);
        }
        Ok(acts)
    }

    /// Mean squared error of `q(state)[action]` against fixed targets.
    pub fn supervised_loss(&self, items: &[(Vec<f64>, usize, f64)]) -> Result<f64, NeuralError> {
        if items.is_empty() {
            return Err(NeuralError::EmptyBatch);
        }
        let mut loss = 0.0;
        for (state, action, target) in items {
            let q = self.forward(state)?;
            if *action >= q.len() {
                return Err(NeuralError::BadAction {
                    got: *action,
                    actions: q.len(),
                });
            }
            let diff = target - q[*action];
            loss += diff * diff;
        }
        Ok(loss / items.len() as f64)
    }

    /// Loss plus its flat gradient, laid out like [`Mlp::params`].
    pub fn supervised_grads(
        &self,
        items: &[(Vec<f64>, usize, f64)],
    ) -> Result<(f64, Vec<f64>), NeuralError> {
        if items.is_empty() {
            return Err(NeuralError::EmptyBatch);
        }
        let mut grads = vec![0.0; self.param_count()];
        let mut loss = 0.0;
        let inv_n = 1.0 / items.len() as f64;
        let n_layers = self.layers.len();
        for (state, action, target) in items {
            let acts = self.forward_cached(state)?;
            let out = acts.last().unwrap();
            if *action >= out.len() {
                return Err(NeuralError::BadAction {
                    got: *action,
                    actions: out.len(),
                });
            }
            let diff = target - out[*action];
            loss += diff * diff * inv_n;
            // output delta of mean((y - q_a)^2): -2 (y - q_a) / n on the
            // chosen action, zero elsewhere
            let mut delta = vec![0.0; out.len()];
            delta[*action] = -2.0 * diff * inv_n;
            // walk layers backwards, accumulating into the flat gradient
            let mut offset_end = self.param_count();
            for li in (0..n_layers).rev() {
                let layer = &self.layers[li];
                let a_prev = &acts[li];
                let w_off = offset_end - layer.b.len() - layer.w.len();
                let b_off = offset_end - layer.b.len();
                for o in 0..layer.n_out {
                    let d = delta[o];
                    if d != 0.0 {
                        let grad_row = &mut grads[w_off + o * layer.n_in..w_off + (o + 1) * layer.n_in];
                        for (g, a) in grad_row.iter_mut().zip(a_prev) {
                            *g += d * a;
                        }
                        grads[b_off + o] += d;
                    }
                }
                if li > 0 {
                    let mut prev_delta = vec![0.0; layer.n_in];
                    for o in 0..layer.n_out {
                        let d = delta[o];
                        if d != 0.0 {
                            let row = &layer.w[o * layer.n_in..(o + 1) * layer.n_in];
                            for (pd, wi) in prev_delta.iter_mut().zip(row) {
                                *pd += d * wi;
                            }
                        }
                    }
                    for (pd, a) in prev_delta.iter_mut().zip(a_prev) {
                        *pd *= self.activation.deriv_from_output(*a);
                    }
                    delta = prev_delta;
                }
                offset_end = w_off;
            }
        }
        Ok((loss, grads))
    }

    /// One TD step: build targets `y = r + gamma * max_a' q(s', a')`
    /// (just `r` on terminal transitions) from the current weights, then
    /// take one SGD step on the mean squared TD error. Returns the
    /// pre-step loss.
    pub fn td_step(&mut self, batch: &[Transition], gamma: f64) -> Result<f64, NeuralError> {
        if batch.is_empty() {
            return Err(NeuralError::EmptyBatch);
        }
        // targets are fixed before any parameter mutation
        let mut items = Vec::with_capacity(batch.len());
        for tr in batch {
            let y = if tr.terminal {
                tr.reward
            } else {
                let next_q = self.forward(&tr.next_state)?;
                tr.reward + gamma * next_q.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            };
            items.push((tr.state.clone(), tr.action, y));
        }
        let (loss, grads) = self.supervised_grads(&items)?;
        if !loss.is_finite() {
            return Err(self.non_finite_dump("loss", loss));
        }
        if let Some(bad) = grads.iter().position(|g| !g.is_finite()) {
            return Err(self.non_finite_dump(&format!("gradient[{bad}]"), grads[bad]));
        }
        let lr = self.learning_rate;
        let mut at = 0;
        for l in &mut self.layers {
            for w in &mut l.w {
                *w -= lr * grads[at];
                at += 1;
            }
            for b in &mut l.b {
                *b -= lr * grads[at];
                at += 1;
            }
        }
        if let Some(bad) = self.params().iter().position(|p| !p.is_finite()) {
            let v = self.params()[bad];
            return Err(self.non_finite_dump(&format!("parameter[{bad}]"), v));
        }
        Ok(loss)
    }

    fn non_finite_dump(&self, what: &str, value: f64) -> NeuralError {
        let per_layer: Vec<String> = self
            .layers
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let max_w = l.w.iter().fold(0.0f64, |m, w| m.max(w.abs()));
                format!("layer{i} {}x{} max|w|={max_w:.3e}", l.n_in, l.n_out)
            })
            .collect();
        NeuralError::NonFinite {
            context: format!(
                "{what} = {value}; sizes {:?}, lr {}, [{}]",
                self.sizes,
                self.learning_rate,
                per_layer.join(", ")
            ),
        }
    }
}
