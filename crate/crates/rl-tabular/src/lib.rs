//! Tabular Q-learning over a discretized continuous state space.
//!
//! A [`Discretizer`] maps continuous state vectors onto a dense grid,
//! clamping out-of-range values to the boundary bins. The [`QTable`]
//! owns the `states x actions` value array together with its learning
//! hyperparameters and implements epsilon-soft action selection and the
//! one-step Q update. Tables round-trip bit-exactly through a versioned,
//! checksummed binary format.

mod io;

pub use io::FORMAT_VERSION;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TabularError {
    #[error("dimension `{name}`: need finite lo < hi and bins >= 1")]
    BadDimension { name: String },
    #[error("state has {got} dimensions, discretizer expects {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("action index {got} out of range ({actions} actions)")]
    BadAction { got: usize, actions: usize },
    #[error("need at least one action")]
    NoActions,
    #[error("hyperparameter out of range: {0}")]
    BadHyper(&'static str),
    #[error("table would need {0} entries, refusing")]
    TooLarge(u128),
    #[error("bad magic bytes; not a q-table file")]
    BadMagic,
    #[error("format version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("checksum mismatch; payload corrupted")]
    ChecksumMismatch,
    #[error("corrupted payload: {0}")]
    Corrupted(&'static str),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for TabularError {
    fn from(e: std::io::Error) -> Self {
        TabularError::Io(e.to_string())
    }
}

/// One state dimension of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DimSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub bins: u32,
}

impl DimSpec {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, bins: u32) -> Self {
        Self {
            name: name.into(),
            lo,
            hi,
            bins,
        }
    }
}

/// Maps continuous state vectors to flat grid indices, row-major in
/// dimension order. Values outside a dimension's range clamp to its
/// boundary bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretizer {
    dims: Vec<DimSpec>,
}

impl Discretizer {
    pub fn new(dims: Vec<DimSpec>) -> Result<Self, TabularError> {
        let mut states: u128 = 1;
        for d in &dims {
            if !d.lo.is_finite() || !d.hi.is_finite() || d.lo >= d.hi || d.bins == 0 {
                return Err(TabularError::BadDimension {
                    name: d.name.clone(),
                });
            }
            states = states.saturating_mul(d.bins as u128);
        }
        if states > 50_000_000 {
            return Err(TabularError::TooLarge(states));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[DimSpec] {
        &self.dims
    }

    pub fn state_count(&self) -> usize {
        self.dims.iter().map(|d| d.bins as usize).product()
    }

    pub fn bin(&self, dim: usize, value: f64) -> usize {
        let d = &self.dims[dim];
        let span = d.hi - d.lo;
        let raw = ((value - d.lo) / span * d.bins as f64).floor();
        if raw < 0.0 {
            0
        } else {
            (raw as usize).min(d.bins as usize - 1)
        }
    }

    pub fn index(&self, state: &[f64]) -> Result<usize, TabularError> {
        if state.len() != self.dims.len() {
            return Err(TabularError::DimensionMismatch {
                got: state.len(),
                expected: self.dims.len(),
            });
        }
        let mut idx = 0usize;
        for (dim, &v) in state.iter().enumerate() {
            idx = idx * self.dims[dim].bins as usize + self.bin(dim, v);
        }
        Ok(idx)
    }
}

/// Dense Q-value table plus learning hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    disc: Discretizer,
    n_actions: usize,
    q: Vec<f64>,
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon: f64,
}

impl QTable {
    /// Zero-initialized table.
    pub fn zeros(
        disc: Discretizer,
        n_actions: usize,
        alpha: f64,
        gamma: f64,
        epsilon: f64,
    ) -> Result<Self, TabularError> {
        if n_actions == 0 {
            return Err(TabularError::NoActions);
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(TabularError::BadHyper("alpha must be in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(TabularError::BadHyper("gamma must be in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(TabularError::BadHyper("epsilon must be in [0, 1]"));
        }
        let q = vec![0.0; disc.state_count() * n_actions];
        Ok(Self {
            disc,
            n_actions,
            q,
            alpha,
            gamma,
            epsilon,
        })
    }

    /// Uniform random initialization in [-0.01, 0.01].
    pub fn random_init<R: Rng + ?Sized>(
        disc: Discretizer,
        n_actions: usize,
        alpha: f64,
        gamma: f64,
        epsilon: f64,
        rng: &mut R,
    ) -> Result<Self, TabularError> {
        let mut qt = Self::zeros(disc, n_actions, alpha, gamma, epsilon)?;
        for v in &mut qt.q {
            *v = rng.random_range(-0.01..=0.01);
        }
        Ok(qt)
    }

    pub fn discretizer(&self) -> &Discretizer {
        &self.disc
    }

    pub fn action_count(&self) -> usize {
        self.n_actions
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn row(&self, state_index: usize) -> &[f64] {
        let base = state_index * self.n_actions;
        &self.q[base..base + self.n_actions]
    }

    /// Greedy action with ties broken by lowest index.
    pub fn greedy(&self, state_index: usize) -> usize {
        let row = self.row(state_index);
        let mut best = 0;
        for (a, &v) in row.iter().enumerate().skip(1) {
            if v > row[best] {
                best = a;
            }
        }
        best
    }

    /// Epsilon-soft selection: with probability epsilon pick uniformly,
    /// otherwise the greedy action. Every action keeps probability at
    /// least `epsilon / actions`.
    pub fn select_action<R: Rng + ?Sized>(
        &self,
        state: &[f64],
        rng: &mut R,
    ) -> Result<usize, TabularError> {
        let idx = self.disc.index(state)?;
        if rng.random::<f64>() < self.epsilon {
            Ok(rng.random_range(0..self.n_actions))
        } else {
            Ok(self.greedy(idx))
        }
    }

    /// One-step Q update with learning rate `alpha`:
    /// `q(s,a) += alpha * (r + gamma * max_a' q(s',a') - q(s,a))`,
    /// dropping the bootstrap term on terminal transitions.
    pub fn update(
        &mut self,
        state: &[f64],
        action: usize,
        reward: f64,
        next_state: &[f64],
        terminal: bool,
    ) -> Result<(), TabularError> {
        self.update_with_alpha(state, action, reward, next_state, terminal, self.alpha)
    }

    /// Same update with an explicit learning rate, for per-visit decay.
    pub fn update_with_alpha(
        &mut self,
        state: &[f64],
        action: usize,
        reward: f64,
        next_state: &[f64],
        terminal: bool,
        alpha: f64,
    ) -> Result<(), TabularError> {
        if action >= self.n_actions {
            return Err(TabularError::BadAction {
                got: action,
                actions: self.n_actions,
            });
        }
        let s = self.disc.index(state)?;
        let s_next = self.disc.index(next_state)?;
        let bootstrap = if terminal {
            0.0
        } else {
            let row = self.row(s_next);
            row.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        };
        let entry = &mut self.q[s * self.n_actions + action];
        *entry += alpha * (reward + self.gamma * bootstrap - *entry);
        Ok(())
    }
}
