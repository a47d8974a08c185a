use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TraceError {
    #[error("timestep must be positive and finite, got {0}")]
    InvalidTimestep(f64),
    #[error("duplicate signal name `{0}`")]
    DuplicateSignal(String),
    #[error("sample has {got} values, trace has {expected} signals")]
    SampleLengthMismatch { got: usize, expected: usize },
    #[error("signal columns have unequal lengths")]
    UnequalColumns,
    #[error("invalid interval bounds [{lo},{hi}]: need 0 <= lo <= hi, finite")]
    InvalidInterval { lo: f64, hi: f64 },
}

/// Fixed-timestep multi-signal record of one episode.
///
/// Sample index `t` corresponds to wall time `t * dt`. All columns have
/// the same length at all times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    dt: f64,
    names: Vec<String>,
    cols: Vec<Vec<f64>>,
}

impl Trace {
    pub fn new<I, S>(dt: f64, names: I) -> Result<Self, TraceError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(TraceError::InvalidTimestep(dt));
        }
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(TraceError::DuplicateSignal(n.clone()));
            }
        }
        let cols = names.iter().map(|_| Vec::new()).collect();
        Ok(Self { dt, names, cols })
    }

    /// Builds a trace from complete columns. All columns must have equal length.
    pub fn from_columns<S>(dt: f64, columns: Vec<(S, Vec<f64>)>) -> Result<Self, TraceError>
    where
        S: Into<String>,
    {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(TraceError::InvalidTimestep(dt));
        }
        let mut names = Vec::with_capacity(columns.len());
        let mut cols = Vec::with_capacity(columns.len());
        let mut len = None;
        for (name, col) in columns {
            let name = name.into();
            if names.contains(&name) {
                return Err(TraceError::DuplicateSignal(name));
            }
            match len {
                None => len = Some(col.len()),
                Some(l) if l != col.len() => return Err(TraceError::UnequalColumns),
                _ => {}
            }
            names.push(name);
            cols.push(col);
        }
        Ok(Self { dt, names, cols })
    }

    /// Appends one sample; `values` follows the signal order given at construction.
    pub fn push_sample(&mut self, values: &[f64]) -> Result<(), TraceError> {
        if values.len() != self.cols.len() {
            return Err(TraceError::SampleLengthMismatch {
                got: values.len(),
                expected: self.cols.len(),
            });
        }
        for (col, v) in self.cols.iter_mut().zip(values) {
            col.push(*v);
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.cols.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Column values for `name`, or `None` if the signal does not exist.
    ///
    /// Linear scan: traces carry a handful of signals and this sits on the
    /// monitor's hot path where a hash would cost more than it saves.
    pub fn col(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.cols[i].as_slice())
    }

    pub fn value(&self, name: &str, t: usize) -> Option<f64> {
        self.col(name).and_then(|c| c.get(t)).copied()
    }
}
