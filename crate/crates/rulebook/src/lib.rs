//! Prioritized rulebooks and the per-step reward they induce.
//!
//! A rulebook holds one goal formula the adversary tries to make true
//! plus groups of constraint formulas it must keep true, each group
//! carrying a priority and a violation penalty. The step reward is
//!
//! ```text
//! r[t] = lambda_g * I(goal, s_0..t) - sum over groups, constraints of
//!        lambda_group * (1 - I(constraint, s_0..t))
//! ```
//!
//! where `I` is the prefix indicator from `stl-core`: a constraint
//! formula states required behavior, so its indicator stays 1 while the
//! constraint is respected and the penalty applies to `1 - I`. Because
//! indicators are prefix-based, a violated safety constraint keeps
//! costing its penalty on every later step of the episode.

use std::fmt;

use stl_core::{indicator, EvalError, Formula, Trace};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RulebookError {
    #[error("constraint group {index} is empty")]
    EmptyGroup { index: usize },
    #[error("constraint group penalty must be positive, got {0}")]
    NonPositiveLambda(f64),
    #[error("goal reward must be positive, got {0}")]
    NonPositiveGoalReward(f64),
    #[error("duplicate group priority {0}")]
    DuplicatePriority(u32),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Constraints sharing one priority and one violation penalty.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintGroup {
    pub priority: u32,
    pub lambda: f64,
    pub constraints: Vec<Formula>,
}

/// Stable identifier of a constraint: flat index in group-major order,
/// rendered as `c1`, `c2`, ... in exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintId(pub usize);

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0 + 1)
    }
}

/// Goal plus priority-ordered constraint groups.
#[derive(Debug, Clone, PartialEq)]
pub struct Rulebook {
    goal: Formula,
    goal_reward: f64,
    groups: Vec<ConstraintGroup>,
    horizon: usize,
}

/// One step's monitor output: goal indicator, per-constraint violation
/// indicators, and the combined reward.
#[derive(Debug, Clone, PartialEq)]
pub struct StepVerdict {
    pub goal_attained: bool,
    /// violations[i] pairs with `constraint_ids()[i]`; true means violated.
    pub violations: Vec<bool>,
    pub reward: f64,
}

impl StepVerdict {
    pub fn any_violation(&self) -> bool {
        self.violations.iter().any(|v| *v)
    }
}

/// Ordering problems among the penalty hyperparameters. These are
/// warnings, not errors: published weight choices violate the ordering
/// at realistic horizons and campaigns must still run with them.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationWarning {
    /// Lowest-priority penalty does not dominate the maximum attainable
    /// goal reward `horizon * goal_reward`.
    LowestGroupTooCheap {
        lambda: f64,
        horizon: usize,
        goal_reward: f64,
    },
    /// A higher-priority group is not strictly more expensive than some
    /// lower-priority group.
    PriorityOrderInverted {
        higher_priority: u32,
        higher_lambda: f64,
        lower_priority: u32,
        lower_lambda: f64,
    },
}

impl fmt::Display for ValidationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationWarning::LowestGroupTooCheap {
                lambda,
                horizon,
                goal_reward,
            } => write!(
                f,
                "lowest-priority penalty {lambda} <= horizon {horizon} * goal reward {goal_reward}; \
                 goal-by-violation strategies may pay off"
            ),
            ValidationWarning::PriorityOrderInverted {
                higher_priority,
                higher_lambda,
                lower_priority,
                lower_lambda,
            } => write!(
                f,
                "group at priority {higher_priority} has penalty {higher_lambda} <= {lower_lambda} \
                 of lower priority {lower_priority}"
            ),
        }
    }
}

impl Rulebook {
    /// Builds a rulebook; groups are sorted by ascending priority.
    pub fn new(
        goal: Formula,
        goal_reward: f64,
        mut groups: Vec<ConstraintGroup>,
        horizon: usize,
    ) -> Result<Self, RulebookError> {
        if !(goal_reward > 0.0) || !goal_reward.is_finite() {
            return Err(RulebookError::NonPositiveGoalReward(goal_reward));
        }
        if horizon == 0 {
            return Err(RulebookError::ZeroHorizon);
        }
        for (index, g) in groups.iter().enumerate() {
            if g.constraints.is_empty() {
                return Err(RulebookError::EmptyGroup { index });
            }
            if !(g.lambda > 0.0) || !g.lambda.is_finite() {
                return Err(RulebookError::NonPositiveLambda(g.lambda));
            }
        }
        groups.sort_by_key(|g| g.priority);
        for pair in groups.windows(2) {
            if pair[0].priority == pair[1].priority {
                return Err(RulebookError::DuplicatePriority(pair[0].priority));
            }
        }
        Ok(Self {
            goal,
            goal_reward,
            groups,
            horizon,
        })
    }

    pub fn goal(&self) -> &Formula {
        &self.goal
    }

    pub fn goal_reward(&self) -> f64 {
        self.goal_reward
    }

    pub fn groups(&self) -> &[ConstraintGroup] {
        &self.groups
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Constraints in group-major order, paired with their group penalty.
    pub fn constraints(&self) -> impl Iterator<Item = (ConstraintId, &Formula, f64)> {
        self.groups
            .iter()
            .flat_map(|g| g.constraints.iter().map(move |c| (c, g.lambda)))
            .enumerate()
            .map(|(i, (c, lambda))| (ConstraintId(i), c, lambda))
    }

    pub fn constraint_ids(&self) -> Vec<ConstraintId> {
        self.constraints().map(|(id, _, _)| id).collect()
    }

    pub fn constraint_count(&self) -> usize {
        self.groups.iter().map(|g| g.constraints.len()).sum()
    }

    /// Checks the penalty ordering: the lowest-priority group should cost
    /// more than `horizon * goal_reward`, and penalties should strictly
    /// increase with priority.
    pub fn validate(&self) -> Vec<ValidationWarning> {
        let mut warnings = Vec::new();
        if let Some(lowest) = self.groups.first() {
            if lowest.lambda <= self.horizon as f64 * self.goal_reward {
                warnings.push(ValidationWarning::LowestGroupTooCheap {
                    lambda: lowest.lambda,
                    horizon: self.horizon,
                    goal_reward: self.goal_reward,
                });
            }
        }
        for hi in 1..self.groups.len() {
            for lo in 0..hi {
                if self.groups[hi].lambda <= self.groups[lo].lambda {
                    warnings.push(ValidationWarning::PriorityOrderInverted {
                        higher_priority: self.groups[hi].priority,
                        higher_lambda: self.groups[hi].lambda,
                        lower_priority: self.groups[lo].priority,
                        lower_lambda: self.groups[lo].lambda,
                    });
                }
            }
        }
        warnings
    }

    /// Evaluates goal and constraints on the prefix `s_0..=t` and combines
    /// them into the step reward.
    pub fn step_reward(&self, tr: &Trace, t: usize) -> Result<StepVerdict, RulebookError> {
        let goal_attained = indicator(&self.goal, tr, t)?;
        let mut violations = Vec::with_capacity(self.constraint_count());
        let mut reward = if goal_attained { self.goal_reward } else { 0.0 };
        for (_, constraint, lambda) in self.constraints() {
            let respected = indicator(constraint, tr, t)?;
            violations.push(!respected);
            if !respected {
                reward -= lambda;
            }
        }
        Ok(StepVerdict {
            goal_attained,
            violations,
            reward,
        })
    }
}
