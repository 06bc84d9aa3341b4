//! Brute-force classical trajectories. This is the oracle every other
//! module is checked against.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::natural::{collatz_step, step_in_place, Natural};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// `values[k] = C^k(start)` together with the discrete derivatives
/// `deltas[k] = values[k+1] - values[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalTrajectory {
    pub start: Natural,
    pub values: Vec<Natural>,
    pub reached_one_at: Option<usize>,
    #[serde(with = "crate::decimal::bigint_vec")]
    pub deltas: Vec<BigInt>,
}

impl ClassicalTrajectory {
    /// Rebuilds a trajectory from its values, recomputing the derived fields.
    pub fn from_values(values: Vec<Natural>) -> Result<Self> {
        let start = values
            .first()
            .cloned()
            .ok_or(Error::TooShort { needed: 1, got: 0 })?;
        let reached_one_at = values.iter().position(Natural::is_one);
        let deltas = discrete_derivatives(&values);
        Ok(ClassicalTrajectory {
            start,
            values,
            reached_one_at,
            deltas,
        })
    }

    /// Number of applications of `C` recorded.
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }
}

/// Iterates `C` from `n` for at most `max_steps` applications, so at most
/// `max_steps + 1` values are stored.
///
/// With `stop_at_one` the walk ends at the first 1 and running out of budget
/// first is an error. Without it exactly `max_steps` steps are taken, through
/// the 4, 2, 1 cycle if reached.
pub fn classical_trajectory(
    n: &Natural,
    max_steps: u64,
    stop_at_one: bool,
) -> Result<ClassicalTrajectory> {
    let mut values = vec![n.clone()];
    let mut reached_one_at = n.is_one().then_some(0);
    let mut steps = 0u64;
    while steps < max_steps && !(stop_at_one && reached_one_at.is_some()) {
        let next = collatz_step(values.last().unwrap());
        steps += 1;
        if reached_one_at.is_none() && next.is_one() {
            reached_one_at = Some(values.len());
        }
        values.push(next);
    }
    if stop_at_one && reached_one_at.is_none() {
        return Err(Error::BudgetExhausted { budget: max_steps });
    }
    let deltas = discrete_derivatives(&values);
    Ok(ClassicalTrajectory {
        start: n.clone(),
        values,
        reached_one_at,
        deltas,
    })
}

/// Smallest `k` with `C^k(n) = 1`.
pub fn total_stopping_time(n: &Natural, max_steps: u64) -> Result<u64> {
    let mut v: BigUint = n.as_biguint().clone();
    let mut k = 0u64;
    while !v.is_one() {
        if k == max_steps {
            return Err(Error::BudgetExhausted { budget: max_steps });
        }
        step_in_place(&mut v);
        k += 1;
    }
    Ok(k)
}

/// The set `{C^k(n)}` up to the first 1.
pub fn trajectory_set(n: &Natural, max_steps: u64) -> Result<BTreeSet<Natural>> {
    Ok(classical_trajectory(n, max_steps, true)?
        .values
        .into_iter()
        .collect())
}

pub fn discrete_derivatives(values: &[Natural]) -> Vec<BigInt> {
    values
        .windows(2)
        .map(|w| BigInt::from(w[1].as_biguint().clone()) - BigInt::from(w[0].as_biguint().clone()))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityReport {
    pub checked: usize,
    pub violations: Vec<usize>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks at every index with a derivative that odd values have
/// `delta = 2v + 1 > 0` and even values have `delta = -v/2 < 0`.
pub fn check_parity_sign_law(t: &ClassicalTrajectory) -> ParityReport {
    let mut report = ParityReport::default();
    for (k, (value, delta)) in t.values.iter().zip(&t.deltas).enumerate() {
        report.checked += 1;
        let v = BigInt::from(value.as_biguint().clone());
        let ok = if value.is_odd() {
            delta.is_positive() && *delta == &v * 2 + 1
        } else {
            delta.is_negative() && *delta == -(&v / BigInt::from(2u8))
        };
        let recomputed = BigInt::from(t.values[k + 1].as_biguint().clone()) - &v;
        if !ok || recomputed != *delta {
            report.violations.push(k);
        }
    }
    report
}
