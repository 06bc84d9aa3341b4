//! The odd-part accelerated iteration.
//!
//! Row 0 holds `x_0 = n` and its split. Every later row applies `C` to the
//! previous odd part, `x_i = C(y_{i-1}) = 3 y_{i-1} + 1`, and splits the
//! result into `y_i * 2^{u_i}`. After row `i` is formed the lookahead
//! `x_{i+1} = C(y_i)` gives the squared distance between the points
//! `(x_{i+1}, y_i)` and `(x_i, y_{i-1})`, which is stored on row `i - 1`.
//! The walk stops at the first zero distance, which only happens at the
//! fixed point `(4, 1)`.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::classical::classical_trajectory;
use crate::error::{Error, Result};
use crate::natural::{collatz_step, two_adic_split, Natural};

pub const DEFAULT_MAX_ITERS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub w: usize,
    pub x: Natural,
    /// Odd part of `x`.
    pub y: Natural,
    /// 2-adic valuation of `x`; `z = 2^u`.
    pub u: u64,
    /// `y_0 - y`.
    #[serde(with = "crate::decimal::bigint")]
    pub eta: BigInt,
    /// Squared distance to the next point. `None` on the last row.
    #[serde(with = "crate::decimal::biguint_opt")]
    pub v_sq: Option<BigUint>,
}

impl TraceRow {
    pub fn z(&self) -> Natural {
        two_adic_split(&self.x).even_part()
    }

    /// `sqrt(v_sq)` for display only.
    pub fn distance(&self) -> Option<f64> {
        self.v_sq.as_ref().map(|v| {
            let f: f64 = v.to_string().parse().unwrap_or(f64::INFINITY);
            f.sqrt()
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceleratedTrace {
    pub input: Natural,
    pub rows: Vec<TraceRow>,
    /// First row index whose odd part is 1.
    pub i_min: Option<usize>,
    pub terminated: bool,
}

fn signed(n: &Natural) -> BigInt {
    BigInt::from(n.as_biguint().clone())
}

impl AcceleratedTrace {
    /// Runs at most `max_iters` loop iterations and returns whatever was
    /// produced, with `terminated` reporting whether the zero distance was hit.
    pub fn run(n: &Natural, max_iters: u64) -> Self {
        let split = two_adic_split(n);
        let y0 = signed(&split.odd_part);
        let mut rows = vec![TraceRow {
            w: 0,
            x: n.clone(),
            y: split.odd_part,
            u: split.exponent,
            eta: BigInt::zero(),
            v_sq: None,
        }];
        let mut i_min = rows[0].y.is_one().then_some(0);
        let mut terminated = false;

        for i in 1..=max_iters as usize {
            let prev = &rows[i - 1];
            let x = collatz_step(&prev.y);
            let split = two_adic_split(&x);
            let lookahead = collatz_step(&split.odd_part);

            let dx = signed(&lookahead) - signed(&x);
            let dy = signed(&split.odd_part) - signed(&prev.y);
            let v_sq = (&dx * &dx + &dy * &dy)
                .to_biguint()
                .expect("sum of squares is non-negative");
            let done = v_sq.is_zero();

            let eta = &y0 - signed(&split.odd_part);
            if i_min.is_none() && split.odd_part.is_one() {
                i_min = Some(i);
            }
            rows[i - 1].v_sq = Some(v_sq);
            rows.push(TraceRow {
                w: i,
                x,
                y: split.odd_part,
                u: split.exponent,
                eta,
                v_sq: None,
            });
            if done {
                terminated = true;
                break;
            }
        }

        AcceleratedTrace {
            input: n.clone(),
            rows,
            i_min,
            terminated,
        }
    }

    /// Rebuilds a trace from its rows. `terminated` is recovered from the
    /// zero distance on the second-to-last row.
    pub fn from_rows(rows: Vec<TraceRow>) -> Result<Self> {
        let input = rows
            .first()
            .map(|r| r.x.clone())
            .ok_or(Error::TooShort { needed: 1, got: 0 })?;
        let i_min = rows.iter().position(|r| r.y.is_one());
        let terminated = rows.len() >= 2
            && rows[rows.len() - 2]
                .v_sq
                .as_ref()
                .is_some_and(|v| v.is_zero());
        Ok(AcceleratedTrace {
            input,
            rows,
            i_min,
            terminated,
        })
    }

    /// `x_{i+1}` for the last row, which is not materialised as a row.
    pub fn lookahead(&self) -> Natural {
        collatz_step(&self.rows.last().expect("trace has a row").y)
    }
}

/// Runs the accelerated iteration to its fixed point. Exhausting
/// `max_iters` first is reported as undecided.
pub fn accelerated_trace(n: &Natural, max_iters: u64) -> Result<AcceleratedTrace> {
    let t = AcceleratedTrace::run(n, max_iters);
    if !t.terminated {
        return Err(Error::BudgetExhausted { budget: max_iters });
    }
    Ok(t)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EtaReport {
    pub checked: usize,
    /// Rows where `eta_i != y_0 - y_i`.
    pub eta_violations: Vec<usize>,
    /// Rows where `x_{i+1} != x_1 - 3 eta_i`.
    pub family_violations: Vec<usize>,
}

impl EtaReport {
    pub fn passed(&self) -> bool {
        self.eta_violations.is_empty() && self.family_violations.is_empty()
    }
}

/// Checks `eta_i = y_0 - y_i` on every row and `x_{i+1} = x_1 - 3 eta_i`
/// wherever `x_{i+1}` is a row of the trace.
pub fn verify_eta_relation(t: &AcceleratedTrace) -> Result<EtaReport> {
    if t.rows.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: t.rows.len(),
        });
    }
    let y0 = signed(&t.rows[0].y);
    let x1 = signed(&t.rows[1].x);
    let mut report = EtaReport::default();
    for (i, row) in t.rows.iter().enumerate() {
        report.checked += 1;
        if row.eta != &y0 - signed(&row.y) {
            report.eta_violations.push(i);
        }
        if let Some(next) = t.rows.get(i + 1) {
            if signed(&next.x) != &x1 - &row.eta * 3 {
                report.family_violations.push(i);
            }
        }
    }
    Ok(report)
}

/// `i_min + sum_{i <= i_min} u_i + 1`: the number of distinct values in the
/// classical trajectory.
pub fn cardinality_formula(t: &AcceleratedTrace) -> Result<u64> {
    let i_min = t.i_min.ok_or(Error::NeverReachedOne)?;
    let halvings: u64 = t.rows[..=i_min].iter().map(|r| r.u).sum();
    Ok(i_min as u64 + halvings + 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub n: Natural,
    pub i_min: usize,
    pub formula: u64,
    pub stopping_time: u64,
    pub set_cardinality: usize,
    /// Odd values of the classical walk equal `y_0, ..., y_{i_min}` in order.
    pub odd_values_match: bool,
    /// Halving steps of the classical walk equal `sum u_i`.
    pub halvings_match: bool,
}

impl CrossCheck {
    pub fn passed(&self) -> bool {
        self.formula == self.stopping_time + 1
            && self.set_cardinality as u64 == self.formula
            && self.odd_values_match
            && self.halvings_match
    }
}

/// Compares the accelerated trace of `n` against the brute-force classical
/// trajectory. Budget exhaustion on either side is returned as an error.
pub fn cross_check(n: &Natural, max_budget: u64) -> Result<CrossCheck> {
    let trace = accelerated_trace(n, max_budget)?;
    let formula = cardinality_formula(&trace)?;
    let i_min = trace.i_min.ok_or(Error::NeverReachedOne)?;

    let classical = classical_trajectory(n, max_budget, true)?;
    let stopping_time = classical.steps() as u64;
    let mut distinct: Vec<&Natural> = classical.values.iter().collect();
    distinct.sort_unstable();
    distinct.dedup();

    let odd_values_match = classical
        .values
        .iter()
        .filter(|v| v.is_odd())
        .eq(trace.rows[..=i_min].iter().map(|r| &r.y));
    let halvings = classical.values[..classical.values.len() - 1]
        .iter()
        .filter(|v| v.is_even())
        .count() as u64;
    let halvings_match = halvings == trace.rows[..=i_min].iter().map(|r| r.u).sum::<u64>();

    Ok(CrossCheck {
        n: n.clone(),
        i_min,
        formula,
        stopping_time,
        set_cardinality: distinct.len(),
        odd_values_match,
        halvings_match,
    })
}
