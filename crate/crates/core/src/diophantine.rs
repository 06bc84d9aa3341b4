//! Linear Diophantine equations `a x + b y = c` over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::accelerated::{accelerated_trace, verify_eta_relation, EtaReport, DEFAULT_MAX_ITERS};
use crate::error::{Error, Result};
use crate::natural::{collatz_step, Natural};

/// The solution family `x = s + eta * step.0`, `y = t + eta * step.1`
/// where `step = (b/g, -a/g)` and `g = gcd(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiophantineSolution<T = BigInt> {
    pub gcd: T,
    pub particular: (T, T),
    pub step: (T, T),
}

impl<T: Integer + Signed + Clone> DiophantineSolution<T> {
    pub fn point(&self, eta: &T) -> (T, T) {
        (
            self.particular.0.clone() + eta.clone() * self.step.0.clone(),
            self.particular.1.clone() + eta.clone() * self.step.1.clone(),
        )
    }

    /// Whether `(x, y)` belongs to the family.
    pub fn contains(&self, x: &T, y: &T) -> bool {
        let dx = x.clone() - self.particular.0.clone();
        let dy = y.clone() - self.particular.1.clone();
        // step is never (0, 0) since (a, b) != (0, 0)
        let eta = if !self.step.0.is_zero() {
            if !dx.is_multiple_of(&self.step.0) {
                return false;
            }
            dx / self.step.0.clone()
        } else {
            if !dx.is_zero() || !dy.is_multiple_of(&self.step.1) {
                return false;
            }
            dy.clone() / self.step.1.clone()
        };
        self.point(&eta) == (x.clone(), y.clone())
    }
}

/// Extended Euclid: returns `(g, s, t)` with `a s + b t = g` and `g >= 0`.
pub fn extended_gcd<T: Integer + Signed + Clone>(a: &T, b: &T) -> (T, T, T) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = r0 - q.clone() * r1.clone();
        let s2 = s0 - q.clone() * s1.clone();
        let t2 = t0 - q * t1.clone();
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Solves `a x + b y = c`. Returns `None` when `gcd(a, b)` does not divide `c`.
pub fn solve_linear_diophantine<T: Integer + Signed + Clone>(
    a: &T,
    b: &T,
    c: &T,
) -> Result<Option<DiophantineSolution<T>>> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::DegenerateEquation);
    }
    let (g, s, t) = extended_gcd(a, b);
    if !c.is_multiple_of(&g) {
        return Ok(None);
    }
    let scale = c.clone() / g.clone();
    Ok(Some(DiophantineSolution {
        particular: (s * scale.clone(), t * scale),
        step: (b.clone() / g.clone(), -(a.clone() / g.clone())),
        gcd: g,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvabilityReport {
    pub y0: Natural,
    pub x: Natural,
    /// `(a, b, c)` of the equation `(x, y0)` was checked against.
    pub equation: (i64, i64, i64),
    pub satisfies_equation: bool,
    /// The canonical solution family of the equation contains `(x, y0)`.
    pub in_family: bool,
    /// For odd `y0`, the eta relations of the accelerated trace of `y0`.
    pub eta: Option<EtaReport>,
}

impl SolvabilityReport {
    pub fn passed(&self) -> bool {
        self.satisfies_equation && self.in_family && self.eta.as_ref().is_none_or(|r| r.passed())
    }
}

/// Checks that `x = C(y0)` is a point of the linear equation it induces:
/// `x - 3y = 1` for odd `y0` and `2x - y = 0` for even `y0`.
pub fn verify_collatz_solvability(y0: &Natural) -> Result<SolvabilityReport> {
    let x = collatz_step(y0);
    let xs = BigInt::from(x.as_biguint().clone());
    let ys = BigInt::from(y0.as_biguint().clone());
    let equation = if y0.is_odd() { (1, -3, 1) } else { (2, -1, 0) };
    let (a, b, c) = (
        BigInt::from(equation.0),
        BigInt::from(equation.1),
        BigInt::from(equation.2),
    );
    let satisfies_equation = &a * &xs + &b * &ys == c;
    let family = solve_linear_diophantine(&a, &b, &c)?.expect("gcd is 1");
    let in_family = family.contains(&xs, &ys);

    // x_1 = C(y_0) anchors the family x = x_1 - 3 eta, y = y_0 - eta
    let eta = if y0.is_odd() {
        let trace = accelerated_trace(y0, DEFAULT_MAX_ITERS)?;
        debug_assert!(trace.rows[1].x == x && family.gcd.is_one());
        Some(verify_eta_relation(&trace)?)
    } else {
        None
    };

    Ok(SolvabilityReport {
        y0: y0.clone(),
        x,
        equation,
        satisfies_equation,
        in_family,
        eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn nat(v: u64) -> Natural {
        Natural::from_u64(v).unwrap()
    }

    /// Searches a box of candidate x values for an integer solution.
    fn brute_force_solvable(a: i64, b: i64, c: i64, bound: i64) -> bool {
        (-bound..=bound).any(|x| {
            let rest = c - a * x;
            if b == 0 {
                rest == 0
            } else {
                rest % b == 0
            }
        })
    }

    #[test]
    fn collatz_equations() {
        let s = solve_linear_diophantine(&big(1), &big(-3), &big(1)).unwrap().unwrap();
        assert_eq!(s.gcd, big(1));
        assert!(s.contains(&big(4), &big(1)));
        assert!(s.contains(&big(76), &big(25)));
        assert!(!s.contains(&big(5), &big(1)));

        let s = solve_linear_diophantine(&big(2), &big(-1), &big(0)).unwrap();
        assert!(s.is_some());

        assert_eq!(solve_linear_diophantine(&big(2), &big(4), &big(3)), Ok(None));
        assert_eq!(
            solve_linear_diophantine(&big(0), &big(0), &big(3)),
            Err(Error::DegenerateEquation)
        );
    }

    #[test]
    fn gcd_sign_normalised() {
        assert_eq!(extended_gcd(&-12i64, &18).0, 6);
        assert_eq!(extended_gcd(&0i64, &-7).0, 7);
        let (g, s, t) = extended_gcd(&-4i64, &-6);
        assert_eq!(g, 2);
        assert_eq!(-4 * s - 6 * t, 2);
    }

    #[test]
    fn one_zero_coefficient() {
        let s = solve_linear_diophantine(&0i64, &5, &15).unwrap().unwrap();
        for eta in -5..=5 {
            let (x, y) = s.point(&eta);
            assert_eq!(5 * y, 15, "x = {x}");
        }
        assert!(s.contains(&17, &3));
        assert_eq!(solve_linear_diophantine(&0i64, &5, &7), Ok(None));
    }

    #[test]
    fn solvability_reports() {
        let r = verify_collatz_solvability(&nat(25)).unwrap();
        assert_eq!(r.x, nat(76));
        assert!(r.passed());
        assert!(r.eta.unwrap().passed());

        let r = verify_collatz_solvability(&nat(106)).unwrap();
        assert_eq!(r.x, nat(53));
        assert_eq!(r.equation, (2, -1, 0));
        assert!(r.passed());

        let r = verify_collatz_solvability(&nat(1)).unwrap();
        assert_eq!(r.x, nat(4));
        assert!(r.passed());
    }

    #[test]
    fn matches_brute_force_on_small_box() {
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                if a == 0 && b == 0 {
                    continue;
                }
                for c in -12i64..=12 {
                    let solved = solve_linear_diophantine(&a, &b, &c).unwrap();
                    assert_eq!(solved.is_some(), brute_force_solvable(a, b, c, 200), "{a} {b} {c}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn family_points_satisfy(a in -1000i64..=1000, b in -1000i64..=1000, c in -1000i64..=1000) {
            prop_assume!(a != 0 || b != 0);
            let solved = solve_linear_diophantine(&big(a), &big(b), &big(c)).unwrap();
            let g = num_integer::gcd(a, b);
            prop_assert_eq!(solved.is_some(), c % g == 0);
            if let Some(s) = solved {
                for eta in -10..=10 {
                    let (x, y) = s.point(&big(eta));
                    prop_assert_eq!(big(a) * &x + big(b) * &y, big(c));
                    prop_assert!(s.contains(&x, &y));
                }
            }
        }
    }
}
