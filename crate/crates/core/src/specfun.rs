//! Bessel functions of the first kind and the two coupling series that
//! parameterize the frequency beam splitter.
//!
//! Everything here is evaluated from the ascending power series
//! `J_n(x) = Σ_m (-1)^m (x/2)^(n+2m) / (m! (n+m)!)`, which is accurate to
//! well below `1e-12` on the committed domain `|x| ≤ 10`.

use crate::error::{Error, Result};
use crate::scalar::{as_f64, count, lit, Real};

/// Largest argument magnitude accepted by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 10.0;

/// Number of series terms summed at most.
const MAX_TERMS: usize = 60;

/// Highest order used when summing the coupling series.
const MAX_ORDER: i32 = 60;

/// Minimum number of terms of the `c2` series that are always summed.
const MIN_COUPLING_TERMS: i32 = 8;

/// Truncation threshold for series tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTolerance<T> {
    eps: T,
}

impl<T: Real> SeriesTolerance<T> {
    pub fn new(eps: T) -> Result<Self> {
        if eps > T::zero() && eps <= lit(1e-6) {
            Ok(Self { eps })
        } else {
            Err(Error::invalid(format!(
                "series tolerance must lie in (0, 1e-6], got {eps}"
            )))
        }
    }

    pub fn eps(&self) -> T {
        self.eps
    }
}

impl<T: Real> Default for SeriesTolerance<T> {
    fn default() -> Self {
        Self { eps: lit(1e-14) }
    }
}

/// Bessel function of the first kind `J_n(x)` for integer order.
///
/// Negative orders are folded with `J_{-n}(x) = (-1)^n J_n(x)`.
pub fn bessel_j<T: Real>(n: i32, x: T) -> Result<T> {
    if !(x.abs() <= lit(MAX_ARGUMENT)) {
        return Err(Error::Domain {
            what: "bessel argument",
            value: as_f64(x),
            allowed: "[-10, 10]",
        });
    }
    let order = n.unsigned_abs() as usize;
    let value = ascending_series(order, x);
    Ok(if n < 0 && order % 2 == 1 {
        -value
    } else {
        value
    })
}

fn ascending_series<T: Real>(order: usize, x: T) -> T {
    let half = x / lit(2.0);
    // (x/2)^n / n! built incrementally so large orders underflow instead of overflowing.
    let mut term = T::one();
    for k in 1..=order {
        term = term * half / count(k);
    }
    if term == T::zero() {
        return T::zero();
    }

    let step = -(half * half);
    let mut sum = term;
    let mut compensation = T::zero();
    for m in 1..MAX_TERMS {
        term = term * step / (count::<T>(m) * count(m + order));
        // Neumaier summation.
        let t = sum + term;
        if sum.abs() >= term.abs() {
            compensation = compensation + ((sum - t) + term);
        } else {
            compensation = compensation + ((term - t) + sum);
        }
        sum = t;
        if term.abs() <= T::epsilon() * sum.abs() * lit(0.5) {
            break;
        }
    }
    sum + compensation
}

fn check_theta<T: Real>(theta: T) -> Result<()> {
    if theta >= T::zero() && theta <= lit(MAX_ARGUMENT) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "modulation depth theta",
            value: as_f64(theta),
            allowed: "[0, 10]",
        })
    }
}

/// `c1 = J_0(theta)^2`, the diagonal coupling of the beam splitter.
pub fn coupling_c1<T: Real>(theta: T) -> Result<T> {
    check_theta(theta)?;
    let j0 = bessel_j(0, theta)?;
    Ok(j0 * j0)
}

/// `c2 = Σ_{k≥1} J_k(theta) J_{k-1}(theta)`, the off-diagonal coupling.
///
/// The sum stops at the first term whose magnitude drops below `tol.eps()`,
/// but never before eight terms have been added.
pub fn coupling_c2<T: Real>(theta: T, tol: SeriesTolerance<T>) -> Result<T> {
    check_theta(theta)?;
    let mut previous = bessel_j(0, theta)?;
    let mut sum = T::zero();
    for k in 1..=MAX_ORDER {
        let current = bessel_j(k, theta)?;
        let term = current * previous;
        sum = sum + term;
        if k >= MIN_COUPLING_TERMS && term.abs() < tol.eps() {
            break;
        }
        previous = current;
    }
    Ok(sum)
}

/// Both couplings at the default series tolerance.
pub fn couplings<T: Real>(theta: T) -> Result<(T, T)> {
    Ok((
        coupling_c1(theta)?,
        coupling_c2(theta, SeriesTolerance::default())?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> SeriesTolerance<f64> {
        SeriesTolerance::new(1e-14).unwrap()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(-3, 0.0).unwrap(), 0.0);
        assert_eq!(coupling_c1(0.0).unwrap(), 1.0);
        assert_eq!(coupling_c2(0.0, tol()).unwrap(), 0.0);
    }

    #[test]
    fn negative_order_parity() {
        for n in 1..8 {
            let pos: f64 = bessel_j(n, 0.8169).unwrap();
            let neg: f64 = bessel_j(-n, 0.8169).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(neg, sign * pos);
        }
    }

    #[test]
    fn domain_guard() {
        assert!(matches!(bessel_j(0, 10.5), Err(Error::Domain { .. })));
        assert!(matches!(bessel_j(2, f64::NAN), Err(Error::Domain { .. })));
        assert!(bessel_j(0, -10.0_f64).is_ok());
        assert!(coupling_c1(-0.1).is_err());
        assert!(coupling_c2(11.0, tol()).is_err());
    }

    #[test]
    fn tolerance_bounds() {
        assert!(SeriesTolerance::new(0.0).is_err());
        assert!(SeriesTolerance::new(1e-5).is_err());
        assert!(SeriesTolerance::new(1e-6).is_ok());
    }

    #[test]
    fn first_zero_of_j0() {
        // Zero located by bisection on the ascending series in f64.
        let c1 = coupling_c1(2.404_825_557_695_773).unwrap();
        assert!(c1 <= 1e-8, "{c1}");
    }

    #[test]
    fn small_argument_c2_is_dominated_by_first_term() {
        let c2 = coupling_c2(0.1, tol()).unwrap();
        let first = bessel_j(1, 0.1).unwrap() * bessel_j(0, 0.1).unwrap();
        assert!((c2 - 0.04987).abs() < 1e-4);
        assert!((c2 - first).abs() < 1e-4);
    }

    #[test]
    fn works_in_single_precision() {
        let j0: f32 = bessel_j(0, 0.8169f32).unwrap();
        assert!((j0 - 0.84001).abs() < 1e-4);
    }

    #[test]
    fn tightening_tolerance_moves_c2_within_tail_bound() {
        for &theta in &[0.2, 0.8169, 2.0, 5.0, 9.5] {
            let loose = SeriesTolerance::new(1e-6).unwrap();
            let a = coupling_c2(theta, loose).unwrap();
            let b = coupling_c2(theta, tol()).unwrap();
            assert!((a - b).abs() <= 1e-6 * 10.0, "theta={theta}");
        }
    }
}
