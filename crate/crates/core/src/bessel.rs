//! Bessel functions J₀, J₁ of real nonnegative argument and the positive
//! zeros of J₀.
//!
//! Three regimes are used:
//!
//! * `x < 4`: the ascending power series, whose largest term stays below 4
//!   so cancellation costs at most a couple of ulps;
//! * `4 ≤ x < 25`: Miller's backward recurrence normalized with
//!   `J₀ + 2 Σ J₂ₖ = 1`;
//! * `x ≥ 25`: Hankel's asymptotic expansion, truncated at its smallest term
//!   (below `e^{-2x} < 1e-21` there).
//!
//! Absolute error is below `1e-14` on `[0, 1e4]`.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const SERIES_MAX: f64 = 4.0;
const ASYMPTOTIC_MIN: f64 = 25.0;

/// `J_order(x)` for `order ∈ {0, 1}` and `x ≥ 0`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be finite and nonnegative, got {x}")));
    }
    match order {
        0 => Ok(j0_j1(x).0),
        1 => Ok(j0_j1(x).1),
        _ => Err(Error::Domain(format!("unsupported Bessel order {order} (expected 0 or 1)"))),
    }
}

/// `(J₀(x), J₁(x))` for `x ≥ 0`. No argument checks.
pub fn j0_j1(x: f64) -> (f64, f64) {
    if x < SERIES_MAX {
        series(x)
    } else if x < ASYMPTOTIC_MIN {
        miller(x)
    } else {
        hankel(x)
    }
}

#[inline]
pub fn j0(x: f64) -> f64 {
    j0_j1(x).0
}

#[inline]
pub fn j1(x: f64) -> f64 {
    j0_j1(x).1
}

fn series(x: f64) -> (f64, f64) {
    let q = -0.25 * x * x;
    // J0: sum q^k / (k!)^2 ; J1: (x/2) sum q^k / (k! (k+1)!)
    let mut t0 = 1.0;
    let mut s0 = 1.0;
    let mut t1 = 0.5 * x;
    let mut s1 = t1;
    for k in 1..40 {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        s0 += t0;
        s1 += t1;
        if t0.abs() < 1e-18 && t1.abs() < 1e-18 {
            break;
        }
    }
    (s0, s1)
}

fn miller(x: f64) -> (f64, f64) {
    // Start well above x so that J_start(x) is negligible.
    let start = {
        let n = (1.5 * x + 30.0).ceil() as usize;
        n + (n & 1)
    };
    let two_over_x = 2.0 / x;
    let mut next = 0.0; // j_{k+1}
    let mut cur = 1e-30; // j_k
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        let prev = k as f64 * two_over_x * cur - next; // j_{k-1}
        next = cur;
        cur = prev;
        // cur now holds j_{k-1}
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if k - 1 == 1 {
            j1 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += cur;
    (cur / norm, j1 / norm)
}

/// Hankel expansion `P(ν, x)`, `Q(ν, x)` with `μ = 4ν²`.
fn hankel_pq(mu: f64, x: f64) -> (f64, f64) {
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * eight_x);
        let mag = term.abs();
        if mag > last || mag < 1e-22 {
            break;
        }
        last = mag;
        // a_k / x^k enters P for even k and Q for odd k, alternating in sign.
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    (p, q)
}

fn hankel(x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    // cos(x - π/4), sin(x - π/4), cos(x - 3π/4), sin(x - 3π/4) without
    // forming the shifted argument.
    let c0 = (c + s) * FRAC_1_SQRT_2;
    let s0 = (s - c) * FRAC_1_SQRT_2;
    let c1 = (s - c) * FRAC_1_SQRT_2;
    let s1 = -(s + c) * FRAC_1_SQRT_2;
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(4.0, x);
    (amp * (p0 * c0 - q0 * s0), amp * (p1 * c1 - q1 * s1))
}

const ZERO_MAX_ITER: usize = 50;

/// `λ_n`, the `n`-th positive zero of `J₀`, by Newton's method from
/// `(n − 1/4)π`.
pub fn bessel_zero(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("zero index starts at 1".into()));
    }
    let mut x = (n as f64 - 0.25) * PI;
    let mut residual = f64::INFINITY;
    for _ in 0..ZERO_MAX_ITER {
        let (f, g) = j0_j1(x);
        residual = f.abs();
        // J0' = -J1
        let step = f / g;
        x += step;
        if step.abs() <= 4.0 * f64::EPSILON * x {
            let r = j0(x).abs();
            if r <= 1e-13 {
                return Ok(x);
            }
            residual = r;
        }
    }
    Err(Error::NonConvergence {
        what: format!("Newton iteration for zero #{n} of J0"),
        iterations: ZERO_MAX_ITER,
        residual,
    })
}

/// First `count` zeros of J₀.
pub fn bessel_zeros(count: usize) -> Result<Vec<f64>> {
    (1..=count).map(bessel_zero).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Independent oracle: J0 power series evaluated with compensated
    // summation, and bisection on its sign change.
    fn j0_series_oracle(x: f64) -> f64 {
        let q = -0.25 * x * x;
        let (mut sum, mut comp, mut term) = (1.0f64, 0.0f64, 1.0f64);
        for k in 1..80 {
            term *= q / ((k * k) as f64);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    fn bisect(mut a: f64, mut b: f64) -> f64 {
        let fa = j0_series_oracle(a);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (j0_series_oracle(m) > 0.0) == (fa > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_j(0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(2, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(0, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_zero(0), Err(Error::Domain(_))));
    }

    #[test]
    fn first_zeros_match_bisection_oracle() {
        let z1 = bisect(2.0, 3.0);
        let z2 = bisect(5.0, 6.0);
        assert_abs_diff_eq!(z1, 2.404825557695773, epsilon = 1e-14);
        assert_abs_diff_eq!(z2, 5.520078110286311, epsilon = 1e-13);
        assert_abs_diff_eq!(bessel_zero(1).unwrap(), z1, epsilon = 1e-14);
        assert_abs_diff_eq!(bessel_zero(2).unwrap(), z2, epsilon = 1e-13);
        assert_abs_diff_eq!(bessel_j(0, 2.404825557695773).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn regime_boundaries_are_continuous() {
        let pairs = [(series(SERIES_MAX), miller(SERIES_MAX)), (miller(ASYMPTOTIC_MIN), hankel(ASYMPTOTIC_MIN))];
        for (below, above) in pairs {
            assert_abs_diff_eq!(below.0, above.0, epsilon = 1e-14);
            assert_abs_diff_eq!(below.1, above.1, epsilon = 1e-14);
        }
    }

    #[test]
    fn series_agrees_with_oracle_below_crossover() {
        for i in 0..=400 {
            let x = i as f64 * 0.01;
            assert_abs_diff_eq!(j0(x), j0_series_oracle(x), epsilon = 1e-15);
        }
    }

    #[test]
    fn zeros_interlace_with_j1_zeros() {
        // J1 vanishes exactly once between consecutive zeros of J0.
        let zeros = bessel_zeros(60).unwrap();
        for w in zeros.windows(2) {
            assert!(w[1] > w[0]);
            let (a, b) = (j1(w[0]), j1(w[1]));
            assert!(a * b < 0.0, "J1 does not change sign on [{}, {}]", w[0], w[1]);
        }
    }

    #[test]
    fn large_index_zero_follows_asymptote() {
        let z = bessel_zero(100).unwrap();
        assert!((z - (100.0 * PI - PI / 4.0)).abs() < 1e-3);
    }
}
