//! Recovering small rationals from doubles.

use num_rational::Ratio;

/// Default denominator bound for [`reconstruct`].
pub const MAX_DENOMINATOR: i64 = 1_000_000;

/// Best rational approximation of `x` with denominator at most `max_den`,
/// accepted only if it lies within `1e-13 * max(1, |x|)` of `x`.
///
/// Walks the continued-fraction convergents of `x`.
pub fn reconstruct(x: f64, max_den: i64) -> Option<Ratio<i64>> {
    if !x.is_finite() || max_den < 1 || x.abs() > 1e12 {
        return None;
    }
    let tol = 1e-13 * x.abs().max(1.0);
    let (mut h_prev, mut h) = (1i64, x.floor() as i64);
    let (mut k_prev, mut k) = (0i64, 1i64);
    let mut frac = x - x.floor();
    loop {
        if (h as f64 / k as f64 - x).abs() <= tol {
            return Some(Ratio::new(h, k));
        }
        if frac <= 0.0 {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a > max_den as f64 {
            return None;
        }
        let a = a as i64;
        frac = inv - inv.floor();
        let k_next = a.checked_mul(k)?.checked_add(k_prev)?;
        if k_next > max_den {
            return None;
        }
        let h_next = a.checked_mul(h)?.checked_add(h_prev)?;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_ratio(r: &Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
