//! Bracketing root finders shared by the map engine and the tongue solver.

use crate::scalar::Real;

/// Solves `f(x) = target` for increasing `f` on `[lo, hi]` until the bracket
/// is narrower than `tol`. Returns `lo` if `f(lo) >= target` and `hi` if
/// `f(hi) <= target`.
pub fn bisect_increasing<T, F>(f: F, mut lo: T, mut hi: T, target: T, tol: T) -> T
where
    T: Real,
    F: Fn(T) -> T,
{
    if f(lo) >= target {
        return lo;
    }
    if f(hi) <= target {
        return hi;
    }
    let two = T::lit(2.0);
    // f(lo) < target < f(hi)
    while hi - lo > tol {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) / two
}

/// Root of `f` on `[lo, hi]` given `f(lo) > 0 > f(hi)` or the reverse.
/// Returns `None` without a strict sign change.
pub fn bisect_root<T, F>(f: F, lo: T, hi: T, tol: T) -> Option<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let (flo, fhi) = (f(lo), f(hi));
    if flo == T::zero() {
        return Some(lo);
    }
    if fhi == T::zero() {
        return Some(hi);
    }
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return None;
    }
    let sign = flo.signum();
    let g = |x: T| f(x) * sign;
    let (mut lo, mut hi) = (lo, hi);
    let two = T::lit(2.0);
    while (hi - lo).abs() > tol {
        let mid = lo + (hi - lo) / two;
        if mid == lo || mid == hi {
            break;
        }
        let v = g(mid);
        if v == T::zero() {
            return Some(mid);
        }
        if v > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo + (hi - lo) / two)
}
