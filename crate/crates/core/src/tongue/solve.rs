use std::collections::HashMap;

use thiserror::Error;

use super::family::{FamilyError, FamilySpec};
use super::word::{boundary_words, Word};
use crate::farey::{ancestry, Fraction, Rational};
use crate::linear::region_boundaries;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions<T> {
    /// Bound on the error of each endpoint and on its residual.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-10),
            max_iter: 100_000,
        }
    }
}

impl<T: Real> SolveOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TongueError {
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("{rational}: empty bracket ({lo}, {hi})")]
    EmptyBracket { rational: Rational, lo: f64, hi: f64 },
    #[error("{rational}: {side} endpoint not found: {reason}")]
    NotFound {
        rational: Rational,
        side: &'static str,
        reason: String,
    },
    #[error("{rational}: maps overlap at c = {c}")]
    Overlap { rational: Rational, c: f64 },
    #[error("{rational}: endpoints out of order, c_left = {c_left} >= c_right = {c_right}")]
    Inverted { rational: Rational, c_left: f64, c_right: f64 },
    #[error("{rational}: parent {parent} has no solved interval")]
    MissingParent { rational: Rational, parent: Fraction },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

impl TongueError {
    /// Failures that mean "no interval in this bracket" rather than a broken
    /// family.
    pub fn is_not_found(&self) -> bool {
        matches!(self, TongueError::EmptyBracket { .. } | TongueError::NotFound { .. } | TongueError::MissingParent { .. })
    }
}

/// The parameter interval on which `T_c` has rotation number `l/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TongueInterval<T> {
    pub rational: Rational,
    pub c_left: T,
    pub c_right: T,
    pub bracket: (T, T),
    /// Iterations spent on both endpoints.
    pub iterations: usize,
    /// `|W(c) − c|` at each endpoint.
    pub residuals: (T, T),
}

impl<T: Real> TongueInterval<T> {
    pub fn width(&self) -> T {
        self.c_right - self.c_left
    }

    pub fn midpoint(&self) -> T {
        self.c_left + self.width() / T::lit(2.0)
    }

    pub fn contains(&self, c: T) -> bool {
        self.c_left < c && c < self.c_right
    }
}

struct Endpoint<T> {
    c: T,
    iterations: usize,
    residual: T,
}

fn word_at<T: Real>(fam: &FamilySpec<T>, word: &Word, c: T) -> T {
    word.apply(c, |x| fam.upper(c, x), |x| fam.lower(c, x))
}

/// Banach iteration for a fixed word map, started at the bracket midpoint.
fn iterate_fixed<T: Real>(
    fam: &FamilySpec<T>,
    r: Rational,
    side: &'static str,
    word: &Word,
    bracket: (T, T),
    opts: &SolveOptions<T>,
) -> Result<Endpoint<T>, TongueError> {
    let not_found = |reason: String| TongueError::NotFound { rational: r, side, reason };
    let kw = fam.kappa.powi(r.period() as i32);
    let stop = opts.tol * (T::one() - kw) / kw;
    let mut c = bracket.0 + (bracket.1 - bracket.0) / T::lit(2.0);
    for it in 1..=opts.max_iter {
        if !(fam.overlap_margin(c) > T::zero()) {
            return Err(TongueError::Overlap { rational: r, c: c.approx() });
        }
        let next = word_at(fam, word, c);
        if !next.is_finite() {
            return Err(not_found(format!("iterate left the reals at c = {}", c.approx())));
        }
        let delta = (next - c).abs();
        c = next;
        if delta <= stop {
            if !(bracket.0 <= c && c <= bracket.1) {
                return Err(not_found(format!("fixed point {} lies outside the bracket", c.approx())));
            }
            let residual = (word_at(fam, word, c) - c).abs();
            return Ok(Endpoint { c, iterations: it, residual });
        }
    }
    Err(not_found(format!("no convergence in {} iterations", opts.max_iter)))
}

/// Root of `φ(c) = W_c(c) − c` on the bracket: fixed-point steps while they
/// stay inside the sign-change bracket, bisection otherwise.
fn safeguarded_root<T: Real>(
    fam: &FamilySpec<T>,
    r: Rational,
    side: &'static str,
    word: &Word,
    bracket: (T, T),
    opts: &SolveOptions<T>,
) -> Result<Endpoint<T>, TongueError> {
    let not_found = |reason: String| TongueError::NotFound { rational: r, side, reason };
    let phi = |c: T| word_at(fam, word, c) - c;
    let two = T::lit(2.0);
    let tol = opts.tol;
    let (mut a, mut b) = bracket;
    let (pa, pb) = (phi(a), phi(b));
    if !(pa > T::zero() && pb < T::zero()) {
        return Err(not_found(format!(
            "no sign change of W(c) - c on the bracket ({:e} at {}, {:e} at {})",
            pa.approx(),
            a.approx(),
            pb.approx(),
            b.approx()
        )));
    }
    let mut c = a + (b - a) / two;
    for it in 1..=opts.max_iter {
        if !(fam.overlap_margin(c) > T::zero()) {
            return Err(TongueError::Overlap { rational: r, c: c.approx() });
        }
        let p = phi(c);
        if !p.is_finite() {
            return Err(not_found(format!("W(c) is not finite at c = {}", c.approx())));
        }
        if p > T::zero() {
            a = c;
        } else if p < T::zero() {
            b = c;
        }
        if p.abs() <= tol {
            // the root lies within tol of c when φ changes sign across [c − tol, c + tol]
            let lo_ok = a >= c - tol || phi(c - tol) >= T::zero();
            let hi_ok = b <= c + tol || phi(c + tol) <= T::zero();
            if lo_ok && hi_ok {
                return Ok(Endpoint {
                    c,
                    iterations: it,
                    residual: p.abs(),
                });
            }
        }
        let candidate = c + p;
        let mid = a + (b - a) / two;
        let next = if a < candidate && candidate < b { candidate } else { mid };
        // a fixed-point step that barely moves is not shrinking the bracket
        c = if next == c { mid } else { next };
        if !(a < c && c < b) {
            let residual = phi(c).abs();
            return Ok(Endpoint { c, iterations: it, residual });
        }
    }
    Err(not_found(format!("no convergence in {} iterations", opts.max_iter)))
}

/// Solves both endpoint equations of the `l/n` tongue inside `bracket`.
pub fn solve_tongue<T: Real>(
    fam: &FamilySpec<T>,
    r: Rational,
    bracket: (T, T),
    opts: &SolveOptions<T>,
) -> Result<TongueInterval<T>, TongueError> {
    if !(opts.tol > T::zero()) {
        return Err(TongueError::BadTolerance(opts.tol.approx()));
    }
    let lo = bracket.0.max(fam.range.0);
    let hi = bracket.1.min(fam.range.1);
    if !(lo < hi) {
        return Err(TongueError::EmptyBracket {
            rational: r,
            lo: bracket.0.approx(),
            hi: bracket.1.approx(),
        });
    }
    let (left_word, right_word) = boundary_words(r);
    let solve = |side, word: &Word| {
        if fam.is_from_g() {
            iterate_fixed(fam, r, side, word, (lo, hi), opts)
        } else {
            safeguarded_root(fam, r, side, word, (lo, hi), opts)
        }
    };
    let left = solve("left", &left_word)?;
    let right = solve("right", &right_word)?;
    if !(left.c < right.c) {
        return Err(TongueError::Inverted {
            rational: r,
            c_left: left.c.approx(),
            c_right: right.c.approx(),
        });
    }
    Ok(TongueInterval {
        rational: r,
        c_left: left.c,
        c_right: right.c,
        bracket: (lo, hi),
        iterations: left.iterations + right.iterations,
        residuals: (left.residual, right.residual),
    })
}

/// Bracket for the mediant of `lower < upper`: from the right end of the
/// upper parent's interval to the left end of the lower parent's, widened by
/// the parents' own error `tol`. The boundary fractions `1/1` and `0/1`
/// stand for the ends of the range.
pub(crate) fn mediant_bracket<T: Real>(
    fam: &FamilySpec<T>,
    r: Rational,
    lower: Fraction,
    upper: Fraction,
    solved: &HashMap<Rational, TongueInterval<T>>,
    tol: T,
) -> Result<(T, T), TongueError> {
    let end = |f: Fraction, pick: fn(&TongueInterval<T>) -> T, boundary: T| match f.rational() {
        None => Ok(boundary),
        Some(q) => solved
            .get(&q)
            .map(pick)
            .ok_or(TongueError::MissingParent { rational: r, parent: f }),
    };
    // a mediant endpoint can sit closer to its parent's than the parent is known
    let lo = end(upper, |t| t.c_right, fam.range.0 + tol)? - tol;
    let hi = end(lower, |t| t.c_left, fam.range.1 - tol)? + tol;
    Ok((lo, hi))
}

/// Solves `r` after solving each Stern–Brocot ancestor, so every tongue is
/// searched only between its parents.
pub fn solve_in_tree<T: Real>(fam: &FamilySpec<T>, r: Rational, opts: &SolveOptions<T>) -> Result<TongueInterval<T>, TongueError> {
    let (_, _, mut path) = ancestry(r);
    path.push(r);
    let mut solved = HashMap::new();
    let mut last = None;
    for q in path {
        let (lower, upper, _) = ancestry(q);
        let bracket = mediant_bracket(fam, q, lower, upper, &solved, opts.tol)?;
        let t = solve_tongue(fam, q, bracket, opts)?;
        solved.insert(q, t);
        last = Some(t);
    }
    Ok(last.expect("path ends at r"))
}

/// Largest deviation between the solved interval of the linear family
/// `f(x) = αx` and the closed form `(1 − B)/α` for both tongue boundaries.
pub fn linear_crosscheck(alpha: f64, r: Rational, tol: f64) -> Result<f64, TongueError> {
    let fam = FamilySpec::linear(alpha)?;
    let t = solve_in_tree(&fam, r, &SolveOptions::with_tol(tol))?;
    let b = region_boundaries(r, &alpha).expect("alpha already validated");
    // β = 1 − αc reverses orientation: the upper boundary gives the smaller c
    let expected = ((1.0 - b.upper) / alpha, (1.0 - b.lower) / alpha);
    Ok((t.c_left - expected.0).abs().max((t.c_right - expected.1).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::{detect_period, OrbitOptions};

    fn r(n: u32, l: u32) -> Rational {
        Rational::new(n, l).unwrap()
    }

    fn sine() -> FamilySpec<f64> {
        FamilySpec::sine_from_alpha(2.0 / (4.0 + 2f64.sin())).unwrap()
    }

    #[test]
    fn linear_two_one() {
        let fam = FamilySpec::linear(0.5_f64).unwrap();
        let t = solve_tongue(&fam, r(2, 1), (0.0, 1.0), &SolveOptions::default()).unwrap();
        assert!((t.c_left - 1.0 / 3.0).abs() < 1e-10);
        assert!((t.c_right - 2.0 / 3.0).abs() < 1e-10);
        assert!(t.residuals.0 <= 1e-10 && t.residuals.1 <= 1e-10);
    }

    #[test]
    fn linear_crosscheck_examples() {
        assert!(linear_crosscheck(0.5, r(2, 1), 1e-12).unwrap() <= 1e-8);
        assert!(linear_crosscheck(0.6, r(3, 1), 1e-12).unwrap() <= 1e-8);
        assert!(linear_crosscheck(0.5, r(3, 2), 1e-12).unwrap() <= 1e-8);
        assert!(linear_crosscheck(0.9, r(11, 4), 1e-12).unwrap() <= 1e-8);
    }

    #[test]
    fn sine_two_one() {
        let fam = sine();
        let opts = SolveOptions::default();
        let t = solve_tongue(&fam, r(2, 1), fam.range, &opts).unwrap();
        assert!(t.residuals.0 <= opts.tol && t.residuals.1 <= opts.tol);
        // oracle: c_left = g(g(c) + 1) and c_right = g(g(c)) + 1 by plain iteration
        let g = |x: f64| fam.base(x);
        let (mut cl, mut cr) = (1.0, 1.0);
        for _ in 0..400 {
            cl = g(g(cl) + 1.0);
            cr = g(g(cr)) + 1.0;
        }
        assert!((t.c_left - cl).abs() < 1e-10);
        assert!((t.c_right - cr).abs() < 1e-10);
        let s = detect_period(&fam.map_at(t.midpoint()).unwrap(), t.midpoint(), &OrbitOptions::default()).unwrap();
        assert_eq!(s.rational(), Some(r(2, 1)));
    }

    #[test]
    fn banach_steps_shrink() {
        let fam = sine();
        let (left, _) = boundary_words(r(5, 3));
        let mut c = 1.0;
        let mut prev = f64::INFINITY;
        for _ in 0..30 {
            let next = word_at(&fam, &left, c);
            let d = (next - c).abs();
            assert!(d <= prev);
            prev = d;
            c = next;
        }
    }

    #[test]
    fn degenerate_bracket() {
        let fam = FamilySpec::linear(0.5_f64).unwrap();
        let err = solve_tongue(&fam, r(2, 1), (0.4, 0.4), &SolveOptions::default()).unwrap_err();
        assert!(err.is_not_found());
        let err = solve_tongue(&fam, r(3, 1), (0.1, 0.2), &SolveOptions::default()).unwrap_err();
        assert!(err.is_not_found());
        let err = solve_tongue(&fam, r(2, 1), (0.0, 1.0), &SolveOptions::with_tol(0.0)).unwrap_err();
        assert!(matches!(err, TongueError::BadTolerance(_)));
    }

    #[test]
    fn tree_solution_matches_membership() {
        let fam = FamilySpec::quadratic(0.3_f64).unwrap();
        let t = solve_in_tree(&fam, r(7, 3), &SolveOptions::default()).unwrap();
        let s = detect_period(&fam.map_at(t.midpoint()).unwrap(), 0.0, &OrbitOptions::default()).unwrap();
        assert_eq!(s.rational(), Some(r(7, 3)));
    }

    #[test]
    fn single_precision_solve() {
        let fam = FamilySpec::linear(0.5f32).unwrap();
        let t = solve_tongue(&fam, r(2, 1), (0.0, 1.0), &SolveOptions::with_tol(1e-6)).unwrap();
        assert!((t.c_left - 1.0 / 3.0).abs() < 1e-5);
    }
}
