//! Closed-form theory of the linear contracting map `S(x) = αx + β (mod 1)`.
//!
//! All formulas are polynomial or rational in `α` and `β`, so they are
//! generic over [`Scalar`]: use `f64` for speed and
//! [`num_rational::BigRational`] when an exact answer is wanted.

use std::cmp::Ordering;

use thiserror::Error;

use crate::farey::{CharSeq, Fraction, Rational};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinearError {
    #[error("slope {0} is outside (0, 1)")]
    AlphaOutOfRange(f64),
    #[error("offset {0} is outside (0, 1)")]
    BetaOutOfRange(f64),
    #[error("point {0} is outside [0, 1)")]
    OutOfDomain(f64),
    #[error("(alpha, beta) = ({alpha}, {beta}) is not in the {rational} tongue [{lower}, {upper})")]
    NotInRegion {
        rational: Rational,
        alpha: f64,
        beta: f64,
        lower: f64,
        upper: f64,
    },
    #[error("the {rational} tongue at slope {alpha} is narrower than the scalar type resolves")]
    Unresolved { rational: Rational, alpha: f64 },
}

fn unit_open<T: Scalar>(v: &T) -> bool {
    *v > T::zero() && *v < T::one()
}

/// Parameters `(α, β)` of the linear map, both in `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearParams<T> {
    alpha: T,
    beta: T,
}

impl<T: Scalar> LinearParams<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self, LinearError> {
        if !unit_open(&alpha) {
            return Err(LinearError::AlphaOutOfRange(alpha.approx()));
        }
        if !unit_open(&beta) {
            return Err(LinearError::BetaOutOfRange(beta.approx()));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> &T {
        &self.alpha
    }

    pub fn beta(&self) -> &T {
        &self.beta
    }

    /// `α + β > 1`: the map has a discontinuity inside `[0, 1)`.
    pub fn wraps(&self) -> bool {
        self.alpha.clone() + self.beta.clone() > T::one()
    }

    /// The discontinuity `(1 − β) / α` (beyond 1 when the map does not wrap).
    pub fn cut(&self) -> T {
        (T::one() - self.beta.clone()) / self.alpha.clone()
    }

    /// `β / (1 − α)`, the fixed point of the unwrapped line.
    pub fn line_fixed_point(&self) -> T {
        self.beta.clone() / (T::one() - self.alpha.clone())
    }

    /// One application of the map. An exact hit `αx + β = 1` maps to 0.
    pub fn step(&self, x: &T) -> Result<T, LinearError> {
        if *x < T::zero() || *x >= T::one() {
            return Err(LinearError::OutOfDomain(x.approx()));
        }
        Ok(self.step_unchecked(x))
    }

    pub(crate) fn step_unchecked(&self, x: &T) -> T {
        let y = self.alpha.clone() * x.clone() + self.beta.clone();
        if y >= T::one() {
            y - T::one()
        } else {
            y
        }
    }

    /// The unique preimage of `y` and whether it lies on the wrapping piece
    /// `[cut, 1]`, or `None` when `y` falls in the gap `(S(1), β)`.
    pub fn inverse(&self, y: &T) -> Option<(T, bool)> {
        if *y >= self.beta {
            let x = (y.clone() - self.beta.clone()) / self.alpha.clone();
            (x < self.cut() && x < T::one()).then_some((x, false))
        } else if *y <= self.alpha.clone() + self.beta.clone() - T::one() {
            let x = (y.clone() + T::one() - self.beta.clone()) / self.alpha.clone();
            Some((x, true))
        } else {
            None
        }
    }
}

/// Boundaries `B^L(α) <= β < B^U(α)` of a tongue at a fixed slope.
#[derive(Debug, Clone, PartialEq)]
pub struct TongueRegion<T> {
    pub rational: Rational,
    pub lower: T,
    pub upper: T,
}

impl<T: Scalar> TongueRegion<T> {
    pub fn contains(&self, beta: &T) -> bool {
        self.lower <= *beta && *beta < self.upper
    }

    pub fn midpoint(&self) -> T {
        (self.lower.clone() + self.upper.clone()) / T::int(2)
    }

    pub fn width(&self) -> T {
        self.upper.clone() - self.lower.clone()
    }
}

fn powers<T: Scalar>(alpha: &T, up_to: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(up_to + 1);
    let mut p = T::one();
    for _ in 0..=up_to {
        out.push(p.clone());
        p = p * alpha.clone();
    }
    out
}

fn check_alpha<T: Scalar>(alpha: &T) -> Result<(), LinearError> {
    if unit_open(alpha) {
        Ok(())
    } else {
        Err(LinearError::AlphaOutOfRange(alpha.approx()))
    }
}

fn boundaries_of<T: Scalar>(seq: &CharSeq, alpha: &T) -> (T, T) {
    let n = seq.len();
    let pw = powers(alpha, n);
    let denom = T::one() - pw[n].clone();
    let weighted = (1..n)
        .filter(|&m| seq.at(m as i64))
        .fold(T::zero(), |acc, m| acc + pw[m].clone());
    let base = weighted / denom.clone() + T::one();
    let one_minus = T::one() - alpha.clone();
    let upper = one_minus.clone() * base.clone();
    let shift = (pw[n - 1].clone() - pw[n].clone()) / denom;
    let lower = one_minus * (base - shift);
    (lower, upper)
}

/// Tongue boundaries `(B^L(α), B^U(α))` of `r`.
pub fn region_boundaries<T: Scalar>(r: Rational, alpha: &T) -> Result<TongueRegion<T>, LinearError> {
    check_alpha(alpha)?;
    let (lower, upper) = boundaries_of(&r.char_seq(), alpha);
    if lower >= upper {
        return Err(LinearError::Unresolved {
            rational: r,
            alpha: alpha.approx(),
        });
    }
    Ok(TongueRegion {
        rational: r,
        lower,
        upper,
    })
}

/// Half-open membership `B^L(α) <= β < B^U(α)`, no tolerance.
pub fn region_contains<T: Scalar>(r: Rational, p: &LinearParams<T>) -> bool {
    let (lower, upper) = boundaries_of(&r.char_seq(), &p.alpha);
    lower <= p.beta && p.beta < upper
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// `α + β <= 1`: no discontinuity, every orbit tends to `β / (1 − α)`.
    PeriodOne,
    Tongue(Rational),
    /// No tongue with period up to the search bound contains the parameters.
    NotFound,
}

/// Finds the tongue containing `(α, β)` by Stern–Brocot descent.
pub fn classify<T: Scalar>(p: &LinearParams<T>, max_period: u32) -> Classification {
    if !p.wraps() {
        return Classification::PeriodOne;
    }
    let (mut left, mut right) = (Fraction::ZERO, Fraction::ONE);
    for _ in 0..2 * max_period {
        let m = left.mediant(right);
        if m.den > max_period {
            break;
        }
        let (lower, upper) = boundaries_of(&CharSeq::of(m), &p.alpha);
        if p.beta < lower {
            right = m;
        } else if p.beta >= upper {
            left = m;
        } else {
            return Classification::Tongue(m.rational().expect("interior mediant"));
        }
    }
    Classification::NotFound
}

/// The period-`n` orbit of a map inside the tongue of `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit<T> {
    pub rational: Rational,
    /// `A_0 … A_{n−1}`.
    pub coefficients: Vec<T>,
    /// `x_i = β/(1−α) − A_i`, in orbit order: `S(x_i) = x_{i+1}`.
    pub points: Vec<T>,
}

impl<T: Scalar> PeriodicOrbit<T> {
    pub fn sorted_points(&self) -> Vec<T> {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        pts
    }
}

fn require_member<T: Scalar>(r: Rational, p: &LinearParams<T>) -> Result<(), LinearError> {
    let (lower, upper) = boundaries_of(&r.char_seq(), &p.alpha);
    if lower <= p.beta && p.beta < upper {
        Ok(())
    } else {
        Err(LinearError::NotInRegion {
            rational: r,
            alpha: p.alpha.approx(),
            beta: p.beta.approx(),
            lower: lower.approx(),
            upper: upper.approx(),
        })
    }
}

/// Periodic orbit from the closed-form coefficients
/// `A_i = (1 − αⁿ)⁻¹ Σ_j k_{i−1−j} α^j`.
pub fn periodic_points<T: Scalar>(r: Rational, p: &LinearParams<T>) -> Result<PeriodicOrbit<T>, LinearError> {
    require_member(r, p)?;
    let seq = r.char_seq();
    let n = seq.len() as i64;
    let denom = T::one() - powers(&p.alpha, n as usize)[n as usize].clone();
    let offset = p.line_fixed_point();
    let coefficients: Vec<T> = (0..n)
        .map(|i| {
            let horner = (0..n).rev().fold(T::zero(), |acc, j| {
                let k = if seq.at(i - 1 - j) { T::one() } else { T::zero() };
                acc * p.alpha.clone() + k
            });
            horner / denom.clone()
        })
        .collect();
    let points = coefficients.iter().map(|a| offset.clone() - a.clone()).collect();
    Ok(PeriodicOrbit {
        rational: r,
        coefficients,
        points,
    })
}

/// Backward orbit of zero, `p_i = S^{−i}(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreimageChain<T> {
    pub rational: Rational,
    /// `p_1 … p_{n−1}`, each in `[0, 1]`.
    pub points: Vec<T>,
    /// The formal `i = n` value of the same formula, outside `[0, 1]`.
    pub terminal: T,
}

fn chain_point<T: Scalar>(seq: &CharSeq, p: &LinearParams<T>, i: usize) -> T {
    let n = seq.len() as i64;
    (1..=i as i64).rev().fold(T::zero(), |acc, m| {
        let k = if seq.at(n - i as i64 + m - 1) { T::one() } else { T::zero() };
        (acc + k - p.beta.clone()) / p.alpha.clone()
    })
}

/// `S^{−i}(0) = Σ_{m=1}^{i} (k_{n−i+m−1} − β) / α^m` for `i = 1 … n−1`.
pub fn preimage_zero_chain<T: Scalar>(r: Rational, p: &LinearParams<T>) -> Result<PreimageChain<T>, LinearError> {
    require_member(r, p)?;
    let seq = r.char_seq();
    let n = seq.len();
    Ok(PreimageChain {
        rational: r,
        points: (1..n).map(|i| chain_point(&seq, p, i)).collect(),
        terminal: chain_point(&seq, p, n),
    })
}
