//! Two-branch monotone interval maps with a single discontinuity.
//!
//! A [`PiecewiseMap`] on `[start, end]` applies its *left* branch on
//! `[start, cut)` and its *right* branch on `[cut, end]`. The right branch is
//! the one that wraps: for the linear map it is `αx + β − 1`. Itineraries
//! record `true` (or 1) whenever the right branch is used.

mod assumptions;
mod orbit;
mod order;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use assumptions::{check_assumptions, check_assumptions_with, AssumptionReport, Chain, ChainFailure, CheckOptions};
pub use orbit::{detect_period, OrbitError, OrbitOptions, OrbitSummary};
pub use order::{expected_order, preimage_order, OrderError, PositionLabel, PreimageOrder};

use crate::linear::LinearParams;
use crate::numeric::bisect_increasing;
use crate::scalar::Real;

/// Default bisection tolerance on `x`.
pub const BISECTION_TOL: f64 = 1e-12;

pub type BranchFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("invalid map: {0}")]
    Invalid(String),
    #[error("point {x} is outside the domain [{start}, {end}]")]
    OutOfDomain { x: f64, start: f64, end: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("branch evaluation at {x} is not finite")]
    NonFinite { x: f64 },
    #[error("{y} lies in the range of both branches")]
    Overlap { y: f64 },
}

/// Affine change of coordinates `x = offset + width·u` onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineScale<T> {
    pub offset: T,
    pub width: T,
}

impl<T: Real> AffineScale<T> {
    pub fn identity() -> Self {
        Self {
            offset: T::zero(),
            width: T::one(),
        }
    }

    pub fn to_unit(&self, x: T) -> T {
        (x - self.offset) / self.width
    }

    pub fn from_unit(&self, u: T) -> T {
        self.offset + self.width * u
    }

    pub fn is_identity(&self) -> bool {
        self.offset == T::zero() && self.width == T::one()
    }
}

/// A unique preimage and the branch it was found on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preimage<T> {
    pub x: T,
    pub on_right: bool,
}

#[derive(Clone)]
pub struct PiecewiseMap<T> {
    start: T,
    end: T,
    cut: T,
    left: BranchFn<T>,
    right: BranchFn<T>,
    kappa: T,
}

impl<T: Real> fmt::Debug for PiecewiseMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseMap")
            .field("domain", &(self.start, self.end))
            .field("cut", &self.cut)
            .field("kappa", &self.kappa)
            .finish_non_exhaustive()
    }
}

impl<T: Real> PiecewiseMap<T> {
    /// Map on `[start, end]` with `start < cut <= end`. A cut at `end` makes
    /// the right piece the single point `end`.
    pub fn new<L, R>(start: T, end: T, cut: T, left: L, right: R) -> Result<Self, MapError>
    where
        L: Fn(T) -> T + Send + Sync + 'static,
        R: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::from_arcs(start, end, cut, Arc::new(left), Arc::new(right))
    }

    pub fn from_arcs(start: T, end: T, cut: T, left: BranchFn<T>, right: BranchFn<T>) -> Result<Self, MapError> {
        if !(start.is_finite() && end.is_finite() && cut.is_finite()) {
            return Err(MapError::Invalid("non-finite domain or cut".into()));
        }
        if !(start < cut && cut <= end) {
            return Err(MapError::Invalid(format!(
                "need start < cut <= end, got start={:?} cut={:?} end={:?}",
                start, cut, end
            )));
        }
        Ok(Self {
            start,
            end,
            cut,
            left,
            right,
            kappa: T::one(),
        })
    }

    /// Declares a Lipschitz bound for both branches (1 means unknown).
    pub fn with_kappa(mut self, kappa: T) -> Self {
        self.kappa = kappa;
        self
    }

    /// `S(x) = αx + β (mod 1)` on `[0, 1]`. Without wrapping (`α + β <= 1`)
    /// the cut sits at 1 and both branches coincide.
    pub fn from_linear(p: &LinearParams<T>) -> Self {
        let (alpha, beta) = (*p.alpha(), *p.beta());
        let one = T::one();
        let map = if p.wraps() {
            Self::new(
                T::zero(),
                one,
                p.cut(),
                move |x| alpha * x + beta,
                move |x| alpha * x + beta - one,
            )
        } else {
            Self::new(T::zero(), one, one, move |x| alpha * x + beta, move |x| alpha * x + beta)
        };
        map.expect("linear parameters give a valid map").with_kappa(alpha)
    }

    pub fn domain(&self) -> (T, T) {
        (self.start, self.end)
    }

    pub fn cut(&self) -> T {
        self.cut
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn contains(&self, x: T) -> bool {
        self.start <= x && x <= self.end
    }

    /// `true` when `x` is on the right (wrapping) piece.
    pub fn on_right(&self, x: T) -> bool {
        x >= self.cut
    }

    fn check_domain(&self, x: T) -> Result<(), MapError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(MapError::OutOfDomain {
                x: x.approx(),
                start: self.start.approx(),
                end: self.end.approx(),
            })
        }
    }

    pub fn eval(&self, x: T) -> Result<T, MapError> {
        self.check_domain(x)?;
        Ok(self.apply(x))
    }

    pub(crate) fn apply(&self, x: T) -> T {
        if x < self.cut {
            (self.left)(x)
        } else {
            (self.right)(x)
        }
    }

    /// Applies a fixed branch, ignoring which piece `x` is on.
    pub fn apply_branch(&self, x: T, right: bool) -> T {
        if right {
            (self.right)(x)
        } else {
            (self.left)(x)
        }
    }

    /// Forward step clamped to the domain, for long iterations where
    /// rounding may push a value a few ulps outside.
    pub(crate) fn step_clamped(&self, x: T) -> T {
        self.apply(x).max(self.start).min(self.end)
    }

    /// Left branch at the cut, `f(c−)`.
    pub fn left_limit(&self) -> T {
        (self.left)(self.cut)
    }

    /// Right branch at the cut, `f(c)`.
    pub fn right_at_cut(&self) -> T {
        (self.right)(self.cut)
    }

    /// `f(start)`.
    pub fn image_of_start(&self) -> T {
        (self.left)(self.start)
    }

    /// `f(end)`.
    pub fn image_of_end(&self) -> T {
        self.apply(self.end)
    }

    /// Open interval `(f(end), f(start))` of points without preimage.
    pub fn gap(&self) -> (T, T) {
        (self.image_of_end(), self.image_of_start())
    }

    /// The unique `x` with `f(x) = y` to within `tol`, or `None` when `y`
    /// has no preimage.
    pub fn preimage(&self, y: T, tol: T) -> Result<Option<Preimage<T>>, MapError> {
        if !(tol > T::zero()) {
            return Err(MapError::BadTolerance(tol.approx()));
        }
        self.check_domain(y)?;
        let left_range = self.image_of_start() <= y && y < self.left_limit();
        let right_range = self.right_at_cut() <= y && y <= (self.right)(self.end);
        match (left_range, right_range) {
            (true, true) => Err(MapError::Overlap { y: y.approx() }),
            (false, false) => Ok(None),
            (true, false) => Ok(Some(Preimage {
                x: bisect_increasing(|x| (self.left)(x), self.start, self.cut, y, tol),
                on_right: false,
            })),
            (false, true) => Ok(Some(Preimage {
                x: bisect_increasing(|x| (self.right)(x), self.cut, self.end, y, tol),
                on_right: true,
            })),
        }
    }

    /// Conjugate copy on `[0, 1]` and the scale that maps back.
    pub fn normalized(&self) -> (PiecewiseMap<T>, AffineScale<T>) {
        let scale = AffineScale {
            offset: self.start,
            width: self.end - self.start,
        };
        if scale.is_identity() {
            return (self.clone(), scale);
        }
        let (left, right) = (self.left.clone(), self.right.clone());
        let map = PiecewiseMap {
            start: T::zero(),
            end: T::one(),
            cut: scale.to_unit(self.cut),
            left: Arc::new(move |u| scale.to_unit(left(scale.from_unit(u)))),
            right: Arc::new(move |u| scale.to_unit(right(scale.from_unit(u)))),
            kappa: self.kappa,
        };
        (map, scale)
    }
}
