use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::numeric::bisect_increasing;
use crate::piecewise::{BranchFn, MapError, PiecewiseMap};
use crate::scalar::Real;

/// Names accepted by [`FamilySpec::builtin`].
pub const BUILTIN_FAMILIES: [&str; 4] = ["linear", "sine", "quadratic", "sqrt"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("unknown family `{0}` (expected one of linear, sine, quadratic, sqrt)")]
    Unknown(String),
    #[error("parameter {name} = {value} is outside {range}")]
    Parameter { name: &'static str, value: f64, range: &'static str },
    #[error("base function check failed: {0}")]
    Base(String),
    #[error("c = {c} is outside the open range ({lo}, {hi})")]
    OutOfRange { c: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind<T> {
    /// `h = g + 1` left of `c`, `g` from `c` on, on `[g(c), h(c)]`.
    FromG { c_star: T },
    /// `f − f(c) + 1` left of `c`, `f − f(c)` from `c` on, on `[0, 1]`.
    FromF,
}

/// A one-parameter family `c ↦ T_c` built from a single increasing function.
#[derive(Clone)]
pub struct FamilySpec<T> {
    pub name: String,
    pub kind: FamilyKind<T>,
    base: BranchFn<T>,
    /// Declared Lipschitz bound of the base function.
    pub kappa: T,
    /// Open range of admissible `c`.
    pub range: (T, T),
}

impl<T: Real> fmt::Debug for FamilySpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilySpec")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("kappa", &self.kappa)
            .field("range", &self.range)
            .finish_non_exhaustive()
    }
}

fn check_close<T: Real>(what: &str, got: T, want: T) -> Result<(), FamilyError> {
    let tol = T::lit(1e-9) * (T::one() + want.abs());
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(FamilyError::Base(format!("{what}: expected {:?}, got {:?}", want, got)))
    }
}

impl<T: Real> FamilySpec<T> {
    /// From-g family. Checks `g(0) = 0`, `g(c*) + 1 = c*` and `0 < κ < 1`.
    pub fn from_g<G>(name: impl Into<String>, g: G, c_star: T, kappa: T) -> Result<Self, FamilyError>
    where
        G: Fn(T) -> T + Send + Sync + 'static,
    {
        check_close("g(0)", g(T::zero()), T::zero())?;
        check_close("g(c*) + 1", g(c_star) + T::one(), c_star)?;
        if !(kappa > T::zero() && kappa < T::one()) {
            return Err(FamilyError::Base(format!("contraction bound {:?} is not in (0, 1)", kappa)));
        }
        Ok(Self {
            name: name.into(),
            kind: FamilyKind::FromG { c_star },
            base: Arc::new(g),
            kappa,
            range: (T::zero(), c_star),
        })
    }

    /// From-f family. Checks `f(0) = 0` and `f(1) < 1`; `kappa` may be 1 when
    /// no bound below 1 is known.
    pub fn from_f<F>(name: impl Into<String>, f: F, kappa: T) -> Result<Self, FamilyError>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        check_close("f(0)", f(T::zero()), T::zero())?;
        if !(f(T::one()) < T::one()) {
            return Err(FamilyError::Base("f(1) must be below 1".into()));
        }
        if !(kappa > T::zero()) {
            return Err(FamilyError::Base(format!("Lipschitz bound {:?} must be positive", kappa)));
        }
        Ok(Self {
            name: name.into(),
            kind: FamilyKind::FromF,
            base: Arc::new(f),
            kappa,
            range: (T::zero(), T::one()),
        })
    }

    /// `f(x) = αx`; `T_c` is the linear map with slope `α` and `β = 1 − αc`.
    pub fn linear(alpha: T) -> Result<Self, FamilyError> {
        check_unit("alpha", alpha)?;
        Self::from_f("linear", move |x| alpha * x, alpha)
    }

    /// `f(x) = αx²`, Lipschitz with `κ = 2α`.
    pub fn quadratic(alpha: T) -> Result<Self, FamilyError> {
        check_unit("alpha", alpha)?;
        Self::from_f("quadratic", move |x| alpha * x * x, T::lit(2.0) * alpha)
    }

    /// `f(x) = α√x`, not Lipschitz at 0.
    pub fn sqrt(alpha: T) -> Result<Self, FamilyError> {
        check_unit("alpha", alpha)?;
        Self::from_f("sqrt", move |x: T| alpha * x.sqrt(), T::one())
    }

    /// `g(x) = α(x/2 + sin(x)/4)` with `α` chosen so that `g(c*) + 1 = c*`.
    pub fn sine_from_c_star(c_star: T) -> Result<Self, FamilyError> {
        if !(c_star > T::one() && c_star.is_finite()) {
            return Err(FamilyError::Parameter {
                name: "c*",
                value: c_star.approx(),
                range: "(1, inf)",
            });
        }
        Self::sine(sine_alpha(c_star), c_star)
    }

    /// Sine family for a given `α ∈ (0, 4/3)`; `c*` is found by bisection.
    pub fn sine_from_alpha(alpha: T) -> Result<Self, FamilyError> {
        if !(alpha > T::zero() && alpha < T::lit(4.0 / 3.0)) {
            return Err(FamilyError::Parameter {
                name: "alpha",
                value: alpha.approx(),
                range: "(0, 4/3)",
            });
        }
        let mut hi = T::lit(2.0);
        while sine_alpha(hi) <= alpha {
            hi = hi * T::lit(2.0);
            if !hi.is_finite() {
                return Err(FamilyError::Base("no c* for this alpha".into()));
            }
        }
        let c_star = bisect_increasing(sine_alpha, T::one(), hi, alpha, T::epsilon() * hi);
        Self::sine(alpha, c_star)
    }

    fn sine(alpha: T, c_star: T) -> Result<Self, FamilyError> {
        let (two, four) = (T::lit(2.0), T::lit(4.0));
        let g = move |x: T| alpha * (x / two + x.sin() / four);
        Self::from_g("sine", g, c_star, alpha * T::lit(0.75))
    }

    /// Builtin family by name; `sine` is parametrized by `α`.
    pub fn builtin(name: &str, alpha: T) -> Result<Self, FamilyError> {
        match name {
            "linear" => Self::linear(alpha),
            "sine" => Self::sine_from_alpha(alpha),
            "quadratic" => Self::quadratic(alpha),
            "sqrt" => Self::sqrt(alpha),
            other => Err(FamilyError::Unknown(other.to_string())),
        }
    }

    pub fn is_from_g(&self) -> bool {
        matches!(self.kind, FamilyKind::FromG { .. })
    }

    pub fn base(&self, x: T) -> T {
        (self.base)(x)
    }

    /// Left branch of `T_c` at `x`.
    pub fn upper(&self, c: T, x: T) -> T {
        match self.kind {
            FamilyKind::FromG { .. } => self.base(x) + T::one(),
            FamilyKind::FromF => self.base(x) - self.base(c) + T::one(),
        }
    }

    /// Right branch of `T_c` at `x`.
    pub fn lower(&self, c: T, x: T) -> T {
        match self.kind {
            FamilyKind::FromG { .. } => self.base(x),
            FamilyKind::FromF => self.base(x) - self.base(c),
        }
    }

    /// `h(g(c)) − g(h(c))`, positive when `T_c` does not overlap.
    pub fn overlap_margin(&self, c: T) -> T {
        self.upper(c, self.lower(c, c)) - self.lower(c, self.upper(c, c))
    }

    pub fn in_range(&self, c: T) -> bool {
        self.range.0 < c && c < self.range.1
    }

    /// The map `T_c`.
    pub fn map_at(&self, c: T) -> Result<PiecewiseMap<T>, FamilyError> {
        if !self.in_range(c) {
            return Err(FamilyError::OutOfRange {
                c: c.approx(),
                lo: self.range.0.approx(),
                hi: self.range.1.approx(),
            });
        }
        let f = self.base.clone();
        let map = match self.kind {
            FamilyKind::FromG { .. } => {
                let (gu, gl) = (f.clone(), f.clone());
                let gc = f(c);
                PiecewiseMap::new(gc, gc + T::one(), c, move |x| gu(x) + T::one(), move |x| gl(x))?
            }
            FamilyKind::FromF => {
                let (fu, fl) = (f.clone(), f.clone());
                let fc = f(c);
                PiecewiseMap::new(T::zero(), T::one(), c, move |x| fu(x) - fc + T::one(), move |x| fl(x) - fc)?
            }
        };
        Ok(map.with_kappa(self.kappa.min(T::one())))
    }
}

fn check_unit<T: Real>(name: &'static str, v: T) -> Result<(), FamilyError> {
    if v > T::zero() && v < T::one() {
        Ok(())
    } else {
        Err(FamilyError::Parameter {
            name,
            value: v.approx(),
            range: "(0, 1)",
        })
    }
}

/// The `α` for which `g(c*) + 1 = c*`, i.e. `α = 4(c* − 1) / (2c* + sin c*)`,
/// increasing in `c* > 1`.
fn sine_alpha<T: Real>(c_star: T) -> T {
    T::lit(4.0) * (c_star - T::one()) / (T::lit(2.0) * c_star + c_star.sin())
}
