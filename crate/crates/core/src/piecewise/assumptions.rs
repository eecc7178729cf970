use num_integer::Integer;

use super::{AffineScale, MapError, PiecewiseMap, BISECTION_TOL};
use crate::farey::Rational;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions<T> {
    /// Samples per piece for the monotonicity spot check.
    pub grid: usize,
    /// Allowed deviation of `f(c−)` from 1 and `f(c)` from 0.
    pub limit_tol: T,
    pub bisection_tol: T,
}

impl<T: Real> Default for CheckOptions<T> {
    fn default() -> Self {
        Self {
            grid: 1024,
            limit_tol: T::lit(1e-9),
            bisection_tol: T::lit(BISECTION_TOL),
        }
    }
}

/// The backward orbit of zero, `f^{-i}(0)` for `i = 0 … n−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<T> {
    pub points: Vec<T>,
    /// Whether each point lies on the right piece `[c, 1]`.
    pub on_right: Vec<bool>,
}

impl<T: Real> Chain<T> {
    /// Chain length `n`.
    pub fn period(&self) -> usize {
        self.points.len()
    }

    /// Points on the right piece, `l`.
    pub fn wraps(&self) -> usize {
        self.on_right.iter().filter(|&&r| r).count()
    }

    pub fn rational(&self) -> Option<Rational> {
        Rational::new(self.period() as u32, self.wraps() as u32).ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChainFailure<T> {
    /// Zero still had a preimage after this many backward steps.
    TooLong { max_period: usize, chain: Chain<T> },
    /// The chain ended but its length and wrap count share a factor.
    NotCoprime { chain: Chain<T> },
    /// Chain of length one: the cut point itself has no preimage chain.
    Degenerate,
}

/// Outcome of the structural checks, in normalized `[0, 1]` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport<T> {
    /// `f(0) > f(1)`.
    pub non_overlapping: bool,
    /// `(f(0), f(1))`.
    pub overlap_witness: (T, T),
    /// `f(c−) = 1` and `f(c) = 0`.
    pub boundary_limits: bool,
    /// `(f(c−), f(c))`.
    pub limit_witness: (T, T),
    /// Both branches strictly increasing on the sampled grid.
    pub increasing: bool,
    /// First sampled pair `(x, y)`, `x < y`, with `f(x) >= f(y)`.
    pub monotone_witness: Option<(T, T)>,
    /// The finite backward orbit of zero.
    pub chain: Result<Chain<T>, ChainFailure<T>>,
    /// How the original domain maps onto `[0, 1]`.
    pub scale: AffineScale<T>,
}

impl<T: Real> AssumptionReport<T> {
    pub fn passed(&self) -> bool {
        self.non_overlapping && self.boundary_limits && self.increasing && self.chain.is_ok()
    }

    /// `(n, l)` when every check passed.
    pub fn rational(&self) -> Option<Rational> {
        if !self.passed() {
            return None;
        }
        self.chain.as_ref().ok().and_then(Chain::rational)
    }
}

fn finite<T: Real>(x: T, v: T) -> Result<T, MapError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(MapError::NonFinite { x: x.approx() })
    }
}

fn first_decrease<T: Real>(
    map: &PiecewiseMap<T>,
    lo: T,
    hi: T,
    grid: usize,
    right: bool,
) -> Result<Option<(T, T)>, MapError> {
    let step = (hi - lo) / T::lit(grid as f64);
    let mut prev_x = lo;
    let mut prev = finite(lo, map.apply_branch(lo, right))?;
    for i in 1..=grid {
        let x = if i == grid { hi } else { lo + step * T::lit(i as f64) };
        let v = finite(x, map.apply_branch(x, right))?;
        if v <= prev {
            return Ok(Some((prev_x, x)));
        }
        prev_x = x;
        prev = v;
    }
    Ok(None)
}

/// Checks non-overlap, the boundary limits at the cut, monotonicity on a
/// grid, and that the backward orbit of zero terminates after `n <= max_period`
/// points. Works on the normalized copy of `map`.
pub fn check_assumptions<T: Real>(map: &PiecewiseMap<T>, max_period: usize) -> Result<AssumptionReport<T>, MapError> {
    check_assumptions_with(map, max_period, &CheckOptions::default())
}

pub fn check_assumptions_with<T: Real>(
    map: &PiecewiseMap<T>,
    max_period: usize,
    opts: &CheckOptions<T>,
) -> Result<AssumptionReport<T>, MapError> {
    let (unit, scale) = map.normalized();
    let (zero, one) = (T::zero(), T::one());
    let cut = unit.cut();

    let overlap_witness = (finite(zero, unit.image_of_start())?, finite(one, unit.image_of_end())?);
    let non_overlapping = overlap_witness.0 > overlap_witness.1;

    let limit_witness = (finite(cut, unit.left_limit())?, finite(cut, unit.right_at_cut())?);
    let boundary_limits =
        (limit_witness.0 - one).abs() <= opts.limit_tol && limit_witness.1.abs() <= opts.limit_tol;

    let mut monotone_witness = first_decrease(&unit, zero, cut, opts.grid, false)?;
    if monotone_witness.is_none() && cut < one {
        monotone_witness = first_decrease(&unit, cut, one, opts.grid, true)?;
    }
    let increasing = monotone_witness.is_none();

    let chain = if non_overlapping && increasing {
        backward_orbit_of_zero(&unit, max_period, opts.bisection_tol)?
    } else {
        // Preimages are not unique without these.
        Err(ChainFailure::Degenerate)
    };

    Ok(AssumptionReport {
        non_overlapping,
        overlap_witness,
        boundary_limits,
        limit_witness,
        increasing,
        monotone_witness,
        chain,
        scale,
    })
}

fn backward_orbit_of_zero<T: Real>(
    unit: &PiecewiseMap<T>,
    max_period: usize,
    tol: T,
) -> Result<Result<Chain<T>, ChainFailure<T>>, MapError> {
    let mut chain = Chain {
        points: vec![T::zero()],
        on_right: vec![false],
    };
    loop {
        let last = *chain.points.last().expect("chain starts at zero");
        match unit.preimage(last, tol)? {
            None => break,
            Some(pre) => {
                if chain.points.len() == max_period {
                    return Ok(Err(ChainFailure::TooLong { max_period, chain }));
                }
                chain.points.push(pre.x);
                chain.on_right.push(pre.on_right);
            }
        }
    }
    if chain.period() < 2 {
        return Ok(Err(ChainFailure::Degenerate));
    }
    let (n, l) = (chain.period(), chain.wraps());
    if n.gcd(&l) != 1 {
        return Ok(Err(ChainFailure::NotCoprime { chain }));
    }
    Ok(Ok(chain))
}
