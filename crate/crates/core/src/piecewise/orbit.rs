use num_integer::Integer;
use thiserror::Error;

use super::{MapError, PiecewiseMap};
use crate::farey::{Fraction, Rational};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct OrbitOptions<T> {
    pub burn_in: usize,
    /// Largest period searched for.
    pub max_period: usize,
    /// Recurrence tolerance `|x_{k+p} − x_k|`.
    pub tol: T,
    /// Stopping step for the refinement of the cycle.
    pub refine_tol: T,
    pub max_refine: usize,
}

impl<T: Real> Default for OrbitOptions<T> {
    fn default() -> Self {
        Self {
            burn_in: 10_000,
            max_period: 1000,
            tol: T::lit(1e-9),
            refine_tol: T::lit(1e-14),
            max_refine: 10_000,
        }
    }
}

impl<T: Real> OrbitOptions<T> {
    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_period(mut self, max_period: usize) -> Self {
        self.max_period = max_period;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("no recurrence with period <= {max_period} after {iterations} iterations")]
    NoRecurrence { max_period: usize, iterations: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// An attracting cycle found by forward iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSummary<T> {
    pub period: usize,
    /// Cycle points in ascending order.
    pub points: Vec<T>,
    /// Cycle points in time order, starting from the smallest.
    pub orbit: Vec<T>,
    /// `true` where the right branch is applied to `orbit[k]`.
    pub itinerary: Vec<bool>,
    /// Number of right-branch steps per period.
    pub wraps: usize,
    /// `wraps / period` in lowest terms.
    pub rotation: Fraction,
    /// Steps from `x0` until the orbit is within `tol` of the cycle.
    pub transient: usize,
    /// Largest `|f^p(x) − x|` over the cycle points.
    pub residual: T,
}

impl<T: Real> OrbitSummary<T> {
    /// The cycle's `(n, l)` when `period >= 2`.
    pub fn rational(&self) -> Option<Rational> {
        Rational::new(self.period as u32, self.wraps as u32).ok()
    }

    pub fn itinerary_bits(&self) -> Vec<u8> {
        self.itinerary.iter().map(|&b| b as u8).collect()
    }
}

/// Finds the attracting cycle reached from `x0`.
pub fn detect_period<T: Real>(map: &PiecewiseMap<T>, x0: T, opts: &OrbitOptions<T>) -> Result<OrbitSummary<T>, OrbitError> {
    map.eval(x0)?;
    let max_p = opts.max_period.max(1);

    let mut x = x0;
    for _ in 0..opts.burn_in {
        x = map.step_clamped(x);
    }

    let window = 2 * max_p + 1;
    let mut xs = Vec::with_capacity(window);
    let mut bits = Vec::with_capacity(window);
    for _ in 0..window {
        if !x.is_finite() {
            return Err(MapError::NonFinite { x: x.approx() }.into());
        }
        xs.push(x);
        bits.push(map.on_right(x));
        x = map.step_clamped(x);
    }

    let recurs = |p: usize| (0..p).all(|k| (xs[k + p] - xs[k]).abs() < opts.tol && bits[k + p] == bits[k]);
    let period = (1..=max_p).find(|&p| recurs(p)).ok_or(OrbitError::NoRecurrence {
        max_period: max_p,
        iterations: opts.burn_in + window,
    })?;

    // Start the cycle at its smallest point so the result does not depend on x0.
    let start = (0..period)
        .min_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("finite orbit"))
        .unwrap_or(0);
    let itinerary: Vec<bool> = (0..period).map(|k| bits[start + k]).collect();

    let word = |mut y: T| {
        for &right in &itinerary {
            y = map.apply_branch(y, right);
        }
        y
    };
    let mut p0 = xs[start];
    for _ in 0..opts.max_refine {
        let next = word(p0);
        let delta = (next - p0).abs();
        p0 = next;
        if !(delta > opts.refine_tol) {
            break;
        }
    }

    let mut orbit = Vec::with_capacity(period);
    let mut y = p0;
    for &right in &itinerary {
        orbit.push(y);
        y = map.apply_branch(y, right);
    }

    let mut residual = T::zero();
    for &q in &orbit {
        let mut z = q;
        for _ in 0..period {
            z = map.step_clamped(z);
        }
        residual = residual.max((z - q).abs());
    }

    let mut points = orbit.clone();
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite orbit"));

    let near_cycle = |z: T| points.iter().any(|&q| (z - q).abs() < opts.tol);
    let limit = opts.burn_in + window;
    let mut transient = 0;
    let mut z = x0;
    while transient < limit && !near_cycle(z) {
        z = map.step_clamped(z);
        transient += 1;
    }

    let wraps = itinerary.iter().filter(|&&b| b).count();
    let g = wraps.gcd(&period).max(1);
    let rotation = Fraction {
        num: (wraps / g) as u32,
        den: (period / g) as u32,
    };

    Ok(OrbitSummary {
        period,
        points,
        orbit,
        itinerary,
        wraps,
        rotation,
        transient,
        residual,
    })
}
