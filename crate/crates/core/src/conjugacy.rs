//! Numerical conjugacy `H` with `f∘H = H∘S` between a linear map `S` and a
//! nonlinear map `f` that share a rotation number `l/n`.
//!
//! `H` is pinned on the backward orbit of zero and on the periodic cycle, and
//! on the gap `(S(1), S(0))` (the points without preimage) it is chosen
//! piecewise linear. Pushing sample points of the gap forward through `S` and
//! `f` then fixes `H` everywhere else; between samples it is interpolated
//! linearly.

use thiserror::Error;

use crate::farey::Rational;
use crate::linear::{periodic_points, preimage_zero_chain, LinearError, LinearParams};
use crate::piecewise::{check_assumptions, detect_period, AffineScale, MapError, OrbitError, OrbitOptions, PiecewiseMap};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConjugacyError {
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("rotation numbers differ: linear map has {source_rational}, target has {}", .target.map_or("none".to_string(), |r| r.to_string()))]
    Mismatch {
        source_rational: Rational,
        target: Option<Rational>,
    },
    #[error("knots are not increasing at s = {s}: {t_prev} then {t}")]
    NonMonotone { s: f64, t_prev: f64, t: f64 },
    #[error("matched points fall on different pieces at s = {s}, t = {t}")]
    SideMismatch { s: f64, t: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct ConjugacyOptions<T> {
    /// Forward iterates of each gap sample.
    pub depth: usize,
    /// Samples in each half of the gap.
    pub seeds: usize,
    pub orbit: OrbitOptions<T>,
}

impl<T: Real> Default for ConjugacyOptions<T> {
    fn default() -> Self {
        Self {
            depth: 40,
            seeds: 256,
            orbit: OrbitOptions::default(),
        }
    }
}

impl<T: Real> ConjugacyOptions<T> {
    pub fn with_depth(depth: usize) -> Self {
        Self { depth, ..Self::default() }
    }
}

/// A sampled monotone homeomorphism from the linear side to the target.
#[derive(Clone)]
pub struct ConjugacyMap<T> {
    pub rational: Rational,
    pub depth: usize,
    /// `(s, t)` pairs, strictly increasing in both coordinates; `t` is in the
    /// target's normalized coordinates.
    pub knots: Vec<(T, T)>,
    /// Sorted cycles, index-aligned.
    pub source_cycle: Vec<T>,
    pub target_cycle: Vec<T>,
    /// Backward orbits of zero, `i = 0 … n−1`.
    pub source_chain: Vec<T>,
    pub target_chain: Vec<T>,
    source: PiecewiseMap<T>,
    target: PiecewiseMap<T>,
    scale: AffineScale<T>,
}

/// Result of checking `f∘H = H∘S` on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugacyCheck<T> {
    pub residual: T,
    /// `H` strictly increasing over the grid.
    pub increasing: bool,
    /// Grid points skipped next to the cut.
    pub excluded: usize,
    pub exclusion_width: T,
}

impl<T: Real> std::fmt::Debug for ConjugacyMap<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConjugacyMap")
            .field("rational", &self.rational)
            .field("depth", &self.depth)
            .field("knots", &self.knots.len())
            .finish_non_exhaustive()
    }
}

impl<T: Real> ConjugacyMap<T> {
    /// `H(x)` in the target's normalized coordinates.
    pub fn eval(&self, x: T) -> T {
        let k = &self.knots;
        let i = k.partition_point(|&(s, _)| s <= x);
        if i == 0 {
            return k[0].1;
        }
        if i == k.len() {
            return k[k.len() - 1].1;
        }
        let ((s0, t0), (s1, t1)) = (k[i - 1], k[i]);
        t0 + (t1 - t0) * (x - s0) / (s1 - s0)
    }

    /// `H(x)` in the target's original coordinates.
    pub fn eval_target(&self, x: T) -> T {
        self.scale.from_unit(self.eval(x))
    }

    /// Knots with `t` in the target's original coordinates.
    pub fn knots_original(&self) -> Vec<(T, T)> {
        self.knots.iter().map(|&(s, t)| (s, self.scale.from_unit(t))).collect()
    }

    pub fn source_map(&self) -> &PiecewiseMap<T> {
        &self.source
    }

    /// The target on `[0, 1]`.
    pub fn target_map(&self) -> &PiecewiseMap<T> {
        &self.target
    }
}

fn nearest_distance<T: Real>(sorted: &[T], x: T) -> T {
    sorted.iter().fold(T::infinity(), |d, &p| d.min((x - p).abs()))
}

/// Builds `H` for `S_{α,β}` inside the tongue of `r` and a target map with
/// the same `(n, l)`.
pub fn build_homeomorphism<T: Real>(
    linear: &LinearParams<T>,
    r: Rational,
    target: &PiecewiseMap<T>,
    opts: &ConjugacyOptions<T>,
) -> Result<ConjugacyMap<T>, ConjugacyError> {
    let n = r.period() as usize;
    let source = PiecewiseMap::from_linear(linear);
    let (unit, scale) = target.normalized();

    let report = check_assumptions(&unit, n.max(2))?;
    let target_r = report.rational();
    if target_r != Some(r) {
        return Err(ConjugacyError::Mismatch {
            source_rational: r,
            target: target_r,
        });
    }
    let target_chain = report.chain.expect("passed report has a chain").points;
    let mut source_chain = vec![T::zero()];
    source_chain.extend(preimage_zero_chain(r, linear)?.points);

    let source_cycle = periodic_points(r, linear)?.sorted_points();
    let orbit = detect_period(&unit, unit.cut(), &opts.orbit)?;
    if orbit.rational() != Some(r) {
        return Err(ConjugacyError::Mismatch {
            source_rational: r,
            target: orbit.rational(),
        });
    }
    let target_cycle = orbit.points;

    let mut knots: Vec<(T, T)> = Vec::new();
    knots.extend(source_chain.iter().copied().zip(target_chain.iter().copied()));
    knots.extend(source_cycle.iter().copied().zip(target_cycle.iter().copied()));
    knots.push((T::one(), T::one()));

    // the gap splits at the last chain point into two halves
    let gap_s = [source.image_of_end(), source_chain[n - 1], source.image_of_start()];
    let gap_t = [unit.image_of_end(), target_chain[n - 1], unit.image_of_start()];
    let mut seeds = vec![(gap_s[0], gap_t[0]), (gap_s[2], gap_t[2])];
    for half in 0..2 {
        let (a, b) = (gap_s[half], gap_s[half + 1]);
        let (ta, tb) = (gap_t[half], gap_t[half + 1]);
        for j in 1..=opts.seeds {
            let u = T::lit(j as f64) / T::lit((opts.seeds + 1) as f64);
            seeds.push((a + (b - a) * u, ta + (tb - ta) * u));
        }
    }

    // orbits contract at different rates, so once either side is this close
    // to its cycle the pair no longer carries information
    let snap = T::epsilon().sqrt();
    for (mut s, mut t) in seeds {
        for m in 0..=opts.depth {
            if nearest_distance(&source_cycle, s) < snap || nearest_distance(&target_cycle, t) < snap {
                break;
            }
            knots.push((s, t));
            if m == opts.depth {
                break;
            }
            if source.on_right(s) != unit.on_right(t) {
                return Err(ConjugacyError::SideMismatch { s: s.approx(), t: t.approx() });
            }
            s = source.step_clamped(s);
            t = unit.step_clamped(t);
        }
    }

    knots.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite knots"));
    knots.dedup_by(|b, a| a.0 == b.0 && a.1 == b.1);
    for w in knots.windows(2) {
        if !(w[0].0 < w[1].0 && w[0].1 < w[1].1) {
            return Err(ConjugacyError::NonMonotone {
                s: w[1].0.approx(),
                t_prev: w[0].1.approx(),
                t: w[1].1.approx(),
            });
        }
    }

    Ok(ConjugacyMap {
        rational: r,
        depth: opts.depth,
        knots,
        source_cycle,
        target_cycle,
        source_chain,
        target_chain,
        source,
        target: unit,
        scale,
    })
}

/// Largest `|f(H(x)) − H(S(x))|` over `grid` equispaced points of `[0, 1)`,
/// skipping points within two knot spacings of the cut of `S`.
pub fn verify_conjugacy<T: Real>(h: &ConjugacyMap<T>, grid: usize) -> ConjugacyCheck<T> {
    let cut = h.source.cut();
    let i = h.knots.partition_point(|&(s, _)| s < cut);
    let below = if i > 0 { cut - h.knots[i - 1].0 } else { T::zero() };
    let above = h.knots.get(i + 1).map_or(T::zero(), |&(s, _)| s - cut);
    let width = T::lit(2.0) * below.max(above);

    let mut residual = T::zero();
    let mut increasing = true;
    let mut excluded = 0;
    let mut prev = None;
    for k in 0..grid {
        let x = T::lit(k as f64) / T::lit(grid as f64);
        let hx = h.eval(x);
        if let Some(p) = prev {
            increasing &= hx > p;
        }
        prev = Some(hx);
        if (x - cut).abs() < width {
            excluded += 1;
            continue;
        }
        let lhs = h.target.step_clamped(hx);
        let rhs = h.eval(h.source.step_clamped(x));
        residual = residual.max((lhs - rhs).abs());
    }
    ConjugacyCheck {
        residual,
        increasing,
        excluded,
        exclusion_width: width,
    }
}
