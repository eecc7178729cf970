use std::fmt;

use thiserror::Error;

use super::{check_assumptions, Chain, MapError, PiecewiseMap};
use crate::farey::Rational;
use crate::scalar::Real;

/// Rank of a chain point among those on its own side of the cut (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PositionLabel {
    /// `x_i`, left of the cut.
    Below(usize),
    /// `y_j`, at or right of the cut.
    Above(usize),
}

impl fmt::Display for PositionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PositionLabel::Below(i) => write!(f, "x{i}"),
            PositionLabel::Above(j) => write!(f, "y{j}"),
        }
    }
}

fn show(label: &Option<PositionLabel>) -> String {
    label.map_or_else(|| "empty".to_string(), |l| l.to_string())
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrderError {
    #[error("assumptions failed: {0}")]
    Assumptions(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("preimage of {at} should be {}, found {}", show(.expected), show(.found))]
    Relation {
        at: PositionLabel,
        expected: Option<PositionLabel>,
        found: Option<PositionLabel>,
    },
}

/// How the backward orbit of zero is arranged on the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageOrder {
    pub rational: Rational,
    /// `rho[k]` is the backward step `i` of the `k`-th smallest point `f^{-i}(0)`.
    pub rho: Vec<usize>,
    /// Label of the `k`-th smallest point.
    pub labels: Vec<PositionLabel>,
}

impl PreimageOrder {
    fn from_rho(rational: Rational, rho: Vec<usize>) -> Self {
        let below = (rational.period() - rational.wraps()) as usize;
        let labels = (0..rho.len())
            .map(|k| if k < below { PositionLabel::Below(k + 1) } else { PositionLabel::Above(k + 1 - below) })
            .collect();
        Self { rational, rho, labels }
    }

    /// Sorted position of `f^{-i}(0)`.
    pub fn position_of(&self, step: usize) -> usize {
        self.rho.iter().position(|&i| i == step).expect("step within chain")
    }

    /// Sorted position of the preimage of the `k`-th smallest point, as
    /// dictated by `(n, l)`: positions shift down by `l` cyclically, and the
    /// point at position `l` has none.
    pub fn expected_successor(&self, k: usize) -> Option<usize> {
        let n = self.rho.len();
        let l = self.rational.wraps() as usize;
        match k.cmp(&l) {
            std::cmp::Ordering::Less => Some(k + n - l),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(k - l),
        }
    }

    /// Checks the successor table against the actual chain order.
    pub fn verify(&self) -> Result<(), OrderError> {
        let n = self.rho.len();
        for k in 0..n {
            let step = self.rho[k];
            let found = (step + 1 < n).then(|| self.position_of(step + 1));
            let expected = self.expected_successor(k);
            if found != expected {
                return Err(OrderError::Relation {
                    at: self.labels[k],
                    expected: expected.map(|e| self.labels[e]),
                    found: found.map(|f| self.labels[f]),
                });
            }
        }
        Ok(())
    }
}

/// The order forced by `(n, l)` alone: `f^{-i}(0)` sits at position
/// `i·(n − l) mod n`.
pub fn expected_order(r: Rational) -> PreimageOrder {
    let n = r.period() as usize;
    let step = n - r.wraps() as usize;
    let mut rho = vec![0; n];
    for i in 0..n {
        rho[(i * step) % n] = i;
    }
    PreimageOrder::from_rho(r, rho)
}

/// Sorts an observed chain and checks it against the successor table.
pub fn chain_order<T: Real>(chain: &Chain<T>) -> Result<PreimageOrder, OrderError> {
    let rational = chain
        .rational()
        .ok_or_else(|| OrderError::Assumptions(format!("chain ({}, {}) is not coprime", chain.period(), chain.wraps())))?;
    let mut rho: Vec<usize> = (0..chain.period()).collect();
    rho.sort_by(|&a, &b| chain.points[a].partial_cmp(&chain.points[b]).expect("finite chain"));
    let below = chain.period() - chain.wraps();
    if let Some(k) = (0..rho.len()).find(|&k| chain.on_right[rho[k]] != (k >= below)) {
        return Err(OrderError::Assumptions(format!("chain point {} is on the wrong side of the cut", rho[k])));
    }
    let order = PreimageOrder::from_rho(rational, rho);
    order.verify()?;
    Ok(order)
}

/// Checks the assumptions on `map`, then sorts and verifies its chain.
pub fn preimage_order<T: Real>(map: &PiecewiseMap<T>, max_period: usize) -> Result<PreimageOrder, OrderError> {
    let report = check_assumptions(map, max_period)?;
    if !report.passed() {
        return Err(OrderError::Assumptions(format!("{:?}", report.chain.err())));
    }
    let chain = report.chain.expect("passed report has a chain");
    chain_order(&chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::rationals_up_to;
    use crate::linear::{preimage_zero_chain, region_boundaries, LinearParams};

    fn linear_in(r: Rational, alpha: f64) -> PiecewiseMap<f64> {
        let beta = region_boundaries(r, &alpha).unwrap().midpoint();
        PiecewiseMap::from_linear(&LinearParams::new(alpha, beta).unwrap())
    }

    #[test]
    fn two_one_boundary_case() {
        let order = preimage_order(&linear_in(Rational::new(2, 1).unwrap(), 0.5), 16).unwrap();
        assert_eq!(order.rho, vec![0, 1]);
        assert_eq!(order.labels, vec![PositionLabel::Below(1), PositionLabel::Above(1)]);
        assert_eq!(order.expected_successor(0), Some(1));
        assert_eq!(order.expected_successor(1), None);
    }

    #[test]
    fn nine_two_table() {
        let r = Rational::new(9, 2).unwrap();
        let order = preimage_order(&linear_in(r, 0.5), 16).unwrap();
        assert_eq!(order, expected_order(r));
        let label = |k: usize| order.labels[k];
        // x1, x2 go to y1, y2; x3 has none; x_i goes to x_{i-2}; y_j goes to x_{5+j}
        assert_eq!(order.expected_successor(0).map(label), Some(PositionLabel::Above(1)));
        assert_eq!(order.expected_successor(1).map(label), Some(PositionLabel::Above(2)));
        assert_eq!(order.expected_successor(2), None);
        assert_eq!(order.expected_successor(6).map(label), Some(PositionLabel::Below(5)));
        assert_eq!(order.expected_successor(7).map(label), Some(PositionLabel::Below(6)));
        assert_eq!(order.expected_successor(8).map(label), Some(PositionLabel::Below(7)));
    }

    #[test]
    fn upper_heavy_case() {
        let r = Rational::new(3, 2).unwrap();
        let order = preimage_order(&linear_in(r, 0.5), 16).unwrap();
        assert_eq!(order.labels, vec![PositionLabel::Below(1), PositionLabel::Above(1), PositionLabel::Above(2)]);
        // 0 -> c = y1 -> y2, and y2 has none
        assert_eq!(order.rho, vec![0, 1, 2]);
    }

    #[test]
    fn expected_matches_linear_chains() {
        for r in rationals_up_to(24) {
            let alpha = 0.55_f64;
            let beta = region_boundaries(r, &alpha).unwrap().midpoint();
            let chain = preimage_zero_chain(r, &LinearParams::new(alpha, beta).unwrap()).unwrap();
            let mut pts = vec![0.0];
            pts.extend(chain.points.iter().copied());
            let expected = expected_order(r);
            for w in expected.rho.windows(2) {
                assert!(pts[w[0]] < pts[w[1]], "{r}");
            }
            expected.verify().unwrap();
        }
    }

    #[test]
    fn nonlinear_chain_has_linear_order() {
        let (alpha, c) = (0.3_f64, 0.37);
        let f = move |x: f64| alpha * x * x;
        let m = PiecewiseMap::new(0.0, 1.0, c, move |x| f(x) - f(c) + 1.0, move |x| f(x) - f(c)).unwrap();
        let order = preimage_order(&m, 64).unwrap();
        let lin = preimage_order(&linear_in(order.rational, 0.3), 64).unwrap();
        assert_eq!(order.rho, lin.rho);
    }

    #[test]
    fn relation_failure_names_points() {
        let chain = Chain {
            points: vec![0.0, 0.6, 0.3, 0.9, 0.2],
            on_right: vec![false, true, false, true, false],
        };
        let err = chain_order(&chain).unwrap_err();
        assert!(matches!(err, OrderError::Relation { .. }));
        assert!(err.to_string().starts_with("preimage of"));
    }
}
