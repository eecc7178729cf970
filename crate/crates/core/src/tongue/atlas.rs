use std::collections::HashMap;

use super::family::FamilySpec;
use super::solve::{mediant_bracket, solve_tongue, SolveOptions, TongueError, TongueInterval};
use crate::farey::{stern_brocot, Rational};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct AtlasFailure {
    pub rational: Rational,
    pub error: TongueError,
}

/// Solved tongues of a family down to some Stern–Brocot depth.
#[derive(Debug, Clone, PartialEq)]
pub struct Atlas<T> {
    /// Sorted by `c_left`.
    pub tongues: Vec<TongueInterval<T>>,
    pub failures: Vec<AtlasFailure>,
}

impl<T: Real> Atlas<T> {
    pub fn get(&self, r: Rational) -> Option<&TongueInterval<T>> {
        self.tongues.iter().find(|t| t.rational == r)
    }

    /// Tongue containing `c`, if any.
    pub fn locate(&self, c: T) -> Option<&TongueInterval<T>> {
        self.tongues.iter().find(|t| t.contains(c))
    }
}

/// Solves every mediant down to `depth`, each inside the gap left by its
/// two parents. A failed tongue is recorded and its descendants fail with a
/// missing parent.
pub fn farey_atlas<T: Real>(fam: &FamilySpec<T>, depth: u32, opts: &SolveOptions<T>) -> Atlas<T> {
    let mut solved: HashMap<Rational, TongueInterval<T>> = HashMap::new();
    let mut failures = Vec::new();
    for node in stern_brocot(depth) {
        let r = node.rational;
        let result =
            mediant_bracket(fam, r, node.left, node.right, &solved, opts.tol).and_then(|bracket| solve_tongue(fam, r, bracket, opts));
        match result {
            Ok(t) => {
                solved.insert(r, t);
            }
            Err(error) => failures.push(AtlasFailure { rational: r, error }),
        }
    }
    let mut tongues: Vec<_> = solved.into_values().collect();
    tongues.sort_by(|a, b| a.c_left.partial_cmp(&b.c_left).expect("finite endpoints"));
    Atlas { tongues, failures }
}
