//! Exact Farey / Stern–Brocot algebra and rational characteristic sequences.
//!
//! Everything here is integer arithmetic. A tongue is indexed by a reduced
//! fraction `wraps / period`; its characteristic sequence records, for each
//! point of the periodic orbit, whether the orbit takes the wrapping branch.

use std::cmp::Ordering;
use std::fmt;

use bitvec::prelude::*;
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FareyError {
    #[error("invalid rational {wraps}/{period}: {reason}")]
    InvalidRational {
        period: u32,
        wraps: u32,
        reason: &'static str,
    },
    #[error("{left} and {right} are not ordered Farey neighbours (determinant {determinant}, expected 1)")]
    NotNeighbours {
        left: Fraction,
        right: Fraction,
        determinant: i64,
    },
}

/// A reduced fraction `wraps / period` with `period >= 2` and
/// `1 <= wraps < period`: the rotation number of a tongue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    period: u32,
    wraps: u32,
}

impl Rational {
    pub fn new(period: u32, wraps: u32) -> Result<Self, FareyError> {
        let reject = |reason| FareyError::InvalidRational {
            period,
            wraps,
            reason,
        };
        if period < 2 {
            return Err(reject("period must be at least 2"));
        }
        if wraps == 0 || wraps >= period {
            return Err(reject("need 1 <= wraps < period"));
        }
        if period.gcd(&wraps) != 1 {
            return Err(reject("wraps and period are not coprime"));
        }
        Ok(Self { period, wraps })
    }

    /// Number of points on the periodic orbit (`n`).
    pub fn period(self) -> u32 {
        self.period
    }

    /// Number of orbit points on the wrapping branch (`l`).
    pub fn wraps(self) -> u32 {
        self.wraps
    }

    pub fn fraction(self) -> Fraction {
        Fraction {
            den: self.period,
            num: self.wraps,
        }
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.wraps) / f64::from(self.period)
    }

    /// Smallest `t >= 1` with `t * wraps ≡ 1 (mod period)`.
    pub fn lhat(self) -> u32 {
        let n = u64::from(self.period);
        let l = u64::from(self.wraps);
        (1..=n)
            .find(|t| (t * l) % n == 1 % n)
            .expect("coprime wraps has an inverse") as u32
    }

    pub fn char_seq(self) -> CharSeq {
        CharSeq::of(self.fraction())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.wraps, self.period)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.fraction().cmp(&other.fraction())
    }
}

/// A node of the Stern–Brocot tree between `0/1` and `1/1`, boundaries
/// included. Unlike [`Rational`] this admits `0/1` and `1/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: u32,
    pub den: u32,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    pub fn mediant(self, other: Fraction) -> Fraction {
        Fraction {
            num: self.num + other.num,
            den: self.den + other.den,
        }
    }

    /// `den * other.num - other.den * num`; equals 1 exactly when `self`
    /// and `other` are Farey neighbours with `self < other`.
    pub fn determinant(self, other: Fraction) -> i64 {
        i64::from(self.den) * i64::from(other.num) - i64::from(other.den) * i64::from(self.num)
    }

    pub fn rational(self) -> Option<Rational> {
        Rational::new(self.den, self.num).ok()
    }

    pub fn is_boundary(self) -> bool {
        self == Self::ZERO || self == Self::ONE
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (u64::from(self.num) * u64::from(other.den))
            .cmp(&(u64::from(other.num) * u64::from(self.den)))
            .then(self.den.cmp(&other.den))
    }
}

/// Rational characteristic sequence `k_0 … k_{n-1}`, extended periodically
/// to all integer indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharSeq {
    fraction: Fraction,
    bits: BitVec<u64, Lsb0>,
}

impl CharSeq {
    /// `k_m = ⌊(m+1)l/n⌋ − ⌊ml/n⌋` for `m = 0 … n−1`. The boundary nodes give
    /// `(0)` for `0/1` and `(1)` for `1/1`.
    pub fn of(fraction: Fraction) -> Self {
        let n = u64::from(fraction.den);
        let l = u64::from(fraction.num);
        let bits = (0..n)
            .map(|m| ((m + 1) * l) / n - (m * l) / n == 1)
            .collect();
        Self { fraction, bits }
    }

    pub fn fraction(&self) -> Fraction {
        self.fraction
    }

    /// The tongue index, or `None` for the boundary sequences.
    pub fn rational(&self) -> Option<Rational> {
        self.fraction.rational()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `k_m` for any integer `m`, using `k_{m±n} = k_m`.
    pub fn at(&self, m: i64) -> bool {
        let n = self.bits.len() as i64;
        self.bits[m.rem_euclid(n) as usize]
    }

    /// `k_m` as 0 or 1.
    pub fn bit(&self, m: i64) -> u8 {
        u8::from(self.at(m))
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().by_vals()
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    pub fn ones(&self) -> usize {
        self.bits.count_ones()
    }
}

impl fmt::Display for CharSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Sequence of `r`.
pub fn char_seq(r: Rational) -> CharSeq {
    r.char_seq()
}

/// Concatenates the sequences of ordered Farey neighbours `a < b` into the
/// sequence of their mediant.
pub fn mediant_concat(a: &CharSeq, b: &CharSeq) -> Result<CharSeq, FareyError> {
    let determinant = a.fraction.determinant(b.fraction);
    if determinant != 1 {
        return Err(FareyError::NotNeighbours {
            left: a.fraction,
            right: b.fraction,
            determinant,
        });
    }
    let mut bits = a.bits.clone();
    bits.extend_from_bitslice(&b.bits);
    Ok(CharSeq {
        fraction: a.fraction.mediant(b.fraction),
        bits,
    })
}

/// A mediant together with the two Farey parents it was formed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    pub rational: Rational,
    /// Lower parent (smaller rotation number).
    pub left: Fraction,
    /// Upper parent (larger rotation number).
    pub right: Fraction,
    /// 1 for `1/2`.
    pub depth: u32,
}

/// All mediants reachable from `0/1, 1/1` in at most `depth` steps, level by
/// level, ascending within a level.
pub fn stern_brocot(depth: u32) -> Vec<TreeNode> {
    let mut out = Vec::new();
    let mut level = vec![(Fraction::ZERO, Fraction::ONE)];
    for d in 1..=depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for (left, right) in level {
            let m = left.mediant(right);
            out.push(TreeNode {
                rational: m.rational().expect("interior mediants are valid"),
                left,
                right,
                depth: d,
            });
            next.push((left, m));
            next.push((m, right));
        }
        level = next;
    }
    out
}

/// Parents of `r` in the Stern–Brocot tree, found by descent from the root.
/// Also returns the chain of ancestors from `1/2` down to (excluding) `r`.
pub fn ancestry(r: Rational) -> (Fraction, Fraction, Vec<Rational>) {
    let target = r.fraction();
    let (mut left, mut right) = (Fraction::ZERO, Fraction::ONE);
    let mut path = Vec::new();
    loop {
        let m = left.mediant(right);
        match target.cmp(&m) {
            Ordering::Equal => return (left, right, path),
            Ordering::Less => right = m,
            Ordering::Greater => left = m,
        }
        path.push(m.rational().expect("interior mediants are valid"));
    }
}

/// Every valid `(n, l)` with `2 <= n <= max_period`, ordered by period then
/// numerator.
pub fn rationals_up_to(max_period: u32) -> impl Iterator<Item = Rational> {
    (2..=max_period).flat_map(|n| (1..n).filter_map(move |l| Rational::new(n, l).ok()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u32, l: u32) -> Rational {
        Rational::new(n, l).unwrap()
    }

    #[test]
    fn sequences_by_hand() {
        assert_eq!(char_seq(r(2, 1)).to_vec(), [0, 1]);
        assert_eq!(char_seq(r(5, 2)).to_vec(), [0, 0, 1, 0, 1]);
        assert_eq!(char_seq(r(3, 2)).to_vec(), [0, 1, 1]);
    }

    #[test]
    fn periodic_extension() {
        let s = char_seq(r(5, 2));
        assert_eq!(s.bit(7), 1);
        assert_eq!(s.bit(0), 0);
        assert_eq!(s.bit(-1), 1);
        assert_eq!(s.bit(-1), s.bit(4));
    }

    #[test]
    fn inverse_of_wraps() {
        assert_eq!(r(5, 2).lhat(), 3);
        assert_eq!(r(9, 1).lhat(), 1);
        assert_eq!(r(7, 3).lhat(), 5);
        assert_eq!(r(2, 1).lhat(), 1);
    }

    #[test]
    fn invalid_rationals_rejected() {
        assert!(matches!(
            Rational::new(4, 2),
            Err(FareyError::InvalidRational { .. })
        ));
        assert!(Rational::new(3, 3).is_err());
        assert!(Rational::new(1, 0).is_err());
        assert!(Rational::new(5, 0).is_err());
    }

    #[test]
    fn concatenation_examples() {
        let m = mediant_concat(&char_seq(r(3, 1)), &char_seq(r(2, 1))).unwrap();
        assert_eq!(m, char_seq(r(5, 2)));

        let one = CharSeq::of(Fraction::ONE);
        let m = mediant_concat(&char_seq(r(2, 1)), &one).unwrap();
        assert_eq!(m, char_seq(r(3, 2)));

        let zero = CharSeq::of(Fraction::ZERO);
        assert_eq!(zero.to_vec(), [0]);
        assert_eq!(mediant_concat(&zero, &one).unwrap(), char_seq(r(2, 1)));
    }

    #[test]
    fn concatenation_rejects_wrong_order() {
        let err = mediant_concat(&char_seq(r(3, 2)), &char_seq(r(2, 1))).unwrap_err();
        assert_eq!(
            err,
            FareyError::NotNeighbours {
                left: r(3, 2).fraction(),
                right: r(2, 1).fraction(),
                determinant: -1,
            }
        );
    }

    #[test]
    fn tree_levels() {
        let names = |d| {
            stern_brocot(d)
                .into_iter()
                .filter(|t| t.depth == d)
                .map(|t| (t.rational.period(), t.rational.wraps()))
                .collect::<Vec<_>>()
        };
        assert_eq!(names(1), [(2, 1)]);
        assert_eq!(names(2), [(3, 1), (3, 2)]);
        assert_eq!(names(3), [(4, 1), (5, 2), (5, 3), (4, 3)]);
        let first = stern_brocot(1)[0];
        assert_eq!((first.left, first.right), (Fraction::ZERO, Fraction::ONE));
        assert_eq!(stern_brocot(10).len(), 1023);
    }

    #[test]
    fn ancestry_recovers_parents() {
        for node in stern_brocot(8) {
            let (left, right, path) = ancestry(node.rational);
            assert_eq!((left, right), (node.left, node.right));
            assert_eq!(path.len() as u32, node.depth - 1);
        }
    }
}
