use std::fmt;

use crate::farey::{char_seq, Rational};

/// A branch of `T_c`: `H` is the left (upper) branch, `G` the right one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    G,
    H,
}

impl Symbol {
    pub fn is_right(self) -> bool {
        self == Symbol::G
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::G => "g",
            Symbol::H => "h",
        })
    }
}

/// The last two factors of a boundary word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    /// `g∘h`, ending the left word.
    GH,
    /// `h∘g`, ending the right word.
    HG,
}

impl Tail {
    fn symbols(self) -> [Symbol; 2] {
        match self {
            Tail::GH => [Symbol::G, Symbol::H],
            Tail::HG => [Symbol::H, Symbol::G],
        }
    }
}

/// A composition `v_1∘v_2∘…∘v_{n−2}∘tail`, written left to right and
/// applied right to left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    pub inner: Vec<Symbol>,
    pub tail: Tail,
}

impl Word {
    /// All factors, outermost first.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut s = self.inner.clone();
        s.extend(self.tail.symbols());
        s
    }

    pub fn len(&self) -> usize {
        self.inner.len() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Applies the word to `x`, innermost factor first.
    pub fn apply<T, L, R>(&self, x: T, upper: L, lower: R) -> T
    where
        L: Fn(T) -> T,
        R: Fn(T) -> T,
    {
        self.symbols().iter().rev().fold(x, |y, s| match s {
            Symbol::H => upper(y),
            Symbol::G => lower(y),
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols().iter().enumerate() {
            if i > 0 {
                f.write_str("∘")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Left and right boundary words of the `l/n` tongue. The inner factor `v_i`
/// is `g` where the characteristic sequence has `k_i = 1` and `h` where
/// `k_i = 0`, for `i = 1 … n−2`.
pub fn boundary_words(r: Rational) -> (Word, Word) {
    let seq = char_seq(r);
    let n = r.period() as i64;
    let inner: Vec<Symbol> = (1..n - 1).map(|i| if seq.at(i) { Symbol::G } else { Symbol::H }).collect();
    (
        Word {
            inner: inner.clone(),
            tail: Tail::GH,
        },
        Word { inner, tail: Tail::HG },
    )
}
