//! Tongue intervals of one-parameter families `c ↦ T_c`.
//!
//! Two constructions are supported. A *from-g* family fixes a contraction `g`
//! with `g(0) = 0` and sets `h = g + 1`; `T_c` applies `h` left of `c` and `g`
//! from `c` on, acting on `[g(c), h(c)]`. A *from-f* family fixes `f` on
//! `[0, 1]` and shifts it by `f(c)`, so `T_c = f − f(c) + 1` left of `c` and
//! `f − f(c)` from `c` on.
//!
//! For every `l/n` the set of `c` where `T_c` has rotation number `l/n` is an
//! interval `(c_left, c_right)`; its ends are the fixed points of two branch
//! words determined by the characteristic sequence.

mod atlas;
mod family;
mod solve;
mod word;

pub use atlas::{farey_atlas, Atlas, AtlasFailure};
pub use family::{FamilyError, FamilyKind, FamilySpec, BUILTIN_FAMILIES};
pub use solve::{linear_crosscheck, solve_in_tree, solve_tongue, SolveOptions, TongueError, TongueInterval};
pub use word::{boundary_words, Symbol, Tail, Word};
