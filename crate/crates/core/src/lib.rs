//! Exact and numerical machinery around Heisenberg-invariant quartics:
//! the finite level-2 Heisenberg group and its action on theta coordinates,
//! sparse exact polynomial algebra, invariant bases and eigenspace
//! restrictions, truncated intersection rings, rank-2 Verlinde numbers, and
//! numerically sampled second-order theta functions with kernel-based
//! reconstruction of the genus-2 and genus-3 invariant quartics.

pub mod acceptance;
pub mod bits;
pub mod chow;
pub mod comb;
pub mod error;
pub mod heis;
pub mod invariants;
pub mod par;
pub mod poly;
pub mod ratmat;
pub mod series;
pub mod thetanum;
pub mod verlinde;

pub use bits::{char_eval, BitVec};
pub use error::{Error, Result};
pub use heis::{weil_pairing, HeisElem, TwoTorsionPoint};
pub use poly::{invariant_subspace, Monomial, ThetaPoly};
pub use ratmat::RatMatrix;
