//! Information sets for first- and second-order generalized Reed-Muller
//! codes, computed directly from the parameters (q, m, order) through the
//! defining-set machinery, and independently certified by an exact rank
//! oracle over the base field.
//!
//! The pipeline:
//!
//! 1. pick a coprime split n = q^m - 1 = r1 * r2 ([`infoset::find_decompositions`]),
//! 2. map exponents onto the r1 x r2 grid ([`cosets::CrtIso`]),
//! 3. compute check positions for the dual code's punctured defining set,
//!    either with the general M/f/g engine ([`infoset::gamma_general`]) or the
//!    closed forms ([`infoset::gamma_first_order`], [`infoset::gamma_second_order`]),
//! 4. pull the grid back to exponents and read off the two information sets
//!    ([`infoset::to_information_sets`]),
//! 5. certify both by rank over GF(q) ([`code::is_information_set`]).
//!
//! ```
//! use grm_infosets::cosets::CrtIso;
//! use grm_infosets::infoset::{gamma_first_order, to_information_sets, GrmParams};
//!
//! let gamma = gamma_first_order(3, 3, 13, 2)?;
//! let iso = CrtIso::canonical(13, 2)?;
//! assert_eq!(gamma.preimage(&iso)?, vec![0, 2, 14]);
//!
//! let code = GrmParams { q: 3, m: 3, rho: 1 };
//! let (low, _dual) = to_information_sets(&gamma, &iso, code)?;
//! // {0, alpha^0, alpha^2, alpha^14} as positions into (0, alpha^0, ..., alpha^25)
//! assert_eq!(low.positions, vec![0, 1, 3, 15]);
//! # Ok::<(), grm_infosets::Error>(())
//! ```

pub mod cli;
pub mod code;
pub mod cosets;
pub mod error;
pub mod field;
pub mod infoset;

pub use error::{Error, Result};
