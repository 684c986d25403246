//! Schur multipliers and Bogomolov multipliers of finite permutation groups.
//!
//! The crate takes a group given by permutation generators, computes its
//! second cohomology with finite cyclic coefficients, extracts the Schur
//! multiplier M(G) and the Bogomolov multiplier B0(G), and emits certificates
//! that an independent replayer can check using nothing beyond permutation
//! multiplication, linear algebra over Z/m, and hash comparisons.
//!
//! Organization:
//! - [`perm`], [`bsgs`], [`group`], [`table`]: permutation groups, stabilizer
//!   chains, element enumeration, multiplication tables.
//! - [`perm_ops`]: derived subgroups, centers, conjugacy classes, Sylow
//!   subgroups, abelianization, bicyclic subgroup families.
//! - [`linalg`]: Smith normal form over the integers and over Z/m, kernels,
//!   solving, quotient presentations, finite abelian group bookkeeping.
//! - [`cohomology`]: normalized 2-cocycles, H^2(G, Z/m), the Schur multiplier,
//!   restriction maps, and automorphism actions on cohomology.
//! - [`criteria`]: central extensions, commutator witnesses, the Bogomolov
//!   multiplier, and the reduction shortcuts used by the reports.
//! - [`catalog`]: named constructions (alternating, symmetric, linear groups
//!   over small fields, outer automorphism shapes) and the name parser.
//! - [`certificate`]: certificate schema, hashing, and the replayer.

pub mod bsgs;
pub mod catalog;
pub mod certificate;
pub mod criteria;
pub mod cohomology;
pub mod error;
pub mod group;
pub mod linalg;
pub mod perm;
pub mod perm_ops;
pub mod table;

pub use error::{Error, Result};
pub use group::PermGroup;
pub use perm::Perm;
