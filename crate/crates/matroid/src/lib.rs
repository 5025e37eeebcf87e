//! Exact computational tools for matroid structure theory.
//!
//! The crate works with small ground sets (at most 24 elements, default cap
//! 20) encoded as bit masks, and trades asymptotic cleverness for exactness:
//! every operation is an exhaustive or branch-and-bound computation over a
//! rank oracle. It covers:
//!
//! * rank oracles backed by matrices over finite fields, basis lists, or
//!   rank tables, with exact duals and minors ([`matroid`]);
//! * the connectivity function, local connectivity, Tutte linking witnesses,
//!   full closure, and 3-separation analysis ([`connectivity`]);
//! * flowers: verification, classification, tight/loose structure, order,
//!   and k-fracture search ([`flowers`]);
//! * fans, quads, wheels and whirls, and Delta-Y exchange ([`structures`]);
//! * cyclic flats, clones, fixed/cofixed elements via modular-cut
//!   extensions, and strand certificates ([`freedom`]);
//! * k-skeleton testing, element removal profiles, display verification and
//!   chain reduction ([`skeleton`]);
//! * finite-field arithmetic and exact enumeration of inequivalent
//!   representations ([`field`], [`rep`]);
//! * constructors for the named families: uniform matroids, wheels, whirls,
//!   swirls, spikes, and graphic fixtures ([`families`]).

pub mod acceptance;
pub mod catalog;
pub mod connectivity;
pub mod doc;
pub mod dot;
pub mod error;
pub mod families;
pub mod field;
pub mod flowers;
pub mod freedom;
pub mod ground;
pub mod matrix;
pub mod matroid;
pub mod rep;
pub mod skeleton;
pub mod structures;

pub use error::Error;
pub use ground::{GroundSet, Mask};
pub use matroid::{Backend, Matroid, MinorSpec};
