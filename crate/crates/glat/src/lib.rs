//! glat: an exact toolkit for the lattice theory of modular Garside-like
//! groups.
//!
//! The crate has four computational layers and a verification layer on top:
//!
//! - [`finlat`]: finite bounded lattices as cover posets, with modularity,
//!   distributivity, geometricity, centers, direct decompositions, dual
//!   frames and primarity.
//! - [`latmod`]: the coordinatized beam model — R-lattices in Q^delta over
//!   the integers localized at a prime, with exact sums, intersections,
//!   Smith profiles, socle/radical and frozen chains.
//! - [`germ`]: finite Garside germs (the strong order interval with its
//!   partial product), greedy normal forms, the arrow calculus, centers and
//!   duality, frozen powers, semibeam/beam decomposition and Ore fractions.
//! - [`ybe`]: finite non-degenerate involutive set-theoretic Yang-Baxter
//!   solutions, cycle sets, discrete L-algebras with duality, structure
//!   germs and exhaustive enumeration for small sizes.
//! - [`verify`]: theorem-named suites that bind the layers together into
//!   machine checks with structured reports.
//!
//! The `examples/` directory of this crate demonstrates each capability as
//! a runnable program; the `glat` binary exposes the same operations as CLI
//! subcommands.

pub mod cli;
pub mod config;
pub mod finlat;
pub mod germ;
pub mod verify;
pub mod ybe;
pub mod latmod;

pub use config::Config;
