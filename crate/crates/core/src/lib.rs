//! Engine for boardless tile games whose board grows during play.
//!
//! The crate is organized bottom-up:
//!
//! - [`tiling`]: lattice geometry of square, hexagonal, and triangular
//!   tilings, including the ring-expansion and index-remapping formulas.
//! - [`topology`]: materialized boards — cells, vertices, edges, adjacency,
//!   and perimeter classification.
//! - [`state`]: container states (chunk arrays), ownership registry, moves,
//!   and trials.
//! - [`engine`]: board-growth strategies, state migration by direct mapping
//!   or move re-application, undo by replay.
//! - [`game`]: placement rules, win detection, and uniform-random playouts.

pub mod engine;
pub mod game;
pub mod state;
pub mod tiling;
pub mod topology;
