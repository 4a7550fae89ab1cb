//! Benchmark and reproduction harness for the boardless engine: scripted
//! growth scenarios, timed random-playout benchmarks, and the cross-strategy
//! verification suite.

pub mod bench;
pub mod growth;
pub mod scenario;
pub mod verify;
