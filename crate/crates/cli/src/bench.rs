//! Timed random-playout benchmark: run playouts back to back for a fixed
//! wall-clock budget and report playouts/sec, moves/sec, and totals.
//!
//! The standard protocol rebuilds the full state *and* topology before every
//! playout, for every strategy, so the fixed oversized board pays its
//! construction price each time just like the dynamic boards do. The
//! `reset: false` mode exists to demonstrate why that protocol is mandatory:
//! it keeps one topology and one ever-dirtier state across playouts, which
//! inflates playout counts with degenerate games.

use std::sync::Arc;
use std::time::Instant;

use anyhow::Result;
use boardless_core::engine::{Engine, Strategy};
use boardless_core::game::{playout_rng, run_random_moves, GameConfig};
use boardless_core::state::GameState;
use boardless_core::topology::Topology;

#[derive(Clone, Debug)]
pub struct BenchEntry {
    pub game: String,
    pub strategy: Strategy,
    pub reset: bool,
    pub seed: u64,
    pub wall_secs: f64,
    pub playouts: u64,
    pub moves: u64,
    pub playouts_per_sec: f64,
    pub moves_per_sec: f64,
}

/// Run `seconds` of back-to-back playouts for each strategy. A playout in
/// flight when the clock expires completes and counts; nothing is aborted
/// mid-run.
pub fn run_timed_bench(
    config: &GameConfig,
    strategies: &[Strategy],
    seconds: f64,
    seed: u64,
    reset: bool,
) -> Result<Vec<BenchEntry>> {
    let mut entries = Vec::with_capacity(strategies.len());
    for &strategy in strategies {
        let cfg = config.with_strategy(strategy);
        cfg.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
        let engine = Engine::new(cfg.setup());
        let shared_topology: Option<Arc<Topology>> =
            (!reset).then(|| Arc::new(Topology::build_regular(engine.initial_spec())));
        let mut persistent: Option<GameState> = None;

        let start = Instant::now();
        let mut playouts = 0u64;
        let mut moves = 0u64;
        while start.elapsed().as_secs_f64() < seconds {
            let mut rng = playout_rng(seed, playouts);
            let result = if reset {
                let mut state = engine.initial_state(seed);
                run_random_moves(&engine, &mut state, cfg.win, cfg.move_cap, &mut rng)
                    .map_err(|e| anyhow::anyhow!("{e}"))?
            } else {
                let state = persistent.get_or_insert_with(|| {
                    engine.initial_state_on(
                        Arc::clone(shared_topology.as_ref().expect("no-reset topology")),
                        seed,
                    )
                });
                run_random_moves(&engine, state, cfg.win, cfg.move_cap, &mut rng)
                    .map_err(|e| anyhow::anyhow!("{e}"))?
            };
            playouts += 1;
            moves += result.moves as u64;
        }
        let wall_secs = start.elapsed().as_secs_f64();
        entries.push(BenchEntry {
            game: cfg.name.clone(),
            strategy,
            reset,
            seed,
            wall_secs,
            playouts,
            moves,
            playouts_per_sec: playouts as f64 / wall_secs,
            moves_per_sec: moves as f64 / wall_secs,
        });
    }
    Ok(entries)
}

pub fn bench_csv(entries: &[BenchEntry]) -> String {
    let mut out = String::from(
        "game,strategy,reset,seed,wall_secs,playouts,playouts_per_sec,moves,moves_per_sec\n",
    );
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{:.3},{},{:.3},{},{:.3}\n",
            e.game,
            e.strategy,
            e.reset,
            e.seed,
            e.wall_secs,
            e.playouts,
            e.playouts_per_sec,
            e.moves,
            e.moves_per_sec
        ));
    }
    out
}

pub fn bench_table(entries: &[BenchEntry]) -> String {
    let mut out = format!(
        "{:<22} {:>10} {:>12} {:>12} {:>12}\n",
        "strategy", "playouts", "p/s", "moves", "m/s"
    );
    for e in entries {
        out.push_str(&format!(
            "{:<22} {:>10} {:>12.3} {:>12} {:>12.3}\n",
            format!("{}{}", e.strategy, if e.reset { "" } else { " (no reset)" }),
            e.playouts,
            e.playouts_per_sec,
            e.moves,
            e.moves_per_sec
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use boardless_core::game::bundled_config;

    #[test]
    fn short_bench_reports_consistent_totals() {
        let config = bundled_config("freeplace-square").unwrap();
        let entries =
            run_timed_bench(&config, &[Strategy::ZoneMap], 0.2, 7, true).unwrap();
        assert_eq!(entries.len(), 1);
        let e = &entries[0];
        assert!(e.playouts >= 1);
        assert!(e.wall_secs >= 0.2);
        assert!(e.moves_per_sec >= e.playouts_per_sec, "every playout plays at least one move");
        assert!(e.playouts >= (e.playouts_per_sec * 0.2).floor() as u64);
        let csv = bench_csv(&entries);
        assert!(csv.lines().count() == 2);
        assert!(csv.contains("freeplace-square,ZONE-MAP,true,7,"));
    }
}
