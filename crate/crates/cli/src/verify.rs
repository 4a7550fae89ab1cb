//! Cross-strategy equivalence oracles and per-move invariant sweeps.
//!
//! For every seed, a zone playout generates a random legal move script in
//! canonical coordinates. The same script is then fed to all five strategies
//! in lockstep, checking after every move that:
//!
//! - the replay and direct-mapping flavors of each growth family produce
//!   identical chunk tables, ownership registries, and move histories;
//! - the canonical `(coordinate, component, owner)` occupancy is identical
//!   across every strategy (the fixed board drops out of the comparison once
//!   the script leaves its bounds);
//! - every container stays chunk-coherent, the registry matches a from-
//!   scratch rebuild, expansions preserve occupied coordinates and account
//!   for their added cells, and the unused-tile percentage stays within
//!   bounds (monotonically falling on the fixed board).
//!
//! Afterwards, half the moves are undone and re-played, which must reproduce
//! the never-undone state exactly.

use anyhow::Result;
use boardless_core::engine::{Engine, Strategy};
use boardless_core::game::{bundled_config, random_playout_state, GameConfig};
use boardless_core::state::GameState;
use boardless_core::tiling::{CanonCoord, Shape};

const FAILURE_CAP: usize = 25;

#[derive(Debug, Default)]
pub struct VerifyReport {
    pub seeds: u64,
    pub combos: u64,
    pub moves_checked: u64,
    pub expansions_checked: u64,
    pub undo_checks: u64,
    pub equivalence_failures: Vec<String>,
    pub sweep_violations: Vec<String>,
    pub undo_failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.equivalence_failures.is_empty()
            && self.sweep_violations.is_empty()
            && self.undo_failures.is_empty()
    }

    pub fn summary(&self) -> String {
        let line = |label: &str, failures: &[String]| {
            if failures.is_empty() {
                format!("[PASS] {label}\n")
            } else {
                format!("[FAIL] {label}: {} mismatches, first: {}\n", failures.len(), failures[0])
            }
        };
        let mut out = format!(
            "checked {} seeds x {} game configs: {} moves, {} expansions, {} undo round-trips\n",
            self.seeds,
            self.combos / self.seeds.max(1),
            self.moves_checked,
            self.expansions_checked,
            self.undo_checks
        );
        out.push_str(&line(
            "replay/mapping migration equivalence and cross-strategy occupancy",
            &self.equivalence_failures,
        ));
        out.push_str(&line("chunk, registry, mapping, and metric invariants", &self.sweep_violations));
        out.push_str(&line("undo-then-replay reproduces the original state", &self.undo_failures));
        out
    }
}

struct Runner {
    strategy: Strategy,
    engine: Engine,
    state: GameState,
    alive: bool,
    prev_unused_pct: f64,
}

impl Runner {
    fn new(config: &GameConfig, strategy: Strategy, seed: u64) -> Runner {
        let engine = Engine::new(config.with_strategy(strategy).setup());
        let state = engine.initial_state(seed);
        Runner { strategy, engine, state, alive: true, prev_unused_pct: 100.0 }
    }
}

type OccupancyTriple = (CanonCoord, u16, u8);

fn occupied_triples(state: &GameState) -> Vec<OccupancyTriple> {
    let mut out: Vec<OccupancyTriple> = (0..state.board_site_count())
        .filter(|&s| state.board.is_occupied(s))
        .map(|s| {
            (state.board_topology.coord_of(s), state.board.what[s as usize], state.board.who[s as usize])
        })
        .collect();
    out.sort_unstable_by_key(|&(c, w, o)| (c.canon_key(), w, o));
    out
}

fn push_capped(list: &mut Vec<String>, message: String) {
    if list.len() < FAILURE_CAP {
        list.push(message);
    }
}

/// Run the full oracle suite over `seed_count` seeds, all three shapes, and
/// the bundled open-placement and adjacency games.
pub fn run_verification(seed_count: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport { seeds: seed_count, ..Default::default() };
    for shape in [Shape::Square, Shape::Hexagon, Shape::Triangle] {
        for family in ["freeplace", "andantino"] {
            let config = bundled_config(&format!("{family}-{}", shape.name()))
                .expect("bundled config exists");
            for seed in 0..seed_count {
                verify_one(&config, seed, &mut report)?;
                report.combos += 1;
            }
        }
    }
    Ok(report)
}

fn verify_one(config: &GameConfig, seed: u64, report: &mut VerifyReport) -> Result<()> {
    // Drive one random playout under the zone strategy to obtain a legal
    // move script in canonical coordinates.
    let driver_config = config.with_strategy(Strategy::ZoneMap);
    let (_, driver_state) = random_playout_state(&driver_config, seed)?;
    let script: Vec<(u8, CanonCoord)> = driver_state
        .trial
        .moves
        .iter()
        .map(|mv| (mv.player, driver_state.board_topology.coord_of(mv.to)))
        .collect();

    let mut runners: Vec<Runner> =
        Strategy::ALL.iter().map(|&s| Runner::new(config, s, seed)).collect();
    let label = |strategy: Strategy, i: usize| {
        format!("{}/{}/seed {seed}/move {i}", config.name, strategy.name())
    };

    for (i, &(player, coord)) in script.iter().enumerate() {
        for runner in &mut runners {
            if !runner.alive {
                continue;
            }
            if runner.strategy == Strategy::Base
                && runner.state.board_topology.cell_id(coord).is_none()
            {
                // The script left the fixed board; stop comparing it.
                runner.alive = false;
                continue;
            }
            let mut expected = occupied_triples(&runner.state);
            let outcome = match runner.engine.play_coord(&mut runner.state, player, coord) {
                Ok(outcome) => outcome,
                Err(e) => {
                    push_capped(
                        &mut report.equivalence_failures,
                        format!("{}: move rejected: {e}", label(runner.strategy, i)),
                    );
                    runner.alive = false;
                    continue;
                }
            };
            report.moves_checked += 1;

            // Invariant sweep (chunk coherence + registry agreement).
            if let Err(e) = runner.state.check_coherence() {
                push_capped(
                    &mut report.sweep_violations,
                    format!("{}: {e}", label(runner.strategy, i)),
                );
            }
            // Coordinate preservation: occupancy is the previous occupancy
            // plus the placed piece, regardless of any expansion in between.
            let mover_component = runner.state.trial.moves[i].component;
            expected.push((coord, mover_component, player));
            expected.sort_unstable_by_key(|&(c, w, o)| (c.canon_key(), w, o));
            let actual = occupied_triples(&runner.state);
            if actual != expected {
                push_capped(
                    &mut report.sweep_violations,
                    format!("{}: occupied coordinates changed across the move", label(runner.strategy, i)),
                );
            }
            if let Some(ev) = outcome.expansion {
                report.expansions_checked += 1;
                if ev.old_cells + ev.added != ev.new_cells
                    || ev.new_cells != runner.state.board_site_count()
                {
                    push_capped(
                        &mut report.sweep_violations,
                        format!("{}: expansion accounting broken", label(runner.strategy, i)),
                    );
                }
            }
            // Unused-percentage bounds; monotone non-increase on the fixed
            // board (its cell count never moves while occupancy grows).
            let cells = runner.state.board_site_count() as f64;
            let pct = (cells - runner.state.occupied_count() as f64) / cells * 100.0;
            if !(0.0..=100.0).contains(&pct) {
                push_capped(
                    &mut report.sweep_violations,
                    format!("{}: unused percentage {pct}", label(runner.strategy, i)),
                );
            }
            if runner.strategy == Strategy::Base && pct > runner.prev_unused_pct {
                push_capped(
                    &mut report.sweep_violations,
                    format!("{}: unused percentage rose on the fixed board", label(runner.strategy, i)),
                );
            }
            runner.prev_unused_pct = pct;
        }

        // Replay and direct mapping must agree on everything, move by move.
        for (a, b) in [(1usize, 2usize), (3, 4)] {
            debug_assert!(runners[a].strategy.family() == runners[b].strategy.family());
            if !runners[a].alive || !runners[b].alive {
                continue;
            }
            let (ra, rb) = (&runners[a], &runners[b]);
            if ra.state.board != rb.state.board
                || ra.state.hands != rb.state.hands
                || ra.state.owned != rb.state.owned
                || ra.state.trial != rb.state.trial
            {
                push_capped(
                    &mut report.equivalence_failures,
                    format!(
                        "{}: {} and {} diverged",
                        label(ra.strategy, i),
                        ra.strategy.name(),
                        rb.strategy.name()
                    ),
                );
            }
        }

        // Canonical occupancy must be identical across all live strategies.
        let reference = occupied_triples(&runners[4].state);
        for runner in &runners {
            if !runner.alive || runner.strategy == Strategy::ZoneMap {
                continue;
            }
            if occupied_triples(&runner.state) != reference {
                push_capped(
                    &mut report.equivalence_failures,
                    format!("{}: canonical occupancy diverged", label(runner.strategy, i)),
                );
            }
        }
    }

    // The zone-map lockstep runner must have reproduced the driver exactly.
    if runners[4].alive && runners[4].state.board != driver_state.board {
        push_capped(
            &mut report.equivalence_failures,
            format!("{}/seed {seed}: scripted replay diverged from the driver", config.name),
        );
    }

    // Undo half the moves, replay them, and compare against never undoing.
    for idx in [4usize, 1] {
        let runner = &runners[idx];
        if !runner.alive || script.is_empty() {
            continue;
        }
        let n = runner.state.moves_played();
        let k = n / 2;
        report.undo_checks += 1;
        let mut rewound = match runner.engine.undo(&runner.state, k) {
            Ok(s) => s,
            Err(e) => {
                push_capped(
                    &mut report.undo_failures,
                    format!("{}: undo failed: {e}", label(runner.strategy, n as usize)),
                );
                continue;
            }
        };
        let mut replay_ok = true;
        for &(player, coord) in &script[(n - k) as usize..] {
            if let Err(e) = runner.engine.play_coord(&mut rewound, player, coord) {
                push_capped(
                    &mut report.undo_failures,
                    format!("{}: replay after undo failed: {e}", label(runner.strategy, n as usize)),
                );
                replay_ok = false;
                break;
            }
        }
        if replay_ok
            && (rewound.board != runner.state.board
                || rewound.owned != runner.state.owned
                || rewound.trial.moves != runner.state.trial.moves)
        {
            push_capped(
                &mut report.undo_failures,
                format!("{}: undo+replay differs from never undoing", label(runner.strategy, n as usize)),
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_verification_sweep_is_clean() {
        let report = run_verification(3).unwrap();
        assert!(report.passed(), "{}", report.summary());
        assert!(report.moves_checked > 0);
        assert!(report.expansions_checked > 0);
        assert_eq!(report.combos, 18);
    }
}
