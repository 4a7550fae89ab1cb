//! Placement games on growing boards: legal-move generation, line-win
//! detection, and uniform-random playouts.
//!
//! Rules are intentionally small: players alternate placing one component of
//! their own type on a playable site, where playability is either any empty
//! site or adjacency to at least `k` occupied sites. A game ends on a line
//! win (where the shape supports lines), when the mover has no legal site,
//! or at the move cap.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{
    Engine, EngineError, ExpansionEvent, InitialBoard, PlacementRule, Setup, Strategy,
};
use crate::state::{ComponentDef, ComponentTable, EndReason, GameState, TrialStatus};
use crate::tiling::{CanonCoord, Shape};

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid game config: {0}")]
    InvalidConfig(String),
    #[error("line wins are not defined for {0:?} boards")]
    UnsupportedLineRule(Shape),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Win condition checked after every placement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WinRule {
    #[default]
    None,
    /// The mover wins with `n` own cells consecutive along a straight lattice
    /// direction. Supported on square and hexagonal boards.
    LineOfN(u8),
}

/// A complete game description; JSON-serializable for the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfig {
    pub name: String,
    pub shape: Shape,
    pub strategy: Strategy,
    #[serde(default = "two")]
    pub players: u8,
    /// Per-player hand size; `null` (or an empty list) means an unlimited
    /// supply with no hand container.
    #[serde(default)]
    pub hand_counts: Vec<Option<u16>>,
    #[serde(default)]
    pub initial_tiles: u32,
    pub placement: PlacementRule,
    #[serde(default)]
    pub win: WinRule,
    #[serde(default = "default_move_cap")]
    pub move_cap: u32,
}

fn two() -> u8 {
    2
}

fn default_move_cap() -> u32 {
    200
}

impl GameConfig {
    pub fn validate(&self) -> Result<(), GameError> {
        if self.players != 2 {
            return Err(GameError::InvalidConfig("exactly two players are supported".into()));
        }
        if self.move_cap == 0 {
            return Err(GameError::InvalidConfig("move cap must be at least 1".into()));
        }
        if let PlacementRule::AdjacentAtLeast { k, .. } = self.placement {
            let max = self.shape.vertex_neighbor_count();
            if k == 0 || k as usize > max {
                return Err(GameError::InvalidConfig(format!(
                    "adjacency requirement {k} outside 1..={max} for {:?}",
                    self.shape
                )));
            }
        }
        if let WinRule::LineOfN(n) = self.win {
            if n < 2 {
                return Err(GameError::InvalidConfig("line length must be at least 2".into()));
            }
            if self.shape == Shape::Triangle {
                return Err(GameError::UnsupportedLineRule(self.shape));
            }
        }
        if !self.hand_counts.is_empty() && self.hand_counts.len() != self.players as usize {
            return Err(GameError::InvalidConfig(
                "hand_counts must list one entry per player".into(),
            ));
        }
        Ok(())
    }

    /// Engine configuration implementing this game.
    pub fn setup(&self) -> Setup {
        let mut defs = Vec::new();
        if self.initial_tiles > 0 {
            defs.push(ComponentDef { index: 1, owner: 0, hand_count: None });
        }
        for player in 1..=self.players {
            let hand_count = self
                .hand_counts
                .get(player as usize - 1)
                .copied()
                .flatten();
            defs.push(ComponentDef { index: defs.len() as u16 + 1, owner: player, hand_count });
        }
        Setup {
            shape: self.shape,
            strategy: self.strategy,
            players: self.players,
            components: ComponentTable::new(defs),
            rule: self.placement,
            initial: InitialBoard::Tiles(self.initial_tiles),
        }
    }

    pub fn with_strategy(&self, strategy: Strategy) -> GameConfig {
        GameConfig { strategy, ..self.clone() }
    }
}

/// Built-in game configurations by name.
///
/// The `andantino-*` family places with a two-neighbor adjacency requirement
/// (first two moves exempt) and wins with a line of five where the shape has
/// straight lines; the `freeplace-*` family allows any empty site and runs to
/// the move cap.
pub fn bundled_config(name: &str) -> Option<GameConfig> {
    let (family, shape) = name.split_once('-')?;
    let shape: Shape = shape.parse().ok()?;
    let config = match family {
        "andantino" => GameConfig {
            name: name.to_string(),
            shape,
            strategy: Strategy::PeriMap,
            players: 2,
            hand_counts: Vec::new(),
            initial_tiles: 0,
            placement: PlacementRule::AdjacentAtLeast { k: 2, bootstrap_moves: 2 },
            win: if shape == Shape::Triangle { WinRule::None } else { WinRule::LineOfN(5) },
            move_cap: 200,
        },
        "freeplace" => GameConfig {
            name: name.to_string(),
            shape,
            strategy: Strategy::PeriMap,
            players: 2,
            hand_counts: Vec::new(),
            initial_tiles: 0,
            placement: PlacementRule::AnyEmpty,
            win: WinRule::None,
            move_cap: 200,
        },
        _ => return None,
    };
    Some(config)
}

pub fn bundled_names() -> Vec<String> {
    let mut names = Vec::new();
    for family in ["andantino", "freeplace"] {
        for shape in ["square", "hexagon", "triangle"] {
            names.push(format!("{family}-{shape}"));
        }
    }
    names
}

/// One legal placement for the player to move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LegalMove {
    pub site: u32,
    pub coord: CanonCoord,
}

/// Player whose turn it is (players alternate, player 1 first).
pub fn player_to_move(state: &GameState) -> u8 {
    (state.moves_played() % 2) as u8 + 1
}

/// All legal placements, ascending by site id — which is canonical
/// coordinate order, because ids are assigned canonically on every board.
/// Empty when the mover is out of supply or no site qualifies.
pub fn legal_moves(engine: &Engine, state: &GameState) -> Vec<LegalMove> {
    let player = player_to_move(state);
    if let Some(def) = engine.setup().components.player_component(player) {
        if def.hand_count.is_some() && state.hands[player as usize - 1].count[0] == 0 {
            return Vec::new();
        }
    }
    state
        .board
        .playable
        .iter()
        .map(|site| LegalMove { site, coord: state.board_topology.coord_of(site) })
        .collect()
}

/// Straight-line axes per shape (each scanned in both directions).
fn line_axes(shape: Shape) -> Result<&'static [(i32, i32)], GameError> {
    match shape {
        Shape::Square => Ok(&[(1, 0), (0, 1), (1, 1), (1, -1)]),
        Shape::Hexagon => Ok(&[(1, 0), (0, 1), (1, -1)]),
        Shape::Triangle => Err(GameError::UnsupportedLineRule(shape)),
    }
}

fn step(coord: CanonCoord, dir: (i32, i32), times: i32) -> CanonCoord {
    match coord {
        CanonCoord::Square { x, y } => {
            CanonCoord::square(x + dir.0 * times, y + dir.1 * times)
        }
        CanonCoord::Hex { q, r } => CanonCoord::hex(q + dir.0 * times, r + dir.1 * times),
        CanonCoord::Tri { .. } => coord,
    }
}

fn owned_at(state: &GameState, coord: CanonCoord, player: u8) -> bool {
    match state.board_topology.cell_id(coord) {
        Some(site) => {
            state.board.is_occupied(site) && state.board.who[site as usize] == player
        }
        None => false,
    }
}

/// Does `player` hold `n` consecutive cells along any straight lattice
/// direction through `through`?
pub fn line_through(
    state: &GameState,
    through: CanonCoord,
    n: u8,
    player: u8,
) -> Result<bool, GameError> {
    let axes = line_axes(through.shape())?;
    for &dir in axes {
        let mut run = 1u32;
        for sign in [1, -1] {
            let mut k = 1;
            while owned_at(state, step(through, dir, sign * k), player) {
                run += 1;
                k += 1;
            }
        }
        if run >= n as u32 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Does `player` hold `n` same-owner cells consecutive along a straight
/// lattice direction anywhere on the board?
pub fn detect_line(state: &GameState, n: u8, player: u8) -> Result<bool, GameError> {
    line_axes(state.board_topology.shape())?;
    for site in 0..state.board_site_count() {
        if !state.board.is_occupied(site) || state.board.who[site as usize] != player {
            continue;
        }
        if line_through(state, state.board_topology.coord_of(site), n, player)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome summary of one playout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayoutResult {
    pub moves: u32,
    pub outcome: EndReason,
    pub final_cells: u32,
    pub occupied: u32,
    pub expansions: Vec<ExpansionEvent>,
}

/// Seeded generator for playout `stream` of a benchmark run.
pub fn playout_rng(base_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(stream);
    rng
}

/// Play uniformly random legal moves on `state` until a win, no legal move,
/// or `move_cap` further moves. Sets the trial status and returns the
/// summary.
pub fn run_random_moves(
    engine: &Engine,
    state: &mut GameState,
    win: WinRule,
    move_cap: u32,
    rng: &mut ChaCha8Rng,
) -> Result<PlayoutResult, GameError> {
    let mut expansions = Vec::new();
    let mut moves = 0u32;
    let outcome = loop {
        if moves >= move_cap {
            break EndReason::MoveCap;
        }
        let player = player_to_move(state);
        if let Some(def) = engine.setup().components.player_component(player) {
            if def.hand_count.is_some() && state.hands[player as usize - 1].count[0] == 0 {
                break EndReason::NoMoves;
            }
        }
        let n_legal = state.board.playable.len();
        if n_legal == 0 {
            break EndReason::NoMoves;
        }
        let site = state.board.playable.select(rng.gen_range(0..n_legal));
        let coord = state.board_topology.coord_of(site);
        let outcome = engine.play_coord(state, player, coord)?;
        if let Some(ev) = outcome.expansion {
            expansions.push(ev);
        }
        moves += 1;
        if let WinRule::LineOfN(n) = win {
            if line_through(state, coord, n, player)? {
                break EndReason::Win(player);
            }
        }
    };
    state.trial.status = TrialStatus::Ended(outcome);
    Ok(PlayoutResult {
        moves,
        outcome,
        final_cells: state.board_site_count(),
        occupied: state.occupied_count(),
        expansions,
    })
}

/// One complete random playout from a fresh initial state (board and
/// topology built anew). Deterministic in `(config, seed)`.
pub fn random_playout(config: &GameConfig, seed: u64) -> Result<PlayoutResult, GameError> {
    random_playout_state(config, seed).map(|(result, _)| result)
}

/// As [`random_playout`], also returning the final state.
pub fn random_playout_state(
    config: &GameConfig,
    seed: u64,
) -> Result<(PlayoutResult, GameState), GameError> {
    config.validate()?;
    let engine = Engine::new(config.setup());
    let mut state = engine.initial_state(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let result = run_random_moves(&engine, &mut state, config.win, config.move_cap, &mut rng)?;
    Ok((result, state))
}
