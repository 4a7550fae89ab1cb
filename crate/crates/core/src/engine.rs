//! Board-growth strategies and state migration.
//!
//! Five strategies are supported: a fixed oversized board (`Base`), full-ring
//! growth (`Peri*`), and local growth around the placed cell (`Zone*`). The
//! `*Re` variants migrate state after an expansion by resetting the board and
//! re-applying the move history; the `*Map` variants remap every index
//! directly. Both must produce identical states, which the test suite holds
//! them to.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::state::{ComponentTable, ContainerState, GameState, Move, StateError};
use crate::tiling::{
    perimeter_added_cells, perimeter_map_index, row_of_coord, square_origin, tri_anchor,
    BoardSpec, CanonCoord, Shape, TilingError,
};
use crate::topology::{CellId, Topology, TopologyError};

/// Board-management strategy.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Strategy {
    Base,
    PeriRe,
    PeriMap,
    ZoneRe,
    ZoneMap,
}

/// How a strategy grows the board, ignoring the migration flavor.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GrowthFamily {
    Fixed,
    Perimeter,
    Zone,
}

impl Strategy {
    pub const ALL: [Strategy; 5] =
        [Strategy::Base, Strategy::PeriRe, Strategy::PeriMap, Strategy::ZoneRe, Strategy::ZoneMap];

    pub fn family(self) -> GrowthFamily {
        match self {
            Strategy::Base => GrowthFamily::Fixed,
            Strategy::PeriRe | Strategy::PeriMap => GrowthFamily::Perimeter,
            Strategy::ZoneRe | Strategy::ZoneMap => GrowthFamily::Zone,
        }
    }

    pub fn migrates_by_replay(self) -> bool {
        matches!(self, Strategy::PeriRe | Strategy::ZoneRe)
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Base => "BASE",
            Strategy::PeriRe => "PERI-RE",
            Strategy::PeriMap => "PERI-MAP",
            Strategy::ZoneRe => "ZONE-RE",
            Strategy::ZoneMap => "ZONE-MAP",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, EngineError> {
        match s.to_ascii_uppercase().replace('_', "-").as_str() {
            "BASE" => Ok(Strategy::Base),
            "PERI-RE" => Ok(Strategy::PeriRe),
            "PERI-MAP" => Ok(Strategy::PeriMap),
            "ZONE-RE" => Ok(Strategy::ZoneRe),
            "ZONE-MAP" => Ok(Strategy::ZoneMap),
            _ => Err(EngineError::UnknownStrategy(s.to_string())),
        }
    }
}

/// Old-to-new cell id translation produced by one expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexMapping {
    /// Indexed by old cell id.
    pub old_to_new: Vec<CellId>,
    /// New cell ids not in the range of `old_to_new`, ascending.
    pub added: Vec<CellId>,
    pub new_cell_count: u32,
}

impl IndexMapping {
    pub fn identity(n: u32) -> Self {
        IndexMapping { old_to_new: (0..n).collect(), added: Vec::new(), new_cell_count: n }
    }

    pub fn map(&self, old: CellId) -> CellId {
        self.old_to_new[old as usize]
    }

    /// Injectivity and coverage: mapped ids and added ids partition the new
    /// id space.
    pub fn validate(&self) -> Result<(), EngineError> {
        let n = self.new_cell_count as usize;
        let mut seen = vec![false; n];
        for &id in self.old_to_new.iter().chain(self.added.iter()) {
            if id as usize >= n || seen[id as usize] {
                return Err(EngineError::MappingInvalid(format!(
                    "new id {id} duplicated or out of range {n}"
                )));
            }
            seen[id as usize] = true;
        }
        if self.old_to_new.len() + self.added.len() != n {
            return Err(EngineError::MappingInvalid(format!(
                "{} mapped + {} added != {n} cells",
                self.old_to_new.len(),
                self.added.len()
            )));
        }
        Ok(())
    }
}

/// Record of one board expansion, kept per playout for diagnostics and the
/// expansion trace (serialized as one JSON object per line).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpansionEvent {
    /// Index the triggering move takes in the trial.
    pub move_index: u32,
    pub strategy: Strategy,
    pub old_cells: u32,
    pub new_cells: u32,
    pub added: u32,
}

/// Placement legality rule, which also defines the `playable` chunk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementRule {
    /// Any empty board site.
    AnyEmpty,
    /// Empty sites with at least `k` occupied vertex-adjacent neighbors
    /// (edge-adjacent on hexagons, where the two notions coincide). The
    /// first `bootstrap_moves` moves relax `k` to the number of occupied
    /// sites, so openings are playable (first move anywhere, second next to
    /// the first).
    AdjacentAtLeast { k: u8, bootstrap_moves: u32 },
}

/// How the starting board is sized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialBoard {
    /// Sized from the initial tile count: shape default when zero, else just
    /// large enough for a centered line of tiles plus all their neighbors.
    Tiles(u32),
    /// A single cell; growth benchmarks start here.
    OneCell,
}

/// Static configuration of an engine: everything but the evolving state.
#[derive(Clone, Debug)]
pub struct Setup {
    pub shape: Shape,
    pub strategy: Strategy,
    pub players: u8,
    pub components: ComponentTable,
    pub rule: PlacementRule,
    pub initial: InitialBoard,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("topology is not a full regular board")]
    NotRegular,
    #[error("coordinate {0:?} is not on the board")]
    OffBoard(CanonCoord),
    #[error("move to site {0} is not legal here")]
    IllegalMove(u32),
    #[error("player {0} has no component to place")]
    NoComponent(u8),
    #[error("mapping size {mapping} does not match board size {board}")]
    SizeMismatch { mapping: usize, board: usize },
    #[error("invalid index mapping: {0}")]
    MappingInvalid(String),
    #[error("move re-application failed, engine state is inconsistent: {0}")]
    ReplayFailure(String),
    #[error("cannot undo {k} of {n} moves")]
    UndoOutOfRange { k: u32, n: u32 },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

/// Result of playing one move.
#[derive(Clone, Copy, Debug)]
pub struct PlayOutcome {
    /// Site the move landed on, in the (possibly just expanded) board.
    pub site: u32,
    pub expansion: Option<ExpansionEvent>,
}

/// Starting board dimensions for a game with `initial_tiles` pre-placed
/// tiles assumed to form a centered straight line.
pub fn initial_board(shape: Shape, initial_tiles: u32) -> BoardSpec {
    let n = initial_tiles;
    let dim = if n == 0 {
        shape.default_initial_dim()
    } else {
        match shape {
            Shape::Square => n + 2,
            Shape::Hexagon => (n + 4) / 2,
            Shape::Triangle => n + 3,
        }
    };
    BoardSpec { shape, dim }
}

/// Board sites of a centered straight line of `n` initial tiles on the given
/// regular board.
pub fn initial_tile_coords(spec: BoardSpec, n: u32) -> Vec<CanonCoord> {
    let n = n as i32;
    let start = -((n - 1) / 2);
    match spec.shape {
        Shape::Square => {
            let o = square_origin(spec.dim);
            let y = o + (spec.dim as i32 - 1) / 2;
            (0..n).map(|i| CanonCoord::square(start + i, y)).collect()
        }
        Shape::Hexagon => (0..n).map(|i| CanonCoord::hex(start + i, 0)).collect(),
        Shape::Triangle => {
            // The interior of a dimension-(n+3) board is exactly the
            // dimension-n sub-board; a centered line on its bottom band keeps
            // every vertex neighbor on the board.
            let (ax, ay) = tri_anchor(n as u32);
            let first = (n - 1) / 2;
            (0..n).map(|i| CanonCoord::tri(ax + first + i, ay)).collect()
        }
    }
}

/// Grow a full ring around a regular board. Returns the next regular board
/// and the index mapping computed by the per-shape remap formula.
pub fn perimeter_expand(t: &Topology) -> Result<(Topology, IndexMapping), EngineError> {
    let dim = t.regular_dim().ok_or(EngineError::NotRegular)?;
    let shape = t.shape();
    let spec = BoardSpec { shape, dim };
    let (added_count, new_dim) = perimeter_added_cells(shape, dim);
    let new_topo = Topology::build_regular(BoardSpec { shape, dim: new_dim });
    let n_new = new_topo.cell_count() as u32;

    let mut old_to_new = Vec::with_capacity(t.cell_count());
    let mut covered = vec![false; n_new as usize];
    for id in 0..t.cell_count() as CellId {
        let coord = t.coord_of(id);
        let row = row_of_coord(spec, coord);
        let new_id = perimeter_map_index(shape, dim, row, id)?;
        debug_assert_eq!(new_topo.coord_of(new_id), coord, "formula disagrees with geometry");
        covered[new_id as usize] = true;
        old_to_new.push(new_id);
    }
    let added: Vec<CellId> =
        (0..n_new).filter(|&id| !covered[id as usize]).collect();
    debug_assert_eq!(added.len() as u64, added_count);

    let mapping = IndexMapping { old_to_new, added, new_cell_count: n_new };
    mapping.validate()?;
    Ok((new_topo, mapping))
}

/// Grow the board by the missing vertex neighbors of `placed`. When every
/// neighbor already exists the result is the identity expansion. The mapping
/// follows the traversal-counter rule: walking the new board in canonical
/// order, each pre-existing cell's new index is its old index plus the number
/// of added cells passed so far.
pub fn zone_expand(
    t: &Topology,
    placed: CanonCoord,
) -> Result<(Topology, IndexMapping), EngineError> {
    if t.cell_id(placed).is_none() {
        return Err(EngineError::OffBoard(placed));
    }
    let missing: Vec<CanonCoord> =
        placed.vertex_neighbors().into_iter().filter(|&c| t.cell_id(c).is_none()).collect();
    if missing.is_empty() {
        return Ok((t.clone(), IndexMapping::identity(t.cell_count() as u32)));
    }
    let new_topo = t.extend_with_cells(&missing)?;
    let n_new = new_topo.cell_count() as u32;
    let mut old_to_new = vec![0; t.cell_count()];
    let mut added = Vec::with_capacity(missing.len());
    let mut counter = 0u32;
    for new_id in 0..n_new {
        let coord = new_topo.coord_of(new_id);
        match t.cell_id(coord) {
            Some(old_id) => {
                debug_assert_eq!(old_id + counter, new_id, "counter rule broken");
                old_to_new[old_id as usize] = old_id + counter;
            }
            None => {
                counter += 1;
                added.push(new_id);
            }
        }
    }
    let mapping = IndexMapping { old_to_new, added, new_cell_count: n_new };
    mapping.validate()?;
    Ok((new_topo, mapping))
}

fn check_sizes(
    state: &GameState,
    new_topology: &Topology,
    mapping: &IndexMapping,
) -> Result<(), EngineError> {
    if mapping.old_to_new.len() != state.board.site_count() {
        return Err(EngineError::SizeMismatch {
            mapping: mapping.old_to_new.len(),
            board: state.board.site_count(),
        });
    }
    if mapping.new_cell_count as usize != new_topology.cell_count() {
        return Err(EngineError::SizeMismatch {
            mapping: mapping.new_cell_count as usize,
            board: new_topology.cell_count(),
        });
    }
    Ok(())
}

/// Translate every site index held outside the board container: trial moves,
/// initial-tile records, and the ownership registry. Hand sites keep their
/// hand but move to the new global offset.
fn remap_indices(state: &mut GameState, mapping: &IndexMapping) {
    let old_count = state.board_site_count();
    let new_count = mapping.new_cell_count;
    let translate = |site: u32| -> u32 {
        if site < old_count {
            mapping.old_to_new[site as usize]
        } else {
            new_count + (site - old_count)
        }
    };
    for mv in &mut state.trial.moves {
        mv.from = mv.from.map(translate);
        mv.to = translate(mv.to);
    }
    for site in &mut state.initial_sites {
        *site = translate(*site);
    }
    state.owned.remap(|s| Some(translate(s)));
}

/// Migrate state onto an expanded board by direct remapping: chunks are
/// carried site-by-site, added cells join `empty`, ownership and move history
/// are translated, and nothing is re-executed. Hand containers are untouched.
pub fn migrate_state_map(
    state: &mut GameState,
    new_topology: Arc<Topology>,
    mapping: &IndexMapping,
) -> Result<(), EngineError> {
    check_sizes(state, &new_topology, mapping)?;
    remap_indices(state, mapping);

    let old = std::mem::replace(&mut state.board, ContainerState::new_empty(0));
    let mut board = ContainerState::new_empty(mapping.new_cell_count as usize);
    for old_site in 0..old.site_count() as u32 {
        if old.empty.contains(old_site) {
            continue;
        }
        let new_site = mapping.map(old_site);
        board.empty.remove(new_site);
        board.what[new_site as usize] = old.what[old_site as usize];
        board.who[new_site as usize] = old.who[old_site as usize];
        board.count[new_site as usize] = old.count[old_site as usize];
        board.state[new_site as usize] = old.state[old_site as usize];
    }
    // Playability is rule-defined; callers recompute it after the full move
    // settles. Open placement over the empties is the carried default.
    board.playable = board.empty.clone();
    state.board = board;
    state.board_topology = new_topology;
    Ok(())
}

/// Migrate state onto an expanded board the way undo works: reset the board
/// container to initial tiles only, then re-apply every recorded move (with
/// translated indices) one by one. Equivalent in outcome to
/// [`migrate_state_map`]; a re-applied move failing means the engine broke an
/// invariant and is surfaced as [`EngineError::ReplayFailure`].
pub fn migrate_state_replay(
    state: &mut GameState,
    new_topology: Arc<Topology>,
    mapping: &IndexMapping,
) -> Result<(), EngineError> {
    check_sizes(state, &new_topology, mapping)?;
    remap_indices(state, mapping);

    let tile_component = state.components.owned_by(0).first().copied();
    state.board = ContainerState::new_empty(mapping.new_cell_count as usize);
    state.board.playable = state.board.empty.clone();
    state.board_topology = new_topology;
    state.owned.strip_board_sites(mapping.new_cell_count);
    let initial = state.initial_sites.clone();
    state.initial_sites.clear();
    if let Some(comp) = tile_component {
        for site in initial {
            state
                .place_initial_tile(site, comp)
                .map_err(|e| EngineError::ReplayFailure(format!("initial tile {site}: {e}")))?;
        }
    }
    let moves = state.trial.moves.clone();
    for (i, mv) in moves.iter().enumerate() {
        state
            .place_on_board(mv.to, mv.component, mv.player)
            .map_err(|e| EngineError::ReplayFailure(format!("move {i} to {}: {e}", mv.to)))?;
    }
    Ok(())
}

/// The game engine: strategy dispatch, playable-set maintenance, and replay.
#[derive(Clone, Debug)]
pub struct Engine {
    setup: Setup,
}

impl Engine {
    pub fn new(setup: Setup) -> Engine {
        if let PlacementRule::AdjacentAtLeast { k, .. } = setup.rule {
            assert!(
                (k as usize) <= setup.shape.vertex_neighbor_count(),
                "adjacency requirement {k} exceeds neighbor count"
            );
        }
        Engine { setup }
    }

    pub fn setup(&self) -> &Setup {
        &self.setup
    }

    /// Board spec the game starts on under this strategy.
    pub fn initial_spec(&self) -> BoardSpec {
        if self.setup.strategy == Strategy::Base {
            return BoardSpec {
                shape: self.setup.shape,
                dim: self.setup.shape.fixed_board_dim(),
            };
        }
        match self.setup.initial {
            InitialBoard::OneCell => BoardSpec { shape: self.setup.shape, dim: 1 },
            InitialBoard::Tiles(n) => initial_board(self.setup.shape, n),
        }
    }

    /// Fresh state: topology built, initial tiles placed, playable set ready.
    pub fn initial_state(&self, seed: u64) -> GameState {
        let spec = self.initial_spec();
        let topology = Arc::new(Topology::build_regular(spec));
        self.initial_state_on(topology, seed)
    }

    /// Fresh state on an existing topology (the no-reset benchmark mode
    /// reuses one topology across playouts).
    pub fn initial_state_on(&self, topology: Arc<Topology>, seed: u64) -> GameState {
        let mut state =
            GameState::new(topology, self.setup.players, self.setup.components.clone(), seed);
        if let InitialBoard::Tiles(n) = self.setup.initial {
            if n > 0 {
                let tile_component = self.setup.components.owned_by(0)[0];
                // Tiles are placeable by construction of the initial spec.
                state.board.playable = state.board.empty.clone();
                let spec = BoardSpec { shape: self.setup.shape, dim: initial_board(self.setup.shape, n).dim };
                for coord in initial_tile_coords(spec, n) {
                    let site = state
                        .board_topology
                        .cell_id(coord)
                        .expect("initial tile fits the initial board");
                    state.place_initial_tile(site, tile_component).expect("initial tile placement");
                }
            }
        }
        self.recompute_playable(&mut state);
        state
    }

    /// Adjacency requirement currently in force (bootstrap moves relax it).
    fn required_adjacency(&self, state: &GameState) -> u8 {
        match self.setup.rule {
            PlacementRule::AnyEmpty => 0,
            PlacementRule::AdjacentAtLeast { k, bootstrap_moves } => {
                if state.moves_played() < bootstrap_moves {
                    k.min(state.occupied_count().min(255) as u8)
                } else {
                    k
                }
            }
        }
    }

    /// Rebuild the playable chunk from the rule. Used after expansion and
    /// during the bootstrap phase; steady-state moves update incrementally.
    pub fn recompute_playable(&self, state: &mut GameState) {
        let required = self.required_adjacency(state);
        if required == 0 {
            state.board.playable = state.board.empty.clone();
            return;
        }
        let mut playable = crate::state::SiteSet::new(state.board.site_count());
        for site in state.board.empty.iter() {
            let occupied_neighbors = state
                .board_topology
                .vertex_adjacent(site)
                .iter()
                .filter(|&&n| state.board.is_occupied(n))
                .count();
            if occupied_neighbors >= required as usize {
                playable.insert(site);
            }
        }
        state.board.playable = playable;
    }

    /// Incremental playable update after a plain placement at `site` (no
    /// expansion, no pending rule change).
    fn update_playable_after(&self, state: &mut GameState, site: u32, required: u8) {
        state.board.playable.remove(site);
        if required == 0 {
            return;
        }
        // Placement can only qualify empty neighbors, never disqualify.
        let neighbors: Vec<u32> = state.board_topology.vertex_adjacent(site).to_vec();
        for n in neighbors {
            if !state.board.empty.contains(n) || state.board.playable.contains(n) {
                continue;
            }
            let occupied_neighbors = state
                .board_topology
                .vertex_adjacent(n)
                .iter()
                .filter(|&&m| state.board.is_occupied(m))
                .count();
            if occupied_neighbors >= required as usize {
                state.board.playable.insert(n);
            }
        }
    }

    /// Play a placement given by canonical coordinate. On an edge move, the
    /// dynamic strategies expand the board and migrate state first, then the
    /// (remapped) move is applied. The fixed-board strategy errors when the
    /// coordinate falls outside its bounds.
    pub fn play_coord(
        &self,
        state: &mut GameState,
        player: u8,
        to: CanonCoord,
    ) -> Result<PlayOutcome, EngineError> {
        let component = self
            .setup
            .components
            .player_component(player)
            .ok_or(EngineError::NoComponent(player))?;
        let mut site = state.board_topology.cell_id(to).ok_or(EngineError::OffBoard(to))?;
        if !state.board.playable.contains(site) {
            return Err(EngineError::IllegalMove(site));
        }
        let on_edge = state
            .board_topology
            .is_perimeter(site)
            .expect("resolved site is valid");

        let mut expansion = None;
        if on_edge && self.setup.strategy.family() != GrowthFamily::Fixed {
            let (new_topology, mapping) = match self.setup.strategy.family() {
                GrowthFamily::Perimeter => perimeter_expand(&state.board_topology)?,
                GrowthFamily::Zone => zone_expand(&state.board_topology, to)?,
                GrowthFamily::Fixed => unreachable!(),
            };
            let event = ExpansionEvent {
                move_index: state.moves_played(),
                strategy: self.setup.strategy,
                old_cells: state.board_site_count(),
                new_cells: mapping.new_cell_count,
                added: mapping.added.len() as u32,
            };
            let new_topology = Arc::new(new_topology);
            if self.setup.strategy.migrates_by_replay() {
                migrate_state_replay(state, new_topology, &mapping)?;
            } else {
                migrate_state_map(state, new_topology, &mapping)?;
            }
            site = mapping.map(site);
            expansion = Some(event);
        }

        let from = component.hand_count.map(|_| state.hand_global_site(player));
        let mv = Move { from, to: site, player, component: component.index, edge: on_edge };
        let required_before = self.required_adjacency(state);
        if expansion.is_some() {
            // Expansion rebuilt the playable default; enforce the rule before
            // applying so placement validation still holds.
            self.recompute_playable(state);
            let replayed_site = site;
            if !state.board.playable.contains(replayed_site) {
                return Err(EngineError::ReplayFailure(format!(
                    "triggering move lost legality at site {replayed_site}"
                )));
            }
        }
        state.apply_move(mv)?;

        // During bootstrap the requirement itself shifts between moves, so
        // rebuild; afterwards the incremental update is exact.
        let bootstrap = match self.setup.rule {
            PlacementRule::AdjacentAtLeast { bootstrap_moves, .. } => {
                state.moves_played() <= bootstrap_moves
            }
            PlacementRule::AnyEmpty => false,
        };
        if expansion.is_some() || bootstrap {
            self.recompute_playable(state);
        } else {
            self.update_playable_after(state, site, required_before);
        }
        Ok(PlayOutcome { site, expansion })
    }

    /// Rebuild the state as of `n - k` moves: fresh initial board, then the
    /// surviving prefix of the history re-played through the normal move
    /// path. Expansions caused by the undone suffix are not reproduced, so
    /// the board shrinks back to whatever the prefix grew.
    pub fn undo(&self, state: &GameState, k: u32) -> Result<GameState, EngineError> {
        let n = state.moves_played();
        if k > n {
            return Err(EngineError::UndoOutOfRange { k, n });
        }
        let keep = (n - k) as usize;
        let prefix: Vec<(u8, CanonCoord)> = state.trial.moves[..keep]
            .iter()
            .map(|mv| (mv.player, state.board_topology.coord_of(mv.to)))
            .collect();
        let mut fresh = self.initial_state(state.trial.seed);
        for (player, coord) in prefix {
            self.play_coord(&mut fresh, player, coord)?;
        }
        Ok(fresh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::tests::sample_midgame_state;
    use crate::tiling::cell_count;

    fn freeplace_setup(shape: Shape, strategy: Strategy, initial: InitialBoard) -> Setup {
        Setup {
            shape,
            strategy,
            players: 2,
            components: ComponentTable::new(vec![
                crate::state::ComponentDef { index: 1, owner: 1, hand_count: None },
                crate::state::ComponentDef { index: 2, owner: 2, hand_count: None },
            ]),
            rule: PlacementRule::AnyEmpty,
            initial,
        }
    }

    #[test]
    fn initial_board_dimensions() {
        assert_eq!(initial_board(Shape::Square, 0).dim, 3);
        assert_eq!(initial_board(Shape::Hexagon, 0).dim, 2);
        assert_eq!(initial_board(Shape::Triangle, 0).dim, 4);
        assert_eq!(initial_board(Shape::Square, 9).dim, 11);
        assert_eq!(cell_count(initial_board(Shape::Square, 9)), 121);
        assert_eq!(initial_board(Shape::Hexagon, 1).dim, 2);
        assert_eq!(initial_board(Shape::Triangle, 2).dim, 5);
    }

    #[test]
    fn initial_tiles_fit_with_all_neighbors() {
        for shape in [Shape::Square, Shape::Hexagon, Shape::Triangle] {
            for n in 1..=6u32 {
                let spec = initial_board(shape, n);
                let topo = Topology::build_regular(spec);
                let coords = initial_tile_coords(spec, n);
                assert_eq!(coords.len(), n as usize);
                for c in &coords {
                    assert!(topo.cell_id(*c).is_some(), "{shape:?} n={n} tile {c:?} off board");
                    for nb in c.vertex_neighbors() {
                        assert!(
                            topo.cell_id(nb).is_some(),
                            "{shape:?} n={n} neighbor {nb:?} of {c:?} off board"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ring_expansion_square() {
        let t = Topology::build_regular(BoardSpec { shape: Shape::Square, dim: 4 });
        let (grown, mapping) = perimeter_expand(&t).unwrap();
        assert_eq!(grown.regular_dim(), Some(6));
        assert_eq!(mapping.added.len(), 20);
        mapping.validate().unwrap();

        let t3 = Topology::build_regular(BoardSpec { shape: Shape::Square, dim: 3 });
        let (_, m3) = perimeter_expand(&t3).unwrap();
        assert_eq!(m3.map(7), 17);
        assert_eq!(m3.map(0), 6);
    }

    #[test]
    fn ring_expansion_hex_and_triangle() {
        let t = Topology::build_regular(BoardSpec { shape: Shape::Hexagon, dim: 3 });
        let (grown, mapping) = perimeter_expand(&t).unwrap();
        assert_eq!(grown.cell_count(), 37);
        assert_eq!(mapping.map(14), 25);

        let t = Topology::build_regular(BoardSpec { shape: Shape::Triangle, dim: 3 });
        let (grown, mapping) = perimeter_expand(&t).unwrap();
        assert_eq!(grown.cell_count(), 36);
        assert_eq!(mapping.added.len(), 27);
        assert_eq!(mapping.map(7), 25);
    }

    #[test]
    fn ring_expansion_preserves_coordinates() {
        for shape in [Shape::Square, Shape::Hexagon, Shape::Triangle] {
            let t = Topology::build_regular(BoardSpec { shape, dim: 4 });
            let (grown, mapping) = perimeter_expand(&t).unwrap();
            for id in 0..t.cell_count() as u32 {
                assert_eq!(grown.coord_of(mapping.map(id)), t.coord_of(id));
            }
        }
    }

    #[test]
    fn zone_expansion_bottom_left_counter_walk() {
        // Placing on the left edge of a 3x3 board creates three cells along
        // that edge; the traversal counter shifts each old index past them.
        let t = Topology::build_regular(BoardSpec { shape: Shape::Square, dim: 3 });
        let (grown, mapping) = zone_expand(&t, CanonCoord::square(-1, 0)).unwrap();
        assert_eq!(grown.cell_count(), 12);
        assert_eq!(mapping.added, vec![0, 4, 8]);
        assert_eq!(mapping.map(0), 1);
        assert_eq!(mapping.map(1), 2);
        assert_eq!(mapping.map(2), 3);
        assert_eq!(mapping.map(3), 5);
        mapping.validate().unwrap();
    }

    #[test]
    fn zone_expansion_hexagonal_counter_walk() {
        let t = Topology::build_regular(BoardSpec { shape: Shape::Hexagon, dim: 3 });
        let (_, mapping) = zone_expand(&t, CanonCoord::hex(-2, 1)).unwrap();
        assert_eq!(mapping.added.len(), 2);
        assert_eq!(mapping.map(16), 18);
        assert_eq!(mapping.map(12), 13);
    }

    #[test]
    fn zone_expansion_triangular_counter_walk() {
        let t = Topology::build_regular(BoardSpec { shape: Shape::Triangle, dim: 3 });
        let placed = t.coord_of(1);
        let (_, mapping) = zone_expand(&t, placed).unwrap();
        assert_eq!(mapping.added.len(), 5);
        assert_eq!(mapping.map(0), 5);
    }

    #[test]
    fn zone_expansion_interior_is_identity() {
        let t = Topology::build_regular(BoardSpec { shape: Shape::Square, dim: 5 });
        let (grown, mapping) = zone_expand(&t, CanonCoord::square(0, 0)).unwrap();
        assert_eq!(grown.cell_count(), t.cell_count());
        assert_eq!(mapping, IndexMapping::identity(25));
    }

    #[test]
    fn zone_expansion_rejects_off_board_cell() {
        let t = Topology::build_regular(BoardSpec { shape: Shape::Square, dim: 3 });
        assert!(matches!(
            zone_expand(&t, CanonCoord::square(9, 9)),
            Err(EngineError::OffBoard(_))
        ));
    }

    #[test]
    fn direct_mapping_migration_carries_occupied_sites() {
        let mut state = sample_midgame_state();
        let hands_before = state.hands.clone();
        let (new_topo, mapping) = perimeter_expand(&state.board_topology).unwrap();
        migrate_state_map(&mut state, Arc::new(new_topo), &mapping).unwrap();
        assert_eq!(state.hands, hands_before, "hand containers never expand");

        let occupied: Vec<u32> =
            (0..state.board_site_count()).filter(|&s| state.board.is_occupied(s)).collect();
        assert_eq!(occupied, vec![9, 10, 14, 15, 20, 21, 26, 28]);
        for (site, what) in [(14u32, 3u16), (15, 1), (20, 1), (21, 2)] {
            assert_eq!(state.board.what[site as usize], what);
        }
        // Hand sites follow the board: 16, 17 become 36, 37.
        let report = state.owned_report();
        assert_eq!(report.rows[0].1, vec![vec![15, 20]]);
        assert_eq!(report.rows[1].1, vec![vec![10, 21, 26, 28, 36]]);
        assert_eq!(report.rows[2].1, vec![vec![9, 14, 37]]);
        state.check_coherence().unwrap();

        // Trial history remapped in place.
        assert!(state.trial.moves.iter().all(|m| m.from == Some(36) || m.from == Some(37)));
    }

    #[test]
    fn replay_migration_equals_direct_mapping() {
        let mut mapped = sample_midgame_state();
        let mut replayed = mapped.clone();
        let (new_topo, mapping) = perimeter_expand(&mapped.board_topology).unwrap();
        let new_topo = Arc::new(new_topo);
        migrate_state_map(&mut mapped, Arc::clone(&new_topo), &mapping).unwrap();
        migrate_state_replay(&mut replayed, new_topo, &mapping).unwrap();
        assert_eq!(mapped.board, replayed.board);
        assert_eq!(mapped.hands, replayed.hands);
        assert_eq!(mapped.owned, replayed.owned);
        assert_eq!(mapped.trial, replayed.trial);
        assert_eq!(mapped.initial_sites, replayed.initial_sites);
    }

    #[test]
    fn migration_of_empty_board_leaves_everything_empty() {
        let engine = Engine::new(freeplace_setup(
            Shape::Square,
            Strategy::PeriMap,
            InitialBoard::Tiles(0),
        ));
        let mut state = engine.initial_state(0);
        let (new_topo, mapping) = perimeter_expand(&state.board_topology).unwrap();
        migrate_state_map(&mut state, Arc::new(new_topo), &mapping).unwrap();
        assert_eq!(state.board.empty.len(), 25);
        state.check_coherence().unwrap();
    }

    #[test]
    fn migration_preserves_occupied_coordinates() {
        let mut state = sample_midgame_state();
        let before: Vec<(CanonCoord, u16, u8)> = (0..state.board_site_count())
            .filter(|&s| state.board.is_occupied(s))
            .map(|s| {
                (state.board_topology.coord_of(s), state.board.what[s as usize], state.board.who[s as usize])
            })
            .collect();
        let (new_topo, mapping) = perimeter_expand(&state.board_topology).unwrap();
        migrate_state_map(&mut state, Arc::new(new_topo), &mapping).unwrap();
        let after: Vec<(CanonCoord, u16, u8)> = (0..state.board_site_count())
            .filter(|&s| state.board.is_occupied(s))
            .map(|s| {
                (state.board_topology.coord_of(s), state.board.what[s as usize], state.board.who[s as usize])
            })
            .collect();
        assert_eq!(before, after);
    }

    #[test]
    fn first_zone_move_on_one_cell_board_yields_nine_cells() {
        let engine = Engine::new(freeplace_setup(
            Shape::Square,
            Strategy::ZoneMap,
            InitialBoard::OneCell,
        ));
        let mut state = engine.initial_state(0);
        assert_eq!(state.board_site_count(), 1);
        let outcome = engine.play_coord(&mut state, 1, CanonCoord::square(0, 0)).unwrap();
        assert_eq!(state.board_site_count(), 9);
        assert!(outcome.expansion.is_some());
        assert_eq!(outcome.expansion.unwrap().added, 8);
        assert!(state.board.is_occupied(outcome.site));
        assert_eq!(state.board_topology.coord_of(outcome.site), CanonCoord::square(0, 0));
        state.check_coherence().unwrap();
    }

    #[test]
    fn interior_move_does_not_expand() {
        let engine = Engine::new(freeplace_setup(
            Shape::Square,
            Strategy::PeriMap,
            InitialBoard::Tiles(0),
        ));
        let mut state = engine.initial_state(0);
        // Dim 3: only the center is interior.
        let outcome = engine.play_coord(&mut state, 1, CanonCoord::square(0, 0)).unwrap();
        assert!(outcome.expansion.is_none());
        assert_eq!(state.board_site_count(), 9);
    }

    #[test]
    fn edge_move_grows_ring_before_placing() {
        let engine = Engine::new(freeplace_setup(
            Shape::Square,
            Strategy::PeriMap,
            InitialBoard::Tiles(0),
        ));
        let mut state = engine.initial_state(0);
        let outcome = engine.play_coord(&mut state, 1, CanonCoord::square(1, 1)).unwrap();
        assert_eq!(state.board_site_count(), 25);
        let ev = outcome.expansion.unwrap();
        assert_eq!((ev.old_cells, ev.new_cells, ev.added), (9, 25, 16));
        assert_eq!(state.board_topology.coord_of(outcome.site), CanonCoord::square(1, 1));
    }

    #[test]
    fn edge_move_on_even_board_with_initial_tiles() {
        let setup = Setup {
            shape: Shape::Square,
            strategy: Strategy::PeriMap,
            players: 2,
            components: ComponentTable::new(vec![
                crate::state::ComponentDef { index: 1, owner: 0, hand_count: None },
                crate::state::ComponentDef { index: 2, owner: 1, hand_count: Some(5) },
                crate::state::ComponentDef { index: 3, owner: 2, hand_count: Some(5) },
            ]),
            rule: PlacementRule::AnyEmpty,
            initial: InitialBoard::Tiles(2),
        };
        let engine = Engine::new(setup);
        let mut state = engine.initial_state(0);
        assert_eq!(state.board_site_count(), 16);
        assert_eq!(state.initial_sites.len(), 2);

        // A corner move grows the dimension-4 board to 6 before landing.
        let outcome = engine.play_coord(&mut state, 1, CanonCoord::square(-1, -1)).unwrap();
        assert_eq!(state.board_site_count(), 36);
        let ev = outcome.expansion.unwrap();
        assert_eq!((ev.old_cells, ev.new_cells, ev.added), (16, 36, 20));
        // The hand site moved to the new global offset and lost one chip.
        assert_eq!(state.hands[0].count[0], 4);
        assert_eq!(state.trial.moves[0].from, Some(36));
        assert!(state.trial.moves[0].edge);
        // Initial tiles kept their coordinates through the migration.
        let tile_coords: Vec<CanonCoord> = state
            .initial_sites
            .iter()
            .map(|&s| state.board_topology.coord_of(s))
            .collect();
        assert_eq!(tile_coords, vec![CanonCoord::square(0, 0), CanonCoord::square(1, 0)]);
        state.check_coherence().unwrap();
    }

    #[test]
    fn fixed_strategy_rejects_out_of_bounds() {
        let engine =
            Engine::new(freeplace_setup(Shape::Square, Strategy::Base, InitialBoard::Tiles(0)));
        let mut state = engine.initial_state(0);
        assert_eq!(state.board_site_count(), 1681);
        engine.play_coord(&mut state, 1, CanonCoord::square(20, 20)).unwrap();
        assert!(matches!(
            engine.play_coord(&mut state, 2, CanonCoord::square(21, 0)),
            Err(EngineError::OffBoard(_))
        ));
    }

    #[test]
    fn undo_everything_returns_initial_state() {
        let engine = Engine::new(freeplace_setup(
            Shape::Square,
            Strategy::ZoneMap,
            InitialBoard::Tiles(0),
        ));
        let mut state = engine.initial_state(7);
        engine.play_coord(&mut state, 1, CanonCoord::square(1, 1)).unwrap();
        engine.play_coord(&mut state, 2, CanonCoord::square(0, 0)).unwrap();
        let rewound = engine.undo(&state, 2).unwrap();
        let fresh = engine.initial_state(7);
        assert_eq!(rewound.board, fresh.board);
        assert_eq!(rewound.board_topology.cells(), fresh.board_topology.cells());
        assert_eq!(rewound.trial, fresh.trial);
    }

    #[test]
    fn undoing_an_expanding_move_shrinks_the_board() {
        let engine = Engine::new(freeplace_setup(
            Shape::Square,
            Strategy::ZoneMap,
            InitialBoard::Tiles(0),
        ));
        let mut state = engine.initial_state(0);
        engine.play_coord(&mut state, 1, CanonCoord::square(1, 1)).unwrap();
        assert!(state.board_site_count() > 9);
        let rewound = engine.undo(&state, 1).unwrap();
        assert_eq!(rewound.board_site_count(), 9);
    }

    #[test]
    fn undo_then_replay_matches_never_undone() {
        let engine = Engine::new(freeplace_setup(
            Shape::Square,
            Strategy::PeriMap,
            InitialBoard::Tiles(0),
        ));
        let mut state = engine.initial_state(3);
        let script = [
            (1u8, CanonCoord::square(0, 0)),
            (2, CanonCoord::square(1, 1)),
            (1, CanonCoord::square(-1, 0)),
            (2, CanonCoord::square(2, 2)),
        ];
        for &(p, c) in &script {
            engine.play_coord(&mut state, p, c).unwrap();
        }
        let mut rewound = engine.undo(&state, 2).unwrap();
        for &(p, c) in &script[2..] {
            engine.play_coord(&mut rewound, p, c).unwrap();
        }
        assert_eq!(rewound.board, state.board);
        assert_eq!(rewound.trial, state.trial);
        assert_eq!(rewound.owned, state.owned);
    }

    #[test]
    fn undo_out_of_range_is_rejected() {
        let engine = Engine::new(freeplace_setup(
            Shape::Square,
            Strategy::ZoneMap,
            InitialBoard::Tiles(0),
        ));
        let state = engine.initial_state(0);
        assert!(matches!(
            engine.undo(&state, 1),
            Err(EngineError::UndoOutOfRange { k: 1, n: 0 })
        ));
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("TURBO".parse::<Strategy>().is_err());
    }
}
