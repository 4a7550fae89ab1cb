//! Game-state structures: per-container chunk arrays, the ownership registry,
//! move records, and the trial (seeded move history).
//!
//! A game owns one container per physical holder of components: the main
//! board plus one single-site hand per player when the game deals out a
//! limited supply. Chunk indexing is local to each container; global site
//! indices lay the containers out contiguously, board first, so hand sites
//! follow the last board site and shift when the board grows.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::tiling::{BoardSpec, Shape};
use crate::topology::Topology;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StateError {
    #[error("site {0} out of range")]
    SiteOutOfRange(u32),
    #[error("site {0} is not playable")]
    NotPlayable(u32),
    #[error("site {0} is already occupied")]
    OccupiedSite(u32),
    #[error("site {0} is empty")]
    EmptySite(u32),
    #[error("player {0} has no hand container")]
    NoHand(u8),
    #[error("player {0}'s hand is empty")]
    HandEmpty(u8),
    #[error("unknown component index {0}")]
    UnknownComponent(u16),
}

/// Compact bit set over local site indices.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SiteSet {
    words: Vec<u64>,
    capacity: usize,
    ones: usize,
}

impl SiteSet {
    pub fn new(capacity: usize) -> Self {
        SiteSet { words: vec![0; capacity.div_ceil(64)], capacity, ones: 0 }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        s.fill();
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.ones
    }

    pub fn is_empty(&self) -> bool {
        self.ones == 0
    }

    pub fn contains(&self, i: u32) -> bool {
        let (w, b) = (i as usize / 64, i as usize % 64);
        w < self.words.len() && self.words[w] >> b & 1 == 1
    }

    /// Returns true if the site was newly inserted.
    pub fn insert(&mut self, i: u32) -> bool {
        debug_assert!((i as usize) < self.capacity);
        let (w, b) = (i as usize / 64, i as usize % 64);
        let fresh = self.words[w] >> b & 1 == 0;
        self.words[w] |= 1 << b;
        self.ones += fresh as usize;
        fresh
    }

    /// Returns true if the site was present.
    pub fn remove(&mut self, i: u32) -> bool {
        let (w, b) = (i as usize / 64, i as usize % 64);
        let present = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        self.ones -= present as usize;
        present
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
        self.ones = 0;
    }

    pub fn fill(&mut self) {
        self.words.fill(!0);
        if !self.capacity.is_multiple_of(64) {
            if let Some(last) = self.words.last_mut() {
                *last = (1u64 << (self.capacity % 64)) - 1;
            }
        }
        self.ones = self.capacity;
    }

    /// Ascending iteration over the set bits.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * 64 + b)
            })
        })
    }

    /// The `j`-th smallest member (0-based). Panics if `j >= len()`.
    pub fn select(&self, j: usize) -> u32 {
        debug_assert!(j < self.ones);
        let mut remaining = j as u32;
        for (wi, &word) in self.words.iter().enumerate() {
            let ones = word.count_ones();
            if remaining < ones {
                let mut w = word;
                for _ in 0..remaining {
                    w &= w - 1;
                }
                return wi as u32 * 64 + w.trailing_zeros();
            }
            remaining -= ones;
        }
        unreachable!("select past population count");
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

/// Flat chunk arrays for one container: occupancy, component, owner,
/// multiplicity, per-site state, and playability per local site.
///
/// Invariants kept by the mutators here:
/// - a site is in `empty` iff `what == 0` iff `count == 0`;
/// - `what == 0` implies `who == 0` and `state == 0`;
/// - `playable` only holds empty sites.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContainerState {
    pub empty: SiteSet,
    pub what: Vec<u16>,
    pub who: Vec<u8>,
    pub count: Vec<u16>,
    pub state: Vec<u16>,
    pub playable: SiteSet,
}

impl ContainerState {
    pub fn new_empty(site_count: usize) -> Self {
        ContainerState {
            empty: SiteSet::full(site_count),
            what: vec![0; site_count],
            who: vec![0; site_count],
            count: vec![0; site_count],
            state: vec![0; site_count],
            playable: SiteSet::new(site_count),
        }
    }

    pub fn site_count(&self) -> usize {
        self.what.len()
    }

    /// Place `count_n` copies of a component on a playable site.
    pub fn place(&mut self, site: u32, component: u16, owner: u8, count_n: u16) -> Result<(), StateError> {
        if site as usize >= self.site_count() {
            return Err(StateError::SiteOutOfRange(site));
        }
        if !self.empty.contains(site) {
            return Err(StateError::OccupiedSite(site));
        }
        if !self.playable.contains(site) {
            return Err(StateError::NotPlayable(site));
        }
        self.empty.remove(site);
        self.playable.remove(site);
        self.what[site as usize] = component;
        self.who[site as usize] = owner;
        self.count[site as usize] = count_n;
        Ok(())
    }

    /// Remove whatever occupies a site; the site rejoins `empty`.
    pub fn remove(&mut self, site: u32) -> Result<(), StateError> {
        if site as usize >= self.site_count() {
            return Err(StateError::SiteOutOfRange(site));
        }
        if self.empty.contains(site) {
            return Err(StateError::EmptySite(site));
        }
        self.what[site as usize] = 0;
        self.who[site as usize] = 0;
        self.count[site as usize] = 0;
        self.state[site as usize] = 0;
        self.empty.insert(site);
        Ok(())
    }

    pub fn is_occupied(&self, site: u32) -> bool {
        !self.empty.contains(site)
    }

    /// Structural invariant check; returns a description of the first
    /// violation found.
    pub fn check_coherence(&self) -> Result<(), String> {
        let n = self.site_count();
        if self.empty.capacity() != n || self.playable.capacity() != n {
            return Err(format!("chunk sizes disagree with site count {n}"));
        }
        for s in 0..n as u32 {
            let (empty, what, who, count, st) = (
                self.empty.contains(s),
                self.what[s as usize],
                self.who[s as usize],
                self.count[s as usize],
                self.state[s as usize],
            );
            if empty != (what == 0) || empty != (count == 0) {
                return Err(format!(
                    "site {s}: empty={empty} what={what} count={count} out of sync"
                ));
            }
            if what == 0 && (who != 0 || st != 0) {
                return Err(format!("site {s}: vacant but who={who} state={st}"));
            }
            if self.playable.contains(s) && !empty {
                return Err(format!("site {s}: playable but occupied"));
            }
        }
        Ok(())
    }
}

/// What a container holds.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ContainerRole {
    MainBoard,
    PlayerHand(u8),
}

/// Descriptor of one container: its graph and its slice of the global site
/// index space.
#[derive(Clone)]
pub struct Container {
    pub id: usize,
    pub role: ContainerRole,
    pub topology: Arc<Topology>,
    pub global_offset: u32,
}

/// One component type: who owns it and how many copies start in that owner's
/// hand (`None` means an unlimited supply with no hand container).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentDef {
    pub index: u16,
    pub owner: u8,
    pub hand_count: Option<u16>,
}

/// The component types of a game, indices contiguous from 1 (0 means none).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTable {
    defs: Vec<ComponentDef>,
}

impl ComponentTable {
    pub fn new(defs: Vec<ComponentDef>) -> Self {
        for (i, d) in defs.iter().enumerate() {
            assert_eq!(d.index as usize, i + 1, "component indices must be 1..=n in order");
        }
        ComponentTable { defs }
    }

    pub fn defs(&self) -> &[ComponentDef] {
        &self.defs
    }

    pub fn get(&self, index: u16) -> Option<&ComponentDef> {
        self.defs.get(index.checked_sub(1)? as usize)
    }

    /// Component indices owned by `owner`, in index order. Slot positions in
    /// the ownership registry follow this order.
    pub fn owned_by(&self, owner: u8) -> Vec<u16> {
        self.defs.iter().filter(|d| d.owner == owner).map(|d| d.index).collect()
    }

    /// Slot position of a component within its owner's registry row.
    pub fn slot_of(&self, component: u16) -> Option<(u8, usize)> {
        let def = self.get(component)?;
        let slot = self
            .defs
            .iter()
            .filter(|d| d.owner == def.owner)
            .position(|d| d.index == component)?;
        Some((def.owner, slot))
    }

    /// The single placeable component of a player, if any.
    pub fn player_component(&self, player: u8) -> Option<&ComponentDef> {
        self.defs.iter().find(|d| d.owner == player)
    }

    pub fn any_hands(&self) -> bool {
        self.defs.iter().any(|d| d.owner != 0 && d.hand_count.is_some())
    }
}

/// Per-owner, per-component-type sets of global site indices locating every
/// component, including hand sites while components remain in hand.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OwnedRegistry {
    /// Indexed by owner (0 = board), then by component slot.
    sets: Vec<Vec<BTreeSet<u32>>>,
}

impl OwnedRegistry {
    pub fn new(players: u8, components: &ComponentTable) -> Self {
        let sets = (0..=players)
            .map(|owner| components.owned_by(owner).iter().map(|_| BTreeSet::new()).collect())
            .collect();
        OwnedRegistry { sets }
    }

    pub fn add(&mut self, owner: u8, slot: usize, global_site: u32) {
        self.sets[owner as usize][slot].insert(global_site);
    }

    pub fn remove(&mut self, owner: u8, slot: usize, global_site: u32) {
        self.sets[owner as usize][slot].remove(&global_site);
    }

    pub fn sites(&self, owner: u8, slot: usize) -> &BTreeSet<u32> {
        &self.sets[owner as usize][slot]
    }

    pub fn rows(&self) -> &[Vec<BTreeSet<u32>>] {
        &self.sets
    }

    /// Drop every entry below `board_site_count` (board sites), keeping hand
    /// sites. Used when the board container is rebuilt from scratch.
    pub fn strip_board_sites(&mut self, board_site_count: u32) {
        for row in &mut self.sets {
            for set in row {
                set.retain(|&s| s >= board_site_count);
            }
        }
    }

    /// Translate every entry through `map`. Entries map to `None` are
    /// dropped (callers re-add them explicitly when that is ever valid).
    pub fn remap(&mut self, map: impl Fn(u32) -> Option<u32>) {
        for row in &mut self.sets {
            for set in row {
                *set = set.iter().filter_map(|&s| map(s)).collect();
            }
        }
    }
}

/// A recorded move: source site (none when the piece enters play from an
/// unlimited supply), destination site, mover, component, and whether the
/// destination was on the board perimeter when the move was submitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub from: Option<u32>,
    pub to: u32,
    pub player: u8,
    pub component: u16,
    pub edge: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EndReason {
    Win(u8),
    NoMoves,
    MoveCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TrialStatus {
    InProgress,
    Ended(EndReason),
}

/// Ordered move history with the RNG seed that produced it; replaying the
/// moves from the initial state reproduces the current state exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trial {
    pub seed: u64,
    pub moves: Vec<Move>,
    pub status: TrialStatus,
}

impl Trial {
    pub fn new(seed: u64) -> Self {
        Trial { seed, moves: Vec::new(), status: TrialStatus::InProgress }
    }
}

/// Complete game state: board container, hand containers, ownership registry,
/// and trial.
#[derive(Clone)]
pub struct GameState {
    pub board_topology: Arc<Topology>,
    pub board: ContainerState,
    pub hands: Vec<ContainerState>,
    pub hand_topology: Arc<Topology>,
    pub owned: OwnedRegistry,
    pub trial: Trial,
    /// Local board sites of the pre-placed tiles, remapped on expansion.
    pub initial_sites: Vec<u32>,
    pub components: ComponentTable,
    pub players: u8,
}

impl GameState {
    pub fn new(
        board_topology: Arc<Topology>,
        players: u8,
        components: ComponentTable,
        seed: u64,
    ) -> GameState {
        let board = ContainerState::new_empty(board_topology.cell_count());
        let with_hands = components.any_hands();
        let hand_topology = Arc::new(Topology::build_regular(
            BoardSpec { shape: Shape::Square, dim: 1 },
        ));
        let mut hands = Vec::new();
        if with_hands {
            for _ in 0..players {
                hands.push(ContainerState::new_empty(1));
            }
        }
        let mut state = GameState {
            board_topology,
            board,
            hands,
            hand_topology,
            owned: OwnedRegistry::new(players, &components),
            trial: Trial::new(seed),
            initial_sites: Vec::new(),
            components: components.clone(),
            players,
        };
        if with_hands {
            for player in 1..=players {
                if let Some(def) = components.player_component(player) {
                    if let Some(n) = def.hand_count {
                        let hand = &mut state.hands[player as usize - 1];
                        hand.empty.remove(0);
                        hand.what[0] = def.index;
                        hand.who[0] = player;
                        hand.count[0] = n;
                        if n > 0 {
                            let (owner, slot) = components.slot_of(def.index).unwrap();
                            let gsite = state.board.site_count() as u32 + (player as u32 - 1);
                            state.owned.add(owner, slot, gsite);
                        }
                    }
                }
            }
        }
        state
    }

    pub fn board_site_count(&self) -> u32 {
        self.board.site_count() as u32
    }

    /// Global index of a player's single hand site under the current board
    /// size.
    pub fn hand_global_site(&self, player: u8) -> u32 {
        self.board_site_count() + player as u32 - 1
    }

    pub fn moves_played(&self) -> u32 {
        self.trial.moves.len() as u32
    }

    pub fn occupied_count(&self) -> u32 {
        (self.board.site_count() - self.board.empty.len()) as u32
    }

    /// Container descriptors: board first, then hands in player order.
    pub fn containers(&self) -> Vec<Container> {
        let mut out = vec![Container {
            id: 0,
            role: ContainerRole::MainBoard,
            topology: Arc::clone(&self.board_topology),
            global_offset: 0,
        }];
        for (i, _) in self.hands.iter().enumerate() {
            out.push(Container {
                id: i + 1,
                role: ContainerRole::PlayerHand(i as u8 + 1),
                topology: Arc::clone(&self.hand_topology),
                global_offset: self.board_site_count() + i as u32,
            });
        }
        out
    }

    /// Place a pre-game tile (owner 0) and record it as part of the initial
    /// configuration.
    pub fn place_initial_tile(&mut self, site: u32, component: u16) -> Result<(), StateError> {
        self.place_on_board(site, component, 0)?;
        self.initial_sites.push(site);
        Ok(())
    }

    /// Place a component on a board site, updating chunks and the registry.
    pub fn place_on_board(&mut self, site: u32, component: u16, owner: u8) -> Result<(), StateError> {
        let (reg_owner, slot) =
            self.components.slot_of(component).ok_or(StateError::UnknownComponent(component))?;
        debug_assert_eq!(reg_owner, owner);
        self.board.place(site, component, owner, 1)?;
        self.owned.add(owner, slot, site);
        Ok(())
    }

    /// Clear a board site, updating chunks and the registry.
    pub fn remove_from_board(&mut self, site: u32) -> Result<(), StateError> {
        if site as usize >= self.board.site_count() || self.board.empty.contains(site) {
            return Err(StateError::EmptySite(site));
        }
        let component = self.board.what[site as usize];
        let owner = self.board.who[site as usize];
        self.board.remove(site)?;
        if let Some((o, slot)) = self.components.slot_of(component) {
            debug_assert_eq!(o, owner);
            self.owned.remove(owner, slot, site);
        }
        Ok(())
    }

    /// Take one component out of a player's hand; drops the hand site from
    /// the registry when the hand empties.
    pub fn decrement_hand(&mut self, player: u8) -> Result<(), StateError> {
        if self.hands.is_empty() {
            return Err(StateError::NoHand(player));
        }
        let hand = &mut self.hands[player as usize - 1];
        if hand.count[0] == 0 {
            return Err(StateError::HandEmpty(player));
        }
        hand.count[0] -= 1;
        let component = hand.what[0];
        if hand.count[0] == 0 {
            hand.what[0] = 0;
            hand.who[0] = 0;
            hand.empty.insert(0);
            let (owner, slot) = self.components.slot_of(component).unwrap();
            let gsite = self.hand_global_site(player);
            self.owned.remove(owner, slot, gsite);
        }
        Ok(())
    }

    /// Apply a recorded move: hand decrement when it has a source, then the
    /// board placement, then append to the trial.
    pub fn apply_move(&mut self, mv: Move) -> Result<(), StateError> {
        if let Some(from) = mv.from {
            debug_assert_eq!(from, self.hand_global_site(mv.player));
            self.decrement_hand(mv.player)?;
        }
        self.place_on_board(mv.to, mv.component, mv.player)?;
        self.trial.moves.push(mv);
        Ok(())
    }

    /// Recompute the ownership registry from the chunk contents of every
    /// container. Independent of the incrementally maintained registry; used
    /// as its oracle.
    pub fn rebuild_owned_from_chunks(&self) -> OwnedRegistry {
        let mut owned = OwnedRegistry::new(self.players, &self.components);
        for site in 0..self.board_site_count() {
            if self.board.empty.contains(site) {
                continue;
            }
            let component = self.board.what[site as usize];
            if let Some((owner, slot)) = self.components.slot_of(component) {
                owned.add(owner, slot, site);
            }
        }
        for (i, hand) in self.hands.iter().enumerate() {
            if hand.count[0] > 0 {
                if let Some((owner, slot)) = self.components.slot_of(hand.what[0]) {
                    owned.add(owner, slot, self.board_site_count() + i as u32);
                }
            }
        }
        owned
    }

    /// Full structural coherence: chunk invariants per container plus
    /// registry/chunk agreement.
    pub fn check_coherence(&self) -> Result<(), String> {
        self.board.check_coherence().map_err(|e| format!("board: {e}"))?;
        for (i, hand) in self.hands.iter().enumerate() {
            hand.check_coherence().map_err(|e| format!("hand {}: {e}", i + 1))?;
        }
        let rebuilt = self.rebuild_owned_from_chunks();
        if rebuilt != self.owned {
            return Err("ownership registry disagrees with chunk contents".to_string());
        }
        Ok(())
    }

    /// Deterministic chunk-table report for every container.
    pub fn snapshot_tables(&self) -> StateTables {
        let mut tables = vec![chunk_table("board".to_string(), &self.board)];
        for (i, hand) in self.hands.iter().enumerate() {
            tables.push(chunk_table(format!("player {} hand", i + 1), hand));
        }
        StateTables { tables }
    }

    /// Per-owner site-index report, hand sites included.
    pub fn owned_report(&self) -> OwnedReport {
        let rows = self
            .owned
            .rows()
            .iter()
            .enumerate()
            .map(|(owner, row)| {
                let label = if owner == 0 {
                    "Board".to_string()
                } else {
                    format!("Player {owner}")
                };
                (label, row.iter().map(|set| set.iter().copied().collect()).collect())
            })
            .collect();
        OwnedReport { rows }
    }

    /// Full JSON dump: containers with chunk tables, ownership report, and
    /// the trial move list.
    pub fn dump_json(&self) -> serde_json::Value {
        serde_json::json!({
            "board_cells": self.board_site_count(),
            "shape": self.board_topology.shape(),
            "containers": self.snapshot_tables().tables.iter().map(|t| {
                serde_json::json!({
                    "name": t.container,
                    "empty": t.empty,
                    "what": t.what.iter().map(|&(s, v)| [s as u64, v as u64]).collect::<Vec<_>>(),
                    "who": t.who.iter().map(|&(s, v)| [s as u64, v as u64]).collect::<Vec<_>>(),
                    "count": t.count.iter().map(|&(s, v)| [s as u64, v as u64]).collect::<Vec<_>>(),
                    "state": t.state.iter().map(|&(s, v)| [s as u64, v as u64]).collect::<Vec<_>>(),
                    "playable": t.playable,
                })
            }).collect::<Vec<_>>(),
            "owned": self.owned_report().rows.iter().map(|(label, sets)| {
                serde_json::json!({ "owner": label, "sites": sets })
            }).collect::<Vec<_>>(),
            "trial": self.trial,
        })
    }
}

fn chunk_table(container: String, cs: &ContainerState) -> ChunkTable {
    let occupied: Vec<u32> =
        (0..cs.site_count() as u32).filter(|&s| cs.is_occupied(s)).collect();
    ChunkTable {
        container,
        empty: cs.empty.to_vec(),
        what: occupied.iter().map(|&s| (s, cs.what[s as usize])).collect(),
        who: occupied.iter().map(|&s| (s, cs.who[s as usize] as u16)).collect(),
        count: occupied.iter().map(|&s| (s, cs.count[s as usize])).collect(),
        state: occupied
            .iter()
            .filter(|&&s| cs.state[s as usize] != 0)
            .map(|&s| (s, cs.state[s as usize]))
            .collect(),
        playable: cs.playable.to_vec(),
    }
}

/// Rendered chunk contents of one container, sites ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChunkTable {
    pub container: String,
    pub empty: Vec<u32>,
    pub what: Vec<(u32, u16)>,
    pub who: Vec<(u32, u16)>,
    pub count: Vec<(u32, u16)>,
    pub state: Vec<(u32, u16)>,
    pub playable: Vec<u32>,
}

impl ChunkTable {
    /// Text rendering: one `name: entries` line per chunk, `site:value`
    /// pairs for the value chunks.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |name: &str, body: String| {
            if body.is_empty() {
                let _ = writeln!(out, "{name}:");
            } else {
                let _ = writeln!(out, "{name}: {body}");
            }
        };
        let list = |v: &[u32]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ");
        let pairs = |v: &[(u32, u16)]| {
            v.iter().map(|(s, x)| format!("{s}:{x}")).collect::<Vec<_>>().join(", ")
        };
        line("empty", list(&self.empty));
        line("what", pairs(&self.what));
        line("who", pairs(&self.who));
        line("count", pairs(&self.count));
        line("state", pairs(&self.state));
        line("playable", list(&self.playable));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateTables {
    pub tables: Vec<ChunkTable>,
}

/// Ownership rows: owner label and one sorted site list per component slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwnedReport {
    pub rows: Vec<(String, Vec<Vec<u32>>)>,
}

impl OwnedReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (label, sets) in &self.rows {
            let body = sets
                .iter()
                .map(|set| {
                    let inner =
                        set.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ");
                    format!("{{{inner}}}")
                })
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "{label} [{body}]");
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    #[test]
    fn site_set_basics() {
        let mut s = SiteSet::new(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(s.insert(64));
        assert!(!s.insert(64));
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert_eq!(s.select(0), 0);
        assert_eq!(s.select(1), 64);
        assert_eq!(s.select(2), 129);
        assert!(s.remove(64));
        assert!(!s.remove(64));
        assert_eq!(s.to_vec(), vec![0, 129]);
        s.fill();
        assert_eq!(s.len(), 130);
        assert!(s.contains(100));
    }

    #[test]
    fn select_agrees_with_iteration_order() {
        let mut s = SiteSet::new(200);
        for i in (0..200).step_by(7) {
            s.insert(i);
        }
        let all = s.to_vec();
        for (j, &site) in all.iter().enumerate() {
            assert_eq!(s.select(j), site);
        }
    }

    #[test]
    fn placement_keeps_chunks_in_sync() {
        let mut cs = ContainerState::new_empty(16);
        cs.playable = cs.empty.clone();
        cs.place(5, 2, 1, 1).unwrap();
        assert!(!cs.empty.contains(5));
        assert_eq!(cs.what[5], 2);
        assert_eq!(cs.who[5], 1);
        assert_eq!(cs.count[5], 1);
        cs.check_coherence().unwrap();

        cs.remove(5).unwrap();
        assert!(cs.empty.contains(5));
        assert_eq!((cs.what[5], cs.who[5], cs.count[5]), (0, 0, 0));
        cs.check_coherence().unwrap();
    }

    #[test]
    fn placement_on_unplayable_or_occupied_site_fails() {
        let mut cs = ContainerState::new_empty(4);
        assert_eq!(cs.place(1, 2, 1, 1), Err(StateError::NotPlayable(1)));
        cs.playable = cs.empty.clone();
        cs.place(1, 2, 1, 1).unwrap();
        assert_eq!(cs.place(1, 2, 1, 1), Err(StateError::OccupiedSite(1)));
        assert_eq!(cs.remove(0), Err(StateError::EmptySite(0)));
        assert_eq!(cs.place(9, 2, 1, 1), Err(StateError::SiteOutOfRange(9)));
    }

    fn two_player_components() -> ComponentTable {
        ComponentTable::new(vec![
            ComponentDef { index: 1, owner: 0, hand_count: None },
            ComponentDef { index: 2, owner: 1, hand_count: Some(6) },
            ComponentDef { index: 3, owner: 2, hand_count: Some(6) },
        ])
    }

    /// The worked mid-game configuration used across the chunk and ownership
    /// table tests: a 4x4 board, two pre-placed tiles on 6 and 9, four red
    /// chips down and two in hand, two gray chips down and four in hand.
    pub(crate) fn sample_midgame_state() -> GameState {
        let topo = Arc::new(Topology::build_regular(BoardSpec {
            shape: Shape::Square,
            dim: 4,
        }));
        let mut state = GameState::new(topo, 2, two_player_components(), 0);
        state.board.playable = state.board.empty.clone();
        state.place_initial_tile(6, 1).unwrap();
        state.place_initial_tile(9, 1).unwrap();
        let hand = |state: &GameState, p: u8| Some(state.hand_global_site(p));
        for (site, player) in [(3u32, 1u8), (2, 2), (10, 1), (5, 2), (13, 1), (15, 1)] {
            let component = if player == 1 { 2 } else { 3 };
            state
                .apply_move(Move {
                    from: hand(&state, player),
                    to: site,
                    player,
                    component,
                    edge: false,
                })
                .unwrap();
        }
        // This game allows play on any empty site.
        state.board.playable = state.board.empty.clone();
        state
    }

    #[test]
    fn board_chunk_table_matches_known_layout() {
        let state = sample_midgame_state();
        let tables = state.snapshot_tables();
        let board = &tables.tables[0];
        assert_eq!(board.empty, vec![0, 1, 4, 7, 8, 11, 12, 14]);
        assert_eq!(
            board.what,
            vec![(2, 3), (3, 2), (5, 3), (6, 1), (9, 1), (10, 2), (13, 2), (15, 2)]
        );
        assert_eq!(
            board.who,
            vec![(2, 2), (3, 1), (5, 2), (6, 0), (9, 0), (10, 1), (13, 1), (15, 1)]
        );
        assert_eq!(
            board.count,
            vec![(2, 1), (3, 1), (5, 1), (6, 1), (9, 1), (10, 1), (13, 1), (15, 1)]
        );
        assert!(board.state.is_empty());
        assert_eq!(board.playable, vec![0, 1, 4, 7, 8, 11, 12, 14]);
    }

    #[test]
    fn hand_chunk_tables_match_known_layout() {
        let state = sample_midgame_state();
        let tables = state.snapshot_tables();
        let p1 = &tables.tables[1];
        assert!(p1.empty.is_empty());
        assert_eq!(p1.what, vec![(0, 2)]);
        assert_eq!(p1.who, vec![(0, 1)]);
        assert_eq!(p1.count, vec![(0, 2)]);
        assert!(p1.playable.is_empty());

        let p2 = &tables.tables[2];
        assert_eq!(p2.what, vec![(0, 3)]);
        assert_eq!(p2.who, vec![(0, 2)]);
        assert_eq!(p2.count, vec![(0, 4)]);
    }

    #[test]
    fn ownership_report_includes_hand_sites() {
        let state = sample_midgame_state();
        let report = state.owned_report();
        assert_eq!(report.rows[0], ("Board".to_string(), vec![vec![6, 9]]));
        assert_eq!(report.rows[1], ("Player 1".to_string(), vec![vec![3, 10, 13, 15, 16]]));
        assert_eq!(report.rows[2], ("Player 2".to_string(), vec![vec![2, 5, 17]]));
    }

    #[test]
    fn registry_matches_chunk_rebuild_after_each_placement() {
        let state = sample_midgame_state();
        state.check_coherence().unwrap();
        assert_eq!(state.rebuild_owned_from_chunks(), state.owned);
    }

    #[test]
    fn fresh_hands_only_registry() {
        let topo = Arc::new(Topology::build_regular(BoardSpec { shape: Shape::Square, dim: 3 }));
        let components = ComponentTable::new(vec![
            ComponentDef { index: 1, owner: 1, hand_count: Some(3) },
            ComponentDef { index: 2, owner: 2, hand_count: Some(3) },
        ]);
        let state = GameState::new(topo, 2, components, 0);
        let report = state.owned_report();
        assert_eq!(report.rows[0].1, Vec::<Vec<u32>>::new());
        assert_eq!(report.rows[1].1, vec![vec![9]]);
        assert_eq!(report.rows[2].1, vec![vec![10]]);
    }

    #[test]
    fn empty_board_tables() {
        let topo = Arc::new(Topology::build_regular(BoardSpec { shape: Shape::Square, dim: 3 }));
        let components = ComponentTable::new(vec![
            ComponentDef { index: 1, owner: 1, hand_count: None },
            ComponentDef { index: 2, owner: 2, hand_count: None },
        ]);
        let mut state = GameState::new(topo, 2, components, 0);
        state.board.playable = state.board.empty.clone();
        let tables = state.snapshot_tables();
        assert_eq!(tables.tables.len(), 1, "no hands configured");
        assert_eq!(tables.tables[0].empty, (0..9).collect::<Vec<_>>());
        assert_eq!(tables.tables[0].playable, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn hand_exhaustion_and_errors() {
        let topo = Arc::new(Topology::build_regular(BoardSpec { shape: Shape::Square, dim: 3 }));
        let components = ComponentTable::new(vec![
            ComponentDef { index: 1, owner: 1, hand_count: Some(1) },
            ComponentDef { index: 2, owner: 2, hand_count: Some(1) },
        ]);
        let mut state = GameState::new(topo, 2, components, 0);
        state.decrement_hand(1).unwrap();
        assert_eq!(state.hands[0].count[0], 0);
        assert!(state.hands[0].empty.contains(0));
        assert!(state.owned.sites(1, 0).is_empty());
        assert_eq!(state.decrement_hand(1), Err(StateError::HandEmpty(1)));
        state.check_coherence().unwrap();
    }

    #[test]
    fn container_offsets_follow_the_board() {
        let state = sample_midgame_state();
        let containers = state.containers();
        assert_eq!(containers.len(), 3);
        assert_eq!(containers[0].global_offset, 0);
        assert!(matches!(containers[0].role, ContainerRole::MainBoard));
        assert_eq!(containers[1].global_offset, 16);
        assert!(matches!(containers[1].role, ContainerRole::PlayerHand(1)));
        assert_eq!(containers[2].global_offset, 17);
        assert_eq!(containers[1].topology.cell_count(), 1);
    }

    #[test]
    fn report_rendering_matches_table_format() {
        let state = sample_midgame_state();
        let board = state.snapshot_tables().tables[0].render();
        assert!(board.contains("empty: 0, 1, 4, 7, 8, 11, 12, 14"));
        assert!(board.contains("what: 2:3, 3:2, 5:3, 6:1, 9:1, 10:2, 13:2, 15:2"));
        let owned = state.owned_report().render();
        assert!(owned.contains("Board [{6, 9}]"));
        assert!(owned.contains("Player 1 [{3, 10, 13, 15, 16}]"));
        assert!(owned.contains("Player 2 [{2, 5, 17}]"));
    }

    #[test]
    fn json_dump_is_deterministic() {
        let state = sample_midgame_state();
        let a = state.dump_json().to_string();
        let b = sample_midgame_state().dump_json().to_string();
        assert_eq!(a, b);
        assert!(a.contains("\"board_cells\":16"));
    }
}
