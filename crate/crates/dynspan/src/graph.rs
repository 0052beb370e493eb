//! The dynamic graph layer: node identity, update events, oriented edge
//! storage, and the validation of update streams.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Node identifier in `[0, n)`. The fixed total order on nodes used by every
/// "first"/"smallest" rule in the library is the numeric order of ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn ix(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A directed edge `(tail, head)`.
pub type Arc = (NodeId, NodeId);

/// Normalizes an unordered pair to `(min, max)` form.
#[inline]
pub fn undirected(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Insert,
    Delete,
}

/// A single undirected edge update, as issued by the adversary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpdateEvent {
    pub op: Op,
    pub u: NodeId,
    pub v: NodeId,
}

impl UpdateEvent {
    pub fn insert(u: u32, v: u32) -> Self {
        UpdateEvent { op: Op::Insert, u: NodeId(u), v: NodeId(v) }
    }

    pub fn delete(u: u32, v: u32) -> Self {
        UpdateEvent { op: Op::Delete, u: NodeId(u), v: NodeId(v) }
    }
}

/// A directed update: insertion or deletion of a single arc. This is the
/// currency of everything below the top level — `B` change logs are lists of
/// these, and each recursion level consumes the previous level's list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcEvent {
    Insert(Arc),
    Delete(Arc),
}

impl ArcEvent {
    #[inline]
    pub fn arc(self) -> Arc {
        match self {
            ArcEvent::Insert(a) | ArcEvent::Delete(a) => a,
        }
    }

    #[inline]
    pub fn is_insert(self) -> bool {
        matches!(self, ArcEvent::Insert(_))
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UpdateError {
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("insert of already-present edge {{{0}, {1}}}")]
    DuplicateInsert(NodeId, NodeId),
    #[error("delete of absent edge {{{0}, {1}}}")]
    MissingDelete(NodeId, NodeId),
    #[error("node {0} out of range for n = {1}")]
    NodeOutOfRange(NodeId, usize),
}

/// What an arc mutation did to the undirected projection.
#[derive(Clone, Copy, Debug)]
pub struct ArcDelta {
    pub arc: Arc,
    /// True when the endpoints became adjacent (on insert) or ceased to be
    /// adjacent (on delete) in the undirected projection.
    pub adjacency_changed: bool,
}

/// An oriented graph on a fixed node set. Both directions of a pair may be
/// present as distinct arcs (this happens in the `B` graphs fed to recursion
/// levels), so the undirected adjacency is reference-counted per neighbor.
#[derive(Clone, Debug)]
pub struct ArcGraph {
    n: usize,
    /// Per node: neighbor -> number of arcs between the pair (1 or 2).
    adj: Vec<BTreeMap<NodeId, u8>>,
    /// Per node: heads of outgoing arcs.
    out: Vec<BTreeSet<NodeId>>,
    arc_count: usize,
    ops: u64,
}

impl ArcGraph {
    pub fn new(n: usize) -> Self {
        ArcGraph {
            n,
            adj: vec![BTreeMap::new(); n],
            out: vec![BTreeSet::new(); n],
            arc_count: 0,
            ops: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    fn check_arc(&self, (u, v): Arc) -> Result<(), UpdateError> {
        if u == v {
            return Err(UpdateError::SelfLoop(u));
        }
        for w in [u, v] {
            if w.ix() >= self.n {
                return Err(UpdateError::NodeOutOfRange(w, self.n));
            }
        }
        Ok(())
    }

    pub fn insert_arc(&mut self, a: Arc) -> Result<ArcDelta, UpdateError> {
        self.check_arc(a)?;
        let (u, v) = a;
        self.ops += 1;
        if !self.out[u.ix()].insert(v) {
            return Err(UpdateError::DuplicateInsert(u, v));
        }
        self.arc_count += 1;
        self.ops += 2;
        let fresh = {
            let c = self.adj[u.ix()].entry(v).or_insert(0);
            *c += 1;
            *c == 1
        };
        let c = self.adj[v.ix()].entry(u).or_insert(0);
        *c += 1;
        Ok(ArcDelta { arc: a, adjacency_changed: fresh })
    }

    pub fn delete_arc(&mut self, a: Arc) -> Result<ArcDelta, UpdateError> {
        self.check_arc(a)?;
        let (u, v) = a;
        self.ops += 1;
        if !self.out[u.ix()].remove(&v) {
            return Err(UpdateError::MissingDelete(u, v));
        }
        self.arc_count -= 1;
        self.ops += 2;
        let gone = {
            let c = self.adj[u.ix()].get_mut(&v).expect("adjacency out of sync");
            *c -= 1;
            if *c == 0 {
                self.adj[u.ix()].remove(&v);
                true
            } else {
                false
            }
        };
        let c = self.adj[v.ix()].get_mut(&u).expect("adjacency out of sync");
        *c -= 1;
        if *c == 0 {
            self.adj[v.ix()].remove(&u);
        }
        Ok(ArcDelta { arc: a, adjacency_changed: gone })
    }

    pub fn apply(&mut self, ev: ArcEvent) -> Result<ArcDelta, UpdateError> {
        match ev {
            ArcEvent::Insert(a) => self.insert_arc(a),
            ArcEvent::Delete(a) => self.delete_arc(a),
        }
    }

    pub fn has_arc(&self, (u, v): Arc) -> bool {
        self.out[u.ix()].contains(&v)
    }

    pub fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u.ix()].contains_key(&v)
    }

    /// Neighbors of `u` in the undirected projection, in ascending order.
    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj[u.ix()].keys().copied()
    }

    pub fn out_neighbors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.out[u.ix()].iter().copied()
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u.ix()].len()
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out[u.ix()].len()
    }

    pub fn max_out_degree(&self) -> usize {
        self.out.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, heads)| heads.iter().map(move |&v| (NodeId(u as u32), v)))
    }

    /// Current undirected edge set in `(min, max)` form.
    pub fn undirected_edges(&self) -> BTreeSet<(NodeId, NodeId)> {
        let mut out = BTreeSet::new();
        for (u, v) in self.arcs() {
            out.insert(undirected(u, v));
        }
        out
    }

    pub fn neighbor_min(&self, u: NodeId) -> Option<NodeId> {
        self.adj[u.ix()].keys().next().copied()
    }

    /// Smallest neighbor of `u` strictly greater than `after`.
    pub fn neighbor_successor(&self, u: NodeId, after: NodeId) -> Option<NodeId> {
        use std::ops::Bound::*;
        self.adj[u.ix()].range((Excluded(after), Unbounded)).next().map(|(&w, _)| w)
    }

    /// Number of neighbors of `u` strictly smaller than `v`.
    pub fn neighbor_rank(&self, u: NodeId, v: NodeId) -> usize {
        self.adj[u.ix()].range(..v).count()
    }

    /// Elementary set operations performed so far.
    pub fn ops(&self) -> u64 {
        self.ops
    }
}

/// The top-level dynamic graph: simple and undirected, with exactly one
/// stored orientation per edge. Inserting `{u, v}` orients the edge from the
/// event's first field to its second, so replays are deterministic and the
/// orientation never depends on algorithm randomness.
#[derive(Clone, Debug)]
pub struct DynOrientedGraph {
    g: ArcGraph,
    edges: BTreeSet<(NodeId, NodeId)>,
}

impl DynOrientedGraph {
    pub fn new(n: usize) -> Self {
        DynOrientedGraph { g: ArcGraph::new(n), edges: BTreeSet::new() }
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    /// Applies one undirected update and returns the oriented delta that
    /// downstream (orientation-based) structures should consume.
    pub fn apply_update(&mut self, e: UpdateEvent) -> Result<ArcEvent, UpdateError> {
        self.g.check_arc((e.u, e.v))?;
        let key = undirected(e.u, e.v);
        match e.op {
            Op::Insert => {
                if self.edges.contains(&key) {
                    return Err(UpdateError::DuplicateInsert(e.u, e.v));
                }
                self.g.insert_arc((e.u, e.v))?;
                self.edges.insert(key);
                Ok(ArcEvent::Insert((e.u, e.v)))
            }
            Op::Delete => {
                if !self.edges.contains(&key) {
                    return Err(UpdateError::MissingDelete(e.u, e.v));
                }
                // The stored orientation may differ from the event's order.
                let arc = if self.g.has_arc((e.u, e.v)) { (e.u, e.v) } else { (e.v, e.u) };
                self.g.delete_arc(arc)?;
                self.edges.remove(&key);
                Ok(ArcEvent::Delete(arc))
            }
        }
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edges.contains(&undirected(u, v))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Lexicographically smallest current edge in `(min, max)` form.
    pub fn min_edge(&self) -> Option<(NodeId, NodeId)> {
        self.edges.iter().next().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn max_out_degree(&self) -> usize {
        self.g.max_out_degree()
    }

    pub fn arc_graph(&self) -> &ArcGraph {
        &self.g
    }

    pub fn ops(&self) -> u64 {
        self.g.ops()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn first_insert_orients_low_to_high() {
        let mut g = DynOrientedGraph::new(4);
        let ev = g.apply_update(UpdateEvent::insert(0, 1)).unwrap();
        assert_eq!(ev, ArcEvent::Insert((NodeId(0), NodeId(1))));
        assert!(g.arc_graph().has_arc((NodeId(0), NodeId(1))));
        assert_eq!(g.arc_graph().out_degree(NodeId(0)), 1);
        assert_eq!(g.arc_graph().out_degree(NodeId(1)), 0);
    }

    #[test]
    fn orientation_follows_event_order() {
        let mut g = DynOrientedGraph::new(4);
        g.apply_update(UpdateEvent::insert(3, 1)).unwrap();
        assert!(g.arc_graph().has_arc((NodeId(3), NodeId(1))));
        assert_eq!(g.arc_graph().out_degree(NodeId(3)), 1);
    }

    #[test]
    fn delete_reverses_insert() {
        let mut g = DynOrientedGraph::new(4);
        g.apply_update(UpdateEvent::insert(0, 1)).unwrap();
        let ev = g.apply_update(UpdateEvent::delete(1, 0)).unwrap();
        assert_eq!(ev, ArcEvent::Delete((NodeId(0), NodeId(1))));
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.arc_graph().out_degree(NodeId(0)), 0);
    }

    #[test]
    fn invalid_updates_leave_state_unchanged() {
        let mut g = DynOrientedGraph::new(4);
        g.apply_update(UpdateEvent::insert(0, 1)).unwrap();
        let snapshot = g.arc_graph().undirected_edges();

        let err = g.apply_update(UpdateEvent::insert(1, 0)).unwrap_err();
        assert_eq!(err, UpdateError::DuplicateInsert(NodeId(1), NodeId(0)));
        let err = g.apply_update(UpdateEvent::delete(2, 3)).unwrap_err();
        assert_eq!(err, UpdateError::MissingDelete(NodeId(2), NodeId(3)));
        let err = g.apply_update(UpdateEvent::insert(2, 2)).unwrap_err();
        assert_eq!(err, UpdateError::SelfLoop(NodeId(2)));
        let err = g.apply_update(UpdateEvent::insert(0, 9)).unwrap_err();
        assert_eq!(err, UpdateError::NodeOutOfRange(NodeId(9), 4));

        assert_eq!(g.arc_graph().undirected_edges(), snapshot);
    }

    #[test]
    fn max_out_degree_on_star() {
        let mut g = DynOrientedGraph::new(6);
        assert_eq!(g.max_out_degree(), 0);
        for leaf in 1..6 {
            g.apply_update(UpdateEvent::insert(0, leaf)).unwrap();
        }
        assert_eq!(g.max_out_degree(), 5);
    }

    #[test]
    fn max_out_degree_matches_recount() {
        let mut g = DynOrientedGraph::new(20);
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut edges = 0;
        while edges < 40 {
            let u = rng.random_range(0..20u32);
            let v = rng.random_range(0..20u32);
            if u != v && !g.has_edge(NodeId(u), NodeId(v)) {
                g.apply_update(UpdateEvent::insert(u, v)).unwrap();
                edges += 1;
            }
        }
        let mut recount = vec![0usize; 20];
        for (u, _) in g.arc_graph().arcs() {
            recount[u.ix()] += 1;
        }
        assert_eq!(g.max_out_degree(), recount.iter().copied().max().unwrap());
    }

    /// Random valid update stream on a small graph; checks adjacency
    /// symmetry, orientation uniqueness, and that replaying the surviving
    /// edge set from scratch reproduces the adjacency structure.
    #[test]
    fn stream_replay_consistency() {
        let n = 24u32;
        let mut g = DynOrientedGraph::new(n as usize);
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..3000 {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v {
                continue;
            }
            let ev = if g.has_edge(NodeId(u), NodeId(v)) {
                UpdateEvent::delete(u, v)
            } else {
                UpdateEvent::insert(u, v)
            };
            g.apply_update(ev).unwrap();
        }

        let ag = g.arc_graph();
        for u in 0..n {
            for v in ag.neighbors(NodeId(u)) {
                assert!(ag.adjacent(v, NodeId(u)), "adjacency must be symmetric");
            }
        }
        for (u, v) in ag.arcs() {
            assert!(!ag.has_arc((v, u)), "one orientation per edge at top level");
        }

        let mut rebuilt = DynOrientedGraph::new(n as usize);
        for (u, v) in g.edges() {
            rebuilt.apply_update(UpdateEvent::insert(u.0, v.0)).unwrap();
        }
        assert_eq!(rebuilt.arc_graph().undirected_edges(), ag.undirected_edges());
    }

    #[test]
    fn neighbor_queries_match_sorted_reference() {
        let n = 48u32;
        let mut g = DynOrientedGraph::new(n as usize);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..800 {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v {
                continue;
            }
            let ev = if g.has_edge(NodeId(u), NodeId(v)) {
                UpdateEvent::delete(u, v)
            } else {
                UpdateEvent::insert(u, v)
            };
            g.apply_update(ev).unwrap();
        }
        let ag = g.arc_graph();
        for u in 0..n {
            let u = NodeId(u);
            let sorted: Vec<NodeId> = ag.neighbors(u).collect();
            assert!(sorted.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(ag.neighbor_min(u), sorted.first().copied());
            for probe in 0..n {
                let probe = NodeId(probe);
                let succ = sorted.iter().copied().find(|&w| w > probe);
                assert_eq!(ag.neighbor_successor(u, probe), succ);
                let rank = sorted.iter().filter(|&&w| w < probe).count();
                assert_eq!(ag.neighbor_rank(u, probe), rank);
            }
        }
    }

    proptest! {
        /// Any interleaving of valid inserts/deletes keeps the arc count and
        /// the undirected edge set in lockstep.
        #[test]
        fn edge_and_arc_counts_agree(seed in 0u64..500) {
            let n = 12u32;
            let mut g = DynOrientedGraph::new(n as usize);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            for _ in 0..200 {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u == v { continue; }
                let ev = if g.has_edge(NodeId(u), NodeId(v)) {
                    UpdateEvent::delete(u, v)
                } else {
                    UpdateEvent::insert(u, v)
                };
                g.apply_update(ev).unwrap();
                prop_assert_eq!(g.edge_count(), g.arc_graph().arc_count());
                prop_assert_eq!(g.edge_count(), g.arc_graph().undirected_edges().len());
            }
        }
    }
}
