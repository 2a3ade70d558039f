//! Connected components.
//!
//! [`largest_component`] is the measurement path (union-find). The
//! exploration process in [`explore_component`] reveals one component step by
//! step with active/saturated/neutral states and records the active-set
//! sizes; it exists for trace output and cross-checks, not throughput.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{torus_distance, Vertex};
use crate::model::Graph;

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Returns `false` if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn component_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }

    /// Sizes of all components, descending.
    pub fn sizes(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).filter(|&i| self.find(i) == i).collect();
        let mut sizes: Vec<usize> = roots.into_iter().map(|i| self.size[i] as usize).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

/// Component sizes of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    /// Descending.
    pub sizes: Vec<usize>,
    pub largest: usize,
    pub count: usize,
}

impl ComponentSummary {
    pub fn from_sizes(mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            largest: sizes.first().copied().unwrap_or(0),
            count: sizes.len(),
            sizes,
        }
    }
}

pub fn largest_component(g: &Graph) -> ComponentSummary {
    let mut uf = UnionFind::new(g.n_vertices());
    for (a, b) in g.edges() {
        uf.union(a, b);
    }
    ComponentSummary::from_sizes(uf.sizes())
}

/// Activations at one distance during one exploration step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingStep {
    pub ring: u32,
    /// Neutral vertices at this distance from the explored vertex that became active.
    pub activated: usize,
    /// Active or saturated vertices at this distance before the step.
    pub revealed: usize,
}

/// One step of the exploration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub i: usize,
    /// Number of active vertices after the step.
    pub active: usize,
    /// Number of vertices activated in the step.
    pub activated: usize,
    /// The active vertex that was saturated.
    pub vertex: Vertex,
    /// Per-distance breakdown, only when requested; rings with no activity are omitted.
    pub rings: Option<Vec<RingStep>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplorationTrace {
    pub start: Vertex,
    pub steps: Vec<TraceStep>,
}

#[derive(Serialize)]
struct JsonStep {
    i: usize,
    #[serde(rename = "S")]
    active: usize,
    #[serde(rename = "X")]
    activated: usize,
}

impl ExplorationTrace {
    /// Stopping time: the number of steps, equal to the component size.
    pub fn stopping_time(&self) -> usize {
        self.steps.len()
    }

    /// Whether the active-set recursion and the stopping rule hold at every step.
    pub fn is_consistent(&self) -> bool {
        let mut active = 1isize;
        let mut cumulative = 0usize;
        for (k, s) in self.steps.iter().enumerate() {
            let i = k + 1;
            active += s.activated as isize - 1;
            cumulative += s.activated;
            if s.i != i || s.active as isize != active {
                return false;
            }
            if (cumulative + 1 == i) != (i == self.steps.len()) {
                return false;
            }
        }
        !self.steps.is_empty() && active == 0
    }

    /// JSON lines, one `{"i":..,"S":..,"X":..}` object per step.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for s in &self.steps {
            let rec = JsonStep {
                i: s.i,
                active: s.active,
                activated: s.activated,
            };
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExploreOptions {
    /// Record per-distance activation counts at each step.
    pub record_rings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Neutral,
    Active,
    Saturated,
}

fn explore_from<R: Rng + ?Sized>(
    g: &Graph,
    start: usize,
    state: &mut [State],
    rng: &mut R,
    opts: ExploreOptions,
) -> ExplorationTrace {
    let torus = g.torus();
    let mut active = vec![start];
    let mut revealed = vec![start];
    state[start] = State::Active;
    let mut steps = Vec::new();
    while !active.is_empty() {
        let pick = rng.random_range(0..active.len());
        let v = active.swap_remove(pick);
        let v_vertex = torus.vertex(v);
        let mut rings = opts.record_rings.then(Vec::<RingStep>::new);
        if let Some(rings) = rings.as_mut() {
            for &u in &revealed {
                if u != v {
                    let r = torus_distance(v_vertex, torus.vertex(u), torus);
                    ring_entry(rings, r).revealed += 1;
                }
            }
        }
        let mut activated = 0;
        for &u in g.neighbors(v) {
            let u = u as usize;
            if state[u] == State::Neutral {
                state[u] = State::Active;
                active.push(u);
                revealed.push(u);
                activated += 1;
                if let Some(rings) = rings.as_mut() {
                    let r = torus_distance(v_vertex, torus.vertex(u), torus);
                    ring_entry(rings, r).activated += 1;
                }
            }
        }
        state[v] = State::Saturated;
        if let Some(rings) = rings.as_mut() {
            rings.sort_by_key(|s| s.ring);
        }
        steps.push(TraceStep {
            i: steps.len() + 1,
            active: active.len(),
            activated,
            vertex: v_vertex,
            rings,
        });
    }
    ExplorationTrace {
        start: torus.vertex(start),
        steps,
    }
}

fn ring_entry(rings: &mut Vec<RingStep>, ring: u32) -> &mut RingStep {
    let pos = match rings.iter().position(|s| s.ring == ring) {
        Some(p) => p,
        None => {
            rings.push(RingStep {
                ring,
                activated: 0,
                revealed: 0,
            });
            rings.len() - 1
        }
    };
    &mut rings[pos]
}

/// Explore the component of `v`, choosing the next active vertex uniformly at random.
pub fn explore_component<R: Rng + ?Sized>(g: &Graph, v: Vertex, rng: &mut R) -> ExplorationTrace {
    explore_component_with(g, v, rng, ExploreOptions::default())
}

pub fn explore_component_with<R: Rng + ?Sized>(
    g: &Graph,
    v: Vertex,
    rng: &mut R,
    opts: ExploreOptions,
) -> ExplorationTrace {
    let mut state = vec![State::Neutral; g.n_vertices()];
    explore_from(g, g.torus().index(v), &mut state, rng, opts)
}

/// Split the graph into components by repeated exploration, each new start
/// uniform among the vertices not yet explored.
pub fn component_decomposition<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Vec<ExplorationTrace> {
    let n = g.n_vertices();
    let mut state = vec![State::Neutral; n];
    // The first unexplored vertex of a uniform permutation is uniform among the unexplored.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut traces = Vec::new();
    for start in order {
        if state[start] == State::Neutral {
            traces.push(explore_from(g, start, &mut state, rng, ExploreOptions::default()));
        }
    }
    traces
}
