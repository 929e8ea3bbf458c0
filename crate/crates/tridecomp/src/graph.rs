//! Loop-free multigraphs with stable integer edge identities.
//!
//! Every algorithm in this crate works on edge ids rather than vertex pairs,
//! because decompositions and certificates must distinguish parallel edges.
//! Edge ids are dense (`0..edge_count`) and fixed at construction time.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// An edge joins a vertex to itself.
    LoopEdge { edge_index: usize, vertex: VertexId },
    /// An endpoint is not a valid vertex index.
    VertexOutOfRange { edge_index: usize, vertex: VertexId, vertex_count: usize },
    /// A multiplicity query was made with both endpoints equal.
    SameVertex(VertexId),
    /// An edge id does not exist in the graph.
    EdgeOutOfRange(EdgeId),
    /// Three edge ids do not form a closed walk on three distinct vertices.
    NotATriangle([EdgeId; 3]),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::LoopEdge { edge_index, vertex } => {
                write!(f, "edge {edge_index} is a loop at vertex {vertex}")
            }
            GraphError::VertexOutOfRange { edge_index, vertex, vertex_count } => write!(
                f,
                "edge {edge_index} references vertex {vertex} but the graph has {vertex_count} vertices"
            ),
            GraphError::SameVertex(v) => write!(f, "multiplicity of ({v},{v}) is undefined"),
            GraphError::EdgeOutOfRange(e) => write!(f, "edge id {e} out of range"),
            GraphError::NotATriangle([a, b, c]) => {
                write!(f, "edges {a},{b},{c} do not form a triangle")
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// A loop-free multigraph. Parallel edges are allowed and carry distinct ids.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertex_count: usize,
    endpoints: Vec<(VertexId, VertexId)>,
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multigraph(n={}, m={}, {:?})", self.vertex_count, self.endpoints.len(), self.endpoints)
    }
}

impl Multigraph {
    /// Builds a multigraph from an endpoint list. Edge ids are assigned in
    /// input order. Loops and out-of-range endpoints are rejected.
    pub fn new(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count {
                return Err(GraphError::VertexOutOfRange { edge_index: i, vertex: u, vertex_count });
            }
            if v >= vertex_count {
                return Err(GraphError::VertexOutOfRange { edge_index: i, vertex: v, vertex_count });
            }
            if u == v {
                return Err(GraphError::LoopEdge { edge_index: i, vertex: u });
            }
        }
        Ok(Multigraph { vertex_count, endpoints: edges.to_vec() })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.endpoints[e]
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, (VertexId, VertexId))> + '_ {
        self.endpoints.iter().copied().enumerate()
    }

    /// Number of edges joining `u` and `v` (the paper's mu(u,v)).
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> Result<usize, GraphError> {
        if u == v {
            return Err(GraphError::SameVertex(u));
        }
        Ok(self
            .endpoints
            .iter()
            .filter(|&&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
            .count())
    }

    /// Ids of all edges joining `u` and `v`, ascending.
    pub fn pair_edges(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.endpoints
            .iter()
            .enumerate()
            .filter(|&(_, &(a, b))| (a, b) == (u, v) || (a, b) == (v, u))
            .map(|(e, _)| e)
            .collect()
    }

    /// Per-vertex incidence lists `(neighbor, edge id)`, sorted.
    pub fn adjacency(&self) -> Vec<Vec<(VertexId, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, &(u, v)) in self.endpoints.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Degree counting multiplicity.
    pub fn degree(&self, v: VertexId) -> usize {
        self.endpoints
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Distinct neighbors of `v`, ascending.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .endpoints
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// True iff no pair of vertices is joined by more than one edge.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        for &(u, v) in &self.endpoints {
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return false;
            }
        }
        true
    }

    /// True iff every vertex is reachable from every other. The empty graph
    /// and the one-vertex graph count as connected.
    pub fn is_connected(&self) -> bool {
        if self.vertex_count <= 1 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.vertex_count
    }

    /// Connected with all degrees even.
    pub fn is_eulerian(&self) -> bool {
        self.is_connected() && (0..self.vertex_count).all(|v| self.degree(v) % 2 == 0)
    }

    /// Eulerian with edge count divisible by three.
    pub fn is_k3_divisible(&self) -> bool {
        self.is_eulerian() && self.edge_count() % 3 == 0
    }

    /// K3-divisible and every edge lies in at least one triangle.
    pub fn is_strongly_k3_divisible(&self) -> bool {
        if !self.is_k3_divisible() {
            return false;
        }
        let mut in_triangle = vec![false; self.edge_count()];
        for t in self.enumerate_triangles() {
            for e in t.edge_ids() {
                in_triangle[e] = true;
            }
        }
        in_triangle.into_iter().all(|b| b)
    }

    /// All triangles of the graph as edge-id triples, in canonical order.
    ///
    /// Each pairwise-adjacent vertex triple {u,v,w} contributes
    /// mu(u,v) * mu(v,w) * mu(w,u) triangles.
    pub fn enumerate_triangles(&self) -> Vec<Triangle> {
        let mut pair_map: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
        for (e, &(u, v)) in self.endpoints.iter().enumerate() {
            pair_map.entry((u.min(v), u.max(v))).or_default().push(e);
        }
        let mut out = Vec::new();
        let verts: Vec<VertexId> = {
            let mut vs: Vec<VertexId> = self
                .endpoints
                .iter()
                .flat_map(|&(u, v)| [u, v])
                .collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        };
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                let Some(uv) = pair_map.get(&(u, v)) else { continue };
                for &w in verts.iter().skip(j + 1) {
                    let (Some(vw), Some(uw)) = (pair_map.get(&(v.min(w), v.max(w))), pair_map.get(&(u.min(w), u.max(w)))) else {
                        continue;
                    };
                    for &a in uv {
                        for &b in vw {
                            for &c in uw {
                                out.push(Triangle::from_sorted_unchecked(sort3(a, b, c)));
                            }
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Biconnected components, edge-partitioned, with id remapping tables.
    /// Blocks are ordered by their smallest parent edge id.
    pub fn blocks(&self) -> Vec<Block> {
        let adj = self.adjacency();
        let n = self.vertex_count;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0usize;
        let mut edge_stack: Vec<EdgeId> = Vec::new();
        let mut block_edge_sets: Vec<Vec<EdgeId>> = Vec::new();

        // Iterative DFS; frames are (vertex, incidence cursor, entry edge).
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(VertexId, usize, Option<EdgeId>)> = vec![(root, 0, None)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (u, ref mut cursor, entry_edge)) = stack.last_mut() {
                if *cursor < adj[u].len() {
                    let (w, e) = adj[u][*cursor];
                    *cursor += 1;
                    if Some(e) == entry_edge {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        edge_stack.push(e);
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, 0, Some(e)));
                    } else if disc[w] < disc[u] {
                        // back edge (parallel edges to the entry edge land here too)
                        edge_stack.push(e);
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (p, _, _)) = stack.last_mut() {
                        low[p] = low[p].min(low[u]);
                        if low[u] >= disc[p] {
                            // p separates u's subtree; the edges above the
                            // entry edge of u form one block
                            let opened =
                                entry_edge.expect("non-root frame always has an entry edge");
                            let mut members = Vec::new();
                            while let Some(e) = edge_stack.pop() {
                                members.push(e);
                                if e == opened {
                                    break;
                                }
                            }
                            block_edge_sets.push(members);
                        }
                    }
                }
            }
        }

        let mut blocks: Vec<Block> = block_edge_sets
            .into_iter()
            .map(|mut edge_ids| {
                edge_ids.sort_unstable();
                let mut vertex_ids: Vec<VertexId> = edge_ids
                    .iter()
                    .flat_map(|&e| {
                        let (u, v) = self.endpoints[e];
                        [u, v]
                    })
                    .collect();
                vertex_ids.sort_unstable();
                vertex_ids.dedup();
                let vertex_index: BTreeMap<VertexId, usize> =
                    vertex_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                let endpoints: Vec<(VertexId, VertexId)> = edge_ids
                    .iter()
                    .map(|&e| {
                        let (u, v) = self.endpoints[e];
                        (vertex_index[&u], vertex_index[&v])
                    })
                    .collect();
                Block {
                    graph: Multigraph { vertex_count: vertex_ids.len(), endpoints },
                    edge_map: edge_ids,
                    vertex_map: vertex_ids,
                }
            })
            .collect();
        blocks.sort_by_key(|b| b.edge_map.first().copied().unwrap_or(usize::MAX));
        blocks
    }

    /// The multigraph obtained by replacing each edge with two parallel
    /// copies. Edge `e` maps to the copies `2e` and `2e + 1`.
    pub fn double(&self) -> DoubledGraph {
        let mut endpoints = Vec::with_capacity(2 * self.endpoints.len());
        let mut pairs = Vec::with_capacity(self.endpoints.len());
        for &(u, v) in &self.endpoints {
            let a = endpoints.len();
            endpoints.push((u, v));
            endpoints.push((u, v));
            pairs.push((a, a + 1));
        }
        DoubledGraph {
            graph: Multigraph { vertex_count: self.vertex_count, endpoints },
            pairs,
        }
    }

    /// Spanning subgraph keeping exactly the edges in `keep` (deduplicated,
    /// sorted). Returned edge ids are dense; the map gives new id -> old id.
    pub fn edge_subgraph(&self, keep: &[EdgeId]) -> (Multigraph, Vec<EdgeId>) {
        let mut ids: Vec<EdgeId> = keep.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let endpoints = ids.iter().map(|&e| self.endpoints[e]).collect();
        (Multigraph { vertex_count: self.vertex_count, endpoints }, ids)
    }
}

/// One biconnected component of a multigraph, with remapping tables back to
/// the parent graph. `edge_map[i]` is the parent id of block edge `i`.
#[derive(Debug, Clone)]
pub struct Block {
    pub graph: Multigraph,
    pub edge_map: Vec<EdgeId>,
    pub vertex_map: Vec<VertexId>,
}

/// A simple graph's doubling: `pairs[e]` holds the ids in `graph` of the two
/// copies of the original edge `e`.
#[derive(Debug, Clone)]
pub struct DoubledGraph {
    pub graph: Multigraph,
    pub pairs: Vec<(EdgeId, EdgeId)>,
}

impl DoubledGraph {
    /// Original edge id for a copy id.
    pub fn primal_edge(&self, copy: EdgeId) -> EdgeId {
        copy / 2
    }
}

fn sort3(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

/// An unordered triple of distinct edge ids forming a closed 3-walk on three
/// distinct vertices. Stored with strictly increasing ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle {
    edges: [EdgeId; 3],
}

impl Triangle {
    /// Validates that the three edges form a triangle of `g`.
    pub fn new(g: &Multigraph, a: EdgeId, b: EdgeId, c: EdgeId) -> Result<Self, GraphError> {
        let ids = sort3(a, b, c);
        for &e in &ids {
            if e >= g.edge_count() {
                return Err(GraphError::EdgeOutOfRange(e));
            }
        }
        if ids[0] == ids[1] || ids[1] == ids[2] {
            return Err(GraphError::NotATriangle(ids));
        }
        let pairs: Vec<(VertexId, VertexId)> = ids
            .iter()
            .map(|&e| {
                let (u, v) = g.endpoints(e);
                (u.min(v), u.max(v))
            })
            .collect();
        let mut verts: Vec<VertexId> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
        verts.sort_unstable();
        verts.dedup();
        // Three distinct pair sets over exactly three vertices close the walk.
        if verts.len() != 3 || pairs[0] == pairs[1] || pairs[1] == pairs[2] || pairs[0] == pairs[2] {
            return Err(GraphError::NotATriangle(ids));
        }
        Ok(Triangle { edges: ids })
    }

    pub(crate) fn from_sorted_unchecked(edges: [EdgeId; 3]) -> Self {
        Triangle { edges }
    }

    pub fn edge_ids(&self) -> [EdgeId; 3] {
        self.edges
    }

    /// The triangle's vertex set, ascending.
    pub fn vertices(&self, g: &Multigraph) -> [VertexId; 3] {
        let mut verts: Vec<VertexId> = self
            .edges
            .iter()
            .flat_map(|&e| {
                let (u, v) = g.endpoints(e);
                [u, v]
            })
            .collect();
        verts.sort_unstable();
        verts.dedup();
        [verts[0], verts[1], verts[2]]
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }
}
