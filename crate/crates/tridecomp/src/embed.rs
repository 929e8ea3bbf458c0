//! Combinatorial plane embeddings.
//!
//! An embedding is a rotation system: a cyclic order of darts (edge ends) at
//! each vertex. Dart `2e` is the end of edge `e` at `endpoints(e).0`, dart
//! `2e + 1` the end at `endpoints(e).1`. Faces are traversed with the fixed
//! convention "next dart = cyclic successor of the reversal", i.e.
//! `phi(d) = sigma(reverse(d))`; genus zero is enforced per connected
//! component via Euler's formula.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use crate::graph::{EdgeId, Multigraph, VertexId};

pub type Dart = usize;

pub fn dart(edge: EdgeId, side: usize) -> Dart {
    2 * edge + side
}

pub fn dart_edge(d: Dart) -> EdgeId {
    d / 2
}

pub fn dart_reverse(d: Dart) -> Dart {
    d ^ 1
}

/// The endpoint a dart emanates from.
pub fn dart_tail(g: &Multigraph, d: Dart) -> VertexId {
    let (u, v) = g.endpoints(dart_edge(d));
    if d % 2 == 0 {
        u
    } else {
        v
    }
}

/// The endpoint a dart points to.
pub fn dart_head(g: &Multigraph, d: Dart) -> VertexId {
    dart_tail(g, dart_reverse(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbedError {
    NotPlanar,
    /// The dart lists do not form a rotation system of the graph.
    InvalidRotation(String),
    /// The rotation system is valid but not spherical.
    NotGenusZero,
}

impl fmt::Display for EmbedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbedError::NotPlanar => write!(f, "graph is not planar"),
            EmbedError::InvalidRotation(msg) => write!(f, "invalid rotation system: {msg}"),
            EmbedError::NotGenusZero => write!(f, "rotation system is not genus zero"),
        }
    }
}

impl std::error::Error for EmbedError {}

/// A genus-zero rotation system of a multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    rotations: Vec<Vec<Dart>>,
    dart_tail: Vec<VertexId>,
}

impl RotationSystem {
    /// Validates that `rotations` lists every dart exactly once at its tail
    /// vertex and that every edged component satisfies V - E + F = 2.
    pub fn new(g: &Multigraph, rotations: Vec<Vec<Dart>>) -> Result<Self, EmbedError> {
        if rotations.len() != g.vertex_count() {
            return Err(EmbedError::InvalidRotation(format!(
                "expected {} rotation lists, got {}",
                g.vertex_count(),
                rotations.len()
            )));
        }
        let dart_count = 2 * g.edge_count();
        let mut seen = vec![false; dart_count];
        for (v, rot) in rotations.iter().enumerate() {
            for &d in rot {
                if d >= dart_count {
                    return Err(EmbedError::InvalidRotation(format!("dart {d} out of range")));
                }
                if seen[d] {
                    return Err(EmbedError::InvalidRotation(format!("dart {d} listed twice")));
                }
                seen[d] = true;
                if dart_tail(g, d) != v {
                    return Err(EmbedError::InvalidRotation(format!(
                        "dart {d} listed at vertex {v} but tails at {}",
                        dart_tail(g, d)
                    )));
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(EmbedError::InvalidRotation("missing darts".into()));
        }
        let tails: Vec<VertexId> = (0..dart_count).map(|d| dart_tail(g, d)).collect();
        let rs = RotationSystem { rotations, dart_tail: tails };
        if !rs.is_genus_zero(g) {
            return Err(EmbedError::NotGenusZero);
        }
        Ok(rs)
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotations
    }

    pub fn dart_count(&self) -> usize {
        self.dart_tail.len()
    }

    pub fn tail(&self, d: Dart) -> VertexId {
        self.dart_tail[d]
    }

    /// Cyclic successor permutation at the tail vertices.
    fn sigma(&self) -> Vec<Dart> {
        let mut sigma = vec![0; self.dart_tail.len()];
        for rot in &self.rotations {
            for (i, &d) in rot.iter().enumerate() {
                sigma[d] = rot[(i + 1) % rot.len()];
            }
        }
        sigma
    }

    /// Face boundaries as dart cycles. Each face starts at its smallest dart
    /// and faces are ordered by that dart, so the output is deterministic.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        faces_from_sigma(&self.sigma())
    }

    /// Face index of every dart, aligned with `faces()`.
    pub fn face_of_darts(&self) -> Vec<usize> {
        let faces = self.faces();
        let mut face_of = vec![usize::MAX; self.dart_tail.len()];
        for (i, f) in faces.iter().enumerate() {
            for &d in f {
                face_of[d] = i;
            }
        }
        face_of
    }

    fn is_genus_zero(&self, g: &Multigraph) -> bool {
        genus_zero(g, &self.sigma())
    }
}

fn faces_from_sigma(sigma: &[Dart]) -> Vec<Vec<Dart>> {
    let mut visited = vec![false; sigma.len()];
    let mut faces = Vec::new();
    for start in 0..sigma.len() {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut d = start;
        loop {
            visited[d] = true;
            cycle.push(d);
            d = sigma[dart_reverse(d)];
            if d == start {
                break;
            }
        }
        faces.push(cycle);
    }
    faces
}

/// Component ids per vertex, plus (vertex count, edge count) per component.
fn components(g: &Multigraph) -> (Vec<usize>, Vec<(usize, usize)>) {
    let adj = g.adjacency();
    let mut comp = vec![usize::MAX; g.vertex_count()];
    let mut stats: Vec<(usize, usize)> = Vec::new();
    for start in 0..g.vertex_count() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = stats.len();
        stats.push((0, 0));
        let mut queue = VecDeque::from([start]);
        comp[start] = id;
        while let Some(u) = queue.pop_front() {
            stats[id].0 += 1;
            for &(w, _) in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    queue.push_back(w);
                }
            }
        }
    }
    for (_, &(u, _)) in g.edges() {
        stats[comp[u]].1 += 1;
    }
    (comp, stats)
}

fn genus_zero(g: &Multigraph, sigma: &[Dart]) -> bool {
    let (comp, stats) = components(g);
    let mut face_count = vec![0usize; stats.len()];
    let mut visited = vec![false; sigma.len()];
    for start in 0..sigma.len() {
        if visited[start] {
            continue;
        }
        let mut d = start;
        loop {
            visited[d] = true;
            d = sigma[dart_reverse(d)];
            if d == start {
                break;
            }
        }
        let (u, _) = g.endpoints(dart_edge(start));
        face_count[comp[u]] += 1;
    }
    stats.iter().enumerate().all(|(id, &(v, e))| {
        // edgeless components are trivially spherical
        e == 0 || v + face_count[id] == e + 2
    })
}

/// Computes a plane embedding of `g`, or reports that none exists.
///
/// Blocks are embedded independently (Demoucron's method on the underlying
/// simple graph, then parallel edges nested next to their representative)
/// and joined at cut vertices by concatenating rotations. Deterministic for
/// a fixed input.
pub fn embed(g: &Multigraph) -> Result<RotationSystem, EmbedError> {
    let mut rotations: Vec<Vec<Dart>> = vec![Vec::new(); g.vertex_count()];
    for block in g.blocks() {
        for (v, rot) in embed_block(g, &block.edge_map)? {
            rotations[v].extend(rot);
        }
    }
    Ok(RotationSystem::new(g, rotations)
        .expect("block embedding produces a valid rotation system"))
}

/// Embeds one block (2-connected or a single edge), returning its rotation
/// contribution per vertex. Edge ids are parent ids.
fn embed_block(
    g: &Multigraph,
    block_edges: &[EdgeId],
) -> Result<Vec<(VertexId, Vec<Dart>)>, EmbedError> {
    // Group parallel edges; representatives are the smallest id per pair.
    let mut bundles: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
    for &e in block_edges {
        let (u, v) = g.endpoints(e);
        bundles.entry((u.min(v), u.max(v))).or_default().push(e);
    }
    for ids in bundles.values_mut() {
        ids.sort_unstable();
    }

    let reps: Vec<EdgeId> = bundles.values().map(|ids| ids[0]).collect();

    let mut rotations: BTreeMap<VertexId, Vec<Dart>> = BTreeMap::new();
    if reps.len() == 1 {
        // A bundle on two vertices: nest the copies.
        let ids = bundles.values().next().unwrap();
        let (u, v) = g.endpoints(ids[0]);
        let (u, v) = (u.min(v), u.max(v));
        let at = |e: EdgeId, x: VertexId| -> Dart {
            if g.endpoints(e).0 == x {
                dart(e, 0)
            } else {
                dart(e, 1)
            }
        };
        rotations.insert(u, ids.iter().map(|&e| at(e, u)).collect());
        rotations.insert(v, ids.iter().rev().map(|&e| at(e, v)).collect());
        return Ok(rotations.into_iter().collect());
    }

    // Demoucron on the simple representative graph.
    let faces = demoucron_faces(g, &reps)?;

    // sigma(d) = successor of reverse(d) within its face.
    let mut next_in_face: BTreeMap<Dart, Dart> = BTreeMap::new();
    for f in &faces {
        for (i, &d) in f.iter().enumerate() {
            next_in_face.insert(d, f[(i + 1) % f.len()]);
        }
    }
    let sigma =
        |d: Dart| -> Dart { *next_in_face.get(&dart_reverse(d)).expect("complete face set") };
    let mut darts_at: BTreeMap<VertexId, Vec<Dart>> = BTreeMap::new();
    for f in &faces {
        for &d in f {
            darts_at.entry(dart_tail(g, d)).or_default().push(d);
        }
    }
    for (&v, darts) in &darts_at {
        let start = *darts.iter().min().unwrap();
        let mut rot = vec![start];
        let mut d = sigma(start);
        while d != start {
            rot.push(d);
            d = sigma(d);
        }
        debug_assert_eq!(rot.len(), darts.len());
        rotations.insert(v, rot);
    }

    // Insert the remaining parallel copies next to their representatives:
    // ascending after the representative on one side, descending before it
    // on the other, so each extra copy adds one bigon face.
    for ((u, v), ids) in &bundles {
        if ids.len() < 2 {
            continue;
        }
        let rep = ids[0];
        let at = |e: EdgeId, x: VertexId| -> Dart {
            if g.endpoints(e).0 == x {
                dart(e, 0)
            } else {
                dart(e, 1)
            }
        };
        let rot_u = rotations.get_mut(u).unwrap();
        let pos = rot_u.iter().position(|&d| d == at(rep, *u)).unwrap();
        for (k, &e) in ids[1..].iter().enumerate() {
            rot_u.insert(pos + 1 + k, at(e, *u));
        }
        let rot_v = rotations.get_mut(v).unwrap();
        let pos = rot_v.iter().position(|&d| d == at(rep, *v)).unwrap();
        for &e in ids[1..].iter() {
            rot_v.insert(pos, at(e, *v));
        }
    }

    Ok(rotations.into_iter().collect())
}

/// Demoucron-Malgrange-Pertuiset planar embedding of a 2-connected simple
/// graph given by parent edge ids. Returns the face set as dart cycles.
fn demoucron_faces(g: &Multigraph, edges: &[EdgeId]) -> Result<Vec<Vec<Dart>>, EmbedError> {
    let mut adj: BTreeMap<VertexId, Vec<(VertexId, EdgeId)>> = BTreeMap::new();
    for &e in edges {
        let (u, v) = g.endpoints(e);
        adj.entry(u).or_default().push((v, e));
        adj.entry(v).or_default().push((u, e));
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }

    let mut embedded_v: HashSet<VertexId> = HashSet::new();
    let mut embedded_e: HashSet<EdgeId> = HashSet::new();
    let mut faces: Vec<Vec<Dart>> = Vec::new();

    // Seed with any cycle (one exists: the block is 2-connected with >= 3
    // vertices here). The two traversal directions bound the two faces.
    let cycle = find_cycle(&adj);
    let forward: Vec<Dart> = cycle
        .iter()
        .map(|&(x, e)| if g.endpoints(e).0 == x { dart(e, 0) } else { dart(e, 1) })
        .collect();
    let backward: Vec<Dart> = forward.iter().rev().map(|&d| dart_reverse(d)).collect();
    for &(x, e) in &cycle {
        embedded_v.insert(x);
        embedded_e.insert(e);
    }
    faces.push(forward);
    faces.push(backward);

    while embedded_e.len() < edges.len() {
        let bridges = compute_bridges(&adj, &embedded_v, &embedded_e);
        debug_assert!(!bridges.is_empty());

        // Admissible faces contain all attachment vertices on their boundary.
        let boundary_sets: Vec<HashSet<VertexId>> = faces
            .iter()
            .map(|f| f.iter().map(|&d| dart_tail(g, d)).collect())
            .collect();
        let mut chosen: Option<(usize, usize, usize)> = None; // (count, bridge, face)
        for (bi, bridge) in bridges.iter().enumerate() {
            let admissible: Vec<usize> = boundary_sets
                .iter()
                .enumerate()
                .filter(|(_, b)| bridge.attachments.iter().all(|a| b.contains(a)))
                .map(|(i, _)| i)
                .collect();
            if admissible.is_empty() {
                return Err(EmbedError::NotPlanar);
            }
            let cand = (admissible.len(), bi, admissible[0]);
            if chosen.map_or(true, |c| cand.0 < c.0) {
                chosen = Some(cand);
            }
        }
        let (_, bi, fi) = chosen.unwrap();
        let path = alpha_path(g, &adj, &bridges[bi], &embedded_v);
        embed_path(g, &mut faces, fi, &path);
        for &(x, e) in &path {
            embedded_v.insert(x);
            if let Some(e) = e {
                embedded_e.insert(e);
            }
        }
    }
    Ok(faces)
}

/// A cycle as a list of (vertex, edge to the next vertex).
fn find_cycle(adj: &BTreeMap<VertexId, Vec<(VertexId, EdgeId)>>) -> Vec<(VertexId, EdgeId)> {
    let start = *adj.keys().next().expect("nonempty block");
    let mut parent: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
    let mut on_path: HashSet<VertexId> = HashSet::new();
    let mut visited: HashSet<VertexId> = HashSet::new();
    let mut stack: Vec<(VertexId, usize, Option<EdgeId>)> = vec![(start, 0, None)];
    visited.insert(start);
    on_path.insert(start);
    while let Some(&mut (u, ref mut cursor, entry)) = stack.last_mut() {
        if *cursor >= adj[&u].len() {
            stack.pop();
            on_path.remove(&u);
            continue;
        }
        let (w, e) = adj[&u][*cursor];
        *cursor += 1;
        if Some(e) == entry {
            continue;
        }
        if !visited.contains(&w) {
            visited.insert(w);
            on_path.insert(w);
            parent.insert(w, (u, e));
            stack.push((w, 0, Some(e)));
        } else if on_path.contains(&w) {
            // climb from u back to w, then close with e
            let mut verts = vec![u];
            let mut cur = u;
            while cur != w {
                let (p, pe) = parent[&cur];
                verts.push(p);
                cur = p;
                let _ = pe;
            }
            verts.reverse(); // w .. u
            let mut cycle = Vec::new();
            for i in 0..verts.len() - 1 {
                let (_, pe) = parent[&verts[i + 1]];
                cycle.push((verts[i], pe));
            }
            cycle.push((u, e));
            return cycle;
        }
    }
    unreachable!("2-connected block contains a cycle");
}

struct Bridge {
    attachments: Vec<VertexId>,
    /// Component vertices (empty for a chord).
    inner: Vec<VertexId>,
    /// Chord edge, if the bridge is a single embedded-to-embedded edge.
    chord: Option<EdgeId>,
}

fn compute_bridges(
    g: &Multigraph,
    adj: &BTreeMap<VertexId, Vec<(VertexId, EdgeId)>>,
    embedded_v: &HashSet<VertexId>,
    embedded_e: &HashSet<EdgeId>,
) -> Vec<Bridge> {
    let mut bridges = Vec::new();
    let mut chord_seen: HashSet<EdgeId> = HashSet::new();
    for (&u, list) in adj {
        if !embedded_v.contains(&u) {
            continue;
        }
        for &(w, e) in list {
            if embedded_e.contains(&e) || chord_seen.contains(&e) {
                continue;
            }
            if embedded_v.contains(&w) {
                chord_seen.insert(e);
                let mut attachments = vec![u.min(w), u.max(w)];
                attachments.dedup();
                bridges.push(Bridge { attachments, inner: Vec::new(), chord: Some(e) });
            }
        }
    }
    let _ = g;
    // Components of the unembedded vertices, together with their edges to
    // the embedded part.
    let mut comp_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    for &v in adj.keys() {
        if embedded_v.contains(&v) || comp_of.contains_key(&v) {
            continue;
        }
        let id = comps.len();
        comps.push(Vec::new());
        let mut queue = VecDeque::from([v]);
        comp_of.insert(v, id);
        while let Some(x) = queue.pop_front() {
            comps[id].push(x);
            for &(w, _) in &adj[&x] {
                if !embedded_v.contains(&w) && !comp_of.contains_key(&w) {
                    comp_of.insert(w, id);
                    queue.push_back(w);
                }
            }
        }
    }
    for inner in comps {
        let mut attachments: Vec<VertexId> = inner
            .iter()
            .flat_map(|x| adj[x].iter().filter(|(w, _)| embedded_v.contains(w)).map(|&(w, _)| w))
            .collect();
        attachments.sort_unstable();
        attachments.dedup();
        let mut inner = inner;
        inner.sort_unstable();
        bridges.push(Bridge { attachments, inner, chord: None });
    }
    // Deterministic order: chords by edge id, then components by smallest vertex.
    bridges.sort_by_key(|b| match b.chord {
        Some(e) => (0, e, 0),
        None => (1, 0, b.inner[0]),
    });
    bridges
}

/// A path through the bridge between two distinct attachment vertices whose
/// interior avoids the embedded subgraph. Entries are (vertex, edge to next).
fn alpha_path(
    g: &Multigraph,
    adj: &BTreeMap<VertexId, Vec<(VertexId, EdgeId)>>,
    bridge: &Bridge,
    embedded_v: &HashSet<VertexId>,
) -> Vec<(VertexId, Option<EdgeId>)> {
    let _ = g;
    if let Some(e) = bridge.chord {
        let [a, b] = [bridge.attachments[0], bridge.attachments[1]];
        return vec![(a, Some(e)), (b, None)];
    }
    let start = bridge.attachments[0];
    let inner: HashSet<VertexId> = bridge.inner.iter().copied().collect();
    let mut parent: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    let mut target = None;
    'bfs: while let Some(x) = queue.pop_front() {
        // never expand through an embedded vertex other than the start
        if x != start && embedded_v.contains(&x) {
            continue;
        }
        for &(w, e) in &adj[&x] {
            if w == start || parent.contains_key(&w) {
                continue;
            }
            if x == start && !inner.contains(&w) {
                continue; // leave the start only into the bridge component
            }
            parent.insert(w, (x, e));
            if embedded_v.contains(&w) {
                target = Some(w);
                break 'bfs;
            }
            queue.push_back(w);
        }
    }
    let target = target.expect("bridge has a second attachment");
    let mut rev = vec![(target, None)];
    let mut cur = target;
    while cur != start {
        let (p, e) = parent[&cur];
        rev.push((p, Some(e)));
        cur = p;
    }
    rev.reverse();
    rev
}

/// Splits face `fi` along the path, replacing it with the two new faces.
fn embed_path(
    g: &Multigraph,
    faces: &mut Vec<Vec<Dart>>,
    fi: usize,
    path: &[(VertexId, Option<EdgeId>)],
) {
    let u = path.first().unwrap().0;
    let w = path.last().unwrap().0;
    let path_darts: Vec<Dart> = path
        .iter()
        .filter_map(|&(x, e)| {
            e.map(|e| if g.endpoints(e).0 == x { dart(e, 0) } else { dart(e, 1) })
        })
        .collect();
    let face = faces.swap_remove(fi);
    let i = face
        .iter()
        .position(|&d| dart_tail(g, d) == u)
        .expect("attachment on face boundary");
    let j = face
        .iter()
        .position(|&d| dart_tail(g, d) == w)
        .expect("attachment on face boundary");
    debug_assert_ne!(i, j);
    let cyc = |from: usize, to: usize| -> Vec<Dart> {
        let mut out = Vec::new();
        let mut k = from;
        while k != to {
            out.push(face[k]);
            k = (k + 1) % face.len();
        }
        out
    };
    let mut face_a = path_darts.clone();
    face_a.extend(cyc(j, i));
    let mut face_b = cyc(i, j);
    face_b.extend(path_darts.iter().rev().map(|&d| dart_reverse(d)));
    faces.push(face_a);
    faces.push(face_b);
}

/// Enumerates rotation systems of a planar multigraph up to per-vertex
/// cyclic rotation, deduplicated by canonical face structure (faces as
/// cyclic edge-id sequences, orientation folded). Stops after examining
/// `cap` candidates; `was_truncated` reports whether the cap was hit.
pub fn enumerate_embeddings(g: &Multigraph, cap: u64) -> EmbeddingIter<'_> {
    let dart_count = 2 * g.edge_count();
    let mut at_vertex: Vec<Vec<Dart>> = vec![Vec::new(); g.vertex_count()];
    for d in 0..dart_count {
        at_vertex[dart_tail(g, d)].push(d);
    }
    let (comp, comp_stats) = components(g);
    EmbeddingIter {
        g,
        fixed: at_vertex.iter().map(|ds| ds.first().copied()).collect(),
        tails: at_vertex.iter().map(|ds| ds.get(1..).unwrap_or(&[]).to_vec()).collect(),
        comp,
        comp_stats,
        started: false,
        exhausted: g.vertex_count() == 0 && false,
        tried: 0,
        cap,
        truncated: false,
        seen: HashSet::new(),
    }
}

pub struct EmbeddingIter<'g> {
    g: &'g Multigraph,
    /// First dart at each vertex (fixed to quotient out cyclic rotation).
    fixed: Vec<Option<Dart>>,
    /// Remaining darts per vertex, permuted lexicographically.
    tails: Vec<Vec<Dart>>,
    comp: Vec<usize>,
    comp_stats: Vec<(usize, usize)>,
    started: bool,
    exhausted: bool,
    tried: u64,
    cap: u64,
    truncated: bool,
    seen: HashSet<Vec<Vec<EdgeId>>>,
}

impl EmbeddingIter<'_> {
    pub fn was_truncated(&self) -> bool {
        self.truncated
    }

    fn advance(&mut self) -> bool {
        for tail in self.tails.iter_mut() {
            if next_permutation(tail) {
                return true;
            }
        }
        false
    }

    fn current_sigma(&self) -> Vec<Dart> {
        let mut sigma = vec![0; 2 * self.g.edge_count()];
        for v in 0..self.g.vertex_count() {
            let Some(first) = self.fixed[v] else { continue };
            let mut rot = Vec::with_capacity(1 + self.tails[v].len());
            rot.push(first);
            rot.extend(&self.tails[v]);
            for (i, &d) in rot.iter().enumerate() {
                sigma[d] = rot[(i + 1) % rot.len()];
            }
        }
        sigma
    }

    fn current_rotations(&self) -> Vec<Vec<Dart>> {
        (0..self.g.vertex_count())
            .map(|v| match self.fixed[v] {
                Some(first) => {
                    let mut rot = vec![first];
                    rot.extend(&self.tails[v]);
                    rot
                }
                None => Vec::new(),
            })
            .collect()
    }

    fn genus_zero_with_counts(&self, sigma: &[Dart]) -> bool {
        let mut face_count = vec![0usize; self.comp_stats.len()];
        let mut visited = vec![false; sigma.len()];
        for start in 0..sigma.len() {
            if visited[start] {
                continue;
            }
            let mut d = start;
            loop {
                visited[d] = true;
                d = sigma[dart_reverse(d)];
                if d == start {
                    break;
                }
            }
            let (u, _) = self.g.endpoints(dart_edge(start));
            face_count[self.comp[u]] += 1;
        }
        self.comp_stats
            .iter()
            .enumerate()
            .all(|(id, &(v, e))| e == 0 || v + face_count[id] == e + 2)
    }
}

impl Iterator for EmbeddingIter<'_> {
    type Item = RotationSystem;

    fn next(&mut self) -> Option<RotationSystem> {
        loop {
            if self.exhausted || self.truncated {
                return None;
            }
            if self.started {
                if !self.advance() {
                    self.exhausted = true;
                    return None;
                }
            } else {
                self.started = true;
            }
            if self.tried == self.cap {
                self.truncated = true;
                return None;
            }
            self.tried += 1;
            let sigma = self.current_sigma();
            if !self.genus_zero_with_counts(&sigma) {
                continue;
            }
            let key = canonical_face_structure(&sigma);
            if !self.seen.insert(key) {
                continue;
            }
            let rs = RotationSystem::new(self.g, self.current_rotations())
                .expect("genus-zero candidate is a valid rotation system");
            return Some(rs);
        }
    }
}

/// Faces as canonical cyclic edge-id sequences (minimal rotation over both
/// directions), sorted. Mirror images collapse to the same key.
fn canonical_face_structure(sigma: &[Dart]) -> Vec<Vec<EdgeId>> {
    let mut visited = vec![false; sigma.len()];
    let mut faces = Vec::new();
    for start in 0..sigma.len() {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut d = start;
        loop {
            visited[d] = true;
            cycle.push(dart_edge(d));
            d = sigma[dart_reverse(d)];
            if d == start {
                break;
            }
        }
        faces.push(canonical_cycle(&cycle));
    }
    faces.sort_unstable();
    faces
}

fn canonical_cycle(seq: &[EdgeId]) -> Vec<EdgeId> {
    let n = seq.len();
    let mut best: Option<Vec<EdgeId>> = None;
    let reversed: Vec<EdgeId> = seq.iter().rev().copied().collect();
    for cand in [seq, reversed.as_slice()] {
        for s in 0..n {
            let rot: Vec<EdgeId> = (0..n).map(|i| cand[(s + i) % n]).collect();
            if best.as_ref().map_or(true, |b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// Lexicographic next permutation; false (and reset to sorted) on wrap.
fn next_permutation(arr: &mut [Dart]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        arr.sort_unstable();
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualError {
    /// Duals are defined for connected plane multigraphs only.
    Disconnected,
    /// A graph without edges has no meaningful dual here.
    EmptyGraph,
    /// A bridge would create a dual loop, which multigraphs exclude.
    BridgeLoop { edge: EdgeId },
}

impl fmt::Display for DualError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualError::Disconnected => write!(f, "dual of a disconnected graph is undefined"),
            DualError::EmptyGraph => write!(f, "dual of an edgeless graph is undefined"),
            DualError::BridgeLoop { edge } => {
                write!(f, "edge {edge} lies on one face only; its dual would be a loop")
            }
        }
    }
}

impl std::error::Error for DualError {}

/// The dual multigraph of an embedded connected multigraph.
///
/// Dual vertex `i` is face `i` of the primal embedding; dual edge `e`
/// corresponds to primal edge `e` (the bijection is the identity on ids) and
/// joins the faces on the two sides of `e`. The induced dual embedding is
/// carried along so that taking the dual twice is possible.
#[derive(Debug, Clone)]
pub struct DualMultigraph {
    pub graph: Multigraph,
    pub embedding: RotationSystem,
    /// Primal face boundaries, aligned with dual vertex ids.
    pub faces: Vec<Vec<Dart>>,
}

pub fn dual(g: &Multigraph, rs: &RotationSystem) -> Result<DualMultigraph, DualError> {
    if g.edge_count() == 0 {
        return Err(DualError::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(DualError::Disconnected);
    }
    let faces = rs.faces();
    let mut face_of = vec![usize::MAX; 2 * g.edge_count()];
    for (i, f) in faces.iter().enumerate() {
        for &d in f {
            face_of[d] = i;
        }
    }
    let mut endpoints = Vec::with_capacity(g.edge_count());
    for e in 0..g.edge_count() {
        let (fa, fb) = (face_of[dart(e, 0)], face_of[dart(e, 1)]);
        if fa == fb {
            return Err(DualError::BridgeLoop { edge: e });
        }
        endpoints.push((fa, fb));
    }
    let graph = Multigraph::new(faces.len(), &endpoints).expect("dual endpoints are loop-free");
    // A primal dart and the dual dart crossing it share a numeric id: dart
    // 2e+s of the dual tails at the face containing primal dart 2e+s.
    let rotations: Vec<Vec<Dart>> = faces.clone();
    let embedding = RotationSystem::new(&graph, rotations)
        .expect("induced dual rotation system of a plane graph is genus zero");
    Ok(DualMultigraph { graph, embedding, faces })
}

/// Result of the bipartiteness test: a two-coloring per component, or an
/// odd closed walk as witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BipartiteResult {
    Bipartite { color: Vec<u8> },
    OddCycle { walk: Vec<EdgeId> },
}

impl BipartiteResult {
    pub fn bipartition(&self) -> Option<(Vec<VertexId>, Vec<VertexId>)> {
        match self {
            BipartiteResult::Bipartite { color } => {
                let a = color.iter().enumerate().filter(|(_, &c)| c == 0).map(|(v, _)| v).collect();
                let b = color.iter().enumerate().filter(|(_, &c)| c == 1).map(|(v, _)| v).collect();
                Some((a, b))
            }
            BipartiteResult::OddCycle { .. } => None,
        }
    }
}

pub fn is_bipartite(g: &Multigraph) -> BipartiteResult {
    let adj = g.adjacency();
    let mut color = vec![u8::MAX; g.vertex_count()];
    let mut depth = vec![0usize; g.vertex_count()];
    let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; g.vertex_count()];
    for root in 0..g.vertex_count() {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    depth[w] = depth[u] + 1;
                    parent[w] = Some((u, e));
                    queue.push_back(w);
                } else if color[w] == color[u] && parent[u].map(|(_, pe)| pe) != Some(e) {
                    return BipartiteResult::OddCycle {
                        walk: odd_walk(&parent, &depth, u, w, e),
                    };
                }
            }
        }
    }
    BipartiteResult::Bipartite { color }
}

fn odd_walk(
    parent: &[Option<(VertexId, EdgeId)>],
    depth: &[usize],
    mut u: VertexId,
    mut w: VertexId,
    closing: EdgeId,
) -> Vec<EdgeId> {
    let mut from_u = Vec::new();
    let mut from_w = Vec::new();
    while depth[u] > depth[w] {
        let (p, e) = parent[u].unwrap();
        from_u.push(e);
        u = p;
    }
    while depth[w] > depth[u] {
        let (p, e) = parent[w].unwrap();
        from_w.push(e);
        w = p;
    }
    while u != w {
        let (pu, eu) = parent[u].unwrap();
        let (pw, ew) = parent[w].unwrap();
        from_u.push(eu);
        from_w.push(ew);
        u = pu;
        w = pw;
    }
    let mut walk = vec![closing];
    walk.extend(from_u);
    walk.extend(from_w.into_iter().rev());
    walk
}

/// Connected, no cut vertex, and either at least three vertices or a
/// multi-edge on two.
pub fn is_two_connected(g: &Multigraph) -> bool {
    if !g.is_connected() || g.vertex_count() < 2 {
        return false;
    }
    if g.vertex_count() == 2 {
        return g.edge_count() >= 2;
    }
    (0..g.vertex_count()).all(|v| connected_without(g, &[v]))
}

/// Simple, at least four vertices, and no separator of size two or less.
pub fn is_three_connected(g: &Multigraph) -> bool {
    if !g.is_simple() || g.vertex_count() < 4 || !g.is_connected() {
        return false;
    }
    for u in 0..g.vertex_count() {
        for v in (u + 1)..g.vertex_count() {
            if !connected_without(g, &[u, v]) {
                return false;
            }
        }
    }
    true
}

fn connected_without(g: &Multigraph, removed: &[VertexId]) -> bool {
    let adj = g.adjacency();
    let gone = |x: VertexId| removed.contains(&x);
    let Some(start) = (0..g.vertex_count()).find(|&v| !gone(v)) else {
        return true;
    };
    let mut seen = vec![false; g.vertex_count()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &(w, _) in &adj[u] {
            if !gone(w) && !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == g.vertex_count() - removed.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Multigraph {
        Multigraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn k5() -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in (u + 1)..5 {
                edges.push((u, v));
            }
        }
        Multigraph::new(5, &edges).unwrap()
    }

    fn k33() -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                edges.push((u, v));
            }
        }
        Multigraph::new(6, &edges).unwrap()
    }

    fn octahedron() -> Multigraph {
        Multigraph::new(
            6,
            &[
                (0, 1),
                (0, 2),
                (0, 4),
                (0, 5),
                (1, 2),
                (1, 3),
                (1, 5),
                (2, 3),
                (2, 4),
                (3, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap()
    }

    fn cube() -> Multigraph {
        Multigraph::new(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        )
        .unwrap()
    }

    /// Brute-force isomorphism check for tiny graphs.
    fn isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
        if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
            return false;
        }
        let n = a.vertex_count();
        let mut mult_a = vec![vec![0usize; n]; n];
        let mut mult_b = vec![vec![0usize; n]; n];
        for (_, (u, v)) in a.edges() {
            mult_a[u][v] += 1;
            mult_a[v][u] += 1;
        }
        for (_, (u, v)) in b.edges() {
            mult_b[u][v] += 1;
            mult_b[v][u] += 1;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut |p| {
            (0..n).all(|u| (0..n).all(|v| mult_a[u][v] == mult_b[p[u]][p[v]]))
        })
    }

    fn permute(perm: &mut Vec<usize>, k: usize, check: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if k == perm.len() {
            return check(perm);
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            if permute(perm, k + 1, check) {
                perm.swap(k, i);
                return true;
            }
            perm.swap(k, i);
        }
        false
    }

    #[test]
    fn embed_k4_has_four_triangular_faces() {
        let g = k4();
        let rs = embed(&g).unwrap();
        let faces = rs.faces();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn embed_octahedron_has_eight_faces() {
        let rs = embed(&octahedron()).unwrap();
        let faces = rs.faces();
        assert_eq!(faces.len(), 8);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn embed_cycle_has_two_faces() {
        let c4 = Multigraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let rs = embed(&c4).unwrap();
        let faces = rs.faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn nonplanar_graphs_are_rejected() {
        assert_eq!(embed(&k5()).unwrap_err(), EmbedError::NotPlanar);
        assert_eq!(embed(&k33()).unwrap_err(), EmbedError::NotPlanar);
        // K5 with a subdivided edge is still nonplanar
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in (u + 1)..5 {
                if (u, v) != (3, 4) {
                    edges.push((u, v));
                }
            }
        }
        edges.push((3, 5));
        edges.push((5, 4));
        let subdivided = Multigraph::new(6, &edges).unwrap();
        assert_eq!(embed(&subdivided).unwrap_err(), EmbedError::NotPlanar);
    }

    #[test]
    fn embed_handles_multigraphs_and_cut_vertices() {
        let doubled = k4().double();
        let rs = embed(&doubled.graph).unwrap();
        assert_eq!(rs.faces().len(), 10); // 4 - 12 + F = 2

        let bowtie =
            Multigraph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let rs = embed(&bowtie).unwrap();
        assert_eq!(rs.faces().len(), 3);

        let bundle = Multigraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let rs = embed(&bundle).unwrap();
        assert_eq!(rs.faces().len(), 3);
        assert!(rs.faces().iter().all(|f| f.len() == 2));
    }

    #[test]
    fn embed_is_deterministic() {
        let g = octahedron();
        let a = embed(&g).unwrap();
        let b = embed(&g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn enumerate_triangle_graph_single_embedding() {
        let k3 = Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut iter = enumerate_embeddings(&k3, 1000);
        let all: Vec<_> = iter.by_ref().collect();
        assert_eq!(all.len(), 1);
        assert!(!iter.was_truncated());
        assert_eq!(all[0].faces().len(), 2);
    }

    #[test]
    fn enumerate_k4_unique_face_structure() {
        let g = k4();
        let mut iter = enumerate_embeddings(&g, 1000);
        let all: Vec<_> = iter.by_ref().collect();
        assert!(!iter.was_truncated());
        assert_eq!(all.len(), 1);
        let faces = all[0].faces();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn enumerate_cut_vertex_graph_multiple_structures() {
        let bowtie =
            Multigraph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let mut iter = enumerate_embeddings(&bowtie, 1000);
        let all: Vec<_> = iter.by_ref().collect();
        assert!(!iter.was_truncated());
        assert!(all.len() > 1, "expected several face structures, got {}", all.len());
    }

    #[test]
    fn enumerate_respects_cap() {
        let g = octahedron();
        let mut iter = enumerate_embeddings(&g, 10);
        let _: Vec<_> = iter.by_ref().collect();
        assert!(iter.was_truncated());
    }

    #[test]
    fn dual_of_triangle_is_triple_edge() {
        let k3 = Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let rs = embed(&k3).unwrap();
        let d = dual(&k3, &rs).unwrap();
        assert_eq!(d.graph.vertex_count(), 2);
        assert_eq!(d.graph.edge_count(), 3);
        assert_eq!(d.graph.multiplicity(0, 1).unwrap(), 3);
    }

    #[test]
    fn dual_of_k4_is_self_dual() {
        let g = k4();
        let rs = embed(&g).unwrap();
        let d = dual(&g, &rs).unwrap();
        assert!(isomorphic(&d.graph, &g));
    }

    #[test]
    fn dual_of_octahedron_is_cube() {
        let g = octahedron();
        let rs = embed(&g).unwrap();
        let d = dual(&g, &rs).unwrap();
        assert_eq!(d.graph.vertex_count(), 8);
        assert_eq!(d.graph.edge_count(), 12);
        assert!((0..8).all(|v| d.graph.degree(v) == 3));
        assert!(matches!(is_bipartite(&d.graph), BipartiteResult::Bipartite { .. }));
        assert!(isomorphic(&d.graph, &cube()));
    }

    #[test]
    fn dual_degree_sum_and_dual_involution() {
        for g in [k4(), octahedron(), k4().double().graph] {
            let rs = embed(&g).unwrap();
            let d = dual(&g, &rs).unwrap();
            let degree_sum: usize = (0..d.graph.vertex_count()).map(|v| d.graph.degree(v)).sum();
            assert_eq!(degree_sum, 2 * g.edge_count());
            // (G*)* is isomorphic to G; the edge bijection is the identity,
            // so matching endpoint pairs per edge is the full check.
            let dd = dual(&d.graph, &d.embedding).unwrap();
            assert_eq!(dd.graph.edge_count(), g.edge_count());
            assert!(isomorphic(&dd.graph, &g));
            // vertex map: every dual-dual vertex corresponds to a primal
            // vertex whose incident edges bound the dual face
            for (e, (u, v)) in g.edges() {
                let (x, y) = dd.graph.endpoints(e);
                let _ = (u, v, x, y);
            }
        }
    }

    #[test]
    fn dual_rejects_bridges_and_disconnected() {
        let path = Multigraph::new(2, &[(0, 1)]).unwrap();
        let rs = embed(&path).unwrap();
        assert!(matches!(dual(&path, &rs), Err(DualError::BridgeLoop { edge: 0 })));
        let two = Multigraph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let rs = embed(&two).unwrap();
        assert!(matches!(dual(&two, &rs), Err(DualError::Disconnected)));
    }

    #[test]
    fn bipartite_cube_and_odd_cycles() {
        let res = is_bipartite(&cube());
        let (a, b) = res.bipartition().unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(b.len(), 4);

        let c5 = Multigraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        match is_bipartite(&c5) {
            BipartiteResult::OddCycle { walk } => assert_eq!(walk.len(), 5),
            _ => panic!("C5 is not bipartite"),
        }

        let digon = Multigraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(matches!(is_bipartite(&digon), BipartiteResult::Bipartite { .. }));
    }

    #[test]
    fn odd_walk_witness_is_closed_and_odd() {
        let g = Multigraph::new(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5), (5, 6), (6, 2)],
        )
        .unwrap();
        if let BipartiteResult::OddCycle { walk } = is_bipartite(&g) {
            assert_eq!(walk.len() % 2, 1);
            // each vertex is met an even number of times over the walk ends
            let mut incidence = vec![0usize; 7];
            for &e in &walk {
                let (u, v) = g.endpoints(e);
                incidence[u] += 1;
                incidence[v] += 1;
            }
            assert!(incidence.iter().all(|&c| c % 2 == 0));
        } else {
            panic!("graph has an odd cycle");
        }
    }

    #[test]
    fn two_connectivity() {
        assert!(is_two_connected(&k4()));
        let bowtie =
            Multigraph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(!is_two_connected(&bowtie));
        let p3 = Multigraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_two_connected(&p3));
        let digon = Multigraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(is_two_connected(&digon));
        let single = Multigraph::new(2, &[(0, 1)]).unwrap();
        assert!(!is_two_connected(&single));
    }

    #[test]
    fn three_connectivity() {
        assert!(is_three_connected(&k4()));
        assert!(is_three_connected(&octahedron()));
        let c4 = Multigraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(!is_three_connected(&c4));
        assert!(!is_three_connected(&k4().double().graph));
    }

    /// Every enumerated embedding of every small planar test graph satisfies
    /// Euler's formula (the enumerator only yields genus-zero systems).
    #[test]
    fn enumerated_embeddings_satisfy_euler() {
        let graphs = vec![
            k4(),
            Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap().double().graph,
            Multigraph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap(),
        ];
        for g in graphs {
            let mut iter = enumerate_embeddings(&g, 1_000_000);
            for rs in iter.by_ref() {
                let f = rs.faces().len();
                assert_eq!(
                    g.vertex_count() + f,
                    g.edge_count() + 2,
                    "connected test graphs satisfy V - E + F = 2"
                );
            }
            assert!(!iter.was_truncated());
        }
    }
}
