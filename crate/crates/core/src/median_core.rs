//! Finite CAT(0) cube complexes, identified with their 1-skeleta.
//!
//! A [`CubeComplex`] is a connected simple graph together with its
//! hyperplanes: the classes of edges under the transitive closure of "opposite
//! sides of a square". Construction accepts any connected simple graph so
//! that [`CubeComplex::is_median_graph`] can report a witness on non-median
//! input; the median operations refuse to run on such hosts.
//!
//! Vertex ids are opaque strings. Internally vertices are numbered in sorted
//! id order, which makes every iteration order (and therefore every output)
//! reproducible.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HyperplaneId(pub usize);

impl fmt::Display for HyperplaneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of vertices of some host complex, iterated in id order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(BTreeSet<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: VertexId) -> Self {
        Self(BTreeSet::from([v]))
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        self.0.insert(v)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.first().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a VertexId;
    type IntoIter = std::collections::btree_set::Iter<'a, VertexId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A vertex triple without exactly one median.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MedianViolation {
    pub triple: [VertexId; 3],
    pub medians: usize,
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
    }
}

#[derive(Clone, Debug)]
struct HyperplaneData {
    edges: Vec<usize>,
    /// `far[v]` is true when `v` is not in the halfspace containing vertex 0.
    far: Vec<bool>,
    separating: bool,
}

#[derive(Debug)]
pub struct CubeComplex {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    edge_class: Vec<usize>,
    hyperplanes: Vec<HyperplaneData>,
    dist: Vec<u32>,
    words: usize,
    signs: Vec<u64>,
    sign_index: HashMap<Vec<u64>, usize>,
    partial_cube: bool,
    median_check: OnceLock<std::result::Result<(), MedianViolation>>,
}

impl Clone for CubeComplex {
    fn clone(&self) -> Self {
        let median_check = OnceLock::new();
        if let Some(v) = self.median_check.get() {
            let _ = median_check.set(*v);
        }
        Self {
            names: self.names.clone(),
            index: self.index.clone(),
            adj: self.adj.clone(),
            edges: self.edges.clone(),
            edge_index: self.edge_index.clone(),
            edge_class: self.edge_class.clone(),
            hyperplanes: self.hyperplanes.clone(),
            dist: self.dist.clone(),
            words: self.words,
            signs: self.signs.clone(),
            sign_index: self.sign_index.clone(),
            partial_cube: self.partial_cube,
            median_check,
        }
    }
}

impl CubeComplex {
    /// Builds a complex from vertex ids and edges given by id pairs.
    pub fn build<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if lookup.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let mut indexed = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = *lookup.get(a.as_ref()).ok_or_else(|| Error::DanglingEndpoint(a.as_ref().to_string()))?;
            let ib = *lookup.get(b.as_ref()).ok_or_else(|| Error::DanglingEndpoint(b.as_ref().to_string()))?;
            indexed.push((ia, ib));
        }
        Self::build_indexed(names, &indexed)
    }

    /// Builds a complex from vertex ids and edges given by positions in `names`.
    pub fn build_indexed(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let n = names.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut rank = vec![0usize; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let sorted: Vec<String> = order.iter().map(|&i| names[i].clone()).collect();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].clone()));
            }
        }

        let mut adj = vec![Vec::new(); n];
        let mut edge_set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::DanglingEndpoint(format!("#{}", a.max(b))));
            }
            let (a, b) = (rank[a], rank[b]);
            if a == b {
                return Err(Error::SelfLoop(sorted[a].clone()));
            }
            let key = (a.min(b), a.max(b));
            if !edge_set.insert(key) {
                return Err(Error::DuplicateEdge(sorted[key.0].clone(), sorted[key.1].clone()));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let edge_index: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();

        let dist = all_pairs_bfs(&adj);
        if let Some(v) = (0..n).find(|&v| dist[v] == u32::MAX) {
            return Err(Error::Disconnected(sorted[v].clone(), sorted[0].clone()));
        }

        let edge_class = square_classes(&adj, &edges, &edge_index);
        let class_count = edge_class.iter().copied().max().map_or(0, |m| m + 1);
        let mut class_edges = vec![Vec::new(); class_count];
        for (e, &c) in edge_class.iter().enumerate() {
            class_edges[c].push(e);
        }
        let hyperplanes: Vec<HyperplaneData> =
            exec::map_range(class_count, |c| halfspaces_of(&adj, &edges, &edge_index, &class_edges[c]));

        let words = class_count.div_ceil(64).max(1);
        let mut signs = vec![0u64; n * words];
        for (h, hp) in hyperplanes.iter().enumerate() {
            for v in 0..n {
                if hp.far[v] {
                    signs[v * words + h / 64] |= 1 << (h % 64);
                }
            }
        }
        let separating = hyperplanes.iter().all(|h| h.separating);
        let partial_cube = separating
            && exec::all(n, |a| {
                (a + 1..n).all(|b| {
                    let ham: u32 = (0..words).map(|w| (signs[a * words + w] ^ signs[b * words + w]).count_ones()).sum();
                    ham == dist[a * n + b]
                })
            });
        let sign_index = if partial_cube {
            (0..n).map(|v| (signs[v * words..(v + 1) * words].to_vec(), v)).collect()
        } else {
            HashMap::new()
        };

        let index = sorted.iter().enumerate().map(|(i, s)| (s.clone(), VertexId(i))).collect();
        Ok(Self {
            names: sorted,
            index,
            adj,
            edges,
            edge_index,
            edge_class,
            hyperplanes,
            dist,
            words,
            signs,
            sign_index,
            partial_cube,
            median_check: OnceLock::new(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn hyperplane_count(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn all_vertices(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn hyperplanes(&self) -> impl Iterator<Item = HyperplaneId> + '_ {
        (0..self.hyperplanes.len()).map(HyperplaneId)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        names.iter().map(|s| self.vertex(s.as_ref())).collect()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v.0].iter().map(|&u| VertexId(u))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.0].len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().map(|&(a, b)| (VertexId(a), VertexId(b)))
    }

    pub fn is_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.edge_index.contains_key(&(a.0.min(b.0), a.0.max(b.0)))
    }

    pub fn check_hyperplane(&self, h: HyperplaneId) -> Result<()> {
        if h.0 < self.hyperplanes.len() {
            Ok(())
        } else {
            Err(Error::UnknownHyperplane(h.0))
        }
    }

    /// Hyperplane dual to the edge `a`-`b`, if that edge exists.
    pub fn edge_hyperplane(&self, a: VertexId, b: VertexId) -> Option<HyperplaneId> {
        self.edge_index.get(&(a.0.min(b.0), a.0.max(b.0))).map(|&e| HyperplaneId(self.edge_class[e]))
    }

    pub fn hyperplane_edges(&self, h: HyperplaneId) -> Vec<(VertexId, VertexId)> {
        self.hyperplanes[h.0].edges.iter().map(|&e| (VertexId(self.edges[e].0), VertexId(self.edges[e].1))).collect()
    }

    /// Side of `h` containing `v`: `false` for the side of vertex 0.
    pub fn side(&self, h: HyperplaneId, v: VertexId) -> bool {
        self.hyperplanes[h.0].far[v.0]
    }

    pub fn halfspace(&self, h: HyperplaneId, side: bool) -> VertexSet {
        self.vertices().filter(|&v| self.side(h, v) == side).collect()
    }

    /// Vertices incident to an edge dual to `h` (the carrier).
    pub fn carrier(&self, h: HyperplaneId) -> VertexSet {
        self.hyperplane_edges(h).into_iter().flat_map(|(a, b)| [a, b]).collect()
    }

    pub fn distance(&self, x: VertexId, y: VertexId) -> u32 {
        self.dist[x.0 * self.names.len() + y.0]
    }

    pub fn separating_walls(&self, x: VertexId, y: VertexId) -> Vec<HyperplaneId> {
        self.hyperplanes().filter(|&h| self.side(h, x) != self.side(h, y)).collect()
    }

    /// Two hyperplanes are transverse when all four quadrants are inhabited.
    pub fn transverse(&self, a: HyperplaneId, b: HyperplaneId) -> bool {
        if a == b {
            return false;
        }
        let mut seen = [false; 4];
        for v in self.vertices() {
            seen[(self.side(a, v) as usize) * 2 + self.side(b, v) as usize] = true;
        }
        seen.iter().all(|&s| s)
    }

    /// Whether the square classes separate the graph and realise its metric,
    /// i.e. whether vertices embed isometrically by their halfspace signs.
    pub fn is_partial_cube(&self) -> bool {
        self.partial_cube
    }

    fn sign(&self, v: usize) -> &[u64] {
        &self.signs[v * self.words..(v + 1) * self.words]
    }

    /// Vertex carrying the majority sign vector of a triple, if any.
    ///
    /// On a partial cube this is the unique vertex in all three intervals.
    pub fn majority_vertex(&self, x: VertexId, y: VertexId, z: VertexId) -> Option<VertexId> {
        if !self.partial_cube {
            return None;
        }
        let (a, b, c) = (self.sign(x.0), self.sign(y.0), self.sign(z.0));
        let key: Vec<u64> = (0..self.words).map(|w| (a[w] & b[w]) | (a[w] & c[w]) | (b[w] & c[w])).collect();
        self.sign_index.get(&key).map(|&v| VertexId(v))
    }

    fn count_medians(&self, x: usize, y: usize, z: usize) -> usize {
        let n = self.names.len();
        let d = |a: usize, b: usize| self.dist[a * n + b];
        (0..n)
            .filter(|&m| d(x, m) + d(m, y) == d(x, y) && d(y, m) + d(m, z) == d(y, z) && d(x, m) + d(m, z) == d(x, z))
            .count()
    }

    /// Exhaustive check that every triple has exactly one median.
    ///
    /// Returns the lexicographically smallest violating triple on failure.
    /// The result is cached.
    pub fn is_median_graph(&self) -> std::result::Result<(), MedianViolation> {
        *self.median_check.get_or_init(|| self.check_median_exhaustive())
    }

    fn check_median_exhaustive(&self) -> std::result::Result<(), MedianViolation> {
        let n = self.names.len();
        let found = exec::find_first(n, |x| {
            for y in x + 1..n {
                for z in y + 1..n {
                    let medians = if self.partial_cube {
                        self.majority_vertex(VertexId(x), VertexId(y), VertexId(z)).is_some() as usize
                    } else {
                        self.count_medians(x, y, z)
                    };
                    if medians != 1 {
                        return Some(MedianViolation { triple: [VertexId(x), VertexId(y), VertexId(z)], medians });
                    }
                }
            }
            None
        });
        match found {
            Some(v) => Err(v),
            None => Ok(()),
        }
    }

    /// Records that this complex is known to be median (e.g. a convex window
    /// of a validated periodic complex), skipping the exhaustive check.
    pub(crate) fn certify_median(&self) {
        if self.partial_cube {
            let _ = self.median_check.set(Ok(()));
        }
    }

    pub fn ensure_median(&self) -> Result<()> {
        self.is_median_graph()
            .map_err(|v| Error::NotMedian { witness: v.triple.map(|t| self.names[t.0].clone()), count: v.medians })
    }

    pub fn interval(&self, x: VertexId, y: VertexId) -> VertexSet {
        let dxy = self.distance(x, y);
        self.vertices().filter(|&m| self.distance(x, m) + self.distance(m, y) == dxy).collect()
    }

    /// The median of a triple, computed as the intersection of the three
    /// intervals.
    pub fn median(&self, x: VertexId, y: VertexId, z: VertexId) -> Result<VertexId> {
        self.ensure_median()?;
        self.interval_median(x, y, z)
    }

    pub(crate) fn interval_median(&self, x: VertexId, y: VertexId, z: VertexId) -> Result<VertexId> {
        let n = self.names.len();
        let d = |a: usize, b: usize| self.dist[a * n + b];
        let (x, y, z) = (x.0, y.0, z.0);
        let mut found = None;
        for m in 0..n {
            if d(x, m) + d(m, y) == d(x, y) && d(y, m) + d(m, z) == d(y, z) && d(x, m) + d(m, z) == d(x, z) {
                if found.is_some() {
                    return Err(self.median_error(x, y, z));
                }
                found = Some(VertexId(m));
            }
        }
        found.ok_or_else(|| self.median_error(x, y, z))
    }

    fn median_error(&self, x: usize, y: usize, z: usize) -> Error {
        Error::NotMedian { witness: [x, y, z].map(|t| self.names[t].clone()), count: self.count_medians(x, y, z) }
    }

    /// Median via the majority sign vector; agrees with [`Self::median`] on
    /// median hosts and is much cheaper.
    pub fn fast_median(&self, x: VertexId, y: VertexId, z: VertexId) -> Result<VertexId> {
        self.ensure_median()?;
        self.majority_vertex(x, y, z).ok_or_else(|| self.median_error(x.0, y.0, z.0))
    }

    /// Least superset of `s` containing the interval between any two members.
    pub fn convex_hull(&self, s: &VertexSet) -> VertexSet {
        let n = self.names.len();
        let mut inside = vec![false; n];
        let mut members: Vec<usize> = Vec::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for v in s.iter() {
            if !inside[v.0] {
                inside[v.0] = true;
                queue.push_back(v.0);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in &members {
                let duw = self.dist[u * n + w];
                for m in 0..n {
                    if !inside[m] && self.dist[u * n + m] + self.dist[m * n + w] == duw {
                        inside[m] = true;
                        queue.push_back(m);
                    }
                }
            }
            members.push(u);
        }
        (0..n).filter(|&v| inside[v]).map(VertexId).collect()
    }

    /// Least median-closed superset of `s`.
    pub fn median_hull(&self, s: &VertexSet) -> Result<VertexSet> {
        self.ensure_median()?;
        let n = self.names.len();
        let mut inside = vec![false; n];
        let mut members: Vec<VertexId> = Vec::new();
        let mut queue: VecDeque<VertexId> = VecDeque::new();
        for v in s.iter() {
            if !inside[v.0] {
                inside[v.0] = true;
                queue.push_back(v);
            }
        }
        while let Some(u) = queue.pop_front() {
            members.push(u);
            for i in 0..members.len() {
                for j in i..members.len() {
                    let m = self.fast_median(u, members[i], members[j])?;
                    if !inside[m.0] {
                        inside[m.0] = true;
                        queue.push_back(m);
                    }
                }
            }
        }
        Ok((0..n).filter(|&v| inside[v]).map(VertexId).collect())
    }

    /// A vertex lying between two members of `s` but missing from it.
    pub fn convexity_witness(&self, s: &VertexSet) -> Option<VertexId> {
        let members = s.to_vec();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if let Some(m) = self.interval(a, b).iter().find(|m| !s.contains(*m)) {
                    return Some(m);
                }
            }
        }
        None
    }

    pub fn is_convex(&self, s: &VertexSet) -> bool {
        self.convexity_witness(s).is_none()
    }

    /// A triple of members whose median escapes `s`, with the escaped median.
    pub fn median_closure_witness(&self, s: &VertexSet) -> Result<Option<([VertexId; 3], VertexId)>> {
        self.ensure_median()?;
        let members = s.to_vec();
        let k = members.len();
        let found = exec::find_first(k, |i| {
            for j in i + 1..k {
                for l in j + 1..k {
                    let t = [members[i], members[j], members[l]];
                    let m = self.majority_vertex(t[0], t[1], t[2])?;
                    if !s.contains(m) {
                        return Some((t, m));
                    }
                }
            }
            None
        });
        Ok(found)
    }

    pub fn is_median_closed(&self, s: &VertexSet) -> Result<bool> {
        Ok(self.median_closure_witness(s)?.is_none())
    }

    /// The unique vertex of the convex set `c` closest to `x`.
    pub fn gate_project(&self, c: &VertexSet, x: VertexId) -> Result<VertexId> {
        if c.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(w) = self.convexity_witness(c) {
            return Err(Error::NotConvex(self.names[w.0].clone()));
        }
        Ok(self.gate_unchecked(c, x))
    }

    /// Gate projection without the convexity check; `c` must be convex and
    /// nonempty.
    pub(crate) fn gate_unchecked(&self, c: &VertexSet, x: VertexId) -> VertexId {
        c.iter().min_by_key(|&y| (self.distance(x, y), y)).expect("nonempty convex set")
    }

    /// All cubes of the given dimension, each as its vertex set.
    ///
    /// Requires a median host; a `k`-cube is the set of vertices reached from
    /// a corner by flipping any subset of `k` pairwise distinct hyperplanes
    /// dual to edges at that corner.
    pub fn cubes(&self, dim: usize) -> Result<Vec<VertexSet>> {
        self.ensure_median()?;
        let n = self.names.len();
        let per_vertex = exec::map_range(n, |v| {
            let mut out = Vec::new();
            let nbrs = &self.adj[v];
            let mut chosen = Vec::with_capacity(dim);
            self.cube_subsets(v, nbrs, 0, dim, &mut chosen, &mut out);
            out
        });
        Ok(per_vertex.into_iter().flatten().collect())
    }

    fn cube_subsets(
        &self,
        corner: usize,
        nbrs: &[usize],
        start: usize,
        dim: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<VertexSet>,
    ) {
        if chosen.len() == dim {
            let hyps: Vec<usize> =
                chosen.iter().map(|&u| self.edge_class[self.edge_index[&(corner.min(u), corner.max(u))]]).collect();
            let base = self.sign(corner).to_vec();
            let mut set = VertexSet::new();
            for mask in 0u64..(1u64 << dim) {
                let mut key = base.clone();
                for (bit, &h) in hyps.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        key[h / 64] ^= 1 << (h % 64);
                    }
                }
                match self.sign_index.get(&key) {
                    Some(&v) if v >= corner => {
                        set.insert(VertexId(v));
                    }
                    _ => return,
                }
            }
            out.push(set);
            return;
        }
        for i in start..nbrs.len() {
            let u = nbrs[i];
            let h = self.edge_class[self.edge_index[&(corner.min(u), corner.max(u))]];
            let clash = chosen.iter().any(|&w| self.edge_class[self.edge_index[&(corner.min(w), corner.max(w))]] == h);
            if clash {
                continue;
            }
            chosen.push(u);
            self.cube_subsets(corner, nbrs, i + 1, dim, chosen, out);
            chosen.pop();
        }
    }

    /// Hyperplanes separating some pair of vertices of `s`.
    pub fn hyperplanes_crossing(&self, s: &VertexSet) -> Vec<HyperplaneId> {
        let Some(first) = s.first() else { return Vec::new() };
        self.hyperplanes().filter(|&h| s.iter().any(|v| self.side(h, v) != self.side(h, first))).collect()
    }

    /// Size of a largest family of pairwise transverse hyperplanes all dual
    /// to edges at one vertex (the dimension of the complex).
    pub fn dimension(&self) -> usize {
        if self.ensure_median().is_err() {
            return 0;
        }
        let mut dim = 0;
        while self.cubes(dim + 1).map(|c| !c.is_empty()).unwrap_or(false) {
            dim += 1;
        }
        dim
    }
}

fn all_pairs_bfs(adj: &[Vec<usize>]) -> Vec<u32> {
    let n = adj.len();
    let rows = exec::map_range(n, |s| {
        let mut d = vec![u32::MAX; n];
        d[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if d[w] == u32::MAX {
                    d[w] = d[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        d
    });
    rows.into_iter().flatten().collect()
}

/// Classes of the transitive closure of "opposite sides of a square", where
/// a square is a 4-cycle whose two diagonals are non-edges. Classes are
/// numbered by their smallest edge.
fn square_classes(
    adj: &[Vec<usize>],
    edges: &[(usize, usize)],
    edge_index: &HashMap<(usize, usize), usize>,
) -> Vec<usize> {
    let e = |a: usize, b: usize| edge_index.get(&(a.min(b), a.max(b))).copied();
    let mut dsu = DisjointSet::new(edges.len());
    for a in 0..adj.len() {
        let nb = &adj[a];
        for (i, &b) in nb.iter().enumerate() {
            for &d in &nb[i + 1..] {
                if e(b, d).is_some() {
                    continue;
                }
                for &c in &adj[b] {
                    if c == a || e(a, c).is_some() || e(c, d).is_none() {
                        continue;
                    }
                    let (ab, dc, ad, bc) = (e(a, b).unwrap(), e(d, c).unwrap(), e(a, d).unwrap(), e(b, c).unwrap());
                    dsu.union(ab, dc);
                    dsu.union(ad, bc);
                }
            }
        }
    }
    let mut label = HashMap::new();
    (0..edges.len())
        .map(|i| {
            let root = dsu.find(i);
            let next = label.len();
            *label.entry(root).or_insert(next)
        })
        .collect()
}

fn halfspaces_of(
    adj: &[Vec<usize>],
    edges: &[(usize, usize)],
    edge_index: &HashMap<(usize, usize), usize>,
    class: &[usize],
) -> HyperplaneData {
    let n = adj.len();
    let removed: BTreeSet<usize> = class.iter().copied().collect();
    let mut near = vec![false; n];
    near[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if near[w] || removed.contains(&edge_index[&(u.min(w), u.max(w))]) {
                continue;
            }
            near[w] = true;
            queue.push_back(w);
        }
    }
    let separating = class.iter().all(|&e| near[edges[e].0] != near[edges[e].1]);
    HyperplaneData { edges: class.to_vec(), far: near.iter().map(|&b| !b).collect(), separating }
}
