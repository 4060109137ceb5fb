//! Brute-force oracles shared by the integration tests. None of them call
//! the library's metric, median or hyperplane code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use medcube::{CubeComplex, ExtInt, VertexId};

/// Plain adjacency lists, indexed like the complex.
pub fn adjacency(x: &CubeComplex) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); x.vertex_count()];
    for (a, b) in x.edges() {
        adj[a.0].push(b.0);
        adj[b.0].push(a.0);
    }
    adj
}

pub fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == u32::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

pub fn all_pairs(adj: &[Vec<usize>]) -> Vec<Vec<u32>> {
    (0..adj.len()).map(|s| bfs(adj, s)).collect()
}

/// Vertices on some geodesic from `a` to `b`.
pub fn interval(d: &[Vec<u32>], a: usize, b: usize) -> Vec<usize> {
    (0..d.len()).filter(|&w| d[a][w] + d[w][b] == d[a][b]).collect()
}

/// All vertices lying on geodesics between each pair of `a, b, c`.
pub fn medians(d: &[Vec<u32>], a: usize, b: usize, c: usize) -> Vec<usize> {
    (0..d.len())
        .filter(|&w| d[a][w] + d[w][b] == d[a][b] && d[b][w] + d[w][c] == d[b][c] && d[a][w] + d[w][c] == d[a][c])
        .collect()
}

/// Edge classes of the Djokovic-Winkler relation, by representative edge.
/// Assumes a median graph, where the relation is transitive.
pub fn theta_classes(x: &CubeComplex, d: &[Vec<u32>]) -> Vec<Vec<(usize, usize)>> {
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for (a, b) in x.edges() {
        let (a, b) = (a.0, b.0);
        let found = classes.iter_mut().find(|c| {
            let (u, v) = c[0];
            d[a][u] + d[b][v] != d[a][v] + d[b][u]
        });
        match found {
            Some(c) => c.push((a, b)),
            None => classes.push(vec![(a, b)]),
        }
    }
    classes
}

/// Whether the class with representative edge `(u, v)` separates `x` and `y`.
pub fn separates(d: &[Vec<u32>], (u, v): (usize, usize), x: usize, y: usize) -> bool {
    (d[x][u] < d[x][v]) != (d[y][u] < d[y][v])
}

/// Vertex sets of all cubes: intervals of `2^k` vertices where every vertex
/// has exactly `k` neighbours inside.
pub fn cubes(adj: &[Vec<usize>], d: &[Vec<u32>]) -> Vec<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for a in 0..adj.len() {
        for b in 0..adj.len() {
            let k = d[a][b];
            if k > 20 {
                continue;
            }
            let i = interval(d, a, b);
            if i.len() != 1 << k {
                continue;
            }
            let set: BTreeSet<usize> = i.into_iter().collect();
            if set.iter().all(|&w| adj[w].iter().filter(|v| set.contains(v)).count() == k as usize) {
                out.insert(set);
            }
        }
    }
    out.into_iter().collect()
}

pub fn cube_dim(c: &BTreeSet<usize>) -> u32 {
    c.len().trailing_zeros()
}

/// Side of the wall `x[axis] = cut | cut+1` containing a direction class.
pub fn upper(c: ExtInt, cut: i64) -> bool {
    match c {
        ExtInt::NegInf => false,
        ExtInt::PosInf => true,
        ExtInt::Fin(v) => v > cut,
    }
}

/// Sign patterns of lattice vectors with coefficients in `[-r, r]`.
pub fn sign_patterns(basis: &[Vec<i64>], dim: usize, r: i64) -> BTreeSet<Vec<i8>> {
    let mut out = BTreeSet::new();
    let n = basis.len();
    let side = (2 * r + 1) as usize;
    for code in 0..side.pow(n as u32) {
        let mut c = code;
        let mut v = vec![0i64; dim];
        for b in basis {
            let coef = (c % side) as i64 - r;
            c /= side;
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += coef * bi;
            }
        }
        out.insert(v.iter().map(|x| x.signum() as i8).collect());
    }
    out
}

/// Number of distinct nontrivial bipartitions cut on `points` by the
/// coordinate walls that separate `a` from `b`.
pub fn trace_distance(points: &[Vec<i64>], a: usize, b: usize) -> usize {
    let mut traces: BTreeSet<Vec<bool>> = BTreeSet::new();
    let dim = points[0].len();
    for axis in 0..dim {
        let (lo, hi) = (points[a][axis].min(points[b][axis]), points[a][axis].max(points[b][axis]));
        for cut in lo..hi {
            let mut t: Vec<bool> = points.iter().map(|p| p[axis] > cut).collect();
            if t[a] {
                t.iter_mut().for_each(|x| *x = !*x);
            }
            traces.insert(t);
        }
    }
    traces.len()
}

/// Index of each name, for translating library vertex ids.
pub fn index_of(x: &CubeComplex) -> HashMap<String, VertexId> {
    x.vertices().map(|v| (x.name(v).to_string(), v)).collect()
}
