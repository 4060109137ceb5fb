//! Isomorphism testing for small complexes.
//!
//! Colours start from each vertex's sorted distance profile and are refined
//! by the multiset of neighbour colours, using one palette for both graphs so
//! that colours are comparable. A backtracking search then matches vertices
//! colour by colour, pruning any partial map that fails to preserve distance.

use std::collections::BTreeMap;

use crate::median_core::{CubeComplex, VertexId};

fn refine(graphs: [&CubeComplex; 2]) -> [Vec<usize>; 2] {
    let seed = |x: &CubeComplex, v: VertexId| {
        let mut profile: Vec<u32> = x.vertices().map(|u| x.distance(v, u)).collect();
        profile.sort_unstable();
        profile
    };
    let mut palette: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for x in graphs {
        for v in x.vertices() {
            let next = palette.len();
            palette.entry(seed(x, v)).or_insert(next);
        }
    }
    let mut colours = graphs.map(|x| x.vertices().map(|v| palette[&seed(x, v)]).collect::<Vec<_>>());
    let mut classes = palette.len();
    loop {
        let mut palette: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let signatures = [0, 1].map(|g| {
            let x = graphs[g];
            x.vertices()
                .map(|v| {
                    let mut around: Vec<usize> = x.neighbors(v).map(|u| colours[g][u.0]).collect();
                    around.sort_unstable();
                    (colours[g][v.0], around)
                })
                .collect::<Vec<_>>()
        });
        for sigs in &signatures {
            for s in sigs {
                let next = palette.len();
                palette.entry(s.clone()).or_insert(next);
            }
        }
        colours = [0, 1].map(|g| signatures[g].iter().map(|s| palette[s]).collect());
        if palette.len() == classes {
            return colours;
        }
        classes = palette.len();
    }
}

fn matching_order(a: &CubeComplex, ca: &[usize]) -> Vec<VertexId> {
    // Match rare colours first, then grow along distance from what is fixed.
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in ca {
        *count.entry(c).or_default() += 1;
    }
    let mut order: Vec<VertexId> = Vec::with_capacity(a.vertex_count());
    let mut placed = vec![false; a.vertex_count()];
    while order.len() < a.vertex_count() {
        let next = a
            .vertices()
            .filter(|v| !placed[v.0])
            .min_by_key(|&v| {
                let near = order.iter().map(|&u| a.distance(u, v)).min().unwrap_or(0);
                (near, count[&ca[v.0]], v)
            })
            .unwrap();
        placed[next.0] = true;
        order.push(next);
    }
    order
}

/// Calls `found` on isomorphisms `a -> b` until it returns `true`.
fn for_each_isomorphism(a: &CubeComplex, b: &CubeComplex, found: &mut dyn FnMut(Vec<VertexId>) -> bool) {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return;
    }
    let [ca, cb] = refine([a, b]);
    let histogram = |c: &[usize]| {
        let mut h = c.to_vec();
        h.sort_unstable();
        h
    };
    if histogram(&ca) != histogram(&cb) {
        return;
    }
    let order = matching_order(a, &ca);
    let mut map = vec![None; a.vertex_count()];
    let mut used = vec![false; b.vertex_count()];
    let mut ctx = Search { a, b, ca: &ca, cb: &cb, order: &order, found };
    ctx.run(0, &mut map, &mut used);
}

/// An isomorphism `a -> b` as a vector indexed by the vertices of `a`.
pub fn isomorphism(a: &CubeComplex, b: &CubeComplex) -> Option<Vec<VertexId>> {
    let mut out = None;
    for_each_isomorphism(a, b, &mut |m| {
        out = Some(m);
        true
    });
    out
}

/// Up to `cap` automorphisms of `a`, the identity first.
pub fn automorphisms(a: &CubeComplex, cap: usize) -> Vec<Vec<VertexId>> {
    let mut out: Vec<Vec<VertexId>> = vec![a.vertices().collect()];
    for_each_isomorphism(a, a, &mut |m| {
        if m != out[0] {
            out.push(m);
        }
        out.len() >= cap
    });
    out
}

struct Search<'a> {
    a: &'a CubeComplex,
    b: &'a CubeComplex,
    ca: &'a [usize],
    cb: &'a [usize],
    order: &'a [VertexId],
    found: &'a mut dyn FnMut(Vec<VertexId>) -> bool,
}

impl Search<'_> {
    /// Returns `true` once the caller asks to stop.
    fn run(&mut self, depth: usize, map: &mut [Option<VertexId>], used: &mut [bool]) -> bool {
        let Some(&v) = self.order.get(depth) else {
            return (self.found)(map.iter().map(|m| m.unwrap()).collect());
        };
        for w in self.b.vertices() {
            if used[w.0] || self.cb[w.0] != self.ca[v.0] {
                continue;
            }
            let consistent =
                self.order[..depth].iter().all(|&u| self.a.distance(u, v) == self.b.distance(map[u.0].unwrap(), w));
            if !consistent {
                continue;
            }
            map[v.0] = Some(w);
            used[w.0] = true;
            let stop = self.run(depth + 1, map, used);
            used[w.0] = false;
            map[v.0] = None;
            if stop {
                return true;
            }
        }
        false
    }
}

pub fn is_isomorphic(a: &CubeComplex, b: &CubeComplex) -> bool {
    isomorphism(a, b).is_some()
}

/// Whether `map` (indexed by vertices of `a`) is an isomorphism onto `b`.
pub fn is_isomorphism(a: &CubeComplex, b: &CubeComplex, map: &[VertexId]) -> bool {
    if map.len() != a.vertex_count() || a.vertex_count() != b.vertex_count() {
        return false;
    }
    let mut hit = vec![false; b.vertex_count()];
    for w in map {
        if w.0 >= hit.len() || std::mem::replace(&mut hit[w.0], true) {
            return false;
        }
    }
    a.edge_count() == b.edge_count() && a.edges().all(|(x, y)| b.is_edge(map[x.0], map[y.0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(names: &[&str]) -> CubeComplex {
        let edges: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
        CubeComplex::build(names, &edges).unwrap()
    }

    #[test]
    fn relabelled_paths_match() {
        let a = path(&["a", "b", "c", "d"]);
        let b = path(&["z", "x", "y", "w"]);
        let map = isomorphism(&a, &b).unwrap();
        assert!(is_isomorphism(&a, &b, &map));
    }

    #[test]
    fn path_is_not_star() {
        let a = path(&["a", "b", "c", "d"]);
        let b = CubeComplex::build(&["o", "p", "q", "r"], &[("o", "p"), ("o", "q"), ("o", "r")]).unwrap();
        assert!(!is_isomorphic(&a, &b));
    }

    #[test]
    fn automorphisms_of_the_square() {
        let sq = CubeComplex::build(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        let all = automorphisms(&sq, 100);
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|m| is_isomorphism(&sq, &sq, m)));
    }
}
