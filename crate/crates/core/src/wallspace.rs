//! Finite wallspaces and their Sageev cubulations.
//!
//! A wall is stored as a side bit per point, normalised so that the first
//! point lies on side `false`. An orientation picks one side per wall; it is
//! consistent when no two chosen halfspaces are disjoint. For finite
//! wallspaces the cubulation has every consistent orientation as a vertex.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::exec;
use crate::median_core::{CubeComplex, HyperplaneId, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wallspace {
    points: Vec<String>,
    walls: Vec<Vec<bool>>,
}

/// One side per wall; `true` picks the side not containing the first point.
pub type Orientation = Vec<bool>;

impl Wallspace {
    /// Builds a wallspace from walls given as pairs of sides.
    pub fn new<S: AsRef<str>>(points: &[S], walls: &[(Vec<S>, Vec<S>)]) -> Result<Self> {
        let points: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        if index.len() != points.len() {
            let mut seen = BTreeSet::new();
            let dup = points.iter().find(|p| !seen.insert(p.as_str())).unwrap();
            return Err(Error::DuplicateVertex(dup.clone()));
        }
        let mut sides = Vec::with_capacity(walls.len());
        for (w, (a, b)) in walls.iter().enumerate() {
            let malformed = |reason: String| Error::MalformedWall { index: w, reason };
            let mut side = vec![None; points.len()];
            for (bit, part) in [(false, a), (true, b)] {
                for p in part {
                    let &i =
                        index.get(p.as_ref()).ok_or_else(|| malformed(format!("unknown point `{}`", p.as_ref())))?;
                    if side[i].replace(bit).is_some() {
                        return Err(malformed(format!("point `{}` listed twice", p.as_ref())));
                    }
                }
            }
            let side: Vec<bool> = side
                .into_iter()
                .enumerate()
                .map(|(i, s)| s.ok_or_else(|| malformed(format!("point `{}` missing", points[i]))))
                .collect::<Result<_>>()?;
            sides.push(side);
        }
        Self::from_sides(points, sides)
    }

    /// Builds a wallspace from per-point side bits.
    pub fn from_sides(points: Vec<String>, walls: Vec<Vec<bool>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let mut seen = HashMap::new();
        let mut normal = Vec::with_capacity(walls.len());
        for (w, mut side) in walls.into_iter().enumerate() {
            let malformed = |reason: &str| Error::MalformedWall { index: w, reason: reason.into() };
            if side.len() != points.len() {
                return Err(malformed("side vector has the wrong length"));
            }
            if side[0] {
                side.iter_mut().for_each(|b| *b = !*b);
            }
            if !side.iter().any(|&b| b) {
                return Err(malformed("one side is empty"));
            }
            if let Some(&k) = seen.get(&side) {
                return Err(Error::MalformedWall { index: w, reason: format!("same bipartition as wall {k}") });
            }
            seen.insert(side.clone(), w);
            normal.push(side);
        }
        Ok(Self { points, walls: normal })
    }

    /// The wallspace on the vertices of `x` whose walls are its hyperplanes,
    /// in hyperplane order.
    pub fn from_complex(x: &CubeComplex) -> Result<Self> {
        Self::from_hyperplanes(x, &x.hyperplanes().collect::<Vec<_>>())
    }

    /// The wallspace on the vertices of `x` with the given hyperplanes as walls.
    pub fn from_hyperplanes(x: &CubeComplex, hyperplanes: &[HyperplaneId]) -> Result<Self> {
        let points = x.vertices().map(|v| x.name(v).to_string()).collect();
        let walls = hyperplanes.iter().map(|&h| x.vertices().map(|v| x.side(h, v)).collect()).collect();
        Self::from_sides(points, walls)
    }

    /// Product wallspace: points are pairs `p|q`, walls are pulled back from
    /// either factor (first factor's walls first).
    pub fn product(&self, other: &Wallspace) -> Result<Self> {
        let (n, m) = (self.points.len(), other.points.len());
        let points = (0..n * m).map(|i| format!("{}|{}", self.points[i / m], other.points[i % m])).collect();
        let walls = self
            .walls
            .iter()
            .map(|w| (0..n * m).map(|i| w[i / m]).collect())
            .chain(other.walls.iter().map(|w| (0..n * m).map(|i| w[i % m]).collect()))
            .collect();
        Self::from_sides(points, walls)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn wall_count(&self) -> usize {
        self.walls.len()
    }

    /// Side of wall `w` containing point `p`.
    pub fn side(&self, w: usize, p: usize) -> bool {
        self.walls[w][p]
    }

    /// The two sides of wall `w` as point lists.
    pub fn wall_sides(&self, w: usize) -> [Vec<&str>; 2] {
        let pick = |bit: bool| {
            (0..self.points.len()).filter(|&p| self.walls[w][p] == bit).map(|p| self.points[p].as_str()).collect()
        };
        [pick(false), pick(true)]
    }

    pub fn principal(&self, p: usize) -> Orientation {
        self.walls.iter().map(|w| w[p]).collect()
    }

    /// `disjoint[2w+s]` holds the halfspaces disjoint from halfspace `(w, s)`.
    fn disjointness(&self) -> Vec<Vec<u64>> {
        let h = 2 * self.walls.len();
        let words = h.div_ceil(64).max(1);
        let n = self.points.len();
        let mut out = vec![vec![0u64; words]; h];
        for a in 0..h {
            for b in 0..h {
                let meet = (0..n).any(|p| self.walls[a / 2][p] == (a % 2 == 1) && self.walls[b / 2][p] == (b % 2 == 1));
                if !meet {
                    out[a][b / 64] |= 1 << (b % 64);
                }
            }
        }
        out
    }

    pub fn is_consistent(&self, o: &Orientation) -> bool {
        let n = self.points.len();
        (0..self.walls.len()).all(|a| {
            (a + 1..self.walls.len()).all(|b| (0..n).any(|p| self.walls[a][p] == o[a] && self.walls[b][p] == o[b]))
        })
    }

    /// All consistent orientations in lexicographic order.
    pub fn orientations(&self) -> Vec<Orientation> {
        let w = self.walls.len();
        let disjoint = self.disjointness();
        let words = disjoint.first().map_or(1, Vec::len);
        let start = Partial { chosen: Vec::new(), allowed: vec![u64::MAX; words] };
        let split = w.min(6);
        let mut prefixes = Vec::new();
        extend(&disjoint, w, split, start, &mut prefixes);
        let tails = exec::map_range(prefixes.len(), |i| {
            let mut out = Vec::new();
            extend(&disjoint, w, w, prefixes[i].clone(), &mut out);
            out
        });
        tails.into_iter().flatten().map(|p| p.chosen).collect()
    }
}

#[derive(Clone)]
struct Partial {
    chosen: Vec<bool>,
    allowed: Vec<u64>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

/// Depth-first extension of `p` up to `depth` walls, pruning a branch as
/// soon as some later wall has no side compatible with the choices so far.
fn extend(disjoint: &[Vec<u64>], walls: usize, depth: usize, p: Partial, out: &mut Vec<Partial>) {
    let k = p.chosen.len();
    if k == depth {
        out.push(p);
        return;
    }
    for side in [false, true] {
        let h = 2 * k + side as usize;
        if !bit(&p.allowed, h) {
            continue;
        }
        let allowed: Vec<u64> = p.allowed.iter().zip(&disjoint[h]).map(|(a, d)| a & !d).collect();
        if (k + 1..walls).any(|w| !bit(&allowed, 2 * w) && !bit(&allowed, 2 * w + 1)) {
            continue;
        }
        let mut chosen = p.chosen.clone();
        chosen.push(side);
        extend(disjoint, walls, depth, Partial { chosen, allowed }, out);
    }
}

fn orientation_name(o: &Orientation) -> String {
    let mut s = String::with_capacity(o.len() + 1);
    s.push('o');
    s.extend(o.iter().map(|&b| if b { '1' } else { '0' }));
    s
}

#[derive(Clone, Debug)]
pub struct Cubulation {
    pub complex: CubeComplex,
    /// Orientation of each vertex, indexed by vertex id.
    pub orientations: Vec<Orientation>,
    /// Principal orientation of each point, as a vertex.
    pub principal: Vec<VertexId>,
    /// Hyperplane of the cubulation dual to each wall.
    pub wall_hyperplane: Vec<HyperplaneId>,
}

/// Sageev cubulation of a finite wallspace.
pub fn cubulate(ws: &Wallspace) -> Result<Cubulation> {
    let orientations = ws.orientations();
    let index: HashMap<&Orientation, usize> = orientations.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let names: Vec<String> = orientations.iter().map(orientation_name).collect();
    let mut edges = Vec::new();
    let mut wall_edge = vec![None; ws.wall_count()];
    for (i, o) in orientations.iter().enumerate() {
        let mut flipped = o.clone();
        for w in 0..o.len() {
            flipped[w] = !flipped[w];
            if let Some(&j) = index.get(&flipped) {
                if i < j {
                    edges.push((i, j));
                    wall_edge[w].get_or_insert((i, j));
                }
            }
            flipped[w] = !flipped[w];
        }
    }
    let complex = CubeComplex::build_indexed(names, &edges)?;
    // Names are zero-padded bit strings, so sorted order is enumeration order.
    debug_assert!((0..orientations.len()).all(|i| complex.name(VertexId(i)) == orientation_name(&orientations[i])));
    let wall_hyperplane = wall_edge
        .iter()
        .enumerate()
        .map(|(w, e)| {
            let (a, b) = e.ok_or_else(|| Error::Invariant(format!("wall {w} has no dual edge")))?;
            Ok(complex.edge_hyperplane(VertexId(a), VertexId(b)).unwrap())
        })
        .collect::<Result<_>>()?;
    let principal = (0..ws.points.len())
        .map(|p| {
            index
                .get(&ws.principal(p))
                .map(|&i| VertexId(i))
                .ok_or_else(|| Error::Invariant(format!("principal orientation of point {p} missing")))
        })
        .collect::<Result<_>>()?;
    Ok(Cubulation { complex, orientations, principal, wall_hyperplane })
}

#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub target: Cubulation,
    /// `pi[x]` for each source vertex `x`.
    pub pi: Vec<VertexId>,
    /// Source hyperplane of each retained wall, in target wall order.
    pub retained: Vec<HyperplaneId>,
}

impl QuotientMap {
    pub fn apply(&self, x: VertexId) -> VertexId {
        self.pi[x.0]
    }

    pub fn complex(&self) -> &CubeComplex {
        &self.target.complex
    }
}

/// The cubical quotient `X/J`: the cubulation of the vertices of `X` with
/// every hyperplane outside `J` as a wall.
pub fn cubical_quotient(x: &CubeComplex, j: &[HyperplaneId]) -> Result<QuotientMap> {
    for &h in j {
        x.check_hyperplane(h)?;
    }
    let drop: BTreeSet<HyperplaneId> = j.iter().copied().collect();
    let retained: Vec<HyperplaneId> = x.hyperplanes().filter(|h| !drop.contains(h)).collect();
    let ws = Wallspace::from_hyperplanes(x, &retained)?;
    let target = cubulate(&ws)?;
    let pi = target.principal.clone();
    Ok(QuotientMap { target, pi, retained })
}

#[derive(Clone, Debug)]
pub struct SubalgebraCubulation {
    pub cubulation: Cubulation,
    /// Members of `Y` in id order; `cubulation.principal[i]` corresponds to `points[i]`.
    pub points: Vec<VertexId>,
    /// Lowest-id hyperplane of `X` inducing each wall of `Y`.
    pub hyperplanes: Vec<HyperplaneId>,
}

/// Cubulation of a median-closed subset by the traces of the hyperplanes.
pub fn subalgebra_cubulation(x: &CubeComplex, y: &VertexSet) -> Result<SubalgebraCubulation> {
    if y.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some((t, m)) = x.median_closure_witness(y)? {
        return Err(Error::NotMedianClosed {
            witness: t.map(|v| x.name(v).to_string()),
            escaped: x.name(m).to_string(),
        });
    }
    let points = y.to_vec();
    let mut seen = BTreeSet::new();
    let mut walls = Vec::new();
    let mut hyperplanes = Vec::new();
    for h in x.hyperplanes() {
        let mut trace: Vec<bool> = points.iter().map(|&v| x.side(h, v)).collect();
        if trace[0] {
            trace.iter_mut().for_each(|b| *b = !*b);
        }
        if trace.iter().any(|&b| b) && seen.insert(trace.clone()) {
            walls.push(trace);
            hyperplanes.push(h);
        }
    }
    let names = points.iter().map(|&v| x.name(v).to_string()).collect();
    let ws = Wallspace::from_sides(names, walls)?;
    let cubulation = cubulate(&ws)?;
    if cubulation.complex.vertex_count() != points.len() {
        return Err(Error::Invariant(format!(
            "cubulation of a {}-point subalgebra has {} vertices",
            points.len(),
            cubulation.complex.vertex_count()
        )));
    }
    Ok(SubalgebraCubulation { cubulation, points, hyperplanes })
}
