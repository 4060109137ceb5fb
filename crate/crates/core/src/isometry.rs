//! Classification of isometries into elliptic, inverting and loxodromic,
//! with minimising sets, axes, inverted hyperplanes and transfer numbers.
//!
//! Finite hosts carry vertex bijections ([`FiniteIsometry`]); periodic hosts
//! carry [`AffineIsometry`] maps. Quantities over infinite hosts are read off
//! windows whose radius doubles until two consecutive answers agree.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::exec;
use crate::median_core::{CubeComplex, VertexId, VertexSet};
use crate::periodic::{
    check_symmetry, l1, label, walls_between, AffineIsometry, BoxRange, PeriodicComplex, Point, Wall,
};

/// Largest window radius tried before giving up on stabilisation.
pub const MAX_RADIUS: i64 = 1 << 10;

/// Largest window (in lattice points) scanned by the stabilisation protocol.
const MAX_VOLUME: u64 = 1 << 24;

/// An adjacency-preserving bijection of the vertices of a finite complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteIsometry {
    map: Vec<VertexId>,
}

impl FiniteIsometry {
    pub fn new(x: &CubeComplex, map: Vec<VertexId>) -> Result<Self> {
        if map.len() != x.vertex_count() {
            return Err(Error::InvalidIsometry(format!(
                "map has {} entries for {} vertices",
                map.len(),
                x.vertex_count()
            )));
        }
        let mut hit = vec![false; map.len()];
        for (v, w) in map.iter().enumerate() {
            if w.0 >= hit.len() || std::mem::replace(&mut hit[w.0], true) {
                return Err(Error::InvalidIsometry(format!("map is not a bijection at `{}`", x.name(VertexId(v)))));
            }
        }
        if let Some((a, b)) = x.edges().find(|&(a, b)| !x.is_edge(map[a.0], map[b.0])) {
            return Err(Error::InvalidIsometry(format!(
                "edge `{}`-`{}` is not mapped to an edge",
                x.name(a),
                x.name(b)
            )));
        }
        Ok(Self { map })
    }

    pub fn from_names<S: AsRef<str>>(x: &CubeComplex, pairs: &[(S, S)]) -> Result<Self> {
        let mut map = vec![None; x.vertex_count()];
        for (a, b) in pairs {
            let (a, b) = (x.vertex(a.as_ref())?, x.vertex(b.as_ref())?);
            if map[a.0].replace(b).is_some() {
                return Err(Error::InvalidIsometry(format!("`{}` mapped twice", x.name(a))));
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| Error::InvalidIsometry(format!("no image for `{}`", x.name(VertexId(i))))))
            .collect::<Result<_>>()?;
        Self::new(x, map)
    }

    pub fn identity(x: &CubeComplex) -> Self {
        Self { map: x.vertices().collect() }
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.map[v.0]
    }

    pub fn map(&self) -> &[VertexId] {
        &self.map
    }

    pub fn compose(&self, other: &FiniteIsometry) -> FiniteIsometry {
        FiniteIsometry { map: other.map.iter().map(|&v| self.map[v.0]).collect() }
    }

    pub fn inverse(&self) -> FiniteIsometry {
        let mut map = vec![VertexId(0); self.map.len()];
        for (v, w) in self.map.iter().enumerate() {
            map[w.0] = VertexId(v);
        }
        FiniteIsometry { map }
    }

    pub fn commutes_with(&self, other: &FiniteIsometry) -> bool {
        self.compose(other) == other.compose(self)
    }

    pub fn image(&self, s: &VertexSet) -> VertexSet {
        s.iter().map(|v| self.apply(v)).collect()
    }

    pub fn stabilises(&self, s: &VertexSet) -> bool {
        &self.image(s) == s
    }

    pub fn orbit(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = vec![v];
        let mut w = self.apply(v);
        while w != v {
            out.push(w);
            w = self.apply(w);
        }
        out
    }
}

/// A hyperplane inverted by a power of an isometry, with the least such power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InvertedWall {
    pub wall: Wall,
    pub power: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsometryClass {
    Elliptic { min_cube_dim: usize, cube: Vec<String> },
    Inverting { inverted: Vec<InvertedWall>, translation_length: Ratio<i64>, min_displacement: u64 },
    Loxodromic { min_vertex: String, min_displacement: u64, translation_length: Ratio<i64> },
}

impl IsometryClass {
    pub fn name(&self) -> &'static str {
        match self {
            IsometryClass::Elliptic { .. } => "elliptic",
            IsometryClass::Inverting { .. } => "inverting",
            IsometryClass::Loxodromic { .. } => "loxodromic",
        }
    }
}

// ---------------------------------------------------------------- finite

pub fn displacement(x: &CubeComplex, g: &FiniteIsometry, v: VertexId) -> u32 {
    x.distance(v, g.apply(v))
}

/// Vertices of least displacement, with that displacement.
pub fn min_set_finite(x: &CubeComplex, g: &FiniteIsometry) -> (u32, VertexSet) {
    let best = x.vertices().map(|v| displacement(x, g, v)).min().unwrap();
    (best, x.vertices().filter(|&v| displacement(x, g, v) == best).collect())
}

/// Cubes of dimension `dim` stabilised by every generator.
pub fn stabilised_cubes_finite(x: &CubeComplex, gens: &[FiniteIsometry], dim: usize) -> Result<Vec<VertexSet>> {
    Ok(x.cubes(dim)?.into_iter().filter(|c| gens.iter().all(|g| g.stabilises(c))).collect())
}

/// Least dimension of a cube stabilised by all generators, with the cubes
/// of that dimension in sorted order.
pub fn minimal_stabilised_cubes_finite(x: &CubeComplex, gens: &[FiniteIsometry]) -> Result<(usize, Vec<VertexSet>)> {
    for dim in 0..=x.hyperplane_count() {
        let mut cubes = stabilised_cubes_finite(x, gens, dim)?;
        if !cubes.is_empty() {
            cubes.sort();
            return Ok((dim, cubes));
        }
    }
    Err(Error::NotElliptic)
}

pub fn classify_finite(x: &CubeComplex, g: &FiniteIsometry) -> Result<IsometryClass> {
    x.ensure_median()?;
    let (dim, cubes) = minimal_stabilised_cubes_finite(x, std::slice::from_ref(g))?;
    let cube = cubes[0].iter().map(|v| x.name(v).to_string()).collect();
    Ok(IsometryClass::Elliptic { min_cube_dim: dim, cube })
}

// -------------------------------------------------------------- periodic

pub fn displacement_affine(g: &AffineIsometry, v: &[i64]) -> u64 {
    l1(v, &g.apply(v))
}

/// The cells' bounding box, together with their images under `g^{±1}`,
/// grown by `radius`.
pub fn orbit_box(p: &PeriodicComplex, g: &AffineIsometry, radius: i64) -> BoxRange {
    let inv = g.inverse();
    let mut pts: Vec<Point> = p.cells().to_vec();
    pts.extend(p.cells().iter().map(|c| g.apply(c)));
    pts.extend(p.cells().iter().map(|c| inv.apply(c)));
    BoxRange::around(&pts, radius)
}

/// Runs `f` on growing windows until it returns the same value on radius
/// `r` and `2r`.
pub fn stabilise<T: PartialEq>(start: i64, mut f: impl FnMut(i64) -> Result<T>) -> Result<(i64, T)> {
    let mut r = start.max(1);
    let mut prev = f(r)?;
    while r < MAX_RADIUS {
        let next = f(2 * r)?;
        if next == prev {
            return Ok((r, prev));
        }
        prev = next;
        r *= 2;
    }
    Err(Error::NoStabilisation(r))
}

pub(crate) fn scan_box(b: &BoxRange) -> Result<()> {
    if b.volume() > MAX_VOLUME {
        return Err(Error::NoStabilisation(b.hi[0] - b.lo[0]));
    }
    Ok(())
}

/// Least value of `f` over the members of a box.
pub(crate) fn min_over(p: &PeriodicComplex, b: &BoxRange, f: impl Fn(&Point) -> u64 + Sync) -> Result<Option<u64>> {
    scan_box(b)?;
    let members = p.members_in(b);
    Ok(exec::map_range(members.len(), |i| f(&members[i])).into_iter().min())
}

/// `||g||`, the least displacement of a vertex, by window stabilisation.
pub fn combinatorial_min(p: &PeriodicComplex, g: &AffineIsometry, radius: i64) -> Result<u64> {
    check_symmetry(p, g)?;
    let (_, m) = stabilise(radius, |r| min_over(p, &orbit_box(p, g, r), |v| displacement_affine(g, v)))?;
    m.ok_or(Error::EmptyWindow)
}

/// Exact asymptotic translation length `|v|_1 / k`.
pub fn translation_length(g: &AffineIsometry) -> Ratio<i64> {
    let v = g.translation_vector();
    Ratio::new(v.iter().map(|x| x.abs()).sum(), g.order() as i64)
}

/// Members of `Min(g)` inside a box, with `||g||`.
pub fn min_set_affine(
    p: &PeriodicComplex,
    g: &AffineIsometry,
    bounds: &BoxRange,
    radius: i64,
) -> Result<(u64, Vec<Point>)> {
    let norm = combinatorial_min(p, g, radius)?;
    let members = p.members_in(bounds);
    Ok((norm, members.into_iter().filter(|v| displacement_affine(g, v) == norm).collect()))
}

/// Whether all four quadrants of two walls contain members.
pub fn transverse(p: &PeriodicComplex, a: Wall, b: Wall) -> bool {
    if a.axis == b.axis {
        return false;
    }
    let mut probe = p.cells()[0].clone();
    probe[a.axis] = a.cut;
    probe[b.axis] = b.cut;
    let reach: i64 = p.lattice().basis().iter().flat_map(|v| v.iter().map(|x| x.abs())).max().unwrap_or(0);
    let mut pts = p.cells().to_vec();
    pts.push(probe);
    let bounds = BoxRange::around(&pts, 2 + reach);
    let mut seen = [false; 4];
    for v in p.members_in(&bounds) {
        seen[a.side(&v) as usize * 2 + b.side(&v) as usize] = true;
    }
    seen.iter().all(|&s| s)
}

/// Least `n` in `1..=limit` such that `g^n` inverts `w`.
pub fn inverting_power(g: &AffineIsometry, w: Wall, limit: u64) -> Option<u64> {
    (1..=limit).find(|&n| {
        let (image, flipped) = g.power(n as i64).map_wall(w);
        image == w && flipped
    })
}

/// The hyperplanes inverted by powers of `g`.
///
/// Every orbit of inverted walls meets the walls separating a base vertex
/// from its image, so those are the candidates; their orbits are added.
pub fn inverted_hyperplanes(p: &PeriodicComplex, g: &AffineIsometry) -> Result<Vec<InvertedWall>> {
    check_symmetry(p, g)?;
    if g.has_bounded_orbits() {
        return Err(Error::BoundedOrbits);
    }
    let limit = 2 * g.order();
    let x0 = &p.cells()[0];
    let mut found: BTreeMap<Wall, u64> = BTreeMap::new();
    for w in walls_between(x0, &g.apply(x0)) {
        let Some(n) = inverting_power(g, w, limit) else { continue };
        let mut cur = w;
        loop {
            found.insert(cur, n);
            cur = g.map_wall(cur).0;
            if cur == w {
                break;
            }
        }
    }
    let inverted: Vec<InvertedWall> = found.into_iter().map(|(wall, power)| InvertedWall { wall, power }).collect();
    for (i, a) in inverted.iter().enumerate() {
        if !p.has_wall(a.wall) {
            return Err(Error::Invariant(format!("inverted wall {} is not a wall", a.wall)));
        }
        for b in &inverted[i + 1..] {
            if !transverse(p, a.wall, b.wall) {
                return Err(Error::Invariant(format!("inverted walls {} and {} are not transverse", a.wall, b.wall)));
            }
        }
    }
    Ok(inverted)
}

/// Least dimension of a cube inside `bounds` stabilised by every
/// generator, with all such cubes in sorted order.
pub fn stabilised_cubes_affine(
    p: &PeriodicComplex,
    gens: &[AffineIsometry],
    bounds: &BoxRange,
) -> Result<(usize, Vec<Vec<Point>>)> {
    scan_box(bounds)?;
    let members: Vec<Point> = p.members_in(bounds);
    let inside: HashSet<&Point> = members.iter().collect();
    for dim in 0..=p.dim() {
        let subsets: Vec<Vec<usize>> = axis_subsets(p.dim(), dim);
        let per_base = exec::map_range(members.len(), |i| {
            let base = &members[i];
            let mut out = Vec::new();
            for s in &subsets {
                let Some(cube) = cube_at(base, s, |q| inside.contains(q)) else { continue };
                let set: BTreeSet<&Point> = cube.iter().collect();
                let stable = gens.iter().all(|g| cube.iter().all(|v| set.contains(&g.apply(v))));
                if stable {
                    out.push(cube);
                }
            }
            out
        });
        let mut cubes: Vec<Vec<Point>> = per_base.into_iter().flatten().collect();
        if !cubes.is_empty() {
            cubes.sort();
            return Ok((dim, cubes));
        }
    }
    Err(Error::NotElliptic)
}

pub(crate) fn axis_subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    rec(0, d, k, &mut cur, &mut out);
    out
}

/// The vertices of the cube with lower corner `base` spanning `axes`, if
/// they all satisfy `member`. Vertices are in sorted order.
pub(crate) fn cube_at(base: &Point, axes: &[usize], member: impl Fn(&Point) -> bool) -> Option<Vec<Point>> {
    let mut cube = Vec::with_capacity(1 << axes.len());
    for mask in 0u32..(1 << axes.len()) {
        let mut v = base.clone();
        for (bit, &a) in axes.iter().enumerate() {
            v[a] += (mask >> bit & 1) as i64;
        }
        if !member(&v) {
            return None;
        }
        cube.push(v);
    }
    cube.sort();
    Some(cube)
}

/// A box containing the cells and mapped onto itself by every generator.
/// The generators must generate a finite group.
pub fn invariant_box(p: &PeriodicComplex, gens: &[AffineIsometry], pad: i64) -> Result<BoxRange> {
    let mut b = p.padded_box(pad);
    for _ in 0..64 {
        let mut next = b.clone();
        for g in gens {
            let (x, y) = (g.apply(&b.lo), g.apply(&b.hi));
            let image = BoxRange {
                lo: x.iter().zip(&y).map(|(a, c)| *a.min(c)).collect(),
                hi: x.iter().zip(&y).map(|(a, c)| *a.max(c)).collect(),
            };
            next = next.hull(&image);
        }
        if next == b {
            return Ok(b);
        }
        b = next;
    }
    Err(Error::NotElliptic)
}

pub fn classify_affine(p: &PeriodicComplex, g: &AffineIsometry, radius: i64) -> Result<IsometryClass> {
    check_symmetry(p, g)?;
    if g.has_bounded_orbits() {
        let b = invariant_box(p, std::slice::from_ref(g), 1)?;
        let (dim, cubes) = stabilised_cubes_affine(p, std::slice::from_ref(g), &b)?;
        return Ok(IsometryClass::Elliptic { min_cube_dim: dim, cube: cubes[0].iter().map(|v| label(v)).collect() });
    }
    let norm = combinatorial_min(p, g, radius)?;
    let inverted = inverted_hyperplanes(p, g)?;
    let translation_length = translation_length(g);
    if !inverted.is_empty() {
        return Ok(IsometryClass::Inverting { inverted, translation_length, min_displacement: norm });
    }
    let (_, v) = stabilise(radius, |r| {
        let b = orbit_box(p, g, r);
        scan_box(&b)?;
        let x0 = &p.cells()[0];
        Ok(p.members_in(&b)
            .into_iter()
            .filter(|v| displacement_affine(g, v) == norm)
            .min_by(|a, c| (l1(a, x0), a).cmp(&(l1(c, x0), c))))
    })?;
    let v = v.ok_or(Error::EmptyWindow)?;
    Ok(IsometryClass::Loxodromic { min_vertex: label(&v), min_displacement: norm, translation_length })
}

fn require_loxodromic(p: &PeriodicComplex, g: &AffineIsometry, radius: i64) -> Result<u64> {
    check_symmetry(p, g)?;
    if g.has_bounded_orbits() {
        return Err(Error::NotLoxodromic("elliptic"));
    }
    if !inverted_hyperplanes(p, g)?.is_empty() {
        return Err(Error::NotLoxodromic("inverting"));
    }
    combinatorial_min(p, g, radius)
}

/// One period `[x, gx]` of an axis through `x`, taking at each step the
/// lowest axis that moves closer to `gx`.
pub fn axis(p: &PeriodicComplex, g: &AffineIsometry, x: &[i64], radius: i64) -> Result<Vec<Point>> {
    let norm = require_loxodromic(p, g, radius)?;
    if !p.contains(x) || displacement_affine(g, x) != norm {
        return Err(Error::NotInMinSet(label(x)));
    }
    let target = g.apply(x);
    let mut path = vec![x.to_vec()];
    let mut cur = x.to_vec();
    while cur != target {
        let step = (0..cur.len()).find_map(|i| {
            if cur[i] == target[i] {
                return None;
            }
            let mut next = cur.clone();
            next[i] += (target[i] - cur[i]).signum();
            p.contains(&next).then_some(next)
        });
        cur = step.ok_or_else(|| Error::Invariant(format!("no geodesic step from {}", label(&cur))))?;
        path.push(cur.clone());
    }
    Ok(path)
}

/// Whether `path` is one period of an axis of `g`: consecutive members at
/// unit steps, ending at `g` of its start, of length `||g||`, and such that
/// its `g`-translates concatenate to a path crossing every wall at most once.
pub fn is_axis(p: &PeriodicComplex, g: &AffineIsometry, path: &[Point], radius: i64) -> Result<bool> {
    let norm = combinatorial_min(p, g, radius)?;
    let (Some(first), Some(last)) = (path.first(), path.last()) else { return Ok(false) };
    if g.apply(first) != *last || (path.len() - 1) as u64 != norm {
        return Ok(false);
    }
    if !path.iter().all(|v| p.contains(v)) || !path.windows(2).all(|w| l1(&w[0], &w[1]) == 1) {
        return Ok(false);
    }
    let periods = 2 * g.order() as i64 + 2;
    let mut line: Vec<Point> = Vec::new();
    for m in -periods..=periods {
        let gm = g.power(m);
        let piece: Vec<Point> = path.iter().map(|v| gm.apply(v)).collect();
        line.extend(piece.into_iter().skip(if line.is_empty() { 0 } else { 1 }));
    }
    let mut crossed: HashSet<Wall> = HashSet::new();
    for w in line.windows(2) {
        for wall in walls_between(&w[0], &w[1]) {
            if !crossed.insert(wall) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A set of walls of a periodic complex: per axis, a union of closed
/// intervals of cut positions, each end possibly infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallSet {
    intervals: Vec<Vec<(Option<i64>, Option<i64>)>>,
}

type Interval = (Option<i64>, Option<i64>);

fn normalise(mut iv: Vec<Interval>) -> Vec<Interval> {
    iv.retain(|&(lo, hi)| match (lo, hi) {
        (Some(a), Some(b)) => a <= b,
        _ => true,
    });
    iv.sort_by(|a, b| match (a.0, b.0) {
        (None, None) => std::cmp::Ordering::Equal,
        (None, _) => std::cmp::Ordering::Less,
        (_, None) => std::cmp::Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(&y),
    });
    let mut out: Vec<Interval> = Vec::new();
    for (lo, hi) in iv {
        if let Some(last) = out.last_mut() {
            let touches = match (last.1, lo) {
                (None, _) | (_, None) => true,
                (Some(h), Some(l)) => l <= h.saturating_add(1),
            };
            if touches {
                last.1 = match (last.1, hi) {
                    (None, _) | (_, None) => None,
                    (Some(a), Some(b)) => Some(a.max(b)),
                };
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

fn subtract(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut cur: Vec<Interval> = a.to_vec();
    for &(blo, bhi) in b {
        let mut next = Vec::new();
        for &(lo, hi) in &cur {
            // part below blo
            if let Some(bl) = blo {
                let top = match hi {
                    Some(h) => Some(h.min(bl - 1)),
                    None => Some(bl - 1),
                };
                if lo.is_none_or(|l| l <= top.unwrap()) {
                    next.push((lo, top));
                }
            }
            // part above bhi
            if let Some(bh) = bhi {
                let bottom = match lo {
                    Some(l) => Some(l.max(bh + 1)),
                    None => Some(bh + 1),
                };
                if hi.is_none_or(|h| bottom.unwrap() <= h) {
                    next.push((bottom, hi));
                }
            }
        }
        cur = normalise(next);
    }
    cur
}

impl WallSet {
    pub fn new(dim: usize, pieces: &[(usize, Option<i64>, Option<i64>)]) -> Result<Self> {
        let mut intervals = vec![Vec::new(); dim];
        for &(axis, lo, hi) in pieces {
            if axis >= dim {
                return Err(Error::Parse(format!("wall set axis {axis} out of range")));
            }
            intervals[axis].push((lo, hi));
        }
        Ok(Self { intervals: intervals.into_iter().map(normalise).collect() })
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn contains(&self, w: Wall) -> bool {
        self.intervals[w.axis]
            .iter()
            .any(|&(lo, hi)| lo.is_none_or(|l| l <= w.cut) && hi.is_none_or(|h| w.cut <= h))
    }

    /// `{ W : g W ∈ self }`.
    pub fn preimage(&self, g: &AffineIsometry) -> WallSet {
        let d = self.dim();
        let mut intervals = vec![Vec::new(); d];
        for (j, &(i, s)) in g.perm().iter().enumerate() {
            let t = g.trans()[j];
            intervals[i] = self.intervals[j]
                .iter()
                .map(|&(lo, hi)| {
                    if s == 1 {
                        (lo.map(|l| l - t), hi.map(|h| h - t))
                    } else {
                        (hi.map(|h| t - 1 - h), lo.map(|l| t - 1 - l))
                    }
                })
                .collect();
            intervals[i] = normalise(std::mem::take(&mut intervals[i]));
        }
        WallSet { intervals }
    }

    pub fn difference(&self, other: &WallSet) -> WallSet {
        WallSet { intervals: self.intervals.iter().zip(&other.intervals).map(|(a, b)| subtract(a, b)).collect() }
    }

    /// Symmetric difference with a finite set of walls.
    pub fn toggle(&self, walls: &[Wall]) -> WallSet {
        let mut out = self.clone();
        for &w in walls {
            let single = vec![(Some(w.cut), Some(w.cut))];
            if out.contains(w) {
                out.intervals[w.axis] = subtract(&out.intervals[w.axis], &single);
            } else {
                out.intervals[w.axis].push(single[0]);
                out.intervals[w.axis] = normalise(std::mem::take(&mut out.intervals[w.axis]));
            }
        }
        out
    }

    /// Number of walls of `p` in the set, if finite.
    pub fn count(&self, p: &PeriodicComplex) -> Option<u64> {
        let mut total = 0;
        for (axis, iv) in self.intervals.iter().enumerate() {
            let (m, pos) = p.wall_positions(axis);
            for &(lo, hi) in iv {
                match (lo, hi) {
                    (Some(l), Some(h)) => total += p.count_walls(axis, l, h),
                    _ if pos.is_empty() => {}
                    _ if m != 0 => return None,
                    _ => {
                        let l = lo.unwrap_or(i64::MIN);
                        let h = hi.unwrap_or(i64::MAX);
                        total += pos.range(l..=h).count() as u64;
                    }
                }
            }
        }
        Some(total)
    }
}

/// `tr_M(g) = |M \ g^-1 M| - |g^-1 M \ M|`.
pub fn transfer_number(p: &PeriodicComplex, g: &AffineIsometry, m: &WallSet) -> Result<i64> {
    check_symmetry(p, g)?;
    if m.dim() != p.dim() {
        return Err(Error::Parse("wall set dimension differs from the complex".into()));
    }
    let pre = m.preimage(g);
    let out = m.difference(&pre).count(p);
    let back = pre.difference(m).count(p);
    match (out, back) {
        (Some(a), Some(b)) => Ok(a as i64 - b as i64),
        _ => Err(Error::NotCommensurated("M and its preimage differ in infinitely many walls".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prism() -> (PeriodicComplex, AffineIsometry) {
        let cells: Vec<Point> = vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
        let p = PeriodicComplex::new(3, &[vec![0, 0, 1]], &cells).unwrap();
        let g = AffineIsometry::new(vec![(1, -1), (0, 1), (2, 1)], vec![1, 0, 1]).unwrap();
        (p, g)
    }

    #[test]
    fn translations_of_the_line_and_plane() {
        let z = PeriodicComplex::euclidean(1);
        let t = AffineIsometry::translation(vec![1]);
        let c = classify_affine(&z, &t, 2).unwrap();
        assert_eq!(c.name(), "loxodromic");
        assert_eq!(combinatorial_min(&z, &t, 2).unwrap(), 1);
        let z2 = PeriodicComplex::euclidean(2);
        let t = AffineIsometry::translation(vec![1, 1]);
        assert_eq!(combinatorial_min(&z2, &t, 2).unwrap(), 2);
        assert_eq!(translation_length(&t), Ratio::from_integer(2));
        assert!(inverted_hyperplanes(&z2, &t).unwrap().is_empty());
    }

    #[test]
    fn rotation_of_the_prism_inverts_two_walls() {
        let (p, g) = prism();
        let inv = inverted_hyperplanes(&p, &g).unwrap();
        assert_eq!(inv.len(), 2);
        assert!(inv.iter().all(|w| w.power == 2));
        assert_eq!(classify_affine(&p, &g, 2).unwrap().name(), "inverting");
        assert_eq!(translation_length(&g), Ratio::from_integer(1));
        assert_eq!(combinatorial_min(&p, &g, 2).unwrap(), 2);
    }

    #[test]
    fn reflection_is_elliptic() {
        let z2 = PeriodicComplex::euclidean(2);
        let r = AffineIsometry::new(vec![(0, -1), (1, 1)], vec![1, 0]).unwrap();
        let IsometryClass::Elliptic { min_cube_dim, .. } = classify_affine(&z2, &r, 2).unwrap() else { panic!() };
        assert_eq!(min_cube_dim, 1);
        assert_eq!(translation_length(&r), Ratio::from_integer(0));
        assert!(matches!(inverted_hyperplanes(&z2, &r), Err(Error::BoundedOrbits)));
    }

    #[test]
    fn axes_of_a_diagonal_translation() {
        let z2 = PeriodicComplex::euclidean(2);
        let t = AffineIsometry::translation(vec![1, 1]);
        let path = axis(&z2, &t, &[0, 0], 2).unwrap();
        assert_eq!(path, vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        assert!(is_axis(&z2, &t, &path, 2).unwrap());
        let detour = vec![vec![0, 0], vec![0, -1], vec![1, -1]];
        assert!(!is_axis(&z2, &t, &detour, 2).unwrap());
        let wiggle = vec![vec![0, 0], vec![0, 1], vec![1, 1]];
        assert!(is_axis(&z2, &t, &wiggle, 2).unwrap());
    }

    #[test]
    fn wall_set_arithmetic() {
        let m = WallSet::new(1, &[(0, Some(0), None)]).unwrap();
        let pre = m.preimage(&AffineIsometry::translation(vec![3]));
        assert!(pre.contains(Wall { axis: 0, cut: -3 }));
        assert!(!pre.contains(Wall { axis: 0, cut: -4 }));
        let d = pre.difference(&m);
        assert_eq!(d.count(&PeriodicComplex::euclidean(1)), Some(3));
        let refl = AffineIsometry::new(vec![(0, -1)], vec![0]).unwrap();
        assert!(m.preimage(&refl).contains(Wall { axis: 0, cut: -1 }));
        assert!(!m.preimage(&refl).contains(Wall { axis: 0, cut: 0 }));
    }

    #[test]
    fn transfer_on_the_line() {
        let z = PeriodicComplex::euclidean(1);
        let m = WallSet::new(1, &[(0, Some(0), None)]).unwrap();
        for k in -3..=3 {
            let tr = transfer_number(&z, &AffineIsometry::translation(vec![k]), &m).unwrap();
            assert_eq!(tr, -k);
        }
        let all = WallSet::new(1, &[(0, None, None)]).unwrap();
        let refl = AffineIsometry::new(vec![(0, -1)], vec![0]).unwrap();
        assert_eq!(transfer_number(&z, &refl, &all).unwrap(), 0);
        let half = WallSet::new(1, &[(0, Some(0), None)]).unwrap();
        assert!(matches!(transfer_number(&z, &refl, &half), Err(Error::NotCommensurated(_))));
    }

    #[test]
    fn finite_isometry_checks() {
        let x = CubeComplex::build(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(FiniteIsometry::from_names(&x, &[("a", "c"), ("b", "b"), ("c", "a")]).is_ok());
        assert!(FiniteIsometry::from_names(&x, &[("a", "b"), ("b", "a"), ("c", "c")]).is_err());
        let flip = FiniteIsometry::from_names(&x, &[("a", "c"), ("b", "b"), ("c", "a")]).unwrap();
        let IsometryClass::Elliptic { min_cube_dim, cube } = classify_finite(&x, &flip).unwrap() else { panic!() };
        assert_eq!((min_cube_dim, cube), (0, vec!["b".to_string()]));
    }
}
