//! Lattice-periodic subcomplexes of `Z^d` and their affine symmetries.
//!
//! A [`PeriodicComplex`] is the set of integer points congruent to one of
//! finitely many cells modulo a lattice, with unit coordinate steps as
//! edges. When it is connected, median-closed and `l1`-isometric, its
//! hyperplanes are exactly the coordinate cuts [`Wall`] that it crosses, its
//! distance is the `l1` distance and its median is the coordinatewise median.
//! Every box intersects it in a convex, hence median, subcomplex.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exec;
use crate::lattice::{strictly_feasible, Lattice};
use crate::median_core::{CubeComplex, HyperplaneId, VertexId};

pub type Point = Vec<i64>;

pub fn label(p: &[i64]) -> String {
    let parts: Vec<String> = p.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn l1(a: &[i64], b: &[i64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
}

pub fn coordinate_median(a: &[i64], b: &[i64], c: &[i64]) -> Point {
    (0..a.len())
        .map(|i| {
            let mut t = [a[i], b[i], c[i]];
            t.sort_unstable();
            t[1]
        })
        .collect()
}

/// The hyperplane between `x[axis] <= cut` and `x[axis] >= cut + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wall {
    pub axis: usize,
    pub cut: i64,
}

impl Wall {
    /// `true` for the upper side.
    pub fn side(&self, p: &[i64]) -> bool {
        p[self.axis] > self.cut
    }

    pub fn separates(&self, a: &[i64], b: &[i64]) -> bool {
        self.side(a) != self.side(b)
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}={}|{}", self.axis, self.cut, self.cut + 1)
    }
}

/// Walls separating two points, in axis then position order.
pub fn walls_between(a: &[i64], b: &[i64]) -> Vec<Wall> {
    let mut out = Vec::new();
    for axis in 0..a.len() {
        let (lo, hi) = (a[axis].min(b[axis]), a[axis].max(b[axis]));
        out.extend((lo..hi).map(|cut| Wall { axis, cut }));
    }
    out
}

/// An axis-parallel box `lo[i] <= x[i] <= hi[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxRange {
    pub lo: Point,
    pub hi: Point,
}

impl BoxRange {
    pub fn around(points: &[Point], pad: i64) -> Self {
        let d = points[0].len();
        let lo = (0..d).map(|i| points.iter().map(|p| p[i]).min().unwrap() - pad).collect();
        let hi = (0..d).map(|i| points.iter().map(|p| p[i]).max().unwrap() + pad).collect();
        Self { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.iter().zip(&self.lo).zip(&self.hi).all(|((x, l), h)| l <= x && x <= h)
    }

    pub fn volume(&self) -> u64 {
        if self.is_empty() {
            return 0;
        }
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l + 1) as u64).product()
    }

    /// All integer points, in lexicographic order.
    pub fn points(&self) -> Vec<Point> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(self.volume() as usize);
        let mut p = self.lo.clone();
        loop {
            out.push(p.clone());
            let mut i = p.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if p[i] < self.hi[i] {
                    p[i] += 1;
                    break;
                }
                p[i] = self.lo[i];
            }
        }
    }

    pub fn grow(&self, pad: i64) -> Self {
        Self { lo: self.lo.iter().map(|x| x - pad).collect(), hi: self.hi.iter().map(|x| x + pad).collect() }
    }

    pub fn hull(&self, other: &BoxRange) -> Self {
        Self {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| *a.min(b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| *a.max(b)).collect(),
        }
    }
}

/// A finite window of a periodic complex, with coordinates kept.
#[derive(Clone, Debug)]
pub struct Window {
    pub complex: CubeComplex,
    pub bounds: BoxRange,
    coords: Vec<Point>,
    index: HashMap<Point, VertexId>,
}

impl Window {
    pub fn point(&self, v: VertexId) -> &Point {
        &self.coords[v.0]
    }

    pub fn points(&self) -> &[Point] {
        &self.coords
    }

    pub fn vertex_at(&self, p: &[i64]) -> Option<VertexId> {
        self.index.get(p).copied()
    }

    /// The coordinate wall dual to a hyperplane of the window.
    pub fn wall(&self, h: HyperplaneId) -> Wall {
        let (a, b) = self.complex.hyperplane_edges(h)[0];
        let (pa, pb) = (self.point(a), self.point(b));
        let axis = (0..pa.len()).find(|&i| pa[i] != pb[i]).unwrap();
        Wall { axis, cut: pa[axis].min(pb[axis]) }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Builds the window complex induced on `points` (unit steps as edges).
pub(crate) fn complex_on(points: Vec<Point>, bounds: BoxRange) -> Result<Window> {
    if points.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let names: Vec<String> = points.iter().map(|p| label(p)).collect();
    let pos: HashMap<&Point, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut edges = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let mut q = p.clone();
        for axis in 0..p.len() {
            q[axis] += 1;
            if let Some(&j) = pos.get(&q) {
                edges.push((i, j));
            }
            q[axis] -= 1;
        }
    }
    let complex = CubeComplex::build_indexed(names, &edges)?;
    let coords: Vec<Point> = complex.vertices().map(|v| points[pos[&parse_label(complex.name(v))]].clone()).collect();
    let index = coords.iter().enumerate().map(|(i, p)| (p.clone(), VertexId(i))).collect();
    Ok(Window { complex, bounds, coords, index })
}

fn parse_label(s: &str) -> Point {
    s.trim_matches(|c| c == '(' || c == ')').split(',').filter(|t| !t.is_empty()).map(|t| t.parse().unwrap()).collect()
}

/// A failure of the validity conditions, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeriodicViolation {
    Disconnected { from: Point, to: Point },
    NotIsometric { a: Point, b: Point, graph: u64, l1: u64 },
    NotMedianClosed { triple: [Point; 3], median: Point },
}

impl fmt::Display for PeriodicViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Disconnected { from, to } => {
                write!(f, "{} is unreachable from {}", label(to), label(from))
            }
            Self::NotIsometric { a, b, graph, l1 } => {
                write!(f, "graph distance {graph} differs from l1 distance {l1} between {} and {}", label(a), label(b))
            }
            Self::NotMedianClosed { triple, median } => write!(
                f,
                "median {} of {}, {}, {} is not a member",
                label(median),
                label(&triple[0]),
                label(&triple[1]),
                label(&triple[2])
            ),
        }
    }
}

#[derive(Debug)]
pub struct PeriodicComplex {
    dim: usize,
    lattice: Lattice,
    cells: Vec<Point>,
    residues: HashSet<Point>,
    validity: OnceLock<std::result::Result<(), PeriodicViolation>>,
}

impl Clone for PeriodicComplex {
    fn clone(&self) -> Self {
        let validity = OnceLock::new();
        if let Some(v) = self.validity.get() {
            let _ = validity.set(v.clone());
        }
        Self {
            dim: self.dim,
            lattice: self.lattice.clone(),
            cells: self.cells.clone(),
            residues: self.residues.clone(),
            validity,
        }
    }
}

impl PartialEq for PeriodicComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.lattice == other.lattice && self.residues == other.residues
    }
}

impl PeriodicComplex {
    pub fn new(dim: usize, lattice: &[Vec<i64>], cells: &[Point]) -> Result<Self> {
        if lattice.iter().chain(cells).any(|v| v.len() != dim) {
            return Err(Error::InvalidPeriodic(format!("every vector must have length {dim}")));
        }
        if cells.is_empty() {
            return Err(Error::InvalidPeriodic("no cells".into()));
        }
        Ok(Self::from_lattice(Lattice::new(dim, lattice), cells))
    }

    pub(crate) fn from_lattice(lattice: Lattice, cells: &[Point]) -> Self {
        let dim = lattice.dim();
        let mut seen = HashSet::new();
        let mut kept: Vec<Point> = Vec::new();
        let mut sorted = cells.to_vec();
        sorted.sort();
        for c in sorted {
            if seen.insert(lattice.reduce(&c)) {
                kept.push(c);
            }
        }
        Self { dim, lattice, cells: kept, residues: seen, validity: OnceLock::new() }
    }

    /// `Z^d` itself.
    pub fn euclidean(dim: usize) -> Self {
        Self::from_lattice(Lattice::full(dim), &[vec![0; dim]])
    }

    /// A single point of `Z^0`.
    pub fn point() -> Self {
        Self::from_lattice(Lattice::zero(0), &[vec![]])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// One representative per class, sorted.
    pub fn cells(&self) -> &[Point] {
        &self.cells
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim && self.residues.contains(&self.lattice.reduce(v))
    }

    pub fn is_bounded(&self) -> bool {
        self.lattice.rank() == 0
    }

    /// Coordinate concatenation.
    pub fn product(&self, other: &PeriodicComplex) -> PeriodicComplex {
        let d = self.dim + other.dim;
        let gens: Vec<Vec<i64>> = self
            .lattice
            .basis()
            .iter()
            .map(|b| b.iter().copied().chain(std::iter::repeat_n(0, other.dim)).collect())
            .chain(
                other
                    .lattice
                    .basis()
                    .iter()
                    .map(|b| std::iter::repeat_n(0, self.dim).chain(b.iter().copied()).collect()),
            )
            .collect();
        let cells: Vec<Point> = self
            .cells
            .iter()
            .flat_map(|a| other.cells.iter().map(move |b| a.iter().chain(b).copied().collect()))
            .collect();
        Self::from_lattice(Lattice::new(d, &gens), &cells)
    }

    /// Bounding box of the cells and their translates by the basis vectors.
    pub fn fundamental_box(&self) -> BoxRange {
        let mut pts = self.cells.clone();
        for c in &self.cells {
            for b in self.lattice.basis() {
                pts.push(c.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        BoxRange::around(&pts, 0)
    }

    /// The cells' bounding box grown by `radius` on every side.
    pub fn padded_box(&self, radius: i64) -> BoxRange {
        BoxRange::around(&self.cells, radius)
    }

    pub fn members_in(&self, bounds: &BoxRange) -> Vec<Point> {
        let pts = bounds.points();
        let keep = exec::map_range(pts.len(), |i| self.contains(&pts[i]));
        pts.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect()
    }

    /// The complex induced on the members inside `bounds`.
    pub fn window(&self, bounds: &BoxRange) -> Result<Window> {
        let w = complex_on(self.members_in(bounds), bounds.clone())?;
        if self.is_valid() {
            w.complex.certify_median();
        }
        Ok(w)
    }

    pub fn window_radius(&self, radius: i64) -> Result<Window> {
        self.window(&self.padded_box(radius))
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Connectivity, `l1`-isometry and median closure on a window covering
    /// a fundamental domain with padding. Cached.
    pub fn validate(&self) -> std::result::Result<(), PeriodicViolation> {
        self.validity.get_or_init(|| self.check_validity()).clone()
    }

    fn check_validity(&self) -> std::result::Result<(), PeriodicViolation> {
        let bounds = self.fundamental_box().grow(2);
        let members = self.members_in(&bounds);
        let w = match complex_on(members.clone(), bounds) {
            Ok(w) => w,
            Err(Error::Disconnected(a, b)) => {
                return Err(PeriodicViolation::Disconnected { from: parse_label(&b), to: parse_label(&a) })
            }
            Err(_) => unreachable!("members are distinct and nonempty"),
        };
        let n = w.len();
        let x = &w.complex;
        let bad_pair = exec::find_first(n, |i| {
            (i + 1..n).find_map(|j| {
                let (a, b) = (w.point(VertexId(i)), w.point(VertexId(j)));
                let graph = x.distance(VertexId(i), VertexId(j)) as u64;
                let d = l1(a, b);
                (graph != d).then(|| PeriodicViolation::NotIsometric { a: a.clone(), b: b.clone(), graph, l1: d })
            })
        });
        if let Some(v) = bad_pair {
            return Err(v);
        }
        let bad_triple = exec::find_first(n, |i| {
            for j in i + 1..n {
                for k in j + 1..n {
                    let t = [&w.coords[i], &w.coords[j], &w.coords[k]];
                    let m = coordinate_median(t[0], t[1], t[2]);
                    if !self.contains(&m) {
                        return Some(PeriodicViolation::NotMedianClosed { triple: t.map(|p| p.clone()), median: m });
                    }
                }
            }
            None
        });
        match bad_triple {
            Some(v) => Err(v),
            None => Ok(()),
        }
    }

    /// Positions `c` such that the wall `x[axis] = c | c+1` exists, as a
    /// modulus `m` (0 for a finite set) and the residues or values.
    pub fn wall_positions(&self, axis: usize) -> (i64, BTreeSet<i64>) {
        let m = self.lattice.axis_modulus(axis);
        let mut out = BTreeSet::new();
        for c in &self.cells {
            let mut up = c.clone();
            up[axis] += 1;
            if self.contains(&up) {
                out.insert(if m == 0 { c[axis] } else { c[axis].rem_euclid(m) });
            }
            let mut down = c.clone();
            down[axis] -= 1;
            if self.contains(&down) {
                let cut = c[axis] - 1;
                out.insert(if m == 0 { cut } else { cut.rem_euclid(m) });
            }
        }
        (m, out)
    }

    pub fn has_wall(&self, w: Wall) -> bool {
        let (m, pos) = self.wall_positions(w.axis);
        pos.contains(&if m == 0 { w.cut } else { w.cut.rem_euclid(m) })
    }

    /// Number of walls on `axis` with cut in `lo..=hi`.
    pub fn count_walls(&self, axis: usize, lo: i64, hi: i64) -> u64 {
        if lo > hi {
            return 0;
        }
        let (m, pos) = self.wall_positions(axis);
        if m == 0 {
            return pos.range(lo..=hi).count() as u64;
        }
        pos.iter()
            .map(|&r| {
                // values r + k m inside [lo, hi]
                let first = lo + (r - lo).rem_euclid(m);
                if first > hi {
                    0
                } else {
                    ((hi - first) / m + 1) as u64
                }
            })
            .sum()
    }

    pub fn degree(&self, v: &[i64]) -> usize {
        let mut q = v.to_vec();
        let mut deg = 0;
        for axis in 0..self.dim {
            for step in [-1, 1] {
                q[axis] += step;
                deg += self.contains(&q) as usize;
                q[axis] -= step;
            }
        }
        deg
    }

    /// Largest vertex degree (exact, by periodicity).
    pub fn max_degree(&self) -> usize {
        self.cells.iter().map(|c| self.degree(c)).max().unwrap_or(0)
    }

    /// Whether `axis` carries at least one wall.
    pub fn is_active(&self, axis: usize) -> bool {
        !self.wall_positions(axis).1.is_empty()
    }

    /// Coarse shape: `point`, `cube(k)`, `finite(n)`, `line` or `flat(r)`.
    pub fn shape(&self) -> String {
        if self.is_bounded() {
            if self.cells.len() == 1 {
                return "point".into();
            }
            let active: Vec<usize> = (0..self.dim).filter(|&a| self.is_active(a)).collect();
            let k = active.len();
            let cube =
                k < 63 && self.cells.len() == 1 << k && active.iter().all(|&a| self.wall_positions(a).1.len() == 1);
            return if cube { format!("cube({k})") } else { format!("finite({})", self.cells.len()) };
        }
        if self.lattice.rank() == 1 && self.cells.iter().all(|c| self.degree(c) == 2) {
            let period = self.lattice.basis()[0].iter().map(|x| x.abs()).sum::<i64>();
            if period as usize == self.cells.len() {
                return "line".into();
            }
        }
        format!("flat({})", self.lattice.rank())
    }
}

/// `g(v)[j] = sign[j] * v[axis[j]] + trans[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineIsometry {
    perm: Vec<(usize, i8)>,
    trans: Vec<i64>,
}

impl AffineIsometry {
    pub fn new(perm: Vec<(usize, i8)>, trans: Vec<i64>) -> Result<Self> {
        let d = perm.len();
        if trans.len() != d {
            return Err(Error::InvalidIsometry(format!(
                "translation has length {} but the permutation has {d} entries",
                trans.len()
            )));
        }
        let mut seen = vec![false; d];
        for &(axis, sign) in &perm {
            if axis >= d || std::mem::replace(&mut seen[axis], true) {
                return Err(Error::InvalidIsometry(format!("axis {axis} repeated or out of range")));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::InvalidIsometry(format!("sign {sign} is not +1 or -1")));
            }
        }
        Ok(Self { perm, trans })
    }

    pub fn identity(dim: usize) -> Self {
        Self { perm: (0..dim).map(|i| (i, 1)).collect(), trans: vec![0; dim] }
    }

    pub fn translation(v: Vec<i64>) -> Self {
        Self { perm: (0..v.len()).map(|i| (i, 1)).collect(), trans: v }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[(usize, i8)] {
        &self.perm
    }

    pub fn trans(&self) -> &[i64] {
        &self.trans
    }

    pub fn apply(&self, v: &[i64]) -> Point {
        self.perm.iter().zip(&self.trans).map(|(&(a, s), t)| s as i64 * v[a] + t).collect()
    }

    /// Image of a vector under the linear part.
    pub fn linear(&self, v: &[i64]) -> Point {
        self.perm.iter().map(|&(a, s)| s as i64 * v[a]).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineIsometry) -> AffineIsometry {
        let perm = self
            .perm
            .iter()
            .map(|&(a, s)| {
                let (b, t) = other.perm[a];
                (b, s * t)
            })
            .collect();
        let trans = self.perm.iter().zip(&self.trans).map(|(&(a, s), t)| s as i64 * other.trans[a] + t).collect();
        AffineIsometry { perm, trans }
    }

    pub fn inverse(&self) -> AffineIsometry {
        let d = self.dim();
        let mut perm = vec![(0, 1); d];
        let mut trans = vec![0; d];
        for (j, (&(a, s), t)) in self.perm.iter().zip(&self.trans).enumerate() {
            perm[a] = (j, s);
            trans[a] = -(s as i64) * t;
        }
        AffineIsometry { perm, trans }
    }

    pub fn power(&self, n: i64) -> AffineIsometry {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = AffineIsometry::identity(self.dim());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_linear_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &(a, s))| a == j && s == 1)
    }

    /// Order of the linear part.
    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut g = self.clone();
        while !g.is_linear_identity() {
            g = g.compose(self);
            k += 1;
        }
        k
    }

    /// Translation part of `g^k`, `k` the order of the linear part.
    pub fn translation_vector(&self) -> Point {
        self.power(self.order() as i64).trans
    }

    pub fn has_bounded_orbits(&self) -> bool {
        self.translation_vector().iter().all(|&x| x == 0)
    }

    /// Image of a wall, and whether the two sides are exchanged.
    pub fn map_wall(&self, w: Wall) -> (Wall, bool) {
        let (j, &(_, s)) = self.perm.iter().enumerate().find(|(_, &(a, _))| a == w.axis).unwrap();
        if s == 1 {
            (Wall { axis: j, cut: w.cut + self.trans[j] }, false)
        } else {
            (Wall { axis: j, cut: self.trans[j] - w.cut - 1 }, true)
        }
    }

    /// Whether the linear part maps the set `axes` onto itself.
    pub fn preserves_axes(&self, axes: &[usize]) -> bool {
        let set: HashSet<usize> = axes.iter().copied().collect();
        axes.iter().all(|&j| set.contains(&self.perm[j].0))
    }

    /// The induced map on the coordinates `axes` (which must be preserved).
    pub fn restrict(&self, axes: &[usize]) -> Result<AffineIsometry> {
        if !self.preserves_axes(axes) {
            return Err(Error::Unsupported("isometry does not preserve the factor axes".into()));
        }
        let pos: HashMap<usize, usize> = axes.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let perm = axes.iter().map(|&j| (pos[&self.perm[j].0], self.perm[j].1)).collect();
        let trans = axes.iter().map(|&j| self.trans[j]).collect();
        AffineIsometry::new(perm, trans)
    }

    /// Whether the two maps commute on the given points.
    pub fn commutes_on(&self, other: &AffineIsometry, points: &[Point]) -> bool {
        let (ab, ba) = (self.compose(other), other.compose(self));
        ab == ba || points.iter().all(|p| ab.apply(p) == ba.apply(p))
    }
}

/// Checks that `g` maps the complex onto itself; the witness is a member
/// whose image under `g` or `g^-1` is not a member.
pub fn check_symmetry(p: &PeriodicComplex, g: &AffineIsometry) -> Result<()> {
    if g.dim() != p.dim() {
        return Err(Error::InvalidIsometry(format!(
            "isometry acts on Z^{} but the complex lives in Z^{}",
            g.dim(),
            p.dim()
        )));
    }
    let inv = g.inverse();
    let escapes = |v: &Point| !p.contains(&g.apply(v)) || !p.contains(&inv.apply(v));
    if let Some(c) = p.cells().iter().find(|c| escapes(c)) {
        return Err(Error::NotSymmetry(c.clone()));
    }
    // A symmetry conjugates translations by l to translations by P l, so the
    // complex must be periodic under the P-orbit of the lattice.
    let k = g.order();
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for i in 0..k {
        let gi = g.power(i as i64);
        gens.extend(p.lattice().basis().iter().map(|b| gi.linear(b)));
    }
    for b in &gens {
        for c in p.cells() {
            for sign in [1, -1] {
                let moved: Point = c.iter().zip(b).map(|(x, y)| x + sign * y).collect();
                if !p.contains(&moved) {
                    return Err(Error::NotSymmetry(symmetry_witness(p, g, c, b, sign)));
                }
            }
        }
    }
    Ok(())
}

/// Follows orbits to turn "c + b is not a member" into a member whose image
/// under `g` or `g^-1` leaves the complex.
fn symmetry_witness(p: &PeriodicComplex, g: &AffineIsometry, c: &Point, b: &Point, sign: i64) -> Point {
    let inv = g.inverse();
    let k = g.order() as i64;
    for i in 0..k {
        let gi = g.power(i);
        let Some(l) = p.lattice().basis().iter().find(|l| &gi.linear(l) == b) else { continue };
        // c + sign * P^i l = g^i (g^-i c + sign * l)
        let mut y = c.clone();
        for _ in 0..i {
            let next = inv.apply(&y);
            if !p.contains(&next) {
                return y;
            }
            y = next;
        }
        let mut z: Point = y.iter().zip(l).map(|(a, b)| a + sign * b).collect();
        for _ in 0..i {
            let next = g.apply(&z);
            if !p.contains(&next) {
                return z;
            }
            z = next;
        }
    }
    c.clone()
}

/// A coordinate of a direction class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    /// Side of `x[axis] = cut | cut+1` on which this coordinate lies.
    pub fn upper_side_of(self, cut: i64) -> bool {
        match self {
            ExtInt::NegInf => false,
            ExtInt::PosInf => true,
            ExtInt::Fin(x) => x > cut,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::PosInf => write!(f, "+inf"),
            ExtInt::Fin(x) => write!(f, "{x}"),
        }
    }
}

/// A point of `(Z ∪ {±∞})^d`, standing for a point of the Roller boundary.
pub type DirectionClass = Vec<ExtInt>;

pub fn direction_label(d: &[ExtInt]) -> String {
    let parts: Vec<String> = d.iter().map(ExtInt::to_string).collect();
    format!("({})", parts.join(","))
}

/// The cubical component of the Roller compactification whose points have
/// infinite coordinates with the given signs (`0` for finite coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RollerComponent {
    pub pattern: Vec<i8>,
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RollerReport {
    pub components: Vec<RollerComponent>,
    /// A bounded component with the largest number of infinite coordinates.
    pub flagged: usize,
}

/// Whether some lattice vector has exactly the sign pattern `s`.
fn pattern_realized(lattice: &Lattice, s: &[i8]) -> bool {
    let zeros: Vec<usize> = (0..s.len()).filter(|&i| s[i] == 0).collect();
    let sub = lattice.vanishing_on(&zeros);
    let constraints: Vec<Vec<i64>> =
        (0..s.len()).filter(|&i| s[i] != 0).map(|i| sub.basis().iter().map(|b| s[i] as i64 * b[i]).collect()).collect();
    if constraints.is_empty() {
        return true;
    }
    if sub.rank() == 0 {
        return false;
    }
    strictly_feasible(&constraints)
}

/// Cubical components of the Roller compactification, one per realised
/// pattern of infinite coordinates.
///
/// A geodesic ray of a periodic complex eventually follows lattice
/// directions, so a pattern is realised exactly when some lattice vector has
/// that sign pattern. A component is bounded when no realised pattern
/// extends its set of infinite coordinates.
pub fn roller_directions(p: &PeriodicComplex) -> RollerReport {
    let d = p.dim();
    let total = 3usize.pow(d as u32);
    let mut patterns = Vec::new();
    for code in 0..total {
        let mut c = code;
        let s: Vec<i8> = (0..d)
            .map(|_| {
                let digit = (c % 3) as i8 - 1;
                c /= 3;
                digit
            })
            .collect();
        if pattern_realized(p.lattice(), &s) {
            patterns.push(s);
        }
    }
    patterns.sort_by_key(|s| (s.iter().filter(|&&x| x != 0).count(), s.clone()));
    let extends = |t: &[i8], s: &[i8]| t != s && s.iter().zip(t).all(|(&a, &b)| a == 0 || a == b);
    let components: Vec<RollerComponent> = patterns
        .iter()
        .map(|s| RollerComponent { pattern: s.clone(), bounded: !patterns.iter().any(|t| extends(t, s)) })
        .collect();
    let flagged = (0..components.len())
        .filter(|&i| components[i].bounded)
        .max_by_key(|&i| {
            let inf = components[i].pattern.iter().filter(|&&x| x != 0).count();
            (inf, std::cmp::Reverse(i))
        })
        .expect("a pattern with maximal support is never extended");
    RollerReport { components, flagged }
}
