//! Median sets of isometries and their decomposition as a product of a
//! median algebra `T`, a median flat `F` and a cube `Q`.
//!
//! On periodic hosts the median set is computed as a periodic subset of the
//! host's coordinates, then rewritten on a minimal set of axes (dropping
//! constant axes and axes of the form `x_j = ±x_i + c`). In those reduced
//! coordinates the factors are coordinate projections, and every claim of
//! the decomposition is checked on windows against independent
//! computations: the intrinsic metric comes from the cubulation of the
//! window, the fibre from iterated medians with far orbit points.

use std::collections::{BTreeSet, HashSet};

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::isometry::{
    self, combinatorial_min, displacement_affine, invariant_box, orbit_box, scan_box, stabilise,
    stabilised_cubes_affine, FiniteIsometry, IsometryClass,
};
use crate::lattice::Lattice;
use crate::median_core::{CubeComplex, VertexId, VertexSet};
use crate::periodic::{
    check_symmetry, coordinate_median, l1, label, roller_directions, AffineIsometry, BoxRange, DirectionClass, ExtInt,
    PeriodicComplex, Point, Wall,
};
use crate::wallspace::{cubical_quotient, subalgebra_cubulation};

/// Outcome of one verified property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Number of instances examined.
    pub count: u64,
    /// Informational checks record observations that are not guaranteed.
    pub required: bool,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn require(&mut self, name: &'static str, passed: bool, count: u64) {
        self.0.push(Check { name, passed, count, required: true });
    }

    fn observe(&mut self, name: &'static str, passed: bool, count: u64) {
        self.0.push(Check { name, passed, count, required: false });
    }
}

#[derive(Clone, Debug)]
pub enum Factor {
    Finite(CubeComplex),
    Periodic(PeriodicComplex),
}

impl Factor {
    pub fn point() -> Self {
        Factor::Periodic(PeriodicComplex::point())
    }

    pub fn shape(&self) -> String {
        match self {
            Factor::Periodic(p) => p.shape(),
            Factor::Finite(c) => finite_shape(c),
        }
    }
}

pub fn finite_shape(c: &CubeComplex) -> String {
    let (n, h) = (c.vertex_count(), c.hyperplane_count());
    if n == 1 {
        "point".into()
    } else if h < 63 && n == 1 << h {
        format!("cube({h})")
    } else {
        format!("finite({n})")
    }
}

pub fn cube_shape(q: usize) -> String {
    if q == 0 {
        "point".into()
    } else {
        format!("cube({q})")
    }
}

#[derive(Clone, Debug)]
pub enum MedSet {
    Finite(VertexSet),
    /// A periodic subset of the host's coordinates. It need not be
    /// connected as an induced subgraph.
    Periodic(PeriodicComplex),
}

/// `phi` evaluated at one vertex of the median set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiSample {
    pub x: String,
    pub t: String,
    pub f: String,
    pub q: String,
}

#[derive(Clone, Debug)]
pub struct MedianDecomposition {
    pub class: &'static str,
    pub med: MedSet,
    pub t: Factor,
    pub f: Factor,
    pub q: usize,
    /// Vertices of the base cube, as labels.
    pub cube: Vec<String>,
    pub translation_length: Ratio<i64>,
    pub min_displacement: u64,
    pub zeta: Option<DirectionClass>,
    pub xi: Option<DirectionClass>,
    /// Largest vertex degree of `F`.
    pub max_degree: Option<usize>,
    pub phi: Vec<PhiSample>,
    pub checks: Vec<Check>,
}

impl MedianDecomposition {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.required && !c.passed)
    }

    /// Fails on the first required check that did not pass.
    pub fn ensure(&self) -> Result<()> {
        match self.failed().next() {
            Some(c) => Err(Error::Invariant(format!("check `{}` failed", c.name))),
            None => Ok(()),
        }
    }

    pub fn q_shape(&self) -> String {
        cube_shape(self.q)
    }
}

// ------------------------------------------------------------ finite hosts

fn ensure_commuting_finite(gens: &[FiniteIsometry]) -> Result<()> {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !gens[i].commutes_with(&gens[j]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    Ok(())
}

/// Union of the minimal cubes stabilised by every generator.
pub fn median_set_finite(x: &CubeComplex, gens: &[FiniteIsometry]) -> Result<VertexSet> {
    x.ensure_median()?;
    ensure_commuting_finite(gens)?;
    let (_, cubes) = isometry::minimal_stabilised_cubes_finite(x, gens)?;
    Ok(cubes.iter().flat_map(|c| c.iter()).collect())
}

/// Decomposition `Med(E) = Q x Z` for commuting isometries of a finite
/// median graph.
pub fn decompose_elliptic_finite(x: &CubeComplex, gens: &[FiniteIsometry]) -> Result<MedianDecomposition> {
    x.ensure_median()?;
    ensure_commuting_finite(gens)?;
    let (q, cubes) = isometry::minimal_stabilised_cubes_finite(x, gens)?;
    let base = cubes[0].clone();
    let v = base.first().unwrap();
    let med: VertexSet = cubes.iter().flat_map(|c| c.iter()).collect();
    let mut owner = vec![usize::MAX; x.vertex_count()];
    let mut disjoint = true;
    for (i, c) in cubes.iter().enumerate() {
        for w in c.iter() {
            disjoint &= owner[w.0] == usize::MAX;
            owner[w.0] = i;
        }
    }
    let gates: Vec<VertexId> = cubes.iter().map(|c| x.gate_unchecked(c, v)).collect();
    let z: VertexSet = gates.iter().copied().collect();
    let sub = subalgebra_cubulation(x, &z)?;
    let z_index: Vec<usize> = {
        let mut idx = vec![usize::MAX; x.vertex_count()];
        for (i, p) in sub.points.iter().enumerate() {
            idx[p.0] = i;
        }
        idx
    };
    let phi = |w: VertexId| (x.gate_unchecked(&base, w), gates[owner[w.0]]);
    let d_t = |a: VertexId, b: VertexId| {
        let pa = sub.cubulation.principal[z_index[a.0]];
        let pb = sub.cubulation.principal[z_index[b.0]];
        sub.cubulation.complex.distance(pa, pb)
    };

    let mut checks = Checks::default();
    let pts = med.to_vec();
    checks.require("median_closed", x.is_median_closed(&med)?, pts.len() as u64);
    let crossing = x.hyperplanes_crossing(&base);
    let same = cubes.iter().filter(|c| x.hyperplanes_crossing(c) == crossing).count();
    checks.require("samehyp", same == cubes.len(), cubes.len() as u64);
    checks.require("disjoint_cubes", disjoint, cubes.len() as u64);
    let images: HashSet<(VertexId, VertexId)> = pts.iter().map(|&w| phi(w)).collect();
    checks.require("bijection", images.len() == pts.len() && pts.len() == (1usize << q) * z.len(), pts.len() as u64);
    // The product metric is compared with the intrinsic metric of Med,
    // which counts hyperplanes with equal traces once.
    let whole = subalgebra_cubulation(x, &med)?;
    let d_med = |i: usize, j: usize| {
        whole.cubulation.complex.distance(whole.cubulation.principal[i], whole.cubulation.principal[j])
    };
    let bad = exec::sum(pts.len(), |i| {
        let (qa, za) = phi(pts[i]);
        (0..pts.len())
            .filter(|&j| {
                let (qb, zb) = phi(pts[j]);
                d_med(i, j) != x.distance(qa, qb) + d_t(za, zb)
            })
            .count() as u64
    });
    checks.require("distance_additivity", bad == 0, (pts.len() * pts.len()) as u64);
    let trivial = gens.iter().all(|g| pts.iter().all(|&w| phi(g.apply(w)).1 == phi(w).1));
    checks.require("trivial_on_T", trivial, (pts.len() * gens.len()) as u64);
    if let [g] = gens {
        let (_, min) = isometry::min_set_finite(x, g);
        checks.observe("min_in_med", min.is_subset(&med), min.len() as u64);
        checks.observe("med_hull_of_min", x.median_hull(&min)? == med, min.len() as u64);
    }

    let phi_samples = pts
        .iter()
        .take(8)
        .map(|&w| {
            let (qw, zw) = phi(w);
            PhiSample { x: x.name(w).into(), t: x.name(zw).into(), f: "()".into(), q: x.name(qw).into() }
        })
        .collect();
    let min_displacement = match gens {
        [g] => isometry::min_set_finite(x, g).0 as u64,
        _ => 0,
    };
    Ok(MedianDecomposition {
        class: "elliptic",
        med: MedSet::Finite(med),
        t: Factor::Finite(sub.cubulation.complex),
        f: Factor::point(),
        q,
        cube: base.iter().map(|w| x.name(w).to_string()).collect(),
        translation_length: Ratio::from_integer(0),
        min_displacement,
        zeta: None,
        xi: None,
        max_degree: None,
        phi: phi_samples,
        checks: checks.0,
    })
}

// ---------------------------------------------------------- periodic hosts

/// Where a host axis comes from in reduced coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    /// `x_j = s * y_m + c`.
    Kept(usize, i8, i64),
    Const(i64),
}

/// A periodic subset together with its rewriting on non-redundant axes.
#[derive(Clone, Debug)]
pub(crate) struct Reduced {
    set: PeriodicComplex,
    source: Vec<Source>,
    kept: Vec<usize>,
    model: PeriodicComplex,
}

impl Reduced {
    fn new(set: PeriodicComplex) -> Result<Self> {
        let basis = set.lattice().basis();
        let cells = set.cells();
        let mut kept: Vec<usize> = Vec::new();
        let mut source = Vec::with_capacity(set.dim());
        for j in 0..set.dim() {
            if basis.iter().all(|l| l[j] == 0) && cells.iter().all(|c| c[j] == cells[0][j]) {
                source.push(Source::Const(cells[0][j]));
                continue;
            }
            let merged = kept.iter().enumerate().find_map(|(m, &i)| {
                [1i8, -1].into_iter().find_map(|s| {
                    let s64 = s as i64;
                    let c = cells[0][j] - s64 * cells[0][i];
                    let related =
                        basis.iter().all(|l| l[j] == s64 * l[i]) && cells.iter().all(|x| x[j] - s64 * x[i] == c);
                    related.then_some(Source::Kept(m, s, c))
                })
            });
            match merged {
                Some(src) => source.push(src),
                None => {
                    source.push(Source::Kept(kept.len(), 1, 0));
                    kept.push(j);
                }
            }
        }
        let proj = |v: &Point| kept.iter().map(|&a| v[a]).collect::<Point>();
        let model = PeriodicComplex::from_lattice(
            Lattice::new(kept.len(), &basis.iter().map(proj).collect::<Vec<_>>()),
            &cells.iter().map(proj).collect::<Vec<_>>(),
        );
        model
            .validate()
            .map_err(|v| Error::Unsupported(format!("median set is not a coordinate median algebra: {v}")))?;
        Ok(Self { set, source, kept, model })
    }

    fn project(&self, x: &[i64]) -> Point {
        self.kept.iter().map(|&a| x[a]).collect()
    }

    fn lift(&self, y: &[i64]) -> Point {
        self.source
            .iter()
            .map(|s| match *s {
                Source::Kept(m, s, c) => s as i64 * y[m] + c,
                Source::Const(c) => c,
            })
            .collect()
    }

    /// The action of `g` in reduced coordinates.
    fn map_isometry(&self, g: &AffineIsometry) -> Result<AffineIsometry> {
        let mut perm = Vec::with_capacity(self.kept.len());
        let mut trans = Vec::with_capacity(self.kept.len());
        for &a in &self.kept {
            let (src, s) = g.perm()[a];
            match self.source[src] {
                Source::Kept(m, s2, c) => {
                    perm.push((m, s * s2));
                    trans.push(s as i64 * c + g.trans()[a]);
                }
                Source::Const(_) => return Err(Error::Unsupported("isometry mixes constant and free axes".into())),
            }
        }
        let h = AffineIsometry::new(perm, trans)
            .map_err(|_| Error::Unsupported("isometry does not permute the reduced axes".into()))?;
        check_symmetry(&self.model, &h)?;
        Ok(h)
    }
}

fn project_complex(p: &PeriodicComplex, axes: &[usize]) -> Result<PeriodicComplex> {
    let cells: Vec<Point> = p.cells().iter().map(|c| axes.iter().map(|&a| c[a]).collect()).collect();
    let out = PeriodicComplex::from_lattice(p.lattice().project(axes), &cells);
    out.validate().map_err(|v| Error::Unsupported(format!("factor is not a coordinate median algebra: {v}")))?;
    Ok(out)
}

fn pick(x: &[i64], axes: &[usize]) -> Point {
    axes.iter().map(|&a| x[a]).collect()
}

/// Axis split of the reduced median set.
#[derive(Clone, Debug)]
pub(crate) struct Split {
    cube_axes: Vec<usize>,
    cube_lo: Vec<i64>,
    rest: Vec<usize>,
    z: Vec<usize>,
    n: Vec<usize>,
    g_rest: AffineIsometry,
    t: PeriodicComplex,
    f: PeriodicComplex,
}

fn split(reduced: &Reduced, g: &AffineIsometry, cube_axes: Vec<usize>) -> Result<Split> {
    let model = &reduced.model;
    let g_model = reduced.map_isometry(g)?;
    let rest: Vec<usize> = (0..model.dim()).filter(|a| !cube_axes.contains(a)).collect();
    let g_rest = g_model.restrict(&rest)?;
    let v = g_rest.translation_vector();
    let z: Vec<usize> = rest.iter().zip(&v).filter(|(_, &x)| x == 0).map(|(&a, _)| a).collect();
    let n: Vec<usize> = rest.iter().zip(&v).filter(|(_, &x)| x != 0).map(|(&a, _)| a).collect();
    let mut cube_lo = Vec::with_capacity(cube_axes.len());
    for &a in &cube_axes {
        if model.lattice().axis_modulus(a) != 0 {
            return Err(Error::Invariant("median set is unbounded along a cube axis".into()));
        }
        cube_lo.push(model.cells().iter().map(|c| c[a]).min().unwrap());
    }
    Ok(Split { t: project_complex(model, &z)?, f: project_complex(model, &n)?, cube_axes, cube_lo, rest, z, n, g_rest })
}

/// Lattice vectors fixed by the linear part of every generator.
fn fixed_lattice(p: &PeriodicComplex, gens: &[AffineIsometry]) -> Lattice {
    let d = p.dim();
    let a: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            gens.iter()
                .flat_map(|g| {
                    (0..d).map(move |c| {
                        let (src, s) = g.perm()[c];
                        (if src == i { s as i64 } else { 0 }) - (i == c) as i64
                    })
                })
                .collect()
        })
        .collect();
    if gens.is_empty() {
        return p.lattice().clone();
    }
    p.lattice().annihilated_by(&a)
}

/// Residues mod `lattice` of the members satisfying `pred`, on growing
/// windows until they stop changing.
fn residues(
    p: &PeriodicComplex,
    lattice: &Lattice,
    radius: i64,
    window: impl Fn(i64) -> Result<BoxRange>,
    pred: impl Fn(&Point) -> bool + Sync,
) -> Result<Vec<Point>> {
    let (_, set) = stabilise(radius, |r| {
        let b = window(r)?;
        scan_box(&b)?;
        let members = p.members_in(&b);
        let keep = exec::map_range(members.len(), |i| pred(&members[i]));
        Ok(members.iter().zip(keep).filter(|(_, k)| *k).map(|(x, _)| lattice.reduce(x)).collect::<BTreeSet<Point>>())
    })?;
    if set.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok(set.into_iter().collect())
}

fn ensure_commuting_affine(gens: &[AffineIsometry]) -> Result<()> {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i].compose(&gens[j]) != gens[j].compose(&gens[i]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    Ok(())
}

enum Kind {
    Elliptic { cubes_seen: usize, samehyp: bool, disjoint: bool },
    Loxodromic { norm: u64 },
    Inverting { norm: u64, quotient_norm: u64, walls: Vec<Wall> },
}

fn quotient_displacement(g: &AffineIsometry, walls: &[Wall], x: &[i64]) -> u64 {
    let gx = g.apply(x);
    l1(x, &gx) - walls.iter().filter(|w| w.separates(x, &gx)).count() as u64
}

/// The median set of a single isometry of a periodic host.
pub fn median_set_affine(p: &PeriodicComplex, g: &AffineIsometry, radius: i64) -> Result<PeriodicComplex> {
    check_symmetry(p, g)?;
    if g.has_bounded_orbits() {
        return elliptic_set(p, std::slice::from_ref(g), radius).map(|(s, ..)| s);
    }
    let walls: Vec<Wall> = isometry::inverted_hyperplanes(p, g)?.iter().map(|w| w.wall).collect();
    Ok(translation_set(p, g, &walls, radius)?.0)
}

/// Union of minimal stabilised cubes, with the cube axes, the number of
/// cubes seen, and whether they share their walls and are disjoint.
fn elliptic_set(
    p: &PeriodicComplex,
    gens: &[AffineIsometry],
    radius: i64,
) -> Result<(PeriodicComplex, Vec<Wall>, usize, bool, bool)> {
    for g in gens {
        check_symmetry(p, g)?;
        if !g.has_bounded_orbits() {
            return Err(Error::NotElliptic);
        }
    }
    ensure_commuting_affine(gens)?;
    let lattice = fixed_lattice(p, gens);
    let (_, (dim, cells)) = stabilise(radius, |r| {
        let b = invariant_box(p, gens, r)?;
        let (dim, cubes) = stabilised_cubes_affine(p, gens, &b)?;
        let cells: BTreeSet<Point> = cubes.iter().flatten().map(|v| lattice.reduce(v)).collect();
        Ok((dim, cells))
    })?;
    let b = invariant_box(p, gens, radius)?;
    let (_, cubes) = stabilised_cubes_affine(p, gens, &b)?;
    debug_assert_eq!(cubes[0].len(), 1 << dim);
    let base = &cubes[0];
    let axes: Vec<usize> = (0..p.dim()).filter(|&a| base.iter().any(|v| v[a] != base[0][a])).collect();
    let walls: Vec<Wall> = axes.iter().map(|&a| Wall { axis: a, cut: base[0][a] }).collect();
    let samehyp = cubes.iter().all(|c| {
        (0..p.dim()).filter(|&a| c.iter().any(|v| v[a] != c[0][a])).eq(axes.iter().copied())
            && axes.iter().all(|&a| c[0][a] == base[0][a])
    });
    let distinct: HashSet<&Point> = cubes.iter().flatten().collect();
    let disjoint = distinct.len() == cubes.len() << dim;
    let cells: Vec<Point> = cells.into_iter().collect();
    Ok((PeriodicComplex::from_lattice(lattice, &cells), walls, cubes.len(), samehyp, disjoint))
}

/// `{ x : |W(x, gx) \ J| minimal }` for the inverted walls `J`, with that
/// minimum and `||g||`.
fn translation_set(
    p: &PeriodicComplex,
    g: &AffineIsometry,
    walls: &[Wall],
    radius: i64,
) -> Result<(PeriodicComplex, u64, u64)> {
    let norm = combinatorial_min(p, g, radius)?;
    let (_, qn) =
        stabilise(radius, |r| isometry::min_over(p, &orbit_box(p, g, r), |x| quotient_displacement(g, walls, x)))?;
    let quotient_norm = qn.ok_or(Error::EmptyWindow)?;
    let axes: Vec<usize> = walls.iter().map(|w| w.axis).collect();
    let v = g.translation_vector();
    let lattice = fixed_lattice(p, std::slice::from_ref(g)).vanishing_on(&axes).sum(&Lattice::new(p.dim(), &[v]));
    let cells = residues(
        p,
        &lattice,
        radius,
        |r| Ok(orbit_box(p, g, r)),
        |x| quotient_displacement(g, walls, x) == quotient_norm,
    )?;
    Ok((PeriodicComplex::from_lattice(lattice, &cells), norm, quotient_norm))
}

pub fn decompose_affine(p: &PeriodicComplex, g: &AffineIsometry, radius: i64) -> Result<MedianDecomposition> {
    Ok(decompose_level(p, g, radius)?.0)
}

pub(crate) fn decompose_level(
    p: &PeriodicComplex,
    g: &AffineIsometry,
    radius: i64,
) -> Result<(MedianDecomposition, Reduced, Split)> {
    match isometry::classify_affine(p, g, radius)? {
        IsometryClass::Elliptic { .. } => elliptic_level(p, std::slice::from_ref(g), radius),
        IsometryClass::Loxodromic { .. } => loxodromic_level(p, g, radius),
        IsometryClass::Inverting { .. } => inverting_level(p, g, radius),
    }
}

pub fn decompose_elliptic_periodic(
    p: &PeriodicComplex,
    gens: &[AffineIsometry],
    radius: i64,
) -> Result<MedianDecomposition> {
    Ok(elliptic_level(p, gens, radius)?.0)
}

fn elliptic_level(
    p: &PeriodicComplex,
    gens: &[AffineIsometry],
    radius: i64,
) -> Result<(MedianDecomposition, Reduced, Split)> {
    let (set, walls, cubes_seen, samehyp, disjoint) = elliptic_set(p, gens, radius)?;
    finish(p, gens, set, &walls, Kind::Elliptic { cubes_seen, samehyp, disjoint }, radius)
}

pub fn decompose_loxodromic(p: &PeriodicComplex, g: &AffineIsometry, radius: i64) -> Result<MedianDecomposition> {
    Ok(loxodromic_level(p, g, radius)?.0)
}

fn loxodromic_level(
    p: &PeriodicComplex,
    g: &AffineIsometry,
    radius: i64,
) -> Result<(MedianDecomposition, Reduced, Split)> {
    match isometry::classify_affine(p, g, radius)? {
        IsometryClass::Loxodromic { .. } => {}
        other => return Err(Error::NotLoxodromic(other.name())),
    }
    let (set, norm, _) = translation_set(p, g, &[], radius)?;
    finish(p, std::slice::from_ref(g), set, &[], Kind::Loxodromic { norm }, radius)
}

pub fn decompose_inverting(p: &PeriodicComplex, g: &AffineIsometry, radius: i64) -> Result<MedianDecomposition> {
    Ok(inverting_level(p, g, radius)?.0)
}

fn inverting_level(
    p: &PeriodicComplex,
    g: &AffineIsometry,
    radius: i64,
) -> Result<(MedianDecomposition, Reduced, Split)> {
    let walls: Vec<Wall> = match isometry::classify_affine(p, g, radius)? {
        IsometryClass::Inverting { inverted, .. } => inverted.iter().map(|w| w.wall).collect(),
        other => return Err(Error::NotInverting(other.name())),
    };
    let axes: BTreeSet<usize> = walls.iter().map(|w| w.axis).collect();
    if axes.len() != walls.len() {
        return Err(Error::Unsupported("two inverted walls on one axis".into()));
    }
    let (set, norm, quotient_norm) = translation_set(p, g, &walls, radius)?;
    let kind = Kind::Inverting { norm, quotient_norm, walls: walls.clone() };
    finish(p, std::slice::from_ref(g), set, &walls, kind, radius)
}

/// Checks the product structure of a median set and packages the result.
fn finish(
    p: &PeriodicComplex,
    gens: &[AffineIsometry],
    set: PeriodicComplex,
    cube_walls: &[Wall],
    kind: Kind,
    radius: i64,
) -> Result<(MedianDecomposition, Reduced, Split)> {
    let identity = AffineIsometry::identity(p.dim());
    let g = gens.first().unwrap_or(&identity);
    let reduced = Reduced::new(set)?;
    let mut cube_axes = Vec::with_capacity(cube_walls.len());
    for w in cube_walls {
        match reduced.source[w.axis] {
            Source::Kept(m, _, _) if !cube_axes.contains(&m) => cube_axes.push(m),
            _ => return Err(Error::Invariant(format!("cube wall {w} collapses in the median set"))),
        }
    }
    let sp = split(&reduced, g, cube_axes)?;
    let model_gens: Vec<AffineIsometry> = gens.iter().map(|h| reduced.map_isometry(h)).collect::<Result<_>>()?;
    let set = &reduced.set;
    let xbox = BoxRange::around(set.cells(), radius);
    scan_box(&xbox)?;
    let med_pts: Vec<Point> = set.members_in(&xbox);
    if med_pts.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let model_pts: Vec<Point> = med_pts.iter().map(|x| reduced.project(x)).collect();
    let samples: Vec<usize> = (0..med_pts.len()).step_by((med_pts.len() / 24).max(1)).collect();
    let mut checks = Checks::default();

    // Median closure, in host coordinates.
    let n = med_pts.len();
    let escaped = exec::sum(n, |i| {
        let mut bad = 0;
        for j in i + 1..n {
            for k in j + 1..n {
                bad += !set.contains(&coordinate_median(&med_pts[i], &med_pts[j], &med_pts[k])) as u64;
            }
        }
        bad
    });
    checks.require("median_closed", escaped == 0, (n * n.saturating_sub(1) * n.saturating_sub(2) / 6) as u64);
    checks.require(
        "lift_inverts_projection",
        med_pts.iter().zip(&model_pts).all(|(x, m)| &reduced.lift(m) == x),
        n as u64,
    );

    // Literal product in reduced coordinates.
    let model = &reduced.model;
    let mbox = BoxRange::around(model.cells(), radius);
    let in_cube = |m: &[i64]| sp.cube_axes.iter().zip(&sp.cube_lo).all(|(&a, &lo)| m[a] == lo || m[a] == lo + 1);
    let grid = mbox.points();
    let product_ok = exec::all(grid.len(), |i| {
        let m = &grid[i];
        model.contains(m) == (in_cube(m) && sp.t.contains(&pick(m, &sp.z)) && sp.f.contains(&pick(m, &sp.n)))
    });
    checks.require("product", product_ok, grid.len() as u64);

    // Intrinsic metric of the window against the product metric.
    let win = p.window(&xbox)?;
    let ids: VertexSet = med_pts.iter().map(|x| win.vertex_at(x).unwrap()).collect();
    let sub = subalgebra_cubulation(&win.complex, &ids)?;
    let coords: Vec<Point> = sub.points.iter().map(|&v| reduced.project(win.point(v))).collect();
    let m = coords.len();
    let bad = exec::sum(m, |i| {
        (i + 1..m)
            .filter(|&j| {
                let d = sub.cubulation.complex.distance(sub.cubulation.principal[i], sub.cubulation.principal[j]);
                d as u64 != l1(&coords[i], &coords[j])
            })
            .count() as u64
    });
    checks.require("distance_additivity", bad == 0, (m * m.saturating_sub(1) / 2) as u64);

    let trivial = model_gens.iter().all(|h| model_pts.iter().all(|y| pick(&h.apply(y), &sp.z) == pick(y, &sp.z)));
    checks.require("trivial_on_T", trivial, (n * model_gens.len()) as u64);

    let x0 = set.cells()[0].clone();
    let v = g.translation_vector();
    let (zeta, xi) = if sp.n.is_empty() {
        (None, None)
    } else {
        let ends = |sign: i64| -> DirectionClass {
            v.iter()
                .zip(&x0)
                .map(|(&vj, &xj)| match (vj * sign).signum() {
                    1 => ExtInt::PosInf,
                    -1 => ExtInt::NegInf,
                    _ => ExtInt::Fin(xj),
                })
                .collect()
        };
        (Some(ends(-1)), Some(ends(1)))
    };

    let (min_displacement, translation_length, max_degree) = match &kind {
        Kind::Elliptic { cubes_seen, samehyp, disjoint } => {
            checks.require("samehyp", *samehyp, *cubes_seen as u64);
            checks.require("disjoint_cubes", *disjoint, *cubes_seen as u64);
            let norm = combinatorial_min(p, g, radius)?;
            if gens.len() == 1 {
                observe_hull(&mut checks, p, set, &xbox, |x| displacement_affine(g, x) == norm);
            }
            (norm, Ratio::from_integer(0), None)
        }
        Kind::Loxodromic { norm } | Kind::Inverting { norm, .. } => {
            let norm = *norm;
            let (quotient_norm, walls) = match &kind {
                Kind::Inverting { quotient_norm, walls, .. } => (*quotient_norm, walls.as_slice()),
                _ => (norm, &[][..]),
            };
            let ell = isometry::translation_length(g);
            translation_checks(&mut checks, g, &sp, &reduced, &med_pts, &samples, walls, ell, quotient_norm);
            let degree = sp.f.max_degree();
            checks.require("degree_bound", degree as u64 <= 2 * quotient_norm, sp.f.cells().len() as u64);
            let model_v = sp.g_rest.translation_vector();
            let f_ends = |sign: i64| -> DirectionClass {
                sp.n.iter()
                    .map(|&a| {
                        let i = sp.rest.iter().position(|&r| r == a).unwrap();
                        if model_v[i] * sign > 0 {
                            ExtInt::PosInf
                        } else {
                            ExtInt::NegInf
                        }
                    })
                    .collect()
            };
            checks.require("flat_certificate", flat_certificate(&sp.f, &f_ends(-1), &f_ends(1)), 1);
            if walls.is_empty() {
                if let Ok(path) = isometry::axis(p, g, &x0, radius) {
                    let zs = pick(&reduced.project(&x0), &sp.z);
                    let flat = path.iter().all(|x| pick(&reduced.project(x), &sp.z) == zs);
                    checks.require("axis_in_fibre", flat, path.len() as u64);
                }
                observe_hull(&mut checks, p, set, &xbox, |x| displacement_affine(g, x) == norm);
            } else {
                inverting_checks(&mut checks, p, g, &sp, &reduced, &med_pts, &xbox, walls, ell, radius)?;
            }
            (norm, ell, Some(degree))
        }
    };

    let phi = samples
        .iter()
        .take(8)
        .map(|&i| {
            let y = &model_pts[i];
            PhiSample {
                x: label(&med_pts[i]),
                t: label(&pick(y, &sp.z)),
                f: label(&pick(y, &sp.n)),
                q: label(&pick(y, &sp.cube_axes)),
            }
        })
        .collect();
    let base_cube: Vec<String> = {
        let y0 = reduced.project(&x0);
        let q = sp.cube_axes.len();
        let mut cube: Vec<Point> = (0u32..1 << q)
            .map(|mask| {
                let mut y = y0.clone();
                for (bit, (&a, &lo)) in sp.cube_axes.iter().zip(&sp.cube_lo).enumerate() {
                    y[a] = lo + (mask >> bit & 1) as i64;
                }
                reduced.lift(&y)
            })
            .collect();
        cube.sort();
        cube.iter().map(|c| label(c)).collect()
    };
    let class = match kind {
        Kind::Elliptic { .. } => "elliptic",
        Kind::Loxodromic { .. } => "loxodromic",
        Kind::Inverting { .. } => "inverting",
    };
    let dec = MedianDecomposition {
        class,
        med: MedSet::Periodic(reduced.set.clone()),
        t: Factor::Periodic(sp.t.clone()),
        f: Factor::Periodic(sp.f.clone()),
        q: sp.cube_axes.len(),
        cube: base_cube,
        translation_length,
        min_displacement,
        zeta,
        xi,
        max_degree,
        phi,
        checks: checks.0,
    };
    Ok((dec, reduced, sp))
}

/// Median hull of the minimising set against the median set, compared on
/// the inner half of the window to avoid edge effects.
fn observe_hull(
    checks: &mut Checks,
    p: &PeriodicComplex,
    med: &PeriodicComplex,
    xbox: &BoxRange,
    in_min: impl Fn(&Point) -> bool,
) {
    let members = p.members_in(xbox);
    let mut hull: BTreeSet<Point> = members.iter().filter(|x| in_min(x)).cloned().collect();
    loop {
        let pts: Vec<Point> = hull.iter().cloned().collect();
        if pts.len() > 600 {
            return;
        }
        let mut grown = hull.clone();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    grown.insert(coordinate_median(&pts[i], &pts[j], &pts[k]));
                }
            }
        }
        if grown.len() == hull.len() {
            break;
        }
        hull = grown;
    }
    let shrink = (xbox.hi[0] - xbox.lo[0]) / 4;
    let inner = xbox.grow(-shrink.max(0));
    let same = members.iter().filter(|x| inner.contains(x)).all(|x| med.contains(x) == hull.contains(x));
    checks.observe("med_hull_of_min", same, hull.len() as u64);
}

#[allow(clippy::too_many_arguments)]
fn translation_checks(
    checks: &mut Checks,
    g: &AffineIsometry,
    sp: &Split,
    reduced: &Reduced,
    med_pts: &[Point],
    samples: &[usize],
    walls: &[Wall],
    ell: Ratio<i64>,
    quotient_norm: u64,
) {
    let k = g.order() as i64;
    let v = g.translation_vector();
    let x0 = reduced.set.cells()[0].clone();

    let lengths = med_pts.iter().all(|x| Ratio::from_integer(quotient_displacement(g, walls, x) as i64) == ell);
    checks.require(
        "translation_length",
        lengths && ell == Ratio::from_integer(quotient_norm as i64),
        med_pts.len() as u64,
    );

    // Fibre through x0: mu(x, g^-N x0, g^N x0) for N a growing multiple of k.
    let diam = reduced.set.cells().iter().map(|c| l1(c, &x0)).max().unwrap_or(0) as i64;
    let step = v.iter().map(|x| x.abs()).sum::<i64>().max(1);
    let y0 = reduced.project(&x0);
    let fibre_ok = samples.iter().all(|&i| {
        let x = &med_pts[i];
        let at = |m: i64| {
            let far: Vec<i64> = x0.iter().zip(&v).map(|(a, b)| a + m * b).collect();
            let near: Vec<i64> = x0.iter().zip(&v).map(|(a, b)| a - m * b).collect();
            coordinate_median(x, &near, &far)
        };
        let mut m = diam / step + 2;
        let mut y = at(m);
        while m < 1 << 20 {
            let next = at(2 * m);
            if next == y {
                break;
            }
            y = next;
            m *= 2;
        }
        let mut expect = y0.clone();
        let mx = reduced.project(x);
        for &a in &sp.n {
            expect[a] = mx[a];
        }
        reduced.set.contains(&y) && y == reduced.lift(&expect)
    });
    checks.require("fibre", fibre_ok, samples.len() as u64);

    // Orbits keep their T coordinates.
    let crossing = samples.iter().all(|&i| {
        let zs = pick(&reduced.project(&med_pts[i]), &sp.z);
        (-2 * k..=2 * k).all(|e| pick(&reduced.project(&g.power(e).apply(&med_pts[i])), &sp.z) == zs)
    });
    checks.require("hyp_cross_axis", crossing, samples.len() as u64);

    // No wall separates {x, g^{k+1} y} from {g x, g^k y}, in the
    // coordinates of the quotient factor.
    let rest: Vec<Point> = samples.iter().map(|&i| pick(&reduced.project(&med_pts[i]), &sp.rest)).collect();
    let h = &sp.g_rest;
    let mut bad = 0u64;
    let mut seen = 0u64;
    for x in &rest {
        for y in &rest {
            for e in 0..4 {
                let a = [x.clone(), h.power(e + 1).apply(y)];
                let b = [h.apply(x), h.power(e).apply(y)];
                seen += 1;
                bad += (0..x.len()).any(|j| {
                    let (amin, amax) = (a[0][j].min(a[1][j]), a[0][j].max(a[1][j]));
                    let (bmin, bmax) = (b[0][j].min(b[1][j]), b[0][j].max(b[1][j]));
                    amax < bmin || bmax < amin
                }) as u64;
            }
        }
    }
    checks.require("two_directions", bad == 0, seen);

    // Axes with the same forward end have the same backward end.
    let vr = h.translation_vector();
    let end = |x: &Point, sign: i64| -> DirectionClass {
        x.iter()
            .zip(&vr)
            .map(|(&xj, &vj)| match (vj * sign).signum() {
                1 => ExtInt::PosInf,
                -1 => ExtInt::NegInf,
                _ => ExtInt::Fin(xj),
            })
            .collect()
    };
    let pairs: Vec<(DirectionClass, DirectionClass)> = rest.iter().map(|x| (end(x, 1), end(x, -1))).collect();
    let consistent = pairs.iter().all(|a| pairs.iter().all(|b| a.0 != b.0 || a.1 == b.1));
    checks.require("delta_minus", consistent, pairs.len() as u64);
}

#[allow(clippy::too_many_arguments)]
fn inverting_checks(
    checks: &mut Checks,
    p: &PeriodicComplex,
    g: &AffineIsometry,
    sp: &Split,
    reduced: &Reduced,
    med_pts: &[Point],
    xbox: &BoxRange,
    walls: &[Wall],
    ell: Ratio<i64>,
    radius: i64,
) -> Result<()> {
    let carriers = med_pts.iter().all(|x| {
        walls.iter().all(|w| {
            let mut y = x.clone();
            let across = if x[w.axis] == w.cut { w.cut + 1 } else { w.cut };
            y[w.axis] = across;
            (x[w.axis] == w.cut || x[w.axis] == w.cut + 1) && p.contains(&y)
        })
    });
    checks.require("med_in_carriers", carriers, (med_pts.len() * walls.len()) as u64);

    // Quotient displacement from the cubical quotient of a window.
    let win = p.window(xbox)?;
    let j: Vec<_> = win.complex.hyperplanes().filter(|&h| walls.contains(&win.wall(h))).collect();
    let quotient = cubical_quotient(&win.complex, &j)?;
    let mut seen = 0u64;
    let mut gap_ok = j.len() == walls.len();
    for (i, x) in win.points().iter().enumerate() {
        let Some(gx) = win.vertex_at(&g.apply(x)) else { continue };
        let vx = VertexId(i);
        let dq = quotient.complex().distance(quotient.apply(vx), quotient.apply(gx)) as u64;
        let dx = win.complex.distance(vx, gx) as u64;
        gap_ok &= dq == quotient_displacement(g, walls, x) && dq <= dx && dx - dq <= walls.len() as u64;
        seen += 1;
    }
    checks.require("displacement_gap", gap_ok && seen > 0, seen);

    let k = g.order() as i64;
    let x0 = &reduced.set.cells()[0];
    let far = g.power(k).apply(x0);
    let ratio = if let (Some(a), Some(b)) = (win.vertex_at(x0), win.vertex_at(&far)) {
        let d = quotient.complex().distance(quotient.apply(a), quotient.apply(b)) as i64;
        Ratio::new(d, k)
    } else {
        let bounds = xbox.hull(&BoxRange::around(&[x0.clone(), far.clone()], radius));
        let big = p.window(&bounds)?;
        let j: Vec<_> = big.complex.hyperplanes().filter(|&h| walls.contains(&big.wall(h))).collect();
        let q = cubical_quotient(&big.complex, &j)?;
        let (a, b) = (big.vertex_at(x0).unwrap(), big.vertex_at(&far).unwrap());
        Ratio::new(q.complex().distance(q.apply(a), q.apply(b)) as i64, k)
    };
    checks.require("quotient_length", ratio == ell && isometry::translation_length(&sp.g_rest) == ell, 1);

    let section = project_complex(&reduced.model, &sp.rest)?;
    let fresh = isometry::inverted_hyperplanes(&section, &sp.g_rest)?;
    checks.require("no_new_inversions", fresh.is_empty(), 1);
    Ok(())
}

/// Whether every wall of `f` separates the two boundary directions.
pub fn flat_certificate(f: &PeriodicComplex, zeta: &[ExtInt], xi: &[ExtInt]) -> bool {
    if zeta.len() != f.dim() || xi.len() != f.dim() || !f.is_valid() {
        return false;
    }
    // Both ends must be points of the Roller boundary of `f`.
    let realised = roller_directions(f);
    let on_boundary = |d: &[ExtInt]| {
        let s: Vec<i8> = d
            .iter()
            .map(|c| match c {
                ExtInt::NegInf => -1,
                ExtInt::PosInf => 1,
                ExtInt::Fin(_) => 0,
            })
            .collect();
        realised.components.iter().any(|c| c.pattern == s)
    };
    if !on_boundary(zeta) || !on_boundary(xi) {
        return false;
    }
    (0..f.dim()).all(|axis| {
        let (m, pos) = f.wall_positions(axis);
        if pos.is_empty() {
            return true;
        }
        if m != 0 {
            return matches!(
                (zeta[axis], xi[axis]),
                (ExtInt::NegInf, ExtInt::PosInf) | (ExtInt::PosInf, ExtInt::NegInf)
            );
        }
        pos.iter().all(|&c| zeta[axis].upper_side_of(c) != xi[axis].upper_side_of(c))
    })
}

// ------------------------------------------------------- abelian iteration

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianLevel {
    pub generator: usize,
    pub class: &'static str,
    pub q: usize,
    pub t: String,
    pub f: String,
}

/// An invariant median subalgebra `Y = Q x F` of a group of commuting
/// isometries.
#[derive(Clone, Debug)]
pub struct AbelianFlat {
    pub cube_dim: usize,
    pub flat: PeriodicComplex,
    pub levels: Vec<AbelianLevel>,
    /// Members of `Y` in the checked window.
    pub sample: Vec<String>,
    pub checks: Vec<Check>,
}

impl AbelianFlat {
    pub fn shape(&self) -> String {
        match (self.cube_dim, self.flat.shape().as_str()) {
            (0, "point") => "point".into(),
            (q, "point") => cube_shape(q),
            (0, f) => f.to_string(),
            (q, f) => format!("{} x {}", cube_shape(q), f),
        }
    }

    pub fn ensure(&self) -> Result<()> {
        match self.checks.iter().find(|c| c.required && !c.passed) {
            Some(c) => Err(Error::Invariant(format!("check `{}` failed", c.name))),
            None => Ok(()),
        }
    }
}

pub fn abelian_invariant_flat_finite(x: &CubeComplex, gens: &[FiniteIsometry]) -> Result<AbelianFlat> {
    let dec = decompose_elliptic_finite(x, gens)?;
    let y = x.vertex_set(&dec.cube)?;
    let mut checks = Checks::default();
    checks.require("invariant", gens.iter().all(|g| g.stabilises(&y)), gens.len() as u64);
    checks.require("median_closed", x.is_median_closed(&y)?, y.len() as u64);
    Ok(AbelianFlat {
        cube_dim: dec.q,
        flat: PeriodicComplex::point(),
        levels: vec![AbelianLevel { generator: 0, class: "elliptic", q: dec.q, t: dec.t.shape(), f: "point".into() }],
        sample: dec.cube,
        checks: checks.0,
    })
}

pub fn abelian_invariant_flat_periodic(
    p: &PeriodicComplex,
    gens: &[AffineIsometry],
    radius: i64,
) -> Result<AbelianFlat> {
    for g in gens {
        check_symmetry(p, g)?;
    }
    ensure_commuting_affine(gens)?;
    let mut host = p.clone();
    let mut pending: Vec<(usize, AffineIsometry)> = gens.iter().cloned().enumerate().collect();
    let mut stages: Vec<(Reduced, Split)> = Vec::new();
    let mut levels = Vec::new();
    let mut flats: Vec<PeriodicComplex> = Vec::new();
    let mut ends: (DirectionClass, DirectionClass) = (Vec::new(), Vec::new());
    let mut cube_dim = 0;
    while let Some((index, a)) = pending.pop() {
        if host.dim() == 0 {
            break;
        }
        let (dec, reduced, sp) = decompose_level(&host, &a, radius)?;
        dec.ensure()?;
        cube_dim += dec.q;
        if sp.f.dim() > 0 {
            let v = sp.g_rest.translation_vector();
            for &n in &sp.n {
                let i = sp.rest.iter().position(|&r| r == n).unwrap();
                let up = v[i] > 0;
                ends.0.push(if up { ExtInt::NegInf } else { ExtInt::PosInf });
                ends.1.push(if up { ExtInt::PosInf } else { ExtInt::NegInf });
            }
            flats.push(sp.f.clone());
        }
        levels.push(AbelianLevel { generator: index, class: dec.class, q: dec.q, t: dec.t.shape(), f: dec.f.shape() });
        pending = pending
            .into_iter()
            .map(|(i, b)| Ok((i, reduced.map_isometry(&b)?.restrict(&sp.z)?)))
            .collect::<Result<_>>()?;
        host = sp.t.clone();
        stages.push((reduced, sp));
    }
    let bottom = host.cells()[0].clone();
    let flat = flats.iter().fold(PeriodicComplex::point(), |acc, f| acc.product(f));

    let in_y = |x: &[i64]| {
        let mut cur = x.to_vec();
        for (reduced, sp) in &stages {
            if !reduced.set.contains(&cur) {
                return false;
            }
            cur = pick(&reduced.project(&cur), &sp.z);
        }
        cur == bottom
    };
    let xbox = p.padded_box(radius);
    scan_box(&xbox)?;
    let ys: Vec<Point> = p.members_in(&xbox).into_iter().filter(|x| in_y(x)).collect();
    let mut checks = Checks::default();
    checks.require("nonempty", !ys.is_empty(), ys.len() as u64);
    let inverses: Vec<AffineIsometry> = gens.iter().map(|g| g.inverse()).collect();
    let invariant = ys.iter().all(|y| gens.iter().chain(&inverses).all(|g| in_y(&g.apply(y))));
    checks.require("invariant", invariant, (ys.len() * gens.len() * 2) as u64);
    let n = ys.len();
    let escaped = exec::sum(n, |i| {
        let mut bad = 0;
        for j in i + 1..n {
            for k in j + 1..n {
                bad += !in_y(&coordinate_median(&ys[i], &ys[j], &ys[k])) as u64;
            }
        }
        bad
    });
    checks.require("median_closed", escaped == 0, (n * n.saturating_sub(1) * n.saturating_sub(2) / 6) as u64);
    checks.require("flat_certificate", flat_certificate(&flat, &ends.0, &ends.1), 1);
    Ok(AbelianFlat { cube_dim, flat, levels, sample: ys.iter().take(16).map(|y| label(y)).collect(), checks: checks.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::chain;

    fn chain_line() -> (PeriodicComplex, AffineIsometry) {
        let c = chain();
        let p = c.product(&PeriodicComplex::euclidean(1));
        let g = AffineIsometry::new(vec![(1, 1), (0, 1), (2, 1)], vec![0, 0, 1]).unwrap();
        (p, g)
    }

    fn prism() -> (PeriodicComplex, AffineIsometry) {
        let cells: Vec<Point> = vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
        let p = PeriodicComplex::new(3, &[vec![0, 0, 1]], &cells).unwrap();
        let g = AffineIsometry::new(vec![(1, -1), (0, 1), (2, 1)], vec![1, 0, 1]).unwrap();
        (p, g)
    }

    #[test]
    fn translation_of_the_line() {
        let z = PeriodicComplex::euclidean(1);
        let d = decompose_loxodromic(&z, &AffineIsometry::translation(vec![1]), 4).unwrap();
        d.ensure().unwrap();
        assert_eq!((d.t.shape().as_str(), d.f.shape().as_str(), d.q), ("point", "line", 0));
    }

    #[test]
    fn diagonal_translation_of_the_plane() {
        let z2 = PeriodicComplex::euclidean(2);
        let d = decompose_loxodromic(&z2, &AffineIsometry::translation(vec![1, 1]), 4).unwrap();
        d.ensure().unwrap();
        assert_eq!((d.t.shape().as_str(), d.f.shape().as_str()), ("point", "flat(2)"));
        assert_eq!(d.max_degree, Some(4));
    }

    #[test]
    fn reflection_times_translation_on_chain() {
        let (p, g) = chain_line();
        let d = decompose_loxodromic(&p, &g, 4).unwrap();
        d.ensure().unwrap();
        assert_eq!((d.t.shape().as_str(), d.f.shape().as_str()), ("line", "line"));
        let MedSet::Periodic(med) = &d.med else { panic!() };
        assert!(med.contains(&[3, 3, -2]));
        assert!(!med.contains(&[1, 0, 0]));
    }

    #[test]
    fn rotation_of_the_prism() {
        let (p, g) = prism();
        let d = decompose_inverting(&p, &g, 4).unwrap();
        d.ensure().unwrap();
        assert_eq!(d.q, 2);
        assert_eq!((d.t.shape().as_str(), d.f.shape().as_str()), ("point", "line"));
        assert_eq!(d.translation_length, Ratio::from_integer(1));
        assert_eq!(d.min_displacement, 2);
        assert!(matches!(
            decompose_inverting(&PeriodicComplex::euclidean(2), &AffineIsometry::translation(vec![1, 1]), 4),
            Err(Error::NotInverting(_))
        ));
    }

    #[test]
    fn reflection_of_the_plane() {
        let z2 = PeriodicComplex::euclidean(2);
        let r = AffineIsometry::new(vec![(0, -1), (1, 1)], vec![1, 0]).unwrap();
        let d = decompose_elliptic_periodic(&z2, &[r], 4).unwrap();
        d.ensure().unwrap();
        assert_eq!((d.q, d.t.shape().as_str()), (1, "line"));
    }

    #[test]
    fn flat_certificates() {
        let z2 = PeriodicComplex::euclidean(2);
        use ExtInt::*;
        assert!(flat_certificate(&z2, &[NegInf, NegInf], &[PosInf, PosInf]));
        assert!(!flat_certificate(&z2, &[NegInf, Fin(0)], &[PosInf, Fin(0)]));
        assert!(flat_certificate(&chain(), &[NegInf, NegInf], &[PosInf, PosInf]));
        assert!(!flat_certificate(&chain(), &[NegInf, PosInf], &[PosInf, NegInf]));
    }

    #[test]
    fn abelian_flats() {
        let z2 = PeriodicComplex::euclidean(2);
        let gens = [AffineIsometry::translation(vec![1, 0]), AffineIsometry::translation(vec![0, 1])];
        let a = abelian_invariant_flat_periodic(&z2, &gens, 3).unwrap();
        a.ensure().unwrap();
        assert_eq!(a.shape(), "flat(2)");
        let (p, g) = chain_line();
        let a = abelian_invariant_flat_periodic(&p, &[g], 3).unwrap();
        a.ensure().unwrap();
        assert_eq!(a.shape(), "line");
        let a = abelian_invariant_flat_periodic(&z2, &[AffineIsometry::identity(2)], 3).unwrap();
        a.ensure().unwrap();
        assert_eq!(a.shape(), "point");
    }
}
