//! The invariant suites run by `medcube selftest`.

use std::time::Instant;

use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::canon::is_isomorphic;
use crate::catalog;
use crate::isometry::{self, classify_affine, classify_finite, IsometryClass, WallSet};
use crate::median_core::{HyperplaneId, VertexSet};
use crate::median_set::{self, flat_certificate, MedSet};
use crate::periodic::{roller_directions, AffineIsometry, ExtInt, PeriodicComplex, Wall};
use crate::random::{self, Rng64};
use crate::wallspace::{cubical_quotient, cubulate, Wallspace};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    /// First few failure descriptions.
    pub witnesses: Vec<String>,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub passed: u64,
    pub failed: u64,
    pub suites: Vec<SuiteResult>,
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    witnesses: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < 5 {
                self.witnesses.push(what());
            }
        }
    }

    fn result<T>(&mut self, r: crate::Result<T>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{what}: {e}"));
                None
            }
        }
    }
}

type Suite = fn(&mut Rng64, &mut Tally);

const SUITES: &[(&str, Suite)] = &[
    ("median_core", median_core_suite),
    ("cubulation_roundtrip", roundtrip_suite),
    ("quotient_law", quotient_suite),
    ("elliptic_finite", elliptic_suite),
    ("isom_cube", isom_cube_suite),
    ("chain_line", chain_line_suite),
    ("inverting", inverting_suite),
    ("flats", flat_suite),
    ("roller", roller_suite),
    ("transfer", transfer_suite),
    ("abelian", abelian_suite),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs every suite (or those named in `only`) from one seed.
pub fn run(seed: u64, only: &[String]) -> Report {
    let mut suites = Vec::new();
    for (i, (name, suite)) in SUITES.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|o| o == name) {
            continue;
        }
        let mut rng = random::rng(seed.wrapping_add(i as u64));
        let mut tally = Tally::default();
        let start = Instant::now();
        suite(&mut rng, &mut tally);
        suites.push(SuiteResult {
            name,
            cases: tally.cases,
            failures: tally.failures,
            witnesses: tally.witnesses,
            millis: start.elapsed().as_millis(),
        });
    }
    let failed = suites.iter().filter(|s| s.failures > 0).count() as u64;
    Report { seed, passed: suites.len() as u64 - failed, failed, suites }
}

fn hamming(a: &[bool], b: &[bool]) -> u32 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u32
}

fn median_core_suite(rng: &mut Rng64, t: &mut Tally) {
    for case in 0..200 {
        let ws = random::wallspace(rng, 10, 12);
        let Some(c) = t.result(cubulate(&ws), "cubulate") else { continue };
        let x = &c.complex;
        let ok = x
            .vertices()
            .all(|a| x.vertices().all(|b| x.distance(a, b) == hamming(&c.orientations[a.0], &c.orientations[b.0])));
        t.check(ok, || format!("case {case}: distance differs from wall count"));
        let convex = x.hyperplanes().all(|h| x.is_convex(&x.halfspace(h, false)) && x.is_convex(&x.halfspace(h, true)));
        t.check(convex, || format!("case {case}: a halfspace is not convex"));
        t.check(x.is_median_graph().is_ok(), || format!("case {case}: medians not unique"));
    }
}

fn roundtrip_suite(rng: &mut Rng64, t: &mut Tally) {
    for case in 0..50 {
        let x = random::median_graph(rng, 10, 12);
        let Some(ws) = t.result(Wallspace::from_complex(&x), "wallspace") else { continue };
        let Some(y) = t.result(cubulate(&ws), "cubulate") else { continue };
        t.check(is_isomorphic(&x, &y.complex), || format!("case {case}: round trip not isomorphic"));
    }
}

fn quotient_suite(rng: &mut Rng64, t: &mut Tally) {
    for case in 0..50 {
        let x = random::median_graph(rng, 8, 8);
        let j: Vec<HyperplaneId> = x.hyperplanes().filter(|_| rng.gen_bool(0.4)).collect();
        let Some(q) = t.result(cubical_quotient(&x, &j), "quotient") else { continue };
        let ok = x.vertices().all(|a| {
            x.vertices().all(|b| {
                let kept = x.separating_walls(a, b).iter().filter(|h| !j.contains(h)).count() as u32;
                q.complex().distance(q.apply(a), q.apply(b)) == kept
            })
        });
        t.check(ok, || format!("case {case}: quotient distance law fails"));
    }
}

fn elliptic_suite(_rng: &mut Rng64, t: &mut Tally) {
    let x = catalog::hypercube(3);
    let id = isometry::FiniteIsometry::identity(&x);
    if let Some(d) = t.result(median_set::decompose_elliptic_finite(&x, &[id]), "identity") {
        t.check(d.q == 0 && d.t.shape() == "cube(3)" && d.ensure().is_ok(), || "identity".into());
    }
    let (x, g) = catalog::cube_flip();
    if let Some(d) = t.result(median_set::decompose_elliptic_finite(&x, &[g]), "flip") {
        t.check(d.q == 1 && d.t.shape() == "cube(2)" && d.ensure().is_ok(), || "cube flip".into());
    }
    let z2 = PeriodicComplex::euclidean(2);
    let r = AffineIsometry::new(vec![(0, -1), (1, 1)], vec![1, 0]).unwrap();
    if let Some(d) = t.result(median_set::decompose_elliptic_periodic(&z2, &[r], 4), "reflection") {
        t.check(d.q == 1 && d.t.shape() == "line" && d.ensure().is_ok(), || "plane reflection".into());
    }
}

fn isom_cube_suite(_rng: &mut Rng64, t: &mut Tally) {
    let (x, g) = catalog::isom_cube();
    match t.result(classify_finite(&x, &g), "classify") {
        Some(IsometryClass::Elliptic { min_cube_dim, .. }) => t.check(min_cube_dim == 3, || "cube dim".into()),
        Some(other) => t.check(false, || format!("classified {}", other.name())),
        None => {}
    }
    let (disp, min) = isometry::min_set_finite(&x, &g);
    t.check(disp == 1 && min.len() == 6, || "Min(g) is not six vertices at distance 1".into());
    let witness = x.median_closure_witness(&min).ok().flatten();
    t.check(witness.is_some(), || "Min(g) is median-closed".into());
    if let Some(d) = t.result(median_set::decompose_elliptic_finite(&x, &[g]), "decompose") {
        let MedSet::Finite(med) = &d.med else { return };
        t.check(med.len() == 8 && min.is_subset(med) && d.ensure().is_ok(), || "Med(g)".into());
    }
}

fn chain_line_suite(_rng: &mut Rng64, t: &mut Tally) {
    let (p, g) = catalog::chain_line();
    if let Some(c) = t.result(classify_affine(&p, &g, 4), "classify") {
        t.check(c.name() == "loxodromic", || c.name().into());
    }
    if let Some(n) = t.result(isometry::combinatorial_min(&p, &g, 4), "norm") {
        t.check(n == 1, || format!("||g|| = {n}"));
    }
    if let Some(d) = t.result(median_set::decompose_loxodromic(&p, &g, 8), "decompose") {
        t.check(d.t.shape() == "line" && d.f.shape() == "line", || "factors".into());
        for c in d.failed() {
            t.check(false, || format!("check {}", c.name));
        }
    }
}

fn inverting_suite(_rng: &mut Rng64, t: &mut Tally) {
    for (name, (p, g), q) in [("square", catalog::square_prism(), 2), ("tesseract", catalog::tesseract_prism(), 4)] {
        if let Some(d) = t.result(median_set::decompose_inverting(&p, &g, 4), name) {
            t.check(d.q == q && d.t.shape() == "point" && d.f.shape() == "line", || {
                format!("{name}: factors {} {} {}", d.q, d.t.shape(), d.f.shape())
            });
            t.check(d.translation_length == Ratio::from_integer(1), || format!("{name}: length"));
            for c in d.failed() {
                t.check(false, || format!("{name}: check {}", c.name));
            }
        }
    }
}

fn flat_suite(_rng: &mut Rng64, t: &mut Tally) {
    use ExtInt::*;
    for d in 1..=3 {
        let z = PeriodicComplex::euclidean(d);
        t.check(flat_certificate(&z, &vec![NegInf; d], &vec![PosInf; d]), || format!("Z^{d}"));
    }
    let c = catalog::chain();
    t.check(flat_certificate(&c, &[NegInf, NegInf], &[PosInf, PosInf]), || "chain".into());
    let prod = c.product(&PeriodicComplex::euclidean(1));
    t.check(flat_certificate(&prod, &[NegInf, NegInf, NegInf], &[PosInf, PosInf, PosInf]), || "chain x Z".into());
    let z2 = PeriodicComplex::euclidean(2);
    t.check(!flat_certificate(&z2, &[NegInf, Fin(0)], &[PosInf, Fin(0)]), || "half-open Z^2".into());
}

fn roller_suite(_rng: &mut Rng64, t: &mut Tally) {
    let r = roller_directions(&PeriodicComplex::euclidean(2));
    let bounded = r.components.iter().filter(|c| c.bounded).count();
    t.check(r.components.len() == 9 && bounded == 4, || format!("Z^2: {} components", r.components.len()));
    let r = roller_directions(&catalog::chain());
    t.check(r.components.len() == 3, || format!("chain: {} components", r.components.len()));
}

fn transfer_suite(rng: &mut Rng64, t: &mut Tally) {
    let z2 = PeriodicComplex::euclidean(2);
    let m = WallSet::new(2, &[(0, Some(0), None)]).unwrap();
    let tr = |g: &AffineIsometry, m: &WallSet| isometry::transfer_number(&z2, g, m);
    for _ in 0..100 {
        let a = AffineIsometry::translation(vec![rng.gen_range(-5..=5), rng.gen_range(-5..=5)]);
        let b = AffineIsometry::translation(vec![rng.gen_range(-5..=5), rng.gen_range(-5..=5)]);
        let extra: Vec<Wall> = (0..3).map(|_| Wall { axis: rng.gen_range(0..2), cut: rng.gen_range(-6..=6) }).collect();
        let n = m.toggle(&extra);
        match (tr(&a, &m), tr(&b, &m), tr(&a.compose(&b), &m), tr(&a, &n)) {
            (Ok(x), Ok(y), Ok(xy), Ok(xn)) => {
                t.check(xy == x + y, || format!("additivity {x} + {y} != {xy}"));
                t.check(xn == x, || format!("perturbation changed {x} to {xn}"));
            }
            _ => t.check(false, || "transfer failed".into()),
        }
    }
    let all = WallSet::new(2, &[(0, None, None), (1, None, None)]).unwrap();
    let r = AffineIsometry::new(vec![(1, 1), (0, 1)], vec![0, 0]).unwrap();
    t.check(matches!(tr(&r, &all), Ok(0)), || "swap".into());
}

fn abelian_suite(rng: &mut Rng64, t: &mut Tally) {
    let z2 = PeriodicComplex::euclidean(2);
    let gens = [AffineIsometry::translation(vec![1, 0]), AffineIsometry::translation(vec![0, 1])];
    if let Some(a) = t.result(median_set::abelian_invariant_flat_periodic(&z2, &gens, 3), "Z^2") {
        t.check(a.shape() == "flat(2)" && a.ensure().is_ok(), || a.shape());
    }
    let (p, g) = catalog::chain_line();
    if let Some(a) = t.result(median_set::abelian_invariant_flat_periodic(&p, &[g], 3), "chain") {
        t.check(a.shape() == "line" && a.ensure().is_ok(), || a.shape());
    }
    for case in 0..100 {
        let (x, g, h) = random::commuting_pair(rng);
        let gh = g.compose(&h);
        let elliptic = matches!(classify_finite(&x, &gh), Ok(IsometryClass::Elliptic { .. }));
        t.check(elliptic, || format!("case {case}: product not elliptic"));
        let common = median_set::decompose_elliptic_finite(&x, &[g.clone(), h.clone()]);
        t.check(common.as_ref().map(|d| d.ensure().is_ok()).unwrap_or(false), || {
            format!("case {case}: no common stabilised cube")
        });
        let cube: Option<VertexSet> = common.ok().and_then(|d| x.vertex_set(&d.cube).ok());
        if let Some(c) = cube {
            t.check(gh.stabilises(&c), || format!("case {case}: product moves the common cube"));
        }
    }
}
