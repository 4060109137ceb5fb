//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use petgraph::algo::is_isomorphic;
use petgraph::graph::UnGraph;
use rand::Rng;

use common::*;
use medcube::isometry::{self, classify_finite, min_set_finite};
use medcube::median_set::{self, abelian_invariant_flat_finite, abelian_invariant_flat_periodic};
use medcube::{
    catalog, cubical_quotient, cubulate, random, roller_directions, selftest, AffineIsometry, CubeComplex, ExtInt,
    Factor, FiniteIsometry, HyperplaneId, IsometryClass, MedSet, PeriodicComplex, Wall, WallSet, Wallspace,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(label: &str, title: &str, outcome: &Outcome) {
    let line = match outcome {
        Ok(detail) => format!("[PASS] {label}: {title}: {detail}"),
        Err(detail) => format!("[FAIL] {label}: {title}: {detail}"),
    };
    // Written past the test harness capture so the lines appear in plain
    // `cargo test` output.
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
}

// ------------------------------------------------------------------ 1

fn median_core_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = random::rng(0xA1);
    let (mut pairs, mut triples, mut halfspaces) = (0u64, 0u64, 0u64);
    for case in 0..200 {
        let ws = random::wallspace(&mut rng, 10, 12);
        ensure(ws.wall_count() <= 12 && ws.points().len() <= 10, || format!("case {case}: generator out of range"))?;
        let c = cubulate(&ws).map_err(|e| format!("case {case}: {e}"))?;
        let x = &c.complex;
        let adj = adjacency(x);
        let d = all_pairs(&adj);
        let n = x.vertex_count();
        // Distance equals the number of walls on which two orientations differ.
        for a in 0..n {
            for b in 0..n {
                let walls = (0..ws.wall_count()).filter(|&w| c.orientations[a][w] != c.orientations[b][w]).count();
                ensure(d[a][b] as usize == walls, || format!("case {case}: d({a},{b})={} but {walls} walls", d[a][b]))?;
                pairs += 1;
            }
        }
        // Halfspaces are convex.
        for w in 0..ws.wall_count() {
            for side in [false, true] {
                let members: Vec<usize> = (0..n).filter(|&v| c.orientations[v][w] == side).collect();
                let set: HashSet<usize> = members.iter().copied().collect();
                for &a in &members {
                    for &b in &members {
                        ensure(interval(&d, a, b).iter().all(|v| set.contains(v)), || {
                            format!("case {case}: halfspace of wall {w} not convex")
                        })?;
                    }
                }
                halfspaces += 1;
            }
        }
        // Medians exist, are unique and agree with the library.
        let sample: Vec<(usize, usize, usize)> = if n <= 24 {
            (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))).collect()
        } else {
            (0..4000).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        };
        for (a, b, cc) in sample {
            let m = medians(&d, a, b, cc);
            ensure(m.len() == 1, || format!("case {case}: {} medians for ({a},{b},{cc})", m.len()))?;
            let lib = x
                .median(medcube::VertexId(a), medcube::VertexId(b), medcube::VertexId(cc))
                .map_err(|e| e.to_string())?;
            ensure(lib.0 == m[0], || format!("case {case}: library median differs"))?;
            triples += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "200 wallspaces, {pairs} pairs, {halfspaces} halfspaces, {triples} triples, 0 violations, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

// ------------------------------------------------------------------ 2

fn petgraph_of(x: &CubeComplex) -> UnGraph<(), ()> {
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<_> = x.vertices().map(|_| g.add_node(())).collect();
    for (a, b) in x.edges() {
        g.add_edge(nodes[a.0], nodes[b.0], ());
    }
    g
}

fn cubulation_round_trip() -> Outcome {
    let mut rng = random::rng(0xA2);
    let mut sizes = Vec::new();
    for case in 0..50 {
        let x = random::median_graph(&mut rng, 8, 8);
        let again =
            cubulate(&Wallspace::from_complex(&x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.complex;
        ensure(is_isomorphic(&petgraph_of(&x), &petgraph_of(&again)), || {
            format!("case {case}: re-cubulation of {} vertices not isomorphic", x.vertex_count())
        })?;
        sizes.push(x.vertex_count());
    }
    Ok(format!("50/50 isomorphic (vertices {}..={})", sizes.iter().min().unwrap(), sizes.iter().max().unwrap()))
}

// ------------------------------------------------------------------ 3

fn quotient_law() -> Outcome {
    let mut rng = random::rng(0xA3);
    let mut checked = 0u64;
    for case in 0..50 {
        let x = random::median_graph(&mut rng, 8, 9);
        let adj = adjacency(&x);
        let d = all_pairs(&adj);
        let classes = theta_classes(&x, &d);
        let chosen: Vec<usize> = (0..classes.len()).filter(|_| rng.gen_bool(0.4)).collect();
        let j: Vec<HyperplaneId> = chosen
            .iter()
            .map(|&i| {
                let (a, b) = classes[i][0];
                x.edge_hyperplane(medcube::VertexId(a), medcube::VertexId(b)).unwrap()
            })
            .collect();
        let q = cubical_quotient(&x, &j).map_err(|e| e.to_string())?;
        let qd = all_pairs(&adjacency(q.complex()));
        for a in 0..x.vertex_count() {
            for b in 0..x.vertex_count() {
                let expected =
                    (0..classes.len()).filter(|i| !chosen.contains(i) && separates(&d, classes[*i][0], a, b)).count();
                let got = qd[q.apply(medcube::VertexId(a)).0][q.apply(medcube::VertexId(b)).0] as usize;
                ensure(got == expected, || format!("case {case}: pair ({a},{b}) quotient {got} != {expected}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("50 complexes, {checked} pairs exact"))
}

// ------------------------------------------------------------------ 4

fn isom_cube_regression() -> Outcome {
    let (x, g) = catalog::isom_cube();
    let adj = adjacency(&x);
    let d = all_pairs(&adj);
    match classify_finite(&x, &g).map_err(|e| e.to_string())? {
        IsometryClass::Elliptic { min_cube_dim: 3, .. } => {}
        other => return Err(format!("classified as {other:?}")),
    }
    // Oracle displacement and minimising set.
    let disp: Vec<u32> = (0..x.vertex_count()).map(|v| d[v][g.apply(medcube::VertexId(v)).0]).collect();
    let min = *disp.iter().min().unwrap();
    let oracle_min: BTreeSet<usize> = (0..disp.len()).filter(|&v| disp[v] == min).collect();
    ensure(min == 1 && oracle_min.len() == 6, || format!("oracle Min has {} vertices at {min}", oracle_min.len()))?;
    let (lib_min, lib_set) = min_set_finite(&x, &g);
    let lib_set: BTreeSet<usize> = lib_set.iter().map(|v| v.0).collect();
    ensure(lib_min == 1 && lib_set == oracle_min, || "library Min differs from oracle".into())?;
    // Witness triple whose median escapes Min.
    let (triple, escaped) = x
        .median_closure_witness(
            &x.vertex_set(&oracle_min.iter().map(|&v| x.name(medcube::VertexId(v))).collect::<Vec<_>>()).unwrap(),
        )
        .map_err(|e| e.to_string())?
        .ok_or("library found Min median-closed")?;
    let m = medians(&d, triple[0].0, triple[1].0, triple[2].0);
    ensure(m == vec![escaped.0] && !oracle_min.contains(&m[0]), || "witness does not check out".into())?;
    // Med: union of the minimal cubes stabilised by g, from the oracle cubes.
    let all_cubes = cubes(&adj, &d);
    let stable: Vec<&BTreeSet<usize>> =
        all_cubes.iter().filter(|c| c.iter().all(|&v| c.contains(&g.apply(medcube::VertexId(v)).0))).collect();
    let low = stable.iter().map(|c| cube_dim(c)).min().unwrap();
    let oracle_med: BTreeSet<usize> =
        stable.iter().filter(|c| cube_dim(c) == low).flat_map(|c| c.iter().copied()).collect();
    let lib_med: BTreeSet<usize> =
        median_set::median_set_finite(&x, std::slice::from_ref(&g)).map_err(|e| e.to_string())?.iter().map(|v| v.0).collect();
    ensure(lib_med == oracle_med && lib_med.len() == 8, || format!("Med has {} vertices", lib_med.len()))?;
    ensure(oracle_min.is_subset(&lib_med) && oracle_min != lib_med, || "Min is not a proper subset of Med".into())?;
    let names: Vec<&str> = triple.iter().map(|&v| x.name(v)).collect();
    Ok(format!(
        "elliptic, cube dim 3, |Min| = 6 at displacement 1, witness ({}) -> {}, |Med| = 8",
        names.join(","),
        x.name(escaped)
    ))
}

// ------------------------------------------------------------------ 5

/// Minimal l1 displacement over the members of a box: the complexes used
/// here are convex in `Z^d`, so the l1 distance is the combinatorial one.
fn brute_norm(p: &PeriodicComplex, g: &AffineIsometry, r: i64) -> u64 {
    p.members_in(&p.padded_box(r))
        .iter()
        .map(|v| v.iter().zip(g.apply(v)).map(|(a, b)| a.abs_diff(b)).sum::<u64>())
        .min()
        .unwrap()
}

fn chain_line_regression() -> Outcome {
    let (p, g) = catalog::chain_line();
    let dec = median_set::decompose_loxodromic(&p, &g, 8).map_err(|e| e.to_string())?;
    ensure(dec.class == "loxodromic", || format!("class {}", dec.class))?;
    let norm = brute_norm(&p, &g, 8);
    ensure(norm == 1 && dec.min_displacement == 1, || {
        format!("||g|| oracle {norm}, library {}", dec.min_displacement)
    })?;
    ensure(dec.translation_length == Ratio::from_integer(1), || "translation length".into())?;
    let MedSet::Periodic(med) = &dec.med else { return Err("finite Med".into()) };
    let bounds = p.padded_box(8);
    let members: Vec<Vec<i64>> = med.members_in(&bounds);
    let cut_vertices: Vec<Vec<i64>> = p.members_in(&bounds).into_iter().filter(|v| v[0] == v[1]).collect();
    ensure(members == cut_vertices, || "Med differs from (cut vertices) x Z".into())?;
    ensure(dec.t.shape() == "line" && dec.f.shape() == "line" && dec.q == 0, || {
        format!("factors T={} F={} Q={}", dec.t.shape(), dec.f.shape(), dec.q_shape())
    })?;
    // Intrinsic distance on Med against the l1 distance of (T, F) coordinates.
    let mut pairs = 0u64;
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let product = members[a][0].abs_diff(members[b][0]) + members[a][2].abs_diff(members[b][2]);
            ensure(trace_distance(&members, a, b) as u64 == product, || {
                format!("additivity fails at {:?} {:?}", members[a], members[b])
            })?;
            pairs += 1;
        }
    }
    let lib = dec.check("distance_additivity").ok_or("no additivity check")?;
    ensure(lib.passed, || "library additivity check failed".into())?;
    Ok(format!("loxodromic, ||g|| = 1, Med = cut vertices x Z, T = line, F = line, {pairs} pairs additive at radius 8"))
}

// ------------------------------------------------------------------ 6

fn inverting_regression() -> Outcome {
    let (p, g) = catalog::square_prism();
    let inv = isometry::inverted_hyperplanes(&p, &g).map_err(|e| e.to_string())?;
    ensure(inv.len() == 2, || format!("{} inverted walls", inv.len()))?;
    // Transversality by quadrant scan.
    let pts = p.members_in(&p.padded_box(3));
    let (a, b) = (inv[0].wall, inv[1].wall);
    for (sa, sb) in [(false, false), (false, true), (true, false), (true, true)] {
        ensure(pts.iter().any(|v| (v[a.axis] > a.cut) == sa && (v[b.axis] > b.cut) == sb), || {
            "inverted walls not transverse".into()
        })?;
    }
    // The inverting power flips sides of some vertex.
    for w in &inv {
        let h = g.power(w.power as i64);
        ensure(pts.iter().any(|v| (v[w.wall.axis] > w.wall.cut) != (h.apply(v)[w.wall.axis] > w.wall.cut)), || {
            format!("power {} does not invert {:?}", w.power, w.wall)
        })?;
    }
    let dec = median_set::decompose_inverting(&p, &g, 4).map_err(|e| e.to_string())?;
    ensure(dec.q == 2 && dec.f.shape() == "line" && dec.t.shape() == "point", || {
        format!("factors Q={} F={} T={}", dec.q_shape(), dec.f.shape(), dec.t.shape())
    })?;
    let MedSet::Periodic(med) = &dec.med else { return Err("finite Med".into()) };
    let bounds = p.padded_box(4);
    ensure(med.members_in(&bounds) == p.members_in(&bounds), || "Med is not the whole complex".into())?;
    let in_carriers = med.members_in(&bounds).iter().all(|v| {
        [a, b].iter().all(|w| {
            let mut other = v.clone();
            other[w.axis] = if v[w.axis] == w.cut { w.cut + 1 } else { w.cut };
            (v[w.axis] == w.cut || v[w.axis] == w.cut + 1) && p.contains(&other)
        })
    });
    ensure(in_carriers, || "Med leaves a carrier".into())?;
    // l = lim d(x, g^n x) / n along n = 4m, where g^4 is a translation.
    let x0 = vec![0, 0, 0];
    let ratios: Vec<Ratio<i64>> = (1..=5)
        .map(|m| {
            let y = g.power(4 * m).apply(&x0);
            Ratio::new(x0.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum(), 4 * m)
        })
        .collect();
    ensure(ratios.iter().all(|r| *r == Ratio::from_integer(1)), || format!("l ratios {ratios:?}"))?;
    ensure(dec.translation_length == Ratio::from_integer(1), || "library l".into())?;
    let norm = brute_norm(&p, &g, 4);
    ensure(norm == 2 && dec.min_displacement == 2, || {
        format!("||g|| oracle {norm}, library {}", dec.min_displacement)
    })?;
    Ok("|J| = 2 transverse, Q = cube(2), F = line, T = point, Med = X inside both carriers, l = 1, ||g|| = 2".into())
}

// ------------------------------------------------------------------ 7

/// Oracle: both ends are realised boundary directions and every wall of a
/// window separates them.
fn oracle_flat(f: &PeriodicComplex, zeta: &[ExtInt], xi: &[ExtInt]) -> bool {
    let patterns = sign_patterns(f.lattice().basis(), f.dim(), 3);
    let sign = |d: &[ExtInt]| -> Vec<i8> {
        d.iter()
            .map(|c| match c {
                ExtInt::NegInf => -1,
                ExtInt::PosInf => 1,
                ExtInt::Fin(_) => 0,
            })
            .collect()
    };
    if !patterns.contains(&sign(zeta)) || !patterns.contains(&sign(xi)) {
        return false;
    }
    let pts = f.members_in(&f.padded_box(4));
    let set: HashSet<&Vec<i64>> = pts.iter().collect();
    pts.iter().all(|v| {
        (0..f.dim()).all(|axis| {
            let mut w = v.clone();
            w[axis] += 1;
            !set.contains(&w) || upper(zeta[axis], v[axis]) != upper(xi[axis], v[axis])
        })
    })
}

fn max_degree(f: &PeriodicComplex) -> usize {
    let pts = f.members_in(&f.padded_box(3));
    let set: HashSet<&Vec<i64>> = pts.iter().collect();
    pts.iter()
        .map(|v| {
            (0..f.dim())
                .flat_map(|a| {
                    [-1, 1].map(|s| {
                        let mut w = v.clone();
                        w[a] += s;
                        w
                    })
                })
                .filter(|w| set.contains(w))
                .count()
        })
        .max()
        .unwrap_or(0)
}

fn ends(d: usize, pattern: &[i8]) -> (Vec<ExtInt>, Vec<ExtInt>) {
    let at = |s: i8| if s > 0 { ExtInt::PosInf } else { ExtInt::NegInf };
    ((0..d).map(|i| at(-pattern[i])).collect(), (0..d).map(|i| at(pattern[i])).collect())
}

fn flat_certificates() -> Outcome {
    let mut cases: Vec<(String, PeriodicComplex, Vec<i8>)> = Vec::new();
    for d in 1..=3 {
        cases.push((format!("Z^{d}"), PeriodicComplex::euclidean(d), vec![1; d]));
    }
    cases.push(("chain".into(), catalog::chain(), vec![1, 1]));
    cases.push(("chain x Z".into(), catalog::chain().product(&PeriodicComplex::euclidean(1)), vec![1, 1, 1]));
    cases.push(("Z x chain".into(), PeriodicComplex::euclidean(1).product(&catalog::chain()), vec![1, 1, 1]));
    let mut degrees = Vec::new();
    let sources: Vec<(&str, PeriodicComplex, AffineIsometry)> = vec![
        ("chain-line", catalog::chain_line().0, catalog::chain_line().1),
        ("square-prism", catalog::square_prism().0, catalog::square_prism().1),
        ("Z^2 (1,1)", PeriodicComplex::euclidean(2), AffineIsometry::translation(vec![1, 1])),
    ];
    for (name, p, g) in &sources {
        let dec = median_set::decompose_affine(p, g, 4).map_err(|e| e.to_string())?;
        let Factor::Periodic(f) = &dec.f else { return Err(format!("{name}: finite F")) };
        let deg = max_degree(f);
        let bound = 2 * dec.min_displacement as usize;
        ensure(deg <= bound && dec.max_degree == Some(deg), || {
            format!("{name}: F degree {deg}, library {:?}, bound {bound}", dec.max_degree)
        })?;
        degrees.push(format!("{name} {deg}<={bound}"));
        let pattern = vec![1; f.dim()];
        cases.push((format!("F of {name}"), f.clone(), pattern));
    }
    for (name, f, pattern) in &cases {
        let (zeta, xi) = ends(f.dim(), pattern);
        ensure(oracle_flat(f, &zeta, &xi), || format!("{name}: oracle rejects"))?;
        ensure(median_set::flat_certificate(f, &zeta, &xi), || format!("{name}: certificate rejects"))?;
    }
    // Non-flats and wrong ends are rejected by both.
    let strip = catalog::unit_cube(1).product(&PeriodicComplex::euclidean(1));
    let bad = [
        (strip, vec![ExtInt::Fin(0), ExtInt::NegInf], vec![ExtInt::Fin(0), ExtInt::PosInf]),
        (catalog::chain(), vec![ExtInt::NegInf, ExtInt::PosInf], vec![ExtInt::PosInf, ExtInt::NegInf]),
    ];
    for (f, zeta, xi) in &bad {
        ensure(!oracle_flat(f, zeta, xi) && !median_set::flat_certificate(f, zeta, xi), || "non-flat accepted".into())?;
    }
    Ok(format!("{} flats certified, 2 non-flats rejected; max F degree: {}", cases.len(), degrees.join(", ")))
}

// ------------------------------------------------------------------ 8

fn roller_components() -> Outcome {
    let mut parts = Vec::new();
    for (name, p, expected) in [("Z^2", PeriodicComplex::euclidean(2), 9), ("chain", catalog::chain(), 3)] {
        let report = roller_directions(&p);
        let lib: BTreeSet<Vec<i8>> = report.components.iter().map(|c| c.pattern.clone()).collect();
        let oracle = sign_patterns(p.lattice().basis(), p.dim(), 3);
        ensure(lib == oracle && lib.len() == expected, || {
            format!("{name}: {} components, oracle {}", lib.len(), oracle.len())
        })?;
        // A component is bounded when no realised pattern extends its infinite coordinates.
        let extends = |s: &Vec<i8>, t: &Vec<i8>| s != t && s.iter().zip(t).all(|(a, b)| *a == 0 || a == b);
        let bounded: BTreeSet<Vec<i8>> =
            oracle.iter().filter(|s| !oracle.iter().any(|t| extends(s, t))).cloned().collect();
        let lib_bounded: BTreeSet<Vec<i8>> =
            report.components.iter().filter(|c| c.bounded).map(|c| c.pattern.clone()).collect();
        ensure(lib_bounded == bounded && !bounded.is_empty(), || format!("{name}: bounded components differ"))?;
        ensure(report.components[report.flagged].bounded, || format!("{name}: flagged component unbounded"))?;
        parts.push(format!("{name}: {} components, {} bounded", lib.len(), bounded.len()));
    }
    Ok(format!("{} (at least one bounded in each; Z^2 has four bounded corner points)", parts.join("; ")))
}

// ------------------------------------------------------------------ 9

fn random_wallset(rng: &mut random::Rng64, dim: usize) -> Vec<(usize, Option<i64>, Option<i64>)> {
    let mut pieces = Vec::new();
    for axis in 0..dim {
        let mut cuts: Vec<i64> = (0..rng.gen_range(0..=4)).map(|_| rng.gen_range(-10..=10)).collect();
        cuts.sort();
        cuts.dedup();
        let mut ends: Vec<Option<i64>> = cuts.into_iter().map(Some).collect();
        if rng.gen_bool(0.5) {
            ends.insert(0, None);
        }
        if ends.len() % 2 == 1 {
            ends.push(None);
        }
        for pair in ends.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            // Closed intervals; shrink the upper end so intervals stay disjoint.
            if let (Some(x), Some(y)) = (a, b) {
                if y <= x {
                    continue;
                }
                pieces.push((axis, Some(x), Some(y - 1)));
            } else {
                pieces.push((axis, a, b));
            }
        }
    }
    pieces
}

fn in_pieces(pieces: &[(usize, Option<i64>, Option<i64>)], w: (usize, i64)) -> bool {
    pieces.iter().any(|&(a, lo, hi)| a == w.0 && lo.is_none_or(|l| l <= w.1) && hi.is_none_or(|h| w.1 <= h))
}

/// Image of the wall `x[axis] = cut | cut+1` under a signed permutation.
fn image_wall(g: &AffineIsometry, (axis, cut): (usize, i64)) -> (usize, i64) {
    let j = g.perm().iter().position(|&(a, _)| a == axis).unwrap();
    let (_, s) = g.perm()[j];
    let t = g.trans()[j];
    if s > 0 {
        (j, cut + t)
    } else {
        (j, -cut - 1 + t)
    }
}

/// `|M \ g^-1 M| - |g^-1 M \ M|` by enumerating walls in a range beyond
/// every finite endpoint.
fn oracle_transfer(g: &AffineIsometry, dim: usize, pieces: &[(usize, Option<i64>, Option<i64>)]) -> i64 {
    let reach = pieces.iter().flat_map(|p| [p.1, p.2]).flatten().map(i64::abs).max().unwrap_or(0)
        + g.trans().iter().map(|t| t.abs()).max().unwrap_or(0)
        + 5;
    let mut tr = 0;
    for axis in 0..dim {
        for cut in -reach..=reach {
            let in_m = in_pieces(pieces, (axis, cut));
            let in_pre = in_pieces(pieces, image_wall(g, (axis, cut)));
            tr += in_m as i64 - in_pre as i64;
        }
    }
    tr
}

fn transfer_morphism() -> Outcome {
    let p = PeriodicComplex::euclidean(2);
    let mut rng = random::rng(0xA9);
    let shift =
        |rng: &mut random::Rng64| AffineIsometry::translation(vec![rng.gen_range(-6..=6), rng.gen_range(-6..=6)]);
    for case in 0..100 {
        let pieces = random_wallset(&mut rng, 2);
        let m = WallSet::new(2, &pieces).map_err(|e| e.to_string())?;
        let (g, h) = (shift(&mut rng), shift(&mut rng));
        let tr = |g: &AffineIsometry| isometry::transfer_number(&p, g, &m).map_err(|e| e.to_string());
        let (tg, th, tgh) = (tr(&g)?, tr(&h)?, tr(&g.compose(&h))?);
        ensure(tgh == tg + th, || format!("case {case}: tr(gh)={tgh} != {tg}+{th}"))?;
        ensure(tg == oracle_transfer(&g, 2, &pieces), || {
            format!("case {case}: tr(g)={tg}, oracle {}", oracle_transfer(&g, 2, &pieces))
        })?;
        let flips: Vec<Wall> =
            (0..rng.gen_range(1..6)).map(|_| Wall { axis: rng.gen_range(0..2), cut: rng.gen_range(-15..15) }).collect();
        let perturbed = m.toggle(&flips);
        ensure(isometry::transfer_number(&p, &g, &perturbed).map_err(|e| e.to_string())? == tg, || {
            format!("case {case}: perturbation changed tr")
        })?;
    }
    // Elliptic examples.
    let mut elliptic = 0;
    let swap = AffineIsometry::new(vec![(1, 1), (0, 1)], vec![0, 0]).unwrap();
    let named: Vec<(PeriodicComplex, AffineIsometry, Vec<(usize, Option<i64>, Option<i64>)>)> = vec![
        (p.clone(), swap.clone(), vec![(0, Some(0), None), (1, Some(0), None)]),
        (catalog::chain(), swap, vec![(0, Some(0), None), (1, Some(0), None)]),
        (
            p.clone(),
            AffineIsometry::new(vec![(0, -1), (1, 1)], vec![0, 0]).unwrap(),
            vec![(0, None, Some(-3)), (0, Some(2), None)],
        ),
    ];
    let mut all = named;
    for (perm, trans) in
        [(vec![(0, -1), (1, -1)], vec![1, 1]), (vec![(1, -1), (0, 1)], vec![0, 0]), (vec![(1, 1), (0, -1)], vec![0, 1])]
    {
        let g = AffineIsometry::new(perm, trans).unwrap();
        for _ in 0..5 {
            let finite: Vec<_> =
                random_wallset(&mut rng, 2).into_iter().filter(|p| p.1.is_some() && p.2.is_some()).collect();
            all.push((p.clone(), g.clone(), finite));
        }
    }
    for (q, g, pieces) in &all {
        let m = WallSet::new(2, pieces).map_err(|e| e.to_string())?;
        let t = isometry::transfer_number(q, g, &m).map_err(|e| e.to_string())?;
        ensure(t == 0 && oracle_transfer(g, 2, pieces) == 0, || format!("elliptic tr = {t}"))?;
        elliptic += 1;
    }
    Ok(format!(
        "100 translation pairs additive, oracle-exact and perturbation-invariant; tr = 0 on {elliptic} elliptic cases"
    ))
}

// ------------------------------------------------------------------ 10

fn abelian_iteration() -> Outcome {
    let z2 = PeriodicComplex::euclidean(2);
    let gens = [AffineIsometry::translation(vec![1, 0]), AffineIsometry::translation(vec![0, 1])];
    let flat = abelian_invariant_flat_periodic(&z2, &gens, 4).map_err(|e| e.to_string())?;
    flat.ensure().map_err(|e| e.to_string())?;
    let b = flat.flat.padded_box(3);
    ensure(flat.flat.dim() == 2 && flat.flat.members_in(&b).len() as u64 == b.volume() && flat.cube_dim == 0, || {
        format!("Z^2 flat is {}", flat.shape())
    })?;
    let (p, g) = catalog::chain_line();
    let line = abelian_invariant_flat_periodic(&p, &[g], 4).map_err(|e| e.to_string())?;
    line.ensure().map_err(|e| e.to_string())?;
    let deg = max_degree(&line.flat);
    ensure(line.flat.lattice().rank() == 1 && deg == 2 && line.shape() == "line", || {
        format!("chain x Z flat is {}", line.shape())
    })?;

    let mut rng = random::rng(0xAA);
    let mut dims = [0usize; 5];
    for case in 0..100 {
        let (x, g, h) = random::commuting_pair(&mut rng);
        let adj = adjacency(&x);
        let d = all_pairs(&adj);
        let fixes =
            |f: &FiniteIsometry, c: &BTreeSet<usize>| c.iter().all(|&v| c.contains(&f.apply(medcube::VertexId(v)).0));
        let common = cubes(&adj, &d).into_iter().filter(|c| fixes(&g, c) && fixes(&h, c)).map(|c| cube_dim(&c)).min();
        let Some(dim) = common else { return Err(format!("case {case}: no cube stabilised by both")) };
        dims[dim as usize] += 1;
        let gh = g.compose(&h);
        ensure(matches!(classify_finite(&x, &gh), Ok(IsometryClass::Elliptic { .. })), || {
            format!("case {case}: gh not elliptic")
        })?;
        let flat = abelian_invariant_flat_finite(&x, &[g, h]).map_err(|e| format!("case {case}: {e}"))?;
        flat.ensure().map_err(|e| format!("case {case}: {e}"))?;
        ensure(flat.cube_dim == dim as usize, || format!("case {case}: cube dim {} vs oracle {dim}", flat.cube_dim))?;
    }
    Ok(format!("Z^2 -> flat(2); chain x Z -> line; 100/100 commuting pairs stabilise a cube (dims 0..4: {dims:?})"))
}

// ------------------------------------------------------------------ selftest

fn selftest_budget() -> Outcome {
    let start = Instant::now();
    let report = selftest::run(1, &[]);
    let elapsed = start.elapsed();
    ensure(report.failed == 0, || {
        let bad: Vec<String> = report.suites.iter().filter(|s| s.failures > 0).map(|s| s.name.to_string()).collect();
        format!("failing suites: {}", bad.join(", "))
    })?;
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{} suites passed in {:.1}s", report.passed, elapsed.as_secs_f64()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("median-core oracle suite", median_core_oracle),
        ("cubulation round-trip", cubulation_round_trip),
        ("quotient distance law", quotient_law),
        ("3-cube isometry regression", isom_cube_regression),
        ("chain of squares x Z regression", chain_line_regression),
        ("inverting prism regression", inverting_regression),
        ("flat certificates and degree bound", flat_certificates),
        ("Roller directions", roller_components),
        ("transfer morphism", transfer_morphism),
        ("abelian iteration", abelian_iteration),
        ("selftest under 5 minutes", selftest_budget),
    ];
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let label = if i < 10 { format!("criterion {}", i + 1) } else { "budget".to_string() };
        report(&label, title, &outcome);
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
