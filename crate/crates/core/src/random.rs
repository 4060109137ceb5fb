//! Seeded generators for property suites.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::canon::automorphisms;
use crate::catalog;
use crate::isometry::FiniteIsometry;
use crate::median_core::CubeComplex;
use crate::wallspace::{cubulate, Wallspace};

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A wallspace on at most `max_points` points with at most `max_walls`
/// distinct walls.
pub fn wallspace(rng: &mut Rng64, max_points: usize, max_walls: usize) -> Wallspace {
    let n = rng.gen_range(2..=max_points.max(2));
    let target = rng.gen_range(1..=max_walls.max(1));
    let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut walls: BTreeSet<Vec<bool>> = BTreeSet::new();
    // Walls through a hidden line order keep cubulations small; the rest
    // are arbitrary bipartitions.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for _ in 0..target * 4 {
        if walls.len() == target {
            break;
        }
        let side: Vec<bool> = if rng.gen_bool(0.6) {
            let cut = rng.gen_range(1..n);
            let mut s = vec![false; n];
            for &p in &order[cut..] {
                s[p] = true;
            }
            s
        } else {
            (0..n).map(|_| rng.gen_bool(0.5)).collect()
        };
        let normal: Vec<bool> = if side[0] { side.iter().map(|b| !b).collect() } else { side };
        if normal.iter().any(|&b| b) {
            walls.insert(normal);
        }
    }
    if walls.is_empty() {
        walls.insert((0..n).map(|i| i == n - 1).collect());
    }
    Wallspace::from_sides(points, walls.into_iter().collect()).expect("walls are distinct and proper")
}

/// A finite median graph obtained by cubulating a random wallspace.
pub fn median_graph(rng: &mut Rng64, max_points: usize, max_walls: usize) -> CubeComplex {
    cubulate(&wallspace(rng, max_points, max_walls)).expect("cubulation").complex
}

/// A host with a pair of commuting isometries.
pub fn commuting_pair(rng: &mut Rng64) -> (CubeComplex, FiniteIsometry, FiniteIsometry) {
    let x = match rng.gen_range(0..3) {
        0 => catalog::hypercube(rng.gen_range(1..=4)),
        _ => loop {
            let x = median_graph(rng, 6, 5);
            if x.vertex_count() <= 32 {
                break x;
            }
        },
    };
    let all = automorphisms(&x, 384);
    let g = all.choose(rng).unwrap().clone();
    let g = FiniteIsometry::new(&x, g).expect("automorphism");
    let commuting: Vec<FiniteIsometry> = all
        .into_iter()
        .map(|m| FiniteIsometry::new(&x, m).expect("automorphism"))
        .filter(|h| h.commutes_with(&g))
        .collect();
    let h = commuting.choose(rng).unwrap().clone();
    (x, g, h)
}
