//! Built-in example complexes and isometries.

use crate::io::{ComplexSpec, Document, IsometrySpec, PeriodicSpec, WallspaceSpec};
use crate::isometry::FiniteIsometry;
use crate::median_core::CubeComplex;
use crate::periodic::{AffineIsometry, PeriodicComplex};
use crate::wallspace::Wallspace;

/// Names accepted by [`lookup`].
pub const NAMES: &[&str] =
    &["line", "plane", "chain", "chain-line", "square-prism", "tesseract-prism", "isom-cube", "cube-flip", "tripod"];

/// A chain of squares glued at opposite corners, periodic along `(1,1)`.
pub fn chain() -> PeriodicComplex {
    PeriodicComplex::new(2, &[vec![1, 1]], &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap()
}

/// `chain x Z` with the reflection of the chain times a unit translation.
pub fn chain_line() -> (PeriodicComplex, AffineIsometry) {
    let p = chain().product(&PeriodicComplex::euclidean(1));
    let g = AffineIsometry::new(vec![(1, 1), (0, 1), (2, 1)], vec![0, 0, 1]).unwrap();
    (p, g)
}

/// The unit `k`-cube as a bounded periodic complex.
pub fn unit_cube(k: usize) -> PeriodicComplex {
    let cells: Vec<Vec<i64>> = (0u32..1 << k).map(|m| (0..k).map(|i| (m >> i & 1) as i64).collect()).collect();
    PeriodicComplex::new(k, &[], &cells).unwrap()
}

/// `[0,1]^2 x Z` with a quarter turn of the square times a unit translation.
pub fn square_prism() -> (PeriodicComplex, AffineIsometry) {
    let p = unit_cube(2).product(&PeriodicComplex::euclidean(1));
    let g = AffineIsometry::new(vec![(1, -1), (0, 1), (2, 1)], vec![1, 0, 1]).unwrap();
    (p, g)
}

/// `[0,1]^4 x Z` with a quarter turn on each pair of axes and a unit
/// translation.
pub fn tesseract_prism() -> (PeriodicComplex, AffineIsometry) {
    let p = unit_cube(4).product(&PeriodicComplex::euclidean(1));
    let g = AffineIsometry::new(vec![(1, -1), (0, 1), (3, -1), (2, 1), (4, 1)], vec![1, 0, 1, 0, 1]).unwrap();
    (p, g)
}

/// The `n`-cube with vertices named by bit strings.
pub fn hypercube(n: usize) -> CubeComplex {
    let name = |m: u32| (0..n).map(|i| if m >> (n - 1 - i) & 1 == 1 { '1' } else { '0' }).collect::<String>();
    let names: Vec<String> = (0u32..1 << n).map(name).collect();
    let mut edges = Vec::new();
    for m in 0u32..1 << n {
        for i in 0..n {
            if m >> i & 1 == 0 {
                edges.push((name(m), name(m | 1 << i)));
            }
        }
    }
    CubeComplex::build(&names, &edges).unwrap()
}

fn bit_map(x: &CubeComplex, f: impl Fn(&[u8]) -> Vec<u8>) -> FiniteIsometry {
    let pairs: Vec<(String, String)> = x
        .vertices()
        .map(|v| {
            let bits: Vec<u8> = x.name(v).bytes().map(|b| b - b'0').collect();
            let image: String = f(&bits).iter().map(|b| (b + b'0') as char).collect();
            (x.name(v).to_string(), image)
        })
        .collect();
    FiniteIsometry::from_names(x, &pairs).unwrap()
}

/// The 3-cube with `(a,b,c) -> complement of (b,c,a)`: it rotates a
/// 6-cycle by one step and swaps the remaining antipodal pair.
pub fn isom_cube() -> (CubeComplex, FiniteIsometry) {
    let x = hypercube(3);
    let g = bit_map(&x, |b| vec![1 - b[1], 1 - b[2], 1 - b[0]]);
    (x, g)
}

/// The 3-cube with the reflection exchanging the faces `a = 0` and `a = 1`.
pub fn cube_flip() -> (CubeComplex, FiniteIsometry) {
    let x = hypercube(3);
    let g = bit_map(&x, |b| vec![1 - b[0], b[1], b[2]]);
    (x, g)
}

/// Three points, each cut off from the other two by a wall.
pub fn tripod() -> Wallspace {
    Wallspace::new(
        &["a", "b", "c"],
        &[(vec!["a"], vec!["b", "c"]), (vec!["b"], vec!["a", "c"]), (vec!["c"], vec!["a", "b"])],
    )
    .unwrap()
}

/// A named example as an input document.
///
/// `line` and `plane` carry unit translations (`plane` also carries the
/// diagonal translation as its isometry), `chain` carries the reflection
/// swapping the two coordinates.
pub fn document(name: &str) -> Option<Document> {
    let periodic = |p: &PeriodicComplex| Some(PeriodicSpec::of(p));
    let affine = |g: &AffineIsometry| IsometrySpec::of_affine(g);
    let doc = match name {
        "line" => Document {
            periodic: periodic(&PeriodicComplex::euclidean(1)),
            isometry: Some(affine(&AffineIsometry::translation(vec![1]))),
            ..Document::default()
        },
        "plane" => Document {
            periodic: periodic(&PeriodicComplex::euclidean(2)),
            isometry: Some(affine(&AffineIsometry::translation(vec![1, 1]))),
            generators: Some(vec![
                affine(&AffineIsometry::translation(vec![1, 0])),
                affine(&AffineIsometry::translation(vec![0, 1])),
            ]),
            ..Document::default()
        },
        "chain" => Document {
            periodic: periodic(&chain()),
            isometry: Some(affine(&AffineIsometry::new(vec![(1, 1), (0, 1)], vec![0, 0]).unwrap())),
            ..Document::default()
        },
        "chain-line" | "square-prism" | "tesseract-prism" => {
            let (p, g) = match name {
                "chain-line" => chain_line(),
                "square-prism" => square_prism(),
                _ => tesseract_prism(),
            };
            Document { periodic: periodic(&p), isometry: Some(affine(&g)), ..Document::default() }
        }
        "isom-cube" | "cube-flip" => {
            let (x, g) = if name == "isom-cube" { isom_cube() } else { cube_flip() };
            Document {
                complex: Some(ComplexSpec::of(&x)),
                isometry: Some(IsometrySpec::of_finite(&x, &g)),
                ..Document::default()
            }
        }
        "tripod" => {
            let ws = tripod();
            let walls = (0..ws.wall_count())
                .map(|w| {
                    let [a, b] = ws.wall_sides(w);
                    (a.iter().map(|s| s.to_string()).collect(), b.iter().map(|s| s.to_string()).collect())
                })
                .collect();
            Document { wallspace: Some(WallspaceSpec { points: ws.points().to_vec(), walls }), ..Document::default() }
        }
        _ => return None,
    };
    Some(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::check_symmetry;

    #[test]
    fn examples_are_well_formed() {
        assert!(chain().is_valid());
        let (p, g) = chain_line();
        check_symmetry(&p, &g).unwrap();
        let (p, g) = square_prism();
        check_symmetry(&p, &g).unwrap();
        let (p, g) = tesseract_prism();
        check_symmetry(&p, &g).unwrap();
        assert_eq!(hypercube(3).edge_count(), 12);
        let (x, g) = isom_cube();
        assert_eq!(x.name(g.apply(x.vertex("000").unwrap())), "111");
        assert_eq!(x.name(g.apply(x.vertex("001").unwrap())), "101");
        for name in NAMES {
            assert!(document(name).is_some(), "{name}");
        }
        assert!(document("tripod").unwrap().wallspace().is_ok());
    }
}
