//! JSON input documents and DOT output.
//!
//! An input document is a JSON object with any of the keys below; several
//! documents can be merged, later keys replacing earlier ones.
//!
//! ```json
//! { "complex":   { "vertices": ["a", "b"], "edges": [["a", "b"]] },
//!   "wallspace": { "points": ["a", "b", "c"], "walls": [[["a"], ["b", "c"]]] },
//!   "periodic":  { "dim": 2, "lattice": [[1, 1]], "cells": [[0, 0], [1, 0], [0, 1]] },
//!   "isometry":  { "map": { "a": "b", "b": "a" } },
//!   "generators": [ { "perm": [[0, 1], [1, 1]], "trans": [1, 0] } ],
//!   "wallset":   [ { "axis": 0, "from": 0, "to": null } ] }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{FiniteIsometry, WallSet};
use crate::median_core::{CubeComplex, VertexSet};
use crate::periodic::{label, AffineIsometry, PeriodicComplex, Point};
use crate::wallspace::Wallspace;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wallspace: Option<WallspaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<PeriodicSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isometry: Option<IsometrySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<IsometrySpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wallset: Option<Vec<IntervalSpec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallspaceSpec {
    pub points: Vec<String>,
    pub walls: Vec<(Vec<String>, Vec<String>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicSpec {
    pub dim: usize,
    #[serde(default)]
    pub lattice: Vec<Vec<i64>>,
    pub cells: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IsometrySpec {
    Finite { map: BTreeMap<String, String> },
    Affine { perm: Vec<(usize, i8)>, trans: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSpec {
    pub axis: usize,
    pub from: Option<i64>,
    pub to: Option<i64>,
}

impl Document {
    /// Parses a keyed document, or a single bare complex, wallspace,
    /// periodic complex or isometry.
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
        let has = |k: &str| value.get(k).is_some();
        let doc = if has("vertices") {
            Document { complex: Some(from_value(value)?), ..Document::default() }
        } else if has("points") {
            Document { wallspace: Some(from_value(value)?), ..Document::default() }
        } else if has("dim") {
            Document { periodic: Some(from_value(value)?), ..Document::default() }
        } else if has("map") || has("perm") {
            Document { isometry: Some(from_value(value)?), ..Document::default() }
        } else {
            from_value(value)?
        };
        Ok(doc)
    }

    /// Keys of `other` replace those of `self`.
    pub fn merge(self, other: Document) -> Document {
        Document {
            complex: other.complex.or(self.complex),
            wallspace: other.wallspace.or(self.wallspace),
            periodic: other.periodic.or(self.periodic),
            isometry: other.isometry.or(self.isometry),
            generators: other.generators.or(self.generators),
            wallset: other.wallset.or(self.wallset),
        }
    }

    pub fn complex(&self) -> Result<CubeComplex> {
        let spec = self.complex.as_ref().ok_or_else(|| missing("complex"))?;
        spec.build()
    }

    pub fn wallspace(&self) -> Result<Wallspace> {
        let spec = self.wallspace.as_ref().ok_or_else(|| missing("wallspace"))?;
        Wallspace::new(&spec.points, &spec.walls)
    }

    pub fn periodic(&self) -> Result<PeriodicComplex> {
        let spec = self.periodic.as_ref().ok_or_else(|| missing("periodic"))?;
        PeriodicComplex::new(spec.dim, &spec.lattice, &spec.cells)
    }

    /// The single isometry, or the first generator.
    pub fn isometry_spec(&self) -> Result<&IsometrySpec> {
        self.isometry
            .as_ref()
            .or_else(|| self.generators.as_ref().and_then(|g| g.first()))
            .ok_or_else(|| missing("isometry"))
    }

    /// The generator list, or the single isometry.
    pub fn generator_specs(&self) -> Result<Vec<&IsometrySpec>> {
        match (&self.generators, &self.isometry) {
            (Some(g), _) => Ok(g.iter().collect()),
            (None, Some(i)) => Ok(vec![i]),
            (None, None) => Err(missing("generators")),
        }
    }

    pub fn wallset(&self, dim: usize) -> Result<WallSet> {
        let spec = self.wallset.as_ref().ok_or_else(|| missing("wallset"))?;
        let pieces: Vec<_> = spec.iter().map(|i| (i.axis, i.from, i.to)).collect();
        WallSet::new(dim, &pieces)
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn from_value<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_json::from_value(value).map_err(parse_error)
}

fn missing(key: &str) -> Error {
    Error::Parse(format!("input has no `{key}`"))
}

impl ComplexSpec {
    pub fn build(&self) -> Result<CubeComplex> {
        CubeComplex::build(&self.vertices, &self.edges)
    }

    pub fn of(x: &CubeComplex) -> Self {
        ComplexSpec {
            vertices: x.vertices().map(|v| x.name(v).to_string()).collect(),
            edges: x.edges().map(|(a, b)| (x.name(a).to_string(), x.name(b).to_string())).collect(),
        }
    }
}

impl PeriodicSpec {
    pub fn of(p: &PeriodicComplex) -> Self {
        PeriodicSpec { dim: p.dim(), lattice: p.lattice().basis().to_vec(), cells: p.cells().to_vec() }
    }
}

impl IsometrySpec {
    pub fn finite(&self, x: &CubeComplex) -> Result<FiniteIsometry> {
        match self {
            IsometrySpec::Finite { map } => {
                let pairs: Vec<(&str, &str)> = map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                FiniteIsometry::from_names(x, &pairs)
            }
            IsometrySpec::Affine { .. } => Err(Error::Parse("an affine isometry needs a periodic complex".into())),
        }
    }

    pub fn affine(&self) -> Result<AffineIsometry> {
        match self {
            IsometrySpec::Affine { perm, trans } => AffineIsometry::new(perm.clone(), trans.clone()),
            IsometrySpec::Finite { .. } => Err(Error::Parse("a vertex map needs a finite complex".into())),
        }
    }

    pub fn of_affine(g: &AffineIsometry) -> Self {
        IsometrySpec::Affine { perm: g.perm().to_vec(), trans: g.trans().to_vec() }
    }

    pub fn of_finite(x: &CubeComplex, g: &FiniteIsometry) -> Self {
        IsometrySpec::Finite {
            map: x.vertices().map(|v| (x.name(v).to_string(), x.name(g.apply(v)).to_string())).collect(),
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// An undirected DOT graph; vertices in `highlight` are filled.
pub fn to_dot(x: &CubeComplex, name: &str, highlight: Option<&VertexSet>) -> String {
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(name)).unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for v in x.vertices() {
        let style = match highlight {
            Some(h) if h.contains(v) => " [style=filled]",
            _ => "",
        };
        writeln!(out, "  {}{};", quote(x.name(v)), style).unwrap();
    }
    for (a, b) in x.edges() {
        writeln!(out, "  {} -- {};", quote(x.name(a)), quote(x.name(b))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Nodes and edges to render; nodes need not span a connected graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DotGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl DotGraph {
    pub fn of_complex(x: &CubeComplex) -> Self {
        let spec = ComplexSpec::of(x);
        DotGraph { nodes: spec.vertices, edges: spec.edges }
    }

    /// Lattice points labelled by coordinates, joined by unit steps.
    pub fn of_points(points: &[Point]) -> Self {
        let set: BTreeSet<&Point> = points.iter().collect();
        let mut edges = Vec::new();
        for p in &set {
            let mut q = (*p).clone();
            for axis in 0..q.len() {
                q[axis] += 1;
                if set.contains(&q) {
                    edges.push((label(p), label(&q)));
                }
                q[axis] -= 1;
            }
        }
        DotGraph { nodes: set.iter().map(|p| label(p)).collect(), edges }
    }
}

/// Several graphs in one DOT file, as clusters of one graph.
pub fn to_dot_clusters(parts: &[(&str, DotGraph)]) -> String {
    let mut out = String::from("graph \"decomposition\" {\n  node [shape=circle];\n");
    for (i, (name, g)) in parts.iter().enumerate() {
        let id = |v: &str| quote(&format!("{name}:{v}"));
        writeln!(out, "  subgraph \"cluster_{i}\" {{").unwrap();
        writeln!(out, "    label={};", quote(name)).unwrap();
        for v in &g.nodes {
            writeln!(out, "    {} [label={}];", id(v), quote(v)).unwrap();
        }
        for (a, b) in &g.edges {
            writeln!(out, "    {} -- {};", id(a), id(b)).unwrap();
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
