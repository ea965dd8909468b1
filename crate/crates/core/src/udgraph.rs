//! Unit-distance graphs with edges declared by construction.
//!
//! Edges are never inferred from coordinates. A witness lists the pairs it
//! claims are at distance 1 and [`validate_geometry`] certifies the claim
//! within the graph's tolerance (exactly, for rational graphs).

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{distance_squared, slab_contains, slab_margin, Point, SlabSpec};
use crate::scalar::Scalar;

/// Default tolerance for "distance equals 1".
pub const DEFAULT_TOL: f64 = 1e-9;

/// Points within this distance of a slab face are flagged in reports.
pub const BOUNDARY_WARN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Real,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Real => "real",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitDistanceGraph {
    pub slab: SlabSpec,
    pub tol: f64,
    points: Vec<Point>,
    edges: Vec<(usize, usize)>,
    edge_set: HashSet<(usize, usize)>,
    labels: Vec<String>,
    /// Free-form provenance (tool version, run configuration).
    pub meta: BTreeMap<String, String>,
}

impl UnitDistanceGraph {
    pub fn new(slab: SlabSpec) -> Self {
        UnitDistanceGraph {
            slab,
            tol: DEFAULT_TOL,
            points: Vec::new(),
            edges: Vec::new(),
            edge_set: HashSet::new(),
            labels: Vec::new(),
            meta: BTreeMap::new(),
        }
    }

    /// Abstract graph with `n` vertices placed on a line; useful for solver
    /// fixtures where geometry is irrelevant.
    pub fn abstract_graph(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let slab = SlabSpec::new(1, 0, Scalar::int(1))?;
        let mut g = UnitDistanceGraph::new(slab);
        for i in 0..n {
            g.add_point(Point::ratios(&[(i as i64, 1)]), format!("v{i}"))?;
        }
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_point(&mut self, p: Point, label: impl Into<String>) -> Result<usize> {
        if p.dim() != self.slab.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.slab.dim(),
                found: p.dim(),
            });
        }
        self.points.push(p);
        self.labels.push(label.into());
        Ok(self.points.len() - 1)
    }

    /// Declare an edge. Duplicates are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        let n = self.points.len();
        if a >= n || b >= n {
            return Err(Error::MalformedGraph(format!("edge ({a}, {b}) out of range for {n} vertices")));
        }
        if a == b {
            return Err(Error::MalformedGraph(format!("self-loop at {a}")));
        }
        let key = (a.min(b), a.max(b));
        if self.edge_set.insert(key) {
            self.edges.push(key);
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_set.contains(&(a.min(b), a.max(b)))
    }

    pub fn mode(&self) -> Mode {
        if self.points.iter().all(Point::is_exact) {
            Mode::Exact
        } else {
            Mode::Real
        }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.points.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Canonical, sorted edge list.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
}

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Coloring { colors }
    }

    pub fn color_count(&self) -> usize {
        let mut seen: Vec<usize> = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub max_residual: f64,
    /// Every edge was checked in rational arithmetic and is exactly 1.
    pub exact_zero_residual: bool,
    pub worst_edge: Option<(usize, usize)>,
    pub out_of_slab: Vec<usize>,
    pub boundary_warnings: Vec<usize>,
    pub tol: f64,
    pub pass: bool,
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "validation: {}", if self.pass { "PASS" } else { "FAIL" })?;
        writeln!(f, "  tol: {:e}", self.tol)?;
        if self.exact_zero_residual {
            writeln!(f, "  max edge residual: 0 (exact)")?;
        } else {
            writeln!(f, "  max edge residual: {:e}", self.max_residual)?;
        }
        if let Some((a, b)) = self.worst_edge {
            writeln!(f, "  worst edge: ({a}, {b})")?;
        }
        writeln!(f, "  out-of-slab points: {}", self.out_of_slab.len())?;
        write!(f, "  boundary-proximity warnings: {}", self.boundary_warnings.len())
    }
}

/// Check every declared edge has length 1 within `g.tol` and every point
/// lies in the slab.
pub fn validate_geometry(g: &UnitDistanceGraph) -> ValidationReport {
    let mut max_residual = 0.0f64;
    let mut worst_edge = None;
    let mut all_exact = true;
    for &(a, b) in &g.edges {
        let d2 = distance_squared(&g.points[a], &g.points[b]).expect("dims checked on insert");
        let residual = match &d2 {
            Scalar::Exact(q) if q.is_one() => 0.0,
            other => {
                all_exact = false;
                (other.to_f64().sqrt() - 1.0).abs()
            }
        };
        if worst_edge.is_none() || residual > max_residual {
            max_residual = residual;
            worst_edge = Some((a, b));
        }
    }
    let mut out_of_slab = Vec::new();
    let mut boundary_warnings = Vec::new();
    for (i, p) in g.points.iter().enumerate() {
        if !slab_contains(&g.slab, p).expect("dims checked on insert") {
            out_of_slab.push(i);
        } else if slab_margin(&g.slab, &p.to_f64()) <= BOUNDARY_WARN {
            boundary_warnings.push(i);
        }
    }
    let exact_zero_residual = all_exact && g.mode() == Mode::Exact;
    let pass = max_residual <= g.tol && out_of_slab.is_empty();
    ValidationReport {
        max_residual,
        exact_zero_residual,
        worst_edge,
        out_of_slab,
        boundary_warnings,
        tol: g.tol,
        pass,
    }
}

/// True iff no declared edge is monochromatic.
pub fn validate_coloring(g: &UnitDistanceGraph, c: &Coloring) -> Result<bool> {
    if c.colors.len() != g.vertex_count() {
        return Err(Error::PartialColoring {
            assigned: c.colors.len(),
            vertices: g.vertex_count(),
        });
    }
    Ok(g.edges.iter().all(|&(a, b)| c.colors[a] != c.colors[b]))
}

fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(_) => Value::String(s.render()),
        Scalar::Real(x) => serde_json::json!(x),
    }
}

fn json_line(v: &Value) -> String {
    serde_json::to_string(v).expect("json values serialize")
}

/// Render the graph document. One point / edge per line keeps fixtures diffable.
pub fn graph_to_string(g: &UnitDistanceGraph) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let slab = serde_json::json!({
        "n": g.slab.n,
        "k": g.slab.k,
        "epsilon": g.slab.epsilon.render(),
    });
    let _ = writeln!(out, "  \"slab\": {},", json_line(&slab));
    let _ = writeln!(out, "  \"mode\": \"{}\",", g.mode().as_str());
    let _ = writeln!(out, "  \"tol\": {},", json_line(&serde_json::json!(g.tol)));
    out.push_str("  \"points\": [");
    for (i, p) in g.points.iter().enumerate() {
        let row: Vec<Value> = p.coords().iter().map(scalar_json).collect();
        let sep = if i + 1 == g.points.len() { "" } else { "," };
        let _ = write!(out, "\n    {}{sep}", json_line(&Value::Array(row)));
    }
    out.push_str(if g.points.is_empty() { "],\n" } else { "\n  ],\n" });
    out.push_str("  \"edges\": [");
    for (i, (a, b)) in g.edges.iter().enumerate() {
        let sep = if i + 1 == g.edges.len() { "" } else { "," };
        let _ = write!(out, "\n    [{a}, {b}]{sep}");
    }
    out.push_str(if g.edges.is_empty() { "],\n" } else { "\n  ],\n" });
    out.push_str("  \"labels\": [");
    for (i, l) in g.labels.iter().enumerate() {
        let sep = if i + 1 == g.labels.len() { "" } else { "," };
        let _ = write!(out, "\n    {}{sep}", json_line(&Value::String(l.clone())));
    }
    out.push_str(if g.labels.is_empty() { "],\n" } else { "\n  ],\n" });
    let meta: serde_json::Map<String, Value> = g
        .meta
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let _ = writeln!(out, "  \"meta\": {}", json_line(&Value::Object(meta)));
    out.push_str("}\n");
    out
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedGraph(msg.into())
}

fn parse_scalar_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => n
            .as_f64()
            .map(Scalar::Real)
            .ok_or_else(|| malformed(format!("bad number {n}"))),
        other => Err(malformed(format!("expected a coordinate, found {other}"))),
    }
}

pub fn graph_from_str(text: &str) -> Result<UnitDistanceGraph> {
    let doc: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let slab = doc.get("slab").ok_or_else(|| malformed("missing slab"))?;
    let field = |name: &str| {
        slab.get(name)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| malformed(format!("slab.{name} missing or not an integer")))
    };
    let epsilon = parse_scalar_json(slab.get("epsilon").ok_or_else(|| malformed("missing slab.epsilon"))?)?;
    let slab = SlabSpec::new(field("n")?, field("k")?, epsilon).map_err(|e| malformed(e.to_string()))?;
    let mut g = UnitDistanceGraph::new(slab);
    if let Some(tol) = doc.get("tol") {
        g.tol = tol.as_f64().ok_or_else(|| malformed("tol is not a number"))?;
    }
    let mode = doc.get("mode").and_then(Value::as_str).unwrap_or("real");
    if mode != "exact" && mode != "real" {
        return Err(malformed(format!("unknown mode {mode:?}")));
    }
    let points = doc
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing points"))?;
    let labels: Vec<String> = match doc.get("labels").and_then(Value::as_array) {
        Some(ls) => ls
            .iter()
            .map(|l| l.as_str().map(str::to_owned).ok_or_else(|| malformed("label is not a string")))
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    if !labels.is_empty() && labels.len() != points.len() {
        return Err(malformed("labels and points differ in length"));
    }
    for (i, row) in points.iter().enumerate() {
        let coords = row
            .as_array()
            .ok_or_else(|| malformed(format!("point {i} is not an array")))?
            .iter()
            .map(parse_scalar_json)
            .collect::<Result<Vec<_>>>()?;
        let label = labels.get(i).cloned().unwrap_or_default();
        g.add_point(Point::new(coords), label).map_err(|e| match e {
            Error::DimensionMismatch { expected, found } => {
                malformed(format!("point {i} has dimension {found}, slab needs {expected}"))
            }
            other => other,
        })?;
    }
    if mode == "exact" && g.mode() != Mode::Exact {
        return Err(malformed("mode is exact but some coordinates are real"));
    }
    let edges = doc
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing edges"))?;
    for e in edges {
        let pair = e
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| malformed(format!("bad edge {e}")))?;
        let a = pair[0].as_u64().ok_or_else(|| malformed(format!("bad edge {e}")))? as usize;
        let b = pair[1].as_u64().ok_or_else(|| malformed(format!("bad edge {e}")))? as usize;
        g.add_edge(a, b)?;
    }
    if let Some(meta) = doc.get("meta").and_then(Value::as_object) {
        for (k, v) in meta {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            g.meta.insert(k.clone(), v);
        }
    }
    Ok(g)
}

pub fn save_graph(g: &UnitDistanceGraph, path: &Path) -> Result<()> {
    std::fs::write(path, graph_to_string(g)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_graph(path: &Path) -> Result<UnitDistanceGraph> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    graph_from_str(&text)
}

/// DIMACS `p edge` text: 1-based, lexicographically sorted, LF endings.
/// `comments` become leading `c` lines.
pub fn to_dimacs(g: &UnitDistanceGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(out, "p edge {} {}", g.vertex_count(), g.edge_count());
    for (a, b) in g.sorted_edges() {
        let _ = writeln!(out, "e {} {}", a + 1, b + 1);
    }
    out
}

pub fn export_dimacs(g: &UnitDistanceGraph, path: &Path) -> Result<()> {
    std::fs::write(path, to_dimacs(g, &[])).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_graph(points: &[f64], edges: &[(usize, usize)]) -> UnitDistanceGraph {
        let mut g = UnitDistanceGraph::new(SlabSpec::new(1, 0, Scalar::int(1)).unwrap());
        for &x in points {
            g.add_point(Point::real(&[x]), "").unwrap();
        }
        for &(a, b) in edges {
            g.add_edge(a, b).unwrap();
        }
        g
    }

    #[test]
    fn validation_examples() {
        let r = validate_geometry(&line_graph(&[0.0, 1.0], &[(0, 1)]));
        assert!(r.pass);
        assert_eq!(r.max_residual, 0.0);
        let r = validate_geometry(&line_graph(&[0.0, 1.001], &[(0, 1)]));
        assert!(!r.pass);
        assert!((r.max_residual - 0.001).abs() < 1e-12);
    }

    #[test]
    fn out_of_slab_points_fail() {
        let slab = SlabSpec::new(1, 1, Scalar::ratio(1, 2)).unwrap();
        let mut g = UnitDistanceGraph::new(slab);
        g.add_point(Point::ratios(&[(0, 1), (0, 1)]), "a").unwrap();
        g.add_point(Point::ratios(&[(0, 1), (3, 4)]), "b").unwrap();
        let r = validate_geometry(&g);
        assert!(!r.pass);
        assert_eq!(r.out_of_slab, vec![1]);
        assert_eq!(r.boundary_warnings, vec![0]);
    }

    #[test]
    fn coloring_examples() {
        let edge = UnitDistanceGraph::abstract_graph(2, &[(0, 1)]).unwrap();
        assert!(validate_coloring(&edge, &Coloring::new(vec![0, 1])).unwrap());
        assert!(!validate_coloring(&edge, &Coloring::new(vec![0, 0])).unwrap());
        assert!(validate_coloring(&edge, &Coloring::new(vec![0])).is_err());
        let c5 = UnitDistanceGraph::abstract_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(validate_coloring(&c5, &Coloring::new(vec![0, 1, 0, 1, 2])).unwrap());
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = line_graph(&[0.0, 1.0], &[]);
        assert!(g.add_edge(0, 2).is_err());
        assert!(g.add_edge(1, 1).is_err());
        g.add_edge(1, 0).unwrap();
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn dimacs_examples() {
        let tri = UnitDistanceGraph::abstract_graph(3, &[(2, 1), (0, 2), (0, 1)]).unwrap();
        assert_eq!(to_dimacs(&tri, &[]), "p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n");
        let empty = UnitDistanceGraph::abstract_graph(4, &[]).unwrap();
        assert_eq!(to_dimacs(&empty, &[]), "p edge 4 0\n");
        let with_comment = to_dimacs(&tri, &["hello".into()]);
        assert!(with_comment.starts_with("c hello\np edge 3 3\n"));
    }

    #[test]
    fn rational_coordinates_survive_round_trip() {
        let slab = SlabSpec::new(1, 3, Scalar::ratio(2, 5)).unwrap();
        let mut g = UnitDistanceGraph::new(slab);
        g.add_point(Point::ratios(&[(0, 1); 4]), "A0").unwrap();
        g.add_point(Point::ratios(&[(13, 14), (3, 14), (3, 14), (3, 14)]), "A1").unwrap();
        g.add_edge(0, 1).unwrap();
        let text = graph_to_string(&g);
        assert!(text.contains("\"13/14\""));
        let back = graph_from_str(&text).unwrap();
        assert_eq!(back, g);
        assert!(validate_geometry(&back).exact_zero_residual);
    }

    #[test]
    fn load_rejects_malformed_documents() {
        let ok = r#"{"slab":{"n":1,"k":0,"epsilon":"1"},"mode":"real","tol":1e-9,
            "points":[[0.0],[1.0]],"edges":[[0,1]]}"#;
        assert!(graph_from_str(ok).is_ok());
        let out_of_range = ok.replace("[[0,1]]", "[[0,5]]");
        assert!(matches!(graph_from_str(&out_of_range), Err(Error::MalformedGraph(_))));
        let bad_dim = ok.replace("[[0.0],[1.0]]", "[[0.0],[1.0, 2.0]]");
        assert!(matches!(graph_from_str(&bad_dim), Err(Error::MalformedGraph(_))));
        assert!(graph_from_str("{not json").is_err());
    }
}
