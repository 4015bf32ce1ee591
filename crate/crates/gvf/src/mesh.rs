//! Triangulated 2-manifolds: construction, OFF/OBJ ingestion, writers,
//! and the derived vertex and cell (face-adjacency) graphs.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{DomainGraph, GraphKind};

/// A triangulated surface. Faces are triangles over 3D vertex positions;
/// both the vertex graph (edges of the triangulation) and the cell graph
/// (faces adjacent iff they share a full edge) are built and validated
/// at construction and are immutable afterwards.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
    edges: Vec<(usize, usize)>,
    vertex_graph: DomainGraph,
    cell_graph: DomainGraph,
}

impl TriMesh {
    pub fn new(vertices: Vec<[f64; 3]>, faces: Vec<[usize; 3]>) -> Result<Self> {
        if vertices.is_empty() || faces.is_empty() {
            return Err(Error::MeshParse {
                line: 0,
                message: "mesh needs at least one vertex and one face".into(),
            });
        }
        let vertex_count = vertices.len();
        for (i, f) in faces.iter().enumerate() {
            for &v in f {
                if v >= vertex_count {
                    return Err(Error::FaceVertexOutOfRange { face: i, vertex: v, vertex_count });
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::DegenerateFace { face: i });
            }
        }

        // edge -> incident faces; at most two per edge (manifold condition)
        let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, f) in faces.iter().enumerate() {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                let key = (a.min(b), a.max(b));
                let incident = edge_faces.entry(key).or_default();
                incident.push(i);
                if incident.len() > 2 {
                    return Err(Error::NonManifoldEdge { a: key.0, b: key.1, count: incident.len() });
                }
            }
        }

        let edges: Vec<(usize, usize)> = edge_faces.keys().copied().collect();
        let vertex_graph =
            DomainGraph::from_edges_kind(vertex_count, &edges, GraphKind::MeshVertex)?;

        let mut cell_edges = Vec::new();
        for incident in edge_faces.values() {
            if let [a, b] = incident[..] {
                cell_edges.push((a.min(b), a.max(b)));
            }
        }
        let cell_graph =
            DomainGraph::from_edges_kind(faces.len(), &cell_edges, GraphKind::MeshCell)?;

        Ok(TriMesh { vertices, faces, edges, vertex_graph, cell_graph })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Unique undirected edges, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The triangulation's 1-skeleton (point space).
    pub fn vertex_graph(&self) -> &DomainGraph {
        &self.vertex_graph
    }

    /// The dual view: one node per face, adjacent iff two faces share an
    /// edge (cell space).
    pub fn cell_graph(&self) -> &DomainGraph {
        &self.cell_graph
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_float(token: &str, line: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::MeshParse { line, message: format!("expected a number, got `{token}`") })
}

fn parse_count(token: &str, line: usize) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| Error::MeshParse { line, message: format!("expected a count, got `{token}`") })
}

/// Parses an OFF document. The counts may share the header line
/// (`OFF 8 12 0`) or follow on their own line; `#` comments and blank
/// lines are ignored, and trailing per-line color fields are tolerated.
pub fn load_off(bytes: &[u8]) -> Result<TriMesh> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| Error::MeshParse { line: 0, message: "input is not UTF-8".into() })?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_no, header) = lines
        .next()
        .ok_or(Error::MeshParse { line: 0, message: "empty OFF document".into() })?;
    let mut header_tokens = header.split_whitespace();
    if header_tokens.next() != Some("OFF") {
        return Err(Error::MeshParse { line: header_no, message: "expected OFF header".into() });
    }
    let rest: Vec<&str> = header_tokens.collect();
    let (counts_no, counts): (usize, Vec<&str>) = if rest.is_empty() {
        let (no, l) = lines
            .next()
            .ok_or(Error::MeshParse { line: header_no, message: "missing counts line".into() })?;
        (no, l.split_whitespace().collect())
    } else {
        (header_no, rest)
    };
    if counts.len() < 2 {
        return Err(Error::MeshParse {
            line: counts_no,
            message: "counts line needs vertex and face counts".into(),
        });
    }
    let vertex_count = parse_count(counts[0], counts_no)?;
    let face_count = parse_count(counts[1], counts_no)?;

    let mut vertices = Vec::with_capacity(vertex_count);
    for _ in 0..vertex_count {
        let (no, l) = lines
            .next()
            .ok_or(Error::MeshParse { line: counts_no, message: "missing vertex line".into() })?;
        let tokens: Vec<&str> = l.split_whitespace().collect();
        if tokens.len() < 3 {
            return Err(Error::MeshParse { line: no, message: "vertex line needs x y z".into() });
        }
        vertices.push([
            parse_float(tokens[0], no)?,
            parse_float(tokens[1], no)?,
            parse_float(tokens[2], no)?,
        ]);
    }

    let mut faces = Vec::with_capacity(face_count);
    for _ in 0..face_count {
        let (no, l) = lines
            .next()
            .ok_or(Error::MeshParse { line: counts_no, message: "missing face line".into() })?;
        let tokens: Vec<&str> = l.split_whitespace().collect();
        let arity = parse_count(tokens[0], no)?;
        if arity != 3 {
            return Err(Error::MeshParse {
                line: no,
                message: format!("face arity {arity}: only triangles are supported"),
            });
        }
        if tokens.len() < 4 {
            return Err(Error::MeshParse { line: no, message: "face line needs 3 indices".into() });
        }
        faces.push([
            parse_count(tokens[1], no)?,
            parse_count(tokens[2], no)?,
            parse_count(tokens[3], no)?,
        ]);
    }

    TriMesh::new(vertices, faces)
}

/// Parses a Wavefront OBJ document: `v` and `f` records, 1-based indices
/// (an `a/b/c` reference keeps its vertex part), faces with more than
/// three corners fan-triangulated. Other record types are skipped.
pub fn load_obj(bytes: &[u8]) -> Result<TriMesh> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| Error::MeshParse { line: 0, message: "input is not UTF-8".into() })?;
    let mut vertices: Vec<[f64; 3]> = Vec::new();
    let mut raw_faces: Vec<(usize, Vec<usize>)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let coords: Vec<&str> = tokens.collect();
                if coords.len() < 3 {
                    return Err(Error::MeshParse { line: no, message: "v record needs x y z".into() });
                }
                vertices.push([
                    parse_float(coords[0], no)?,
                    parse_float(coords[1], no)?,
                    parse_float(coords[2], no)?,
                ]);
            }
            Some("f") => {
                let mut corner_ids = Vec::new();
                for token in tokens {
                    let vertex_part = token.split('/').next().unwrap_or("");
                    let idx = vertex_part.parse::<i64>().map_err(|_| Error::MeshParse {
                        line: no,
                        message: format!("bad face reference `{token}`"),
                    })?;
                    if idx < 1 {
                        return Err(Error::MeshParse {
                            line: no,
                            message: format!("face reference {idx} must be positive (1-based)"),
                        });
                    }
                    corner_ids.push(idx as usize - 1);
                }
                if corner_ids.len() < 3 {
                    return Err(Error::MeshParse {
                        line: no,
                        message: "f record needs at least 3 corners".into(),
                    });
                }
                raw_faces.push((no, corner_ids));
            }
            _ => {} // vn, vt, o, g, s, usemtl, ... are irrelevant here
        }
    }

    let mut faces = Vec::new();
    for (no, corners) in raw_faces {
        for &v in &corners {
            if v >= vertices.len() {
                return Err(Error::MeshParse {
                    line: no,
                    message: format!("face references vertex {} of {}", v + 1, vertices.len()),
                });
            }
        }
        for k in 1..corners.len() - 1 {
            faces.push([corners[0], corners[k], corners[k + 1]]);
        }
    }
    TriMesh::new(vertices, faces)
}

/// Renders a mesh as an OFF document. Positions use the shortest decimal
/// form that parses back to the same `f64`, so a write/load cycle is
/// exact.
pub fn off_string(mesh: &TriMesh) -> String {
    let mut out = String::new();
    out.push_str("OFF\n");
    out.push_str(&format!(
        "{} {} {}\n",
        mesh.vertex_count(),
        mesh.face_count(),
        mesh.edges().len()
    ));
    for v in mesh.vertices() {
        out.push_str(&format!("{} {} {}\n", v[0], v[1], v[2]));
    }
    for f in mesh.faces() {
        out.push_str(&format!("3 {} {} {}\n", f[0], f[1], f[2]));
    }
    out
}

pub fn write_off(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, off_string(mesh))?;
    Ok(())
}

/// Renders an OBJ document with per-vertex grayscale colors: each `v`
/// line carries three equal components from min-max normalization of
/// `values` (0.5 everywhere when the field is constant).
pub fn obj_gray_string(mesh: &TriMesh, values: &[f64]) -> Result<String> {
    if values.len() != mesh.vertex_count() {
        return Err(Error::FieldLengthMismatch {
            expected: mesh.vertex_count(),
            actual: values.len(),
        });
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = String::new();
    for (v, &x) in mesh.vertices().iter().zip(values) {
        let gray = if hi > lo { (x - lo) / (hi - lo) } else { 0.5 };
        out.push_str(&format!("v {} {} {} {gray} {gray} {gray}\n", v[0], v[1], v[2]));
    }
    for f in mesh.faces() {
        out.push_str(&format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1));
    }
    Ok(out)
}

pub fn write_obj_gray(mesh: &TriMesh, values: &[f64], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, obj_gray_string(mesh, values)?)?;
    Ok(())
}

/// Sidecar CSV of per-element values (`id,value`), full precision.
pub fn values_csv_string(values: &[f64]) -> String {
    let mut out = String::from("id,value\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

pub fn write_values_csv(values: &[f64], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, values_csv_string(values))?;
    Ok(())
}

#[cfg(test)]
pub(crate) fn tetrahedron() -> TriMesh {
    TriMesh::new(
        vec![[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]],
        vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]],
    )
    .unwrap()
}
