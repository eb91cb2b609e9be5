//! Mesh file formats: a JSON document for metric simplicial complexes and
//! a minimal OFF reader.
//!
//! The JSON schema is
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "vertices": [[x, y], ...],          // exclusive with edge_lengths
//!   "edge_lengths": {"0-1": 1.0, ...},  // keys "i-j" with i < j
//!   "simplices": {"0": [[0], ...], "1": [[0,1], ...], "2": [[0,1,2], ...]},
//!   "flags": {"closed_pseudomanifold": true, "orientable": true}
//! }
//! ```
//!
//! Lower-dimensional layers may be omitted; the complex fills them in as
//! faces. Emission is canonical: maps are sorted, simplices are sorted by
//! vertex tuple, numbers round-trip losslessly through serde_json.

use crate::complex::{ComplexError, ComplexFlags, SimplicialComplex};
use crate::metric::{MetricComplex, MetricError};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("mesh JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("exactly one of \"vertices\" and \"edge_lengths\" must be present")]
    MetricChoice,
    #[error("edge_lengths key {0:?} is not of the form \"i-j\" with i < j")]
    BadEdgeKey(String),
    #[error("edge_lengths[{0:?}] must be positive, got {1}")]
    BadEdgeLength(String, f64),
    #[error("simplices key {0:?} is not a dimension")]
    BadDimensionKey(String),
    #[error("simplices[{key:?}] entry {entry:?} needs {want} distinct vertices")]
    BadSimplexArity {
        key: String,
        entry: Vec<usize>,
        want: usize,
    },
    #[error("simplices[{key:?}] entry {entry:?} references vertex {vertex} but only {count} vertices are listed")]
    VertexOutOfRange {
        key: String,
        entry: Vec<usize>,
        vertex: usize,
        count: usize,
    },
    #[error("\"dimension\" is {declared} but the largest simplex layer is {found}")]
    DimensionMismatch { declared: usize, found: usize },
    #[error("OFF parse error at line {line}: {what}")]
    Off { line: usize, what: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshFlags {
    #[serde(default)]
    pub closed_pseudomanifold: bool,
    #[serde(default)]
    pub orientable: bool,
}

/// On-disk form of a metric simplicial complex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_lengths: Option<BTreeMap<String, f64>>,
    pub simplices: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub flags: MeshFlags,
}

fn parse_edge_key(key: &str) -> Result<(usize, usize), MeshError> {
    let bad = || MeshError::BadEdgeKey(key.to_string());
    let (a, b) = key.split_once('-').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a >= b {
        return Err(bad());
    }
    Ok((a, b))
}

impl MeshFile {
    pub fn from_json(text: &str) -> Result<Self, MeshError> {
        let mesh: MeshFile = serde_json::from_str(text)?;
        mesh.validate()?;
        Ok(mesh)
    }

    /// Canonical emission: struct field order, sorted map keys, sorted
    /// simplex lists. parse(emit(m)) == emit-normalized m.
    pub fn to_json_canonical(&self) -> String {
        let mut normalized = self.clone();
        for list in normalized.simplices.values_mut() {
            for entry in list.iter_mut() {
                entry.sort_unstable();
            }
            list.sort();
            list.dedup();
        }
        serde_json::to_string_pretty(&normalized).expect("mesh serialization cannot fail")
    }

    pub fn validate(&self) -> Result<(), MeshError> {
        match (&self.vertices, &self.edge_lengths) {
            (Some(_), Some(_)) | (None, None) => return Err(MeshError::MetricChoice),
            _ => {}
        }
        if let Some(lengths) = &self.edge_lengths {
            for (key, &len) in lengths {
                parse_edge_key(key)?;
                if !(len > 0.0) {
                    return Err(MeshError::BadEdgeLength(key.clone(), len));
                }
            }
        }
        let vertex_count = self.vertex_count();
        let mut found_dim = 0usize;
        for (key, list) in &self.simplices {
            let dim: usize = key
                .parse()
                .map_err(|_| MeshError::BadDimensionKey(key.clone()))?;
            found_dim = found_dim.max(dim);
            for entry in list {
                let mut sorted = entry.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != dim + 1 || entry.len() != dim + 1 {
                    return Err(MeshError::BadSimplexArity {
                        key: key.clone(),
                        entry: entry.clone(),
                        want: dim + 1,
                    });
                }
                if let Some(count) = vertex_count {
                    if let Some(&vertex) = entry.iter().find(|&&v| v >= count) {
                        return Err(MeshError::VertexOutOfRange {
                            key: key.clone(),
                            entry: entry.clone(),
                            vertex,
                            count,
                        });
                    }
                }
            }
        }
        if found_dim != self.dimension {
            return Err(MeshError::DimensionMismatch {
                declared: self.dimension,
                found: found_dim,
            });
        }
        Ok(())
    }

    fn vertex_count(&self) -> Option<usize> {
        self.vertices.as_ref().map(|v| v.len())
    }

    /// The combinatorial complex: the closure of every listed simplex,
    /// with the declared flags enforced.
    pub fn to_complex(&self) -> Result<SimplicialComplex, MeshError> {
        self.validate()?;
        let cells: Vec<Vec<usize>> = self
            .simplices
            .values()
            .flat_map(|list| list.iter().cloned())
            .collect();
        let complex = SimplicialComplex::from_top_cells(&cells)?;
        let complex = complex.with_flags(ComplexFlags {
            closed_pseudomanifold: self.flags.closed_pseudomanifold,
            orientable: self.flags.orientable,
        })?;
        Ok(complex)
    }

    /// The metric complex, from coordinates or explicit edge lengths.
    pub fn to_metric(&self) -> Result<MetricComplex, MeshError> {
        let complex = self.to_complex()?;
        if let Some(coords) = &self.vertices {
            let coords: Vec<DVector<f64>> = coords
                .iter()
                .map(|row| DVector::from_vec(row.clone()))
                .collect();
            return Ok(MetricComplex::from_vertex_coords(complex, coords)?);
        }
        let lengths = self.edge_lengths.as_ref().expect("validated");
        let mut map = HashMap::new();
        for (key, &len) in lengths {
            map.insert(parse_edge_key(key)?, len);
        }
        Ok(MetricComplex::from_edge_lengths(complex, &map)?)
    }

    /// Snapshot of a metric complex, suitable for canonical emission.
    pub fn from_metric(m: &MetricComplex) -> Self {
        let complex = m.complex();
        let mut simplices = BTreeMap::new();
        for dim in 0..=complex.dimension() {
            let list: Vec<Vec<usize>> = complex
                .simplices(dim)
                .iter()
                .map(|s| s.vertices().to_vec())
                .collect();
            simplices.insert(dim.to_string(), list);
        }
        let flags = complex.flags();
        let vertices = m.vertex_coords().map(|coords| {
            coords
                .iter()
                .map(|v| v.iter().cloned().collect())
                .collect()
        });
        let edge_lengths = if vertices.is_some() {
            None
        } else {
            Some(
                complex
                    .simplices(1)
                    .iter()
                    .map(|e| {
                        let (a, b) = (e.vertices()[0], e.vertices()[1]);
                        let len = m.edge_length(a, b).expect("edge of the complex");
                        (format!("{a}-{b}"), len)
                    })
                    .collect(),
            )
        };
        MeshFile {
            dimension: complex.dimension(),
            vertices,
            edge_lengths,
            simplices,
            flags: MeshFlags {
                closed_pseudomanifold: flags.closed_pseudomanifold,
                orientable: flags.orientable,
            },
        }
    }
}

/// Minimal OFF reader: header, "V F E" counts, V coordinate rows, F face
/// rows of the form "k v_1 ... v_k". Comments (#) and blank lines are
/// skipped. Faces become top simplices; the metric comes from the listed
/// coordinates.
pub fn parse_off(text: &str) -> Result<MeshFile, MeshError> {
    let fail = |line: usize, what: &str| MeshError::Off {
        line,
        what: what.to_string(),
    };
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = rows.next().ok_or_else(|| fail(0, "empty file"))?;
    if header != "OFF" {
        return Err(fail(line, "expected OFF header"));
    }
    let (line, counts) = rows.next().ok_or_else(|| fail(line, "missing counts row"))?;
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| fail(line, "counts must be integers")))
        .collect::<Result<_, _>>()?;
    if counts.len() != 3 {
        return Err(fail(line, "counts row must be \"vertices faces edges\""));
    }
    let (nv, nf) = (counts[0], counts[1]);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, row) = rows.next().ok_or_else(|| fail(line, "missing vertex row"))?;
        let coords: Vec<f64> = row
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| fail(line, "bad coordinate")))
            .collect::<Result<_, _>>()?;
        if coords.is_empty() {
            return Err(fail(line, "empty vertex row"));
        }
        vertices.push(coords);
    }
    let mut faces: Vec<Vec<usize>> = Vec::with_capacity(nf);
    let mut dimension = 0usize;
    for _ in 0..nf {
        let (line, row) = rows.next().ok_or_else(|| fail(line, "missing face row"))?;
        let nums: Vec<usize> = row
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| fail(line, "bad face index")))
            .collect::<Result<_, _>>()?;
        let (&k, verts) = nums
            .split_first()
            .ok_or_else(|| fail(line, "empty face row"))?;
        if verts.len() != k || k < 1 {
            return Err(fail(line, "face row arity does not match its count"));
        }
        if let Some(&v) = verts.iter().find(|&&v| v >= nv) {
            return Err(fail(line, &format!("face references vertex {v} out of range")));
        }
        dimension = dimension.max(k - 1);
        faces.push(verts.to_vec());
    }
    let mut simplices = BTreeMap::new();
    simplices.insert(dimension.to_string(), faces);
    let mesh = MeshFile {
        dimension,
        vertices: Some(vertices),
        edge_lengths: None,
        simplices,
        flags: MeshFlags::default(),
    };
    mesh.validate()?;
    Ok(mesh)
}
