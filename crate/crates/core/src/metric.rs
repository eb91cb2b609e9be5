//! Piecewise-flat metrics on simplicial complexes.
//!
//! A metric is a positive length per edge making every simplex a
//! nondegenerate Euclidean simplex. Nondegeneracy of a k-simplex is the
//! positive definiteness of the Gram matrix
//! `G_ij = (d(v0,vi)^2 + d(v0,vj)^2 - d(vi,vj)^2) / 2`
//! of its edge vectors, certified by a Cholesky factorization; the
//! factorization also provides an isometric embedding of each top simplex
//! into R^n used for barycentric gradients and frame computations.

use crate::complex::{ComplexError, SimplicialComplex};
use nalgebra::{Cholesky, DMatrix, DVector};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("edge ({0}, {1}) has no length")]
    MissingLength(usize, usize),
    #[error("length for unknown edge ({0}, {1})")]
    UnknownEdge(usize, usize),
    #[error("edge ({0}, {1}) has non-positive length {2}")]
    NonPositiveLength(usize, usize, f64),
    #[error("simplex {0:?} is degenerate: its Gram matrix is not positive definite")]
    DegenerateSimplex(Vec<usize>),
    #[error("simplex {0:?} is not a face of any top-dimensional simplex")]
    NotPure(Vec<usize>),
    #[error("vertex labels must be contiguous 0..{0}")]
    NonContiguousVertices(usize),
    #[error("coordinate list has {0} entries, complex has {1} vertices")]
    CoordinateCount(usize, usize),
    #[error("edge ({0}, {1}): coordinate distance {2} disagrees with given length {3}")]
    LengthMismatch(usize, usize, f64, f64),
}

/// Geometry of one top simplex derived from its metric.
#[derive(Debug, Clone)]
pub struct TopGeometry {
    /// Euclidean k-volume.
    pub volume: f64,
    /// Barycentric gradients: row i is grad(lambda_i), an (n+1) x n matrix.
    pub grads: DMatrix<f64>,
    /// Local isometric embedding: vertex 0 at the origin, vertex i at row
    /// i-1 of this lower-triangular factor.
    pub frame: DMatrix<f64>,
}

/// A simplicial complex with a piecewise-flat metric.
#[derive(Debug, Clone)]
pub struct MetricComplex {
    complex: SimplicialComplex,
    edge_lengths: Vec<f64>,
    edge_of_pair: HashMap<(usize, usize), usize>,
    vertex_coords: Option<Vec<DVector<f64>>>,
    geometry: Vec<TopGeometry>,
}

impl MetricComplex {
    /// Builds a metric complex from a map of sorted vertex pairs to edge
    /// lengths. Every edge needs a length; every simplex must be
    /// nondegenerate; every simplex must be a face of a top simplex.
    pub fn from_edge_lengths(
        complex: SimplicialComplex,
        lengths: &HashMap<(usize, usize), f64>,
    ) -> Result<Self, MetricError> {
        let edges = complex.simplices(1);
        let mut edge_of_pair = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            edge_of_pair.insert((e.vertices()[0], e.vertices()[1]), i);
        }
        for key in lengths.keys() {
            if !edge_of_pair.contains_key(key) {
                return Err(MetricError::UnknownEdge(key.0, key.1));
            }
        }
        let mut edge_lengths = vec![0.0; edges.len()];
        for (i, e) in edges.iter().enumerate() {
            let key = (e.vertices()[0], e.vertices()[1]);
            let len = *lengths
                .get(&key)
                .ok_or(MetricError::MissingLength(key.0, key.1))?;
            if !(len > 0.0) || !len.is_finite() {
                return Err(MetricError::NonPositiveLength(key.0, key.1, len));
            }
            edge_lengths[i] = len;
        }
        Self::finish(complex, edge_lengths, edge_of_pair, None)
    }

    /// Convenience: every edge has length 1.
    pub fn with_unit_lengths(complex: SimplicialComplex) -> Result<Self, MetricError> {
        let map: HashMap<(usize, usize), f64> = complex
            .simplices(1)
            .iter()
            .map(|e| ((e.vertices()[0], e.vertices()[1]), 1.0))
            .collect();
        Self::from_edge_lengths(complex, &map)
    }

    /// Builds a metric complex from vertex coordinates (vertex labels must
    /// be the contiguous range 0..nv); edge lengths are induced distances.
    pub fn from_vertex_coords(
        complex: SimplicialComplex,
        coords: Vec<DVector<f64>>,
    ) -> Result<Self, MetricError> {
        let nv = complex.size(0);
        if coords.len() != nv {
            return Err(MetricError::CoordinateCount(coords.len(), nv));
        }
        for (i, v) in complex.simplices(0).iter().enumerate() {
            if v.vertices()[0] != i {
                return Err(MetricError::NonContiguousVertices(nv));
            }
        }
        let edges = complex.simplices(1);
        let mut edge_of_pair = HashMap::new();
        let mut edge_lengths = vec![0.0; edges.len()];
        for (i, e) in edges.iter().enumerate() {
            let (a, b) = (e.vertices()[0], e.vertices()[1]);
            edge_of_pair.insert((a, b), i);
            edge_lengths[i] = (&coords[a] - &coords[b]).norm();
        }
        Self::finish(complex, edge_lengths, edge_of_pair, Some(coords))
    }

    fn finish(
        complex: SimplicialComplex,
        edge_lengths: Vec<f64>,
        edge_of_pair: HashMap<(usize, usize), usize>,
        vertex_coords: Option<Vec<DVector<f64>>>,
    ) -> Result<Self, MetricError> {
        let mut m = MetricComplex {
            complex,
            edge_lengths,
            edge_of_pair,
            vertex_coords,
            geometry: Vec::new(),
        };
        m.validate_consistency()?;
        m.validate_nondegenerate()?;
        m.validate_pure()?;
        m.geometry = (0..m.complex.size(m.complex.dimension()))
            .map(|t| m.build_geometry(t))
            .collect::<Result<_, _>>()?;
        Ok(m)
    }

    fn validate_consistency(&self) -> Result<(), MetricError> {
        let Some(coords) = &self.vertex_coords else {
            return Ok(());
        };
        for (e, &len) in self.complex.simplices(1).iter().zip(&self.edge_lengths) {
            let (a, b) = (e.vertices()[0], e.vertices()[1]);
            let dist = (&coords[a] - &coords[b]).norm();
            if (dist - len).abs() > 1e-9 * len.max(1.0) {
                return Err(MetricError::LengthMismatch(a, b, dist, len));
            }
        }
        Ok(())
    }

    /// Positive definiteness of every simplex's Gram matrix in every
    /// dimension, errors name the offending simplex.
    fn validate_nondegenerate(&self) -> Result<(), MetricError> {
        for p in 2..=self.complex.dimension() {
            for s in self.complex.simplices(p) {
                self.gram_of(s.vertices())
                    .and_then(|g| {
                        Cholesky::new(g).ok_or_else(|| {
                            MetricError::DegenerateSimplex(s.vertices().to_vec())
                        })
                    })
                    .map(|_| ())?;
            }
        }
        Ok(())
    }

    fn validate_pure(&self) -> Result<(), MetricError> {
        let n = self.complex.dimension();
        let mut covered: Vec<Vec<bool>> =
            (0..=n).map(|p| vec![false; self.complex.size(p)]).collect();
        for i in 0..self.complex.size(n) {
            covered[n][i] = true;
        }
        for p in (1..=n).rev() {
            let layer: Vec<_> = self.complex.simplices(p).to_vec();
            for (i, s) in layer.iter().enumerate() {
                if covered[p][i] {
                    for (face, _) in s.faces() {
                        let fi = self.complex.simplex_index(p - 1, &face).unwrap();
                        covered[p - 1][fi] = true;
                    }
                }
            }
        }
        for p in 0..=n {
            for (i, s) in self.complex.simplices(p).iter().enumerate() {
                if !covered[p][i] {
                    return Err(MetricError::NotPure(s.vertices().to_vec()));
                }
            }
        }
        Ok(())
    }

    fn build_geometry(&self, t: usize) -> Result<TopGeometry, MetricError> {
        let n = self.complex.dimension();
        let verts = self.complex.simplices(n)[t].vertices().to_vec();
        let gram = self.gram_of(&verts)?;
        let chol = Cholesky::new(gram)
            .ok_or_else(|| MetricError::DegenerateSimplex(verts.clone()))?;
        let l = chol.l();
        let volume = l.diagonal().iter().product::<f64>() / factorial(n);
        // Rows of (L^T)^{-1} are the gradients of lambda_1..lambda_n.
        let lt = l.transpose();
        let x = lt
            .solve_upper_triangular(&DMatrix::identity(n, n))
            .ok_or_else(|| MetricError::DegenerateSimplex(verts.clone()))?;
        let mut grads = DMatrix::zeros(n + 1, n);
        for i in 0..n {
            for j in 0..n {
                grads[(i + 1, j)] = x[(i, j)];
            }
        }
        for j in 0..n {
            let mut s = 0.0;
            for i in 1..=n {
                s += grads[(i, j)];
            }
            grads[(0, j)] = -s;
        }
        Ok(TopGeometry {
            volume,
            grads,
            frame: l,
        })
    }

    /// Gram matrix of the edge vectors v_i - v_0 of a simplex, from edge
    /// lengths alone.
    pub fn gram_of(&self, vertices: &[usize]) -> Result<DMatrix<f64>, MetricError> {
        let k = vertices.len() - 1;
        let mut g = DMatrix::zeros(k, k);
        for i in 1..=k {
            for j in i..=k {
                let d0i = self.edge_length(vertices[0], vertices[i])?;
                let d0j = self.edge_length(vertices[0], vertices[j])?;
                let dij = if i == j {
                    0.0
                } else {
                    self.edge_length(vertices[i], vertices[j])?
                };
                let v = 0.5 * (d0i * d0i + d0j * d0j - dij * dij);
                g[(i - 1, j - 1)] = v;
                g[(j - 1, i - 1)] = v;
            }
        }
        Ok(g)
    }

    pub fn edge_length(&self, a: usize, b: usize) -> Result<f64, MetricError> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edge_of_pair
            .get(&key)
            .map(|&i| self.edge_lengths[i])
            .ok_or(MetricError::MissingLength(key.0, key.1))
    }

    /// Euclidean volume of any stored simplex (any dimension). Vertices of
    /// a 0-simplex have volume 1 by convention.
    pub fn simplex_volume(&self, vertices: &[usize]) -> Result<f64, MetricError> {
        let k = vertices.len() - 1;
        if k == 0 {
            return Ok(1.0);
        }
        let gram = self.gram_of(vertices)?;
        let chol =
            Cholesky::new(gram).ok_or_else(|| MetricError::DegenerateSimplex(vertices.to_vec()))?;
        Ok(chol.l().diagonal().iter().product::<f64>() / factorial(k))
    }

    /// Total volume: sum of top-simplex volumes.
    pub fn total_volume(&self) -> f64 {
        self.geometry.iter().map(|g| g.volume).sum()
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn dimension(&self) -> usize {
        self.complex.dimension()
    }

    pub fn geometry(&self, t: usize) -> &TopGeometry {
        &self.geometry[t]
    }

    pub fn vertex_coords(&self) -> Option<&[DVector<f64>]> {
        self.vertex_coords.as_deref()
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_lengths
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}
