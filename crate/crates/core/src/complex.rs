//! Oriented simplicial complexes and their boundary operators.
//!
//! A simplex is stored as a strictly increasing vertex tuple together with
//! an orientation sign: `([v0 < v1 < ... < vp], s)` denotes `s` times the
//! simplex oriented by the sorted order. Input tuples in arbitrary order
//! are normalized by sorting and folding the permutation parity into the
//! sign. The boundary of a sorted simplex drops vertex `i` with sign
//! `(-1)^i`, so chain groups are free modules over the stored simplices
//! and boundary matrices are integer matrices.

use nalgebra::{DMatrix, DVector};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("simplex {0:?} has a repeated vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("simplex {0:?} is listed twice in dimension {1}")]
    DuplicateSimplex(Vec<usize>, usize),
    #[error("face {face:?} of simplex {parent:?} is missing from dimension {dim}")]
    MissingFace {
        face: Vec<usize>,
        parent: Vec<usize>,
        dim: usize,
    },
    #[error("dimension {0} exceeds the declared top dimension {1}")]
    DimensionOverflow(usize, usize),
    #[error("complex flagged closed pseudomanifold but {simplex:?} has {count} top cofaces")]
    NotPseudomanifold { simplex: Vec<usize>, count: usize },
    #[error("complex is not orientable: orientation propagation hits a contradiction at {0:?}")]
    NonOrientable(Vec<usize>),
    #[error("operation requires the closed_pseudomanifold flag")]
    NotFlaggedClosed,
    #[error("operation requires the orientable flag")]
    NotFlaggedOrientable,
    #[error("chain degree {0} does not match expected degree {1}")]
    DegreeMismatch(usize, usize),
    #[error("coefficient vector has length {0}, complex has {1} simplices in that degree")]
    LengthMismatch(usize, usize),
    #[error("complex has no simplices in dimension {0}")]
    EmptyDimension(usize),
}

/// An oriented simplex: sorted vertex tuple plus orientation sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Simplex {
    vertices: Vec<usize>,
    sign: i8,
}

impl Simplex {
    /// Builds a simplex from vertices in arbitrary order. Sorting parity is
    /// folded into the orientation sign.
    pub fn new(vertices: &[usize]) -> Result<Self, ComplexError> {
        let (sorted, sign) = sort_with_parity(vertices)?;
        Ok(Simplex {
            vertices: sorted,
            sign,
        })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// The sorted faces obtained by dropping one vertex, paired with the
    /// alternating sign `(-1)^i` of the drop position.
    pub fn faces(&self) -> impl Iterator<Item = (Vec<usize>, i8)> + '_ {
        (0..self.vertices.len()).map(move |i| {
            let mut face = self.vertices.clone();
            face.remove(i);
            (face, if i % 2 == 0 { 1 } else { -1 })
        })
    }
}

fn sort_with_parity(vertices: &[usize]) -> Result<(Vec<usize>, i8), ComplexError> {
    let mut v = vertices.to_vec();
    // Insertion sort, counting inversions; tuples are tiny.
    let mut swaps = 0usize;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return Err(ComplexError::RepeatedVertex(vertices.to_vec()));
        }
    }
    Ok((v, if swaps % 2 == 0 { 1 } else { -1 }))
}

/// Structural flags carried by a complex.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ComplexFlags {
    pub closed_pseudomanifold: bool,
    pub orientable: bool,
}

/// A finite simplicial complex with oriented simplices in every dimension
/// up to `dimension`. Every face of a listed simplex is listed.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    dimension: usize,
    layers: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    flags: ComplexFlags,
}

impl SimplicialComplex {
    /// Builds a complex from explicit per-dimension simplex lists,
    /// validating closure under taking faces and the absence of
    /// duplicates. Lists may be in any order; storage is sorted.
    pub fn from_layers(layers: Vec<Vec<Simplex>>) -> Result<Self, ComplexError> {
        if layers.is_empty() || layers.iter().all(|l| l.is_empty()) {
            return Err(ComplexError::EmptyDimension(0));
        }
        let dimension = layers.len() - 1;
        let mut sorted_layers: Vec<Vec<Simplex>> = Vec::with_capacity(layers.len());
        for (p, layer) in layers.into_iter().enumerate() {
            let mut layer = layer;
            for s in &layer {
                if s.dim() != p {
                    return Err(ComplexError::DimensionOverflow(s.dim(), p));
                }
            }
            layer.sort_by(|a, b| a.vertices.cmp(&b.vertices));
            for w in layer.windows(2) {
                if w[0].vertices == w[1].vertices {
                    return Err(ComplexError::DuplicateSimplex(w[0].vertices.clone(), p));
                }
            }
            sorted_layers.push(layer);
        }
        let index: Vec<HashMap<Vec<usize>, usize>> = sorted_layers
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.vertices.clone(), i))
                    .collect()
            })
            .collect();
        // Closure check.
        for p in 1..=dimension {
            for s in &sorted_layers[p] {
                for (face, _) in s.faces() {
                    if !index[p - 1].contains_key(&face) {
                        return Err(ComplexError::MissingFace {
                            face,
                            parent: s.vertices.clone(),
                            dim: p - 1,
                        });
                    }
                }
            }
        }
        Ok(SimplicialComplex {
            dimension,
            layers: sorted_layers,
            index,
            flags: ComplexFlags::default(),
        })
    }

    /// Builds a complex from its maximal cells, generating all faces with
    /// positive orientation. Cells of mixed dimension are allowed.
    pub fn from_top_cells(cells: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let mut dimension = 0;
        for c in cells {
            if c.is_empty() {
                return Err(ComplexError::EmptyDimension(0));
            }
            dimension = dimension.max(c.len() - 1);
        }
        let mut seen: Vec<HashMap<Vec<usize>, ()>> = vec![HashMap::new(); dimension + 1];
        let mut layers: Vec<Vec<Simplex>> = vec![Vec::new(); dimension + 1];
        let mut stack: Vec<Simplex> = Vec::new();
        for c in cells {
            stack.push(Simplex::new(c)?);
        }
        while let Some(s) = stack.pop() {
            let p = s.dim();
            if seen[p].contains_key(s.vertices()) {
                continue;
            }
            seen[p].insert(s.vertices().to_vec(), ());
            if p > 0 {
                for (face, _) in s.faces() {
                    if !seen[p - 1].contains_key(&face) {
                        stack.push(Simplex {
                            vertices: face,
                            sign: 1,
                        });
                    }
                }
            }
            // Keep the caller's orientation for the cells themselves but
            // store generated faces positively.
            layers[p].push(s);
        }
        SimplicialComplex::from_layers(layers)
    }

    /// Sets structural flags after validating them: `closed_pseudomanifold`
    /// checks that every (n-1)-simplex has exactly two top cofaces, and
    /// `orientable` checks that a coherent orientation exists.
    pub fn with_flags(mut self, flags: ComplexFlags) -> Result<Self, ComplexError> {
        if flags.closed_pseudomanifold {
            self.check_closed_pseudomanifold()?;
        }
        self.flags = ComplexFlags {
            closed_pseudomanifold: flags.closed_pseudomanifold,
            orientable: false,
        };
        if flags.orientable {
            self.propagate_orientation()?;
            self.flags.orientable = true;
        }
        Ok(self)
    }

    pub fn flags(&self) -> ComplexFlags {
        self.flags
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of p-simplices; zero outside `0..=dimension`.
    pub fn size(&self, p: usize) -> usize {
        if p <= self.dimension {
            self.layers[p].len()
        } else {
            0
        }
    }

    pub fn simplices(&self, p: usize) -> &[Simplex] {
        &self.layers[p]
    }

    pub fn simplex_index(&self, p: usize, sorted_vertices: &[usize]) -> Option<usize> {
        self.index[p].get(sorted_vertices).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.layers[0].len()
    }

    /// Largest vertex label plus one (labels need not be contiguous).
    pub fn vertex_label_bound(&self) -> usize {
        self.layers[0]
            .iter()
            .map(|s| s.vertices[0] + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for (p, layer) in self.layers.iter().enumerate() {
            if p % 2 == 0 {
                chi += layer.len() as i64;
            } else {
                chi -= layer.len() as i64;
            }
        }
        chi
    }

    /// The boundary operator from p-chains to (p-1)-chains as a dense
    /// integer matrix: rows are (p-1)-simplices, columns p-simplices.
    /// For p = 0 the matrix has zero rows; for p > dimension zero columns.
    pub fn boundary_matrix(&self, p: usize) -> DMatrix<i64> {
        if p == 0 || p > self.dimension {
            let cols = if p <= self.dimension { self.size(p) } else { 0 };
            return DMatrix::zeros(if p == 0 { 0 } else { self.size(p - 1) }, cols);
        }
        let rows = self.size(p - 1);
        let cols = self.size(p);
        let mut m = DMatrix::zeros(rows, cols);
        for (j, s) in self.layers[p].iter().enumerate() {
            for (face, drop_sign) in s.faces() {
                let i = self.index[p - 1][&face];
                let face_sign = self.layers[p - 1][i].sign;
                m[(i, j)] = (s.sign * face_sign * drop_sign) as i64;
            }
        }
        m
    }

    /// Coboundary from p-cochains to (p+1)-cochains (transpose of the
    /// boundary one degree up).
    pub fn coboundary_matrix(&self, p: usize) -> DMatrix<i64> {
        self.boundary_matrix(p + 1).transpose()
    }

    fn check_closed_pseudomanifold(&self) -> Result<(), ComplexError> {
        let n = self.dimension;
        if n == 0 {
            return Err(ComplexError::EmptyDimension(0));
        }
        let mut coface_count = vec![0usize; self.size(n - 1)];
        for s in &self.layers[n] {
            for (face, _) in s.faces() {
                coface_count[self.index[n - 1][&face]] += 1;
            }
        }
        // Every simplex must sit under some top simplex (purity), checked
        // via a downward sweep.
        let mut covered: Vec<Vec<bool>> = (0..=n).map(|p| vec![false; self.size(p)]).collect();
        for i in 0..self.size(n) {
            covered[n][i] = true;
        }
        for p in (1..=n).rev() {
            for (i, s) in self.layers[p].iter().enumerate() {
                if covered[p][i] {
                    for (face, _) in s.faces() {
                        covered[p - 1][self.index[p - 1][&face]] = true;
                    }
                }
            }
        }
        for p in 0..=n {
            for (i, s) in self.layers[p].iter().enumerate() {
                if !covered[p][i] {
                    return Err(ComplexError::NotPseudomanifold {
                        simplex: s.vertices.clone(),
                        count: 0,
                    });
                }
            }
        }
        for (i, c) in coface_count.iter().enumerate() {
            if *c != 2 {
                return Err(ComplexError::NotPseudomanifold {
                    simplex: self.layers[n - 1][i].vertices.clone(),
                    count: *c,
                });
            }
        }
        Ok(())
    }

    /// Finds coefficients o_T in {-1, +1} making `sum o_T T` a cycle, by
    /// propagation across shared facets. Fails on non-orientable input.
    fn propagate_orientation(&self) -> Result<Vec<i8>, ComplexError> {
        let n = self.dimension;
        let tops = self.size(n);
        // facet -> incident (top, incidence sign) pairs
        let mut incidence: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.size(n - 1)];
        let mut facets_of: Vec<Vec<usize>> = vec![Vec::new(); tops];
        for (j, s) in self.layers[n].iter().enumerate() {
            for (face, drop_sign) in s.faces() {
                let i = self.index[n - 1][&face];
                let face_sign = self.layers[n - 1][i].sign;
                incidence[i].push((j, (s.sign * face_sign * drop_sign) as i64));
                facets_of[j].push(i);
            }
        }
        let mut orient: Vec<i8> = vec![0; tops];
        for start in 0..tops {
            if orient[start] != 0 {
                continue;
            }
            orient[start] = 1;
            let mut queue = vec![start];
            while let Some(t) = queue.pop() {
                for &i in &facets_of[t] {
                    if incidence[i].len() != 2 {
                        continue;
                    }
                    let (a, sa) = incidence[i][0];
                    let (b, sb) = incidence[i][1];
                    let (other, s_this, s_other) = if a == t { (b, sa, sb) } else { (a, sb, sa) };
                    // Cancellation requires s_this * o_this + s_other * o_other = 0.
                    let needed = (-(s_this * orient[t] as i64) / s_other) as i8;
                    if orient[other] == 0 {
                        orient[other] = needed;
                        queue.push(other);
                    } else if orient[other] != needed {
                        return Err(ComplexError::NonOrientable(
                            self.layers[n][other].vertices.clone(),
                        ));
                    }
                }
            }
        }
        Ok(orient)
    }

    /// The fundamental class of a closed oriented pseudomanifold: the
    /// top-dimensional cycle with coefficients +-1 on every top simplex.
    pub fn fundamental_class(&self) -> Result<Chain, ComplexError> {
        if !self.flags.closed_pseudomanifold {
            return Err(ComplexError::NotFlaggedClosed);
        }
        if !self.flags.orientable {
            return Err(ComplexError::NotFlaggedOrientable);
        }
        let orient = self.propagate_orientation()?;
        let n = self.dimension;
        let coeffs = DVector::from_iterator(orient.len(), orient.iter().map(|&s| s as f64));
        let chain = Chain::new(self, n, coeffs)?;
        // Invariant: the propagated chain is a cycle in exact integers.
        let bd = self.boundary_matrix(n);
        for i in 0..bd.nrows() {
            let mut acc = 0i64;
            for j in 0..bd.ncols() {
                acc += bd[(i, j)] * orient[j] as i64;
            }
            if acc != 0 {
                return Err(ComplexError::NonOrientable(
                    self.layers[n - 1][i].vertices.clone(),
                ));
            }
        }
        Ok(chain)
    }

    /// Vertex connected components via edges; returns a component id per
    /// stored vertex index.
    pub fn vertex_components(&self) -> Vec<usize> {
        let nv = self.size(0);
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        if self.dimension >= 1 {
            for e in &self.layers[1] {
                let a = self.index[0][&vec![e.vertices[0]]];
                let b = self.index[0][&vec![e.vertices[1]]];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let mut label = HashMap::new();
        let mut out = vec![0usize; nv];
        for i in 0..nv {
            let r = find(&mut parent, i);
            let next = label.len();
            out[i] = *label.entry(r).or_insert(next);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_components().iter().all(|&c| c == 0)
    }
}

/// A simplicial p-chain with real coefficients over the stored basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    degree: usize,
    coefficients: DVector<f64>,
}

impl Chain {
    pub fn new(
        complex: &SimplicialComplex,
        degree: usize,
        coefficients: DVector<f64>,
    ) -> Result<Self, ComplexError> {
        if degree > complex.dimension() {
            return Err(ComplexError::DegreeMismatch(degree, complex.dimension()));
        }
        if coefficients.len() != complex.size(degree) {
            return Err(ComplexError::LengthMismatch(
                coefficients.len(),
                complex.size(degree),
            ));
        }
        Ok(Chain {
            degree,
            coefficients,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &DVector<f64> {
        &self.coefficients
    }

    pub fn l1(&self) -> f64 {
        self.coefficients.iter().map(|c| c.abs()).sum()
    }

    /// Applies the boundary operator, returning a (p-1)-chain.
    pub fn boundary(&self, complex: &SimplicialComplex) -> Result<Chain, ComplexError> {
        if self.degree == 0 {
            return Err(ComplexError::DegreeMismatch(0, 0));
        }
        let bd = complex.boundary_matrix(self.degree);
        let m = bd.map(|x| x as f64) * &self.coefficients;
        Chain::new(complex, self.degree - 1, m)
    }

    pub fn is_cycle(&self, complex: &SimplicialComplex, tol: f64) -> bool {
        if self.degree == 0 {
            return true;
        }
        match self.boundary(complex) {
            Ok(b) => b.coefficients.amax() <= tol,
            Err(_) => false,
        }
    }
}

/// A simplicial p-cochain with real values on the stored basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    degree: usize,
    values: DVector<f64>,
}

impl Cochain {
    pub fn new(
        complex: &SimplicialComplex,
        degree: usize,
        values: DVector<f64>,
    ) -> Result<Self, ComplexError> {
        if degree > complex.dimension() {
            return Err(ComplexError::DegreeMismatch(degree, complex.dimension()));
        }
        if values.len() != complex.size(degree) {
            return Err(ComplexError::LengthMismatch(
                values.len(),
                complex.size(degree),
            ));
        }
        Ok(Cochain { degree, values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    /// Kronecker pairing with a chain of the same degree.
    pub fn pair(&self, chain: &Chain) -> f64 {
        self.values.dot(chain.coefficients())
    }

    /// Applies the coboundary operator, returning a (p+1)-cochain.
    pub fn coboundary(&self, complex: &SimplicialComplex) -> Result<Cochain, ComplexError> {
        let cb = complex.coboundary_matrix(self.degree);
        let v = cb.map(|x| x as f64) * &self.values;
        if self.degree + 1 > complex.dimension() {
            // Top-degree cochains have zero coboundary; represent it in the
            // (empty) degree above only when it exists.
            return Err(ComplexError::DegreeMismatch(
                self.degree + 1,
                complex.dimension(),
            ));
        }
        Cochain::new(complex, self.degree + 1, v)
    }

    /// Max-norm of the coboundary; zero for top-degree cochains.
    pub fn coboundary_max_norm(&self, complex: &SimplicialComplex) -> f64 {
        if self.degree >= complex.dimension() {
            return 0.0;
        }
        match self.coboundary(complex) {
            Ok(c) => {
                if c.values.is_empty() {
                    0.0
                } else {
                    c.values.amax()
                }
            }
            Err(_) => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::from_top_cells(&[vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn sorting_records_parity() {
        let s = Simplex::new(&[1, 0, 2]).unwrap();
        assert_eq!(s.vertices(), &[0, 1, 2]);
        assert_eq!(s.sign(), -1);
        let s = Simplex::new(&[2, 0, 1]).unwrap();
        assert_eq!(s.sign(), 1);
    }

    #[test]
    fn repeated_vertex_rejected() {
        assert!(matches!(
            Simplex::new(&[0, 1, 1]),
            Err(ComplexError::RepeatedVertex(_))
        ));
    }

    #[test]
    fn triangle_boundary_signs() {
        // Boundary of [0,1,2] over edges [0,1], [0,2], [1,2] is (+1, -1, +1).
        let k = triangle();
        let bd = k.boundary_matrix(2);
        assert_eq!(bd.nrows(), 3);
        assert_eq!(bd.ncols(), 1);
        let edges: Vec<_> = k.simplices(1).iter().map(|s| s.vertices().to_vec()).collect();
        assert_eq!(edges, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!((bd[(0, 0)], bd[(1, 0)], bd[(2, 0)]), (1, -1, 1));
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let k = SimplicialComplex::from_top_cells(&[vec![0, 1, 2, 3, 4]]).unwrap();
        for p in 2..=4 {
            let a = k.boundary_matrix(p - 1).map(|x| x as i64);
            let b = k.boundary_matrix(p);
            let prod = a * b;
            assert!(prod.iter().all(|&x| x == 0), "d o d != 0 in degree {p}");
        }
    }

    #[test]
    fn closure_validation_catches_missing_face() {
        let layers = vec![
            vec![Simplex::new(&[0]).unwrap(), Simplex::new(&[1]).unwrap()],
            vec![Simplex::new(&[0, 2]).unwrap()],
        ];
        assert!(matches!(
            SimplicialComplex::from_layers(layers),
            Err(ComplexError::MissingFace { .. })
        ));
    }

    #[test]
    fn orientation_sign_flips_boundary_column() {
        // The same triangle entered with odd vertex order negates its column.
        let plain = SimplicialComplex::from_top_cells(&[vec![0, 1, 2]]).unwrap();
        let flipped = SimplicialComplex::from_top_cells(&[vec![1, 0, 2]]).unwrap();
        let a = plain.boundary_matrix(2);
        let b = flipped.boundary_matrix(2);
        assert_eq!(a.column(0), -b.column(0));
    }

    #[test]
    fn single_simplex_is_not_closed() {
        let k = triangle();
        let err = k
            .with_flags(ComplexFlags {
                closed_pseudomanifold: true,
                orientable: true,
            })
            .unwrap_err();
        assert!(matches!(err, ComplexError::NotPseudomanifold { .. }));
    }

    #[test]
    fn sphere_fundamental_class_is_a_cycle() {
        // Boundary of a tetrahedron: four coherently orientable triangles.
        let cells: Vec<Vec<usize>> = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let k = SimplicialComplex::from_top_cells(&cells)
            .unwrap()
            .with_flags(ComplexFlags {
                closed_pseudomanifold: true,
                orientable: true,
            })
            .unwrap();
        let fc = k.fundamental_class().unwrap();
        assert!(fc.coefficients().iter().all(|c| c.abs() == 1.0));
        assert!(fc.is_cycle(&k, 0.0));
    }

    #[test]
    fn fundamental_class_requires_flags() {
        let cells: Vec<Vec<usize>> = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let k = SimplicialComplex::from_top_cells(&cells).unwrap();
        assert!(matches!(
            k.fundamental_class(),
            Err(ComplexError::NotFlaggedClosed)
        ));
    }

    #[test]
    fn components_are_labeled() {
        let k = SimplicialComplex::from_top_cells(&[vec![0, 1], vec![2, 3]]).unwrap();
        let comps = k.vertex_components();
        assert_eq!(comps[0], comps[1]);
        assert_eq!(comps[2], comps[3]);
        assert_ne!(comps[0], comps[2]);
        assert!(!k.is_connected());
    }
}
