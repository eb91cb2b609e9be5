//! Bundled reference complexes.
//!
//! Small, exactly-understood triangulations used as test fixtures and CLI
//! demo inputs: circles, the 7-vertex torus, simplex-boundary spheres, a
//! genus-2 surface, the 6-vertex projective plane, flat square and cubic
//! tori with explicit harmonic cochains, and a few metric complexes with
//! deliberately thin necks for isoperimetric experiments.

use crate::complex::{Cochain, ComplexFlags, SimplicialComplex};
use crate::metric::{MetricComplex, MetricError};
use nalgebra::DVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

fn closed_flags() -> ComplexFlags {
    ComplexFlags {
        closed_pseudomanifold: true,
        orientable: true,
    }
}

/// Cycle graph on k vertices (k >= 3).
pub fn circle(k: usize) -> SimplicialComplex {
    assert!(k >= 3, "a simplicial circle needs at least 3 vertices");
    let cells: Vec<Vec<usize>> = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    SimplicialComplex::from_top_cells(&cells)
        .unwrap()
        .with_flags(closed_flags())
        .unwrap()
}

/// Circle of k edges with total circumference `len`.
pub fn circle_metric(k: usize, len: f64) -> MetricComplex {
    let complex = circle(k);
    let step = len / k as f64;
    let lengths: HashMap<(usize, usize), f64> = complex
        .simplices(1)
        .iter()
        .map(|e| ((e.vertices()[0], e.vertices()[1]), step))
        .collect();
    MetricComplex::from_edge_lengths(complex, &lengths).unwrap()
}

fn torus7_cells() -> Vec<Vec<usize>> {
    let mut cells = Vec::with_capacity(14);
    for i in 0..7 {
        cells.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        cells.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    cells
}

/// The 7-vertex triangulation of the 2-torus.
pub fn torus7() -> SimplicialComplex {
    SimplicialComplex::from_top_cells(&torus7_cells())
        .unwrap()
        .with_flags(closed_flags())
        .unwrap()
}

/// Boundary of the (d+1)-simplex: a triangulated d-sphere on d+2 vertices.
pub fn sphere(d: usize) -> SimplicialComplex {
    use itertools::Itertools;
    let cells: Vec<Vec<usize>> = (0..=d + 1).combinations(d + 1).collect();
    SimplicialComplex::from_top_cells(&cells)
        .unwrap()
        .with_flags(closed_flags())
        .unwrap()
}

/// Closed orientable genus-2 surface: two 7-vertex tori with one triangle
/// removed from each, glued along the exposed triangles.
pub fn genus2() -> SimplicialComplex {
    let torus = torus7_cells();
    let removed = vec![0usize, 1, 3];
    // Second copy: shift labels by 7, then identify its exposed triangle
    // (7, 8, 10) with (0, 1, 3) and compress the remaining labels.
    let relabel = |v: usize| -> usize {
        match v {
            7 => 0,
            8 => 1,
            9 => 7,
            10 => 3,
            11 => 8,
            12 => 9,
            13 => 10,
            other => other,
        }
    };
    let mut cells: Vec<Vec<usize>> = Vec::with_capacity(26);
    for c in &torus {
        let mut s = c.clone();
        s.sort_unstable();
        if s != removed {
            cells.push(c.clone());
        }
    }
    for c in &torus {
        let mut s = c.clone();
        s.sort_unstable();
        if s != removed {
            cells.push(c.iter().map(|&v| relabel(v + 7)).collect());
        }
    }
    SimplicialComplex::from_top_cells(&cells)
        .unwrap()
        .with_flags(closed_flags())
        .unwrap()
}

/// The 6-vertex triangulation of the projective plane (icosahedron modulo
/// the antipodal map). Closed but not orientable.
pub fn projective_plane() -> SimplicialComplex {
    let cells: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 1, 5],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![1, 3, 4],
        vec![2, 4, 5],
        vec![1, 3, 5],
    ];
    SimplicialComplex::from_top_cells(&cells)
        .unwrap()
        .with_flags(ComplexFlags {
            closed_pseudomanifold: true,
            orientable: false,
        })
        .unwrap()
}

/// Five-triangle Moebius band. Not a closed pseudomanifold: five of its
/// edges lie on the boundary circle.
pub fn mobius_band() -> SimplicialComplex {
    let cells: Vec<Vec<usize>> = (0..5).map(|i| vec![i, (i + 1) % 5, (i + 2) % 5]).collect();
    SimplicialComplex::from_top_cells(&cells).unwrap()
}

/// Pinned random complex with homology in two positive degrees.
pub fn random_three_complex_default() -> SimplicialComplex {
    random_three_complex(14)
}

/// Random pure 3-complex: each 4-subset of {0..6} becomes a tetrahedron
/// with probability 0.35 under a seeded generator.
pub fn random_three_complex(seed: u64) -> SimplicialComplex {
    use itertools::Itertools;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let cells: Vec<Vec<usize>> = (0..7usize)
            .combinations(4)
            .filter(|_| rng.gen::<f64>() < 0.35)
            .collect();
        if cells.is_empty() {
            continue;
        }
        let k = SimplicialComplex::from_top_cells(&cells).unwrap();
        if k.dimension() == 3 && k.is_connected() {
            return k;
        }
    }
}

/// wrapped coordinate step on a k-periodic axis, in {-1, 0, +1}
fn wrapped_step(a: usize, b: usize, k: usize) -> f64 {
    let d = (b + k - a) % k;
    if d == 0 {
        0.0
    } else if 2 * d <= k {
        d as f64
    } else {
        d as f64 - k as f64
    }
}

/// Flat unit-area square torus on a k x k vertex grid (k >= 3), with the
/// two harmonic unit 1-cochains: integrals of dx and dy over the edges.
pub fn flat_torus(k: usize) -> (MetricComplex, Cochain, Cochain) {
    assert!(k >= 3, "grid torus needs k >= 3 to stay simplicial");
    let v = |i: usize, j: usize| (i % k) * k + (j % k);
    let mut cells = Vec::with_capacity(2 * k * k);
    for i in 0..k {
        for j in 0..k {
            cells.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            cells.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
        }
    }
    let complex = SimplicialComplex::from_top_cells(&cells)
        .unwrap()
        .with_flags(closed_flags())
        .unwrap();
    let h = 1.0 / k as f64;
    let mut lengths = HashMap::new();
    let mut dx = Vec::new();
    let mut dy = Vec::new();
    for e in complex.simplices(1) {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        let (ia, ja) = (a / k, a % k);
        let (ib, jb) = (b / k, b % k);
        let sx = wrapped_step(ia, ib, k);
        let sy = wrapped_step(ja, jb, k);
        lengths.insert((a, b), h * (sx * sx + sy * sy).sqrt());
        dx.push(sx * h);
        dy.push(sy * h);
    }
    let dx = Cochain::new(&complex, 1, DVector::from_vec(dx)).unwrap();
    let dy = Cochain::new(&complex, 1, DVector::from_vec(dy)).unwrap();
    let metric = MetricComplex::from_edge_lengths(complex, &lengths).unwrap();
    (metric, dx, dy)
}

/// Flat unit-volume cubic 3-torus on a k^3 vertex grid (k >= 3), each cube
/// split into 6 tetrahedra along its main diagonal, with the harmonic unit
/// 1-cochain integrating dx.
pub fn cubic_torus(k: usize) -> (MetricComplex, Cochain) {
    assert!(k >= 3, "grid torus needs k >= 3 to stay simplicial");
    let v = |c: [usize; 3]| ((c[0] % k) * k + (c[1] % k)) * k + (c[2] % k);
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut cells = Vec::with_capacity(6 * k * k * k);
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                for perm in &perms {
                    let mut corner = [i, j, l];
                    let mut tet = vec![v(corner)];
                    for &axis in perm {
                        corner[axis] += 1;
                        tet.push(v(corner));
                    }
                    cells.push(tet);
                }
            }
        }
    }
    let complex = SimplicialComplex::from_top_cells(&cells)
        .unwrap()
        .with_flags(closed_flags())
        .unwrap();
    let h = 1.0 / k as f64;
    let coords = |a: usize| [a / (k * k), (a / k) % k, a % k];
    let mut lengths = HashMap::new();
    let mut dx = Vec::new();
    for e in complex.simplices(1) {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        let (ca, cb) = (coords(a), coords(b));
        let steps: Vec<f64> = (0..3).map(|ax| wrapped_step(ca[ax], cb[ax], k)).collect();
        let norm2: f64 = steps.iter().map(|s| s * s).sum();
        lengths.insert((a, b), h * norm2.sqrt());
        dx.push(steps[0] * h);
    }
    let dx = Cochain::new(&complex, 1, DVector::from_vec(dx)).unwrap();
    let metric = MetricComplex::from_edge_lengths(complex, &lengths).unwrap();
    (metric, dx)
}

/// Two pentagon-fan disks joined by a thin two-triangle corridor. The
/// corridor's cross edge has length 0.3 against unit edges elsewhere, so
/// the minimizing cut runs through the corridor.
pub fn dumbbell_surface() -> MetricComplex {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for i in 0..5 {
        cells.push(vec![0, 1 + i, 1 + (i + 1) % 5]);
        cells.push(vec![6, 7 + i, 7 + (i + 1) % 5]);
    }
    cells.push(vec![1, 2, 7]);
    cells.push(vec![2, 7, 8]);
    let complex = SimplicialComplex::from_top_cells(&cells).unwrap();
    let mut lengths = HashMap::new();
    for e in complex.simplices(1) {
        let key = (e.vertices()[0], e.vertices()[1]);
        lengths.insert(key, if key == (2, 7) { 0.3 } else { 1.0 });
    }
    MetricComplex::from_edge_lengths(complex, &lengths).unwrap()
}

/// Two hexagonal circles joined by a single long bridge edge: a graph
/// whose first nonzero Laplacian eigenvalue is far below the next one.
pub fn two_loops_bridge() -> MetricComplex {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for i in 0..6 {
        cells.push(vec![i, (i + 1) % 6]);
        cells.push(vec![6 + i, 6 + (i + 1) % 6]);
    }
    cells.push(vec![0, 6]);
    let complex = SimplicialComplex::from_top_cells(&cells).unwrap();
    let mut lengths = HashMap::new();
    for e in complex.simplices(1) {
        let key = (e.vertices()[0], e.vertices()[1]);
        lengths.insert(key, if key == (0, 6) { 4.0 } else { 0.2 });
    }
    MetricComplex::from_edge_lengths(complex, &lengths).unwrap()
}

/// Two unit triangles sharing an edge.
pub fn two_triangles() -> MetricComplex {
    let complex =
        SimplicialComplex::from_top_cells(&[vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
    MetricComplex::with_unit_lengths(complex).unwrap()
}

/// Every edge gets the same length.
pub fn equilateral(complex: SimplicialComplex, side: f64) -> Result<MetricComplex, MetricError> {
    let lengths: HashMap<(usize, usize), f64> = complex
        .simplices(1)
        .iter()
        .map(|e| ((e.vertices()[0], e.vertices()[1]), side))
        .collect();
    MetricComplex::from_edge_lengths(complex, &lengths)
}

/// The genus-2 surface with equilateral triangles scaled so the total area
/// is 4 pi, matching the Gauss-Bonnet area of a genus-2 hyperbolic surface.
pub fn genus2_hyperbolic_area() -> MetricComplex {
    let side = (16.0 * std::f64::consts::PI / (26.0 * 3f64.sqrt())).sqrt();
    equilateral(genus2(), side).unwrap()
}
