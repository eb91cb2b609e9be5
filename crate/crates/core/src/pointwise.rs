//! Pointwise norms of discrete forms: constant-form reconstruction,
//! comass, Hodge star, and the wedge pairing with Poincare duality.
//!
//! On each top simplex the cochain is approximated by the constant form
//! whose face integrals match the cochain values in least squares; its
//! coefficients live in an orthonormal frame of the simplex, so Euclidean
//! norms of coefficient vectors are honest pointwise norms. The comass
//! (sup over unit decomposable p-vectors) is exact in degrees 0, 1, 2 and
//! n-2, n-1, n: middle degrees of high-dimensional complexes fall back to
//! a projected power iteration sandwiched between the l2-derived bounds.
//!
//! The wedge pairing uses barycentric coordinates only, so integrals of
//! Whitney products are metric-free; with the fundamental class this
//! yields Poincare duals of cocycles as explicit cycles.

use crate::complex::{Chain, Cochain, ComplexError, SimplicialComplex};
use crate::homology::{cohomology_basis, homology_basis};
use crate::metric::{factorial, MetricComplex};
use crate::whitney::HodgeLaplacian;
use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PointwiseError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("degree {0} exceeds complex dimension {1}")]
    DegreeOutOfRange(usize, usize),
    #[error("complex lacks a fundamental class: {0}")]
    NoFundamentalClass(String),
    #[error("cohomology pairing matrix is singular")]
    SingularPairing,
    #[error("wedge degrees {0} + {1} must sum to the dimension {2}")]
    WedgeDegrees(usize, usize, usize),
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (factorial(n) / (factorial(k) * factorial(n - k))).round()
}

/// Coefficients of the least-squares constant form on top simplex `t`,
/// in the simplex's orthonormal frame; the basis is the lexicographic list
/// of sorted p-subsets of the frame axes.
pub fn constant_form_on(
    m: &MetricComplex,
    t: usize,
    cochain: &Cochain,
) -> DVector<f64> {
    let n = m.dimension();
    let p = cochain.degree();
    let complex = m.complex();
    let top = complex.simplices(n)[t].vertices();
    let frame = &m.geometry(t).frame;
    let vertex = |l: usize| -> DVector<f64> {
        if l == 0 {
            DVector::zeros(n)
        } else {
            frame.row(l - 1).transpose()
        }
    };
    let faces: Vec<Vec<usize>> = (0..=n).combinations(p + 1).collect();
    let axes: Vec<Vec<usize>> = (0..n).combinations(p).collect();
    let mut a = DMatrix::zeros(faces.len(), axes.len());
    let mut rhs = DVector::zeros(faces.len());
    let pf = factorial(p);
    for (fi, face) in faces.iter().enumerate() {
        // integral of dx_I over the face: minor of its edge vectors
        let base = vertex(face[0]);
        let edges: Vec<DVector<f64>> = face[1..].iter().map(|&l| vertex(l) - &base).collect();
        for (ai, axis_set) in axes.iter().enumerate() {
            let minor = DMatrix::from_fn(p, p, |r, c| edges[c][axis_set[r]]);
            a[(fi, ai)] = (if p == 0 { 1.0 } else { minor.determinant() }) / pf;
        }
        let labels: Vec<usize> = face.iter().map(|&l| top[l]).collect();
        let idx = complex.simplex_index(p, &labels).expect("closed under faces");
        let sign = complex.simplices(p)[idx].sign() as f64;
        rhs[fi] = sign * cochain.values()[idx];
    }
    a.svd(true, true)
        .solve(&rhs, 1e-12)
        .expect("least squares always solvable")
}

/// Hodge star of constant-form coefficients in an orthonormal frame.
/// Output is indexed by the lexicographic (n-p)-subsets.
pub fn star_coefficients(n: usize, p: usize, coeffs: &DVector<f64>) -> DVector<f64> {
    let axes: Vec<Vec<usize>> = (0..n).combinations(p).collect();
    let co_axes: Vec<Vec<usize>> = (0..n).combinations(n - p).collect();
    let mut out = DVector::zeros(co_axes.len());
    for (ai, axis_set) in axes.iter().enumerate() {
        let complement: Vec<usize> = (0..n).filter(|v| !axis_set.contains(v)).collect();
        // parity of the permutation (axis_set ++ complement) of 0..n
        let mut perm: Vec<usize> = axis_set.clone();
        perm.extend(&complement);
        let mut inversions = 0usize;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        let ci = co_axes.iter().position(|c| *c == complement).unwrap();
        out[ci] += sign * coeffs[ai];
    }
    out
}

/// Sup-norm of a constant p-form over unit decomposable p-vectors, from
/// its frame coefficients. The boolean reports whether the value is exact
/// or a certified lower estimate.
pub fn linf_norm_of_coefficients(n: usize, p: usize, coeffs: &DVector<f64>) -> (f64, bool) {
    let l2 = coeffs.norm();
    if p == 0 || p == n {
        return (l2, true);
    }
    if p == 1 || p == n - 1 {
        // 1-forms: the sup over unit vectors is the Euclidean norm, and
        // the star onto 1-forms preserves it.
        return (l2, true);
    }
    let as_two_form = |q: usize, c: &DVector<f64>| -> f64 {
        let axes: Vec<Vec<usize>> = (0..n).combinations(q).collect();
        let mut b = DMatrix::zeros(n, n);
        for (ai, axis_set) in axes.iter().enumerate() {
            b[(axis_set[0], axis_set[1])] = c[ai];
            b[(axis_set[1], axis_set[0])] = -c[ai];
        }
        b.svd(false, false).singular_values.max()
    };
    if p == 2 {
        return (as_two_form(2, coeffs), true);
    }
    if p == n - 2 {
        return (as_two_form(2, &star_coefficients(n, p, coeffs)), true);
    }
    // middle degrees: projected power iteration over decomposable frames
    let axes: Vec<Vec<usize>> = (0..n).combinations(p).collect();
    let pairing = |u: &[DVector<f64>]| -> f64 {
        axes.iter()
            .zip(coeffs.iter())
            .map(|(axis_set, &w)| {
                let minor = DMatrix::from_fn(p, p, |r, c| u[c][axis_set[r]]);
                w * minor.determinant()
            })
            .sum()
    };
    let mut best: f64 = 0.0;
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    for _ in 0..24 {
        let mut u: Vec<DVector<f64>> = (0..p)
            .map(|_| DVector::from_fn(n, |_, _| next()))
            .collect();
        orthonormalize(&mut u);
        for _ in 0..50 {
            for i in 0..p {
                // gradient in the i-th slot: linear in u_i, assembled by
                // Laplace expansion along column i (the substituted basis
                // vector only hits rows inside the axis set)
                let mut w = DVector::zeros(n);
                for (axis_set, &wc) in axes.iter().zip(coeffs.iter()) {
                    for (r, &a) in axis_set.iter().enumerate() {
                        let minor = DMatrix::from_fn(p - 1, p - 1, |rr, cc| {
                            let row = axis_set[if rr < r { rr } else { rr + 1 }];
                            let col = if cc < i { cc } else { cc + 1 };
                            u[col][row]
                        });
                        let sign = if (r + i) % 2 == 0 { 1.0 } else { -1.0 };
                        w[a] += wc * sign * minor.determinant();
                    }
                }
                for (j, other) in u.iter().enumerate() {
                    if j != i {
                        let d = w.dot(other);
                        w -= d * other;
                    }
                }
                let norm = w.norm();
                if norm > 1e-14 {
                    u[i] = w / norm;
                }
            }
        }
        best = best.max(pairing(&u).abs());
    }
    let floor = l2 / binomial(n, p).sqrt();
    (best.max(floor), false)
}

fn orthonormalize(u: &mut [DVector<f64>]) {
    for i in 0..u.len() {
        for j in 0..i {
            let d = u[i].dot(&u[j]);
            let uj = u[j].clone();
            u[i] -= d * uj;
        }
        let norm = u[i].norm();
        if norm > 1e-14 {
            u[i] /= norm;
        }
    }
}

/// Per-top-simplex pointwise norms of the reconstructed constant form.
#[derive(Debug, Clone)]
pub struct PointwiseNorms {
    pub l2: Vec<f64>,
    pub linf: Vec<f64>,
    pub exact: bool,
}

pub fn pointwise_norms(
    m: &MetricComplex,
    cochain: &Cochain,
) -> Result<PointwiseNorms, PointwiseError> {
    let n = m.dimension();
    let p = cochain.degree();
    if p > n {
        return Err(PointwiseError::DegreeOutOfRange(p, n));
    }
    let tops = m.complex().size(n);
    let mut l2 = Vec::with_capacity(tops);
    let mut linf = Vec::with_capacity(tops);
    let mut exact = true;
    for t in 0..tops {
        let coeffs = constant_form_on(m, t, cochain);
        let (v, ex) = linf_norm_of_coefficients(n, p, &coeffs);
        l2.push(coeffs.norm());
        linf.push(v);
        exact &= ex;
    }
    Ok(PointwiseNorms { l2, linf, exact })
}

/// Comass estimate: the maximal pointwise sup-norm over top simplices.
#[derive(Debug, Clone)]
pub struct ComassResult {
    pub value: f64,
    /// Whether `value` is exact (degree within the exact branches).
    pub exact: bool,
    /// Always a valid upper bound, equal to `value` when exact.
    pub upper_bound: f64,
}

pub fn comass(m: &MetricComplex, cochain: &Cochain) -> Result<ComassResult, PointwiseError> {
    let n = m.dimension();
    let p = cochain.degree();
    let norms = pointwise_norms(m, cochain)?;
    let value = norms.linf.iter().cloned().fold(0.0f64, f64::max);
    let upper = if norms.exact {
        value
    } else {
        let max_l2 = norms.l2.iter().cloned().fold(0.0f64, f64::max);
        binomial(n, p).sqrt() * max_l2
    };
    Ok(ComassResult {
        value,
        exact: norms.exact,
        upper_bound: upper,
    })
}

/// Comass of the pointwise Hodge star of the reconstructed form.
pub fn comass_of_star(
    m: &MetricComplex,
    cochain: &Cochain,
) -> Result<ComassResult, PointwiseError> {
    let n = m.dimension();
    let p = cochain.degree();
    if p > n {
        return Err(PointwiseError::DegreeOutOfRange(p, n));
    }
    let q = n - p;
    let tops = m.complex().size(n);
    let mut value: f64 = 0.0;
    let mut max_l2: f64 = 0.0;
    let mut exact = true;
    for t in 0..tops {
        let coeffs = constant_form_on(m, t, cochain);
        let starred = star_coefficients(n, p, &coeffs);
        let (v, ex) = linf_norm_of_coefficients(n, q, &starred);
        value = value.max(v);
        max_l2 = max_l2.max(starred.norm());
        exact &= ex;
    }
    let upper = if exact {
        value
    } else {
        binomial(n, q).sqrt() * max_l2
    };
    Ok(ComassResult {
        value,
        exact,
        upper_bound: upper,
    })
}

/// Integral over the fundamental class of the wedge of the two cochains'
/// Whitney forms. Metric-free: only barycentric coordinates enter.
pub fn wedge_integral(
    complex: &SimplicialComplex,
    fundamental: &Chain,
    omega: &Cochain,
    psi: &Cochain,
) -> Result<f64, PointwiseError> {
    let n = complex.dimension();
    let p = omega.degree();
    let q = psi.degree();
    if p + q != n {
        return Err(PointwiseError::WedgeDegrees(p, q, n));
    }
    let faces_p: Vec<Vec<usize>> = (0..=n).combinations(p + 1).collect();
    let faces_q: Vec<Vec<usize>> = (0..=n).combinations(q + 1).collect();
    let norm = factorial(p) * factorial(q)
        / (((n + 1) * (n + 2)) as f64 * factorial(n));
    let mut total = 0.0;
    for (t, top) in complex.simplices(n).iter().enumerate() {
        let orient = fundamental.coefficients()[t] * top.sign() as f64;
        if orient == 0.0 {
            continue;
        }
        let local_value = |faces: &[Vec<usize>], c: &Cochain, deg: usize| -> Vec<f64> {
            faces
                .iter()
                .map(|f| {
                    let labels: Vec<usize> = f.iter().map(|&l| top.vertices()[l]).collect();
                    let idx = complex.simplex_index(deg, &labels).unwrap();
                    complex.simplices(deg)[idx].sign() as f64 * c.values()[idx]
                })
                .collect()
        };
        let om = local_value(&faces_p, omega, p);
        let ps = local_value(&faces_q, psi, q);
        let mut acc = 0.0;
        let mut rows: Vec<usize> = Vec::with_capacity(n);
        for (si, s) in faces_p.iter().enumerate() {
            if om[si] == 0.0 {
                continue;
            }
            for (ti, tt) in faces_q.iter().enumerate() {
                if ps[ti] == 0.0 {
                    continue;
                }
                let mut pair_sum = 0.0;
                for j in 0..=p {
                    for k in 0..=q {
                        rows.clear();
                        rows.extend(s.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v));
                        rows.extend(tt.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v));
                        // dlambda_a in the barycentric chart: unit row, or
                        // all -1 for a = 0
                        let mat = DMatrix::from_fn(n, n, |r, c| {
                            let a = rows[r];
                            let mut v = 0.0;
                            if a == c + 1 {
                                v += 1.0;
                            }
                            if a == 0 {
                                v -= 1.0;
                            }
                            v
                        });
                        let det = mat.determinant();
                        if det == 0.0 {
                            continue;
                        }
                        let moment = if s[j] == tt[k] { 2.0 } else { 1.0 };
                        let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
                        pair_sum += sign * moment * det;
                    }
                }
                acc += om[si] * ps[ti] * pair_sum;
            }
        }
        total += orient * norm * acc;
    }
    Ok(total)
}

/// Poincare dual of the class of a p-cocycle: the (n-p)-cycle whose
/// intersection pairing reproduces the wedge integrals against a basis of
/// (n-p)-cocycles.
pub fn poincare_dual(
    complex: &SimplicialComplex,
    omega: &Cochain,
) -> Result<Chain, PointwiseError> {
    let n = complex.dimension();
    let p = omega.degree();
    let q = n - p;
    let fundamental = complex
        .fundamental_class()
        .map_err(|e| PointwiseError::NoFundamentalClass(e.to_string()))?;
    let cocycles = cohomology_basis(complex, q)?;
    let cycles = homology_basis(complex, q)?;
    let k = cycles.len();
    if k == 0 {
        // trivial homology: the only dual is the zero cycle
        return Ok(Chain::new(complex, q, DVector::zeros(complex.size(q)))?);
    }
    let pairing = DMatrix::from_fn(k, k, |i, j| {
        cocycles[i].values().dot(cycles[j].coefficients())
    });
    let mut wedge = DVector::zeros(k);
    for (i, psi) in cocycles.iter().enumerate() {
        wedge[i] = wedge_integral(complex, &fundamental, omega, psi)?;
    }
    let x = pairing
        .lu()
        .solve(&wedge)
        .ok_or(PointwiseError::SingularPairing)?;
    let mut coeffs = DVector::zeros(complex.size(q));
    for (j, cycle) in cycles.iter().enumerate() {
        coeffs += x[j] * cycle.coefficients();
    }
    Ok(Chain::new(complex, q, coeffs)?)
}

/// Maximum of (Laplacian f - lambda f) over vertices, where f is the
/// per-vertex average of the pointwise l2 norm on incident top simplices.
/// A nonpositive value is consistent with f being a subsolution at the
/// given eigenvalue level.
pub fn li_subsolution_diagnostic(
    m: &MetricComplex,
    cochain: &Cochain,
    lambda: f64,
) -> Result<f64, PointwiseError> {
    let n = m.dimension();
    let complex = m.complex();
    let norms = pointwise_norms(m, cochain)?;
    let nv = complex.size(0);
    let mut sums = vec![0.0f64; nv];
    let mut counts = vec![0usize; nv];
    for (t, top) in complex.simplices(n).iter().enumerate() {
        for &v in top.vertices() {
            let vi = complex.simplex_index(0, &[v]).unwrap();
            sums[vi] += norms.l2[t];
            counts[vi] += 1;
        }
    }
    let f = DVector::from_fn(nv, |i, _| sums[i] / counts[i].max(1) as f64);
    let lap = HodgeLaplacian::new(m, 0).map_err(|_| PointwiseError::SingularPairing)?;
    let g = lap.apply(&f) - lambda * &f;
    Ok(g.max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn right_triangle() -> MetricComplex {
        let k = SimplicialComplex::from_top_cells(&[vec![0, 1, 2]]).unwrap();
        let coords = vec![
            DVector::from_vec(vec![0.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
        ];
        MetricComplex::from_vertex_coords(k, coords).unwrap()
    }

    #[test]
    fn constant_form_reconstruction_is_exact() {
        let m = right_triangle();
        let dx = Cochain::new(m.complex(), 1, DVector::from_vec(vec![1.0, 0.0, -1.0])).unwrap();
        let c = constant_form_on(&m, 0, &dx);
        assert_relative_eq!(c[0], 1.0, epsilon = 1e-13);
        assert_relative_eq!(c[1], 0.0, epsilon = 1e-13);
        let norms = pointwise_norms(&m, &dx).unwrap();
        assert!(norms.exact);
        assert_relative_eq!(norms.linf[0], 1.0, epsilon = 1e-13);
    }

    #[test]
    fn star_is_an_involution_up_to_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, p) in [(3usize, 1usize), (4, 2), (5, 2), (6, 3)] {
            let dim = binomial(n, p) as usize;
            let c = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
            let ss = star_coefficients(n, n - p, &star_coefficients(n, p, &c));
            let sign = if (p * (n - p)) % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(ss, sign * &c, epsilon = 1e-12);
            assert_relative_eq!(
                star_coefficients(n, p, &c).norm(),
                c.norm(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn two_form_sup_norm_is_largest_rotation_angle() {
        // theta1 e01 + theta2 e23 in R^4.
        let mut c = DVector::zeros(binomial(4, 2) as usize);
        let axes: Vec<Vec<usize>> = (0..4).combinations(2).collect();
        c[axes.iter().position(|a| *a == vec![0, 1]).unwrap()] = 3.0;
        c[axes.iter().position(|a| *a == vec![2, 3]).unwrap()] = -2.0;
        let (v, exact) = linf_norm_of_coefficients(4, 2, &c);
        assert!(exact);
        assert_relative_eq!(v, 3.0, epsilon = 1e-12);
        // the star of a 2-form in R^4 swaps the angles
        let (sv, sexact) = linf_norm_of_coefficients(4, 2, &star_coefficients(4, 2, &c));
        assert!(sexact);
        assert_relative_eq!(sv, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn heuristic_branch_recovers_simple_forms() {
        // e_{012} in R^6: comass exactly 1; degree 3 of 6 is the heuristic
        // branch, which must find the decomposable optimum.
        let axes: Vec<Vec<usize>> = (0..6).combinations(3).collect();
        let mut c = DVector::zeros(axes.len());
        c[axes.iter().position(|a| *a == vec![0, 1, 2]).unwrap()] = 1.0;
        let (v, exact) = linf_norm_of_coefficients(6, 3, &c);
        assert!(!exact);
        assert!((v - 1.0).abs() < 1e-6, "heuristic reached {v}");
        // sandwich: never below l2/sqrt(binom), never above l2
        assert!(v <= 1.0 + 1e-9);
        assert!(v >= 1.0 / binomial(6, 3).sqrt());
    }

    #[test]
    fn wedge_of_torus_translation_forms_is_unit() {
        let (m, dx, dy) = builtin::flat_torus(3);
        let fc = m.complex().fundamental_class().unwrap();
        let area = wedge_integral(m.complex(), &fc, &dx, &dy).unwrap();
        assert_relative_eq!(area.abs(), 1.0, epsilon = 1e-10);
        let zero = wedge_integral(m.complex(), &fc, &dx, &dx).unwrap();
        assert!(zero.abs() < 1e-12);
    }

    #[test]
    fn dual_of_constant_function_is_fundamental_class() {
        for complex in [builtin::sphere(2), builtin::torus7()] {
            let ones = Cochain::new(&complex, 0, DVector::from_element(complex.size(0), 1.0))
                .unwrap();
            let dual = poincare_dual(&complex, &ones).unwrap();
            let fc = complex.fundamental_class().unwrap();
            let diff = (dual.coefficients() - fc.coefficients()).amax();
            let sum = (dual.coefficients() + fc.coefficients()).amax();
            assert!(
                diff < 1e-9 || sum < 1e-9,
                "dual deviates from the fundamental class by {diff}/{sum}"
            );
        }
    }

    #[test]
    fn dual_depends_only_on_the_class() {
        let complex = builtin::torus7();
        let psi = cohomology_basis(&complex, 1).unwrap().remove(0);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let pot = DVector::from_fn(complex.size(0), |_, _| rng.gen_range(-2.0..2.0));
        let cob = complex.coboundary_matrix(0).map(|x| x as f64);
        let shifted = Cochain::new(&complex, 1, psi.values() + cob * pot).unwrap();
        let a = poincare_dual(&complex, &psi).unwrap();
        let b = poincare_dual(&complex, &shifted).unwrap();
        let gap = (a.coefficients() - b.coefficients()).amax();
        assert!(gap < 1e-9, "dual moved by {gap} under a coboundary shift");
    }

    #[test]
    fn dual_is_a_cycle_and_reproduces_pairings() {
        let (m, dx, _) = builtin::flat_torus(3);
        let complex = m.complex();
        let dual = poincare_dual(complex, &dx).unwrap();
        assert!(dual.is_cycle(complex, 1e-9));
        let fc = complex.fundamental_class().unwrap();
        for psi in cohomology_basis(complex, 1).unwrap() {
            let lhs = psi.values().dot(dual.coefficients());
            let rhs = wedge_integral(complex, &fc, &dx, &psi).unwrap();
            assert_relative_eq!(lhs, rhs, epsilon = 1e-9);
        }
    }

    #[test]
    fn flat_form_is_a_li_subsolution() {
        let (m, dx, _) = builtin::flat_torus(3);
        // constant pointwise norm: Laplacian of f vanishes, lambda = 0
        let diag = li_subsolution_diagnostic(&m, &dx, 0.0).unwrap();
        assert!(diag.abs() < 1e-9, "diagnostic {diag}");
    }
}
