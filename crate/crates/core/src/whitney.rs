//! Whitney forms: mass matrices, Hodge Laplacians, harmonic representatives.
//!
//! The Whitney form of an oriented p-simplex [v_0..v_p] is
//! `p! sum_j (-1)^j lambda_j  dlambda_0 ^ .. ^ (omit j) ^ .. ^ dlambda_p`.
//! Its pairwise inner products over one top simplex reduce to barycentric
//! moments `int lambda_a lambda_b = vol (1 + delta_ab)/((n+1)(n+2))` and
//! p x p minors of the gradient Gram matrix, assembled per element below.
//! Whitney interpolation reproduces constant forms exactly, so cochains
//! integrating parallel forms on flat complexes get exact norms; the
//! tests lean on this.
//!
//! The discrete Hodge Laplacian in degree p is the quadratic form
//! `d'M d + M D (M_down)^{-1} D' M` (D the coboundary from degree p-1),
//! taken against the mass matrix M as a generalized eigenproblem. Its
//! kernel dimension is the Betti number; harmonic representatives are
//! computed by projecting out the coboundary part in the M inner product.

use crate::complex::{Cochain, ComplexError, SimplicialComplex};
use crate::metric::{factorial, MetricComplex};
use itertools::Itertools;
use nalgebra::{Cholesky, DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WhitneyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("degree {0} exceeds complex dimension {1}")]
    DegreeOutOfRange(usize, usize),
    #[error("mass matrix in degree {0} is not positive definite")]
    MassNotPositiveDefinite(usize),
    #[error("cochain is not a cocycle: coboundary has mass norm {0:e}")]
    NotACocycle(f64),
    #[error("spectral gap is undefined on a disconnected complex")]
    Disconnected,
}

/// All (p+1)-element subsets of {0..n}, each sorted ascending.
fn local_faces(n: usize, p: usize) -> Vec<Vec<usize>> {
    (0..=n).combinations(p + 1).collect()
}

/// Inner products of the Whitney forms of the local p-faces over one top
/// simplex, given the gradient Gram matrix `q` and the simplex volume.
fn local_mass_block(n: usize, p: usize, q: &DMatrix<f64>, vol: f64, faces: &[Vec<usize>]) -> DMatrix<f64> {
    let moment = vol / (((n + 1) * (n + 2)) as f64);
    let pf = factorial(p);
    let scale = pf * pf;
    let nf = faces.len();
    let mut block = DMatrix::zeros(nf, nf);
    let mut minor = DMatrix::zeros(p, p);
    for (si, s) in faces.iter().enumerate() {
        for (ti, t) in faces.iter().enumerate().skip(si) {
            let mut acc = 0.0;
            for j in 0..=p {
                for k in 0..=p {
                    // minor of q on rows s \ s[j], columns t \ t[k]
                    let mut r = 0;
                    for (idx, &a) in s.iter().enumerate() {
                        if idx == j {
                            continue;
                        }
                        let mut c = 0;
                        for (jdx, &b) in t.iter().enumerate() {
                            if jdx == k {
                                continue;
                            }
                            minor[(r, c)] = q[(a, b)];
                            c += 1;
                        }
                        r += 1;
                    }
                    let det = if p == 0 { 1.0 } else { minor.determinant() };
                    let pair = moment * if s[j] == t[k] { 2.0 } else { 1.0 };
                    let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sign * pair * det;
                }
            }
            block[(si, ti)] = scale * acc;
            block[(ti, si)] = scale * acc;
        }
    }
    block
}

/// Index and orientation sign of each local face inside the global complex.
fn global_of_local(
    complex: &SimplicialComplex,
    top: &[usize],
    p: usize,
    faces: &[Vec<usize>],
) -> Vec<(usize, f64)> {
    faces
        .iter()
        .map(|f| {
            let labels: Vec<usize> = f.iter().map(|&i| top[i]).collect();
            let idx = complex
                .simplex_index(p, &labels)
                .expect("closed complex contains all faces");
            (idx, complex.simplices(p)[idx].sign() as f64)
        })
        .collect()
}

/// Whitney mass matrix in degree p: Gram matrix of the basis cochains in
/// the L2 inner product of piecewise-defined forms.
pub fn mass_matrix(m: &MetricComplex, p: usize) -> Result<DMatrix<f64>, WhitneyError> {
    let n = m.dimension();
    if p > n {
        return Err(WhitneyError::DegreeOutOfRange(p, n));
    }
    let complex = m.complex();
    let size = complex.size(p);
    let faces = local_faces(n, p);
    let mut mass = DMatrix::zeros(size, size);
    for (t, top) in complex.simplices(n).iter().enumerate() {
        let geom = m.geometry(t);
        let q = &geom.grads * geom.grads.transpose();
        let block = local_mass_block(n, p, &q, geom.volume, &faces);
        let globals = global_of_local(complex, top.vertices(), p, &faces);
        for (i, &(gi, si)) in globals.iter().enumerate() {
            for (j, &(gj, sj)) in globals.iter().enumerate() {
                mass[(gi, gj)] += si * sj * block[(i, j)];
            }
        }
    }
    Ok(mass)
}

/// Element-assembled up-stiffness `d' M_(p+1) d` in degree p, avoiding the
/// dense global triple product.
pub fn stiffness_up(m: &MetricComplex, p: usize) -> Result<DMatrix<f64>, WhitneyError> {
    let n = m.dimension();
    if p >= n {
        return Ok(DMatrix::zeros(m.complex().size(p.min(n)), m.complex().size(p.min(n))));
    }
    let complex = m.complex();
    let size = complex.size(p);
    let faces_p = local_faces(n, p);
    let faces_up = local_faces(n, p + 1);
    // local coboundary: entry (alpha, sigma) = (-1)^(position of the vertex
    // of alpha missing from sigma)
    let mut inc = DMatrix::zeros(faces_up.len(), faces_p.len());
    for (ai, alpha) in faces_up.iter().enumerate() {
        for (pos, _) in alpha.iter().enumerate() {
            let mut sigma = alpha.clone();
            sigma.remove(pos);
            let si = faces_p.iter().position(|f| *f == sigma).unwrap();
            inc[(ai, si)] = if pos % 2 == 0 { 1.0 } else { -1.0 };
        }
    }
    let mut stiff = DMatrix::zeros(size, size);
    for (t, top) in complex.simplices(n).iter().enumerate() {
        let geom = m.geometry(t);
        let q = &geom.grads * geom.grads.transpose();
        let block = local_mass_block(n, p + 1, &q, geom.volume, &faces_up);
        let local = inc.transpose() * block * &inc;
        let globals = global_of_local(complex, top.vertices(), p, &faces_p);
        for (i, &(gi, si)) in globals.iter().enumerate() {
            for (j, &(gj, sj)) in globals.iter().enumerate() {
                stiff[(gi, gj)] += si * sj * local[(i, j)];
            }
        }
    }
    Ok(stiff)
}

pub fn inner(mass: &DMatrix<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (mass * b).dot(a)
}

/// Hodge Laplacian quadratic form in degree p together with the mass
/// matrix defining the generalized eigenproblem.
pub struct HodgeLaplacian {
    pub degree: usize,
    pub quadratic: DMatrix<f64>,
    pub mass: DMatrix<f64>,
    mass_chol: Cholesky<f64, nalgebra::Dyn>,
}

impl HodgeLaplacian {
    pub fn new(m: &MetricComplex, p: usize) -> Result<Self, WhitneyError> {
        let n = m.dimension();
        if p > n {
            return Err(WhitneyError::DegreeOutOfRange(p, n));
        }
        let mass = mass_matrix(m, p)?;
        let mass_chol = Cholesky::new(mass.clone())
            .ok_or(WhitneyError::MassNotPositiveDefinite(p))?;
        let mut quadratic = stiffness_up(m, p)?;
        if p > 0 {
            let down_mass = mass_matrix(m, p - 1)?;
            let down_chol = Cholesky::new(down_mass)
                .ok_or(WhitneyError::MassNotPositiveDefinite(p - 1))?;
            let cob = m.complex().coboundary_matrix(p - 1).map(|x| x as f64);
            let y = cob.transpose() * &mass; // m_(p-1) x m_p
            let z = down_chol.solve(&y);
            quadratic += y.transpose() * z;
        }
        // enforce exact symmetry against accumulation drift
        let sym = (&quadratic + quadratic.transpose()) * 0.5;
        Ok(HodgeLaplacian {
            degree: p,
            quadratic: sym,
            mass,
            mass_chol,
        })
    }

    /// Generalized eigenvalues of (H, M), ascending. All are >= 0 up to
    /// roundoff.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let l = self.mass_chol.l();
        // A = L^{-1} H L^{-T}
        let b = l.solve_lower_triangular(&self.quadratic).unwrap();
        let c = l.solve_lower_triangular(&b.transpose()).unwrap();
        let sym = (&c + c.transpose()) * 0.5;
        let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    pub fn kernel_dimension(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&v| v < tol).count()
    }

    /// Laplacian as an operator: M^{-1} H applied to cochain values.
    pub fn apply(&self, values: &DVector<f64>) -> DVector<f64> {
        self.mass_chol.solve(&(&self.quadratic * values))
    }
}

/// A discrete harmonic form with the reported projection residual: the
/// mass norm of what remains of (d + delta) after projection.
#[derive(Debug, Clone)]
pub struct HarmonicForm {
    pub cochain: Cochain,
    pub residual: f64,
}

/// How the projection solves its positive semidefinite normal system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionSolver {
    /// Pinned Cholesky when projecting against 0-form potentials,
    /// spectral pseudo-inverse otherwise.
    Auto,
    /// Always the spectral pseudo-inverse.
    Spectral,
}

/// Harmonic representative of the cohomology class of a cocycle: subtracts
/// the M-orthogonal projection onto coboundaries.
pub fn harmonic_representative(
    m: &MetricComplex,
    cochain: &Cochain,
) -> Result<HarmonicForm, WhitneyError> {
    harmonic_representative_with(m, cochain, ProjectionSolver::Auto)
}

pub fn harmonic_representative_with(
    m: &MetricComplex,
    cochain: &Cochain,
    solver: ProjectionSolver,
) -> Result<HarmonicForm, WhitneyError> {
    let n = m.dimension();
    let p = cochain.degree();
    if p > n {
        return Err(WhitneyError::DegreeOutOfRange(p, n));
    }
    let complex = m.complex();
    let mass = mass_matrix(m, p)?;
    let scale = inner(&mass, cochain.values(), cochain.values())
        .max(0.0)
        .sqrt()
        .max(1.0);
    // reject non-cocycles
    let up = if p < n {
        let mass_up = mass_matrix(m, p + 1)?;
        let dc = complex.coboundary_matrix(p).map(|x| x as f64) * cochain.values();
        let v = inner(&mass_up, &dc, &dc).max(0.0).sqrt();
        if v > 1e-8 * scale {
            return Err(WhitneyError::NotACocycle(v));
        }
        Some((mass_up, v))
    } else {
        None
    };
    if p == 0 {
        // cocycle 0-forms are locally constant, hence already harmonic
        let residual = up.map(|(_, v)| v).unwrap_or(0.0);
        return Ok(HarmonicForm {
            cochain: cochain.clone(),
            residual,
        });
    }
    let cob = complex.coboundary_matrix(p - 1).map(|x| x as f64);
    let rhs = cob.transpose() * (&mass * cochain.values());
    let stiff_down = stiffness_up(m, p - 1)?;
    let b = if p == 1 && solver == ProjectionSolver::Auto {
        solve_pinned(complex, &stiff_down, &rhs)
    } else {
        solve_pseudo(&stiff_down, &rhs)
    };
    let h = cochain.values() - &cob * b;
    // residual: coboundary part in degree p+1 plus the adjoint part below
    let up_part = match &up {
        Some((mass_up, _)) => {
            let dh = complex.coboundary_matrix(p).map(|x| x as f64) * &h;
            inner(mass_up, &dh, &dh).max(0.0)
        }
        None => 0.0,
    };
    let down_mass = mass_matrix(m, p - 1)?;
    let down_chol = Cholesky::new(down_mass)
        .ok_or(WhitneyError::MassNotPositiveDefinite(p - 1))?;
    let r = cob.transpose() * (&mass * &h);
    let down_part = r.dot(&down_chol.solve(&r)).max(0.0);
    let residual = (up_part + down_part).sqrt();
    Ok(HarmonicForm {
        cochain: Cochain::new(complex, p, h)?,
        residual,
    })
}

/// Solves the vertex Laplacian system by pinning one vertex per connected
/// component, which makes the reduced matrix positive definite.
fn solve_pinned(
    complex: &SimplicialComplex,
    stiff: &DMatrix<f64>,
    rhs: &DVector<f64>,
) -> DVector<f64> {
    let comps = complex.vertex_components();
    let nv = comps.len();
    let mut pinned = vec![false; nv];
    let mut seen = std::collections::HashSet::new();
    for (v, &c) in comps.iter().enumerate() {
        if seen.insert(c) {
            pinned[v] = true;
        }
    }
    let free: Vec<usize> = (0..nv).filter(|&v| !pinned[v]).collect();
    let k = free.len();
    let reduced = DMatrix::from_fn(k, k, |i, j| stiff[(free[i], free[j])]);
    let rhs_red = DVector::from_fn(k, |i, _| rhs[free[i]]);
    let sol = Cholesky::new(reduced)
        .map(|c| c.solve(&rhs_red))
        .unwrap_or_else(|| solve_pseudo(stiff, rhs).select_rows(free.iter()));
    let mut full = DVector::zeros(nv);
    for (i, &v) in free.iter().enumerate() {
        full[v] = sol[i];
    }
    full
}

/// Spectral pseudo-inverse solve for positive semidefinite systems.
fn solve_pseudo(a: &DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
    let eig = nalgebra::SymmetricEigen::new(a.clone());
    let max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = max * 1e-10;
    let coeffs = eig.eigenvectors.transpose() * rhs;
    let filtered = DVector::from_fn(coeffs.len(), |i, _| {
        if eig.eigenvalues[i] > cutoff {
            coeffs[i] / eig.eigenvalues[i]
        } else {
            0.0
        }
    });
    &eig.eigenvectors * filtered
}

/// Mass norm of a cochain: the L2 norm of its Whitney form.
pub fn harmonic_norm(m: &MetricComplex, cochain: &Cochain) -> Result<f64, WhitneyError> {
    let mass = mass_matrix(m, cochain.degree())?;
    Ok(inner(&mass, cochain.values(), cochain.values()).max(0.0).sqrt())
}

/// Hodge decomposition of an arbitrary cochain.
#[derive(Debug, Clone)]
pub struct HodgeParts {
    pub exact: Cochain,
    pub coexact: Cochain,
    pub harmonic: Cochain,
    /// Largest pairwise M-inner product among the three parts, relative to
    /// the squared norm of the input.
    pub ortho_defect: f64,
}

pub fn hodge_decompose(m: &MetricComplex, cochain: &Cochain) -> Result<HodgeParts, WhitneyError> {
    let n = m.dimension();
    let p = cochain.degree();
    let complex = m.complex();
    let mass = mass_matrix(m, p)?;
    let exact = if p > 0 {
        let cob = complex.coboundary_matrix(p - 1).map(|x| x as f64);
        let rhs = cob.transpose() * (&mass * cochain.values());
        let b = if p == 1 {
            solve_pinned(complex, &stiffness_up(m, p - 1)?, &rhs)
        } else {
            solve_pseudo(&stiffness_up(m, p - 1)?, &rhs)
        };
        &cob * b
    } else {
        DVector::zeros(cochain.values().len())
    };
    let coexact = if p < n {
        let cob = complex.coboundary_matrix(p).map(|x| x as f64);
        let mass_chol =
            Cholesky::new(mass.clone()).ok_or(WhitneyError::MassNotPositiveDefinite(p))?;
        // minimize || c - M^{-1} D' w ||_M: normal system D M^{-1} D' w = D c
        let minv_dt = mass_chol.solve(&cob.transpose());
        let normal = &cob * &minv_dt;
        let sym = (&normal + normal.transpose()) * 0.5;
        let w = solve_pseudo(&sym, &(&cob * cochain.values()));
        minv_dt * w
    } else {
        DVector::zeros(cochain.values().len())
    };
    let harmonic = cochain.values() - &exact - &coexact;
    let n2 = inner(&mass, cochain.values(), cochain.values()).max(1e-300);
    let defect = [
        inner(&mass, &exact, &coexact),
        inner(&mass, &exact, &harmonic),
        inner(&mass, &coexact, &harmonic),
    ]
    .iter()
    .fold(0.0f64, |acc, v| acc.max(v.abs()))
        / n2;
    Ok(HodgeParts {
        exact: Cochain::new(complex, p, exact)?,
        coexact: Cochain::new(complex, p, coexact)?,
        harmonic: Cochain::new(complex, p, harmonic)?,
        ortho_defect: defect,
    })
}

/// First nonzero eigenvalue of the 0-form Laplacian.
pub fn spectral_lambda1(m: &MetricComplex) -> Result<f64, WhitneyError> {
    if !m.complex().is_connected() {
        return Err(WhitneyError::Disconnected);
    }
    let lap = HodgeLaplacian::new(m, 0)?;
    lap.eigenvalues()
        .into_iter()
        .find(|&v| v > 1e-8)
        .ok_or(WhitneyError::Disconnected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::homology::betti_numbers;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_edge() -> MetricComplex {
        let k = SimplicialComplex::from_top_cells(&[vec![0, 1]]).unwrap();
        MetricComplex::with_unit_lengths(k).unwrap()
    }

    #[test]
    fn hat_function_mass_on_unit_edge() {
        let m = unit_edge();
        let mass = mass_matrix(&m, 0).unwrap();
        assert_relative_eq!(mass[(0, 0)], 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(mass[(0, 1)], 1.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(mass[(1, 1)], 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn edge_form_mass_on_unit_edge() {
        let m = unit_edge();
        let mass = mass_matrix(&m, 1).unwrap();
        assert_relative_eq!(mass[(0, 0)], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn constant_form_energy_on_right_triangle() {
        // Coordinates (0,0), (1,0), (0,1); the cochains integrate dx and
        // dy, whose energies are the area and whose mixed product is 0.
        let k = SimplicialComplex::from_top_cells(&[vec![0, 1, 2]]).unwrap();
        let coords = vec![
            DVector::from_vec(vec![0.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
        ];
        let m = MetricComplex::from_vertex_coords(k, coords).unwrap();
        let mass = mass_matrix(&m, 1).unwrap();
        let dx = DVector::from_vec(vec![1.0, 0.0, -1.0]);
        let dy = DVector::from_vec(vec![0.0, 1.0, 1.0]);
        assert_relative_eq!(inner(&mass, &dx, &dx), 0.5, epsilon = 1e-14);
        assert_relative_eq!(inner(&mass, &dy, &dy), 0.5, epsilon = 1e-14);
        assert_relative_eq!(inner(&mass, &dx, &dy), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn top_degree_mass_is_inverse_volume() {
        let m = builtin::two_triangles();
        let mass = mass_matrix(&m, 2).unwrap();
        let a = 3f64.sqrt() / 4.0;
        assert_relative_eq!(mass[(0, 0)], 1.0 / a, epsilon = 1e-12);
        assert_relative_eq!(mass[(1, 1)], 1.0 / a, epsilon = 1e-12);
        assert_relative_eq!(mass[(0, 1)], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn element_stiffness_matches_global_triple_product() {
        let m = builtin::equilateral(builtin::torus7(), 1.0).unwrap();
        for p in 0..2usize {
            let fast = stiffness_up(&m, p).unwrap();
            let cob = m.complex().coboundary_matrix(p).map(|x| x as f64);
            let slow = cob.transpose() * mass_matrix(&m, p + 1).unwrap() * &cob;
            assert_relative_eq!(fast, slow, epsilon = 1e-11);
        }
    }

    #[test]
    fn flat_torus_translation_form_is_harmonic_with_unit_norm() {
        let (m, dx, dy) = builtin::flat_torus(3);
        for c in [&dx, &dy] {
            let h = harmonic_representative(&m, c).unwrap();
            assert!(h.residual < 1e-10);
            // already harmonic: the projection changes nothing
            let drift = (h.cochain.values() - c.values()).amax();
            assert!(drift < 1e-12, "projection drift {drift}");
            assert_relative_eq!(
                harmonic_norm(&m, &h.cochain).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn hodge_kernel_dimensions_equal_betti_numbers() {
        let m = builtin::equilateral(builtin::torus7(), 1.0).unwrap();
        let betti = betti_numbers(m.complex());
        for p in 0..=2usize {
            let lap = HodgeLaplacian::new(&m, p).unwrap();
            assert_eq!(lap.kernel_dimension(1e-8), betti[p], "degree {p}");
        }
    }

    #[test]
    fn decomposition_is_orthogonal_and_sums_back() {
        let m = builtin::equilateral(builtin::torus7(), 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..4 {
            let c = Cochain::new(
                m.complex(),
                1,
                DVector::from_fn(m.complex().size(1), |_, _| rng.gen_range(-1.0..1.0)),
            )
            .unwrap();
            let parts = hodge_decompose(&m, &c).unwrap();
            assert!(parts.ortho_defect < 1e-9, "defect {}", parts.ortho_defect);
            let back = parts.exact.values() + parts.coexact.values() + parts.harmonic.values();
            assert_relative_eq!(back, c.values().clone(), epsilon = 1e-9);
            // harmonic part is in the Laplacian kernel
            let lap = HodgeLaplacian::new(&m, 1).unwrap();
            let img = lap.apply(parts.harmonic.values());
            assert!(img.amax() < 1e-7 * (1.0 + parts.harmonic.values().amax()));
        }
    }

    #[test]
    fn pinned_and_spectral_projections_agree() {
        let (m, dx, _) = builtin::flat_torus(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // perturb dx by a coboundary; both solvers must recover the same
        // harmonic representative
        let pot = DVector::from_fn(m.complex().size(0), |_, _| rng.gen_range(-1.0..1.0));
        let cob = m.complex().coboundary_matrix(0).map(|x| x as f64);
        let c = Cochain::new(m.complex(), 1, dx.values() + cob * pot).unwrap();
        let a = harmonic_representative_with(&m, &c, ProjectionSolver::Auto).unwrap();
        let b = harmonic_representative_with(&m, &c, ProjectionSolver::Spectral).unwrap();
        let gap = (a.cochain.values() - b.cochain.values()).amax();
        assert!(gap < 1e-9, "solver disagreement {gap}");
        let drift = (a.cochain.values() - dx.values()).amax();
        assert!(drift < 1e-9, "projection failed to remove coboundary: {drift}");
    }

    #[test]
    fn non_cocycle_rejected() {
        let m = builtin::equilateral(builtin::sphere(2), 1.0).unwrap();
        let mut values = DVector::zeros(m.complex().size(1));
        values[0] = 1.0;
        let c = Cochain::new(m.complex(), 1, values).unwrap();
        assert!(matches!(
            harmonic_representative(&m, &c),
            Err(WhitneyError::NotACocycle(_))
        ));
    }

    #[test]
    fn circle_spectral_gap_matches_continuum() {
        // lambda_1 of a circle of circumference L is (2 pi / L)^2.
        let m = builtin::circle_metric(24, 2.0 * std::f64::consts::PI);
        let lambda = spectral_lambda1(&m).unwrap();
        assert_relative_eq!(lambda, 1.0, max_relative = 0.02);
    }

    #[test]
    fn spectral_gap_needs_connectivity() {
        let k = SimplicialComplex::from_top_cells(&[vec![0, 1], vec![2, 3]]).unwrap();
        let m = MetricComplex::with_unit_lengths(k).unwrap();
        assert!(matches!(
            spectral_lambda1(&m),
            Err(WhitneyError::Disconnected)
        ));
    }
}
