//! Dense revised simplex for equality-form linear programs.
//!
//! Solves `min c'x  s.t.  Ax = b, x >= 0` with a two-phase method and
//! Bland's least-index rule, so the iteration terminates without cycling.
//! The basis inverse is maintained explicitly through eta updates and
//! refactorized periodically from an LU decomposition. Optimal bases are
//! re-verified in exact rational arithmetic: the float simplex chooses the
//! basis, exact arithmetic certifies feasibility and the objective.
//!
//! The homological norm computations lean on this module; the LP sizes
//! involved are a few hundred rows, which dense linear algebra handles
//! comfortably.

use crate::homology::RatMat;
use nalgebra::{DMatrix, DVector};
use num::rational::BigRational;
use num::{BigInt, Signed, Zero};
use thiserror::Error;

/// `min c'x  s.t.  Ax = b, x >= 0`.
#[derive(Debug, Clone)]
pub struct StandardForm {
    pub costs: DVector<f64>,
    pub constraints: DMatrix<f64>,
    pub rhs: DVector<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// One slot of the optimal basis. Artificial variables can stay basic at
/// value zero when constraint rows are linearly dependent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisVar {
    Structural(usize),
    Artificial(usize),
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Structural variable values (zeros unless status is Optimal).
    pub x: DVector<f64>,
    pub objective: f64,
    /// Row prices at termination.
    pub dual: DVector<f64>,
    /// |c'x - b'y| at the claimed optimum; complementary slackness check.
    pub duality_gap: f64,
    /// max_i |(Ax - b)_i|
    pub primal_residual: f64,
    /// Most negative reduced cost at termination (0 if none negative).
    pub dual_violation: f64,
    pub iterations: usize,
    pub basis: Vec<BasisVar>,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("cost vector has {0} entries but the matrix has {1} columns")]
    CostLength(usize, usize),
    #[error("rhs has {0} entries but the matrix has {1} rows")]
    RhsLength(usize, usize),
    #[error("simplex did not terminate within {0} iterations")]
    IterationLimit(usize),
    #[error("basis matrix became singular during refactorization")]
    SingularBasis,
    #[error("exact verification failed: {0}")]
    VerificationFailed(String),
}

const TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;

struct Tableau<'a> {
    a: &'a DMatrix<f64>,
    /// rhs with rows flipped to be nonnegative
    b: DVector<f64>,
    /// per-row sign flip applied to A and b
    row_sign: Vec<f64>,
    m: usize,
    n: usize,
    basis: Vec<usize>,
    binv: DMatrix<f64>,
    xb: DVector<f64>,
    pivots_since_refactor: usize,
    iterations: usize,
}

impl<'a> Tableau<'a> {
    fn new(a: &'a DMatrix<f64>, rhs: &DVector<f64>) -> Self {
        let m = a.nrows();
        let n = a.ncols();
        let row_sign: Vec<f64> = (0..m)
            .map(|i| if rhs[i] < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let b = DVector::from_fn(m, |i, _| rhs[i] * row_sign[i]);
        let basis: Vec<usize> = (0..m).map(|i| n + i).collect();
        Tableau {
            a,
            b: b.clone(),
            row_sign,
            m,
            n,
            basis,
            binv: DMatrix::identity(m, m),
            xb: b,
            pivots_since_refactor: 0,
            iterations: 0,
        }
    }

    /// Column j of the flipped constraint matrix; artificial columns are
    /// unit vectors.
    fn column(&self, j: usize) -> DVector<f64> {
        if j < self.n {
            DVector::from_fn(self.m, |i, _| self.a[(i, j)] * self.row_sign[i])
        } else {
            let mut e = DVector::zeros(self.m);
            e[j - self.n] = 1.0;
            e
        }
    }

    fn is_basic(&self, j: usize) -> bool {
        self.basis.contains(&j)
    }

    fn prices(&self, costs: &dyn Fn(usize) -> f64) -> DVector<f64> {
        let cb = DVector::from_fn(self.m, |i, _| costs(self.basis[i]));
        self.binv.transpose() * cb
    }

    fn reduced_cost(&self, j: usize, y: &DVector<f64>, costs: &dyn Fn(usize) -> f64) -> f64 {
        costs(j) - y.dot(&self.column(j))
    }

    fn refactorize(&mut self) -> Result<(), LpError> {
        let mut bmat = DMatrix::zeros(self.m, self.m);
        for (i, &j) in self.basis.iter().enumerate() {
            bmat.set_column(i, &self.column(j));
        }
        self.binv = bmat.try_inverse().ok_or(LpError::SingularBasis)?;
        self.xb = &self.binv * &self.b;
        self.pivots_since_refactor = 0;
        Ok(())
    }

    fn pivot(&mut self, entering: usize, row: usize, direction: &DVector<f64>) {
        let t = self.xb[row] / direction[row];
        for i in 0..self.m {
            if i != row {
                self.xb[i] -= direction[i] * t;
            }
        }
        self.xb[row] = t;
        // Eta update of the inverse: scale the pivot row, eliminate the rest.
        let pivot_row = self.binv.row(row) / direction[row];
        for i in 0..self.m {
            if i != row {
                let factor = direction[i];
                for k in 0..self.m {
                    self.binv[(i, k)] -= factor * pivot_row[k];
                }
            }
        }
        for k in 0..self.m {
            self.binv[(row, k)] = pivot_row[k];
        }
        self.basis[row] = entering;
        self.pivots_since_refactor += 1;
    }

    /// Runs simplex iterations until optimality or unboundedness.
    /// `enterable` restricts the candidate entering columns.
    fn optimize(
        &mut self,
        costs: &dyn Fn(usize) -> f64,
        enterable: &dyn Fn(usize) -> bool,
        limit: usize,
    ) -> Result<LpStatus, LpError> {
        loop {
            if self.iterations >= limit {
                return Err(LpError::IterationLimit(limit));
            }
            self.iterations += 1;
            if self.pivots_since_refactor >= REFACTOR_EVERY {
                self.refactorize()?;
            }
            let y = self.prices(costs);
            // Bland: smallest-index column with negative reduced cost.
            let mut entering = None;
            for j in 0..self.n + self.m {
                if !enterable(j) || self.is_basic(j) {
                    continue;
                }
                if self.reduced_cost(j, &y, costs) < -TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(q) = entering else {
                return Ok(LpStatus::Optimal);
            };
            let direction = &self.binv * self.column(q);
            // Ratio test; ties resolved by the smallest basic index (Bland).
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                if direction[i] > TOL {
                    let ratio = self.xb[i] / direction[i];
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((best, best_ratio)) => {
                            if ratio < best_ratio - TOL
                                || (ratio < best_ratio + TOL && self.basis[i] < self.basis[best])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Ok(LpStatus::Unbounded);
            };
            self.pivot(q, row, &direction);
        }
    }
}

/// Solves the LP. Infeasibility and unboundedness are reported through
/// `status`, not as errors; errors mean the solver itself broke down.
pub fn solve(lp: &StandardForm) -> Result<LpSolution, LpError> {
    let m = lp.constraints.nrows();
    let n = lp.constraints.ncols();
    if lp.costs.len() != n {
        return Err(LpError::CostLength(lp.costs.len(), n));
    }
    if lp.rhs.len() != m {
        return Err(LpError::RhsLength(lp.rhs.len(), m));
    }
    if m == 0 {
        let unbounded = (0..n).any(|j| lp.costs[j] < -TOL);
        return Ok(LpSolution {
            status: if unbounded {
                LpStatus::Unbounded
            } else {
                LpStatus::Optimal
            },
            x: DVector::zeros(n),
            objective: 0.0,
            dual: DVector::zeros(0),
            duality_gap: 0.0,
            primal_residual: 0.0,
            dual_violation: 0.0,
            iterations: 0,
            basis: Vec::new(),
        });
    }

    let mut t = Tableau::new(&lp.constraints, &lp.rhs);
    let limit = 400 * (m + n) + 2000;

    // Phase I: minimize the sum of artificial variables.
    let phase1 = |j: usize| if j < n { 0.0 } else { 1.0 };
    let status1 = t.optimize(&phase1, &|_| true, limit)?;
    debug_assert_eq!(status1, LpStatus::Optimal, "phase I cannot be unbounded");
    let artificial_sum: f64 = (0..m)
        .filter(|&i| t.basis[i] >= n)
        .map(|i| t.xb[i])
        .sum();
    let scale = 1.0f64.max(t.b.amax());
    if artificial_sum > 1e-7 * scale {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: DVector::zeros(n),
            objective: f64::INFINITY,
            dual: t.prices(&phase1),
            duality_gap: f64::NAN,
            primal_residual: f64::NAN,
            dual_violation: f64::NAN,
            iterations: t.iterations,
            basis: t.basis.iter().map(|&j| classify(j, n)).collect(),
        });
    }

    // Drive basic artificials out on rows where a structural column can
    // replace them; rows with no candidate are redundant and keep their
    // artificial pinned at zero.
    for row in 0..m {
        if t.basis[row] < n {
            continue;
        }
        let mut replacement = None;
        for j in 0..n {
            if t.is_basic(j) {
                continue;
            }
            let d = &t.binv * t.column(j);
            if d[row].abs() > 1e-7 {
                replacement = Some((j, d));
                break;
            }
        }
        if let Some((j, d)) = replacement {
            t.pivot(j, row, &d);
        }
    }

    // Phase II: artificial columns may never re-enter.
    let phase2 = |j: usize| if j < n { lp.costs[j] } else { 0.0 };
    let status2 = t.optimize(&phase2, &|j| j < n, limit)?;

    let mut x = DVector::zeros(n);
    for (i, &j) in t.basis.iter().enumerate() {
        if j < n {
            x[j] = t.xb[i];
        }
    }
    let objective = lp.costs.dot(&x);
    let dual_flipped = t.prices(&phase2);
    // Undo the internal row flips so the prices refer to the caller's rows.
    let dual = DVector::from_fn(m, |i, _| dual_flipped[i] * t.row_sign[i]);
    let (duality_gap, dual_violation) = if status2 == LpStatus::Optimal {
        let gap = (objective - dual.dot(&lp.rhs)).abs();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            if !t.is_basic(j) {
                worst = worst.min(t.reduced_cost(j, &dual_flipped, &phase2));
            }
        }
        (gap, -worst)
    } else {
        (f64::NAN, f64::NAN)
    };
    let primal_residual = (&lp.constraints * &x - &lp.rhs).amax();
    Ok(LpSolution {
        status: status2,
        x,
        objective,
        dual,
        duality_gap,
        primal_residual,
        dual_violation,
        iterations: t.iterations,
        basis: t.basis.iter().map(|&j| classify(j, n)).collect(),
    })
}

fn classify(j: usize, n: usize) -> BasisVar {
    if j < n {
        BasisVar::Structural(j)
    } else {
        BasisVar::Artificial(j - n)
    }
}

fn rational_of(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Re-solves the optimal basis system in exact rational arithmetic and
/// returns the exact objective value. Fails if the basis is infeasible or
/// if an artificial variable carries a nonzero value, either of which
/// means the float iteration picked a wrong basis.
pub fn verify_rational(lp: &StandardForm, sol: &LpSolution) -> Result<BigRational, LpError> {
    if sol.status != LpStatus::Optimal {
        return Err(LpError::VerificationFailed(
            "only optimal solutions can be certified".into(),
        ));
    }
    let m = lp.constraints.nrows();
    if m == 0 {
        return Ok(BigRational::zero());
    }
    let mut bmat = RatMat::zeros(m, m);
    for (col, var) in sol.basis.iter().enumerate() {
        match *var {
            BasisVar::Structural(j) => {
                for i in 0..m {
                    bmat[(i, col)] = rational_of(lp.constraints[(i, j)]);
                }
            }
            BasisVar::Artificial(r) => {
                // Matches the solver's internal sign flip for negative rhs.
                let sign = if lp.rhs[r] < 0.0 { -1 } else { 1 };
                bmat[(r, col)] = BigRational::from_integer(BigInt::from(sign));
            }
        }
    }
    let rhs: Vec<BigRational> = (0..m).map(|i| rational_of(lp.rhs[i])).collect();
    let xb = bmat
        .solve_square(&rhs)
        .ok_or_else(|| LpError::VerificationFailed("optimal basis is singular".into()))?;
    let mut objective = BigRational::zero();
    for (value, var) in xb.iter().zip(&sol.basis) {
        if value.is_negative() {
            return Err(LpError::VerificationFailed(format!(
                "basic variable {var:?} is negative in exact arithmetic"
            )));
        }
        match *var {
            BasisVar::Structural(j) => {
                objective += rational_of(lp.costs[j]) * value;
            }
            BasisVar::Artificial(_) => {
                if !value.is_zero() {
                    return Err(LpError::VerificationFailed(
                        "artificial variable is nonzero in exact arithmetic".into(),
                    ));
                }
            }
        }
    }
    Ok(objective)
}
