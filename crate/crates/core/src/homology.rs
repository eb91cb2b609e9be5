//! Exact homology and cohomology over the rationals.
//!
//! Boundary matrices are integer matrices; ranks, kernels and quotient
//! bases are computed by Gaussian elimination over `BigRational`, so betti
//! numbers and basis chains are exact. Basis vectors are cleared to
//! primitive integer coefficient vectors before conversion to `f64`,
//! which keeps cycle identities exact in floating point as well.

use crate::complex::{Chain, Cochain, ComplexError, SimplicialComplex};
use nalgebra::{DMatrix, DVector};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use num::integer::Integer;
use num::ToPrimitive;

/// Dense rational matrix in row-major order. Desk-scale only.
#[derive(Debug, Clone)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn from_int(m: &DMatrix<i64>) -> Self {
        let mut out = RatMat::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = BigRational::from_integer(BigInt::from(m[(i, j)]));
            }
        }
        out
    }

    /// Builds the block matrix [a | b] from columns of `a` then `b`.
    pub fn hcat(a: &RatMat, b: &RatMat) -> Self {
        assert_eq!(a.rows, b.rows);
        let mut out = RatMat::zeros(a.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out[(i, j)] = a[(i, j)].clone();
            }
            for j in 0..b.cols {
                out[(i, a.cols + j)] = b[(i, j)].clone();
            }
        }
        out
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigRational>]) -> Self {
        let mut out = RatMat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                out[(i, j)] = c[i].clone();
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // Find a nonzero pivot in this column at or below `row`.
            let mut pivot_row = None;
            for r in row..self.rows {
                if !self[(r, col)].is_zero() {
                    pivot_row = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot_row else { continue };
            self.swap_rows(row, pr);
            let inv = self[(row, col)].recip();
            for j in col..self.cols {
                let v = &self[(row, j)] * &inv;
                self[(row, j)] = v;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..self.cols {
                        if !self[(row, j)].is_zero() {
                            let v = &self[(r, j)] - &factor * &self[(row, j)];
                            self[(r, j)] = v;
                        }
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(mut self) -> usize {
        self.rref().len()
    }

    /// Basis of the kernel as column vectors (one per free column).
    pub fn kernel_basis(mut self) -> Vec<Vec<BigRational>> {
        let pivots = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![BigRational::zero(); self.cols];
            v[free] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -self[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves a square system exactly; `None` when singular.
    pub fn solve_square(mut self, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.len(), self.rows);
        let n = self.rows;
        let mut b = rhs.to_vec();
        for col in 0..n {
            let mut pivot_row = None;
            for r in col..n {
                if !self[(r, col)].is_zero() {
                    pivot_row = Some(r);
                    break;
                }
            }
            let pr = pivot_row?;
            self.swap_rows(col, pr);
            b.swap(col, pr);
            let inv = self[(col, col)].recip();
            for j in col..n {
                let v = &self[(col, j)] * &inv;
                self[(col, j)] = v;
            }
            let bv = &b[col] * &inv;
            b[col] = bv;
            for r in 0..n {
                if r != col && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..n {
                        if !self[(col, j)].is_zero() {
                            let v = &self[(r, j)] - &factor * &self[(col, j)];
                            self[(r, j)] = v;
                        }
                    }
                    let bv = &b[r] - &factor * &b[col];
                    b[r] = bv;
                }
            }
        }
        Some(b)
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact rank of an integer matrix.
pub fn rational_rank(m: &DMatrix<i64>) -> usize {
    RatMat::from_int(m).rank()
}

/// Scales a rational vector to a primitive integer vector (clears
/// denominators, divides by the gcd, makes the first nonzero positive).
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            denom_lcm = denom_lcm.lcm(x.denom());
        }
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut ints {
                *x = -x.clone();
            }
        }
    }
    ints
}

fn to_f64_vector(ints: &[BigInt]) -> DVector<f64> {
    DVector::from_iterator(
        ints.len(),
        ints.iter().map(|x| x.to_f64().expect("coefficient fits in f64")),
    )
}

/// Betti number in degree p over the rationals.
pub fn betti(complex: &SimplicialComplex, p: usize) -> usize {
    if p > complex.dimension() {
        return 0;
    }
    let n_p = complex.size(p);
    let rank_dp = rational_rank(&complex.boundary_matrix(p));
    let rank_dp1 = if p + 1 <= complex.dimension() {
        rational_rank(&complex.boundary_matrix(p + 1))
    } else {
        0
    };
    n_p - rank_dp - rank_dp1
}

pub fn betti_numbers(complex: &SimplicialComplex) -> Vec<usize> {
    (0..=complex.dimension()).map(|p| betti(complex, p)).collect()
}

/// Kernel vectors of `cycles` that remain independent modulo the column
/// space of `boundaries`, scaled to primitive integer vectors.
fn quotient_basis(boundaries: &RatMat, kernel: Vec<Vec<BigRational>>, dim: usize) -> Vec<DVector<f64>> {
    let kernel_mat = RatMat::from_columns(dim, &kernel);
    let mut stacked = RatMat::hcat(boundaries, &kernel_mat);
    let pivots = stacked.rref();
    let offset = boundaries.ncols();
    pivots
        .into_iter()
        .filter(|&c| c >= offset)
        .map(|c| {
            let ints = primitive_integer_vector(&kernel[c - offset]);
            to_f64_vector(&ints)
        })
        .collect()
}

/// A basis of p-th homology: cycles with primitive integer coefficients,
/// linearly independent modulo boundaries.
pub fn homology_basis(
    complex: &SimplicialComplex,
    p: usize,
) -> Result<Vec<Chain>, ComplexError> {
    if p > complex.dimension() {
        return Ok(Vec::new());
    }
    let n_p = complex.size(p);
    let bd_p = RatMat::from_int(&complex.boundary_matrix(p));
    let kernel = bd_p.kernel_basis();
    let bd_up = if p + 1 <= complex.dimension() {
        RatMat::from_int(&complex.boundary_matrix(p + 1))
    } else {
        RatMat::zeros(n_p, 0)
    };
    let vectors = quotient_basis(&bd_up, kernel, n_p);
    debug_assert_eq!(vectors.len(), betti(complex, p));
    vectors
        .into_iter()
        .map(|v| Chain::new(complex, p, v))
        .collect()
}

/// A basis of p-th cohomology: cocycles with primitive integer values,
/// linearly independent modulo coboundaries.
pub fn cohomology_basis(
    complex: &SimplicialComplex,
    p: usize,
) -> Result<Vec<Cochain>, ComplexError> {
    if p > complex.dimension() {
        return Ok(Vec::new());
    }
    let n_p = complex.size(p);
    let cb_p = RatMat::from_int(&complex.coboundary_matrix(p));
    let kernel = cb_p.kernel_basis();
    let cb_down = if p > 0 {
        RatMat::from_int(&complex.coboundary_matrix(p - 1))
    } else {
        RatMat::zeros(n_p, 0)
    };
    let vectors = quotient_basis(&cb_down, kernel, n_p);
    debug_assert_eq!(vectors.len(), betti(complex, p));
    vectors
        .into_iter()
        .map(|v| Cochain::new(complex, p, v))
        .collect()
}
