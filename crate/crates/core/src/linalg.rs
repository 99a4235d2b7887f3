//! Small dense matrices and vector helpers over an abstract scalar.
//!
//! Everything here is sized for the geometry at hand (dimensions 2 through
//! 6), so plain Gauss-Jordan with a magnitude pivot is all we need. Exact
//! scalars make rank, kernels and affine solution sets decidable.

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<S> {
    nrows: usize,
    ncols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Mat {
            nrows,
            ncols,
            data: vec![S::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols);
            data.extend(r.iter().cloned());
        }
        Mat { nrows, ncols, data }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Mat::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        (0..self.ncols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.nrows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Mat::from_fn(self.nrows, self.ncols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Mat::from_fn(self.nrows, self.ncols, |i, j| {
            self[(i, j)].clone() - other[(i, j)].clone()
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Mat::from_fn(self.nrows, self.ncols, |i, j| {
            self[(i, j)].clone() * c.clone()
        })
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        Mat::from_fn(self.nrows, other.ncols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.ncols {
                acc = acc + self[(i, k)].clone() * other[(k, j)].clone();
            }
            acc
        })
    }

    pub fn matvec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| {
                let mut acc = S::zero();
                for k in 0..self.ncols {
                    acc = acc + self[(i, k)].clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self[(i, j)].to_f64()).collect())
            .collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.ncols {
            if row == m.nrows {
                break;
            }
            // Choose the numerically largest candidate; harmless for exact
            // scalars, essential for floats.
            let mut best = None;
            let mut best_mag = 0.0f64;
            for r in row..m.nrows {
                if !m[(r, col)].is_zero_val() {
                    let mag = m[(r, col)].to_f64().abs();
                    if best.is_none() || mag > best_mag {
                        best = Some(r);
                        best_mag = mag;
                    }
                }
            }
            let Some(p) = best else { continue };
            m.swap_rows(row, p);
            let inv = S::one() / m[(row, col)].clone();
            for j in col..m.ncols {
                m[(row, j)] = m[(row, j)].clone() * inv.clone();
            }
            for r in 0..m.nrows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for j in col..m.ncols {
                        let delta = factor.clone() * m[(row, j)].clone();
                        m[(r, j)] = m[(r, j)].clone() - delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> S {
        assert_eq!(self.nrows, self.ncols);
        let mut m = self.clone();
        let mut det = S::one();
        for col in 0..m.ncols {
            let mut best = None;
            let mut best_mag = 0.0f64;
            for r in col..m.nrows {
                if !m[(r, col)].is_zero_val() {
                    let mag = m[(r, col)].to_f64().abs();
                    if best.is_none() || mag > best_mag {
                        best = Some(r);
                        best_mag = mag;
                    }
                }
            }
            let Some(p) = best else { return S::zero() };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * pivot.clone();
            let inv = S::one() / pivot;
            for r in col + 1..m.nrows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone() * inv.clone();
                for j in col..m.ncols {
                    let delta = factor.clone() * m[(col, j)].clone();
                    m[(r, j)] = m[(r, j)].clone() - delta;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = S::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![S::zero(); self.ncols];
                v[fc] = S::one();
                for (pi, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(pi, fc)].clone();
                }
                v
            })
            .collect()
    }

    /// Full affine solution set of `self * x = b`: a particular solution
    /// (free variables set to zero) plus a kernel basis. `None` when the
    /// system is inconsistent.
    pub fn solve_affine(&self, b: &[S]) -> Option<(Vec<S>, Vec<Vec<S>>)> {
        assert_eq!(b.len(), self.nrows);
        let mut aug = Mat::zeros(self.nrows, self.ncols + 1);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.ncols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.ncols) {
            return None;
        }
        let mut x = vec![S::zero(); self.ncols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(pi, self.ncols)].clone();
        }
        Some((x, self.nullspace()))
    }

    /// Unique solution of a square or overdetermined consistent system;
    /// `None` if inconsistent or underdetermined.
    pub fn solve_unique(&self, b: &[S]) -> Option<Vec<S>> {
        let (x, kernel) = self.solve_affine(b)?;
        if kernel.is_empty() {
            Some(x)
        } else {
            None
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.ncols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        let idx = i * self.ncols + j;
        &mut self.data[idx]
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn norm_sq<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

pub fn vadd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vsub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vscale<S: Scalar>(a: &[S], c: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

pub fn vneg<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn is_zero_vec<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(|x| x.is_zero_val())
}

pub fn cross3<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    assert!(a.len() == 3 && b.len() == 3);
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// Scale to unit length, when the squared norm has a square root in the
/// scalar type (always true for floats, perfect squares only for rationals).
pub fn unitize<S: Scalar>(a: &[S]) -> Option<Vec<S>> {
    let n2 = norm_sq(a);
    if n2.is_zero_val() {
        return None;
    }
    let n = n2.try_sqrt()?;
    Some(vscale(a, &(S::one() / n)))
}

/// Canonical representative of the line through `v`: divide by the first
/// coordinate that is nonzero, so equal lines compare equal.
pub fn normalize_leading<S: Scalar>(v: &[S]) -> Option<Vec<S>> {
    let lead = v.iter().find(|c| !c.is_zero_val())?;
    let inv = S::one() / lead.clone();
    Some(vscale(v, &inv))
}

/// Deterministic representative of a line: unit length whenever the norm has
/// an exact square root (always, for floats), otherwise leading coefficient
/// one; the first nonzero coordinate is positive either way.
pub fn canonical_direction<S: Scalar>(v: &[S]) -> Vec<S> {
    let mut u = unitize(v).or_else(|| normalize_leading(v)).expect("nonzero vector");
    if u.iter()
        .find(|c| !c.is_zero_val())
        .map_or(false, |c| c.sign() == crate::scalar::Sign::Negative)
    {
        u = vneg(&u);
    }
    u
}

/// Orthogonal matrix whose column `axis` equals the given unit vector, built
/// from the Householder reflection swapping `v` and `e_axis`; no square roots
/// appear, so a rational unit vector yields a rational frame. The first
/// column other than `axis` is negated to land in the rotation group.
pub fn orthonormal_completion<S: Scalar>(v: &[S], axis: usize) -> Mat<S> {
    let n = v.len();
    debug_assert!((norm_sq(v) - S::one()).is_zero_val(), "need a unit vector");
    let mut e = vec![S::zero(); n];
    e[axis] = S::one();
    let w = vsub(v, &e);
    let ww = norm_sq(&w);
    let mut h: Mat<S> = Mat::identity(n);
    if !ww.is_zero_val() {
        let two = S::from_int(2);
        for i in 0..n {
            for j in 0..n {
                let delta = two.clone() * w[i].clone() * w[j].clone() / ww.clone();
                h[(i, j)] = h[(i, j)].clone() - delta;
            }
        }
        // A reflection has determinant -1; flip one complementary column.
        let flip = if axis == 0 { 1 } else { 0 };
        for i in 0..n {
            h[(i, flip)] = -h[(i, flip)].clone();
        }
    }
    h
}

/// Canonical basis of the span of the given vectors: the nonzero rows of the
/// reduced row echelon form. Deterministic and exact over rationals.
pub fn row_space_basis<S: Scalar>(rows: &[Vec<S>]) -> Vec<Vec<S>> {
    if rows.is_empty() {
        return vec![];
    }
    let (r, pivots) = Mat::from_rows(rows).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// Gram-Schmidt on the given linearly independent vectors. Returns `None`
/// when a required square root does not exist in the scalar type, which for
/// rationals means the frame cannot be represented exactly.
pub fn orthonormalize<S: Scalar>(vecs: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let mut out: Vec<Vec<S>> = Vec::with_capacity(vecs.len());
    for v in vecs {
        let mut u = v.clone();
        for prev in &out {
            let proj = dot(&u, prev);
            u = vsub(&u, &vscale(prev, &proj));
        }
        out.push(unitize(&u)?);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rint, Rat};

    #[test]
    fn inverse_and_det() {
        let m: Mat<Rat> = Mat::from_rows(&[
            vec![rint(2), rint(1), rint(0)],
            vec![rint(0), rint(1), rint(3)],
            vec![rint(1), rint(0), rint(1)],
        ]);
        assert_eq!(m.det(), rint(5));
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::identity(3));
    }

    #[test]
    fn rank_and_nullspace() {
        let m: Mat<Rat> = Mat::from_rows(&[
            vec![rint(1), rint(2), rint(3), rint(4)],
            vec![rint(2), rint(4), rint(6), rint(8)],
            vec![rint(0), rint(1), rint(0), rint(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&m.matvec(v)));
        }
    }

    #[test]
    fn affine_solutions_classify_consistency() {
        let m: Mat<Rat> = Mat::from_rows(&[
            vec![rint(1), rint(0), rint(1)],
            vec![rint(0), rint(1), rint(1)],
        ]);
        let (x, kernel) = m.solve_affine(&[rint(2), rint(3)]).unwrap();
        assert_eq!(kernel.len(), 1);
        assert_eq!(m.matvec(&x), vec![rint(2), rint(3)]);
        // Inconsistent system.
        let bad: Mat<Rat> = Mat::from_rows(&[
            vec![rint(1), rint(1), rint(0)],
            vec![rint(2), rint(2), rint(0)],
        ]);
        assert!(bad.solve_affine(&[rint(1), rint(3)]).is_none());
    }

    #[test]
    fn householder_completion_is_rational_rotation() {
        let v = vec![rat(3, 5), rat(4, 5), rint(0)];
        let q = orthonormal_completion(&v, 2);
        assert_eq!(q.col(2), v);
        assert_eq!(q.transpose().matmul(&q), Mat::identity(3));
        assert_eq!(q.det(), rint(1));
        // Antipodal special case.
        let w = vec![rint(0), rint(0), rint(-1)];
        let qw = orthonormal_completion(&w, 2);
        assert_eq!(qw.col(2), w);
        assert_eq!(qw.det(), rint(1));
    }

    #[test]
    fn gram_schmidt_exact_when_squares_are_perfect() {
        let cols = vec![vec![rat(3, 5), rat(4, 5)], vec![rint(1), rint(0)]];
        let on = orthonormalize(&cols).unwrap();
        assert_eq!(on[1], vec![rat(4, 5), rat(-3, 5)]);
        // Norm sqrt(2) is not rational: refuse rather than approximate.
        let bad = vec![vec![rint(1), rint(1)]];
        assert!(orthonormalize::<Rat>(&bad).is_none());
    }

    #[test]
    fn cross_product_is_right_handed() {
        let x = vec![rint(1), rint(0), rint(0)];
        let y = vec![rint(0), rint(1), rint(0)];
        assert_eq!(cross3(&x, &y), vec![rint(0), rint(0), rint(1)]);
    }
}
