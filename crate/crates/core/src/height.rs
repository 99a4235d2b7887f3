//! Height and distance-squared functions: Hessians, degeneracy, grading.
//!
//! The second-order data of a straightened germ is collected in an
//! [`SffMatrix`]; contracting it with a normal direction gives the Hessian of
//! the corresponding height function, whose corank and cubic behaviour drive
//! every contact classification in the crate.

use crate::error::{GeomError, GeomResult};
use crate::jet::MapGerm;
use crate::linalg::{self, Mat};
use crate::poly::{Mono, Poly};
use crate::scalar::Scalar;

/// Second-order coefficient matrix of a straightened germ: one row per
/// normal coordinate. Surface rows are `(l, m, n)`, the plain second partials
/// `(h_xx, h_xy, h_yy)`; 3-manifold rows are `(a, b, c, d, r, s)` for
/// `(xx, xy, xz, yy, yz, zz)`.
#[derive(Clone, PartialEq, Debug)]
pub struct SffMatrix<S> {
    domain: usize,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> SffMatrix<S> {
    /// Read the normal rows off a germ in graph position `(x.., h..)`.
    pub fn from_monge(germ: &MapGerm<S>) -> Self {
        let m = germ.domain();
        SffMatrix {
            domain: m,
            rows: (m..germ.codomain())
                .map(|i| second_order_row(germ, i))
                .collect(),
        }
    }

    /// Read the three normal rows off a rank-1 germ `(x, f_2, f_3, f_4)`.
    /// The columns are still plain `(xx, xy, yy)` partials.
    pub fn from_corank1(germ: &MapGerm<S>) -> Self {
        SffMatrix {
            domain: germ.domain(),
            rows: (1..germ.codomain())
                .map(|i| second_order_row(germ, i))
                .collect(),
        }
    }

    pub fn from_rows(domain: usize, rows: Vec<Vec<S>>) -> Self {
        let cols = if domain == 2 { 3 } else { 6 };
        assert!(rows.iter().all(|r| r.len() == cols));
        SffMatrix { domain, rows }
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn mat(&self) -> Mat<S> {
        Mat::from_rows(&self.rows)
    }

    /// Rank of the coefficient matrix (the stratum index for regular points).
    pub fn rank(&self) -> usize {
        self.mat().rank()
    }

    /// Column `j` across the normal rows, e.g. the `l` vector for surfaces.
    pub fn col(&self, j: usize) -> Vec<S> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    /// Hessian of the height function in normal direction `nu` (one entry
    /// per normal row).
    pub fn hessian(&self, nu: &[S]) -> Mat<S> {
        assert_eq!(nu.len(), self.rows.len());
        let c = |j: usize| linalg::dot(&self.col(j), nu);
        if self.domain == 2 {
            let (l, m, n) = (c(0), c(1), c(2));
            Mat::from_rows(&[vec![l, m.clone()], vec![m, n]])
        } else {
            let (a, b, cc, d, r, s) = (c(0), c(1), c(2), c(3), c(4), c(5));
            Mat::from_rows(&[
                vec![a, b.clone(), cc.clone()],
                vec![b, d, r.clone()],
                vec![cc, r, s],
            ])
        }
    }

    /// `det Hess(h_nu)` as a quadratic form in the normal coordinates of nu;
    /// its zero set is the cone of degenerate directions. Surface case only.
    pub fn degenerate_cone(&self) -> Poly<S> {
        assert_eq!(self.domain, 2, "cone as a quadratic form needs a 2x2 Hessian");
        let k = self.rows.len();
        assert!(k <= 3);
        let mut det = Poly::zero(k);
        for i in 0..k {
            for j in 0..k {
                // l_i n_j - m_i m_j, symmetrized over the nu_i nu_j monomial.
                let coeff = self.rows[i][0].clone() * self.rows[j][2].clone()
                    - self.rows[i][1].clone() * self.rows[j][1].clone();
                let mut e = [0u8; 3];
                e[i] += 1;
                e[j] += 1;
                det.add_term(Mono(e), coeff);
            }
        }
        det
    }
}

fn second_order_row<S: Scalar>(germ: &MapGerm<S>, i: usize) -> Vec<S> {
    let two = S::from_int(2);
    let c = germ.comp(i);
    if germ.domain() == 2 {
        vec![
            c.coeff(Mono([2, 0, 0])) * two.clone(),
            c.coeff(Mono([1, 1, 0])),
            c.coeff(Mono([0, 2, 0])) * two,
        ]
    } else {
        vec![
            c.coeff(Mono([2, 0, 0])) * two.clone(),
            c.coeff(Mono([1, 1, 0])),
            c.coeff(Mono([1, 0, 1])),
            c.coeff(Mono([0, 2, 0])) * two.clone(),
            c.coeff(Mono([0, 1, 1])),
            c.coeff(Mono([0, 0, 2])) * two,
        ]
    }
}

/// Contact grade of a height function at the origin.
#[derive(Clone, PartialEq, Debug)]
pub struct SingularityGrade<S> {
    pub grade: Grade,
    /// Present exactly for the corank-1 grades `A2` and `AGe3`.
    pub kernel: Option<Vec<S>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Grade {
    /// Morse (`A_1`) contact: nondegenerate Hessian.
    Nondegenerate,
    A2,
    /// `A_k`, `k >= 3`: the cubic vanishes along the Hessian kernel.
    AGe3,
    /// Hessian identically zero on the tangent space (`D`-type or worse).
    Corank2,
}

/// Accepts a direction either in full target coordinates (which must pair to
/// zero with the image of the differential) or in normal coordinates, and
/// returns it in full target coordinates.
pub fn extend_normal<S: Scalar>(germ: &MapGerm<S>, nu: &[S]) -> GeomResult<Vec<S>> {
    let n = germ.codomain();
    let j = germ.linear_part();
    if nu.len() == n {
        let pairing = j.transpose().matvec(nu);
        if !linalg::is_zero_vec(&pairing) {
            return Err(GeomError::NotNormal);
        }
        return Ok(nu.to_vec());
    }
    // Straightened germs occupy the leading target axes; count them.
    let tangent_axes = (0..n)
        .take_while(|&i| !linalg::is_zero_vec(&j.row(i)))
        .count();
    if nu.len() + tangent_axes != n {
        return Err(GeomError::NotNormal);
    }
    let mut full = vec![S::zero(); tangent_axes];
    full.extend(nu.iter().cloned());
    Ok(full)
}

/// The height function `x -> <g(x), nu>` as a polynomial.
pub fn height_function<S: Scalar>(germ: &MapGerm<S>, nu_full: &[S]) -> Poly<S> {
    assert_eq!(nu_full.len(), germ.codomain());
    let mut acc = Poly::zero(germ.domain());
    for (c, v) in germ.comps().iter().zip(nu_full) {
        acc = acc.add(&c.scale(v));
    }
    acc
}

/// Hessian at the origin of the height function in direction `nu` (full
/// target coordinates), read directly off the germ.
pub fn hessian_height_germ<S: Scalar>(germ: &MapGerm<S>, nu_full: &[S]) -> Mat<S> {
    let m = germ.domain();
    let mut h = Mat::zeros(m, m);
    for (i, v) in nu_full.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        h = h.add(&germ.hessian_comp(i).scale(v));
    }
    h
}

/// Grade the singularity of the height function of a straightened surface
/// germ in the normal direction `nu` (normal or full coordinates).
pub fn grade_height<S: Scalar>(germ: &MapGerm<S>, nu: &[S]) -> GeomResult<SingularityGrade<S>> {
    assert_eq!(germ.domain(), 2);
    let nu_full = extend_normal(germ, nu)?;
    if linalg::is_zero_vec(&nu_full) {
        return Err(GeomError::ZeroDirection);
    }
    let hess = hessian_height_germ(germ, &nu_full);
    let rank = hess.rank();
    match rank {
        2 => Ok(SingularityGrade {
            grade: Grade::Nondegenerate,
            kernel: None,
        }),
        0 => Ok(SingularityGrade {
            grade: Grade::Corank2,
            kernel: None,
        }),
        _ => {
            let kernel = hess.nullspace().pop().expect("rank 1 has a kernel line");
            let kernel = linalg::canonical_direction(&kernel);
            let cubic = height_function(germ, &nu_full).homogeneous_part(3);
            let along = cubic.eval(&[kernel[0].clone(), kernel[1].clone()]);
            let grade = if along.is_zero_val() {
                Grade::AGe3
            } else {
                Grade::A2
            };
            Ok(SingularityGrade {
                grade,
                kernel: Some(kernel),
            })
        }
    }
}

/// Exact Hessian at the origin of the distance-squared function
/// `x -> |g(x) - a|^2`, namely `2 (J^T J - sum_i a_i Hess g_i)`.
pub fn hessian_distance_sq<S: Scalar>(germ: &MapGerm<S>, a: &[S]) -> Mat<S> {
    assert_eq!(a.len(), germ.codomain());
    let j = germ.linear_part();
    let mut h = j.transpose().matmul(&j);
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        h = h.sub(&germ.hessian_comp(i).scale(ai));
    }
    h.scale(&S::from_int(2))
}

/// Gradient at the origin of the same function: `-2 J^T a`. Nonzero exactly
/// when the center fails to sit in the normal space.
pub fn gradient_distance_sq<S: Scalar>(germ: &MapGerm<S>, a: &[S]) -> Vec<S> {
    let j = germ.linear_part();
    linalg::vscale(&j.transpose().matvec(a), &S::from_int(-2))
}

/// The full polynomial `|g(x) - a|^2` (constant term included), for grid and
/// finite-difference checks.
pub fn distance_sq_poly<S: Scalar>(germ: &MapGerm<S>, a: &[S]) -> Poly<S> {
    assert_eq!(a.len(), germ.codomain());
    let m = germ.domain();
    let mut acc = Poly::zero(m);
    for (c, ai) in germ.comps().iter().zip(a) {
        let diff = c.sub(&Poly::constant(m, ai.clone()));
        acc = acc.add(&diff.mul(&diff));
    }
    acc
}
