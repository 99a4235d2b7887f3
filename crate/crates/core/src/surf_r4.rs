//! Regular surfaces in four-space: curvature ellipse, the resultant
//! trichotomy of points, asymptotic directions with their dual degenerate
//! normals, and the deeper cubic degeneracy at parabolic points.
//!
//! Everything here also serves surfaces obtained by projecting a surface in
//! five-space along a normal direction.

use crate::dirs::{self, DirEntry, DirTag, DirectionSet};
use crate::error::{GeomError, GeomResult};
use crate::height::{self, Grade, SffMatrix};
use crate::jet::MapGerm;
use crate::linalg::{self, Mat};
use crate::locus::{self, ConicLocus, PointType};
use crate::scalar::{Scalar, Sign};
use crate::unipoly::BinaryForm;

/// Curvature ellipse from a second fundamental form with two or three normal
/// rows.
pub fn ellipse<S: Scalar>(alpha: &SffMatrix<S>) -> ConicLocus<S> {
    assert!(
        alpha.nrows() == 2 || alpha.nrows() == 3,
        "curvature ellipses live in a 2- or 3-dimensional normal space"
    );
    ConicLocus::ellipse_family(alpha.col(0), alpha.col(1), alpha.col(2))
}

/// Position of the point relative to its curvature ellipse: the sign of the
/// resultant of the two rows, with rank drops flagged as inflections.
pub fn classify_little<S: Scalar>(alpha: &SffMatrix<S>) -> PointType {
    assert_eq!(alpha.nrows(), 2, "this trichotomy needs exactly two rows");
    if alpha.rank() <= 1 {
        return PointType::Inflection;
    }
    match locus::resultant_of_rows(&alpha.rows()[0], &alpha.rows()[1]).sign() {
        Sign::Positive => PointType::Hyperbolic,
        Sign::Negative => PointType::Elliptic,
        Sign::Zero => PointType::Parabolic,
    }
}

/// Coefficients of the asymptotic equation
/// A dx² + B dx dy + C dy² = det[II(u,u) II(u,u_θ)] = 0:
/// the three 2x2 minors of the second fundamental form.
pub(crate) fn asymptotic_form<S: Scalar>(alpha: &SffMatrix<S>) -> BinaryForm<S> {
    let r1 = &alpha.rows()[0];
    let r2 = &alpha.rows()[1];
    let a = r1[0].clone() * r2[1].clone() - r2[0].clone() * r1[1].clone();
    let b = r1[0].clone() * r2[2].clone() - r2[0].clone() * r1[2].clone();
    let c = r1[1].clone() * r2[2].clone() - r2[1].clone() * r1[2].clone();
    BinaryForm::new(vec![a, b, c])
}

/// The degenerate normal paired with a tangent direction u: the kernel line
/// of ν ↦ Hess(h_ν) u, computed in floating point from the two columns
/// Hess(g_i) u.
fn dual_normal_f64(rows: &[[f64; 3]; 2], u: &[f64]) -> Vec<f64> {
    let hu = |r: &[f64; 3]| [r[0] * u[0] + r[1] * u[1], r[1] * u[0] + r[2] * u[1]];
    let c1 = hu(&rows[0]);
    let c2 = hu(&rows[1]);
    // Rows of the 2x2 system ν1 c1 + ν2 c2 = 0; take the better-conditioned one.
    let top = [c1[0], c2[0]];
    let bot = [c1[1], c2[1]];
    let pick = if top[0].hypot(top[1]) >= bot[0].hypot(bot[1]) {
        top
    } else {
        bot
    };
    vec![pick[1], -pick[0]]
}

fn rows_f64<S: Scalar>(alpha: &SffMatrix<S>) -> [[f64; 3]; 2] {
    let mut out = [[0.0; 3]; 2];
    for (i, row) in alpha.rows().iter().enumerate().take(2) {
        for j in 0..3 {
            out[i][j] = row[j].to_f64();
        }
    }
    out
}

/// Asymptotic directions of a rank-2 second fundamental form, each with its
/// dual degenerate normal. Counts 2/1/0 mirror the resultant trichotomy.
pub fn asymptotic_dirs_r4<S: Scalar>(alpha: &SffMatrix<S>) -> GeomResult<DirectionSet> {
    assert_eq!(alpha.nrows(), 2);
    if alpha.rank() <= 1 {
        return Err(GeomError::WrongStratum(
            "inflection point: infinitely many asymptotic directions".into(),
        ));
    }
    let form = asymptotic_form(alpha);
    let roots = form
        .real_directions()
        .expect("rank 2 forms have nonzero minors");
    let rf = rows_f64(alpha);
    let entries = roots
        .into_iter()
        .map(|(dir, mult)| {
            let dual = dual_normal_f64(&rf, &dir);
            DirEntry::with_dual(dir.to_vec(), mult as usize, DirTag::Plain, dual)
        })
        .collect();
    Ok(DirectionSet::finite(entries))
}

/// Exact double root of a binary quadratic known to be parabolic.
fn double_root<S: Scalar>(a: S, b: S, c: S) -> Vec<S> {
    if !a.is_zero_val() {
        let two_a = a.clone() + a;
        linalg::canonical_direction(&[-b, two_a])
    } else if !c.is_zero_val() {
        vec![S::one(), S::zero()]
    } else {
        unreachable!("zero form has no isolated root")
    }
}

/// At a parabolic point, whether the contact along the unique degenerate
/// normal degenerates beyond A_2: the cubic term of the height function
/// vanishes on the Hessian kernel, which in coordinates adapted to the
/// asymptotic direction reads a₀₃ = 0.
///
/// `g` must be a Monge surface germ into R⁴ and `u` its unique asymptotic
/// direction.
pub fn detect_p3<S: Scalar>(g: &MapGerm<S>, u: &[f64]) -> GeomResult<bool> {
    let alpha = SffMatrix::from_monge(g);
    if classify_little(&alpha) != PointType::Parabolic {
        return Err(GeomError::WrongStratum(
            "the deeper contact test is defined at parabolic points only".into(),
        ));
    }
    let form = asymptotic_form(&alpha);
    let coeffs = form.coeffs();
    let exact_u = double_root(coeffs[0].clone(), coeffs[1].clone(), coeffs[2].clone());
    let uf: Vec<f64> = exact_u.iter().map(|v| v.to_f64()).collect();
    if dirs::angular_distance(&uf, u) > dirs::DIR_MATCH_TOL {
        return Err(GeomError::WrongStratum(
            "direction is not the asymptotic direction of this parabolic point".into(),
        ));
    }
    // The dual degenerate normal: kernel of ν ↦ Hess(h_ν) exact_u.
    let r1 = &alpha.rows()[0];
    let r2 = &alpha.rows()[1];
    let hu = |r: &[S]| {
        vec![
            r[0].clone() * exact_u[0].clone() + r[1].clone() * exact_u[1].clone(),
            r[1].clone() * exact_u[0].clone() + r[2].clone() * exact_u[1].clone(),
        ]
    };
    let k = Mat::from_rows(&[hu(r1), hu(r2)]).transpose();
    let nu = k
        .nullspace()
        .pop()
        .expect("parabolic pencil is singular along the asymptotic direction");
    let grade = height::grade_height(g, &linalg::canonical_direction(&nu))?;
    Ok(matches!(grade.grade, Grade::AGe3 | Grade::Corank2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::MapGerm;
    use crate::scalar::Rat;

    fn germ(src: &str) -> MapGerm<Rat> {
        MapGerm::parse(src).unwrap()
    }

    fn sff(rows: [[i64; 3]; 2]) -> SffMatrix<Rat> {
        SffMatrix::from_rows(
            2,
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from_int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn trichotomy_matches_models() {
        assert_eq!(classify_little(&sff([[2, 0, 0], [0, 0, 2]])), PointType::Hyperbolic);
        assert_eq!(classify_little(&sff([[2, 0, -2], [0, 1, 0]])), PointType::Elliptic);
        assert_eq!(classify_little(&sff([[2, 0, 0], [0, 1, 0]])), PointType::Parabolic);
        assert_eq!(classify_little(&sff([[2, 0, 0], [4, 0, 0]])), PointType::Inflection);
    }

    #[test]
    fn hyperbolic_model_directions_and_duals() {
        let set = asymptotic_dirs_r4(&sff([[2, 0, 0], [0, 0, 2]])).unwrap();
        assert_eq!(set.count(), 2);
        assert!(set.contains_dir(&[1.0, 0.0], 1e-12));
        assert!(set.contains_dir(&[0.0, 1.0], 1e-12));
        for e in &set.entries {
            let dual = e.dual_normal.as_ref().unwrap();
            // (1,0) pairs with the normal (0,1) and vice versa.
            let expect = if e.dir[0].abs() > 0.5 { [0.0, 1.0] } else { [1.0, 0.0] };
            assert!(dirs::angular_distance(dual, &expect) < 1e-12);
        }
    }

    #[test]
    fn parabolic_model_has_one_double_direction() {
        let set = asymptotic_dirs_r4(&sff([[2, 0, 0], [0, 1, 0]])).unwrap();
        assert_eq!(set.count(), 1);
        assert_eq!(set.entries[0].multiplicity, 2);
        assert!(set.contains_dir(&[0.0, 1.0], 1e-12));
        let dual = set.entries[0].dual_normal.as_ref().unwrap();
        assert!(dirs::angular_distance(dual, &[1.0, 0.0]) < 1e-12);
    }

    #[test]
    fn elliptic_model_has_none_and_inflection_errors() {
        let set = asymptotic_dirs_r4(&sff([[2, 0, -2], [0, 1, 0]])).unwrap();
        assert_eq!(set.count(), 0);
        assert!(matches!(
            asymptotic_dirs_r4(&sff([[2, 0, 0], [4, 0, 0]])),
            Err(GeomError::WrongStratum(_))
        ));
    }

    #[test]
    fn count_matches_trichotomy_on_a_sweep() {
        // l fixed, middle row swept: sign changes walk through all three types.
        for t in -6i64..=6 {
            let alpha = sff([[2, 0, t], [0, 1, 0]]);
            let class = classify_little(&alpha);
            if class == PointType::Inflection {
                continue;
            }
            let n = asymptotic_dirs_r4(&alpha).unwrap().count();
            let expect = match class {
                PointType::Hyperbolic => 2,
                PointType::Parabolic => 1,
                PointType::Elliptic => 0,
                PointType::Inflection => unreachable!(),
            };
            assert_eq!(n, expect, "t={t}");
        }
    }

    #[test]
    fn rotating_the_tangent_plane_rotates_directions() {
        // Conjugate the Hessians by the rational rotation (3/5, 4/5).
        let rot = [[0.6, -0.8], [0.8, 0.6]];
        let rows = [[2.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let mut rotated = Vec::new();
        for r in rows {
            let h = [[r[0], r[1]], [r[1], r[2]]];
            let mut out = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    let mut s = 0.0;
                    for p in 0..2 {
                        for q in 0..2 {
                            s += rot[p][i] * h[p][q] * rot[q][j];
                        }
                    }
                    out[i][j] = s;
                }
            }
            rotated.push(vec![out[0][0], out[0][1], out[1][1]]);
        }
        let alpha = SffMatrix::from_rows(2, rotated);
        let set = asymptotic_dirs_r4(&alpha).unwrap();
        // Directions pull back by the inverse rotation: u' = Rᵀ u.
        assert_eq!(set.count(), 1);
        assert!(set.contains_dir(&[0.8, 0.6], 1e-9));
    }

    #[test]
    fn cubic_obstruction_detects_the_deeper_parabolic_point() {
        // (x, y, x², xy + y³): height along (1,0) is x², cubic vanishes on the kernel.
        let flat = germ(
            "domain 2\ncodomain 4\ndegree 3\n0 1,0 1\n1 0,1 1\n2 2,0 1\n3 1,1 1\n3 0,3 1\n",
        );
        assert_eq!(detect_p3(&flat, &[0.0, 1.0]).unwrap(), true);

        // (x, y, x² + y³, xy): now the cubic term survives along the kernel.
        let generic = germ(
            "domain 2\ncodomain 4\ndegree 3\n0 1,0 1\n1 0,1 1\n2 2,0 1\n2 0,3 1\n3 1,1 1\n",
        );
        assert_eq!(detect_p3(&generic, &[0.0, 1.0]).unwrap(), false);

        // Degree-2 truncation carries no cubic at all.
        let two_jet =
            germ("domain 2\ncodomain 4\ndegree 2\n0 1,0 1\n1 0,1 1\n2 2,0 1\n3 1,1 1\n");
        assert_eq!(detect_p3(&two_jet, &[0.0, 1.0]).unwrap(), true);

        // Wrong stratum and wrong direction both refuse.
        let hyp = germ("domain 2\ncodomain 4\ndegree 2\n0 1,0 1\n1 0,1 1\n2 2,0 1\n3 0,2 1\n");
        assert!(detect_p3(&hyp, &[0.0, 1.0]).is_err());
        assert!(detect_p3(&flat, &[1.0, 0.0]).is_err());
    }
}
