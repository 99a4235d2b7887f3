//! Second and third order geometry of regular surfaces in five-space.
//!
//! The curvature locus here is a (possibly degenerate) ellipse in a normal
//! space of dimension three. Classification splits on the rank of the second
//! fundamental form: rank 3 gives the generic stratum, rank 2 splits further
//! into hyperbolic, elliptic and parabolic subtypes by the tangency of the
//! coordinate quadratics, and each subtype carries its own asymptotic
//! direction counts and dual normals.

use crate::dirs::{DirEntry, DirTag, DirectionSet};
use crate::error::{GeomError, GeomResult};
use crate::height::SffMatrix;
use crate::jet::MapGerm;
use crate::linalg::{self, Mat};
use crate::locus::{self, ConicLocus, Kappa, MStratum};
use crate::poly::Poly;
use crate::scalar::{Scalar, Sign};
use crate::surf_r4;
use crate::unipoly::{BinaryForm, UniPoly};

/// Refinement of the rank-2 stratum by the mutual position of the two
/// independent coordinate quadratics: transverse intersection of their zero
/// sets, no common zero, or a common zero with tangency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum M2Subtype {
    Hyperbolic,
    Elliptic,
    Parabolic,
}

impl std::fmt::Display for M2Subtype {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            M2Subtype::Hyperbolic => write!(f, "M2_H"),
            M2Subtype::Elliptic => write!(f, "M2_E"),
            M2Subtype::Parabolic => write!(f, "M2_P"),
        }
    }
}

/// Pointwise classification data for a surface in five-space.
#[derive(Clone, Debug)]
pub struct R5PointClass<S: Scalar> {
    pub stratum: MStratum,
    /// Present exactly on the rank-2 stratum.
    pub subtype: Option<M2Subtype>,
    /// Whether the point lies on a normal-curvature segment off the origin.
    pub semiumbilic: bool,
    /// Umbilic curvature, the distance from the point to the affine plane of
    /// the curvature locus.
    pub kappa: Kappa<S>,
    /// Unit normal to the first normal space inside the 3-dimensional normal
    /// space, defined exactly on the rank-2 stratum.
    pub flat_umbilic: Option<Vec<S>>,
}

fn effective_rows<S: Scalar>(alpha: &SffMatrix<S>) -> Vec<Vec<S>> {
    let rows: Vec<Vec<S>> = (0..alpha.nrows()).map(|i| alpha.rows()[i].clone()).collect();
    linalg::row_space_basis(&rows)
}

/// Classify a point of a surface in R^5 from its second fundamental form.
///
/// Rank 0 (a totally geodesic point) is outside the supported strata and is
/// reported as an error rather than a class.
pub fn classify_r5<S: Scalar>(alpha: &SffMatrix<S>) -> GeomResult<R5PointClass<S>> {
    assert_eq!(alpha.nrows(), 3, "a surface in R^5 has three normal directions");
    let locus = surf_r4::ellipse(alpha);
    let stratum = locus.mstratum();
    if stratum == MStratum::M0 {
        return Err(GeomError::WrongStratum(
            "totally geodesic point: the curvature locus is a single point at the origin".into(),
        ));
    }

    let subtype = if stratum == MStratum::M2 {
        let basis = effective_rows(alpha);
        debug_assert_eq!(basis.len(), 2);
        Some(match locus::resultant_of_rows(&basis[0], &basis[1]).sign() {
            Sign::Positive => M2Subtype::Hyperbolic,
            Sign::Negative => M2Subtype::Elliptic,
            Sign::Zero => M2Subtype::Parabolic,
        })
    } else {
        None
    };

    let flat_umbilic = if stratum == MStratum::M2 {
        let span = Mat::from_rows(&[
            alpha.col(0),
            alpha.col(1),
            alpha.col(2),
        ]);
        let mut kernel = span.nullspace();
        debug_assert_eq!(kernel.len(), 1);
        Some(linalg::canonical_direction(&kernel.pop().unwrap()))
    } else {
        None
    };

    let semiumbilic = locus.is_semiumbilic();
    // A segment off the origin forces a positive resultant, so semiumbilic
    // points always land in the hyperbolic subtype.
    debug_assert!(!semiumbilic || subtype == Some(M2Subtype::Hyperbolic));

    Ok(R5PointClass {
        stratum,
        subtype,
        semiumbilic,
        kappa: Kappa::from_sq(locus.kappa_sq()),
        flat_umbilic,
    })
}

/// The binary quadratic whose real roots are the tangent directions where the
/// two independent coordinate quadratics of a rank-2 form are proportional.
/// Its root count (2, 0, or 1) matches the subtype (hyperbolic, elliptic,
/// parabolic), and its discriminant is the resultant used to classify.
pub fn tangency_quadratic<S: Scalar>(alpha: &SffMatrix<S>) -> GeomResult<BinaryForm<S>> {
    let basis = effective_rows(alpha);
    if basis.len() != 2 {
        return Err(GeomError::WrongStratum(format!(
            "the tangency criterion needs an M2 point, found M{}",
            basis.len()
        )));
    }
    Ok(surf_r4::asymptotic_form(&SffMatrix::from_rows(2, basis)))
}

fn coord_quadratic<S: Scalar>(row: &[S]) -> BinaryForm<S> {
    BinaryForm::new(vec![
        row[0].clone(),
        S::from_int(2) * row[1].clone(),
        row[2].clone(),
    ])
}

fn angle_derivative<S: Scalar>(q: &BinaryForm<S>) -> BinaryForm<S> {
    // d/dtheta of p c^2 + q cs + r s^2 is q c^2 + 2(r - p) cs - q s^2.
    let c = q.coeffs();
    let two = S::from_int(2);
    BinaryForm::new(vec![
        c[1].clone(),
        two * (c[2].clone() - c[0].clone()),
        -c[1].clone(),
    ])
}

/// The quartic Wronskian of the two coordinate quadratics along the circle of
/// tangent directions. It factors exactly as 2 (c^2 + s^2) times the tangency
/// quadratic, which makes it a useful independent witness for that quadratic.
pub fn tangency_wronskian<S: Scalar>(alpha: &SffMatrix<S>) -> GeomResult<BinaryForm<S>> {
    let basis = effective_rows(alpha);
    if basis.len() != 2 {
        return Err(GeomError::WrongStratum(format!(
            "the tangency criterion needs an M2 point, found M{}",
            basis.len()
        )));
    }
    let p = coord_quadratic(&basis[0]);
    let q = coord_quadratic(&basis[1]);
    let w_hi = p.mul(&angle_derivative(&q));
    let w_lo = q.mul(&angle_derivative(&p));
    let coeffs: Vec<S> = w_hi
        .coeffs()
        .iter()
        .zip(w_lo.coeffs())
        .map(|(a, b)| a.clone() - b.clone())
        .collect();
    Ok(BinaryForm::new(coeffs))
}

fn cols_f64<S: Scalar>(alpha: &SffMatrix<S>) -> [Vec<f64>; 3] {
    let col = |j: usize| -> Vec<f64> { alpha.col(j).iter().map(|v| v.to_f64()).collect() };
    [col(0), col(1), col(2)]
}

fn ii_f64(cols: &[Vec<f64>; 3], u: &[f64], v: &[f64]) -> Vec<f64> {
    let [l, m, n] = cols;
    (0..l.len())
        .map(|i| l[i] * u[0] * v[0] + m[i] * (u[0] * v[1] + u[1] * v[0]) + n[i] * u[1] * v[1])
        .collect()
}

fn m2_dual(cols: &[Vec<f64>; 3], basis: &[Vec<f64>], u: &[f64]) -> Vec<f64> {
    // The dual normal of a tangency direction u lives in the first normal
    // space: it annihilates both II(u, u) and II(u, u_perp), and at a rank-2
    // point those two cannot vanish together.
    let u_perp = [-u[1], u[0]];
    let a = ii_f64(cols, u, u);
    let b = ii_f64(cols, u, &u_perp);
    let pick = if linalg::norm_sq(&a) >= linalg::norm_sq(&b) { a } else { b };
    let g0 = linalg::dot(&basis[0], &pick);
    let g1 = linalg::dot(&basis[1], &pick);
    let dual: Vec<f64> = (0..basis[0].len())
        .map(|i| g1 * basis[0][i] - g0 * basis[1][i])
        .collect();
    crate::dirs::canonical_unit(&dual)
}

/// A_k-asymptotic directions at a rank-2 point: the roots of the tangency
/// quadratic, each paired with the dual normal direction along which the
/// height function degenerates past the fold.
pub fn ak_asymptotic_m2<S: Scalar>(alpha: &SffMatrix<S>) -> GeomResult<DirectionSet> {
    let quad = tangency_quadratic(alpha)?;
    if quad.is_zero() {
        return Ok(DirectionSet::infinite());
    }
    let cols = cols_f64(alpha);
    let span_basis = linalg::row_space_basis(&[
        alpha.col(0),
        alpha.col(1),
        alpha.col(2),
    ]);
    let basis_f: Vec<Vec<f64>> = span_basis
        .iter()
        .map(|r| r.iter().map(|v| v.to_f64()).collect())
        .collect();
    let entries = quad
        .real_directions()
        .unwrap()
        .into_iter()
        .map(|(dir, mult)| {
            let dual = m2_dual(&cols, &basis_f, &dir);
            DirEntry::with_dual(dir.to_vec(), mult as usize, DirTag::AK, dual)
        })
        .collect();
    Ok(DirectionSet::finite(entries))
}

fn require_monge_r5<S: Scalar>(g: &MapGerm<S>) -> GeomResult<()> {
    if g.domain() != 2 || g.codomain() != 5 {
        return Err(GeomError::UnsupportedDimensions {
            domain: g.domain(),
            codomain: g.codomain(),
        });
    }
    if !g.in_graph_position() {
        return Err(GeomError::NotAdapted(
            "germ must be a Monge graph (x, y, f1, f2, f3); straighten with monge_form first"
                .into(),
        ));
    }
    Ok(())
}

/// D_k-asymptotic directions at a rank-2 point of a Monge graph in R^5: the
/// real root directions of the cubic part of the height function along the
/// flat umbilic normal. An identically zero cubic leaves every direction
/// asymptotic, reported through the infinite flag.
pub fn dk_asymptotic_m2<S: Scalar>(g: &MapGerm<S>) -> GeomResult<DirectionSet> {
    require_monge_r5(g)?;
    if g.degree() < 3 {
        return Err(GeomError::DegreeTooLow {
            needed: 3,
            found: g.degree(),
        });
    }
    let alpha = SffMatrix::from_monge(g);
    let class = classify_r5(&alpha)?;
    let Some(nu) = class.flat_umbilic else {
        return Err(GeomError::WrongStratum(format!(
            "the flat umbilic cubic needs an M2 point, found {}",
            class.stratum
        )));
    };
    let mut cubic = Poly::zero(2);
    for (j, w) in nu.iter().enumerate() {
        cubic = cubic.add(&g.comp(2 + j).homogeneous_part(3).scale(w));
    }
    let form = BinaryForm::from_poly2(&cubic, 3);
    if form.is_zero() {
        return Ok(DirectionSet::infinite());
    }
    let nu_f: Vec<f64> = nu.iter().map(|v| v.to_f64()).collect();
    let entries = form
        .real_directions()
        .unwrap()
        .into_iter()
        .map(|(dir, mult)| {
            DirEntry::with_dual(dir.to_vec(), mult as usize, DirTag::DK, nu_f.clone())
        })
        .collect();
    Ok(DirectionSet::finite(entries))
}

fn cubic_coeffs<S: Scalar>(g: &MapGerm<S>, comp: usize) -> [S; 4] {
    let c = g.comp(comp);
    [
        c.coeff2(3, 0),
        c.coeff2(2, 1),
        c.coeff2(1, 2),
        c.coeff2(0, 3),
    ]
}

pub(crate) fn require_adapted_m3<S: Scalar>(g: &MapGerm<S>) -> GeomResult<()> {
    require_monge_r5(g)?;
    if g.degree() < 3 {
        return Err(GeomError::DegreeTooLow {
            needed: 3,
            found: g.degree(),
        });
    }
    let shapes: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for (k, shape) in shapes.iter().enumerate() {
        let c = g.comp(2 + k);
        let have = [c.coeff2(2, 0), c.coeff2(1, 1), c.coeff2(0, 2)];
        for (h, &w) in have.iter().zip(shape) {
            if !(h.clone() - S::from_int(w)).is_zero_val() {
                return Err(GeomError::NotAdapted(
                    "quadratic part must be exactly (x^2, xy, y^2); rotate the frame with \
                     monge_form and normalize the quadratic terms first"
                        .into(),
                ));
            }
        }
    }
    Ok(())
}

/// The binary quintic cutting out the A_k-asymptotic directions at a generic
/// (rank 3) point, computed from the cubic coefficients of a Monge graph
/// whose quadratic part is exactly (x^2, xy, y^2).
pub fn m3_quintic<S: Scalar>(g: &MapGerm<S>) -> GeomResult<BinaryForm<S>> {
    require_adapted_m3(g)?;
    let a = cubic_coeffs(g, 2);
    let b = cubic_coeffs(g, 3);
    let c = cubic_coeffs(g, 4);
    let two = S::from_int(2);
    Ok(BinaryForm::new(vec![
        c[0].clone(),
        c[1].clone() - two.clone() * b[0].clone(),
        c[2].clone() - two.clone() * b[1].clone() + a[0].clone(),
        c[3].clone() - two.clone() * b[2].clone() + a[1].clone(),
        a[2].clone() - two * b[3].clone(),
        a[3].clone(),
    ]))
}

/// A_k-asymptotic directions at a generic point of a surface in R^5: the real
/// roots of the quintic, between one and five of them, each with the dual
/// normal spanning the annihilator of II(u, -).
pub fn ak_asymptotic_m3<S: Scalar>(g: &MapGerm<S>) -> GeomResult<DirectionSet> {
    let quintic = m3_quintic(g)?;
    if quintic.is_zero() {
        return Ok(DirectionSet::infinite());
    }
    let alpha = SffMatrix::from_monge(g);
    let cols = cols_f64(&alpha);
    let entries = quintic
        .real_directions()
        .unwrap()
        .into_iter()
        .map(|(dir, mult)| {
            let e1 = [1.0, 0.0];
            let e2 = [0.0, 1.0];
            let v1 = ii_f64(&cols, &dir, &e1);
            let v2 = ii_f64(&cols, &dir, &e2);
            let cross = linalg::cross3(&v1, &v2);
            let scale = linalg::norm_sq(&v1).max(linalg::norm_sq(&v2)).max(1.0);
            if linalg::norm_sq(&cross) <= 1e-20 * scale * scale {
                DirEntry::tagged(dir.to_vec(), mult as usize, DirTag::AK)
            } else {
                DirEntry::with_dual(
                    dir.to_vec(),
                    mult as usize,
                    DirTag::AK,
                    crate::dirs::canonical_unit(&cross),
                )
            }
        })
        .collect();
    Ok(DirectionSet::finite(entries))
}

/// The quintic rewritten in the single chart nu4 = u1/u2 of projection
/// directions, as used when the asymptotic configuration is read off from the
/// family of projections to four-space. The root at infinity is the direction
/// (1, 0) of the homogeneous quintic; its multiplicity is the degree drop.
#[derive(Clone, Debug)]
pub struct P3DualEquation<S: Scalar> {
    /// Polynomial in nu4, ascending coefficients.
    pub poly: UniPoly<S>,
    /// Real roots with multiplicities, ascending.
    pub roots: Vec<(f64, u32)>,
    pub infinity_multiplicity: usize,
}

pub fn p3_dual_equation<S: Scalar>(g: &MapGerm<S>) -> GeomResult<P3DualEquation<S>> {
    let quintic = m3_quintic(g)?;
    let flipped = BinaryForm::new(quintic.coeffs().iter().rev().cloned().collect());
    let poly = flipped.dehomogenized();
    if flipped.is_zero() {
        // A zero quintic constrains nothing; report the zero polynomial.
        return Ok(P3DualEquation {
            poly,
            roots: Vec::new(),
            infinity_multiplicity: 0,
        });
    }
    let infinity_multiplicity = flipped.infinity_multiplicity();
    let mut roots: Vec<(f64, u32)> = flipped
        .real_directions()
        .unwrap()
        .into_iter()
        .filter(|(dir, _)| dir[0] != 0.0)
        .map(|(dir, mult)| (dir[1] / dir[0], mult))
        .collect();
    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(P3DualEquation {
        poly,
        roots,
        infinity_multiplicity,
    })
}

/// Solution set of the umbilical focus equations for a surface in R^5: the
/// normal vectors a with <a,l> = <a,n> = 1 and <a,m> = 0, i.e. the centers of
/// hyperspheres whose contact with the surface degenerates in rank two.
/// Vectors are ambient, with zero tangent part.
#[derive(Clone, Debug, PartialEq)]
pub enum UmbilicalFocusR5<S: Scalar> {
    /// Unique center, at distance 1/kappa from the point.
    Point { center: Vec<S> },
    /// A line of centers, at a semiumbilic point.
    Line { base: Vec<S>, direction: Vec<S> },
    /// No finite center: the focal hypersphere degenerates to the hyperplane
    /// spanned by the tangent plane and the first normal space.
    AtInfinity { hyperplane_normal: Vec<S> },
}

fn embed_normal<S: Scalar>(v: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(), S::zero()];
    out.extend(v.iter().cloned());
    out
}

/// Locate the umbilical focus from a classification and its curvature locus.
/// Both arguments must describe the same point. Defined on the rank-2 and
/// rank-3 strata.
pub fn umbilical_focus_r5<S: Scalar>(
    class: &R5PointClass<S>,
    locus: &ConicLocus<S>,
) -> GeomResult<UmbilicalFocusR5<S>> {
    if class.stratum < MStratum::M2 {
        return Err(GeomError::WrongStratum(format!(
            "umbilical foci are classified at M2 and M3 points, found {}",
            class.stratum
        )));
    }
    let sys = Mat::from_rows(&[locus.l().to_vec(), locus.m().to_vec(), locus.n().to_vec()]);
    let rhs = [S::one(), S::zero(), S::one()];
    match sys.solve_affine(&rhs) {
        None => {
            let nu = class
                .flat_umbilic
                .clone()
                .expect("an inconsistent focus system only happens at rank 2");
            Ok(UmbilicalFocusR5::AtInfinity {
                hyperplane_normal: embed_normal(&nu),
            })
        }
        Some((center, kernel)) if kernel.is_empty() => Ok(UmbilicalFocusR5::Point {
            center: embed_normal(&center),
        }),
        Some((base, kernel)) => {
            debug_assert_eq!(kernel.len(), 1);
            debug_assert!(class.semiumbilic);
            let dir = linalg::canonical_direction(&kernel[0]);
            Ok(UmbilicalFocusR5::Line {
                base: embed_normal(&base),
                direction: embed_normal(&dir),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::hessian_distance_sq;
    use crate::scalar::{rat, rint, Rat};

    fn sff3(rows: [[i64; 3]; 3]) -> SffMatrix<Rat> {
        let rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| rint(v)).collect())
            .collect();
        SffMatrix::from_rows(2, rows)
    }

    fn germ(src: &str) -> MapGerm<Rat> {
        MapGerm::parse(src).unwrap()
    }

    const MONGE_HEAD: &str = "domain 2\ncodomain 5\ndegree 3\n0 1,0 1\n1 0,1 1\n";

    #[test]
    fn classifies_the_three_rank_two_models_and_the_generic_point() {
        // (x^2, 2xy, y^2): rank 3.
        let c = classify_r5(&sff3([[2, 0, 0], [0, 2, 0], [0, 0, 2]])).unwrap();
        assert_eq!(c.stratum, MStratum::M3);
        assert_eq!(c.subtype, None);
        assert!(!c.semiumbilic);
        assert_eq!(c.kappa.sq(), &rint(2));
        assert!(c.flat_umbilic.is_none());

        // (x^2, y^2, 0): hyperbolic, semiumbilic segment off the origin.
        let c = classify_r5(&sff3([[2, 0, 0], [0, 0, 2], [0, 0, 0]])).unwrap();
        assert_eq!(c.stratum, MStratum::M2);
        assert_eq!(c.subtype, Some(M2Subtype::Hyperbolic));
        assert!(c.semiumbilic);
        assert_eq!(c.kappa.sq(), &rint(2));
        assert_eq!(c.flat_umbilic.as_deref(), Some(&[rint(0), rint(0), rint(1)][..]));

        // (x^2 - y^2, xy, 0): elliptic, ellipse through the origin.
        let c = classify_r5(&sff3([[2, 0, -2], [0, 1, 0], [0, 0, 0]])).unwrap();
        assert_eq!(c.stratum, MStratum::M2);
        assert_eq!(c.subtype, Some(M2Subtype::Elliptic));
        assert!(!c.semiumbilic);
        assert_eq!(c.kappa.sq(), &rint(0));

        // (x^2, xy, 0): parabolic.
        let c = classify_r5(&sff3([[2, 0, 0], [0, 1, 0], [0, 0, 0]])).unwrap();
        assert_eq!(c.stratum, MStratum::M2);
        assert_eq!(c.subtype, Some(M2Subtype::Parabolic));
        assert!(!c.semiumbilic);

        // Rank 1 gets a stratum but no rank-2 refinements.
        let c = classify_r5(&sff3([[2, 0, 0], [4, 0, 0], [0, 0, 0]])).unwrap();
        assert_eq!(c.stratum, MStratum::M1);
        assert_eq!(c.subtype, None);
        assert!(c.flat_umbilic.is_none());

        // Rank 0 is rejected.
        assert!(matches!(
            classify_r5(&sff3([[0; 3]; 3])),
            Err(GeomError::WrongStratum(_))
        ));
    }

    #[test]
    fn tangency_roots_count_two_zero_one_by_subtype() {
        let hyp = ak_asymptotic_m2(&sff3([[2, 0, 0], [0, 0, 2], [0, 0, 0]])).unwrap();
        assert_eq!(hyp.count(), 2);
        let expected = DirectionSet::finite(vec![
            DirEntry::with_dual(vec![1.0, 0.0], 1, DirTag::AK, vec![0.0, 1.0, 0.0]),
            DirEntry::with_dual(vec![0.0, 1.0], 1, DirTag::AK, vec![1.0, 0.0, 0.0]),
        ]);
        assert!(hyp.matches(&expected, 1e-12));
        for e in &hyp.entries {
            assert!(e.dual_normal.is_some());
        }

        let ell = ak_asymptotic_m2(&sff3([[2, 0, -2], [0, 1, 0], [0, 0, 0]])).unwrap();
        assert_eq!(ell.count(), 0);

        // (x^2, xy, 0): double root along (0, 1); II(u, u) vanishes there so
        // the dual falls back to II(u, u_perp) = -m, giving (1, 0, 0).
        let par = ak_asymptotic_m2(&sff3([[2, 0, 0], [0, 1, 0], [0, 0, 0]])).unwrap();
        assert_eq!(par.count(), 1);
        assert_eq!(par.total_multiplicity(), 2);
        let expected = DirectionSet::finite(vec![DirEntry::with_dual(
            vec![0.0, 1.0],
            2,
            DirTag::AK,
            vec![1.0, 0.0, 0.0],
        )]);
        assert!(par.matches(&expected, 1e-12));

        assert!(matches!(
            ak_asymptotic_m2(&sff3([[2, 0, 0], [0, 2, 0], [0, 0, 2]])),
            Err(GeomError::WrongStratum(_))
        ));
    }

    #[test]
    fn wronskian_factors_through_the_tangency_quadratic() {
        // W = 2 (c^2 + s^2) q coefficientwise: [2A, 2B, 2A + 2C, 2B, 2C].
        let models = [
            [[2, 0, 0], [0, 0, 2], [0, 0, 0]],
            [[2, 0, -2], [0, 1, 0], [0, 0, 0]],
            [[2, 0, 0], [0, 1, 0], [0, 0, 0]],
            [[2, 1, 0], [0, 1, 2], [2, 2, 2]],
        ];
        for rows in models {
            let alpha = sff3(rows);
            let q = tangency_quadratic(&alpha).unwrap();
            let w = tangency_wronskian(&alpha).unwrap();
            let qc = q.coeffs();
            let two = rint(2);
            let expect = vec![
                two.clone() * qc[0].clone(),
                two.clone() * qc[1].clone(),
                two.clone() * (qc[0].clone() + qc[2].clone()),
                two.clone() * qc[1].clone(),
                two * qc[2].clone(),
            ];
            assert_eq!(w.coeffs(), &expect[..], "rows {rows:?}");
        }
    }

    #[test]
    fn flat_umbilic_cubic_roots_on_monge_graphs() {
        // (x, y, x^2, y^2, x^3): flat umbilic (0,0,1), cubic x^3, triple root
        // whose direction is y.
        let g = germ(&format!("{MONGE_HEAD}2 2,0 1\n3 0,2 1\n4 3,0 1\n"));
        let set = dk_asymptotic_m2(&g).unwrap();
        assert_eq!(set.count(), 1);
        assert_eq!(set.total_multiplicity(), 3);
        let expected = DirectionSet::finite(vec![DirEntry::with_dual(
            vec![0.0, 1.0],
            3,
            DirTag::DK,
            vec![0.0, 0.0, 1.0],
        )]);
        assert!(set.matches(&expected, 1e-12));

        // Cubic x^3 - x y^2 = x (x - y) (x + y): three simple roots.
        let g = germ(&format!("{MONGE_HEAD}2 2,0 1\n3 0,2 1\n4 3,0 1\n4 1,2 -1\n"));
        let set = dk_asymptotic_m2(&g).unwrap();
        assert_eq!(set.count(), 3);
        let s = 0.5_f64.sqrt();
        let expected = DirectionSet::finite(vec![
            DirEntry::with_dual(vec![0.0, 1.0], 1, DirTag::DK, vec![0.0, 0.0, 1.0]),
            DirEntry::with_dual(vec![s, s], 1, DirTag::DK, vec![0.0, 0.0, 1.0]),
            DirEntry::with_dual(vec![s, -s], 1, DirTag::DK, vec![0.0, 0.0, 1.0]),
        ]);
        assert!(set.matches(&expected, 1e-9));

        // No cubic terms at all: every direction is a root.
        let g = germ(&format!("{MONGE_HEAD}2 2,0 1\n3 0,2 1\n"));
        assert!(dk_asymptotic_m2(&g).unwrap().infinite);

        // Degree-2 germ cannot ask the question.
        let g = germ("domain 2\ncodomain 5\ndegree 2\n0 1,0 1\n1 0,1 1\n2 2,0 1\n3 0,2 1\n");
        assert!(matches!(
            dk_asymptotic_m2(&g),
            Err(GeomError::DegreeTooLow { needed: 3, .. })
        ));

        // Rank-3 point has no flat umbilic.
        let g = germ(&format!("{MONGE_HEAD}2 2,0 1\n3 1,1 1\n4 0,2 1\n"));
        assert!(matches!(
            dk_asymptotic_m2(&g),
            Err(GeomError::WrongStratum(_))
        ));
    }

    #[test]
    fn quintic_roots_on_adapted_graphs() {
        // f1 = x^2 + y^3: quintic u2^5, root (1, 0) with multiplicity 5.
        let g = germ(&format!("{MONGE_HEAD}2 2,0 1\n3 1,1 1\n4 0,2 1\n2 0,3 1\n"));
        let set = ak_asymptotic_m3(&g).unwrap();
        assert_eq!(set.count(), 1);
        assert_eq!(set.total_multiplicity(), 5);
        assert!((set.entries[0].dir[0] - 1.0).abs() < 1e-12);
        // Dual at u = (1, 0): cross of l = (2,0,0) and m = (0,1,0).
        let dual = set.entries[0].dual_normal.as_ref().unwrap();
        assert!((dual[2] - 1.0).abs() < 1e-12);

        // f3 = x^3: quintic u1^5, root (0, 1) with multiplicity 5.
        let g = germ(&format!("{MONGE_HEAD}2 2,0 1\n3 1,1 1\n4 0,2 1\n4 3,0 1\n"));
        let set = ak_asymptotic_m3(&g).unwrap();
        assert_eq!(set.count(), 1);
        assert_eq!(set.total_multiplicity(), 5);
        assert!((set.entries[0].dir[1] - 1.0).abs() < 1e-12);

        // f3 = x^3, f1 = x^2 + xy^2 gives u1^5 - u1 u2^4: three real lines.
        let g = germ(&format!(
            "{MONGE_HEAD}2 2,0 1\n3 1,1 1\n4 0,2 1\n4 3,0 1\n2 1,2 -1\n"
        ));
        let set = ak_asymptotic_m3(&g).unwrap();
        assert_eq!(set.count(), 3);
        let s = 0.5_f64.sqrt();
        let dirs: Vec<Vec<f64>> = set.entries.iter().map(|e| e.dir.clone()).collect();
        let want = [vec![0.0, 1.0], vec![s, s], vec![s, -s]];
        for w in &want {
            assert!(
                dirs.iter()
                    .any(|d| (d[0] - w[0]).abs() + (d[1] - w[1]).abs() < 1e-9),
                "missing direction {w:?}"
            );
        }

        // A frame that is not exactly (x^2, xy, y^2) is refused.
        let g = germ(&format!("{MONGE_HEAD}2 2,0 1\n3 1,1 2\n4 0,2 1\n4 3,0 1\n"));
        assert!(matches!(
            ak_asymptotic_m3(&g),
            Err(GeomError::NotAdapted(_))
        ));
    }

    #[test]
    fn dual_equation_agrees_with_the_quintic_up_to_infinity() {
        // f1 = x^2 + y^3: all five roots escape to infinity in the nu4 chart.
        let g = germ(&format!("{MONGE_HEAD}2 2,0 1\n3 1,1 1\n4 0,2 1\n2 0,3 1\n"));
        let eq = p3_dual_equation(&g).unwrap();
        assert_eq!(eq.poly.degree(), Some(0));
        assert!(eq.roots.is_empty());
        assert_eq!(eq.infinity_multiplicity, 5);

        // f3 = x^3: nu4^5, quintuple root at zero, nothing at infinity.
        let g = germ(&format!("{MONGE_HEAD}2 2,0 1\n3 1,1 1\n4 0,2 1\n4 3,0 1\n"));
        let eq = p3_dual_equation(&g).unwrap();
        assert_eq!(eq.poly.degree(), Some(5));
        assert_eq!(eq.roots, vec![(0.0, 5)]);
        assert_eq!(eq.infinity_multiplicity, 0);

        // Three real directions: roots -1, 0, 1 and the distinct-root count
        // matches the homogeneous picture with infinity added back.
        let g = germ(&format!(
            "{MONGE_HEAD}2 2,0 1\n3 1,1 1\n4 0,2 1\n4 3,0 1\n2 1,2 -1\n"
        ));
        let eq = p3_dual_equation(&g).unwrap();
        let set = ak_asymptotic_m3(&g).unwrap();
        assert_eq!(eq.roots.len(), 3);
        for (root, want) in eq.roots.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((root.0 - want).abs() < 1e-9);
            assert_eq!(root.1, 1);
        }
        let at_infinity = usize::from(eq.infinity_multiplicity > 0);
        assert_eq!(set.count(), eq.roots.len() + at_infinity);
    }

    #[test]
    fn umbilical_focus_cases_match_contact_rank() {
        // Generic point (x^2, 2xy, y^2): unique focus at (0,0,1/2,0,1/2),
        // squared distance 1/2 = 1/kappa^2, and the sphere centered there has
        // fully degenerate second order contact.
        let alpha = sff3([[2, 0, 0], [0, 2, 0], [0, 0, 2]]);
        let class = classify_r5(&alpha).unwrap();
        let locus = surf_r4::ellipse(&alpha);
        let focus = umbilical_focus_r5(&class, &locus).unwrap();
        let center = match focus {
            UmbilicalFocusR5::Point { center } => center,
            other => panic!("expected a point focus, got {other:?}"),
        };
        assert_eq!(
            center,
            vec![rint(0), rint(0), rat(1, 2), rint(0), rat(1, 2)]
        );
        let g = germ("domain 2\ncodomain 5\ndegree 2\n0 1,0 1\n1 0,1 1\n2 2,0 1\n3 1,1 2\n4 0,2 1\n");
        let hess = hessian_distance_sq(&g, &center);
        assert_eq!(hess.rank(), 0);

        // Semiumbilic point (x^2, y^2, 0): a full line of umbilical foci.
        let alpha = sff3([[2, 0, 0], [0, 0, 2], [0, 0, 0]]);
        let class = classify_r5(&alpha).unwrap();
        let locus = surf_r4::ellipse(&alpha);
        let focus = umbilical_focus_r5(&class, &locus).unwrap();
        let (base, direction) = match focus {
            UmbilicalFocusR5::Line { base, direction } => (base, direction),
            other => panic!("expected a line of foci, got {other:?}"),
        };
        assert_eq!(base, vec![rint(0), rint(0), rat(1, 2), rat(1, 2), rint(0)]);
        assert_eq!(direction, vec![rint(0), rint(0), rint(0), rint(0), rint(1)]);
        let g = germ("domain 2\ncodomain 5\ndegree 2\n0 1,0 1\n1 0,1 1\n2 2,0 1\n3 0,2 1\n");
        for t in [rint(0), rint(1), rat(-3, 2)] {
            let mut a = base.clone();
            for (ai, di) in a.iter_mut().zip(&direction) {
                *ai = ai.clone() + t.clone() * di.clone();
            }
            let hess = hessian_distance_sq(&g, &a);
            assert_eq!(hess.rank(), 0, "t = {t}");
        }

        // Elliptic point (x^2 - y^2, xy, 0): focus escapes to infinity along
        // the flat umbilic.
        let alpha = sff3([[2, 0, -2], [0, 1, 0], [0, 0, 0]]);
        let class = classify_r5(&alpha).unwrap();
        let locus = surf_r4::ellipse(&alpha);
        let focus = umbilical_focus_r5(&class, &locus).unwrap();
        assert_eq!(
            focus,
            UmbilicalFocusR5::AtInfinity {
                hyperplane_normal: vec![rint(0), rint(0), rint(0), rint(0), rint(1)]
            }
        );

        // Rank-1 points are out of scope.
        let alpha = sff3([[2, 0, 0], [4, 0, 0], [0, 0, 0]]);
        let class = classify_r5(&alpha).unwrap();
        let locus = surf_r4::ellipse(&alpha);
        assert!(matches!(
            umbilical_focus_r5(&class, &locus),
            Err(GeomError::WrongStratum(_))
        ));
    }
}
