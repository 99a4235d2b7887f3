//! Transports between the settings: orthogonal projection along a tangent
//! direction (producing a corank-1 germ one dimension down), orthogonal
//! projection along a normal direction (producing a regular germ one
//! codimension down), the modified one-parameter-disc family of normal
//! projections on adapted surfaces in five-space, and hyperplane sections of
//! 3-manifold graphs, with the tangent bookkeeping needed to chase the
//! section/projection square.
//!
//! All coordinate changes are built from Householder frames, so a rational
//! unit direction is transported exactly; directions whose normalization
//! would need an irrational square root are rejected with
//! `IrrationalRotation` rather than silently falling back to floats.

use crate::error::{GeomError, GeomResult};
use crate::jet::MapGerm;
use crate::linalg::{self, Mat};
use crate::poly::Poly;
use crate::scalar::{Scalar, Sign};
use crate::surf_r5;

/// Scale to unit length inside the scalar type, or report why that is
/// impossible.
fn unit_or_reject<S: Scalar>(v: &[S]) -> GeomResult<Vec<S>> {
    if linalg::is_zero_vec(v) {
        return Err(GeomError::ZeroDirection);
    }
    let n2 = linalg::norm_sq(v);
    if (n2.clone() - S::one()).is_zero_val() {
        return Ok(v.to_vec());
    }
    match n2.try_sqrt() {
        Some(n) => Ok(linalg::vscale(v, &(S::one() / n))),
        None => Err(GeomError::IrrationalRotation),
    }
}

/// Selection matrix whose rows are the unit rows `keep`, so postcomposing
/// with it keeps exactly those components in order.
fn keep_rows<S: Scalar>(keep: &[usize], n: usize) -> Mat<S> {
    let mut m = Mat::zeros(keep.len(), n);
    for (i, &j) in keep.iter().enumerate() {
        m[(i, j)] = S::one();
    }
    m
}

fn require_graph<S: Scalar>(g: &MapGerm<S>) -> GeomResult<()> {
    if g.domain() < 2 || g.domain() > 3 || g.codomain() <= g.domain() {
        return Err(GeomError::UnsupportedDimensions {
            domain: g.domain(),
            codomain: g.codomain(),
        });
    }
    if !g.in_graph_position() {
        return Err(GeomError::NotAdapted(
            "germ must be a Monge graph over its tangent plane; straighten with monge_form first"
                .into(),
        ));
    }
    Ok(())
}

/// Orthogonal projection of the ambient space along the unit tangent
/// direction `u` (given in source coordinates), restricted to the germ.
///
/// The tangent coordinates of source and target are rotated by the same
/// frame that puts `u` on the last tangent axis; the target coordinate
/// carrying `u` is then dropped. The image germ is singular of corank one at
/// the origin, with the first source coordinate surviving as an immersed
/// direction, which is exactly the input position the corank-1 analyses
/// expect.
pub fn project_tangent<S: Scalar>(g: &MapGerm<S>, u: &[S]) -> GeomResult<MapGerm<S>> {
    require_graph(g)?;
    let d = g.domain();
    if u.len() != d {
        return Err(GeomError::NotAdapted(
            "tangent directions are given in source coordinates".into(),
        ));
    }
    let u = unit_or_reject(u)?;
    let frame = linalg::orthonormal_completion(&u, d - 1);

    // Same rotation on both sides keeps the graph property; the new last
    // tangent coordinate is the one to delete.
    let mut rot = Mat::identity(g.codomain());
    for i in 0..d {
        for j in 0..d {
            rot[(i, j)] = frame[(j, i)].clone();
        }
    }
    let keep: Vec<usize> = (0..g.codomain()).filter(|&i| i != d - 1).collect();
    let dropped = g
        .precompose_linear(&frame)
        .postcompose_linear(&rot)
        .postcompose_linear(&keep_rows(&keep, g.codomain()));
    debug_assert!(dropped.comp(0).sub(&Poly::var(d, 0)).is_zero());
    Ok(dropped)
}

/// Orthogonal projection of the ambient space along the unit normal
/// direction `nu`, restricted to the germ. `nu` may be given in normal
/// coordinates (length = codimension) or as a full ambient vector whose
/// tangent block vanishes.
///
/// The normal coordinates are rotated so `nu` becomes the last normal axis,
/// which is then dropped; the result is again a Monge graph, one codimension
/// down. When `nu` is orthogonal to every second-order normal direction the
/// surviving rows of the second fundamental form are untouched.
pub fn project_normal<S: Scalar>(g: &MapGerm<S>, nu: &[S]) -> GeomResult<MapGerm<S>> {
    require_graph(g)?;
    let d = g.domain();
    let codim = g.codomain() - d;
    let nu_normal: Vec<S> = if nu.len() == codim {
        nu.to_vec()
    } else if nu.len() == g.codomain() {
        if !linalg::is_zero_vec(&nu[..d]) {
            return Err(GeomError::NotNormal);
        }
        nu[d..].to_vec()
    } else {
        return Err(GeomError::NotNormal);
    };
    if codim < 2 {
        return Err(GeomError::UnsupportedDimensions {
            domain: d,
            codomain: g.codomain(),
        });
    }
    let nu_normal = unit_or_reject(&nu_normal)?;
    let frame = linalg::orthonormal_completion(&nu_normal, codim - 1);

    let mut rot = Mat::identity(g.codomain());
    for i in 0..codim {
        for j in 0..codim {
            rot[(d + i, d + j)] = frame[(j, i)].clone();
        }
    }
    let keep: Vec<usize> = (0..g.codomain() - 1).collect();
    Ok(g.postcompose_linear(&rot)
        .postcompose_linear(&keep_rows(&keep, g.codomain())))
}

/// The modified family of normal projections on an adapted surface in
/// five-space: for parameters inside the open unit disc the member is
/// `(x, y, x² + f¹ − ν₃(y² + f³), xy + f² − ν₄(y² + f³))`, a regular surface
/// germ in four-space. At the origin of the disc this is the projection
/// along the last normal axis.
pub fn project_family_eta<S: Scalar>(g: &MapGerm<S>, nu3: &S, nu4: &S) -> GeomResult<MapGerm<S>> {
    surf_r5::require_adapted_m3(g)?;
    let gauge = S::one() - nu3.clone() * nu3.clone() - nu4.clone() * nu4.clone();
    if gauge.sign() != Sign::Positive {
        return Err(GeomError::ParameterOutOfDisc(
            "the modified projection family needs v3^2 + v4^2 < 1".into(),
        ));
    }
    let mut mix = Mat::zeros(4, 5);
    mix[(0, 0)] = S::one();
    mix[(1, 1)] = S::one();
    mix[(2, 2)] = S::one();
    mix[(2, 4)] = -nu3.clone();
    mix[(3, 3)] = S::one();
    mix[(3, 4)] = -nu4.clone();
    Ok(g.postcompose_linear(&mix))
}

/// A hyperplane section of a 3-manifold graph together with the inclusion of
/// its tangent plane into the 3-manifold's tangent space.
#[derive(Clone, Debug)]
pub struct SectionGerm<S: Scalar> {
    pub germ: MapGerm<S>,
    /// Columns are the images of the section's tangent axes, so multiplying
    /// a direction of the section by this matrix gives the corresponding
    /// direction upstairs.
    pub embed: Mat<S>,
}

impl<S: Scalar> SectionGerm<S> {
    /// Direction of the ambient 3-manifold corresponding to a tangent
    /// direction of the section.
    pub fn push_direction(&self, dir: &[S]) -> Vec<S> {
        self.embed.matvec(dir)
    }
}

/// Section of a 3-manifold germ by the coordinate hyperplane `{x_axis = 0}`:
/// the source variable `axis` is set to zero and the matching target
/// coordinate is deleted.
///
/// The germ must carry that target coordinate as an identity copy of the cut
/// variable. Monge graphs into six-space satisfy this for every axis, and
/// the corank-1 images of `project_tangent` still satisfy it for the axes
/// that survive the projection, which is what makes the section/projection
/// square closeable in both orders.
pub fn normal_section<S: Scalar>(g: &MapGerm<S>, axis: usize) -> GeomResult<SectionGerm<S>> {
    if g.domain() != 3 || g.codomain() < 4 {
        return Err(GeomError::UnsupportedDimensions {
            domain: g.domain(),
            codomain: g.codomain(),
        });
    }
    assert!(axis < g.domain(), "cut axis out of range");
    if axis < g.codomain() && !g.comp(axis).sub(&Poly::var(3, axis)).is_zero() {
        return Err(GeomError::NotAdapted(
            "the cut axis must carry a matching identity target coordinate; rotate the germ so \
             the section plane is a coordinate plane first"
                .into(),
        ));
    }
    let keep_vars: Vec<usize> = (0..3).filter(|&i| i != axis).collect();
    let embed = {
        let mut m = Mat::zeros(3, 2);
        for (j, &i) in keep_vars.iter().enumerate() {
            m[(i, j)] = S::one();
        }
        m
    };
    let keep_comps: Vec<usize> = (0..g.codomain()).filter(|&i| i != axis).collect();
    let germ = g
        .precompose_linear(&embed)
        .postcompose_linear(&keep_rows(&keep_comps, g.codomain()));
    Ok(SectionGerm { germ, embed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::SffMatrix;
    use crate::jet::MapGerm;
    use crate::locus::{LocusKind, PointType};
    use crate::scalar::{rat, rint, Rat};
    use crate::{surf_r4, surf_r4_sing, surf_r5};

    fn germ(text: &str) -> MapGerm<Rat> {
        MapGerm::parse(text).unwrap()
    }

    fn assert_same_germ(a: &MapGerm<Rat>, b: &MapGerm<Rat>) {
        assert_eq!(a.domain(), b.domain());
        assert_eq!(a.codomain(), b.codomain());
        for i in 0..a.codomain() {
            assert!(
                a.comp(i).sub(b.comp(i)).is_zero(),
                "component {i} differs: {:?} vs {:?}",
                a.comp(i),
                b.comp(i)
            );
        }
    }

    // (x, y, x^2, 2xy, y^2) in five-space.
    const VERONESE: &str = "domain 2\ncodomain 5\ndegree 2\n\
        0 1,0 1\n1 0,1 1\n2 2,0 1\n3 1,1 2\n4 0,2 1\n";

    #[test]
    fn projects_the_flagship_example_along_the_second_axis() {
        let g = germ(VERONESE);
        let p = project_tangent(&g, &[rint(0), rint(1)]).unwrap();
        let expected = germ("domain 2\ncodomain 4\ndegree 2\n0 1,0 1\n1 2,0 1\n2 1,1 2\n3 0,2 1\n");
        assert_same_germ(&p, &expected);

        let locus = surf_r4_sing::curvature_parabola(&p).unwrap();
        assert_eq!(locus.kind(), LocusKind::Parabola);
        let kappa = surf_r4_sing::kappa_sing(&locus);
        assert_eq!(kappa.exact(), Some(rint(2)));
        let (_, aff) = surf_r4_sing::ep_aff_sing(&locus);
        assert_eq!(aff.dim(), 2);
        assert!(aff.contains(&[rint(2), rint(0), rint(0)]));
        assert!(!aff.contains(&[rint(0), rint(0), rint(0)]));
    }

    #[test]
    fn direction_handling_normalizes_or_rejects() {
        let g = germ(VERONESE);
        let unit = project_tangent(&g, &[rat(3, 5), rat(4, 5)]).unwrap();
        let scaled = project_tangent(&g, &[rint(3), rint(4)]).unwrap();
        assert_same_germ(&unit, &scaled);

        assert_eq!(
            project_tangent(&g, &[rint(1), rint(1)]).unwrap_err(),
            GeomError::IrrationalRotation
        );
        assert_eq!(
            project_tangent(&g, &[rint(0), rint(0)]).unwrap_err(),
            GeomError::ZeroDirection
        );
        assert!(matches!(
            project_tangent(&g, &[rint(1), rint(0), rint(0)]).unwrap_err(),
            GeomError::NotAdapted(_)
        ));
    }

    #[test]
    fn rational_rotations_keep_the_normal_rows() {
        let g = germ(
            "domain 2\ncodomain 5\ndegree 3\n\
             0 1,0 1\n1 0,1 1\n\
             2 2,0 1\n2 1,1 -2\n2 0,2 3/2\n2 3,0 1/3\n\
             3 2,0 -1\n3 0,2 2\n3 2,1 5\n\
             4 1,1 1\n4 0,3 -7/2\n",
        );
        let u = [rat(3, 5), rat(4, 5)];
        let p = project_tangent(&g, &u).unwrap();

        // Rotate source and target tangent blocks by hand, keep all five
        // components, and compare second fundamental forms: the deleted
        // coordinate is tangent, so the normal rows must agree exactly.
        let frame = linalg::orthonormal_completion(&u, 1);
        let mut rot = Mat::identity(5);
        for i in 0..2 {
            for j in 0..2 {
                rot[(i, j)] = frame[(j, i)].clone();
            }
        }
        let rotated = g.precompose_linear(&frame).postcompose_linear(&rot);
        let alpha_full = SffMatrix::from_monge(&rotated);
        let alpha_proj = SffMatrix::from_corank1(&p);
        assert_eq!(alpha_full.rows(), alpha_proj.rows());

        // Output sits in corank-1 position: first component is the surviving
        // source coordinate, the rest start at order two.
        assert!(p.comp(0).sub(&Poly::var(2, 0)).is_zero());
        for i in 1..4 {
            assert!(p.comp(i).coeff2(1, 0).is_zero_val());
            assert!(p.comp(i).coeff2(0, 1).is_zero_val());
        }
    }

    #[test]
    fn flat_germs_project_to_flat_corank_one_germs() {
        let g = germ("domain 2\ncodomain 5\ndegree 3\n0 1,0 1\n1 0,1 1\n");
        let p = project_tangent(&g, &[rat(3, 5), rat(4, 5)]).unwrap();
        assert_eq!(p.codomain(), 4);
        for i in 1..4 {
            assert!(p.comp(i).is_zero());
        }
    }

    #[test]
    fn half_line_appears_when_the_direction_is_asymptotic() {
        // Model with second order (x^2, y^2, 0) and some cubic fuzz. Its
        // tangency directions are the axes, so projecting along (0, 1)
        // degenerates the parabola to a half-line while a generic direction
        // keeps it a parabola.
        let g = germ(
            "domain 2\ncodomain 5\ndegree 3\n\
             0 1,0 1\n1 0,1 1\n\
             2 2,0 1\n2 3,0 1\n\
             3 0,2 1\n3 2,1 1\n\
             4 0,3 1\n",
        );
        let along_axis = project_tangent(&g, &[rint(0), rint(1)]).unwrap();
        let kind = surf_r4_sing::curvature_parabola(&along_axis).unwrap().kind();
        assert_eq!(kind, LocusKind::HalfLine);

        let generic = project_tangent(&g, &[rat(3, 5), rat(4, 5)]).unwrap();
        let kind = surf_r4_sing::curvature_parabola(&generic).unwrap().kind();
        assert_eq!(kind, LocusKind::Parabola);
    }

    // Adapted three-singular germ in five-space with distinct cubic tails.
    const ADAPTED_M3: &str = "domain 2\ncodomain 5\ndegree 3\n\
        0 1,0 1\n1 0,1 1\n\
        2 2,0 1\n2 3,0 1/7\n\
        3 1,1 1\n3 2,1 1/3\n\
        4 0,2 1\n4 0,3 1/5\n";

    #[test]
    fn normal_drop_matches_the_displayed_projection() {
        let g = germ(ADAPTED_M3);
        let expected = germ(
            "domain 2\ncodomain 4\ndegree 3\n\
             0 1,0 1\n1 0,1 1\n\
             2 2,0 1\n2 3,0 1/7\n\
             3 1,1 1\n3 2,1 1/3\n",
        );
        let nu = [rint(0), rint(0), rint(1)];
        assert_same_germ(&project_normal(&g, &nu).unwrap(), &expected);

        // Base point of the modified family is the same projection, and the
        // ambient form of the direction is accepted too.
        let zero = Rat::from_integer(0.into());
        assert_same_germ(&project_family_eta(&g, &zero, &zero).unwrap(), &expected);
        let ambient = [rint(0), rint(0), rint(0), rint(0), rint(1)];
        assert_same_germ(&project_normal(&g, &ambient).unwrap(), &expected);
    }

    #[test]
    fn normal_rotations_preserve_second_order_rows() {
        // Third normal slot is flat to second order, so any unit normal in
        // the plane it spans with nothing leaves the form alone; a rotation
        // inside the first two slots reshuffles rows by the same frame.
        let g = germ(
            "domain 2\ncodomain 5\ndegree 3\n\
             0 1,0 1\n1 0,1 1\n\
             2 2,0 1\n2 1,1 3\n2 0,2 -2\n\
             3 2,0 2\n3 0,2 5\n\
             4 0,3 1\n",
        );
        let alpha = SffMatrix::from_monge(&g);

        let p = project_normal(&g, &[rint(0), rint(0), rint(1)]).unwrap();
        let alpha_p = SffMatrix::from_monge(&p);
        assert_eq!(alpha_p.rows(), &alpha.rows()[..2]);

        let nu = [rint(0), rat(3, 5), rat(4, 5)];
        let q = project_normal(&g, &nu).unwrap();
        let alpha_q = SffMatrix::from_monge(&q);
        let frame = linalg::orthonormal_completion(&nu, 2);
        for i in 0..2 {
            let mut want = vec![rint(0); 3];
            for k in 0..3 {
                for c in 0..3 {
                    want[c] = want[c].clone() + frame[(k, i)].clone() * alpha.rows()[k][c].clone();
                }
            }
            assert_eq!(alpha_q.rows()[i], want, "rotated row {i}");
        }

        assert_eq!(
            project_normal(&g, &[rint(1), rint(1), rint(0)]).unwrap_err(),
            GeomError::IrrationalRotation
        );
        let skew = [rint(1), rint(0), rint(0), rint(1), rint(0)];
        assert_eq!(project_normal(&g, &skew).unwrap_err(), GeomError::NotNormal);
        assert_eq!(
            project_normal(&g, &[rint(1), rint(0)]).unwrap_err(),
            GeomError::NotNormal
        );
    }

    #[test]
    fn binormal_projection_detects_inflections() {
        // Hyperbolic model (x^2, y^2, 0) plus cubics. One degenerate normal
        // is (c03, 0, -a03) up to scale, where a03 and c03 are the y^3
        // coefficients of the first and third normal components; projecting
        // along it yields an inflection exactly when a03 = 0.
        let flat_binormal = germ(
            "domain 2\ncodomain 5\ndegree 3\n\
             0 1,0 1\n1 0,1 1\n\
             2 2,0 1\n2 3,0 1\n\
             3 0,2 1\n3 1,2 2\n\
             4 0,3 1\n4 3,0 1\n",
        );
        let s = project_normal(&flat_binormal, &[rint(1), rint(0), rint(0)]).unwrap();
        let alpha = SffMatrix::from_monge(&s);
        assert_eq!(surf_r4::classify_little(&alpha), PointType::Inflection);

        let bent = germ(
            "domain 2\ncodomain 5\ndegree 3\n\
             0 1,0 1\n1 0,1 1\n\
             2 2,0 1\n2 0,3 4/5\n\
             3 0,2 1\n3 1,2 2\n\
             4 0,3 3/5\n",
        );
        let nu = [rat(3, 5), rint(0), rat(-4, 5)];
        let s = project_normal(&bent, &nu).unwrap();
        let alpha = SffMatrix::from_monge(&s);
        assert_ne!(surf_r4::classify_little(&alpha), PointType::Inflection);
    }

    #[test]
    fn family_trichotomy_follows_the_discriminant() {
        let g = germ(ADAPTED_M3);
        let class = |n3: Rat, n4: Rat| {
            let p = project_family_eta(&g, &n3, &n4).unwrap();
            surf_r4::classify_little(&SffMatrix::from_monge(&p))
        };
        // Sign of v4^2 - v3 decides the stratum of the projected point.
        assert_eq!(class(rat(1, 2), rint(0)), PointType::Elliptic);
        assert_eq!(class(rint(0), rat(1, 2)), PointType::Hyperbolic);
        assert_eq!(class(rat(1, 4), rat(1, 2)), PointType::Parabolic);
        assert_eq!(class(rint(0), rint(0)), PointType::Parabolic);

        assert!(matches!(
            project_family_eta(&g, &rat(3, 5), &rat(4, 5)).unwrap_err(),
            GeomError::ParameterOutOfDisc(_)
        ));
        assert!(matches!(
            project_family_eta(&g, &rint(1), &rat(1, 2)).unwrap_err(),
            GeomError::ParameterOutOfDisc(_)
        ));

        let not_adapted = germ(VERONESE);
        assert!(project_family_eta(&not_adapted, &rint(0), &rint(0)).is_err());
    }

    // Graph of a 3-manifold in six-space whose section by {y = 0} carries
    // the asymptotic pair (1, ±√2).
    const MODEL_3MFLD: &str = "domain 3\ncodomain 6\ndegree 2\n\
        0 1,0,0 1\n1 0,1,0 1\n2 0,0,1 1\n\
        3 2,0,0 1\n3 0,0,2 1/2\n\
        4 1,0,1 1\n\
        5 0,1,1 1\n";

    #[test]
    fn sections_restrict_the_graph_and_track_tangents() {
        let g3 = germ(MODEL_3MFLD);
        let section = normal_section(&g3, 1).unwrap();
        let expected = germ(
            "domain 2\ncodomain 5\ndegree 2\n\
             0 1,0 1\n1 0,1 1\n\
             2 2,0 1\n2 0,2 1/2\n\
             3 1,1 1\n",
        );
        assert_same_germ(&section.germ, &expected);

        let alpha = SffMatrix::from_monge(&section.germ);
        let dirs = surf_r5::ak_asymptotic_m2(&alpha).unwrap();
        assert_eq!(dirs.count(), 2);
        let r2 = 2f64.sqrt();
        for target in [[1.0, r2], [1.0, -r2]] {
            let hit = dirs.entries.iter().any(|e| {
                crate::dirs::angular_distance(&e.dir, &crate::dirs::canonical_unit(&target)) < 1e-9
            });
            assert!(hit, "missing section direction {target:?}");
        }

        // The matching directions upstairs are (1, 0, ±√2): the inclusion
        // inserts a zero at the cut slot and the asymptotic determinant of
        // the 3-manifold vanishes there.
        let det = crate::mfld3::asymptotic_det(&crate::mfld3::alpha3(&g3).unwrap());
        let up = section.push_direction(&[rint(1), rint(2)]);
        assert_eq!(up, vec![rint(1), rint(0), rint(2)]);
        let at = det.eval_f64(&[1.0, 0.0, r2]);
        assert!(at.abs() < 1e-12, "determinant at lifted direction: {at}");

        let flat = germ("domain 3\ncodomain 6\ndegree 2\n0 1,0,0 1\n1 0,1,0 1\n2 0,0,1 1\n");
        let flat_section = normal_section(&flat, 2).unwrap();
        for i in 2..5 {
            assert!(flat_section.germ.comp(i).is_zero());
        }
    }

    #[test]
    fn diagram_of_section_and_projection_commutes() {
        let g3 = germ(
            "domain 3\ncodomain 6\ndegree 3\n\
             0 1,0,0 1\n1 0,1,0 1\n2 0,0,1 1\n\
             3 2,0,0 1\n3 0,0,2 1/2\n3 1,0,2 -3\n3 3,0,0 2/7\n\
             4 1,0,1 1\n4 0,2,1 4\n4 0,0,3 -1/2\n\
             5 0,1,1 1\n5 2,0,1 5/3\n5 1,1,1 -2\n",
        );
        let u3 = [rint(0), rint(0), rint(1)];

        let projected = project_tangent(&g3, &u3).unwrap();
        assert_eq!(projected.codomain(), 5);
        let left = normal_section(&projected, 1).unwrap();

        let section = normal_section(&g3, 1).unwrap();
        // The cut kills the middle source variable, so the projection
        // direction downstairs is the image of (0, 0, 1) under the section
        // chart, namely the second axis.
        let right = project_tangent(&section.germ, &[rint(0), rint(1)]).unwrap();

        assert_same_germ(&left.germ, &right);
        assert_eq!(left.germ.domain(), 2);
        assert_eq!(left.germ.codomain(), 4);

        // The singular side only carries identity coordinates on the axes
        // that survived the projection.
        assert!(matches!(
            normal_section(&projected, 2).unwrap_err(),
            GeomError::NotAdapted(_)
        ));
    }
}
