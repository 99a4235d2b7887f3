//! Corank-1 surfaces in four-space: the curvature parabola and its
//! degenerations, umbilic curvature, asymptotic directions, reduction to the
//! four quadratic normal forms, adapted frames, and focal sets.
//!
//! Germs here are in corank-1 position: the first component is the source
//! coordinate x and the remaining three have no linear part. The second
//! fundamental form then lives in a 3-dimensional normal space and the locus
//! eta(y) = l + 2my + ny^2 is a parabola, half-line, line, or point.

use crate::dirs::{DirEntry, DirTag, DirectionSet};
use crate::error::{GeomError, GeomResult};
use crate::height::SffMatrix;
use crate::jet::{AffineSubspace, MapGerm};
use crate::linalg::{self, Mat};
use crate::locus::{ConicLocus, Kappa, LocusKind, MStratum, PointType};
use crate::poly::{Mono, Poly};
use crate::scalar::{Scalar, Sign};
use crate::surf_r4;

fn require_corank1_position<S: Scalar>(g: &MapGerm<S>) -> GeomResult<()> {
    if g.domain() != 2 || g.codomain() != 4 {
        return Err(GeomError::UnsupportedDimensions {
            domain: g.domain(),
            codomain: g.codomain(),
        });
    }
    if !g.comp(0).sub(&Poly::var(2, 0)).is_negligible() {
        return Err(GeomError::NotAdapted(
            "first component must be the source coordinate x; straighten with corank1_form first"
                .into(),
        ));
    }
    let lp = g.linear_part();
    for i in 1..4 {
        if !lp[(i, 0)].is_zero_val() || !lp[(i, 1)].is_zero_val() {
            return Err(GeomError::NotAdapted(
                "normal components must have no linear part; straighten with corank1_form first"
                    .into(),
            ));
        }
    }
    Ok(())
}

/// The curvature parabola of a corank-1 germ, with its degeneration kind and
/// radial flag decided by exact rank tests.
pub fn curvature_parabola<S: Scalar>(g: &MapGerm<S>) -> GeomResult<ConicLocus<S>> {
    require_corank1_position(g)?;
    let alpha = SffMatrix::from_corank1(g);
    Ok(ConicLocus::parabola_family(
        alpha.col(0),
        alpha.col(1),
        alpha.col(2),
    ))
}

/// The distinguished plane E_p (as a subspace through the origin) and the
/// affine span of the locus.
pub fn ep_aff_sing<S: Scalar>(locus: &ConicLocus<S>) -> (AffineSubspace<S>, AffineSubspace<S>) {
    let e = AffineSubspace::new(vec![S::zero(); locus.normal_dim()], locus.e_space());
    (e, locus.aff())
}

/// Umbilic curvature: the distance from the point to the affine span of the
/// curvature parabola.
pub fn kappa_sing<S: Scalar>(locus: &ConicLocus<S>) -> Kappa<S> {
    Kappa::from_sq(locus.kappa_sq())
}

/// Full pointwise classification of a corank-1 surface point.
#[derive(Clone, Debug)]
pub struct SingClassification {
    pub parabola_kind: LocusKind,
    pub radial: bool,
    pub stratum: MStratum,
    pub semiumbilic: bool,
    pub point_type: PointType,
}

pub fn classify_sing<S: Scalar>(g: &MapGerm<S>) -> GeomResult<SingClassification> {
    let locus = curvature_parabola(g)?;
    let dirs = asymptotic_dirs_sing(g)?;
    let point_type = if dirs.infinite {
        PointType::Inflection
    } else {
        match dirs.count() {
            2 => PointType::Hyperbolic,
            1 => PointType::Parabolic,
            _ => PointType::Elliptic,
        }
    };
    Ok(SingClassification {
        parabola_kind: locus.kind(),
        radial: locus.radial().unwrap_or(false),
        stratum: locus.mstratum(),
        semiumbilic: locus.is_semiumbilic(),
        point_type,
    })
}

/// Asymptotic directions of a corank-1 point: source directions u admitting a
/// nonzero binormal nu in E_p with II_nu(u, -) = 0. Their count (2, 0, 1, or
/// infinitely many) is the hyperbolic, elliptic, parabolic, inflection
/// trichotomy. Each finite direction carries its binormal as the dual.
pub fn asymptotic_dirs_sing<S: Scalar>(g: &MapGerm<S>) -> GeomResult<DirectionSet> {
    require_corank1_position(g)?;
    let alpha = SffMatrix::from_corank1(g);
    let (l, m, n) = (alpha.col(0), alpha.col(1), alpha.col(2));
    let locus = ConicLocus::parabola_family(l.clone(), m.clone(), n.clone());
    let basis = locus.e_space();
    // With nu = s w1 + t w2 the degeneracy condition H_nu u = 0 has a nonzero
    // solution (s, t) exactly when the two vectors H_{w1} u and H_{w2} u are
    // dependent; that determinant is the same minor quadratic as in the
    // regular four-space case, over the rows (<w_i,l>, <w_i,m>, <w_i,n>).
    let rows: Vec<Vec<S>> = basis
        .iter()
        .map(|w| vec![linalg::dot(w, &l), linalg::dot(w, &m), linalg::dot(w, &n)])
        .collect();
    let quad = surf_r4::asymptotic_form(&SffMatrix::from_rows(2, rows.clone()));
    if quad.is_zero() {
        return Ok(DirectionSet::infinite());
    }
    let rows_f: Vec<[f64; 3]> = rows
        .iter()
        .map(|r| [r[0].to_f64(), r[1].to_f64(), r[2].to_f64()])
        .collect();
    let basis_f: Vec<Vec<f64>> = basis
        .iter()
        .map(|w| w.iter().map(|v| v.to_f64()).collect())
        .collect();
    let entries = quad
        .real_directions()
        .unwrap()
        .into_iter()
        .map(|(dir, mult)| {
            let nu = sing_binormal(&rows_f, &basis_f, &dir);
            DirEntry::with_dual(dir.to_vec(), mult as usize, DirTag::Plain, nu)
        })
        .collect();
    Ok(DirectionSet::finite(entries))
}

fn sing_binormal(rows_f: &[[f64; 3]], basis_f: &[Vec<f64>], u: &[f64; 2]) -> Vec<f64> {
    // Kernel coefficients (s, t) of s H_{w1}u + t H_{w2}u = 0, taken from the
    // larger row of the 2x2 system; at a root of a nonzero quadratic the two
    // images cannot both vanish.
    let img = |r: &[f64; 3]| [r[0] * u[0] + r[1] * u[1], r[1] * u[0] + r[2] * u[1]];
    let c1 = img(&rows_f[0]);
    let c2 = img(&rows_f[1]);
    let row_x = [c1[0], c2[0]];
    let row_y = [c1[1], c2[1]];
    let pick = if row_x[0] * row_x[0] + row_x[1] * row_x[1]
        >= row_y[0] * row_y[0] + row_y[1] * row_y[1]
    {
        row_x
    } else {
        row_y
    };
    let (s, t) = (pick[1], -pick[0]);
    let nu: Vec<f64> = (0..basis_f[0].len())
        .map(|i| s * basis_f[0][i] + t * basis_f[1][i])
        .collect();
    crate::dirs::canonical_unit(&nu)
}

fn canonical_sign<S: Scalar>(v: Vec<S>) -> Vec<S> {
    match v.iter().find(|c| !c.is_zero_val()).map(|c| c.sign()) {
        Some(Sign::Negative) => linalg::vneg(&v),
        _ => v,
    }
}

fn unit_or_irrational<S: Scalar>(v: &[S]) -> GeomResult<Vec<S>> {
    linalg::unitize(v).ok_or(GeomError::IrrationalRotation)
}

fn plane_complement<S: Scalar>(locus: &ConicLocus<S>, w: &[S]) -> GeomResult<Vec<S>> {
    for b in locus.e_space() {
        let perp = linalg::vsub(&b, &linalg::vscale(w, &linalg::dot(&b, w)));
        if !linalg::is_zero_vec(&perp) {
            return unit_or_irrational(&perp);
        }
    }
    unreachable!("a plane holds a direction independent of any single vector")
}

/// Unit frame [w1, w2, w3] of the normal space whose pullback is the adapted
/// frame: w3 spans E_p-perp for a parabola, w1 is the locus direction for a
/// half-line or line, w2 the locus direction for a point. Right-handed.
fn frame_vectors<S: Scalar>(locus: &ConicLocus<S>) -> GeomResult<[Vec<S>; 3]> {
    let (l, m, n) = (locus.l(), locus.m(), locus.n());
    match locus.kind() {
        LocusKind::Parabola => {
            let w2 = unit_or_irrational(n)?;
            let mut w3 = unit_or_irrational(&linalg::cross3(m, n))?;
            match linalg::dot(l, &w3).sign() {
                Sign::Negative => w3 = linalg::vneg(&w3),
                Sign::Zero => w3 = canonical_sign(w3),
                Sign::Positive => {}
            }
            let w1 = linalg::cross3(&w2, &w3);
            Ok([w1, w2, w3])
        }
        LocusKind::HalfLine | LocusKind::Line => {
            let dir = if locus.kind() == LocusKind::HalfLine { n } else { m };
            let w1 = unit_or_irrational(dir)?;
            let lp = linalg::vsub(l, &linalg::vscale(&w1, &linalg::dot(l, &w1)));
            let w2 = if linalg::is_zero_vec(&lp) {
                plane_complement(locus, &w1)?
            } else {
                unit_or_irrational(&lp)?
            };
            let w3 = linalg::cross3(&w1, &w2);
            Ok([w1, w2, w3])
        }
        LocusKind::Point => {
            if linalg::is_zero_vec(l) {
                let e = |i: usize| {
                    let mut v = vec![S::zero(); 3];
                    v[i] = S::one();
                    v
                };
                return Ok([e(0), e(1), e(2)]);
            }
            let w2 = unit_or_irrational(l)?;
            let w1 = plane_complement(locus, &w2)?;
            let w3 = linalg::cross3(&w1, &w2);
            Ok([w1, w2, w3])
        }
        _ => unreachable!("parabolic family has no elliptic kinds"),
    }
}

/// Orthonormal normal frame [nu2, nu3, nu4] adapted to the curvature locus,
/// as ambient vectors: positively oriented, nu4 orthogonal to E_p, [nu2, nu3]
/// framing E_p, and the locus direction sitting on nu2 (line or half-line)
/// or nu3 (point away from the origin).
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedFrame<S: Scalar> {
    pub nu2: Vec<S>,
    pub nu3: Vec<S>,
    pub nu4: Vec<S>,
}

fn embed_ambient<S: Scalar>(v: &[S]) -> Vec<S> {
    let mut out = vec![S::zero()];
    out.extend(v.iter().cloned());
    out
}

pub fn adapted_frame<S: Scalar>(g: &MapGerm<S>) -> GeomResult<AdaptedFrame<S>> {
    let locus = curvature_parabola(g)?;
    let [w1, w2, w3] = frame_vectors(&locus)?;
    Ok(AdaptedFrame {
        nu2: embed_ambient(&w1),
        nu3: embed_ambient(&w2),
        nu4: embed_ambient(&w3),
    })
}

/// A corank-1 germ carried to one of the four reduced quadratic shapes, with
/// the target isometry (columns are the new axes in old coordinates) and the
/// linear source change that did it: germ = frame^T . input . source.
#[derive(Clone, Debug)]
pub struct SingNormalForm<S: Scalar> {
    pub germ: MapGerm<S>,
    pub frame: Mat<S>,
    pub source: Mat<S>,
    pub kind: LocusKind,
}

/// Reduce the 2-jet to exactly one of the shapes
/// (x, xy, b20 x^2 + b11 xy + b02 y^2, c20 x^2), (x, a20 x^2 + y^2, b20 x^2, 0),
/// (x, xy, b20 x^2, 0), (x, 0, b20 x^2, 0), with b02 > 0, c20 >= 0 and
/// b20 >= 0 in the degenerate shapes. Cubic and higher terms are transformed
/// along but not normalized further.
pub fn reduce_normal_form<S: Scalar>(g: &MapGerm<S>) -> GeomResult<SingNormalForm<S>> {
    require_corank1_position(g)?;
    if g.degree() < 2 {
        return Err(GeomError::DegreeTooLow {
            needed: 2,
            found: g.degree(),
        });
    }
    let alpha = SffMatrix::from_corank1(g);
    let (l, m, n) = (alpha.col(0), alpha.col(1), alpha.col(2));
    let locus = ConicLocus::parabola_family(l.clone(), m.clone(), n.clone());
    let [w1, w2, w3] = frame_vectors(&locus)?;
    let two = S::from_int(2);
    // Source change (x, y) -> (x, dx + cy): l' = l + 2dm + d^2 n,
    // m' = c(m + dn), n' = c^2 n. The shape constraints pin c and d.
    let (c, d) = match locus.kind() {
        LocusKind::Parabola => {
            let mw1 = linalg::dot(&m, &w1);
            let c = S::one() / mw1.clone();
            let d = -(linalg::dot(&l, &w1) / (two * mw1));
            (c, d)
        }
        LocusKind::HalfLine => {
            let n_norm = linalg::norm_sq(&n)
                .try_sqrt()
                .ok_or(GeomError::IrrationalRotation)?;
            let c = (two / n_norm)
                .try_sqrt()
                .ok_or(GeomError::IrrationalRotation)?;
            let d = -(linalg::dot(&m, &n) / linalg::norm_sq(&n));
            (c, d)
        }
        LocusKind::Line => {
            let m_norm = linalg::norm_sq(&m)
                .try_sqrt()
                .ok_or(GeomError::IrrationalRotation)?;
            let d = -(linalg::dot(&l, &m) / (two * linalg::norm_sq(&m)));
            (S::one() / m_norm, d)
        }
        LocusKind::Point => (S::one(), S::zero()),
        _ => unreachable!("parabolic family has no elliptic kinds"),
    };
    let source = Mat::from_rows(&[vec![S::one(), S::zero()], vec![d, c]]);
    let mut t = Mat::zeros(4, 4);
    t[(0, 0)] = S::one();
    for (i, w) in [&w1, &w2, &w3].into_iter().enumerate() {
        for j in 0..3 {
            t[(i + 1, j + 1)] = w[j].clone();
        }
    }
    let germ = g.precompose_linear(&source).postcompose_linear(&t);
    debug_assert!(
        canonical_params(&SffMatrix::from_corank1(&germ)).is_some(),
        "reduction must land on a canonical shape"
    );
    Ok(SingNormalForm {
        germ,
        frame: t.transpose(),
        source,
        kind: locus.kind(),
    })
}

enum SingShape<S> {
    Parabola { c20: S },
    HalfLine { b20: S },
    Line { b20: S },
    Point { b20: S },
}

fn canonical_params<S: Scalar>(alpha: &SffMatrix<S>) -> Option<SingShape<S>> {
    let rows = alpha.rows();
    let (r1, r2, r3) = (&rows[0], &rows[1], &rows[2]);
    let two = S::from_int(2);
    let zero = |x: &S| x.is_zero_val();
    let is = |x: &S, w: &S| (x.clone() - w.clone()).is_zero_val();
    let wiped = |r: &[S]| r.iter().all(|x| x.is_zero_val());
    let tail_clear = zero(&r2[1]) && zero(&r2[2]) && wiped(r3);
    if zero(&r1[0]) && is(&r1[1], &S::one()) && zero(&r1[2]) {
        if r2[2].sign() == Sign::Positive && zero(&r3[1]) && zero(&r3[2]) {
            return Some(SingShape::Parabola {
                c20: r3[0].clone() / two,
            });
        }
        if tail_clear {
            return Some(SingShape::Line {
                b20: r2[0].clone() / two,
            });
        }
        return None;
    }
    if zero(&r1[1]) && is(&r1[2], &two) && tail_clear {
        return Some(SingShape::HalfLine {
            b20: r2[0].clone() / two,
        });
    }
    if wiped(r1) && tail_clear {
        return Some(SingShape::Point {
            b20: r2[0].clone() / two,
        });
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FocalKind {
    Quadric,
    TwoTransversePlanes,
    TwoParallelPlanes,
    Hyperplane,
}

impl std::fmt::Display for FocalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FocalKind::Quadric => "QUADRIC",
            FocalKind::TwoTransversePlanes => "TWO_TRANSVERSE_PLANES",
            FocalKind::TwoParallelPlanes => "TWO_PARALLEL_PLANES",
            FocalKind::Hyperplane => "HYPERPLANE",
        };
        f.write_str(s)
    }
}

/// Centers where the distance-squared function degenerates in rank two, i.e.
/// where the full focal quadratic form vanishes identically. Ambient vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum UmbilicalLocus<S: Scalar> {
    None,
    Point { center: Vec<S> },
    Line { base: Vec<S>, direction: Vec<S> },
    Plane { base: Vec<S>, basis: [Vec<S>; 2] },
    AtInfinity { hyperplane_normal: Vec<S> },
}

impl<S: Scalar> UmbilicalLocus<S> {
    pub fn label(&self) -> &'static str {
        match self {
            UmbilicalLocus::None => "NONE",
            UmbilicalLocus::Point { .. } => "POINT",
            UmbilicalLocus::Line { .. } => "LINE",
            UmbilicalLocus::Plane { .. } => "PLANE",
            UmbilicalLocus::AtInfinity { .. } => "AT_INFINITY",
        }
    }
}

/// The focal set of a reduced corank-1 germ: the exact equation in the
/// normal coordinates (v2, v3, v4), its shape, the umbilical locus, and the
/// umbilic curvature.
#[derive(Clone, Debug)]
pub struct FocalSetDescriptor<S: Scalar> {
    pub kind: FocalKind,
    /// Determinant of half the distance Hessian, a polynomial of degree at
    /// most two in (v2, v3, v4); the focal set is its zero locus.
    pub equation: Poly<S>,
    pub umbilical: UmbilicalLocus<S>,
    pub kappa: Kappa<S>,
}

/// det(Hess d_a / 2) as a polynomial in the normal coordinates, for any
/// corank-1 germ (reduced or not).
pub fn focal_equation<S: Scalar>(alpha: &SffMatrix<S>) -> Poly<S> {
    let lin = |k: usize| {
        let mut p = Poly::zero(3);
        for i in 0..3 {
            p.add_term(Mono::var(i), alpha.rows()[i][k].clone());
        }
        p
    };
    let (a, b, c) = (lin(0), lin(1), lin(2));
    let one = Poly::constant(3, S::one());
    one.sub(&a).mul(&c.neg()).sub(&b.mul(&b))
}

pub fn focal_set<S: Scalar>(g: &MapGerm<S>) -> GeomResult<FocalSetDescriptor<S>> {
    require_corank1_position(g)?;
    let alpha = SffMatrix::from_corank1(g);
    let shape = canonical_params(&alpha).ok_or_else(|| {
        GeomError::NotAdapted(
            "germ is not in one of the four reduced shapes; run reduce_normal_form first".into(),
        )
    })?;
    let equation = focal_equation(&alpha);
    let locus = ConicLocus::parabola_family(alpha.col(0), alpha.col(1), alpha.col(2));
    let kappa = Kappa::from_sq(locus.kappa_sq());
    let two = S::from_int(2);
    let half_inv = |v: &S| S::one() / (two.clone() * v.clone());
    let e = |i: usize| {
        let mut v = vec![S::zero(); 4];
        v[i] = S::one();
        v
    };
    let at = |i: usize, v: S| {
        let mut out = vec![S::zero(); 4];
        out[i] = v;
        out
    };
    let (kind, umbilical) = match shape {
        SingShape::Parabola { c20 } => {
            let umb = if c20.is_zero_val() {
                UmbilicalLocus::AtInfinity {
                    hyperplane_normal: e(3),
                }
            } else {
                UmbilicalLocus::Point {
                    center: at(3, half_inv(&c20)),
                }
            };
            (FocalKind::Quadric, umb)
        }
        SingShape::HalfLine { b20 } => {
            if b20.is_zero_val() {
                (FocalKind::TwoParallelPlanes, UmbilicalLocus::None)
            } else {
                (
                    FocalKind::TwoTransversePlanes,
                    UmbilicalLocus::Line {
                        base: at(2, half_inv(&b20)),
                        direction: e(3),
                    },
                )
            }
        }
        SingShape::Line { b20 } => {
            let umb = if b20.is_zero_val() {
                UmbilicalLocus::None
            } else {
                UmbilicalLocus::Line {
                    base: at(2, half_inv(&b20)),
                    direction: e(3),
                }
            };
            (FocalKind::TwoParallelPlanes, umb)
        }
        SingShape::Point { b20 } => {
            let umb = if b20.is_zero_val() {
                UmbilicalLocus::None
            } else {
                UmbilicalLocus::Plane {
                    base: at(2, half_inv(&b20)),
                    basis: [e(1), e(3)],
                }
            };
            (FocalKind::Hyperplane, umb)
        }
    };
    Ok(FocalSetDescriptor {
        kind,
        equation,
        umbilical,
        kappa,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::hessian_distance_sq;
    use crate::scalar::{rat, rint, Rat};

    fn germ(src: &str) -> MapGerm<Rat> {
        MapGerm::parse(src).unwrap()
    }

    const HEAD: &str = "domain 2\ncodomain 4\ndegree 2\n0 1,0 1\n";

    // Projection of the plane (x, y, x^2, 2xy, y^2) along the y tangent axis.
    fn projected_example() -> MapGerm<Rat> {
        germ(&format!("{HEAD}1 2,0 1\n2 1,1 2\n3 0,2 1\n"))
    }

    #[test]
    fn parabola_kinds_strata_and_umbilic_curvature() {
        let locus = curvature_parabola(&projected_example()).unwrap();
        assert_eq!(locus.kind(), LocusKind::Parabola);
        assert_eq!(locus.mstratum(), MStratum::M3);
        assert_eq!(kappa_sing(&locus).exact(), Some(rint(2)));
        let (e, aff) = ep_aff_sing(&locus);
        assert_eq!(aff.base, vec![rint(2), rint(0), rint(0)]);
        assert_eq!(e.basis, vec![vec![rint(0), rint(1), rint(0)], vec![rint(0), rint(0), rint(1)]]);
        assert_eq!(aff.basis, e.basis);

        // Half-line (x, x^2 + y^2, (3/2) x^2, 0): umbilic curvature 3.
        let g = germ(&format!("{HEAD}1 2,0 1\n1 0,2 1\n2 2,0 3/2\n"));
        let locus = curvature_parabola(&g).unwrap();
        assert_eq!(locus.kind(), LocusKind::HalfLine);
        assert_eq!(locus.radial(), Some(false));
        assert_eq!(locus.mstratum(), MStratum::M2);
        assert!(locus.is_semiumbilic());
        assert_eq!(kappa_sing(&locus).exact(), Some(rint(3)));

        // Line (x, xy, x^2, 0).
        let g = germ(&format!("{HEAD}1 1,1 1\n2 2,0 1\n"));
        let locus = curvature_parabola(&g).unwrap();
        assert_eq!(locus.kind(), LocusKind::Line);
        assert_eq!(locus.radial(), Some(false));
        assert_eq!(locus.mstratum(), MStratum::M2);
        assert!(locus.is_semiumbilic());
        assert_eq!(kappa_sing(&locus).exact(), Some(rint(2)));

        // Radial half-line through the origin (x, y^2, 0, 0).
        let g = germ(&format!("{HEAD}1 0,2 1\n"));
        let locus = curvature_parabola(&g).unwrap();
        assert_eq!(locus.kind(), LocusKind::HalfLine);
        assert_eq!(locus.radial(), Some(true));
        assert_eq!(locus.mstratum(), MStratum::M1);
        assert!(!locus.is_semiumbilic());
        assert!(kappa_sing(&locus).is_zero());

        // Point away from the origin (x, 0, x^2, 0), and the fully flat point.
        let g = germ(&format!("{HEAD}2 2,0 1\n"));
        let locus = curvature_parabola(&g).unwrap();
        assert_eq!(locus.kind(), LocusKind::Point);
        assert_eq!(locus.radial(), Some(false));
        assert_eq!(locus.mstratum(), MStratum::M1);
        assert_eq!(kappa_sing(&locus).exact(), Some(rint(2)));

        let g = germ("domain 2\ncodomain 4\ndegree 3\n0 1,0 1\n1 3,0 1\n");
        let locus = curvature_parabola(&g).unwrap();
        assert_eq!(locus.kind(), LocusKind::Point);
        assert_eq!(locus.mstratum(), MStratum::M0);

        // A genuinely immersive germ is rejected.
        let g = germ("domain 2\ncodomain 4\ndegree 2\n0 1,0 1\n1 0,1 1\n");
        assert!(matches!(
            curvature_parabola(&g),
            Err(GeomError::NotAdapted(_))
        ));
    }

    #[test]
    fn asymptotic_trichotomy_with_binormals() {
        // Hyperbolic: vertex curve on the far side of the origin.
        let g = germ(&format!("{HEAD}1 1,1 1\n2 2,0 1\n2 0,2 1\n"));
        let set = asymptotic_dirs_sing(&g).unwrap();
        assert_eq!(set.count(), 2);
        let s5 = 5.0_f64.sqrt();
        let expected = DirectionSet::finite(vec![
            DirEntry::with_dual(
                vec![1.0, 1.0],
                1,
                DirTag::Plain,
                vec![2.0 / s5, -1.0 / s5, 0.0],
            ),
            DirEntry::with_dual(
                vec![1.0, -1.0],
                1,
                DirTag::Plain,
                vec![2.0 / s5, 1.0 / s5, 0.0],
            ),
        ]);
        assert!(set.matches(&expected, 1e-12));
        for e in &set.entries {
            let dual = e.dual_normal.as_ref().unwrap();
            assert!((linalg::norm_sq(dual) - 1.0).abs() < 1e-12);
        }

        // Elliptic: no asymptotic directions.
        let g = germ(&format!("{HEAD}1 1,1 1\n2 2,0 -1\n2 0,2 1\n"));
        assert_eq!(asymptotic_dirs_sing(&g).unwrap().count(), 0);

        // Parabolic: the projected example has one double direction along x,
        // with binormal on the E_p axis that kills the whole form.
        let set = asymptotic_dirs_sing(&projected_example()).unwrap();
        assert_eq!(set.count(), 1);
        assert_eq!(set.total_multiplicity(), 2);
        let expected = DirectionSet::finite(vec![DirEntry::with_dual(
            vec![1.0, 0.0],
            2,
            DirTag::Plain,
            vec![0.0, 0.0, 1.0],
        )]);
        assert!(set.matches(&expected, 1e-12));

        // Semiumbilic half-line points are hyperbolic.
        let g = germ(&format!("{HEAD}1 2,0 1\n1 0,2 1\n2 2,0 3/2\n"));
        let set = asymptotic_dirs_sing(&g).unwrap();
        assert_eq!(set.count(), 2);
        let s13 = 13.0_f64.sqrt();
        let expected = DirectionSet::finite(vec![
            DirEntry::with_dual(
                vec![1.0, 0.0],
                1,
                DirTag::Plain,
                vec![3.0 / s13, -2.0 / s13, 0.0],
            ),
            DirEntry::with_dual(vec![0.0, 1.0], 1, DirTag::Plain, vec![0.0, 1.0, 0.0]),
        ]);
        assert!(set.matches(&expected, 1e-12));

        // Semiumbilic line points are parabolic.
        let g = germ(&format!("{HEAD}1 1,1 1\n2 2,0 1\n"));
        let set = asymptotic_dirs_sing(&g).unwrap();
        assert_eq!(set.count(), 1);
        assert_eq!(set.total_multiplicity(), 2);

        // Rank-one loci are inflection points.
        let g = germ(&format!("{HEAD}1 1,1 1\n"));
        assert!(asymptotic_dirs_sing(&g).unwrap().infinite);
        let g = germ(&format!("{HEAD}1 0,2 1\n"));
        assert!(asymptotic_dirs_sing(&g).unwrap().infinite);
    }

    #[test]
    fn classification_table() {
        let c = classify_sing(&projected_example()).unwrap();
        assert_eq!(c.parabola_kind, LocusKind::Parabola);
        assert_eq!(c.stratum, MStratum::M3);
        assert!(!c.radial);
        assert!(!c.semiumbilic);
        assert_eq!(c.point_type, PointType::Parabolic);

        let g = germ(&format!("{HEAD}1 1,1 1\n2 2,0 1\n2 0,2 1\n"));
        let c = classify_sing(&g).unwrap();
        assert_eq!(c.parabola_kind, LocusKind::Parabola);
        assert_eq!(c.stratum, MStratum::M2);
        assert_eq!(c.point_type, PointType::Hyperbolic);

        let g = germ(&format!("{HEAD}1 0,2 1\n"));
        let c = classify_sing(&g).unwrap();
        assert_eq!(c.parabola_kind, LocusKind::HalfLine);
        assert!(c.radial);
        assert_eq!(c.stratum, MStratum::M1);
        assert_eq!(c.point_type, PointType::Inflection);
    }

    #[test]
    fn reduction_straightens_and_preserves_invariants() {
        // The projected example lands on (x, xy, y^2/4, x^2).
        let nf = reduce_normal_form(&projected_example()).unwrap();
        assert_eq!(nf.kind, LocusKind::Parabola);
        let want = germ(&format!("{HEAD}1 1,1 1\n2 0,2 1/4\n3 2,0 1\n"));
        for i in 0..4 {
            assert!(nf.germ.comp(i).sub(want.comp(i)).is_zero());
        }
        let frame = adapted_frame(&projected_example()).unwrap();
        assert_eq!(frame.nu2, vec![rint(0), rint(0), rint(1), rint(0)]);
        assert_eq!(frame.nu3, vec![rint(0), rint(0), rint(0), rint(1)]);
        assert_eq!(frame.nu4, vec![rint(0), rint(1), rint(0), rint(0)]);

        // Umbilic curvature and kind survive the reduction.
        let before = curvature_parabola(&projected_example()).unwrap();
        let after = curvature_parabola(&nf.germ).unwrap();
        assert_eq!(before.kappa_sq(), after.kappa_sq());
        assert_eq!(before.kind(), after.kind());

        // An already canonical half-line germ is fixed by the reduction.
        let g = germ(&format!("{HEAD}1 2,0 1\n1 0,2 1\n2 2,0 3/2\n"));
        let nf = reduce_normal_form(&g).unwrap();
        for i in 0..4 {
            assert!(nf.germ.comp(i).sub(g.comp(i)).is_zero());
        }
        assert_eq!(nf.source, Mat::identity(2));
        assert_eq!(nf.frame, Mat::identity(4));

        // Rational rotation of a canonical parabola germ reduces back to it.
        let base = germ(&format!("{HEAD}1 1,1 1\n2 2,0 1\n2 1,1 1\n2 0,2 1\n3 2,0 2\n"));
        let mut rot = Mat::identity(4);
        let (c35, s45) = (rat(3, 5), rat(4, 5));
        rot[(1, 1)] = c35.clone();
        rot[(1, 3)] = -s45.clone();
        rot[(3, 1)] = s45;
        rot[(3, 3)] = c35;
        let turned = base.postcompose_linear(&rot);
        let nf = reduce_normal_form(&turned).unwrap();
        for i in 0..4 {
            assert!(nf.germ.comp(i).sub(base.comp(i)).is_zero(), "component {i}");
        }
        let before = curvature_parabola(&turned).unwrap();
        assert_eq!(before.kappa_sq(), rint(16));

        // A frame that needs sqrt(2) is refused over the rationals.
        let g = germ(&format!("{HEAD}1 1,1 1\n2 1,1 1\n"));
        assert!(matches!(
            reduce_normal_form(&g),
            Err(GeomError::IrrationalRotation)
        ));
    }

    #[test]
    fn focal_sets_by_case() {
        // Reduced parabola with b11 = 0, b02 = 1, b20 = 1, c20 = 1: the
        // quadric -v2^2 + 4 v3^2 + 4 v3 v4 - 2 v3 with its focus at v4 = 1/2.
        let g = germ(&format!("{HEAD}1 1,1 1\n2 2,0 1\n2 0,2 1\n3 2,0 1\n"));
        let f = focal_set(&g).unwrap();
        assert_eq!(f.kind, FocalKind::Quadric);
        assert_eq!(f.kappa.exact(), Some(rint(2)));
        let mut want: Poly<Rat> = Poly::zero(3);
        want.add_term(Mono([2, 0, 0]), rint(-1));
        want.add_term(Mono([0, 2, 0]), rint(4));
        want.add_term(Mono([0, 1, 1]), rint(4));
        want.add_term(Mono([0, 1, 0]), rint(-2));
        assert!(f.equation.sub(&want).is_zero());
        let center = match &f.umbilical {
            UmbilicalLocus::Point { center } => center.clone(),
            other => panic!("expected a point focus, got {}", other.label()),
        };
        assert_eq!(center, vec![rint(0), rint(0), rint(0), rat(1, 2)]);
        assert!(f.equation.eval(&center[1..].to_vec()).is_zero_val());
        assert_eq!(hessian_distance_sq(&g, &center).rank(), 0);

        // The equation is the determinant of half the distance Hessian.
        let probe = vec![rint(0), rat(1, 3), rint(-2), rat(5, 7)];
        let det = hessian_distance_sq(&g, &probe).det() / rint(4);
        assert_eq!(f.equation.eval(&probe[1..].to_vec()), det);

        // Parabola with kappa = 0: focus escapes to infinity.
        let g = germ(&format!("{HEAD}1 1,1 1\n2 2,0 1\n2 0,2 1\n"));
        let f = focal_set(&g).unwrap();
        assert_eq!(
            f.umbilical,
            UmbilicalLocus::AtInfinity {
                hyperplane_normal: vec![rint(0), rint(0), rint(0), rint(1)]
            }
        );

        // Semiumbilic half-line: two transverse planes and a line of foci.
        let g = germ(&format!("{HEAD}1 2,0 1\n1 0,2 1\n2 2,0 3/2\n"));
        let f = focal_set(&g).unwrap();
        assert_eq!(f.kind, FocalKind::TwoTransversePlanes);
        assert_eq!(f.kappa.exact(), Some(rint(3)));
        let (base, direction) = match &f.umbilical {
            UmbilicalLocus::Line { base, direction } => (base.clone(), direction.clone()),
            other => panic!("expected a line of foci, got {}", other.label()),
        };
        assert_eq!(base, vec![rint(0), rint(0), rat(1, 3), rint(0)]);
        assert_eq!(direction, vec![rint(0), rint(0), rint(0), rint(1)]);
        for t in [rint(0), rint(2), rat(-1, 2)] {
            let mut a = base.clone();
            a[3] = t.clone();
            assert_eq!(hessian_distance_sq(&g, &a).rank(), 0, "t = {t}");
        }

        // Radial half-line: parallel planes, no finite or infinite focus.
        let g = germ(&format!("{HEAD}1 2,0 1\n1 0,2 1\n"));
        let f = focal_set(&g).unwrap();
        assert_eq!(f.kind, FocalKind::TwoParallelPlanes);
        assert_eq!(f.umbilical, UmbilicalLocus::None);
        assert!(f.kappa.is_zero());

        // Line: the doubled plane v2 = 0 with a line of foci.
        let g = germ(&format!("{HEAD}1 1,1 1\n2 2,0 1\n"));
        let f = focal_set(&g).unwrap();
        assert_eq!(f.kind, FocalKind::TwoParallelPlanes);
        let mut want: Poly<Rat> = Poly::zero(3);
        want.add_term(Mono([2, 0, 0]), rint(-1));
        assert!(f.equation.sub(&want).is_zero());
        assert!(matches!(f.umbilical, UmbilicalLocus::Line { .. }));

        // Umbilic non-flat point with b20 = 1/2: a whole plane of foci at
        // v3 = 1, and the focal equation collapses to zero.
        let g = germ(&format!("{HEAD}2 2,0 1/2\n"));
        let f = focal_set(&g).unwrap();
        assert_eq!(f.kind, FocalKind::Hyperplane);
        assert!(f.equation.is_zero());
        assert_eq!(f.kappa.exact(), Some(rint(1)));
        let (base, basis) = match &f.umbilical {
            UmbilicalLocus::Plane { base, basis } => (base.clone(), basis.clone()),
            other => panic!("expected a plane of foci, got {}", other.label()),
        };
        assert_eq!(base, vec![rint(0), rint(0), rint(1), rint(0)]);
        for (s, t) in [(rint(0), rint(0)), (rint(3), rint(-1)), (rat(1, 7), rint(2))] {
            let mut a = base.clone();
            for i in 0..4 {
                a[i] = a[i].clone() + s.clone() * basis[0][i].clone() + t.clone() * basis[1][i].clone();
            }
            assert_eq!(hessian_distance_sq(&g, &a).rank(), 0);
        }

        // A germ that is not reduced is refused.
        assert!(matches!(
            focal_set(&projected_example()),
            Err(GeomError::NotAdapted(_))
        ));
    }
}
