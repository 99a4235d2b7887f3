//! 3-manifolds in six-space: the 3x6 second fundamental form, the mean
//! curvature vector H with the five locus generators B1..B5, curvature locus
//! sampling on the unit sphere, umbilic curvature for planar loci, asymptotic
//! directions with binormals, and the umbilical focus.

use crate::dirs::{self, DirEntry, DirTag, DirectionSet};
use crate::error::{GeomError, GeomResult};
use crate::height::{hessian_distance_sq, SffMatrix};
use crate::jet::{AffineSubspace, MapGerm};
use crate::linalg::{self};
use crate::locus::Kappa;
use crate::poly::{Mono, Poly};
use crate::scalar::{Scalar, Sign};

/// The two exact routes to the umbilic curvature (affine distance and the
/// mean-curvature pairing) must agree at least this well in floating point.
pub const KAPPA6_AGREE_TOL: f64 = 1e-10;

/// Relative tolerance on the asymptotic determinant for polished sphere
/// roots.
pub const ASYM_DET_TOL: f64 = 1e-12;

/// Angular separation below which two polished sphere roots are the same
/// direction.
const SCAN_DEDUPE_TOL: f64 = 5e-4;

fn require_monge_3mfld<S: Scalar>(g: &MapGerm<S>) -> GeomResult<()> {
    if g.domain() != 3 || g.codomain() != 6 {
        return Err(GeomError::UnsupportedDimensions {
            domain: g.domain(),
            codomain: g.codomain(),
        });
    }
    if !g.in_graph_position() {
        return Err(GeomError::NotAdapted(
            "germ must be a Monge graph (x, y, z, f1, f2, f3); straighten with monge_form first"
                .into(),
        ));
    }
    Ok(())
}

/// Second fundamental form of a Monge 3-manifold germ: three rows
/// (a, b, c, d, r, s), the plain partials (xx, xy, xz, yy, yz, zz) of the
/// normal components.
pub fn alpha3<S: Scalar>(g: &MapGerm<S>) -> GeomResult<SffMatrix<S>> {
    require_monge_3mfld(g)?;
    Ok(SffMatrix::from_monge(g))
}

/// Curvature locus data at a 3-manifold point: the mean curvature vector,
/// the five generators of E_p, and the affine subspace H + E_p that carries
/// the locus. All vectors live in the 3-dimensional normal space.
#[derive(Clone, Debug)]
pub struct LocusR6<S: Scalar> {
    pub h: Vec<S>,
    pub b: [Vec<S>; 5],
    pub ep_dim: usize,
    pub aff: AffineSubspace<S>,
}

impl<S: Scalar> LocusR6<S> {
    /// Reduced basis of E_p (pivot rows, so equal spans agree exactly).
    pub fn ep_basis(&self) -> &[Vec<S>] {
        &self.aff.basis
    }
}

/// H and B1..B5 from the second fundamental form rows. Componentwise, with
/// row i contributing only to coordinate i of each vector:
/// H = (a+d+s)/3, B1 = (-a-d+2s)/12, B2 = (a-d)/2, B3 = b, B4 = c, B5 = r.
pub fn hb_vectors<S: Scalar>(alpha: &SffMatrix<S>) -> LocusR6<S> {
    assert_eq!(alpha.domain(), 3, "3-manifold rows have six columns");
    let col = |j: usize| alpha.col(j);
    let (a, b, c, d, r, s) = (col(0), col(1), col(2), col(3), col(4), col(5));
    let three = S::from_int(3);
    let twelve = S::from_int(12);
    let two = S::from_int(2);
    let k = a.len();
    let mut h = Vec::with_capacity(k);
    let mut b1 = Vec::with_capacity(k);
    let mut b2 = Vec::with_capacity(k);
    for i in 0..k {
        h.push((a[i].clone() + d[i].clone() + s[i].clone()) / three.clone());
        b1.push((two.clone() * s[i].clone() - a[i].clone() - d[i].clone()) / twelve.clone());
        b2.push((a[i].clone() - d[i].clone()) / two.clone());
    }
    let gens = [b1, b2, b, c, r];
    let basis = linalg::row_space_basis(&gens);
    LocusR6 {
        ep_dim: basis.len(),
        aff: AffineSubspace::new(h.clone(), basis),
        h,
        b: gens,
    }
}

/// Point of the curvature locus at spherical angles, for the direction
/// u = (cos t sin p, sin t sin p, cos p). The coefficient on B2 is
/// cos(2t) sin(p)^2: expanding II(u, u) in the H/B basis forces it, and the
/// cross-check test below holds this to 1e-10 on a whole grid.
pub fn locus_sample<S: Scalar>(locus: &LocusR6<S>, theta: f64, phi: f64) -> Vec<f64> {
    let hf: Vec<f64> = locus.h.iter().map(|v| v.to_f64()).collect();
    let bf: Vec<Vec<f64>> = locus
        .b
        .iter()
        .map(|w| w.iter().map(|v| v.to_f64()).collect())
        .collect();
    let sp2 = phi.sin() * phi.sin();
    let weights = [
        1.0 + 3.0 * (2.0 * phi).cos(),
        (2.0 * theta).cos() * sp2,
        (2.0 * theta).sin() * sp2,
        theta.cos() * (2.0 * phi).sin(),
        theta.sin() * (2.0 * phi).sin(),
    ];
    (0..hf.len())
        .map(|i| hf[i] + weights.iter().zip(&bf).map(|(w, b)| w * b[i]).sum::<f64>())
        .collect()
}

/// Umbilic curvature of a planar curvature locus: the distance from the
/// point to the affine plane of the locus. Computed exactly through the
/// affine geometry and double-checked against the pairing of H with the unit
/// normal of E_p.
pub fn kappa6<S: Scalar>(locus: &LocusR6<S>) -> GeomResult<Kappa<S>> {
    if locus.ep_dim != 2 {
        return Err(GeomError::WrongStratum(format!(
            "umbilic curvature undefined: dim E_p = {}, the locus must be planar (dim 2)",
            locus.ep_dim
        )));
    }
    let kappa = Kappa::from_sq(locus.aff.distance_sq_to_origin());
    let bf: Vec<Vec<f64>> = locus
        .aff
        .basis
        .iter()
        .map(|w| w.iter().map(|v| v.to_f64()).collect())
        .collect();
    let nu = linalg::cross3(&bf[0], &bf[1]);
    let norm = linalg::norm_sq(&nu).sqrt();
    let hf: Vec<f64> = locus.h.iter().map(|v| v.to_f64()).collect();
    let pairing = (linalg::dot(&hf, &nu) / norm).abs();
    assert!(
        (kappa.value() - pairing).abs() <= KAPPA6_AGREE_TOL,
        "distance and pairing routes disagree: {} vs {}",
        kappa.value(),
        pairing
    );
    Ok(kappa)
}

/// det[H_1 u | H_2 u | H_3 u] as a homogeneous cubic in the direction u.
/// Its zero cone meets the unit sphere in the asymptotic directions: u is
/// asymptotic exactly when some nonzero normal vector nu kills II_nu(u, -),
/// i.e. when the three Hessian images of u are dependent.
pub fn asymptotic_det<S: Scalar>(alpha: &SffMatrix<S>) -> Poly<S> {
    assert_eq!(alpha.domain(), 3, "the asymptotic cone needs 3x3 Hessians");
    let e = |j: usize| {
        let mut v = vec![S::zero(); alpha.nrows()];
        v[j] = S::one();
        v
    };
    // entry(k, j) = k-th component of H_j u, a linear form in u
    let hess: Vec<_> = (0..3).map(|j| alpha.hessian(&e(j))).collect();
    let entry = |k: usize, j: usize| {
        let mut p = Poly::zero(3);
        for l in 0..3 {
            p.add_term(Mono::var(l), hess[j][(k, l)].clone());
        }
        p
    };
    let minor = |k1: usize, j1: usize, k2: usize, j2: usize| {
        entry(k1, j1).mul(&entry(k2, j2)).sub(&entry(k1, j2).mul(&entry(k2, j1)))
    };
    entry(0, 0)
        .mul(&minor(1, 1, 2, 2))
        .sub(&entry(0, 1).mul(&minor(1, 0, 2, 2)))
        .add(&entry(0, 2).mul(&minor(1, 0, 2, 1)))
}

/// Binormal at an asymptotic direction: the common annihilator nu with
/// sum_j nu_j H_j u = 0, read off the kernel of the 3x3 matrix whose columns
/// are the Hessian images of u.
pub fn binormal_at<S: Scalar>(alpha: &SffMatrix<S>, u: &[f64]) -> Vec<f64> {
    assert_eq!(u.len(), 3);
    let rows: Vec<Vec<f64>> = alpha
        .rows()
        .iter()
        .map(|r| r.iter().map(|v| v.to_f64()).collect())
        .collect();
    let img = |r: &[f64]| {
        // (a, b, c, d, r, s) row against u, giving the Hessian image
        vec![
            r[0] * u[0] + r[1] * u[1] + r[2] * u[2],
            r[1] * u[0] + r[3] * u[1] + r[4] * u[2],
            r[2] * u[0] + r[4] * u[1] + r[5] * u[2],
        ]
    };
    let cols: Vec<Vec<f64>> = rows.iter().map(|r| img(r)).collect();
    // nu must be orthogonal to every row of the column matrix
    let row = |k: usize| vec![cols[0][k], cols[1][k], cols[2][k]];
    let (r0, r1, r2) = (row(0), row(1), row(2));
    let candidates = [
        linalg::cross3(&r0, &r1),
        linalg::cross3(&r0, &r2),
        linalg::cross3(&r1, &r2),
    ];
    let best = candidates
        .iter()
        .max_by(|a, b| {
            linalg::norm_sq(a)
                .partial_cmp(&linalg::norm_sq(b))
                .unwrap()
        })
        .unwrap();
    if linalg::norm_sq(best) > 0.0 {
        return dirs::canonical_unit(best);
    }
    // Rank at most one: a 2-dimensional kernel, pick any unit normal to the
    // largest row.
    let big = [&r0, &r1, &r2]
        .into_iter()
        .max_by(|a, b| {
            linalg::norm_sq(a.as_slice())
                .partial_cmp(&linalg::norm_sq(b.as_slice()))
                .unwrap()
        })
        .unwrap();
    if linalg::norm_sq(big.as_slice()) == 0.0 {
        return vec![1.0, 0.0, 0.0];
    }
    let axis = if big[0].abs() <= big[1].abs() && big[0].abs() <= big[2].abs() {
        vec![1.0, 0.0, 0.0]
    } else if big[1].abs() <= big[2].abs() {
        vec![0.0, 1.0, 0.0]
    } else {
        vec![0.0, 0.0, 1.0]
    };
    dirs::canonical_unit(&linalg::cross3(big, &axis))
}

fn sphere_point(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.cos() * phi.sin(),
        theta.sin() * phi.sin(),
        phi.cos(),
    ]
}

/// Representative asymptotic directions on the unit sphere. The zero set of
/// the determinant cubic is generically a curve; the scan walks a 360 x 180
/// grid, localizes sign changes along grid edges, and bisects each crossing
/// down to ASYM_DET_TOL (relative to the grid maximum). An identically zero
/// determinant is flagged as the infinite set.
pub fn asymptotic_dirs_3mfld<S: Scalar>(alpha: &SffMatrix<S>) -> DirectionSet {
    let det = asymptotic_det(alpha);
    if det.is_negligible() {
        return DirectionSet::infinite();
    }
    let (nt, np) = (360usize, 180usize);
    let theta = |i: usize| (i as f64) * std::f64::consts::TAU / (nt as f64);
    let phi = |j: usize| (j as f64) * std::f64::consts::PI / (np as f64);
    let mut values = vec![vec![0.0f64; np + 1]; nt];
    let mut scale = 0.0f64;
    for i in 0..nt {
        for j in 0..=np {
            let v = det.eval_f64(&sphere_point(theta(i), phi(j)));
            scale = scale.max(v.abs());
            values[i][j] = v;
        }
    }
    if scale == 0.0 {
        return DirectionSet::infinite();
    }
    let tol = ASYM_DET_TOL * scale;
    let mut found: Vec<Vec<f64>> = Vec::new();
    let push = |u: [f64; 3], found: &mut Vec<Vec<f64>>| {
        let cu = dirs::canonical_unit(&u);
        if found
            .iter()
            .all(|v| dirs::angular_distance(v, &cu) > SCAN_DEDUPE_TOL)
        {
            found.push(cu);
        }
    };
    let refine = |a: [f64; 3], fa: f64, b: [f64; 3], _fb: f64, found: &mut Vec<Vec<f64>>| {
        let (mut lo, mut hi, mut flo) = (0.0f64, 1.0f64, fa);
        let at = |t: f64| {
            let v = [
                a[0] + t * (b[0] - a[0]),
                a[1] + t * (b[1] - a[1]),
                a[2] + t * (b[2] - a[2]),
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            [v[0] / n, v[1] / n, v[2] / n]
        };
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let fm = det.eval_f64(&at(mid));
            if fm == 0.0 {
                lo = mid;
                break;
            }
            if (fm > 0.0) == (flo > 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        let u = at(0.5 * (lo + hi));
        if det.eval_f64(&u).abs() <= tol {
            push(u, found);
        }
    };
    for i in 0..nt {
        for j in 0..=np {
            let f = values[i][j];
            let u = sphere_point(theta(i), phi(j));
            if f.abs() <= tol {
                push(u, &mut found);
                continue;
            }
            // edge to the next theta (wrapping), same phi
            if j > 0 && j < np {
                let f2 = values[(i + 1) % nt][j];
                if f * f2 < 0.0 {
                    let u2 = sphere_point(theta(i + 1), phi(j));
                    refine(u, f, u2, f2, &mut found);
                }
            }
            // edge to the next phi
            if j < np {
                let f2 = values[i][j + 1];
                if f * f2 < 0.0 {
                    let u2 = sphere_point(theta(i), phi(j + 1));
                    refine(u, f, u2, f2, &mut found);
                }
            }
        }
    }
    let entries = found
        .into_iter()
        .map(|u| {
            let nu = binormal_at(alpha, &u);
            DirEntry::with_dual(u, 1, DirTag::Plain, nu)
        })
        .collect();
    DirectionSet::finite(entries)
}

/// The umbilical focus of a point with planar curvature locus. With w any
/// nonzero normal vector orthogonal to E_p, the focus is w / <H, w>, which
/// stays rational whenever the locus data is; its distance to the point is
/// 1/kappa. When H lies in E_p the focus escapes to infinity along w.
#[derive(Clone, Debug, PartialEq)]
pub enum UmbilicalFocus6<S: Scalar> {
    Point { center: Vec<S>, kappa: Kappa<S> },
    AtInfinity { direction: Vec<S> },
}

pub fn umbilical_focus_6<S: Scalar>(
    g: &MapGerm<S>,
    locus: &LocusR6<S>,
) -> GeomResult<UmbilicalFocus6<S>> {
    require_monge_3mfld(g)?;
    if locus.ep_dim != 2 {
        return Err(GeomError::WrongStratum(format!(
            "umbilical focus needs a planar curvature locus, got dim E_p = {}",
            locus.ep_dim
        )));
    }
    let basis = locus.ep_basis();
    let mut w = linalg::cross3(&basis[0], &basis[1]);
    let pairing = linalg::dot(&locus.h, &w);
    let embed = |v: &[S]| {
        let mut out = vec![S::zero(); 3];
        out.extend(v.iter().cloned());
        out
    };
    match pairing.sign() {
        Sign::Zero => {
            if w.iter().find(|c| !c.is_zero_val()).map(|c| c.sign()) == Some(Sign::Negative) {
                w = linalg::vneg(&w);
            }
            Ok(UmbilicalFocus6::AtInfinity {
                direction: embed(&w),
            })
        }
        sign => {
            if sign == Sign::Negative {
                w = linalg::vneg(&w);
            }
            let pairing = linalg::dot(&locus.h, &w);
            let center = embed(&linalg::vscale(&w, &(S::one() / pairing)));
            debug_assert_eq!(
                hessian_distance_sq(g, &center).rank(),
                0,
                "the distance Hessian must be fully degenerate at the focus"
            );
            Ok(UmbilicalFocus6::Point {
                center,
                kappa: kappa6(locus)?,
            })
        }
    }
}
