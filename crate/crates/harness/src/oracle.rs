//! Position of the origin relative to a nondegenerate curvature locus,
//! decided geometrically rather than algebraically: exact linear algebra
//! puts the origin into the locus's own affine chart, and a dense convexity
//! sweep over sampled points cross-checks the verdict. No resultants are
//! involved, so this is an independent witness for the classifiers.

use curvloci::linalg::{self, Mat};
use curvloci::locus::{ConicLocus, LocusKind};
use curvloci::scalar::{rint, Sign};
use curvloci::{Rat, Scalar};

use crate::HarnessError;

/// Sample count for the convexity sweep.
pub const ORACLE_SAMPLES: usize = 2048;
/// Chart-coordinate tolerance for declaring the origin on the locus.
pub const ORACLE_ON_TOL: f64 = 1e-9;
/// Inside this margin the sweep leg abstains instead of second-guessing the
/// exact leg; the sampled support of a convex curve is only accurate to the
/// square of the grid gap.
const SWEEP_MARGIN: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConicSide {
    Inside,
    On,
    Outside,
}

/// Where the origin of the normal space sits relative to the locus. Only
/// nondegenerate ellipses and parabolas bound a region; everything else is
/// refused. When the origin is off the locus's affine plane, the verdict is
/// about its orthogonal projection onto that plane.
pub fn oracle_point_vs_conic(locus: &ConicLocus<Rat>) -> Result<ConicSide, HarnessError> {
    match locus.kind() {
        LocusKind::Ellipse => ellipse_side(locus),
        LocusKind::Parabola => parabola_side(locus),
        other => Err(HarnessError::DegenerateLocus(format!(
            "a {other} bounds no region"
        ))),
    }
}

/// Chart coordinates of the origin: the least-squares solution of
/// bx * x + by * y = -base, exact over the rationals.
fn chart(bx: &[Rat], by: &[Rat], base: &[Rat]) -> Result<(Rat, Rat), HarnessError> {
    let gram = Mat::from_fn(2, 2, |i, j| {
        let vi = if i == 0 { bx } else { by };
        let vj = if j == 0 { bx } else { by };
        linalg::dot(vi, vj)
    });
    let target = linalg::vneg(base);
    let rhs = vec![linalg::dot(&target, bx), linalg::dot(&target, by)];
    let sol = gram.solve_unique(&rhs).ok_or_else(|| {
        HarnessError::DegenerateLocus("locus direction vectors are dependent".into())
    })?;
    Ok((sol[0].clone(), sol[1].clone()))
}

/// In the chart spanned by the half-difference and shear vectors the ellipse
/// is the unit circle, so the verdict is the exact squared radius of the
/// origin's chart coordinates.
fn ellipse_side(locus: &ConicLocus<Rat>) -> Result<ConicSide, HarnessError> {
    let half = Rat::from_int(1) / Rat::from_int(2);
    let center: Vec<Rat> = locus
        .l()
        .iter()
        .zip(locus.n())
        .map(|(a, b)| (a.clone() + b.clone()) * half.clone())
        .collect();
    let cvec: Vec<Rat> = locus
        .l()
        .iter()
        .zip(locus.n())
        .map(|(a, b)| (a.clone() - b.clone()) * half.clone())
        .collect();
    let svec = locus.m().to_vec();
    let (x, y) = chart(&cvec, &svec, &center)?;
    let r2 = x.clone() * x.clone() + y.clone() * y.clone();
    let r2f = r2.to_f64();
    let verdict = if (r2f - 1.0).abs() <= ORACLE_ON_TOL {
        ConicSide::On
    } else if (r2 - rint(1)).sign() == Sign::Negative {
        ConicSide::Inside
    } else {
        ConicSide::Outside
    };
    if locus.normal_dim() == 2 && (r2f - 1.0).abs() > SWEEP_MARGIN {
        let sweep = polygon_sweep(locus);
        if sweep != verdict {
            return Err(HarnessError::OracleInconsistent(format!(
                "chart radius^2 {r2f} says {verdict:?}, polygon sweep says {sweep:?}"
            )));
        }
    }
    Ok(verdict)
}

/// Winding test on the sampled ellipse polygon: the origin is inside exactly
/// when every edge turns the same way around it.
fn polygon_sweep(locus: &ConicLocus<Rat>) -> ConicSide {
    let pts: Vec<Vec<f64>> = (0..ORACLE_SAMPLES)
        .map(|i| locus.sample_f64(std::f64::consts::PI * i as f64 / ORACLE_SAMPLES as f64))
        .collect();
    let (mut pos, mut neg) = (false, false);
    for i in 0..ORACLE_SAMPLES {
        let p = &pts[i];
        let q = &pts[(i + 1) % ORACLE_SAMPLES];
        let z = (q[0] - p[0]) * -p[1] - (q[1] - p[1]) * -p[0];
        if z > 0.0 {
            pos = true;
        }
        if z < 0.0 {
            neg = true;
        }
    }
    if pos && neg {
        ConicSide::Outside
    } else {
        ConicSide::Inside
    }
}

/// In the chart spanned by the velocity and quadratic vectors the parabola
/// is t = s^2, and the region it opens around is t > s^2. The sweep leg
/// checks the verdict against the tangent-line fan of the sampled curve.
fn parabola_side(locus: &ConicLocus<Rat>) -> Result<ConicSide, HarnessError> {
    let two = rint(2);
    let bvec: Vec<Rat> = locus.m().iter().map(|v| two.clone() * v.clone()).collect();
    let cvec = locus.n().to_vec();
    let (s, t) = chart(&bvec, &cvec, locus.l())?;
    let delta = t.clone() - s.clone() * s.clone();
    let (sf, tf) = (s.to_f64(), t.to_f64());
    let df = delta.to_f64();
    let verdict = if df.abs() <= ORACLE_ON_TOL {
        ConicSide::On
    } else if delta.sign() == Sign::Positive {
        ConicSide::Inside
    } else {
        ConicSide::Outside
    };
    let scale = 1.0 + sf * sf + tf.abs();
    if df.abs() > SWEEP_MARGIN * scale {
        let width = 8.0 * (1.0 + sf.abs());
        let mut support = f64::NEG_INFINITY;
        for i in 0..ORACLE_SAMPLES {
            let y = sf - width + 2.0 * width * i as f64 / (ORACLE_SAMPLES - 1) as f64;
            support = support.max(2.0 * y * sf - y * y);
        }
        let sweep = if tf > support {
            ConicSide::Inside
        } else {
            ConicSide::Outside
        };
        if sweep != verdict {
            return Err(HarnessError::OracleInconsistent(format!(
                "chart depth {df} says {verdict:?}, tangent fan says {sweep:?}"
            )));
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use curvloci::scalar::rat;
    use proptest::prelude::*;

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rint(x)).collect()
    }

    #[test]
    fn unit_circle_positions() {
        // Circle of radius 1 about (2, 0): l = H + C, n = H - C, m = S.
        let far = ConicLocus::ellipse_family(rv(&[3, 0]), rv(&[0, 1]), rv(&[1, 0]));
        assert_eq!(oracle_point_vs_conic(&far).unwrap(), ConicSide::Outside);
        // Same circle about the origin.
        let around = ConicLocus::ellipse_family(rv(&[1, 0]), rv(&[0, 1]), rv(&[-1, 0]));
        assert_eq!(oracle_point_vs_conic(&around).unwrap(), ConicSide::Inside);
        // Centered at (1, 0), so the curve passes through the origin.
        let touching = ConicLocus::ellipse_family(rv(&[2, 0]), rv(&[0, 1]), rv(&[0, 0]));
        assert_eq!(oracle_point_vs_conic(&touching).unwrap(), ConicSide::On);
    }

    #[test]
    fn parabola_positions() {
        // eta(t) = (t, t^2 - 1): the origin lies on the open side.
        let open_up = ConicLocus::parabola_family(
            rv(&[0, -1]),
            vec![rat(1, 2), rint(0)],
            rv(&[0, 1]),
        );
        assert_eq!(oracle_point_vs_conic(&open_up).unwrap(), ConicSide::Inside);
        // eta(t) = (t, t^2 + 1) opens away from the origin.
        let shifted = ConicLocus::parabola_family(
            rv(&[0, 1]),
            vec![rat(1, 2), rint(0)],
            rv(&[0, 1]),
        );
        assert_eq!(oracle_point_vs_conic(&shifted).unwrap(), ConicSide::Outside);
        // eta(t) = (t, t^2) passes through the origin.
        let through = ConicLocus::parabola_family(
            rv(&[0, 0]),
            vec![rat(1, 2), rint(0)],
            rv(&[0, 1]),
        );
        assert_eq!(oracle_point_vs_conic(&through).unwrap(), ConicSide::On);
    }

    #[test]
    fn degenerate_loci_are_refused() {
        let segment = ConicLocus::ellipse_family(rv(&[1, 0]), rv(&[0, 0]), rv(&[-1, 0]));
        assert!(matches!(
            oracle_point_vs_conic(&segment),
            Err(HarnessError::DegenerateLocus(_))
        ));
    }

    fn circle_parts() -> impl Strategy<Value = (i64, i64, i64)> {
        // Center (a, b) and radius r of a rational circle, kept small so the
        // exact verdict sign(a^2 + b^2 - r^2) is easy to read off.
        (-20i64..=20, -20i64..=20, 1i64..=20)
    }

    proptest! {
        #[test]
        fn circle_verdicts_match_the_distance_sign((a, b, r) in circle_parts()) {
            let l = vec![rint(a + r), rint(b)];
            let n = vec![rint(a - r), rint(b)];
            let m = vec![rint(0), rint(r)];
            let locus = ConicLocus::ellipse_family(l, m, n);
            let side = oracle_point_vs_conic(&locus).unwrap();
            let d = a * a + b * b - r * r;
            let expected = match d.cmp(&0) {
                std::cmp::Ordering::Less => ConicSide::Inside,
                std::cmp::Ordering::Equal => ConicSide::On,
                std::cmp::Ordering::Greater => ConicSide::Outside,
            };
            prop_assert_eq!(side, expected);
        }
    }
}
