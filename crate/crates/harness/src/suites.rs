//! The verification suites. Each one draws germs from the stratum a theorem
//! speaks about and runs the theorem's two sides against each other: closed
//! form versus independent recomputation, upstairs invariant versus its
//! image under a transport, classifier versus geometric oracle.

use curvloci::dirs::{DirEntry, DirectionSet, DIR_MATCH_TOL};
use curvloci::height::{hessian_distance_sq, SffMatrix};
use curvloci::jet::{affine_span, MapGerm};
use curvloci::linalg::{self, Mat};
use curvloci::locus::{LocusKind, PointType};
use curvloci::scalar::{rat, rint, Sign};
use curvloci::surf_r4_sing::UmbilicalLocus;
use curvloci::surf_r5::M2Subtype;
use curvloci::unipoly::BinaryForm;
use curvloci::{mfld3, surf_r4, surf_r4_sing, surf_r5, transforms, Rat, Scalar};

use crate::oracle::{oracle_point_vs_conic, ConicSide};
use crate::report::TrialReport;
use crate::sampler::{GermClass, Sampler};
use crate::HarnessError;

pub const SUITES: &[&str] = &[
    "projgeneric",
    "semiumb",
    "tangency",
    "quintic-dual",
    "snu",
    "focal",
    "example",
    "section",
    "kappa-section",
    "focus6",
    "oracle",
];

/// Trial counts sized so every surviving branch of a theorem is hit a few
/// hundred times.
pub fn default_trials(name: &str) -> u64 {
    match name {
        "projgeneric" => 1500,
        "focal" => 800,
        "oracle" => 1000,
        "example" => 1,
        "section" => 400,
        "kappa-section" => 200,
        "focus6" => 250,
        _ => 500,
    }
}

pub fn run_suite(name: &str, trials: u64, seed: u64) -> Result<TrialReport, HarnessError> {
    let suite: fn(u64, u64) -> TrialReport = match name {
        "projgeneric" => suite_projgeneric,
        "semiumb" => suite_semiumb,
        "tangency" => suite_tangency,
        "quintic-dual" => suite_quintic_dual,
        "snu" => suite_snu,
        "focal" => suite_focal,
        "example" => suite_example,
        "section" => suite_section,
        "kappa-section" => suite_kappa_section,
        "focus6" => suite_focus6,
        "oracle" => suite_oracle,
        _ => return Err(HarnessError::UnknownSuite(name.to_string())),
    };
    Ok(suite(trials, seed))
}

enum Outcome {
    Pass,
    Skip(&'static str),
}

struct Failure {
    germ: String,
    message: String,
}

impl Failure {
    fn of(g: &MapGerm<Rat>, message: impl Into<String>) -> Self {
        Failure {
            germ: g.serialize(),
            message: message.into(),
        }
    }

    fn bare(message: impl Into<String>) -> Self {
        Failure {
            germ: String::new(),
            message: message.into(),
        }
    }
}

type Check = Result<Outcome, Failure>;

/// Shared trial loop: one RNG stream per index, failures recorded with the
/// offending germ, skips counted by reason.
fn drive(
    name: &str,
    trials: u64,
    seed: u64,
    tols: &[(&str, f64)],
    mut trial: impl FnMut(u64, &mut Sampler) -> Check,
) -> TrialReport {
    let mut rep = TrialReport::new(name, seed);
    for (k, v) in tols {
        rep.tol(k, *v);
    }
    for i in 0..trials {
        let mut s = Sampler::for_trial(seed, i);
        match trial(i, &mut s) {
            Ok(Outcome::Pass) => {}
            Ok(Outcome::Skip(reason)) => rep.skip(reason),
            Err(f) => rep.fail(i, f.germ, f.message),
        }
    }
    rep.trials = trials;
    rep
}

const SUBTYPES: [M2Subtype; 3] = [
    M2Subtype::Hyperbolic,
    M2Subtype::Elliptic,
    M2Subtype::Parabolic,
];

fn draw(s: &mut Sampler, class: GermClass) -> Result<MapGerm<Rat>, Failure> {
    s.germ(class).map_err(|e| Failure::bare(e.to_string()))
}

fn fmt_vec(v: &[Rat]) -> String {
    let body: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", body.join(", "))
}

fn subtype_as_point_type(sub: M2Subtype) -> PointType {
    match sub {
        M2Subtype::Hyperbolic => PointType::Hyperbolic,
        M2Subtype::Elliptic => PointType::Elliptic,
        M2Subtype::Parabolic => PointType::Parabolic,
    }
}

/// Projections of M_2 surfaces in R^5 along generic tangent directions: the
/// subtype upstairs equals the point type of the corank-1 projection, and
/// the A_k-asymptotic directions map onto its asymptotic directions.
fn suite_projgeneric(trials: u64, seed: u64) -> TrialReport {
    drive(
        "projgeneric",
        trials,
        seed,
        &[("direction_match", DIR_MATCH_TOL)],
        |i, s| {
            let subtype = SUBTYPES[(i % 3) as usize];
            let g = draw(s, GermClass::M2Model(subtype))?;
            let err = |e: curvloci::GeomError| Failure::of(&g, e.to_string());
            let alpha = SffMatrix::from_monge(&g);
            let upstairs = surf_r5::ak_asymptotic_m2(&alpha).map_err(err)?;
            // The theorem is about generic directions; an asymptotic u
            // degenerates the parabola and is treated in its own suites, so
            // redraw until the direction is clear of the A_k cone.
            let mut picked = None;
            for _ in 0..32 {
                let u = s.unit2();
                let proj = transforms::project_tangent(&g, &u).map_err(err)?;
                let locus = surf_r4_sing::curvature_parabola(&proj).map_err(err)?;
                if locus.kind() == LocusKind::Parabola {
                    picked = Some((u, proj));
                    break;
                }
            }
            let Some((u, proj)) = picked else {
                return Ok(Outcome::Skip("every sampled direction was asymptotic"));
            };
            let cls = surf_r4_sing::classify_sing(&proj).map_err(err)?;
            let want = subtype_as_point_type(subtype);
            if cls.point_type != want {
                return Err(Failure::of(
                    &g,
                    format!(
                        "projection along {} is {:?}, expected {:?}",
                        fmt_vec(&u),
                        cls.point_type,
                        want
                    ),
                ));
            }
            // The projection rewrites the source as frame^T x, so tangent
            // directions transport by the transpose as well.
            let frame = linalg::orthonormal_completion(&u, 1);
            let mapped: Vec<DirEntry> = upstairs
                .entries
                .iter()
                .map(|e| {
                    let to = |col: usize| {
                        frame[(0, col)].to_f64() * e.dir[0] + frame[(1, col)].to_f64() * e.dir[1]
                    };
                    DirEntry::plain(vec![to(0), to(1)], e.multiplicity)
                })
                .collect();
            let expected = DirectionSet::finite(mapped);
            let actual = surf_r4_sing::asymptotic_dirs_sing(&proj).map_err(err)?;
            if !expected.matches(&actual, DIR_MATCH_TOL) {
                return Err(Failure::of(
                    &g,
                    format!(
                        "asymptotic directions downstairs do not match the transported \
                         A_k directions (projection along {})",
                        fmt_vec(&u)
                    ),
                ));
            }
            Ok(Outcome::Pass)
        },
    )
}

/// The curvature equivalences: at M_3 both curvatures are nonzero; at M_2
/// the three characterizations of "both zero" agree, and likewise the three
/// characterizations of "both nonzero".
fn suite_semiumb(trials: u64, seed: u64) -> TrialReport {
    drive("semiumb", trials, seed, &[], |i, s| {
        let class = match i % 3 {
            0 => GermClass::M3General,
            1 => GermClass::M2General,
            _ => GermClass::M2Model(SUBTYPES[((i / 3) % 3) as usize]),
        };
        let g = draw(s, class)?;
        let u = s.unit2();
        let err = |e: curvloci::GeomError| Failure::of(&g, e.to_string());
        let alpha = SffMatrix::from_monge(&g);
        let ellipse = surf_r4::ellipse(&alpha);
        let proj = transforms::project_tangent(&g, &u).map_err(err)?;
        let parabola = surf_r4_sing::curvature_parabola(&proj).map_err(err)?;
        let kreg_zero = ellipse.kappa_sq().is_zero_val();
        let ksing_zero = parabola.kappa_sq().is_zero_val();
        if class == GermClass::M3General {
            if kreg_zero || ksing_zero {
                return Err(Failure::of(
                    &g,
                    format!(
                        "M_3 point must have nonzero curvatures, got kappa_reg^2 = {}, \
                         kappa_sing^2 = {}",
                        ellipse.kappa_sq(),
                        parabola.kappa_sq()
                    ),
                ));
            }
            return Ok(Outcome::Pass);
        }
        let both_zero = kreg_zero && ksing_zero;
        let nondeg = ellipse.kind() == LocusKind::Ellipse && parabola.kind() == LocusKind::Parabola;
        let neither_semi = !ellipse.is_semiumbilic() && !parabola.is_semiumbilic();
        if both_zero != nondeg || nondeg != neither_semi {
            return Err(Failure::of(
                &g,
                format!(
                    "zero-curvature equivalence broke along {}: curvatures {}, shapes {}, \
                     semiumbilicity {}",
                    fmt_vec(&u),
                    both_zero,
                    nondeg,
                    neither_semi
                ),
            ));
        }
        let both_nonzero = !kreg_zero && !ksing_zero;
        let both_degenerate = ellipse.kind() == LocusKind::Segment
            && matches!(parabola.kind(), LocusKind::HalfLine | LocusKind::Line);
        let both_semi = ellipse.is_semiumbilic() && parabola.is_semiumbilic();
        if both_nonzero != both_degenerate || both_degenerate != both_semi {
            return Err(Failure::of(
                &g,
                format!(
                    "nonzero-curvature equivalence broke along {}: curvatures {}, shapes {}, \
                     semiumbilicity {}",
                    fmt_vec(&u),
                    both_nonzero,
                    both_degenerate,
                    both_semi
                ),
            ));
        }
        Ok(Outcome::Pass)
    })
}

/// Directions whose contact hits A_3 or worse, computed a second way: the
/// kernel directions of the singular members of the Hessian pencil over the
/// first normal space. Bypasses the tangency quadratic entirely.
fn kernel_directions(alpha: &SffMatrix<Rat>) -> Option<DirectionSet> {
    let cols = [alpha.col(0), alpha.col(1), alpha.col(2)];
    let basis = linalg::row_space_basis(&cols);
    if basis.len() != 2 {
        return None;
    }
    let h = [alpha.hessian(&basis[0]), alpha.hessian(&basis[1])];
    let det = |m: &Mat<Rat>| m[(0, 0)].clone() * m[(1, 1)].clone() - m[(0, 1)].clone() * m[(1, 0)].clone();
    let mixed = h[0][(0, 0)].clone() * h[1][(1, 1)].clone()
        + h[1][(0, 0)].clone() * h[0][(1, 1)].clone()
        - rint(2) * h[0][(0, 1)].clone() * h[1][(0, 1)].clone();
    let form = BinaryForm::new(vec![det(&h[0]), mixed, det(&h[1])]);
    if form.is_zero() {
        return None;
    }
    let mut entries = Vec::new();
    for (st, mult) in form.real_directions()? {
        let at = |k: usize, i: usize, j: usize| h[k][(i, j)].to_f64();
        let m00 = st[0] * at(0, 0, 0) + st[1] * at(1, 0, 0);
        let m01 = st[0] * at(0, 0, 1) + st[1] * at(1, 0, 1);
        let m11 = st[0] * at(0, 1, 1) + st[1] * at(1, 1, 1);
        let scale = m00.abs().max(m01.abs()).max(m11.abs());
        let v = if m00.abs() + m01.abs() >= m01.abs() + m11.abs() {
            [-m01, m00]
        } else {
            [-m11, m01]
        };
        if v[0].abs() + v[1].abs() <= 1e-10 * scale.max(1e-30) {
            return None;
        }
        entries.push(DirEntry::plain(v.to_vec(), mult as usize));
    }
    Some(DirectionSet::finite(entries))
}

/// A_k-asymptotic directions at M_2 via the tangency quadratic versus the
/// Hessian-kernel route.
fn suite_tangency(trials: u64, seed: u64) -> TrialReport {
    drive(
        "tangency",
        trials,
        seed,
        &[("direction_match", DIR_MATCH_TOL)],
        |i, s| {
            let class = if i % 4 == 0 {
                GermClass::M2Model(SUBTYPES[((i / 4) % 3) as usize])
            } else {
                GermClass::M2General
            };
            let g = draw(s, class)?;
            let alpha = SffMatrix::from_monge(&g);
            let route_a = surf_r5::ak_asymptotic_m2(&alpha)
                .map_err(|e| Failure::of(&g, e.to_string()))?;
            let Some(route_b) = kernel_directions(&alpha) else {
                return Ok(Outcome::Skip("kernel pencil was ill-conditioned"));
            };
            if !route_a.matches(&route_b, DIR_MATCH_TOL) {
                return Err(Failure::of(
                    &g,
                    "tangency quadratic and Hessian kernels give different directions",
                ));
            }
            Ok(Outcome::Pass)
        },
    )
}

/// Root bookkeeping between the asymptotic quintic and its projection-family
/// dual, plus the trichotomy of the modified projection family on a grid.
fn suite_quintic_dual(trials: u64, seed: u64) -> TrialReport {
    let grid: Vec<(Rat, Rat)> = vec![
        (rint(0), rint(0)),
        (rat(1, 2), rint(0)),
        (rat(-1, 2), rint(0)),
        (rint(0), rat(1, 2)),
        (rat(1, 4), rat(1, 2)),
        (rat(1, 4), rat(-1, 2)),
        (rat(-3, 5), rat(1, 5)),
        (rat(4, 5), rat(1, 5)),
    ];
    drive("quintic-dual", trials, seed, &[], move |_i, s| {
        let g = draw(s, GermClass::M3Adapted)?;
        let err = |e: curvloci::GeomError| Failure::of(&g, e.to_string());
        let quintic = surf_r5::m3_quintic(&g).map_err(err)?;
        if quintic.is_zero() {
            return Ok(Outcome::Skip("zero quintic"));
        }
        let count_u = quintic.real_directions().expect("nonzero form").len();
        let dual = surf_r5::p3_dual_equation(&g).map_err(err)?;
        let infinite = dual.infinity_multiplicity > 0;
        let count_nu = dual.roots.len() + usize::from(infinite);
        if count_u != count_nu {
            return Err(Failure::of(
                &g,
                format!("{count_u} asymptotic directions but {count_nu} dual roots"),
            ));
        }
        if !(1..=5).contains(&count_u) {
            return Err(Failure::of(
                &g,
                format!("asymptotic direction count {count_u} out of range"),
            ));
        }
        // The dual loses the direction (1, 0) to infinity exactly when the
        // quintic's leading coefficient dies.
        let c30 = g.comp(4).coeff2(3, 0);
        if infinite != c30.is_zero_val() {
            return Err(Failure::of(
                &g,
                "dual root at infinity must match a vanishing leading coefficient",
            ));
        }
        // The direction (0, 1) solves the quintic exactly when the cubic
        // coefficient a03 dies, which is when the projection along the last
        // normal axis picks up a P_3 point.
        let a03 = g.comp(2).coeff2(0, 3);
        let member = transforms::project_family_eta(&g, &rint(0), &rint(0)).map_err(err)?;
        let p3 = surf_r4::detect_p3(&member, &[0.0, 1.0]).map_err(err)?;
        if p3 != a03.is_zero_val() {
            return Err(Failure::of(
                &g,
                "P_3 detection on the central projection disagrees with a03",
            ));
        }
        for (n3, n4) in &grid {
            let eta = transforms::project_family_eta(&g, n3, n4).map_err(err)?;
            let got = surf_r4::classify_little(&SffMatrix::from_monge(&eta));
            let delta = n4.clone() * n4.clone() - n3.clone();
            let want = match delta.sign() {
                Sign::Positive => PointType::Hyperbolic,
                Sign::Negative => PointType::Elliptic,
                Sign::Zero => PointType::Parabolic,
            };
            if got != want {
                return Err(Failure::of(
                    &g,
                    format!(
                        "family member at ({n3}, {n4}) is {got:?}, expected {want:?}"
                    ),
                ));
            }
        }
        Ok(Outcome::Pass)
    })
}

/// Sections of the normal bundle: projecting along a unit normal orthogonal
/// to the ellipse plane leaves the second order data intact, row by row, and
/// the point classifications and asymptotic directions carry over.
fn suite_snu(trials: u64, seed: u64) -> TrialReport {
    drive(
        "snu",
        trials,
        seed,
        &[("direction_match", DIR_MATCH_TOL)],
        |_i, s| {
            let base = draw(s, GermClass::M2Aligned)?;
            let rot = s.rotation3();
            let mut big = Mat::identity(5);
            for a in 0..3 {
                for b in 0..3 {
                    big[(2 + a, 2 + b)] = rot[(a, b)].clone();
                }
            }
            let g = base.postcompose_linear(&big);
            let nu: Vec<Rat> = (0..3).map(|k| rot[(k, 2)].clone()).collect();
            let err = |e: curvloci::GeomError| Failure::of(&g, e.to_string());
            let alpha = SffMatrix::from_monge(&g);
            let class = surf_r5::classify_r5(&alpha).map_err(err)?;
            let Some(sub) = class.subtype else {
                return Err(Failure::of(&g, "expected an M_2 point"));
            };
            let snu = transforms::project_normal(&g, &nu).map_err(err)?;
            let alpha_s = SffMatrix::from_monge(&snu);
            // Row-by-row agreement in the matched frames: the projection
            // rewrites the normal block through the same completion frame.
            let m = linalg::orthonormal_completion(&nu, 2);
            for r in 0..2 {
                for c in 0..3 {
                    let mut want = rint(0);
                    for k in 0..3 {
                        want = want + m[(k, r)].clone() * alpha.rows()[k][c].clone();
                    }
                    if !(want - alpha_s.rows()[r][c].clone()).is_zero_val() {
                        return Err(Failure::of(
                            &g,
                            format!("second order row {r} changed under the section at {}", fmt_vec(&nu)),
                        ));
                    }
                }
            }
            let got = surf_r4::classify_little(&alpha_s);
            if got != subtype_as_point_type(sub) {
                return Err(Failure::of(
                    &g,
                    format!("section point type {got:?} differs from subtype {sub}"),
                ));
            }
            let up = surf_r5::ak_asymptotic_m2(&alpha).map_err(err)?;
            let down = surf_r4::asymptotic_dirs_r4(&alpha_s).map_err(err)?;
            if !up.matches(&down, DIR_MATCH_TOL) {
                return Err(Failure::of(
                    &g,
                    "A_k directions upstairs differ from asymptotic directions of the section",
                ));
            }
            Ok(Outcome::Pass)
        },
    )
}

const FOCAL_GRID_TOL: f64 = 1e-9;

fn det2f(m: &Mat<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Focal sets of the reduced corank-1 shapes: the closed-form equation
/// vanishes exactly where the distance Hessian degenerates, and the
/// umbilical locus degenerates it completely.
fn suite_focal(trials: u64, seed: u64) -> TrialReport {
    const KINDS: [LocusKind; 4] = [
        LocusKind::Parabola,
        LocusKind::HalfLine,
        LocusKind::Line,
        LocusKind::Point,
    ];
    drive(
        "focal",
        trials,
        seed,
        &[("grid_residual", FOCAL_GRID_TOL)],
        |i, s| {
            let kind = KINDS[(i % 4) as usize];
            let g = draw(s, GermClass::SingShape(kind))?;
            let err = |e: curvloci::GeomError| Failure::of(&g, e.to_string());
            let desc = surf_r4_sing::focal_set(&g).map_err(err)?;
            let gf = MapGerm::<f64>::parse(&g.serialize())
                .map_err(|e| Failure::of(&g, format!("float reparse failed: {e}")))?;
            for ix in 0..20 {
                for iy in 0..20 {
                    for iz in 0..20 {
                        let v = [
                            -2.0 + 4.0 * ix as f64 / 19.0,
                            -2.0 + 4.0 * iy as f64 / 19.0,
                            -2.0 + 4.0 * iz as f64 / 19.0,
                        ];
                        let a = [0.0, v[0], v[1], v[2]];
                        let det = det2f(&hessian_distance_sq(&gf, &a));
                        let e = desc.equation.eval_f64(&v);
                        if (e - det / 4.0).abs() > FOCAL_GRID_TOL {
                            return Err(Failure::of(
                                &g,
                                format!(
                                    "focal equation misses the Hessian determinant at \
                                     ({}, {}, {}): {} vs {}",
                                    v[0],
                                    v[1],
                                    v[2],
                                    e,
                                    det / 4.0
                                ),
                            ));
                        }
                    }
                }
            }
            // One exact probe per trial: the identity is polynomial, so the
            // grid plus one rational point pins it beyond float noise.
            let p = vec![s.rat(), s.rat(), s.rat()];
            let a = vec![rint(0), p[0].clone(), p[1].clone(), p[2].clone()];
            let h = hessian_distance_sq(&g, &a);
            let det = h[(0, 0)].clone() * h[(1, 1)].clone() - h[(0, 1)].clone() * h[(1, 0)].clone();
            if !(desc.equation.eval(&p) * rint(4) - det).is_zero_val() {
                return Err(Failure::of(
                    &g,
                    "closed-form focal equation differs from the Hessian determinant",
                ));
            }
            let fully_degenerate = |a: &[Rat]| hessian_distance_sq(&g, a).rank() == 0;
            let mut umbilic_points: Vec<Vec<Rat>> = Vec::new();
            match &desc.umbilical {
                UmbilicalLocus::None | UmbilicalLocus::AtInfinity { .. } => {}
                UmbilicalLocus::Point { center } => umbilic_points.push(center.clone()),
                UmbilicalLocus::Line { base, direction } => {
                    for t in [rint(0), rint(1), rint(-2), rat(7, 3)] {
                        umbilic_points.push(linalg::vadd(base, &linalg::vscale(direction, &t)));
                    }
                }
                UmbilicalLocus::Plane { base, basis } => {
                    for (a, b) in [(rint(0), rint(0)), (rint(1), rint(0)), (rat(-1, 2), rint(3))] {
                        let shift = linalg::vadd(
                            &linalg::vscale(&basis[0], &a),
                            &linalg::vscale(&basis[1], &b),
                        );
                        umbilic_points.push(linalg::vadd(base, &shift));
                    }
                }
            }
            for point in &umbilic_points {
                if !fully_degenerate(point) {
                    return Err(Failure::of(
                        &g,
                        format!(
                            "distance Hessian at umbilical point {} is not fully degenerate",
                            fmt_vec(point)
                        ),
                    ));
                }
            }
            // Finite umbilical loci sit at distance 1/kappa from the point.
            if let Some(rep) = umbilic_points.first() {
                let prod = linalg::norm_sq(rep) * desc.kappa.sq().clone();
                if !(prod - rint(1)).is_zero_val() {
                    return Err(Failure::of(
                        &g,
                        "umbilical base point must sit at distance 1/kappa",
                    ));
                }
            }
            Ok(Outcome::Pass)
        },
    )
}

const VERONESE: &str = "domain 2\ncodomain 5\ndegree 2\n0 1,0 1\n1 0,1 1\n2 2,0 1\n3 1,1 2\n4 0,2 1\n";

/// The worked example: the surface (x, y, x^2, 2xy, y^2), its curvature
/// ellipse data, and its projection along the second tangent axis.
fn suite_example(trials: u64, seed: u64) -> TrialReport {
    let mut rep = TrialReport::new("example", seed);
    rep.trials = trials;
    if trials == 0 {
        return rep;
    }
    let g = MapGerm::<Rat>::parse(VERONESE).expect("pinned example parses");
    let mut check = |cond: bool, msg: &str| {
        if !cond {
            rep.fail(0, g.serialize(), msg.to_string());
        }
    };
    let alpha = SffMatrix::from_monge(&g);
    let locus = surf_r4::ellipse(&alpha);
    let aff = locus.aff();
    let functional = |v: &[Rat]| v[0].clone() + v[2].clone();
    check(aff.dim() == 2, "affine span of the ellipse must be a plane");
    check(
        functional(&aff.base) == rint(2),
        "ellipse plane must satisfy X + Z = 2 at its base point",
    );
    check(
        aff.basis.iter().all(|b| functional(b).is_zero_val()),
        "ellipse plane directions must satisfy X + Z = 0",
    );
    check(locus.kappa_sq() == rint(2), "kappa_reg^2 must be exactly 2");
    // Independent check: the affine span of three exactly-known ellipse
    // points, and its distance to the origin.
    let l = locus.l().to_vec();
    let n = locus.n().to_vec();
    let mid: Vec<Rat> = (0..3)
        .map(|k| (l[k].clone() + n[k].clone()) * rat(1, 2) + locus.m()[k].clone())
        .collect();
    let span = affine_span(&[l, n, mid]);
    check(
        span.distance_sq_to_origin() == rint(2),
        "sampled ellipse points must span a plane at squared distance 2",
    );
    rep.note(
        "kappa_reg at the worked example is sqrt(2): the plane X + Z = 2 has squared \
         distance 2 from the origin; the source text states 2*sqrt(2) for the same \
         quantity, and the sampled-span oracle sides with sqrt(2)"
            .to_string(),
    );
    match transforms::project_tangent(&g, &[rint(0), rint(1)]) {
        Err(e) => rep.fail(0, g.serialize(), format!("projection failed: {e}")),
        Ok(proj) => {
            let mut check = |cond: bool, msg: &str| {
                if !cond {
                    rep.fail(0, g.serialize(), msg.to_string());
                }
            };
            match surf_r4_sing::curvature_parabola(&proj) {
                Err(e) => rep.fail(0, proj.serialize(), format!("parabola failed: {e}")),
                Ok(plocus) => {
                    check(
                        plocus.kind() == LocusKind::Parabola,
                        "projected locus must be a nondegenerate parabola",
                    );
                    check(
                        surf_r4_sing::kappa_sing(&plocus).exact() == Some(rint(2)),
                        "kappa_sing must be exactly 2",
                    );
                    let paff = plocus.aff();
                    check(
                        paff.dim() == 2 && paff.base[0] == rint(2),
                        "projected parabola plane must be X = 2",
                    );
                    check(
                        paff.basis.iter().all(|b| b[0].is_zero_val()),
                        "projected plane directions must satisfy X = 0",
                    );
                }
            }
        }
    }
    rep
}

const SECTION_PIN_TOL: f64 = 1e-10;

/// Curvature agreement through a random section of a planar-locus
/// 3-manifold: the section's ellipse sits in the same affine plane as the
/// full curvature locus when nondegenerate, so the distance to the origin
/// is untouched.
fn kappa_agreement_trial(s: &mut Sampler) -> Check {
    let g = draw(s, GermClass::Mfld3Planar)?;
    let err = |e: curvloci::GeomError| Failure::of(&g, e.to_string());
    let alpha = mfld3::alpha3(&g).map_err(err)?;
    let locus6 = mfld3::hb_vectors(&alpha);
    let k6 = mfld3::kappa6(&locus6).map_err(err)?;
    let axis = s.pick(3);
    let sec = transforms::normal_section(&g, axis).map_err(err)?;
    let asec = SffMatrix::from_monge(&sec.germ);
    let locus5 = surf_r4::ellipse(&asec);
    if locus5.kind() != LocusKind::Ellipse {
        return Ok(Outcome::Skip("degenerate section locus"));
    }
    if !(k6.sq().clone() - locus5.kappa_sq()).is_zero_val() {
        return Err(Failure::of(
            &g,
            format!(
                "kappa^2 through the section along axis {axis} changed: {} vs {}",
                k6.sq(),
                locus5.kappa_sq()
            ),
        ));
    }
    Ok(Outcome::Pass)
}

fn suite_kappa_section(trials: u64, seed: u64) -> TrialReport {
    drive("kappa-section", trials, seed, &[], |_i, s| {
        kappa_agreement_trial(s)
    })
}

const MODEL_3MFLD: &str = "domain 3\ncodomain 6\ndegree 2\n0 1,0,0 1\n1 0,1,0 1\n2 0,0,1 1\n3 2,0,0 1\n3 0,0,2 1/2\n4 1,0,1 1\n5 0,1,1 1\n";

/// Normal sections of 3-manifolds: the pinned model's section directions,
/// commutativity of section and tangent projection, and equality of the
/// distance-based curvatures across a section.
fn suite_section(trials: u64, seed: u64) -> TrialReport {
    let mut rep = drive("section", trials, seed, &[("pin", SECTION_PIN_TOL)], |i, s| {
        if i % 2 == 0 {
            // Diagram: cutting the section {y = 0} and projecting
            // tangentially commute when the direction lies in the section
            // plane. The middle axis keeps both routes on the same
            // Householder completion; cutting the first axis instead would
            // land the completion's determinant-fixing column flip on the
            // surviving coordinate and shift the identity by a reflection.
            let g = draw(s, GermClass::Mfld3General)?;
            let err = |e: curvloci::GeomError| Failure::of(&g, e.to_string());
            let axis = 1;
            let sec = transforms::normal_section(&g, axis).map_err(err)?;
            let u2 = s.unit2();
            let u3 = sec.embed.matvec(&u2);
            let left = transforms::normal_section(
                &transforms::project_tangent(&g, &u3).map_err(err)?,
                axis,
            )
            .map_err(err)?;
            let right = transforms::project_tangent(&sec.germ, &u2).map_err(err)?;
            if left.germ.serialize() != right.serialize() {
                return Err(Failure::of(
                    &g,
                    format!(
                        "section along axis {axis} and projection along {} do not commute",
                        fmt_vec(&u3)
                    ),
                ));
            }
            Ok(Outcome::Pass)
        } else {
            kappa_agreement_trial(s)
        }
    });
    // Pinned model: section directions (1, +-sqrt 2)/sqrt 3 downstairs,
    // (1, 0, +-sqrt 2)/sqrt 3 upstairs.
    let g = MapGerm::<Rat>::parse(MODEL_3MFLD).expect("pinned model parses");
    let mut pin_failures: Vec<String> = Vec::new();
    let alpha = mfld3::alpha3(&g).expect("pinned model is a Monge 3-manifold");
    let sec = transforms::normal_section(&g, 1).expect("pinned model sections along y");
    let asec = SffMatrix::from_monge(&sec.germ);
    let r2 = 2.0f64.sqrt();
    let r3 = 3.0f64.sqrt();
    match surf_r5::ak_asymptotic_m2(&asec) {
        Err(e) => pin_failures.push(format!("section directions failed: {e}")),
        Ok(dirs) => {
            let expected = DirectionSet::finite(vec![
                DirEntry::plain(vec![1.0 / r3, r2 / r3], 1),
                DirEntry::plain(vec![1.0 / r3, -r2 / r3], 1),
            ]);
            if !expected.matches(&dirs, SECTION_PIN_TOL) {
                pin_failures
                    .push("pinned section must have A_k directions (1, +-sqrt 2)/sqrt 3".into());
            }
        }
    }
    let det = mfld3::asymptotic_det(&alpha);
    for sign in [1.0, -1.0] {
        let u = [1.0 / r3, 0.0, sign * r2 / r3];
        if det.eval_f64(&u).abs() > SECTION_PIN_TOL {
            pin_failures.push("pinned upstairs directions must be asymptotic".into());
        }
    }
    for msg in pin_failures {
        rep.fail(trials, g.serialize(), msg);
    }
    rep
}

/// Umbilical foci of 3-manifolds with planar curvature locus: the focus
/// kills the whole distance Hessian, sits orthogonal to the locus
/// generators, and its distance inverts the curvature.
fn suite_focus6(trials: u64, seed: u64) -> TrialReport {
    drive("focus6", trials, seed, &[], |i, s| {
        let flat = i % 5 == 4;
        let class = if flat {
            GermClass::Mfld3FlatCenter
        } else {
            GermClass::Mfld3Planar
        };
        let g = draw(s, class)?;
        let err = |e: curvloci::GeomError| Failure::of(&g, e.to_string());
        let alpha = mfld3::alpha3(&g).map_err(err)?;
        let locus = mfld3::hb_vectors(&alpha);
        match mfld3::umbilical_focus_6(&g, &locus).map_err(err)? {
            mfld3::UmbilicalFocus6::Point { center, kappa } => {
                if flat {
                    return Err(Failure::of(&g, "expected the focus at infinity"));
                }
                if hessian_distance_sq(&g, &center).rank() != 0 {
                    return Err(Failure::of(
                        &g,
                        "distance Hessian at the focus is not fully degenerate",
                    ));
                }
                let v = &center[3..];
                for (j, b) in locus.b.iter().enumerate() {
                    if !linalg::dot(v, b).is_zero_val() {
                        return Err(Failure::of(
                            &g,
                            format!("focus direction must be orthogonal to generator {j}"),
                        ));
                    }
                }
                let prod = linalg::norm_sq(&center) * kappa.sq().clone();
                if !(prod - rint(1)).is_zero_val() {
                    return Err(Failure::of(&g, "focus distance must be 1/kappa"));
                }
                let k6 = mfld3::kappa6(&locus).map_err(err)?;
                if !(k6.sq().clone() - kappa.sq().clone()).is_zero_val() {
                    return Err(Failure::of(&g, "reported kappa differs from the locus kappa"));
                }
            }
            mfld3::UmbilicalFocus6::AtInfinity { direction } => {
                if !flat {
                    return Err(Failure::of(&g, "unexpected focus at infinity"));
                }
                let v = &direction[3..];
                for b in &locus.b {
                    if !linalg::dot(v, b).is_zero_val() {
                        return Err(Failure::of(
                            &g,
                            "infinite focus direction must be orthogonal to the generators",
                        ));
                    }
                }
            }
        }
        Ok(Outcome::Pass)
    })
}

/// Resultant classifiers against the geometric position oracle, on both the
/// regular R^4 ellipse and the corank-1 parabola.
fn suite_oracle(trials: u64, seed: u64) -> TrialReport {
    drive("oracle", trials, seed, &[], |i, s| {
        if i % 2 == 0 {
            let g = draw(s, GermClass::R4Regular)?;
            let alpha = SffMatrix::from_monge(&g);
            let locus = surf_r4::ellipse(&alpha);
            if locus.kind() != LocusKind::Ellipse {
                return Ok(Outcome::Skip("degenerate locus"));
            }
            let side = oracle_point_vs_conic(&locus).map_err(|e| Failure::of(&g, e.to_string()))?;
            let got = surf_r4::classify_little(&alpha);
            let want = match side {
                ConicSide::Inside => PointType::Elliptic,
                ConicSide::On => PointType::Parabolic,
                ConicSide::Outside => PointType::Hyperbolic,
            };
            if got != want {
                return Err(Failure::of(
                    &g,
                    format!("classifier says {got:?}, oracle says {side:?}"),
                ));
            }
        } else {
            let g = draw(s, GermClass::SingShape(LocusKind::Parabola))?;
            let err = |e: curvloci::GeomError| Failure::of(&g, e.to_string());
            let locus = surf_r4_sing::curvature_parabola(&g).map_err(err)?;
            let side = oracle_point_vs_conic(&locus).map_err(|e| Failure::of(&g, e.to_string()))?;
            let got = surf_r4_sing::classify_sing(&g).map_err(err)?.point_type;
            let want = match side {
                ConicSide::Inside => PointType::Elliptic,
                ConicSide::On => PointType::Parabolic,
                ConicSide::Outside => PointType::Hyperbolic,
            };
            if got != want {
                return Err(Failure::of(
                    &g,
                    format!("classifier says {got:?}, oracle says {side:?}"),
                ));
            }
        }
        Ok(Outcome::Pass)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suites_are_refused() {
        assert!(matches!(
            run_suite("no-such-suite", 1, 0),
            Err(HarnessError::UnknownSuite(_))
        ));
    }

    #[test]
    fn zero_trials_pass_vacuously() {
        for name in SUITES {
            let rep = run_suite(name, 0, 123).unwrap();
            assert!(rep.passed(), "{name} failed with zero trials");
        }
    }

    #[test]
    fn small_runs_pass_and_reproduce() {
        for name in SUITES {
            let trials = if *name == "focal" { 8 } else { 24 };
            let a = run_suite(name, trials, 2024).unwrap();
            assert!(
                a.passed(),
                "suite {name} failed: {}",
                a.failures
                    .first()
                    .map(|f| format!("trial {}: {}\n{}", f.index, f.message, f.germ))
                    .unwrap_or_default()
            );
            let b = run_suite(name, trials, 2024).unwrap();
            assert_eq!(a.to_json(), b.to_json(), "suite {name} is not deterministic");
        }
    }

    #[test]
    fn failures_replay_from_seed_and_index() {
        // The sampler stream is (seed, index)-addressed: regenerating any
        // trial's germ in isolation matches the in-suite draw.
        let mut s = Sampler::for_trial(2024, 5);
        let direct = s.germ(GermClass::M2Model(SUBTYPES[(5 % 3) as usize])).unwrap();
        let mut again = Sampler::for_trial(2024, 5);
        let rerun = again.germ(GermClass::M2Model(SUBTYPES[(5 % 3) as usize])).unwrap();
        assert_eq!(direct.serialize(), rerun.serialize());
    }
}
