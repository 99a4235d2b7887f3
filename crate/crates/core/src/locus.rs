//! Second-order curvature loci: the ellipse swept by the normal curvature of a
//! regular surface and the parabola swept at a corank-1 point.
//!
//! Both curves live in the normal space and are stored through the coefficient
//! vectors (l, m, n) of their parametrizations:
//!
//! * ellipse family:  eta(theta) = l cos²θ + 2m cosθ sinθ + n sin²θ
//! * parabola family: eta(y)    = l + 2m y + n y²
//!
//! Degeneracy kinds, the minimal affine span, the parallel plane through the
//! origin, and the umbilic curvature distance are all derived from (l, m, n)
//! by exact rank and incidence tests.

use crate::jet::AffineSubspace;
use crate::linalg::{self, Mat};
use crate::scalar::{Scalar, Sign};

/// A curvature magnitude stored through its exact square; the root itself is
/// materialized exactly only when the scalar type can represent it.
#[derive(Clone, Debug, PartialEq)]
pub struct Kappa<S: Scalar> {
    sq: S,
}

impl<S: Scalar> Kappa<S> {
    pub fn from_sq(sq: S) -> Self {
        assert!(sq.sign() != Sign::Negative, "a squared magnitude cannot be negative");
        Kappa { sq }
    }

    pub fn sq(&self) -> &S {
        &self.sq
    }

    /// Exact square root, when one exists in the scalar type.
    pub fn exact(&self) -> Option<S> {
        self.sq.try_sqrt()
    }

    pub fn value(&self) -> f64 {
        self.sq.to_f64().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.sq.is_zero_val()
    }
}

impl<S: Scalar> std::fmt::Display for Kappa<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.exact() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}", self.value()),
        }
    }
}

/// Shape of a curvature locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusKind {
    Ellipse,
    Segment,
    Point,
    Parabola,
    HalfLine,
    Line,
}

impl std::fmt::Display for LocusKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LocusKind::Ellipse => "ELLIPSE",
            LocusKind::Segment => "SEGMENT",
            LocusKind::Point => "POINT",
            LocusKind::Parabola => "PARABOLA",
            LocusKind::HalfLine => "HALF_LINE",
            LocusKind::Line => "LINE",
        };
        f.write_str(s)
    }
}

/// Which one-parameter family the coefficient vectors parametrize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusFamily {
    /// Unit tangent circle of a regular surface point.
    Elliptic,
    /// Unit-speed line u = (1, y) at a corank-1 point.
    Parabolic,
}

/// Rank stratum of the second fundamental form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MStratum {
    M0,
    M1,
    M2,
    M3,
}

impl MStratum {
    pub fn rank(self) -> usize {
        match self {
            MStratum::M0 => 0,
            MStratum::M1 => 1,
            MStratum::M2 => 2,
            MStratum::M3 => 3,
        }
    }

    fn from_rank(r: usize) -> Self {
        match r {
            0 => MStratum::M0,
            1 => MStratum::M1,
            2 => MStratum::M2,
            _ => MStratum::M3,
        }
    }
}

impl std::fmt::Display for MStratum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "M{}", self.rank())
    }
}

/// Position of a point relative to its curvature locus, by asymptotic count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointType {
    Hyperbolic,
    Elliptic,
    Parabolic,
    Inflection,
}

impl std::fmt::Display for PointType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PointType::Hyperbolic => "HYPERBOLIC",
            PointType::Elliptic => "ELLIPTIC",
            PointType::Parabolic => "PARABOLIC",
            PointType::Inflection => "INFLECTION",
        };
        f.write_str(s)
    }
}

/// A curvature ellipse or parabola, stored by coefficient vectors in the
/// normal coordinates of the germ it came from.
#[derive(Clone, Debug)]
pub struct ConicLocus<S: Scalar> {
    family: LocusFamily,
    l: Vec<S>,
    m: Vec<S>,
    n: Vec<S>,
    kind: LocusKind,
    radial: Option<bool>,
}

impl<S: Scalar> ConicLocus<S> {
    /// Locus of a regular surface point: eta(θ) = l cos²θ + 2m cosθ sinθ + n sin²θ.
    pub fn ellipse_family(l: Vec<S>, m: Vec<S>, n: Vec<S>) -> Self {
        assert_eq!(l.len(), m.len());
        assert_eq!(l.len(), n.len());
        // eta(θ) = H + cos(2θ) A + sin(2θ) B with H = (l+n)/2, A = (l−n)/2, B = m.
        let a = axis_a(&l, &n);
        let kind = match Mat::from_rows(&[a, m.clone()]).rank() {
            2 => LocusKind::Ellipse,
            1 => LocusKind::Segment,
            _ => LocusKind::Point,
        };
        ConicLocus {
            family: LocusFamily::Elliptic,
            l,
            m,
            n,
            kind,
            radial: None,
        }
    }

    /// Locus of a corank-1 surface point: eta(y) = l + 2m y + n y².
    pub fn parabola_family(l: Vec<S>, m: Vec<S>, n: Vec<S>) -> Self {
        assert_eq!(l.len(), m.len());
        assert_eq!(l.len(), n.len());
        let (kind, radial) = if Mat::from_rows(&[m.clone(), n.clone()]).rank() == 2 {
            (LocusKind::Parabola, None)
        } else if !linalg::is_zero_vec(&n) {
            let radial = Mat::from_rows(&[l.clone(), n.clone()]).rank() <= 1;
            (LocusKind::HalfLine, Some(radial))
        } else if !linalg::is_zero_vec(&m) {
            let radial = Mat::from_rows(&[l.clone(), m.clone()]).rank() <= 1;
            (LocusKind::Line, Some(radial))
        } else {
            (LocusKind::Point, Some(linalg::is_zero_vec(&l)))
        };
        let locus = ConicLocus {
            family: LocusFamily::Parabolic,
            l,
            m,
            n,
            kind,
            radial,
        };
        debug_assert!(locus.stratum_table_consistent());
        locus
    }

    pub fn family(&self) -> LocusFamily {
        self.family
    }

    pub fn kind(&self) -> LocusKind {
        self.kind
    }

    /// Whether a degenerate locus sits on a ray or line through the origin.
    /// `None` for nondegenerate kinds and for the ellipse family.
    pub fn radial(&self) -> Option<bool> {
        self.radial
    }

    pub fn l(&self) -> &[S] {
        &self.l
    }

    pub fn m(&self) -> &[S] {
        &self.m
    }

    pub fn n(&self) -> &[S] {
        &self.n
    }

    /// Dimension of the normal space the locus lives in.
    pub fn normal_dim(&self) -> usize {
        self.l.len()
    }

    /// Minimal affine subspace containing the locus.
    pub fn aff(&self) -> AffineSubspace<S> {
        match self.family {
            LocusFamily::Elliptic => {
                let h = center(&self.l, &self.n);
                let a = axis_a(&self.l, &self.n);
                let basis = linalg::row_space_basis(&[a, self.m.clone()]);
                AffineSubspace::new(h, basis)
            }
            LocusFamily::Parabolic => {
                let basis = linalg::row_space_basis(&[self.m.clone(), self.n.clone()]);
                AffineSubspace::new(self.l.clone(), basis)
            }
        }
    }

    /// The vector subspace parallel to the affine span (regular case), as a
    /// canonical basis. Dimension 0, 1 or 2.
    pub fn parallel_space(&self) -> Vec<Vec<S>> {
        match self.family {
            LocusFamily::Elliptic => {
                let a = axis_a(&self.l, &self.n);
                linalg::row_space_basis(&[a, self.m.clone()])
            }
            LocusFamily::Parabolic => linalg::row_space_basis(&[self.m.clone(), self.n.clone()]),
        }
    }

    /// Span of all three coefficient vectors: the first normal space the
    /// second fundamental form actually fills. Equals the parallel plane of
    /// the locus exactly when the affine span passes through the origin.
    pub fn first_normal_space(&self) -> Vec<Vec<S>> {
        linalg::row_space_basis(&[self.l.clone(), self.m.clone(), self.n.clone()])
    }

    /// The distinguished plane through the origin attached to a corank-1
    /// locus: parallel to the affine span for a nondegenerate parabola, the
    /// plane containing the affine span for a non-radial half-line or line,
    /// and a canonical completion (locus direction first, then the lowest
    /// coordinate axes) where any plane through the span is admissible.
    ///
    /// Always returns a 2-vector canonical basis.
    pub fn e_space(&self) -> Vec<Vec<S>> {
        assert_eq!(
            self.family,
            LocusFamily::Parabolic,
            "the distinguished plane is a corank-1 notion; regular loci use parallel_space"
        );
        let gens: Vec<Vec<S>> = match self.kind {
            LocusKind::Parabola => vec![self.m.clone(), self.n.clone()],
            LocusKind::HalfLine => vec![self.n.clone(), self.l.clone()],
            LocusKind::Line => vec![self.m.clone(), self.l.clone()],
            LocusKind::Point => vec![self.l.clone()],
            _ => unreachable!("parabolic family has no elliptic kinds"),
        };
        complete_to_plane(gens, self.normal_dim())
    }

    /// Squared distance from the origin of the normal space to the affine span.
    pub fn kappa_sq(&self) -> S {
        self.aff().distance_sq_to_origin()
    }

    /// Rank stratum of the second fundamental form.
    pub fn mstratum(&self) -> MStratum {
        let rank = Mat::from_rows(&[self.l.clone(), self.m.clone(), self.n.clone()]).rank();
        MStratum::from_rank(rank)
    }

    /// A degenerate locus whose affine span misses the origin: a segment not
    /// through the origin (regular), or a non-radial half-line or line
    /// (corank 1).
    pub fn is_semiumbilic(&self) -> bool {
        match self.family {
            LocusFamily::Elliptic => {
                self.kind == LocusKind::Segment && !self.kappa_sq().is_zero_val()
            }
            LocusFamily::Parabolic => {
                matches!(self.kind, LocusKind::HalfLine | LocusKind::Line)
                    && self.radial == Some(false)
            }
        }
    }

    /// Evaluate the locus parametrization in floating point.
    pub fn sample_f64(&self, t: f64) -> Vec<f64> {
        let lf: Vec<f64> = self.l.iter().map(|v| v.to_f64()).collect();
        let mf: Vec<f64> = self.m.iter().map(|v| v.to_f64()).collect();
        let nf: Vec<f64> = self.n.iter().map(|v| v.to_f64()).collect();
        let (cl, cm, cn) = match self.family {
            LocusFamily::Elliptic => {
                let (c, s) = (t.cos(), t.sin());
                (c * c, 2.0 * c * s, s * s)
            }
            LocusFamily::Parabolic => (1.0, 2.0 * t, t * t),
        };
        (0..lf.len())
            .map(|i| cl * lf[i] + cm * mf[i] + cn * nf[i])
            .collect()
    }

    fn stratum_table_consistent(&self) -> bool {
        let stratum = self.mstratum();
        let kappa_zero = self.kappa_sq().is_zero_val();
        match self.kind {
            LocusKind::Parabola => {
                (stratum == MStratum::M3) == !kappa_zero
                    && (stratum == MStratum::M2 || stratum == MStratum::M3)
            }
            LocusKind::HalfLine | LocusKind::Line => {
                let radial = self.radial == Some(true);
                (stratum == if radial { MStratum::M1 } else { MStratum::M2 })
                    && (radial == kappa_zero)
            }
            LocusKind::Point => {
                (stratum == if self.radial == Some(true) { MStratum::M0 } else { MStratum::M1 })
                    && (self.radial == Some(true)) == kappa_zero
            }
            _ => true,
        }
    }
}

fn center<S: Scalar>(l: &[S], n: &[S]) -> Vec<S> {
    let half = S::from_ratio(1, 2);
    l.iter()
        .zip(n)
        .map(|(a, b)| (a.clone() + b.clone()) * half.clone())
        .collect()
}

fn axis_a<S: Scalar>(l: &[S], n: &[S]) -> Vec<S> {
    let half = S::from_ratio(1, 2);
    l.iter()
        .zip(n)
        .map(|(a, b)| (a.clone() - b.clone()) * half.clone())
        .collect()
}

fn complete_to_plane<S: Scalar>(gens: Vec<Vec<S>>, dim: usize) -> Vec<Vec<S>> {
    let mut rows = gens;
    let mut basis = linalg::row_space_basis(&rows);
    let mut axis = 0;
    while basis.len() < 2 && axis < dim {
        let mut e = vec![S::zero(); dim];
        e[axis] = S::one();
        rows.push(e);
        basis = linalg::row_space_basis(&rows);
        axis += 1;
    }
    assert!(basis.len() == 2, "normal space too small to hold a plane");
    basis
}

/// Resultant of the quadratics l₁ + 2m₁t + n₁t² and l₂ + 2m₂t + n₂t² given by
/// two rows (lᵢ, mᵢ, nᵢ) of a second fundamental form. Vanishes exactly when
/// the locus passes through the origin; the sign separates origin-outside
/// (positive) from origin-inside (negative), calibrated so that the pair from
/// (x², y²) is positive.
pub fn resultant_of_rows<S: Scalar>(r1: &[S], r2: &[S]) -> S {
    assert_eq!(r1.len(), 3);
    assert_eq!(r2.len(), 3);
    let two = S::from_int(2);
    let p = [r1[0].clone(), two.clone() * r1[1].clone(), r1[2].clone()];
    let q = [r2[0].clone(), two * r2[1].clone(), r2[2].clone()];
    let d02 = p[0].clone() * q[2].clone() - p[2].clone() * q[0].clone();
    let d01 = p[0].clone() * q[1].clone() - p[1].clone() * q[0].clone();
    let d12 = p[1].clone() * q[2].clone() - p[2].clone() * q[1].clone();
    d02.clone() * d02 - d01 * d12
}
