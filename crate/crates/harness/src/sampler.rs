//! Random germs, stratum by stratum.
//!
//! Strata with polynomial normal forms (the M_2 models in R^5, the adapted
//! M_3 frame, the four reduced corank-1 shapes) are built from their model
//! quadratics plus random higher terms; the rest are rejection sampled
//! against the exact rank tests. Coefficients are rationals with numerator
//! and denominator bounded by ten, unit vectors are exactly unit (tangent
//! half-angle chart), and rotations are Cayley transforms of random skew
//! matrices, so downstream identities can be asserted without tolerances.

use curvloci::height::SffMatrix;
use curvloci::jet::MapGerm;
use curvloci::linalg::Mat;
use curvloci::locus::LocusKind;
use curvloci::poly::{Mono, Poly};
use curvloci::scalar::{rat, rint};
use curvloci::surf_r5::M2Subtype;
use curvloci::Rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

use crate::HarnessError;

/// Attempts before a rejection loop declares the stratum unreachable.
pub const REJECTION_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GermClass {
    /// Surface in R^5 with vanishing second order part.
    FlatR5,
    /// Monge surface in R^5 over the model quadratic of one M_2 subtype.
    M2Model(M2Subtype),
    /// Surface in R^5 with a random rank-2 second fundamental form.
    M2General,
    /// As `M2General`, with the third normal row zero, so the ellipse plane
    /// E_p sits inside the span of the first two normal axes.
    M2Aligned,
    /// Surface in R^5 with a rank-3 second fundamental form.
    M3General,
    /// M_3 germ in the adapted frame: quadratic part (x^2, xy, y^2).
    M3Adapted,
    /// Corank-1 surface in R^4, reduced shape with the given locus kind.
    SingShape(LocusKind),
    /// Monge 3-manifold in R^6 with unconstrained second order part.
    Mfld3General,
    /// 3-manifold whose curvature locus spans a plane missing the origin.
    Mfld3Planar,
    /// 3-manifold with a planar locus whose affine span hits the origin.
    Mfld3FlatCenter,
    /// Regular Monge surface in R^4.
    R4Regular,
}

impl fmt::Display for GermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GermClass::FlatR5 => write!(f, "flat surface in R^5"),
            GermClass::M2Model(sub) => write!(f, "model {sub} surface in R^5"),
            GermClass::M2General => write!(f, "M_2 surface in R^5"),
            GermClass::M2Aligned => write!(f, "M_2 surface in R^5 with aligned ellipse plane"),
            GermClass::M3General => write!(f, "M_3 surface in R^5"),
            GermClass::M3Adapted => write!(f, "adapted M_3 surface in R^5"),
            GermClass::SingShape(kind) => write!(f, "corank-1 surface with {kind} locus"),
            GermClass::Mfld3General => write!(f, "3-manifold in R^6"),
            GermClass::Mfld3Planar => write!(f, "3-manifold with planar curvature locus"),
            GermClass::Mfld3FlatCenter => {
                write!(f, "3-manifold with planar curvature locus through the point")
            }
            GermClass::R4Regular => write!(f, "regular surface in R^4"),
        }
    }
}

/// Per-trial random source. The stream depends only on `(seed, index)`, so a
/// failing trial replays identically whether the suite runs in full or the
/// single index is redrawn in isolation.
pub struct Sampler {
    rng: ChaCha8Rng,
}

/// Convenience wrapper: the germ of trial `index` under `seed`, skipping the
/// suite machinery.
pub fn random_germ(class: GermClass, seed: u64, index: u64) -> Result<MapGerm<Rat>, HarnessError> {
    Sampler::for_trial(seed, index).germ(class)
}

impl Sampler {
    pub fn for_trial(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Sampler { rng }
    }

    /// Rational with numerator in [-10, 10] and denominator in [1, 10].
    pub fn rat(&mut self) -> Rat {
        rat(self.rng.gen_range(-10..=10), self.rng.gen_range(1..=10))
    }

    /// Uniform index below `n`.
    pub fn pick(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn rat_nonzero(&mut self) -> Rat {
        let sign = if self.rng.gen::<bool>() { 1 } else { -1 };
        rat(sign * self.rng.gen_range(1..=10), self.rng.gen_range(1..=10))
    }

    pub fn rat_positive(&mut self) -> Rat {
        rat(self.rng.gen_range(1..=10), self.rng.gen_range(1..=10))
    }

    /// Exactly-unit plane direction: a rational circle point from the
    /// tangent half-angle chart, with axis directions mixed in.
    pub fn unit2(&mut self) -> Vec<Rat> {
        if self.rng.gen_range(0..8u8) == 0 {
            let axes = [(1, 0), (-1, 0), (0, 1), (0, -1)];
            let (x, y) = axes[self.rng.gen_range(0..4usize)];
            return vec![rint(x), rint(y)];
        }
        let t = self.rat();
        let den = rint(1) + t.clone() * t.clone();
        let x = (rint(1) - t.clone() * t.clone()) / den.clone();
        let y = rint(2) * t / den;
        if self.rng.gen::<bool>() {
            vec![x, y]
        } else {
            vec![y, x]
        }
    }

    /// Exactly-unit space direction: two circle points composed as
    /// (a0 b0, a1 b0, b1).
    pub fn unit3(&mut self) -> Vec<Rat> {
        let a = self.unit2();
        let b = self.unit2();
        vec![
            a[0].clone() * b[0].clone(),
            a[1].clone() * b[0].clone(),
            b[1].clone(),
        ]
    }

    /// Rational rotation of three-space: the Cayley transform
    /// (I + A)^{-1} (I - A) of a random skew matrix A, which is orthogonal
    /// with determinant one. I + A is invertible for every skew A.
    pub fn rotation3(&mut self) -> Mat<Rat> {
        let (p, q, r) = (self.rat(), self.rat(), self.rat());
        let skew = |i: usize, j: usize| -> Rat {
            match (i, j) {
                (0, 1) => p.clone(),
                (1, 0) => -p.clone(),
                (0, 2) => q.clone(),
                (2, 0) => -q.clone(),
                (1, 2) => r.clone(),
                (2, 1) => -r.clone(),
                _ => rint(0),
            }
        };
        let id = |i: usize, j: usize| if i == j { rint(1) } else { rint(0) };
        let plus = Mat::from_fn(3, 3, |i, j| id(i, j) + skew(i, j));
        let minus = Mat::from_fn(3, 3, |i, j| id(i, j) - skew(i, j));
        let mut cols = Vec::with_capacity(3);
        for j in 0..3 {
            let rhs: Vec<Rat> = (0..3).map(|i| minus[(i, j)].clone()).collect();
            cols.push(
                plus.solve_unique(&rhs)
                    .expect("I + A is invertible for skew A"),
            );
        }
        Mat::from_fn(3, 3, |i, j| cols[j][i].clone())
    }

    /// Random cubic in `nvars` variables (2 or 3), all monomials drawn.
    fn cubic(&mut self, nvars: usize) -> Poly<Rat> {
        let mut p = Poly::zero(nvars);
        let monos2: &[[u8; 3]] = &[[3, 0, 0], [2, 1, 0], [1, 2, 0], [0, 3, 0]];
        let monos3: &[[u8; 3]] = &[
            [3, 0, 0],
            [2, 1, 0],
            [2, 0, 1],
            [1, 2, 0],
            [1, 1, 1],
            [1, 0, 2],
            [0, 3, 0],
            [0, 2, 1],
            [0, 1, 2],
            [0, 0, 3],
        ];
        let monos = if nvars == 2 { monos2 } else { monos3 };
        for m in monos {
            p.add_term(Mono(*m), self.rat());
        }
        p
    }

    fn quadratic(&mut self, nvars: usize) -> Poly<Rat> {
        let mut p = Poly::zero(nvars);
        let monos2: &[[u8; 3]] = &[[2, 0, 0], [1, 1, 0], [0, 2, 0]];
        let monos3: &[[u8; 3]] = &[
            [2, 0, 0],
            [1, 1, 0],
            [1, 0, 1],
            [0, 2, 0],
            [0, 1, 1],
            [0, 0, 2],
        ];
        let monos = if nvars == 2 { monos2 } else { monos3 };
        for m in monos {
            p.add_term(Mono(*m), self.rat());
        }
        p
    }

    /// Monge germ: identity tangent components followed by the given normal
    /// components, with random cubics stirred in when asked.
    fn monge(&mut self, dom: usize, normals: Vec<Poly<Rat>>, cubics: bool) -> MapGerm<Rat> {
        let cod = dom + normals.len();
        let mut comps: Vec<Poly<Rat>> = (0..dom).map(|i| Poly::var(dom, i)).collect();
        for q in normals {
            let p = if cubics { q.add(&self.cubic(dom)) } else { q };
            comps.push(p);
        }
        let deg = if cubics { 3 } else { 2 };
        MapGerm::new(dom, cod, deg, comps).expect("sampler germs are centered")
    }

    /// One draw from the class, or `None` when a rejection test fails.
    fn draw(&mut self, class: GermClass) -> Option<MapGerm<Rat>> {
        match class {
            GermClass::FlatR5 => {
                Some(self.monge(2, vec![Poly::zero(2), Poly::zero(2), Poly::zero(2)], true))
            }
            GermClass::M2Model(sub) => {
                let mut q1 = Poly::zero(2);
                let mut q2 = Poly::zero(2);
                q1.add_term(Mono([2, 0, 0]), rint(1));
                match sub {
                    M2Subtype::Hyperbolic => q2.add_term(Mono([0, 2, 0]), rint(1)),
                    M2Subtype::Parabolic => q2.add_term(Mono([1, 1, 0]), rint(1)),
                    M2Subtype::Elliptic => {
                        q1.add_term(Mono([0, 2, 0]), rint(-1));
                        q2.add_term(Mono([1, 1, 0]), rint(1));
                    }
                }
                Some(self.monge(2, vec![q1, q2, Poly::zero(2)], true))
            }
            GermClass::M2General => {
                let q1 = self.quadratic(2);
                let q2 = self.quadratic(2);
                let (lam, mu) = (self.rat(), self.rat());
                let q3 = q1.scale(&lam).add(&q2.scale(&mu));
                let g = self.monge(2, vec![q1, q2, q3], true);
                (SffMatrix::from_monge(&g).rank() == 2).then_some(g)
            }
            GermClass::M2Aligned => {
                let q1 = self.quadratic(2);
                let q2 = self.quadratic(2);
                let g = self.monge(2, vec![q1, q2, Poly::zero(2)], true);
                (SffMatrix::from_monge(&g).rank() == 2).then_some(g)
            }
            GermClass::M3General => {
                let normals = vec![self.quadratic(2), self.quadratic(2), self.quadratic(2)];
                let g = self.monge(2, normals, true);
                (SffMatrix::from_monge(&g).rank() == 3).then_some(g)
            }
            GermClass::M3Adapted => {
                let mut q1 = Poly::zero(2);
                let mut q2 = Poly::zero(2);
                let mut q3 = Poly::zero(2);
                q1.add_term(Mono([2, 0, 0]), rint(1));
                q2.add_term(Mono([1, 1, 0]), rint(1));
                q3.add_term(Mono([0, 2, 0]), rint(1));
                Some(self.monge(2, vec![q1, q2, q3], true))
            }
            GermClass::SingShape(kind) => self.sing_shape(kind),
            GermClass::Mfld3General => {
                let normals = vec![self.quadratic(3), self.quadratic(3), self.quadratic(3)];
                Some(self.monge(3, normals, true))
            }
            GermClass::Mfld3Planar => self.planar_3mfld(false),
            GermClass::Mfld3FlatCenter => self.planar_3mfld(true),
            GermClass::R4Regular => {
                let normals = vec![self.quadratic(2), self.quadratic(2)];
                Some(self.monge(2, normals, true))
            }
        }
    }

    /// Reduced corank-1 shapes, one per curvature parabola kind. The
    /// secondary coefficient is zeroed now and then so the degenerate focal
    /// branches get drawn too.
    fn sing_shape(&mut self, kind: LocusKind) -> Option<MapGerm<Rat>> {
        let mut f1 = Poly::zero(2);
        let mut f2 = Poly::zero(2);
        let mut f3 = Poly::zero(2);
        let side = if self.rng.gen_range(0..8u8) == 0 {
            rint(0)
        } else {
            self.rat_nonzero()
        };
        match kind {
            LocusKind::Parabola => {
                f1.add_term(Mono([1, 1, 0]), rint(1));
                f2.add_term(Mono([2, 0, 0]), self.rat());
                f2.add_term(Mono([1, 1, 0]), self.rat());
                f2.add_term(Mono([0, 2, 0]), self.rat_positive());
                f3.add_term(Mono([2, 0, 0]), side);
            }
            LocusKind::HalfLine => {
                f1.add_term(Mono([2, 0, 0]), self.rat());
                f1.add_term(Mono([0, 2, 0]), rint(1));
                f2.add_term(Mono([2, 0, 0]), side);
            }
            LocusKind::Line => {
                f1.add_term(Mono([1, 1, 0]), rint(1));
                f2.add_term(Mono([2, 0, 0]), side);
            }
            LocusKind::Point => {
                f2.add_term(Mono([2, 0, 0]), side);
            }
            _ => return None,
        }
        let comps = vec![
            Poly::var(2, 0),
            f1,
            f2,
            f3,
        ];
        let g = MapGerm::new(2, 4, 2, comps).expect("shape germs are centered");
        let locus = curvloci::surf_r4_sing::curvature_parabola(&g).ok()?;
        (locus.kind() == kind).then_some(g)
    }

    /// 3-manifold germ with planar curvature locus, built by inverting the
    /// (H, B_1..B_5) decomposition: the generators are drawn in the plane of
    /// the first two normal axes with span of rank two, and H leaves that
    /// plane exactly when the focus should stay finite.
    fn planar_3mfld(&mut self, center_in_plane: bool) -> Option<MapGerm<Rat>> {
        let h = if center_in_plane {
            [self.rat(), self.rat(), rint(0)]
        } else {
            [self.rat(), self.rat(), self.rat_nonzero()]
        };
        let bs: Vec<[Rat; 3]> = (0..5)
            .map(|_| [self.rat(), self.rat(), rint(0)])
            .collect();
        let plane = Mat::from_fn(5, 2, |i, j| bs[i][j].clone());
        if plane.rank() != 2 {
            return None;
        }
        let two = rint(2);
        let four = rint(4);
        let mut normals = Vec::with_capacity(3);
        for i in 0..3 {
            let a = h[i].clone() - two.clone() * bs[0][i].clone() + bs[1][i].clone();
            let d = h[i].clone() - two.clone() * bs[0][i].clone() - bs[1][i].clone();
            let s = h[i].clone() + four.clone() * bs[0][i].clone();
            let mut q = Poly::zero(3);
            q.add_term(Mono([2, 0, 0]), a / two.clone());
            q.add_term(Mono([1, 1, 0]), bs[2][i].clone());
            q.add_term(Mono([1, 0, 1]), bs[3][i].clone());
            q.add_term(Mono([0, 2, 0]), d / two.clone());
            q.add_term(Mono([0, 1, 1]), bs[4][i].clone());
            q.add_term(Mono([0, 0, 2]), s / two.clone());
            normals.push(q);
        }
        Some(self.monge(3, normals, true))
    }

    pub fn germ(&mut self, class: GermClass) -> Result<MapGerm<Rat>, HarnessError> {
        for _ in 0..REJECTION_CAP {
            if let Some(g) = self.draw(class) {
                return Ok(g);
            }
        }
        Err(HarnessError::SamplerExhausted(class.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use curvloci::linalg;
    use curvloci::mfld3;
    use curvloci::surf_r5::classify_r5;

    #[test]
    fn trial_streams_are_reproducible_and_distinct() {
        let draw = |seed, index| random_germ(GermClass::M3General, seed, index).unwrap();
        assert_eq!(draw(7, 3).serialize(), draw(7, 3).serialize());
        assert_ne!(draw(7, 3).serialize(), draw(7, 4).serialize());
        assert_ne!(draw(7, 3).serialize(), draw(8, 3).serialize());
    }

    #[test]
    fn units_are_exactly_unit() {
        let mut s = Sampler::for_trial(11, 0);
        for _ in 0..50 {
            let u = s.unit2();
            assert_eq!(linalg::norm_sq(&u), rint(1));
            let v = s.unit3();
            assert_eq!(linalg::norm_sq(&v), rint(1));
        }
    }

    #[test]
    fn cayley_rotations_are_orthogonal() {
        let mut s = Sampler::for_trial(13, 2);
        for _ in 0..10 {
            let r = s.rotation3();
            let prod = r.transpose().matmul(&r);
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(prod[(i, j)], if i == j { rint(1) } else { rint(0) });
                }
            }
            assert_eq!(r.det(), rint(1));
        }
    }

    #[test]
    fn classes_land_in_their_strata() {
        for index in 0..12 {
            let g = random_germ(GermClass::M2General, 40, index).unwrap();
            assert_eq!(SffMatrix::from_monge(&g).rank(), 2);
            let g = random_germ(GermClass::M3General, 41, index).unwrap();
            assert_eq!(SffMatrix::from_monge(&g).rank(), 3);
            let g = random_germ(GermClass::M2Model(M2Subtype::Elliptic), 42, index).unwrap();
            let class = classify_r5(&SffMatrix::from_monge(&g)).unwrap();
            assert_eq!(class.subtype, Some(M2Subtype::Elliptic));
            let g = random_germ(GermClass::SingShape(LocusKind::HalfLine), 43, index).unwrap();
            let locus = curvloci::surf_r4_sing::curvature_parabola(&g).unwrap();
            assert_eq!(locus.kind(), LocusKind::HalfLine);
        }
    }

    #[test]
    fn planar_manifolds_have_plane_loci_with_the_right_center() {
        for index in 0..8 {
            let g = random_germ(GermClass::Mfld3Planar, 50, index).unwrap();
            let locus = mfld3::hb_vectors(&mfld3::alpha3(&g).unwrap());
            assert_eq!(locus.ep_dim, 2);
            assert!(!mfld3::kappa6(&locus).unwrap().is_zero());
            let g = random_germ(GermClass::Mfld3FlatCenter, 51, index).unwrap();
            let locus = mfld3::hb_vectors(&mfld3::alpha3(&g).unwrap());
            assert_eq!(locus.ep_dim, 2);
            assert!(mfld3::kappa6(&locus).unwrap().is_zero());
        }
    }
}
