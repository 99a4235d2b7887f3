//! Polynomial map germs `(R^m, 0) -> (R^n, 0)` and their normal positions.
//!
//! A germ is stored as one polynomial per target coordinate, truncated at a
//! fixed jet degree. Linear coordinate changes, formal inversion of source
//! changes, and the two straightening operations (graph position for
//! immersions, `(x, f_2, .., f_n)` position for rank-1 germs) all live here.

use crate::error::{GeomError, GeomResult};
use crate::linalg::{self, Mat};
use crate::poly::{Mono, Poly};
use crate::scalar::{Rat, Scalar, ScalarRepr};

#[derive(Clone, PartialEq, Debug)]
pub struct MapGerm<S> {
    domain: usize,
    codomain: usize,
    degree: u32,
    comps: Vec<Poly<S>>,
}

impl<S: Scalar> MapGerm<S> {
    pub fn new(domain: usize, codomain: usize, degree: u32, comps: Vec<Poly<S>>) -> GeomResult<Self> {
        assert!(domain >= 2 && domain <= 3, "source dimension must be 2 or 3");
        assert_eq!(comps.len(), codomain);
        for c in &comps {
            assert_eq!(c.nvars(), domain);
            if !c.coeff(Mono([0, 0, 0])).is_zero() {
                return Err(GeomError::NotCentered);
            }
        }
        let comps = comps.into_iter().map(|c| c.truncate_above(degree)).collect();
        Ok(MapGerm {
            domain,
            codomain,
            degree,
            comps,
        })
    }

    pub fn identity(dim: usize, codomain: usize, degree: u32) -> Self {
        let comps = (0..codomain)
            .map(|i| {
                if i < dim {
                    Poly::var(dim, i)
                } else {
                    Poly::zero(dim)
                }
            })
            .collect();
        MapGerm {
            domain: dim,
            codomain,
            degree,
            comps,
        }
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn comps(&self) -> &[Poly<S>] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Poly<S> {
        &self.comps[i]
    }

    /// Whether the germ literally has the graph shape `(x_1..x_m, h_1..)` with
    /// `dh(0) = 0`, i.e. the linear part is the identity over zeros.
    pub fn in_graph_position(&self) -> bool {
        let lp = self.linear_part();
        (0..self.codomain).all(|i| {
            (0..self.domain).all(|j| {
                let entry = lp[(i, j)].clone();
                if i == j {
                    (entry - S::one()).is_zero_val()
                } else {
                    entry.is_zero_val()
                }
            })
        })
    }

    /// Jacobian at the origin, `codomain x domain`.
    pub fn linear_part(&self) -> Mat<S> {
        Mat::from_fn(self.codomain, self.domain, |i, j| {
            self.comps[i].coeff(Mono::var(j))
        })
    }

    pub fn differential_rank(&self) -> usize {
        self.linear_part().rank()
    }

    /// Hessian matrix of one component at the origin.
    pub fn hessian_comp(&self, i: usize) -> Mat<S> {
        let m = self.domain;
        Mat::from_fn(m, m, |j, k| {
            if j == k {
                let mut e = [0u8; 3];
                e[j] = 2;
                self.comps[i].coeff(Mono(e)) * S::from_int(2)
            } else {
                let mut e = [0u8; 3];
                e[j] = 1;
                e[k] = 1;
                self.comps[i].coeff(Mono(e))
            }
        })
    }

    /// The vector `(v^T Hess(comp_i) w)_i` of second derivatives at 0.
    pub fn hessian_bilinear(&self, v: &[S], w: &[S]) -> Vec<S> {
        (0..self.codomain)
            .map(|i| {
                let h = self.hessian_comp(i);
                linalg::dot(v, &h.matvec(w))
            })
            .collect()
    }

    /// Formal partial derivative by a multi-index, one entry per source
    /// variable.
    pub fn partial_derivative(&self, idx: &[u8]) -> Self {
        assert_eq!(idx.len(), self.domain);
        let total: u32 = idx.iter().map(|&e| e as u32).sum();
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut d = c.clone();
                for (var, &reps) in idx.iter().enumerate() {
                    for _ in 0..reps {
                        d = d.derivative(var);
                    }
                }
                d
            })
            .collect();
        MapGerm {
            domain: self.domain,
            codomain: self.codomain,
            degree: self.degree.saturating_sub(total),
            comps,
        }
    }

    pub fn eval(&self, pt: &[S]) -> Vec<S> {
        self.comps.iter().map(|c| c.eval(pt)).collect()
    }

    pub fn eval_f64(&self, pt: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|c| c.eval_f64(pt)).collect()
    }

    pub fn to_float(&self) -> MapGerm<f64> {
        MapGerm {
            domain: self.domain,
            codomain: self.codomain,
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .map(|c| {
                    let mut p = Poly::zero(c.nvars());
                    for (m, v) in c.terms() {
                        p.add_term(*m, v.to_f64());
                    }
                    p
                })
                .collect(),
        }
    }

    pub fn truncate(&self, degree: u32) -> Self {
        MapGerm {
            domain: self.domain,
            codomain: self.codomain,
            degree,
            comps: self.comps.iter().map(|c| c.truncate_above(degree)).collect(),
        }
    }

    /// `self ∘ other`, truncated at the smaller of the two jet degrees.
    pub fn compose(&self, other: &MapGerm<S>) -> MapGerm<S> {
        assert_eq!(self.domain, other.codomain);
        let degree = self.degree.min(other.degree);
        let comps = self
            .comps
            .iter()
            .map(|c| c.substitute(other.comps(), degree))
            .collect();
        MapGerm {
            domain: other.domain,
            codomain: self.codomain,
            degree,
            comps,
        }
    }

    /// `self ∘ T` for a linear source change `T` (columns are the images of
    /// the new basis vectors).
    pub fn precompose_linear(&self, t: &Mat<S>) -> MapGerm<S> {
        assert_eq!(t.nrows(), self.domain);
        let rows: Vec<Vec<S>> = (0..self.domain).map(|i| t.row(i)).collect();
        let comps = self.comps.iter().map(|c| c.substitute_linear(&rows)).collect();
        MapGerm {
            domain: t.ncols(),
            codomain: self.codomain,
            degree: self.degree,
            comps,
        }
    }

    /// `R ∘ self` for a linear target map `R`.
    pub fn postcompose_linear(&self, r: &Mat<S>) -> MapGerm<S> {
        assert_eq!(r.ncols(), self.codomain);
        let comps = (0..r.nrows())
            .map(|i| {
                let mut acc = Poly::zero(self.domain);
                for j in 0..self.codomain {
                    acc = acc.add(&self.comps[j].scale(&r[(i, j)]));
                }
                acc
            })
            .collect();
        MapGerm {
            domain: self.domain,
            codomain: r.nrows(),
            degree: self.degree,
            comps,
        }
    }

    /// `target^T ∘ self ∘ source`, the combined change the reductions use.
    pub fn change_coordinates(&self, source: &Mat<S>, target: &Mat<S>) -> GeomResult<MapGerm<S>> {
        assert_eq!(source.nrows(), self.domain);
        assert_eq!(source.ncols(), self.domain);
        assert_eq!(target.nrows(), self.codomain);
        assert_eq!(target.ncols(), self.codomain);
        if source.det().is_zero_val() {
            return Err(GeomError::SingularSource);
        }
        Ok(self
            .precompose_linear(source)
            .postcompose_linear(&target.transpose())
            .truncate(self.degree))
    }

    /// Formal inverse of a source change `(R^m,0) -> (R^m,0)` with invertible
    /// linear part, to the same jet degree.
    pub fn invert_formal(&self) -> GeomResult<MapGerm<S>> {
        assert_eq!(self.domain, self.codomain);
        let m = self.domain;
        let l = self.linear_part();
        let Some(linv) = l.inverse() else {
            return Err(GeomError::RankMismatch {
                expected: m,
                found: l.rank(),
            });
        };
        // Split self = L + N with N of order >= 2, then iterate
        // x <- Linv (y - N(x)); each pass fixes one more jet order.
        let linear_germ = MapGerm::identity(m, m, self.degree).postcompose_linear(&l);
        let n_part = MapGerm {
            domain: m,
            codomain: m,
            degree: self.degree,
            comps: (0..m)
                .map(|i| self.comps[i].sub(linear_germ.comp(i)))
                .collect(),
        };
        let y = MapGerm::identity(m, m, self.degree);
        let mut x = y.postcompose_linear(&linv);
        for _ in 1..self.degree {
            let nx = n_part.compose(&x);
            let resid = MapGerm {
                domain: m,
                codomain: m,
                degree: self.degree,
                comps: (0..m).map(|i| y.comp(i).sub(nx.comp(i))).collect(),
            };
            x = resid.postcompose_linear(&linv);
        }
        debug_assert!({
            let check = self.compose(&x);
            (0..m).all(|i| check.comp(i).sub(y.comp(i)).is_negligible())
        });
        Ok(x)
    }

    /// Straighten an immersion into graph position `(x_1..x_m, h_1..h_{n-m})`
    /// with `dh(0) = 0`. The frame columns are the new target axes expressed
    /// in the old coordinates; the germ returned equals
    /// `frame^T ∘ self ∘ (source reparametrization)`.
    pub fn monge_form(&self) -> GeomResult<MongeForm<S>> {
        let m = self.domain;

        let j = self.linear_part();
        let rank = j.rank();
        if rank != m {
            return Err(GeomError::RankMismatch {
                expected: m,
                found: rank,
            });
        }
        let cols: Vec<Vec<S>> = (0..m).map(|k| j.col(k)).collect();
        let tangent = linalg::orthonormalize(&cols).ok_or(GeomError::IrrationalRotation)?;
        let frame = complete_frame(&tangent);
        let g1 = self.postcompose_linear(&frame.transpose());
        let tangent_change = MapGerm {
            domain: m,
            codomain: m,
            degree: self.degree,
            comps: g1.comps[..m].to_vec(),
        };
        let phi = tangent_change.invert_formal()?;
        let germ = g1.compose(&phi);
        debug_assert!((0..m).all(|i| germ.comp(i).sub(&Poly::var(m, i)).is_negligible()));
        Ok(MongeForm { germ, frame })
    }

    /// Straighten a rank-1 germ from the plane into the position
    /// `(x, f_2, .., f_n)` with `df_i(0) = 0`. The frame is the target
    /// isometry used (columns are new axes in old coordinates).
    pub fn corank1_form(&self) -> GeomResult<Corank1Form<S>> {
        assert_eq!(self.domain, 2);
        let n = self.codomain;
        let j = self.linear_part();
        let rank = j.rank();
        if rank != 1 {
            return Err(GeomError::RankMismatch {
                expected: 1,
                found: rank,
            });
        }
        let u = (0..2)
            .map(|k| j.col(k))
            .find(|c| !linalg::is_zero_vec(c))
            .expect("rank 1 differential has a nonzero column");
        let u_hat = linalg::unitize(&u).ok_or(GeomError::IrrationalRotation)?;
        let frame = linalg::orthonormal_completion(&u_hat, 0);
        let g1 = self.postcompose_linear(&frame.transpose());
        // First component is now a submersion; flatten it to the first
        // source coordinate and keep a transverse linear coordinate.
        let c1 = g1.comp(0).clone();
        let lin = [c1.coeff(Mono::var(0)), c1.coeff(Mono::var(1))];
        let complement = if !lin[0].is_zero_val() {
            Poly::var(2, 1)
        } else {
            Poly::var(2, 0)
        };
        let theta = MapGerm {
            domain: 2,
            codomain: 2,
            degree: self.degree,
            comps: vec![c1, complement],
        };
        let psi = theta.invert_formal()?;
        let germ = g1.compose(&psi);
        debug_assert!(germ.comp(0).sub(&Poly::var(2, 0)).is_negligible());
        debug_assert!((1..n).all(|i| {
            let lp = germ.linear_part();
            lp[(i, 0)].is_zero_val() && lp[(i, 1)].is_zero_val()
        }));
        Ok(Corank1Form { germ, frame })
    }
}

/// Immersion straightened to a graph, plus the target frame that did it.
#[derive(Clone, Debug)]
pub struct MongeForm<S> {
    pub germ: MapGerm<S>,
    pub frame: Mat<S>,
}

/// Rank-1 germ straightened to `(x, f_2, .., f_n)` position.
#[derive(Clone, Debug)]
pub struct Corank1Form<S> {
    pub germ: MapGerm<S>,
    pub frame: Mat<S>,
}

/// Complete orthonormal vectors to a full orthogonal matrix using nested
/// reflections, so no new square roots are introduced. Determinant is
/// normalized to +1 by flipping the last added column when needed.
pub fn complete_frame<S: Scalar>(vs: &[Vec<S>]) -> Mat<S> {
    let n = vs[0].len();
    let k = vs.len();
    assert!(k <= n);
    let mut q = Mat::identity(n);
    for (step, v) in vs.iter().enumerate() {
        // Express v in the current partial frame; its head must already be
        // e_step, and the tail is a unit vector to reflect into place.
        let w = q.transpose().matvec(v);
        let tail: Vec<S> = w[step..].to_vec();
        let h_small = linalg::orthonormal_completion(&tail, 0);
        let mut h = Mat::identity(n);
        for i in 0..n - step {
            for jj in 0..n - step {
                h[(step + i, step + jj)] = h_small[(i, jj)].clone();
            }
        }
        q = q.matmul(&h);
    }
    if k < n && q.det().sign() == crate::scalar::Sign::Negative {
        for i in 0..n {
            let v = -q[(i, n - 1)].clone();
            q[(i, n - 1)] = v;
        }
    }
    q
}

/// Minimal affine subspace spanned by a set of points.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspace<S> {
    pub base: Vec<S>,
    pub basis: Vec<Vec<S>>,
}

impl<S: Scalar> AffineSubspace<S> {
    pub fn new(base: Vec<S>, basis: Vec<Vec<S>>) -> Self {
        AffineSubspace { base, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn contains(&self, point: &[S]) -> bool {
        let diff = linalg::vsub(point, &self.base);
        if self.basis.is_empty() {
            return linalg::is_zero_vec(&diff);
        }
        let m = Mat::from_rows(&self.basis).transpose();
        m.solve_affine(&diff).is_some()
    }

    /// Squared distance from the ambient origin, via the normal equations of
    /// the orthogonal projection; exact over the rationals.
    pub fn distance_sq_to_origin(&self) -> S {
        if self.basis.is_empty() {
            return linalg::norm_sq(&self.base);
        }
        let k = self.basis.len();
        let gram = Mat::from_fn(k, k, |i, j| linalg::dot(&self.basis[i], &self.basis[j]));
        let rhs: Vec<S> = self
            .basis
            .iter()
            .map(|b| -linalg::dot(&self.base, b))
            .collect();
        let t = gram
            .solve_unique(&rhs)
            .expect("Gram matrix of independent vectors is invertible");
        let mut closest = self.base.clone();
        for (ti, b) in t.iter().zip(&self.basis) {
            closest = linalg::vadd(&closest, &linalg::vscale(b, ti));
        }
        linalg::norm_sq(&closest)
    }
}

/// Minimal affine subspace containing the given points. Basis vectors are the
/// pivot rows of the reduced difference matrix, so equal spans get equal
/// representations.
pub fn affine_span<S: Scalar>(points: &[Vec<S>]) -> AffineSubspace<S> {
    assert!(!points.is_empty());
    let base = points[0].clone();
    let diffs: Vec<Vec<S>> = points[1..]
        .iter()
        .map(|p| linalg::vsub(p, &base))
        .collect();
    if diffs.is_empty() {
        return AffineSubspace { base, basis: vec![] };
    }
    let (r, pivots) = Mat::from_rows(&diffs).rref();
    let basis = (0..pivots.len()).map(|i| r.row(i)).collect();
    AffineSubspace { base, basis }
}

impl<S: ScalarRepr> MapGerm<S> {
    /// Parse the jet file format: header lines `domain <m>`, `codomain <n>`,
    /// `degree <d>`, then one coefficient per line as
    /// `<target_index> <e_1,..,e_m> <value>`. `#` starts a comment. Exponent
    /// lists may also be wrapped in parentheses.
    pub fn parse(text: &str) -> GeomResult<Self> {
        let mut domain: Option<usize> = None;
        let mut codomain: Option<usize> = None;
        let mut degree: Option<u32> = None;
        let mut coeffs: Vec<(usize, Mono, S)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let err = |msg: &str| GeomError::Parse {
                line,
                msg: msg.to_string(),
            };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields[0] {
                "domain" | "codomain" | "degree" => {
                    if fields.len() != 2 {
                        return Err(err("header takes exactly one value"));
                    }
                    let v: usize = fields[1].parse().map_err(|_| err("bad header value"))?;
                    let slot = match fields[0] {
                        "domain" => {
                            if !(2..=3).contains(&v) {
                                return Err(err("domain must be 2 or 3"));
                            }
                            &mut domain
                        }
                        "codomain" => {
                            if !(3..=6).contains(&v) {
                                return Err(err("codomain must be between 3 and 6"));
                            }
                            &mut codomain
                        }
                        _ => {
                            if !(1..=5).contains(&v) {
                                return Err(err("degree must be between 1 and 5"));
                            }
                            degree = Some(v as u32);
                            continue;
                        }
                    };
                    if slot.is_some() {
                        return Err(err("duplicate header line"));
                    }
                    *slot = Some(v);
                }
                _ => {
                    let (Some(m), Some(n), Some(d)) = (domain, codomain, degree) else {
                        return Err(err("coefficient before domain/codomain/degree headers"));
                    };
                    if fields.len() != 3 {
                        return Err(err("expected `<target> <exponents> <value>`"));
                    }
                    let target: usize =
                        fields[0].parse().map_err(|_| err("bad target index"))?;
                    if target >= n {
                        return Err(err("target index out of range"));
                    }
                    let exps = fields[1]
                        .trim_start_matches('(')
                        .trim_end_matches(')');
                    let parts: Vec<&str> = exps.split(',').collect();
                    if parts.len() != m {
                        return Err(err("exponent count must match the domain"));
                    }
                    let mut mono = [0u8; 3];
                    for (k, p) in parts.iter().enumerate() {
                        mono[k] = p.trim().parse().map_err(|_| err("bad exponent"))?;
                    }
                    let mono = Mono(mono);
                    let total = mono.degree();
                    if total == 0 {
                        return Err(err("degree-0 terms are not allowed (germ fixes the origin)"));
                    }
                    if total > d {
                        return Err(err("monomial degree exceeds the declared jet degree"));
                    }
                    let value =
                        S::parse_token(fields[2]).ok_or_else(|| err("bad coefficient value"))?;
                    if coeffs.iter().any(|(t, mm, _)| *t == target && *mm == mono) {
                        return Err(err("duplicate coefficient"));
                    }
                    coeffs.push((target, mono, value));
                }
            }
        }
        let (Some(m), Some(n), Some(d)) = (domain, codomain, degree) else {
            return Err(GeomError::Parse {
                line: 0,
                msg: "missing domain/codomain/degree headers".to_string(),
            });
        };
        let mut comps = vec![Poly::zero(m); n];
        for (t, mono, v) in coeffs {
            comps[t].add_term(mono, v);
        }
        MapGerm::new(m, n, d, comps)
    }

    /// Inverse of `parse`: stable ordering by target index, then monomial
    /// order, with bare comma-separated exponents.
    pub fn serialize(&self) -> String {
        let mut out = format!(
            "domain {}\ncodomain {}\ndegree {}\n",
            self.domain, self.codomain, self.degree
        );
        for (i, c) in self.comps.iter().enumerate() {
            for (mono, v) in c.terms() {
                let exps: Vec<String> = (0..self.domain)
                    .map(|k| mono.0[k].to_string())
                    .collect();
                out.push_str(&format!("{} {} {}\n", i, exps.join(","), v.jet_token()));
            }
        }
        out
    }
}

/// A parsed germ in whichever arithmetic the file's tokens call for.
#[derive(Clone, Debug)]
pub enum AnyGerm {
    Exact(MapGerm<Rat>),
    Float(MapGerm<f64>),
}

impl AnyGerm {
    /// Float mode is chosen when any coefficient token carries a decimal
    /// point or exponent marker; plain integers and `p/q` stay exact.
    pub fn parse(text: &str) -> GeomResult<AnyGerm> {
        let mut float_mode = false;
        for raw in text.lines() {
            let content = raw.split('#').next().unwrap_or("").trim();
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() == 3 && !matches!(fields[0], "domain" | "codomain" | "degree") {
                let tok = fields[2];
                if tok.contains('.') || tok.contains('e') || tok.contains('E') {
                    float_mode = true;
                    break;
                }
            }
        }
        if float_mode {
            Ok(AnyGerm::Float(MapGerm::<f64>::parse(text)?))
        } else {
            Ok(AnyGerm::Exact(MapGerm::<Rat>::parse(text)?))
        }
    }

    pub fn serialize(&self) -> String {
        match self {
            AnyGerm::Exact(g) => g.serialize(),
            AnyGerm::Float(g) => g.serialize(),
        }
    }

    pub fn domain(&self) -> usize {
        match self {
            AnyGerm::Exact(g) => g.domain(),
            AnyGerm::Float(g) => g.domain(),
        }
    }

    pub fn codomain(&self) -> usize {
        match self {
            AnyGerm::Exact(g) => g.codomain(),
            AnyGerm::Float(g) => g.codomain(),
        }
    }

    pub fn to_float(&self) -> MapGerm<f64> {
        match self {
            AnyGerm::Exact(g) => g.to_float(),
            AnyGerm::Float(g) => g.clone(),
        }
    }
}
