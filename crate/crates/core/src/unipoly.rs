//! Univariate and binary-form root machinery.
//!
//! Exact scalars get Euclidean gcd, Yun's squarefree factorization and Sturm
//! counting; numeric root values come from the companion matrix with a Newton
//! polish. Binary forms track the root at infinity so direction counts stay
//! honest when the dehomogenized polynomial drops degree.

use nalgebra::DMatrix;

use crate::scalar::{Scalar, Sign};

/// Coefficients in ascending order, always trimmed of trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UniPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * S::from_int(i as i64))
            .collect();
        UniPoly::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(S::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(S::zero);
            coeffs.push(a + b);
        }
        UniPoly::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(coeffs)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => UniPoly::zero(),
            Some(l) => {
                let inv = S::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Long division over the coefficient field; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead_inv = S::one() / divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![S::zero(); rem.len() - dd];
        while rem.len() > dd {
            let c = rem.last().unwrap().clone() * lead_inv.clone();
            let shift = rem.len() - 1 - dd;
            if !c.is_zero() {
                quot[shift] = c.clone();
                for (k, dc) in divisor.coeffs.iter().enumerate() {
                    rem[shift + k] = rem[shift + k].clone() - c.clone() * dc.clone();
                }
            }
            rem.pop();
            while rem.len() > dd && rem.last().map_or(false, |v| v.is_zero()) {
                rem.pop();
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic greatest common divisor. Intended for exact scalars; with floats
    /// the zero test falls back to the crate-wide tolerance.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Yun's squarefree factorization: pairs `(factor, multiplicity)` with the
    /// factors monic, squarefree and pairwise coprime.
    pub fn squarefree_factors(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let mut a = self.gcd(&d);
        let mut b = self.div_rem(&a).0;
        let mut c = d.div_rem(&a).0;
        let mut mult = 1u32;
        loop {
            let delta = c.sub(&b.derivative());
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            a = b.gcd(&delta);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), mult));
            }
            b = b.div_rem(&a).0;
            c = delta.div_rem(&a).0;
            mult += 1;
        }
        out
    }

    fn sign_at_plus_inf(&self) -> Sign {
        self.leading().map_or(Sign::Zero, |l| l.sign())
    }

    fn sign_at_minus_inf(&self) -> Sign {
        match (self.leading(), self.degree()) {
            (Some(l), Some(d)) => {
                let s = l.sign();
                if d % 2 == 0 {
                    s
                } else {
                    match s {
                        Sign::Positive => Sign::Negative,
                        Sign::Negative => Sign::Positive,
                        Sign::Zero => Sign::Zero,
                    }
                }
            }
            _ => Sign::Zero,
        }
    }

    /// Number of distinct real roots, by Sturm's theorem on the squarefree
    /// part. Exact scalars only give exact answers; float input inherits the
    /// crate zero tolerance.
    pub fn count_distinct_real_roots(&self) -> usize {
        let p = self.squarefree_part();
        if p.degree().unwrap_or(0) == 0 {
            return 0;
        }
        // Remainders must keep their signs (only positive rescaling is
        // legitimate in a Sturm chain), so no monic normalization here.
        let mut chain = vec![p.clone(), p.derivative()];
        while chain.last().map_or(false, |q| !q.is_zero())
            && chain.last().unwrap().degree().unwrap_or(0) > 0
        {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            chain.push(r.neg());
        }
        let variations = |signs: Vec<Sign>| {
            let nz: Vec<Sign> = signs.into_iter().filter(|s| *s != Sign::Zero).collect();
            nz.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let at_minus = variations(chain.iter().map(|q| q.sign_at_minus_inf()).collect());
        let at_plus = variations(chain.iter().map(|q| q.sign_at_plus_inf()).collect());
        at_minus - at_plus
    }

    /// Real roots as floats: companion-matrix eigenvalues of the squarefree
    /// part, Newton-polished, sorted ascending.
    pub fn real_roots_f64(&self) -> Vec<f64> {
        let sf = self.squarefree_part();
        let coeffs: Vec<f64> = sf.coeffs.iter().map(|c| c.to_f64()).collect();
        real_roots_from_coeffs(&coeffs)
    }
}

/// Real roots of the polynomial with the given ascending float coefficients.
/// Assumes the input is (numerically) squarefree.
pub fn real_roots_from_coeffs(coeffs: &[f64]) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    while c.last().map_or(false, |v| v.abs() < 1e-13) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return vec![];
    }
    let lead = c[n];
    let comp = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eigs = comp.complex_eigenvalues();
    let scale = c.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let poly_eval = |x: f64| {
        let mut acc = 0.0;
        for v in c.iter().rev() {
            acc = acc * x + v;
        }
        acc
    };
    let poly_deriv = |x: f64| {
        let mut acc = 0.0;
        for (i, v) in c.iter().enumerate().rev().take(c.len() - 1) {
            acc = acc * x + i as f64 * v;
        }
        acc
    };
    let mut roots = Vec::new();
    for e in eigs.iter() {
        if e.im.abs() > 1e-7 * (1.0 + e.re.abs()) {
            continue;
        }
        let mut x = e.re;
        for _ in 0..8 {
            let f = poly_eval(x);
            let df = poly_deriv(x);
            if df.abs() < 1e-14 * scale {
                break;
            }
            let step = f / df;
            x -= step;
            if step.abs() < 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        if poly_eval(x).abs() < 1e-7 * scale * (1.0 + x.abs()).powi(n as i32) {
            roots.push(x);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-8 * (1.0 + a.abs()));
    roots
}

/// Homogeneous binary form of a fixed nominal degree.
///
/// `coeffs[i]` multiplies `s^(d-i) t^i`. Projective roots `(s:t)` split into
/// finite ones, read off the dehomogenization in `t`, and the root `(0:1)`,
/// whose multiplicity is the degree drop of that dehomogenization.
#[derive(Clone, Debug)]
pub struct BinaryForm<S> {
    coeffs: Vec<S>,
    deg: usize,
}

impl<S: Scalar> BinaryForm<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty());
        let deg = coeffs.len() - 1;
        BinaryForm { coeffs, deg }
    }

    /// Read the coefficients off a homogeneous 2-variable polynomial of the
    /// given degree (missing monomials contribute zero).
    pub fn from_poly2(p: &crate::poly::Poly<S>, deg: usize) -> Self {
        let coeffs = (0..=deg)
            .map(|i| p.coeff(crate::poly::Mono([(deg - i) as u8, i as u8, 0])))
            .collect();
        BinaryForm { coeffs, deg }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![S::zero(); self.deg + other.deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        BinaryForm::new(coeffs)
    }

    pub fn eval(&self, s: &S, t: &S) -> S {
        let mut acc = S::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut term = c.clone();
            for _ in 0..(self.deg - i) {
                term = term * s.clone();
            }
            for _ in 0..i {
                term = term * t.clone();
            }
            acc = acc + term;
        }
        acc
    }

    /// The polynomial `F(1, t)`.
    pub fn dehomogenized(&self) -> UniPoly<S> {
        UniPoly::new(self.coeffs.clone())
    }

    /// Multiplicity of the projective root `(0:1)`.
    pub fn infinity_multiplicity(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.deg - self.dehomogenized().degree().unwrap_or(0)
    }

    /// `None` when the form vanishes identically (every direction is a root).
    pub fn count_distinct_real_directions(&self) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let finite = self.dehomogenized().count_distinct_real_roots();
        let infinite = if self.infinity_multiplicity() > 0 { 1 } else { 0 };
        Some(finite + infinite)
    }

    /// Real projective roots as unit vectors with multiplicities, sorted by
    /// angle in `[0, pi)`. The sign convention makes the first nonzero
    /// component positive. `None` when the form vanishes identically.
    pub fn real_directions(&self) -> Option<Vec<([f64; 2], u32)>> {
        if self.is_zero() {
            return None;
        }
        let mut out: Vec<([f64; 2], u32)> = Vec::new();
        let dehom = self.dehomogenized();
        if S::EXACT {
            for (factor, mult) in dehom.squarefree_factors() {
                for t in factor.real_roots_f64() {
                    out.push((unit_dir(1.0, t), mult));
                }
            }
        } else {
            // Float coefficients: find squarefree roots, then estimate each
            // multiplicity from how many derivatives vanish there.
            let coeffs: Vec<f64> = dehom.coeffs().iter().map(|c| c.to_f64()).collect();
            let scale = coeffs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for t in real_roots_from_coeffs(&coeffs) {
                let mut mult = 1u32;
                let mut d: Vec<f64> = deriv_coeffs(&coeffs);
                loop {
                    let val = eval_coeffs(&d, t);
                    if val.abs() > 1e-6 * scale || d.len() <= 1 {
                        break;
                    }
                    mult += 1;
                    d = deriv_coeffs(&d);
                }
                out.push((unit_dir(1.0, t), mult));
            }
        }
        let inf = self.infinity_multiplicity();
        if inf > 0 {
            out.push(([0.0, 1.0], inf as u32));
        }
        out.sort_by(|a, b| {
            let ang = |v: [f64; 2]| {
                let a = v[1].atan2(v[0]);
                if a < 0.0 {
                    a + std::f64::consts::PI
                } else {
                    a
                }
            };
            ang(a.0).partial_cmp(&ang(b.0)).unwrap()
        });
        Some(out)
    }
}

fn unit_dir(x: f64, y: f64) -> [f64; 2] {
    let n = (x * x + y * y).sqrt();
    let (mut a, mut b) = (x / n, y / n);
    if a < 0.0 || (a == 0.0 && b < 0.0) {
        a = -a;
        b = -b;
    }
    [a, b]
}

fn deriv_coeffs(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, v)| i as f64 * v)
        .collect()
}

fn eval_coeffs(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for v in c.iter().rev() {
        acc = acc * x + v;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rint, Rat};

    fn from_ints(v: &[i64]) -> UniPoly<Rat> {
        UniPoly::new(v.iter().map(|&c| rint(c)).collect())
    }

    #[test]
    fn gcd_extracts_common_factor() {
        // (x-1)(x+2)(x+1) and (x-1)(x+3)
        let a = from_ints(&[-2, -1, 2, 1]);
        let b = from_ints(&[-3, 2, 1]);
        let g = a.gcd(&b);
        assert_eq!(g, from_ints(&[-1, 1]));
    }

    #[test]
    fn sturm_counts_match_known_roots() {
        // (x^2+1)(x-2): one real root.
        let p = from_ints(&[-2, 1, -2, 1]);
        assert_eq!(p.count_distinct_real_roots(), 1);
        // (x^2-2)(x^2-3): four real roots.
        let q = from_ints(&[6, 0, -5, 0, 1]);
        assert_eq!(q.count_distinct_real_roots(), 4);
        // (x-1)^2: one distinct root despite multiplicity two.
        let r = from_ints(&[1, -2, 1]);
        assert_eq!(r.count_distinct_real_roots(), 1);
    }

    #[test]
    fn companion_roots_are_accurate() {
        // (x-1)(x-2)(x-3)
        let p = from_ints(&[-6, 11, -6, 1]);
        let roots = p.real_roots_f64();
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - want).abs() < 1e-9);
        }
    }

    #[test]
    fn yun_reports_multiplicities() {
        // (x-1)^2 (x+2)
        let p = from_ints(&[2, -3, 0, 1]);
        let f = p.squarefree_factors();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0], (from_ints(&[2, 1]), 1));
        assert_eq!(f[1], (from_ints(&[-1, 1]), 2));
    }

    #[test]
    fn binary_form_counts_root_at_infinity() {
        // s^3 t - s^2 t^2 = s^2 t (s - t), viewed as a quartic: the s^2
        // factor is the root (0:1) with multiplicity two, seen as the degree
        // drop of F(1,t) = t - t^2.
        let f = BinaryForm::new(vec![rint(0), rint(1), rint(-1), rint(0), rint(0)]);
        assert_eq!(f.infinity_multiplicity(), 2);
        assert_eq!(f.count_distinct_real_directions(), Some(3));
        let dirs = f.real_directions().unwrap();
        let mults: Vec<u32> = dirs.iter().map(|d| d.1).collect();
        assert_eq!(mults.iter().sum::<u32>(), 4);
    }

    #[test]
    fn binary_form_all_directions_when_zero() {
        let f: BinaryForm<Rat> = BinaryForm::new(vec![rint(0), rint(0), rint(0)]);
        assert_eq!(f.count_distinct_real_directions(), None);
    }
}
