//! Dense-enough multivariate polynomials in up to three variables.
//!
//! Everything the crate manipulates (germ components, height functions,
//! degenerate cones, focal equations) lives in at most three variables and
//! degree five, so a sorted term map is both simple and fast.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Exponent vector; entries beyond the owning polynomial's variable count are
/// zero. Ordered by total degree, then lexicographically, which fixes the
/// serialization order of jet files.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Mono(pub [u8; 3]);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn var(i: usize) -> Mono {
        let mut e = [0u8; 3];
        e[i] = 1;
        Mono(e)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.0).cmp(&(other.degree(), other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Mono, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1 && nvars <= 3);
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Mono([0, 0, 0]), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = Poly::zero(nvars);
        p.add_term(Mono::var(i), S::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient is zero within the scalar's tolerance;
    /// catches float dust that exact `is_zero` would miss.
    pub fn is_negligible(&self) -> bool {
        self.terms.values().all(|c| c.is_zero_val())
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: Mono) -> S {
        self.terms.get(&mono).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of `x^i y^j` in a two-variable polynomial.
    pub fn coeff2(&self, i: u8, j: u8) -> S {
        debug_assert!(self.nvars == 2);
        self.coeff(Mono([i, j, 0]))
    }

    pub fn add_term(&mut self, mono: Mono, c: S) {
        if c.is_zero() {
            return;
        }
        for k in self.nvars..3 {
            assert_eq!(mono.0[k], 0, "exponent beyond variable count");
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(*m, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Poly::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            let prod = v.clone() * c.clone();
            if !prod.is_zero() {
                out.terms.insert(*m, prod);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Poly::constant(self.nvars, S::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < self.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut me = m.0;
            me[var] -= 1;
            out.add_term(Mono(me), c.clone() * S::from_int(e as i64));
        }
        out
    }

    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars);
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, p) in point.iter().enumerate() {
                for _ in 0..m.0[i] {
                    t = t * p.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64();
            for (i, p) in point.iter().enumerate() {
                t *= p.powi(m.0[i] as i32);
            }
            acc += t;
        }
        acc
    }

    /// Keep only terms of total degree `<= max_deg`.
    pub fn truncate_above(&self, max_deg: u32) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.degree() <= max_deg {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// Keep only the terms of total degree exactly `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.degree() == deg {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// Substitute each variable by the given polynomial (all in the same
    /// target variable set), truncating the result above `max_deg`.
    pub fn substitute(&self, images: &[Poly<S>], max_deg: u32) -> Poly<S> {
        assert_eq!(images.len(), self.nvars);
        let out_vars = images[0].nvars;
        let mut out = Poly::zero(out_vars);
        // Cache powers of each image up to the degree actually used.
        let mut powers: Vec<Vec<Poly<S>>> = images
            .iter()
            .map(|im| vec![Poly::constant(out_vars, S::one()), im.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(out_vars, c.clone());
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.0[i] as usize;
                while pw.len() <= e {
                    let next = pw.last().unwrap().mul(&images[i]).truncate_above(max_deg);
                    pw.push(next);
                }
                t = t.mul(&pw[e]).truncate_above(max_deg);
            }
            out = out.add(&t);
        }
        out
    }

    /// Substitute variables by the linear forms given by the rows of `map`:
    /// `x_i <- sum_j map[i][j] * y_j`.
    pub fn substitute_linear(&self, map: &[Vec<S>]) -> Poly<S> {
        let out_vars = map[0].len();
        let images: Vec<Poly<S>> = map
            .iter()
            .map(|row| {
                let mut p = Poly::zero(out_vars);
                for (j, c) in row.iter().enumerate() {
                    p.add_term(Mono::var(j), c.clone());
                }
                p
            })
            .collect();
        // Linear substitution cannot raise the degree.
        self.substitute(&images, self.degree())
    }

    /// Render with the given variable names, mostly for CLI reports.
    pub fn display(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let cs = format!("{c}");
            let negative = cs.starts_with('-');
            let bare = cs.trim_start_matches('-');
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut vars = String::new();
            for (i, name) in names.iter().enumerate().take(self.nvars) {
                match m.0[i] {
                    0 => {}
                    1 => vars.push_str(&format!("{name}*")),
                    e => vars.push_str(&format!("{name}^{e}*")),
                }
            }
            if vars.is_empty() {
                out.push_str(bare);
            } else {
                vars.pop();
                if bare == "1" {
                    out.push_str(&vars);
                } else {
                    out.push_str(&format!("{bare}*{vars}"));
                }
            }
        }
        out
    }
}
