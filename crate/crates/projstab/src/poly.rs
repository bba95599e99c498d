//! Sparse polynomials over [`Rat`] in the fixed variable set `(i, r, k)`.
//!
//! `i` is a summation index (weight-space index), `r` the power of the
//! polarisation on the projectivisation, `k` the twist scale on the base.
//! All the polynomials this crate manipulates have a handful of terms, so a
//! term map keyed by exponent vectors is the right representation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use thiserror::Error;

use crate::rat::Rat;

/// One of the three ring variables, in the fixed order `i < r < k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    I,
    R,
    K,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::I, Var::R, Var::K];

    fn index(self) -> usize {
        match self {
            Var::I => 0,
            Var::R => 1,
            Var::K => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::I => "i",
            Var::R => "r",
            Var::K => "k",
        }
    }
}

type Exp = [u32; 3];

/// A sparse polynomial in `(i, r, k)`. No zero coefficients are stored, so
/// structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Exp, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0, 0, 0], c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(v, 1, Rat::one())
    }

    /// `c * v^e`.
    pub fn monomial(v: Var, e: u32, c: Rat) -> Self {
        let mut exp = [0u32; 3];
        exp[v.index()] = e;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, exp: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Degree in one variable; 0 for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.index()]).max().unwrap_or(0)
    }

    /// True if only the given variables occur.
    pub fn uses_only(&self, allowed: &[Var]) -> bool {
        self.terms.keys().all(|e| {
            Var::ALL
                .iter()
                .all(|v| allowed.contains(v) || e[v.index()] == 0)
        })
    }

    /// The coefficient of `v^d`, a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: Var, d: u32) -> Poly {
        let idx = v.index();
        let mut out = Poly::zero();
        for (exp, c) in &self.terms {
            if exp[idx] == d {
                let mut e = *exp;
                e[idx] = 0;
                out.insert_term(e, c.clone());
            }
        }
        out
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Rat {
        self.terms.get(&[0, 0, 0]).cloned().unwrap_or_else(Rat::zero)
    }

    /// Full evaluation at rational points `(i, r, k)`.
    pub fn eval(&self, i: &Rat, r: &Rat, k: &Rat) -> Rat {
        let vals = [i, r, k];
        let mut acc = Rat::zero();
        for (exp, c) in &self.terms {
            let mut t = c.clone();
            for (vi, v) in vals.iter().enumerate() {
                if exp[vi] > 0 {
                    t *= v.pow(exp[vi]);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes a polynomial for one variable; the other variables pass
    /// through. Substitution is a ring homomorphism, so this commutes with
    /// addition and multiplication.
    pub fn substitute(&self, v: Var, value: &Poly) -> Poly {
        let idx = v.index();
        let mut by_power: BTreeMap<u32, Poly> = BTreeMap::new();
        for (exp, c) in &self.terms {
            let mut e = *exp;
            let d = e[idx];
            e[idx] = 0;
            by_power
                .entry(d)
                .or_insert_with(Poly::zero)
                .insert_term(e, c.clone());
        }
        let mut out = Poly::zero();
        let mut pw = Poly::one();
        let mut pw_deg = 0u32;
        for (d, coeff) in by_power {
            while pw_deg < d {
                pw = &pw * value;
                pw_deg += 1;
            }
            out = &out + &(&coeff * &pw);
        }
        out
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (exp, c) in &rhs.terms {
            out.insert_term(*exp, c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (exp, c) in &rhs.terms {
            out.insert_term(*exp, -c);
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.insert_term(exp, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident/$method:ident/$assign_trait:ident/$assign_method:ident),*) => {$(
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly { (&self).$method(&rhs) }
        }
        impl $assign_trait<&Poly> for Poly {
            fn $assign_method(&mut self, rhs: &Poly) {
                *self = (&*self).$method(rhs);
            }
        }
    )*};
}

owned_ops!(
    Add / add / AddAssign / add_assign,
    Sub / sub / SubAssign / sub_assign,
    Mul / mul / MulAssign / mul_assign
);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    /// Canonical text form: terms in descending exponent order (`i` before
    /// `r` before `k`), each as `coeff*mono` with explicit signs, e.g.
    /// `-3/4*k^2 + 19/12*k + 13/24`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (exp, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = Var::ALL
                .iter()
                .filter(|v| exp[v.index()] > 0)
                .map(|v| {
                    if exp[v.index()] == 1 {
                        v.name().to_string()
                    } else {
                        format!("{}^{}", v.name(), exp[v.index()])
                    }
                })
                .collect();
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == Rat::one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sign of a univariate polynomial in `k` for all large `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

/// Result of [`asymptotic_sign`]: the eventual sign together with an explicit
/// rational bound past which the sign is locked in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticSign {
    pub sign: Sign,
    /// Cauchy bound `1 + max |a_i / a_d|`: `sign(f(k))` equals `sign` for all
    /// `k > bound`. Zero for the zero polynomial.
    pub bound: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("asymptotic_sign expects a polynomial in k only; found variable `{variable}`")]
pub struct NotUnivariateInK {
    pub variable: &'static str,
}

/// Sign of the leading coefficient of `f`, with a Cauchy bound witnessing
/// every `k >> 0` claim. Rejects polynomials mentioning `i` or `r`.
pub fn asymptotic_sign(f: &Poly) -> Result<AsymptoticSign, NotUnivariateInK> {
    for v in [Var::I, Var::R] {
        if f.degree_in(v) > 0 {
            return Err(NotUnivariateInK { variable: v.name() });
        }
    }
    if f.is_zero() {
        return Ok(AsymptoticSign {
            sign: Sign::Zero,
            bound: Rat::zero(),
        });
    }
    let d = f.degree_in(Var::K);
    let lead = f.coeff_of(Var::K, d).constant_term();
    let mut max_ratio = Rat::zero();
    for e in 0..d {
        let c = f.coeff_of(Var::K, e).constant_term();
        let ratio = (&c / &lead).abs();
        if ratio > max_ratio {
            max_ratio = ratio;
        }
    }
    Ok(AsymptoticSign {
        sign: if lead.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        },
        bound: Rat::one() + max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn k() -> Poly {
        Poly::var(Var::K)
    }

    #[test]
    fn canonical_form_drops_zero_coefficients() {
        let p = &k() - &k();
        assert!(p.is_zero());
        assert_eq!(p, Poly::zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn display_canonical() {
        let p = &(&Poly::monomial(Var::K, 2, rat(-3, 4)) + &Poly::monomial(Var::K, 1, rat(19, 12)))
            + &Poly::constant(rat(13, 24));
        assert_eq!(p.to_string(), "-3/4*k^2 + 19/12*k + 13/24");
        assert_eq!(Poly::zero().to_string(), "0");
        let q = &Poly::monomial(Var::R, 1, rat(1, 1)) * &Poly::monomial(Var::K, 2, rat(1, 1));
        assert_eq!(q.to_string(), "r*k^2");
    }

    #[test]
    fn eval_commutes_with_ring_ops() {
        let p = &(&Poly::var(Var::I) + &Poly::var(Var::R)) * &Poly::var(Var::K);
        let q = &Poly::monomial(Var::I, 2, rat(1, 3)) - &Poly::constant(rat(5, 1));
        let (i, r, kv) = (rat(2, 3), rat(-1, 2), rat(7, 5));
        let lhs = (&p * &q).eval(&i, &r, &kv);
        let rhs = p.eval(&i, &r, &kv) * q.eval(&i, &r, &kv);
        assert_eq!(lhs, rhs);
        let lhs = (&p + &q).eval(&i, &r, &kv);
        let rhs = p.eval(&i, &r, &kv) + q.eval(&i, &r, &kv);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_homomorphism() {
        let p = &Poly::monomial(Var::I, 3, rat(2, 1)) + &Poly::var(Var::K);
        let q = &Poly::var(Var::I) * &Poly::var(Var::R);
        let val = &Poly::var(Var::R) + &Poly::constant(rat(1, 1));
        let lhs = (&p * &q).substitute(Var::I, &val);
        let rhs = &p.substitute(Var::I, &val) * &q.substitute(Var::I, &val);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn coeff_extraction() {
        // r^2 k + 2 r^2 + r k
        let p = &(&(&Poly::monomial(Var::R, 2, rat(1, 1)) * &k())
            + &Poly::monomial(Var::R, 2, rat(2, 1)))
            + &(&Poly::var(Var::R) * &k());
        let c2 = p.coeff_of(Var::R, 2);
        assert_eq!(c2, &k() + &Poly::constant(rat(2, 1)));
        assert_eq!(p.coeff_of(Var::R, 3), Poly::zero());
        assert_eq!(p.degree_in(Var::R), 2);
        assert_eq!(p.degree_in(Var::I), 0);
    }

    #[test]
    fn asymptotic_sign_examples() {
        // f = 0
        let s = asymptotic_sign(&Poly::zero()).unwrap();
        assert_eq!(s.sign, Sign::Zero);
        assert_eq!(s.bound, Rat::zero());

        // f = k^3 - 10^6 k^2
        let f = &Poly::monomial(Var::K, 3, rat(1, 1)) - &Poly::monomial(Var::K, 2, rat(1_000_000, 1));
        let s = asymptotic_sign(&f).unwrap();
        assert_eq!(s.sign, Sign::Positive);
        assert_eq!(s.bound, rat(1_000_001, 1));

        // f = -k^2/24 + k: bound 25, f(25) < 0, f(23) > 0
        let f = &Poly::monomial(Var::K, 2, rat(-1, 24)) + &k();
        let s = asymptotic_sign(&f).unwrap();
        assert_eq!(s.sign, Sign::Negative);
        assert_eq!(s.bound, rat(25, 1));
        assert!(f.eval(&Rat::zero(), &Rat::zero(), &rat(25, 1)).is_negative());
        assert!(f.eval(&Rat::zero(), &Rat::zero(), &rat(23, 1)).is_positive());
    }

    #[test]
    fn asymptotic_sign_rejects_other_variables() {
        let f = Poly::var(Var::R);
        assert!(asymptotic_sign(&f).is_err());
        let f = Poly::var(Var::I);
        assert_eq!(asymptotic_sign(&f).unwrap_err().variable, "i");
    }
}
