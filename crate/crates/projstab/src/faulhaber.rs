//! Closed forms for power sums over the weight index.
//!
//! `faulhaber(p)` is the polynomial `F_p` with `F_p(n) = sum_{i=0}^{n} i^p`
//! for every integer `n >= 0`, and `sum_over_i` closes `sum_{i=0}^{r} q(i,r,k)`
//! for a polynomial summand. These close the eigenvalue sums in the weight
//! polynomial exactly.

use std::sync::Mutex;
use std::sync::OnceLock;

use crate::poly::{Poly, Var};
use crate::rat::Rat;

/// Binomial coefficient as a `Rat`. Small arguments only.
fn binom(n: u32, k: u32) -> Rat {
    let mut num = Rat::one();
    for j in 0..k {
        num *= Rat::from_int(i64::from(n - j));
        num /= Rat::from_int(i64::from(j + 1));
    }
    num
}

fn cache() -> &'static Mutex<Vec<Poly>> {
    static CACHE: OnceLock<Mutex<Vec<Poly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// The closed-form power-sum polynomial `F_p(r) = sum_{i=0}^{r} i^p`.
///
/// Computed once per exponent by the Pascal recurrence
/// `(r+1)^{p+1} = sum_{j=0}^{p} C(p+1, j) F_j(r)` and memoized. Degree is
/// `p + 1` (degree 1 for `p = 0`).
pub fn faulhaber(p: u32) -> Poly {
    {
        let cache = cache().lock().unwrap();
        if let Some(f) = cache.get(p as usize) {
            return f.clone();
        }
    }
    let mut known: Vec<Poly> = cache().lock().unwrap().clone();
    let r_plus_1 = &Poly::var(Var::R) + &Poly::one();
    while known.len() <= p as usize {
        let q = known.len() as u32;
        let mut rhs = r_plus_1.pow(q + 1);
        for (j, fj) in known.iter().enumerate() {
            rhs = &rhs - &fj.scale(&binom(q + 1, j as u32));
        }
        known.push(rhs.scale(&Rat::new(1, i64::from(q) + 1)));
    }
    let mut cache = cache().lock().unwrap();
    if cache.len() < known.len() {
        *cache = known.clone();
    }
    known[p as usize].clone()
}

/// Closes `sum_{i=0}^{r} q(i, r, k)` exactly: each power `i^p` in the summand
/// is replaced by `faulhaber(p)`; coefficients in `r` and `k` pass through.
pub fn sum_over_i(q: &Poly) -> Poly {
    let mut out = Poly::zero();
    for d in 0..=q.degree_in(Var::I) {
        let coeff = q.coeff_of(Var::I, d);
        if !coeff.is_zero() {
            out = &out + &(&coeff * &faulhaber(d));
        }
    }
    out
}
