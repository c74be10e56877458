use std::fmt;

use num::{BigInt, Integer, Zero};

use super::{LinalgError, Rational};

/// A p-adic valuation; zero has valuation `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn padic_valuation(x: &Rational, p: u64) -> Result<Valuation, LinalgError> {
    if !is_prime(p) {
        return Err(LinalgError::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let p = BigInt::from(p);
    Ok(Valuation::Finite(
        int_valuation(x.numer(), &p) - int_valuation(x.denom(), &p),
    ))
}
