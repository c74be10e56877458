//! Formal Laurent calculus on an annulus.
//!
//! Functions are Laurent polynomials in a coordinate `z`; 1-forms are
//! `(sum a_n z^n) dz`. Integration produces a [`LogFunction`]: a Laurent
//! polynomial plus a multiple of the formal symbol `log z`, with the additive
//! constant left unrepresented (primitives are only defined modulo constants).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigInt, Zero};

use crate::linalg::{big, Rational};

fn insert(map: &mut BTreeMap<i64, Rational>, n: i64, c: Rational) {
    let entry = map.entry(n).or_insert_with(Rational::zero);
    *entry += c;
    if entry.is_zero() {
        map.remove(&n);
    }
}

/// Finite-support Laurent polynomial `sum a_n z^n`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(n: i64, c: Rational) -> Self {
        Self::from_terms([(n, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (n, c) in terms {
            insert(&mut coeffs, n, c);
        }
        LaurentPoly { coeffs }
    }

    pub fn coeff(&self, n: i64) -> Rational {
        self.coeffs.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(&n, c)| (n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.terms().map(|(n, c)| (n, c * s)))
    }

    /// Exact differential `df`.
    pub fn d(&self) -> LaurentForm {
        LaurentForm(Self::from_terms(
            self.terms()
                .filter(|&(n, _)| n != 0)
                .map(|(n, c)| (n - 1, c * big(BigInt::from(n)))),
        ))
    }

    /// Copy with the constant term removed.
    pub fn without_constant(&self) -> Self {
        Self::from_terms(self.terms().filter(|&(n, _)| n != 0).map(|(n, c)| (n, c.clone())))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            insert(&mut out.coeffs, n, c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(n, c)| (n, -c)))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{n}")?,
            }
        }
        Ok(())
    }
}

/// The 1-form `(sum a_n z^n) dz`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentForm(pub LaurentPoly);

impl LaurentForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `dz / z`.
    pub fn dlog() -> Self {
        LaurentForm(LaurentPoly::monomial(-1, Rational::from_integer(1.into())))
    }

    pub fn coefficients(&self) -> &LaurentPoly {
        &self.0
    }

    /// Coefficient of `dz / z`.
    pub fn residue(&self) -> Rational {
        self.0.coeff(-1)
    }

    /// Primitive: `a_n z^(n+1) / (n+1)` for `n != -1`, and `a_-1 log z`.
    pub fn integrate(&self) -> LogFunction {
        LogFunction {
            poly: LaurentPoly::from_terms(
                self.0
                    .terms()
                    .filter(|&(n, _)| n != -1)
                    .map(|(n, c)| (n + 1, c / big(BigInt::from(n + 1)))),
            ),
            log_coeff: self.residue(),
        }
    }
}

impl Add for &LaurentForm {
    type Output = LaurentForm;

    fn add(self, rhs: &LaurentForm) -> LaurentForm {
        LaurentForm(&self.0 + &rhs.0)
    }
}

impl Sub for &LaurentForm {
    type Output = LaurentForm;

    fn sub(self, rhs: &LaurentForm) -> LaurentForm {
        LaurentForm(&self.0 - &rhs.0)
    }
}

impl fmt::Display for LaurentForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dz", self.0)
    }
}

/// `poly + log_coeff * log z`, modulo constants. `poly` never carries a
/// constant term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LogFunction {
    poly: LaurentPoly,
    log_coeff: Rational,
}

impl LogFunction {
    pub fn new(poly: LaurentPoly, log_coeff: Rational) -> Self {
        LogFunction {
            poly: poly.without_constant(),
            log_coeff,
        }
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn log_coeff(&self) -> &Rational {
        &self.log_coeff
    }

    /// No log term and no nonconstant part, i.e. zero modulo constants.
    pub fn is_constant(&self) -> bool {
        self.poly.is_zero() && self.log_coeff.is_zero()
    }

    pub fn d(&self) -> LaurentForm {
        let mut form = self.poly.d();
        form.0 = &form.0 + &LaurentPoly::monomial(-1, self.log_coeff.clone());
        form
    }
}

impl Add for &LogFunction {
    type Output = LogFunction;

    fn add(self, rhs: &LogFunction) -> LogFunction {
        LogFunction::new(&self.poly + &rhs.poly, &self.log_coeff + &rhs.log_coeff)
    }
}

impl Sub for &LogFunction {
    type Output = LogFunction;

    fn sub(self, rhs: &LogFunction) -> LogFunction {
        LogFunction::new(&self.poly - &rhs.poly, &self.log_coeff - &rhs.log_coeff)
    }
}

impl fmt::Display for LogFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({}) log z", self.poly, self.log_coeff)
    }
}

/// Whether `wa - wb = d(fe)` coefficientwise on the overlap annulus.
pub fn check_hypercocycle(wa: &LaurentForm, wb: &LaurentForm, fe: &LaurentPoly) -> bool {
    &(wa - wb) - &fe.d() == LaurentForm::zero()
}

/// Result of [`splitting_correction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    pub value: LogFunction,
    /// True when `value` is constant: no log term and no nonconstant part.
    pub constant: bool,
}

/// `fe - (sa - sb)` for primitives `sa`, `sb` of the two local forms. When
/// `wa - wb = d(fe)` the result is constant; anything else is flagged through
/// [`Correction::constant`].
pub fn splitting_correction(fe: &LaurentPoly, sa: &LogFunction, sb: &LogFunction) -> Correction {
    let value = &LogFunction::new(fe.clone(), Rational::zero()) - &(sa - sb);
    let constant = value.is_constant();
    Correction { value, constant }
}
