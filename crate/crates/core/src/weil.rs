//! Frobenius matrices of good-reduction components.
//!
//! A [`WeilMatrix`] is an integer matrix of even size `2g` acting as the q-power
//! Frobenius on H^1 of a smooth proper curve (or abelian variety) over F_q,
//! `q = p^f`. The exact checks are the determinant, the functional equation of
//! the characteristic polynomial, and that neither 1 nor q is an eigenvalue.
//! The archimedean condition (all eigenvalues of modulus sqrt(q)) is checked
//! exactly for 2x2 blocks and numerically otherwise.

use std::fmt;

use std::f64::consts::PI;

use num::complex::Complex64;
use num::{BigInt, One, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::poly::squarefree_part;
use crate::linalg::{big, char_poly, int, is_prime, LinalgError, QMatrix, Rational};

pub const DEFAULT_PRIME_BOUND: u64 = 10_000;

/// Relative tolerance for the numerical eigenvalue-modulus check.
pub const MODULUS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeilCondition {
    NotIntegral,
    Determinant,
    FunctionalEquation,
    QEigenvalue,
    OneEigenvalue,
    Archimedean,
}

impl fmt::Display for WeilCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeilCondition::NotIntegral => "entries not integral",
            WeilCondition::Determinant => "det ≠ q^g",
            WeilCondition::FunctionalEquation => "characteristic polynomial fails the functional equation",
            WeilCondition::QEigenvalue => "q is an eigenvalue",
            WeilCondition::OneEigenvalue => "1 is an eigenvalue",
            WeilCondition::Archimedean => "eigenvalue modulus ≠ √q (trace² > 4q)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeilError {
    #[error("Frobenius matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("Frobenius matrix has odd size {0}")]
    OddSize(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("residue degree must be at least 1")]
    ZeroDegree,
    #[error("mixed q: expected {expected}, found {found}")]
    MixedQ { expected: BigInt, found: BigInt },
    #[error("Weil validation failed: {}", join(.0))]
    Rejected(Vec<WeilCondition>),
    #[error("point counting needs an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("singular curve: discriminant vanishes mod {0}")]
    Singular(u64),
    #[error("prime {p} exceeds the point-counting bound {bound}")]
    PrimeOverBound { p: u64, bound: u64 },
}

fn join(conds: &[WeilCondition]) -> String {
    conds
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<LinalgError> for WeilError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NotSquare { rows, cols } => WeilError::NotSquare { rows, cols },
            LinalgError::NotPrime(p) => WeilError::NotPrime(p),
            other => unreachable!("unexpected linear algebra failure: {other}"),
        }
    }
}

/// How the archimedean condition was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArchimedeanStatus {
    /// Certified in exact arithmetic (2x2 trace bound, or block sums of such).
    Exact,
    /// Numerically within [`MODULUS_TOLERANCE`].
    Approximate,
    /// Numerically outside tolerance. Only flagged for sizes above 2.
    Violated,
}

impl fmt::Display for ArchimedeanStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArchimedeanStatus::Exact => "exactly verified",
            ArchimedeanStatus::Approximate => "approximately verified",
            ArchimedeanStatus::Violated => "violated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeilMatrix {
    p: u64,
    f: u32,
    matrix: QMatrix,
    archimedean: ArchimedeanStatus,
}

impl WeilMatrix {
    /// The 0x0 block (genus 0).
    pub fn empty(p: u64, f: u32) -> Result<Self, WeilError> {
        validate_weil(&QMatrix::zeros(0, 0), p, f)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> BigInt {
        num::pow(BigInt::from(self.p), self.f as usize)
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn genus(&self) -> usize {
        self.size() / 2
    }

    /// Dimension of the Hodge filtration step, equal to the genus.
    pub fn fil_dim(&self) -> usize {
        self.genus()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn archimedean(&self) -> ArchimedeanStatus {
        self.archimedean
    }
}

fn check_q(p: u64, f: u32) -> Result<BigInt, WeilError> {
    if !is_prime(p) {
        return Err(WeilError::NotPrime(p));
    }
    if f == 0 {
        return Err(WeilError::ZeroDegree);
    }
    Ok(num::pow(BigInt::from(p), f as usize))
}

/// Exact conditions; returns the failed ones.
fn exact_failures(m: &QMatrix, q: &BigInt) -> Result<Vec<WeilCondition>, WeilError> {
    if !m.is_square() {
        return Err(WeilError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n % 2 == 1 {
        return Err(WeilError::OddSize(n));
    }
    let g = n / 2;
    let qr = big(q.clone());
    let mut failed = Vec::new();
    if !m.is_integral() {
        failed.push(WeilCondition::NotIntegral);
    }
    if m.det()? != big(num::pow(q.clone(), g)) {
        failed.push(WeilCondition::Determinant);
    }
    // a_i = q^(g-i) a_(2g-i) for the ascending coefficients a_0..a_2g.
    let cp = char_poly(m)?;
    let functional = (0..=g).all(|i| cp[i] == big(num::pow(q.clone(), g - i)) * &cp[n - i]);
    if !functional {
        failed.push(WeilCondition::FunctionalEquation);
    }
    let shifted = |s: Rational| m - &QMatrix::scalar(n, s);
    if shifted(qr).det()?.is_zero() {
        failed.push(WeilCondition::QEigenvalue);
    }
    if shifted(Rational::one()).det()?.is_zero() {
        failed.push(WeilCondition::OneEigenvalue);
    }
    Ok(failed)
}

/// Simple roots of a monic real polynomial (ascending coefficients) by
/// Aberth-Ehrlich iteration, started on the circle of radius `r`.
fn aberth_roots(c: &[f64], r: f64) -> Vec<Complex64> {
    let d = c.len() - 1;
    let eval = |z: Complex64| {
        let (mut v, mut dv) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &a in c.iter().rev() {
            dv = dv * z + v;
            v = v * z + a;
        }
        (v, dv)
    };
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(r, (2.0 * PI * k as f64 + 0.7) / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (v, dv) = eval(z[k]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Numerical modulus check on the roots of the squarefree part of the
/// characteristic polynomial.
fn approximate_moduli(m: &QMatrix, q: &BigInt) -> ArchimedeanStatus {
    let cp = char_poly(m).expect("square by construction");
    let sf = squarefree_part(&cp);
    if sf.len() <= 1 {
        return ArchimedeanStatus::Approximate;
    }
    let coeffs: Vec<f64> = sf.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let target = q.to_f64().unwrap_or(f64::INFINITY).sqrt();
    let ok = aberth_roots(&coeffs, target)
        .iter()
        .all(|z| ((z.norm() - target) / target).abs() <= MODULUS_TOLERANCE);
    if ok {
        ArchimedeanStatus::Approximate
    } else {
        ArchimedeanStatus::Violated
    }
}

/// Validates an integer Frobenius matrix for `q = p^f`.
///
/// For 2x2 input the archimedean condition is the exact bound `trace² <= 4q`
/// and its failure rejects the matrix; for larger input it is only reported
/// through [`WeilMatrix::archimedean`].
pub fn validate_weil(m: &QMatrix, p: u64, f: u32) -> Result<WeilMatrix, WeilError> {
    let q = check_q(p, f)?;
    let mut failed = exact_failures(m, &q)?;
    let archimedean = match m.rows() {
        0 => ArchimedeanStatus::Exact,
        2 => {
            let tr = m.get(0, 0) + m.get(1, 1);
            if &tr * &tr <= big(q.clone() * 4) {
                ArchimedeanStatus::Exact
            } else {
                failed.push(WeilCondition::Archimedean);
                ArchimedeanStatus::Violated
            }
        }
        _ => approximate_moduli(m, &q),
    };
    if !failed.is_empty() {
        return Err(WeilError::Rejected(failed));
    }
    Ok(WeilMatrix {
        p,
        f,
        matrix: m.clone(),
        archimedean,
    })
}

/// Block-diagonal sum. Every block must share `q = p^f`; the exact conditions
/// are re-checked on the sum.
pub fn direct_sum(p: u64, f: u32, blocks: &[WeilMatrix]) -> Result<WeilMatrix, WeilError> {
    let q = check_q(p, f)?;
    for b in blocks {
        if b.q() != q {
            return Err(WeilError::MixedQ {
                expected: q,
                found: b.q(),
            });
        }
    }
    let refs: Vec<&QMatrix> = blocks.iter().map(|b| &b.matrix).collect();
    let matrix = QMatrix::block_diag(&refs);
    let failed = exact_failures(&matrix, &q)?;
    if !failed.is_empty() {
        return Err(WeilError::Rejected(failed));
    }
    let archimedean = blocks
        .iter()
        .map(|b| b.archimedean)
        .fold(ArchimedeanStatus::Exact, |acc, s| match (acc, s) {
            (ArchimedeanStatus::Violated, _) | (_, ArchimedeanStatus::Violated) => ArchimedeanStatus::Violated,
            (ArchimedeanStatus::Approximate, _) | (_, ArchimedeanStatus::Approximate) => {
                ArchimedeanStatus::Approximate
            }
            _ => ArchimedeanStatus::Exact,
        });
    Ok(WeilMatrix {
        p,
        f,
        matrix,
        archimedean,
    })
}

/// Short Weierstrass curve `y^2 = x^3 + a4 x + a6` over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EllipticCurveSpec {
    p: u64,
    a4: u64,
    a6: u64,
}

impl EllipticCurveSpec {
    /// Coefficients are reduced into `[0, p)`.
    pub fn new(p: u64, a4: i64, a6: i64) -> Result<Self, WeilError> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(WeilError::NotOddPrime(p));
        }
        let red = |x: i64| x.rem_euclid(p as i64) as u64;
        let (a4, a6) = (red(a4), red(a6));
        let pp = u128::from(p);
        let (a, b) = (u128::from(a4), u128::from(a6));
        // -16 (4 a^3 + 27 b^2); 16 is a unit for odd p.
        let disc = (4 * (a * a % pp * a % pp) + 27 * (b * b % pp)) % pp;
        if disc == 0 {
            return Err(WeilError::Singular(p));
        }
        Ok(EllipticCurveSpec { p, a4, a6 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a4(&self) -> u64 {
        self.a4
    }

    pub fn a6(&self) -> u64 {
        self.a6
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PointCount {
    /// `#E(F_p)`, including the point at infinity.
    pub points: u64,
    /// `p + 1 - points`.
    pub trace: i64,
}

fn pow_mod(mut b: u128, mut e: u64, m: u128) -> u128 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

pub fn count_points(e: &EllipticCurveSpec) -> Result<PointCount, WeilError> {
    count_points_bounded(e, DEFAULT_PRIME_BOUND)
}

/// Naive count: for each x, Euler's criterion on `x^3 + a4 x + a6`.
pub fn count_points_bounded(e: &EllipticCurveSpec, bound: u64) -> Result<PointCount, WeilError> {
    if e.p > bound {
        return Err(WeilError::PrimeOverBound { p: e.p, bound });
    }
    let p = u128::from(e.p);
    let (a, b) = (u128::from(e.a4), u128::from(e.a6));
    let half = (e.p - 1) / 2;
    let mut points = 1u64;
    for x in 0..p {
        let rhs = (x * x % p * x + a * x + b) % p;
        if rhs == 0 {
            points += 1;
        } else if pow_mod(rhs, half, p) == 1 {
            points += 2;
        }
    }
    Ok(PointCount {
        points,
        trace: e.p as i64 + 1 - points as i64,
    })
}

pub fn frobenius_of_elliptic(e: &EllipticCurveSpec) -> Result<WeilMatrix, WeilError> {
    frobenius_of_elliptic_bounded(e, DEFAULT_PRIME_BOUND)
}

/// Companion matrix `[[0, -p], [1, a]]` of `T^2 - a T + p`.
pub fn frobenius_of_elliptic_bounded(e: &EllipticCurveSpec, bound: u64) -> Result<WeilMatrix, WeilError> {
    let count = count_points_bounded(e, bound)?;
    let m = QMatrix::from_rows(vec![
        vec![int(0), int(-(e.p as i64))],
        vec![int(1), int(count.trace)],
    ])
    .expect("2x2 literal");
    validate_weil(&m, e.p, 1)
}

/// Whether `trace^2 <= 4p`, in integers.
pub fn within_hasse_bound(trace: i64, p: u64) -> bool {
    let t = BigInt::from(trace);
    &t * &t <= BigInt::from(p) * 4
}
