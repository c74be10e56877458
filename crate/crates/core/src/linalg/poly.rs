//! Characteristic polynomials and Newton polygons.
//!
//! Polynomials are coefficient vectors in ascending degree: `[a0, a1, .., an]`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Integer, One, Zero};

use super::{big, padic_valuation, LinalgError, QMatrix, Rational, Valuation};

/// Coefficients of `det(T*I - m)`, ascending, monic.
///
/// The matrix is first split into the diagonal blocks of a simultaneous
/// row/column permutation (connected components of its nonzero pattern);
/// each block goes through the division-free Berkowitz recursion over the
/// integers after clearing denominators.
pub fn char_poly(m: &QMatrix) -> Result<Vec<Rational>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let mut result = vec![Rational::one()];
    for comp in components(m) {
        let block = permuted_block(m, &comp);
        result = poly_mul(&result, &char_poly_block(&block));
    }
    Ok(result)
}

/// Index classes of the graph linking i and j whenever m[i][j] or m[j][i] is nonzero.
fn components(m: &QMatrix) -> Vec<Vec<usize>> {
    let n = m.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && !m.get(i, j).is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

fn permuted_block(m: &QMatrix, idx: &[usize]) -> QMatrix {
    let k = idx.len();
    let mut out = QMatrix::zeros(k, k);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out.set(a, b, m.get(i, j).clone());
        }
    }
    out
}

fn char_poly_block(m: &QMatrix) -> Vec<Rational> {
    let n = m.rows();
    let d = m
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.numer() * (&d / x.denom()))
                .collect()
        })
        .collect();
    // Berkowitz yields descending coefficients of det(T*I - a).
    let desc = berkowitz(&a);
    // charpoly(a/d)(T) = d^-n charpoly(a)(d T): coefficient of T^i is c_i / d^(n-i).
    let mut asc = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let c = desc[n - i].clone();
        asc.push(Rational::new(c, num::pow(d.clone(), n - i)));
    }
    asc
}

fn berkowitz(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    if n == 1 {
        return vec![BigInt::one(), -a[0][0].clone()];
    }
    let r: Vec<BigInt> = a[0][1..].to_vec();
    let c: Vec<BigInt> = a[1..].iter().map(|row| row[0].clone()).collect();
    let sub: Vec<Vec<BigInt>> = a[1..].iter().map(|row| row[1..].to_vec()).collect();

    // Toeplitz column: 1, -a00, -R C, -R A C, ..., -R A^(n-2) C
    let mut col = vec![BigInt::one(), -a[0][0].clone()];
    let mut v = c;
    for step in 0..n - 1 {
        let rv = r.iter().zip(&v).fold(BigInt::zero(), |acc, (x, y)| acc + x * y);
        col.push(-rv);
        if step + 1 < n - 1 {
            v = sub
                .iter()
                .map(|row| row.iter().zip(&v).fold(BigInt::zero(), |acc, (x, y)| acc + x * y))
                .collect();
        }
    }
    let inner = berkowitz(&sub);
    (0..=n)
        .map(|i| {
            (0..n)
                .filter(|&j| j <= i)
                .fold(BigInt::zero(), |acc, j| acc + &col[i - j] * &inner[j])
        })
        .collect()
}

pub(crate) fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    out
}

fn trim(mut a: Vec<Rational>) -> Vec<Rational> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

/// Quotient and remainder of polynomial division; `b` must be nonzero.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead = b.last().expect("division by zero polynomial").clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let coef = r.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &coef * y;
        }
        q[shift] = coef;
        r = trim(r);
    }
    (q, r)
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = poly_divmod(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        a.iter_mut().for_each(|x| *x = &*x / &lead);
    }
    a
}

/// The product of the distinct monic irreducible factors, `f / gcd(f, f')`.
pub(crate) fn squarefree_part(f: &[Rational]) -> Vec<Rational> {
    let f = trim(f.to_vec());
    if f.len() <= 1 {
        return f;
    }
    let df: Vec<Rational> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * big(BigInt::from(i)))
        .collect();
    let g = poly_gcd(&f, &df);
    let (q, _) = poly_divmod(&f, &g);
    let lead = q.last().unwrap().clone();
    q.into_iter().map(|x| x / &lead).collect()
}

/// Evaluates a polynomial at a square matrix (Horner).
pub fn poly_eval_matrix(coeffs: &[Rational], m: &QMatrix) -> Result<QMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut acc = QMatrix::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = &(&acc * m) + &QMatrix::scalar(n, c.clone());
    }
    Ok(acc)
}

/// Slopes of a Newton polygon with multiplicities, ascending. The slope
/// attached to an eigenvalue is its valuation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NewtonPolygon {
    slopes: Vec<(Rational, usize)>,
}

impl NewtonPolygon {
    /// Sorts, merges equal slopes and drops empty segments.
    pub fn from_slopes(slopes: impl IntoIterator<Item = (Rational, usize)>) -> Self {
        let mut merged: BTreeMap<Rational, usize> = BTreeMap::new();
        for (s, m) in slopes {
            if m > 0 {
                *merged.entry(s).or_default() += m;
            }
        }
        NewtonPolygon {
            slopes: merged.into_iter().collect(),
        }
    }

    pub fn slopes(&self) -> &[(Rational, usize)] {
        &self.slopes
    }

    pub fn dimension(&self) -> usize {
        self.slopes.iter().map(|(_, m)| m).sum()
    }

    /// Height of the right endpoint: sum of slope times multiplicity.
    pub fn total(&self) -> Rational {
        self.slopes
            .iter()
            .fold(Rational::zero(), |acc, (s, m)| acc + s * big(BigInt::from(*m)))
    }

    /// All slopes divided by `f`.
    pub fn normalized(&self, f: u32) -> Self {
        let d = big(BigInt::from(f));
        Self::from_slopes(self.slopes.iter().map(|(s, m)| (s / &d, *m)))
    }

    /// Whether the slope multiset is invariant under `s -> weight - s`.
    pub fn is_symmetric_about(&self, weight: &Rational) -> bool {
        let mirrored = Self::from_slopes(self.slopes.iter().map(|(s, m)| (weight - s, *m)));
        mirrored == *self
    }

    /// Height of the polygon (started at the origin) above abscissa `x`.
    pub fn value_at(&self, x: usize) -> Rational {
        let mut left = x;
        let mut acc = Rational::zero();
        for (s, m) in &self.slopes {
            let take = left.min(*m);
            acc += s * big(BigInt::from(take));
            left -= take;
            if left == 0 {
                break;
            }
        }
        acc
    }

    /// Whether this polygon lies on or above `other` with the same endpoints.
    pub fn lies_above(&self, other: &NewtonPolygon) -> bool {
        let n = self.dimension();
        n == other.dimension()
            && self.total() == other.total()
            && (0..=n).all(|x| self.value_at(x) >= other.value_at(x))
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (s, m)) in self.slopes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}:{m}")?;
        }
        write!(f, "}}")
    }
}

/// Newton polygon of a monic polynomial at `p`, from the lower convex hull
/// of the points `(i, v_p(a_i))`.
pub fn newton_polygon(coeffs: &[Rational], p: u64) -> Result<NewtonPolygon, LinalgError> {
    let coeffs = trim(coeffs.to_vec());
    let Some(lead) = coeffs.last() else {
        return Err(LinalgError::ZeroPolynomial);
    };
    if !lead.is_one() {
        return Err(LinalgError::NotMonic);
    }
    if coeffs[0].is_zero() {
        return Err(LinalgError::ZeroConstantTerm);
    }
    let mut points = Vec::new();
    for (i, a) in coeffs.iter().enumerate() {
        if let Valuation::Finite(v) = padic_valuation(a, p)? {
            points.push((i as i64, v));
        }
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    // A segment of hull slope s and length l carries l roots of valuation -s.
    Ok(NewtonPolygon::from_slopes(hull.windows(2).map(|w| {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        (
            -Rational::new(BigInt::from(dy), BigInt::from(dx)),
            dx as usize,
        )
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&QMatrix::zeros(2, 2)).unwrap(), ints(&[0, 0, 1]));
        assert_eq!(char_poly(&QMatrix::identity(2)).unwrap(), ints(&[1, -2, 1]));
        let m = QMatrix::from_i64(&[&[0, -5], &[1, 2]]);
        assert_eq!(char_poly(&m).unwrap(), ints(&[5, -2, 1]));
        assert_eq!(char_poly(&QMatrix::zeros(0, 0)).unwrap(), ints(&[1]));
    }

    #[test]
    fn char_poly_rational_entries() {
        // [[1/2, 1], [0, 1/3]]: (T - 1/2)(T - 1/3) = T^2 - 5/6 T + 1/6
        let m = QMatrix::from_rows(vec![vec![q(1, 2), int(1)], vec![int(0), q(1, 3)]]).unwrap();
        assert_eq!(char_poly(&m).unwrap(), vec![q(1, 6), q(-5, 6), int(1)]);
    }

    #[test]
    fn char_poly_3x3_dense() {
        // Expanded by hand: det(T I - m) for m = [[1,2,3],[4,5,6],[7,8,10]]
        // trace 16, principal 2x2 minors -3 - 11 + 2 = -12, det -3
        let m = QMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(char_poly(&m).unwrap(), ints(&[3, -12, -16, 1]));
    }

    #[test]
    fn char_poly_rejects_non_square() {
        assert!(char_poly(&QMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn newton_examples() {
        let np = newton_polygon(&ints(&[5, -6, 1]), 5).unwrap();
        assert_eq!(np.slopes(), &[(int(0), 1), (int(1), 1)]);
        let np = newton_polygon(&ints(&[5, 0, 1]), 5).unwrap();
        assert_eq!(np.slopes(), &[(q(1, 2), 2)]);
        for p in [2, 3, 7] {
            let np = newton_polygon(&ints(&[-1, 3, -3, 1]), p).unwrap();
            assert_eq!(np.slopes(), &[(int(0), 3)]);
        }
    }

    #[test]
    fn newton_errors() {
        assert_eq!(newton_polygon(&[], 5), Err(LinalgError::ZeroPolynomial));
        assert_eq!(newton_polygon(&ints(&[0, 0]), 5), Err(LinalgError::ZeroPolynomial));
        assert_eq!(newton_polygon(&ints(&[0, 1]), 5), Err(LinalgError::ZeroConstantTerm));
        assert_eq!(newton_polygon(&ints(&[1, 2]), 5), Err(LinalgError::NotMonic));
        assert_eq!(newton_polygon(&ints(&[1, 1]), 6), Err(LinalgError::NotPrime(6)));
    }

    #[test]
    fn newton_collinear_points_merge() {
        // (T - 5)^2 = T^2 - 10 T + 25 at p = 5: points (0,2),(1,1),(2,0)
        let np = newton_polygon(&ints(&[25, -10, 1]), 5).unwrap();
        assert_eq!(np.slopes(), &[(int(1), 2)]);
    }

    #[test]
    fn polygon_comparison() {
        let newton = NewtonPolygon::from_slopes([(q(1, 2), 2)]);
        let hodge = NewtonPolygon::from_slopes([(int(0), 1), (int(1), 1)]);
        assert!(newton.lies_above(&hodge));
        assert!(!hodge.lies_above(&newton));
        assert!(newton.value_at(1) > hodge.value_at(1));
        assert!(newton.is_symmetric_about(&int(1)));
        assert!(!NewtonPolygon::from_slopes([(int(0), 2)]).is_symmetric_about(&int(1)));
    }

    #[test]
    fn squarefree() {
        // (T-1)^2 (T+2) -> (T-1)(T+2) = T^2 + T - 2
        let f = poly_mul(&poly_mul(&ints(&[-1, 1]), &ints(&[-1, 1])), &ints(&[2, 1]));
        assert_eq!(squarefree_part(&f), ints(&[-2, 1, 1]));
    }
}
