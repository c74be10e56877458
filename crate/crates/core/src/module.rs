//! Graded (Phi, N)-modules.
//!
//! The underlying space is split into three blocks, in this order:
//! - weight 0, dimension `w0`: functions on the period lattice, `Hom(Γ, K)`.
//!   Phi acts as the identity.
//! - weight 1, dimension `w1`: H^1 of the good-reduction part. Phi is a
//!   [`WeilMatrix`].
//! - weight 2, dimension `w2`: H^1 of the torus. Phi acts as `q`.
//!
//! N is zero except on the block sending weight 2 to weight 0, where it is
//! the monodromy Gram matrix. With this shape `N^2 = 0` and `N Phi = q Phi N`.

use num::{BigInt, Zero};
use thiserror::Error;

use crate::linalg::{
    big, char_poly, newton_polygon, padic_valuation, LinalgError, NewtonPolygon, QMatrix, Rational,
    Valuation,
};
use crate::weil::WeilMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("residue degree must be at least 1")]
    ZeroDegree,
    #[error("gram must be square, got {rows}x{cols}")]
    GramNotSquare { rows: usize, cols: usize },
    #[error("gram has non-integer entries")]
    GramNotIntegral,
    #[error("gram not positive definite")]
    GramNotPositiveDefinite,
    #[error("q mismatch: module uses {module}, Frobenius block uses {block}")]
    QMismatch { module: BigInt, block: BigInt },
    #[error("inconsistent parts: {0}")]
    Shape(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dims {
    pub w0: usize,
    pub w1: usize,
    pub w2: usize,
}

impl Dims {
    pub fn total(&self) -> usize {
        self.w0 + self.w1 + self.w2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhiNModule {
    p: u64,
    f: u32,
    dims: Dims,
    phi: QMatrix,
    n: QMatrix,
    fil1_dim: usize,
    gram: QMatrix,
}

/// Builds the module from a monodromy Gram matrix and the Frobenius of the
/// good-reduction part.
pub fn assemble(p: u64, f: u32, gram: &QMatrix, w: &WeilMatrix) -> Result<PhiNModule, ModuleError> {
    if !crate::linalg::is_prime(p) {
        return Err(ModuleError::NotPrime(p));
    }
    if f == 0 {
        return Err(ModuleError::ZeroDegree);
    }
    if !gram.is_square() {
        return Err(ModuleError::GramNotSquare {
            rows: gram.rows(),
            cols: gram.cols(),
        });
    }
    if !gram.is_integral() {
        return Err(ModuleError::GramNotIntegral);
    }
    if !gram.is_positive_definite() {
        return Err(ModuleError::GramNotPositiveDefinite);
    }
    let q = num::pow(BigInt::from(p), f as usize);
    if w.q() != q {
        return Err(ModuleError::QMismatch {
            module: q,
            block: w.q(),
        });
    }
    let t = gram.rows();
    let dims = Dims {
        w0: t,
        w1: w.size(),
        w2: t,
    };
    let phi = QMatrix::block_diag(&[
        &QMatrix::identity(t),
        w.matrix(),
        &QMatrix::scalar(t, big(q)),
    ]);
    let mut n = QMatrix::zeros(dims.total(), dims.total());
    n.set_block(0, dims.w0 + dims.w1, gram);
    Ok(PhiNModule {
        p,
        f,
        dims,
        phi,
        n,
        fil1_dim: t + w.fil_dim(),
        gram: gram.clone(),
    })
}

impl PhiNModule {
    /// Reassembles a module from raw parts, checking shapes only. Used to
    /// round-trip serialized modules and to build deliberately broken ones.
    pub fn from_parts(
        p: u64,
        f: u32,
        dims: Dims,
        phi: QMatrix,
        n: QMatrix,
        fil1_dim: usize,
        gram: QMatrix,
    ) -> Result<Self, ModuleError> {
        let d = dims.total();
        let square = |m: &QMatrix, k: usize| m.rows() == k && m.cols() == k;
        if !square(&phi, d) || !square(&n, d) {
            return Err(ModuleError::Shape(format!("phi and n must be {d}x{d}")));
        }
        if !square(&gram, dims.w2) {
            return Err(ModuleError::Shape(format!("gram must be {0}x{0}", dims.w2)));
        }
        if fil1_dim > d {
            return Err(ModuleError::Shape(format!("fil1_dim {fil1_dim} exceeds dimension {d}")));
        }
        Ok(PhiNModule {
            p,
            f,
            dims,
            phi,
            n,
            fil1_dim,
            gram,
        })
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

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    pub fn phi(&self) -> &QMatrix {
        &self.phi
    }

    pub fn n(&self) -> &QMatrix {
        &self.n
    }

    pub fn fil1_dim(&self) -> usize {
        self.fil1_dim
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub n_squared_zero: bool,
    /// `N Phi = q Phi N`.
    pub commutation: bool,
    pub phi_invertible: bool,
    pub rank_n: usize,
    pub expected_rank_n: usize,
}

impl RelationReport {
    pub fn rank_ok(&self) -> bool {
        self.rank_n == self.expected_rank_n
    }

    pub fn all_pass(&self) -> bool {
        self.n_squared_zero && self.commutation && self.phi_invertible && self.rank_ok()
    }
}

pub fn verify_relations(m: &PhiNModule) -> RelationReport {
    let q = big(m.q());
    let n_phi = &m.n * &m.phi;
    let phi_n = (&m.phi * &m.n).scale(&q);
    RelationReport {
        n_squared_zero: (&m.n * &m.n).is_zero(),
        commutation: n_phi == phi_n,
        phi_invertible: !m.phi.det().map(|d| d.is_zero()).unwrap_or(true),
        rank_n: m.n.rank(),
        expected_rank_n: m.dims.w2,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeNewton {
    /// `v_p(det Phi) / f`.
    pub t_newton: Rational,
    /// Dimension of the first Hodge filtration step.
    pub t_hodge: usize,
    /// Newton slopes of Phi divided by `f`.
    pub newton: NewtonPolygon,
    /// Slope 0 with multiplicity `dim - fil1_dim`, slope 1 with multiplicity `fil1_dim`.
    pub hodge: NewtonPolygon,
    pub endpoints_equal: bool,
    pub newton_above_hodge: bool,
}

pub fn hodge_newton(m: &PhiNModule) -> Result<HodgeNewton, LinalgError> {
    let f = big(BigInt::from(m.f));
    let det = m.phi.det()?;
    let t_newton = match padic_valuation(&det, m.p)? {
        Valuation::Finite(v) => big(BigInt::from(v)) / &f,
        Valuation::Infinite => return Err(LinalgError::ZeroConstantTerm),
    };
    let newton = newton_polygon(&char_poly(&m.phi)?, m.p)?.normalized(m.f);
    let hodge = NewtonPolygon::from_slopes([
        (Rational::zero(), m.dim() - m.fil1_dim),
        (Rational::from_integer(1.into()), m.fil1_dim),
    ]);
    let endpoints_equal = t_newton == big(BigInt::from(m.fil1_dim)) && newton.total() == t_newton;
    let newton_above_hodge = newton.lies_above(&hodge);
    Ok(HodgeNewton {
        t_newton,
        t_hodge: m.fil1_dim,
        newton,
        hodge,
        endpoints_equal,
        newton_above_hodge,
    })
}

/// The monodromy pairing as a matrix between the module and its dual-side
/// counterpart: the Gram matrix on the weight-2 blocks, zero elsewhere.
pub fn monodromy_pairing_matrix(m: &PhiNModule) -> QMatrix {
    let d = m.dim();
    let off = m.dims.w0 + m.dims.w1;
    let mut out = QMatrix::zeros(d, d);
    out.set_block(off, off, &m.gram);
    out
}

/// Pairing between the module and its dual-side counterpart with blocks
/// `<w0, w2'> = <w1, w1'> = <w2, w0'> = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityPairing {
    pub matrix: QMatrix,
}

impl DualityPairing {
    pub fn for_module(m: &PhiNModule) -> Self {
        let Dims { w0, w1, w2 } = m.dims;
        let d = m.dim();
        let mut p = QMatrix::zeros(d, d);
        // dual side is ordered (w0', w1', w2') with w0' = w2, w2' = w0
        p.set_block(0, w2 + w1, &QMatrix::identity(w0));
        p.set_block(w0, w2, &QMatrix::identity(w1));
        p.set_block(w0 + w1, 0, &QMatrix::identity(w2));
        DualityPairing { matrix: p }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.matrix.det().map(|d| !d.is_zero()).unwrap_or(false)
    }
}

/// Monodromy on the dual-side module. The dual period lattice is identified
/// with the lattice itself, so this is N again.
pub fn dual_monodromy(m: &PhiNModule) -> QMatrix {
    m.n.clone()
}

/// `<a, N' b> = (a, b)_Mon` as an exact matrix identity.
pub fn verify_thm31(m: &PhiNModule) -> bool {
    let pairing = DualityPairing::for_module(m);
    &pairing.matrix * &dual_monodromy(m) == monodromy_pairing_matrix(m)
}

pub fn modules_equal(a: &PhiNModule, b: &PhiNModule) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::weil::{direct_sum, frobenius_of_elliptic, EllipticCurveSpec};

    fn elliptic(p: u64, a4: i64, a6: i64) -> WeilMatrix {
        frobenius_of_elliptic(&EllipticCurveSpec::new(p, a4, a6).unwrap()).unwrap()
    }

    fn tate() -> PhiNModule {
        assemble(5, 1, &QMatrix::from_i64(&[&[1]]), &WeilMatrix::empty(5, 1).unwrap()).unwrap()
    }

    #[test]
    fn assemble_tate() {
        let m = tate();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.phi(), &QMatrix::from_i64(&[&[1, 0], &[0, 5]]));
        assert_eq!(m.n(), &QMatrix::from_i64(&[&[0, 1], &[0, 0]]));
        assert_eq!(m.fil1_dim(), 1);
    }

    #[test]
    fn assemble_good_reduction() {
        let w = elliptic(5, 1, 0);
        let m = assemble(5, 1, &QMatrix::zeros(0, 0), &w).unwrap();
        assert_eq!(m.dim(), 2);
        assert!(m.n().is_zero());
        assert_eq!(m.phi(), w.matrix());
    }

    #[test]
    fn assemble_banana_with_elliptic() {
        // y^2 = x^3 + 2 over F_5 has trace 0
        let w = elliptic(5, 0, 2);
        let m = assemble(5, 1, &QMatrix::from_i64(&[&[2]]), &w).unwrap();
        assert_eq!(m.dim(), 4);
        let nonzero: Vec<_> = m.n().entries().iter().filter(|x| !x.is_zero()).collect();
        assert_eq!(nonzero, vec![&int(2)]);
        assert_eq!(m.n().get(0, 3), &int(2));
        assert_eq!(m.fil1_dim(), 2);
    }

    #[test]
    fn assemble_errors() {
        let empty = WeilMatrix::empty(5, 1).unwrap();
        assert_eq!(
            assemble(5, 1, &QMatrix::from_i64(&[&[0]]), &empty),
            Err(ModuleError::GramNotPositiveDefinite)
        );
        assert_eq!(
            assemble(5, 1, &QMatrix::from_i64(&[&[2, 1], &[0, 2]]), &empty),
            Err(ModuleError::GramNotPositiveDefinite)
        );
        let half = QMatrix::from_rows(vec![vec![Rational::new(1.into(), 2.into())]]).unwrap();
        assert_eq!(assemble(5, 1, &half, &empty), Err(ModuleError::GramNotIntegral));
        assert!(matches!(
            assemble(7, 1, &QMatrix::zeros(0, 0), &empty),
            Err(ModuleError::QMismatch { .. })
        ));
        assert!(matches!(
            assemble(5, 1, &QMatrix::zeros(1, 2), &empty),
            Err(ModuleError::GramNotSquare { .. })
        ));
        assert_eq!(assemble(4, 1, &QMatrix::zeros(0, 0), &empty), Err(ModuleError::NotPrime(4)));
    }

    #[test]
    fn relations_tate_pass() {
        let r = verify_relations(&tate());
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.rank_n, 1);
    }

    #[test]
    fn relations_good_reduction_trivial() {
        let m = assemble(5, 1, &QMatrix::zeros(0, 0), &elliptic(5, 1, 0)).unwrap();
        let r = verify_relations(&m);
        assert!(r.commutation && r.all_pass());
    }

    #[test]
    fn corrupted_phi_breaks_commutation() {
        let m = tate();
        let bad = PhiNModule::from_parts(
            5,
            1,
            m.dims(),
            QMatrix::identity(2),
            m.n().clone(),
            m.fil1_dim(),
            m.gram().clone(),
        )
        .unwrap();
        let r = verify_relations(&bad);
        assert!(!r.commutation);
        assert!(r.n_squared_zero && r.phi_invertible && r.rank_ok());
    }

    #[test]
    fn hodge_newton_examples() {
        let hn = hodge_newton(&tate()).unwrap();
        assert_eq!(hn.t_newton, int(1));
        assert_eq!(hn.t_hodge, 1);
        assert_eq!(hn.newton.slopes(), &[(int(0), 1), (int(1), 1)]);
        assert!(hn.endpoints_equal && hn.newton_above_hodge);

        let ss = assemble(5, 1, &QMatrix::zeros(0, 0), &elliptic(5, 0, 2)).unwrap();
        let hn = hodge_newton(&ss).unwrap();
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(hn.newton.slopes(), &[(half.clone(), 2)]);
        assert_eq!(hn.hodge.slopes(), &[(int(0), 1), (int(1), 1)]);
        assert!(hn.newton.value_at(1) > hn.hodge.value_at(1));
        assert!(hn.newton_above_hodge && hn.endpoints_equal);

        let empty = assemble(5, 1, &QMatrix::zeros(0, 0), &WeilMatrix::empty(5, 1).unwrap()).unwrap();
        let hn = hodge_newton(&empty).unwrap();
        assert_eq!(hn.t_newton, int(0));
        assert_eq!(hn.t_hodge, 0);
        assert!(hn.endpoints_equal);
    }

    #[test]
    fn hodge_newton_residue_degree_two() {
        // q = 25: T^2 + 25 is supersingular; slopes normalized by f = 2.
        let w = crate::weil::validate_weil(&QMatrix::from_i64(&[&[0, -25], &[1, 0]]), 5, 2).unwrap();
        let m = assemble(5, 2, &QMatrix::from_i64(&[&[3]]), &w).unwrap();
        assert!(verify_relations(&m).all_pass());
        let hn = hodge_newton(&m).unwrap();
        assert_eq!(hn.t_newton, int(2));
        assert_eq!(hn.t_hodge, 2);
        assert!(hn.newton.is_symmetric_about(&int(1)));
        assert!(hn.endpoints_equal && hn.newton_above_hodge);
    }

    #[test]
    fn pairing_matrices() {
        assert_eq!(monodromy_pairing_matrix(&tate()), QMatrix::from_i64(&[&[0, 0], &[0, 1]]));
        let good = assemble(5, 1, &QMatrix::zeros(0, 0), &elliptic(5, 1, 0)).unwrap();
        assert!(monodromy_pairing_matrix(&good).is_zero());
        let theta = assemble(5, 1, &QMatrix::from_i64(&[&[2, 1], &[1, 2]]), &WeilMatrix::empty(5, 1).unwrap()).unwrap();
        let mp = monodromy_pairing_matrix(&theta);
        assert_eq!(mp.submatrix(2, 4, 2, 4), QMatrix::from_i64(&[&[2, 1], &[1, 2]]));
        assert!(mp.submatrix(0, 2, 0, 4).is_zero());
    }

    #[test]
    fn duality_pairing_blocks() {
        let w = direct_sum(5, 1, &[elliptic(5, 1, 0)]).unwrap();
        let m = assemble(5, 1, &QMatrix::from_i64(&[&[2]]), &w).unwrap();
        let p = DualityPairing::for_module(&m);
        assert!(p.is_nondegenerate());
        let expected = QMatrix::from_i64(&[
            &[0, 0, 0, 1],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[1, 0, 0, 0],
        ]);
        assert_eq!(p.matrix, expected);
    }

    #[test]
    fn thm31_examples() {
        assert!(verify_thm31(&tate()));
        let good = assemble(5, 1, &QMatrix::zeros(0, 0), &elliptic(5, 1, 0)).unwrap();
        assert!(verify_thm31(&good));
        let theta = assemble(5, 1, &QMatrix::from_i64(&[&[2, 1], &[1, 2]]), &WeilMatrix::empty(5, 1).unwrap()).unwrap();
        assert!(verify_thm31(&theta));
    }

    #[test]
    fn equality() {
        let t = tate();
        assert!(modules_equal(&t, &t));
        let banana = assemble(5, 1, &QMatrix::from_i64(&[&[2]]), &WeilMatrix::empty(5, 1).unwrap()).unwrap();
        assert!(!modules_equal(&t, &banana));
    }

    #[test]
    fn from_parts_shape_errors() {
        let m = tate();
        assert!(PhiNModule::from_parts(5, 1, m.dims(), QMatrix::identity(3), m.n().clone(), 1, m.gram().clone()).is_err());
        assert!(PhiNModule::from_parts(5, 1, m.dims(), m.phi().clone(), m.n().clone(), 1, QMatrix::zeros(0, 0)).is_err());
        assert!(PhiNModule::from_parts(5, 1, m.dims(), m.phi().clone(), m.n().clone(), 3, m.gram().clone()).is_err());
    }
}
