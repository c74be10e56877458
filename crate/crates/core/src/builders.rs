//! Curve-side and abelian-variety-side constructions of the (Phi, N)-module.
//!
//! Basis conventions shared by both sides: components in ascending vertex id,
//! weight-0 and weight-2 blocks indexed by the fundamental cycles of the
//! spanning tree chosen by ascending edge id. With these fixed, the module of a
//! curve and the module of its Jacobian must agree entry for entry.

use std::collections::BTreeMap;

use num::{BigInt, Zero};
use thiserror::Error;

use crate::graph::{edge_pairing, to_rational, DualGraph, GraphError};
use crate::laurent::{LaurentForm, LaurentPoly};
use crate::linalg::{big, QMatrix, Rational};
use crate::module::{assemble, modules_equal, ModuleError, PhiNModule};
use crate::weil::{
    direct_sum, frobenius_of_elliptic_bounded, validate_weil, EllipticCurveSpec, WeilError,
    WeilMatrix, DEFAULT_PRIME_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("component {vertex}: {source}")]
    Component { vertex: String, source: WeilError },
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error("vertex {0:?} has no component source")]
    MissingComponent(String),
    #[error("component source for unknown vertex {0:?}")]
    UnknownComponent(String),
    #[error("vertex {vertex:?} has genus {genus} but its source has genus {source_genus}")]
    GenusMismatch {
        vertex: String,
        genus: u32,
        source_genus: usize,
    },
    #[error("elliptic components need residue degree 1, got f = {0}")]
    EllipticNeedsPrimeField(u32),
    #[error("gram must be {rank}x{rank} for torus rank {rank}, got {rows}x{cols}")]
    GramShape { rank: usize, rows: usize, cols: usize },
}

/// Where the Frobenius of a good-reduction component comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentSource {
    /// An explicit integer matrix of size `2g`.
    Matrix(QMatrix),
    /// `y^2 = x^3 + a4 x + a6` over F_p; genus 1.
    Elliptic { a4: i64, a6: i64 },
    /// A rational component; empty block.
    Genus0,
}

impl ComponentSource {
    fn genus(&self) -> usize {
        match self {
            ComponentSource::Matrix(m) => m.rows() / 2,
            ComponentSource::Elliptic { .. } => 1,
            ComponentSource::Genus0 => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveInstance {
    graph: DualGraph,
    components: BTreeMap<String, ComponentSource>,
    p: u64,
    f: u32,
    prime_bound: u64,
}

impl CurveInstance {
    pub fn new(
        graph: DualGraph,
        components: BTreeMap<String, ComponentSource>,
        p: u64,
        f: u32,
    ) -> Result<Self, BuildError> {
        for v in graph.vertices() {
            let source = components
                .get(&v.id)
                .ok_or_else(|| BuildError::MissingComponent(v.id.clone()))?;
            if source.genus() != v.genus as usize
                || matches!(source, ComponentSource::Matrix(m) if m.rows() % 2 == 1)
            {
                return Err(BuildError::GenusMismatch {
                    vertex: v.id.clone(),
                    genus: v.genus,
                    source_genus: source.genus(),
                });
            }
            if matches!(source, ComponentSource::Elliptic { .. }) && f != 1 {
                return Err(BuildError::EllipticNeedsPrimeField(f));
            }
        }
        if let Some(id) = components.keys().find(|id| graph.vertex_index(id).is_none()) {
            return Err(BuildError::UnknownComponent(id.clone()));
        }
        Ok(CurveInstance {
            graph,
            components,
            p,
            f,
            prime_bound: DEFAULT_PRIME_BOUND,
        })
    }

    /// Overrides the largest prime accepted for point counting.
    pub fn with_prime_bound(mut self, bound: u64) -> Self {
        self.prime_bound = bound;
        self
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn components(&self) -> &BTreeMap<String, ComponentSource> {
        &self.components
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// Validated Frobenius blocks in ascending vertex id.
    pub fn component_frobenius(&self) -> Result<Vec<WeilMatrix>, BuildError> {
        self.graph
            .vertices()
            .iter()
            .map(|v| {
                let wrap = |source| BuildError::Component {
                    vertex: v.id.clone(),
                    source,
                };
                match &self.components[&v.id] {
                    ComponentSource::Matrix(m) => validate_weil(m, self.p, self.f).map_err(wrap),
                    ComponentSource::Elliptic { a4, a6 } => EllipticCurveSpec::new(self.p, *a4, *a6)
                        .and_then(|e| frobenius_of_elliptic_bounded(&e, self.prime_bound))
                        .map_err(wrap),
                    ComponentSource::Genus0 => WeilMatrix::empty(self.p, self.f).map_err(wrap),
                }
            })
            .collect()
    }

    fn abelian_part(&self) -> Result<WeilMatrix, BuildError> {
        Ok(direct_sum(self.p, self.f, &self.component_frobenius()?)?)
    }
}

/// The uniformization data of a semistable abelian variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformizationData {
    torus_rank: usize,
    gram: QMatrix,
    b_frobenius: WeilMatrix,
    p: u64,
    f: u32,
}

impl UniformizationData {
    pub fn new(torus_rank: usize, gram: QMatrix, b_frobenius: WeilMatrix, p: u64, f: u32) -> Result<Self, BuildError> {
        if gram.rows() != torus_rank || gram.cols() != torus_rank {
            return Err(BuildError::GramShape {
                rank: torus_rank,
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        if !gram.is_integral() {
            return Err(ModuleError::GramNotIntegral.into());
        }
        if !gram.is_positive_definite() {
            return Err(ModuleError::GramNotPositiveDefinite.into());
        }
        Ok(UniformizationData {
            torus_rank,
            gram,
            b_frobenius,
            p,
            f,
        })
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn b_frobenius(&self) -> &WeilMatrix {
        &self.b_frobenius
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }
}

/// Curve side. N on the toric block is the composite
/// `H^1(T) --Res--> K^E --edge pairing--> Hom(H_1(Gr), K)`: residues of a
/// class along the annuli give the edge chain of its cycle, and pairing
/// against the cycle basis lands in the weight-0 block.
pub fn build_from_curve(c: &CurveInstance) -> Result<PhiNModule, BuildError> {
    let g = &c.graph;
    let basis = g.cycle_basis()?;
    let edges = g.edges().len();
    let residues = basis.as_matrix(edges);
    let mut pairing = QMatrix::zeros(edges, edges);
    for i in 0..edges {
        for j in 0..edges {
            let (ei, ej) = (unit(edges, i), unit(edges, j));
            pairing.set(i, j, edge_pairing(&ei, &ej)?);
        }
    }
    let to_weight0 = &residues.transpose() * &pairing;
    let gram = &to_weight0 * &residues;
    Ok(assemble(c.p, c.f, &gram, &c.abelian_part()?)?)
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = big(BigInt::from(1));
    v
}

pub fn build_from_av(u: &UniformizationData) -> Result<PhiNModule, BuildError> {
    Ok(assemble(u.p, u.f, &u.gram, &u.b_frobenius)?)
}

/// Uniformization data of the Jacobian: the period lattice is H_1 of the
/// dual graph with the edge pairing, and the abelian part is the product of
/// the component Jacobians.
pub fn jacobian_data(c: &CurveInstance) -> Result<UniformizationData, BuildError> {
    let torus_rank = c.graph.betti_one()?;
    let gram = c.graph.monodromy_gram()?;
    UniformizationData::new(torus_rank, gram, c.abelian_part()?, c.p, c.f)
}

/// Builds the curve's module both ways and compares them exactly.
pub fn check_curve_jacobian_agreement(c: &CurveInstance) -> Result<bool, BuildError> {
    let curve = build_from_curve(c)?;
    let jac = build_from_av(&jacobian_data(c)?)?;
    Ok(modules_equal(&curve, &jac))
}

/// Local 1-forms on the annuli of each edge representing the toric class of
/// each fundamental cycle: residue equal to the cycle coefficient, plus an
/// exact term that must not affect anything.
pub fn toric_class_forms(graph: &DualGraph) -> Result<Vec<Vec<LaurentForm>>, BuildError> {
    let basis = graph.cycle_basis()?;
    Ok(basis
        .cycles
        .iter()
        .enumerate()
        .map(|(j, cycle)| {
            let exact = LaurentPoly::monomial(j as i64 + 1, big(BigInt::from(1))).d();
            to_rational(cycle)
                .into_iter()
                .map(|r| &LaurentForm(LaurentPoly::monomial(-1, r)) + &exact)
                .collect()
        })
        .collect())
}

/// The monodromy pairing as a sum over edges of products of residues,
/// evaluated on [`toric_class_forms`].
pub fn monodromy_pairing_by_residues(graph: &DualGraph) -> Result<QMatrix, BuildError> {
    let forms = toric_class_forms(graph)?;
    let b = forms.len();
    let mut out = QMatrix::zeros(b, b);
    for i in 0..b {
        for j in 0..b {
            let s = forms[i]
                .iter()
                .zip(&forms[j])
                .fold(Rational::zero(), |acc, (x, y)| acc + x.residue() * y.residue());
            out.set(i, j, s);
        }
    }
    Ok(out)
}
