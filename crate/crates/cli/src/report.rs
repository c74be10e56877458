//! Build reports.
//!
//! Rationals are written with [`num::BigRational`]'s `Display`: `"a/b"` in
//! lowest terms, or `"a"` when the denominator is 1. Both parse back exactly.

use std::time::Instant;

use frobmon::builders::{build_from_av, build_from_curve, check_curve_jacobian_agreement, jacobian_data};
use frobmon::linalg::{int, NewtonPolygon, QMatrix, Rational};
use frobmon::module::{hodge_newton, verify_relations, verify_thm31, Dims};
use frobmon::PhiNModule;
use serde::{Deserialize, Serialize};

use crate::instance::{matrix_to_file, InstanceFile, MatrixFile};
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub instance: InstanceFile,
    pub module: ModuleSummary,
    pub matrices: Matrices,
    pub checks: Checks,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<Timing>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSummary {
    pub p: u64,
    pub f: u32,
    pub q: String,
    pub dims: DimsFile,
    pub dim: usize,
    pub fil1_dim: usize,
    #[serde(rename = "t_N")]
    pub t_n: String,
    #[serde(rename = "t_H")]
    pub t_h: usize,
    pub newton_slopes: Vec<SlopeFile>,
    pub hodge_slopes: Vec<SlopeFile>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsFile {
    pub w0: usize,
    pub w1: usize,
    pub w2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeFile {
    pub slope: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrices {
    pub phi: MatrixFile,
    pub n: MatrixFile,
    pub gram: MatrixFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub relations: RelationChecks,
    pub thm31: bool,
    /// Curve instances only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    pub polygons: PolygonChecks,
    /// Advisory: `exactly verified`, `approximately verified` or `violated`.
    pub archimedean: String,
    pub all_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationChecks {
    pub n_squared_zero: bool,
    pub commutation: bool,
    pub phi_invertible: bool,
    pub rank_n: usize,
    pub expected_rank_n: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonChecks {
    pub endpoints_equal: bool,
    pub newton_above_hodge: bool,
    pub newton_symmetric: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub build: f64,
    pub checks: f64,
}

fn slopes(p: &NewtonPolygon) -> Vec<SlopeFile> {
    p.slopes()
        .iter()
        .map(|(s, m)| SlopeFile {
            slope: s.to_string(),
            multiplicity: *m,
        })
        .collect()
}

fn parse_rational(field: &str, s: &str) -> Result<Rational, CliError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| CliError::Input(format!("{field}: expected a rational string, got {s:?}")))
}

fn parse_rational_matrix(field: &str, rows: &MatrixFile) -> Result<QMatrix, CliError> {
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| parse_rational(&format!("{field}[{i}][{j}]"), s))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    QMatrix::from_rows(parsed).map_err(|e| CliError::Input(format!("{field}: {e}")))
}

/// Builds the module described by `instance` and runs every check.
pub fn evaluate(instance: &InstanceFile, prime_bound: u64, timing: bool) -> Result<Report, CliError> {
    let start = Instant::now();
    let (module, archimedean, curve) = match instance {
        InstanceFile::Curve(c) => {
            let c = c.to_instance(prime_bound)?;
            let m = build_from_curve(&c)?;
            let arch = jacobian_data(&c)?.b_frobenius().archimedean();
            (m, arch, Some(c))
        }
        InstanceFile::Av(a) => {
            let u = a.to_data()?;
            (build_from_av(&u)?, u.b_frobenius().archimedean(), None)
        }
    };
    let built = start.elapsed();

    let start = Instant::now();
    let rel = verify_relations(&module);
    let thm31 = verify_thm31(&module);
    let agreement = curve.as_ref().map(check_curve_jacobian_agreement).transpose()?;
    let hn = hodge_newton(&module).map_err(|e| CliError::Input(e.to_string()))?;
    let checked = start.elapsed();

    let relations = RelationChecks {
        n_squared_zero: rel.n_squared_zero,
        commutation: rel.commutation,
        phi_invertible: rel.phi_invertible,
        rank_n: rel.rank_n,
        expected_rank_n: rel.expected_rank_n,
        pass: rel.all_pass(),
    };
    let newton_symmetric = hn.newton.is_symmetric_about(&int(1));
    let polygons = PolygonChecks {
        endpoints_equal: hn.endpoints_equal,
        newton_above_hodge: hn.newton_above_hodge,
        newton_symmetric,
        pass: hn.endpoints_equal && hn.newton_above_hodge && newton_symmetric,
    };
    let all_pass = relations.pass && thm31 && agreement.unwrap_or(true) && polygons.pass;
    let Dims { w0, w1, w2 } = module.dims();
    Ok(Report {
        instance: instance.clone(),
        module: ModuleSummary {
            p: module.p(),
            f: module.f(),
            q: module.q().to_string(),
            dims: DimsFile { w0, w1, w2 },
            dim: module.dim(),
            fil1_dim: module.fil1_dim(),
            t_n: hn.t_newton.to_string(),
            t_h: hn.t_hodge,
            newton_slopes: slopes(&hn.newton),
            hodge_slopes: slopes(&hn.hodge),
        },
        matrices: Matrices {
            phi: matrix_to_file(module.phi()),
            n: matrix_to_file(module.n()),
            gram: matrix_to_file(module.gram()),
        },
        checks: Checks {
            relations,
            thm31,
            agreement,
            polygons,
            archimedean: archimedean.to_string(),
            all_pass,
        },
        timing_ms: timing.then_some(Timing {
            build: built.as_secs_f64() * 1e3,
            checks: checked.as_secs_f64() * 1e3,
        }),
    })
}

impl Report {
    /// Reconstructs the module from the serialized matrices.
    pub fn to_module(&self) -> Result<PhiNModule, CliError> {
        let m = &self.module;
        let dims = Dims {
            w0: m.dims.w0,
            w1: m.dims.w1,
            w2: m.dims.w2,
        };
        PhiNModule::from_parts(
            m.p,
            m.f,
            dims,
            parse_rational_matrix("matrices.phi", &self.matrices.phi)?,
            parse_rational_matrix("matrices.n", &self.matrices.n)?,
            m.fil1_dim,
            parse_rational_matrix("matrices.gram", &self.matrices.gram)?,
        )
        .map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
