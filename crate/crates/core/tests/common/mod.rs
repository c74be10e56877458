#![allow(dead_code)]

use std::collections::BTreeMap;

use frobmon::builders::{ComponentSource, CurveInstance};
use frobmon::graph::DualGraph;
use frobmon::weil::{direct_sum, frobenius_of_elliptic, EllipticCurveSpec};
use proptest::prelude::*;

pub const PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 29];

/// Raw material for a random connected curve instance.
#[derive(Clone, Debug)]
pub struct RawCurve {
    pub p: u64,
    pub parents: Vec<usize>,
    pub extra: Vec<(usize, usize)>,
    pub genera: Vec<u32>,
    pub coeffs: Vec<(i64, i64)>,
    pub flips: Vec<bool>,
}

pub fn raw_curve() -> impl Strategy<Value = RawCurve> {
    (1usize..=6).prop_flat_map(|n| {
        (
            prop::sample::select(PRIMES.to_vec()),
            prop::collection::vec(any::<prop::sample::Index>(), n - 1),
            prop::collection::vec((0..n, 0..n), 0..=5),
            prop::collection::vec(0u32..=2, n),
            prop::collection::vec((0i64..50, 0i64..50), 2 * n),
            prop::collection::vec(any::<bool>(), 16),
        )
            .prop_map(move |(p, parents, extra, genera, coeffs, flips)| RawCurve {
                p,
                parents: parents.iter().enumerate().map(|(i, ix)| ix.index(i + 1)).collect(),
                extra,
                genera,
                coeffs,
                flips,
            })
    })
}

/// First nonsingular curve at or after `(a4, a6)` in the a6 direction.
pub fn nonsingular(p: u64, a4: i64, a6: i64) -> EllipticCurveSpec {
    (0..p as i64)
        .find_map(|k| EllipticCurveSpec::new(p, a4, a6 + k).ok())
        .or_else(|| (0..p as i64).find_map(|k| EllipticCurveSpec::new(p, a4 + 1, a6 + k).ok()))
        .expect("some nonsingular curve")
}

impl RawCurve {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .parents
            .iter()
            .enumerate()
            .map(|(i, &parent)| (parent, i + 1))
            .collect();
        edges.extend(self.extra.iter().copied());
        for (i, e) in edges.iter_mut().enumerate() {
            if self.flips[i % self.flips.len()] {
                *e = (e.1, e.0);
            }
        }
        edges
    }

    pub fn instance(&self) -> CurveInstance {
        self.instance_labelled(|v| format!("v{v:02}"), |e| format!("e{e:02}"))
    }

    pub fn instance_labelled(
        &self,
        vname: impl Fn(usize) -> String,
        ename: impl Fn(usize) -> String,
    ) -> CurveInstance {
        let graph = DualGraph::new(
            self.genera.iter().enumerate().map(|(i, &g)| (vname(i), g)),
            self.edges()
                .into_iter()
                .enumerate()
                .map(|(i, (t, h))| (ename(i), vname(t), vname(h))),
        )
        .unwrap();
        let mut comps = BTreeMap::new();
        for (i, &g) in self.genera.iter().enumerate() {
            let (a4, a6) = self.coeffs[2 * i];
            let (b4, b6) = self.coeffs[2 * i + 1];
            let source = match g {
                0 => ComponentSource::Genus0,
                1 => {
                    let e = nonsingular(self.p, a4, a6);
                    ComponentSource::Elliptic { a4: e.a4() as i64, a6: e.a6() as i64 }
                }
                _ => {
                    let x = frobenius_of_elliptic(&nonsingular(self.p, a4, a6)).unwrap();
                    let y = frobenius_of_elliptic(&nonsingular(self.p, b4, b6)).unwrap();
                    ComponentSource::Matrix(direct_sum(self.p, 1, &[x, y]).unwrap().matrix().clone())
                }
            };
            comps.insert(vname(i), source);
        }
        CurveInstance::new(graph, comps, self.p, 1).unwrap()
    }
}
