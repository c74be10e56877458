//! Seeded random curve instances.

use std::collections::BTreeMap;

use frobmon::weil::{count_points, EllipticCurveSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{ComponentFile, CurveFile, EdgeFile, GraphFile, InstanceFile, VertexFile};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzBounds {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_prime: u64,
}

impl Default for FuzzBounds {
    fn default() -> Self {
        FuzzBounds {
            max_vertices: 8,
            max_edges: 14,
            max_prime: 50,
        }
    }
}

fn odd_primes(max: u64) -> Vec<u64> {
    (3..=max).step_by(2).filter(|&p| frobmon::linalg::is_prime(p)).collect()
}

fn random_curve(rng: &mut ChaCha8Rng, p: u64) -> EllipticCurveSpec {
    loop {
        let (a4, a6) = (rng.gen_range(0..p as i64), rng.gen_range(0..p as i64));
        if let Ok(e) = EllipticCurveSpec::new(p, a4, a6) {
            return e;
        }
    }
}

fn component(rng: &mut ChaCha8Rng, p: u64, genus: u32) -> Result<ComponentFile, CliError> {
    Ok(match genus {
        0 => ComponentFile::Genus0,
        1 => {
            let e = random_curve(rng, p);
            ComponentFile::Elliptic {
                a4: e.a4().to_string(),
                a6: e.a6().to_string(),
            }
        }
        _ => {
            let p_str = format!("-{p}");
            let mut entries = vec![vec!["0".to_string(); 4]; 4];
            for block in 0..2 {
                let e = random_curve(rng, p);
                let a = count_points(&e)?.trace;
                let o = 2 * block;
                entries[o][o + 1] = p_str.clone();
                entries[o + 1][o] = "1".into();
                entries[o + 1][o + 1] = a.to_string();
            }
            ComponentFile::Matrix { entries }
        }
    })
}

/// Generates `count` connected curve instances. Identical seeds give
/// identical sequences.
pub fn generate(seed: u64, count: usize, bounds: FuzzBounds) -> Result<Vec<InstanceFile>, CliError> {
    let primes = odd_primes(bounds.max_prime);
    if primes.is_empty() || bounds.max_vertices == 0 || bounds.max_edges + 1 < bounds.max_vertices {
        return Err(CliError::Input(format!("unusable fuzz bounds {bounds:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let p = *primes.choose(&mut rng).expect("nonempty");
        let n = rng.gen_range(1..=bounds.max_vertices);
        let extra = rng.gen_range(0..=bounds.max_edges - (n - 1));
        let name = |v: usize| format!("v{v}");
        let mut ends: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        ends.extend((0..extra).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))));
        let edges = ends
            .into_iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let (tail, head) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
                EdgeFile {
                    id: format!("e{i:02}"),
                    tail: name(tail),
                    head: name(head),
                }
            })
            .collect();
        let mut vertices = Vec::with_capacity(n);
        let mut components = BTreeMap::new();
        for v in 0..n {
            let genus = rng.gen_range(0..=2);
            vertices.push(VertexFile { id: name(v), genus });
            components.insert(name(v), component(&mut rng, p, genus)?);
        }
        out.push(InstanceFile::Curve(CurveFile {
            p,
            f: 1,
            graph: GraphFile { vertices, edges },
            components,
        }));
    }
    Ok(out)
}
