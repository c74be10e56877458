//! Dual graphs of semistable special fibers.
//!
//! Vertices are components (labelled by genus), edges are double points. Each
//! edge is stored once with a chosen orientation; reversing it (the involution
//! on oriented edges) is coordinate negation. Vertices and edges are kept
//! sorted by id, and every edge-indexed vector uses that order.

use std::collections::{BTreeMap, VecDeque};

use num::{BigInt, Zero};
use thiserror::Error;

use crate::linalg::{big, QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} references unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("unknown edge id {0:?}")]
    UnknownEdge(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge vectors have lengths {0} and {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl DualGraph {
    /// `vertices` are `(id, genus)`, `edges` are `(id, tail id, head id)`.
    /// Loops and parallel edges are allowed. Connectivity is not checked here;
    /// the homology operations reject disconnected graphs.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = (String, u32)>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut vmap: BTreeMap<String, u32> = BTreeMap::new();
        for (id, genus) in vertices {
            if vmap.insert(id.clone(), genus).is_some() {
                return Err(GraphError::DuplicateVertex(id));
            }
        }
        if vmap.is_empty() {
            return Err(GraphError::Empty);
        }
        let index: BTreeMap<&str, usize> = vmap.keys().enumerate().map(|(i, k)| (k.as_str(), i)).collect();
        let mut emap: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for (id, tail, head) in edges {
            let lookup = |v: &str| {
                index.get(v).copied().ok_or_else(|| GraphError::UnknownVertex {
                    edge: id.clone(),
                    vertex: v.to_string(),
                })
            };
            let t = lookup(&tail)?;
            let h = lookup(&head)?;
            if emap.contains_key(&id) {
                return Err(GraphError::DuplicateEdge(id));
            }
            emap.insert(id, (t, h));
        }
        Ok(DualGraph {
            vertices: vmap
                .into_iter()
                .map(|(id, genus)| Vertex { id, genus })
                .collect(),
            edges: emap
                .into_iter()
                .map(|(id, (tail, head))| Edge { id, tail, head })
                .collect(),
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.id.as_str().cmp(id)).ok()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn total_genus(&self) -> u64 {
        self.vertices.iter().map(|v| u64::from(v.genus)).sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn require_connected(&self) -> Result<(), GraphError> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(GraphError::Disconnected)
        }
    }

    /// `(edge index, neighbour)` lists, loops omitted.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail != e.head {
                adj[e.tail].push((i, e.head));
                adj[e.head].push((i, e.tail));
            }
        }
        adj
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn betti_one(&self) -> Result<usize, GraphError> {
        self.require_connected()?;
        Ok(self.edges.len() + 1 - self.vertices.len())
    }

    /// Signed incidence sums per vertex: `+c` at the head, `-c` at the tail.
    pub fn boundary(&self, chain: &[i64]) -> Result<Vec<i64>, GraphError> {
        if chain.len() != self.edges.len() {
            return Err(GraphError::DimensionMismatch(chain.len(), self.edges.len()));
        }
        let mut out = vec![0; self.vertices.len()];
        for (e, &c) in self.edges.iter().zip(chain) {
            out[e.head] += c;
            out[e.tail] -= c;
        }
        Ok(out)
    }

    /// Spanning tree by ascending edge id (Kruskal), returned as a membership mask.
    pub fn spanning_tree(&self) -> Result<Vec<bool>, GraphError> {
        self.require_connected()?;
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut in_tree = vec![false; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            if a != b {
                parent[a] = b;
                in_tree[i] = true;
            }
        }
        Ok(in_tree)
    }

    /// One fundamental cycle per non-tree edge, in ascending id order of that
    /// edge, with coefficient +1 on it.
    pub fn cycle_basis(&self) -> Result<CycleBasis, GraphError> {
        let in_tree = self.spanning_tree()?;
        let n = self.vertices.len();
        // Root the tree at vertex 0; record the edge leading to each parent.
        let mut up: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                if !in_tree[i] {
                    continue;
                }
                let w = if e.tail == v {
                    e.head
                } else if e.head == v {
                    e.tail
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    up[w] = Some((i, v));
                    queue.push_back(w);
                }
            }
        }
        // Chain walking from v to the root.
        let to_root = |mut v: usize, chain: &mut Vec<i64>, sign: i64| {
            while let Some((i, parent)) = up[v] {
                let along = self.edges[i].tail == v;
                chain[i] += if along { sign } else { -sign };
                v = parent;
            }
        };
        let mut cycles = Vec::new();
        let mut defining = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if in_tree[i] {
                continue;
            }
            let mut chain = vec![0; self.edges.len()];
            chain[i] = 1;
            // e runs tail -> head; close it with head -> root -> tail.
            to_root(e.head, &mut chain, 1);
            to_root(e.tail, &mut chain, -1);
            cycles.push(chain);
            defining.push(i);
        }
        Ok(CycleBasis {
            cycles,
            defining_edges: defining,
        })
    }

    /// Gram matrix of the edge pairing on the fundamental cycles.
    pub fn monodromy_gram(&self) -> Result<QMatrix, GraphError> {
        let basis = self.cycle_basis()?;
        let vecs: Vec<Vec<Rational>> = basis.cycles.iter().map(|c| to_rational(c)).collect();
        let b = vecs.len();
        let mut gram = QMatrix::zeros(b, b);
        for i in 0..b {
            for j in 0..b {
                gram.set(i, j, edge_pairing(&vecs[i], &vecs[j])?);
            }
        }
        Ok(gram)
    }

    /// Coordinate vector of an oriented edge: `+1` in its slot, or `-1` when
    /// taken against the stored orientation.
    pub fn oriented_edge(&self, id: &str, reversed: bool) -> Result<Vec<Rational>, GraphError> {
        let i = self
            .edge_index(id)
            .ok_or_else(|| GraphError::UnknownEdge(id.to_string()))?;
        let mut v = vec![Rational::zero(); self.edges.len()];
        v[i] = big(BigInt::from(if reversed { -1 } else { 1 }));
        Ok(v)
    }
}

/// Integral 1-cycles spanning the cycle space of a dual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    pub cycles: Vec<Vec<i64>>,
    /// Index of the non-tree edge each cycle was built from.
    pub defining_edges: Vec<usize>,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Edges x cycles matrix whose columns are the cycles.
    pub fn as_matrix(&self, edge_count: usize) -> QMatrix {
        let mut m = QMatrix::zeros(edge_count, self.cycles.len());
        for (j, c) in self.cycles.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, big(BigInt::from(x)));
            }
        }
        m
    }
}

pub(crate) fn to_rational(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| big(BigInt::from(x))).collect()
}

/// Bilinear extension of `(e, e) = 1`, `(e, reverse e) = -1`, `0` for distinct
/// edges. With one stored orientation per edge this is the coordinate dot product.
pub fn edge_pairing(x: &[Rational], y: &[Rational]) -> Result<Rational, GraphError> {
    if x.len() != y.len() {
        return Err(GraphError::DimensionMismatch(x.len(), y.len()));
    }
    Ok(x.iter().zip(y).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
}
