//! Integer matrices Z, B, S and the linkage-class structure of a network.

use nalgebra::DMatrix;

use crate::exact;
use crate::network::Network;
use crate::union_find::UnionFind;

/// One directed edge of the complex graph. A reversible reaction yields a
/// forward edge immediately followed by its reverse edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub reaction: usize,
    pub reverse: bool,
    pub tail: usize,
    pub head: usize,
    pub rate_constant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoichiometryView {
    z: DMatrix<i64>,
    z_f64: DMatrix<f64>,
    b: DMatrix<i64>,
    s: DMatrix<i64>,
    edges: Vec<Edge>,
    linkage: Vec<Vec<usize>>,
    rank_b: usize,
}

impl StoichiometryView {
    pub fn new(network: &Network) -> Self {
        let m = network.num_species();
        let c = network.num_complexes();
        let mut z = DMatrix::zeros(m, c);
        for (j, cx) in network.complexes().iter().enumerate() {
            for &(s, k) in cx.composition() {
                z[(s, j)] = i64::from(k);
            }
        }
        let mut edges = Vec::with_capacity(network.num_edges());
        for (i, r) in network.reactions().iter().enumerate() {
            edges.push(Edge {
                reaction: i,
                reverse: false,
                tail: r.substrate,
                head: r.product,
                rate_constant: r.law.k_forward,
            });
            if r.reversible {
                edges.push(Edge {
                    reaction: i,
                    reverse: true,
                    tail: r.product,
                    head: r.substrate,
                    rate_constant: r.law.k_reverse,
                });
            }
        }
        let mut b = DMatrix::zeros(c, edges.len());
        let mut uf = UnionFind::new(c);
        for (j, e) in edges.iter().enumerate() {
            b[(e.tail, j)] = -1;
            b[(e.head, j)] = 1;
            uf.union(e.tail, e.head);
        }
        let s = &z * &b;
        let rank_b = exact::rank(&b);
        let z_f64 = z.map(|v| v as f64);
        StoichiometryView { z, z_f64, b, s, edges, linkage: uf.groups(), rank_b }
    }

    /// Complex stoichiometric matrix, m x c.
    pub fn z(&self) -> &DMatrix<i64> {
        &self.z
    }

    pub fn z_f64(&self) -> &DMatrix<f64> {
        &self.z_f64
    }

    /// Incidence matrix, c x r over directed edges.
    pub fn b(&self) -> &DMatrix<i64> {
        &self.b
    }

    /// Stoichiometric matrix `Z B`, m x r.
    pub fn s(&self) -> &DMatrix<i64> {
        &self.s
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn rank_b(&self) -> usize {
        self.rank_b
    }

    pub fn rank_s(&self) -> usize {
        exact::rank(&self.s)
    }

    /// Connected components of the undirected complex graph and their count.
    pub fn linkage_classes(&self) -> (&[Vec<usize>], usize) {
        (&self.linkage, self.linkage.len())
    }

    /// Integer basis of `{w : w^T Z = 0}`.
    pub fn conservation_basis(&self) -> Vec<Vec<i64>> {
        exact::left_null_space(&self.z)
    }
}
