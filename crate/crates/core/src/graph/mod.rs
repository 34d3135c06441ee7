//! Simple undirected graphs over indexed vertices, the non-commuting graph
//! construction, and the structural graph algorithms the spectra need:
//! components, clique-union detection, exact maximum clique and planarity.

mod clique;
mod planarity;

use thiserror::Error;

use crate::group::FiniteGroup;

/// Exact search bound for [`SimpleGraph::max_clique`].
pub const MAX_CLIQUE_VERTEX_BOUND: usize = 200;
/// Size bound for [`SimpleGraph::is_planar`].
pub const PLANARITY_VERTEX_BOUND: usize = 100;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("group is abelian: the non-commuting graph has no vertices")]
    AbelianInput,
    #[error("component containing vertex {witness} is not a clique ({size} vertices)")]
    NotCliqueUnion { witness: usize, size: usize },
    #[error("{operation} supports at most {bound} vertices, got {actual}")]
    SizeBound {
        operation: &'static str,
        bound: usize,
        actual: usize,
    },
    #[error("spectrum input is malformed: {0}")]
    Malformed(String),
}

/// Undirected simple graph with packed adjacency bit rows.
///
/// `labels[v]` carries an external vertex name; for non-commuting graphs it
/// is the group element index of the vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    labels: Vec<usize>,
}

/// A disjoint union of cliques, recorded as (clique size, count) pairs with
/// sizes strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueUnion {
    pub parts: Vec<(usize, usize)>,
}

impl CliqueUnion {
    /// Total vertex count, sum of size * count.
    pub fn vertex_count(&self) -> usize {
        self.parts.iter().map(|&(m, l)| m * l).sum()
    }

    /// Total number of cliques.
    pub fn clique_count(&self) -> usize {
        self.parts.iter().map(|&(_, l)| l).sum()
    }
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        Self::with_labels((0..n).collect())
    }

    pub fn with_labels(labels: Vec<usize>) -> Self {
        let n = labels.len();
        let words = n.div_ceil(64);
        SimpleGraph {
            n,
            words,
            rows: vec![0; n * words],
            labels,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "no loops in a simple graph");
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.has_edge(u, v)).collect()
    }

    /// Edge list with u < v, ascending, using zero-based vertex indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// One `u v` line per edge.
    pub fn edge_list_text(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Complement graph on the same labels; an involution.
    pub fn complement(&self) -> SimpleGraph {
        let mut g = SimpleGraph::with_labels(self.labels.clone());
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Partition into connected components, each a sorted vertex list;
    /// components ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for v in 0..self.n {
                    if !seen[v] && self.has_edge(u, v) {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Succeeds iff every connected component is a complete graph, returning
    /// the grouped clique sizes. The failure names a non-clique component.
    pub fn as_clique_union(&self) -> Result<CliqueUnion, GraphError> {
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        for comp in self.connected_components() {
            let size = comp.len();
            for &u in &comp {
                if self.degree(u) != size - 1 {
                    return Err(GraphError::NotCliqueUnion {
                        witness: comp[0],
                        size,
                    });
                }
            }
            *counts.entry(size).or_insert(0) += 1;
        }
        Ok(CliqueUnion {
            parts: counts.into_iter().collect(),
        })
    }

    /// Exact maximum clique size.
    ///
    /// When the complement is a verified disjoint union of cliques the graph
    /// is complete multipartite and the answer is the number of parts; any
    /// other input under the vertex bound runs branch-and-bound with
    /// pivoting.
    pub fn max_clique(&self) -> Result<usize, GraphError> {
        if self.n > MAX_CLIQUE_VERTEX_BOUND {
            return Err(GraphError::SizeBound {
                operation: "max_clique",
                bound: MAX_CLIQUE_VERTEX_BOUND,
                actual: self.n,
            });
        }
        if self.n == 0 {
            return Ok(0);
        }
        if let Ok(union) = self.complement().as_clique_union() {
            // Complete multipartite: one vertex from each part is a maximum
            // clique, and no clique may take two vertices from one part.
            return Ok(union.clique_count());
        }
        Ok(clique::max_clique_exact(self))
    }

    /// Exact planarity decision for graphs within the size bound.
    pub fn is_planar(&self) -> Result<bool, GraphError> {
        if self.n > PLANARITY_VERTEX_BOUND {
            return Err(GraphError::SizeBound {
                operation: "is_planar",
                bound: PLANARITY_VERTEX_BOUND,
                actual: self.n,
            });
        }
        let m = self.edge_count();
        if self.n > 2 && m > 3 * self.n - 6 {
            return Ok(false);
        }
        Ok(planarity::lr_planar(self))
    }
}

/// The non-commuting graph of a non-abelian group: vertices are the
/// non-central elements and edges join pairs that fail to commute.
pub fn non_commuting_graph(group: &FiniteGroup) -> Result<SimpleGraph, GraphError> {
    let center = group.center();
    if center.len() == group.order() {
        return Err(GraphError::AbelianInput);
    }
    let mut central = vec![false; group.order()];
    for &z in &center {
        central[z] = true;
    }
    let vertices: Vec<usize> = (0..group.order()).filter(|&x| !central[x]).collect();
    let mut g = SimpleGraph::with_labels(vertices.clone());
    for (i, &x) in vertices.iter().enumerate() {
        for (j, &y) in vertices.iter().enumerate().skip(i + 1) {
            if !group.commutes(x, y) {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::group::DEFAULT_ORDER_CAP;
    use num_rational::Rational64;
    use proptest::prelude::*;

    const CAP: usize = DEFAULT_ORDER_CAP;

    fn complete(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    #[test]
    fn non_commuting_graph_counts() {
        // |E| = |G|^2 (1 - Pr(G)) / 2.
        let d6 = catalog::dihedral(3, CAP).unwrap();
        let g = non_commuting_graph(&d6).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 9);

        let q8 = catalog::generalized_quaternion(2, CAP).unwrap();
        let g = non_commuting_graph(&q8).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 12);

        let abelian = catalog::abelian(&[2, 2], CAP).unwrap();
        assert_eq!(non_commuting_graph(&abelian), Err(GraphError::AbelianInput));
    }

    #[test]
    fn edge_count_matches_commuting_probability() {
        for spec in [
            catalog::FamilySpec::Dihedral { m: 6 },
            catalog::FamilySpec::Frobenius20,
            catalog::FamilySpec::Quasidihedral { n: 4 },
            catalog::FamilySpec::Gl2 { q: 3 },
            catalog::FamilySpec::HanakiTheta { n: 2 },
        ] {
            let group = spec.construct(CAP).unwrap();
            let g = non_commuting_graph(&group).unwrap();
            let order = group.order() as i64;
            let non_commuting =
                Rational64::from_integer(order * order) * (Rational64::from_integer(1) - group.commuting_probability());
            assert!(non_commuting.is_integer());
            assert_eq!(2 * g.edge_count() as i64, non_commuting.to_integer(), "{spec}");
        }
    }

    #[test]
    fn complement_of_complete_is_empty() {
        let g = complete(5).complement();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.connected_components().len(), 5);
    }

    #[test]
    fn complement_of_q8_graph_is_three_edges() {
        let q8 = catalog::generalized_quaternion(2, CAP).unwrap();
        let g = non_commuting_graph(&q8).unwrap().complement();
        let union = g.as_clique_union().unwrap();
        assert_eq!(union.parts, vec![(2, 3)]);
    }

    #[test]
    fn components_of_complement_d14() {
        // Centralizer structure: one K_6 from the rotations, seven K_1 from
        // the reflections.
        let d14 = catalog::dihedral(7, CAP).unwrap();
        let comp = non_commuting_graph(&d14).unwrap().complement();
        let comps = comp.connected_components();
        assert_eq!(comps.len(), 8);
        let mut sizes: Vec<usize> = comps.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 1, 1, 1, 1, 1, 6]);
    }

    #[test]
    fn clique_union_detection() {
        let qd16 = catalog::quasidihedral(4, CAP).unwrap();
        let comp = non_commuting_graph(&qd16).unwrap().complement();
        assert_eq!(comp.as_clique_union().unwrap().parts, vec![(2, 4), (6, 1)]);

        let psl24 = catalog::psl2_2k(2, CAP).unwrap();
        let comp = non_commuting_graph(&psl24).unwrap().complement();
        assert_eq!(
            comp.as_clique_union().unwrap().parts,
            vec![(2, 10), (3, 5), (4, 6)]
        );

        let path = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(matches!(
            path.as_clique_union(),
            Err(GraphError::NotCliqueUnion { .. })
        ));
    }

    #[test]
    fn clique_union_iff_ac_group() {
        for (spec, ac) in [
            (catalog::FamilySpec::Dihedral { m: 5 }, true),
            (catalog::FamilySpec::Gl2 { q: 3 }, true),
            (catalog::FamilySpec::HanakiP { n: 1, p: 3 }, true),
        ] {
            let group = spec.construct(CAP).unwrap();
            assert_eq!(group.is_ac_group(), ac);
            let comp = non_commuting_graph(&group).unwrap().complement();
            assert_eq!(comp.as_clique_union().is_ok(), ac, "{spec}");
        }
        // S_4 is not an AC-group and its commuting graph is not a clique union.
        let s4 = crate::testutil::symmetric_group(4);
        assert!(!s4.is_ac_group());
        let comp = non_commuting_graph(&s4).unwrap().complement();
        assert!(comp.as_clique_union().is_err());
    }

    #[test]
    fn clique_sizes_match_centralizer_partition() {
        for spec in [
            catalog::FamilySpec::Quasidihedral { n: 5 },
            catalog::FamilySpec::Frobenius20,
            catalog::FamilySpec::MetacyclicM { m: 6, n: 2 },
        ] {
            let group = spec.construct(CAP).unwrap();
            let part = group.centralizer_partition().unwrap();
            let z = part.center_order();
            let mut expected: Vec<usize> = part.sizes().iter().map(|s| s - z).collect();
            expected.sort_unstable();
            let comp = non_commuting_graph(&group).unwrap().complement();
            let union = comp.as_clique_union().unwrap();
            let mut actual = Vec::new();
            for (m, l) in union.parts {
                actual.extend(std::iter::repeat(m).take(l));
            }
            assert_eq!(actual, expected, "{spec}");
        }
    }

    #[test]
    fn max_clique_examples() {
        let q8 = catalog::generalized_quaternion(2, CAP).unwrap();
        let g = non_commuting_graph(&q8).unwrap();
        assert_eq!(g.max_clique().unwrap(), 3);

        let d6 = catalog::dihedral(3, CAP).unwrap();
        let g = non_commuting_graph(&d6).unwrap();
        assert_eq!(g.max_clique().unwrap(), 4);

        for n in 1..=8 {
            assert_eq!(complete(n).max_clique().unwrap(), n);
        }
        assert_eq!(SimpleGraph::new(0).max_clique().unwrap(), 0);
        assert_eq!(SimpleGraph::new(4).max_clique().unwrap(), 1);

        let big = SimpleGraph::new(201);
        assert!(matches!(big.max_clique(), Err(GraphError::SizeBound { .. })));
    }

    #[test]
    fn max_clique_structure_path_matches_search() {
        // The complete-multipartite shortcut must agree with plain
        // branch-and-bound, exercised here by searching the raw graph.
        for spec in [
            catalog::FamilySpec::Dihedral { m: 4 },
            catalog::FamilySpec::Dihedral { m: 7 },
            catalog::FamilySpec::GeneralizedQuaternion { n: 3 },
            catalog::FamilySpec::Frobenius20,
            catalog::FamilySpec::HanakiTheta { n: 2 },
        ] {
            let group = spec.construct(CAP).unwrap();
            let g = non_commuting_graph(&group).unwrap();
            let structured = g.max_clique().unwrap();
            let searched = super::clique::max_clique_exact(&g);
            assert_eq!(structured, searched, "{spec}");
        }
    }

    #[test]
    fn planarity_fixtures() {
        assert!(complete(4).is_planar().unwrap());
        assert!(!complete(5).is_planar().unwrap());
        let k33 = SimpleGraph::from_edges(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        );
        assert!(!k33.is_planar().unwrap());

        // Non-commuting graphs are planar exactly for D_6, D_8, Q_8.
        for (spec, planar) in [
            (catalog::FamilySpec::Dihedral { m: 3 }, true),
            (catalog::FamilySpec::Dihedral { m: 4 }, true),
            (catalog::FamilySpec::GeneralizedQuaternion { n: 2 }, true),
            (catalog::FamilySpec::Dihedral { m: 5 }, false),
            (catalog::FamilySpec::Dihedral { m: 6 }, false),
            (catalog::FamilySpec::Quasidihedral { n: 4 }, false),
            (catalog::FamilySpec::Frobenius20, false),
        ] {
            let group = spec.construct(CAP).unwrap();
            let g = non_commuting_graph(&group).unwrap();
            assert_eq!(g.is_planar().unwrap(), planar, "{spec}");
        }

        let big = SimpleGraph::new(101);
        assert!(matches!(big.is_planar(), Err(GraphError::SizeBound { .. })));
    }

    #[test]
    fn edge_list_export() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (2, 3), (0, 3)]);
        assert_eq!(g.edge_list_text(), "0 1\n0 3\n2 3\n");
    }

    proptest! {
        #[test]
        fn complement_is_an_involution(n in 1usize..28, seed in any::<u64>()) {
            let mut g = SimpleGraph::new(n);
            let mut state = seed | 1;
            for u in 0..n {
                for v in u + 1..n {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if state >> 40 & 1 == 1 {
                        g.add_edge(u, v);
                    }
                }
            }
            let cc = g.complement().complement();
            prop_assert_eq!(&cc, &g);
            // Edge counts of g and its complement partition all pairs.
            prop_assert_eq!(g.edge_count() + g.complement().edge_count(), n * (n - 1) / 2);
        }
    }
}
