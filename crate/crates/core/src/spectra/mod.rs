//! Laplacian spectra by three independent routes: closed-form rules for
//! clique unions and complements, the centralizer-partition structure of
//! AC-groups, and a numeric eigensolver whose rounded values are certified
//! by exact integer rank computations.

mod bareiss;
mod jacobi;

use std::fmt;

use num_rational::Rational64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{CliqueUnion, SimpleGraph};
use crate::group::{FiniteGroup, GroupError};

pub use jacobi::{JACOBI_RELATIVE_TOL, JACOBI_SWEEP_CAP};

/// Default absolute tolerance for snapping numeric eigenvalues to integers.
pub const DEFAULT_ROUNDING_TOL: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum SpectraError {
    #[error("formula produced a negative multiplicity {multiplicity} for eigenvalue {eigenvalue}")]
    NegativeMultiplicity {
        eigenvalue: String,
        multiplicity: i64,
    },
    #[error("spectrum is missing the zero eigenvalue")]
    MissingZero,
    #[error("spectrum totals {actual} eigenvalues, expected {expected}")]
    TotalMismatch { expected: usize, actual: usize },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("eigenvalue {value} is not within {tol} of an integer")]
    RoundingFailure { value: f64, tol: f64 },
    #[error("group is not an AC-group; the structural spectrum rule does not apply")]
    NotAcGroup,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A multiset of exact eigenvalues: strictly ascending, equal values merged,
/// multiplicities positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    entries: Vec<(Rational64, usize)>,
}

impl Spectrum {
    /// Builds the canonical merged form from arbitrary (eigenvalue,
    /// multiplicity) pairs. Zero multiplicities are dropped.
    pub fn from_parts(parts: Vec<(Rational64, usize)>) -> Spectrum {
        let mut parts: Vec<(Rational64, usize)> =
            parts.into_iter().filter(|&(_, m)| m > 0).collect();
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        let mut entries: Vec<(Rational64, usize)> = Vec::new();
        for (value, mult) in parts {
            match entries.last_mut() {
                Some((v, m)) if *v == value => *m += mult,
                _ => entries.push((value, mult)),
            }
        }
        Spectrum { entries }
    }

    /// Like [`from_parts`](Self::from_parts) but for integer formulas whose
    /// multiplicities may evaluate negative; such formulas are rejected as
    /// malformed rather than silently clamped.
    pub fn from_signed_parts(parts: &[(i64, i64)]) -> Result<Spectrum, SpectraError> {
        if let Some(&(value, mult)) = parts.iter().find(|&&(_, m)| m < 0) {
            return Err(SpectraError::NegativeMultiplicity {
                eigenvalue: value.to_string(),
                multiplicity: mult,
            });
        }
        Ok(Spectrum::from_parts(
            parts
                .iter()
                .map(|&(v, m)| (Rational64::from_integer(v), m as usize))
                .collect(),
        ))
    }

    pub fn entries(&self) -> &[(Rational64, usize)] {
        &self.entries
    }

    /// Total multiplicity, i.e. the vertex count of the underlying graph.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Sum of eigenvalue * multiplicity; equals trace(L) = 2|E| for a graph.
    pub fn trace(&self) -> Rational64 {
        self.entries
            .iter()
            .map(|&(v, m)| v * Rational64::from_integer(m as i64))
            .sum()
    }

    pub fn multiplicity_of(&self, value: Rational64) -> usize {
        self.entries
            .iter()
            .find(|&&(v, _)| v == value)
            .map(|&(_, m)| m)
            .unwrap_or(0)
    }

    pub fn max_eigenvalue(&self) -> Option<Rational64> {
        self.entries.last().map(|&(v, _)| v)
    }

    /// True iff every eigenvalue is an integer.
    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|(v, _)| v.is_integer())
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (value, mult)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if *mult == 1 {
                write!(f, "{value}")?;
            } else {
                write!(f, "{value}^{mult}")?;
            }
        }
        write!(f, "}}")
    }
}

impl Serialize for Spectrum {
    /// JSON array of `{"eigenvalue": integer-or-"num/den", "multiplicity": n}`
    /// in ascending eigenvalue order.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            eigenvalue: serde_json::Value,
            multiplicity: usize,
        }
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for (value, mult) in &self.entries {
            let eigenvalue = if value.is_integer() {
                serde_json::Value::from(value.to_integer())
            } else {
                serde_json::Value::from(value.to_string())
            };
            seq.serialize_element(&Entry {
                eigenvalue,
                multiplicity: *mult,
            })?;
        }
        seq.end()
    }
}

/// A symmetric matrix with exact integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntegerMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> IntegerMatrix {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            assert_eq!(row.len(), n, "matrix must be square");
            entries.extend_from_slice(row);
        }
        let m = IntegerMatrix { n, entries };
        assert!(m.is_symmetric(), "matrix must be symmetric");
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Floating eigenvalues from the numeric route, ascending, with the final
/// off-diagonal residual of the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSpectrum {
    pub values: Vec<f64>,
    pub residual: f64,
    pub threshold: f64,
}

/// Outcome of the exact L-integrality decision.
#[derive(Debug, Clone, PartialEq)]
pub struct LIntegrality {
    pub integral: bool,
    /// Certified spectrum when integral: multiplicities are exact ranks.
    pub certificate: Option<Spectrum>,
    /// A numeric eigenvalue that failed integer rounding, when one exists.
    pub failed_value: Option<f64>,
}

/// L = D - A: degree matrix minus adjacency matrix.
pub fn laplacian(g: &SimpleGraph) -> IntegerMatrix {
    let n = g.vertex_count();
    let mut entries = vec![0i64; n * n];
    for u in 0..n {
        entries[u * n + u] = g.degree(u) as i64;
        for v in 0..n {
            if g.has_edge(u, v) {
                entries[u * n + v] = -1;
            }
        }
    }
    IntegerMatrix { n, entries }
}

/// Laplacian spectrum of a disjoint union of cliques: each K_m contributes
/// one zero and m - 1 copies of m.
pub fn spectrum_of_clique_union(union: &CliqueUnion) -> Spectrum {
    let mut parts = vec![(
        Rational64::from_integer(0),
        union.clique_count(),
    )];
    for &(m, l) in &union.parts {
        parts.push((Rational64::from_integer(m as i64), l * (m - 1)));
    }
    Spectrum::from_parts(parts)
}

/// Laplacian spectrum of the complement graph: one fresh zero, every
/// eigenvalue alpha becomes v - alpha, and one copy of the original zero is
/// consumed.
pub fn spectrum_of_complement(s: &Spectrum, vertices: usize) -> Result<Spectrum, SpectraError> {
    if s.total() != vertices {
        return Err(SpectraError::TotalMismatch {
            expected: vertices,
            actual: s.total(),
        });
    }
    let zero = Rational64::from_integer(0);
    if s.multiplicity_of(zero) == 0 {
        return Err(SpectraError::MissingZero);
    }
    let v = Rational64::from_integer(vertices as i64);
    let mut parts = vec![(zero, 1)];
    for &(value, mult) in s.entries() {
        let mult = if value == zero { mult - 1 } else { mult };
        parts.push((v - value, mult));
    }
    Ok(Spectrum::from_parts(parts))
}

/// Laplacian spectrum of the non-commuting graph of an AC-group, straight
/// from its centralizer partition: the commuting graph is the disjoint union
/// of the cliques X_i minus Z(G), so the spectrum is
/// `{0, (|G|-|X_i|)^(|X_i|-|Z|-1) for each i, (|G|-|Z|)^(n-1)}`.
pub fn spectrum_ac_structural(group: &FiniteGroup) -> Result<Spectrum, SpectraError> {
    let partition = group.centralizer_partition()?;
    if !group.is_ac_group() {
        return Err(SpectraError::NotAcGroup);
    }
    let order = group.order() as i64;
    let z = partition.center_order() as i64;
    let mut parts = vec![(Rational64::from_integer(0), 1)];
    for size in partition.sizes() {
        parts.push((
            Rational64::from_integer(order - size as i64),
            (size as i64 - z - 1) as usize,
        ));
    }
    parts.push((
        Rational64::from_integer(order - z),
        partition.count() - 1,
    ));
    Ok(Spectrum::from_parts(parts))
}

/// All eigenvalues of a symmetric integer matrix by cyclic Jacobi rotations.
pub fn spectrum_numeric(matrix: &IntegerMatrix) -> Result<NumericSpectrum, SpectraError> {
    jacobi::eigenvalues(matrix)
}

/// Snaps every numeric eigenvalue to the nearest integer within `tol`
/// (absolute) and groups equal integers; fails on the first eigenvalue that
/// is not close to an integer.
pub fn round_to_integer_spectrum(
    numeric: &NumericSpectrum,
    tol: f64,
) -> Result<Spectrum, SpectraError> {
    let mut parts: Vec<(Rational64, usize)> = Vec::new();
    for &value in &numeric.values {
        let rounded = value.round();
        if (value - rounded).abs() > tol {
            return Err(SpectraError::RoundingFailure { value, tol });
        }
        let r = Rational64::from_integer(rounded as i64);
        match parts.last_mut() {
            Some((v, m)) if *v == r => *m += 1,
            _ => parts.push((r, 1)),
        }
    }
    Ok(Spectrum::from_parts(parts))
}

/// Exact multiplicity of `lambda` as an eigenvalue of the matrix:
/// dim - rank(M - lambda I), with the rank computed by fraction-free
/// Bareiss elimination over arbitrary-precision integers.
pub fn certify_multiplicity(matrix: &IntegerMatrix, lambda: i64) -> usize {
    bareiss::eigen_nullity(matrix, lambda)
}

/// Exact L-integrality decision: the numeric spectrum must round to
/// integers, and the certified multiplicities of the rounded values must
/// account for every eigenvalue. Rounding alone never declares integrality.
pub fn is_l_integral(g: &SimpleGraph, tol: f64) -> Result<LIntegrality, SpectraError> {
    let matrix = laplacian(g);
    let numeric = spectrum_numeric(&matrix)?;
    let rounded = match round_to_integer_spectrum(&numeric, tol) {
        Ok(s) => s,
        Err(SpectraError::RoundingFailure { value, .. }) => {
            return Ok(LIntegrality {
                integral: false,
                certificate: None,
                failed_value: Some(value),
            })
        }
        Err(other) => return Err(other),
    };
    use rayon::prelude::*;
    let certified_parts: Vec<(Rational64, usize)> = rounded
        .entries()
        .par_iter()
        .map(|&(value, _)| {
            let lambda = value.to_integer();
            (value, certify_multiplicity(&matrix, lambda))
        })
        .collect();
    let certified = Spectrum::from_parts(certified_parts);
    let integral = certified.total() == g.vertex_count();
    Ok(LIntegrality {
        certificate: integral.then_some(certified),
        integral,
        failed_value: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::graph::non_commuting_graph;
    use crate::group::DEFAULT_ORDER_CAP;

    const CAP: usize = DEFAULT_ORDER_CAP;

    fn int_spec(parts: &[(i64, usize)]) -> Spectrum {
        Spectrum::from_parts(
            parts
                .iter()
                .map(|&(v, m)| (Rational64::from_integer(v), m))
                .collect(),
        )
    }

    #[test]
    fn merging_and_display() {
        let s = int_spec(&[(4, 1), (0, 1), (4, 2), (6, 2)]);
        assert_eq!(s.entries().len(), 3);
        assert_eq!(s.to_string(), "{0, 4^3, 6^2}");
        assert_eq!(s.total(), 6);
        assert_eq!(s.trace(), Rational64::from_integer(24));
    }

    #[test]
    fn signed_parts_reject_negative_multiplicities() {
        let err = Spectrum::from_signed_parts(&[(0, 1), (57, -38)]).unwrap_err();
        assert!(matches!(err, SpectraError::NegativeMultiplicity { .. }));
        let ok = Spectrum::from_signed_parts(&[(0, 1), (3, 0), (5, 3)]).unwrap();
        assert_eq!(ok, int_spec(&[(0, 1), (5, 3)]));
    }

    #[test]
    fn laplacian_of_k3() {
        let g = SimpleGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        let l = laplacian(&g);
        assert_eq!(
            l,
            IntegerMatrix::from_rows(vec![
                vec![2, -1, -1],
                vec![-1, 2, -1],
                vec![-1, -1, 2],
            ])
        );
        let empty = laplacian(&SimpleGraph::new(3));
        assert_eq!(empty.trace(), 0);
        let d6 = catalog::dihedral(3, CAP).unwrap();
        let graph = non_commuting_graph(&d6).unwrap();
        assert_eq!(laplacian(&graph).trace(), 18);
    }

    #[test]
    fn clique_union_rule() {
        let u = CliqueUnion { parts: vec![(4, 3)] };
        assert_eq!(spectrum_of_clique_union(&u), int_spec(&[(0, 3), (4, 9)]));
        let u = CliqueUnion { parts: vec![(1, 7)] };
        assert_eq!(spectrum_of_clique_union(&u), int_spec(&[(0, 7)]));
        let u = CliqueUnion { parts: vec![(2, 3)] };
        assert_eq!(spectrum_of_clique_union(&u), int_spec(&[(0, 3), (2, 3)]));
    }

    #[test]
    fn complement_rule() {
        let s = int_spec(&[(0, 3), (2, 3)]);
        assert_eq!(
            spectrum_of_complement(&s, 6).unwrap(),
            int_spec(&[(0, 1), (4, 3), (6, 2)])
        );
        // Complement of K_n is the empty graph.
        let kn = int_spec(&[(0, 1), (5, 4)]);
        assert_eq!(spectrum_of_complement(&kn, 5).unwrap(), int_spec(&[(0, 5)]));
        let s = int_spec(&[(0, 8), (6, 5)]);
        assert_eq!(
            spectrum_of_complement(&s, 13).unwrap(),
            int_spec(&[(0, 1), (7, 5), (13, 7)])
        );
        // Malformed inputs.
        let no_zero = int_spec(&[(2, 3)]);
        assert_eq!(
            spectrum_of_complement(&no_zero, 3),
            Err(SpectraError::MissingZero)
        );
        assert!(matches!(
            spectrum_of_complement(&int_spec(&[(0, 2)]), 5),
            Err(SpectraError::TotalMismatch { .. })
        ));
    }

    #[test]
    fn complement_rule_is_involutive() {
        for parts in [
            vec![(0i64, 3usize), (2, 3)],
            vec![(0, 1), (1, 2), (5, 4), (7, 1)],
            vec![(0, 2), (4, 6)],
        ] {
            let s = int_spec(&parts);
            let v = s.total();
            let twice = spectrum_of_complement(&spectrum_of_complement(&s, v).unwrap(), v).unwrap();
            assert_eq!(twice, s);
        }
    }

    #[test]
    fn structural_rule_examples() {
        let f20 = catalog::frobenius20(CAP).unwrap();
        assert_eq!(
            spectrum_ac_structural(&f20).unwrap(),
            int_spec(&[(0, 1), (15, 3), (16, 10), (19, 5)])
        );
        let q8 = catalog::generalized_quaternion(2, CAP).unwrap();
        assert_eq!(
            spectrum_ac_structural(&q8).unwrap(),
            int_spec(&[(0, 1), (4, 3), (6, 2)])
        );
        let gl23 = catalog::gl2(3, CAP).unwrap();
        assert_eq!(
            spectrum_ac_structural(&gl23).unwrap(),
            int_spec(&[(0, 1), (40, 15), (42, 12), (44, 6), (46, 12)])
        );
        // Non-AC input is a domain error.
        let s4 = crate::testutil::symmetric_group(4);
        assert_eq!(spectrum_ac_structural(&s4), Err(SpectraError::NotAcGroup));
        // Abelian input propagates the group error.
        let z6 = catalog::abelian(&[6], CAP).unwrap();
        assert!(matches!(
            spectrum_ac_structural(&z6),
            Err(SpectraError::Group(GroupError::AbelianGroup))
        ));
    }

    #[test]
    fn numeric_route_small_cases() {
        let k3 = laplacian(&SimpleGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]));
        let ns = spectrum_numeric(&k3).unwrap();
        let expected = [0.0, 3.0, 3.0];
        for (a, b) in ns.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }

        let zero = IntegerMatrix::from_rows(vec![vec![0; 4]; 4]);
        let ns = spectrum_numeric(&zero).unwrap();
        assert!(ns.values.iter().all(|&v| v == 0.0));

        // D_12 via the m-even closed form {0, 6^3, 8^3, 10^3}.
        let d12 = catalog::dihedral(6, CAP).unwrap();
        let l = laplacian(&non_commuting_graph(&d12).unwrap());
        let ns = spectrum_numeric(&l).unwrap();
        let expected = [0.0, 6.0, 6.0, 6.0, 8.0, 8.0, 8.0, 10.0, 10.0, 10.0];
        assert_eq!(ns.values.len(), expected.len());
        for (a, b) in ns.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn rounding_behavior() {
        let ns = NumericSpectrum {
            values: vec![0.000000001, 2.999999998, 3.0],
            residual: 0.0,
            threshold: 0.0,
        };
        assert_eq!(
            round_to_integer_spectrum(&ns, 1e-8).unwrap(),
            int_spec(&[(0, 1), (3, 2)])
        );
        let bad = NumericSpectrum {
            values: vec![1.5],
            residual: 0.0,
            threshold: 0.0,
        };
        assert!(matches!(
            round_to_integer_spectrum(&bad, 1e-8),
            Err(SpectraError::RoundingFailure { .. })
        ));
    }

    #[test]
    fn certification_examples() {
        let k3 = laplacian(&SimpleGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]));
        assert_eq!(certify_multiplicity(&k3, 3), 2);
        assert_eq!(certify_multiplicity(&k3, 1), 0);
        assert_eq!(certify_multiplicity(&k3, 0), 1);

        let qd16 = catalog::quasidihedral(4, CAP).unwrap();
        let l = laplacian(&non_commuting_graph(&qd16).unwrap());
        assert_eq!(certify_multiplicity(&l, 12), 4);
    }

    #[test]
    fn zero_multiplicity_counts_components() {
        let mut g = SimpleGraph::new(7);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(3, 4);
        let l = laplacian(&g);
        assert_eq!(certify_multiplicity(&l, 0), g.connected_components().len());
    }

    #[test]
    fn l_integral_decisions() {
        let d8 = catalog::dihedral(4, CAP).unwrap();
        let g = non_commuting_graph(&d8).unwrap();
        let result = is_l_integral(&g, DEFAULT_ROUNDING_TOL).unwrap();
        assert!(result.integral);
        assert_eq!(
            result.certificate.unwrap(),
            int_spec(&[(0, 1), (4, 3), (6, 2)])
        );

        // The 5-cycle has irrational Laplacian eigenvalues.
        let c5 = SimpleGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let result = is_l_integral(&c5, DEFAULT_ROUNDING_TOL).unwrap();
        assert!(!result.integral);
        assert!(result.failed_value.is_some());
        assert!(result.certificate.is_none());
    }

    #[test]
    fn certified_spectrum_matches_structural_and_trace() {
        for spec in [
            catalog::FamilySpec::Dihedral { m: 5 },
            catalog::FamilySpec::Quasidihedral { n: 4 },
            catalog::FamilySpec::HanakiTheta { n: 2 },
        ] {
            let group = spec.construct(CAP).unwrap();
            let g = non_commuting_graph(&group).unwrap();
            let structural = spectrum_ac_structural(&group).unwrap();
            let result = is_l_integral(&g, DEFAULT_ROUNDING_TOL).unwrap();
            let certified = result.certificate.unwrap();
            assert_eq!(certified, structural, "{spec}");
            assert_eq!(
                certified.trace(),
                Rational64::from_integer(2 * g.edge_count() as i64)
            );
            // Laplacian eigenvalues never exceed the vertex count.
            assert!(
                certified.max_eigenvalue().unwrap()
                    <= Rational64::from_integer(g.vertex_count() as i64)
            );
        }
    }

    #[test]
    fn spectrum_json_shape() {
        let s = int_spec(&[(0, 1), (4, 3)]);
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(
            json,
            serde_json::json!([
                {"eigenvalue": 0, "multiplicity": 1},
                {"eigenvalue": 4, "multiplicity": 3},
            ])
        );
        let half = Spectrum::from_parts(vec![(Rational64::new(1, 2), 2)]);
        let json = serde_json::to_value(&half).unwrap();
        assert_eq!(
            json,
            serde_json::json!([{"eigenvalue": "1/2", "multiplicity": 2}])
        );
    }
}
