//! Concrete finite groups as fully materialized multiplication tables, plus
//! the centralizer machinery the spectral computations are built on.
//!
//! Elements are canonicalized once at construction and referred to by index
//! afterwards, so equality and composition are table lookups everywhere
//! downstream.

use std::collections::HashMap;

use num_rational::Rational64;
use thiserror::Error;

/// Default ceiling on constructed group orders. Multiplication tables are
/// O(n^2) memory, so this is deliberately modest.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeded the order cap of {cap} elements")]
    SizeLimit { cap: usize },
    #[error("group is abelian: it has no non-central elements")]
    AbelianGroup,
    #[error("generator list is empty")]
    NoGenerators,
    #[error("multiplication table is not a Latin square")]
    NotLatinSquare,
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("associativity fails at indices ({x}, {y}, {z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// A finite group with a materialized Cayley table.
///
/// Indices are `usize` in the public interface; tables are stored as `u16`,
/// which is ample below the order cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    identity: u16,
}

/// The distinct centralizers of non-central elements, sizes ascending.
///
/// Ties between equal-sized centralizers are broken by comparing the sorted
/// member lists lexicographically, which makes every downstream report
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerPartition {
    pub center: Vec<usize>,
    pub centralizers: Vec<Vec<usize>>,
}

impl CentralizerPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.centralizers.iter().map(|c| c.len()).collect()
    }

    /// Number of distinct centralizers of non-central elements.
    pub fn count(&self) -> usize {
        self.centralizers.len()
    }

    pub fn center_order(&self) -> usize {
        self.center.len()
    }
}

/// Families recognizable from cheap invariants; no general isomorphism test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallFamily {
    /// (Z_p)^k for the recorded prime.
    ElementaryAbelian { p: u32 },
    /// Dihedral group of the recorded order 2m, m >= 3.
    Dihedral { order: usize },
    /// The Frobenius group of order 20 (the Suzuki group Sz(2)).
    Sz2,
    Other,
}

impl FiniteGroup {
    /// Generates the subgroup closure of `gens` inside an ambient composition
    /// context, materializing the Cayley table. Elements are indexed in
    /// breadth-first discovery order starting from the identity.
    pub fn closure_from_generators<E, M, L>(
        identity: E,
        gens: &[E],
        compose: M,
        label: L,
        cap: usize,
    ) -> Result<FiniteGroup, GroupError>
    where
        E: Clone + Eq + std::hash::Hash,
        M: Fn(&E, &E) -> E,
        L: Fn(&E) -> String,
    {
        if gens.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        let mut elems: Vec<E> = vec![identity.clone()];
        let mut index: HashMap<E, u16> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0usize;
        while head < elems.len() {
            let current = elems[head].clone();
            head += 1;
            for g in gens {
                let next = compose(&current, g);
                if !index.contains_key(&next) {
                    if elems.len() >= cap {
                        return Err(GroupError::SizeLimit { cap });
                    }
                    index.insert(next.clone(), elems.len() as u16);
                    elems.push(next);
                }
            }
        }
        let n = elems.len();
        let mut mul = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = compose(&elems[i], &elems[j]);
                mul[i * n + j] = *index
                    .get(&prod)
                    .expect("closure is closed under composition");
            }
        }
        let labels = elems.iter().map(|e| label(e)).collect();
        FiniteGroup::from_table(labels, mul)
    }

    /// Builds a group from an explicit table (`mul[i * n + j]` is i * j) and
    /// validates the group axioms.
    pub fn from_table(labels: Vec<String>, mul: Vec<u16>) -> Result<FiniteGroup, GroupError> {
        let n = labels.len();
        assert_eq!(mul.len(), n * n, "table must be n x n");
        // Latin square: every row and column is a permutation.
        let mut seen = vec![false; n];
        for i in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for j in 0..n {
                let v = mul[i * n + j] as usize;
                if v >= n || seen[v] {
                    return Err(GroupError::NotLatinSquare);
                }
                seen[v] = true;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for j in 0..n {
                let v = mul[j * n + i] as usize;
                if v >= n || seen[v] {
                    return Err(GroupError::NotLatinSquare);
                }
                seen[v] = true;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e * n + x] as usize == x && mul[x * n + e] as usize == x))
            .ok_or(GroupError::NoIdentity)? as u16;
        let mut inv = vec![u16::MAX; n];
        for x in 0..n {
            let xi = (0..n)
                .find(|&y| mul[x * n + y] == identity && mul[y * n + x] == identity)
                .ok_or(GroupError::NoInverse { element: x })?;
            inv[x] = xi as u16;
        }
        let group = FiniteGroup {
            labels,
            mul,
            inv,
            identity,
        };
        group.check_associativity()?;
        Ok(group)
    }

    /// Exhaustive associativity check up to order 200, deterministic sampling
    /// above that.
    fn check_associativity(&self) -> Result<(), GroupError> {
        let n = self.order();
        if n <= 200 {
            for x in 0..n {
                for y in 0..n {
                    let xy = self.mul(x, y);
                    for z in 0..n {
                        if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                            return Err(GroupError::NotAssociative { x, y, z });
                        }
                    }
                }
            }
        } else {
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 33) as usize
            };
            for _ in 0..200_000 {
                let (x, y, z) = (next() % n, next() % n, next() % n);
                if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                    return Err(GroupError::NotAssociative { x, y, z });
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order() + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    pub fn identity(&self) -> usize {
        self.identity as usize
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn commutes(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (x + 1..n).all(|y| self.commutes(x, y)))
    }

    /// x^k by repeated multiplication (k >= 0).
    pub fn power(&self, x: usize, k: usize) -> usize {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Order of an element.
    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut k = 1;
        while acc != self.identity() {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    /// Multiset of element orders, ascending. The identity contributes 1.
    pub fn element_orders(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = (0..self.order()).map(|x| self.element_order(x)).collect();
        orders.sort_unstable();
        orders
    }

    /// Z(G): elements commuting with everything, sorted by index.
    pub fn center(&self) -> Vec<usize> {
        let n = self.order();
        (0..n)
            .filter(|&z| (0..n).all(|x| self.commutes(z, x)))
            .collect()
    }

    /// C_G(x): elements commuting with x, sorted by index.
    pub fn centralizer(&self, x: usize) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.commutes(g, x)).collect()
    }

    /// Distinct centralizers of non-central elements, sizes ascending.
    /// Errors on abelian input, which has no non-central elements.
    pub fn centralizer_partition(&self) -> Result<CentralizerPartition, GroupError> {
        let center = self.center();
        if center.len() == self.order() {
            return Err(GroupError::AbelianGroup);
        }
        let central = self.membership(&center);
        let mut distinct: Vec<Vec<usize>> = Vec::new();
        let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
        for x in 0..self.order() {
            if central[x] {
                continue;
            }
            let c = self.centralizer(x);
            if seen.insert(c.clone(), ()).is_none() {
                distinct.push(c);
            }
        }
        distinct.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(CentralizerPartition {
            center,
            centralizers: distinct,
        })
    }

    /// True iff every non-central element has an abelian centralizer.
    /// Abelian groups qualify vacuously.
    pub fn is_ac_group(&self) -> bool {
        match self.centralizer_partition() {
            Err(GroupError::AbelianGroup) => true,
            Err(_) => unreachable!(),
            Ok(partition) => partition.centralizers.iter().all(|c| {
                c.iter()
                    .all(|&x| c.iter().all(|&y| self.commutes(x, y)))
            }),
        }
    }

    /// Number of distinct centralizers over all of G. Central elements
    /// contribute C_G(z) = G itself, so abelian groups report exactly 1;
    /// this matches the usual counting convention for n-centralizer groups.
    pub fn distinct_centralizer_count(&self) -> usize {
        match self.centralizer_partition() {
            Err(GroupError::AbelianGroup) => 1,
            Err(_) => unreachable!(),
            Ok(partition) => partition.count() + 1,
        }
    }

    /// Probability that an ordered pair of elements commutes, reduced.
    pub fn commuting_probability(&self) -> Rational64 {
        let n = self.order();
        let mut commuting = 0i64;
        for x in 0..n {
            for y in 0..n {
                if self.commutes(x, y) {
                    commuting += 1;
                }
            }
        }
        Rational64::new(commuting, (n * n) as i64)
    }

    /// Number of conjugacy classes.
    pub fn conjugacy_class_count(&self) -> usize {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut classes = 0;
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            classes += 1;
            for g in 0..n {
                let conj = self.mul(self.mul(g, x), self.inv(g));
                assigned[conj] = true;
            }
        }
        classes
    }

    /// Componentwise product group of order |G| * |A|.
    pub fn direct_product(&self, other: &FiniteGroup, cap: usize) -> Result<FiniteGroup, GroupError> {
        let (n, m) = (self.order(), other.order());
        if n.saturating_mul(m) > cap {
            return Err(GroupError::SizeLimit { cap });
        }
        let total = n * m;
        let mut labels = Vec::with_capacity(total);
        for i in 0..n {
            for j in 0..m {
                labels.push(format!("({},{})", self.label(i), other.label(j)));
            }
        }
        let mut mul = vec![0u16; total * total];
        for a in 0..total {
            let (a1, a2) = (a / m, a % m);
            for b in 0..total {
                let (b1, b2) = (b / m, b % m);
                mul[a * total + b] = (self.mul(a1, b1) * m + other.mul(a2, b2)) as u16;
            }
        }
        FiniteGroup::from_table(labels, mul)
    }

    /// The coset group G / Z(G). Cosets are labeled by their least-index
    /// representative.
    pub fn quotient_by_center(&self) -> FiniteGroup {
        let center = self.center();
        let n = self.order();
        // Map every element to the least element of its coset gZ.
        let mut rep = vec![usize::MAX; n];
        for g in 0..n {
            if rep[g] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = center.iter().map(|&z| self.mul(g, z)).collect();
            coset.sort_unstable();
            let least = coset[0];
            for member in coset {
                rep[member] = least;
            }
        }
        let mut reps: Vec<usize> = rep.iter().copied().collect();
        reps.sort_unstable();
        reps.dedup();
        let index_of: HashMap<usize, u16> = reps
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, i as u16))
            .collect();
        let q = reps.len();
        let mut mul = vec![0u16; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul[i * q + j] = index_of[&rep[self.mul(a, b)]];
            }
        }
        let labels = reps.iter().map(|&r| format!("[{}]", self.label(r))).collect();
        FiniteGroup::from_table(labels, mul).expect("coset multiplication is a group")
    }

    /// Subgroup generated by the given element indices, sorted.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.order()];
        members[self.identity()] = true;
        let mut stack: Vec<usize> = vec![self.identity()];
        let mut queue: Vec<usize> = gens.to_vec();
        while let Some(x) = queue.pop() {
            if members[x] {
                continue;
            }
            members[x] = true;
            stack.push(x);
            for i in 0..stack.len() {
                let y = stack[i];
                for &(a, b) in &[(x, y), (y, x)] {
                    let p = self.mul(a, b);
                    if !members[p] {
                        queue.push(p);
                    }
                }
            }
        }
        let mut out: Vec<usize> = members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        out.sort_unstable();
        out
    }

    /// The commutator subgroup [H, H] of a subgroup given by element indices.
    pub fn derived_of(&self, subgroup: &[usize]) -> Vec<usize> {
        let mut commutators: Vec<usize> = Vec::new();
        for &x in subgroup {
            for &y in subgroup {
                let c = self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y));
                commutators.push(c);
            }
        }
        commutators.sort_unstable();
        commutators.dedup();
        self.subgroup_closure(&commutators)
    }

    /// The commutator subgroup [G, G], sorted element indices.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let all: Vec<usize> = (0..self.order()).collect();
        self.derived_of(&all)
    }

    /// Solvability via the derived series reaching the trivial subgroup.
    pub fn is_solvable(&self) -> bool {
        let mut current: Vec<usize> = (0..self.order()).collect();
        loop {
            let next = self.derived_of(&current);
            if next.len() == 1 {
                return true;
            }
            if next.len() == current.len() {
                return false;
            }
            current = next;
        }
    }

    /// Classifies the group against a few small reference families using
    /// order, abelian-ness and presentation-defining witnesses. Returns
    /// [`SmallFamily::Other`] when no signature matches.
    pub fn recognize_small_family(&self) -> SmallFamily {
        let n = self.order();
        if self.is_abelian() {
            if let Some(p) = prime_power_base(n) {
                if n == 1 {
                    return SmallFamily::Other;
                }
                let elementary = (0..n)
                    .all(|x| x == self.identity() || self.element_order(x) == p as usize);
                if elementary {
                    return SmallFamily::ElementaryAbelian { p };
                }
            }
            return SmallFamily::Other;
        }
        if n % 2 == 0 && self.is_dihedral_of(n / 2) {
            return SmallFamily::Dihedral { order: n };
        }
        if n == 20 && self.is_frobenius20() {
            return SmallFamily::Sz2;
        }
        SmallFamily::Other
    }

    /// Witness check for D_2m: a rotation of order m whose cyclic subgroup has
    /// index 2, plus an involution outside it that inverts the rotation.
    fn is_dihedral_of(&self, m: usize) -> bool {
        if m < 3 {
            return false;
        }
        let n = self.order();
        for r in 0..n {
            if self.element_order(r) != m {
                continue;
            }
            let rot: Vec<usize> = (0..m).map(|k| self.power(r, k)).collect();
            let mut in_rot = vec![false; n];
            for &x in &rot {
                in_rot[x] = true;
            }
            let flip = (0..n).find(|&b| {
                !in_rot[b]
                    && self.element_order(b) == 2
                    && self.mul(self.mul(b, r), self.inv(b)) == self.inv(r)
            });
            if flip.is_some() {
                return true;
            }
        }
        false
    }

    /// Witness check for the order-20 Frobenius group: an order-5 element
    /// normalized, with squaring or cubing action, by an order-4 element.
    fn is_frobenius20(&self) -> bool {
        let n = self.order();
        for a in 0..n {
            if self.element_order(a) != 5 {
                continue;
            }
            for b in 0..n {
                if self.element_order(b) != 4 {
                    continue;
                }
                let conj = self.mul(self.mul(b, a), self.inv(b));
                if conj == self.power(a, 2) || conj == self.power(a, 3) {
                    return true;
                }
            }
        }
        false
    }

    /// Membership mask over element indices for a sorted set.
    fn membership(&self, set: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order()];
        for &x in set {
            mask[x] = true;
        }
        mask
    }
}

/// If n = p^k for a prime p and k >= 1, returns p.
pub fn prime_power_base(n: usize) -> Option<u32> {
    if n < 2 {
        return None;
    }
    let mut m = n;
    let mut p = 0usize;
    let mut d = 2usize;
    while d * d <= m {
        if m % d == 0 {
            p = d;
            while m % d == 0 {
                m /= d;
            }
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some(n as u32); // n itself is prime
    }
    if m == 1 {
        Some(p as u32)
    } else {
        None
    }
}
