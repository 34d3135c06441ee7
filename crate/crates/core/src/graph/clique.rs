//! Exact maximum clique via Bron-Kerbosch with pivoting on packed bit rows,
//! pruned by the best clique found so far.

use super::SimpleGraph;

/// Maximum clique size by branch-and-bound. Exponential in the worst case;
/// callers bound the vertex count.
pub fn max_clique_exact(g: &SimpleGraph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    let words = n.div_ceil(64);
    let mut candidates = vec![u64::MAX; words];
    let spare = words * 64 - n;
    candidates[words - 1] >>= spare % 64;
    if spare == 64 {
        candidates[words - 1] = 0;
    }
    let mut excluded = vec![0u64; words];
    let mut best = 0;
    expand(g, 0, &mut candidates, &mut excluded, &mut best);
    best
}

fn expand(g: &SimpleGraph, depth: usize, candidates: &mut [u64], excluded: &mut [u64], best: &mut usize) {
    let cand_count: usize = candidates.iter().map(|w| w.count_ones() as usize).sum();
    if depth + cand_count <= *best {
        return;
    }
    if cand_count == 0 {
        if excluded.iter().all(|&w| w == 0) && depth > *best {
            *best = depth;
        }
        return;
    }
    // Pivot on the vertex covering the most candidates.
    let pivot = iter_ones(candidates)
        .chain(iter_ones(excluded))
        .max_by_key(|&u| {
            g.row(u)
                .iter()
                .zip(candidates.iter())
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum::<usize>()
        })
        .unwrap();
    let branch: Vec<usize> = iter_ones(candidates)
        .filter(|&u| !g.has_edge(pivot, u))
        .collect();
    for u in branch {
        let mut next_cand: Vec<u64> = candidates
            .iter()
            .zip(g.row(u))
            .map(|(a, b)| a & b)
            .collect();
        let mut next_excl: Vec<u64> = excluded
            .iter()
            .zip(g.row(u))
            .map(|(a, b)| a & b)
            .collect();
        expand(g, depth + 1, &mut next_cand, &mut next_excl, best);
        candidates[u / 64] &= !(1 << (u % 64));
        excluded[u / 64] |= 1 << (u % 64);
    }
}

fn iter_ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(i, &w)| {
        let mut word = w;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(i * 64 + b)
            }
        })
    })
}
