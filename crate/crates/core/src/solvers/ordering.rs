use std::collections::VecDeque;

use crate::forms::SparseMatrix;

/// Symmetrized adjacency lists of a square sparsity pattern, without the
/// diagonal, each list sorted.
pub fn adjacency(m: &SparseMatrix) -> Vec<Vec<usize>> {
    let n = m.rows();
    let mut adj = vec![Vec::new(); n];
    for (_, (i, j)) in m.iter() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Reverse Cuthill-McKee ordering. Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    while order.len() < n {
        let seed = (0..n)
            .filter(|v| !visited[*v])
            .min_by_key(|v| (degree[*v], *v))
            .expect("unvisited vertex remains");
        let start = pseudo_peripheral(adj, &degree, seed);

        let mut queue = VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|w| !visited[*w]).collect();
            next.sort_by_key(|w| (degree[*w], *w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// A few rounds of the George-Liu search for a far-away start vertex.
fn pseudo_peripheral(adj: &[Vec<usize>], degree: &[usize], seed: usize) -> usize {
    let mut start = seed;
    let mut depth = 0;
    for _ in 0..4 {
        let levels = level_structure(adj, start);
        let last = levels.last().expect("non-empty level structure");
        if levels.len() <= depth {
            break;
        }
        depth = levels.len();
        start = *last
            .iter()
            .min_by_key(|v| (degree[**v], **v))
            .expect("non-empty level");
    }
    start
}

fn level_structure(adj: &[Vec<usize>], start: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut levels = vec![vec![start]];
    loop {
        let mut next = Vec::new();
        for v in levels.last().unwrap() {
            for w in &adj[*v] {
                if !seen[*w] {
                    seen[*w] = true;
                    next.push(*w);
                }
            }
        }
        if next.is_empty() {
            return levels;
        }
        levels.push(next);
    }
}

/// Inverse permutation: `inv[old] = new`.
pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (new, old) in perm.iter().enumerate() {
        inv[*old] = new;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use sprs::TriMat;

    #[test]
    fn rcm_is_permutation_and_narrows_band() {
        // A path graph numbered in a scrambled order.
        let n = 50;
        let label: Vec<usize> = (0..n).map(|k| (k * 17) % n).collect();
        let mut t = TriMat::new((n, n));
        for k in 0..n - 1 {
            t.add_triplet(label[k], label[k + 1], 1.0);
            t.add_triplet(label[k + 1], label[k], 1.0);
        }
        let m: SparseMatrix = t.to_csr();
        let perm = reverse_cuthill_mckee(&adjacency(&m));
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        let inv = invert(&perm);
        let band = m.iter().map(|(_, (i, j))| inv[i].abs_diff(inv[j])).max().unwrap();
        assert_eq!(band, 1);
    }

    #[test]
    fn handles_disconnected_components() {
        let mut t = TriMat::new((4, 4));
        t.add_triplet(0, 2, 1.0);
        t.add_triplet(2, 0, 1.0);
        let m: SparseMatrix = t.to_csr();
        let perm = reverse_cuthill_mckee(&adjacency(&m));
        assert_eq!(perm.len(), 4);
        assert_eq!(invert(&perm).len(), 4);
    }
}
