use std::collections::BTreeSet;

use super::Graph;
use crate::error::{Error, Result};

/// Tests chordality with maximum cardinality search. On success returns a
/// perfect elimination order (each vertex's later neighbours form a clique).
pub fn is_chordal(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut numbered = vec![false; n];
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        // ties go to the smallest index
        let v = (0..n)
            .filter(|&v| !numbered[v])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .unwrap();
        numbered[v] = true;
        visit.push(v);
        for &u in g.neighbors(v) {
            if !numbered[u] {
                weight[u] += 1;
            }
        }
    }
    visit.reverse();
    if is_perfect_elimination_order(g, &visit) {
        Some(visit)
    } else {
        None
    }
}

pub(crate) fn is_perfect_elimination_order(g: &Graph, order: &[usize]) -> bool {
    let mut pos = vec![0usize; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    for &v in order {
        let later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        let Some(&parent) = later.iter().min_by_key(|&&u| pos[u]) else {
            continue;
        };
        if later
            .iter()
            .any(|&u| u != parent && !g.has_edge(parent, u))
        {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct ChordalCompletion {
    pub graph: Graph,
    pub clique_number: usize,
    pub fill_edges: Vec<(usize, usize)>,
}

/// Eliminates vertices in `order`, turning each vertex's later neighbourhood
/// into a clique. The result is chordal with `order` as a perfect
/// elimination order.
pub fn chordal_completion(g: &Graph, order: &[usize]) -> Result<ChordalCompletion> {
    let n = g.n();
    check_permutation(order, n)?;
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut h = g.clone();
    let mut fill = Vec::new();
    let mut clique_number = usize::from(n > 0);
    for &v in order {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        clique_number = clique_number.max(later.len() + 1);
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                    h.add_edge_idx(a, b)?;
                    fill.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    Ok(ChordalCompletion {
        graph: h,
        clique_number,
        fill_edges: fill,
    })
}

pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::Invalid(format!(
            "order has {} entries, graph has {n} vertices",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::Invalid("order is not a permutation of the vertices".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid_graph;

    /// Brute-force oracle: a graph is chordal iff no induced cycle of length >= 4.
    fn has_long_induced_cycle(g: &Graph) -> bool {
        let n = g.n();
        let masks = g.masks();
        for s in 0u64..(1 << n) {
            let k = s.count_ones();
            if k < 4 {
                continue;
            }
            // induced subgraph is a cycle iff connected and 2-regular
            let mut two_regular = true;
            for v in 0..n {
                if s >> v & 1 == 1 && (masks[v] & s).count_ones() != 2 {
                    two_regular = false;
                    break;
                }
            }
            if !two_regular {
                continue;
            }
            let start = s.trailing_zeros() as usize;
            let mut reach = 1u64 << start;
            loop {
                let mut next = reach;
                for v in 0..n {
                    if reach >> v & 1 == 1 {
                        next |= masks[v] & s;
                    }
                }
                if next == reach {
                    break;
                }
                reach = next;
            }
            if reach == s {
                return true;
            }
        }
        false
    }

    #[test]
    fn small_cases() {
        assert!(is_chordal(&Graph::complete(3)).is_some());
        assert!(is_chordal(&Graph::cycle(4)).is_none());
        assert!(is_chordal(&grid_graph(3)).is_none());
        assert!(has_long_induced_cycle(&grid_graph(3)));
        assert!(is_chordal(&Graph::path(6)).is_some());
        assert!(is_chordal(&Graph::new()).is_some());
    }

    #[test]
    fn completion_examples() {
        let p4 = Graph::path(4);
        let c = chordal_completion(&p4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(c.graph, p4);
        assert_eq!(c.clique_number, 2);

        let c4 = Graph::cycle(4);
        for order in [[0, 1, 2, 3], [2, 0, 3, 1], [3, 2, 1, 0]] {
            let c = chordal_completion(&c4, &order).unwrap();
            assert_eq!(c.graph.m(), 5);
            assert_eq!(c.fill_edges.len(), 1);
            assert_eq!(c.clique_number, 3);
        }

        let k5 = Graph::complete(5);
        let c = chordal_completion(&k5, &[4, 2, 0, 1, 3]).unwrap();
        assert_eq!(c.graph, k5);
        assert_eq!(c.clique_number, 5);

        assert!(chordal_completion(&c4, &[0, 1, 2]).is_err());
        assert!(chordal_completion(&c4, &[0, 1, 2, 2]).is_err());
    }

    #[test]
    fn mcs_agrees_with_induced_cycle_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=8);
            let p = rng.gen_range(0.2..0.8);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge_idx(u, v).unwrap();
                    }
                }
            }
            assert_eq!(is_chordal(&g).is_some(), !has_long_induced_cycle(&g));
            let order: Vec<usize> = (0..n).rev().collect();
            let c = chordal_completion(&g, &order).unwrap();
            assert!(is_chordal(&c.graph).is_some());
        }
    }
}
