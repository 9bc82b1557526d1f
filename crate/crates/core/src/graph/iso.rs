//! Exhaustive graph isomorphism for small graphs.

use super::Graph;

/// Finds a bijection `f` with `{u, v} ∈ E(a) ⇔ {f(u), f(v)} ∈ E(b)`.
/// Backtracking with degree filtering; intended for graphs of a dozen or so
/// vertices.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    let n = a.n();
    if n != b.n() || a.m() != b.m() {
        return None;
    }
    let mut da: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    let (sa, sb) = (da.clone(), db.clone());
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    // place high-degree vertices first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(sa[v]), v));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        a: &Graph,
        b: &Graph,
        order: &[usize],
        sa: &[usize],
        sb: &[usize],
        k: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for w in 0..b.n() {
            if used[w] || sa[v] != sb[w] {
                continue;
            }
            let consistent = order[..k]
                .iter()
                .all(|&u| a.has_edge(u, v) == b.has_edge(map[u], w));
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if rec(a, b, order, sa, sb, k + 1, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    if rec(a, b, &order, &sa, &sb, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    find_isomorphism(a, b).is_some()
}
