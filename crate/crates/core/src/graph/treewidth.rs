use std::collections::HashMap;

use super::chordal::check_permutation;
use super::{Graph, TreeDecomposition};
use crate::error::{Error, Result};

/// Default vertex cap for [`treewidth_exact`].
pub const DEFAULT_EXACT_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heuristic {
    MinFill,
    MinDegree,
}

impl std::str::FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-fill" => Ok(Heuristic::MinFill),
            "min-degree" => Ok(Heuristic::MinDegree),
            _ => Err(Error::Invalid(format!(
                "unknown heuristic `{s}` (expected min-fill or min-degree)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TreewidthResult {
    pub width: usize,
    pub order: Vec<usize>,
    pub decomposition: TreeDecomposition,
}

/// Width of the decomposition induced by eliminating in `order`.
pub fn elimination_width(g: &Graph, order: &[usize]) -> Result<usize> {
    Ok(eliminate(g, order)?.iter().map(Vec::len).max().unwrap_or(0))
}

/// For each position in `order`, the later neighbours of that vertex in the
/// filled graph.
fn eliminate(g: &Graph, order: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = g.n();
    check_permutation(order, n)?;
    let mut adj: Vec<std::collections::BTreeSet<usize>> =
        (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut gone = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for &v in order {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&u| !gone[u]).collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        gone[v] = true;
        out.push(later);
    }
    Ok(out)
}

/// Builds a compacted tree decomposition from an elimination order. Each
/// vertex's bag is itself plus its later filled neighbours; the bag hangs
/// below the bag of the earliest such neighbour.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> Result<TreeDecomposition> {
    let n = g.n();
    if n == 0 {
        return Ok(TreeDecomposition::new(vec![Vec::new()], Vec::new()));
    }
    let later = eliminate(g, order)?;
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n - 1);
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let mut bag = later[i].clone();
        bag.push(v);
        bags.push(bag);
        match later[i].iter().min_by_key(|&&u| pos[u]) {
            Some(&p) => edges.push((i, pos[p])),
            None => roots.push(i),
        }
    }
    // one root per component; chain them so the result is a single tree
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    Ok(TreeDecomposition::new(bags, edges).compact())
}

/// Greedy elimination ordering. Ties go to the smallest vertex index.
pub fn treewidth_upper(g: &Graph, heuristic: Heuristic) -> TreewidthResult {
    let order = greedy_order(g, heuristic);
    let decomposition = decomposition_from_order(g, &order).expect("greedy order is a permutation");
    TreewidthResult {
        width: decomposition.width(),
        order,
        decomposition,
    }
}

fn greedy_order(g: &Graph, heuristic: Heuristic) -> Vec<usize> {
    let n = g.n();
    let mut adj: Vec<std::collections::BTreeSet<usize>> =
        (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let score = |v: usize| -> usize {
            match heuristic {
                Heuristic::MinDegree => adj[v].len(),
                Heuristic::MinFill => {
                    let ns: Vec<usize> = adj[v].iter().copied().collect();
                    let mut fill = 0;
                    for (i, &a) in ns.iter().enumerate() {
                        for &b in &ns[i + 1..] {
                            if !adj[a].contains(&b) {
                                fill += 1;
                            }
                        }
                    }
                    fill
                }
            }
        };
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (score(v), adj[v].len(), v))
            .unwrap();
        let ns: Vec<usize> = adj[v].iter().copied().collect();
        for &u in &ns {
            adj[u].remove(&v);
        }
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Contraction degeneracy: repeatedly contract a minimum-degree vertex into
/// its minimum-degree neighbour. The largest minimum degree seen is a lower
/// bound on treewidth.
pub fn treewidth_lower(g: &Graph) -> usize {
    let n = g.n();
    let mut adj: Vec<std::collections::BTreeSet<usize>> =
        (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut alive = vec![true; n];
    let mut lb = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (adj[v].len(), v))
            .unwrap();
        lb = lb.max(adj[v].len());
        alive[v] = false;
        let ns: Vec<usize> = adj[v].iter().copied().collect();
        for &u in &ns {
            adj[u].remove(&v);
        }
        if let Some(&w) = ns.iter().min_by_key(|&&u| (adj[u].len(), u)) {
            for &u in &ns {
                if u != w {
                    adj[u].insert(w);
                    adj[w].insert(u);
                }
            }
        }
        adj[v].clear();
    }
    lb
}

/// Exact treewidth by depth-first branch and bound over elimination orders.
///
/// The search state is the set of eliminated vertices; the cost of
/// eliminating `v` next is the number of uneliminated vertices reachable from
/// `v` through eliminated ones. A min-fill order seeds the incumbent, states
/// reached again with no better partial width are cut, and the search stops
/// once the incumbent meets the contraction-degeneracy lower bound.
pub fn treewidth_exact(g: &Graph, cap: usize) -> Result<TreewidthResult> {
    let n = g.n();
    if n > cap || n > 64 {
        return Err(Error::CapExceeded {
            what: "graph",
            size: n,
            cap: cap.min(64),
            hint: "; use treewidth_upper or raise --cap-tw",
        });
    }
    let seed = [Heuristic::MinFill, Heuristic::MinDegree]
        .into_iter()
        .map(|h| treewidth_upper(g, h))
        .min_by_key(|r| r.width)
        .unwrap();
    let lb = treewidth_lower(g);
    if seed.width <= lb || n <= 1 {
        return Ok(seed);
    }
    let mut search = Search {
        masks: g.masks(),
        n,
        full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
        best: seed.width,
        best_order: None,
        lb,
        seen: HashMap::new(),
        path: Vec::with_capacity(n),
    };
    search.dfs(0, 0);
    match search.best_order.take() {
        Some(order) => {
            let decomposition = decomposition_from_order(g, &order)?;
            debug_assert_eq!(decomposition.width(), search.best);
            Ok(TreewidthResult {
                width: decomposition.width(),
                order,
                decomposition,
            })
        }
        None => Ok(seed),
    }
}

struct Search {
    masks: Vec<u64>,
    n: usize,
    full: u64,
    best: usize,
    best_order: Option<Vec<usize>>,
    lb: usize,
    seen: HashMap<u64, usize>,
    path: Vec<usize>,
}

impl Search {
    /// Uneliminated vertices reachable from `v` via eliminated vertices.
    fn q(&self, eliminated: u64, v: usize) -> u64 {
        let mut frontier = 1u64 << v;
        let mut visited = frontier;
        let mut out = 0u64;
        while frontier != 0 {
            let u = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let ns = self.masks[u] & !visited;
            visited |= ns;
            out |= ns & !eliminated;
            frontier |= ns & eliminated;
        }
        out
    }

    fn dfs(&mut self, eliminated: u64, width: usize) {
        if self.best <= self.lb {
            return;
        }
        let remaining = (self.full & !eliminated).count_ones() as usize;
        if remaining == 0 || remaining <= width + 1 {
            // any completion keeps the width
            if width < self.best {
                self.best = width;
                let mut order = self.path.clone();
                order.extend((0..self.n).filter(|&v| eliminated >> v & 1 == 0));
                self.best_order = Some(order);
            }
            return;
        }
        match self.seen.get(&eliminated) {
            Some(&w) if w <= width => return,
            _ => {
                self.seen.insert(eliminated, width);
            }
        }
        let mut cands: Vec<(usize, usize)> = (0..self.n)
            .filter(|&v| eliminated >> v & 1 == 0)
            .map(|v| (self.q(eliminated, v).count_ones() as usize, v))
            .collect();
        cands.sort_unstable();
        for (d, v) in cands {
            let w = width.max(d);
            if w >= self.best {
                break;
            }
            self.path.push(v);
            self.dfs(eliminated | (1u64 << v), w);
            self.path.pop();
            if self.best <= self.lb {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{grid_graph, verify_decomposition};

    fn brute_force_tw(g: &Graph) -> usize {
        fn rec(g: &Graph, order: &mut Vec<usize>, used: &mut Vec<bool>, best: &mut usize) {
            if order.len() == g.n() {
                *best = (*best).min(elimination_width(g, order).unwrap());
                return;
            }
            for v in 0..g.n() {
                if !used[v] {
                    used[v] = true;
                    order.push(v);
                    rec(g, order, used, best);
                    order.pop();
                    used[v] = false;
                }
            }
        }
        let mut best = usize::MAX;
        rec(g, &mut Vec::new(), &mut vec![false; g.n()], &mut best);
        if g.n() == 0 {
            0
        } else {
            best
        }
    }

    #[test]
    fn known_values() {
        assert_eq!(treewidth_exact(&Graph::path(7), 14).unwrap().width, 1);
        assert_eq!(treewidth_exact(&Graph::complete(5), 14).unwrap().width, 4);
        assert_eq!(treewidth_exact(&Graph::cycle(6), 14).unwrap().width, 2);
        assert_eq!(treewidth_exact(&grid_graph(2), 14).unwrap().width, 2);
        let r = treewidth_exact(&grid_graph(3), 14).unwrap();
        assert_eq!(r.width, 3);
        assert!(verify_decomposition(&grid_graph(3), &r.decomposition).is_empty());
        assert_eq!(treewidth_exact(&Graph::empty(4), 14).unwrap().width, 0);
        assert_eq!(treewidth_exact(&Graph::new(), 14).unwrap().width, 0);
    }

    #[test]
    fn cap_is_enforced() {
        let err = treewidth_exact(&grid_graph(4), 14).unwrap_err();
        assert_eq!(err.kind(), "cap_exceeded");
        assert!(err.to_string().contains("too large for exact mode"));
        assert_eq!(treewidth_exact(&grid_graph(4), 16).unwrap().width, 4);
    }

    #[test]
    fn heuristics() {
        let mut tree = Graph::empty(10);
        for v in 1..10 {
            tree.add_edge_idx(v, (v - 1) / 2).unwrap();
        }
        let r = treewidth_upper(&tree, Heuristic::MinDegree);
        assert_eq!(r.width, 1);
        assert!(verify_decomposition(&tree, &r.decomposition).is_empty());
        assert_eq!(treewidth_upper(&Graph::complete(4), Heuristic::MinFill).width, 3);
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..120 {
            let n = rng.gen_range(0..=7);
            let p = rng.gen_range(0.1..0.9);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge_idx(u, v).unwrap();
                    }
                }
            }
            let exact = treewidth_exact(&g, 14).unwrap();
            assert_eq!(exact.width, brute_force_tw(&g));
            assert!(verify_decomposition(&g, &exact.decomposition).is_empty());
            assert!(treewidth_lower(&g) <= exact.width);
            for h in [Heuristic::MinFill, Heuristic::MinDegree] {
                let up = treewidth_upper(&g, h);
                assert!(up.width >= exact.width);
                assert!(verify_decomposition(&g, &up.decomposition).is_empty());
            }
        }
    }
}
