//! Reference implementations shared by the integration tests. None of them
//! call into the library beyond plain data accessors.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use twlab_core::graph::Graph;
use twlab_core::po::{Domain, POInstance, Relation, Sense};
use twlab_core::polytope::{HPolytope, PointSet};
use twlab_core::rational::{int, Rational};

pub fn random_binary_set(rng: &mut impl Rng, dim: usize, density: f64) -> PointSet {
    let mut pts: Vec<Vec<i64>> = (0..1u32 << dim)
        .filter(|_| rng.gen_bool(density))
        .map(|m| (0..dim).map(|j| (m >> j & 1) as i64).collect())
        .collect();
    if pts.is_empty() {
        pts.push(vec![0; dim]);
    }
    PointSet::new(dim, pts).unwrap()
}

pub fn q(x: i64) -> Rational {
    int(x)
}

/// Row-reduces a copy and returns (rank, echelon rows, pivots).
pub fn echelon(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) {
            m.swap(r, p);
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = &m[i][c] / &m[r][c];
                    for j in 0..cols {
                        let d = &f * &m[r][j];
                        m[i][j] -= d;
                    }
                }
            }
            piv.push(c);
            r += 1;
        }
    }
    m.truncate(r);
    (m, piv)
}

pub fn affine_rank(pts: &[Vec<i64>]) -> usize {
    let rows: Vec<Vec<Rational>> =
        pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| q(a - b)).collect()).collect();
    echelon(&rows).1.len()
}

pub fn primitive_ints(v: &[Rational]) -> Vec<i64> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter().map(|x| i64::try_from(x / &g).unwrap()).collect()
}

/// Facets of a full-dimensional set: hyperplanes through `d` affinely
/// independent points with every point on one side.
pub fn facet_oracle(s: &PointSet) -> BTreeSet<Vec<i64>> {
    let d = s.dim();
    let pts = s.points();
    let mut out = BTreeSet::new();
    let n = pts.len();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let rows: Vec<Vec<Rational>> = idx
            .iter()
            .map(|&i| pts[i].iter().map(|&c| q(c)).chain([q(-1)]).collect())
            .collect();
        let (ech, piv) = echelon(&rows);
        if piv.len() == d {
            let free = (0..=d).find(|c| !piv.contains(c)).unwrap();
            let mut v = vec![Rational::zero(); d + 1];
            v[free] = Rational::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -&ech[r][free] / &ech[r][p];
            }
            let side: Vec<Rational> = pts
                .iter()
                .map(|p| &v[d] - p.iter().zip(&v).map(|(&c, a)| a * q(c)).sum::<Rational>())
                .collect();
            if v[..d].iter().any(|x| !x.is_zero()) {
                if side.iter().all(|x| !x.is_negative()) {
                    out.insert(primitive_ints(&v));
                } else if side.iter().all(|x| !x.is_positive()) {
                    out.insert(primitive_ints(&v.iter().map(|x| -x).collect::<Vec<_>>()));
                }
            }
        }
        // next combination
        let mut k = d;
        while k > 0 && idx[k - 1] == n - d + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for j in k..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

pub fn facet_vectors(h: &HPolytope) -> BTreeSet<Vec<i64>> {
    h.facets
        .iter()
        .map(|f| f.a.iter().chain([&f.b]).map(|x| i64::try_from(x.to_integer()).unwrap()).collect())
        .collect()
}

/// Minimum number of all-positive rectangles by breadth-first search over
/// covered-cell masks, using every (not only maximal) rectangle.
pub fn cover_oracle(m: &[Vec<bool>]) -> usize {
    let (r, c) = (m.len(), m.first().map_or(0, |x| x.len()));
    let mut cell = vec![vec![usize::MAX; c]; r];
    let mut k = 0;
    for i in 0..r {
        for j in 0..c {
            if m[i][j] {
                cell[i][j] = k;
                k += 1;
            }
        }
    }
    let mut rects = Vec::new();
    for rs in 1u32..1 << r {
        for cs in 1u32..1 << c {
            let ok = (0..r).all(|i| rs >> i & 1 == 0 || (0..c).all(|j| cs >> j & 1 == 0 || m[i][j]));
            if ok {
                let mut mask = 0u32;
                for i in (0..r).filter(|i| rs >> i & 1 == 1) {
                    for j in (0..c).filter(|j| cs >> j & 1 == 1) {
                        mask |= 1 << cell[i][j];
                    }
                }
                rects.push(mask);
            }
        }
    }
    let full = (1u32 << k) - 1;
    let mut dist = vec![usize::MAX; 1 << k];
    dist[0] = 0;
    let mut queue = std::collections::VecDeque::from([0u32]);
    while let Some(s) = queue.pop_front() {
        if s == full {
            return dist[s as usize];
        }
        for &rm in &rects {
            let t = s | rm;
            if dist[t as usize] == usize::MAX {
                dist[t as usize] = dist[s as usize] + 1;
                queue.push_back(t);
            }
        }
    }
    unreachable!()
}


pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge_idx(a, b).unwrap();
            }
        }
    }
    g
}


// ---- treewidth -------------------------------------------------------------

/// Width of eliminating `order` on a graph given by adjacency sets.
fn elimination_width(adj: &[BTreeSet<usize>], order: &[usize]) -> usize {
    let mut adj = adj.to_vec();
    let mut gone = vec![false; adj.len()];
    let mut width = 0;
    for &v in order {
        let nbrs: Vec<usize> = adj[v].iter().copied().filter(|&u| !gone[u]).collect();
        width = width.max(nbrs.len());
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        gone[v] = true;
    }
    width
}

fn adjacency(g: &Graph) -> Vec<BTreeSet<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).clone()).collect()
}

/// Treewidth as the best width over every elimination order (Heap's
/// algorithm). Meant for `n <= 8`.
pub fn treewidth_by_orders(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let adj = adjacency(g);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = elimination_width(&adj, &perm);
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(elimination_width(&adj, &perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Treewidth by the subset recurrence
/// `TW(S) = min_{v in S} max(TW(S - v), |Q(S - v, v)|)`, where `Q(S, v)` are
/// the vertices outside `S + v` reachable from `v` through `S`.
pub fn treewidth_by_subsets(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 20);
    if n == 0 {
        return 0;
    }
    let masks: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u)).collect();
    let q = |s: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut out = 0u32;
        while let Some(u) = stack.pop() {
            let mut nb = masks[u] & !seen;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                seen |= 1 << w;
                if s >> w & 1 == 1 {
                    stack.push(w);
                } else {
                    out |= 1 << w;
                }
            }
        }
        out.count_ones()
    };
    let full = (1u32 << n) - 1;
    let mut tw = vec![u32::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            best = best.min(tw[prev as usize].max(q(prev, v)));
        }
        tw[s as usize] = best;
    }
    tw[full as usize] as usize
}

// ---- instances -------------------------------------------------------------

/// An instance read back from its JSON form: constraints as lists of
/// `(coefficient, [(variable index, power)])`.
pub struct Plain {
    pub names: Vec<String>,
    pub binary: Vec<bool>,
    pub rows: Vec<(Relation, Vec<(Rational, Vec<(usize, u32)>)>)>,
    pub objective: Vec<Rational>,
    pub maximize: bool,
}

impl Plain {
    pub fn new(inst: &POInstance) -> Self {
        let j = inst.to_json();
        let names: Vec<String> = j.vars.iter().map(|v| v.name.clone()).collect();
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let rows = j
            .constraints
            .iter()
            .map(|c| {
                let terms = c
                    .monomials
                    .iter()
                    .map(|m| (m.coeff.clone(), m.powers.iter().map(|(v, &p)| (index[v.as_str()], p)).collect()))
                    .collect();
                (c.relation, terms)
            })
            .collect();
        let objective = names
            .iter()
            .map(|n| j.objective.coeffs.get(n).cloned().unwrap_or_else(Rational::zero))
            .collect();
        Plain {
            binary: j.vars.iter().map(|v| v.domain == Domain::Binary).collect(),
            names,
            rows,
            objective,
            maximize: j.objective.sense == Sense::Max,
        }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn eval(&self, row: usize, x: &[Rational]) -> Rational {
        self.rows[row]
            .1
            .iter()
            .map(|(c, m)| m.iter().fold(c.clone(), |acc, &(v, p)| acc * num_traits::pow(x[v].clone(), p as usize)))
            .sum()
    }

    pub fn norm1(&self, row: usize) -> Rational {
        self.rows[row].1.iter().map(|(c, _)| c.abs()).sum()
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn in_domain(&self, x: &[Rational]) -> bool {
        x.iter().zip(&self.binary).all(|(v, &b)| {
            if b {
                v.is_zero() || v.is_one()
            } else {
                !v.is_negative() && *v <= Rational::one()
            }
        })
    }

    /// `f(x) >= -eps·‖f‖₁` for inequalities and `|f(x)| <= eps·‖f‖₁` for
    /// equations, plus domains. `eps = 0` is exact feasibility.
    pub fn eps_feasible(&self, x: &[Rational], eps: &Rational) -> bool {
        self.in_domain(x)
            && (0..self.rows.len()).all(|i| {
                let v = self.eval(i, x);
                let tol = eps * self.norm1(i);
                match self.rows[i].0 {
                    Relation::Ge0 => v >= -tol,
                    Relation::Eq0 => v.abs() <= tol,
                }
            })
    }

    pub fn vector(&self, x: &BTreeMap<String, Rational>) -> Vec<Rational> {
        self.names.iter().map(|n| x[n].clone()).collect()
    }

    /// Variables that must be integral: binaries and variables with a row
    /// `c·(z² − z) = 0`.
    pub fn integral(&self) -> Vec<bool> {
        let mut out = self.binary.clone();
        for (rel, terms) in &self.rows {
            if *rel != Relation::Eq0 || terms.len() != 2 {
                continue;
            }
            let (mut sq, mut lin) = (None, None);
            for (c, m) in terms {
                match m.as_slice() {
                    [(v, 2)] => sq = Some((*v, c.clone())),
                    [(v, 1)] => lin = Some((*v, c.clone())),
                    _ => {}
                }
            }
            if let (Some((a, ca)), Some((b, cb))) = (sq, lin) {
                if a == b && ca == -cb {
                    out[a] = true;
                }
            }
        }
        out
    }

    /// Edges of the intersection graph as sorted name pairs.
    pub fn gamma(&self) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        for (_, terms) in &self.rows {
            let vs: BTreeSet<usize> = terms.iter().flat_map(|(_, m)| m.iter().map(|&(v, _)| v)).collect();
            let vs: Vec<usize> = vs.into_iter().collect();
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    let (x, y) = (self.names[a].clone(), self.names[b].clone());
                    out.insert(if x <= y { (x, y) } else { (y, x) });
                }
            }
        }
        out
    }

    /// Best objective over `{0,1}^n`, for pure-binary instances.
    pub fn binary_optimum(&self) -> Option<Rational> {
        let n = self.n();
        assert!(n <= 20);
        let mut best: Option<Rational> = None;
        for mask in 0u32..1 << n {
            let x: Vec<Rational> = (0..n).map(|j| int((mask >> j & 1) as i64)).collect();
            if !self.eps_feasible(&x, &Rational::zero()) {
                continue;
            }
            let v = self.value(&x);
            let better = match &best {
                None => true,
                Some(b) => (self.maximize && v > *b) || (!self.maximize && v < *b),
            };
            if better {
                best = Some(v);
            }
        }
        best
    }

    /// Best objective over binaries in `{0,1}` and continuous variables on
    /// `{0, 1/den, ..., 1}`, in exact integer arithmetic. Constraints are
    /// checked as soon as their last variable is fixed.
    pub fn grid_optimum(&self, den: i128) -> Option<Rational> {
        let n = self.n();
        let mut order: Vec<usize> = (0..n).filter(|&v| self.binary[v]).collect();
        order.extend((0..n).filter(|&v| !self.binary[v]));
        let pos: Vec<usize> = {
            let mut p = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                p[v] = i;
            }
            p
        };
        let degree = self
            .rows
            .iter()
            .flat_map(|(_, t)| t.iter().map(|(_, m)| m.iter().map(|&(_, p)| p).sum::<u32>()))
            .max()
            .unwrap_or(0)
            .max(1);
        // row r scaled by lcm(denominators)·den^degree, as integer monomials
        let mut checks: Vec<Vec<(Relation, Vec<(i128, Vec<(usize, u32)>)>, i128)>> = vec![Vec::new(); n + 1];
        for (r, (rel, terms)) in self.rows.iter().enumerate() {
            let l = terms.iter().fold(BigInt::one(), |acc, (c, _)| acc.lcm(c.denom()));
            let lq = Rational::from_integer(l);
            let scaled: Vec<(i128, Vec<(usize, u32)>)> = terms
                .iter()
                .map(|(c, m)| {
                    let d: u32 = m.iter().map(|&(_, p)| p).sum();
                    let k = i128::try_from((c * &lq).to_integer()).unwrap() * den.pow(degree - d);
                    (k, m.clone())
                })
                .collect();
            let tol = i128::try_from((self.norm1(r) * &lq).to_integer()).unwrap();
            let last = terms.iter().flat_map(|(_, m)| m.iter().map(|&(v, _)| pos[v] + 1)).max().unwrap_or(0);
            checks[last].push((*rel, scaled, tol));
        }
        let obj_l = self.objective.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let obj: Vec<i128> = self
            .objective
            .iter()
            .map(|c| i128::try_from((c * Rational::from_integer(obj_l.clone())).to_integer()).unwrap())
            .collect();

        fn ok(checks: &[(Relation, Vec<(i128, Vec<(usize, u32)>)>, i128)], k: &[i128]) -> bool {
            checks.iter().all(|(rel, terms, _)| {
                let v: i128 = terms.iter().map(|(c, m)| m.iter().fold(*c, |acc, &(x, p)| acc * k[x].pow(p))).sum();
                match rel {
                    Relation::Ge0 => v >= 0,
                    Relation::Eq0 => v == 0,
                }
            })
        }

        struct Search<'a> {
            order: &'a [usize],
            binary: &'a [bool],
            den: i128,
            checks: &'a [Vec<(Relation, Vec<(i128, Vec<(usize, u32)>)>, i128)>],
            obj: &'a [i128],
            maximize: bool,
            k: Vec<i128>,
            best: Option<i128>,
        }
        impl Search<'_> {
            fn go(&mut self, i: usize) {
                if !ok(&self.checks[i], &self.k) {
                    return;
                }
                if i == self.order.len() {
                    let v: i128 = self.obj.iter().zip(&self.k).map(|(c, k)| c * k).sum();
                    let better = match self.best {
                        None => true,
                        Some(b) => (self.maximize && v > b) || (!self.maximize && v < b),
                    };
                    if better {
                        self.best = Some(v);
                    }
                    return;
                }
                let v = self.order[i];
                let vals: Vec<i128> = if self.binary[v] { vec![0, self.den] } else { (0..=self.den).collect() };
                for val in vals {
                    self.k[v] = val;
                    self.go(i + 1);
                }
            }
        }
        let mut s = Search {
            order: &order,
            binary: &self.binary,
            den,
            checks: &checks,
            obj: &obj,
            maximize: self.maximize,
            k: vec![0; n],
            best: None,
        };
        s.go(0);
        s.best.map(|b| Rational::new(BigInt::from(b), BigInt::from(den) * obj_l))
    }
}
