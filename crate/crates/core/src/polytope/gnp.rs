//! Erdős–Rényi samples, exact independence numbers and the tail bound
//! `P(α(G(n,p)) >= r) <= (n e^{-p(r-1)/2})^r`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_ALPHA_VERTICES: usize = 64;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("edge probability {p} is outside [0, 1]")))
    }
}

/// Sample number `stream` for `seed`: ChaCha8 seeded with `seed`, on its own
/// stream, deciding pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn sample_gnp_stream(n: usize, p: f64, seed: u64, stream: u64) -> Result<Graph> {
    check_p(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge_idx(i, j)?;
            }
        }
    }
    Ok(g)
}

pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    sample_gnp_stream(n, p, seed, 0)
}

/// Independence number by branch and bound on complement cliques with a
/// greedy-colouring bound.
pub fn alpha(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > MAX_ALPHA_VERTICES {
        return Err(Error::CapExceeded { what: "independence number", size: n, cap: MAX_ALPHA_VERTICES, hint: "" });
    }
    if n == 0 {
        return Ok(0);
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let comp: Vec<u64> = g.masks().iter().enumerate().map(|(v, m)| !m & all & !(1u64 << v)).collect();
    let mut best = 0;
    expand(all, 0, &comp, &mut best);
    Ok(best)
}

fn expand(mut cands: u64, size: usize, adj: &[u64], best: &mut usize) {
    // greedy colouring; order[i] gets colour bound[i]
    let mut order = Vec::with_capacity(cands.count_ones() as usize);
    let mut bound = Vec::with_capacity(order.capacity());
    let mut uncolored = cands;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut q = uncolored;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= q - 1;
            q &= !adj[v];
            uncolored &= !(1u64 << v);
            order.push(v);
            bound.push(color);
        }
    }
    for i in (0..order.len()).rev() {
        if size + bound[i] <= *best {
            return;
        }
        let v = order[i];
        let next = cands & adj[v];
        if next == 0 {
            *best = (*best).max(size + 1);
        } else {
            expand(next, size + 1, adj, best);
        }
        cands &= !(1u64 << v);
    }
}

pub fn diestel_bound(n: usize, p: f64, r: usize) -> f64 {
    (n as f64 * (-p * (r as f64 - 1.0) / 2.0).exp()).powi(r as i32)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnpRow {
    pub n: usize,
    pub p: f64,
    pub r: usize,
    pub samples: usize,
    pub hits: usize,
    pub empirical: f64,
    pub bound: f64,
    pub seed: u64,
}

impl GnpRow {
    /// Binomial standard deviation at the bound, capped to a probability.
    pub fn sigma(&self) -> f64 {
        let b = self.bound.min(1.0);
        (b * (1.0 - b) / self.samples as f64).sqrt()
    }

    pub fn within_bound(&self) -> bool {
        self.empirical <= self.bound + 3.0 * self.sigma()
    }
}

/// Counts samples with `α >= r`. Sample `i` uses stream `i`, so the result
/// does not depend on the thread count.
pub fn gnp_experiment(n: usize, p: f64, r: usize, samples: usize, seed: u64) -> Result<GnpRow> {
    check_p(p)?;
    if samples == 0 {
        return Err(Error::Invalid("at least one sample is required".into()));
    }
    let hits = (0..samples as u64)
        .into_par_iter()
        .map(|i| -> Result<usize> { Ok((alpha(&sample_gnp_stream(n, p, seed, i)?)? >= r) as usize) })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(GnpRow {
        n,
        p,
        r,
        samples,
        hits,
        empirical: hits as f64 / samples as f64,
        bound: diestel_bound(n, p, r),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_alpha(g: &Graph) -> usize {
        let m = g.masks();
        (0u32..1 << g.n())
            .filter(|&s| (0..g.n()).all(|v| s >> v & 1 == 0 || m[v] & s as u64 == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&Graph::complete(7)).unwrap(), 1);
        assert_eq!(alpha(&Graph::empty(9)).unwrap(), 9);
        assert_eq!(alpha(&Graph::cycle(7)).unwrap(), 3);
        assert_eq!(alpha(&Graph::new()).unwrap(), 0);
        assert!(alpha(&Graph::empty(65)).is_err());
    }

    #[test]
    fn alpha_matches_enumeration() {
        for s in 0..60 {
            let g = sample_gnp(12, 0.1 + (s % 8) as f64 / 10.0, s).unwrap();
            assert_eq!(alpha(&g).unwrap(), brute_alpha(&g), "seed {s}");
        }
    }

    #[test]
    fn samples_are_reproducible() {
        let a = sample_gnp_stream(20, 0.3, 7, 4).unwrap();
        assert_eq!(a, sample_gnp_stream(20, 0.3, 7, 4).unwrap());
        assert_ne!(a, sample_gnp_stream(20, 0.3, 7, 5).unwrap());
        assert!(sample_gnp(3, 1.5, 0).is_err());
        assert_eq!(sample_gnp(6, 1.0, 0).unwrap().m(), 15);
    }

    #[test]
    fn bound_value() {
        let want = (30.0f64 * (-3.5f64).exp()).powi(15);
        assert!((diestel_bound(30, 0.5, 15) - want).abs() <= 1e-15 * want);
    }
}
