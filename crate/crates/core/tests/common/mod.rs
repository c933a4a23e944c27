#![allow(dead_code)]

use fwsfm::functions::TableFunction;
use fwsfm::SubmodularOracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random integer-valued submodular function: a directed cut plus a concave
/// function of cardinality plus a modular term plus a constant.
pub fn random_submodular(n: usize, seed: u64) -> SubmodularOracle<TableFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(0.4) {
                arcs.push((u, v, rng.gen_range(1..=6) as f64));
            }
        }
    }
    let mut inc: i64 = rng.gen_range(0..=6);
    let mut g = vec![0.0];
    for _ in 0..n {
        g.push(g.last().unwrap() + inc as f64);
        inc -= rng.gen_range(0..=2);
    }
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-9..=9) as f64).collect();
    let offset = rng.gen_range(-5..=5) as f64;
    let f = move |s: &[bool]| {
        let cut: f64 = arcs.iter().filter(|&&(u, v, _)| s[u] && !s[v]).map(|a| a.2).sum();
        let k = s.iter().filter(|&&b| b).count();
        let lin: f64 = s.iter().zip(&w).filter(|p| *p.0).map(|p| p.1).sum();
        offset + cut + g[k] + lin
    };
    SubmodularOracle::new(TableFunction::from_fn(n, f).unwrap()).unwrap()
}

/// Every vertex of `B_f` for small `n`, one per permutation.
pub fn all_vertices<F: fwsfm::SetFunction>(oracle: &SubmodularOracle<F>) -> Vec<Vec<f64>> {
    let n = oracle.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    permutations(&mut perm, 0, &mut |p| {
        let chain = oracle.eval_chain(p);
        let mut q = vec![0.0; n];
        let mut prev = 0.0;
        for (&i, &v) in p.iter().zip(&chain) {
            q[i] = v - prev;
            prev = v;
        }
        out.push(q);
    });
    out
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}
