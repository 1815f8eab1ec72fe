#![allow(dead_code)]

use auction_ot::generate::{gen_random_feasible, WeightStyle};
use auction_ot::transport::{Arc, TransportProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random feasible instance with `M, N <= max_side` and real weights.
pub fn real_instance(seed: u64, max_side: usize) -> TransportProblem {
    let mut r = rng(seed ^ 0x5eed);
    let m = r.gen_range(1..=max_side);
    let n = r.gen_range(1..=max_side);
    let density = r.gen_range(0.1..=1.0);
    gen_random_feasible(m, n, density, WeightStyle::Real { max: 5.0 }, 100, seed).unwrap()
}

/// Integer instance with total weight at most 12.
pub fn tiny_integer_instance(seed: u64) -> TransportProblem {
    let mut r = rng(seed ^ 0x7157);
    let m = r.gen_range(1..=4);
    let n = r.gen_range(1..=4);
    let density = r.gen_range(0.3..=1.0);
    let p = gen_random_feasible(m, n, density, WeightStyle::Integer { max: 3 }, 20, seed).unwrap();
    assert!(p.demand_total() <= 12.0);
    p
}

/// Unit demands, integer supplies in `1..=4`, integer costs, `N <= 12`.
pub fn unit_demand_instance(seed: u64) -> TransportProblem {
    let mut r = rng(seed ^ 0x50);
    loop {
        let n = r.gen_range(1..=12usize);
        let supplies: Vec<f64> = (0..n).map(|_| r.gen_range(1..=4u32) as f64).collect();
        let m = supplies.iter().sum::<f64>() as usize;
        let density = r.gen_range(0.2..=1.0);
        let mut arcs = Vec::new();
        for i in 0..m {
            let forced = r.gen_range(0..n);
            for j in 0..n {
                if j == forced || r.gen_bool(density) {
                    arcs.push(Arc::new(i, j, -(r.gen_range(1..=20u32) as f64)));
                }
            }
        }
        let p = TransportProblem::new(vec![1.0; m], supplies, arcs).unwrap();
        if auction_ot::oracle::feasibility_check(&p) {
            return p;
        }
    }
}

/// Balanced but infeasible: sinks 0 and 1 reach only source 0, which
/// cannot cover both.
pub fn infeasible_instance(seed: u64) -> TransportProblem {
    let mut r = rng(seed ^ 0x1f);
    let n = r.gen_range(2..=6usize);
    let m = r.gen_range(2..=6usize);
    let d: Vec<f64> = (0..m).map(|_| r.gen_range(0.5..3.0)).collect();
    let s0 = d[0] + d[1] - r.gen_range(0.1..0.4);
    let rest = d.iter().sum::<f64>() - s0;
    let mut s = vec![s0];
    s.extend((1..n).map(|_| rest / (n - 1) as f64));
    let mut arcs = vec![Arc::new(0, 0, -1.0), Arc::new(1, 0, -2.0)];
    for i in 2..m {
        for j in 0..n {
            arcs.push(Arc::new(i, j, -(r.gen_range(1.0..10.0))));
        }
    }
    TransportProblem::new(d, s, arcs).unwrap()
}
