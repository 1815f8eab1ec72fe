//! Seeded problem families.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)` and splits
//! the generator into independent streams with `set_stream`: stream 0 drives
//! topology, stream 1 costs, stream 2 weights, and stream `3 + k` the `k`-th
//! redraw of weights where a family needs one. The same `(spec, seed)` gives
//! the same problem on every platform.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::oracle::feasibility_check;
use crate::transport::{Arc, TransportProblem};

const TOPOLOGY: u64 = 0;
const COSTS: u64 = 1;
const WEIGHTS: u64 = 2;
const REDRAWS: u64 = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    Params(String),
    #[error("could not draw feasible weights after {0} attempts")]
    NoFeasibleWeights(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    Unit,
    /// Integers uniform in `[1, 19]`.
    Range1To19,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightStyle {
    /// Uniform in `(0, max]`, one side rescaled to balance.
    Real { max: f64 },
    /// Integers uniform in `[1, max]`, topped up one unit at a time to balance.
    Integer { max: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Assignment {
        n: usize,
        density: f64,
        cost_range: u32,
    },
    Asymmetric {
        m: usize,
        n: usize,
        weights: WeightMode,
        density: f64,
        cost_range: u32,
    },
    WeightScaled {
        m: usize,
        n: usize,
        arcs: usize,
        total_weight: u64,
        cost_range: u32,
    },
    RealValued {
        n: usize,
    },
    RandomFeasible {
        m: usize,
        n: usize,
        density: f64,
        weights: WeightStyle,
        cost_range: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        Self { family, seed }
    }

    pub fn generate(&self) -> Result<TransportProblem, GenError> {
        let seed = self.seed;
        match self.family {
            Family::Assignment {
                n,
                density,
                cost_range,
            } => gen_assignment(n, density, cost_range, seed),
            Family::Asymmetric {
                m,
                n,
                weights,
                density,
                cost_range,
            } => gen_asymmetric(m, n, weights, density, cost_range, seed),
            Family::WeightScaled {
                m,
                n,
                arcs,
                total_weight,
                cost_range,
            } => gen_weight_scaled(m, n, arcs, total_weight, cost_range, seed),
            Family::RealValued { n } => gen_real_valued(n, seed),
            Family::RandomFeasible {
                m,
                n,
                density,
                weights,
                cost_range,
            } => gen_random_feasible(m, n, density, weights, cost_range, seed),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Assignment { n, density, cost_range } => {
                write!(f, "family=assignment n={n} density={density} cost-range={cost_range}")?
            }
            Family::Asymmetric { m, n, weights, density, cost_range } => {
                let w = match weights {
                    WeightMode::Unit => "unit",
                    WeightMode::Range1To19 => "range",
                };
                write!(f, "family=asymmetric m={m} n={n} weights={w} density={density} cost-range={cost_range}")?
            }
            Family::WeightScaled { m, n, arcs, total_weight, cost_range } => write!(
                f,
                "family=weight-scaled m={m} n={n} arcs={arcs} total-weight={total_weight} cost-range={cost_range}"
            )?,
            Family::RealValued { n } => write!(f, "family=real-valued n={n}")?,
            Family::RandomFeasible { m, n, density, weights, cost_range } => {
                let w = match weights {
                    WeightStyle::Real { max } => format!("real:{max}"),
                    WeightStyle::Integer { max } => format!("integer:{max}"),
                };
                write!(f, "family=random m={m} n={n} density={density} weights={w} cost-range={cost_range}")?
            }
        }
        write!(f, " seed={}", self.seed)
    }
}

impl FromStr for GenSpec {
    type Err = GenError;

    /// Parses the `key=value` form written by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| GenError::Params(msg);
        let mut pairs = std::collections::HashMap::new();
        for tok in s.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {tok}")))?;
            pairs.insert(k, v);
        }
        fn get<T: FromStr>(
            pairs: &std::collections::HashMap<&str, &str>,
            key: &str,
        ) -> Result<T, GenError> {
            let v = pairs
                .get(key)
                .ok_or_else(|| GenError::Params(format!("missing {key}")))?;
            v.parse()
                .map_err(|_| GenError::Params(format!("bad value for {key}: {v}")))
        }
        let family = match pairs.get("family").copied() {
            Some("assignment") => Family::Assignment {
                n: get(&pairs, "n")?,
                density: get(&pairs, "density")?,
                cost_range: get(&pairs, "cost-range")?,
            },
            Some("asymmetric") => Family::Asymmetric {
                m: get(&pairs, "m")?,
                n: get(&pairs, "n")?,
                weights: match pairs.get("weights").copied() {
                    Some("unit") => WeightMode::Unit,
                    Some("range") => WeightMode::Range1To19,
                    other => return Err(bad(format!("bad weights {other:?}"))),
                },
                density: get(&pairs, "density")?,
                cost_range: get(&pairs, "cost-range")?,
            },
            Some("weight-scaled") => Family::WeightScaled {
                m: get(&pairs, "m")?,
                n: get(&pairs, "n")?,
                arcs: get(&pairs, "arcs")?,
                total_weight: get(&pairs, "total-weight")?,
                cost_range: get(&pairs, "cost-range")?,
            },
            Some("real-valued") => Family::RealValued {
                n: get(&pairs, "n")?,
            },
            Some("random") => {
                let w: String = get(&pairs, "weights")?;
                let weights = match w.split_once(':') {
                    Some(("real", max)) => WeightStyle::Real {
                        max: max.parse().map_err(|_| bad(format!("bad weights {w}")))?,
                    },
                    Some(("integer", max)) => WeightStyle::Integer {
                        max: max.parse().map_err(|_| bad(format!("bad weights {w}")))?,
                    },
                    _ => return Err(bad(format!("bad weights {w}"))),
                };
                Family::RandomFeasible {
                    m: get(&pairs, "m")?,
                    n: get(&pairs, "n")?,
                    density: get(&pairs, "density")?,
                    weights,
                    cost_range: get(&pairs, "cost-range")?,
                }
            }
            other => return Err(bad(format!("unknown family {other:?}"))),
        };
        Ok(GenSpec {
            family,
            seed: get(&pairs, "seed")?,
        })
    }
}

fn stream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.gen_range(0..n as u64) as usize
}

fn shuffle<T>(rng: &mut ChaCha8Rng, items: &mut [T]) {
    for k in (1..items.len()).rev() {
        let r = rng.gen_range(0..=k as u64) as usize;
        items.swap(k, r);
    }
}

fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    shuffle(rng, &mut p);
    p
}

fn check_density(density: f64) -> Result<(), GenError> {
    if density > 0.0 && density <= 1.0 {
        Ok(())
    } else {
        Err(GenError::Params(format!(
            "density {density} outside (0, 1]"
        )))
    }
}

/// `required` cells plus random distinct cells up to `target` in total,
/// sorted by (sink, source).
fn fill_cells(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    required: &[(usize, usize)],
    target: usize,
) -> Vec<(usize, usize)> {
    let cells = m * n;
    let mut taken: HashSet<(usize, usize)> = required.iter().copied().collect();
    let target = target.clamp(taken.len(), cells);
    let extra = target - taken.len();
    let mut out: Vec<(usize, usize)> = taken.iter().copied().collect();
    if extra * 3 < cells - taken.len() {
        while out.len() < target {
            let r = below(rng, cells);
            let cell = (r / n, r % n);
            if taken.insert(cell) {
                out.push(cell);
            }
        }
    } else {
        let mut free: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|c| !taken.contains(c))
            .collect();
        for k in 0..extra {
            let r = k + below(rng, free.len() - k);
            free.swap(k, r);
        }
        out.extend_from_slice(&free[..extra]);
    }
    out.sort_unstable();
    out
}

fn integer_costs(rng: &mut ChaCha8Rng, cells: &[(usize, usize)], range: u32) -> Vec<Arc> {
    cells
        .iter()
        .map(|&(i, j)| Arc::new(i, j, -(rng.gen_range(1..=range as u64) as f64)))
        .collect()
}

fn check_range(range: u32) -> Result<(), GenError> {
    if range >= 1 {
        Ok(())
    } else {
        Err(GenError::Params("cost range must be at least 1".into()))
    }
}

/// Staircase flow through sinks and sources taken in random orders; its arcs
/// carry a complete plan for any balanced weights.
fn northwest_corner(
    rng: &mut ChaCha8Rng,
    demands: &[f64],
    supplies: &[f64],
) -> Vec<(usize, usize)> {
    let rows = permutation(rng, demands.len());
    let cols = permutation(rng, supplies.len());
    let (mut a, mut b) = (0, 0);
    let (mut d, mut s) = (demands[rows[0]], supplies[cols[0]]);
    let mut cells = Vec::new();
    let dust = demands.iter().sum::<f64>().max(1.0) * 1e-12;
    loop {
        cells.push((rows[a], cols[b]));
        let q = d.min(s);
        d -= q;
        s -= q;
        let last_row = a + 1 == rows.len();
        let last_col = b + 1 == cols.len();
        if last_row && last_col {
            break;
        }
        let next_row = (d <= dust || last_col) && !last_row;
        let next_col = (s <= dust || last_row || !next_row) && !last_col;
        if next_row {
            a += 1;
            d = demands[rows[a]];
        }
        if next_col {
            b += 1;
            s = supplies[cols[b]];
        }
    }
    cells.sort_unstable();
    cells.dedup();
    cells
}

fn build(
    demands: Vec<f64>,
    supplies: Vec<f64>,
    arcs: Vec<Arc>,
) -> Result<TransportProblem, GenError> {
    TransportProblem::new(demands, supplies, arcs).map_err(|e| GenError::Params(e.to_string()))
}

/// Unit-weight square problem with integer costs in `[-C, -1]`; a hidden
/// perfect matching is always among the arcs.
pub fn gen_assignment(
    n: usize,
    density: f64,
    cost_range: u32,
    seed: u64,
) -> Result<TransportProblem, GenError> {
    check_density(density)?;
    check_range(cost_range)?;
    if n == 0 || density * (n as f64) < 1.0 - 1e-12 {
        return Err(GenError::Params(format!(
            "density {density} is below 1/N for N = {n}"
        )));
    }
    let mut topo = stream(seed, TOPOLOGY);
    let perm = permutation(&mut topo, n);
    let matching: Vec<(usize, usize)> = perm.iter().enumerate().map(|(i, &j)| (i, j)).collect();
    let target = (density * (n * n) as f64).round() as usize;
    let cells = fill_cells(&mut topo, n, n, &matching, target);
    let arcs = integer_costs(&mut stream(seed, COSTS), &cells, cost_range);
    build(vec![1.0; n], vec![1.0; n], arcs)
}

/// Splits `total` integer units as evenly as possible over `count` vertices.
fn even_split(total: u64, count: usize) -> Vec<f64> {
    let base = total / count as u64;
    let extra = (total % count as u64) as usize;
    (0..count)
        .map(|k| (base + u64::from(k < extra)) as f64)
        .collect()
}

/// Half the weight on a random tenth of the sinks, half spread over the rest.
pub fn gen_asymmetric(
    m: usize,
    n: usize,
    weights: WeightMode,
    density: f64,
    cost_range: u32,
    seed: u64,
) -> Result<TransportProblem, GenError> {
    check_density(density)?;
    check_range(cost_range)?;
    if m == 0 || n < m {
        return Err(GenError::Params(format!(
            "need 0 < M <= N, got M = {m}, N = {n}"
        )));
    }
    let mut wrng = stream(seed, WEIGHTS);
    let supplies: Vec<f64> = (0..n)
        .map(|_| match weights {
            WeightMode::Unit => 1.0,
            WeightMode::Range1To19 => wrng.gen_range(1..=19u64) as f64,
        })
        .collect();
    let total = supplies.iter().sum::<f64>() as u64;
    let heavy_count = ((m as f64) / 10.0).round().max(1.0) as usize;
    let light_count = m - heavy_count;
    let heavy_total = if light_count == 0 { total } else { total / 2 };
    let light_total = total - heavy_total;
    if (heavy_total as usize) < heavy_count || (light_total as usize) < light_count {
        return Err(GenError::Params(format!(
            "total weight {total} cannot give every sink a positive integer share"
        )));
    }
    let order = permutation(&mut wrng, m);
    let heavy = even_split(heavy_total, heavy_count);
    let light = even_split(light_total, light_count);
    let mut demands = vec![0.0; m];
    for (k, &i) in order.iter().enumerate() {
        demands[i] = if k < heavy_count {
            heavy[k]
        } else {
            light[k - heavy_count]
        };
    }
    let mut topo = stream(seed, TOPOLOGY);
    let hidden = northwest_corner(&mut topo, &demands, &supplies);
    let target = (density * (m * n) as f64).round() as usize;
    let cells = fill_cells(&mut topo, m, n, &hidden, target);
    let arcs = integer_costs(&mut stream(seed, COSTS), &cells, cost_range);
    build(demands, supplies, arcs)
}

/// One unit per vertex plus `total - count` units dropped on random vertices.
fn random_split(rng: &mut ChaCha8Rng, total: u64, count: usize) -> Vec<f64> {
    let mut w = vec![1u64; count];
    for _ in 0..total - count as u64 {
        w[below(rng, count)] += 1;
    }
    w.into_iter().map(|x| x as f64).collect()
}

/// Fixed topology and costs per seed; only the integer weights change with
/// the total weight `L`. Weights are redrawn until a complete plan exists.
pub fn gen_weight_scaled(
    m: usize,
    n: usize,
    arcs: usize,
    total_weight: u64,
    cost_range: u32,
    seed: u64,
) -> Result<TransportProblem, GenError> {
    check_range(cost_range)?;
    if m == 0 || n == 0 {
        return Err(GenError::Params(
            "need at least one sink and one source".into(),
        ));
    }
    if total_weight < m.max(n) as u64 {
        return Err(GenError::Params(format!(
            "total weight {total_weight} is below max(M, N)"
        )));
    }
    if arcs < m.max(n) || arcs > m * n {
        return Err(GenError::Params(format!(
            "arc count {arcs} outside [max(M, N), M*N]"
        )));
    }
    let mut topo = stream(seed, TOPOLOGY);
    let rows = permutation(&mut topo, m);
    let cols = permutation(&mut topo, n);
    let spine: Vec<(usize, usize)> = (0..m.max(n)).map(|k| (rows[k % m], cols[k % n])).collect();
    let cells = fill_cells(&mut topo, m, n, &spine, arcs);
    let arc_list = integer_costs(&mut stream(seed, COSTS), &cells, cost_range);
    const ATTEMPTS: u32 = 64;
    for attempt in 0..ATTEMPTS {
        let mut wrng = stream(
            seed,
            if attempt == 0 {
                WEIGHTS
            } else {
                REDRAWS + attempt as u64 - 1
            },
        );
        let demands = random_split(&mut wrng, total_weight, m);
        let supplies = random_split(&mut wrng, total_weight, n);
        let problem = build(demands, supplies, arc_list.clone())?;
        if feasibility_check(&problem) {
            return Ok(problem);
        }
    }
    Err(GenError::NoFeasibleWeights(ATTEMPTS))
}

/// `sqrt(1 + ((k - 1) mod 20))` for 1-based `k`.
pub fn real_valued_weight(k: usize) -> f64 {
    (1.0 + ((k - 1) % 20) as f64).sqrt()
}

/// `-sqrt(1 + ((dx² + dy²) mod 20))`.
pub fn real_valued_cost(sink: (u64, u64), source: (u64, u64)) -> f64 {
    let dx = sink.0.abs_diff(source.0);
    let dy = sink.1.abs_diff(source.1);
    -(1.0 + ((dx * dx + dy * dy) % 20) as f64).sqrt()
}

/// Complete `N x N` problem on integer points of `[0, N]²` with the modular
/// distance cost and cyclic square-root weights.
pub fn gen_real_valued(n: usize, seed: u64) -> Result<TransportProblem, GenError> {
    if n == 0 {
        return Err(GenError::Params("N must be at least 1".into()));
    }
    let mut rng = stream(seed, TOPOLOGY);
    let mut point = || (rng.gen_range(0..=n as u64), rng.gen_range(0..=n as u64));
    let sinks: Vec<(u64, u64)> = (0..n).map(|_| point()).collect();
    let sources: Vec<(u64, u64)> = (0..n).map(|_| point()).collect();
    let weights: Vec<f64> = (1..=n).map(real_valued_weight).collect();
    let mut arcs = Vec::with_capacity(n * n);
    for (i, &a) in sinks.iter().enumerate() {
        for (j, &b) in sources.iter().enumerate() {
            arcs.push(Arc::new(i, j, real_valued_cost(a, b)));
        }
    }
    build(weights.clone(), weights, arcs)
}

/// Arbitrary feasible instance with real costs in `[-C, -1)` (integer costs
/// in `[-C, -1]` for integer weights).
pub fn gen_random_feasible(
    m: usize,
    n: usize,
    density: f64,
    weights: WeightStyle,
    cost_range: u32,
    seed: u64,
) -> Result<TransportProblem, GenError> {
    check_density(density)?;
    check_range(cost_range)?;
    if m == 0 || n == 0 {
        return Err(GenError::Params(
            "need at least one sink and one source".into(),
        ));
    }
    let mut wrng = stream(seed, WEIGHTS);
    let (demands, supplies) = match weights {
        WeightStyle::Real { max } => {
            if !(max > 0.0 && max.is_finite()) {
                return Err(GenError::Params(format!(
                    "weight bound {max} must be positive"
                )));
            }
            let mut draw = || max * (1.0 - wrng.gen::<f64>());
            let d: Vec<f64> = (0..m).map(|_| draw()).collect();
            let s: Vec<f64> = (0..n).map(|_| draw()).collect();
            let ratio = d.iter().sum::<f64>() / s.iter().sum::<f64>();
            (d, s.into_iter().map(|x| x * ratio).collect::<Vec<_>>())
        }
        WeightStyle::Integer { max } => {
            if max == 0 {
                return Err(GenError::Params("weight bound must be at least 1".into()));
            }
            let mut d: Vec<u64> = (0..m).map(|_| wrng.gen_range(1..=max as u64)).collect();
            let mut s: Vec<u64> = (0..n).map(|_| wrng.gen_range(1..=max as u64)).collect();
            loop {
                let (sd, ss) = (d.iter().sum::<u64>(), s.iter().sum::<u64>());
                if sd == ss {
                    break;
                }
                if sd < ss {
                    d[below(&mut wrng, m)] += 1;
                } else {
                    s[below(&mut wrng, n)] += 1;
                }
            }
            let f = |v: Vec<u64>| v.into_iter().map(|x| x as f64).collect::<Vec<_>>();
            (f(d), f(s))
        }
    };
    let mut topo = stream(seed, TOPOLOGY);
    let hidden = northwest_corner(&mut topo, &demands, &supplies);
    let target = (density * (m * n) as f64).round() as usize;
    let cells = fill_cells(&mut topo, m, n, &hidden, target);
    let mut crng = stream(seed, COSTS);
    let arcs = match weights {
        WeightStyle::Integer { .. } => integer_costs(&mut crng, &cells, cost_range),
        WeightStyle::Real { .. } => cells
            .iter()
            .map(|&(i, j)| Arc::new(i, j, -1.0 - (cost_range as f64 - 1.0) * crng.gen::<f64>()))
            .collect(),
    };
    build(demands, supplies, arcs)
}
