//! Successive shortest paths with node potentials on the bipartite network.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;

use super::{OracleError, OracleMethod, OracleSolution};
use crate::transport::{SimplifiedPlan, TransportProblem};

/// Reduced costs within this of zero are treated as zero.
pub const REDUCED_COST_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy)]
struct Edge {
    to: usize,
    rev: usize,
    cap: f64,
    cost: f64,
}

struct Residual {
    graph: Vec<Vec<Edge>>,
}

impl Residual {
    fn add_edge(&mut self, from: usize, to: usize, cap: f64, cost: f64) -> (usize, usize) {
        let a = self.graph[from].len();
        let b = self.graph[to].len();
        self.graph[from].push(Edge {
            to,
            rev: b,
            cap,
            cost,
        });
        self.graph[to].push(Edge {
            to: from,
            rev: a,
            cap: 0.0,
            cost: -cost,
        });
        (from, a)
    }
}

/// Minimum of `Σ (-c_ij) f_ij`, i.e. the maximum of the transport objective.
pub fn solve_ssp(problem: &TransportProblem) -> Result<OracleSolution, OracleError> {
    let (m, n) = (problem.num_sinks(), problem.num_sources());
    let total = problem.demand_total();
    let cap_eps = 1e-13 * total.max(1.0);
    let (s, t) = (m + n, m + n + 1);
    let mut net = Residual {
        graph: vec![Vec::new(); m + n + 2],
    };
    let mut arc_edges = Vec::with_capacity(problem.num_arcs());
    for i in 0..m {
        net.add_edge(s, i, problem.demand(i), 0.0);
        for &(j, c) in problem.adjacent(i) {
            let handle = net.add_edge(i, m + j, problem.demand(i).min(problem.supply(j)), -c);
            arc_edges.push((i, j, handle));
        }
    }
    for j in 0..n {
        net.add_edge(m + j, t, problem.supply(j), 0.0);
    }

    let nodes = m + n + 2;
    let mut potential = vec![0.0; nodes];
    let mut dist = vec![f64::INFINITY; nodes];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nodes];
    let mut flow = 0.0;
    while flow < total - 1e-9 * total.max(1.0) {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        parent.iter_mut().for_each(|p| *p = None);
        dist[s] = 0.0;
        let mut heap = BinaryHeap::from([Reverse((OrderedFloat(0.0), s))]);
        while let Some(Reverse((OrderedFloat(d), v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for (k, e) in net.graph[v].iter().enumerate() {
                if e.cap <= cap_eps {
                    continue;
                }
                let mut reduced = e.cost + potential[v] - potential[e.to];
                if reduced < 0.0 && reduced > -REDUCED_COST_TOLERANCE * (1.0 + e.cost.abs()) {
                    reduced = 0.0;
                }
                let nd = d + reduced.max(0.0);
                if nd < dist[e.to] {
                    dist[e.to] = nd;
                    parent[e.to] = Some((v, k));
                    heap.push(Reverse((OrderedFloat(nd), e.to)));
                }
            }
        }
        if !dist[t].is_finite() {
            return Err(OracleError::Infeasible);
        }
        for v in 0..nodes {
            potential[v] += dist[v].min(dist[t]);
        }
        let mut push = f64::INFINITY;
        let mut v = t;
        while let Some((u, k)) = parent[v] {
            push = push.min(net.graph[u][k].cap);
            v = u;
        }
        let mut v = t;
        while let Some((u, k)) = parent[v] {
            let e = net.graph[u][k];
            net.graph[u][k].cap -= push;
            net.graph[e.to][e.rev].cap += push;
            v = u;
        }
        flow += push;
    }

    let mut plan = SimplifiedPlan::new();
    for &(i, j, (from, k)) in &arc_edges {
        let e = net.graph[from][k];
        let f = net.graph[e.to][e.rev].cap;
        if f > cap_eps {
            plan.add(i, j, f);
        }
    }
    let optimal_cost = problem
        .primal_cost(&plan)
        .expect("oracle flows lie on arcs");
    // Tight potentials give c_ij <= pi_i - pi_j with equality on flow arcs,
    // so p_j = K - pi_j prices the plan optimally; K keeps prices nonnegative.
    let shift = (0..n)
        .map(|j| potential[m + j])
        .fold(f64::NEG_INFINITY, f64::max);
    let prices = (0..n)
        .map(|j| (shift - potential[m + j]).max(0.0))
        .collect();
    Ok(OracleSolution {
        plan,
        optimal_cost,
        method: OracleMethod::ExactFlow,
        prices: Some(prices),
    })
}
