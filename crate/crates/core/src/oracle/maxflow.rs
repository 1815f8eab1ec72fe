//! Dinic max-flow over real capacities, used for the feasibility precheck.

use std::collections::VecDeque;

use crate::transport::TransportProblem;

struct Edge {
    to: usize,
    rev: usize,
    cap: f64,
}

struct Network {
    graph: Vec<Vec<Edge>>,
    level: Vec<i64>,
    next: Vec<usize>,
    tolerance: f64,
}

impl Network {
    fn new(nodes: usize, tolerance: f64) -> Self {
        Self {
            graph: (0..nodes).map(|_| Vec::new()).collect(),
            level: vec![-1; nodes],
            next: vec![0; nodes],
            tolerance,
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: f64) {
        let rev_from = self.graph[to].len();
        let rev_to = self.graph[from].len();
        self.graph[from].push(Edge {
            to,
            rev: rev_from,
            cap,
        });
        self.graph[to].push(Edge {
            to: from,
            rev: rev_to,
            cap: 0.0,
        });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = VecDeque::from([s]);
        self.level[s] = 0;
        while let Some(v) = queue.pop_front() {
            for e in &self.graph[v] {
                if e.cap > self.tolerance && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: f64) -> f64 {
        if v == t {
            return pushed;
        }
        while self.next[v] < self.graph[v].len() {
            let k = self.next[v];
            let (to, cap) = (self.graph[v][k].to, self.graph[v][k].cap);
            if cap > self.tolerance && self.level[to] == self.level[v] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0.0 {
                    let rev = self.graph[v][k].rev;
                    self.graph[v][k].cap -= got;
                    self.graph[to][rev].cap += got;
                    return got;
                }
            }
            self.next[v] += 1;
        }
        0.0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut flow = 0.0;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|n| *n = 0);
            loop {
                let pushed = self.dfs(s, t, f64::INFINITY);
                if pushed <= self.tolerance {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }
}

/// Maximum total quantity that can be shipped respecting demands and supplies.
pub fn max_shippable(problem: &TransportProblem) -> f64 {
    let (m, n) = (problem.num_sinks(), problem.num_sources());
    let scale = problem.demand_total().max(1.0);
    let (s, t) = (0, m + n + 1);
    let mut net = Network::new(m + n + 2, 1e-13 * scale);
    for i in 0..m {
        net.add_edge(s, 1 + i, problem.demand(i));
        for &(j, _) in problem.adjacent(i) {
            net.add_edge(1 + i, 1 + m + j, problem.demand(i).min(problem.supply(j)));
        }
    }
    for j in 0..n {
        net.add_edge(1 + m + j, t, problem.supply(j));
    }
    net.max_flow(s, t)
}

/// True iff a complete plan exists: the bipartite max-flow saturates every demand.
pub fn feasibility_check(problem: &TransportProblem) -> bool {
    let total = problem.demand_total();
    max_shippable(problem) >= total - 1e-9 * total.max(1.0)
}
