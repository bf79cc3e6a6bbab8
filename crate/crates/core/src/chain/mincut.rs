//! Dinic max-flow on a small dense-ish graph with f64 capacities.
//!
//! Used to solve the submodular cut problem behind the flat norm.  The
//! graphs here have one node per top cell plus source and sink, so a plain
//! adjacency-list Dinic is plenty.

const EPS: f64 = 1e-12;

pub struct FlowGraph {
    // edge arrays; edge i and i^1 are a forward/backward pair
    to: Vec<u32>,
    cap: Vec<f64>,
    head: Vec<Vec<u32>>,
    n: usize,
}

impl FlowGraph {
    pub fn new(n: usize) -> Self {
        FlowGraph {
            to: Vec::new(),
            cap: Vec::new(),
            head: vec![Vec::new(); n],
            n,
        }
    }

    /// Directed edge u -> v with capacity c (residual edge gets capacity `back`).
    pub fn add_edge(&mut self, u: usize, v: usize, c: f64, back: f64) {
        let id = self.to.len() as u32;
        self.to.push(v as u32);
        self.cap.push(c);
        self.head[u].push(id);
        self.to.push(u as u32);
        self.cap.push(back);
        self.head[v].push(id + 1);
    }

    fn bfs_levels(&self, s: usize, t: usize) -> Option<Vec<i32>> {
        let mut level = vec![-1; self.n];
        let mut queue = std::collections::VecDeque::new();
        level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e as usize] as usize;
                if level[v] < 0 && self.cap[e as usize] > EPS {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if level[t] < 0 {
            None
        } else {
            Some(level)
        }
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: f64, level: &[i32], it: &mut [usize]) -> f64 {
        if u == t {
            return pushed;
        }
        while it[u] < self.head[u].len() {
            let e = self.head[u][it[u]] as usize;
            let v = self.to[e] as usize;
            if level[v] == level[u] + 1 && self.cap[e] > EPS {
                let d = self.dfs(v, t, pushed.min(self.cap[e]), level, it);
                if d > EPS {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            it[u] += 1;
        }
        0.0
    }

    /// Run max-flow from s to t; returns the flow value.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut flow = 0.0;
        while let Some(level) = self.bfs_levels(s, t) {
            let mut it = vec![0usize; self.n];
            loop {
                let pushed = self.dfs(s, t, f64::INFINITY, &level, &mut it);
                if pushed <= EPS {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    /// After `max_flow`, the set of nodes reachable from s in the residual
    /// graph — the source side of a minimum cut.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.head[u] {
                let v = self.to[e as usize] as usize;
                if !seen[v] && self.cap[e as usize] > EPS {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cut() {
        // s -> a -> t with bottleneck 1.5, plus a parallel path of capacity 1.
        let mut g = FlowGraph::new(4);
        let (s, a, b, t) = (0, 1, 2, 3);
        g.add_edge(s, a, 2.0, 0.0);
        g.add_edge(a, t, 1.5, 0.0);
        g.add_edge(s, b, 1.0, 0.0);
        g.add_edge(b, t, 3.0, 0.0);
        let f = g.max_flow(s, t);
        assert!((f - 2.5).abs() < 1e-9);
        let side = g.source_side(s);
        assert!(side[s] && side[a]);
        assert!(!side[t] && !side[b]);
    }

    #[test]
    fn undirected_edge_pair() {
        // undirected edge modelled as cap/cap pair
        let mut g = FlowGraph::new(3);
        g.add_edge(0, 1, 1.0, 1.0);
        g.add_edge(1, 2, 0.25, 0.25);
        let f = g.max_flow(0, 2);
        assert!((f - 0.25).abs() < 1e-9);
    }
}
