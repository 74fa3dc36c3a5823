//! Small directed-graph helpers shared by the symbol and state graphs.

use std::collections::VecDeque;

/// Forward-BFS reachability from `root`.
fn reachable(adj: &[Vec<usize>], root: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

fn transpose(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut rev = vec![Vec::new(); adj.len()];
    for (u, outs) in adj.iter().enumerate() {
        for &v in outs {
            rev[v].push(u);
        }
    }
    rev
}

/// Every vertex reaches and is reached by vertex 0.
pub(crate) fn is_strongly_connected(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return false;
    }
    reachable(adj, 0).iter().all(|&b| b) && reachable(&transpose(adj), 0).iter().all(|&b| b)
}

/// Number of strongly connected components (Kosaraju).
pub(crate) fn scc_count(adj: &[Vec<usize>]) -> usize {
    fn order_pass(v: usize, adj: &[Vec<usize>], seen: &mut [bool], order: &mut Vec<usize>) {
        seen[v] = true;
        for &u in &adj[v] {
            if !seen[u] {
                order_pass(u, adj, seen, order);
            }
        }
        order.push(v);
    }
    fn mark_pass(v: usize, adj: &[Vec<usize>], seen: &mut [bool]) {
        seen[v] = true;
        for &u in &adj[v] {
            if !seen[u] {
                mark_pass(u, adj, seen);
            }
        }
    }

    let n = adj.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for v in 0..n {
        if !seen[v] {
            order_pass(v, adj, &mut seen, &mut order);
        }
    }
    let rev = transpose(adj);
    seen.fill(false);
    let mut count = 0;
    for &v in order.iter().rev() {
        if !seen[v] {
            mark_pass(v, &rev, &mut seen);
            count += 1;
        }
    }
    count
}

/// BFS distances from `root`; `None` for unreachable vertices.
pub(crate) fn bfs_levels(adj: &[Vec<usize>], root: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    let mut queue = VecDeque::from([root]);
    dist[root] = Some(0);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Period of a strongly connected graph together with the class of each
/// vertex: the gcd over all edges (u,v) of dist(u)+1-dist(v), classes are
/// BFS distances mod the period, class 0 containing the root (vertex 0).
pub(crate) fn pattern_period(adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let dist: Vec<usize> = bfs_levels(adj, 0)
        .into_iter()
        .map(|d| d.expect("strongly connected"))
        .collect();
    let mut g = 0usize;
    for (u, outs) in adj.iter().enumerate() {
        for &v in outs {
            // dist(v) <= dist(u)+1 for every edge of a BFS-covered graph
            g = gcd(g, dist[u] + 1 - dist[v]);
        }
    }
    let m = if g == 0 { 1 } else { g };
    let classes = dist.iter().map(|&d| d % m).collect();
    (m, classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycle_is_periodic() {
        let adj = vec![vec![1], vec![0]];
        assert!(is_strongly_connected(&adj));
        let (m, classes) = pattern_period(&adj);
        assert_eq!(m, 2);
        assert_eq!(classes, vec![0, 1]);
    }

    #[test]
    fn self_loop_forces_period_one() {
        let adj = vec![vec![1, 2], vec![0, 2], vec![0, 1, 2]];
        let (m, _) = pattern_period(&adj);
        assert_eq!(m, 1);
    }

    #[test]
    fn disconnected_components_counted() {
        let adj = vec![vec![0], vec![1]];
        assert!(!is_strongly_connected(&adj));
        assert_eq!(scc_count(&adj), 2);
    }
}
