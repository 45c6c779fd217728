use std::collections::VecDeque;
use std::fmt;

use super::Structure;
use crate::error::{Error, Result};

/// The bipartite incidence multigraph: element nodes `0..n`, then one block
/// node per hyperedge, with one edge per tuple position.
#[derive(Debug, Clone)]
pub struct IncidenceGraph {
    elements: usize,
    blocks: Vec<(usize, Vec<usize>)>,
    /// `adjacency[node]` lists neighbouring nodes, once per parallel edge.
    adjacency: Vec<Vec<usize>>,
}

impl IncidenceGraph {
    pub fn new(s: &Structure) -> Self {
        let n = s.size();
        let blocks: Vec<(usize, Vec<usize>)> = s.hyperedges().map(|(sym, t)| (sym, t.to_vec())).collect();
        let mut adjacency = vec![Vec::new(); n + blocks.len()];
        for (b, (_, t)) in blocks.iter().enumerate() {
            for &a in t {
                adjacency[a].push(n + b);
                adjacency[n + b].push(a);
            }
        }
        IncidenceGraph {
            elements: n,
            blocks,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.blocks.iter().map(|(_, t)| t.len()).sum()
    }

    pub fn element_count(&self) -> usize {
        self.elements
    }

    pub fn blocks(&self) -> &[(usize, Vec<usize>)] {
        &self.blocks
    }

    pub fn has_parallel_edges(&self) -> bool {
        self.blocks.iter().any(|(_, t)| {
            let mut seen = t.clone();
            seen.sort_unstable();
            seen.windows(2).any(|w| w[0] == w[1])
        })
    }

    /// Breadth-first distances (in Inc edges) from `root`.
    pub fn distances_from(&self, root: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Length of a shortest cycle, `None` when acyclic.
    pub fn shortest_cycle(&self) -> Option<usize> {
        if self.has_parallel_edges() {
            return Some(2);
        }
        let n = self.node_count();
        let mut best: Option<usize> = None;
        for root in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adjacency[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}

/// A non-negative multiple of one half, stored as its double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halves(pub usize);

impl Halves {
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for Halves {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

/// Distance-based invariants of a structure. `None` stands for infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub connected: bool,
    pub diameter: Option<Halves>,
    pub girth: Option<Halves>,
}

pub fn metrics(s: &Structure) -> Metrics {
    let inc = IncidenceGraph::new(s);
    let mut connected = true;
    let mut diameter = 0;
    for root in 0..inc.node_count() {
        for d in inc.distances_from(root) {
            match d {
                Some(d) => diameter = diameter.max(d),
                None => connected = false,
            }
        }
        if !connected {
            break;
        }
    }
    Metrics {
        connected,
        diameter: connected.then_some(Halves(diameter)),
        girth: inc.shortest_cycle().map(Halves),
    }
}

/// Distance between two elements, in halves; `None` if disconnected.
pub fn distance(s: &Structure, a: usize, b: usize) -> Option<Halves> {
    IncidenceGraph::new(s).distances_from(a)[b].map(Halves)
}

/// Whether the incidence multigraph is acyclic and connected.
pub fn is_tree(s: &Structure) -> bool {
    let inc = IncidenceGraph::new(s);
    let connected = inc.distances_from(0).iter().all(Option::is_some);
    connected && inc.edge_count() + 1 == inc.node_count()
}

/// Orders the hyperedges of a tree so that every prefix carries a subtree and
/// each new hyperedge meets the previous ones in exactly one position.
pub fn tree_decomposition(t: &Structure) -> Result<Vec<(usize, Vec<usize>)>> {
    if !is_tree(t) {
        return Err(Error::contract("tree decomposition of a structure that is not a tree"));
    }
    let inc = IncidenceGraph::new(t);
    let n = inc.element_count();
    if inc.blocks().is_empty() {
        return Err(Error::contract("tree decomposition needs at least one hyperedge"));
    }
    // Breadth-first over block nodes starting from the first hyperedge.
    let mut order = Vec::with_capacity(inc.blocks().len());
    let mut seen = vec![false; inc.node_count()];
    let mut queue = VecDeque::from([n]);
    seen[n] = true;
    while let Some(u) = queue.pop_front() {
        if u >= n {
            order.push(inc.blocks()[u - n].clone());
        }
        for &v in &inc.adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{directed_path, transitive_tournament};
    use crate::model::Signature;

    #[test]
    fn repeated_entry_gives_girth_one() {
        let sig = Signature::new([("R", 3)]).unwrap();
        let s = Structure::from_tuples(sig, 2, vec![vec![vec![0, 0, 1]]]).unwrap();
        assert_eq!(metrics(&s).girth, Some(Halves(2)));
        assert!(!is_tree(&s));
    }

    #[test]
    fn path_metrics() {
        let m = metrics(&directed_path(3));
        assert!(m.connected);
        assert_eq!(m.diameter, Some(Halves(6)));
        assert_eq!(m.girth, None);
        assert_eq!(distance(&directed_path(3), 0, 3), Some(Halves(6)));
    }

    #[test]
    fn tournament_girth() {
        let m = metrics(&transitive_tournament(3));
        assert_eq!(m.girth, Some(Halves(6)));
        assert_eq!(m.girth.unwrap().to_string(), "3");
    }

    #[test]
    fn disconnected_has_infinite_diameter() {
        let s = Structure::digraph(3, &[(0, 1)]).unwrap();
        let m = metrics(&s);
        assert!(!m.connected);
        assert_eq!(m.diameter, None);
    }

    #[test]
    fn half_integer_diameter() {
        let sig = Signature::new([("U", 1)]).unwrap();
        let s = Structure::from_tuples(sig, 1, vec![vec![vec![0]]]).unwrap();
        assert_eq!(metrics(&s).diameter, Some(Halves(1)));
        assert_eq!(Halves(1).to_string(), "0.5");
    }

    #[test]
    fn tree_recognition() {
        assert!(is_tree(&directed_path(3)));
        assert!(!is_tree(&transitive_tournament(3)));
        assert!(is_tree(&transitive_tournament(1)));
        assert!(!is_tree(&Structure::digraph(2, &[]).unwrap()));
    }

    #[test]
    fn path_decomposes_in_path_order() {
        let order = tree_decomposition(&directed_path(3)).unwrap();
        let arcs: Vec<Vec<usize>> = order.into_iter().map(|(_, t)| t).collect();
        assert_eq!(arcs, vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert!(tree_decomposition(&transitive_tournament(3)).is_err());
        assert!(tree_decomposition(&transitive_tournament(1)).is_err());
    }
}
