//! Finite simple connected graphs, the `n m` / `u v` edge-list format, and
//! automorphism groups by backtracking over distance profiles.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::guards::guards;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, repeated edges,
    /// out-of-range endpoints and disconnected results.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Graph("graph has no vertices".into()));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(Error::PointOutOfRange {
                        point: x,
                        degree: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::Graph(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Graph(format!("repeated edge {{{u}, {v}}}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = Graph { adjacency };
        if g.distances_from(0).contains(&usize::MAX) {
            return Err(Error::Graph("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                point: x,
                degree: self.vertex_count(),
            })
        }
    }

    /// Breadth-first distances; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, x: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[x] = 0;
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Vertices at distance at most `r` from `x`, sorted.
    pub fn ball(&self, x: usize, r: usize) -> Vec<usize> {
        let dist = self.distances_from(x);
        (0..self.vertex_count()).filter(|&v| dist[v] <= r).collect()
    }

    pub fn preserves_adjacency(&self, g: &Permutation) -> bool {
        g.degree() == self.vertex_count()
            && self.edges().iter().all(|&(u, v)| self.is_adjacent(g.image(u), g.image(v)))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let (n, m) = parse_two(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (lineno, line) in lines {
            edges.push(parse_two(lineno, line)?);
        }
        if edges.len() != m {
            return Err(Error::parse(
                hline,
                format!("header promises {m} edges, found {}", edges.len()),
            ));
        }
        Graph::new(n, &edges)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Full automorphism group.
    ///
    /// Vertices are taken in breadth-first order from 0. For each prefix
    /// length `k`, deepest first, the orbit of the `k`-th vertex under the
    /// pointwise stabiliser of the prefix is completed: every candidate
    /// image outside the orbit known so far is tried by a depth-first
    /// extension that keeps all distances to assigned vertices. Candidates
    /// must agree on degree and on the count of vertices at each distance.
    pub fn automorphisms(&self) -> Result<PermGroup> {
        let n = self.vertex_count();
        let cap = guards().graph_vertices;
        if n > cap {
            return Err(Error::guard("automorphism search vertices", n, cap));
        }
        let dist: Vec<Vec<usize>> = (0..n).map(|x| self.distances_from(x)).collect();
        let invariant: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|x| {
                let mut counts = vec![0usize; n];
                for &d in &dist[x] {
                    counts[d] += 1;
                }
                (self.degree(x), counts)
            })
            .collect();
        let order = self.bfs_order();
        let search = AutSearch {
            n,
            dist: &dist,
            invariant: &invariant,
            order: &order,
        };
        let mut gens: Vec<Permutation> = Vec::new();
        for k in (0..n).rev() {
            let prefix = &order[..k];
            if search.prefix_is_rigid(prefix) {
                continue;
            }
            let v = order[k];
            let fixing: Vec<Permutation> = gens
                .iter()
                .filter(|g| prefix.iter().all(|&x| g.fixes(x)))
                .cloned()
                .collect();
            let mut orbit = vec![false; n];
            orbit[v] = true;
            let mut fixing = fixing;
            close_orbit(&mut orbit, &fixing);
            for w in 0..n {
                if orbit[w] || !search.compatible(prefix, v, w) {
                    continue;
                }
                if let Some(g) = search.extend(k, w) {
                    fixing.push(g.clone());
                    gens.push(g);
                    close_orbit(&mut orbit, &fixing);
                }
            }
        }
        PermGroup::new(n, gens)
    }

    fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.vertex_count()];
        seen[0] = true;
        let mut order = vec![0];
        let mut i = 0;
        while i < order.len() {
            for &v in &self.adjacency[order[i]] {
                if !seen[v] {
                    seen[v] = true;
                    order.push(v);
                }
            }
            i += 1;
        }
        order
    }
}

fn parse_two(lineno: usize, line: &str) -> Result<(usize, usize)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::parse(lineno, format!("expected two integers, got {line:?}")));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::parse(lineno, format!("not a non-negative integer: {s:?}")))
    };
    Ok((num(fields[0])?, num(fields[1])?))
}

fn close_orbit(orbit: &mut [bool], gens: &[Permutation]) {
    let mut stack: Vec<usize> = (0..orbit.len()).filter(|&x| orbit[x]).collect();
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.image(x);
            if !orbit[y] {
                orbit[y] = true;
                stack.push(y);
            }
        }
    }
}

struct AutSearch<'a> {
    n: usize,
    dist: &'a [Vec<usize>],
    invariant: &'a [(usize, Vec<usize>)],
    order: &'a [usize],
}

impl AutSearch<'_> {
    /// True when distances to the prefix separate all vertices, so only the
    /// identity fixes the prefix pointwise.
    fn prefix_is_rigid(&self, prefix: &[usize]) -> bool {
        if prefix.is_empty() {
            return self.n == 1;
        }
        let mut profiles: Vec<Vec<usize>> = (0..self.n)
            .map(|v| prefix.iter().map(|&x| self.dist[x][v]).collect())
            .collect();
        profiles.sort_unstable();
        profiles.windows(2).all(|w| w[0] != w[1])
    }

    fn compatible(&self, prefix: &[usize], v: usize, w: usize) -> bool {
        self.invariant[v] == self.invariant[w]
            && prefix.iter().all(|&x| self.dist[x][v] == self.dist[x][w])
    }

    /// An automorphism fixing `order[..k]` and sending `order[k]` to `w`.
    fn extend(&self, k: usize, w: usize) -> Option<Permutation> {
        let mut image = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        for &x in &self.order[..k] {
            image[x] = x;
            used[x] = true;
        }
        if used[w] {
            return None;
        }
        image[self.order[k]] = w;
        used[w] = true;
        if !self.consistent(&image, k, self.order[k], w) {
            return None;
        }
        if self.dfs(&mut image, &mut used, k + 1) {
            Some(Permutation::from_images(image).expect("search assigns a bijection"))
        } else {
            None
        }
    }

    /// Distances from `v ↦ w` to the first `upto` vertices in order agree.
    fn consistent(&self, image: &[usize], upto: usize, v: usize, w: usize) -> bool {
        self.order[..upto]
            .iter()
            .all(|&x| self.dist[x][v] == self.dist[image[x]][w])
    }

    fn dfs(&self, image: &mut [usize], used: &mut [bool], i: usize) -> bool {
        if i == self.n {
            return true;
        }
        let v = self.order[i];
        for w in 0..self.n {
            if used[w] || self.invariant[v] != self.invariant[w] || !self.consistent(image, i, v, w) {
                continue;
            }
            image[v] = w;
            used[w] = true;
            if self.dfs(image, used, i + 1) {
                return true;
            }
            used[w] = false;
            image[v] = usize::MAX;
        }
        false
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.vertex_count(), self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}
