//! Finite connected domain graphs and hop-count distances.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::field::LevelField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// 4-neighbor grid, row-major vertex ids (`id = y * width + x`).
    Grid { width: usize, height: usize },
    MeshVertex,
    MeshCell,
    Generic,
}

/// A finite undirected connected graph. Immutable after construction;
/// adjacency is symmetric, irreflexive, and stored sorted per vertex.
#[derive(Debug, Clone)]
pub struct DomainGraph {
    kind: GraphKind,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl DomainGraph {
    /// 4-neighbor grid; distances are the Manhattan metric.
    pub fn build_grid(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroGridDimension { width, height });
        }
        let id = |x: usize, y: usize| y * width + x;
        let mut adj = vec![Vec::new(); width * height];
        for y in 0..height {
            for x in 0..width {
                let mut n = Vec::with_capacity(4);
                if y > 0 {
                    n.push(id(x, y - 1));
                }
                if x > 0 {
                    n.push(id(x - 1, y));
                }
                if x + 1 < width {
                    n.push(id(x + 1, y));
                }
                if y + 1 < height {
                    n.push(id(x, y + 1));
                }
                n.sort_unstable();
                adj[id(x, y)] = n;
            }
        }
        let edge_count = adj.iter().map(|n| n.len()).sum::<usize>() / 2;
        Ok(DomainGraph { kind: GraphKind::Grid { width, height }, adj, edge_count })
    }

    /// Generic graph from an undirected edge list. Rejects self-loops,
    /// out-of-range endpoints, and disconnected inputs.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges_kind(vertex_count, edges, GraphKind::Generic)
    }

    pub(crate) fn from_edges_kind(
        vertex_count: usize,
        edges: &[(usize, usize)],
        kind: GraphKind,
    ) -> Result<Self> {
        let mut adj = vec![Vec::new(); vertex_count];
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::EdgeOutOfRange { a, b, vertex_count });
            }
            if a == b {
                return Err(Error::SelfLoop { vertex: a });
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for n in &mut adj {
            n.sort_unstable();
            n.dedup();
        }
        let edge_count = adj.iter().map(|n| n.len()).sum::<usize>() / 2;
        let g = DomainGraph { kind, adj, edge_count };
        let components = g.component_count();
        if components != 1 {
            return Err(match kind {
                GraphKind::MeshVertex => Error::DisconnectedVertexGraph { components },
                GraphKind::MeshCell => Error::DisconnectedCellGraph { components },
                _ => Error::Disconnected { components },
            });
        }
        Ok(g)
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Grid dimensions, if this graph is a grid.
    pub fn grid_dims(&self) -> Option<(usize, usize)> {
        match self.kind {
            GraphKind::Grid { width, height } => Some((width, height)),
            _ => None,
        }
    }

    /// Undirected edges with `a < b`, in vertex order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, n)| n.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    fn component_count(&self) -> usize {
        if self.adj.is_empty() {
            return 0;
        }
        let mut seen = vec![false; self.adj.len()];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.adj.len() {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    /// Exact hop counts from each vertex to its nearest source
    /// (simultaneous breadth-first sweep).
    pub fn multi_source_distances(&self, sources: &[usize]) -> Result<Vec<u32>> {
        if sources.is_empty() {
            return Err(Error::EmptySources);
        }
        let n = self.vertex_count();
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if s >= n {
                return Err(Error::VertexOutOfRange { vertex: s, vertex_count: n });
            }
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v] + 1;
            for &w in &self.adj[v] {
                if dist[w] == u32::MAX {
                    dist[w] = d;
                    queue.push_back(w);
                }
            }
        }
        debug_assert!(dist.iter().all(|&d| d != u32::MAX), "graph is connected by construction");
        Ok(dist)
    }
}

/// First edge (in vertex order) whose endpoints differ by more than one
/// level, or `None` if the field is gradually varied.
pub fn gradual_variation_violation(g: &DomainGraph, field: &LevelField) -> Option<(usize, usize)> {
    debug_assert_eq!(field.len(), g.vertex_count());
    g.edges().find(|&(a, b)| {
        let (i, j) = (field.index(a), field.index(b));
        i.abs_diff(j) > 1
    })
}

/// True iff every adjacent pair of vertices carries equal or
/// index-adjacent levels.
pub fn is_gradually_varied(g: &DomainGraph, field: &LevelField) -> bool {
    gradual_variation_violation(g, field).is_none()
}
