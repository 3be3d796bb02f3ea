use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::kernel::{ProductState, Scenario, TypeSpace};

/// A sampled typed graph with its connected components.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    pub n: usize,
    pub num_types: usize,
    pub node_types: Vec<usize>,
    /// Unordered pairs stored as `(larger, smaller)`.
    pub edges: Vec<(u32, u32)>,
    /// Dense component index of every node; components are numbered in
    /// order of their smallest node.
    pub component_id: Vec<u32>,
    pub component_sizes: Vec<usize>,
}

impl GraphInstance {
    /// Graph without component labels; call [`components`] to fill them.
    pub fn from_edges(num_types: usize, node_types: Vec<usize>, edges: Vec<(u32, u32)>) -> Result<Self> {
        let n = node_types.len();
        if n > u32::MAX as usize {
            return Err(Error::InvalidArgument(format!("{n} nodes exceed u32 indexing")));
        }
        if let Some(t) = node_types.iter().find(|&&t| t >= num_types) {
            return Err(Error::InvalidArgument(format!("node type {t} out of range")));
        }
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n || u == v {
                return Err(Error::InvalidArgument(format!("invalid edge ({u}, {v})")));
            }
        }
        Ok(Self {
            n,
            num_types,
            node_types,
            edges,
            component_id: Vec::new(),
            component_sizes: Vec::new(),
        })
    }

    pub fn is_labeled(&self) -> bool {
        self.component_id.len() == self.n
    }

    pub fn num_components(&self) -> usize {
        self.component_sizes.len()
    }

    #[inline]
    pub fn component_size_of(&self, node: usize) -> usize {
        self.component_sizes[self.component_id[node] as usize]
    }

    pub fn largest_component(&self) -> Option<(u32, usize)> {
        // First maximum wins, so the result is deterministic.
        self.component_sizes
            .iter()
            .enumerate()
            .fold(None, |best: Option<(u32, usize)>, (c, &size)| match best {
                Some((_, b)) if b >= size => best,
                _ => Some((c as u32, size)),
            })
    }

    pub fn largest_component_size(&self) -> usize {
        self.largest_component().map_or(0, |(_, s)| s)
    }

    pub fn nodes_of_type(&self, t: usize) -> Vec<u32> {
        (0..self.n as u32).filter(|&v| self.node_types[v as usize] == t).collect()
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }
}

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grandparent = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grandparent;
            x = grandparent;
        }
        x
    }

    /// Returns `false` when `a` and `b` were already joined.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }
}

/// Labels connected components.
pub fn components(mut g: GraphInstance) -> GraphInstance {
    let mut dsu = DisjointSet::new(g.n);
    for &(u, v) in &g.edges {
        dsu.union(u, v);
    }
    let mut root_label = vec![u32::MAX; g.n];
    let mut component_id = Vec::with_capacity(g.n);
    let mut sizes = Vec::new();
    for v in 0..g.n as u32 {
        let root = dsu.find(v) as usize;
        if root_label[root] == u32::MAX {
            root_label[root] = sizes.len() as u32;
            sizes.push(0);
        }
        let c = root_label[root];
        sizes[c as usize] += 1;
        component_id.push(c);
    }
    g.component_id = component_id;
    g.component_sizes = sizes;
    g
}

/// Splits `n` nodes across types by largest-remainder rounding of `mu * n`.
/// Remainder ties go to the lower type index.
pub fn assign_type_counts(types: &TypeSpace, n: usize) -> Vec<usize> {
    let exact: Vec<f64> = types.mu().iter().map(|m| m * n as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| {
        let (fa, fb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let remaining = n.saturating_sub(assigned);
    for &t in order.iter().cycle().take(remaining) {
        counts[t] += 1;
    }
    counts
}

/// Samples an inhomogeneous random graph on `n` nodes.
///
/// Nodes are laid out in contiguous type blocks. Every unordered pair of
/// types `i` and `j` is an edge independently with probability
/// `min(kappa(i,j) / n, 1)`. Each block pair is scanned with geometric skips
/// between successive edges, so the work is linear in the number of edges.
/// The returned graph already has its components labeled.
pub fn sample_graph(s: &Scenario, state: ProductState, n: usize, seed: u64) -> Result<GraphInstance> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("graph needs at least 2 nodes, got {n}")));
    }
    if n > u32::MAX as usize {
        return Err(Error::InvalidArgument(format!("{n} nodes exceed u32 indexing")));
    }
    let kernel = s.kernel(state);
    let counts = assign_type_counts(s.types(), n);
    let mut offsets = Vec::with_capacity(counts.len() + 1);
    offsets.push(0usize);
    for c in &counts {
        offsets.push(offsets.last().unwrap() + c);
    }
    let node_types: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(t, &c)| std::iter::repeat_n(t, c))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..counts.len() {
        for b in a..counts.len() {
            let p = (kernel.get(a, b) / n as f64).min(1.0);
            if a == b {
                sample_within_block(&mut rng, offsets[a], counts[a], p, &mut edges);
            } else {
                sample_across_blocks(&mut rng, offsets[a], counts[a], offsets[b], counts[b], p, &mut edges);
            }
        }
    }

    let g = GraphInstance {
        n,
        num_types: counts.len(),
        node_types,
        edges,
        component_id: Vec::new(),
        component_sizes: Vec::new(),
    };
    Ok(components(g))
}

/// Calls `f` with each success position of a Bernoulli(`p`) sequence of
/// length `total`, jumping between successes with geometric skips.
fn for_each_success(rng: &mut ChaCha8Rng, p: f64, total: u64, mut f: impl FnMut(u64)) {
    if p <= 0.0 || total == 0 {
        return;
    }
    if p >= 1.0 {
        (0..total).for_each(f);
        return;
    }
    let skips = Geometric::new(p).expect("0 < p < 1");
    let mut k = skips.sample(rng);
    while k < total {
        f(k);
        k = match k.checked_add(1).and_then(|x| x.checked_add(skips.sample(rng))) {
            Some(next) => next,
            None => break,
        };
    }
}

fn sample_within_block(rng: &mut ChaCha8Rng, offset: usize, size: usize, p: f64, edges: &mut Vec<(u32, u32)>) {
    let total = (size as u64) * (size as u64).saturating_sub(1) / 2;
    // Pair index k enumerates (v, w) with w < v row by row.
    let mut v = 1u64;
    let mut row_start = 0u64;
    for_each_success(rng, p, total, |k| {
        while k >= row_start + v {
            row_start += v;
            v += 1;
        }
        let w = k - row_start;
        edges.push(((offset as u64 + v) as u32, (offset as u64 + w) as u32));
    });
}

fn sample_across_blocks(
    rng: &mut ChaCha8Rng,
    offset_a: usize,
    size_a: usize,
    offset_b: usize,
    size_b: usize,
    p: f64,
    edges: &mut Vec<(u32, u32)>,
) {
    if size_a == 0 || size_b == 0 {
        return;
    }
    let total = size_a as u64 * size_b as u64;
    for_each_success(rng, p, total, |k| {
        let u = offset_a as u64 + k / size_b as u64;
        let w = offset_b as u64 + k % size_b as u64;
        edges.push((u.max(w) as u32, u.min(w) as u32));
    });
}

/// Seeds `plan_counts[t]` distinct type-`t` nodes, drawn uniformly without
/// replacement, and returns the number of nodes in the union of their
/// components.
///
/// Draws use a partial Fisher-Yates shuffle on a per-type stream, so a
/// larger plan with the same `seed` seeds a superset of nodes.
pub fn measure_adoption(g: &GraphInstance, plan_counts: &[u64], seed: u64) -> Result<u64> {
    if !g.is_labeled() {
        return Err(Error::InvalidArgument("graph components are not labeled".into()));
    }
    if plan_counts.len() != g.num_types {
        return Err(Error::DimensionMismatch {
            context: "seeding plan vs graph types",
            expected: g.num_types,
            found: plan_counts.len(),
        });
    }
    let mut reached = vec![false; g.num_components()];
    let mut adopted = 0u64;
    for (t, &count) in plan_counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let mut pool = g.nodes_of_type(t);
        if count > pool.len() as u64 {
            return Err(Error::InsufficientNodes {
                type_index: t,
                requested: count,
                available: pool.len(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        for i in 0..count as usize {
            let j = rng.random_range(i..pool.len());
            pool.swap(i, j);
            let c = g.component_id[pool[i] as usize] as usize;
            if !reached[c] {
                reached[c] = true;
                adopted += g.component_sizes[c] as u64;
            }
        }
    }
    Ok(adopted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Kernel, TypeSpace};
    use std::collections::HashSet;

    fn er(kg: f64, kb: f64) -> Scenario {
        Scenario::erdos_renyi(kg, kb, 1.0, 1000).unwrap()
    }

    #[test]
    fn zero_kernel_gives_edgeless_graph() {
        let g = sample_graph(&er(2.0, 0.0), ProductState::Bad, 50, 1).unwrap();
        assert!(g.edges.is_empty());
        assert_eq!(g.num_components(), 50);
    }

    #[test]
    fn saturated_kernel_gives_complete_graph() {
        let g = sample_graph(&er(2.0, 0.5), ProductState::Good, 2, 1).unwrap();
        assert_eq!(g.edges, vec![(1, 0)]);

        let t = TypeSpace::new(vec!["a".into(), "b".into()], vec![0.4, 0.6]).unwrap();
        let big = Kernel::from_rows(&[vec![50.0, 50.0], vec![50.0, 50.0]]).unwrap();
        let small = Kernel::from_rows(&[vec![0.1, 0.1], vec![0.1, 0.1]]).unwrap();
        let s = Scenario::new(t, big, small, 1.0, 10).unwrap();
        let g = sample_graph(&s, ProductState::Good, 10, 3).unwrap();
        assert_eq!(g.edges.len(), 45);
        let unique: HashSet<_> = g.edges.iter().collect();
        assert_eq!(unique.len(), 45);
        assert_eq!(g.component_sizes, vec![10]);
        assert_eq!(g.node_types, vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn rejects_tiny_graphs() {
        assert!(sample_graph(&er(2.0, 0.5), ProductState::Good, 1, 0).is_err());
    }

    #[test]
    fn no_self_loops_or_duplicates() {
        let t = TypeSpace::new(vec!["a".into(), "b".into(), "c".into()], vec![0.2, 0.3, 0.5]).unwrap();
        let good = Kernel::from_rows(&[vec![30.0, 5.0, 1.0], vec![5.0, 20.0, 2.0], vec![1.0, 2.0, 10.0]]).unwrap();
        let bad = Kernel::from_rows(&[vec![0.1; 3], vec![0.1; 3], vec![0.1; 3]]).unwrap();
        let s = Scenario::new(t, good, bad, 1.0, 10).unwrap();
        let g = sample_graph(&s, ProductState::Good, 300, 9).unwrap();
        let unique: HashSet<_> = g.edges.iter().collect();
        assert_eq!(unique.len(), g.edges.len());
        assert!(g.edges.iter().all(|&(u, v)| u > v && (u as usize) < g.n));
        assert_eq!(g.component_sizes.iter().sum::<usize>(), 300);
        assert!(g.edges.iter().all(|&(u, v)| g.component_id[u as usize] == g.component_id[v as usize]));
    }

    #[test]
    fn components_of_small_graphs() {
        let g = components(GraphInstance::from_edges(1, vec![0; 5], vec![]).unwrap());
        assert_eq!(g.component_sizes, vec![1; 5]);
        assert_eq!(g.component_id, vec![0, 1, 2, 3, 4]);

        let g = components(GraphInstance::from_edges(1, vec![0; 4], vec![(1, 0), (2, 1)]).unwrap());
        assert_eq!(g.component_id, vec![0, 0, 0, 1]);
        assert_eq!(g.component_sizes, vec![3, 1]);
        assert_eq!(g.largest_component(), Some((0, 3)));
    }

    #[test]
    fn type_counts_use_largest_remainder() {
        let t = TypeSpace::new(vec!["a".into(), "b".into(), "c".into()], vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(assign_type_counts(&t, 10), vec![2, 3, 5]);
        assert_eq!(assign_type_counts(&t, 7), vec![1, 2, 4]);
        let third = 1.0 / 3.0;
        let t = TypeSpace::new(vec!["a".into(), "b".into(), "c".into()], vec![third, third, 1.0 - 2.0 * third]).unwrap();
        assert_eq!(assign_type_counts(&t, 4).iter().sum::<usize>(), 4);
    }

    #[test]
    fn adoption_examples() {
        let g = components(GraphInstance::from_edges(1, vec![0; 4], vec![(1, 0), (2, 1)]).unwrap());
        assert_eq!(measure_adoption(&g, &[0], 5).unwrap(), 0);
        assert_eq!(measure_adoption(&g, &[4], 5).unwrap(), 4);
        assert!(matches!(measure_adoption(&g, &[5], 5), Err(Error::InsufficientNodes { .. })));
        assert!(matches!(measure_adoption(&g, &[1, 1], 5), Err(Error::DimensionMismatch { .. })));
    }
}
