//! Cayley graphs, normal quotients, graph direct products and the
//! decomposition of normal edge-transitive Cayley graphs.

use std::collections::BTreeMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use serde_json::json;

use crate::automorphism;
use crate::frattini::{self, ConnectionSet};
use crate::group::{
    direct_product, is_characteristically_simple, quotient, CosetMap, Elem,
    FiniteGroup, Subgroup,
};
use crate::{Error, Limits, Result};

/// Finite undirected graph without loops, stored as adjacency bitsets.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adjacency: Vec<FixedBitSet>,
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimpleGraph")
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edges())
            .finish()
    }
}

impl SimpleGraph {
    /// The graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        SimpleGraph {
            adjacency: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SimpleGraph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::ElementOutOfRange(u.max(v)));
            }
            if u == v {
                return Err(Error::PreconditionFailed(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].ones()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .flat_map(|u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map_or(0, |_| self.degree(0));
        (0..self.vertex_count()).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = FixedBitSet::with_capacity(n);
        let mut stack = vec![0];
        seen.insert(0);
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen.put(w) {
                    stack.push(w);
                }
            }
        }
        seen.count_ones(..) == n
    }

    pub fn complement(&self) -> SimpleGraph {
        let n = self.vertex_count();
        let mut out = SimpleGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    out.add_edge(u, v);
                }
            }
        }
        out
    }

    /// Standard graph6 encoding (without header).
    pub fn to_graph6(&self) -> String {
        let n = self.vertex_count();
        let mut bytes: Vec<u8> = Vec::new();
        if n <= 62 {
            bytes.push(n as u8 + 63);
        } else {
            bytes.push(126);
            bytes.extend([(n >> 12) & 63, (n >> 6) & 63, n & 63].map(|b| b as u8 + 63));
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for v in 1..n {
            for u in 0..v {
                acc = acc << 1 | self.has_edge(u, v) as u8;
                filled += 1;
                if filled == 6 {
                    bytes.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            bytes.push((acc << (6 - filled)) + 63);
        }
        String::from_utf8(bytes).expect("graph6 bytes are printable ASCII")
    }

    pub fn from_graph6(text: &str) -> Result<Self> {
        let text = text.trim();
        let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
        let bytes = text.as_bytes();
        if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(Error::Parse("graph6 bytes must lie in 63..=126".into()));
        }
        let (n, rest) = match bytes {
            [] => return Err(Error::Parse("empty graph6 string".into())),
            [126, 126, ..] => return Err(Error::Parse("graph6 orders above 258047 are not supported".into())),
            [126, a, b, c, rest @ ..] => {
                let n = ((*a as usize - 63) << 12) | ((*b as usize - 63) << 6) | (*c as usize - 63);
                (n, rest)
            }
            [126, ..] => return Err(Error::Parse("truncated graph6 order".into())),
            [first, rest @ ..] => (*first as usize - 63, rest),
        };
        let bits = n * n.saturating_sub(1) / 2;
        if rest.len() != bits.div_ceil(6) {
            return Err(Error::Parse(format!(
                "graph6 body has {} bytes, expected {}",
                rest.len(),
                bits.div_ceil(6)
            )));
        }
        let mut g = SimpleGraph::empty(n);
        let mut k = 0;
        for v in 1..n {
            for u in 0..v {
                if (rest[k / 6] - 63) >> (5 - k % 6) & 1 == 1 {
                    g.add_edge(u, v);
                }
                k += 1;
            }
        }
        Ok(g)
    }

    /// One `u v` line per edge, `u < v`, sorted.
    pub fn to_edge_list(&self) -> String {
        self.edges().iter().map(|(u, v)| format!("{u} {v}\n")).collect()
    }
}

pub fn complete_graph(n: usize) -> SimpleGraph {
    SimpleGraph::empty(n).complement()
}

pub fn cycle_graph(n: usize) -> SimpleGraph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::from_edges(n, &edges).expect("cycles of length at least 3")
}

pub fn complete_bipartite(m: usize, n: usize) -> SimpleGraph {
    let edges: Vec<(usize, usize)> = (0..m).flat_map(|u| (m..m + n).map(move |v| (u, v))).collect();
    SimpleGraph::from_edges(m + n, &edges).expect("in range")
}

/// The `d`-dimensional cube `Q_d` on bit strings.
pub fn hypercube(d: u32) -> SimpleGraph {
    let n = 1usize << d;
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..d).map(move |i| (u, u ^ 1 << i)))
        .filter(|(u, v)| u < v)
        .collect();
    SimpleGraph::from_edges(n, &edges).expect("in range")
}

pub fn disjoint_union(a: &SimpleGraph, b: &SimpleGraph) -> SimpleGraph {
    let shift = a.vertex_count();
    let mut edges = a.edges();
    edges.extend(b.edges().into_iter().map(|(u, v)| (u + shift, v + shift)));
    SimpleGraph::from_edges(shift + b.vertex_count(), &edges).expect("in range")
}

/// A vertex map between two graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexMap {
    pub map: Vec<usize>,
}

impl VertexMap {
    /// Every source edge lands on a target edge.
    pub fn is_homomorphism(&self, source: &SimpleGraph, target: &SimpleGraph) -> bool {
        source
            .edges()
            .iter()
            .all(|&(u, v)| target.has_edge(self.map[u], self.map[v]))
    }

    pub fn is_injective(&self) -> bool {
        let mut sorted = self.map.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }
}

/// `Cay(G;C)`, with vertex ids equal to element ids.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    connection: ConnectionSet,
    graph: SimpleGraph,
}

impl CayleyGraph {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.connection.group()
    }

    pub fn connection(&self) -> &ConnectionSet {
        &self.connection
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }
}

/// The graph with edges `{g, h}` for `gh⁻¹ ∈ set`; `set` must be inverse-closed and avoid 1.
pub fn cayley_simple_graph(g: &FiniteGroup, set: &[Elem]) -> SimpleGraph {
    let mut graph = SimpleGraph::empty(g.order());
    for x in g.elements() {
        for &c in set {
            graph.add_edge(x, g.mul(c, x));
        }
    }
    graph
}

pub fn cayley_graph(c: &ConnectionSet) -> CayleyGraph {
    CayleyGraph {
        graph: cayley_simple_graph(c.group(), c.elements()),
        connection: c.clone(),
    }
}

/// Builds the connection set and its Cayley graph in one step.
pub fn build_cayley_graph(g: &Arc<FiniteGroup>, set: &[Elem], limits: &Limits) -> Result<CayleyGraph> {
    Ok(cayley_graph(&frattini::make_connection_set(g, set, limits)?))
}

/// `Cay(G/N; CN/N)` together with the coset map.
#[derive(Debug, Clone)]
pub struct NormalQuotient {
    pub map: CosetMap,
    pub graph: CayleyGraph,
    /// Elements of `C` lying in `N`, whose images were dropped as loops.
    pub dropped: Vec<Elem>,
}

fn in_invariant_lattice(c: &ConnectionSet, n: &Subgroup) -> bool {
    n.order() < c.group().order()
        && n.is_normal_in(c.group())
        && automorphism::is_invariant_subgroup(n, c.aut_gc())
}

fn build_quotient(gamma: &CayleyGraph, n: &Subgroup, limits: &Limits) -> Result<NormalQuotient> {
    let c = gamma.connection();
    let map = quotient(c.group(), n)?;
    let dropped: Vec<Elem> = c.elements().iter().copied().filter(|&x| n.contains(x)).collect();
    let mut set: Vec<Elem> = c
        .elements()
        .iter()
        .map(|&x| map.project(x))
        .filter(|&q| q != 0)
        .collect();
    set.sort_unstable();
    set.dedup();
    let group = Arc::new(map.quotient().clone());
    let graph = build_cayley_graph(&group, &set, limits)?;
    Ok(NormalQuotient { map, graph, dropped })
}

/// The normal quotient graph for `N ∈ A(G;C)` with `C ∩ N = ∅`.
pub fn quotient_cayley(gamma: &CayleyGraph, n: &Subgroup, limits: &Limits) -> Result<NormalQuotient> {
    if !in_invariant_lattice(gamma.connection(), n) {
        return Err(Error::NotInLattice);
    }
    if gamma.connection().elements().iter().any(|&x| n.contains(x)) {
        return Err(Error::ConnectionMeetsKernel);
    }
    build_quotient(gamma, n, limits)
}

/// Like [`quotient_cayley`] but accepts `C ∩ N ≠ ∅`: elements of `C` in `N`
/// would become loops and are dropped from the quotient connection set.
pub fn quotient_cayley_dropping_loops(gamma: &CayleyGraph, n: &Subgroup, limits: &Limits) -> Result<NormalQuotient> {
    if !in_invariant_lattice(gamma.connection(), n) {
        return Err(Error::NotInLattice);
    }
    build_quotient(gamma, n, limits)
}

/// Mixed-radix tuple encoding with the first coordinate most significant,
/// matching nested direct products of groups.
fn encode(coords: &[usize], radices: &[usize]) -> usize {
    coords.iter().zip(radices).fold(0, |acc, (&c, &r)| acc * r + c)
}

fn decode(mut id: usize, radices: &[usize]) -> Vec<usize> {
    let mut coords = vec![0; radices.len()];
    for (slot, &r) in coords.iter_mut().zip(radices).rev() {
        *slot = id % r;
        id /= r;
    }
    coords
}

fn product_size(radices: &[usize], limits: &Limits) -> Result<usize> {
    radices.iter().try_fold(1usize, |acc, &r| {
        acc.checked_mul(r)
            .filter(|&v| v <= limits.graph_cap)
            .ok_or(Error::ProductTooLarge {
                vertices: acc.saturating_mul(r),
                cap: limits.graph_cap,
            })
    })
}

/// The direct (tensor) product: tuples adjacent iff adjacent in every coordinate.
pub fn direct_product_graph(graphs: &[&SimpleGraph], limits: &Limits) -> Result<SimpleGraph> {
    if graphs.is_empty() {
        return Err(Error::Empty);
    }
    let radices: Vec<usize> = graphs.iter().map(|g| g.vertex_count()).collect();
    let total = product_size(&radices, limits)?;
    let mut out = SimpleGraph::empty(total);
    for v in 0..total {
        let coords = decode(v, &radices);
        let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
        for (g, &x) in graphs.iter().zip(&coords) {
            partial = partial
                .iter()
                .flat_map(|prefix| {
                    g.neighbors(x).map(move |y| {
                        let mut next = prefix.clone();
                        next.push(y);
                        next
                    })
                })
                .collect();
        }
        for w in partial {
            out.add_edge(v, encode(&w, &radices));
        }
    }
    Ok(out)
}

/// Compares `Cay(∏G_i; ∏C_i)` with `∏ Cay(G_i; C_i)` under the shared tuple encoding.
pub fn cayley_of_product_equals_product(factors: &[(&FiniteGroup, &[Elem])], limits: &Limits) -> Result<bool> {
    if factors.is_empty() {
        return Err(Error::Empty);
    }
    let radices: Vec<usize> = factors.iter().map(|(g, _)| g.order()).collect();
    product_size(&radices, limits)?;
    let group = product_group(&factors.iter().map(|(g, _)| *g).collect::<Vec<_>>());
    let mut set: Vec<Vec<usize>> = vec![Vec::new()];
    for (_, c) in factors {
        set = set
            .iter()
            .flat_map(|prefix| {
                c.iter().map(move |&x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    let set: Vec<Elem> = set.iter().map(|t| encode(t, &radices)).collect();
    let left = cayley_simple_graph(&group, &set);
    let graphs: Vec<SimpleGraph> = factors.iter().map(|(g, c)| cayley_simple_graph(g, c)).collect();
    let right = direct_product_graph(&graphs.iter().collect::<Vec<_>>(), limits)?;
    Ok(left == right)
}

fn product_group(groups: &[&FiniteGroup]) -> FiniteGroup {
    let mut iter = groups.iter();
    let first = (*iter.next().expect("at least one factor")).clone();
    iter.fold(first, |acc, g| direct_product(&acc, g))
}

/// A preimage edge in the subgraph for one edge of a factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeWitness {
    pub factor_edge: (usize, usize),
    pub preimage: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SubdirectFailure {
    VertexOutOfRange { vertex: usize },
    NotAProductEdge { u: usize, v: usize },
    VertexNotCovered { factor: usize, vertex: usize },
    EdgeNotCovered { factor: usize, u: usize, v: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubdirectReport {
    pub full: bool,
    pub failure: Option<SubdirectFailure>,
    /// Per factor, one preimage edge for every factor edge; empty on failure.
    pub witnesses: Vec<Vec<EdgeWitness>>,
}

impl SubdirectReport {
    fn failed(failure: SubdirectFailure) -> Self {
        SubdirectReport {
            full: false,
            failure: Some(failure),
            witnesses: Vec::new(),
        }
    }
}

/// Whether the subgraph `(vertices, edges)` of `∏ factors` is a full subdirect
/// product: each projection is onto on vertices and on edges.
pub fn is_full_subdirect(vertices: &[usize], edges: &[(usize, usize)], factors: &[&SimpleGraph]) -> SubdirectReport {
    let radices: Vec<usize> = factors.iter().map(|g| g.vertex_count()).collect();
    let total: usize = radices.iter().product();
    if let Some(&v) = vertices
        .iter()
        .chain(edges.iter().flat_map(|(u, v)| [u, v]))
        .find(|&&v| v >= total)
    {
        return SubdirectReport::failed(SubdirectFailure::VertexOutOfRange { vertex: v });
    }
    for &(u, v) in edges {
        let (cu, cv) = (decode(u, &radices), decode(v, &radices));
        if !factors.iter().enumerate().all(|(i, g)| g.has_edge(cu[i], cv[i])) {
            return SubdirectReport::failed(SubdirectFailure::NotAProductEdge { u, v });
        }
    }
    let mut witnesses = Vec::with_capacity(factors.len());
    for (i, g) in factors.iter().enumerate() {
        let mut covered = vec![false; g.vertex_count()];
        for &v in vertices {
            covered[decode(v, &radices)[i]] = true;
        }
        if let Some(x) = covered.iter().position(|&b| !b) {
            return SubdirectReport::failed(SubdirectFailure::VertexNotCovered { factor: i, vertex: x });
        }
        let mut first: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for &(u, v) in edges {
            let (x, y) = (decode(u, &radices)[i], decode(v, &radices)[i]);
            first.entry((x.min(y), x.max(y))).or_insert((u, v));
        }
        let mut list = Vec::new();
        for (x, y) in g.edges() {
            match first.get(&(x, y)) {
                Some(&preimage) => list.push(EdgeWitness {
                    factor_edge: (x, y),
                    preimage,
                }),
                None => {
                    return SubdirectReport::failed(SubdirectFailure::EdgeNotCovered { factor: i, u: x, v: y })
                }
            }
        }
        witnesses.push(list);
    }
    SubdirectReport {
        full: true,
        failure: None,
        witnesses,
    }
}

/// Iterated degree refinement run on both graphs with a shared palette.
fn refine_colors(a: &SimpleGraph, b: &SimpleGraph) -> (Vec<usize>, Vec<usize>) {
    let mut ca: Vec<usize> = (0..a.vertex_count()).map(|v| a.degree(v)).collect();
    let mut cb: Vec<usize> = (0..b.vertex_count()).map(|v| b.degree(v)).collect();
    let mut classes = usize::MAX;
    loop {
        let signature = |g: &SimpleGraph, colors: &[usize], v: usize| {
            let mut around: Vec<usize> = g.neighbors(v).map(|w| colors[w]).collect();
            around.sort_unstable();
            (colors[v], around)
        };
        let sa: Vec<_> = (0..a.vertex_count()).map(|v| signature(a, &ca, v)).collect();
        let sb: Vec<_> = (0..b.vertex_count()).map(|v| signature(b, &cb, v)).collect();
        let palette: BTreeMap<_, usize> = sa
            .iter()
            .chain(&sb)
            .cloned()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        ca = sa.iter().map(|s| palette[s]).collect();
        cb = sb.iter().map(|s| palette[s]).collect();
        if palette.len() == classes {
            return (ca, cb);
        }
        classes = palette.len();
    }
}

/// Finds an isomorphism `a → b` as a vertex table, or proves there is none.
pub fn graph_isomorphic(a: &SimpleGraph, b: &SimpleGraph, limits: &Limits) -> Result<Option<Vec<usize>>> {
    for g in [a, b] {
        if g.vertex_count() > limits.graph_cap {
            return Err(Error::GraphTooLarge {
                vertices: g.vertex_count(),
                cap: limits.graph_cap,
            });
        }
    }
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let (ca, cb) = refine_colors(a, b);
    let histogram = |colors: &[usize]| {
        let mut sorted = colors.to_vec();
        sorted.sort_unstable();
        sorted
    };
    if histogram(&ca) != histogram(&cb) {
        return Ok(None);
    }

    // BFS order so that every vertex after the first of its component has an
    // already placed neighbor.
    let mut order = Vec::with_capacity(n);
    let mut anchor: Vec<Option<usize>> = vec![None; n];
    let mut placed = vec![false; n];
    for start in 0..n {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        order.push(start);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in a.neighbors(v) {
                if !placed[w] {
                    placed[w] = true;
                    anchor[w] = Some(v);
                    order.push(w);
                }
            }
        }
    }

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let candidates = |depth: usize, image: &[usize], used: &[bool]| -> Vec<usize> {
        let v = order[depth];
        let pool: Vec<usize> = match anchor[v] {
            Some(u) => b.neighbors(image[u]).collect(),
            None => (0..n).collect(),
        };
        pool.into_iter()
            .filter(|&w| !used[w] && cb[w] == ca[v])
            .filter(|&w| {
                order[..depth]
                    .iter()
                    .all(|&u| a.has_edge(u, v) == b.has_edge(image[u], w))
            })
            .collect()
    };
    let mut stack: Vec<(Vec<usize>, usize)> = Vec::with_capacity(n);
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    stack.push((candidates(0, &image, &used), 0));
    while !stack.is_empty() {
        let depth = stack.len() - 1;
        let v = order[depth];
        if image[v] != usize::MAX {
            used[image[v]] = false;
            image[v] = usize::MAX;
        }
        let (options, next) = stack.last_mut().expect("stack is nonempty");
        if *next == options.len() {
            stack.pop();
            continue;
        }
        let w = options[*next];
        *next += 1;
        image[v] = w;
        used[w] = true;
        if depth + 1 == n {
            return Ok(Some(image));
        }
        let more = candidates(depth + 1, &image, &used);
        stack.push((more, 0));
    }
    Ok(None)
}

pub fn is_normal_edge_transitive(gamma: &CayleyGraph) -> Result<bool> {
    if !frattini::is_generating(gamma.connection()) {
        return Err(Error::NotConnected);
    }
    frattini::is_transitive_set(gamma.connection())
}

/// One factor `Γ_i = Cay(G/N_i; CN_i/N_i)` of a decomposition.
#[derive(Debug, Clone)]
pub struct DecompositionFactor {
    pub kernel: Subgroup,
    pub quotient: NormalQuotient,
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub phi: Subgroup,
    /// `Cay(G/Φ; CΦ/Φ)`.
    pub phi_quotient: NormalQuotient,
    pub factors: Vec<DecompositionFactor>,
    pub product: SimpleGraph,
    /// `ζ: gΦ ↦ (gN_1, …, gN_k)` from vertices of the Φ-quotient to product vertices.
    pub zeta: VertexMap,
    pub subdirect: SubdirectReport,
    /// Every valid choice of `{N_i}`, when requested.
    pub all_factorizations: Option<Vec<Vec<Subgroup>>>,
}

pub const SELECTION_RULE: &str = "fewest factors, then lexicographically smallest list of kernels (ordered by size, then elements)";

impl DecompositionReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "phi": self.phi.elements(),
            "phi_quotient_graph6": self.phi_quotient.graph.graph().to_graph6(),
            "k": self.factors.len(),
            "factors": self.factors.iter().map(|f| json!({
                "kernel": f.kernel.elements(),
                "quotient_order": f.quotient.map.quotient().order(),
                "connection": f.quotient.graph.connection().elements(),
                "graph6": f.quotient.graph.graph().to_graph6(),
            })).collect::<Vec<_>>(),
            "zeta": self.zeta.map,
            "full_subdirect": self.subdirect.full,
            "selection": SELECTION_RULE,
            "all_factorizations": self.all_factorizations.as_ref().map(|all| {
                all.iter().map(|s| s.iter().map(|n| n.elements().to_vec()).collect::<Vec<_>>()).collect::<Vec<_>>()
            }),
        })
    }
}

fn theorem_violation(context: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::OrderCapExceeded { .. } | Error::AutTooLarge { .. } | Error::ProductTooLarge { .. } => e,
        other => Error::InconsistencyDetected(format!("{context}: {other}")),
    }
}

/// Subsets of `maximal` (as index lists, in size-then-lexicographic order)
/// whose intersection is `phi` and whose indices multiply to `|G:Φ|`.
fn factorizations(g: &FiniteGroup, maximal: &[Subgroup], phi: &Subgroup, first_only: bool) -> Vec<Vec<usize>> {
    let target = g.order() / phi.order();
    let mut found = Vec::new();
    for size in 1..=maximal.len() {
        let mut chosen = Vec::with_capacity(size);
        search_subsets(g, maximal, phi, target, size, 0, 1, &mut chosen, &mut found, first_only);
        if first_only && !found.is_empty() {
            break;
        }
    }
    found
}

#[allow(clippy::too_many_arguments)]
fn search_subsets(
    g: &FiniteGroup,
    maximal: &[Subgroup],
    phi: &Subgroup,
    target: usize,
    size: usize,
    start: usize,
    index_product: usize,
    chosen: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
    first_only: bool,
) {
    if first_only && !found.is_empty() {
        return;
    }
    if chosen.len() == size {
        let meet = chosen
            .iter()
            .fold(Subgroup::whole(g), |acc, &i| acc.intersection(&maximal[i]));
        if index_product == target && &meet == phi {
            found.push(chosen.clone());
        }
        return;
    }
    for i in start..maximal.len() {
        let next = index_product * (g.order() / maximal[i].order());
        if target % next != 0 {
            continue;
        }
        chosen.push(i);
        search_subsets(g, maximal, phi, target, size, i + 1, next, chosen, found, first_only);
        chosen.pop();
    }
}

/// Decomposes a connected normal edge-transitive Cayley graph: its Φ-quotient
/// embeds as a full subdirect product of the quotients by the chosen `N_i`.
pub fn decompose(gamma: &CayleyGraph, limits: &Limits) -> Result<DecompositionReport> {
    decompose_with(gamma, limits, false)
}

pub fn decompose_with(gamma: &CayleyGraph, limits: &Limits, all_factorizations: bool) -> Result<DecompositionReport> {
    if !is_normal_edge_transitive(gamma)? {
        return Err(Error::NotNormalEdgeTransitive);
    }
    let g = gamma.group();
    let c = gamma.connection();
    if all_factorizations && g.order() > limits.all_factorizations_cap {
        return Err(Error::CapExceeded {
            value: g.order(),
            cap: limits.all_factorizations_cap,
        });
    }
    let lattice = frattini::invariant_normal_lattice(c, limits)?;
    let phi = lattice.phi.clone();
    let phi_quotient = quotient_cayley(gamma, &phi, limits).map_err(theorem_violation("quotient by Φ(G;C)"))?;

    let choice = factorizations(g, &lattice.maximal, &phi, true)
        .into_iter()
        .next()
        .ok_or_else(|| Error::InconsistencyDetected("no subset of A_max(G;C) factors G/Φ(G;C)".into()))?;
    let all = all_factorizations.then(|| {
        factorizations(g, &lattice.maximal, &phi, false)
            .into_iter()
            .map(|s| s.into_iter().map(|i| lattice.maximal[i].clone()).collect())
            .collect()
    });

    let mut factors = Vec::with_capacity(choice.len());
    for &i in &choice {
        let kernel = lattice.maximal[i].clone();
        let quotient = quotient_cayley(gamma, &kernel, limits).map_err(theorem_violation("factor quotient"))?;
        let q = quotient.graph.connection();
        if !is_characteristically_simple(q.group(), limits)? {
            return Err(Error::InconsistencyDetected(format!(
                "quotient by kernel of order {} is not characteristically simple",
                kernel.order()
            )));
        }
        let inner = frattini::invariant_normal_lattice(q, limits)?;
        if inner.all != [Subgroup::trivial()] {
            return Err(Error::InconsistencyDetected(format!(
                "quotient by kernel of order {} has a nontrivial invariant normal subgroup",
                kernel.order()
            )));
        }
        factors.push(DecompositionFactor { kernel, quotient });
    }

    // ζ on coset representatives, checked for well-definedness, bijectivity
    // and multiplicativity against the product of the quotient groups.
    let radices: Vec<usize> = factors.iter().map(|f| f.quotient.map.quotient().order()).collect();
    let quotient_groups: Vec<&FiniteGroup> = factors.iter().map(|f| f.quotient.map.quotient()).collect();
    let product = product_group(&quotient_groups);
    let phi_map = &phi_quotient.map;
    let mut zeta = vec![usize::MAX; phi_map.quotient().order()];
    for x in g.elements() {
        let coords: Vec<usize> = factors.iter().map(|f| f.quotient.map.project(x)).collect();
        let image = encode(&coords, &radices);
        let slot = &mut zeta[phi_map.project(x)];
        if *slot != usize::MAX && *slot != image {
            return Err(Error::InconsistencyDetected("ζ is not constant on cosets of Φ(G;C)".into()));
        }
        *slot = image;
    }
    let zeta = VertexMap { map: zeta };
    if product.order() != zeta.map.len() || !zeta.is_injective() {
        return Err(Error::InconsistencyDetected("ζ is not a bijection".into()));
    }
    let qphi = phi_map.quotient();
    for x in qphi.elements() {
        for y in qphi.elements() {
            if zeta.map[qphi.mul(x, y)] != product.mul(zeta.map[x], zeta.map[y]) {
                return Err(Error::InconsistencyDetected("ζ is not a homomorphism".into()));
            }
        }
    }

    let factor_graphs: Vec<&SimpleGraph> = factors.iter().map(|f| f.quotient.graph.graph()).collect();
    let product_graph = direct_product_graph(&factor_graphs, limits)?;
    let image_edges: Vec<(usize, usize)> = phi_quotient
        .graph
        .graph()
        .edges()
        .iter()
        .map(|&(u, v)| (zeta.map[u], zeta.map[v]))
        .collect();
    let subdirect = is_full_subdirect(&zeta.map, &image_edges, &factor_graphs);
    if !subdirect.full {
        return Err(Error::InconsistencyDetected(format!(
            "ζ-image is not a full subdirect product: {:?}",
            subdirect.failure
        )));
    }

    Ok(DecompositionReport {
        phi,
        phi_quotient,
        factors,
        product: product_graph,
        zeta,
        subdirect,
        all_factorizations: all,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frattini::make_connection_set;

    fn lim() -> Limits {
        Limits::default()
    }

    fn cay(g: FiniteGroup, set: &[Elem]) -> CayleyGraph {
        build_cayley_graph(&Arc::new(g), set, &lim()).unwrap()
    }

    fn iso(a: &SimpleGraph, b: &SimpleGraph) -> bool {
        graph_isomorphic(a, b, &lim()).unwrap().is_some()
    }

    #[test]
    fn basic_cayley_graphs() {
        let c6 = cay(FiniteGroup::cyclic(6), &[1, 5]);
        assert_eq!(c6.graph(), &cycle_graph(6));
        for n in 3..8 {
            let all = cay(FiniteGroup::dihedral(n), &(n..2 * n).collect::<Vec<_>>());
            assert!(iso(all.graph(), &complete_bipartite(n, n)));
            let d = cay(FiniteGroup::dihedral(n), &[n + 1, n + 2]);
            assert!(iso(d.graph(), &cycle_graph(2 * n)));
            assert_eq!(d.graph().regular_degree(), Some(2));
        }
        let disconnected = cay(FiniteGroup::cyclic(6), &[2, 4]);
        assert!(!disconnected.graph().is_connected());
        assert_eq!(is_normal_edge_transitive(&disconnected).unwrap_err(), Error::NotConnected);
    }

    #[test]
    fn quotients() {
        let d12 = cay(FiniteGroup::dihedral(6), &[6, 7]);
        let g = d12.group().clone();
        let even = Subgroup::new(&g, vec![0, 2, 4]).unwrap();
        let q = quotient_cayley(&d12, &even, &lim()).unwrap();
        assert_eq!(q.map.quotient().order(), 4);
        assert!(iso(q.graph.graph(), &cycle_graph(4)));
        let t = quotient_cayley(&d12, &Subgroup::trivial(), &lim()).unwrap();
        assert_eq!(t.graph.graph(), d12.graph());
        let reflection = Subgroup::new(&g, vec![0, 6]).unwrap();
        assert_eq!(quotient_cayley(&d12, &reflection, &lim()).unwrap_err(), Error::NotInLattice);

        let d10 = cay(FiniteGroup::dihedral(5), &(5..10).collect::<Vec<_>>());
        let rot = Subgroup::new(d10.group(), (0..5).collect()).unwrap();
        let c1 = cay(FiniteGroup::dihedral(6), &[1, 5, 6]);
        let rot6 = Subgroup::new(c1.group(), (0..6).collect()).unwrap();
        assert_eq!(quotient_cayley(&c1, &rot6, &lim()).unwrap_err(), Error::ConnectionMeetsKernel);
        let lenient = quotient_cayley_dropping_loops(&c1, &rot6, &lim()).unwrap();
        assert_eq!(lenient.dropped, vec![1, 5]);
        assert_eq!(lenient.graph.graph(), &complete_graph(2));
        assert_eq!(quotient_cayley(&d10, &rot, &lim()).unwrap().graph.graph(), &complete_graph(2));
    }

    #[test]
    fn products() {
        let k2 = complete_graph(2);
        let c3 = cycle_graph(3);
        let kk = direct_product_graph(&[&k2, &k2], &lim()).unwrap();
        assert_eq!(kk.edges(), vec![(0, 3), (1, 2)]);
        assert!(iso(&direct_product_graph(&[&k2, &c3], &lim()).unwrap(), &cycle_graph(6)));
        assert_eq!(direct_product_graph(&[&c3], &lim()).unwrap(), c3);
        let big = complete_graph(65);
        assert!(matches!(
            direct_product_graph(&[&big, &big], &lim()),
            Err(Error::ProductTooLarge { .. })
        ));

        let z2 = FiniteGroup::cyclic(2);
        let z3 = FiniteGroup::cyclic(3);
        let d6 = FiniteGroup::dihedral(3);
        for factors in [
            vec![(&z2, &[1][..]), (&z2, &[1][..])],
            vec![(&z2, &[1][..]), (&z3, &[1, 2][..])],
            vec![(&d6, &[3, 4][..]), (&z2, &[1][..])],
        ] {
            assert!(cayley_of_product_equals_product(&factors, &lim()).unwrap());
        }
    }

    #[test]
    fn subdirect_checks() {
        let k2 = complete_graph(2);
        let c3 = cycle_graph(3);
        let whole = direct_product_graph(&[&k2, &k2], &lim()).unwrap();
        let verts: Vec<usize> = (0..4).collect();
        assert!(is_full_subdirect(&verts, &whole.edges(), &[&k2, &k2]).full);
        let c6 = direct_product_graph(&[&k2, &c3], &lim()).unwrap();
        let r = is_full_subdirect(&(0..6).collect::<Vec<_>>(), &c6.edges(), &[&k2, &c3]);
        assert!(r.full);
        assert_eq!(r.witnesses[1].len(), 3);
        let single = is_full_subdirect(&[0], &[], &[&k2, &k2]);
        assert_eq!(single.failure, Some(SubdirectFailure::VertexNotCovered { factor: 0, vertex: 1 }));
        let bad = is_full_subdirect(&verts, &[(0, 1)], &[&k2, &k2]);
        assert_eq!(bad.failure, Some(SubdirectFailure::NotAProductEdge { u: 0, v: 1 }));
    }

    fn brute_isomorphic(a: &SimpleGraph, b: &SimpleGraph) -> bool {
        fn permute(k: usize, p: &mut Vec<usize>, a: &SimpleGraph, b: &SimpleGraph) -> bool {
            if k == p.len() {
                return a.edges().iter().all(|&(u, v)| b.has_edge(p[u], p[v])) && a.edge_count() == b.edge_count();
            }
            for i in k..p.len() {
                p.swap(k, i);
                if permute(k + 1, p, a, b) {
                    return true;
                }
                p.swap(k, i);
            }
            false
        }
        a.vertex_count() == b.vertex_count() && permute(0, &mut (0..a.vertex_count()).collect(), a, b)
    }

    #[test]
    fn isomorphism_examples_and_oracle() {
        let c6 = cycle_graph(6);
        assert_eq!(graph_isomorphic(&c6, &c6, &lim()).unwrap().unwrap(), (0..6).collect::<Vec<_>>());
        let two_triangles = disjoint_union(&cycle_graph(3), &cycle_graph(3));
        assert!(!iso(&c6, &two_triangles));
        assert!(iso(&hypercube(3).complement(), &hypercube(3).complement()));

        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let n = rng.gen_range(1..=7);
            let random = |rng: &mut rand_chacha::ChaCha8Rng| {
                let p = rng.gen_range(0.2..0.8);
                let edges: Vec<(usize, usize)> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .filter(|_| rng.gen_bool(p))
                    .collect();
                SimpleGraph::from_edges(n, &edges).unwrap()
            };
            let a = random(&mut rng);
            let b = random(&mut rng);
            let found = graph_isomorphic(&a, &b, &lim()).unwrap();
            assert_eq!(found.is_some(), brute_isomorphic(&a, &b));
            assert_eq!(found.is_some(), graph_isomorphic(&b, &a, &lim()).unwrap().is_some());
            if let Some(map) = found {
                assert!(VertexMap { map }.is_homomorphism(&a, &b));
            }
        }
        let tiny = Limits { graph_cap: 4, ..lim() };
        assert!(matches!(graph_isomorphic(&c6, &c6, &tiny), Err(Error::GraphTooLarge { .. })));
    }

    #[test]
    fn graph6_round_trip() {
        assert_eq!(complete_graph(4).to_graph6(), "C~");
        assert_eq!(cycle_graph(5).to_graph6(), "Dhc");
        for g in [hypercube(3), complete_bipartite(40, 30), cycle_graph(63), SimpleGraph::empty(1)] {
            assert_eq!(SimpleGraph::from_graph6(&g.to_graph6()).unwrap(), g);
        }
        assert!(cycle_graph(63).to_graph6().starts_with('~'));
        assert!(SimpleGraph::from_graph6("C").is_err());
        assert_eq!(complete_graph(3).to_edge_list(), "0 1\n0 2\n1 2\n");
    }

    #[test]
    fn decompositions() {
        let c6 = cay(FiniteGroup::cyclic(6), &[1, 5]);
        let r = decompose(&c6, &lim()).unwrap();
        assert!(r.phi.is_trivial());
        assert_eq!(r.factors.len(), 2);
        let orders: Vec<usize> = r.factors.iter().map(|f| f.quotient.map.quotient().order()).collect();
        assert_eq!(orders, vec![3, 2]);
        assert_eq!(r.factors[0].quotient.graph.graph(), &cycle_graph(3));
        assert_eq!(r.factors[1].quotient.graph.graph(), &complete_graph(2));
        assert_eq!(r.subdirect.witnesses.len(), 2);
        assert_eq!(r.product.edge_count(), 6);
        assert_eq!(decompose(&c6, &lim()).unwrap().zeta, r.zeta);

        let d10 = cay(FiniteGroup::dihedral(5), &[5, 6]);
        let r = decompose(&d10, &lim()).unwrap();
        assert_eq!(r.phi.elements(), &[0, 1, 2, 3, 4]);
        assert_eq!(r.factors.len(), 1);
        assert_eq!(r.factors[0].quotient.graph.graph(), &complete_graph(2));

        let a5 = Arc::new(crate::fixtures::alternating_group(5));
        let threes: Vec<Elem> = a5.elements().filter(|&x| a5.element_order(x) == 3).collect();
        let r = decompose(&cayley_graph(&make_connection_set(&a5, &threes, &lim()).unwrap()), &lim()).unwrap();
        assert_eq!(r.factors.len(), 1);
        assert!(r.factors[0].kernel.is_trivial());

        let c1 = cay(FiniteGroup::dihedral(6), &[1, 5, 6]);
        assert_eq!(decompose(&c1, &lim()).unwrap_err(), Error::NotNormalEdgeTransitive);

        let all = decompose_with(&c6, &lim(), true).unwrap().all_factorizations.unwrap();
        assert_eq!(all.len(), 1);
    }
}
