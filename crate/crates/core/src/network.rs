//! Undirected social graphs: SNAP-style edge-list ingestion, synthetic
//! generators, structural statistics and originator seeding.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::rng;

pub type NodeId = usize;

/// Simple undirected graph over dense node IDs `0..n`.
///
/// Node IDs are assigned in first-seen order of the edge sequence, and the
/// edge sequence is kept in insertion order, so writing the edges out and
/// parsing them again reproduces the same IDs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<(NodeId, NodeId)>,
    adjacency: Vec<Vec<NodeId>>,
    source_ids: Vec<u64>,
}

impl Graph {
    /// Builds a graph from labelled endpoint pairs, dropping self-loops and
    /// repeated edges (in either orientation).
    pub fn from_labelled_edges<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut ids: HashMap<u64, NodeId> = HashMap::new();
        let mut source_ids = Vec::new();
        let mut seen: HashSet<(NodeId, NodeId)> = HashSet::new();
        let mut edges = Vec::new();
        let mut intern = |label: u64, source_ids: &mut Vec<u64>| -> NodeId {
            *ids.entry(label).or_insert_with(|| {
                source_ids.push(label);
                source_ids.len() - 1
            })
        };
        for (x, y) in pairs {
            if x == y {
                continue;
            }
            let u = intern(x, &mut source_ids);
            let v = intern(y, &mut source_ids);
            if seen.insert((u.min(v), u.max(v))) {
                edges.push((u, v));
            }
        }
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); source_ids.len()];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            edges,
            adjacency,
            source_ids,
        })
    }

    pub fn from_edges<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Graph::from_labelled_edges(pairs.into_iter().map(|(u, v)| (u as u64, v as u64)))
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Original label of a dense node ID.
    pub fn source_id(&self, node: NodeId) -> u64 {
        self.source_ids[node]
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    /// Writes dense IDs, one edge per line, in stored order.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Parses `<u> <v>` lines; blank lines and `#` comments are skipped.
pub fn parse_edge_list<R: BufRead>(source: R) -> Result<Graph> {
    let mut pairs = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut node = |what: &str| -> Result<u64> {
            let tok = fields
                .next()
                .ok_or_else(|| Error::parse(line_no, format!("missing {what} node id")))?;
            tok.parse::<u64>()
                .map_err(|_| Error::parse(line_no, format!("`{tok}` is not a node id")))
        };
        let u = node("first")?;
        let v = node("second")?;
        if fields.next().is_some() {
            return Err(Error::parse(line_no, "expected exactly two node ids"));
        }
        pairs.push((u, v));
    }
    Graph::from_labelled_edges(pairs)
}

/// Structural summary of a graph; serialized as a flat JSON object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub edge_count: usize,
    pub avg_degree: f64,
    pub avg_clustering: f64,
    pub connected: bool,
}

/// Local clustering coefficient per node; 0 for nodes of degree below 2.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut mark = vec![false; n];
    let mut out = vec![0.0; n];
    for (u, coeff) in out.iter_mut().enumerate() {
        let nbrs = g.neighbors(u);
        let k = nbrs.len();
        if k < 2 {
            continue;
        }
        for &v in nbrs {
            mark[v] = true;
        }
        // Each neighbor-neighbor link is seen from both ends.
        let twice_links: usize = nbrs
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&w| mark[w]).count())
            .sum();
        for &v in nbrs {
            mark[v] = false;
        }
        *coeff = twice_links as f64 / (k * (k - 1)) as f64;
    }
    out
}

pub fn compute_stats(g: &Graph) -> GraphStats {
    let n = g.node_count();
    GraphStats {
        n,
        edge_count: g.edge_count(),
        avg_degree: 2.0 * g.edge_count() as f64 / n as f64,
        avg_clustering: local_clustering(g).iter().sum::<f64>() / n as f64,
        connected: g.is_connected(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "model")]
pub enum SyntheticModel {
    /// Watts–Strogatz: ring lattice with `k` neighbors, each lattice edge
    /// rewired with probability `p`.
    SmallWorld { k: usize, p: f64 },
    /// Barabási–Albert: each new node attaches to `m` existing nodes
    /// chosen proportionally to degree.
    PreferentialAttachment { m: usize },
}

const MAX_REWIRE_ATTEMPTS: usize = 100;

/// Generates a connected synthetic graph on `n` nodes.
pub fn generate_synthetic<R: Rng + ?Sized>(
    model: SyntheticModel,
    n: usize,
    rng: &mut R,
) -> Result<Graph> {
    if n < 3 {
        return Err(Error::GraphParams(format!("need at least 3 nodes, got {n}")));
    }
    match model {
        SyntheticModel::PreferentialAttachment { m } => {
            if m == 0 || m >= n {
                return Err(Error::GraphParams(format!(
                    "attachment degree m must be in 1..{n}, got {m}"
                )));
            }
            Graph::from_edges(barabasi_albert(n, m, rng))
        }
        SyntheticModel::SmallWorld { k, p } => {
            if k < 2 || k % 2 != 0 || k >= n {
                return Err(Error::GraphParams(format!(
                    "lattice degree k must be even and in 2..{n}, got {k}"
                )));
            }
            check_range("rewiring probability", p, 0.0, 1.0)
                .map_err(|e| Error::GraphParams(e.to_string()))?;
            for _ in 0..MAX_REWIRE_ATTEMPTS {
                let g = Graph::from_edges(watts_strogatz(n, k, p, rng))?;
                if g.node_count() == n && g.is_connected() {
                    return Ok(g);
                }
            }
            Err(Error::GraphParams(format!(
                "no connected small-world graph after {MAX_REWIRE_ATTEMPTS} attempts (n={n}, k={k}, p={p})"
            )))
        }
    }
}

fn barabasi_albert<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::with_capacity(m * (m + 1) / 2 + (n - m - 1) * m);
    // One entry per edge endpoint: sampling from it is degree-proportional.
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..=m {
        for v in (u + 1)..=m {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for new in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((new, t));
            endpoints.extend([new, t]);
        }
    }
    edges
}

fn watts_strogatz<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    p: f64,
    rng: &mut R,
) -> Vec<(NodeId, NodeId)> {
    let mut present: HashSet<(NodeId, NodeId)> = HashSet::new();
    let key = |u: NodeId, v: NodeId| (u.min(v), u.max(v));
    let mut edges = Vec::with_capacity(n * k / 2);
    let mut degree = vec![k; n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            present.insert(key(u, v));
            edges.push((u, v));
        }
    }
    if p > 0.0 {
        for e in edges.iter_mut() {
            if rng.random::<f64>() >= p {
                continue;
            }
            let (u, v) = *e;
            // Saturated nodes keep their edge.
            if degree[u] >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !present.contains(&key(u, w)) {
                    break w;
                }
            };
            present.remove(&key(u, v));
            present.insert(key(u, w));
            degree[v] -= 1;
            degree[w] += 1;
            *e = (u, w);
        }
    }
    edges
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedStrategy {
    UniformRandom,
    HighestDegree,
}

impl FromStr for SeedStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-random" | "uniform" | "random" => Ok(SeedStrategy::UniformRandom),
            "highest-degree" | "degree" => Ok(SeedStrategy::HighestDegree),
            other => Err(Error::Config(format!(
                "unknown seeding strategy `{other}` (valid: uniform-random, highest-degree)"
            ))),
        }
    }
}

impl fmt::Display for SeedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeedStrategy::UniformRandom => "uniform-random",
            SeedStrategy::HighestDegree => "highest-degree",
        })
    }
}

/// `max(1, round(fraction · n))`, capped at `n`.
pub fn originator_count(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).round() as usize).clamp(1, n)
}

/// Picks `count` distinct originators, returned in ascending order.
pub fn seed_originators<R: Rng + ?Sized>(
    g: &Graph,
    count: usize,
    strategy: SeedStrategy,
    rng: &mut R,
) -> Vec<NodeId> {
    let n = g.node_count();
    let count = count.min(n);
    let mut chosen = match strategy {
        SeedStrategy::UniformRandom => index::sample(rng, n, count).into_vec(),
        SeedStrategy::HighestDegree => {
            let mut order: Vec<NodeId> = (0..n).collect();
            order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
            order.truncate(count);
            order
        }
    };
    chosen.sort_unstable();
    chosen
}

/// Where a graph comes from: an edge-list file or a seeded generator.
///
/// Textual form: a file path, or `synthetic:<model>,<key>=<value>,...` with
/// models `ba` / `preferential-attachment` (keys `n`, `m`, `seed`) and
/// `ws` / `small-world` (keys `n`, `k`, `p`, `seed`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GraphSource {
    File {
        path: PathBuf,
    },
    Synthetic {
        #[serde(flatten)]
        model: SyntheticModel,
        n: usize,
        seed: u64,
    },
}

impl GraphSource {
    /// Seeded preferential-attachment graph matching the reference network's
    /// density (average degree near 52).
    pub fn full_scale() -> Self {
        GraphSource::Synthetic {
            model: SyntheticModel::PreferentialAttachment { m: 26 },
            n: 1000,
            seed: 0,
        }
    }

    /// Small graph for fast sweeps.
    pub fn desk_scale() -> Self {
        GraphSource::Synthetic {
            model: SyntheticModel::PreferentialAttachment { m: 4 },
            n: 200,
            seed: 0,
        }
    }

    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::File { path } => {
                let file = std::fs::File::open(path).map_err(|e| {
                    std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))
                })?;
                parse_edge_list(std::io::BufReader::new(file))
            }
            GraphSource::Synthetic { model, n, seed } => {
                let mut r = rng::stream(*seed, 0);
                generate_synthetic(*model, *n, &mut r)
            }
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::File { path } => write!(f, "{}", path.display()),
            GraphSource::Synthetic { model, n, seed } => match model {
                SyntheticModel::PreferentialAttachment { m } => {
                    write!(f, "synthetic:ba,n={n},m={m},seed={seed}")
                }
                SyntheticModel::SmallWorld { k, p } => {
                    write!(f, "synthetic:ws,n={n},k={k},p={p},seed={seed}")
                }
            },
        }
    }
}

impl FromStr for GraphSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let Some(spec) = s.strip_prefix("synthetic:") else {
            return Ok(GraphSource::File { path: s.into() });
        };
        let mut parts = spec.split(',').map(str::trim);
        let model_name = parts.next().unwrap_or_default();
        let mut params: HashMap<&str, &str> = HashMap::new();
        for kv in parts {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::GraphParams(format!("expected key=value, got `{kv}`")))?;
            params.insert(k, v);
        }
        let mut take = |key: &str| params.remove(key);
        fn num<T: FromStr>(key: &str, raw: Option<&str>, default: Option<T>) -> Result<T> {
            match raw {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::GraphParams(format!("bad value `{v}` for `{key}`"))),
                None => default.ok_or_else(|| Error::GraphParams(format!("missing `{key}`"))),
            }
        }
        let n = num("n", take("n"), None)?;
        let seed = num("seed", take("seed"), Some(0))?;
        let model = match model_name {
            "ba" | "preferential-attachment" => SyntheticModel::PreferentialAttachment {
                m: num("m", take("m"), None)?,
            },
            "ws" | "small-world" => SyntheticModel::SmallWorld {
                k: num("k", take("k"), None)?,
                p: num("p", take("p"), None)?,
            },
            other => {
                return Err(Error::GraphParams(format!(
                    "unknown synthetic model `{other}` (valid: ba, ws)"
                )))
            }
        };
        if let Some(extra) = params.keys().next() {
            return Err(Error::GraphParams(format!("unknown key `{extra}`")));
        }
        Ok(GraphSource::Synthetic { model, n, seed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<Graph> {
        parse_edge_list(text.as_bytes())
    }

    #[test]
    fn parses_path_and_dedups() {
        let g = parse("0 1\n1 2\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);

        let g = parse("0 1\n1 0\n0 0\n").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn densifies_sparse_ids_in_first_seen_order() {
        let g = parse("# comment\n107 3\n\n3\t9000\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(
            (g.source_id(0), g.source_id(1), g.source_id(2)),
            (107, 3, 9000)
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(parse("0 1\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("0 1\n2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("0 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse(""), Err(Error::EmptyGraph)));
        assert!(matches!(parse("# only\n4 4\n"), Err(Error::EmptyGraph)));
    }

    #[test]
    fn stats_of_small_graphs() {
        let tri = compute_stats(&parse("0 1\n1 2\n2 0\n").unwrap());
        assert_eq!(tri.avg_clustering, 1.0);
        assert_eq!(tri.avg_degree, 2.0);
        assert!(tri.connected);

        let path = compute_stats(&parse("0 1\n1 2\n").unwrap());
        assert_eq!(path.avg_clustering, 0.0);

        let split = compute_stats(&parse("0 1\n2 3\n").unwrap());
        assert!(!split.connected);

        let json = serde_json::to_string(&tri).unwrap();
        assert_eq!(
            json,
            r#"{"n":3,"edge_count":3,"avg_degree":2.0,"avg_clustering":1.0,"connected":true}"#
        );
    }

    fn brute_clustering(g: &Graph) -> f64 {
        let n = g.node_count();
        let adj = |a: usize, b: usize| g.edges().iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a));
        let mut sum = 0.0;
        for i in 0..n {
            let nb: Vec<usize> = (0..n).filter(|&j| j != i && adj(i, j)).collect();
            let k = nb.len();
            if k < 2 {
                continue;
            }
            let mut tri = 0;
            for x in 0..k {
                for y in (x + 1)..k {
                    if adj(nb[x], nb[y]) {
                        tri += 1;
                    }
                }
            }
            sum += tri as f64 / (k * (k - 1) / 2) as f64;
        }
        sum / n as f64
    }

    #[test]
    fn clustering_matches_brute_force_on_random_graph() {
        let mut r = rng::stream(50, 0);
        let mut pairs = Vec::new();
        for u in 0..50usize {
            for v in (u + 1)..50 {
                if r.random::<f64>() < 0.15 {
                    pairs.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(pairs).unwrap();
        let stats = compute_stats(&g);
        assert!((stats.avg_clustering - brute_clustering(&g)).abs() < 1e-12);
    }

    #[test]
    fn preferential_attachment_is_deterministic() {
        let model = SyntheticModel::PreferentialAttachment { m: 4 };
        let a = generate_synthetic(model, 200, &mut rng::stream(7, 0)).unwrap();
        let b = generate_synthetic(model, 200, &mut rng::stream(7, 0)).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert!(a.is_connected());
        assert_eq!(a.node_count(), 200);
    }

    #[test]
    fn preferential_attachment_density() {
        let model = SyntheticModel::PreferentialAttachment { m: 26 };
        let g = generate_synthetic(model, 1000, &mut rng::stream(0, 0)).unwrap();
        let s = compute_stats(&g);
        assert!((48.0..=52.0).contains(&s.avg_degree), "{}", s.avg_degree);
        assert!(s.connected);
    }

    #[test]
    fn unrewired_small_world_is_a_ring_lattice() {
        let model = SyntheticModel::SmallWorld { k: 6, p: 0.0 };
        let g = generate_synthetic(model, 100, &mut rng::stream(1, 0)).unwrap();
        assert_eq!(g.node_count(), 100);
        assert!((0..100).all(|u| g.degree(u) == 6));
        assert_eq!(g.edge_count(), 300);
    }

    #[test]
    fn rewired_small_world_stays_simple_and_connected() {
        let model = SyntheticModel::SmallWorld { k: 4, p: 0.3 };
        let g = generate_synthetic(model, 120, &mut rng::stream(2, 0)).unwrap();
        assert_eq!(g.node_count(), 120);
        assert_eq!(g.edge_count(), 240);
        assert!(g.is_connected());
    }

    #[test]
    fn generator_rejects_bad_params() {
        let mut r = rng::stream(0, 0);
        let ba = SyntheticModel::PreferentialAttachment { m: 0 };
        assert!(generate_synthetic(ba, 10, &mut r).is_err());
        let ba = SyntheticModel::PreferentialAttachment { m: 2 };
        assert!(generate_synthetic(ba, 2, &mut r).is_err());
        let ws = SyntheticModel::SmallWorld { k: 4, p: 1.5 };
        assert!(generate_synthetic(ws, 10, &mut r).is_err());
        let ws = SyntheticModel::SmallWorld { k: 3, p: 0.1 };
        assert!(generate_synthetic(ws, 10, &mut r).is_err());
    }

    #[test]
    fn originator_counts() {
        assert_eq!(originator_count(1033, 0.01), 10);
        assert_eq!(originator_count(200, 0.01), 2);
        assert_eq!(originator_count(50, 0.001), 1);
        assert_eq!(originator_count(50, 1.0), 50);
    }

    #[test]
    fn seeding_strategies() {
        let star = parse("0 1\n0 2\n0 3\n0 4\n3 4\n").unwrap();
        let mut r = rng::stream(0, 0);
        assert_eq!(seed_originators(&star, 1, SeedStrategy::HighestDegree, &mut r), vec![0]);
        // Ties between 3 and 4 (degree 2) resolve toward the lower ID.
        assert_eq!(seed_originators(&star, 2, SeedStrategy::HighestDegree, &mut r), vec![0, 3]);
        assert_eq!(
            seed_originators(&star, 5, SeedStrategy::UniformRandom, &mut r),
            vec![0, 1, 2, 3, 4]
        );
        let a = seed_originators(&star, 2, SeedStrategy::UniformRandom, &mut rng::stream(4, 0));
        let b = seed_originators(&star, 2, SeedStrategy::UniformRandom, &mut rng::stream(4, 0));
        assert_eq!(a, b);
    }

    #[test]
    fn graph_source_grammar() {
        let s: GraphSource = "synthetic:ba,n=200,m=4".parse().unwrap();
        assert_eq!(s, GraphSource::desk_scale());
        assert_eq!(s.to_string(), "synthetic:ba,n=200,m=4,seed=0");
        let s: GraphSource = "synthetic:small-world,n=30,k=4,p=0.1,seed=3".parse().unwrap();
        assert_eq!(s.to_string().parse::<GraphSource>().unwrap(), s);
        assert_eq!(
            "data/edges.txt".parse::<GraphSource>().unwrap(),
            GraphSource::File { path: "data/edges.txt".into() }
        );
        assert!("synthetic:er,n=10".parse::<GraphSource>().is_err());
        assert!("synthetic:ba,n=10".parse::<GraphSource>().is_err());
        assert!("synthetic:ba,n=10,m=2,q=1".parse::<GraphSource>().is_err());
        assert!(GraphSource::File { path: "/nonexistent/x.txt".into() }.load().is_err());
    }

    proptest! {
        #[test]
        fn edge_list_round_trip(pairs in proptest::collection::vec((0u64..40, 0u64..40), 1..120)) {
            let Ok(g) = Graph::from_labelled_edges(pairs) else { return Ok(()); };
            let mut buf = Vec::new();
            g.write_edge_list(&mut buf).unwrap();
            let h = parse_edge_list(&buf[..]).unwrap();
            prop_assert_eq!(g.edges(), h.edges());
            prop_assert_eq!(g.node_count(), h.node_count());
            for u in 0..g.node_count() {
                prop_assert_eq!(g.neighbors(u), h.neighbors(u));
            }
        }

        #[test]
        fn adjacency_is_symmetric_and_simple(pairs in proptest::collection::vec((0u64..30, 0u64..30), 1..80)) {
            let Ok(g) = Graph::from_labelled_edges(pairs) else { return Ok(()); };
            for u in 0..g.node_count() {
                let nb = g.neighbors(u);
                prop_assert!(!nb.contains(&u));
                prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
                for &v in nb {
                    prop_assert!(g.has_edge(v, u));
                }
            }
            let s = compute_stats(&g);
            prop_assert!((s.avg_degree - 2.0 * s.edge_count as f64 / s.n as f64).abs() < 1e-12);
        }
    }
}
