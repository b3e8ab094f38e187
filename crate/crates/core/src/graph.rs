//! Friendship and voter networks with PageRank, HITS and degree centrality.
//!
//! Nodes are kept sorted by id so every iteration visits them in the same order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{Corpus, Side};
use crate::error::GraphError;
use crate::textfeat::FeatureVector;

pub type Scores = BTreeMap<String, f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeMode {
    Undirected,
    In,
    Out,
}

/// Read access shared by both graph kinds.
pub trait Graph {
    fn nodes(&self) -> &[String];
    /// Outgoing (target, weight) pairs; undirected edges go both ways.
    fn out_edges(&self, i: usize) -> Vec<(usize, f64)>;
    /// Weighted degree; the mode is ignored for undirected graphs.
    fn degree(&self, i: usize, mode: DegreeMode) -> f64;

    fn position(&self, id: &str) -> Option<usize> {
        self.nodes().binary_search_by(|n| n.as_str().cmp(id)).ok()
    }
}

fn sorted_nodes(ids: impl IntoIterator<Item = String>) -> Vec<String> {
    ids.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

fn locate(nodes: &[String], id: &str) -> usize {
    nodes
        .binary_search_by(|n| n.as_str().cmp(id))
        .expect("endpoint registered as node")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct UndirectedGraph {
    nodes: Vec<String>,
    adj: Vec<BTreeSet<usize>>,
}

impl UndirectedGraph {
    /// Endpoints missing from `nodes` are added; self-loops and repeats are dropped.
    pub fn new<'a>(
        nodes: impl IntoIterator<Item = String>,
        edges: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Self {
        let edges: Vec<(&str, &str)> = edges.into_iter().filter(|(a, b)| a != b).collect();
        let nodes = sorted_nodes(
            nodes
                .into_iter()
                .chain(edges.iter().flat_map(|(a, b)| [String::from(*a), String::from(*b)])),
        );
        let mut adj = vec![BTreeSet::new(); nodes.len()];
        for (a, b) in edges {
            let (i, j) = (locate(&nodes, a), locate(&nodes, b));
            adj[i].insert(j);
            adj[j].insert(i);
        }
        UndirectedGraph { nodes, adj }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => self.adj[i].contains(&j),
            _ => false,
        }
    }

    /// Each edge once, as (smaller id, larger id).
    pub fn edges(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        for (i, ns) in self.adj.iter().enumerate() {
            for &j in ns.range(i + 1..) {
                out.push((self.nodes[i].as_str(), self.nodes[j].as_str()));
            }
        }
        out
    }
}

impl Graph for UndirectedGraph {
    fn nodes(&self) -> &[String] {
        &self.nodes
    }

    fn out_edges(&self, i: usize) -> Vec<(usize, f64)> {
        self.adj[i].iter().map(|&j| (j, 1.0)).collect()
    }

    fn degree(&self, i: usize, _mode: DegreeMode) -> f64 {
        self.adj[i].len() as f64
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightedDigraph {
    nodes: Vec<String>,
    out: Vec<BTreeMap<usize, u32>>,
    inc: Vec<BTreeMap<usize, u32>>,
}

impl WeightedDigraph {
    /// Repeated edges accumulate weight; self-loops and zero weights are dropped.
    pub fn new<'a>(
        nodes: impl IntoIterator<Item = String>,
        edges: impl IntoIterator<Item = (&'a str, &'a str, u32)>,
    ) -> Self {
        let edges: Vec<(&str, &str, u32)> = edges
            .into_iter()
            .filter(|(a, b, w)| a != b && *w > 0)
            .collect();
        let nodes = sorted_nodes(
            nodes.into_iter().chain(
                edges
                    .iter()
                    .flat_map(|(a, b, _)| [String::from(*a), String::from(*b)]),
            ),
        );
        let mut out = vec![BTreeMap::new(); nodes.len()];
        let mut inc = vec![BTreeMap::new(); nodes.len()];
        for (a, b, w) in edges {
            let (i, j) = (locate(&nodes, a), locate(&nodes, b));
            *out[i].entry(j).or_insert(0) += w;
            *inc[j].entry(i).or_insert(0) += w;
        }
        WeightedDigraph { nodes, out, inc }
    }

    pub fn weight(&self, from: &str, to: &str) -> u32 {
        match (self.position(from), self.position(to)) {
            (Some(i), Some(j)) => self.out[i].get(&j).copied().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(BTreeMap::len).sum()
    }

    pub fn edges(&self) -> Vec<(&str, &str, u32)> {
        let mut v = Vec::new();
        for (i, m) in self.out.iter().enumerate() {
            for (&j, &w) in m {
                v.push((self.nodes[i].as_str(), self.nodes[j].as_str(), w));
            }
        }
        v
    }

    /// Number of distinct in- or out-neighbours, ignoring weights.
    pub fn raw_degree(&self, i: usize, mode: DegreeMode) -> usize {
        match mode {
            DegreeMode::In => self.inc[i].len(),
            DegreeMode::Out => self.out[i].len(),
            DegreeMode::Undirected => {
                let a: BTreeSet<_> = self.inc[i].keys().chain(self.out[i].keys()).collect();
                a.len()
            }
        }
    }
}

impl Graph for WeightedDigraph {
    fn nodes(&self) -> &[String] {
        &self.nodes
    }

    fn out_edges(&self, i: usize) -> Vec<(usize, f64)> {
        self.out[i].iter().map(|(&j, &w)| (j, f64::from(w))).collect()
    }

    fn degree(&self, i: usize, mode: DegreeMode) -> f64 {
        let sum = |m: &BTreeMap<usize, u32>| m.values().map(|&w| f64::from(w)).sum::<f64>();
        match mode {
            DegreeMode::In => sum(&self.inc[i]),
            DegreeMode::Out => sum(&self.out[i]),
            DegreeMode::Undirected => sum(&self.inc[i]) + sum(&self.out[i]),
        }
    }
}

/// Users are adjacent when either profile lists the other as a friend. Only
/// users with at least one friendship become nodes.
pub fn build_friendship(corpus: &Corpus) -> UndirectedGraph {
    let edges: Vec<(&str, &str)> = corpus
        .users()
        .iter()
        .flat_map(|u| u.friends.iter().map(move |f| (u.user_id.as_str(), f.as_str())))
        .collect();
    UndirectedGraph::new(Vec::new(), edges)
}

/// Edge voter → debater weighted by the number of that debater's debates the
/// voter voted in. Only users touching an edge become nodes.
pub fn build_voter_graph(corpus: &Corpus) -> WeightedDigraph {
    let mut pairs: BTreeMap<(&str, &str), u32> = BTreeMap::new();
    for d in corpus.debates() {
        let voters: BTreeSet<&str> = d.ballots.iter().map(|b| b.voter_id.as_str()).collect();
        for v in voters {
            for side in [Side::Pro, Side::Con] {
                *pairs.entry((v, d.debater(side))).or_insert(0) += 1;
            }
        }
    }
    WeightedDigraph::new(Vec::new(), pairs.into_iter().map(|((a, b), w)| (a, b, w)))
}

/// Degree over n − 1 for every node.
pub fn degree_centrality<G: Graph>(graph: &G, mode: DegreeMode) -> Result<Scores, GraphError> {
    let n = graph.nodes().len();
    if n < 2 {
        return Err(GraphError::TooSmall(n));
    }
    let denom = (n - 1) as f64;
    Ok(graph
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), graph.degree(i, mode) / denom))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterParams {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IterParams {
    fn default() -> Self {
        IterParams {
            tol: 1e-9,
            max_iter: 200,
        }
    }
}

fn to_scores(nodes: &[String], values: Vec<f64>) -> Scores {
    nodes.iter().cloned().zip(values).collect()
}

/// Weighted PageRank by power iteration with uniform teleport and uniform
/// redistribution of dangling mass.
pub fn pagerank<G: Graph>(graph: &G, damping: f64, params: IterParams) -> Result<Scores, GraphError> {
    let n = graph.nodes().len();
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let out: Vec<Vec<(usize, f64)>> = (0..n).map(|i| graph.out_edges(i)).collect();
    let totals: Vec<f64> = out.iter().map(|e| e.iter().map(|x| x.1).sum()).collect();
    let nf = n as f64;
    let mut x = vec![1.0 / nf; n];
    let mut residual = f64::INFINITY;
    for _ in 0..params.max_iter {
        let dangling: f64 = (0..n).filter(|&i| totals[i] == 0.0).map(|i| x[i]).sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        let mut next = vec![base; n];
        for i in 0..n {
            if totals[i] > 0.0 {
                let share = damping * x[i] / totals[i];
                for &(j, w) in &out[i] {
                    next[j] += share * w;
                }
            }
        }
        residual = next.iter().zip(&x).map(|(a, b)| libm::fabs(a - b)).sum();
        x = next;
        if residual < params.tol {
            let s: f64 = x.iter().sum();
            x.iter_mut().for_each(|v| *v /= s);
            return Ok(to_scores(graph.nodes(), x));
        }
    }
    Err(GraphError::NoConvergence {
        algorithm: "pagerank",
        iterations: params.max_iter,
        residual,
    })
}

fn normalize(v: &mut [f64]) {
    let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Weighted HITS from an all-ones start; both vectors have unit L2 norm.
/// A graph without edges gets zero scores.
pub fn hits(graph: &WeightedDigraph, params: IterParams) -> Result<(Scores, Scores), GraphError> {
    let n = graph.nodes.len();
    if n == 0 {
        return Err(GraphError::Empty);
    }
    if graph.edge_count() == 0 {
        return Ok((
            to_scores(&graph.nodes, vec![0.0; n]),
            to_scores(&graph.nodes, vec![0.0; n]),
        ));
    }
    let mut hub = vec![1.0; n];
    normalize(&mut hub);
    let mut auth = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..params.max_iter {
        let mut a = vec![0.0; n];
        for (j, inc) in graph.inc.iter().enumerate() {
            a[j] = inc.iter().map(|(&i, &w)| f64::from(w) * hub[i]).sum();
        }
        normalize(&mut a);
        let mut h = vec![0.0; n];
        for (i, out) in graph.out.iter().enumerate() {
            h[i] = out.iter().map(|(&j, &w)| f64::from(w) * a[j]).sum();
        }
        normalize(&mut h);
        residual = h.iter().zip(&hub).map(|(x, y)| libm::fabs(x - y)).sum::<f64>()
            + a.iter().zip(&auth).map(|(x, y)| libm::fabs(x - y)).sum::<f64>();
        hub = h;
        auth = a;
        if residual < params.tol {
            return Ok((to_scores(&graph.nodes, hub), to_scores(&graph.nodes, auth)));
        }
    }
    Err(GraphError::NoConvergence {
        algorithm: "hits",
        iterations: params.max_iter,
        residual,
    })
}

pub const USER_GRAPH_FEATURES: [&str; 10] = [
    "voter_in_degree",
    "voter_out_degree",
    "voter_in_centrality",
    "voter_out_centrality",
    "voter_pagerank",
    "voter_hub",
    "voter_authority",
    "friend_degree",
    "friend_degree_centrality",
    "friend_pagerank",
];

/// Every per-node score needed by [`user_graph_features`], computed once.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GraphAnalytics {
    voter_in_degree: BTreeMap<String, f64>,
    voter_out_degree: BTreeMap<String, f64>,
    voter_in_centrality: Scores,
    voter_out_centrality: Scores,
    voter_pagerank: Scores,
    hub: Scores,
    authority: Scores,
    friend_degree: BTreeMap<String, f64>,
    friend_centrality: Scores,
    friend_pagerank: Scores,
}

fn centrality_or_zero<G: Graph>(g: &G, mode: DegreeMode) -> Scores {
    degree_centrality(g, mode).unwrap_or_default()
}

impl GraphAnalytics {
    pub fn compute(
        friendship: &UndirectedGraph,
        voter: &WeightedDigraph,
        params: IterParams,
    ) -> Result<Self, GraphError> {
        let raw = |mode| {
            voter
                .nodes
                .iter()
                .enumerate()
                .map(|(i, id)| (id.clone(), voter.raw_degree(i, mode) as f64))
                .collect()
        };
        let mut out = GraphAnalytics {
            voter_in_degree: raw(DegreeMode::In),
            voter_out_degree: raw(DegreeMode::Out),
            voter_in_centrality: centrality_or_zero(voter, DegreeMode::In),
            voter_out_centrality: centrality_or_zero(voter, DegreeMode::Out),
            friend_degree: friendship
                .nodes
                .iter()
                .enumerate()
                .map(|(i, id)| (id.clone(), friendship.adj[i].len() as f64))
                .collect(),
            friend_centrality: centrality_or_zero(friendship, DegreeMode::Undirected),
            ..GraphAnalytics::default()
        };
        if !voter.nodes.is_empty() {
            out.voter_pagerank = pagerank(voter, 0.85, params)?;
            let (h, a) = hits(voter, params)?;
            out.hub = h;
            out.authority = a;
        }
        if !friendship.nodes.is_empty() {
            out.friend_pagerank = pagerank(friendship, 0.85, params)?;
        }
        Ok(out)
    }
}

/// The ten graph scalars for one user; users absent from a graph get zeros.
pub fn user_graph_features(user: &str, analytics: &GraphAnalytics) -> FeatureVector {
    let get = |m: &BTreeMap<String, f64>| m.get(user).copied().unwrap_or(0.0);
    let a = analytics;
    FeatureVector {
        names: USER_GRAPH_FEATURES.iter().map(|s| String::from(*s)).collect(),
        values: vec![
            get(&a.voter_in_degree),
            get(&a.voter_out_degree),
            get(&a.voter_in_centrality),
            get(&a.voter_out_centrality),
            get(&a.voter_pagerank),
            get(&a.hub),
            get(&a.authority),
            get(&a.friend_degree),
            get(&a.friend_centrality),
            get(&a.friend_pagerank),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use proptest::prelude::*;

    fn ids(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| String::from(*s)).collect()
    }

    fn dense(g: &WeightedDigraph) -> Vec<Vec<f64>> {
        let n = g.nodes().len();
        let mut m = vec![vec![0.0; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, w) in g.out_edges(i) {
                row[j] = w;
            }
        }
        m
    }

    /// Stationary distribution of the Google matrix by Gaussian elimination.
    fn pagerank_oracle(a: &[Vec<f64>], d: f64) -> Vec<f64> {
        let n = a.len();
        let nf = n as f64;
        let mut g = vec![vec![0.0; n]; n];
        for i in 0..n {
            let total: f64 = a[i].iter().sum();
            for j in 0..n {
                let walk = if total > 0.0 { a[i][j] / total } else { 1.0 / nf };
                g[i][j] = d * walk + (1.0 - d) / nf;
            }
        }
        // Solve x (G - I) = 0 with sum(x) = 1: rows of the system are columns of G - I.
        let mut sys: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                let mut row: Vec<f64> = (0..n).map(|i| g[i][j] - if i == j { 1.0 } else { 0.0 }).collect();
                row.push(0.0);
                row
            })
            .collect();
        sys[n - 1] = vec![1.0; n + 1];
        solve(sys)
    }

    fn solve(mut m: Vec<Vec<f64>>) -> Vec<f64> {
        let n = m.len();
        for c in 0..n {
            let p = (c..n)
                .max_by(|&x, &y| m[x][c].abs().partial_cmp(&m[y][c].abs()).unwrap())
                .unwrap();
            m.swap(c, p);
            for r in 0..n {
                if r != c {
                    let f = m[r][c] / m[c][c];
                    for k in c..=n {
                        m[r][k] -= f * m[c][k];
                    }
                }
            }
        }
        (0..n).map(|i| m[i][n] / m[i][i]).collect()
    }

    /// Leading eigenvector of a symmetric matrix by cyclic Jacobi rotations.
    fn top_eigenvector(mut s: Vec<Vec<f64>>) -> Vec<f64> {
        let n = s.len();
        let mut v: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        for _ in 0..100 {
            for p in 0..n {
                for q in p + 1..n {
                    if s[p][q].abs() < 1e-15 {
                        continue;
                    }
                    let theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let sn = t * c;
                    for k in 0..n {
                        let (skp, skq) = (s[k][p], s[k][q]);
                        s[k][p] = c * skp - sn * skq;
                        s[k][q] = sn * skp + c * skq;
                    }
                    for k in 0..n {
                        let (spk, sqk) = (s[p][k], s[q][k]);
                        s[p][k] = c * spk - sn * sqk;
                        s[q][k] = sn * spk + c * sqk;
                    }
                    for row in v.iter_mut() {
                        let (vp, vq) = (row[p], row[q]);
                        row[p] = c * vp - sn * vq;
                        row[q] = sn * vp + c * vq;
                    }
                }
            }
        }
        let top = (0..n)
            .max_by(|&a, &b| s[a][a].partial_cmp(&s[b][b]).unwrap())
            .unwrap();
        let mut e: Vec<f64> = v.iter().map(|row| row[top]).collect();
        if e.iter().sum::<f64>() < 0.0 {
            e.iter_mut().for_each(|x| *x = -*x);
        }
        e
    }

    fn gram(a: &[Vec<f64>], transpose_first: bool) -> Vec<Vec<f64>> {
        let n = a.len();
        let mut g = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = (0..n)
                    .map(|k| if transpose_first { a[k][i] * a[k][j] } else { a[i][k] * a[j][k] })
                    .sum();
            }
        }
        g
    }

    fn values(s: &Scores) -> Vec<f64> {
        s.values().copied().collect()
    }

    fn linf(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn friendship_symmetrised() {
        let g = UndirectedGraph::new(ids(&["a", "b", "c"]), [("a", "b"), ("b", "a")]);
        assert_eq!(g.edge_count(), 1);
        let g = UndirectedGraph::new(ids(&["a", "b"]), [("b", "a")]);
        assert!(g.has_edge("a", "b"));
        let g = UndirectedGraph::new(ids(&["a", "b"]), []);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn star_centrality() {
        let g = UndirectedGraph::new(ids(&["c", "x", "y", "z", "lonely"]), [("c", "x"), ("c", "y"), ("c", "z")]);
        let dc = degree_centrality(&g, DegreeMode::Undirected).unwrap();
        assert!((dc["c"] - 3.0 / 4.0).abs() < 1e-12);
        let g = UndirectedGraph::new(ids(&["c", "x", "y", "z"]), [("c", "x"), ("c", "y"), ("c", "z")]);
        let dc = degree_centrality(&g, DegreeMode::Undirected).unwrap();
        assert_eq!(dc["c"], 1.0);
        assert!((dc["x"] - 1.0 / 3.0).abs() < 1e-12);
        let g = UndirectedGraph::new(ids(&["a", "b"]), []);
        assert_eq!(degree_centrality(&g, DegreeMode::Undirected).unwrap()["a"], 0.0);
        let g = UndirectedGraph::new(ids(&["a"]), []);
        assert_eq!(degree_centrality(&g, DegreeMode::Undirected), Err(GraphError::TooSmall(1)));
    }

    #[test]
    fn pagerank_small_cases() {
        let g = WeightedDigraph::new(ids(&["a"]), []);
        assert_eq!(pagerank(&g, 0.85, IterParams::default()).unwrap()["a"], 1.0);
        let g = WeightedDigraph::new(ids(&[]), [("a", "b", 1), ("b", "a", 1)]);
        let pr = pagerank(&g, 0.85, IterParams::default()).unwrap();
        assert!((pr["a"] - 0.5).abs() < 1e-12 && (pr["b"] - 0.5).abs() < 1e-12);
        let g = WeightedDigraph::new(ids(&[]), [("a", "b", 1), ("b", "c", 1)]);
        let pr = pagerank(&g, 0.85, IterParams::default()).unwrap();
        assert!(linf(&values(&pr), &pagerank_oracle(&dense(&g), 0.85)) < 1e-6);
        assert_eq!(
            pagerank(&WeightedDigraph::default(), 0.85, IterParams::default()),
            Err(GraphError::Empty)
        );
    }

    #[test]
    fn pagerank_reports_nonconvergence() {
        let g = WeightedDigraph::new(ids(&[]), [("a", "b", 1), ("b", "c", 1)]);
        let p = IterParams { tol: 1e-9, max_iter: 2 };
        assert!(matches!(
            pagerank(&g, 0.85, p),
            Err(GraphError::NoConvergence { algorithm: "pagerank", iterations: 2, .. })
        ));
    }

    #[test]
    fn hits_small_cases() {
        let g = WeightedDigraph::new(ids(&[]), [("x", "y", 1)]);
        let (h, a) = hits(&g, IterParams::default()).unwrap();
        assert!((h["x"] - 1.0).abs() < 1e-12 && (a["y"] - 1.0).abs() < 1e-12);
        assert_eq!(h["y"], 0.0);

        let g = WeightedDigraph::new(ids(&[]), [("v1", "d", 1), ("v2", "d", 1)]);
        let (h, a) = hits(&g, IterParams::default()).unwrap();
        assert!((a["d"] - 1.0).abs() < 1e-12);
        assert!((h["v1"] - h["v2"]).abs() < 1e-12);
    }

    #[test]
    fn voter_graph_weights() {
        use crate::corpus::*;
        let ballot = |v: &str| Ballot {
            voter_id: v.into(),
            stance_before: VoteStance::Undecided,
            stance_after: VoteStance::Pro,
            choices: DimensionChoices::all(Verdict::Tie),
        };
        let debate = |id: &str, pro: &str, con: &str, ballots| Debate {
            debate_id: id.into(),
            topic: "t".into(),
            category: "c".into(),
            pro_user: pro.into(),
            con_user: con.into(),
            rounds: vec![Round { index: 1, pro_text: Some("a".into()), con_text: Some("b".into()) }],
            ballots,
            timestamp: 0,
        };
        let users = ["p", "q", "r", "v"].iter().enumerate().map(|(i, u)| UserProfile::new(*u, i as u64)).collect();
        let corpus = Corpus::new(
            vec![
                debate("d1", "p", "q", vec![ballot("v")]),
                debate("d2", "p", "r", vec![ballot("v")]),
                debate("d3", "q", "r", vec![]),
            ],
            users,
            vec![],
            vec![],
        )
        .unwrap();
        let g = build_voter_graph(&corpus);
        assert_eq!(g.weight("v", "p"), 2);
        assert_eq!(g.weight("v", "q"), 1);
        assert_eq!(g.weight("v", "r"), 1);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.weight("p", "v"), 0);

        let empty = Corpus::new(vec![debate("d3", "q", "r", vec![])], vec![], vec![], vec![]).unwrap();
        assert_eq!(build_voter_graph(&empty).edge_count(), 0);
    }

    #[test]
    fn features_for_isolated_and_star() {
        let f = UndirectedGraph::new(ids(&[]), [("a", "b")]);
        let v = WeightedDigraph::new(ids(&[]), [("c", "x", 1), ("c", "y", 1), ("c", "z", 1), ("o", "x", 1)]);
        let an = GraphAnalytics::compute(&f, &v, IterParams::default()).unwrap();
        let iso = user_graph_features("iso", &an);
        assert_eq!(iso.len(), 10);
        assert_eq!(iso.names, USER_GRAPH_FEATURES);
        assert!(iso.values.iter().all(|&x| x == 0.0));
        let c = user_graph_features("c", &an).get("voter_hub").unwrap();
        let o = user_graph_features("o", &an).get("voter_hub").unwrap();
        assert!(c > o);
        assert_eq!(user_graph_features("c", &an).get("voter_out_degree"), Some(3.0));
    }

    fn digraph_strategy() -> impl Strategy<Value = WeightedDigraph> {
        (2usize..=8).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n, 1u32..5), 1..20).prop_map(move |edges| {
                let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
                let e: Vec<(String, String, u32)> = edges
                    .into_iter()
                    .map(|(a, b, w)| (names[a].clone(), names[b].clone(), w))
                    .collect();
                WeightedDigraph::new(names.clone(), e.iter().map(|(a, b, w)| (a.as_str(), b.as_str(), *w)))
            })
        })
    }

    #[test]
    fn hits_matches_eigen_oracle_on_six_nodes() {
        let edges = [
            ("a", "b", 2), ("a", "c", 1), ("b", "c", 3), ("d", "c", 1),
            ("e", "a", 1), ("e", "b", 1), ("f", "c", 2), ("f", "d", 1), ("c", "e", 1),
        ];
        let g = WeightedDigraph::new(ids(&[]), edges);
        let (h, a) = hits(&g, IterParams { tol: 1e-12, max_iter: 10_000 }).unwrap();
        let m = dense(&g);
        assert!(linf(&values(&a), &top_eigenvector(gram(&m, true))) < 1e-6);
        assert!(linf(&values(&h), &top_eigenvector(gram(&m, false))) < 1e-6);
    }

    proptest! {
        #[test]
        fn pagerank_sums_to_one_and_matches_oracle(g in digraph_strategy()) {
            let pr = pagerank(&g, 0.85, IterParams::default()).unwrap();
            let v = values(&pr);
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(v.iter().all(|&x| x >= 0.0));
            prop_assert!(linf(&v, &pagerank_oracle(&dense(&g), 0.85)) < 1e-6);
        }

        #[test]
        fn hits_unit_norm_and_scale_invariant(g in digraph_strategy(), k in 2u32..6) {
            let p = IterParams { tol: 1e-12, max_iter: 20_000 };
            prop_assume!(g.edge_count() > 0);
            let Ok((h, a)) = hits(&g, p) else { return Ok(()); };
            let norm = |s: &Scores| s.values().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((norm(&h) - 1.0).abs() < 1e-9);
            prop_assert!((norm(&a) - 1.0).abs() < 1e-9);
            let scaled = WeightedDigraph::new(
                g.nodes().to_vec(),
                g.edges().into_iter().map(|(x, y, w)| (x, y, w * k)),
            );
            let (h2, a2) = hits(&scaled, p).unwrap();
            prop_assert!(linf(&values(&h), &values(&h2)) < 1e-9);
            prop_assert!(linf(&values(&a), &values(&a2)) < 1e-9);
        }

        #[test]
        fn build_is_order_invariant(mut edges in prop::collection::vec((0usize..6, 0usize..6, 1u32..3), 0..15), seed in any::<u64>()) {
            let names: Vec<String> = (0..6).map(|i| format!("u{i}")).collect();
            let build = |e: &[(usize, usize, u32)]| WeightedDigraph::new(
                names.iter().rev().cloned(),
                e.iter().map(|&(a, b, w)| (names[a].as_str(), names[b].as_str(), w)),
            );
            let g1 = build(&edges);
            let mut rng = crate::util::seeded(seed);
            crate::util::shuffle(&mut edges, &mut rng);
            prop_assert_eq!(g1, build(&edges));
        }
    }
}
