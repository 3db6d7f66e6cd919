//! Empirical topology metrics and motif census: edge-list ingestion,
//! k-core/coreness, core distances, edge-disjoint path counts, shortest
//! cycles, double-star and entangled-cycle motifs, and a degree-preserving
//! configuration-model null with Chebyshev significance bounds.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{
    shortest_cycle_through, Network, PlayerClass, PlayerId,
};
use crate::Error;

// ---------------------------------------------------------------------------
// Ingestion

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeListFormat {
    /// Whitespace-separated id pairs, `#` comments.
    PlainPairs,
    /// `a|b|rel` lines; the relationship field is ignored.
    PipeAsRel,
}

#[derive(Debug, Clone)]
pub enum ClassRule {
    AllMinor,
    /// Explicit external ids become majors.
    ExplicitMajors(Vec<String>),
    /// The m highest-degree nodes become majors (ties by first appearance).
    TopDegreeMajors(usize),
}

#[derive(Debug, Clone)]
pub struct LoadedTopology {
    pub net: Network,
    /// External id for each internal node index.
    pub external_ids: Vec<String>,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

pub fn load_edge_list(
    path: &Path,
    format: EdgeListFormat,
    class_rule: &ClassRule,
) -> Result<LoadedTopology, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text, format, class_rule)
}

pub fn parse_edge_list(
    text: &str,
    format: EdgeListFormat,
    class_rule: &ClassRule,
) -> Result<LoadedTopology, Error> {
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let intern = |s: &str, ids: &mut Vec<String>, index: &mut HashMap<String, usize>| {
        *index.entry(s.to_string()).or_insert_with(|| {
            ids.push(s.to_string());
            ids.len() - 1
        })
    };
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut self_loops = 0usize;
    let mut duplicates = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (a, b) = match format {
            EdgeListFormat::PlainPairs => {
                let mut it = line.split_whitespace();
                let a = it.next();
                let b = it.next();
                match (a, b, it.next()) {
                    (Some(a), Some(b), None) => (a, b),
                    _ => {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            msg: "expected exactly two whitespace-separated ids".into(),
                        })
                    }
                }
            }
            EdgeListFormat::PipeAsRel => {
                let fields: Vec<&str> = line.split('|').collect();
                if fields.len() < 2 || fields[0].trim().is_empty() || fields[1].trim().is_empty() {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: "expected `a|b|rel`".into(),
                    });
                }
                (fields[0].trim(), fields[1].trim())
            }
        };
        let u = intern(a, &mut ids, &mut index);
        let v = intern(b, &mut ids, &mut index);
        if u == v {
            self_loops += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !edges.insert(key) {
            duplicates += 1;
        }
    }
    if edges.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = ids.len();
    let mut degree = vec![0usize; n];
    for &(u, v) in &edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut classes = vec![PlayerClass::MinorB; n];
    match class_rule {
        ClassRule::AllMinor => {}
        ClassRule::ExplicitMajors(list) => {
            for ext in list {
                if let Some(&i) = index.get(ext) {
                    classes[i] = PlayerClass::MajorA;
                }
            }
        }
        ClassRule::TopDegreeMajors(m) => {
            let mut by_degree: Vec<usize> = (0..n).collect();
            by_degree.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
            for &i in by_degree.iter().take(*m) {
                classes[i] = PlayerClass::MajorA;
            }
        }
    }
    let edge_vec: Vec<(usize, usize)> = edges.into_iter().collect();
    let net = Network::from_edges(classes, &edge_vec)?;
    Ok(LoadedTopology {
        net,
        external_ids: ids,
        self_loops_dropped: self_loops,
        duplicates_dropped: duplicates,
    })
}

// ---------------------------------------------------------------------------
// Cores

/// Peeling number of every node.
pub fn coreness(net: &Network) -> Vec<usize> {
    let n = net.n();
    let mut deg: Vec<usize> = (0..n).map(|i| net.neighbor_set(PlayerId(i)).len()).collect();
    let mut core = vec![0usize; n];
    let mut removed = vec![false; n];
    // Peeling: repeatedly remove a minimum-degree node; the coreness is the
    // running maximum of removal degrees.
    let mut level = 0usize;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| deg[v])
            .unwrap();
        removed[v] = true;
        level = level.max(deg[v]);
        core[v] = level;
        for u in net.neighbors(PlayerId(v)) {
            if !removed[u.0] && deg[u.0] > 0 {
                deg[u.0] -= 1;
            }
        }
    }
    core
}

pub fn k_core(net: &Network, k: usize) -> Result<BTreeSet<PlayerId>, Error> {
    if k < 1 {
        return Err(Error::BadArgument("k must be >= 1".into()));
    }
    let c = coreness(net);
    Ok((0..net.n())
        .filter(|&i| c[i] >= k)
        .map(PlayerId)
        .collect())
}

#[derive(Debug, Clone)]
pub enum CoreSpec {
    KLevel(usize),
    Explicit(BTreeSet<PlayerId>),
}

impl CoreSpec {
    pub fn resolve(&self, net: &Network) -> Result<BTreeSet<PlayerId>, Error> {
        let set = match self {
            CoreSpec::KLevel(k) => k_core(net, *k)?,
            CoreSpec::Explicit(set) => {
                for i in set {
                    if i.0 >= net.n() {
                        return Err(Error::InvalidNode(*i));
                    }
                }
                set.clone()
            }
        };
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreDistanceReport {
    /// Per-node minimum distance to the core; None when unreachable.
    pub distances: Vec<Option<u32>>,
    /// Mean over reachable non-core nodes; 0 when every node is in the core.
    pub mean: f64,
    pub unreachable: usize,
    pub all_core: bool,
}

pub fn node_core_distance(net: &Network, core: &CoreSpec) -> Result<CoreDistanceReport, Error> {
    let members = core.resolve(net)?;
    let n = net.n();
    // Multi-source BFS from the core.
    let mut dist: Vec<Option<u32>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    for &m in &members {
        dist[m.0] = Some(0);
        queue.push_back(m.0);
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for u in net.neighbors(PlayerId(v)) {
            if dist[u.0].is_none() {
                dist[u.0] = Some(d + 1);
                queue.push_back(u.0);
            }
        }
    }
    let mut sum = 0u64;
    let mut count = 0usize;
    let mut unreachable = 0usize;
    for i in 0..n {
        if members.contains(&PlayerId(i)) {
            continue;
        }
        match dist[i] {
            Some(d) => {
                sum += d as u64;
                count += 1;
            }
            None => unreachable += 1,
        }
    }
    let all_core = members.len() == n;
    let mean = if count == 0 { 0.0 } else { sum as f64 / count as f64 };
    Ok(CoreDistanceReport {
        distances: dist,
        mean,
        unreachable,
        all_core,
    })
}

pub fn subgraph_density(net: &Network, nodes: &BTreeSet<PlayerId>) -> Result<f64, Error> {
    if nodes.len() < 2 {
        return Err(Error::BadArgument("density needs at least two nodes".into()));
    }
    for i in nodes {
        if i.0 >= net.n() {
            return Err(Error::InvalidNode(*i));
        }
    }
    let mut inside = 0usize;
    let list: Vec<PlayerId> = nodes.iter().copied().collect();
    for (a, &u) in list.iter().enumerate() {
        for &v in &list[a + 1..] {
            if net.has_edge(u, v) {
                inside += 1;
            }
        }
    }
    let pairs = nodes.len() * (nodes.len() - 1) / 2;
    Ok(inside as f64 / pairs as f64)
}

// ---------------------------------------------------------------------------
// Disjoint paths to the core

#[derive(Debug, Clone, Serialize)]
pub struct DisjointPathCount {
    pub count: usize,
    /// Set when the queried node is itself a core member; the count is then
    /// simply its degree.
    pub in_core: bool,
}

/// Maximum number of edge-disjoint paths from `i` to the core, via
/// unit-capacity max-flow into a virtual aggregation of the core members.
pub fn disjoint_paths_to_core(
    net: &Network,
    core: &CoreSpec,
    i: PlayerId,
) -> Result<DisjointPathCount, Error> {
    let members = core.resolve(net)?;
    let deg = net.degree(i)?;
    if members.contains(&i) {
        return Ok(DisjointPathCount {
            count: deg,
            in_core: true,
        });
    }
    let n = net.n();
    let sink = n; // virtual core aggregate
    // Arc-pair residual representation; every undirected edge contributes
    // two unit arcs, core membership contributes an uncapped arc to the sink.
    let mut to: Vec<usize> = Vec::new();
    let mut cap: Vec<i64> = Vec::new();
    let mut head: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let push_arc = |u: usize, v: usize, c: i64, to: &mut Vec<usize>, cap: &mut Vec<i64>, head: &mut Vec<Vec<usize>>| {
        head[u].push(to.len());
        to.push(v);
        cap.push(c);
        head[v].push(to.len());
        to.push(u);
        cap.push(0);
    };
    for (u, v) in net.edges() {
        push_arc(u.0, v.0, 1, &mut to, &mut cap, &mut head);
        push_arc(v.0, u.0, 1, &mut to, &mut cap, &mut head);
    }
    for &m in &members {
        push_arc(m.0, sink, i64::MAX / 2, &mut to, &mut cap, &mut head);
    }
    let mut flow = 0usize;
    loop {
        // BFS augmenting path from i to the sink.
        let mut prev_arc: Vec<Option<usize>> = vec![None; n + 1];
        let mut seen = vec![false; n + 1];
        seen[i.0] = true;
        let mut queue = std::collections::VecDeque::from([i.0]);
        while let Some(v) = queue.pop_front() {
            if v == sink {
                break;
            }
            for &a in &head[v] {
                if cap[a] > 0 && !seen[to[a]] {
                    seen[to[a]] = true;
                    prev_arc[to[a]] = Some(a);
                    queue.push_back(to[a]);
                }
            }
        }
        if !seen[sink] {
            break;
        }
        let mut v = sink;
        while v != i.0 {
            let a = prev_arc[v].unwrap();
            cap[a] -= 1;
            cap[a ^ 1] += 1;
            v = to[a ^ 1];
        }
        flow += 1;
    }
    Ok(DisjointPathCount {
        count: flow,
        in_core: false,
    })
}

/// Mean disjoint-path count over `minors`, divided by their mean degree.
pub fn core_ratio(
    net: &Network,
    core: &CoreSpec,
    minors: &[PlayerId],
) -> Result<f64, Error> {
    if minors.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut path_sum = 0usize;
    let mut deg_sum = 0usize;
    for &b in minors {
        path_sum += disjoint_paths_to_core(net, core, b)?.count;
        deg_sum += net.degree(b)?;
    }
    if deg_sum == 0 {
        return Err(Error::BadArgument("minor set has no links".into()));
    }
    Ok(path_sum as f64 / deg_sum as f64)
}

// ---------------------------------------------------------------------------
// Cycles

#[derive(Debug, Clone, Serialize)]
pub struct CycleReport {
    /// Mean length over pairs that lie on a common cycle; None when every
    /// pair was skipped.
    pub mean: Option<f64>,
    pub pairs: usize,
    pub skipped: usize,
}

pub fn mean_shortest_cycle(
    net: &Network,
    set_x: &BTreeSet<PlayerId>,
    set_y: &BTreeSet<PlayerId>,
) -> Result<CycleReport, Error> {
    if set_x.is_empty() || set_y.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut sum = 0u64;
    let mut pairs = 0usize;
    let mut skipped = 0usize;
    for &x in set_x {
        for &y in set_y {
            if x == y {
                continue;
            }
            match shortest_cycle_through(net, x, y)? {
                Some(len) => {
                    sum += len as u64;
                    pairs += 1;
                }
                None => skipped += 1,
            }
        }
    }
    let mean = if pairs == 0 {
        None
    } else {
        Some(sum as f64 / pairs as f64)
    };
    Ok(CycleReport {
        mean,
        pairs,
        skipped,
    })
}

// ---------------------------------------------------------------------------
// Motifs

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Motif {
    /// Adjacent center pair, both of degree > m, sharing >= m neighbors.
    DoubleStar(usize),
    /// l = 3: triangles; l = 4: 4-sets containing a diamond subgraph.
    EntangledCycle(usize),
}

pub fn count_motif(net: &Network, motif: Motif) -> Result<usize, Error> {
    match motif {
        Motif::DoubleStar(m) => count_double_star(net, m),
        Motif::EntangledCycle(l) => count_entangled_cycles(net, l),
    }
}

/// Unordered adjacent pairs (u,v) with deg(u) > m, deg(v) > m and at least
/// m common neighbors.
pub fn count_double_star(net: &Network, m: usize) -> Result<usize, Error> {
    if m < 1 {
        return Err(Error::BadArgument("m must be >= 1".into()));
    }
    let mut count = 0usize;
    for (u, v) in net.edges() {
        if net.degree(u)? <= m || net.degree(v)? <= m {
            continue;
        }
        let common = net
            .neighbor_set(u)
            .intersection(net.neighbor_set(v))
            .count();
        if common >= m {
            count += 1;
        }
    }
    Ok(count)
}

/// l = 3: triangle count. l = 4: number of distinct 4-node subsets whose
/// induced subgraph contains a diamond (a 4-cycle with a chord) as a
/// subgraph.
pub fn count_entangled_cycles(net: &Network, l: usize) -> Result<usize, Error> {
    match l {
        3 => {
            let mut triple_count = 0usize;
            for (u, v) in net.edges() {
                triple_count += net
                    .neighbor_set(u)
                    .intersection(net.neighbor_set(v))
                    .count();
            }
            Ok(triple_count / 3)
        }
        4 => {
            // Every diamond has a hinge: the chord edge whose endpoints are
            // adjacent to both remaining vertices.
            let mut subsets: HashSet<[usize; 4]> = HashSet::new();
            for (u, v) in net.edges() {
                let common: Vec<usize> = net
                    .neighbor_set(u)
                    .intersection(net.neighbor_set(v))
                    .copied()
                    .collect();
                for (a, &x) in common.iter().enumerate() {
                    for &y in &common[a + 1..] {
                        let mut key = [u.0, v.0, x, y];
                        key.sort_unstable();
                        subsets.insert(key);
                    }
                }
            }
            Ok(subsets.len())
        }
        _ => Err(Error::BadArgument("cycle motif length must be 3 or 4".into())),
    }
}

// ---------------------------------------------------------------------------
// Configuration-model null

#[derive(Debug, Clone)]
pub struct CmSample {
    pub net: Network,
    pub erased_stubs: usize,
    pub total_stubs: usize,
}

impl CmSample {
    pub fn erased_fraction(&self) -> f64 {
        if self.total_stubs == 0 {
            0.0
        } else {
            self.erased_stubs as f64 / self.total_stubs as f64
        }
    }
}

/// Uniform stub matching on the given degree sequence; self-loops and
/// parallel edges are erased and reported.
pub fn configuration_model(degree_sequence: &[usize], seed: u64) -> Result<CmSample, Error> {
    let total: usize = degree_sequence.iter().sum();
    if total % 2 != 0 {
        return Err(Error::OddDegreeSum);
    }
    let mut stubs: Vec<usize> = Vec::with_capacity(total);
    for (i, &d) in degree_sequence.iter().enumerate() {
        stubs.extend(std::iter::repeat(i).take(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    stubs.shuffle(&mut rng);
    let mut net = Network::new(vec![PlayerClass::MinorB; degree_sequence.len()]);
    let mut erased = 0usize;
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (PlayerId(pair[0]), PlayerId(pair[1]));
        if u == v || net.has_edge(u, v) {
            erased += 2;
        } else {
            net.add_edge(u, v)?;
        }
    }
    Ok(CmSample {
        net,
        erased_stubs: erased,
        total_stubs: total,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MotifReport {
    pub motif: Motif,
    pub observed: usize,
    pub null_mean: f64,
    pub null_std: f64,
    pub samples: usize,
    /// None when the null distribution is degenerate (zero spread).
    pub z: Option<f64>,
    pub p_bound: f64,
    pub degenerate: bool,
    pub mean_erased_fraction: f64,
}

/// Motif counts for a contiguous range of null-sample indices; each sample
/// uses a seed derived from (seed, index) so ranges may run in parallel.
pub fn null_model_counts(
    degree_sequence: &[usize],
    motif: Motif,
    indices: std::ops::Range<usize>,
    seed: u64,
) -> Result<Vec<(usize, f64)>, Error> {
    let mut out = Vec::with_capacity(indices.len());
    for idx in indices {
        let sample_seed = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(idx as u64);
        let sample = configuration_model(degree_sequence, sample_seed)?;
        out.push((count_motif(&sample.net, motif)?, sample.erased_fraction()));
    }
    Ok(out)
}

pub fn null_model_report(
    net: &Network,
    motif: Motif,
    samples: usize,
    seed: u64,
) -> Result<MotifReport, Error> {
    if samples < 2 {
        return Err(Error::BadArgument("need at least two null samples".into()));
    }
    let observed = count_motif(net, motif)?;
    let seq = net.degree_sequence();
    let counts = null_model_counts(&seq, motif, 0..samples, seed)?;
    Ok(summarize_null(motif, observed, &counts))
}

/// Build the report from observed count and per-sample (count, erased
/// fraction) pairs; exposed so parallel drivers can merge sample ranges.
pub fn summarize_null(motif: Motif, observed: usize, counts: &[(usize, f64)]) -> MotifReport {
    let n = counts.len() as f64;
    let mean = counts.iter().map(|(c, _)| *c as f64).sum::<f64>() / n;
    let var = counts
        .iter()
        .map(|(c, _)| (*c as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    let std = var.sqrt();
    let degenerate = std == 0.0;
    let z = if degenerate {
        None
    } else {
        Some((observed as f64 - mean) / std)
    };
    let p_bound = match z {
        Some(z) if z > 0.0 => (1.0 / (z * z)).min(1.0),
        _ => 1.0,
    };
    let mean_erased_fraction = counts.iter().map(|(_, e)| *e).sum::<f64>() / n;
    MotifReport {
        motif,
        observed,
        null_mean: mean,
        null_std: std,
        samples: counts.len(),
        z,
        p_bound,
        degenerate,
        mean_erased_fraction,
    }
}

// ---------------------------------------------------------------------------
// Snapshot pipeline

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub label: String,
    pub net: Network,
    pub rank: Option<BTreeMap<PlayerId, f64>>,
}

impl Snapshot {
    pub fn new(label: impl Into<String>, net: Network) -> Self {
        Snapshot {
            label: label.into(),
            net,
            rank: None,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if let Some(rank) = &self.rank {
            for i in self.net.nodes() {
                if !rank.contains_key(&i) {
                    return Err(Error::Config(format!(
                        "rank map is missing node {}",
                        i.0
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One CSV row of the per-snapshot metric time series.
#[derive(Debug, Clone, Serialize)]
pub struct MetricRow {
    pub label: String,
    pub nodes: usize,
    pub edges: usize,
    pub core_size: usize,
    pub core_density: f64,
    pub mean_core_distance: f64,
    pub unreachable: usize,
    pub mean_disjoint_paths: f64,
    pub core_ratio: f64,
    pub mean_shortest_cycle: Option<f64>,
    pub cycle_pairs_skipped: usize,
}

/// Compute the full metric row for a snapshot against a core specification.
/// Cycle statistics are taken over (non-core, core) node pairs.
pub fn analyze_snapshot(snap: &Snapshot, core: &CoreSpec) -> Result<MetricRow, Error> {
    snap.validate()?;
    let net = &snap.net;
    let members = core.resolve(net)?;
    let outside: Vec<PlayerId> = net.nodes().filter(|i| !members.contains(i)).collect();
    let dist = node_core_distance(net, core)?;
    let core_density = if members.len() >= 2 {
        subgraph_density(net, &members)?
    } else {
        0.0
    };
    let mean_disjoint_paths = if outside.is_empty() {
        0.0
    } else {
        let mut sum = 0usize;
        for &b in &outside {
            sum += disjoint_paths_to_core(net, core, b)?.count;
        }
        sum as f64 / outside.len() as f64
    };
    let ratio = if outside.is_empty() {
        0.0
    } else {
        core_ratio(net, core, &outside)?
    };
    let (cycle_mean, cycle_skipped) = if outside.is_empty() {
        (None, 0)
    } else {
        let outside_set: BTreeSet<PlayerId> = outside.iter().copied().collect();
        let rep = mean_shortest_cycle(net, &outside_set, &members)?;
        (rep.mean, rep.skipped)
    };
    Ok(MetricRow {
        label: snap.label.clone(),
        nodes: net.n(),
        edges: net.edge_count(),
        core_size: members.len(),
        core_density,
        mean_core_distance: dist.mean,
        unreachable: dist.unreachable,
        mean_disjoint_paths,
        core_ratio: ratio,
        mean_shortest_cycle: cycle_mean,
        cycle_pairs_skipped: cycle_skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostParams;
    use crate::rat::int;
    use crate::stability::optimal_reliable_stable_network;

    fn path3() -> Network {
        Network::from_edges(vec![PlayerClass::MinorB; 3], &[(0, 1), (1, 2)]).unwrap()
    }

    fn clique(n: usize) -> Network {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Network::from_edges(vec![PlayerClass::MinorB; n], &edges).unwrap()
    }

    #[test]
    fn parses_plain_pairs() {
        let t = parse_edge_list("1 2\n2 3\n", EdgeListFormat::PlainPairs, &ClassRule::AllMinor)
            .unwrap();
        assert_eq!(t.net.n(), 3);
        assert_eq!(t.net.edge_count(), 2);
        assert_eq!(t.self_loops_dropped, 0);
    }

    #[test]
    fn parses_pipe_format_and_drops_self_loops() {
        let t = parse_edge_list("1|2|-1\n", EdgeListFormat::PipeAsRel, &ClassRule::AllMinor)
            .unwrap();
        assert_eq!((t.net.n(), t.net.edge_count()), (2, 1));
        let t = parse_edge_list("1 1\n1 2\n", EdgeListFormat::PlainPairs, &ClassRule::AllMinor)
            .unwrap();
        assert_eq!(t.net.edge_count(), 1);
        assert_eq!(t.self_loops_dropped, 1);
        // Duplicates and reversed edges collapse.
        let t = parse_edge_list(
            "1 2\n2 1\n1 2\n",
            EdgeListFormat::PlainPairs,
            &ClassRule::AllMinor,
        )
        .unwrap();
        assert_eq!(t.net.edge_count(), 1);
        assert_eq!(t.duplicates_dropped, 2);
    }

    #[test]
    fn parse_errors_and_empty() {
        let e = parse_edge_list("1\n", EdgeListFormat::PlainPairs, &ClassRule::AllMinor);
        assert!(matches!(e, Err(Error::Parse { line: 1, .. })));
        let e = parse_edge_list("# only comments\n", EdgeListFormat::PlainPairs, &ClassRule::AllMinor);
        assert!(matches!(e, Err(Error::EmptySet)));
    }

    #[test]
    fn class_rules() {
        let text = "h a\nh b\nh c\na b\n";
        let t = parse_edge_list(
            text,
            EdgeListFormat::PlainPairs,
            &ClassRule::TopDegreeMajors(1),
        )
        .unwrap();
        let hub = t.external_ids.iter().position(|s| s == "h").unwrap();
        assert!(t.net.is_major(PlayerId(hub)));
        assert_eq!(t.net.count_majors(), 1);
        let t = parse_edge_list(
            text,
            EdgeListFormat::PlainPairs,
            &ClassRule::ExplicitMajors(vec!["a".into(), "b".into()]),
        )
        .unwrap();
        assert_eq!(t.net.count_majors(), 2);
    }

    #[test]
    fn coreness_examples() {
        assert_eq!(coreness(&path3()), vec![1, 1, 1]);
        // Triangle with a pendant.
        let net = Network::from_edges(
            vec![PlayerClass::MinorB; 4],
            &[(0, 1), (1, 2), (0, 2), (2, 3)],
        )
        .unwrap();
        assert_eq!(coreness(&net), vec![2, 2, 2, 1]);
        assert_eq!(coreness(&clique(4)), vec![3; 4]);
        let core = k_core(&net, 2).unwrap();
        assert_eq!(core.len(), 3);
        assert!(k_core(&net, 0).is_err());
    }

    #[test]
    fn core_distances() {
        // Star with center 0.
        let star = Network::from_edges(
            vec![PlayerClass::MinorB; 4],
            &[(0, 1), (0, 2), (0, 3)],
        )
        .unwrap();
        let spec = CoreSpec::Explicit([PlayerId(0)].into());
        let rep = node_core_distance(&star, &spec).unwrap();
        assert_eq!(rep.mean, 1.0);
        assert_eq!(rep.unreachable, 0);
        let all = CoreSpec::Explicit((0..4).map(PlayerId).collect());
        let rep = node_core_distance(&star, &all).unwrap();
        assert!(rep.all_core);
        assert_eq!(rep.mean, 0.0);
        // Two components.
        let two = Network::from_edges(vec![PlayerClass::MinorB; 4], &[(0, 1), (2, 3)]).unwrap();
        let rep = node_core_distance(&two, &CoreSpec::Explicit([PlayerId(0)].into())).unwrap();
        assert_eq!(rep.unreachable, 2);
    }

    #[test]
    fn density_examples() {
        let all: BTreeSet<PlayerId> = (0..4).map(PlayerId).collect();
        assert_eq!(subgraph_density(&clique(4), &all).unwrap(), 1.0);
        let p4 = Network::from_edges(vec![PlayerClass::MinorB; 4], &[(0, 1), (1, 2), (2, 3)])
            .unwrap();
        assert_eq!(subgraph_density(&p4, &all).unwrap(), 0.5);
        let empty = Network::from_edges(vec![PlayerClass::MinorB; 4], &[(0, 1)]).unwrap();
        let sub: BTreeSet<PlayerId> = [PlayerId(2), PlayerId(3)].into();
        assert_eq!(subgraph_density(&empty, &sub).unwrap(), 0.0);
        assert!(subgraph_density(&p4, &[PlayerId(0)].into()).is_err());
    }

    #[test]
    fn disjoint_paths_examples() {
        // Minor 3 linked to two members of a triangle core.
        let net = Network::from_edges(
            vec![PlayerClass::MinorB; 4],
            &[(0, 1), (1, 2), (0, 2), (3, 0), (3, 1)],
        )
        .unwrap();
        let core = CoreSpec::Explicit((0..3).map(PlayerId).collect());
        let d = disjoint_paths_to_core(&net, &core, PlayerId(3)).unwrap();
        assert_eq!((d.count, d.in_core), (2, false));
        let d = disjoint_paths_to_core(&net, &core, PlayerId(0)).unwrap();
        assert!(d.in_core);
        // A leaf has exactly one path.
        let net = Network::from_edges(
            vec![PlayerClass::MinorB; 4],
            &[(0, 1), (1, 2), (0, 2), (3, 0)],
        )
        .unwrap();
        assert_eq!(
            disjoint_paths_to_core(&net, &core, PlayerId(3)).unwrap().count,
            1
        );
    }

    #[test]
    fn reliable_optimum_has_core_ratio_one() {
        let p = CostParams::reliable(int(10), int(3), int(4), int(1), true, 7);
        let net = optimal_reliable_stable_network(&p, 3, 4).unwrap();
        let core = CoreSpec::Explicit(net.majors().collect());
        let minors: Vec<PlayerId> = net.minors().collect();
        assert_eq!(core_ratio(&net, &core, &minors).unwrap(), 1.0);
    }

    #[test]
    fn cycle_examples() {
        let c4 = Network::from_edges(
            vec![PlayerClass::MinorB; 4],
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
        )
        .unwrap();
        let rep =
            mean_shortest_cycle(&c4, &[PlayerId(1)].into(), &[PlayerId(3)].into()).unwrap();
        assert_eq!(rep.mean, Some(4.0));
        let rep = mean_shortest_cycle(&path3(), &[PlayerId(0)].into(), &[PlayerId(2)].into())
            .unwrap();
        assert_eq!(rep.mean, None);
        assert_eq!(rep.skipped, 1);
        // Reliable optimum with two majors: every minor-major cycle is a triangle.
        let p = CostParams::reliable(int(10), int(3), int(4), int(1), true, 5);
        let net = optimal_reliable_stable_network(&p, 2, 3).unwrap();
        let rep = mean_shortest_cycle(
            &net,
            &net.minors().collect(),
            &net.majors().collect(),
        )
        .unwrap();
        assert_eq!(rep.mean, Some(3.0));
    }

    #[test]
    fn double_star_examples() {
        // Two adjacent centers with three shared leaves.
        let net = Network::from_edges(
            vec![PlayerClass::MinorB; 5],
            &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)],
        )
        .unwrap();
        assert_eq!(count_double_star(&net, 2).unwrap(), 1);
        let star = Network::from_edges(
            vec![PlayerClass::MinorB; 4],
            &[(0, 1), (0, 2), (0, 3)],
        )
        .unwrap();
        assert_eq!(count_double_star(&star, 2).unwrap(), 0);
        assert_eq!(count_double_star(&clique(5), 2).unwrap(), 10);
        assert!(count_double_star(&star, 0).is_err());
    }

    #[test]
    fn entangled_cycle_examples() {
        let tri = Network::from_edges(vec![PlayerClass::MinorB; 3], &[(0, 1), (1, 2), (0, 2)])
            .unwrap();
        assert_eq!(count_entangled_cycles(&tri, 3).unwrap(), 1);
        let diamond = Network::from_edges(
            vec![PlayerClass::MinorB; 4],
            &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        assert_eq!(count_entangled_cycles(&diamond, 4).unwrap(), 1);
        assert_eq!(count_entangled_cycles(&clique(4), 4).unwrap(), 1);
        assert_eq!(count_entangled_cycles(&clique(5), 3).unwrap(), 10);
        assert!(count_entangled_cycles(&tri, 5).is_err());
    }

    #[test]
    fn configuration_model_examples() {
        let s = configuration_model(&[1, 1], 0).unwrap();
        assert_eq!(s.net.edge_count(), 1);
        assert_eq!(s.erased_stubs, 0);
        let s = configuration_model(&[0, 0, 0], 0).unwrap();
        assert_eq!(s.net.edge_count(), 0);
        assert!(configuration_model(&[1, 1, 1], 0).is_err());
        // Degrees are preserved whenever nothing was erased.
        let s = configuration_model(&[2, 2, 2], 7).unwrap();
        if s.erased_stubs == 0 {
            assert_eq!(s.net.degree_sequence(), vec![2, 2, 2]);
        }
    }

    #[test]
    fn null_reports() {
        // Path has no triangles and neither do its nulls of the same
        // sequence most of the time; degenerate case flagged.
        let rep = null_model_report(&path3(), Motif::EntangledCycle(3), 10, 3).unwrap();
        if rep.degenerate {
            assert_eq!(rep.z, None);
            assert_eq!(rep.p_bound, 1.0);
        }
        assert!(null_model_report(&path3(), Motif::EntangledCycle(3), 1, 0).is_err());
        // observed == mean -> p bound 1.
        let rep = summarize_null(Motif::DoubleStar(1), 2, &[(1, 0.0), (3, 0.0)]);
        assert_eq!(rep.z, Some(0.0));
        assert_eq!(rep.p_bound, 1.0);
    }

    #[test]
    fn snapshot_rows() {
        let net = Network::from_edges(
            vec![PlayerClass::MinorB; 5],
            &[(0, 1), (1, 2), (0, 2), (3, 0), (4, 1)],
        )
        .unwrap();
        let snap = Snapshot::new("t0", net);
        let row = analyze_snapshot(&snap, &CoreSpec::KLevel(2)).unwrap();
        assert_eq!(row.core_size, 3);
        assert_eq!(row.core_density, 1.0);
        assert_eq!(row.mean_core_distance, 1.0);
        assert_eq!(row.mean_disjoint_paths, 1.0);
        let mut snap = snap;
        snap.rank = Some([(PlayerId(0), 1.0)].into());
        assert!(analyze_snapshot(&snap, &CoreSpec::KLevel(2)).is_err());
    }
}
