//! Pairwise stability (with and without transfers), exhaustive equilibrium
//! enumeration on small instances, optimal-network constructors, and
//! PoS/PoA/PoR reports.

use serde::Serialize;

use crate::cost::{delta_cost, social_cost, CostMode, CostParams, EdgeAction};
use crate::graph::{Network, PlayerId};
use crate::rat::{int, opt_rat_serde, rat_serde, zero, Rat};
use crate::Error;

/// Tie semantics for the stability predicates. Defaults follow the strict
/// reading of the definitions: a zero-delta removal violates plain stability,
/// a zero combined delta is stable under transfers.
#[derive(Debug, Clone, Copy)]
pub struct StabilityOptions {
    pub removal_tie_violates: bool,
    pub transfer_tie_stable: bool,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        StabilityOptions {
            removal_tie_violates: true,
            transfer_tie_stable: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub edge: (PlayerId, PlayerId),
    pub action: EdgeAction,
    /// The players whose deviation the deltas below describe.
    pub actors: Vec<PlayerId>,
    #[serde(with = "rat_vec_serde")]
    pub deltas: Vec<Rat>,
}

mod rat_vec_serde {
    use super::*;
    use crate::rat::fmt_rat;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_rat))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub violations: Vec<Violation>,
}

impl StabilityReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        StabilityReport {
            stable: violations.is_empty(),
            violations,
        }
    }
}

/// Def.-2 pairwise stability: every present edge strictly benefits both
/// endpoints (removal would raise both costs), and no absent edge strictly
/// benefits both endpoints at once.
pub fn is_pairwise_stable(net: &Network, p: &CostParams) -> Result<StabilityReport, Error> {
    is_pairwise_stable_with(net, p, StabilityOptions::default())
}

pub fn is_pairwise_stable_with(
    net: &Network,
    p: &CostParams,
    opts: StabilityOptions,
) -> Result<StabilityReport, Error> {
    let mut work = net.clone();
    let mut violations = Vec::new();
    for i in net.nodes() {
        for j in net.nodes().skip(i.0 + 1) {
            let edge = (i, j);
            if net.has_edge(i, j) {
                let di = delta_cost(&mut work, p, i, edge, EdgeAction::Remove)?;
                let dj = delta_cost(&mut work, p, j, edge, EdgeAction::Remove)?;
                let bad = |d: &Rat| *d < zero() || (*d == zero() && opts.removal_tie_violates);
                if bad(&di) || bad(&dj) {
                    let mut actors = Vec::new();
                    let mut deltas = Vec::new();
                    if bad(&di) {
                        actors.push(i);
                        deltas.push(di);
                    }
                    if bad(&dj) {
                        actors.push(j);
                        deltas.push(dj);
                    }
                    violations.push(Violation {
                        edge,
                        action: EdgeAction::Remove,
                        actors,
                        deltas,
                    });
                }
            } else {
                let di = delta_cost(&mut work, p, i, edge, EdgeAction::Add)?;
                let dj = delta_cost(&mut work, p, j, edge, EdgeAction::Add)?;
                // Stable on this pair iff at least one endpoint strictly
                // objects (delta > 0).
                if !(di > zero() || dj > zero()) {
                    violations.push(Violation {
                        edge,
                        action: EdgeAction::Add,
                        actors: vec![i, j],
                        deltas: vec![di, dj],
                    });
                }
            }
        }
    }
    Ok(StabilityReport::from_violations(violations))
}

/// Transfer corollary: a link exists iff the combined delta of forming it is
/// negative; equivalently, stability requires every present edge to have a
/// non-negative combined removal delta and every absent edge a non-negative
/// combined addition delta.
pub fn is_pairwise_stable_with_transfers(
    net: &Network,
    p: &CostParams,
) -> Result<StabilityReport, Error> {
    is_pairwise_stable_with_transfers_opts(net, p, StabilityOptions::default())
}

pub fn is_pairwise_stable_with_transfers_opts(
    net: &Network,
    p: &CostParams,
    opts: StabilityOptions,
) -> Result<StabilityReport, Error> {
    let mut work = net.clone();
    let mut violations = Vec::new();
    for i in net.nodes() {
        for j in net.nodes().skip(i.0 + 1) {
            let edge = (i, j);
            let action = if net.has_edge(i, j) {
                EdgeAction::Remove
            } else {
                EdgeAction::Add
            };
            let di = delta_cost(&mut work, p, i, edge, action)?;
            let dj = delta_cost(&mut work, p, j, edge, action)?;
            let combined = di + dj;
            let bad = combined < zero() || (combined == zero() && !opts.transfer_tie_stable);
            if bad {
                violations.push(Violation {
                    edge,
                    action,
                    actors: vec![i, j],
                    deltas: vec![di, dj],
                });
            }
        }
    }
    Ok(StabilityReport::from_violations(violations))
}

/// True iff every pair of majors is directly linked (vacuous below 2 majors).
pub fn check_type_a_clique(net: &Network) -> bool {
    let majors: Vec<PlayerId> = net.majors().collect();
    majors
        .iter()
        .enumerate()
        .all(|(k, &u)| majors[k + 1..].iter().all(|&v| net.has_edge(u, v)))
}

pub const ENUMERATION_GUARD: usize = 7;

#[derive(Debug, Clone)]
pub struct StableWitness {
    pub net: Network,
    pub cost: Rat,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub stable: Vec<StableWitness>,
    pub optimal_net: Network,
    pub s_optimal: Rat,
    pub total_graphs: u64,
}

/// Checks every labeled graph on n_a majors (ids 0..n_a) + n_b minors against
/// the selected stability predicate; also returns the unconstrained social
/// cost minimizer. Deterministic: graphs are visited in edge-mask order.
pub fn enumerate_pairwise_stable(
    n_a: usize,
    n_b: usize,
    p: &CostParams,
    transfers: bool,
) -> Result<Enumeration, Error> {
    enumerate_with_guard(n_a, n_b, p, transfers, ENUMERATION_GUARD)
}

pub fn enumerate_with_guard(
    n_a: usize,
    n_b: usize,
    p: &CostParams,
    transfers: bool,
    guard: usize,
) -> Result<Enumeration, Error> {
    let n = n_a + n_b;
    if n > guard {
        return Err(Error::SizeGuard { n, max: guard });
    }
    if n == 0 {
        return Err(Error::EmptySet);
    }
    p.validate()?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let total: u64 = 1u64 << pairs.len();
    let mut stable = Vec::new();
    let mut best: Option<(Rat, Network)> = None;
    for mask in 0..total {
        let mut net = Network::with_counts(n_a, n_b);
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                net.add_edge(PlayerId(i), PlayerId(j))?;
            }
        }
        let cost = social_cost(&net, p)?;
        if best.as_ref().map_or(true, |(c, _)| cost < *c) {
            best = Some((cost, net.clone()));
        }
        let report = if transfers {
            is_pairwise_stable_with_transfers(&net, p)?
        } else {
            is_pairwise_stable(&net, p)?
        };
        if report.stable {
            stable.push(StableWitness { net, cost });
        }
    }
    let (s_optimal, optimal_net) = best.expect("at least the empty graph was scored");
    Ok(Enumeration {
        stable,
        optimal_net,
        s_optimal,
        total_graphs: total,
    })
}

/// The social-cost minimizer without stability constraints: an A-clique with
/// every minor attached to one designated major when (A+1)/2 <= c, otherwise
/// every minor attached to every major.
pub fn optimal_bare_network(p: &CostParams, n_a: usize, n_b: usize) -> Result<Network, Error> {
    if n_a == 0 {
        return Err(Error::BadArgument(
            "the optimal construction needs at least one major".into(),
        ));
    }
    let mut net = Network::with_counts(n_a, n_b);
    for i in 0..n_a {
        for j in i + 1..n_a {
            net.add_edge(PlayerId(i), PlayerId(j))?;
        }
    }
    let hub_only = (p.a + int(1)) / int(2) <= p.c();
    for b in n_a..n_a + n_b {
        if hub_only {
            net.add_edge(PlayerId(0), PlayerId(b))?;
        } else {
            for a in 0..n_a {
                net.add_edge(PlayerId(a), PlayerId(b))?;
            }
        }
    }
    Ok(net)
}

/// The survivable optimum that is also stable for 1 < c_A < A/2 at delta = 1:
/// an A-clique with every minor linked to the same two designated majors.
pub fn optimal_reliable_stable_network(
    p: &CostParams,
    n_a: usize,
    n_b: usize,
) -> Result<Network, Error> {
    if n_a < 2 {
        return Err(Error::BadArgument(
            "two majors are needed for disjoint paths".into(),
        ));
    }
    if p.mode != CostMode::Reliable || !p.tau {
        return Err(Error::BadArgument(
            "the reliable optimum is defined for mode=reliable, tau=1".into(),
        ));
    }
    let mut net = Network::with_counts(n_a, n_b);
    for i in 0..n_a {
        for j in i + 1..n_a {
            net.add_edge(PlayerId(i), PlayerId(j))?;
        }
    }
    for b in n_a..n_a + n_b {
        net.add_edge(PlayerId(0), PlayerId(b))?;
        net.add_edge(PlayerId(1), PlayerId(b))?;
    }
    Ok(net)
}

#[derive(Debug, Clone, Serialize)]
pub struct PriceReport {
    pub params: CostParams,
    pub n_a: usize,
    pub n_b: usize,
    pub transfers: bool,
    pub total_graphs: u64,
    pub stable_count: u64,
    #[serde(with = "rat_serde")]
    pub s_optimal: Rat,
    #[serde(with = "opt_rat_serde")]
    pub s_best_stable: Option<Rat>,
    #[serde(with = "opt_rat_serde")]
    pub s_worst_stable: Option<Rat>,
    #[serde(with = "opt_rat_serde")]
    pub pos: Option<Rat>,
    #[serde(with = "opt_rat_serde")]
    pub poa: Option<Rat>,
    #[serde(with = "opt_rat_serde")]
    pub por: Option<Rat>,
    /// The worst stable social cost is dominated by a Q penalty term
    /// (the finite stand-in for the paper's unbounded ratio).
    pub q_dominated: bool,
    pub optimal_graph6: String,
    pub best_witness_graph6: Option<String>,
    pub worst_witness_graph6: Option<String>,
}

pub fn price_report(
    p: &CostParams,
    n_a: usize,
    n_b: usize,
    transfers: bool,
) -> Result<PriceReport, Error> {
    price_report_with_guard(p, n_a, n_b, transfers, ENUMERATION_GUARD)
}

pub fn price_report_with_guard(
    p: &CostParams,
    n_a: usize,
    n_b: usize,
    transfers: bool,
    guard: usize,
) -> Result<PriceReport, Error> {
    let e = enumerate_with_guard(n_a, n_b, p, transfers, guard)?;
    let mut best: Option<&StableWitness> = None;
    let mut worst: Option<&StableWitness> = None;
    for w in &e.stable {
        if best.map_or(true, |b| w.cost < b.cost) {
            best = Some(w);
        }
        if worst.map_or(true, |b| w.cost > b.cost) {
            worst = Some(w);
        }
    }
    let s_best = best.map(|w| w.cost);
    let s_worst = worst.map(|w| w.cost);
    Ok(PriceReport {
        params: *p,
        n_a,
        n_b,
        transfers,
        total_graphs: e.total_graphs,
        stable_count: e.stable.len() as u64,
        s_optimal: e.s_optimal,
        s_best_stable: s_best,
        s_worst_stable: s_worst,
        pos: s_best.map(|b| b / e.s_optimal),
        poa: s_worst.map(|w| w / e.s_optimal),
        por: None,
        q_dominated: s_worst.map_or(false, |w| w >= p.q),
        optimal_graph6: graph6(&e.optimal_net),
        best_witness_graph6: best.map(|w| graph6(&w.net)),
        worst_witness_graph6: worst.map(|w| graph6(&w.net)),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PorReport {
    pub reliable: PriceReport,
    pub bare: PriceReport,
    #[serde(with = "opt_rat_serde")]
    pub por: Option<Rat>,
    /// Whether the brute-force PoR agrees with the claimed "PoR < 1" sign;
    /// None when either side has no stable graph.
    pub agrees_with_claimed_lt_one: Option<bool>,
}

/// PoR = best stable reliable social cost / best stable bare social cost,
/// with identical (A, c_A, c_B) and player counts on both sides.
pub fn price_of_reliability(
    p: &CostParams,
    n_a: usize,
    n_b: usize,
    transfers: bool,
) -> Result<PorReport, Error> {
    if p.mode != CostMode::Reliable {
        return Err(Error::BadArgument(
            "price_of_reliability expects reliable-mode params".into(),
        ));
    }
    let mut bare_params = *p;
    bare_params.mode = CostMode::Bare;
    let mut reliable = price_report(p, n_a, n_b, transfers)?;
    let bare = price_report(&bare_params, n_a, n_b, transfers)?;
    let por = match (reliable.s_best_stable, bare.s_best_stable) {
        (Some(r), Some(b)) if b != zero() => Some(r / b),
        _ => None,
    };
    reliable.por = por;
    Ok(PorReport {
        agrees_with_claimed_lt_one: por.map(|r| r < int(1)),
        por,
        reliable,
        bare,
    })
}

/// graph6 encoding of the edge set (node count <= 62).
pub fn graph6(net: &Network) -> String {
    let n = net.n();
    assert!(n <= 62, "graph6 small-format limit");
    let mut bits: Vec<bool> = Vec::new();
    for j in 1..n {
        for i in 0..j {
            bits.push(net.has_edge(PlayerId(i), PlayerId(j)));
        }
    }
    while bits.len() % 6 != 0 {
        bits.push(false);
    }
    let mut out = String::new();
    out.push((n as u8 + 63) as char);
    for chunk in bits.chunks(6) {
        let mut v = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                v |= 1 << (5 - k);
            }
        }
        out.push((v + 63) as char);
    }
    out
}
