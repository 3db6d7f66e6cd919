//! The three player cost functions (bare, reliable, monetary-adjusted),
//! per-link deltas, social cost, and the line-shortcut closed form.
//!
//! Everything here is exact rational arithmetic; stability predicates compare
//! these values with strict inequalities, so no floats are allowed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{
    all_distances_from, min_disjoint_pair, Network, PlayerClass, PlayerId,
};
use crate::rat::{int, rat_serde, zero, Rat};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostMode {
    Bare,
    Reliable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostParams {
    /// Relative importance of class-A players in distance sums; > 1.
    #[serde(with = "rat_serde")]
    pub a: Rat,
    /// Per-link cost for a class-A endpoint.
    #[serde(with = "rat_serde")]
    pub c_a: Rat,
    /// Per-link cost for a class-B endpoint; c_b >= c_a.
    #[serde(with = "rat_serde")]
    pub c_b: Rat,
    /// Backup-path weight in (0, 1].
    #[serde(with = "rat_serde")]
    pub delta: Rat,
    /// Symmetric reliability: true means every player needs a disjoint pair
    /// to every other player; false restricts the requirement to majors.
    pub tau: bool,
    /// Penalty dominating every achievable finite cost.
    #[serde(with = "rat_serde")]
    pub q: Rat,
    pub mode: CostMode,
}

impl CostParams {
    /// Default penalty: 10^3 * n^2 * (A + c_B), comfortably above any finite
    /// cost reachable at instance size n.
    pub fn default_q(n: usize, a: &Rat, c_b: &Rat) -> Rat {
        int(1000) * int((n * n) as i64) * (*a + *c_b)
    }

    pub fn bare(a: Rat, c_a: Rat, c_b: Rat, n: usize) -> Self {
        CostParams {
            a,
            c_a,
            c_b,
            delta: int(1),
            tau: true,
            q: Self::default_q(n, &a, &c_b),
            mode: CostMode::Bare,
        }
    }

    pub fn reliable(a: Rat, c_a: Rat, c_b: Rat, delta: Rat, tau: bool, n: usize) -> Self {
        CostParams {
            a,
            c_a,
            c_b,
            delta,
            tau,
            q: Self::default_q(n, &a, &c_b),
            mode: CostMode::Reliable,
        }
    }

    /// c = (c_A + c_B) / 2.
    pub fn c(&self) -> Rat {
        (self.c_a + self.c_b) / int(2)
    }

    pub fn link_cost(&self, class: PlayerClass) -> Rat {
        match class {
            PlayerClass::MajorA => self.c_a,
            PlayerClass::MinorB => self.c_b,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.a <= int(1) {
            return Err(Error::BadArgument("A must be > 1".into()));
        }
        if self.c_a <= zero() || self.c_b < self.c_a {
            return Err(Error::BadArgument("need 0 < c_A <= c_B".into()));
        }
        if self.delta <= zero() || self.delta > int(1) {
            return Err(Error::BadArgument("delta must lie in (0, 1]".into()));
        }
        if self.q <= zero() {
            return Err(Error::BadArgument("Q must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostBreakdown {
    #[serde(with = "rat_serde")]
    pub link_cost: Rat,
    #[serde(with = "rat_serde")]
    pub major_distance_cost: Rat,
    #[serde(with = "rat_serde")]
    pub minor_distance_cost: Rat,
    #[serde(with = "rat_serde")]
    pub penalty: Rat,
    #[serde(with = "rat_serde")]
    pub total: Rat,
}

impl CostBreakdown {
    fn finish(mut self) -> Self {
        self.total = self.link_cost + self.major_distance_cost + self.minor_distance_cost
            + self.penalty;
        self
    }

    pub fn has_penalty(&self) -> bool {
        self.penalty > zero()
    }
}

/// deg(i)*c_class(i) + A*sum d(i, majors) + sum d(i, minors); unreachable
/// targets are dropped from the sums and each contributes a Q penalty (so
/// reconnecting any one of them is always a strict improvement).
pub fn bare_cost(net: &Network, p: &CostParams, i: PlayerId) -> Result<CostBreakdown, Error> {
    let class = net.class(i)?;
    let dists = all_distances_from(net, i)?;
    let mut out = CostBreakdown {
        link_cost: int(net.degree(i)? as i64) * p.link_cost(class),
        major_distance_cost: zero(),
        minor_distance_cost: zero(),
        penalty: zero(),
        total: zero(),
    };
    for j in net.nodes() {
        if j == i {
            continue;
        }
        match dists[j.0] {
            Some(d) => {
                let d = int(d as i64);
                if net.is_major(j) {
                    out.major_distance_cost += p.a * d;
                } else {
                    out.minor_distance_cost += d;
                }
            }
            None => out.penalty += p.q,
        }
    }
    Ok(out.finish())
}

/// Survivability-constrained cost: every required target contributes
/// (d + delta*d')/(1+delta) weighted by A (majors) or tau (minors); minors
/// fall back to plain distance when tau = 0. Each missing pair (or missing
/// plain distance) contributes a Q penalty.
pub fn reliable_cost(net: &Network, p: &CostParams, i: PlayerId) -> Result<CostBreakdown, Error> {
    let class = net.class(i)?;
    let one_plus_delta = int(1) + p.delta;
    let mut out = CostBreakdown {
        link_cost: int(net.degree(i)? as i64) * p.link_cost(class),
        major_distance_cost: zero(),
        minor_distance_cost: zero(),
        penalty: zero(),
        total: zero(),
    };
    let plain = all_distances_from(net, i)?;
    // At delta = 1 only the combined pair length matters, so a single
    // reusable flow solver answers every target much faster than the
    // general per-target routine.
    let mut fast = if p.delta == int(1) {
        Some(crate::graph::PairTotalSolver::new(net))
    } else {
        None
    };
    let mut pair_weighted = |j: PlayerId| -> Result<Option<Rat>, Error> {
        if let Some(solver) = fast.as_mut() {
            Ok(solver.pair_total(i, j).map(|total| int(total as i64)))
        } else {
            Ok(min_disjoint_pair(net, i, j, &p.delta)?.map(|pair| pair.weighted(&p.delta)))
        }
    };
    // An unreachable required target costs 2Q (both the route and its backup
    // are missing) and stacks per target, so every reconnecting link pays
    // off strictly. A reachable target that merely lacks a disjoint backup
    // raises a single flat Q for the node, shared across all such targets:
    // completing one backup pair while others are still missing brings no
    // relief, which is what keeps single-gateway equilibria in place under
    // asymmetric requirements.
    let mut backup_missing = false;
    for j in net.nodes() {
        if j == i {
            continue;
        }
        if net.is_major(j) {
            match (pair_weighted(j)?, plain[j.0]) {
                (Some(w), _) => out.major_distance_cost += p.a * w / one_plus_delta,
                (None, None) => out.penalty += p.q + p.q,
                (None, Some(d)) => {
                    // The route is real even while its backup is missing:
                    // only the d' part of the term is replaced by the flat Q.
                    out.major_distance_cost += p.a * int(d as i64) / one_plus_delta;
                    backup_missing = true;
                }
            }
        } else if p.tau {
            match (pair_weighted(j)?, plain[j.0]) {
                (Some(w), _) => out.minor_distance_cost += w / one_plus_delta,
                (None, None) => out.penalty += p.q + p.q,
                (None, Some(d)) => {
                    out.minor_distance_cost += int(d as i64) / one_plus_delta;
                    backup_missing = true;
                }
            }
        } else {
            match plain[j.0] {
                Some(d) => out.minor_distance_cost += int(d as i64),
                None => out.penalty += p.q,
            }
        }
    }
    if backup_missing {
        out.penalty += p.q;
    }
    Ok(out.finish())
}

/// Mode dispatch.
pub fn node_cost(net: &Network, p: &CostParams, i: PlayerId) -> Result<CostBreakdown, Error> {
    match p.mode {
        CostMode::Bare => bare_cost(net, p, i),
        CostMode::Reliable => reliable_cost(net, p, i),
    }
}

/// Directed payments (payer, payee) -> amount, attached to existing edges.
pub type Ledger = BTreeMap<(PlayerId, PlayerId), Rat>;

/// node_cost(i) + sum over incident edges of (paid - received).
pub fn monetary_cost(
    net: &Network,
    ledger: &Ledger,
    p: &CostParams,
    i: PlayerId,
) -> Result<Rat, Error> {
    let mut total = node_cost(net, p, i)?.total;
    for (&(payer, payee), amount) in ledger {
        if payer != i && payee != i {
            continue;
        }
        if !net.has_edge(payer, payee) {
            return Err(Error::BadArgument(format!(
                "ledger payment on missing edge ({payer}, {payee})"
            )));
        }
        if payer == i {
            total += *amount;
        } else {
            total -= *amount;
        }
    }
    Ok(total)
}

pub fn social_cost(net: &Network, p: &CostParams) -> Result<Rat, Error> {
    let mut total = zero();
    for i in net.nodes() {
        total += node_cost(net, p, i)?.total;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeAction {
    Add,
    Remove,
}

/// C(i, E after) - C(i, E before), by evaluating both states.
/// The network is mutated and restored; it is unchanged on return.
pub fn delta_cost(
    net: &mut Network,
    p: &CostParams,
    i: PlayerId,
    edge: (PlayerId, PlayerId),
    action: EdgeAction,
) -> Result<Rat, Error> {
    let before = node_cost(net, p, i)?.total;
    apply(net, edge, action)?;
    let after = node_cost(net, p, i)?.total;
    apply(net, edge, action.inverse())?;
    Ok(after - before)
}

/// Cost of i after a hypothetical edge change, without the "before" pass.
pub fn cost_after(
    net: &mut Network,
    p: &CostParams,
    i: PlayerId,
    edge: (PlayerId, PlayerId),
    action: EdgeAction,
) -> Result<CostBreakdown, Error> {
    apply(net, edge, action)?;
    let out = node_cost(net, p, i);
    apply(net, edge, action.inverse())?;
    out
}

impl EdgeAction {
    pub fn inverse(self) -> EdgeAction {
        match self {
            EdgeAction::Add => EdgeAction::Remove,
            EdgeAction::Remove => EdgeAction::Add,
        }
    }
}

fn apply(net: &mut Network, edge: (PlayerId, PlayerId), action: EdgeAction) -> Result<(), Error> {
    match action {
        EdgeAction::Add => net.add_edge(edge.0, edge.1),
        EdgeAction::Remove => net.remove_edge(edge.0, edge.1),
    }
}

/// Distance-sum reduction at an end node when the two ends of a k-node line
/// are joined: (k(k-2) + (k mod 2)) / 4.
pub fn line_shortcut_reduction(k: u32) -> Result<Rat, Error> {
    if k < 2 {
        return Err(Error::BadArgument("line shortcut needs k >= 2".into()));
    }
    let k = k as i64;
    Ok(Rat::new(k * (k - 2) + (k % 2), 4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlayerClass::{MajorA, MinorB};
    use crate::rat::rat;

    fn leaf_net() -> Network {
        // A-node 0 linked to B-hub 1; B-leaves 2, 3 linked to the hub.
        Network::from_edges(
            vec![MajorA, MinorB, MinorB, MinorB],
            &[(0, 1), (1, 2), (1, 3)],
        )
        .unwrap()
    }

    #[test]
    fn bare_leaf_hand_value() {
        let net = leaf_net();
        let p = CostParams::bare(int(3), int(2), int(2), 4);
        let b = bare_cost(&net, &p, PlayerId(2)).unwrap();
        // 1 link * 2 + A * d(2,0)=2 + d(2,1)=1 + d(2,3)=2.
        assert_eq!(b.link_cost, int(2));
        assert_eq!(b.major_distance_cost, int(6));
        assert_eq!(b.minor_distance_cost, int(3));
        assert_eq!(b.total, int(11));
        assert!(!b.has_penalty());
    }

    #[test]
    fn bare_single_node_is_zero() {
        let net = Network::new(vec![MinorB]);
        let p = CostParams::bare(int(3), int(2), int(2), 1);
        assert_eq!(bare_cost(&net, &p, PlayerId(0)).unwrap().total, zero());
    }

    #[test]
    fn bare_disconnected_pair_penalized() {
        let net = Network::new(vec![MinorB, MinorB]);
        let p = CostParams::bare(int(3), int(2), int(2), 2);
        let b = bare_cost(&net, &p, PlayerId(0)).unwrap();
        assert_eq!(b.penalty, p.q);
        assert_eq!(b.total, p.q);
    }

    #[test]
    fn reliable_triangle_hand_value() {
        let net =
            Network::from_edges(vec![MajorA, MajorA, MajorA], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = CostParams::reliable(int(10), int(4), int(4), int(1), true, 3);
        for i in net.nodes() {
            let b = reliable_cost(&net, &p, i).unwrap();
            // 2*4 + (10/2) * ((1+2) + (1+2)) = 38 for each corner.
            assert_eq!(b.total, int(38));
        }
    }

    #[test]
    fn reliable_single_path_minor_penalized_tau0() {
        // B-leaf 2 hangs off an A-pair; only one path to each major.
        let net = Network::from_edges(vec![MajorA, MajorA, MinorB], &[(0, 1), (1, 2)]).unwrap();
        let p = CostParams::reliable(int(10), int(3), int(4), int(1), false, 3);
        let b = reliable_cost(&net, &p, PlayerId(2)).unwrap();
        // Both majors are reachable but lack disjoint backups: the missing
        // backups share a single flat Q.
        assert_eq!(b.penalty, p.q);
    }

    #[test]
    fn tau_toggle_no_change_when_pairs_degenerate() {
        // 4-cycle of B's: every pair has d' = d = 2 or (1, 3)... use opposite
        // pairs only by checking total cost equality on a K4 where d = d' = 1
        // fails; instead verify the collapse identity (d + delta*d)/(1+delta)
        // = d via a 4-cycle's opposite corners contribution.
        let p_sym = CostParams::reliable(int(2), int(1), int(1), int(1), true, 4);
        let net = Network::from_edges(
            vec![MinorB, MinorB, MinorB, MinorB],
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
        )
        .unwrap();
        let b = reliable_cost(&net, &p_sym, PlayerId(0)).unwrap();
        // Opposite corner: (2+2)/2 = 2 exactly the bare distance; adjacent
        // corners: (1+3)/2 = 2 != 1, so only the degenerate pair collapses.
        assert_eq!(b.minor_distance_cost, int(6));
    }

    #[test]
    fn monetary_shifts_cancel() {
        let net = leaf_net();
        let p = CostParams::bare(int(3), int(2), int(2), 4);
        let mut ledger = Ledger::new();
        ledger.insert((PlayerId(2), PlayerId(1)), int(5));
        let hub = monetary_cost(&net, &ledger, &p, PlayerId(1)).unwrap();
        let leaf = monetary_cost(&net, &ledger, &p, PlayerId(2)).unwrap();
        assert_eq!(leaf, node_cost(&net, &p, PlayerId(2)).unwrap().total + int(5));
        assert_eq!(hub, node_cost(&net, &p, PlayerId(1)).unwrap().total - int(5));
        let total: Rat = net
            .nodes()
            .map(|i| monetary_cost(&net, &ledger, &p, i).unwrap())
            .sum();
        assert_eq!(total, social_cost(&net, &p).unwrap());
    }

    #[test]
    fn monetary_rejects_payment_on_missing_edge() {
        let net = leaf_net();
        let p = CostParams::bare(int(3), int(2), int(2), 4);
        let mut ledger = Ledger::new();
        ledger.insert((PlayerId(2), PlayerId(3)), int(1));
        assert!(monetary_cost(&net, &ledger, &p, PlayerId(2)).is_err());
    }

    #[test]
    fn social_cost_star_on_one_major() {
        // A-clique of 2 plus three B's on major 0: hand value 70.
        let net = Network::from_edges(
            vec![MajorA, MajorA, MinorB, MinorB, MinorB],
            &[(0, 1), (0, 2), (0, 3), (0, 4)],
        )
        .unwrap();
        let p = CostParams::bare(int(3), int(2), int(2), 5);
        assert_eq!(social_cost(&net, &p).unwrap(), int(70));
    }

    #[test]
    fn delta_cost_roundtrip_and_sign() {
        let mut net = Network::from_edges(vec![MinorB, MinorB, MinorB], &[(0, 1), (1, 2)]).unwrap();
        let p = CostParams::bare(int(3), int(2), int(2), 3);
        let snapshot = net.clone();
        let d_add = delta_cost(&mut net, &p, PlayerId(0), (PlayerId(0), PlayerId(2)), EdgeAction::Add)
            .unwrap();
        // Only d(0,2) improves 2 -> 1 at link cost 2.
        assert_eq!(d_add, int(1));
        assert_eq!(net, snapshot);
        net.add_edge(PlayerId(0), PlayerId(2)).unwrap();
        let d_rm = delta_cost(
            &mut net,
            &p,
            PlayerId(0),
            (PlayerId(0), PlayerId(2)),
            EdgeAction::Remove,
        )
        .unwrap();
        assert_eq!(d_add + d_rm, zero());
    }

    #[test]
    fn delta_cost_checks_preconditions() {
        let mut net = Network::from_edges(vec![MinorB, MinorB], &[(0, 1)]).unwrap();
        let p = CostParams::bare(int(3), int(2), int(2), 2);
        assert!(delta_cost(&mut net, &p, PlayerId(0), (PlayerId(0), PlayerId(1)), EdgeAction::Add)
            .is_err());
        net.remove_edge(PlayerId(0), PlayerId(1)).unwrap();
        assert!(delta_cost(
            &mut net,
            &p,
            PlayerId(0),
            (PlayerId(0), PlayerId(1)),
            EdgeAction::Remove
        )
        .is_err());
    }

    #[test]
    fn shortcut_formula_values() {
        assert_eq!(line_shortcut_reduction(2).unwrap(), zero());
        assert_eq!(line_shortcut_reduction(4).unwrap(), int(2));
        assert_eq!(line_shortcut_reduction(7).unwrap(), int(9));
        assert!(line_shortcut_reduction(1).is_err());
    }

    #[test]
    fn params_validation() {
        let mut p = CostParams::bare(int(3), int(2), int(2), 4);
        assert!(p.validate().is_ok());
        assert_eq!(p.c(), int(2));
        p.a = int(1);
        assert!(p.validate().is_err());
        let mut p = CostParams::reliable(int(3), int(2), int(1), int(1), true, 4);
        assert!(p.validate().is_err()); // c_b < c_a
        p.c_b = int(2);
        p.delta = rat(11, 10);
        assert!(p.validate().is_err());
    }
}
