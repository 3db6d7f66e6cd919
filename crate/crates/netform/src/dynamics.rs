//! Turn-based evolution of the formation game: greedy bilateral link
//! formation (Rule #1), the two improvement disciplines (Rule #2a with
//! transient detach-and-reattach plans, Rule #2b strict per-move
//! improvement), monetary partner selection and pricing, arrival schedules,
//! convergence detection, and the phase-state classifier.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cost::{
    delta_cost, monetary_cost, node_cost, social_cost, CostMode, CostParams, EdgeAction, Ledger,
};
use crate::graph::{Network, PlayerClass, PlayerId};
use crate::rat::{int, opt_rat_serde, rat_serde, zero, Rat};
use crate::Error;

#[derive(Debug, Clone)]
pub struct GameState {
    pub net: Network,
    pub ledger: Ledger,
    pub turn: u64,
}

impl GameState {
    pub fn new() -> Self {
        GameState {
            net: Network::new(Vec::new()),
            ledger: Ledger::new(),
            turn: 0,
        }
    }

    pub fn monetary_cost(&self, p: &CostParams, i: PlayerId) -> Result<Rat, Error> {
        monetary_cost(&self.net, &self.ledger, p, i)
    }
}

impl Default for GameState {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DynRule {
    /// Transient increases and self-disconnection allowed within a turn.
    Rule2a,
    /// Every single move strictly reduces the actor's cost.
    Rule2b,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    /// PO#1: minimize delta_i + min(delta_j, 0).
    EfficientPo1,
    /// PO#2: among equal-utility options pick the cheapest quote.
    CheapestEquivalentPo2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pricing {
    /// Quote exactly the payee's loss (or zero).
    Efficient,
    /// Surplus-extracting quote against the payer's worst alternative.
    Strategic,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheduler {
    /// Majors arrive first, then minors; fixed id-order passes.
    RoundRobin,
    /// Seeded shuffle of the arrival multiset; each post-arrival pass is a
    /// fresh seeded shuffle.
    UniformRandom { seed: u64 },
    /// Explicit arrival class order, optionally followed by explicit turns;
    /// then id-order passes to convergence.
    Scripted {
        arrivals: Vec<PlayerClass>,
        turns: Vec<usize>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct DynamicsConfig {
    pub params: CostParams,
    pub rule: DynRule,
    pub transfers: bool,
    pub preference: Preference,
    pub pricing: Pricing,
    pub scheduler: Scheduler,
    pub max_rounds: usize,
}

impl DynamicsConfig {
    pub fn basic(params: CostParams, rule: DynRule, scheduler: Scheduler) -> Self {
        DynamicsConfig {
            params,
            rule,
            transfers: false,
            preference: Preference::EfficientPo1,
            pricing: Pricing::Efficient,
            scheduler,
            max_rounds: 50,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct MoveRecord {
    pub player: PlayerId,
    pub edge: (PlayerId, PlayerId),
    pub action: EdgeAction,
    #[serde(with = "opt_rat_serde")]
    pub payment: Option<Rat>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq, Default)]
pub struct ReliableCoords {
    pub s1: usize,
    pub s2: usize,
    pub d1: usize,
    pub d2: usize,
    pub l: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq, Default)]
pub struct PhaseCoords {
    pub s_size: usize,
    pub l_size: usize,
    pub d_size: usize,
    /// 1..4 from the nullcline signs; None when the state does not match the
    /// star template.
    pub region: Option<u8>,
    pub reliable: Option<ReliableCoords>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TurnRecord {
    pub turn: u64,
    pub player: PlayerId,
    pub class: PlayerClass,
    pub arrived: bool,
    pub moves: Vec<MoveRecord>,
    #[serde(with = "rat_serde")]
    pub social_cost: Rat,
    pub phase: PhaseCoords,
    pub budget_hit: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trace {
    pub arrival_order: Vec<PlayerClass>,
    pub turns: Vec<TurnRecord>,
    pub converged: bool,
    /// Post-arrival passes that contained at least one move.
    pub active_rounds: usize,
    pub budget_hit: bool,
    #[serde(with = "rat_serde")]
    pub final_social_cost: Rat,
    pub final_phase: PhaseCoords,
}

fn actor_cost(state: &GameState, p: &CostParams, transfers: bool, i: PlayerId) -> Result<Rat, Error> {
    if transfers {
        state.monetary_cost(p, i)
    } else {
        Ok(node_cost(&state.net, p, i)?.total)
    }
}

fn paid(ledger: &Ledger, payer: PlayerId, payee: PlayerId) -> Rat {
    ledger.get(&(payer, payee)).copied().unwrap_or_else(zero)
}

/// Would `counterparty` agree to the link right now? Strictly negative net
/// delta, or an exactly compensating positive payment.
pub fn greedy_accept(
    state: &GameState,
    counterparty: PlayerId,
    edge: (PlayerId, PlayerId),
    payment: Option<&Rat>,
    p: &CostParams,
) -> Result<bool, Error> {
    let mut net = state.net.clone();
    let topo = delta_cost(&mut net, p, counterparty, edge, EdgeAction::Add)?;
    let pay = payment.copied().unwrap_or_else(zero);
    let delta = topo - pay;
    Ok(delta < zero() || (delta == zero() && pay > zero()))
}

/// Quote for `payer` to form (payer, payee).
pub fn price_quote(
    state: &GameState,
    payer: PlayerId,
    payee: PlayerId,
    pricing: Pricing,
    p: &CostParams,
) -> Result<Rat, Error> {
    if state.net.has_edge(payer, payee) {
        return Err(Error::BadArgument("cannot quote an existing edge".into()));
    }
    let mut net = state.net.clone();
    let edge = (payer, payee);
    let d_payee = delta_cost(&mut net, p, payee, edge, EdgeAction::Add)?;
    match pricing {
        Pricing::Efficient => Ok(d_payee.max(zero())),
        Pricing::Strategic => {
            // The payer's worst alternative counterparty j* sets the
            // reference utility; the payee extracts the excess.
            let mut worst: Option<(Rat, Rat)> = None; // (d_payer_j, d_j)
            for j in state.net.nodes() {
                if j == payer || state.net.has_edge(payer, j) {
                    continue;
                }
                let dp = delta_cost(&mut net, p, payer, (payer, j), EdgeAction::Add)?;
                let dj = delta_cost(&mut net, p, j, (payer, j), EdgeAction::Add)?;
                if worst.as_ref().map_or(true, |(w, _)| dp > *w) {
                    worst = Some((dp, dj));
                }
            }
            let (dp_star, dj_star) =
                worst.ok_or_else(|| Error::BadArgument("no counterparty to price against".into()))?;
            let p_star = (-dj_star).max(zero());
            let d_payer = delta_cost(&mut net, p, payer, edge, EdgeAction::Add)?;
            let alpha = d_payer - (dp_star + p_star);
            Ok(zero().max(alpha).max(-d_payee))
        }
    }
}

/// Monetary partner selection. Returns (counterparty, quote, actor metric).
pub fn choose_partner(
    state: &GameState,
    player: PlayerId,
    preference: Preference,
    pricing: Pricing,
    p: &CostParams,
    rng: &mut impl Rng,
) -> Result<Option<(PlayerId, Rat, Rat)>, Error> {
    let mut net = state.net.clone();
    let candidates: Vec<PlayerId> = state
        .net
        .nodes()
        .filter(|&j| j != player && !state.net.has_edge(player, j))
        .collect();
    match preference {
        Preference::EfficientPo1 => {
            let mut best: Option<(Rat, PlayerId, Rat)> = None;
            for j in candidates {
                let edge = (player, j);
                let di = delta_cost(&mut net, p, player, edge, EdgeAction::Add)?;
                let dj = delta_cost(&mut net, p, j, edge, EdgeAction::Add)?;
                let metric = di + dj.min(zero());
                if best.as_ref().map_or(true, |(m, _, _)| metric < *m) {
                    best = Some((metric, j, dj));
                }
            }
            match best {
                Some((metric, j, _)) if metric < zero() => {
                    let quote = price_quote(state, player, j, pricing, p)?;
                    Ok(Some((j, quote, metric)))
                }
                _ => Ok(None),
            }
        }
        Preference::CheapestEquivalentPo2 => {
            let mut scored: Vec<(Rat, Rat, PlayerId)> = Vec::new(); // (utility, quote, j)
            for j in candidates {
                let edge = (player, j);
                let di = delta_cost(&mut net, p, player, edge, EdgeAction::Add)?;
                let quote = price_quote(state, player, j, pricing, p)?;
                scored.push((di + quote, quote, j));
            }
            let Some(best_util) = scored.iter().map(|(u, _, _)| *u).min() else {
                return Ok(None);
            };
            if best_util >= zero() {
                return Ok(None);
            }
            let cheapest = scored
                .iter()
                .filter(|(u, _, _)| *u == best_util)
                .map(|(_, q, _)| *q)
                .min()
                .unwrap();
            let tied: Vec<&(Rat, Rat, PlayerId)> = scored
                .iter()
                .filter(|(u, q, _)| *u == best_util && *q == cheapest)
                .collect();
            let pick = tied[rng.gen_range(0..tied.len())];
            Ok(Some((pick.2, pick.1, pick.0)))
        }
    }
}

fn apply_move(state: &mut GameState, mv: &MoveRecord) -> Result<(), Error> {
    let (a, b) = mv.edge;
    match mv.action {
        EdgeAction::Add => {
            state.net.add_edge(a, b)?;
            if let Some(pay) = mv.payment {
                if pay != zero() {
                    let other = if mv.player == a { b } else { a };
                    state.ledger.insert((mv.player, other), pay);
                }
            }
        }
        EdgeAction::Remove => {
            state.net.remove_edge(a, b)?;
            state.ledger.remove(&(a, b));
            state.ledger.remove(&(b, a));
        }
    }
    Ok(())
}

struct Candidate {
    mv: MoveRecord,
    /// Actor's cost delta, payments included.
    delta: Rat,
}

/// Best single removal by actor delta (payments included), if any.
fn best_removal(
    state: &GameState,
    p: &CostParams,
    transfers: bool,
    i: PlayerId,
) -> Result<Option<Candidate>, Error> {
    let mut net = state.net.clone();
    let mut best: Option<Candidate> = None;
    for j in state.net.neighbors(i).collect::<Vec<_>>() {
        let edge = if i < j { (i, j) } else { (j, i) };
        let mut delta = delta_cost(&mut net, p, i, (i, j), EdgeAction::Remove)?;
        if transfers {
            delta = delta - paid(&state.ledger, i, j) + paid(&state.ledger, j, i);
        }
        if best.as_ref().map_or(true, |b| delta < b.delta) {
            best = Some(Candidate {
                mv: MoveRecord {
                    player: i,
                    edge,
                    action: EdgeAction::Remove,
                    payment: None,
                },
                delta,
            });
        }
    }
    Ok(best)
}

/// Best single accepted addition by actor delta (payments included), if any.
fn best_addition(
    state: &GameState,
    cfg: &DynamicsConfig,
    i: PlayerId,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Candidate>, Error> {
    let p = &cfg.params;
    if cfg.transfers {
        let Some((j, quote, _)) = choose_partner(state, i, cfg.preference, cfg.pricing, p, rng)?
        else {
            return Ok(None);
        };
        if !greedy_accept(state, j, (i, j), Some(&quote), p)? {
            return Ok(None);
        }
        let mut net = state.net.clone();
        let delta = delta_cost(&mut net, p, i, (i, j), EdgeAction::Add)? + quote;
        let edge = if i < j { (i, j) } else { (j, i) };
        Ok(Some(Candidate {
            mv: MoveRecord {
                player: i,
                edge,
                action: EdgeAction::Add,
                payment: Some(quote),
            },
            delta,
        }))
    } else {
        let mut net = state.net.clone();
        let before_i = node_cost(&net, p, i)?.total;
        let mut best: Option<Candidate> = None;
        for j in state.net.nodes() {
            if j == i || state.net.has_edge(i, j) {
                continue;
            }
            let before_j = node_cost(&net, p, j)?.total;
            net.add_edge(i, j)?;
            let after_j = node_cost(&net, p, j)?.total;
            let accepted = after_j < before_j;
            let delta = if accepted {
                node_cost(&net, p, i)?.total - before_i
            } else {
                zero()
            };
            net.remove_edge(i, j)?;
            if !accepted {
                continue;
            }
            if best.as_ref().map_or(true, |b| delta < b.delta) {
                let edge = if i < j { (i, j) } else { (j, i) };
                best = Some(Candidate {
                    mv: MoveRecord {
                        player: i,
                        edge,
                        action: EdgeAction::Add,
                        payment: None,
                    },
                    delta,
                });
            }
        }
        Ok(best)
    }
}

/// Rule #2b discipline: iterate strictly-improving single moves.
/// Returns (moves, budget_hit).
fn improve_loop(
    state: &mut GameState,
    cfg: &DynamicsConfig,
    i: PlayerId,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<MoveRecord>, bool), Error> {
    let mut moves = Vec::new();
    loop {
        if moves.len() >= budget {
            return Ok((moves, true));
        }
        let removal = best_removal(state, &cfg.params, cfg.transfers, i)?;
        let addition = best_addition(state, cfg, i, rng)?;
        let best = match (removal, addition) {
            (Some(r), Some(a)) => Some(if r.delta <= a.delta { r } else { a }),
            (r, a) => r.or(a),
        };
        match best {
            Some(c) if c.delta < zero() => {
                apply_move(state, &c.mv)?;
                moves.push(c.mv);
            }
            _ => return Ok((moves, false)),
        }
    }
}

/// Rule #2a discipline: compare the straightforward improvement plan against
/// a full detach-and-reattach plan and keep whichever ends cheaper for the
/// actor.
fn plan_turn(
    state: &mut GameState,
    cfg: &DynamicsConfig,
    i: PlayerId,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<MoveRecord>, bool), Error> {
    let p = &cfg.params;

    let mut stay_state = state.clone();
    let mut stay_rng = rng.clone();
    let (stay_moves, stay_budget) = improve_loop(&mut stay_state, cfg, i, budget, &mut stay_rng)?;
    let stay_cost = actor_cost(&stay_state, p, cfg.transfers, i)?;

    let mut det_state = state.clone();
    let mut det_rng = rng.clone();
    let mut det_moves: Vec<MoveRecord> = Vec::new();
    let mut det_budget = false;
    for j in det_state.net.neighbors(i).collect::<Vec<_>>() {
        let edge = if i < j { (i, j) } else { (j, i) };
        let mv = MoveRecord {
            player: i,
            edge,
            action: EdgeAction::Remove,
            payment: None,
        };
        apply_move(&mut det_state, &mv)?;
        det_moves.push(mv);
    }
    // Reattach greedily; while the actor still carries a Q penalty a couple
    // of non-improving bootstrap links are allowed (a lone link cannot form
    // a disjoint pair yet).
    let mut bootstrap_slack = 2;
    loop {
        if det_moves.len() >= budget {
            det_budget = true;
            break;
        }
        let Some(c) = best_addition(&det_state, cfg, i, &mut det_rng)? else {
            break;
        };
        let penalized = node_cost(&det_state.net, p, i)?.has_penalty();
        if c.delta < zero() {
            bootstrap_slack = 2;
            apply_move(&mut det_state, &c.mv)?;
            det_moves.push(c.mv);
        } else if penalized && bootstrap_slack > 0 {
            bootstrap_slack -= 1;
            apply_move(&mut det_state, &c.mv)?;
            det_moves.push(c.mv);
        } else {
            break;
        }
    }
    let det_cost = actor_cost(&det_state, p, cfg.transfers, i)?;

    if det_cost < stay_cost {
        *state = det_state;
        *rng = det_rng;
        Ok((det_moves, det_budget))
    } else {
        *state = stay_state;
        *rng = stay_rng;
        Ok((stay_moves, stay_budget))
    }
}

/// One turn of `player` under the configured rule. Returns the applied moves
/// and whether the per-turn budget was hit.
pub fn play_turn(
    state: &mut GameState,
    player: PlayerId,
    cfg: &DynamicsConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<MoveRecord>, bool), Error> {
    let budget = 2 * state.net.n().max(1);
    state.turn += 1;
    match cfg.rule {
        DynRule::Rule2b => improve_loop(state, cfg, player, budget, rng),
        DynRule::Rule2a => plan_turn(state, cfg, player, budget, rng),
    }
}

/// Star-template phase classifier for the bare dynamics.
pub fn classify_phase(state: &GameState, p: &CostParams) -> PhaseCoords {
    let net = &state.net;
    let minors: Vec<PlayerId> = net.minors().collect();
    let majors: Vec<PlayerId> = net.majors().collect();
    if minors.is_empty() {
        return PhaseCoords::default();
    }
    // Star center x: minor with the most minor neighbors, ties to lowest id.
    let b_degree = |b: &PlayerId| net.neighbors(*b).filter(|n| !net.is_major(*n)).count();
    let x = *minors
        .iter()
        .max_by(|a, b| b_degree(a).cmp(&b_degree(b)).then(b.0.cmp(&a.0)))
        .unwrap();
    // Hub k: first major (arrival = id order) adjacent to any minor.
    let k = majors
        .iter()
        .copied()
        .find(|&a| net.neighbors(a).any(|n| !net.is_major(n)));
    let mut s = Vec::new();
    let mut l = Vec::new();
    for &b in &minors {
        if b == x {
            continue;
        }
        let adj_x = net.has_edge(b, x);
        let adj_k = k.is_some_and(|k| net.has_edge(b, k));
        // Template: every other minor hangs off x and/or the hub, nothing else.
        let extraneous = net.neighbors(b).any(|n| n != x && Some(n) != k);
        if extraneous || (!adj_x && !adj_k) {
            return PhaseCoords::default();
        }
        if adj_x {
            s.push(b);
        } else {
            l.push(b);
        }
    }
    // x itself connects only to majors and its star members.
    let d: Vec<PlayerId> = majors.iter().copied().filter(|&a| net.has_edge(a, x)).collect();
    let s_size = s.len();
    let l_size = l.len();
    let d_size = d.len();
    let m_a = majors.len() as i64;
    let term1 = p.c_a - int(s_size as i64) - int(1);
    let k_x_edge = k.is_some_and(|k| net.has_edge(k, x));
    let term2 = if k_x_edge {
        -p.a * int(1 + m_a - d_size as i64) + int(1) + int(s_size as i64) - int(l_size as i64)
    } else {
        -p.a * int(1 + m_a - d_size as i64)
            + int(2) * (int(1) + int(s_size as i64) - int(l_size as i64))
    };
    let region = match (term1 > zero(), term2 > zero()) {
        (true, false) => 1,
        (false, false) => 2,
        (false, true) => 3,
        (true, true) => 4,
    };
    PhaseCoords {
        s_size,
        l_size,
        d_size,
        region: Some(region),
        reliable: None,
    }
}

/// Double-star template classifier for the symmetric reliable dynamics.
pub fn classify_reliable_phase(state: &GameState, p: &CostParams) -> PhaseCoords {
    if p.mode != CostMode::Reliable || !p.tau {
        return PhaseCoords::default();
    }
    let net = &state.net;
    let minors: Vec<PlayerId> = net.minors().collect();
    let majors: Vec<PlayerId> = net.majors().collect();
    if minors.is_empty() {
        return PhaseCoords::default();
    }
    let b_degree = |b: &PlayerId| net.neighbors(*b).filter(|n| !net.is_major(*n)).count();
    let mut ranked = minors.clone();
    ranked.sort_by(|a, b| b_degree(b).cmp(&b_degree(a)).then(a.0.cmp(&b.0)));
    let x1 = ranked[0];
    let x2 = ranked.get(1).copied();
    let mut s1 = 0;
    let mut s2 = 0;
    let mut l = 0;
    for &b in &minors {
        if b == x1 || Some(b) == x2 {
            continue;
        }
        let adj_x1 = net.has_edge(b, x1);
        let adj_x2 = x2.is_some_and(|x| net.has_edge(b, x));
        let major_deg = net.neighbors(b).filter(|n| net.is_major(*n)).count();
        let minor_deg = b_degree(&b);
        if adj_x1 {
            s1 += 1;
        }
        if adj_x2 {
            s2 += 1;
        }
        if !adj_x1 && !adj_x2 {
            if major_deg == 2 && minor_deg == 0 {
                l += 1;
            } else {
                return PhaseCoords::default();
            }
        }
    }
    // Centers connected only to stars/majors; count major attachments.
    let d1 = majors.iter().filter(|&&a| net.has_edge(a, x1)).count();
    let d2 = x2.map_or(0, |x| majors.iter().filter(|&&a| net.has_edge(a, x)).count());
    PhaseCoords {
        s_size: s1,
        l_size: l,
        d_size: d1,
        region: None,
        reliable: Some(ReliableCoords { s1, s2, d1, d2, l }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    Optimal,
    PromotedStar,
    Indeterminate,
}

/// Sufficient conditions from the convergence theorem: k minors arrive
/// first, then k_A consecutive majors.
pub fn convergence_prediction(p: &CostParams, arrival_history: &[PlayerClass]) -> Prediction {
    let n_a = arrival_history
        .iter()
        .filter(|c| **c == PlayerClass::MajorA)
        .count() as i64;
    let n_b = arrival_history.len() as i64 - n_a;
    let k = arrival_history
        .iter()
        .take_while(|c| **c == PlayerClass::MinorB)
        .count() as i64;
    let k_a = arrival_history
        .iter()
        .skip(k as usize)
        .take_while(|c| **c == PlayerClass::MajorA)
        .count() as i64;
    if n_a == 0 {
        return Prediction::Indeterminate;
    }
    if p.a * int(k_a) > int(k + 1) || p.a * int(n_a) > int(n_b) {
        return Prediction::Optimal;
    }
    // Reverse strict dominance landing in region 3: the k-minor star has
    // term1 < 0 and term2 > 0 once the k_A majors have attached.
    let term1 = p.c_a - int(k);
    let term2 = -p.a * int(1 + n_a - k_a) + int(k);
    if p.a * int(k_a) < int(k + 1)
        && p.a * int(n_a) < int(n_b)
        && term1 < zero()
        && term2 > zero()
    {
        return Prediction::PromotedStar;
    }
    Prediction::Indeterminate
}

/// Run a full game. Players arrive one per turn under the scheduler, then
/// whole passes repeat until a pass makes no move (converged) or max_rounds
/// passes elapse.
pub fn run_game(
    cfg: &DynamicsConfig,
    n_a: usize,
    n_b: usize,
) -> Result<(Trace, GameState), Error> {
    cfg.params.validate()?;
    if cfg.max_rounds < 1 {
        return Err(Error::BadArgument("max_rounds must be >= 1".into()));
    }
    if n_a + n_b == 0 {
        return Err(Error::EmptySet);
    }
    let mut seed = 0u64;
    let mut arrivals: Vec<PlayerClass> = match &cfg.scheduler {
        Scheduler::RoundRobin => {
            let mut v = vec![PlayerClass::MajorA; n_a];
            v.extend(vec![PlayerClass::MinorB; n_b]);
            v
        }
        Scheduler::UniformRandom { seed: s } => {
            seed = *s;
            let mut v = vec![PlayerClass::MajorA; n_a];
            v.extend(vec![PlayerClass::MinorB; n_b]);
            v
        }
        Scheduler::Scripted { arrivals, .. } => {
            let a = arrivals
                .iter()
                .filter(|c| **c == PlayerClass::MajorA)
                .count();
            if a != n_a || arrivals.len() - a != n_b {
                return Err(Error::Config(
                    "scripted arrivals do not match the requested player counts".into(),
                ));
            }
            arrivals.clone()
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if matches!(cfg.scheduler, Scheduler::UniformRandom { .. }) {
        arrivals.shuffle(&mut rng);
    }

    let mut state = GameState::new();
    let mut turns: Vec<TurnRecord> = Vec::new();
    let mut any_budget_hit = false;
    let phase_of = |state: &GameState| {
        if cfg.params.mode == CostMode::Reliable && cfg.params.tau {
            classify_reliable_phase(state, &cfg.params)
        } else {
            classify_phase(state, &cfg.params)
        }
    };

    for &class in &arrivals {
        let id = state.net.add_node(class);
        let (moves, budget_hit) = play_turn(&mut state, id, cfg, &mut rng)?;
        any_budget_hit |= budget_hit;
        turns.push(TurnRecord {
            turn: state.turn,
            player: id,
            class,
            arrived: true,
            moves,
            social_cost: social_cost(&state.net, &cfg.params)?,
            phase: phase_of(&state),
            budget_hit,
        });
    }

    if let Scheduler::Scripted {
        turns: scripted, ..
    } = &cfg.scheduler
    {
        for &idx in scripted {
            if idx >= state.net.n() {
                return Err(Error::Config(format!("scripted turn for unknown player {idx}")));
            }
            let id = PlayerId(idx);
            let class = state.net.class(id)?;
            let (moves, budget_hit) = play_turn(&mut state, id, cfg, &mut rng)?;
            any_budget_hit |= budget_hit;
            turns.push(TurnRecord {
                turn: state.turn,
                player: id,
                class,
                arrived: false,
                moves,
                social_cost: social_cost(&state.net, &cfg.params)?,
                phase: phase_of(&state),
                budget_hit,
            });
        }
    }

    let mut converged = false;
    let mut active_rounds = 0;
    for _ in 0..cfg.max_rounds {
        let mut order: Vec<usize> = (0..state.net.n()).collect();
        if matches!(cfg.scheduler, Scheduler::UniformRandom { .. }) {
            order.shuffle(&mut rng);
        }
        let mut round_moves = 0;
        for idx in order {
            let id = PlayerId(idx);
            let class = state.net.class(id)?;
            let (moves, budget_hit) = play_turn(&mut state, id, cfg, &mut rng)?;
            any_budget_hit |= budget_hit;
            round_moves += moves.len();
            turns.push(TurnRecord {
                turn: state.turn,
                player: id,
                class,
                arrived: false,
                moves,
                social_cost: social_cost(&state.net, &cfg.params)?,
                phase: phase_of(&state),
                budget_hit,
            });
        }
        if round_moves == 0 {
            converged = true;
            break;
        }
        active_rounds += 1;
    }

    let final_social_cost = social_cost(&state.net, &cfg.params)?;
    let final_phase = phase_of(&state);
    Ok((
        Trace {
            arrival_order: arrivals,
            turns,
            converged,
            active_rounds,
            budget_hit: any_budget_hit,
            final_social_cost,
            final_phase,
        },
        state,
    ))
}

/// Rebuild the final state from a trace (arrival order + recorded moves).
pub fn replay_trace(trace: &Trace) -> Result<GameState, Error> {
    let mut state = GameState::new();
    for rec in &trace.turns {
        if rec.arrived {
            state.net.add_node(rec.class);
        }
        for mv in &rec.moves {
            apply_move(&mut state, mv)?;
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlayerClass::{MajorA, MinorB};
    use crate::rat::rat;
    use crate::stability::{is_pairwise_stable_with_transfers, optimal_bare_network};

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    fn scripted(arrivals: Vec<PlayerClass>) -> Scheduler {
        Scheduler::Scripted {
            arrivals,
            turns: vec![],
        }
    }

    #[test]
    fn new_minor_links_the_major() {
        let p = CostParams::bare(int(3), int(2), int(2), 2);
        let cfg = DynamicsConfig::basic(p, DynRule::Rule2b, scripted(vec![MajorA, MinorB]));
        let (trace, state) = run_game(&cfg, 1, 1).unwrap();
        assert!(state.net.has_edge(PlayerId(0), PlayerId(1)));
        assert!(trace.converged);
        assert_eq!(trace.turns[1].moves.len(), 1);
    }

    #[test]
    fn scripted_star_formation() {
        let p = CostParams::bare(int(3), int(2), int(2), 4);
        let cfg = DynamicsConfig::basic(
            p,
            DynRule::Rule2b,
            scripted(vec![MajorA, MinorB, MinorB, MinorB]),
        );
        let (trace, state) = run_game(&cfg, 1, 3).unwrap();
        assert!(trace.converged);
        assert_eq!(state.net.degree(PlayerId(0)).unwrap(), 3);
        assert_eq!(state.net.edge_count(), 3);
        let opt = optimal_bare_network(&p, 1, 3).unwrap();
        assert_eq!(
            social_cost(&state.net, &p).unwrap(),
            social_cost(&opt, &p).unwrap()
        );
    }

    #[test]
    fn rule2a_defects_from_minor_star_to_major() {
        // Three minors build a star on the first; the late major then wins
        // them over through detach-and-reattach turns.
        let p = CostParams::bare(int(3), int(2), int(2), 4);
        let cfg = DynamicsConfig::basic(
            p,
            DynRule::Rule2a,
            scripted(vec![MinorB, MinorB, MinorB, MajorA]),
        );
        let (trace, state) = run_game(&cfg, 1, 3).unwrap();
        assert!(trace.converged);
        let major = PlayerId(3);
        assert_eq!(state.net.degree(major).unwrap(), 3);
        assert_eq!(state.net.edge_count(), 3);
        let opt = optimal_bare_network(&p, 1, 3).unwrap();
        assert_eq!(trace.final_social_cost, social_cost(&opt, &p).unwrap());
    }

    #[test]
    fn rule2b_stable_position_is_a_no_move() {
        let p = CostParams::bare(int(3), int(2), int(2), 4);
        let cfg = DynamicsConfig::basic(p, DynRule::Rule2b, scripted(vec![MajorA; 0]));
        let _ = cfg;
        let mut state = GameState::new();
        state.net = optimal_bare_network(&p, 1, 3).unwrap();
        let cfg = DynamicsConfig::basic(p, DynRule::Rule2b, Scheduler::RoundRobin);
        let (moves, _) = play_turn(&mut state, PlayerId(2), &cfg, &mut rng()).unwrap();
        assert!(moves.is_empty());
    }

    #[test]
    fn greedy_accept_examples() {
        // Minor 2 at distance 2 from minor 0; adding (0,2) changes 2's cost
        // by c_B - 1 = +1 -> reject; with payment 3 -> accept.
        let p = CostParams::bare(int(3), int(2), int(2), 3);
        let mut state = GameState::new();
        state.net =
            Network::from_edges(vec![MinorB, MinorB, MinorB], &[(0, 1), (1, 2)]).unwrap();
        let edge = (PlayerId(0), PlayerId(2));
        assert!(!greedy_accept(&state, PlayerId(2), edge, None, &p).unwrap());
        assert!(greedy_accept(&state, PlayerId(2), edge, Some(&int(3)), &p).unwrap());
        // A straight loss turns into acceptance when strictly beneficial.
        let mut state2 = GameState::new();
        state2.net = Network::from_edges(
            vec![MajorA, MinorB, MinorB],
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        // Minor 2 linking the major directly: its delta is c_B - A·1 = -1.
        assert!(greedy_accept(&state2, PlayerId(2), (PlayerId(0), PlayerId(2)), None, &p).unwrap());
    }

    #[test]
    fn efficient_quotes() {
        let p = CostParams::bare(int(3), int(2), int(2), 3);
        let mut state = GameState::new();
        state.net =
            Network::from_edges(vec![MajorA, MinorB, MinorB], &[(0, 1), (1, 2)]).unwrap();
        // Payee 2 strictly benefits from linking the major -> quote 0.
        let q = price_quote(&state, PlayerId(0), PlayerId(2), Pricing::Efficient, &p).unwrap();
        assert_eq!(q, zero());
        // Payee 0 (major) loses c_A - 1 = 1 when minor 2 links it.
        let q = price_quote(&state, PlayerId(2), PlayerId(0), Pricing::Efficient, &p).unwrap();
        assert_eq!(q, int(1));
        assert!(price_quote(&state, PlayerId(0), PlayerId(1), Pricing::Efficient, &p).is_err());
    }

    #[test]
    fn po1_picks_joint_benefit_po2_picks_cheapest() {
        let p = CostParams::bare(int(3), rat(3, 2), rat(3, 2), 4);
        let mut state = GameState::new();
        // Major 0 - minor 2 - major 1 path, plus isolated-ish minor 3 on 2.
        state.net = Network::from_edges(
            vec![MajorA, MajorA, MinorB, MinorB],
            &[(0, 2), (1, 2), (2, 3)],
        )
        .unwrap();
        // Minor 3's best monetary link is a major.
        let got = choose_partner(
            &state,
            PlayerId(3),
            Preference::EfficientPo1,
            Pricing::Efficient,
            &p,
            &mut rng(),
        )
        .unwrap();
        let (j, _quote, metric) = got.expect("a beneficial partner exists");
        assert!(j == PlayerId(0) || j == PlayerId(1));
        assert!(metric < zero());
        let got = choose_partner(
            &state,
            PlayerId(3),
            Preference::CheapestEquivalentPo2,
            Pricing::Efficient,
            &p,
            &mut rng(),
        )
        .unwrap();
        assert!(got.is_some());
    }

    #[test]
    fn transfers_reach_all_to_all_with_zero_major_payments() {
        let p = CostParams::bare(int(3), rat(3, 2), rat(3, 2), 5);
        let mut cfg = DynamicsConfig::basic(
            p,
            DynRule::Rule2b,
            Scheduler::UniformRandom { seed: 11 },
        );
        cfg.transfers = true;
        let (_, state) = run_game(&cfg, 2, 3).unwrap();
        let opt = optimal_bare_network(&p, 2, 3).unwrap();
        assert_eq!(
            social_cost(&state.net, &p).unwrap(),
            social_cost(&opt, &p).unwrap()
        );
        assert!(is_pairwise_stable_with_transfers(&state.net, &p).unwrap().stable);
        for (&(a, b), amount) in &state.ledger {
            if state.net.is_major(a) && state.net.is_major(b) {
                assert_eq!(*amount, zero());
            }
        }
    }

    #[test]
    fn phase_classifier_examples() {
        let p = CostParams::bare(int(3), int(2), int(2), 5);
        // Optimal star on the major: |S| = 0, |D| = 1, region 1.
        let mut state = GameState::new();
        state.net = optimal_bare_network(&p, 1, 4).unwrap();
        let ph = classify_phase(&state, &p);
        assert_eq!((ph.s_size, ph.d_size, ph.region), (0, 1, Some(1)));
        // Full minor star with the major attached: region 3.
        let mut state = GameState::new();
        state.net = Network::from_edges(
            vec![MajorA, MinorB, MinorB, MinorB, MinorB],
            &[(1, 2), (1, 3), (1, 4), (0, 1)],
        )
        .unwrap();
        let ph = classify_phase(&state, &p);
        assert_eq!((ph.s_size, ph.d_size), (3, 1));
        assert_eq!(ph.region, Some(3));
        // Dense graph: unclassified.
        let mut state = GameState::new();
        state.net = Network::from_edges(
            vec![MajorA, MinorB, MinorB, MinorB],
            &[(1, 2), (2, 3), (1, 3), (0, 1), (0, 2)],
        )
        .unwrap();
        assert_eq!(classify_phase(&state, &p).region, None);
    }

    #[test]
    fn reliable_phase_classifier() {
        let pr = CostParams::reliable(int(10), int(4), int(4), int(1), true, 7);
        let mut state = GameState::new();
        state.net =
            crate::stability::optimal_reliable_stable_network(&pr, 3, 4).unwrap();
        let ph = classify_reliable_phase(&state, &pr);
        let rc = ph.reliable.expect("template matches");
        assert_eq!((rc.s1, rc.s2), (0, 0));
        assert_eq!(rc.l, 2); // two non-center minors counted in L
        let bare = CostParams::bare(int(3), int(2), int(2), 7);
        assert_eq!(classify_reliable_phase(&state, &bare).reliable, None);
    }

    #[test]
    fn prediction_examples() {
        let p = CostParams::bare(int(3), int(2), int(2), 14);
        // No minors before the first major.
        assert_eq!(
            convergence_prediction(&p, &[MajorA, MinorB, MinorB]),
            Prediction::Optimal
        );
        let mut history = vec![MajorA; 4];
        history.extend(vec![MinorB; 10]);
        assert_eq!(convergence_prediction(&p, &history), Prediction::Optimal);
        // Minor-heavy start with a weak major tail and large c_A.
        let p2 = CostParams::bare(int(2), int(6), int(6), 6);
        let mut history = vec![MinorB; 5];
        history.push(MajorA);
        assert_eq!(convergence_prediction(&p2, &history), Prediction::Indeterminate);
        // Same shape with small c_A lands in region 3.
        let p3 = CostParams::bare(int(2), rat(3, 2), int(2), 6);
        assert_eq!(convergence_prediction(&p3, &history), Prediction::PromotedStar);
    }

    #[test]
    fn replay_and_determinism() {
        let p = CostParams::bare(int(3), int(2), int(2), 6);
        let cfg = DynamicsConfig::basic(
            p,
            DynRule::Rule2a,
            Scheduler::UniformRandom { seed: 5 },
        );
        let (t1, s1) = run_game(&cfg, 2, 4).unwrap();
        let (t2, _) = run_game(&cfg, 2, 4).unwrap();
        assert_eq!(
            serde_json::to_string(&t1).unwrap(),
            serde_json::to_string(&t2).unwrap()
        );
        let replayed = replay_trace(&t1).unwrap();
        assert_eq!(replayed.net, s1.net);
        assert_eq!(replayed.ledger, s1.ledger);
    }

    #[test]
    fn config_guards() {
        let p = CostParams::bare(int(3), int(2), int(2), 2);
        let mut cfg = DynamicsConfig::basic(p, DynRule::Rule2b, Scheduler::RoundRobin);
        cfg.max_rounds = 0;
        assert!(run_game(&cfg, 1, 1).is_err());
        let cfg = DynamicsConfig::basic(p, DynRule::Rule2b, scripted(vec![MajorA]));
        assert!(run_game(&cfg, 1, 1).is_err()); // counts mismatch
    }
}
