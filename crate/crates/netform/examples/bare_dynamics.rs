//! Run the bare formation game with players arriving one at a time. Four
//! minors pile onto the first arrival before a single major shows up; by
//! then the minor star is large enough that nobody gains from defecting, so
//! the game locks into the promoted-star state the arrival-order predictor
//! announces, at a social cost above the optimum.

use netform::cost::CostParams;
use netform::dynamics::{
    convergence_prediction, run_game, DynRule, DynamicsConfig, Scheduler,
};
use netform::graph::PlayerClass::{MajorA, MinorB};
use netform::rat::{fmt_rat, int};

fn main() {
    let p = CostParams::bare(int(3), int(2), int(2), 5);
    let cfg = DynamicsConfig::basic(
        p,
        DynRule::Rule2a,
        Scheduler::Scripted {
            arrivals: vec![MinorB, MinorB, MinorB, MinorB, MajorA],
            turns: vec![],
        },
    );
    let (trace, state) = run_game(&cfg, 1, 4).unwrap();

    println!(
        "prediction from arrival order: {:?}",
        convergence_prediction(&p, &trace.arrival_order)
    );
    for t in &trace.turns {
        if t.moves.is_empty() {
            continue;
        }
        let moves: Vec<String> = t
            .moves
            .iter()
            .map(|m| format!("{:?} {:?}-{:?}", m.action, m.edge.0 .0, m.edge.1 .0))
            .collect();
        println!(
            "turn {:>2} player {} ({:?}): {}  social={} region={:?}",
            t.turn,
            t.player.0,
            t.class,
            moves.join(", "),
            fmt_rat(&t.social_cost),
            t.phase.region
        );
    }
    println!(
        "converged={} after {} active rounds, {} edges, social cost {}",
        trace.converged,
        trace.active_rounds,
        state.net.edge_count(),
        fmt_rat(&trace.final_social_cost)
    );
}
