//! Formation with side payments: minors compensate majors for links the
//! majors would otherwise refuse, and the run ends in the all-to-all-majors
//! optimum with a ledger of who pays whom.

use netform::cost::CostParams;
use netform::dynamics::{run_game, DynRule, DynamicsConfig, Pricing, Scheduler};
use netform::rat::{fmt_rat, rat};
use netform::stability::is_pairwise_stable_with_transfers;

fn main() {
    // c = 3/2 < (A+1)/2 = 2, so the social optimum links every minor to
    // every major; without payments the majors would refuse the extra links.
    let p = CostParams::bare(rat(3, 1), rat(3, 2), rat(3, 2), 5);
    let mut cfg = DynamicsConfig::basic(
        p,
        DynRule::Rule2b,
        Scheduler::UniformRandom { seed: 11 },
    );
    cfg.transfers = true;
    cfg.pricing = Pricing::Efficient;

    let (trace, state) = run_game(&cfg, 2, 3).unwrap();
    println!(
        "converged={} social cost {}",
        trace.converged,
        fmt_rat(&trace.final_social_cost)
    );
    println!("ledger ({} recurring payments):", state.ledger.len());
    for ((payer, payee), amount) in &state.ledger {
        if *amount != netform::rat::zero() {
            println!("  {} pays {} -> {}", payer.0, fmt_rat(amount), payee.0);
        }
    }
    let check = is_pairwise_stable_with_transfers(&state.net, &p).unwrap();
    println!("final state stable under transfers: {}", check.stable);
}
