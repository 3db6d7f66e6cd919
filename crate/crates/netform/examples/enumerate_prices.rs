//! Exhaustively enumerate every graph on a small player set, find the
//! pairwise-stable ones, and compute the price of stability / anarchy and
//! the price of reliability.

use netform::cost::CostParams;
use netform::rat::{fmt_rat, int};
use netform::stability::{price_of_reliability, price_report};

fn main() {
    // Two majors (weight 3) and two minors, symmetric link cost 2.
    let p = CostParams::bare(int(3), int(2), int(2), 4);
    let report = price_report(&p, 2, 2, false).unwrap();
    println!(
        "bare (2 majors, 2 minors): {} stable of {} graphs",
        report.stable_count, report.total_graphs
    );
    println!(
        "  optimal social cost {} (graph6 {})",
        fmt_rat(&report.s_optimal),
        report.optimal_graph6
    );
    if let (Some(pos), Some(poa)) = (&report.pos, &report.poa) {
        println!("  price of stability {}  price of anarchy {}", fmt_rat(pos), fmt_rat(poa));
    }

    // Same population under the reliability requirement with full backup
    // weight: the price of reliability is the ratio of the best stable
    // social cost with survivability constraints to the one without.
    let pr = CostParams::reliable(int(3), int(2), int(2), int(1), true, 4);
    let por = price_of_reliability(&pr, 2, 2, false).unwrap();
    println!(
        "price of reliability: {} (below one: {:?})",
        por.por.as_ref().map(fmt_rat).unwrap_or_else(|| "n/a".into()),
        por.agrees_with_claimed_lt_one
    );
    println!("  reliable stable count {}", por.reliable.stable_count);
}
