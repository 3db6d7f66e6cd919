//! Edge-disjoint path machinery: the exact shortest pair of disjoint paths,
//! the heuristic used when the backup discount shrinks, and shortest cycles
//! through a node pair.

use netform::graph::{
    exact_min_pair_oracle, min_disjoint_pair_detailed, shortest_cycle_through, Network,
    PlayerClass::MinorB, PlayerId,
};
use netform::rat::{fmt_rat, one, rat};

fn main() {
    // A graph where the greedy first path blocks the obvious backup: the
    // lexicographically smallest shortest route 0-1-2-5 uses edges that both
    // crossing routes need, so the solver must fall back to the exact pair.
    let net = Network::from_edges(
        vec![MinorB; 6],
        &[(0, 1), (1, 2), (2, 5), (0, 3), (3, 2), (1, 4), (4, 5)],
    )
    .unwrap();
    let (s, t) = (PlayerId(0), PlayerId(5));

    let (pair, source) = min_disjoint_pair_detailed(&net, s, t, &one()).unwrap().unwrap();
    println!(
        "delta=1: primary {} + backup {} = {} (source: {source:?})",
        pair.primary,
        pair.backup,
        pair.total(),
    );

    let (pair, source) = min_disjoint_pair_detailed(&net, s, t, &rat(1, 10))
        .unwrap()
        .unwrap();
    println!(
        "delta=1/10: primary {} + backup {}, weighted cost {} (source: {source:?})",
        pair.primary,
        pair.backup,
        fmt_rat(&pair.weighted(&rat(1, 10))),
    );

    let exact = exact_min_pair_oracle(&net, s, t, &rat(1, 10)).unwrap().unwrap();
    println!(
        "exhaustive oracle agrees: weighted cost {}",
        fmt_rat(&exact.weighted(&rat(1, 10)))
    );

    let cycle = shortest_cycle_through(&net, s, t).unwrap().unwrap();
    println!("shortest cycle through 0 and 5 has length {cycle}");
}
