//! Check pairwise stability of a few hand-built networks and print the
//! violations found.

use netform::cost::CostParams;
use netform::graph::{Network, PlayerClass::MinorB};
use netform::rat::{fmt_rat, int};
use netform::stability::{is_pairwise_stable, is_pairwise_stable_with_transfers};

fn report(name: &str, net: &Network, p: &CostParams) {
    let plain = is_pairwise_stable(net, p).unwrap();
    let transfers = is_pairwise_stable_with_transfers(net, p).unwrap();
    println!(
        "{name}: stable={} (with transfers: {})",
        plain.stable, transfers.stable
    );
    for v in plain.violations.iter().take(3) {
        println!(
            "  violation: {:?} {:?} by {:?}, deltas {:?}",
            v.action,
            v.edge,
            v.actors,
            v.deltas.iter().map(fmt_rat).collect::<Vec<_>>()
        );
    }
}

fn main() {
    let p = CostParams::bare(int(3), int(2), int(2), 3);

    // A path of three minors is stable: the end pair is at distance 2 and a
    // shortcut costing c_B = 2 saves only 1 hop.
    let path = Network::from_edges(vec![MinorB; 3], &[(0, 1), (1, 2)]).unwrap();
    report("path of three minors", &path, &p);

    // The triangle is not: each link buys a 1-hop saving for a price of 2.
    let triangle = Network::from_edges(vec![MinorB; 3], &[(0, 1), (1, 2), (0, 2)]).unwrap();
    report("triangle of minors", &triangle, &p);

    // A ring of seven minors with link cost 17/2: removing an edge raises
    // the remover's distance sum by 9 > 17/2, and the best chord saves only
    // 3 hops < 17/2, so the ring is strictly stable.
    let p_ring = CostParams::bare(int(10), netform::rat::rat(17, 2), netform::rat::rat(17, 2), 7);
    let ring = Network::from_edges(
        vec![MinorB; 7],
        &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0)],
    )
    .unwrap();
    report("ring of seven minors", &ring, &p_ring);
}
