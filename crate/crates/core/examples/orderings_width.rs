//! Moral and augmented graphs, min-degree orderings and induced width.

use beliefcnf::fixtures::{self, A, G};
use beliefcnf::graph::{adjusted_induced_width, width};
use beliefcnf::{augmented_graph, induced_width, min_degree_order, moral_graph, Literal, Ordering, Provenance};

fn main() -> beliefcnf::Result<()> {
    let net = fixtures::figure_one_positive();
    let mut phi = fixtures::example_query();
    // A and G share no family, so this clause adds an edge
    phi.add([Literal::pos(A), Literal::pos(G)], Provenance::Query);

    let moral = moral_graph(&net);
    let aug = augmented_graph(&net, &phi)?;
    println!(
        "moral edges:     {:?}",
        moral.edges().iter().map(|(a, b)| (a.0, b.0)).collect::<Vec<_>>()
    );
    println!(
        "augmented edges: {:?}",
        aug.edges().iter().map(|(a, b)| (a.0, b.0)).collect::<Vec<_>>()
    );

    let by_hand = Ordering::from_indices(&[0, 2, 1, 3, 4, 5])?;
    let greedy = min_degree_order(&aug);
    for (name, o) in [
        ("A,C,B,D,F,G", &by_hand),
        ("identity", &Ordering::identity(6)),
        ("min-degree", &greedy),
    ] {
        println!(
            "{name:<12} order={:?} width={} induced={}",
            o.variables().iter().map(|v| v.0).collect::<Vec<_>>(),
            width(&aug, o)?,
            induced_width(&aug, o)?
        );
    }

    // observing D removes it from the width computation
    let observed = [fixtures::D].into_iter().collect();
    println!(
        "induced width with D observed: {}",
        adjusted_induced_width(&aug, &by_hand, &observed)?
    );
    Ok(())
}
