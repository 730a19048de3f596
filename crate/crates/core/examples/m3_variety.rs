//! M3 with a cyclic complementation: adjoint and in the variety although the
//! complementation is not an involution.

use allab::catalog;
use allab::lattice::classify;
use allab::sasaki::{check_adjoint, is_member_of_v, sasaki_product, sasaki_residual};

fn main() {
    let l = catalog::m3_paper();
    let adj = check_adjoint(&l);
    println!(
        "adjoint over {} triples: {}",
        adj.triples_checked,
        adj.holds()
    );
    println!("member of the variety: {}", is_member_of_v(&l));

    println!("\n  x ⊙ y table");
    for x in l.elements() {
        let row: Vec<&str> = l
            .elements()
            .map(|y| l.label(sasaki_product(&l, x, y)))
            .collect();
        println!("  {}: {}", l.label(x), row.join(" "));
    }
    println!("\n  x → y table");
    for x in l.elements() {
        let row: Vec<&str> = l
            .elements()
            .map(|y| l.label(sasaki_residual(&l, x, y)))
            .collect();
        println!("  {}: {}", l.label(x), row.join(" "));
    }

    let c = classify(&l);
    if let Some(x) = c.not_involution {
        println!(
            "\nnot an involution: ({}′)′ = {}",
            l.label(x),
            l.label(l.unary(l.unary(x)))
        );
    }
    println!("antitone: {}", c.flags.unary_is_antitone);
}
