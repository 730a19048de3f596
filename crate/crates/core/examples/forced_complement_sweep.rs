//! Tries every unary map on the small lattices: whenever the Sasaki
//! operations are adjoint, the map is a complementation.

use allab::catalog;
use allab::sasaki::{check_lemma1, Lemma1Verdict};
use itertools::Itertools;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=4 {
        for l in catalog::enumerate_bounded_lattices(n)? {
            let (mut vacuous, mut confirmed) = (0, 0);
            for u in (0..n).map(|_| 0..n).multi_cartesian_product() {
                let x = l.with_unary(u)?;
                match check_lemma1(&x) {
                    Lemma1Verdict::Vacuous(_) => vacuous += 1,
                    Lemma1Verdict::Confirmed => {
                        confirmed += 1;
                        let map: Vec<String> = x
                            .elements()
                            .map(|e| format!("{}′={}", x.label(e), x.label(x.unary(e))))
                            .collect();
                        println!("  adjoint: {}", map.join(" "));
                    }
                    Lemma1Verdict::Violation(e) => panic!("{} is not complemented", x.label(e)),
                }
            }
            println!(
                "n={n}, {} covers: {confirmed} adjoint, {vacuous} not",
                l.covers().len()
            );
        }
    }
    Ok(())
}
