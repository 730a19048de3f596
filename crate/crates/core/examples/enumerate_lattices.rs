//! Counts bounded lattices up to isomorphism, together with how many
//! complementations they carry and how many of those lie in the variety.

use allab::catalog;
use allab::sasaki::is_member_of_v;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max_n: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(7);
    println!(
        "{:>2} {:>9} {:>16} {:>8}",
        "n", "lattices", "complementations", "members"
    );
    for n in 1..=max_n {
        let lattices = catalog::enumerate_bounded_lattices(n)?;
        let (mut comps, mut members) = (0, 0);
        for l in &lattices {
            for c in l.all_complementations() {
                comps += 1;
                members += is_member_of_v(&l.with_unary(c)?) as usize;
            }
        }
        println!("{n:>2} {:>9} {comps:>16} {members:>8}", lattices.len());
    }
    Ok(())
}
