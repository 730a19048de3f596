//! Every fixed-point-free permutation of the atoms of M_n gives a simple
//! member of the variety, so there are arbitrarily large subdirectly
//! irreducible members.

use allab::catalog;
use allab::congruence::check_congruence_properties;
use allab::sasaki::is_member_of_v;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max_n: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(7);
    for n in 3..=max_n {
        let all = catalog::all_derangements(n);
        let reps = catalog::derangement_class_representatives(n);
        let ok = all.iter().all(|p| {
            let l = catalog::make_m_n(n, p).expect("derangement");
            is_member_of_v(&l) && check_congruence_properties(&l).simple
        });
        println!(
            "M_{n}: {} derangements ({} cycle types), all simple members: {ok}",
            all.len(),
            reps.len()
        );
    }
    Ok(())
}
