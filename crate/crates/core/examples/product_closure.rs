//! The variety is closed under direct products; products also retain the
//! Mal'cev term and the kernel correspondence.

use allab::catalog;
use allab::congruence::{all_congruences, verify_theorem2_terms};
use allab::ideal::verify_kernel_coincidence;
use allab::sasaki::is_member_of_v;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let factors = [
        ("2", catalog::chain2()),
        ("M3", catalog::m3_paper()),
        ("M4", catalog::make_m_n(4, &[1, 0, 3, 2])?),
    ];
    for (i, (na, a)) in factors.iter().enumerate() {
        for (nb, b) in &factors[i..] {
            let p = a.direct_product(b);
            let member = is_member_of_v(&p);
            let terms = verify_theorem2_terms(&p)?.holds();
            let con = all_congruences(&p).len();
            let kernels = verify_kernel_coincidence(&p)?.holds();
            println!(
                "{na} x {nb}: {} elements, member {member}, terms {terms}, {con} congruences, ideals = kernels {kernels}",
                p.size()
            );
        }
    }
    Ok(())
}
