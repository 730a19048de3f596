//! Congruence lattices of variety members: permutable, distributive and
//! regular, with the witnessing terms checked exhaustively.

use allab::catalog::{self, Fig2Variant};
use allab::congruence::{all_congruences, properties_of, verify_theorem2_terms};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("M3", catalog::m3_paper()),
        ("fig2 first", catalog::fig2(Fig2Variant::First)),
        ("2 x 2", catalog::boolean4()),
        (
            "M3 x 2",
            catalog::m3_paper().direct_product(&catalog::chain2()),
        ),
    ];
    for (name, l) in cases {
        let con = all_congruences(&l);
        let p = properties_of(&l, &con);
        println!("{name}: {} congruences", p.count);
        for c in &con {
            println!("    {c}", c = c.describe(&l));
        }
        println!(
            "  permutable {}, distributive {}, regular {}, simple {}, subdirectly irreducible {}",
            p.permutable, p.distributive, p.regular, p.simple, p.subdirectly_irreducible
        );
        let v = verify_theorem2_terms(&l)?;
        println!(
            "  Mal'cev, majority and regularity terms hold: {}\n",
            v.holds()
        );
    }

    let n5 = catalog::n5();
    let p = properties_of(&n5, &all_congruences(&n5));
    if let Some((a, b, x)) = p.irregular {
        println!(
            "N5 (not a member): {} and {} agree on the class of {}",
            a.describe(&n5),
            b.describe(&n5),
            n5.label(x)
        );
    }
    Ok(())
}
