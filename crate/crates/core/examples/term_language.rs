//! Parsing, printing and checking identities and quasi-identities.

use allab::catalog;
use allab::term::{check_statement, eval, parse_statement, parse_term, Assignment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = parse_term("x o y'")?;
    println!("{t}  expands to  {}", t.expand());

    let l = catalog::m3_paper();
    let a = Assignment::new()
        .with("x", l.index_of("a").unwrap())
        .with("y", l.index_of("c").unwrap());
    println!("at {}: {}", a.describe(&l), l.label(eval(&t, &l, &a)?));

    let statements = [
        "x ^ (x v y) = x",
        "x v y = y v x",
        "x = y",
        "commute: x o y = y o x",
        "x <= y => y' <= x'",
        "malcev: p(x, x, z) = z",
        "x <= y & y <= z => x <= z",
    ];
    for s in statements {
        let st = parse_statement(s)?;
        match check_statement(&l, &st).counterexample() {
            None => println!("holds on M3:  {s}"),
            Some(ce) => println!("fails on M3:  {s}   at {}", ce.assignment.describe(&l)),
        }
    }

    if let Err(e) = parse_statement("x o y o z = x") {
        println!("\nrejected: {e}");
    }
    Ok(())
}
