//! Sweeps every complemented lattice up to six elements and tallies which of
//! the six conditions hold. Within each implication group the verdicts agree.

use std::collections::BTreeMap;

use allab::catalog;
use allab::sasaki::{check_adjoint, check_theorem1, THEOREM1_CONDITIONS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max_n: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(6);
    let mut patterns: BTreeMap<String, usize> = BTreeMap::new();
    let mut adjoint = 0;
    for l in catalog::complemented_corpus(max_n)? {
        let r = check_theorem1(&l)?;
        let key: String = r
            .verdicts
            .iter()
            .map(|v| {
                if v.outcome.holds() {
                    v.name.to_ascii_uppercase()
                } else {
                    '.'
                }
            })
            .collect();
        *patterns.entry(key).or_default() += 1;
        assert!(r.abc_agree() && r.def_agree());
        let a = check_adjoint(&l).holds();
        assert_eq!(a, r.holds('b') && r.holds('e'));
        adjoint += a as usize;
    }
    println!("conditions:");
    for (c, text) in THEOREM1_CONDITIONS {
        println!("  ({c}) {text}");
    }
    println!("\nverdict pattern (upper case = holds) and instance count, n ≤ {max_n}:");
    for (k, v) in &patterns {
        println!("  {k}  {v}");
    }
    println!("\nadjoint instances: {adjoint}");
    Ok(())
}
