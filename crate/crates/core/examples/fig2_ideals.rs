//! The ten-element modular lattice under its two complementations: ideals,
//! their congruences and the kernel correspondence.

use allab::catalog::{self, Fig2Variant};
use allab::ideal::{all_ideals, theta_of_ideal, verify_kernel_coincidence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for variant in [Fig2Variant::First, Fig2Variant::Second] {
        let l = catalog::fig2(variant);
        println!("{variant:?} complementation");
        for i in all_ideals(&l)? {
            let theta = theta_of_ideal(&l, &i)?;
            println!("  ideal {:<24} Θ = {}", i.describe(&l), theta.describe(&l));
        }
        let c = verify_kernel_coincidence(&l)?;
        println!("  ideals coincide with kernels: {}\n", c.holds());
    }
    Ok(())
}
