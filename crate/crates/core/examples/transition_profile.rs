//! Entropy of a one-bit element across a state change: an instantaneous
//! Kronecker peak versus the smooth binary entropy curve.
//!
//! cargo run --example transition_profile

use entropy_nand::units::{transition_profile, ProfileMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("t,kronecker,binary_entropy");
    for i in 0..=10 {
        let t = f64::from(i) / 10.0;
        println!(
            "{t},{},{:.6}",
            transition_profile(t, ProfileMode::Kronecker)?,
            transition_profile(t, ProfileMode::BinaryEntropy)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("transition profile example");
}
