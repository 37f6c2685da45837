//! Counts observation patterns up to isomorphism and names the
//! two-observation ones.
//!
//! cargo run --example pattern_census

use entropy_nand::patterns::{classify_pattern, enumerate_patterns, to_dot};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=5 {
        println!("{n} observation(s): {} pattern(s)", enumerate_patterns(n)?.len());
    }
    for pattern in enumerate_patterns(2)? {
        let class = classify_pattern(&pattern)?;
        println!("{:<6} {}", class.kind.name(), class.canonical_label);
        print!("{}", to_dot(&pattern, Some(class.kind.name())));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("pattern census example");
}
