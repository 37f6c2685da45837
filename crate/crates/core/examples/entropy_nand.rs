//! The two-observation gate: the same four networks read as NAND or NOR
//! depending only on the threshold.
//!
//! cargo run --example entropy_nand

use entropy_nand::gates::{evaluate, GateKind, INPUT_ROWS};
use entropy_nand::patterns::classify_pattern;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("a b | pattern | a_S b_S o_S |  u  | NAND NOR");
    for (a, b) in INPUT_ROWS {
        let (nand, state) = evaluate(a, b, GateKind::Nand);
        let (nor, _) = evaluate(a, b, GateKind::Nor);
        let kind = classify_pattern(&state.network)?.kind;
        let e = state.entropies;
        println!(
            "{} {} | {:<7} |  {}   {}   {}  | {:.2} |  {}    {}",
            u8::from(a),
            u8::from(b),
            kind.name(),
            e.a,
            e.b,
            e.o,
            state.u,
            u8::from(nand),
            u8::from(nor)
        );
    }
    let (_, state) = evaluate(true, true, GateKind::Nand);
    println!("{}", state.trace_json()?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("entropy nand example");
}
