//! Lowers an expression to NAND gates and checks that evaluating every gate
//! through the entropy gate agrees with the expression itself.
//!
//! cargo run --example nand_synthesis -- "(a & b) | !(c ^ d)"

use std::collections::BTreeMap;

use entropy_nand::circuits::{evaluate_netlist, netlist_report, parse_expression, synthesize_nand_netlist, EvalMode};

pub fn run_example_with(text: &str) -> Result<(), Box<dyn std::error::Error>> {
    let expr = parse_expression(text)?;
    let netlist = synthesize_nand_netlist(&expr);
    print!("{netlist}");

    let names = netlist.inputs().to_vec();
    for row in 0u32..(1 << names.len()) {
        let assignment: BTreeMap<String, bool> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), row >> i & 1 == 1)).collect();
        let via_entropy = evaluate_netlist(&netlist, &assignment, EvalMode::Entropy)?;
        if via_entropy != [expr.eval(&assignment)?] {
            return Err(format!("mismatch at {assignment:?}").into());
        }
    }
    println!("entropy evaluation matches on all {} assignments", 1u32 << names.len());

    let report = netlist_report(&netlist, 300.0)?;
    println!(
        "{} gates, depth {}, worst case {} splits = {:e} J at 300 K",
        report.gate_count, report.depth, report.budget_splits, report.budget_joules
    );
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    run_example_with("(a & b) | !(c ^ d)")
}

#[allow(dead_code)]
fn main() {
    let arg = std::env::args().nth(1);
    match arg {
        Some(text) => run_example_with(&text),
        None => run_example(),
    }
    .expect("nand synthesis example");
}
