//! Which two-input functions can a gate with N observations realize?
//!
//! cargo run --release --example reachability

use entropy_nand::gates::{search_reachable_tables, TruthTable};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let named = [TruthTable::NAND, TruthTable::NOR, TruthTable::AND, TruthTable::OR, TruthTable::XOR, TruthTable::XNOR];
    for n in 1..=3 {
        let reach = search_reachable_tables(n, 6)?;
        let status: Vec<String> =
            named.iter().map(|t| format!("{}={}", t.name(), if reach.contains(*t) { "yes" } else { "no" })).collect();
        println!("{n} observation(s): {} tables; {}", reach.tables().len(), status.join(" "));
    }
    let reach = search_reachable_tables(2, 3)?;
    println!("NAND witness: {:?}", reach.witnesses[&TruthTable::NAND]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("reachability example");
}
