//! Single observation, then dissipation into the environment, with the
//! entropy ledger printed as CSV.
//!
//! cargo run --example observation_ledger

use entropy_nand::network::{DissipationMode, ObservationNetwork, Role};
use entropy_nand::units::{element_entropy, landauer_energy};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let fresh = ObservationNetwork::default().with_element("a", Role::Plain)?.with_element("b", Role::Plain)?;
    let observed = fresh.observe("b", "a")?;
    println!("after b observes a: a = {} nats, b = {} nats", observed.entropy("a")?, observed.entropy("b")?);

    for mode in [DissipationMode::Retain, DissipationMode::Erase] {
        let net = observed.dissipate_to_environment("b", mode)?;
        net.reconcile()?;
        println!(
            "{mode:?}: b keeps {} split(s), environment absorbed {:.6} nats",
            net.splits("b")?,
            net.environment_absorbed()
        );
        print!("{}", net.ledger_csv());
    }

    println!("one split at T = 1: {:.6} nats", element_entropy(1, 1.0)?);
    println!("k_B T ln 2 at 300 K: {:e} J", landauer_energy(300.0)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("observation ledger example");
}
