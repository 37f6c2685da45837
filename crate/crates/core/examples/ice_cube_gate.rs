//! Heat-reservoir NAND: three ice cubes joined by entropy pumps, scored by
//! Monte Carlo across a range of pump noise levels.
//!
//! cargo run --release --example ice_cube_gate

use entropy_nand::thermo::{run_gate_trial, run_monte_carlo, ThermoConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let base = ThermoConfig::water_ice(10.0);
    for (a, b) in [(false, false), (true, true)] {
        let trial = run_gate_trial(a, b, &base, 0)?;
        let o = &trial.reservoirs[2];
        println!(
            "inputs {}{}: output cube melt fraction {:.3} at {:.2} K, u = {:.2}",
            u8::from(a),
            u8::from(b),
            o.melt_fraction,
            o.temperature,
            trial.u
        );
    }

    println!("sigma,min_accuracy");
    for sigma in [0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5] {
        let config = ThermoConfig { noise_sigma: sigma, ..base.clone() };
        let report = run_monte_carlo(&config, 2_000, 42)?;
        println!("{sigma},{}", report.min_accuracy());
    }

    let config = ThermoConfig { noise_sigma: 0.05, ..base };
    print!("{}", run_monte_carlo(&config, 10_000, 42)?.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("ice cube gate example");
}
