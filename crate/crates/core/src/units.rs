//! Entropy and energy conversions.
//!
//! Inside the model `k_B = 1` and entropy is counted in *splits*: one
//! observation doubles the observer's state count `m`, so an element that
//! has split `k` times holds `T ln 2^k` physical nats. SI units only appear
//! in [`landauer_energy`].

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boltzmann constant in J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380_649e-23;

fn check_temperature(temperature: f64) -> Result<()> {
    if temperature.is_finite() && temperature > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("temperature must be positive, got {temperature}")))
    }
}

/// Physical entropy `T ln m` of an element with `m = 2^splits` states.
pub fn element_entropy(splits: u32, temperature: f64) -> Result<f64> {
    check_temperature(temperature)?;
    Ok(splits_to_nats(u64::from(splits), temperature))
}

/// Converts a split count to physical nats without validating `temperature`.
pub(crate) fn splits_to_nats(splits: u64, temperature: f64) -> f64 {
    splits as f64 * temperature * LN_2
}

/// Minimum energy `k_B T ln 2` in joules to transfer or erase one bit at
/// `temperature_kelvin`.
pub fn landauer_energy(temperature_kelvin: f64) -> Result<f64> {
    check_temperature(temperature_kelvin)?;
    Ok(BOLTZMANN * temperature_kelvin * LN_2)
}

/// Binary entropy `H(p)` in nats, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability must lie in [0, 1], got {p}")));
    }
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.ln() };
    Ok(term(p) + term(1.0 - p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMode {
    /// Instantaneous peak: 1 at the midpoint of the transition, 0 elsewhere.
    Kronecker,
    /// Smooth peak following `H(t)`.
    BinaryEntropy,
}

/// Entropy of a one-bit element at progress `t` through a state change.
/// The midpoint of the transition is `t = 0.5`.
pub fn transition_profile(t: f64, mode: ProfileMode) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("transition progress must lie in [0, 1], got {t}")));
    }
    match mode {
        ProfileMode::Kronecker => Ok(if t == 0.5 { 1.0 } else { 0.0 }),
        ProfileMode::BinaryEntropy => binary_entropy(t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_entropy_values() {
        assert_eq!(element_entropy(0, 1.0).unwrap(), 0.0);
        assert!((element_entropy(1, 1.0).unwrap() - 2f64.ln()).abs() < 1e-9);
        assert!((element_entropy(2, 1.0).unwrap() - 4f64.ln()).abs() < 1e-9);
        assert!((element_entropy(3, 2.5).unwrap() - 2.5 * 8f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn non_positive_temperature_rejected() {
        assert!(matches!(element_entropy(1, 0.0), Err(Error::Domain(_))));
        assert!(matches!(element_entropy(1, -1.0), Err(Error::Domain(_))));
        assert!(matches!(landauer_energy(0.0), Err(Error::Domain(_))));
        assert!(matches!(landauer_energy(f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn landauer_values() {
        // Frozen from an independent evaluation of 1.380649e-23 * T * ln 2.
        assert!((landauer_energy(300.0).unwrap() - 2.870_978_885_078_724e-21).abs() < 1e-25);
        assert!((landauer_energy(1.0).unwrap() - 9.569_929_616_929_079e-24).abs() < 1e-28);
        assert_eq!(landauer_energy(600.0).unwrap(), 2.0 * landauer_energy(300.0).unwrap());
    }

    #[test]
    fn binary_entropy_values() {
        assert!((binary_entropy(0.5).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.25).unwrap() - 0.562_335_144_618_808_3).abs() < 1e-12);
        assert!(binary_entropy(-0.01).is_err());
        assert!(binary_entropy(1.01).is_err());
    }

    #[test]
    fn transition_profiles() {
        assert_eq!(transition_profile(0.5, ProfileMode::Kronecker).unwrap(), 1.0);
        assert_eq!(transition_profile(0.3, ProfileMode::Kronecker).unwrap(), 0.0);
        assert_eq!(transition_profile(0.0, ProfileMode::Kronecker).unwrap(), 0.0);
        assert!((transition_profile(0.5, ProfileMode::BinaryEntropy).unwrap() - LN_2).abs() < 1e-15);
        assert!(transition_profile(1.5, ProfileMode::Kronecker).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn entropy_is_additive_in_splits(k1 in 0u32..1000, k2 in 0u32..1000, t in 0.01f64..1e4) {
                let sum = element_entropy(k1, t).unwrap() + element_entropy(k2, t).unwrap();
                let joint = element_entropy(k1 + k2, t).unwrap();
                prop_assert!((sum - joint).abs() <= 1e-12 * joint.max(1.0));
            }

            #[test]
            fn binary_entropy_symmetric_and_bounded(p in 0.0f64..=1.0) {
                let h = binary_entropy(p).unwrap();
                prop_assert!((h - binary_entropy(1.0 - p).unwrap()).abs() < 1e-12);
                prop_assert!((0.0..=LN_2 + 1e-15).contains(&h));
            }
        }
    }
}
