//! Heat-reservoir analog of the entropy gate.
//!
//! Elements become reservoirs (ice cubes) and observations become entropy
//! pumps. Entropy flows from the observed reservoir into the observer, so an
//! input that is true is pumped *into* the output and an input that is false
//! drains it. Pump quanta carry multiplicative Gaussian noise, which makes the
//! gate statistical; the readout is the same threshold as the discrete gate.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{read_gate, GateKind, GateReadout, INPUT_ROWS};

/// Latent heat of fusion of water, J/g.
pub const WATER_HEAT_OF_FUSION: f64 = 334.0;
/// Melting point of water, K.
pub const WATER_MELTING_POINT: f64 = 273.15;
/// Specific heat of ice near the melting point, J/(g K).
pub const ICE_SPECIFIC_HEAT: f64 = 2.09;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reservoir {
    pub id: String,
    /// J/K.
    pub heat_capacity: f64,
    /// K.
    pub temperature: f64,
    pub melt_fraction: f64,
    /// Signed entropy change since the start of the run, J/K.
    pub accumulated_entropy: f64,
    /// Entropy that melts the reservoir completely, J/K.
    pub full_melt_entropy: f64,
    /// Lowest value `accumulated_entropy` may be pumped down to.
    pub entropy_floor: f64,
    /// Temperature at which the reservoir melts or freezes, K.
    pub phase_temperature: f64,
}

impl Reservoir {
    pub fn new(
        id: &str,
        heat_capacity: f64,
        temperature: f64,
        melt_fraction: f64,
        full_melt_entropy: f64,
        entropy_floor: f64,
    ) -> Result<Self> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(heat_capacity) || !positive(temperature) || !positive(full_melt_entropy) {
            return Err(Error::Config(format!(
                "reservoir `{id}` needs positive heat capacity, temperature and melt entropy"
            )));
        }
        if !(0.0..=1.0).contains(&melt_fraction) {
            return Err(Error::Config(format!("reservoir `{id}` melt fraction must lie in [0, 1]")));
        }
        if !(entropy_floor.is_finite() && entropy_floor <= 0.0) {
            return Err(Error::Config(format!("reservoir `{id}` entropy floor must be finite and <= 0")));
        }
        Ok(Self {
            id: id.to_owned(),
            heat_capacity,
            temperature,
            melt_fraction,
            accumulated_entropy: 0.0,
            full_melt_entropy,
            entropy_floor,
            phase_temperature: temperature,
        })
    }

    /// Books `delta` J/K against the reservoir's phase state. Away from the
    /// phase temperature the entropy is sensible heat, `dS = C dT / T`;
    /// at it, the entropy melts or freezes the reservoir.
    fn absorb(&mut self, delta: f64) {
        self.accumulated_entropy += delta;
        let mut remaining = delta;
        while remaining != 0.0 {
            let heating = remaining > 0.0;
            let off_plateau = if heating {
                self.temperature < self.phase_temperature
            } else {
                self.temperature > self.phase_temperature
            };
            if off_plateau {
                let to_plateau = self.heat_capacity * (self.phase_temperature / self.temperature).ln();
                if remaining.abs() < to_plateau.abs() {
                    self.temperature *= (remaining / self.heat_capacity).exp();
                    remaining = 0.0;
                } else {
                    self.temperature = self.phase_temperature;
                    remaining -= to_plateau;
                }
                continue;
            }
            let room = if heating { 1.0 - self.melt_fraction } else { -self.melt_fraction } * self.full_melt_entropy;
            if room == 0.0 {
                self.temperature *= (remaining / self.heat_capacity).exp();
                remaining = 0.0;
            } else if remaining.abs() <= room.abs() {
                self.melt_fraction = (self.melt_fraction + remaining / self.full_melt_entropy).clamp(0.0, 1.0);
                remaining = 0.0;
            } else {
                self.melt_fraction = if heating { 1.0 } else { 0.0 };
                remaining -= room;
            }
        }
    }
}

/// Directional entropy pump from `source` to `sink`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpLink {
    pub source: String,
    pub sink: String,
    /// Entropy moved per activation, J/K.
    pub quantum: f64,
    /// Relative standard deviation of the quantum.
    pub noise_sigma: f64,
}

impl PumpLink {
    pub fn new(source: &str, sink: &str, quantum: f64, noise_sigma: f64) -> Result<Self> {
        if !(quantum.is_finite() && quantum > 0.0) {
            return Err(Error::Config(format!("pump quantum must be positive, got {quantum}")));
        }
        if !(noise_sigma.is_finite() && noise_sigma >= 0.0) {
            return Err(Error::Config(format!("noise sigma must be >= 0, got {noise_sigma}")));
        }
        Ok(Self { source: source.to_owned(), sink: sink.to_owned(), quantum, noise_sigma })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PumpOutcome {
    pub source: Reservoir,
    pub sink: Reservoir,
    /// Entropy actually moved, J/K.
    pub transferred: f64,
}

/// One pump activation. The nominal transfer `quantum * (1 + sigma z)` with
/// `z ~ N(0, 1)` is cut to zero if negative and to whatever the source can
/// give above its floor; the sink gains exactly what the source loses.
pub fn pump_step<R: Rng + ?Sized>(
    source: &Reservoir,
    sink: &Reservoir,
    link: &PumpLink,
    rng: &mut R,
) -> Result<PumpOutcome> {
    if link.source != source.id || link.sink != sink.id {
        return Err(Error::Config(format!(
            "pump {} -> {} does not connect {} -> {}",
            link.source, link.sink, source.id, sink.id
        )));
    }
    // Always draw, so runs with different sigmas share their random numbers.
    let z: f64 = rng.sample(StandardNormal);
    let nominal = (link.quantum * (1.0 + link.noise_sigma * z)).max(0.0);
    let available = (source.accumulated_entropy - source.entropy_floor).max(0.0);
    let transferred = nominal.min(available);
    let (mut source, mut sink) = (source.clone(), sink.clone());
    source.absorb(-transferred);
    sink.absorb(transferred);
    Ok(PumpOutcome { source, sink, transferred })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReservoirConfig {
    pub id: String,
    pub heat_capacity: f64,
    pub temperature: f64,
    #[serde(default = "half")]
    pub melt_fraction: f64,
    pub full_melt_entropy: f64,
}

fn half() -> f64 {
    0.5
}

/// Thermal link between an input reservoir and the output reservoir. Its
/// direction is set per trial by the input value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PumpConfig {
    pub input: String,
    pub output: String,
}

/// Gate configuration. The first pump carries input `a`, the second input `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoConfig {
    pub reservoirs: Vec<ReservoirConfig>,
    pub pumps: Vec<PumpConfig>,
    pub quantum: f64,
    pub noise_sigma: f64,
    #[serde(default = "one_step")]
    pub n_steps: u32,
    /// Entropy floor shared by all reservoirs; defaults to two full pump
    /// budgets below zero, `-2 * n_steps * quantum`.
    #[serde(default)]
    pub floor: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

fn one_step() -> u32 {
    1
}

impl Default for ThermoConfig {
    /// Abstract units: unit heat capacity and temperature, half-melted cubes.
    fn default() -> Self {
        let cube = |id: &str| ReservoirConfig {
            id: id.to_owned(),
            heat_capacity: 1.0,
            temperature: 1.0,
            melt_fraction: 0.5,
            full_melt_entropy: 4.0,
        };
        Self {
            reservoirs: vec![cube("a"), cube("b"), cube("o")],
            pumps: vec![
                PumpConfig { input: "a".into(), output: "o".into() },
                PumpConfig { input: "b".into(), output: "o".into() },
            ],
            quantum: 1.0,
            noise_sigma: 0.0,
            n_steps: 1,
            floor: None,
            seed: 0,
        }
    }
}

impl ThermoConfig {
    /// Three half-melted ice cubes of `grams` each at the melting point; one
    /// pump activation moves an eighth of a cube's melt entropy.
    pub fn water_ice(grams: f64) -> Self {
        let full_melt_entropy = WATER_HEAT_OF_FUSION * grams / WATER_MELTING_POINT;
        let cube = |id: &str| ReservoirConfig {
            id: id.to_owned(),
            heat_capacity: ICE_SPECIFIC_HEAT * grams,
            temperature: WATER_MELTING_POINT,
            melt_fraction: 0.5,
            full_melt_entropy,
        };
        Self { reservoirs: vec![cube("a"), cube("b"), cube("o")], quantum: full_melt_entropy / 8.0, ..Self::default() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn floor(&self) -> f64 {
        self.floor.unwrap_or(-2.0 * f64::from(self.n_steps) * self.quantum)
    }

    /// Largest entropy the output can gain: both pumps feed it every step.
    pub fn max_output_entropy(&self) -> f64 {
        2.0 * f64::from(self.n_steps) * self.quantum
    }

    pub fn validate(&self) -> Result<()> {
        PumpLink::new("a", "o", self.quantum, self.noise_sigma)?;
        if self.n_steps == 0 {
            return Err(Error::Config("n_steps must be at least 1".into()));
        }
        if !(self.floor().is_finite() && self.floor() < 0.0) {
            return Err(Error::Config(format!("floor must be negative, got {}", self.floor())));
        }
        for (i, r) in self.reservoirs.iter().enumerate() {
            if self.reservoirs[..i].iter().any(|o| o.id == r.id) {
                return Err(Error::Config(format!("reservoir `{}` listed twice", r.id)));
            }
        }
        if self.pumps.len() != 2 {
            return Err(Error::Config(format!("the gate needs exactly 2 pumps, got {}", self.pumps.len())));
        }
        let (p, q) = (&self.pumps[0], &self.pumps[1]);
        if p.output != q.output || p.input == q.input || p.input == p.output || q.input == q.output {
            return Err(Error::Config("pumps must join two distinct inputs to one output".into()));
        }
        for id in [&p.input, &q.input, &p.output] {
            if !self.reservoirs.iter().any(|r| &r.id == id) {
                return Err(Error::Config(format!("pump refers to unknown reservoir `{id}`")));
            }
        }
        self.initial_reservoirs().map(|_| ())
    }

    fn initial_reservoirs(&self) -> Result<Vec<Reservoir>> {
        self.reservoirs
            .iter()
            .map(|r| {
                Reservoir::new(
                    &r.id,
                    r.heat_capacity,
                    r.temperature,
                    r.melt_fraction,
                    r.full_melt_entropy,
                    self.floor(),
                )
            })
            .collect()
    }

    /// Maps the output's accumulated entropy onto `[0, 1]`: the floor goes to
    /// 0, zero to 0.5 and the two-pump maximum to 1, linearly in between.
    pub fn normalize_output(&self, accumulated: f64) -> f64 {
        let u = if accumulated >= 0.0 {
            0.5 + 0.5 * accumulated / self.max_output_entropy()
        } else {
            0.5 * (1.0 - accumulated / self.floor())
        };
        u.clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateTrial {
    pub u: f64,
    pub output: bool,
    pub reservoirs: Vec<Reservoir>,
}

impl GateTrial {
    pub fn total_entropy(&self) -> f64 {
        self.reservoirs.iter().map(|r| r.accumulated_entropy).sum()
    }

    /// Sum of absolute entropy changes, the scale for conservation checks.
    pub fn entropy_scale(&self) -> f64 {
        self.reservoirs.iter().map(|r| r.accumulated_entropy.abs()).sum()
    }
}

/// Runs one gate evaluation with its own RNG seeded from `seed`.
pub fn run_gate_trial(a: bool, b: bool, config: &ThermoConfig, seed: u64) -> Result<GateTrial> {
    config.validate()?;
    run_trial(a, b, config, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn run_trial<R: Rng + ?Sized>(a: bool, b: bool, config: &ThermoConfig, rng: &mut R) -> Result<GateTrial> {
    let mut reservoirs = config.initial_reservoirs()?;
    let index = |id: &str| reservoirs.iter().position(|r| r.id == id).expect("validated reservoir id");
    let links: Vec<(usize, usize, PumpLink)> = config
        .pumps
        .iter()
        .zip([a, b])
        .map(|(pump, value)| {
            // True input: the output observes it, entropy flows input -> output.
            let (from, to) = if value { (&pump.input, &pump.output) } else { (&pump.output, &pump.input) };
            let link = PumpLink::new(from, to, config.quantum, config.noise_sigma)?;
            Ok((index(from), index(to), link))
        })
        .collect::<Result<_>>()?;
    let output_idx = index(&config.pumps[0].output);

    for _ in 0..config.n_steps {
        for (src, dst, link) in &links {
            let step = pump_step(&reservoirs[*src], &reservoirs[*dst], link, rng)?;
            reservoirs[*src] = step.source;
            reservoirs[*dst] = step.sink;
        }
    }
    let u = config.normalize_output(reservoirs[output_idx].accumulated_entropy);
    let output = read_gate(u, GateKind::Nand, &GateReadout::default());
    Ok(GateTrial { u, output, reservoirs })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairStats {
    pub a: bool,
    pub b: bool,
    pub trials: u32,
    pub correct: u32,
    pub accuracy: f64,
    pub mean_u: f64,
    pub std_u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub noise_sigma: f64,
    pub seed: u64,
    pub rows: Vec<PairStats>,
    /// Largest `|sum of accumulated entropy| / scale` over all trials.
    pub max_conservation_error: f64,
}

impl MonteCarloReport {
    pub fn accuracy(&self, a: bool, b: bool) -> f64 {
        self.rows.iter().find(|r| r.a == a && r.b == b).map_or(0.0, |r| r.accuracy)
    }

    pub fn min_accuracy(&self) -> f64 {
        self.rows.iter().map(|r| r.accuracy).fold(f64::INFINITY, f64::min)
    }

    /// `a,b,trials,correct,accuracy,mean_u,std_u`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,trials,correct,accuracy,mean_u,std_u\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                u8::from(r.a),
                u8::from(r.b),
                r.trials,
                r.correct,
                r.accuracy,
                r.mean_u,
                r.std_u
            );
        }
        out
    }
}

/// RNG for trial `trial` of input row `row`: one ChaCha stream per trial, so
/// results do not depend on scheduling.
fn trial_rng(seed: u64, row: usize, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((row as u64) << 32) | u64::from(trial));
    rng
}

/// `trials` independent gate trials for each input row, scored against the
/// ideal NAND. Trials run on the current rayon pool; the report does not
/// depend on the thread count.
pub fn run_monte_carlo(config: &ThermoConfig, trials: u32, seed: u64) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    config.validate()?;
    let mut rows = Vec::with_capacity(4);
    let mut max_conservation_error: f64 = 0.0;
    for (row, &(a, b)) in INPUT_ROWS.iter().enumerate() {
        let results: Vec<(f64, bool, f64)> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let trial = run_trial(a, b, config, &mut trial_rng(seed, row, t))?;
                let scale = trial.entropy_scale();
                let drift = if scale > 0.0 { trial.total_entropy().abs() / scale } else { 0.0 };
                Ok((trial.u, trial.output, drift))
            })
            .collect::<Result<_>>()?;
        let expected = GateKind::Nand.apply(a, b);
        let correct = results.iter().filter(|r| r.1 == expected).count() as u32;
        let n = f64::from(trials);
        let mean_u = results.iter().map(|r| r.0).sum::<f64>() / n;
        let var = results.iter().map(|r| (r.0 - mean_u).powi(2)).sum::<f64>() / n;
        max_conservation_error = results.iter().map(|r| r.2).fold(max_conservation_error, f64::max);
        rows.push(PairStats { a, b, trials, correct, accuracy: f64::from(correct) / n, mean_u, std_u: var.sqrt() });
    }
    Ok(MonteCarloReport { noise_sigma: config.noise_sigma, seed, rows, max_conservation_error })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(id: &str) -> Reservoir {
        Reservoir::new(id, 1.0, 1.0, 0.5, 4.0, -2.0).unwrap()
    }

    #[test]
    fn noiseless_pump_conserves_exactly() {
        let link = PumpLink::new("s", "t", 1.0, 0.0).unwrap();
        let out = pump_step(&cube("s"), &cube("t"), &link, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(out.transferred, 1.0);
        assert_eq!(out.source.accumulated_entropy, -1.0);
        assert_eq!(out.sink.accumulated_entropy, 1.0);
        assert_eq!(out.source.melt_fraction, 0.25);
        assert_eq!(out.sink.melt_fraction, 0.75);
    }

    #[test]
    fn pump_respects_floor() {
        let link = PumpLink::new("s", "t", 1.5, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (mut s, mut t) = (cube("s"), cube("t"));
        for _ in 0..3 {
            let out = pump_step(&s, &t, &link, &mut rng).unwrap();
            s = out.source;
            t = out.sink;
        }
        assert_eq!(s.accumulated_entropy, -2.0);
        assert_eq!(t.accumulated_entropy, 2.0);
    }

    #[test]
    fn mismatched_link_rejected() {
        let link = PumpLink::new("x", "t", 1.0, 0.0).unwrap();
        let r = pump_step(&cube("s"), &cube("t"), &link, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn phase_accounting() {
        let mut r = cube("r");
        r.absorb(3.0); // 2 J/K melts the remaining half, 1 J/K is sensible heat
        assert_eq!(r.melt_fraction, 1.0);
        assert!((r.temperature - 1f64.exp()).abs() < 1e-12);
        r.absorb(-2.0); // cool back to the plateau, then freeze a quarter
        assert!((r.temperature - 1.0).abs() < 1e-12);
        assert!((r.melt_fraction - 0.75).abs() < 1e-12);
        r.absorb(-5.0); // freeze the rest, then subcool by 2 J/K
        assert_eq!(r.melt_fraction, 0.0);
        assert!((r.temperature - (-2f64).exp()).abs() < 1e-12);
        assert!((r.accumulated_entropy + 4.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_pump_mean_tracks_quantum() {
        let link = PumpLink::new("s", "t", 1.0, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let source = Reservoir::new("s", 1.0, 1.0, 0.5, 4.0, -1e9).unwrap();
        let sink = cube("t");
        let n = 10_000;
        let total: f64 = (0..n).map(|_| pump_step(&source, &sink, &link, &mut rng).unwrap().transferred).sum();
        assert!((total / f64::from(n) - 1.0).abs() < 0.01);
    }

    #[test]
    fn zero_noise_trials_match_discrete_levels() {
        let config = ThermoConfig::default();
        let u = |a, b| run_gate_trial(a, b, &config, 3).unwrap();
        assert_eq!(u(true, true).u, 1.0);
        assert!(!u(true, true).output);
        assert_eq!(u(false, false).u, 0.0);
        assert!(u(false, false).output);
        assert_eq!(u(true, false).u, 0.5);
        assert_eq!(u(false, true).u, 0.5);
    }

    #[test]
    fn multi_step_trials_keep_anchor_levels() {
        let config = ThermoConfig { n_steps: 5, ..ThermoConfig::default() };
        for (a, b) in INPUT_ROWS {
            let trial = run_gate_trial(a, b, &config, 0).unwrap();
            let expected = [0.0, 0.5, 0.5, 1.0][2 * usize::from(a) + usize::from(b)];
            assert!((trial.u - expected).abs() < 1e-12, "{a} {b}: {}", trial.u);
        }
    }

    #[test]
    fn config_validation() {
        let mut c = ThermoConfig::default();
        c.pumps.pop();
        assert!(c.validate().is_err());
        let c = ThermoConfig { n_steps: 0, ..ThermoConfig::default() };
        assert!(c.validate().is_err());
        let c = ThermoConfig { floor: Some(0.5), ..ThermoConfig::default() };
        assert!(c.validate().is_err());
        let c = ThermoConfig { noise_sigma: -0.1, ..ThermoConfig::default() };
        assert!(c.validate().is_err());
        let mut c = ThermoConfig::default();
        c.pumps[1].input = "zz".into();
        assert!(c.validate().is_err());
        assert!(run_monte_carlo(&ThermoConfig::default(), 0, 1).is_err());
    }

    #[test]
    fn config_json_defaults() {
        let text = r#"{"reservoirs": [
            {"id": "a", "heat_capacity": 1, "temperature": 1, "full_melt_entropy": 4},
            {"id": "b", "heat_capacity": 1, "temperature": 1, "full_melt_entropy": 4},
            {"id": "o", "heat_capacity": 1, "temperature": 1, "full_melt_entropy": 4}],
            "pumps": [{"input": "a", "output": "o"}, {"input": "b", "output": "o"}],
            "quantum": 1.0, "noise_sigma": 0.05}"#;
        let c = ThermoConfig::from_json(text).unwrap();
        assert_eq!(c.n_steps, 1);
        assert_eq!(c.floor(), -2.0);
        assert_eq!(c.reservoirs[0].melt_fraction, 0.5);
    }

    #[test]
    fn water_preset_is_valid() {
        let c = ThermoConfig::water_ice(10.0);
        c.validate().unwrap();
        assert!((c.reservoirs[0].full_melt_entropy - 3340.0 / 273.15).abs() < 1e-12);
        let report = run_monte_carlo(&c, 50, 9).unwrap();
        assert_eq!(report.min_accuracy(), 1.0);
    }

    #[test]
    fn report_csv_layout() {
        let report = run_monte_carlo(&ThermoConfig::default(), 4, 1).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("a,b,trials,correct,accuracy,mean_u,std_u"));
        assert_eq!(lines.next(), Some("0,0,4,4,1,0,0"));
        assert_eq!(lines.last(), Some("1,1,4,4,1,1,0"));
    }
}
