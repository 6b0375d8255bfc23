//! Scenario ingestion, validation, and per-slot geometry.
//!
//! A scenario describes one flight: the ground control unit (GCU) position,
//! per-UAV trajectories sampled once per time slot, the channel grid, the
//! power budget, link types, priority weights, the external-interference (EI)
//! field, and the solver knobs. Scenarios are immutable after validation and
//! safe to share across concurrent slot solves.
//!
//! The EI field is one plausible instantiation of "L radiation sources across
//! the region": each source radiates a configured power, attenuates as
//! free-space `1/d^2` normalized to a reference distance, and carries a
//! per-channel spectral profile (flat, or peaked at a per-source random
//! channel). A strictly positive receiver noise floor is always added so no
//! channel is ever interference-free.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::rng::{self, tags};
use crate::units::dbm_to_mw;
use rand::Rng;

/// Minimum UAV-to-source distance (meters) used in the EI attenuation; keeps
/// a source that a trajectory grazes from producing an infinite power.
const MIN_SOURCE_DISTANCE_M: f64 = 1.0;

// ─── Configuration types ───────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkType {
    Los,
    Nlos,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiationSource {
    /// Emitter position, meters.
    pub position: [f64; 3],
    /// Radiated power observed at the reference distance, dBm.
    pub power_dbm: f64,
}

/// Per-source spectral shape of the EI field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EiSpectralProfile {
    /// Every channel sees the same source power.
    #[default]
    Flat,
    /// Each source concentrates around one random channel (drawn from
    /// `solver_knobs.rng_seed`); `width_channels` is the Gaussian width.
    Peaked { width_channels: f64 },
}

/// Adjacent-channel interference profile: coefficient as a function of
/// channel separation in MHz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AciProfileConfig {
    /// `exp(-separation / scale)`; `scale_mhz = None` uses the channel spacing.
    Exponential { scale_mhz: Option<f64> },
    /// Step table: value `values[i]` applies from `separations_mhz[i]`
    /// (inclusive) up to the next knot; beyond the last knot the last value
    /// holds. Must start at separation 0 with value 1 and be nonincreasing.
    Table {
        separations_mhz: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Default for AciProfileConfig {
    fn default() -> Self {
        AciProfileConfig::Exponential { scale_mhz: None }
    }
}

/// Solver tuning parameters; every field has a sensible default so scenario
/// files only list what they override.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverKnobs {
    /// Exponent applied to the occupancy quadratic form in the smoothed
    /// assignment objective; integer >= 1.
    pub tau: u32,
    /// Smoothing parameter of the log-sum-exp surrogate. `None` picks
    /// `0.05 * |initial min component|` at solve time.
    pub mu_smooth: Option<f64>,
    /// Diagonal penalty of the conflict-penalized ACI matrix. `None` picks
    /// `1e3 * max off-diagonal coefficient`.
    pub w_diag_penalty: Option<f64>,
    /// Minimum fractional min-SINR improvement required to hand a UAV over to
    /// a new channel between slots. `None` disables the handover policy.
    pub handover_theta: Option<f64>,
    pub armijo_init_step: f64,
    pub armijo_shrink: f64,
    pub armijo_slope: f64,
    pub armijo_max_backtracks: u32,
    /// Gradient-projection iteration cap (inner loop).
    pub gp_max_iter: u32,
    pub gp_tol: f64,
    /// Alternating-optimization iteration cap (outer loop).
    pub ao_max_iter: u32,
    pub ao_tol: f64,
    pub rng_seed: u64,
}

impl Default for SolverKnobs {
    fn default() -> Self {
        SolverKnobs {
            tau: 2,
            mu_smooth: None,
            w_diag_penalty: None,
            handover_theta: None,
            armijo_init_step: 1.0,
            armijo_shrink: 0.5,
            armijo_slope: 1e-4,
            armijo_max_backtracks: 30,
            gp_max_iter: 200,
            gp_tol: 1e-6,
            ao_max_iter: 30,
            ao_tol: 1e-6,
            rng_seed: 0,
        }
    }
}

/// Full experiment description. See `ScenarioConfig::validate` for the
/// invariants enforced on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// K, number of UAVs.
    pub uav_count: usize,
    /// N, number of channels; each UAV needs a distinct channel, so N >= K.
    pub channel_count: usize,
    /// S, number of time slots.
    pub slot_count: usize,
    /// GCU position, meters.
    pub gcu_position: [f64; 3],
    /// Per-UAV list of exactly S positions, meters.
    pub uav_trajectories: Vec<Vec<[f64; 3]>>,
    /// Baseline carrier frequency F, MHz; channel n sits at `F + n * spacing`.
    pub base_freq_mhz: f64,
    /// Channel spacing, MHz.
    pub channel_spacing_mhz: f64,
    /// GCU power budget, dBm.
    pub p_max_dbm: f64,
    /// Additional path loss on line-of-sight links, dB.
    pub eta_los_db: f64,
    /// Additional path loss on non-line-of-sight links, dB.
    pub eta_nlos_db: f64,
    /// Per-UAV-per-slot link type; omitted means all LoS.
    #[serde(default)]
    pub link_types: Option<Vec<Vec<LinkType>>>,
    /// External radiation sources.
    #[serde(default)]
    pub radiation_sources: Vec<RadiationSource>,
    /// Priority weights, one per UAV, all > 0. A smaller weight means a more
    /// urgent sub-task (priority coefficient is the reciprocal).
    pub weights: Vec<f64>,
    /// Receiver noise floor, dBm; keeps every EI entry strictly positive.
    #[serde(default = "default_noise_floor_dbm")]
    pub noise_floor_dbm: f64,
    /// Distance at which a source delivers exactly its configured power, m.
    #[serde(default = "default_ei_reference_distance_m")]
    pub ei_reference_distance_m: f64,
    #[serde(default)]
    pub ei_spectral_profile: EiSpectralProfile,
    #[serde(default)]
    pub aci_profile: AciProfileConfig,
    #[serde(default)]
    pub solver_knobs: SolverKnobs,
}

fn default_noise_floor_dbm() -> f64 {
    -100.0
}

fn default_ei_reference_distance_m() -> f64 {
    1000.0
}

// ─── Loading and validation ────────────────────────────────────────────────

/// Loads a scenario file (JSON) and validates every invariant.
pub fn load_scenario(path: impl AsRef<std::path::Path>) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    ScenarioConfig::from_json(&text)
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<ScenarioConfig> {
        let cfg: ScenarioConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let (k, n, s) = (self.uav_count, self.channel_count, self.slot_count);
        if k < 1 {
            return Err(Error::validation("K ≥ 1 violated: no UAVs"));
        }
        if s < 1 {
            return Err(Error::validation("S ≥ 1 violated: no time slots"));
        }
        if n < k {
            return Err(Error::validation(format!(
                "N ≥ K violated: {n} channels cannot carry {k} UAVs on distinct channels"
            )));
        }
        if self.uav_trajectories.len() != k {
            return Err(Error::validation(format!(
                "expected {k} trajectories, found {}",
                self.uav_trajectories.len()
            )));
        }
        for (idx, traj) in self.uav_trajectories.iter().enumerate() {
            if traj.len() != s {
                return Err(Error::validation(format!(
                    "trajectory of UAV {idx} has {} positions, expected exactly S={s}",
                    traj.len()
                )));
            }
        }
        if self.weights.len() != k {
            return Err(Error::validation(format!(
                "expected {k} weights, found {}",
                self.weights.len()
            )));
        }
        if self.weights.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::validation("all priority weights must be finite and > 0"));
        }
        if !self.p_max_dbm.is_finite() {
            return Err(Error::validation("p_max_dbm must be finite"));
        }
        if !(self.channel_spacing_mhz > 0.0) {
            return Err(Error::validation("channel_spacing_mhz must be > 0"));
        }
        if !(self.base_freq_mhz > 0.0) {
            return Err(Error::validation("base_freq_mhz must be > 0"));
        }
        if !self.noise_floor_dbm.is_finite() {
            return Err(Error::validation("noise_floor_dbm must be finite"));
        }
        if !(self.ei_reference_distance_m > 0.0) {
            return Err(Error::validation("ei_reference_distance_m must be > 0"));
        }
        if let Some(links) = &self.link_types {
            if links.len() != k || links.iter().any(|row| row.len() != s) {
                return Err(Error::validation(
                    "link_types must be a K x S table when present",
                ));
            }
        }
        for (idx, src) in self.radiation_sources.iter().enumerate() {
            if !src.power_dbm.is_finite() || src.position.iter().any(|c| !c.is_finite()) {
                return Err(Error::validation(format!(
                    "radiation source {idx} has non-finite fields"
                )));
            }
        }
        if let EiSpectralProfile::Peaked { width_channels } = self.ei_spectral_profile {
            if !(width_channels > 0.0) {
                return Err(Error::validation("peaked EI profile needs width_channels > 0"));
            }
        }
        if let AciProfileConfig::Table {
            separations_mhz,
            values,
        } = &self.aci_profile
        {
            validate_aci_table(separations_mhz, values)?;
        }
        self.solver_knobs.validate()?;
        Ok(())
    }

    pub fn p_max_mw(&self) -> f64 {
        dbm_to_mw(self.p_max_dbm)
    }

    pub fn noise_floor_mw(&self) -> f64 {
        dbm_to_mw(self.noise_floor_dbm)
    }

    /// Channel grid `f_n = F + n * spacing`, n = 1..=N. Strictly increasing.
    pub fn channel_freqs_mhz(&self) -> Vec<f64> {
        (1..=self.channel_count)
            .map(|n| self.base_freq_mhz + n as f64 * self.channel_spacing_mhz)
            .collect()
    }

    /// Additional path loss for UAV `k` at slot `s`, dB.
    pub fn eta_db(&self, k: usize, s: usize) -> f64 {
        let link = match &self.link_types {
            Some(table) => table[k][s],
            None => LinkType::Los,
        };
        match link {
            LinkType::Los => self.eta_los_db,
            LinkType::Nlos => self.eta_nlos_db,
        }
    }
}

impl SolverKnobs {
    pub fn validate(&self) -> Result<()> {
        if self.tau < 1 {
            return Err(Error::validation("tau must be an integer >= 1"));
        }
        if let Some(mu) = self.mu_smooth {
            if !(mu > 0.0) {
                return Err(Error::validation("mu_smooth must be > 0 when set"));
            }
        }
        if let Some(w) = self.w_diag_penalty {
            if !(w >= 1.0) {
                return Err(Error::validation("w_diag_penalty must be >= 1 when set"));
            }
        }
        if let Some(theta) = self.handover_theta {
            if !(theta >= 0.0) {
                return Err(Error::validation("handover_theta must be >= 0 when set"));
            }
        }
        if !(self.armijo_init_step > 0.0 && self.armijo_init_step <= 1.0) {
            return Err(Error::validation("armijo_init_step must lie in (0, 1]"));
        }
        if !(self.armijo_shrink > 0.0 && self.armijo_shrink < 1.0) {
            return Err(Error::validation("armijo_shrink must lie in (0, 1)"));
        }
        if !(self.armijo_slope > 0.0 && self.armijo_slope < 1.0) {
            return Err(Error::validation("armijo_slope must lie in (0, 1)"));
        }
        if self.gp_max_iter < 1 || self.ao_max_iter < 1 {
            return Err(Error::validation("iteration caps must be >= 1"));
        }
        if !(self.gp_tol > 0.0 && self.ao_tol > 0.0) {
            return Err(Error::validation("tolerances must be > 0"));
        }
        Ok(())
    }
}

pub(crate) fn validate_aci_table(separations: &[f64], values: &[f64]) -> Result<()> {
    if separations.len() != values.len() || separations.is_empty() {
        return Err(Error::validation(
            "ACI table needs matching, nonempty separation and value lists",
        ));
    }
    if separations[0] != 0.0 || values[0] != 1.0 {
        return Err(Error::validation("ACI table must start at separation 0 with value 1"));
    }
    if separations.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation("ACI table separations must be strictly increasing"));
    }
    if values.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        return Err(Error::validation("ACI table values must lie in [0, 1]"));
    }
    if values.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::validation("ACI table values must be nonincreasing"));
    }
    Ok(())
}

// ─── Per-slot geometry ─────────────────────────────────────────────────────

/// Geometry and interference of a single time slot. Immutable.
#[derive(Debug, Clone)]
pub struct SlotGeometry {
    /// GCU-to-UAV distance per UAV, meters; all > 0.
    pub distances_m: Vec<f64>,
    /// Channel grid, MHz.
    pub freqs_mhz: Vec<f64>,
    /// EI-plus-noise power per UAV per channel, linear mW; K x N, all > 0.
    pub ei_mw: Mat,
}

fn euclid(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// Computes the slot geometry: distances, channel grid, and the EI field.
pub fn slot_geometry(cfg: &ScenarioConfig, s: usize) -> Result<SlotGeometry> {
    if s >= cfg.slot_count {
        return Err(Error::domain(format!(
            "slot index {s} out of range (S={})",
            cfg.slot_count
        )));
    }
    let k = cfg.uav_count;
    let n = cfg.channel_count;

    let mut distances_m = Vec::with_capacity(k);
    for (idx, traj) in cfg.uav_trajectories.iter().enumerate() {
        let d = euclid(traj[s], cfg.gcu_position);
        if !(d > 0.0) {
            return Err(Error::validation(format!(
                "UAV {idx} coincides with the GCU at slot {s}; distance must be > 0"
            )));
        }
        distances_m.push(d);
    }

    let freqs_mhz = cfg.channel_freqs_mhz();
    let floor = cfg.noise_floor_mw();
    let spectral = spectral_factors(cfg);

    let ei_mw = Mat::from_fn(k, n, |uav, ch| {
        let mut total = floor;
        for (idx, src) in cfg.radiation_sources.iter().enumerate() {
            let d = euclid(cfg.uav_trajectories[uav][s], src.position).max(MIN_SOURCE_DISTANCE_M);
            let atten = (cfg.ei_reference_distance_m / d).powi(2);
            total += dbm_to_mw(src.power_dbm) * atten * spectral[idx][ch];
        }
        total
    });

    Ok(SlotGeometry {
        distances_m,
        freqs_mhz,
        ei_mw,
    })
}

/// Per-source per-channel spectral factors. Peaks are drawn once per source
/// from the scenario seed, so the spectrum of an emitter is stable over the
/// flight.
fn spectral_factors(cfg: &ScenarioConfig) -> Vec<Vec<f64>> {
    let n = cfg.channel_count;
    cfg.radiation_sources
        .iter()
        .enumerate()
        .map(|(idx, _)| match cfg.ei_spectral_profile {
            EiSpectralProfile::Flat => vec![1.0; n],
            EiSpectralProfile::Peaked { width_channels } => {
                let mut rng = rng::stream(
                    cfg.solver_knobs.rng_seed,
                    tags::SPECTRAL.wrapping_add(idx as u64),
                );
                let peak = rng.random_range(0..n) as f64;
                (0..n)
                    .map(|ch| {
                        let z = (ch as f64 - peak) / width_channels;
                        0.1 + 0.9 * (-0.5 * z * z).exp()
                    })
                    .collect()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json() -> String {
        r#"{
            "uav_count": 1, "channel_count": 1, "slot_count": 1,
            "gcu_position": [0, 0, 0],
            "uav_trajectories": [[[1000, 0, 0]]],
            "base_freq_mhz": 500, "channel_spacing_mhz": 5,
            "p_max_dbm": 30, "eta_los_db": 3, "eta_nlos_db": 23,
            "weights": [1.0]
        }"#
        .to_string()
    }

    #[test]
    fn minimal_config_is_valid() {
        let cfg = ScenarioConfig::from_json(&minimal_json()).unwrap();
        assert_eq!((cfg.uav_count, cfg.channel_count, cfg.slot_count), (1, 1, 1));
    }

    #[test]
    fn more_uavs_than_channels_is_rejected() {
        let json = minimal_json()
            .replace("\"uav_count\": 1", "\"uav_count\": 3")
            .replace("\"channel_count\": 1", "\"channel_count\": 2")
            .replace(
                "\"uav_trajectories\": [[[1000, 0, 0]]]",
                "\"uav_trajectories\": [[[1000, 0, 0]], [[900, 0, 0]], [[800, 0, 0]]]",
            )
            .replace("\"weights\": [1.0]", "\"weights\": [1.0, 1.0, 1.0]");
        let err = ScenarioConfig::from_json(&json).unwrap_err();
        assert!(err.to_string().contains("N ≥ K violated"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let json = minimal_json().replace("\"weights\": [1.0]", "\"weights\": [1.0], \"wat\": 1");
        assert!(ScenarioConfig::from_json(&json).is_err());
    }

    #[test]
    fn trajectory_length_must_match_slot_count() {
        let json = minimal_json().replace("\"slot_count\": 1", "\"slot_count\": 2");
        let err = ScenarioConfig::from_json(&json).unwrap_err();
        assert!(err.to_string().contains("exactly S=2"), "{err}");
    }

    #[test]
    fn distance_is_euclidean() {
        let cfg = ScenarioConfig::from_json(&minimal_json()).unwrap();
        let geom = slot_geometry(&cfg, 0).unwrap();
        assert_eq!(geom.distances_m, vec![1000.0]);
    }

    #[test]
    fn channel_grid_starts_one_spacing_above_base() {
        let json = minimal_json().replace("\"channel_count\": 1", "\"channel_count\": 3");
        let cfg = ScenarioConfig::from_json(&json).unwrap();
        assert_eq!(cfg.channel_freqs_mhz(), vec![505.0, 510.0, 515.0]);
    }

    #[test]
    fn slot_index_out_of_range() {
        let cfg = ScenarioConfig::from_json(&minimal_json()).unwrap();
        assert!(matches!(slot_geometry(&cfg, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn flat_single_source_at_reference_distance_gives_its_power() {
        // One -10 dBm source exactly at the reference distance from the UAV:
        // every channel sees 0.1 mW (plus the tiny noise floor).
        let json = minimal_json().replace(
            "\"weights\": [1.0]",
            "\"weights\": [1.0], \"radiation_sources\": [{\"position\": [1000, 1000, 0], \"power_dbm\": -10}], \"ei_reference_distance_m\": 1000.0",
        );
        let cfg = ScenarioConfig::from_json(&json).unwrap();
        let geom = slot_geometry(&cfg, 0).unwrap();
        let got = geom.ei_mw[(0, 0)];
        assert!((got - 0.1).abs() / 0.1 < 1e-8, "got {got}");
    }

    #[test]
    fn distances_invariant_under_rigid_translation() {
        let base = ScenarioConfig::from_json(&minimal_json()).unwrap();
        let mut moved = base.clone();
        let shift = [123.0, -42.5, 9.0];
        for c in 0..3 {
            moved.gcu_position[c] += shift[c];
        }
        for traj in &mut moved.uav_trajectories {
            for pos in traj.iter_mut() {
                for c in 0..3 {
                    pos[c] += shift[c];
                }
            }
        }
        let a = slot_geometry(&base, 0).unwrap();
        let b = slot_geometry(&moved, 0).unwrap();
        for (x, y) in a.distances_m.iter().zip(&b.distances_m) {
            assert!((x - y).abs() < 1e-9 * x.max(1.0));
        }
    }

    #[test]
    fn paper_scale_default_scenario_is_valid() {
        // K=12, N=21, S=20, H=500 m, V=50 m/s, F=500 MHz, spacing 5 MHz,
        // P_max 30 dBm, eta 3/23 dB; built by the synthetic generator.
        let cfg = crate::harness::synth::SynthParams {
            uav_count: 12,
            channel_count: 21,
            slot_count: 20,
            source_count: 5,
            seed: 1,
            ..Default::default()
        }
        .build();
        cfg.validate().unwrap();
        assert_eq!(cfg.p_max_dbm, 30.0);
        assert_eq!(cfg.channel_freqs_mhz().len(), 21);
        let geom = slot_geometry(&cfg, 19).unwrap();
        assert!(geom.distances_m.iter().all(|&d| d > 400.0));
    }

    #[test]
    fn ei_entries_strictly_positive_without_sources() {
        let cfg = ScenarioConfig::from_json(&minimal_json()).unwrap();
        let geom = slot_geometry(&cfg, 0).unwrap();
        assert!(geom.ei_mw.iter().all(|x| x > 0.0));
    }
}
