//! TOML run configuration.
//!
//! Every section has built-in defaults (the target hardware set, the
//! measured communication latencies, the CC-ASIC decoder, the Fermi-Hubbard
//! circuit), addressable presets, and full field-level overrides. Unknown
//! keys are rejected before any computation runs.

use qreact_core::assembler::{AssemblyOptions, CircuitSpec, Objective};
use qreact_core::fleet::SyndromePacking;
use qreact_core::{Comms, Decoder, ErrorFit, Hardware, Time64};
use serde::Deserialize;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RawConfig {
    pub hardware: HardwareSection,
    pub fits: FitsSection,
    pub comms: CommsSection,
    pub decoder: DecoderSection,
    pub circuit: CircuitSection,
    pub assembly: AssemblySection,
    pub sim: SimSection,
    pub fleet: FleetSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HardwareSection {
    pub t1_us: f64,
    pub t2_us: f64,
    pub err_1q: f64,
    pub err_2q: f64,
    pub err_prep: f64,
    pub err_meas: f64,
    pub err_reset: f64,
    pub time_1q_ns: f64,
    pub time_2q_ns: f64,
    pub time_prep_ns: f64,
    pub time_meas_ns: f64,
    pub time_reset_ns: f64,
    pub stab_round_us: f64,
}

impl Default for HardwareSection {
    fn default() -> Self {
        let h = Hardware::target();
        HardwareSection {
            t1_us: h.t1_us,
            t2_us: h.t2_us,
            err_1q: h.err_1q,
            err_2q: h.err_2q,
            err_prep: h.err_prep,
            err_meas: h.err_meas,
            err_reset: h.err_reset,
            time_1q_ns: h.time_1q_ns,
            time_2q_ns: h.time_2q_ns,
            time_prep_ns: h.time_prep_ns,
            time_meas_ns: h.time_meas_ns,
            time_reset_ns: h.time_reset_ns,
            stab_round_us: h.stab_round_us,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitsSection {
    pub mu: f64,
    pub lambda: f64,
    pub mu_s: Option<f64>,
    pub lambda_s: Option<f64>,
    pub mu_t: Option<f64>,
    pub lambda_t: Option<f64>,
    pub p_magic: f64,
    pub discard_magic: f64,
}

impl Default for FitsSection {
    fn default() -> Self {
        let f = ErrorFit::target();
        FitsSection {
            mu: f.mu,
            lambda: f.lambda,
            mu_s: None,
            lambda_s: None,
            mu_t: None,
            lambda_t: None,
            p_magic: f.p_magic,
            discard_magic: f.discard_magic,
        }
    }
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct CommsSection {
    /// "measured" (default), "literature-10us", or "zero".
    pub preset: Option<String>,
    pub custom: Option<CommsCustom>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommsCustom {
    pub t_qc_us: f64,
    pub t_cd_us: f64,
    pub t_dd_us: f64,
    pub t_do_us: f64,
    pub t_oc_us: f64,
    pub t_cq_us: f64,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct DecoderSection {
    /// One of "cc-fpga", "cc-asic", "alphaqubit", "pymatching", "ideal".
    pub preset: Option<String>,
    pub custom: Option<DecoderCustom>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderCustom {
    pub name: String,
    pub alpha_s: f64,
    pub beta: f64,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct CircuitSection {
    /// "fermi_hubbard" (default) or "conotoxin".
    pub preset: Option<String>,
    pub custom: Option<CircuitCustom>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitCustom {
    pub q_logical: u64,
    pub t_count: f64,
    pub k_avg: f64,
    pub b_avg: f64,
    pub error_budget: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AssemblySection {
    /// "time-optimal" (default) or "space-optimal".
    pub objective: String,
    pub budget_core_fraction: f64,
    pub msf_k_avg: f64,
    pub msf_b_avg: f64,
    pub tiles_per_unit: u32,
    pub transport_events: f64,
    pub max_distance: u32,
    pub max_levels: u32,
}

impl Default for AssemblySection {
    fn default() -> Self {
        let o = AssemblyOptions::default();
        AssemblySection {
            objective: "time-optimal".into(),
            budget_core_fraction: o.budget_core_fraction,
            msf_k_avg: o.msf_k_avg,
            msf_b_avg: o.msf_b_avg,
            tiles_per_unit: o.tiles_per_unit,
            transport_events: o.transport_events,
            max_distance: o.max_distance,
            max_levels: o.max_levels,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub distance: u32,
    pub n_decoders: u32,
    pub n_injections: u32,
    pub seed: u64,
    pub jitter: f64,
    pub magic_costorage: bool,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            distance: 31,
            n_decoders: 2,
            n_injections: 100,
            seed: 0,
            jitter: 0.0,
            magic_costorage: false,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FleetSection {
    pub qpu_qubits: u64,
    pub core_fraction: f64,
    pub distance: u32,
    pub msf_uplift: f64,
    /// Overrides the qubit-budget derivation of Q when set.
    pub q_logical: Option<u64>,
    pub packed_bits: bool,
}

impl Default for FleetSection {
    fn default() -> Self {
        FleetSection {
            qpu_qubits: 10_000_000,
            core_fraction: 0.9,
            distance: 31,
            msf_uplift: 0.10,
            q_logical: None,
            packed_bits: false,
        }
    }
}

/// Fully validated configuration, ready for the core modules.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub hardware: Hardware,
    pub fits: ErrorFit,
    pub comms: Comms,
    pub decoder: Decoder,
    pub circuit: CircuitSpec,
    pub assembly: AssemblyOptions,
    pub sim: ResolvedSim,
    pub fleet: ResolvedFleet,
}

#[derive(Debug, Clone)]
pub struct ResolvedSim {
    pub distance: u32,
    pub n_decoders: u32,
    pub n_injections: u32,
    pub seed: u64,
    pub jitter: f64,
    pub magic_costorage: bool,
}

#[derive(Debug, Clone)]
pub struct ResolvedFleet {
    pub qpu_qubits: u64,
    pub core_fraction: f64,
    pub distance: u32,
    pub msf_uplift: f64,
    pub q_logical: Option<u64>,
    pub packing: SyndromePacking,
}

/// Load a config file (TOML) or fall back to built-in defaults; the path
/// may also come from the `QREACT_CONFIG` environment variable.
pub fn load(path: Option<&Path>) -> Result<Resolved, ConfigError> {
    let env_path = std::env::var_os("QREACT_CONFIG").map(std::path::PathBuf::from);
    let chosen = path.map(Path::to_path_buf).or(env_path);
    let raw: RawConfig = match chosen {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| err(format!("cannot read {}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| err(format!("{}: {e}", p.display())))?
        }
        None => RawConfig::default(),
    };
    resolve(raw)
}

pub fn resolve(raw: RawConfig) -> Result<Resolved, ConfigError> {
    let h = &raw.hardware;
    let hardware = Hardware {
        t1_us: h.t1_us,
        t2_us: h.t2_us,
        err_1q: h.err_1q,
        err_2q: h.err_2q,
        err_prep: h.err_prep,
        err_meas: h.err_meas,
        err_reset: h.err_reset,
        time_1q_ns: h.time_1q_ns,
        time_2q_ns: h.time_2q_ns,
        time_prep_ns: h.time_prep_ns,
        time_meas_ns: h.time_meas_ns,
        time_reset_ns: h.time_reset_ns,
        stab_round_us: h.stab_round_us,
    };
    hardware.validate().map_err(|e| err(e.to_string()))?;

    let f = &raw.fits;
    let fits = ErrorFit {
        mu: f.mu,
        lambda: f.lambda,
        mu_s: f.mu_s.unwrap_or(f.mu),
        lambda_s: f.lambda_s.unwrap_or(f.lambda),
        mu_t: f.mu_t.unwrap_or(f.mu_s.unwrap_or(f.mu)),
        lambda_t: f.lambda_t.unwrap_or(f.lambda_s.unwrap_or(f.lambda)),
        p_magic: f.p_magic,
        discard_magic: f.discard_magic,
    };
    fits.validate().map_err(|e| err(e.to_string()))?;

    let comms = match (&raw.comms.preset, &raw.comms.custom) {
        (Some(_), Some(_)) => return Err(err("[comms]: give either preset or custom, not both")),
        (None, None) => Comms::measured(),
        (Some(name), None) => match name.as_str() {
            "measured" | "table" => Comms::measured(),
            "literature-10us" | "literature_10us" => Comms::literature_10us(),
            "zero" => Comms::zero(),
            other => return Err(err(format!("unknown comms preset {other:?}"))),
        },
        (None, Some(c)) => Comms::new_us(c.t_qc_us, c.t_cd_us, c.t_dd_us, c.t_do_us, c.t_oc_us, c.t_cq_us),
    };
    comms.validate().map_err(|e| err(e.to_string()))?;

    let decoder = match (&raw.decoder.preset, &raw.decoder.custom) {
        (Some(_), Some(_)) => return Err(err("[decoder]: give either preset or custom, not both")),
        (None, None) => Decoder::cc_asic(),
        (Some(name), None) => Decoder::preset(name)
            .ok_or_else(|| err(format!("unknown decoder preset {name:?}")))?,
        (None, Some(c)) => {
            Decoder::monomial(c.name.clone(), c.alpha_s, c.beta).map_err(|e| err(e.to_string()))?
        }
    };

    let circuit = match (&raw.circuit.preset, &raw.circuit.custom) {
        (Some(_), Some(_)) => return Err(err("[circuit]: give either preset or custom, not both")),
        (None, None) => CircuitSpec::fermi_hubbard(),
        (Some(name), None) => CircuitSpec::preset(name)
            .ok_or_else(|| err(format!("unknown circuit preset {name:?}")))?,
        (None, Some(c)) => {
            if c.t_count < 1.0 || c.t_count.fract() != 0.0 || c.t_count > 9.0e18 {
                return Err(err("[circuit.custom]: t_count must be a positive integer"));
            }
            CircuitSpec {
                q_logical: c.q_logical,
                t_count: c.t_count as u64,
                k_avg: c.k_avg,
                b_avg: c.b_avg,
                error_budget: c.error_budget,
            }
        }
    };
    circuit.validate().map_err(|e| err(e.to_string()))?;

    let a = &raw.assembly;
    let objective = match a.objective.as_str() {
        "time-optimal" | "time_optimal" => Objective::TimeOptimal,
        "space-optimal" | "space_optimal" => Objective::SpaceOptimal,
        other => return Err(err(format!("unknown objective {other:?}"))),
    };
    if !(0.0..1.0).contains(&a.budget_core_fraction) {
        return Err(err("[assembly]: budget_core_fraction must be in [0, 1)"));
    }
    let assembly = AssemblyOptions {
        objective,
        budget_core_fraction: a.budget_core_fraction,
        msf_k_avg: a.msf_k_avg,
        msf_b_avg: a.msf_b_avg,
        tiles_per_unit: a.tiles_per_unit,
        transport_events: a.transport_events,
        max_distance: a.max_distance,
        max_levels: a.max_levels,
    };

    let s = &raw.sim;
    let fl = &raw.fleet;
    Ok(Resolved {
        hardware,
        fits,
        comms,
        decoder,
        circuit,
        assembly,
        sim: ResolvedSim {
            distance: s.distance,
            n_decoders: s.n_decoders,
            n_injections: s.n_injections,
            seed: s.seed,
            jitter: s.jitter,
            magic_costorage: s.magic_costorage,
        },
        fleet: ResolvedFleet {
            qpu_qubits: fl.qpu_qubits,
            core_fraction: fl.core_fraction,
            distance: fl.distance,
            msf_uplift: fl.msf_uplift,
            q_logical: fl.q_logical,
            packing: if fl.packed_bits {
                SyndromePacking::PackedBits
            } else {
                SyndromePacking::OneBytePerSyndrome
            },
        },
    })
}

impl Resolved {
    pub fn stab_round(&self) -> Time64 {
        self.hardware.stab_round()
    }
}
