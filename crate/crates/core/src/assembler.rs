//! Microarchitecture synthesis: choose code distances, distillation-unit
//! counts per factory level, and correction-storage capacity against a
//! logical error budget, then account physical qubits by architecture area.
//!
//! The search is pure and deterministic: distances are scanned in ascending
//! order, feasible factory configurations are ranked lexicographically by
//! (total qubits, runtime, core distance, level distances), and identical
//! inputs always yield identical architectures.

use crate::latency::{CommLatencies, DecoderModel, ReactionTimes};
use crate::models::{
    p_mem_cycle, p_pi8_gadget, Distance, ErrorFitParams, HardwareParams, ModelError,
};
use crate::time::Time;
use serde::Serialize;
use std::fmt;

/// Patches idling in correction storage per distillation: the 11 rotation
/// correction qubits plus the produced magic state, each held for about one
/// reaction time.
const IDLE_PATCHES_PER_DISTILLATION: f64 = 12.0;

/// Inputs consumed per distilled output state.
const DISTILL_INPUTS: f64 = 15.0;

/// Rotations per distillation, one per logical cycle.
const DISTILL_ROTATIONS: f64 = 11.0;

#[derive(Debug, Clone, PartialEq)]
pub enum AssembleError {
    /// No architecture under the distance cap meets the component budget.
    InfeasibleBudget { component: &'static str },
    /// The budget could be met, but only beyond the distance search ceiling.
    DistanceCapReached { component: &'static str, cap: u32 },
    Model(ModelError),
}

impl fmt::Display for AssembleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssembleError::InfeasibleBudget { component } => {
                write!(f, "error budget infeasible for {component}")
            }
            AssembleError::DistanceCapReached { component, cap } => {
                write!(f, "{component} needs a code distance beyond the search ceiling d = {cap}")
            }
            AssembleError::Model(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for AssembleError {}

impl From<ModelError> for AssembleError {
    fn from(e: ModelError) -> Self {
        AssembleError::Model(e)
    }
}

/// A compiled circuit's demands on the architecture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircuitSpec {
    /// Algorithm logical qubits Q.
    pub q_logical: u64,
    /// Number of pi/8 rotation gadgets T.
    pub t_count: u64,
    /// Mean logical qubits touched per rotation.
    pub k_avg: f64,
    /// Mean bus tiles per rotation.
    pub b_avg: f64,
    /// Total logical failure budget for the run.
    pub error_budget: f64,
}

impl CircuitSpec {
    /// Ground-state energy estimation of a 2D Fermi-Hubbard model on a
    /// 32 x 32 lattice via Plaquette Trotterization: many logical qubits,
    /// comparatively few T gates. Rotation weights follow the dense-compiled
    /// profile `k_avg = b_avg = Q / 2`.
    pub fn fermi_hubbard() -> Self {
        CircuitSpec {
            q_logical: 2562,
            t_count: 4_000_000,
            k_avg: 1281.0,
            b_avg: 1281.0,
            error_budget: 0.041,
        }
    }

    /// Single-shot quantum eigenvalue transform for NMR spectral prediction
    /// of alpha-conotoxin: few logical qubits, very high T count. Same
    /// dense-compiled rotation profile.
    pub fn conotoxin() -> Self {
        CircuitSpec {
            q_logical: 241,
            t_count: 511_000_000_000,
            k_avg: 120.5,
            b_avg: 120.5,
            error_budget: 0.117,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "fermi_hubbard" | "fermi-hubbard" => Some(Self::fermi_hubbard()),
            "conotoxin" => Some(Self::conotoxin()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.q_logical < 1 || self.t_count < 1 {
            return Err(ModelError::InvalidFit("circuit needs q_logical >= 1 and t_count >= 1"));
        }
        if !(self.error_budget >= 0.0 && self.error_budget < 1.0) {
            return Err(ModelError::InvalidFit("error_budget must lie in [0, 1)"));
        }
        if !(self.k_avg >= 0.0 && self.b_avg >= 0.0) {
            return Err(ModelError::InvalidFit("k_avg and b_avg must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Objective {
    /// Factory sized so magic states arrive just in time for a gadget every
    /// `gamma_mem`; runtime is `gamma_mem * T`.
    TimeOptimal,
    /// One distillation unit per level; runtime stretches to the factory's
    /// production period when that is slower than `gamma_mem`.
    SpaceOptimal,
}

/// Tunable assembly policy. Defaults follow the documented architecture
/// conventions; everything is overridable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyOptions {
    pub objective: Objective,
    /// Fraction of the error budget reserved for the core pi/8 stream; the
    /// factory gets the rest.
    pub budget_core_fraction: f64,
    /// Mean rotation weight inside a distillation unit.
    pub msf_k_avg: f64,
    pub msf_b_avg: f64,
    /// Tiles per 15-to-1 unit: 11 distillation-block tiles, one output, one
    /// growth, three cultivation slots (sized for the 0.41 discard rate at
    /// 15 inputs per 11 cycles), one correction-preparation tile.
    pub tiles_per_unit: u32,
    /// Growth/transport memory events charged per level hand-off.
    pub transport_events: f64,
    /// Odd-distance search ceiling.
    pub max_distance: u32,
    pub max_levels: u32,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions {
            objective: Objective::TimeOptimal,
            budget_core_fraction: 0.5,
            msf_k_avg: 5.0,
            msf_b_avg: 5.0,
            tiles_per_unit: 17,
            transport_events: 2.0,
            max_distance: 61,
            max_levels: 3,
        }
    }
}

impl AssemblyOptions {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.budget_core_fraction >= 0.0 && self.budget_core_fraction < 1.0) {
            return Err(ModelError::InvalidFit("budget_core_fraction must be in [0, 1)"));
        }
        if !(self.msf_k_avg >= 0.0 && self.msf_b_avg >= 0.0 && self.transport_events >= 0.0) {
            return Err(ModelError::InvalidFit("factory profile values must be >= 0"));
        }
        if self.tiles_per_unit < 1 || self.max_levels < 1 || self.max_distance < 3 {
            return Err(ModelError::InvalidFit(
                "need tiles_per_unit >= 1, max_levels >= 1, max_distance >= 3",
            ));
        }
        Ok(())
    }
}

/// One magic-state-factory level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MsfLevel {
    pub d_level: u32,
    pub n_units: u32,
    /// Correction-storage patches per unit: `ceil(gamma_mem / tau_level)`.
    pub storage_patches: u32,
}

/// An assembled architecture.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Microarchitecture {
    pub d_core: u32,
    /// Core tiles: computational qubits in pairs plus about one bus tile per
    /// qubit.
    pub core_tiles: u64,
    pub msf_levels: Vec<MsfLevel>,
    pub tiles_per_unit: u32,
    pub gamma_mem_us: f64,
    pub gamma_ls_us: f64,
    pub runtime_s: f64,
    pub qubits_core: u64,
    pub qubits_msf_distill: u64,
    pub qubits_msf_storage: u64,
    pub accumulated_error: f64,
}

impl Microarchitecture {
    pub fn total_qubits(&self) -> u64 {
        self.qubits_core + self.qubits_msf_distill + self.qubits_msf_storage
    }

    pub fn core_distance(&self) -> Distance {
        Distance::new(self.d_core).expect("stored distance is valid")
    }
}

fn patch_qubits(d: u32) -> u64 {
    let dd = u64::from(d);
    2 * dd * dd - 1
}

fn odd_distances(cap: u32) -> impl Iterator<Item = Distance> {
    (3..=cap).step_by(2).map(|d| Distance::new(d).expect("odd"))
}

/// Error of the core pi/8 stream: `T * P_pi8(d_core)`.
fn core_stream_error(
    d: Distance,
    spec: &CircuitSpec,
    fit: &ErrorFitParams<f64>,
    rt: &ReactionTimes<f64>,
    stab_round: Time<f64>,
) -> Result<f64, ModelError> {
    let tau = stab_round * f64::from(d.get());
    let p = p_pi8_gadget(d, spec.k_avg, spec.b_avg, rt.gamma_mem, rt.gamma_ls, tau, fit)?;
    Ok(spec.t_count as f64 * p.value())
}

/// Per-delivered-state error of a distillation cascade, threading each
/// level's output into the next level's 15-to-1 input.
///
/// A level's output error is `35 p_in^3` plus its own eleven rotations
/// (evaluated without reaction-time stalls: rotations inside a unit commute,
/// so only the correction qubits wait) plus the memory error of the twelve
/// patches that idle in its correction storage for one reaction time each.
fn cascade_error(
    levels: &[Distance],
    d_core: Distance,
    gamma_mem: Time<f64>,
    fit: &ErrorFitParams<f64>,
    stab_round: Time<f64>,
    opts: &AssemblyOptions,
) -> Result<CascadeOutcome, ModelError> {
    let mut p_in = fit.p_magic;
    let mut p_out = 0.0;
    let mut successes = Vec::with_capacity(levels.len());
    for &d in levels {
        let tau = stab_round * f64::from(d.get());
        p_in += opts.transport_events * p_mem_cycle(d, fit).value();
        let du = DISTILL_ROTATIONS
            * p_pi8_gadget(d, opts.msf_k_avg, opts.msf_b_avg, Time::zero(), Time::zero(), tau, fit)?
                .value();
        let idle = IDLE_PATCHES_PER_DISTILLATION * (gamma_mem / tau) * p_mem_cycle(d, fit).value();
        p_out = 35.0 * p_in.powi(3) + du + idle;
        successes.push((1.0 - DISTILL_INPUTS * p_in).clamp(1e-6, 1.0));
        p_in = p_out;
    }
    let delivered = p_out + opts.transport_events * p_mem_cycle(d_core, fit).value();
    Ok(CascadeOutcome { delivered, successes })
}

struct CascadeOutcome {
    /// Error per magic state handed to the core.
    delivered: f64,
    /// Per-level distillation acceptance probability.
    successes: Vec<f64>,
}

/// Unit counts for just-in-time delivery at one state per `consume_period`.
fn size_units(
    levels: &[Distance],
    successes: &[f64],
    consume_period: Time<f64>,
    stab_round: Time<f64>,
) -> Vec<u32> {
    let mut n = vec![1u32; levels.len()];
    // outputs per microsecond demanded of each level, walking top-down
    let mut demand = 1.0 / consume_period.us();
    for (i, &d) in levels.iter().enumerate().rev() {
        let tau_us = stab_round.us() * f64::from(d.get());
        let s = successes[i];
        let units = (demand * DISTILL_ROTATIONS * tau_us / s).ceil().max(1.0);
        n[i] = units as u32;
        // a failed distillation still consumed its inputs
        demand = demand * DISTILL_INPUTS / s;
    }
    n
}

fn storage_patches(gamma_mem: Time<f64>, d: Distance, stab_round: Time<f64>) -> u32 {
    let tau = stab_round * f64::from(d.get());
    (gamma_mem / tau).ceil().max(1.0) as u32
}

struct MsfCandidate {
    levels: Vec<MsfLevel>,
    error: f64,
    qubits_distill: u64,
    qubits_storage: u64,
}

/// Full factory error for a sized configuration.
fn msf_error(
    levels: &[Distance],
    d_core: Distance,
    gamma_mem: Time<f64>,
    t_count: u64,
    fit: &ErrorFitParams<f64>,
    stab_round: Time<f64>,
    opts: &AssemblyOptions,
) -> Result<(f64, CascadeOutcome), ModelError> {
    let cascade = cascade_error(levels, d_core, gamma_mem, fit, stab_round, opts)?;
    Ok((t_count as f64 * cascade.delivered, cascade))
}

fn build_msf_candidate(
    distances: &[Distance],
    d_core: Distance,
    gamma_mem: Time<f64>,
    consume_period: Time<f64>,
    spec: &CircuitSpec,
    fit: &ErrorFitParams<f64>,
    stab_round: Time<f64>,
    opts: &AssemblyOptions,
    budget_msf: f64,
) -> Result<Option<MsfCandidate>, ModelError> {
    let (error, cascade) = msf_error(distances, d_core, gamma_mem, spec.t_count, fit, stab_round, opts)?;
    if !(error <= budget_msf) {
        return Ok(None);
    }
    let units = match opts.objective {
        Objective::TimeOptimal => size_units(distances, &cascade.successes, consume_period, stab_round),
        Objective::SpaceOptimal => vec![1; distances.len()],
    };
    let mut levels = Vec::with_capacity(distances.len());
    let mut qubits_distill = 0u64;
    let mut qubits_storage = 0u64;
    for (i, &d) in distances.iter().enumerate() {
        let storage = storage_patches(gamma_mem, d, stab_round);
        levels.push(MsfLevel { d_level: d.get(), n_units: units[i], storage_patches: storage });
        let pq = patch_qubits(d.get());
        qubits_distill += u64::from(units[i]) * u64::from(opts.tiles_per_unit) * pq;
        qubits_storage += u64::from(units[i]) * u64::from(storage) * pq;
    }
    Ok(Some(MsfCandidate { levels, error, qubits_distill, qubits_storage }))
}

/// Assemble against explicitly supplied reaction times (`rt_of` maps a
/// candidate core distance to the reaction times it would see).
///
/// For the space-optimal objective the factory is one unit per level, so the
/// injection period can exceed `gamma_mem`; a second pass re-runs the search
/// with the memory wait floored at that production period so the extra
/// idling is charged against the budget.
pub fn assemble_with_reaction(
    spec: &CircuitSpec,
    fit: &ErrorFitParams<f64>,
    stab_round: Time<f64>,
    rt_of: &dyn Fn(Distance) -> ReactionTimes<f64>,
    opts: &AssemblyOptions,
) -> Result<Microarchitecture, AssembleError> {
    let first = assemble_pass(spec, fit, stab_round, rt_of, opts, None)?;
    if opts.objective == Objective::SpaceOptimal {
        let period = Time::from_secs(first.runtime_s / spec.t_count as f64);
        if period.us() > first.gamma_mem_us {
            return assemble_pass(spec, fit, stab_round, rt_of, opts, Some(period));
        }
    }
    Ok(first)
}

fn assemble_pass(
    spec: &CircuitSpec,
    fit: &ErrorFitParams<f64>,
    stab_round: Time<f64>,
    rt_of: &dyn Fn(Distance) -> ReactionTimes<f64>,
    opts: &AssemblyOptions,
    gamma_floor: Option<Time<f64>>,
) -> Result<Microarchitecture, AssembleError> {
    spec.validate()?;
    fit.validate()?;
    opts.validate()?;
    let rt_of = |d: Distance| {
        let mut rt = rt_of(d);
        if let Some(floor) = gamma_floor {
            rt.gamma_mem = rt.gamma_mem.max(floor);
        }
        rt
    };
    let budget_core = spec.error_budget * opts.budget_core_fraction;
    let budget_msf = spec.error_budget - budget_core;

    // Smallest core distance whose pi/8 stream fits its budget share.
    let mut core_choice = None;
    for d in odd_distances(opts.max_distance) {
        let rt = rt_of(d);
        let err = core_stream_error(d, spec, fit, &rt, stab_round)?;
        if err <= budget_core {
            core_choice = Some((d, rt, err));
            break;
        }
    }
    let Some((d_core, rt, core_err)) = core_choice else {
        return Err(if budget_core <= 0.0 {
            AssembleError::InfeasibleBudget { component: "core processor" }
        } else {
            AssembleError::DistanceCapReached { component: "core processor", cap: opts.max_distance }
        });
    };

    let gamma_mem = rt.gamma_mem;
    let consume_period = gamma_mem;

    // Factory: fewest levels that fit the budget, then cheapest distance
    // tuple. Tuples are compared lexicographically on
    // (total qubits, level distances) for a total, deterministic order.
    let mut best: Option<(u64, Vec<u32>, MsfCandidate)> = None;
    for n_levels in 1..=opts.max_levels {
        let mut stack: Vec<Vec<Distance>> = vec![Vec::new()];
        // enumerate all odd-distance tuples of length n_levels
        let mut tuples = Vec::new();
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n_levels as usize {
                tuples.push(prefix);
                continue;
            }
            for d in odd_distances(opts.max_distance) {
                let mut next = prefix.clone();
                next.push(d);
                stack.push(next);
            }
        }
        tuples.sort();
        for distances in tuples {
            let cand = build_msf_candidate(
                &distances,
                d_core,
                gamma_mem,
                consume_period,
                spec,
                fit,
                stab_round,
                opts,
                budget_msf,
            )?;
            if let Some(cand) = cand {
                let qubits = cand.qubits_distill + cand.qubits_storage;
                let key: Vec<u32> = distances.iter().map(|d| d.get()).collect();
                let better = match &best {
                    None => true,
                    Some((bq, bkey, _)) => (qubits, &key) < (*bq, bkey),
                };
                if better {
                    best = Some((qubits, key, cand));
                }
            }
        }
        if best.is_some() {
            break;
        }
    }
    let Some((_, _, msf)) = best else {
        return Err(if budget_msf <= 0.0 {
            AssembleError::InfeasibleBudget { component: "magic state factory" }
        } else {
            AssembleError::DistanceCapReached { component: "magic state factory", cap: opts.max_distance }
        });
    };

    // Space-optimal runs only as fast as one top-level unit produces.
    let period = match opts.objective {
        Objective::TimeOptimal => consume_period,
        Objective::SpaceOptimal => {
            let top = msf.levels.last().expect("at least one level");
            let tau_top = stab_round * f64::from(top.d_level);
            let prod = tau_top * DISTILL_ROTATIONS;
            gamma_mem.max(prod)
        }
    };
    let runtime = period * spec.t_count as f64;

    let q = spec.q_logical;
    let core_tiles = 2 * q.div_ceil(2) + q;
    let qubits_core = core_tiles * patch_qubits(d_core.get());

    let arch = Microarchitecture {
        d_core: d_core.get(),
        core_tiles,
        msf_levels: msf.levels,
        tiles_per_unit: opts.tiles_per_unit,
        gamma_mem_us: gamma_mem.us(),
        gamma_ls_us: rt.gamma_ls.us(),
        runtime_s: runtime.secs(),
        qubits_core,
        qubits_msf_distill: msf.qubits_distill,
        qubits_msf_storage: msf.qubits_storage,
        accumulated_error: core_err + msf.error,
    };
    Ok(arch)
}

/// Assemble for a concrete decoder and communication fabric.
pub fn assemble(
    spec: &CircuitSpec,
    hw: &HardwareParams<f64>,
    fit: &ErrorFitParams<f64>,
    decoder: &DecoderModel<f64>,
    comms: &CommLatencies<f64>,
    opts: &AssemblyOptions,
) -> Result<Microarchitecture, AssembleError> {
    hw.validate()?;
    comms.validate()?;
    let stab = hw.stab_round();
    assemble_with_reaction(spec, fit, stab, &|d| ReactionTimes::of(decoder, d, comms), opts)
}

/// Independent re-evaluation of an assembled architecture's accumulated
/// logical error from its stored structure.
pub fn accumulate_error(
    arch: &Microarchitecture,
    spec: &CircuitSpec,
    fit: &ErrorFitParams<f64>,
    rt: &ReactionTimes<f64>,
    stab_round: Time<f64>,
    opts: &AssemblyOptions,
) -> Result<f64, ModelError> {
    let d_core = arch.core_distance();
    let core = if spec.t_count == 0 {
        0.0
    } else {
        core_stream_error(d_core, spec, fit, rt, stab_round)?
    };
    if arch.msf_levels.is_empty() {
        return Ok(core);
    }
    let distances: Vec<Distance> = arch
        .msf_levels
        .iter()
        .map(|l| Distance::new(l.d_level))
        .collect::<Result<_, _>>()?;
    let (msf, _) = msf_error(&distances, d_core, rt.gamma_mem, spec.t_count, fit, stab_round, opts)?;
    Ok(core + msf)
}

/// Physical-qubit accounting by architecture area, recomputed from the
/// stored structure: core tiles at the core distance, distillation-unit
/// footprints and correction-storage patches at each level's distance.
pub fn qubit_accounting(arch: &Microarchitecture) -> (u64, u64, u64) {
    let core = arch.core_tiles * patch_qubits(arch.d_core);
    let mut distill = 0u64;
    let mut storage = 0u64;
    for l in &arch.msf_levels {
        let pq = patch_qubits(l.d_level);
        distill += u64::from(l.n_units) * u64::from(arch.tiles_per_unit) * pq;
        storage += u64::from(l.n_units) * u64::from(l.storage_patches) * pq;
    }
    (core, distill, storage)
}

/// One point of a reaction-time sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    /// Reaction time in logical cycles of the (chosen) core processor.
    pub gamma_cycles: f64,
    pub outcome: Result<Microarchitecture, AssembleError>,
}

/// Assemble one architecture per reaction-time value; `gamma_cycles` are
/// core logical cycles, with memory and surgery reaction times set equal.
/// Per-point infeasibility is recorded and the sweep continues.
pub fn sweep_reaction_time(
    spec: &CircuitSpec,
    hw: &HardwareParams<f64>,
    fit: &ErrorFitParams<f64>,
    gamma_cycles: &[f64],
    opts: &AssemblyOptions,
) -> Vec<SweepPoint> {
    let stab = hw.stab_round();
    gamma_cycles
        .iter()
        .map(|&gc| {
            let rt_of = move |d: Distance| {
                let gamma = stab * (gc * f64::from(d.get()));
                ReactionTimes::equal(gamma)
            };
            SweepPoint {
                gamma_cycles: gc,
                outcome: assemble_with_reaction(spec, fit, stab, &rt_of, opts),
            }
        })
        .collect()
}
