//! Sizing the classical decoder fleet: how many decoding units keep up with
//! the syndrome throughput of the core processor, and how much RAM the
//! cluster needs to retain syndromes while surgeries decode.

use crate::latency::{ls_multiplicity, ls_syndrome_retention, CommLatencies, DecoderModel};
use crate::models::Distance;
use crate::time::Time;
use serde::Serialize;

/// Physical qubits of one d x d surface-code tile: d^2 data + d^2 - 1
/// syndrome qubits.
pub fn patch_qubits(d: Distance) -> u64 {
    let dd = u64::from(d.get());
    2 * dd * dd - 1
}

/// Logical qubit count hosted by a physical-qubit budget.
///
/// Computational qubits live in pairs on 2d x d patches (one tile per qubit)
/// and the bus area is sized at about one tile per qubit, so each logical
/// qubit costs two tiles.
pub fn q_from_qpu_budget(qpu_qubits: u64, core_fraction: f64, d: Distance) -> u64 {
    let per_qubit = 2 * patch_qubits(d);
    ((qpu_qubits as f64 * core_fraction) / per_qubit as f64).floor() as u64
}

/// Decoders needed to keep `q_logical` qubits (stored in pairs) decoded at
/// the syndrome rate: `ceil(Q [6d tau_d(2d^2) + t_dd] / (8 tau_logical))`,
/// clamped to at least 1. Each unit must fit a `(2d, d, 3d)` problem.
pub fn k_mem(
    q_logical: u64,
    d: Distance,
    model: &DecoderModel<f64>,
    t_dd: Time<f64>,
    tau_logical: Time<f64>,
) -> u64 {
    let df = f64::from(d.get());
    let tau_w2 = model.tau_d(2.0 * df * df); // per round, pair patch
    let per_patch = 6.0 * df * tau_w2.secs() + t_dd.secs();
    let raw = (q_logical as f64 * per_patch) / (8.0 * tau_logical.secs());
    (raw.ceil() as u64).max(1)
}

/// Decoders needed for lattice-surgery decoding: one third of the ~2Q
/// patches of a worst-case all-qubit surgery per layer, times the number of
/// surgery decodes in flight (`ceil(gamma_ls / gamma_mem)`, 4 for the
/// Collision Cluster decoders): `ceil(multiplicity * 2Q / 3)`.
pub fn k_ls(q_logical: u64, multiplicity: u32) -> u64 {
    (u64::from(multiplicity) * 2 * q_logical).div_ceil(3)
}

/// Nominal decoding-problem envelope `(x, z, t)` in units of d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemSize {
    pub x_d: f64,
    pub z_d: f64,
    pub t_d: f64,
}

/// How syndrome bits are stored in cluster RAM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SyndromePacking {
    /// One byte per syndrome bit (byte-addressable storage; the default).
    OneBytePerSyndrome,
    /// Eight syndrome bits per byte.
    PackedBits,
}

#[derive(Debug, Clone, Copy)]
pub struct FleetParams<'a> {
    pub q_logical: u64,
    pub d: Distance,
    pub model: &'a DecoderModel<f64>,
    pub comms: &'a CommLatencies<f64>,
    /// Extra fleet fraction reserved for the magic state factory.
    pub msf_uplift: f64,
    pub stab_round: Time<f64>,
    /// Syndrome qubits whose measurement records are retained (half the
    /// physical qubits of the machine).
    pub syndrome_qubits: u64,
    pub packing: SyndromePacking,
}

/// The sized decoder fleet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecoderFleet {
    pub k_mem: u64,
    pub k_ls: u64,
    /// `(k_mem + k_ls) * (1 + msf_uplift)`, rounded up.
    pub k_total: u64,
    pub ls_multiplicity: u32,
    /// Problem envelopes the units must fit: the memory window and the three
    /// surgery layers.
    pub window_problem_sizes: Vec<ProblemSize>,
    /// Rounds a surgery's syndromes stay in cluster RAM.
    pub rounds_retained: u64,
    pub syndrome_ram_bytes: u64,
}

/// Size the fleet for one core processor.
pub fn fleet_estimate(p: &FleetParams<'_>) -> DecoderFleet {
    let tau_logical = p.stab_round * f64::from(p.d.get());
    let mult = ls_multiplicity(p.model, p.d, p.comms);
    let km = k_mem(p.q_logical, p.d, p.model, p.comms.t_dd, tau_logical);
    let kl = k_ls(p.q_logical, mult);
    let k_total = ((km + kl) as f64 * (1.0 + p.msf_uplift)).ceil() as u64;

    let retention = ls_syndrome_retention(p.model, p.d, p.comms);
    let rounds_retained = (retention / p.stab_round).ceil() as u64;
    let raw_bits = p.syndrome_qubits.saturating_mul(rounds_retained);
    let syndrome_ram_bytes = match p.packing {
        SyndromePacking::OneBytePerSyndrome => raw_bits,
        SyndromePacking::PackedBits => raw_bits.div_ceil(8),
    };

    DecoderFleet {
        k_mem: km,
        k_ls: kl,
        k_total,
        ls_multiplicity: mult,
        window_problem_sizes: vec![
            ProblemSize { x_d: 2.0, z_d: 1.0, t_d: 3.0 },
            ProblemSize { x_d: 2.0, z_d: 2.0, t_d: 2.0 },
            ProblemSize { x_d: 2.0, z_d: 1.5, t_d: 2.0 },
            ProblemSize { x_d: 1.0, z_d: 1.0, t_d: 2.0 },
        ],
        rounds_retained,
        syndrome_ram_bytes,
    }
}
