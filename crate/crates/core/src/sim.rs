//! Deterministic discrete-event simulation of the decode/control pipeline.
//!
//! The simulator drives syndrome production, the communication hops of the
//! execution environment, windowed decode jobs on a finite decoder pool, and
//! the sequential correction-qubit decisions, and is used as an independent
//! check of the analytic reaction-time, runtime, and storage-occupancy
//! formulas.
//!
//! Time is integer nanoseconds; events are ordered by (time, event rank,
//! sequence number), so identical configurations replay identical traces.
//! Measurement-dependent events are quantized to stabilization-round
//! boundaries, which is where their data physically exists. Storage
//! departures sort before arrivals at equal timestamps.
//!
//! The post-decode hops (results to orchestrator, instruction parsing,
//! return to the QPU) are modeled as strictly sequential with the decode
//! they follow; overlapping instruction parsing with the next window batch
//! would shave up to `t_oc` off each chain and is deliberately not assumed.

use crate::latency::{CommLatencies, DecoderModel};
use crate::models::Distance;
use crate::time::Time;
use crate::windows::{toposort, DecodingWindow, WindowError};
use serde::Serialize;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;
use std::io::Write;

#[derive(Debug)]
pub enum SimError {
    InvalidConfig(&'static str),
    /// The background stream's dependency graph is unusable.
    Stream(WindowError),
    /// No runnable work remained while decode jobs were still pending.
    Deadlock { pending: usize },
    Io(std::io::Error),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::InvalidConfig(what) => write!(f, "invalid simulation config: {what}"),
            SimError::Stream(e) => write!(f, "window stream: {e}"),
            SimError::Deadlock { pending } => {
                write!(f, "deadlock: {pending} decode jobs can never become ready")
            }
            SimError::Io(e) => write!(f, "trace output: {e}"),
        }
    }
}

impl std::error::Error for SimError {}

impl From<WindowError> for SimError {
    fn from(e: WindowError) -> Self {
        SimError::Stream(e)
    }
}

impl From<std::io::Error> for SimError {
    fn from(e: std::io::Error) -> Self {
        SimError::Io(e)
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub d: Distance,
    pub decoder: DecoderModel<f64>,
    pub comms: CommLatencies<f64>,
    pub n_decoders: u32,
    /// Core mode: number of injections in the sequential chain. Factory
    /// mode: number of rotations issued (one per logical cycle, 11 per
    /// distilled state).
    pub n_injections: u32,
    pub stab_round: Time<f64>,
    pub seed: u64,
    /// Fractional decode-time jitter amplitude; 0 keeps runs fully
    /// deterministic, which the analytic comparisons require.
    pub jitter: f64,
    /// Count the produced magic state in factory storage occupancy.
    pub magic_costorage: bool,
}

impl SimConfig {
    pub fn new(d: Distance, decoder: DecoderModel<f64>, comms: CommLatencies<f64>) -> Self {
        SimConfig {
            d,
            decoder,
            comms,
            n_decoders: 2,
            n_injections: 100,
            stab_round: Time::from_us(1.0),
            seed: 0,
            jitter: 0.0,
            magic_costorage: false,
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.n_decoders < 1 {
            return Err(SimError::InvalidConfig("n_decoders must be >= 1"));
        }
        if self.n_injections < 1 {
            return Err(SimError::InvalidConfig("n_injections must be >= 1"));
        }
        if !(self.stab_round.secs() > 0.0) {
            return Err(SimError::InvalidConfig("stab_round must be > 0"));
        }
        if !(0.0..1.0).contains(&self.jitter) {
            return Err(SimError::InvalidConfig("jitter must be in [0, 1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    /// Core mode: mean spacing of correction measurements. Factory mode:
    /// mean spacing of usable distilled states (11 tau_logical when decoders
    /// keep up).
    pub mean_injection_period_us: f64,
    /// Mean measured reaction chain: last measurement data to the arrival of
    /// the dependent instruction, quantized to the round grid.
    pub measured_gamma_mem_us: f64,
    /// Peak concurrently stored correction qubits (plus the produced magic
    /// state when co-storage is on). In core mode this is the storage the
    /// steady-state gadget pipeline must provision at the measured reaction
    /// time: one correction enters per logical cycle and waits one measured
    /// chain.
    pub peak_correction_storage: u64,
    pub total_runtime_us: f64,
    pub decoder_utilization: f64,
    pub max_queue_depth: u64,
    pub windows_decoded: u64,
}

const RANK_DECODE_DONE: u8 = 0;
const RANK_STORAGE_EXIT: u8 = 1;
const RANK_ISSUE: u8 = 2;
const RANK_JOB_READY: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EventKind {
    DecodeDone { worker: u32, job: u32 },
    StorageExit,
    /// Core mode: injection `i`'s measurement data exists (round boundary).
    Measurement { injection: u32 },
    /// Factory mode: rotation `j`'s surgery data exists (cycle boundary).
    RotationData { rotation: u32 },
    JobReady { job: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Event {
    t_ns: u64,
    rank: u8,
    seq: u64,
    kind: EventKind,
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.t_ns, self.rank, self.seq).cmp(&(other.t_ns, other.rank, other.seq))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum JobTag {
    Background,
    ChainA,
    ChainB { index: u32 },
}

#[derive(Debug, Clone)]
struct Job {
    decode_ns: u64,
    syndrome_ready_ns: u64,
    deps_remaining: u32,
    /// Latest dependency hand-off (dependency completion + t_dd).
    earliest_ns: u64,
    dependents: Vec<u32>,
    tag: JobTag,
    scheduled: bool,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Engine<'a> {
    cfg: &'a SimConfig,
    round_ns: u64,
    tau_ns: u64,
    pre_ns: u64,
    post_ns: u64,
    t_dd_ns: u64,
    chain_decode_ns: u64,
    jobs: Vec<Job>,
    heap: BinaryHeap<Reverse<Event>>,
    seq: u64,
    ready_queue: VecDeque<u32>,
    free_workers: BinaryHeap<Reverse<u32>>,
    busy_ns: u64,
    now_ns: u64,
    max_queue_depth: u64,
    decoded: u64,
    storage_now: i64,
    storage_peak: i64,
    trace: Option<&'a mut dyn Write>,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a SimConfig, trace: Option<&'a mut dyn Write>) -> Self {
        let round_ns = cfg.stab_round.whole_ns().max(1);
        let d = f64::from(cfg.d.get());
        // One temporal window: 3d rounds of a square d^2 patch.
        let chain_decode = 3.0 * d * cfg.decoder.tau_d_square(cfg.d).secs();
        Engine {
            cfg,
            round_ns,
            tau_ns: round_ns * u64::from(cfg.d.get()),
            pre_ns: cfg.comms.pre_decode().whole_ns(),
            post_ns: cfg.comms.post_decode().whole_ns(),
            t_dd_ns: cfg.comms.t_dd.whole_ns(),
            chain_decode_ns: Time::from_secs(chain_decode).whole_ns(),
            jobs: Vec::new(),
            heap: BinaryHeap::new(),
            seq: 0,
            ready_queue: VecDeque::new(),
            free_workers: (0..cfg.n_decoders).map(Reverse).collect(),
            busy_ns: 0,
            now_ns: 0,
            max_queue_depth: 0,
            decoded: 0,
            storage_now: 0,
            storage_peak: 0,
            trace,
        }
    }

    fn ceil_round(&self, t_ns: u64) -> u64 {
        t_ns.div_ceil(self.round_ns) * self.round_ns
    }

    fn ceil_cycle(&self, t_ns: u64) -> u64 {
        t_ns.div_ceil(self.tau_ns) * self.tau_ns
    }

    fn push(&mut self, t_ns: u64, rank: u8, kind: EventKind) {
        let seq = self.seq;
        self.seq += 1;
        self.heap.push(Reverse(Event { t_ns, rank, seq, kind }));
    }

    fn emit(&mut self, label: &str, detail: u64) -> Result<(), SimError> {
        if let Some(sink) = self.trace.as_deref_mut() {
            writeln!(sink, "{{\"t_ns\":{},\"event\":\"{label}\",\"id\":{detail}}}", self.now_ns)?;
        }
        Ok(())
    }

    fn jittered(&self, base_ns: u64, job_id: u64) -> u64 {
        if self.cfg.jitter == 0.0 {
            return base_ns;
        }
        let u = splitmix64(self.cfg.seed ^ job_id.wrapping_mul(0x2545_F491_4F6C_DD1D)) as f64
            / u64::MAX as f64;
        let factor = 1.0 + self.cfg.jitter * (2.0 * u - 1.0);
        ((base_ns as f64) * factor).round().max(0.0) as u64
    }

    fn add_job(&mut self, decode_ns: u64, syndrome_ready_ns: u64, deps: u32, tag: JobTag) -> u32 {
        let id = self.jobs.len() as u32;
        let decode_ns = self.jittered(decode_ns, u64::from(id));
        self.jobs.push(Job {
            decode_ns,
            syndrome_ready_ns,
            deps_remaining: deps,
            earliest_ns: 0,
            dependents: Vec::new(),
            tag,
            scheduled: false,
        });
        if deps == 0 {
            self.jobs[id as usize].scheduled = true;
            self.push(syndrome_ready_ns, RANK_JOB_READY, EventKind::JobReady { job: id });
        }
        id
    }

    /// The two sequential temporal windows (A then B) that resolve one
    /// measurement whose data exists at `data_ns`.
    fn spawn_chain(&mut self, data_ns: u64, index: u32) {
        let ready = data_ns + self.pre_ns;
        let a = self.add_job(self.chain_decode_ns, ready, 0, JobTag::ChainA);
        let b = self.add_job(self.chain_decode_ns, ready, 1, JobTag::ChainB { index });
        self.jobs[a as usize].dependents.push(b);
    }

    fn try_dispatch(&mut self) {
        while !self.ready_queue.is_empty() {
            let Some(Reverse(worker)) = self.free_workers.peek().copied() else { break };
            let job = self.ready_queue.pop_front().expect("non-empty");
            self.free_workers.pop();
            let dur = self.jobs[job as usize].decode_ns;
            self.busy_ns += dur;
            self.push(self.now_ns + dur, RANK_DECODE_DONE, EventKind::DecodeDone { worker, job });
        }
    }

    fn job_ready(&mut self, job: u32) -> Result<(), SimError> {
        self.emit("job_ready", u64::from(job))?;
        self.ready_queue.push_back(job);
        self.max_queue_depth = self.max_queue_depth.max(self.ready_queue.len() as u64);
        self.try_dispatch();
        Ok(())
    }

    /// Propagate a completed decode to its dependents.
    fn complete_dependency(&mut self, job: u32) {
        let done = self.now_ns;
        let dependents = self.jobs[job as usize].dependents.clone();
        for dep in dependents {
            let j = &mut self.jobs[dep as usize];
            j.deps_remaining -= 1;
            j.earliest_ns = j.earliest_ns.max(done + self.t_dd_ns);
            if j.deps_remaining == 0 && !j.scheduled {
                j.scheduled = true;
                let at = j.earliest_ns.max(j.syndrome_ready_ns);
                self.push(at, RANK_JOB_READY, EventKind::JobReady { job: dep });
            }
        }
    }

    fn storage_enter(&mut self) {
        self.storage_now += 1;
        self.storage_peak = self.storage_peak.max(self.storage_now);
    }

    fn storage_exit(&mut self) {
        self.storage_now -= 1;
        debug_assert!(self.storage_now >= 0);
    }

    fn pending(&self) -> usize {
        self.jobs.iter().filter(|j| !j.scheduled).count()
    }

    fn utilization(&self) -> f64 {
        if self.now_ns == 0 {
            return 0.0;
        }
        self.busy_ns as f64 / (self.now_ns as f64 * f64::from(self.cfg.n_decoders))
    }
}

fn background_jobs(engine: &mut Engine<'_>, stream: &[DecodingWindow]) -> Result<(), SimError> {
    if stream.is_empty() {
        return Ok(());
    }
    toposort(stream)?;
    let d = engine.cfg.d;
    let round_ns = engine.round_ns;
    let pre_ns = engine.pre_ns;
    let base = engine.jobs.len() as u32;
    let map: HashMap<u32, u32> =
        stream.iter().enumerate().map(|(i, w)| (w.id, base + i as u32)).collect();
    for w in stream {
        let last_round_end_ns =
            (f64::from(w.bounds.t.1) * f64::from(d.get()) / 2.0 * round_ns as f64).round() as u64;
        let decode_ns =
            Time::from_secs(w.rounds(d) * engine.cfg.decoder.tau_d(w.spatial_nodes(d)).secs())
                .whole_ns();
        engine.add_job(
            decode_ns,
            last_round_end_ns + pre_ns,
            w.depends_on.len() as u32,
            JobTag::Background,
        );
    }
    for w in stream {
        for dep in &w.depends_on {
            let di = map[dep] as usize;
            let wi = map[&w.id];
            engine.jobs[di].dependents.push(wi);
        }
    }
    Ok(())
}

fn mean_us(samples: &[u64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let total: u128 = samples.iter().map(|&v| u128::from(v)).sum();
    (total as f64 / samples.len() as f64) / 1e3
}

/// Steady-state slice: drop the first 10% as warm-up.
fn steady(samples: &[u64]) -> &[u64] {
    let skip = samples.len().div_ceil(10).min(samples.len().saturating_sub(1));
    &samples[skip..]
}

/// Run the core-processor pipeline: `n_injections` sequential rotation
/// gadgets, each correction-qubit measurement gated on the previous
/// injection's fully decoded outcome (two 3d-round temporal windows plus the
/// communication hops). `background` windows contend for the same decoder
/// pool and model the surrounding memory-decode load.
pub fn run(cfg: &SimConfig, background: &[DecodingWindow]) -> Result<SimReport, SimError> {
    run_traced(cfg, background, None)
}

/// [`run`] with an optional JSON-lines event trace.
pub fn run_traced<'a>(
    cfg: &'a SimConfig,
    background: &[DecodingWindow],
    trace: Option<&'a mut dyn Write>,
) -> Result<SimReport, SimError> {
    cfg.validate()?;
    let mut engine = Engine::new(cfg, trace);
    background_jobs(&mut engine, background)?;

    // Injection 0 measures at t = 0; its basis needs no predecessor.
    engine.push(0, RANK_ISSUE, EventKind::Measurement { injection: 0 });
    let mut measurement_ns: Vec<u64> = Vec::with_capacity(cfg.n_injections as usize + 1);

    while let Some(Reverse(ev)) = engine.heap.pop() {
        engine.now_ns = ev.t_ns;
        match ev.kind {
            EventKind::Measurement { injection } => {
                engine.emit("measurement", u64::from(injection))?;
                measurement_ns.push(engine.now_ns);
                if injection < cfg.n_injections {
                    engine.spawn_chain(engine.now_ns, injection);
                }
            }
            EventKind::JobReady { job } => engine.job_ready(job)?,
            EventKind::DecodeDone { worker, job } => {
                engine.emit("decode_done", u64::from(job))?;
                engine.decoded += 1;
                engine.free_workers.push(Reverse(worker));
                engine.complete_dependency(job);
                if let JobTag::ChainB { index } = engine.jobs[job as usize].tag {
                    // Decoded outcome travels decoder -> orchestrator ->
                    // controller -> QPU; the dependent measurement lands on
                    // the next round boundary.
                    let decided = engine.ceil_round(engine.now_ns + engine.post_ns);
                    engine.push(decided, RANK_ISSUE, EventKind::Measurement { injection: index + 1 });
                }
                engine.try_dispatch();
            }
            EventKind::RotationData { .. } | EventKind::StorageExit => unreachable!("core mode"),
        }
    }

    let pending = engine.pending();
    if pending > 0 {
        return Err(SimError::Deadlock { pending });
    }

    let periods: Vec<u64> = measurement_ns.windows(2).map(|w| w[1] - w[0]).collect();
    let steady_periods = steady(&periods);
    // Storage the steady-state gadget pipeline implies at this reaction
    // time: one correction per logical cycle, each resident for one
    // measured chain.
    let steady_chain_ns = steady_periods.iter().copied().max().unwrap_or(0);
    let peak = steady_chain_ns.div_ceil(engine.tau_ns).max(1);

    Ok(SimReport {
        mean_injection_period_us: mean_us(steady_periods),
        measured_gamma_mem_us: mean_us(steady_periods),
        peak_correction_storage: peak,
        total_runtime_us: engine.now_ns as f64 / 1e3,
        decoder_utilization: engine.utilization(),
        max_queue_depth: engine.max_queue_depth,
        windows_decoded: engine.decoded,
    })
}

/// Run one 15-to-1 distillation unit: `n_injections` rotations issued one
/// per logical cycle (rotations commute, so they never stall on decode
/// feedback), each correction qubit waiting in storage until its own decode
/// chain returns a measurement basis. A distilled state becomes usable when
/// the last correction of its 11-rotation batch is measured; with
/// co-storage enabled the state occupies a storage patch from its
/// production until it ships at the cycle boundary after it becomes usable
/// (transport is itself a one-cycle logical operation).
pub fn run_msf_unit(cfg: &SimConfig) -> Result<SimReport, SimError> {
    run_msf_unit_traced(cfg, None)
}

/// [`run_msf_unit`] with an optional JSON-lines event trace.
pub fn run_msf_unit_traced<'a>(
    cfg: &'a SimConfig,
    trace: Option<&'a mut dyn Write>,
) -> Result<SimReport, SimError> {
    cfg.validate()?;
    let mut engine = Engine::new(cfg, trace);
    let rotations = cfg.n_injections;

    for j in 0..rotations {
        let data = engine.tau_ns * u64::from(j + 1);
        engine.push(data, RANK_ISSUE, EventKind::RotationData { rotation: j });
    }

    let batches = (rotations / 11) as usize;
    let mut batch_remaining: Vec<u32> = vec![11; batches];
    let mut batch_valid_ns: Vec<u64> = vec![0; batches];
    let mut entry_ns: Vec<u64> = vec![0; rotations as usize];
    let mut exit_ns: Vec<u64> = vec![0; rotations as usize];

    while let Some(Reverse(ev)) = engine.heap.pop() {
        engine.now_ns = ev.t_ns;
        match ev.kind {
            EventKind::RotationData { rotation } => {
                engine.emit("rotation_data", u64::from(rotation))?;
                entry_ns[rotation as usize] = engine.now_ns;
                engine.storage_enter();
                engine.spawn_chain(engine.now_ns, rotation);
            }
            EventKind::JobReady { job } => engine.job_ready(job)?,
            EventKind::DecodeDone { worker, job } => {
                engine.emit("decode_done", u64::from(job))?;
                engine.decoded += 1;
                engine.free_workers.push(Reverse(worker));
                engine.complete_dependency(job);
                if let JobTag::ChainB { index } = engine.jobs[job as usize].tag {
                    let decided = engine.ceil_round(engine.now_ns + engine.post_ns);
                    engine.push(decided, RANK_STORAGE_EXIT, EventKind::StorageExit);
                    exit_ns[index as usize] = decided;
                    let b = (index / 11) as usize;
                    if b < batches {
                        batch_remaining[b] -= 1;
                        if batch_remaining[b] == 0 {
                            batch_valid_ns[b] = decided;
                        }
                    }
                }
                engine.try_dispatch();
            }
            EventKind::StorageExit => {
                engine.emit("storage_exit", 0)?;
                engine.storage_exit();
            }
            EventKind::Measurement { .. } => unreachable!("factory mode"),
        }
    }

    let pending = engine.pending();
    if pending > 0 {
        return Err(SimError::Deadlock { pending });
    }

    let mut peak = engine.storage_peak;
    if cfg.magic_costorage && batches > 0 {
        // Sweep corrections and produced states together; exits sort before
        // entries at equal timestamps, mirroring the event ranks.
        let mut marks: Vec<(u64, u8, i64)> = Vec::with_capacity(2 * (rotations as usize + batches));
        for j in 0..rotations as usize {
            marks.push((entry_ns[j], 1, 1));
            marks.push((exit_ns[j], 0, -1));
        }
        for (b, &valid) in batch_valid_ns.iter().enumerate() {
            let production = engine.tau_ns * (11 * (b as u64) + 11);
            let ship = engine.ceil_cycle(valid).max(production + engine.tau_ns);
            marks.push((production, 1, 1));
            marks.push((ship, 0, -1));
        }
        marks.sort_unstable();
        let mut occ = 0i64;
        let mut combined = 0i64;
        for (_, _, delta) in marks {
            occ += delta;
            combined = combined.max(occ);
        }
        peak = combined;
    }

    let valid_periods: Vec<u64> = batch_valid_ns.windows(2).map(|w| w[1] - w[0]).collect();
    let chains: Vec<u64> = entry_ns.iter().zip(&exit_ns).map(|(e, x)| x - e).collect();
    let output_period = if valid_periods.is_empty() {
        engine.tau_ns as f64 * 11.0 / 1e3
    } else {
        mean_us(steady(&valid_periods))
    };

    Ok(SimReport {
        mean_injection_period_us: output_period,
        measured_gamma_mem_us: mean_us(steady(&chains)),
        peak_correction_storage: peak.max(1) as u64,
        total_runtime_us: engine.now_ns as f64 / 1e3,
        decoder_utilization: engine.utilization(),
        max_queue_depth: engine.max_queue_depth,
        windows_decoded: engine.decoded,
    })
}

/// Decoders that keep one factory unit's chain windows from queueing.
pub fn msf_sufficient_decoders(cfg: &SimConfig) -> u32 {
    let d = f64::from(cfg.d.get());
    let window = 3.0 * d * cfg.decoder.tau_d_square(cfg.d).secs();
    let tau = cfg.stab_round.secs() * d;
    2 * (window / tau).ceil() as u32 + 3
}
