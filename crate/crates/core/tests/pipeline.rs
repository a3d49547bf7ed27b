//! Cross-module checks: analytically sized decoder pools must actually
//! sustain the window streams the geometry module generates when scheduled
//! on the event simulator.

use qreact_core::fleet::k_mem;
use qreact_core::latency::{CommLatencies, DecoderModel};
use qreact_core::models::Distance;
use qreact_core::sim::{run, SimConfig};
use qreact_core::time::Time;
use qreact_core::windows::{
    from_jsonl, memory_windows_for_patch, surgery_windows, to_jsonl, DecodingWindow, Layer,
};

/// Concatenate per-patch streams into one job set with fresh ids.
fn merge_streams(streams: Vec<Vec<DecodingWindow>>) -> Vec<DecodingWindow> {
    let mut out = Vec::new();
    let mut offset = 0u32;
    for stream in streams {
        let len = stream.len() as u32;
        for mut w in stream {
            w.id += offset;
            for dep in &mut w.depends_on {
                *dep += offset;
            }
            out.push(w);
        }
        offset += len;
    }
    out
}

fn stream_for_pairs(n_pairs: usize, cycles: u32, d: Distance) -> Vec<DecodingWindow> {
    merge_streams((0..n_pairs).map(|_| memory_windows_for_patch(cycles, d, 4, 2)).collect())
}

#[test]
fn k_mem_workers_sustain_the_memory_stream() {
    let d = Distance::new(21).unwrap();
    let decoder = DecoderModel::pymatching();
    let comms = CommLatencies::measured();
    let tau = Time::from_us(21.0);
    let q_logical = 4; // two pair patches
    let workers = k_mem(q_logical, d, &decoder, comms.t_dd, tau) as u32;

    let cycles = 10_000;
    let stream = stream_for_pairs(q_logical as usize / 2, cycles, d);
    let mut cfg = SimConfig::new(d, decoder, comms);
    cfg.n_injections = 1;
    cfg.n_decoders = workers;
    let sustained = run(&cfg, &stream).unwrap();
    assert_eq!(sustained.windows_decoded, stream.len() as u64 + 2);
    assert!(
        sustained.max_queue_depth <= u64::from(workers),
        "backlog {} on {} workers",
        sustained.max_queue_depth,
        workers
    );

    // Half the analytic pool cannot keep up; backlog grows with the stream.
    cfg.n_decoders = workers / 2;
    let starved = run(&cfg, &stream).unwrap();
    assert!(
        starved.max_queue_depth > 5 * sustained.max_queue_depth.max(1),
        "expected unbounded backlog, got {}",
        starved.max_queue_depth
    );
    assert!(starved.decoder_utilization > 0.95);
}

#[test]
fn layer_share_of_workers_decodes_a_surgery_without_pileup() {
    let d = Distance::new(13).unwrap();
    let ws = surgery_windows(30, 1, d, true);
    let per_layer = (1u32..=3)
        .map(|l| ws.iter().filter(|w| w.layer == Layer::Spatial(l as u8)).count())
        .max()
        .unwrap() as u32;
    let mut cfg = SimConfig::new(d, DecoderModel::cc_fpga(), CommLatencies::measured());
    cfg.n_injections = 1;
    cfg.n_decoders = per_layer;
    let report = run(&cfg, &ws).unwrap();
    assert_eq!(report.windows_decoded, ws.len() as u64 + 2);
    // One-third of the patches worth of decoders never queues more than a
    // layer of windows.
    assert!(report.max_queue_depth <= u64::from(per_layer) + 2);
}

#[test]
fn exported_stream_round_trips_into_the_simulator() {
    let d = Distance::new(13).unwrap();
    let ws = memory_windows_for_patch(60, d, 2, 2);
    let mut buf = Vec::new();
    to_jsonl(&ws, &mut buf).unwrap();
    let parsed = from_jsonl(buf.as_slice()).unwrap();
    assert_eq!(parsed, ws);
    let mut cfg = SimConfig::new(d, DecoderModel::cc_asic(), CommLatencies::measured());
    cfg.n_injections = 3;
    cfg.n_decoders = 3;
    let a = run(&cfg, &ws).unwrap();
    let b = run(&cfg, &parsed).unwrap();
    assert_eq!(a, b);
}

#[test]
fn closed_form_models_match_brute_force_to_1e12() {
    use qreact_core::models::{p_lattice_surgery, p_mem, p_pi8_gadget, ErrorFitParams, SurgeryShape};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    let mut rng = StdRng::seed_from_u64(42);
    for _ in 0..1000 {
        let dv = 2 * rng.gen_range(1..=30) + 1;
        let dist = Distance::new(dv).unwrap();
        let df = f64::from(dv);
        let rounds = rng.gen_range(1..=3 * dv);
        let rf = f64::from(rounds);
        let mu: f64 = rng.gen_range(1e-3..0.1);
        let lambda: f64 = rng.gen_range(2.0..20.0);
        let mu_t: f64 = rng.gen_range(1e-3..0.1);
        let lambda_t: f64 = rng.gen_range(2.0..20.0);
        let fit = ErrorFitParams {
            mu,
            lambda,
            mu_s: mu,
            lambda_s: lambda,
            mu_t,
            lambda_t,
            p_magic: 4.73e-5,
            discard_magic: 0.41,
        };
        let sup_s = lambda.powf(-(df + 1.0) / 2.0);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(f64::MIN_POSITIVE);

        assert!(close(p_mem(dist, rounds, &fit).unwrap().value(), (mu * df * rf * sup_s).min(1.0)));

        let k = rng.gen_range(1..=80u32);
        let b = rng.gen_range(0..=80u32);
        let shape = SurgeryShape::new(k, b, rounds, dist).unwrap();
        let (kf, bf) = (f64::from(k), f64::from(b));
        let brute = (mu * ((kf + bf) * df * rf + kf * df) * sup_s
            + mu_t * bf * df * df * lambda_t.powf(-(rf + 1.0) / 2.0))
        .min(1.0);
        assert!(close(p_lattice_surgery(&shape, &fit).value(), brute));

        let k_avg = rng.gen_range(0.0..300.0);
        let b_avg = rng.gen_range(0.0..300.0);
        let g_mem = rng.gen_range(0.0..3000.0);
        let g_ls = rng.gen_range(0.0..9000.0);
        let got = p_pi8_gadget(
            dist,
            k_avg,
            b_avg,
            Time::from_us(g_mem),
            Time::from_us(g_ls),
            Time::from_us(df),
            &fit,
        )
        .unwrap()
        .value();
        let ls = |kk: f64, bb: f64| {
            (mu * ((kk + bb) * df * df + kk * df) * sup_s
                + mu_t * bb * df * df * lambda_t.powf(-(df + 1.0) / 2.0))
            .min(1.0)
        };
        let brute = (ls(3.0, 2.0)
            + ls(k_avg + 1.0, b_avg)
            + (k_avg * g_mem + g_ls + df) / df * (mu * df * df * sup_s).min(1.0))
        .min(1.0);
        assert!(close(got, brute), "{got} vs {brute}");
    }
}

#[test]
fn analytic_layer_runs_in_f32() {
    use qreact_core::latency::{gamma_mem, CommLatencies, DecoderModel};
    let d = Distance::new(31).unwrap();
    let comms32 = CommLatencies::<f32>::measured();
    let g32 = gamma_mem(&DecoderModel::<f32>::cc_asic(), d, &comms32).us();
    let comms64 = CommLatencies::<f64>::measured();
    let g64 = gamma_mem(&DecoderModel::<f64>::cc_asic(), d, &comms64).us();
    assert!((f64::from(g32) - g64).abs() / g64 < 1e-4, "{g32} vs {g64}");
}
