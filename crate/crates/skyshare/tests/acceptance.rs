//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see them on success).
//!
//! Criteria 1-3 and 7 share a single 30-trial experiment over the bundled
//! experiment document; criterion 4 checks the grid path against an
//! independent scalar recomputation written from scratch in this file.

use skyshare::coverage::{compute_grid, evaluate_at, flyable_ratio, GridSpec};
use skyshare::experiment::{run_experiment, trial_seed, ExperimentResults, ExperimentSpec};
use skyshare::export::{grid_to_csv, grid_to_pgm, to_json_pretty, EvaluateSummary};
use skyshare::geometry::Position3D;
use skyshare::link::{ChannelAssignment, LinkModels, RadioNode, SharingThresholds};
use skyshare::planner::{partition_area, PartitionStrategy};
use skyshare::propagation::{
    channel_rejection, noise_power_dbm, path_loss, ChannelId, LinkClass, NoiseModel,
    PathLossModel, Rejection,
};
use skyshare::scenario::{generate_routers, Scenario};
use skyshare::AntennaPattern;
use std::sync::OnceLock;
use std::time::Instant;

const RUNTIME_BUDGET_S: f64 = 300.0;

fn report(name: &str, ok: bool, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] {name}: {detail}");
    assert!(ok, "{name}: {detail}");
}

fn fixture(name: &str) -> String {
    format!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/{}"), name)
}

struct PaperRun {
    spec: ExperimentSpec,
    results: ExperimentResults,
    elapsed_s: f64,
}

fn paper_run() -> &'static PaperRun {
    static RUN: OnceLock<PaperRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let spec = ExperimentSpec::from_file(fixture("paper_experiment.json"))
            .expect("bundled experiment document loads");
        let start = Instant::now();
        let results = run_experiment(&spec).expect("experiment runs");
        PaperRun {
            spec,
            results,
            elapsed_s: start.elapsed().as_secs_f64(),
        }
    })
}

#[test]
fn criterion_1_proposed_vs_conventional_bands() {
    let run = paper_run();
    let r = &run.results;
    let conventional = r.conventional.expect("comparison enabled in the document");
    let every_trial = r
        .trials
        .iter()
        .all(|t| t.ratio_optimized > t.ratio_conventional.unwrap());
    let ok = r.optimized.mean >= 0.85
        && conventional.mean <= 0.15
        && every_trial
        && run.elapsed_s <= RUNTIME_BUDGET_S;
    report(
        "criterion 1 (flyable-ratio comparison bands)",
        ok,
        format!(
            "proposed mean {:.4} (>= 0.85), conventional mean {:.4} (<= 0.15), \
             proposed > conventional on all {} trials: {}, runtime {:.1} s (<= {RUNTIME_BUDGET_S} s)",
            r.optimized.mean,
            conventional.mean,
            r.trials.len(),
            every_trial,
            run.elapsed_s
        ),
    );
}

#[test]
fn criterion_2_optimized_gs_dominates_center() {
    let r = &paper_run().results;
    let violations: Vec<u32> = r
        .trials
        .iter()
        .filter(|t| t.ratio_optimized < t.ratio_center)
        .map(|t| t.trial)
        .collect();
    report(
        "criterion 2 (optimized GS >= centre GS, exact)",
        violations.is_empty(),
        format!(
            "{} trials, optimized mean {:.4} vs centre mean {:.4}, violations: {violations:?}",
            r.trials.len(),
            r.optimized.mean,
            r.center.mean
        ),
    );
}

#[test]
fn criterion_3_three_uav_allocation() {
    let r = &paper_run().results;
    let full_cover = r
        .trials
        .iter()
        .filter(|t| t.combined_ratio.unwrap() >= 0.99)
        .count();
    let dominance = r
        .trials
        .iter()
        .all(|t| t.combined_ratio.unwrap() >= t.best_fixed_pair_ratio.unwrap());
    let ok = full_cover >= 25 && dominance;
    report(
        "criterion 3 (three-UAV strip allocation)",
        ok,
        format!(
            "combined >= 0.99 on {full_cover}/{} trials (need >= 25), \
             combined >= best fixed pair on every trial: {dominance}",
            r.trials.len()
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 4: independent scalar oracle
// ---------------------------------------------------------------------------

/// Straight-line recomputation of the three SINR groups in the dB domain,
/// written directly from the link-budget definitions and sharing no code
/// with the library's evaluator.
mod oracle {
    pub struct Antenna {
        pub peak_dbi: f64,
        /// None for omni.
        pub main_lobe: Option<(f64, f64)>, // (3 dB beamwidth, sidelobe floor)
    }

    impl Antenna {
        fn gain(&self, theta_deg: f64) -> f64 {
            match self.main_lobe {
                None => self.peak_dbi,
                Some((bw, floor)) => {
                    let att = 12.0 * (theta_deg / bw) * (theta_deg / bw);
                    self.peak_dbi - att.min(floor)
                }
            }
        }
    }

    pub struct Terminal {
        pub pos: [f64; 3],
        pub tx_dbm: f64,
        pub antenna: Antenna,
    }

    pub struct Router {
        pub pos: [f64; 3],
        pub tx_dbm: f64,
        pub gain_dbi: f64,
        pub channel: u8,
    }

    pub struct Constants {
        pub ref_loss_db: f64,
        pub ref_distance_m: f64,
        pub exp_air: f64,
        pub exp_ground: f64,
        pub noise_uav_dbm: f64,
        pub noise_gs_dbm: f64,
        pub noise_wlan_dbm: f64,
        pub ue_distance_m: f64,
        pub entry_loss_db: f64,
        pub uplink: u8,
        pub downlink: u8,
    }

    fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }

    fn angle_deg(apex: [f64; 3], toward: [f64; 3], other: [f64; 3]) -> f64 {
        let u = [toward[0] - apex[0], toward[1] - apex[1], toward[2] - apex[2]];
        let v = [other[0] - apex[0], other[1] - apex[1], other[2] - apex[2]];
        let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        let cross = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        let cross_norm = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        cross_norm.atan2(dot).to_degrees()
    }

    fn pl(c: &Constants, exponent: f64, d: f64) -> f64 {
        let d = d.max(c.ref_distance_m);
        c.ref_loss_db + 10.0 * exponent * (d / c.ref_distance_m).log10()
    }

    /// 0/16/32 dB at offsets 0/1/2, full rejection beyond.
    fn rejection(a: u8, b: u8) -> Option<f64> {
        match a.abs_diff(b) {
            0 => Some(0.0),
            1 => Some(16.0),
            2 => Some(32.0),
            _ => None,
        }
    }

    fn mw(dbm: f64) -> f64 {
        10f64.powf(dbm / 10.0)
    }

    pub fn sinrs(
        uav: &Terminal,
        gs: &Terminal,
        routers: &[Router],
        c: &Constants,
    ) -> (f64, f64, Vec<f64>) {
        let d_air = dist(uav.pos, gs.pos);
        let s_up = uav.tx_dbm + uav.antenna.gain(0.0) + gs.antenna.gain(0.0)
            - pl(c, c.exp_air, d_air);
        let s_down = gs.tx_dbm + gs.antenna.gain(0.0) + uav.antenna.gain(0.0)
            - pl(c, c.exp_air, d_air);

        let mut i_gs = 0.0f64;
        let mut i_uav = 0.0f64;
        let mut terrestrial = Vec::new();
        for r in routers {
            let theta_gs = angle_deg(gs.pos, uav.pos, r.pos);
            let theta_uav = angle_deg(uav.pos, gs.pos, r.pos);
            let d_gs_r = dist(gs.pos, r.pos);
            let d_uav_r = dist(uav.pos, r.pos);

            if let Some(rej) = rejection(c.uplink, r.channel) {
                i_gs += mw(r.tx_dbm + r.gain_dbi + gs.antenna.gain(theta_gs)
                    - pl(c, c.exp_ground, d_gs_r)
                    - rej
                    - c.entry_loss_db);
            }
            if let Some(rej) = rejection(c.downlink, r.channel) {
                i_uav += mw(r.tx_dbm + r.gain_dbi + uav.antenna.gain(theta_uav)
                    - pl(c, c.exp_air, d_uav_r)
                    - rej
                    - c.entry_loss_db);
            }

            let s_terr = r.tx_dbm + r.gain_dbi - pl(c, c.exp_ground, c.ue_distance_m);
            let mut i_victim = mw(c.noise_wlan_dbm);
            if let Some(rej) = rejection(r.channel, c.uplink) {
                i_victim += mw(uav.tx_dbm + uav.antenna.gain(theta_uav) + r.gain_dbi
                    - pl(c, c.exp_air, d_uav_r)
                    - rej
                    - c.entry_loss_db);
            }
            if let Some(rej) = rejection(r.channel, c.downlink) {
                i_victim += mw(gs.tx_dbm + gs.antenna.gain(theta_gs) + r.gain_dbi
                    - pl(c, c.exp_ground, d_gs_r)
                    - rej
                    - c.entry_loss_db);
            }
            terrestrial.push(s_terr - 10.0 * i_victim.log10());
        }
        let up = s_up - 10.0 * (i_gs + mw(c.noise_gs_dbm)).log10();
        let down = s_down - 10.0 * (i_uav + mw(c.noise_uav_dbm)).log10();
        (up, down, terrestrial)
    }
}

#[test]
fn criterion_4_scalar_oracle_equivalence() {
    use rand_core::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut unit = move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let thresholds = SharingThresholds::default();
    let mut worst = 0.0f64;
    let configs = 1000;
    for _ in 0..configs {
        let range = |lo: f64, hi: f64, u: f64| lo + u * (hi - lo);
        let uav_pos = Position3D {
            x: range(0.0, 1000.0, unit()),
            y: range(0.0, 1000.0, unit()),
            z: range(5.0, 150.0, unit()),
        };
        let gs_pos = Position3D {
            x: range(0.0, 1000.0, unit()),
            y: range(0.0, 1000.0, unit()),
            z: 2.0,
        };
        let directional = unit() < 0.75;
        let (uav_ant, gs_ant) = if directional {
            (
                AntennaPattern::directional(15.0, 36.0, 25.0).unwrap(),
                AntennaPattern::directional(25.0, 4.0, 25.0).unwrap(),
            )
        } else {
            (AntennaPattern::omni(0.0), AntennaPattern::omni(0.0))
        };
        let uav_tx = range(-5.0, 5.0, unit());
        let gs_tx = range(5.0, 15.0, unit());
        let uplink = (unit() * 10.0) as u8 % 10;
        let downlink = (1 + uplink + (unit() * 9.0) as u8 % 9) % 10;
        let n_routers = (unit() * 7.0) as usize % 7;
        let entry_loss = range(0.0, 8.0, unit());
        let nf = range(2.0, 9.0, unit());

        let mut routers = Vec::new();
        let mut oracle_routers = Vec::new();
        for k in 0..n_routers {
            let pos = Position3D {
                x: range(0.0, 1000.0, unit()),
                y: range(0.0, 1000.0, unit()),
                z: 1.5,
            };
            let tx = range(-5.0, 25.0, unit());
            let chan = (unit() * 10.0) as u8 % 10;
            routers.push(
                RadioNode::router(
                    format!("r{k}"),
                    pos,
                    tx,
                    AntennaPattern::omni(0.0),
                    ChannelId::new(chan).unwrap(),
                )
                .unwrap(),
            );
            oracle_routers.push(oracle::Router {
                pos: [pos.x, pos.y, pos.z],
                tx_dbm: tx,
                gain_dbi: 0.0,
                channel: chan,
            });
        }

        let uav = RadioNode::uav(
            "uav",
            uav_pos,
            uav_tx,
            uav_ant,
            ChannelId::new(uplink).unwrap(),
            ChannelId::new(downlink).unwrap(),
        )
        .unwrap();
        let gs = RadioNode::gs(
            "gs",
            gs_pos,
            gs_tx,
            gs_ant,
            ChannelId::new(uplink).unwrap(),
            ChannelId::new(downlink).unwrap(),
        )
        .unwrap();
        let models = LinkModels {
            path_loss: PathLossModel::paper_default(),
            uav_noise: NoiseModel::new(10e6, nf).unwrap(),
            gs_noise: NoiseModel::new(10e6, nf).unwrap(),
            wlan_noise: NoiseModel::new(20e6, nf).unwrap(),
            ue_distance_m: 5.0,
            building_entry_loss_db: entry_loss,
        };

        let eval = evaluate_at(&uav, &gs, &routers, &models, &thresholds, &uav_pos).unwrap();

        let main_lobe = |ant: AntennaPattern| match ant {
            AntennaPattern::Omni { peak_gain_dbi } => oracle::Antenna {
                peak_dbi: peak_gain_dbi,
                main_lobe: None,
            },
            AntennaPattern::Directional {
                peak_gain_dbi,
                beamwidth_3db_deg,
                sidelobe_floor_db,
            } => oracle::Antenna {
                peak_dbi: peak_gain_dbi,
                main_lobe: Some((beamwidth_3db_deg, sidelobe_floor_db)),
            },
        };
        let constants = oracle::Constants {
            ref_loss_db: models.path_loss.reference_loss_db,
            ref_distance_m: 1.0,
            exp_air: 2.0,
            exp_ground: 4.0,
            noise_uav_dbm: noise_power_dbm(&models.uav_noise),
            noise_gs_dbm: noise_power_dbm(&models.gs_noise),
            noise_wlan_dbm: noise_power_dbm(&models.wlan_noise),
            ue_distance_m: 5.0,
            entry_loss_db: entry_loss,
            uplink,
            downlink,
        };
        let (up, down, terr) = oracle::sinrs(
            &oracle::Terminal {
                pos: [uav_pos.x, uav_pos.y, uav_pos.z],
                tx_dbm: uav_tx,
                antenna: main_lobe(uav_ant),
            },
            &oracle::Terminal {
                pos: [gs_pos.x, gs_pos.y, gs_pos.z],
                tx_dbm: gs_tx,
                antenna: main_lobe(gs_ant),
            },
            &oracle_routers,
            &constants,
        );

        worst = worst.max((eval.sinr.uplink_db - up).abs());
        worst = worst.max((eval.sinr.downlink_db - down).abs());
        for (a, b) in eval.sinr.terrestrial_db.iter().zip(&terr) {
            worst = worst.max((a - b).abs());
        }
    }
    report(
        "criterion 4 (scalar oracle equivalence)",
        worst < 1e-9,
        format!("{configs} random configurations, max |delta| = {worst:.3e} dB (< 1e-9)"),
    );
}

#[test]
fn criterion_5_link_budget_anchors() {
    let model = PathLossModel::paper_default();
    let at_1m = path_loss(&model, LinkClass::AirToGround, 1.0).unwrap().db;
    let noise = noise_power_dbm(&NoiseModel::new(10e6, 6.0).unwrap());
    let gs = AntennaPattern::directional(25.0, 4.0, 25.0).unwrap();
    let uav = AntennaPattern::directional(15.0, 36.0, 25.0).unwrap();
    let half_bw_gs = gs.gain_dbi(2.0).unwrap();
    let half_bw_uav = uav.gain_dbi(18.0).unwrap();
    let ch = |i| ChannelId::new(i).unwrap();
    let rejections_exact = channel_rejection(&ch(4), &ch(4)) == Rejection::Db(0.0)
        && channel_rejection(&ch(4), &ch(3)) == Rejection::Db(16.0)
        && channel_rejection(&ch(4), &ch(6)) == Rejection::Db(32.0)
        && channel_rejection(&ch(4), &ch(7)) == Rejection::Total;
    let ok = (at_1m - 47.57).abs() <= 0.01
        && (noise - (-98.0)).abs() <= 0.01
        && (half_bw_gs - 22.0).abs() <= 1e-9
        && (half_bw_uav - 12.0).abs() <= 1e-9
        && rejections_exact;
    report(
        "criterion 5 (link-budget unit anchors)",
        ok,
        format!(
            "PL(1 m) = {at_1m:.4} dB, noise(10 MHz, NF 6) = {noise:.4} dBm, \
             gain at half-beamwidth = peak - {:.9}/{:.9} dB, rejection table exact: {rejections_exact}",
            25.0 - half_bw_gs,
            15.0 - half_bw_uav
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: property suites
// ---------------------------------------------------------------------------

fn trial0_scenario() -> Scenario {
    let run = paper_run();
    let base = &run.spec.scenario;
    let seed = trial_seed(run.spec.seed, 0);
    let routers = generate_routers(
        seed,
        &base.bounds,
        &run.spec.router_template,
        base.uavs[0].uplink,
    )
    .unwrap();
    base.with_routers(routers)
}

fn trial0_gs() -> Position3D {
    let t = &paper_run().results.trials[0];
    Position3D { x: t.gs_x, y: t.gs_y, z: paper_run().spec.scenario.gs.position.z }
}

#[test]
fn criterion_6_property_suites() {
    let scenario = trial0_scenario();
    let gs_pos = trial0_gs();
    let uav = scenario.uav_node(0).unwrap();
    let gs = scenario.gs_node_at(gs_pos).unwrap();
    let routers = scenario.router_nodes().unwrap();
    let models = scenario.models().unwrap();
    let grid = GridSpec::new(scenario.bounds, 25.0, scenario.uav_altitude_m).unwrap();
    let base_ratio =
        flyable_ratio(&uav, &gs, &routers, &models, &scenario.thresholds, &grid).unwrap();

    // Raising any threshold never increases the ratio.
    let mut thresholds_monotone = true;
    for bump in [1.0, 5.0, 15.0] {
        let t = SharingThresholds {
            uplink_min_db: scenario.thresholds.uplink_min_db + bump,
            downlink_min_db: scenario.thresholds.downlink_min_db + bump,
            terrestrial_min_db: scenario.thresholds.terrestrial_min_db + bump,
        };
        let r = flyable_ratio(&uav, &gs, &routers, &models, &t, &grid).unwrap();
        thresholds_monotone &= r <= base_ratio;
    }

    // Removing a router never decreases the ratio.
    let mut removal_monotone = true;
    for drop in 0..routers.len() {
        let fewer: Vec<RadioNode> = routers
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop)
            .map(|(_, r)| r.clone())
            .collect();
        let r = flyable_ratio(&uav, &gs, &fewer, &models, &scenario.thresholds, &grid).unwrap();
        removal_monotone &= r >= base_ratio;
    }

    // Rejection is non-decreasing in channel offset.
    let as_db = |r: Rejection| match r {
        Rejection::Db(v) => v,
        Rejection::Total => f64::INFINITY,
    };
    let mut rejection_monotone = true;
    for a in 0..=9u8 {
        let mut last = -1.0;
        for off in 0..=9u8 {
            if a + off > 9 {
                break;
            }
            let r = as_db(channel_rejection(
                &ChannelId::new(a).unwrap(),
                &ChannelId::new(a + off).unwrap(),
            ));
            rejection_monotone &= r >= last;
            last = r;
        }
    }

    // All-omni scenarios are invariant under rotation about the vertical.
    let mut omni_uav = uav.clone();
    let mut omni_gs = gs.clone();
    omni_uav.antenna = AntennaPattern::omni(0.0);
    omni_gs.antenna = AntennaPattern::omni(0.0);
    let reference = skyshare::link::link_sinr(&omni_uav, &omni_gs, &routers, &models).unwrap();
    let phi = 0.7321f64;
    let rotate = |p: Position3D| Position3D {
        x: 500.0 + (p.x - 500.0) * phi.cos() - (p.y - 500.0) * phi.sin(),
        y: 500.0 + (p.x - 500.0) * phi.sin() + (p.y - 500.0) * phi.cos(),
        z: p.z,
    };
    omni_uav.position = rotate(omni_uav.position);
    omni_gs.position = rotate(omni_gs.position);
    let rotated_routers: Vec<RadioNode> = routers
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.position = rotate(r.position);
            r
        })
        .collect();
    let rotated =
        skyshare::link::link_sinr(&omni_uav, &omni_gs, &rotated_routers, &models).unwrap();
    let mut rotation_invariant = (reference.uplink_db - rotated.uplink_db).abs() < 1e-9
        && (reference.downlink_db - rotated.downlink_db).abs() < 1e-9;
    for (a, b) in reference.terrestrial_db.iter().zip(&rotated.terrestrial_db) {
        rotation_invariant &= (a - b).abs() < 1e-9;
    }

    // Partitions tile the grid exactly for both strategies.
    let mut tiling_exact = true;
    for strategy in [PartitionStrategy::Strips, PartitionStrategy::Sectors] {
        let parts = partition_area(3, strategy, (gs_pos.x, gs_pos.y), &grid).unwrap();
        for &(x, y) in &grid.centers() {
            tiling_exact &= parts.iter().filter(|p| p.contains(x, y)).count() == 1;
        }
    }

    // Determinism: repeated exports are byte-identical and a single-thread
    // pool reproduces the default pool bit-for-bit.
    let map_a = compute_grid(&uav, &gs, &routers, &models, &scenario.thresholds, &grid).unwrap();
    let map_b = compute_grid(&uav, &gs, &routers, &models, &scenario.thresholds, &grid).unwrap();
    let map_seq = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| compute_grid(&uav, &gs, &routers, &models, &scenario.thresholds, &grid))
        .unwrap();
    let deterministic = grid_to_csv(&map_a) == grid_to_csv(&map_b)
        && grid_to_pgm(&map_a) == grid_to_pgm(&map_b)
        && grid_to_csv(&map_a) == grid_to_csv(&map_seq)
        && to_json_pretty(&EvaluateSummary::new(&map_a, gs_pos, &scenario))
            == to_json_pretty(&EvaluateSummary::new(&map_b, gs_pos, &scenario));

    let ok = thresholds_monotone
        && removal_monotone
        && rejection_monotone
        && rotation_invariant
        && tiling_exact
        && deterministic;
    report(
        "criterion 6 (property suites)",
        ok,
        format!(
            "thresholds monotone: {thresholds_monotone}, router removal monotone: {removal_monotone}, \
             rejection monotone: {rejection_monotone}, omni rotation invariant: {rotation_invariant}, \
             tiling exact: {tiling_exact}, deterministic exports/parallelism: {deterministic}"
        ),
    );
}

#[test]
fn criterion_7_discretization_stability() {
    let scenario = trial0_scenario();
    let gs_pos = trial0_gs();
    let uav = scenario.uav_node(0).unwrap();
    let gs = scenario.gs_node_at(gs_pos).unwrap();
    let routers = scenario.router_nodes().unwrap();
    let models = scenario.models().unwrap();

    let coarse = GridSpec::new(scenario.bounds, 10.0, scenario.uav_altitude_m).unwrap();
    let fine = GridSpec::new(scenario.bounds, 5.0, scenario.uav_altitude_m).unwrap();
    let r10 =
        flyable_ratio(&uav, &gs, &routers, &models, &scenario.thresholds, &coarse).unwrap();
    let r5 = flyable_ratio(&uav, &gs, &routers, &models, &scenario.thresholds, &fine).unwrap();
    let delta_pp = (r10 - r5).abs() * 100.0;
    report(
        "criterion 7 (discretization stability)",
        delta_pp < 2.0,
        format!("ratio at 10 m = {r10:.4}, at 5 m = {r5:.4}, |delta| = {delta_pp:.3} pp (< 2)"),
    );
}
