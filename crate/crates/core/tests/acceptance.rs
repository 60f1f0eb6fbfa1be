//! Acceptance criteria. Each criterion prints one PASS/FAIL line; run with
//! `cargo test -p spl-core --test acceptance -- --nocapture` to see them.

mod common;

use std::time::{Duration, Instant};

use spl_core::cb_sim::{end_to_end_learn, CbConfig};
use spl_core::scheduler::{
    general_schedule, heuristic_minimize, kn_log_schedule, lower_bound, schedule_size_formula,
    table9_schedule, verify_cover, DEFAULT_SEARCH_BUDGET,
};
use spl_core::spl_model::{dense_channel_oracle, sample_model, SplModel, SplTerm};
use spl_core::topology::DEFAULT_COLORING_BUDGET;
use spl_core::{Coloring, MeasurementSchedule, PauliAxis, PauliString, TopologyGraph};

use common::*;
use rand::Rng;

fn verdict(id: u32, name: &str, pass: bool, elapsed: Duration, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] AC{id} {name} ({:.3}s): {detail}", elapsed.as_secs_f64());
    assert!(pass, "AC{id} {name} failed: {detail}");
}

/// Graphs covering every structural family exercised below.
fn colorable_family() -> Vec<TopologyGraph> {
    let mut out = Vec::new();
    let mut r = rng(2024);
    while out.len() < 100 {
        let i = out.len();
        let g = match i % 10 {
            0 => TopologyGraph::path(2 + r.gen_range(0..60)),
            1 => TopologyGraph::cycle(3 + r.gen_range(0..40)),
            2 => {
                let n = r.gen_range(2..60);
                random_tree(&mut r, n)
            }
            3 => triangular_mesh(r.gen_range(2..7), r.gen_range(2..7)),
            4 => king_mesh(r.gen_range(2..7), r.gen_range(2..7)),
            5 => disjoint_k4s(r.gen_range(1..6)),
            6 => {
                let n = r.gen_range(3..40);
                random_two_degenerate(&mut r, n)
            }
            7 => {
                let n = r.gen_range(4..30);
                planted_partite(&mut r, n, 4, 0.5)
            }
            8 => {
                let n = r.gen_range(4..30);
                planted_partite(&mut r, n, 3, 0.7)
            }
            _ => {
                let n = r.gen_range(4..30);
                planted_partite(&mut r, n, 2, 0.3)
            }
        };
        if g.edge_count() > 0 {
            out.push(g);
        }
    }
    out
}

fn table_i() -> Vec<&'static str> {
    vec!["XXXX", "XYYY", "XZZZ", "YXZY", "YYXZ", "YZYX", "ZXYZ", "ZYZX", "ZZXY"]
}

#[test]
fn ac1_table_i_reproduction() {
    let t = Instant::now();
    let k4 = TopologyGraph::complete(4);
    let s = table9_schedule(&k4, &Coloring::identity(4)).unwrap();
    let rows: Vec<String> = s.bases().iter().map(|b| b.to_string()).collect();
    let rep = verify_cover(&k4, &s).unwrap();
    let elapsed = t.elapsed();
    let pass = rows == table_i()
        && rep.covered
        && rep.exact
        && rep.per_edge_missing.len() == 6
        && elapsed < Duration::from_secs(1);
    verdict(1, "nine-basis table on K4", pass, elapsed, &format!("rows={rows:?} covered={} exact={}", rep.covered, rep.exact));
}

#[test]
fn ac2_complete_graph_formula() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for n in 4..=64usize {
        let s = kn_log_schedule(n).unwrap();
        let levels = (n as f64 - 2.0).log2().ceil() as usize;
        let expected = 3 * (1 + 2 * levels);
        if s.len() != expected || schedule_size_formula(n).unwrap() != expected {
            failures.push(format!("n={n}: len {} expected {expected}", s.len()));
        }
        if !verify_cover(&TopologyGraph::complete(n), &s).unwrap().covered {
            failures.push(format!("n={n}: not covered"));
        }
    }
    for (n, want) in [(4, 9), (5, 15), (6, 15), (10, 21), (34, 33)] {
        if kn_log_schedule(n).unwrap().len() != want {
            failures.push(format!("spot n={n} expected {want}"));
        }
    }
    let elapsed = t.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(10);
    verdict(2, "logarithmic K_N schedules, N = 4..64", pass, elapsed, &format!("{} failures {failures:?}", failures.len()));
}

#[test]
fn ac3_four_colorable_family() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let graphs = colorable_family();
    for (i, g) in graphs.iter().enumerate() {
        let out = g.four_coloring(DEFAULT_COLORING_BUDGET);
        if !out.within_four {
            failures.push(format!("graph {i}: no 4-coloring found"));
            continue;
        }
        let s = table9_schedule(g, &out.coloring).unwrap();
        let rep = verify_cover(g, &s).unwrap();
        if s.len() != 9 || !rep.covered || !rep.exact {
            failures.push(format!("graph {i}: len {} covered {} exact {}", s.len(), rep.covered, rep.exact));
        }
    }
    let elapsed = t.elapsed();
    let pass = graphs.len() == 100 && failures.is_empty() && elapsed < Duration::from_secs(10);
    verdict(3, "nine bases on 100 four-colorable graphs", pass, elapsed, &format!("{failures:?}"));
}

#[test]
fn ac4_lower_bound_consistency() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut graphs = colorable_family();
    graphs.extend((2..=12).map(TopologyGraph::complete));
    let mut r = rng(4);
    for _ in 0..20 {
        let n = r.gen_range(2..25);
        let p = r.gen_range(0.2..0.9);
        graphs.push(random_graph(&mut r, n, p));
    }
    for (i, g) in graphs.iter().enumerate().filter(|(_, g)| g.edge_count() > 0) {
        let s = general_schedule(g).unwrap();
        if s.len() < 9 || s.len() < lower_bound(g) {
            failures.push(format!("graph {i}: schedule of length {}", s.len()));
        }
    }
    let k4 = TopologyGraph::complete(4);
    let k4_len = general_schedule(&k4).unwrap().len();
    let tight = k4_len == 9 && lower_bound(&k4) == 9;

    // Local search on K_N: reported only. Lengths must respect the bound and
    // stay covering; beating the construction is recorded, not a failure.
    let mut report = Vec::new();
    for n in 4..=8 {
        let g = TopologyGraph::complete(n);
        let out = heuristic_minimize(&g, 0, DEFAULT_SEARCH_BUDGET).unwrap();
        let formula = schedule_size_formula(n).unwrap();
        if out.best.len() < lower_bound(&g) || !verify_cover(&g, &out.best).unwrap().covered {
            failures.push(format!("K{n}: search produced invalid schedule"));
        }
        report.push(format!("K{n}: search {} vs construction {formula}", out.best.len()));
    }
    let elapsed = t.elapsed();
    println!("    local search (seed 0, budget {DEFAULT_SEARCH_BUDGET}): {}", report.join(", "));
    let pass = failures.is_empty() && tight;
    verdict(4, "every schedule has >= 9 bases; K4 meets the bound", pass, elapsed, &format!("K4 length {k4_len}; {failures:?}"));
}

#[test]
fn ac5_channel_oracle_equivalence() {
    let t = Instant::now();
    let mut r = rng(5);
    let axis = |r: &mut rand_chacha::ChaCha8Rng| PauliAxis::NON_IDENTITY[r.gen_range(0..3)];
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = r.gen_range(1..=3);
        let mut terms: Vec<SplTerm<f64>> = Vec::new();
        for _ in 0..r.gen_range(0..8) {
            let mut axes = vec![PauliAxis::I; n];
            let k = r.gen_range(0..n);
            axes[k] = axis(&mut r);
            if n > 1 && r.gen_bool(0.5) {
                axes[(k + 1) % n] = axis(&mut r);
            }
            let pauli = PauliString::from_axes(&axes).unwrap();
            if terms.iter().all(|t| t.pauli != pauli) {
                terms.push(SplTerm { pauli, rate: r.gen_range(0.0..0.3) });
            }
        }
        let m = SplModel::new(n, terms).unwrap();
        let b: Vec<PauliAxis> = (0..n).map(|_| [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z][r.gen_range(0..4)]).collect();
        let b = PauliString::from_axes(&b).unwrap();
        let diff = (m.pauli_fidelity(&b).unwrap() - dense_channel_oracle(&m, &b).unwrap()).abs();
        worst = worst.max(diff);
    }
    let elapsed = t.elapsed();
    let pass = worst <= 1e-12 && elapsed < Duration::from_secs(5);
    verdict(5, "Pauli fidelity vs dense channel, 200 pairs", pass, elapsed, &format!("max diff {worst:e}"));
}

#[test]
fn ac6_noiseless_round_trip() {
    let t = Instant::now();
    let g = TopologyGraph::complete(4);
    let truth: SplModel<f64> = sample_model(&g, 6, (0.001, 0.01)).unwrap();
    let cfg = CbConfig { infinite_shots: true, seed: 6, ..CbConfig::default() };
    let fit = end_to_end_learn(&g, &truth, &cfg).unwrap();
    let err = fit.max_abs_error(&truth).unwrap();
    let full_rank = fit.matrix_rank == fit.term_count();
    let elapsed = t.elapsed();
    let pass = (!full_rank || err <= 1e-6) && fit.residual_norm <= 1e-9 && elapsed < Duration::from_secs(10);
    verdict(
        6,
        "infinite-shot learning on K4",
        pass,
        elapsed,
        &format!("rank {}/{} max err {err:e} residual {:e}", fit.matrix_rank, fit.term_count(), fit.residual_norm),
    );
}

#[test]
fn ac7_statistical_learning() {
    let t = Instant::now();
    let g = TopologyGraph::complete(4);
    let mut errors: Vec<f64> = (0..10u64)
        .map(|seed| {
            let truth: SplModel<f64> = sample_model(&g, 1000 + seed, (0.001, 0.01)).unwrap();
            let cfg = CbConfig { shots: 100_000, depths: vec![2, 4, 16, 64], seed, ..CbConfig::default() };
            end_to_end_learn(&g, &truth, &cfg).unwrap().max_abs_error(&truth).unwrap()
        })
        .collect();
    errors.sort_by(f64::total_cmp);
    let median = (errors[4] + errors[5]) / 2.0;
    let elapsed = t.elapsed();
    let pass = median <= 5e-3 && elapsed < Duration::from_secs(120);
    verdict(7, "shot-noise learning on K4, 10 seeds", pass, elapsed, &format!("median max err {median:e}; sorted {:?}", errors.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>()));
}

#[test]
fn ac8_measurability_completeness() {
    let t = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut check = |label: String, g: &TopologyGraph, s: &MeasurementSchedule| {
        checked += 1;
        let missing = unreadable(g, s);
        if !missing.is_empty() {
            failures.push(format!("{label}: {} unreadable, e.g. {}", missing.len(), missing[0]));
        }
    };
    for (i, g) in colorable_family().iter().enumerate() {
        let out = g.four_coloring(DEFAULT_COLORING_BUDGET);
        check(format!("table9 #{i}"), g, &table9_schedule(g, &out.coloring).unwrap());
        check(format!("general #{i}"), g, &general_schedule(g).unwrap());
    }
    for n in 4..=64 {
        let g = TopologyGraph::complete(n);
        check(format!("knlog K{n}"), &g, &kn_log_schedule(n).unwrap());
    }
    let mut r = rng(8);
    for i in 0..20 {
        let n = r.gen_range(5..16);
        let p = r.gen_range(0.3..0.9);
        let g = random_graph(&mut r, n, p);
        if g.edge_count() == 0 {
            continue;
        }
        check(format!("general random #{i}"), &g, &general_schedule(&g).unwrap());
        check(format!("search random #{i}"), &g, &heuristic_minimize(&g, i, 20_000).unwrap().best);
    }
    let elapsed = t.elapsed();
    verdict(8, "every two-local Pauli readable", failures.is_empty(), elapsed, &format!("{checked} schedules; {failures:?}"));
}
