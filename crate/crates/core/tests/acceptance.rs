//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (run with --nocapture to see them on success).
//!
//! Reference cells flagged in the bundled baselines as internally
//! inconsistent with the source's own columns are reported but not
//! binding; every deviation is printed either way.

use pslet_core::expansion::solve_q0;
use pslet_core::potential::{PotentialModel, ScaleConvention};
use pslet_core::riccati::{low_order_closed_forms, RiccatiState};
use pslet_core::tables::{check_row, solve_row, table};
use pslet_core::SolveRequest;

fn report(name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("PASS {name}");
    } else {
        println!("FAIL {name}");
        for f in &failures {
            println!("      {f}");
        }
        panic!("{name}: {} check(s) failed", failures.len());
    }
}

fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Criterion 1: the b = 2 spike collapses to an exactly solvable case.
#[test]
fn criterion_1_exact_spiked_b2() {
    let mut failures = Vec::new();

    let model = PotentialModel::spiked_ho(1000.0, 2.0)
        .unwrap()
        .with_convention(ScaleConvention::Doubled);
    let out = pslet_core::run_solve(&SolveRequest::new(model, 0.0)).unwrap();
    if (out.e_sum - 65.25345).abs() > 5e-5 {
        failures.push(format!(
            "series total {} vs published 65.25345 (|d| = {:.2e} > 5e-5)",
            out.e_sum,
            (out.e_sum - 65.25345).abs()
        ));
    }

    // Folding the spike into the centrifugal term: run the pure
    // oscillator at the effective angular momentum.
    let l_eff = -0.5 + (0.25f64 + 1000.0).sqrt();
    let ho = PotentialModel::pure_ho().with_convention(ScaleConvention::Doubled);
    let eff = pslet_core::run_solve(&SolveRequest::new(ho, l_eff)).unwrap();
    if (eff.e_sum - 65.2534584).abs() > 1e-6 {
        failures.push(format!(
            "effective-l reduction {} vs exact 65.2534584 (|d| = {:.2e} > 1e-6)",
            eff.e_sum,
            (eff.e_sum - 65.2534584).abs()
        ));
    }
    for (n, c) in eff.corrections.iter().enumerate() {
        if c.abs() > 1e-10 {
            failures.push(format!("effective-l correction E^({n}) = {c:.3e} not zero"));
        }
    }
    report("criterion 1: exact spiked b=2 (65.2534584)", failures);
}

/// Criterion 2: the spiked-oscillator exponent grid (series total,
/// both resummations, and the bracketing property where the published
/// columns exhibit it).
#[test]
fn criterion_2_table1_regression() {
    let mut failures = Vec::new();
    for row in table(1).unwrap() {
        match solve_row(&row, true) {
            Ok(out) => {
                // e_n cells belong to criterion 5; this criterion owns the
                // series total, the resummations, and the bracketing.
                for c in check_row(&row, &out)
                    .into_iter()
                    .filter(|c| c.name != "e_n")
                {
                    let msg = format!(
                        "b={:<4} {}: {} vs {} (|d| = {:.2e}, tol {:.2e})",
                        row_b(&row),
                        c.name,
                        c.computed,
                        c.reference,
                        (c.computed - c.reference).abs(),
                        c.tolerance
                    );
                    if c.binding && !c.pass {
                        failures.push(msg);
                    } else if !c.binding {
                        println!("      [non-binding] {msg}");
                    }
                }
            }
            Err(e) => failures.push(format!("b={} failed: {e}", row_b(&row))),
        }
    }
    report("criterion 2: table 1 regression (14 rows)", failures);
}

fn row_b(row: &pslet_core::tables::TableRow) -> String {
    match row.model.kind() {
        pslet_core::PotentialKind::SpikedHo { exponent, .. } => format!("{exponent}"),
        _ => row.state_label.clone(),
    }
}

/// Criterion 3: truncated-Coulomb c in {1, 5, 10}, series totals.
#[test]
fn criterion_3_table3_regression() {
    let mut failures = Vec::new();
    for row in table(3).unwrap() {
        match solve_row(&row, false) {
            Ok(out) => {
                let d = (out.e_sum - row.e_p.value).abs();
                let binding = !row.has_note_prefix("ep_");
                if d > 5e-6 && binding {
                    failures.push(format!(
                        "c-row {} {}: e_p {} vs {} (|d| = {d:.2e} > 5e-6)",
                        row.row, row.state_label, out.e_sum, row.e_p.value
                    ));
                } else if !binding {
                    println!(
                        "      [non-binding: {}] {} {}: e_p {} vs {} (|d| = {d:.2e})",
                        row.notes.join(";"),
                        row.row,
                        row.state_label,
                        out.e_sum,
                        row.e_p.value
                    );
                }
            }
            Err(e) => failures.push(format!("row {} failed: {e}", row.row)),
        }
    }
    report(
        "criterion 3: table 3 regression (12 rows, 5e-6 absolute)",
        failures,
    );
}

/// Criterion 4: truncated-Coulomb c in {50, 100, 200}, series totals.
#[test]
fn criterion_4_table4_regression() {
    let mut failures = Vec::new();
    for row in table(4).unwrap() {
        match solve_row(&row, false) {
            Ok(out) => {
                let d = (out.e_sum - row.e_p.value).abs();
                if d > 1e-7 {
                    failures.push(format!(
                        "row {} {}: e_p {} vs {} (|d| = {d:.2e} > 1e-7)",
                        row.row, row.state_label, out.e_sum, row.e_p.value
                    ));
                }
            }
            Err(e) => failures.push(format!("row {} failed: {e}", row.row)),
        }
    }
    report(
        "criterion 4: table 4 regression (12 rows, 1e-7 absolute)",
        failures,
    );
}

/// Criterion 5: the integration oracle reproduces the published
/// direct-integration columns of tables 1, 3, 4 at printed precision.
#[test]
fn criterion_5_oracle_against_dni_columns() {
    let mut failures = Vec::new();
    for id in [1u8, 3, 4] {
        for row in table(id).unwrap() {
            match solve_row(&row, true) {
                Ok(out) => {
                    let oracle = out.oracle.as_ref().unwrap();
                    let d = (oracle.energy - row.e_n.value).abs();
                    let tol = 2.5 * row.e_n.print_ulp();
                    if row.has_note_prefix("en_") {
                        println!(
                            "      [non-binding: {}] table {id} row {}: e_n {} vs {} (|d| = {d:.2e})",
                            row.notes.join(";"),
                            row.row,
                            oracle.energy,
                            row.e_n.value
                        );
                    } else if d > tol {
                        failures.push(format!(
                            "table {id} row {} {}: oracle {} vs {} (|d| = {d:.2e} > {tol:.2e})",
                            row.row, row.state_label, oracle.energy, row.e_n.value
                        ));
                    }
                }
                Err(e) => failures.push(format!("table {id} row {}: {e}", row.row)),
            }
        }
    }
    report(
        "criterion 5: oracle matches published integration columns (tables 1, 3, 4)",
        failures,
    );
}

/// Criterion 6: exactly solvable limits collapse: oscillator and
/// Coulomb spectra recovered with every correction below 1e-10.
#[test]
fn criterion_6_exactness_properties() {
    let mut failures = Vec::new();
    for l in 0..=4u32 {
        let ho =
            pslet_core::run_solve(&SolveRequest::new(PotentialModel::pure_ho(), l as f64)).unwrap();
        let want = l as f64 + 1.5;
        if (ho.e_sum - want).abs() > 1e-10 {
            failures.push(format!("oscillator l={l}: {} vs {want}", ho.e_sum));
        }
        for (n, c) in ho.corrections.iter().enumerate() {
            if c.abs() > 1e-10 {
                failures.push(format!("oscillator l={l} E^({n}) = {c:.3e}"));
            }
        }

        let cou =
            pslet_core::run_solve(&SolveRequest::new(PotentialModel::pure_coulomb(), l as f64))
                .unwrap();
        let n_q = (l + 1) as f64;
        let want = -0.5 / (n_q * n_q);
        if (cou.e_sum - want).abs() > 1e-10 {
            failures.push(format!("Coulomb l={l}: {} vs {want}", cou.e_sum));
        }
        for (n, c) in cou.corrections.iter().enumerate() {
            if c.abs() > 1e-10 {
                failures.push(format!("Coulomb l={l} E^({n}) = {c:.3e}"));
            }
        }
    }
    report(
        "criterion 6: exact oscillator/Coulomb spectra with vanishing corrections",
        failures,
    );
}

/// Criterion 7: the generic order-k solver reproduces the hierarchical
/// closed forms over 100 randomized admissible configurations.
#[test]
fn criterion_7_recursion_closed_forms() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xacce97);
    let mut failures = Vec::new();
    for trial in 0..100 {
        let model = if trial % 2 == 0 {
            let a = 10f64.powf(rng.gen_range(-3.0..3.0));
            let b = rng.gen_range(0.1..=6.0);
            PotentialModel::spiked_ho(a, b).unwrap()
        } else {
            PotentialModel::truncated_coulomb(10f64.powf(rng.gen_range(-0.3..2.3))).unwrap()
        };
        let l = rng.gen_range(0..=5u32);
        let pt = solve_q0(&model, l as f64, 0, 1e-12).unwrap();
        let jet = model.taylor_jet(pt.q0, 6).unwrap();
        let cf = low_order_closed_forms(&pt, &jet);
        let mut st = RiccatiState::new(&model, pt, 2).unwrap();
        st.solve_to(2).unwrap();

        let got = [
            ("D10", st.u_poly(0).unwrap().coeff_of_power(1), cf.d10),
            ("C00", st.g_poly(0).unwrap().coeff_of_power(0), cf.c00),
            ("C10", st.g_poly(0).unwrap().coeff_of_power(2), cf.c10),
            ("D12", st.u_poly(2).unwrap().coeff_of_power(1), cf.d12),
            ("D22", st.u_poly(2).unwrap().coeff_of_power(3), cf.d22),
            ("lambda0", st.lambdas()[0], cf.lambda0),
        ];
        for (name, a, b) in got {
            if !close_rel(a, b, 1e-12) {
                failures.push(format!(
                    "trial {trial} ({}, l={l}): {name} {a} vs closed form {b}",
                    model.family_name()
                ));
            }
        }
    }
    report(
        "criterion 7: generic recursion matches closed forms (100 random configurations)",
        failures,
    );
}

/// Criterion 8: the shift criterion E^(-1) = 0 holds for every solve.
#[test]
fn criterion_8_shift_criterion_vanishes() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xbe7a);
    let mut failures = Vec::new();

    let mut check =
        |model: &PotentialModel, ell: f64, tag: String| match solve_q0(model, ell, 0, 1e-12) {
            Ok(pt) => {
                let scale = pt.w / (pt.q0 * pt.q0);
                if pt.e_minus1().abs() > 1e-12 * scale {
                    failures.push(format!(
                        "{tag}: E^(-1) = {:.3e} vs scale {scale:.3e}",
                        pt.e_minus1()
                    ));
                }
            }
            Err(e) => failures.push(format!("{tag}: solve failed: {e}")),
        };

    for id in [1u8, 2, 3, 4] {
        for row in table(id).unwrap() {
            check(
                &row.model,
                row.l as f64,
                format!("table {id} row {}", row.row),
            );
        }
    }
    for trial in 0..200 {
        let (model, tag) = if trial % 2 == 0 {
            let a = 10f64.powf(rng.gen_range(-3.0..3.0));
            let b = rng.gen_range(0.1..=6.0);
            (
                PotentialModel::spiked_ho(a, b).unwrap(),
                format!("random spiked a={a:.3e} b={b:.3}"),
            )
        } else {
            let c = 10f64.powf(rng.gen_range(-0.3..2.3));
            (
                PotentialModel::truncated_coulomb(c).unwrap(),
                format!("random tcoulomb c={c:.3e}"),
            )
        };
        let l = rng.gen_range(0..=5u32);
        check(&model, l as f64, tag);
    }
    report(
        "criterion 8: shift criterion E^(-1) vanishes on every solve",
        failures,
    );
}

/// Criterion 9: the hard strength grid (table 2): series totals, and
/// the oracle against the published integration column for a < 5.
#[test]
fn criterion_9_table2_hard_rows() {
    let mut failures = Vec::new();
    for row in table(2).unwrap() {
        let a = row.strength_a().unwrap();
        match solve_row(&row, a < 5.0) {
            Ok(out) => {
                let rel_tol = if a >= 5.0 { 5e-5 } else { 1e-3 };
                let d = (out.e_sum - row.e_p.value).abs();
                if d > rel_tol * row.e_p.value.abs() {
                    failures.push(format!(
                        "a={a}: e_p {} vs {} (|d| = {d:.2e} > {rel_tol:.0e} rel)",
                        out.e_sum, row.e_p.value
                    ));
                }
                if let Some(oracle) = &out.oracle {
                    let d = (oracle.energy - row.e_n.value).abs();
                    let tol = 1e-5 * row.e_n.value.abs();
                    if row.has_note_prefix("en_") {
                        println!(
                            "      [non-binding: {}] a={a}: oracle {} vs {} (|d| = {d:.2e})",
                            row.notes.join(";"),
                            oracle.energy,
                            row.e_n.value
                        );
                    } else if d > tol {
                        failures.push(format!(
                            "a={a}: oracle {} vs {} (|d| = {d:.2e} > {tol:.2e})",
                            oracle.energy, row.e_n.value
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("a={a}: {e}")),
        }
    }
    report("criterion 9: table 2 hard rows", failures);
}
