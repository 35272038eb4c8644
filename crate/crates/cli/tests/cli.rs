//! End-to-end checks of the installed binary: output formats, exit
//! codes, and the scan/solve equivalence.

use std::process::{Command, Output};

fn pslet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pslet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

/// Parsing the emitted JSON record and re-emitting it reproduces the
/// bytes exactly.
#[test]
fn json_output_round_trips() {
    let out = pslet(&[
        "solve",
        "--potential",
        "tcoulomb",
        "--c",
        "5",
        "--l",
        "1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let json = text.trim_end();
    let record: pslet_cli::record::ResultRecord = serde_json::from_str(json).unwrap();
    assert_eq!(record.to_json(), json);
    assert_eq!(record.potential, "tcoulomb");
    assert_eq!(record.l, 1.0);
}

#[test]
fn csv_header_is_stable() {
    let out = pslet(&["solve", "--potential", "ho", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "potential,a,b,c,l,n_r,convention,order,q0,w,beta,lbar,leading,e_p,\
         pade_3_3,pade_3_3_degenerate,pade_3_4,pade_3_4_degenerate,\
         smallest_term_index,corrections"
    );
}

/// A single-point scan row carries exactly the single-solve CSV row.
#[test]
fn single_point_scan_matches_solve() {
    let solve = pslet(&[
        "solve",
        "--potential",
        "tcoulomb",
        "--c",
        "30",
        "--format",
        "csv",
    ]);
    let scan = pslet(&[
        "scan",
        "--potential",
        "tcoulomb",
        "--sweep",
        "c",
        "--values",
        "30",
    ]);
    assert!(solve.status.success() && scan.status.success());
    let solve_row = stdout(&solve).lines().nth(1).unwrap().to_string();
    let scan_row = stdout(&scan).lines().nth(1).unwrap().to_string();
    assert_eq!(scan_row, format!("{solve_row},"));
}

/// Sweeping the truncation length over the physically relevant range
/// gives energies monotone in c, confirmed by the integration oracle.
#[test]
fn scan_truncation_range_is_monotone() {
    let out = pslet(&[
        "scan",
        "--potential",
        "tcoulomb",
        "--sweep",
        "c",
        "--values",
        "20,30,40,50,60",
        "--oracle",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (i_ep, i_oracle) = (col("e_p"), col("oracle_energy"));
    let mut prev_ep = f64::NEG_INFINITY;
    let mut prev_or = f64::NEG_INFINITY;
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let ep: f64 = cells[i_ep].parse().unwrap();
        let or: f64 = cells[i_oracle].parse().unwrap();
        assert!(ep > prev_ep, "series total not monotone at {line}");
        assert!(or > prev_or, "oracle not monotone at {line}");
        assert!((ep - or).abs() < 5e-7, "series vs oracle at {line}");
        prev_ep = ep;
        prev_or = or;
        rows += 1;
    }
    assert_eq!(rows, 5);
}

/// Sweeping the core exponent at fixed strength reproduces the bundled
/// table-1 series totals.
#[test]
fn scan_exponent_reproduces_table1_column() {
    let out = pslet(&[
        "scan",
        "--potential",
        "spiked",
        "--a",
        "1000",
        "--sweep",
        "b",
        "--values",
        "0.5,2.0,6.0",
        "--convention",
        "doubled",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let i_ep = header.iter().position(|h| *h == "e_p").unwrap();
    let reference = [415.88978, 65.25345, 12.71886];
    for (line, want) in text.lines().skip(1).zip(reference) {
        let ep: f64 = line.split(',').nth(i_ep).unwrap().parse().unwrap();
        assert!(
            (ep - want).abs() <= 5e-5 * want,
            "swept e_p {ep} vs published {want}"
        );
    }
}

#[test]
fn table_reproduction_passes_and_is_well_formed() {
    let out = pslet(&["table", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "table,row,state,params,e_p,e33,e34,e_oracle,\
         ref_e_p,ref_e33,ref_e34,ref_e_n,\
         dev_e_p,dev_e33,dev_e34,dev_e_n,\
         binding_failures,notes,error"
    );
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("4,")).collect();
    assert_eq!(rows.len(), 12);
    // No binding failures anywhere on this table.
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[16], "", "unexpected binding failure in {row}");
    }
}

#[test]
fn table_json_format_parses() {
    let out = pslet(&["table", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 12);
    assert!(rows[0]["cells"].as_array().unwrap().len() >= 4);
}

#[test]
fn validation_failures_exit_2() {
    // Missing --a for the spiked family.
    let out = pslet(&["solve", "--potential", "spiked", "--b", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown table id.
    let out = pslet(&["table", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // Zero-length sweep grid.
    let out = pslet(&[
        "scan",
        "--potential",
        "tcoulomb",
        "--sweep",
        "c",
        "--from",
        "1",
        "--to",
        "2",
        "--steps",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Negative strength.
    let out = pslet(&["solve", "--potential", "spiked", "--a", "-4", "--b", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // Nodeful states are not representable by the expansion.
    let out = pslet(&["solve", "--potential", "ho", "--nr", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // Sweep parameter inconsistent with the family.
    let out = pslet(&[
        "scan",
        "--potential",
        "spiked",
        "--a",
        "1",
        "--b",
        "2",
        "--sweep",
        "c",
        "--values",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn custom_pade_degrees() {
    let out = pslet(&[
        "solve",
        "--potential",
        "tcoulomb",
        "--c",
        "10",
        "--pade",
        "2,2",
        "--pade",
        "3,4",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert!(header.contains("pade_2_2") && header.contains("pade_3_4"));
    assert!(!header.contains("pade_3_3"));
}
