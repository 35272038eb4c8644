//! Command execution: solve, table, scan.

use crate::record::{sig9, ResultRecord};
use crate::{FormatArg, RunSpec, ScanArgs, SweepParam, TableArgs};
use pslet_core::tables::{check_row, table, CellCheck, TableRow};
use pslet_core::{Error, Result, SolveRequest};
use serde::Serialize;

/// Run one solve and render it.
pub fn cmd_solve(spec: &RunSpec) -> Result<String> {
    let record = solve_record(spec)?;
    Ok(match spec.format {
        FormatArg::Json => record.to_json(),
        FormatArg::Csv => format!(
            "{}\n{}",
            ResultRecord::csv_header(&spec.pade_pairs(), spec.oracle),
            record.to_csv_row(&spec.pade_pairs(), spec.oracle)
        ),
        FormatArg::Text => record.to_text(),
    })
}

fn solve_record(spec: &RunSpec) -> Result<ResultRecord> {
    let model = spec.build_model()?;
    let mut req = SolveRequest::new(model, spec.l as f64).with_oracle(spec.oracle);
    req.n_r = spec.nr;
    req.sum_order = spec.order;
    req.pade = spec.pade_pairs();
    req.tol = spec.tol;
    let out = pslet_core::run_solve(&req)?;
    Ok(ResultRecord::from_outcome(
        &model,
        spec.l as f64,
        spec.nr,
        spec.order,
        &out,
    ))
}

/// One evaluated benchmark-table row.
#[derive(Debug, Serialize)]
pub struct TableRowReport {
    pub row: usize,
    pub state: String,
    pub params: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub cells: Vec<CellReport>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CellReport {
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub binding: bool,
    pub pass: bool,
}

impl From<CellCheck> for CellReport {
    fn from(c: CellCheck) -> Self {
        Self {
            name: c.name.to_string(),
            deviation: c.computed - c.reference,
            computed: c.computed,
            reference: c.reference,
            tolerance: c.tolerance,
            binding: c.binding,
            pass: c.pass,
        }
    }
}

fn row_params(row: &TableRow) -> String {
    match row.model.kind() {
        pslet_core::PotentialKind::SpikedHo { strength, exponent } => {
            format!("a={strength} b={exponent}")
        }
        pslet_core::PotentialKind::TruncatedCoulomb { truncation } => {
            format!("c={truncation}")
        }
        _ => String::new(),
    }
}

/// Reproduce a bundled table. Returns the rendered artifact and whether
/// every binding tolerance held (rows run in parallel; output order is
/// the baseline row order).
pub fn cmd_table(args: &TableArgs) -> Result<(String, bool)> {
    let rows = table(args.id)?;
    let mut reports: Vec<Option<TableRowReport>> = Vec::new();
    reports.resize_with(rows.len(), || None);

    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for row in &rows {
            handles.push(
                scope.spawn(move || match pslet_core::tables::solve_row(row, true) {
                    Ok(out) => TableRowReport {
                        row: row.row,
                        state: row.state_label.clone(),
                        params: row_params(row),
                        error: None,
                        cells: check_row(row, &out).into_iter().map(Into::into).collect(),
                        notes: row.notes.clone(),
                    },
                    Err(e) => TableRowReport {
                        row: row.row,
                        state: row.state_label.clone(),
                        params: row_params(row),
                        error: Some(e.to_string()),
                        cells: Vec::new(),
                        notes: row.notes.clone(),
                    },
                }),
            );
        }
        for (slot, handle) in reports.iter_mut().zip(handles) {
            *slot = Some(handle.join().expect("table row thread"));
        }
    });
    let reports: Vec<TableRowReport> = reports.into_iter().map(Option::unwrap).collect();

    let all_ok = reports
        .iter()
        .all(|r| r.error.is_none() && r.cells.iter().all(|c| c.pass || !c.binding));

    let rendered = match args.format {
        FormatArg::Json => serde_json::to_string_pretty(&reports).expect("reports serialize"),
        FormatArg::Csv => render_table_csv(args.id, &reports),
        FormatArg::Text => render_table_text(args.id, &reports),
    };
    Ok((rendered, all_ok))
}

fn render_table_csv(id: u8, reports: &[TableRowReport]) -> String {
    let mut out = String::from(
        "table,row,state,params,e_p,e33,e34,e_oracle,\
         ref_e_p,ref_e33,ref_e34,ref_e_n,\
         dev_e_p,dev_e33,dev_e34,dev_e_n,\
         binding_failures,notes,error\n",
    );
    for r in reports {
        let cell = |name: &str| r.cells.iter().find(|c| c.name == name);
        let computed = |name: &str| cell(name).map_or(String::new(), |c| sig9(c.computed));
        let reference = |name: &str| cell(name).map_or(String::new(), |c| sig9(c.reference));
        let deviation = |name: &str| cell(name).map_or(String::new(), |c| sig9(c.deviation));
        let failures = r
            .cells
            .iter()
            .filter(|c| c.binding && !c.pass)
            .map(|c| c.name.as_str())
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{id},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.row,
            r.state,
            r.params.replace(' ', ";"),
            computed("e_p"),
            computed("e33"),
            computed("e34"),
            computed("e_n"),
            reference("e_p"),
            reference("e33"),
            reference("e34"),
            reference("e_n"),
            deviation("e_p"),
            deviation("e33"),
            deviation("e34"),
            deviation("e_n"),
            failures,
            r.notes.join(";"),
            r.error.as_deref().unwrap_or_default().replace(',', ";")
        ));
    }
    out
}

fn render_table_text(id: u8, reports: &[TableRowReport]) -> String {
    let mut out = format!("benchmark table {id}\n");
    for r in reports {
        match &r.error {
            Some(err) => out.push_str(&format!(
                "row {:2} {:>3} [{}]: ERROR {err}\n",
                r.row, r.state, r.params
            )),
            None => {
                out.push_str(&format!("row {:2} {:>3} [{}]:\n", r.row, r.state, r.params));
                for c in &r.cells {
                    out.push_str(&format!(
                        "    {:12} {} vs {} (dev {}, tol {}){}{}\n",
                        c.name,
                        sig9(c.computed),
                        sig9(c.reference),
                        sig9(c.deviation),
                        sig9(c.tolerance),
                        if c.binding { "" } else { " [non-binding]" },
                        if c.pass { "" } else { " FAIL" },
                    ));
                }
            }
        }
    }
    out
}

/// Sweep one parameter; CSV rows stream in grid order (solves run in
/// parallel). Per-row failures land in the row's last column.
pub fn cmd_scan(args: &ScanArgs) -> Result<String> {
    let grid = args.grid()?;
    let pade = args.base.pade_pairs();
    let header = format!(
        "{},error",
        ResultRecord::csv_header(&pade, args.base.oracle)
    );

    let n_cols = header.matches(',').count();
    let error_row = |e: String| format!("{}{}", ",".repeat(n_cols), e.replace(',', ";"));

    let mut rows: Vec<Option<String>> = Vec::new();
    rows.resize_with(grid.len(), || None);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for &value in &grid {
            let base = &args.base;
            let pade = &pade;
            let error_row = &error_row;
            handles.push(scope.spawn(move || {
                let mut spec = base.clone();
                match args.sweep {
                    SweepParam::A => spec.a = Some(value),
                    SweepParam::B => spec.b = Some(value),
                    SweepParam::C => spec.c = Some(value),
                    SweepParam::L => {
                        if value < 0.0 || value.fract() != 0.0 {
                            return error_row(format!(
                                "swept l must be a nonnegative integer; got {value}"
                            ));
                        }
                        spec.l = value as u32;
                    }
                }
                match solve_record(&spec) {
                    Ok(rec) => format!("{},", rec.to_csv_row(pade, base.oracle)),
                    Err(e) => error_row(e.to_string()),
                }
            }));
        }
        for (slot, handle) in rows.iter_mut().zip(handles) {
            *slot = Some(handle.join().expect("scan row thread"));
        }
    });

    let mut out = header;
    out.push('\n');
    for row in rows {
        out.push_str(&row.unwrap());
        out.push('\n');
    }
    Ok(out)
}

/// Validate scan arguments that clap cannot (sweep parameter must fit
/// the potential family).
pub fn validate_scan(args: &ScanArgs) -> Result<()> {
    use crate::PotentialArg;
    let ok = matches!(
        (args.sweep, args.base.potential),
        (SweepParam::A | SweepParam::B, PotentialArg::Spiked)
            | (SweepParam::C, PotentialArg::Tcoulomb)
            | (SweepParam::L, _)
    );
    if !ok {
        return Err(Error::Validation(format!(
            "sweep parameter {:?} does not apply to potential {:?}",
            args.sweep, args.base.potential
        )));
    }
    // The swept flag itself may be omitted; everything else validates as
    // in a single solve, with a placeholder for the swept value.
    let mut probe = args.base.clone();
    match args.sweep {
        SweepParam::A => probe.a = probe.a.or(Some(1.0)),
        SweepParam::B => probe.b = probe.b.or(Some(1.0)),
        SweepParam::C => probe.c = probe.c.or(Some(1.0)),
        SweepParam::L => {}
    }
    probe.build_model().map(|_| ())
}
