//! Bundled benchmark tables.
//!
//! Four reference tables of published bound-state energies ship with the
//! crate as versioned CSV baselines (data/table*.csv): spiked-oscillator
//! 1s states over a grid of core exponents (table 1) and strengths
//! (table 2), and truncated-Coulomb 1s..4f states over a grid of
//! truncation lengths (tables 3 and 4). Each row carries the published
//! series total (e_p), the [3,3]/[3,4] resummations, the
//! direct-integration value (e_n) and a comparison-method column (e_s),
//! plus notes flagging cells that are suspect in the source.
//!
//! `check_row` encodes which cells are binding at which tolerance; the
//! acceptance suite and the CLI table command share it.

use crate::error::{Error, Result};
use crate::pipeline::{run_solve, SolveOutcome, SolveRequest};
use crate::potential::{PotentialModel, ScaleConvention};

const TABLE1: &str = include_str!("../data/table1.csv");
const TABLE2: &str = include_str!("../data/table2.csv");
const TABLE3: &str = include_str!("../data/table3.csv");
const TABLE4: &str = include_str!("../data/table4.csv");

/// A published value together with its printed precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefValue {
    pub value: f64,
    pub decimals: u32,
}

impl RefValue {
    /// One unit in the last printed digit.
    pub fn print_ulp(&self) -> f64 {
        10f64.powi(-(self.decimals as i32))
    }

    fn parse(s: &str) -> Result<Self> {
        let value: f64 = s
            .parse()
            .map_err(|_| Error::Validation(format!("bad numeric cell {s:?}")))?;
        let decimals = s.split('.').nth(1).map_or(0, |d| d.len() as u32);
        Ok(Self { value, decimals })
    }
}

/// Whether a comparison-method value was published as a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Upper,
    Lower,
}

/// One baseline row.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub table_id: u8,
    pub row: usize,
    pub model: PotentialModel,
    pub l: u32,
    pub state_label: String,
    pub e_p: RefValue,
    pub e33: RefValue,
    pub e34: RefValue,
    pub e_n: RefValue,
    pub e_s: Option<RefValue>,
    pub e_s_kind: Option<BoundKind>,
    pub notes: Vec<String>,
}

impl TableRow {
    pub fn has_note(&self, flag: &str) -> bool {
        self.notes.iter().any(|n| n == flag)
    }

    /// Any note starting with the given prefix (cell-family flags like
    /// "en_..." demote that cell to informational).
    pub fn has_note_prefix(&self, prefix: &str) -> bool {
        self.notes.iter().any(|n| n.starts_with(prefix))
    }

    /// Spiked core strength, when applicable.
    pub fn strength_a(&self) -> Option<f64> {
        match self.model.kind() {
            crate::potential::PotentialKind::SpikedHo { strength, .. } => Some(strength),
            _ => None,
        }
    }

    /// True when the published columns themselves show
    /// e34 <= e_n <= e33, up to print rounding of both sides.
    pub fn paper_exhibits_bracketing(&self) -> bool {
        let slack = 0.501 * (self.e_n.print_ulp() + self.e33.print_ulp());
        self.e34.value - slack <= self.e_n.value && self.e_n.value <= self.e33.value + slack
    }
}

fn parse_table(raw: &str) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    let mut lines = raw.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Validation("empty baseline file".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    let idx = |name: &str| -> Result<usize> {
        cols.iter()
            .position(|c| *c == name)
            .ok_or_else(|| Error::Validation(format!("baseline missing column {name}")))
    };
    let (i_table, i_row) = (idx("table")?, idx("row")?);
    let (i_pot, i_a, i_b, i_c) = (idx("potential")?, idx("a")?, idx("b")?, idx("c")?);
    let (i_l, i_state, i_conv) = (idx("l")?, idx("state")?, idx("convention")?);
    let (i_ep, i_e33, i_e34, i_en) = (idx("e_p")?, idx("e33")?, idx("e34")?, idx("e_n")?);
    let (i_es, i_es_kind, i_notes) = (idx("e_s")?, idx("e_s_kind")?, idx("notes")?);

    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let convention = match f[i_conv] {
            "doubled" => ScaleConvention::Doubled,
            "half" => ScaleConvention::HalfKinetic,
            other => return Err(Error::Validation(format!("bad convention {other:?}"))),
        };
        let model = match f[i_pot] {
            "spiked" => PotentialModel::spiked_ho(
                f[i_a].parse().map_err(|_| bad_cell(f[i_a]))?,
                f[i_b].parse().map_err(|_| bad_cell(f[i_b]))?,
            )?,
            "tcoulomb" => {
                PotentialModel::truncated_coulomb(f[i_c].parse().map_err(|_| bad_cell(f[i_c]))?)?
            }
            other => return Err(Error::Validation(format!("bad potential {other:?}"))),
        }
        .with_convention(convention);
        let e_s = if f[i_es].is_empty() {
            None
        } else {
            Some(RefValue::parse(f[i_es])?)
        };
        let e_s_kind = match f[i_es_kind] {
            "" => None,
            "upper" => Some(BoundKind::Upper),
            "lower" => Some(BoundKind::Lower),
            other => return Err(Error::Validation(format!("bad bound kind {other:?}"))),
        };
        rows.push(TableRow {
            table_id: f[i_table].parse().map_err(|_| bad_cell(f[i_table]))?,
            row: f[i_row].parse().map_err(|_| bad_cell(f[i_row]))?,
            model,
            l: f[i_l].parse().map_err(|_| bad_cell(f[i_l]))?,
            state_label: f[i_state].to_string(),
            e_p: RefValue::parse(f[i_ep])?,
            e33: RefValue::parse(f[i_e33])?,
            e34: RefValue::parse(f[i_e34])?,
            e_n: RefValue::parse(f[i_en])?,
            e_s,
            e_s_kind,
            notes: if f[i_notes].is_empty() {
                Vec::new()
            } else {
                f[i_notes].split(';').map(str::to_string).collect()
            },
        });
    }
    Ok(rows)
}

fn bad_cell(s: &str) -> Error {
    Error::Validation(format!("bad baseline cell {s:?}"))
}

/// Rows of one bundled table (1..=4).
pub fn table(id: u8) -> Result<Vec<TableRow>> {
    let raw = match id {
        1 => TABLE1,
        2 => TABLE2,
        3 => TABLE3,
        4 => TABLE4,
        other => {
            return Err(Error::Validation(format!(
                "no bundled table {other}; choose 1..=4"
            )))
        }
    };
    parse_table(raw)
}

/// One compared cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    pub name: &'static str,
    pub computed: f64,
    pub reference: f64,
    /// Allowed |computed - reference| (already scaled for relative checks).
    pub tolerance: f64,
    /// Binding cells gate acceptance; the rest are informational.
    pub binding: bool,
    pub pass: bool,
}

impl CellCheck {
    fn new(
        name: &'static str,
        computed: f64,
        reference: f64,
        tolerance: f64,
        binding: bool,
    ) -> Self {
        let pass = (computed - reference).abs() <= tolerance;
        Self {
            name,
            computed,
            reference,
            tolerance,
            binding,
            pass,
        }
    }
}

/// Run the pipeline for one baseline row.
pub fn solve_row(row: &TableRow, with_oracle: bool) -> Result<SolveOutcome> {
    let req = SolveRequest::new(row.model, row.l as f64).with_oracle(with_oracle);
    run_solve(&req)
}

/// Compare a computed outcome against a baseline row.
///
/// Binding tolerances (everything else is informational):
/// - table 1: series total 5e-5 relative, both resummations 1e-4
///   relative, integration 2.5 print-ulp, and the bracketing
///   e34 <= e_n <= e33 on rows whose published columns exhibit it;
/// - table 2: series total 5e-5 relative for a >= 5, else 1e-3 relative
///   and integration 1e-5 relative;
/// - table 3: series total 5e-6 absolute, integration 2.5 print-ulp;
/// - table 4: series total 1e-7 absolute, integration 2.5 print-ulp.
///
/// Cells flagged in the baseline notes are demoted to informational.
pub fn check_row(row: &TableRow, out: &SolveOutcome) -> Vec<CellCheck> {
    let mut checks = Vec::new();
    let ep_ref = row.e_p.value;
    let ep_binding = !row.has_note_prefix("ep_");

    match row.table_id {
        1 => {
            checks.push(CellCheck::new(
                "e_p",
                out.e_sum,
                ep_ref,
                5e-5 * ep_ref.abs(),
                ep_binding,
            ));
        }
        2 => {
            let a = row.strength_a().unwrap_or(0.0);
            let tol = if a >= 5.0 { 5e-5 } else { 1e-3 };
            checks.push(CellCheck::new(
                "e_p",
                out.e_sum,
                ep_ref,
                tol * ep_ref.abs(),
                ep_binding,
            ));
        }
        3 => {
            checks.push(CellCheck::new("e_p", out.e_sum, ep_ref, 5e-6, ep_binding));
        }
        _ => {
            checks.push(CellCheck::new("e_p", out.e_sum, ep_ref, 1e-7, ep_binding));
        }
    }

    let pade_binding = row.table_id == 1 && !row.has_note("pade_typo_suspected");
    if let Some(p) = out.pade_energy(3, 3) {
        checks.push(CellCheck::new(
            "e33",
            p.energy,
            row.e33.value,
            1e-4 * row.e33.value.abs(),
            pade_binding,
        ));
    }
    if let Some(p) = out.pade_energy(3, 4) {
        checks.push(CellCheck::new(
            "e34",
            p.energy,
            row.e34.value,
            1e-4 * row.e34.value.abs(),
            pade_binding,
        ));
    }

    if let Some(oracle) = &out.oracle {
        let en_suspect = row.has_note_prefix("en_");
        let (tol, binding) = match row.table_id {
            2 => {
                let a = row.strength_a().unwrap_or(0.0);
                (1e-5 * row.e_n.value.abs(), a < 5.0)
            }
            _ => (2.5 * row.e_n.print_ulp(), true),
        };
        checks.push(CellCheck::new(
            "e_n",
            oracle.energy,
            row.e_n.value,
            tol,
            binding && !en_suspect,
        ));

        if row.table_id == 1 && row.paper_exhibits_bracketing() {
            if let (Some(p33), Some(p34)) = (out.pade_energy(3, 3), out.pade_energy(3, 4)) {
                // The bracketing observation lives at the precision the
                // source printed it; hold it to the same rounding slack.
                let slack = 0.501 * row.e_n.print_ulp() + 1e-9 * oracle.energy.abs().max(1.0);
                let ok = p34.energy - slack <= oracle.energy && oracle.energy <= p33.energy + slack;
                // Report against the nearest violated bound so the
                // deviation column is meaningful.
                let reference = oracle
                    .energy
                    .clamp(p34.energy.min(p33.energy), p34.energy.max(p33.energy));
                checks.push(CellCheck {
                    name: "bracketing",
                    computed: oracle.energy,
                    reference,
                    tolerance: slack,
                    binding: !row.has_note_prefix("bracketing_"),
                    pass: ok,
                });
            }
        }
    }
    checks
}
