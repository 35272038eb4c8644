//! Serializable result records and their text/CSV/JSON renderings.

use pslet_core::{PotentialKind, PotentialModel, ScaleConvention, SolveOutcome};
use serde::{Deserialize, Serialize};

/// Fixed significant-digit formatting used by CSV and text output.
pub fn sig9(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.8e}")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PadeRecord {
    pub n: usize,
    pub m: usize,
    pub energy: f64,
    pub degenerate: bool,
    pub condition: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub energy: f64,
    pub nodes: usize,
    pub iterations: usize,
    pub matching_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub smallest_term_index: usize,
    pub rejected_roots: Vec<f64>,
}

/// Everything one solve produced, inputs echoed first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub potential: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub l: f64,
    pub n_r: u32,
    pub convention: String,
    pub order: usize,
    pub q0: f64,
    pub w: f64,
    pub beta: f64,
    pub lbar: f64,
    pub leading: f64,
    pub corrections: Vec<f64>,
    pub e_p: f64,
    pub pade: Vec<PadeRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleRecord>,
    pub diagnostics: Diagnostics,
}

impl ResultRecord {
    pub fn from_outcome(
        model: &PotentialModel,
        ell: f64,
        n_r: u32,
        order: usize,
        out: &SolveOutcome,
    ) -> Self {
        let (a, b, c) = match model.kind() {
            PotentialKind::SpikedHo { strength, exponent } => {
                (Some(strength), Some(exponent), None)
            }
            PotentialKind::TruncatedCoulomb { truncation } => (None, None, Some(truncation)),
            _ => (None, None, None),
        };
        Self {
            potential: model.family_name().to_string(),
            a,
            b,
            c,
            l: ell,
            n_r,
            convention: match model.convention() {
                ScaleConvention::HalfKinetic => "half".into(),
                ScaleConvention::Doubled => "doubled".into(),
            },
            order,
            q0: out.q0,
            w: out.w,
            beta: out.beta,
            lbar: out.lbar,
            leading: out.leading,
            corrections: out.corrections.clone(),
            e_p: out.e_sum,
            pade: out
                .pade
                .iter()
                .map(|p| PadeRecord {
                    n: p.n,
                    m: p.m,
                    energy: p.energy,
                    degenerate: p.degenerate,
                    condition: p.condition,
                })
                .collect(),
            oracle: out.oracle.as_ref().map(|o| OracleRecord {
                energy: o.energy,
                nodes: o.nodes,
                iterations: o.iterations,
                matching_residual: o.matching_residual,
            }),
            diagnostics: Diagnostics {
                smallest_term_index: out.smallest_term_index,
                rejected_roots: out.rejected_roots.clone(),
            },
        }
    }

    /// Canonical JSON rendering (also the parse target: emitting, parsing
    /// and re-emitting is byte-identical).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    /// Column names for the CSV rendering, given the requested
    /// resummation degrees (stable for a fixed invocation).
    pub fn csv_header(pade: &[(usize, usize)], oracle: bool) -> String {
        let mut cols = vec![
            "potential",
            "a",
            "b",
            "c",
            "l",
            "n_r",
            "convention",
            "order",
            "q0",
            "w",
            "beta",
            "lbar",
            "leading",
            "e_p",
        ]
        .into_iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
        for (n, m) in pade {
            cols.push(format!("pade_{n}_{m}"));
            cols.push(format!("pade_{n}_{m}_degenerate"));
        }
        if oracle {
            cols.push("oracle_energy".into());
            cols.push("oracle_nodes".into());
            cols.push("oracle_matching_residual".into());
        }
        cols.push("smallest_term_index".into());
        cols.push("corrections".into());
        cols.join(",")
    }

    /// One CSV row matching `csv_header` built with the same options.
    pub fn to_csv_row(&self, pade: &[(usize, usize)], oracle: bool) -> String {
        let opt = |v: Option<f64>| v.map(sig9).unwrap_or_default();
        let mut cells = vec![
            self.potential.clone(),
            opt(self.a),
            opt(self.b),
            opt(self.c),
            format!("{}", self.l),
            format!("{}", self.n_r),
            self.convention.clone(),
            format!("{}", self.order),
            sig9(self.q0),
            sig9(self.w),
            sig9(self.beta),
            sig9(self.lbar),
            sig9(self.leading),
            sig9(self.e_p),
        ];
        for (n, m) in pade {
            match self.pade.iter().find(|p| p.n == *n && p.m == *m) {
                Some(p) => {
                    cells.push(sig9(p.energy));
                    cells.push(format!("{}", p.degenerate));
                }
                None => {
                    cells.push(String::new());
                    cells.push(String::new());
                }
            }
        }
        if oracle {
            match &self.oracle {
                Some(o) => {
                    cells.push(sig9(o.energy));
                    cells.push(format!("{}", o.nodes));
                    cells.push(sig9(o.matching_residual));
                }
                None => {
                    cells.push(String::new());
                    cells.push(String::new());
                    cells.push(String::new());
                }
            }
        }
        cells.push(format!("{}", self.diagnostics.smallest_term_index));
        cells.push(
            self.corrections
                .iter()
                .map(|c| sig9(*c))
                .collect::<Vec<_>>()
                .join(";"),
        );
        cells.join(",")
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let params = match (self.a, self.b, self.c) {
            (Some(a), Some(b), _) => format!(" a={a} b={b}"),
            (_, _, Some(c)) => format!(" c={c}"),
            _ => String::new(),
        };
        s.push_str(&format!(
            "state: {}{params} l={} n_r={} ({} convention)\n",
            self.potential, self.l, self.n_r, self.convention
        ));
        s.push_str(&format!(
            "expansion point: q0={} w={} beta={} lbar={}\n",
            sig9(self.q0),
            sig9(self.w),
            sig9(self.beta),
            sig9(self.lbar)
        ));
        s.push_str(&format!("leading term: {}\n", sig9(self.leading)));
        for (n, c) in self.corrections.iter().enumerate() {
            s.push_str(&format!("E^({n}) = {}\n", sig9(*c)));
        }
        s.push_str(&format!(
            "series total (order {}): {}\n",
            self.order,
            sig9(self.e_p)
        ));
        for p in &self.pade {
            s.push_str(&format!(
                "E[{},{}] = {}{}\n",
                p.n,
                p.m,
                sig9(p.energy),
                if p.degenerate {
                    " (degenerate fit; truncated sum)"
                } else {
                    ""
                }
            ));
        }
        if let Some(o) = &self.oracle {
            s.push_str(&format!(
                "integration oracle: {} (nodes {}, matching residual {})\n",
                sig9(o.energy),
                o.nodes,
                sig9(o.matching_residual)
            ));
        }
        s.push_str(&format!(
            "smallest series term at n = {}\n",
            self.diagnostics.smallest_term_index
        ));
        if !self.diagnostics.rejected_roots.is_empty() {
            s.push_str(&format!(
                "warning: rejected expansion-point roots: {:?}\n",
                self.diagnostics.rejected_roots
            ));
        }
        s
    }
}
