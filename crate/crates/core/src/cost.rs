// SPDX-License-Identifier: Apache-2.0
//! Step and energy accounting.

use crate::engine::ExecStats;
use crate::gates::{gate_metrics, GateKind};
use crate::{Cipher, ShiftMode};
use serde::{Serialize, Serializer};
use std::fmt::{self, Write as _};
use std::ops::{Add, AddAssign, Mul};

/// Energy as an integer count of 0.1 pJ (1e-4 nJ), so sums stay exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Energy(u64);

impl Energy {
    pub const ZERO: Energy = Energy(0);

    pub const fn from_tenth_pj(v: u64) -> Self {
        Energy(v)
    }

    pub const fn tenth_pj(self) -> u64 {
        self.0
    }

    pub fn as_nj(self) -> f64 {
        self.0 as f64 / 1e4
    }

    pub fn as_uj(self) -> f64 {
        self.0 as f64 / 1e7
    }
}

impl Add for Energy {
    type Output = Energy;
    fn add(self, o: Energy) -> Energy {
        Energy(self.0 + o.0)
    }
}

impl AddAssign for Energy {
    fn add_assign(&mut self, o: Energy) {
        self.0 += o.0;
    }
}

impl Mul<u64> for Energy {
    type Output = Energy;
    fn mul(self, k: u64) -> Energy {
        Energy(self.0 * k)
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} nJ", self.as_nj())
    }
}

impl Serialize for Energy {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_nj())
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CostError {
    #[error("no energy figure for gate kind {0}")]
    UnknownGate(GateKind),
    #[error("{0} steps were not produced by any gate")]
    Unattributed(u64),
    #[error("report is for {got_cipher}/{got_mode}, form is for {want_cipher}/{want_mode}")]
    Mismatch { got_cipher: Cipher, got_mode: ShiftMode, want_cipher: Cipher, want_mode: ShiftMode },
}

/// One line of a block table: a gate kind within a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockRow {
    pub group: String,
    pub kind: GateKind,
    pub count: u64,
    pub steps: u64,
    #[serde(rename = "energy_nj")]
    pub energy: Energy,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PhaseCost {
    pub blocks: Vec<BlockRow>,
    pub steps: u64,
    #[serde(rename = "energy_nj")]
    pub energy: Energy,
}

impl PhaseCost {
    pub fn count(&self, kind: GateKind) -> u64 {
        self.blocks.iter().filter(|b| b.kind == kind).map(|b| b.count).sum()
    }

    pub fn group_count(&self, group: &str, kind: GateKind) -> u64 {
        self.blocks.iter().filter(|b| b.group == group && b.kind == kind).map(|b| b.count).sum()
    }
}

/// Census of a run split by gate kind and group.
pub fn aggregate(stats: &ExecStats) -> Result<PhaseCost, CostError> {
    let mut out = PhaseCost::default();
    for (&(group, kind), &count) in &stats.per_block {
        let m = gate_metrics(kind);
        let e = m.energy.ok_or(CostError::UnknownGate(kind))?;
        let row = BlockRow {
            group: group.to_string(),
            kind,
            count,
            steps: count * m.steps as u64,
            energy: e * count,
        };
        out.steps += row.steps;
        out.energy += row.energy;
        out.blocks.push(row);
    }
    if out.steps != stats.steps {
        return Err(CostError::Unattributed(stats.steps.saturating_sub(out.steps)));
    }
    Ok(out)
}

/// Cost of one cipher run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub cipher: Cipher,
    pub mode: ShiftMode,
    /// Keystream bits produced.
    pub n: u64,
    pub init: PhaseCost,
    pub keystream: PhaseCost,
    pub total_steps: u64,
    #[serde(rename = "total_energy_nj")]
    pub total_energy: Energy,
    /// Cells allocated by the layout.
    pub memristors: usize,
}

impl CostReport {
    pub fn from_phases(
        cipher: Cipher,
        mode: ShiftMode,
        n: u64,
        init: &ExecStats,
        keystream: &ExecStats,
        memristors: usize,
    ) -> Result<Self, CostError> {
        let init = aggregate(init)?;
        let keystream = aggregate(keystream)?;
        Ok(Self {
            cipher,
            mode,
            n,
            total_steps: init.steps + keystream.steps,
            total_energy: init.energy + keystream.energy,
            init,
            keystream,
            memristors,
        })
    }

    pub fn total_energy_uj(&self) -> f64 {
        self.total_energy.as_uj()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Block table followed by totals and the printed closed form.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ =
            writeln!(s, "{} ({}), n = {}, {} memristors", self.cipher, self.mode, self.n, self.memristors);
        for (title, phase) in [("warm-up", &self.init), ("keystream", &self.keystream)] {
            let _ = writeln!(s, "\n[{title}]");
            let _ = writeln!(
                s,
                "{:<10} {:<20} {:>10} {:>12} {:>14}",
                "group", "gate", "blocks", "steps", "energy (uJ)"
            );
            for b in &phase.blocks {
                let _ = writeln!(
                    s,
                    "{:<10} {:<20} {:>10} {:>12} {:>14.4}",
                    b.group,
                    b.kind.name(),
                    b.count,
                    b.steps,
                    b.energy.as_uj()
                );
            }
            let _ = writeln!(
                s,
                "{:<10} {:<20} {:>10} {:>12} {:>14.4}",
                "total",
                "",
                "",
                phase.steps,
                phase.energy.as_uj()
            );
        }
        let form = ClosedForm::printed(self.cipher, self.mode);
        let (fs, fe) = form.eval(self.n);
        let _ = writeln!(s, "\n{:<32} {:>14} {:>14}", "", "steps", "energy (uJ)");
        let _ =
            writeln!(s, "{:<32} {:>14} {:>14.4}", "simulated", self.total_steps, self.total_energy.as_uj());
        let _ = writeln!(s, "{:<32} {:>14} {:>14.4}", form.label(), fs, fe.as_uj());
        if self.cipher == Cipher::Trivium {
            let _ = writeln!(
                s,
                "cells: {} allocated ({} without the output cell)",
                self.memristors,
                self.memristors - 1
            );
        }
        s
    }
}

/// Affine cost in the number of keystream bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub cipher: Cipher,
    pub mode: ShiftMode,
    pub steps_per_bit: u64,
    pub steps_fixed: u64,
    #[serde(rename = "energy_per_bit_nj")]
    pub energy_per_bit: Energy,
    #[serde(rename = "energy_fixed_nj")]
    pub energy_fixed: Energy,
}

impl ClosedForm {
    /// The published formulas, coefficients as printed.
    pub fn printed(cipher: Cipher, mode: ShiftMode) -> Self {
        // Energy coefficients in 0.1 pJ: 1 uJ = 1e7.
        let (sp, sf, ep, ef) = match (cipher, mode) {
            (Cipher::Trivium, ShiftMode::Conventional) => (1152, 1_437_696, 867_000, 982_711_000),
            (Cipher::Trivium, ShiftMode::Proposed) => (710, 797_266, 478_000, 534_731_000),
            (Cipher::Grain128a, ShiftMode::Conventional) => (1646, 363_520, 987_800, 259_135_000),
            (Cipher::Grain128a, ShiftMode::Proposed) => (942, 245_830, 666_000, 176_811_000),
        };
        Self {
            cipher,
            mode,
            steps_per_bit: sp,
            steps_fixed: sf,
            energy_per_bit: Energy(ep),
            energy_fixed: Energy(ef),
        }
    }

    /// Fits a form to a simulation: fixed part from the warm-up phase, per-bit
    /// part from one keystream cycle.
    pub fn from_simulation(warmup: &PhaseCost, one_bit: &PhaseCost, cipher: Cipher, mode: ShiftMode) -> Self {
        Self {
            cipher,
            mode,
            steps_per_bit: one_bit.steps,
            steps_fixed: warmup.steps,
            energy_per_bit: one_bit.energy,
            energy_fixed: warmup.energy,
        }
    }

    pub fn eval(&self, n: u64) -> (u64, Energy) {
        (self.steps_per_bit * n + self.steps_fixed, self.energy_per_bit * n + self.energy_fixed)
    }

    pub fn label(&self) -> String {
        format!("{} x n + {}", self.steps_per_bit, self.steps_fixed)
    }
}

/// `(steps, energy in uJ)` from the printed formula.
pub fn closed_form(cipher: Cipher, mode: ShiftMode, n: u64) -> (u64, f64) {
    let (s, e) = ClosedForm::printed(cipher, mode).eval(n);
    (s, e.as_uj())
}

/// Energy tolerance used by [`compare`]: 0.0001 uJ.
pub const ENERGY_TOLERANCE: Energy = Energy(1_000);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divergence {
    pub n: u64,
    pub steps_simulated: u64,
    pub steps_form: u64,
    pub steps_delta: i64,
    pub steps_relative: f64,
    pub energy_simulated_uj: f64,
    pub energy_form_uj: f64,
    pub energy_delta_uj: f64,
    pub energy_relative: f64,
    pub steps_ok: bool,
    pub energy_ok: bool,
}

impl Divergence {
    pub fn ok(&self) -> bool {
        self.steps_ok && self.energy_ok
    }
}

/// Deltas between a simulated report and a closed form at the report's `n`.
/// Steps must match exactly and energy within [`ENERGY_TOLERANCE`].
pub fn compare(report: &CostReport, form: &ClosedForm) -> Result<Divergence, CostError> {
    if report.cipher != form.cipher || report.mode != form.mode {
        return Err(CostError::Mismatch {
            got_cipher: report.cipher,
            got_mode: report.mode,
            want_cipher: form.cipher,
            want_mode: form.mode,
        });
    }
    let (fs, fe) = form.eval(report.n);
    let sd = report.total_steps as i64 - fs as i64;
    let ed = report.total_energy.0 as i64 - fe.0 as i64;
    Ok(Divergence {
        n: report.n,
        steps_simulated: report.total_steps,
        steps_form: fs,
        steps_delta: sd,
        steps_relative: sd as f64 / fs as f64,
        energy_simulated_uj: report.total_energy.as_uj(),
        energy_form_uj: fe.as_uj(),
        energy_delta_uj: ed as f64 / 1e7,
        energy_relative: ed as f64 / fe.0 as f64,
        steps_ok: sd == 0,
        energy_ok: ed.unsigned_abs() <= ENERGY_TOLERANCE.0,
    })
}

/// Asymptotic reduction of the proposed scheme against the conventional one,
/// as a percentage, from the printed per-bit coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Improvement {
    pub cipher: Cipher,
    pub steps_pct: f64,
    pub energy_pct: f64,
}

pub fn improvement(cipher: Cipher) -> Improvement {
    let c = ClosedForm::printed(cipher, ShiftMode::Conventional);
    let p = ClosedForm::printed(cipher, ShiftMode::Proposed);
    Improvement {
        cipher,
        steps_pct: 100.0 * (1.0 - p.steps_per_bit as f64 / c.steps_per_bit as f64),
        energy_pct: 100.0 * (1.0 - p.energy_per_bit.0 as f64 / c.energy_per_bit.0 as f64),
    }
}
