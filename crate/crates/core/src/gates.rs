// SPDX-License-Identifier: Apache-2.0
//! Gate templates: each Boolean gate as a fixed FALSE / IMPLY sequence over
//! its operand and work cells.

use crate::cost::Energy;
use crate::engine::{ArrayState, CellId, MicroOp};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateKind {
    Inverter,
    Buffer,
    And2,
    And3,
    And4,
    Xor2Destructive,
    Xor2Nondestructive,
    Xor3,
    Or2,
    Nor2,
    Nand2,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::Inverter,
        GateKind::Buffer,
        GateKind::And2,
        GateKind::And3,
        GateKind::And4,
        GateKind::Xor2Destructive,
        GateKind::Xor2Nondestructive,
        GateKind::Xor3,
        GateKind::Or2,
        GateKind::Nor2,
        GateKind::Nand2,
    ];

    /// Kinds with a measured energy figure.
    pub const MEASURED: [GateKind; 8] = [
        GateKind::Inverter,
        GateKind::Buffer,
        GateKind::And2,
        GateKind::And3,
        GateKind::And4,
        GateKind::Xor2Destructive,
        GateKind::Xor2Nondestructive,
        GateKind::Xor3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Inverter => "INVERTER",
            GateKind::Buffer => "BUFFER",
            GateKind::And2 => "AND2",
            GateKind::And3 => "AND3",
            GateKind::And4 => "AND4",
            GateKind::Xor2Destructive => "XOR2_DESTRUCTIVE",
            GateKind::Xor2Nondestructive => "XOR2_NONDESTRUCTIVE",
            GateKind::Xor3 => "XOR3",
            GateKind::Or2 => "OR2",
            GateKind::Nor2 => "NOR2",
            GateKind::Nand2 => "NAND2",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Inverter | GateKind::Buffer => 1,
            GateKind::And2
            | GateKind::Xor2Destructive
            | GateKind::Xor2Nondestructive
            | GateKind::Or2
            | GateKind::Nor2
            | GateKind::Nand2 => 2,
            GateKind::And3 | GateKind::Xor3 => 3,
            GateKind::And4 => 4,
        }
    }

    /// Number of work cells the template needs (the output lives in one of them,
    /// except for OR2 which writes into its second input).
    pub fn work_cells(self) -> usize {
        match self {
            GateKind::Inverter | GateKind::Or2 | GateKind::Nand2 => 1,
            GateKind::Buffer
            | GateKind::And2
            | GateKind::And3
            | GateKind::And4
            | GateKind::Xor2Destructive
            | GateKind::Nor2 => 2,
            GateKind::Xor2Nondestructive | GateKind::Xor3 => 3,
        }
    }

    /// Reference Boolean function.
    pub fn eval(self, x: &[bool]) -> bool {
        match self {
            GateKind::Inverter => !x[0],
            GateKind::Buffer => x[0],
            GateKind::And2 | GateKind::And3 | GateKind::And4 => x.iter().all(|&b| b),
            GateKind::Xor2Destructive | GateKind::Xor2Nondestructive | GateKind::Xor3 => {
                x.iter().fold(false, |a, &b| a ^ b)
            }
            GateKind::Or2 => x[0] | x[1],
            GateKind::Nor2 => !(x[0] | x[1]),
            GateKind::Nand2 => !(x[0] & x[1]),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        GateKind::ALL.into_iter().find(|k| k.name() == up).ok_or_else(|| format!("unknown gate kind `{s}`"))
    }
}

/// Steps, cell count and energy per gate instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GateMetrics {
    pub steps: u32,
    pub memristors: u32,
    /// `None` for kinds without a measured figure.
    pub energy: Option<Energy>,
}

pub fn gate_metrics(kind: GateKind) -> GateMetrics {
    let (steps, memristors, energy) = match kind {
        GateKind::Inverter => (2, 2, Some(1_291)),
        GateKind::Buffer => (4, 3, Some(2_690)),
        GateKind::And2 => (5, 4, Some(3_833)),
        GateKind::And3 => (6, 5, Some(5_025)),
        GateKind::And4 => (11, 6, Some(9_131)),
        GateKind::Xor2Destructive => (9, 4, Some(7_426)),
        GateKind::Xor2Nondestructive => (11, 5, Some(9_146)),
        GateKind::Xor3 => (20, 6, Some(17_110)),
        GateKind::Or2 => (3, 3, None),
        GateKind::Nor2 => (5, 4, None),
        GateKind::Nand2 => (3, 3, None),
    };
    GateMetrics { steps, memristors, energy: energy.map(Energy::from_tenth_pj) }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GateError {
    #[error("{kind} takes {expected} {what} cells, got {got}")]
    Arity { kind: GateKind, what: &'static str, expected: usize, got: usize },
    #[error("{kind}: cell {cell} is used twice")]
    Aliased { kind: GateKind, cell: CellId },
}

/// A gate bound to concrete cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacroProgram {
    pub kind: GateKind,
    pub inputs: Vec<CellId>,
    pub works: Vec<CellId>,
    pub output: CellId,
    /// Input cells whose value is not preserved.
    pub destructive_cells: Vec<CellId>,
}

impl MacroProgram {
    /// Binds `kind` to cells. Every operand and work cell must be distinct.
    pub fn new(kind: GateKind, inputs: &[CellId], works: &[CellId]) -> Result<Self, GateError> {
        if inputs.len() != kind.arity() {
            return Err(GateError::Arity { kind, what: "input", expected: kind.arity(), got: inputs.len() });
        }
        if works.len() != kind.work_cells() {
            return Err(GateError::Arity {
                kind,
                what: "work",
                expected: kind.work_cells(),
                got: works.len(),
            });
        }
        let all: Vec<CellId> = inputs.iter().chain(works).copied().collect();
        for (i, a) in all.iter().enumerate() {
            if all[i + 1..].contains(a) {
                return Err(GateError::Aliased { kind, cell: *a });
            }
        }
        let (output, destructive_cells) = match kind {
            GateKind::Inverter | GateKind::Xor2Nondestructive | GateKind::Nand2 => (works[0], vec![]),
            GateKind::Xor2Destructive => (works[0], vec![inputs[1]]),
            GateKind::Or2 => (inputs[1], vec![inputs[1]]),
            GateKind::Nor2 => (works[1], vec![inputs[1]]),
            GateKind::Buffer | GateKind::And2 | GateKind::And3 | GateKind::And4 | GateKind::Xor3 => {
                (works[1], vec![])
            }
        };
        Ok(Self { kind, inputs: inputs.to_vec(), works: works.to_vec(), output, destructive_cells })
    }

    pub fn inverter(src: CellId, dst: CellId) -> Result<Self, GateError> {
        Self::new(GateKind::Inverter, &[src], &[dst])
    }

    pub fn buffer(src: CellId, work: CellId, dst: CellId) -> Result<Self, GateError> {
        Self::new(GateKind::Buffer, &[src], &[work, dst])
    }

    pub fn expand(&self) -> Vec<MicroOp> {
        let mut v = Vec::with_capacity(gate_metrics(self.kind).steps as usize);
        self.expand_into(&mut v);
        v
    }

    pub fn expand_into(&self, out: &mut Vec<MicroOp>) {
        use MicroOp::{False as F, Imply as I};
        let i = &self.inputs;
        let w = &self.works;
        match self.kind {
            GateKind::Inverter => {
                out.extend([F { q: w[0] }, I { p: i[0], q: w[0] }]);
            }
            GateKind::Buffer => {
                out.extend([F { q: w[0] }, I { p: i[0], q: w[0] }, F { q: w[1] }, I { p: w[0], q: w[1] }]);
            }
            GateKind::And2 => {
                let (p, q) = (i[0], i[1]);
                out.extend([
                    F { q: w[0] },
                    F { q: w[1] },
                    I { p: q, q: w[0] },
                    I { p, q: w[0] },
                    I { p: w[0], q: w[1] },
                ]);
            }
            GateKind::And3 => {
                out.extend([F { q: w[0] }, F { q: w[1] }]);
                out.extend(i.iter().map(|&a| I { p: a, q: w[0] }));
                out.push(I { p: w[0], q: w[1] });
            }
            GateKind::And4 => {
                out.extend([F { q: w[0] }, F { q: w[1] }]);
                out.extend(i[..3].iter().map(|&a| I { p: a, q: w[0] }));
                out.extend([
                    I { p: w[0], q: w[1] },
                    F { q: w[0] },
                    I { p: i[3], q: w[0] },
                    I { p: w[1], q: w[0] },
                    F { q: w[1] },
                    I { p: w[0], q: w[1] },
                ]);
            }
            GateKind::Xor2Destructive => xor2_destructive(out, i[0], i[1], w[0], w[1]),
            GateKind::Xor2Nondestructive => xor2_nondestructive(out, i[0], i[1], w[0], w[1], w[2]),
            GateKind::Xor3 => {
                xor2_nondestructive(out, i[0], i[1], w[0], w[1], w[2]);
                xor2_destructive(out, i[2], w[0], w[1], w[2]);
            }
            GateKind::Or2 => {
                out.extend([F { q: w[0] }, I { p: i[0], q: w[0] }, I { p: w[0], q: i[1] }]);
            }
            GateKind::Nor2 => {
                out.extend([
                    F { q: w[0] },
                    I { p: i[0], q: w[0] },
                    I { p: w[0], q: i[1] },
                    F { q: w[1] },
                    I { p: i[1], q: w[1] },
                ]);
            }
            GateKind::Nand2 => {
                out.extend([F { q: w[0] }, I { p: i[1], q: w[0] }, I { p: i[0], q: w[0] }]);
            }
        }
    }
}

fn xor2_destructive(out: &mut Vec<MicroOp>, a: CellId, b: CellId, s1: CellId, s2: CellId) {
    use MicroOp::{False as F, Imply as I};
    out.extend([
        F { q: s1 },
        F { q: s2 },
        I { p: a, q: s1 },
        I { p: b, q: s2 },
        I { p: s1, q: s2 },
        F { q: s1 },
        I { p: s2, q: s1 },
        I { p: a, q: b },
        I { p: b, q: s1 },
    ]);
}

fn xor2_nondestructive(out: &mut Vec<MicroOp>, a: CellId, b: CellId, s1: CellId, s2: CellId, s3: CellId) {
    use MicroOp::{False as F, Imply as I};
    out.extend([
        F { q: s1 },
        F { q: s2 },
        F { q: s3 },
        I { p: a, q: s1 },
        I { p: b, q: s2 },
        I { p: s2, q: s3 },
        // s2 := a OR NOT b; read again two steps below.
        I { p: s1, q: s2 },
        I { p: a, q: s3 },
        F { q: s1 },
        I { p: s2, q: s1 },
        I { p: s3, q: s1 },
    ]);
}

/// Outcome of an exhaustive gate check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthReport {
    pub kind: GateKind,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl TruthReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the template for every input combination, with work cells preloaded
/// to all-0 and to all-1, and checks the output, the preserved inputs, the
/// step count and the number of touched cells.
pub fn truth_check(kind: GateKind) -> TruthReport {
    let n_in = kind.arity();
    let n_work = kind.work_cells();
    let inputs: Vec<CellId> = (0..n_in).map(CellId).collect();
    let works: Vec<CellId> = (n_in..n_in + n_work).map(CellId).collect();
    let prog = MacroProgram::new(kind, &inputs, &works).expect("canonical binding is valid");
    let ops = prog.expand();
    let metrics = gate_metrics(kind);
    let mut failures = Vec::new();

    if ops.len() != metrics.steps as usize {
        failures.push(format!("{} ops, expected {}", ops.len(), metrics.steps));
    }
    let mut touched: Vec<CellId> = ops
        .iter()
        .flat_map(|op| match *op {
            MicroOp::False { q } => vec![q],
            MicroOp::Imply { p, q } => vec![p, q],
        })
        .collect();
    touched.sort();
    touched.dedup();
    if touched.len() != metrics.memristors as usize {
        failures.push(format!("touches {} cells, expected {}", touched.len(), metrics.memristors));
    }

    let mut cases = 0;
    for combo in 0..(1u32 << n_in) {
        let x: Vec<bool> = (0..n_in).map(|b| combo >> b & 1 == 1).collect();
        for preset in [false, true] {
            cases += 1;
            let mut st = ArrayState::new(n_in + n_work).unwrap();
            for (k, &v) in x.iter().enumerate() {
                st.set(inputs[k], v);
            }
            for &w in &works {
                st.set(w, preset);
            }
            for op in &ops {
                st.apply(op).expect("template ops are in range");
            }
            let want = kind.eval(&x);
            if st.get(prog.output) != want {
                failures.push(format!("inputs {x:?} work={preset}: output {}", !want));
            }
            for (k, &c) in inputs.iter().enumerate() {
                if !prog.destructive_cells.contains(&c) && st.get(c) != x[k] {
                    failures.push(format!("inputs {x:?}: input {k} not preserved"));
                }
            }
        }
    }
    TruthReport { kind, cases, failures }
}
