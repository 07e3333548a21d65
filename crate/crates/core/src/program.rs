// SPDX-License-Identifier: Apache-2.0
//! Straight-line cycle programs assembled from gate templates.

use crate::engine::{CellId, EngineError, Machine, MicroOp};
use crate::gates::{GateKind, MacroProgram};
use crate::schedule::Element;
use std::collections::BTreeMap;

/// A flattened cycle: micro-ops plus the gate census they came from.
#[derive(Clone, Debug, Default)]
pub struct CycleProgram {
    pub ops: Vec<MicroOp>,
    pub gates: BTreeMap<(&'static str, GateKind), u64>,
    /// Cell holding the cycle's output bit, if it has one.
    pub output: Option<CellId>,
    max_cell: usize,
}

impl CycleProgram {
    pub fn steps(&self) -> u64 {
        self.ops.len() as u64
    }

    pub fn gate_count(&self, kind: GateKind) -> u64 {
        self.gates.iter().filter(|((_, k), _)| *k == kind).map(|(_, c)| c).sum()
    }
}

#[derive(Debug, Default)]
pub struct ProgramBuilder {
    prog: CycleProgram,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends one gate and returns its output cell.
    ///
    /// Panics on an invalid binding; cycle layouts are fixed at compile time,
    /// so that is a bug in the caller.
    pub fn gate(
        &mut self,
        group: &'static str,
        kind: GateKind,
        inputs: &[CellId],
        works: &[CellId],
    ) -> CellId {
        let m = MacroProgram::new(kind, inputs, works).unwrap_or_else(|e| panic!("bad {group} binding: {e}"));
        self.push(group, &m)
    }

    pub fn push(&mut self, group: &'static str, m: &MacroProgram) -> CellId {
        for c in m.inputs.iter().chain(&m.works) {
            self.prog.max_cell = self.prog.max_cell.max(c.0);
        }
        m.expand_into(&mut self.prog.ops);
        *self.prog.gates.entry((group, m.kind)).or_default() += 1;
        m.output
    }

    pub fn finish(mut self, output: Option<CellId>) -> CycleProgram {
        self.prog.output = output;
        self.prog
    }
}

impl Machine {
    /// Runs a compiled cycle and books its gates.
    pub fn execute(&mut self, prog: &CycleProgram) -> Result<(), EngineError> {
        if !prog.ops.is_empty() && prog.max_cell >= self.state().len() {
            return Err(EngineError::OutOfRange { cell: CellId(prog.max_cell), len: self.state().len() });
        }
        self.run_prevalidated(&prog.ops);
        let stats = self.stats_mut();
        for (&(g, k), &c) in &prog.gates {
            stats.record_gate(g, k, c);
        }
        Ok(())
    }
}

/// Hands out free cells during a cycle.
///
/// Register cells whose contents were consumed destructively can be lent
/// back as scratch; they are preferred so the dedicated work cells stay
/// available for values that must survive until the shifts.
#[derive(Clone, Debug)]
pub struct WorkPool {
    work_set: Vec<CellId>,
    work: Vec<CellId>,
    scratch: Vec<CellId>,
}

impl WorkPool {
    pub fn new(work: &[CellId]) -> Self {
        let mut free = work.to_vec();
        free.reverse();
        Self { work_set: work.to_vec(), work: free, scratch: Vec::new() }
    }

    pub fn take(&mut self) -> CellId {
        self.scratch.pop().or_else(|| self.work.pop()).expect("work cells exhausted")
    }

    /// A dedicated work cell, never a borrowed register cell.
    pub fn take_work(&mut self) -> CellId {
        self.work.pop().expect("dedicated work cells exhausted")
    }

    pub fn free(&mut self, cell: CellId) {
        if self.work_set.contains(&cell) {
            debug_assert!(!self.work.contains(&cell));
            self.work.push(cell);
        } else {
            debug_assert!(!self.scratch.contains(&cell));
            self.scratch.push(cell);
        }
    }

    pub fn free_work_count(&self) -> usize {
        self.work.len()
    }

    /// Two-input XOR. The first XOR of a chain over untouched register cells
    /// uses the non-destructive template; otherwise `b` must be a scratch
    /// value, which the destructive template consumes.
    pub fn xor_d(&mut self, b: &mut ProgramBuilder, group: &'static str, a: CellId, v: CellId) -> CellId {
        let s1 = self.take();
        let s2 = self.take();
        let out = b.gate(group, GateKind::Xor2Destructive, &[a, v], &[s1, s2]);
        self.free(s2);
        self.free(v);
        out
    }

    /// Destructive XOR whose result must land in a dedicated work cell.
    pub fn xor_d_to_work(
        &mut self,
        b: &mut ProgramBuilder,
        group: &'static str,
        a: CellId,
        v: CellId,
    ) -> CellId {
        let s1 = self.take_work();
        let s2 = self.take();
        let out = b.gate(group, GateKind::Xor2Destructive, &[a, v], &[s1, s2]);
        self.free(s2);
        self.free(v);
        out
    }

    pub fn xor_n(&mut self, b: &mut ProgramBuilder, group: &'static str, a: CellId, c: CellId) -> CellId {
        let s1 = self.take();
        let s2 = self.take();
        let s3 = self.take();
        let out = b.gate(group, GateKind::Xor2Nondestructive, &[a, c], &[s1, s2, s3]);
        self.free(s3);
        self.free(s2);
        out
    }

    /// AND2 / AND3 / AND4 over preserved operands.
    pub fn and(&mut self, b: &mut ProgramBuilder, group: &'static str, xs: &[CellId]) -> CellId {
        let kind = match xs.len() {
            2 => GateKind::And2,
            3 => GateKind::And3,
            4 => GateKind::And4,
            n => panic!("no AND template for {n} inputs"),
        };
        let s1 = self.take();
        let s2 = self.take();
        let out = b.gate(group, kind, xs, &[s1, s2]);
        self.free(s1);
        out
    }
}

/// Emits one register shift. `cell(j)` maps travel position `j` (1-based,
/// `j = 1` receives the injected value) to its cell; transfers run from the
/// far end back to the injection so nothing is overwritten before it moves.
pub fn emit_shift(
    b: &mut ProgramBuilder,
    group: &'static str,
    len: usize,
    cell: impl Fn(usize) -> CellId,
    source: CellId,
    elements: &[Element],
    work: CellId,
) {
    assert_eq!(elements.len(), len, "plan width does not match register");
    for j in (1..=len).rev() {
        let src = if j == 1 { source } else { cell(j - 1) };
        let dst = cell(j);
        match elements[j - 1] {
            Element::Buffer => b.gate(group, GateKind::Buffer, &[src], &[work, dst]),
            Element::Inverter => b.gate(group, GateKind::Inverter, &[src], &[dst]),
        };
    }
}
