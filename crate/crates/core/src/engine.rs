// SPDX-License-Identifier: Apache-2.0
//! Micro-op execution over a row of binary memristor cells.

use crate::gates::GateKind;
use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

/// Position of a cell in the serial row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One pulse applied to the row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MicroOp {
    /// Unconditional reset: `q := 0`.
    False { q: CellId },
    /// Material implication: `q := (NOT p) OR q`.
    Imply { p: CellId, q: CellId },
}

impl MicroOp {
    pub fn target(&self) -> CellId {
        match *self {
            MicroOp::False { q } | MicroOp::Imply { q, .. } => q,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MicroOp::False { .. } => "FALSE",
            MicroOp::Imply { .. } => "IMPLY",
        }
    }
}

impl fmt::Display for MicroOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MicroOp::False { q } => write!(f, "FALSE({q})"),
            MicroOp::Imply { p, q } => write!(f, "{p}->{q}"),
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("array length must be positive")]
    EmptyArray,
    #[error("cell {cell} out of range for array of length {len}")]
    OutOfRange { cell: CellId, len: usize },
    #[error("IMPLY operands alias the same cell {cell}")]
    AliasedOperands { cell: CellId },
}

/// Ordered row of cells, each holding 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrayState {
    cells: Vec<bool>,
}

impl ArrayState {
    pub fn new(len: usize) -> Result<Self, EngineError> {
        if len == 0 {
            return Err(EngineError::EmptyArray);
        }
        Ok(Self { cells: vec![false; len] })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, EngineError> {
        if bits.is_empty() {
            return Err(EngineError::EmptyArray);
        }
        Ok(Self { cells: bits.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, cell: CellId) -> bool {
        self.cells[cell.0]
    }

    /// Direct write, used for loading key material. Not a counted step.
    pub fn set(&mut self, cell: CellId, value: bool) {
        self.cells[cell.0] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.cells
    }

    fn check(&self, cell: CellId) -> Result<(), EngineError> {
        if cell.0 < self.cells.len() {
            Ok(())
        } else {
            Err(EngineError::OutOfRange { cell, len: self.cells.len() })
        }
    }

    /// Checks an op against this row without applying it.
    pub fn validate(&self, op: &MicroOp) -> Result<(), EngineError> {
        match *op {
            MicroOp::False { q } => self.check(q),
            MicroOp::Imply { p, q } => {
                self.check(p)?;
                self.check(q)?;
                if p == q {
                    return Err(EngineError::AliasedOperands { cell: p });
                }
                Ok(())
            }
        }
    }

    /// Applies one op and returns the new value of its target.
    pub fn apply(&mut self, op: &MicroOp) -> Result<bool, EngineError> {
        self.validate(op)?;
        Ok(self.apply_unchecked(op))
    }

    #[inline]
    fn apply_unchecked(&mut self, op: &MicroOp) -> bool {
        match *op {
            MicroOp::False { q } => {
                self.cells[q.0] = false;
                false
            }
            MicroOp::Imply { p, q } => {
                let v = !self.cells[p.0] | self.cells[q.0];
                self.cells[q.0] = v;
                v
            }
        }
    }
}

/// Step and gate counters accumulated during a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExecStats {
    pub steps: u64,
    pub per_gate: BTreeMap<GateKind, u64>,
    /// Gate counts split by the group label the caller attached (for
    /// example `"logic"` or `"shift A"`).
    pub per_block: BTreeMap<(&'static str, GateKind), u64>,
}

impl ExecStats {
    pub fn record_gate(&mut self, group: &'static str, kind: GateKind, count: u64) {
        *self.per_gate.entry(kind).or_default() += count;
        *self.per_block.entry((group, kind)).or_default() += count;
    }

    /// Merges another set of counters into this one.
    pub fn absorb(&mut self, other: &ExecStats) {
        self.steps += other.steps;
        for (&(g, k), &c) in &other.per_block {
            *self.per_block.entry((g, k)).or_default() += c;
        }
        for (&k, &c) in &other.per_gate {
            *self.per_gate.entry(k).or_default() += c;
        }
    }

    /// `self - earlier`, for splitting a run into phases.
    pub fn since(&self, earlier: &ExecStats) -> ExecStats {
        let mut out = ExecStats { steps: self.steps - earlier.steps, ..ExecStats::default() };
        for (&key, &c) in &self.per_block {
            let before = earlier.per_block.get(&key).copied().unwrap_or(0);
            if c > before {
                out.per_block.insert(key, c - before);
            }
        }
        for (&k, &c) in &self.per_gate {
            let before = earlier.per_gate.get(&k).copied().unwrap_or(0);
            if c > before {
                out.per_gate.insert(k, c - before);
            }
        }
        out
    }
}

/// Receives one record per executed micro-op.
pub trait TraceSink: Send {
    fn record(&mut self, step_index: u64, op: &MicroOp, result: bool);

    /// Pushes buffered records out and reports any deferred error.
    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

/// Writes `step_index,kind,p,q,resulting_bit` lines.
pub struct CsvTrace<W: Write + Send> {
    out: W,
    error: Option<io::Error>,
}

impl<W: Write + Send> CsvTrace<W> {
    pub fn new(mut out: W) -> Self {
        let error = writeln!(out, "step_index,kind,p,q,resulting_bit").err();
        Self { out, error }
    }

    /// Flushes and returns the writer, or the first I/O error seen.
    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write + Send> TraceSink for CsvTrace<W> {
    fn record(&mut self, step_index: u64, op: &MicroOp, result: bool) {
        if self.error.is_some() {
            return;
        }
        let r = match *op {
            MicroOp::False { q } => writeln!(self.out, "{step_index},FALSE,,{q},{}", result as u8),
            MicroOp::Imply { p, q } => {
                writeln!(self.out, "{step_index},IMPLY,{p},{q},{}", result as u8)
            }
        };
        if let Err(e) = r {
            self.error = Some(e);
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self.error.take() {
            Some(e) => Err(e),
            None => self.out.flush(),
        }
    }
}

impl<T: TraceSink + ?Sized> TraceSink for Box<T> {
    fn record(&mut self, step_index: u64, op: &MicroOp, result: bool) {
        (**self).record(step_index, op, result)
    }

    fn flush(&mut self) -> io::Result<()> {
        (**self).flush()
    }
}

/// Collects trace records in memory.
#[derive(Clone, Debug, Default)]
pub struct VecTrace(pub Vec<(u64, MicroOp, bool)>);

impl TraceSink for VecTrace {
    fn record(&mut self, step_index: u64, op: &MicroOp, result: bool) {
        self.0.push((step_index, *op, result));
    }
}

/// `FALSE(target)` on a copy of `state`.
pub fn exec_false(state: &ArrayState, target: CellId) -> Result<(ArrayState, ExecStats), EngineError> {
    run_program(state, &[MicroOp::False { q: target }])
}

/// `p IMPLY q` on a copy of `state`.
pub fn exec_imply(state: &ArrayState, p: CellId, q: CellId) -> Result<(ArrayState, ExecStats), EngineError> {
    run_program(state, &[MicroOp::Imply { p, q }])
}

/// Runs `ops` in order on a copy of `state`. The first invalid op aborts the
/// run and the partial state is dropped.
pub fn run_program(state: &ArrayState, ops: &[MicroOp]) -> Result<(ArrayState, ExecStats), EngineError> {
    for op in ops {
        state.validate(op)?;
    }
    let mut next = state.clone();
    for op in ops {
        next.apply_unchecked(op);
    }
    let stats = ExecStats { steps: ops.len() as u64, ..ExecStats::default() };
    Ok((next, stats))
}

/// A row together with its counters and an optional trace sink.
pub struct Machine {
    state: ArrayState,
    stats: ExecStats,
    trace: Option<Box<dyn TraceSink>>,
}

impl Machine {
    pub fn new(state: ArrayState) -> Self {
        Self { state, stats: ExecStats::default(), trace: None }
    }

    pub fn set_trace(&mut self, sink: Option<Box<dyn TraceSink>>) {
        self.trace = sink;
    }

    pub fn take_trace(&mut self) -> Option<Box<dyn TraceSink>> {
        self.trace.take()
    }

    pub fn state(&self) -> &ArrayState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut ArrayState {
        &mut self.state
    }

    pub fn stats(&self) -> &ExecStats {
        &self.stats
    }

    pub fn step(&mut self, op: &MicroOp) -> Result<bool, EngineError> {
        self.state.validate(op)?;
        Ok(self.step_unchecked(op))
    }

    #[inline]
    fn step_unchecked(&mut self, op: &MicroOp) -> bool {
        let r = self.state.apply_unchecked(op);
        if let Some(t) = self.trace.as_mut() {
            t.record(self.stats.steps, op, r);
        }
        self.stats.steps += 1;
        r
    }

    /// Runs a sequence, validating all of it first so a bad op leaves the
    /// machine untouched.
    pub fn run(&mut self, ops: &[MicroOp]) -> Result<(), EngineError> {
        for op in ops {
            self.state.validate(op)?;
        }
        for op in ops {
            self.step_unchecked(op);
        }
        Ok(())
    }

    /// Runs ops that were already validated against an array of this length.
    pub(crate) fn run_prevalidated(&mut self, ops: &[MicroOp]) {
        if self.trace.is_none() {
            for op in ops {
                self.state.apply_unchecked(op);
            }
            self.stats.steps += ops.len() as u64;
        } else {
            for op in ops {
                self.step_unchecked(op);
            }
        }
    }

    pub(crate) fn stats_mut(&mut self) -> &mut ExecStats {
        &mut self.stats
    }
}
