// SPDX-License-Identifier: Apache-2.0
//! Cycle driver shared by the two cipher mappings.

use crate::cost::CostReport;
use crate::engine::{ArrayState, CellId, ExecStats, Machine, TraceSink};
use crate::program::CycleProgram;
use crate::schedule::{Element, RegisterLayout, Scheduler};
use crate::{Cipher, CipherError, ShiftMode};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Trivium initialization or Grain pre-initialization.
    Warmup,
    Keystream,
}

/// What a cipher must provide to run on the array.
pub trait CipherMap {
    const CIPHER: Cipher;
    /// Cells in the row.
    const CELLS: usize;
    const WARMUP_CYCLES: u64;

    /// Shift registers in the order their plans are passed to `compile`.
    fn registers() -> Vec<RegisterLayout>;

    /// Cell of travel position `pos` in register `reg`.
    fn cell(reg: usize, pos: usize) -> CellId;

    /// Writes key and IV into a zeroed row.
    fn load(state: &mut ArrayState, key: &[bool], iv: &[bool]) -> Result<(), CipherError>;

    /// One cycle's program for the given phase and per-register shift rows.
    fn compile(phase: Phase, rows: &[&[Element]]) -> CycleProgram;
}

/// A cipher running on the array.
pub struct Simulation<M: CipherMap> {
    machine: Machine,
    mode: ShiftMode,
    cycle: u64,
    schedulers: Vec<Scheduler>,
    cache: HashMap<(Phase, Vec<usize>), CycleProgram>,
    /// Per register, per travel position: true while the cell holds the
    /// complement of its logical value.
    polarity: Vec<Vec<bool>>,
    _map: std::marker::PhantomData<M>,
}

impl<M: CipherMap> Simulation<M> {
    pub fn new(key: &[bool], iv: &[bool], mode: ShiftMode) -> Result<Self, CipherError> {
        let mut state = ArrayState::new(M::CELLS).expect("layout is non-empty");
        M::load(&mut state, key, iv)?;
        let regs = M::registers();
        let polarity = regs.iter().map(|r| vec![false; r.len]).collect();
        let schedulers = regs.into_iter().map(|r| Scheduler::new(r, mode)).collect();
        Ok(Self {
            machine: Machine::new(state),
            mode,
            cycle: 0,
            schedulers,
            cache: HashMap::new(),
            polarity,
            _map: std::marker::PhantomData,
        })
    }

    pub fn mode(&self) -> ShiftMode {
        self.mode
    }

    /// Completed cycles.
    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    /// Phase of the next cycle to run.
    pub fn phase(&self) -> Phase {
        if self.cycle < M::WARMUP_CYCLES {
            Phase::Warmup
        } else {
            Phase::Keystream
        }
    }

    pub fn state(&self) -> &ArrayState {
        self.machine.state()
    }

    pub fn stats(&self) -> &ExecStats {
        self.machine.stats()
    }

    pub fn set_trace(&mut self, sink: Option<Box<dyn TraceSink>>) {
        self.machine.set_trace(sink);
    }

    pub fn take_trace(&mut self) -> Option<Box<dyn TraceSink>> {
        self.machine.take_trace()
    }

    /// Logical value of a register cell, undoing any pending complement.
    pub fn logical(&self, reg: usize, pos: usize) -> bool {
        self.machine.state().get(M::cell(reg, pos)) ^ self.polarity[reg][pos - 1]
    }

    pub fn is_complemented(&self, reg: usize, pos: usize) -> bool {
        self.polarity[reg][pos - 1]
    }

    /// Runs one cycle; returns the output bit in the keystream phase.
    pub fn step_cycle(&mut self) -> Option<bool> {
        let phase = self.phase();
        let t = self.cycle as usize + 1;
        let idx: Vec<usize> = self.schedulers.iter().map(|s| s.row_index(t)).collect();
        let key = (phase, idx);
        if !self.cache.contains_key(&key) {
            let rows: Vec<&[Element]> = self.schedulers.iter().map(|s| s.row(t)).collect();
            let prog = M::compile(phase, &rows);
            self.cache.insert(key.clone(), prog);
        }
        let prog = &self.cache[&key];
        self.machine.execute(prog).expect("compiled program fits the layout");
        let out = prog.output.map(|c| self.machine.state().get(c));
        for (r, s) in self.schedulers.iter().enumerate() {
            let row = s.row(t);
            let pi = &mut self.polarity[r];
            for j in (1..=row.len()).rev() {
                let src = if j == 1 { false } else { pi[j - 2] };
                pi[j - 1] = src ^ (row[j - 1] == Element::Inverter);
            }
        }
        self.cycle += 1;
        out
    }

    /// Runs the remaining warm-up cycles.
    pub fn warm_up(&mut self) {
        while self.phase() == Phase::Warmup {
            self.step_cycle();
        }
    }

    /// Program for the next cycle, without running it.
    pub fn next_program(&self) -> CycleProgram {
        let t = self.cycle as usize + 1;
        let rows: Vec<&[Element]> = self.schedulers.iter().map(|s| s.row(t)).collect();
        M::compile(self.phase(), &rows)
    }
}

/// Warm-up, then `n` keystream cycles, with the cost split by phase.
pub fn run_keystream<M: CipherMap>(
    key: &[bool],
    iv: &[bool],
    n: usize,
    mode: ShiftMode,
) -> Result<(Vec<bool>, CostReport), CipherError> {
    let (bits, report, _) = run_keystream_traced::<M>(key, iv, n, mode, None)?;
    Ok((bits, report))
}

/// [`run_keystream`] with every micro-op sent to `trace`, which is handed
/// back at the end.
#[allow(clippy::type_complexity)]
pub fn run_keystream_traced<M: CipherMap>(
    key: &[bool],
    iv: &[bool],
    n: usize,
    mode: ShiftMode,
    trace: Option<Box<dyn TraceSink>>,
) -> Result<(Vec<bool>, CostReport, Option<Box<dyn TraceSink>>), CipherError> {
    let mut sim = Simulation::<M>::new(key, iv, mode)?;
    sim.set_trace(trace);
    sim.warm_up();
    let warm = sim.stats().clone();
    let bits: Vec<bool> = (0..n).map(|_| sim.step_cycle().expect("keystream cycle has an output")).collect();
    let ks = sim.stats().since(&warm);
    let report = CostReport::from_phases(M::CIPHER, mode, n as u64, &warm, &ks, M::CELLS)?;
    Ok((bits, report, sim.take_trace()))
}
