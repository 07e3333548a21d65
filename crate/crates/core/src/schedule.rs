// SPDX-License-Identifier: Apache-2.0
//! Shift plans: which transfers of a register use a 4-step buffer and which a
//! 2-step inverter.
//!
//! Positions are counted in travel order. Position 1 receives the injected
//! value, a value at position `j` moves to `j + 1`, and position `len` is
//! dropped. An inverter leaves the destination holding the complement of the
//! source, so a value's polarity is the parity of inverters it has passed.
//! A plan is valid when every tap holds its value at true polarity after
//! every shift.

use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::io::{self, Write};
use std::ops::RangeInclusive;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Element {
    Buffer,
    Inverter,
}

impl Element {
    pub fn name(self) -> &'static str {
        match self {
            Element::Buffer => "BUFFER",
            Element::Inverter => "INVERTER",
        }
    }

    pub fn steps(self) -> u64 {
        match self {
            Element::Buffer => 4,
            Element::Inverter => 2,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How travel positions map to the cipher's own cell labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Labeling {
    /// Label = position (Trivium: A1..A93, shift toward higher labels).
    Ascending,
    /// Label = len - position (Grain: b127 receives, shift toward b0).
    Descending,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("register `{0}` has no cells")]
    Empty(String),
    #[error("register `{name}`: tap position {tap} outside 1..={len}")]
    TapOutOfRange { name: String, tap: usize, len: usize },
    #[error("register `{name}`: no polarity-consistent plan ({reason})")]
    Infeasible { name: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegisterLayout {
    pub name: String,
    pub len: usize,
    /// Tap positions in travel order.
    pub taps: BTreeSet<usize>,
    pub labeling: Labeling,
    /// Prefix used when printing labels, such as `A` or `b`.
    pub prefix: String,
}

impl RegisterLayout {
    pub fn new(
        name: &str,
        prefix: &str,
        len: usize,
        taps: impl IntoIterator<Item = usize>,
        labeling: Labeling,
    ) -> Result<Self, ScheduleError> {
        if len == 0 {
            return Err(ScheduleError::Empty(name.to_string()));
        }
        let taps: BTreeSet<usize> = taps.into_iter().collect();
        if let Some(&t) = taps.iter().find(|&&t| t == 0 || t > len) {
            return Err(ScheduleError::TapOutOfRange { name: name.to_string(), tap: t, len });
        }
        Ok(Self { name: name.to_string(), len, taps, labeling, prefix: prefix.to_string() })
    }

    /// Builds a layout from taps given as cipher labels.
    pub fn from_labels(
        name: &str,
        prefix: &str,
        len: usize,
        tap_labels: impl IntoIterator<Item = usize>,
        labeling: Labeling,
    ) -> Result<Self, ScheduleError> {
        let mut taps = Vec::new();
        for l in tap_labels {
            let pos = match labeling {
                Labeling::Ascending => l,
                Labeling::Descending => {
                    if l >= len {
                        return Err(ScheduleError::TapOutOfRange { name: name.to_string(), tap: l, len });
                    }
                    len - l
                }
            };
            taps.push(pos);
        }
        Self::new(name, prefix, len, taps, labeling)
    }

    /// Cipher label of a travel position.
    pub fn label(&self, pos: usize) -> usize {
        match self.labeling {
            Labeling::Ascending => pos,
            Labeling::Descending => self.len - pos,
        }
    }

    pub fn label_name(&self, pos: usize) -> String {
        format!("{}{}", self.prefix, self.label(pos))
    }

    /// Adjacent tap positions `(k, k + 1)`.
    pub fn tap_pairs(&self) -> Vec<(usize, usize)> {
        self.taps.iter().filter(|&&k| self.taps.contains(&(k + 1))).map(|&k| (k, k + 1)).collect()
    }

    pub fn is_tap(&self, pos: usize) -> bool {
        self.taps.contains(&pos)
    }

    /// First cycle from which the proposed plan repeats: by then every cell
    /// holds an injected value.
    pub fn steady_cycle(&self) -> usize {
        self.len + 1
    }
}

/// Per-cycle transfer choices. `cycles[t - 1][j - 1]` is the element used in
/// shift `t` to fill position `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftPlan {
    pub layout: RegisterLayout,
    pub cycles: Vec<Vec<Element>>,
}

impl ShiftPlan {
    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    /// Elements for shift `t` (1-based).
    pub fn cycle(&self, t: usize) -> &[Element] {
        &self.cycles[t - 1]
    }

    /// Writes `cycle,transfer_from,transfer_to,element` rows. The injection
    /// source is printed as `in`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "cycle,transfer_from,transfer_to,element")?;
        for (ti, row) in self.cycles.iter().enumerate() {
            for (ji, e) in row.iter().enumerate() {
                let j = ji + 1;
                let from = if j == 1 { "in".to_string() } else { self.layout.label_name(j - 1) };
                writeln!(w, "{},{},{},{}", ti + 1, from, self.layout.label_name(j), e)?;
            }
        }
        Ok(())
    }

    /// Polarity of every position after each shift: `map[t][j - 1]` is true
    /// when position `j` holds a complemented value after shift `t`
    /// (`t = 0` is the initial load).
    pub fn polarity_map(&self) -> Vec<Vec<bool>> {
        let len = self.layout.len;
        let mut pi = vec![false; len];
        let mut out = Vec::with_capacity(self.cycles.len() + 1);
        out.push(pi.clone());
        for row in &self.cycles {
            let mut next = vec![false; len];
            for j in 1..=len {
                let src = if j == 1 { false } else { pi[j - 2] };
                next[j - 1] = src ^ (row[j - 1] == Element::Inverter);
            }
            pi = next;
            out.push(pi.clone());
        }
        out
    }
}

/// Every transfer is a buffer.
pub fn plan_conventional(layout: &RegisterLayout, cycles: usize) -> ShiftPlan {
    ShiftPlan { layout: layout.clone(), cycles: vec![vec![Element::Buffer; layout.len]; cycles] }
}

/// Minimal-buffer plan.
///
/// Each value follows a diagonal through the register. Its path is cut into
/// segments by the points where its polarity is pinned: where it enters
/// (injection or initial load, both true polarity) and every tap it then
/// sits on. A segment with an even number of hops can be all inverters. One
/// with an odd number needs an odd number of buffers; a single one suffices
/// and is placed on the hop into the tap that closes the segment. Hops after
/// the last tap are unconstrained and use inverters. Adjacent taps form
/// one-hop segments and therefore always get a buffer.
pub fn plan_proposed(layout: &RegisterLayout, cycles: usize) -> Result<ShiftPlan, ScheduleError> {
    let len = layout.len;
    let mut plan = vec![vec![Element::Inverter; len]; cycles];
    // Values are indexed by origin o: the position they held at time 0, or
    // o <= 0 for values injected at shift 1 - o. At shift t such a value
    // moves into position o + t.
    let first_origin = 1 - cycles as i64;
    for o in first_origin..=(len as i64 - 1) {
        let mut start = o.max(0) as usize;
        // Positions the value reaches within the planned cycles.
        let first = start + 1;
        let last = ((o + cycles as i64).min(len as i64)) as usize;
        for j in first..=last {
            if layout.is_tap(j) {
                if (j - start) % 2 == 1 {
                    let t = (j as i64 - o) as usize;
                    plan[t - 1][j - 1] = Element::Buffer;
                }
                start = j;
            }
        }
    }
    let plan = ShiftPlan { layout: layout.clone(), cycles: plan };
    if let Err(v) = verify_polarity(&plan) {
        return Err(ScheduleError::Infeasible { name: layout.name.clone(), reason: v.to_string() });
    }
    Ok(plan)
}

/// Elements of the proposed plan for a single shift `t`, without building
/// the whole plan.
pub fn proposed_cycle(layout: &RegisterLayout, t: usize) -> Vec<Element> {
    let len = layout.len;
    (1..=len)
        .map(|j| {
            if !layout.is_tap(j) {
                return Element::Inverter;
            }
            let o = (j as i64 - t as i64).max(0) as usize;
            let start = layout.taps.range(o..j).next_back().copied().unwrap_or(o);
            if (j - start) % 2 == 1 {
                Element::Buffer
            } else {
                Element::Inverter
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("tap {position} holds a complemented value after shift {cycle}")]
pub struct PolarityViolation {
    pub cycle: usize,
    pub position: usize,
}

/// Checks that no tap is complemented after any planned shift.
pub fn verify_polarity(plan: &ShiftPlan) -> Result<(), PolarityViolation> {
    let map = plan.polarity_map();
    for (t, row) in map.iter().enumerate() {
        for &k in &plan.layout.taps {
            if row[k - 1] {
                return Err(PolarityViolation { cycle: t, position: k });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ElementCount {
    pub buffers: u64,
    pub inverters: u64,
}

impl ElementCount {
    pub fn steps(&self) -> u64 {
        self.buffers * Element::Buffer.steps() + self.inverters * Element::Inverter.steps()
    }
}

impl std::ops::Add for ElementCount {
    type Output = ElementCount;
    fn add(self, o: ElementCount) -> ElementCount {
        ElementCount { buffers: self.buffers + o.buffers, inverters: self.inverters + o.inverters }
    }
}

pub fn count_row(row: &[Element]) -> ElementCount {
    let buffers = row.iter().filter(|&&e| e == Element::Buffer).count() as u64;
    ElementCount { buffers, inverters: row.len() as u64 - buffers }
}

/// Totals over a 1-based inclusive cycle range.
pub fn count_elements(plan: &ShiftPlan, range: RangeInclusive<usize>) -> ElementCount {
    let (lo, hi) = (*range.start(), *range.end());
    assert!(lo >= 1 && hi <= plan.cycles.len(), "range outside plan");
    plan.cycles[lo - 1..hi].iter().map(|r| count_row(r)).fold(ElementCount::default(), |a, b| a + b)
}

/// Plan source for a running cipher. Proposed rows are cached up to the
/// steady cycle and reused after it.
#[derive(Clone, Debug)]
pub struct Scheduler {
    layout: RegisterLayout,
    mode: crate::ShiftMode,
    rows: Vec<Vec<Element>>,
}

impl Scheduler {
    pub fn new(layout: RegisterLayout, mode: crate::ShiftMode) -> Self {
        let rows = match mode {
            crate::ShiftMode::Conventional => vec![vec![Element::Buffer; layout.len]],
            crate::ShiftMode::Proposed => {
                (1..=layout.steady_cycle()).map(|t| proposed_cycle(&layout, t)).collect()
            }
        };
        Self { layout, mode, rows }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    /// Index into [`Scheduler::rows`] used for shift `t` (1-based).
    pub fn row_index(&self, t: usize) -> usize {
        match self.mode {
            crate::ShiftMode::Conventional => 0,
            crate::ShiftMode::Proposed => t.min(self.rows.len()) - 1,
        }
    }

    pub fn row(&self, t: usize) -> &[Element] {
        &self.rows[self.row_index(t)]
    }

    pub fn distinct_rows(&self) -> usize {
        self.rows.len()
    }
}
