//! Seeded uniform scheduler with a fairness window, producing replayable traces.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StamError};
use crate::model::System;

use super::universe::{Applied, MemberId, Move, MoveRecord, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StochasticConfig {
    pub seed: u64,
    pub max_steps: usize,
    /// Moves continuously enabled for this many steps are scheduled first;
    /// 0 disables fairness.
    pub fairness_window: usize,
}

impl Default for StochasticConfig {
    fn default() -> Self {
        StochasticConfig {
            seed: 0x5eed,
            max_steps: 10_000,
            fairness_window: 1000,
        }
    }
}

/// Per-step tile accounting.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accounting {
    /// Tiles drawn from the unbounded supply.
    pub consumed: usize,
    /// Size of the assembly produced by a combination.
    pub attached: usize,
    /// Sizes of the two parts of a break.
    pub detached: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    #[serde(rename = "move")]
    pub mv: MoveRecord,
    /// Ids of members created by this step, in creation order.
    pub created: Vec<MemberId>,
    pub accounting: Accounting,
    /// Whether the move was chosen by the fairness rule.
    pub forced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TraceHeader {
    seed: u64,
    max_steps: usize,
    fairness_window: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TraceFooter {
    steps: usize,
    final_hash: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub config: StochasticConfig,
    pub steps: Vec<StepRecord>,
    pub final_hash: u64,
}

impl Trace {
    pub fn total_consumed(&self) -> usize {
        self.steps.iter().map(|s| s.accounting.consumed).sum()
    }

    /// JSON lines: a header, one step per line, and a footer with the final hash.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        let header = TraceHeader {
            seed: self.config.seed,
            max_steps: self.config.max_steps,
            fairness_window: self.config.fairness_window,
        };
        writeln!(w, "{}", serde_json::to_string(&header)?)?;
        for s in &self.steps {
            writeln!(w, "{}", serde_json::to_string(s)?)?;
        }
        let footer = TraceFooter {
            steps: self.steps.len(),
            final_hash: self.final_hash,
        };
        writeln!(w, "{}", serde_json::to_string(&footer)?)?;
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Trace> {
        let mut lines = Vec::new();
        for line in r.lines() {
            let line = line?;
            if !line.trim().is_empty() {
                lines.push(line);
            }
        }
        if lines.len() < 2 {
            return Err(StamError::Parse("trace needs a header and a footer".into()));
        }
        let header: TraceHeader = serde_json::from_str(&lines[0])?;
        let footer: TraceFooter = serde_json::from_str(&lines[lines.len() - 1])?;
        let steps = lines[1..lines.len() - 1]
            .iter()
            .map(|l| serde_json::from_str(l))
            .collect::<std::result::Result<Vec<StepRecord>, _>>()?;
        if steps.len() != footer.steps {
            return Err(StamError::Parse(format!(
                "footer announces {} steps, found {}",
                footer.steps,
                steps.len()
            )));
        }
        Ok(Trace {
            config: StochasticConfig {
                seed: header.seed,
                max_steps: header.max_steps,
                fairness_window: header.fairness_window,
            },
            steps,
            final_hash: footer.final_hash,
        })
    }

    /// Re-applies every move from a fresh universe and checks the final hash.
    pub fn replay(&self, system: &System) -> Result<Universe> {
        let mut u = Universe::new(system);
        for s in &self.steps {
            let mv = u.resolve(&s.mv)?;
            let applied = u.apply(&mv)?;
            if applied.added != s.created {
                return Err(StamError::Unresolved(format!(
                    "step {} created {:?}, trace records {:?}",
                    s.step, applied.added, s.created
                )));
            }
        }
        if u.state_hash() != self.final_hash {
            return Err(StamError::Unresolved("final universe hash differs".into()));
        }
        Ok(u)
    }
}

/// An in-progress stochastic run that can be stepped and observed.
pub struct Simulation {
    pub universe: Universe,
    config: StochasticConfig,
    rng: ChaCha8Rng,
    step: usize,
    enabled_since: HashMap<Move, usize>,
    records: Vec<StepRecord>,
}

impl Simulation {
    pub fn new(system: &System, config: StochasticConfig) -> Self {
        Simulation::from_universe(Universe::new(system), config)
    }

    pub fn from_universe(universe: Universe, config: StochasticConfig) -> Self {
        Simulation {
            universe,
            config,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            step: 0,
            enabled_since: HashMap::new(),
            records: Vec::new(),
        }
    }

    pub fn steps_taken(&self) -> usize {
        self.step
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    /// Performs one move; `None` when nothing is enabled or the budget is spent.
    pub fn step(&mut self) -> Result<Option<&StepRecord>> {
        if self.step >= self.config.max_steps {
            return Ok(None);
        }
        let moves = self.universe.moves();
        if moves.is_empty() {
            return Ok(None);
        }
        let now = self.step;
        let mut since = HashMap::with_capacity(moves.len());
        for m in &moves {
            let s = self.enabled_since.get(m).copied().unwrap_or(now);
            since.insert(m.clone(), s);
        }
        self.enabled_since = since;
        let window = self.config.fairness_window;
        let overdue = if window > 0 {
            moves
                .iter()
                .enumerate()
                .filter(|(_, m)| now - self.enabled_since[*m] >= window)
                .min_by_key(|(i, m)| (self.enabled_since[*m], *i))
                .map(|(i, _)| i)
        } else {
            None
        };
        let forced = overdue.is_some();
        let pick = overdue.unwrap_or_else(|| self.rng.gen_range(0..moves.len()));
        let mv = &moves[pick];
        let rec = self.universe.record(mv);
        let sizes_before: Vec<usize> = match mv {
            Move::Break { member, .. } => {
                vec![self.universe.member(*member).map_or(0, |a| a.len())]
            }
            _ => Vec::new(),
        };
        let applied: Applied = self.universe.apply(mv)?;
        self.enabled_since.remove(mv);
        let sizes: Vec<usize> = applied
            .added
            .iter()
            .map(|id| self.universe.member(*id).map_or(0, |a| a.len()))
            .collect();
        let accounting = match mv {
            Move::Combine { .. } => Accounting {
                consumed: applied.consumed,
                attached: sizes.first().copied().unwrap_or(0),
                detached: Vec::new(),
            },
            Move::Break { .. } => {
                debug_assert_eq!(sizes.iter().sum::<usize>(), sizes_before[0]);
                Accounting {
                    consumed: 0,
                    attached: 0,
                    detached: sizes,
                }
            }
            Move::Action { .. } => Accounting::default(),
        };
        self.records.push(StepRecord {
            step: now,
            mv: rec,
            created: applied.added,
            accounting,
            forced,
        });
        self.step += 1;
        Ok(self.records.last())
    }

    /// Steps until the budget is spent, no move is enabled, or `stop` holds.
    pub fn run_until(&mut self, mut stop: impl FnMut(&Simulation) -> bool) -> Result<()> {
        loop {
            if stop(self) {
                return Ok(());
            }
            if self.step()?.is_none() {
                return Ok(());
            }
        }
    }

    pub fn into_trace(self) -> (Trace, Universe) {
        let trace = Trace {
            config: self.config,
            steps: self.records,
            final_hash: self.universe.state_hash(),
        };
        (trace, self.universe)
    }
}

/// Runs to `max_steps` or until no move is enabled.
pub fn run_stochastic(system: &System, config: StochasticConfig) -> Result<Trace> {
    let mut sim = Simulation::new(system, config);
    sim.run_until(|_| false)?;
    Ok(sim.into_trace().0)
}
