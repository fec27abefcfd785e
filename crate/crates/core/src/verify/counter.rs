//! Audit of detached counter lines reattaching to growing assemblies.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    combine, enumerate_breaks, enumerate_combinations, MoveRecord, Trace, Universe,
    DEFAULT_BREAK_BOUND,
};
use crate::error::Result;
use crate::model::{Assembly, System};

use super::pattern::check_column_shape;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReattachmentAudit {
    /// Distinct detached lines (up to translation) harvested from the traces.
    pub lines: usize,
    /// Distinct multi-column assemblies the lines were tried against.
    pub hosts: usize,
    /// Distinct assemblies formed by a line binding to a host.
    pub reattachments: usize,
    /// Reattachments with no enabled move against the supply.
    pub terminal: usize,
}

fn columns(a: &Assembly) -> usize {
    a.tiles.keys().map(|p| p.x).collect::<BTreeSet<_>>().len()
}

fn has_move(system: &System, a: &Assembly, partners: &[Assembly]) -> bool {
    let ts = &system.tileset;
    let tau = system.temperature;
    a.has_pending()
        || !enumerate_breaks(ts, a, tau, DEFAULT_BREAK_BOUND).is_empty()
        || partners
            .iter()
            .any(|b| !enumerate_combinations(ts, a, b, tau).is_empty())
}

/// Harvests every detached `n`-tile line and every multi-column assembly
/// seen while replaying `traces`, forms every binding of a line onto such a
/// host, and checks that each result still has an enabled move (pending
/// action, break, or binding with a supply tile or another line).
pub fn reattachment_audit(
    system: &System,
    traces: &[Trace],
    n: usize,
) -> Result<ReattachmentAudit> {
    let mut lines: BTreeMap<Vec<u8>, Assembly> = BTreeMap::new();
    let mut hosts: BTreeMap<Vec<u8>, Assembly> = BTreeMap::new();
    for trace in traces {
        let mut u = Universe::new(system);
        for s in &trace.steps {
            let mv = u.resolve(&s.mv)?;
            let applied = u.apply(&mv)?;
            for id in &applied.added {
                let Some(a) = u.member(*id) else { continue };
                if matches!(s.mv, MoveRecord::Break { .. }) && check_column_shape(a, n) {
                    let c = a.canonical();
                    lines.insert(c.encode(), c);
                } else if columns(a) > 1 {
                    let c = a.canonical();
                    hosts.insert(c.encode(), c);
                }
            }
        }
    }
    let mut partners: Vec<Assembly> = system.initial.clone();
    partners.extend(lines.values().cloned());
    let ts = &system.tileset;
    let mut formed: BTreeMap<Vec<u8>, bool> = BTreeMap::new();
    for line in lines.values() {
        for host in hosts.values() {
            for v in enumerate_combinations(ts, host, line, system.temperature) {
                let r = combine(ts, host, line, v, system.temperature)?.canonical();
                let key = r.encode();
                if !formed.contains_key(&key) {
                    let live = has_move(system, &r, &partners);
                    formed.insert(key, live);
                }
            }
        }
    }
    Ok(ReattachmentAudit {
        lines: lines.len(),
        hosts: hosts.len(),
        reattachments: formed.len(),
        terminal: formed.values().filter(|live| !**live).count(),
    })
}
