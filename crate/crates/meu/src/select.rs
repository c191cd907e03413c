use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use bdi::{AgentView, IntentionId, IntentionSummary, SelectionStrategy};
use pgm::InfluenceDiagram;

use crate::class::{ClassSet, IntentionClass};
use crate::evidence::{extract_evidence, step_of, EvidenceRow};
use crate::policy::{decide, CompiledPolicy};

/// One intention-selection decision as seen by the selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision {
    /// Environment step from the agent's `step/1` belief.
    pub step: u64,
    pub cycle: u64,
    pub evidence: EvidenceRow,
    pub available: ClassSet,
    pub class: IntentionClass,
}

pub type DecisionLog = Arc<Mutex<Vec<Decision>>>;

#[derive(Clone, Debug)]
pub enum Mode {
    /// Front of the rotation; classes are only recorded.
    RoundRobin,
    Compiled(Arc<CompiledPolicy>),
    /// Solves the diagram on every call.
    Online(Arc<InfluenceDiagram>),
}

/// Intention selection by class. The class comes from the mode; within the
/// class, the least recently selected intention runs.
pub struct ClassSelector {
    mode: Mode,
    last: BTreeMap<IntentionId, u64>,
    tick: u64,
    log: Option<DecisionLog>,
}

impl ClassSelector {
    pub fn new(mode: Mode) -> Self {
        ClassSelector { mode, last: BTreeMap::new(), tick: 0, log: None }
    }

    pub fn compiled(policy: Arc<CompiledPolicy>) -> Self {
        Self::new(Mode::Compiled(policy))
    }

    pub fn online(diagram: Arc<InfluenceDiagram>) -> Self {
        Self::new(Mode::Online(diagram))
    }

    pub fn round_robin() -> Self {
        Self::new(Mode::RoundRobin)
    }

    pub fn with_log(mut self, log: DecisionLog) -> Self {
        self.log = Some(log);
        self
    }

    fn choose_class(&self, evidence: EvidenceRow, available: ClassSet) -> Option<IntentionClass> {
        match &self.mode {
            Mode::RoundRobin => None,
            Mode::Compiled(p) => p.lookup(evidence, available),
            Mode::Online(id) => decide(id, evidence, available).ok(),
        }
    }
}

impl SelectionStrategy for ClassSelector {
    fn select_intention(&mut self, active: &[IntentionSummary], view: &AgentView) -> usize {
        let classes: Vec<IntentionClass> = active.iter().map(IntentionClass::classify).collect();
        let available: ClassSet = classes.iter().copied().collect();
        let evidence = extract_evidence(view);
        let chosen = if active.len() > 1 { self.choose_class(evidence, available) } else { None };
        let pick = match chosen {
            None => 0,
            Some(c) => (0..active.len())
                .filter(|&k| classes[k] == c)
                .min_by_key(|&k| self.last.get(&active[k].id).copied().unwrap_or(0))
                .unwrap_or(0),
        };
        self.tick += 1;
        self.last.insert(active[pick].id, self.tick);
        if self.last.len() > 4 * view.intentions.len() + 16 {
            let live: Vec<IntentionId> = view.intentions.iter().map(|i| i.id).collect();
            self.last.retain(|id, _| live.contains(id));
        }
        if let Some(log) = &self.log {
            log.lock().expect("decision log").push(Decision {
                step: step_of(view.beliefs).unwrap_or(0),
                cycle: view.cycle,
                evidence,
                available,
                class: classes[pick],
            });
        }
        pick
    }

    fn name(&self) -> &str {
        match self.mode {
            Mode::RoundRobin => "rr",
            Mode::Compiled(_) => "meu",
            Mode::Online(_) => "meu-online",
        }
    }
}
