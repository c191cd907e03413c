//! A single seeded run: two teams in one world, stepped in lockstep.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use asl::{Literal, Term};
use bdi::{Agent, Message, NoHost, SelectionStrategy};
use meu_select::{
    build_default_diagram, collect_traces, compile_policy, ClassSelector, CompiledPolicy, DecisionLog, TraceRecord,
    HORIZON,
};
use miners_sim::{load_scenario, Action, ScenarioConfig};
use pgm::InfluenceDiagram;
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::host::{blocked_cells, AgentNav, WorldHost};
use crate::protocol::LoggedMessage;
use crate::team::{team_spec, AuctionParams, Condition, Programs, Role, SelectorKind, TeamKind};

/// Reasoning cycles an agent may spend per environment step.
pub const CYCLE_CAP: usize = 10;

/// The diagram and its compiled policy, shared by every MEU agent.
#[derive(Clone, Debug)]
pub struct Models {
    pub diagram: Arc<InfluenceDiagram>,
    pub policy: Arc<CompiledPolicy>,
}

impl Models {
    pub fn new(diagram: InfluenceDiagram, policy: CompiledPolicy) -> Result<Self> {
        if !policy.matches(&diagram) {
            return Err(HarnessError::Invalid("policy was compiled from a different model".into()));
        }
        Ok(Models { diagram: Arc::new(diagram), policy: Arc::new(policy) })
    }

    /// The shipped diagram with its policy compiled in memory.
    pub fn builtin() -> Self {
        let diagram = build_default_diagram();
        let policy = compile_policy(&diagram, 0).expect("shipped model compiles");
        Models { diagram: Arc::new(diagram), policy: Arc::new(policy) }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    /// Team 0.
    pub condition: Condition,
    /// Every other team.
    pub opponent: Condition,
    pub epsilon: f64,
    pub seed: u64,
    pub steps: u64,
    pub auction: AuctionParams,
    /// Keep the per-cycle trace log.
    pub trace: bool,
    pub record_messages: bool,
    /// Keep decision traces for fitting.
    pub record_decisions: bool,
}

impl RunConfig {
    pub fn new(scenario: ScenarioConfig, condition: Condition, epsilon: f64, seed: u64) -> Self {
        let steps = scenario.steps;
        RunConfig {
            scenario,
            condition,
            opponent: Condition::new(TeamKind::Dummy, SelectorKind::RoundRobin),
            epsilon,
            seed,
            steps,
            auction: AuctionParams::default(),
            trace: false,
            record_messages: false,
            record_decisions: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub condition: String,
    pub epsilon: f64,
    pub seed: u64,
    /// Final score per team; team 0 runs the condition.
    pub scores: Vec<u32>,
    pub steps: u64,
    pub wall_ms: f64,
}

impl RunRecord {
    pub fn score(&self) -> u32 {
        self.scores[0]
    }

    /// Equal up to wall time.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        RunRecord { wall_ms: 0.0, ..self.clone() } == RunRecord { wall_ms: 0.0, ..other.clone() }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub record: RunRecord,
    /// Tab-separated, one line per reasoning cycle; empty unless asked for.
    pub trace: String,
    pub messages: Vec<LoggedMessage>,
    pub decisions: Vec<TraceRecord>,
    /// Final world picture.
    pub snapshot: String,
    pub initial_gold: u32,
}

struct Slot {
    agent: Agent,
    team: usize,
    /// Index in the world; `None` for a leader without a body.
    body: Option<usize>,
    ordinal: usize,
    miners: usize,
    nav: AgentNav,
    log: DecisionLog,
}

fn selector(kind: SelectorKind, models: &Models, log: DecisionLog) -> Box<dyn SelectionStrategy + Send> {
    let s = match kind {
        SelectorKind::RoundRobin => ClassSelector::round_robin(),
        SelectorKind::Meu => ClassSelector::compiled(models.policy.clone()),
        SelectorKind::MeuOnline => ClassSelector::online(models.diagram.clone()),
    };
    Box::new(s.with_log(log))
}

pub const TRACE_HEADER: &str = "step\tagent\tcycle\tevent\tintention\taction";

/// Runs one game. Every random choice comes from `cfg.seed`, so two calls
/// with the same config give the same record, trace and messages.
pub fn run_single(cfg: &RunConfig, models: &Models) -> Result<RunOutput> {
    let team_programs = |c: Condition| Programs::builtin(c.team);
    run_with_programs(cfg, models, &team_programs(cfg.condition)?, &team_programs(cfg.opponent)?)
}

pub fn run_with_programs(cfg: &RunConfig, models: &Models, own: &Programs, other: &Programs) -> Result<RunOutput> {
    if !(0.0..=1.0).contains(&cfg.epsilon) {
        return Err(HarnessError::Invalid(format!("epsilon must be in [0,1], got {}", cfg.epsilon)));
    }
    let started = Instant::now();
    let scenario = ScenarioConfig { seed: cfg.seed, ..cfg.scenario.with_epsilon(cfg.epsilon) };
    let mut world = load_scenario(&scenario)?;
    let teams = world.depots().len();
    let conditions: Vec<Condition> = (0..teams).map(|t| if t == 0 { cfg.condition } else { cfg.opponent }).collect();

    let mut sizes = vec![0usize; teams];
    for a in world.agents() {
        sizes[a.team] += 1;
    }
    let specs = (0..teams)
        .map(|t| team_spec(conditions[t].team, sizes[t], if t == 0 { own } else { other }, cfg.auction))
        .collect::<Result<Vec<_>>>()?;

    // bodies first, in world order, then the bodiless leaders
    let mut seen = vec![0usize; teams];
    let mut slots = Vec::with_capacity(world.agents().len() + teams);
    let new_slot = |t: usize, k: usize, body: Option<usize>| {
        let member = &specs[t].members[k];
        let log: DecisionLog = Arc::new(Mutex::new(Vec::new()));
        Slot {
            agent: Agent::new(
                member.name.clone(),
                &member.program,
                selector(conditions[t].selector, models, log.clone()),
            ),
            team: t,
            body,
            ordinal: k,
            miners: sizes[t],
            nav: AgentNav::default(),
            log,
        }
    };
    for (i, a) in world.agents().iter().enumerate() {
        let k = seen[a.team];
        seen[a.team] += 1;
        slots.push(new_slot(a.team, k, Some(i)));
    }
    for (t, spec) in specs.iter().enumerate() {
        for (k, m) in spec.members.iter().enumerate() {
            if m.role == Role::Leader {
                slots.push(new_slot(t, k, None));
            }
        }
    }

    let mut trace = String::new();
    if cfg.trace {
        trace.push_str(TRACE_HEADER);
        trace.push('\n');
    }
    let mut messages = Vec::new();
    let mut history: Vec<Vec<u32>> = vec![world.scores().to_vec()];
    let runtime = |e: bdi::RuntimeError| HarnessError::Runtime(e.to_string());

    for step in 0..cfg.steps {
        let mut blocked = Vec::with_capacity(slots.len());
        for slot in slots.iter_mut() {
            let p = match slot.body {
                Some(i) => world.perceive(i).literals,
                None => BTreeSet::from([step_literal(world.step())]),
            };
            blocked.push(blocked_cells(&p));
            slot.agent.perceive(p);
        }
        let mut joint = vec![Action::Skip; world.agents().len()];
        let mut pending = vec![false; world.agents().len()];
        for (j, slot) in slots.iter_mut().enumerate() {
            let reports = match slot.body {
                Some(i) => {
                    let mut host = WorldHost {
                        world: &world,
                        me: i,
                        ordinal: slot.ordinal,
                        miners: slot.miners,
                        nav: &mut slot.nav,
                        blocked: &blocked[j],
                    };
                    slot.agent.run_until_action(&mut host, CYCLE_CAP).map_err(runtime)?
                }
                None => slot.agent.run_until_action(&mut NoHost, CYCLE_CAP).map_err(runtime)?,
            };
            if cfg.trace {
                for r in &reports {
                    let event = r.event.as_ref().map_or("-".to_owned(), |e| e.to_string());
                    let intention = r.intention.map_or("-".to_owned(), |i| i.to_string());
                    let action = r.action.as_ref().map_or("-".to_owned(), |a| a.to_string());
                    let _ =
                        writeln!(trace, "{step}\t{}\t{}\t{event}\t{intention}\t{action}", slot.agent.name(), r.cycle);
                }
            }
            if let Some(lit) = reports.last().and_then(|r| r.action.as_ref()) {
                match slot.body.zip(Action::from_literal(lit)) {
                    Some((i, a)) => {
                        joint[i] = a;
                        pending[i] = true;
                    }
                    None => slot.agent.action_outcome(false).map_err(runtime)?,
                }
            }
        }
        route_messages(&mut slots, step, cfg.record_messages.then_some(&mut messages));
        let outcomes = world.apply_actions(&joint).map_err(|e| HarnessError::Runtime(e.to_string()))?;
        for slot in slots.iter_mut() {
            if let Some(i) = slot.body.filter(|&i| pending[i]) {
                slot.agent.action_outcome(outcomes[i].success).map_err(runtime)?;
            }
        }
        history.push(world.scores().to_vec());
    }

    let mut decisions = Vec::new();
    if cfg.record_decisions {
        for slot in &slots {
            let team_scores: Vec<u32> = history.iter().map(|s| s[slot.team]).collect();
            let log = slot.log.lock().expect("decision log");
            decisions.extend(collect_traces(&log, &team_scores, HORIZON));
        }
    }
    let record = RunRecord {
        condition: cfg.condition.to_string(),
        epsilon: cfg.epsilon,
        seed: cfg.seed,
        scores: world.scores().to_vec(),
        steps: world.step(),
        wall_ms: started.elapsed().as_secs_f64() * 1000.0,
    };
    Ok(RunOutput { record, trace, messages, decisions, snapshot: world.snapshot(), initial_gold: world.initial_gold() })
}

fn step_literal(step: u64) -> Literal {
    Literal::new(Term::compound("step", vec![Term::int(step as i64)]))
}

/// Delivers every outgoing message to teammates; a broadcast skips the sender.
fn route_messages(slots: &mut [Slot], step: u64, mut log: Option<&mut Vec<LoggedMessage>>) {
    let mut queue: Vec<(usize, Option<String>, Message)> = Vec::new();
    for slot in slots.iter_mut() {
        for out in slot.agent.take_outbox() {
            queue.push((slot.team, out.to, out.message));
        }
    }
    for (team, to, message) in queue {
        if let Some(log) = log.as_deref_mut() {
            log.push(LoggedMessage {
                step,
                team,
                from: message.sender.clone(),
                to: to.clone(),
                message: message.clone(),
            });
        }
        for slot in slots.iter_mut().filter(|s| s.team == team) {
            let name = slot.agent.name();
            let hit = match &to {
                Some(n) => n == name,
                None => name != message.sender,
            };
            if hit {
                slot.agent.deliver(message.clone());
            }
        }
    }
}
