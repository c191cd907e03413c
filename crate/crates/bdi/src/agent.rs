//! The reasoning cycle.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use asl::{
    unify, unify_literals, AgentProgram, BodyStep, Literal, Plan, Substitution, Term, Trigger, TriggerKind, TriggerOp,
};

use crate::beliefs::{BeliefBase, Source};
use crate::error::RuntimeError;
use crate::intention::{
    Event, Frame, Intention, IntentionId, IntentionSummary, Message, Outgoing, Performative, Status,
};
use crate::options::{generate_options, is_relevant};
use crate::strategy::{AgentView, SelectionStrategy};

/// Internal actions provided by the environment (`.next_step`, ...).
pub trait Host {
    /// Returns one term per argument, unified with the arguments by the
    /// engine, or `None` when the action fails.
    fn call(&mut self, agent: &str, name: &str, args: &[Term]) -> Option<Vec<Term>>;
}

/// A host without any internal actions.
pub struct NoHost;

impl Host for NoHost {
    fn call(&mut self, _: &str, _: &str, _: &[Term]) -> Option<Vec<Term>> {
        None
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub cycles: u64,
    /// External events dropped because no plan is relevant for them.
    pub events_irrelevant: u64,
    /// Selected events for which no plan was applicable.
    pub events_no_applicable: u64,
    pub intentions_completed: u64,
    pub intentions_dropped: u64,
    pub action_failures: u64,
    pub step_failures: u64,
    pub messages: u64,
}

/// What happened in one cycle.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CycleReport {
    pub cycle: u64,
    pub message: Option<Message>,
    pub event: Option<Trigger>,
    pub intention: Option<IntentionId>,
    pub action: Option<Literal>,
}

impl CycleReport {
    pub fn is_idle(&self) -> bool {
        self.message.is_none() && self.event.is_none() && self.intention.is_none()
    }
}

pub struct Agent {
    name: String,
    plans: Vec<Plan>,
    beliefs: BeliefBase,
    events: VecDeque<Event>,
    intentions: BTreeMap<IntentionId, Intention>,
    /// Round-robin order of live intentions; the executed one moves to the back.
    rotation: VecDeque<IntentionId>,
    inbox: VecDeque<Message>,
    outbox: Vec<Outgoing>,
    percepts: Option<BTreeSet<Literal>>,
    pending_action: Option<IntentionId>,
    cycle: u64,
    /// Counts `perceive` calls; `.wait` is measured in epochs.
    epoch: u64,
    next_id: IntentionId,
    next_tag: u64,
    strategy: Box<dyn SelectionStrategy + Send>,
    stats: Stats,
    printed: Vec<String>,
}

impl std::fmt::Debug for Agent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Agent")
            .field("name", &self.name)
            .field("cycle", &self.cycle)
            .field("beliefs", &self.beliefs.len())
            .field("intentions", &self.intentions.len())
            .field("strategy", &self.strategy.name())
            .finish()
    }
}

impl Agent {
    /// Initial beliefs are added silently; initial goals become external events.
    pub fn new(name: impl Into<String>, program: &AgentProgram, strategy: Box<dyn SelectionStrategy + Send>) -> Self {
        let mut agent = Agent {
            name: name.into(),
            plans: program.plans.clone(),
            beliefs: BeliefBase::new(),
            events: VecDeque::new(),
            intentions: BTreeMap::new(),
            rotation: VecDeque::new(),
            inbox: VecDeque::new(),
            outbox: Vec::new(),
            percepts: None,
            pending_action: None,
            cycle: 0,
            epoch: 0,
            next_id: 1,
            next_tag: 1,
            strategy,
            stats: Stats::default(),
            printed: Vec::new(),
        };
        for b in &program.beliefs {
            agent.beliefs.add(b.clone(), Source::Mental);
        }
        for g in &program.goals {
            agent.post_external(Trigger::achieve(g.clone()));
        }
        agent
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn beliefs(&self) -> &BeliefBase {
        &self.beliefs
    }

    pub fn plans(&self) -> &[Plan] {
        &self.plans
    }

    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.events.iter()
    }

    pub fn intention(&self, id: IntentionId) -> Option<&Intention> {
        self.intentions.get(&id)
    }

    /// Live intentions in rotation order.
    pub fn intentions(&self) -> impl Iterator<Item = &Intention> {
        self.rotation.iter().map(|id| &self.intentions[id])
    }

    pub fn summaries(&self) -> Vec<IntentionSummary> {
        self.intentions().map(Intention::summary).collect()
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn printed(&self) -> &[String] {
        &self.printed
    }

    pub fn strategy_name(&self) -> &str {
        self.strategy.name()
    }

    pub fn awaiting_action(&self) -> bool {
        self.pending_action.is_some()
    }

    pub fn inbox_len(&self) -> usize {
        self.inbox.len()
    }

    /// Fresh percepts, revised into the belief base on the next cycle.
    /// Also starts a new epoch for `.wait`.
    pub fn perceive(&mut self, percepts: BTreeSet<Literal>) {
        self.epoch += 1;
        self.percepts = Some(percepts);
    }

    pub fn deliver(&mut self, message: Message) {
        self.inbox.push_back(message);
    }

    pub fn take_outbox(&mut self) -> Vec<Outgoing> {
        std::mem::take(&mut self.outbox)
    }

    /// Reports the outcome of the last emitted environment action.
    pub fn action_outcome(&mut self, success: bool) -> Result<(), RuntimeError> {
        let id = self.pending_action.take().ok_or_else(|| RuntimeError::NoPendingAction(self.name.clone()))?;
        if !self.intentions.contains_key(&id) {
            return Ok(());
        }
        if success {
            let s = self.intentions[&id].top().expect("suspended frame").subst.clone();
            self.advance(id, s);
        } else {
            self.stats.action_failures += 1;
            self.fail(id);
        }
        Ok(())
    }

    /// Runs cycles until one emits an environment action, at most `cap`
    /// cycles and at least one. Stops early once the agent is idle.
    pub fn run_until_action(&mut self, host: &mut dyn Host, cap: usize) -> Result<Vec<CycleReport>, RuntimeError> {
        let mut out = Vec::new();
        for _ in 0..cap.max(1) {
            let report = self.step_cycle(host)?;
            let stop = report.action.is_some() || (report.is_idle() && self.is_quiescent());
            out.push(report);
            if stop {
                break;
            }
        }
        Ok(out)
    }

    /// True when further cycles cannot do anything until new input arrives.
    pub fn is_quiescent(&self) -> bool {
        self.inbox.is_empty()
            && self.events.is_empty()
            && self.percepts.is_none()
            && self.intentions.values().all(|i| {
                i.status != Status::Active && !matches!(i.status, Status::Waiting { until } if until <= self.epoch)
            })
    }

    /// One pass of the cycle: at most one message, BRF, at most one event
    /// turned into an intention, at most one body step.
    pub fn step_cycle(&mut self, host: &mut dyn Host) -> Result<CycleReport, RuntimeError> {
        self.cycle += 1;
        self.stats.cycles += 1;
        let mut report = CycleReport { cycle: self.cycle, ..Default::default() };

        for i in self.intentions.values_mut() {
            if let Status::Waiting { until } = i.status {
                if until <= self.epoch {
                    i.status = Status::Active;
                }
            }
        }

        if !self.inbox.is_empty() {
            let inbox: Vec<Message> = self.inbox.iter().cloned().collect();
            let summaries = self.summaries();
            let view =
                AgentView { name: &self.name, beliefs: &self.beliefs, intentions: &summaries, cycle: self.cycle };
            let k = self.strategy.select_message(&inbox, &view);
            self.check("message", k, inbox.len())?;
            let msg = self.inbox.remove(k).expect("in range");
            self.handle_message(&msg);
            report.message = Some(msg);
        }

        if let Some(percepts) = self.percepts.take() {
            for t in self.beliefs.revise(&percepts) {
                self.post_external(t);
            }
        }

        if !self.events.is_empty() {
            let events: Vec<Event> = self.events.iter().cloned().collect();
            let summaries = self.summaries();
            let view =
                AgentView { name: &self.name, beliefs: &self.beliefs, intentions: &summaries, cycle: self.cycle };
            let k = self.strategy.select_event(&events, &view);
            self.check("event", k, events.len())?;
            let event = self.events.remove(k).expect("in range");
            report.event = Some(event.trigger.clone());
            self.handle_event(event)?;
        }

        let summaries = self.summaries();
        let active: Vec<IntentionSummary> =
            summaries.iter().filter(|s| self.intentions[&s.id].status == Status::Active).cloned().collect();
        if !active.is_empty() {
            let view =
                AgentView { name: &self.name, beliefs: &self.beliefs, intentions: &summaries, cycle: self.cycle };
            let k = self.strategy.select_intention(&active, &view);
            self.check("intention", k, active.len())?;
            let id = active[k].id;
            self.rotation.retain(|&x| x != id);
            self.rotation.push_back(id);
            report.intention = Some(id);
            report.action = self.execute(id, host);
        }
        Ok(report)
    }

    fn check(&self, choice: &'static str, index: usize, len: usize) -> Result<(), RuntimeError> {
        if index < len {
            Ok(())
        } else {
            Err(RuntimeError::StrategyFault { agent: self.name.clone(), choice, index, len })
        }
    }

    fn post_external(&mut self, trigger: Trigger) {
        if is_relevant(&trigger, &self.plans) {
            self.events.push_back(Event::external(trigger));
        } else {
            self.stats.events_irrelevant += 1;
        }
    }

    fn handle_message(&mut self, msg: &Message) {
        self.stats.messages += 1;
        match msg.performative {
            Performative::Tell => {
                if msg.content.is_ground() && self.beliefs.add(msg.content.clone(), Source::Told(msg.sender.clone())) {
                    self.post_external(Trigger::add_belief(msg.content.clone()));
                }
            }
            Performative::Achieve => self.post_external(Trigger::achieve(msg.content.clone())),
        }
    }

    fn handle_event(&mut self, event: Event) -> Result<(), RuntimeError> {
        let tag = self.next_tag;
        self.next_tag += 1;
        let options = generate_options(&event.trigger, &self.beliefs, &self.plans, tag);
        if options.is_empty() {
            self.stats.events_no_applicable += 1;
            if let Some(id) = event.intention {
                self.subgoal_failed(id, &event.trigger);
            }
            return Ok(());
        }
        let summaries = self.summaries();
        let view = AgentView { name: &self.name, beliefs: &self.beliefs, intentions: &summaries, cycle: self.cycle };
        let k = self.strategy.select_option(&options, &view);
        self.check("option", k, options.len())?;
        let chosen = options.into_iter().nth(k).expect("in range");
        let frame = Frame { trigger: event.trigger, plan: chosen.plan, subst: chosen.subst, cursor: 0 };
        let id = match event.intention {
            Some(id) if self.intentions.contains_key(&id) => {
                let i = self.intentions.get_mut(&id).expect("live");
                if is_tail_call(i, &frame.trigger) {
                    i.frames.pop();
                }
                i.frames.push(frame);
                i.status = Status::Active;
                id
            }
            Some(_) => return Ok(()),
            None => {
                let id = self.next_id;
                self.next_id += 1;
                self.intentions.insert(id, Intention { id, frames: vec![frame], status: Status::Active });
                self.rotation.push_back(id);
                id
            }
        };
        self.complete(id);
        Ok(())
    }

    /// A posted subgoal found no applicable plan.
    fn subgoal_failed(&mut self, id: IntentionId, trigger: &Trigger) {
        match (trigger.op, trigger.kind) {
            (TriggerOp::Add, TriggerKind::Achieve) => {
                let recovery = Trigger::new(TriggerOp::Delete, TriggerKind::Achieve, trigger.literal.clone());
                self.recover_or_drop(id, recovery);
            }
            (TriggerOp::Add, TriggerKind::Test) => self.fail(id),
            _ => self.drop_intention(id),
        }
    }

    /// Failure of the top frame's current step: unwind to the nearest
    /// achievement-goal frame and post its `-!g`, or drop the intention.
    fn fail(&mut self, id: IntentionId) {
        self.stats.step_failures += 1;
        let Some(i) = self.intentions.get_mut(&id) else { return };
        let pos =
            i.frames.iter().rposition(|f| f.trigger.op == TriggerOp::Add && f.trigger.kind == TriggerKind::Achieve);
        match pos {
            None => self.drop_intention(id),
            Some(p) => {
                let f = &i.frames[p];
                let goal = f.subst.apply_literal(&f.plan.trigger.literal);
                i.frames.truncate(p);
                let recovery = Trigger::new(TriggerOp::Delete, TriggerKind::Achieve, goal);
                self.recover_or_drop(id, recovery);
            }
        }
    }

    fn recover_or_drop(&mut self, id: IntentionId, recovery: Trigger) {
        if is_relevant(&recovery, &self.plans) {
            if let Some(i) = self.intentions.get_mut(&id) {
                i.status = Status::AwaitingSubgoal;
                self.events.push_back(Event { trigger: recovery, intention: Some(id) });
            }
        } else {
            self.drop_intention(id);
        }
    }

    fn drop_intention(&mut self, id: IntentionId) {
        if self.intentions.remove(&id).is_some() {
            self.stats.intentions_dropped += 1;
            self.rotation.retain(|&x| x != id);
            if self.pending_action == Some(id) {
                self.pending_action = None;
            }
        }
    }

    /// Moves the top frame past its current step with bindings `s`, then
    /// pops completed frames.
    fn advance(&mut self, id: IntentionId, s: Substitution) {
        let Some(i) = self.intentions.get_mut(&id) else { return };
        let top = i.top_mut().expect("non-empty stack");
        top.subst = s;
        top.cursor += 1;
        i.status = Status::Active;
        self.complete(id);
    }

    /// Pops finished frames, returning bindings to the caller's subgoal step.
    /// Removes the intention when its stack empties.
    fn complete(&mut self, id: IntentionId) {
        let Some(i) = self.intentions.get_mut(&id) else { return };
        while i.top().is_some_and(Frame::is_done) {
            let done = i.frames.pop().expect("top");
            let Some(caller) = i.frames.last_mut() else { break };
            if done.trigger.op == TriggerOp::Add {
                let result = done.subst.apply_literal(&done.plan.trigger.literal);
                if let Some(BodyStep::Achieve(l) | BodyStep::Test(l)) = caller.current() {
                    if let Some(s) = unify_literals(l, &result, &caller.subst) {
                        caller.subst = s;
                    }
                }
            }
            caller.cursor += 1;
        }
        if i.frames.is_empty() {
            self.intentions.remove(&id);
            self.rotation.retain(|&x| x != id);
            self.stats.intentions_completed += 1;
        }
    }

    fn execute(&mut self, id: IntentionId, host: &mut dyn Host) -> Option<Literal> {
        let frame = self.intentions[&id].top().expect("active intention has a frame");
        let step = frame.current().expect("completed frames are popped").clone();
        let s = frame.subst.clone();
        match step {
            BodyStep::Action(l) => {
                let a = s.apply_literal(&l);
                if !a.is_ground() {
                    self.fail(id);
                    return None;
                }
                self.intentions.get_mut(&id).expect("live").status = Status::AwaitingAction;
                self.pending_action = Some(id);
                return Some(a);
            }
            BodyStep::Achieve(l) => {
                let t = Trigger::achieve(s.apply_literal(&l));
                self.post_subgoal(id, t);
            }
            BodyStep::Test(l) => match self.beliefs.first_match(&l, &s) {
                Some((_, s2)) => self.advance(id, s2),
                None => {
                    let t = Trigger::new(TriggerOp::Add, TriggerKind::Test, s.apply_literal(&l));
                    self.post_subgoal(id, t);
                }
            },
            BodyStep::AddBelief(l) => {
                let b = s.apply_literal(&l);
                if !b.is_ground() {
                    self.fail(id);
                    return None;
                }
                if self.beliefs.add(b.clone(), Source::Mental) {
                    self.post_external(Trigger::add_belief(b));
                }
                self.advance(id, s);
            }
            BodyStep::DelBelief(l) => match self.beliefs.first_match(&l, &s) {
                Some((b, s2)) => {
                    self.beliefs.remove(&b);
                    self.post_external(Trigger::del_belief(b));
                    self.advance(id, s2);
                }
                None => self.advance(id, s),
            },
            BodyStep::Internal { name, args } => match self.internal(&name, &args, &s, host) {
                Some(s2) => {
                    self.advance(id, s2);
                    if name == "wait" {
                        self.start_wait(id, &args, &s);
                    }
                }
                None => self.fail(id),
            },
        }
        None
    }

    fn post_subgoal(&mut self, id: IntentionId, t: Trigger) {
        if is_relevant(&t, &self.plans) {
            self.intentions.get_mut(&id).expect("live").status = Status::AwaitingSubgoal;
            self.events.push_back(Event { trigger: t, intention: Some(id) });
        } else if t.kind == TriggerKind::Achieve {
            self.subgoal_failed(id, &t);
        } else {
            self.fail(id);
        }
    }

    fn start_wait(&mut self, id: IntentionId, args: &[Term], s: &Substitution) {
        let n = args.first().and_then(|a| s.apply(a).as_int()).unwrap_or(0);
        if n > 0 {
            if let Some(i) = self.intentions.get_mut(&id) {
                i.status = Status::Waiting { until: self.epoch + n as u64 };
            }
        }
    }

    /// Runs an internal action; `None` is failure.
    fn internal(&mut self, name: &str, args: &[Term], s: &Substitution, host: &mut dyn Host) -> Option<Substitution> {
        let a: Vec<Term> = args.iter().map(|t| s.apply(t)).collect();
        match (name, a.as_slice()) {
            ("print", _) => {
                let text: Vec<String> = a.iter().map(Term::to_string).collect();
                self.printed.push(text.join(" "));
                Some(s.clone())
            }
            ("my_name", [n]) => unify(n, &Term::atom(self.name.clone()), s),
            ("wait", [n]) => n.as_int().map(|_| s.clone()),
            ("send", [to, perf, content]) => {
                let to = to.as_atom()?.to_owned();
                let message = self.message(perf, content)?;
                self.outbox.push(Outgoing { to: Some(to), message });
                Some(s.clone())
            }
            ("broadcast", [perf, content]) => {
                let message = self.message(perf, content)?;
                self.outbox.push(Outgoing { to: None, message });
                Some(s.clone())
            }
            ("findall", [template, query, out]) => {
                let q = Literal::try_new(false, query.clone())?;
                let items: Vec<Term> = self.beliefs.query(&q, s).iter().map(|s2| s2.apply(template)).collect();
                unify(out, &Term::List(items), s)
            }
            ("min", [Term::List(items), out]) => {
                let m = items.iter().filter(|t| t.is_ground()).min()?;
                unify(out, m, s)
            }
            ("my_name" | "wait" | "send" | "broadcast" | "findall" | "min", _) => None,
            _ => {
                let outs = host.call(&self.name, name, &a)?;
                if outs.len() != a.len() {
                    return None;
                }
                let mut acc = s.clone();
                for (x, y) in a.iter().zip(&outs) {
                    acc = unify(x, y, &acc)?;
                }
                Some(acc)
            }
        }
    }

    fn message(&self, perf: &Term, content: &Term) -> Option<Message> {
        let performative = Performative::from_atom(perf.as_atom()?)?;
        let content = Literal::try_new(false, content.clone())?;
        content.is_ground().then(|| Message { sender: self.name.clone(), performative, content })
    }
}

/// The top frame ends by posting `trigger` and has no bindings to hand back,
/// so the callee can replace it. Keeps looping plans at constant depth.
fn is_tail_call(i: &Intention, trigger: &Trigger) -> bool {
    if trigger.op != TriggerOp::Add || trigger.kind != TriggerKind::Achieve {
        return false;
    }
    let top = i.top().expect("non-empty stack");
    top.cursor + 1 == top.plan.body.len()
        && matches!(top.current(), Some(BodyStep::Achieve(_)))
        && top.subst.apply_literal(&top.plan.trigger.literal).is_ground()
}
