//! Message log and the linter for the smart team's protocol.

use std::collections::BTreeMap;
use std::fmt;

use asl::Term;
use bdi::{Message, Performative};

/// One routed message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoggedMessage {
    pub step: u64,
    pub team: usize,
    pub from: String,
    /// `None` for a broadcast.
    pub to: Option<String>,
    pub message: Message,
}

impl fmt::Display for LoggedMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.step,
            self.team,
            self.from,
            self.to.as_deref().unwrap_or("*"),
            self.message.performative.as_str(),
            self.message.content
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Arg {
    Int,
    Name,
}

/// Allowed (performative, functor, argument kinds, addressing).
const GRAMMAR: &[(Performative, &str, &[Arg], Addr)] = &[
    (Performative::Tell, "gold_at", &[Arg::Int, Arg::Int], Addr::Broadcast),
    (Performative::Achieve, "bid_request", &[Arg::Int, Arg::Int], Addr::Broadcast),
    (Performative::Tell, "bid", &[Arg::Name, Arg::Int, Arg::Int, Arg::Int], Addr::Leader),
    (Performative::Tell, "allocated", &[Arg::Name, Arg::Int, Arg::Int], Addr::Broadcast),
    (Performative::Tell, "declined", &[Arg::Int, Arg::Int], Addr::Leader),
    (Performative::Tell, "done", &[Arg::Int, Arg::Int], Addr::Broadcast),
    (Performative::Tell, "carry", &[Arg::Name, Arg::Int], Addr::Broadcast),
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Addr {
    Broadcast,
    Leader,
}

/// Checks one message against the protocol grammar.
pub fn lint_message(m: &LoggedMessage) -> Result<(), String> {
    let c = &m.message.content;
    let Some(&(_, _, args, addr)) =
        GRAMMAR.iter().find(|(p, f, a, _)| *p == m.message.performative && *f == c.functor() && a.len() == c.arity())
    else {
        return Err(format!("unknown message {} {}", m.message.performative.as_str(), c));
    };
    if c.negated {
        return Err(format!("negated content {c}"));
    }
    for (a, t) in args.iter().zip(c.args()) {
        let ok = match a {
            Arg::Int => t.as_int().is_some_and(|v| v >= 0),
            Arg::Name => t.as_atom().is_some(),
        };
        if !ok {
            return Err(format!("bad argument {t} in {c}"));
        }
    }
    match (addr, m.to.as_deref()) {
        (Addr::Broadcast, None) | (Addr::Leader, Some("leader")) => {}
        _ => return Err(format!("{c} sent to {}", m.to.as_deref().unwrap_or("everyone"))),
    }
    let sender_first = matches!(c.functor(), "bid" | "carry");
    if sender_first && c.args()[0].as_atom() != Some(m.from.as_str()) {
        return Err(format!("{c} sent by {}", m.from));
    }
    Ok(())
}

fn cell_of(args: &[Term]) -> Option<(i64, i64)> {
    Some((args.first()?.as_int()?, args.get(1)?.as_int()?))
}

/// Replays a log and checks that no gold location is allocated again while
/// an earlier allocation is still open. An allocation closes with `done` or
/// a `declined` from the winner.
pub fn check_allocation_uniqueness(log: &[LoggedMessage]) -> Result<(), String> {
    let mut open: BTreeMap<(usize, (i64, i64)), String> = BTreeMap::new();
    for m in log {
        let c = &m.message.content;
        match c.functor() {
            "allocated" => {
                let winner = c.args()[0].as_atom().unwrap_or_default().to_owned();
                let cell = cell_of(&c.args()[1..]).ok_or("bad allocated")?;
                if let Some(prev) = open.insert((m.team, cell), winner) {
                    return Err(format!("step {}: {cell:?} allocated again while held by {prev}", m.step));
                }
            }
            "done" => {
                if let Some(cell) = cell_of(c.args()) {
                    open.remove(&(m.team, cell));
                }
            }
            "declined" => {
                if let Some(cell) = cell_of(c.args()) {
                    if open.get(&(m.team, cell)) == Some(&m.from) {
                        open.remove(&(m.team, cell));
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use asl::parse_literal;

    fn msg(from: &str, to: Option<&str>, p: Performative, c: &str) -> LoggedMessage {
        LoggedMessage {
            step: 0,
            team: 0,
            from: from.into(),
            to: to.map(Into::into),
            message: Message { sender: from.into(), performative: p, content: parse_literal(c).unwrap() },
        }
    }

    #[test]
    fn accepts_protocol_messages() {
        assert!(lint_message(&msg("m1", None, Performative::Tell, "gold_at(3,4)")).is_ok());
        assert!(lint_message(&msg("m1", Some("leader"), Performative::Tell, "bid(m1,3,4,7)")).is_ok());
        assert!(lint_message(&msg("leader", None, Performative::Achieve, "bid_request(3,4)")).is_ok());
    }

    #[test]
    fn rejects_malformed_messages() {
        assert!(lint_message(&msg("m1", None, Performative::Achieve, "gold_at(3,4)")).is_err());
        assert!(lint_message(&msg("m1", Some("leader"), Performative::Tell, "bid(m2,3,4,7)")).is_err());
        assert!(lint_message(&msg("m1", Some("m2"), Performative::Tell, "bid(m1,3,4,7)")).is_err());
        assert!(lint_message(&msg("m1", None, Performative::Tell, "gold_at(a,4)")).is_err());
        assert!(lint_message(&msg("m1", None, Performative::Tell, "hello")).is_err());
    }

    #[test]
    fn double_allocation_is_caught() {
        let a = msg("leader", None, Performative::Tell, "allocated(m1,3,4)");
        let b = msg("leader", None, Performative::Tell, "allocated(m2,3,4)");
        assert!(check_allocation_uniqueness(&[a.clone(), b.clone()]).is_err());
        let done = msg("m1", None, Performative::Tell, "done(3,4)");
        assert!(check_allocation_uniqueness(&[a.clone(), done, b.clone()]).is_ok());
        let dec = msg("m1", Some("leader"), Performative::Tell, "declined(3,4)");
        assert!(check_allocation_uniqueness(&[a, dec, b]).is_ok());
    }
}
