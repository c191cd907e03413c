//! The leader program driven alone, with miners played by the test.

use asl::{parse_literal, parse_program};
use bdi::{Agent, Message, NoHost, Performative, RoundRobin};
use harness::team::SMART_LEADER;
use harness::CYCLE_CAP;

struct Leader {
    agent: Agent,
    step: u64,
    /// (step, recipient, content) of everything the leader sent.
    sent: Vec<(u64, Option<String>, String)>,
}

impl Leader {
    fn new() -> Self {
        let agent = Agent::new("leader", &parse_program(SMART_LEADER).unwrap(), Box::new(RoundRobin));
        Leader { agent, step: 0, sent: Vec::new() }
    }

    fn tell(&mut self, from: &str, content: &str) {
        self.agent.deliver(Message {
            sender: from.into(),
            performative: Performative::Tell,
            content: parse_literal(content).unwrap(),
        });
    }

    fn steps(&mut self, n: u64) {
        for _ in 0..n {
            self.agent.perceive([parse_literal(&format!("step({})", self.step)).unwrap()].into());
            for r in self.agent.run_until_action(&mut NoHost, CYCLE_CAP).unwrap() {
                if r.action.is_some() {
                    self.agent.action_outcome(false).unwrap();
                }
            }
            for out in self.agent.take_outbox() {
                self.sent.push((self.step, out.to, out.message.content.to_string()));
            }
            self.step += 1;
        }
    }

    fn sent_at(&self, content: &str) -> Vec<u64> {
        self.sent.iter().filter(|(_, _, c)| c == content).map(|(s, _, _)| *s).collect()
    }
}

#[test]
fn cheapest_bidder_is_allocated() {
    let mut l = Leader::new();
    l.tell("m1", "gold_at(5,5)");
    l.steps(1);
    assert_eq!(l.sent_at("bid_request(5,5)"), vec![0]);
    assert_eq!(l.sent[0].1, None, "requests are broadcast");
    l.tell("m1", "bid(m1,5,5,7)");
    l.tell("m3", "bid(m3,5,5,2)");
    l.tell("m4", "bid(m4,5,5,9)");
    l.steps(5);
    let allocations: Vec<&String> = l.sent.iter().map(|(_, _, c)| c).filter(|c| c.starts_with("allocated")).collect();
    assert_eq!(allocations, ["allocated(m3,5,5)"]);
    // bids are cleared once the auction closes
    assert!(l.agent.beliefs().iter().all(|b| b.functor() != "bid"));
    l.steps(30);
    assert_eq!(l.sent_at("bid_request(5,5)"), vec![0]);
}

#[test]
fn ties_go_to_the_first_name() {
    let mut l = Leader::new();
    l.tell("m2", "gold_at(1,1)");
    l.steps(1);
    l.tell("m4", "bid(m4,1,1,3)");
    l.tell("m2", "bid(m2,1,1,3)");
    l.steps(5);
    assert_eq!(l.sent_at("allocated(m2,1,1)").len(), 1);
}

#[test]
fn no_bids_means_a_new_request_after_window_and_timeout() {
    let mut l = Leader::new();
    l.tell("m1", "gold_at(3,4)");
    l.steps(40);
    let at = l.sent_at("bid_request(3,4)");
    assert!(at.len() >= 3, "{at:?}");
    for w in at.windows(2) {
        assert_eq!(w[1] - w[0], 3 + 10);
    }
}

#[test]
fn a_decline_reopens_the_auction() {
    let mut l = Leader::new();
    l.tell("m1", "gold_at(2,2)");
    l.steps(1);
    l.tell("m1", "bid(m1,2,2,4)");
    l.steps(5);
    assert_eq!(l.sent_at("allocated(m1,2,2)").len(), 1);
    l.tell("m1", "declined(2,2)");
    l.steps(1);
    assert_eq!(l.sent_at("bid_request(2,2)").len(), 2);
}

#[test]
fn done_ends_the_auction_and_repeat_announcements_are_ignored() {
    let mut l = Leader::new();
    l.tell("m1", "gold_at(6,1)");
    l.tell("m2", "gold_at(6,1)");
    l.steps(1);
    assert_eq!(l.sent_at("bid_request(6,1)").len(), 1);
    l.tell("m2", "bid(m2,6,1,1)");
    l.steps(5);
    l.tell("m2", "done(6,1)");
    l.steps(20);
    assert_eq!(l.sent_at("bid_request(6,1)").len(), 1);
    assert!(!l.agent.beliefs().iter().any(|b| b.functor() == "auction" || b.functor() == "awarded"));
    // a fresh sighting starts a new auction
    l.tell("m3", "gold_at(6,1)");
    l.steps(1);
    assert_eq!(l.sent_at("bid_request(6,1)").len(), 2);
}

#[test]
fn late_bids_are_dropped() {
    let mut l = Leader::new();
    l.tell("m1", "bid(m1,9,9,3)");
    l.steps(2);
    assert!(l.agent.beliefs().iter().all(|b| b.functor() != "bid"));
    assert!(l.sent.is_empty());
}
