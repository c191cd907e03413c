//! Team rosters and the (team, selector) conditions of an experiment.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use asl::{parse_program, AgentProgram, Literal, Term};

use crate::error::{HarnessError, Result};

pub const DUMMY_MINER: &str = include_str!("../../../teams/dummy/miner.asl");
pub const SMART_LEADER: &str = include_str!("../../../teams/smart/leader.asl");
pub const SMART_MINER: &str = include_str!("../../../teams/smart/miner.asl");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TeamKind {
    Dummy,
    Smart,
}

impl TeamKind {
    pub fn name(self) -> &'static str {
        match self {
            TeamKind::Dummy => "dummy",
            TeamKind::Smart => "smart",
        }
    }
}

impl FromStr for TeamKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dummy" => Ok(TeamKind::Dummy),
            "smart" => Ok(TeamKind::Smart),
            _ => Err(HarnessError::Invalid(format!("unknown team `{s}` (dummy|smart)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SelectorKind {
    RoundRobin,
    Meu,
    MeuOnline,
}

impl SelectorKind {
    pub fn name(self) -> &'static str {
        match self {
            SelectorKind::RoundRobin => "rr",
            SelectorKind::Meu => "meu",
            SelectorKind::MeuOnline => "meu-online",
        }
    }
}

impl FromStr for SelectorKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rr" => Ok(SelectorKind::RoundRobin),
            "meu" => Ok(SelectorKind::Meu),
            "meu-online" => Ok(SelectorKind::MeuOnline),
            _ => Err(HarnessError::Invalid(format!("unknown selector `{s}` (rr|meu|meu-online)"))),
        }
    }
}

/// A team paired with the selector all its agents use, written `smart+meu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    pub team: TeamKind,
    pub selector: SelectorKind,
}

impl Condition {
    pub const fn new(team: TeamKind, selector: SelectorKind) -> Self {
        Condition { team, selector }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.team.name(), self.selector.name())
    }
}

impl FromStr for Condition {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let (t, sel) =
            s.split_once('+').ok_or_else(|| HarnessError::Invalid(format!("condition `{s}` is not team+selector")))?;
        Ok(Condition { team: t.parse()?, selector: sel.parse()? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Leader,
    Miner,
}

#[derive(Clone, Debug)]
pub struct Member {
    pub name: String,
    pub role: Role,
    pub program: AgentProgram,
}

#[derive(Clone, Debug)]
pub struct TeamSpec {
    pub kind: TeamKind,
    pub members: Vec<Member>,
}

/// Auction parameters written into the leader's initial beliefs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuctionParams {
    pub window: u32,
    pub timeout: u32,
}

impl Default for AuctionParams {
    fn default() -> Self {
        AuctionParams { window: 3, timeout: 10 }
    }
}

/// Program sources for one team, either the built-in ones or read from a
/// directory holding `miner.asl` (and `leader.asl` for the smart team).
#[derive(Clone, Debug)]
pub struct Programs {
    pub leader: AgentProgram,
    pub miner: AgentProgram,
}

fn parse(name: &str, src: &str) -> Result<AgentProgram> {
    parse_program(src).map_err(|e| HarnessError::Invalid(e.with_file(name)))
}

impl Programs {
    pub fn builtin(kind: TeamKind) -> Result<Self> {
        match kind {
            TeamKind::Dummy => {
                let miner = parse("dummy/miner.asl", DUMMY_MINER)?;
                Ok(Programs { leader: AgentProgram::default(), miner })
            }
            TeamKind::Smart => Ok(Programs {
                leader: parse("smart/leader.asl", SMART_LEADER)?,
                miner: parse("smart/miner.asl", SMART_MINER)?,
            }),
        }
    }

    pub fn from_dir(kind: TeamKind, dir: &Path) -> Result<Self> {
        let read = |f: &str| {
            let p = dir.join(f);
            std::fs::read_to_string(&p).map_err(|e| HarnessError::Invalid(format!("{}: {e}", p.display())))
        };
        let path = |f: &str| dir.join(f).display().to_string();
        let miner = parse(&path("miner.asl"), &read("miner.asl")?)?;
        let leader = match kind {
            TeamKind::Dummy => AgentProgram::default(),
            TeamKind::Smart => parse(&path("leader.asl"), &read("leader.asl")?)?,
        };
        Ok(Programs { leader, miner })
    }
}

fn set_belief(program: &mut AgentProgram, functor: &str, value: u32) {
    program.beliefs.retain(|b| b.functor() != functor);
    program.beliefs.push(Literal::new(Term::compound(functor, vec![Term::int(value.into())])));
}

/// Builds a roster around `miners` bodies on the grid. Smart teams add a
/// leader named `leader` that has no body; miners are `m1..` (smart) or
/// `d1..` (dummy).
pub fn team_spec(kind: TeamKind, miners: usize, programs: &Programs, auction: AuctionParams) -> Result<TeamSpec> {
    if miners == 0 {
        return Err(HarnessError::Invalid("a team needs at least one miner".into()));
    }
    let mut members = Vec::with_capacity(miners + 1);
    let prefix = match kind {
        TeamKind::Dummy => "d",
        TeamKind::Smart => "m",
    };
    for i in 1..=miners {
        members.push(Member { name: format!("{prefix}{i}"), role: Role::Miner, program: programs.miner.clone() });
    }
    if kind == TeamKind::Smart {
        let mut leader = programs.leader.clone();
        set_belief(&mut leader, "auction_window", auction.window);
        set_belief(&mut leader, "auction_timeout", auction.timeout);
        members.push(Member { name: "leader".into(), role: Role::Leader, program: leader });
    }
    Ok(TeamSpec { kind, members })
}
