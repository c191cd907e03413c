use std::fmt;

use bdi::IntentionSummary;

/// Decision domain, in the order the diagram declares it. Ties between
/// expected utilities go to the earlier class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntentionClass {
    Deliver,
    FetchAssigned,
    Bid,
    ProtocolAdmin,
    Explore,
    Idle,
}

impl IntentionClass {
    pub const ALL: [IntentionClass; 6] = [
        IntentionClass::Deliver,
        IntentionClass::FetchAssigned,
        IntentionClass::Bid,
        IntentionClass::ProtocolAdmin,
        IntentionClass::Explore,
        IntentionClass::Idle,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            IntentionClass::Deliver => "deliver",
            IntentionClass::FetchAssigned => "fetch_assigned",
            IntentionClass::Bid => "bid",
            IntentionClass::ProtocolAdmin => "protocol_admin",
            IntentionClass::Explore => "explore",
            IntentionClass::Idle => "idle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Class of an intention by the functor of its root trigger.
    pub fn of_functor(functor: &str) -> Self {
        match functor {
            "deliver" => IntentionClass::Deliver,
            "fetch" | "collect" | "allocated" => IntentionClass::FetchAssigned,
            "bid" | "bid_request" => IntentionClass::Bid,
            "explore" | "sweep" => IntentionClass::Explore,
            "idle" | "stay" => IntentionClass::Idle,
            _ => IntentionClass::ProtocolAdmin,
        }
    }

    pub fn classify(intention: &IntentionSummary) -> Self {
        intention.root_functor().map_or(IntentionClass::ProtocolAdmin, Self::of_functor)
    }

    fn bit(self) -> u8 {
        1 << self.index()
    }
}

impl fmt::Display for IntentionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of classes as a 6-bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassSet(u8);

impl ClassSet {
    /// Number of non-empty subsets.
    pub const NON_EMPTY: usize = 63;

    pub fn empty() -> Self {
        ClassSet(0)
    }

    pub fn from_bits(bits: u8) -> Option<Self> {
        (bits < 64).then_some(ClassSet(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn insert(&mut self, c: IntentionClass) {
        self.0 |= c.bit();
    }

    pub fn contains(self, c: IntentionClass) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn iter(self) -> impl Iterator<Item = IntentionClass> {
        IntentionClass::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().map(IntentionClass::index).collect()
    }

    /// Every non-empty subset, by increasing mask.
    pub fn all_non_empty() -> impl Iterator<Item = ClassSet> {
        (1..64).map(ClassSet)
    }
}

impl FromIterator<IntentionClass> for ClassSet {
    fn from_iter<I: IntoIterator<Item = IntentionClass>>(iter: I) -> Self {
        let mut s = ClassSet::empty();
        for c in iter {
            s.insert(c);
        }
        s
    }
}
