use std::collections::{BTreeMap, BTreeSet};

use asl::{unify_literals, Literal, Substitution, Trigger};

/// Where a belief came from. BRF only ever retracts `Percept`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Percept,
    Mental,
    Told(String),
}

type Key = (String, usize, bool);

fn key(l: &Literal) -> Key {
    (l.functor().to_owned(), l.arity(), l.negated)
}

/// Ground literals indexed by functor/arity, each with its set of sources.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BeliefBase {
    index: BTreeMap<Key, BTreeMap<Literal, BTreeSet<Source>>>,
    len: usize,
}

impl BeliefBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.index.get(&key(l)).is_some_and(|m| m.contains_key(l))
    }

    pub fn sources(&self, l: &Literal) -> Option<&BTreeSet<Source>> {
        self.index.get(&key(l)).and_then(|m| m.get(l))
    }

    /// Adds `l` with `source`. Returns true if the literal was not believed before.
    ///
    /// Panics on a non-ground literal: callers check groundness first.
    pub fn add(&mut self, l: Literal, source: Source) -> bool {
        assert!(l.is_ground(), "belief base holds ground literals only: {l}");
        let bucket = self.index.entry(key(&l)).or_default();
        let fresh = !bucket.contains_key(&l);
        bucket.entry(l).or_default().insert(source);
        if fresh {
            self.len += 1;
        }
        fresh
    }

    /// Drops one source. Returns true if the literal is no longer believed.
    pub fn remove_source(&mut self, l: &Literal, source: &Source) -> bool {
        let k = key(l);
        let Some(bucket) = self.index.get_mut(&k) else { return false };
        let Some(sources) = bucket.get_mut(l) else { return false };
        sources.remove(source);
        if sources.is_empty() {
            bucket.remove(l);
            if bucket.is_empty() {
                self.index.remove(&k);
            }
            self.len -= 1;
            true
        } else {
            false
        }
    }

    /// Removes `l` whatever its sources. Returns true if it was present.
    pub fn remove(&mut self, l: &Literal) -> bool {
        let k = key(l);
        let Some(bucket) = self.index.get_mut(&k) else { return false };
        let gone = bucket.remove(l).is_some();
        if bucket.is_empty() {
            self.index.remove(&k);
        }
        if gone {
            self.len -= 1;
        }
        gone
    }

    /// All beliefs with the given signature, in term order.
    pub fn with_signature(&self, functor: &str, arity: usize, negated: bool) -> impl Iterator<Item = &Literal> {
        self.index.get(&(functor.to_owned(), arity, negated)).into_iter().flat_map(|m| m.keys())
    }

    /// Every extension of `s` under which `pattern` matches a belief, in term order.
    pub fn query(&self, pattern: &Literal, s: &Substitution) -> Vec<Substitution> {
        self.with_signature(pattern.functor(), pattern.arity(), pattern.negated)
            .filter_map(|b| unify_literals(pattern, b, s))
            .collect()
    }

    pub fn first_match(&self, pattern: &Literal, s: &Substitution) -> Option<(Literal, Substitution)> {
        self.with_signature(pattern.functor(), pattern.arity(), pattern.negated)
            .find_map(|b| unify_literals(pattern, b, s).map(|s| (b.clone(), s)))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.index.values().flat_map(|m| m.keys())
    }

    pub fn percepts(&self) -> BTreeSet<Literal> {
        self.index
            .values()
            .flat_map(|m| m.iter())
            .filter(|(_, src)| src.contains(&Source::Percept))
            .map(|(l, _)| l.clone())
            .collect()
    }

    /// Reconciles percept-sourced beliefs with `percepts`, in place.
    ///
    /// Returns the belief events: deletions first, then additions, each in
    /// term order. A literal also held from another source is not deleted.
    pub fn revise(&mut self, percepts: &BTreeSet<Literal>) -> Vec<Trigger> {
        let current = self.percepts();
        let mut deletions = Vec::new();
        for l in current.difference(percepts) {
            if self.remove_source(l, &Source::Percept) {
                deletions.push(Trigger::del_belief(l.clone()));
            }
        }
        let mut additions = Vec::new();
        for l in percepts.difference(&current) {
            if self.add(l.clone(), Source::Percept) {
                additions.push(Trigger::add_belief(l.clone()));
            }
        }
        deletions.extend(additions);
        deletions
    }
}

/// Pure belief revision: the revised base and the resulting events.
pub fn brf(beliefs: &BeliefBase, percepts: &BTreeSet<Literal>) -> (BeliefBase, Vec<Trigger>) {
    let mut out = beliefs.clone();
    let events = out.revise(percepts);
    (out, events)
}
