use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{PredicateSig, WeightedTheory};

/// Hands out predicate names `{prefix}{k}` that collide with neither the
/// reserved names nor anything emitted before.
#[derive(Clone, Debug, Default)]
pub struct FreshNamer {
    counters: BTreeMap<String, usize>,
    reserved: BTreeSet<String>,
}

impl FreshNamer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reserves every predicate name of `t`.
    pub fn for_theory(t: &WeightedTheory) -> Self {
        let mut namer = Self::new();
        namer.reserve_theory(t);
        namer
    }

    pub fn reserve(&mut self, name: &str) {
        self.reserved.insert(name.to_string());
    }

    pub fn reserve_theory(&mut self, t: &WeightedTheory) {
        for p in t.predicates() {
            self.reserve(p.name());
        }
    }

    pub fn is_reserved(&self, name: &str) -> bool {
        self.reserved.contains(name)
    }

    pub fn fresh(&mut self, prefix: &str, arity: usize) -> PredicateSig {
        let k = self.counters.entry(prefix.to_string()).or_insert(0);
        loop {
            let name = format!("{prefix}{k}");
            *k += 1;
            if self.reserved.insert(name.clone()) {
                return PredicateSig::new(name, arity).expect("prefix is an identifier");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_reserved_and_emitted_names() {
        let mut namer = FreshNamer::new();
        namer.reserve("Z0");
        namer.reserve("Sk1");
        assert_eq!(namer.fresh("Z", 1).name(), "Z1");
        assert_eq!(namer.fresh("Sk", 0).name(), "Sk0");
        assert_eq!(namer.fresh("Sk", 2).name(), "Sk2");
        assert_eq!(namer.fresh("Z", 0).name(), "Z2");
        assert!(namer.is_reserved("Sk2"));
    }
}
