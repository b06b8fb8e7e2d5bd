//! Name-keyed registries of interchangeable strategies.
//!
//! Solvers, samplers and penalty schemes are each registered under a
//! canonical name (plus optional aliases) and looked up at runtime from
//! configuration or command-line flags.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub struct Registry<T> {
    kind: &'static str,
    entries: BTreeMap<&'static str, T>,
    aliases: BTreeMap<&'static str, &'static str>,
}

impl<T> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
            aliases: BTreeMap::new(),
        }
    }

    /// Registers `entry` under `name`, replacing any previous entry of that name.
    pub fn register(&mut self, name: &'static str, entry: T) -> &mut Self {
        self.entries.insert(name, entry);
        self
    }

    pub fn alias(&mut self, alias: &'static str, target: &'static str) -> &mut Self {
        debug_assert!(self.entries.contains_key(target), "alias to unknown entry");
        self.aliases.insert(alias, target);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        let canonical = self.aliases.get(name).copied().unwrap_or(name);
        self.entries
            .get(canonical)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                known: self.names().collect::<Vec<_>>().join(", "),
            })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_ok()
    }

    /// Canonical names in sorted order.
    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
