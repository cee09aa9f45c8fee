//! Deterministic fresh-name supply.
//!
//! A fresh name keeps the stem of its base and appends the smallest counter
//! that is not yet taken, so `X` becomes `X1`, then `X2`, and variables stay
//! in the uppercase lexical class.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;

#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    used: BTreeSet<String>,
}

impl NameSupply {
    pub fn new<I: IntoIterator<Item = String>>(used: I) -> NameSupply {
        NameSupply { used: used.into_iter().collect() }
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.into());
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// A name derived from `base` that has not been handed out or reserved.
    pub fn fresh(&mut self, base: &str) -> String {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { base } else { stem };
        let mut k = 1usize;
        loop {
            let candidate = format!("{stem}{k}");
            if !self.used.contains(&candidate) {
                self.used.insert(candidate.clone());
                return candidate;
            }
            k += 1;
        }
    }

    /// `base` itself when free, otherwise a fresh variant.
    pub fn keep_or_fresh(&mut self, base: &str) -> String {
        if self.used.insert(base.into()) {
            base.into()
        } else {
            self.fresh(base)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn counters_skip_taken_names() {
        let mut s = NameSupply::new(vec!["X".into(), "X1".into()]);
        assert_eq!(s.fresh("X"), "X2");
        assert_eq!(s.fresh("X1"), "X3");
        assert_eq!(s.keep_or_fresh("Y"), "Y");
        assert_eq!(s.keep_or_fresh("Y"), "Y1");
    }
}
