//! Identifiers for variables and covariables.
//!
//! A [`Name`] is a textual base paired with an integer stamp. Stamp `0` is
//! what users write; non-zero stamps are produced when a binder has to be
//! renamed and are printed as `base'stamp`.

use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    base: Arc<str>,
    stamp: u32,
}

/// The reserved toplevel covariable.
pub const TOPLEVEL: &str = "tp";

impl Name {
    pub fn new(base: impl AsRef<str>) -> Self {
        Name { base: Arc::from(base.as_ref()), stamp: 0 }
    }

    pub fn with_stamp(base: impl AsRef<str>, stamp: u32) -> Self {
        Name { base: Arc::from(base.as_ref()), stamp }
    }

    /// The toplevel covariable `tp`.
    pub fn toplevel() -> Self {
        Name::new(TOPLEVEL)
    }

    pub fn is_toplevel(&self) -> bool {
        self.stamp == 0 && &*self.base == TOPLEVEL
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn stamp(&self) -> u32 {
        self.stamp
    }

    /// Smallest-stamp variant of this name (same base, stamp >= 1) that
    /// `taken` rejects. Deterministic: the same avoid set always yields the
    /// same name.
    pub fn freshen(&self, mut taken: impl FnMut(&Name) -> bool) -> Name {
        let mut stamp = 1;
        loop {
            let candidate = Name { base: self.base.clone(), stamp };
            if !taken(&candidate) {
                return candidate;
            }
            stamp += 1;
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.stamp == 0 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}'{}", self.base, self.stamp)
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}
