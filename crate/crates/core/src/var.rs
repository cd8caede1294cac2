use std::fmt;

use serde::Serialize;

/// A spectral variable, identified by its position in a word or relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Var(pub u8);

const NAMES: [&str; 6] = ["u", "v", "w", "x", "y", "z"];

impl Var {
    pub const U: Var = Var(0);
    pub const V: Var = Var(1);
    pub const W: Var = Var(2);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match NAMES.get(self.index()) {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "x{}", self.0),
        }
    }
}
