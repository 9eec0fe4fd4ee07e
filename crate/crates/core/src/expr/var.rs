//! Variable symbols.
//!
//! A handful of indices are reserved for the structural variables of the
//! averaging pipeline (π, θ, cos θ, sin θ, r, z, x, y). Every other name is a
//! system parameter and is interned on first use.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub(crate) u16);

const RESERVED: [&str; 8] = ["pi", "theta", "C", "S", "r", "z", "x", "y"];

impl Var {
    /// π as a transcendental unit.
    pub const PI: Var = Var(0);
    pub const THETA: Var = Var(1);
    /// cos θ
    pub const COS: Var = Var(2);
    /// sin θ
    pub const SIN: Var = Var(3);
    pub const R: Var = Var(4);
    pub const Z: Var = Var(5);
    pub const X: Var = Var(6);
    pub const Y: Var = Var(7);

    /// Interns `name`; reserved names map onto the structural variables.
    pub fn named(name: &str) -> Var {
        let table = table();
        if let Some(v) = table.read().unwrap().index.get(name) {
            return *v;
        }
        let mut guard = table.write().unwrap();
        if let Some(v) = guard.index.get(name) {
            return *v;
        }
        let id = guard.names.len();
        assert!(id < u16::MAX as usize, "too many symbols");
        let v = Var(id as u16);
        guard.names.push(name.to_string());
        guard.index.insert(name.to_string(), v);
        v
    }

    /// Looks a name up without interning it.
    pub fn lookup(name: &str) -> Option<Var> {
        table().read().unwrap().index.get(name).copied()
    }

    pub fn name(self) -> String {
        table().read().unwrap().names[self.0 as usize].clone()
    }

    pub fn is_reserved(self) -> bool {
        (self.0 as usize) < RESERVED.len()
    }

    /// True for user-level parameters (everything except the structural variables).
    pub fn is_parameter(self) -> bool {
        !self.is_reserved()
    }

    pub fn is_reserved_name(name: &str) -> bool {
        RESERVED.contains(&name)
    }

    pub fn index(self) -> u16 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

struct Table {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

fn table() -> &'static RwLock<Table> {
    static TABLE: OnceLock<RwLock<Table>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let names: Vec<String> = RESERVED.iter().map(|s| s.to_string()).collect();
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), Var(i as u16))).collect();
        RwLock::new(Table { names, index })
    })
}

/// Ordering key used for canonical printing: structural variables first in
/// fixed order, then parameters alphabetically.
pub(crate) fn print_key(v: Var) -> (u8, String) {
    if v.is_reserved() {
        (0, format!("{:02}", v.0))
    } else {
        (1, v.name())
    }
}
