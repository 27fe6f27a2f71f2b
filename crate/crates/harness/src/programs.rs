//! Curated golden programs shipped with the harness.

use lbox_core::parse::{parse_program, ParseError, SourceProgram};

/// `(name, source)` for every golden program.
pub const GOLDEN: &[(&str, &str)] = &[
    ("unit", include_str!("../programs/unit.lbox")),
    ("modal_call", include_str!("../programs/modal_call.lbox")),
    ("counterexample", include_str!("../programs/counterexample.lbox")),
    ("rule1_mu", include_str!("../programs/rule1_mu.lbox")),
    ("rule2_mutilde", include_str!("../programs/rule2_mutilde.lbox")),
    ("rule3_unit", include_str!("../programs/rule3_unit.lbox")),
    ("rule4_tensor", include_str!("../programs/rule4_tensor.lbox")),
    ("rule5_sum", include_str!("../programs/rule5_sum.lbox")),
    ("rule6_box", include_str!("../programs/rule6_box.lbox")),
    ("rule7_not", include_str!("../programs/rule7_not.lbox")),
    ("rule8_par", include_str!("../programs/rule8_par.lbox")),
    ("rule9_with", include_str!("../programs/rule9_with.lbox")),
    ("identity", include_str!("../programs/identity.lbox")),
    ("booleans", include_str!("../programs/booleans.lbox")),
    ("shifts", include_str!("../programs/shifts.lbox")),
];

pub fn source(name: &str) -> Option<&'static str> {
    GOLDEN.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a golden program by name. Panics on unknown names.
pub fn load(name: &str) -> Result<SourceProgram, ParseError> {
    parse_program(source(name).unwrap_or_else(|| panic!("no golden program `{name}`")))
}
