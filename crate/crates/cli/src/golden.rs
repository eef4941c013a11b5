//! Golden files: the published series in canonical text, compiled into the
//! binary so `verify` needs nothing from the filesystem.

use cubicalforms_core::coeffring::VarList;
use cubicalforms_core::cubical::x012_vars;
use cubicalforms_core::series::{SeriesError, TSeries};
use cubicalforms_core::weierstrass::CURVE_VARS;

pub const ZSERIES_ORDER7: &str = include_str!("../golden/zseries_order7.txt");
pub const FGL_ORDER4: &str = include_str!("../golden/fgl_order4.txt");
pub const CUBICAL_ORDER5: &str = include_str!("../golden/cubical_order5.txt");
pub const CUBICAL_GAMMA13_MOD2_ORDER4: &str = include_str!("../golden/cubical_gamma13_mod2_order4.txt");

/// Every golden file with the variables its series is written in.
pub fn all() -> Vec<(&'static str, &'static str, VarList)> {
    vec![
        ("zseries_order7", ZSERIES_ORDER7, VarList::new(&["x"])),
        ("fgl_order4", FGL_ORDER4, VarList::new(&["x0", "x1"])),
        ("cubical_order5", CUBICAL_ORDER5, x012_vars()),
        ("cubical_gamma13_mod2_order4", CUBICAL_GAMMA13_MOD2_ORDER4, x012_vars()),
    ]
}

/// Parse a golden series over the curve coefficients `a1, ..., a6`.
pub fn parse(text: &str, vars: &VarList) -> Result<TSeries, SeriesError> {
    TSeries::parse(text.trim(), vars, &VarList::new(&CURVE_VARS))
}
