//! The two bundled counterexample instances.

use crate::fractional::FractionalSolution;
use crate::instance::Instance;
use crate::rational::{frac, int};

/// Three nodes on a triangle of weight-5 edges; `(1,2)`-stable with a fractional LP.
pub const FIGURE1_JSON: &str = include_str!("../fixtures/fig1.json");
/// Four-node path; `(2,1)`-stable, alpha-expansion from all-2 gets stuck.
pub const FIGURE2_JSON: &str = include_str!("../fixtures/fig2.json");

pub fn figure1() -> Instance {
    crate::io::parse_instance(FIGURE1_JSON).expect("bundled fixture parses")
}

pub fn figure2() -> Instance {
    crate::io::parse_instance(FIGURE2_JSON).expect("bundled fixture parses")
}

/// The half-integral optimum of the relaxation on [`figure1`], objective 15/2.
pub fn figure1_table1b() -> FractionalSolution {
    let h = frac(1, 2);
    FractionalSolution::new(vec![
        vec![int(0), h.clone(), h.clone()],
        vec![h.clone(), h.clone(), int(0)],
        vec![h.clone(), int(0), h],
    ])
    .expect("table values are feasible")
}
