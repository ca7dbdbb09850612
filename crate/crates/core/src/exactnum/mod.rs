//! Exact arithmetic substrate: big rationals, quadratic surds and rigorous
//! real enclosures.

mod enclosure;
mod literal;
mod orbit;
mod surd;

pub use enclosure::{
    compare_refining, ln2_bounds, ln_bounds, pi_enclosure, round_down, round_up, Decision,
    RealEnclosure, Refinable, SurdApprox, DEFAULT_BITS,
};
pub use literal::{format_surd, parse_surd};
pub use num_rational::BigRational;
pub use orbit::OrbitWalker;
pub use surd::{squarefree_split, surd_arith, QuadSurd, SurdOp};
