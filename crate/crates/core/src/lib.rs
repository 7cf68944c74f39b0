//! Families of tournaments on `[n]` in which every increasing `k`-cycle is
//! directed in some round: an optimal explicit construction, the matching
//! lower bound, exhaustive verifiers, and two variants (facet orientations of
//! simplices and `k`-independent set families).

pub mod cycling;
pub mod error;
pub mod family;
pub mod indep;
pub mod search;
pub mod simplex;
pub mod subsets;
pub mod tournament;
pub mod verifier;
pub mod witness;

pub use cycling::{construct_family, lower_bound, pigeonhole_witness, ConstructionParams};
pub use error::{Error, Result};
pub use family::OrientationFamily;
pub use search::{exact_min_search, SearchLimits, SearchOutcome};
pub use tournament::Tournament;
pub use verifier::{check_all_orderings, check_increasing, check_weak, Mode, Verification};
pub use witness::Witness;
