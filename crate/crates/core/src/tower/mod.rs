//! Towers of `ℤ_ℓ^b`-covers: orbit structure, twisted Frobenius products and
//! the congruences between consecutive levels.

pub mod congruence;
pub mod engine;
pub mod limit;
pub mod orbit;
pub mod qsum;
pub mod spec;

pub use congruence::{general_congruence_report, scalar_congruence_report, CongruenceRow, RowStatus};
pub use engine::{CharPoly, LevelData, LevelRecord, TowerEngine};
pub use orbit::{OrbitParams, OrbitRep};
pub use spec::{Term, TowerSpec};
pub use limit::{caseb_limit_estimate, CaseBEstimate};
pub use qsum::{qsum, qsum_explorer, QsumRow};
