//! Place-scanning experiments: trace agreement, densities, Newton
//! reconstruction, intertwiners, and Chebotarev-style frequency comparisons.

mod chebotarev;
mod density;
mod group;
mod intertwiner;
mod newton;
mod scan;
mod twist;

pub use chebotarev::{
    brauer_nesbitt_check, chebotarev_report, collect_frobenius_pairs, smo_experiment,
    BrauerNesbittReport, ChebotarevOptions, ChebotarevReport, ClassRow, FrobeniusCoupling,
    FrobeniusPair, Granularity, SmoReport,
};
pub use density::{density_estimate, density_from_flags, DensityEstimate, TrajectoryPoint};
pub use group::{conjugacy_classes, generate_group, MatrixGroup};
pub use intertwiner::{intertwiner_solve, IntertwinerOptions};
pub use newton::{charpoly_from_elementary, newton_reconstruct, power_traces};
pub use scan::{
    scan_places, scan_traces, AgreementReport, DegreeCounts, PlaceRecord, PlaceScan, ScanMode,
    Witness, PLACE_CSV_HEADER,
};
pub use twist::{twist_agreement, TwistReport};

use serde::{Deserialize, Serialize};

/// How per-place work is scheduled. Results are identical either way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

/// Order-preserving map over a slice. Without the `parallel` feature this is
/// always sequential.
pub fn par_map<T, U, F>(items: &[T], par: Parallelism, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par == Parallelism::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = par;
    items.iter().map(f).collect()
}
