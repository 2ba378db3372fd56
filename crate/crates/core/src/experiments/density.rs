use serde::Serialize;

use super::{par_map, Parallelism};
use crate::algebra::fq::FqCtx;
use crate::algebra::place::{places_up_to, Place};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub degree: usize,
    pub numerator: usize,
    pub denominator: usize,
    pub ratio: f64,
}

/// Counting estimate `#{P in S : N(P) <= q^D} / #{P : N(P) <= q^D}` over the
/// places where membership is defined.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub max_degree: usize,
    /// `q^D`, absent on overflow.
    pub cutoff: Option<u128>,
    pub numerator: usize,
    pub denominator: usize,
    pub excluded: usize,
    pub ratio: f64,
    /// Cumulative counts at cutoffs `q^1, ..., q^D`.
    pub trajectory: Vec<TrajectoryPoint>,
    /// Max of the trajectory over cutoffs `ceil(D/2)..=D`. An estimator of
    /// the upper density, not a limit.
    pub upper_density: f64,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Builds the estimate from `(degree, membership)` pairs. `None` marks a
/// place excluded from both counts (bad reduction, undefined symbol).
pub fn density_from_flags(q: u64, max_degree: usize, flags: &[(usize, Option<bool>)]) -> DensityEstimate {
    let mut num = vec![0usize; max_degree + 1];
    let mut den = vec![0usize; max_degree + 1];
    let mut excluded = 0;
    for &(d, flag) in flags {
        assert!((1..=max_degree).contains(&d), "place degree {d} outside 1..={max_degree}");
        match flag {
            None => excluded += 1,
            Some(m) => {
                den[d] += 1;
                num[d] += m as usize;
            }
        }
    }
    let mut trajectory = Vec::with_capacity(max_degree);
    let (mut n, mut m) = (0, 0);
    for d in 1..=max_degree {
        n += num[d];
        m += den[d];
        trajectory.push(TrajectoryPoint { degree: d, numerator: n, denominator: m, ratio: ratio(n, m) });
    }
    let lo = max_degree.div_ceil(2).max(1);
    let upper_density = trajectory
        .iter()
        .filter(|p| p.degree >= lo)
        .map(|p| p.ratio)
        .fold(0.0, f64::max);
    DensityEstimate {
        max_degree,
        cutoff: (q as u128).checked_pow(max_degree as u32),
        numerator: n,
        denominator: m,
        excluded,
        ratio: ratio(n, m),
        trajectory,
        upper_density,
    }
}

/// Evaluates `member` on every place of degree `<= max_degree`.
pub fn density_estimate<F>(fq: &FqCtx, max_degree: usize, par: Parallelism, member: F) -> DensityEstimate
where
    F: Fn(&Place) -> Option<bool> + Sync + Send,
{
    let places = places_up_to(fq, max_degree);
    let flags = par_map(&places, par, |p| (p.degree(), member(p)));
    density_from_flags(fq.q(), max_degree, &flags)
}
