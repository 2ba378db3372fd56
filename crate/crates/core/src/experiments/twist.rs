use serde::Serialize;

use super::density::{density_from_flags, DensityEstimate};
use super::scan::{scan_places, AgreementReport, ScanMode};
use super::Parallelism;
use crate::algebra::fq::Fq;
use crate::algebra::place::power_residue_symbol;
use crate::algebra::poly::PolyRing;
use crate::algebra::text::render_poly;
use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};

const FAILURE_CAP: usize = 20;

/// Trace comparison of a rank-2 module with its twist by `gamma`, checked
/// against the power residue character `chi`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistReport {
    pub gamma: String,
    pub max_degree: usize,
    pub agreement: AgreementReport,
    /// `a_P(twist) = chi(P)^{-1} a_P` at every scanned place.
    pub trace_relation_holds: bool,
    /// `norm(twist, P) = chi(P)^{-2} norm(P)` at every scanned place.
    pub norm_relation_holds: bool,
    pub relation_failures: Vec<String>,
    pub scanned: usize,
    pub agreeing: usize,
    pub trivial_symbol: usize,
    /// Places with `a_P = 0` and nontrivial symbol.
    pub zero_trace_nontrivial: usize,
    pub zero_trace: usize,
    /// Agreement set equals `{chi = 1}` union `{a_P = 0, chi != 1}`.
    pub decomposition_exact: bool,
    pub agreement_density: DensityEstimate,
    pub trivial_symbol_density: DensityEstimate,
    pub zero_trace_nontrivial_density: DensityEstimate,
    pub zero_trace_density: DensityEstimate,
}

pub fn twist_agreement(
    phi: &DrinfeldModule,
    gamma: &[Fq],
    max_degree: usize,
    par: Parallelism,
) -> Result<TwistReport> {
    if max_degree == 0 {
        return Err(Error::BadInput("degree bound must be at least 1".into()));
    }
    let fq = phi.fq();
    let gamma = PolyRing::new(fq.clone()).trim(gamma.to_vec());
    let twisted = phi.twist2(&gamma)?;
    let scans = scan_places(phi, &twisted, max_degree, par)?;
    let symbol = |p: &_| power_residue_symbol(fq, &gamma, p).ok();
    let agreement = AgreementReport::from_scan(fq, &scans, max_degree, ScanMode::Trace, symbol);

    let a = PolyRing::new(fq.clone());
    let mut failures = Vec::new();
    let (mut trace_ok, mut norm_ok) = (true, true);
    let (mut scanned, mut agreeing, mut trivial, mut zero_nt, mut zero) = (0, 0, 0, 0, 0);
    let mut decomposition_exact = true;
    let mut flags_agree = Vec::new();
    let mut flags_trivial = Vec::new();
    let mut flags_zero_nt = Vec::new();
    let mut flags_zero = Vec::new();
    for s in &scans {
        let d = s.place.degree();
        let Some((c1, c2)) = s.both() else {
            for f in [&mut flags_agree, &mut flags_trivial, &mut flags_zero_nt, &mut flags_zero] {
                f.push((d, None));
            }
            continue;
        };
        // Good reduction of the twist forces gamma to be a unit at P.
        let chi = symbol(&s.place).expect("gamma is coprime to a good place");
        let chi_inv = fq.inv_fq(chi).expect("symbol is a unit");
        let t_ok = a.scale_by(&chi_inv, c1.trace()) == c2.trace();
        let n_ok = a.scale_by(&fq.mul_fq(chi_inv, chi_inv), c1.norm()) == c2.norm();
        trace_ok &= t_ok;
        norm_ok &= n_ok;
        if !(t_ok && n_ok) && failures.len() < FAILURE_CAP {
            failures.push(s.place.render(fq));
        }
        let is_agree = c1.trace() == c2.trace();
        let is_trivial = chi == Fq::ONE;
        let is_zero = c1.trace().is_empty();
        let is_zero_nt = is_zero && !is_trivial;
        decomposition_exact &= is_agree == (is_trivial || is_zero_nt);
        scanned += 1;
        agreeing += is_agree as usize;
        trivial += is_trivial as usize;
        zero_nt += is_zero_nt as usize;
        zero += is_zero as usize;
        flags_agree.push((d, Some(is_agree)));
        flags_trivial.push((d, Some(is_trivial)));
        flags_zero_nt.push((d, Some(is_zero_nt)));
        flags_zero.push((d, Some(is_zero)));
    }
    let q = fq.q();
    Ok(TwistReport {
        gamma: render_poly(fq, &gamma),
        max_degree,
        agreement,
        trace_relation_holds: trace_ok,
        norm_relation_holds: norm_ok,
        relation_failures: failures,
        scanned,
        agreeing,
        trivial_symbol: trivial,
        zero_trace_nontrivial: zero_nt,
        zero_trace: zero,
        decomposition_exact: decomposition_exact && agreeing == trivial + zero_nt,
        agreement_density: density_from_flags(q, max_degree, &flags_agree),
        trivial_symbol_density: density_from_flags(q, max_degree, &flags_trivial),
        zero_trace_nontrivial_density: density_from_flags(q, max_degree, &flags_zero_nt),
        zero_trace_density: density_from_flags(q, max_degree, &flags_zero),
    })
}
