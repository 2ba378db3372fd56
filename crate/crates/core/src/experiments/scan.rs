use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{par_map, Parallelism};
use crate::algebra::fq::{Fq, FqCtx};
use crate::algebra::place::{places_up_to, Place};
use crate::algebra::ring::FrobeniusRing;
use crate::algebra::text::render_poly;
use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::frobenius::{frob_charpoly, FrobCharpoly};

pub const PLACE_CSV_HEADER: &str =
    "degree,place,a_P_phi1,a_P_phi2,norm1,norm2,symbol,equal_trace,equal_charpoly";

const WITNESS_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Trace,
    Charpoly,
}

impl FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace" => Ok(Self::Trace),
            "charpoly" => Ok(Self::Charpoly),
            _ => Err(Error::BadInput(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for ScanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Trace => "trace",
            Self::Charpoly => "charpoly",
        })
    }
}

/// Frobenius data of two modules at one place; `None` marks bad reduction.
#[derive(Clone, Debug)]
pub struct PlaceScan {
    pub place: Place,
    pub first: Option<FrobCharpoly>,
    pub second: Option<FrobCharpoly>,
}

impl PlaceScan {
    pub fn both(&self) -> Option<(&FrobCharpoly, &FrobCharpoly)> {
        Some((self.first.as_ref()?, self.second.as_ref()?))
    }
}

fn charpoly_at(phi: &DrinfeldModule, place: &Place) -> Result<Option<FrobCharpoly>> {
    match phi.reduce_at(place) {
        Ok(red) => frob_charpoly(&red).map(Some),
        Err(Error::BadReduction { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Frobenius charpolys of both modules at every place of degree `<= max_degree`,
/// in enumeration order.
pub fn scan_places(
    phi1: &DrinfeldModule,
    phi2: &DrinfeldModule,
    max_degree: usize,
    par: Parallelism,
) -> Result<Vec<PlaceScan>> {
    if phi1.rank() != phi2.rank() {
        return Err(Error::RankMismatch(phi1.rank(), phi2.rank()));
    }
    if !phi1.field().same_as(phi2.field()) {
        return Err(Error::MixedContexts);
    }
    let same = phi1 == phi2;
    let places = places_up_to(phi1.fq(), max_degree);
    par_map(&places, par, |place| {
        let first = charpoly_at(phi1, place)?;
        let second = if same { first.clone() } else { charpoly_at(phi2, place)? };
        Ok(PlaceScan { place: place.clone(), first, second })
    })
    .into_iter()
    .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeCounts {
    pub degree: usize,
    pub places: usize,
    pub scanned: usize,
    pub skipped_bad: usize,
    pub equal_trace: usize,
    pub equal_charpoly: usize,
    /// Fraction of scanned places agreeing in the report's mode.
    pub agreement_density: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub degree: usize,
    pub place: String,
    pub a_p_phi1: String,
    pub a_p_phi2: String,
}

/// One CSV row of per-place data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceRecord {
    pub degree: usize,
    pub place: String,
    pub a_p_phi1: String,
    pub a_p_phi2: String,
    pub norm1: String,
    pub norm2: String,
    pub symbol: String,
    pub equal_trace: bool,
    pub equal_charpoly: bool,
}

impl PlaceRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.degree,
            self.place,
            self.a_p_phi1,
            self.a_p_phi2,
            self.norm1,
            self.norm2,
            self.symbol,
            self.equal_trace,
            self.equal_charpoly
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementReport {
    pub max_degree: usize,
    pub mode: ScanMode,
    pub per_degree: Vec<DegreeCounts>,
    pub scanned: usize,
    pub agreeing: usize,
    pub agreement_density: f64,
    pub full_agreement: bool,
    pub witnesses: Vec<Witness>,
    pub witness_cap: usize,
    #[serde(skip)]
    pub records: Vec<PlaceRecord>,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl AgreementReport {
    /// Summarizes a scan; `symbol` optionally labels each place.
    pub fn from_scan(
        fq: &FqCtx,
        scans: &[PlaceScan],
        max_degree: usize,
        mode: ScanMode,
        symbol: impl Fn(&Place) -> Option<Fq>,
    ) -> Self {
        let mut per_degree: Vec<DegreeCounts> = (1..=max_degree)
            .map(|degree| DegreeCounts {
                degree,
                places: 0,
                scanned: 0,
                skipped_bad: 0,
                equal_trace: 0,
                equal_charpoly: 0,
                agreement_density: 0.0,
            })
            .collect();
        let mut witnesses = Vec::new();
        let mut records = Vec::new();
        for s in scans {
            let row = &mut per_degree[s.place.degree() - 1];
            row.places += 1;
            let Some((c1, c2)) = s.both() else {
                row.skipped_bad += 1;
                continue;
            };
            row.scanned += 1;
            let eq_trace = c1.trace() == c2.trace();
            let eq_full = c1.coeffs == c2.coeffs;
            row.equal_trace += eq_trace as usize;
            row.equal_charpoly += eq_full as usize;
            let agree = match mode {
                ScanMode::Trace => eq_trace,
                ScanMode::Charpoly => eq_full,
            };
            if !agree && witnesses.len() < WITNESS_CAP {
                witnesses.push(Witness {
                    degree: s.place.degree(),
                    place: s.place.render(fq),
                    a_p_phi1: render_poly(fq, c1.trace()),
                    a_p_phi2: render_poly(fq, c2.trace()),
                });
            }
            records.push(PlaceRecord {
                degree: s.place.degree(),
                place: s.place.render(fq),
                a_p_phi1: render_poly(fq, c1.trace()),
                a_p_phi2: render_poly(fq, c2.trace()),
                norm1: render_poly(fq, c1.norm()),
                norm2: render_poly(fq, c2.norm()),
                symbol: symbol(&s.place).map(|c| fq.render(c)).unwrap_or_default(),
                equal_trace: eq_trace,
                equal_charpoly: eq_full,
            });
        }
        let mut scanned = 0;
        let mut agreeing = 0;
        for row in &mut per_degree {
            let agree = match mode {
                ScanMode::Trace => row.equal_trace,
                ScanMode::Charpoly => row.equal_charpoly,
            };
            row.agreement_density = ratio(agree, row.scanned);
            scanned += row.scanned;
            agreeing += agree;
        }
        Self {
            max_degree,
            mode,
            per_degree,
            scanned,
            agreeing,
            agreement_density: ratio(agreeing, scanned),
            full_agreement: agreeing == scanned,
            witnesses,
            witness_cap: WITNESS_CAP,
            records,
        }
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(PLACE_CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }
}

/// Compares Frobenius traces (or full charpolys) of two modules of equal rank
/// at every place of degree `<= max_degree` where both reduce well.
pub fn scan_traces(
    phi1: &DrinfeldModule,
    phi2: &DrinfeldModule,
    max_degree: usize,
    mode: ScanMode,
    par: Parallelism,
) -> Result<AgreementReport> {
    if max_degree == 0 {
        return Err(Error::BadInput("degree bound must be at least 1".into()));
    }
    let scans = scan_places(phi1, phi2, max_degree, par)?;
    Ok(AgreementReport::from_scan(phi1.fq(), &scans, max_degree, mode, |_| None))
}
