use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::group::{conjugacy_classes, generate_group};
use super::intertwiner::{intertwiner_solve, IntertwinerOptions};
use super::{par_map, Parallelism};
use crate::algebra::ext::{ExtElem, ResidueField};
use crate::algebra::fq::{Fq, FqCtx};
use crate::algebra::matrix::{charpoly, Matrix};
use crate::algebra::place::{places_up_to, power_residue_symbol, Place};
use crate::algebra::poly::Poly;
use crate::algebra::ring::{Field, FrobeniusRing};
use crate::algebra::text::render_poly;
use crate::drinfeld::{torsion_frobenius_matrix, DrinfeldModule, TorsionOptions};
use crate::error::{Error, Result};

type Mat = Matrix<ExtElem<Fq>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Class,
    Charpoly,
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "class" => Ok(Self::Class),
            "charpoly" => Ok(Self::Charpoly),
            _ => Err(Error::BadInput(format!("unknown granularity {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChebotarevOptions {
    pub torsion: TorsionOptions,
    pub group_cap: usize,
    pub intertwiner: IntertwinerOptions,
    pub par: Parallelism,
}

impl Default for ChebotarevOptions {
    fn default() -> Self {
        Self {
            torsion: TorsionOptions::default(),
            group_cap: 1_000_000,
            intertwiner: IntertwinerOptions::default(),
            par: Parallelism::default(),
        }
    }
}

/// How the torsion bases of two modules are related from place to place.
///
/// Torsion bases are chosen independently at each place, so only coupled
/// pairs give a meaningful product group: for identical modules the second
/// matrix is the first, and for a quadratic twist it is the first scaled by
/// the inverse power residue symbol (checked against the independently
/// computed matrix by conjugacy).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrobeniusCoupling {
    Identical,
    Twist { gamma: Poly<Fq> },
    Independent,
}

impl FrobeniusCoupling {
    pub fn detect(phi1: &DrinfeldModule, phi2: &DrinfeldModule) -> Self {
        if phi1 == phi2 {
            return Self::Identical;
        }
        match phi1.twist_parameter(phi2) {
            Some(gamma) => Self::Twist { gamma },
            None => Self::Independent,
        }
    }

    /// Whether both matrices are expressed in one basis per place.
    pub fn is_coherent(&self) -> bool {
        !matches!(self, Self::Independent)
    }

    pub fn describe(&self, fq: &FqCtx) -> String {
        match self {
            Self::Identical => "identical".into(),
            Self::Twist { gamma } => format!("twist({})", render_poly(fq, gamma)),
            Self::Independent => "independent".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusPair {
    pub place: Place,
    pub first: Mat,
    pub second: Mat,
}

fn frobenius_at(
    phi: &DrinfeldModule,
    place: &Place,
    ell: &Place,
    opts: &TorsionOptions,
) -> Result<Option<Mat>> {
    if place == ell {
        return Ok(None);
    }
    let red = match phi.reduce_at(place) {
        Ok(r) => r,
        Err(Error::BadReduction { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(torsion_frobenius_matrix(&red, ell, opts)?.matrix().clone()))
}

/// Frobenius matrices mod `ell` of both modules at every place of degree
/// `<= max_degree` where both reduce well, coupled as described by
/// `coupling`. Returns the pairs and the number of skipped places.
pub fn collect_frobenius_pairs(
    phi1: &DrinfeldModule,
    phi2: &DrinfeldModule,
    ell: &Place,
    max_degree: usize,
    coupling: &FrobeniusCoupling,
    opts: &ChebotarevOptions,
) -> Result<(Vec<FrobeniusPair>, usize)> {
    if phi1.rank() != phi2.rank() {
        return Err(Error::RankMismatch(phi1.rank(), phi2.rank()));
    }
    let fq = phi1.fq();
    let kl = ell.residue_field(fq);
    let places = places_up_to(fq, max_degree);
    let results = par_map(&places, opts.par, |place| -> Result<Option<FrobeniusPair>> {
        let Some(first) = frobenius_at(phi1, place, ell, &opts.torsion)? else {
            return Ok(None);
        };
        let second = match coupling {
            FrobeniusCoupling::Identical => first.clone(),
            FrobeniusCoupling::Twist { gamma } => {
                let Some(m2) = frobenius_at(phi2, place, ell, &opts.torsion)? else {
                    return Ok(None);
                };
                let chi = power_residue_symbol(fq, gamma, place)?;
                let c = kl.from_fq(fq.inv_fq(chi).expect("symbol is a unit"));
                let coupled = first.map(|e| kl.mul(&c, e));
                let pair = [(coupled.clone(), m2)];
                if intertwiner_solve(&kl, &pair, &opts.intertwiner)?.is_none() {
                    return Err(Error::Anomaly(format!(
                        "twisted Frobenius at {} is not conjugate to the scaled one",
                        place.render(fq)
                    )));
                }
                coupled
            }
            FrobeniusCoupling::Independent => {
                match frobenius_at(phi2, place, ell, &opts.torsion)? {
                    Some(m2) => m2,
                    None => return Ok(None),
                }
            }
        };
        Ok(Some(FrobeniusPair { place: place.clone(), first, second }))
    });
    let mut pairs = Vec::new();
    let mut skipped = 0;
    for r in results {
        match r? {
            Some(p) => pairs.push(p),
            None => skipped += 1,
        }
    }
    Ok((pairs, skipped))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassRow {
    pub representative: Vec<Vec<String>>,
    /// Ascending coefficients of the characteristic polynomial.
    pub charpoly: Vec<String>,
    pub size: usize,
    pub predicted: f64,
    pub observed: usize,
    pub empirical: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChebotarevReport {
    pub ell: String,
    pub max_degree: usize,
    pub granularity: Granularity,
    pub group_order: usize,
    pub places_scanned: usize,
    pub skipped: usize,
    pub rows: Vec<ClassRow>,
    pub predicted_sum: f64,
    pub empirical_sum: f64,
    pub max_deviation: f64,
    /// The group is generated by the observed Frobenius matrices, a proxy
    /// for the true image.
    pub generated_subgroup_proxy: bool,
}

fn render_elem(fq: &FqCtx, k: &ResidueField, e: &ExtElem<Fq>) -> String {
    render_poly(fq, &k.to_poly(e))
}

fn render_matrix(fq: &FqCtx, k: &ResidueField, m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| render_elem(fq, k, e)).collect())
        .collect()
}

fn no_places() -> Error {
    Error::BadInput("no places of good reduction coprime to l in range".into())
}

/// Compares frequencies of Frobenius classes (or charpolys) mod `ell` with
/// `|C|/|G|` for the group generated by the observed matrices.
pub fn chebotarev_report(
    phi: &DrinfeldModule,
    ell: &Place,
    max_degree: usize,
    granularity: Granularity,
    opts: &ChebotarevOptions,
) -> Result<ChebotarevReport> {
    let fq = phi.fq();
    let kl = ell.residue_field(fq);
    let (pairs, skipped) =
        collect_frobenius_pairs(phi, phi, ell, max_degree, &FrobeniusCoupling::Identical, opts)?;
    if pairs.is_empty() {
        return Err(no_places());
    }
    let mats: Vec<Mat> = pairs.into_iter().map(|p| p.first).collect();
    let group = generate_group(&kl, phi.rank(), &mats, opts.group_cap)?;
    let cps: Vec<Poly<ExtElem<Fq>>> =
        group.elements().iter().map(|g| charpoly(&kl, g)).collect::<Result<_>>()?;
    // Each bucket is a list of element indices; `label[i]` is the bucket of i.
    let buckets: Vec<Vec<usize>> = match granularity {
        Granularity::Class => conjugacy_classes(&kl, &group)?,
        Granularity::Charpoly => {
            let mut by_cp: BTreeMap<&Poly<ExtElem<Fq>>, Vec<usize>> = BTreeMap::new();
            for (i, cp) in cps.iter().enumerate() {
                by_cp.entry(cp).or_default().push(i);
            }
            let mut v: Vec<_> = by_cp.into_values().collect();
            v.sort();
            v
        }
    };
    let mut label = vec![0; group.order()];
    for (b, members) in buckets.iter().enumerate() {
        for &i in members {
            label[i] = b;
        }
    }
    let mut observed = vec![0usize; buckets.len()];
    for m in &mats {
        let i = group.index_of(m).expect("generator lies in the group");
        observed[label[i]] += 1;
    }
    let n = mats.len();
    let order = group.order();
    let rows: Vec<ClassRow> = buckets
        .iter()
        .zip(&observed)
        .map(|(members, &obs)| {
            let rep = members[0];
            let predicted = members.len() as f64 / order as f64;
            let empirical = obs as f64 / n as f64;
            ClassRow {
                representative: render_matrix(fq, &kl, &group.elements()[rep]),
                charpoly: cps[rep].iter().map(|c| render_elem(fq, &kl, c)).collect(),
                size: members.len(),
                predicted,
                observed: obs,
                empirical,
                deviation: (predicted - empirical).abs(),
            }
        })
        .collect();
    Ok(ChebotarevReport {
        ell: ell.render(fq),
        max_degree,
        granularity,
        group_order: order,
        places_scanned: n,
        skipped,
        predicted_sum: rows.iter().map(|r| r.size).sum::<usize>() as f64 / order as f64,
        empirical_sum: observed.iter().sum::<usize>() as f64 / n as f64,
        max_deviation: rows.iter().map(|r| r.deviation).fold(0.0, f64::max),
        rows,
        generated_subgroup_proxy: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrauerNesbittReport {
    pub places_compared: usize,
    pub all_charpolys_agree: bool,
    /// One intertwiner for all places (coherent couplings) or one per place.
    pub simultaneous: bool,
    pub intertwiner_found: bool,
    /// Equal charpolys everywhere and an intertwiner found.
    pub witnessed: bool,
}

/// Tests for a finite-level isomorphism between the two mod-`ell`
/// representations sampled in `pairs`.
pub fn brauer_nesbitt_check(
    kl: &ResidueField,
    pairs: &[FrobeniusPair],
    coupling: &FrobeniusCoupling,
    opts: &IntertwinerOptions,
) -> Result<BrauerNesbittReport> {
    let mut agree = true;
    for p in pairs {
        if charpoly(kl, &p.first)? != charpoly(kl, &p.second)? {
            agree = false;
            break;
        }
    }
    let simultaneous = coupling.is_coherent();
    let found = if !agree || pairs.is_empty() {
        false
    } else if simultaneous {
        let all: Vec<_> = pairs.iter().map(|p| (p.first.clone(), p.second.clone())).collect();
        intertwiner_solve(kl, &all, opts)?.is_some()
    } else {
        let mut ok = true;
        for p in pairs {
            if intertwiner_solve(kl, &[(p.first.clone(), p.second.clone())], opts)?.is_none() {
                ok = false;
                break;
            }
        }
        ok
    };
    Ok(BrauerNesbittReport {
        places_compared: pairs.len(),
        all_charpolys_agree: agree,
        simultaneous,
        intertwiner_found: found,
        witnessed: agree && found,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoReport {
    pub ell: String,
    pub max_degree: usize,
    pub coupling: String,
    pub product_group_order: usize,
    /// Proportion of the generated product group with equal charpolys.
    pub exact_proportion: f64,
    pub places_scanned: usize,
    pub skipped: usize,
    pub equal_charpoly_places: usize,
    pub empirical_frequency: f64,
    pub deviation: f64,
    pub brauer_nesbitt: BrauerNesbittReport,
    pub generated_subgroup_proxy: bool,
}

fn block_diag<K: Field>(k: &K, a: &Matrix<K::Elem>, b: &Matrix<K::Elem>) -> Matrix<K::Elem> {
    let (r, s) = (a.rows(), b.rows());
    let mut m = Matrix::filled(r + s, r + s, k.zero());
    for i in 0..r {
        for j in 0..r {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..s {
        for j in 0..s {
            m.set(r + i, r + j, b.get(i, j).clone());
        }
    }
    m
}

fn diagonal_block<E: Clone>(m: &Matrix<E>, start: usize, size: usize) -> Matrix<E> {
    let rows = (start..start + size).map(|i| m.row(i)[start..start + size].to_vec()).collect();
    Matrix::from_rows(rows).expect("square block")
}

/// Finite-level strong multiplicity one: exact share of equal-charpoly pairs
/// in the generated product group versus the share of places where the two
/// Frobenius charpolys mod `ell` agree.
pub fn smo_experiment(
    phi1: &DrinfeldModule,
    phi2: &DrinfeldModule,
    ell: &Place,
    max_degree: usize,
    opts: &ChebotarevOptions,
) -> Result<SmoReport> {
    let fq = phi1.fq();
    if !phi1.field().same_as(phi2.field()) {
        return Err(Error::MixedContexts);
    }
    let kl = ell.residue_field(fq);
    let coupling = FrobeniusCoupling::detect(phi1, phi2);
    let (pairs, skipped) = collect_frobenius_pairs(phi1, phi2, ell, max_degree, &coupling, opts)?;
    if pairs.is_empty() {
        return Err(no_places());
    }
    let r = phi1.rank();
    let gens: Vec<Mat> = pairs.iter().map(|p| block_diag(&kl, &p.first, &p.second)).collect();
    let group = generate_group(&kl, 2 * r, &gens, opts.group_cap)?;
    let mut in_x = 0;
    for g in group.elements() {
        let c1 = charpoly(&kl, &diagonal_block(g, 0, r))?;
        let c2 = charpoly(&kl, &diagonal_block(g, r, r))?;
        in_x += (c1 == c2) as usize;
    }
    let mut equal = 0;
    for p in &pairs {
        equal += (charpoly(&kl, &p.first)? == charpoly(&kl, &p.second)?) as usize;
    }
    let exact = in_x as f64 / group.order() as f64;
    let empirical = equal as f64 / pairs.len() as f64;
    let bn = brauer_nesbitt_check(&kl, &pairs, &coupling, &opts.intertwiner)?;
    Ok(SmoReport {
        ell: ell.render(fq),
        max_degree,
        coupling: coupling.describe(fq),
        product_group_order: group.order(),
        exact_proportion: exact,
        places_scanned: pairs.len(),
        skipped,
        equal_charpoly_places: equal,
        empirical_frequency: empirical,
        deviation: (exact - empirical).abs(),
        brauer_nesbitt: bn,
        generated_subgroup_proxy: true,
    })
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Class => "class",
            Self::Charpoly => "charpoly",
        })
    }
}
