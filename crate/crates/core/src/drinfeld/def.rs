//! JSON module definitions: `{ "p": 3, "e": 1, "rank": 2, "coeffs": ["1", "1"] }`.

use serde::{Deserialize, Serialize};

use super::DrinfeldModule;
use crate::algebra::fq::FqCtx;
use crate::algebra::text::{parse_poly, parse_rational, render_poly};
use crate::algebra::RationalFunctionField;
use crate::error::{Error, Result};

fn default_e() -> u32 {
    1
}

/// A coefficient: a string in T, or an explicit fraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffDef {
    Text(String),
    Fraction { num: String, den: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDef {
    pub p: u64,
    #[serde(default = "default_e")]
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    pub rank: usize,
    pub coeffs: Vec<CoeffDef>,
}

impl ModuleDef {
    pub fn field(&self) -> Result<FqCtx> {
        FqCtx::new(self.p, self.e, self.modulus.as_deref())
    }

    pub fn build(&self) -> Result<DrinfeldModule> {
        let fq = self.field()?;
        self.build_in(&fq)
    }

    /// Builds the module over an existing field context, which must match.
    pub fn build_in(&self, fq: &FqCtx) -> Result<DrinfeldModule> {
        if fq.p() != self.p || fq.e() != self.e {
            return Err(Error::MixedContexts);
        }
        let f = RationalFunctionField::new(fq.clone());
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| match c {
                CoeffDef::Text(s) => parse_rational(fq, s),
                CoeffDef::Fraction { num, den } => {
                    let n = parse_poly(fq, num)?;
                    let d = parse_poly(fq, den)?;
                    f.fraction(&n, &d).ok_or_else(|| Error::BadInput("zero denominator".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        super::make_drinfeld(fq, self.rank, coeffs)
    }

    /// The canonical definition of a module; re-parses to an equal module.
    pub fn from_module(phi: &DrinfeldModule) -> Self {
        let fq = phi.fq();
        let coeffs = phi
            .coeffs()
            .iter()
            .map(|c| {
                if c.is_polynomial() {
                    CoeffDef::Text(render_poly(fq, c.num()))
                } else {
                    CoeffDef::Fraction { num: render_poly(fq, c.num()), den: render_poly(fq, c.den()) }
                }
            })
            .collect();
        let modulus = (fq.e() > 1).then(|| fq.modulus().iter().map(|&c| c as u64).collect());
        Self { p: fq.p(), e: fq.e(), modulus, rank: phi.rank(), coeffs }
    }
}
