//! Point evaluation of the special functions and partition functions by name.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bethe::GtPartition;
use crate::error::{Error, Result};
use crate::grid::{domain_wall, grid_h, grid_k, psi_layered};
use crate::gt::qdet_eigenvalue;
use crate::monodromy::MonodromyContext;
use crate::rmatrix::{Coupling, RFlavor};
use crate::scalar::{q_parse, q_to_string, Q};
use crate::special::{ik_determinant, ik_left, ik_right, weight_w, ColorWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComputeObject {
    WeightW,
    IkDet,
    IkLeft,
    IkRight,
    DomainWall,
    GridH,
    GridK,
    Psi,
    QdetEigenvalue,
}

impl ComputeObject {
    pub const ALL: [ComputeObject; 9] = [
        ComputeObject::WeightW,
        ComputeObject::IkDet,
        ComputeObject::IkLeft,
        ComputeObject::IkRight,
        ComputeObject::DomainWall,
        ComputeObject::GridH,
        ComputeObject::GridK,
        ComputeObject::Psi,
        ComputeObject::QdetEigenvalue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComputeObject::WeightW => "weightW",
            ComputeObject::IkDet => "ikDet",
            ComputeObject::IkLeft => "ikLeft",
            ComputeObject::IkRight => "ikRight",
            ComputeObject::DomainWall => "domainWall",
            ComputeObject::GridH => "gridH",
            ComputeObject::GridK => "gridK",
            ComputeObject::Psi => "psi",
            ComputeObject::QdetEigenvalue => "qdet-eigenvalue",
        }
    }
}

impl fmt::Display for ComputeObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ComputeObject {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ComputeObject::ALL.into_iter().find(|o| o.name() == s).ok_or_else(|| {
            let names: Vec<&str> = ComputeObject::ALL.iter().map(|o| o.name()).collect();
            Error::Config(format!("unknown object {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputeRequest {
    pub object: ComputeObject,
    pub flavor: RFlavor,
    pub rank: Option<usize>,
    /// Raw `key=value` parameters; lists are comma separated.
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComputeResult {
    pub object: String,
    pub flavor: String,
    pub value: String,
    pub inputs: BTreeMap<String, String>,
}

impl ComputeRequest {
    fn raw(&self, key: &str) -> Result<&str> {
        self.params.get(key).map(String::as_str).ok_or_else(|| Error::Config(format!("missing parameter {key}")))
    }

    fn list(&self, key: &str) -> Result<Vec<Q>> {
        parse_list(self.raw(key)?)
    }

    fn list_or_empty(&self, key: &str) -> Result<Vec<Q>> {
        self.params.get(key).map_or(Ok(Vec::new()), |s| parse_list(s))
    }

    fn coupling(&self) -> Result<Coupling<Q>> {
        let (name, _) = self.flavor.coupling_slot();
        Coupling::for_flavor(self.flavor, q_parse(self.raw(name)?)?)
    }

    fn trig_coupling(&self) -> Result<Coupling<Q>> {
        if !self.flavor.is_trig() {
            return Err(Error::Config(format!("{} is defined for the trigonometric flavours", self.object)));
        }
        self.coupling()
    }

    fn family_count(&self, prefix: &str) -> usize {
        (1..).take_while(|j| self.params.contains_key(&format!("{prefix}{j}"))).count()
    }

    fn families(&self, prefix: &str, count: usize) -> Result<Vec<Vec<Q>>> {
        (1..=count).map(|j| self.list_or_empty(&format!("{prefix}{j}"))).collect()
    }

    fn word(&self) -> Result<ColorWord> {
        let colors: Vec<usize> = parse_ints(self.raw("I")?)?;
        let rank = self.rank.or_else(|| colors.iter().copied().max()).unwrap_or(1);
        ColorWord::new(rank, colors)
    }
}

fn parse_list(text: &str) -> Result<Vec<Q>> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(q_parse).collect()
}

fn parse_ints(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Config(format!("malformed integer `{s}`"))))
        .collect()
}

/// Parses `J` written as `|`-separated parts, e.g. `1,3||2`.
fn parse_partition(text: &str, n: usize) -> Result<GtPartition> {
    let parts = text.split('|').map(parse_ints).collect::<Result<Vec<_>>>()?;
    GtPartition::new(n, parts).map_err(|e| Error::Config(e.to_string()))
}

pub fn compute_value(req: &ComputeRequest) -> Result<ComputeResult> {
    let value = match req.object {
        ComputeObject::WeightW => {
            let word = req.word()?;
            weight_w(&req.coupling()?, &req.families("u", word.rank - 1)?, &req.list("v")?, &word)?
        }
        ComputeObject::Psi => {
            let word = req.word()?;
            psi_layered(req.flavor, &req.coupling()?, &req.families("u", word.rank - 1)?, &req.list("v")?, &word)?
        }
        ComputeObject::IkDet => ik_determinant(&req.coupling()?, &req.list("u")?, &req.list("v")?)?,
        ComputeObject::IkLeft => ik_left(&req.trig_coupling()?, &req.list("u")?, &req.list("v")?)?,
        ComputeObject::IkRight => ik_right(&req.trig_coupling()?, &req.list("u")?, &req.list("v")?)?,
        ComputeObject::DomainWall => domain_wall(req.flavor, &req.coupling()?, &req.list("u")?, &req.list("v")?)?,
        ComputeObject::GridH => {
            let m = req.rank.map_or(req.family_count("u"), |r| r.saturating_sub(1));
            grid_h(req.flavor, &req.coupling()?, &req.families("u", m)?, &req.families("v", m)?)?
        }
        ComputeObject::GridK => {
            let m = req.rank.map_or(req.family_count("u"), |r| r.saturating_sub(1));
            grid_k(req.flavor, &req.coupling()?, &req.families("u", m)?, &req.families("v", m + 1)?)?
        }
        ComputeObject::QdetEigenvalue => {
            let w = req.list("w")?;
            let part = parse_partition(req.raw("J")?, w.len())?;
            let j: usize = req.raw("j")?.trim().parse().map_err(|_| Error::Config("j must be a positive integer".into()))?;
            if j == 0 || j > part.rank() {
                return Err(Error::Config(format!("j = {j} outside 1..={}", part.rank())));
            }
            let ctx = MonodromyContext::new(req.flavor, part.rank(), req.coupling()?, w)?;
            qdet_eigenvalue(&ctx, &part, j, &q_parse(req.raw("u")?)?)
        }
    };
    Ok(ComputeResult {
        object: req.object.to_string(),
        flavor: req.flavor.to_string(),
        value: q_to_string(&value),
        inputs: req.params.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(object: &str, flavor: RFlavor, params: &[(&str, &str)]) -> ComputeRequest {
        ComputeRequest {
            object: object.parse().unwrap(),
            flavor,
            rank: None,
            params: params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }

    #[test]
    fn ik_single_vertex() {
        let r = compute_value(&req("ikDet", RFlavor::TrigA, &[("q", "2"), ("u", "3"), ("v", "5")])).unwrap();
        assert_eq!(r.value, "9/2");
        assert_eq!(r.inputs["u"], "3");
    }

    #[test]
    fn empty_weight_function() {
        let r = compute_value(&req("weightW", RFlavor::TrigA, &[("q", "3"), ("I", "2,2"), ("v", "1,4")])).unwrap();
        assert_eq!(r.value, "1/1");
    }

    #[test]
    fn domain_wall_matches_determinant() {
        let p = [("q", "5/3"), ("u", "2,7"), ("v", "-3,11")];
        let a = compute_value(&req("domainWall", RFlavor::TrigA, &p)).unwrap();
        let b = compute_value(&req("ikDet", RFlavor::TrigA, &p)).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn malformed_parameters() {
        assert!(compute_value(&req("ikDet", RFlavor::TrigA, &[("q", "2"), ("u", "x"), ("v", "5")])).is_err());
        assert!(compute_value(&req("ikDet", RFlavor::TrigA, &[("u", "1"), ("v", "5")])).is_err());
        assert!("nothing".parse::<ComputeObject>().is_err());
        assert!(compute_value(&req("ikLeft", RFlavor::Rational, &[("h", "2"), ("u", "1"), ("v", "5")])).is_err());
    }

    #[test]
    fn qdet_eigenvalue_on_top_vector() {
        let r = compute_value(&req(
            "qdet-eigenvalue",
            RFlavor::TrigA,
            &[("q", "2"), ("w", "3,5"), ("J", "||1,2"), ("j", "1"), ("u", "7")],
        ))
        .unwrap();
        assert_eq!(r.value, "8/1");
    }
}
