//! JSON model descriptions.

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::models::flat::FlatModel;
use crate::models::gibbons_hawking::{GhKind, GibbonsHawking, GibbonsHawkingData};
use crate::models::taub_nut::TaubNut;

/// Model families known to the loader.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Flat,
    EguchiHanson,
    GibbonsHawkingAle,
    GibbonsHawkingAlf,
    TaubNut,
    /// Taub-NUT with the binary dihedral action of index `k`.
    TaubNutDihedral,
}

impl Family {
    pub fn parse(id: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(id.to_string()))
            .map_err(|_| Error::UnknownModel(id.to_string()))
    }
}

/// `{family, m, mass, centers, lattice, k}`; only the keys relevant to the family may be set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centers: Option<Vec<[f64; 3]>>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_lattice",
        deserialize_with = "de_lattice"
    )]
    pub lattice: Option<Vec<Vec<Rational64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

fn ser_lattice<S: Serializer>(l: &Option<Vec<Vec<Rational64>>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Option<Vec<Vec<String>>> = l.as_ref().map(|l| l.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect());
    rows.serialize(s)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Int(i64),
    Text(String),
}

fn de_lattice<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Vec<Rational64>>>, D::Error> {
    let raw: Option<Vec<Vec<RationalRepr>>> = Option::deserialize(d)?;
    raw.map(|rows| {
        rows.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|q| match q {
                        RationalRepr::Int(i) => Ok(Rational64::from_integer(i)),
                        RationalRepr::Text(t) => t
                            .trim()
                            .parse::<Rational64>()
                            .map_err(|_| serde::de::Error::custom(format!("invalid rational {t:?}"))),
                    })
                    .collect()
            })
            .collect()
    })
    .transpose()
}

/// A model built from a [`ModelConfig`].
#[derive(Clone, Debug)]
pub enum Model {
    Flat(FlatModel),
    EguchiHanson,
    GibbonsHawking(GibbonsHawking),
    TaubNut(TaubNut),
    TaubNutDihedral { taub_nut: TaubNut, k: u32 },
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("model config: {e}")))
    }

    /// Catalogue defaults for a family name used on the command line.
    pub fn preset(id: &str) -> Result<Self> {
        let family = Family::parse(id)?;
        let base = ModelConfig { family, m: None, mass: None, centers: None, lattice: None, k: None };
        Ok(match family {
            Family::Flat => ModelConfig { m: Some(4), lattice: Some(vec![]), ..base },
            Family::EguchiHanson => base,
            Family::GibbonsHawkingAle => {
                ModelConfig { centers: Some(vec![[0.0, 0.0, -1.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]), ..base }
            }
            Family::GibbonsHawkingAlf => {
                ModelConfig { centers: Some(vec![[0.0, 0.0, -0.5], [0.0, 0.0, 0.5]]), mass: Some(0.5), ..base }
            }
            Family::TaubNut => ModelConfig { mass: Some(0.5), ..base },
            Family::TaubNutDihedral => ModelConfig { mass: Some(0.5), k: Some(4), ..base },
        })
    }

    fn forbid(&self, allowed: &[&str]) -> Result<()> {
        let set = [
            ("m", self.m.is_some()),
            ("mass", self.mass.is_some()),
            ("centers", self.centers.is_some()),
            ("lattice", self.lattice.is_some()),
            ("k", self.k.is_some()),
        ];
        for (key, present) in set {
            if present && !allowed.contains(&key) {
                return Err(Error::InvalidParameter(format!("key {key:?} does not apply to {:?}", self.family)));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Model> {
        let need = |v: Option<f64>, key: &str| v.ok_or_else(|| Error::InvalidParameter(format!("missing {key:?}")));
        match self.family {
            Family::Flat => {
                self.forbid(&["m", "lattice"])?;
                let m = self.m.ok_or_else(|| Error::InvalidParameter("missing \"m\"".into()))?;
                match &self.lattice {
                    Some(l) => Ok(Model::Flat(FlatModel::new(m, l.clone())?)),
                    None => Ok(Model::Flat(FlatModel::unit(m)?)),
                }
            }
            Family::EguchiHanson => {
                self.forbid(&[])?;
                Ok(Model::EguchiHanson)
            }
            Family::GibbonsHawkingAle => {
                self.forbid(&["centers"])?;
                let centers = self.centers.clone().ok_or_else(|| Error::InvalidParameter("missing \"centers\"".into()))?;
                Ok(Model::GibbonsHawking(GibbonsHawking::new(GibbonsHawkingData { centers, kind: GhKind::Ale })?))
            }
            Family::GibbonsHawkingAlf => {
                self.forbid(&["centers", "mass"])?;
                let centers = self.centers.clone().ok_or_else(|| Error::InvalidParameter("missing \"centers\"".into()))?;
                let mass = need(self.mass, "mass")?;
                Ok(Model::GibbonsHawking(GibbonsHawking::new(GibbonsHawkingData { centers, kind: GhKind::Alf { mass } })?))
            }
            Family::TaubNut => {
                self.forbid(&["mass"])?;
                Ok(Model::TaubNut(TaubNut::new(need(self.mass, "mass")?)?))
            }
            Family::TaubNutDihedral => {
                self.forbid(&["mass", "k"])?;
                let k = self.k.ok_or_else(|| Error::InvalidParameter("missing \"k\"".into()))?;
                if k < 3 {
                    return Err(Error::InvalidParameter(format!("dihedral index k = {k} must be at least 3")));
                }
                Ok(Model::TaubNutDihedral { taub_nut: TaubNut::new(need(self.mass, "mass")?)?, k })
            }
        }
    }
}
