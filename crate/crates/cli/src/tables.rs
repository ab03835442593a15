//! Topology tables as CSV rows plus the structured records for JSON.

use kummer_core::topology::{
    euler_eta_table, flat3_catalogue, orientation_fillability, quotient_singularity_inventory, AlfFamily, Inventory,
    CATALOGUE,
};
use serde_json::Value;

use crate::Failure;

pub struct Table {
    pub stem: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Config(e.to_string()))
}

/// `selector` is one of `catalogue`, `family A`, `family D`, `fillability`, `flat3`.
pub fn build(selector: &[String], max_k: i64, k: u32) -> Result<Table, Failure> {
    let words: Vec<&str> = selector.iter().map(String::as_str).collect();
    match words.as_slice() {
        ["catalogue"] => catalogue(k),
        ["family", f] => {
            let family = match f.to_ascii_uppercase().as_str() {
                "A" => AlfFamily::Cyclic,
                "D" => AlfFamily::Dihedral,
                _ => return Err(Failure::Config(format!("unknown family {f}; expected A or D"))),
            };
            family_table(family, max_k)
        }
        ["fillability"] => fillability(max_k),
        ["flat3"] => flat3(),
        _ => Err(Failure::Config(format!(
            "unknown selector {:?}; expected catalogue, family A, family D, fillability or flat3",
            selector.join(" ")
        ))),
    }
}

fn catalogue(k: u32) -> Result<Table, Failure> {
    let mut invs: Vec<Inventory> = Vec::new();
    for name in CATALOGUE {
        let param = name.starts_with("tn-").then_some(k);
        invs.push(quotient_singularity_inventory(name, param)?);
    }
    let rows = invs
        .iter()
        .map(|inv| {
            let points: Vec<String> = inv.points.iter().map(|(l, n)| format!("{n}x{l}")).collect();
            vec![
                inv.name.clone(),
                inv.source.clone(),
                points.join(" "),
                inv.total.to_string(),
                inv.curves.to_string(),
                inv.orbifold_euler.to_string(),
            ]
        })
        .collect();
    Ok(Table {
        stem: "catalogue".into(),
        header: vec!["name", "source", "points", "total", "curves", "orbifold_euler"],
        rows,
        json: to_value(&invs)?,
    })
}

fn family_table(family: AlfFamily, max_k: i64) -> Result<Table, Failure> {
    let min = if family == AlfFamily::Cyclic { -1 } else { 0 };
    let reports = (min..=max_k).map(|k| euler_eta_table(family, k)).collect::<Result<Vec<_>, _>>()?;
    let opt = |v: &Option<kummer_core::topology::exact::Exact>| v.map_or(String::new(), |e| e.to_string());
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                format!("{}{}", family.letter(), r.k),
                r.chi.to_string(),
                r.tau.to_string(),
                opt(&r.eta_ad),
                opt(&r.three_eta_ad),
                r.boundary.clone(),
                format!("{:?}", r.mass).to_lowercase(),
                r.divisors.to_string(),
                r.special.clone().unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Table {
        stem: format!("family-{}", family.letter().to_ascii_lowercase()),
        header: vec!["space", "chi", "tau", "eta_ad", "three_eta_ad", "boundary", "mass", "divisors", "special"],
        rows,
        json: to_value(&reports)?,
    })
}

fn fillability(max_k: i64) -> Result<Table, Failure> {
    let fs = (0..=max_k).map(orientation_fillability).collect::<Result<Vec<_>, _>>()?;
    let rows = fs
        .iter()
        .map(|f| {
            vec![
                format!("D{}", f.k),
                f.eta_positive.to_string(),
                f.eta_negative.to_string(),
                f.positive.to_string(),
                f.negative.to_string(),
                f.reversed_by.map_or(String::new(), |p| format!("D{p}")),
            ]
        })
        .collect();
    Ok(Table {
        stem: "fillability".into(),
        header: vec!["space", "eta_positive", "eta_negative", "positive", "negative", "reversed_by"],
        rows,
        json: to_value(&fs)?,
    })
}

fn flat3() -> Result<Table, Failure> {
    let cat = flat3_catalogue()?;
    let rows = cat
        .iter()
        .map(|e| {
            vec![
                e.name.clone(),
                e.monodromy.clone(),
                e.holonomy_order.to_string(),
                e.fixed_directions.to_string(),
                to_value(&e.class).map(|v| v.as_str().unwrap_or_default().to_string()).unwrap_or_default(),
                e.free.to_string(),
            ]
        })
        .collect();
    Ok(Table {
        stem: "flat3".into(),
        header: vec!["name", "monodromy", "holonomy_order", "fixed_directions", "class", "free"],
        rows,
        json: to_value(&cat)?,
    })
}
