//! Built-in clouds, their stored expectations and the checksums of the
//! shipped files.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cloud::{Cloud, CloudBuilder, CloudError};
use crate::geometry::{GeometryError, QScalar, Ray, Representation};
use crate::parse::{parse_cloud_file, ParseError};

const FILES: &[(&str, &str)] = &[
    ("triangle", include_str!("../data/triangle.cloud")),
    ("firefly", include_str!("../data/firefly.cloud")),
    ("pentagon", include_str!("../data/pentagon.cloud")),
    ("bug", include_str!("../data/bug.cloud")),
    ("tifs38", include_str!("../data/tifs38.cloud")),
    ("tits38", include_str!("../data/tits38.cloud")),
    ("tiffts", include_str!("../data/tiffts.cloud")),
    ("hh10", include_str!("../data/hh10.cloud")),
];

const EXPECTATIONS: &str = include_str!("../data/expectations.toml");

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("unknown dataset `{0}`")]
    Unknown(String),
    #[error("bad parameter: {0}")]
    Param(String),
    #[error("shipped file `{name}` does not parse: {source}")]
    Parse { name: String, source: ParseError },
    #[error(transparent)]
    Cloud(#[from] CloudError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("expectations file: {0}")]
    Expectations(String),
}

/// A built-in cloud with its (possibly partial) vectors and stored
/// expectations.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub name: String,
    pub cloud: Cloud,
    pub representation: Option<Representation>,
    pub expected: Expected,
}

/// Stored facts for one dataset. Every key may carry an origin string in
/// the `origin` subtable.
#[derive(Clone, Debug, Default)]
pub struct Expected {
    table: toml::Table,
}

impl Expected {
    pub fn int(&self, key: &str) -> Option<i64> {
        self.table.get(key)?.as_integer()
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        self.table.get(key)?.as_str()
    }

    pub fn bool(&self, key: &str) -> Option<bool> {
        self.table.get(key)?.as_bool()
    }

    pub fn strings(&self, key: &str) -> Option<Vec<&str>> {
        self.table
            .get(key)?
            .as_array()?
            .iter()
            .map(|v| v.as_str())
            .collect()
    }

    pub fn origin(&self, key: &str) -> Option<&str> {
        self.table.get("origin")?.as_table()?.get(key)?.as_str()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.table
            .keys()
            .map(String::as_str)
            .filter(|k| *k != "origin" && *k != "sha256")
    }
}

/// Names accepted by [`dataset`]. `single` takes a size, `hh10` a parameter.
pub fn names() -> Vec<&'static str> {
    let mut v: Vec<&str> = FILES.iter().map(|(n, _)| *n).collect();
    v.push("single");
    v
}

/// Raw text of a shipped file.
pub fn source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

fn expectations() -> Result<toml::Table, DatasetError> {
    EXPECTATIONS
        .parse::<toml::Table>()
        .map_err(|e| DatasetError::Expectations(e.to_string()))
}

fn expected_for(name: &str) -> Result<Expected, DatasetError> {
    let all = expectations()?;
    let table = match all.get(name) {
        Some(toml::Value::Table(t)) => t.clone(),
        Some(_) => {
            return Err(DatasetError::Expectations(format!(
                "`{name}` is not a table"
            )))
        }
        None => toml::Table::new(),
    };
    Ok(Expected { table })
}

/// SHA-256 of every shipped file against the stored value:
/// `(name, stored, actual)`.
pub fn checksums() -> Result<Vec<(String, Option<String>, String)>, DatasetError> {
    let all = expectations()?;
    Ok(FILES
        .iter()
        .map(|(name, text)| {
            let actual = sha256_hex(text.as_bytes());
            let stored = all
                .get(*name)
                .and_then(|t| t.get("sha256"))
                .and_then(|v| v.as_str())
                .map(str::to_string);
            (name.to_string(), stored, actual)
        })
        .collect())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Loads a dataset by name with `key=value` parameters.
///
/// `single` needs `d` (context size, at least 2); `hh10` takes `x`, a
/// rational in (0, 1], default 1/2.
pub fn dataset(name: &str, params: &[(&str, &str)]) -> Result<Dataset, DatasetError> {
    let known: &[&str] = match name {
        "single" => &["d"],
        "hh10" => &["x"],
        _ => &[],
    };
    for (k, _) in params {
        if !known.contains(k) {
            return Err(DatasetError::Param(format!(
                "`{name}` takes no parameter `{k}`"
            )));
        }
    }
    let param = |k: &str| params.iter().find(|(p, _)| *p == k).map(|(_, v)| *v);
    if name == "single" {
        let d = param("d").ok_or_else(|| DatasetError::Param("`single` needs d".into()))?;
        let d: usize = d
            .parse()
            .map_err(|_| DatasetError::Param(format!("d must be a positive integer, got `{d}`")))?;
        let cloud = single(d)?;
        let mut table = toml::Table::new();
        table.insert("vertices".into(), (d as i64).into());
        table.insert("contexts".into(), 1.into());
        table.insert("states".into(), (d as i64).into());
        return Ok(Dataset {
            name: format!("single{d}"),
            cloud,
            representation: None,
            expected: Expected { table },
        });
    }
    let text = source(name).ok_or_else(|| DatasetError::Unknown(name.to_string()))?;
    let file = parse_cloud_file(text).map_err(|source| DatasetError::Parse {
        name: name.to_string(),
        source,
    })?;
    let mut representation = file.representation;
    if name == "hh10" {
        let x = match param("x") {
            Some(s) => parse_unit_rational(s)?,
            None => BigRational::new(BigInt::one(), BigInt::from(2)),
        };
        representation = Some(hh10_vectors(&x));
    }
    Ok(Dataset {
        name: name.to_string(),
        cloud: file.cloud,
        representation,
        expected: expected_for(name)?,
    })
}

/// Parses `name`, `name(v)` or `name(k=v, ...)`. A bare value is bound to
/// the dataset's only parameter.
pub fn load(spec: &str) -> Result<Dataset, DatasetError> {
    let spec = spec.trim();
    let (name, args) = match spec.split_once('(') {
        None => (spec, ""),
        Some((n, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| DatasetError::Param(format!("unclosed `(` in `{spec}`")))?;
            (n.trim(), inner)
        }
    };
    let default_key = match name {
        "single" => "d",
        _ => "x",
    };
    let mut params = Vec::new();
    for a in args.split(',').map(str::trim).filter(|a| !a.is_empty()) {
        match a.split_once('=') {
            Some((k, v)) => params.push((k.trim(), v.trim())),
            None => params.push((default_key, a)),
        }
    }
    dataset(name, &params)
}

/// One context of size `d` on vertices `x1..xd`.
pub fn single(d: usize) -> Result<Cloud, CloudError> {
    let names: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    let mut b = CloudBuilder::new(format!("single{d}"));
    b.context(&names)?;
    b.build()
}

fn parse_unit_rational(s: &str) -> Result<BigRational, DatasetError> {
    let q = crate::parse::parse_exact(s)
        .filter(QScalar::is_rational)
        .ok_or_else(|| DatasetError::Param(format!("x must be a rational p/q, got `{s}`")))?;
    if !q.p.is_positive() || q.p > BigRational::one() {
        return Err(DatasetError::Param(format!(
            "x must lie in (0, 1], got {}",
            q.p
        )));
    }
    Ok(q.p)
}

/// Terminals `u1`, `u22`, their neighbours `u20`, `u3`; `c` is left open.
fn hh10_vectors(x: &BigRational) -> Representation {
    let s = |r: BigRational| QScalar::from(r);
    let (zero, one) = (BigRational::zero(), BigRational::one());
    let ray = |c: [BigRational; 3]| Ray::exact(c.map(s)).expect("nonzero");
    Representation::exact()
        .with("u1", ray([one.clone(), zero.clone(), zero.clone()]))
        .with("u22", ray([x.clone(), one.clone(), zero.clone()]))
        .with("u20", ray([one.clone(), -x.clone(), zero.clone()]))
        .with("u3", ray([zero.clone(), one, zero]))
}
