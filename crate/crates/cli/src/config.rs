use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;
use std::str::FromStr;

/// Fills every unset flag of `args` from the flat JSON object in `path`.
/// A flag counts as unset when it is absent or a false switch.
pub fn merge_file<T: Serialize + DeserializeOwned>(args: T, path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let file: Value = serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
    let Value::Object(file) = file else {
        return Err(format!("config {}: expected a JSON object", path.display()));
    };
    let Value::Object(mut merged) = serde_json::to_value(&args).map_err(|e| e.to_string())? else {
        unreachable!("argument structs serialize to objects")
    };
    for (key, value) in file {
        match merged.get(&key) {
            None => return Err(format!("config {}: unknown key '{key}'", path.display())),
            Some(Value::Null) | Some(Value::Bool(false)) => {
                merged.insert(key, value);
            }
            Some(_) => {}
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| format!("config {}: {e}", path.display()))
}

/// "lo:hi" with 0 ≤ lo < hi.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("energy range '{s}' must look like lo:hi"))?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad lower energy '{a}'"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad upper energy '{b}'"))?;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(format!("energy range {lo}:{hi} must satisfy 0 <= lo < hi"));
    }
    Ok((lo, hi))
}

/// Basis or quadrature size: "auto" or a positive integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Size {
    Auto,
    Fixed(usize),
}

impl Size {
    pub fn get(self) -> Option<usize> {
        match self {
            Self::Auto => None,
            Self::Fixed(n) => Some(n),
        }
    }
}

impl FromStr for Size {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Self::Auto),
            _ => match s.parse::<usize>() {
                Ok(n) if n > 0 => Ok(Self::Fixed(n)),
                _ => Err(format!("expected a positive integer or 'auto', got '{s}'")),
            },
        }
    }
}

impl Serialize for Size {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Auto => s.serialize_str("auto"),
            Self::Fixed(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Size {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(0) => Err(serde::de::Error::custom("size must be positive")),
            Raw::Number(n) => Ok(Self::Fixed(n)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}
