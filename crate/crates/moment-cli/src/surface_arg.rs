//! The surface mini-grammar of the command line:
//!
//! ```text
//! plane n=a,b,c d=offset
//! sphere r=R center=x,y,z
//! cylinder r=R axis=x,y,z dir=a,b,c
//! rotational file=path
//! ```
//!
//! with an optional trailing `orient=outward|inward`.

use anyhow::{anyhow, bail, Context, Result};

use moment_core::geomnum::{Orientation, ProfileCurve, Shape, SurfaceSpec};

pub fn parse_surface(text: &str) -> Result<SurfaceSpec> {
    let mut tokens = text.split_whitespace();
    let kind = tokens.next().ok_or_else(|| anyhow!("empty surface description"))?;
    let mut fields = std::collections::BTreeMap::new();
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=value, got `{token}`"))?;
        if fields.insert(key.to_string(), value.to_string()).is_some() {
            bail!("duplicate key `{key}`");
        }
    }
    let vec3 = |key: &str| -> Result<[f64; 3]> {
        let raw = fields
            .get(key)
            .ok_or_else(|| anyhow!("missing `{key}=` for {kind}"))?;
        let parts: Vec<f64> = raw
            .split(',')
            .map(|p| p.parse::<f64>().map_err(|e| anyhow!("{key}: {e}")))
            .collect::<Result<_>>()?;
        if parts.len() != 3 {
            bail!("`{key}` wants three comma-separated numbers");
        }
        Ok([parts[0], parts[1], parts[2]])
    };
    let scalar = |key: &str| -> Result<f64> {
        fields
            .get(key)
            .ok_or_else(|| anyhow!("missing `{key}=` for {kind}"))?
            .parse::<f64>()
            .map_err(|e| anyhow!("{key}: {e}"))
    };

    let known: &[&str] = match kind {
        "plane" => &["n", "d", "orient"],
        "sphere" => &["r", "center", "orient"],
        "cylinder" => &["r", "axis", "dir", "orient"],
        "rotational" => &["file", "orient"],
        other => bail!("unknown surface kind `{other}`"),
    };
    for key in fields.keys() {
        if !known.contains(&key.as_str()) {
            bail!("unknown key `{key}` for {kind}");
        }
    }

    let shape = match kind {
        "plane" => Shape::Plane {
            normal: vec3("n")?,
            offset: scalar("d")?,
        },
        "sphere" => Shape::Sphere {
            center: vec3("center")?,
            radius: scalar("r")?,
        },
        "cylinder" => Shape::Cylinder {
            axis_point: vec3("axis")?,
            axis_dir: vec3("dir")?,
            radius: scalar("r")?,
        },
        "rotational" => {
            let path = fields
                .get("file")
                .ok_or_else(|| anyhow!("missing `file=` for rotational"))?;
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading profile `{path}`"))?;
            Shape::Rotational {
                profile: ProfileCurve::read_csv(&text)?,
            }
        }
        _ => unreachable!(),
    };
    let mut spec = SurfaceSpec::new(shape)?;
    if let Some(orient) = fields.get("orient") {
        spec = spec.with_orientation(match orient.as_str() {
            "outward" => Orientation::Outward,
            "inward" => Orientation::Inward,
            other => bail!("unknown orientation `{other}`"),
        });
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_classification_surfaces() {
        assert!(parse_surface("sphere r=1 center=0,0,0").is_ok());
        assert!(parse_surface("plane n=0,0,1 d=0").is_ok());
        assert!(parse_surface("cylinder r=1 axis=0,0,0 dir=0,0,1").is_ok());
        assert!(parse_surface("sphere r=1 center=0,0,1 orient=inward").is_ok());
    }

    #[test]
    fn rejects_malformed_descriptions() {
        assert!(parse_surface("cube r=1").is_err());
        assert!(parse_surface("sphere r=1 center=0,0").is_err());
        assert!(parse_surface("sphere r=0 center=0,0,0").is_err());
        assert!(parse_surface("sphere r=1 center=0,0,0 color=red").is_err());
    }
}
