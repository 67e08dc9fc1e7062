use std::path::{Path, PathBuf};

use serde::Serialize;
use tomoslice::{Body, BodySpec, Direction};

use crate::args::{Cli, Command, Format};
use crate::error::{flag, CliError};

pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_ASYMPTOTE_POINTS: usize = 24;
pub const DEFAULT_ASYMPTOTE_WINDOW: (f64, f64) = (1e-6, 1e-3);
pub const DEFAULT_M_MAX: usize = 4;
pub const DEFAULT_MOMENT_ORDER: usize = 2;
pub const DEFAULT_MOMENT_TOL: f64 = 1e-6;
pub const DEFAULT_QUADRIC_TOL: f64 = 1e-8;
/// Largest degree tried by quadric-check.
pub const QUADRIC_MAX_DEGREE: usize = 8;
/// Offsets of the default quadric window above the lower end of the chord.
pub const QUADRIC_WINDOW: (f64, f64) = (0.5, 4.0);
pub const CONSISTENCY_PROBES: usize = 50;

/// Fully resolved run parameters, embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Command,
    pub body: BodySpec,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub xi: Vec<Direction>,
    pub grid: usize,
    pub margin: f64,
    pub m_max: usize,
    pub tol: f64,
    pub quad_order: usize,
    pub directions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(f64, f64)>,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let o = &cli.options;
        let command = cli.command;
        let path = o.body.as_ref().ok_or_else(|| flag("body", "a body file is required"))?;
        let body = load_body(path)?;

        let xi = o
            .xi
            .iter()
            .map(|s| parse_direction(s))
            .collect::<Result<Vec<_>, _>>()?;
        let needs_xi = matches!(
            command,
            Command::Profile | Command::Algfit | Command::Asymptote
        );
        if needs_xi && xi.len() != 1 {
            return Err(flag("xi", "exactly one direction is required"));
        }
        if !needs_xi && command != Command::QuadricCheck && !xi.is_empty() {
            return Err(flag("xi", "this command samples its own directions"));
        }

        let grid = o.grid.unwrap_or(match command {
            Command::Asymptote => DEFAULT_ASYMPTOTE_POINTS,
            _ => DEFAULT_GRID,
        });
        let margin = o.margin.unwrap_or(tomoslice::algfit::DEFAULT_FIT_MARGIN);
        if !(0.0..0.5).contains(&margin) {
            return Err(flag("margin", "must lie in [0, 0.5)"));
        }
        let tol = o.tol.unwrap_or(match command {
            Command::Algfit => tomoslice::algfit::DEFAULT_ACCEPT_TOL,
            Command::Detect => tomoslice::detect::DEFAULT_TOL_QUADRATIC,
            Command::QuadricCheck => DEFAULT_QUADRIC_TOL,
            _ => DEFAULT_MOMENT_TOL,
        });
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(flag("tol", "must be a positive number"));
        }
        let m_max = o.m_max.unwrap_or(DEFAULT_M_MAX);
        if m_max == 0 {
            return Err(flag("m-max", "must be at least 1"));
        }
        let quad_order = o.quad_order.unwrap_or(tomoslice::radon::DEFAULT_QUAD_ORDER);
        if quad_order == 0 {
            return Err(flag("quad-order", "must be at least 1"));
        }
        let directions = o.directions.unwrap_or(tomoslice::detect::DEFAULT_DIRECTIONS);
        let k = match command {
            Command::Moments => Some(o.k.unwrap_or(DEFAULT_MOMENT_ORDER)),
            _ if o.k.is_some() => return Err(flag("k", "only used by the moments command")),
            _ => None,
        };
        let window = match &o.window {
            Some(s) => Some(parse_window(s)?),
            None if command == Command::Asymptote => Some(DEFAULT_ASYMPTOTE_WINDOW),
            None => None,
        };
        Ok(Self {
            tool: "tomoslice",
            version: env!("CARGO_PKG_VERSION"),
            command,
            body,
            xi,
            grid,
            margin,
            m_max,
            tol,
            quad_order,
            directions,
            k,
            window,
            seed: o.seed.unwrap_or(0),
            format: o.format.unwrap_or(Format::Json),
            out: o.out.clone(),
        })
    }

    pub fn body(&self) -> Result<Body, CliError> {
        Ok(Body::try_from(self.body.clone())?)
    }
}

/// Reads a body file, naming the offending key on malformed input.
pub fn load_body(path: &Path) -> Result<BodySpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let spec: BodySpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let key = e.path().to_string();
        let message = e.inner().to_string();
        CliError::BodyJson {
            path: path.to_path_buf(),
            key: if key == "." {
                offending_key(&message)
                    .or_else(|| isolate_key(&text))
                    .unwrap_or(key)
            } else {
                key
            },
            message,
        }
    })?;
    // validate eagerly so a bad shape fails before any command runs
    Body::try_from(spec.clone())?;
    Ok(spec)
}

/// Pulls the first backquoted name out of a serde message such as
/// "unknown field `foo`, expected ...".
fn offending_key(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_string())
}

/// Internally tagged bodies lose the error path, so retry each field on its
/// own next to the tag and report the first one that fails by itself.
fn isolate_key(text: &str) -> Option<String> {
    let value: serde_json::Value = serde_json::from_str(text).ok()?;
    let object = value.as_object()?;
    let tag = object.get("type")?;
    object.iter().filter(|(k, _)| *k != "type").find_map(|(k, v)| {
        let single = serde_json::json!({ "type": tag, k.as_str(): v });
        match serde_json::from_value::<BodySpec>(single) {
            Err(e) if !e.to_string().starts_with("missing field") => Some(k.clone()),
            _ => None,
        }
    })
}

fn parse_floats(flag_name: &'static str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| flag(flag_name, format!("`{x}` is not a finite number")))
        })
        .collect()
}

pub fn parse_direction(s: &str) -> Result<Direction, CliError> {
    let v = parse_floats("xi", s)?;
    Direction::from_slice(&v).map_err(|e| flag("xi", e.to_string()))
}

pub fn parse_window(s: &str) -> Result<(f64, f64), CliError> {
    match parse_floats("window", s)?.as_slice() {
        &[a, b] if a < b => Ok((a, b)),
        _ => Err(flag("window", "expected two increasing numbers `a,b`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[test]
    fn directions_are_normalized() {
        let xi = parse_direction("3, -4").unwrap();
        assert_eq!(xi.as_slice(), &[0.6, -0.8]);
        assert!(parse_direction("0,0").is_err());
        assert!(parse_direction("1,nan").is_err());
    }

    #[test]
    fn windows_must_increase() {
        assert_eq!(parse_window("-1,2.5").unwrap(), (-1.0, 2.5));
        assert!(parse_window("2,1").is_err());
        assert!(parse_window("1,2,3").is_err());
    }

    #[test]
    fn key_extraction() {
        assert_eq!(
            offending_key("unknown field `radius`, expected `center`").as_deref(),
            Some("radius")
        );
        assert_eq!(offending_key("invalid type: string"), None);
        let text = r#"{"type":"hyperboloid","axes":[1,1],"c":"wide"}"#;
        assert_eq!(isolate_key(text).as_deref(), Some("c"));
    }

    #[test]
    fn defaults_depend_on_the_command() {
        let dir = std::env::temp_dir().join(format!("tomoslice-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ball.json");
        std::fs::write(&path, r#"{"type":"ellipsoid","center":[0,0],"shape":[[1,0],[0,1]]}"#).unwrap();
        let resolve = |args: &[&str]| {
            let cli = Cli::try_parse_from(
                ["tomoslice"].iter().chain(args).copied().chain(["--body", path.to_str().unwrap()]),
            )
            .unwrap();
            ExperimentConfig::resolve(&cli)
        };
        let detect = resolve(&["detect"]).unwrap();
        assert_eq!(detect.tol, 1e-8);
        assert_eq!(detect.directions, 200);
        let asym = resolve(&["asymptote", "--xi", "1,0"]).unwrap();
        assert_eq!(asym.grid, DEFAULT_ASYMPTOTE_POINTS);
        assert_eq!(asym.window, Some(DEFAULT_ASYMPTOTE_WINDOW));
        assert_eq!(resolve(&["moments"]).unwrap().k, Some(DEFAULT_MOMENT_ORDER));
        assert!(resolve(&["detect", "--k", "1"]).is_err());
        assert!(resolve(&["detect", "--xi", "1,0"]).is_err());
        assert!(resolve(&["algfit"]).is_err());
        std::fs::remove_dir_all(dir).unwrap();
    }
}
