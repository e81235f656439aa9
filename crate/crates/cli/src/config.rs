//! Flag parsing, the optional `key = value` config file, and resolution into a
//! checked [`RunConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use geoflow_core::algebra::FiniteField;
use geoflow_core::building::DEFAULT_BUDGET;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Flow {
    Pgl3,
    Pgl2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Dp,
    Closed,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "g")]
    G,
    #[value(name = "f")]
    F,
    #[value(name = "N")]
    N,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
    Dot,
}

macro_rules! value_names {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
            }
        }

        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, false)
            }
        }
    )*};
}

value_names!(Flow, Method, Kind, Format);

/// Options shared by every subcommand. All are optional so that a config
/// file can fill the gaps; explicit flags always win.
#[derive(Clone, Debug, Default, Args)]
pub struct CommonArgs {
    /// Field size (prime, or 4, 8, 9; other prime powers need --modulus)
    #[arg(long)]
    pub q: Option<u32>,
    /// Largest orbit length (number of transitions)
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub flow: Option<Flow>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// g: closed cycles, f: first returns, N: terminal edge profile
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Sector truncation for tables and graphs (default steps + 2)
    #[arg(long = "m-max")]
    pub m_max: Option<i64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for data-parallel kernels
    #[arg(long)]
    pub threads: Option<usize>,
    /// Oracle leaf budget (default 10^7)
    #[arg(long)]
    pub budget: Option<u128>,
    /// Monic modulus for an extension field, comma-separated coefficients from
    /// the constant term up, e.g. 1,1,0,1 for x^3+x+1
    #[arg(long)]
    pub modulus: Option<String>,
    /// File of `key = value` lines with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub q: u32,
    pub steps: usize,
    pub flow: Flow,
    pub method: Method,
    pub kind: Kind,
    pub m_max: i64,
    pub format: Format,
    pub threads: usize,
    pub budget: u128,
    pub modulus: Option<Vec<u32>>,
}

impl RunConfig {
    pub fn field(&self) -> Result<FiniteField, CliError> {
        let field = match &self.modulus {
            None => FiniteField::new(self.q),
            Some(m) => {
                let p = smallest_prime_factor(self.q);
                FiniteField::with_modulus(p, m)
            }
        }
        .map_err(CliError::invalid)?;
        if field.q() != self.q {
            return Err(CliError::invalid(format!(
                "modulus defines a field of size {}, not q = {}",
                field.q(),
                self.q
            )));
        }
        Ok(field)
    }

    pub fn q64(&self) -> u64 {
        self.q as u64
    }
}

fn smallest_prime_factor(q: u32) -> u32 {
    (2..=q).find(|p| q.is_multiple_of(*p)).unwrap_or(q)
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::invalid(format!(
                "config line {}: expected key = value",
                no + 1
            )));
        };
        let key = k.trim().replace('_', "-");
        let value = v.trim().trim_matches('"').to_string();
        if out.insert(key.clone(), value).is_some() {
            return Err(CliError::invalid(format!(
                "config line {}: duplicate key {key}",
                no + 1
            )));
        }
    }
    Ok(out)
}

fn take<T: FromStr>(file: &mut BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: fmt::Display,
{
    match file.remove(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|e| CliError::invalid(format!("config key {key}: {e}"))),
    }
}

fn or_file<T: FromStr>(
    flag: Option<T>,
    file: &mut BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: fmt::Display,
{
    let from_file = take(file, key)?;
    Ok(flag.or(from_file))
}

fn parse_modulus(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|c| {
            c.trim().parse().map_err(|_| {
                CliError::invalid(format!("modulus coefficient {c:?} is not an integer"))
            })
        })
        .collect()
}

impl CommonArgs {
    /// Merges flags over the config file and checks every constraint that
    /// does not depend on the subcommand.
    pub fn resolve(&self, default_format: Format) -> Result<RunConfig, CliError> {
        let mut file = match &self.config {
            None => BTreeMap::new(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::invalid(format!("cannot read {}: {e}", path.display()))
                })?;
                parse_config_text(&text)?
            }
        };
        let q = or_file(self.q, &mut file, "q")?.unwrap_or(2);
        let steps = or_file(self.steps, &mut file, "steps")?.unwrap_or(6);
        let flow = or_file(self.flow, &mut file, "flow")?.unwrap_or(Flow::Pgl3);
        let method = or_file(self.method, &mut file, "method")?.unwrap_or(Method::Dp);
        let kind = or_file(self.kind, &mut file, "kind")?.unwrap_or(Kind::G);
        let m_max = or_file(self.m_max, &mut file, "m-max")?.unwrap_or(steps as i64 + 2);
        let format = or_file(self.format, &mut file, "format")?.unwrap_or(default_format);
        let threads = or_file(self.threads, &mut file, "threads")?.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
        let budget = or_file(self.budget, &mut file, "budget")?.unwrap_or(DEFAULT_BUDGET);
        let modulus = or_file(self.modulus.clone(), &mut file, "modulus")?
            .map(|m| parse_modulus(&m))
            .transpose()?;
        if let Some(key) = file.keys().next() {
            return Err(CliError::invalid(format!("unknown config key {key}")));
        }

        if q < 2 {
            return Err(CliError::invalid(format!("q = {q} must be at least 2")));
        }
        if steps < 1 {
            return Err(CliError::invalid("steps must be at least 1"));
        }
        if threads < 1 {
            return Err(CliError::invalid("threads must be at least 1"));
        }
        let cfg = RunConfig {
            q,
            steps,
            flow,
            method,
            kind,
            m_max,
            format,
            threads,
            budget,
            modulus,
        };
        cfg.field()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text() {
        let m = parse_config_text("# run\nq = 3\nm_max=4 # trailing\n\nflow = \"pgl2\"\n").unwrap();
        assert_eq!(m["q"], "3");
        assert_eq!(m["m-max"], "4");
        assert_eq!(m["flow"], "pgl2");
        assert!(parse_config_text("q 3").is_err());
        assert!(parse_config_text("q=2\nq=3").is_err());
    }

    #[test]
    fn defaults_and_checks() {
        let cfg = CommonArgs::default().resolve(Format::Human).unwrap();
        assert_eq!((cfg.q, cfg.steps, cfg.m_max), (2, 6, 8));
        assert_eq!(cfg.budget, DEFAULT_BUDGET);
        let bad = CommonArgs {
            q: Some(6),
            ..Default::default()
        };
        assert_eq!(bad.resolve(Format::Human).unwrap_err().code, 2);
        let ext = CommonArgs {
            q: Some(8),
            modulus: Some("1,0,1,1".into()),
            ..Default::default()
        };
        assert_eq!(ext.resolve(Format::Human).unwrap().field().unwrap().q(), 8);
        let wrong = CommonArgs {
            q: Some(9),
            modulus: Some("1,1,0,1".into()),
            ..Default::default()
        };
        assert!(wrong.resolve(Format::Human).is_err());
    }

    #[test]
    fn enum_names_round_trip() {
        assert_eq!("N".parse::<Kind>().unwrap(), Kind::N);
        assert_eq!(Kind::G.to_string(), "g");
        assert_eq!("pgl2".parse::<Flow>().unwrap(), Flow::Pgl2);
        assert!("n".parse::<Kind>().is_err());
    }
}
