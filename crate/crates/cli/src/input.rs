use std::fs;
use std::path::Path;

use fuzzmark_core::ingestion::{parse_roster, roster_distribution, GradeBandScheme};
use fuzzmark_core::LevelDistribution;
use num_rational::Ratio;

use crate::CliError;

/// Parses one weight: a fraction `p/q`, an integer, or a decimal.
pub fn parse_weight(token: &str) -> Result<f64, CliError> {
    let token = token.trim();
    let bad = || CliError::Data(format!("invalid weight {token:?}"));
    let value = if token.contains('/') {
        let r: Ratio<i64> = token.parse().map_err(|_| bad())?;
        *r.numer() as f64 / *r.denom() as f64
    } else {
        token.parse::<f64>().map_err(|_| bad())?
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

/// Comma-separated weights, worst level first.
pub fn parse_dist(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(parse_weight).collect()
}

fn looks_like_dist(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| {
            c.is_ascii_digit() || matches!(c, '.' | '/' | ',' | ' ' | 'e' | 'E' | '+' | '-')
        })
        && s.chars().any(|c| c.is_ascii_digit())
        && !Path::new(s).exists()
}

pub fn load_scheme(path: Option<&Path>) -> Result<GradeBandScheme, CliError> {
    match path {
        None => Ok(GradeBandScheme::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
            GradeBandScheme::parse(&text)
                .map_err(|e| CliError::Data(format!("{}: {e}", p.display())))
        }
    }
}

pub fn roster_file_distribution(
    path: &Path,
    scheme: &GradeBandScheme,
) -> Result<LevelDistribution, CliError> {
    let file =
        fs::File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let records =
        parse_roster(file).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    roster_distribution(&records, scheme)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn dist_distribution(s: &str) -> Result<LevelDistribution, CliError> {
    Ok(LevelDistribution::from_raw(&parse_dist(s)?)?)
}

/// `NAME=weights` or `NAME=roster.csv`.
pub fn parse_cohort(
    spec: &str,
    scheme: &GradeBandScheme,
) -> Result<(String, LevelDistribution), CliError> {
    let (name, source) = spec.split_once('=').ok_or_else(|| {
        CliError::Usage(format!(
            "cohort {spec:?} must look like NAME=weights or NAME=roster.csv"
        ))
    })?;
    let name = name.trim();
    if name.is_empty() {
        return Err(CliError::Usage(format!(
            "cohort {spec:?} has an empty name"
        )));
    }
    let d = if looks_like_dist(source) {
        dist_distribution(source)?
    } else {
        roster_file_distribution(Path::new(source), scheme)?
    };
    Ok((name.to_string(), d))
}
