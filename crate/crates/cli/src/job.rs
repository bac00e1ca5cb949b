use std::path::Path;
use std::str::FromStr;

use clap::Args;
use monopole_core::defect::DefectSplit;
use monopole_core::gklo::{GkloContext, Sign};
use monopole_core::poly::parse_poly;
use monopole_core::quiver::{check_m, DimData, Quiver};
use monopole_core::sym::PartialSymPoly;
use monopole_core::Poly;

use crate::CliError;

/// Comma-separated integers; the empty string is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Csv(pub Vec<i64>);

impl FromStr for Csv {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Csv(Vec::new()));
        }
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|e| format!("bad integer {x:?}: {e}"))
            })
            .collect::<Result<_, _>>()
            .map(Csv)
    }
}

#[derive(Args, Clone, Debug)]
pub struct JobArgs {
    /// Quiver JSON file, or one of the presets a1, a2, affine-sl2.
    #[arg(long)]
    pub quiver: String,
    /// Framing dimensions.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Csv,
    /// Gauge dimensions.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Csv,
    #[arg(long, allow_hyphen_values = true)]
    pub vprime: Option<Csv>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<Csv>,
    /// Dressing polynomial in the w[i,r], z grammar.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Truncation order of the Hilbert series.
    #[arg(long)]
    pub order: Option<usize>,
    /// + or -; both signs when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<Sign>,
    #[arg(long)]
    pub json: bool,
}

/// Parsed and validated input.
pub struct Job {
    pub quiver: Quiver,
    pub ctx: GkloContext,
    pub vprime: Option<Vec<i64>>,
    pub m: Option<Vec<i64>>,
    pub f: Option<Poly>,
    pub order: Option<usize>,
    pub sign: Option<Sign>,
    pub json: bool,
}

fn input<E: std::fmt::Display>(what: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Input(format!("{what}: {e}"))
}

pub fn load_quiver(spec: &str) -> Result<Quiver, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(input("quiver file"))?;
        return Quiver::from_json(&text).map_err(input("quiver file"));
    }
    Quiver::preset(spec).ok_or_else(|| {
        CliError::Input(format!("{spec:?} is neither a quiver file nor a preset (a1, a2, affine-sl2)"))
    })
}

impl Job {
    pub fn from_args(a: &JobArgs) -> Result<Self, CliError> {
        let quiver = load_quiver(&a.quiver)?;
        let dims = DimData::for_quiver(&quiver, a.w.0.clone(), a.v.0.clone()).map_err(input("dimensions"))?;
        let ctx = GkloContext::new(quiver.clone(), dims).map_err(input("dimensions"))?;
        let v = &a.v.0;
        if let Some(vp) = &a.vprime {
            DefectSplit::new(v.clone(), vp.0.clone()).map_err(input("vprime"))?;
        }
        if let Some(m) = &a.m {
            check_m(&m.0, v).map_err(input("m"))?;
        }
        let f = match &a.f {
            Some(text) => Some(parse_poly(text).map_err(input("dressing"))?),
            None => None,
        };
        Ok(Job {
            quiver,
            ctx,
            vprime: a.vprime.as_ref().map(|x| x.0.clone()),
            m: a.m.as_ref().map(|x| x.0.clone()),
            f,
            order: a.order,
            sign: a.sign,
            json: a.json,
        })
    }

    pub fn v(&self) -> &[i64] {
        &self.ctx.dims().v
    }

    /// The dressing as an element of the ring attached to `m`.
    pub fn dressing(&self, m: &[i64]) -> Result<PartialSymPoly, CliError> {
        let value = self.f.clone().unwrap_or_else(Poly::one);
        PartialSymPoly::new(value, m.to_vec(), self.v().to_vec())
            .map_err(|e| CliError::Input(format!("dressing for m = {m:?}: {e}")))
    }

    pub fn signs(&self) -> Vec<Sign> {
        match self.sign {
            Some(s) => vec![s],
            None => vec![Sign::Plus, Sign::Minus],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_parsing() {
        assert_eq!("1, 0,3".parse::<Csv>().unwrap(), Csv(vec![1, 0, 3]));
        assert_eq!("".parse::<Csv>().unwrap(), Csv(vec![]));
        assert_eq!("-2".parse::<Csv>().unwrap(), Csv(vec![-2]));
        assert!("1,x".parse::<Csv>().is_err());
    }
}
