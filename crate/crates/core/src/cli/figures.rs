use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::error::Result;
use crate::proofcheck::{linspace, FunctionId, ProofContext};
use crate::quotients::{quotient_t_derivs_real, QuotientSpec};
use crate::real::Real;
use crate::theta::{ModularPoint, ThetaIndex};

use super::config::RunConfig;

pub const CSV_HEADER: &str = "x_or_t,function_id,value,u,v,t,j";

/// One CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureRow {
    pub x_or_t: f64,
    pub function_id: String,
    pub value: f64,
    pub u: Option<f64>,
    pub v: Option<f64>,
    pub t: f64,
    pub j: u8,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(rows: &[FigureRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let opt = |o: Option<f64>| o.map(num).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            num(r.x_or_t),
            r.function_id,
            num(r.value),
            opt(r.u),
            opt(r.v),
            num(r.t),
            r.j
        );
    }
    out
}

/// Parses what `to_csv` writes.
pub fn parse_csv(text: &str) -> Result<Vec<FigureRow>> {
    let bad = |line: &str| crate::Error::Config(format!("malformed figure row `{line}`"));
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(crate::Error::Config("missing figure CSV header".into()));
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(bad(line));
            }
            let x = |s: &str| s.parse::<f64>().map_err(|_| bad(line));
            let opt = |s: &str| if s.is_empty() { Ok(None) } else { x(s).map(Some) };
            Ok(FigureRow {
                x_or_t: x(f[0])?,
                function_id: f[1].to_string(),
                value: x(f[2])?,
                u: opt(f[3])?,
                v: opt(f[4])?,
                t: x(f[5])?,
                j: f[6].parse().map_err(|_| bad(line))?,
            })
        })
        .collect()
}

/// S_j and its first two t-derivatives along the t grid.
pub fn quotient_rows(cfg: &RunConfig, j: ThetaIndex) -> Result<Vec<FigureRow>> {
    let ts = cfg.t_grid.points();
    let mut rows = Vec::new();
    for &(u, v) in &cfg.uv_pairs {
        let spec = QuotientSpec::strict(j, u, v)?;
        let derivs: Vec<Vec<Real>> = ts
            .par_iter()
            .map(|&t| quotient_t_derivs_real(&spec, &ModularPoint::new(t)?, 2))
            .collect::<Result<_>>()?;
        let names = [format!("S{}", j.index()), format!("dS{}_dt", j.index()), format!("d2S{}_dt2", j.index())];
        for (k, name) in names.iter().enumerate() {
            for (&t, d) in ts.iter().zip(&derivs) {
                rows.push(FigureRow {
                    x_or_t: t,
                    function_id: name.clone(),
                    value: d[k].to_f64(),
                    u: Some(u),
                    v: Some(v),
                    t,
                    j: j.index(),
                });
            }
        }
    }
    Ok(rows)
}

/// Edge functions on the x grid at the figure t. `scale` multiplies values.
pub fn edge_rows(cfg: &RunConfig, items: &[(FunctionId, &str, f64)], j: u8) -> Result<Vec<FigureRow>> {
    let ctx = ProofContext::new(cfg.figure_t)?;
    let xs = linspace(cfg.delta, 0.5 - cfg.delta, cfg.x_grid_n);
    let mut rows = Vec::new();
    for &(function, name, scale) in items {
        let vals: Vec<Real> = xs.par_iter().map(|&x| function.eval(x, &ctx)).collect::<Result<_>>()?;
        for (&x, v) in xs.iter().zip(vals) {
            rows.push(FigureRow {
                x_or_t: x,
                function_id: name.to_string(),
                value: (v * scale).to_f64(),
                u: None,
                v: None,
                t: cfg.figure_t,
                j,
            });
        }
    }
    Ok(rows)
}

/// All six figure tables, in order fig1..fig6.
pub fn figure_tables(cfg: &RunConfig) -> Result<Vec<(String, Vec<FigureRow>)>> {
    use FunctionId::*;
    Ok(vec![
        ("fig1".into(), quotient_rows(cfg, ThetaIndex::Two)?),
        ("fig2".into(), quotient_rows(cfg, ThetaIndex::Three)?),
        ("fig3".into(), edge_rows(cfg, &[(A1Near, "10A1", 10.0), (A2Near, "A2", 1.0)], 2)?),
        ("fig4".into(), edge_rows(cfg, &[(G2, "G2", 1.0)], 2)?),
        ("fig5".into(), edge_rows(cfg, &[(A1Top, "A1_top", 1.0), (A2Top, "A2_top", 1.0)], 3)?),
        ("fig6".into(), edge_rows(cfg, &[(G3, "G3", 1.0)], 3)?),
    ])
}

/// Writes fig1.csv .. fig6.csv into the output directory.
pub fn cmd_figures(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    let mut written = Vec::new();
    for (name, rows) in figure_tables(cfg)? {
        let path = cfg.output_dir.join(format!("{name}.csv"));
        std::fs::write(&path, to_csv(&rows))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            FigureRow { x_or_t: 0.1, function_id: "S2".into(), value: 1.0 / 3.0, u: Some(0.2), v: Some(0.8), t: 0.1, j: 2 },
            FigureRow { x_or_t: 0.25, function_id: "G3".into(), value: -1e-300, u: None, v: None, t: 0.5, j: 3 },
        ];
        assert_eq!(parse_csv(&to_csv(&rows)).unwrap(), rows);
    }
}
