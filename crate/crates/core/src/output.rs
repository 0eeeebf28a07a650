//! CSV emission and parsing plus the plain-text run summary.
//!
//! Floats are written with `{:.16e}` (17 significant digits) so every value
//! read back is bit-identical to the one written.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::diagnostics::{LyapunovSeries, MonotoneReport};
use crate::model::{Equilibrium, EquilibriumKind, R0Breakdown};
use crate::sensitivity::TornadoRow;
use crate::solver::{ConvergenceReport, FieldState, Grid1D, Scheme};

pub const TRAJECTORY_HEADER: &str = "time,x,S,I,V";
pub const LYAPUNOV_HEADER: &str = "step,time,value,kind";
pub const TORNADO_HEADER: &str = "parameter,prcc,abs_prcc,significant";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub time: f64,
    pub x: f64,
    pub s: f64,
    pub i: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovRow {
    pub step: usize,
    pub time: f64,
    pub value: f64,
    pub kind: EquilibriumKind,
}

/// "L" for the disease-free functional, "H" for the endemic one.
pub fn functional_tag(kind: EquilibriumKind) -> &'static str {
    match kind {
        EquilibriumKind::DiseaseFree => "L",
        EquilibriumKind::Endemic => "H",
    }
}

fn tag_kind(tag: &str) -> Option<EquilibriumKind> {
    match tag {
        "L" => Some(EquilibriumKind::DiseaseFree),
        "H" => Some(EquilibriumKind::Endemic),
        _ => None,
    }
}

pub fn write_trajectory_csv<W: Write>(mut w: W, grid: &Grid1D, snapshots: &[FieldState]) -> io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for state in snapshots {
        for n in 0..state.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                state.t,
                grid.node(n),
                state.s[n],
                state.i[n],
                state.v[n]
            )?;
        }
    }
    w.flush()
}

/// One row per recorded step; `step` is the position in the series.
pub fn write_lyapunov_csv<W: Write>(mut w: W, series: &LyapunovSeries) -> io::Result<()> {
    writeln!(w, "{LYAPUNOV_HEADER}")?;
    let tag = functional_tag(series.kind);
    for (k, (t, v)) in series.times.iter().zip(&series.values).enumerate() {
        writeln!(w, "{k},{t:.16e},{v:.16e},{tag}")?;
    }
    w.flush()
}

pub fn write_tornado_csv<W: Write>(mut w: W, rows: &[TornadoRow]) -> io::Result<()> {
    writeln!(w, "{TORNADO_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{}",
            r.parameter,
            r.prcc,
            r.abs_prcc,
            u8::from(r.significant)
        )?;
    }
    w.flush()
}

fn bad(line: usize, msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, format!("line {line}: {}", msg.into()))
}

/// Splits the body into comma-separated records after checking the header.
fn records<'a>(text: &'a str, header: &str, width: usize) -> io::Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == header => {}
        _ => return Err(bad(1, format!("expected header `{header}`"))),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            let fields: Vec<&str> = l.split(',').map(str::trim).collect();
            if fields.len() != width {
                return Err(bad(k + 1, format!("expected {width} fields, got {}", fields.len())));
            }
            Ok((k + 1, fields))
        })
        .collect()
}

fn num<T: std::str::FromStr>(line: usize, field: &str) -> io::Result<T> {
    field.parse().map_err(|_| bad(line, format!("cannot parse `{field}`")))
}

pub fn read_trajectory_csv(text: &str) -> io::Result<Vec<TrajectoryRow>> {
    records(text, TRAJECTORY_HEADER, 5)?
        .into_iter()
        .map(|(line, f)| {
            Ok(TrajectoryRow {
                time: num(line, f[0])?,
                x: num(line, f[1])?,
                s: num(line, f[2])?,
                i: num(line, f[3])?,
                v: num(line, f[4])?,
            })
        })
        .collect()
}

pub fn read_lyapunov_csv(text: &str) -> io::Result<Vec<LyapunovRow>> {
    records(text, LYAPUNOV_HEADER, 4)?
        .into_iter()
        .map(|(line, f)| {
            Ok(LyapunovRow {
                step: num(line, f[0])?,
                time: num(line, f[1])?,
                value: num(line, f[2])?,
                kind: tag_kind(f[3]).ok_or_else(|| bad(line, format!("unknown functional `{}`", f[3])))?,
            })
        })
        .collect()
}

pub fn read_tornado_csv(text: &str) -> io::Result<Vec<TornadoRow>> {
    records(text, TORNADO_HEADER, 4)?
        .into_iter()
        .map(|(line, f)| {
            let significant = match f[3] {
                "0" => false,
                "1" => true,
                other => return Err(bad(line, format!("significant must be 0 or 1, got `{other}`"))),
            };
            Ok(TornadoRow {
                parameter: f[0].to_string(),
                prcc: num(line, f[1])?,
                abs_prcc: num(line, f[2])?,
                significant,
            })
        })
        .collect()
}

/// Everything summary.txt reports about one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub r0: R0Breakdown,
    pub disease_free: Equilibrium,
    pub endemic: Option<Equilibrium>,
    pub scheme: Scheme,
    pub dt: f64,
    pub grid: Grid1D,
    /// Missing only when the run failed before its first step.
    pub report: Option<ConvergenceReport>,
    pub lyapunov: Option<(EquilibriumKind, MonotoneReport)>,
    /// Why the Lyapunov series stopped early, if it did.
    pub lyapunov_note: Option<String>,
    pub failure: Option<String>,
}

/// Verdict names used in the summary; exactly one appears per file.
pub const VERDICTS: [&str; 3] = ["DiseaseFree", "Endemic", "NotConverged"];

fn triple(e: &Equilibrium) -> String {
    format!("({:.6e}, {:.6e}, {:.6e})", e.s, e.i, e.v)
}

impl RunSummary {
    pub fn verdict(&self) -> &'static str {
        match (&self.report, &self.failure) {
            (Some(r), None) => match r.verdict {
                crate::solver::Verdict::DiseaseFree => VERDICTS[0],
                crate::solver::Verdict::Endemic => VERDICTS[1],
                crate::solver::Verdict::NotConverged => VERDICTS[2],
            },
            _ => VERDICTS[2],
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "R0 = {:.6} (R01 = {:.6}, R02 = {:.6})",
            self.r0.total, self.r0.r01, self.r0.r02
        );
        let _ = writeln!(s, "E0 (S, I, V) = {}", triple(&self.disease_free));
        match &self.endemic {
            Some(e) => {
                let _ = writeln!(s, "E* (S, I, V) = {}", triple(e));
            }
            None => s.push_str("E* (S, I, V) = none (R0 <= 1)\n"),
        }
        let _ = writeln!(
            s,
            "scheme = {}, dt = {}, dx = {}, M = {}, domain = [{}, {}]",
            self.scheme,
            self.dt,
            self.grid.dx(),
            self.grid.cells(),
            self.grid.a(),
            self.grid.b()
        );
        if let Some(r) = &self.report {
            let _ = writeln!(s, "steps = {}, final time = {}", r.steps, r.final_time);
            let _ = writeln!(s, "steady residual = {:.3e}", r.final_residual);
        }
        let _ = writeln!(s, "converged-to: {}", self.verdict());
        if let Some(r) = &self.report {
            let name = match r.nearest.kind {
                EquilibriumKind::DiseaseFree => "E0",
                EquilibriumKind::Endemic => "E*",
            };
            let _ = writeln!(s, "distance = {:.6e} (relative sup norm to {name})", r.distance);
            match r.first_nonpositive {
                Some((k, t)) => {
                    let _ = writeln!(s, "positivity: violated, first offending step {k} (t = {t})");
                }
                None => s.push_str("positivity: preserved\n"),
            }
        }
        if let Some((kind, m)) = &self.lyapunov {
            let _ = writeln!(
                s,
                "lyapunov {}: {}, {} violation(s)",
                functional_tag(*kind),
                if m.passed { "nonincreasing" } else { "increased" },
                m.violations.len()
            );
        }
        if let Some(note) = &self.lyapunov_note {
            let _ = writeln!(s, "lyapunov note: {note}");
        }
        match &self.failure {
            Some(f) => {
                let _ = writeln!(s, "status: failed: {f}");
            }
            None => s.push_str("status: ok\n"),
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_round_trip_is_exact() {
        let grid = Grid1D::new(0.0, 1.0, 3).unwrap();
        let mut st = FieldState::from_fn(&grid, |x| 1.0 / 3.0 + x, |x| (x * 7.1).exp(), |x| 1e-300 + x);
        st.t = 0.1 + 0.2;
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &grid, std::slice::from_ref(&st)).unwrap();
        let rows = read_trajectory_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(rows.len(), 4);
        for (n, r) in rows.iter().enumerate() {
            assert_eq!(r.time.to_bits(), st.t.to_bits());
            assert_eq!(r.x.to_bits(), grid.node(n).to_bits());
            assert_eq!((r.s, r.i, r.v), (st.s[n], st.i[n], st.v[n]));
        }
    }

    #[test]
    fn lyapunov_round_trip() {
        let mut series = LyapunovSeries::new(EquilibriumKind::Endemic);
        series.push(0.0, 1.234_567_890_123_456_7e24);
        series.push(1.0, std::f64::consts::PI);
        let mut buf = Vec::new();
        write_lyapunov_csv(&mut buf, &series).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("step,time,value,kind\n"));
        let rows = read_lyapunov_csv(&text).unwrap();
        assert_eq!(rows[1].step, 1);
        assert_eq!(rows[0].value, series.values[0]);
        assert_eq!(rows[1].kind, EquilibriumKind::Endemic);
    }

    #[test]
    fn reader_rejects_wrong_header() {
        assert!(read_tornado_csv("a,b,c,d\n").is_err());
        assert!(read_tornado_csv("parameter,prcc,abs_prcc,significant\nx,1,1,2\n").is_err());
    }
}
