use core::fmt::Write;

use super::{CoverageMode, GreedyConfig};
use crate::coupling::CoupledNetwork;
use crate::diffusion::InfluenceGraph;
use crate::error::{Error, Result};
use crate::COVERAGE_TOLERANCE;

const TERMS_PER_LINE: usize = 8;

/// Shape of an exported program.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IlpSummary {
    /// Horizon `D` in coupled hops.
    pub horizon: usize,
    pub binaries: usize,
    pub coverage_constraints: usize,
    pub activation_constraints: usize,
    pub monotonicity_constraints: usize,
    /// Right-hand side of the coverage constraint.
    pub coverage_rhs: f64,
}

/// Writes a linear expression, breaking long rows.
struct Row<'w, W: Write> {
    out: &'w mut W,
    terms: usize,
}

impl<'w, W: Write> Row<'w, W> {
    fn start(out: &'w mut W, label: &str) -> Result<Self> {
        write!(out, " {label}:")?;
        Ok(Row { out, terms: 0 })
    }

    fn term(&mut self, coefficient: f64, v: usize, hop: usize) -> Result<()> {
        if self.terms > 0 && self.terms.is_multiple_of(TERMS_PER_LINE) {
            self.out.write_str("\n   ")?;
        }
        let sign = if coefficient < 0.0 { '-' } else { '+' };
        let magnitude = coefficient.abs();
        if self.terms == 0 && sign == '+' {
            self.out.write_char(' ')?;
        } else {
            write!(self.out, " {sign} ")?;
        }
        if magnitude != 1.0 {
            write!(self.out, "{magnitude} ")?;
        }
        write!(self.out, "x_{v}_{hop}")?;
        self.terms += 1;
        Ok(())
    }

    fn end(self, tail: core::fmt::Arguments<'_>) -> Result<()> {
        if self.terms == 0 {
            self.out.write_str(" 0 x_0_0")?;
        }
        writeln!(self.out, " {tail}")?;
        Ok(())
    }
}

/// Exports the program for `coupled` in CPLEX LP format, horizon
/// `hop_scale * cfg.hops`, coverage measured per `cfg.coverage_mode`.
pub fn export_ilp<W: Write>(
    coupled: &CoupledNetwork,
    cfg: &GreedyConfig,
    out: &mut W,
) -> Result<IlpSummary> {
    cfg.check()?;
    export_ilp_graph(
        coupled.graph(),
        coupled.hop_scale() * cfg.hops,
        cfg.beta,
        cfg.coverage_mode,
        out,
    )
}

/// Exact program for minimum seeding on an influence graph with horizon
/// `horizon`. Binary `x_v_i` says vertex `v` is active after `i` hops.
///
/// * minimise `sum_v x_v_0`
/// * coverage: `sum_v c_v x_v_D >= beta * C`
/// * activation: `sum_{u -> v} w(u, v) x_u_{i-1} + theta_v x_v_{i-1} - theta_v x_v_i >= 0`
/// * monotonicity: `x_v_i - x_v_{i-1} >= 0`
///
/// With integral coverage coefficients the right-hand side is rounded up
/// after subtracting the solver's coverage tolerance.
pub fn export_ilp_graph<W: Write>(
    graph: &InfluenceGraph,
    horizon: usize,
    beta: f64,
    mode: CoverageMode,
    out: &mut W,
) -> Result<IlpSummary> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "beta must lie in (0, 1], got {beta}"
        )));
    }
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::InvalidParameter("empty graph".into()));
    }
    let coefficient = |v: usize| match mode {
        CoverageMode::Count => 1.0,
        CoverageMode::Weight => graph.node_weight(v),
    };
    let total: f64 = (0..n).map(coefficient).sum();
    let integral = (0..n).all(|v| coefficient(v) == libm::floor(coefficient(v)));
    let mut rhs = beta * total - COVERAGE_TOLERANCE * total.max(1.0);
    if integral {
        rhs = libm::ceil(rhs);
    }

    writeln!(
        out,
        "\\ minimum seeding, {n} vertices, horizon {horizon}, beta {beta}"
    )?;
    writeln!(out, "Minimize")?;
    let mut row = Row::start(out, "seeds")?;
    for v in 0..n {
        row.term(1.0, v, 0)?;
    }
    row.end(format_args!(""))?;

    writeln!(out, "Subject To")?;
    let mut row = Row::start(out, "cover")?;
    for v in 0..n {
        let c = coefficient(v);
        if c != 0.0 {
            row.term(c, v, horizon)?;
        }
    }
    row.end(format_args!(">= {rhs}"))?;

    let mut activation = 0;
    for i in 1..=horizon {
        for v in 0..n {
            let theta = graph.threshold(v);
            let mut row = Row::start(out, &alloc::format!("act_{v}_{i}"))?;
            for (u, w) in graph.in_edges(v) {
                if w != 0.0 {
                    row.term(w, u, i - 1)?;
                }
            }
            row.term(theta, v, i - 1)?;
            row.term(-theta, v, i)?;
            row.end(format_args!(">= 0"))?;
            activation += 1;
        }
    }

    let mut monotonicity = 0;
    for i in 1..=horizon {
        for v in 0..n {
            writeln!(out, " mono_{v}_{i}: x_{v}_{i} - x_{v}_{} >= 0", i - 1)?;
            monotonicity += 1;
        }
    }

    writeln!(out, "Binaries")?;
    let mut binaries = 0;
    for v in 0..n {
        for i in 0..=horizon {
            if binaries % TERMS_PER_LINE == 0 {
                if binaries > 0 {
                    out.write_char('\n')?;
                }
                out.write_char(' ')?;
            }
            write!(out, " x_{v}_{i}")?;
            binaries += 1;
        }
    }
    writeln!(out)?;
    writeln!(out, "End")?;

    Ok(IlpSummary {
        horizon,
        binaries,
        coverage_constraints: 1,
        activation_constraints: activation,
        monotonicity_constraints: monotonicity,
        coverage_rhs: rhs,
    })
}
