//! `count`, `entropy`, `graph` and `weights`.

use std::fmt::Write as _;

use geoflow_core::algebra::Count;
use geoflow_core::analysis::{
    closed_count, closed_n, closed_n_domain, pgl2_closed, spr_report, CycleKind, SprReport,
};
use geoflow_core::building::Building;
use geoflow_core::shift::{
    build_graph, dp_f_series, dp_g_series, dp_profiles, QuotientEdge, WeightTable,
};
use serde_json::{json, Value};

use crate::config::{Flow, Format, Kind, Method, RunConfig};
use crate::{exec_for, CliError};

pub fn edge_json(e: &QuotientEdge) -> Value {
    json!({ "k2": e.k2(), "l2": e.l2() })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn no_dot(what: &str) -> CliError {
    CliError::invalid(format!("{what} has no dot format; use human, json or csv"))
}

pub fn building_for(cfg: &RunConfig) -> Result<Building, CliError> {
    let dim = match cfg.flow {
        Flow::Pgl3 => 3,
        Flow::Pgl2 => 2,
    };
    Ok(Building::new(cfg.field()?, dim)?)
}

fn period(flow: Flow) -> usize {
    match flow {
        Flow::Pgl3 => 3,
        Flow::Pgl2 => 2,
    }
}

/// `(n, count)` for `n = period, 2 period, ..., <= steps`.
pub fn count_rows(cfg: &RunConfig) -> Result<Vec<(usize, Count)>, CliError> {
    let kind = match cfg.kind {
        Kind::G => CycleKind::G,
        Kind::F => CycleKind::F,
        Kind::N => return Err(CliError::invalid("kind N is a profile; use count_profile")),
    };
    let p = period(cfg.flow);
    let lengths: Vec<usize> = (p..=cfg.steps).step_by(p).collect();
    let q = cfg.q64();
    match (cfg.flow, cfg.method) {
        (Flow::Pgl2, Method::Dp) => Err(CliError::invalid(
            "the tree flow has no DP method; use --method closed or --method oracle",
        )),
        (Flow::Pgl3, Method::Dp) => {
            let series = match kind {
                CycleKind::G => dp_g_series(q, cfg.steps),
                CycleKind::F => dp_f_series(q, cfg.steps),
            };
            Ok(lengths
                .into_iter()
                .map(|n| (n, series[n].clone()))
                .collect())
        }
        (flow, Method::Closed) => Ok(lengths
            .into_iter()
            .map(|n| {
                let c = match flow {
                    Flow::Pgl3 => closed_count(q, n as u64, kind),
                    Flow::Pgl2 => pgl2_closed(q, n as u64, kind),
                };
                (n, c)
            })
            .collect()),
        (_, Method::Oracle) => {
            let b = building_for(cfg)?;
            let series = b.oracle_series(cfg.steps, cfg.budget, exec_for(cfg))?;
            Ok(lengths
                .into_iter()
                .map(|n| {
                    let c = &series[n];
                    let v = match kind {
                        CycleKind::G => c.plain.clone(),
                        CycleKind::F => c.first_return.clone(),
                    };
                    (n, v)
                })
                .collect())
        }
    }
}

/// Terminal profile `N_steps` over quotient edges, nonzero entries only.
pub fn count_profile(cfg: &RunConfig) -> Result<Vec<(QuotientEdge, Count)>, CliError> {
    if cfg.flow == Flow::Pgl2 {
        return Err(CliError::invalid(
            "kind N is defined for the pgl3 flow only",
        ));
    }
    let q = cfg.q64();
    match cfg.method {
        Method::Oracle => Err(CliError::invalid("kind N supports --method dp or closed")),
        Method::Dp => {
            let profile = dp_profiles(q, cfg.steps).pop().expect("steps + 1 profiles");
            Ok(profile.iter().map(|(e, c)| (*e, c.clone())).collect())
        }
        Method::Closed => {
            if !cfg.steps.is_multiple_of(3) {
                return Err(CliError::invalid(
                    "the closed N-table needs steps divisible by 3",
                ));
            }
            let n = (cfg.steps / 3) as u64;
            let mut out = Vec::new();
            for (k2, l2) in closed_n_domain(n) {
                let c = closed_n(q, n, k2, l2)?;
                if c != Count::default() {
                    out.push((QuotientEdge::from_doubled(k2, l2)?, c));
                }
            }
            Ok(out)
        }
    }
}

pub fn count(cfg: &RunConfig) -> Result<String, CliError> {
    let head = json!({
        "q": cfg.q,
        "flow": cfg.flow.to_string(),
        "method": cfg.method.to_string(),
        "kind": cfg.kind.to_string(),
        "steps": cfg.steps,
    });
    if cfg.kind == Kind::N {
        let profile = count_profile(cfg)?;
        return match cfg.format {
            Format::Dot => Err(no_dot("count")),
            Format::Json => {
                let mut v = head;
                v["profile"] = profile
                    .iter()
                    .map(|(e, c)| json!({ "edge": edge_json(e), "count": c.to_string() }))
                    .collect();
                Ok(pretty(&v))
            }
            Format::Csv => {
                let mut s = String::from("k2,l2,count\n");
                for (e, c) in &profile {
                    writeln!(s, "{},{},{c}", e.k2(), e.l2()).unwrap();
                }
                Ok(s)
            }
            Format::Human => {
                let mut s = format!("# N_{} at q = {} ({})\n", cfg.steps, cfg.q, cfg.method);
                let mut total = Count::default();
                for (e, c) in &profile {
                    writeln!(s, "{:<16} {c}", e.to_string()).unwrap();
                    total += c;
                }
                writeln!(s, "{:<16} {total}", "total").unwrap();
                Ok(s)
            }
        };
    }
    let rows = count_rows(cfg)?;
    match cfg.format {
        Format::Dot => Err(no_dot("count")),
        Format::Json => {
            let mut v = head;
            v["rows"] = rows
                .iter()
                .map(|(n, c)| json!({ "n": n, "count": c.to_string() }))
                .collect();
            Ok(pretty(&v))
        }
        Format::Csv => {
            let mut s = String::from("n,count\n");
            for (n, c) in &rows {
                writeln!(s, "{n},{c}").unwrap();
            }
            Ok(s)
        }
        Format::Human => {
            let mut s = format!(
                "# {}_n  q = {}  flow = {}  method = {}\n",
                cfg.kind, cfg.q, cfg.flow, cfg.method
            );
            for (n, c) in &rows {
                writeln!(s, "{n:>4}  {c}").unwrap();
            }
            Ok(s)
        }
    }
}

pub fn spr_json(r: &SprReport) -> Value {
    json!({
        "q": r.q,
        "h_nats": r.h,
        "growth_f_nats": r.growth_f,
        "margin_nats": r.margin,
        "paper_claimed_growth_nats": r.paper_claimed_growth,
        "spr": r.spr,
        "exact": {
            "h": [r.exact_h.a, r.exact_h.b],
            "growth_f": [r.exact_growth_f.a, r.exact_growth_f.b],
            "margin": [r.exact_margin.a, r.exact_margin.b],
        },
        "note": r.note,
    })
}

pub fn entropy(cfg: &RunConfig) -> Result<String, CliError> {
    let r = spr_report(cfg.q64())?;
    match cfg.format {
        Format::Dot => Err(no_dot("entropy")),
        Format::Json => Ok(pretty(&spr_json(&r))),
        Format::Csv => {
            let mut s = String::from("quantity,nats,exact_a,exact_b\n");
            writeln!(s, "h,{},{},{}", r.h, r.exact_h.a, r.exact_h.b).unwrap();
            writeln!(
                s,
                "growth_f,{},{},{}",
                r.growth_f, r.exact_growth_f.a, r.exact_growth_f.b
            )
            .unwrap();
            writeln!(
                s,
                "margin,{},{},{}",
                r.margin, r.exact_margin.a, r.exact_margin.b
            )
            .unwrap();
            writeln!(s, "paper_claimed_growth,{},5,0", r.paper_claimed_growth).unwrap();
            writeln!(s, "spr,{},,", r.spr).unwrap();
            Ok(s)
        }
        Format::Human => {
            let form = |f: geoflow_core::analysis::LogForm| {
                format!("(1/3) log(q^{} (q^2+q-1)^{})", f.a, f.b)
            };
            let mut s = format!("q = {}  (natural log; exact forms in q)\n", r.q);
            writeln!(s, "h                     {:.6}  {}", r.h, form(r.exact_h)).unwrap();
            writeln!(
                s,
                "growth_f              {:.6}  {}",
                r.growth_f,
                form(r.exact_growth_f)
            )
            .unwrap();
            writeln!(
                s,
                "margin                {:.6}  {}",
                r.margin,
                form(r.exact_margin)
            )
            .unwrap();
            writeln!(
                s,
                "paper_claimed_growth  {:.6}  (5/3) log q",
                r.paper_claimed_growth
            )
            .unwrap();
            writeln!(s, "spr                   {}", r.spr).unwrap();
            writeln!(s, "note: {}", r.note).unwrap();
            Ok(s)
        }
    }
}

/// Edge list of `table` in the requested format.
pub fn render_table(table: &WeightTable, source: &str, format: Format) -> String {
    match format {
        Format::Dot => {
            let mut s = String::from("digraph D {\n");
            for (from, to, w) in table.iter() {
                writeln!(s, "  \"{from}\" -> \"{to}\" [label=\"{w}\"];").unwrap();
            }
            s.push_str("}\n");
            s
        }
        Format::Json => {
            let edges: Vec<Value> = table
                .iter()
                .map(|(from, to, w)| json!({ "from": edge_json(&from), "to": edge_json(&to), "weight": w.to_string() }))
                .collect();
            pretty(&json!({
                "q": table.q(),
                "m_max": table.m_max(),
                "source": source,
                "edges": edges,
            }))
        }
        Format::Csv => {
            let mut s = String::from("from_k2,from_l2,to_k2,to_l2,weight\n");
            for (from, to, w) in table.iter() {
                writeln!(s, "{},{},{},{},{w}", from.k2(), from.l2(), to.k2(), to.l2()).unwrap();
            }
            s
        }
        Format::Human => {
            let mut s = format!(
                "# {source} weights, q = {}, m <= {}\n",
                table.q(),
                table.m_max()
            );
            for from in table.edges() {
                let succ = table.successors(from).expect("listed edge");
                let total: u64 = succ.values().sum();
                let parts: Vec<String> = succ.iter().map(|(to, w)| format!("{to} x{w}")).collect();
                writeln!(
                    s,
                    "{:<14} out {total:<4} {}",
                    from.to_string(),
                    parts.join(", ")
                )
                .unwrap();
            }
            s
        }
    }
}

pub fn graph(cfg: &RunConfig) -> Result<String, CliError> {
    if cfg.m_max < 2 {
        return Err(CliError::invalid(format!(
            "m-max = {} must be at least 2",
            cfg.m_max
        )));
    }
    Ok(render_table(
        &build_graph(cfg.q64(), cfg.m_max),
        "fold-rule",
        cfg.format,
    ))
}

pub fn weights(cfg: &RunConfig, from_oracle: bool) -> Result<String, CliError> {
    if cfg.m_max < 1 {
        return Err(CliError::invalid(format!(
            "m-max = {} must be at least 1",
            cfg.m_max
        )));
    }
    if !from_oracle {
        return Ok(render_table(
            &build_graph(cfg.q64(), cfg.m_max),
            "fold-rule",
            cfg.format,
        ));
    }
    if cfg.flow != Flow::Pgl3 {
        return Err(CliError::invalid(
            "the weight census is defined for the pgl3 flow",
        ));
    }
    let census = building_for(cfg)?.oracle_transition_census(cfg.m_max)?;
    Ok(render_table(&census.table, "oracle", cfg.format))
}
