//! The cross-validation matrix behind `geoflow validate`.

use std::fmt::Write as _;

use geoflow_core::algebra::Count;
use geoflow_core::analysis::{
    closed_f, closed_g, closed_n, closed_n_domain, closed_n_overlaps, pgl2_closed, renewal_f,
    shell, spr_report, vacuous_rows, CycleKind, LogForm, NRow,
};
use geoflow_core::building::{Building, OracleCounts};
use geoflow_core::shift::{
    build_graph, dp_f_series, dp_g_series, dp_profiles, three_step_coefficients,
    three_step_feeders, QuotientEdge, WeightTable, BASE_EDGE,
};
use geoflow_core::Error;
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::commands::building_for;
use crate::config::{Flow, Format, RunConfig};
use crate::{exec_for, CliError, Outcome, EXIT_MISMATCH, EXIT_OK};

/// The fixed check list, in report order.
pub const CHECKS: [&str; 16] = [
    "closed-g",
    "closed-f",
    "renewal",
    "period",
    "ratio-rigidity",
    "oracle-g",
    "oracle-f",
    "weight-census",
    "weight-alphabet",
    "out-sums",
    "prefix-independence",
    "three-step",
    "n-table",
    "spr",
    "pgl2-oracle",
    "pgl2-renewal",
];

/// Longest prefix for the independence check.
pub const PREFIX_LEN: usize = 6;
/// Cap on invariant evaluations spent on the prefix census.
pub const PREFIX_WORK: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, expected: String, actual: String, detail: String) -> Self {
        Check {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            expected,
            actual,
            detail,
        }
    }

    fn skipped(name: &'static str, detail: String) -> Self {
        Check {
            name,
            status: Status::Skipped,
            expected: String::new(),
            actual: String::new(),
            detail,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub q: u32,
    pub steps: usize,
    pub m_max: i64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// One perturbed fold-rule weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fault {
    pub from: QuotientEdge,
    pub to: QuotientEdge,
    pub weight: u64,
}

impl Fault {
    /// `K2,L2:K2,L2:W` with doubled indices.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::invalid(format!("fault {s:?} is not K2,L2:K2,L2:W"));
        let parts: Vec<&str> = s.split(':').collect();
        let [from, to, w] = parts.as_slice() else {
            return Err(bad());
        };
        let edge = |t: &str| -> Result<QuotientEdge, CliError> {
            let (k, l) = t.split_once(',').ok_or_else(bad)?;
            let k2 = k.trim().parse().map_err(|_| bad())?;
            let l2 = l.trim().parse().map_err(|_| bad())?;
            Ok(QuotientEdge::from_doubled(k2, l2)?)
        };
        Ok(Fault {
            from: edge(from)?,
            to: edge(to)?,
            weight: w.trim().parse().map_err(|_| bad())?,
        })
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn multiples(period: usize, steps: usize) -> Vec<usize> {
    (period..=steps).step_by(period).collect()
}

fn compare_series(name: &'static str, steps: usize, expected: &[Count], actual: &[Count]) -> Check {
    let bad: Vec<String> = (1..=steps)
        .filter(|&n| expected[n] != actual[n])
        .map(|n| format!("n={n}: expected {} got {}", expected[n], actual[n]))
        .collect();
    Check::new(
        name,
        bad.is_empty(),
        list(&expected[1..]),
        list(&actual[1..]),
        if bad.is_empty() {
            format!("n = 1..{steps}")
        } else {
            bad.join("; ")
        },
    )
}

fn oracle_checks(cfg: &RunConfig, g: &[Count], f: &[Count]) -> Result<[Check; 2], CliError> {
    let b = Building::new(cfg.field()?, 3)?;
    match b.oracle_series(cfg.steps, cfg.budget, exec_for(cfg)) {
        Ok(series) => {
            let plain: Vec<Count> = series.iter().map(|c| c.plain.clone()).collect();
            let first: Vec<Count> = series.iter().map(|c| c.first_return.clone()).collect();
            Ok([
                compare_series("oracle-g", cfg.steps, g, &plain),
                compare_series("oracle-f", cfg.steps, f, &first),
            ])
        }
        Err(Error::BudgetExceeded { leaves, limit }) => {
            let why = format!("budget refused: {leaves} leaves > limit {limit}");
            Ok([
                Check::skipped("oracle-g", why.clone()),
                Check::skipped("oracle-f", why),
            ])
        }
        Err(e) => Err(e.into()),
    }
}

fn census_checks(cfg: &RunConfig, fault: Option<Fault>) -> Result<[Check; 3], CliError> {
    let q = cfg.q64();
    let mut fold = build_graph(q, cfg.m_max);
    if let Some(f) = fault {
        fold.set_weight(f.from, f.to, f.weight);
    }
    let census = building_for(&RunConfig {
        flow: Flow::Pgl3,
        ..cfg.clone()
    })?
    .oracle_transition_census(cfg.m_max)?;
    let measured = &census.table;

    let mut problems: Vec<String> = census
        .table
        .mismatches(&fold)
        .iter()
        .map(|m| {
            format!(
                "{} -> {}: oracle {} fold-rule {}",
                m.from, m.to, m.expected, m.actual
            )
        })
        .collect();
    for e in measured.edges().filter(|e| !fold.contains(e)) {
        problems.push(format!(
            "{e} reached by the oracle but missing from the fold-rule graph"
        ));
    }
    for e in fold.edges().filter(|e| !measured.contains(e)) {
        problems.push(format!(
            "{e} in the fold-rule graph but not reached by the oracle"
        ));
    }
    let census_check = Check::new(
        "weight-census",
        problems.is_empty(),
        format!("{} edges", measured.len()),
        format!("{} edges", fold.len()),
        if problems.is_empty() {
            format!("all transitions agree for m <= {}", cfg.m_max)
        } else {
            problems.join("; ")
        },
    );

    let alphabet = WeightTable::weight_alphabet(q);
    let mut off: Vec<String> = Vec::new();
    for (label, t) in [("fold-rule", &fold), ("oracle", measured)] {
        for (from, to, w) in t.alphabet_violations() {
            off.push(format!("{label} {from} -> {to}: weight {w}"));
        }
    }
    let alphabet_check = Check::new(
        "weight-alphabet",
        off.is_empty(),
        format!("{{{}}}", list(&alphabet.iter().collect::<Vec<_>>())),
        if off.is_empty() {
            "within alphabet".into()
        } else {
            format!("{} outside", off.len())
        },
        if off.is_empty() {
            format!(
                "{} fold-rule and {} oracle transitions",
                fold.iter().count(),
                measured.iter().count()
            )
        } else {
            off.join("; ")
        },
    );

    let mut sums: Vec<String> = Vec::new();
    for (label, t) in [("fold-rule", &fold), ("oracle", measured)] {
        for (e, s) in t.out_sum_violations() {
            sums.push(format!("{label} {e}: out-sum {s}"));
        }
    }
    let sums_check = Check::new(
        "out-sums",
        sums.is_empty(),
        format!("{}", q * q),
        if sums.is_empty() {
            format!("{}", q * q)
        } else {
            format!("{} violations", sums.len())
        },
        if sums.is_empty() {
            format!(
                "{} fold-rule and {} oracle sources",
                fold.len(),
                measured.len()
            )
        } else {
            sums.join("; ")
        },
    );
    Ok([census_check, alphabet_check, sums_check])
}

fn prefix_check(cfg: &RunConfig) -> Result<Check, CliError> {
    let b = Building::new(cfg.field()?, 3)?;
    let mut len = cfg.steps.min(PREFIX_LEN);
    while len > 1 && b.leaf_estimate(len + 1) > PREFIX_WORK.min(cfg.budget) {
        len -= 1;
    }
    match b.prefix_census(len, cfg.budget) {
        Ok(census) => {
            let dependent = census.prefix_dependent();
            Ok(Check::new(
                "prefix-independence",
                dependent.is_empty(),
                "one transition multiset per quotient edge".into(),
                format!("{} dependent edges", dependent.len()),
                if dependent.is_empty() {
                    format!(
                        "prefixes up to length {len}, {} lifted edges",
                        census.edges_examined
                    )
                } else {
                    format!("prefix-dependent: {}", list(&dependent))
                },
            ))
        }
        Err(Error::BudgetExceeded { leaves, limit }) => Ok(Check::skipped(
            "prefix-independence",
            format!("budget refused: {leaves} leaves > limit {limit}"),
        )),
        Err(e) => Err(e.into()),
    }
}

fn three_step_check(q: u64) -> Check {
    let coeffs = match three_step_coefficients(q) {
        Ok(c) => c,
        Err(e) => {
            return Check::new(
                "three-step",
                false,
                String::new(),
                String::new(),
                e.to_string(),
            )
        }
    };
    let feeders = three_step_feeders();
    let profiles = dp_profiles(q, 12);
    let mut bad = Vec::new();
    for n in 1..=3usize {
        let mut predicted = Count::default();
        for (e, c) in feeders.iter().zip(&coeffs) {
            predicted += c * profiles[3 * n].get(e);
        }
        let actual = profiles[3 * n + 3].get(&BASE_EDGE);
        if predicted != actual {
            bad.push(format!("n={n}: recursion {predicted} dp {actual}"));
        }
    }
    Check::new(
        "three-step",
        bad.is_empty(),
        "q^2(q^2-1)(q^2-q), q^4(q^2-q), q^4(q^2-q), q^6".into(),
        list(&coeffs),
        if bad.is_empty() {
            "reproduces N_{3n+3}(e(1/2,0)) for n = 1..3".into()
        } else {
            bad.join("; ")
        },
    )
}

fn n_table_check(q: u64, steps: usize) -> Result<Check, CliError> {
    let n_max = (steps / 3).max(1);
    let profiles = dp_profiles(q, 3 * n_max);
    let mut bad = Vec::new();
    let mut edges = 0usize;
    for n in 1..=n_max as u64 {
        let p = &profiles[3 * n as usize];
        let domain = closed_n_domain(n);
        for &(k2, l2) in &domain {
            let e = QuotientEdge::from_doubled(k2, l2)?;
            edges += 1;
            match closed_n(q, n, k2, l2) {
                Ok(c) if c == p.get(&e) => {}
                Ok(c) => bad.push(format!("n={n} {e}: table {c} dp {}", p.get(&e))),
                Err(err) => bad.push(format!("n={n} {e}: {err}")),
            }
        }
        for e in p.support() {
            if !domain.contains(&(e.k2(), e.l2())) {
                bad.push(format!("n={n} {e}: dp mass outside the table domain"));
            }
        }
    }
    let mut notes = Vec::new();
    for n in 1..=n_max as u64 {
        for r in vacuous_rows(n) {
            notes.push(format!("{r} vacuous at n={n}"));
        }
        for o in closed_n_overlaps(q, n, 6 * n as i64) {
            let rows: Vec<String> = o.rows.iter().map(|(r, v)| format!("{r}={v}")).collect();
            let e = QuotientEdge::from_doubled(o.k2, o.l2)?;
            let rule = if o.rows.iter().any(|(r, _)| *r == NRow::Beyond) {
                "vanishing row applied"
            } else {
                "rows agree"
            };
            notes.push(format!("n={n} {e}: {} ({rule})", rows.join(", ")));
        }
    }
    let detail = if bad.is_empty() {
        format!("{edges} edges, n = 1..{n_max}; {}", notes.join("; "))
    } else {
        bad.join("; ")
    };
    Ok(Check::new(
        "n-table",
        bad.is_empty(),
        "dp profiles".into(),
        format!("{} mismatches", bad.len()),
        detail,
    ))
}

fn spr_check(q: u64) -> Result<Check, CliError> {
    let r = spr_report(q)?;
    let want = (LogForm { a: 6, b: 0 }, LogForm { a: 3, b: 1 });
    let ok = r.spr && (r.exact_h, r.exact_growth_f) == want;
    Ok(Check::new(
        "spr",
        ok,
        format!("h {} growth_f {} spr true", want.0, want.1),
        format!(
            "h {} growth_f {} spr {}",
            r.exact_h, r.exact_growth_f, r.spr
        ),
        format!(
            "margin (1/3) log(q^3/{}) = {:.6}; paper_claimed_growth {:.6}",
            shell(q),
            r.margin,
            r.paper_claimed_growth
        ),
    ))
}

fn pgl2_checks(cfg: &RunConfig) -> Result<[Check; 2], CliError> {
    let q = cfg.q64();
    let b = Building::new(cfg.field()?, 2)?;
    let oracle = match b.oracle_series(cfg.steps, cfg.budget, exec_for(cfg)) {
        Ok(series) => {
            let mut bad = Vec::new();
            for (
                n,
                OracleCounts {
                    plain,
                    first_return,
                },
            ) in series.iter().enumerate().skip(1)
            {
                let (g, f) = (
                    pgl2_closed(q, n as u64, CycleKind::G),
                    pgl2_closed(q, n as u64, CycleKind::F),
                );
                if *plain != g || *first_return != f {
                    bad.push(format!(
                        "n={n}: closed ({g},{f}) oracle ({plain},{first_return})"
                    ));
                }
            }
            Check::new(
                "pgl2-oracle",
                bad.is_empty(),
                "q^{2m-1}(q-1), q^m(q-1) at n = 2m".into(),
                if bad.is_empty() {
                    "match".into()
                } else {
                    format!("{} mismatches", bad.len())
                },
                if bad.is_empty() {
                    format!("n = 1..{}", cfg.steps)
                } else {
                    bad.join("; ")
                },
            )
        }
        Err(Error::BudgetExceeded { leaves, limit }) => Check::skipped(
            "pgl2-oracle",
            format!("budget refused: {leaves} leaves > limit {limit}"),
        ),
        Err(e) => return Err(e.into()),
    };
    let g: Vec<Count> = (1..=5)
        .map(|m| pgl2_closed(q, 2 * m, CycleKind::G))
        .collect();
    let f: Vec<Count> = (1..=5)
        .map(|m| pgl2_closed(q, 2 * m, CycleKind::F))
        .collect();
    let got = renewal_f(&g)?;
    let renewal = Check::new(
        "pgl2-renewal",
        got == f,
        list(&f),
        list(&got),
        "n = 2..10".into(),
    );
    Ok([oracle, renewal])
}

/// Runs every check in [`CHECKS`]; `fault` perturbs the fold-rule table.
pub fn run_checks(cfg: &RunConfig, fault: Option<Fault>) -> Result<Report, CliError> {
    let q = cfg.q64();
    let steps = cfg.steps;
    let g = dp_g_series(q, steps);
    let f = dp_f_series(q, steps);
    let cg: Vec<Count> = (0..=steps as u64)
        .map(|n| {
            if n == 0 {
                Count::default()
            } else {
                closed_g(q, n)
            }
        })
        .collect();
    let cf: Vec<Count> = (0..=steps as u64)
        .map(|n| {
            if n == 0 {
                Count::default()
            } else {
                closed_f(q, n)
            }
        })
        .collect();
    let mut checks = vec![
        compare_series("closed-g", steps, &cg, &g),
        compare_series("closed-f", steps, &cf, &f),
    ];

    let mult = multiples(3, steps);
    let g3: Vec<Count> = mult.iter().map(|&n| g[n].clone()).collect();
    let f3: Vec<Count> = mult.iter().map(|&n| f[n].clone()).collect();
    let r = renewal_f(&g3)?;
    checks.push(Check::new(
        "renewal",
        r == f3,
        list(&f3),
        list(&r),
        format!("n = {}", list(&mult)),
    ));

    let nonzero: Vec<usize> = (1..=steps)
        .filter(|n| n % 3 != 0 && (g[*n] != BigUint::default() || f[*n] != BigUint::default()))
        .collect();
    checks.push(Check::new(
        "period",
        nonzero.is_empty(),
        "0 off multiples of 3".into(),
        if nonzero.is_empty() {
            "0".into()
        } else {
            format!("nonzero at n = {}", list(&nonzero))
        },
        format!("dp g and f, n = 1..{steps}"),
    ));

    let horizon = steps.max(12) / 3 * 3;
    let gh = dp_g_series(q, horizon);
    let fh = dp_f_series(q, horizon);
    let (rg, rf) = (
        BigUint::from(q).pow(6),
        BigUint::from(q).pow(3) * BigUint::from(shell(q)),
    );
    let mut drift = Vec::new();
    for n in multiples(3, horizon - 3) {
        if gh[n + 3] != &gh[n] * &rg {
            drift.push(format!("g_{} / g_{n}", n + 3));
        }
        if fh[n + 3] != &fh[n] * &rf {
            drift.push(format!("f_{} / f_{n}", n + 3));
        }
    }
    checks.push(Check::new(
        "ratio-rigidity",
        drift.is_empty(),
        format!("g ratio {rg}, f ratio {rf}"),
        if drift.is_empty() {
            "constant".into()
        } else {
            format!("drift at {}", drift.join(", "))
        },
        format!("n <= {horizon}"),
    ));

    checks.extend(oracle_checks(cfg, &g, &f)?);
    checks.extend(census_checks(cfg, fault)?);
    checks.push(prefix_check(cfg)?);
    checks.push(three_step_check(q));
    checks.push(n_table_check(q, steps)?);
    checks.push(spr_check(q)?);
    checks.extend(pgl2_checks(cfg)?);

    debug_assert_eq!(checks.iter().map(|c| c.name).collect::<Vec<_>>(), CHECKS);
    Ok(Report {
        q: cfg.q,
        steps,
        m_max: cfg.m_max,
        checks,
    })
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Dot => Err(CliError::invalid(
            "validate has no dot format; use human, json or csv",
        )),
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "status": c.status.as_str(),
                        "expected": c.expected,
                        "actual": c.actual,
                        "detail": c.detail,
                    })
                })
                .collect();
            let v = json!({
                "q": report.q,
                "steps": report.steps,
                "m_max": report.m_max,
                "passed": report.passed(),
                "checks": checks,
            });
            let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let esc = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
            let mut s = String::from("name,status,expected,actual,detail\n");
            for c in &report.checks {
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    c.name,
                    c.status.as_str(),
                    esc(&c.expected),
                    esc(&c.actual),
                    esc(&c.detail)
                )
                .unwrap();
            }
            Ok(s)
        }
        Format::Human => {
            let mut s = format!(
                "validate q = {}, steps = {}, m-max = {}\n",
                report.q, report.steps, report.m_max
            );
            for c in &report.checks {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skipped => "SKIP",
                };
                writeln!(s, "{tag}  {:<20} {}", c.name, c.detail).unwrap();
                if c.status == Status::Fail {
                    writeln!(s, "      expected: {}", c.expected).unwrap();
                    writeln!(s, "      actual:   {}", c.actual).unwrap();
                }
            }
            writeln!(
                s,
                "{}",
                if report.passed() {
                    "all checks passed"
                } else {
                    "validation FAILED"
                }
            )
            .unwrap();
            Ok(s)
        }
    }
}

pub fn cmd_validate(cfg: &RunConfig, fault: Option<Fault>) -> Result<Outcome, CliError> {
    if cfg.flow != Flow::Pgl3 {
        return Err(CliError::invalid(
            "validate runs the pgl3 matrix (it includes the tree checks)",
        ));
    }
    if cfg.m_max < 2 {
        return Err(CliError::invalid(format!(
            "m-max = {} must be at least 2",
            cfg.m_max
        )));
    }
    let report = run_checks(cfg, fault)?;
    Ok(Outcome {
        code: if report.passed() {
            EXIT_OK
        } else {
            EXIT_MISMATCH
        },
        text: render(&report, cfg.format)?,
    })
}
