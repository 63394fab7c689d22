use std::f64::consts::PI;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use qfluct_core::channel::{
    classical_error_indicators, classical_transform, distribution_entropy, estimators_from_density_current,
    gaussian_packet_pipeline, make_gaussian_kernel, oscillator_pipeline, packet_grid, quantum_error_report,
    quantum_transform, ClassicalDistribution, ErrorReport, QuantumChannel,
};
use qfluct_core::observables::{
    estimator_set, magnetization_operators, magnetization_residual, matrix_estimator_set, random_density_matrix,
};
use qfluct_core::oracle::{crosscheck, gaussian_packet_oracle, oscillator_oracle, PacketParams, REPORT_ONLY};
use qfluct_core::states::special::hermite_function;
use qfluct_core::states::{closed_form_card, density_and_current, natural_grid, sample, GridSize};
use qfluct_core::urelations::{audit_pair, boundary_rhs, correlation_determinant, energy_time_verdict};
use qfluct_core::{Complex64, ComplexField, Grid, Operator, QuantityCard, RealField, StateSpec, UrVerdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::args::{
    AnnexArgs, AuditArgs, ChannelArgs, ClassicalArgs, DetcheckArgs, Nodes, RunSettings, SpinsArgs, SweepArgs,
    SweepKind,
};
use crate::output::{fmt_num, Report, Table};

/// States listed by `catalog` when no `--state` is given.
const CATALOG: &[&str] = &[
    "azimuthal:m=1",
    "phase:N=1",
    "qtp:N=0,I=1,omega=1",
    "rotor:l=1,c=[0.6,0,0.8i]",
    "gaussian:x0=0,sigma=1,k=1",
    "box2d:a=1,b=2",
];

fn grid_size(nodes: Option<Nodes>) -> GridSize {
    match nodes {
        None => GridSize::default(),
        Some(Nodes::One(n)) => GridSize { line: n, sphere: [n, n], plane: [n, n] },
        Some(Nodes::Two(n, m)) => GridSize { line: n, sphere: [n, m], plane: [n, m] },
    }
}

fn line_nodes(nodes: Option<Nodes>) -> usize {
    match nodes {
        Some(Nodes::One(n) | Nodes::Two(n, _)) => n,
        None => GridSize::default().line,
    }
}

fn sampled(spec: &StateSpec, s: &RunSettings) -> Result<ComplexField> {
    let grid = natural_grid(spec, &grid_size(s.nodes), s.hbar)?;
    Ok(sample(spec, &grid, s.hbar)?)
}

fn grid_json(grid: &Grid) -> serde_json::Value {
    json!({ "domain": format!("{:?}", grid.domain()), "nodes": grid.shape() })
}

fn c_cells(z: Complex64) -> [String; 2] {
    [fmt_num(z.re), fmt_num(z.im)]
}

fn card_rows(table: &mut Table, prefix: &[String], card: &QuantityCard) {
    for q in &card.entries {
        let mut row = prefix.to_vec();
        row.extend([q.label.clone(), fmt_num(q.re), fmt_num(q.im), q.source.clone()]);
        table.push(row);
    }
}

pub fn catalog(args: &crate::args::CatalogArgs, s: &RunSettings) -> Result<Report> {
    let specs: Vec<StateSpec> = match &args.state {
        Some(text) => vec![text.parse()?],
        None => CATALOG.iter().map(|t| t.parse()).collect::<qfluct_core::Result<_>>()?,
    };
    let mut table = Table::new(&["state", "label", "re", "im", "source"]);
    let mut entries = Vec::new();
    for spec in &specs {
        let card = closed_form_card(spec, s.hbar)?;
        card_rows(&mut table, &[spec.to_string()], &card);
        entries.push(json!({ "state": spec.to_string(), "card": card }));
    }
    Report::new(json!({ "hbar": s.hbar, "states": entries }), table, true)
}

fn verdict_table(state: &str, v: &UrVerdict) -> Table {
    let mut t = Table::new(&[
        "state", "pair", "lhs", "cs_rhs", "rs_rhs", "gap_ab_re", "gap_ab_im", "gap_ba_re", "gap_ba_im", "class",
    ]);
    let mut row = vec![state.to_string(), v.pair.clone(), fmt_num(v.lhs), fmt_num(v.cs_rhs), fmt_num(v.rs_rhs)];
    row.extend(c_cells(v.gap_ab));
    row.extend(c_cells(v.gap_ba));
    row.push(v.class.to_string());
    t.push(row);
    t
}

fn parse_ops(text: &str) -> Result<Vec<Operator>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<Operator>().map_err(Into::into))
        .collect()
}

pub fn audit(args: &AuditArgs, s: &RunSettings) -> Result<Report> {
    let names: Vec<&str> = args.pair.split(',').map(str::trim).collect();
    if names.len() != 2 {
        bail!(qfluct_core::Error::Parse(format!("--pair needs two operators, got '{}'", args.pair)));
    }
    let (verdict, state, grid) = if names == ["E", "t"] {
        let de = args.delta_e.context("the E,t pair needs --delta-e")?;
        (energy_time_verdict(de, s.hbar)?, "none".to_string(), serde_json::Value::Null)
    } else {
        let text = args.state.as_deref().context("--state is required")?;
        let spec: StateSpec = text.parse()?;
        let (a, b): (Operator, Operator) = (names[0].parse()?, names[1].parse()?);
        let psi = sampled(&spec, s)?;
        (audit_pair(&a, &b, &psi, s.hbar, s.tol)?, spec.to_string(), grid_json(psi.grid()))
    };
    let ok = match &args.expect {
        Some(want) => verdict.class.to_string() == want.to_uppercase(),
        None => true,
    };
    let table = verdict_table(&state, &verdict);
    let body = json!({
        "state": state,
        "grid": grid,
        "hbar": s.hbar,
        "tol": s.tol,
        "verdict": verdict,
        "expected": args.expect,
    });
    Report::new(body, table, ok)
}

pub fn detcheck(args: &DetcheckArgs, s: &RunSettings) -> Result<Report> {
    let spec: StateSpec = args.state.parse()?;
    let ops = parse_ops(&args.ops)?;
    let psi = sampled(&spec, s)?;
    let est = estimator_set(&ops, &psi, s.hbar)?;
    let (det, nonnegative) = correlation_determinant(&est)?;
    let mut pairs = vec![("state".to_string(), spec.to_string()), ("ops".to_string(), est.labels.join(","))];
    pairs.push(("det".into(), fmt_num(det)));
    pairs.push(("nonnegative".into(), nonnegative.to_string()));
    for (label, d) in est.labels.iter().zip(&est.deltas) {
        pairs.push((format!("delta({label})"), fmt_num(*d)));
    }
    let body = json!({
        "state": spec.to_string(),
        "grid": grid_json(psi.grid()),
        "hbar": s.hbar,
        "estimators": est,
        "det": det,
        "nonnegative": nonnegative,
    });
    Report::new(body, Table::key_values(pairs), nonnegative)
}

fn report_pairs(report: &ErrorReport) -> Vec<(String, String)> {
    let mut pairs = Vec::new();
    for ind in &report.means {
        pairs.push((format!("eps(mean {})", ind.label), fmt_num(ind.value)));
    }
    for ind in &report.correlations {
        pairs.push((format!("eps(C({}))", ind.label), fmt_num(ind.value)));
    }
    for ind in &report.deltas {
        pairs.push((format!("eps(delta {})", ind.label), fmt_num(ind.value)));
    }
    for ind in &report.moments {
        pairs.push((format!("eps({})", ind.label), fmt_num(ind.value)));
    }
    for (label, v) in [
        ("eps(S(rho))", report.entropy_density),
        ("eps(S(J))", report.entropy_current),
        ("eps(S(w))", report.entropy_classical),
    ] {
        if let Some(v) = v {
            pairs.push((label.to_string(), fmt_num(v)));
        }
    }
    pairs
}

pub fn channel(args: &ChannelArgs, s: &RunSettings) -> Result<Report> {
    let spec: StateSpec = args.state.parse()?;
    let ops = parse_ops(&args.ops)?;
    let nodes = line_nodes(s.nodes);
    let grid: Arc<Grid> = match &spec {
        StateSpec::Gaussian { x0, sigma, .. } => packet_grid(*x0, *sigma, args.gamma, args.lambda, nodes)?,
        other => natural_grid(other, &GridSize::with_line(nodes), s.hbar)?,
    };
    let upsilon = match (args.upsilon, &spec) {
        (Some(u), _) => u,
        (None, StateSpec::Gaussian { k, .. }) if *k != 0.0 => (s.hbar * k / args.mass).abs(),
        _ => 1.0,
    };
    let psi = sample(&spec, &grid, s.hbar)?;
    let (rho_in, j_in) = density_and_current(&psi, args.mass, s.hbar)?;
    let ch = QuantumChannel::gaussian(&grid, args.gamma, args.lambda, upsilon)?;
    let (rho_out, j_out) = quantum_transform(&rho_in, &j_in, &ch)?;
    let in_set = estimators_from_density_current(&rho_in, &j_in[0], &ops, args.mass, s.hbar)?;
    let out_set = estimators_from_density_current(&rho_out, &j_out[0], &ops, args.mass, s.hbar)?;
    let report = quantum_error_report(&in_set, &out_set, &rho_in, &rho_out, &j_in[0], &j_out[0], upsilon)?;

    let mut pairs = Vec::new();
    for (a, label) in in_set.labels.iter().enumerate() {
        pairs.push((format!("mean_in({label})"), fmt_num(in_set.means[a].re)));
        pairs.push((format!("mean_out({label})"), fmt_num(out_set.means[a].re)));
        pairs.push((format!("delta_in({label})"), fmt_num(in_set.deltas[a])));
        pairs.push((format!("delta_out({label})"), fmt_num(out_set.deltas[a])));
    }
    pairs.extend(report_pairs(&report));
    let body = json!({
        "state": spec.to_string(),
        "grid": grid_json(&grid),
        "hbar": s.hbar,
        "mass": args.mass,
        "gamma": args.gamma,
        "lambda": args.lambda,
        "upsilon": upsilon,
        "in": in_set,
        "out": out_set,
        "report": report,
    });
    Report::new(body, Table::key_values(pairs), true)
}

/// `w:mean:sd` terms separated by `;`.
fn parse_mixture(text: &str) -> Result<Vec<(f64, f64, f64)>> {
    let terms = text
        .split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let parts: Vec<f64> = t
                .split(':')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| qfluct_core::Error::Parse(format!("bad mixture term '{t}'")))?;
            match parts[..] {
                [w, m, sd] if w > 0.0 && sd > 0.0 => Ok((w, m, sd)),
                _ => Err(qfluct_core::Error::Parse(format!("mixture term '{t}' is not w:mean:sd with w, sd > 0"))),
            }
        })
        .collect::<qfluct_core::Result<Vec<_>>>()?;
    if terms.is_empty() {
        bail!(qfluct_core::Error::Parse("empty mixture".into()));
    }
    Ok(terms)
}

fn mixture_field(grid: &Arc<Grid>, terms: &[(f64, f64, f64)]) -> Result<RealField> {
    Ok(RealField::from_fn(grid.clone(), |p| {
        terms
            .iter()
            .map(|(w, m, sd)| w * (-(p[0] - m).powi(2) / (2.0 * sd * sd)).exp() / (sd * (2.0 * PI).sqrt()))
            .sum()
    })?)
}

pub fn classical(args: &ClassicalArgs, s: &RunSettings) -> Result<Report> {
    let terms = parse_mixture(&args.mixture)?;
    let reach = terms.iter().map(|(_, m, sd)| m.abs() + 8.0 * sd.max(args.width)).fold(0.0, f64::max);
    let half = args.half_width.unwrap_or(reach.max(4.0 * args.width + 1.0));
    let grid = Grid::segment(-half, half, line_nodes(s.nodes))?;
    let w_in = ClassicalDistribution::normalized(mixture_field(&grid, &terms)?)?;
    let kernel = make_gaussian_kernel(&grid, 0, args.width)?;
    let w_out = classical_transform(&w_in, &kernel)?;
    let report = classical_error_indicators(&w_in, &w_out, args.max_order)?;
    let mut pairs = vec![
        ("mean_in".to_string(), fmt_num(w_in.mean())),
        ("mean_out".to_string(), fmt_num(w_out.mean())),
        ("std_in".to_string(), fmt_num(w_in.std_dev())),
        ("std_out".to_string(), fmt_num(w_out.std_dev())),
        ("S_in".to_string(), fmt_num(w_in.entropy())),
        ("S_out".to_string(), fmt_num(w_out.entropy())),
    ];
    pairs.extend(report_pairs(&report));
    let body = json!({
        "mixture": args.mixture,
        "width": args.width,
        "grid": grid_json(&grid),
        "mean_in": w_in.mean(),
        "mean_out": w_out.mean(),
        "std_in": w_in.std_dev(),
        "std_out": w_out.std_dev(),
        "entropy_in": w_in.entropy(),
        "entropy_out": w_out.entropy(),
        "report": report,
    });
    Report::new(body, Table::key_values(pairs), true)
}

pub fn annex(args: &AnnexArgs, s: &RunSettings) -> Result<Report> {
    let nodes = line_nodes(s.nodes);
    let (oracle, run, params) = if args.oscillator {
        let oracle = oscillator_oracle(args.mass, args.omega, args.gamma, s.hbar)?;
        let run = oscillator_pipeline(args.mass, args.omega, args.gamma, s.hbar, nodes)?;
        let params = json!({ "mass": args.mass, "omega": args.omega, "gamma": args.gamma, "hbar": s.hbar });
        (oracle, run, params)
    } else {
        let p = PacketParams {
            x0: args.x0,
            sigma: args.sigma,
            k: args.k,
            gamma: args.gamma,
            lambda: args.lambda,
            hbar: s.hbar,
            mass: args.mass,
        };
        let oracle = gaussian_packet_oracle(&p)?;
        let run = gaussian_packet_pipeline(&p, nodes, args.upsilon)?;
        (oracle, run, serde_json::to_value(p)?)
    };
    let check = crosscheck(&oracle, &run.card, s.tol)?;
    let mut table = Table::new(&["label", "oracle_re", "oracle_im", "numeric_re", "numeric_im", "error", "pass"]);
    for row in &check.rows {
        let mut cells = vec![row.label.clone()];
        cells.extend(c_cells(row.oracle));
        cells.extend(c_cells(row.numeric));
        cells.push(fmt_num(row.error));
        cells.push(row.pass.to_string());
        table.push(cells);
    }
    let mut report_only = Vec::new();
    for label in REPORT_ONLY {
        if let (Some(o), Some(n)) = (oracle.value(label), run.card.value(label)) {
            let mut cells = vec![label.to_string()];
            cells.extend(c_cells(o));
            cells.extend(c_cells(n));
            cells.extend([String::new(), "reported".to_string()]);
            table.push(cells);
            report_only.push(json!({ "label": label, "oracle": o.re, "numeric": n.re }));
        }
    }
    let body = json!({
        "scenario": if args.oscillator { "oscillator" } else { "gaussian packet" },
        "params": params,
        "grid": grid_json(&run.grid),
        "crosscheck": check,
        "reported": report_only,
        "report": run.report,
    });
    Report::new(body, table, check.pass)
}

pub fn spins(args: &SpinsArgs, s: &RunSettings) -> Result<Report> {
    const RESIDUAL_TOL: f64 = 1e-12;
    let m = magnetization_operators(args.n, args.gamma, s.hbar)?;
    let residual = magnetization_residual(&m, args.gamma, s.hbar);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut margin = f64::INFINITY;
    for _ in 0..args.samples {
        let rho = random_density_matrix(1 << args.n, &mut rng);
        let est = matrix_estimator_set(&m, &rho)?;
        for a in 0..3 {
            for b in 0..3 {
                margin = margin.min(est.deltas[a] * est.deltas[b] - est.correlations[a][b].norm());
            }
        }
    }
    let inequality = args.samples == 0 || margin >= -RESIDUAL_TOL;
    let residual_ok = residual <= RESIDUAL_TOL;
    let mut pairs = vec![
        ("n".to_string(), args.n.to_string()),
        ("dim".to_string(), (1usize << args.n).to_string()),
        ("commutator_residual".to_string(), fmt_num(residual)),
        ("residual_ok".to_string(), residual_ok.to_string()),
        ("samples".to_string(), args.samples.to_string()),
    ];
    if args.samples > 0 {
        pairs.push(("min_margin".to_string(), fmt_num(margin)));
    }
    pairs.push(("inequality_ok".to_string(), inequality.to_string()));
    let body = json!({
        "n": args.n,
        "dim": 1usize << args.n,
        "gamma": args.gamma,
        "hbar": s.hbar,
        "seed": s.seed,
        "commutator_residual": residual,
        "residual_ok": residual_ok,
        "samples": args.samples,
        "min_margin": if args.samples > 0 { Some(margin) } else { None },
        "inequality_ok": inequality,
    });
    Report::new(body, Table::key_values(pairs), residual_ok && inequality)
}

#[derive(Serialize)]
struct SweepRow {
    case: usize,
    params: String,
    value: f64,
    pass: bool,
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

fn fmt_coeffs(c: &[Complex64]) -> String {
    c.iter()
        .map(|z| {
            let sign = if z.im < 0.0 { "" } else { "+" };
            format!("{}{sign}{}i", fmt_num(z.re), fmt_num(z.im))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn sweep(args: &SweepArgs, s: &RunSettings) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let nodes = s.nodes.map(|_| line_nodes(s.nodes));
    let mut rows = Vec::with_capacity(args.cases);
    // `value` is the margin by which each case satisfies its inequality.
    let threshold = match args.kind {
        SweepKind::ClassicalEntropy | SweepKind::QuantumEntropy => s.tol_or(1e-6),
        SweepKind::Boundary => s.tol_or(1e-3),
    };
    match args.kind {
        SweepKind::ClassicalEntropy => {
            let grid = Grid::segment(-12.0, 12.0, nodes.unwrap_or(1024))?;
            for case in 0..args.cases {
                let parts = rng.random_range(1..=3);
                let terms: Vec<(f64, f64, f64)> = (0..parts)
                    .map(|_| (rng.random_range(0.1..1.0), rng.random_range(-3.0..3.0), rng.random_range(0.3..1.5)))
                    .collect();
                let width = rng.random_range(0.05..2.0);
                let w_in = ClassicalDistribution::normalized(mixture_field(&grid, &terms)?)?;
                let w_out = classical_transform(&w_in, &make_gaussian_kernel(&grid, 0, width)?)?;
                let value = w_out.entropy() - w_in.entropy();
                let text: Vec<String> =
                    terms.iter().map(|(w, m, sd)| format!("{}:{}:{}", fmt_num(*w), fmt_num(*m), fmt_num(*sd))).collect();
                let params = format!("mixture={} width={}", text.join(";"), fmt_num(width));
                rows.push(SweepRow { case, params, value, pass: value >= -threshold });
            }
        }
        SweepKind::QuantumEntropy => {
            let grid = Grid::segment(-12.0, 12.0, nodes.unwrap_or(1024))?;
            for case in 0..args.cases {
                let coeffs = random_coeffs(&mut rng, 6);
                let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                let psi = ComplexField::from_fn(grid.clone(), |p| {
                    coeffs.iter().enumerate().map(|(n, c)| c * hermite_function(n, p[0])).sum::<Complex64>() / norm
                })?;
                let width = rng.random_range(0.05..2.0);
                let (rho, j) = density_and_current(&psi, 1.0, s.hbar)?;
                let ch = QuantumChannel::gaussian(&grid, width, width, 1.0)?;
                let (rho_out, _) = quantum_transform(&rho, &j, &ch)?;
                let value = distribution_entropy(&rho_out)? - distribution_entropy(&rho)?;
                let params = format!("hermite=[{}] width={}", fmt_coeffs(&coeffs), fmt_num(width));
                rows.push(SweepRow { case, params, value, pass: value >= -threshold });
            }
        }
        SweepKind::Boundary => {
            let grid = Grid::circle(nodes.unwrap_or(2048))?;
            for case in 0..args.cases {
                let coeffs = random_coeffs(&mut rng, 7);
                let raw = ComplexField::from_fn(grid.clone(), |p| {
                    coeffs
                        .iter()
                        .enumerate()
                        .map(|(j, c)| c * Complex64::from_polar(1.0, (j as f64 - 3.0) * p[0]))
                        .sum()
                })?;
                let psi = raw.scale(1.0 / raw.norm_sqr().sqrt());
                let est = estimator_set(&[Operator::Lz, Operator::Phi], &psi, s.hbar)?;
                let value = est.correlation("Lz", "phi")?.norm() - boundary_rhs(&psi, s.hbar)?;
                let params = format!("m=-3..3 c=[{}]", fmt_coeffs(&coeffs));
                rows.push(SweepRow { case, params, value, pass: value >= -threshold });
            }
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    let min = rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let mut table = Table::new(&["case", "params", "value", "pass"]);
    for r in &rows {
        table.push(vec![r.case.to_string(), r.params.clone(), fmt_num(r.value), r.pass.to_string()]);
    }
    let body = json!({
        "kind": args.kind,
        "seed": s.seed,
        "cases": args.cases,
        "threshold": threshold,
        "min_value": if rows.is_empty() { None } else { Some(min) },
        "pass": pass,
        "rows": rows,
    });
    Report::new(body, table, pass)
}
