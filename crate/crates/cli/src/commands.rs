use std::path::Path;

use anyhow::{Context, Result};
use serde_json::json;
use twlab_core::graph::dimacs::write_dimacs_graph;
use twlab_core::graph::{
    find_minor_model, minor_model_to_ops, treewidth_exact, treewidth_lower, treewidth_upper, verify_decomposition,
    DecompositionJson, Graph, Heuristic, MinorModel, MinorOperation, TreeDecomposition, TreewidthResult,
};
use twlab_core::lp::{build_ef, solve_ef, solve_lp, BagTable, EfMode, LinearProgram};
use twlab_core::po::POInstance;
use twlab_core::polytope::{
    build_hard_family, cartesian_power, convex_hull_facets, fresh_label, gnp_experiment, graph_plus, plus_operator,
    slack_matrix, stab_vertices, xc_bracket, PointSet,
};
use twlab_core::rational::format_rational;
use twlab_core::reductions::{
    encode_2sat_set, encode_max2sat, encode_max2sat_v1, lift_instance, parse_cnf, parse_wcnf, pipeline,
    pullback_solution, round_solution, LiftedInstance, LiftedJson, PipelineOptions,
};
use twlab_core::Error;

use crate::io::{
    assignment_json, emit, json, parse_eps, read_assignment, read_graph, read_host, read_text, usage,
};
use crate::{
    BracketArgs, Cli, Cmd, ComposeCmd, DecomposeArgs, EfCmd, EfInput, Format, GnpArgs, LiftArgs, LpCmd,
    PipelineArgs, PointsArgs, ReduceCmd, RoundArgs, TwArgs,
};

pub fn run(cli: &Cli) -> Result<()> {
    let experiment = matches!(cli.cmd, Cmd::GnpExperiment(_));
    let threads = match cli.jobs {
        Some(0) => return Err(usage("--jobs must be positive")),
        Some(j) => j,
        None if experiment => 0,
        None => 1,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("starting worker pool")?;

    let text = match &cli.cmd {
        Cmd::Tw(a) => tw(cli, a)?,
        Cmd::Decompose(a) => decompose(cli, a)?,
        Cmd::Hull(a) => hull(cli, a)?,
        Cmd::Slack(a) => slack(cli, a)?,
        Cmd::XcBracket(a) => bracket(cli, a)?,
        Cmd::Compose(c) => compose(cli, c)?,
        Cmd::Ef(c) => ef(cli, c)?,
        Cmd::Lp(c) => lp(cli, c)?,
        Cmd::Reduce(c) => reduce(cli, c)?,
        Cmd::Lift(a) => lift(cli, a)?,
        Cmd::Round(a) => round(cli, a)?,
        Cmd::Pipeline(a) => run_pipeline(cli, a)?,
        Cmd::GnpExperiment(a) => gnp(cli, a)?,
    };
    emit(cli.out.as_deref(), &text)
}

/// Resolves `--format` against what the subcommand can write.
fn format(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = cli.format.unwrap_or(default);
    if !allowed.contains(&f) && f != default {
        return Err(usage(format!("--format {f:?} is not supported here").to_lowercase()));
    }
    Ok(f)
}

fn json_only(cli: &Cli) -> Result<()> {
    format(cli, Format::Json, &[]).map(|_| ())
}

fn width_of(g: &Graph, a: &TwArgs) -> Result<(TreewidthResult, String)> {
    if a.exact {
        Ok((treewidth_exact(g, a.cap_tw)?, "exact".into()))
    } else {
        let h: Heuristic = a.heuristic.parse().map_err(|e: Error| usage(e.to_string()))?;
        Ok((treewidth_upper(g, h), a.heuristic.clone()))
    }
}

fn tw(cli: &Cli, a: &TwArgs) -> Result<String> {
    json_only(cli)?;
    let g = read_graph(&a.graph)?;
    let (r, method) = width_of(&g, a)?;
    let order: Vec<&str> = r.order.iter().map(|&i| g.label(i)).collect();
    json(&json!({
        "width": r.width,
        "method": method,
        "lower_bound": treewidth_lower(&g),
        "order": order,
        "decomposition": r.decomposition.to_json(&g),
    }))
}

fn decompose(cli: &Cli, a: &DecomposeArgs) -> Result<String> {
    json_only(cli)?;
    let g = read_graph(&a.tw.graph)?;
    let Some(path) = &a.verify else {
        let (r, _) = width_of(&g, &a.tw)?;
        return json(&r.decomposition.to_json(&g));
    };
    let j: DecompositionJson = serde_json::from_str(&read_text(path)?).map_err(Error::from)?;
    let td = TreeDecomposition::from_json(&j, &g)?;
    let violations = verify_decomposition(&g, &td);
    json(&json!({
        "valid": violations.is_empty(),
        "width": td.width(),
        "violations": violations,
    }))
}

fn read_points(path: &Path) -> Result<PointSet> {
    let text = read_text(path)?;
    PointSet::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn hull(cli: &Cli, a: &PointsArgs) -> Result<String> {
    json_only(cli)?;
    let s = read_points(&a.points)?;
    let h = convex_hull_facets(&s, a.cap_hull)?;
    let facets: Vec<String> = h.facets.iter().map(|f| f.to_string()).collect();
    json(&json!({
        "polytope": h,
        "facets_text": facets,
        "equations_text": h.equation_strings(),
    }))
}

fn slack(cli: &Cli, a: &PointsArgs) -> Result<String> {
    let f = format(cli, Format::Json, &[Format::Csv])?;
    let s = read_points(&a.points)?;
    let h = convex_hull_facets(&s, a.cap_hull)?;
    let m = slack_matrix(&h, &s)?;
    if f == Format::Json {
        return json(&m);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["facet".to_string()];
    header.extend(s.points().iter().map(|p| PointSet::point_label(p)));
    w.write_record(&header)?;
    for (facet, row) in h.facets.iter().zip(&m.entries) {
        let mut rec = vec![facet.to_string()];
        rec.extend(row.0.iter().map(format_rational));
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn bracket(cli: &Cli, a: &BracketArgs) -> Result<String> {
    json_only(cli)?;
    let s = read_points(&a.points.points)?;
    json(&xc_bracket(&s, a.points.cap_hull, a.cap_cover, a.ef_size)?)
}

fn compose(cli: &Cli, c: &ComposeCmd) -> Result<String> {
    match c {
        ComposeCmd::Gplus { graph } => {
            let g = read_graph(graph)?;
            let gp = graph_plus(&g, &fresh_label(&g))?;
            match cli.format {
                None => Ok(write_dimacs_graph(&gp)),
                Some(Format::Json) => json(&gp.to_json()),
                Some(_) => Err(usage("gplus writes DIMACS, or JSON with --format json")),
            }
        }
        ComposeCmd::Plus { points } => {
            json_only(cli)?;
            points_out(&plus_operator(&read_points(points)?)?)
        }
        ComposeCmd::Power { points, k } => {
            json_only(cli)?;
            let s = plus_operator(&read_points(points)?)?;
            points_out(&cartesian_power(&s, *k)?)
        }
        ComposeCmd::Stab { graph, cap_enum } => {
            json_only(cli)?;
            points_out(&stab_vertices(&read_graph(graph)?, *cap_enum)?)
        }
        ComposeCmd::HardFamily { points, n, omega } => {
            json_only(cli)?;
            json(&build_hard_family(&read_points(points)?, *n, *omega)?)
        }
    }
}

fn points_out(s: &PointSet) -> Result<String> {
    let mut t = s.to_json_string();
    t.push('\n');
    Ok(t)
}

fn read_instance(path: &Path) -> Result<POInstance> {
    let text = read_text(path)?;
    POInstance::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// The given decomposition, or the narrower of the two heuristics.
fn instance_decomposition(inst: &POInstance, path: Option<&Path>) -> Result<TreeDecomposition> {
    let g = inst.intersection_graph();
    if let Some(p) = path {
        let j: DecompositionJson = serde_json::from_str(&read_text(p)?).map_err(Error::from)?;
        return Ok(TreeDecomposition::from_json(&j, &g)?);
    }
    let a = treewidth_upper(&g, Heuristic::MinFill);
    let b = treewidth_upper(&g, Heuristic::MinDegree);
    Ok(if b.width < a.width { b } else { a }.decomposition)
}

fn ef(cli: &Cli, c: &EfCmd) -> Result<String> {
    let f = format(cli, Format::Json, &[Format::Lp])?;
    let (input, mode): (&EfInput, EfMode) = match c {
        EfCmd::BuildBinary(i) => (i, EfMode::ExactBinary),
        EfCmd::BuildEps { input, eps } => (input, EfMode::Eps(parse_eps(eps)?)),
    };
    let inst = read_instance(&input.instance)?;
    let td = instance_decomposition(&inst, input.decomposition.as_deref())?;
    let (prog, table) = build_ef(&inst, &td, &mode, input.column_cap)?;
    if f == Format::Lp {
        return Ok(prog.to_lp_text());
    }
    json(&json!({
        "width": td.width(),
        "columns": prog.n_cols(),
        "lambda_columns": table.lambda_columns(),
        "column_bound": table.column_bound().to_string(),
        "rows": prog.n_rows(),
        "lp": prog.to_json(),
        "table": table,
    }))
}

fn read_lp(path: &Path) -> Result<LinearProgram> {
    let text = read_text(path)?;
    LinearProgram::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Accepts either a bare LP or the output of `ef build-*`.
fn read_lp_or_ef(path: &Path) -> Result<(LinearProgram, Option<BagTable>)> {
    let text = read_text(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    if let (Some(lp), Some(table)) = (v.get("lp"), v.get("table")) {
        let prog = LinearProgram::from_json(serde_json::from_value(lp.clone()).map_err(Error::from)?)?;
        let table: BagTable = serde_json::from_value(table.clone()).map_err(Error::from)?;
        return Ok((prog, Some(table)));
    }
    Ok((read_lp(path)?, None))
}

fn lp(cli: &Cli, c: &LpCmd) -> Result<String> {
    match c {
        LpCmd::Solve { lp, table } => {
            json_only(cli)?;
            let (prog, bundled) = read_lp_or_ef(lp)?;
            let table = match table {
                Some(p) => Some(BagTable::from_json_str(&read_text(p)?)?),
                None => bundled,
            };
            let sol = match &table {
                Some(t) => solve_ef(&prog, t)?,
                None => solve_lp(&prog),
            };
            json(&sol)
        }
        LpCmd::Emit { lp } => {
            format(cli, Format::Lp, &[])?;
            Ok(read_lp_or_ef(lp)?.0.to_lp_text())
        }
    }
}

fn reduce(cli: &Cli, c: &ReduceCmd) -> Result<String> {
    json_only(cli)?;
    let inst = match c {
        ReduceCmd::Max2sat { wcnf, v1 } => {
            let f = parse_wcnf(&read_text(wcnf)?)?;
            if *v1 {
                encode_max2sat_v1(&f)?
            } else {
                encode_max2sat(&f)?
            }
        }
        ReduceCmd::TwoSat { cnf } => encode_2sat_set(&parse_cnf(&read_text(cnf)?)?)?,
    };
    let mut t = inst.to_json_string();
    t.push('\n');
    Ok(t)
}

fn lift(cli: &Cli, a: &LiftArgs) -> Result<String> {
    json_only(cli)?;
    let inst = read_instance(&a.instance)?;
    let host = read_host(&a.host)?;
    let lifted = if let Some(p) = &a.ops {
        let ops: Vec<MinorOperation> = serde_json::from_str(&read_text(p)?).map_err(Error::from)?;
        lift_instance(&inst, &host, &ops, None)?
    } else {
        let target = inst.intersection_graph();
        let model = match &a.model {
            Some(p) => read_model(p, &host, &target)?,
            None => find_minor_model(&host, &target, a.cap_minor)?.ok_or_else(|| {
                Error::Precondition("the instance's intersection graph is not a minor of the host".into())
            })?,
        };
        let seq = minor_model_to_ops(&host, &target, &model)?;
        lift_instance(&inst, &host, &seq.ops, Some(&seq.iso))?
    };
    json(&lifted.to_json())
}

/// Model files may omit witnesses; the smallest host edge is used then.
fn read_model(path: &Path, host: &Graph, target: &Graph) -> Result<MinorModel> {
    let m = MinorModel::from_json(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    if m.witnesses.is_empty() && target.m() > 0 {
        return Ok(MinorModel::from_branch_sets(host, target, m.branch_sets)?);
    }
    Ok(m)
}

fn round(cli: &Cli, a: &RoundArgs) -> Result<String> {
    json_only(cli)?;
    let j: LiftedJson = serde_json::from_str(&read_text(&a.lifted)?).map_err(Error::from)?;
    let l = LiftedInstance::from_json(j)?;
    let z = read_assignment(&a.point)?;
    let eps = parse_eps(&a.eps)?;
    let rounded = round_solution(&l, &z, &eps)?;
    let back = pullback_solution(&l, &rounded)?;
    json(&json!({
        "rounded": assignment_json(&rounded),
        "objective": format_rational(&l.instance.objective_value(&rounded)?),
        "pullback": assignment_json(&back),
    }))
}

fn run_pipeline(cli: &Cli, a: &PipelineArgs) -> Result<String> {
    json_only(cli)?;
    let f = parse_wcnf(&read_text(&a.wcnf)?)?;
    let host = read_host(&a.host)?;
    let model = match &a.model {
        Some(p) => Some(read_model(p, &host, &encode_max2sat(&f)?.intersection_graph())?),
        None => None,
    };
    let opts = PipelineOptions {
        eps: parse_eps(&a.eps)?,
        model,
        minor_cap: a.cap_minor,
        ..PipelineOptions::default()
    };
    let mut r = pipeline(&f, &host, &opts)?;
    if !a.timings {
        r.trace.strip_timings();
    }
    json(&r)
}

fn gnp(cli: &Cli, a: &GnpArgs) -> Result<String> {
    let f = format(cli, Format::Csv, &[Format::Json])?;
    let row = gnp_experiment(a.n, a.p, a.r, a.samples, a.seed)?;
    if f == Format::Json {
        return json(&json!({
            "row": row,
            "sigma": row.sigma(),
            "within_bound": row.within_bound(),
        }));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(&row)?;
    Ok(String::from_utf8(w.into_inner()?)?)
}
