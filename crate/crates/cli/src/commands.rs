//! One function per subcommand. Each reads its parameters from the merged
//! settings, writes its files through [`Outputs`], and returns the `result`
//! object of the report.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use girthlab_core::glue::{assemble, AssembleParams, GadgetGirth, GadgetMode, LambdaSelector, Separation};
use girthlab_core::graph::{girth, shortest_cycle, Graph};
use girthlab_core::io::{graph_to_string, read_graph, read_vector, vector_to_string, GraphFile};
use girthlab_core::localize::{
    contrapositive_girth_bound, deloc_bound, greedy_top_k, linf_profile, support_girth_bound, verify_delocalization,
};
use girthlab_core::seed::derive_seed;
use girthlab_core::spectral::{
    branching, dense_spectrum, localizer_coeffs, op_norm_1_inf, ChebSeries, Eigenpair, DEFAULT_DENSE_CAP,
};
use girthlab_core::tree::{eigenvalue_density, find_symmetric_eigenvalues, mass_profile, symmetric_eigenvector, TreeSpec};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{parse_fraction, Settings};
use crate::corpus::corpus;
use crate::error::{CliError, Result};
use crate::output::{to_value, Outputs};
use crate::svg::{Plot, Series};

pub struct Run<'a> {
    pub settings: &'a Settings,
    pub seed: u64,
    pub outputs: &'a mut Outputs,
}

fn load_graph(s: &Settings) -> Result<GraphFile> {
    let path: String = s.require("graph")?;
    let file = File::open(&path).map_err(|e| CliError::io(Path::new(&path), e))?;
    read_graph(BufReader::new(file)).map_err(|e| CliError::from(e).at("read-graph"))
}

fn load_vector(s: &Settings) -> Result<Vec<f64>> {
    let path: String = s.require("vector")?;
    let file = File::open(&path).map_err(|e| CliError::io(Path::new(&path), e))?;
    read_vector(BufReader::new(file)).map_err(|e| CliError::from(e).at("read-vector"))
}

fn load_set(path: &str) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(Path::new(path), e))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .map(|t| t.parse().map_err(|e| CliError::usage(format!("{path}: {t}: {e}"))))
        .collect()
}

fn set_to_string(s: &[usize]) -> String {
    let mut out = format!("# {} vertices\n", s.len());
    for v in s {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

/// `1/3`, `0.7`, `pi`, `pi/3`, `2pi/3`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let s = s.trim();
    let Some((before, after)) = s.split_once("pi") else {
        return parse_fraction(s).map_err(CliError::usage);
    };
    let num = match before.trim().trim_end_matches('*') {
        "" => 1.0,
        "-" => -1.0,
        x => parse_fraction(x).map_err(CliError::usage)?,
    };
    let den = match after.trim() {
        "" => 1.0,
        x => {
            let x = x.strip_prefix('/').ok_or_else(|| CliError::usage(format!("bad angle {s}")))?;
            parse_fraction(x).map_err(CliError::usage)?
        }
    };
    Ok(num * std::f64::consts::PI / den)
}

pub fn girth_cmd(run: &mut Run) -> Result<Value> {
    let file = load_graph(run.settings)?;
    let g = &file.graph;
    let cycle = shortest_cycle(g);
    Ok(json!({
        "n": g.vertex_count(),
        "m": g.edge_count(),
        "degree": g.declared_degree(),
        "girth": cycle.as_ref().map(|c| c.len()),
        "cycle": cycle.as_ref().map(|c| c.vertices().to_vec()),
    }))
}

pub fn spectrum(run: &mut Run) -> Result<Value> {
    let file = load_graph(run.settings)?;
    let cap = run.settings.or("cap", DEFAULT_DENSE_CAP)?;
    let pairs = dense_spectrum(&file.graph, cap).map_err(|e| CliError::from(e).at("dense-spectrum"))?;
    let values: Vec<f64> = pairs.iter().map(|p| p.lambda).collect();
    run.outputs.write("spectrum.vec", vector_to_string(&values).as_bytes())?;
    let second = values.iter().rev().nth(1).copied();
    Ok(json!({
        "n": values.len(),
        "min": values.first(),
        "max": values.last(),
        "second_largest": second,
        "file": "spectrum.vec",
    }))
}

pub fn cheb_norm(run: &mut Run) -> Result<Value> {
    let file = load_graph(run.settings)?;
    let g = &file.graph;
    let m: usize = run.settings.or("m", 2)?;
    let d = branching(g).map_err(|e| CliError::from(e).at("branching"))?;
    let norm = op_norm_1_inf(g, &ChebSeries::single(m)).map_err(|e| CliError::from(e).at("op-norm"))?;
    let closed = (d as f64 - 1.0) / (2.0 * (d as f64).powf(m as f64 / 2.0));
    let gg = girth(g);
    let applies = m > 0 && m.is_multiple_of(2) && gg.is_none_or(|g| 2 * m < g);
    let matches = (norm - closed).abs() <= 1e-10;
    let verdict = match (applies, matches) {
        (true, true) => "matches (d−1)/(2d^{m/2})",
        (true, false) => "differs from (d−1)/(2d^{m/2})",
        (false, _) => "closed form requires even m < g/2",
    };
    log::info!("‖T_{m}‖_1→∞ = {norm}: {verdict}");
    Ok(json!({
        "d": d,
        "m": m,
        "girth": gg,
        "norm": norm,
        "closed_form": closed,
        "applies": applies,
        "matches": applies && matches,
        "verdict": verdict,
    }))
}

pub fn localizer(run: &mut Run) -> Result<Value> {
    let s = run.settings;
    let d: usize = s.or("d", 2)?;
    let m: usize = s.or("m", 8)?;
    let r: usize = s.or("r", 2)?;
    let grid: usize = s.or("grid", 2001)?.max(2);
    let phi = s.raw("phi").map(parse_angle).transpose()?.unwrap_or(std::f64::consts::FRAC_PI_2);
    let f = localizer_coeffs(phi.cos(), m, r, d).map_err(|e| CliError::from(e).at("coefficients"))?;
    let points: Vec<(f64, f64)> = (0..grid)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / (grid - 1) as f64;
            (x, f.eval(x))
        })
        .collect();
    let grid_min = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let peak = f.eval(phi.cos());
    let plot = Plot {
        title: format!("localizer d={d} m={m} r={r} φ={phi:.4}"),
        x_label: "x = λ/(2√d)".into(),
        y_label: "f(x)".into(),
        series: vec![
            Series {
                label: "f".into(),
                points,
                markers: false,
            },
            Series {
                label: "f(cos φ)".into(),
                points: vec![(phi.cos(), peak)],
                markers: true,
            },
        ],
        guides: vec![(-1.0, "−1".into()), (f.peak_floor(), "m/4 − 1".into())],
    };
    run.outputs.write("localizer.svg", plot.render().as_bytes())?;
    Ok(json!({
        "coefficients": to_value(&f),
        "degree": f.degree(),
        "peak": peak,
        "peak_floor": f.peak_floor(),
        "peak_ok": peak >= f.peak_floor() - 1e-12,
        "grid_points": grid,
        "grid_min": grid_min,
        "grid_min_ok": grid_min >= -1.0 - 1e-9,
        "norm_bound": f.norm_bound(),
    }))
}

fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| CliError::usage(format!("interval {s}: expected a,b")))?;
    let a = parse_fraction(a.trim()).map_err(CliError::usage)?;
    let b = parse_fraction(b.trim()).map_err(CliError::usage)?;
    Ok((a, b))
}

pub fn tree_spectrum(run: &mut Run) -> Result<Value> {
    let s = run.settings;
    let spec = TreeSpec::new(s.or("d", 2)?, s.or("depth", 6)?).map_err(|e| CliError::from(e).at("spec"))?;
    let interval = s.raw("interval").map(parse_interval).transpose()?;
    let grid: Option<usize> = s.get("grid")?;
    let values = find_symmetric_eigenvalues(&spec, interval, grid).map_err(|e| CliError::from(e).at("roots"))?;
    run.outputs.write("tree-spectrum.vec", vector_to_string(&values).as_bytes())?;
    let mut rows = Vec::with_capacity(values.len());
    let mut plot = Plot {
        title: format!("level masses, d={} D={}", spec.d, spec.depth),
        x_label: "level".into(),
        y_label: "fraction of mass".into(),
        series: Vec::new(),
        guides: Vec::new(),
    };
    for &lambda in &values {
        let pair = symmetric_eigenvector(&spec, lambda).map_err(|e| CliError::from(e).at("eigenvector"))?;
        let profile = mass_profile(&pair);
        rows.push(json!({
            "lambda": lambda,
            "theta": pair.theta,
            "sin4_theta": pair.theta.sin().powi(4),
            "mass_profile": profile,
        }));
        plot.series.push(Series {
            label: format!("λ={lambda:.3}"),
            points: profile.iter().enumerate().map(|(i, m)| (i as f64, *m)).collect(),
            markers: false,
        });
    }
    // Keep the plot legible: the eigenvalues closest to 0.
    plot.series.sort_by(|a, b| {
        let key = |s: &Series| s.label.trim_start_matches("λ=").parse::<f64>().map_or(f64::INFINITY, f64::abs);
        key(a).total_cmp(&key(b))
    });
    plot.series.truncate(4);
    run.outputs.write("tree-masses.svg", plot.render().as_bytes())?;
    Ok(json!({
        "d": spec.d,
        "D": spec.depth,
        "vertices": spec.vertex_count(),
        "count": values.len(),
        "eigenvalues": rows,
        "file": "tree-spectrum.vec",
    }))
}

pub fn construct_params(s: &Settings) -> Result<AssembleParams> {
    let mut p = AssembleParams::new(s.or("d", 2)?, s.fraction("epsilon")?.unwrap_or(0.5), s.or("k", 24)?);
    if let Some(i) = s.get("lambda-index")? {
        p.lambda = LambdaSelector::Index(i);
    } else if let Some(x) = s.get("lambda")? {
        p.lambda = LambdaSelector::Nearest(x);
    }
    p.c = s.or("c", p.c)?;
    p.cycle_len = s.get("cycle-len")?;
    p.gadget_size = s.get("gadget-size")?;
    if let Some(v) = s.raw("gadget-girth") {
        p.gadget_girth = match v {
            "guaranteed" => GadgetGirth::Guaranteed,
            "match" => GadgetGirth::MatchGlue,
            x => GadgetGirth::Fixed(
                x.parse()
                    .map_err(|_| CliError::usage(format!("gadget-girth = {x}: expected guaranteed, match or a number")))?,
            ),
        };
    }
    if let Some(v) = s.raw("gadget-mode") {
        p.gadget_mode = match v {
            "shared" => GadgetMode::Shared,
            "per-vertex" => GadgetMode::PerVertex,
            x => return Err(CliError::usage(format!("gadget-mode = {x}: expected shared or per-vertex"))),
        };
    }
    if let Some(v) = s.raw("separation") {
        p.separation = match v {
            "minimal" => Separation::Minimal,
            "double" => Separation::Double,
            x => return Err(CliError::usage(format!("separation = {x}: expected minimal or double"))),
        };
    }
    Ok(p)
}

pub fn construct(run: &mut Run) -> Result<Value> {
    let params = construct_params(run.settings)?;
    let c = assemble(&params, run.seed)?;
    let r = &c.report;
    let comments = vec![format!(
        "construct d={} epsilon={} k={} seed={} lambda={} D={} L={}",
        r.d, r.epsilon, r.k, r.seed, r.lambda, r.depth, r.cycle_len
    )];
    run.outputs.write("graph.graph", graph_to_string(&c.graph, &comments).as_bytes())?;
    run.outputs.write("vector.vec", vector_to_string(&c.eigenpair.vector).as_bytes())?;
    run.outputs.write("set.txt", set_to_string(&c.set_s).as_bytes())?;
    let profile = mass_profile(&c.tree_pair);
    let mut cumulative = 0.0;
    let cum: Vec<(f64, f64)> = profile
        .iter()
        .enumerate()
        .map(|(i, m)| {
            cumulative += m;
            (i as f64, cumulative)
        })
        .collect();
    let plot = Plot {
        title: format!("mass profile, d={} D={} λ={:.4}", r.d, r.depth, r.lambda),
        x_label: "level".into(),
        y_label: "mass".into(),
        series: vec![
            Series {
                label: "per level".into(),
                points: profile.iter().enumerate().map(|(i, m)| (i as f64, *m)).collect(),
                markers: true,
            },
            Series {
                label: "cumulative".into(),
                points: cum,
                markers: false,
            },
        ],
        guides: vec![(r.mass_on_s, format!("mass on top {} levels", r.t))],
    };
    run.outputs.write("mass-profile.svg", plot.render().as_bytes())?;
    Ok(json!({
        "report": to_value(r),
        "layout": to_value(&c.layout),
        "mass_profile": profile,
        "files": {"graph": "graph.graph", "vector": "vector.vec", "set": "set.txt"},
    }))
}

fn rayleigh(g: &Graph, v: &[f64]) -> f64 {
    let mut av = vec![0.0; v.len()];
    g.apply_adjacency(v, &mut av);
    let num: f64 = av.iter().zip(v).map(|(a, b)| a * b).sum();
    let den: f64 = v.iter().map(|x| x * x).sum();
    num / den
}

pub fn verify(run: &mut Run) -> Result<Value> {
    let s = run.settings;
    let file = load_graph(s)?;
    let g = &file.graph;
    let vector = load_vector(s)?;
    if vector.len() != g.vertex_count() {
        return Err(CliError::usage(format!(
            "vector has {} entries, graph has {} vertices",
            vector.len(),
            g.vertex_count()
        )));
    }
    let set = match (s.raw("set"), s.get::<usize>("k")?) {
        (Some(path), _) => load_set(path)?,
        (None, Some(k)) => greedy_top_k(&vector, k)?,
        (None, None) => return Err(CliError::usage("verify needs k or set")),
    };
    let pair = Eigenpair {
        lambda: rayleigh(g, &vector),
        vector,
    };
    let report = verify_delocalization(g, &pair, &set, s.get("girth")?).map_err(|e| CliError::from(e).at("verify"))?;
    let d = branching(g).map_err(|e| CliError::from(e).at("branching"))?;
    let ceiling = (report.epsilon > 0.0).then(|| contrapositive_girth_bound(d, set.len(), report.epsilon));
    Ok(json!({
        "d": d,
        "report": to_value(&report),
        "sandwich_ok": report.sandwich_ok(),
        "girth_ceiling": ceiling.map(|c| to_value(&c)),
    }))
}

pub fn support(run: &mut Run) -> Result<Value> {
    let file = load_graph(run.settings)?;
    let v = load_vector(run.settings)?;
    let report = support_girth_bound(&file.graph, &v).map_err(|e| CliError::from(e).at("support"))?;
    Ok(to_value(&report))
}

pub fn linf(run: &mut Run) -> Result<Value> {
    let file = load_graph(run.settings)?;
    let cap = run.settings.or("cap", DEFAULT_DENSE_CAP)?;
    let p = linf_profile(&file.graph, cap).map_err(|e| CliError::from(e).at("linf"))?;
    Ok(to_value(&p))
}

/// One cell of a sweep grid.
#[derive(Clone, Copy, Debug)]
struct Cell {
    d: usize,
    epsilon: f64,
    k: usize,
    replicate: usize,
}

const SWEEP_HEADER: &str =
    "d,epsilon,k,replicate,seed,status,t,D,L,n,girth,girth_times_epsilon,lambda,theta,mass_on_S,set_size,deloc_bound,girth_ceiling";

fn sweep_row(cell: Cell, seed: u64, params: &AssembleParams) -> String {
    let Cell { d, epsilon, k, replicate } = cell;
    let prefix = format!("{d},{epsilon},{k},{replicate},{seed}");
    match assemble(params, seed) {
        Ok(c) => {
            let r = &c.report;
            let g = r.girth.map_or(String::new(), |g| g.to_string());
            let ge = r.girth.map_or(String::new(), |g| (g as f64 * epsilon).to_string());
            let bound = r.girth.map_or(String::new(), |g| deloc_bound(d, g, r.mass_on_s).to_string());
            let ceiling = contrapositive_girth_bound(d, r.set_size, r.mass_on_s).total;
            format!(
                "{prefix},ok,{},{},{},{},{g},{ge},{},{},{},{},{bound},{ceiling}",
                r.t, r.depth, r.cycle_len, r.n, r.lambda, r.theta, r.mass_on_s, r.set_size
            )
        }
        Err(e) => {
            let e = CliError::from(e);
            let msg = e.message.replace([',', '\n'], ";");
            format!("{prefix},error: {msg},,,,,,,,,,,,")
        }
    }
}

pub fn sweep(run: &mut Run) -> Result<Value> {
    let s = run.settings;
    let ds: Vec<usize> = s.list("d")?.unwrap_or(vec![2]);
    let eps = s.list_f64("epsilon")?.unwrap_or(vec![0.5, 0.25, 0.125]);
    let ks: Vec<usize> = s.list("k")?.unwrap_or(vec![6]);
    let seeds: usize = s.or("seeds", 1)?;
    let mut rest = s.clone();
    for key in ["d", "epsilon", "k"] {
        rest.remove(key);
    }
    let base = construct_params(&rest)?;
    let mut cells = Vec::new();
    for &d in &ds {
        for &epsilon in &eps {
            for &k in &ks {
                for replicate in 0..seeds {
                    cells.push(Cell { d, epsilon, k, replicate });
                }
            }
        }
    }
    let master = run.seed;
    let rows: Vec<String> = cells
        .par_iter()
        .map(|&cell| {
            let seed = derive_seed(master, &format!("sweep/{}/{}/{}/{}", cell.d, cell.epsilon, cell.k, cell.replicate));
            let params = AssembleParams {
                d: cell.d,
                epsilon: cell.epsilon,
                k: cell.k,
                ..base.clone()
            };
            sweep_row(cell, seed, &params)
        })
        .collect();
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(row);
        csv.push('\n');
    }
    run.outputs.write("sweep.csv", csv.as_bytes())?;

    let mut plot = Plot {
        title: "girth against 1/ε".into(),
        x_label: "1/ε".into(),
        y_label: "girth".into(),
        series: Vec::new(),
        guides: Vec::new(),
    };
    let mut failed = 0;
    for &d in &ds {
        for &k in &ks {
            let points: Vec<(f64, f64)> = cells
                .iter()
                .zip(&rows)
                .filter(|(c, _)| c.d == d && c.k == k)
                .filter_map(|(c, row)| {
                    let girth = row.split(',').nth(10)?.parse::<f64>().ok()?;
                    Some((1.0 / c.epsilon, girth))
                })
                .collect();
            plot.series.push(Series {
                label: format!("d={d} k={k}"),
                points,
                markers: true,
            });
        }
    }
    for row in &rows {
        if !row.split(',').nth(5).is_some_and(|s| s == "ok") {
            failed += 1;
        }
    }
    run.outputs.write("girth-vs-epsilon.svg", plot.render().as_bytes())?;
    Ok(json!({
        "cells": cells.len(),
        "failed": failed,
        "file": "sweep.csv",
    }))
}

pub fn density(run: &mut Run) -> Result<Value> {
    let s = run.settings;
    let d: usize = s.or("d", 2)?;
    let lo: usize = s.or("min-depth", 2)?;
    let hi: usize = s.or("max-depth", 12)?;
    let threshold: f64 = s.or("threshold", 0.2)?;
    let report = eigenvalue_density(d, lo, hi).map_err(|e| CliError::from(e).at("density"))?;
    Ok(json!({
        "report": to_value(&report),
        "threshold": threshold,
        "within_threshold": report.largest_gap <= threshold,
    }))
}

pub fn corpus_cmd(run: &mut Run) -> Result<Value> {
    let large = run.settings.or("large", false)?;
    let mut rows = Vec::new();
    for e in corpus(large)? {
        let name = format!("corpus/{}.graph", e.name);
        run.outputs.write(&name, graph_to_string(&e.graph, &e.comments).as_bytes())?;
        rows.push(json!({
            "name": e.name,
            "n": e.graph.vertex_count(),
            "m": e.graph.edge_count(),
            "degree": e.graph.declared_degree(),
            "girth": girth(&e.graph),
            "file": name,
        }));
    }
    Ok(json!({ "graphs": rows }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        let pi = std::f64::consts::PI;
        assert_eq!(parse_angle("pi").unwrap(), pi);
        assert_eq!(parse_angle("pi/3").unwrap(), pi / 3.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * pi / 3.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -pi / 2.0);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert!(parse_angle("pi3").is_err());
    }

    #[test]
    fn construct_flags() {
        let s = Settings::parse("d=3\nepsilon=1/4\ngadget-girth=7\ngadget-mode=per-vertex\nlambda-index=2").unwrap();
        let p = construct_params(&s).unwrap();
        assert_eq!((p.d, p.epsilon, p.k), (3, 0.25, 24));
        assert_eq!(p.gadget_girth, GadgetGirth::Fixed(7));
        assert_eq!(p.gadget_mode, GadgetMode::PerVertex);
        assert_eq!(p.lambda, LambdaSelector::Index(2));
        assert!(construct_params(&Settings::parse("separation=far").unwrap()).is_err());
    }
}
