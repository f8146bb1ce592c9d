//! Acceptance suite: one PASS/FAIL line per criterion, followed by
//! supplemental `info` lines. Criteria listed in `KNOWN` are reported as
//! failing but do not fail the run; any other failure exits nonzero.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use girthlab::corpus::{bundled_dir, corpus, high_girth_cubic};
use girthlab::output::strip_timing;
use girthlab_core::glue::{assemble, AssembleParams, GadgetGirth, GlueState, RepairConfig, Separation};
use girthlab_core::graph::{enumerate_short_cycles, girth, Graph, DEFAULT_CYCLE_CAP};
use girthlab_core::io::{graph_to_string, read_graph, read_vector, vector_to_string};
use girthlab_core::localize::{
    deloc_bound, greedy_top_k, localizer_params, mass_on_set, support_girth_bound, verify_delocalization,
};
use girthlab_core::seed::rng_for;
use girthlab_core::spectral::{
    branching, dense_spectrum, localizer_coeffs, localizer_quadratic_form, op_norm_1_inf, scale, twelfth_angles,
    ChebSeries, Eigenpair,
};
use girthlab_core::tree::{
    build_dary_tree, eigenvalue_density, euclid, find_symmetric_eigenvalues, symmetric_eigenvector, transfer_pairs,
    TreeSpec,
};

/// Criteria that fail for a documented reason.
const KNOWN: &[(usize, &str)] = &[(
    8,
    "the union over depths 2..12 leaves a gap of about 0.359 around 0; the eigenvalues near 0 only fill in at larger depths",
)];

struct Outcome {
    pass: bool,
    detail: String,
    info: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            info: Vec::new(),
        }
    }

    fn info(mut self, line: impl Into<String>) -> Self {
        self.info.push(line.into());
        self
    }
}

fn doubling(n: usize) -> impl Iterator<Item = usize> {
    std::iter::successors(Some(1usize), |k| Some(k * 2)).take_while(move |&k| k <= n)
}

fn high_girth_instance() -> girthlab_core::glue::Construction {
    let mut p = AssembleParams::new(2, 0.5, 24);
    p.c = 1.0;
    p.cycle_len = Some(16);
    p.gadget_girth = GadgetGirth::Fixed(13);
    p.gadget_size = Some(1600);
    assemble(&p, 1).expect("high-girth instance assembles")
}

fn closed_form(d: usize, m: usize) -> f64 {
    (d as f64 - 1.0) / (2.0 * (d as f64).powf(m as f64 / 2.0))
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for (name, g) in [
        ("petersen", girthlab_core::families::petersen()),
        ("heawood", girthlab_core::families::heawood()),
    ] {
        let norm = op_norm_1_inf(&g, &ChebSeries::single(2)).unwrap();
        worst = worst.max((norm - 0.25).abs());
        lines.push(format!("{name}: ‖T_2‖ = {norm}"));
    }
    let c = high_girth_instance();
    let g = c.report.girth.unwrap_or(usize::MAX);
    let mut ms = Vec::new();
    for m in (2..).step_by(2).take_while(|m| 2 * m < g) {
        let norm = op_norm_1_inf(&c.graph, &ChebSeries::single(m)).unwrap();
        worst = worst.max((norm - closed_form(2, m)).abs());
        ms.push(m);
    }
    let pass = worst <= 1e-10 && g >= 12 && !ms.is_empty();
    Outcome::new(
        pass,
        format!(
            "{}; instance n={} girth {g}, even m = {ms:?}; max deviation {worst:.2e}",
            lines.join(", "),
            c.report.n
        ),
    )
}

fn criterion_2(cubic: &Graph) -> Outcome {
    let mut peak_fail = 0;
    let mut min_fail = 0;
    let mut worst_min = f64::INFINITY;
    let mut cases = 0;
    for d in [2, 3, 4] {
        for m in [4, 8, 16] {
            for r in [2, 4] {
                for phi in twelfth_angles() {
                    let f = localizer_coeffs(phi.cos(), m, r, d).unwrap();
                    cases += 1;
                    if f.eval(phi.cos()) < f.peak_floor() - 1e-12 {
                        peak_fail += 1;
                    }
                    let gm = f.grid_min(20001);
                    worst_min = worst_min.min(gm);
                    if gm < -1.0 - 1e-9 {
                        min_fail += 1;
                    }
                }
            }
        }
    }
    // Part (3): every corpus graph whose girth admits some (m, r) in the grid.
    let mut graphs: Vec<(String, Graph)> = corpus(false)
        .unwrap()
        .into_iter()
        .map(|e| (e.name, e.graph))
        .collect();
    graphs.push(("high-girth-cubic-17".into(), cubic.clone()));
    let mut norm_cases = 0;
    let mut norm_fail = 0;
    let mut by_d: BTreeMap<usize, usize> = BTreeMap::new();
    let mut slack = f64::INFINITY;
    for (_, g) in &graphs {
        let (Ok(d), Some(gg)) = (branching(g), girth(g)) else {
            continue;
        };
        if !(2..=4).contains(&d) {
            continue;
        }
        for m in [4, 8, 16] {
            for r in [2, 4] {
                if 2 * m * r >= gg {
                    continue;
                }
                for phi in twelfth_angles() {
                    let f = localizer_coeffs(phi.cos(), m, r, d).unwrap();
                    let norm = op_norm_1_inf(g, &f.series()).unwrap();
                    norm_cases += 1;
                    *by_d.entry(d).or_default() += 1;
                    slack = slack.min(f.norm_bound() - norm);
                    if norm > f.norm_bound() + 1e-10 {
                        norm_fail += 1;
                    }
                }
            }
        }
    }
    let pass = peak_fail == 0 && min_fail == 0 && norm_fail == 0 && norm_cases > 0;
    let mut out = Outcome::new(
        pass,
        format!(
            "{cases} grid cases: peak failures {peak_fail}, grid-min failures {min_fail} (smallest {worst_min:.6}); \
             norm bound on {norm_cases} (graph, m, r, φ) cases, failures {norm_fail}, least slack {slack:.3e}"
        ),
    );
    out = out.info(format!("norm-bound cases by d: {by_d:?}; no corpus graph with d = 3 or 4 has girth above 2mr"));
    out
}

fn criterion_3() -> Outcome {
    let mut checks = 0usize;
    let mut violations = 0usize;
    let mut sandwich = 0usize;
    let mut sandwich_fail = 0usize;
    let mut lower = 0usize;
    let mut lower_fail = 0usize;
    let mut graphs = 0;
    let mut tightest = f64::INFINITY;
    for e in corpus(false).unwrap() {
        let g = &e.graph;
        let n = g.vertex_count();
        let (Ok(d), Some(gg)) = (branching(g), girth(g)) else {
            continue;
        };
        if n > 2000 || d < 2 {
            continue;
        }
        graphs += 1;
        let pairs = dense_spectrum(g, 2000).unwrap();
        for pair in &pairs {
            for k in doubling(n) {
                let s = greedy_top_k(&pair.vector, k).unwrap();
                let r = verify_delocalization(g, pair, &s, Some(gg)).unwrap();
                checks += 1;
                if !r.pass {
                    violations += 1;
                }
                tightest = tightest.min(k as f64 / deloc_bound(d, gg, r.epsilon));
                if let Some(ok) = r.sandwich_ok() {
                    sandwich += 1;
                    if !ok {
                        sandwich_fail += 1;
                    }
                }
                // Lower side alone with stride 2, which needs no girth.
                if n <= 200 && r.epsilon > 0.05 {
                    let (m, _) = localizer_params(r.epsilon, usize::MAX / 4);
                    let f = localizer_coeffs(pair.lambda / scale(d), m.unwrap(), 2, d).unwrap();
                    let mut x = vec![0.0; n];
                    for &v in &s {
                        x[v] = pair.vector[v];
                    }
                    let q = localizer_quadratic_form(g, &f, &x, None).unwrap();
                    lower += 1;
                    if q < r.epsilon * r.epsilon - 1e-9 {
                        lower_fail += 1;
                    }
                }
            }
        }
    }
    let pass = violations == 0 && sandwich_fail == 0 && checks > 0;
    Outcome::new(
        pass,
        format!(
            "{graphs} graphs, {checks} (eigenpair, k) checks, {violations} violations; sandwich evaluated {sandwich} times, {sandwich_fail} failures"
        ),
    )
    .info(format!("smallest |S| / bound ratio {tightest:.3}"))
    .info("the sandwich needs a stride r ≥ 2 with mr < g/2, so girth above 32; no graph under the dense cap qualifies")
    .info(format!("girth-free lower side ⟨v1_S,Kv1_S⟩ ≥ ε² with r = 2: {lower} checks, {lower_fail} failures"))
}

/// Eigenvalues whose eigenspace has a level-constant vector; such a vector
/// cannot vanish at the root, so the root weight of the eigenspace decides.
fn level_constant_eigenvalues(g: &Graph) -> Vec<f64> {
    let pairs = dense_spectrum(g, 2000).unwrap();
    let mut out = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i + 1;
        while j < pairs.len() && pairs[j].lambda - pairs[j - 1].lambda < 1e-8 {
            j += 1;
        }
        let weight: f64 = pairs[i..j].iter().map(|p| p.vector[0] * p.vector[0]).sum();
        if weight > 1e-10 {
            out.push(pairs[i..j].iter().map(|p| p.lambda).sum::<f64>() / (j - i) as f64);
        }
        i = j;
    }
    out
}

fn criterion_4() -> Outcome {
    let mut worst_match: f64 = 0.0;
    let mut count_mismatch = 0;
    let mut worst_residual: f64 = 0.0;
    let mut band_fail = 0;
    let mut band_checks = 0;
    let mut specs = 0;
    for d in [2, 3] {
        for depth in 1..=6 {
            let spec = TreeSpec::new(d, depth).unwrap();
            let tree = build_dary_tree(spec).unwrap();
            let dense = level_constant_eigenvalues(&tree.graph);
            let found = find_symmetric_eigenvalues(&spec, None, None).unwrap();
            specs += 1;
            if dense.len() != found.len() {
                count_mismatch += 1;
                continue;
            }
            for (a, b) in dense.iter().zip(&found) {
                worst_match = worst_match.max((a - b).abs());
            }
            for &lambda in &found {
                let pair = symmetric_eigenvector(&spec, lambda).unwrap();
                let ep = Eigenpair {
                    lambda,
                    vector: pair.vector.clone(),
                };
                worst_residual = worst_residual.max(ep.residual(&tree.graph));
                let w = transfer_pairs(&pair.profile);
                let base = euclid(w[0]);
                let s = pair.theta.sin();
                for wi in &w {
                    let ratio = euclid(*wi) / base;
                    band_checks += 1;
                    if ratio < s / 2.0 - 1e-9 || ratio > 2.0 / s + 1e-9 {
                        band_fail += 1;
                    }
                }
            }
        }
    }
    let pass = count_mismatch == 0 && worst_match <= 1e-8 && worst_residual <= 1e-9 && band_fail == 0;
    Outcome::new(
        pass,
        format!(
            "{specs} trees: count mismatches {count_mismatch}, max eigenvalue deviation {worst_match:.2e}, \
             max residual {worst_residual:.2e}, band failures {band_fail}/{band_checks}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut info = Vec::new();
    for eps in [0.5, 0.25] {
        let mut worst_margin = f64::INFINITY;
        let mut girths = BTreeSet::new();
        for seed in 1..=5u64 {
            let start = Instant::now();
            let c = match assemble(&AssembleParams::new(2, eps, 24), seed) {
                Ok(c) => c,
                Err(e) => {
                    failures.push(format!("ε={eps} seed {seed}: {e}"));
                    continue;
                }
            };
            let g = &c.graph;
            let regular = (0..g.vertex_count()).all(|v| g.degree(v) == 3);
            let residual = c.eigenpair.residual(g);
            let gg = girth(g).unwrap_or(usize::MAX);
            let l = 0.5 * (c.layout.n_leaves as f64).log2();
            let need = (l / 2.0).ceil() as usize;
            let mass = mass_on_set(&c.eigenpair.vector, &c.set_s).unwrap();
            let sin4 = c.tree_pair.theta.sin().powi(4);
            let floor = sin4 / 32.0 * eps;
            worst_margin = worst_margin.min(mass / floor);
            girths.insert(gg);
            let ok = regular && residual <= 1e-10 && gg >= need && mass >= floor && c.set_s.len() <= 48;
            if !ok {
                failures.push(format!(
                    "ε={eps} seed {seed}: regular {regular}, residual {residual:.1e}, girth {gg} (need {need}), mass {mass:.4} (floor {floor:.4}), |S| {}",
                    c.set_s.len()
                ));
            }
            if seed == 1 {
                info.push(format!(
                    "ε={eps}: n={}, D={}, L={}, n_leaves={}, λ={:.3e}, |S|={}, {:.1}s per seed",
                    c.report.n,
                    c.report.depth,
                    c.report.cycle_len,
                    c.layout.n_leaves,
                    c.report.lambda,
                    c.set_s.len(),
                    start.elapsed().as_secs_f64()
                ));
            }
        }
        info.push(format!("ε={eps}: girths {girths:?}, smallest mass/floor ratio {worst_margin:.2}"));
    }
    let mut out = Outcome::new(
        failures.is_empty(),
        if failures.is_empty() {
            "10 instances: 3-regular, residual ≤ 1e-10, girth ≥ ⌈L/2⌉, mass above (sin⁴θ/32)ε with |S| ≤ 2k".to_string()
        } else {
            failures.join("; ")
        },
    );
    out.info = info;
    out
}

struct RepairStats {
    instances: usize,
    failures: Vec<String>,
    switches: usize,
    min_slack: f64,
}

fn repair_suite(c: f64, instances: u64) -> (usize, RepairStats) {
    let n_leaves = TreeSpec::new(2, 9).unwrap().level_size(9);
    let l = (2.0 * c * (n_leaves as f64).log2() + 1e-9).floor() as usize;
    let mut stats = RepairStats {
        instances: 0,
        failures: Vec::new(),
        switches: 0,
        min_slack: f64::INFINITY,
    };
    for seed in 0..instances {
        let mut rng = rng_for(seed, "acceptance-glue");
        let mut state = GlueState::new(2, 9, l, c, Separation::Minimal, &mut rng).unwrap();
        stats.instances += 1;
        let report = match state.repair_girth(&RepairConfig::default(), &mut rng) {
            Ok(r) => r,
            Err(e) => {
                stats.failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let left = enumerate_short_cycles(&state.union_graph().unwrap(), l, DEFAULT_CYCLE_CAP).unwrap();
        if !state.inventory().is_empty() || !left.is_empty() {
            stats.failures.push(format!("seed {seed}: {} short cycles remain", left.len()));
        }
        for r in &report.records {
            stats.switches += 1;
            if r.inventory_after >= r.inventory_before {
                stats.failures.push(format!("seed {seed} step {}: count did not drop", r.iteration));
            }
            let floor = r.eligible_floor(n_leaves, l);
            stats.min_slack = stats.min_slack.min(r.eligible as f64 - floor);
            if (r.eligible as f64) < floor {
                stats.failures.push(format!("seed {seed} step {}: eligible {} below {floor}", r.iteration, r.eligible));
            }
        }
    }
    (l, stats)
}

fn criterion_6() -> Outcome {
    let (l, s) = repair_suite(0.65, 20);
    let mut out = Outcome::new(
        s.failures.is_empty(),
        if s.failures.is_empty() {
            format!("{} instances at L={l}: all repaired, {} switches, each strictly reducing the count, eligible counts above the floor", s.instances, s.switches)
        } else {
            s.failures.join("; ")
        },
    );
    for c in [0.25, 0.5, 0.85, 1.0] {
        let (l, s) = repair_suite(c, 5);
        out = out.info(format!(
            "L={l}: {} instances, {} switches, {} failures{}",
            s.instances,
            s.switches,
            s.failures.len(),
            s.failures.first().map_or(String::new(), |f| format!(" ({f})"))
        ));
    }
    out.info("the floor n − |inventory|·L − 3^{2L} is negative at these sizes, so that part holds trivially")
}

/// Independent check that `cycle` is a simple closed walk of `g`.
fn genuine_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let len = cycle.len();
    if len < 3 {
        return false;
    }
    let vertices: BTreeSet<usize> = cycle.iter().copied().collect();
    let mut edges = BTreeSet::new();
    for i in 0..len {
        let (a, b) = (cycle[i], cycle[(i + 1) % len]);
        if !g.has_edge(a, b) || !edges.insert((a.min(b), a.max(b))) {
            return false;
        }
    }
    vertices.len() == len
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut lens = BTreeSet::new();
    for k in [6, 24] {
        for seed in 0..5u64 {
            let c = assemble(&AssembleParams::new(2, 0.5, k), seed).unwrap();
            let r = support_girth_bound(&c.graph, &c.eigenpair.vector).unwrap();
            cases += 1;
            let d = 2f64;
            let bound = 4.0 * (r.support_size as f64).ln() / d.ln() + 4.0;
            let ok = !r.vacuous && genuine_cycle(&c.graph, &r.cycle) && (r.cycle.len() as f64) <= bound + 1e-9;
            lens.insert(r.cycle.len());
            if !ok {
                failures.push(format!("k={k} seed {seed}: cycle {:?}, support {}", r.cycle, r.support_size));
            }
        }
    }
    Outcome::new(
        failures.is_empty() && cases > 0,
        if failures.is_empty() {
            format!("{cases} planted instances: every cycle is a simple closed walk of G within 4 log_d|H| + 4 (lengths {lens:?})")
        } else {
            failures.join("; ")
        },
    )
}

fn criterion_8() -> Outcome {
    let r = eigenvalue_density(2, 2, 12).unwrap();
    let mut out = Outcome::new(
        r.largest_gap <= 0.2,
        format!(
            "{} eigenvalues over D=2..12; largest gap {:.4} on ({:.4}, {:.4})",
            r.eigenvalue_count, r.largest_gap, r.gap_from, r.gap_to
        ),
    );
    if let Some((dmax, gap)) = (12..=30)
        .map(|dmax| (dmax, eigenvalue_density(2, 2, dmax).unwrap().largest_gap))
        .find(|(_, gap)| *gap <= 0.2)
    {
        out = out.info(format!("largest gap first drops to ≤ 0.2 at D_max = {dmax} ({gap:.4})"));
    }
    out
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_girthlab"))
}

fn files_in(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(p) = stack.pop() {
        for e in std::fs::read_dir(&p).unwrap() {
            let e = e.unwrap();
            if e.file_type().unwrap().is_dir() {
                stack.push(e.path());
            } else {
                let rel = e.path().strip_prefix(dir).unwrap().display().to_string();
                out.insert(rel, std::fs::read(e.path()).unwrap());
            }
        }
    }
    out
}

fn normalized(name: &str, bytes: &[u8]) -> Vec<u8> {
    if name.ends_with(".json") {
        let v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
        serde_json::to_vec(&strip_timing(v)).unwrap()
    } else {
        bytes.to_vec()
    }
}

fn criterion_9() -> Outcome {
    let b = |name: &str| bundled_dir().join(name).display().to_string();
    let (petersen, heawood) = (b("petersen.graph"), b("heawood.graph"));
    let (planted, planted_vec) = (b("planted-d2-eps0.5-k6.graph"), b("planted-d2-eps0.5-k6.vec"));
    let commands: Vec<Vec<&str>> = vec![
        vec!["girth", &petersen],
        vec!["spectrum", &heawood],
        vec!["cheb-norm", &petersen, "--m", "2"],
        vec!["localizer", "--d", "3", "--m", "8", "--r", "2", "--phi", "pi/3"],
        vec!["tree-spectrum", "--d", "2", "--depth", "6"],
        vec!["construct", "--d", "2", "--epsilon", "1/2", "--k", "24", "--seed", "11"],
        vec!["verify", &planted, &planted_vec, "--k", "8"],
        vec!["support", &planted, &planted_vec],
        vec!["linf", &heawood],
        vec!["sweep", "--d", "2", "--epsilon", "1/2,1/4", "--k", "6,24", "--seeds", "2", "--seed", "5"],
        vec!["density", "--d", "2", "--max-depth", "8"],
        vec!["corpus"],
    ];
    let root = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    for args in &commands {
        let mut runs = Vec::new();
        for side in ["a", "b"] {
            let out = root.path().join(side).join(args[0]);
            let o = bin().arg("--out").arg(&out).args(args).output().unwrap();
            if !o.status.success() {
                failures.push(format!("{}: exit {:?}", args[0], o.status.code()));
            }
            let stdout: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap_or_default();
            runs.push((strip_timing(stdout), files_in(&out)));
        }
        let (a, b) = (&runs[0], &runs[1]);
        let same_files = a.1.keys().eq(b.1.keys())
            && a.1.iter().all(|(k, v)| normalized(k, v) == normalized(k, &b.1[k]));
        if a.0 != b.0 || !same_files || a.1.is_empty() {
            failures.push(format!("{}: outputs differ", args[0]));
        }
    }
    let (graphs, vectors, rt_fail) = round_trips();
    failures.extend(rt_fail);
    Outcome::new(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} commands reproduce byte for byte; {graphs} corpus graphs and {vectors} vectors round-trip", commands.len())
        } else {
            failures.join("; ")
        },
    )
}

fn round_trips() -> (usize, usize, Vec<String>) {
    let mut failures = Vec::new();
    let mut vectors = 0;
    let entries = corpus(true).unwrap();
    for e in &entries {
        let text = graph_to_string(&e.graph, &e.comments);
        let back = read_graph(text.as_bytes()).unwrap();
        if back.graph != e.graph || back.comments != e.comments || graph_to_string(&back.graph, &back.comments) != text {
            failures.push(format!("{} does not round-trip", e.name));
        }
        if e.graph.vertex_count() <= 500 {
            for p in dense_spectrum(&e.graph, 500).unwrap() {
                let back = read_vector(vector_to_string(&p.vector).as_bytes()).unwrap();
                vectors += 1;
                if back.iter().zip(&p.vector).any(|(a, b)| a.to_bits() != b.to_bits()) || back.len() != p.vector.len() {
                    failures.push(format!("{} eigenvector does not round-trip", e.name));
                    break;
                }
            }
        }
    }
    (entries.len(), vectors, failures)
}

fn main() {
    let started = Instant::now();
    let cubic = high_girth_cubic().expect("seeded girth-17 cubic graph");
    let titles = [
        "Chebyshev 1→∞ norm equals (d−1)/(2d^{m/2}) below half the girth",
        "localizer peak, lower bound and norm bound",
        "delocalization bound over the corpus",
        "tree eigenvalues against the dense oracle; transfer band",
        "end-to-end construction at desk scale",
        "switching repair soundness",
        "cycle inside the support of an exactly supported eigenvector",
        "density of tree eigenvalues",
        "determinism and round-trip",
    ];
    let runners: Vec<Box<dyn Fn() -> Outcome>> = vec![
        Box::new(criterion_1),
        Box::new(|| criterion_2(&cubic)),
        Box::new(criterion_3),
        Box::new(criterion_4),
        Box::new(criterion_5),
        Box::new(criterion_6),
        Box::new(criterion_7),
        Box::new(criterion_8),
        Box::new(criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (i, (title, run)) in titles.iter().zip(&runners).enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} [{id}] {title}: {} ({:.1}s)", o.detail, start.elapsed().as_secs_f64());
        for line in &o.info {
            println!("     info: {line}");
        }
        if !o.pass {
            match KNOWN.iter().find(|(k, _)| *k == id) {
                Some((_, reason)) => println!("     known: {reason}"),
                None => unexpected.push(id),
            }
        }
    }
    println!("acceptance finished in {:.1}s", started.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
