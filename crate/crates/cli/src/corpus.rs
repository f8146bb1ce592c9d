//! The test corpus: named graphs, seeded random graphs and a small planted
//! construction. A subset ships as files under `corpus/` in this crate.

use girthlab_core::families;
use girthlab_core::glue::{assemble, high_girth_regular, AssembleParams, Construction, GadgetConfig};
use girthlab_core::graph::Graph;
use girthlab_core::seed::rng_for;
use girthlab_core::tree::{build_dary_tree, TreeSpec};

use crate::error::Result;

/// Master seed for every randomized corpus member.
pub const CORPUS_SEED: u64 = 0x6769_7274_686c_6162;

pub struct CorpusEntry {
    pub name: String,
    pub graph: Graph,
    pub comments: Vec<String>,
}

fn entry(name: &str, graph: Graph) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        graph,
        comments: vec![name.to_string()],
    }
}

/// Parameters of the bundled planted instance.
pub fn planted_params() -> AssembleParams {
    AssembleParams::new(2, 0.5, 6)
}

pub fn planted_instance() -> Result<Construction> {
    Ok(assemble(&planted_params(), CORPUS_SEED)?)
}

/// Seeded cubic graph of girth at least 17; large enough that degree-8
/// localizers act locally like on a tree.
pub fn high_girth_cubic() -> Result<Graph> {
    let (g, _) = high_girth_regular(3, 1 << 16, 17, &GadgetConfig::default(), &mut rng_for(CORPUS_SEED, "cubic-17"))?;
    Ok(g)
}

/// Every corpus member; `large` adds the members too big for dense oracles.
pub fn corpus(large: bool) -> Result<Vec<CorpusEntry>> {
    let mut out = vec![
        entry("petersen", families::petersen()),
        entry("heawood", families::heawood()),
        entry("mobius-kantor", families::mobius_kantor()),
        entry("desargues", families::desargues()),
        entry("dodecahedron", families::dodecahedron()),
        entry("mcgee", families::mcgee()),
        entry("tutte-coxeter", families::tutte_coxeter()),
        entry("k4", families::complete(4)?),
        entry("k5", families::complete(5)?),
        entry("k33", families::complete_bipartite(3, 3)?),
        entry("q3", families::hypercube(3)?),
        entry("q4", families::hypercube(4)?),
    ];
    for n in [5, 12, 31] {
        out.push(entry(&format!("cycle-{n}"), families::cycle(n)?));
    }
    for (d, depth) in [(2, 4), (3, 3)] {
        let tree = build_dary_tree(TreeSpec::new(d, depth)?)?;
        let mut e = entry(&format!("tree-d{d}-D{depth}"), tree.graph.clone());
        e.comments.push(tree.levels_comment());
        out.push(e);
    }
    for (n, degree) in [(100, 3), (500, 3), (60, 4), (40, 5)] {
        let label = format!("random-{degree}-regular-{n}");
        let g = families::random_regular(n, degree, &mut rng_for(CORPUS_SEED, &label))?;
        out.push(entry(&label, g));
    }
    let planted = planted_instance()?;
    let mut e = entry("planted-d2-eps0.5-k6", planted.graph);
    e.comments.push(format!(
        "lambda={} t={} D={} mass_on_S={}",
        planted.report.lambda, planted.report.t, planted.report.depth, planted.report.mass_on_s
    ));
    out.push(e);
    if large {
        out.push(entry("high-girth-cubic-17", high_girth_cubic()?));
    }
    Ok(out)
}

/// Names of the members shipped as files.
pub const BUNDLED: [&str; 5] = ["petersen", "heawood", "cycle-12", "tree-d2-D4", "planted-d2-eps0.5-k6"];

/// Directory of the bundled files.
pub fn bundled_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}
