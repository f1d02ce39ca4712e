//! Writes generated instances as files the other commands read.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use matroid_cb::element::{ElementSet, GroundSet};
use matroid_cb::graph::Graph;
use matroid_cb::matroid::to_text;
use matroid_cb::matroid::MatroidExpr;
use matroid_cb::oracle::gen::{self, InstanceSeed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Exchange,
    Sets,
    Sm,
    Family,
    FamilyCb,
    Paths,
    Bipartite,
}

struct Writer {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Writer {
    fn file(&mut self, name: &str, contents: &str) -> Result<String> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.written.push(path);
        Ok(name.to_string())
    }

    /// Writes `m` to `<stem>.mat`, with one `<stem>-g<k>.graph` per
    /// graphic leaf.
    fn matroid(&mut self, stem: &str, m: &MatroidExpr, ground: &GroundSet) -> Result<String> {
        let mut graphs: Vec<(String, String)> = Vec::new();
        let text = to_text(m, ground, &mut |g| {
            let name = format!("{stem}-g{}.graph", graphs.len());
            graphs.push((name.clone(), g.graph().to_text(ground)));
            name
        });
        for (name, contents) in &graphs {
            self.file(name, contents)?;
        }
        self.file(&format!("{stem}.mat"), &format!("{text}\n"))
    }
}

/// Labels `e0, e1, ...` covering every element the matroids mention.
fn labels_for<'a>(ms: impl IntoIterator<Item = &'a MatroidExpr>, at_least: usize) -> GroundSet {
    let n = ms
        .into_iter()
        .flat_map(|m| m.support().iter().map(|e| e.0 + 1).max())
        .max()
        .unwrap_or(0)
        .max(at_least);
    GroundSet::numbered(n)
}

fn set_line(key: &str, set: &ElementSet, ground: &GroundSet) -> String {
    format!("{key}: {}\n", ground.format_set(set))
}

fn graph_labels(g: &Graph) -> GroundSet {
    GroundSet::numbered(g.edges().iter().map(|e| e.element.0 + 1).max().unwrap_or(0))
}

pub fn run(kind: GenKind, seed: InstanceSeed, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut w = Writer {
        dir: dir.to_path_buf(),
        written: Vec::new(),
    };
    let name = kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let s = seed.shape;
    let header = format!(
        "# generated: {name} seed {} elements {} indices {} mix {:?} density {}\n",
        seed.seed, s.elements, s.indices, s.mix, s.density
    )
    .to_lowercase();
    match kind {
        GenKind::Exchange => {
            let inst = gen::exchange(seed)?;
            let names = labels_for([&inst.m0, &inst.m1], seed.shape.elements);
            let m0 = w.matroid("m0", &inst.m0, &names)?;
            let m1 = w.matroid("m1", &inst.m1, &names)?;
            let body = format!(
                "{header}m0: {m0}\nm1: {m1}\n{}{}",
                set_line("i0", &inst.i0, &names),
                set_line("i1", &inst.i1, &names)
            );
            w.file("instance.txt", &body)?;
        }
        GenKind::Sets => {
            let (a, b, f0, f1) = gen::set_pair(seed)?;
            let names = labels_for([&a, &b], seed.shape.elements);
            let m0 = w.matroid("m0", &a, &names)?;
            let m1 = w.matroid("m1", &b, &names)?;
            let body = format!(
                "{header}m0: {m0}\nm1: {m1}\n{}{}",
                set_line("f0", &f0, &names),
                set_line("f1", &f1, &names)
            );
            w.file("instance.txt", &body)?;
        }
        GenKind::Sm => {
            let (a, b, j) = gen::sm_pair(seed)?;
            let names = labels_for([&a, &b], seed.shape.elements);
            let m0 = w.matroid("m0", &a, &names)?;
            let m1 = w.matroid("m1", &b, &names)?;
            let body = format!("{header}m0: {m0}\nm1: {m1}\n{}", set_line("j", &j, &names));
            w.file("instance.txt", &body)?;
        }
        GenKind::Family => {
            let inst = gen::family(seed)?;
            let names = labels_for(inst.members.iter().map(|m| &m.matroid), seed.shape.elements);
            let mut body = format!("{header}theta: {}\n", inst.members.len());
            for (i, m) in inst.members.iter().enumerate() {
                let file = w.matroid(&format!("m{i}"), &m.matroid, &names)?;
                body += &format!("M {i}: {file}\n");
                body += &set_line(&format!("P {i}"), &m.packing, &names);
                body += &set_line(&format!("R {i}"), &m.covering, &names);
            }
            w.file("instance.txt", &body)?;
        }
        GenKind::FamilyCb => {
            let inst = gen::family_cb(seed)?;
            let names = labels_for(inst.members.iter().map(|m| &m.matroid), seed.shape.elements);
            let theta = inst.members.len();
            let mut body = format!("{header}theta: {theta}\n");
            for (i, m) in inst.members.iter().enumerate() {
                let file = w.matroid(&format!("m{i}"), &m.matroid, &names)?;
                body += &format!("M {i}: {file}\n");
                body += &set_line(&format!("P {i}"), &m.packing, &names);
                body += &set_line(&format!("R {i}"), &m.covering, &names);
            }
            for (e, n) in inst.ground.iter().zip(&inst.index_matroids) {
                let mut index_names = GroundSet::new();
                let top = n.support().iter().map(|x| x.0 + 1).max().unwrap_or(0).max(theta);
                for x in 0..top {
                    index_names.intern(&if x < theta { x.to_string() } else { format!("x{x}") });
                }
                let label = names.label(e).to_string();
                let file = w.matroid(&format!("n-{label}"), n, &index_names)?;
                body += &format!("N {label}: {file}\n");
            }
            w.file("instance.txt", &body)?;
        }
        GenKind::Paths => {
            let (g, p0, p1) = gen::paths(seed)?;
            let names = graph_labels(&g);
            let graph = w.file("graph.graph", &g.to_text(&names))?;
            let a = w.file("p0.paths", &p0.to_text(&g))?;
            let b = w.file("p1.paths", &p1.to_text(&g))?;
            w.file("instance.txt", &format!("{header}graph: {graph}\np0: {a}\np1: {b}\n"))?;
        }
        GenKind::Bipartite => {
            let (g, i0, i1) = gen::bipartite(seed)?;
            let names = graph_labels(&g);
            let graph = w.file("graph.graph", &g.to_text(&names))?;
            let body = format!(
                "{header}graph: {graph}\n{}{}",
                set_line("i0", &i0, &names),
                set_line("i1", &i1, &names)
            );
            w.file("instance.txt", &body)?;
        }
    }
    Ok(w.written)
}
