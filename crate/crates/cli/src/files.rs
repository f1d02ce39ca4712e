//! Instance and solution file formats.
//!
//! Instance files are `key: value` lines; `#` starts a comment. A matroid
//! value is either a file name (relative to the instance file) or an
//! inline expression starting with `(`. Set values are labels separated by
//! spaces or commas.
//!
//! ```text
//! m0: fan.mat
//! m1: (free (a b c))
//! i0: a b
//! i1: c
//! ```
//!
//! Partition instances use `theta: <k>`, then `M <i>:`, `P <i>:`, `R <i>:`
//! per index and optionally `N <label>:` per element, whose matroid is on
//! the index labels `0 .. k-1`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use matroid_cb::element::{ElementSet, GroundSet};
use matroid_cb::graph::Graph;
use matroid_cb::matroid::parse_matroid;
use matroid_cb::matroid::MatroidExpr;
use matroid_cb::partition::{FamilyCbInstance, FamilyInstance, FamilyMember};
use matroid_cb::Error;

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_error(line: usize, message: impl Into<String>) -> anyhow::Error {
    Error::Parse {
        line,
        column: 1,
        message: message.into(),
    }
    .into()
}

pub struct KeyFile {
    pub dir: PathBuf,
    pub name: String,
    entries: Vec<(String, String, usize)>,
}

impl KeyFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        Self::parse(&text, path).with_context(|| format!("in {}", path.display()))
    }

    fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| parse_error(idx + 1, "expected `key: value`"))?;
            let key = key.split_whitespace().collect::<Vec<_>>().join(" ");
            if entries.iter().any(|(k, _, _)| *k == key) {
                return Err(parse_error(idx + 1, format!("duplicate key `{key}`")));
            }
            entries.push((key, value.trim().to_string(), idx + 1));
        }
        Ok(Self {
            dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            name: path.display().to_string(),
            entries,
        })
    }

    /// Entries given directly, e.g. from command-line flags; file names
    /// resolve against the working directory.
    pub fn from_pairs(name: &str, pairs: Vec<(&str, String)>) -> Self {
        Self {
            dir: PathBuf::new(),
            name: name.to_string(),
            entries: pairs.into_iter().map(|(k, v)| (k.to_string(), v, 0)).collect(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _, _)| k == key).map(|(_, v, _)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| anyhow!(Error::Input(format!("{}: missing `{key}:` line", self.name))))
    }

    /// Entries whose key is `prefix <rest>`, as `(rest, value, line)`.
    fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = (&'a str, &'a str, usize)> + 'a {
        self.entries.iter().filter_map(move |(k, v, l)| {
            k.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix(' '))
                .map(|r| (r, v.as_str(), *l))
        })
    }

    pub fn matroid(&self, key: &str, ground: &mut GroundSet) -> Result<MatroidExpr> {
        let value = self.require(key)?;
        load_matroid(value, &self.dir, ground).with_context(|| format!("{}: `{key}`", self.name))
    }

    pub fn set(&self, key: &str, ground: &GroundSet) -> Result<ElementSet> {
        let value = self.get(key).unwrap_or("");
        ground.parse_set(value).with_context(|| format!("{}: `{key}`", self.name))
    }
}

/// Reads a graph file relative to `dir`, registering edge labels.
pub fn load_graph(path: &Path, ground: &mut GroundSet) -> Result<Graph> {
    let text = read(path)?;
    Graph::parse(&text, ground).with_context(|| format!("in {}", path.display()))
}

/// A matroid from a file name or inline text; graph files resolve
/// relative to the file holding the expression.
pub fn load_matroid(value: &str, dir: &Path, ground: &mut GroundSet) -> Result<MatroidExpr> {
    let (text, base) = if value.starts_with('(') {
        (value.to_string(), dir.to_path_buf())
    } else {
        let path = dir.join(value);
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        (read(&path)?, base)
    };
    let mut loader = |name: &str| -> matroid_cb::Result<String> {
        fs::read_to_string(base.join(name)).map_err(|e| Error::Input(format!("cannot read graph file {name}: {e}")))
    };
    Ok(parse_matroid(&text, ground, &mut loader)?)
}

pub fn load_matroid_file(path: &Path, ground: &mut GroundSet) -> Result<MatroidExpr> {
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    load_matroid(&name, &dir, ground).with_context(|| format!("in {}", path.display()))
}

/// A solution set: labels, optionally after a `NAME:` prefix.
pub fn parse_solution_set(text: &str, ground: &GroundSet) -> Result<ElementSet> {
    let mut out = ElementSet::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with("verdict") || line.starts_with("violation") {
            continue;
        }
        let body = match line.split_once(':') {
            Some((k, v)) if k.trim() == "I" || k.trim() == "F" => v,
            Some(_) => continue,
            None => line,
        };
        out = out.union(&ground.parse_set(body)?);
    }
    Ok(out)
}

/// `T <i>: labels` lines of a partition solution.
pub fn parse_partition_solution(text: &str, ground: &GroundSet, theta: usize) -> Result<Vec<ElementSet>> {
    let mut sets = vec![ElementSet::new(); theta];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let Some(rest) = line.strip_prefix("T ") else { continue };
        let (i, body) = rest
            .split_once(':')
            .ok_or_else(|| parse_error(idx + 1, "expected `T <i>: labels`"))?;
        let i: usize = i.trim().parse().map_err(|_| parse_error(idx + 1, format!("bad index `{}`", i.trim())))?;
        if i >= theta {
            return Err(parse_error(idx + 1, format!("index {i} outside 0..{theta}")));
        }
        sets[i] = ground.parse_set(body)?;
    }
    Ok(sets)
}

pub enum PartitionInput {
    Family(FamilyInstance),
    FamilyCb(FamilyCbInstance),
}

impl PartitionInput {
    pub fn theta(&self) -> usize {
        match self {
            PartitionInput::Family(f) => f.members.len(),
            PartitionInput::FamilyCb(f) => f.members.len(),
        }
    }
}

pub fn load_partition(path: &Path, ground: &mut GroundSet) -> Result<PartitionInput> {
    let kf = KeyFile::load(path)?;
    let theta: usize = kf
        .require("theta")?
        .parse()
        .map_err(|_| anyhow!(Error::Input(format!("{}: `theta` must be a number", kf.name))))?;
    let matroids = (0..theta)
        .map(|i| kf.matroid(&format!("M {i}"), ground))
        .collect::<Result<Vec<_>>>()?;
    let universe = matroids.first().map(|m| m.ground().clone()).unwrap_or_default();
    let members: Vec<FamilyMember> = matroids
        .into_iter()
        .enumerate()
        .map(|(i, matroid)| -> Result<FamilyMember> {
            Ok(FamilyMember {
                matroid,
                packing: kf.set(&format!("P {i}"), ground)?,
                covering: kf.set(&format!("R {i}"), ground)?,
            })
        })
        .collect::<Result<_>>()?;
    for (rest, _, line) in kf.entries.iter().map(|(k, v, l)| (k.as_str(), v, *l)) {
        let known = rest == "theta" || ["M ", "P ", "R ", "N "].iter().any(|p| rest.starts_with(p));
        if !known {
            return Err(parse_error(line, format!("unknown key `{rest}`"))).with_context(|| kf.name.clone());
        }
    }

    let index_entries: Vec<_> = kf.with_prefix("N").collect();
    if index_entries.is_empty() {
        return Ok(PartitionInput::Family(FamilyInstance::new(universe, members)));
    }
    let mut per_element: BTreeMap<matroid_cb::Element, MatroidExpr> = BTreeMap::new();
    for (label, value, line) in index_entries {
        let e = ground
            .lookup(label)
            .map_err(|_| parse_error(line, format!("unknown element `{label}`")))
            .with_context(|| kf.name.clone())?;
        let mut indices = GroundSet::new();
        for i in 0..theta {
            indices.intern(&i.to_string());
        }
        let m = load_matroid(value, &kf.dir, &mut indices).with_context(|| format!("{}: `N {label}`", kf.name))?;
        per_element.insert(e, m);
    }
    let index_matroids = universe
        .iter()
        .map(|e| {
            per_element
                .remove(&e)
                .ok_or_else(|| anyhow!(Error::Input(format!("no `N {}:` line; give one per element or none", ground.label(e)))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionInput::FamilyCb(FamilyCbInstance {
        ground: universe,
        members,
        index_matroids,
    }))
}

pub fn load_graph_arc(path: &Path, ground: &mut GroundSet) -> Result<Arc<Graph>> {
    load_graph(path, ground).map(Arc::new)
}
