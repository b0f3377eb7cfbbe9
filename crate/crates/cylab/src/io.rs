use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cylab_core::{Structure, TupleSet, TupleSpace, UStructure, Vocabulary};
use serde::{Deserialize, Serialize};

/// On-disk form of a structure, optionally with a core.
///
/// ```json
/// {"n": 3, "universe": 6, "core": [0,1,2], "relations": {"P": {"arity": 1, "tuples": [[0],[1],[2]]}}}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub n: usize,
    pub universe: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core: Option<Vec<usize>>,
    #[serde(default)]
    pub relations: BTreeMap<String, RelationFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub arity: usize,
    pub tuples: Vec<Vec<usize>>,
}

impl StructureFile {
    pub fn from_structure(a: &Structure, core: Option<&[usize]>) -> Self {
        let relations = a
            .relations()
            .map(|(name, rel)| (name.to_string(), RelationFile { arity: rel.arity(), tuples: rel.iter().collect() }))
            .collect();
        StructureFile { n: a.n(), universe: a.size(), core: core.map(<[usize]>::to_vec), relations }
    }

    pub fn from_u_structure(a: &UStructure) -> Self {
        let core: Vec<usize> = a.core().iter().copied().collect();
        Self::from_structure(a.base(), Some(&core))
    }

    pub fn to_structure(&self) -> Result<Structure> {
        let vocab = Vocabulary::with_symbols(self.n, self.relations.iter().map(|(name, r)| (name.clone(), r.arity)))?;
        let mut a = Structure::new(self.universe, vocab)?;
        for (name, r) in &self.relations {
            let space = TupleSpace::new(self.universe, r.arity);
            let mut rel = TupleSet::empty(space);
            for t in &r.tuples {
                if t.len() != r.arity {
                    bail!("relation {name}: tuple {t:?} does not have arity {}", r.arity);
                }
                rel.insert(t).with_context(|| format!("relation {name}"))?;
            }
            a.set_relation(name, rel)?;
        }
        Ok(a)
    }

    pub fn to_u_structure(&self) -> Result<UStructure> {
        let Some(core) = &self.core else { bail!("the structure has no \"core\" field") };
        if let Some(&x) = core.iter().find(|&&x| x >= self.universe) {
            bail!("core element {x} is outside the universe 0..{}", self.universe);
        }
        Ok(UStructure::new(self.to_structure()?, core.iter().copied())?)
    }
}

pub fn parse_structure(text: &str) -> Result<StructureFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_structure(path: &Path) -> Result<StructureFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_structure(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Canonical JSON: relations by name, tuples in lexicographic order.
pub fn to_json(file: &StructureFile) -> String {
    let mut file = file.clone();
    if let Some(core) = &mut file.core {
        core.sort_unstable();
        core.dedup();
    }
    for r in file.relations.values_mut() {
        r.tuples.sort();
        r.tuples.dedup();
    }
    serde_json::to_string_pretty(&file).expect("plain data")
}

pub fn write_structure(path: &Path, file: &StructureFile) -> Result<()> {
    fs::write(path, to_json(file) + "\n").with_context(|| format!("writing {}", path.display()))
}
