use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ClassFunction, FiniteGroup, GroupTable};
use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, CycloJson};

/// On-disk group description. Exactly one of `cayley` / `perm_gens` is given.
/// Character rows list values per class; with `class_reps` the columns follow
/// those representatives, otherwise the internal class order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub cayley: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub perm_gens: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub char_table: Option<CharTableJson>,
    #[serde(default)]
    pub class_reps: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharTableJson {
    pub conductor: u32,
    pub rows: Vec<Vec<CycloJson>>,
    #[serde(default)]
    pub names: Vec<String>,
}

impl GroupFile {
    pub fn build(&self) -> Result<FiniteGroup> {
        let table = match (&self.cayley, &self.perm_gens) {
            (Some(rows), None) => GroupTable::from_cayley(&self.name, rows)?,
            (None, Some(gens)) => {
                let degree = gens.first().map(|g| g.len()).unwrap_or(0);
                GroupTable::from_perm_gens(&self.name, degree, gens)?.0
            }
            _ => return Err(Error::InvalidGroup("give exactly one of cayley or perm_gens".into())),
        };
        if let Some(o) = self.order {
            if o != table.order {
                return Err(Error::InvalidGroup(format!("declared order {o} but table has {}", table.order)));
            }
        }
        let g = FiniteGroup::from_table(table);
        let Some(ct) = &self.char_table else { return Ok(g) };
        if ct.conductor == 0 || g.conductor % ct.conductor != 0 && ct.conductor % g.conductor != 0 {
            return Err(Error::InvalidGroup(format!("character conductor {} incompatible with exponent {}", ct.conductor, g.conductor)));
        }
        let perm: Vec<usize> = match &self.class_reps {
            Some(reps) => {
                if reps.len() != g.class_count() {
                    return Err(Error::InvalidGroup(format!("{} class reps for {} classes", reps.len(), g.class_count())));
                }
                let cols: Vec<usize> = reps.iter().map(|&r| g.class_of(r.min(g.order() as u32 - 1))).collect();
                let mut inv = vec![usize::MAX; g.class_count()];
                for (col, &c) in cols.iter().enumerate() {
                    if inv[c] != usize::MAX {
                        return Err(Error::InvalidGroup("class reps repeat a class".into()));
                    }
                    inv[c] = col;
                }
                inv
            }
            None => (0..g.class_count()).collect(),
        };
        let mut rows = Vec::new();
        for r in &ct.rows {
            if r.len() != g.class_count() {
                return Err(Error::InvalidGroup(format!("character row of length {}", r.len())));
            }
            let vals = r.iter().map(|c| c.to_cyclo()).collect::<Result<Vec<Cyclo>>>()?;
            rows.push(ClassFunction::new(perm.iter().map(|&col| normalize(&vals[col], g.conductor)).collect()));
        }
        g.with_characters(rows, ct.names.clone())
    }
}

fn normalize(v: &Cyclo, n: u32) -> Cyclo {
    if n % v.conductor() == 0 {
        v.lift(n)
    } else {
        v.clone()
    }
}

/// A builtin name (`trivial`, `cyclicM`, `sym3`) or a path to a JSON group file.
pub fn load_group(spec: &str) -> Result<FiniteGroup> {
    if let Some(g) = FiniteGroup::builtin(spec) {
        return Ok(g);
    }
    let p = Path::new(spec);
    if !p.exists() {
        return Err(Error::InvalidGroup(format!("unknown group {spec:?} (not a builtin or a file)")));
    }
    let text = std::fs::read_to_string(p)?;
    let file: GroupFile = serde_json::from_str(&text)?;
    file.build()
}
