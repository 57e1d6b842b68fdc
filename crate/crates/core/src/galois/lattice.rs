//! Subgroups of `W_{2g}^k` up to conjugacy, and the maximal ones.
//!
//! Classes are found by cyclic extension: every subgroup `K != 1` equals
//! `<H, x>` for a maximal subgroup `H` of `K`, so extending one representative
//! per class by every element reaches every class. `H` is maximal in `G`
//! exactly when each such extension by `x` outside `H` is all of `G`.
//!
//! Cache format (JSON):
//! `{"version":1,"g":..,"k":..,"group_order":..,"subgroup_classes":..,
//!   "maximal":[{"order":..,"generators":[[..]],"classes_met":["1+1-|2+",..]}]}`
//! where generators are point images and classes are written block by block.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::group::{class_key_string, Perm, W2gGroup, MAX_LATTICE_RANK};
use crate::error::{CoreError, Result};

pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[cfg(test)]
    pub(crate) fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

/// Subgroup generated by `gens` (element indices).
pub(crate) fn closure(group: &W2gGroup, gens: &[usize]) -> Bits {
    let mut bits = Bits::new(group.order());
    let id = group.identity();
    bits.set(id);
    let mut stack = vec![id];
    while let Some(e) = stack.pop() {
        for &s in gens {
            let x = group.mul(e, s);
            if !bits.get(x) {
                bits.set(x);
                stack.push(x);
            }
        }
    }
    bits
}

#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub generators: Vec<usize>,
    pub order: usize,
    /// Number of conjugates.
    pub size: usize,
    pub maximal: bool,
    pub(crate) members: Bits,
}

impl SubgroupClass {
    pub fn contains(&self, x: usize) -> bool {
        self.members.get(x)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.iter().collect()
    }
}

/// All subgroups of `group` up to conjugacy, with maximality flags.
pub fn subgroup_classes(group: &W2gGroup) -> Vec<SubgroupClass> {
    let n = group.order();
    let full = closure(group, &(0..n).collect::<Vec<_>>());
    let mut seen: HashSet<Bits> = HashSet::new();
    let mut reps: Vec<SubgroupClass> = Vec::new();

    let register = |members: Bits, generators: Vec<usize>, seen: &mut HashSet<Bits>, reps: &mut Vec<SubgroupClass>| {
        if seen.contains(&members) {
            return;
        }
        let elems: Vec<usize> = members.iter().collect();
        let mut size = 0;
        for y in 0..n {
            let mut c = Bits::new(n);
            for &x in &elems {
                c.set(group.conj(y, x));
            }
            if seen.insert(c) {
                size += 1;
            }
        }
        reps.push(SubgroupClass { generators, order: elems.len(), size, maximal: false, members });
    };

    register(closure(group, &[]), vec![], &mut seen, &mut reps);
    let mut i = 0;
    while i < reps.len() {
        let h = reps[i].members.clone();
        let hgens = reps[i].generators.clone();
        let helems: Vec<usize> = h.iter().collect();
        let mut maximal = h != full;
        let mut done = h.clone();
        for x in 0..n {
            if done.get(x) {
                continue;
            }
            for &e in &helems {
                done.set(group.mul(e, x));
            }
            let mut gens = hgens.clone();
            gens.push(x);
            let k = closure(group, &gens);
            if k != full {
                maximal = false;
            }
            register(k, gens, &mut seen, &mut reps);
        }
        reps[i].maximal = maximal;
        i += 1;
    }
    reps
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalClass {
    pub order: usize,
    pub generators: Vec<Perm>,
    pub classes_met: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupLattice {
    pub version: u32,
    pub g: usize,
    pub k: usize,
    pub group_order: usize,
    pub subgroup_classes: usize,
    pub maximal: Vec<MaximalClass>,
}

impl SubgroupLattice {
    pub fn build(g: usize, k: usize) -> Result<Self> {
        if g * k > MAX_LATTICE_RANK {
            return Err(CoreError::TooLarge(format!("subgroup lattice of W_{}^{} is not supported", 2 * g, k)));
        }
        let group = W2gGroup::power(g, k)?;
        let classes = subgroup_classes(&group);
        let maximal = classes
            .iter()
            .filter(|c| c.maximal)
            .map(|c| {
                let met: BTreeSet<String> =
                    c.members.iter().map(|x| class_key_string(&group.classes()[group.class_of(x)])).collect();
                MaximalClass {
                    order: c.order,
                    generators: c.generators.iter().map(|&x| group.element(x).clone()).collect(),
                    classes_met: met.into_iter().collect(),
                }
            })
            .collect();
        Ok(Self { version: CACHE_VERSION, g, k, group_order: group.order(), subgroup_classes: classes.len(), maximal })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("lattice serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let lat: Self = serde_json::from_str(s).map_err(|e| CoreError::InvalidInput(format!("lattice cache: {e}")))?;
        if lat.version != CACHE_VERSION {
            return Err(CoreError::InvalidInput(format!("lattice cache version {} unsupported", lat.version)));
        }
        Ok(lat)
    }

    pub fn cache_path(dir: &Path, g: usize, k: usize) -> PathBuf {
        dir.join(format!("w2g_lattice_g{g}_k{k}.json"))
    }

    /// Memoised in-process; if `cache_dir` is given the JSON file there is
    /// read when present and written otherwise.
    pub fn get(g: usize, k: usize, cache_dir: Option<&Path>) -> Result<Arc<Self>> {
        static MEMO: OnceLock<Mutex<HashMap<(usize, usize), Arc<SubgroupLattice>>>> = OnceLock::new();
        let memo = MEMO.get_or_init(Default::default);
        if let Some(l) = memo.lock().unwrap().get(&(g, k)) {
            return Ok(l.clone());
        }
        let lat = match cache_dir {
            Some(dir) => {
                let path = Self::cache_path(dir, g, k);
                match std::fs::read_to_string(&path) {
                    Ok(s) => Self::from_json(&s)?,
                    Err(_) => {
                        let lat = Self::build(g, k)?;
                        std::fs::create_dir_all(dir)?;
                        std::fs::write(&path, lat.to_json())?;
                        lat
                    }
                }
            }
            None => Self::build(g, k)?,
        };
        if lat.g != g || lat.k != k {
            return Err(CoreError::InvalidInput("lattice cache does not match the requested group".into()));
        }
        let lat = Arc::new(lat);
        memo.lock().unwrap().insert((g, k), lat.clone());
        Ok(lat)
    }

    /// True iff every maximal subgroup misses one of `witnessed`.
    pub fn excludes_all_proper(&self, witnessed: &BTreeSet<String>) -> bool {
        self.maximal.iter().all(|m| witnessed.iter().any(|w| m.classes_met.binary_search(w).is_err()))
    }
}
