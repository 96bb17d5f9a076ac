//! The intersection lattice of a hypersurface arrangement: interned cosets,
//! their codimension-one subcosets and their chambers.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::QMat;
use crate::roots::WeylElement;
use crate::torus::{chambers, component_split, Arrangement, Chamber, Coset, CosetKey, Facet};

/// Default cap on the number of cosets in a lattice.
pub const COSET_CAP: usize = 100_000;

/// A codimension-one subcoset together with its local description.
#[derive(Clone, Debug)]
pub struct FacetEntry {
    pub sub: usize,
    pub facet: Facet,
}

/// All connected components of all intersections of an arrangement.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub rank: usize,
    pub gram: QMat,
    pub arrangement: Arrangement,
    pub cosets: Vec<Coset>,
    /// Facets of each coset, sorted by subcoset id.
    pub facets: Vec<Vec<FacetEntry>>,
    /// Chambers of the central facets of each coset.
    pub chambers: Vec<Vec<Chamber>>,
    index: HashMap<CosetKey, usize>,
}

impl Lattice {
    /// Enumerates the lattice level by level, starting from the full torus
    /// (always id 0).
    pub fn build(arr: &Arrangement, gram: &QMat, cap: usize, exec: Execution) -> Result<Self> {
        let n = arr.rank;
        let mut cosets = vec![Coset::full(n, gram)];
        let mut index = HashMap::new();
        index.insert(cosets[0].key(), 0);
        let mut subs: Vec<Vec<usize>> = vec![vec![]];
        let mut level: Vec<usize> = vec![0];
        while !level.is_empty() {
            let found: Vec<Vec<Coset>> = exec.map(&level, |&a| facet_cosets(&cosets[a], arr, gram));
            let mut next = Vec::new();
            for (&a, list) in level.iter().zip(found) {
                let mut ids = Vec::new();
                for c in list {
                    let id = match index.get(&c.key()) {
                        Some(id) => *id,
                        None => {
                            let id = cosets.len();
                            index.insert(c.key(), id);
                            cosets.push(c);
                            subs.push(vec![]);
                            next.push(id);
                            if cosets.len() > cap {
                                return Err(Error::SizeCap(format!("more than {cap} cosets in the arrangement lattice")));
                            }
                            id
                        }
                    };
                    ids.push(id);
                }
                ids.sort_unstable();
                ids.dedup();
                subs[a] = ids;
            }
            level = next;
        }
        let facets: Vec<Vec<FacetEntry>> = exec.map_range(cosets.len(), |a| {
            subs[a].iter().map(|&s| FacetEntry { sub: s, facet: Facet::new(&cosets[a], &cosets[s]) }).collect()
        });
        let chambers = exec.map_range(cosets.len(), |a| {
            let fs: Vec<&Facet> = facets[a].iter().map(|e| &e.facet).collect();
            chambers(&cosets[a], &fs)
        });
        Ok(Lattice { rank: n, gram: gram.clone(), arrangement: arr.clone(), cosets, facets, chambers, index })
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn coset(&self, id: usize) -> &Coset {
        &self.cosets[id]
    }

    pub fn id_of(&self, c: &Coset) -> Option<usize> {
        self.index.get(&c.key()).copied()
    }

    pub fn id_of_key(&self, k: &CosetKey) -> Option<usize> {
        self.index.get(k).copied()
    }

    /// The facet describing `sub ⊂ a`.
    pub fn facet(&self, a: usize, sub: usize) -> Option<&Facet> {
        self.facets[a].binary_search_by_key(&sub, |e| e.sub).ok().map(|i| &self.facets[a][i].facet)
    }

    /// Id of the image of a coset under a Weyl element.
    pub fn act(&self, w: &WeylElement, id: usize) -> Result<usize> {
        let img = self.cosets[id].act(w, &self.gram);
        self.id_of(&img).ok_or_else(|| Error::OrbitInconsistency(format!("image of {} is not in the lattice", self.cosets[id])))
    }

    /// Ids of the cosets of a given dimension.
    pub fn of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.cosets[i].dim() == d).collect()
    }
}

/// Codimension-one subcosets of `a` cut out by the arrangement.
fn facet_cosets(a: &Coset, arr: &Arrangement, gram: &QMat) -> Vec<Coset> {
    if a.dim() == 0 {
        return vec![];
    }
    let base: Vec<(Vec<i64>, crate::exact::MonoConst)> = a.forms.iter().cloned().zip(a.values.iter().cloned()).collect();
    let mut out: Vec<Coset> = Vec::new();
    for h in &arr.components {
        if a.inside(h) {
            continue;
        }
        let mut eqs = base.clone();
        eqs.push((h.form.clone(), h.value.clone()));
        for c in component_split(&eqs, a.ambient, gram) {
            if c.codim() == a.codim() + 1 && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out.sort_by_key(Coset::key);
    out
}
