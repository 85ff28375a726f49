//! Exact canonical labeling of posets by their cover digraph.
//!
//! Colors start from (height, depth, up-degree, down-degree) and are refined
//! to an equitable partition; ties are broken by individualization with
//! backtracking. The lexicographically least relabeled cover list over all
//! leaves is the canonical code. Automorphisms found at equal leaves prune
//! sibling branches in the same orbit.

use std::cmp::Ordering;

use crate::lattice::{FiniteLattice, Poset};

/// An isomorphism-invariant fingerprint: element count plus the cover list
/// under the canonical labeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub covers: Vec<(u32, u32)>,
}

/// Canonical form of a lattice (order isomorphism).
pub fn canonical_form(lattice: &FiniteLattice) -> CanonicalForm {
    canonical_form_poset(lattice.poset())
}

pub fn are_isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> bool {
    a.len() == b.len() && a.covers().len() == b.covers().len() && canonical_form(a) == canonical_form(b)
}

pub fn canonical_form_poset(poset: &Poset) -> CanonicalForm {
    canonical_labeling(poset).0
}

/// Returns the canonical form and a labeling `perm` with `perm[x]` the
/// canonical position of element `x`.
pub fn canonical_labeling(poset: &Poset) -> (CanonicalForm, Vec<usize>) {
    let n = poset.len();
    let up: Vec<Vec<usize>> = (0..n).map(|x| poset.upper_covers(x).to_vec()).collect();
    let down: Vec<Vec<usize>> = (0..n).map(|x| poset.lower_covers(x).to_vec()).collect();
    let heights = poset.heights();
    let depths = depths(poset);
    let invariants: Vec<(usize, usize, usize, usize)> = (0..n)
        .map(|x| (heights[x], depths[x], up[x].len(), down[x].len()))
        .collect();
    let colors = rank(&invariants);

    let mut search = Search {
        n,
        up: &up,
        down: &down,
        covers: poset.covers(),
        best: None,
        automorphisms: Vec::new(),
    };
    search.descend(colors, &mut Vec::new());
    let (code, labeling) = search.best.expect("search visits at least one leaf");
    (CanonicalForm { n, covers: code }, labeling)
}

fn depths(poset: &Poset) -> Vec<usize> {
    let n = poset.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| poset.up_set(x).len());
    let mut d = vec![0usize; n];
    for &x in &order {
        d[x] = poset.upper_covers(x).iter().map(|&y| d[y] + 1).max().unwrap_or(0);
    }
    d
}

/// Replaces keys by their rank among the distinct sorted keys.
fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut distinct: Vec<K> = keys.to_vec();
    distinct.sort();
    distinct.dedup();
    keys.iter()
        .map(|k| distinct.binary_search(k).expect("key present") as u32)
        .collect()
}

fn color_count(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&m| m as usize + 1)
}

struct Search<'a> {
    n: usize,
    up: &'a [Vec<usize>],
    down: &'a [Vec<usize>],
    covers: &'a [(usize, usize)],
    best: Option<(Vec<(u32, u32)>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        loop {
            let before = color_count(&colors);
            let signatures: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..self.n)
                .map(|x| {
                    let mut u: Vec<u32> = self.up[x].iter().map(|&y| colors[y]).collect();
                    let mut d: Vec<u32> = self.down[x].iter().map(|&y| colors[y]).collect();
                    u.sort_unstable();
                    d.sort_unstable();
                    (colors[x], u, d)
                })
                .collect();
            colors = rank(&signatures);
            if color_count(&colors) == before {
                return colors;
            }
        }
    }

    fn descend(&mut self, colors: Vec<u32>, path: &mut Vec<usize>) {
        let colors = self.refine(colors);
        if color_count(&colors) == self.n {
            self.leaf(colors);
            return;
        }
        // First non-singleton cell in color order.
        let mut sizes = vec![0usize; self.n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1).expect("partition not discrete") as u32;
        let cell: Vec<usize> = (0..self.n).filter(|&x| colors[x] == target).collect();

        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.same_orbit(path, &explored, v) {
                continue;
            }
            let individualized: Vec<u32> = (0..self.n)
                .map(|u| 2 * colors[u] + u32::from(u != v))
                .collect();
            path.push(v);
            self.descend(rank(&individualized), path);
            path.pop();
            explored.push(v);
        }
    }

    /// Whether `v` shares an orbit with an explored sibling under the known
    /// automorphisms that fix `path` pointwise.
    fn same_orbit(&self, path: &[usize], explored: &[usize], v: usize) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut any = false;
        for g in &self.automorphisms {
            if path.iter().all(|&p| g[p] == p) {
                any = true;
                for x in 0..self.n {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, g[x]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == rv)
    }

    fn leaf(&mut self, colors: Vec<u32>) {
        let labeling: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let mut code: Vec<(u32, u32)> = self
            .covers
            .iter()
            .map(|&(x, y)| (labeling[x] as u32, labeling[y] as u32))
            .collect();
        code.sort_unstable();
        match &self.best {
            None => self.best = Some((code, labeling)),
            Some((best_code, best_labeling)) => match code.cmp(best_code) {
                Ordering::Less => self.best = Some((code, labeling)),
                Ordering::Equal => {
                    let mut inverse = vec![0usize; self.n];
                    for (x, &p) in best_labeling.iter().enumerate() {
                        inverse[p] = x;
                    }
                    let g: Vec<usize> = labeling.iter().map(|&p| inverse[p]).collect();
                    if g.iter().enumerate().any(|(x, &y)| x != y) {
                        self.automorphisms.push(g);
                    }
                }
                Ordering::Greater => {}
            },
        }
    }
}
