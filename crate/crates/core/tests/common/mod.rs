//! Brute-force oracles shared by the integration tests. Everything here works
//! from the cover list alone and never calls into the library's order,
//! meet/join, realizer or canonical-form code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use agplat::enumerate::{enumerate, EnumSpec};
use agplat::kfamily::{construct_family, KFixture};
use agplat::FiniteLattice;
use rand::Rng;

/// Reflexive order matrix from a cover list, by Warshall closure.
pub fn order_matrix(n: usize, covers: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut le = vec![vec![false; n]; n];
    for (x, row) in le.iter_mut().enumerate() {
        row[x] = true;
    }
    for &(a, b) in covers {
        le[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if le[i][k] {
                for j in 0..n {
                    if le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    le
}

/// Independent view of a finite lattice.
#[derive(Clone, Debug)]
pub struct Oracle {
    pub n: usize,
    pub le: Vec<Vec<bool>>,
}

impl Oracle {
    pub fn new(l: &FiniteLattice) -> Self {
        Oracle {
            n: l.len(),
            le: order_matrix(l.len(), l.covers()),
        }
    }

    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Self {
        Oracle {
            n,
            le: order_matrix(n, covers),
        }
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le[x][y] || self.le[y][x]
    }

    /// Greatest lower bound by scanning all lower bounds.
    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.n).filter(|&z| self.le[z][x] && self.le[z][y]).collect();
        lower.iter().copied().find(|&z| lower.iter().all(|&w| self.le[w][z]))
    }

    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.n).filter(|&z| self.le[x][z] && self.le[y][z]).collect();
        upper.iter().copied().find(|&z| upper.iter().all(|&w| self.le[z][w]))
    }

    pub fn is_lattice(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.meet(x, y).is_some() && self.join(x, y).is_some()))
    }

    pub fn bottom(&self) -> usize {
        (0..self.n).find(|&z| (0..self.n).all(|w| self.le[z][w])).expect("bottom")
    }

    pub fn atoms(&self) -> Vec<usize> {
        let b = self.bottom();
        (0..self.n)
            .filter(|&a| a != b && (0..self.n).all(|z| z == a || z == b || !(self.le[z][a])))
            .collect()
    }

    /// Closure of `seed` under pairwise meets and joins, by iteration.
    pub fn generated(&self, seed: &[usize]) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = seed.iter().copied().collect();
        loop {
            let items: Vec<usize> = set.iter().copied().collect();
            let before = set.len();
            for &x in &items {
                for &y in &items {
                    set.insert(self.meet(x, y).expect("lattice"));
                    set.insert(self.join(x, y).expect("lattice"));
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    pub fn atom_generated(&self) -> bool {
        let mut seed = self.atoms();
        seed.push(self.bottom());
        self.generated(&seed).len() == self.n
    }

    /// Every linear extension, by recursive removal of minimal elements.
    pub fn linear_extensions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut used = vec![false; self.n];
        let mut cur = Vec::with_capacity(self.n);
        self.extend(&mut used, &mut cur, &mut out);
        out
    }

    fn extend(&self, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == self.n {
            out.push(cur.clone());
            return;
        }
        for x in 0..self.n {
            if used[x] || (0..self.n).any(|y| !used[y] && y != x && self.le[y][x]) {
                continue;
            }
            used[x] = true;
            cur.push(x);
            self.extend(used, cur, out);
            cur.pop();
            used[x] = false;
        }
    }

    /// Whether the order is the intersection of two linear extensions,
    /// searched over all pairs of extensions.
    pub fn brute_force_dim2(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let exts = self.linear_extensions();
        let set: HashSet<&Vec<usize>> = exts.iter().collect();
        for e1 in &exts {
            // The only possible partner reverses every incomparable pair.
            let mut pos1 = vec![0; self.n];
            for (i, &x) in e1.iter().enumerate() {
                pos1[x] = i;
            }
            let mut e2: Vec<usize> = (0..self.n).collect();
            e2.sort_by(|&x, &y| {
                if x == y {
                    std::cmp::Ordering::Equal
                } else if self.le[x][y] {
                    std::cmp::Ordering::Less
                } else if self.le[y][x] {
                    std::cmp::Ordering::Greater
                } else {
                    pos1[y].cmp(&pos1[x])
                }
            });
            if set.contains(&e2) && self.realizes(e1, &e2) {
                return Some((e1.clone(), e2));
            }
        }
        None
    }

    /// Literal search over every ordered pair; only for tiny posets.
    pub fn pairwise_dim2(&self) -> bool {
        let exts = self.linear_extensions();
        exts.iter().any(|a| exts.iter().any(|b| self.realizes(a, b)))
    }

    pub fn realizes(&self, e1: &[usize], e2: &[usize]) -> bool {
        let (p1, p2) = (positions(e1), positions(e2));
        (0..self.n).all(|x| (0..self.n).all(|y| self.le[x][y] == (p1[x] <= p1[y] && p2[x] <= p2[y])))
    }

    /// Elements with nothing strictly to their left under `ext1`.
    pub fn left_boundary(&self, ext1: &[usize]) -> BTreeSet<usize> {
        let p = positions(ext1);
        (0..self.n)
            .filter(|&x| !(0..self.n).any(|y| !self.comparable(x, y) && p[y] < p[x]))
            .collect()
    }

    pub fn right_boundary(&self, ext1: &[usize]) -> BTreeSet<usize> {
        let p = positions(ext1);
        (0..self.n)
            .filter(|&x| !(0..self.n).any(|y| !self.comparable(x, y) && p[y] > p[x]))
            .collect()
    }
}

pub fn positions(ext: &[usize]) -> Vec<usize> {
    let mut p = vec![0; ext.len()];
    for (i, &x) in ext.iter().enumerate() {
        p[x] = i;
    }
    p
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(k, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Isomorphism by trying every bijection. Keep to nine elements or fewer.
pub fn brute_isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> bool {
    if a.len() != b.len() || a.covers().len() != b.covers().len() {
        return false;
    }
    let n = a.len();
    assert!(n <= 9, "brute-force isomorphism is limited to 9 elements");
    let (oa, ob) = (Oracle::new(a), Oracle::new(b));
    permutations(n)
        .iter()
        .any(|p| (0..n).all(|x| (0..n).all(|y| oa.le[x][y] == ob.le[p[x]][p[y]])))
}

/// The lattice of an intersection-closed family of subsets of `0..universe`,
/// always containing the full set. Random seeds give random lattices,
/// planar or not.
pub fn closure_lattice(universe: usize, seeds: &[u32]) -> FiniteLattice {
    let full = (1u32 << universe) - 1;
    let mut family: BTreeSet<u32> = seeds.iter().map(|s| s & full).collect();
    family.insert(full);
    loop {
        let items: Vec<u32> = family.iter().copied().collect();
        let before = family.len();
        for &x in &items {
            for &y in &items {
                family.insert(x & y);
            }
        }
        if family.len() == before {
            break;
        }
    }
    let sets: Vec<u32> = family.into_iter().collect();
    let n = sets.len();
    let sub = |x: u32, y: u32| x != y && x & y == x;
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if sub(sets[i], sets[j]) && !(0..n).any(|k| sub(sets[i], sets[k]) && sub(sets[k], sets[j])) {
                covers.push((i, j));
            }
        }
    }
    FiniteLattice::from_covers(n, &covers).expect("closure systems are lattices")
}

/// `count` random lattices with 3 to `max_n` elements. Dense seeds keep
/// more of the cube, so a fair share come out non-planar.
pub fn random_lattices(rng: &mut impl Rng, count: usize, max_n: usize) -> Vec<FiniteLattice> {
    let mut out = Vec::new();
    while out.len() < count {
        let universe = rng.gen_range(2..=5);
        let k = rng.gen_range(1..=7);
        let p = rng.gen_range(0.4..0.85);
        let seeds: Vec<u32> = (0..k)
            .map(|_| (0..universe).filter(|_| rng.gen_bool(p)).fold(0, |m, b| m | 1 << b))
            .collect();
        let l = closure_lattice(universe, &seeds);
        if (3..=max_n).contains(&l.len()) {
            out.push(l);
        }
    }
    out
}

/// One lattice in the test corpus.
#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub atoms: usize,
    pub lattice: FiniteLattice,
}

/// Full AGP censuses for 1 to 4 atoms up to 12 elements, then `K_1..K_10`.
pub fn corpus() -> &'static [Entry] {
    static CORPUS: OnceLock<Vec<Entry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut out = Vec::new();
        for atoms in 1..=4 {
            let census = enumerate(&EnumSpec::new(atoms, 12)).expect("census");
            for (i, l) in census.lattices.into_iter().enumerate() {
                out.push(Entry {
                    name: format!("census{atoms}#{i}"),
                    atoms,
                    lattice: l,
                });
            }
        }
        let family = construct_family(&KFixture::builtin(), 10).expect("family");
        for k in family {
            out.push(Entry {
                name: format!("K_{}", k.n),
                atoms: 4,
                lattice: k.lattice,
            });
        }
        out
    })
}
