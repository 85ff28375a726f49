//! Finite posets and lattices over dense element indices `0..n`.

use std::fmt;

use thiserror::Error;

/// Errors raised while turning a cover list into a poset or lattice.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("empty carrier: a lattice needs at least one element")]
    Empty,
    #[error("element index {index} out of range for {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("cover relation is not acyclic (cycle through element {element})")]
    NotAcyclic { element: usize },
    #[error("cover pair ({lower}, {upper}) is implied by transitivity")]
    NotTransitivelyReduced { lower: usize, upper: usize },
    #[error("no unique bottom and top element")]
    NoBoundsFound,
    #[error("elements {x} and {y} have no unique meet or join")]
    NotALattice { x: usize, y: usize },
}

/// A subset of lattice elements stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    len: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn new(len: usize) -> Self {
        ElementSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = ElementSet::new(len);
        for x in 0..len {
            s.insert(x);
        }
        s
    }

    pub fn from_elements(len: usize, elements: impl IntoIterator<Item = usize>) -> Self {
        let mut s = ElementSet::new(len);
        for x in elements {
            s.insert(x);
        }
        s
    }

    /// Size of the universe this set lives in.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, x: usize) -> bool {
        assert!(x < self.len, "element {x} outside universe of {}", self.len);
        let (w, b) = (x / 64, x % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.len {
            self.words[x / 64] &= !(1 << (x % 64));
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.len && self.words[x / 64] & (1 << (x % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &ElementSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite poset given by its Hasse diagram, with the order relation
/// precomputed as up-sets and down-sets.
#[derive(Clone, Debug)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
    up: Vec<ElementSet>,
    down: Vec<ElementSet>,
}

impl Poset {
    /// Builds a poset from generating pairs `(lower, upper)`. Pairs implied by
    /// transitivity are dropped and returned alongside the poset.
    pub fn from_relations(
        n: usize,
        pairs: &[(usize, usize)],
    ) -> Result<(Poset, Vec<(usize, usize)>), LatticeError> {
        let mut succ = vec![Vec::new(); n];
        for &(lo, hi) in pairs {
            for index in [lo, hi] {
                if index >= n {
                    return Err(LatticeError::IndexOutOfRange { index, n });
                }
            }
            if lo == hi {
                return Err(LatticeError::NotAcyclic { element: lo });
            }
            if !succ[lo].contains(&hi) {
                succ[lo].push(hi);
            }
        }

        // Kahn's algorithm; leftovers lie on or above a cycle.
        let mut indeg = vec![0usize; n];
        for s in &succ {
            for &y in s {
                indeg[y] += 1;
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<usize> = (0..n).rev().filter(|&x| indeg[x] == 0).collect();
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    stack.push(y);
                }
            }
        }
        if order.len() < n {
            let element = (0..n).find(|&x| indeg[x] > 0).unwrap_or(0);
            return Err(LatticeError::NotAcyclic { element });
        }

        let mut up: Vec<ElementSet> = (0..n).map(|x| ElementSet::from_elements(n, [x])).collect();
        for &x in order.iter().rev() {
            let mut acc = up[x].clone();
            for &y in &succ[x] {
                acc.union_with(&up[y]);
            }
            up[x] = acc;
        }
        let mut down: Vec<ElementSet> = (0..n).map(|_| ElementSet::new(n)).collect();
        for (x, ux) in up.iter().enumerate() {
            for y in ux.iter() {
                down[y].insert(x);
            }
        }

        let mut covers = Vec::new();
        let mut redundant = Vec::new();
        for (x, sx) in succ.iter().enumerate() {
            for &y in sx {
                let mut between = up[x].intersection(&down[y]);
                between.remove(x);
                between.remove(y);
                if between.is_empty() {
                    covers.push((x, y));
                } else {
                    redundant.push((x, y));
                }
            }
        }
        covers.sort_unstable();
        redundant.sort_unstable();
        Ok((Poset::from_reduced(n, covers, up, down), redundant))
    }

    fn from_reduced(
        n: usize,
        covers: Vec<(usize, usize)>,
        up: Vec<ElementSet>,
        down: Vec<ElementSet>,
    ) -> Poset {
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        for &(x, y) in &covers {
            upper_covers[x].push(y);
            lower_covers[y].push(x);
        }
        Poset {
            n,
            covers,
            upper_covers,
            lower_covers,
            up,
            down,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper_covers[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower_covers[x]
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.upper_covers[x].contains(&y)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Principal filter `↑x`.
    pub fn up_set(&self, x: usize) -> &ElementSet {
        &self.up[x]
    }

    /// Principal ideal `↓x`.
    pub fn down_set(&self, x: usize) -> &ElementSet {
        &self.down[x]
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.down[x].len() == 1).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.up[x].len() == 1).collect()
    }

    /// Length of the longest chain from a minimal element up to `x`.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| self.down[x].len());
        let mut h = vec![0usize; self.n];
        for &x in &order {
            h[x] = self.lower_covers[x].iter().map(|&y| h[y] + 1).max().unwrap_or(0);
        }
        h
    }

    /// The same poset with element `x` renamed to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        let pairs: Vec<(usize, usize)> = self.covers.iter().map(|&(x, y)| (perm[x], perm[y])).collect();
        Poset::from_relations(self.n, &pairs)
            .expect("relabeling preserves validity")
            .0
    }
}

/// A finite lattice with precomputed meet and join tables.
///
/// Immutable after construction. Bottom and top are discovered from the order
/// and need not sit at indices `0` and `n - 1`.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    poset: Poset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    reduced_input: Vec<(usize, usize)>,
}

impl FiniteLattice {
    /// Builds a lattice from cover pairs. Pairs implied by transitivity are
    /// removed; the removed pairs are reported by [`FiniteLattice::reduced_input`].
    pub fn from_covers(n: usize, pairs: &[(usize, usize)]) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let (poset, reduced) = Poset::from_relations(n, pairs)?;
        let mut lattice = FiniteLattice::from_poset(poset)?;
        lattice.reduced_input = reduced;
        Ok(lattice)
    }

    /// Like [`FiniteLattice::from_covers`] but rejects redundant cover pairs.
    pub fn from_covers_strict(n: usize, pairs: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let lattice = FiniteLattice::from_covers(n, pairs)?;
        if let Some(&(lower, upper)) = lattice.reduced_input.first() {
            return Err(LatticeError::NotTransitivelyReduced { lower, upper });
        }
        Ok(lattice)
    }

    pub fn from_poset(poset: Poset) -> Result<Self, LatticeError> {
        let n = poset.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let bottom = (0..n).find(|&x| poset.up[x].len() == n);
        let top = (0..n).find(|&x| poset.down[x].len() == n);
        let (Some(bottom), Some(top)) = (bottom, top) else {
            return Err(LatticeError::NoBoundsFound);
        };

        let down_count: Vec<usize> = (0..n).map(|x| poset.down[x].len()).collect();
        let up_count: Vec<usize> = (0..n).map(|x| poset.up[x].len()).collect();
        let mut meet = vec![0usize; n * n];
        let mut join = vec![0usize; n * n];
        for x in 0..n {
            for y in x..n {
                let lower = poset.down[x].intersection(&poset.down[y]);
                let m = lower
                    .iter()
                    .max_by_key(|&z| down_count[z])
                    .filter(|&z| lower.is_subset(&poset.down[z]))
                    .ok_or(LatticeError::NotALattice { x, y })?;
                let upper = poset.up[x].intersection(&poset.up[y]);
                let j = upper
                    .iter()
                    .max_by_key(|&z| up_count[z])
                    .filter(|&z| upper.is_subset(&poset.up[z]))
                    .ok_or(LatticeError::NotALattice { x, y })?;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
                join[x * n + y] = j;
                join[y * n + x] = j;
            }
        }
        Ok(FiniteLattice {
            poset,
            meet,
            join,
            bottom,
            top,
            reduced_input: Vec::new(),
        })
    }

    /// Single-element lattice.
    pub fn trivial() -> Self {
        FiniteLattice::from_covers(1, &[]).expect("one element is a lattice")
    }

    /// The `n`-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteLattice::from_covers(n, &pairs).expect("chains are lattices")
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.n
    }

    pub fn is_empty(&self) -> bool {
        self.poset.n == 0
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        self.poset.covers()
    }

    /// Input pairs dropped because transitivity already implied them.
    pub fn reduced_input(&self) -> &[(usize, usize)] {
        &self.reduced_input
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.poset.lt(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.poset.comparable(x, y)
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    /// Join of a family; the empty join is the bottom.
    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of a family; the empty meet is the top.
    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// The upper covers of the bottom element, in index order.
    pub fn atoms(&self) -> ElementSet {
        ElementSet::from_elements(self.len(), self.poset.upper_covers(self.bottom).iter().copied())
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    /// Least subset containing `seed` that is closed under meet and join.
    pub fn generated_sublattice(&self, seed: &ElementSet) -> ElementSet {
        let mut closed = seed.clone();
        let mut members: Vec<usize> = seed.to_vec();
        let mut next = 0;
        while next < members.len() {
            let z = members[next];
            next += 1;
            for i in 0..next {
                let w = members[i];
                for v in [self.meet(z, w), self.join(z, w)] {
                    if closed.insert(v) {
                        members.push(v);
                    }
                }
            }
        }
        closed
    }

    /// Whether the atoms generate the lattice. The bottom counts as the
    /// empty join, which only matters for the two-element chain.
    pub fn is_atom_generated(&self) -> bool {
        let mut seed = self.atoms();
        seed.insert(self.bottom);
        self.generated_sublattice(&seed).len() == self.len()
    }

    /// Whether `s` is nonempty and closed under the meet and join of `self`.
    pub fn is_sublattice(&self, s: &ElementSet) -> bool {
        self.sublattice_witness(s).is_none() && !s.is_empty()
    }

    /// First pair of members whose meet or join escapes `s`.
    pub fn sublattice_witness(&self, s: &ElementSet) -> Option<(usize, usize)> {
        let members = s.to_vec();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if !s.contains(self.meet(x, y)) || !s.contains(self.join(x, y)) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Principal ideal `↓x` as an element set.
    pub fn down_set(&self, x: usize) -> &ElementSet {
        self.poset.down_set(x)
    }

    /// Principal filter `↑x` as an element set.
    pub fn up_set(&self, x: usize) -> &ElementSet {
        self.poset.up_set(x)
    }

    /// The same lattice with element `x` renamed to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> FiniteLattice {
        FiniteLattice::from_poset(self.poset.relabel(perm)).expect("relabeling preserves lattices")
    }

    pub fn has_atom_count(&self, n: usize) -> bool {
        self.atoms().len() == n
    }
}
