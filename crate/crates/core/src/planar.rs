//! Planarity of lattice diagrams through order dimension two.
//!
//! A finite lattice has a planar diagram iff its order is the intersection of
//! two linear extensions. A pair of such extensions is a [`Realizer`]; it also
//! fixes the left-right order of incomparable elements (`x` is left of `y`
//! when `x` comes first in `ext1` and last in `ext2`).
//!
//! Realizers correspond to orientations of the incomparability graph that
//! keep both `P + T` and `P + T⁻¹` transitive. The search orients one
//! incomparable pair at a time, closes both relations under transitivity and
//! backtracks on contradiction, so it is exact.

use thiserror::Error;

use crate::lattice::{FiniteLattice, Poset};
use crate::Violation;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PlanarError {
    #[error("order dimension exceeds two: no planar diagram")]
    NotPlanar,
    #[error("malformed realizer: {0}")]
    MalformedRealizer(String),
}

/// Two linear extensions whose intersection is the order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Realizer {
    pub ext1: Vec<usize>,
    pub ext2: Vec<usize>,
}

/// Position of `x` relative to `y` under a realizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LrRelation {
    /// `x <_lr y`
    LeftOf,
    /// `y <_lr x`
    RightOf,
    Comparable,
}

/// Left and right boundary chains, listed bottom to top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub left_chain: Vec<usize>,
    pub right_chain: Vec<usize>,
}

impl Realizer {
    pub fn positions(&self) -> (Vec<usize>, Vec<usize>) {
        (inverse(&self.ext1), inverse(&self.ext2))
    }

    /// The mirror image: left and right trade places.
    pub fn reversed(&self) -> Realizer {
        Realizer {
            ext1: self.ext2.clone(),
            ext2: self.ext1.clone(),
        }
    }

    /// Checks that both sequences are permutations, both are linear
    /// extensions, and that `x ≤ y` iff `x` precedes `y` in both.
    pub fn validate(&self, poset: &Poset) -> Result<(), PlanarError> {
        let n = poset.len();
        for (name, ext) in [("ext1", &self.ext1), ("ext2", &self.ext2)] {
            let mut seen = vec![false; n];
            if ext.len() != n {
                return Err(PlanarError::MalformedRealizer(format!("{name} has length {} for {n} elements", ext.len())));
            }
            for &x in ext {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(PlanarError::MalformedRealizer(format!("{name} is not a permutation")));
                }
            }
        }
        let (p1, p2) = self.positions();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let both = p1[x] < p1[y] && p2[x] < p2[y];
                if both != poset.lt(x, y) {
                    return Err(PlanarError::MalformedRealizer(format!(
                        "pair ({x}, {y}): order {} but extensions say {}",
                        poset.lt(x, y),
                        both
                    )));
                }
            }
        }
        Ok(())
    }
}

fn inverse(seq: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; seq.len()];
    for (i, &x) in seq.iter().enumerate() {
        pos[x] = i;
    }
    pos
}

/// Orientation state: `rel[x*n+y] = 1` iff `x` precedes `y` in the first
/// extension, `-1` iff it follows, `0` while undecided. Comparable pairs are
/// fixed by the order from the start.
#[derive(Clone)]
struct Orientation<'a> {
    poset: &'a Poset,
    n: usize,
    rel: Vec<i8>,
    queue: Vec<(usize, usize)>,
}

impl<'a> Orientation<'a> {
    fn new(poset: &'a Poset) -> Self {
        let n = poset.len();
        let mut rel = vec![0i8; n * n];
        for x in 0..n {
            for y in 0..n {
                if poset.lt(x, y) {
                    rel[x * n + y] = 1;
                    rel[y * n + x] = -1;
                }
            }
        }
        Orientation {
            poset,
            n,
            rel,
            queue: Vec::new(),
        }
    }

    fn first(&self, x: usize, y: usize) -> i8 {
        self.rel[x * self.n + y]
    }

    /// `x` before `y` in the second extension, if known.
    fn second(&self, x: usize, y: usize) -> i8 {
        if self.poset.comparable(x, y) {
            self.first(x, y)
        } else {
            -self.first(x, y)
        }
    }

    /// Records `x` before `y` in the first extension.
    fn set_first(&mut self, x: usize, y: usize) -> bool {
        match self.first(x, y) {
            1 => true,
            -1 => false,
            _ => {
                self.rel[x * self.n + y] = 1;
                self.rel[y * self.n + x] = -1;
                self.queue.push((x, y));
                true
            }
        }
    }

    /// Records `x` before `y` in the second extension.
    fn set_second(&mut self, x: usize, y: usize) -> bool {
        if self.poset.comparable(x, y) {
            self.first(x, y) == 1
        } else {
            self.set_first(y, x)
        }
    }

    /// Closes both extensions under transitivity; false on contradiction.
    fn propagate(&mut self) -> bool {
        while let Some((x, y)) = self.queue.pop() {
            // x before y in ext1, y before x in ext2.
            for z in 0..self.n {
                if z == x || z == y {
                    continue;
                }
                if self.first(z, x) == 1 && !self.set_first(z, y) {
                    return false;
                }
                if self.first(y, z) == 1 && !self.set_first(x, z) {
                    return false;
                }
                if self.second(z, y) == 1 && !self.set_second(z, x) {
                    return false;
                }
                if self.second(x, z) == 1 && !self.set_second(y, z) {
                    return false;
                }
            }
        }
        true
    }

    fn undecided(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| (x + 1..self.n).map(move |y| (x, y)))
            .find(|&(x, y)| self.first(x, y) == 0)
    }

    /// Completes the orientation by backtracking; `None` if impossible.
    fn complete(mut self) -> Option<Orientation<'a>> {
        if !self.propagate() {
            return None;
        }
        let Some((x, y)) = self.undecided() else {
            return Some(self);
        };
        let mut forward = self.clone();
        forward.set_first(x, y);
        if let Some(done) = forward.complete() {
            return Some(done);
        }
        self.set_first(y, x);
        self.complete()
    }

    fn first_extension(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = (0..self.n).collect();
        seq.sort_by_key(|&x| (0..self.n).filter(|&y| self.first(y, x) == 1).count());
        seq
    }

    fn second_extension(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = (0..self.n).collect();
        seq.sort_by_key(|&x| (0..self.n).filter(|&y| y != x && self.second(y, x) == 1).count());
        seq
    }

    fn realizer(&self) -> Realizer {
        Realizer {
            ext1: self.first_extension(),
            ext2: self.second_extension(),
        }
    }
}

/// Whether the poset has order dimension at most two.
pub fn is_planar_poset(poset: &Poset) -> bool {
    Orientation::new(poset).complete().is_some()
}

/// Some realizer of the poset, without the lexicographic normalization.
pub fn any_realizer(poset: &Poset) -> Result<Realizer, PlanarError> {
    Orientation::new(poset)
        .complete()
        .map(|o| o.realizer())
        .ok_or(PlanarError::NotPlanar)
}

/// The realizer whose first extension is lexicographically least among all
/// realizers of the poset.
pub fn find_realizer_poset(poset: &Poset) -> Result<Realizer, PlanarError> {
    let n = poset.len();
    let mut state = Orientation::new(poset);
    let mut witness = state.clone().complete().ok_or(PlanarError::NotPlanar)?.first_extension();
    let mut placed = vec![false; n];

    for step in 0..n {
        let next_in_witness = witness[step];
        let candidates: Vec<usize> = (0..n)
            .filter(|&x| !placed[x])
            .filter(|&x| poset.lower_covers(x).iter().all(|&y| placed[y]))
            .filter(|&x| x <= next_in_witness)
            .collect();
        for x in candidates {
            let mut trial = state.clone();
            let consistent = (0..n)
                .filter(|&y| !placed[y] && y != x)
                .all(|y| trial.set_first(x, y));
            if !consistent {
                continue;
            }
            if x == next_in_witness {
                trial.propagate();
                state = trial;
            } else {
                let Some(done) = trial.clone().complete() else {
                    continue;
                };
                witness = done.first_extension();
                trial.propagate();
                state = trial;
            }
            placed[x] = true;
            break;
        }
        debug_assert!(placed[witness[step]], "witness element placed at step {step}");
    }
    let done = state.complete().expect("fully forced orientation stays consistent");
    Ok(done.realizer())
}

pub fn find_realizer(lattice: &FiniteLattice) -> Result<Realizer, PlanarError> {
    find_realizer_poset(lattice.poset())
}

pub fn is_planar(lattice: &FiniteLattice) -> bool {
    is_planar_poset(lattice.poset())
}

/// Classifies the pair `(x, y)` under the left-right order of `realizer`.
pub fn left_right(lattice: &FiniteLattice, realizer: &Realizer, x: usize, y: usize) -> LrRelation {
    let (p1, _) = realizer.positions();
    left_right_with(lattice.poset(), &p1, x, y)
}

fn left_right_with(poset: &Poset, pos1: &[usize], x: usize, y: usize) -> LrRelation {
    if poset.comparable(x, y) {
        LrRelation::Comparable
    } else if pos1[x] < pos1[y] {
        LrRelation::LeftOf
    } else {
        LrRelation::RightOf
    }
}

/// Checks `b < a ∨ c` for every triple with `a <_lr b <_lr c`.
pub fn check_left_right_inequality(lattice: &FiniteLattice, realizer: &Realizer) -> Result<(), Violation> {
    let n = lattice.len();
    let (p1, _) = realizer.positions();
    let poset = lattice.poset();
    let left = |x: usize, y: usize| left_right_with(poset, &p1, x, y) == LrRelation::LeftOf;
    for b in 0..n {
        for a in (0..n).filter(|&a| left(a, b)) {
            for c in (0..n).filter(|&c| left(b, c)) {
                if !lattice.lt(b, lattice.join(a, c)) {
                    return Err(Violation::new("left-right inequality b < a ∨ c fails", vec![a, b, c]));
                }
            }
        }
    }
    Ok(())
}

/// Left and right boundaries by the leftmost (rightmost) upper-cover walk
/// from the bottom.
pub fn boundaries(lattice: &FiniteLattice, realizer: &Realizer) -> Result<Boundary, PlanarError> {
    realizer.validate(lattice.poset())?;
    let (p1, _) = realizer.positions();
    let walk = |leftmost: bool| -> Result<Vec<usize>, PlanarError> {
        let mut chain = vec![lattice.bottom()];
        let mut x = lattice.bottom();
        while x != lattice.top() {
            let covers = lattice.poset().upper_covers(x);
            let next = if leftmost {
                covers.iter().copied().min_by_key(|&y| p1[y])
            } else {
                covers.iter().copied().max_by_key(|&y| p1[y])
            };
            x = next.ok_or_else(|| PlanarError::MalformedRealizer(format!("walk stuck at {x}")))?;
            chain.push(x);
        }
        Ok(chain)
    };
    Ok(Boundary {
        left_chain: walk(true)?,
        right_chain: walk(false)?,
    })
}

/// Elements with nothing strictly to their left (right). Used to cross-check
/// the cover walk in [`boundaries`].
pub fn extreme_elements(lattice: &FiniteLattice, realizer: &Realizer, left: bool) -> Vec<usize> {
    let (p1, _) = realizer.positions();
    let poset = lattice.poset();
    let n = lattice.len();
    let wanted = if left { LrRelation::LeftOf } else { LrRelation::RightOf };
    (0..n)
        .filter(|&x| !(0..n).any(|y| left_right_with(poset, &p1, y, x) == wanted))
        .collect()
}

/// Whether `chain` runs from bottom to top through cover pairs only.
pub fn is_maximal_chain(lattice: &FiniteLattice, chain: &[usize]) -> bool {
    chain.first() == Some(&lattice.bottom())
        && chain.last() == Some(&lattice.top())
        && chain.windows(2).all(|w| lattice.poset().is_cover(w[0], w[1]))
}
