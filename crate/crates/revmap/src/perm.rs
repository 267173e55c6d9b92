//! Permutations on a fixed finite point set `0..degree`.
//!
//! Points are `u16`; everything downstream materializes full groups, so
//! degrees stay small. Permutations compose left to right: `a.compose(&b)`
//! applies `a` first, then `b`. The derived `Ord` (lexicographic on image
//! vectors) is the fixed total order used for canonical representatives
//! everywhere in this crate.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm { images: (0..degree as u16).collect() }
    }

    /// Builds a permutation from its image vector, validating bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Perm> {
        let len = images.len();
        let mut seen = vec![false; len];
        for &x in &images {
            if (x as usize) >= len || seen[x as usize] {
                return Err(Error::NotABijection { len });
            }
            seen[x as usize] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `0..degree` from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u16>]) -> Result<Perm> {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                if pt as usize >= degree {
                    return Err(Error::PointOutOfRange { point: pt as usize, degree });
                }
                if moved[pt as usize] {
                    return Err(Error::CycleParse(format!("point {pt} appears twice")));
                }
                moved[pt as usize] = true;
                images[pt as usize] = next;
            }
        }
        Perm::from_images(images)
    }

    /// Parses disjoint-cycle notation like `(0 1 2)(3 4)`; `()` is the
    /// identity. When `degree` is `None` the degree is `max point + 1`.
    pub fn parse_cycles(text: &str, degree: Option<usize>) -> Result<Perm> {
        let text = text.trim();
        let mut cycles: Vec<Vec<u16>> = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| Error::CycleParse(format!("expected '(' in '{rest}'")))?;
            if !rest[..open].trim().is_empty() {
                return Err(Error::CycleParse(format!("unexpected text '{}'", &rest[..open])));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::CycleParse(format!("unbalanced '(' in '{text}'")))?;
            let inner = &rest[open + 1..close];
            let mut cycle = Vec::new();
            for tok in inner.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let pt: u16 = tok
                    .parse()
                    .map_err(|_| Error::CycleParse(format!("bad point '{tok}'")))?;
                cycle.push(pt);
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
            rest = rest[close + 1..].trim_start();
        }
        let max = cycles.iter().flatten().copied().max().map_or(0, |m| m as usize + 1);
        let degree = degree.unwrap_or(max).max(max);
        Perm::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u16) -> u16 {
        self.images[x as usize]
    }

    /// `self` first, then `then`.
    pub fn compose(&self, then: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), then.degree());
        Perm { images: self.images.iter().map(|&x| then.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u16;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u16 == y)
    }

    /// Multiplicative order (lcm of cycle lengths).
    pub fn order(&self) -> usize {
        let mut order: usize = 1;
        for cycle in self.cycles_including_fixed() {
            order = num_integer::lcm(order, cycle.len());
        }
        order
    }

    /// Nontrivial cycles, each rotated to start at its minimum, sorted.
    pub fn cycles(&self) -> Vec<Vec<u16>> {
        self.cycles_including_fixed().into_iter().filter(|c| c.len() > 1).collect()
    }

    fn cycles_including_fixed(&self) -> Vec<Vec<u16>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() as u16 {
            if seen[start as usize] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, pt) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{pt}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}
