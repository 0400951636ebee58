//! Permutations of `{0, …, degree−1}`.
//!
//! Products compose left to right: `(p * q)(x) = q(p(x))`, i.e. `p` acts
//! first. Every conjugate, commutator and coset in the crate follows this
//! convention.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::NotBijective("empty image list".into()));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::PointOutOfRange { point: x, degree: n });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotBijective(format!("point {x} hit twice")));
            }
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        }
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if std::mem::replace(&mut touched[x], true) {
                    return Err(Error::NotBijective(format!("point {x} repeated in cycles")));
                }
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Left-to-right product; panics on a degree mismatch.
    pub fn then(&self, q: &Permutation) -> Permutation {
        assert_eq!(self.degree(), q.degree(), "degree mismatch in product");
        Permutation {
            images: self.images.iter().map(|&x| q.images[x as usize]).collect(),
        }
    }

    pub fn checked_mul(&self, q: &Permutation) -> Result<Permutation> {
        if self.degree() != q.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: q.degree(),
            });
        }
        Ok(self.then(q))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv.into() }
    }

    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
        a.inverse().then(&b.inverse()).then(a).then(b)
    }

    /// Disjoint cycles of length at least two, each starting at its least
    /// point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Sorted cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat_n(1, self.degree() - moved));
        lens.sort_unstable();
        lens
    }

    /// Least `k ≥ 1` with `self^k` the identity.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn moved_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.image(x) == x
    }

    /// Comma-separated image list, e.g. `1,0,2`.
    pub fn to_image_list(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        parts.join(",")
    }

    /// Parses either cycle notation (`(0 1)(2 3)`, `()`) or an image list
    /// (`1,0,3,2`). Cycle notation needs the degree; an image list carries
    /// its own and must agree with `degree` when one is given.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('(') {
            let degree = degree.ok_or_else(|| Error::parse(1, "cycle notation needs a degree"))?;
            Self::parse_cycles(t, degree)
        } else {
            let p = Self::parse_image_list(t)?;
            if let Some(d) = degree {
                if d != p.degree() {
                    return Err(Error::DegreeMismatch {
                        expected: d,
                        found: p.degree(),
                    });
                }
            }
            Ok(p)
        }
    }

    fn parse_image_list(t: &str) -> Result<Self> {
        let images = t
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(1, format!("bad image `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(images)
    }

    fn parse_cycles(t: &str, degree: usize) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = t;
        loop {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::parse(1, format!("expected `(` at `{rest}`")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::parse(1, "unclosed cycle"))?;
            let points = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::parse(1, format!("bad point `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = &body[close + 1..];
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(degree, &refs)
    }
}

impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn product_is_left_to_right() {
        assert_eq!(&p(&[1, 0, 2]) * &p(&[0, 2, 1]), p(&[2, 0, 1]));
    }

    #[test]
    fn inverse_and_order() {
        let c = Permutation::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert!((&c.inverse() * &c).is_identity());
        assert_eq!(c.order(), 6);
        assert_eq!(Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap().order(), 3);
        assert_eq!(c.pow(6), Permutation::identity(5));
        assert_eq!(c.pow(2), &c * &c);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(matches!(
            Permutation::from_images(vec![0, 0]),
            Err(Error::NotBijective(_))
        ));
        assert!(matches!(
            Permutation::from_images(vec![0, 2]),
            Err(Error::PointOutOfRange { .. })
        ));
        assert!(Permutation::from_cycles(4, &[&[0, 1], &[1, 2]]).is_err());
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert!(matches!(a.checked_mul(&b), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn text_forms() {
        let c = Permutation::from_cycles(6, &[&[3, 1], &[2, 5, 4]]).unwrap();
        assert_eq!(c.to_string(), "(1 3)(2 5 4)");
        assert_eq!(Permutation::parse("(1 3)(2 5 4)", Some(6)).unwrap(), c);
        assert_eq!(Permutation::parse(" (1 3) (2,5,4) ", Some(6)).unwrap(), c);
        assert_eq!(Permutation::parse("()", Some(3)).unwrap(), Permutation::identity(3));
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(Permutation::parse("1,0,2", None).unwrap(), p(&[1, 0, 2]));
        assert_eq!(p(&[1, 0, 2]).to_image_list(), "1,0,2");
        assert!(Permutation::parse("(0 1", Some(3)).is_err());
        assert!(Permutation::parse("(0 7)", Some(3)).is_err());
        assert!(Permutation::parse("(0 1)", None).is_err());
    }

    #[test]
    fn cycle_type_counts_fixed_points() {
        let c = Permutation::from_cycles(6, &[&[0, 1], &[2, 3, 4]]).unwrap();
        assert_eq!(c.cycle_type(), vec![1, 2, 3]);
    }
}
