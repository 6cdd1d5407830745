use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// A bijection on `0..n` with constant-time forward and inverse lookup.
///
/// Vertices are 0-based internally; the text formats (cycle notation and
/// two-column tables) are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let forward: Vec<usize> = (0..n).collect();
        Permutation { inverse: forward.clone(), forward }
    }

    /// Builds a permutation from its image sequence `i -> images[i]`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &j) in images.iter().enumerate() {
            if j >= n {
                return Err(Error::invalid(format!("image {j} out of range for n={n}")));
            }
            if inverse[j] != usize::MAX {
                return Err(Error::invalid(format!("image {j} appears twice")));
            }
            inverse[j] = i;
        }
        Ok(Permutation { forward: images, inverse })
    }

    /// Uniform draw from the symmetric group via Fisher-Yates.
    pub fn uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Self::from_images(images).expect("shuffle yields a bijection")
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.forward[i]
    }

    #[inline]
    pub fn apply_inverse(&self, j: usize) -> usize {
        self.inverse[j]
    }

    pub fn images(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> Permutation {
        Permutation { forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        Error::check_sizes(self.len(), other.len())?;
        let images = other.forward.iter().map(|&j| self.forward[j]).collect();
        Permutation::from_images(images)
    }

    /// Cycles in order of their smallest element, each starting at it.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.forward[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.forward[cur];
            }
            out.push(cycle);
        }
        out
    }

    /// One-line 1-based cycle notation including fixed points, e.g. `(1 2)(3)`.
    pub fn to_cycle_notation(&self) -> String {
        let mut s = String::new();
        for cycle in self.cycles() {
            s.push('(');
            for (idx, v) in cycle.iter().enumerate() {
                if idx > 0 {
                    s.push(' ');
                }
                s.push_str(&(v + 1).to_string());
            }
            s.push(')');
        }
        s
    }

    /// Parses 1-based cycle notation; omitted points are fixed.
    pub fn parse_cycle_notation(n: usize, text: &str) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::invalid(format!("expected '(' in cycle notation near {rest:?}")))?;
            let close = open.find(')').ok_or_else(|| Error::invalid("unterminated cycle"))?;
            let mut cycle = Vec::new();
            for tok in open[..close].split_whitespace() {
                let v: usize =
                    tok.parse().map_err(|_| Error::invalid(format!("bad vertex {tok:?} in cycle notation")))?;
                if v == 0 || v > n {
                    return Err(Error::invalid(format!("vertex {v} out of range 1..={n}")));
                }
                if seen[v - 1] {
                    return Err(Error::invalid(format!("vertex {v} repeated in cycle notation")));
                }
                seen[v - 1] = true;
                cycle.push(v - 1);
            }
            for w in 0..cycle.len() {
                images[cycle[w]] = cycle[(w + 1) % cycle.len()];
            }
            rest = open[close + 1..].trim_start();
        }
        Permutation::from_images(images)
    }

    /// Two-column 1-based table, one `i sigma(i)` line per point.
    pub fn to_table(&self) -> String {
        let mut s = String::with_capacity(self.len() * 12);
        for (i, &j) in self.forward.iter().enumerate() {
            s.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
        s
    }
}

/// Number of points on which `a` and `b` agree.
pub fn fix_count(a: &Permutation, b: &Permutation) -> Result<usize> {
    Error::check_sizes(a.len(), b.len())?;
    Ok(a.forward.iter().zip(&b.forward).filter(|(x, y)| x == y).count())
}

/// Overlap of an equivariant estimator with the planted permutation.
///
/// For estimators satisfying `pi_hat(G^sigma, H) = pi_hat(G, H) ∘ sigma^-1`
/// the average over relabelings collapses to a single agreement count.
/// Non-equivariant estimators are not supported.
pub fn overlap_equivariant(pi_hat: &Permutation, pi_star: &Permutation) -> Result<usize> {
    fix_count(pi_hat, pi_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Seed;
    use proptest::prelude::*;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
    }

    #[test]
    fn fix_count_examples() {
        let id = Permutation::identity(5);
        assert_eq!(fix_count(&id, &id).unwrap(), 5);
        let cycle = perm(&[1, 2, 3, 4, 0]);
        assert_eq!(fix_count(&id, &cycle).unwrap(), 0);
        let transposition = perm(&[1, 0, 2, 3, 4]);
        assert_eq!(fix_count(&id, &transposition).unwrap(), 3);
        assert!(fix_count(&id, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn planted_permutation_from_figure_caption_has_one_fixed_point() {
        let pi_star = Permutation::parse_cycle_notation(11, "(6)(1 5 3 11 9 2 8 4 7 10)").unwrap();
        assert_eq!(pi_star.apply(0), 4);
        assert_eq!(pi_star.apply(9), 0);
        assert_eq!(overlap_equivariant(&Permutation::identity(11), &pi_star).unwrap(), 1);
        assert_eq!(overlap_equivariant(&pi_star, &pi_star).unwrap(), 11);
        assert_eq!(pi_star.to_cycle_notation(), "(1 5 3 11 9 2 8 4 7 10)(6)");
    }

    #[test]
    fn cycle_notation_errors() {
        assert!(Permutation::parse_cycle_notation(3, "(1 4)").is_err());
        assert!(Permutation::parse_cycle_notation(3, "(1 2)(2 3)").is_err());
        assert!(Permutation::parse_cycle_notation(3, "1 2").is_err());
        assert!(Permutation::parse_cycle_notation(3, "(1 2").is_err());
        assert!(Permutation::parse_cycle_notation(3, "").unwrap().is_identity());
    }

    #[test]
    fn table_format() {
        assert_eq!(perm(&[1, 0]).to_table(), "1 2\n2 1\n");
    }

    #[test]
    fn uniform_mean_fixed_points_is_one() {
        let mut rng = Seed(11).rng();
        let id = Permutation::identity(50);
        let draws = 10_000;
        let total: usize =
            (0..draws).map(|_| overlap_equivariant(&Permutation::uniform(50, &mut rng), &id).unwrap()).sum();
        let mean = total as f64 / draws as f64;
        // fixed points of a uniform permutation: mean 1, variance 1
        assert!((mean - 1.0).abs() < 3.0 / (draws as f64).sqrt() * 1.5, "{mean}");
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_round_trips(p in arb_perm(12)) {
            let id = Permutation::identity(12);
            prop_assert_eq!(p.compose(&p.inverse()).unwrap(), id.clone());
            prop_assert_eq!(p.inverse().compose(&p).unwrap(), id);
            for i in 0..12 {
                prop_assert_eq!(p.apply_inverse(p.apply(i)), i);
            }
        }

        #[test]
        fn fix_count_symmetry_and_left_invariance(a in arb_perm(10), b in arb_perm(10), t in arb_perm(10)) {
            let f = fix_count(&a, &b).unwrap();
            prop_assert_eq!(f, fix_count(&b, &a).unwrap());
            prop_assert_eq!(f, fix_count(&t.compose(&a).unwrap(), &t.compose(&b).unwrap()).unwrap());
            let rel = a.inverse().compose(&b).unwrap();
            prop_assert_eq!(f, fix_count(&Permutation::identity(10), &rel).unwrap());
        }

        #[test]
        fn cycle_notation_round_trips(p in arb_perm(9)) {
            let text = p.to_cycle_notation();
            prop_assert_eq!(Permutation::parse_cycle_notation(9, &text).unwrap(), p);
        }
    }
}
