//! The 0-Hecke algebra H_0(n): the block of G(n,n) on complete flags.
//!
//! Orbits in the block are permutation matrices and the block is closed
//! under the star product, so elements are represented as bare permutations
//! with the diagonal idempotent implicit. The generator t_i acts by a
//! sorted transposition; folding reduced words through that action is an
//! independent oracle for the product.

use crate::generic::{deg_leq, star};
use crate::orbit::{Composition, OrbitMatrix};
use crate::{Error, Result};
use std::fmt;

/// A permutation of {1,...,n}, stored as its list of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x < 1 || x > n || seen[x] {
                return Err(Error::InvalidInput(format!(
                    "not a permutation of 1..{n}: {images:?}"
                )));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n).collect(),
        }
    }

    /// The adjacent transposition s_i = (i, i+1).
    pub fn transposition(n: usize, i: usize) -> Result<Self> {
        if i < 1 || i >= n {
            return Err(Error::InvalidInput(format!("s_{i} needs 1 <= i < {n}")));
        }
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, i);
        Ok(Self { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j - 1]
    }

    /// Function composition: (self ∘ other)(j) = self(other(j)).
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            images: (1..=self.n()).map(|j| self.apply(other.apply(j))).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.n()];
        for (j, &x) in self.images.iter().enumerate() {
            images[x - 1] = j + 1;
        }
        Self { images }
    }

    /// The orbit matrix of the pair (sigma f, f) for a complete flag f:
    /// a single 1 in row sigma(j) of column j.
    pub fn to_matrix(&self) -> OrbitMatrix {
        let n = self.n();
        let mut m = OrbitMatrix::zero(n);
        for j in 1..=n {
            m.set(self.apply(j), j, 1);
        }
        m
    }

    pub fn from_matrix(m: &OrbitMatrix) -> Result<Self> {
        let n = m.n();
        let mut images = vec![0usize; n];
        for j in 1..=n {
            let ones: Vec<usize> = (1..=n).filter(|&i| m.get(i, j) == 1).collect();
            let zeros_ok = (1..=n).all(|i| m.get(i, j) <= 1);
            if ones.len() != 1 || !zeros_ok {
                return Err(Error::InvalidInput(format!(
                    "{m} is not a permutation matrix"
                )));
            }
            images[j - 1] = ones[0];
        }
        Self::new(images)
    }

    pub fn len_inversions(&self) -> usize {
        let mut count = 0;
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                if self.images[a] > self.images[b] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Parse one-line ("2,1,3"), word ("s1 s2 s1") or cycle ("(1 2)(3)")
    /// notation; n fixes the ambient size.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "id" {
            return Ok(Self::identity(n));
        }
        if s.starts_with('(') {
            return Self::parse_cycles(s, n);
        }
        if s.starts_with('s') {
            let mut acc = Self::identity(n);
            // word s_{a1} ... s_{ak} applies the rightmost letter first
            for tok in s.split_whitespace().rev() {
                let i: usize = tok
                    .strip_prefix('s')
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("bad word letter {tok:?}")))?;
                acc = Self::transposition(n, i)?.compose(&acc);
            }
            return Ok(acc);
        }
        let images = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad image {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if images.len() != n {
            return Err(Error::InvalidInput(format!(
                "expected {n} images, got {}",
                images.len()
            )));
        }
        Self::new(images)
    }

    fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        for cycle in s.split(')') {
            let cycle = cycle.trim().trim_start_matches('(').trim();
            if cycle.is_empty() {
                continue;
            }
            let entries = cycle
                .split([' ', ','])
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("bad cycle entry {t:?}")))
                })
                .collect::<Result<Vec<usize>>>()?;
            for &x in &entries {
                if x < 1 || x > n {
                    return Err(Error::InvalidInput(format!("cycle entry {x} out of 1..{n}")));
                }
            }
            for w in entries.windows(2) {
                images[w[0] - 1] = w[1];
            }
            if entries.len() > 1 {
                images[entries[entries.len() - 1] - 1] = entries[0];
            }
        }
        Self::new(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

/// The action of t_i: (i,i+1)sigma when its orbit degenerates to sigma's,
/// sigma itself otherwise.
pub fn hecke_act(i: usize, sigma: &Permutation) -> Result<Permutation> {
    let n = sigma.n();
    let swapped = Permutation::transposition(n, i)?.compose(sigma);
    if deg_leq(&swapped.to_matrix(), &sigma.to_matrix()) {
        Ok(swapped)
    } else {
        Ok(sigma.clone())
    }
}

/// The product in H_0(n): the star product of the permutation orbits,
/// which is again a permutation orbit.
pub fn hecke_mult(x: &Permutation, y: &Permutation) -> Result<Permutation> {
    if x.n() != y.n() {
        return Err(Error::TypeMismatch("permutation sizes differ".into()));
    }
    let prod = star(&x.to_matrix(), &y.to_matrix()).ok_or_else(|| {
        Error::InconsistentCounts("complete-flag block product vanished".into())
    })?;
    Permutation::from_matrix(&prod)
}

/// The staged construction of the basis element sigma k_d from the
/// generators: stage i extends the running product by
/// t_i * t_{i+1} * ... * t_{m-1} with m the current position of i's
/// preimage.
pub fn t_sigma(sigma: &Permutation) -> Result<Permutation> {
    let n = sigma.n();
    let inv = sigma.inverse();
    let mut cur = Permutation::identity(n);
    for i in 1..=n {
        let m = cur.apply(inv.apply(i));
        for idx in (i..m).rev() {
            cur = hecke_act(idx, &cur)?;
        }
    }
    Ok(cur)
}

/// The interval idempotent t^{[i,j]} = t^{[i+1,j]} * t_i * ... * t_{j-1},
/// with t^{[i,i]} the identity.
pub fn interval_idempotent(n: usize, i: usize, j: usize) -> Result<Permutation> {
    if i < 1 || j < i || j > n {
        return Err(Error::InvalidInput(format!(
            "bad interval [{i},{j}] in 1..{n}"
        )));
    }
    if i == j {
        return Ok(Permutation::identity(n));
    }
    let mut cur = Permutation::identity(n);
    for idx in (i..j).rev() {
        cur = hecke_act(idx, &cur)?;
    }
    hecke_mult(&interval_idempotent(n, i + 1, j)?, &cur)
}

/// The idempotent t^{nbar}: the product of the interval idempotents of the
/// blocks of the decomposition nbar of n.
pub fn t_nbar(nbar: &Composition) -> Result<Permutation> {
    let n = nbar.r() as usize;
    if nbar.parts().contains(&0) {
        return Err(Error::InvalidInput(
            "decomposition parts must be positive".into(),
        ));
    }
    let mut cur = Permutation::identity(n);
    let mut at = 0usize;
    // rightmost factor first
    let mut intervals = Vec::new();
    for &size in nbar.parts() {
        intervals.push((at + 1, at + size as usize));
        at += size as usize;
    }
    for &(lo, hi) in intervals.iter().rev() {
        cur = hecke_mult(&interval_idempotent(n, lo, hi)?, &cur)?;
    }
    Ok(cur)
}

/// A reduced word for sigma from bubble sort: deterministic, ascending
/// scans. The product of the letters, rightmost applied first, is sigma.
pub fn reduced_word(sigma: &Permutation) -> Vec<usize> {
    let mut images = sigma.images().to_vec();
    let n = images.len();
    let mut word = Vec::new();
    loop {
        let mut swapped = false;
        for j in 0..n.saturating_sub(1) {
            if images[j] > images[j + 1] {
                images.swap(j, j + 1);
                word.push(j + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    word.reverse();
    word
}

/// Independent product oracle: factor x along a reduced word and fold the
/// letters through the t_i action onto y.
pub fn demazure_oracle(x: &Permutation, y: &Permutation) -> Result<Permutation> {
    demazure_fold(&reduced_word(x), y)
}

/// Fold an arbitrary word of generator indices onto y, rightmost first.
pub fn demazure_fold(word: &[usize], y: &Permutation) -> Result<Permutation> {
    let mut acc = y.clone();
    for &i in word.iter().rev() {
        acc = hecke_act(i, &acc)?;
    }
    Ok(acc)
}

/// The relations of the 0-Hecke algebra for the idempotent generators:
/// t_i^2 = t_i, the braid relation, and distant commutation. (For -t_i
/// these are the textbook relations T_i^2 = -T_i etc.)
pub fn verify_hecke_relations(n: usize) -> Result<crate::Report> {
    let mut report = crate::Report::new();
    let t: Vec<Permutation> = (1..n)
        .map(|i| hecke_act(i, &Permutation::identity(n)))
        .collect::<Result<_>>()?;
    for i in 1..n {
        let ti = &t[i - 1];
        let sq = hecke_mult(ti, ti)?;
        report.check(sq == *ti, || format!("t_{i}^2 = {sq}, expected {ti}"));
        for j in 1..n {
            if i + 1 == j {
                let lhs = hecke_mult(ti, &hecke_mult(&t[j - 1], ti)?)?;
                let rhs = hecke_mult(&t[j - 1], &hecke_mult(ti, &t[j - 1])?)?;
                report.check(lhs == rhs, || {
                    format!("braid t_{i} t_{j} t_{i} = {lhs} vs {rhs}")
                });
            } else if j > i + 1 {
                let lhs = hecke_mult(ti, &t[j - 1])?;
                let rhs = hecke_mult(&t[j - 1], ti)?;
                report.check(lhs == rhs, || {
                    format!("commute t_{i} t_{j} = {lhs} vs {rhs}")
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generic::{nested_idempotent, open_orbit};

    fn all_perms(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<usize> = (1..=n).collect();
        permute(&mut images, 0, &mut out);
        out
    }

    fn permute(images: &mut Vec<usize>, k: usize, out: &mut Vec<Permutation>) {
        if k == images.len() {
            out.push(Permutation::new(images.clone()).unwrap());
            return;
        }
        for i in k..images.len() {
            images.swap(k, i);
            permute(images, k + 1, out);
            images.swap(k, i);
        }
    }

    #[test]
    fn parse_forms() {
        let p = Permutation::parse("2,1,3", 3).unwrap();
        assert_eq!(p.images(), &[2, 1, 3]);
        assert_eq!(Permutation::parse("(1 2)(3)", 3).unwrap(), p);
        assert_eq!(Permutation::parse("s1", 3).unwrap(), p);
        let w0 = Permutation::parse("s1 s2 s1", 3).unwrap();
        assert_eq!(w0.images(), &[3, 2, 1]);
        assert_eq!(Permutation::parse("(1 3)", 3).unwrap(), w0);
        assert!(Permutation::parse("2,2,1", 3).is_err());
    }

    #[test]
    fn matrix_roundtrip() {
        for p in all_perms(4) {
            let m = p.to_matrix();
            assert_eq!(Permutation::from_matrix(&m).unwrap(), p);
            assert_eq!(m.row_type().parts(), &[1, 1, 1, 1]);
        }
    }

    #[test]
    fn act_examples() {
        let id = Permutation::identity(2);
        let s1 = Permutation::transposition(2, 1).unwrap();
        assert_eq!(hecke_act(1, &id).unwrap(), s1);
        assert_eq!(hecke_act(1, &s1).unwrap(), s1);
        // idempotent action
        for n in 2..=4 {
            for p in all_perms(n) {
                for i in 1..n {
                    let once = hecke_act(i, &p).unwrap();
                    assert_eq!(hecke_act(i, &once).unwrap(), once);
                }
            }
        }
    }

    #[test]
    fn mult_examples() {
        let s1 = |n| Permutation::transposition(n, 1).unwrap();
        let t1 = hecke_act(1, &Permutation::identity(2)).unwrap();
        assert_eq!(hecke_mult(&t1, &t1).unwrap(), t1);
        assert_eq!(
            hecke_mult(&Permutation::identity(2), &s1(2)).unwrap(),
            s1(2)
        );
        // braid on n = 3
        let id3 = Permutation::identity(3);
        let t = |i| hecke_act(i, &id3).unwrap();
        let lhs = hecke_mult(&t(1), &hecke_mult(&t(2), &t(1)).unwrap()).unwrap();
        let rhs = hecke_mult(&t(2), &hecke_mult(&t(1), &t(2)).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.images(), &[3, 2, 1]);
    }

    #[test]
    fn t_sigma_is_identity_map() {
        for n in 2..=4 {
            for p in all_perms(n) {
                assert_eq!(t_sigma(&p).unwrap(), p, "t_sigma at n={n}");
            }
        }
    }

    #[test]
    fn interval_and_nbar() {
        let n = 3;
        assert_eq!(
            interval_idempotent(n, 2, 2).unwrap(),
            Permutation::identity(n)
        );
        // t^{[1,2]} at n = 2 is t_1, the open orbit
        let t12 = interval_idempotent(2, 1, 2).unwrap();
        assert_eq!(t12, Permutation::parse("2,1", 2).unwrap());

        let ones = Composition::new(vec![1; n]).unwrap();
        assert_eq!(
            t_nbar(&Composition::new(vec![1, 1, 1]).unwrap()).unwrap(),
            Permutation::identity(n)
        );
        // t^{nbar} matches the nested idempotent of the complete-flag type
        for nbar in [vec![1, 1, 1], vec![2, 1], vec![1, 2], vec![3]] {
            let nbar = Composition::new(nbar).unwrap();
            let t = t_nbar(&nbar).unwrap();
            assert_eq!(
                t.to_matrix(),
                nested_idempotent(&ones, &nbar).unwrap(),
                "nbar {nbar}"
            );
        }
        // longest element = open orbit
        let w0 = t_nbar(&Composition::new(vec![n as u32]).unwrap()).unwrap();
        assert_eq!(w0.to_matrix(), open_orbit(&ones, &ones).unwrap());
    }

    #[test]
    fn distinct_idempotent_count() {
        for n in 2..=4usize {
            let mut seen = std::collections::HashSet::new();
            for nbar in crate::orbit::compositions(8, n as u32) {
                // positive parts only
                let parts: Vec<u32> =
                    nbar.parts().iter().copied().filter(|&p| p > 0).collect();
                if parts.is_empty() {
                    continue;
                }
                let nbar = Composition::new(parts).unwrap();
                let t = t_nbar(&nbar).unwrap();
                assert_eq!(hecke_mult(&t, &t).unwrap(), t);
                seen.insert(t);
            }
            assert_eq!(seen.len(), 1 << (n - 1), "idempotent count at n={n}");
        }
    }

    #[test]
    fn demazure_matches_mult() {
        for n in 2..=3 {
            for x in all_perms(n) {
                for y in all_perms(n) {
                    assert_eq!(
                        demazure_oracle(&x, &y).unwrap(),
                        hecke_mult(&x, &y).unwrap(),
                        "{x} * {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn reduced_word_roundtrip() {
        for p in all_perms(4) {
            let word = reduced_word(&p);
            assert_eq!(word.len(), p.len_inversions());
            let mut acc = Permutation::identity(4);
            for &i in word.iter().rev() {
                acc = Permutation::transposition(4, i).unwrap().compose(&acc);
            }
            assert_eq!(acc, p);
        }
    }

    #[test]
    fn word_independence() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        // folding any reduced word of x gives the same result
        let mut rng = StdRng::seed_from_u64(7);
        for trial in 0..100 {
            let n = rng.gen_range(2..=5usize);
            let mut images: Vec<usize> = (1..=n).collect();
            for k in 0..n {
                let other = rng.gen_range(k..n);
                images.swap(k, other);
            }
            let x = Permutation::new(images.clone()).unwrap();
            // random reduced word: repeatedly clear a random descent
            let mut word = Vec::new();
            let mut v = images;
            loop {
                let descents: Vec<usize> =
                    (0..n - 1).filter(|&j| v[j] > v[j + 1]).collect();
                let Some(&j) = descents.get(rng.gen_range(0..descents.len().max(1))) else {
                    break;
                };
                v.swap(j, j + 1);
                word.push(j + 1);
            }
            word.reverse();
            assert_eq!(word.len(), x.len_inversions());
            let y = Permutation::identity(n);
            assert_eq!(
                demazure_fold(&word, &y).unwrap(),
                demazure_oracle(&x, &y).unwrap(),
                "trial {trial}, x = {x}, word {word:?}"
            );
        }
    }

    #[test]
    fn relations_hold() {
        for n in 2..=4 {
            let report = verify_hecke_relations(n).unwrap();
            assert!(report.all_passed(), "n={n}: {report}");
        }
    }

    #[test]
    fn mutated_rule_fails() {
        // applying the swap unconditionally is not idempotent
        let n = 3;
        let bad_act = |i: usize, sigma: &Permutation| {
            Permutation::transposition(n, i).unwrap().compose(sigma)
        };
        let id = Permutation::identity(n);
        let once = bad_act(1, &id);
        let twice = bad_act(1, &once);
        assert_ne!(once, twice);
    }
}
