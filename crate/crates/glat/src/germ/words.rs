//! Words over a germ and their normal forms.
//!
//! A word lists its factors leftmost-first: `[g_k, ..., g_1]` denotes the
//! product `g_k * ... * g_1`, so the last entry is the first Garside factor.
//! The greedy normal form repeatedly merges the largest possible right
//! divisor of a factor into its right neighbor until every junction is
//! right-maximal. Meets are computed through the arrow recursion, joins by
//! peeling common first factors; both reduce to germ-table lookups.

use super::{Germ, GermError, View};
use std::collections::HashMap;

/// A right-normal word: factors leftmost-first, none equal to the identity,
/// every junction right-maximal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalWord(pub Vec<usize>);

impl NormalWord {
    pub fn identity() -> NormalWord {
        NormalWord(Vec::new())
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of normal factors.
    pub fn lambda(&self) -> usize {
        self.0.len()
    }
}

/// Result of `degree_data`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeData {
    pub deg: u32,
    pub lambda: usize,
    pub iota: Vec<u32>,
    pub one_homogeneous: bool,
    pub meet_irreducible: bool,
    pub dual_chain: bool,
}

impl Germ {
    fn check_word(&self, word: &[usize]) -> Result<(), GermError> {
        for &x in word {
            self.check_id(x)?;
        }
        Ok(())
    }

    pub fn word_deg(&self, word: &[usize]) -> u32 {
        word.iter().map(|&x| self.deg(x)).sum()
    }

    pub fn word_names(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&x| self.name(x).to_string()).collect()
    }

    pub fn parse_word(&self, names: &[String]) -> Result<Vec<usize>, GermError> {
        names
            .iter()
            .map(|n| {
                self.id_of(n)
                    .ok_or_else(|| GermError::InvalidInput(format!("unknown element {n:?}")))
            })
            .collect()
    }

    /// Greedy right-normal form of a word.
    pub fn normalize(&self, word: &[usize]) -> Result<NormalWord, GermError> {
        self.check_word(word)?;
        normalize_view(&View::normal(self), word)
    }

    /// Left-normal form: the right-normal form in the opposite germ, read
    /// backwards.
    pub fn left_normalize(&self, word: &[usize]) -> Result<NormalWord, GermError> {
        self.check_word(word)?;
        let mut rev: Vec<usize> = word.to_vec();
        rev.reverse();
        let mut out = normalize_view(&View::opposite(self), &rev)?.0;
        out.reverse();
        Ok(NormalWord(out))
    }

    /// Is the word right-maximal at every junction?
    pub fn is_right_normal(&self, word: &[usize]) -> bool {
        word.iter().all(|&x| x != self.identity())
            && word
                .windows(2)
                .all(|w| rm_holds(&View::normal(self), w[0], w[1]))
    }

    /// Is the word left-maximal at every junction?
    pub fn is_left_normal(&self, word: &[usize]) -> bool {
        word.iter().all(|&x| x != self.identity())
            && word
                .windows(2)
                .all(|w| rm_holds(&View::opposite(self), w[1], w[0]))
    }

    /// Degree, length and index-sequence data of a cone element, with
    /// meet-irreducibility established by counting covers and the
    /// dual-chain property by walking the cover chain at small degree.
    pub fn degree_data(&self, g: &NormalWord) -> Result<DegreeData, GermError> {
        let deg = self.word_deg(&g.0);
        let lambda = g.lambda();
        let iota: Vec<u32> = g.0.iter().rev().map(|&x| self.deg(x)).collect();
        let one_homogeneous = iota.iter().all(|&d| d == 1);
        let covers = self.covers_above(g)?;
        let meet_irreducible = covers.len() <= 1;
        let dual_chain = if deg <= 8 {
            let mut cur = g.clone();
            let mut chain = true;
            while !cur.is_identity() {
                let cs = self.covers_above(&cur)?;
                if cs.len() != 1 {
                    chain = false;
                    break;
                }
                cur = cs.into_iter().next().unwrap();
            }
            chain
        } else {
            meet_irreducible
        };
        Ok(DegreeData { deg, lambda, iota, one_homogeneous, meet_irreducible, dual_chain })
    }

    /// Elements covering `g` in the negative cone: the quotients of `g` by
    /// the degree-one left divisors of its first left-normal factor.
    pub fn covers_above(&self, g: &NormalWord) -> Result<Vec<NormalWord>, GermError> {
        if g.is_identity() {
            return Ok(Vec::new());
        }
        let left = self.left_normalize(&g.0)?;
        let h1 = left.0[0];
        let mut out = Vec::new();
        for x in self.cone_dual_atoms() {
            if let Some(c) = View::normal(self).lquot(h1, x) {
                let mut w = Vec::with_capacity(left.0.len());
                if c != self.identity() {
                    w.push(c);
                }
                w.extend_from_slice(&left.0[1..]);
                out.push(self.normalize(&w)?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Strips a single leftmost letter: returns `x^{-1} g` when `x` left
    /// divides `g`.
    pub fn strip_left_letter(&self, x: usize, g: &NormalWord) -> Result<Option<NormalWord>, GermError> {
        if x == self.identity() {
            return Ok(Some(g.clone()));
        }
        if g.is_identity() {
            return Ok(None);
        }
        let left = self.left_normalize(&g.0)?;
        let h1 = left.0[0];
        match View::normal(self).lquot(h1, x) {
            None => Ok(None),
            Some(c) => {
                let mut w = Vec::with_capacity(left.0.len());
                if c != self.identity() {
                    w.push(c);
                }
                w.extend_from_slice(&left.0[1..]);
                Ok(Some(self.normalize(&w)?))
            }
        }
    }

    /// Strips a word of leftmost letters: returns `d^{-1} g` when every
    /// letter of `d` divides in turn.
    pub fn strip_left(&self, d: &[usize], g: &NormalWord) -> Result<Option<NormalWord>, GermError> {
        let mut cur = g.clone();
        for &x in d {
            match self.strip_left_letter(x, &cur)? {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// Enumerates every right-normal word of degree at most `max_deg`, in a
    /// fixed deterministic order.
    pub fn enumerate_cone(&self, max_deg: u32) -> Vec<NormalWord> {
        let mut all = vec![NormalWord::identity()];
        let mut frontier = vec![NormalWord::identity()];
        let v = View::normal(self);
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                let used = self.word_deg(&w.0);
                for h in 0..self.n() {
                    if h == self.identity() || self.deg(h) + used > max_deg {
                        continue;
                    }
                    // prepending h must keep the leading junction maximal
                    if let Some(&first) = w.0.first() {
                        if !rm_holds(&v, h, first) {
                            continue;
                        }
                    }
                    let mut word = Vec::with_capacity(w.0.len() + 1);
                    word.push(h);
                    word.extend_from_slice(&w.0);
                    next.push(NormalWord(word));
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all.sort();
        all
    }
}

/// The right-maximality condition at a junction `(a, b)` with `a` directly
/// left of `b`: `s^{-1} b^{-1} v a = e`.
fn rm_holds(v: &View, a: usize, b: usize) -> bool {
    v.lat_join(v.delta_over(b), a) == v.identity()
}

fn normalize_view(v: &View, word: &[usize]) -> Result<NormalWord, GermError> {
    let e = v.identity();
    let mut w: Vec<usize> = word.iter().copied().filter(|&x| x != e).collect();
    let mut guard: u64 = 0;
    let max_steps = (w.len() as u64 + 2).pow(3) * (v.g.n() as u64 + 2);
    loop {
        let mut changed = false;
        let mut j = 0;
        while j + 1 < w.len() {
            let (a, b) = (w[j], w[j + 1]);
            if rm_holds(v, a, b) {
                j += 1;
                continue;
            }
            let (a_new, b_new) = local_step(v, a, b)?;
            w[j + 1] = b_new;
            if a_new == e {
                w.remove(j);
            } else {
                w[j] = a_new;
            }
            changed = true;
            j = j.saturating_sub(1);
            guard += 1;
            if guard > max_steps {
                return Err(GermError::Incoherent(
                    "greedy normalization did not terminate".into(),
                ));
            }
        }
        if !changed {
            break;
        }
    }
    Ok(NormalWord(w))
}

/// One local transformation: move the largest possible right divisor of `a`
/// onto `b`. The new right factor is the lattice-least element among the
/// products `h * b` over right divisors `h` of `a`.
fn local_step(v: &View, a: usize, b: usize) -> Result<(usize, usize), GermError> {
    let mut best: Option<(usize, usize)> = None; // (h, h*b)
    for &h in v.rdivs(a) {
        if let Some(hb) = v.prod(h, b) {
            match best {
                None => best = Some((h, hb)),
                Some((_, cur)) => {
                    if v.lat_leq(hb, cur) {
                        best = Some((h, hb));
                    }
                }
            }
        }
    }
    let (h, hb) = best.ok_or_else(|| {
        GermError::Incoherent("no transferable divisor at a non-normal junction".into())
    })?;
    // the chosen product must be the minimum, not merely minimal
    for &h2 in v.rdivs(a) {
        if let Some(h2b) = v.prod(h2, b) {
            if !v.lat_leq(hb, h2b) {
                return Err(GermError::Incoherent(
                    "transfer candidates have no least element".into(),
                ));
            }
        }
    }
    if h == v.identity() {
        return Err(GermError::Incoherent(
            "junction fails right-maximality but admits no transfer".into(),
        ));
    }
    let a_new = v
        .rquot(a, h)
        .ok_or_else(|| GermError::Incoherent("right divisor without quotient".into()))?;
    Ok((a_new, hb))
}

// ---------------------------------------------------------------------------
// Cone operations via the arrow calculus
// ---------------------------------------------------------------------------

/// Memoizing calculator for the cone operations of a germ (or its
/// opposite). Caches are per instance, so concurrent use on separate
/// instances is safe.
pub struct Calc<'g> {
    v: View<'g>,
    memo: HashMap<(usize, Vec<usize>), Vec<usize>>,
}

/// Result of `cone_ops`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeOps {
    pub arrow: NormalWord,
    pub meet: NormalWord,
    pub join: NormalWord,
    pub leq: bool,
}

impl<'g> Calc<'g> {
    pub fn new(g: &'g Germ) -> Calc<'g> {
        Calc { v: View::normal(g), memo: HashMap::new() }
    }

    pub fn new_opposite(g: &'g Germ) -> Calc<'g> {
        Calc { v: View::opposite(g), memo: HashMap::new() }
    }

    fn norm(&self, word: &[usize]) -> Result<Vec<usize>, GermError> {
        Ok(normalize_view(&self.v, word)?.0)
    }

    /// `g -> h = h g^{-1} ^ e`, reduced to germ arrows by the splitting
    /// identities for products on either side.
    pub fn arrow(&mut self, g: &[usize], h: &[usize]) -> Result<Vec<usize>, GermError> {
        let g = self.norm(g)?;
        let h = self.norm(h)?;
        self.arrow_nf(&g, &h)
    }

    fn arrow_nf(&mut self, g: &[usize], h: &[usize]) -> Result<Vec<usize>, GermError> {
        if g.is_empty() {
            return Ok(h.to_vec());
        }
        if h.is_empty() {
            return Ok(Vec::new());
        }
        // (x * rest) -> h = x -> (rest -> h)
        let inner = self.arrow_nf(&g[1..], h)?;
        self.arrow_letter(g[0], &inner)
    }

    fn arrow_letter(&mut self, a: usize, h: &[usize]) -> Result<Vec<usize>, GermError> {
        if h.is_empty() {
            return Ok(Vec::new());
        }
        if h.len() == 1 {
            let c = self.v.arrow_el(a, h[0]);
            return Ok(if c == self.v.identity() { Vec::new() } else { vec![c] });
        }
        let key = (a, h.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        // a -> (y * z) = ((z -> a) -> y) * (a -> z) with y the first factor
        let y = h[0];
        let z = &h[1..];
        let u = self.arrow_nf(z, &[a])?;
        let left = self.arrow_nf(&u, &[y])?;
        debug_assert!(left.len() <= 1, "arrow into the interval is a single factor");
        let right = self.arrow_letter(a, z)?;
        let mut word = left;
        word.extend_from_slice(&right);
        let out = self.norm(&word)?;
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// Meet via the arrow: `g ^ h = (g -> h) * g`.
    pub fn meet(&mut self, g: &[usize], h: &[usize]) -> Result<Vec<usize>, GermError> {
        let ar = self.arrow(g, h)?;
        let mut word = ar;
        word.extend_from_slice(&self.norm(g)?);
        self.norm(&word)
    }

    /// `g <= h` iff `g -> h = e`.
    pub fn leq(&mut self, g: &[usize], h: &[usize]) -> Result<bool, GermError> {
        Ok(self.arrow(g, h)?.is_empty())
    }

    /// Join by peeling first factors: the first normal factor of `g v h` is
    /// the lattice join of the first factors, and the rest follows by
    /// right-invariance.
    pub fn join(&mut self, g: &[usize], h: &[usize]) -> Result<Vec<usize>, GermError> {
        let g = self.norm(g)?;
        let h = self.norm(h)?;
        self.join_nf(&g, &h)
    }

    fn join_nf(&mut self, g: &[usize], h: &[usize]) -> Result<Vec<usize>, GermError> {
        if g.is_empty() || h.is_empty() {
            return Ok(Vec::new());
        }
        let a = *g.last().unwrap();
        let b = *h.last().unwrap();
        let j1 = self.v.lat_join(a, b);
        if j1 == self.v.identity() {
            return Ok(Vec::new());
        }
        let strip = |cal: &mut Self, w: &[usize], last: usize| -> Result<Vec<usize>, GermError> {
            let c = cal.v.rquot(last, j1).ok_or_else(|| {
                GermError::Incoherent("factor not divisible by the junction join".into())
            })?;
            let mut out = w[..w.len() - 1].to_vec();
            if c != cal.v.identity() {
                out.push(c);
            }
            cal.norm(&out)
        };
        let gp = strip(self, &g, a)?;
        let hp = strip(self, &h, b)?;
        let mut res = self.join_nf(&gp, &hp)?;
        res.push(j1);
        self.norm(&res)
    }

    /// Arrow, meet, join and comparability in one call.
    pub fn cone_ops(&mut self, g: &[usize], h: &[usize]) -> Result<ConeOps, GermError> {
        let arrow = self.arrow(g, h)?;
        let meet = self.meet(g, h)?;
        let join = self.join(g, h)?;
        let leq = arrow.is_empty();
        Ok(ConeOps {
            arrow: NormalWord(arrow),
            meet: NormalWord(meet),
            join: NormalWord(join),
            leq,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{free_abelian, klein};
    use super::*;
    use std::collections::BTreeSet;

    /// Brute-force oracle: all factorizations of a word's element, obtained
    /// by closing under local germ-preserving rewrites (merge a pair, split
    /// a factor, exchange within a pair).
    fn all_factorizations(g: &Germ, word: &[usize]) -> BTreeSet<Vec<usize>> {
        let e = g.identity();
        let start: Vec<usize> = word.iter().copied().filter(|&x| x != e).collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(w) = stack.pop() {
            if !seen.insert(w.clone()) {
                continue;
            }
            // merge adjacent pair
            for i in 0..w.len().saturating_sub(1) {
                if let Some(c) = g.prod(w[i], w[i + 1]) {
                    let mut nw = w.clone();
                    nw[i] = c;
                    nw.remove(i + 1);
                    stack.push(nw);
                }
            }
            // split one factor
            for i in 0..w.len() {
                for a in 0..g.n() {
                    for b in 0..g.n() {
                        if a != e && b != e && g.prod(a, b) == Some(w[i]) {
                            let mut nw = w.clone();
                            nw[i] = a;
                            nw.insert(i + 1, b);
                            stack.push(nw);
                        }
                    }
                }
            }
        }
        seen
    }

    fn rm_all(g: &Germ, w: &[usize]) -> bool {
        g.is_right_normal(w)
    }

    #[test]
    fn free_abelian_normal_forms() {
        let g = free_abelian(2);
        let x = g.id_of("x0").unwrap();
        let y = g.id_of("x1").unwrap();
        let d = g.delta();
        // [x, y] -> [D], matching the brute-force oracle
        let nf = g.normalize(&[x, y]).unwrap();
        assert_eq!(nf.0, vec![d]);
        let facs = all_factorizations(&g, &[x, y]);
        let normal: Vec<_> = facs.iter().filter(|w| rm_all(&g, w)).collect();
        assert_eq!(normal.len(), 1);
        assert_eq!(normal[0], &vec![d]);

        assert_eq!(g.normalize(&[x]).unwrap().0, vec![x]);
        assert_eq!(g.left_normalize(&[y, x]).unwrap().0, vec![d]);
    }

    #[test]
    fn klein_normal_forms() {
        let g = klein();
        let x = g.id_of("x").unwrap();
        let y = g.id_of("y").unwrap();
        let d = g.delta();
        assert_eq!(g.normalize(&[x, x]).unwrap().0, vec![d]);
        assert_eq!(g.left_normalize(&[x, x]).unwrap().0, vec![d]);
        // [y, x] is already right-maximal
        assert_eq!(g.normalize(&[y, x]).unwrap().0, vec![y, x]);
        assert!(g.is_right_normal(&[y, x]));
        // oracle agreement on all length-2 words
        for a in [x, y, d] {
            for b in [x, y, d] {
                let nf = g.normalize(&[a, b]).unwrap();
                let facs = all_factorizations(&g, &[a, b]);
                let normal: Vec<_> = facs.iter().filter(|w| rm_all(&g, w)).collect();
                assert_eq!(normal.len(), 1, "unique normal form for [{a},{b}]");
                assert_eq!(normal[0], &nf.0);
            }
        }
    }

    #[test]
    fn normal_form_independent_of_order_small() {
        // all composable words of length <= 3 in the Klein and free-abelian
        // germs have the same normal form along every rewriting path
        for g in [klein(), free_abelian(2)] {
            let ids: Vec<usize> =
                (0..g.n()).filter(|&a| a != g.identity()).collect();
            for &a in &ids {
                for &b in &ids {
                    for &c in &ids {
                        let w = [a, b, c];
                        let nf = g.normalize(&w).unwrap();
                        let facs = all_factorizations(&g, &w);
                        let normal: Vec<_> =
                            facs.iter().filter(|v| rm_all(&g, v)).collect();
                        assert_eq!(normal.len(), 1);
                        assert_eq!(normal[0], &nf.0);
                        assert!(facs.contains(&nf.0));
                    }
                }
            }
        }
    }

    #[test]
    fn cone_ops_examples() {
        let g = free_abelian(2);
        let x = g.id_of("x0").unwrap();
        let y = g.id_of("x1").unwrap();
        let d = g.delta();
        let mut calc = Calc::new(&g);
        // x -> y = y, x ^ y = D in the free abelian germ
        assert_eq!(calc.arrow(&[x], &[y]).unwrap(), vec![y]);
        assert_eq!(calc.meet(&[x], &[y]).unwrap(), vec![d]);
        assert_eq!(calc.join(&[x], &[y]).unwrap(), Vec::<usize>::new());
        // g = h: arrow e, meet = join = g
        let ops = calc.cone_ops(&[x, y], &[y, x]).unwrap();
        assert!(ops.leq);
        assert_eq!(ops.arrow.0, Vec::<usize>::new());
        assert_eq!(ops.meet.0, vec![d]);
        assert_eq!(ops.join.0, vec![d]);
    }

    #[test]
    fn klein_cone_ops() {
        let g = klein();
        let x = g.id_of("x").unwrap();
        let y = g.id_of("y").unwrap();
        let d = g.delta();
        let mut calc = Calc::new(&g);
        // x -> y = x since x ^ y = D = x*x; (x -> y) x = x ^ y
        assert_eq!(calc.arrow(&[x], &[y]).unwrap(), vec![x]);
        assert_eq!(calc.meet(&[x], &[y]).unwrap(), vec![d]);
        assert_eq!(calc.join(&[x], &[y]).unwrap(), Vec::<usize>::new());
        // brute-force check of the meet over elements of degree <= 2:
        // lower bounds of x and y of degree 2 are exactly D
        let facs: Vec<Vec<usize>> = vec![vec![d], vec![y, x], vec![x, y]];
        for f in facs {
            let le_x = calc.leq(&f, &[x]).unwrap();
            let le_y = calc.leq(&f, &[y]).unwrap();
            assert_eq!(le_x && le_y, f == vec![d]);
        }
    }

    #[test]
    fn arrow_identities_on_small_words() {
        // S1-S7 on all pairs/triples of short words in the Klein germ
        let g = klein();
        let mut calc = Calc::new(&g);
        let els: Vec<Vec<usize>> = g.enumerate_cone(3).into_iter().map(|w| w.0).collect();
        for gw in &els {
            for hw in &els {
                // S1a, S1b
                assert!(calc.arrow(gw, gw).unwrap().is_empty());
                assert!(calc.arrow(gw, &[]).unwrap().is_empty());
                assert_eq!(calc.arrow(&[], hw).unwrap(), *hw);
                // S2: (g -> h) g = g ^ h
                let mut w = calc.arrow(gw, hw).unwrap();
                w.extend_from_slice(gw);
                assert_eq!(g.normalize(&w).unwrap().0, calc.meet(gw, hw).unwrap());
                // S7
                let leq = calc.leq(gw, hw).unwrap();
                let meet = calc.meet(gw, hw).unwrap();
                assert_eq!(leq, meet == *gw);
            }
        }
    }

    #[test]
    fn degree_data_examples() {
        let g = klein();
        let x = g.id_of("x").unwrap();
        let y = g.id_of("y").unwrap();
        let e = NormalWord::identity();
        let dd = g.degree_data(&e).unwrap();
        assert_eq!(dd.deg, 0);
        assert_eq!(dd.lambda, 0);
        assert!(dd.meet_irreducible && dd.dual_chain && dd.one_homogeneous);

        // Phi_2(x) = [y, x]: 1-homogeneous, meet-irreducible
        let w = g.normalize(&[y, x]).unwrap();
        let dd = g.degree_data(&w).unwrap();
        assert_eq!(dd.deg, 2);
        assert_eq!(dd.lambda, 2);
        assert_eq!(dd.iota, vec![1, 1]);
        assert!(dd.one_homogeneous && dd.meet_irreducible && dd.dual_chain);

        // Delta in the free abelian germ: iota = (2), not meet-irreducible
        let fa = free_abelian(2);
        let d = NormalWord(vec![fa.delta()]);
        let dd = fa.degree_data(&d).unwrap();
        assert_eq!(dd.iota, vec![2]);
        assert!(!dd.meet_irreducible);
        assert!(!dd.dual_chain);
        assert_eq!(fa.covers_above(&d).unwrap().len(), 2);
    }

    #[test]
    fn enumerate_cone_counts() {
        // free abelian Z^2: elements of degree <= d are the lattice points
        // (a, b) with a + b <= d
        let g = free_abelian(2);
        let els = g.enumerate_cone(4);
        assert_eq!(els.len(), 15);
        // Klein <x,y | x^2 = y^2>: elements of degree k >= 1 are the
        // alternating words plus the central chain; degree <= 4 gives
        // 1 + 2 + 3 + 3 + 3 = wait, count by direct reasoning on normal
        // forms instead: unique elements = distinct normal words
        let k = klein();
        let els = k.enumerate_cone(2);
        // degree 0: e; degree 1: x, y; degree 2: D, yx, xy
        assert_eq!(els.len(), 6);
    }

    #[test]
    fn closed_formula_matches_greedy() {
        // g_i = (g v s^{-i})(g v s^{-(i-1)})^{-1} computed via joins equals
        // the greedy normal factor
        for g in [klein(), free_abelian(2)] {
            let d = g.delta();
            let mut calc = Calc::new(&g);
            for w in g.enumerate_cone(4) {
                let k = w.lambda();
                for i in 1..=k {
                    let si: Vec<usize> = vec![d; i];
                    let sim1: Vec<usize> = vec![d; i - 1];
                    let a = calc.join(&w.0, &sim1).unwrap();
                    let b = calc.join(&w.0, &si).unwrap();
                    let q = calc.arrow(&a, &b).unwrap();
                    assert!(q.len() <= 1);
                    let gi = w.0[k - i];
                    if q.is_empty() {
                        assert_eq!(gi, g.identity());
                    } else {
                        assert_eq!(q[0], gi, "factor {i} of {:?}", g.word_names(&w.0));
                    }
                }
            }
        }
    }
}
