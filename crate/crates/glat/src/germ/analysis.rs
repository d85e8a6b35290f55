//! Structural analysis of the strong order interval: center, the U/L/M
//! counts, the duality operator D, frozen powers, semibeam decomposition
//! with its rigidity permutations, and the distributive scaffold.

use super::words::{Calc, NormalWord};
use super::{Germ, GermError};
use crate::finlat;
use std::collections::BTreeSet;

/// Everything the interval lattice reveals about the germ.
#[derive(Debug, Clone)]
pub struct IntervalAnalysis {
    /// Sorted ids of the central elements of the interval.
    pub center: Vec<usize>,
    /// Dual atoms of the center: one per directly irreducible factor.
    pub center_dual_atoms: Vec<usize>,
    /// `(U, L, M)` per interval element.
    pub ulm: Vec<(usize, usize, usize)>,
    /// The duality on the center: `a -> complement of (s^{-1} a^{-1})`.
    pub d_map: Vec<usize>,
    /// All duality and counting checks passed.
    pub duality_ok: bool,
    pub violations: Vec<String>,
}

impl Germ {
    /// Center, U/L/M counts and the duality operator of the interval, with
    /// every structural law checked exhaustively.
    pub fn interval_analysis(&self) -> IntervalAnalysis {
        let lat = self.lattice();
        let e = self.identity();
        let center = finlat::center(lat);
        let zs = finlat::center_dual_atoms(lat);
        let k = zs.len();
        let ulm: Vec<(usize, usize, usize)> = (0..self.n())
            .map(|a| {
                let u = zs.iter().filter(|&&z| lat.join(a, z) == e).count();
                let l = zs.iter().filter(|&&z| lat.join(a, z) == z).count();
                (u, l, k - u - l)
            })
            .collect();

        let mut violations = Vec::new();
        let in_center = |x: usize| center.binary_search(&x).is_ok();

        // the center is closed under the arrow operation
        for &a in &center {
            for &b in &center {
                if !in_center(self.arrow_el(a, b)) {
                    violations.push(format!(
                        "center not closed under arrow at ({}, {})",
                        self.name(a),
                        self.name(b)
                    ));
                }
            }
        }
        // M(a) = 0 exactly for central elements
        for a in 0..self.n() {
            if (ulm[a].2 == 0) != in_center(a) {
                violations.push(format!("M({}) = 0 mismatch with centrality", self.name(a)));
            }
        }
        // U(s^{-1} a^{-1}) = L(a)
        for a in 0..self.n() {
            if ulm[self.delta_over(a)].0 != ulm[a].1 {
                violations.push(format!("U(s^-1 a^-1) != L(a) at {}", self.name(a)));
            }
        }

        // duality: complement of delta_over(a) inside the center
        let mut d_map = vec![usize::MAX; self.n()];
        for &a in &center {
            let c = self.delta_over(a);
            if !in_center(c) {
                violations.push(format!("s^-1 a^-1 leaves the center at {}", self.name(a)));
                continue;
            }
            let compl: Vec<usize> = center
                .iter()
                .copied()
                .filter(|&z| lat.meet(z, c) == lat.bottom() && lat.join(z, c) == lat.top())
                .collect();
            if compl.len() != 1 {
                violations.push(format!(
                    "{} complements for {} in the center",
                    compl.len(),
                    self.name(c)
                ));
                continue;
            }
            d_map[a] = compl[0];
        }

        // D restricts to a bijection of the center dual atoms preserving
        // degree and U
        let mut image = BTreeSet::new();
        for &z in &zs {
            let dz = d_map[z];
            if dz == usize::MAX || !zs.contains(&dz) {
                violations.push(format!("D({}) is not a center dual atom", self.name(z)));
                continue;
            }
            image.insert(dz);
            if self.deg(dz) != self.deg(z) {
                violations.push(format!("D does not preserve deg at {}", self.name(z)));
            }
            if ulm[dz].0 != ulm[z].0 {
                violations.push(format!("D does not preserve U at {}", self.name(z)));
            }
        }
        if image.len() != zs.len() {
            violations.push("D is not a bijection of the center dual atoms".into());
        }

        // the duality axiom on distinct dual atoms:
        // D(x -> y) = (y -> x) -> D(y)
        for &x in &zs {
            for &y in &zs {
                if x == y {
                    continue;
                }
                let xy = self.arrow_el(x, y);
                let yx = self.arrow_el(y, x);
                if d_map.get(xy).copied().unwrap_or(usize::MAX) == usize::MAX
                    || d_map[y] == usize::MAX
                {
                    violations.push("duality axiom references a non-central element".into());
                    continue;
                }
                if d_map[xy] != self.arrow_el(yx, d_map[y]) {
                    violations.push(format!(
                        "duality axiom fails at ({}, {})",
                        self.name(x),
                        self.name(y)
                    ));
                }
            }
        }

        IntervalAnalysis {
            center,
            center_dual_atoms: zs,
            ulm,
            d_map,
            duality_ok: violations.is_empty(),
            violations,
        }
    }

    /// The n-th frozen power of a center dual atom:
    /// `Phi_n(z) = D^{n-1}(z) ... D(z) z`, returned as a word that is
    /// right-normal as written.
    pub fn frozen_power(
        &self,
        analysis: &IntervalAnalysis,
        z: usize,
        n: u32,
    ) -> Result<NormalWord, GermError> {
        if !analysis.center_dual_atoms.contains(&z) {
            return Err(GermError::NotCentralDualAtom);
        }
        assert!(n >= 1);
        let mut powers = vec![z];
        for _ in 1..n {
            powers.push(analysis.d_map[*powers.last().unwrap()]);
        }
        powers.reverse();
        let w = NormalWord(powers);
        if !self.is_right_normal(&w.0) {
            return Err(GermError::Incoherent(
                "frozen word is not right-normal as written".into(),
            ));
        }
        assert_eq!(self.word_deg(&w.0), n * self.deg(z));
        // socle recursion: dropping the first left-normal factor of Phi_n
        // yields Phi_{n-1}
        if n >= 2 {
            let left = self.left_normalize(&w.0)?;
            let prev = self.frozen_power(analysis, z, n - 1)?;
            let soc = self.normalize(&left.0[1..])?;
            assert_eq!(soc, prev, "Soc(Phi_n) = Phi_(n-1)");
        }
        Ok(w)
    }

    /// Semibeam components of a cone element: `c_i = g v Phi_n(z_i)` for
    /// `n = max(lambda(g), 1)`. The meet of the components reproduces `g`.
    pub fn semibeam_decompose(
        &self,
        analysis: &IntervalAnalysis,
        g: &NormalWord,
    ) -> Result<Vec<NormalWord>, GermError> {
        let zs = &analysis.center_dual_atoms;
        if zs.is_empty() {
            return Err(GermError::Incoherent("trivial germ has no semibeams".into()));
        }
        let n = (g.lambda() as u32).max(1);
        let mut calc = Calc::new(self);
        let mut components = Vec::with_capacity(zs.len());
        for &z in zs {
            let phi = self.frozen_power(analysis, z, n)?;
            components.push(NormalWord(calc.join(&g.0, &phi.0)?));
        }
        let mut meet: Vec<usize> = Vec::new();
        for (i, c) in components.iter().enumerate() {
            if i == 0 {
                meet = c.0.clone();
            } else {
                meet = calc.meet(&meet, &c.0)?;
            }
        }
        if meet != g.0 {
            return Err(GermError::Incoherent(
                "semibeam components do not meet back to the element".into(),
            ));
        }
        Ok(components)
    }

    /// The rigidity permutation of right multiplication by `h`: slot `i`
    /// maps into slot `pi(i)`. Extracted by comparing the semibeam
    /// components of `z_i * h` and `Phi_2(z_i) * h` against those of `h`.
    pub fn rigidity_permutation(
        &self,
        analysis: &IntervalAnalysis,
        h: &NormalWord,
    ) -> Result<Vec<usize>, GermError> {
        let zs = &analysis.center_dual_atoms;
        let k = zs.len();
        let mut calc = Calc::new(self);
        let mut pi = vec![usize::MAX; k];
        for (i, &z) in zs.iter().enumerate() {
            let mut moved: Option<usize> = None;
            for m in 1..=2u32 {
                let phi = self.frozen_power(analysis, z, m)?;
                let mut word = phi.0.clone();
                word.extend_from_slice(&h.0);
                let xh = self.normalize(&word)?;
                let level = (xh.lambda() as u32).max(h.lambda() as u32).max(1);
                let comp_xh = self.components_at(analysis, &mut calc, &xh, level)?;
                let comp_h = self.components_at(analysis, &mut calc, h, level)?;
                let diff: Vec<usize> = (0..k)
                    .filter(|&j| comp_xh[j] != comp_h[j])
                    .collect();
                if diff.len() != 1 {
                    return Err(GermError::Incoherent(format!(
                        "right multiplication moves {} slots for generator {}",
                        diff.len(),
                        self.name(z)
                    )));
                }
                match moved {
                    None => moved = Some(diff[0]),
                    Some(prev) if prev == diff[0] => {}
                    Some(_) => {
                        return Err(GermError::Incoherent(
                            "frozen generators of one semibeam move to different slots".into(),
                        ))
                    }
                }
            }
            pi[i] = moved.unwrap();
        }
        let mut seen = vec![false; k];
        for &p in &pi {
            if p == usize::MAX || seen[p] {
                return Err(GermError::Incoherent("slot map is not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(pi)
    }

    fn components_at(
        &self,
        analysis: &IntervalAnalysis,
        calc: &mut Calc,
        g: &NormalWord,
        level: u32,
    ) -> Result<Vec<Vec<usize>>, GermError> {
        analysis
            .center_dual_atoms
            .iter()
            .map(|&z| {
                let phi = self.frozen_power(analysis, z, level)?;
                calc.join(&g.0, &phi.0)
            })
            .collect()
    }

    /// Conjugation by the Garside element: the unique `a''` with
    /// `delta * a'' = a * delta`, found by matching normal forms. Checked to
    /// be an automorphism of the interval lattice.
    pub fn conjugation_by_delta(&self) -> Result<Vec<usize>, GermError> {
        let d = self.delta();
        let mut conj = vec![usize::MAX; self.n()];
        for a in 0..self.n() {
            let lhs = self.normalize(&[a, d])?;
            let mut found = None;
            for b in 0..self.n() {
                if self.deg(b) != self.deg(a) {
                    continue;
                }
                if self.normalize(&[d, b])? == lhs {
                    if found.is_some() {
                        return Err(GermError::Incoherent(
                            "conjugation image is not unique".into(),
                        ));
                    }
                    found = Some(b);
                }
            }
            conj[a] = found.ok_or_else(|| {
                GermError::Incoherent(format!("no conjugate for {}", self.name(a)))
            })?;
        }
        // bijectivity and lattice automorphism
        let mut seen = vec![false; self.n()];
        for &b in &conj {
            if seen[b] {
                return Err(GermError::Incoherent("conjugation is not bijective".into()));
            }
            seen[b] = true;
        }
        let lat = self.lattice();
        for a in 0..self.n() {
            for b in 0..self.n() {
                if conj[lat.meet(a, b)] != lat.meet(conj[a], conj[b])
                    || conj[lat.join(a, b)] != lat.join(conj[a], conj[b])
                {
                    return Err(GermError::Incoherent(
                        "conjugation is not a lattice automorphism".into(),
                    ));
                }
            }
        }
        Ok(conj)
    }

    /// Closes the center dual atoms under products, meets and joins up to
    /// the degree bound, and reports whether the interior of the closure is
    /// distributive.
    pub fn scaffold(&self, depth_bound: u32) -> Result<ScaffoldReport, GermError> {
        let analysis = self.interval_analysis();
        let mut calc = Calc::new(self);
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        set.insert(Vec::new());
        for &z in &analysis.center_dual_atoms {
            set.insert(vec![z]);
        }
        loop {
            let snapshot: Vec<Vec<usize>> = set.iter().cloned().collect();
            let before = set.len();
            for a in &snapshot {
                for b in &snapshot {
                    if self.word_deg(a) + self.word_deg(b) <= depth_bound {
                        let mut w = a.clone();
                        w.extend_from_slice(b);
                        set.insert(self.normalize(&w)?.0);
                        let m = calc.meet(a, b)?;
                        if self.word_deg(&m) <= depth_bound {
                            set.insert(m);
                        }
                    }
                    set.insert(calc.join(a, b)?);
                }
            }
            if set.len() == before {
                break;
            }
        }
        // distributivity is checked on the interior, where all the meets
        // needed by the laws stay inside the closure
        let interior: Vec<Vec<usize>> = set
            .iter()
            .filter(|w| self.word_deg(w) * 3 <= depth_bound)
            .cloned()
            .collect();
        let mut distributive = true;
        'outer: for a in &interior {
            for b in &interior {
                for c in &interior {
                    let bc = calc.meet(b, c)?;
                    let lhs = calc.join(a, &bc)?;
                    let ab = calc.join(a, b)?;
                    let ac = calc.join(a, c)?;
                    let rhs = calc.meet(&ab, &ac)?;
                    if lhs != rhs {
                        distributive = false;
                        break 'outer;
                    }
                    let bc2 = calc.join(b, c)?;
                    let lhs2 = calc.meet(a, &bc2)?;
                    let ab2 = calc.meet(a, b)?;
                    let ac2 = calc.meet(a, c)?;
                    let rhs2 = calc.join(&ab2, &ac2)?;
                    if lhs2 != rhs2 {
                        distributive = false;
                        break 'outer;
                    }
                }
            }
        }
        Ok(ScaffoldReport {
            elements: set.into_iter().map(NormalWord).collect(),
            distributive,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ScaffoldReport {
    pub elements: Vec<NormalWord>,
    pub distributive: bool,
}

#[cfg(test)]
mod tests {
    use super::super::{free_abelian, klein, product_germ};
    use super::*;

    #[test]
    fn free_abelian_interval_analysis() {
        let g = free_abelian(2);
        let a = g.interval_analysis();
        assert!(a.duality_ok, "{:?}", a.violations);
        assert_eq!(a.center.len(), 4);
        let x = g.id_of("x0").unwrap();
        let y = g.id_of("x1").unwrap();
        assert_eq!(a.center_dual_atoms, vec![x, y]);
        // D is the identity on the dual atoms
        assert_eq!(a.d_map[x], x);
        assert_eq!(a.d_map[y], y);
    }

    #[test]
    fn klein_interval_analysis() {
        let g = klein();
        let a = g.interval_analysis();
        assert!(a.duality_ok, "{:?}", a.violations);
        assert_eq!(a.center.len(), 4);
        let x = g.id_of("x").unwrap();
        let y = g.id_of("y").unwrap();
        // D swaps the generators
        assert_eq!(a.d_map[x], y);
        assert_eq!(a.d_map[y], x);
    }

    #[test]
    fn frozen_power_examples() {
        let g = klein();
        let a = g.interval_analysis();
        let x = g.id_of("x").unwrap();
        let y = g.id_of("y").unwrap();
        assert_eq!(g.frozen_power(&a, x, 1).unwrap().0, vec![x]);
        assert_eq!(g.frozen_power(&a, x, 2).unwrap().0, vec![y, x]);
        assert_eq!(g.frozen_power(&a, x, 3).unwrap().0, vec![x, y, x]);

        let fa = free_abelian(2);
        let aa = fa.interval_analysis();
        let x0 = fa.id_of("x0").unwrap();
        assert_eq!(fa.frozen_power(&aa, x0, 3).unwrap().0, vec![x0, x0, x0]);

        assert!(matches!(
            g.frozen_power(&a, g.delta(), 1),
            Err(GermError::NotCentralDualAtom)
        ));
    }

    #[test]
    fn semibeam_decompose_examples() {
        let g = klein();
        let a = g.interval_analysis();
        let x = g.id_of("x").unwrap();
        let y = g.id_of("y").unwrap();
        let d = g.delta();
        // Delta = x ^ y decomposes into ([x], [y])
        let comps = g.semibeam_decompose(&a, &NormalWord(vec![d])).unwrap();
        assert_eq!(comps, vec![NormalWord(vec![x]), NormalWord(vec![y])]);
        // [x] is already in one semibeam
        let comps = g.semibeam_decompose(&a, &NormalWord(vec![x])).unwrap();
        assert_eq!(comps, vec![NormalWord(vec![x]), NormalWord::identity()]);
    }

    #[test]
    fn rigidity_in_klein_and_products() {
        let g = klein();
        let a = g.interval_analysis();
        let x = g.id_of("x").unwrap();
        // right multiplication by x swaps the two beams
        let pi = g.rigidity_permutation(&a, &NormalWord(vec![x])).unwrap();
        assert_eq!(pi, vec![1, 0]);
        // the identity fixes them
        let pi = g.rigidity_permutation(&a, &NormalWord::identity()).unwrap();
        assert_eq!(pi, vec![0, 1]);

        // in a product with a free abelian factor, multiplication in one
        // factor never moves the other's beams
        let p = product_germ(&free_abelian(1), &klein());
        let pa = p.interval_analysis();
        assert_eq!(pa.center_dual_atoms.len(), 3);
        for w in p.enumerate_cone(3) {
            let pi = p.rigidity_permutation(&pa, &w).unwrap();
            let mut sorted = pi.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![0, 1, 2]);
        }
    }

    #[test]
    fn conjugation_by_delta_is_automorphism() {
        for g in [free_abelian(2), klein(), product_germ(&klein(), &free_abelian(1))] {
            let conj = g.conjugation_by_delta().unwrap();
            // involution here: conjugating twice returns to the start
            for a in 0..g.n() {
                assert_eq!(conj[conj[a]], a);
            }
        }
    }

    #[test]
    fn scaffold_examples() {
        // distributive germ: the scaffold is everything up to the bound
        let g = free_abelian(2);
        let rep = g.scaffold(3).unwrap();
        let all = g.enumerate_cone(3);
        assert!(rep.distributive);
        assert_eq!(rep.elements.len(), all.len());

        // Klein: also distributive (the scaffold embeds a Z^2 shifted by
        // the swap)
        let k = klein();
        let rep = k.scaffold(4).unwrap();
        assert!(rep.distributive);

        // product germ scaffold stays distributive with 3 generators
        let p = product_germ(&free_abelian(2), &klein());
        let rep = p.scaffold(3).unwrap();
        assert!(rep.distributive);
    }
}
