//! Finite non-degenerate involutive set-theoretic solutions of the
//! Yang-Baxter equation, in three equivalent presentations: the R-map, the
//! cycle set, and the discrete L-algebra with duality. Includes the
//! structure germ construction (the interval of the structure monoid) and
//! exhaustive enumeration for small sizes.

use crate::finlat;
use crate::germ::{Germ, GermTable};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum YbeError {
    #[error("structure is not a valid instance: {0}")]
    InvalidStructure(String),
    #[error("enumeration size {0} exceeds the supported bound")]
    TooLarge(usize),
}

/// A set-theoretic map `R(x, y) = (lambda_x(y), rho_y(x))` on pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RMap {
    pub n: usize,
    /// `table[x * n + y] = (u, v)` with `R(x, y) = (u, v)`.
    pub table: Vec<(usize, usize)>,
}

/// Validation flags of an R-map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RMapReport {
    pub nondegenerate: bool,
    pub involutive: bool,
    pub braid: bool,
}

impl RMap {
    pub fn apply(&self, x: usize, y: usize) -> (usize, usize) {
        self.table[x * self.n + y]
    }

    pub fn lambda(&self, x: usize, y: usize) -> usize {
        self.apply(x, y).0
    }

    pub fn rho(&self, y: usize, x: usize) -> usize {
        self.apply(x, y).1
    }

    /// Checks non-degeneracy, involutivity and the braid equation (the
    /// latter on all n^3 triples).
    pub fn validate(&self) -> RMapReport {
        let n = self.n;
        let mut nondegenerate = true;
        for x in 0..n {
            let mut seen_l = vec![false; n];
            let mut seen_r = vec![false; n];
            for y in 0..n {
                seen_l[self.lambda(x, y)] = true;
                seen_r[self.rho(x, y)] = true;
            }
            nondegenerate &= seen_l.iter().all(|&b| b) && seen_r.iter().all(|&b| b);
        }
        let mut involutive = true;
        for x in 0..n {
            for y in 0..n {
                let (u, v) = self.apply(x, y);
                involutive &= self.apply(u, v) == (x, y);
            }
        }
        let mut braid = true;
        let r12 = |(x, y, z): (usize, usize, usize)| {
            let (u, v) = self.apply(x, y);
            (u, v, z)
        };
        let r23 = |(x, y, z): (usize, usize, usize)| {
            let (u, v) = self.apply(y, z);
            (x, u, v)
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let t = (x, y, z);
                    braid &= r12(r23(r12(t))) == r23(r12(r23(t)));
                }
            }
        }
        RMapReport { nondegenerate, involutive, braid }
    }

    pub fn is_solution(&self) -> bool {
        let r = self.validate();
        r.nondegenerate && r.involutive && r.braid
    }
}

/// A non-degenerate cycle set: `x . y` with every left translation
/// bijective and the cycle-set law.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleSet {
    pub n: usize,
    /// `table[x * n + y] = x . y`
    pub table: Vec<usize>,
}

impl CycleSet {
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    pub fn validate(&self) -> Result<(), YbeError> {
        let n = self.n;
        for x in 0..n {
            let mut seen = vec![false; n];
            for y in 0..n {
                seen[self.op(x, y)] = true;
            }
            if !seen.iter().all(|&b| b) {
                return Err(YbeError::InvalidStructure(format!(
                    "left translation by {x} is not bijective"
                )));
            }
        }
        // squaring map bijective: non-degeneracy of the associated solution
        let mut seen = vec![false; n];
        for x in 0..n {
            seen[self.op(x, x)] = true;
        }
        if !seen.iter().all(|&b| b) {
            return Err(YbeError::InvalidStructure("square map is not bijective".into()));
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.op(self.op(x, y), self.op(x, z))
                        != self.op(self.op(y, x), self.op(y, z))
                    {
                        return Err(YbeError::InvalidStructure(format!(
                            "cycle-set law fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A discrete L-algebra with duality: unit `e`, arrow table, and the
/// duality bijection on the carrier without the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteLAlgebra {
    /// Carrier size including the unit.
    pub m: usize,
    pub unit: usize,
    /// `arrow[a * m + b] = a -> b`
    pub arrow: Vec<usize>,
    /// `duality[a] = D(a)` for `a != unit`; `duality[unit] = unit`.
    pub duality: Vec<usize>,
}

impl DiscreteLAlgebra {
    pub fn arr(&self, a: usize, b: usize) -> usize {
        self.arrow[a * self.m + b]
    }

    pub fn validate(&self) -> Result<(), YbeError> {
        let m = self.m;
        let e = self.unit;
        let fail = |msg: String| Err(YbeError::InvalidStructure(msg));
        for a in 0..m {
            if self.arr(a, a) != e || self.arr(a, e) != e {
                return fail(format!("x -> x = x -> e = e fails at {a}"));
            }
            if self.arr(e, a) != a {
                return fail(format!("e -> x = x fails at {a}"));
            }
        }
        for a in 0..m {
            for b in 0..m {
                if a != b && self.arr(a, b) == e && self.arr(b, a) == e {
                    return fail(format!("discreteness fails at ({a}, {b})"));
                }
                for c in 0..m {
                    if self.arr(self.arr(a, b), self.arr(a, c))
                        != self.arr(self.arr(b, a), self.arr(b, c))
                    {
                        return fail(format!("L-algebra law fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        // duality: a bijection of the carrier minus the unit satisfying
        // D(x -> y) = (y -> x) -> D(y)
        let mut seen = vec![false; m];
        for a in 0..m {
            let d = self.duality[a];
            if a == e {
                if d != e {
                    return fail("duality must fix the unit slot".into());
                }
                continue;
            }
            if d == e || d >= m || seen[d] {
                return fail(format!("duality is not a bijection at {a}"));
            }
            seen[d] = true;
        }
        for x in 0..m {
            for y in 0..m {
                if x == y || x == e || y == e {
                    continue;
                }
                let lhs = self.duality[self.arr(x, y)];
                let rhs = self.arr(self.arr(y, x), self.duality[y]);
                if lhs != rhs {
                    return fail(format!("duality axiom fails at ({x}, {y})"));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

/// Cycle set of an involutive nondegenerate solution: `x . y` inverts the
/// left action.
pub fn rmap_to_cycle_set(r: &RMap) -> Result<CycleSet, YbeError> {
    let rep = r.validate();
    if !(rep.nondegenerate && rep.involutive && rep.braid) {
        return Err(YbeError::InvalidStructure(format!("not a solution: {rep:?}")));
    }
    let n = r.n;
    let mut table = vec![0usize; n * n];
    for x in 0..n {
        // invert lambda_x
        let mut inv = vec![0usize; n];
        for y in 0..n {
            inv[r.lambda(x, y)] = y;
        }
        for (y, t) in inv.iter().enumerate() {
            table[x * n + y] = *t;
        }
    }
    let cs = CycleSet { n, table };
    cs.validate()?;
    Ok(cs)
}

/// Solution of a cycle set: the left action inverts the translations, the
/// right action is forced by involutivity.
pub fn cycle_set_to_rmap(cs: &CycleSet) -> Result<RMap, YbeError> {
    cs.validate()?;
    let n = cs.n;
    let mut lambda = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            lambda[x * n + cs.op(x, y)] = y; // lambda_x = sigma_x^{-1}
        }
    }
    let mut table = vec![(0usize, 0usize); n * n];
    for x in 0..n {
        for y in 0..n {
            let u = lambda[x * n + y];
            let v = cs.op(u, x); // lambda_u^{-1}(x)
            table[x * n + y] = (u, v);
        }
    }
    let r = RMap { n, table };
    if !r.is_solution() {
        return Err(YbeError::InvalidStructure(
            "cycle set does not induce a solution".into(),
        ));
    }
    Ok(r)
}

/// Discrete L-algebra with duality of a solution: the arrow inverts the
/// right action on distinct elements, the duality is the cycle-set square.
pub fn rmap_to_lalgebra(r: &RMap) -> Result<DiscreteLAlgebra, YbeError> {
    let rep = r.validate();
    if !(rep.nondegenerate && rep.involutive && rep.braid) {
        return Err(YbeError::InvalidStructure(format!("not a solution: {rep:?}")));
    }
    let n = r.n;
    let m = n + 1;
    let unit = n;
    let mut arrow = vec![0usize; m * m];
    for a in 0..m {
        arrow[a * m + a] = unit;
        arrow[a * m + unit] = unit;
        arrow[unit * m + a] = a;
    }
    for x in 0..n {
        let mut rho_inv = vec![0usize; n];
        for w in 0..n {
            rho_inv[r.rho(x, w)] = w;
        }
        for y in 0..n {
            if y != x {
                arrow[x * m + y] = rho_inv[y];
            }
        }
    }
    // D(x) is the unique a with R(a, x) = (a, x): the product a*x is frozen
    // (right-maximal). For involutive solutions that is the diagonal of the
    // left action.
    let mut duality = vec![0usize; m];
    duality[unit] = unit;
    for x in 0..n {
        let d = r.lambda(x, x);
        debug_assert_eq!(r.apply(d, x), (d, x), "frozen pair characterization");
        duality[x] = d;
    }
    let alg = DiscreteLAlgebra { m, unit, arrow, duality };
    alg.validate()?;
    Ok(alg)
}

/// Solution of a discrete L-algebra with duality: the rho maps are read off
/// the arrow table, the missing diagonal value being the one element outside
/// the arrow image.
pub fn lalgebra_to_rmap(alg: &DiscreteLAlgebra) -> Result<RMap, YbeError> {
    alg.validate()?;
    let m = alg.m;
    let e = alg.unit;
    let n = m - 1;
    // dense reindexing: carrier minus unit -> 0..n
    let carrier: Vec<usize> = (0..m).filter(|&a| a != e).collect();
    let pos = |a: usize| carrier.iter().position(|&c| c == a).unwrap();
    let mut rho = vec![0usize; n * n]; // rho[x][w] = rho_x(w)
    for (xi, &x) in carrier.iter().enumerate() {
        // rho_x^{-1}(y) = x -> y for y != x; the remaining value of the
        // bijection is the element not hit by the arrows
        let mut inv = vec![usize::MAX; n];
        let mut hit = vec![false; n];
        for &y in carrier.iter() {
            if y == x {
                continue;
            }
            let a = alg.arr(x, y);
            if a == e {
                return Err(YbeError::InvalidStructure(
                    "arrow of distinct elements hits the unit".into(),
                ));
            }
            inv[pos(y)] = pos(a);
            hit[pos(a)] = true;
        }
        let missing: Vec<usize> = (0..n).filter(|&w| !hit[w]).collect();
        if missing.len() != 1 {
            return Err(YbeError::InvalidStructure(
                "arrow rows do not extend to bijections".into(),
            ));
        }
        inv[xi] = missing[0];
        // rho_x = inverse of inv
        for (y, &w) in inv.iter().enumerate() {
            rho[xi * n + w] = y;
        }
    }
    let mut table = vec![(0usize, 0usize); n * n];
    for x in 0..n {
        for y in 0..n {
            let v = rho[y * n + x]; // rho_y(x)
            // involutivity: R(u, v) = (x, y) forces u = rho_v^{-1}(y)
            let u = (0..n).find(|&w| rho[v * n + w] == y).unwrap();
            table[x * n + y] = (u, v);
        }
    }
    let r = RMap { n, table };
    if !r.is_solution() {
        return Err(YbeError::InvalidStructure(
            "L-algebra does not induce a solution".into(),
        ));
    }
    // the duality must match the frozen-pair diagonal of the solution
    for (xi, &x) in carrier.iter().enumerate() {
        if pos(alg.duality[x]) != r.lambda(xi, xi) {
            return Err(YbeError::InvalidStructure(
                "duality differs from the frozen-pair diagonal".into(),
            ));
        }
    }
    Ok(r)
}

pub fn cycle_set_to_lalgebra(cs: &CycleSet) -> Result<DiscreteLAlgebra, YbeError> {
    rmap_to_lalgebra(&cycle_set_to_rmap(cs)?)
}

pub fn lalgebra_to_cycle_set(alg: &DiscreteLAlgebra) -> Result<CycleSet, YbeError> {
    rmap_to_cycle_set(&lalgebra_to_rmap(alg)?)
}

// ---------------------------------------------------------------------------
// Structure germ
// ---------------------------------------------------------------------------

/// Builds the interval germ of the structure monoid of a solution: elements
/// are the right divisors of the least common left multiple of the
/// generators, with the restricted partial product.
///
/// Words are closed under the defining relations `wx = yz` for
/// `R(w, x) = (y, z)`; classes are keyed by their lexicographically least
/// member.
pub fn structure_germ(r: &RMap, guard: usize) -> Result<Germ, YbeError> {
    if !r.is_solution() {
        return Err(YbeError::InvalidStructure("not a solution".into()));
    }
    let n = r.n;
    if n == 0 || n > 6 {
        return Err(YbeError::TooLarge(n));
    }
    let gen_names: Vec<String> = (0..n).map(|i| letter(i)).collect();

    // equivalence classes of words of each length up to n
    let canon = |word: &[usize]| -> Vec<usize> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![word.to_vec()];
        while let Some(w) = stack.pop() {
            if !seen.insert(w.clone()) {
                continue;
            }
            for i in 0..w.len().saturating_sub(1) {
                let (u, v) = r.apply(w[i], w[i + 1]);
                let mut nw = w.clone();
                nw[i] = u;
                nw[i + 1] = v;
                stack.push(nw);
            }
        }
        seen.into_iter().next().unwrap()
    };

    // enumerate classes by degree
    let mut by_deg: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]]; // degree 0: empty word
    for d in 1..=n {
        let mut classes: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut word = vec![0usize; d];
        loop {
            classes.insert(canon(&word));
            if classes.len() > guard {
                return Err(YbeError::TooLarge(classes.len()));
            }
            let mut k = 0;
            loop {
                if k == d {
                    break;
                }
                word[k] += 1;
                if word[k] < n {
                    break;
                }
                word[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
        by_deg.push(classes.into_iter().collect());
    }

    // g <= x (x a generator) iff some word of g's class ends with x; the
    // meet of all generators is the unique maximal common lower bound,
    // which sits in degree n
    let class_words = |rep: &[usize]| -> BTreeSet<Vec<usize>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![rep.to_vec()];
        while let Some(w) = stack.pop() {
            if !seen.insert(w.clone()) {
                continue;
            }
            for i in 0..w.len().saturating_sub(1) {
                let (u, v) = r.apply(w[i], w[i + 1]);
                let mut nw = w.clone();
                nw[i] = u;
                nw[i + 1] = v;
                stack.push(nw);
            }
        }
        seen
    };
    let delta_cands: Vec<Vec<usize>> = by_deg[n]
        .iter()
        .filter(|rep| {
            let words = class_words(rep);
            (0..n).all(|x| words.iter().any(|w| *w.last().unwrap() == x))
        })
        .cloned()
        .collect();
    if delta_cands.len() != 1 {
        return Err(YbeError::InvalidStructure(format!(
            "{} candidates for the least common left multiple of the generators",
            delta_cands.len()
        )));
    }
    let delta_rep = delta_cands.into_iter().next().unwrap();
    let delta_words = class_words(&delta_rep);

    // germ elements: right divisors of delta, i.e. suffixes of its words
    let mut suffixes: BTreeSet<Vec<usize>> = BTreeSet::new();
    for w in &delta_words {
        for i in 0..=w.len() {
            suffixes.insert(canon(&w[i..]));
        }
    }
    let mut elements: Vec<Vec<usize>> = suffixes.into_iter().collect();
    elements.sort_by_key(|w| (w.len(), w.clone()));
    let index: BTreeMap<Vec<usize>, usize> =
        elements.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let ng = elements.len();
    let mut product = vec![None; ng * ng];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let mut w = a.clone();
            w.extend_from_slice(b);
            let c = canon(&w);
            if let Some(&k) = index.get(&c) {
                product[i * ng + j] = Some(k);
            }
        }
    }
    let names: Vec<String> = elements
        .iter()
        .map(|w| {
            if w.is_empty() {
                "e".to_string()
            } else {
                w.iter().map(|&x| gen_names[x].clone()).collect::<Vec<_>>().join("")
            }
        })
        .collect();
    let degree: Vec<u32> = elements.iter().map(|w| w.len() as u32).collect();
    let identity = index[&Vec::new()];
    let delta = index[&delta_rep];
    let table = GermTable { names, identity, delta, degree, product };
    Germ::new(table).map_err(|rep| {
        YbeError::InvalidStructure(format!("structure germ invalid: {:?}", rep.violations))
    })
}

fn letter(i: usize) -> String {
    char::from(b'a' + i as u8).to_string()
}

/// The structure germ interval is a Boolean lattice; check via finlat.
pub fn structure_interval_is_boolean(g: &Germ) -> bool {
    let lat = g.lattice();
    let c = finlat::classify(lat);
    let atoms = lat.atoms().len();
    c.distributive && lat.n() == (1usize << atoms)
        && finlat::center(lat).len() == lat.n()
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// All non-degenerate involutive solutions on `n` points, plus the number
/// of isomorphism classes under relabeling. Two independent search routes
/// are run (over lambda families and over rho families) and must agree.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub solutions: Vec<RMap>,
    pub iso_classes: usize,
}

pub fn enumerate(n: usize) -> Result<Enumeration, YbeError> {
    if n == 0 || n > 4 {
        return Err(YbeError::TooLarge(n));
    }
    let perms = all_permutations(n);
    // route 1: involutive solutions are determined by the lambda family
    let mut sols: Vec<RMap> = Vec::new();
    let mut assignment = vec![0usize; n];
    loop {
        let r = rmap_from_lambdas(n, &assignment, &perms);
        if r.is_solution() {
            sols.push(r);
        }
        if !advance(&mut assignment, perms.len()) {
            break;
        }
    }
    // route 2: determined by the rho family, independently
    let mut count2 = 0usize;
    let mut assignment = vec![0usize; n];
    loop {
        let r = rmap_from_rhos(n, &assignment, &perms);
        if r.is_solution() {
            count2 += 1;
        }
        if !advance(&mut assignment, perms.len()) {
            break;
        }
    }
    if sols.len() != count2 {
        return Err(YbeError::InvalidStructure(format!(
            "enumeration routes disagree: {} vs {}",
            sols.len(),
            count2
        )));
    }
    // isomorphism classes under the diagonal relabeling action
    let mut canon_forms: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    for r in &sols {
        let mut best: Option<Vec<(usize, usize)>> = None;
        for p in &perms {
            let mut t = vec![(0usize, 0usize); n * n];
            for x in 0..n {
                for y in 0..n {
                    let (u, v) = r.apply(x, y);
                    t[p[x] * n + p[y]] = (p[u], p[v]);
                }
            }
            if best.as_ref().map_or(true, |b| &t < b) {
                best = Some(t);
            }
        }
        canon_forms.insert(best.unwrap());
    }
    Ok(Enumeration { solutions: sols, iso_classes: canon_forms.len() })
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, &mut out);
    out.sort();
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn advance(assignment: &mut [usize], base: usize) -> bool {
    for a in assignment.iter_mut() {
        *a += 1;
        if *a < base {
            return true;
        }
        *a = 0;
    }
    false
}

fn rmap_from_lambdas(n: usize, assignment: &[usize], perms: &[Vec<usize>]) -> RMap {
    let lambda: Vec<&Vec<usize>> = assignment.iter().map(|&i| &perms[i]).collect();
    let mut inv: Vec<Vec<usize>> = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            inv[x][lambda[x][y]] = y;
        }
    }
    let mut table = vec![(0usize, 0usize); n * n];
    for x in 0..n {
        for y in 0..n {
            let u = lambda[x][y];
            let v = inv[u][x];
            table[x * n + y] = (u, v);
        }
    }
    RMap { n, table }
}

fn rmap_from_rhos(n: usize, assignment: &[usize], perms: &[Vec<usize>]) -> RMap {
    let rho: Vec<&Vec<usize>> = assignment.iter().map(|&i| &perms[i]).collect();
    let mut inv: Vec<Vec<usize>> = vec![vec![0; n]; n];
    for y in 0..n {
        for x in 0..n {
            inv[y][rho[y][x]] = x;
        }
    }
    let mut table = vec![(0usize, 0usize); n * n];
    for x in 0..n {
        for y in 0..n {
            let v = rho[y][x];
            let u = inv[v][y];
            table[x * n + y] = (u, v);
        }
    }
    RMap { n, table }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RMapJson {
    pub n: usize,
    /// Entries `[[x, y], [u, v]]` meaning `R(x, y) = (u, v)`.
    #[serde(rename = "R")]
    pub r: Vec<((usize, usize), (usize, usize))>,
}

impl RMap {
    pub fn to_json(&self) -> RMapJson {
        let mut r = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                r.push(((x, y), self.apply(x, y)));
            }
        }
        RMapJson { n: self.n, r }
    }

    pub fn from_json(j: &RMapJson) -> Result<RMap, YbeError> {
        let n = j.n;
        let mut table = vec![None; n * n];
        for &((x, y), (u, v)) in &j.r {
            if x >= n || y >= n || u >= n || v >= n {
                return Err(YbeError::InvalidStructure("entry out of range".into()));
            }
            table[x * n + y] = Some((u, v));
        }
        let table: Option<Vec<(usize, usize)>> = table.into_iter().collect();
        let table =
            table.ok_or_else(|| YbeError::InvalidStructure("table not total".into()))?;
        Ok(RMap { n, table })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleSetJson {
    pub n: usize,
    /// `table[x][y] = x . y`
    pub table: Vec<Vec<usize>>,
}

impl CycleSet {
    pub fn to_json(&self) -> CycleSetJson {
        CycleSetJson {
            n: self.n,
            table: (0..self.n)
                .map(|x| (0..self.n).map(|y| self.op(x, y)).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &CycleSetJson) -> Result<CycleSet, YbeError> {
        let n = j.n;
        if j.table.len() != n || j.table.iter().any(|row| row.len() != n) {
            return Err(YbeError::InvalidStructure("table must be n x n".into()));
        }
        let mut table = vec![0usize; n * n];
        for (x, row) in j.table.iter().enumerate() {
            for (y, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(YbeError::InvalidStructure("entry out of range".into()));
                }
                table[x * n + y] = v;
            }
        }
        Ok(CycleSet { n, table })
    }
}

/// The trivial solution `R(x, y) = (y, x)`.
pub fn trivial_solution(n: usize) -> RMap {
    let mut table = vec![(0usize, 0usize); n * n];
    for x in 0..n {
        for y in 0..n {
            table[x * n + y] = (y, x);
        }
    }
    RMap { n, table }
}

/// The swap solution on two points: `R(x, y) = (sigma y, sigma x)`.
pub fn sigma_swap_solution() -> RMap {
    let n = 2;
    let s = |x: usize| 1 - x;
    let mut table = vec![(0usize, 0usize); n * n];
    for x in 0..n {
        for y in 0..n {
            table[x * n + y] = (s(y), s(x));
        }
    }
    RMap { n, table }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ;

    #[test]
    fn validate_examples() {
        let t = trivial_solution(2);
        let rep = t.validate();
        assert!(rep.nondegenerate && rep.involutive && rep.braid);
        let s = sigma_swap_solution();
        let rep = s.validate();
        assert!(rep.nondegenerate && rep.involutive && rep.braid);
        // a non-bijective table
        let bad = RMap { n: 2, table: vec![(0, 0); 4] };
        assert!(!bad.validate().nondegenerate);
    }

    #[test]
    fn conversion_examples() {
        // trivial solution: cycle set x.y = y, duality identity
        let cs = rmap_to_cycle_set(&trivial_solution(2)).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(cs.op(x, y), y);
            }
        }
        let alg = rmap_to_lalgebra(&trivial_solution(2)).unwrap();
        assert_eq!(alg.duality[0], 0);
        assert_eq!(alg.duality[1], 1);
        // swap solution: duality is the transposition
        let alg = rmap_to_lalgebra(&sigma_swap_solution()).unwrap();
        assert_eq!(alg.duality[0], 1);
        assert_eq!(alg.duality[1], 0);
    }

    #[test]
    fn roundtrips_on_enumerated_solutions() {
        for n in 1..=3 {
            for r in enumerate(n).unwrap().solutions {
                let cs = rmap_to_cycle_set(&r).unwrap();
                assert_eq!(cycle_set_to_rmap(&cs).unwrap(), r);
                let alg = rmap_to_lalgebra(&r).unwrap();
                assert_eq!(lalgebra_to_rmap(&alg).unwrap(), r);
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate(1).unwrap().solutions.len(), 1);
        let e2 = enumerate(2).unwrap();
        assert_eq!(e2.solutions.len(), 2);
        assert_eq!(e2.iso_classes, 2);
        assert!(e2.solutions.contains(&trivial_solution(2)));
        assert!(e2.solutions.contains(&sigma_swap_solution()));
        let e3 = enumerate(3).unwrap();
        assert_eq!(e3.iso_classes, 5);
    }

    #[test]
    fn structure_germ_examples() {
        // one point: the chain germ of Z
        let g = structure_germ(&trivial_solution(1), 10_000).unwrap();
        assert_eq!(g.n(), 2);
        // trivial two-point solution: the free abelian germ on 4 elements
        let g = structure_germ(&trivial_solution(2), 10_000).unwrap();
        assert_eq!(g.n(), 4);
        let x = g.id_of("a").unwrap();
        let y = g.id_of("b").unwrap();
        assert_eq!(g.prod(x, y), Some(g.delta()));
        assert_eq!(g.prod(y, x), Some(g.delta()));
        assert!(structure_interval_is_boolean(&g));
        // swap solution: the Klein germ x*x = y*y = delta
        let g = structure_germ(&sigma_swap_solution(), 10_000).unwrap();
        assert_eq!(g.n(), 4);
        let x = g.id_of("a").unwrap();
        let y = g.id_of("b").unwrap();
        assert_eq!(g.prod(x, x), Some(g.delta()));
        assert_eq!(g.prod(y, y), Some(g.delta()));
        assert_eq!(g.prod(x, y), None);
        assert!(structure_interval_is_boolean(&g));
    }

    #[test]
    fn structure_germ_recovers_lalgebra() {
        // the interval analysis of the structure germ recovers the arrow
        // and duality of the solution exactly
        for n in 1..=3 {
            for r in enumerate(n).unwrap().solutions {
                let alg = rmap_to_lalgebra(&r).unwrap();
                let g = structure_germ(&r, 100_000).unwrap();
                let a = g.interval_analysis();
                assert!(a.duality_ok, "{:?}", a.violations);
                // generators are the degree-1 elements, in letter order
                let gens: Vec<usize> =
                    (0..n).map(|i| g.id_of(&letter(i)).unwrap()).collect();
                assert_eq!(a.center_dual_atoms.len(), n);
                for (xi, &gx) in gens.iter().enumerate() {
                    assert!(a.center_dual_atoms.contains(&gx));
                    assert_eq!(
                        a.d_map[gx],
                        gens[alg.duality[xi]],
                        "duality mismatch for solution {r:?}"
                    );
                    for (yi, &gy) in gens.iter().enumerate() {
                        if xi == yi {
                            continue;
                        }
                        let expected = alg.arr(xi, yi);
                        assert_eq!(g.arrow_el(gx, gy), gens[expected]);
                    }
                }
            }
        }
    }

    #[test]
    fn frozen_words_alternate_in_structure_germs() {
        // frozen powers follow the alternating duality pattern
        let g = structure_germ(&sigma_swap_solution(), 10_000).unwrap();
        let a = g.interval_analysis();
        let x = g.id_of("a").unwrap();
        let y = g.id_of("b").unwrap();
        let phi3 = g.frozen_power(&a, x, 3).unwrap();
        assert_eq!(phi3.0, vec![x, y, x]);
        let _ = germ::words::NormalWord::identity();
    }

    #[test]
    fn json_roundtrip() {
        let r = sigma_swap_solution();
        let j = r.to_json();
        assert_eq!(RMap::from_json(&j).unwrap(), r);
        let cs = rmap_to_cycle_set(&r).unwrap();
        let j = cs.to_json();
        assert_eq!(CycleSet::from_json(&j).unwrap(), cs);
    }
}
