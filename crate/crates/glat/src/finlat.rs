//! Finite bounded lattices as cover posets, with cached meet/join tables and
//! the structural predicates used throughout the crate: modularity,
//! distributivity, geometricity, centers, direct decompositions, dual
//! frames, primarity, and factorization extension along chains of ideals.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinLatError {
    #[error("cover relation contains a cycle")]
    CyclicCovers,
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("operation requires a modular lattice")]
    NotModular,
    #[error("embedding is not a downset embedding: {0}")]
    NotADownset(String),
    #[error("base factorization does not match the induced one: {0}")]
    FactorizationMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A finite bounded lattice on dense element ids `0..n`, built from its
/// cover relation. Immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    covers: Vec<(usize, usize)>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    top: usize,
    bottom: usize,
    height: Vec<usize>,
}

/// Structural summary returned by [`classify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub modular: bool,
    pub distributive: bool,
    pub geometric: bool,
    pub length: usize,
    pub atoms: Vec<usize>,
    pub dual_atoms: Vec<usize>,
    pub meet_irreducibles: Vec<usize>,
}

/// A direct-product structure on a lattice: factor sublattices plus the
/// component tuple of every element. `internal` marks decompositions where
/// each element is the meet of its components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub factors: Vec<Vec<usize>>,
    pub witness: Vec<Vec<usize>>,
    pub internal: bool,
}

/// Result of [`dual_frame_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualFrameReport {
    pub independent: bool,
    pub spanning: bool,
    pub reflected: Option<Vec<usize>>,
}

/// Builds a lattice from `n` and its cover pairs `(lower, upper)`.
///
/// The transitive closure of the covers must be a partial order with unique
/// top and bottom in which every pair has a meet and a join. Redundant
/// (transitive) pairs are accepted; the stored cover relation is the exact
/// covering relation of the resulting order.
pub fn build_lattice(n: usize, covers: &[(usize, usize)]) -> Result<FiniteLattice, FinLatError> {
    if n == 0 {
        return Err(FinLatError::InvalidInput("n must be >= 1".into()));
    }
    for &(a, b) in covers {
        if a >= n || b >= n {
            return Err(FinLatError::InvalidInput(format!(
                "cover ({a},{b}) out of range for n={n}"
            )));
        }
        if a == b {
            return Err(FinLatError::CyclicCovers);
        }
    }
    // adjacency + cycle check via Kahn's algorithm
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(a, b) in covers {
        up[a].push(b);
        indeg[b] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut seen = 0;
    let mut topo = Vec::with_capacity(n);
    while let Some(x) = queue.pop() {
        seen += 1;
        topo.push(x);
        for &y in &up[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                queue.push(y);
            }
        }
    }
    if seen != n {
        return Err(FinLatError::CyclicCovers);
    }

    // reflexive-transitive closure, processed against the topological order
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for &x in topo.iter().rev() {
        for &y in &up[x] {
            for z in 0..n {
                if leq[y * n + z] {
                    leq[x * n + z] = true;
                }
            }
        }
    }

    let maximal: Vec<usize> = (0..n)
        .filter(|&x| (0..n).all(|y| x == y || !leq[x * n + y]))
        .collect();
    let minimal: Vec<usize> = (0..n)
        .filter(|&x| (0..n).all(|y| x == y || !leq[y * n + x]))
        .collect();
    if maximal.len() != 1 || minimal.len() != 1 {
        return Err(FinLatError::NotALattice(format!(
            "{} maximal and {} minimal elements",
            maximal.len(),
            minimal.len()
        )));
    }
    let top = maximal[0];
    let bottom = minimal[0];

    // meets and joins; Kahn's queue pops minimal elements first, so `topo`
    // is a bottom-up linear extension
    let order: Vec<usize> = topo.clone();
    let mut rank = vec![0usize; n];
    for (i, &x) in order.iter().enumerate() {
        rank[x] = i;
    }
    let mut meet = vec![0usize; n * n];
    let mut join = vec![0usize; n * n];
    for a in 0..n {
        for b in a..n {
            let lower: Vec<usize> = (0..n)
                .filter(|&c| leq[c * n + a] && leq[c * n + b])
                .collect();
            let &m = lower.iter().max_by_key(|&&c| rank[c]).unwrap();
            if !lower.iter().all(|&c| leq[c * n + m]) {
                return Err(FinLatError::NotALattice(format!(
                    "elements {a} and {b} have no meet"
                )));
            }
            let upper: Vec<usize> = (0..n)
                .filter(|&c| leq[a * n + c] && leq[b * n + c])
                .collect();
            let &j = upper.iter().min_by_key(|&&c| rank[c]).unwrap();
            if !upper.iter().all(|&c| leq[m_idx(j, c, n)]) {
                return Err(FinLatError::NotALattice(format!(
                    "elements {a} and {b} have no join"
                )));
            }
            meet[a * n + b] = m;
            meet[b * n + a] = m;
            join[a * n + b] = j;
            join[b * n + a] = j;
        }
    }

    // true covering relation of the order
    let mut true_covers = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && leq[a * n + b] {
                let strict_between = (0..n)
                    .any(|c| c != a && c != b && leq[a * n + c] && leq[c * n + b]);
                if !strict_between {
                    true_covers.push((a, b));
                }
            }
        }
    }
    true_covers.sort_unstable();

    let mut height = vec![0usize; n];
    for &x in order.iter() {
        for &(a, b) in &true_covers {
            if b == x {
                height[x] = height[x].max(height[a] + 1);
            }
        }
    }

    Ok(FiniteLattice {
        n,
        covers: true_covers,
        leq,
        meet,
        join,
        top,
        bottom,
        height,
    })
}

fn m_idx(a: usize, b: usize, n: usize) -> usize {
    a * n + b
}

impl FiniteLattice {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    /// Meet of a set; the empty meet is the top element.
    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a set; the empty join is the bottom element.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn height(&self, x: usize) -> usize {
        self.height[x]
    }

    pub fn length(&self) -> usize {
        self.height[self.top]
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.up_covers(self.bottom)
    }

    pub fn dual_atoms(&self) -> Vec<usize> {
        self.down_covers(self.top)
    }

    pub fn up_covers(&self, x: usize) -> Vec<usize> {
        self.covers.iter().filter(|&&(a, _)| a == x).map(|&(_, b)| b).collect()
    }

    pub fn down_covers(&self, x: usize) -> Vec<usize> {
        self.covers.iter().filter(|&&(_, b)| b == x).map(|&(a, _)| a).collect()
    }

    pub fn upset(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.leq(x, y)).collect()
    }

    pub fn downset(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.leq(y, x)).collect()
    }

    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.leq(a, y) && self.leq(y, b)).collect()
    }

    /// Checks the diamond criterion: for every pair (a, b) the map
    /// `x -> x meet b` is a bijection `[a, a v b] -> [a ^ b, b]` with inverse
    /// `y -> a v y`. Equivalent to modularity; kept as the independent
    /// cross-check for `classify`.
    pub fn diamond_criterion(&self) -> bool {
        for a in 0..self.n {
            for b in 0..self.n {
                let top = self.join(a, b);
                let bot = self.meet(a, b);
                for x in self.interval(a, top) {
                    let y = self.meet(x, b);
                    if !(self.leq(bot, y) && self.leq(y, b)) || self.join(a, y) != x {
                        return false;
                    }
                }
                for y in self.interval(bot, b) {
                    let x = self.join(a, y);
                    if self.meet(x, b) != y {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Structural classification by direct evaluation of the defining
/// identities on all triples.
pub fn classify(lat: &FiniteLattice) -> Classification {
    let n = lat.n;
    let mut modular = true;
    'outer_m: for a in 0..n {
        for c in 0..n {
            if !lat.leq(a, c) {
                continue;
            }
            for b in 0..n {
                if lat.join(a, lat.meet(b, c)) != lat.meet(lat.join(a, b), c) {
                    modular = false;
                    break 'outer_m;
                }
            }
        }
    }
    let mut distributive = true;
    'outer_d: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if lat.join(a, lat.meet(b, c)) != lat.meet(lat.join(a, b), lat.join(a, c)) {
                    distributive = false;
                    break 'outer_d;
                }
            }
        }
    }
    let atoms = lat.atoms();
    let geometric = modular
        && (0..n).all(|x| {
            let j = lat.join_all(atoms.iter().copied().filter(|&a| lat.leq(a, x)));
            j == x
        });
    let meet_irreducibles = (0..n).filter(|&x| lat.up_covers(x).len() == 1).collect();
    Classification {
        modular,
        distributive,
        geometric,
        length: lat.length(),
        atoms,
        dual_atoms: lat.dual_atoms(),
        meet_irreducibles,
    }
}

/// Central elements: all `z` admitting a complement `z'` such that
/// `x -> (x v z, x v z')` is a bijection onto `[z, top] x [z', top]` whose
/// inverse is the meet. Returns a sorted id list; the result is checked to
/// be a Boolean sublattice.
pub fn center(lat: &FiniteLattice) -> Vec<usize> {
    let n = lat.n;
    let mut result = Vec::new();
    'cand: for z in 0..n {
        for zp in 0..n {
            if lat.meet(z, zp) != lat.bottom || lat.join(z, zp) != lat.top {
                continue;
            }
            if is_central_pair(lat, z, zp) {
                result.push(z);
                continue 'cand;
            }
        }
    }
    result.sort_unstable();
    // Boolean sublattice sanity: closed under the operations, complemented,
    // and distributive within the center.
    for &a in &result {
        for &b in &result {
            assert!(result.binary_search(&lat.meet(a, b)).is_ok());
            assert!(result.binary_search(&lat.join(a, b)).is_ok());
            for &c in &result {
                assert_eq!(
                    lat.join(a, lat.meet(b, c)),
                    lat.meet(lat.join(a, b), lat.join(a, c)),
                    "center is not distributive"
                );
            }
        }
        assert!(
            result
                .iter()
                .any(|&b| lat.meet(a, b) == lat.bottom && lat.join(a, b) == lat.top),
            "center element without complement"
        );
    }
    result
}

fn is_central_pair(lat: &FiniteLattice, z: usize, zp: usize) -> bool {
    let up_z = lat.upset(z);
    let up_zp = lat.upset(zp);
    if up_z.len() * up_zp.len() != lat.n {
        return false;
    }
    for &u in &up_z {
        for &v in &up_zp {
            let x = lat.meet(u, v);
            if lat.join(x, z) != u || lat.join(x, zp) != v {
                return false;
            }
        }
    }
    // injectivity follows from the inverse property together with the
    // cardinality match, but check surjective pairing explicitly
    let mut seen = vec![false; lat.n];
    for x in 0..lat.n {
        let u = lat.join(x, z);
        let v = lat.join(x, zp);
        if lat.meet(u, v) != x {
            return false;
        }
        if seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Dual atoms of the center, i.e. elements covered by the top within the
/// center sublattice. These index the directly irreducible factors.
pub fn center_dual_atoms(lat: &FiniteLattice) -> Vec<usize> {
    let c = center(lat);
    c.iter()
        .copied()
        .filter(|&z| {
            z != lat.top
                && c.iter().all(|&w| !(lat.lt(z, w) && lat.lt(w, lat.top)))
        })
        .collect()
}

/// Canonical internal decomposition into the upsets of the center dual
/// atoms. A directly irreducible lattice decomposes as itself.
pub fn decompose(lat: &FiniteLattice) -> Decomposition {
    let zs = center_dual_atoms(lat);
    if zs.is_empty() {
        // trivial lattice
        return Decomposition {
            factors: vec![(0..lat.n).collect()],
            witness: (0..lat.n).map(|x| vec![x]).collect(),
            internal: true,
        };
    }
    let factors: Vec<Vec<usize>> = zs.iter().map(|&z| lat.upset(z)).collect();
    let witness: Vec<Vec<usize>> = (0..lat.n)
        .map(|x| zs.iter().map(|&z| lat.join(x, z)).collect())
        .collect();
    let dec = Decomposition { factors, witness, internal: true };
    debug_assert!(decomposition_is_bijective(lat, &dec));
    dec
}

/// The witness map is a bijection onto the product of the factors and, for
/// internal decompositions, every element is the meet of its components.
pub fn decomposition_is_bijective(lat: &FiniteLattice, dec: &Decomposition) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    let mut size = 1usize;
    for f in &dec.factors {
        size = size.saturating_mul(f.len());
    }
    if size != lat.n {
        return false;
    }
    for x in 0..lat.n {
        let w = &dec.witness[x];
        if w.len() != dec.factors.len() {
            return false;
        }
        for (i, &c) in w.iter().enumerate() {
            if !dec.factors[i].contains(&c) {
                return false;
            }
        }
        if dec.internal && lat.meet_all(w.iter().copied()) != x {
            return false;
        }
        if !seen.insert(w.clone()) {
            return false;
        }
    }
    true
}

/// Checks dual independence and dual spanning of a set, and reflects a dual
/// frame into a frame.
pub fn dual_frame_check(
    lat: &FiniteLattice,
    xs: &[usize],
) -> Result<DualFrameReport, FinLatError> {
    if !classify(lat).modular {
        return Err(FinLatError::NotModular);
    }
    let k = xs.len();
    if k > 20 {
        return Err(FinLatError::InvalidInput("frame too large to check".into()));
    }
    let meet_of = |mask: usize| -> usize {
        lat.meet_all((0..k).filter(|i| mask >> i & 1 == 1).map(|i| xs[i]))
    };
    let mut independent = true;
    'indep: for ma in 0..(1usize << k) {
        for mb in 0..(1usize << k) {
            let lhs = lat.join(meet_of(ma), meet_of(mb));
            let rhs = meet_of(ma & mb);
            if lhs != rhs {
                independent = false;
                break 'indep;
            }
        }
    }
    let spanning = lat.meet_all(xs.iter().copied()) == lat.bottom;
    let reflected = if independent && spanning {
        // reflection of a dual frame into a frame: each member is replaced
        // by the meet of the others
        Some(
            (0..k)
                .map(|i| {
                    lat.meet_all((0..k).filter(|&j| j != i).map(|j| xs[j]))
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(DualFrameReport { independent, spanning, reflected })
}

/// Primarity test: in every interval, any two atoms are perspective.
pub fn is_primary(lat: &FiniteLattice) -> Result<bool, FinLatError> {
    if !classify(lat).modular {
        return Err(FinLatError::NotModular);
    }
    for x in 0..lat.n {
        for y in 0..lat.n {
            if !lat.leq(x, y) {
                continue;
            }
            let interval: Vec<usize> = lat.interval(x, y);
            let atoms: Vec<usize> = interval
                .iter()
                .copied()
                .filter(|&a| a != x && lat.up_covers(x).contains(&a))
                .collect();
            for (ai, &a) in atoms.iter().enumerate() {
                for &b in atoms.iter().skip(ai + 1) {
                    let perspective = interval.iter().any(|&z| {
                        lat.meet(a, z) == x
                            && lat.meet(b, z) == x
                            && lat.join(a, z) == lat.join(b, z)
                    });
                    if !perspective {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Extends a factorization of the smallest lattice of a chain of downset
/// embeddings to an external factorization of the largest one.
///
/// `chain` lists the lattices from smallest to largest and `embeddings[i]`
/// maps the ids of `chain[i]` into `chain[i+1]`; each image must be a
/// principal ideal. The returned decomposition lives on the largest lattice;
/// its factors intersect the smallest lattice in the base factors.
pub fn extend_factorization(
    chain: &[FiniteLattice],
    embeddings: &[Vec<usize>],
    base: &Decomposition,
) -> Result<Decomposition, FinLatError> {
    if chain.is_empty() {
        return Err(FinLatError::InvalidInput("empty chain".into()));
    }
    if embeddings.len() + 1 != chain.len() {
        return Err(FinLatError::InvalidInput(
            "need exactly one embedding per consecutive pair".into(),
        ));
    }
    if chain.len() == 1 {
        return Ok(base.clone());
    }
    // validate the downset embeddings and compose them to the largest lattice
    let mut maps: Vec<Vec<usize>> = Vec::with_capacity(chain.len());
    for (i, emb) in embeddings.iter().enumerate() {
        validate_downset_embedding(&chain[i], &chain[i + 1], emb)?;
    }
    // maps[i]: chain[i] -> largest
    let last = chain.len() - 1;
    for i in 0..chain.len() {
        let mut m: Vec<usize> = (0..chain[i].n).collect();
        for emb in embeddings.iter().skip(i) {
            m = m.into_iter().map(|x| emb[x]).collect();
        }
        maps.push(m);
    }
    let big = &chain[last];
    let k_top = maps[0][chain[0].top]; // top of the smallest lattice inside the largest

    let dec_big = decompose(big);
    let zs = center_dual_atoms(big);
    let k = zs.len().max(1);
    if base.factors.len() != k {
        return Err(FinLatError::FactorizationMismatch(format!(
            "base has {} factors, largest lattice decomposes into {}",
            base.factors.len(),
            k
        )));
    }
    if zs.is_empty() {
        // trivial largest lattice: everything collapses
        return Ok(dec_big);
    }

    // epsilon_i = component of the smallest top in the factorization of the
    // largest lattice; epsbar_i = meet of the others
    let eps: Vec<usize> = zs.iter().map(|&z| big.join(k_top, z)).collect();
    let epsbar: Vec<usize> = (0..k)
        .map(|i| big.meet_all((0..k).filter(|&j| j != i).map(|j| eps[j])))
        .collect();

    // induced internal factors of the smallest lattice, compared (as id sets
    // in the smallest lattice) against the base, up to factor order
    let small_ids: Vec<usize> = maps[0].clone();
    let induced: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..chain[0].n)
                .filter(|&x| {
                    let gx = small_ids[x];
                    (0..k).all(|j| j == i || big.join(gx, zs[j]) == eps[j])
                })
                .collect()
        })
        .collect();
    let mut base_sorted: Vec<Vec<usize>> = base.factors.clone();
    for f in base_sorted.iter_mut() {
        f.sort_unstable();
    }
    for ind in &induced {
        if !base_sorted.iter().any(|f| f == ind) {
            return Err(FinLatError::FactorizationMismatch(format!(
                "induced factor {ind:?} not present in the base factorization"
            )));
        }
    }

    // extended factors and the external isomorphism psi
    let factors: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            let mut f: Vec<usize> = big
                .upset(zs[i])
                .into_iter()
                .map(|y| big.meet(epsbar[i], y))
                .collect();
            f.sort_unstable();
            f.dedup();
            f
        })
        .collect();
    let psi = |x: usize| -> Vec<usize> {
        (0..k)
            .map(|i| big.meet(big.join(x, zs[i]), epsbar[i]))
            .collect()
    };
    let witness: Vec<Vec<usize>> = (0..big.n).map(&psi).collect();

    // the psi maps agree along the chain: psi computed through the induced
    // internal factorization of any intermediate ideal gives the same
    // components as psi computed in the largest lattice
    for (lvl, small) in chain.iter().enumerate().take(chain.len() - 1) {
        let l_top = maps[lvl][small.top];
        let eps_ml: Vec<usize> = zs.iter().map(|&z| big.join(l_top, z)).collect();
        let epsbar_ml: Vec<usize> = (0..k)
            .map(|i| big.meet_all((0..k).filter(|&j| j != i).map(|j| eps_ml[j])))
            .collect();
        // component of the smallest top inside the level's factorization
        let eps_lk: Vec<usize> = (0..k)
            .map(|i| big.meet(epsbar_ml[i], big.join(k_top, zs[i])))
            .collect();
        for x in 0..small.n {
            let gx = maps[lvl][x];
            let via_level: Vec<usize> = (0..k)
                .map(|i| {
                    let x_comp = big.meet(epsbar_ml[i], big.join(gx, zs[i]));
                    let epsbar_lk =
                        big.meet_all((0..k).filter(|&j| j != i).map(|j| eps_lk[j]));
                    big.meet(x_comp, epsbar_lk)
                })
                .collect();
            if via_level != witness[gx] {
                return Err(FinLatError::FactorizationMismatch(format!(
                    "psi maps disagree at level {lvl}, element {x}"
                )));
            }
        }
    }

    // factors restrict to the base factors inside the smallest lattice
    for (i, f) in factors.iter().enumerate() {
        let mut restricted: Vec<usize> = f
            .iter()
            .copied()
            .filter(|y| small_ids.contains(y))
            .collect();
        restricted.sort_unstable();
        let mut induced_img: Vec<usize> = induced[i].iter().map(|&x| small_ids[x]).collect();
        induced_img.sort_unstable();
        if restricted != induced_img {
            return Err(FinLatError::FactorizationMismatch(format!(
                "factor {i} does not restrict to the induced factor"
            )));
        }
    }

    let dec = Decomposition { factors, witness, internal: k == 1 };
    if !decomposition_is_bijective(big, &dec) {
        return Err(FinLatError::FactorizationMismatch(
            "extension witness is not bijective".into(),
        ));
    }
    Ok(dec)
}

fn validate_downset_embedding(
    small: &FiniteLattice,
    large: &FiniteLattice,
    emb: &[usize],
) -> Result<(), FinLatError> {
    if emb.len() != small.n {
        return Err(FinLatError::NotADownset("embedding has wrong length".into()));
    }
    let mut seen = vec![false; large.n];
    for &y in emb {
        if y >= large.n {
            return Err(FinLatError::NotADownset("image out of range".into()));
        }
        if seen[y] {
            return Err(FinLatError::NotADownset("embedding not injective".into()));
        }
        seen[y] = true;
    }
    for a in 0..small.n {
        for b in 0..small.n {
            if small.leq(a, b) != large.leq(emb[a], emb[b]) {
                return Err(FinLatError::NotADownset(format!(
                    "order not preserved at ({a},{b})"
                )));
            }
        }
    }
    // the image must be the principal ideal of the image of the top
    let ideal = large.downset(emb[small.top]);
    if ideal.len() != small.n {
        return Err(FinLatError::NotADownset(
            "image is not the full principal ideal of its top".into(),
        ));
    }
    // meets and joins must be preserved (sublattice condition)
    for a in 0..small.n {
        for b in 0..small.n {
            if emb[small.meet(a, b)] != large.meet(emb[a], emb[b])
                || emb[small.join(a, b)] != large.join(emb[a], emb[b])
            {
                return Err(FinLatError::NotADownset(format!(
                    "lattice operations not preserved at ({a},{b})"
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Constructions used by tests and the corpus
// ---------------------------------------------------------------------------

/// A chain with `n + 1` elements `0 < 1 < ... < n`.
pub fn chain(n: usize) -> FiniteLattice {
    let covers: Vec<(usize, usize)> = (0..n).map(|i| (i, i + 1)).collect();
    build_lattice(n + 1, &covers).unwrap()
}

/// The diamond M3: bottom, three incomparable atoms, top.
pub fn m3() -> FiniteLattice {
    build_lattice(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
}

/// The pentagon N5: 0 < a < c < 1 alongside 0 < b < 1.
pub fn n5() -> FiniteLattice {
    build_lattice(5, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]).unwrap()
}

/// Boolean lattice of subsets of a k-element set; ids are bitmasks.
pub fn boolean(k: usize) -> FiniteLattice {
    let n = 1usize << k;
    let mut covers = Vec::new();
    for x in 0..n {
        for b in 0..k {
            if x >> b & 1 == 0 {
                covers.push((x, x | (1 << b)));
            }
        }
    }
    build_lattice(n, &covers).unwrap()
}

/// External direct product, ids `x1 * n2 + x2`.
pub fn product(l1: &FiniteLattice, l2: &FiniteLattice) -> FiniteLattice {
    let n = l1.n * l2.n;
    let mut covers = Vec::new();
    for x1 in 0..l1.n {
        for x2 in 0..l2.n {
            for &(a, b) in l1.covers() {
                if a == x1 {
                    covers.push((x1 * l2.n + x2, b * l2.n + x2));
                }
            }
            for &(a, b) in l2.covers() {
                if a == x2 {
                    covers.push((x1 * l2.n + x2, x1 * l2.n + b));
                }
            }
        }
    }
    build_lattice(n, &covers).unwrap()
}

// ---------------------------------------------------------------------------
// JSON and DOT export
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeJson {
    pub n: usize,
    pub covers: Vec<(usize, usize)>,
}

impl FiniteLattice {
    pub fn to_json(&self) -> LatticeJson {
        LatticeJson { n: self.n, covers: self.covers.clone() }
    }

    pub fn from_json(j: &LatticeJson) -> Result<FiniteLattice, FinLatError> {
        build_lattice(j.n, &j.covers)
    }

    /// Hasse diagram in DOT format: edges run lower -> upper and elements
    /// of equal height share a rank.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=circle];\n");
        let max_h = self.length();
        for h in 0..=max_h {
            let level: Vec<String> = (0..self.n)
                .filter(|&x| self.height[x] == h)
                .map(|x| x.to_string())
                .collect();
            if !level.is_empty() {
                s.push_str(&format!("  {{ rank=same; {}; }}\n", level.join("; ")));
            }
        }
        for &(a, b) in &self.covers {
            s.push_str(&format!("  {a} -> {b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_two_chain() {
        let l = build_lattice(2, &[(0, 1)]).unwrap();
        assert_eq!(l.bottom(), 0);
        assert_eq!(l.top(), 1);
        assert_eq!(l.length(), 1);
    }

    #[test]
    fn build_rejects_cycle() {
        assert!(matches!(
            build_lattice(2, &[(0, 1), (1, 0)]),
            Err(FinLatError::CyclicCovers)
        ));
    }

    #[test]
    fn build_rejects_non_lattice() {
        // two maximal elements
        let r = build_lattice(4, &[(0, 1), (0, 2)]);
        assert!(matches!(r, Err(FinLatError::NotALattice(_))));
        // hexagon poset where two elements have no join
        let r = build_lattice(
            6,
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)],
        );
        assert!(matches!(r, Err(FinLatError::NotALattice(_))));
    }

    #[test]
    fn n5_is_a_lattice_but_not_modular() {
        let l = n5();
        let c = classify(&l);
        assert!(!c.modular);
        assert!(!c.distributive);
        assert!(!c.geometric);
    }

    #[test]
    fn classify_chain() {
        let l = chain(2);
        let c = classify(&l);
        assert!(c.modular);
        assert!(c.distributive);
        assert!(!c.geometric);
        assert_eq!(c.length, 2);
    }

    #[test]
    fn classify_m3() {
        let c = classify(&m3());
        assert!(c.modular);
        assert!(!c.distributive);
        assert!(c.geometric);
        assert_eq!(c.atoms, vec![1, 2, 3]);
        assert_eq!(c.dual_atoms, vec![1, 2, 3]);
    }

    #[test]
    fn modularity_matches_diamond_criterion() {
        for l in [chain(3), m3(), n5(), boolean(3), product(&m3(), &chain(1))] {
            assert_eq!(classify(&l).modular, l.diamond_criterion());
        }
    }

    #[test]
    fn center_examples() {
        assert_eq!(center(&m3()), vec![0, 4]);
        let b2 = boolean(2);
        assert_eq!(center(&b2), vec![0, 1, 2, 3]);
        let p = product(&m3(), &chain(1));
        assert_eq!(center(&p).len(), 4);
    }

    #[test]
    fn decompose_examples() {
        let b3 = boolean(3);
        let dec = decompose(&b3);
        assert_eq!(dec.factors.len(), 3);
        for f in &dec.factors {
            assert_eq!(f.len(), 2);
        }
        assert!(decomposition_is_bijective(&b3, &dec));

        let dec = decompose(&m3());
        assert_eq!(dec.factors.len(), 1);
        assert_eq!(dec.factors[0].len(), 5);

        let p = product(&m3(), &m3());
        let dec = decompose(&p);
        assert_eq!(dec.factors.len(), 2);
        for f in &dec.factors {
            assert_eq!(f.len(), 5);
        }
        assert!(decomposition_is_bijective(&p, &dec));
        // each factor is directly irreducible as a lattice of its own
        for f in &dec.factors {
            let sub = sublattice(&p, f);
            assert_eq!(center_dual_atoms(&sub).len(), 1);
        }
    }

    fn sublattice(lat: &FiniteLattice, ids: &[usize]) -> FiniteLattice {
        let pos = |x: usize| ids.iter().position(|&y| y == x).unwrap();
        let mut covers = Vec::new();
        for (i, &a) in ids.iter().enumerate() {
            for &b in ids.iter() {
                if a != b && lat.leq(a, b) {
                    let between = ids
                        .iter()
                        .any(|&c| c != a && c != b && lat.leq(a, c) && lat.leq(c, b));
                    if !between {
                        covers.push((i, pos(b)));
                    }
                }
            }
        }
        build_lattice(ids.len(), &covers).unwrap()
    }

    #[test]
    fn dual_frame_examples() {
        let b2 = boolean(2);
        let rep = dual_frame_check(&b2, &[1, 2]).unwrap();
        assert!(rep.independent && rep.spanning);
        // reflection recovers the frame and the reflected intervals match
        let refl = rep.reflected.unwrap();
        assert_eq!(refl, vec![2, 1]);

        let m = m3();
        let rep = dual_frame_check(&m, &[1, 2]).unwrap();
        assert!(rep.independent && rep.spanning);
        let rep = dual_frame_check(&m, &[1, 2, 3]).unwrap();
        assert!(!rep.independent);

        let l = chain(3);
        let rep = dual_frame_check(&l, &[l.top()]).unwrap();
        assert!(rep.independent);
        assert!(!rep.spanning);

        assert!(matches!(
            dual_frame_check(&n5(), &[1]),
            Err(FinLatError::NotModular)
        ));
    }

    #[test]
    fn reflected_frame_intervals_are_graded_isomorphic() {
        // in Boolean 2^3: dual atoms form a dual frame; reflection pairs
        // [0, reflected_i] with [x_i, 1]
        let b3 = boolean(3);
        let dual_atoms = b3.dual_atoms();
        let rep = dual_frame_check(&b3, &dual_atoms).unwrap();
        let refl = rep.reflected.unwrap();
        for (i, &x) in dual_atoms.iter().enumerate() {
            let below = b3.downset(refl[i]);
            let above = b3.upset(x);
            assert_eq!(below.len(), above.len());
            let mut hb: Vec<usize> = below.iter().map(|&y| b3.height(y)).collect();
            let mut ha: Vec<usize> =
                above.iter().map(|&y| b3.height(y) - b3.height(x)).collect();
            hb.sort_unstable();
            ha.sort_unstable();
            assert_eq!(hb, ha);
        }
    }

    #[test]
    fn primary_examples() {
        assert!(is_primary(&chain(4)).unwrap());
        assert!(is_primary(&m3()).unwrap());
        assert!(!is_primary(&boolean(2)).unwrap());
        assert!(matches!(is_primary(&n5()), Err(FinLatError::NotModular)));
    }

    #[test]
    fn extend_factorization_identity_and_k1() {
        let l = chain(2);
        let base = decompose(&l);
        let out = extend_factorization(&[l.clone()], &[], &base).unwrap();
        assert_eq!(out, base);

        // 2-chain inside 3-chain with the trivial single-factor base
        let small = chain(1);
        let large = chain(2);
        let base = decompose(&small);
        let out = extend_factorization(&[small, large.clone()], &[vec![0, 1]], &base).unwrap();
        assert_eq!(out.factors.len(), 1);
        assert_eq!(out.factors[0], (0..3).collect::<Vec<_>>());
    }

    #[test]
    fn extend_factorization_square_in_grid() {
        // Boolean 2^2 embedded as the ideal of the middle of a 3x3 grid
        let small = boolean(2); // ids: 0, 1=(a), 2=(b), 3=top
        let grid = product(&chain(2), &chain(2)); // ids x1*3+x2
        // embedding: (bits) -> (x1, x2) with x1, x2 in {0,1}
        let emb = vec![0, 3, 1, 4];
        let base = decompose(&small);
        let out = extend_factorization(&[small, grid.clone()], &[emb], &base).unwrap();
        assert_eq!(out.factors.len(), 2);
        for f in &out.factors {
            assert_eq!(f.len(), 3, "chain factors of length 2");
        }
        assert!(decomposition_is_bijective(&grid, &out));
        // factors intersect the square in its two top edges
        let square: Vec<usize> = vec![0, 1, 3, 4];
        for f in &out.factors {
            let inter: Vec<usize> =
                f.iter().copied().filter(|x| square.contains(x)).collect();
            assert_eq!(inter.len(), 2);
            assert!(inter.contains(&4));
        }
    }

    #[test]
    fn extend_factorization_rejects_bad_embedding() {
        let small = chain(1);
        let large = boolean(2);
        let base = decompose(&small);
        // image {0, 3} is not a downset
        let r = extend_factorization(&[small, large], &[vec![0, 3]], &base);
        assert!(matches!(r, Err(FinLatError::NotADownset(_))));
    }

    #[test]
    fn table_laws_hold() {
        for l in [chain(3), m3(), n5(), boolean(3)] {
            for a in 0..l.n() {
                for b in 0..l.n() {
                    assert_eq!(l.meet(a, b), l.meet(b, a));
                    assert_eq!(l.join(a, b), l.join(b, a));
                    assert_eq!(l.meet(a, l.join(a, b)), a, "absorption");
                    assert_eq!(l.join(a, l.meet(a, b)), a, "absorption");
                    for c in 0..l.n() {
                        assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
                        assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn json_and_dot() {
        let l = m3();
        let j = l.to_json();
        let l2 = FiniteLattice::from_json(&j).unwrap();
        assert_eq!(l, l2);
        let dot = l.to_dot();
        assert!(dot.contains("0 -> 1"));
        assert!(dot.contains("rank=same"));
    }
}
