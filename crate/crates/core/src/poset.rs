//! Finite ranked posets, Eulerian checks, g- and h-polynomials, strong
//! formal subdivisions and their local h-polynomials, twins-posets and
//! agglutination.

use std::collections::VecDeque;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;

/// Strongest structural class of a poset, from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosetClass {
    Unranked,
    Ranked,
    /// Ranked, all proper intervals Eulerian, but no minimum.
    LocallyEulerian,
    LowerEulerian,
    Eulerian,
}

impl PosetClass {
    pub fn is_locally_eulerian(self) -> bool {
        self >= PosetClass::LocallyEulerian
    }

    pub fn is_lower_eulerian(self) -> bool {
        self >= PosetClass::LowerEulerian
    }
}

type GTable = Vec<Option<IntPolynomial>>;

/// A finite poset stored by its up- and down-sets.
#[derive(Clone)]
pub struct FinitePoset {
    labels: Vec<String>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    covers: Vec<Vec<usize>>,
    rank: Option<Vec<i64>>,
    g_up: Vec<OnceLock<GTable>>,
    g_dual: Vec<OnceLock<GTable>>,
    class: OnceLock<PosetClass>,
}

impl std::fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinitePoset")
            .field("labels", &self.labels)
            .field("covers", &self.covers)
            .field("rank", &self.rank)
            .finish()
    }
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.up == other.up && self.rank == other.rank
    }
}

impl FinitePoset {
    /// Builds a poset from relations `a < b` (not necessarily covers).
    /// Ranks, when given, must increase by one along every cover; when
    /// absent they are inferred if the cover graph admits a rank function.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)], ranks: Option<Vec<i64>>) -> Result<Self> {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::precondition(format!("relation ({a},{b}) refers to a missing element")));
            }
            if a == b {
                return Err(Error::precondition(format!("relation ({a},{a}) is reflexive")));
            }
            succ[a].push(b);
            indeg[b] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &s in &succ[x] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    queue.push_back(s);
                }
            }
        }
        if order.len() != n {
            return Err(Error::precondition("relations contain a cycle"));
        }
        let mut up = vec![BitSet::new(); n];
        for &x in order.iter().rev() {
            let mut s = BitSet::from_indices([x]);
            for &y in &succ[x] {
                s = s.union(&up[y]);
            }
            up[x] = s;
        }
        let mut down = vec![BitSet::new(); n];
        for (x, u) in up.iter().enumerate() {
            for y in u.iter() {
                down[y].insert(x);
            }
        }
        let covers: Vec<Vec<usize>> = (0..n)
            .map(|x| up[x].iter().filter(|&y| y != x && up[x].intersection_len(&down[y]) == 2).collect())
            .collect();
        let rank = match ranks {
            Some(r) => {
                if r.len() != n {
                    return Err(Error::DimensionMismatch(format!("{} ranks for {n} elements", r.len())));
                }
                for x in 0..n {
                    for &y in &covers[x] {
                        if r[y] != r[x] + 1 {
                            return Err(Error::precondition(format!(
                                "rank jumps from {} to {} along the cover {} < {}",
                                r[x], r[y], labels[x], labels[y]
                            )));
                        }
                    }
                }
                Some(r)
            }
            None => infer_ranks(&covers),
        };
        Ok(FinitePoset {
            labels,
            up,
            down,
            covers,
            rank,
            g_up: (0..n).map(|_| OnceLock::new()).collect(),
            g_dual: (0..n).map(|_| OnceLock::new()).collect(),
            class: OnceLock::new(),
        })
    }

    /// Alias of [`FinitePoset::from_relations`] for cover lists.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)], ranks: Option<Vec<i64>>) -> Result<Self> {
        Self::from_relations(labels, covers, ranks)
    }

    /// Chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_relations((0..n).map(|i| i.to_string()).collect(), &rel, None).expect("chain")
    }

    /// Subsets of `{0..r-1}` ordered by inclusion; element `i` is the bit mask `i`.
    pub fn boolean(r: usize) -> Self {
        let n = 1usize << r;
        let mut rel = Vec::new();
        for s in 0..n {
            for b in 0..r {
                if s & (1 << b) == 0 {
                    rel.push((s, s | (1 << b)));
                }
            }
        }
        let labels = (0..n).map(|s| format!("{s:b}")).collect();
        let ranks = (0..n).map(|s| s.count_ones() as i64).collect();
        Self::from_relations(labels, &rel, Some(ranks)).expect("boolean lattice")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// `{y : y >= x}`.
    pub fn up_set(&self, x: usize) -> &BitSet {
        &self.up[x]
    }

    /// `{y : y <= x}`.
    pub fn down_set(&self, x: usize) -> &BitSet {
        &self.down[x]
    }

    pub fn interval(&self, x: usize, y: usize) -> BitSet {
        self.up[x].intersection(&self.down[y])
    }

    /// Upper covers of `x`.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.covers[x]
    }

    /// All cover pairs `(a, b)` with `a ⋖ b`.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for (a, c) in self.covers.iter().enumerate() {
            for &b in c {
                v.push((a, b));
            }
        }
        v
    }

    pub fn ranks(&self) -> Option<&[i64]> {
        self.rank.as_deref()
    }

    pub fn rank_of(&self, x: usize) -> i64 {
        self.rank.as_ref().expect("poset is ranked")[x]
    }

    pub fn is_ranked(&self) -> bool {
        self.rank.is_some()
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&x| self.up[x].len() == self.len())
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&x| self.down[x].len() == self.len())
    }

    /// Length of the longest chain inside `set`.
    pub fn rank_of_set(&self, set: &BitSet) -> i64 {
        match &self.rank {
            Some(r) => {
                let mut best = 0;
                for x in set.iter() {
                    for y in self.up[x].intersection(set).iter() {
                        best = best.max(r[y] - r[x]);
                    }
                }
                best
            }
            None => {
                // longest path in the cover graph restricted to the set
                let mut memo = vec![-1i64; self.len()];
                fn longest(p: &FinitePoset, set: &BitSet, x: usize, memo: &mut [i64]) -> i64 {
                    if memo[x] >= 0 {
                        return memo[x];
                    }
                    let mut best = 0;
                    for y in p.up[x].intersection(set).iter() {
                        if y != x {
                            best = best.max(1 + longest(p, set, y, memo));
                        }
                    }
                    memo[x] = best;
                    best
                }
                set.iter().map(|x| longest(self, set, x, &mut memo)).max().unwrap_or(0)
            }
        }
    }

    /// Length of the longest chain.
    pub fn poset_rank(&self) -> i64 {
        self.rank_of_set(&BitSet::full(self.len()))
    }

    pub fn class(&self) -> PosetClass {
        *self.class.get_or_init(|| self.compute_class())
    }

    fn compute_class(&self) -> PosetClass {
        let Some(r) = &self.rank else { return PosetClass::Unranked };
        for x in 0..self.len() {
            for y in self.up[x].iter() {
                if y == x {
                    continue;
                }
                let s: i64 = self.interval(x, y).iter().map(|z| if r[z] % 2 == 0 { 1 } else { -1 }).sum();
                if s != 0 {
                    return PosetClass::Ranked;
                }
            }
        }
        match (self.bottom(), self.top()) {
            (Some(_), Some(_)) => PosetClass::Eulerian,
            (Some(_), None) => PosetClass::LowerEulerian,
            _ => PosetClass::LocallyEulerian,
        }
    }

    /// True for a boolean lattice (of any rank).
    pub fn is_boolean(&self) -> bool {
        let Some(b) = self.bottom() else { return false };
        let atoms: Vec<usize> = self.covers[b].clone();
        if atoms.len() >= 63 || self.len() != 1usize << atoms.len() {
            return false;
        }
        let sig = |x: usize| -> u64 {
            atoms.iter().enumerate().filter(|(_, &a)| self.leq(a, x)).fold(0, |m, (i, _)| m | (1 << i))
        };
        let sigs: Vec<u64> = (0..self.len()).map(sig).collect();
        let mut seen = sigs.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.len() {
            return false;
        }
        (0..self.len()).all(|x| (0..self.len()).all(|y| self.leq(x, y) == (sigs[x] & !sigs[y] == 0)))
    }

    /// Induced subposet on `keep`, with the map new index -> old index.
    pub fn subposet(&self, keep: &BitSet) -> (FinitePoset, Vec<usize>) {
        let old: Vec<usize> = keep.iter().collect();
        let mut new_of = vec![usize::MAX; self.len()];
        for (i, &o) in old.iter().enumerate() {
            new_of[o] = i;
        }
        let mut rel = Vec::new();
        for (i, &o) in old.iter().enumerate() {
            for y in self.up[o].intersection(keep).iter() {
                if y != o {
                    rel.push((i, new_of[y]));
                }
            }
        }
        let labels: Vec<String> = old.iter().map(|&o| self.labels[o].clone()).collect();
        let ranks = self.rank.as_ref().map(|r| old.iter().map(|&o| r[o]).collect::<Vec<_>>());
        let p = FinitePoset::from_relations(labels.clone(), &rel, ranks)
            .or_else(|_| FinitePoset::from_relations(labels, &rel, None))
            .expect("subposet of a poset is a poset");
        (p, old)
    }

    /// The dual poset, ranks negated.
    pub fn dual(&self) -> FinitePoset {
        let rel: Vec<(usize, usize)> = self.cover_pairs().into_iter().map(|(a, b)| (b, a)).collect();
        let ranks = self.rank.as_ref().map(|r| r.iter().map(|x| -x).collect());
        FinitePoset::from_relations(self.labels.clone(), &rel, ranks).expect("dual of a poset")
    }

    fn max_rank_span(&self) -> usize {
        match &self.rank {
            Some(r) if !r.is_empty() => (r.iter().max().unwrap() - r.iter().min().unwrap()) as usize,
            _ => 0,
        }
    }

    fn g_table(&self, base: usize, dual: bool) -> &GTable {
        let cell = if dual { &self.g_dual[base] } else { &self.g_up[base] };
        cell.get_or_init(|| self.compute_g(base, dual))
    }

    fn compute_g(&self, base: usize, dual: bool) -> GTable {
        let rank = self.rank.as_ref().expect("g-polynomials need a rank function");
        let (reach, back) = if dual { (&self.down, &self.up) } else { (&self.up, &self.down) };
        let r = |z: usize| -> usize { (if dual { rank[base] - rank[z] } else { rank[z] - rank[base] }) as usize };
        let pow: Vec<IntPolynomial> = (0..=self.max_rank_span()).map(IntPolynomial::t_minus_one_pow).collect();
        let mut elems: Vec<usize> = reach[base].iter().collect();
        elems.sort_by_key(|&z| r(z));
        let mut out: GTable = vec![None; self.len()];
        for &y in &elems {
            let ny = r(y);
            if ny == 0 {
                out[y] = Some(IntPolynomial::one());
                continue;
            }
            let mut s = IntPolynomial::zero();
            for z in reach[base].intersection(&back[y]).iter() {
                if z == y {
                    continue;
                }
                let gz = out[z].as_ref().expect("smaller intervals come first");
                s += &(gz * &pow[ny - r(z)]);
            }
            let coeffs: Vec<i64> = (0..).take_while(|i| 2 * i < ny).map(|i| -s.coeff(i)).collect();
            out[y] = Some(IntPolynomial::new(coeffs));
        }
        out
    }

    /// `g([x, y])`, assuming the interval is Eulerian.
    pub fn interval_g(&self, x: usize, y: usize) -> IntPolynomial {
        assert!(self.leq(x, y), "interval needs x <= y");
        self.g_table(x, false)[y].clone().expect("computed")
    }

    /// `g([x, y]^*)`, assuming the interval is Eulerian.
    pub fn dual_interval_g(&self, x: usize, y: usize) -> IntPolynomial {
        assert!(self.leq(x, y), "interval needs x <= y");
        self.g_table(y, true)[x].clone().expect("computed")
    }

    /// g-polynomial of an Eulerian poset.
    pub fn g_polynomial(&self) -> Result<IntPolynomial> {
        if self.class() != PosetClass::Eulerian {
            return Err(Error::precondition(format!("g-polynomial needs an Eulerian poset, got {:?}", self.class())));
        }
        Ok(self.interval_g(self.bottom().unwrap(), self.top().unwrap()))
    }

    /// h-polynomial of a lower Eulerian poset.
    pub fn h_polynomial(&self) -> Result<IntPolynomial> {
        if !self.class().is_lower_eulerian() {
            return Err(Error::precondition(format!(
                "h-polynomial needs a lower Eulerian poset, got {:?}",
                self.class()
            )));
        }
        Ok(self.h_lower_set(self.bottom().unwrap(), &BitSet::full(self.len())))
    }

    /// h-polynomial of the lower Eulerian poset `elems`, whose minimum is
    /// `base` and whose intervals are intervals of `self`.
    pub fn h_lower_set(&self, base: usize, elems: &BitSet) -> IntPolynomial {
        let rank = self.rank.as_ref().expect("h-polynomials need a rank function");
        let g = self.g_table(base, false);
        let n = elems.iter().map(|z| rank[z] - rank[base]).max().unwrap_or(0) as usize;
        let mut s = IntPolynomial::zero();
        for z in elems.iter() {
            let rz = (rank[z] - rank[base]) as usize;
            s += &(g[z].as_ref().expect("element above base") * &IntPolynomial::t_minus_one_pow(n - rz));
        }
        s.reverse(n)
    }

    /// Twins-poset `R ⊔ R⁻`. Index `i` is the lower copy of element `i`
    /// and `len + i` its upper copy; the upper copy has rank one higher.
    pub fn twins(&self) -> Result<FinitePoset> {
        let Some(r) = &self.rank else {
            return Err(Error::precondition("twins-poset needs a ranked poset"));
        };
        let n = self.len();
        let mut rel = Vec::new();
        for (a, b) in self.cover_pairs() {
            rel.push((a, b));
            rel.push((n + a, n + b));
        }
        for i in 0..n {
            rel.push((i, n + i));
        }
        let labels = self.labels.iter().map(|l| format!("{l}-")).chain(self.labels.iter().cloned()).collect();
        let ranks = r.iter().copied().chain(r.iter().map(|x| x + 1)).collect();
        FinitePoset::from_relations(labels, &rel, Some(ranks))
    }

    /// If `self` is a twins-poset in the layout of [`FinitePoset::twins`],
    /// returns the poset it was born from (the upper copy).
    pub fn twins_base(&self) -> Option<FinitePoset> {
        if !self.len().is_multiple_of(2) || !self.is_ranked() {
            return None;
        }
        let half = self.len() / 2;
        let upper: BitSet = (half..self.len()).collect();
        let (r_plus, _) = self.subposet(&upper);
        let r_plus_ranks: Vec<i64> = r_plus.ranks()?.iter().map(|x| x - 1).collect();
        let base = FinitePoset::from_relations(r_plus.labels.clone(), &r_plus.cover_pairs(), Some(r_plus_ranks)).ok()?;
        let t = base.twins().ok()?;
        (t.up == self.up && t.rank == self.rank).then_some(r_plus)
    }
}

fn infer_ranks(covers: &[Vec<usize>]) -> Option<Vec<i64>> {
    let n = covers.len();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (a, c) in covers.iter().enumerate() {
        for &b in c {
            adj[a].push((b, 1));
            adj[b].push((a, -1));
        }
    }
    let mut rank: Vec<Option<i64>> = vec![None; n];
    for s in 0..n {
        if rank[s].is_some() {
            continue;
        }
        rank[s] = Some(0);
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let rx = rank[x].unwrap();
            for &(y, d) in &adj[x] {
                match rank[y] {
                    None => {
                        rank[y] = Some(rx + d);
                        comp.push(y);
                        queue.push_back(y);
                    }
                    Some(ry) if ry != rx + d => return None,
                    _ => {}
                }
            }
        }
        let m = comp.iter().map(|&x| rank[x].unwrap()).min().unwrap();
        for &x in &comp {
            rank[x] = Some(rank[x].unwrap() - m);
        }
    }
    Some(rank.into_iter().map(|r| r.unwrap()).collect())
}

/// Classifies a poset by direct interval scans.
pub fn check_eulerian(p: &FinitePoset) -> PosetClass {
    p.class()
}

pub fn g_polynomial(p: &FinitePoset) -> Result<IntPolynomial> {
    p.g_polynomial()
}

pub fn h_polynomial(p: &FinitePoset) -> Result<IntPolynomial> {
    p.h_polynomial()
}

pub fn twins_poset(p: &FinitePoset) -> Result<FinitePoset> {
    p.twins()
}

/// Glues `g1` and `g2` along the shared lower set given as index pairs
/// `(in g1, in g2)`. Returns the glued poset, whose first `g1.len()`
/// elements are those of `g1`, and the position of each `g2` element in it.
pub fn agglutinate_posets(
    g1: &FinitePoset,
    g2: &FinitePoset,
    shared: &[(usize, usize)],
) -> Result<(FinitePoset, Vec<usize>)> {
    let b1: BitSet = shared.iter().map(|p| p.0).collect();
    let b2: BitSet = shared.iter().map(|p| p.1).collect();
    if b1.len() != shared.len() || b2.len() != shared.len() {
        return Err(Error::precondition("shared boundary pairs are not a bijection"));
    }
    if shared.iter().any(|&(a, b)| a >= g1.len() || b >= g2.len()) {
        return Err(Error::precondition("shared boundary refers to a missing element"));
    }
    for (name, p, b) in [("first", g1, &b1), ("second", g2, &b2)] {
        if b.iter().any(|x| !p.down_set(x).is_subset(b)) {
            return Err(Error::precondition(format!("boundary is not a lower set of the {name} poset")));
        }
    }
    for &(a, b) in shared {
        for &(c, d) in shared {
            if g1.leq(a, c) != g2.leq(b, d) {
                return Err(Error::precondition("boundary order differs between the two posets"));
            }
        }
    }
    let n1 = g1.len();
    let mut map2 = vec![usize::MAX; g2.len()];
    for &(a, b) in shared {
        map2[b] = a;
    }
    let mut next = n1;
    for m in map2.iter_mut() {
        if *m == usize::MAX {
            *m = next;
            next += 1;
        }
    }
    let mut labels: Vec<String> = g1.labels.clone();
    labels.resize(next, String::new());
    for j in 0..g2.len() {
        if map2[j] >= n1 {
            labels[map2[j]] = format!("{}'", g2.labels[j]);
        }
    }
    let mut rel = g1.cover_pairs();
    rel.extend(g2.cover_pairs().into_iter().map(|(a, b)| (map2[a], map2[b])));
    let ranks = match (&g1.rank, &g2.rank) {
        (Some(r1), Some(r2)) => {
            if shared.iter().any(|&(a, b)| r1[a] != r2[b]) {
                return Err(Error::precondition("boundary ranks differ between the two posets"));
            }
            let mut r = r1.clone();
            r.resize(next, 0);
            for j in 0..g2.len() {
                r[map2[j]] = r2[j];
            }
            Some(r)
        }
        _ => None,
    };
    Ok((FinitePoset::from_relations(labels, &rel, ranks)?, map2))
}

/// An order-preserving, rank-increasing map `σ: Γ -> B`, optionally with
/// a boundary lower set `Γ_B ⊆ Γ`.
#[derive(Debug, Clone)]
pub struct SubdivisionMap {
    source: FinitePoset,
    target: FinitePoset,
    sigma: Vec<usize>,
    boundary: Option<BitSet>,
}

impl SubdivisionMap {
    pub fn new(source: FinitePoset, target: FinitePoset, sigma: Vec<usize>, boundary: Option<BitSet>) -> Result<Self> {
        if sigma.len() != source.len() {
            return Err(Error::DimensionMismatch(format!(
                "sigma has {} entries for {} source elements",
                sigma.len(),
                source.len()
            )));
        }
        if let Some(&x) = sigma.iter().find(|&&x| x >= target.len()) {
            return Err(Error::precondition(format!("sigma maps to missing target element {x}")));
        }
        let (Some(rs), Some(rt)) = (source.ranks(), target.ranks()) else {
            return Err(Error::precondition("subdivision map needs ranked source and target"));
        };
        for y in 0..source.len() {
            if rs[y] > rt[sigma[y]] {
                return Err(Error::precondition(format!(
                    "sigma is not rank-increasing at {}",
                    source.label(y)
                )));
            }
            for y2 in source.up_set(y).iter() {
                if !target.leq(sigma[y], sigma[y2]) {
                    return Err(Error::precondition(format!(
                        "sigma is not order-preserving on {} <= {}",
                        source.label(y),
                        source.label(y2)
                    )));
                }
            }
        }
        if let Some(b) = &boundary {
            if b.iter().any(|x| x >= source.len() || !source.down_set(x).is_subset(b)) {
                return Err(Error::precondition("boundary is not a lower set of the source"));
            }
            if source.rank_of_set(b) != source.poset_rank() - 1 {
                return Err(Error::precondition(format!(
                    "boundary has rank {}, expected {}",
                    source.rank_of_set(b),
                    source.poset_rank() - 1
                )));
            }
        }
        Ok(SubdivisionMap { source, target, sigma, boundary })
    }

    pub fn source(&self) -> &FinitePoset {
        &self.source
    }

    pub fn target(&self) -> &FinitePoset {
        &self.target
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn boundary(&self) -> Option<&BitSet> {
        self.boundary.as_ref()
    }

    /// `ρ_B(0̂_B) - ρ_Γ(0̂_Γ)` when both have a minimum.
    pub fn rank(&self) -> Option<i64> {
        Some(self.target.rank_of(self.target.bottom()?) - self.source.rank_of(self.source.bottom()?))
    }

    /// Strong surjectivity plus the alternating-sum condition, checked on
    /// every admissible pair `(y, x)`.
    pub fn is_strong_formal_subdivision(&self) -> bool {
        if !self.source.class().is_locally_eulerian() || !self.target.class().is_locally_eulerian() {
            return false;
        }
        let mut hit = BitSet::new();
        for &x in &self.sigma {
            hit.insert(x);
        }
        if hit.len() != self.target.len() {
            return false;
        }
        let rs = self.source.ranks().unwrap();
        let rt = self.target.ranks().unwrap();
        for y in 0..self.source.len() {
            for x in self.target.up_set(self.sigma[y]).iter() {
                let mut reached = false;
                let mut sum = 0i64;
                for y2 in self.source.up_set(y).iter() {
                    if self.sigma[y2] != x {
                        continue;
                    }
                    if rs[y2] == rt[x] {
                        reached = true;
                    }
                    sum += if (rt[x] - rs[y2]) % 2 == 0 { 1 } else { -1 };
                }
                if !reached || sum != 1 {
                    return false;
                }
            }
        }
        true
    }

    /// `(Γ_{≥y})_x = {y' >= y : σ(y') <= x}`.
    pub fn restricted_source(&self, x: usize, y: usize) -> BitSet {
        self.source.up_set(y).iter().filter(|&y2| self.target.leq(self.sigma[y2], x)).collect()
    }

    /// `l_B(Γ, x, y; t)`; zero when `σ(y) ≰ x`.
    pub fn local_h_at(&self, x: usize, y: usize) -> Result<IntPolynomial> {
        if !self.target.class().is_locally_eulerian() {
            return Err(Error::precondition("local h-polynomial needs a locally Eulerian target"));
        }
        if !self.source.is_ranked() {
            return Err(Error::precondition("local h-polynomial needs a ranked source"));
        }
        let sy = self.sigma[y];
        if !self.target.leq(sy, x) {
            return Ok(IntPolynomial::zero());
        }
        let rt = self.target.ranks().unwrap();
        let mut total = IntPolynomial::zero();
        for x2 in self.target.interval(sy, x).iter() {
            let h = self.source.h_lower_set(y, &self.restricted_source(x2, y));
            let g = self.target.dual_interval_g(x2, x);
            let term = &h * &g;
            if (rt[x] - rt[x2]) % 2 == 0 {
                total += &term;
            } else {
                total -= &term;
            }
        }
        Ok(total)
    }

    /// `l_B(Γ; t)` at `x = 1̂_B`, `y = 0̂_Γ`.
    pub fn local_h(&self) -> Result<IntPolynomial> {
        let x = self.target.top().ok_or_else(|| Error::precondition("target has no maximum"))?;
        let y = self.source.bottom().ok_or_else(|| Error::precondition("source has no minimum"))?;
        self.local_h_at(x, y)
    }

    /// `σ_B: Γ_B -> σ(Γ_B)`, with source and target reindexed. Returns the
    /// map and the original source indices.
    pub fn restrict_to_boundary(&self) -> Result<(SubdivisionMap, Vec<usize>)> {
        let b = self.boundary.as_ref().ok_or_else(|| Error::precondition("map has no boundary"))?;
        let (src, old_src) = self.source.subposet(b);
        let image: BitSet = b.iter().map(|y| self.sigma[y]).collect();
        let (tgt, old_tgt) = self.target.subposet(&image);
        let mut new_t = vec![usize::MAX; self.target.len()];
        for (i, &o) in old_tgt.iter().enumerate() {
            new_t[o] = i;
        }
        let sigma = old_src.iter().map(|&y| new_t[self.sigma[y]]).collect();
        Ok((SubdivisionMap::new(src, tgt, sigma, None)?, old_src))
    }

    /// Like [`SubdivisionMap::is_strong_formal_subdivision`], also checking
    /// the restriction to the boundary.
    pub fn is_strong_formal_subdivision_with_boundary(&self) -> bool {
        self.is_strong_formal_subdivision()
            && self.restrict_to_boundary().is_ok_and(|(r, _)| r.is_strong_formal_subdivision())
    }
}

pub fn is_strong_formal_subdivision(s: &SubdivisionMap) -> bool {
    s.is_strong_formal_subdivision()
}

/// Glues two subdivisions with boundary into a common twins target along
/// their shared boundary; the result maps onto the upper copy `R` of the
/// twins target. Returns the glued map and the position of each element of
/// the second source in the glued source.
pub fn agglutinate_sfs(
    s1: &SubdivisionMap,
    s2: &SubdivisionMap,
    shared: &[(usize, usize)],
) -> Result<(SubdivisionMap, Vec<usize>)> {
    if s1.target != s2.target {
        return Err(Error::precondition("the two subdivisions have different targets"));
    }
    let Some(base) = s1.target.twins_base() else {
        return Err(Error::precondition("target is not a twins-poset"));
    };
    let half = base.len();
    let (Some(b1), Some(b2)) = (&s1.boundary, &s2.boundary) else {
        return Err(Error::precondition("both subdivisions need a boundary"));
    };
    let sb1: BitSet = shared.iter().map(|p| p.0).collect();
    let sb2: BitSet = shared.iter().map(|p| p.1).collect();
    if &sb1 != b1 || &sb2 != b2 {
        return Err(Error::precondition("shared pairs do not match the two boundaries"));
    }
    if shared.iter().any(|&(a, b)| s1.sigma[a] != s2.sigma[b]) {
        return Err(Error::precondition("boundary maps differ"));
    }
    for (s, b) in [(s1, b1), (s2, b2)] {
        for y in 0..s.source.len() {
            if b.contains(y) != (s.sigma[y] < half) {
                return Err(Error::precondition("boundary must map to the lower twin and the rest to the upper"));
            }
        }
    }
    let (glued, map2) = agglutinate_posets(&s1.source, &s2.source, shared)?;
    let mut sigma = vec![0; glued.len()];
    for y in 0..s1.source.len() {
        sigma[y] = s1.sigma[y] % half;
    }
    for y in 0..s2.source.len() {
        sigma[map2[y]] = s2.sigma[y] % half;
    }
    Ok((SubdivisionMap::new(glued, base, sigma, None)?, map2))
}
