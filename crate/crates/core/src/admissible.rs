//! Admissible sets for the minuscule cocharacter `μ = (1^g, 0^g)` and their
//! quotients by parahoric Weyl subgroups `W_K`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weyl::{ExtAffineElement, SignedPermutation, TranslationVector, WeylGroup};

/// A parahoric level, given by the vertices `J ∩ [0, g]` of a periodic,
/// symmetric index set `J = {±v + 2gZ}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ParahoricType {
    g: usize,
    vertices: BTreeSet<usize>,
}

impl ParahoricType {
    pub fn new(g: usize, vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidParahoric("g must be positive".into()));
        }
        let vertices: BTreeSet<usize> = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(Error::InvalidParahoric("empty vertex set".into()));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v > g) {
            return Err(Error::InvalidParahoric(format!("vertex {v} exceeds g = {g}")));
        }
        Ok(ParahoricType { g, vertices })
    }

    pub fn hyperspecial(g: usize) -> Self {
        Self::new(g, [0]).expect("valid")
    }

    pub fn siegel(g: usize) -> Self {
        Self::new(g, [0, g]).expect("valid")
    }

    pub fn iwahori(g: usize) -> Self {
        Self::new(g, 0..=g).expect("valid")
    }

    /// Resolves `hyperspecial`, `siegel`, `iwahori`, and for `g = 2` also
    /// `klingen` and `paramodular`.
    pub fn named(g: usize, name: &str) -> Result<Self> {
        match (name, g) {
            ("hyperspecial" | "hs", _) => Ok(Self::hyperspecial(g)),
            ("siegel", _) => Self::new(g, [0, g]),
            ("iwahori", _) => Ok(Self::iwahori(g)),
            ("klingen", 2) => Self::new(2, [0, 1]),
            ("paramodular", 2) => Self::new(2, [1]),
            _ => Err(Error::InvalidParahoric(format!("no named type {name:?} for g = {g}"))),
        }
    }

    /// The five standard types at `g = 2`, paired with their names.
    pub fn standard_types_g2() -> Vec<(&'static str, Self)> {
        ["hyperspecial", "paramodular", "klingen", "siegel", "iwahori"]
            .into_iter()
            .map(|n| (n, Self::named(2, n).expect("valid")))
            .collect()
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn contains(&self, j: i64) -> bool {
        let n = 2 * self.g as i64;
        let r = j.rem_euclid(n) as usize;
        self.vertices.contains(&r) || self.vertices.contains(&(n as usize - r))
    }

    /// `J ∩ [0, 2g)`, ascending.
    pub fn positions(&self) -> Vec<usize> {
        (0..2 * self.g).filter(|&j| self.contains(j as i64)).collect()
    }

    /// `J ∩ [lo, hi]`, ascending.
    pub fn positions_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&j| self.contains(j)).collect()
    }

    /// Indices `i` of the simple reflections generating `W_K`: the
    /// complement of the vertices in `{0, …, g}`.
    pub fn wk_generators(&self) -> Vec<usize> {
        (0..=self.g).filter(|i| !self.vertices.contains(i)).collect()
    }
}

impl fmt::Display for ParahoricType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "g={} vertices={{{}}}", self.g, v.join(","))
    }
}

/// A coset (left or double) of `W_K`, tagged by its minimal-length element.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CosetTag {
    pub min_rep: ExtAffineElement,
    /// Sorted descending.
    pub members: Vec<ExtAffineElement>,
}

/// `t_μ = (id, (1^g, 0^g))`.
pub fn mu_translation(g: usize) -> ExtAffineElement {
    let nu = (0..2 * g).map(|p| i32::from(p < g)).collect();
    ExtAffineElement::translation(TranslationVector::new(nu).expect("pair sums are 1"))
}

/// `{t_{qμ} : q ∈ W}`, sorted descending.
pub fn weyl_orbit_translations(g: usize) -> Vec<ExtAffineElement> {
    let mu = mu_translation(g);
    let set: BTreeSet<_> = SignedPermutation::all(g)
        .into_iter()
        .map(|q| {
            let nu = TranslationVector::new(q.permute(mu.nu().values())).expect("W preserves Y");
            ExtAffineElement::translation(nu)
        })
        .collect();
    set.into_iter().rev().collect()
}

/// The vector criterion: `c(ν) = 1` and every coordinate of
/// `π(ω_i) + ν - ω_i` lies in `{0, 1}` for `0 <= i < 2g`.
///
/// The Ω-condition is not implied by the `ω_i` conditions: `(id, 1^{2g})`
/// and the identity satisfy those too.
pub fn admissible_kr_criterion(w: &ExtAffineElement) -> bool {
    w.omega_index() == 1 && (0..2 * w.g()).all(|i| w.omega_displacement(i).iter().all(|&x| x == 0 || x == 1))
}

/// The definition: `w <= t_{qμ}` in the Bruhat order for some `q ∈ W`.
pub fn admissible_by_bruhat(wg: &WeylGroup, w: &ExtAffineElement) -> bool {
    weyl_orbit_translations(wg.g()).iter().any(|t| wg.bruhat_leq(w, t))
}

/// All `(π, ν)` with `π ∈ W` and `ν ∈ {0,1}^{2g} ∩ Y`, sorted descending.
pub fn enumeration_domain(g: usize) -> Vec<ExtAffineElement> {
    let perms = SignedPermutation::all(g);
    let mut out = Vec::new();
    for mask in 0u64..(1 << (2 * g)) {
        let nu: Vec<i32> = (0..2 * g).map(|p| (mask >> (2 * g - 1 - p) & 1) as i32).collect();
        if let Ok(nu) = TranslationVector::new(nu) {
            for pi in &perms {
                out.push(ExtAffineElement::new(pi.clone(), nu.clone()).expect("same g"));
            }
        }
    }
    out.sort();
    out.reverse();
    out
}

/// `Adm({μ})`, sorted descending.
pub fn admissible_set(g: usize) -> Vec<ExtAffineElement> {
    enumeration_domain(g).into_iter().filter(admissible_kr_criterion).collect()
}

fn sorted_desc(set: impl IntoIterator<Item = ExtAffineElement>) -> Vec<ExtAffineElement> {
    let set: BTreeSet<_> = set.into_iter().collect();
    set.into_iter().rev().collect()
}

/// Whether `w` is the minimal-length element of `W_K w`.
pub fn is_left_minimal(wg: &WeylGroup, k: &ParahoricType, w: &ExtAffineElement) -> bool {
    let l = wg.length(w);
    k.wk_generators().into_iter().all(|i| wg.length(&wg.simple_reflection(i).mul_unchecked(w)) > l)
}

/// Precomputed `W_K` together with helpers for cosets.
pub struct ParahoricWeyl<'a> {
    wg: &'a WeylGroup,
    k: ParahoricType,
    wk: Vec<ExtAffineElement>,
}

impl<'a> ParahoricWeyl<'a> {
    pub fn new(wg: &'a WeylGroup, k: &ParahoricType) -> Result<Self> {
        if k.g() != wg.g() {
            return Err(Error::DimensionMismatch { expected: wg.g(), found: k.g() });
        }
        let wk = wg.parabolic_subgroup(&k.wk_generators());
        Ok(ParahoricWeyl { wg, k: k.clone(), wk })
    }

    pub fn weyl(&self) -> &'a WeylGroup {
        self.wg
    }

    pub fn parahoric(&self) -> &ParahoricType {
        &self.k
    }

    /// Elements of `W_K`, by increasing length.
    pub fn wk(&self) -> &[ExtAffineElement] {
        &self.wk
    }

    pub fn left_coset(&self, w: &ExtAffineElement) -> Vec<ExtAffineElement> {
        sorted_desc(self.wk.iter().map(|x| x.mul_unchecked(w)))
    }

    pub fn double_coset(&self, w: &ExtAffineElement) -> Vec<ExtAffineElement> {
        let left: Vec<_> = self.wk.iter().map(|x| x.mul_unchecked(w)).collect();
        sorted_desc(left.iter().flat_map(|xw| self.wk.iter().map(move |y| xw.mul_unchecked(y))))
    }

    /// The unique element of minimal length; two minima are an error.
    fn unique_extremum(&self, coset: &[ExtAffineElement], max: bool) -> Result<ExtAffineElement> {
        let lens: Vec<u32> = coset.iter().map(|x| self.wg.length(x)).collect();
        let target = if max { lens.iter().max() } else { lens.iter().min() }
            .copied()
            .ok_or_else(|| Error::Internal("empty coset".into()))?;
        let mut hits = coset.iter().zip(&lens).filter(|(_, &l)| l == target).map(|(x, _)| x);
        let first = hits.next().expect("extremum attained").clone();
        if let Some(second) = hits.next() {
            return Err(Error::Internal(format!("coset has two extremal elements {first} and {second}")));
        }
        Ok(first)
    }

    pub fn left_min_rep(&self, w: &ExtAffineElement) -> Result<ExtAffineElement> {
        self.unique_extremum(&self.left_coset(w), false)
    }

    pub fn double_min_rep(&self, w: &ExtAffineElement) -> Result<ExtAffineElement> {
        self.unique_extremum(&self.double_coset(w), false)
    }

    pub fn double_max_rep(&self, w: &ExtAffineElement) -> Result<ExtAffineElement> {
        self.unique_extremum(&self.double_coset(w), true)
    }

    pub fn is_left_minimal(&self, w: &ExtAffineElement) -> bool {
        is_left_minimal(self.wg, &self.k, w)
    }

    /// Partitions `elements` into left cosets `W_K w`.
    pub fn min_length_reps(&self, elements: &[ExtAffineElement]) -> Result<Vec<CosetTag>> {
        let mut groups: BTreeMap<ExtAffineElement, Vec<ExtAffineElement>> = BTreeMap::new();
        for w in elements {
            groups.entry(self.left_min_rep(w)?).or_default().push(w.clone());
        }
        Ok(groups
            .into_iter()
            .rev()
            .map(|(min_rep, members)| CosetTag { min_rep, members: sorted_desc(members) })
            .collect())
    }

    /// `Adm({μ})^K = W_K Adm({μ}) W_K`, sorted descending.
    pub fn adm_k(&self) -> Vec<ExtAffineElement> {
        let mut set = HashSet::new();
        for w in admissible_set(self.k.g()) {
            set.extend(self.double_coset(&w));
        }
        sorted_desc(set)
    }

    /// `KR(K, {μ})`: the double cosets making up `Adm^K`, each with all its members.
    pub fn kr_set(&self) -> Result<Vec<CosetTag>> {
        let mut tags: BTreeMap<ExtAffineElement, Vec<ExtAffineElement>> = BTreeMap::new();
        for w in admissible_set(self.k.g()) {
            let rep = self.double_min_rep(&w)?;
            if let std::collections::btree_map::Entry::Vacant(e) = tags.entry(rep) {
                let members = self.double_coset(e.key());
                e.insert(members);
            }
        }
        Ok(tags.into_iter().rev().map(|(min_rep, members)| CosetTag { min_rep, members }).collect())
    }

    /// `EKOR(K, {μ}) = Adm^K ∩ ^K W~`; also computes `Adm ∩ ^K W~` and fails
    /// if they differ.
    pub fn ekor_set(&self) -> Result<Vec<ExtAffineElement>> {
        let (a, b) = self.ekor_both_ways();
        if a != b {
            return Err(Error::Internal(format!("Adm^K ∩ ^K W and Adm ∩ ^K W differ: {a:?} vs {b:?}")));
        }
        Ok(a)
    }

    /// `(Adm^K ∩ ^K W~, Adm ∩ ^K W~)`, both sorted descending.
    pub fn ekor_both_ways(&self) -> (Vec<ExtAffineElement>, Vec<ExtAffineElement>) {
        let a = self.adm_k().into_iter().filter(|w| self.is_left_minimal(w)).collect();
        let b = admissible_set(self.k.g()).into_iter().filter(|w| self.is_left_minimal(w)).collect();
        (a, b)
    }

    /// The KR tag (minimal double-coset representative) of `w`.
    pub fn kr_type(&self, w: &ExtAffineElement) -> Result<ExtAffineElement> {
        self.double_min_rep(w)
    }

    /// Number of EKOR elements lying over each KR tag, in the order of `tags`.
    pub fn ekor_fiber_sizes(&self, tags: &[CosetTag], ekor: &[ExtAffineElement]) -> Result<Vec<usize>> {
        let mut counts = vec![0; tags.len()];
        for w in ekor {
            let rep = self.kr_type(w)?;
            let pos = tags
                .iter()
                .position(|t| t.min_rep == rep)
                .ok_or_else(|| Error::Internal(format!("{w} lies over no KR tag")))?;
            counts[pos] += 1;
        }
        Ok(counts)
    }

    /// Order relation on KR tags: `(a, b)` (indices into `tags`) whenever the
    /// minimal representative of `a` lies below the maximal element of `b`.
    pub fn kr_poset(&self, tags: &[CosetTag]) -> Result<Vec<(usize, usize)>> {
        let maxes = tags.iter().map(|t| self.double_max_rep(&t.min_rep)).collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for (a, ta) in tags.iter().enumerate() {
            for (b, mb) in maxes.iter().enumerate() {
                if self.wg.bruhat_leq(&ta.min_rep, mb) {
                    out.push((a, b));
                }
            }
        }
        Ok(out)
    }

    /// Same relation, tested as "below some member of `b`".
    pub fn kr_poset_brute_force(&self, tags: &[CosetTag]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ta) in tags.iter().enumerate() {
            for (b, tb) in tags.iter().enumerate() {
                if tb.members.iter().any(|m| self.wg.bruhat_leq(&ta.min_rep, m)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> ExtAffineElement {
        s.parse().unwrap()
    }

    #[test]
    fn mu_and_orbit() {
        assert_eq!(mu_translation(2), el("pi=id;nu=(1,1,0,0)"));
        assert_eq!(mu_translation(1), el("pi=id;nu=(1,0)"));
        let orbit = weyl_orbit_translations(2);
        let nus: Vec<String> = orbit.iter().map(|t| t.nu().to_string()).collect();
        assert_eq!(nus, ["(1,1,0,0)", "(1,0,1,0)", "(0,1,0,1)", "(0,0,1,1)"]);
        assert_eq!(weyl_orbit_translations(1).len(), 2);
        let wg = WeylGroup::new(2).unwrap();
        assert!(orbit.iter().all(|t| wg.length(t) == 3));
    }

    #[test]
    fn criterion_examples() {
        assert!(admissible_kr_criterion(&el("pi=id;nu=(1,1,0,0)")));
        assert!(admissible_kr_criterion(&el("pi=(2 -2);nu=(1,0,1,0)")));
        assert!(!admissible_kr_criterion(&el("pi=(1 -1);nu=(1,1,0,0)")));
        assert!(!admissible_kr_criterion(&el("pi=id;nu=(0,0,0,0)")));
        assert!(!admissible_kr_criterion(&el("pi=id;nu=(1,1,1,1)")));
    }

    #[test]
    fn admissible_set_sizes() {
        assert_eq!(admissible_set(1).len(), 3);
        assert_eq!(admissible_set(2).len(), 13);
        assert_eq!(admissible_set(2)[0], mu_translation(2));
    }

    #[test]
    fn wk_generator_rule() {
        assert_eq!(ParahoricType::siegel(2).wk_generators(), vec![1]);
        assert_eq!(ParahoricType::hyperspecial(2).wk_generators(), vec![1, 2]);
        assert!(ParahoricType::iwahori(2).wk_generators().is_empty());
        assert_eq!(ParahoricType::named(2, "paramodular").unwrap().wk_generators(), vec![0, 2]);
    }

    #[test]
    fn parahoric_validation() {
        assert!(ParahoricType::new(2, []).is_err());
        assert!(ParahoricType::new(2, [3]).is_err());
        assert!(ParahoricType::named(3, "klingen").is_err());
        let k = ParahoricType::siegel(2);
        assert_eq!(k.positions(), vec![0, 2]);
        assert!(k.contains(-2) && k.contains(6) && !k.contains(1));
        assert_eq!(ParahoricType::named(2, "paramodular").unwrap().positions(), vec![1, 3]);
    }

    #[test]
    fn siegel_cosets() {
        let wg = WeylGroup::new(2).unwrap();
        let pw = ParahoricWeyl::new(&wg, &ParahoricType::siegel(2)).unwrap();
        let s1 = wg.simple_reflection(1).clone();
        let tags = pw.min_length_reps(&[wg.identity(), s1]).unwrap();
        assert_eq!(tags.len(), 1);
        assert_eq!(tags[0].min_rep, wg.identity());
        assert_eq!(pw.kr_set().unwrap().len(), 6);
        assert_eq!(pw.ekor_set().unwrap().len(), 9);
    }

    #[test]
    fn iwahori_and_hyperspecial_counts() {
        let wg = WeylGroup::new(2).unwrap();
        let iw = ParahoricWeyl::new(&wg, &ParahoricType::iwahori(2)).unwrap();
        assert_eq!(iw.kr_set().unwrap().len(), 13);
        assert_eq!(iw.ekor_set().unwrap().len(), 13);
        let hs = ParahoricWeyl::new(&wg, &ParahoricType::hyperspecial(2)).unwrap();
        assert_eq!(hs.kr_set().unwrap().len(), 1);
        assert_eq!(hs.ekor_set().unwrap().len(), 4);
    }
}
