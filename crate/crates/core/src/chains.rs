//! The standard Siegel lattice chain of a parahoric type, its distinguished
//! subspaces, and the reductive quotient they cut out.
//!
//! `Λ^j = Z_p^{2g-j} ⊕ pZ_p^j` for `0 <= j < 2g` and `Λ^{j+2g} = pΛ^j`.
//! Every transition map is diagonal in the standard bases, so kernels mod
//! `p` are coordinate subspaces and are stored as sets of signed indices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::admissible::ParahoricType;
use crate::error::{Error, Result};
use crate::weyl::{index_at, position, Index};

/// A set of signed indices, rendered ascending as `{-2,1}`.
pub type IndexSet = BTreeSet<Index>;

pub fn render_index_set(s: &IndexSet) -> String {
    let parts: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn negate(s: &IndexSet) -> IndexSet {
    s.iter().map(|i| -i).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardChain {
    k: ParahoricType,
}

impl StandardChain {
    pub fn new(k: &ParahoricType) -> Self {
        StandardChain { k: k.clone() }
    }

    pub fn g(&self) -> usize {
        self.k.g()
    }

    pub fn parahoric(&self) -> &ParahoricType {
        &self.k
    }

    pub fn positions(&self) -> Vec<usize> {
        self.k.positions()
    }

    /// Exponents `a` with `Λ^j = ⊕ p^{a_k} Z_p e_k`, in coordinate order.
    pub fn exponents(&self, j: i64) -> Vec<i32> {
        lattice_exponents(self.g(), j)
    }

    /// Exponents of the diagonal transition map `Λ^j → Λ^i` (`j >= i`) in
    /// the standard bases of source and target.
    pub fn transition(&self, j: i64, i: i64) -> Result<Vec<i32>> {
        if j < i {
            return Err(Error::InvalidParahoric(format!("transition needs j >= i, got {j} < {i}")));
        }
        for x in [j, i] {
            if !self.k.contains(x) {
                return Err(Error::InvalidParahoric(format!("{x} is not in J")));
            }
        }
        Ok(self.exponents(j).iter().zip(self.exponents(i)).map(|(a, b)| a - b).collect())
    }

    /// Kernel mod `p` of `Λ^j → Λ^i`.
    pub fn kernel_mod_p(&self, j: i64, i: i64) -> Result<IndexSet> {
        let g = self.g();
        Ok(self.transition(j, i)?.iter().enumerate().filter(|(_, &e)| e >= 1).map(|(p, _)| index_at(g, p)).collect())
    }

    fn in_j(&self, lo: i64, hi: i64) -> Vec<i64> {
        self.k.positions_in(lo, hi)
    }

    /// All non-identity symmetric and one-sided transition maps, with
    /// their kernels, up to the period shift by `2g`.
    pub fn distinguished_subspaces(&self) -> Result<Vec<DistinguishedSubspace>> {
        if !self.k.contains(0) {
            return Err(Error::InvalidParahoric("distinguished subspaces need 0 ∈ J".into()));
        }
        let g = self.g() as i64;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut push = |kind: SubspaceKind, src: i64, dst: i64, this: &Self| -> Result<()> {
            if src == dst {
                return Ok(());
            }
            let shift = src.div_euclid(2 * g) * 2 * g;
            let (source, target) = (src - shift, dst - shift);
            if seen.insert((kind, source, target)) {
                out.push(DistinguishedSubspace { kind, source, target, indices: this.kernel_mod_p(src, dst)? });
            }
            Ok(())
        };
        for n in 0..=3 {
            let lo = (n - 2) * g;
            for &j1 in &self.in_j(lo + 1, n * g) {
                for &j2 in &self.in_j(lo + 1, j1) {
                    if (j1 + j2).rem_euclid(2 * g) == 0 {
                        push(SubspaceKind::Symmetric, j1, j2, self)?;
                    }
                }
            }
        }
        for n in 0..=3 {
            let (lo, hi) = ((n - 1) * g, n * g);
            for &j1 in &self.in_j(lo, hi) {
                for &j2 in &self.in_j(lo, j1) {
                    let kind = SubspaceKind::OneSided { right_anchored: j1 == hi, left_anchored: j2 == lo };
                    push(kind, j1, j2, self)?;
                }
            }
        }
        Ok(out)
    }

    /// `I_j`: kernel of the non-identity symmetric map starting at `j`.
    pub fn symmetric_kernel(&self, j: i64) -> Result<Option<IndexSet>> {
        self.find(j, |k| k == SubspaceKind::Symmetric, true)
    }

    /// Kernel of the left-anchored map starting at `j` (ending at a multiple of `g`).
    pub fn left_anchored_kernel(&self, j: i64) -> Result<Option<IndexSet>> {
        self.find(j, |k| matches!(k, SubspaceKind::OneSided { left_anchored: true, .. }), true)
    }

    /// Kernel of the right-anchored map ending at `j` (starting at a multiple of `g`).
    pub fn right_anchored_kernel(&self, j: i64) -> Result<Option<IndexSet>> {
        self.find(j, |k| matches!(k, SubspaceKind::OneSided { right_anchored: true, .. }), false)
    }

    fn find(&self, j: i64, kind: impl Fn(SubspaceKind) -> bool, by_source: bool) -> Result<Option<IndexSet>> {
        let r = j.rem_euclid(2 * self.g() as i64);
        let hits: Vec<IndexSet> = self
            .distinguished_subspaces()?
            .into_iter()
            .filter(|d| kind(d.kind))
            .filter(|d| (if by_source { d.source } else { d.target }).rem_euclid(2 * self.g() as i64) == r)
            .map(|d| d.indices)
            .collect();
        match hits.as_slice() {
            [] => Ok(None),
            [one] => Ok(Some(one.clone())),
            many if many.iter().all(|h| h == &many[0]) => Ok(Some(many[0].clone())),
            _ => Err(Error::Internal(format!("several distinct kernels attached to {j}"))),
        }
    }

    pub fn rdt_factors(&self) -> Result<RdtDescription> {
        let sets: Vec<IndexSet> = self.distinguished_subspaces()?.into_iter().map(|d| d.indices).collect();
        RdtDescription::from_subspaces(self.g(), &sets)
    }
}

/// `Λ^j` exponents: `1` on the last `j` coordinates for `0 <= j < 2g`,
/// shifted by one per period.
pub fn lattice_exponents(g: usize, j: i64) -> Vec<i32> {
    let n = 2 * g as i64;
    let (q, r) = (j.div_euclid(n), j.rem_euclid(n));
    (0..n).map(|p| (q + i64::from(p >= n - r)) as i32).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SubspaceKind {
    Symmetric,
    OneSided { left_anchored: bool, right_anchored: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishedSubspace {
    pub kind: SubspaceKind,
    /// Source and target of the transition map, with `0 <= source < 2g`.
    pub source: i64,
    pub target: i64,
    pub indices: IndexSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    #[serde(rename = "GSp")]
    GSp,
    #[serde(rename = "GL")]
    GL,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub kind: FactorKind,
    /// Matrix size: `GSp(2m)` has rank `2m`.
    pub rank: usize,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FactorKind::GSp => write!(f, "GSp({})", self.rank),
            FactorKind::GL => write!(f, "GL({})", self.rank),
        }
    }
}

/// Shape of the reductive quotient: the automorphisms of the symplectic
/// space preserving every distinguished subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RdtDescription {
    pub atoms: Vec<IndexSet>,
    /// `GSp` factors first, then `GL`, each by ascending rank.
    pub factors: Vec<Factor>,
    /// The similitude multiplier `G_m`, fibred over all factors.
    pub multiplier: bool,
}

impl RdtDescription {
    pub fn from_subspaces(g: usize, subspaces: &[IndexSet]) -> Result<Self> {
        let mut atoms: Vec<IndexSet> = vec![(0..2 * g).map(|p| index_at(g, p)).collect()];
        for s in subspaces {
            atoms = atoms
                .into_iter()
                .flat_map(|a| {
                    let inside: IndexSet = a.intersection(s).copied().collect();
                    let outside: IndexSet = a.difference(s).copied().collect();
                    [inside, outside]
                })
                .filter(|a| !a.is_empty())
                .collect();
        }
        atoms.sort_by_key(|a| {
            let m = a.iter().map(|i| i.abs()).min().expect("non-empty");
            (m, a.iter().map(|&i| position(g, i)).min())
        });
        let mut factors = Vec::new();
        for a in &atoms {
            let neg = negate(a);
            if &neg == a {
                factors.push(Factor { kind: FactorKind::GSp, rank: a.len() });
            } else if !atoms.contains(&neg) {
                return Err(Error::Internal(format!("atom {} has no negated partner", render_index_set(a))));
            } else if a.iter().max() > neg.iter().max() {
                factors.push(Factor { kind: FactorKind::GL, rank: a.len() });
            }
        }
        factors.sort();
        Ok(RdtDescription { atoms, factors, multiplier: true })
    }

    /// `Σ GL ranks + Σ GSp ranks / 2`; equals `g`.
    pub fn semisimple_rank_sum(&self) -> usize {
        self.factors
            .iter()
            .map(|f| match f.kind {
                FactorKind::GL => f.rank,
                FactorKind::GSp => f.rank / 2,
            })
            .sum()
    }

    /// A product of general linear / similitude groups isomorphic to the
    /// whole quotient: without a `GSp` factor the multiplier contributes a
    /// `GL(1)`, and `GSp(2) = GL(2)`.
    pub fn isomorphism_type(&self) -> Vec<Factor> {
        let mut out = self.factors.clone();
        if !out.iter().any(|f| f.kind == FactorKind::GSp) {
            out.push(Factor { kind: FactorKind::GL, rank: 1 });
        }
        for f in &mut out {
            if f.kind == FactorKind::GSp && f.rank == 2 {
                f.kind = FactorKind::GL;
            }
        }
        out.sort();
        out
    }

    /// Factors with a non-trivial Dynkin diagram (all but the `GL(1)`s).
    pub fn dynkin_type(&self) -> Vec<Factor> {
        self.factors.iter().copied().filter(|f| !(f.kind == FactorKind::GL && f.rank == 1)).collect()
    }
}

impl fmt::Display for RdtDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", if parts.is_empty() { "1".to_string() } else { parts.join(" x ") })?;
        if self.multiplier {
            write!(f, " [+Gm]")?;
        }
        Ok(())
    }
}
