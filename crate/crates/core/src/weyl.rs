//! The Iwahori-Weyl group `W~ = W ⋉ Y` of `GSp(2g)`.
//!
//! Coordinates are indexed by the signed indices `1, …, g, -g, …, -1`, in that
//! order; position `k` (0-based) holds index `k + 1` for `k < g` and
//! `k - 2g` otherwise. An element `(π, ν)` stands for the monomial matrix
//! `T_ν P_π` with `P_π e_i = e_{π(i)}` and `T_ν = diag(p^{ν_1}, …, p^{ν_{-1}})`,
//! so the group law is plain matrix multiplication:
//! `(π₁, ν₁)(π₂, ν₂) = (π₁π₂, ν₁ + π₁(ν₂))` with `(π u)_k = u_{π⁻¹(k)}`.
//!
//! The affine Weyl group `W_a = W ⋉ Y₀` is the Coxeter group on `s₀, …, s_g`;
//! `Ω ≅ Z` is generated by a single length-zero element and indexed by the
//! common pair sum `c(ν) = ν_i + ν_{-i}`. Lengths come from a breadth-first
//! search over generator words, cached per [`WeylGroup`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactRational;

/// A signed index in `{±1, …, ±g}`.
pub type Index = i32;

/// 0-based coordinate position of a signed index.
pub fn position(g: usize, i: Index) -> usize {
    debug_assert!(i != 0 && i.unsigned_abs() as usize <= g);
    if i > 0 {
        i as usize - 1
    } else {
        (2 * g as i64 + i as i64) as usize
    }
}

/// Signed index at a 0-based coordinate position.
pub fn index_at(g: usize, pos: usize) -> Index {
    if pos < g {
        pos as Index + 1
    } else {
        pos as Index - 2 * g as Index
    }
}

/// All signed indices in coordinate order `1, …, g, -g, …, -1`.
pub fn indices(g: usize) -> impl Iterator<Item = Index> {
    (0..2 * g).map(move |p| index_at(g, p))
}

/// `ω_i = (0^{2g-i}, 1^i)`.
pub fn omega_vector(g: usize, i: usize) -> Vec<i32> {
    (0..2 * g).map(|p| i32::from(p + i >= 2 * g)).collect()
}

/// An element of the hyperoctahedral group `W ⊆ S_{2g}`: a permutation of
/// `{±1, …, ±g}` commuting with negation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPermutation {
    /// `images[p]` is the position of `π(index_at(p))`.
    images: Vec<u8>,
}

impl SignedPermutation {
    pub fn identity(g: usize) -> Self {
        SignedPermutation { images: (0..2 * g as u8).collect() }
    }

    /// Builds `π` from the images of the positive indices `1, …, g`.
    pub fn from_positive_images(g: usize, images: &[Index]) -> Result<Self> {
        if images.len() != g {
            return Err(Error::InvalidPermutation(format!("expected {g} images, got {}", images.len())));
        }
        let mut full = vec![u8::MAX; 2 * g];
        for (k, &img) in images.iter().enumerate() {
            if img == 0 || img.unsigned_abs() as usize > g {
                return Err(Error::InvalidPermutation(format!("image {img} out of range")));
            }
            let i = k as Index + 1;
            full[position(g, i)] = position(g, img) as u8;
            full[position(g, -i)] = position(g, -img) as u8;
        }
        Self::from_position_images(full)
    }

    fn from_position_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if !n.is_multiple_of(2) || n == 0 {
            return Err(Error::InvalidPermutation("odd or empty index set".into()));
        }
        let mut seen = vec![false; n];
        for &im in &images {
            let im = im as usize;
            if im >= n || seen[im] {
                return Err(Error::InvalidPermutation("not a bijection".into()));
            }
            seen[im] = true;
        }
        for p in 0..n {
            if images[n - 1 - p] as usize != n - 1 - images[p] as usize {
                return Err(Error::InvalidPermutation("does not commute with negation".into()));
            }
        }
        Ok(SignedPermutation { images })
    }

    /// Builds `π` from disjoint cycles of signed indices. Each cycle must be
    /// given together with its negative unless it is closed under negation.
    pub fn from_cycles(g: usize, cycles: &[Vec<Index>]) -> Result<Self> {
        let mut images: Vec<u8> = (0..2 * g as u8).collect();
        let mut touched = vec![false; 2 * g];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                for x in [a, b] {
                    if x == 0 || x.unsigned_abs() as usize > g {
                        return Err(Error::InvalidPermutation(format!("index {x} out of range")));
                    }
                }
                let pa = position(g, a);
                if touched[pa] {
                    return Err(Error::InvalidPermutation(format!("index {a} appears twice")));
                }
                touched[pa] = true;
                images[pa] = position(g, b) as u8;
            }
        }
        Self::from_position_images(images)
    }

    pub fn g(&self) -> usize {
        self.images.len() / 2
    }

    pub fn apply(&self, i: Index) -> Index {
        let g = self.g();
        index_at(g, self.images[position(g, i)] as usize)
    }

    pub fn apply_position(&self, pos: usize) -> usize {
        self.images[pos] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        SignedPermutation { images: other.images.iter().map(|&p| self.images[p as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.images.len()];
        for (p, &q) in self.images.iter().enumerate() {
            inv[q as usize] = p as u8;
        }
        SignedPermutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &q)| p == q as usize)
    }

    /// Permutes the coordinates of a vector: `(π u)_{π(k)} = u_k`.
    pub fn permute<T: Clone>(&self, u: &[T]) -> Vec<T> {
        let mut out = u.to_vec();
        for (p, x) in u.iter().enumerate() {
            out[self.images[p] as usize] = x.clone();
        }
        out
    }

    /// Disjoint non-trivial cycles. Each cycle starts at its smallest
    /// position; cycles are ordered by that position.
    pub fn cycles(&self) -> Vec<Vec<Index>> {
        let g = self.g();
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(index_at(g, p));
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Signs `s_k` such that the signed permutation matrix `e_k ↦ s_k e_{π(k)}`
    /// preserves the standard alternating form `⟨e_i, e_{-i}⟩ = sgn(i)`.
    /// The plain permutation matrix does so only when `π` maps no positive
    /// index to a negative one.
    pub fn symplectic_signs(&self) -> Vec<i8> {
        let g = self.g();
        indices(g)
            .map(|i| {
                let flips = (i > 0) != (self.apply(i) > 0);
                if i > 0 && flips {
                    -1
                } else {
                    1
                }
            })
            .collect()
    }

    /// All `2^g g!` elements of `W`, in a fixed order.
    pub fn all(g: usize) -> Vec<Self> {
        let mut perms: Vec<Vec<Index>> = vec![vec![]];
        for _ in 0..g {
            let mut next = Vec::new();
            for p in &perms {
                for x in 1..=g as Index {
                    if !p.iter().any(|&y| y.abs() == x) {
                        let mut q = p.clone();
                        q.push(x);
                        next.push(q);
                    }
                }
            }
            perms = next;
        }
        let mut out = Vec::with_capacity(perms.len() << g);
        for p in perms {
            for mask in 0..(1u32 << g) {
                let imgs: Vec<Index> =
                    p.iter().enumerate().map(|(k, &x)| if mask >> k & 1 == 1 { -x } else { x }).collect();
                out.push(Self::from_positive_images(g, &imgs).expect("valid by construction"));
            }
        }
        out
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A cocharacter `ν ∈ Y`, stored in coordinate order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TranslationVector {
    values: Vec<i32>,
}

impl TranslationVector {
    pub fn new(values: Vec<i32>) -> Result<Self> {
        let n = values.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidTranslation(format!("length {n} is not 2g")));
        }
        let c = values[0] + values[n - 1];
        if (0..n / 2).any(|p| values[p] + values[n - 1 - p] != c) {
            return Err(Error::InvalidTranslation(format!("{values:?}: pair sums ν_i + ν_-i differ")));
        }
        Ok(TranslationVector { values })
    }

    pub fn zero(g: usize) -> Self {
        TranslationVector { values: vec![0; 2 * g] }
    }

    pub fn g(&self) -> usize {
        self.values.len() / 2
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn get(&self, i: Index) -> i32 {
        self.values[position(self.g(), i)]
    }

    /// The common pair sum `c(ν)`, i.e. the Ω-index.
    pub fn omega_index(&self) -> i32 {
        self.values[0] + self.values[self.values.len() - 1]
    }

    fn add(&self, other: &Self) -> Self {
        TranslationVector { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    fn neg(&self) -> Self {
        TranslationVector { values: self.values.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for TranslationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for TranslationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An element `(π, ν)` of the Iwahori-Weyl group.
///
/// The derived order compares `ν` first and then `π`; listings sort
/// descending, which puts `t_μ` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtAffineElement {
    nu: TranslationVector,
    pi: SignedPermutation,
}

impl ExtAffineElement {
    pub fn new(pi: SignedPermutation, nu: TranslationVector) -> Result<Self> {
        if pi.g() != nu.g() {
            return Err(Error::DimensionMismatch { expected: pi.g(), found: nu.g() });
        }
        Ok(ExtAffineElement { nu, pi })
    }

    pub fn identity(g: usize) -> Self {
        ExtAffineElement { nu: TranslationVector::zero(g), pi: SignedPermutation::identity(g) }
    }

    pub fn translation(nu: TranslationVector) -> Self {
        let g = nu.g();
        ExtAffineElement { nu, pi: SignedPermutation::identity(g) }
    }

    /// Convenience constructor from cycle notation and a raw vector.
    pub fn from_parts(g: usize, cycles: &[Vec<Index>], nu: &[i32]) -> Result<Self> {
        Self::new(SignedPermutation::from_cycles(g, cycles)?, TranslationVector::new(nu.to_vec())?)
    }

    pub fn g(&self) -> usize {
        self.pi.g()
    }

    pub fn pi(&self) -> &SignedPermutation {
        &self.pi
    }

    pub fn nu(&self) -> &TranslationVector {
        &self.nu
    }

    pub fn omega_index(&self) -> i32 {
        self.nu.omega_index()
    }

    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        if self.g() != rhs.g() {
            return Err(Error::DimensionMismatch { expected: self.g(), found: rhs.g() });
        }
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let moved = TranslationVector { values: self.pi.permute(&rhs.nu.values) };
        ExtAffineElement { nu: self.nu.add(&moved), pi: self.pi.compose(&rhs.pi) }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.pi.inverse();
        let nu = TranslationVector { values: inv.permute(&self.nu.values) }.neg();
        ExtAffineElement { nu, pi: inv }
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Self::identity(self.g()), |acc, _| acc.mul_unchecked(&base))
    }

    /// The affine action `v ↦ π(v) + ν` on coordinate vectors.
    pub fn act<T: ExactRational>(&self, v: &[T]) -> Vec<T> {
        self.pi.permute(v).into_iter().zip(&self.nu.values).map(|(x, &n)| x + T::from_i64(n as i64)).collect()
    }

    /// `π(ω_i) + ν - ω_i`.
    pub fn omega_displacement(&self, i: usize) -> Vec<i32> {
        let g = self.g();
        let w = omega_vector(g, i);
        self.pi.permute(&w).iter().zip(&self.nu.values).zip(&w).map(|((a, n), b)| a + n - b).collect()
    }

    /// Dense integer matrix of exponents: `Some(e)` at `(π(k), k)` meaning `p^e`.
    pub fn monomial_exponents(&self) -> Vec<Vec<Option<i32>>> {
        let n = 2 * self.g();
        let mut m = vec![vec![None; n]; n];
        for k in 0..n {
            let r = self.pi.apply_position(k);
            m[r][k] = Some(self.nu.values[r]);
        }
        m
    }
}

impl fmt::Display for ExtAffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi={};nu={}", self.pi, self.nu)
    }
}

impl fmt::Debug for ExtAffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse { input: input.to_string(), reason: reason.into() }
}

fn parse_index(input: &str, tok: &str) -> Result<Index> {
    tok.replace('\u{2212}', "-").parse::<Index>().map_err(|_| parse_err(input, format!("bad index {tok:?}")))
}

/// Parses `pi=<cycles>;nu=(a,b,…)`; `g` is inferred from the length of `nu`.
impl FromStr for ExtAffineElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (pi_part, nu_part) = s.split_once(';').ok_or_else(|| parse_err(s, "missing ';'"))?;
        let pi_str = pi_part.trim().strip_prefix("pi=").ok_or_else(|| parse_err(s, "missing 'pi='"))?;
        let nu_str = nu_part.trim().strip_prefix("nu=").ok_or_else(|| parse_err(s, "missing 'nu='"))?;
        let nu_inner = nu_str
            .trim()
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| parse_err(s, "nu must be parenthesised"))?;
        let nu: Vec<i32> = nu_inner.split(',').map(|t| parse_index(s, t.trim())).collect::<Result<_>>()?;
        let g = nu.len() / 2;
        let pi_str = pi_str.trim();
        let mut cycles = Vec::new();
        if pi_str != "id" {
            let mut rest = pi_str;
            while !rest.is_empty() {
                let body = rest.strip_prefix('(').ok_or_else(|| parse_err(s, "expected '('"))?;
                let close = body.find(')').ok_or_else(|| parse_err(s, "unclosed cycle"))?;
                let cycle: Vec<Index> =
                    body[..close].split_whitespace().map(|t| parse_index(s, t)).collect::<Result<_>>()?;
                if cycle.is_empty() {
                    return Err(parse_err(s, "empty cycle"));
                }
                cycles.push(cycle);
                rest = body[close + 1..].trim_start();
            }
        }
        let pi = SignedPermutation::from_cycles(g, &cycles)?;
        ExtAffineElement::new(pi, TranslationVector::new(nu)?)
    }
}

#[derive(Default)]
struct LengthCache {
    lengths: HashMap<ExtAffineElement, u32>,
    layers: Vec<Vec<ExtAffineElement>>,
}

/// `W~` for a fixed `g`, with its Coxeter generators and a shared cache of
/// the length function on `W_a`.
pub struct WeylGroup {
    g: usize,
    generators: Vec<ExtAffineElement>,
    omega: ExtAffineElement,
    cache: RwLock<LengthCache>,
}

impl fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeylGroup").field("g", &self.g).finish_non_exhaustive()
    }
}

impl WeylGroup {
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 || g > 60 {
            return Err(Error::UnsupportedRank { g, reason: "need 1 <= g <= 60".into() });
        }
        let mut generators = Vec::with_capacity(g + 1);
        let mut nu0 = vec![0; 2 * g];
        nu0[0] = -1;
        nu0[2 * g - 1] = 1;
        generators.push(ExtAffineElement::from_parts(g, &[vec![1, -1]], &nu0)?);
        for i in 1..g as Index {
            generators.push(ExtAffineElement::from_parts(g, &[vec![i, i + 1], vec![-i, -(i + 1)]], &vec![0; 2 * g])?);
        }
        let gi = g as Index;
        generators.push(ExtAffineElement::from_parts(g, &[vec![gi, -gi]], &vec![0; 2 * g])?);

        // ((w0, ε), (0^g, 1^g)): i ↦ -(g + 1 - i)
        let imgs: Vec<Index> = (1..=gi).map(|i| -(gi + 1 - i)).collect();
        let pi = SignedPermutation::from_positive_images(g, &imgs)?;
        let nu: Vec<i32> = (0..2 * g).map(|p| i32::from(p >= g)).collect();
        let omega = ExtAffineElement::new(pi, TranslationVector::new(nu)?)?;

        let mut cache = LengthCache::default();
        let id = ExtAffineElement::identity(g);
        cache.lengths.insert(id.clone(), 0);
        cache.layers.push(vec![id]);
        Ok(WeylGroup { g, generators, omega, cache: RwLock::new(cache) })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// `s₀, …, s_g`.
    pub fn simple_reflections(&self) -> &[ExtAffineElement] {
        &self.generators
    }

    pub fn simple_reflection(&self, i: usize) -> &ExtAffineElement {
        &self.generators[i]
    }

    /// The generator of the length-zero subgroup `Ω`.
    pub fn omega_generator(&self) -> &ExtAffineElement {
        &self.omega
    }

    pub fn identity(&self) -> ExtAffineElement {
        ExtAffineElement::identity(self.g)
    }

    fn check(&self, w: &ExtAffineElement) -> Result<()> {
        if w.g() != self.g {
            return Err(Error::DimensionMismatch { expected: self.g, found: w.g() });
        }
        Ok(())
    }

    pub fn multiply(&self, a: &ExtAffineElement, b: &ExtAffineElement) -> Result<ExtAffineElement> {
        self.check(a)?;
        a.multiply(b)
    }

    /// Splits `w = w_a · ω^k` with `w_a ∈ W_a`; `k = c(ν)`.
    pub fn omega_decompose(&self, w: &ExtAffineElement) -> (ExtAffineElement, i32) {
        let k = w.omega_index();
        (w.mul_unchecked(&self.omega.pow(-k)), k)
    }

    /// Coxeter length of the `W_a`-part.
    pub fn length(&self, w: &ExtAffineElement) -> u32 {
        assert_eq!(w.g(), self.g, "element of wrong rank");
        let (wa, _) = self.omega_decompose(w);
        self.affine_length(&wa)
    }

    fn affine_length(&self, wa: &ExtAffineElement) -> u32 {
        debug_assert_eq!(wa.omega_index(), 0);
        loop {
            {
                let cache = self.cache.read().expect("length cache poisoned");
                if let Some(&l) = cache.lengths.get(wa) {
                    return l;
                }
            }
            self.grow_one_layer();
        }
    }

    fn grow_one_layer(&self) {
        let mut cache = self.cache.write().expect("length cache poisoned");
        let depth = cache.layers.len() as u32;
        let mut next = Vec::new();
        for x in cache.layers.last().expect("identity layer") {
            for s in &self.generators {
                let y = s.mul_unchecked(x);
                if !cache.lengths.contains_key(&y) {
                    next.push(y);
                }
            }
        }
        next.sort();
        next.dedup();
        for y in &next {
            cache.lengths.insert(y.clone(), depth);
        }
        cache.layers.push(next);
    }

    fn ensure_depth(&self, depth: u32) {
        while self.cache.read().expect("length cache poisoned").layers.len() <= depth as usize {
            self.grow_one_layer();
        }
    }

    /// Reduced word for the `W_a`-part and the Ω-exponent, so that
    /// `s_{i₁} ⋯ s_{i_r} · ω^k = w`. At each step the lowest-index left descent
    /// is taken.
    pub fn reduced_word(&self, w: &ExtAffineElement) -> (Vec<usize>, i32) {
        let (mut x, k) = self.omega_decompose(w);
        let mut word = Vec::new();
        let mut len = self.affine_length(&x);
        while len > 0 {
            let (i, y) = self
                .generators
                .iter()
                .enumerate()
                .map(|(i, s)| (i, s.mul_unchecked(&x)))
                .find(|(_, y)| self.affine_length(y) < len)
                .expect("a non-identity element has a left descent");
            word.push(i);
            x = y;
            len -= 1;
        }
        (word, k)
    }

    /// Evaluates a word in the generators followed by `ω^k`.
    pub fn evaluate_word(&self, word: &[usize], k: i32) -> ExtAffineElement {
        word.iter()
            .fold(self.identity(), |acc, &i| acc.mul_unchecked(&self.generators[i]))
            .mul_unchecked(&self.omega.pow(k))
    }

    /// Indices `i` with `ℓ(s_i w) < ℓ(w)`.
    pub fn left_descents(&self, w: &ExtAffineElement) -> Vec<usize> {
        let l = self.length(w);
        (0..=self.g).filter(|&i| self.length(&self.generators[i].mul_unchecked(w)) < l).collect()
    }

    /// Indices `i` with `ℓ(w s_i) < ℓ(w)`.
    pub fn right_descents(&self, w: &ExtAffineElement) -> Vec<usize> {
        let l = self.length(w);
        (0..=self.g).filter(|&i| self.length(&w.mul_unchecked(&self.generators[i])) < l).collect()
    }

    /// Extended Bruhat order: equal Ω-components and Bruhat order on `W_a`.
    pub fn bruhat_leq(&self, u: &ExtAffineElement, w: &ExtAffineElement) -> bool {
        if u.omega_index() != w.omega_index() {
            return false;
        }
        let (ua, _) = self.omega_decompose(u);
        let (wa, _) = self.omega_decompose(w);
        self.affine_bruhat_leq(ua, wa)
    }

    fn affine_bruhat_leq(&self, mut u: ExtAffineElement, mut w: ExtAffineElement) -> bool {
        let mut lu = self.affine_length(&u);
        let mut lw = self.affine_length(&w);
        loop {
            if lu > lw {
                return false;
            }
            if lw == 0 {
                return lu == 0;
            }
            let (s, sw) = self
                .generators
                .iter()
                .map(|s| (s, s.mul_unchecked(&w)))
                .find(|(_, sw)| self.affine_length(sw) < lw)
                .expect("a non-identity element has a left descent");
            let su = s.mul_unchecked(&u);
            let lsu = self.affine_length(&su);
            if lsu < lu {
                u = su;
                lu = lsu;
            }
            w = sw;
            lw -= 1;
        }
    }

    /// All elements of length `<= max_len` with Ω-index `omega_index`,
    /// sorted by length and then by the element order.
    pub fn enumerate_ball(&self, max_len: u32, omega_index: i32) -> Vec<ExtAffineElement> {
        self.ensure_depth(max_len);
        let shift = self.omega.pow(omega_index);
        let cache = self.cache.read().expect("length cache poisoned");
        cache.layers[..=max_len as usize]
            .iter()
            .flat_map(|layer| layer.iter().map(|x| x.mul_unchecked(&shift)))
            .collect()
    }

    /// The finite subgroup generated by the given simple reflections.
    pub fn parabolic_subgroup(&self, generator_indices: &[usize]) -> Vec<ExtAffineElement> {
        let mut seen: HashSet<ExtAffineElement> = HashSet::new();
        let mut frontier = vec![self.identity()];
        seen.insert(self.identity());
        while let Some(x) = frontier.pop() {
            for &i in generator_indices {
                let y = self.generators[i].mul_unchecked(&x);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_by_key(|x| (self.length(x), x.clone()));
        out
    }
}

/// Length as the number of affine root hyperplanes separating a generic
/// point of the base alcove from its image, summed over the positive roots
/// `e_i - e_j`, `e_i + e_j - e_0` (`i < j`) and `2e_i - e_0`.
///
/// Independent of the word search; used to cross-check it.
pub fn alcove_separation_length<T: ExactRational>(w: &ExtAffineElement) -> u32 {
    let g = w.g();
    // -1/2 < x_1 < … < x_g < 0 with x_0 = 0, scaled to avoid coincidences
    let denom = 4 * (g as i64 + 1) + 1;
    let x: Vec<T> = indices(g)
        .map(|i| {
            let a = i.unsigned_abs() as i64;
            let v = T::from_ratio(-(2 * (g as i64 + 1 - a)) + 1, denom);
            if i > 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    let y = w.act(&x);
    let at = |v: &[T], i: usize| v[position(g, i as Index)].clone();
    let x0 = |v: &[T]| at(v, 1) + v[2 * g - 1].clone();
    let mut total: i64 = 0;
    let mut count = |f: &dyn Fn(&[T]) -> T| {
        let (a, b) = (f(&x), f(&y));
        debug_assert!(a.to_i64_exact().is_none() && b.to_i64_exact().is_none());
        total += (b.floor_to_i64() - a.floor_to_i64()).abs();
    };
    for i in 1..=g {
        for j in i + 1..=g {
            count(&|v: &[T]| at(v, i) - at(v, j));
            count(&|v: &[T]| at(v, i) + at(v, j) - x0(v));
        }
        count(&|v: &[T]| at(v, i) + at(v, i) - x0(v));
    }
    total as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn el(s: &str) -> ExtAffineElement {
        s.parse().unwrap()
    }

    #[test]
    fn positions_round_trip() {
        for g in 1..5 {
            for p in 0..2 * g {
                assert_eq!(position(g, index_at(g, p)), p);
            }
        }
        assert_eq!(indices(2).collect::<Vec<_>>(), vec![1, 2, -2, -1]);
    }

    #[test]
    fn generators_are_involutions() {
        let w = WeylGroup::new(2).unwrap();
        for s in w.simple_reflections() {
            assert_eq!(s.mul_unchecked(s), w.identity());
        }
        assert_eq!(w.simple_reflection(0).to_string(), "pi=(1 -1);nu=(-1,0,0,1)");
        assert_eq!(w.simple_reflection(1).to_string(), "pi=(1 2)(-2 -1);nu=(0,0,0,0)");
        assert_eq!(w.simple_reflection(2).to_string(), "pi=(2 -2);nu=(0,0,0,0)");
        assert_eq!(w.omega_generator().to_string(), "pi=(1 -2)(2 -1);nu=(0,0,1,1)");
    }

    #[test]
    fn multiply_examples() {
        let w = WeylGroup::new(2).unwrap();
        let s0 = w.simple_reflection(0);
        assert_eq!(w.multiply(s0, s0).unwrap(), w.identity());
        assert_eq!(
            el("pi=id;nu=(1,1,0,0)").multiply(&el("pi=id;nu=(0,0,1,1)")).unwrap(),
            el("pi=id;nu=(1,1,1,1)")
        );
        // P_(2 -2) T_(0,1,0,1) = T_(0,0,1,1) P_(2 -2)
        assert_eq!(
            el("pi=(2 -2);nu=(0,0,0,0)").multiply(&el("pi=id;nu=(0,1,0,1)")).unwrap(),
            el("pi=(2 -2);nu=(0,0,1,1)")
        );
        // (0,1,0,0) has unequal pair sums, so it is not a cocharacter of GSp
        assert!("pi=id;nu=(0,1,0,0)".parse::<ExtAffineElement>().is_err());
        let g3 = ExtAffineElement::identity(3);
        assert!(matches!(s0.multiply(&g3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn omega_decomposition_examples() {
        let w = WeylGroup::new(2).unwrap();
        assert_eq!(w.omega_decompose(w.omega_generator()), (w.identity(), 1));
        let s0 = w.simple_reflection(0).clone();
        assert_eq!(w.omega_decompose(&s0), (s0, 0));
        let t = el("pi=id;nu=(1,1,0,0)");
        let (wa, k) = w.omega_decompose(&t);
        assert_eq!(k, 1);
        assert_eq!(wa.omega_index(), 0);
        assert_eq!(wa.mul_unchecked(w.omega_generator()), t);
    }

    #[test]
    fn length_examples() {
        let w = WeylGroup::new(2).unwrap();
        assert_eq!(w.length(&w.identity()), 0);
        assert_eq!(w.length(w.omega_generator()), 0);
        assert_eq!(w.length(w.simple_reflection(1)), 1);
        assert_eq!(w.length(&el("pi=id;nu=(1,1,0,0)")), 3);
    }

    #[test]
    fn reduced_word_examples() {
        let w = WeylGroup::new(2).unwrap();
        assert_eq!(w.reduced_word(&w.identity()), (vec![], 0));
        assert_eq!(w.reduced_word(w.omega_generator()), (vec![], 1));
        let s2s1 = w.simple_reflection(2).mul_unchecked(w.simple_reflection(1));
        let (word, k) = w.reduced_word(&s2s1);
        assert_eq!((word.len(), k), (2, 0));
        assert_eq!(w.evaluate_word(&word, k), s2s1);
        let t = el("pi=id;nu=(1,1,0,0)");
        let (word, k) = w.reduced_word(&t);
        assert_eq!(word.len(), 3);
        assert_eq!(w.evaluate_word(&word, k), t);
    }

    #[test]
    fn bruhat_examples() {
        let w = WeylGroup::new(2).unwrap();
        let t = el("pi=id;nu=(1,0,1,0)");
        assert!(w.bruhat_leq(&t, &t));
        assert!(w.bruhat_leq(&w.identity(), w.simple_reflection(0)));
        assert!(w.bruhat_leq(&el("pi=(2 -2);nu=(1,0,1,0)"), &t));
        assert!(!w.bruhat_leq(&t, &el("pi=(2 -2);nu=(1,0,1,0)")));
        assert!(!w.bruhat_leq(&w.identity(), w.omega_generator()));
    }

    #[test]
    fn ball_examples() {
        let w = WeylGroup::new(2).unwrap();
        assert_eq!(w.enumerate_ball(0, 0), vec![w.identity()]);
        let b1 = w.enumerate_ball(1, 0);
        assert_eq!(b1.len(), 4);
        for s in w.simple_reflections() {
            assert!(b1.contains(s));
        }
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["pi=id;nu=(1,1,0,0)", "pi=(1 2 -1 -2);nu=(0,1,0,1)", "pi=(1 -2)(2 -1);nu=(0,0,1,1)"] {
            assert_eq!(el(s).to_string(), s);
        }
        // non-canonical cycle order and unicode minus are accepted
        assert_eq!(el("pi=(−2 −1)(2 1);nu=(0,1,0,1)").to_string(), "pi=(1 2)(-2 -1);nu=(0,1,0,1)");
        assert!("pi=(1 2);nu=(0,0,0,0)".parse::<ExtAffineElement>().is_err());
        assert!("pi=id;nu=(1,0,0,0)".parse::<ExtAffineElement>().is_err());
        assert!("pi=id,nu=(0,0)".parse::<ExtAffineElement>().is_err());
    }

    #[test]
    fn hyperoctahedral_group_order() {
        assert_eq!(SignedPermutation::all(1).len(), 2);
        assert_eq!(SignedPermutation::all(2).len(), 8);
        assert_eq!(SignedPermutation::all(3).len(), 48);
        let all: HashSet<_> = SignedPermutation::all(3).into_iter().collect();
        assert_eq!(all.len(), 48);
    }

    #[test]
    fn symplectic_signs_preserve_the_form() {
        for g in 1..4 {
            for pi in SignedPermutation::all(g) {
                let s = pi.symplectic_signs();
                for i in 1..=g as Index {
                    let (pk, pmk) = (position(g, i), position(g, -i));
                    let img = pi.apply(i);
                    // ⟨s_i e_π(i), s_-i e_-π(i)⟩ = s_i s_-i sgn(π(i)) must equal sgn(i) = 1
                    assert_eq!(s[pk] * s[pmk] * img.signum() as i8, 1, "{pi}");
                }
            }
        }
    }

    #[test]
    fn alcove_length_of_translation() {
        let t = el("pi=id;nu=(1,1,0,0)");
        assert_eq!(alcove_separation_length::<Rational>(&t), 3);
        let w = WeylGroup::new(2).unwrap();
        assert_eq!(alcove_separation_length::<Rational>(w.omega_generator()), 0);
    }
}
