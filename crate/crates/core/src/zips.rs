//! Standard zips attached to admissible elements.
//!
//! For `w = (π, ν)` and a chain position `j`, the Frobenius is the monomial
//! matrix `F_j = T_{ν^{(j)}} P̃_π` with `ν^{(j)} = ν - ω_j + π(ω_j)` and the
//! Verschiebung is `V_j = p F_j^{-1}`. `P̃_π` is the signed lift of `π` that
//! preserves the alternating form; the signs are invisible mod `p` but are
//! needed for the pairing axiom with a single multiplier. Frobenius twists
//! act trivially since every entry lies in `{0, ±1, ±p}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::admissible::{admissible_kr_criterion, ParahoricType, ParahoricWeyl};
use crate::chains::{lattice_exponents, negate, render_index_set, IndexSet};
use crate::error::{Error, Result};
use crate::linalg::{same_span, Matrix};
use crate::scalar::Fp;
use crate::weyl::{index_at, omega_vector, position, ExtAffineElement, Index, SignedPermutation};

/// Prime used for the row-reduction cross-check of kernels and images.
type Check = Fp<5>;

/// Coordinate subspace of `F_p^{2g}`, by signed index.
pub type CoordSubspace = IndexSet;

/// `M e_k = s_k p^{a_{π(k)}} e_{π(k)}`: a signed monomial matrix with
/// `p`-power entries. Exponents are indexed by row.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialPMatrix {
    pi: SignedPermutation,
    exponents: Vec<i32>,
    signs: Vec<i8>,
}

impl MonomialPMatrix {
    /// `T_a P_π` with arbitrary integer exponents.
    pub fn new(pi: SignedPermutation, exponents: Vec<i32>) -> Result<Self> {
        let n = exponents.len();
        if n != 2 * pi.g() {
            return Err(Error::DimensionMismatch { expected: pi.g(), found: n / 2 });
        }
        Ok(MonomialPMatrix { pi, exponents, signs: vec![1; n] })
    }

    pub fn with_signs(mut self, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != self.exponents.len() || signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::NotMonomial("signs must be ±1, one per column".into()));
        }
        self.signs = signs;
        Ok(self)
    }

    pub fn from_element(w: &ExtAffineElement) -> Self {
        Self::new(w.pi().clone(), w.nu().values().to_vec()).expect("same g")
    }

    pub fn diagonal(exponents: Vec<i32>) -> Self {
        let g = exponents.len() / 2;
        Self::new(SignedPermutation::identity(g), exponents).expect("even length")
    }

    pub fn pi(&self) -> &SignedPermutation {
        &self.pi
    }

    pub fn exponents(&self) -> &[i32] {
        &self.exponents
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    /// `(row, sign, exponent)` of the single entry in column `c` (positions).
    pub fn column(&self, c: usize) -> (usize, i8, i32) {
        let r = self.pi.apply_position(c);
        (r, self.signs[c], self.exponents[r])
    }

    /// `Some((sign, exponent))` at row `r`, column `c` (positions).
    pub fn entry(&self, r: usize, c: usize) -> Option<(i8, i32)> {
        let (row, s, e) = self.column(c);
        (row == r).then_some((s, e))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.dim();
        let mut signs = vec![0i8; n];
        let mut exps = vec![0i32; n];
        for k in 0..n {
            let (mid, s1, e1) = rhs.column(k);
            let (row, s2, e2) = self.column(mid);
            signs[k] = s1 * s2;
            exps[row] = e1 + e2;
        }
        MonomialPMatrix { pi: self.pi.compose(&rhs.pi), exponents: exps, signs }
    }

    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let mut signs = vec![0i8; n];
        let mut exps = vec![0i32; n];
        for k in 0..n {
            let (row, s, e) = self.column(k);
            signs[row] = s;
            exps[k] = -e;
        }
        MonomialPMatrix { pi: self.pi.inverse(), exponents: exps, signs }
    }

    /// `p^n · self`.
    pub fn scale_p(&self, n: i32) -> Self {
        MonomialPMatrix { exponents: self.exponents.iter().map(|e| e + n).collect(), ..self.clone() }
    }

    pub fn is_integral(&self) -> bool {
        self.exponents.iter().all(|&e| e >= 0)
    }

    /// Reduction mod `P`; requires integral entries.
    pub fn reduce<const P: u64>(&self) -> Result<Matrix<Fp<P>>> {
        if !self.is_integral() {
            return Err(Error::NotMonomial(format!("{self} has negative p-exponents")));
        }
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for c in 0..n {
            let (r, s, e) = self.column(c);
            if e == 0 {
                m[(r, c)] = Fp::new(s as i64);
            }
        }
        Ok(m)
    }

    /// Indices of columns sent to zero mod `p`.
    pub fn kernel_mod_p(&self) -> CoordSubspace {
        let g = self.dim() / 2;
        (0..self.dim()).filter(|&c| self.column(c).2 >= 1).map(|c| index_at(g, c)).collect()
    }

    /// Indices of rows hit by a unit entry.
    pub fn image_mod_p(&self) -> CoordSubspace {
        let g = self.dim() / 2;
        (0..self.dim()).filter(|&c| self.column(c).2 == 0).map(|c| index_at(g, self.column(c).0)).collect()
    }

    fn render_entry(e: Option<(i8, i32)>) -> String {
        match e {
            None => "0".into(),
            Some((s, e)) => {
                let mag = match e {
                    0 => "1".to_string(),
                    1 => "p".to_string(),
                    _ => format!("p^{e}"),
                };
                if s < 0 {
                    format!("-{mag}")
                } else {
                    mag
                }
            }
        }
    }
}

/// Rows separated by `;`. Entries are concatenated when all are in
/// `{0, 1, p}` and comma-separated otherwise.
impl fmt::Display for MonomialPMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let cells: Vec<Vec<String>> =
            (0..n).map(|r| (0..n).map(|c| Self::render_entry(self.entry(r, c))).collect()).collect();
        let compact = cells.iter().flatten().all(|s| s.len() == 1);
        let rows: Vec<String> = cells.iter().map(|r| r.join(if compact { "" } else { "," })).collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

impl fmt::Debug for MonomialPMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `ν^{(j)} = ν - ω_j + π(ω_j)` for `j = 0, …, 2g-1`.
pub fn nu_profile(w: &ExtAffineElement) -> Vec<Vec<i32>> {
    (0..2 * w.g()).map(|j| nu_at(w, j)).collect()
}

fn nu_at(w: &ExtAffineElement, j: usize) -> Vec<i32> {
    let om = omega_vector(w.g(), j);
    let moved = w.pi().permute(&om);
    w.nu().values().iter().zip(&om).zip(&moved).map(|((n, o), m)| n - o + m).collect()
}

/// The zip data at one chain position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZipPosition {
    pub j: usize,
    pub nu: Vec<i32>,
    pub f: MonomialPMatrix,
    pub v: MonomialPMatrix,
    /// `ker F_j = im V_j` mod `p`.
    pub c: CoordSubspace,
    /// `im F_j = ker V_j` mod `p`.
    pub d: CoordSubspace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardZip {
    w: ExtAffineElement,
    k: ParahoricType,
    positions: Vec<ZipPosition>,
    multiplier: i8,
}

/// Builds and verifies the standard zip of an admissible `w` at level `k`.
pub fn standard_zip(w: &ExtAffineElement, k: &ParahoricType) -> Result<StandardZip> {
    if w.g() != k.g() {
        return Err(Error::DimensionMismatch { expected: k.g(), found: w.g() });
    }
    if !admissible_kr_criterion(w) {
        return Err(Error::NotAdmissible(w.to_string()));
    }
    if !k.contains(0) {
        return Err(Error::InvalidParahoric("standard zips need 0 ∈ J".into()));
    }
    let signs = w.pi().symplectic_signs();
    let positions = k
        .positions()
        .into_iter()
        .map(|j| {
            let nu = nu_at(w, j);
            let f = MonomialPMatrix::new(w.pi().clone(), nu.clone())?.with_signs(signs.clone())?;
            let v = f.inverse().scale_p(1);
            let (c, d) = (f.kernel_mod_p(), f.image_mod_p());
            Ok(ZipPosition { j, nu, f, v, c, d })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut zip = StandardZip { w: w.clone(), k: k.clone(), positions, multiplier: 1 };
    zip.multiplier = zip.solve_multiplier()?;
    zip.verify()?;
    Ok(zip)
}

/// `ψ(e_a, e_b)` for the standard form: `sgn(a)` if `b = -a`, else 0.
fn psi(g: usize, a: usize, b: usize) -> i8 {
    if a + b == 2 * g - 1 {
        index_at(g, a).signum() as i8
    } else {
        0
    }
}

impl StandardZip {
    pub fn element(&self) -> &ExtAffineElement {
        &self.w
    }

    pub fn parahoric(&self) -> &ParahoricType {
        &self.k
    }

    pub fn positions(&self) -> &[ZipPosition] {
        &self.positions
    }

    pub fn multiplier(&self) -> i8 {
        self.multiplier
    }

    pub fn at(&self, j: i64) -> Result<&ZipPosition> {
        let r = j.rem_euclid(2 * self.k.g() as i64) as usize;
        self.positions
            .iter()
            .find(|p| p.j == r)
            .ok_or_else(|| Error::InvalidParahoric(format!("{j} is not a position of the chain")))
    }

    /// For each basis pair, `(ψ(F^j e_a, e_b), ψ(e_a, V^{-j} e_b))`, as `(sign, exponent)`.
    fn pairing_terms(&self) -> Result<Vec<((i8, i32), (i8, i32))>> {
        let g = self.k.g();
        let n = 2 * g;
        let mut out = Vec::new();
        for pj in &self.positions {
            let pm = self.at(-(pj.j as i64))?;
            for a in 0..n {
                let (fa, sf, ef) = pj.f.column(a);
                let b = n - 1 - fa;
                let (vb, sv, ev) = pm.v.column(b);
                let lhs = psi(g, fa, b) * sf;
                let rhs = psi(g, a, vb) * sv;
                if lhs == 0 || rhs == 0 {
                    return Err(Error::ZipAxiom(format!(
                        "{}: pairing support mismatch at position {} for e_{}",
                        self.w,
                        pj.j,
                        index_at(g, a)
                    )));
                }
                out.push(((lhs, ef), (rhs, ev)));
            }
        }
        Ok(out)
    }

    fn solve_multiplier(&self) -> Result<i8> {
        let terms = self.pairing_terms()?;
        let ((l, _), (r, _)) = terms.first().ok_or_else(|| Error::Internal("no positions".into()))?;
        Ok(l * r)
    }

    /// Checks every zip axiom; the first failure is reported.
    pub fn verify(&self) -> Result<()> {
        let g = self.k.g();
        let n = 2 * g;
        let fail = |msg: String| Err(Error::ZipAxiom(format!("{}: {msg}", self.w)));
        let p_id = MonomialPMatrix::diagonal(vec![1; n]);
        for pos in &self.positions {
            let j = pos.j;
            if pos.f.mul(&pos.v) != p_id || pos.v.mul(&pos.f) != p_id {
                return fail(format!("F V = V F = p fails at position {j}"));
            }
            if !pos.f.is_integral() || !pos.v.is_integral() {
                return fail(format!("F or V is not integral at position {j}"));
            }
            if pos.c.len() != g || pos.d.len() != g {
                return fail(format!("|C| = {}, |D| = {} at position {j}", pos.c.len(), pos.d.len()));
            }
            if pos.v.image_mod_p() != pos.c || pos.v.kernel_mod_p() != pos.d {
                return fail(format!("C = im V or D = ker V fails at position {j}"));
            }
            let f5 = pos.f.reduce::<5>()?;
            let v5 = pos.v.reduce::<5>()?;
            let span = |s: &CoordSubspace| -> Vec<Vec<Check>> {
                s.iter()
                    .map(|&i| {
                        let mut e = vec![Check::new(0); n];
                        e[position(g, i)] = Check::new(1);
                        e
                    })
                    .collect()
            };
            if !same_span(&f5.kernel(), &span(&pos.c), n)
                || !same_span(&f5.image(), &span(&pos.d), n)
                || !same_span(&v5.image(), &span(&pos.c), n)
                || !same_span(&v5.kernel(), &span(&pos.d), n)
            {
                return fail(format!("row reduction disagrees with coordinate kernels at position {j}"));
            }
            let partner = self.at(-(j as i64))?;
            if !pos.c.is_disjoint(&negate(&partner.c)) || !pos.d.is_disjoint(&negate(&partner.d)) {
                return fail(format!("C or D is not Lagrangian against position -{j}"));
            }
        }
        for ((ls, le), (rs, re)) in self.pairing_terms()? {
            if le != re || ls != self.multiplier * rs {
                return fail(format!("pairing axiom fails with u = {}", self.multiplier));
            }
        }
        self.verify_chain_compatibility()
    }

    /// `F_i α = α F_j` and `V_i α = α V_j` for every transition `Λ^j → Λ^i`
    /// inside one period, including the wrap-around `Λ^{2g} = pΛ^0`, and
    /// `α(C_j) ⊆ C_i`, `α(D_j) ⊆ D_i` mod `p`.
    fn verify_chain_compatibility(&self) -> Result<()> {
        let g = self.k.g();
        let n = 2 * g;
        let mut js: Vec<usize> = self.positions.iter().map(|p| p.j).collect();
        js.push(n);
        for (a, &j) in js.iter().enumerate() {
            for &i in &js[..a] {
                let alpha_exps: Vec<i32> = lattice_exponents(g, j as i64)
                    .iter()
                    .zip(lattice_exponents(g, i as i64))
                    .map(|(x, y)| x - y)
                    .collect();
                let alpha = MonomialPMatrix::diagonal(alpha_exps);
                let (pj, pi) = (self.at(j as i64)?, self.at(i as i64)?);
                if pi.f.mul(&alpha) != alpha.mul(&pj.f) || pi.v.mul(&alpha) != alpha.mul(&pj.v) {
                    return Err(Error::ZipAxiom(format!("{}: F or V does not commute with α_{{{j},{i}}}", self.w)));
                }
                let killed = alpha.kernel_mod_p();
                let carried = |s: &CoordSubspace| -> CoordSubspace { s.difference(&killed).copied().collect() };
                if !carried(&pj.c).is_subset(&pi.c) || !carried(&pj.d).is_subset(&pi.d) {
                    return Err(Error::ZipAxiom(format!("{}: α_{{{j},{i}}} does not respect C or D", self.w)));
                }
            }
        }
        Ok(())
    }

    /// KR type: the minimal representative of `W_K w W_K`.
    pub fn kr_type(&self, pw: &ParahoricWeyl<'_>) -> Result<ExtAffineElement> {
        pw.kr_type(&self.w)
    }

    /// Ekedahl-Oort invariant of the zip at a symplectic position `j ∈ gZ ∩ J`.
    pub fn eo_invariant(&self, j: i64) -> Result<EOInvariant> {
        let g = self.k.g() as i64;
        if j.rem_euclid(g) != 0 || !self.k.contains(j) {
            return Err(Error::NotSymplecticPosition(j));
        }
        let pos = self.at(j)?;
        Ok(eo_invariant_of(self.w.pi(), &pos.nu))
    }
}

/// Combinatorial Ekedahl-Oort data of the mod-`p` Dieudonné space with
/// `F e_i = e_{π(i)}` if `ν_{π(i)} = 0` (else 0) and `V e_l = e_{π⁻¹(l)}`
/// if `ν_l = 1` (else 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EOInvariant {
    pub p_rank: usize,
    pub a_number: usize,
    /// `(dim W, dim F(W))` over the coarsest filtration stable under `F(·)`
    /// and `V^{-1}(·)`, by increasing dimension.
    pub final_profile: Vec<(usize, usize)>,
}

struct ModP<'a> {
    g: usize,
    pi: &'a SignedPermutation,
    nu: &'a [i32],
}

impl ModP<'_> {
    fn f_image(&self, w: &BTreeSet<usize>) -> BTreeSet<usize> {
        w.iter().map(|&i| self.pi.apply_position(i)).filter(|&r| self.nu[r] == 0).collect()
    }

    fn v_image(&self, w: &BTreeSet<usize>) -> BTreeSet<usize> {
        let inv = self.pi.inverse();
        w.iter().filter(|&&l| self.nu[l] == 1).map(|&l| inv.apply_position(l)).collect()
    }

    fn v_preimage(&self, w: &BTreeSet<usize>) -> BTreeSet<usize> {
        let inv = self.pi.inverse();
        (0..2 * self.g).filter(|&l| self.nu[l] == 0 || w.contains(&inv.apply_position(l))).collect()
    }

    fn stable_dim(&self, step: impl Fn(&BTreeSet<usize>) -> BTreeSet<usize>) -> usize {
        let mut cur: BTreeSet<usize> = (0..2 * self.g).collect();
        loop {
            let next = step(&cur);
            if next == cur {
                return cur.len();
            }
            cur = next;
        }
    }
}

pub fn eo_invariant_of(pi: &SignedPermutation, nu: &[i32]) -> EOInvariant {
    let g = pi.g();
    let m = ModP { g, pi, nu };
    let all: BTreeSet<usize> = (0..2 * g).collect();
    let c: BTreeSet<usize> = all.iter().copied().filter(|&i| nu[pi.apply_position(i)] == 1).collect();
    let d: BTreeSet<usize> = all.iter().copied().filter(|&k| nu[k] == 0).collect();
    let p_rank = m.stable_dim(|w| m.f_image(w));
    let mut seen: BTreeSet<BTreeSet<usize>> = [BTreeSet::new(), all].into_iter().collect();
    let mut frontier: Vec<BTreeSet<usize>> = seen.iter().cloned().collect();
    while let Some(w) = frontier.pop() {
        for next in [m.f_image(&w), m.v_preimage(&w)] {
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    let mut final_profile: Vec<(usize, usize)> = seen.iter().map(|w| (w.len(), m.f_image(w).len())).collect();
    final_profile.sort();
    final_profile.dedup();
    EOInvariant { p_rank, a_number: c.intersection(&d).count(), final_profile }
}

/// Stabilized dimension of the iterated `V`-images; agrees with the
/// `p`-rank by duality.
pub fn v_stable_rank(pi: &SignedPermutation, nu: &[i32]) -> usize {
    let m = ModP { g: pi.g(), pi, nu };
    m.stable_dim(|w| m.v_image(w))
}

/// Conventional names for the four `g = 2` Ekedahl-Oort classes, assigned
/// in order of increasing `p`-rank and then decreasing `a`-number. A derived
/// convenience, not an intrinsic labelling.
pub fn eo_label_g2(inv: &EOInvariant) -> Option<&'static str> {
    match (inv.p_rank, inv.a_number) {
        (0, 2) => Some("id"),
        (0, 1) => Some("(-2 2)"),
        (1, 1) => Some("(-2 -1 2 1)"),
        (2, 0) => Some("(-2 1)(-1 2)"),
        _ => None,
    }
}

/// `F_0` of every admissible element, without the symplectic signs, in
/// the order of the input.
pub fn frobenii_table(adm: &[ExtAffineElement]) -> Vec<MonomialPMatrix> {
    adm.iter().map(MonomialPMatrix::from_element).collect()
}

/// One row of the strata table at a level containing positions `0` and `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataRow {
    pub w: ExtAffineElement,
    pub kr_type: ExtAffineElement,
    pub c0: CoordSubspace,
    pub d0: CoordSubspace,
    pub cg: CoordSubspace,
    pub dg: CoordSubspace,
    pub eo0: EOInvariant,
    pub eog: EOInvariant,
}

impl StrataRow {
    pub fn label(&self) -> Option<&'static str> {
        (self.w.g() == 2).then(|| eo_label_g2(&self.eo0)).flatten()
    }

    pub fn to_tsv(&self) -> String {
        [
            self.w.to_string(),
            self.kr_type.to_string(),
            render_index_set(&self.c0),
            render_index_set(&self.d0),
            render_index_set(&self.cg),
            render_index_set(&self.dg),
            self.eo0.p_rank.to_string(),
            self.eo0.a_number.to_string(),
        ]
        .join("\t")
    }
}

pub const STRATA_TSV_HEADER: &str = "w\tkr_type\tC0\tD0\tCg\tDg\tp_rank\ta_number";

/// The strata table over the EKOR set of `pw`, which must contain positions 0 and `g`.
pub fn eo_table(pw: &ParahoricWeyl<'_>) -> Result<Vec<StrataRow>> {
    let k = pw.parahoric();
    let g = k.g() as i64;
    if !k.contains(0) || !k.contains(g) {
        return Err(Error::InvalidParahoric(format!("strata table needs 0 and {g} in J")));
    }
    pw.ekor_set()?
        .into_iter()
        .map(|w| {
            let zip = standard_zip(&w, k)?;
            let (z0, zg) = (zip.at(0)?, zip.at(g)?);
            Ok(StrataRow {
                kr_type: zip.kr_type(pw)?,
                c0: z0.c.clone(),
                d0: z0.d.clone(),
                cg: zg.c.clone(),
                dg: zg.d.clone(),
                eo0: zip.eo_invariant(0)?,
                eog: zip.eo_invariant(g)?,
                w,
            })
        })
        .collect()
}

/// A row of an externally supplied strata table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub w: ExtAffineElement,
    pub kr_type: ExtAffineElement,
    pub c0: CoordSubspace,
    pub d0: CoordSubspace,
    pub cg: CoordSubspace,
    pub dg: CoordSubspace,
    pub label: String,
}

fn parse_index_set(s: &str) -> Result<CoordSubspace> {
    let bad = || Error::Parse { input: s.to_string(), reason: "expected {a,b,…}".into() };
    let inner = s.trim().strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(bad)?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.replace('\u{2212}', "-").parse::<Index>().map_err(|_| bad()))
        .collect()
}

/// Parses a tab-separated table with columns `w, kr_type, C0, D0, Cg, Dg,
/// label`; `#` starts a comment line and `<-` in `kr_type` repeats `w`.
pub fn parse_reference_table(text: &str) -> Result<Vec<ReferenceRow>> {
    let mut rows = Vec::new();
    for line in text.lines().map(str::trim_end).filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 7 {
            return Err(Error::Parse { input: line.into(), reason: format!("expected 7 columns, got {}", cols.len()) });
        }
        let w: ExtAffineElement = cols[0].parse()?;
        let kr_type = if cols[1].trim() == "<-" { w.clone() } else { cols[1].parse()? };
        rows.push(ReferenceRow {
            w,
            kr_type,
            c0: parse_index_set(cols[2])?,
            d0: parse_index_set(cols[3])?,
            cg: parse_index_set(cols[4])?,
            dg: parse_index_set(cols[5])?,
            label: cols[6].trim().to_string(),
        });
    }
    Ok(rows)
}

/// Column-wise agreement of a computed row with a reference row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowComparison {
    pub w: ExtAffineElement,
    pub kr_type: bool,
    pub c0: bool,
    pub d0: bool,
    pub cg: bool,
    pub dg: bool,
    pub label: bool,
    /// Our `D0` equals the reference `Cg` and our `Cg` the reference `D0`.
    pub d0_cg_swapped: bool,
}

impl RowComparison {
    pub fn all_agree(&self) -> bool {
        self.kr_type && self.c0 && self.d0 && self.cg && self.dg && self.label
    }
}

/// Matches rows by `w`; reference rows without a computed counterpart are errors.
pub fn compare_with_reference(rows: &[StrataRow], reference: &[ReferenceRow]) -> Result<Vec<RowComparison>> {
    let by_w: BTreeMap<&ExtAffineElement, &StrataRow> = rows.iter().map(|r| (&r.w, r)).collect();
    reference
        .iter()
        .map(|rf| {
            let r = by_w.get(&rf.w).ok_or_else(|| Error::Internal(format!("{} missing from computed table", rf.w)))?;
            Ok(RowComparison {
                w: rf.w.clone(),
                kr_type: r.kr_type == rf.kr_type,
                c0: r.c0 == rf.c0,
                d0: r.d0 == rf.d0,
                cg: r.cg == rf.cg,
                dg: r.dg == rf.dg,
                label: r.label() == Some(rf.label.as_str()),
                d0_cg_swapped: r.d0 == rf.cg && r.cg == rf.d0,
            })
        })
        .collect()
}

/// All bijections `σ` of `{±1, …, ±g}` with `σ(ours) = theirs` for every
/// pair, each given as the images of `index_at(g, 0..2g)`.
pub fn find_reindexings(g: usize, pairs: &[(CoordSubspace, CoordSubspace)]) -> Vec<Vec<Index>> {
    let idx: Vec<Index> = (0..2 * g).map(|p| index_at(g, p)).collect();
    let mut out = Vec::new();
    let mut perm = idx.clone();
    permutations(&mut perm, 0, &mut |sigma| {
        let map = |s: &CoordSubspace| -> CoordSubspace { s.iter().map(|&i| sigma[position(g, i)]).collect() };
        if pairs.iter().all(|(a, b)| &map(a) == b) {
            out.push(sigma.to_vec());
        }
    });
    out
}

fn permutations(v: &mut Vec<Index>, k: usize, visit: &mut impl FnMut(&[Index])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, visit);
        v.swap(k, i);
    }
}
