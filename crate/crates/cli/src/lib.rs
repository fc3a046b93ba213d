//! Record types and command implementations behind the `ekor` binary.
//!
//! Every command produces an [`OutputRecord`]; it renders as TSV or as the
//! JSON described in `docs/json-schema.md`.

use std::fmt::Write as _;

use ekor_core::admissible::{admissible_set, ParahoricType, ParahoricWeyl};
use ekor_core::building::{chain_from_point, named_point, render_pattern_entry, walls_through_point, ApartmentPoint};
use ekor_core::chains::{render_index_set, StandardChain, SubspaceKind};
use ekor_core::weyl::WeylGroup;
use ekor_core::zips::{compare_with_reference, eo_table, parse_reference_table, MonomialPMatrix, STRATA_TSV_HEADER};
use ekor_core::Rational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Parameters,
    pub result: Payload,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Adm { elements: Vec<AdmEntry> },
    Kr { tags: Vec<KrEntry>, order: Vec<(usize, usize)> },
    Ekor { elements: Vec<EkorEntry> },
    Zips { rows: Vec<ZipRow> },
    Rdt(RdtPayload),
    Building(BuildingPayload),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmEntry {
    pub w: String,
    pub length: u32,
    pub frobenius: String,
}

/// `order` in [`Payload::Kr`] lists `(a, b)` with tag `a` below tag `b`,
/// as indices into `tags`, reflexive pairs included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrEntry {
    pub kr_type: String,
    pub length: u32,
    pub coset_size: usize,
    pub ekor: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EkorEntry {
    pub w: String,
    pub length: u32,
    pub kr_type: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZipRow {
    pub w: String,
    pub kr_type: String,
    pub c0: String,
    pub d0: String,
    pub cg: String,
    pub dg: String,
    pub p_rank: usize,
    pub a_number: usize,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RdtPayload {
    pub description: String,
    pub factors: Vec<String>,
    pub isomorphism_type: Vec<String>,
    pub dynkin_type: Vec<String>,
    pub subspaces: Vec<SubspaceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceEntry {
    pub kind: String,
    pub source: i64,
    pub target: i64,
    pub indices: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingPayload {
    pub point: String,
    pub chain: Vec<LatticeEntry>,
    pub normalized: Vec<LatticeEntry>,
    pub pattern: Vec<Vec<String>>,
    pub walls: Vec<WallEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeEntry {
    pub exps: Vec<i64>,
    pub lattice: String,
    pub grading: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallEntry {
    pub family: String,
    pub n: i64,
}

/// Bad arguments (exit code 2) versus a golden mismatch (exit code 1).
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Mismatch(String),
}

impl From<ekor_core::Error> for CliError {
    fn from(e: ekor_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn check_g(g: usize, max: usize) -> CliResult<()> {
    if g == 0 || g > max {
        return Err(CliError::Invalid(format!("--g must be between 1 and {max}, got {g}")));
    }
    Ok(())
}

fn parahoric(g: usize, vertices: &[usize]) -> CliResult<ParahoricType> {
    Ok(ParahoricType::new(g, vertices.iter().copied())?)
}

pub fn cmd_adm(g: usize) -> CliResult<OutputRecord> {
    check_g(g, 4)?;
    let wg = WeylGroup::new(g)?;
    let elements = admissible_set(g)
        .iter()
        .map(|w| AdmEntry { w: w.to_string(), length: wg.length(w), frobenius: MonomialPMatrix::from_element(w).to_string() })
        .collect();
    Ok(OutputRecord {
        command: "adm".into(),
        parameters: Parameters { g: Some(g), ..Default::default() },
        result: Payload::Adm { elements },
    })
}

pub fn cmd_kr(g: usize, vertices: &[usize]) -> CliResult<OutputRecord> {
    check_g(g, 3)?;
    let wg = WeylGroup::new(g)?;
    let k = parahoric(g, vertices)?;
    let pw = ParahoricWeyl::new(&wg, &k)?;
    let tags = pw.kr_set()?;
    let ekor = pw.ekor_set()?;
    let order = pw.kr_poset(&tags)?;
    let entries = tags
        .iter()
        .map(|t| {
            let over: Vec<String> = ekor.iter().filter(|w| t.members.contains(w)).map(|w| w.to_string()).collect();
            KrEntry { kr_type: t.min_rep.to_string(), length: wg.length(&t.min_rep), coset_size: t.members.len(), ekor: over }
        })
        .collect();
    Ok(OutputRecord {
        command: "kr".into(),
        parameters: Parameters { g: Some(g), vertices: Some(vertices.to_vec()), point: None },
        result: Payload::Kr { tags: entries, order },
    })
}

pub fn cmd_ekor(g: usize, vertices: &[usize]) -> CliResult<OutputRecord> {
    check_g(g, 3)?;
    let wg = WeylGroup::new(g)?;
    let k = parahoric(g, vertices)?;
    let pw = ParahoricWeyl::new(&wg, &k)?;
    let elements = pw
        .ekor_set()?
        .iter()
        .map(|w| Ok(EkorEntry { w: w.to_string(), length: wg.length(w), kr_type: pw.kr_type(w)?.to_string() }))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(OutputRecord {
        command: "ekor".into(),
        parameters: Parameters { g: Some(g), vertices: Some(vertices.to_vec()), point: None },
        result: Payload::Ekor { elements },
    })
}

pub fn cmd_zips(g: usize, vertices: &[usize]) -> CliResult<OutputRecord> {
    check_g(g, 3)?;
    let wg = WeylGroup::new(g)?;
    let k = parahoric(g, vertices)?;
    let pw = ParahoricWeyl::new(&wg, &k)?;
    let rows = eo_table(&pw)?
        .iter()
        .map(|r| ZipRow {
            w: r.w.to_string(),
            kr_type: r.kr_type.to_string(),
            c0: render_index_set(&r.c0),
            d0: render_index_set(&r.d0),
            cg: render_index_set(&r.cg),
            dg: render_index_set(&r.dg),
            p_rank: r.eo0.p_rank,
            a_number: r.eo0.a_number,
            label: r.label().map(str::to_string),
        })
        .collect();
    Ok(OutputRecord {
        command: "zips".into(),
        parameters: Parameters { g: Some(g), vertices: Some(vertices.to_vec()), point: None },
        result: Payload::Zips { rows },
    })
}

pub fn cmd_rdt(g: usize, vertices: &[usize]) -> CliResult<OutputRecord> {
    check_g(g, 60)?;
    let chain = StandardChain::new(&parahoric(g, vertices)?);
    let subspaces = chain
        .distinguished_subspaces()?
        .into_iter()
        .map(|d| SubspaceEntry {
            kind: if d.kind == SubspaceKind::Symmetric { "symmetric" } else { "one-sided" }.into(),
            source: d.source,
            target: d.target,
            indices: render_index_set(&d.indices),
        })
        .collect();
    let r = chain.rdt_factors()?;
    let names = |v: Vec<ekor_core::chains::Factor>| v.iter().map(|f| f.to_string()).collect::<Vec<_>>();
    Ok(OutputRecord {
        command: "rdt".into(),
        parameters: Parameters { g: Some(g), vertices: Some(vertices.to_vec()), point: None },
        result: Payload::Rdt(RdtPayload {
            description: r.to_string(),
            factors: names(r.factors.clone()),
            isomorphism_type: names(r.isomorphism_type()),
            dynkin_type: names(r.dynkin_type()),
            subspaces,
        }),
    })
}

/// `point` is a registered name or coordinates like `(-1/4,-1/4,1/4,1/4)`.
pub fn cmd_building(point: &str) -> CliResult<OutputRecord> {
    let v: ApartmentPoint<Rational> = match named_point(point) {
        Ok(v) => v,
        Err(_) if point.trim_start().starts_with('(') => point.parse()?,
        Err(e) => return Err(e.into()),
    };
    let chain = chain_from_point(&v);
    let entry = |(l, c): &(ekor_core::building::DiagonalLattice, Rational)| LatticeEntry {
        exps: l.exps.clone(),
        lattice: l.to_string(),
        grading: c.to_string(),
    };
    let pattern = chain
        .parahoric_pattern()
        .iter()
        .map(|row| row.iter().map(|&b| render_pattern_entry(b)).collect())
        .collect();
    let walls = walls_through_point(&v).into_iter().map(|w| WallEntry { family: w.family, n: w.n }).collect();
    Ok(OutputRecord {
        command: "building".into(),
        parameters: Parameters { point: Some(point.to_string()), ..Default::default() },
        result: Payload::Building(BuildingPayload {
            point: v.to_string(),
            chain: chain.members.iter().map(entry).collect(),
            normalized: chain.normalized().iter().map(entry).collect(),
            pattern,
            walls,
        }),
    })
}

impl OutputRecord {
    /// Header line (if any) followed by data lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let mut line = |fields: &[String]| {
            let _ = writeln!(out, "{}", fields.join("\t"));
        };
        let s = |x: &str| x.to_string();
        match &self.result {
            Payload::Adm { elements } => {
                line(&[s("w"), s("length"), s("F0")]);
                for e in elements {
                    line(&[e.w.clone(), e.length.to_string(), e.frobenius.clone()]);
                }
            }
            Payload::Kr { tags, order } => {
                line(&[s("kr_type"), s("length"), s("coset_size"), s("ekor"), s("below")]);
                for (b, t) in tags.iter().enumerate() {
                    let below: Vec<String> =
                        order.iter().filter(|&&(a, bb)| bb == b && a != b).map(|&(a, _)| (a + 1).to_string()).collect();
                    line(&[t.kr_type.clone(), t.length.to_string(), t.coset_size.to_string(), t.ekor.join(","), below.join(",")]);
                }
            }
            Payload::Ekor { elements } => {
                line(&[s("w"), s("length"), s("kr_type")]);
                for e in elements {
                    line(&[e.w.clone(), e.length.to_string(), e.kr_type.clone()]);
                }
            }
            Payload::Zips { rows } => {
                line(&[s(STRATA_TSV_HEADER), s("label")]);
                for r in rows {
                    line(&[
                        r.w.clone(),
                        r.kr_type.clone(),
                        r.c0.clone(),
                        r.d0.clone(),
                        r.cg.clone(),
                        r.dg.clone(),
                        r.p_rank.to_string(),
                        r.a_number.to_string(),
                        r.label.clone().unwrap_or_else(|| s("-")),
                    ]);
                }
            }
            Payload::Rdt(r) => {
                line(&[s("factors"), r.description.clone()]);
                line(&[s("dynkin_type"), r.dynkin_type.join(" x ")]);
                line(&[s("isomorphism_type"), r.isomorphism_type.join(" x ")]);
                for d in &r.subspaces {
                    line(&[d.kind.clone(), d.indices.clone(), d.source.to_string(), d.target.to_string()]);
                }
            }
            Payload::Building(b) => {
                line(&[s("point"), b.point.clone()]);
                for l in &b.normalized {
                    line(&[s("lattice"), l.lattice.clone(), l.grading.clone()]);
                }
                for row in &b.pattern {
                    line(&[s("pattern"), row.join(" ")]);
                }
                for w in &b.walls {
                    line(&[s("wall"), w.family.clone(), w.n.to_string()]);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize") + "\n"
    }
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).collect()
}

/// Compares against a golden file. Every golden line must match the leading
/// fields of a distinct output line and the row counts must agree; a header
/// line equal to ours is skipped. A `zips` record checked against a 7-column
/// reference table is compared column by column instead.
pub fn compare_golden(record: &OutputRecord, golden: &str) -> CliResult<String> {
    if let Payload::Zips { .. } = record.result {
        if let Ok(reference) = parse_reference_table(golden) {
            return compare_zips_reference(record, &reference);
        }
    }
    let tsv = record.to_tsv();
    let mut ours = data_lines(&tsv);
    let header = ours.remove(0);
    let theirs: Vec<&str> = data_lines(golden).into_iter().filter(|l| *l != header).collect();
    let mut unused: Vec<Vec<&str>> = ours.iter().map(|l| l.split('\t').collect()).collect();
    let mut missing = Vec::new();
    for g in &theirs {
        let fields: Vec<&str> = g.split('\t').collect();
        match unused.iter().position(|o| o.len() >= fields.len() && o[..fields.len()] == fields[..]) {
            Some(i) => {
                unused.remove(i);
            }
            None => missing.push(g.to_string()),
        }
    }
    if missing.is_empty() && unused.is_empty() {
        return Ok(format!("golden: {} lines match", theirs.len()));
    }
    let mut msg = String::new();
    for m in &missing {
        let _ = writeln!(msg, "missing from output: {m}");
    }
    for u in &unused {
        let _ = writeln!(msg, "not in golden file: {}", u.join("\t"));
    }
    Err(CliError::Mismatch(msg))
}

fn compare_zips_reference(record: &OutputRecord, reference: &[ekor_core::zips::ReferenceRow]) -> CliResult<String> {
    let Parameters { g: Some(g), vertices: Some(v), .. } = &record.parameters else {
        return Err(CliError::Invalid("zips record without parameters".into()));
    };
    let wg = WeylGroup::new(*g)?;
    let pw = ParahoricWeyl::new(&wg, &parahoric(*g, v)?)?;
    let rows = eo_table(&pw)?;
    let cmp = compare_with_reference(&rows, reference)?;
    let mut report = String::new();
    let mark = |b: bool| if b { "ok" } else { "DIFF" };
    for c in &cmp {
        let _ = writeln!(
            report,
            "{}\tkr_type {}\tC0 {}\tD0 {}\tCg {}\tDg {}\tlabel {}{}",
            c.w,
            mark(c.kr_type),
            mark(c.c0),
            mark(c.d0),
            mark(c.cg),
            mark(c.dg),
            mark(c.label),
            if c.d0_cg_swapped && !(c.d0 && c.cg) { "\t(D0 and Cg interchanged)" } else { "" }
        );
    }
    if cmp.iter().all(|c| c.all_agree()) && cmp.len() == rows.len() {
        Ok(report)
    } else {
        Err(CliError::Mismatch(report))
    }
}
