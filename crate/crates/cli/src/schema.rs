//! JSON documents written by the command-line tool, and their inverses.

use parclass_core::canonical::Gjnf;
use parclass_core::centralizer::{Generator, GeneratorKind, TruncAlgElement};
use parclass_core::classes::ClassRep;
use parclass_core::cocentralizer::{CocentElement, CocentShape};
use parclass_core::interp::CountPoly;
use parclass_core::matproblem::{OrbitSet, TypeKind, TypeVerdict};
use parclass_core::matrix::Matrix;
use parclass_core::{Fe, Field, Partition, Poly, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GjnfFactor {
    pub poly: String,
    pub partition: Vec<usize>,
}

pub fn gjnf_json(k: &Field, g: &Gjnf) -> Vec<GjnfFactor> {
    g.factors()
        .iter()
        .map(|(p, l)| GjnfFactor { poly: p.format(k), partition: l.parts().to_vec() })
        .collect()
}

pub fn gjnf_from_json(k: &Field, factors: &[GjnfFactor]) -> Result<Gjnf> {
    let parsed = factors
        .iter()
        .map(|f| Ok((Poly::parse(k, &f.poly)?, Partition::new(f.partition.clone())?)))
        .collect::<Result<Vec<_>>>()?;
    Gjnf::new(k, parsed)
}

/// Coefficients `x^offset, x^(offset+1), ..` of one centralizer block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub offset: usize,
    pub coeffs: Vec<String>,
}

pub fn trunc_json(e: &TruncAlgElement) -> Vec<Vec<Window>> {
    let k = e.field();
    let n = e.lambda().len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Window {
                    offset: e.offset(i, j),
                    coeffs: e.window(i, j).iter().map(|&c| k.format(c)).collect(),
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub kind: String,
    pub element: Vec<Vec<Window>>,
    /// The embedded matrix over the base field, when an eigenvalue is given.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matrix: Option<String>,
}

pub fn generator_kind(k: &Field, kind: &GeneratorKind) -> String {
    let unit = |a: &[Fe]| a.iter().map(|&c| k.format(c)).collect::<Vec<_>>().join(",");
    match kind {
        GeneratorKind::M { size, copy, a } => format!("M(size={size},copy={copy},a={})", unit(a)),
        GeneratorKind::E { size, l, m } => format!("E(size={size},copies={l},{m})"),
        GeneratorKind::ALe { i, j, l, m, a } => format!("A(i={i},j={j},copies={l},{m},a={})", unit(a)),
        GeneratorKind::AGe { i, j, l, m, a } => format!("A(i={i},j={j},copies={l},{m},a=x^{}*{})", i - j, unit(a)),
    }
}

pub fn generator_doc(g: &Generator, matrix: Option<(&Field, &Matrix)>) -> GeneratorDoc {
    GeneratorDoc {
        kind: generator_kind(g.realized.field(), &g.kind),
        element: trunc_json(&g.realized),
        matrix: matrix.map(|(k, m)| m.format(k)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerDoc {
    pub lambda: Vec<usize>,
    pub poly: String,
    pub q: u32,
    /// Dimension over the base field of the commutant of `J_lambda(C_p)`.
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generators: Option<Vec<GeneratorDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocentDoc {
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
    pub entries: Vec<Vec<String>>,
}

fn coeff_list(k: &Field, c: &[Fe]) -> String {
    c.iter().map(|&x| k.format(x)).collect::<Vec<_>>().join(",")
}

pub fn cocent_json(v: &CocentElement) -> CocentDoc {
    let sh = v.shape();
    let k = sh.field();
    CocentDoc {
        mu: sh.mu().parts().to_vec(),
        nu: sh.nu().parts().to_vec(),
        entries: (0..sh.rows()).map(|i| (0..sh.cols()).map(|j| coeff_list(k, v.entry(i, j))).collect()).collect(),
    }
}

pub fn cocent_from_json(k: &Field, doc: &CocentDoc) -> Result<CocentElement> {
    let shape = CocentShape::new(&Partition::new(doc.mu.clone())?, &Partition::new(doc.nu.clone())?, k)?;
    let entries = doc
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.split(',').map(|c| k.parse(c)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    CocentElement::from_entries(&shape, entries)
}

/// Whether every coefficient of `v` is 0 or 1.
pub fn is_zero_one(v: &CocentElement) -> bool {
    v.flat().iter().all(|c| c.0 <= 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSetDoc {
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
    pub q: u32,
    pub count: usize,
    pub reps: Vec<CocentDoc>,
    pub sizes: Vec<u64>,
}

pub fn orbit_set_json(s: &OrbitSet) -> OrbitSetDoc {
    OrbitSetDoc {
        mu: s.shape.mu().parts().to_vec(),
        nu: s.shape.nu().parts().to_vec(),
        q: s.shape.field().order(),
        count: s.count(),
        reps: s.reps.iter().map(cocent_json).collect(),
        sizes: s.sizes.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
    #[serde(rename = "type")]
    pub kind: String,
    pub rule: String,
}

pub fn verdict_json(mu: &Partition, nu: &Partition, v: &TypeVerdict) -> VerdictDoc {
    let kind = match v.kind {
        TypeKind::Finite => "finite",
        TypeKind::Infinite => "infinite",
        TypeKind::Unknown => "unknown",
    };
    VerdictDoc { mu: mu.parts().to_vec(), nu: nu.parts().to_vec(), kind: kind.into(), rule: v.rule.clone() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub poly: String,
    pub rep: CocentDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRepDoc {
    pub levi_a: Vec<GjnfFactor>,
    pub levi_b: Vec<GjnfFactor>,
    pub blocks: Vec<BlockDoc>,
    pub matrix: String,
}

pub fn class_rep_json(k: &Field, r: &ClassRep) -> ClassRepDoc {
    ClassRepDoc {
        levi_a: gjnf_json(k, &r.levi_a),
        levi_b: gjnf_json(k, &r.levi_b),
        blocks: r.blocks.iter().map(|(p, v)| BlockDoc { poly: p.format(k), rep: cocent_json(v) }).collect(),
        matrix: r.matrix.format(k),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicCountDoc {
    pub m: usize,
    pub n: usize,
    pub q: u32,
    pub count: u128,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reps: Option<Vec<ClassRepDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AglCountDoc {
    pub n: usize,
    pub q: u32,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reps: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDoc {
    pub m: usize,
    pub n: usize,
    pub q: u32,
    pub count: usize,
    pub group_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub m: usize,
    pub n: usize,
    pub coeffs: Vec<i128>,
    pub display: String,
    pub nodes: Vec<u64>,
}

pub fn poly_json(m: usize, n: usize, p: &CountPoly) -> PolyDoc {
    PolyDoc { m, n, coeffs: p.coeffs.clone(), display: p.to_string(), nodes: p.nodes.clone() }
}
