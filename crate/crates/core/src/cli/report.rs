//! The JSON result document and the commands that fill it.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSpec;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::gutkin::{Engine, LevelRecord, MonomialPair};

pub const SCHEMA_VERSION: u32 = 1;

/// Lemma checks enumerate `G x G`; they run only up to this order.
pub const LEMMA_CHECK_MAX_ORDER: u64 = 729;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub algebra: AlgebraSummary,
    pub orders: Orders,
    pub class_count: usize,
    pub table: TableDoc,
    pub decompositions: Vec<DecompositionDoc>,
    pub checks: Checks,
    pub passed: bool,
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSummary {
    pub field: FieldSpec,
    pub dim: usize,
    pub basis: Vec<String>,
    pub nilpotency_class: usize,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Orders {
    /// `|G|`, absent if it does not fit in 64 bits.
    pub group: Option<u64>,
    pub fixed: u64,
    /// `|[G, sigma]|`, when it was enumerated.
    pub twisted: Option<u64>,
    /// Size of the set `{g sigma(g)}`.
    pub twisted_set: Option<u64>,
    pub q_sigma: u64,
    pub dim_cj: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableDoc {
    pub class_sizes: Vec<usize>,
    /// Class representatives `1 + a`, by the coordinates of `a`.
    pub representatives: Vec<Vec<Vec<u32>>>,
    pub characters: Vec<CharacterDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterDoc {
    pub degree: i64,
    pub values: Vec<Cyclotomic>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub character: usize,
    pub degree: i64,
    pub matched: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Certificate for `(H, theta)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDoc {
    pub h_dim: usize,
    /// Echelon basis of `L_H` over the prime field, as algebra coordinates.
    pub h_basis: Vec<Vec<Vec<u32>>>,
    pub h_fixed_order: usize,
    /// Cyclic factors of `C_H(sigma)^{ab}`: generator coordinates and order.
    pub theta_factors: Vec<(Vec<Vec<u32>>, u64)>,
    pub theta: Vec<u64>,
    pub depth: usize,
    pub trace: Vec<LevelRecord>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub irreducible_norms: Option<bool>,
    pub degree_sum: Option<bool>,
    pub degrees_are_powers: Option<bool>,
    pub all_matched: Option<bool>,
    pub comm_lemma: Option<bool>,
    pub twisted_decomposition: Option<bool>,
    pub twisted_set_decomposition: Option<bool>,
    pub cayley_roundtrip: Option<bool>,
    pub lie_closure: Option<bool>,
}

fn coords(spec: &AlgebraSpec, a: &crate::algebra::AlgebraElement) -> Vec<Vec<u32>> {
    a.coords().iter().map(|&x| spec.field().coeffs(x)).collect()
}

fn pair_doc(spec: &AlgebraSpec, pair: &MonomialPair) -> PairDoc {
    let ab = pair.group.abelianization();
    PairDoc {
        h_dim: pair.dim,
        h_basis: spec
            .basis_of(&pair.algebra)
            .iter()
            .map(|b| coords(spec, b))
            .collect(),
        h_fixed_order: pair.group.order(),
        theta_factors: ab
            .factors
            .iter()
            .map(|(g, o)| (coords(spec, g.offset()), *o))
            .collect(),
        theta: pair.theta.exponents().to_vec(),
        depth: pair.trace.len(),
        trace: pair.trace.clone(),
    }
}

fn group_order(spec: &AlgebraSpec) -> Option<u64> {
    (spec.field().order() as u64).checked_pow(spec.dim() as u32)
}

fn skeleton(command: &str, engine: &Engine) -> Result<ResultDocument> {
    let spec = engine.spec();
    let group = engine.fixed_group()?;
    let table = engine.table(&group)?;
    let dim_cj = spec.dim_fixed(&spec.minus_fixed_space(&spec.full_space())?);
    let reps = (0..group.classes().len())
        .map(|c| coords(spec, group.representative(c).offset()))
        .collect();
    let characters = table
        .iter()
        .map(|chi| CharacterDoc {
            degree: chi.degree().unwrap_or(0),
            values: chi.values().to_vec(),
        })
        .collect();
    Ok(ResultDocument {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        seed: engine.seed(),
        algebra: AlgebraSummary {
            field: spec.field().spec().clone(),
            dim: spec.dim(),
            basis: spec.basis_names().to_vec(),
            nilpotency_class: spec.nilpotency_class(),
            metadata: spec.metadata().iter().cloned().collect(),
        },
        orders: Orders {
            group: group_order(spec),
            fixed: group.order() as u64,
            twisted: None,
            twisted_set: None,
            q_sigma: spec.field().fixed_order(),
            dim_cj,
        },
        class_count: group.classes().len(),
        table: TableDoc {
            class_sizes: group.class_sizes(),
            representatives: reps,
            characters,
        },
        decompositions: Vec::new(),
        checks: Checks::default(),
        passed: true,
        failures: Vec::new(),
        timing_ms: None,
    })
}

fn finish(mut doc: ResultDocument) -> ResultDocument {
    let c = &doc.checks;
    let named = [
        (c.irreducible_norms, "irreducible_norms"),
        (c.degree_sum, "degree_sum"),
        (c.degrees_are_powers, "degrees_are_powers"),
        (c.all_matched, "all_matched"),
        (c.comm_lemma, "comm_lemma"),
        (c.twisted_decomposition, "twisted_decomposition"),
        (c.twisted_set_decomposition, "twisted_set_decomposition"),
        (c.cayley_roundtrip, "cayley_roundtrip"),
        (c.lie_closure, "lie_closure"),
    ];
    for (flag, name) in named {
        if flag == Some(false) {
            doc.failures.push(format!("check {name} failed"));
        }
    }
    for d in &doc.decompositions {
        if let Some(e) = &d.error {
            doc.failures.push(format!("character {}: {e}", d.character));
        } else if !d.matched {
            doc.failures.push(format!(
                "character {}: induced character does not match",
                d.character
            ));
        }
    }
    doc.passed = doc.failures.is_empty();
    doc
}

/// Character table of `C_G(sigma)` with orthogonality and degree checks.
pub fn cmd_table(engine: &Engine) -> Result<ResultDocument> {
    let mut doc = skeleton("table", engine)?;
    let group = engine.fixed_group()?;
    let table = engine.table(&group)?;
    let mut norms = true;
    for (i, a) in table.iter().enumerate() {
        for (j, b) in table.iter().enumerate() {
            if crate::characters::inner_product(a, b)? != i64::from(i == j).into() {
                norms = false;
            }
        }
    }
    doc.checks.irreducible_norms = Some(norms);
    let q = doc.orders.q_sigma;
    let sum: u64 = table
        .iter()
        .map(|c| c.degree().unwrap_or(0).pow(2) as u64)
        .sum();
    doc.checks.degree_sum =
        Some(sum == doc.orders.fixed && q.checked_pow(doc.orders.dim_cj as u32) == Some(sum));
    doc.checks.degrees_are_powers = Some(
        table
            .iter()
            .all(|c| crate::gutkin::is_power_of(c.degree().unwrap_or(0) as u64, q)),
    );
    Ok(finish(doc))
}

/// Descent of a single irreducible character.
pub fn cmd_decompose(engine: &Engine, index: usize) -> Result<ResultDocument> {
    let mut doc = skeleton("decompose", engine)?;
    let group = engine.fixed_group()?;
    let table = engine.table(&group)?;
    let chi = table.get(index).ok_or_else(|| {
        Error::Domain(format!(
            "character index {index} out of range 0..{}",
            table.len()
        ))
    })?;
    let degree = chi.degree().unwrap_or(0);
    let d = match engine.decompose(chi) {
        Ok(pair) => DecompositionDoc {
            character: index,
            degree,
            matched: pair.verified,
            pair: Some(pair_doc(engine.spec(), &pair)),
            error: None,
        },
        Err(e @ Error::Domain(_)) => return Err(e),
        Err(e) => DecompositionDoc {
            character: index,
            degree,
            matched: false,
            pair: None,
            error: Some(e.to_string()),
        },
    };
    doc.decompositions.push(d);
    Ok(finish(doc))
}

/// Every irreducible decomposed and checked, plus the structural lemmas
/// when the group is small enough.
pub fn cmd_verify(engine: &Engine) -> Result<ResultDocument> {
    let spec = engine.spec().clone();
    let mut doc = skeleton("verify", engine)?;
    let report = engine.verify_theorem()?;
    let mut norms = true;
    for c in &report.characters {
        norms &= c.norm_one;
        doc.decompositions.push(match &c.pair {
            Ok(pair) => DecompositionDoc {
                character: c.index,
                degree: c.degree,
                matched: c.matched(),
                pair: Some(pair_doc(&spec, pair)),
                error: None,
            },
            Err(e) => DecompositionDoc {
                character: c.index,
                degree: c.degree,
                matched: false,
                pair: None,
                error: Some(e.clone()),
            },
        });
    }
    doc.checks.irreducible_norms = Some(norms);
    doc.checks.degree_sum = Some(report.degree_sum);
    doc.checks.degrees_are_powers = Some(report.degrees_are_powers);
    doc.checks.all_matched = Some(report.characters.iter().all(|c| c.matched()));
    doc.checks.lie_closure = Some(spec.check_lie_closure()?);
    let order = group_order(&spec);
    if order.is_some_and(|o| o <= spec.limits().max_group_order) {
        let twisted = spec.sigma_twisted_part()?;
        doc.orders.twisted = Some(twisted.subgroup.order() as u64);
        doc.orders.twisted_set = Some(twisted.set_size as u64);
        doc.checks.twisted_decomposition = Some(twisted.passed());
        doc.checks.twisted_set_decomposition = Some(twisted.set_passed());
    }
    if order.is_some_and(|o| o <= LEMMA_CHECK_MAX_ORDER) {
        let mut comm = true;
        for n in 1..=spec.nilpotency_class().max(1) {
            comm &= spec.check_comm_lemma(n)?.holds;
        }
        doc.checks.comm_lemma = Some(comm);
        doc.checks.cayley_roundtrip = Some(spec.check_cayley_roundtrip()?);
    }
    Ok(finish(doc))
}

/// Serialized form, with a trailing newline.
pub fn to_json(doc: &ResultDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

pub fn engine_for(spec: AlgebraSpec, seed: u64) -> Engine {
    Engine::new(Arc::new(spec), seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::examples::{fixture_b, make_example, Family};

    #[test]
    fn verify_fixture_b() {
        let doc = cmd_verify(&engine_for(fixture_b(), 1)).unwrap();
        assert!(doc.passed, "{:?}", doc.failures);
        assert_eq!(doc.decompositions.len(), 3);
        assert_eq!(doc.orders.twisted, Some(1));
    }

    #[test]
    fn verify_u3_flip() {
        let doc = cmd_verify(&engine_for(make_example(Family::Flip, 3, 3).unwrap(), 1)).unwrap();
        assert!(doc.passed, "{:?}", doc.failures);
        assert_eq!(doc.orders.fixed, 3);
        assert!(doc.table.characters.iter().all(|c| c.degree == 1));
        assert_eq!(doc.orders.twisted, Some(9));
    }

    #[test]
    fn document_round_trips() {
        let doc = cmd_table(&engine_for(make_example(Family::Unitary, 3, 9).unwrap(), 3)).unwrap();
        let text = to_json(&doc);
        let back: ResultDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn decompose_rejects_bad_index() {
        let e = cmd_decompose(&engine_for(fixture_b(), 1), 10).unwrap_err();
        assert!(matches!(e, Error::Domain(_)));
    }
}
