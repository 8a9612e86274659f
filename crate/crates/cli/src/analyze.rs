//! The `lsc`, `group` and `words` subcommands.

use std::sync::Arc;

use serde_json::{json, Value};
use topos_core::filters::{self, validate_filter, FilterFile, Selection};
use topos_core::fincat::limits::{binary_product, coproduct, terminal};
use topos_core::fincat::{enumerate_quotient_objects, quotient_of_representable, representable, FiniteCategory, Presheaf};
use topos_core::normalize::{
    analyze_group, check_normalization_lemma, is_constant_top, is_identity, normalization_operator, FiniteGroup,
};
use topos_core::words::{analyze_language, Dfa, Regex};
use topos_core::{LocalStateClassifier, Verdict};

use crate::error::CliError;
use crate::report::Report;

/// Structural checks on `Ξ` that hold for every site.
pub fn lsc_verdicts(l: &LocalStateClassifier, cap: usize) -> Result<Vec<Verdict>, CliError> {
    let site = l.site();
    let mut out = vec![
        l.verify_semilattice_laws(),
        l.verify_action_monotone(),
        l.verify_joint_surjectivity()?,
    ];
    let mut compat = l.verify_semilattice_compat(&[])?;
    compat.check = "ξ of the terminal presheaf is ⊤".into();
    out.push(compat);
    if let Some(c) = site.objects().next() {
        let y = representable(site, c)?;
        out.push(l.verify_semilattice_compat(&[&y, &y])?);
        let (_, inl, _) = coproduct(&y, &terminal(site))?;
        out.push(l.verify_cocone(&inl)?);
    }
    let op = normalization_operator(l, cap)?;
    out.push(check_normalization_lemma(l, &op));
    Ok(out)
}

/// Quotients of representables sampled per object for filter certificates.
/// The certificate cost is quadratic in the sample count.
pub const QUOTIENTS_PER_OBJECT: usize = 4;

/// Largest representable whose square is used as a sample.
pub const PRODUCT_SAMPLE_MAX: usize = 12;

/// Presheaves used to exercise filter certificates: `1`, up to
/// [`QUOTIENTS_PER_OBJECT`] quotients of each representable spread along the
/// enumeration (always including `y(c)` itself and `1`), and `y(c) × y(c)`
/// for the first object when `|y(c)| ≤` [`PRODUCT_SAMPLE_MAX`].
pub fn filter_samples(site: &Arc<FiniteCategory>, cap: usize) -> Result<Vec<Presheaf>, CliError> {
    let mut out = vec![terminal(site)];
    for c in site.objects() {
        let qs = enumerate_quotient_objects(site, c, cap)?;
        let k = QUOTIENTS_PER_OBJECT.min(qs.len());
        let mut picks: Vec<usize> = (0..k).map(|i| i * (qs.len() - 1) / (k - 1).max(1)).collect();
        picks.dedup();
        for i in picks {
            out.push(quotient_of_representable(site, &qs[i])?.0);
        }
    }
    if let Some(c) = site.objects().next() {
        let y = representable(site, c)?;
        if y.total_size() <= PRODUCT_SAMPLE_MAX {
            out.push(binary_product(&y, &y)?.object);
        }
    }
    Ok(out)
}

/// Validates `selection` and, for a filter, certifies all four clauses.
/// A non-filter still gets its self-membership clause reported.
pub fn filter_verdicts(selection: Selection, samples: &[Presheaf]) -> (bool, Vec<Verdict>) {
    let name = "selection is an internal filter";
    match validate_filter(selection.clone()) {
        Ok(f) => {
            let mut out = vec![Verdict::pass(name)];
            out.extend(f.certify(samples).verdicts);
            (true, out)
        }
        Err(e) => {
            let clause = self_membership(&selection);
            (false, std::iter::once(Verdict::fail(name, e.to_string())).chain(clause).collect())
        }
    }
}

fn lsc_payload(name: &str, l: &LocalStateClassifier, cap: usize) -> Result<Value, CliError> {
    let site = l.site();
    let xi = l.xi();
    let op = normalization_operator(l, cap)?;
    let objects: Vec<Value> = site
        .objects()
        .map(|c| {
            let n = l.congruences(c).len();
            let order: Vec<[usize; 2]> = (0..n)
                .flat_map(|i| (0..n).map(move |j| [i, j]))
                .filter(|&[i, j]| i != j && l.leq(c, i, j))
                .collect();
            json!({
                "object": site.object_name(c),
                "states": xi.names(c),
                "top": l.top(c),
                "normalization": op.component(c),
                "meet": (0..n).map(|i| (0..n).map(|j| l.meet(c, i, j)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "strictly_below": order,
            })
        })
        .collect();
    let action: Vec<Value> = site
        .morphism_ids()
        .filter(|&f| !site.is_identity(f))
        .map(|f| {
            json!({
                "morphism": site.morphism_name(f),
                "from": site.object_name(site.src(f)),
                "to": site.object_name(site.dst(f)),
                "map": (0..l.congruences(site.dst(f)).len()).map(|i| xi.act(f, i)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "site": name,
        "objects": objects,
        "action": action,
        "terminal": l.is_terminal(),
        "normalization_is_identity": is_identity(l, &op),
        "normalization_is_constant_top": is_constant_top(l, &op),
    }))
}

pub fn lsc(name: &str, site: FiniteCategory, filter: Option<&FilterFile>, cap: usize) -> Result<Report, CliError> {
    let site = Arc::new(site);
    let l = Arc::new(LocalStateClassifier::build(site.clone(), cap)?);
    let mut payload = lsc_payload(name, &l, cap)?;
    let mut verdicts = lsc_verdicts(&l, cap)?;
    if let Some(file) = filter {
        let selection = Selection::from_file(l.clone(), file)?;
        let samples = filter_samples(&site, cap)?;
        let (valid, v) = filter_verdicts(selection, &samples);
        payload["filter"] = json!({ "members": file, "is_filter": valid });
        verdicts.extend(v);
    }
    Ok(Report::new("lsc", payload, verdicts))
}

pub fn group(g: &FiniteGroup, cap: usize) -> Result<Report, CliError> {
    let (analysis, verdicts) = analyze_group(g, cap)?;
    let payload = serde_json::to_value(analysis).expect("analysis serializes");
    Ok(Report::new("group", payload, verdicts))
}

type Membership<'a> = Box<dyn Fn(&[usize]) -> bool + 'a>;

/// A language given either as a regular expression or as a DFA.
pub enum Language {
    Regex { source: String, regex: Regex, dfa: Dfa },
    Dfa(Dfa),
}

pub fn words(lang: &Language, cap: usize) -> Result<Report, CliError> {
    let (dfa, accepts, source): (&Dfa, Membership<'_>, Value) = match lang {
        Language::Regex { source, regex, dfa } => (dfa, Box::new(|w| regex.matches(w)), json!(source)),
        Language::Dfa(d) => (d, Box::new(|w| d.accepts(w)), Value::Null),
    };
    let (analysis, verdicts) = analyze_language(dfa, &*accepts, cap)?;
    let mut payload = serde_json::to_value(analysis).expect("analysis serializes");
    payload["regex"] = source;
    Ok(Report::new("words", payload, verdicts))
}

/// The self-membership clause on its own; meaningful for any selection.
pub fn self_membership(selection: &Selection) -> Option<Verdict> {
    selection
        .certify(&[])
        .verdicts
        .into_iter()
        .find(|v| v.check == filters::SELF_MEMBERSHIP)
}
