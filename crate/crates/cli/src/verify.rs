//! The `verify` subcommand: invariant suites over bundled and user fixtures.
//!
//! Suites run one after another in a fixed order, so the verdict list is
//! canonical for given inputs.

use std::sync::Arc;

use clap::ValueEnum;
use serde_json::json;
use topos_core::filters::{filter_generated_by, Selection};
use topos_core::fincat::FiniteCategory;
use topos_core::fixtures;
use topos_core::normalize::{
    analyze_group, check_normalization_lemma, is_identity, non_idempotence_witness, non_monotonicity_witness,
    normalization_operator, CosetEncoding, FiniteGroup,
};
use topos_core::words::{analyze_language, regex_to_min_dfa, Alphabet};
use topos_core::{LocalStateClassifier, Verdict};

use crate::analyze::{filter_samples, filter_verdicts, lsc_verdicts, self_membership};
use crate::error::CliError;
use crate::input::{compile_regex, Fixtures};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Lsc,
    Normalize,
    Filters,
    Words,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Lsc => "lsc",
            Suite::Normalize => "normalize",
            Suite::Filters => "filters",
            Suite::Words => "words",
        }
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Lsc, Suite::Normalize, Suite::Filters, Suite::Words],
            s => vec![s],
        }
    }
}

/// Collects verdicts, prefixing each with its suite and subject.
struct Log {
    verdicts: Vec<Verdict>,
    subjects: usize,
}

impl Log {
    fn record(&mut self, suite: Suite, subject: &str, verdicts: impl IntoIterator<Item = Verdict>) {
        self.subjects += 1;
        for mut v in verdicts {
            v.check = format!("{}/{subject}: {}", suite.name(), v.check);
            self.verdicts.push(v);
        }
    }
}

fn expect(check: &str, ok: bool, got: impl FnOnce() -> String) -> Verdict {
    Verdict::from_witness(check, (!ok).then(got))
}

struct Sites {
    all: Vec<(String, FiniteCategory)>,
    groups: Vec<FiniteGroup>,
}

impl Sites {
    fn new(user: &Fixtures) -> Self {
        let mut groups = fixtures::groups();
        groups.extend(user.groups.iter().cloned());
        let mut all = fixtures::sites();
        all.extend(user.categories.iter().cloned());
        all.extend(groups.iter().map(|g| (g.name().to_owned(), g.to_site())));
        Sites { all, groups }
    }
}

fn build(site: &FiniteCategory, cap: usize) -> Result<Arc<LocalStateClassifier>, CliError> {
    Ok(Arc::new(LocalStateClassifier::build(Arc::new(site.clone()), cap)?))
}

fn lsc_suite(log: &mut Log, sites: &Sites, cap: usize) -> Result<(), CliError> {
    for (name, site) in &sites.all {
        let l = build(site, cap)?;
        let mut v = lsc_verdicts(&l, cap)?;
        let sizes: Vec<usize> = l.site().objects().map(|c| l.congruences(c).len()).collect();
        match name.as_str() {
            "graph" => v.push(expect("|Ξ(V)| = 1 and |Ξ(E)| = 2", sizes == [1, 2], || format!("{sizes:?}"))),
            "idempotent" => v.push(expect("|Ξ| = 2", sizes == [2], || format!("{sizes:?}"))),
            _ if site.is_thin() => v.push(expect("Ξ is terminal on a poset", l.is_terminal(), || format!("{sizes:?}"))),
            _ => {}
        }
        log.record(Suite::Lsc, name, v);
    }
    Ok(())
}

fn normalize_suite(log: &mut Log, sites: &Sites, cap: usize) -> Result<(), CliError> {
    for (name, site) in &sites.all {
        let l = build(site, cap)?;
        let op = normalization_operator(&l, cap)?;
        let mut v = vec![check_normalization_lemma(&l, &op)];
        match name.as_str() {
            "graph" => {
                let e = l.site().object_by_name("E")?;
                let ok = (0..2).all(|i| op.apply(e, i) == l.top(e));
                v.push(expect("both edge states normalize to the loop state", ok, || "differs".into()));
            }
            "idempotent" => v.push(expect("ξ_Ξ is the identity", is_identity(&l, &op), || "differs".into())),
            _ => {}
        }
        log.record(Suite::Normalize, name, v);
    }
    for g in &sites.groups {
        let (analysis, mut v) = analyze_group(g, cap)?;
        if g.name() == "D4" {
            let enc = CosetEncoding::new(g.clone());
            let l = LocalStateClassifier::build(enc.site().clone(), cap)?;
            let op = normalization_operator(&l, cap)?;
            v.push(expect("ξ_Ξ is not idempotent", non_idempotence_witness(&l, &op).is_some(), || {
                "no witness".into()
            }));
            v.push(expect("ξ_Ξ is not monotone", non_monotonicity_witness(&l, &op).is_some(), || {
                "no witness".into()
            }));
            v.push(expect("10 subgroups", analysis.subgroups.len() == 10, || {
                analysis.subgroups.len().to_string()
            }));
        }
        log.record(Suite::Normalize, &format!("group {}", g.name()), v);
    }
    Ok(())
}

/// Selects only the non-loop edge state (and all of `Ξ(V)`) on the graph site.
/// It is not upward closed, and its own classification leaves it at `E`.
fn loop_free_selection_check(cap: usize) -> Result<Verdict, CliError> {
    let l = build(&fixtures::graph_site(), cap)?;
    let site = l.site().clone();
    let e = site.object_by_name("E")?;
    let not_loop = l.classify(&fixtures::single_edge_graph(&site), e, 0);
    let selection = Selection::new(l.clone(), &[vec![0], vec![not_loop]])?;
    let (valid, _) = filter_verdicts(selection.clone(), &[]);
    let witness = selection.self_membership_witness();
    let name = "loop-free edge selection is rejected and fails self-membership";
    Ok(if !valid && witness == Some((e, not_loop)) {
        Verdict::pass_with_note(name, format!("expected failure at {}", l.xi().name(e, not_loop)))
    } else {
        Verdict::fail(name, format!("valid = {valid}, witness = {witness:?}"))
    })
}

fn filters_suite(log: &mut Log, sites: &Sites, user: &Fixtures, cap: usize) -> Result<(), CliError> {
    for (name, site) in &sites.all {
        let l = build(site, cap)?;
        let samples = filter_samples(l.site(), cap)?;
        let mut v = Vec::new();
        for (label, selection) in [("top", Selection::top(l.clone())), ("all", Selection::all(l.clone()))] {
            let (_, vs) = filter_verdicts(selection, &samples);
            v.extend(vs.into_iter().map(|mut x| {
                x.check = format!("{label} filter: {}", x.check);
                x
            }));
        }
        log.record(Suite::Filters, name, v);
    }

    let g = FiniteGroup::dihedral4();
    let enc = CosetEncoding::new(g.clone());
    let l = Arc::new(LocalStateClassifier::build(enc.site().clone(), cap)?);
    let center = g.generated(&[g.element_by_name("σ²").expect("D4 names σ²")]);
    let seed_index = l.index_of(&enc.forward(&center)).expect("subgroups are enumerated");
    let f = filter_generated_by(&Selection::new(l.clone(), &[vec![seed_index]])?);
    let samples = filter_samples(l.site(), cap)?;
    log.record(Suite::Filters, "D4 ⟨σ²⟩-generated", filter_verdicts((*f).clone(), &samples).1);

    log.record(Suite::Filters, "graph loop-free selection", [loop_free_selection_check(cap)?]);

    for fx in &user.filters {
        let l = build(&fx.site, cap)?;
        let selection = Selection::from_file(l.clone(), &fx.members)?;
        let subject = format!("{} on {}", fx.name, fx.site_name);
        if fx.expect_filter {
            let samples = filter_samples(l.site(), cap)?;
            log.record(Suite::Filters, &subject, filter_verdicts(selection, &samples).1);
        } else {
            let (valid, _) = filter_verdicts(selection.clone(), &[]);
            let name = "selection is rejected as a filter";
            let note = self_membership(&selection)
                .map(|c| format!("self-membership {}", if c.passed { "holds" } else { "fails" }))
                .unwrap_or_default();
            let v = if valid {
                Verdict::fail(name, "validated as a filter")
            } else {
                Verdict::pass_with_note(name, format!("expected failure; {note}"))
            };
            log.record(Suite::Filters, &subject, [v]);
        }
    }
    Ok(())
}

fn words_suite(log: &mut Log, user: &Fixtures, cap: usize) -> Result<(), CliError> {
    for src in fixtures::REGEXES {
        let (alphabet, r) = compile_regex(src, "ab")?;
        let d = regex_to_min_dfa(&r, &alphabet);
        let (_, v) = analyze_language(&d, &|w| r.matches(w), cap)?;
        log.record(Suite::Words, src, v);
    }
    for fx in &user.regexes {
        let d = regex_to_min_dfa(&fx.regex, &fx.alphabet);
        let (_, v) = analyze_language(&d, &|w| fx.regex.matches(w), cap)?;
        log.record(Suite::Words, &format!("{} ({})", fx.name, fx.source), v);
    }
    for (name, d) in &user.dfas {
        let (_, v) = analyze_language(d, &|w| d.accepts(w), cap)?;
        log.record(Suite::Words, name, v);
    }
    // the two monoid orders that have closed forms
    for (src, order) in [("(ab)*", 6), ("(a|b)*a", 3)] {
        let ab = Alphabet::new("ab").expect("valid alphabet");
        let (_, r) = compile_regex(src, "ab")?;
        let (analysis, _) = analyze_language(&regex_to_min_dfa(&r, &ab), &|w| r.matches(w), cap)?;
        log.record(
            Suite::Words,
            src,
            [expect(&format!("syntactic monoid has order {order}"), analysis.syntactic_order == order, || {
                analysis.syntactic_order.to_string()
            })],
        );
    }
    Ok(())
}

pub fn run(suite: Suite, user: &Fixtures, cap: usize) -> Result<Report, CliError> {
    let sites = Sites::new(user);
    let mut log = Log {
        verdicts: Vec::new(),
        subjects: 0,
    };
    let suites = suite.expand();
    for s in &suites {
        match s {
            Suite::Lsc => lsc_suite(&mut log, &sites, cap)?,
            Suite::Normalize => normalize_suite(&mut log, &sites, cap)?,
            Suite::Filters => filters_suite(&mut log, &sites, user, cap)?,
            Suite::Words => words_suite(&mut log, user, cap)?,
            Suite::All => unreachable!("expanded above"),
        }
    }
    let failed = log.verdicts.iter().filter(|v| !v.passed).count();
    let payload = json!({
        "suites": suites.iter().map(|s| s.name()).collect::<Vec<_>>(),
        "subjects": log.subjects,
        "checks": log.verdicts.len(),
        "failed": failed,
    });
    Ok(Report::new("verify", payload, log.verdicts))
}
