//! The built-in verification corpus: classic worked fusion examples replayed
//! end to end through the document loader and the rule engine, asserted
//! against exact reference values.
//!
//! Reference values are exact rationals. Where a published table rounds or
//! mis-prints a value that its own weight tables force (a few cells of the
//! hybrid-model mixed-rule table and two discounted-PCR decimals), the corpus
//! pins the exact recomputed value, so a correct build passes the whole
//! corpus.

use std::io::Write;

use dsmfuse_core::rules::RuleConfig;
use dsmfuse_core::{parse_rational, Rational};

use crate::document::{load_document, resolve_rule, LoadedDocument, RuleSpec};
use crate::runner::{run_fusion, OutputDocument};

/// Reference outcome of one corpus case: fused masses keyed by canonical set
/// display, given as exact fractions. Qualitative cases pin exact label
/// indexes. The conflict is pinned the same way when listed.
#[derive(Debug, Clone, Copy)]
pub struct Case {
    pub name: &'static str,
    pub doc: &'static str,
    pub rule: &'static str,
    pub dissimilarity: Option<&'static str>,
    pub alpha: Option<&'static str>,
    /// `(set display, exact fraction)`; for qualitative runs the fraction is
    /// the label index.
    pub masses: &'static [(&'static str, &'static str)],
    pub conflict: Option<&'static str>,
}

const EX01: &str = include_str!("../cases/ex01.json");
const EX06: &str = include_str!("../cases/ex06.json");
const EX07: &str = include_str!("../cases/ex07.json");
const EX08: &str = include_str!("../cases/ex08.json");
const EX10: &str = include_str!("../cases/ex10.json");
const EX11: &str = include_str!("../cases/ex11.json");
const EX12: &str = include_str!("../cases/ex12.json");
const EX13: &str = include_str!("../cases/ex13.json");
const ZADEH: &str = include_str!("../cases/zadeh.json");

pub fn corpus() -> Vec<Case> {
    vec![
        Case {
            name: "example=1 disjunctive",
            doc: EX01,
            rule: "disjunctive",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "4/36"), ("B", "3/36"), ("A|B", "29/36")],
            conflict: Some("13/36"),
        },
        Case {
            name: "example=1 conjunctive",
            doc: EX01,
            rule: "conjunctive",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "13/36"), ("B", "8/36"), ("A|B", "2/36")],
            conflict: Some("13/36"),
        },
        Case {
            name: "example=2 dempster",
            doc: EX01,
            rule: "dempster",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "13/23"), ("B", "8/23"), ("A|B", "2/23")],
            conflict: Some("13/36"),
        },
        Case {
            name: "example=2 tbm",
            doc: EX01,
            rule: "tbm",
            dissimilarity: None,
            alpha: None,
            masses: &[
                ("∅", "13/36"),
                ("A", "13/36"),
                ("B", "8/36"),
                ("A|B", "2/36"),
            ],
            conflict: Some("13/36"),
        },
        Case {
            name: "example=3 yager",
            doc: EX01,
            rule: "yager",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "13/36"), ("B", "8/36"), ("A|B", "15/36")],
            conflict: Some("13/36"),
        },
        Case {
            name: "example=4 dubois_prade",
            doc: EX01,
            rule: "dubois_prade",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "13/36"), ("B", "8/36"), ("A|B", "15/36")],
            conflict: Some("13/36"),
        },
        Case {
            name: "example=5 pcr5",
            doc: EX01,
            rule: "pcr5",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "285/504"), ("B", "191/504"), ("A|B", "28/504")],
            conflict: Some("13/36"),
        },
        Case {
            name: "example=1 florea",
            doc: EX01,
            rule: "florea",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "351/997"), ("B", "223/997"), ("A|B", "423/997")],
            conflict: Some("13/36"),
        },
        Case {
            name: "example=6 pcr6",
            doc: EX06,
            rule: "pcr6",
            dissimilarity: None,
            alpha: None,
            masses: &[
                ("A", "1183/2400"),
                ("B", "3263/16800"),
                ("A|C", "139/700"),
                ("A|B|C|D", "4/35"),
            ],
            conflict: Some("11/25"),
        },
        Case {
            name: "example=6 dpcr fixed",
            doc: EX06,
            rule: "dpcr",
            dissimilarity: None,
            alpha: Some("fixed:0.9"),
            masses: &[
                ("A", "3829/8000"),
                ("B", "81/448"),
                ("A|C", "657/3500"),
                ("A|B|C", "21/1000"),
                ("A|B|C|D", "923/7000"),
            ],
            conflict: Some("11/25"),
        },
        Case {
            name: "example=6 dpcr global",
            doc: EX06,
            rule: "dpcr",
            dissimilarity: None,
            alpha: Some("global"),
            masses: &[
                ("A", "301/720"),
                ("B", "3277/25200"),
                ("A|C", "73/525"),
                ("A|B|C", "7/50"),
                ("A|B|C|D", "121/700"),
            ],
            conflict: Some("11/25"),
        },
        Case {
            name: "example=6 dpcr_lambda",
            doc: EX06,
            rule: "dpcr_lambda",
            dissimilarity: None,
            alpha: None,
            masses: &[
                ("A", "8197/19500"),
                ("B", "103/1020"),
                ("A|C", "3171/22100"),
                ("A|B|C", "7/50"),
                ("A|B|C|D", "1659/8500"),
            ],
            conflict: Some("11/25"),
        },
        Case {
            name: "example=6 mdpcr delta",
            doc: EX06,
            rule: "mdpcr",
            dissimilarity: Some("delta"),
            alpha: Some("fixed:0.9"),
            // Identical to dpcr fixed: every non-conflicting tuple here has a
            // smallest response contained in the others.
            masses: &[
                ("A", "3829/8000"),
                ("B", "81/448"),
                ("A|C", "657/3500"),
                ("A|B|C", "21/1000"),
                ("A|B|C|D", "923/7000"),
            ],
            conflict: Some("11/25"),
        },
        Case {
            name: "example=6 mdpcr jaccard",
            doc: EX06,
            rule: "mdpcr",
            dissimilarity: Some("jaccard"),
            alpha: Some("fixed:0.9"),
            masses: &[
                ("A", "1729/8000"),
                ("B", "1521/11200"),
                ("A|C", "999/7000"),
                ("A|B|C", "21/1000"),
                ("A|B|C|D", "6781/14000"),
            ],
            conflict: Some("11/25"),
        },
        Case {
            name: "example=7 pcr6",
            doc: EX07,
            rule: "pcr6",
            dissimilarity: None,
            alpha: None,
            masses: &[
                ("A", "21/100"),
                ("B", "14/100"),
                ("C", "9/100"),
                ("A|B", "133/600"),
                ("B|C", "71/600"),
                ("A|C", "16/100"),
                ("A|B|C", "6/100"),
            ],
            conflict: Some("21/100"),
        },
        Case {
            name: "example=8 conjunctive",
            doc: EX08,
            rule: "conjunctive",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "13/6"), ("B", "8/6"), ("A|B", "2/6")],
            conflict: Some("13/6"),
        },
        Case {
            name: "example=8 dempster",
            doc: EX08,
            rule: "dempster",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "468/138"), ("B", "288/138"), ("A|B", "72/138")],
            conflict: Some("13/6"),
        },
        Case {
            name: "example=8 tbm",
            doc: EX08,
            rule: "tbm",
            dissimilarity: None,
            alpha: None,
            masses: &[("∅", "13/6"), ("A", "13/6"), ("B", "8/6"), ("A|B", "2/6")],
            conflict: Some("13/6"),
        },
        Case {
            name: "example=8 yager",
            doc: EX08,
            rule: "yager",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "13/6"), ("B", "8/6"), ("A|B", "15/6")],
            conflict: Some("13/6"),
        },
        Case {
            name: "example=8 dubois_prade",
            doc: EX08,
            rule: "dubois_prade",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "13/6"), ("B", "8/6"), ("A|B", "15/6")],
            conflict: Some("13/6"),
        },
        Case {
            name: "example=8 pcr5",
            doc: EX08,
            rule: "pcr5",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "285/84"), ("B", "191/84"), ("A|B", "28/84")],
            conflict: Some("13/6"),
        },
        Case {
            name: "example=10 mix delta",
            doc: EX10,
            rule: "mix",
            dissimilarity: Some("delta"),
            alpha: None,
            masses: &[
                ("A", "6/25"),
                ("B", "7/50"),
                ("A|B", "9/50"),
                ("C", "3/50"),
                ("A|C", "3/20"),
                ("A|B|C", "23/100"),
            ],
            conflict: Some("1/5"),
        },
        Case {
            name: "example=10 mix jaccard",
            doc: EX10,
            rule: "mix",
            dissimilarity: Some("jaccard"),
            alpha: None,
            masses: &[
                ("A", "23/200"),
                ("B", "3/50"),
                ("A|B", "9/50"),
                ("C", "1/50"),
                ("A|C", "33/200"),
                ("A|B|C", "23/50"),
            ],
            conflict: Some("1/5"),
        },
        Case {
            name: "example=10 mix eta",
            doc: EX10,
            rule: "mix",
            dissimilarity: Some("eta"),
            alpha: None,
            // Differs from the jaccard column only on the (A|B, A|C) pair:
            // η = 1/2 there, moving 0.02 from Θ back onto A.
            masses: &[
                ("A", "27/200"),
                ("B", "3/50"),
                ("A|B", "9/50"),
                ("C", "1/50"),
                ("A|C", "33/200"),
                ("A|B|C", "11/25"),
            ],
            conflict: Some("1/5"),
        },
        Case {
            name: "example=11 mix delta",
            doc: EX11,
            rule: "mix",
            dissimilarity: Some("delta"),
            alpha: None,
            masses: &[
                ("A&B", "3/100"),
                ("A", "13/50"),
                ("B", "7/50"),
                ("A|B", "3/20"),
                ("C", "3/50"),
                ("A|C", "3/20"),
                ("A|B|C", "21/100"),
            ],
            conflict: Some("7/50"),
        },
        Case {
            name: "example=11 mix eta",
            doc: EX11,
            rule: "mix",
            dissimilarity: Some("eta"),
            alpha: None,
            // Exact values forced by the η weight table of this model.
            masses: &[
                ("A&B", "3/100"),
                ("A", "37/200"),
                ("B", "1/12"),
                ("A|B", "11/75"),
                ("C", "3/200"),
                ("A|C", "63/400"),
                ("A|B|C", "153/400"),
            ],
            conflict: Some("7/50"),
        },
        Case {
            name: "example=11 mix jaccard",
            doc: EX11,
            rule: "mix",
            dissimilarity: Some("jaccard"),
            alpha: None,
            // Exact values forced by the Jaccard weight table of this model.
            masses: &[
                ("A&B", "1/50"),
                ("A", "33/200"),
                ("B", "1/12"),
                ("A|B", "47/300"),
                ("C", "3/200"),
                ("A|C", "63/400"),
                ("A|B|C", "161/400"),
            ],
            conflict: Some("7/50"),
        },
        Case {
            name: "example=12 mix delta",
            doc: EX12,
            rule: "mix",
            dissimilarity: Some("delta"),
            alpha: None,
            masses: &[
                ("A", "18/6"),
                ("B", "8/6"),
                ("A|B", "4/6"),
                ("A|C", "2/6"),
                ("A|B|C", "4/6"),
            ],
            conflict: Some("10/6"),
        },
        Case {
            name: "example=12 mix eta",
            doc: EX12,
            rule: "mix",
            dissimilarity: Some("eta"),
            alpha: None,
            masses: &[
                ("A", "12/6"),
                ("B", "4/6"),
                ("A|B", "14/6"),
                ("A|C", "2/6"),
                ("A|B|C", "4/6"),
            ],
            conflict: Some("10/6"),
        },
        Case {
            name: "example=12 dpcr",
            doc: EX12,
            rule: "dpcr",
            dissimilarity: None,
            alpha: Some("fixed:0.6"),
            masses: &[
                ("A", "20/6"),
                ("B", "9.2/6"),
                ("C", "0.88/6"),
                ("A|B", "3.52/6"),
                ("A|C", "0.8/6"),
                ("A|B|C", "1.6/6"),
            ],
            conflict: Some("10/6"),
        },
        Case {
            name: "example=12 mdpcr eta",
            doc: EX12,
            rule: "mdpcr",
            dissimilarity: Some("eta"),
            alpha: Some("fixed:0.6"),
            masses: &[
                ("A", "14/6"),
                ("B", "5.2/6"),
                ("C", "0.88/6"),
                ("A|B", "13.52/6"),
                ("A|C", "0.8/6"),
                ("A|B|C", "1.6/6"),
            ],
            conflict: Some("10/6"),
        },
        Case {
            name: "example=13 conjunctive",
            doc: EX13,
            rule: "conjunctive",
            dissimilarity: None,
            alpha: None,
            masses: &[
                ("A", "1/6"),
                ("B", "12/6"),
                ("B|C", "10/6"),
                ("A|B|C|D", "2/6"),
            ],
            conflict: Some("11/6"),
        },
        Case {
            name: "example=13 pcr6",
            doc: EX13,
            rule: "pcr6",
            dissimilarity: None,
            alpha: None,
            masses: &[
                ("A", "10/3/6"),
                ("B", "14/6"),
                ("B|C", "15/6"),
                ("A|B|C|D", "22/6/6"),
            ],
            conflict: Some("11/6"),
        },
        Case {
            name: "example=13 dpcr",
            doc: EX13,
            rule: "dpcr",
            dissimilarity: None,
            alpha: Some("fixed:0.6"),
            masses: &[
                ("A", "2.4/6"),
                ("B", "13.2/6"),
                ("B|C", "13/6"),
                ("A|B|C", "2/6"),
                ("A|B|C|D", "5.4/6"),
            ],
            conflict: Some("11/6"),
        },
        Case {
            name: "zadeh dempster",
            doc: ZADEH,
            rule: "dempster",
            dissimilarity: None,
            alpha: None,
            masses: &[("C", "1")],
            conflict: Some("99/100"),
        },
        Case {
            name: "zadeh pcr5",
            doc: ZADEH,
            rule: "pcr5",
            dissimilarity: None,
            alpha: None,
            masses: &[("A", "243/500"), ("B", "243/500"), ("C", "7/250")],
            conflict: Some("99/100"),
        },
    ]
}

/// Parse an exact reference literal, allowing the stacked form `a/b/c`
/// (= (a/b)/c) used for fractional label indexes.
fn parse_reference(text: &str) -> Rational {
    let mut parts = text.split('/');
    let first = parts.next().expect("non-empty reference");
    let mut value = parse_rational(first).unwrap_or_else(|| panic!("bad reference `{text}`"));
    for part in parts {
        let d = parse_rational(part).unwrap_or_else(|| panic!("bad reference `{text}`"));
        value /= d;
    }
    value
}

fn report_value(report: &crate::runner::MassReport) -> Rational {
    let text = report
        .mass
        .as_ref()
        .or(report.index.as_ref())
        .expect("report carries a value");
    parse_reference(text)
}

/// Run one case and compare the fused spectrum against its references.
pub fn run_case(case: &Case) -> Result<OutputDocument, String> {
    let loaded: LoadedDocument = load_document(case.doc).map_err(|e| format!("load: {e}"))?;
    let overrides = RuleSpec {
        name: Some(case.rule.to_string()),
        dissimilarity: case.dissimilarity.map(str::to_string),
        alpha: case.alpha.map(str::to_string),
        approximate: None,
        betp: None,
    };
    let (config, betp): (RuleConfig, bool) =
        resolve_rule(loaded.document.rule.as_ref(), &overrides)
            .map_err(|e| format!("rule: {e}"))?;
    let output = run_fusion(&loaded, &config, betp).map_err(|e| format!("run: {e}"))?;

    let mut problems = Vec::new();
    let got: Vec<(String, Rational)> = output
        .masses
        .iter()
        .map(|r| (r.set.clone(), report_value(r)))
        .collect();
    for (set, reference) in case.masses {
        let reference = parse_reference(reference);
        match got.iter().find(|(s, _)| s == set) {
            Some((_, value)) if *value == reference => {}
            Some((_, value)) => problems.push(format!("m({set}) = {value}, reference {reference}")),
            None => problems.push(format!("m({set}) missing, reference {reference}")),
        }
    }
    for (set, value) in &got {
        if !case.masses.iter().any(|(s, _)| s == set) {
            problems.push(format!("unexpected mass {value} on {set}"));
        }
    }
    if let Some(reference) = case.conflict {
        let reference = parse_reference(reference);
        let value = report_value(&output.conflict);
        if value != reference {
            problems.push(format!("conflict = {value}, reference {reference}"));
        }
    }
    if problems.is_empty() {
        Ok(output)
    } else {
        Err(problems.join("; "))
    }
}

/// Replay the corpus, printing one line per case. Returns (passed, failed).
pub fn verify(filter: Option<&str>, out: &mut impl Write) -> (usize, usize) {
    let mut passed = 0;
    let mut failed = 0;
    for case in corpus() {
        if let Some(f) = filter {
            if !case.name.contains(f) {
                continue;
            }
        }
        match run_case(&case) {
            Ok(_) => {
                passed += 1;
                let _ = writeln!(out, "PASS {}", case.name);
            }
            Err(problems) => {
                failed += 1;
                let _ = writeln!(out, "FAIL {}: {}", case.name, problems);
            }
        }
    }
    let _ = writeln!(out, "{passed} passed, {failed} failed");
    (passed, failed)
}
