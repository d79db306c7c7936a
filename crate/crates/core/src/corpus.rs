//! The bundled oil-spill corpus and the small hand-authored fixture networks.
//!
//! All probabilities in the corpus are illustrative values authored for it.

pub const OIL_SPILL_MODEL: &str = include_str!("../corpus/oil_spill.mebn");
/// The two-spill scenario findings.
pub const TWO_SPILL_FINDINGS: &str = include_str!("../corpus/two_spill.findings");
pub const SEVERITY_QUERY: &str = include_str!("../corpus/severity.query");
pub const ONE_SPILL_FINDINGS: &str = include_str!("../corpus/one_spill.findings");
pub const THREE_SPILL_FINDINGS: &str = include_str!("../corpus/three_spill.findings");
/// The two-spill scenario plus a spill located in a second region.
pub const TWO_REGION_FINDINGS: &str = include_str!("../corpus/two_region.findings");

/// A model, findings and query triple.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub model: &'static str,
    pub findings: &'static str,
    pub query: &'static str,
}

macro_rules! fixture {
    ($name:literal) => {
        Fixture {
            name: $name,
            model: include_str!(concat!("../corpus/fixtures/", $name, ".mebn")),
            findings: include_str!(concat!("../corpus/fixtures/", $name, ".findings")),
            query: include_str!(concat!("../corpus/fixtures/", $name, ".query")),
        }
    };
}

/// Every bundled fixture: the oil-spill scenarios followed by the small networks.
pub fn fixtures() -> Vec<Fixture> {
    let oil = |name, findings| Fixture {
        name,
        model: OIL_SPILL_MODEL,
        findings,
        query: SEVERITY_QUERY,
    };
    vec![
        oil("oil_spill_two", TWO_SPILL_FINDINGS),
        oil("oil_spill_one", ONE_SPILL_FINDINGS),
        oil("oil_spill_three", THREE_SPILL_FINDINGS),
        oil("oil_spill_two_region", TWO_REGION_FINDINGS),
        fixture!("two_node"),
        fixture!("sprinkler"),
        fixture!("diamond"),
        fixture!("alarm"),
        fixture!("chain"),
    ]
}

/// Findings for `k` spills, all in `region_1`, alternating thick/large and thin/small.
pub fn k_spill_findings(k: usize) -> String {
    let mut out = String::new();
    for i in 1..=k {
        out.push_str(&format!("isA(spill_{}, Spill)=True\n", i));
    }
    out.push_str("isA(region_1, Region)=True\n");
    for i in 1..=k {
        out.push_str(&format!("Location(spill_{})=region_1\n", i));
    }
    out.push_str("Weather(region_1)=Inclement\nCurrents(region_1)=Strong\n");
    for i in 1..=k {
        let (t, s) = if i % 2 == 1 { ("Thick", "Large") } else { ("Thin", "Small") };
        out.push_str(&format!("Thickness(spill_{})={}\nEstimatedSize(spill_{})={}\n", i, t, i, s));
    }
    out
}
