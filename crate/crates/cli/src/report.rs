//! Serializable classification report. Field order is the key order.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Shown when the curve test rules out compact curves.
pub const SURFACES_NOTE: &str = "the manifold contains no closed complex surfaces other than \
Inoue surfaces (informational; this is not checked by the tool)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    NoCompactCurves,
    ContainsTori,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub schema: u32,
    pub input: InputEcho,
    pub admissibility: AdmissibilitySection,
    pub curve_verdict: Option<CurveSection>,
    pub fibration: Vec<FibrationSection>,
    pub geometry_checks: Vec<CheckSection>,
    /// `None` when the matrix is rejected.
    pub conclusion: Option<Conclusion>,
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputEcho {
    pub dimension: usize,
    pub n: usize,
    /// Decimal strings, so entries of any size survive a round trip.
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaSection {
    /// Squarefree polynomial the isolating interval refers to.
    pub defining_polynomial: String,
    /// `(lo, hi]` as exact rationals.
    pub interval: [String; 2],
    pub approx: f64,
    pub minimal_polynomial: Option<String>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilitySection {
    pub admissible: bool,
    pub reason: Option<&'static str>,
    pub failures: Vec<&'static str>,
    pub det: String,
    pub charpoly: String,
    pub real_root_count: usize,
    pub alpha: Option<AlphaSection>,
    pub alpha_positive: bool,
    pub alpha_not_one: bool,
    pub alpha_simple: bool,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeafWord {
    pub s0: i64,
    pub translations: Vec<String>,
    /// `sum s_i a^i`, exactly zero in the number field.
    pub first_coordinate_exact: String,
    /// The same quantity from the floating-point construction.
    pub first_coordinate_numeric: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveSection {
    pub outcome: &'static str,
    pub witness: Option<Vec<String>>,
    pub witness_verified: bool,
    pub minimal_polynomial: String,
    pub minimal_polynomial_degree: usize,
    pub kernel_dim: usize,
    pub leaf_word: Option<LeafWord>,
    pub interpretation: &'static str,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSection {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub tol: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FibrationSection {
    pub applies: bool,
    pub kind: &'static str,
    pub k: usize,
    pub split: usize,
    pub n_block: Vec<Vec<String>>,
    pub p_block: Vec<Vec<String>>,
    /// Permutation or unimodular change of basis, when not literal.
    pub witness: Option<serde_json::Value>,
    pub base_admissible: bool,
    pub base_alpha_defining_polynomial: Option<String>,
    pub p_spectrum_ok: bool,
    pub checks: Vec<CheckSection>,
    pub fiber_dim: usize,
    pub base_dim: usize,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub precision: u32,
    pub tol_relations: f64,
    pub tol_identities: f64,
    pub samples: usize,
    pub seed: u64,
    pub lll_delta: &'static str,
    pub word_order: &'static str,
    pub permutation_search: bool,
    pub lattice_search: bool,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn geometry_passed(&self) -> bool {
        self.geometry_checks.iter().all(|c| c.passed)
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let a = &self.admissibility;
        s.push_str(&format!(
            "matrix: {0}x{0} (n = {1}), det = {2}\ncharpoly: {3}\n",
            self.input.dimension, self.input.n, a.det, a.charpoly
        ));
        if a.admissible {
            let al = a.alpha.as_ref().expect("admissible implies alpha");
            s.push_str(&format!(
                "admissible: yes, alpha ~ {:.12} in ({}, {}]\n",
                al.approx, al.interval[0], al.interval[1]
            ));
        } else {
            s.push_str(&format!("admissible: no ({})\n", a.failures.join(", ")));
        }
        if let Some(c) = &self.curve_verdict {
            s.push_str(&format!(
                "curve test: {} (minimal polynomial of alpha has degree {}, kernel dimension {})\n",
                c.outcome, c.minimal_polynomial_degree, c.kernel_dim
            ));
            if let Some(w) = &c.witness {
                s.push_str(&format!("  witness: ({})\n", w.join(", ")));
            }
        }
        for f in &self.fibration {
            let failed: Vec<&str> = f.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
            s.push_str(&format!(
                "fibration ({} split, k = {}): {}{}\n",
                f.kind,
                f.k,
                if f.applies { "certified" } else { "not certified" },
                if failed.is_empty() { String::new() } else { format!(" [failed: {}]", failed.join(", ")) }
            ));
        }
        if !self.geometry_checks.is_empty() {
            let bad = self.geometry_checks.iter().filter(|c| !c.passed).count();
            s.push_str(&format!(
                "geometry checks: {}/{} passed\n",
                self.geometry_checks.len() - bad,
                self.geometry_checks.len()
            ));
            for c in self.geometry_checks.iter().filter(|c| !c.passed) {
                s.push_str(&format!("  FAILED {}: {:.3e} > {:.1e}\n", c.name, c.max_deviation, c.tol));
            }
        }
        match self.conclusion {
            Some(c) => s.push_str(&format!("conclusion: {c:?}\n")),
            None => s.push_str("conclusion: none (matrix rejected)\n"),
        }
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }
}
