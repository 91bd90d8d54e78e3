use std::path::{Path, PathBuf};

use epclass_core::curvetest::{independence_test_with, leaf_return_word, CurveVerdict, Outcome};
use epclass_core::fibration::{certify_fibration, detect_block_structure, CertifyOptions, DetectOptions, SplitWitness};
use epclass_core::geometry::{
    build_ep_data, run_geometry_checks, translation_first_coordinate, CheckReport, GeometryOptions,
};
use epclass_core::spectra::{check_shape, verify_admissible, AdmissibilityReport, Verdict, PAIRING_NOTE};
use epclass_core::lattice::MinpolyOptions;
use epclass_core::IntMatrix;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::format::read_matrix_file;
use crate::report::*;
use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyOptions {
    pub precision: u32,
    pub tol_relations: f64,
    pub tol_identities: f64,
    pub samples: usize,
    pub seed: u64,
    pub permutation_search: bool,
    pub lattice_search: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            precision: 128,
            tol_relations: 1e-8,
            tol_identities: 1e-10,
            samples: 100,
            seed: 0,
            permutation_search: false,
            lattice_search: true,
        }
    }
}

impl ClassifyOptions {
    fn geometry(&self) -> GeometryOptions {
        GeometryOptions {
            tol_relations: self.tol_relations,
            tol_identities: self.tol_identities,
            samples: self.samples,
            seed: self.seed,
        }
    }

    fn provenance(&self) -> Provenance {
        Provenance {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            precision: self.precision,
            tol_relations: self.tol_relations,
            tol_identities: self.tol_identities,
            samples: self.samples,
            seed: self.seed,
            lll_delta: "99/100",
            word_order: "g0 outermost: g0^s0 (g1^s1 (... (g_d^s_d)))",
            permutation_search: self.permutation_search,
            lattice_search: self.lattice_search,
        }
    }
}

fn strings(m: &IntMatrix) -> Vec<Vec<String>> {
    m.rows().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

fn check_section(c: &CheckReport) -> CheckSection {
    CheckSection {
        name: c.name,
        passed: c.passed,
        max_deviation: c.max_deviation,
        tol: c.tol,
        detail: c.detail.clone(),
    }
}

fn consistency(msg: impl Into<String>) -> CliError {
    CliError::Consistency(msg.into())
}

fn admissibility_section(r: &AdmissibilityReport) -> Result<AdmissibilitySection, CliError> {
    let alpha = match &r.alpha {
        Some(a) => {
            let approx = a.approximate(64)?.to_f64().unwrap_or(f64::NAN);
            Some(AlphaSection {
                defining_polynomial: a.defining().to_string(),
                interval: [a.interval().lo.to_string(), a.interval().hi.to_string()],
                approx,
                minimal_polynomial: a.minpoly().map(ToString::to_string),
                multiplicity: r.alpha_multiplicity,
            })
        }
        None => None,
    };
    Ok(AdmissibilitySection {
        admissible: r.is_admissible(),
        reason: match r.verdict {
            Verdict::Admissible => None,
            Verdict::Rejected(why) => Some(why.code()),
        },
        failures: r.failures.iter().map(|f| f.code()).collect(),
        det: r.det.to_string(),
        charpoly: r.charpoly.to_string(),
        real_root_count: r.real_root_count,
        alpha,
        alpha_positive: r.alpha_positive,
        alpha_not_one: r.alpha_not_one,
        alpha_simple: r.alpha_simple,
        note: PAIRING_NOTE,
    })
}

fn curve_section(v: &CurveVerdict) -> Result<CurveSection, CliError> {
    let witness_verified = match &v.witness {
        Some(s) => v.eigenvector.combine(s).iter().all(Zero::is_zero),
        None => true,
    };
    if !witness_verified {
        return Err(consistency("dependence witness does not annihilate the eigenvector"));
    }
    let leaf = leaf_return_word(v)?.map(|w| LeafWord {
        s0: w.s0,
        translations: w.translations.iter().map(ToString::to_string).collect(),
        first_coordinate_exact: "0".into(),
        first_coordinate_numeric: None,
    });
    let independent = v.outcome == Outcome::Independent;
    Ok(CurveSection {
        outcome: if independent { "Independent" } else { "Dependent" },
        witness: v.witness.as_ref().map(|s| s.iter().map(ToString::to_string).collect()),
        witness_verified,
        minimal_polynomial: v.minpoly.to_string(),
        minimal_polynomial_degree: v.minpoly.degree().unwrap_or(0),
        kernel_dim: v.kernel_dim,
        leaf_word: leaf,
        interpretation: if independent {
            "eigenvector components are independent over Z: no compact complex curves"
        } else {
            "independence criterion inapplicable; curves not excluded"
        },
        note: v.note.clone(),
    })
}

fn fibration_sections(m: &IntMatrix, opts: &ClassifyOptions) -> Result<Vec<FibrationSection>, CliError> {
    let detect = DetectOptions {
        permutation_search: opts.permutation_search,
        lattice_search: opts.lattice_search,
    };
    let certify = CertifyOptions {
        precision: opts.precision,
        tol: opts.tol_relations,
        samples: 10,
        seed: opts.seed,
    };
    let mut out = Vec::new();
    for split in detect_block_structure(m, detect)? {
        let v = certify_fibration(m, &split, &certify)?;
        let witness = match &split.witness {
            SplitWitness::Literal => None,
            SplitWitness::Permutation(p) => Some(json!(p)),
            SplitWitness::Lattice(u) => Some(json!(strings(u))),
        };
        out.push(FibrationSection {
            applies: v.applies,
            kind: split.kind(),
            k: v.k,
            split: split.split,
            n_block: strings(&split.n_block),
            p_block: strings(&split.p_block),
            witness,
            base_admissible: v.base_report.as_ref().is_some_and(AdmissibilityReport::is_admissible),
            base_alpha_defining_polynomial: v
                .base_report
                .as_ref()
                .and_then(|r| r.alpha.as_ref())
                .map(|a| a.defining().to_string()),
            p_spectrum_ok: v.p_spectrum_ok,
            checks: v.checks.iter().map(check_section).collect(),
            fiber_dim: v.fiber_dim,
            base_dim: v.base_dim,
            note: v.note,
        });
    }
    // maximal certified k first; detection order otherwise
    out.sort_by(|a, b| b.applies.cmp(&a.applies).then(b.k.cmp(&a.k)));
    Ok(out)
}

/// Full pipeline on one matrix. A rejected matrix still yields a report.
pub fn classify_matrix(m: &IntMatrix, opts: &ClassifyOptions) -> Result<ClassificationReport, CliError> {
    let n = check_shape(m).map_err(CliError::Core)?;
    let adm = verify_admissible(m)?;
    let mut report = ClassificationReport {
        schema: SCHEMA_VERSION,
        input: InputEcho {
            dimension: m.dim(),
            n,
            matrix: strings(m),
        },
        admissibility: admissibility_section(&adm)?,
        curve_verdict: None,
        fibration: Vec::new(),
        geometry_checks: Vec::new(),
        conclusion: None,
        notes: Vec::new(),
        provenance: opts.provenance(),
    };
    if !adm.is_admissible() {
        return Ok(report);
    }
    let mut alpha = adm.require_alpha()?.clone();
    alpha.ensure_minpoly(&MinpolyOptions::default())?;
    let verdict = independence_test_with(m, &alpha)?;
    let mut curve = curve_section(&verdict)?;
    if let Some(a) = report.admissibility.alpha.as_mut() {
        a.minimal_polynomial = Some(curve.minimal_polynomial.clone());
    }

    report.fibration = fibration_sections(m, opts)?;

    match build_ep_data(m, opts.precision) {
        Ok(data) => {
            report.geometry_checks = run_geometry_checks(&data, &opts.geometry())
                .iter()
                .map(check_section)
                .collect();
            if let (Some(s), Some(leaf)) = (&verdict.witness, curve.leaf_word.as_mut()) {
                leaf.first_coordinate_numeric = Some(translation_first_coordinate(&data, s));
            }
        }
        Err(e) => report.geometry_checks.push(CheckSection {
            name: "construction",
            passed: false,
            max_deviation: f64::INFINITY,
            tol: 0.0,
            detail: e.to_string(),
        }),
    }

    let independent = verdict.outcome == Outcome::Independent;
    let tori = report.fibration.iter().any(|f| f.applies);
    if independent && tori {
        return Err(consistency(
            "independent eigenvector components together with a certified torus fibration",
        ));
    }
    report.curve_verdict = Some(curve);
    report.conclusion = Some(if independent {
        Conclusion::NoCompactCurves
    } else if tori {
        Conclusion::ContainsTori
    } else {
        Conclusion::Undetermined
    });
    if independent {
        report.notes.push(SURFACES_NOTE.into());
    }
    Ok(report)
}

pub fn classify(path: &Path, opts: &ClassifyOptions) -> Result<ClassificationReport, CliError> {
    classify_matrix(&read_matrix_file(path)?, opts)
}

/// Classify many files in parallel; results come back in input order.
pub fn classify_batch(paths: &[PathBuf], opts: &ClassifyOptions) -> Vec<Result<ClassificationReport, CliError>> {
    paths.par_iter().map(|p| classify(p, opts)).collect()
}

/// Geometry checks only.
pub fn verify_geometry(m: &IntMatrix, opts: &ClassifyOptions) -> Result<Vec<CheckSection>, CliError> {
    check_shape(m)?;
    let adm = verify_admissible(m)?;
    if !adm.is_admissible() {
        let why = adm.failures.iter().map(|f| f.describe()).collect::<Vec<_>>().join("; ");
        return Err(CliError::Input(format!("matrix is not admissible: {why}")));
    }
    let data = build_ep_data(m, opts.precision)?;
    Ok(run_geometry_checks(&data, &opts.geometry()).iter().map(check_section).collect())
}
