//! Weighted-EP detection and the equivalence-clause battery.
//!
//! A square matrix is weighted EP (for weights E, F) when its weighted
//! Moore-Penrose inverse exists and commutes with it; equivalently the
//! inverse coincides with the group inverse. The equivalence theorems list
//! dozens of conditions that hold all together or not at all whenever both
//! inverses exist. The battery evaluates every implementable clause and
//! reports the consensus: on sound inputs it is never mixed, so a mixed
//! outcome is an alarm, not an answer.
//!
//! Clause ids name what is tested (not any external numbering); identity
//! clauses carry the relative norm gap as residual, subspace clauses carry
//! the total rank defect, probe clauses 0 or 1. Clauses with power
//! parameters are evaluated for the requested (k, l) and again for the
//! degenerate (1, 1) edge case.

use crate::error::{Error, Result};
use crate::geninv::{group_inverse, weighted_pinv, Weight};
use crate::linalg::{eig, null_subset, range_subset, EXP_EIG_COND_LIMIT};
use crate::matrix::CMatrix;
use crate::norms::{commutator_gap, rel_gap, spectral_norm};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Power/scalar parameters for the clause battery.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClauseParams {
    pub k: u32,
    pub l: u32,
    pub lambda: Complex64,
    pub tol: f64,
}

impl Default for ClauseParams {
    fn default() -> Self {
        ClauseParams {
            k: 2,
            l: 2,
            lambda: Complex64::new(1.0, 1.0),
            tol: crate::DEFAULT_TOL,
        }
    }
}

impl ClauseParams {
    fn validate(&self) -> Result<()> {
        if self.k < 1 || self.l < 1 {
            return Err(Error::PreconditionUnmet(format!(
                "powers must be at least 1, got k={}, l={}",
                self.k, self.l
            )));
        }
        if self.lambda == Complex64::ZERO {
            return Err(Error::PreconditionUnmet("lambda must be nonzero".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::PreconditionUnmet("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClauseOutcome {
    pub id: String,
    pub holds: bool,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Consensus {
    AllTrue,
    AllFalse,
    Mixed,
}

/// Per-clause truth/residual table with the consensus verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClauseReport {
    pub clauses: Vec<ClauseOutcome>,
    /// Clauses that could not be evaluated (id, reason); excluded from the
    /// consensus.
    pub skipped: Vec<(String, String)>,
    pub consensus: Consensus,
    /// The definitional check: the weighted inverse commutes with the matrix.
    pub ep_verdict: bool,
    /// Ids disagreeing with the definitional verdict; nonempty iff mixed.
    pub disagreeing: Vec<String>,
}

/// Definitional weighted-EP check: `|AB - BA| <= tol |A| |B|` for the
/// weighted inverse B.
pub fn is_weighted_ep(a: &CMatrix, e: &Weight, f: &Weight, tol: f64) -> Result<bool> {
    let b = weighted_pinv(a, e, f, tol)?.b;
    Ok(commutator_gap(a, &b) <= tol)
}

fn rel3(x: &CMatrix, y: &CMatrix, z: &CMatrix) -> f64 {
    rel_gap(x, y).max(rel_gap(x, z)).max(rel_gap(y, z))
}

struct Battery {
    tol: f64,
    clauses: Vec<ClauseOutcome>,
    skipped: Vec<(String, String)>,
}

impl Battery {
    fn push(&mut self, id: String, residual: f64) {
        self.push_noted(id, residual, None);
    }

    fn push_noted(&mut self, id: String, residual: f64, note: Option<String>) {
        self.clauses.push(ClauseOutcome {
            id,
            holds: residual <= self.tol,
            residual,
            note,
        });
    }

    fn push_bool(&mut self, id: String, holds: bool, defect: f64, note: Option<String>) {
        self.clauses.push(ClauseOutcome {
            id,
            holds,
            residual: defect,
            note,
        });
    }

    fn skip(&mut self, id: String, reason: String) {
        self.skipped.push((id, reason));
    }
}

/// Evaluates the full clause battery. Preconditions: the weighted inverse
/// exists at the given tolerance (propagates `VerificationFailure`) and the
/// group inverse exists (`PreconditionUnmet` otherwise).
pub fn characterization_battery(
    a: &CMatrix,
    e: &Weight,
    f: &Weight,
    params: &ClauseParams,
) -> Result<ClauseReport> {
    params.validate()?;
    let tol = params.tol;
    let n = a.rows();

    let b = weighted_pinv(a, e, f, tol)?.b;
    let gi = group_inverse(a, tol)?;
    let sharp = gi.sharp.ok_or_else(|| {
        Error::PreconditionUnmet(format!(
            "group inverse does not exist: rank A = {}, rank A^2 = {}",
            gi.rank_a, gi.rank_a2
        ))
    })?;
    let b_fe = weighted_pinv(a, f, e, tol)?.b;
    let b_ee = weighted_pinv(a, e, e, tol)?.b;
    let b_ff = weighted_pinv(a, f, f, tol)?.b;

    let id_n = CMatrix::identity(n);
    let p = a * &b;
    let q = &b * a;
    let a2 = a * a;
    let b2 = &b * &b;

    let mut bat = Battery {
        tol,
        clauses: vec![],
        skipped: vec![],
    };

    // parameter-free identity clauses
    bat.push("pinv-eq-group".into(), rel_gap(&b, &sharp));
    bat.push(
        "pinv-absorbs".into(),
        rel_gap(&b, &(a * &b2)).max(rel_gap(&b, &(&b2 * a))),
    );
    bat.push(
        "matrix-absorbs".into(),
        rel_gap(a, &(&b * &a2)).max(rel_gap(a, &(&a2 * &b))),
    );
    bat.push(
        "group-sandwich-commute".into(),
        rel_gap(&(&(a * &sharp) * &b), &(&(&b * &sharp) * a)),
    );
    bat.push("proj-pair-commute".into(), rel_gap(&(&p * &q), &(&q * &p)));
    bat.push(
        "group-avg".into(),
        rel_gap(
            &(&(&(&b * &sharp) * a) + &(&(a * &sharp) * &b)),
            &b.scale(2.0),
        ),
    );
    bat.push(
        "pinv-sq-group-chain".into(),
        rel3(
            &(&b2 * &sharp),
            &(&(&b * &sharp) * &b),
            &(&sharp * &b2),
        ),
    );
    bat.push(
        "group-from-pinv-sq".into(),
        rel3(&(a * &b2), &sharp, &(&b2 * a)),
    );

    // subspace clauses
    let (h1, d1) = range_subset(&b, a, tol);
    let (h2, d2) = null_subset(&b, a, tol);
    let (h3, d3) = range_subset(a, &b, tol);
    let (h4, d4) = null_subset(a, &b, tol);
    bat.push_bool(
        "range-null-eq".into(),
        h1 && h2 && h3 && h4,
        (d1 + d2 + d3 + d4) as f64,
        None,
    );
    bat.push_bool("range-in-null-sup".into(), h1 && h4, (d1 + d4) as f64, None);
    bat.push_bool("range-sup-null-sup".into(), h3 && h4, (d3 + d4) as f64, None);
    bat.push_bool("range-in-null-in".into(), h1 && h2, (d1 + d2) as f64, None);
    bat.push_bool("range-sup-null-in".into(), h3 && h2, (d3 + d2) as f64, None);

    // weighted-family clauses
    bat.push("swap-weights-ep".into(), commutator_gap(a, &b_fe));
    bat.push(
        "equal-weights-ep".into(),
        commutator_gap(a, &b_ee).max(commutator_gap(a, &b_ff)),
    );
    {
        let back = weighted_pinv(&b, f, e, tol)?;
        bat.push(
            "inverse-ep-returns".into(),
            commutator_gap(&b, &back.b).max(rel_gap(&back.b, a)),
        );
    }
    {
        let sharp_pinv = weighted_pinv(&sharp, e, f, tol)?.b;
        bat.push("group-inverse-ep".into(), commutator_gap(&sharp, &sharp_pinv));
    }
    bat.push(
        "proj-eq-equal-weights".into(),
        rel3(&(a * &sharp), &(a * &b_ee), &(a * &b_ff)),
    );
    bat.push(
        "proj-eq-swap-weights".into(),
        rel3(&(a * &sharp), &p, &(a * &b_fe)),
    );

    // invertible-factor clause: A = B U = V B with U, V invertible
    {
        let u = &(&a2 + &id_n) - &q;
        let v = &(&a2 + &id_n) - &p;
        let residual = match (u.try_inverse(), v.try_inverse()) {
            (Some(_), Some(_)) => rel_gap(a, &(&b * &u)).max(rel_gap(a, &(&v * &b))),
            _ => f64::INFINITY,
        };
        bat.push("invertible-factor".into(), residual);
    }

    // commutant probe clause (finite probes: supportive, not certifying)
    {
        let holds = commutant_probe_inner(a, &b, 6, 0xC0FFEE, tol)?;
        bat.push_bool(
            "commutant-probe".into(),
            holds,
            if holds { 0.0 } else { 1.0 },
            Some("probe-supported: a finite probe set cannot certify the full commutant".into()),
        );
    }

    // holomorphic witness clause: interpolating polynomial reproduces B
    match witness_polynomial(a, &b) {
        Ok((_, residual)) => bat.push("holomorphic-witness".into(), residual),
        Err(Error::Defective { condition }) => bat.skip(
            "holomorphic-witness".into(),
            format!("matrix numerically defective (eigenvector condition {condition:.3e})"),
        ),
        Err(other) => return Err(other),
    }

    // lambda-subspace clauses (parameter lambda, no powers)
    {
        let la = &a.scale_c(params.lambda) + &(&a2 * a);
        let x_ee = &b_ee.scale_c(params.lambda) + a;
        let x_ff = &b_ff.scale_c(params.lambda) + a;
        let (r1, e1) = same_space(&x_ee, &x_ff, tol);
        let (r2, e2) = same_space(&x_ee, &la, tol);
        bat.push_bool(
            "lambda-subspace-equal-weights".into(),
            r1 && r2,
            (e1 + e2) as f64,
            None,
        );
        let x_ef = &b.scale_c(params.lambda) + a;
        let (r3, e3) = same_space(&x_ef, &la, tol);
        bat.push_bool("lambda-subspace-mixed".into(), r3, e3 as f64, None);
    }

    // power-parameterized clauses, requested set plus the (1, 1) edge case
    let mut param_sets = vec![(params.k, params.l)];
    if (params.k, params.l) != (1, 1) {
        param_sets.push((1, 1));
    }
    for (k, l) in param_sets {
        let tag = format!("[k={k},l={l}]");
        let ak = a.powu(k);
        let bk = b.powu(k);
        let sk = sharp.powu(k);
        let sl = sharp.powu(l);

        bat.push(
            format!("power-absorb{tag}"),
            rel3(&ak, &(&q * &ak), &(&ak * &p)),
        );
        bat.push(format!("power-pinv-eq-group{tag}"), rel_gap(&bk, &sk));
        bat.push(
            format!("group-pow-commute{tag}"),
            rel_gap(&(&sk * &b), &(&b * &sk)),
        );
        bat.push(
            format!("power-commute{tag}"),
            rel_gap(&(&ak * &b), &(&b * &ak)),
        );
        bat.push(
            format!("odd-power-sandwich{tag}"),
            rel_gap(&a.powu(2 * k - 1), &(&(&b * &a.powu(2 * k + 1)) * &b)),
        );
        bat.push(format!("group-pow-absorb{tag}"), rel_gap(&(&sk * &q), &bk));
        bat.push(
            format!("pinv-power-chain{tag}"),
            rel3(&(a * &b.powu(k + 1)), &sk, &(&b.powu(k + 1) * a)),
        );
        bat.push(
            format!("power-avg{tag}"),
            rel_gap(&(&(&ak * &p) + &(&q * &ak)), &ak.scale(2.0)),
        );
        bat.push(
            format!("group-pow-chain{tag}"),
            rel3(
                &sharp.powu(k + l - 1),
                &(&b.powu(l) * &sharp.powu(k - 1)),
                &(&sharp.powu(k - 1) * &b.powu(l)),
            ),
        );
        bat.push(
            format!("proj-group-pow-chain{tag}"),
            rel3(
                &(&p * &sharp.powu(k + l - 1)),
                &(&(&bk * &sl) * a),
                &(&(&sl * a) * &bk),
            ),
        );
        {
            let m = &ak + &b.scale_c(params.lambda);
            bat.push(format!("lambda-left-commute{tag}"), rel_gap(&(&p * &m), &(&m * &p)));
            bat.push(
                format!("lambda-right-commute{tag}"),
                rel_gap(&(&q * &m), &(&m * &q)),
            );
        }
        {
            let apk = weighted_pinv(&ak, e, f, tol)?.b;
            bat.push(format!("power-ep{tag}"), commutator_gap(&ak, &apk));
        }
    }

    let ep_verdict = commutator_gap(a, &b) <= tol;
    let trues = bat.clauses.iter().filter(|c| c.holds).count();
    let consensus = if trues == bat.clauses.len() {
        Consensus::AllTrue
    } else if trues == 0 {
        Consensus::AllFalse
    } else {
        Consensus::Mixed
    };
    let disagreeing = if consensus == Consensus::Mixed {
        bat.clauses
            .iter()
            .filter(|c| c.holds != ep_verdict)
            .map(|c| c.id.clone())
            .collect()
    } else {
        vec![]
    };

    Ok(ClauseReport {
        clauses: bat.clauses,
        skipped: bat.skipped,
        consensus,
        ep_verdict,
        disagreeing,
    })
}

fn same_space(x: &CMatrix, y: &CMatrix, tol: f64) -> (bool, usize) {
    let (r, dr) = crate::linalg::same_range(x, y, tol);
    let (n, dn) = crate::linalg::same_null(x, y, tol);
    (r && n, dr + dn)
}

/// Invertible-factor witness for a weighted-EP matrix: returns
/// `U = A^2 + I - BA` and `V = A^2 + I - AB` with `A = B U = V B`, and
/// verifies the explicit inverses `U^-1 = B^2 + I - BA`,
/// `V^-1 = B^2 + I - AB`.
pub fn invertible_factor_witness(
    a: &CMatrix,
    e: &Weight,
    f: &Weight,
    tol: f64,
) -> Result<(CMatrix, CMatrix)> {
    if !is_weighted_ep(a, e, f, tol)? {
        return Err(Error::PreconditionUnmet(
            "matrix is not weighted EP for these weights".into(),
        ));
    }
    let b = weighted_pinv(a, e, f, tol)?.b;
    let n = a.rows();
    let id = CMatrix::identity(n);
    let a2 = a * a;
    let b2 = &b * &b;
    let q = &b * a;
    let p = a * &b;
    let u = &(&a2 + &id) - &q;
    let v = &(&a2 + &id) - &p;

    let r_left = rel_gap(a, &(&b * &u));
    let r_right = rel_gap(a, &(&v * &b));
    if r_left > tol || r_right > tol {
        return Err(Error::WitnessFailure(format!(
            "factorization residuals {r_left:.3e}, {r_right:.3e} exceed {tol:.1e}"
        )));
    }
    let u_inv_claim = &(&b2 + &id) - &q;
    let v_inv_claim = &(&b2 + &id) - &p;
    // residuals scale with the product of the operand norms
    let scaled = |x: &CMatrix, y: &CMatrix| {
        let scale = (spectral_norm(x) * spectral_norm(y)).max(1.0);
        spectral_norm(&(&(x * y) - &id)) / scale
    };
    let inv_res = scaled(&u, &u_inv_claim).max(scaled(&v, &v_inv_claim));
    if inv_res > tol {
        return Err(Error::WitnessFailure(format!(
            "explicit inverse identity residual {inv_res:.3e} exceeds {tol:.1e}"
        )));
    }
    Ok((u, v))
}

/// Relative separation below which eigenvalues are merged into one
/// interpolation node.
const CLUSTER_TOL: f64 = 1e-8;

/// Interpolating polynomial p with p(0) = 0 and p(lambda) = 1/lambda on the
/// (clustered) nonzero spectrum, plus the relative gap |p(A) - B| / |B|.
fn witness_polynomial(a: &CMatrix, b: &CMatrix) -> Result<(Vec<Complex64>, f64)> {
    let sd = eig(a)?;
    if !sd.condition.is_finite() || sd.condition >= EXP_EIG_COND_LIMIT {
        return Err(Error::Defective {
            condition: sd.condition,
        });
    }
    let max_abs = sd.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.norm()));
    if max_abs == 0.0 {
        let residual = if b.is_zero() { 0.0 } else { 1.0 };
        return Ok((vec![Complex64::ZERO], residual));
    }

    let mut nonzero: Vec<Complex64> = sd
        .eigenvalues
        .iter()
        .copied()
        .filter(|l| l.norm() > CLUSTER_TOL * max_abs)
        .collect();
    nonzero.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let mut reps: Vec<Complex64> = vec![];
    for l in nonzero {
        match reps.last() {
            Some(r) if (l - r).norm() <= CLUSTER_TOL * max_abs => {}
            _ => reps.push(l),
        }
    }

    // Newton interpolation through (0, 0) and (mu, 1/mu)
    let mut nodes = vec![Complex64::ZERO];
    nodes.extend(reps.iter().copied());
    let mut table: Vec<Complex64> = nodes
        .iter()
        .map(|x| {
            if x.norm() == 0.0 {
                Complex64::ZERO
            } else {
                Complex64::ONE / x
            }
        })
        .collect();
    let m = nodes.len();
    let mut newton = vec![table[0]];
    for order in 1..m {
        for i in 0..m - order {
            table[i] = (table[i + 1] - table[i]) / (nodes[i + order] - nodes[i]);
        }
        newton.push(table[0]);
    }

    // Newton form to monomial coefficients (ascending)
    let mut coeffs = vec![Complex64::ZERO; m];
    for i in (0..m).rev() {
        // multiply accumulated polynomial by (x - nodes[i]) and add newton[i]
        for j in (1..m).rev() {
            coeffs[j] = coeffs[j - 1] - nodes[i] * coeffs[j];
        }
        coeffs[0] = newton[i] - nodes[i] * coeffs[0];
    }

    // Horner evaluation at A
    let n = a.rows();
    let mut pa = CMatrix::zeros(n, n);
    for &c in coeffs.iter().rev() {
        pa = &(&pa * a) + &CMatrix::identity(n).scale_c(c);
    }
    let scale = spectral_norm(b);
    let residual = if scale == 0.0 {
        spectral_norm(&pa)
    } else {
        spectral_norm(&(&pa - b)) / scale
    };
    Ok((coeffs, residual))
}

/// Polynomial witness that the weighted inverse is a holomorphic function
/// of the matrix: coefficients (ascending, zero constant term) of the
/// interpolant of 1/lambda on the nonzero spectrum. Requires the matrix to
/// be weighted EP and numerically diagonalizable.
pub fn spectral_pinv_witness(
    a: &CMatrix,
    e: &Weight,
    f: &Weight,
    tol: f64,
) -> Result<Vec<Complex64>> {
    if !is_weighted_ep(a, e, f, tol)? {
        return Err(Error::PreconditionUnmet(
            "matrix is not weighted EP for these weights".into(),
        ));
    }
    let b = weighted_pinv(a, e, f, tol)?.b;
    let (coeffs, residual) = witness_polynomial(a, &b)?;
    if residual > tol {
        return Err(Error::WitnessFailure(format!(
            "polynomial reproduces the inverse only to {residual:.3e} (tol {tol:.1e})"
        )));
    }
    Ok(coeffs)
}

fn commutant_probe_inner(
    a: &CMatrix,
    b: &CMatrix,
    n_probes: usize,
    seed: u64,
    tol: f64,
) -> Result<bool> {
    let n = a.rows();
    let mut probes: Vec<CMatrix> = vec![a.clone()];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degree = n.min(4);
    for _ in 0..n_probes {
        let mut poly = CMatrix::zeros(n, n);
        let mut power = CMatrix::identity(n);
        for _ in 0..=degree {
            let c = crate::hermitian::complex_gaussian(&mut rng);
            poly = &poly + &power.scale_c(c);
            power = &power * a;
        }
        probes.push(poly);
    }

    if let Ok(sd) = eig(a) {
        if sd.condition.is_finite() && sd.condition < EXP_EIG_COND_LIMIT {
            if let Some(v_inv) = sd.eigenvectors.try_inverse() {
                let max_abs = sd.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.norm()));
                let mut assigned = vec![false; n];
                for i in 0..n {
                    if assigned[i] {
                        continue;
                    }
                    let mut indicator = vec![Complex64::ZERO; n];
                    for j in 0..n {
                        if !assigned[j]
                            && (sd.eigenvalues[j] - sd.eigenvalues[i]).norm()
                                <= CLUSTER_TOL * max_abs.max(f64::MIN_POSITIVE)
                        {
                            indicator[j] = Complex64::ONE;
                            assigned[j] = true;
                        }
                    }
                    let proj = &(&sd.eigenvectors * &CMatrix::from_diagonal(&indicator)) * &v_inv;
                    probes.push(proj);
                }
            }
        }
    }

    for probe in &probes {
        if commutator_gap(probe, b) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that probes commuting with the matrix also commute with its
/// weighted inverse. One-sided: `true` supports the EP verdict, `false`
/// refutes it (the probe `b = A` alone already decides).
pub fn commutant_probe(
    a: &CMatrix,
    e: &Weight,
    f: &Weight,
    n_probes: usize,
    seed: u64,
    tol: f64,
) -> Result<bool> {
    let b = weighted_pinv(a, e, f, tol)?.b;
    commutant_probe_inner(a, &b, n_probes, seed, tol)
}
