//! The fourteen acceptance criteria, shared by the `acceptance` test target and
//! the `selftest` command.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use crate::analysis::{
    bipartition_reports, check_cnot_decomposition, diagonal_rigidity_detector, is_entangling,
    scalar_rigidity_detector, EntanglementOptions,
};
use crate::ansatz::{
    contains_equation, enumerate_equations, parse_assignments, search_permutation_images, substitute,
    GaussRational, SearchOptions, SparsityPattern,
};
use crate::error::Result;
use crate::families::{
    build_rd, build_rx, build_x_family, unitarity_conditions, x4_listed_deltas, Family, FamilyParams,
};
use crate::sampling::{
    gaussian_matrix, invertible_matrix, nonscalar_diagonal, nonzero_complex, rng, unit_phase, SeededRng,
    DEFAULT_SEED,
};
use crate::symmetry::{apply_symmetry, SymmetryOp};
use crate::tensor::{
    controlled_increment, fourier, kron, swap_operator, unitarity_defect, CMat, ONE,
};
use crate::verify::{
    verify_aybe_index, verify_aybe_matrix, verify_braid_relations, verify_bybe, verify_gybe, GybeSignature,
};

/// Criteria that cannot pass on the published data; see the README.
pub const KNOWN_UNATTAINABLE: [u8; 4] = [2, 4, 6, 13];

pub const TITLES: [&str; 14] = [
    "diagonal R_d solves the algebraic equation, R_d P the braided one",
    "R_2 equals the first KL matrix; KL matrices braided and unitary",
    "controlled increment factors through R_d",
    "printed 9x9 conjugate of R_3: unique matching composition",
    "R_X solves the (2,3,2) equation and is unitary",
    "X-family: equation, singular members, X5 relation, unitarity conditions",
    "X-shape ansatz: 116 equations, 108 after substitution",
    "wide padding admits only scalar invertible solutions",
    "invertible diagonals: algebraic always, braided only when scalar",
    "algebraic equation: matrix form agrees with index form",
    "symmetry generators preserve solutions",
    "entanglement witnesses",
    "braid group relations for KL1 and R_X",
    "permutation solution search",
];

fn title(id: u8) -> &'static str {
    (id as usize).checked_sub(1).and_then(|i| TITLES.get(i)).copied().unwrap_or("unknown criterion")
}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    /// Fewer random trials per criterion.
    pub quick: bool,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self { quick: false, seed: DEFAULT_SEED }
    }
}

impl Config {
    fn trials(&self, full: usize) -> usize {
        if self.quick {
            (full / 10).max(2)
        } else {
            full
        }
    }

    fn rng(&self, criterion: u8) -> SeededRng {
        rng(self.seed ^ (criterion as u64) << 32)
    }
}

/// Matrices the criteria take as given; swapping one in simulates a bad
/// transcription.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub kl: [CMat; 3],
    pub rx: CMat,
}

impl Default for Inputs {
    fn default() -> Self {
        let kl = |k| crate::families::build_kl(k).expect("k in 1..=3");
        Self { kl: [kl(1), kl(2), kl(3)], rx: build_rx() }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Largest residual seen, where the criterion measures one.
    pub worst: f64,
    pub detail: String,
    pub elapsed: Duration,
}

/// Collects sub-checks of one criterion.
#[derive(Default)]
struct Tally {
    worst: f64,
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, residual: f64, label: impl FnOnce() -> String) {
        self.checks += 1;
        if residual.is_finite() {
            self.worst = self.worst.max(residual);
        }
        if !ok {
            self.failures.push(label());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self, id: u8, start: Instant) -> Outcome {
        let mut detail = format!("{} checks", self.checks);
        for n in &self.notes {
            let _ = write!(detail, "; {n}");
        }
        if !self.failures.is_empty() {
            let shown: Vec<&str> = self.failures.iter().take(4).map(String::as_str).collect();
            let _ = write!(detail, "; {} failed: {}", self.failures.len(), shown.join(", "));
            if self.failures.len() > 4 {
                detail.push_str(", ...");
            }
        }
        Outcome {
            id,
            title: title(id),
            passed: self.failures.is_empty(),
            worst: self.worst,
            detail,
            elapsed: start.elapsed(),
        }
    }
}

fn within(t: &mut Tally, start: Instant, limit: Duration, what: &str) {
    let took = start.elapsed();
    t.check(took <= limit, 0.0, || format!("{what} took {took:?} > {limit:?}"));
}

fn criterion_1(_cfg: &Config) -> Result<Tally> {
    let start = Instant::now();
    let mut t = Tally::default();
    for d in 2..=5 {
        let rd = build_rd(d)?;
        let a = verify_aybe_matrix(&rd, 1e-12)?;
        t.check(a.passed, a.residual_max, || format!("aybe R_{d}"));
        let b = verify_bybe(&(&rd * &swap_operator(d)), 1e-12)?;
        t.check(b.passed, b.residual_max, || format!("bybe R_{d}P"));
    }
    within(&mut t, start, Duration::from_secs(5), "d=2..5");
    Ok(t)
}

fn criterion_2(inputs: &Inputs) -> Result<Tally> {
    let mut t = Tally::default();
    let rd2 = build_rd(2)?;
    let cz = CMat::diag(&[ONE, ONE, ONE, -ONE]);
    t.check(rd2 == cz, rd2.max_abs_diff(&cz), || "R_2 != diag(1,1,1,-1)".into());
    t.check(rd2 == inputs.kl[0], rd2.max_abs_diff(&inputs.kl[0]), || "R_2 != KL1".into());
    for (k, m) in inputs.kl.iter().enumerate() {
        let rep = verify_bybe(m, 1e-12)?;
        t.check(rep.passed, rep.residual_max, || format!("KL{} bybe residual {:.2e}", k + 1, rep.residual_max));
        let u = unitarity_defect(m)?;
        t.check(u <= 1e-12, u, || format!("KL{} unitarity defect {u:.2e}", k + 1));
    }
    Ok(t)
}

fn criterion_3(_cfg: &Config) -> Result<Tally> {
    let mut t = Tally::default();
    for d in [2, 3, 5] {
        let rep = check_cnot_decomposition(d, 1e-12)?;
        t.check(rep.passed, rep.residual_max, || format!("d={d}"));
    }
    Ok(t)
}

/// Entries in units of 1/6; `a = 1 − i√3`, `b = 1 + i√3`.
const PRINTED_CONJUGATE_RD3: [[&str; 9]; 9] = [
    ["4", "a", "b", "0", "0", "0", "2", "-a", "-b"],
    ["2", "-a", "-b", "4", "a", "b", "0", "0", "0"],
    ["0", "0", "0", "2", "-a", "-b", "4", "a", "b"],
    ["b", "4", "a", "0", "0", "0", "-b", "2", "-a"],
    ["-b", "2", "-a", "b", "4", "a", "0", "0", "0"],
    ["0", "0", "0", "-b", "2", "-a", "b", "4", "a"],
    ["a", "b", "4", "0", "0", "0", "-a", "-b", "2"],
    ["-a", "-b", "2", "a", "b", "4", "0", "0", "0"],
    ["0", "0", "0", "-a", "-b", "2", "a", "b", "4"],
];

pub fn printed_conjugate_rd3() -> CMat {
    let s3 = 3f64.sqrt();
    let value = |tok: &str| -> Complex64 {
        let (neg, body) = tok.strip_prefix('-').map_or((false, tok), |b| (true, b));
        let z = match body {
            "a" => Complex64::new(1.0, -s3),
            "b" => Complex64::new(1.0, s3),
            n => Complex64::new(n.parse().expect("integer token"), 0.0),
        };
        (if neg { -z } else { z }) / 6.0
    };
    CMat::from_fn(9, 9, |i, j| value(PRINTED_CONJUGATE_RD3[i][j]))
}

fn criterion_4(_cfg: &Config) -> Result<Tally> {
    let mut t = Tally::default();
    let q = fourier(3).pow(3)?;
    let qq = kron(&q, &q);
    let qq_inv = qq.inverse()?;
    let rd = build_rd(3)?;
    let p = swap_operator(3);
    let candidates = [
        ("(QxQ) R P (QxQ)^-1", &(&(&qq * &rd) * &p) * &qq_inv),
        ("(QxQ) R (QxQ)^-1 P", &(&(&qq * &rd) * &qq_inv) * &p),
    ];
    let printed = printed_conjugate_rd3();
    let matches: Vec<&(&str, CMat)> = candidates.iter().filter(|(_, m)| m.max_abs_diff(&printed) <= 1e-12).collect();
    for (name, m) in &candidates {
        t.note(format!("{name}: diff {:.1e}", m.max_abs_diff(&printed)));
    }
    t.check(matches.len() == 1, 0.0, || format!("{} candidates match, expected exactly 1", matches.len()));
    if let Some((name, m)) = matches.first() {
        let rep = verify_bybe(m, 1e-12)?;
        t.check(rep.passed, rep.residual_max, || format!("{name} bybe"));
        let u = unitarity_defect(m)?;
        t.check(u <= 1e-12, u, || format!("{name} unitarity"));
    }
    Ok(t)
}

fn criterion_5(inputs: &Inputs) -> Result<Tally> {
    let mut t = Tally::default();
    let rep = verify_gybe(&inputs.rx, GybeSignature::new(2, 3, 2)?, 1e-12)?;
    t.check(rep.passed, rep.residual_max, || "gybe".into());
    let u = unitarity_defect(&inputs.rx)?;
    t.check(u <= 1e-12, u, || format!("unitarity defect {u:.2e}"));
    Ok(t)
}

fn random_x_params(family: Family, r: &mut SeededRng) -> FamilyParams {
    loop {
        let p = FamilyParams::x(family, nonzero_complex(r), nonzero_complex(r))
            .with_gamma(nonzero_complex(r))
            .with_delta(nonzero_complex(r));
        if p.validate().is_ok() {
            return p;
        }
    }
}

/// A draw meeting every printed unitarity clause of `family`.
fn condition_draw(family: Family, r: &mut SeededRng, k: usize) -> FamilyParams {
    match family {
        Family::X1 => {
            let t: f64 = r.random_range(0.3..2.0) * if r.random_bool(0.5) { 1.0 } else { -1.0 };
            FamilyParams::x(family, unit_phase(r), unit_phase(r) * t.abs())
                .with_delta(Complex64::new(0.0, t))
                .with_lambda(unit_phase(r) / (1.0 + t * t).sqrt())
        }
        Family::X2 | Family::X3 => FamilyParams::x(family, unit_phase(r), unit_phase(r))
            .with_lambda(unit_phase(r) / 2f64.sqrt()),
        Family::X4 => {
            // the listed values that do not zero a denominator
            let deltas: Vec<Complex64> = x4_listed_deltas().into_iter().filter(|d| d.im.abs() != 1.0).collect();
            let dl = deltas[k % deltas.len()];
            let dl_bar = dl.conj();
            let a2 = ((dl - 2.0) / dl_bar).norm();
            let b2 = (dl_bar * dl_bar - 2.0 * dl_bar + 2.0).norm();
            FamilyParams::x(family, unit_phase(r) * a2.sqrt(), unit_phase(r) * b2.sqrt())
                .with_delta(dl)
                .with_lambda(unit_phase(r) / (1.0 + b2).sqrt())
        }
        other => unreachable!("no unitarity conditions for {other}"),
    }
}

fn criterion_6(cfg: &Config) -> Result<Tally> {
    let mut t = Tally::default();
    let mut r = cfg.rng(6);
    let sig = GybeSignature::new(2, 3, 2)?;
    for family in [Family::X1, Family::X2, Family::X3, Family::X4, Family::X5] {
        for _ in 0..cfg.trials(100) {
            let p = random_x_params(family, &mut r);
            let rep = verify_gybe(&build_x_family(&p)?, sig, 1e-10)?;
            t.check(rep.passed, rep.residual_max, || format!("{family} gybe {:.2e}", rep.residual_max));
        }
    }
    for family in [Family::X6, Family::X7] {
        for _ in 0..cfg.trials(50) {
            let det = build_x_family(&random_x_params(family, &mut r))?.det()?.norm();
            t.check(det <= 1e-10, det, || format!("{family} |det| {det:.2e}"));
        }
    }
    for _ in 0..cfg.trials(50) {
        let (a, b) = (nonzero_complex(&mut r), nonzero_complex(&mut r));
        let x5 = build_x_family(&FamilyParams::x(Family::X5, a, b))?;
        let x2 = build_x_family(&FamilyParams::x(Family::X2, a * crate::tensor::I, b * crate::tensor::I))?;
        let other = x2.inverse()?.scale(Complex64::new(2.0, 0.0));
        let diff = x5.max_abs_diff(&other) / x5.max_abs().max(1.0);
        t.check(diff <= 1e-12, diff, || format!("X5 relation {diff:.2e}"));
    }
    let mut x4_unitary = 0;
    let mut x4_total = 0;
    for family in [Family::X1, Family::X2, Family::X3, Family::X4] {
        for k in 0..cfg.trials(20) {
            let p = condition_draw(family, &mut r, k);
            let cond = unitarity_conditions(&p, 1e-10)?;
            if family == Family::X4 {
                x4_total += 1;
                x4_unitary += usize::from(cond.satisfied);
            }
            t.check(cond.satisfied, 0.0, || {
                format!("{family} conditions met but defect {:.2e} (delta {})", cond.unitarity_defect, p.delta)
            });
            let violations: [(&str, fn(&mut FamilyParams)); 3] = [
                ("|alpha|", |p| p.alpha *= 1.5),
                ("|beta|", |p| p.beta *= 1.5),
                ("|lambda|", |p| p.lambda *= 1.3),
            ];
            for (clause, bend) in violations {
                let mut q = p.clone();
                bend(&mut q);
                let c = unitarity_conditions(&q, 1e-10)?;
                t.check(!c.satisfied, 0.0, || format!("{family} unitary with {clause} clause broken"));
            }
        }
    }
    t.note(format!("X4 unitary on {x4_unitary}/{x4_total} condition draws"));
    Ok(t)
}

fn criterion_7(_cfg: &Config) -> Result<Tally> {
    let start = Instant::now();
    let mut t = Tally::default();
    let sys = enumerate_equations(&SparsityPattern::x_shape(8), GybeSignature::new(2, 3, 2)?)?;
    let vars = sys.active_variables().len();
    t.note(format!("{} equations in {vars} variables", sys.len()));
    t.check(sys.len() == 116, 0.0, || format!("{} equations, expected 116", sys.len()));
    t.check(vars == 16, 0.0, || format!("{vars} variables, expected 16"));
    let reduced = substitute(&sys, &parse_assignments("r22=1,r55=1,r77=r44")?)?;
    t.note(format!("{} after substitution", reduced.len()));
    t.check(reduced.len() == 108, 0.0, || format!("{} after substitution, expected 108", reduced.len()));
    let fixed = substitute(&sys, &parse_assignments("r22=1")?)?;
    let g = |x| GaussRational::integer(x, 0);
    let first = fixed.poly(&[(g(-1), &["r36", "r63", "r55"]), (g(1), &["r36", "r63"])])?;
    let second = fixed.poly(&[(g(1), &["r36", "r63", "r44"]), (g(-1), &["r36", "r63", "r77"])])?;
    t.check(contains_equation(&fixed, &first)?, 0.0, || "r36 r63 (r55 - 1) missing".into());
    t.check(contains_equation(&fixed, &second)?, 0.0, || "r36 r63 (r44 - r77) missing".into());
    within(&mut t, start, Duration::from_secs(30), "enumeration");
    Ok(t)
}

fn criterion_8(cfg: &Config) -> Result<Tally> {
    let mut t = Tally::default();
    let mut r = cfg.rng(8);
    for (d, m, l) in [(2, 2, 2), (2, 2, 3), (3, 2, 2)] {
        let sig = GybeSignature::new(d, m, l)?;
        let n = sig.r_dim();
        let mut passes = 0;
        for _ in 0..cfg.trials(500) {
            let v = scalar_rigidity_detector(&invertible_matrix(&mut r, n), sig, 1e-10)?;
            passes += usize::from(v.passes);
            t.check(!v.violation, 0.0, || format!("({d},{m},{l}) non-scalar pass"));
        }
        t.note(format!("({d},{m},{l}): {passes} random passes"));
        for _ in 0..20 {
            let lam = nonzero_complex(&mut r);
            let v = scalar_rigidity_detector(&CMat::scalar_identity(n, lam), sig, 1e-10)?;
            t.check(v.passes && v.scalar.is_some(), v.residual, || format!("({d},{m},{l}) scalar {lam} fails"));
        }
    }
    Ok(t)
}

fn criterion_9(cfg: &Config) -> Result<Tally> {
    let mut t = Tally::default();
    let mut r = cfg.rng(9);
    for k in 0..cfg.trials(500) {
        let d = 2 + k % 3;
        let v = diagonal_rigidity_detector(&nonscalar_diagonal(&mut r, d * d), 1e-10)?;
        t.check(v.aybe_passes, 0.0, || format!("d={d} diagonal fails aybe"));
        t.check(!v.bybe_passes, 0.0, || format!("d={d} non-scalar diagonal passes bybe"));
    }
    for d in 2..=4 {
        let v = diagonal_rigidity_detector(&CMat::scalar_identity(d * d, nonzero_complex(&mut r)), 1e-10)?;
        t.check(v.aybe_passes && v.bybe_passes, 0.0, || format!("d={d} scalar"));
    }
    Ok(t)
}

fn criterion_10(cfg: &Config, inputs: &Inputs) -> Result<Tally> {
    let mut t = Tally::default();
    let mut r = cfg.rng(10);
    let mut named: Vec<(String, CMat)> =
        inputs.kl.iter().enumerate().map(|(k, m)| (format!("KL{}", k + 1), m.clone())).collect();
    for d in 2..=4 {
        let rd = build_rd(d)?;
        named.push((format!("R_{d}P"), &rd * &swap_operator(d)));
        named.push((format!("R_{d}"), rd));
        named.push((format!("C_{d}"), controlled_increment(2, d)?));
    }
    let random = (0..cfg.trials(300)).map(|k| {
        let d = 2 + k % 2;
        (format!("random {d}x{d} #{k}"), gaussian_matrix(&mut r, d * d))
    });
    let all: Vec<(String, CMat)> = named.into_iter().chain(random.collect::<Vec<_>>()).collect();
    for (name, m) in &all {
        let a = verify_aybe_matrix(m, 1e-10)?;
        let b = verify_aybe_index(m, 1e-10)?;
        let diff = (a.residual_max - b.residual_max).abs();
        t.check(a.passed == b.passed && diff <= 1e-9, diff, || format!("{name}: forms disagree"));
    }
    Ok(t)
}

#[derive(Clone, Copy)]
enum Governing {
    Aybe,
    Gybe(GybeSignature),
}

impl Governing {
    fn residual(&self, m: &CMat) -> Result<f64> {
        Ok(match self {
            Governing::Aybe => verify_aybe_matrix(m, 1e-9)?.residual_max,
            Governing::Gybe(sig) => verify_gybe(m, *sig, 1e-9)?.residual_max,
        })
    }

    fn arity(&self) -> usize {
        match self {
            Governing::Aybe => 2,
            Governing::Gybe(sig) => sig.m,
        }
    }
}

fn well_conditioned(r: &mut SeededRng, n: usize) -> CMat {
    loop {
        let q = gaussian_matrix(r, n);
        if matches!(q.condition_1(), Ok(c) if c < 30.0) {
            return q;
        }
    }
}

fn criterion_11(cfg: &Config, inputs: &Inputs) -> Result<Tally> {
    let mut t = Tally::default();
    let mut r = cfg.rng(11);
    let x2 = build_x_family(&FamilyParams::x(Family::X2, ONE, ONE).with_lambda(Complex64::new(0.5f64.sqrt(), 0.0)))?;
    let bases: Vec<(&str, CMat, Governing)> = vec![
        ("KL1", inputs.kl[0].clone(), Governing::Aybe),
        ("R_X", inputs.rx.clone(), Governing::Gybe(GybeSignature::new(2, 3, 2)?)),
        ("X2 unitary", x2, Governing::Gybe(GybeSignature::new(2, 3, 2)?)),
        ("R_3P", &build_rd(3)? * &swap_operator(3), Governing::Gybe(GybeSignature::braided(3)?)),
        // padding at least as wide as R
        ("scalar", CMat::scalar_identity(4, Complex64::new(2.0, -1.0)), Governing::Gybe(GybeSignature::new(2, 2, 2)?)),
    ];
    for (base, m, gov) in &bases {
        let res = gov.residual(m)?;
        t.check(res <= 1e-9, res, || format!("{base} is not a solution to start with"));
    }
    let generators = ["scale", "inverse", "conjugate", "transpose", "adjoint", "localconj"];
    for gen in generators {
        for k in 0..cfg.trials(50) {
            let (base, m, gov) = &bases[k % bases.len()];
            let op = match gen {
                "scale" => SymmetryOp::Scale(nonzero_complex(&mut r)),
                "inverse" => SymmetryOp::Inverse,
                "conjugate" => SymmetryOp::Conjugate,
                "transpose" => SymmetryOp::Transpose,
                "adjoint" => SymmetryOp::Adjoint,
                _ => {
                    let arity = gov.arity();
                    let d = crate::tensor::integer_root(m.nrows(), arity as u32).expect("base dimension is a power");
                    SymmetryOp::LocalConjugate { q: well_conditioned(&mut r, d), m: arity }
                }
            };
            let image = apply_symmetry(&op, m)?;
            let res = gov.residual(&image)?;
            t.check(res <= 1e-9, res, || format!("{gen} on {base}: {res:.2e}"));
        }
    }
    Ok(t)
}

fn criterion_12(cfg: &Config, inputs: &Inputs) -> Result<Tally> {
    let mut t = Tally::default();
    let opts = EntanglementOptions { seed: cfg.seed, ..Default::default() };
    let cnot = is_entangling(&controlled_increment(2, 2)?, 2)?;
    let rank = cnot.witness("|+0>").map_or(0, |w| w.schmidt_rank);
    t.check(cnot.entangling && rank == 2, 0.0, || format!("CNOT witness rank {rank}"));
    for d in 2..=3 {
        let rep = is_entangling(&swap_operator(d), d)?;
        t.check(!rep.entangling, 0.0, || format!("swap d={d} reported entangling"));
    }
    for d in 2..=4 {
        let rep = is_entangling(&(&build_rd(d)? * &swap_operator(d)), d)?;
        t.check(rep.entangling, 0.0, || format!("R_{d}P not entangling"));
    }
    let cuts = bipartition_reports(&inputs.rx, 2, &opts)?;
    t.check(cuts.len() == 3, 0.0, || format!("{} R_X cuts reported", cuts.len()));
    for c in &cuts {
        t.note(format!(
            "R_X cut {}|rest: {} (max rank {})",
            c.bipartition[0] + 1,
            if c.entangling { "entangling" } else { "product-preserving" },
            c.max_rank()
        ));
    }
    Ok(t)
}

fn criterion_13(inputs: &Inputs) -> Result<Tally> {
    let mut t = Tally::default();
    let braided = verify_braid_relations(&inputs.kl[0], GybeSignature::braided(2)?, 4, 1e-10, false)?;
    for rep in braided.adjacent.iter().chain(&braided.far) {
        let rel = rep.relation.clone().unwrap_or_default();
        t.check(rep.passed, rep.residual_max, || format!("KL1 {rel}: {:.2e}", rep.residual_max));
    }
    let sig = GybeSignature::new(2, 3, 2)?;
    let rx = verify_braid_relations(&inputs.rx, sig, 4, 1e-10, false)?;
    for rep in rx.adjacent.iter().chain(&rx.far) {
        let rel = rep.relation.clone().unwrap_or_default();
        t.check(rep.passed, rep.residual_max, || format!("R_X {rel}: {:.2e}", rep.residual_max));
    }
    t.check(sig.far_commutativity_guaranteed() && rx.far_passed(), 0.0, || "R_X far commutativity".into());
    t.note(format!("KL1 far commutativity {}", if braided.far_passed() { "holds" } else { "fails" }));
    Ok(t)
}

fn criterion_14(_cfg: &Config) -> Result<Tally> {
    let mut t = Tally::default();
    let start = Instant::now();
    let small = search_permutation_images(GybeSignature::braided(2)?, SearchOptions::default())?;
    within(&mut t, start, Duration::from_secs(1), "(2,2,1) search");
    let identity: Vec<usize> = (0..4).collect();
    t.check(small.contains(&identity), 0.0, || "identity missing".into());
    t.check(small.contains(&vec![0, 2, 1, 3]), 0.0, || "swap missing".into());
    t.note(format!("(2,2,1): {} of 24", small.len()));

    let start = Instant::now();
    let sols = search_permutation_images(GybeSignature::new(2, 3, 2)?, SearchOptions::default())?;
    within(&mut t, start, Duration::from_secs(300), "(2,3,2) search");
    t.note(format!("(2,3,2): {} of 40320", sols.len()));
    t.check(!sols.is_empty(), 0.0, || "(2,3,2) search empty".into());
    let found: BTreeMap<&Vec<usize>, ()> = sols.iter().map(|p| (p, ())).collect();
    for p in &sols {
        let mut inv = vec![0; p.len()];
        for (j, &i) in p.iter().enumerate() {
            inv[i] = j;
        }
        t.check(found.contains_key(&inv), 0.0, || format!("inverse of {p:?} missing"));
    }
    Ok(t)
}

fn wrap(id: u8, f: impl FnOnce() -> Result<Tally>) -> Outcome {
    let start = Instant::now();
    match f() {
        Ok(t) => t.finish(id, start),
        Err(e) => Outcome {
            id,
            title: title(id),
            passed: false,
            worst: f64::NAN,
            detail: format!("error: {e}"),
            elapsed: start.elapsed(),
        },
    }
}

pub fn run(id: u8, cfg: &Config, inputs: &Inputs) -> Outcome {
    wrap(id, || match id {
        1 => criterion_1(cfg),
        2 => criterion_2(inputs),
        3 => criterion_3(cfg),
        4 => criterion_4(cfg),
        5 => criterion_5(inputs),
        6 => criterion_6(cfg),
        7 => criterion_7(cfg),
        8 => criterion_8(cfg),
        9 => criterion_9(cfg),
        10 => criterion_10(cfg, inputs),
        11 => criterion_11(cfg, inputs),
        12 => criterion_12(cfg, inputs),
        13 => criterion_13(inputs),
        14 => criterion_14(cfg),
        other => Err(crate::Error::InvalidArgument(format!("no criterion {other}"))),
    })
}

pub fn run_all(cfg: &Config) -> Vec<Outcome> {
    run_all_with(cfg, &Inputs::default())
}

pub fn run_all_with(cfg: &Config, inputs: &Inputs) -> Vec<Outcome> {
    (1..=14).map(|id| run(id, cfg, inputs)).collect()
}

/// One line per criterion; no timings, so the text is reproducible.
pub fn format_table(outcomes: &[Outcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        let _ = writeln!(
            s,
            "criterion {:>2}  {}  worst {:>9.2e}  {}: {}",
            o.id,
            if o.passed { "PASS" } else { "FAIL" },
            o.worst,
            o.title,
            o.detail
        );
    }
    s
}
