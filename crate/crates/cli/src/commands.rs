use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Result};
use serde_json::json;

use itconn_core::algebra::{Fp, Ring};
use itconn_core::galois::{
    build_torsor_gamma, constants_of_square, hopf_power, ideal_bijection, theta_simplicity, Coaction, GmRing, HopfAlgebra, Ideal, ThetaRing,
};
use itconn_core::hderiv::IterativityReport;
use itconn_core::idmod::{connection_from_structure, kernel_descent, structure_from_connection, FcProjSystem, IdStructure, IdmodError};
use itconn_core::solver::{solve_fundamental, verify_solution, SolverError};
use itconn_core::suite;

use crate::input::{self, ExampleInput, FcSystemInput, HigherDerivationInput, IdStructureInput, IdeInput};
use crate::report::Report;

/// Overrides shared by all commands.
#[derive(Clone, Debug, Default)]
pub struct Config {
    pub p: Option<u32>,
    pub order: Option<usize>,
    pub depth: Option<u32>,
    pub seed: u64,
    pub timings: bool,
}

impl Config {
    fn agree_p(&self, p: u32) -> Result<()> {
        match self.p {
            Some(q) if q != p => bail!("--p {q} disagrees with p = {p} in the input"),
            _ => Ok(()),
        }
    }

    fn agree_depth(&self, depth: u32) -> Result<()> {
        match self.depth {
            Some(l) if l != depth => bail!("--L {l} disagrees with L = {depth} in the input"),
            _ => Ok(()),
        }
    }
}

const ITERATIVITY: &str = "iterativity: psi^(i) o psi^(j) = C(i+j, i) psi^(i+j)";

pub fn check_iterative(path: &Path, cfg: &Config) -> Result<Report> {
    let params: HigherDerivationInput = input::read(path)?;
    cfg.agree_p(params.p)?;
    let order = cfg.order.unwrap_or(params.order);
    let d = params.build(Some(order))?;
    let rep = d.is_iterative(order);
    let mut report = Report::new("check-iterative");
    report.check(format!("iterative to order {}", rep.checked_order), ITERATIVITY, rep.verdict, failure_detail(&rep));
    let failure = rep.first_failure.as_ref().map(|f| json!({"i": f.i, "j": f.j, "generator": f.generator, "lhs": f.lhs, "rhs": f.rhs}));
    Ok(report.with_data(json!({
        "p": params.p,
        "N": order,
        "checked_order": rep.checked_order,
        "first_failure": failure,
        "limitation": IterativityReport::LIMITATION,
    })))
}

fn failure_detail(rep: &IterativityReport) -> Option<String> {
    rep.first_failure.as_ref().map(|f| format!("(i, j) = ({}, {}) on {}: {} != {}", f.i, f.j, f.generator, f.lhs, f.rhs))
}

const SOLUTION: &str = "fundamental solution: theta^(k)(Y) = A_k Y, Y(0) = I";

pub fn solve(path: &Path, cfg: &Config) -> Result<Report> {
    let params: IdeInput = input::read(path)?;
    cfg.agree_p(params.p)?;
    cfg.agree_depth(params.depth)?;
    let order = cfg.order.unwrap_or(params.order);
    let eq = params.build()?;
    let mut report = Report::new("solve");
    match solve_fundamental(&eq, order) {
        Ok(y) => {
            let res = verify_solution(&y, &eq, order);
            report.check("Y(0) invertible", SOLUTION, res.invertible, None);
            report.check(format!("residuals vanish for 1 <= k <= {}", res.checked), SOLUTION, res.verdict(), None);
            Ok(report.with_data(json!({
                "p": eq.p,
                "n": eq.n,
                "N": order,
                "Y": y.render_entries(),
                "residual": {"checked": res.checked, "failures": res.failures},
            })))
        }
        Err(SolverError::Inconsistent { order: k, degree }) => {
            let detail = format!("theta^({k})(Y) = A_{k} Y fails at t^{degree}");
            report.check("equations are compatible", SOLUTION, false, Some(detail));
            Ok(report.with_data(json!({"p": eq.p, "n": eq.n, "N": order, "first_failure": {"k": k, "degree": degree}})))
        }
        Err(e) => Err(e.into()),
    }
}

const DESCENT: &str = "descent: B_l spans the kernel of theta^(k), 0 < k < p^l";
const EQUIVALENCE: &str = "equivalence: Fc-projective systems and iterative structures";

pub fn extract_projsys(path: &Path, cfg: &Config) -> Result<Report> {
    let params: IdStructureInput = input::read(path)?;
    cfg.agree_p(params.p)?;
    let s = params.build()?;
    let level = cfg.depth.unwrap_or(s.depth);
    if level > s.depth {
        bail!("--L {level} exceeds the structure depth {}", s.depth);
    }
    let mut report = Report::new("extract-projsys");
    let it = s.check();
    report.check("structure is iterative", ITERATIVITY, it.verdict, (!it.verdict).then(|| it.to_string()));
    if !it.verdict {
        return Ok(report);
    }
    let sys = match kernel_descent(&s, level) {
        Ok(sys) => sys,
        Err(e @ (IdmodError::RankDefect { .. } | IdmodError::NotDescendable { .. })) => {
            report.check("kernels descend to level L", DESCENT, false, Some(e.to_string()));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    report.check("every lattice has full rank n", DESCENT, sys.b.iter().all(|b| !b.det().is_zero()), None);
    let inv = sys.check_invariant();
    report.check("B_l^-1 B_(l+1) is a Frobenius twist", DESCENT, inv.is_ok(), inv.err().map(|e| e.to_string()));
    if level == s.depth {
        let back = sys.to_id_structure();
        let same = back.as_ref().is_ok_and(|b| *b == s);
        report.check("lattices reproduce the structure", EQUIVALENCE, same, back.err().map(|e| e.to_string()));
    }
    Ok(report.with_data(serde_json::to_value(FcSystemInput::from_system(&sys))?))
}

pub fn roundtrip(path: &Path, cfg: &Config) -> Result<Report> {
    let params = input::read_fc_system(path)?;
    cfg.agree_p(params.p)?;
    cfg.agree_depth(params.depth)?;
    let sys = params.build()?;
    let mut report = Report::new("roundtrip");
    let inv = sys.check_invariant();
    report.check("B_l^-1 B_(l+1) is a Frobenius twist", DESCENT, inv.is_ok(), inv.as_ref().err().map(|e| e.to_string()));
    if inv.is_err() {
        return Ok(report);
    }
    let s = sys.to_id_structure()?;
    let it = s.check();
    report.check("induced structure is iterative", ITERATIVITY, it.verdict, (!it.verdict).then(|| it.to_string()));
    let back = kernel_descent(&s, sys.depth)?;
    report.check("descent has full rank n", DESCENT, back.b.iter().all(|b| !b.det().is_zero()), None);
    report.check("descent recovers the lattices", EQUIVALENCE, sys.same_lattices(&back)?, None);
    let order = s.bound() - 1;
    // the connection route expands to order p^L - 1; keep it small
    if order <= 9 {
        let via = connection_route(&sys, &s, order);
        report.check(format!("connection of order {order} recovers the lattices"), EQUIVALENCE, via.as_ref().is_ok_and(|b| *b), via.err());
    }
    Ok(report.with_data(json!({"p": sys.p, "n": sys.n, "L": sys.depth, "C": s.c.iter().map(input::render_matrix).collect::<Vec<_>>()})))
}

fn connection_route(sys: &FcProjSystem, s: &IdStructure, order: usize) -> Result<bool, String> {
    let c = connection_from_structure(s, order).map_err(|e| e.to_string())?;
    let s2 = structure_from_connection(&c, sys.depth).map_err(|e| e.to_string())?;
    let back = kernel_descent(&s2, sys.depth).map_err(|e| e.to_string())?;
    Ok(s2 == *s && sys.same_lattices(&back).map_err(|e| e.to_string())?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Example {
    Gm,
    Mupmup,
    Alpalp,
}

const TORSOR: &str = "torsor: gamma is a theta-equivariant isomorphism";
const COMODULE: &str = "comodule algebra axioms";
const CONSTANTS: &str = "constants of R (x)_F R have dimension dim K[G]";
const CORRESPONDENCE: &str = "Galois correspondence: invariants of subgroups";
const SIMPLE: &str = "R has no proper nontrivial theta-ideals";
const BIJECTION: &str = "ideals of L correspond to theta-ideals of R (x) L";

pub fn verify_example(which: Example, path: Option<&Path>, cfg: &Config) -> Result<Report> {
    let mut params = match path {
        Some(path) => {
            let params: ExampleInput = input::read(path)?;
            cfg.agree_p(params.p)?;
            cfg.agree_depth(params.depth)?;
            params
        }
        None => ExampleInput::default_for(cfg.p.unwrap_or(2), cfg.depth.unwrap_or(suite::DEFAULT_DEPTH)),
    };
    if path.is_none() && params.p == 2 && params.depth == suite::DEFAULT_DEPTH {
        params.digits = input::Digits::Many(suite::DEFAULT_DIGITS.iter().map(|d| d.to_vec()).collect());
    }
    params.validate()?;
    let name = match which {
        Example::Gm => "verify-example gm",
        Example::Mupmup => "verify-example mupmup",
        Example::Alpalp => "verify-example alpalp",
    };
    let mut report = Report::new(name);
    let timed = |report: &mut Report, start: Instant| {
        if cfg.timings {
            if let Some(c) = report.checks.last_mut() {
                c.millis = Some(start.elapsed().as_millis());
            }
        }
    };
    match which {
        Example::Gm => gm(&params, &mut report)?,
        Example::Mupmup | Example::Alpalp => {
            let gens = params.generators();
            let (ring, group) = if which == Example::Mupmup {
                (ThetaRing::mupmup(params.p, &gens, params.depth)?, HopfAlgebra::mu(params.p, params.p as usize))
            } else {
                (ThetaRing::alpalp(params.p, &gens, params.depth)?, HopfAlgebra::alpha(params.p))
            };
            let coaction = if which == Example::Mupmup { Coaction::diagonal(&ring) } else { Coaction::additive(&ring) };
            let start = Instant::now();
            let torsor = match coaction.and_then(|c| build_torsor_gamma(&ring, c)) {
                Ok(t) => t,
                Err(e) => {
                    report.check("coaction and gamma", TORSOR, false, Some(e.to_string()));
                    return Ok(report);
                }
            };
            report.check("coaction passes comodule axioms and theta-equivariance", COMODULE, true, None);
            report.check("gamma: R (x)_F R -> R (x)_K K[G] is bijective", TORSOR, true, None);
            timed(&mut report, start);
            let hopf = torsor.hopf().clone();
            let expected = hopf_power(&group, gens.len());
            report.check(format!("group algebra has dimension {}", expected.dim()), TORSOR, hopf == expected, None);

            let start = Instant::now();
            let c = constants_of_square(&ring);
            let transported = torsor.transport_constants(&c.basis);
            let ok = c.dim == hopf.dim() && transported == Some(hopf.dim());
            report.check(
                format!("dim C = {} = dim K[G]", c.dim),
                CONSTANTS,
                ok,
                (!ok).then(|| format!("transported rank {transported:?}")),
            );
            timed(&mut report, start);

            let start = Instant::now();
            // G itself is cut out by the zero ideal
            let e_g = torsor.invariant_subalgebra(&hopf.zero_ideal());
            let ok = e_g.as_ref().is_ok_and(|b| b.len() == 1);
            report.check("invariants of G are F", CORRESPONDENCE, ok, e_g.err().map(|e| e.to_string()));
            for (label, ideal) in subgroup_ideals(&hopf, which) {
                let inv = torsor.invariant_subalgebra(&ideal);
                let quotient = hopf.quotient_invariants(&ideal).len();
                let ok = hopf.is_hopf_ideal(&ideal) && inv.as_ref().is_ok_and(|b| b.len() == quotient && torsor.is_theta_subalgebra(b));
                let detail = match &inv {
                    Ok(b) => (!ok).then(|| format!("dim R^H = {}, dim K[G/H] = {quotient}", b.len())),
                    Err(e) => Some(e.to_string()),
                };
                report.check(format!("R^H for H = V{label} is a theta-subalgebra of dim K[G/H]"), CORRESPONDENCE, ok, detail);
            }
            if let Some((label, ideal)) = subgroup_ideals(&hopf, which).into_iter().next() {
                let q = torsor.quotient_torsor(&ideal);
                let ok = q.as_ref().is_ok_and(|q| q.verdict());
                report.check(format!("R^H is a torsor under K[G/H] for H = V{label}"), CORRESPONDENCE, ok, (!ok).then(|| format!("{q:?}")));
            }
            timed(&mut report, start);

            let start = Instant::now();
            let sample = (params.p > 2 || ring.dim() > 4).then_some((200, cfg.seed));
            report.check("theta-simplicity", SIMPLE, theta_simplicity(&ring, sample), sample.map(|_| "sampled".to_string()));
            timed(&mut report, start);
            if which == Example::Mupmup {
                let start = Instant::now();
                let l = HopfAlgebra::mu(params.p, params.p as usize);
                let sample = (params.p > 2).then_some((64, cfg.seed));
                let ib = ideal_bijection(&ring, &l, sample);
                let detail = format!(
                    "{} ideals, {} generators tried{}",
                    ib.ideals_of_l,
                    ib.generators_tried,
                    if sample.is_some() { ", sampled" } else { "" }
                );
                report.check("I -> R (x) I and J -> J n (1 (x) L) are inverse", BIJECTION, ib.verdict(), Some(detail));
                timed(&mut report, start);
            }
            report.data = json!({
                "p": params.p,
                "L": params.depth,
                "digits": gens,
                "dim_R": ring.dim(),
                "dim_K[G]": hopf.dim(),
            });
        }
    }
    Ok(report)
}

/// The defining ideals of the subgroups checked for each product example.
fn subgroup_ideals(hopf: &HopfAlgebra, which: Example) -> Vec<(String, Ideal)> {
    let p = hopf.p() as usize;
    let mut out = vec![];
    let fp = |c: i64| Fp::new(c, p as u32);
    // basis index of x1^a x2^b is a p + b
    let gen = |a: usize, b: usize| {
        let mut v = vec![fp(0); p * p];
        v[a * p + b] = fp(1);
        if which == Example::Mupmup {
            v[0] = v[0].sub(&fp(1));
        }
        hopf.ideal(&[v])
    };
    match which {
        Example::Mupmup => {
            out.push(("(x1 - 1)".to_string(), gen(1, 0)));
            for a in 0..p {
                let name = match a {
                    0 => "(x2 - 1)".to_string(),
                    1 => "(x1 x2 - 1)".to_string(),
                    _ => format!("(x1^{a} x2 - 1)"),
                };
                out.push((name, gen(a, 1)));
            }
        }
        // in the additive examples the generators are the coordinates x1, x2
        _ => {
            out.push(("(x1)".to_string(), gen(1, 0)));
            out.push(("(x2)".to_string(), gen(0, 1)));
        }
    }
    out
}

const GM: &str = "G_m example: theta(s) = s u, coaction s -> s (x) x";

fn gm(params: &ExampleInput, report: &mut Report) -> Result<()> {
    let digits = params.first();
    let ring = match GmRing::new(params.p, &digits, params.depth, params.window) {
        Ok(r) => r,
        Err(e) => {
            report.check("iteration rule on the monomial window", ITERATIVITY, false, Some(e.to_string()));
            return Ok(());
        }
    };
    report.check(format!("iteration rule on s^j, |j| <= {}", params.window), ITERATIVITY, true, None);
    let trivial = digits.iter().all(|&d| d == 0);
    report.check(if trivial { "s is constant" } else { "s is not constant" }, GM, ring.s_is_constant() == trivial, None);
    report.check("coaction s^j -> s^j (x) x^j", COMODULE, ring.check_coaction(), None);
    let d = ring.window();
    let mut bad = vec![];
    for k in 1..=(2 * d) as u32 {
        for a in -d..=d {
            for b in -d..=d {
                let expected = (a - b).rem_euclid(k as i32) == 0;
                if ring.invariance_test(a, b, k) != expected {
                    bad.push(format!("(a, b, k) = ({a}, {b}, {k})"));
                }
            }
        }
    }
    report.check("s^a / s^b is mu_k-invariant iff k | a - b", CORRESPONDENCE, bad.is_empty(), bad.first().cloned());
    report.data = json!({"p": params.p, "L": params.depth, "D": params.window, "digits": digits});
    Ok(())
}

pub fn run_suite(criterion: Option<u8>, cfg: &Config) -> Result<Report> {
    let results = match criterion {
        Some(id) => match suite::run(id, cfg.seed) {
            Some(r) => vec![r],
            None => bail!("no criterion {id}; expected 1..={}", suite::CRITERIA.len()),
        },
        None => suite::run_all(cfg.seed),
    };
    let mut report = Report::new("suite");
    for r in &results {
        let detail = (!r.failures.is_empty()).then(|| r.failures.join("\n"));
        let c = report.check(format!("criterion {} {} ({} checks)", r.id, r.title, r.checks), r.property, r.passed, detail);
        if cfg.timings {
            c.millis = Some(r.millis);
        }
    }
    report.data = json!({"seed": cfg.seed});
    Ok(report)
}
