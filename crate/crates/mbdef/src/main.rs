//! Batch CLI for the mbdef workbench.
//!
//! Exit codes: 0 all checks pass, 1 an assertion failed, 2 input error.

use clap::{Parser, Subcommand};
use mbdef::io::{self, ReportFormat, RunReport};
use mbdef::{critical, gerstenhaber, linfty, Element, Error};
use rand::SeedableRng;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mbdef", version, about = "exact-arithmetic Morse-Bott deformation workbench")]
struct Cli {
    /// Optional JSON config with default cutoffs and the coefficient field.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized checks; all commands are deterministic for a
    /// fixed seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value = "table")]
    format: String,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Universal critical value in phi1..phiN with exact coefficients.
    UniversalPhic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_weight: Option<u32>,
        /// Truncate to monomials of form-factor count at most this.
        #[arg(long)]
        dim_y: Option<u32>,
        /// Compare the JSON report against a golden file.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Write the golden file instead of comparing.
        #[arg(long)]
        bless: bool,
    },
    /// Maurer-Cartan residual of an element in a model.
    McCheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        cutoff: Option<u32>,
    },
    /// Chain-map check for the critical-value morphism, on a supplied point
    /// or on seeded random points.
    ChiCheck {
        /// Model file; defaults to the built-in two-coordinate model with
        /// differential.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Fiber coordinate name (for model files).
        #[arg(long, default_value = "t")]
        fiber: String,
        /// Fiber polyvector name (for model files).
        #[arg(long, default_value = "tht")]
        theta: String,
        /// Evaluation point file; omitted means random sampling.
        #[arg(long)]
        eta: Option<PathBuf>,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long)]
        cutoff: Option<u32>,
    },
    /// Clifford algebra checks: products, spinor modules, the Thom
    /// factorization, the zero-section resolution, the Koszul kernel.
    Clifford {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        /// Scale for the Koszul kernel contraction (0 = degenerate limit).
        #[arg(long, default_value = "1")]
        scale: String,
    },
    /// Hochschild cohomology of the truncated one-parameter algebra.
    HhUa1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long)]
        bless: bool,
    },
    /// Koszul resolution of the critical skyscraper.
    Koszul {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// Scaling-family diagnostics for the universal path.
    Scaling {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_weight: Option<u32>,
    },
    /// Ideal-closure identities at the critical point.
    IdealCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_weight: Option<u32>,
        /// Perturb the critical point; the checks are then expected to fail.
        #[arg(long)]
        perturb: bool,
    },
    /// Compare a stored JSON report against a golden file.
    Golden {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        golden: PathBuf,
        #[arg(long)]
        bless: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_of(&e))
        }
    }
}

fn exit_code_of(e: &Error) -> u8 {
    match e {
        Error::NotMaurerCartan(_) | Error::Unstable => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let config = match &cli.config {
        Some(path) => io::Config::load(path)?,
        None => io::Config::default(),
    };
    let format: ReportFormat = cli.format.parse()?;
    let cutoff_or_default = |c: Option<u32>| c.unwrap_or(config.default_cutoff);

    let report = match cli.command {
        Cmd::UniversalPhic {
            n,
            max_weight,
            dim_y,
            golden,
            bless,
        } => {
            let w = cutoff_or_default(max_weight);
            let mut report = io::universal_phic_report(n, w, dim_y)?;
            if let Some(path) = golden {
                match io::golden_compare(&report.to_json(), &path, bless)? {
                    io::GoldenOutcome::Pass => report.check("golden", true, "matches golden file"),
                    io::GoldenOutcome::Blessed => {
                        report.check("golden", true, format!("blessed {}", path.display()))
                    }
                    io::GoldenOutcome::Diff(diffs) => {
                        report.check("golden", false, diffs.join("; "))
                    }
                }
            }
            report
        }
        Cmd::McCheck {
            model,
            element,
            cutoff,
        } => {
            let model = io::load_model(&model)?;
            let elem = io::load_element(model.context(), &element)?;
            config.check_element(&elem)?;
            let elem = elem.truncate(cutoff_or_default(cutoff));
            let mut report = RunReport::new("mc-check", &format!("{elem}"), None);
            let residual = model.mc_check(&elem)?;
            report.outputs = serde_json::json!({
                "element": elem.to_json(),
                "residual": residual.to_json(),
                "residual_text": residual.to_string(),
            });
            report.check("maurer_cartan", residual.is_zero(), residual.to_string());
            report
        }
        Cmd::ChiCheck {
            model,
            fiber,
            theta,
            eta,
            samples,
            cutoff,
        } => {
            let setup = match model {
                Some(path) => {
                    let m = io::load_model(&path)?;
                    let ctx = m.context().clone();
                    let t = ctx
                        .lookup(&fiber)
                        .ok_or_else(|| Error::UnknownGenerator(fiber.clone()))?;
                    let th = ctx
                        .lookup(&theta)
                        .ok_or_else(|| Error::UnknownGenerator(theta.clone()))?;
                    linfty::ChiSetup::new(m, t, th)?
                }
                None => linfty::standard_chi_setup(true)?,
            };
            let w = cutoff_or_default(cutoff);
            let mut report =
                RunReport::new("chi-check", &format!("samples={samples} cutoff={w}"), Some(cli.seed));
            let ctx = setup.model().context().clone();
            match eta {
                Some(path) => {
                    let point = io::load_element(&ctx, &path)?;
                    config.check_element(&point)?;
                    let rep = setup.chain_check(&point, w)?;
                    report.outputs = serde_json::json!({
                        "lhs": rep.lhs.to_json(),
                        "rhs": rep.rhs.to_json(),
                    });
                    report.check("chain_map", rep.holds(), format!("lhs {} rhs {}", rep.lhs, rep.rhs));
                }
                None => {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
                    let theta_elem = Element::generator(&ctx, setup.theta_fiber());
                    let mut all_hold = true;
                    for k in 0..samples {
                        let phi = random_path_like(&setup, &mut rng, w)?;
                        let psi = linfty::random_element(&ctx, &mut rng, 1, w.saturating_sub(1), 3)?;
                        let eta = phi.add(&psi.mul(&theta_elem)?)?.truncate(w);
                        let rep = setup.chain_check(&eta, w)?;
                        if !rep.holds() {
                            all_hold = false;
                            report.check(
                                &format!("chain_map_sample_{k}"),
                                false,
                                format!("lhs {} rhs {}", rep.lhs, rep.rhs),
                            );
                        }
                        // dchi kills pure-psi variations
                        let dpsi = linfty::random_element(&ctx, &mut rng, 1, w.saturating_sub(1), 2)?;
                        let killed = setup.dchi(&eta, &Element::zero(&ctx), &dpsi, w)?;
                        if !killed.is_zero() {
                            all_hold = false;
                            report.check(
                                &format!("dchi_kills_psi_sample_{k}"),
                                false,
                                killed.to_string(),
                            );
                        }
                    }
                    report.outputs = serde_json::json!({ "samples": samples });
                    report.check(
                        "chain_map_random_points",
                        all_hold,
                        format!("{samples} seeded points"),
                    );
                }
            }
            report
        }
        Cmd::Clifford {
            rank,
            check,
            max_degree,
            scale,
        } => clifford_report(rank, &check, max_degree, &scale)?,
        Cmd::HhUa1 {
            n,
            max_weight,
            golden,
            bless,
        } => {
            let w = cutoff_or_default(max_weight);
            let rep = linfty::hh_ua1(n, w)?;
            let mut report = RunReport::new("hh-ua1", &format!("n={n} max_weight={w}"), None);
            report.outputs = serde_json::to_value(&rep)?;
            let mut expect: Vec<String> = vec!["1".into()];
            if n > 1 {
                expect.push("t".into());
            }
            for k in 2..n {
                expect.push(format!("t^{k}"));
            }
            report.check(
                "degree0_cohomology_basis",
                rep.degree0_basis == expect,
                format!("{:?}", rep.degree0_basis),
            );
            if let Some(path) = golden {
                match io::golden_compare(&report.to_json(), &path, bless)? {
                    io::GoldenOutcome::Pass => report.check("golden", true, "matches golden file"),
                    io::GoldenOutcome::Blessed => {
                        report.check("golden", true, format!("blessed {}", path.display()))
                    }
                    io::GoldenOutcome::Diff(d) => report.check("golden", false, d.join("; ")),
                }
            }
            report
        }
        Cmd::Koszul { rank, max_degree } => {
            let rep = gerstenhaber::koszul_critical_resolution(rank, max_degree)?;
            let mut report =
                RunReport::new("koszul", &format!("rank={rank} max_degree={max_degree}"), None);
            report.outputs = serde_json::to_value(&rep)?;
            report.check(
                "skyscraper",
                rep.total_dim == 1 && rep.dim_at(0, 0) == 1,
                format!("total homology dimension {}", rep.total_dim),
            );
            report
        }
        Cmd::Scaling { n, max_weight } => {
            let w = cutoff_or_default(max_weight);
            let rep = critical::scaling_family(n, w)?;
            let mut report = RunReport::new("scaling", &format!("n={n} max_weight={w}"), None);
            report.outputs = serde_json::json!({
                "phi_c_xi": rep.phi_c_xi.to_json(),
            });
            report.check("xi_one_specialization", rep.xi_one_matches, "");
            report.check("substitution_form", rep.substitution_matches, "");
            report.check(
                "envelope_identity",
                rep.footnote_holds(),
                format!("lhs {} rhs {}", rep.footnote_lhs, rep.footnote_rhs),
            );
            report
        }
        Cmd::IdealCheck {
            n,
            max_weight,
            perturb,
        } => {
            let w = cutoff_or_default(max_weight);
            let setting = critical::universal_setting(n)?;
            let path = critical::universal_path(&setting)?;
            let model = gerstenhaber::GerstenhaberModel::new(
                setting.ctx.clone(),
                vec![(setting.theta_t, setting.t)],
                Default::default(),
            )?;
            let override_tc = if perturb {
                let base = critical::solve_critical(&path, w)?.t_c[0].clone();
                Some(base.add(&Element::generator(&setting.ctx, setting.phis[0]))?)
            } else {
                None
            };
            let rep = critical::ideal_closure_check(&model, &path, w, override_tc)?;
            let mut report = RunReport::new(
                "ideal-check",
                &format!("n={n} max_weight={w} perturb={perturb}"),
                None,
            );
            report.outputs = serde_json::json!({
                "gradient_bracket_at_tc": rep.gradient_bracket_at_tc.to_string(),
                "membership_remainder": rep.membership_remainder.to_string(),
            });
            report.check("gradient_vanishes", rep.gradient_vanishes, "");
            report.check("hessian_invertible", rep.hessian_invertible, "");
            report.check("ideal_membership", rep.membership_holds, "");
            report
        }
        Cmd::Golden {
            report: report_path,
            golden,
            bless,
        } => {
            let text = std::fs::read_to_string(&report_path)?;
            let current: serde_json::Value = serde_json::from_str(&text)?;
            let mut report = RunReport::new(
                "golden",
                &format!("{} vs {}", report_path.display(), golden.display()),
                None,
            );
            match io::golden_compare(&current, &golden, bless)? {
                io::GoldenOutcome::Pass => report.check("golden", true, "match"),
                io::GoldenOutcome::Blessed => {
                    report.check("golden", true, format!("blessed {}", golden.display()))
                }
                io::GoldenOutcome::Diff(d) => report.check("golden", false, d.join("; ")),
            }
            report
        }
    };

    print!("{}", report.emit(format));
    Ok(report.all_pass())
}

/// Random deformation-path-shaped element: positive-weight even
/// coefficients against positive fiber powers.
fn random_path_like(
    setup: &linfty::ChiSetup,
    rng: &mut impl rand::Rng,
    cutoff: u32,
) -> Result<Element, Error> {
    let ctx = setup.model().context().clone();
    let te = Element::generator(&ctx, setup.fiber());
    let mut acc = Element::zero(&ctx);
    for n in 1..=3u32 {
        let coeff = linfty::random_element(&ctx, rng, 0, cutoff.saturating_sub(1), 2)?;
        acc = acc.add(&coeff.mul(&te.pow(n)?)?)?;
    }
    Ok(acc.truncate(cutoff))
}

fn clifford_report(
    rank: usize,
    check: &str,
    max_degree: u32,
    scale: &str,
) -> Result<RunReport, Error> {
    use mbdef::clifford;
    let mut report = RunReport::new(
        "clifford",
        &format!("rank={rank} check={check} max_degree={max_degree} scale={scale}"),
        None,
    );
    let mut outputs = serde_json::Map::new();
    let want = |name: &str| check == "all" || check == name;
    if want("mul") {
        let alg = clifford::CliffordAlgebra::morse(rank)?;
        report.check(
            "dimension",
            alg.dimension() == 1 << rank,
            format!("dim {}", alg.dimension()),
        );
        if rank >= 1 {
            let e = alg.generator(0);
            let sq = alg.mul(&e, &e);
            report.check(
                "generator_square",
                sq == alg.scalar(mbdef::Scalar::from_ratio(1, 2)),
                "e^2 = 1/2 for the Morse hessian",
            );
        }
        outputs.insert("dimension".into(), serde_json::json!(alg.dimension()));
    }
    if want("spinor") {
        let s = clifford::spinor_module(rank)?;
        report.check(
            "spinor_relations",
            true,
            "action matrices satisfy the realized Clifford relations",
        );
        outputs.insert(
            "spinor".into(),
            serde_json::json!({
                "dim": s.dim,
                "even": s.even_basis.len(),
                "odd": s.odd_basis.len(),
                "twist": s.twist,
            }),
        );
    }
    if want("thom") && rank >= 1 {
        let mf = clifford::thom_mf(rank)?;
        report.check("thom_curvature", mf.verify().is_ok(), "d1 d0 = d0 d1 = W Id");
        outputs.insert(
            "thom".into(),
            serde_json::json!({
                "e0_rank": mf.e0_rank,
                "e1_rank": mf.e1_rank,
                "twist": mf.twist,
            }),
        );
    }
    if want("resolution") {
        if rank <= 2 {
            let rep = clifford::cliff_resolution_homology(rank, max_degree.min(6))?;
            report.check(
                "resolution_skyscraper",
                rep.total_dim == 1 && rep.fiber_at_one == (0, 0),
                format!("total {} fiber {:?}", rep.total_dim, rep.fiber_at_one),
            );
            outputs.insert("resolution".into(), serde_json::to_value(&rep)?);
        } else {
            report.check("resolution_skipped", true, "rank above desk-scale bound 2");
        }
    }
    if want("koszul") {
        if rank <= 2 && rank >= 1 {
            let s = io::parse_rational(scale)?;
            let rep = clifford::koszul_kernel(rank, &s, max_degree.min(6))?;
            report.check("koszul_square", rep.square_identity_holds, "Q^2 = s<n+,n->");
            if s.is_zero() {
                let diagonal = rep
                    .homology
                    .iter()
                    .all(|st| st.y_degree == 0 && st.wedge_count == rank as u32);
                report.check("koszul_diagonal", diagonal, "homology is the diagonal ring");
            }
            outputs.insert("koszul".into(), serde_json::to_value(&rep)?);
        } else {
            report.check("koszul_skipped", true, "rank outside 1..=2");
        }
    }
    if want("knorrer") && rank == 1 {
        let rep = clifford::knorrer_check(max_degree)?;
        report.check("knorrer", rep.pass(), format!("endo dims {:?}", rep.endo_dims));
        outputs.insert("knorrer".into(), serde_json::to_value(&rep)?);
    }
    report.outputs = serde_json::Value::Object(outputs);
    Ok(report)
}
