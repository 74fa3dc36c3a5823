//! The verification command: one printed line per check, exit 0 only when
//! every check passes.

use thermoshift::asymptotics::{mu_delta_n, theorem_gap};
use thermoshift::oracle::brute_mu_delta_n;
use thermoshift::subsystem::{analyze, verify_block_equivalence};
use thermoshift::transfer::{build_transfer, equilibrium_of};
use thermoshift::{Error, Tolerances};

use crate::error::CliError;
use crate::Prepared;

struct Check {
    name: &'static str,
    worst: f64,
    pass: bool,
}

impl Check {
    fn residual(name: &'static str, worst: f64, tol: f64) -> Self {
        Check {
            name,
            worst,
            pass: worst <= tol,
        }
    }

    fn boolean(name: &'static str, pass: bool) -> Self {
        Check {
            name,
            worst: if pass { 0.0 } else { f64::NAN },
            pass,
        }
    }

    fn print(&self) {
        if self.pass {
            println!("PASS {:<24} worst residual {:.3e}", self.name, self.worst);
        } else {
            println!("FAIL {:<24} worst residual {:.3e}", self.name, self.worst);
        }
    }
}

pub(crate) fn run(prep: &Prepared, tol: f64, tols: &Tolerances) -> Result<(), CliError> {
    let mut checks: Vec<Check> = Vec::new();

    let transfer =
        build_transfer(&prep.potential).map_err(|e| CliError::precondition(e.to_string()))?;
    let deviation = transfer.normalization_deviation();
    let normalized = Check::residual("normalized", deviation, tol);
    let normalized_ok = normalized.pass;
    checks.push(normalized);

    if normalized_ok {
        let analysis = analyze(&prep.potential, &prep.delta, tols)
            .map_err(|e| CliError::precondition(e.to_string()))?;
        let measure = equilibrium_of(&prep.potential, tols)
            .map_err(|e| CliError::precondition(e.to_string()))?;
        let m = analysis.period;

        let block = verify_block_equivalence(&prep.potential, &analysis, tols)
            .map_err(|e| CliError::precondition(e.to_string()))?;
        let max = |v: &[f64]| v.iter().cloned().fold(0.0f64, f64::max);
        checks.push(Check::residual(
            "coupling chain",
            max(&block.chain_residual),
            tol,
        ));
        checks.push(Check::residual(
            "coupling product",
            block.prod_d_rel_err,
            tol,
        ));
        checks.push(Check::residual("eigen identity", block.eigen_residual, tol));
        checks.push(Check::residual(
            "block recomputation",
            max(&block.h_deviation),
            tol,
        ));
        checks.push(Check::residual(
            "subsystem eigenfunctions",
            max(&block.w_deviation),
            tol,
        ));
        checks.push(Check::residual(
            "block pressures",
            max(&block.block_pressure_err),
            tol,
        ));

        let alpha_ok = (0..m).all(|j| analysis.alpha[j][0] == 1.0);
        checks.push(Check::boolean("alpha base", alpha_ok));

        let support_ok = (0..m).all(|j| {
            analysis.h[j]
                .iter()
                .zip(&analysis.z_classes[j])
                .all(|(&h, &mask)| (h > 0.0) == mask)
        });
        checks.push(Check::boolean("support masks", support_ok));

        let mut worst_oracle = 0.0f64;
        let mut oracle_ok = true;
        let mut budget_hit = false;
        for n in 0..=12 {
            match brute_mu_delta_n(&measure, analysis.delta(), n) {
                Ok(brute) => {
                    let fast = mu_delta_n(&analysis, &measure, n);
                    let rel = (fast - brute).abs() / brute.abs().max(f64::MIN_POSITIVE);
                    worst_oracle = worst_oracle.max(rel);
                    oracle_ok &= rel <= tol;
                }
                Err(Error::EnumerationBudget { .. }) => {
                    budget_hit = true;
                    break;
                }
                Err(e) => return Err(CliError::precondition(e.to_string())),
            }
        }
        if budget_hit {
            println!("SKIP oracle masses           enumeration budget exceeded");
        } else {
            checks.push(Check {
                name: "oracle masses",
                worst: worst_oracle,
                pass: oracle_ok,
            });
        }

        let seq = thermoshift::asymptotics::report(&analysis, &measure, 20.max(2 * m), tol)
            .map_err(|e| CliError::precondition(e.to_string()))?;
        let monotone = (1..seq.mu_seq.len())
            .all(|n| seq.mu_seq[n] > 0.0 && seq.mu_seq[n] <= seq.mu_seq[n - 1] * (1.0 + 1e-12));
        checks.push(Check::boolean("mass monotonicity", monotone));

        let ones = vec![1.0; analysis.restricted().transfer().dim()];
        let early = theorem_gap(&analysis, &ones, m + 1);
        let late = theorem_gap(&analysis, &ones, 4 * m + 8);
        checks.push(Check {
            name: "theorem gap decay",
            worst: late,
            pass: late <= tol || late <= early,
        });
    } else {
        println!("SKIP remaining checks        potential must be normalised first");
    }

    for check in &checks {
        check.print();
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    if failed.is_empty() {
        println!("all checks passed");
        Ok(())
    } else {
        let worst = failed.iter().map(|c| c.worst).fold(0.0f64, f64::max);
        Err(CliError::verification(format!(
            "{} check(s) failed; worst residual {worst:.3e}",
            failed.len()
        )))
    }
}
