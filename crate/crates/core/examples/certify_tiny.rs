//! Fast momentum-space diagrams against the position-space oracle on the
//! 16 x 16 reference instance. Takes about a minute in release mode.

use wigner_direct::oracle::{certify, CertificationInstance, OracleOptions};

fn main() -> wigner_direct::error::Result<()> {
    let instance = CertificationInstance::tiny();
    let report = certify(&instance, &OracleOptions::default())?;
    for term in &report.terms {
        println!("{} ({:.1} s)", term.term.name(), term.oracle_seconds);
        for c in &term.probes {
            println!(
                "  ({:>+6.3}, {:>+6.3})  fast {:>+.10e}  oracle {:>+.10e}  rel {:.1e}  {}",
                c.x,
                c.p,
                c.fast.0,
                c.oracle.0,
                c.rel_diff,
                if c.pass { "ok" } else { "FAIL" }
            );
        }
    }
    println!(
        "\ntolerance {:.0e}, fast path {:.2} s, total {:.1} s, pass: {}",
        report.tolerance, report.fast_seconds, report.total_seconds, report.pass
    );
    Ok(())
}
