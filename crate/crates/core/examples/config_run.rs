//! Drives a run from configuration text, as the command-line tool does,
//! and prints the manifest summary.

use wigner_direct::cli_io::{parse_config_with_overrides, run, KEYS};

const CONFIG: &str = "\
# weakly coupled cat state
mode = observables
model.g = 0.1
grid.n_x = 48
grid.dx = 0.45
initial.kind = cat
initial.separation = 5
times = 0, 0.5, 1
";

fn main() -> wigner_direct::error::Result<()> {
    println!("recognised keys:");
    for (key, default, meaning) in KEYS {
        println!("  {key:<22} {default:<12} {meaning}");
    }

    let dir = std::env::temp_dir().join("wigner-direct-config-run");
    let overrides = vec![format!("output.dir={}", dir.display())];
    let cfg = parse_config_with_overrides(CONFIG, &overrides)?;
    let manifest = run(&cfg)?;

    println!("\nstatus {}, checks passed: {}", manifest.status, manifest.checks_passed);
    for slice in &manifest.slices {
        let o = &slice.observables;
        println!(
            "  t = {:<4} norm {:.8}  purity {:.8}  negativity {:.8}",
            slice.t, o.norm, o.purity, o.negativity_volume
        );
    }
    for f in &manifest.files {
        println!("  {} {} bytes sha256 {}", f.path, f.bytes, &f.sha256[..16]);
    }
    println!("written to {}", dir.display());

    match parse_config_with_overrides(CONFIG, &["grid.n_x=47".into(), "modle.g=1".into()]) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("\n{e}"),
    }
    Ok(())
}
