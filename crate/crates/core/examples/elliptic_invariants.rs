//! Half-period values and invariants of the rectangular lattice across t.
use thetakit::elliptic::half_periods_and_invariants;
use thetakit::theta::ModularPoint;

fn main() -> thetakit::Result<()> {
    println!("{:>6} {:>14} {:>14} {:>14} {:>14} {:>14} {:>14}", "t", "e3", "c0", "e2", "e1", "g2", "g3");
    for t in [0.05, 0.2, 0.5, 1.0, 2.0, 5.0] {
        let ed = half_periods_and_invariants(&ModularPoint::new(t)?, 1e-12)?;
        println!(
            "{t:>6} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            ed.e3.to_f64(),
            ed.c0.to_f64(),
            ed.e2.to_f64(),
            ed.e1.to_f64(),
            ed.g2.to_f64(),
            ed.g3.to_f64()
        );
    }
    Ok(())
}
