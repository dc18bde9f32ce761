//! A2 at e1 and e2, in direct and factorized form.
use thetakit::elliptic::half_periods_and_invariants;
use thetakit::proofcheck::{lemma_t, lemma_u};
use thetakit::theta::ModularPoint;

fn main() -> thetakit::Result<()> {
    for t in [0.05, 0.3, 1.0, 5.0] {
        let ed = half_periods_and_invariants(&ModularPoint::new(t)?, 1e-12)?;
        let (at_e1, at_e2) = (lemma_t(&ed), lemma_u(&ed));
        println!(
            "t={t:<5} A2(e1) = {:+.6e} (rel diff {:.1e})   A2(e2) = {:+.6e} (rel diff {:.1e})",
            at_e1.direct.to_f64(),
            at_e1.rel_diff(),
            at_e2.direct.to_f64(),
            at_e2.rel_diff()
        );
    }
    Ok(())
}
