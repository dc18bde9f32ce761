//! Theta functions and their z-derivatives at a few points, with tail bounds.
use thetakit::theta::{theta_deriv, theta_null, ModularPoint, ThetaIndex};

fn main() -> thetakit::Result<()> {
    let mp = ModularPoint::new(0.5)?;
    println!("t = {}, q = {:.6e}, working precision {} bits", mp.t(), mp.q(), mp.bits());
    for j in 1..=4 {
        let idx = ThetaIndex::from_index(j)?;
        if idx == ThetaIndex::One {
            println!("theta1'(0) = {:.15}", theta_deriv(idx, 0.0, &mp, 1, 1e-14)?.value);
        } else {
            println!("theta{j}(0) = {:.15}", theta_null(idx, &mp, 1e-14)?.value);
        }
        for d in 0..3 {
            let e = theta_deriv(idx, 0.3, &mp, d, 1e-14)?;
            println!("  d^{d}/dz^{d} theta{j}(0.3) = {:+.15e}  (tail <= {:.1e}, {} terms)", e.value, e.tail_bound, e.terms_used);
        }
    }
    Ok(())
}
