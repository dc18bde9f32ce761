//! Exact t-derivatives of S_j(u,v;t) against the finite-difference oracle.
use thetakit::quotients::{fd_oracle, s_t_derivs, QuotientSpec};
use thetakit::theta::ThetaIndex;

fn main() -> thetakit::Result<()> {
    let (u, v, t) = (0.2, 0.8, 0.6);
    for j in 1..=4 {
        let spec = QuotientSpec::strict(ThetaIndex::from_index(j)?, u, v)?;
        let exact = s_t_derivs(&spec, t, 4, 1e-12)?;
        println!("S{j}({u},{v};{t}):");
        for (k, val) in exact.values.iter().enumerate() {
            let fd = if (1..=2).contains(&k) { format!("  fd {:+.12e}", fd_oracle(&spec, t, k as u32, 1e-4)?) } else { String::new() };
            println!("  k={k} {val:+.12e}{fd}");
        }
    }
    Ok(())
}
