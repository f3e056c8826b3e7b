//! Evaluate the recovery guarantees for the three generative models.
//!
//! ```bash
//! cargo run --example theory_bounds
//! ```

use tangles::models::{thm1_bounds, thm2_psi_range, thm_gauss_agreement_range};

fn main() -> tangles::Result<()> {
    println!("questionnaire, n=999 m=40 k=3:");
    for p in [0.02, 0.05, 0.1] {
        let b = thm1_bounds(999, 40, 3, p, 166.0);
        println!(
            "  p={p}: missing <= {:.2e}, spurious <= {:.2e}, gates hold: {}",
            b.prob_missing, b.prob_spurious, b.valid
        );
    }

    println!("block model, n=100 a=16:");
    for (p, q) in [(0.3, 0.05), (0.9, 0.1), (0.3, 0.2)] {
        let r = thm2_psi_range(100.0, p, q, 16.0);
        println!(
            "  p={p} q={q}: window {:?}, non-identifiable: {}",
            r.interval.map(|(lo, hi)| (lo.round(), hi.round())),
            r.non_identifiable
        );
    }

    println!("gaussian mixture, sigma=1, n=1000:");
    for d in [1.5, 3.0, 5.0] {
        let g = thm_gauss_agreement_range(&[0.0, 0.0], &[d, 0.0], 1.0, 1000.0)?;
        println!(
            "  distance {d}: two tangles for a < {:.1}; no extra tangles for a > {:?}",
            g.a_max_existence,
            g.a_min_uniqueness.map(|x| (x * 10.0).round() / 10.0)
        );
    }
    Ok(())
}
