//! Normalized effective Q against the cavity linewidth at resonance, for a few
//! values of the extra loss g = Γσ + γ, plus the detuning dependence.

use purcell2d::langevin::{fig2_curve, fig2_inset, q_norm_argmax};

fn main() -> purcell2d::Result<()> {
    for g in [0.0, 0.1, 0.3, 1.0] {
        let curve = fig2_curve(1.0, g, 401)?;
        let (gr, q) = curve.iter().copied().fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
        if g > 0.0 {
            println!("g = {g:<4} peak Q_norm {q:.4} at Gamma_r/gamma21 {gr:.4} (analytic {:.4})", q_norm_argmax(1.0, g));
        } else {
            println!("g = {g:<4} Q_norm decreasing from {:.4} to {:.4}", curve[0].1, curve[curve.len() - 1].1);
        }
    }
    println!("detuning/gamma21  Q_norm  (Gamma_r = gamma21, g = 0)");
    for (det, q) in fig2_inset(1.0, 0.0, 11)? {
        println!("{det:>8.2} {q:>10.5}");
    }
    Ok(())
}
