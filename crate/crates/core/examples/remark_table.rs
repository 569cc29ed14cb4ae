//! The four published bounds on dw_A(X + Y) for A = diag(1, 2).

fn main() -> semidw::Result<()> {
    let t = semidw::remark::default_remark_table()?;
    for r in &t.rows {
        println!("{:<22} computed {:.6}  published {:<9} diff {:+.2e}  {}", r.name, r.computed, r.expected, r.diff, if r.pass { "ok" } else { "MISMATCH" });
    }
    println!("dw_A(X + Y) = {:.6} (oracle {:.6}, closed form {:.6})", t.dw, t.dw_oracle, t.dw_closed_form);
    println!("strict ordering holds: {}", t.ordering);
    Ok(())
}
