#[test]
fn run_all_suites() {
    for name in foxdiff::verify::suite_names() {
        let t0 = std::time::Instant::now();
        match foxdiff::verify::run_suite(name) {
            Ok(rep) => {
                let dt = t0.elapsed().as_secs_f64();
                println!("== {name} ({dt:.1}s) passed={}", rep.passed);
                for c in &rep.checks {
                    if !c.passed {
                        println!("  FAIL {}: {} measured={:.3e} tol={:.3e}", c.id, c.description, c.measured, c.tolerance);
                    }
                }
            }
            Err(e) => println!("== {name} ERROR: {e}"),
        }
    }
}
