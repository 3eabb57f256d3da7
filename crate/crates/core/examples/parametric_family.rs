//! The families a = 1, b = t² − 2 and their Pell solutions (1 + √D)·εⁱ.

use pellrank::descent::check_parametric_family;

fn main() -> pellrank::Result<()> {
    for i in 0..=2 {
        let t_values: Vec<i64> = (2..=10).collect();
        let report = check_parametric_family(i, &t_values)?;
        println!("E{i}(t): n = {}, m = {}, identity holds: {}", report.n, report.m, report.identity_holds);
        let certified: Vec<i64> = report.members.iter().filter(|m| m.certified).map(|m| m.t).collect();
        println!("  certified for t in {certified:?}");
        for m in report.members.iter().filter(|m| !m.certified) {
            let why = match (&m.certificate, &m.error) {
                (Some(c), _) => format!("{:?}", c.verdict),
                (None, Some(e)) => e.clone(),
                _ => String::new(),
            };
            println!("  t = {}: {why}", m.t);
        }
    }
    Ok(())
}
