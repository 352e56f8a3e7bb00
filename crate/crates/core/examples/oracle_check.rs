//! Small rings: brute-force enumeration against the transfer matrix.

use potts_invest::model::{expected_investment_bruteforce, log_partition_function_bruteforce};
use potts_invest::{log_partition_function, CouplingProfile, ModelParams};

fn main() -> potts_invest::Result<()> {
    let params = ModelParams::new(CouplingProfile::new(vec![0.7, -1.3, 0.4, 1.1])?, 1.7)?
        .with_field(-0.25)?;
    println!(" N   log Z (enumerated)     log Z (spectral)      rel. diff");
    for n in 1..=8 {
        let brute = log_partition_function_bruteforce(&params, n)?;
        let spectral = log_partition_function(&params, n)?;
        println!(
            "{n:>2}   {brute:>20.14} {spectral:>20.14}   {:.1e}",
            (brute - spectral).abs() / brute.abs().max(1.0)
        );
    }
    let at_zero = params.clone().with_beta(0.0)?;
    println!(
        "beta = 0, N = 8: <L>/N = {} (mean level {})",
        expected_investment_bruteforce(&at_zero, 8)?,
        at_zero.mean_level()
    );
    Ok(())
}
