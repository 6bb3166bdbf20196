//! Feed a fixed sign sequence to the approximate learner and print every
//! state transition: truncation, collapse and the return to moment matching.

use noisy_bisect::belief::{ApproximateLearner, LearnerConfig, Mode, Sign};

fn main() -> noisy_bisect::Result<()> {
    let config = LearnerConfig::new(10.0, 1.0);
    let mut learner = ApproximateLearner::new(config)?;
    let signs = "+++-+--+-+++---+";

    println!(
        "{:>3} {:>2} {:>15} {:>10} {:>10} {:>9} {:>9}",
        "t", "x", "mode", "lower", "upper", "theta", "sd"
    );
    for (t, c) in signs.chars().enumerate() {
        let x = if c == '+' { Sign::Plus } else { Sign::Minus };
        learner.observe(x)?;
        let s = learner.state();
        let mode = match s.mode() {
            Mode::Gaussian => "gaussian",
            Mode::TruncatedLower => "truncated-lower",
            Mode::TruncatedUpper => "truncated-upper",
        };
        let sd = s.moments(1.0)?.sigma;
        println!(
            "{:>3} {:>2} {:>15} {:>10.3} {:>10.3} {:>9.4} {:>9.4}",
            t + 1,
            c,
            mode,
            s.lower(),
            s.upper(),
            learner.threshold(),
            sd
        );
    }
    Ok(())
}
