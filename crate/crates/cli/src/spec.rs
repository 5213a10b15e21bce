//! Strategy and game arguments.

use rpd_core::catalog;
use rpd_core::{Memory1Strategy, Memory2Strategy, StageGame, Strategy};

use crate::CliError;

/// A catalog name (`TFT`, `AON-2`), `GTFT:q`, or 5 or 21 comma-separated probabilities.
/// With `memory` 2, memory-1 strategies are lifted.
pub fn parse_strategy(s: &str, memory: u8) -> Result<Strategy, CliError> {
    let s = s.trim();
    let base: Strategy = if let Some(q) = s.strip_prefix("GTFT:").or_else(|| s.strip_prefix("gtft:")) {
        let q: f64 = q.parse().map_err(|_| CliError::Usage(format!("bad GTFT parameter {q}")))?;
        catalog::gtft(q).ok_or_else(|| CliError::Usage(format!("GTFT parameter {q} is not a probability")))?.into()
    } else if s.contains(',') {
        let e = s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad probability {v:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        match e.len() {
            5 => Memory1Strategy::from_f64([e[0], e[1], e[2], e[3], e[4]])?.into(),
            21 => Memory2Strategy::from_f64(&e)?.into(),
            n => return Err(CliError::Usage(format!("expected 5 or 21 entries, got {n}"))),
        }
    } else {
        catalog::named::<f64>(s).ok_or_else(|| CliError::Usage(format!("unknown strategy {s}")))?
    };
    match (memory, base) {
        (1, Strategy::M2(_)) => Err(CliError::Usage(format!("{s} is a memory-2 strategy"))),
        (1, b) => Ok(b),
        (2, b) => Ok(Strategy::M2(b.to_memory2())),
        (m, _) => Err(CliError::Usage(format!("memory must be 1 or 2, got {m}"))),
    }
}

/// `--game a,b,c,d`, replaced by the equal-gains game when `x` is given.
pub fn parse_game(game: &str, x: Option<f64>) -> Result<StageGame, CliError> {
    if let Some(x) = x {
        return Ok(StageGame::equal_gains(x));
    }
    game.parse::<StageGame>().map_err(|e| CliError::Usage(e.to_string()))
}

pub fn check_w(w: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--w must lie in [0, 1], got {w}")))
    }
}
