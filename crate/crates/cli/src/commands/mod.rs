pub mod design;
pub mod oracle;
pub mod reward;
pub mod simulate;

use hetsim_core::model::SystemState;
use hetsim_core::reward::RewardSpec;
use hetsim_core::Error;

/// Parse `--state 1,0,3` into queue lengths; zeros when omitted.
pub fn parse_state(arg: Option<&str>, servers: usize) -> Result<SystemState, Error> {
    match arg {
        None => Ok(SystemState::zeros(servers)),
        Some(text) => {
            let coords: Result<Vec<u32>, _> =
                text.split(',').map(|p| p.trim().parse::<u32>()).collect();
            let coords = coords
                .map_err(|e| Error::validation(format!("state: {e} in \"{text}\"")))?;
            if coords.len() != servers {
                return Err(Error::validation(format!(
                    "state has {} entries, model has {servers} servers",
                    coords.len()
                )));
            }
            Ok(SystemState::from(coords))
        }
    }
}

/// Parse `--reward rmin|rmax|total|queue:<i>|constant:<c>` (queue indices
/// are 1-based on the command line).
pub fn parse_reward(arg: &str) -> Result<RewardSpec, Error> {
    match arg {
        "rmin" => Ok(RewardSpec::MinUtility),
        "rmax" => Ok(RewardSpec::MaxUtility),
        "total" => Ok(RewardSpec::TotalQueueLength),
        other => {
            if let Some(index) = other.strip_prefix("queue:") {
                let server: usize = index
                    .parse()
                    .map_err(|e| Error::validation(format!("reward queue index: {e}")))?;
                if server == 0 {
                    return Err(Error::validation("reward queue index is 1-based"));
                }
                Ok(RewardSpec::QueueLength(server - 1))
            } else if let Some(value) = other.strip_prefix("constant:") {
                let c: f64 = value
                    .parse()
                    .map_err(|e| Error::validation(format!("reward constant: {e}")))?;
                Ok(RewardSpec::Constant(c))
            } else {
                Err(Error::validation(format!(
                    "unknown reward \"{other}\" (expected rmin, rmax, total, queue:<i>, constant:<c>)"
                )))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_parsing() {
        assert_eq!(parse_state(None, 3).unwrap().0, vec![0, 0, 0]);
        assert_eq!(parse_state(Some("1, 2,3"), 3).unwrap().0, vec![1, 2, 3]);
        assert!(parse_state(Some("1,2"), 3).is_err());
        assert!(parse_state(Some("1,x"), 2).is_err());
    }

    #[test]
    fn reward_parsing() {
        assert_eq!(parse_reward("rmin").unwrap(), RewardSpec::MinUtility);
        assert_eq!(parse_reward("queue:3").unwrap(), RewardSpec::QueueLength(2));
        assert_eq!(
            parse_reward("constant:2.5").unwrap(),
            RewardSpec::Constant(2.5)
        );
        assert!(parse_reward("queue:0").is_err());
        assert!(parse_reward("median").is_err());
    }
}
