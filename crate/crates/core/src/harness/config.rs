//! Flat `key=value` run configuration.

use serde::Serialize;

use crate::game::GameKind;
use crate::strategy::StageConfig;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub kind: GameKind,
    pub q: usize,
    pub n: Vec<usize>,
    /// Grid of constants `c` with `p = c log n / n`.
    pub c: Vec<f64>,
    pub trials: usize,
    /// Waiter strategy name; `auto` means `staged` for Waiter-Client and
    /// `isolator` for Client-Waiter games.
    pub waiter: String,
    pub client: String,
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    /// Abort when more than this fraction of trials fault.
    pub fault_threshold: f64,
    /// Client graphs with at most this many vertices are adjudicated exactly.
    pub exact_cap: usize,
    /// Rotation-extension restarts when adjudicating larger graphs.
    pub restarts: usize,
    pub stage: StageConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kind: GameKind::WaiterClient,
            q: 1,
            n: vec![150],
            c: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0],
            trials: 100,
            waiter: "auto".into(),
            client: "random".into(),
            seed: 1,
            workers: 0,
            fault_threshold: 0.5,
            exact_cap: 12,
            restarts: 5,
            stage: StageConfig::default(),
        }
    }
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("bad entry {s:?} in {key}")))
        .collect()
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.trim().parse().map_err(|_| format!("bad value {v:?} for {key}"))
}

impl RunConfig {
    /// Applies one setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key.trim() {
            "kind" => self.kind = value.parse()?,
            "q" => self.q = num(key, value)?,
            "n" => self.n = list(key, value)?,
            "c" => self.c = list(key, value)?,
            "trials" => self.trials = num(key, value)?,
            "waiter" => self.waiter = value.to_string(),
            "client" => self.client = value.to_string(),
            "seed" => self.seed = num(key, value)?,
            "workers" => self.workers = num(key, value)?,
            "fault_threshold" => self.fault_threshold = num(key, value)?,
            "exact_cap" => self.exact_cap = num(key, value)?,
            "restarts" => self.restarts = num(key, value)?,
            other => {
                let stage_key = other.strip_prefix("stage.").unwrap_or(other);
                if !self.stage.set(stage_key, value)? {
                    return Err(format!("unknown configuration key {other:?}"));
                }
            }
        }
        Ok(())
    }

    /// Parses a configuration file: one `key=value` per line, `#` comments.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
            self.set(k, v).map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.q == 0 {
            return Err("q must be at least 1".into());
        }
        if self.trials == 0 {
            return Err("trials must be at least 1".into());
        }
        if self.n.is_empty() || self.n.iter().any(|&n| n < 2) {
            return Err("n must list sizes of at least 2".into());
        }
        if self.c.is_empty() || self.c.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
            return Err("c must list positive constants".into());
        }
        if !(0.0..=1.0).contains(&self.fault_threshold) {
            return Err("fault_threshold must lie in [0, 1]".into());
        }
        self.stage.validate()
    }

    /// Waiter name after resolving `auto`.
    pub fn waiter_name(&self) -> &str {
        match (self.waiter.as_str(), self.kind) {
            ("auto", GameKind::WaiterClient) => "staged",
            ("auto", GameKind::ClientWaiter) => "isolator",
            (name, _) => name,
        }
    }

    /// Every resolved value, one `key=value` per line.
    pub fn to_text(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        let mut lines = vec![
            format!("kind={}", self.kind.short_name().to_ascii_lowercase()),
            format!("q={}", self.q),
            format!("n={}", join(self.n.iter().map(|x| x.to_string()).collect())),
            format!("c={}", join(self.c.iter().map(|x| x.to_string()).collect())),
            format!("trials={}", self.trials),
            format!("waiter={}", self.waiter_name()),
            format!("client={}", self.client),
            format!("seed={}", self.seed),
            format!("workers={}", self.workers),
            format!("fault_threshold={}", self.fault_threshold),
            format!("exact_cap={}", self.exact_cap),
            format!("restarts={}", self.restarts),
        ];
        lines.extend(self.stage.to_pairs().into_iter().map(|(k, v)| format!("stage.{k}={v}")));
        lines.join("\n") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "kind=cw\nq=2\nn=60,80\nc=1,2.5 # grid\ntrials=7\nstage.c_bar=1.5\ngamma=3\n";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.kind, GameKind::ClientWaiter);
        assert_eq!(cfg.n, vec![60, 80]);
        assert_eq!(cfg.c, vec![1.0, 2.5]);
        assert_eq!(cfg.stage.c_bar, 1.5);
        assert_eq!(cfg.stage.gamma, Some(3));
        assert_eq!(cfg.waiter_name(), "isolator");
        assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), RunConfig { waiter: "isolator".into(), workers: 0, ..cfg });
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("nonsense=1").is_err());
        assert!(RunConfig::parse("trials=0").is_err());
        assert!(RunConfig::parse("c=0").is_err());
        assert!(RunConfig::parse("q").is_err());
    }
}
