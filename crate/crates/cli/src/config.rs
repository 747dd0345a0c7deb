use std::collections::HashMap;
use std::path::{Path, PathBuf};

/// Effective settings: defaults, then the config file, then `EUDOXUS_*`
/// environment variables, then command-line flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub budget: u64,
    pub default_precision: u32,
    pub max_k: u32,
    pub state_path: PathBuf,
}

pub const DEFAULT_STATE: &str = "eudoxus.trace";

impl Default for Config {
    fn default() -> Self {
        Config {
            budget: 1 << 20,
            default_precision: 10,
            max_k: 40,
            state_path: PathBuf::from(DEFAULT_STATE),
        }
    }
}

const KEYS: [&str; 4] = ["budget", "default_precision", "max_k", "state_path"];

fn positive<T: std::str::FromStr + PartialEq + From<u8>>(key: &str, raw: &str, origin: &str) -> Result<T, String> {
    match raw.parse::<T>() {
        Ok(v) if v != T::from(0) => Ok(v),
        _ => Err(format!("{origin}: '{key}' must be a positive integer, got '{raw}'")),
    }
}

impl Config {
    fn set(&mut self, key: &str, raw: &str, origin: &str) -> Result<(), String> {
        match key {
            "budget" => self.budget = positive(key, raw, origin)?,
            "default_precision" => self.default_precision = positive(key, raw, origin)?,
            "max_k" => self.max_k = positive(key, raw, origin)?,
            "state_path" => {
                if raw.is_empty() {
                    return Err(format!("{origin}: 'state_path' is empty"));
                }
                self.state_path = PathBuf::from(raw)
            }
            _ => {
                return Err(format!(
                    "{origin}: unknown key '{key}' (expected one of {})",
                    KEYS.join(", ")
                ))
            }
        }
        Ok(())
    }

    /// `key = value` lines; `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str, name: &str) -> Result<(), String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{name}:{}", i + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{origin}: expected 'key = value'"))?;
            self.set(key.trim(), value.trim(), &origin)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        self.apply_file_text(&text, &path.display().to_string())
    }

    pub fn apply_env(&mut self, env: &HashMap<String, String>) -> Result<(), String> {
        for key in KEYS {
            let var = format!("EUDOXUS_{}", key.to_ascii_uppercase());
            if let Some(v) = env.get(&var) {
                self.set(key, v, &var)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering() {
        let mut c = Config::default();
        c.apply_file_text("# comment\nbudget = 64\n\nmax_k=5 # trailing\n", "f")
            .unwrap();
        assert_eq!((c.budget, c.max_k, c.default_precision), (64, 5, 10));
        let env = HashMap::from([("EUDOXUS_BUDGET".to_string(), "128".to_string())]);
        c.apply_env(&env).unwrap();
        assert_eq!(c.budget, 128);
    }

    #[test]
    fn rejects_bad_lines() {
        let mut c = Config::default();
        assert!(c.apply_file_text("colour = red", "f").unwrap_err().contains("unknown key"));
        assert!(c.apply_file_text("budget = 0", "f").is_err());
        assert!(c.apply_file_text("budget = -3", "f").is_err());
        assert!(c.apply_file_text("budget", "f").unwrap_err().contains("f:1"));
    }
}
