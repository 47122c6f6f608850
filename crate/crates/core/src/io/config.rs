use crate::error::{Error, Result};
use crate::model::{ModelParams, Window};
use crate::sweep::ScanConfig;

/// Everything a run needs besides the command itself.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub scan: ScanConfig,
    pub window: Window,
    pub resolution: usize,
}

pub const DEFAULT_RESOLUTION: usize = 200;

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::symmetric(1.0),
            scan: ScanConfig::default(),
            window: Window::default(),
            resolution: DEFAULT_RESOLUTION,
        }
    }
}

/// Recognised keys, in the order [`RunConfig::to_text`] writes them.
pub const KEYS: [&str; 14] = [
    "gamma1", "gamma2", "tau1", "tau2", "n1", "n2", "k1", "k2", "transient", "detect",
    "max_period", "ics", "window", "resolution",
];

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Syntax {
        line,
        msg: format!("cannot parse value {v:?} for key {key}"),
    })
}

fn floats(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|t| num(line, key, t)).collect()
}

impl RunConfig {
    /// Set one key from its textual value. Keys are case-insensitive.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let key = key.trim().to_ascii_lowercase();
        let p = &mut self.params;
        match key.as_str() {
            "gamma1" => p.gamma1 = num(line, &key, value)?,
            "gamma2" => p.gamma2 = num(line, &key, value)?,
            "tau1" => p.tau1 = num(line, &key, value)?,
            "tau2" => p.tau2 = num(line, &key, value)?,
            "n1" => p.n1 = num(line, &key, value)?,
            "n2" => p.n2 = num(line, &key, value)?,
            "k1" => p.k1 = num(line, &key, value)?,
            "k2" => p.k2 = num(line, &key, value)?,
            "transient" => self.scan.transient = num(line, &key, value)?,
            "detect" => self.scan.detect = num(line, &key, value)?,
            "max_period" => self.scan.max_period = num(line, &key, value)?,
            "resolution" => self.resolution = num(line, &key, value)?,
            "ics" => {
                let mut ics = Vec::new();
                for pair in value.split(';').filter(|s| !s.trim().is_empty()) {
                    match floats(line, &key, pair)?.as_slice() {
                        [a, b] => ics.push((*a, *b)),
                        _ => {
                            return Err(Error::Syntax {
                                line,
                                msg: format!("initial condition {pair:?} is not a pair a,b"),
                            })
                        }
                    }
                }
                self.scan.ics = ics;
            }
            "window" => match floats(line, &key, value)?.as_slice() {
                [a, b, c, d] => self.window = Window::new(*a, *b, *c, *d),
                _ => {
                    return Err(Error::Syntax {
                        line,
                        msg: "window needs x_min,x_max,y_min,y_max".into(),
                    })
                }
            },
            _ => {
                return Err(Error::Syntax { line, msg: format!("unknown key {key:?}") });
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.scan.validate()?;
        self.window.validate()?;
        if self.resolution < 2 {
            return Err(Error::Resolution(self.resolution));
        }
        Ok(())
    }

    /// Serialise in the format read by [`parse_config`].
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let w = &self.window;
        let ics: Vec<String> = self.scan.ics.iter().map(|(a, b)| format!("{a},{b}")).collect();
        format!(
            "gamma1 = {}\ngamma2 = {}\ntau1 = {}\ntau2 = {}\nn1 = {}\nn2 = {}\nk1 = {}\nk2 = {}\n\
             transient = {}\ndetect = {}\nmax_period = {}\nics = {}\nwindow = {},{},{},{}\nresolution = {}\n",
            p.gamma1,
            p.gamma2,
            p.tau1,
            p.tau2,
            p.n1,
            p.n2,
            p.k1,
            p.k2,
            self.scan.transient,
            self.scan.detect,
            self.scan.max_period,
            ics.join("; "),
            w.x_min,
            w.x_max,
            w.y_min,
            w.y_max,
            self.resolution
        )
    }
}

/// Parse `key = value` lines; `#` starts a comment. Missing keys keep their
/// defaults (canonical parameters with `K1 = K2 = 1`).
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Syntax { line: i + 1, msg: format!("expected key = value, got {line:?}") });
        };
        cfg.set(k, v.trim(), i + 1)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_gives_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c.params, ModelParams::symmetric(1.0));
        assert_eq!(c.scan, ScanConfig::default());
    }

    #[test]
    fn fig1_instance() {
        let c = parse_config("K1 = 1.4\nK2 = 1.1").unwrap();
        assert_eq!(c.params, ModelParams::canonical(1.4, 1.1));
    }

    #[test]
    fn k_above_n_cites_rule() {
        let e = parse_config("K1 = 2.0").unwrap_err();
        assert!(e.to_string().contains("k1 <= n1"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_line() {
        assert_eq!(
            parse_config("# c\nk1 = 1\nbogus 3"),
            Err(Error::Syntax { line: 3, msg: "expected key = value, got \"bogus 3\"".into() })
        );
        assert!(matches!(parse_config("\nfoo = 1"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_config("k1 = abc"), Err(Error::Syntax { line: 1, .. })));
    }

    #[test]
    fn round_trip() {
        let text = "k1 = 1.37\nk2=0.3\nics = 1,1; 0.2,0.7; 0.7,0.2\nwindow = 0,1.5,0,1.5 # plot\nresolution = 64\ntransient = 10";
        let c = parse_config(text).unwrap();
        assert_eq!(parse_config(&c.to_text()).unwrap(), c);
        assert_eq!(c.scan.ics.len(), 3);
        assert_eq!(c.window, Window::square(0.0, 1.5));
    }
}
