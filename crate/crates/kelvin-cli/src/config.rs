//! Run configuration: built-in defaults, optional flat key-value config
//! file, and command-line flags, merged in ascending precedence.

use std::fmt::Write as _;
use std::path::Path;

/// Grid specification z = min:max:count, r = min:max:count plus an
/// exclusion radius around the load point. Excluded points are skipped and
/// logged, never zero-filled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub z_min: f64,
    pub z_max: f64,
    pub z_count: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub r_count: usize,
}

impl GridSpec {
    /// Parse the form "z=a:b:n,r=c:d:m".
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut z = None;
        let mut r = None;
        for part in text.split(',') {
            let (key, span) = part
                .split_once('=')
                .ok_or_else(|| format!("grid component '{part}' is not key=min:max:count"))?;
            let fields: Vec<&str> = span.split(':').collect();
            if fields.len() != 3 {
                return Err(format!("grid span '{span}' is not min:max:count"));
            }
            let min: f64 = fields[0]
                .parse()
                .map_err(|_| format!("bad grid bound '{}'", fields[0]))?;
            let max: f64 = fields[1]
                .parse()
                .map_err(|_| format!("bad grid bound '{}'", fields[1]))?;
            let count: usize = fields[2]
                .parse()
                .map_err(|_| format!("bad grid count '{}'", fields[2]))?;
            if count < 2 {
                return Err(format!("grid count {count} must be at least 2"));
            }
            if !(min.is_finite() && max.is_finite()) {
                return Err("grid bounds must be finite".to_string());
            }
            match key.trim() {
                "z" => z = Some((min, max, count)),
                "r" => {
                    if min < 0.0 {
                        return Err("radial grid bound must be nonnegative".to_string());
                    }
                    r = Some((min, max, count));
                }
                other => return Err(format!("unknown grid axis '{other}'")),
            }
        }
        let z = z.ok_or("grid is missing the z axis")?;
        let r = r.ok_or("grid is missing the r axis")?;
        Ok(Self {
            z_min: z.0,
            z_max: z.1,
            z_count: z.2,
            r_min: r.0,
            r_max: r.1,
            r_count: r.2,
        })
    }

    pub fn z_values(&self) -> Vec<f64> {
        linspace(self.z_min, self.z_max, self.z_count)
    }

    pub fn r_values(&self) -> Vec<f64> {
        linspace(self.r_min, self.r_max, self.r_count)
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Which verification suites to run.
pub const ALL_SUITES: &[&str] = &[
    "balance",
    "compatibility",
    "traction",
    "signorini",
    "strain-displacement",
    "navier",
    "love-equivalence",
    "helmholtz",
    "scaling",
];

/// Fully resolved run configuration. With a fixed seed every derived
/// artifact (sample files, reports) is byte-identical across runs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub f: f64,
    pub nu: f64,
    pub shear: f64,
    pub seed: u64,
    pub fd_step: f64,
    pub angular_order: usize,
    pub radial_panels: usize,
    pub exclusion_radius: f64,
    pub radii: Vec<f64>,
    pub suites: Vec<String>,
    pub use_paper_printed_signs: bool,
    pub skip_closure: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            f: 1.0,
            nu: 0.25,
            shear: 1.0,
            seed: 0,
            fd_step: 1e-5,
            angular_order: 32,
            radial_panels: 64,
            exclusion_radius: 1e-3,
            radii: vec![0.5, 1.0, 2.0, 10.0],
            suites: ALL_SUITES.iter().map(|s| s.to_string()).collect(),
            use_paper_printed_signs: false,
            skip_closure: false,
        }
    }
}

impl RunConfig {
    /// Apply one key = value pair from a config file.
    pub fn apply_pair(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = |what: &str| format!("config key '{key}': bad {what} '{value}'");
        match key {
            "f" => self.f = value.parse().map_err(|_| bad("number"))?,
            "nu" => self.nu = value.parse().map_err(|_| bad("number"))?,
            "G" => self.shear = value.parse().map_err(|_| bad("number"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("integer"))?,
            "fd_step" => self.fd_step = value.parse().map_err(|_| bad("number"))?,
            "angular_order" => self.angular_order = value.parse().map_err(|_| bad("integer"))?,
            "radial_panels" => self.radial_panels = value.parse().map_err(|_| bad("integer"))?,
            "exclusion_radius" => {
                self.exclusion_radius = value.parse().map_err(|_| bad("number"))?
            }
            "radii" => self.radii = parse_radii(value)?,
            "suite" => self.suites = parse_suites(value)?,
            "use_paper_printed_signs" => {
                self.use_paper_printed_signs = value.parse().map_err(|_| bad("bool"))?
            }
            "skip_closure" => self.skip_closure = value.parse().map_err(|_| bad("bool"))?,
            other => return Err(format!("unknown config key '{other}'")),
        }
        Ok(())
    }

    /// Load key = value lines (UTF-8, # comments) over the current values.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
            self.apply_pair(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        kelvin::IsotropicElastic::new(self.shear, self.nu).map_err(|e| e.to_string())?;
        if !self.f.is_finite() {
            return Err("load magnitude f must be finite".to_string());
        }
        if self.fd_step <= 0.0 || self.fd_step >= 0.5 {
            return Err(
                "fd_step must lie in (0, 0.5): larger steps would difference across the load point"
                    .to_string(),
            );
        }
        if self.angular_order < 4 || self.radial_panels < 4 {
            return Err("quadrature orders must be at least 4".to_string());
        }
        for s in &self.suites {
            if !ALL_SUITES.contains(&s.as_str()) {
                return Err(format!(
                    "unknown suite '{s}' (known: {})",
                    ALL_SUITES.join(", ")
                ));
            }
        }
        for &rho in &self.radii {
            if !(rho > 0.0) {
                return Err(format!("sphere radius {rho} must be positive"));
            }
        }
        Ok(())
    }

    /// The effective configuration echoed at the top of every report.
    pub fn echo(&self) -> String {
        let mut s = String::from("[config]\n");
        let _ = writeln!(s, "f = {:e}", self.f);
        let _ = writeln!(s, "nu = {:e}", self.nu);
        let _ = writeln!(s, "G = {:e}", self.shear);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "fd_step = {:e}", self.fd_step);
        let _ = writeln!(s, "angular_order = {}", self.angular_order);
        let _ = writeln!(s, "radial_panels = {}", self.radial_panels);
        let _ = writeln!(s, "exclusion_radius = {:e}", self.exclusion_radius);
        let radii: Vec<String> = self.radii.iter().map(|r| format!("{r:e}")).collect();
        let _ = writeln!(s, "radii = {}", radii.join(","));
        let _ = writeln!(s, "suite = {}", self.suites.join(","));
        let _ = writeln!(
            s,
            "use_paper_printed_signs = {}",
            self.use_paper_printed_signs
        );
        let _ = writeln!(s, "skip_closure = {}", self.skip_closure);
        s
    }
}

pub fn parse_radii(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad radius '{t}'"))
        })
        .collect()
}

pub fn parse_suites(text: &str) -> Result<Vec<String>, String> {
    let suites: Vec<String> = text.split(',').map(|t| t.trim().to_string()).collect();
    for s in &suites {
        if !ALL_SUITES.contains(&s.as_str()) {
            return Err(format!(
                "unknown suite '{s}' (known: {})",
                ALL_SUITES.join(", ")
            ));
        }
    }
    Ok(suites)
}
