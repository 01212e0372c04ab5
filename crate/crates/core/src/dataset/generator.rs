//! Seeded synthetic cohorts.
//!
//! Each student gets two latent traits, ability and conscientiousness.
//! Course scores and weekly study time are linear in the latents plus
//! Gaussian noise; late arrivals are Poisson with a rate that falls as
//! conscientiousness rises; the target score is a weighted combination of
//! the generated observables (with a small java-network synergy term and a
//! saturating study-time benefit) plus noise. Everything is clipped to its
//! legal range and rounded to one decimal, and the whole cohort is a pure
//! function of `(seed, config)`.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding::{splitmix64, stream_rng, tags};

use super::{Dataset, Gender, Provenance, StudentRecord};

/// Linear model for one generated column.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnWeights {
    pub base: f64,
    pub ability: f64,
    pub conscientiousness: f64,
    pub noise_sd: f64,
}

/// Late-arrival model: Poisson with rate
/// `base_rate * exp(-sensitivity * conscientiousness)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttendanceModel {
    pub base_rate: f64,
    pub sensitivity: f64,
}

/// Target-score model over the generated observables. `study_time` counts
/// only up to `study_time_cap` hours; `synergy` weights the
/// `java * computer_network / 100` interaction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetWeights {
    pub intercept: f64,
    pub mathematics: f64,
    pub java: f64,
    pub computer_network: f64,
    pub study_time: f64,
    pub study_time_cap: f64,
    pub attendance: f64,
    pub synergy: f64,
    pub noise_sd: f64,
}

/// Full generator configuration. `columns` maps each linearly generated
/// column (the seven courses plus `study_time`) to its weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub seed: u64,
    pub missing_rate: f64,
    pub columns: BTreeMap<String, ColumnWeights>,
    pub attendance: AttendanceModel,
    pub target: TargetWeights,
}

/// Columns that must appear in `GeneratorConfig::columns`.
const LINEAR_COLUMNS: [&str; 8] = [
    "language",
    "mathematics",
    "english",
    "pe",
    "database",
    "java",
    "computer_network",
    "study_time",
];

/// Observable columns that the missingness pass may mask.
const MASKABLE_COLUMNS: usize = 9;

impl Default for GeneratorConfig {
    fn default() -> Self {
        let mut columns = BTreeMap::new();
        let mut put = |name: &str, base: f64, ability: f64, consc: f64, noise_sd: f64| {
            columns.insert(
                name.to_string(),
                ColumnWeights {
                    base,
                    ability,
                    conscientiousness: consc,
                    noise_sd,
                },
            );
        };
        put("language", 68.0, 2.5, 1.5, 12.0);
        put("mathematics", 70.0, 11.0, 3.0, 7.0);
        put("english", 66.0, 2.5, 1.5, 12.0);
        put("pe", 75.0, 0.8, 0.8, 8.0);
        put("database", 69.0, 11.0, 4.0, 7.0);
        put("java", 67.0, 12.0, 4.0, 6.0);
        put("computer_network", 68.0, 12.0, 4.0, 6.0);
        put("study_time", 6.0, 0.6, 2.4, 1.6);
        GeneratorConfig {
            n: 2000,
            seed: 42,
            missing_rate: 0.02,
            columns,
            attendance: AttendanceModel {
                base_rate: 2.0,
                sensitivity: 0.7,
            },
            target: TargetWeights {
                intercept: 5.0,
                mathematics: 0.22,
                java: 0.30,
                computer_network: 0.28,
                study_time: 1.0,
                study_time_cap: 10.0,
                attendance: -1.2,
                synergy: 0.15,
                noise_sd: 6.0,
            },
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidConfig { reason });
        if !(0.0..1.0).contains(&self.missing_rate) {
            return fail(format!("missing_rate {} not in [0, 1)", self.missing_rate));
        }
        for name in LINEAR_COLUMNS {
            match self.columns.get(name) {
                None => return fail(format!("column `{name}` has no weights")),
                Some(w) if w.noise_sd < 0.0 => {
                    return fail(format!("column `{name}` has negative noise sd"))
                }
                Some(_) => {}
            }
        }
        for name in self.columns.keys() {
            if !LINEAR_COLUMNS.contains(&name.as_str()) {
                return fail(format!("unexpected column `{name}` in weight table"));
            }
        }
        if self.attendance.base_rate <= 0.0 {
            return fail("attendance base_rate must be positive".to_string());
        }
        if self.attendance.sensitivity <= 0.0 {
            return fail("attendance sensitivity must be positive".to_string());
        }
        let t = &self.target;
        if t.noise_sd < 0.0 {
            return fail("target noise sd is negative".to_string());
        }
        if t.study_time_cap <= 0.0 {
            return fail("study_time_cap must be positive".to_string());
        }
        if t.synergy < 0.0 {
            return fail("synergy must be non-negative".to_string());
        }
        for (name, w) in [
            ("mathematics", t.mathematics),
            ("java", t.java),
            ("computer_network", t.computer_network),
            ("study_time", t.study_time),
        ] {
            if w <= 0.0 {
                return fail(format!("target weight on {name} must be positive"));
            }
        }
        if t.attendance >= 0.0 {
            return fail("target weight on attendance must be negative".to_string());
        }
        Ok(())
    }

    /// Stable hex digest of the serialized config, for provenance.
    pub fn digest(&self) -> String {
        let encoded = serde_json::to_string(self).expect("config serializes");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in encoded.bytes() {
            h ^= u64::from(b);
            h = splitmix64(h);
        }
        format!("{h:016x}")
    }
}

/// Generates a cohort from `config`. Identical configs produce identical
/// cohorts, byte for byte once written out.
pub fn generate_synthetic(config: &GeneratorConfig) -> Result<Dataset> {
    config.validate()?;
    let mut rng = stream_rng(config.seed, tags::GENERATOR_LATENTS);
    let standard = Normal::new(0.0, 1.0).expect("unit normal");
    let width = config.n.max(1).to_string().len();

    let mut records = Vec::with_capacity(config.n);
    for i in 0..config.n {
        let gender = if rng.gen::<bool>() {
            Gender::Female
        } else {
            Gender::Male
        };
        let ability: f64 = standard.sample(&mut rng);
        let conscientiousness: f64 = standard.sample(&mut rng);

        let mut value = |name: &str| {
            let w = &config.columns[name];
            w.base
                + w.ability * ability
                + w.conscientiousness * conscientiousness
                + w.noise_sd * standard.sample(&mut rng)
        };
        let language = score(value("language"));
        let mathematics = score(value("mathematics"));
        let english = score(value("english"));
        let pe = score(value("pe"));
        let database = score(value("database"));
        let java = score(value("java"));
        let computer_network = score(value("computer_network"));
        let study_time = round1(value("study_time").max(0.0));

        let rate = config.attendance.base_rate
            * (-config.attendance.sensitivity * conscientiousness).exp();
        let attendance = Poisson::new(rate).expect("positive rate").sample(&mut rng) as u32;

        let t = &config.target;
        let raw = t.intercept
            + t.mathematics * mathematics
            + t.java * java
            + t.computer_network * computer_network
            + t.study_time * study_time.min(t.study_time_cap)
            + t.attendance * f64::from(attendance)
            + t.synergy * java * computer_network / 100.0
            + t.noise_sd * standard.sample(&mut rng);
        let microcomputer = score(raw);

        records.push(StudentRecord {
            student_id: format!("S{:0width$}", i + 1),
            gender,
            language: Some(language),
            mathematics: Some(mathematics),
            english: Some(english),
            pe: Some(pe),
            database: Some(database),
            java: Some(java),
            computer_network: Some(computer_network),
            study_time: Some(study_time),
            attendance: Some(attendance),
            microcomputer: Some(microcomputer),
        });
    }

    // Separate stream so the masking pattern never perturbs the draws above.
    let mut mask_rng = stream_rng(config.seed, tags::GENERATOR_MISSING);
    for r in &mut records {
        let mut holes = [false; MASKABLE_COLUMNS];
        for hole in &mut holes {
            *hole = mask_rng.gen::<f64>() < config.missing_rate;
        }
        let [language, mathematics, english, pe, database, java, network, study, attendance] =
            holes;
        if language {
            r.language = None;
        }
        if mathematics {
            r.mathematics = None;
        }
        if english {
            r.english = None;
        }
        if pe {
            r.pe = None;
        }
        if database {
            r.database = None;
        }
        if java {
            r.java = None;
        }
        if network {
            r.computer_network = None;
        }
        if study {
            r.study_time = None;
        }
        if attendance {
            r.attendance = None;
        }
    }

    Dataset::new(
        records,
        Provenance::Synthetic {
            seed: config.seed,
            config_digest: config.digest(),
        },
    )
}

fn score(raw: f64) -> f64 {
    round1(raw.clamp(0.0, 100.0))
}

fn round1(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}
