//! Experiment drivers, CSV tables and SVG plots.

mod experiments;
mod svg;
mod table;

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::language::{build_sequential, build_sequential_word, build_spatial, BuildError, BuiltWalk, LanguageId, Mode, Word};

pub use experiments::{
    exp_bound_sweep, exp_discriminate, exp_fidelity_curve, exp_quantum_input, exp_resources, to_table, BoundRow,
    CurveRow, DiscriminationRow, QuantumInputRow, ResourceRow, TableRow,
};
pub use svg::{plot_spec_for, render_svg, render_svg_with, PlotSpec, Series, SVG_HEIGHT, SVG_WIDTH};
pub use table::{format_sig17, parse_csv, Cell, ParsedCsv, Table, SCHEMA_TAG};

/// Longest strings the exhaustive bound sweep will enumerate.
pub const MAX_SWEEP_LEN: usize = 14;
pub const MAX_RESOURCE_LEN: usize = 64;
pub const MAX_COUNT: usize = 100_000;
pub const MAX_GRID: usize = 100_000;
pub const DEFAULT_GRID: usize = 101;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("while evaluating {string:?}: {source}")]
    AtString {
        string: String,
        #[source]
        source: Box<LabError>,
    },
    #[error("plot: {0}")]
    Plot(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    /// True for errors caused by bad user input rather than the environment.
    pub fn is_validation(&self) -> bool {
        match self {
            LabError::Build(_) | LabError::Invalid(_) | LabError::Plot(_) | LabError::Csv(_) => true,
            LabError::AtString { source, .. } => source.is_validation(),
            LabError::Analysis(_) | LabError::Io { .. } => false,
        }
    }
}

fn invalid(msg: impl Into<String>) -> LabError {
    LabError::Invalid(msg.into())
}

/// Whether sweeps fan out over rayon's pool. Both give identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Serial,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    FidelityCurve {
        language: LanguageId,
        mode: Mode,
        count: usize,
    },
    QuantumInput {
        base: Word,
        language: Option<LanguageId>,
        grid: usize,
    },
    Bounds {
        language: LanguageId,
        mode: Mode,
        max_len: usize,
    },
    Resources {
        max_len: usize,
    },
    Discriminate {
        w1: Word,
        w2: Word,
        language: Option<LanguageId>,
        grid: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub execution: Execution,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            execution: Execution::default(),
            out: None,
            svg: None,
        }
    }

    pub fn validate(&self) -> Result<(), LabError> {
        match &self.experiment {
            Experiment::FidelityCurve { count, .. } => check_count(*count),
            Experiment::QuantumInput { grid, .. } | Experiment::Discriminate { grid, .. } => check_grid(*grid),
            Experiment::Bounds { max_len, .. } => check_range("max length", *max_len, MAX_SWEEP_LEN),
            Experiment::Resources { max_len } => check_range("max length", *max_len, MAX_RESOURCE_LEN),
        }
    }

    pub fn run(&self) -> Result<Table, LabError> {
        self.validate()?;
        let exec = self.execution;
        Ok(match &self.experiment {
            Experiment::FidelityCurve { language, mode, count } => {
                to_table(&exp_fidelity_curve(language, *mode, *count, exec)?)
            }
            Experiment::QuantumInput { base, language, grid } => {
                to_table(&exp_quantum_input(base, language.as_ref(), *grid)?)
            }
            Experiment::Bounds { language, mode, max_len } => {
                to_table(&exp_bound_sweep(language, *mode, *max_len, exec)?)
            }
            Experiment::Resources { max_len } => to_table(&exp_resources(*max_len)?),
            Experiment::Discriminate { w1, w2, language, grid } => {
                to_table(&exp_discriminate(w1, w2, language.as_ref(), *grid)?)
            }
        })
    }

    /// Runs the experiment and writes the CSV (and SVG, if requested).
    /// Returns the CSV text.
    pub fn execute(&self) -> Result<String, LabError> {
        let csv = self.run()?.to_csv()?;
        if let Some(path) = &self.out {
            write_file(path, &csv)?;
        }
        if let Some(path) = &self.svg {
            write_file(path, &render_svg(&csv)?)?;
        }
        Ok(csv)
    }
}

pub fn write_file(path: &std::path::Path, contents: &str) -> Result<(), LabError> {
    std::fs::write(path, contents).map_err(|source| LabError::Io {
        path: path.to_owned(),
        source,
    })
}

fn check_range(what: &str, v: usize, max: usize) -> Result<(), LabError> {
    if v == 0 || v > max {
        return Err(invalid(format!("{what} must be in 1..={max}, got {v}")));
    }
    Ok(())
}

fn check_count(count: usize) -> Result<(), LabError> {
    check_range("count", count, MAX_COUNT)
}

fn check_grid(grid: usize) -> Result<(), LabError> {
    if !(2..=MAX_GRID).contains(&grid) {
        return Err(invalid(format!("grid must be in 2..={MAX_GRID}, got {grid}")));
    }
    Ok(())
}

/// `grid` evenly spaced angles from 0 to π/2 inclusive.
pub fn theta_grid(grid: usize) -> Vec<f64> {
    match grid {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..grid)
            .map(|i| {
                if i == grid - 1 {
                    FRAC_PI_2
                } else {
                    FRAC_PI_2 * i as f64 / (grid - 1) as f64
                }
            })
            .collect(),
    }
}

/// Builds the acceptor for `language` in `mode` for inputs of length `n`.
pub fn build_walk(language: &LanguageId, mode: Mode, n: usize) -> Result<BuiltWalk, BuildError> {
    match (mode, language) {
        (Mode::Spatial, _) => build_spatial(language, n),
        (Mode::Sequential, LanguageId::SpecificWord(w)) if w.len() == n => build_sequential_word(w),
        (Mode::Sequential, LanguageId::SpecificWord(w)) => Err(BuildError::LengthMismatch {
            expected: w.len(),
            found: n,
        }),
        (Mode::Sequential, _) => build_sequential(language, n),
    }
}

/// Whether [`build_walk`] has an acceptor for exactly length `n`.
pub fn native_length(language: &LanguageId, mode: Mode, n: usize) -> bool {
    match (language, mode) {
        _ if n == 0 => false,
        (LanguageId::SpecificWord(w), _) => w.len() == n,
        (LanguageId::Lab, Mode::Sequential) => true,
        _ => n.is_multiple_of(2),
    }
}
