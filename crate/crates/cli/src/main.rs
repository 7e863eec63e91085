//! `mrcost`: estimate MapReduce job costs from a job-spec file, explore
//! what-if configuration changes, and grid-search job parameters.
//!
//! Exit status: 0 on success, 1 for invalid specs/overrides/spaces (with
//! diagnostics on stderr), 2 for I/O failures.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mrcost_core::job_model::{analytic_job_cost, simulate_job, JobEstimate, SimTimeline};
use mrcost_core::optimizer::{
    optimize, whatif, OptimizeError, ParameterSpace, SearchMethod, SpaceError,
};
use mrcost_core::params::{parse_job_spec, JobSpec, JobSpecError, PartialHadoopConfig};
use mrcost_core::ModelError;
use report::{
    machine_document, render_estimate, render_search, render_whatif, search_table_csv,
    EstimateResults, ReportMeta, TimelineSummary, WhatIfRowDoc, TOOL_VERSION,
};
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "mrcost",
    version,
    about = "Analytical cost estimator for Hadoop MapReduce jobs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Analytic,
    Simulated,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Aligned human-readable tables.
    Table,
    /// The job-spec JSON format extended with a `results` section.
    Machine,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Job-spec file (JSON with hadoop/profile/costs sections).
    #[arg(long)]
    spec: PathBuf,
    /// Also write the machine-readable report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Full per-phase dataflow and cost breakdown.
    Estimate {
        #[command(flatten)]
        common: CommonArgs,
        /// Job-level aggregation method.
        #[arg(long, value_enum, default_value_t = MethodArg::Analytic)]
        method: MethodArg,
    },
    /// Estimate via the task-scheduler simulation and export its timeline.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Write the scheduled task events here (tab-delimited).
        #[arg(long)]
        timeline: Option<PathBuf>,
    },
    /// Evaluate configuration overrides against the base spec.
    Whatif {
        #[command(flatten)]
        common: CommonArgs,
        /// JSON array of partial hadoop sections to apply one at a time.
        #[arg(long)]
        overrides: PathBuf,
    },
    /// Grid-search job parameters for the cheapest configuration.
    Optimize {
        #[command(flatten)]
        common: CommonArgs,
        /// JSON object mapping parameter names to candidate arrays.
        #[arg(long)]
        space: PathBuf,
        /// Also write the full result table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Spec {
        path: PathBuf,
        #[source]
        source: JobSpecError,
    },
    #[error("{path}: invalid overrides file: {source}")]
    Overrides {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Space {
        path: PathBuf,
        #[source]
        source: SpaceError,
    },
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("every override failed validation")]
    AllRowsFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 2,
            _ => 1,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_spec(path: &Path) -> Result<JobSpec, CliError> {
    let text = read_file(path)?;
    parse_job_spec(&text).map_err(|source| CliError::Spec {
        path: path.to_path_buf(),
        source,
    })
}

struct LoadedSpec {
    spec: JobSpec,
    spec_path: String,
}

impl LoadedSpec {
    fn unit(&self) -> &str {
        self.spec.unit.as_deref().unwrap_or("cost units")
    }

    fn meta(&self) -> ReportMeta<'_> {
        ReportMeta {
            spec_path: &self.spec_path,
            unit: self.unit(),
        }
    }
}

fn load(common: &CommonArgs) -> Result<LoadedSpec, CliError> {
    Ok(LoadedSpec {
        spec: load_spec(&common.spec)?,
        spec_path: common.spec.display().to_string(),
    })
}

fn run_estimate(
    common: &CommonArgs,
    method: MethodArg,
    timeline_path: Option<&Path>,
) -> Result<(), CliError> {
    let loaded = load(common)?;
    let inputs = loaded
        .spec
        .effective_inputs()
        .map_err(|source| CliError::Spec {
            path: common.spec.clone(),
            source,
        })?;

    let (estimate, timeline): (JobEstimate, Option<SimTimeline>) = match method {
        MethodArg::Analytic => (analytic_job_cost(&inputs)?, None),
        MethodArg::Simulated => {
            let (estimate, timeline) = simulate_job(&inputs)?;
            (estimate, Some(timeline))
        }
    };

    if let (Some(path), Some(timeline)) = (timeline_path, timeline.as_ref()) {
        let mut buffer = Vec::new();
        timeline
            .write_delimited(&mut buffer)
            .expect("writing to memory cannot fail");
        write_file(path, &String::from_utf8(buffer).expect("ascii output"))?;
    }

    let results = serde_json::to_value(EstimateResults {
        version: TOOL_VERSION,
        spec_path: &loaded.spec_path,
        estimate: &estimate,
        timeline: timeline.as_ref().map(TimelineSummary::from),
    })
    .expect("estimate serialization cannot fail");
    // the raw profile/costs go back out so the report re-parses as a spec
    let config = loaded.spec.resolved_config().expect("already resolved");
    let machine = machine_document(
        &config,
        &loaded.spec.profile,
        &loaded.spec.costs,
        loaded.spec.unit.as_deref(),
        results,
    );

    match common.format {
        FormatArg::Table => {
            print!(
                "{}",
                render_estimate(&estimate, timeline.as_ref(), &loaded.meta())
            );
        }
        FormatArg::Machine => println!("{machine}"),
    }
    if let Some(out) = &common.out {
        write_file(out, &machine)?;
    }
    Ok(())
}

fn run_whatif(common: &CommonArgs, overrides_path: &Path) -> Result<(), CliError> {
    let loaded = load(common)?;
    let config = loaded
        .spec
        .resolved_config()
        .map_err(|source| CliError::Spec {
            path: common.spec.clone(),
            source,
        })?;
    let overrides_text = read_file(overrides_path)?;
    let overrides: Vec<PartialHadoopConfig> =
        serde_json::from_str(&overrides_text).map_err(|source| CliError::Overrides {
            path: overrides_path.to_path_buf(),
            source,
        })?;

    let rows = whatif(
        &config,
        &loaded.spec.profile,
        &loaded.spec.costs,
        &overrides,
    );

    let row_docs: Vec<WhatIfRowDoc<'_>> = rows.iter().map(WhatIfRowDoc::from).collect();
    let results = serde_json::json!({
        "version": TOOL_VERSION,
        "spec_path": loaded.spec_path,
        "rows": row_docs,
    });
    let machine = machine_document(
        &config,
        &loaded.spec.profile,
        &loaded.spec.costs,
        loaded.spec.unit.as_deref(),
        results,
    );

    match common.format {
        FormatArg::Table => print!("{}", render_whatif(&rows, &loaded.meta())),
        FormatArg::Machine => println!("{machine}"),
    }
    if let Some(out) = &common.out {
        write_file(out, &machine)?;
    }

    for row in &rows {
        if let Err(error) = &row.outcome {
            eprintln!("row {}: {error}", row.index);
        }
    }
    if !rows.is_empty() && rows.iter().all(|row| row.outcome.is_err()) {
        return Err(CliError::AllRowsFailed);
    }
    Ok(())
}

fn run_optimize(
    common: &CommonArgs,
    space_path: &Path,
    csv_path: Option<&Path>,
) -> Result<(), CliError> {
    let loaded = load(common)?;
    let config = loaded
        .spec
        .resolved_config()
        .map_err(|source| CliError::Spec {
            path: common.spec.clone(),
            source,
        })?;
    let space_text = read_file(space_path)?;
    let space = ParameterSpace::from_json_str(&space_text).map_err(|source| CliError::Space {
        path: space_path.to_path_buf(),
        source,
    })?;

    let result = optimize(
        &config,
        &loaded.spec.profile,
        &loaded.spec.costs,
        &space,
        SearchMethod::Grid,
    )?;

    let results = serde_json::json!({
        "version": TOOL_VERSION,
        "spec_path": loaded.spec_path,
        "search": result,
    });
    let machine = machine_document(
        &config,
        &loaded.spec.profile,
        &loaded.spec.costs,
        loaded.spec.unit.as_deref(),
        results,
    );

    match common.format {
        FormatArg::Table => print!("{}", render_search(&result, &loaded.meta())),
        FormatArg::Machine => println!("{machine}"),
    }
    if let Some(out) = &common.out {
        write_file(out, &machine)?;
    }
    if let Some(csv) = csv_path {
        write_file(csv, &search_table_csv(&result))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Estimate { common, method } => run_estimate(common, *method, None),
        Command::Simulate { common, timeline } => {
            run_estimate(common, MethodArg::Simulated, timeline.as_deref())
        }
        Command::Whatif { common, overrides } => run_whatif(common, overrides),
        Command::Optimize { common, space, csv } => run_optimize(common, space, csv.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}
