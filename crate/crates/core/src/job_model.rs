//! Job-level cost aggregation.
//!
//! Two roll-ups are offered. The analytic path divides the per-task costs
//! by the slot capacity of the cluster (fractional waves, exactly as the
//! per-task models compose). The simulator schedules the actual task count
//! in FIFO waves over the map and reduce slot pools, releases reducers at
//! the slowstart point, and reports the makespan in cost units; per-task
//! cost sums are identical to the analytic path, only the makespan
//! accounting differs (integral waves).

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::map_model::{map_task_cost, MapTaskEstimate};
use crate::network_model::{network_cost, NetworkEstimate};
use crate::params::EffectiveInputs;
use crate::reduce_model::{reduce_task_cost, ReduceTaskEstimate};

/// How a [`JobEstimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateMethod {
    Analytic,
    Simulated,
}

impl std::fmt::Display for EstimateMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EstimateMethod::Analytic => f.write_str("analytic"),
            EstimateMethod::Simulated => f.write_str("simulated"),
        }
    }
}

/// Job-level cost estimate: per-task models plus slot-normalized totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobEstimate {
    pub method: EstimateMethod,
    pub map_task: MapTaskEstimate,
    /// Absent for map-only jobs.
    pub reduce_task: Option<ReduceTaskEstimate>,
    pub network: NetworkEstimate,
    pub io_all_maps: f64,
    pub cpu_all_maps: f64,
    pub io_all_reducers: f64,
    pub cpu_all_reducers: f64,
    pub io_job: f64,
    pub cpu_job: f64,
    pub net_job: f64,
    pub cost_job: f64,
    /// Fractional for the analytic method, integral for the simulator.
    pub map_waves: f64,
    pub reduce_waves: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Map,
    Reduce,
}

impl std::fmt::Display for TaskKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TaskKind::Map => f.write_str("map"),
            TaskKind::Reduce => f.write_str("reduce"),
        }
    }
}

/// One scheduled task in the simulated timeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEvent {
    pub kind: TaskKind,
    pub index: u64,
    pub wave: u64,
    pub start_cost: f64,
    pub end_cost: f64,
}

/// Wave-by-wave schedule produced by the task scheduler simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTimeline {
    pub events: Vec<SimEvent>,
    /// Completion cost of the last task plus the network cost.
    pub makespan_cost: f64,
    /// Cost point at which reduce tasks are released (slowstart reached).
    pub reduce_release_cost: f64,
    pub map_waves: u64,
    pub reduce_waves: u64,
}

impl SimTimeline {
    /// Write the events as delimited text, one per line, with a header row.
    pub fn write_delimited<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "kind\tindex\twave\tstart_cost\tend_cost")?;
        for event in &self.events {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                event.kind, event.index, event.wave, event.start_cost, event.end_cost
            )?;
        }
        Ok(())
    }
}

struct TaskCosts {
    map_task: MapTaskEstimate,
    reduce_task: Option<ReduceTaskEstimate>,
    network: NetworkEstimate,
}

fn per_task_costs(inputs: &EffectiveInputs) -> Result<TaskCosts, ModelError> {
    let map_task = map_task_cost(inputs)?;
    let (reduce_task, network) = if inputs.config.num_reducers > 0 {
        let reduce = reduce_task_cost(
            inputs,
            map_task.interm_data_size,
            map_task.interm_data_pairs,
        )?;
        let network = network_cost(inputs, map_task.interm_data_size);
        (Some(reduce), network)
    } else {
        (None, NetworkEstimate::ZERO)
    };
    Ok(TaskCosts {
        map_task,
        reduce_task,
        network,
    })
}

fn aggregate(
    inputs: &EffectiveInputs,
    tasks: TaskCosts,
    method: EstimateMethod,
    map_waves: f64,
    reduce_waves: f64,
) -> JobEstimate {
    let config = &inputs.config;
    let map_slots = (config.num_nodes * config.max_maps_per_node) as f64;
    let reduce_slots = (config.num_nodes * config.max_reduce_per_node) as f64;

    let io_all_maps = config.num_mappers as f64 * tasks.map_task.total.io / map_slots;
    let cpu_all_maps = config.num_mappers as f64 * tasks.map_task.total.cpu / map_slots;
    let (io_all_reducers, cpu_all_reducers) = match &tasks.reduce_task {
        Some(reduce) => (
            config.num_reducers as f64 * reduce.total.io / reduce_slots,
            config.num_reducers as f64 * reduce.total.cpu / reduce_slots,
        ),
        None => (0.0, 0.0),
    };

    let io_job = io_all_maps + io_all_reducers;
    let cpu_job = cpu_all_maps + cpu_all_reducers;
    let net_job = tasks.network.cost.net;

    JobEstimate {
        method,
        map_task: tasks.map_task,
        reduce_task: tasks.reduce_task,
        network: tasks.network,
        io_all_maps,
        cpu_all_maps,
        io_all_reducers,
        cpu_all_reducers,
        io_job,
        cpu_job,
        net_job,
        cost_job: io_job + cpu_job + net_job,
        map_waves,
        reduce_waves,
    }
}

/// Slot-normalized analytic roll-up of the per-task costs.
pub fn analytic_job_cost(inputs: &EffectiveInputs) -> Result<JobEstimate, ModelError> {
    let config = &inputs.config;
    let tasks = per_task_costs(inputs)?;
    let map_waves =
        config.num_mappers as f64 / (config.num_nodes * config.max_maps_per_node) as f64;
    let reduce_waves = if config.num_reducers > 0 {
        config.num_reducers as f64 / (config.num_nodes * config.max_reduce_per_node) as f64
    } else {
        0.0
    };
    Ok(aggregate(
        inputs,
        tasks,
        EstimateMethod::Analytic,
        map_waves,
        reduce_waves,
    ))
}

fn div_ceil(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Schedule the tasks on a virtual cluster and report the makespan.
///
/// Identical map tasks run in FIFO waves over the map slots; reduce tasks
/// are released once the completed-map fraction reaches the slowstart
/// threshold and then run in FIFO waves over the reduce slots. Each task
/// occupies its slot for its io + cpu cost. Deterministic.
pub fn simulate_job(inputs: &EffectiveInputs) -> Result<(JobEstimate, SimTimeline), ModelError> {
    let config = &inputs.config;
    let tasks = per_task_costs(inputs)?;

    let map_slots = config.num_nodes * config.max_maps_per_node;
    let reduce_slots = config.num_nodes * config.max_reduce_per_node;
    let map_cost = tasks.map_task.total.io + tasks.map_task.total.cpu;
    let reduce_cost = tasks
        .reduce_task
        .as_ref()
        .map_or(0.0, |reduce| reduce.total.io + reduce.total.cpu);

    let mut events = Vec::with_capacity((config.num_mappers + config.num_reducers) as usize);
    let map_waves = div_ceil(config.num_mappers, map_slots);
    for index in 0..config.num_mappers {
        let wave = index / map_slots;
        events.push(SimEvent {
            kind: TaskKind::Map,
            index,
            wave,
            start_cost: wave as f64 * map_cost,
            end_cost: (wave + 1) as f64 * map_cost,
        });
    }
    let maps_done_cost = map_waves as f64 * map_cost;

    // Reducers start once ceil(slowstart * maps) map tasks have finished;
    // the small slack absorbs fp noise when the product lands on an integer.
    let mut reduce_release_cost = 0.0;
    let mut reduce_waves = 0;
    let mut last_reduce_end = 0.0;
    if config.num_reducers > 0 {
        let maps_needed = (config.reduce_slowstart * config.num_mappers as f64 - 1e-9)
            .ceil()
            .max(0.0) as u64;
        let release_wave = div_ceil(maps_needed.min(config.num_mappers), map_slots);
        reduce_release_cost = release_wave as f64 * map_cost;
        reduce_waves = div_ceil(config.num_reducers, reduce_slots);
        for index in 0..config.num_reducers {
            let wave = index / reduce_slots;
            events.push(SimEvent {
                kind: TaskKind::Reduce,
                index,
                wave,
                start_cost: reduce_release_cost + wave as f64 * reduce_cost,
                end_cost: reduce_release_cost + (wave + 1) as f64 * reduce_cost,
            });
        }
        last_reduce_end = reduce_release_cost + reduce_waves as f64 * reduce_cost;
    }

    let net_job = tasks.network.cost.net;
    let makespan_cost = maps_done_cost.max(last_reduce_end) + net_job;

    let timeline = SimTimeline {
        events,
        makespan_cost,
        reduce_release_cost,
        map_waves,
        reduce_waves,
    };
    let estimate = aggregate(
        inputs,
        tasks,
        EstimateMethod::Simulated,
        map_waves as f64,
        reduce_waves as f64,
    );
    Ok((estimate, timeline))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{
        assert_rel_close, base_config, identity_profile, scenario_inputs, unit_costs,
    };
    use crate::params::normalize;

    #[test]
    fn analytic_totals_divide_by_slot_capacity() {
        let inputs = scenario_inputs();
        let est = analytic_job_cost(&inputs).unwrap();
        // 400 maps over 10 nodes x 2 slots
        assert_rel_close(est.io_all_maps, 20.0 * est.map_task.total.io, 1e-12);
        assert_rel_close(est.cpu_all_maps, 20.0 * est.map_task.total.cpu, 1e-12);
        let reduce = est.reduce_task.as_ref().unwrap();
        assert_rel_close(est.io_all_reducers, 2.0 * reduce.total.io, 1e-12);
        assert_eq!(est.map_waves, 20.0);
        assert_eq!(est.reduce_waves, 2.0);
        assert_rel_close(est.cost_job, est.io_job + est.cpu_job + est.net_job, 1e-12);
    }

    #[test]
    fn map_only_job_cost_is_the_map_total() {
        let mut config = base_config();
        config.num_reducers = 0;
        let inputs = normalize(&config, &identity_profile(), &unit_costs());
        let est = analytic_job_cost(&inputs).unwrap();
        assert!(est.reduce_task.is_none());
        assert_eq!(est.io_all_reducers, 0.0);
        assert_eq!(est.net_job, 0.0);
        assert_eq!(est.io_job, est.io_all_maps);
        assert_eq!(est.cpu_job, est.cpu_all_maps);
        assert_rel_close(est.cost_job, est.io_all_maps + est.cpu_all_maps, 1e-12);
    }

    #[test]
    fn doubling_nodes_halves_the_map_term() {
        let mut config = base_config();
        let inputs = normalize(&config, &identity_profile(), &unit_costs());
        let est1 = analytic_job_cost(&inputs).unwrap();
        config.num_nodes = 20;
        let inputs = normalize(&config, &identity_profile(), &unit_costs());
        let est2 = analytic_job_cost(&inputs).unwrap();
        assert_eq!(est2.io_all_maps, est1.io_all_maps / 2.0);
    }

    #[test]
    fn exact_waves_make_the_makespan_a_multiple_of_the_task_cost() {
        let mut config = base_config();
        config.num_reducers = 0;
        config.num_mappers = 60; // 3 exact waves of 20
        let inputs = normalize(&config, &identity_profile(), &unit_costs());
        let (est, timeline) = simulate_job(&inputs).unwrap();
        assert_eq!(timeline.map_waves, 3);
        let per_task = est.map_task.total.io + est.map_task.total.cpu;
        assert_rel_close(timeline.makespan_cost, 3.0 * per_task, 1e-12);
    }

    #[test]
    fn scenario_runs_twenty_map_waves_and_two_reduce_waves() {
        let (_, timeline) = simulate_job(&scenario_inputs()).unwrap();
        assert_eq!(timeline.map_waves, 20);
        assert_eq!(timeline.reduce_waves, 2);
        assert_eq!(timeline.events.len(), 440);
        // slowstart 0.05 * 400 = 20 maps: one full wave
        let map_cost = timeline.events[0].end_cost;
        assert_rel_close(timeline.reduce_release_cost, map_cost, 1e-12);
    }

    #[test]
    fn a_straggler_task_adds_a_wave() {
        let mut config = base_config();
        config.num_reducers = 0;
        config.num_mappers = 21;
        let inputs = normalize(&config, &identity_profile(), &unit_costs());
        let (sim_est, timeline) = simulate_job(&inputs).unwrap();
        assert_eq!(timeline.map_waves, 2);
        assert_eq!(sim_est.map_waves, 2.0);
        let analytic = analytic_job_cost(&inputs).unwrap();
        assert_rel_close(analytic.map_waves, 1.05, 1e-12);
    }

    #[test]
    fn simulator_matches_analytic_on_exact_multiples_with_late_reducers() {
        let mut config = base_config();
        config.reduce_slowstart = 1.0; // reducers wait for every map
        let inputs = normalize(&config, &identity_profile(), &unit_costs());
        let analytic = analytic_job_cost(&inputs).unwrap();
        let (_, timeline) = simulate_job(&inputs).unwrap();
        assert_rel_close(timeline.makespan_cost, analytic.cost_job, 1e-9);
    }

    #[test]
    fn simulated_per_task_sums_equal_analytic() {
        let inputs = scenario_inputs();
        let analytic = analytic_job_cost(&inputs).unwrap();
        let (simulated, _) = simulate_job(&inputs).unwrap();
        assert_eq!(simulated.io_job, analytic.io_job);
        assert_eq!(simulated.cpu_job, analytic.cpu_job);
        assert_eq!(simulated.net_job, analytic.net_job);
        assert_eq!(simulated.method, EstimateMethod::Simulated);
    }

    #[test]
    fn simulation_is_deterministic() {
        let inputs = scenario_inputs();
        let (est1, timeline1) = simulate_job(&inputs).unwrap();
        let (est2, timeline2) = simulate_job(&inputs).unwrap();
        assert_eq!(est1, est2);
        assert_eq!(timeline1, timeline2);
    }

    #[test]
    fn events_on_one_slot_never_overlap() {
        let (_, timeline) = simulate_job(&scenario_inputs()).unwrap();
        let slots = 20;
        for slot in 0..slots {
            let mut prev_end = f64::NEG_INFINITY;
            for event in timeline
                .events
                .iter()
                .filter(|e| e.kind == TaskKind::Map && e.index % slots == slot)
            {
                assert!(event.start_cost >= prev_end);
                assert!(event.end_cost >= event.start_cost);
                prev_end = event.end_cost;
            }
        }
        // reducers never start before the slowstart point
        for event in timeline
            .events
            .iter()
            .filter(|e| e.kind == TaskKind::Reduce)
        {
            assert!(event.start_cost >= timeline.reduce_release_cost);
        }
    }

    #[test]
    fn delimited_export_has_one_line_per_event() {
        let (_, timeline) = simulate_job(&scenario_inputs()).unwrap();
        let mut buf = Vec::new();
        timeline.write_delimited(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + timeline.events.len());
        assert_eq!(lines[0], "kind\tindex\twave\tstart_cost\tend_cost");
        assert!(lines[1].starts_with("map\t0\t0\t"));
    }
}
