//! Small hand-checked instances used throughout the test suites and handy
//! for demos. Both put all their tasks on line 1 and leave the other lines
//! empty, so schedules land in row 1 only and are easy to verify by hand.

use crate::eval::ObjectiveVector;
use crate::model::{EnergyRates, Instance, LineSpec, PrecedenceGraph, Task, TaskId, VehicleModel};

pub const DEMO_RATES: EnergyRates = EnergyRates {
    e1: 20.0,
    e2: 40.0,
    e3: 90.0,
    e4: 55.0,
};

fn line(
    model: VehicleModel,
    times: &[f64],
    flags: &[(TaskId, bool, bool)],
    edges: &[(TaskId, TaskId)],
) -> LineSpec {
    let tasks = times
        .iter()
        .enumerate()
        .map(|(i, &time_s)| {
            let id = i as TaskId + 1;
            let (hazardous, high_value) = flags
                .iter()
                .find(|f| f.0 == id)
                .map(|f| (f.1, f.2))
                .unwrap_or((false, false));
            Task {
                id,
                time_s,
                energy_rate: 1.0,
                hazardous,
                high_value,
            }
        })
        .collect();
    LineSpec {
        vehicle_model: model,
        tasks,
        precedence: PrecedenceGraph::new(times.len(), edges).unwrap(),
    }
}

fn empty_line(model: VehicleModel) -> LineSpec {
    line(model, &[], &[], &[])
}

/// Six tasks on line 1 under takt 650: times 100/200/150/120/180/90, task 5
/// hazardous, task 3 high-value, and precedence
/// 1->2, 1->3, 2->5, 3->4, 3->5, 4->6, 5->6 (exactly five topological
/// orders). Decoding the order 1,2,3,4,5,6 fills two row-1 stations with
/// loads 570 and 270.
pub fn six_task() -> Instance {
    Instance::new(
        [
            line(
                VehicleModel::Fuel,
                &[100.0, 200.0, 150.0, 120.0, 180.0, 90.0],
                &[(5, true, false), (3, false, true)],
                &[(1, 2), (1, 3), (2, 5), (3, 4), (3, 5), (4, 6), (5, 6)],
            ),
            empty_line(VehicleModel::Mixed),
            empty_line(VehicleModel::PureElectric),
        ],
        650.0,
        DEMO_RATES,
    )
    .unwrap()
}

/// Four tasks on line 1 in a diamond: 1 -> {2, 3} -> 4. Tasks 2 and 3 share
/// their immediate predecessors and successors, so the pair {2, 3} is the
/// one interchangeable cell.
pub fn diamond_pair() -> Instance {
    Instance::new(
        [
            line(
                VehicleModel::Fuel,
                &[100.0, 100.0, 100.0, 100.0],
                &[],
                &[(1, 2), (1, 3), (2, 4), (3, 4)],
            ),
            empty_line(VehicleModel::Mixed),
            empty_line(VehicleModel::PureElectric),
        ],
        650.0,
        DEMO_RATES,
    )
    .unwrap()
}

/// Eight mutually non-dominated objective vectors at the scale of a large
/// instance (34-41 stations), used as structural test data for sorting,
/// filtering, and reporting code.
pub fn sample_front() -> Vec<ObjectiveVector> {
    [
        (40, 27.0, 3241.0),
        (39, 25.0, 3297.0),
        (36, 27.0, 3460.0),
        (37, 26.0, 3409.0),
        (38, 26.0, 3341.0),
        (41, 24.0, 3204.0),
        (34, 29.0, 3641.0),
        (35, 28.0, 3553.0),
    ]
    .map(
        |(stations, worker_energy, electrical_energy)| ObjectiveVector {
            stations,
            worker_energy,
            electrical_energy,
        },
    )
    .to_vec()
}
