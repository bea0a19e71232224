//! One function per subcommand. Each returns the table plus whether the
//! result was usable, which `main` maps onto the exit code.

use cvqt_core::format::sig12;
use cvqt_core::freespace::{fidelity_sweep, SweepRow};
use cvqt_core::microwave::{calibrate_noise, end_to_end_run, CalibrationReport, MicrowaveSetup, RunReport, TauRule};
use cvqt_core::protocol::{simulate_shots, ShotStatistics};

use crate::config::{Pipeline, RunConfig};
use crate::error::Result;
use crate::report::ReportTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Computed, but infeasible or classical everywhere.
    Infeasible,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Infeasible => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: ReportTable,
    pub status: Status,
}

/// Printed values of the reference circuit table, in the order the
/// command emits them.
pub const TABLE1_PRINTED: [(&str, &str, f64); 15] = [
    ("fridge", "tau", 0.427),
    ("fridge", "lambda", 1.74),
    ("fridge", "beta_db", -2.40),
    ("fridge", "zeta_x_adc", 0.758),
    ("fridge", "zeta_x_bob", 2.444),
    ("fridge", "zeta_p_adc", 0.758),
    ("fridge", "zeta_p_bob", 0.174),
    ("free_space", "tau", 0.095),
    ("free_space", "lambda", 1.10),
    ("free_space", "beta_db", -0.41),
    ("free_space", "zeta_x_adc", 0.954),
    ("free_space", "zeta_x_bob", 1.152),
    ("free_space", "zeta_p_adc", 0.954),
    ("free_space", "zeta_p_bob", 0.082),
    // the free-space τ printed in the table equals εη, not εη/2
    ("free_space_half", "tau", 0.095),
];

fn table1_values(setup: &MicrowaveSetup, r: f64) -> Result<[f64; 7]> {
    let s = setup.coupler()?;
    let [adc, bob_x, bob_p] = setup.noise_coefficients(r)?;
    Ok([s.tau, s.lambda, s.beta_db, adc, bob_x, adc, bob_p])
}

/// Recomputes the derived rows of the reference table from the budget
/// constants with squeezing `r` from the configuration.
pub fn cmd_table1(cfg: &RunConfig) -> Result<Outcome> {
    let r = cfg.real("r");
    let fridge = table1_values(&MicrowaveSetup::fridge(), r)?;
    let free = table1_values(&MicrowaveSetup::free_space(), r)?;
    let half = MicrowaveSetup {
        tau_rule: TauRule::Half,
        ..MicrowaveSetup::free_space()
    };
    let computed: Vec<f64> = fridge
        .iter()
        .chain(free.iter())
        .copied()
        .chain([half.coupler()?.tau])
        .collect();

    let mut table = ReportTable::new(&["setting", "quantity", "printed", "computed", "residual"], cfg);
    for ((setting, quantity, printed), value) in TABLE1_PRINTED.iter().zip(computed) {
        table.push(vec![
            setting.to_string(),
            quantity.to_string(),
            sig12(*printed),
            sig12(value),
            sig12(value - printed),
        ])?;
    }
    Ok(Outcome {
        table,
        status: Status::Ok,
    })
}

/// Free-space fidelity over `y_grid × baths × r_grid`.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let rows = fidelity_sweep(
        &cfg.grid("y_grid"),
        &cfg.grid("r_grid"),
        &cfg.baths()?,
        cfg.orientation(),
    );
    let mut table = ReportTable::new(&SweepRow::HEADER, cfg);
    for row in &rows {
        table.push(row.csv_row())?;
    }
    let status = if rows.iter().any(SweepRow::is_quantum) {
        Status::Ok
    } else {
        Status::Infeasible
    };
    Ok(Outcome { table, status })
}

/// One end-to-end run, either through the microwave circuit or the ideal
/// double-homodyne protocol.
pub fn cmd_run(cfg: &RunConfig) -> Result<Outcome> {
    let input = cfg.input()?;
    let resource = cfg.resource()?;
    match cfg.pipeline() {
        Pipeline::Microwave => {
            let setup = cfg.setup()?;
            let report = end_to_end_run(&input, &resource, &setup, cfg.mode(), cfg.seed(), cfg.shots())?;
            let mut table = ReportTable::new(&RunReport::csv_header(), cfg);
            table.push(report.csv_row())?;
            let status = if report.settings.feasible {
                Status::Ok
            } else {
                Status::Infeasible
            };
            Ok(Outcome { table, status })
        }
        Pipeline::Ideal => {
            let stats = simulate_shots(&input, &resource, cfg.shots(), cfg.seed())?;
            let mut table = ReportTable::new(&ShotStatistics::csv_header(), cfg);
            table.push(stats.csv_row(&input, &resource))?;
            Ok(Outcome {
                table,
                status: Status::Ok,
            })
        }
    }
}

/// Zero-input noise calibration of the microwave circuit.
pub fn cmd_calibrate(cfg: &RunConfig) -> Result<Outcome> {
    let setup = cfg.setup()?;
    let report = calibrate_noise(
        &setup,
        &cfg.resource()?,
        cfg.flag("zero_resource"),
        cfg.shots(),
        cfg.seed(),
    )?;
    let mut table = ReportTable::new(&CalibrationReport::csv_header(), cfg);
    for row in report.csv_rows() {
        table.push(row)?;
    }
    let status = if report.settings.feasible {
        Status::Ok
    } else {
        Status::Infeasible
    };
    Ok(Outcome { table, status })
}
