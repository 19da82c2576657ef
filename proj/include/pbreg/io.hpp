#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "pbreg/dataset.hpp"
#include "pbreg/simulate.hpp"

namespace pbreg {

// Shortest round-trip decimal representation (used everywhere numbers are written,
// so identical values always produce identical bytes).
std::string format_double(double value);

// Dataset CSV: header "x,S,B", one row per bin. Exposures are not stored in the CSV;
// callers resolve them from flags or the JSON sidecar below. File-access problems
// raise io_error; malformed content raises validation_error with a line number.
PairedDataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const PairedDataset& dataset);

// Exposure sidecar "<stem>.json" next to the CSV: {"t_S": …, "t_B": …}.
// read returns false when no sidecar exists.
bool read_exposure_sidecar(const std::string& csv_path, double& t_S, double& t_B);
void write_exposure_sidecar(const std::string& csv_path, double t_S, double t_B);

// Grid configuration from a .toml (flat key = value subset) or .json file.
// Recognized keys: theta_values, beta_values, n_values, realizations, df_replicates,
// t_s, t_b, master_seed, methods, jobs. Unknown keys and malformed lines raise
// validation_error naming the line (TOML) or key (JSON).
GridConfig read_grid_config(const std::string& path);

// Grid summary CSV: one row per (cell, method).
void write_grid_csv(std::ostream& out, const GridResult& result);
void write_grid_csv(const std::string& path, const GridResult& result);

// eCDF as two-column CSV (value,probability), and as a standalone SVG staircase.
void write_ecdf_csv(const std::string& path, const EcdfSeries& series);
void write_ecdf_svg(const std::string& path, const EcdfSeries& series);

// Full per-realization samples of one cell, as JSON. dataset_files[r] names the CSV
// holding realization r's dataset (written separately).
void write_samples_json(const std::string& path, const SimCellSummary& summary,
                        const CellSamples& samples,
                        const std::vector<std::string>& dataset_files);

}  // namespace pbreg
