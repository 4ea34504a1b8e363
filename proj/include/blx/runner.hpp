#ifndef BLX_RUNNER_HPP
#define BLX_RUNNER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "blx/config.hpp"

// Batch experiment runner: maps stable experiment ids to library routines,
// writes one CSV per experiment (uniform schema, '#' manifest lines with the
// config hash) plus a run manifest. Reruns with the same config produce
// byte-identical CSVs; wall-clock timings live only in the manifest.

namespace blx {

struct ExperimentInfo {
    std::string id;
    std::string claim;  // what the experiment measures
};

const std::vector<ExperimentInfo>& experiment_list();

// Uniform CSV row; wall_ms is written as 0 in CSV for determinism.
struct ResultRow {
    std::string experiment;
    double d1 = 0, d2 = 0, p = 0, q = 0, R = 0;
    int n_nodes = 0;
    double sup_ratio = 0;
    std::string verdict;
    double fit_slope = 0, fit_r2 = 0;
    std::uint64_t seed = 0;
};

Config default_config();
std::vector<std::string> config_schema();

// defaults <- file (optional) <- environment (BLX_*) <- validated.
Config load_config(const std::string& path);

struct RunSummary {
    int errors = 0;
    std::vector<std::string> files;
};

// Runs the experiments selected by run.experiments ("all" or a comma list)
// into run.out. Engineering failures count as errors (nonzero exit);
// mathematical verdicts do not.
RunSummary run_experiments(const Config& cfg, std::ostream& log);

// Single-experiment entry point used by the CLI subcommands and tests.
std::vector<ResultRow> run_one_experiment(const std::string& id,
                                          const Config& cfg);

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows,
                    std::uint64_t config_hash, const std::string& id);

}  // namespace blx

#endif
