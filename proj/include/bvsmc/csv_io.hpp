#ifndef BVSMC_CSV_IO_HPP_
#define BVSMC_CSV_IO_HPP_

#include <json.hpp>
#include <string>

#include "bvsmc/dataset.hpp"
#include "bvsmc/diagnostics.hpp"
#include "bvsmc/run.hpp"
#include "bvsmc/synthetic.hpp"

namespace bvsmc {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

struct CsvOptions {
  std::string response = "y";
  bool standardize = false;
};

// First line is a header; the column named by options.response is the
// response, every other column a covariate in file order.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::string& response_name = "y");

void write_truth_json(const std::string& path, const SynthSpec& spec,
                      const SyntheticData& truth);

// pips.csv: variable_index (1-based), variable_name, pip_empirical,
// pip_rb (nan when no Rao-Blackwell rows were recorded).
void write_pips_csv(const std::string& path, const std::vector<std::string>& names,
                    const Eigen::VectorXd& pip_emp, const Eigen::VectorXd* pip_rb);

// trace.csv: iteration, chain, accepted, acceptance_prob, model_size,
// n_flips, log_posterior. One row per post-burn-in step.
void write_trace_csv(const std::string& path, const RunOutput& output);

nlohmann::ordered_json config_to_json(const RunConfig& config, const PriorSpec& prior,
                                      int p);
nlohmann::ordered_json summary_to_json(const RunOutput& output, const RunSummary& summary,
                                       const nlohmann::ordered_json& config_echo,
                                       bool include_timings = true);
void write_summary_json(const std::string& path, const nlohmann::ordered_json& summary);

}  // namespace bvsmc

#endif  // BVSMC_CSV_IO_HPP_
