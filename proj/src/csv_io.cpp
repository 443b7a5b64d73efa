#include "bvsmc/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "bvsmc/errors.hpp"

namespace bvsmc {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
    std::size_t i = 0;
    while (i < f.size() && f[i] == ' ') ++i;
    f.erase(0, i);
  }
  return fields;
}

double parse_double(const std::string& s, long line, long column) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError("cannot parse numeric value '" + s + "'", line, column);
  if (!std::isfinite(v)) throw ParseError("non-finite value", line, column);
  return v;
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file: '" + path + "'");
  const std::vector<std::string> header = split_line(line);

  int y_col = -1;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == options.response)
      y_col = static_cast<int>(c);
    else
      names.push_back(header[c]);
  }
  if (y_col < 0)
    throw ParseError("missing response column '" + options.response + "' in header");
  const int p = static_cast<int>(header.size()) - 1;
  if (p < 1) throw ParseError("no covariate columns in header");

  std::vector<double> y_vals;
  std::vector<double> x_vals;  // row-major
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (static_cast<int>(fields.size()) != p + 1) {
      std::ostringstream msg;
      msg << "row has " << fields.size() << " fields, header declares " << p + 1;
      throw ParseError(msg.str(), line_no);
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double v = parse_double(fields[c], line_no, static_cast<long>(c) + 1);
      if (static_cast<int>(c) == y_col)
        y_vals.push_back(v);
      else
        x_vals.push_back(v);
    }
  }
  const int n = static_cast<int>(y_vals.size());
  if (n < 2) throw ParseError("need at least two data rows");

  Eigen::VectorXd y(n);
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i) {
    y[i] = y_vals[i];
    for (int j = 0; j < p; ++j) x(i, j) = x_vals[static_cast<std::size_t>(i) * p + j];
  }
  Dataset data(std::move(y), std::move(x), std::move(names));
  return options.standardize ? data.standardized() : data;
}

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::string& response_name) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << response_name;
  for (const auto& name : data.names()) out << ',' << name;
  out << '\n';
  for (int i = 0; i < data.n(); ++i) {
    out << format_double(data.y()[i]);
    for (int j = 0; j < data.p(); ++j) out << ',' << format_double(data.x()(i, j));
    out << '\n';
  }
}

void write_truth_json(const std::string& path, const SynthSpec& spec,
                      const SyntheticData& truth) {
  nlohmann::ordered_json j;
  j["n"] = spec.n;
  j["p"] = spec.p;
  j["rho"] = spec.rho;
  j["snr"] = spec.snr;
  j["sigma2"] = spec.sigma2;
  j["seed"] = spec.seed;
  j["active"] = nlohmann::json::array();
  for (int a : truth.active) j["active"].push_back(a + 1);  // 1-based
  j["beta_star"] = nlohmann::json::array();
  for (int i = 0; i < truth.beta_star.size(); ++i)
    if (truth.beta_star[i] != 0.0) j["beta_star"].push_back(truth.beta_star[i]);
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void write_pips_csv(const std::string& path, const std::vector<std::string>& names,
                    const Eigen::VectorXd& pip_emp, const Eigen::VectorXd* pip_rb) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "variable_index,variable_name,pip_empirical,pip_rb\n";
  for (int j = 0; j < pip_emp.size(); ++j) {
    out << (j + 1) << ',' << names[j] << ',' << format_double(pip_emp[j]) << ',';
    out << (pip_rb != nullptr ? format_double((*pip_rb)[j]) : "nan");
    out << '\n';
  }
}

void write_trace_csv(const std::string& path, const RunOutput& out_data) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "iteration,chain,accepted,acceptance_prob,model_size,n_flips,log_posterior\n";
  for (std::int64_t it = 0; it < out_data.n_iters; ++it) {
    for (int c = 0; c < out_data.n_chains; ++c) {
      const std::size_t idx = static_cast<std::size_t>(it) * out_data.n_chains + c;
      out << (it + 1) << ',' << c << ',' << int(out_data.accepted[idx]) << ','
          << format_double(out_data.accept_series[idx]) << ',' << out_data.model_size[idx]
          << ',' << out_data.n_proposed[idx] << ','
          << format_double(out_data.log_post[idx]) << '\n';
    }
  }
}

nlohmann::ordered_json config_to_json(const RunConfig& config, const PriorSpec& prior,
                                      int p) {
  nlohmann::ordered_json j;
  j["algorithm"] = algorithm_name(config.algorithm);
  j["chains"] = config.n_chains;
  j["burn_in"] = config.burn_in;
  j["iters"] = config.n_iters;
  j["thin"] = config.thin;
  j["seed"] = config.seed;
  j["tau"] = config.tau;
  j["tau_l"] = config.tau_l;
  j["tau_u"] = config.tau_u;
  j["kappa"] = config.kappa;
  j["eps"] = config.resolved_eps(p);
  j["phi_c"] = config.schedule.c;
  j["phi_lambda"] = config.schedule.lambda;
  j["rb_burnin_only"] = config.rb_burnin_only;
  j["adapt_burnin_only"] = config.adapt_burnin_only;
  j["rank_guard"] = config.rank_guard;
  j["init_from_prior"] = config.init_from_prior;
  if (config.pt) {
    j["pt_temps"] = config.pt->n_temps;
    j["pt_swap_target"] = config.pt->swap_target;
    j["pt_share_eta"] = config.pt->share_eta;
  }
  if (prior.g_mode == PriorSpec::GMode::kFixed) {
    j["g"] = prior.g;
  } else {
    j["g_prior"] = "half-cauchy";
    j["g_scale"] = prior.g_scale;
    j["g_step"] = config.g_step;
  }
  if (prior.h_mode == PriorSpec::HMode::kFixed) {
    j["h"] = prior.h;
  } else {
    j["h_beta_a"] = prior.beta_a;
    j["h_beta_b"] = prior.beta_b;
  }
  return j;
}

nlohmann::ordered_json summary_to_json(const RunOutput& output, const RunSummary& summary,
                                       const nlohmann::ordered_json& config_echo,
                                       bool include_timings) {
  nlohmann::ordered_json j;
  j["version"] = output.version;
  j["config"] = config_echo;
  j["n_steps"] = summary.n_steps;
  j["acceptance_rate"] = summary.acceptance_rate;
  j["accepted_fraction"] = summary.accepted_fraction;
  j["mutation_rate"] = summary.mutation_rate;
  j["mean_model_size"] = summary.mean_model_size;
  if (summary.flips_defined)
    j["mean_flips_per_accepted"] = summary.mean_flips_per_accepted;
  else
    j["mean_flips_per_accepted"] = nullptr;
  j["numeric_rejects"] = summary.numeric_rejects;
  j["rb_warnings"] = summary.rb_warnings;
  j["rb_rows"] = output.rb_row_count;
  j["max_rebuild_drift"] = output.max_rebuild_drift;
  if (output.final_zeta > 0.0) j["final_zeta"] = output.final_zeta;
  if (!output.final_temps.empty()) j["final_temps"] = output.final_temps;
  if (output.final_g > 0.0) j["final_g"] = output.final_g;
  if (include_timings) {
    j["timings"] = {{"burn_seconds", summary.burn_seconds},
                    {"main_seconds", summary.main_seconds},
                    {"total_seconds", summary.total_seconds}};
  }
  return j;
}

void write_summary_json(const std::string& path, const nlohmann::ordered_json& summary) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << summary.dump(2) << '\n';
}

}  // namespace bvsmc
