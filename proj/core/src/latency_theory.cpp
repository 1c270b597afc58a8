#include "rrambb/latency_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rrambb/channel.hpp"
#include "rrambb/linmap.hpp"

namespace rrambb::latency {

namespace {

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// log(Phi(-b)) for b >= 0, stable far into the tail.
double log_upper_tail(double b) {
  if (b < 30.0) return std::log(0.5 * std::erfc(b / std::numbers::sqrt2));
  const double b2 = b * b;
  const double series = 1.0 - 1.0 / b2 + 3.0 / (b2 * b2) - 15.0 / (b2 * b2 * b2);
  return -0.5 * b2 - std::log(b * std::sqrt(2.0 * std::numbers::pi)) + std::log(series);
}

struct Sample {
  double mean;
  double ci95;
  bool defined;
};

Sample summarize(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, std::nan(""), false};
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, 1.96 * std::sqrt(ss / (n - 1) / n), true};
}

}  // namespace

WriteEndState wwov_end_state(double delta_g, const DeviceModel& model) {
  if (!(delta_g >= 0) || !std::isfinite(delta_g)) {
    throw InputError("wwov_end_state: delta_g must be finite and >= 0");
  }
  const DriftParams d = drift_params(model);
  const double t = delta_g / d.mu;
  return {t, model.g_min + delta_g, d.sigma * d.sigma * t};
}

double sample_fpt(double delta_g, const DeviceModel& model, Rng& rng) {
  if (!(delta_g > 0) || !std::isfinite(delta_g)) throw InputError("sample_fpt: delta_g must be > 0");
  const DriftParams d = drift_params(model);
  const double m = delta_g / d.mu;
  const double nu = rng.normal();
  const double u = rng.uniform();
  if (d.sigma == 0) return m;
  const double lambda = (delta_g / d.sigma) * (delta_g / d.sigma);
  const double y = nu * nu;
  const double x = m * (1.0 + (m * y - std::sqrt(4.0 * m * lambda * y + m * m * y * y)) / (2.0 * lambda));
  return u <= m / (m + x) ? x : m * m / x;
}

double inverse_gaussian_pdf(double t, double mean, double shape) {
  if (t <= 0) return 0.0;
  const double z = t - mean;
  return std::sqrt(shape / (2.0 * std::numbers::pi * t * t * t)) *
         std::exp(-shape * z * z / (2.0 * mean * mean * t));
}

double inverse_gaussian_cdf(double t, double mean, double shape) {
  if (t <= 0) return 0.0;
  const double s = std::sqrt(shape / t);
  const double first = std_normal_cdf(s * (t / mean - 1.0));
  const double log_second = 2.0 * shape / mean + log_upper_tail(s * (t / mean + 1.0));
  return std::min(1.0, first + std::exp(log_second));
}

LatencyBound latency_bound(Scheme scheme, int n_t, int n_r, const DeviceModel& model) {
  if (n_t < 2) throw ConfigError("n_t", "latency bounds require n_t >= 2");
  if (n_r < 1) throw ConfigError("n_r", "must be >= 1");
  const DriftParams d = drift_params(model);
  const double g = model.range();
  const double scale = 2.0 * std::numbers::sqrt2 * g / (3.0 * d.mu);

  LatencyBound b{scheme, n_t, n_r, 0.0, 0, model.g_min > 0};
  if (scheme == Scheme::without_verification) {
    const double l = std::log(static_cast<double>(n_t));
    b.bound = scale * n_r * (std::sqrt(l) + 1.0 / (std::sqrt(std::numbers::pi) * l));
    return b;
  }
  const double l4 = std::log(4.0 * n_t);
  const double first = scale * std::sqrt(l4);
  double second = std::numeric_limits<double>::infinity();
  if (d.sigma > 0) {
    second = 2.0 * d.sigma * d.sigma / (d.mu * d.mu) * l4 + g * g / (9.0 * d.sigma * d.sigma);
  }
  b.branch = second < first ? 1 : 0;
  b.bound = 2.0 * n_r * std::min(first, second);
  return b;
}

double branch_switch_log(const DeviceModel& model) {
  const DriftParams d = drift_params(model);
  const double ratio = model.range() / (3.0 * d.sigma);
  return d.mu * d.mu / (2.0 * d.sigma * d.sigma) * ratio * ratio;
}

const char* to_string(McMode mode) { return mode == McMode::analytic ? "analytic" : "discrete"; }

McMode mc_mode_from_string(const std::string& s) {
  if (s == "analytic") return McMode::analytic;
  if (s == "discrete") return McMode::discrete;
  throw ConfigError("mode", "expected analytic or discrete, got '" + s + "'");
}

McLatency mc_write_latency(int n_t, int n_r, const DeviceModel& model, Scheme scheme, McMode mode,
                           int trials, Rng& rng) {
  if (n_t < 1 || n_r < 1) throw ConfigError("n", "antenna counts must be positive");
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  model.validate();

  std::vector<double> write_times;
  std::vector<double> totals;
  write_times.reserve(trials);
  totals.reserve(trials);

  if (mode == McMode::analytic) {
    const DriftParams d = drift_params(model);
    const double spread = model.range() / 3.0;
    std::vector<double> dg(2 * n_t);
    for (int trial = 0; trial < trials; ++trial) {
      double total = 0;
      for (int i = 0; i < n_r; ++i) {
        for (double& x : dg) x = std::abs(spread * rng.normal());
        // Rows i and i + n_r of the real-mapped matrix hold the same magnitudes.
        for (int half = 0; half < 2; ++half) {
          double row = 0;
          for (double x : dg) {
            double t = 0;
            if (x > 0) t = scheme == Scheme::without_verification ? x / d.mu : sample_fpt(x, model, rng);
            row = std::max(row, t);
          }
          total += row;
        }
      }
      write_times.push_back(total);
      totals.push_back(total);
    }
  } else {
    ProgramOptions opt;
    opt.scheme = scheme;
    for (int trial = 0; trial < trials; ++trial) {
      const ComplexMatrix h = channel::sample_matrix(n_t, n_r, rng);
      const ConductanceTargets targets =
          encode_targets(linmap::real_map_matrix(h), model, channel::kRayleighComponentStd);
      CrossbarArray array(2 * n_r, 2 * n_t, model);
      const ProgramReport rep = program(array, targets, opt, rng);
      write_times.push_back(rep.write_latency);
      totals.push_back(rep.latency);
    }
  }

  const Sample w = summarize(write_times);
  const Sample t = summarize(totals);
  McLatency out;
  out.trials = trials;
  out.mean = w.mean;
  out.ci95 = w.ci95;
  out.ci_defined = w.defined;
  out.total_mean = t.mean;
  out.total_ci95 = t.ci95;
  return out;
}

double sample_discrete_fpt(double delta_g, const DeviceModel& model, Rng& rng, long max_pulses) {
  if (!(delta_g > 0)) throw InputError("sample_discrete_fpt: delta_g must be > 0");
  ProgramOptions opt;
  opt.scheme = Scheme::with_verification;
  opt.tolerance = model.step() * 1e-6;
  opt.max_pulses = max_pulses > 0 ? max_pulses : 50L * model.n_states;
  opt.stop_on_crossing = true;
  CellState cell{model.g_min, Defect::healthy};
  const CellTuneResult r = tune_cell(cell, model.g_min + delta_g, opt, model, rng);
  if (r.first_crossing < 0) return -1.0;
  return static_cast<double>(r.first_crossing) * model.pulse_width;
}

}  // namespace rrambb::latency
