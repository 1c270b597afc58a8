#include "rrambb/device.hpp"

#include <algorithm>
#include <cmath>

#include "rrambb/types.hpp"

namespace rrambb {

namespace {

constexpr double kMicro = 1e-6;

// Read noise of the Ta/TaOx/Pt cell as a fraction of its range; the other
// devices are not characterized for read noise, so they inherit this ratio.
constexpr double kReadNoiseFraction = 1.0 / (230.99 - 79.93);

DeviceModel make(std::string name, double g_min_us, double g_max_us, int states, double width,
                 double gamma_p, double gamma_d, double v_set, double v_reset, double v_full_reset,
                 double sigma_read) {
  DeviceModel m;
  m.name = std::move(name);
  m.g_min = g_min_us * kMicro;
  m.g_max = g_max_us * kMicro;
  m.n_states = states;
  m.pulse_width = width;
  m.gamma_pot = gamma_p;
  m.gamma_dep = gamma_d;
  m.v_set = v_set;
  m.v_reset = v_reset;
  m.v_read = 0.15;
  m.v_full_reset = v_full_reset;
  m.sigma_read = sigma_read < 0 ? kReadNoiseFraction * m.range() : sigma_read;
  return m;
}

}  // namespace

void DeviceModel::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(g_min) || g_min < 0) throw ConfigError("g_min", "must be finite and >= 0");
  if (!finite(g_max) || g_max <= g_min) throw ConfigError("g_max", "must exceed g_min");
  if (n_states < 2) throw ConfigError("n_states", "must be >= 2");
  if (!finite(pulse_width) || pulse_width <= 0) throw ConfigError("pulse_width", "must be > 0");
  if (!(gamma_pot >= 0 && gamma_pot < 1)) throw ConfigError("gamma_pot", "must lie in [0, 1)");
  if (!(gamma_dep >= 0 && gamma_dep < 1)) throw ConfigError("gamma_dep", "must lie in [0, 1)");
  if (!finite(sigma_read) || sigma_read < 0) throw ConfigError("sigma_read", "must be >= 0");
  for (auto [key, v] : {std::pair{"v_set", v_set}, {"v_reset", v_reset}, {"v_read", v_read},
                        {"v_full_reset", v_full_reset}}) {
    if (!finite(v)) throw ConfigError(key, "must be finite");
  }
}

DeviceModel preset(std::string_view name) {
  if (name == "ta_taox_pt")
    return make("ta_taox_pt", 79.93, 230.99, 256, 10e-9, 0.0441, 0.0544, 0.65, -0.575, -1.5,
                1.0 * kMicro);
  if (name == "fefet")
    return make("fefet", 0.04, 1.79, 32, 75e-9, 0.005, 0.005, 3.65, -2.95, -2.95, -1);
  if (name == "ftj_10ns")
    return make("ftj_10ns", 1.0, 80.0, 256, 10e-9, 0.0206, 0.0206, 1.675, -3.5, -3.5, -1);
  if (name == "ftj_630ps")
    return make("ftj_630ps", 1.0, 27.5, 150, 630e-12, 0.0365, 0.0365, 4.0, -5.0, -5.0, -1);
  throw ConfigError("device", "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"ta_taox_pt", "fefet", "ftj_10ns", "ftj_630ps"}; }

DeviceModel noiseless(DeviceModel model) {
  model.gamma_pot = 0;
  model.gamma_dep = 0;
  model.sigma_read = 0;
  return model;
}

DriftParams drift_params(const DeviceModel& model) {
  const double sigma_c = model.sigma_c_pot();
  return {model.range() / (model.n_states * model.pulse_width),
          sigma_c / std::sqrt(model.pulse_width), sigma_c};
}

double effective_conductance(const CellState& state, const DeviceModel& model) {
  switch (state.defect) {
    case Defect::stuck_on:
      return model.g_max;
    case Defect::stuck_off:
      return model.g_min;
    case Defect::healthy:
      break;
  }
  return state.conductance;
}

CellState apply_write_pulse(CellState state, Polarity polarity, const DeviceModel& model, Rng& rng) {
  if (state.defect != Defect::healthy) return state;
  switch (polarity) {
    case Polarity::full_reset:
      state.conductance = model.g_min;
      return state;
    case Polarity::potentiate:
      state.conductance += model.step() + model.sigma_c_pot() * rng.normal();
      break;
    case Polarity::depress:
      state.conductance -= model.step() + model.sigma_c_dep() * rng.normal();
      break;
  }
  state.conductance = std::clamp(state.conductance, model.g_min, model.g_max);
  return state;
}

double read_conductance(const CellState& state, const DeviceModel& model, Rng& rng) {
  const double g = effective_conductance(state, model);
  if (model.sigma_read == 0.0) return g;
  return g + model.sigma_read * rng.normal();
}

}  // namespace rrambb
