#include "rrambb/crossbar.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rrambb/csv.hpp"

namespace rrambb {

const char* to_string(Scheme scheme) {
  return scheme == Scheme::with_verification ? "with_verification" : "without_verification";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "with_verification") return Scheme::with_verification;
  if (s == "without_verification") return Scheme::without_verification;
  throw ConfigError("scheme", "expected with_verification or without_verification, got '" + s + "'");
}

ConductanceTargets encode_targets(const RealMatrix& values, const DeviceModel& model, double sigma_value) {
  if (!(sigma_value > 0) || !std::isfinite(sigma_value)) {
    throw InputError("encode_targets: sigma_value must be positive");
  }
  if (!values.allFinite()) throw InputError("encode_targets: non-finite value");
  ConductanceTargets t;
  t.alpha = model.range() / (3.0 * sigma_value);
  t.plus = RealMatrix::Constant(values.rows(), values.cols(), model.g_min);
  t.minus = t.plus;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      const double g = model.g_min + std::min(t.alpha * std::abs(v), model.range());
      if (v > 0) t.plus(i, j) = g;
      else if (v < 0) t.minus(i, j) = g;
    }
  }
  return t;
}

RealMatrix decode_targets(const ConductanceTargets& targets) {
  return (targets.plus - targets.minus) / targets.alpha;
}

ProgramOptions ProgramOptions::resolved(const DeviceModel& model) const {
  ProgramOptions o = *this;
  if (o.tolerance == 0) o.tolerance = model.step() / 2.0;
  if (o.max_pulses == 0) o.max_pulses = 50L * model.n_states;
  if (o.max_pulses < 0) throw ConfigError("max_pulses", "must be positive");
  if (o.scheme == Scheme::with_verification && !(o.tolerance > 0)) {
    throw ConfigError("tolerance", "must be positive for with_verification");
  }
  return o;
}

void ProgramReport::append_sequential(const ProgramReport& other) {
  latency += other.latency;
  write_latency += other.write_latency;
  energy += other.energy;
  write_pulses += other.write_pulses;
  read_pulses += other.read_pulses;
  reset_pulses += other.reset_pulses;
  unreached_cells.insert(unreached_cells.end(), other.unreached_cells.begin(),
                         other.unreached_cells.end());
}

void ProgramReport::append_parallel(const ProgramReport& other) {
  const double lat = std::max(latency, other.latency);
  const double wlat = std::max(write_latency, other.write_latency);
  append_sequential(other);
  latency = lat;
  write_latency = wlat;
}

CellTuneResult tune_cell(CellState& cell, double target, const ProgramOptions& options,
                         const DeviceModel& model, Rng& rng, Side side, const TraceSink* trace) {
  CellTuneResult r;
  const double dt_w = model.pulse_width;
  const double dt_r = model.read_time();

  auto write = [&](Polarity p) {
    const double volts = p == Polarity::potentiate ? model.v_set : model.v_reset;
    const double e = pulse_energy(volts, effective_conductance(cell, model), dt_w);
    cell = apply_write_pulse(cell, p, model, rng);
    ++r.writes;
    r.energy += e;
    if (trace) (*trace)({PulseKind::write, side, target, volts, effective_conductance(cell, model), dt_w, e});
  };
  auto read = [&] {
    const double e = pulse_energy(model.v_read, effective_conductance(cell, model), dt_r);
    const double g = read_conductance(cell, model, rng);
    ++r.reads;
    r.energy += e;
    if (trace) (*trace)({PulseKind::read, side, target, model.v_read, g, dt_r, e});
    return g;
  };

  if (options.scheme == Scheme::without_verification) {
    const double delta = target - effective_conductance(cell, model);
    const long n = std::lround(std::abs(delta) / model.step());
    const Polarity p = delta >= 0 ? Polarity::potentiate : Polarity::depress;
    for (long i = 0; i < n; ++i) write(p);
    r.reached = true;
    return r;
  }

  const bool upward = target >= effective_conductance(cell, model);
  double measured = read();
  while (true) {
    if (r.first_crossing < 0 && (upward ? measured >= target : measured <= target)) {
      r.first_crossing = r.writes;
      if (options.stop_on_crossing) break;
    }
    if (std::abs(measured - target) <= options.tolerance) {
      r.reached = true;
      break;
    }
    if (r.writes >= options.max_pulses) break;
    write(measured < target ? Polarity::potentiate : Polarity::depress);
    measured = read();
  }
  return r;
}

CrossbarArray::CrossbarArray(int rows, int cols, DeviceModel model, int copies)
    : rows_(rows), cols_(cols), copies_(copies), model_(std::move(model)) {
  if (rows <= 0 || cols <= 0) throw DimensionError("CrossbarArray: dimensions must be positive");
  if (copies < 1) throw ConfigError("averaging", "copies per value must be >= 1");
  model_.validate();
  const std::size_t n = static_cast<std::size_t>(rows) * cols * copies;
  plus_.assign(n, CellState{model_.g_min, Defect::healthy});
  minus_ = plus_;
  commit();
}

CrossbarArray::CrossbarArray(const CrossbarArray& o)
    : rows_(o.rows_),
      cols_(o.cols_),
      copies_(o.copies_),
      model_(o.model_),
      plus_(o.plus_),
      minus_(o.minus_),
      decoded_(o.decoded_),
      conductance_sum_(o.conductance_sum_),
      reads_(o.reads_.load()),
      read_energy_(o.read_energy_.load()) {}

CrossbarArray& CrossbarArray::operator=(const CrossbarArray& o) {
  if (this == &o) return *this;
  rows_ = o.rows_;
  cols_ = o.cols_;
  copies_ = o.copies_;
  model_ = o.model_;
  plus_ = o.plus_;
  minus_ = o.minus_;
  decoded_ = o.decoded_;
  conductance_sum_ = o.conductance_sum_;
  reads_ = o.reads_.load();
  read_energy_ = o.read_energy_.load();
  return *this;
}

CellState& CrossbarArray::cell(Side side, int row, int col, int copy) {
  return (side == Side::plus ? plus_ : minus_)[index(row, col, copy)];
}

const CellState& CrossbarArray::cell(Side side, int row, int col, int copy) const {
  return (side == Side::plus ? plus_ : minus_)[index(row, col, copy)];
}

void CrossbarArray::commit() {
  decoded_.resize(rows_, cols_);
  double total = 0;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      double acc = 0;
      for (int k = 0; k < copies_; ++k) {
        const double gp = effective_conductance(plus_[index(r, c, k)], model_);
        const double gm = effective_conductance(minus_[index(r, c, k)], model_);
        acc += gp - gm;
        total += gp + gm;
      }
      decoded_(r, c) = acc / copies_;
    }
  }
  conductance_sum_ = total;
}

void CrossbarArray::charge_read() const {
  reads_.fetch_add(1);
  read_energy_.fetch_add(pulse_energy(model_.v_read, conductance_sum_, model_.read_time()));
}

void CrossbarArray::reset_read_ledger() {
  reads_ = 0;
  read_energy_ = 0;
}

ProgramReport program(CrossbarArray& array, const ConductanceTargets& targets,
                      const ProgramOptions& options, Rng& rng) {
  if (targets.plus.rows() != array.rows() || targets.plus.cols() != array.cols() ||
      targets.minus.rows() != array.rows() || targets.minus.cols() != array.cols()) {
    throw DimensionError("program: target shape does not match the array");
  }
  const DeviceModel& model = array.model();
  const ProgramOptions opt = options.resolved(model);
  const std::uint64_t base = rng.fork_seed();
  const double dt_w = model.pulse_width;
  const double dt_r = model.read_time();

  ProgramReport report;
  if (opt.exact) {
    for (int r = 0; r < array.rows(); ++r) {
      for (int c = 0; c < array.cols(); ++c) {
        for (int k = 0; k < array.copies(); ++k) {
          array.cell(Side::plus, r, c, k).conductance = targets.plus(r, c);
          array.cell(Side::minus, r, c, k).conductance = targets.minus(r, c);
        }
      }
    }
    array.commit();
    return report;
  }
  for (int r = 0; r < array.rows(); ++r) {
    double row_time = 0;
    long row_writes = 0;
    for (int c = 0; c < array.cols(); ++c) {
      for (int k = 0; k < array.copies(); ++k) {
        for (Side side : {Side::plus, Side::minus}) {
          CellState& cell = array.cell(side, r, c, k);
          report.energy += pulse_energy(model.v_full_reset, effective_conductance(cell, model), dt_w);
          ++report.reset_pulses;
          cell = apply_write_pulse(cell, Polarity::full_reset, model, rng);

          const double target = side == Side::plus ? targets.plus(r, c) : targets.minus(r, c);
          if (target <= model.g_min) continue;
          Rng cell_rng = Rng::substream(base, {static_cast<std::uint64_t>(r),
                                               static_cast<std::uint64_t>(c),
                                               static_cast<std::uint64_t>(k),
                                               static_cast<std::uint64_t>(side)});
          const CellTuneResult t = tune_cell(cell, target, opt, model, cell_rng, side);
          report.write_pulses += t.writes;
          report.read_pulses += t.reads;
          report.energy += t.energy;
          row_time = std::max(row_time, t.writes * dt_w + t.reads * dt_r);
          row_writes = std::max(row_writes, t.writes);
          if (!t.reached) {
            report.unreached_cells.push_back(
                {r, c, k, side, effective_conductance(cell, model) - target});
          }
        }
      }
    }
    // One row-wide reset pulse precedes tuning.
    report.latency += dt_w + row_time;
    report.write_latency += row_writes * dt_w;
  }
  array.commit();
  return report;
}

namespace {

double read_noise_std(const CrossbarArray& array) {
  return array.model().sigma_read * std::sqrt(2.0 / array.copies());
}

}  // namespace

RealVector mvm_read(const CrossbarArray& array, const RealVector& volts, Rng& rng) {
  if (volts.size() != array.cols()) {
    throw DimensionError("mvm_read: vector length " + std::to_string(volts.size()) +
                         " != cols " + std::to_string(array.cols()));
  }
  RealVector out = array.decoded() * volts;
  const double s = read_noise_std(array) * volts.norm();
  if (s > 0) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += s * rng.normal();
  }
  array.charge_read();
  return out;
}

RealMatrix mvm_read_batch(const CrossbarArray& array, const RealMatrix& volts, Rng& rng) {
  if (volts.rows() != array.cols()) throw DimensionError("mvm_read_batch: row count != cols");
  RealMatrix out = array.decoded() * volts;
  const double s0 = read_noise_std(array);
  for (Eigen::Index j = 0; j < volts.cols(); ++j) {
    const double s = s0 * volts.col(j).norm();
    if (s > 0) {
      for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) += s * rng.normal();
    }
    array.charge_read();
  }
  return out;
}

RealMatrix read_decoded(const CrossbarArray& array, Rng& rng) {
  RealMatrix g = array.decoded();
  const double s = read_noise_std(array);
  if (s > 0) {
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] += s * rng.normal();
  }
  array.charge_read();
  return g;
}

DefectMap inject_defects(CrossbarArray& array, double p_on, double p_off, Rng& rng) {
  if (!(p_on >= 0 && p_off >= 0 && p_on + p_off <= 1)) {
    throw ConfigError("defects", "stuck probabilities must be >= 0 and sum to <= 1");
  }
  DefectMap map;
  if (p_on == 0 && p_off == 0) return map;
  for (int r = 0; r < array.rows(); ++r)
    for (int c = 0; c < array.cols(); ++c)
      for (int k = 0; k < array.copies(); ++k)
        for (Side side : {Side::plus, Side::minus}) {
          const double u = rng.uniform();
          Defect d = Defect::healthy;
          if (u < p_on) d = Defect::stuck_on;
          else if (u < p_on + p_off) d = Defect::stuck_off;
          if (d == Defect::healthy) continue;
          array.cell(side, r, c, k).defect = d;
          map.entries.push_back({side, r, c, k, d});
        }
  array.commit();
  return map;
}

RealMatrix defection_matrix(const DefectMap& defects, const CrossbarArray& array,
                            const ConductanceTargets& targets) {
  RealMatrix w = RealMatrix::Zero(array.rows(), array.cols());
  const DeviceModel& m = array.model();
  for (const DefectEntry& e : defects.entries) {
    const double target = e.side == Side::plus ? targets.plus(e.row, e.col) : targets.minus(e.row, e.col);
    const double pinned = e.defect == Defect::stuck_on ? m.g_max : m.g_min;
    const double sign = e.side == Side::plus ? 1.0 : -1.0;
    w(e.row, e.col) += sign * (target - pinned) / array.copies();
  }
  return w;
}

RealVector defection_correct(const RealVector& raw_output, const DefectMap& defects,
                             const CrossbarArray& array, const ConductanceTargets& targets,
                             const RealVector& volts) {
  if (raw_output.size() != array.rows() || volts.size() != array.cols()) {
    throw DimensionError("defection_correct: shape mismatch");
  }
  RealVector out = raw_output;
  const DeviceModel& m = array.model();
  for (const DefectEntry& e : defects.entries) {
    const double target = e.side == Side::plus ? targets.plus(e.row, e.col) : targets.minus(e.row, e.col);
    const double pinned = e.defect == Defect::stuck_on ? m.g_max : m.g_min;
    const double sign = e.side == Side::plus ? 1.0 : -1.0;
    out[e.row] += sign * (target - pinned) / array.copies() * volts[e.col];
  }
  return out;
}

namespace {

const char* defect_name(Defect d) {
  switch (d) {
    case Defect::stuck_on:
      return "stuck_on";
    case Defect::stuck_off:
      return "stuck_off";
    case Defect::healthy:
      break;
  }
  return "healthy";
}

}  // namespace

std::vector<PulseEvent> trace_pair_programming(const DeviceModel& model, double value, double sigma_value,
                                               const ProgramOptions& options, Rng& rng) {
  const ProgramOptions opt = options.resolved(model);
  const ConductanceTargets t = encode_targets(RealMatrix::Constant(1, 1, value), model, sigma_value);
  std::vector<PulseEvent> events;
  const TraceSink sink = [&events](const PulseEvent& e) { events.push_back(e); };
  CellState cells[2];
  for (Side side : {Side::plus, Side::minus}) {
    CellState& c = cells[static_cast<int>(side)];
    c.conductance = model.g_max;  // worst case before the reset
    const double target = side == Side::plus ? t.plus(0, 0) : t.minus(0, 0);
    const double e = pulse_energy(model.v_full_reset, c.conductance, model.pulse_width);
    c = apply_write_pulse(c, Polarity::full_reset, model, rng);
    events.push_back({PulseKind::reset, side, target, model.v_full_reset, c.conductance, model.pulse_width, e});
  }
  for (Side side : {Side::plus, Side::minus}) {
    const double target = side == Side::plus ? t.plus(0, 0) : t.minus(0, 0);
    if (target <= model.g_min) continue;
    tune_cell(cells[static_cast<int>(side)], target, opt, model, rng, side, &sink);
  }
  return events;
}

void write_snapshot_csv(const CrossbarArray& array, std::ostream& out) {
  CsvWriter csv(out, {"row", "col", "copy", "g_plus", "g_minus", "defect_plus", "defect_minus"});
  const DeviceModel& m = array.model();
  for (int r = 0; r < array.rows(); ++r)
    for (int c = 0; c < array.cols(); ++c)
      for (int k = 0; k < array.copies(); ++k) {
        const CellState& p = array.cell(Side::plus, r, c, k);
        const CellState& n = array.cell(Side::minus, r, c, k);
        csv.row(r, c, k, effective_conductance(p, m), effective_conductance(n, m),
                defect_name(p.defect), defect_name(n.defect));
      }
}

}  // namespace rrambb
