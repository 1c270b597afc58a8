#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rrambb/config.hpp"
#include "rrambb/cost.hpp"
#include "rrambb/csv.hpp"
#include "rrambb/image.hpp"
#include "rrambb/latency_theory.hpp"
#include "rrambb/modem.hpp"
#include "rrambb/pipeline.hpp"

namespace rrambb::cli {

namespace {

constexpr const char* kConfigEnv = "RRAMBB_CONFIG";

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<int> trials;
  std::optional<double> snr;
  std::optional<std::string> scheme;
  std::optional<std::string> backend;
  std::optional<std::string> detector;
  std::optional<std::string> device;
  std::optional<std::string> fading;
  std::optional<int> n_c;
  std::optional<int> antennas;
  std::optional<int> symbols;
  std::optional<int> copies;
  bool selective = false;
  std::string out;
  std::string emit_config;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, std::string("Config file (default: $") + kConfigEnv + ")");
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--jobs", o.jobs, "Worker threads for independent trials")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output file (default: standard output)");
  cmd->add_option("--emit-config", o.emit_config, "Write the effective configuration to this file");
  cmd->add_option("--device", o.device, "Device preset")->check(CLI::IsMember(preset_names()));
  cmd->add_option("--scheme", o.scheme, "with_verification | without_verification");
  cmd->add_option("--backend", o.backend, "rram | digital");
  cmd->add_option("--detector", o.detector, "lmmse | zf");
  cmd->add_option("--fading", o.fading, "rayleigh | identity");
  cmd->add_option("--n-c", o.n_c, "Sub-carriers");
  cmd->add_option("--antennas", o.antennas, "n_t = n_r = pilots");
  cmd->add_option("--symbols", o.symbols, "OFDM symbols per frame, pilots included");
  cmd->add_option("--copies", o.copies, "Devices averaged per differential side");
  cmd->add_flag("--selective", o.selective, "Independent channel per sub-carrier");
}

RunConfig load(const Overrides& o) {
  std::string path = o.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) path = env;
  }
  RunConfig c = path.empty() ? parse_config_text("") : parse_config_file(path);
  FrameConfig& f = c.frame;
  if (o.device) {
    c.device_preset = *o.device;
    f.device = preset(*o.device);
  }
  if (o.seed) f.seed = *o.seed;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.trials) c.trials = *o.trials;
  if (o.snr) f.snr_db = *o.snr;
  if (o.scheme) f.scheme = scheme_from_string(*o.scheme);
  if (o.backend) f.backend = backend_from_string(*o.backend);
  if (o.detector) f.detector = mimo::detector_mode_from_string(*o.detector);
  if (o.fading) f.fading = fading_from_string(*o.fading);
  if (o.n_c) f.n_c = *o.n_c;
  if (o.antennas) f.n_t = f.n_r = f.pilots = *o.antennas;
  if (o.symbols) f.symbols = *o.symbols;
  if (o.copies) f.copies = *o.copies;
  if (o.selective) f.flat = false;
  if (c.trials < 1) throw ConfigError("trials", "must be >= 1");
  f.validate();
  if (!o.emit_config.empty()) {
    std::ofstream cfg_out(o.emit_config);
    if (!cfg_out) throw Error("cannot write '" + o.emit_config + "'");
    cfg_out << emit_config(c);
  }
  return c;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

// Writes an artifact to --out (plus a manifest) or to `out`.
class Sink {
 public:
  Sink(const Overrides& o, const RunConfig& c, std::string command, std::ostream& out)
      : o_(o), c_(c), command_(std::move(command)), out_(out), start_(std::chrono::steady_clock::now()) {}

  std::ostream& stream() { return buffer_; }
  /// Where human-readable summaries go: stdout when the artifact is a file.
  std::ostream& summary(std::ostream& err) { return o_.out.empty() ? err : out_; }

  void finish() {
    const std::string data = buffer_.str();
    if (o_.out.empty()) {
      out_ << data;
      return;
    }
    std::ofstream f(o_.out, std::ios::binary);
    if (!f) throw Error("cannot write '" + o_.out + "'");
    f << data;
    write_manifest({{o_.out, data}});
  }

  void write_manifest(const std::vector<std::pair<std::string, std::string>>& artifacts) const {
    nlohmann::ordered_json m;
    m["command"] = command_;
    m["seed"] = c_.frame.seed;
    m["config"] = emit_config(c_);
    m["artifacts"] = nlohmann::ordered_json::array();
    for (const auto& [path, bytes] : artifacts) {
      m["artifacts"].push_back({{"path", path}, {"fnv1a64", hex64(fnv1a64(bytes))}, {"bytes", bytes.size()}});
    }
    m["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const std::string path = (o_.out.empty() ? artifacts.front().first : o_.out) + ".manifest.json";
    std::ofstream f(path);
    if (!f) throw Error("cannot write '" + path + "'");
    f << m.dump(2) << '\n';
  }

 private:
  const Overrides& o_;
  const RunConfig& c_;
  std::string command_;
  std::ostream& out_;
  std::ostringstream buffer_;
  std::chrono::steady_clock::time_point start_;
};

struct MetricsRow {
  double snr_db;
  std::string scheme;
  std::string mode;
  int trial;
  double mer_db;
  double ber;
};

void write_metrics_csv(std::vector<MetricsRow> rows, std::ostream& out) {
  std::sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    return std::tie(a.snr_db, a.mode, a.scheme, a.trial) < std::tie(b.snr_db, b.mode, b.scheme, b.trial);
  });
  CsvWriter csv(out, {"snr_db", "scheme", "mode", "trial", "mer_db", "ber"});
  for (const auto& r : rows) csv.row(r.snr_db, r.scheme, r.mode, r.trial, r.mer_db, r.ber);
}

void append_rows(std::vector<MetricsRow>& rows, const FrameConfig& f, const std::vector<SweepRow>& sweep_rows) {
  for (const auto& s : sweep_rows) {
    rows.push_back({s.value, to_string(f.scheme), to_string(f.backend), s.trial, s.result.metrics.mer_db,
                    s.result.metrics.ber});
  }
}

int cmd_simulate(const Overrides& o, std::ostream& out, std::ostream& err) {
  const RunConfig c = load(o);
  const int trials = o.trials.value_or(1);
  const auto rows = sweep(c.frame, SweepVariable::snr, {c.frame.snr_db}, trials, c.jobs);
  Sink sink(o, c, "simulate", out);
  std::vector<MetricsRow> metrics;
  append_rows(metrics, c.frame, rows);
  write_metrics_csv(metrics, sink.stream());
  sink.finish();

  const SweepSummary s = summarize(rows).front();
  const FrameResult& first = rows.front().result;
  std::ostream& sum = sink.summary(err);
  sum << "frames " << trials << ", " << to_string(c.frame.backend) << "/" << to_string(c.frame.scheme) << ", "
      << c.device_preset << "\n"
      << "  mer_db " << format_double(s.mer_db) << "  ber " << format_double(s.ber) << "\n"
      << "  latency_s " << format_double(s.latency_mean) << " (program " << format_double(first.latency_program)
      << ", data " << format_double(first.latency_data) << ")\n"
      << "  energy_j " << format_double(s.energy_mean) << "  throughput_bps "
      << format_double(static_cast<double>(first.frame_bits) / s.latency_mean) << "  efficiency_bpj "
      << format_double(static_cast<double>(first.frame_bits) / s.energy_mean) << "\n";
  long long failed = 0;
  for (const auto& r : rows) failed += r.result.failed_detections;
  if (failed > 0) sum << "  failed detections " << failed << "\n";
  return 0;
}

int cmd_sweep_snr(const Overrides& o, const std::vector<double>& snr_list, bool all_schemes, std::ostream& out,
                  std::ostream& err) {
  RunConfig c = load(o);
  if (!snr_list.empty()) c.snr_values = snr_list;
  std::vector<FrameConfig> variants = {c.frame};
  if (all_schemes) {
    variants.clear();
    FrameConfig d = c.frame;
    d.backend = Backend::digital;
    variants.push_back(d);
    for (Scheme s : {Scheme::with_verification, Scheme::without_verification}) {
      FrameConfig r = c.frame;
      r.backend = Backend::rram;
      r.scheme = s;
      variants.push_back(r);
    }
  }
  std::vector<MetricsRow> metrics;
  Sink sink(o, c, "sweep-snr", out);
  for (const FrameConfig& f : variants) {
    const auto rows = sweep(f, SweepVariable::snr, c.snr_values, c.trials, c.jobs);
    append_rows(metrics, f, rows);
    for (const auto& s : summarize(rows)) {
      sink.summary(err) << to_string(f.backend) << "/" << to_string(f.scheme) << " snr " << format_double(s.value)
                        << " mer_db " << format_double(s.mer_db) << " ber " << format_double(s.ber) << "\n";
    }
  }
  write_metrics_csv(metrics, sink.stream());
  sink.finish();
  return 0;
}

int cmd_sweep_antennas(const Overrides& o, const std::vector<double>& sizes, bool full, std::ostream& out,
                       std::ostream& err) {
  RunConfig c = load(o);
  if (!sizes.empty()) c.antenna_values = sizes;
  struct Row {
    int n;
    std::string scheme;
    double latency, energy, ci95;
  };
  std::vector<Row> table;
  for (Scheme s : {Scheme::with_verification, Scheme::without_verification}) {
    FrameConfig f = c.frame;
    f.backend = Backend::rram;
    f.scheme = s;
    f.simulate_data = full;
    for (const auto& sum : summarize(sweep(f, SweepVariable::antennas, c.antenna_values, c.trials, c.jobs))) {
      table.push_back({static_cast<int>(std::lround(sum.value)), to_string(s), sum.latency_mean, sum.energy_mean,
                       sum.latency_ci95});
    }
  }
  std::sort(table.begin(), table.end(),
            [](const Row& a, const Row& b) { return std::tie(a.n, a.scheme) < std::tie(b.n, b.scheme); });
  Sink sink(o, c, "sweep-antennas", out);
  CsvWriter csv(sink.stream(), {"n_antennas", "scheme", "latency_s", "energy_j", "ci95"});
  for (const auto& r : table) csv.row(r.n, r.scheme, r.latency, r.energy, r.ci95);
  sink.finish();
  sink.summary(err) << table.size() << " rows, " << c.trials << " trials per point\n";
  return 0;
}

int cmd_program_trace(const Overrides& o, double value, double sigma_value, std::ostream& out, std::ostream& err) {
  const RunConfig c = load(o);
  ProgramOptions opt;
  opt.scheme = c.frame.scheme;
  Rng rng(c.frame.seed);
  const auto events = trace_pair_programming(c.frame.device, value, sigma_value, opt, rng);
  Sink sink(o, c, "program-trace", out);
  CsvWriter csv(sink.stream(),
                {"pulse_index", "target", "side", "voltage_v", "conductance_s", "latency_s", "energy_j"});
  double elapsed = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const PulseEvent& e = events[i];
    elapsed += e.duration;
    csv.row(static_cast<long long>(i), e.target, e.side == Side::plus ? "plus" : "minus", e.voltage, e.conductance,
            elapsed, e.energy);
  }
  sink.finish();
  sink.summary(err) << events.size() << " pulses, " << format_double(elapsed) << " s\n";
  return 0;
}

int cmd_bounds(const Overrides& o, const std::vector<double>& sizes, std::optional<int> trials,
               std::optional<std::string> mode, std::ostream& out, std::ostream& /*err*/) {
  RunConfig c = load(o);
  if (!sizes.empty()) c.bound_sizes = sizes;
  if (trials) c.bound_trials = *trials;
  if (mode) c.bound_mode = latency::mc_mode_from_string(*mode);
  if (c.bound_trials < 1) throw ConfigError("trials", "must be >= 1");
  Sink sink(o, c, "bounds", out);
  CsvWriter csv(sink.stream(), {"n", "scheme", "mode", "mc_mean", "ci95", "bound"});
  for (double v : c.bound_sizes) {
    const int n = static_cast<int>(std::lround(v));
    if (n < 2 || std::abs(v - n) > 1e-9) throw ConfigError("n", "sizes must be integers >= 2");
    for (Scheme s : {Scheme::with_verification, Scheme::without_verification}) {
      Rng rng = Rng::substream(c.frame.seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s)});
      const auto mc = latency::mc_write_latency(n, n, c.frame.device, s, c.bound_mode, c.bound_trials, rng);
      const auto b = latency::latency_bound(s, n, n, c.frame.device);
      csv.row(n, to_string(s), latency::to_string(c.bound_mode), mc.mean, mc.ci95, b.bound);
    }
  }
  sink.finish();
  return 0;
}

int cmd_image(const Overrides& o, const std::string& in_path, int size, std::ostream& out, std::ostream& err) {
  const RunConfig c = load(o);
  const GrayImage src = in_path.empty() ? test_pattern(size, size) : read_pgm_file(in_path);
  Rng rng(c.frame.seed);
  const ImageResult r = transmit_image(src, c.frame, rng);
  std::ostringstream bytes;
  write_pgm(r.recovered, bytes);
  if (o.out.empty()) {
    out << bytes.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error("cannot write '" + o.out + "'");
    f << bytes.str();
    Sink(o, c, "image", out).write_manifest({{o.out, bytes.str()}});
  }
  (o.out.empty() ? err : out) << "frames " << r.frames << "  ber " << format_double(r.metrics.ber) << "  mer_db "
                              << format_double(r.metrics.mer_db) << "  bit errors " << r.metrics.bit_errors << "/"
                              << r.metrics.bits << "\n";
  return 0;
}

int cmd_gray(int width, std::ostream& out) {
  if (width < 1 || width > 16) throw ConfigError("width", "must lie in [1, 16]");
  auto bits = [width](std::uint32_t v) {
    std::string s;
    for (int b = width - 1; b >= 0; --b) s.push_back(((v >> b) & 1u) ? '1' : '0');
    return s;
  };
  CsvWriter csv(out, {"decimal", "binary", "gray"});
  for (std::uint32_t v = 0; v < (1u << width); ++v) csv.row(v, bits(v), bits(modem::bin_to_gray(v)));
  return 0;
}

int cmd_cost(const Overrides& o, std::ostream& out, std::ostream& /*err*/) {
  const RunConfig c = load(o);
  const DigitalCost cost = digital_cost(digital_workload(c.frame), combined_65nm_profile());
  Sink sink(o, c, "cost", out);
  CsvWriter csv(sink.stream(), {"component", "latency_s", "energy_j"});
  csv.row("fft", cost.fft_latency, cost.fft_energy);
  csv.row("detection", cost.detect_latency, cost.detect_energy);
  csv.row("total", cost.latency(), cost.energy());
  sink.finish();
  return 0;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"RRAM in-memory MIMO-OFDM baseband simulator"};
  app.require_subcommand(1);
  Overrides o;

  auto* simulate = app.add_subcommand("simulate", "Run frames at one SNR; writes the metrics CSV");
  add_common(simulate, o);
  simulate->add_option("--snr", o.snr, "SNR in dB");
  simulate->add_option("--trials", o.trials, "Frames");

  std::vector<double> snr_list;
  bool all_schemes = false;
  auto* sweep_snr = app.add_subcommand("sweep-snr", "MER/BER against SNR; writes the metrics CSV");
  add_common(sweep_snr, o);
  sweep_snr->add_option("--snr-list", snr_list, "SNR values in dB")->delimiter(',');
  sweep_snr->add_option("--trials", o.trials, "Frames per point");
  sweep_snr->add_flag("--all-schemes", all_schemes, "Digital, with and without verification");

  std::vector<double> antenna_list;
  bool full = false;
  auto* sweep_ant = app.add_subcommand("sweep-antennas", "Latency and energy against MIMO size; writes the latency CSV");
  add_common(sweep_ant, o);
  sweep_ant->add_option("--sizes", antenna_list, "Antenna counts")->delimiter(',');
  sweep_ant->add_option("--trials", o.trials, "Frames per point");
  sweep_ant->add_flag("--full", full, "Simulate data symbols too");

  double value = 0.5;
  double sigma_value = 0.7071067811865476;
  auto* trace = app.add_subcommand("program-trace", "Pulse-level trace of programming one differential pair");
  add_common(trace, o);
  trace->add_option("--value", value, "Signed value to store");
  trace->add_option("--sigma-value", sigma_value, "Value scale for the three-sigma rule")
      ->check(CLI::PositiveNumber);

  std::vector<double> bound_sizes;
  std::optional<int> bound_trials;
  std::optional<std::string> bound_mode;
  auto* bounds = app.add_subcommand("bounds", "Monte Carlo write latency against the closed-form bounds");
  add_common(bounds, o);
  bounds->add_option("--n", bound_sizes, "n_t = n_r values")->delimiter(',');
  bounds->add_option("--trials", bound_trials, "Monte Carlo trials");
  bounds->add_option("--mode", bound_mode, "analytic | discrete");

  std::string image_in;
  int image_size = 64;
  auto* image = app.add_subcommand("image", "Transmit an 8-bit PGM image; writes the recovered PGM");
  add_common(image, o);
  image->add_option("--snr", o.snr, "SNR in dB");
  image->add_option("--in", image_in, "Input PGM (default: built-in test pattern)");
  image->add_option("--size", image_size, "Test-pattern side length")->check(CLI::PositiveNumber);

  int width = 4;
  auto* gray = app.add_subcommand("gray", "Binary to Gray conversion table");
  gray->add_option("--width", width, "Bits per word");

  auto* cost = app.add_subcommand("cost", "Digital baseline latency and energy for the configured frame");
  add_common(cost, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate) return cmd_simulate(o, out, err);
    if (*sweep_snr) return cmd_sweep_snr(o, snr_list, all_schemes, out, err);
    if (*sweep_ant) return cmd_sweep_antennas(o, antenna_list, full, out, err);
    if (*trace) return cmd_program_trace(o, value, sigma_value, out, err);
    if (*bounds) return cmd_bounds(o, bound_sizes, bound_trials, bound_mode, out, err);
    if (*image) return cmd_image(o, image_in, image_size, out, err);
    if (*gray) return cmd_gray(width, out);
    if (*cost) return cmd_cost(o, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int run_command(int argc, const char* const* argv) { return run_command(argc, argv, std::cout, std::cerr); }

}  // namespace rrambb::cli
