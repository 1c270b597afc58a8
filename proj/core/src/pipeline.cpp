#include "rrambb/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rrambb/channel.hpp"

namespace rrambb {

namespace {

// Substream tags under a frame's base seed.
enum Stream : std::uint64_t {
  kOperators = 1,
  kChannel,
  kBits,
  kNoise,
  kDftRead,
  kIdftRead,
  kBank,
  kDetect,
  kSweep,
};

// Data symbols processed per receiver batch.
constexpr int kChunk = 16;

double read_energy(const CrossbarArray& array) {
  return pulse_energy(array.model().v_read, array.conductance_sum(), array.model().read_time());
}

ComplexMatrix identity_channel(int n_r, int n_t) { return ComplexMatrix::Identity(n_r, n_t); }

}  // namespace

const char* to_string(Backend backend) { return backend == Backend::digital ? "digital" : "rram"; }

Backend backend_from_string(const std::string& s) {
  if (s == "digital") return Backend::digital;
  if (s == "rram") return Backend::rram;
  throw ConfigError("backend", "expected digital or rram, got '" + s + "'");
}

const char* to_string(Fading fading) { return fading == Fading::identity ? "identity" : "rayleigh"; }

Fading fading_from_string(const std::string& s) {
  if (s == "rayleigh") return Fading::rayleigh;
  if (s == "identity" || s == "awgn") return Fading::identity;
  throw ConfigError("fading", "expected rayleigh or identity, got '" + s + "'");
}

long long FrameConfig::data_bits() const {
  return static_cast<long long>(std::max(data_symbols(), 0)) * n_c * n_t * modem::kBitsPerSymbol;
}

long long FrameConfig::frame_bits() const {
  return static_cast<long long>(symbols) * n_c * n_t * modem::kBitsPerSymbol;
}

void FrameConfig::validate() const {
  if (n_c < 2 || (n_c & (n_c - 1)) != 0) throw ConfigError("n_c", "must be a power of two >= 2");
  if (n_t < 1) throw ConfigError("n_t", "must be >= 1");
  if (n_r < 1) throw ConfigError("n_r", "must be >= 1");
  if (n_r < n_t) throw ConfigError("n_r", "must be >= n_t for linear detection");
  if (pilots != n_t) throw ConfigError("pilots", "the unitary pilot needs exactly n_t pilot symbols");
  if (symbols < 1) throw ConfigError("symbols", "must be >= 1");
  if (symbols < pilots) throw ConfigError("symbols", "must be >= pilots");
  if (cp_len >= n_c) throw ConfigError("cp_len", "must be < n_c");
  if (std::isnan(snr_db)) throw ConfigError("snr_db", "must be a number");
  if (copies < 1) throw ConfigError("copies", "must be >= 1");
  if (!(p_stuck_on >= 0 && p_stuck_off >= 0 && p_stuck_on + p_stuck_off <= 1)) {
    throw ConfigError("p_stuck", "probabilities must be >= 0 and sum to <= 1");
  }
  if (fading == Fading::identity && n_r != n_t) throw ConfigError("fading", "identity channel needs n_r == n_t");
  device.validate();
}

DigitalWorkload digital_workload(const FrameConfig& cfg) { return {cfg.n_c, cfg.n_t, cfg.symbols, cfg.pilots}; }

StaticOperators prepare_operators(const FrameConfig& cfg, Rng& rng) {
  StaticOperators ops;
  if (cfg.backend != Backend::rram) return ops;
  ProgramOptions opt;
  opt.scheme = cfg.scheme;
  opt.exact = cfg.exact_programming;
  if (cfg.rram_dft) {
    Rng r = Rng::substream(rng.fork_seed(), {0});
    ops.dft = ofdm::build_dft_operator(cfg.n_c, ofdm::Direction::forward, cfg.device, opt, r);
    if (cfg.p_stuck_on > 0 || cfg.p_stuck_off > 0) {
      Rng d = Rng::substream(rng.fork_seed(), {1});
      ofdm::inject_defects(ops.dft->op, cfg.p_stuck_on, cfg.p_stuck_off, d);
    }
    ops.dft->op.correct_defects = cfg.defect_correction;
  }
  if (cfg.rram_idft) {
    Rng r = Rng::substream(rng.fork_seed(), {2});
    ops.idft = ofdm::build_dft_operator(cfg.n_c, ofdm::Direction::inverse, cfg.device, opt, r);
  }
  return ops;
}

FrameResult run_frame(const FrameConfig& cfg, Rng& rng, const FrameIo& io) {
  cfg.validate();
  const std::uint64_t base = rng.fork_seed();
  auto stream = [base](Stream tag, std::uint64_t index = 0) { return Rng::substream(base, {tag, index}); };

  const bool rram = cfg.backend == Backend::rram;
  StaticOperators local;
  const StaticOperators* ops = io.operators;
  if (ops == nullptr) {
    Rng r = stream(kOperators);
    local = prepare_operators(cfg, r);
    ops = &local;
  }
  const ofdm::DftOperator* dft = rram && cfg.rram_dft && ops->dft ? &ops->dft->op : nullptr;
  const ofdm::DftOperator* idft = rram && cfg.rram_idft && ops->idft ? &ops->idft->op : nullptr;
  if (rram && cfg.rram_dft && dft == nullptr) throw ConfigError("rram_dft", "no DFT operator supplied");
  if (dft && dft->n_c != cfg.n_c) throw DimensionError("run_frame: DFT operator size != n_c");
  if (rram && cfg.rram_idft && idft == nullptr) throw ConfigError("rram_idft", "no IDFT operator supplied");

  const int n_c = cfg.n_c, n_t = cfg.n_t, n_r = cfg.n_r, cp = cfg.effective_cp();
  const double noise_var = channel::noise_variance(cfg.snr_db);

  channel::ChannelRealization h;
  {
    Rng r = stream(kChannel);
    if (cfg.fading == Fading::rayleigh) {
      h = channel::sample_channel(n_t, n_r, n_c, cfg.flat, r);
    } else {
      h.flat = true;
      h.per_subcarrier.assign(static_cast<std::size_t>(n_c), identity_channel(n_r, n_t));
    }
  }

  // Transmit a batch of OFDM symbols given in the frequency domain
  // (n_c x (count * n_t), column s * n_t + a) and return the received
  // frequency-domain samples (n_c x (count * n_r)).
  auto transceive = [&](const ComplexMatrix& x_freq, int first_symbol, int count) {
    Rng idft_rng = stream(kIdftRead, static_cast<std::uint64_t>(first_symbol));
    const ComplexMatrix x_time = idft ? ofdm::dft_apply_batch(*idft, x_freq, idft_rng)
                                      : ofdm::exact_dft_batch(x_freq, ofdm::Direction::inverse);
    ComplexMatrix y_time(n_c, static_cast<Eigen::Index>(count) * n_r);
    for (int s = 0; s < count; ++s) {
      Rng noise = stream(kNoise, static_cast<std::uint64_t>(first_symbol + s));
      // Cyclic prefix on every transmit antenna.
      std::vector<ComplexVector> tx(static_cast<std::size_t>(n_t));
      for (int a = 0; a < n_t; ++a) {
        tx[static_cast<std::size_t>(a)] =
            ofdm::cyclic_prefix(x_time.col(static_cast<Eigen::Index>(s) * n_t + a), cp, ofdm::CpMode::add);
      }
      const Eigen::Index len = n_c + cp;
      std::vector<ComplexVector> rx(static_cast<std::size_t>(n_r), ComplexVector::Zero(len));
      if (h.flat) {
        const ComplexMatrix& hm = h.at(0);
        for (int r = 0; r < n_r; ++r) {
          for (int a = 0; a < n_t; ++a) rx[static_cast<std::size_t>(r)] += hm(r, a) * tx[static_cast<std::size_t>(a)];
        }
      } else {
        // Per-sub-carrier matrices act in the frequency domain; the circular
        // structure is restored by re-adding the prefix.
        ComplexMatrix xf(n_c, n_t);
        for (int a = 0; a < n_t; ++a) {
          xf.col(a) = ofdm::exact_dft(ofdm::cyclic_prefix(tx[static_cast<std::size_t>(a)], cp, ofdm::CpMode::remove));
        }
        ComplexMatrix yf(n_c, n_r);
        for (int k = 0; k < n_c; ++k) yf.row(k) = (h.at(k) * xf.row(k).transpose()).transpose();
        for (int r = 0; r < n_r; ++r) {
          rx[static_cast<std::size_t>(r)] = ofdm::cyclic_prefix(
              ofdm::exact_dft(yf.col(r), ofdm::Direction::inverse), cp, ofdm::CpMode::add);
        }
      }
      for (int r = 0; r < n_r; ++r) {
        channel::add_noise(rx[static_cast<std::size_t>(r)], noise_var, noise);
        y_time.col(static_cast<Eigen::Index>(s) * n_r + r) =
            ofdm::cyclic_prefix(rx[static_cast<std::size_t>(r)], cp, ofdm::CpMode::remove);
      }
    }
    Rng dft_rng = stream(kDftRead, static_cast<std::uint64_t>(first_symbol));
    return dft ? ofdm::dft_apply_batch(*dft, y_time, dft_rng) : ofdm::exact_dft_batch(y_time);
  };

  // Pilot phase.
  const ComplexMatrix pilot = channel::unitary_pilot(n_t);
  std::vector<ComplexMatrix> h_hat;
  {
    ComplexMatrix x_freq(n_c, static_cast<Eigen::Index>(cfg.pilots) * n_t);
    for (int p = 0; p < cfg.pilots; ++p) {
      for (int a = 0; a < n_t; ++a) x_freq.col(static_cast<Eigen::Index>(p) * n_t + a).setConstant(pilot(a, p));
    }
    const ComplexMatrix y = transceive(x_freq, 0, cfg.pilots);
    std::vector<ComplexMatrix> per_k(static_cast<std::size_t>(n_c));
    for (int k = 0; k < n_c; ++k) {
      ComplexMatrix s(n_r, cfg.pilots);
      for (int p = 0; p < cfg.pilots; ++p) {
        for (int r = 0; r < n_r; ++r) s(r, p) = y(k, static_cast<Eigen::Index>(p) * n_r + r);
      }
      per_k[static_cast<std::size_t>(k)] = channel::estimate_channel(s, pilot);
    }
    if (cfg.flat) {
      ComplexMatrix mean = ComplexMatrix::Zero(n_r, n_t);
      for (const auto& m : per_k) mean += m;
      h_hat.push_back(mean / static_cast<double>(n_c));
    } else {
      h_hat = std::move(per_k);
    }
  }

  FrameResult result;
  result.frame_bits = cfg.frame_bits();

  // Detectors: crossbar banks or digital filter matrices.
  const bool crossbar_detect = rram && cfg.rram_detector;
  std::vector<mimo::DetectorBank> banks;
  std::vector<ComplexMatrix> filters;
  double detect_read_energy = 0;  // one detection, summed over banks
  {
    ProgramOptions opt;
    opt.scheme = cfg.scheme;
    opt.exact = cfg.exact_programming;
    for (std::size_t k = 0; k < h_hat.size(); ++k) {
      if (crossbar_detect) {
        Rng r = stream(kBank, k);
        mimo::BuiltBank built = mimo::build_detector_bank(h_hat[k], cfg.snr_db, cfg.detector, cfg.device, opt,
                                                          cfg.copies, r);
        ProgramReport bank_report = built.left_report;
        if (cfg.sequential_pairs) bank_report.append_sequential(built.right_report);
        else bank_report.append_parallel(built.right_report);
        if (k == 0) result.program_report = bank_report;
        else result.program_report.append_parallel(bank_report);
        detect_read_energy += read_energy(built.bank.left) + read_energy(built.bank.right);
        banks.push_back(std::move(built.bank));
      } else {
        ComplexMatrix f(n_t, n_r);
        for (int j = 0; j < n_r; ++j) {
          f.col(j) = mimo::detect_digital(h_hat[k], ComplexVector::Unit(n_r, j), cfg.snr_db, cfg.detector);
        }
        filters.push_back(std::move(f));
      }
    }
  }
  // Flat banks serve every sub-carrier, so one detection energy counts n_c times.
  const double per_symbol_detect_energy = cfg.flat ? detect_read_energy * n_c : detect_read_energy;

  // Ledger.
  const int data = cfg.data_symbols();
  if (rram) {
    const double t_read = cfg.device.read_time();
    const double t_dft = dft ? t_read : 0.0;
    const double t_detect = crossbar_detect ? t_read : 0.0;
    result.latency_program = result.program_report.latency;
    result.energy_program = result.program_report.energy;
    result.latency_data = cfg.symbols * (t_dft + t_detect);
    double e = 0;
    if (dft) e += static_cast<double>(cfg.symbols) * n_r * read_energy(dft->array);
    if (idft) e += static_cast<double>(cfg.symbols) * n_t * read_energy(idft->array);
    if (crossbar_detect) e += static_cast<double>(data) * per_symbol_detect_energy;
    result.energy_data = e;
  } else {
    result.digital = digital_cost(digital_workload(cfg), combined_65nm_profile());
    result.latency_data = result.digital->latency();
    result.energy_data = result.digital->energy();
  }
  const double latency = result.latency();
  const double energy = result.energy();
  result.throughput = latency > 0 ? static_cast<double>(result.frame_bits) / latency : 0.0;
  result.energy_efficiency = energy > 0 ? static_cast<double>(result.frame_bits) / energy : 0.0;

  if (!cfg.simulate_data || data == 0) {
    result.metrics = modem::compute_metrics({}, {}, {}, {});
    return result;
  }

  // Data phase.
  const long long bits_per_symbol = static_cast<long long>(n_c) * n_t * modem::kBitsPerSymbol;
  const long long payload_bits = io.payload ? static_cast<long long>(io.payload->size()) : 0;
  if (payload_bits > cfg.data_bits()) throw InputError("run_frame: payload exceeds frame capacity");
  if (io.keep_bits) result.rx_bits.reserve(static_cast<std::size_t>(cfg.data_bits()));
  if (io.keep_symbols) result.detected.resize(static_cast<Eigen::Index>(data) * n_c, n_t);

  modem::Metrics total = modem::compute_metrics({}, {}, {}, {});
  for (int d0 = 0; d0 < data; d0 += kChunk) {
    const int count = std::min(kChunk, data - d0);
    std::vector<modem::Bits> tx_bits(static_cast<std::size_t>(count));
    std::vector<ComplexVector> tx_sym(static_cast<std::size_t>(count));
    ComplexMatrix x_freq(n_c, static_cast<Eigen::Index>(count) * n_t);
    for (int s = 0; s < count; ++s) {
      const int d = d0 + s;
      Rng br = stream(kBits, static_cast<std::uint64_t>(d));
      modem::Bits& bits = tx_bits[static_cast<std::size_t>(s)];
      bits.resize(static_cast<std::size_t>(bits_per_symbol));
      const long long offset = static_cast<long long>(d) * bits_per_symbol;
      for (long long b = 0; b < bits_per_symbol; ++b) {
        const std::uint8_t random_bit = static_cast<std::uint8_t>(br() >> 63);
        bits[static_cast<std::size_t>(b)] =
            offset + b < payload_bits ? (*io.payload)[static_cast<std::size_t>(offset + b)] : random_bit;
      }
      // Symbol order: sub-carrier major, antenna minor.
      tx_sym[static_cast<std::size_t>(s)] = modem::qam16_modulate(bits);
      for (int k = 0; k < n_c; ++k) {
        for (int a = 0; a < n_t; ++a) {
          x_freq(k, static_cast<Eigen::Index>(s) * n_t + a) = tx_sym[static_cast<std::size_t>(s)][k * n_t + a];
        }
      }
    }
    const ComplexMatrix y = transceive(x_freq, cfg.pilots + d0, count);

    for (int s = 0; s < count; ++s) {
      const int d = d0 + s;
      Rng det = stream(kDetect, static_cast<std::uint64_t>(d));
      ComplexVector rx(static_cast<Eigen::Index>(n_c) * n_t);
      ComplexVector yk(n_r);
      for (int k = 0; k < n_c; ++k) {
        for (int r = 0; r < n_r; ++r) yk[r] = y(k, static_cast<Eigen::Index>(s) * n_r + r);
        ComplexVector xh;
        if (crossbar_detect) {
          auto v = mimo::try_detect_crossbar(banks[cfg.flat ? 0 : static_cast<std::size_t>(k)], yk, det);
          if (v) {
            xh = std::move(*v);
          } else {
            ++result.failed_detections;
            xh = ComplexVector::Zero(n_t);
          }
        } else {
          xh = filters[cfg.flat ? 0 : static_cast<std::size_t>(k)] * yk;
        }
        rx.segment(static_cast<Eigen::Index>(k) * n_t, n_t) = xh;
        if (io.keep_symbols) result.detected.row(static_cast<Eigen::Index>(d) * n_c + k) = xh.transpose();
      }
      const modem::Bits rx_bits = modem::qam16_demodulate(rx);
      total = modem::merge_metrics(
          total, modem::compute_metrics(tx_sym[static_cast<std::size_t>(s)], rx, tx_bits[static_cast<std::size_t>(s)], rx_bits));
      if (io.keep_bits) result.rx_bits.insert(result.rx_bits.end(), rx_bits.begin(), rx_bits.end());
    }
  }
  result.metrics = total;
  return result;
}

std::vector<SweepRow> sweep(const FrameConfig& cfg, SweepVariable variable, const std::vector<double>& values,
                            int trials, int jobs) {
  if (values.empty()) throw ConfigError("values", "sweep needs at least one value");
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  cfg.validate();
  // The DFT depends on neither SNR nor antenna count, so one operator serves the sweep.
  Rng op_rng = Rng::substream(cfg.seed, {kOperators});
  const StaticOperators ops = prepare_operators(cfg, op_rng);

  std::vector<FrameConfig> configs;
  for (double v : values) {
    FrameConfig c = cfg;
    if (variable == SweepVariable::snr) {
      c.snr_db = v;
    } else {
      const int n = static_cast<int>(std::lround(v));
      if (n < 1 || std::abs(v - n) > 1e-9) throw ConfigError("values", "antenna counts must be positive integers");
      c.n_t = c.n_r = c.pilots = n;
      c.symbols = std::max(c.symbols, n);
    }
    c.validate();
    configs.push_back(c);
  }

  const std::size_t n_jobs = configs.size() * static_cast<std::size_t>(trials);
  std::vector<SweepRow> rows(n_jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < n_jobs;) {
      const std::size_t vi = j / static_cast<std::size_t>(trials);
      const int t = static_cast<int>(j % static_cast<std::size_t>(trials));
      try {
        // Keyed by trial only: every value sees the same channel, bits and
        // noise shape, which keeps curves free of between-point jitter.
        Rng r = Rng::substream(cfg.seed, {kSweep, static_cast<std::uint64_t>(t)});
        FrameIo io;
        io.operators = &ops;
        rows[j] = {values[vi], t, run_frame(configs[vi], r, io)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(n_jobs)));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows) {
  std::vector<SweepSummary> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    modem::Metrics pooled = modem::compute_metrics({}, {}, {}, {});
    double ls = 0, ls2 = 0, es = 0, es2 = 0;
    for (; j < rows.size() && rows[j].value == rows[i].value; ++j) {
      const FrameResult& r = rows[j].result;
      pooled = modem::merge_metrics(pooled, r.metrics);
      ls += r.latency();
      ls2 += r.latency() * r.latency();
      es += r.energy();
      es2 += r.energy() * r.energy();
    }
    const double n = static_cast<double>(j - i);
    auto ci = [n](double s, double s2) {
      if (n < 2) return std::nan("");
      const double var = std::max(0.0, (s2 - s * s / n) / (n - 1));
      return 1.96 * std::sqrt(var / n);
    };
    out.push_back({rows[i].value, static_cast<int>(n), pooled.mer_db, pooled.ber, ls / n, ci(ls, ls2), es / n,
                   ci(es, es2)});
    i = j;
  }
  return out;
}

ImageResult transmit_image(const GrayImage& image, const FrameConfig& cfg, Rng& rng,
                           const StaticOperators* operators) {
  cfg.validate();
  if (image.pixels.empty()) throw InputError("transmit_image: empty image");
  modem::Bits bits;
  bits.reserve(image.pixels.size() * 8);
  for (std::uint8_t px : image.pixels) {
    for (int b = 7; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((px >> b) & 1u));
  }
  const long long per_symbol = static_cast<long long>(cfg.n_c) * cfg.n_t * modem::kBitsPerSymbol;
  if (cfg.data_symbols() < 1) throw ConfigError("symbols", "frame carries no data symbols");

  StaticOperators local;
  if (operators == nullptr) {
    Rng r = Rng::substream(rng.fork_seed(), {kOperators});
    local = prepare_operators(cfg, r);
    operators = &local;
  }

  ImageResult out;
  modem::Bits rx;
  rx.reserve(bits.size());
  modem::Metrics symbol_metrics = modem::compute_metrics({}, {}, {}, {});
  std::size_t sent = 0;
  while (sent < bits.size()) {
    const long long remaining = static_cast<long long>(bits.size() - sent);
    const long long needed = (remaining + per_symbol - 1) / per_symbol;
    FrameConfig fc = cfg;
    fc.symbols = cfg.pilots + static_cast<int>(std::min<long long>(needed, cfg.data_symbols()));
    const std::size_t take = static_cast<std::size_t>(std::min<long long>(remaining, fc.data_bits()));
    const modem::Bits payload(bits.begin() + static_cast<std::ptrdiff_t>(sent),
                              bits.begin() + static_cast<std::ptrdiff_t>(sent + take));
    FrameIo io;
    io.operators = operators;
    io.payload = &payload;
    io.keep_bits = true;
    const FrameResult fr = run_frame(fc, rng, io);
    rx.insert(rx.end(), fr.rx_bits.begin(), fr.rx_bits.begin() + static_cast<std::ptrdiff_t>(take));
    symbol_metrics = modem::merge_metrics(symbol_metrics, fr.metrics);
    sent += take;
    ++out.frames;
  }

  out.recovered = GrayImage{image.width, image.height, std::vector<std::uint8_t>(image.pixels.size())};
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    std::uint8_t v = 0;
    for (int b = 0; b < 8; ++b) v = static_cast<std::uint8_t>((v << 1) | rx[i * 8 + static_cast<std::size_t>(b)]);
    out.recovered.pixels[i] = v;
  }
  out.metrics = symbol_metrics;
  out.metrics.bits = static_cast<long long>(bits.size());
  out.metrics.bit_errors = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) out.metrics.bit_errors += bits[i] != rx[i];
  out.metrics.ber = static_cast<double>(out.metrics.bit_errors) / static_cast<double>(out.metrics.bits);
  return out;
}

}  // namespace rrambb
