// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 6        run the listed criteria
//
// Exit status is 0 when every selected criterion passes.

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "rrambb/channel.hpp"
#include "rrambb/cost.hpp"
#include "rrambb/latency_theory.hpp"
#include "rrambb/linmap.hpp"
#include "rrambb/mimo.hpp"
#include "rrambb/modem.hpp"
#include "rrambb/ofdm.hpp"
#include "rrambb/pipeline.hpp"
#include "support.hpp"

using namespace rrambb;
using test::rel_err;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Every clause of a criterion is printed; the criterion passes when all do.
struct Verdict {
  bool ok = true;

  void check(bool pass, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
    std::printf("    [%s] ", pass ? "ok" : "FAIL");
    va_list args;
    va_start(args, fmt);
    std::vprintf(fmt, args);
    va_end(args);
    std::printf("\n");
    ok = ok && pass;
  }
};

void info(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void info(const char* fmt, ...) {
  std::printf("    (info) ");
  va_list args;
  va_start(args, fmt);
  std::vprintf(fmt, args);
  va_end(args);
  std::printf("\n");
}

int dim(Rng& rng, int lo = 1, int hi = 16) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

ProgramOptions exact_options() {
  ProgramOptions o;
  o.exact = true;
  return o;
}

ComplexVector fftw_unitary(const ComplexVector& x, int sign) {
  const int n = static_cast<int>(x.size());
  ComplexVector in = x, out(n);
  fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                 reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
  fftw_execute(p);
  fftw_destroy_plan(p);
  return out / std::sqrt(static_cast<double>(n));
}

double ig_cdf(double t, double mean, double shape) {
  if (t <= 0) return 0;
  const double a = std::sqrt(shape / t);
  const double phi1 = 0.5 * std::erfc(-a * (t / mean - 1) / std::numbers::sqrt2);
  const double tail = 0.5 * std::erfc(a * (t / mean + 1) / std::numbers::sqrt2);
  return phi1 + std::exp(2 * shape / mean + std::log(tail));
}

double ks_to_ig(std::vector<double> xs, double mean, double shape) {
  return test::ks_statistic(std::move(xs), [&](double t) { return ig_cdf(t, mean, shape); });
}

// ---------------------------------------------------------------------------

bool mapping_algebra() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst[7] = {};
  for (int t = 0; t < 1000; ++t) {
    const int r = dim(rng), c = dim(rng), k = dim(rng);
    const ComplexMatrix a = test::random_complex(r, c, rng), b = test::random_complex(r, c, rng);
    const ComplexMatrix d = test::random_complex(c, k, rng);
    const ComplexVector x = test::random_vector(c, rng), y = test::random_vector(r, rng);
    using linmap::real_map_matrix;
    using linmap::real_map_vector;
    const RealMatrix ra = real_map_matrix(a);

    worst[0] = std::max(worst[0], rel_err(real_map_matrix(a + b), ra + real_map_matrix(b)));
    worst[1] = std::max(worst[1], rel_err(RealMatrix(ra * real_map_matrix(d)), real_map_matrix(a * d)));
    worst[2] = std::max(worst[2], rel_err(RealVector(ra * real_map_vector(x)), real_map_vector(a * x)));
    worst[3] = std::max(worst[3], rel_err(RealMatrix(ra.transpose()), real_map_matrix(a.adjoint())));

    const int n = dim(rng);
    const ComplexMatrix sq = test::random_complex(n, n, rng) + 2.0 * ComplexMatrix::Identity(n, n);
    worst[4] = std::max(worst[4], rel_err(RealMatrix(real_map_matrix(sq).partialPivLu().inverse()),
                                          real_map_matrix(sq.partialPivLu().inverse())));

    const int cols = dim(rng, 1, 12), rows = cols + dim(rng, 0, 4);
    const ComplexMatrix tall = test::random_complex(rows, cols, rng);
    const ComplexVector z = test::random_vector(rows, rng);
    const RealMatrix rt = real_map_matrix(tall);
    const RealVector pinv = (rt.transpose() * rt).ldlt().solve(rt.transpose() * real_map_vector(z));
    const ComplexVector pinv_c = (tall.adjoint() * tall).partialPivLu().solve(tall.adjoint() * z);
    worst[5] = std::max(worst[5], rel_err(pinv, real_map_vector(pinv_c)));

    const double lambda = 0.01 + 2.0 * rng.uniform();
    const RealMatrix lhs = ra.transpose() * ra + lambda * RealMatrix::Identity(2 * c, 2 * c);
    const RealVector reg = lhs.ldlt().solve(ra.transpose() * real_map_vector(y));
    const ComplexMatrix clhs = a.adjoint() * a + lambda * ComplexMatrix::Identity(c, c);
    worst[6] = std::max(worst[6], rel_err(reg, real_map_vector(clhs.partialPivLu().solve(a.adjoint() * y))));
  }
  const double elapsed = seconds_since(t0);
  const char* names[7] = {"sum", "product", "matrix-vector", "adjoint", "inverse", "pseudo-inverse",
                          "regularized inverse"};
  Verdict v;
  for (int i = 0; i < 7; ++i) v.check(worst[i] <= 1e-9, "%-20s worst rel err %.2e (1000 instances)", names[i], worst[i]);
  v.check(elapsed < 10, "runtime %.2f s < 10 s", elapsed);
  return v.ok;
}

bool oracle_equivalence() {
  const auto t0 = Clock::now();
  Verdict v;
  const DeviceModel ideal = noiseless(preset("ta_taox_pt"));
  Rng rng(202);
  for (int n : {4, 32, 1024}) {
    for (auto dir : {ofdm::Direction::forward, ofdm::Direction::inverse}) {
      const ofdm::BuiltDft built = ofdm::build_dft_operator(n, dir, ideal, exact_options(), rng);
      double worst = 0;
      for (int t = 0; t < 5; ++t) {
        const ComplexVector x = test::random_vector(n, rng);
        const int sign = dir == ofdm::Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
        worst = std::max(worst, rel_err(ofdm::dft_apply(built.op, x, rng), fftw_unitary(x, sign)));
      }
      v.check(worst <= 1e-9, "crossbar %s DFT n_c=%-4d vs FFTW: %.2e",
              dir == ofdm::Direction::forward ? "forward" : "inverse", n, worst);
    }
  }
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const ComplexMatrix h = channel::sample_matrix(4, 4, rng);
    const ComplexVector y = test::random_vector(4, rng);
    const auto mode = t % 2 ? mimo::DetectorMode::zf : mimo::DetectorMode::lmmse;
    // Scale so no channel entry is clipped by the three-sigma encoding.
    const double sigma_value = linmap::real_map_matrix(h).cwiseAbs().maxCoeff() / 3.0;
    const mimo::BuiltBank b = mimo::build_detector_bank(h, 20, mode, ideal, exact_options(), 1, rng, sigma_value);
    worst = std::max(worst, rel_err(mimo::detect_crossbar(b.bank, y, rng), mimo::detect_digital(h, y, 20, mode)));
  }
  v.check(worst <= 1e-9, "crossbar detector vs digital, 1000 4x4 channels: %.2e", worst);
  const double elapsed = seconds_since(t0);
  v.check(elapsed < 30, "runtime %.2f s < 30 s", elapsed);
  return v.ok;
}

bool latency_bounds() {
  const auto t0 = Clock::now();
  Verdict v;
  for (const auto& name : preset_names()) {
    const DeviceModel m = preset(name);
    for (Scheme s : {Scheme::without_verification, Scheme::with_verification}) {
      for (int n : {2, 4, 8, 16, 32}) {
        Rng rng = Rng::substream(303, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s)});
        const latency::McLatency mc = latency::mc_write_latency(n, n, m, s, latency::McMode::analytic, 200, rng);
        const double bound = latency::latency_bound(s, n, n, m).bound;
        v.check(mc.mean <= bound, "%-11s %-22s n=%-2d mc %.4e +- %.1e s  bound %.4e s  ratio %.3f", name.c_str(),
                to_string(s), n, mc.mean, mc.ci95, bound, mc.mean / bound);
      }
    }
  }
  const double elapsed = seconds_since(t0);
  v.check(elapsed < 120, "runtime %.2f s < 120 s", elapsed);
  return v.ok;
}

bool first_passage_law() {
  Verdict v;
  auto run = [](const DeviceModel& m, double fraction, std::vector<double>& times, long& failures) {
    const double delta_g = fraction * m.range();
    Rng rng(404);
    failures = 0;
    for (int t = 0; t < 10000; ++t) {
      const double s = latency::sample_discrete_fpt(delta_g, m, rng);
      if (s < 0) ++failures;
      else times.push_back(s);
    }
    return delta_g;
  };

  // Pulse-level walk in the small-step regime the diffusion limit describes.
  DeviceModel fine = preset("ta_taox_pt");
  fine.name = "fine";
  fine.n_states = 4096;
  fine.gamma_pot = fine.gamma_dep = 0.001;
  fine.sigma_read = 0;
  std::vector<double> times;
  long failures = 0;
  double delta_g = run(fine, 0.5, times, failures);
  DriftParams d = drift_params(fine);
  double mean = delta_g / d.mu, shape = (delta_g / d.sigma) * (delta_g / d.sigma);
  double got = test::moments(times).mean;
  v.check(failures == 0, "N_p=4096, gamma=0.1%%: %ld of 10000 walks ran out of pulses", failures);
  v.check(std::abs(got / mean - 1) <= 0.05, "mean %.4e s vs dG/mu %.4e s (%.2f%%)", got, mean, 100 * (got / mean - 1));
  const double ks = ks_to_ig(times, mean, shape);
  v.check(ks < 0.05, "KS distance to IG(dG/mu, (dG/sigma)^2) = %.4f", ks);

  // The characterized Ta/TaOx/Pt cell takes ~100 pulses per half range with
  // noise ten times the step; shown for reference only.
  DeviceModel ta = preset("ta_taox_pt");
  ta.sigma_read = 0;
  times.clear();
  delta_g = run(ta, 0.5, times, failures);
  d = drift_params(ta);
  mean = delta_g / d.mu;
  shape = (delta_g / d.sigma) * (delta_g / d.sigma);
  got = test::moments(times).mean;
  info("ta_taox_pt: mean %.4e s vs %.4e s (%+.1f%%), KS %.4f, %ld walks ran out", got, mean,
       100 * (got / mean - 1), ks_to_ig(times, mean, shape), failures);
  return v.ok;
}

bool communication_curves() {
  const auto t0 = Clock::now();
  Verdict v;
  FrameConfig base;
  base.n_c = 64;
  base.fading = Fading::identity;
  const std::vector<double> snrs = {10, 15, 20, 25, 30};

  FrameConfig digital = base;
  digital.backend = Backend::digital;
  const auto dig = summarize(sweep(digital, SweepVariable::snr, snrs, 20));
  const auto wv = summarize(sweep(base, SweepVariable::snr, snrs, 20));
  FrameConfig blind = base;
  blind.scheme = Scheme::without_verification;
  const auto wov = summarize(sweep(blind, SweepVariable::snr, {20}, 20));

  for (std::size_t i = 0; i < snrs.size(); ++i) {
    v.check(std::abs(dig[i].mer_db - snrs[i]) <= 0.5, "digital  SNR %2.0f dB: MER %6.2f dB (|diff| <= 0.5)", snrs[i],
            dig[i].mer_db);
  }
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    v.check(dig[i].mer_db - wv[i].mer_db <= 3, "verified SNR %2.0f dB: MER %6.2f dB, %.2f dB below digital (<= 3)",
            snrs[i], wv[i].mer_db, dig[i].mer_db - wv[i].mer_db);
  }
  const double wv20 = wv[2].ber;
  v.check(wov[0].ber >= 10 * wv20, "20 dB BER: blind %.3e vs verified %.3e (ratio %.1f >= 10)", wov[0].ber, wv20,
          wv20 > 0 ? wov[0].ber / wv20 : INFINITY);
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    info("SNR %2.0f dB  BER digital %.3e  verified %.3e", snrs[i], dig[i].ber, wv[i].ber);
  }
  info("blind writes at 20 dB: MER %.2f dB", wov[0].mer_db);
  const double elapsed = seconds_since(t0);
  v.check(elapsed < 300, "runtime %.1f s < 300 s", elapsed);
  return v.ok;
}

bool headline_figures() {
  Verdict v;
  FrameConfig cfg;  // default frame: 1024 sub-carriers, 4 x 4, 2240 symbols, flat fading
  Rng rng(cfg.seed);
  const FrameResult r = run_frame(cfg, rng);
  const double lat_target = 0.2278e-3, thr_target = 160.8e9;
  v.check(std::abs(r.latency() / lat_target - 1) <= 0.3, "latency %.4e s vs 0.2278 ms (%+.1f%%, within 30%%)",
          r.latency(), 100 * (r.latency() / lat_target - 1));
  v.check(std::abs(r.throughput / thr_target - 1) <= 0.3, "throughput %.2f Gb/s vs 160.8 Gb/s (%+.1f%%, within 30%%)",
          r.throughput / 1e9, 100 * (r.throughput / thr_target - 1));
  info("latency: detector programming %.3e s, data %.3e s, %lld bits", r.latency_program, r.latency_data,
       r.frame_bits);
  info("frame BER %.3e, MER %.2f dB", r.metrics.ber, r.metrics.mer_db);
  {
    FrameConfig seq = cfg;
    seq.sequential_pairs = true;
    seq.simulate_data = false;
    Rng rs(cfg.seed);
    const FrameResult s = run_frame(seq, rs);
    info("left/right pairs programmed in sequence: latency %.4e s, throughput %.2f Gb/s", s.latency(),
         s.throughput / 1e9);
  }

  // Energy model: every pulse dissipates V^2 G dt at its instantaneous conductance.
  info("energy model: V^2 G dt per pulse; reads at %.2f V", cfg.device.v_read);
  info("energy: detector programming %.4e J, reads %.4e J, total %.4e J (%.3e J/b)", r.energy_program, r.energy_data,
       r.energy(), r.energy() / static_cast<double>(r.frame_bits));

  FrameConfig sweep_cfg = cfg;
  sweep_cfg.simulate_data = false;
  FrameConfig blind_cfg = sweep_cfg;
  blind_cfg.scheme = Scheme::without_verification;
  const std::vector<double> sizes = {2, 4, 8, 16, 32};
  const auto wv = summarize(sweep(sweep_cfg, SweepVariable::antennas, sizes, 1));
  const auto wov = summarize(sweep(blind_cfg, SweepVariable::antennas, sizes, 1));
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    info("N=%2.0f  energy verified %.4e J  blind %.4e J  latency verified %.4e s  blind %.4e s", sizes[i],
         wv[i].energy_mean, wov[i].energy_mean, wv[i].latency_mean, wov[i].latency_mean);
  }
  bool rising_wv = true, rising_wov = true, above = true;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) {
      rising_wv = rising_wv && wv[i].energy_mean > wv[i - 1].energy_mean;
      rising_wov = rising_wov && wov[i].energy_mean > wov[i - 1].energy_mean;
    }
    above = above && wv[i].energy_mean > wov[i].energy_mean;
  }
  v.check(rising_wv && rising_wov, "frame energy strictly increases with antenna count (both schemes)");
  v.check(above, "verified-write energy exceeds blind-write energy at every size");
  return v.ok;
}

bool cost_arithmetic() {
  Verdict v;
  const DigitalCost c = digital_cost(DigitalWorkload{}, combined_65nm_profile());
  auto at4 = [](double x) { return std::round(x * 1e4) / 1e4; };
  v.check(at4(c.latency()) == 0.0502, "latency %.10f s -> %.4f s (0.0502)", c.latency(), at4(c.latency()));
  v.check(at4(c.energy()) == 0.0053, "energy  %.10f J -> %.4f J (0.0053)", c.energy(), at4(c.energy()));
  info("FFT %.4e s / %.4e J, detection %.4e s / %.4e J", c.fft_latency, c.fft_energy, c.detect_latency,
       c.detect_energy);
  return v.ok;
}

bool experimental_scale() {
  Verdict v;
  FrameConfig link;  // single-antenna link of the hardware demonstration
  link.n_c = 32;
  link.n_t = link.n_r = link.pilots = 1;
  link.symbols = 800;
  link.fading = Fading::identity;
  link.snr_db = 20;

  FrameConfig digital = link;
  digital.backend = Backend::digital;
  Rng rd(digital.seed);
  const FrameResult d = run_frame(digital, rd);
  v.check(std::abs(d.metrics.mer_db - 20) <= 1, "digital 32-sub-carrier link at 20 dB: MER %.2f dB", d.metrics.mer_db);
  v.check(d.metrics.bits >= 100000 && d.metrics.bit_errors == 0, "digital: %lld bit errors in %lld bits",
          d.metrics.bit_errors, d.metrics.bits);

  FrameConfig faulty = link;
  faulty.p_stuck_on = faulty.p_stuck_off = 0.005;
  modem::Metrics raw{}, fixed{};
  for (int s = 1; s <= 3; ++s) {
    faulty.seed = static_cast<std::uint64_t>(s);
    faulty.defect_correction = false;
    Rng a(faulty.seed);
    raw = modem::merge_metrics(raw, run_frame(faulty, a).metrics);
    faulty.defect_correction = true;
    Rng b(faulty.seed);
    fixed = modem::merge_metrics(fixed, run_frame(faulty, b).metrics);
  }
  const double gain = fixed.ber > 0 ? raw.ber / fixed.ber : INFINITY;
  v.check(gain >= 10, "1%% stuck DFT cells: BER %.3e raw, %.3e corrected (x%.1f >= 10)", raw.ber, fixed.ber, gain);

  // Detected-symbol error against the digital detector on the same input.
  const DeviceModel m = preset("ta_taox_pt");
  double var[2] = {};
  for (int k : {1, 2}) {
    Rng rng(808);
    double acc = 0;
    long n = 0;
    for (int t = 0; t < 400; ++t) {
      const ComplexMatrix h = channel::sample_matrix(4, 4, rng);
      const mimo::BuiltBank b = mimo::build_detector_bank(h, 20, mimo::DetectorMode::lmmse, m, {}, k, rng);
      for (int s = 0; s < 8; ++s) {
        const ComplexVector y = test::random_vector(4, rng);
        const ComplexVector want = mimo::detect_digital(h, y, 20, mimo::DetectorMode::lmmse);
        acc += (mimo::detect_crossbar(b.bank, y, rng) - want).squaredNorm();
        n += 4;
      }
    }
    var[k - 1] = acc / static_cast<double>(n);
  }
  const double ratio = var[0] / var[1];
  v.check(ratio >= 1.8 && ratio <= 2.2, "two devices per value: error variance %.3e -> %.3e (ratio %.3f in [1.8, 2.2])",
          var[0], var[1], ratio);
  return v.ok;
}

bool gray_table() {
  Verdict v;
  const char* table[16][2] = {{"0000", "0000"}, {"0001", "0001"}, {"0010", "0011"}, {"0011", "0010"},
                              {"0100", "0110"}, {"0101", "0111"}, {"0110", "0101"}, {"0111", "0100"},
                              {"1000", "1100"}, {"1001", "1101"}, {"1010", "1111"}, {"1011", "1110"},
                              {"1100", "1010"}, {"1101", "1011"}, {"1110", "1001"}, {"1111", "1000"}};
  auto bits_of = [](const char* s) {
    modem::Bits b;
    for (; *s; ++s) b.push_back(static_cast<std::uint8_t>(*s - '0'));
    return b;
  };
  int rows = 0;
  for (const auto& row : table) {
    const modem::Bits bin = bits_of(row[0]), gray = bits_of(row[1]);
    rows += modem::bin_to_gray(bin) == gray && modem::gray_to_bin(gray) == bin;
  }
  v.check(rows == 16, "%d of 16 table rows match", rows);
  bool bijective = true;
  for (int w = 1; w <= 16; ++w) {
    std::vector<bool> seen(1u << w, false);
    for (std::uint32_t x = 0; x < (1u << w); ++x) {
      const std::uint32_t g = modem::bin_to_gray(x);
      bijective = bijective && g < (1u << w) && !seen[g] && modem::gray_to_bin(g) == x;
      if (g < (1u << w)) seen[g] = true;
    }
  }
  v.check(bijective, "bijection with exact inverse for widths 1-16");
  return v.ok;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "mapping algebra", mapping_algebra},
      {2, "oracle equivalence", oracle_equivalence},
      {3, "latency bounds", latency_bounds},
      {4, "first-passage law", first_passage_law},
      {5, "communication curves", communication_curves},
      {6, "headline figures", headline_figures},
      {7, "cost arithmetic", cost_arithmetic},
      {8, "experimental-scale checks", experimental_scale},
      {9, "gray table", gray_table},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    std::printf("criterion %d: %s\n", c.id, c.title);
    std::fflush(stdout);
    const auto t0 = Clock::now();
    const bool ok = c.run();
    std::printf("CRITERION %d %s  %s  (%.1f s)\n", c.id, ok ? "PASS" : "FAIL", c.title, seconds_since(t0));
    std::fflush(stdout);
    failed += !ok;
  }
  return failed == 0 ? 0 : 1;
}
