#pragma once

// Write-latency theory for row-by-row programming of a real-mapped channel.
//
// Under the drift-diffusion device model a cell that needs an increase dG
// takes dG / mu when pulsed blindly, and an inverse-Gaussian first-passage
// time IG(dG / mu, (dG / sigma)^2) when every pulse is verified. With
// Rayleigh entries scaled by the three-sigma rule, dG is half-normal with
// standard deviation G / 3 (G the full conductance range). A row costs the
// slowest of its 2 N_t cells and the 2 N_r rows are written in sequence.

#include <cstdint>
#include <string>

#include "rrambb/crossbar.hpp"
#include "rrambb/device.hpp"
#include "rrambb/rng.hpp"

namespace rrambb::latency {

struct WriteEndState {
  double time;      // s
  double end_mean;  // S, starting from g_min
  double end_var;   // S^2
};

/// Blind-write time and end-state distribution for an increase of `delta_g`.
WriteEndState wwov_end_state(double delta_g, const DeviceModel& model);

/// One draw from IG(delta_g / mu, (delta_g / sigma)^2), the continuous
/// first-passage time of the drift-diffusion model. Exact transformation
/// sampler (Michael, Schucany and Haas 1976).
double sample_fpt(double delta_g, const DeviceModel& model, Rng& rng);

/// Inverse-Gaussian density and distribution with mean `mean` and shape `shape`.
double inverse_gaussian_pdf(double t, double mean, double shape);
double inverse_gaussian_cdf(double t, double mean, double shape);

struct LatencyBound {
  Scheme scheme;
  int n_t;
  int n_r;
  double bound;  // s
  /// Which side of the min{} realized the verified-write bound (0 or 1); 0 for blind writes.
  int branch = 0;
  /// The closed forms assume g_min = 0; the full range g_max - g_min stands in for G_max.
  bool range_substituted = false;
};

LatencyBound latency_bound(Scheme scheme, int n_t, int n_r, const DeviceModel& model);

/// ln(4 N_t) at which the two verified-write branches meet.
double branch_switch_log(const DeviceModel& model);

enum class McMode : std::uint8_t { analytic, discrete };
const char* to_string(McMode mode);
McMode mc_mode_from_string(const std::string& s);

struct McLatency {
  int trials = 0;
  double mean = 0;        // s, write-only latency (comparable with the bounds)
  double ci95 = 0;        // s, half-width; NaN when trials == 1
  bool ci_defined = false;
  double total_mean = 0;  // s, including reset and read pulses (discrete mode)
  double total_ci95 = 0;
};

/// Monte Carlo of the array write latency for an n_r x n_t channel.
McLatency mc_write_latency(int n_t, int n_r, const DeviceModel& model, Scheme scheme, McMode mode,
                           int trials, Rng& rng);

/// Pulse-level first passage: a fully reset cell is potentiated with a read
/// after every pulse until a read first reaches g_min + delta_g. Returns the
/// elapsed write time, or a negative value if `max_pulses` ran out.
double sample_discrete_fpt(double delta_g, const DeviceModel& model, Rng& rng, long max_pulses = 0);

}  // namespace rrambb::latency
