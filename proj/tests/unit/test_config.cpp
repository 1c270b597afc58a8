#include <gtest/gtest.h>

#include <cmath>

#include "rrambb/config.hpp"

using namespace rrambb;

namespace {

std::string key_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST(Config, EmptyGivesDefaults) {
  const RunConfig c = parse_config_text("");
  EXPECT_EQ(c, RunConfig{});
  EXPECT_EQ(c.frame.n_c, 1024);
  EXPECT_EQ(c.frame.n_t, 4);
  EXPECT_EQ(c.frame.n_r, 4);
  EXPECT_EQ(c.frame.symbols, 2240);
  EXPECT_EQ(c.frame.device, preset("ta_taox_pt"));
}

TEST(Config, ParsesSections) {
  const RunConfig c = parse_config_text(R"(# comment
[frame]
n_c = 64      # trailing comment
n_t = 2
n_r = 2
pilots = 2
symbols = 104
snr_db = inf
flat = false

[receiver]
backend = "digital"
scheme = "without_verification"
detector = "zf"

[device]
preset = "ftj_10ns"
copies = 2
sigma_read = 0.0

[sweep]
snr_db = [0, 5.5, 10]
trials = 3

[bounds]
mode = "discrete"

[output]
dir = "out"
)");
  EXPECT_EQ(c.frame.n_c, 64);
  EXPECT_TRUE(std::isinf(c.frame.snr_db));
  EXPECT_FALSE(c.frame.flat);
  EXPECT_EQ(c.frame.backend, Backend::digital);
  EXPECT_EQ(c.frame.scheme, Scheme::without_verification);
  EXPECT_EQ(c.frame.detector, mimo::DetectorMode::zf);
  EXPECT_EQ(c.device_preset, "ftj_10ns");
  EXPECT_EQ(c.frame.device.g_max, preset("ftj_10ns").g_max);
  EXPECT_EQ(c.frame.device.sigma_read, 0.0);
  EXPECT_EQ(c.frame.copies, 2);
  EXPECT_EQ(c.snr_values, (std::vector<double>{0, 5.5, 10}));
  EXPECT_EQ(c.trials, 3);
  EXPECT_EQ(c.bound_mode, latency::McMode::discrete);
  EXPECT_EQ(c.output_dir, "out");
}

TEST(Config, ValidationNamesKey) {
  EXPECT_EQ(key_of("[frame]\nn_t = 0\n"), "n_t");
  EXPECT_EQ(key_of("[frame]\nn_c = 100\n"), "n_c");
  EXPECT_EQ(key_of("[frame]\nbogus = 1\n"), "frame.bogus");
  EXPECT_EQ(key_of("[device]\npreset = \"nope\"\n"), "device");
  EXPECT_EQ(key_of("[receiver]\nscheme = \"sometimes\"\n"), "scheme");
}

TEST(Config, ParseErrorsCarryLine) {
  for (auto [text, line] : {std::pair<std::string, int>{"[frame]\nn_c 64\n", 2},
                            {"\n\n[frame\n", 3},
                            {"[frame]\nn_c = 64\nn_c = 32\n", 3},
                            {"[frame]\nsnr_db = \"x\n", 2},
                            {"[nosuch]\n", 1}}) {
    try {
      parse_config_text(text);
      ADD_FAILURE() << text;
    } catch (const ConfigParseError& e) {
      EXPECT_EQ(e.line(), line) << text;
    } catch (const ConfigError& e) {
      ADD_FAILURE() << "unexpected ConfigError for " << text << ": " << e.what();
    }
  }
}

TEST(Config, EmitRoundTrip) {
  RunConfig c = parse_config_text("[frame]\nn_c = 32\nsnr_db = 17.25\n[device]\npreset = \"fefet\"\ngamma_pot = 0.0123\n");
  c.frame.seed = 12345678901ULL;
  c.frame.fading = Fading::identity;
  c.bound_sizes = {3, 5};
  EXPECT_EQ(parse_config_text(emit_config(c)), c);
  EXPECT_EQ(parse_config_text(emit_config(RunConfig{})), RunConfig{});
}

TEST(Config, MissingFile) { EXPECT_THROW(parse_config_file("/nonexistent/run.toml"), ConfigError); }
