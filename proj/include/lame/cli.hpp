#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lame/params.hpp"
#include "lame/series.hpp"

namespace lame::cli {

enum class Mode { Infinite, Polynomial };
enum class OutputFormat { Human, Csv, Json };

// Exit codes of `lame_cli`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitTolerance = 4;

struct RunConfig {
  LameParams params;
  IndicialRoot kind = IndicialRoot::first_kind();
  Mode mode = Mode::Infinite;
  std::optional<PolynomialSpec> spec;  // present iff mode == Polynomial
  std::vector<double> x_values;
  TruncationSpec trunc{40, 60, 1e-12};
  OutputFormat output = OutputFormat::Human;
  bool force = false;
  Precision precision = Precision::Double;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// "0.1,0.2,0.3" or "start:stop:step" (stop included when hit to within 1e-9 steps).
std::vector<double> parse_x_values(const std::string& text);

// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lame::cli
