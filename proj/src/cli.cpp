#include "lame/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lame/domain.hpp"
#include "lame/hypergeometric.hpp"
#include "lame/recurrence.hpp"

namespace lame::cli {
namespace {

using nlohmann::json;

// x outside the convergence region without --force.
class DomainViolation : public Error {
 public:
  using Error::Error;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string jnum(double v) { return std::isfinite(v) ? num(v) : "null"; }

std::string jstr(const std::string& s) {
  std::string r = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') r += '\\';
    r += ch;
  }
  return r + "\"";
}

std::string mode_name(Mode m) { return m == Mode::Polynomial ? "polynomial" : "infinite"; }
std::string sign_name(Sign s) { return s == Sign::Minus ? "minus" : "plus"; }
std::string output_name(OutputFormat o) {
  switch (o) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    default: return "human";
  }
}

// Everything the user can set, before merging with a config file.
struct RawOptions {
  std::optional<double> a, b, c, q, alpha, tol;
  std::optional<int> n_max, i_max;
  std::optional<std::string> lambda, mode, alpha_seq, sign, x, output, config;
  bool force = false;
};

void add_common_options(CLI::App& sub, RawOptions& raw) {
  sub.add_option("--a", raw.a, "singular point a (expansion point)");
  sub.add_option("--b", raw.b, "singular point b");
  sub.add_option("--c", raw.c, "singular point c");
  sub.add_option("--q", raw.q, "accessory parameter q");
  sub.add_option("--alpha", raw.alpha, "degree parameter alpha");
  sub.add_option("--lambda", raw.lambda, "indicial root: 0 (first kind) or half (second kind)")
      ->check(CLI::IsMember({"0", "half"}));
  sub.add_option("--mode", raw.mode, "infinite or polynomial")
      ->check(CLI::IsMember({"infinite", "polynomial"}));
  sub.add_option("--alpha-seq", raw.alpha_seq, "polynomial family alpha_0,...,alpha_j");
  sub.add_option("--sign", raw.sign, "polynomial alpha branch: plus or minus")
      ->check(CLI::IsMember({"plus", "minus"}));
  sub.add_option("--x", raw.x, "x values: v1,v2,... or start:stop:step");
  sub.add_option("--n-max", raw.n_max, "number of sub-series (outer cutoff)");
  sub.add_option("--i-max", raw.i_max, "inner summation cutoff");
  sub.add_option("--tol", raw.tol, "stopping / comparison tolerance");
  sub.add_flag("--force", raw.force, "evaluate outside the convergence region");
  sub.add_option("--output", raw.output, "human, csv or json")
      ->check(CLI::IsMember({"human", "csv", "json"}));
  sub.add_option("--config", raw.config, "JSON config file; flags override it");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad integer in list: '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number: '" + s + "'");
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  // A previous JSON output carries its settings under "config".
  if (j.is_object() && j.contains("config")) j = j.at("config");
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  return j;
}

template <typename T>
std::optional<T> from_file(const json& file, const char* key) {
  if (!file.contains(key)) return std::nullopt;
  try {
    return file.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

// A JSON value that may be a string or something else we render as text.
std::optional<std::string> text_from_file(const json& file, const char* key) {
  if (!file.contains(key)) return std::nullopt;
  const json& v = file.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return num(v.get<double>());
  throw ConfigError(std::string("config key '") + key + "' has the wrong type");
}

template <typename T>
std::optional<T> pick(const std::optional<T>& flag, const std::optional<T>& file) {
  return flag ? flag : file;
}

struct Merged {
  RunConfig cfg;
  bool have_abc = false;
  bool alpha_given = false;
};

Merged build_config(const RawOptions& raw) {
  const json file = raw.config ? load_config(*raw.config) : json::object();
  Merged m;
  RunConfig& cfg = m.cfg;

  const auto a = pick(raw.a, from_file<double>(file, "a"));
  const auto b = pick(raw.b, from_file<double>(file, "b"));
  const auto c = pick(raw.c, from_file<double>(file, "c"));
  m.have_abc = a && b && c;
  if (m.have_abc) {
    cfg.params.a = *a;
    cfg.params.b = *b;
    cfg.params.c = *c;
  }
  cfg.params.q = pick(raw.q, from_file<double>(file, "q")).value_or(0.0);
  const auto alpha = pick(raw.alpha, from_file<double>(file, "alpha"));
  m.alpha_given = alpha.has_value();
  cfg.params.alpha = alpha.value_or(0.0);

  const auto lambda = pick(raw.lambda, text_from_file(file, "lambda")).value_or("0");
  if (lambda == "0") {
    cfg.kind = IndicialRoot::first_kind();
  } else if (lambda == "half" || lambda == "0.5") {
    cfg.kind = IndicialRoot::second_kind();
  } else {
    throw ConfigError("lambda must be 0 or half");
  }

  const auto mode = pick(raw.mode, from_file<std::string>(file, "mode")).value_or("infinite");
  if (mode == "infinite") {
    cfg.mode = Mode::Infinite;
  } else if (mode == "polynomial") {
    cfg.mode = Mode::Polynomial;
  } else {
    throw ConfigError("mode must be infinite or polynomial");
  }

  std::optional<std::vector<int>> seq;
  if (raw.alpha_seq) {
    seq = parse_int_list(*raw.alpha_seq);
  } else if (file.contains("alpha_seq")) {
    const json& v = file.at("alpha_seq");
    if (v.is_string()) {
      seq = parse_int_list(v.get<std::string>());
    } else {
      seq = from_file<std::vector<int>>(file, "alpha_seq");
    }
  }
  const auto sign = pick(raw.sign, from_file<std::string>(file, "sign"));
  if (cfg.mode == Mode::Polynomial) {
    if (!seq) throw ConfigError("polynomial mode needs --alpha-seq");
    PolynomialSpec spec;
    spec.alpha_seq = *seq;
    spec.j = static_cast<int>(seq->size()) - 1;
    const std::string sg = sign.value_or("plus");
    if (sg != "plus" && sg != "minus") throw ConfigError("sign must be plus or minus");
    spec.sign = sg == "minus" ? Sign::Minus : Sign::Plus;
    spec.validate();
    const double implied = polynomial_alpha(spec, cfg.kind);
    if (m.alpha_given && cfg.params.alpha != implied) {
      throw ConfigError("--alpha " + num(cfg.params.alpha) +
                        " conflicts with the polynomial family (alpha = " + num(implied) + ")");
    }
    cfg.params.alpha = implied;
    cfg.spec = spec;
  } else if (seq || sign) {
    throw ConfigError("--alpha-seq/--sign only apply to --mode polynomial");
  }

  std::optional<std::string> xs = raw.x;
  if (!xs && file.contains("x")) {
    const json& v = file.at("x");
    if (v.is_array()) {
      try {
        for (const auto& e : v) cfg.x_values.push_back(e.get<double>());
      } catch (const json::exception&) {
        throw ConfigError("config key 'x' must hold numbers");
      }
    } else {
      xs = text_from_file(file, "x");
    }
  }
  if (xs) cfg.x_values = parse_x_values(*xs);

  if (auto v = pick(raw.n_max, from_file<int>(file, "n_max"))) cfg.trunc.n_max = *v;
  if (auto v = pick(raw.i_max, from_file<int>(file, "i_max"))) cfg.trunc.i_max = *v;
  if (auto v = pick(raw.tol, from_file<double>(file, "tol"))) cfg.trunc.tol = *v;
  try {
    cfg.trunc.validate();
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }

  cfg.force = raw.force || from_file<bool>(file, "force").value_or(false);

  const auto out = pick(raw.output, from_file<std::string>(file, "output")).value_or("human");
  if (out == "human") {
    cfg.output = OutputFormat::Human;
  } else if (out == "csv") {
    cfg.output = OutputFormat::Csv;
  } else if (out == "json") {
    cfg.output = OutputFormat::Json;
  } else {
    throw ConfigError("output must be human, csv or json");
  }

  const char* env = std::getenv("LAME_PRECISION");
  const std::string prec = env ? env : "double";
  if (prec == "double") {
    cfg.precision = Precision::Double;
  } else if (prec == "extended") {
    cfg.precision = Precision::Extended;
  } else {
    throw ConfigError("LAME_PRECISION must be double or extended");
  }
  return m;
}

std::string config_json(const RunConfig& cfg) {
  std::string s = "{";
  s += "\"a\":" + jnum(cfg.params.a) + ",\"b\":" + jnum(cfg.params.b) +
       ",\"c\":" + jnum(cfg.params.c) + ",\"q\":" + jnum(cfg.params.q) +
       ",\"alpha\":" + jnum(cfg.params.alpha);
  s += ",\"lambda\":" + jstr(cfg.kind.name());
  s += ",\"mode\":" + jstr(mode_name(cfg.mode));
  if (cfg.spec) {
    s += ",\"alpha_seq\":[";
    for (std::size_t i = 0; i < cfg.spec->alpha_seq.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(cfg.spec->alpha_seq[i]);
    }
    s += "],\"sign\":" + jstr(sign_name(cfg.spec->sign));
  }
  s += ",\"x\":[";
  for (std::size_t i = 0; i < cfg.x_values.size(); ++i) {
    if (i) s += ",";
    s += jnum(cfg.x_values[i]);
  }
  s += "],\"n_max\":" + std::to_string(cfg.trunc.n_max) +
       ",\"i_max\":" + std::to_string(cfg.trunc.i_max) + ",\"tol\":" + jnum(cfg.trunc.tol);
  s += std::string(",\"force\":") + (cfg.force ? "true" : "false");
  s += ",\"output\":" + jstr(output_name(cfg.output)) + "}";
  return s;
}

std::string header_line(const std::string& cmd, const RunConfig& cfg) {
  std::string s = "# " + cmd + " a=" + num(cfg.params.a) + " b=" + num(cfg.params.b) +
                  " c=" + num(cfg.params.c) + " q=" + num(cfg.params.q) +
                  " alpha=" + num(cfg.params.alpha) + " lambda=" + cfg.kind.name() +
                  " mode=" + mode_name(cfg.mode);
  if (cfg.mode == Mode::Infinite) {
    s += " n_max=" + std::to_string(cfg.trunc.n_max) + " i_max=" + std::to_string(cfg.trunc.i_max);
  }
  return s + "\n";
}

// Evaluates f on every x, possibly concurrently; results keep input order. The
// first failure in input order is rethrown.
template <typename Row, typename F>
std::vector<Row> sweep(const std::vector<double>& xs, F f) {
  std::vector<Row> rows(xs.size());
  std::vector<std::exception_ptr> errs(xs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < xs.size(); i = next++) {
      try {
        rows[i] = f(xs[i]);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n = std::min(hw, xs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void require_x(const RunConfig& cfg) {
  if (cfg.x_values.empty()) throw ConfigError("no x values given (--x)");
}

void require_domain(const RunConfig& cfg, double x) {
  if (cfg.mode == Mode::Polynomial || cfg.force) return;
  const double r = convergence_metric(cfg.params, x);
  if (r >= 1.0 || radius_ratio(cfg.params, x) >= 1.0) {
    throw DomainViolation("x = " + num(x) + " is outside the convergence region (metric " +
                          num(r) + "); use --force to evaluate anyway");
  }
}

SeriesResult eval_3trf(const RunConfig& cfg, double x, const TruncationSpec& t) {
  if (cfg.mode == Mode::Polynomial) {
    const SingularPoints pts{cfg.params.a, cfg.params.b, cfg.params.c};
    return cfg.kind.is_half()
               ? lame_second_kind_polynomial(pts, *cfg.spec, cfg.params.q, x, t, cfg.precision)
               : lame_first_kind_polynomial(pts, *cfg.spec, cfg.params.q, x, t, cfg.precision);
  }
  return cfg.kind.is_half() ? lame_second_kind_infinite(cfg.params, x, t, cfg.precision)
                            : lame_first_kind_infinite(cfg.params, x, t, cfg.precision);
}

// ---- eval ------------------------------------------------------------------

struct EvalRow {
  double x = 0, value = 0, tail = 0, metric = 0;
  std::vector<double> sub;
};

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  require_x(cfg);
  cfg.params.validate();
  const auto rows = sweep<EvalRow>(cfg.x_values, [&](double x) {
    require_domain(cfg, x);
    const SeriesResult r = eval_3trf(cfg, x, cfg.trunc);
    return EvalRow{x, r.value, r.tail_estimate, convergence_metric(cfg.params, x), r.sub_values};
  });
  const std::string lam = cfg.kind.name();
  const std::string mode = mode_name(cfg.mode);
  if (cfg.output == OutputFormat::Csv) {
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.sub.size());
    out << "x,lambda,mode,value";
    for (std::size_t m = 0; m < width; ++m) out << ",y" << m;
    out << ",tail,metric\n";
    for (const auto& r : rows) {
      out << num(r.x) << ',' << lam << ',' << mode << ',' << num(r.value);
      for (std::size_t m = 0; m < width; ++m) {
        out << ',';
        if (m < r.sub.size()) out << num(r.sub[m]);
      }
      out << ',' << num(r.tail) << ',' << num(r.metric) << '\n';
    }
  } else if (cfg.output == OutputFormat::Json) {
    out << "{\"command\":\"eval\",\"config\":" << config_json(cfg) << ",\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      out << (i ? ",\n" : "\n") << "{\"x\":" << jnum(r.x) << ",\"lambda\":" << jstr(lam)
          << ",\"mode\":" << jstr(mode) << ",\"value\":" << jnum(r.value) << ",\"sub_values\":[";
      for (std::size_t m = 0; m < r.sub.size(); ++m) out << (m ? "," : "") << jnum(r.sub[m]);
      out << "],\"tail\":" << jnum(r.tail) << ",\"metric\":" << jnum(r.metric) << "}";
    }
    out << "\n]}\n";
  } else {
    out << header_line("eval", cfg);
    for (const auto& r : rows) {
      out << "x=" << num(r.x) << "  value=" << num(r.value) << "  terms=" << r.sub.size()
          << "  tail=" << num(r.tail) << "  metric=" << num(r.metric) << '\n';
    }
  }
  return kExitOk;
}

// ---- compare ---------------------------------------------------------------

struct CompareRow {
  double x = 0, y3 = 0, yo = 0, rel = 0;
};

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  require_x(cfg);
  cfg.params.validate();
  // Fixed depth on both sides: no early exit in the 3TRF sum.
  TruncationSpec fixed = cfg.trunc;
  fixed.tol = std::numeric_limits<double>::min();
  const int depth = cfg.mode == Mode::Polynomial ? polynomial_degree(*cfg.spec)
                                                 : 2 * cfg.trunc.i_max + cfg.trunc.n_max;
  const auto rows = sweep<CompareRow>(cfg.x_values, [&](double x) {
    require_domain(cfg, x);
    const double y3 = eval_3trf(cfg, x, fixed).value;
    double yo;
    if (depth >= 1) {
      yo = eval_frobenius(cfg.params, cfg.kind, x, depth, cfg.precision);
    } else {
      if (cfg.kind.is_half() && x < cfg.params.a) throw BranchError("x < a for second kind");
      yo = cfg.kind.is_half() ? std::sqrt(x - cfg.params.a) : 1.0;
    }
    const double rel = std::abs(y3 - yo) / std::max(std::abs(yo), 1e-300);
    return CompareRow{x, y3, yo, rel};
  });
  bool over = false;
  for (const auto& r : rows) over = over || !(r.rel <= cfg.trunc.tol);

  if (cfg.output == OutputFormat::Csv) {
    out << "x,y_3trf,y_oracle,rel_err\n";
    for (const auto& r : rows) {
      out << num(r.x) << ',' << num(r.y3) << ',' << num(r.yo) << ',' << num(r.rel) << '\n';
    }
  } else if (cfg.output == OutputFormat::Json) {
    out << "{\"command\":\"compare\",\"config\":" << config_json(cfg)
        << ",\"oracle_depth\":" << depth << ",\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      out << (i ? ",\n" : "\n") << "{\"x\":" << jnum(r.x) << ",\"y_3trf\":" << jnum(r.y3)
          << ",\"y_oracle\":" << jnum(r.yo) << ",\"rel_err\":" << jnum(r.rel) << "}";
    }
    out << "\n]}\n";
  } else {
    out << header_line("compare", cfg) << "# oracle depth " << depth << '\n';
    for (const auto& r : rows) {
      out << "x=" << num(r.x) << "  y_3trf=" << num(r.y3) << "  y_oracle=" << num(r.yo)
          << "  rel_err=" << num(r.rel) << '\n';
    }
  }
  return over ? kExitTolerance : kExitOk;
}

// ---- domain ----------------------------------------------------------------

std::string interval_text(const Interval& iv) { return "(" + num(iv.lo) + ", " + num(iv.hi) + ")"; }

std::string intervals_json(const std::vector<Interval>& ivs) {
  std::string s = "[";
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    if (i) s += ",";
    s += "[" + jnum(ivs[i].lo) + "," + jnum(ivs[i].hi) + "]";
  }
  return s + "]";
}

int cmd_domain(const RunConfig& cfg, std::ostream& out) {
  const DomainReport rep = domain_classify(cfg.params);
  const bool degenerate = rep.case_label == DomainCase::Degenerate;
  std::vector<double> metrics;
  for (double x : cfg.x_values) {
    metrics.push_back(degenerate ? std::numeric_limits<double>::quiet_NaN()
                                 : convergence_metric(cfg.params, x));
  }
  if (cfg.output == OutputFormat::Csv) {
    out << "kind,lo,hi\n";
    for (const auto& iv : rep.intervals) out << "interval," << num(iv.lo) << ',' << num(iv.hi) << '\n';
    for (const auto& iv : rep.table_intervals) {
      out << "table," << num(iv.lo) << ',' << num(iv.hi) << '\n';
    }
    out << "case," << case_name(rep.case_label) << ",\n";
    out << "table_discrepancy," << num(rep.table_discrepancy) << ",\n";
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      out << "metric," << num(cfg.x_values[i]) << ',' << num(metrics[i]) << '\n';
    }
  } else if (cfg.output == OutputFormat::Json) {
    out << "{\"command\":\"domain\",\"config\":" << config_json(cfg)
        << ",\"case\":" << jstr(case_name(rep.case_label))
        << ",\"condition\":" << jstr(case_condition(rep.case_label))
        << ",\"intervals\":" << intervals_json(rep.intervals)
        << ",\"table_intervals\":" << intervals_json(rep.table_intervals)
        << ",\"table_discrepancy\":" << jnum(rep.table_discrepancy) << ",\"metrics\":[";
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      out << (i ? "," : "") << "{\"x\":" << jnum(cfg.x_values[i]) << ",\"metric\":"
          << jnum(metrics[i]) << "}";
    }
    out << "]}\n";
  } else {
    out << "case: " << case_name(rep.case_label) << "  [" << case_condition(rep.case_label)
        << "]\n";
    if (degenerate) {
      out << "no solution: the expansion point coincides with another singular point\n";
    }
    for (const auto& iv : rep.intervals) out << "interval " << interval_text(iv) << '\n';
    if (!degenerate) {
      out << "table formulas:";
      for (const auto& iv : rep.table_intervals) out << ' ' << interval_text(iv);
      out << "\ntable discrepancy: " << num(rep.table_discrepancy) << '\n';
    }
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      out << "x=" << num(cfg.x_values[i]) << "  metric=" << num(metrics[i]) << '\n';
    }
  }
  return kExitOk;
}

// ---- residual --------------------------------------------------------------

struct ResidualRow {
  double x = 0;
  std::vector<std::pair<int, double>> cells;  // (N, residual)
};

double polynomial_residual(const RunConfig& cfg, const std::vector<long double>& c, double x) {
  if (cfg.precision == Precision::Extended) {
    return residual_from_coefficients(cfg.params, cfg.kind, std::span<const long double>(c), x);
  }
  const std::vector<double> d(c.begin(), c.end());
  return residual_from_coefficients(cfg.params, cfg.kind, std::span<const double>(d), x);
}

int cmd_residual(const RunConfig& cfg, std::ostream& out) {
  require_x(cfg);
  cfg.params.validate();
  if (cfg.mode == Mode::Infinite && cfg.trunc.n_max < 1) {
    throw ConfigError("residual needs --n-max >= 1");
  }
  // Extended keeps the power coefficients in long double as well.
  std::vector<long double> coeffs;
  if (cfg.mode == Mode::Polynomial) {
    const SingularPoints pts{cfg.params.a, cfg.params.b, cfg.params.c};
    if (cfg.precision == Precision::Extended) {
      coeffs = polynomial_power_coeffs<long double>(pts, *cfg.spec, cfg.params.q, cfg.kind);
    } else {
      const auto d = polynomial_power_coeffs(pts, *cfg.spec, cfg.params.q, cfg.kind);
      coeffs.assign(d.begin(), d.end());
    }
  }
  const auto rows = sweep<ResidualRow>(cfg.x_values, [&](double x) {
    require_domain(cfg, x);
    ResidualRow r{x, {}};
    if (cfg.mode == Mode::Polynomial) {
      r.cells.emplace_back(static_cast<int>(coeffs.size()) - 1,
                           polynomial_residual(cfg, coeffs, x));
    } else {
      for (int N : {cfg.trunc.n_max, 2 * cfg.trunc.n_max}) {
        r.cells.emplace_back(N, ode_residual(cfg.params, cfg.kind, x, N, cfg.precision));
      }
    }
    return r;
  });
  if (cfg.output == OutputFormat::Csv) {
    out << "x,N,residual\n";
    for (const auto& r : rows) {
      for (const auto& [N, res] : r.cells) out << num(r.x) << ',' << N << ',' << num(res) << '\n';
    }
  } else if (cfg.output == OutputFormat::Json) {
    out << "{\"command\":\"residual\",\"config\":" << config_json(cfg) << ",\"rows\":[";
    bool first = true;
    for (const auto& r : rows) {
      for (const auto& [N, res] : r.cells) {
        out << (first ? "\n" : ",\n") << "{\"x\":" << jnum(r.x) << ",\"N\":" << N
            << ",\"residual\":" << jnum(res) << "}";
        first = false;
      }
    }
    out << "\n]}\n";
  } else {
    out << header_line("residual", cfg);
    for (const auto& r : rows) {
      for (const auto& [N, res] : r.cells) {
        out << "x=" << num(r.x) << "  N=" << N << "  residual=" << num(res) << '\n';
      }
    }
  }
  return kExitOk;
}

// ---- kernel-check ----------------------------------------------------------

struct KernelRow {
  double x = 0, eta = 0, gap = 0;
  int cases = 0;
};

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  require_x(cfg);
  cfg.params.validate();
  const auto rows = sweep<KernelRow>(cfg.x_values, [&](double x) {
    const double eta = series_vars(cfg.params, x).eta;
    if (!(std::abs(eta) < 1.0)) {
      throw DomainViolation("x = " + num(x) + " gives |eta| >= 1");
    }
    KernelRow r{x, eta, 0.0, 0};
    for (int l = 1; l <= 4; ++l) {
      for (int al = 0; al <= 5; ++al) {
        for (int ip = 0; ip <= al; ++ip) {
          r.gap = std::max(r.gap, kernel_identity_gap(l, ip, al, cfg.kind, eta, cfg.trunc));
          ++r.cases;
        }
      }
    }
    return r;
  });
  bool over = false;
  for (const auto& r : rows) over = over || !(r.gap <= cfg.trunc.tol);
  if (cfg.output == OutputFormat::Csv) {
    out << "x,eta,lambda,cases,max_gap\n";
    for (const auto& r : rows) {
      out << num(r.x) << ',' << num(r.eta) << ',' << cfg.kind.name() << ',' << r.cases << ','
          << num(r.gap) << '\n';
    }
  } else if (cfg.output == OutputFormat::Json) {
    out << "{\"command\":\"kernel-check\",\"config\":" << config_json(cfg) << ",\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      out << (i ? ",\n" : "\n") << "{\"x\":" << jnum(r.x) << ",\"eta\":" << jnum(r.eta)
          << ",\"lambda\":" << jstr(cfg.kind.name()) << ",\"cases\":" << r.cases
          << ",\"max_gap\":" << jnum(r.gap) << "}";
    }
    out << "\n]}\n";
  } else {
    out << header_line("kernel-check", cfg);
    for (const auto& r : rows) {
      out << "x=" << num(r.x) << "  eta=" << num(r.eta) << "  cases=" << r.cases
          << "  max_gap=" << num(r.gap) << '\n';
    }
  }
  return over ? kExitTolerance : kExitOk;
}

}  // namespace

std::vector<double> parse_x_values(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("range must be start:stop:step");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step != 0.0) || !std::isfinite(step) || (stop - start) / step < 0) {
      throw ConfigError("range step must be nonzero and point from start to stop");
    }
    const double span = (stop - start) / step;
    if (span > kMaxIndex) throw ConfigError("range has too many points");
    const auto n = static_cast<int>(std::floor(span + 1e-9));
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) xs.push_back(start + k * step);
    return xs;
  }
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) xs.push_back(parse_double(item));
  if (xs.empty()) throw ConfigError("empty x list");
  return xs;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lame functions by three-term-recurrence series about x = a"};
  app.require_subcommand(1);
  RawOptions raw;
  const std::vector<std::pair<const char*, const char*>> cmds = {
      {"eval", "evaluate the series at each x"},
      {"compare", "compare against the direct Frobenius recurrence"},
      {"domain", "classify the convergence region"},
      {"residual", "ODE residual of the truncated series"},
      {"kernel-check", "check the inner-sum hypergeometric identity at eta(x)"}};
  for (const auto& [name, help] : cmds) add_common_options(*app.add_subcommand(name, help), raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();

  try {
    const Merged m = build_config(raw);
    if (!m.have_abc) throw ConfigError("--a, --b and --c are required");
    const RunConfig& cfg = m.cfg;
    if (cmd == "eval") return cmd_eval(cfg, out);
    if (cmd == "compare") return cmd_compare(cfg, out);
    if (cmd == "domain") return cmd_domain(cfg, out);
    if (cmd == "residual") return cmd_residual(cfg, out);
    return cmd_kernel(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidParams& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SpecViolation& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TerminationViolation& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TruncationOverflow& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    // Branch, singular-point, divergence, beta/2F1 domain and --force violations.
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace lame::cli
