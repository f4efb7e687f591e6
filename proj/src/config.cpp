#include "lagproj/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace lagproj {
namespace {

constexpr std::pair<SchemeKind, std::string_view> kSchemes[] = {
    {SchemeKind::ap_explicit, "ap-explicit"},
    {SchemeKind::ap_implicit, "ap-implicit"},
    {SchemeKind::non_ap_explicit, "non-ap-explicit"},
    {SchemeKind::non_ap_implicit, "non-ap-implicit"},
    {SchemeKind::asymptotic_reference, "asymptotic"},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(std::string_view text, std::string_view key, int line) {
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError("key '" + std::string(key) + "' expects a finite number, got '" + s + "'", line);
  }
  return v;
}

Index to_index(std::string_view text, std::string_view key, int line) {
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ParseError("key '" + std::string(key) + "' expects an integer, got '" + s + "'", line);
  }
  return static_cast<Index>(v);
}

bool to_bool(std::string_view text, std::string_view key, int line) {
  if (text == "on" || text == "true" || text == "1" || text == "yes") return true;
  if (text == "off" || text == "false" || text == "0" || text == "no") return false;
  throw ParseError("key '" + std::string(key) + "' expects on/off, got '" + std::string(text) + "'", line);
}

std::vector<double> to_list(std::string_view text, std::string_view key, int line) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(to_double(trim(text.substr(0, comma)), key, line));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void require(bool ok, const std::string& what, int line) {
  if (!ok) throw ParseError(what, line);
}

}  // namespace

std::string_view to_string(SchemeKind s) {
  for (const auto& [kind, name] : kSchemes)
    if (kind == s) return name;
  return "unknown";
}

std::string_view to_string(BoundaryPolicy b) {
  return b == BoundaryPolicy::periodic ? "periodic" : "transmissive";
}

std::string_view to_string(InitialSampling s) {
  return s == InitialSampling::cell_center ? "cell_center" : "cell_average";
}

SchemeKind parse_scheme(std::string_view text) {
  for (const auto& [kind, name] : kSchemes)
    if (name == text) return kind;
  throw InvalidParameter("unknown scheme '" + std::string(text) + "'");
}

std::vector<double> RunConfig::output_times() const {
  std::vector<double> times = snapshot_times;
  times.push_back(t_end);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", line_no);
    if (!seen.emplace(key, line_no).second) throw ParseError("duplicate key '" + key + "'", line_no);
    const int ln = line_no;

    if (key == "scheme") {
      try {
        c.scheme = parse_scheme(value);
      } catch (const InvalidParameter& e) {
        throw ParseError(e.what(), ln);
      }
    } else if (key == "n_cells") {
      c.n_cells = to_index(value, key, ln);
      require(c.n_cells >= 3, "n_cells must be at least 3", ln);
    } else if (key == "x_min") {
      c.x_min = to_double(value, key, ln);
    } else if (key == "x_max") {
      c.x_max = to_double(value, key, ln);
    } else if (key == "sigma0") {
      c.sigma0 = to_double(value, key, ln);
      require(c.sigma0 > 0, "sigma0 must be positive", ln);
    } else if (key == "st") {
      c.st = to_double(value, key, ln);
      require(c.st > 0, "st must be positive", ln);
    } else if (key == "tau_g") {
      c.tau_g = to_double(value, key, ln);
      require(c.tau_g >= 0, "tau_g must be non-negative", ln);
    } else if (key == "u_g") {
      c.u_g = to_double(value, key, ln);
    } else if (key == "cfl") {
      c.cfl = to_double(value, key, ln);
      require(c.cfl > 0 && c.cfl <= 1, "cfl must lie in (0, 1]", ln);
    } else if (key == "safety") {
      c.safety = to_double(value, key, ln);
      require(c.safety >= 1, "safety must be >= 1", ln);
    } else if (key == "source_cap") {
      c.source_cap_enabled = to_bool(value, key, ln);
    } else if (key == "implicit_multiplier") {
      c.implicit_multiplier = to_double(value, key, ln);
      require(c.implicit_multiplier >= 1, "implicit_multiplier must be >= 1", ln);
    } else if (key == "boundary") {
      if (value == "transmissive") {
        c.boundary = BoundaryPolicy::transmissive;
      } else if (value == "periodic") {
        c.boundary = BoundaryPolicy::periodic;
      } else {
        throw ParseError("boundary must be transmissive or periodic", ln);
      }
    } else if (key == "initial_sampling") {
      if (value == "cell_average") {
        c.initial_sampling = InitialSampling::cell_average;
      } else if (value == "cell_center") {
        c.initial_sampling = InitialSampling::cell_center;
      } else {
        throw ParseError("initial_sampling must be cell_average or cell_center", ln);
      }
    } else if (key == "t_end") {
      c.t_end = to_double(value, key, ln);
      require(c.t_end >= 0, "t_end must be non-negative", ln);
    } else if (key == "snapshot_times") {
      c.snapshot_times = to_list(value, key, ln);
    } else if (key == "output") {
      c.output_path = std::string(value);
    } else if (key == "reference") {
      if (value == "none") {
        c.reference = {};
      } else if (value == "analytic") {
        c.reference = {ReferenceKind::analytic, {}};
      } else if (!value.empty()) {
        c.reference = {ReferenceKind::file, std::string(value)};
      } else {
        throw ParseError("reference needs none, analytic or a file path", ln);
      }
    } else {
      throw ParseError("unknown key '" + key + "'", ln);
    }
  }

  for (const char* key : {"scheme", "n_cells", "st", "t_end"}) {
    if (!seen.contains(key)) throw ParseError(std::string("missing required key '") + key + "'", 0);
  }
  const auto line_of = [&](const char* key) {
    const auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };
  require(c.x_max > c.x_min, "x_max must exceed x_min", std::max(line_of("x_min"), line_of("x_max")));
  for (const double t : c.snapshot_times)
    require(t >= 0 && t <= c.t_end, "snapshot times must lie in [0, t_end]", line_of("snapshot_times"));
  return c;
}

void validate(const RunConfig& c) {
  // Re-parsing the emitted text applies exactly the same rules as a file.
  try {
    (void)parse_config(emit_config(c));
  } catch (const ParseError& e) {
    const std::string what = e.what();
    const auto colon = what.find(": ");
    throw InvalidParameter("invalid run config: " + (e.line() > 0 ? what.substr(colon + 2) : what));
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os << "scheme = " << to_string(c.scheme) << '\n'
     << "n_cells = " << c.n_cells << '\n'
     << "x_min = " << format_double(c.x_min) << '\n'
     << "x_max = " << format_double(c.x_max) << '\n'
     << "sigma0 = " << format_double(c.sigma0) << '\n'
     << "st = " << format_double(c.st) << '\n'
     << "tau_g = " << format_double(c.tau_g) << '\n'
     << "u_g = " << format_double(c.u_g) << '\n'
     << "cfl = " << format_double(c.cfl) << '\n'
     << "safety = " << format_double(c.safety) << '\n'
     << "source_cap = " << (c.source_cap_enabled ? "on" : "off") << '\n'
     << "implicit_multiplier = " << format_double(c.implicit_multiplier) << '\n'
     << "boundary = " << to_string(c.boundary) << '\n'
     << "initial_sampling = " << to_string(c.initial_sampling) << '\n'
     << "t_end = " << format_double(c.t_end) << '\n';
  if (!c.snapshot_times.empty()) {
    os << "snapshot_times = ";
    for (std::size_t i = 0; i < c.snapshot_times.size(); ++i)
      os << (i ? "," : "") << format_double(c.snapshot_times[i]);
    os << '\n';
  }
  if (!c.output_path.empty()) os << "output = " << c.output_path << '\n';
  switch (c.reference.kind) {
    case ReferenceKind::none:
      break;
    case ReferenceKind::analytic:
      os << "reference = analytic\n";
      break;
    case ReferenceKind::file:
      os << "reference = " << c.reference.path << '\n';
      break;
  }
  return os.str();
}

}  // namespace lagproj
