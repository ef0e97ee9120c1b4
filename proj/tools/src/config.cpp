#include "qtensor/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "qtensor/errors.hpp"

namespace qtensor::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"mesh", {"x0", "x1", "y0", "y1", "nx", "ny"}},
      {"params", {"L1", "L2", "L3", "a", "b", "c", "A0", "sigma", "M"}},
      {"time", {"dt", "T"}},
      {"experiment", {"initial", "workers", "output_dir"}},
      {"solver", {"cg_tol", "cg_max_iter"}},
      {"space", {"levels", "reference_level"}},
      {"time_refine", {"dts", "reference_dt"}},
      {"sigma_study", {"sigmas", "p1", "p2"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(fmt::format("{}: '{}' is not a number", key, raw));
  }
  return value;
}

int to_int(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(fmt::format("{}: '{}' is not an integer", key, raw));
  }
  return value;
}

template <class T, class Convert>
std::vector<T> to_list(const std::string& key, const std::string& raw, Convert convert) {
  std::vector<T> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(convert(key, item));
  if (out.empty()) throw ValidationError(fmt::format("{}: empty list", key));
  return out;
}

InitialData to_initial(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "benchmark") return InitialData::benchmark;
  if (text == "zero") return InitialData::zero;
  throw ValidationError(fmt::format("{}: expected 'benchmark' or 'zero', got '{}'", key, raw));
}

void apply(ExperimentConfig& c, const std::string& section, const std::string& name, const std::string& raw) {
  const std::string key = section + "." + name;
  auto num = [&] { return to_double(key, raw); };
  auto integer = [&] { return to_int(key, raw); };

  if (section == "mesh") {
    if (name == "x0") c.domain.x0 = num();
    else if (name == "x1") c.domain.x1 = num();
    else if (name == "y0") c.domain.y0 = num();
    else if (name == "y1") c.domain.y1 = num();
    else if (name == "nx") c.nx = integer();
    else if (name == "ny") c.ny = integer();
  } else if (section == "params") {
    Params& p = c.params;
    if (name == "L1") p.L1 = num();
    else if (name == "L2") p.L2 = num();
    else if (name == "L3") p.L3 = num();
    else if (name == "a") p.a = num();
    else if (name == "b") p.b = num();
    else if (name == "c") p.c = num();
    else if (name == "A0") p.A0 = num();
    else if (name == "sigma") p.sigma = num();
    else if (name == "M") p.M = num();
  } else if (section == "time") {
    if (name == "dt") c.dt = num();
    else if (name == "T") c.final_time = num();
  } else if (section == "experiment") {
    if (name == "initial") c.initial = to_initial(key, raw);
    else if (name == "workers") c.workers = integer();
    else if (name == "output_dir") c.output_dir = trim(raw);
  } else if (section == "solver") {
    if (name == "cg_tol") c.cg_tol = num();
    else if (name == "cg_max_iter") c.cg_max_iter = integer();
  } else if (section == "space") {
    if (name == "levels") c.space_levels = to_list<int>(key, raw, to_int);
    else if (name == "reference_level") c.reference_level = integer();
  } else if (section == "time_refine") {
    if (name == "dts") c.time_steps = to_list<double>(key, raw, to_double);
    else if (name == "reference_dt") c.reference_dt = num();
  } else if (section == "sigma_study") {
    if (name == "sigmas") c.sigmas = to_list<double>(key, raw, to_double);
    else if (name == "p1") c.p1 = to_list<double>(key, raw, to_double);
    else if (name == "p2") c.p2 = to_list<double>(key, raw, to_double);
  }
}

std::string fmt_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      out += fmt_num(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

}  // namespace

std::optional<ExperimentKind> kind_from_subcommand(std::string_view name) {
  if (name == "run") return ExperimentKind::run;
  if (name == "space-refine") return ExperimentKind::space;
  if (name == "time-refine") return ExperimentKind::time;
  if (name == "sigma-study") return ExperimentKind::sigma;
  return std::nullopt;
}

std::string_view subcommand_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::run:
      return "run";
    case ExperimentKind::space:
      return "space-refine";
    case ExperimentKind::time:
      return "time-refine";
    case ExperimentKind::sigma:
      return "sigma-study";
  }
  return "run";
}

ExperimentConfig parse_config(std::istream& in, ExperimentKind kind) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(fmt::format("config: line {}: {}", e.line(), e.message()));
  }

  ExperimentConfig config = default_config(kind);
  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (!body.data().empty()) {
      throw ValidationError(fmt::format("{}: keys must be placed inside a section", section));
    }
    if (known == known_keys().end()) throw ValidationError(fmt::format("{}: unknown section", section));
    for (const auto& [name, value] : body) {
      if (!known->second.contains(name)) throw ValidationError(fmt::format("{}.{}: unknown key", section, name));
      apply(config, section, name, value.data());
    }
  }
  config.validate();
  return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path, ExperimentKind kind) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("config: cannot open '{}'", path.string()));
  return parse_config(in, kind);
}

std::string render_config(const ExperimentConfig& c) {
  const Params& p = c.params;
  std::string out;
  out += fmt::format("[mesh]\nx0 = {}\nx1 = {}\ny0 = {}\ny1 = {}\nnx = {}\nny = {}\n\n", fmt_num(c.domain.x0),
                     fmt_num(c.domain.x1), fmt_num(c.domain.y0), fmt_num(c.domain.y1), c.nx, c.ny);
  out += fmt::format("[params]\nL1 = {}\nL2 = {}\nL3 = {}\na = {}\nb = {}\nc = {}\nA0 = {}\nsigma = {}\nM = {}\n\n",
                     fmt_num(p.L1), fmt_num(p.L2), fmt_num(p.L3), fmt_num(p.a), fmt_num(p.b), fmt_num(p.c),
                     fmt_num(p.A0), fmt_num(p.sigma), fmt_num(p.M));
  out += fmt::format("[time]\ndt = {}\nT = {}\n\n", fmt_num(c.dt), fmt_num(c.final_time));
  out += fmt::format("[experiment]\ninitial = {}\nworkers = {}\noutput_dir = {}\n\n",
                     c.initial == InitialData::zero ? "zero" : "benchmark", c.workers, c.output_dir);
  out += fmt::format("[solver]\ncg_tol = {}\ncg_max_iter = {}\n\n", fmt_num(c.cg_tol), c.cg_max_iter);
  out += fmt::format("[space]\nlevels = {}\nreference_level = {}\n\n", join(c.space_levels), c.reference_level);
  out += fmt::format("[time_refine]\ndts = {}\nreference_dt = {}\n\n", join(c.time_steps), fmt_num(c.reference_dt));
  if (!c.sigmas.empty()) {
    out += fmt::format("[sigma_study]\nsigmas = {}\np1 = {}\np2 = {}\n", join(c.sigmas), join(c.p1), join(c.p2));
  } else {
    out += fmt::format("[sigma_study]\np1 = {}\np2 = {}\n", join(c.p1), join(c.p2));
  }
  return out;
}

}  // namespace qtensor::cli
