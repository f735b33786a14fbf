#include "replicax/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <system_error>

namespace replicax {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(trim(s.substr(start)));
      return parts;
    }
    parts.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

struct RawEntry {
  int line = 0;
  std::string key;
  std::string value;
};

double parse_double(const RawEntry& entry) {
  const std::string& text = entry.value;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw ParseError(entry.line, "key '" + entry.key +
                                     "' expects a number, got '" + text + "'");
  }
  return value;
}

std::int64_t parse_int(const RawEntry& entry) {
  const double value = parse_double(entry);
  if (value != std::floor(value) || std::abs(value) > 9.0e18) {
    throw ParseError(entry.line, "key '" + entry.key +
                                     "' expects an integer, got '" +
                                     entry.value + "'");
  }
  return static_cast<std::int64_t>(value);
}

std::uint64_t parse_u64(const RawEntry& entry) {
  const std::string& text = entry.value;
  if (text.empty() || text[0] == '-') {
    throw ParseError(entry.line, "key '" + entry.key +
                                     "' expects an unsigned integer, got '" +
                                     text + "'");
  }
  char* end = nullptr;
  errno = 0;
  const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError(entry.line, "key '" + entry.key +
                                     "' expects an unsigned integer, got '" +
                                     text + "'");
  }
  return value;
}

std::vector<double> parse_list(const RawEntry& entry, const std::string& text) {
  std::vector<double> values;
  for (const std::string& part : split(text, ',')) {
    RawEntry item{entry.line, entry.key, part};
    values.push_back(parse_double(item));
  }
  return values;
}

const std::map<std::string, std::vector<std::string>>& section_keys() {
  static const std::map<std::string, std::vector<std::string>> vocab{
      {"objective",
       {"kind", "weight_seed", "bandwidth", "dim", "component", "box"}},
      {"run",
       {"mode", "step_size", "temperature", "swap_margin", "iterations",
        "batch_size", "exchange_bound", "x0", "y0"}},
      {"experiment",
       {"replications", "seed", "success_tol", "success_f_gap"}},
      {"output", {"directory", "stride", "formats"}}};
  return vocab;
}

// One parsed section: entries by key, plus repeatable keys kept in order.
struct Section {
  std::map<std::string, RawEntry> single;
  std::vector<RawEntry> components;       // objective: component lines
  std::vector<RawEntry> sweeps;           // experiment: sweep.<axis> lines

  const RawEntry* find(const std::string& key) const {
    const auto it = single.find(key);
    return it == single.end() ? nullptr : &it->second;
  }
};

struct RawConfig {
  std::map<std::string, Section> sections;
  std::vector<std::array<std::string, 3>> entries;

  const Section& at(const std::string& name) const {
    static const Section empty;
    const auto it = sections.find(name);
    return it == sections.end() ? empty : it->second;
  }
};

RawConfig scan(const std::string& text) {
  RawConfig raws;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError(line_no, "unterminated section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section_keys().find(section) == section_keys().end()) {
        throw ParseError(line_no, "unknown section [" + section + "]");
      }
      raws.sections[section];  // remember even if empty
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, "expected 'key = value', got '" + line + "'");
    }
    if (section.empty()) {
      throw ParseError(line_no, "key outside any [section]");
    }
    RawEntry entry{line_no, trim(line.substr(0, eq)),
                   trim(line.substr(eq + 1))};
    if (entry.key.empty()) throw ParseError(line_no, "empty key");

    Section& sec = raws.sections[section];
    const bool is_sweep =
        section == "experiment" && entry.key.rfind("sweep.", 0) == 0;
    const std::vector<std::string>& known = section_keys().at(section);
    if (!is_sweep && std::find(known.begin(), known.end(), entry.key) ==
                         known.end()) {
      throw ParseError(line_no,
                       "unknown key '" + entry.key + "' in [" + section + "]");
    }

    raws.entries.push_back({section, entry.key, entry.value});
    if (entry.key == "component" && section == "objective") {
      sec.components.push_back(std::move(entry));
    } else if (is_sweep) {
      for (const RawEntry& other : sec.sweeps) {
        if (other.key == entry.key) {
          throw ParseError(line_no, "duplicate key '" + entry.key + "'");
        }
      }
      sec.sweeps.push_back(std::move(entry));
    } else {
      if (!sec.single.emplace(entry.key, entry).second) {
        throw ParseError(line_no, "duplicate key '" + entry.key + "'");
      }
    }
  }
  return raws;
}

void require_keys_apply(const Section& objective, const std::string& kind,
                        const std::vector<std::string>& allowed) {
  for (const auto& [key, entry] : objective.single) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument("objective key '" + key +
                                  "' does not apply to kind '" + kind + "'");
    }
  }
  if (!objective.components.empty() &&
      std::find(allowed.begin(), allowed.end(), "component") ==
          allowed.end()) {
    throw std::invalid_argument(
        "objective key 'component' does not apply to kind '" + kind + "'");
  }
}

GaussianMixtureSpec custom_mixture_spec(const Section& objective) {
  const RawEntry* box = objective.find("box");
  if (objective.components.empty() || box == nullptr) {
    throw std::invalid_argument(
        "custom mixtures need at least one 'component' and a 'box'");
  }
  GaussianMixtureSpec spec;
  for (const RawEntry& entry : objective.components) {
    const std::vector<std::string> parts = split(entry.value, '|');
    if (parts.size() != 3) {
      throw ParseError(entry.line,
                       "component expects 'weight | means | covariances'");
    }
    MixtureComponent comp;
    comp.weight = parse_double({entry.line, "component weight", parts[0]});
    comp.mean = parse_list(entry, parts[1]);
    comp.cov_diag = parse_list(entry, parts[2]);
    spec.components.push_back(std::move(comp));
  }
  const std::vector<std::string> bounds = split(box->value, '|');
  if (bounds.size() != 2) {
    throw ParseError(box->line, "box expects 'lower coords | upper coords'");
  }
  spec.box.lower = parse_list(*box, bounds[0]);
  spec.box.upper = parse_list(*box, bounds[1]);
  normalize_weights(spec);
  return spec;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
  const RawConfig raw = scan(text);
  ParsedConfig config;
  config.entries = raw.entries;

  // --- [objective] ---
  const Section& objective = raw.at("objective");
  const RawEntry* kind_entry = objective.find("kind");
  if (kind_entry == nullptr) {
    throw std::invalid_argument("config needs [objective] kind");
  }
  const std::string kind = kind_entry->value;
  config.objective_kind = kind;

  // --- [run] --- (batch size feeds oracle construction, so read it early)
  const Section& run = raw.at("run");
  RunConfig& rc = config.spec.run;
  const RawEntry* mode = run.find("mode");
  if (mode == nullptr) {
    throw std::invalid_argument("config needs [run] mode");
  }
  rc.mode = mode_from_string(mode->value);
  const RawEntry* step = run.find("step_size");
  const RawEntry* iters = run.find("iterations");
  if (step == nullptr || iters == nullptr) {
    throw std::invalid_argument(
        "config needs [run] step_size and iterations");
  }
  rc.step_size = parse_double(*step);
  rc.iterations = parse_int(*iters);
  if (const RawEntry* e = run.find("temperature")) {
    rc.temperature = parse_double(*e);
  }
  if (const RawEntry* e = run.find("swap_margin")) {
    rc.swap_margin = parse_double(*e);
  }
  if (const RawEntry* e = run.find("batch_size")) {
    rc.batch_size = static_cast<int>(parse_int(*e));
  }
  if (const RawEntry* e = run.find("exchange_bound")) {
    rc.exchange_bound = parse_double(*e);
  }

  const RawEntry* x0 = run.find("x0");
  const RawEntry* y0 = run.find("y0");
  if (x0 == nullptr) {
    throw std::invalid_argument(
        "config needs [run] x0 (coordinates or 'uniform')");
  }
  if (x0->value == "uniform") {
    config.spec.uniform_init = true;
    if (y0 != nullptr && y0->value != "uniform") {
      throw std::invalid_argument(
          "x0 = uniform requires y0 = uniform (or no y0)");
    }
  } else {
    rc.x0 = parse_list(*x0, x0->value);
    if (y0 != nullptr) {
      if (y0->value == "uniform") {
        throw std::invalid_argument(
            "y0 = uniform requires x0 = uniform as well");
      }
      rc.y0 = parse_list(*y0, y0->value);
    }
  }

  // --- objective factory ---
  auto need = [&](const char* key) -> const RawEntry& {
    const RawEntry* entry = objective.find(key);
    if (entry == nullptr) {
      throw std::invalid_argument("objective kind '" + kind +
                                  "' needs key '" + std::string(key) + "'");
    }
    return *entry;
  };
  const bool online = is_online(rc.mode);
  if (kind == "mixture25" || kind == "kde25") {
    require_keys_apply(objective, kind,
                       kind == "mixture25"
                           ? std::vector<std::string>{"kind", "weight_seed"}
                           : std::vector<std::string>{"kind", "weight_seed",
                                                      "bandwidth"});
    const RawEntry& ws = need("weight_seed");
    const bool fresh = ws.value == "per_replication";
    std::optional<std::uint64_t> fixed_seed;
    if (!fresh) fixed_seed = parse_u64(ws);
    config.spec.fresh_objective_per_replication = fresh;
    config.objective_dim = 2;
    if (kind == "mixture25") {
      config.spec.factory = [fixed_seed](std::uint64_t seed) {
        return make_mixture_bundle(fixed_seed ? *fixed_seed : seed);
      };
    } else {
      const double bandwidth = parse_double(need("bandwidth"));
      const int batch = rc.batch_size;
      if (batch < 1) {
        throw std::invalid_argument(
            "kind 'kde25' needs [run] batch_size >= 1");
      }
      config.spec.factory = [fixed_seed, bandwidth, batch](std::uint64_t seed) {
        return make_kde_bundle(fixed_seed ? *fixed_seed : seed, bandwidth,
                               batch);
      };
    }
  } else if (kind == "mixture" || kind == "kde") {
    require_keys_apply(objective, kind,
                       kind == "mixture"
                           ? std::vector<std::string>{"kind", "box"}
                           : std::vector<std::string>{"kind", "box",
                                                      "bandwidth"});
    const GaussianMixtureSpec spec = custom_mixture_spec(objective);
    config.objective_dim = spec.dim();
    if (kind == "mixture") {
      config.spec.factory = [spec](std::uint64_t) {
        return make_mixture_bundle(spec);
      };
    } else {
      const double bandwidth = parse_double(need("bandwidth"));
      const int batch = rc.batch_size;
      if (batch < 1) {
        throw std::invalid_argument("kind 'kde' needs [run] batch_size >= 1");
      }
      config.spec.factory = [spec, bandwidth, batch](std::uint64_t) {
        return make_kde_bundle(spec, bandwidth, batch);
      };
    }
  } else if (kind == "rastrigin" || kind == "griewank" ||
             kind == "quadratic") {
    require_keys_apply(objective, kind, {"kind", "dim"});
    const int dim = static_cast<int>(parse_int(need("dim")));
    config.objective_dim = dim;
    if (kind == "rastrigin") {
      config.spec.factory = [dim](std::uint64_t) {
        return make_rastrigin_bundle(dim);
      };
    } else if (kind == "griewank") {
      config.spec.factory = [dim](std::uint64_t) {
        return make_griewank_bundle(dim);
      };
    } else {
      config.spec.factory = [dim](std::uint64_t) {
        return make_quadratic_bundle(dim);
      };
    }
  } else {
    throw std::invalid_argument("unknown objective kind '" + kind + "'");
  }
  if (online && kind != "kde25" && kind != "kde") {
    throw std::invalid_argument("online mode '" + to_string(rc.mode) +
                                "' needs a kde objective");
  }

  // --- [experiment] ---
  const Section& experiment = raw.at("experiment");
  if (const RawEntry* e = experiment.find("replications")) {
    config.spec.replications = static_cast<int>(parse_int(*e));
  }
  if (const RawEntry* e = experiment.find("seed")) {
    config.spec.base_seed = parse_u64(*e);
  }
  const RawEntry* tol = experiment.find("success_tol");
  const RawEntry* gap = experiment.find("success_f_gap");
  if (tol != nullptr && gap != nullptr) {
    throw std::invalid_argument(
        "choose one of success_tol and success_f_gap");
  }
  if (tol != nullptr) {
    const double value = parse_double(*tol);
    if (!(value > 0.0)) {
      throw std::invalid_argument("success_tol must be positive");
    }
    const ObjectiveFactory inner = config.spec.factory;
    config.spec.factory = [inner, value](std::uint64_t seed) {
      ObjectiveBundle bundle = inner(seed);
      bundle.success.tol = value;
      return bundle;
    };
  }
  if (gap != nullptr) {
    const double value = parse_double(*gap);
    if (!(value > 0.0)) {
      throw std::invalid_argument("success_f_gap must be positive");
    }
    const ObjectiveFactory inner = config.spec.factory;
    config.spec.factory = [inner, value](std::uint64_t seed) {
      ObjectiveBundle bundle = inner(seed);
      if (!bundle.objective.min_value) {
        throw std::invalid_argument(
            "success_f_gap needs an objective with a known minimum value");
      }
      bundle.success.x_star.clear();
      bundle.success.f_star = *bundle.objective.min_value;
      bundle.success.f_tol = value;
      return bundle;
    };
  }
  for (const RawEntry& entry : experiment.sweeps) {
    SweepAxis axis;
    axis.name = entry.key.substr(6);
    axis.values = parse_list(entry, entry.value);
    config.spec.axes.push_back(std::move(axis));
  }

  // --- [output] ---
  const Section& output = raw.at("output");
  if (const RawEntry* e = output.find("directory")) {
    config.output.directory = e->value;
  }
  if (const RawEntry* e = output.find("stride")) {
    config.output.stride = parse_int(*e);
    rc.snapshot_stride = config.output.stride;
  }
  if (const RawEntry* e = output.find("formats")) {
    config.output.csv = false;
    config.output.json = false;
    for (const std::string& fmt : split(e->value, ',')) {
      if (fmt == "csv") {
        config.output.csv = true;
      } else if (fmt == "json") {
        config.output.json = true;
      } else {
        throw std::invalid_argument("unknown output format '" + fmt +
                                    "' (expected csv and/or json)");
      }
    }
  }

  // Validate everything that does not need a constructed objective: the
  // experiment shape and the full RunConfig invariants (with placeholder
  // starting points when they are drawn uniformly at run time).
  config.spec.validate();
  RunConfig probe = rc;
  if (config.spec.uniform_init) {
    probe.x0.assign(config.objective_dim, 0.0);
    if (is_coupled(probe.mode)) probe.y0.assign(config.objective_dim, 0.0);
  }
  probe.validate(config.objective_dim);
  return config;
}

ParsedConfig load_config_file(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw std::system_error(
        std::make_error_code(std::errc::no_such_file_or_directory),
        "config file '" + path + "'");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::system_error(std::make_error_code(std::errc::io_error),
                            "config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace replicax
