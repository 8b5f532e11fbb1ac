#include "gpc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace gpc {

bool RunConfig::operator==(const RunConfig& o) const {
  const auto& a = material;
  const auto& b = o.material;
  const auto& s = solver;
  const auto& t = o.solver;
  return name == o.name && block.l1 == o.block.l1 && block.l2 == o.block.l2 &&
         block.l3 == o.block.l3 && block.nx == o.block.nx && block.ny == o.block.ny &&
         block.nz == o.block.nz && quadrature_order == o.quadrature_order &&
         a.model == b.model && a.lambda_lame == b.lambda_lame && a.mu_lame == b.mu_lame &&
         a.alpha == b.alpha && a.eps_well == b.eps_well && a.H_chi == b.H_chi &&
         a.K_grad == b.K_grad && a.K_vol == b.K_vol && boundary == o.boundary &&
         compression == o.compression && s.load_steps == t.load_steps &&
         s.newton_tol == t.newton_tol && s.newton_abs_tol == t.newton_abs_tol &&
         s.max_iters == t.max_iters && s.perturbation_amplitude == t.perturbation_amplitude &&
         s.step_halving_max == t.step_halving_max && s.seed == t.seed &&
         s.energy_slack == t.energy_slack && output.directory == o.output.directory &&
         output.prefix == o.output.prefix && output.vtk == o.output.vtk &&
         output.csv == o.output.csv;
}

namespace {

using Kind = ConfigIssue::Kind;

struct Entry {
  std::string value;
  int line;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside quotes.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (!quoted && s[i] == '#') return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> to_int(const std::string& s) {
  long long v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

std::optional<bool> to_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  return std::nullopt;
}

std::optional<std::string> to_string_value(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    const std::string inner = s.substr(1, s.size() - 2);
    if (inner.find('"') != std::string::npos) return std::nullopt;
    return inner;
  }
  if (s.empty() || s.find_first_of(" \t\"") != std::string::npos) return std::nullopt;
  return s;
}

// One field of RunConfig bound to its key.
struct Field {
  std::string key;
  bool required;
  std::string type;  // for messages
  std::function<bool(RunConfig&, const std::string&)> read;
  std::function<std::string(const RunConfig&)> write;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class Ref>
Field real_field(const std::string& key, bool required, Ref ref) {
  return {key, required, "number",
          [ref](RunConfig& c, const std::string& s) {
            auto v = to_double(s);
            if (!v) return false;
            ref(c) = *v;
            return true;
          },
          [ref](const RunConfig& c) { return fmt_double(ref(c)); }};
}

template <class T, class Ref>
Field int_field(const std::string& key, bool required, Ref ref) {
  return {key, required, "integer",
          [ref](RunConfig& c, const std::string& s) {
            auto v = to_int(s);
            if (!v) return false;
            if constexpr (std::is_unsigned_v<T>) {
              if (*v < 0) return false;
            }
            ref(c) = static_cast<T>(*v);
            return true;
          },
          [ref](const RunConfig& c) {
            return std::to_string(ref(c));
          }};
}

template <class Ref>
Field bool_field(const std::string& key, Ref ref) {
  return {key, false, "true or false",
          [ref](RunConfig& c, const std::string& s) {
            auto v = to_bool(s);
            if (!v) return false;
            ref(c) = *v;
            return true;
          },
          [ref](const RunConfig& c) {
            return std::string(ref(c) ? "true" : "false");
          }};
}

template <class Ref>
Field string_field(const std::string& key, bool required, Ref ref) {
  return {key, required, "string",
          [ref](RunConfig& c, const std::string& s) {
            auto v = to_string_value(s);
            if (!v) return false;
            ref(c) = *v;
            return true;
          },
          [ref](const RunConfig& c) {
            return "\"" + ref(c) + "\"";
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = [] {
    std::vector<Field> v;
    v.push_back(string_field("name", false, [](auto& c) -> auto& { return c.name; }));
    v.push_back(real_field("geometry.l1", true, [](auto& c) -> auto& { return c.block.l1; }));
    v.push_back(real_field("geometry.l2", true, [](auto& c) -> auto& { return c.block.l2; }));
    v.push_back(real_field("geometry.l3", true, [](auto& c) -> auto& { return c.block.l3; }));
    v.push_back(int_field<int>("mesh.nx", true, [](auto& c) -> auto& { return c.block.nx; }));
    v.push_back(int_field<int>("mesh.ny", true, [](auto& c) -> auto& { return c.block.ny; }));
    v.push_back(int_field<int>("mesh.nz", true, [](auto& c) -> auto& { return c.block.nz; }));
    v.push_back(int_field<int>("mesh.quadrature", false,
                               [](auto& c) -> auto& { return c.quadrature_order; }));
    v.push_back({"material.model", true, "model name",
                 [](RunConfig& c, const std::string& s) {
                   try {
                     c.material.model = model_from_string(s);
                     return true;
                   } catch (const InvalidParameter&) {
                     return false;
                   }
                 },
                 [](const RunConfig& c) { return to_string(c.material.model); }});
    v.push_back(real_field("material.lambda", false,
                           [](auto& c) -> auto& { return c.material.lambda_lame; }));
    v.push_back(real_field("material.mu", false,
                           [](auto& c) -> auto& { return c.material.mu_lame; }));
    v.push_back(real_field("material.alpha", false,
                           [](auto& c) -> auto& { return c.material.alpha; }));
    v.push_back(real_field("material.eps", false,
                           [](auto& c) -> auto& { return c.material.eps_well; }));
    v.push_back(real_field("material.H_chi", false,
                           [](auto& c) -> auto& { return c.material.H_chi; }));
    v.push_back(real_field("material.K", false,
                           [](auto& c) -> auto& { return c.material.K_grad; }));
    v.push_back(real_field("material.K_vol", false,
                           [](auto& c) -> auto& { return c.material.K_vol; }));
    v.push_back({"boundary.kind", true, "boundary kind",
                 [](RunConfig& c, const std::string& s) {
                   try {
                     c.boundary = load_kind_from_string(s);
                     return true;
                   } catch (const InvalidParameter&) {
                     return false;
                   }
                 },
                 [](const RunConfig& c) { return to_string(c.boundary); }});
    v.push_back(real_field("boundary.compression", false,
                           [](auto& c) -> auto& { return c.compression; }));
    v.push_back(int_field<int>("solver.load_steps", false,
                               [](auto& c) -> auto& { return c.solver.load_steps; }));
    v.push_back(real_field("solver.newton_tol", false,
                           [](auto& c) -> auto& { return c.solver.newton_tol; }));
    v.push_back(real_field("solver.newton_abs_tol", false,
                           [](auto& c) -> auto& { return c.solver.newton_abs_tol; }));
    v.push_back(int_field<int>("solver.max_iters", false,
                               [](auto& c) -> auto& { return c.solver.max_iters; }));
    v.push_back(real_field("solver.perturbation", false, [](auto& c) -> auto& {
      return c.solver.perturbation_amplitude;
    }));
    v.push_back(int_field<int>("solver.step_halving_max", false,
                               [](auto& c) -> auto& { return c.solver.step_halving_max; }));
    v.push_back(int_field<std::uint64_t>(
        "solver.seed", false, [](auto& c) -> auto& { return c.solver.seed; }));
    v.push_back(real_field("solver.energy_slack", false,
                           [](auto& c) -> auto& { return c.solver.energy_slack; }));
    v.push_back(string_field("output.directory", false,
                             [](auto& c) -> auto& { return c.output.directory; }));
    v.push_back(string_field("output.prefix", false,
                             [](auto& c) -> auto& { return c.output.prefix; }));
    v.push_back(bool_field("output.vtk", [](auto& c) -> auto& { return c.output.vtk; }));
    v.push_back(bool_field("output.csv", [](auto& c) -> auto& { return c.output.csv; }));
    return v;
  }();
  return f;
}

double max_element_edge(const BlockSpec& b) {
  return std::max({b.l1 / b.nx, b.l2 / b.ny, b.l3 / b.nz});
}

}  // namespace

std::vector<ConfigIssue> validate(const RunConfig& c) {
  std::vector<ConfigIssue> out;
  auto bad = [&](const std::string& key, const std::string& msg) {
    out.push_back({Kind::Invalid, 0, key, msg});
  };
  const BlockSpec& b = c.block;
  if (!(b.l1 > 0.0)) bad("geometry.l1", "must be > 0");
  if (!(b.l2 > 0.0)) bad("geometry.l2", "must be > 0");
  if (!(b.l3 > 0.0)) bad("geometry.l3", "must be > 0");
  if (b.nx < 1) bad("mesh.nx", "must be >= 1");
  if (b.ny < 1) bad("mesh.ny", "must be >= 1");
  if (b.nz < 1) bad("mesh.nz", "must be >= 1");
  if (c.quadrature_order != 2 && c.quadrature_order != 3)
    bad("mesh.quadrature", "must be 2 or 3");
  try {
    c.material.validate();
  } catch (const InvalidParameter& e) {
    bad("material", e.what());
  }
  if (c.material.model == Model::DoubleWell && !(c.material.eps_well > 0.0))
    bad("material.eps", "double_well needs eps > 0");
  try {
    c.solver.validate();
  } catch (const InvalidParameter& e) {
    bad("solver", e.what());
  }
  if (c.boundary == LoadKind::BiaxialAffine && !(c.compression >= 0.0 && c.compression < 1.0))
    bad("boundary.compression", "must lie in [0, 1)");
  if (c.output.prefix.empty()) bad("output.prefix", "must not be empty");
  return out;
}

RunConfig parse_config(const std::string& text) {
  std::vector<ConfigIssue> issues;
  std::map<std::string, Entry> entries;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({Kind::Syntax, lineno, "", "unterminated section header"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section) || section.find('.') != std::string::npos) {
        issues.push_back({Kind::Syntax, lineno, section, "bad section name"});
        section.clear();
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({Kind::Syntax, lineno, "", "expected 'key = value'"});
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) {
      issues.push_back({Kind::Syntax, lineno, key, "bad key"});
      continue;
    }
    if (key.find('.') == std::string::npos && !section.empty()) key = section + "." + key;
    if (entries.count(key)) {
      issues.push_back({Kind::Syntax, lineno, key,
                        "duplicate key (first set on line " +
                            std::to_string(entries[key].line) + ")"});
      continue;
    }
    entries[key] = {value, lineno};
  }

  RunConfig c;
  std::set<std::string> known;
  for (const Field& f : fields()) {
    known.insert(f.key);
    auto it = entries.find(f.key);
    if (it == entries.end()) {
      if (f.required)
        issues.push_back({Kind::MissingRequired, 0, f.key, "required key is missing"});
      continue;
    }
    if (!f.read(c, it->second.value))
      issues.push_back({Kind::TypeMismatch, it->second.line, f.key,
                        "expected " + f.type + ", got '" + it->second.value + "'"});
  }
  for (const auto& [key, e] : entries)
    if (!known.count(key)) issues.push_back({Kind::UnknownKey, e.line, key, "unknown key"});

  if (c.material.model == Model::DoubleWell) {
    for (const char* k : {"material.alpha", "material.eps"})
      if (!entries.count(k))
        issues.push_back({Kind::MissingRequired, 0, k, "required for double_well"});
  }
  if (c.material.model == Model::StVK) {
    for (const char* k : {"material.lambda", "material.mu"})
      if (!entries.count(k))
        issues.push_back({Kind::MissingRequired, 0, k, "required for stvk"});
  }

  // Semantic checks. With earlier problems present, only values that were
  // read cleanly are checked so defaults standing in for broken entries do
  // not produce follow-on noise.
  const bool clean = issues.empty();
  std::set<std::string> flagged;
  for (const auto& is : issues) flagged.insert(is.key);
  if (clean && !entries.count("solver.perturbation"))
    c.solver.perturbation_amplitude = 1e-4 * max_element_edge(c.block);
  for (ConfigIssue is : validate(c)) {
    auto it = entries.find(is.key);
    if (!clean && (it == entries.end() || flagged.count(is.key))) continue;
    if (it != entries.end()) is.line = it->second.line;
    issues.push_back(is);
  }
  std::sort(issues.begin(), issues.end(), [](const ConfigIssue& a, const ConfigIssue& b) {
    return a.line < b.line;
  });
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

std::string serialize(const RunConfig& c) {
  std::string out;
  std::string section;
  for (const Field& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string sec = dot == std::string::npos ? "" : f.key.substr(0, dot);
    const std::string key = dot == std::string::npos ? f.key : f.key.substr(dot + 1);
    if (sec != section) {
      out += "\n[" + sec + "]\n";
      section = sec;
    }
    out += key + " = " + f.write(c) + "\n";
  }
  return out;
}

namespace {

RunConfig double_well_base(const std::string& name) {
  RunConfig c;
  c.name = name;
  c.block = {5.0, 5.0, 0.5, 20, 20, 1};
  c.material.model = Model::DoubleWell;
  c.material.alpha = 1e9;
  c.material.eps_well = 0.05;
  c.material.H_chi = 1e5;
  c.material.K_grad = 0.0;
  c.boundary = LoadKind::FixedAll;
  c.solver.load_steps = 1;
  c.solver.max_iters = 1000;
  c.output.prefix = name;
  return c;
}

RunConfig stvk_base(const std::string& name, double compression) {
  RunConfig c;
  c.name = name;
  c.block = {1.0, 1.0, 0.1, 8, 8, 1};
  c.material.model = Model::StVK;
  c.material.lambda_lame = 1.0;
  c.material.mu_lame = 1.0;
  c.material.K_vol = 0.2;
  c.material.H_chi = 1.0;
  c.material.K_grad = 0.0;
  c.boundary = LoadKind::BiaxialAffine;
  c.compression = compression;
  c.solver.load_steps = 20;
  c.solver.max_iters = 400;
  c.output.prefix = name;
  return c;
}

const std::map<std::string, std::function<RunConfig()>>& registry() {
  static const std::map<std::string, std::function<RunConfig()>> r = [] {
    std::map<std::string, std::function<RunConfig()>> m;
    m["stvk_fig1"] = [] { return stvk_base("stvk_fig1", 0.2175); };
    m["stvk_fig2"] = [] {
      RunConfig c = stvk_base("stvk_fig2", 0.25);
      c.material.H_chi = 10.0;
      c.material.K_grad = 0.1;
      return c;
    };
    for (int n : {10, 20, 50}) {
      const std::string name = "dw_local_mesh" + std::to_string(n);
      m[name] = [name, n] {
        RunConfig c = double_well_base(name);
        c.block.nx = c.block.ny = n;
        c.boundary = LoadKind::FixedTopBottom;
        return c;
      };
    }
    for (int k : {1, 10, 50, 250}) {
      const std::string name = "dw_grad_K" + std::to_string(k);
      m[name] = [name, k] {
        RunConfig c = double_well_base(name);
        c.material.K_grad = k;
        return c;
      };
    }
    m["double_well_K10"] = [] {
      RunConfig c = double_well_base("double_well_K10");
      c.material.K_grad = 10.0;
      return c;
    };
    return m;
  }();
  return r;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [n, f] : registry()) names.push_back(n);
  return names;
}

RunConfig preset(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw InvalidParameter("unknown preset '" + name + "'");
  RunConfig c = it->second();
  c.solver.perturbation_amplitude = 1e-4 * max_element_edge(c.block);
  return c;
}

}  // namespace gpc
