#include "chainent/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chainent/error.hpp"

namespace chainent {

using json = nlohmann::json;

const char* library_version() { return CHAINENT_VERSION; }

Partition RunConfig::partition() const {
  return second_half ? Partition::second_half(chain.n_sites)
                     : Partition::tracing(chain.n_sites, traced);
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// One JSON object; every key read is marked, finish() rejects the rest.
class Block {
 public:
  Block(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return value_.contains(key); }
  std::string path(const std::string& key) const { return join(path_, key); }

  const json& raw(const std::string& key) {
    if (!value_.contains(key)) throw ConfigError(path(key), "missing required key");
    seen_.insert(key);
    return value_.at(key);
  }

  Block child(const std::string& key) { return Block(raw(key), path(key)); }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path(key), "must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  int integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    return v.get<int>();
  }
  int integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  template <class T>
  T choice(const std::string& key, const std::vector<std::pair<std::string, T>>& options,
           T fallback) {
    if (!has(key)) return fallback;
    const std::string s = string(key);
    std::string allowed;
    for (const auto& [name, value] : options) {
      if (name == s) return value;
      allowed += (allowed.empty() ? "" : ", ") + name;
    }
    throw ConfigError(path(key), "unknown value \"" + s + "\" (expected one of " + allowed + ")");
  }

  void finish() const {
    for (const auto& item : value_.items()) {
      if (!seen_.contains(item.key())) throw ConfigError(path(item.key()), "unknown key");
    }
  }

 private:
  const json& value_;
  std::string path_;
  std::set<std::string> seen_;
};

const std::vector<std::pair<std::string, Boundary>> kBoundaries{{"open", Boundary::open},
                                                                  {"periodic", Boundary::periodic}};
const std::vector<std::pair<std::string, Interpolation>> kInterpolations{
    {"linear", Interpolation::linear}, {"step", Interpolation::step}};

template <class Fn>
void rethrow_at(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

void parse_model(Block& root, RunConfig& c) {
  Block model = root.child("model");
  c.mode = model.choice<ModelMode>(
      "mode", {{"oscillator", ModelMode::oscillator}, {"bose_hubbard", ModelMode::bose_hubbard}},
      ModelMode::oscillator);

  if (c.mode == ModelMode::bose_hubbard) {
    if (model.integer("N", 2) != 2) throw ConfigError(model.path("N"), "Bose-Hubbard mode has N = 2");
    if (model.choice("boundary", kBoundaries, Boundary::open) != Boundary::open) {
      throw ConfigError(model.path("boundary"), "Bose-Hubbard mode uses the open two-site chain");
    }
    c.bose_hubbard.omega_bh_i = model.number("omega_bh_i");
    c.bose_hubbard.omega_bh_f = model.number("omega_bh_f");
    c.bose_hubbard.j = model.number("J");
    model.finish();
    rethrow_at(model.path("omega_bh_i"), [&] { to_oscillator(c.bose_hubbard.omega_bh_i, c.bose_hubbard.j); });
    rethrow_at(model.path("omega_bh_f"),
               [&] { to_oscillator(c.bose_hubbard.omega_bh_f, c.bose_hubbard.j, true); });
    c.chain = c.bose_hubbard.chain();
    return;
  }

  c.chain.n_sites = model.integer("N");
  // Two sites share a single bond; a periodic pair would double it.
  c.chain.boundary = model.choice("boundary", kBoundaries,
                                  c.chain.n_sites == 2 ? Boundary::open : Boundary::periodic);
  Block pre = model.child("pre");
  c.chain.omega_i = pre.number("omega");
  c.chain.k_i = pre.number("k");
  pre.finish();
  if (model.has("post")) {
    Block post = model.child("post");
    c.chain.omega_f = post.number("omega");
    c.chain.k_f = post.number("k");
    post.finish();
  } else {
    c.chain.omega_f = -1.0;  // filled from the quench table or rejected below
  }
  model.finish();
}

void parse_quench(Block& root, RunConfig& c) {
  c.quench = ChainQuench::sudden();
  if (!root.has("quench")) return;
  Block q = root.child("quench");
  c.quench.kind = q.choice<ChainQuench::Kind>(
      "kind", {{"sudden", ChainQuench::Kind::sudden}, {"general", ChainQuench::Kind::general}},
      ChainQuench::Kind::sudden);
  if (c.quench.kind == ChainQuench::Kind::sudden) {
    q.finish();
    return;
  }
  if (c.mode == ModelMode::bose_hubbard) {
    throw ConfigError(q.path("kind"), "general quenches are available in oscillator mode only");
  }
  c.quench.interpolation = q.choice("interpolation", kInterpolations, Interpolation::linear);
  c.quench.tolerance = q.number("tolerance", 1e-10);
  const json& table = q.raw("table");
  if (!table.is_array() || table.empty()) {
    throw ConfigError(q.path("table"), "expected a non-empty array of [t, omega, k] rows");
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string row_path = q.path("table") + "[" + std::to_string(i) + "]";
    const json& row = table[i];
    if (!row.is_array() || row.size() != 3 ||
        !std::all_of(row.begin(), row.end(), [](const json& x) { return x.is_number(); })) {
      throw ConfigError(row_path, "expected [t, omega, k]");
    }
    c.quench.table.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
  }
  q.finish();
  rethrow_at(q.path("table"), [&] { c.quench.validate(); });
}

void parse_partition(Block& root, RunConfig& c) {
  c.second_half = true;
  c.traced.clear();
  if (!root.has("partition")) return;
  Block p = root.child("partition");
  if (p.has("traced")) {
    const json& traced = p.raw("traced");
    if (traced.is_string()) {
      if (traced.get<std::string>() != "second_half") {
        throw ConfigError(p.path("traced"), "expected \"second_half\" or a list of sites");
      }
    } else if (traced.is_array()) {
      c.second_half = false;
      for (const json& s : traced) {
        if (!s.is_number_integer()) throw ConfigError(p.path("traced"), "sites must be integers");
        c.traced.push_back(s.get<int>() - 1);
      }
    } else {
      throw ConfigError(p.path("traced"), "expected \"second_half\" or a list of sites");
    }
  }
  p.finish();
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  Block root(doc, "");
  RunConfig c;
  if (root.has("version")) root.string("version");

  parse_model(root, c);
  parse_quench(root, c);

  if (c.mode == ModelMode::oscillator) {
    const bool general = c.quench.kind == ChainQuench::Kind::general;
    if (c.chain.omega_f < 0.0 && !general) {
      throw ConfigError("model.post", "missing required key (sudden quench target)");
    }
    if (general) {
      if (c.chain.omega_f >= 0.0) {
        throw ConfigError("model.post", "not used by a general quench; use quench.table");
      }
      c.chain.omega_f = c.quench.table.back().omega;
      c.chain.k_f = c.quench.table.back().k;
    }
    rethrow_at("model", [&] { c.chain.validate(); });
  }

  parse_partition(root, c);
  rethrow_at("partition.traced", [&] { c.partition(); });

  {
    Block time = root.child("time");
    c.t_max = time.number("t_max");
    c.dt = time.number("dt");
    time.finish();
    if (!(c.dt > 0.0)) throw ConfigError("time.dt", "must be positive");
    if (!(c.t_max >= c.dt)) throw ConfigError("time.t_max", "must be >= time.dt");
  }

  c.alphas = {1};
  if (root.has("entropy")) {
    Block e = root.child("entropy");
    if (e.has("alphas")) {
      const json& alphas = e.raw("alphas");
      if (!alphas.is_array() || alphas.empty()) {
        throw ConfigError(e.path("alphas"), "expected a non-empty list of positive integers");
      }
      c.alphas.clear();
      for (const json& a : alphas) {
        if (!a.is_number_integer() || a.get<int>() < 1) {
          throw ConfigError(e.path("alphas"), "Renyi orders must be positive integers");
        }
        c.alphas.push_back(a.get<int>());
      }
      std::sort(c.alphas.begin(), c.alphas.end());
      c.alphas.erase(std::unique(c.alphas.begin(), c.alphas.end()), c.alphas.end());
    }
    e.finish();
  }

  if (root.has("output")) {
    Block o = root.child("output");
    c.output_path = o.string("path", "");
    c.precision = o.integer("precision", 12);
    o.finish();
    if (c.precision < 1 || c.precision > 17) {
      throw ConfigError("output.precision", "must be between 1 and 17 significant digits");
    }
  }
  root.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string canonical_json(const RunConfig& c) {
  json model;
  if (c.mode == ModelMode::bose_hubbard) {
    model = {{"mode", "bose_hubbard"},
             {"omega_bh_i", c.bose_hubbard.omega_bh_i},
             {"omega_bh_f", c.bose_hubbard.omega_bh_f},
             {"J", c.bose_hubbard.j}};
  } else {
    model = {{"mode", "oscillator"},
             {"N", c.chain.n_sites},
             {"boundary", c.chain.boundary == Boundary::open ? "open" : "periodic"},
             {"pre", {{"omega", c.chain.omega_i}, {"k", c.chain.k_i}}}};
    if (c.quench.kind == ChainQuench::Kind::sudden) {
      model["post"] = {{"omega", c.chain.omega_f}, {"k", c.chain.k_f}};
    }
  }
  json quench = {{"kind", c.quench.kind == ChainQuench::Kind::sudden ? "sudden" : "general"}};
  if (c.quench.kind == ChainQuench::Kind::general) {
    quench["interpolation"] = c.quench.interpolation == Interpolation::linear ? "linear" : "step";
    quench["tolerance"] = c.quench.tolerance;
    json table = json::array();
    for (const auto& row : c.quench.table) table.push_back({row.t, row.omega, row.k});
    quench["table"] = table;
  }
  json traced;
  if (c.second_half) {
    traced = "second_half";
  } else {
    traced = json::array();
    for (int s : c.traced) traced.push_back(s + 1);
  }
  const json doc = {{"version", library_version()},
                    {"model", model},
                    {"quench", quench},
                    {"partition", {{"traced", traced}}},
                    {"time", {{"t_max", c.t_max}, {"dt", c.dt}}},
                    {"entropy", {{"alphas", c.alphas}}},
                    {"output", {{"precision", c.precision}}}};
  return doc.dump();
}

std::string with_override(std::string_view text, const std::string& key,
                          const std::string& value) {
  json doc;
  json parsed;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;  // bare words are strings
  }
  if (key.empty()) throw ConfigError("<param>", "empty parameter key");
  json* node = &doc;
  std::string path;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError(key, "malformed parameter key");
    path = join(path, part);
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) throw ConfigError(path, "cannot descend into a non-object");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = parsed;
  return doc.dump();
}

}  // namespace chainent
