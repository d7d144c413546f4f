#include "fracfem/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fracfem/cases.hpp"

namespace fracfem {

namespace {

using nlohmann::json;

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

template <typename T>
T get(const json& value, const std::string& where) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: bad value for '" + where + "': " + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw std::invalid_argument("config: unknown key '" + where + it.key() + "'");
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

RunConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown(root, {"case", "orders", "domain", "ladders", "t_eval", "tolerances", "output_dir"}, "");

  RunConfig cfg;
  const json* c = find(root, "case");
  if (!c) throw std::invalid_argument("config: missing 'case'");
  cfg.case_name = get<std::string>(*c, "case");

  const json* o = find(root, "orders");
  if (!o || !o->is_object()) throw std::invalid_argument("config: missing 'orders'");
  reject_unknown(*o, {"alpha", "lower", "horizon"}, "orders.");
  const json* alpha = find(*o, "alpha");
  if (!alpha) throw std::invalid_argument("config: missing 'orders.alpha'");
  std::vector<LowerOrder> lower;
  if (const json* lo = find(*o, "lower")) {
    if (!lo->is_array()) throw std::invalid_argument("config: 'orders.lower' must be an array");
    for (const auto& term : *lo) {
      if (!term.is_object()) throw std::invalid_argument("config: bad entry in 'orders.lower'");
      reject_unknown(term, {"order", "weight"}, "orders.lower[].");
      if (!term.contains("order") || !term.contains("weight")) {
        throw std::invalid_argument("config: 'orders.lower' entries need order and weight");
      }
      lower.push_back({get<double>(term["order"], "orders.lower[].order"),
                       get<double>(term["weight"], "orders.lower[].weight")});
    }
  }
  double horizon = 1.0;
  if (const json* h = find(*o, "horizon")) horizon = get<double>(*h, "orders.horizon");
  cfg.orders = FracOrders(get<double>(*alpha, "orders.alpha"), lower, horizon);

  // Validates the case name and supplies the default domain.
  const DataCase data = make_case(cfg.case_name, cfg.orders);
  cfg.domain = data.domain;
  if (const json* d = find(root, "domain")) {
    cfg.domain = parse_domain(get<std::string>(*d, "domain"));
    if (cfg.domain != data.domain) {
      throw std::invalid_argument("config: domain does not match case '" + cfg.case_name + "'");
    }
  }

  if (const json* l = find(root, "ladders")) {
    reject_unknown(*l, {"resolutions", "steps", "times", "resolution", "aligned"}, "ladders.");
    if (const json* v = find(*l, "resolutions")) cfg.resolutions = get<std::vector<int>>(*v, "ladders.resolutions");
    if (const json* v = find(*l, "steps")) cfg.steps = get<std::vector<int>>(*v, "ladders.steps");
    if (const json* v = find(*l, "times")) cfg.times = get<std::vector<double>>(*v, "ladders.times");
    if (const json* v = find(*l, "resolution")) cfg.resolution = get<int>(*v, "ladders.resolution");
    if (const json* v = find(*l, "aligned")) cfg.aligned = get<bool>(*v, "ladders.aligned");
  } else {
    cfg.aligned = !data.needs_unaligned_mesh();
  }
  for (int n : cfg.resolutions) {
    if (n < 2) throw std::invalid_argument("config: resolutions must be >= 2");
  }
  for (int k : cfg.steps) {
    if (k < 1) throw std::invalid_argument("config: steps must be >= 1");
  }
  for (double t : cfg.times) {
    if (!(t > 0.0)) throw std::invalid_argument("config: times must be positive");
  }
  if (cfg.resolution < 2) throw std::invalid_argument("config: resolution must be >= 2");

  if (const json* t = find(root, "t_eval")) {
    cfg.t_eval = t->is_array() ? get<std::vector<double>>(*t, "t_eval")
                               : std::vector<double>{get<double>(*t, "t_eval")};
  }
  if (cfg.t_eval.empty()) cfg.t_eval.push_back(horizon);
  for (double t : cfg.t_eval) {
    if (!(t > 0.0) || t > horizon) throw std::invalid_argument("config: t_eval must lie in (0, T]");
  }

  if (const json* tol = find(root, "tolerances")) {
    reject_unknown(*tol, {"rate", "reference_modes"}, "tolerances.");
    if (const json* v = find(*tol, "rate")) cfg.rate_tolerance = get<double>(*v, "tolerances.rate");
    if (const json* v = find(*tol, "reference_modes")) {
      cfg.reference_modes = get<int>(*v, "tolerances.reference_modes");
    }
  }
  if (const json* out = find(root, "output_dir")) cfg.output_dir = get<std::string>(*out, "output_dir");

  cfg.canonical = root.dump();
  cfg.hash = fnv1a64(cfg.canonical);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fracfem
