#pragma once

// Problem files: JSON, schema version 1. Expressions are grammar text.
// Schema violations name the offending JSON pointer.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "jlm/noether/noether.hpp"
#include "jlm/numlab/numlab.hpp"

namespace jlm {

using json = nlohmann::json;

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : std::runtime_error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct Golden {
  std::string label;
  std::string text;
  Expr expr;
};

struct NumericScenario {
  ParamValues params;
  InitialState ic;
  NumReal t_end = 1;
  NumReal h = 1e-3L;
};

struct NoetherClaim {
  std::string lagrangian;  // golden label
  std::size_t dimension = 0;
};

struct GaugeClaim {
  std::string lagrangian;
  std::vector<std::string> integrals;  // golden labels that need a gauge
};

struct MapClaim {
  std::string label;
  PointMap map;
  Expr target_F;
  bool expect_zero = true;
};

struct Problem {
  std::string name;
  std::vector<std::string> params;
  std::map<std::string, double> param_values;
  SecondOrderODE ode;
  std::optional<LienardForm> given_lienard;  // when the file states f, g
  std::vector<PointSymmetry> symmetries;
  std::vector<Golden> multipliers, lagrangians, integrals;
  std::optional<NumericScenario> numeric;
  NoetherOptions noether;
  std::vector<NoetherClaim> noether_claims;
  std::vector<GaugeClaim> gauge_claims;
  std::vector<MapClaim> map_claims;
};

namespace detail {

class ProblemReader {
 public:
  explicit ProblemReader(const json& root) : root_(root) {}

  Problem read() {
    Problem p;
    require_object(root_, "");
    allow_keys(root_, "", {"schema", "name", "parameters", "ode", "symmetries", "expected", "numeric", "noether", "claims"});
    const json& schema = field(root_, "", "schema");
    if (!schema.is_number_integer() || schema.get<int>() != 1) throw SchemaError("/schema", "must be the integer 1");
    p.name = string_at(root_, "", "name");
    if (root_.contains("parameters")) read_parameters(p);
    read_ode(p);
    if (root_.contains("symmetries")) read_symmetries(p);
    if (root_.contains("expected")) read_expected(p);
    if (root_.contains("numeric")) read_numeric(p);
    if (root_.contains("noether")) read_noether(p);
    if (root_.contains("claims")) read_claims(p);
    return p;
  }

 private:
  static void require_object(const json& j, const std::string& ptr) {
    if (!j.is_object()) throw SchemaError(ptr.empty() ? "/" : ptr, "must be an object");
  }
  static void allow_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (const char* a : keys) known = known || k == a;
      if (!known) throw SchemaError(ptr + "/" + k, "unknown field");
    }
  }
  static const json& field(const json& j, const std::string& ptr, const std::string& key) {
    if (!j.contains(key)) throw SchemaError(ptr + "/" + key, "missing required field");
    return j.at(key);
  }
  static std::string string_at(const json& j, const std::string& ptr, const std::string& key) {
    const json& v = field(j, ptr, key);
    if (!v.is_string()) throw SchemaError(ptr + "/" + key, "must be a string");
    return v.get<std::string>();
  }
  static double number_at(const json& j, const std::string& ptr) {
    if (!j.is_number()) throw SchemaError(ptr, "must be a number");
    return j.get<double>();
  }

  Expr expr(const std::string& text, const std::string& ptr) const {
    try {
      return parse(text, params_);
    } catch (const ParseError& e) {
      throw SchemaError(ptr, std::string("parse error: ") + e.what());
    } catch (const std::exception& e) {
      throw SchemaError(ptr, e.what());
    }
  }
  Expr expr_at(const json& j, const std::string& ptr, const std::string& key) const {
    return expr(string_at(j, ptr, key), ptr + "/" + key);
  }

  void read_parameters(Problem& p) {
    const json& ps = root_.at("parameters");
    if (!ps.is_array()) throw SchemaError("/parameters", "must be an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      std::string ptr = "/parameters/" + std::to_string(i);
      require_object(ps[i], ptr);
      allow_keys(ps[i], ptr, {"name", "value"});
      std::string name = string_at(ps[i], ptr, "name");
      if (is_reserved(name)) throw SchemaError(ptr + "/name", "'" + name + "' is a reserved symbol");
      if (std::find(p.params.begin(), p.params.end(), name) != p.params.end()) {
        throw SchemaError(ptr + "/name", "duplicate parameter '" + name + "'");
      }
      p.params.push_back(name);
      if (ps[i].contains("value")) p.param_values[name] = number_at(ps[i]["value"], ptr + "/value");
    }
    params_ = p.params;
  }

  void read_ode(Problem& p) {
    const json& o = field(root_, "", "ode");
    require_object(o, "/ode");
    allow_keys(o, "/ode", {"F", "f", "g"});
    bool hasF = o.contains("F"), hasf = o.contains("f"), hasg = o.contains("g");
    if (hasF && (hasf || hasg)) throw SchemaError("/ode", "give either F or the pair f, g, not both");
    if (hasF) {
      p.ode = {expr_at(o, "/ode", "F"), p.name, p.params};
    } else if (hasf && hasg) {
      Expr f = expr_at(o, "/ode", "f"), g = expr_at(o, "/ode", "g");
      for (const auto& [e, k] : {std::pair{f, "f"}, std::pair{g, "g"}}) {
        auto fs = free_symbols(e);
        if (fs.count(names::t) || fs.count(names::v)) throw SchemaError(std::string("/ode/") + k, "must depend on x only");
      }
      p.given_lienard = LienardForm{f, g};
      p.ode = {simplify(-f * V() - g), p.name, p.params};
    } else {
      throw SchemaError("/ode", "needs F, or both f and g");
    }
  }

  void read_symmetries(Problem& p) {
    const json& ss = root_.at("symmetries");
    if (!ss.is_array()) throw SchemaError("/symmetries", "must be an array");
    for (std::size_t i = 0; i < ss.size(); ++i) {
      std::string ptr = "/symmetries/" + std::to_string(i);
      require_object(ss[i], ptr);
      allow_keys(ss[i], ptr, {"label", "tau", "xi"});
      PointSymmetry s{expr_at(ss[i], ptr, "tau"), expr_at(ss[i], ptr, "xi"), string_at(ss[i], ptr, "label")};
      for (const auto& [e, k] : {std::pair{s.tau, "tau"}, std::pair{s.xi, "xi"}}) {
        if (depends_on(e, names::v)) throw SchemaError(ptr + "/" + k, "point symmetries depend on t, x only");
      }
      p.symmetries.push_back(std::move(s));
    }
  }

  std::vector<Golden> goldens(const json& arr, const std::string& ptr, const std::string& prefix) const {
    if (!arr.is_array()) throw SchemaError(ptr, "must be an array");
    std::vector<Golden> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string ip = ptr + "/" + std::to_string(i);
      Golden g;
      if (arr[i].is_string()) {
        g.label = prefix + std::to_string(i + 1);
        g.text = arr[i].get<std::string>();
        g.expr = expr(g.text, ip);
      } else {
        require_object(arr[i], ip);
        allow_keys(arr[i], ip, {"label", "expr"});
        g.label = string_at(arr[i], ip, "label");
        g.text = string_at(arr[i], ip, "expr");
        g.expr = expr(g.text, ip + "/expr");
      }
      out.push_back(std::move(g));
    }
    return out;
  }

  void read_expected(Problem& p) {
    const json& e = root_.at("expected");
    require_object(e, "/expected");
    allow_keys(e, "/expected", {"multipliers", "lagrangians", "integrals"});
    if (e.contains("multipliers")) p.multipliers = goldens(e["multipliers"], "/expected/multipliers", "M");
    if (e.contains("lagrangians")) p.lagrangians = goldens(e["lagrangians"], "/expected/lagrangians", "L");
    if (e.contains("integrals")) p.integrals = goldens(e["integrals"], "/expected/integrals", "I");
  }

  void read_numeric(Problem& p) {
    const json& n = root_.at("numeric");
    require_object(n, "/numeric");
    allow_keys(n, "/numeric", {"params", "ic", "t_end", "h"});
    NumericScenario s;
    for (const auto& [k, v] : p.param_values) s.params[k] = v;
    if (n.contains("params")) {
      require_object(n["params"], "/numeric/params");
      for (const auto& [k, v] : n["params"].items()) {
        if (std::find(p.params.begin(), p.params.end(), k) == p.params.end()) {
          throw SchemaError("/numeric/params/" + k, "undeclared parameter");
        }
        s.params[k] = number_at(v, "/numeric/params/" + k);
      }
    }
    for (const auto& name : p.params) {
      if (!s.params.count(name)) throw SchemaError("/numeric/params", "no value for parameter '" + name + "'");
    }
    const json& ic = field(n, "/numeric", "ic");
    if (!ic.is_array() || ic.size() != 3) throw SchemaError("/numeric/ic", "must be [t0, x0, v0]");
    s.ic = {number_at(ic[0], "/numeric/ic/0"), number_at(ic[1], "/numeric/ic/1"), number_at(ic[2], "/numeric/ic/2")};
    s.t_end = number_at(field(n, "/numeric", "t_end"), "/numeric/t_end");
    if (n.contains("h")) s.h = number_at(n["h"], "/numeric/h");
    if (!(s.h > 0)) throw SchemaError("/numeric/h", "must be positive");
    if (!(s.t_end > s.ic.t0)) throw SchemaError("/numeric/t_end", "must exceed t0");
    p.numeric = s;
  }

  void read_noether(Problem& p) {
    const json& n = root_.at("noether");
    require_object(n, "/noether");
    allow_keys(n, "/noether", {"degree", "exp_rates", "exp_span"});
    if (n.contains("degree")) {
      if (!n["degree"].is_number_integer()) throw SchemaError("/noether/degree", "must be an integer");
      p.noether.degree = n["degree"].get<int>();
    }
    if (n.contains("exp_span")) {
      if (!n["exp_span"].is_number_integer()) throw SchemaError("/noether/exp_span", "must be an integer");
      p.noether.exp_span = n["exp_span"].get<int>();
    }
    if (n.contains("exp_rates")) {
      const json& r = n["exp_rates"];
      if (!r.is_array()) throw SchemaError("/noether/exp_rates", "must be an array");
      for (std::size_t i = 0; i < r.size(); ++i) {
        std::string ptr = "/noether/exp_rates/" + std::to_string(i);
        if (!r[i].is_string()) throw SchemaError(ptr, "must be a string");
        Expr e = expr(r[i].get<std::string>(), ptr);
        for (const auto& s : free_symbols(e)) {
          if (is_reserved(s)) throw SchemaError(ptr, "rates may only involve parameters");
        }
        p.noether.exp_rates.push_back(e);
      }
    }
  }

  const Golden* find(const std::vector<Golden>& gs, const std::string& label) const {
    for (const auto& g : gs) {
      if (g.label == label) return &g;
    }
    return nullptr;
  }

  void read_claims(Problem& p) {
    const json& c = root_.at("claims");
    require_object(c, "/claims");
    allow_keys(c, "/claims", {"noether_dimensions", "gauge_necessity", "point_maps"});
    if (c.contains("noether_dimensions")) {
      const json& a = c["noether_dimensions"];
      if (!a.is_array()) throw SchemaError("/claims/noether_dimensions", "must be an array");
      for (std::size_t i = 0; i < a.size(); ++i) {
        std::string ptr = "/claims/noether_dimensions/" + std::to_string(i);
        require_object(a[i], ptr);
        allow_keys(a[i], ptr, {"lagrangian", "dimension"});
        NoetherClaim nc{string_at(a[i], ptr, "lagrangian"), 0};
        if (!find(p.lagrangians, nc.lagrangian)) throw SchemaError(ptr + "/lagrangian", "no expected Lagrangian '" + nc.lagrangian + "'");
        const json& d = field(a[i], ptr, "dimension");
        if (!d.is_number_unsigned()) throw SchemaError(ptr + "/dimension", "must be a non-negative integer");
        nc.dimension = d.get<std::size_t>();
        p.noether_claims.push_back(nc);
      }
    }
    if (c.contains("gauge_necessity")) {
      const json& a = c["gauge_necessity"];
      if (!a.is_array()) throw SchemaError("/claims/gauge_necessity", "must be an array");
      for (std::size_t i = 0; i < a.size(); ++i) {
        std::string ptr = "/claims/gauge_necessity/" + std::to_string(i);
        require_object(a[i], ptr);
        allow_keys(a[i], ptr, {"lagrangian", "integrals"});
        GaugeClaim gc{string_at(a[i], ptr, "lagrangian"), {}};
        if (!find(p.lagrangians, gc.lagrangian)) throw SchemaError(ptr + "/lagrangian", "no expected Lagrangian '" + gc.lagrangian + "'");
        const json& ints = field(a[i], ptr, "integrals");
        if (!ints.is_array()) throw SchemaError(ptr + "/integrals", "must be an array");
        for (std::size_t k = 0; k < ints.size(); ++k) {
          std::string ip = ptr + "/integrals/" + std::to_string(k);
          if (!ints[k].is_string() || !find(p.integrals, ints[k].get<std::string>())) {
            throw SchemaError(ip, "must name an expected integral");
          }
          gc.integrals.push_back(ints[k].get<std::string>());
        }
        p.gauge_claims.push_back(gc);
      }
    }
    if (c.contains("point_maps")) {
      const json& a = c["point_maps"];
      if (!a.is_array()) throw SchemaError("/claims/point_maps", "must be an array");
      for (std::size_t i = 0; i < a.size(); ++i) {
        std::string ptr = "/claims/point_maps/" + std::to_string(i);
        require_object(a[i], ptr);
        allow_keys(a[i], ptr, {"label", "t_new", "x_new", "target_F", "expect"});
        MapClaim mc;
        mc.label = string_at(a[i], ptr, "label");
        mc.map = {expr_at(a[i], ptr, "t_new"), expr_at(a[i], ptr, "x_new")};
        mc.target_F = expr_at(a[i], ptr, "target_F");
        if (a[i].contains("expect")) {
          std::string e = string_at(a[i], ptr, "expect");
          if (e != "zero" && e != "nonzero") throw SchemaError(ptr + "/expect", "must be \"zero\" or \"nonzero\"");
          mc.expect_zero = e == "zero";
        }
        p.map_claims.push_back(mc);
      }
    }
  }

  const json& root_;
  std::vector<std::string> params_;
};

}  // namespace detail

inline Problem problem_from_json(const json& j) { return detail::ProblemReader(j).read(); }

inline Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(j);
}

}  // namespace jlm
