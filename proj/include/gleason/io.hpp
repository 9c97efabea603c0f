#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "gleason/domain.hpp"
#include "gleason/errors.hpp"
#include "gleason/lin.hpp"
#include "gleason/operators.hpp"
#include "gleason/polynomial.hpp"
#include "gleason/slice.hpp"

namespace gleason {

using json = nlohmann::ordered_json;

// ---- CSV (deterministic formatting: %.17g, fixed column order) ----

class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
    line(header_);
  }

  void row(const std::vector<std::string>& cells) { line(cells); }

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
  static std::string num(long v) { return std::to_string(v); }
  static std::string num(int v) { return std::to_string(v); }

  const std::string& text() const { return out_; }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << out_;
  }

private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }
  std::vector<std::string> header_;
  std::string out_;
};

// ---- polynomial JSON: {n, terms: [{alpha: [...], re, im}]} ----

inline json polynomial_to_json(const Polynomial& p) {
  json j;
  j["n"] = p.dimension();
  j["terms"] = json::array();
  for (const auto& t : p.terms()) {
    json jt;
    jt["alpha"] = t.alpha;
    jt["re"] = t.c.real();
    jt["im"] = t.c.imag();
    j["terms"].push_back(std::move(jt));
  }
  return j;
}

inline Polynomial polynomial_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  std::vector<Polynomial::Term> terms;
  for (const auto& jt : j.at("terms")) {
    Polynomial::Term t;
    t.alpha = jt.at("alpha").get<std::vector<int>>();
    t.c = {jt.at("re").get<double>(), jt.value("im", 0.0)};
    terms.push_back(std::move(t));
  }
  return Polynomial(n, std::move(terms));
}

// ---- tiny polynomial expression parser: "z1^2 - 0.5*z1*z2^3 + (0,1)*z2" ----

namespace detail {

struct PolyParser {
  std::string s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  double number() {
    skip();
    std::size_t used = 0;
    const double v = std::stod(s.substr(i), &used);
    i += used;
    return v;
  }

  // factor := real | (re,im) | zK[^e]
  bool factor(cplx& coef, std::vector<int>& alpha) {
    skip();
    if (i >= s.size()) return false;
    if (s[i] == '(') {
      ++i;
      const double re = number();
      if (!eat(',')) throw Error("poly parse: expected ',' in complex literal");
      const double im = number();
      if (!eat(')')) throw Error("poly parse: expected ')'");
      coef *= cplx(re, im);
      return true;
    }
    if (s[i] == 'z') {
      ++i;
      skip();
      std::size_t used = 0;
      const int var = std::stoi(s.substr(i), &used);
      i += used;
      if (var < 1) throw Error("poly parse: variables are z1, z2, ...");
      int e = 1;
      if (eat('^')) {
        std::size_t u2 = 0;
        skip();
        e = std::stoi(s.substr(i), &u2);
        i += u2;
      }
      if (static_cast<int>(alpha.size()) < var) alpha.resize(var, 0);
      alpha[var - 1] += e;
      return true;
    }
    if (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.') {
      coef *= number();
      return true;
    }
    return false;
  }
};

}  // namespace detail

inline Polynomial parse_polynomial(const std::string& expr, int n_hint = 0) {
  detail::PolyParser pp{expr};
  struct RawTerm {
    cplx c;
    std::vector<int> alpha;
  };
  std::vector<RawTerm> raw;
  int n = n_hint;
  double sign = 1.0;
  pp.skip();
  if (pp.eat('+')) sign = 1.0;
  else if (pp.eat('-')) sign = -1.0;
  while (true) {
    RawTerm t{cplx(sign), {}};
    if (!pp.factor(t.c, t.alpha)) throw Error("poly parse: expected a term in '" + expr + "'");
    while (true) {
      if (pp.eat('*')) {
        if (!pp.factor(t.c, t.alpha)) throw Error("poly parse: dangling '*'");
      } else {
        const std::size_t save = pp.i;
        pp.skip();
        if (pp.i < pp.s.size() && (pp.s[pp.i] == 'z' || pp.s[pp.i] == '(')) continue;
        pp.i = save;
        break;
      }
    }
    n = std::max<int>(n, static_cast<int>(t.alpha.size()));
    raw.push_back(std::move(t));
    pp.skip();
    if (pp.eat('+')) sign = 1.0;
    else if (pp.eat('-')) sign = -1.0;
    else break;
  }
  if (pp.i < pp.s.size()) throw Error("poly parse: trailing input in '" + expr + "'");
  if (n == 0) n = 2;
  std::vector<Polynomial::Term> terms;
  for (auto& t : raw) {
    t.alpha.resize(n, 0);
    terms.push_back({t.alpha, t.c});
  }
  return Polynomial(n, std::move(terms));
}

// ---- domain catalog JSON: {name, kind, params, epsilon} ----

inline Domain domain_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const std::string name = j.value("name", kind);
  const double epsilon = j.value("epsilon", 1.0);
  const json params = j.value("params", json::object());
  Domain d;
  if (kind == "ball") {
    const double radius = params.value("radius", 1.0);
    CVec center(2, 0.0);
    if (params.contains("center")) {
      const auto c = params["center"].get<std::vector<double>>();
      center = to_complex(c);
    }
    d = make_ball(radius, center, name);
  } else if (kind == "ellipsoid") {
    d = make_ellipsoid(params.at("semi_axes").get<std::vector<double>>(), name);
  } else if (kind == "grange") {
    d = make_grange(name);
  } else if (kind == "annulus_product") {
    const double inner = params.value("inner", 0.5);
    const double outer = params.value("outer", 1.0);
    const double disc = params.value("disc_radius", 1.0);
    cplx c1(0.75, 0.0);
    if (params.contains("center1")) {
      const auto c = params["center1"].get<std::vector<double>>();
      c1 = {c[0], c[1]};
    }
    d = make_annulus_product(inner, outer, c1, disc, name);
  } else if (kind == "custom_polynomial_r") {
    const int n = params.at("n").get<int>();
    RealPoly rp;
    for (const auto& jt : params.at("terms")) {
      RealPoly::Term t;
      t.alpha = jt.at("alpha").get<std::vector<int>>();
      t.c = jt.at("c").get<double>();
      rp.terms.push_back(std::move(t));
    }
    std::vector<std::array<double, 2>> box;
    for (const auto& iv : params.at("bounding_box"))
      box.push_back({iv[0].get<double>(), iv[1].get<double>()});
    const CVec seed = to_complex(params.at("seed").get<std::vector<double>>());
    d = make_custom_polynomial_r(n, std::move(rp), std::move(box), seed, epsilon, name);
  } else {
    throw Error("unknown domain kind '" + kind + "'");
  }
  d.epsilon = epsilon;
  return d;
}

inline Domain load_domain(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read domain spec " + path);
  json j;
  f >> j;
  return domain_from_json(j);
}

// ---- named holomorphic oracles ----

// "poly:<expr>", "json:<path>", or a named rational; an optional "*<scale>"
// suffix scales the function. n_hint pads expression polynomials up to the
// domain dimension.
inline HolomorphicOracle make_oracle(const std::string& spec, int n_hint = 0) {
  std::string body = spec;
  double scale = 1.0;
  const auto star = spec.rfind('*');
  if (star != std::string::npos && spec.find(':') != std::string::npos &&
      star > spec.find(':')) {
    scale = std::stod(spec.substr(star + 1));
    body = spec.substr(0, star);
  }
  HolomorphicOracle o;
  if (body.rfind("poly:", 0) == 0) {
    Polynomial p = parse_polynomial(body.substr(5), n_hint).scaled(scale);
    return HolomorphicOracle::from_polynomial(std::move(p), body);
  }
  if (body.rfind("json:", 0) == 0) {
    std::ifstream f(body.substr(5));
    if (!f) throw Error("cannot read polynomial json " + body.substr(5));
    json j;
    f >> j;
    return HolomorphicOracle::from_polynomial(polynomial_from_json(j).scaled(scale), body);
  }
  if (body == "rational:z1_over_2_minus_z2") {
    o.name = spec;
    o.validity_margin = 0.4;
    o.f = [scale](const CVec& z) { return scale * z[0] / (2.0 - z[1]); };
    return o;
  }
  if (body == "rational:annulus_pole") {
    // pole plane z1 = 3/4: dead center of the catalog annulus hole
    o.name = spec;
    o.validity_margin = 0.0;
    o.f = [scale](const CVec& z) { return scale * z[0] / (z[0] - 0.75); };
    return o;
  }
  throw Error("unknown function spec '" + spec + "'");
}

// ---- report JSON ----

inline json report_to_json(const DecompositionReport& rep) {
  json j;
  j["z"] = json::array();
  for (const auto& c : rep.z) j["z"].push_back({{"re", c.real()}, {"im", c.imag()}});
  j["values"] = json::array();
  for (const auto& c : rep.values) j["values"].push_back({{"re", c.real()}, {"im", c.imag()}});
  j["residual"] = rep.residual;
  j["residual_tol"] = rep.residual_tol;
  j["method"] = rep.method;
  j["status"] = rep.ok ? "OK" : "FAILED";
  if (rep.method == "sy_system") j["determinant_abs"] = rep.det_abs;
  if (rep.method == "approximant_limit") j["approximant_tail"] = rep.approximant_tail;
  return j;
}

inline json certificate_to_json(const CConvexityCertificate& cert) {
  json j;
  switch (cert.verdict) {
    case CConvexityCertificate::Verdict::PASS: j["verdict"] = "PASS"; break;
    case CConvexityCertificate::Verdict::FAIL: j["verdict"] = "FAIL"; break;
    default: j["verdict"] = "INCONCLUSIVE"; break;
  }
  j["lines_checked"] = cert.lines.size();
  j["nonempty_slices"] = cert.nonempty;
  if (cert.witness >= 0) {
    const auto& w = cert.lines[cert.witness];
    json jw;
    jw["line_id"] = w.id;
    jw["a"] = json::array();
    jw["b"] = json::array();
    for (const auto& c : w.a) jw["a"].push_back({{"re", c.real()}, {"im", c.imag()}});
    for (const auto& c : w.b) jw["b"].push_back({{"re", c.real()}, {"im", c.imag()}});
    jw["connected"] = w.connected;
    jw["simply_connected"] = w.simply_connected;
    jw["transversal"] = w.transversal;
    j["witness"] = std::move(jw);
  }
  return j;
}

// ---- minimal JSON-schema checker (type/properties/required/items/enum) ----

inline bool validate_schema(const json& value, const json& schema, std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    const bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
                    (t == "string" && value.is_string()) ||
                    (t == "number" && value.is_number()) ||
                    (t == "integer" && value.is_number_integer()) ||
                    (t == "boolean" && value.is_boolean());
    if (!ok) return fail("expected type " + t);
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& e : schema["enum"])
      if (e == value) ok = true;
    if (!ok) return fail("value not in enum");
  }
  if (schema.contains("required"))
    for (const auto& r : schema["required"])
      if (!value.contains(r.get<std::string>()))
        return fail("missing required field " + r.get<std::string>());
  if (schema.contains("properties") && value.is_object())
    for (const auto& [key, sub] : schema["properties"].items())
      if (value.contains(key) && !validate_schema(value[key], sub, why)) return false;
  if (schema.contains("items") && value.is_array())
    for (const auto& item : value)
      if (!validate_schema(item, schema["items"], why)) return false;
  return true;
}

}  // namespace gleason
