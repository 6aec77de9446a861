#include "nesteq/json_io.hpp"

#include <algorithm>

#include <json.hpp>

namespace nesteq {

using nlohmann::json;

std::string structure_to_json(const Structure& s) {
  json j;
  j["n"] = s.n;
  j["order"] = s.has_order;
  if (!s.eq.empty()) j["eq"] = s.eq;
  if (!s.pre.empty()) j["pre"] = s.pre;
  if (!s.feq.empty()) j["feq"] = s.feq;
  json ju = json::object();
  for (size_t i = 0; i < s.sig.unary.size(); ++i) {
    json elems = json::array();
    for (int e = 0; e < s.n; ++e)
      if (s.uval(int(i), e)) elems.push_back(e);
    ju[s.sig.unary[i]] = elems;
  }
  if (!ju.empty()) j["unary"] = ju;
  json jb = json::object();
  for (size_t i = 0; i < s.sig.binary.size(); ++i) {
    json pairs = json::array();
    for (int a = 0; a < s.n; ++a)
      for (int b = 0; b < s.n; ++b)
        if (s.bval(int(i), a, b)) pairs.push_back(json::array({a, b}));
    jb[s.sig.binary[i]] = pairs;
  }
  if (!jb.empty()) j["binary"] = jb;
  if (!s.constants.empty()) {
    json jc = json::object();
    for (const auto& [name, e] : s.constants) jc[name] = e;
    j["constants"] = jc;
  }
  return j.dump(2);
}

Structure structure_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad structure file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n"))
    throw InputError("bad structure file: missing \"n\"");

  Signature sig;
  int n = j["n"].get<int>();
  if (n < 1) throw InputError("bad structure file: n must be >= 1");
  sig.has_order = j.value("order", false);

  std::vector<std::vector<int>> eq, pre, feq;
  if (j.contains("pre")) pre = j["pre"].get<std::vector<std::vector<int>>>();
  if (j.contains("eq")) eq = j["eq"].get<std::vector<std::vector<int>>>();
  if (j.contains("feq")) feq = j["feq"].get<std::vector<std::vector<int>>>();
  if (eq.empty() && !pre.empty()) eq = pre;  // equivalences induced by levels
  if (!pre.empty() && pre.size() != eq.size())
    throw InputError("bad structure file: eq/pre level counts differ");
  sig.levels = int(eq.size());
  sig.has_pre = !pre.empty();
  sig.f_levels = int(feq.size());
  for (int k = 1; k <= sig.levels; ++k) {
    sig.used_eq_levels.insert(k);
    if (sig.has_pre) sig.used_pre_levels.insert(k);
  }

  std::map<std::string, std::vector<int>> unary;
  if (j.contains("unary"))
    for (auto& [name, arr] : j["unary"].items()) {
      unary[name] = arr.get<std::vector<int>>();
      sig.unary.push_back(name);
    }
  std::map<std::string, std::vector<std::pair<int, int>>> binary;
  if (j.contains("binary"))
    for (auto& [name, arr] : j["binary"].items()) {
      std::vector<std::pair<int, int>> pairs;
      for (auto& p : arr) pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
      binary[name] = std::move(pairs);
      sig.binary.push_back(name);
    }
  if (j.contains("constants"))
    for (auto& [name, e] : j["constants"].items()) sig.constants.push_back(name);
  std::sort(sig.unary.begin(), sig.unary.end());
  std::sort(sig.binary.begin(), sig.binary.end());
  std::sort(sig.constants.begin(), sig.constants.end());

  Structure s = Structure::empty(sig, n, sig.has_pre);
  auto check_levels = [&](const std::vector<std::vector<int>>& lv, const char* what) {
    for (const auto& row : lv)
      if (int(row.size()) != n)
        throw InputError(std::string("bad structure file: ") + what + " row size != n");
  };
  check_levels(eq, "eq");
  check_levels(pre, "pre");
  check_levels(feq, "feq");
  s.eq = eq;
  if (!pre.empty()) s.pre = pre;
  s.feq = feq;
  for (const auto& [name, elems] : unary) {
    int idx = sig.unary_index(name);
    for (int e : elems) {
      if (e < 0 || e >= n) throw InputError("bad structure file: unary element out of range");
      s.set_u(idx, e, true);
    }
  }
  for (const auto& [name, pairs] : binary) {
    int idx = sig.binary_index(name);
    for (auto [a, b] : pairs) {
      if (a < 0 || a >= n || b < 0 || b >= n)
        throw InputError("bad structure file: binary pair out of range");
      s.set_b(idx, a, b, true);
    }
  }
  if (j.contains("constants"))
    for (auto& [name, e] : j["constants"].items()) {
      int v = e.get<int>();
      if (v < 0 || v >= n) throw InputError("bad structure file: constant out of range");
      s.constants[name] = v;
    }
  return s;
}

std::string verdict_to_json(const Verdict& v) {
  json j;
  switch (v.status) {
    case VerdictStatus::Sat: j["status"] = "sat"; break;
    case VerdictStatus::UnsatCertified: j["status"] = "unsat-certified"; break;
    case VerdictStatus::Unknown: j["status"] = "unknown"; break;
  }
  j["cap"] = v.explored_cap;
  if (v.certification_bound)
    j["bound"] = *v.certification_bound;
  else
    j["bound"] = nullptr;
  if (v.model)
    j["model"] = json::parse(structure_to_json(*v.model));
  else
    j["model"] = nullptr;
  j["stats"] = {{"nodes", v.stats.nodes},
                {"millis", v.stats.millis},
                {"largest-size", v.stats.largest_size}};
  return j.dump(2);
}

}  // namespace nesteq
