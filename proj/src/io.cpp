#include "potentia/io.hpp"

#include <charconv>
#include <fstream>

namespace potentia {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const ParseError& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

ControlKind parse_kind(const std::string& k) {
  for (auto kind : {ControlKind::SwitchFamily, ControlKind::Dial, ControlKind::ButtonFamily, ControlKind::Ratchet,
                    ControlKind::LongRatchet})
    if (to_string(kind) == k) return kind;
  throw FormatError("unknown certificate kind '" + k + "'");
}

std::vector<FOFormula> parse_formulas(const Json& arr, const Signature& sig) {
  std::vector<FOFormula> out;
  for (const auto& t : arr) out.push_back(parse_fo(t.get<std::string>(), sig));
  return out;
}

Json texts(const std::vector<FOFormula>& fs) {
  Json arr = Json::array();
  for (const auto& f : fs) arr.push_back(to_string(f));
  return arr;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

Json system_to_json(const PotentialistSystem& s) {
  Json j;
  Json rels = Json::array();
  for (const auto& r : s.signature().relations()) rels.push_back({{"name", r.name}, {"arity", r.arity}});
  j["signature"] = {{"relations", rels}};
  Json worlds = Json::array();
  for (std::size_t w = 0; w < s.size(); ++w) {
    const auto& m = s.world(w);
    Json rj = Json::object();
    for (std::size_t r = 0; r < s.signature().relations().size(); ++r) rj[s.signature().relations()[r].name] = m.tuples(r);
    worlds.push_back({{"id", s.name(w)}, {"domain", m.domain()}, {"relations", rj}});
  }
  j["worlds"] = worlds;
  if (s.mode() == AccessMode::Substructure) {
    j["access"] = "substructure";
  } else {
    Json pairs = Json::array();
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b)
        if (s.frame().access(a, b)) pairs.push_back({a, b});
    j["access"] = pairs;
  }
  return j;
}

PotentialistSystem system_from_json(const Json& j) {
  return guarded("system", [&] {
    std::vector<RelationSymbol> rels;
    for (const auto& r : j.at("signature").at("relations"))
      rels.push_back({r.at("name").get<std::string>(), r.at("arity").get<int>()});
    Signature sig(rels);
    std::vector<Structure> worlds;
    std::vector<std::string> names;
    for (const auto& w : j.at("worlds")) {
      names.push_back(w.at("id").get<std::string>());
      std::vector<std::vector<std::vector<ElementId>>> tuples(rels.size());
      if (w.contains("relations")) {
        for (const auto& [name, list] : w.at("relations").items()) {
          auto idx = sig.find(name);
          if (!idx) throw FormatError("world " + names.back() + ": unknown relation '" + name + "'");
          tuples[*idx] = list.get<std::vector<std::vector<ElementId>>>();
        }
      }
      try {
        worlds.emplace_back(sig, w.at("domain").get<std::vector<ElementId>>(), std::move(tuples));
      } catch (const std::invalid_argument& e) {
        throw FormatError("world " + names.back() + ": " + e.what());
      }
    }
    const auto& acc = j.at("access");
    if (acc.is_string()) {
      if (acc.get<std::string>() != "substructure") throw FormatError("access must be \"substructure\" or a pair list");
      return check_potentialist(std::move(worlds), AccessMode::Substructure, std::move(names));
    }
    Frame f(worlds.size());
    for (const auto& p : acc) {
      auto a = p.at(0).get<std::size_t>(), b = p.at(1).get<std::size_t>();
      if (a >= worlds.size() || b >= worlds.size()) throw FormatError("access pair out of range");
      f.set_access(a, b);
    }
    return check_potentialist(std::move(worlds), f, std::move(names));
  });
}

Json model_to_json(const KripkeModel& m) {
  Json pairs = Json::array();
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b)
      if (m.frame().access(a, b)) pairs.push_back({a, b});
  Json val = Json::object();
  for (std::size_t u = 0; u < m.size(); ++u) val[std::to_string(u)] = m.true_at(u);
  return {{"worlds", m.size()}, {"access", pairs}, {"valuation", val}};
}

KripkeModel model_from_json(const Json& j) {
  return guarded("model", [&] {
    const auto n = j.at("worlds").get<std::size_t>();
    if (n == 0 || n > 64) throw FormatError("model: worlds must be 1..64");
    Frame f(n);
    for (const auto& p : j.at("access")) {
      auto a = p.at(0).get<std::size_t>(), b = p.at(1).get<std::size_t>();
      if (a >= n || b >= n) throw FormatError("model: access pair out of range");
      f.set_access(a, b);
    }
    std::vector<std::set<int>> val(n);
    std::size_t vars = 0;
    if (j.contains("valuation")) {
      for (const auto& [key, list] : j.at("valuation").items()) {
        std::size_t u = 0;
        auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), u);
        if (ec != std::errc() || ptr != key.data() + key.size() || u >= n)
          throw FormatError("model: bad valuation world '" + key + "'");
        for (int v : list.get<std::vector<int>>()) {
          if (v < 0) throw FormatError("model: negative variable index");
          val[u].insert(v);
          vars = std::max(vars, static_cast<std::size_t>(v) + 1);
        }
      }
    }
    return KripkeModel(f, vars, val);
  });
}

Json countermodel_to_json(const Countermodel& m) {
  Json j = model_to_json(m.model);
  j["failing_world"] = m.world;
  j["class"] = to_string(m.cls);
  if (m.shape) j["shape"] = {{"blocks", m.shape->blocks}, {"cluster_size", m.shape->cluster_size}};
  return j;
}

Json certificate_to_json(const ControlCertificate& c) {
  Json j;
  j["kind"] = to_string(c.kind());
  j["formulas"] = texts(c.formulas());
  j["system"] = c.system();
  j["base"] = c.base_world();
  if (c.companion()) {
    j["companion"] = {{"kind", c.companion()->kind == CompanionKind::Dial ? "dial" : "switches"},
                      {"formulas", texts(c.companion()->formulas)}};
  }
  return j;
}

std::size_t resolve_world(const PotentialistSystem& s, const std::string& id) {
  const auto& names = s.names();
  for (std::size_t w = 0; w < names.size(); ++w)
    if (names[w] == id) return w;
  std::size_t w = 0;
  auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), w);
  if (ec == std::errc() && ptr == id.data() + id.size() && w < s.size()) return w;
  throw FormatError("unknown world '" + id + "'");
}

ControlCertificate certificate_from_json(const Json& j, const PotentialistSystem& s) {
  return guarded("certificate", [&] {
    const ControlKind kind = parse_kind(j.at("kind").get<std::string>());
    auto formulas = parse_formulas(j.at("formulas"), s.signature());
    const auto& b = j.at("base");
    const std::size_t base = b.is_string() ? resolve_world(s, b.get<std::string>()) : b.get<std::size_t>();
    if (base >= s.size()) throw FormatError("certificate: base world out of range");
    std::optional<Companion> comp;
    if (j.contains("companion")) {
      const auto& cj = j.at("companion");
      const auto ck = cj.at("kind").get<std::string>();
      if (ck != "dial" && ck != "switches") throw FormatError("companion kind must be dial or switches");
      comp = Companion{ck == "dial" ? CompanionKind::Dial : CompanionKind::Switches,
                       parse_formulas(cj.at("formulas"), s.signature())};
    }
    return ControlCertificate(kind, std::move(formulas), base, std::move(comp),
                              j.value("system", std::string{}));
  });
}

}  // namespace potentia
