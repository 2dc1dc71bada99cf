#pragma once

// Instance and strategy files (JSON), plus a content hash for instances.
//
// Instance file:
//   {
//     "locations": ["x1", ...],
//     "components": [{"id": "u1", "security_level": 0.5}, ...],
//     "monitoring_sets": {"x1": ["u1", ...], ...},
//     "budget": 1                                   (optional)
//   }

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netmon/errors.hpp"
#include "netmon/instance.hpp"

namespace netmon {

using ordered_json = nlohmann::ordered_json;

namespace io_detail {

inline std::size_t line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

/// Line of the n-th occurrence (from 1) of "key" in the text; 0 if absent.
inline std::size_t line_of(const std::string& text, const std::string& key, int nth = 1) {
  const std::string quoted = "\"" + key + "\"";
  std::size_t pos = std::string::npos, from = 0;
  for (int i = 0; i < nth; ++i) {
    pos = text.find(quoted, from);
    if (pos == std::string::npos) return 0;
    from = pos + 1;
  }
  return line_at(text, pos);
}

[[noreturn]] inline void fail(const std::string& text, const std::string& key,
                              const std::string& what, int nth = 1) {
  const std::size_t line = line_of(text, key, nth);
  throw InputError((line ? "line " + std::to_string(line) + ", " : std::string()) + "key '" +
                   key + "': " + what);
}

/// Parses JSON rejecting duplicate keys inside any object.
inline ordered_json parse_strict(const std::string& text) {
  std::vector<std::set<std::string>> open;
  std::map<std::string, int> seen_count;
  auto cb = [&](int, ordered_json::parse_event_t ev, ordered_json& parsed) {
    using E = ordered_json::parse_event_t;
    if (ev == E::object_start) open.emplace_back();
    if (ev == E::object_end && !open.empty()) open.pop_back();
    if (ev == E::key) {
      const auto key = parsed.get<std::string>();
      ++seen_count[key];
      if (!open.empty() && !open.back().insert(key).second) {
        fail(text, key, "duplicate key", seen_count[key]);
      }
    }
    return true;
  };
  try {
    return ordered_json::parse(text, cb);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("line " + std::to_string(line_at(text, e.byte > 0 ? e.byte - 1 : 0)) +
                     ": malformed JSON: " + e.what());
  }
}

}  // namespace io_detail

inline Instance parse_instance(const std::string& text) {
  using io_detail::fail;
  const auto doc = io_detail::parse_strict(text);
  if (!doc.is_object()) throw InputError("line 1: instance file must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "locations" && key != "components" && key != "monitoring_sets" && key != "budget") {
      fail(text, key, "unknown key");
    }
  }
  for (const char* key : {"locations", "components", "monitoring_sets"}) {
    if (!doc.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  }

  const auto& locs = doc["locations"];
  if (!locs.is_array()) fail(text, "locations", "expected a list of strings");
  std::vector<std::string> locations;
  std::set<std::string> loc_seen;
  for (const auto& l : locs) {
    if (!l.is_string()) fail(text, "locations", "expected a list of strings");
    const auto id = l.get<std::string>();
    if (!loc_seen.insert(id).second) fail(text, id, "duplicate location id", 2);
    locations.push_back(id);
  }

  const auto& comps = doc["components"];
  if (!comps.is_array()) fail(text, "components", "expected a list of objects");
  std::vector<std::pair<std::string, double>> components;
  std::set<std::string> comp_seen;
  for (const auto& c : comps) {
    if (!c.is_object()) fail(text, "components", "expected objects with id and security_level");
    for (const auto& [key, _] : c.items()) {
      if (key != "id" && key != "security_level") fail(text, key, "unknown key");
    }
    if (!c.contains("id") || !c["id"].is_string()) fail(text, "components", "component without string id");
    const auto id = c["id"].get<std::string>();
    if (!c.contains("security_level") || !c["security_level"].is_number()) {
      fail(text, id, "component needs a numeric security_level");
    }
    if (!comp_seen.insert(id).second) fail(text, id, "duplicate component id", 2);
    components.push_back({id, c["security_level"].get<double>()});
  }

  const auto& sets = doc["monitoring_sets"];
  if (!sets.is_object()) fail(text, "monitoring_sets", "expected an object");
  std::map<std::string, std::vector<std::string>> named;
  for (const auto& [loc, members] : sets.items()) {
    if (!loc_seen.count(loc)) fail(text, loc, "monitoring set for unknown location", 2);
    if (!members.is_array()) fail(text, loc, "expected a list of component ids", 2);
    for (const auto& m : members) {
      if (!m.is_string()) fail(text, loc, "expected a list of component ids", 2);
      const auto id = m.get<std::string>();
      if (!comp_seen.count(id)) fail(text, loc, "references unknown component '" + id + "'", 2);
      named[loc].push_back(id);
    }
  }

  int budget = 1;
  if (doc.contains("budget")) {
    if (!doc["budget"].is_number_integer()) fail(text, "budget", "expected an integer");
    budget = doc["budget"].get<int>();
  }
  auto inst = Instance::from_ids(std::move(locations), components, named, budget);
  const auto report = validate(inst);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    fail(text, v.message.starts_with("budget") ? "budget" : v.ids.front(), v.message);
  }
  return inst;
}

inline ordered_json instance_to_json(const Instance& inst) {
  ordered_json doc;
  doc["locations"] = inst.location_ids();
  doc["components"] = ordered_json::array();
  for (ComponentIndex u = 0; u < inst.num_components(); ++u) {
    doc["components"].push_back({{"id", inst.component_id(u)}, {"security_level", inst.security_level(u)}});
  }
  doc["monitoring_sets"] = ordered_json::object();
  for (LocationIndex x = 0; x < inst.num_locations(); ++x) {
    auto& list = doc["monitoring_sets"][inst.location_id(x)] = ordered_json::array();
    for (ComponentIndex u : inst.monitoring_set(x)) list.push_back(inst.component_id(u));
  }
  doc["budget"] = inst.budget();
  return doc;
}

inline std::string format_instance(const Instance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

inline Instance load_instance(const std::string& path) {
  const auto text = read_file(path);
  try {
    return parse_instance(text);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void save_instance(const Instance& inst, const std::string& path) {
  write_file(path, format_instance(inst));
}

/// FNV-1a over the canonical file text.
inline std::uint64_t instance_hash(const Instance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : format_instance(inst)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline bool same_instance(const Instance& a, const Instance& b) {
  if (a.location_ids() != b.location_ids() || a.component_ids() != b.component_ids() ||
      a.security_levels() != b.security_levels() || a.budget() != b.budget()) {
    return false;
  }
  for (LocationIndex x = 0; x < a.num_locations(); ++x) {
    const auto sa = a.monitoring_set(x), sb = b.monitoring_set(x);
    if (!std::equal(sa.begin(), sa.end(), sb.begin(), sb.end())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Strategies

inline ordered_json strategy_to_json(const Instance& inst, const MixedStrategy& s) {
  auto atoms = ordered_json::array();
  for (const auto& a : s.atoms()) {
    auto locs = ordered_json::array();
    for (LocationIndex x : a.placement.locations()) locs.push_back(inst.location_id(x));
    atoms.push_back({{"placement", locs}, {"probability", a.probability}});
  }
  return atoms;
}

/// Reads a list of {"placement": [ids], "probability": p}, either bare or
/// under the "strategy" key of a solve report.
inline MixedStrategy strategy_from_json(const Instance& inst, const ordered_json& doc) {
  const auto& list = doc.is_object() && doc.contains("strategy") ? doc["strategy"] : doc;
  if (!list.is_array()) throw InputError("key 'strategy': expected a list of atoms");
  std::vector<Atom> atoms;
  for (const auto& a : list) {
    if (!a.is_object() || !a.contains("placement") || !a.contains("probability") ||
        !a["placement"].is_array() || !a["probability"].is_number()) {
      throw InputError("key 'strategy': atoms need a placement list and a probability");
    }
    std::vector<LocationIndex> locs;
    for (const auto& id : a["placement"]) {
      if (!id.is_string()) throw InputError("key 'placement': expected location ids");
      locs.push_back(inst.location_index(id.get<std::string>()));
    }
    atoms.push_back({Placement(std::move(locs)), a["probability"].get<double>()});
  }
  return MixedStrategy(std::move(atoms));
}

}  // namespace netmon
