#include <taplab/tap_json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <taplab/errors.hpp>

namespace taplab {

using ojson = nlohmann::ordered_json;

namespace {

Rational read_rational(const ojson& node, const char* field) {
  if (!node.contains(field)) throw InvalidInstance(std::string("missing field '") + field + "'");
  const ojson& v = node.at(field);
  if (!v.is_string()) throw InvalidInstance(std::string("field '") + field + "' must be a string");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    throw InvalidInstance(std::string("field '") + field + "': " + e.what());
  }
}

}  // namespace

std::string tap_to_json(const Tap& tap) {
  ojson root;
  root["version"] = 1;
  root["p"] = tap.p;
  ojson tasks = ojson::array();
  for (const Task& t : tap.tasks) {
    ojson o;
    o["id"] = t.id;
    o["sigma"] = t.sigma.str();
    o["pi"] = t.pi.str();
    o["arrival"] = t.arrival.str();
    if (!t.deps.empty()) o["deps"] = t.deps;
    tasks.push_back(std::move(o));
  }
  root["tasks"] = std::move(tasks);
  return root.dump();
}

Tap tap_from_json(std::string_view text) {
  ojson root;
  try {
    root = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw InvalidInstance(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw InvalidInstance("TAP must be a JSON object");
  for (const auto& [key, _] : root.items()) {
    if (key != "version" && key != "p" && key != "tasks") throw InvalidInstance("unknown field '" + key + "'");
  }
  if (!root.contains("version") || root["version"] != 1) throw InvalidInstance("unsupported version");
  if (!root.contains("p") || !root["p"].is_number_integer()) throw InvalidInstance("missing integer field 'p'");
  if (!root.contains("tasks") || !root["tasks"].is_array()) throw InvalidInstance("missing array field 'tasks'");
  Tap tap;
  tap.p = root["p"].get<int>();
  for (const ojson& node : root["tasks"]) {
    if (!node.is_object()) throw InvalidInstance("task entries must be objects");
    for (const auto& [key, _] : node.items()) {
      if (key != "id" && key != "sigma" && key != "pi" && key != "arrival" && key != "deps") {
        throw InvalidInstance("unknown task field '" + key + "'");
      }
    }
    if (!node.contains("id") || !node["id"].is_number_integer()) throw InvalidInstance("task without integer id");
    Task t;
    t.id = node["id"].get<TaskId>();
    t.sigma = read_rational(node, "sigma");
    t.pi = read_rational(node, "pi");
    t.arrival = read_rational(node, "arrival");
    if (node.contains("deps")) {
      if (!node["deps"].is_array()) throw InvalidInstance("deps must be an array");
      for (const ojson& d : node["deps"]) {
        if (!d.is_number_integer()) throw InvalidInstance("deps entries must be integers");
        t.deps.push_back(d.get<TaskId>());
      }
    }
    tap.tasks.push_back(std::move(t));
  }
  return tap;
}

Tap load_tap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Tap tap = normalize_tap(tap_from_json(buf.str()));
  validate_tap(tap);
  return tap;
}

void save_tap(const Tap& tap, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << tap_to_json(tap) << "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t instance_hash(const Tap& tap) { return fnv1a64(tap_to_json(tap)); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace taplab
