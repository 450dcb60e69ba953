#include "mcb/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "mcb/errors.hpp"

namespace mcb {

using nlohmann::json;

namespace {

std::string_view model_name(RewardModel m) {
  return m == RewardModel::kBernoulli ? "bernoulli" : "deterministic";
}

RewardModel parse_model(const std::string& s) {
  if (s == "bernoulli") return RewardModel::kBernoulli;
  if (s == "deterministic") return RewardModel::kDeterministic;
  throw ConfigError("unknown reward_model '" + s + "'");
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (auto a : allowed) found = found || key == a;
    if (!found) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return obj.at(key);
}

std::uint64_t as_count(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw ConfigError(where + ": must be non-negative");
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d < 1.8e19 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError(where + ": expected a non-negative integer");
}

double as_real(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

json who_to_json(const Selection& who) {
  switch (who.how) {
    case LeaveSelector::kOldest: return "oldest";
    case LeaveSelector::kNewest: return "newest";
    case LeaveSelector::kRandom: return "random";
    case LeaveSelector::kId: return json{{"id", who.id}};
  }
  return nullptr;
}

Selection who_from_json(const json& v, const std::string& where) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "oldest") return {LeaveSelector::kOldest, 0};
    if (s == "newest") return {LeaveSelector::kNewest, 0};
    if (s == "random") return {LeaveSelector::kRandom, 0};
    throw ConfigError(where + ": unknown selector '" + s + "'");
  }
  if (v.is_object()) {
    reject_unknown(v, {"id"}, where);
    return {LeaveSelector::kId, static_cast<std::uint32_t>(as_count(require(v, "id", where), where + ".id"))};
  }
  if (v.is_number()) return {LeaveSelector::kId, static_cast<std::uint32_t>(as_count(v, where))};
  throw ConfigError(where + ": expected a selector");
}

}  // namespace

json scenario_to_json(const Scenario& s) {
  json doc;
  json arms;
  if (const auto* means = std::get_if<std::vector<double>>(&s.arms.source)) {
    arms["means"] = *means;
  } else {
    const auto& r = std::get<RandomMeans>(s.arms.source);
    arms["random"] = {{"k", r.k}, {"min_gap", r.min_gap}, {"seed", r.seed}};
  }
  arms["reward_model"] = model_name(s.arms.model);
  doc["arms"] = arms;
  doc["horizon"] = s.horizon;

  json params = json::object();
  if (s.algorithm.t0) params["t0"] = *s.algorithm.t0;
  if (s.algorithm.t1) params["t1"] = *s.algorithm.t1;
  if (const auto& m = s.algorithm.mega) {
    params["c"] = m->c;
    params["d"] = m->d;
    params["alpha"] = m->alpha;
    params["p0"] = m->p0;
    params["beta"] = m->beta;
    params["no_arm"] = m->no_arm == NoArmBehavior::kAbstain ? "abstain" : "random";
  }
  doc["algorithm"] = {{"name", to_string(s.algorithm.kind)}, {"params", params}};
  doc["initial_players"] = s.initial_players;

  json events = json::array();
  for (const auto& e : s.events) {
    json ev{{"round", e.round}, {"kind", e.kind == EventKind::kEnter ? "enter" : "leave"}};
    if (e.kind == EventKind::kLeave) ev["who"] = who_to_json(e.who);
    events.push_back(ev);
  }
  doc["events"] = events;
  doc["seeds"] = s.seeds;

  json meta = json::object();
  if (!s.meta.preset.empty()) meta["preset"] = s.meta.preset;
  if (s.meta.f) meta["f"] = *s.meta.f;
  if (s.meta.lambda) meta["lambda"] = *s.meta.lambda;
  if (!meta.empty()) doc["meta"] = meta;
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario: expected a JSON object");
  reject_unknown(doc, {"arms", "horizon", "algorithm", "initial_players", "events", "seeds", "meta"}, "scenario");
  Scenario s;

  const json& arms = require(doc, "arms", "scenario");
  reject_unknown(arms, {"means", "random", "reward_model"}, "arms");
  if (arms.contains("means") == arms.contains("random")) {
    throw ConfigError("arms: give exactly one of 'means' or 'random'");
  }
  if (arms.contains("means")) {
    const json& means = arms.at("means");
    if (!means.is_array()) throw ConfigError("arms.means: expected an array");
    std::vector<double> values;
    for (std::size_t i = 0; i < means.size(); ++i) {
      values.push_back(as_real(means[i], "arms.means[" + std::to_string(i) + "]"));
    }
    s.arms.source = std::move(values);
  } else {
    const json& r = arms.at("random");
    reject_unknown(r, {"k", "min_gap", "seed"}, "arms.random");
    RandomMeans spec;
    spec.k = as_count(require(r, "k", "arms.random"), "arms.random.k");
    spec.min_gap = r.contains("min_gap") ? as_real(r.at("min_gap"), "arms.random.min_gap") : 0.0;
    spec.seed = r.contains("seed") ? as_count(r.at("seed"), "arms.random.seed") : 0;
    s.arms.source = spec;
  }
  if (arms.contains("reward_model")) {
    if (!arms.at("reward_model").is_string()) throw ConfigError("arms.reward_model: expected a string");
    s.arms.model = parse_model(arms.at("reward_model").get<std::string>());
  }

  s.horizon = as_count(require(doc, "horizon", "scenario"), "horizon");

  const json& algo = require(doc, "algorithm", "scenario");
  reject_unknown(algo, {"name", "params"}, "algorithm");
  const json& name = require(algo, "name", "algorithm");
  if (!name.is_string()) throw ConfigError("algorithm.name: expected a string");
  s.algorithm.kind = parse_algorithm(name.get<std::string>());
  if (algo.contains("params")) {
    const json& p = algo.at("params");
    if (!p.is_object()) throw ConfigError("algorithm.params: expected an object");
    reject_unknown(p, {"t0", "t1", "c", "d", "alpha", "p0", "beta", "no_arm"}, "algorithm.params");
    if (p.contains("t0")) s.algorithm.t0 = as_count(p.at("t0"), "algorithm.params.t0");
    if (p.contains("t1")) s.algorithm.t1 = as_count(p.at("t1"), "algorithm.params.t1");
    const bool any_mega = p.contains("c") || p.contains("d") || p.contains("alpha") || p.contains("p0") ||
                          p.contains("beta") || p.contains("no_arm");
    if (any_mega) {
      MegaParams m;
      m.c = as_real(require(p, "c", "algorithm.params"), "algorithm.params.c");
      m.d = as_real(require(p, "d", "algorithm.params"), "algorithm.params.d");
      m.alpha = as_real(require(p, "alpha", "algorithm.params"), "algorithm.params.alpha");
      m.p0 = as_real(require(p, "p0", "algorithm.params"), "algorithm.params.p0");
      if (p.contains("beta")) m.beta = as_real(p.at("beta"), "algorithm.params.beta");
      if (p.contains("no_arm")) {
        const json& v = p.at("no_arm");
        if (v == "abstain") {
          m.no_arm = NoArmBehavior::kAbstain;
        } else if (v == "random") {
          m.no_arm = NoArmBehavior::kRandomArm;
        } else {
          throw ConfigError("algorithm.params.no_arm: expected \"abstain\" or \"random\"");
        }
      }
      s.algorithm.mega = m;
    }
  }

  s.initial_players = as_count(require(doc, "initial_players", "scenario"), "initial_players");

  if (doc.contains("events")) {
    const json& events = doc.at("events");
    if (!events.is_array()) throw ConfigError("events: expected an array");
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::string where = "events[" + std::to_string(i) + "]";
      const json& e = events[i];
      reject_unknown(e, {"round", "kind", "who"}, where);
      ScheduleEvent ev;
      ev.round = as_count(require(e, "round", where), where + ".round");
      const json& kind = require(e, "kind", where);
      if (kind == "enter") {
        ev.kind = EventKind::kEnter;
      } else if (kind == "leave") {
        ev.kind = EventKind::kLeave;
        ev.who = e.contains("who") ? who_from_json(e.at("who"), where + ".who") : Selection{};
      } else {
        throw ConfigError(where + ".kind: expected \"enter\" or \"leave\"");
      }
      s.events.push_back(ev);
    }
  }

  if (doc.contains("seeds")) {
    const json& seeds = doc.at("seeds");
    if (!seeds.is_array()) throw ConfigError("seeds: expected an array");
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      s.seeds.push_back(as_count(seeds[i], "seeds[" + std::to_string(i) + "]"));
    }
  }

  if (doc.contains("meta")) {
    const json& meta = doc.at("meta");
    reject_unknown(meta, {"preset", "f", "lambda"}, "meta");
    if (meta.contains("preset")) {
      if (!meta.at("preset").is_string()) throw ConfigError("meta.preset: expected a string");
      s.meta.preset = meta.at("preset").get<std::string>();
    }
    if (meta.contains("f")) s.meta.f = as_real(meta.at("f"), "meta.f");
    if (meta.contains("lambda")) s.meta.lambda = as_real(meta.at("lambda"), "meta.lambda");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << scenario_to_json(scenario).dump(2) << '\n';
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override '" + path + "' has an empty path segment");
    json* next = nullptr;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ConfigError("override '" + path + "': '" + key + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError("override '" + path + "': index " + key + " out of range");
      next = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError("override '" + path + "': '" + key + "' is below a non-object value");
      next = &(*node)[key];
    }
    node = next;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

}  // namespace mcb
