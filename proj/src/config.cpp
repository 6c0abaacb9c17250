#include "contagion/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "contagion/error.hpp"
#include "contagion/graph_io.hpp"
#include "contagion/presets.hpp"
#include "contagion/rng.hpp"

namespace contagion {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

// section -> key -> entry
using RawConfig = std::map<std::string, std::map<std::string, Entry>>;

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"network",
       {"preset", "file", "family", "n", "directed", "alpha", "k_min", "k_max", "peaks",
        "degrees", "histogram", "seed"}},
      {"worm", {"targeting", "rate", "pinfect", "address_space"}},
      {"controls",
       {"vaccinate", "fraction", "throttle_rate", "working_set", "queue_capacity",
        "throttle_start"}},
      {"run",
       {"replicates", "dt", "t_max", "seed", "seed_infected", "target_fraction",
        "stop_fraction", "output"}},
  };
  return keys;
}

class Reader {
 public:
  Reader(const RawConfig& raw, std::string source) : raw_(raw), source_(std::move(source)) {}

  const Entry* Find(const std::string& section, const std::string& key) const {
    const auto s = raw_.find(section);
    if (s == raw_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
  bool Has(const std::string& section, const std::string& key) const {
    return Find(section, key) != nullptr;
  }
  const Entry& Require(const std::string& section, const std::string& key) const {
    const Entry* e = Find(section, key);
    if (!e) {
      throw ConfigError(source_ + ": missing required key '" + key + "' in [" + section + "]");
    }
    return *e;
  }

  [[noreturn]] void Fail(const std::string& key, const Entry& e, const std::string& what) const {
    throw ConfigError(source_ + ":" + std::to_string(e.line) + ": key '" + key + "' " + what);
  }

  double Number(const std::string& key, const Entry& e) const {
    double v = 0.0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    const auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end) Fail(key, e, "expects a number, got '" + e.value + "'");
    return v;
  }
  std::uint64_t Unsigned(const std::string& key, const Entry& e) const {
    std::uint64_t v = 0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    const auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end) {
      Fail(key, e, "expects a non-negative integer, got '" + e.value + "'");
    }
    return v;
  }
  bool Bool(const std::string& key, const Entry& e) const {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    Fail(key, e, "expects true|false, got '" + e.value + "'");
  }

  std::optional<double> OptNumber(const std::string& section, const std::string& key) const {
    const Entry* e = Find(section, key);
    return e ? std::optional<double>(Number(key, *e)) : std::nullopt;
  }
  std::optional<std::uint64_t> OptUnsigned(const std::string& section, const std::string& key) const {
    const Entry* e = Find(section, key);
    return e ? std::optional<std::uint64_t>(Unsigned(key, *e)) : std::nullopt;
  }

  const std::string& source() const { return source_; }

 private:
  const RawConfig& raw_;
  std::string source_;
};

RawConfig Tokenize(std::istream& in, const std::string& source) {
  RawConfig raw;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string text = Trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(source + ":" + std::to_string(line_no) + ": malformed section header");
      section = Trim(std::string_view(text).substr(1, text.size() - 2));
      if (!KnownKeys().contains(section)) {
        throw ConfigError(source + ":" + std::to_string(line_no) + ": unknown section [" + section + "]");
      }
      raw[section];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = Trim(std::string_view(text).substr(0, eq));
    std::string value = Trim(std::string_view(text).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (section.empty()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": key '" + key + "' outside any section");
    }
    if (!KnownKeys().at(section).contains(key)) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": unknown key '" + key + "' in [" + section + "]");
    }
    if (!raw[section].emplace(key, Entry{value, line_no}).second) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return raw;
}

std::vector<Peak> ParsePeaks(const Reader& r, const Entry& e) {
  std::vector<Peak> peaks;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    const auto colon = item.find(':');
    if (colon == std::string::npos) r.Fail("peaks", e, "expects 'degree:weight, ...'");
    Peak p;
    const Entry deg{Trim(item.substr(0, colon)), e.line};
    const Entry w{Trim(item.substr(colon + 1)), e.line};
    p.degree = static_cast<int>(r.Unsigned("peaks", deg));
    p.weight = r.Number("peaks", w);
    peaks.push_back(p);
  }
  return peaks;
}

std::vector<int> ParseDegrees(const Reader& r, const Entry& e) {
  std::vector<int> degrees;
  std::stringstream ss(e.value);
  std::string tok;
  while (ss >> tok) degrees.push_back(static_cast<int>(r.Unsigned("degrees", Entry{tok, e.line})));
  return degrees;
}

std::filesystem::path ResolvePath(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

std::string Num(double v) { return fmt::format("{:.10g}", v); }

}  // namespace

ExperimentConfig ParseConfig(std::istream& in, const std::string& source,
                             const std::filesystem::path& base_dir) {
  const RawConfig raw = Tokenize(in, source);
  const Reader r(raw, source);
  ExperimentConfig cfg;

  // [network]
  const int sources = r.Has("network", "preset") + r.Has("network", "file") + r.Has("network", "family");
  if (sources == 0) {
    throw ConfigError(source + ": missing required key 'preset', 'file' or 'family' in [network]");
  }
  if (sources > 1) {
    throw ConfigError(source + ": [network] takes exactly one of 'preset', 'file', 'family'");
  }
  cfg.network_seed = r.OptUnsigned("network", "seed");
  if (const Entry* e = r.Find("network", "preset")) {
    try {
      Preset(e->value);
    } catch (const ConfigError& err) {
      r.Fail("preset", *e, err.what());
    }
    cfg.preset = e->value;
  } else if (const Entry* e = r.Find("network", "file")) {
    const auto path = ResolvePath(base_dir, e->value);
    if (!std::filesystem::exists(path)) r.Fail("file", *e, "references missing file " + path.string());
    cfg.graph_file = path;
  } else {
    const Entry& fam = r.Require("network", "family");
    NetworkSpec spec;
    try {
      spec.family = ParseFamily(fam.value);
    } catch (const ConfigError& err) {
      r.Fail("family", fam, err.what());
    }
    if (const Entry* e = r.Find("network", "n")) spec.n = r.Unsigned("n", *e);
    if (const Entry* e = r.Find("network", "directed")) spec.directed = r.Bool("directed", *e);
    if (const auto v = r.OptNumber("network", "alpha")) spec.alpha = *v;
    if (const auto v = r.OptUnsigned("network", "k_min")) spec.k_min = static_cast<int>(*v);
    if (const auto v = r.OptUnsigned("network", "k_max")) spec.k_max = static_cast<int>(*v);
    if (const Entry* e = r.Find("network", "peaks")) spec.peaks = ParsePeaks(r, *e);
    if (const Entry* e = r.Find("network", "degrees")) {
      spec.degrees = ParseDegrees(r, *e);
      if (!r.Has("network", "n")) spec.n = spec.degrees.size();
    }
    if (const Entry* e = r.Find("network", "histogram")) {
      const auto path = ResolvePath(base_dir, e->value);
      if (!std::filesystem::exists(path)) r.Fail("histogram", *e, "references missing file " + path.string());
      spec.distribution = ReadDegreeHistogram(path);
      if (!r.Has("network", "n")) spec.n = static_cast<std::size_t>(spec.distribution->num_nodes());
    }
    if (spec.family != Family::ConfigModel && spec.n == 0) r.Require("network", "n");
    spec.Validate();
    cfg.network = std::move(spec);
  }

  // [worm]
  {
    const Entry& t = r.Require("worm", "targeting");
    try {
      cfg.worm.targeting = ParseTargeting(t.value);
    } catch (const ConfigError& err) {
      r.Fail("targeting", t, err.what());
    }
    cfg.worm.attempt_rate = r.Number("rate", r.Require("worm", "rate"));
    if (const auto v = r.OptNumber("worm", "pinfect")) cfg.worm.infection_probability = *v;
    if (const auto v = r.OptUnsigned("worm", "address_space")) cfg.worm.address_space = *v;
    cfg.worm.Validate(0);
  }

  // [controls]
  if (const Entry* e = r.Find("controls", "vaccinate")) {
    if (e->value != "none") {
      VaccinationStrategy v;
      try {
        v.kind = ParseVaccinationKind(e->value);
      } catch (const std::invalid_argument&) {
        r.Fail("vaccinate", *e, "expects none|random|targeted, got '" + e->value + "'");
      }
      v.fraction = r.Number("fraction", r.Require("controls", "fraction"));
      if (!(v.fraction >= 0.0 && v.fraction <= 1.0)) {
        r.Fail("fraction", r.Require("controls", "fraction"), "must lie in [0, 1]");
      }
      cfg.vaccination = v;
    }
  }
  if (const auto rate = r.OptNumber("controls", "throttle_rate")) {
    ThrottleConfig tc;
    tc.rate = *rate;
    if (const auto w = r.OptUnsigned("controls", "working_set")) tc.working_set_capacity = *w;
    if (const Entry* e = r.Find("controls", "queue_capacity")) {
      if (e->value != "unbounded") tc.queue_capacity = r.Unsigned("queue_capacity", *e);
    }
    tc.Validate();
    cfg.throttle = tc;
  } else {
    for (const char* key : {"working_set", "queue_capacity", "throttle_start"}) {
      if (const Entry* e = r.Find("controls", key)) r.Fail(key, *e, "requires throttle_rate");
    }
  }
  if (const Entry* e = r.Find("controls", "throttle_start")) {
    try {
      cfg.throttle_start = ParseThrottleStart(e->value);
    } catch (const ConfigError& err) {
      r.Fail("throttle_start", *e, err.what());
    }
  }

  // [run]
  if (const Entry* e = r.Find("run", "replicates")) {
    const auto v = r.Unsigned("replicates", *e);
    if (v < 1) r.Fail("replicates", *e, "must be at least 1");
    cfg.replicates = static_cast<int>(v);
  }
  if (const auto v = r.OptNumber("run", "dt")) cfg.dt = *v;
  if (const auto v = r.OptNumber("run", "t_max")) cfg.t_max = *v;
  if (const auto v = r.OptUnsigned("run", "seed")) cfg.seed = *v;
  if (const auto v = r.OptUnsigned("run", "seed_infected")) cfg.seed_infected = static_cast<int>(*v);
  if (const auto v = r.OptNumber("run", "target_fraction")) cfg.target_fraction = *v;
  if (const auto v = r.OptNumber("run", "stop_fraction")) cfg.stop_fraction = *v;
  if (const Entry* e = r.Find("run", "output")) cfg.output_dir = ResolvePath(base_dir, e->value);
  if (!(cfg.dt > 0.0)) r.Fail("dt", r.Require("run", "dt"), "must be positive");
  if (!(cfg.t_max > 0.0)) r.Fail("t_max", r.Require("run", "t_max"), "must be positive");
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return ParseConfig(in, path.string(), path.parent_path());
}

std::uint64_t ExperimentConfig::EffectiveNetworkSeed() const {
  return network_seed ? *network_seed : DeriveSeed(seed, stream::kGraph);
}

std::string ExperimentConfig::NetworkKey() const {
  std::string key;
  if (preset) {
    key = "preset=" + *preset;
  } else if (graph_file) {
    return "file=" + std::filesystem::absolute(*graph_file).lexically_normal().string();
  } else {
    const auto& s = *network;
    key = fmt::format("family={};n={};directed={}", ToString(s.family), s.n, s.directed);
    switch (s.family) {
      case Family::MultiModal:
        for (const auto& p : s.peaks) key += fmt::format(";peak={}:{}", p.degree, Num(p.weight));
        break;
      case Family::PowerLaw:
        key += fmt::format(";alpha={};k_min={};k_max={}", Num(s.alpha), s.k_min, s.k_max);
        break;
      case Family::ConfigModel:
        if (!s.degrees.empty()) {
          key += ";degrees=";
          for (int k : s.degrees) key += fmt::format("{} ", k);
        } else {
          key += ";histogram=";
          for (const auto& [k, c] : s.distribution->counts()) key += fmt::format("{}:{} ", k, c);
        }
        break;
      case Family::Complete:
        break;
    }
  }
  return key + fmt::format(";seed={}", EffectiveNetworkSeed());
}

std::string ExperimentConfig::WormKey() const {
  return fmt::format("targeting={};rate={};pinfect={};address_space={}", ToString(worm.targeting),
                     Num(worm.attempt_rate), Num(worm.infection_probability), worm.address_space);
}

std::string ExperimentConfig::ControlsKey() const {
  std::string key = "vaccinate=";
  key += vaccination ? fmt::format("{}:{}", ToString(vaccination->kind), Num(vaccination->fraction)) : "none";
  if (throttle) {
    key += fmt::format(";throttle={}:{}:{}:{}", Num(throttle->rate), throttle->working_set_capacity,
                       throttle->queue_capacity ? std::to_string(*throttle->queue_capacity) : "unbounded",
                       ToString(throttle_start));
  }
  return key;
}

std::string ExperimentConfig::Resolved() const {
  std::string out = "[network]\n";
  if (preset) {
    out += "preset = " + *preset + "\n";
  } else if (graph_file) {
    out += "file = " + std::filesystem::absolute(*graph_file).lexically_normal().string() + "\n";
  } else {
    const auto& s = *network;
    out += "family = " + ToString(s.family) + "\n";
    out += fmt::format("n = {}\ndirected = {}\n", s.n, s.directed);
    if (s.family == Family::PowerLaw) {
      out += fmt::format("alpha = {}\nk_min = {}\nk_max = {}\n", Num(s.alpha), s.k_min, s.k_max);
    }
    if (s.family == Family::MultiModal) {
      std::string peaks;
      for (const auto& p : s.peaks) {
        if (!peaks.empty()) peaks += ", ";
        peaks += fmt::format("{}:{}", p.degree, Num(p.weight));
      }
      out += "peaks = " + peaks + "\n";
    }
    if (s.family == Family::ConfigModel && !s.degrees.empty()) {
      std::string seq;
      for (int k : s.degrees) seq += (seq.empty() ? "" : " ") + std::to_string(k);
      out += "degrees = " + seq + "\n";
    } else if (s.family == Family::ConfigModel) {
      out += "# histogram realized from the referenced file:\n";
      for (const auto& [k, c] : s.distribution->counts()) out += fmt::format("#   {} {}\n", k, c);
    }
  }
  out += fmt::format("seed = {}\n", EffectiveNetworkSeed());

  out += "\n[worm]\n";
  out += "targeting = " + ToString(worm.targeting) + "\n";
  out += "rate = " + Num(worm.attempt_rate) + "\n";
  out += "pinfect = " + Num(worm.infection_probability) + "\n";
  out += fmt::format("address_space = {}\n", worm.address_space);

  out += "\n[controls]\n";
  if (vaccination) {
    out += "vaccinate = " + ToString(vaccination->kind) + "\n";
    out += "fraction = " + Num(vaccination->fraction) + "\n";
  } else {
    out += "vaccinate = none\n";
  }
  if (throttle) {
    out += "throttle_rate = " + Num(throttle->rate) + "\n";
    out += fmt::format("working_set = {}\n", throttle->working_set_capacity);
    out += "queue_capacity = " +
           (throttle->queue_capacity ? std::to_string(*throttle->queue_capacity) : std::string("unbounded")) + "\n";
    out += "throttle_start = " + ToString(throttle_start) + "\n";
  }

  out += "\n[run]\n";
  out += fmt::format("replicates = {}\n", replicates);
  out += "dt = " + Num(dt) + "\n";
  out += "t_max = " + Num(t_max) + "\n";
  out += fmt::format("seed = {}\n", seed);
  out += fmt::format("seed_infected = {}\n", seed_infected);
  out += "target_fraction = " + Num(target_fraction) + "\n";
  if (stop_fraction) out += "stop_fraction = " + Num(*stop_fraction) + "\n";
  return out;
}

}  // namespace contagion
