#include <cmath>
#include <fstream>

#include "symkit/suite.hpp"

namespace symkit {
namespace {

constexpr const char *kFormat = "symkit-config 1";

template <class T> void read(const nlohmann::json &obj, const char *key, T &out) {
  if (!obj.contains(key))
    return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

const nlohmann::json &section(const nlohmann::json &doc, const char *key) {
  static const nlohmann::json empty = nlohmann::json::object();
  if (!doc.contains(key))
    return empty;
  const auto &s = doc.at(key);
  if (!s.is_object())
    throw ConfigError(std::string("config section '") + key + "' must be an object");
  return s;
}

} // namespace

SuiteConfig SuiteConfig::defaults() {
  SuiteConfig c;
  for (int n : {128, 256, 512})
    c.ladder.push_back({1, n, 8.0 / n});
  for (int n : {32, 64, 128})
    c.ladder.push_back({2, n, 8.0 / n});
  c.slack["default"] = {4e-3, 2e-3, 1e-3};
  c.slack["young"] = {1e-9, 1e-9, 1e-9};
  c.slack["hls"] = {1e-9, 1e-9, 1e-9};
  c.slack["stability"] = {1e-12};
  return c;
}

std::vector<LadderRung> SuiteConfig::ladder_for(int d) const {
  std::vector<LadderRung> out;
  for (const auto &r : ladder)
    if (r.dim == d)
      out.push_back(r);
  return out;
}

std::vector<double> SuiteConfig::slack_for(const std::string &id) const {
  if (auto it = slack.find(id); it != slack.end())
    return it->second;
  if (auto it = slack.find("default"); it != slack.end())
    return it->second;
  return {1e-3};
}

void SuiteConfig::validate() const {
  for (const auto &r : ladder) {
    if (r.dim < 1 || r.dim > 3)
      throw ConfigError("ladder: dimension must be 1, 2 or 3");
    if (r.n < 1 || !(r.h > 0.0) || !std::isfinite(r.h))
      throw ConfigError("ladder: n and h must be positive");
  }
  for (int d = 1; d <= 3; ++d) {
    const auto rungs = ladder_for(d);
    for (std::size_t k = 1; k < rungs.size(); ++k) {
      if (std::fabs(rungs[k].h - 0.5 * rungs[k - 1].h) > 1e-12 * rungs[k - 1].h)
        throw ConfigError("ladder: h must halve from one rung to the next (d = " +
                          std::to_string(d) + ")");
      if (rungs[k].n != 2 * rungs[k - 1].n)
        throw ConfigError("ladder: rungs must cover the same box (d = " + std::to_string(d) + ")");
    }
  }
  for (const auto &[id, s] : slack) {
    if (s.empty())
      throw ConfigError("slack '" + id + "': empty schedule");
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (!(s[k] > 0.0))
        throw ConfigError("slack '" + id + "': entries must be positive");
      if (k > 0 && s[k] > s[k - 1])
        throw ConfigError("slack '" + id + "': schedule must not increase along the ladder");
    }
  }
  if (!(fields.blur_width > 0.0) || !(fields.support_fraction > 0.0) ||
      fields.support_fraction > 1.0 || fields.bumps < 1)
    throw ConfigError("fields: need blur_width > 0, 0 < support_fraction <= 1, bumps >= 1");
  if (verify_cases < 0 || refine_cases < 1 || bll_specs < 0 || young_random < 0 || hls_random < 0 ||
      spectral_pairs < 0 || asymmetry_cases < 0)
    throw ConfigError("cases: counts must be nonnegative (refine at least 1)");
  if (mc_samples < 1000)
    throw ConfigError("mc_samples: need at least 1000");
  if (spectral_cells_per_unit < 8)
    throw ConfigError("spectral.cells_per_unit: need at least 8");
  if (probe_n < 8 || probe_steps < 2)
    throw ConfigError("probe: need n >= 8 and steps >= 2");
  if (choquard.n < 4 || choquard.n > 48)
    throw ConfigError("choquard.n: need 4 <= n <= 48");
  if (!(choquard.half_width > 0.0) || !(choquard.step > 0.0) || choquard.rearrange_every < 1 ||
      choquard.max_steps < 1 || !(choquard.tolerance >= 0.0))
    throw ConfigError("choquard: invalid parameters");
  if (jobs < 1)
    throw ConfigError("jobs: need at least 1");
}

SuiteConfig parse_config(const nlohmann::json &doc) {
  if (!doc.is_object())
    throw ConfigError("config must be an object");
  if (!doc.contains("format") || doc.at("format") != kFormat)
    throw ConfigError(std::string("config: missing or unsupported \"format\" (expected \"") +
                      kFormat + "\")");
  SuiteConfig c = SuiteConfig::defaults();
  read(doc, "seed", c.seed);
  read(doc, "mc_samples", c.mc_samples);
  read(doc, "jobs", c.jobs);
  if (doc.contains("output"))
    c.output_dir = doc.at("output").get<std::string>();

  if (doc.contains("ladder")) {
    const auto &l = doc.at("ladder");
    if (!l.is_array())
      throw ConfigError("ladder must be an array");
    c.ladder.clear();
    for (const auto &r : l) {
      LadderRung rung;
      read(r, "d", rung.dim);
      read(r, "n", rung.n);
      read(r, "h", rung.h);
      c.ladder.push_back(rung);
    }
  }

  const auto &f = section(doc, "fields");
  read(f, "blur_width", c.fields.blur_width);
  read(f, "support_fraction", c.fields.support_fraction);
  read(f, "bumps", c.fields.bumps);

  if (doc.contains("slack")) {
    const auto &s = doc.at("slack");
    if (!s.is_object())
      throw ConfigError("slack must be an object of schedules");
    for (auto it = s.begin(); it != s.end(); ++it)
      read(s, it.key().c_str(), c.slack[it.key()]);
  }

  const auto &cases = section(doc, "cases");
  read(cases, "verify", c.verify_cases);
  read(cases, "refine", c.refine_cases);
  read(cases, "bll_specs", c.bll_specs);
  read(cases, "young_random", c.young_random);
  read(cases, "hls_random", c.hls_random);
  read(cases, "spectral_pairs", c.spectral_pairs);
  read(cases, "asymmetry", c.asymmetry_cases);

  read(section(doc, "spectral"), "cells_per_unit", c.spectral_cells_per_unit);
  const auto &p = section(doc, "probe");
  read(p, "n", c.probe_n);
  read(p, "steps", c.probe_steps);

  const auto &q = section(doc, "choquard");
  read(q, "n", c.choquard.n);
  read(q, "half_width", c.choquard.half_width);
  read(q, "step", c.choquard.step);
  read(q, "rearrange_every", c.choquard.rearrange_every);
  read(q, "max_steps", c.choquard.max_steps);
  read(q, "tolerance", c.choquard.tolerance);

  c.validate();
  return c;
}

SuiteConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

nlohmann::ordered_json to_json(const SuiteConfig &c) {
  nlohmann::ordered_json j;
  j["format"] = kFormat;
  j["seed"] = c.seed;
  j["ladder"] = nlohmann::ordered_json::array();
  for (const auto &r : c.ladder)
    j["ladder"].push_back({{"d", r.dim}, {"n", r.n}, {"h", r.h}});
  j["fields"] = {{"blur_width", c.fields.blur_width},
                 {"support_fraction", c.fields.support_fraction},
                 {"bumps", c.fields.bumps}};
  j["slack"] = nlohmann::ordered_json::object();
  for (const auto &[id, s] : c.slack)
    j["slack"][id] = s;
  j["mc_samples"] = c.mc_samples;
  j["cases"] = {{"verify", c.verify_cases},           {"refine", c.refine_cases},
                {"bll_specs", c.bll_specs},           {"young_random", c.young_random},
                {"hls_random", c.hls_random},         {"spectral_pairs", c.spectral_pairs},
                {"asymmetry", c.asymmetry_cases}};
  j["spectral"] = {{"cells_per_unit", c.spectral_cells_per_unit}};
  j["probe"] = {{"n", c.probe_n}, {"steps", c.probe_steps}};
  j["choquard"] = {{"n", c.choquard.n},
                   {"half_width", c.choquard.half_width},
                   {"step", c.choquard.step},
                   {"rearrange_every", c.choquard.rearrange_every},
                   {"max_steps", c.choquard.max_steps},
                   {"tolerance", c.choquard.tolerance}};
  j["output"] = c.output_dir.string();
  j["jobs"] = c.jobs;
  return j;
}

} // namespace symkit
