#include <cmath>
#include <fstream>
#include <sstream>

#include "symkit/suite.hpp"

namespace symkit {

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Pass:
    return "pass";
  case Verdict::Fail:
    return "fail";
  case Verdict::TrendPass:
    return "trend-pass";
  }
  return "fail";
}

nlohmann::ordered_json to_json(const ExperimentReport &r, bool include_time) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["digest"] = r.digest;
  j["verdict"] = to_string(r.verdict);
  j["value"] = r.value;
  j["tolerance"] = r.tolerance;
  j["data"] = r.data;
  j["warnings"] = r.warnings;
  if (include_time)
    j["wall_seconds"] = r.wall_seconds;
  return j;
}

std::string csv_summary(const std::vector<ExperimentReport> &reports) {
  std::ostringstream os;
  os << "id,verdict,value,tolerance\n";
  for (const auto &r : reports)
    os << r.id << ',' << to_string(r.verdict) << ',' << nlohmann::json(r.value).dump() << ','
       << nlohmann::json(r.tolerance).dump() << '\n';
  return os.str();
}

void write_reports(const std::vector<ExperimentReport> &reports, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  for (const auto &r : reports) {
    std::string name = r.id;
    for (char &c : name)
      if (c == '/')
        c = '.';
    std::ofstream out(dir / (name + ".json"));
    out << to_json(r).dump(2) << '\n';
    if (!out)
      throw std::runtime_error("cannot write report " + (dir / (name + ".json")).string());
  }
  std::ofstream csv(dir / "summary.csv");
  csv << csv_summary(reports);
  if (!csv)
    throw std::runtime_error("cannot write " + (dir / "summary.csv").string());
}

RefinementTrend assess_refinement(std::vector<double> h, std::vector<double> violation,
                                  double scale, double final_relative, double factor_limit) {
  RefinementTrend t;
  t.h = std::move(h);
  t.violation = std::move(violation);
  t.scale = scale;
  t.final_threshold = final_relative * scale;
  t.contracting = true;
  for (std::size_t k = 1; k < t.violation.size(); ++k) {
    const double a = t.violation[k - 1], b = t.violation[k];
    const double f = b == 0.0 ? 0.0 : a == 0.0 ? INFINITY : b / a;
    t.factors.push_back(f);
    if (!(f <= factor_limit))
      t.contracting = false;
  }
  t.final_ok = !t.violation.empty() && t.violation.back() <= t.final_threshold;
  return t;
}

nlohmann::ordered_json to_json(const RefinementTrend &t) {
  nlohmann::ordered_json j;
  j["h"] = t.h;
  j["violation"] = t.violation;
  nlohmann::ordered_json f = nlohmann::ordered_json::array();
  for (double x : t.factors)
    f.push_back(std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json("inf"));
  j["factors"] = f;
  j["scale"] = t.scale;
  j["final_threshold"] = t.final_threshold;
  j["contracting"] = t.contracting;
  j["final_ok"] = t.final_ok;
  return j;
}

} // namespace symkit
