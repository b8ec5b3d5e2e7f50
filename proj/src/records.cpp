#include "vcs/records.hpp"

#include <fstream>
#include <stdexcept>

namespace vcs {

void to_json(nlohmann::json& j, const TrialRecord& r) {
  j = nlohmann::json{
      {"algo", r.algo},     {"N", r.N},
      {"B", r.B},           {"epsilon", r.epsilon},
      {"delta", r.delta},   {"n", r.n},
      {"dist", r.dist},     {"rep", r.rep},
      {"seed", r.seed},     {"success", r.success},
      {"diverged", r.diverged}, {"iters", r.iters},
      {"converged", r.converged}, {"wall_ms", r.wall_ms},
  };
  if (r.rel_error) {
    j["rel_error"] = *r.rel_error;
  } else {
    j["rel_error"] = nullptr;
  }
}

void from_json(const nlohmann::json& j, TrialRecord& r) {
  j.at("algo").get_to(r.algo);
  j.at("N").get_to(r.N);
  j.at("B").get_to(r.B);
  j.at("epsilon").get_to(r.epsilon);
  j.at("delta").get_to(r.delta);
  j.at("n").get_to(r.n);
  j.at("dist").get_to(r.dist);
  j.at("rep").get_to(r.rep);
  j.at("seed").get_to(r.seed);
  j.at("success").get_to(r.success);
  j.at("diverged").get_to(r.diverged);
  j.at("iters").get_to(r.iters);
  j.at("converged").get_to(r.converged);
  j.at("wall_ms").get_to(r.wall_ms);
  if (j.at("rel_error").is_null()) {
    r.rel_error.reset();
  } else {
    r.rel_error = j.at("rel_error").get<double>();
  }
}

std::vector<TrialRecord> read_ndjson_records(std::istream& in) {
  std::vector<TrialRecord> out;
  std::string line;
  int lineno = 0;
  while (true) {
    if (!std::getline(in, line)) break;
    const bool had_newline = !in.eof();
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<TrialRecord>());
    } catch (const std::exception& e) {
      if (!had_newline) break;  // partial final line from an interrupted writer
      throw std::runtime_error("malformed record at line " + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  return out;
}

std::vector<TrialRecord> read_ndjson_records(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_ndjson_records(f);
}

}  // namespace vcs
