#include "asymgame/trace_io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>

namespace asymgame {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

void write_rows(const IterateTrace& trace, std::span<const double> env_u,
                std::span<const double> env_v, bool with_envelopes,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(errc::invalid_argument, "cannot open for writing: " + path.string());
  }
  out << "k,step_norm,dist_u,dist_v";
  if (with_envelopes) out << ",env_u,env_v";
  out << "\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << k << ',' << format_number(trace.step_norm[k]) << ',';
    if (trace.has_reference()) {
      out << format_number(trace.dist_u[k]) << ',' << format_number(trace.dist_v[k]);
    } else {
      out << ',';
    }
    if (with_envelopes) {
      out << ',' << format_number(env_u[k]) << ',' << format_number(env_v[k]);
    }
    out << "\n";
  }
}

}  // namespace

void write_trace_csv(const IterateTrace& trace, const std::filesystem::path& path) {
  write_rows(trace, {}, {}, false, path);
}

void write_trace_csv(const IterateTrace& trace, std::span<const double> env_u,
                     std::span<const double> env_v, const std::filesystem::path& path) {
  if (env_u.size() != trace.size() || env_v.size() != trace.size()) {
    throw Error(errc::dimension_mismatch,
                "write_trace_csv: envelope columns must match the trace length");
  }
  write_rows(trace, env_u, env_v, true, path);
}

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

nlohmann::json trace_to_json(const IterateTrace& trace) {
  nlohmann::json j;
  j["iterations"] = trace.size();
  j["x1"] = nlohmann::json::array();
  j["x2"] = nlohmann::json::array();
  for (std::size_t k = 0; k < trace.size(); ++k) {
    j["x1"].push_back(vector_to_json(trace.x1[k]));
    j["x2"].push_back(vector_to_json(trace.x2[k]));
  }
  j["step_norm"] = trace.step_norm;
  if (trace.has_reference()) {
    j["dist_u"] = trace.dist_u;
    j["dist_v"] = trace.dist_v;
  }
  return j;
}

}  // namespace asymgame
