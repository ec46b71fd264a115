#include "shellconv/io.hpp"

#include <bit>
#include <cstdint>
#include <ostream>

#include <fmt/format.h>

namespace shellconv::io {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_spectrum_csv(std::ostream& os, const std::vector<EigenPair>& rows) {
  os << "branch,l,m,n,beta,b\r\n";
  for (const auto& e : rows) {
    os << csv_field(to_string(e.index.branch)) << ',' << e.index.l << ',' << e.index.m << ',' << e.index.n << ','
       << format_double(e.beta) << ',' << format_double(e.b) << "\r\n";
  }
}

void write_trajectory_csv(std::ostream& os, int l_c, const std::vector<TrajectoryPoint>& traj) {
  os << "t,x0";
  for (int m = 1; m <= l_c; ++m) os << ",y" << m << ",z" << m;
  os << ",N\r\n";
  for (const auto& p : traj) {
    os << format_double(p.t);
    for (double c : p.coords) os << ',' << format_double(c);
    os << ',' << format_double(p.radial) << "\r\n";
  }
}

nlohmann::json forms_to_json(const std::map<ModeIndex, QuadraticForm>& forms) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [mode, form] : forms) {
    if (form.empty()) continue;
    nlohmann::json entry = nlohmann::json::object();
    for (const auto& [pq, c] : form) {
      entry[std::to_string(pq.first) + "," + std::to_string(pq.second)] = {c.real(), c.imag()};
    }
    j[mode.key()] = std::move(entry);
  }
  return j;
}

std::map<ModeIndex, QuadraticForm> forms_from_json(const nlohmann::json& j) {
  std::map<ModeIndex, QuadraticForm> out;
  for (const auto& [key, entry] : j.items()) {
    QuadraticForm form;
    for (const auto& [mono, value] : entry.items()) {
      const auto comma = mono.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("bad monomial key: " + mono);
      const int p = std::stoi(mono.substr(0, comma));
      const int q = std::stoi(mono.substr(comma + 1));
      form[{p, q}] = complex(value.at(0).get<double>(), value.at(1).get<double>());
    }
    out[ModeIndex::parse(key)] = std::move(form);
  }
  return out;
}

namespace {

std::vector<double> real_parts(const ScalarField& f) {
  std::vector<double> out(f.data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.data[i].real();
  return out;
}

void write_le(std::ostream& os, const ScalarField& f) {
  for (const complex& c : f.data) {
    auto bits = std::bit_cast<std::uint64_t>(c.real());
    unsigned char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
    os.write(reinterpret_cast<const char*>(bytes), 8);
  }
}

}  // namespace

nlohmann::json grid_dump_json(const ShellField& f, const SphereGrid& grid) {
  nlohmann::json j;
  j["layout"] = "z-major, then theta, then phi";
  j["n_z"] = grid.n_z();
  j["n_theta"] = grid.n_theta();
  j["n_phi"] = grid.n_phi();
  j["z"] = std::vector<double>(grid.z().begin(), grid.z().end());
  j["theta"] = std::vector<double>(grid.theta().begin(), grid.theta().end());
  j["phi"] = std::vector<double>(grid.phi().begin(), grid.phi().end());
  j["u_theta"] = real_parts(f.u.theta);
  j["u_phi"] = real_parts(f.u.phi);
  j["w"] = real_parts(f.w);
  j["T"] = real_parts(f.T);
  return j;
}

void write_grid_binary(std::ostream& os, const ShellField& f) {
  write_le(os, f.u.theta);
  write_le(os, f.u.phi);
  write_le(os, f.w);
  write_le(os, f.T);
}

}  // namespace shellconv::io
