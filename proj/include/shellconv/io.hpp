#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "shellconv/dynamics.hpp"
#include "shellconv/reduction.hpp"
#include "shellconv/spectrum.hpp"

namespace shellconv::io {

/// 17 significant digits, so values round-trip exactly.
[[nodiscard]] std::string format_double(double v);

/// RFC-4180 field: quoted when it contains a comma, quote or line break.
[[nodiscard]] std::string csv_field(const std::string& s);

/// Columns: branch,l,m,n,beta,b
void write_spectrum_csv(std::ostream& os, const std::vector<EigenPair>& rows);

/// Columns: t, x0, y1, z1, ..., y_lc, z_lc, N
void write_trajectory_csv(std::ostream& os, int l_c, const std::vector<TrajectoryPoint>& traj);

/// {mode_key: {"p,q": [re, im]}} for every mode with a nonzero form.
[[nodiscard]] nlohmann::json forms_to_json(const std::map<ModeIndex, QuadraticForm>& forms);
[[nodiscard]] std::map<ModeIndex, QuadraticForm> forms_from_json(const nlohmann::json& j);

/// Real parts of a sampled shell field. The JSON dump carries the grid nodes;
/// the binary dump is the bare little-endian float64 array of u_theta, u_phi,
/// w and T in turn, each laid out z-major, then theta, then phi.
[[nodiscard]] nlohmann::json grid_dump_json(const ShellField& f, const SphereGrid& grid);
void write_grid_binary(std::ostream& os, const ShellField& f);

}  // namespace shellconv::io
