#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nskw/dynamics.hpp"
#include "nskw/entropy.hpp"

namespace nskw {

// Binary state snapshot. Layout: magic "NSKW1"; d, n as little-endian int64;
// t, kappa, eps, nu, q, gamma, a_p, rho_bar as little-endian float64; then
// the rho samples and the m components, row-major little-endian float64.
// The stress model is not part of the format, so cfg carries a default one.
struct Checkpoint {
  SimConfig cfg;
  State state;
};

void write_checkpoint(const std::string& path, const SimConfig& cfg, const State& s);
Checkpoint read_checkpoint(const std::string& path);

// Diagnostics table: header
//   t,mass,energy,diss_S,diss_nu,diss_kw,diss_p,rel_entropy,gronwall_rhs,margin
// one row per output time, %.17g everywhere so values survive a round-trip;
// reference-dependent columns print as "nan" when no reference was attached.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& rows);

// Tiny self-contained line plot; series share the x grid.
std::string svg_line_plot(const std::string& title, const std::vector<double>& x,
                          const std::vector<std::pair<std::string, std::vector<double>>>& series);

void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& dir);

}  // namespace nskw
