#pragma once

// Text export: CSV with `#` header comments carrying the generating
// configuration, JSON for scalar results. Formatting is fixed so identical
// inputs produce byte-identical files.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlbvp/asymptotics.hpp"
#include "nlbvp/bifurcation.hpp"
#include "nlbvp/integrate.hpp"
#include "nlbvp/scalar.hpp"

namespace nlbvp {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

template <class T>
void write_trajectory_csv(std::ostream& os, const Trajectory<T>& traj) {
  os << "# epsilon: " << scalar_str(traj.params.epsilon) << "\n";
  if (traj.terminal_event)
    os << "# terminal_event: " << traj.terminal_event->description << " at t="
       << scalar_str(traj.terminal_event->t) << "\n";
  os << "t,y,z,c_squared\n";
  for (const auto& s : traj.samples) {
    os << scalar_str(s.t) << "," << scalar_str(s.p.y) << "," << scalar_str(s.p.z) << ",";
    if (s.p.z < make_like(s.p.z, 1))
      os << scalar_str(conserved(s.p, traj.params).c_squared);
    else
      os << "nan";
    os << "\n";
  }
}

template <class T>
void write_composite_csv(std::ostream& os, const CompositeSolution<T>& cs, int n) {
  os << "# branch: " << branch_name(cs.branch) << "\n";
  os << "# order: " << cs.order << "\n";
  os << "# epsilon: " << scalar_str(cs.params.epsilon) << "\n";
  os << "x,y,y_prime\n";
  for (int i = 0; i < n; ++i) {
    T x = make_like(cs.params.epsilon, i) / make_like(cs.params.epsilon, n - 1);
    auto [y, yp] = composite_eval(cs, x);
    os << scalar_str(x) << "," << scalar_str(y) << "," << scalar_str(yp) << "\n";
  }
}

template <class T>
void write_scan_csv(std::ostream& os, const Params<T>& params,
                    const std::vector<std::pair<T, T>>& scan) {
  os << "# epsilon: " << scalar_str(params.epsilon) << "\n";
  os << "s,residual\n";
  for (const auto& [s, r] : scan) os << scalar_str(s) << "," << scalar_str(r) << "\n";
}

inline void write_grid_csv(std::ostream& os, const std::vector<GridCell>& cells) {
  os << "epsilon,slope,residual\n";
  for (const auto& c : cells)
    os << scalar_str(c.epsilon) << "," << scalar_str(c.slope) << "," << scalar_str(c.residual)
       << "\n";
}

}  // namespace nlbvp
