#ifndef BALLOAD_JSON_IO_HPP
#define BALLOAD_JSON_IO_HPP

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "balload/allocator.hpp"
#include "balload/densest.hpp"
#include "balload/piecewise_linear.hpp"
#include "balload/rde.hpp"

namespace balload {

// {"loads": [...], "theta": [[u, v, theta(u, v)], ...]} with both orientations
// of every edge listed.
nlohmann::json loads_to_json(const Graph& g, const LoadVector& loads, const Allocation& a);

// {"rho_num", "rho_den", "H", "blocks": [{"density_num", "density_den", "vertices"}]}
nlohmann::json density_to_json(const DensityResult& densest, const DensityDecomposition* blocks);

// {"t", "phi", "stderr", "branch", "sweeps"} plus diagnostics.
nlohmann::json phi_to_json(const PhiEstimate& est);

// {"points": [[x, y], ...], "left_slope", "right_slope", "coarsened"}
template <class T>
nlohmann::json piecewise_to_json(const PiecewiseLinear<T>& f) {
  auto num = [](const T& v) { return static_cast<double>(v); };
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : f.points()) pts.push_back({num(p.x), num(p.y)});
  return {{"points", pts},
          {"left_slope", num(f.left_slope())},
          {"right_slope", num(f.right_slope())},
          {"coarsened", f.coarsened()}};
}

// One "vertex,load" row per vertex, 17 significant digits.
void write_loads_csv(std::ostream& out, std::span<const double> loads);

// printf("%.17g")
std::string format_double(double x);

}  // namespace balload

#endif  // BALLOAD_JSON_IO_HPP
