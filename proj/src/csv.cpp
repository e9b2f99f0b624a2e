#include "atomgate/csv.hpp"

#include <array>
#include <cstdio>
#include <ostream>

namespace atomgate {

std::string format_number(double value) {
  std::array<char, 40> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.12g", value);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace) {
  out << "t_over_tau,fidelity\n";
  for (const TracePoint& p : trace) out << format_number(p.t) << ',' << format_number(p.fidelity) << '\n';
}

void write_field_csv(std::ostream& out, const RealField& field, const std::string& value_name) {
  static constexpr std::array<const char*, 3> names{"x", "y", "z"};
  const Grid& grid = field.grid();
  for (const Axis& a : grid.axes()) out << names[static_cast<std::size_t>(a.coordinate)] << ',';
  out << value_name << '\n';
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Eigen::Vector3d r = grid.position(i);
    for (const Axis& a : grid.axes()) out << format_number(r[static_cast<int>(a.coordinate)]) << ',';
    out << format_number(field[i]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<std::pair<double, double>>& rows) {
  out << "parameter,fidelity\n";
  for (const auto& [p, f] : rows) out << format_number(p) << ',' << format_number(f) << '\n';
}

}  // namespace atomgate
