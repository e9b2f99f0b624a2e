#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "atomgate/field.hpp"
#include "atomgate/propagator.hpp"

namespace atomgate {

/// 12 significant digits, '.' separator, locale independent.
std::string format_number(double value);

/// Header `t_over_tau,fidelity`, one row per trace point.
void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& trace);

/// Coordinates of each grid axis followed by `value_Er`.
void write_field_csv(std::ostream& out, const RealField& field,
                     const std::string& value_name = "value_Er");

/// Header `parameter,fidelity`, rows in the given order.
void write_sweep_csv(std::ostream& out, const std::vector<std::pair<double, double>>& rows);

}  // namespace atomgate
