#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "heun_rsj/model.hpp"

namespace heun_rsj {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchema = "heun-rsj/1";

/// %.17g
[[nodiscard]] std::string format_double(double x);

/// Pretty JSON with every floating-point number printed at 17 significant
/// digits. Non-finite numbers are written as null.
void write_json(std::ostream& out, const Json& value);

/// RFC-4180 quoting when the field contains a comma, quote or newline.
[[nodiscard]] std::string csv_field(std::string_view field);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
[[nodiscard]] Json trajectory_to_json(const Trajectory& traj);

[[nodiscard]] Json polynomial_to_json(const HeunPolynomial& P);

}  // namespace heun_rsj
