#pragma once

#include "soliton/grid.hpp"
#include "soliton/perron.hpp"
#include "soliton/profiles.hpp"
#include "soliton/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace soliton::io {

using Json = nlohmann::ordered_json;

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

/// Header row then one row per matrix row.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows);
void write_json(const std::filesystem::path& path, const Json& j);

/// Columns s, y, z, phi.
Eigen::MatrixXd profile_table(const PlanarProfile& p);
/// Columns r, b, bp.
Eigen::MatrixXd bowl_table(const RadialProfile& b);
/// Columns x, y, u.
Eigen::MatrixXd field_table(const SolutionField& f);
Eigen::MatrixXd field_table(const RectGrid& grid, const Eigen::VectorXd& u);

/// Non-finite numbers become the strings "inf", "-inf", "nan".
Json number(double v);
Json to_json(const PropertyReport& r);
Json to_json(const PerronTrace& t);

}  // namespace soliton::io
