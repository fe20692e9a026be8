#include "soliton/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace soliton::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows) {
  if (static_cast<Eigen::Index>(header.size()) != rows.cols())
    throw std::invalid_argument("csv header does not match column count");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) out << (c ? "," : "") << format_number(rows(r, c));
    out << '\n';
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Eigen::MatrixXd profile_table(const PlanarProfile& p) {
  const auto& pts = p.points();
  Eigen::MatrixXd t(static_cast<Eigen::Index>(pts.size()), 4);
  for (std::size_t k = 0; k < pts.size(); ++k)
    t.row(static_cast<Eigen::Index>(k)) << pts[k].s, pts[k].y, pts[k].z, pts[k].phi;
  return t;
}

Eigen::MatrixXd bowl_table(const RadialProfile& b) {
  const auto s = b.samples();
  Eigen::MatrixXd t(static_cast<Eigen::Index>(s.size()), 3);
  for (std::size_t k = 0; k < s.size(); ++k) t.row(static_cast<Eigen::Index>(k)) << s[k].r, s[k].b, s[k].bp;
  return t;
}

Eigen::MatrixXd field_table(const SolutionField& f) {
  Eigen::MatrixXd t(f.values.size(), 3);
  t.col(0) = f.points.row(0).transpose();
  t.col(1) = f.points.row(1).transpose();
  t.col(2) = f.values;
  return t;
}

Eigen::MatrixXd field_table(const RectGrid& grid, const Eigen::VectorXd& u) {
  Eigen::MatrixXd t(grid.size(), 3);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) t.row(grid.index(i, j)) << grid.x(i), grid.y(j), u[grid.index(i, j)];
  return t;
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

Json to_json(const PropertyReport& r) {
  Json j;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["inconclusive"] = r.inconclusive;
  j["worst_violation"] = number(r.worst_violation);
  j["slack"] = number(r.slack);
  j["location"] = {number(r.location.x()), number(r.location.y())};
  Json tol = Json::object();
  for (const auto& [k, v] : r.tolerances) tol[k] = number(v);
  j["tolerances"] = tol;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const PerronTrace& t) {
  Json j;
  j["sweeps"] = t.max_decrease.size();
  j["converged"] = t.converged;
  auto arr = [](const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
  };
  j["max_decrease"] = arr(t.max_decrease);
  j["min_decrease"] = arr(t.min_decrease);
  j["residual"] = arr(t.residual);
  j["sandwich_violation"] = arr(t.sandwich_violation);
  return j;
}

}  // namespace soliton::io
