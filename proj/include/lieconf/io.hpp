#pragma once

// JSON encodings for configurations, coefficient matrices and spectral reports.

#include <complex>
#include <string>

#include <nlohmann/json.hpp>

#include "lieconf/confgeom.hpp"
#include "lieconf/hopfmap.hpp"
#include "lieconf/spectral.hpp"

namespace lieconf::io {

using json = nlohmann::ordered_json;

/// r rows x 3 columns, basis coordinates.
inline json configuration_to_json(const Configuration& x) {
  json rows = json::array();
  for (int i = 0; i < x.coords().rows(); ++i)
    rows.push_back({x.coords()(i, 0), x.coords()(i, 1), x.coords()(i, 2)});
  return rows;
}

inline Configuration configuration_from_json(const RootSystem& rs, const json& j) {
  if (!j.is_array()) throw InvalidInput("configuration JSON must be an array of rows");
  Mat coords(static_cast<Eigen::Index>(j.size()), 3);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != 3)
      throw InvalidInput("configuration rows must have 3 entries");
    for (int c = 0; c < 3; ++c) {
      if (!row[c].is_number()) throw InvalidInput("configuration entries must be numbers");
      coords(static_cast<Eigen::Index>(i), c) = row[c].get<double>();
    }
  }
  return Configuration::from_coords(rs, std::move(coords));
}

/// Nested arrays of [re, im] pairs, row-major.
inline json conf_matrix_to_json(const ConfMatrix& M) {
  json rows = json::array();
  for (int i = 0; i < M.entries.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < M.entries.cols(); ++k)
      row.push_back({M.entries(i, k).real(), M.entries(i, k).imag()});
    rows.push_back(std::move(row));
  }
  json out;
  out["m"] = M.m;
  out["n"] = M.n;
  out["provenance"] = M.provenance;
  out["entries"] = std::move(rows);
  return out;
}

inline ConfMatrix conf_matrix_from_json(const json& j) {
  ConfMatrix M;
  M.m = j.at("m").get<int>();
  M.n = j.at("n").get<int>();
  M.provenance = j.value("provenance", "");
  const auto& rows = j.at("entries");
  if (static_cast<int>(rows.size()) != M.m + 1) throw InvalidInput("ConfMatrix has wrong row count");
  M.entries = CMat::Zero(M.m + 1, M.n);
  for (int i = 0; i <= M.m; ++i) {
    if (static_cast<int>(rows[i].size()) != M.n) throw InvalidInput("ConfMatrix has wrong column count");
    for (int k = 0; k < M.n; ++k)
      M.entries(i, k) = {rows[i][k].at(0).get<double>(), rows[i][k].at(1).get<double>()};
  }
  return M;
}

inline json spectral_report_to_json(const SpectralReport& r) {
  json out;
  out["singular_values"] = r.singular_values;
  out["numerical_rank"] = r.numerical_rank;
  out["r_col"] = r.r_col;
  out["delta"] = r.delta;
  out["weighted_diagonal"] = r.weighted_diagonal;
  return out;
}

}  // namespace lieconf::io
