#pragma once

// JSON and CSV formats for matrices, filters, reduced systems, transfer
// reports, residual reports and cascade grids. Objects serialize with sorted
// keys and shortest round-trip floats, so emitted documents re-parse and
// re-emit identically.

#include <charconv>
#include <complex>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "pfw/cascade.hpp"
#include "pfw/error.hpp"
#include "pfw/filter.hpp"
#include "pfw/intlat.hpp"
#include "pfw/lawton.hpp"
#include "pfw/quincunx.hpp"
#include "pfw/transfer.hpp"
#include "pfw/verify.hpp"

namespace pfw::io {

using json = nlohmann::json;

// ---- scalars ---------------------------------------------------------------

inline json to_json(const Int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return json(v.convert_to<std::int64_t>());
  return json(v.str());
}

inline Int int_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Int(j.get<std::uint64_t>()) : Int(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw Error(Errc::InvalidInput, "field '" + where + "': expected an integer");
}

inline double number_from_json(const json& j, const std::string& where) {
  if (!j.is_number()) throw Error(Errc::InvalidInput, "field '" + where + "': expected a number");
  return j.get<double>();
}

inline const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw Error(Errc::InvalidInput, "field '" + where + "': expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(Errc::InvalidInput, "missing field '" + (where.empty() ? key : where + "." + key) + "'");
  }
  return *it;
}

inline std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---- lattice types ----------------------------------------------------------

inline json to_json(const LatticePoint& p) {
  json arr = json::array();
  for (const Int& c : p) arr.push_back(to_json(c));
  return arr;
}

inline LatticePoint point_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(Errc::InvalidInput, "field '" + where + "': expected an array of integers");
  std::vector<Int> coords;
  for (std::size_t i = 0; i < j.size(); ++i)
    coords.push_back(int_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return LatticePoint(std::move(coords));
}

inline json rows_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const IntMatrix& m) { return json{{"dim", m.dim()}, {"rows", rows_json(m)}}; }

inline IntMatrix matrix_from_json(const json& j, const std::string& where = "") {
  const json& dim_j = field(j, "dim", where);
  if (!dim_j.is_number_integer() || dim_j.get<std::int64_t>() < 1) {
    throw Error(Errc::InvalidInput, "field '" + join(where, "dim") + "': expected a positive integer");
  }
  const auto d = static_cast<std::size_t>(dim_j.get<std::int64_t>());
  const json& rows_j = field(j, "rows", where);
  const std::string rw = join(where, "rows");
  if (!rows_j.is_array() || rows_j.size() != d) {
    throw Error(Errc::DimensionMismatch, "field '" + rw + "': expected " + std::to_string(d) + " rows");
  }
  std::vector<std::vector<Int>> rows;
  for (std::size_t i = 0; i < d; ++i) {
    const std::string ri = rw + "[" + std::to_string(i) + "]";
    if (!rows_j[i].is_array() || rows_j[i].size() != d) {
      throw Error(Errc::DimensionMismatch, "field '" + ri + "': expected " + std::to_string(d) + " entries");
    }
    std::vector<Int> row;
    for (std::size_t c = 0; c < d; ++c) row.push_back(int_from_json(rows_j[i][c], ri + "[" + std::to_string(c) + "]"));
    rows.push_back(std::move(row));
  }
  return IntMatrix::from_rows(rows);
}

inline json to_json(const SnfFactorization& snf) {
  return json{{"U", to_json(snf.U)}, {"D", to_json(snf.D)}, {"V", to_json(snf.V)}};
}

inline json basis_json(const DilationMatrix& a) {
  return json{{"matrix", to_json(a.matrix())},
              {"adapted_basis", to_json(a.adapted_basis())},
              {"coset_rep", to_json(a.coset_rep())}};
}

// ---- filters ------------------------------------------------------------------

inline json to_json(const Filter& filter) {
  json coeffs = json::array();
  for (const auto& [n, c] : filter.coeffs())
    coeffs.push_back(json{{"n", to_json(n)}, {"re", c.real()}, {"im", c.imag()}});
  return json{{"dim", filter.dim()}, {"matrix", to_json(filter.matrix().matrix())}, {"coeffs", coeffs}};
}

inline Filter filter_from_json(const json& j, const std::string& where = "") {
  const IntMatrix m = matrix_from_json(field(j, "matrix", where), join(where, "matrix"));
  const json& dim_j = field(j, "dim", where);
  if (!dim_j.is_number_integer() || dim_j.get<std::int64_t>() != static_cast<std::int64_t>(m.dim())) {
    throw Error(Errc::DimensionMismatch, "field '" + join(where, "dim") + "' does not match the " +
                                             std::to_string(m.dim()) + "x" + std::to_string(m.dim()) + " matrix");
  }
  const json& coeffs_j = field(j, "coeffs", where);
  const std::string cw = join(where, "coeffs");
  if (!coeffs_j.is_array()) throw Error(Errc::InvalidInput, "field '" + cw + "': expected an array");
  std::vector<std::pair<LatticePoint, Coeff>> coeffs;
  for (std::size_t i = 0; i < coeffs_j.size(); ++i) {
    const std::string ci = cw + "[" + std::to_string(i) + "]";
    const json& e = coeffs_j[i];
    LatticePoint n = point_from_json(field(e, "n", ci), ci + ".n");
    if (n.dim() != m.dim()) {
      throw Error(Errc::DimensionMismatch, "field '" + ci + ".n' has dimension " + std::to_string(n.dim()) +
                                               ", expected " + std::to_string(m.dim()));
    }
    const double re = number_from_json(field(e, "re", ci), ci + ".re");
    const double im = e.contains("im") ? number_from_json(e["im"], ci + ".im") : 0.0;
    coeffs.emplace_back(std::move(n), Coeff(re, im));
  }
  return Filter(DilationMatrix(m), coeffs);
}

// ---- systems and reports -------------------------------------------------------

inline json to_json(const ReducedSystem& sys) {
  json support = json::array(), index = json::array(), equations = json::array();
  for (const auto& n : sys.support) support.push_back(to_json(n));
  for (const auto& k : sys.index_set) {
    index.push_back(to_json(k));
    const Equation& eq = sys.equation(k);
    json pairs = json::array();
    for (const auto& [a, b] : eq.pairs) pairs.push_back(json::array({to_json(a), to_json(b)}));
    equations.push_back(json{{"k", to_json(k)}, {"pairs", pairs}, {"rhs", eq.rhs}});
  }
  return json{{"matrix", to_json(sys.matrix.matrix())},
              {"support", support},
              {"index_set", index},
              {"equations", equations}};
}

inline json map_json(const std::map<LatticePoint, LatticePoint>& m) {
  json arr = json::array();
  for (const auto& [a, b] : m) arr.push_back(json::array({to_json(a), to_json(b)}));
  return arr;
}

inline json to_json(const TransferReport& r) {
  json out{{"source", to_json(r.source_filter)},
           {"target", to_json(r.target_filter)},
           {"shift", to_json(r.shift_used)},
           {"N", r.n_used},
           {"theta", map_json(r.iso.theta)},
           {"eta", map_json(r.iso.eta)}};
  out["N_prime"] = r.n_prime_used ? json(*r.n_prime_used) : json(nullptr);
  return out;
}

inline json to_json(const ResidualReport& r, double tolerance) {
  json res = json::array();
  for (const auto& [k, v] : r.residuals) res.push_back(json{{"k", to_json(k)}, {"residual", v}});
  return json{{"residuals", res},
              {"sum_residual", r.sum_residual},
              {"max_residual", r.max_residual},
              {"tolerance", tolerance},
              {"is_solution", r.is_solution(tolerance)}};
}

// ---- files ------------------------------------------------------------------

inline json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidInput, source + ": " + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- CSV ------------------------------------------------------------------------

/// Rows "j_1,...,j_d,value"; an "imag" column is added for complex grids.
inline std::string grid_csv(const CascadeGrid& grid) {
  bool complex_values = false;
  for (const auto& [j, v] : grid.cells) complex_values |= v.imag() != 0.0;
  std::string out;
  for (std::size_t i = 0; i < grid.dim(); ++i) out += "j_" + std::to_string(i + 1) + ",";
  out += complex_values ? "value,imag\n" : "value\n";
  for (const auto& [j, v] : grid.cells) {
    for (auto c : j) out += std::to_string(c) + ",";
    out += format_double(v.real());
    if (complex_values) out += "," + format_double(v.imag());
    out += "\n";
  }
  return out;
}

inline json grid_sidecar(const CascadeGrid& grid) {
  return json{{"level", grid.level}, {"matrix", to_json(grid.matrix)}, {"cell_volume", grid.cell_volume()}};
}

/// 1D only: "t,phi" at cell centers.
inline std::string phi_1d_csv(const CascadeGrid& grid) {
  if (grid.dim() != 1) throw Error(Errc::DimensionMismatch, "t,phi export needs a 1-dimensional grid");
  std::string out = "t,phi\n";
  for (const auto& [j, v] : grid.cells)
    out += format_double(cell_center(grid, j)[0]) + "," + format_double(v.real()) + "\n";
  return out;
}

inline std::string pattern_csv(const quincunx::PatternReport& p) {
  std::string out = "m,n,s\n";
  for (const auto& e : p.entries) out += std::to_string(e.m) + "," + std::to_string(e.n) + "," + format_double(e.s) + "\n";
  return out;
}

}  // namespace pfw::io
