#include "qcorr/state_io.hpp"

#include <fstream>

#include "qcorr/errors.hpp"

namespace qcorr {

using nlohmann::json;

MultipartiteState state_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("state file must contain a JSON object");

  if (j.contains("family")) {
    if (!j["family"].is_string()) throw FormatError("'family' must be a string");
    std::map<std::string, double> params;
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw FormatError("'params' must be an object");
      for (const auto& [k, v] : j["params"].items()) {
        if (!v.is_number()) throw FormatError("parameter '" + k + "' must be a number");
        params[k] = v.get<double>();
      }
    }
    try {
      return named_state(j["family"].get<std::string>(), params);
    } catch (const ParamError& e) {
      throw FormatError(e.what());
    }
  }

  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty())
    throw FormatError("missing or empty 'dims' array");
  std::vector<int> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 1)
      throw FormatError("'dims' entries must be positive integers");
    dims.push_back(d.get<int>());
  }
  if (!j.contains("matrix") || !j["matrix"].is_array()) throw FormatError("missing 'matrix' array");
  const auto& rows = j["matrix"];
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n != product(dims))
    throw FormatError("matrix has " + std::to_string(n) + " rows but dims multiply to " +
                      std::to_string(product(dims)));
  ComplexMatrix rho(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw FormatError("matrix row " + std::to_string(r) + " has the wrong length");
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& e = row[c];
      if (e.is_number()) {
        rho(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        rho(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw FormatError("matrix entries must be [re, im] pairs");
      }
    }
  }
  std::string label = j.value("label", std::string{});
  return MultipartiteState(std::move(dims), std::move(rho), std::move(label));
}

json state_to_json(const MultipartiteState& s) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < s.rho().rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < s.rho().cols(); ++c)
      row.push_back({s.rho()(r, c).real(), s.rho()(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dims", s.dims()}, {"label", s.label()}, {"matrix", std::move(rows)}};
}

MultipartiteState load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open state file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("state file " + path.string() + " is not valid JSON: " + e.what());
  }
  return state_from_json(j);
}

void save_state(const MultipartiteState& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write state file " + path.string());
  // nlohmann writes the shortest representation that round-trips exactly.
  out << state_to_json(s).dump(1) << '\n';
}

}  // namespace qcorr
