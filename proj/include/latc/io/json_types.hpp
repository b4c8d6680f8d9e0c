#pragma once

#include <string>
#include <vector>

#include "latc/io/json_writer.hpp"
#include "latc/lattice/minima.hpp"
#include "latc/onsager.hpp"
#include "latc/quadrature.hpp"

namespace latc::io {

inline Json to_json(const BondWeights& j) { return Json(j.values()); }

inline BondWeights bond_weights_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("bond weights must be a JSON array");
  return BondWeights(j.get<std::vector<double>>());
}

inline Json to_json(const SuccessiveMinima& m) {
  Json witnesses = Json::array(), coeffs = Json::array();
  for (int c = 0; c < m.dim(); ++c) {
    Json w = Json::array(), k = Json::array();
    for (int r = 0; r < m.dim(); ++r) {
      w.push_back(m.witnesses(r, c));
      k.push_back(m.coefficients(r, c));
    }
    witnesses.push_back(std::move(w));
    coeffs.push_back(std::move(k));
  }
  return Json{{"values", m.values}, {"witnesses", std::move(witnesses)}, {"coefficients", std::move(coeffs)}};
}

inline SuccessiveMinima successive_minima_from_json(const Json& j) {
  SuccessiveMinima m;
  try {
    m.values = j.at("values").get<std::vector<double>>();
    const int d = m.dim();
    m.witnesses.resize(d, d);
    m.coefficients.resize(d, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) {
        m.witnesses(r, c) = j.at("witnesses").at(c).at(r).get<double>();
        m.coefficients(r, c) = j.at("coefficients").at(c).at(r).get<long long>();
      }
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("successive minima json: ") + e.what());
  }
  return m;
}

inline Json to_json(const CriticalTemperature& t) {
  return Json{{"value", t.value}, {"method", to_string(t.method)}, {"residual", t.residual}};
}

inline CriticalTemperature critical_temperature_from_json(const Json& j) {
  try {
    return {j.at("value").get<double>(), tc_method_from_string(j.at("method").get<std::string>()), j.value("residual", 0.0)};
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("critical temperature json: ") + e.what());
  }
}

inline Json to_json(const MomentEstimate& m) {
  return Json{{"p", m.p},
              {"value", m.value},
              {"bulk_value", m.bulk_value},
              {"tail_value", m.tail_value},
              {"method", to_string(m.method)},
              {"diagnostics", m.diagnostics}};
}

inline MomentEstimate moment_estimate_from_json(const Json& j) {
  try {
    MomentEstimate m;
    m.p = j.at("p").get<double>();
    m.value = j.at("value").get<double>();
    m.bulk_value = j.at("bulk_value").get<double>();
    m.tail_value = j.at("tail_value").get<double>();
    m.method = moment_method_from_string(j.at("method").get<std::string>());
    m.diagnostics = j.value("diagnostics", Json::object());
    return m;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("moment estimate json: ") + e.what());
  }
}

}  // namespace latc::io
