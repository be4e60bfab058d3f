#include "lll/io.hpp"

#include <fstream>

#include "lll/errors.hpp"

namespace lll {

nlohmann::json coefficients_to_json(const FockCoefficients& u) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const Complex& c : u.coeffs()) coeffs.push_back({c.real(), c.imag()});
  return {{"truncation", u.truncation()}, {"coeffs", std::move(coeffs)}};
}

FockCoefficients coefficients_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("truncation") || !doc.contains("coeffs")) {
    throw FormatError("coefficient file needs 'truncation' and 'coeffs'");
  }
  const auto& t = doc.at("truncation");
  if (!t.is_number_integer() || t.get<long long>() < 0) {
    throw FormatError("'truncation' must be a nonnegative integer");
  }
  const auto truncation = t.get<std::size_t>();
  const auto& arr = doc.at("coeffs");
  if (!arr.is_array() || arr.size() != truncation + 1) {
    throw FormatError("'coeffs' must hold truncation+1 = " + std::to_string(truncation + 1) +
                      " pairs");
  }
  std::vector<Complex> coeffs;
  coeffs.reserve(arr.size());
  for (const auto& pair : arr) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw FormatError("each coefficient must be a [re, im] pair of numbers");
    }
    coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  try {
    return FockCoefficients(std::move(coeffs));
  } catch (const InvalidParameter& e) {
    throw FormatError(e.what());
  }
}

FockCoefficients read_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return coefficients_from_json(doc);
}

void write_coefficients(const std::string& path, const FockCoefficients& u) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << coefficients_to_json(u).dump() << '\n';
}

nlohmann::json report_to_json(const FunctionalReport& r) {
  return {{"mu", r.mu}, {"M", r.M},  {"P", r.P},
          {"H", r.H},   {"Q", {r.Q.real(), r.Q.imag()}},
          {"B", r.B},   {"E", r.E},  {"G", r.G},
          {"F", r.F}};
}

}  // namespace lll
