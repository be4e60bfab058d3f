#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "lll/fock.hpp"

namespace lll {

/// {"truncation": N, "coeffs": [[re, im], ...]} with exactly N+1 pairs.
nlohmann::json coefficients_to_json(const FockCoefficients& u);
/// Throws FormatError on a malformed document or a length mismatch.
FockCoefficients coefficients_from_json(const nlohmann::json& doc);

FockCoefficients read_coefficients(const std::string& path);
void write_coefficients(const std::string& path, const FockCoefficients& u);

nlohmann::json report_to_json(const FunctionalReport& r);

}  // namespace lll
