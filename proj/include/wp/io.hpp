#pragma once

// JSON encoding of instances and solutions.
//
// Numbers are JSON integers or "p/q" strings. On load every quantity is
// rescaled by the least common denominator of all quantity inputs.

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "wp/model.hpp"

namespace wp {

/// Malformed document; the message names the offending field path.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed document whose instance breaks an invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

Instance load_instance(std::string_view document);
Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& inst);
std::string serialize_instance(const Instance& inst);

Solution solution_from_json(const Instance& inst, const nlohmann::json& doc);
Solution load_solution(const Instance& inst, std::string_view document);
nlohmann::json solution_to_json(const Instance& inst, const Solution& sol);
std::string serialize_solution(const Instance& inst, const Solution& sol);

/// Integer when the denominator is 1, otherwise a "p/q" string.
nlohmann::json number_to_json(const Rational& r);
Rational number_from_json(const nlohmann::json& j, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace wp
