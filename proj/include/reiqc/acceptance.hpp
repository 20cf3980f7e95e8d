#pragma once

// Reproduction checks shared by the acceptance test binary and `reiqc paper-check`.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace reiqc::acceptance {

inline constexpr int kCriterionCount = 10;

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    std::string summary;  ///< one line: the numbers that decided pass/fail
    nlohmann::json details;
};

CriterionResult run_criterion(int id, std::uint64_t seed = 2024);
std::vector<CriterionResult> run_all(std::uint64_t seed = 2024);

nlohmann::json to_json(const CriterionResult& r);
/// "[PASS] 3  Isotropy null ... (0.12 s)  <summary>"
std::string format_line(const CriterionResult& r);

}  // namespace reiqc::acceptance
