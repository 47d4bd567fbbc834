#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fatou {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

constexpr int kCriterionCount = 12;

std::string criterion_name(int id);

/// Runs one criterion; the runtime limit is part of pass/fail.
CriterionResult run_criterion(int id);

/// Runs `ids` (all when empty) in order, reporting each result through `on_result` as it finishes.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

} // namespace fatou
