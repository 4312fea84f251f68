#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace afq {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs the full verification suite (criteria 1-10) and returns one result
/// per criterion.  Deterministic: all sampling is done with fixed seeds.
std::vector<CriterionResult> run_acceptance();

bool all_pass(const std::vector<CriterionResult>& results);

/// One pass/fail line per criterion.
void print_results(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace afq
