// Acceptance gate: run the full cross-validation battery and print one
// pass/fail line per criterion. Exit 0 only if every criterion passes.

#include <cstdio>
#include <iostream>

#include "haarint/verify.hpp"

int main() {
    using haarint::CriterionResult;
    std::cout.setf(std::ios::unitbuf);
    const haarint::VerifyReport rep = haarint::verify_suite(
        haarint::VerifyLevel::full,
        [](const CriterionResult& c) { std::cout << haarint::criterion_line(c) << "\n"; });

    int passed = 0;
    for (const CriterionResult& c : rep.criteria)
        if (c.pass) ++passed;
    std::cout << passed << "/" << rep.criteria.size() << " criteria passed\n";
    return rep.pass ? 0 : 1;
}
