// SPDX-License-Identifier: BSD-3-Clause
//
// Acceptance gate: runs the built-in verification suite and prints one
// pass/fail line per check with its measured worst case. Exits nonzero if
// any check fails, so CI can gate on this binary alone.

#include <cstdio>

#include "twophase/selftest.hpp"

int main() {
    const twophase::SelftestReport report = twophase::run_selftest();
    for (const twophase::CheckResult& c : report.checks)
        std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
    const int failed = report.failed();
    std::printf("%d/%zu checks passed\n", static_cast<int>(report.checks.size()) - failed,
                report.checks.size());
    return failed == 0 ? 0 : 1;
}
