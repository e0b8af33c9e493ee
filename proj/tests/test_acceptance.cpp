// Acceptance battery: one PASS/FAIL line per criterion. Criterion 12 reruns the whole
// battery with the same seed and compares the two reports byte for byte.

#include <cstdio>
#include <string>

#include "unipotent/verify.hpp"

using namespace unipotent;

int main() {
    const verify::Options opt{2024, false};
    const auto first = verify::run_all(opt);
    int failed = 0;
    for (const auto& c : first) {
        std::printf("%s criterion %2d %-22s %7.2fs (limit %3.0fs)  %s\n", c.pass() ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    c.seconds, c.limit_seconds, c.detail.c_str());
        if (!c.pass()) ++failed;
    }
    const auto again = verify::run_all(opt);
    const auto a = verify::report_text(first, opt), b = verify::report_text(again, opt);
    const bool same = a == b;
    std::printf("%s criterion 12 %-22s %s\n", same ? "PASS" : "FAIL", "determinism",
                same ? "two runs with seed 2024 give byte-identical reports" : "reports differ between runs");
    if (!same) ++failed;
    std::printf("%d/12 criteria pass\n", 12 - failed);
    return failed == 0 ? 0 : 1;
}
