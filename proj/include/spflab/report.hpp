#pragma once

#include <cmath>
#include <map>
#include <string>

namespace spflab {

// Outcome of one inequality check.  `pass` semantics depend on the check:
// proved lemmas are hard pass/fail, theorem checks with an unknown absolute
// constant only record the ratio.
struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs_without_constant = 0.0;
    double ratio = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
    std::map<std::string, double> context;
    std::map<std::string, bool> flags;

    void set_ratio() {
        ratio = rhs_without_constant != 0.0 ? lhs / rhs_without_constant
                                            : std::numeric_limits<double>::quiet_NaN();
    }
};

enum class FunctionalKind { gorin, gelfond };

inline const char* to_string(FunctionalKind k) {
    return k == FunctionalKind::gorin ? "gorin" : "gelfond";
}

// Scale-invariant target: Y * ||rho||_p^q (gorin) or Y * ||rho'||_p^{q/(q+1)}
// (gelfond), with 1/p + 1/q = 1 and q = 1 at p = infinity.
struct FunctionalValue {
    FunctionalKind kind = FunctionalKind::gorin;
    double p = 0.0;
    double value = 0.0;
};

} // namespace spflab
