#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace spflab {

// Library errors carry a stable machine-readable kind next to the human
// message; the CLI maps kinds onto exit codes and structured stderr JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

namespace errors {

inline Error real_pole(const std::string& msg) { return {"RealPole", msg}; }
inline Error duplicate_pole(const std::string& msg) { return {"DuplicatePole", msg}; }
inline Error empty_input(const std::string& msg) { return {"EmptyInput", msg}; }
inline Error eval_at_pole(const std::string& msg) { return {"EvalAtPole", msg}; }
inline Error eval_at_conjugate_pole(const std::string& msg) { return {"EvalAtConjugatePole", msg}; }
inline Error nonpositive_scale(const std::string& msg) { return {"NonpositiveScale", msg}; }
inline Error unsupported_exponent(const std::string& msg) { return {"UnsupportedExponent", msg}; }
inline Error convergence_failure(const std::string& msg) { return {"ConvergenceFailure", msg}; }
inline Error index_out_of_range(const std::string& msg) { return {"IndexOutOfRange", msg}; }
inline Error domain_error(const std::string& msg) { return {"DomainError", msg}; }
inline Error degenerate_cancellation(const std::string& msg) { return {"DegenerateCancellation", msg}; }
inline Error degenerate_input(const std::string& msg) { return {"DegenerateInput", msg}; }
inline Error invalid_configuration(const std::string& msg) { return {"InvalidConfiguration", msg}; }
inline Error parse_error(const std::string& msg) { return {"ParseError", msg}; }

} // namespace errors
} // namespace spflab
