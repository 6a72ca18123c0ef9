#ifndef TOPOID_COMMON_HPP
#define TOPOID_COMMON_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace topoid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Machine-parsable failure categories; the CLI prints the name as its exit code tag.
enum class ErrorCode {
    Dimension,
    Parameter,
    Configuration,
    NonFinite,
    Io,
    Data,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/**
 * Non-fatal diagnostics. Messages go to the innermost active WarningCapture on
 * the current thread, or to stderr when none is installed.
 */
void warn(const std::string& message);

class WarningCapture {
public:
    /// With `forward`, messages are also passed on to the enclosing sink.
    explicit WarningCapture(bool forward = false);
    ~WarningCapture();
    WarningCapture(const WarningCapture&) = delete;
    WarningCapture& operator=(const WarningCapture&) = delete;

    const std::vector<std::string>& messages() const { return messages_; }
    bool contains(const std::string& needle) const;

private:
    friend void warn(const std::string&);
    std::vector<std::string> messages_;
    WarningCapture* previous_;
    bool forward_;
};

/**
 * Portable random source. mt19937_64 is bit-specified by the standard; the
 * distributions below are written out so that draws do not depend on the
 * standard library's distribution implementations.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_closed() { return 1.0 - uniform01(); }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via the Marsaglia polar method (pairs are cached).
    double normal();

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Largest |A - A^T| entry.
double asymmetry(const Matrix& a);

/// (A + A^T) / 2.
Matrix symmetrized(const Matrix& a);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace topoid

#endif  // TOPOID_COMMON_HPP
