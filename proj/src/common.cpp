#include "topoid/common.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>

namespace topoid {

namespace {
thread_local WarningCapture* active_capture = nullptr;
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Dimension: return "E_DIMENSION";
        case ErrorCode::Parameter: return "E_PARAMETER";
        case ErrorCode::Configuration: return "E_CONFIGURATION";
        case ErrorCode::NonFinite: return "E_NONFINITE";
        case ErrorCode::Io: return "E_IO";
        case ErrorCode::Data: return "E_DATA";
    }
    return "E_UNKNOWN";
}

void warn(const std::string& message) {
    WarningCapture* sink = active_capture;
    while (sink != nullptr) {
        sink->messages_.push_back(message);
        if (!sink->forward_) return;
        sink = sink->previous_;
    }
    std::cerr << "warning: " << message << '\n';
}

WarningCapture::WarningCapture(bool forward) : previous_(active_capture), forward_(forward) {
    active_capture = this;
}

WarningCapture::~WarningCapture() { active_capture = previous_; }

bool WarningCapture::contains(const std::string& needle) const {
    for (const auto& m : messages_) {
        if (m.find(needle) != std::string::npos) return true;
    }
    return false;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::Parameter, "Rng::below: bound must be positive");
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
        draw = engine_();
    } while (draw >= limit);
    return draw % bound;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

double asymmetry(const Matrix& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    if (a.size() == 0) return 0.0;
    return (a - a.transpose()).cwiseAbs().maxCoeff();
}

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw Error(ErrorCode::Io, "cannot format number");
    return std::string(buf, ptr);
}

}  // namespace topoid
