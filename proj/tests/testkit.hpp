// Minimal always-on test harness: counts failures, prints one line per
// failing check, and the SECTION banner keeps the output readable.
#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace testkit {

inline int failures = 0;
inline int checks = 0;

inline void report_fail(const char* file, int line, const std::string& msg) {
    ++failures;
    std::printf("[FAIL] %s:%d  %s\n", file, line, msg.c_str());
}

inline bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(double a, double b, double rtol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 || std::abs(a - b) <= rtol * scale;
}

inline int summary(const char* name) {
    if (failures == 0) {
        std::printf("[OK] %s: %d checks passed\n", name, checks);
        return 0;
    }
    std::printf("[FAILED] %s: %d of %d checks failed\n", name, failures, checks);
    return 1;
}

} // namespace testkit

#define SECTION(name) std::printf("=== %s ===\n", name)

#define CHECK(cond)                                                                     \
    do {                                                                                \
        ++testkit::checks;                                                              \
        if (!(cond)) testkit::report_fail(__FILE__, __LINE__, "CHECK(" #cond ")");      \
    } while (0)

#define CHECK_MSG(cond, msg)                                                            \
    do {                                                                                \
        ++testkit::checks;                                                              \
        if (!(cond)) testkit::report_fail(__FILE__, __LINE__, std::string(msg));        \
    } while (0)

#define CHECK_CLOSE(a, b, tol)                                                          \
    do {                                                                                \
        ++testkit::checks;                                                              \
        const double va = (a), vb = (b);                                                \
        if (!testkit::close_abs(va, vb, (tol)))                                         \
            testkit::report_fail(__FILE__, __LINE__,                                    \
                                 std::string(#a " = ") + std::to_string(va) +           \
                                     " vs " #b " = " + std::to_string(vb));             \
    } while (0)

#define CHECK_REL(a, b, rtol)                                                           \
    do {                                                                                \
        ++testkit::checks;                                                              \
        const double va = (a), vb = (b);                                                \
        if (!testkit::close_rel(va, vb, (rtol)))                                        \
            testkit::report_fail(__FILE__, __LINE__,                                    \
                                 std::string(#a " = ") + std::to_string(va) +           \
                                     " vs " #b " = " + std::to_string(vb));             \
    } while (0)

#define CHECK_THROWS(expr, ex_type)                                                     \
    do {                                                                                \
        ++testkit::checks;                                                              \
        bool caught = false;                                                            \
        try {                                                                           \
            (void)(expr);                                                               \
        } catch (const ex_type&) {                                                      \
            caught = true;                                                              \
        } catch (...) {                                                                 \
        }                                                                               \
        if (!caught)                                                                    \
            testkit::report_fail(__FILE__, __LINE__,                                    \
                                 "expected " #ex_type " from " #expr);                  \
    } while (0)
