#pragma once

#include "udr/ball.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace udr {

/// A computable real given by a precision-indexed family of balls.
///
/// Two descriptor kinds are supported: quadratic surds a + b*sqrt(r) over
/// the rationals (covering plain rationals, sqrt(r), the golden ratio and
/// sqrt(2) - 1), and binary digit files. Instances are immutable and safe
/// to share across threads.
class RealOracle {
public:
    struct Quadratic {
        Rational a;
        Rational b;
        Rational r; // r >= 0
    };
    /// factor * (0.d1 d2 d3 ...)_2 + offset
    struct DigitFile {
        std::shared_ptr<const std::vector<std::uint8_t>> digits;
        std::string source;
        Integer factor = 1;
        Rational offset = 0;
    };

    static RealOracle rational(const Rational& x);
    static RealOracle sqrt(const Rational& r);
    static RealOracle golden_ratio();
    static RealOracle quadratic(const Rational& a, const Rational& b, const Rational& r);
    static RealOracle from_digits(const std::vector<std::uint8_t>& digits, std::string source = "inline");
    /// Parses the digit-file format: a "base 2" header line, then 0/1
    /// characters of the fractional part; whitespace is ignored.
    static RealOracle from_digit_text(const std::string& text, std::string source = "inline");
    static RealOracle from_digit_file(const std::string& path);

    /// Names accepted on the command line: "1/3", "0.25", "sqrt2", "sqrt2m1",
    /// "sqrt:5", "phi" / "golden", "file:<path>".
    static RealOracle parse(const std::string& text);

    /// Ball containing the real with radius <= 2^-g.
    /// Throws DIGIT_FILE_EXHAUSTED when a digit file is too short.
    Ball query(long g) const;

    /// Exact value when the real is known to be rational.
    std::optional<Rational> exact_rational() const;
    /// true / false when decidable from the descriptor; nullopt for digit files.
    std::optional<bool> is_rational() const;
    /// Available precision in bits (digit files), nullopt if unbounded.
    std::optional<long> max_precision() const;

    /// The oracle for n * x.
    RealOracle scaled(const Integer& n) const;
    /// The oracle for x + q.
    RealOracle shifted(const Rational& q) const;

    std::string describe() const;

private:
    using Descriptor = std::variant<Quadratic, DigitFile>;
    explicit RealOracle(Descriptor d) : desc_(std::move(d)) {}

    Descriptor desc_;
};

/// Any precision-indexed ball source (an oracle, n*x, u_n(x), ...).
using Approximator = std::function<Ball(long g)>;

inline Approximator approximator(const RealOracle& o)
{
    return [o](long g) { return o.query(g); };
}

struct DigitOptions {
    long precision_cap = 1024;
    /// Caller asserts the value is an exact dyadic rational; digits are then
    /// read off the exact value instead of separated by refinement.
    bool declared_dyadic = false;
};

/// First m binary digits of the fractional part.
///
/// Without declared_dyadic, refinement continues until the enclosure of the
/// fractional part lies strictly inside one open dyadic cell of width 2^-m;
/// AMBIGUOUS_DIGIT when the precision cap is reached first.
std::vector<std::uint8_t> binary_digits(const RealOracle& o, std::size_t m, const DigitOptions& opts = {});
std::vector<std::uint8_t> binary_digits(const Approximator& x, std::size_t m, const DigitOptions& opts = {},
    std::optional<long> available_precision = std::nullopt);

/// Integer value of the first m digits of {x}, i.e. floor({x} * 2^m), for
/// exactly known rationals.
Integer leading_digits_exact(const Rational& x, std::size_t m);

} // namespace udr
