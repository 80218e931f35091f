#pragma once

#include "udr/interval_set.hpp"
#include "udr/oracle.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace udr {

enum class OrbitMap { Doubling, Rotation };

std::string_view to_string(OrbitMap m);

struct OrbitSpec {
    OrbitMap map = OrbitMap::Doubling;
    RealOracle start = RealOracle::rational(0);
    /// Rotation angle; unused for doubling.
    std::optional<RealOracle> angle;
    /// Needed for angles whose rationality cannot be decided (digit files).
    bool declared_irrational = false;
    std::uint64_t length = 0;
    long precision = 64;
    /// Index of the first reported iterate: orbit[i] = T^{first_index + i}(x).
    std::uint64_t first_index = 0;

    static OrbitSpec doubling(const RealOracle& x, std::uint64_t N, long g, std::uint64_t first = 0);
    static OrbitSpec rotation(const RealOracle& x, const RealOracle& a, std::uint64_t N, long g,
        std::uint64_t first = 1);
};

struct OrbitPoint {
    /// Enclosure of the iterate, radius <= 2^-g. When `boundary` is set the
    /// ball straddles an integer and is reported unreduced around 0.
    Ball ball;
    bool boundary = false;
    std::optional<Rational> exact;
};

using Orbit = std::vector<OrbitPoint>;

/// frac(2^n x). Fails fast with DIGIT_FILE_EXHAUSTED when the start oracle
/// carries fewer than first_index + N + g bits.
Orbit doubling_orbit(const OrbitSpec& spec);
/// frac(x + n a). RATIONAL_ROTATION for rational or undeclared angles.
Orbit rotation_orbit(const OrbitSpec& spec);
Orbit generate_orbit(const OrbitSpec& spec);

/// floor(y 2^g) for the iterate, when the enclosure decides it.
std::optional<Integer> g_bit_prefix(const OrbitPoint& p, long g);
std::optional<Integer> g_bit_prefix(const Ball& frac_ball, long g);

struct FrequencyPoint {
    std::uint64_t N = 0;
    std::uint64_t hits_min = 0;
    std::uint64_t hits_max = 0;

    Rational frequency_min() const;
    Rational frequency_max() const;
};

/// Hit counts of the first N orbit points in A for each requested N.
std::vector<FrequencyPoint> birkhoff_frequency(const Orbit& orbit, const QIntervalSet& A,
    const std::vector<std::uint64_t>& prefixes);

/// step, center (decimal), radius exponent, boundary flag.
std::string orbit_csv(const Orbit& orbit, std::uint64_t first_index, int digits = 20);

} // namespace udr
