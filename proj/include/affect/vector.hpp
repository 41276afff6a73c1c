#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "affect/error.hpp"

namespace affect {

enum class Dimension : std::size_t { pleasure = 0, arousal = 1, dominance = 2 };

inline constexpr std::array<Dimension, 3> kDimensions{Dimension::pleasure, Dimension::arousal,
                                                      Dimension::dominance};

constexpr std::string_view dimension_name(Dimension d) {
    switch (d) {
        case Dimension::pleasure: return "pleasure";
        case Dimension::arousal: return "arousal";
        case Dimension::dominance: return "dominance";
    }
    return "?";
}

inline constexpr double kScaleMin = -2.0;
inline constexpr double kScaleMax = 2.0;

// A point of the emotional vector space, ordered (pleasure, arousal, dominance).
// Ratings and averages stay inside [-2,2]^3; offsets between subgroups reuse the
// same triple but are unbounded.
struct EmotionalVector {
    double pleasure{0.0};
    double arousal{0.0};
    double dominance{0.0};

    constexpr double operator[](std::size_t i) const {
        return i == 0 ? pleasure : (i == 1 ? arousal : dominance);
    }
    constexpr double& operator[](std::size_t i) {
        return i == 0 ? pleasure : (i == 1 ? arousal : dominance);
    }
    constexpr double operator[](Dimension d) const { return (*this)[static_cast<std::size_t>(d)]; }

    constexpr EmotionalVector& operator+=(const EmotionalVector& o) {
        pleasure += o.pleasure;
        arousal += o.arousal;
        dominance += o.dominance;
        return *this;
    }
    constexpr EmotionalVector& operator-=(const EmotionalVector& o) {
        pleasure -= o.pleasure;
        arousal -= o.arousal;
        dominance -= o.dominance;
        return *this;
    }
    constexpr EmotionalVector& operator*=(double s) {
        pleasure *= s;
        arousal *= s;
        dominance *= s;
        return *this;
    }

    friend constexpr EmotionalVector operator+(EmotionalVector a, const EmotionalVector& b) { return a += b; }
    friend constexpr EmotionalVector operator-(EmotionalVector a, const EmotionalVector& b) { return a -= b; }
    friend constexpr EmotionalVector operator*(EmotionalVector a, double s) { return a *= s; }
    friend constexpr EmotionalVector operator*(double s, EmotionalVector a) { return a *= s; }
    friend constexpr EmotionalVector operator-(EmotionalVector a) { return a *= -1.0; }
    friend constexpr bool operator==(const EmotionalVector&, const EmotionalVector&) = default;

    constexpr std::array<double, 3> to_array() const { return {pleasure, arousal, dominance}; }
    static constexpr EmotionalVector from_array(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

    constexpr bool in_scale() const {
        for (std::size_t i = 0; i < 3; ++i)
            if ((*this)[i] < kScaleMin || (*this)[i] > kScaleMax) return false;
        return true;
    }
};

inline constexpr EmotionalVector kOrigo{};

constexpr double dot(const EmotionalVector& a, const EmotionalVector& b) {
    return a.pleasure * b.pleasure + a.arousal * b.arousal + a.dominance * b.dominance;
}

inline double norm(const EmotionalVector& v) { return std::sqrt(dot(v, v)); }

inline double euclidean_distance(const EmotionalVector& a, const EmotionalVector& b) { return norm(a - b); }

// Distance from origo is just the euclidean norm.
inline double origo_distance(const EmotionalVector& v) { return norm(v); }

inline double cosine_similarity(const EmotionalVector& a, const EmotionalVector& b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) throw UndefinedMeasureError("cosine similarity undefined for a zero vector");
    const double c = dot(a, b) / (na * nb);
    return c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
}

inline EmotionalVector average_vector(std::span<const EmotionalVector> vectors) {
    if (vectors.empty()) throw EmptySubgroupError("average of an empty set of vectors");
    EmotionalVector sum;
    for (const auto& v : vectors) sum += v;
    const auto n = static_cast<double>(vectors.size());
    return {sum.pleasure / n, sum.arousal / n, sum.dominance / n};
}

// Clamp to the display range [-2,2]^3. Returns true through `clamped` when any
// component was moved.
inline EmotionalVector clamp_to_scale(const EmotionalVector& v, bool* clamped = nullptr) {
    EmotionalVector out = v;
    bool moved = false;
    for (std::size_t i = 0; i < 3; ++i) {
        if (out[i] < kScaleMin) { out[i] = kScaleMin; moved = true; }
        if (out[i] > kScaleMax) { out[i] = kScaleMax; moved = true; }
    }
    if (clamped) *clamped = moved;
    return out;
}

// Raw SAM answers are recorded 1..5 left to right; the vector space uses -2..2.
constexpr int rescale_raw_answer(int raw) {
    if (raw < 1 || raw > 5) throw ValidationError("", "raw SAM answer out of range 1..5: " + std::to_string(raw));
    return raw - 3;
}

}  // namespace affect
