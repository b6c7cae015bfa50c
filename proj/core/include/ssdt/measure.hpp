#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ssdt {

/// Unvalidated atoms and weights as read from a file or built by a caller.
struct RawMeasure {
    std::vector<double> atoms;
    std::vector<double> weights;
};

/// A finitely supported probability measure on (0, ∞).
///
/// Atoms are strictly positive, pairwise distinct and stored in ascending
/// order; weights are strictly positive and sum to one. Exactly equal atoms
/// are merged on construction, near-equal atoms are kept apart.
class DiscreteMeasure {
public:
    /// Validates and normalizes; throws ssdt::Error on bad input.
    static DiscreteMeasure from_raw(const RawMeasure& raw);

    std::span<const double> atoms() const noexcept { return atoms_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    double max_atom() const noexcept { return atoms_.back(); }
    double mean() const noexcept;

    RawMeasure to_raw() const { return {atoms_, weights_}; }

    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
    DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights)
        : atoms_(std::move(atoms)), weights_(std::move(weights)) {}

    std::vector<double> atoms_;
    std::vector<double> weights_;
};

/// The population spectra of A (nu) and B (unu) together with the aspect
/// ratio gamma = lim k/l. Immutable once built.
class NoiseModel {
public:
    NoiseModel(DiscreteMeasure nu, DiscreteMeasure unu, double gamma);

    const DiscreteMeasure& nu() const noexcept { return nu_; }
    const DiscreteMeasure& unu() const noexcept { return unu_; }
    double gamma() const noexcept { return gamma_; }

    double a_star() const noexcept { return a_star_; }
    double b_star() const noexcept { return b_star_; }

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

private:
    DiscreteMeasure nu_;
    DiscreteMeasure unu_;
    double gamma_;
    double a_star_;
    double b_star_;
};

/// Weight sums within this distance of one are renormalized silently.
inline constexpr double kWeightSumTolerance = 1e-8;

NoiseModel validate(const RawMeasure& nu, const RawMeasure& unu, double gamma);

NoiseModel parse_model(std::string_view text);
NoiseModel parse_model(std::istream& in);
NoiseModel load_model(const std::filesystem::path& path);

/// JSON document `{"gamma": .., "nu": [{"atom": .., "weight": ..}, ..], "unu": [..]}`
/// with shortest round-trip formatting of every number.
std::string serialize_model(const NoiseModel& model);

}  // namespace ssdt
