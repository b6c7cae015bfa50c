#include "ssdt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ssdt/compensated_sum.hpp"
#include "ssdt/error.hpp"

namespace ssdt {
namespace {

double weight_sum(std::span<const double> weights) {
    CompensatedSum acc;
    for (double w : weights) acc += w;
    return acc.value();
}

// Divide by the sum unless it is already within a few ulps of one, then set
// the largest weight to one minus the compensated sum of the rest and nudge it
// ulp by ulp until the compensated total reads exactly one. The second stage
// depends only on the other weights, so running it twice changes nothing.
void renormalize(std::vector<double>& weights) {
    double total = weight_sum(weights);
    if (total == 1.0) return;
    if (std::fabs(total - 1.0) > 8.0 * std::numeric_limits<double>::epsilon()) {
        for (double& w : weights) w /= total;
    }
    const auto largest = std::max_element(weights.begin(), weights.end());
    CompensatedSum others;
    for (auto it = weights.begin(); it != weights.end(); ++it) {
        if (it != largest) others += *it;
    }
    *largest = 1.0 - others.value();
    for (int step = 0; step < 8; ++step) {
        total = weight_sum(weights);
        if (total == 1.0) return;
        *largest = std::nextafter(*largest, total < 1.0 ? 2.0 : 0.0);
    }
}

std::string describe(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

DiscreteMeasure DiscreteMeasure::from_raw(const RawMeasure& raw) {
    if (raw.atoms.empty() && raw.weights.empty()) {
        raise(ErrorCode::kEmptyMeasure, "measure has no atoms");
    }
    if (raw.atoms.size() != raw.weights.size()) {
        raise(ErrorCode::kLengthMismatch,
              std::to_string(raw.atoms.size()) + " atoms but " +
                  std::to_string(raw.weights.size()) + " weights");
    }
    for (std::size_t i = 0; i < raw.atoms.size(); ++i) {
        const double a = raw.atoms[i];
        if (!(a > 0.0) || !std::isfinite(a)) {
            raise(ErrorCode::kNonPositiveAtom,
                  "atom " + std::to_string(i) + " = " + describe(a) + " is not a positive finite number");
        }
        const double w = raw.weights[i];
        if (!(w > 0.0) || !std::isfinite(w)) {
            raise(ErrorCode::kNonPositiveWeight,
                  "weight " + std::to_string(i) + " = " + describe(w) + " is not a positive finite number");
        }
    }

    std::vector<std::size_t> order(raw.atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return raw.atoms[i] < raw.atoms[j]; });

    std::vector<double> atoms;
    std::vector<double> weights;
    atoms.reserve(order.size());
    weights.reserve(order.size());
    for (std::size_t idx : order) {
        if (!atoms.empty() && atoms.back() == raw.atoms[idx]) {
            weights.back() += raw.weights[idx];
        } else {
            atoms.push_back(raw.atoms[idx]);
            weights.push_back(raw.weights[idx]);
        }
    }

    const double total = weight_sum(weights);
    if (!(std::fabs(total - 1.0) <= kWeightSumTolerance)) {
        raise(ErrorCode::kWeightSumError, "weights sum to " + describe(total) + ", expected 1");
    }
    renormalize(weights);
    return DiscreteMeasure(std::move(atoms), std::move(weights));
}

double DiscreteMeasure::mean() const noexcept {
    CompensatedSum acc;
    for (std::size_t i = 0; i < atoms_.size(); ++i) acc += atoms_[i] * weights_[i];
    return acc.value();
}

NoiseModel::NoiseModel(DiscreteMeasure nu, DiscreteMeasure unu, double gamma)
    : nu_(std::move(nu)), unu_(std::move(unu)), gamma_(gamma) {
    if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) {
        raise(ErrorCode::kBadGamma, "gamma = " + describe(gamma_) + " must be positive and finite");
    }
    a_star_ = nu_.max_atom();
    b_star_ = unu_.max_atom();
}

NoiseModel validate(const RawMeasure& nu, const RawMeasure& unu, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        raise(ErrorCode::kBadGamma, "gamma = " + describe(gamma) + " must be positive and finite");
    }
    return NoiseModel(DiscreteMeasure::from_raw(nu), DiscreteMeasure::from_raw(unu), gamma);
}

namespace {

using nlohmann::json;

struct LineCol {
    std::size_t line = 1;
    std::size_t column = 1;
};

LineCol locate(std::string_view text, std::size_t byte) {
    LineCol lc;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++lc.line;
            lc.column = 1;
        } else {
            ++lc.column;
        }
    }
    return lc;
}

double number_field(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        raise(ErrorCode::kSyntaxError, where + ": missing field \"" + key + "\"");
    }
    if (!it->is_number()) {
        raise(ErrorCode::kSyntaxError, where + ": field \"" + key + "\" must be a number");
    }
    return it->get<double>();
}

RawMeasure measure_field(const json& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end()) {
        raise(ErrorCode::kSyntaxError, std::string("missing field \"") + key + "\"");
    }
    if (!it->is_array()) {
        raise(ErrorCode::kSyntaxError, std::string("field \"") + key + "\" must be a list");
    }
    RawMeasure raw;
    std::size_t index = 0;
    for (const auto& entry : *it) {
        const std::string where = std::string(key) + "[" + std::to_string(index++) + "]";
        if (!entry.is_object()) {
            raise(ErrorCode::kSyntaxError, where + ": expected an object with \"atom\" and \"weight\"");
        }
        raw.atoms.push_back(number_field(entry, "atom", where));
        raw.weights.push_back(number_field(entry, "weight", where));
    }
    return raw;
}

json measure_json(const DiscreteMeasure& m) {
    json list = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        list.push_back({{"atom", m.atoms()[i]}, {"weight", m.weights()[i]}});
    }
    return list;
}

}  // namespace

NoiseModel parse_model(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const LineCol lc = locate(text, e.byte == 0 ? 0 : e.byte - 1);
        raise(ErrorCode::kSyntaxError, "line " + std::to_string(lc.line) + ", column " +
                                           std::to_string(lc.column) + ": " + e.what());
    }
    if (!doc.is_object()) {
        raise(ErrorCode::kSyntaxError, "top level must be an object");
    }
    const double gamma = number_field(doc, "gamma", "document");
    const RawMeasure nu = measure_field(doc, "nu");
    const RawMeasure unu = measure_field(doc, "unu");
    return validate(nu, unu, gamma);
}

NoiseModel parse_model(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

NoiseModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorCode::kSyntaxError, "cannot open model file " + path.string());
    }
    return parse_model(in);
}

std::string serialize_model(const NoiseModel& model) {
    const json doc = {
        {"gamma", model.gamma()},
        {"nu", measure_json(model.nu())},
        {"unu", measure_json(model.unu())},
    };
    return doc.dump(2) + "\n";
}

}  // namespace ssdt
