#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "ssdt/error.hpp"
#include "ssdt/measure.hpp"

using ssdt::ErrorCode;
using ssdt::RawMeasure;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ssdt::Error& e) {
        return e.code();
    }
    FAIL("expected ssdt::Error");
    return ErrorCode::kSyntaxError;
}

const RawMeasure kTwoAtoms{{2.0, 3.0}, {0.5, 0.5}};

}  // namespace

TEST_CASE("two point masses at 2 and 3 give a* = 3") {
    const ssdt::NoiseModel m = ssdt::validate(kTwoAtoms, kTwoAtoms, 0.5);
    CHECK(m.a_star() == 3.0);
    CHECK(m.b_star() == 3.0);
    CHECK(m.gamma() == 0.5);
    CHECK(m.nu().size() == 2);
}

TEST_CASE("exactly equal atoms are merged") {
    const ssdt::NoiseModel m = ssdt::validate(RawMeasure{{1.0, 1.0}, {0.4, 0.6}}, kTwoAtoms, 1.0);
    REQUIRE(m.nu().size() == 1);
    CHECK(m.nu().atoms()[0] == 1.0);
    CHECK(m.nu().weights()[0] == 1.0);
}

TEST_CASE("near-duplicate atoms are kept apart") {
    const double a = 1.0;
    const double b = std::nextafter(1.0, 2.0);
    const ssdt::NoiseModel m = ssdt::validate(RawMeasure{{b, a}, {0.5, 0.5}}, kTwoAtoms, 1.0);
    REQUIRE(m.nu().size() == 2);
    CHECK(m.nu().atoms()[0] == a);
    CHECK(m.nu().atoms()[1] == b);
}

TEST_CASE("atoms are stored ascending with their weights") {
    const ssdt::NoiseModel m = ssdt::validate(RawMeasure{{3.0, 1.0, 2.0}, {0.2, 0.5, 0.3}}, kTwoAtoms, 1.0);
    const auto atoms = m.nu().atoms();
    const auto weights = m.nu().weights();
    CHECK(atoms[0] == 1.0);
    CHECK(atoms[2] == 3.0);
    CHECK(weights[0] == doctest::Approx(0.5));
    CHECK(weights[2] == doctest::Approx(0.2));
    CHECK(m.a_star() == 3.0);
}

TEST_CASE("validation errors") {
    CHECK(code_of([] { ssdt::validate(RawMeasure{{1.0}, {0.5}}, kTwoAtoms, 1.0); }) == ErrorCode::kWeightSumError);
    CHECK(code_of([] { ssdt::validate(RawMeasure{{}, {}}, kTwoAtoms, 1.0); }) == ErrorCode::kEmptyMeasure);
    CHECK(code_of([] { ssdt::validate(RawMeasure{{1.0, 2.0}, {1.0}}, kTwoAtoms, 1.0); }) ==
          ErrorCode::kLengthMismatch);
    CHECK(code_of([] { ssdt::validate(RawMeasure{{0.0, 2.0}, {0.5, 0.5}}, kTwoAtoms, 1.0); }) ==
          ErrorCode::kNonPositiveAtom);
    CHECK(code_of([] { ssdt::validate(RawMeasure{{-1.0, 2.0}, {0.5, 0.5}}, kTwoAtoms, 1.0); }) ==
          ErrorCode::kNonPositiveAtom);
    CHECK(code_of([] { ssdt::validate(RawMeasure{{1.0, 2.0}, {1.1, -0.1}}, kTwoAtoms, 1.0); }) ==
          ErrorCode::kNonPositiveWeight);
    CHECK(code_of([] { ssdt::validate(kTwoAtoms, kTwoAtoms, 0.0); }) == ErrorCode::kBadGamma);
    CHECK(code_of([] { ssdt::validate(kTwoAtoms, kTwoAtoms, -1.0); }) == ErrorCode::kBadGamma);
    CHECK(code_of([] { ssdt::validate(kTwoAtoms, kTwoAtoms, std::nan("")); }) == ErrorCode::kBadGamma);
    CHECK(code_of([] { ssdt::validate(kTwoAtoms, kTwoAtoms, INFINITY); }) == ErrorCode::kBadGamma);
    CHECK(code_of([] { ssdt::validate(RawMeasure{{INFINITY}, {1.0}}, kTwoAtoms, 1.0); }) ==
          ErrorCode::kNonPositiveAtom);
}

TEST_CASE("small weight-sum deviations are renormalized, larger ones rejected") {
    const ssdt::NoiseModel m = ssdt::validate(RawMeasure{{1.0, 2.0}, {0.5 + 4e-9, 0.5}}, kTwoAtoms, 1.0);
    CHECK(m.nu().weights()[0] + m.nu().weights()[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(code_of([] { ssdt::validate(RawMeasure{{1.0, 2.0}, {0.5 + 2e-8, 0.5}}, kTwoAtoms, 1.0); }) ==
          ErrorCode::kWeightSumError);
}

TEST_CASE("parse a well-formed document") {
    const ssdt::NoiseModel m = ssdt::parse_model(R"({"gamma": 0.5,
        "nu": [{"atom": 2, "weight": 0.5}, {"atom": 3, "weight": 0.5}],
        "unu": [{"atom": 1, "weight": 1}]})");
    CHECK(m == ssdt::validate(kTwoAtoms, RawMeasure{{1.0}, {1.0}}, 0.5));
}

TEST_CASE("parse errors") {
    CHECK(code_of([] { ssdt::parse_model(R"({"nu": [{"atom": 1, "weight": 1}], "unu": [{"atom": 1, "weight": 1}]})"); }) ==
          ErrorCode::kSyntaxError);
    CHECK(code_of([] {
              ssdt::parse_model(
                  R"({"gamma": 1, "nu": [{"atom": 1, "weight": 1.1}, {"atom": 2, "weight": -0.1}], "unu": [{"atom": 1, "weight": 1}]})");
          }) == ErrorCode::kNonPositiveWeight);
    CHECK(code_of([] { ssdt::parse_model("{ not json"); }) == ErrorCode::kSyntaxError);
    CHECK(code_of([] { ssdt::parse_model(R"({"gamma": "x", "nu": [], "unu": []})"); }) == ErrorCode::kSyntaxError);
    CHECK(code_of([] { ssdt::parse_model(R"({"gamma": 1, "nu": [{"atom": 1}], "unu": [{"atom": 1, "weight": 1}]})"); }) ==
          ErrorCode::kSyntaxError);
    CHECK(code_of([] { ssdt::load_model("/nonexistent/model.json"); }) == ErrorCode::kSyntaxError);
}

TEST_CASE("syntax errors name the offending field") {
    try {
        ssdt::parse_model(R"({"gamma": 1, "nu": [{"atom": 1}], "unu": [{"atom": 1, "weight": 1}]})");
        FAIL("expected an error");
    } catch (const ssdt::Error& e) {
        CHECK(std::string(e.what()).find("weight") != std::string::npos);
    }
}

TEST_CASE("serialize then parse reproduces the model exactly") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const ssdt::NoiseModel m = i % 2 == 0 ? oracle::random_small_model(rng)
                                              : oracle::random_model(rng, 17, 9, 0.37, 1e-3, 1e3);
        const std::string text = ssdt::serialize_model(m);
        const ssdt::NoiseModel back = ssdt::parse_model(text);
        CHECK(back == m);
        CHECK(ssdt::serialize_model(back) == text);
    }
}

TEST_CASE("validation is idempotent") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
        const ssdt::NoiseModel m = oracle::random_model(rng, 1 + i % 7, 1 + i % 5, 0.5 + i * 0.01, 0.1, 10.0);
        const ssdt::NoiseModel again = ssdt::validate(m.nu().to_raw(), m.unu().to_raw(), m.gamma());
        CHECK(again == m);
    }
}

TEST_CASE("parse from a stream and from a file") {
    std::istringstream in(ssdt::serialize_model(ssdt::validate(kTwoAtoms, kTwoAtoms, 0.5)));
    const ssdt::NoiseModel from_stream = ssdt::parse_model(in);
    CHECK(from_stream == ssdt::load_model(oracle::data_path("two_atom.json")));
}

TEST_CASE("measure mean") {
    const ssdt::NoiseModel m = ssdt::validate(kTwoAtoms, RawMeasure{{1.0, 5.0}, {0.75, 0.25}}, 1.0);
    CHECK(m.nu().mean() == doctest::Approx(2.5));
    CHECK(m.unu().mean() == doctest::Approx(2.0));
}
